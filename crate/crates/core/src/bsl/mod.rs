//! Barred Simple Loop: visit every cell of a rectangle exactly once with a
//! closed loop that never crosses a bar.

mod dp;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::engine::{self, LoopGraph, LoopProblem, SearchOutcome};
use crate::grid::{CellCoord, CellLoop, CellMask, EdgeId, GridDims, GridError, LoopViolation, Side};
use crate::outcome::{Outcome, TimeLimit};

pub use dp::{solve_bsl_dp, solve_bsl_dp_with_cap, DpError, DEFAULT_PROFILE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BslError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("bar {0} must be an internal edge")]
    BoundaryBar(EdgeId),
    #[error("not cubic: {} cell(s) have four accessible neighbours, first at {}", .0.len(), .0[0])]
    NotCubic(Vec<CellCoord>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BslViolation {
    #[error(transparent)]
    Loop(#[from] LoopViolation),
    #[error("the loop crosses the bar at {0}")]
    BarCrossed(EdgeId),
}

/// A grid with bars on some internal edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BslPuzzle {
    dims: GridDims,
    bars: BTreeSet<EdgeId>,
}

impl BslPuzzle {
    pub fn new(dims: GridDims, bars: impl IntoIterator<Item = EdgeId>) -> Result<Self, BslError> {
        let bars: BTreeSet<EdgeId> = bars.into_iter().collect();
        for &bar in &bars {
            if !bar.is_internal() {
                return Err(BslError::BoundaryBar(bar));
            }
            dims.check_edge(bar)?;
        }
        Ok(BslPuzzle { dims, bars })
    }

    pub fn barless(dims: GridDims) -> Self {
        BslPuzzle { dims, bars: BTreeSet::new() }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn bars(&self) -> &BTreeSet<EdgeId> {
        &self.bars
    }

    pub fn is_barred(&self, edge: &EdgeId) -> bool {
        self.bars.contains(edge)
    }

    /// Neighbours reachable without crossing a bar, in canonical edge order.
    pub fn accessible(&self, cell: CellCoord) -> Vec<(CellCoord, EdgeId)> {
        let mut out: Vec<_> = Side::ALL
            .iter()
            .filter_map(|&s| self.dims.step(cell, s))
            .map(|n| (n, EdgeId::between(cell, n).expect("adjacent")))
            .filter(|(_, e)| !self.bars.contains(e))
            .collect();
        out.sort_by_key(|a| a.1);
        out
    }

    /// Sides of `cell` that are open to an in-grid neighbour.
    pub fn open_sides(&self, cell: CellCoord) -> Vec<Side> {
        Side::ALL
            .into_iter()
            .filter(|&s| self.dims.step(cell, s).is_some() && !self.bars.contains(&self.dims.edge_towards(cell, s)))
            .collect()
    }

    /// Unbarred internal edges in canonical order.
    pub fn open_edges(&self) -> Vec<EdgeId> {
        self.dims.internal_edges().into_iter().filter(|e| !self.bars.contains(e)).collect()
    }
}

/// A BSL puzzle in which no cell has four accessible neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicBslPuzzle {
    inner: BslPuzzle,
}

impl CubicBslPuzzle {
    pub fn new(inner: BslPuzzle) -> Result<Self, BslError> {
        check_cubic(&inner).map_err(BslError::NotCubic)?;
        Ok(CubicBslPuzzle { inner })
    }

    pub fn inner(&self) -> &BslPuzzle {
        &self.inner
    }

    pub fn into_inner(self) -> BslPuzzle {
        self.inner
    }

    pub fn dims(&self) -> GridDims {
        self.inner.dims
    }
}

pub fn verify_bsl(puzzle: &BslPuzzle, solution: &CellLoop) -> Result<(), BslViolation> {
    if let Some(bar) = solution.transitions.iter().find(|e| puzzle.bars.contains(e)) {
        return Err(BslViolation::BarCrossed(*bar));
    }
    crate::grid::validate_loop(puzzle.dims, solution, Some(&CellMask::full(puzzle.dims)))?;
    Ok(())
}

/// Cells with four accessible neighbours; `Ok` when there are none.
pub fn check_cubic(puzzle: &BslPuzzle) -> Result<(), Vec<CellCoord>> {
    let bad: Vec<CellCoord> = puzzle.dims.cells().filter(|&c| puzzle.accessible(c).len() > 3).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// True when both sides are odd, which rules out a Hamiltonian cycle.
pub fn parity_unsat(puzzle: &BslPuzzle) -> bool {
    puzzle.dims.width() % 2 == 1 && puzzle.dims.height() % 2 == 1
}

/// Cells with fewer than two accessible neighbours.
pub fn degenerate_cells(puzzle: &BslPuzzle) -> Vec<CellCoord> {
    puzzle.dims.cells().filter(|&c| puzzle.accessible(c).len() < 2).collect()
}

/// Exact search returning the least solution in canonical edge order.
pub fn solve_bsl_backtrack(puzzle: &BslPuzzle, limit: TimeLimit) -> Outcome<CellLoop> {
    let dims = puzzle.dims;
    let edges = puzzle.open_edges();
    let mut graph = LoopGraph::new(dims.cell_count());
    for e in &edges {
        let (a, b) = e.endpoints().expect("internal");
        graph.add_edge(dims.index(a), dims.index(b));
    }
    let mut problem = LoopProblem::new(graph);
    problem.required = (0..dims.cell_count() as u32).collect();
    match engine::solve(&problem, limit.start()) {
        SearchOutcome::Found(on) => {
            Outcome::Solved(CellLoop::new(edges.iter().zip(on).filter(|(_, b)| *b).map(|(e, _)| *e)))
        }
        SearchOutcome::Exhausted => Outcome::Unsat,
        SearchOutcome::Timeout => Outcome::Timeout,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(col: usize, row: usize) -> CellCoord {
        CellCoord::new(col, row)
    }

    fn dims(w: usize, h: usize) -> GridDims {
        GridDims::new(w, h).unwrap()
    }

    fn two_by_two_square() -> CellLoop {
        CellLoop::from_cycle(&[c(0, 0), c(1, 0), c(1, 1), c(0, 1)]).unwrap()
    }

    #[test]
    fn square_loop_verifies_and_bar_breaks_it() {
        let open = BslPuzzle::barless(dims(2, 2));
        assert_eq!(verify_bsl(&open, &two_by_two_square()), Ok(()));
        let barred = BslPuzzle::new(dims(2, 2), [EdgeId::horizontal(0, 0)]).unwrap();
        assert_eq!(verify_bsl(&barred, &two_by_two_square()), Err(BslViolation::BarCrossed(EdgeId::horizontal(0, 0))));
    }

    #[test]
    fn boundary_bars_are_rejected() {
        let bar = EdgeId::Boundary { cell: c(0, 0), side: Side::N };
        assert_eq!(BslPuzzle::new(dims(2, 2), [bar]), Err(BslError::BoundaryBar(bar)));
        assert!(matches!(BslPuzzle::new(dims(2, 2), [EdgeId::horizontal(1, 0)]), Err(BslError::Grid(_))));
    }

    #[test]
    fn cubicity() {
        assert_eq!(check_cubic(&BslPuzzle::barless(dims(3, 3))), Err(vec![c(1, 1)]));
        assert_eq!(check_cubic(&BslPuzzle::barless(dims(2, 9))), Ok(()));
        assert!(CubicBslPuzzle::new(BslPuzzle::barless(dims(4, 4))).is_err());
    }

    #[test]
    fn parity() {
        assert!(parity_unsat(&BslPuzzle::barless(dims(3, 3))));
        assert!(!parity_unsat(&BslPuzzle::barless(dims(2, 3))));
        assert!(parity_unsat(&BslPuzzle::barless(dims(5, 7))));
    }

    #[test]
    fn degenerate() {
        assert_eq!(degenerate_cells(&BslPuzzle::barless(dims(1, 1))), vec![c(0, 0)]);
        // centre cell of 3x3 with three of its four edges barred
        let p =
            BslPuzzle::new(dims(3, 3), [EdgeId::horizontal(0, 1), EdgeId::horizontal(1, 1), EdgeId::vertical(1, 0)])
                .unwrap();
        assert_eq!(degenerate_cells(&p), vec![c(1, 1)]);
    }

    #[test]
    fn backtracking_small_cases() {
        assert_eq!(
            solve_bsl_backtrack(&BslPuzzle::barless(dims(2, 2)), TimeLimit::UNLIMITED),
            Outcome::Solved(two_by_two_square())
        );
        assert_eq!(solve_bsl_backtrack(&BslPuzzle::barless(dims(3, 3)), TimeLimit::UNLIMITED), Outcome::Unsat);
        let p = BslPuzzle::new(dims(2, 2), [EdgeId::vertical(1, 0)]).unwrap();
        assert_eq!(solve_bsl_backtrack(&p, TimeLimit::UNLIMITED), Outcome::Unsat);
        assert_eq!(solve_bsl_backtrack(&BslPuzzle::barless(dims(1, 1)), TimeLimit::UNLIMITED), Outcome::Unsat);
    }
}
