//! Translation of genre puzzles into loop-engine problems.

use std::collections::{BTreeMap, BTreeSet};

use super::{cell_edges, GenrePuzzle};
use crate::engine::{self, Arm, Branching, LoopGraph, LoopProblem, Rule, SearchOutcome};
use crate::grid::{CellCoord, CellLoop, Color, EdgeId, GridDims, Side};
use crate::outcome::{Outcome, TimeLimit};

/// Extra knobs for [`solve_genre_with`].
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub limit: TimeLimit,
    /// Lattice edges pinned on (`true`) or off the loop before search.
    pub fixed: BTreeMap<EdgeId, bool>,
    /// Any solution will do: branch on path ends instead of canonical order.
    pub any_solution: bool,
}

/// Exact search returning the least solution in canonical edge order.
pub fn solve_genre(puzzle: &GenrePuzzle, limit: TimeLimit) -> Outcome<CellLoop> {
    solve_genre_with(puzzle, &SolveOptions { limit, ..Default::default() })
}

pub fn solve_genre_with(puzzle: &GenrePuzzle, options: &SolveOptions) -> Outcome<CellLoop> {
    let lattice = puzzle.lattice();
    let blocked: BTreeSet<CellCoord> = match puzzle {
        GenrePuzzle::Yajilin { grey, .. } => grey.keys().copied().collect(),
        _ => BTreeSet::new(),
    };
    let edges: Vec<EdgeId> =
        lattice.internal_edges().into_iter().filter(|e| e.cells().iter().all(|c| !blocked.contains(c))).collect();
    let index: BTreeMap<EdgeId, u32> = edges.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
    let mut graph = LoopGraph::new(lattice.cell_count());
    for e in &edges {
        let (a, b) = e.endpoints().expect("internal");
        graph.add_edge(lattice.index(a), lattice.index(b));
    }
    let mut problem = LoopProblem::new(graph);
    if options.any_solution {
        problem.branching = Branching::PathEnds;
    }
    let vertex = |c: CellCoord| lattice.index(c) as u32;

    match puzzle {
        GenrePuzzle::Slitherlink { clues, .. } => {
            for (&cell, &target) in clues {
                let sides = cell_edges(cell).iter().filter_map(|e| index.get(e).copied()).collect();
                problem.rules.push(Rule::EdgeSum { edges: sides, target });
            }
        }
        GenrePuzzle::Masyu { dims, pearls } => {
            for (&cell, &color) in pearls {
                let arms = Side::ALL.map(|s| arm(*dims, &index, cell, s));
                problem.required.push(vertex(cell));
                problem.rules.push(match color {
                    Color::Black => Rule::BlackPearl { vertex: vertex(cell), arms },
                    Color::White => Rule::WhitePearl { vertex: vertex(cell), arms },
                });
            }
        }
        GenrePuzzle::Yajilin { dims, grey } => {
            problem.excluded = grey.keys().map(|&c| vertex(c)).collect();
            for e in &edges {
                let (a, b) = e.endpoints().expect("internal");
                problem.rules.push(Rule::NotBothUnvisited { a: vertex(a), b: vertex(b) });
            }
            for (&cell, clue) in grey {
                let Some(clue) = clue else { continue };
                let mut ray = Vec::new();
                let mut at = cell;
                while let Some(next) = dims.step(at, clue.direction) {
                    if !grey.contains_key(&next) {
                        ray.push(vertex(next));
                    }
                    at = next;
                }
                problem.rules.push(Rule::UnvisitedCount { vertices: ray, target: clue.count });
            }
        }
        GenrePuzzle::SimpleLoop { dims, shaded } => {
            for cell in dims.cells() {
                if shaded.contains(&cell) {
                    problem.excluded.push(vertex(cell));
                } else {
                    problem.required.push(vertex(cell));
                }
            }
        }
    }

    for (edge, &on) in &options.fixed {
        match index.get(edge) {
            Some(&i) => problem.fixed.push((i, on)),
            None if on => return Outcome::Unsat,
            None => {}
        }
    }

    match engine::solve(&problem, options.limit.start()) {
        SearchOutcome::Found(on) => {
            Outcome::Solved(CellLoop::new(edges.iter().zip(on).filter(|(_, b)| *b).map(|(e, _)| *e)))
        }
        SearchOutcome::Exhausted => Outcome::Unsat,
        SearchOutcome::Timeout => Outcome::Timeout,
    }
}

fn arm(dims: GridDims, index: &BTreeMap<EdgeId, u32>, cell: CellCoord, side: Side) -> Arm {
    let Some(next) = dims.step(cell, side) else {
        return Arm::default();
    };
    let first = index.get(&dims.edge_towards(cell, side)).copied();
    let second = dims.step(next, side).and_then(|_| index.get(&dims.edge_towards(next, side)).copied());
    Arm { first, second }
}
