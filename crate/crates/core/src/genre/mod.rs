//! Target genres: puzzle types, rule verifiers and exact solvers.
//!
//! Masyu, Yajilin and Simple Loop solutions are loops over cell centres.
//! Slitherlink solutions are loops over the `(W+1)×(H+1)` dot lattice, stored
//! the same way with dots playing the role of cells.

mod reduce;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{validate_loop, CellCoord, CellLoop, CellMask, Color, EdgeId, GridDims, LoopViolation, Side};

pub use reduce::{lift_to_genre, reduce_to_genre, GenreLiftError, GenreManifest, ReduceError, TilePlacement};
pub use solve::{solve_genre, solve_genre_with, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Genre {
    Slitherlink,
    Masyu,
    Yajilin,
    SimpleLoop,
}

impl Genre {
    pub const ALL: [Genre; 4] = [Genre::Slitherlink, Genre::Masyu, Genre::Yajilin, Genre::SimpleLoop];

    pub fn name(self) -> &'static str {
        match self {
            Genre::Slitherlink => "slitherlink",
            Genre::Masyu => "masyu",
            Genre::Yajilin => "yajilin",
            Genre::SimpleLoop => "simple-loop",
        }
    }

    /// Whether solutions live on the dot lattice rather than on cells.
    pub fn uses_dots(self) -> bool {
        self == Genre::Slitherlink
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Genre {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Genre::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| format!("unknown genre `{s}`"))
    }
}

impl Serialize for Genre {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Genre {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A count of shaded cells in one direction from a grey cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrowClue {
    pub count: u32,
    pub direction: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenrePuzzle {
    Slitherlink { dims: GridDims, clues: BTreeMap<CellCoord, u8> },
    Masyu { dims: GridDims, pearls: BTreeMap<CellCoord, Color> },
    Yajilin { dims: GridDims, grey: BTreeMap<CellCoord, Option<ArrowClue>> },
    SimpleLoop { dims: GridDims, shaded: BTreeSet<CellCoord> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("cell {cell} is outside the {dims} grid")]
    OutOfBounds { cell: CellCoord, dims: GridDims },
    #[error("slitherlink clue {value} at {cell} is not in 0..=3")]
    ClueRange { cell: CellCoord, value: u8 },
}

impl GenrePuzzle {
    pub fn genre(&self) -> Genre {
        match self {
            GenrePuzzle::Slitherlink { .. } => Genre::Slitherlink,
            GenrePuzzle::Masyu { .. } => Genre::Masyu,
            GenrePuzzle::Yajilin { .. } => Genre::Yajilin,
            GenrePuzzle::SimpleLoop { .. } => Genre::SimpleLoop,
        }
    }

    /// Board size in cells.
    pub fn dims(&self) -> GridDims {
        match self {
            GenrePuzzle::Slitherlink { dims, .. }
            | GenrePuzzle::Masyu { dims, .. }
            | GenrePuzzle::Yajilin { dims, .. }
            | GenrePuzzle::SimpleLoop { dims, .. } => *dims,
        }
    }

    /// Grid the solution loop lives on: dots for slitherlink, cells otherwise.
    pub fn lattice(&self) -> GridDims {
        let d = self.dims();
        if self.genre().uses_dots() {
            GridDims::new(d.width() + 1, d.height() + 1).expect("dot lattice of a valid grid")
        } else {
            d
        }
    }

    /// Checks clue ranges and positions.
    pub fn validate(&self) -> Result<(), PuzzleError> {
        let dims = self.dims();
        let check = |cell: &CellCoord| {
            if dims.contains(*cell) {
                Ok(())
            } else {
                Err(PuzzleError::OutOfBounds { cell: *cell, dims })
            }
        };
        match self {
            GenrePuzzle::Slitherlink { clues, .. } => {
                for (cell, &value) in clues {
                    check(cell)?;
                    if value > 3 {
                        return Err(PuzzleError::ClueRange { cell: *cell, value });
                    }
                }
            }
            GenrePuzzle::Masyu { pearls, .. } => pearls.keys().try_for_each(check)?,
            GenrePuzzle::Yajilin { grey, .. } => grey.keys().try_for_each(check)?,
            GenrePuzzle::SimpleLoop { shaded, .. } => shaded.iter().try_for_each(check)?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenreViolation {
    #[error(transparent)]
    Loop(#[from] LoopViolation),
    #[error("clue {expected} at {cell} sees {found} loop edges")]
    ClueCount { cell: CellCoord, expected: u8, found: usize },
    #[error("pearl at {0} is not on the loop")]
    PearlMissed(CellCoord),
    #[error("black pearl at {0} does not turn")]
    BlackGoesStraight(CellCoord),
    #[error("the loop turns next to the black pearl at {0}")]
    BlackNeighbourTurns(CellCoord),
    #[error("white pearl at {0} is turned on")]
    WhiteTurns(CellCoord),
    #[error("the loop goes straight on both sides of the white pearl at {0}")]
    WhiteNoTurn(CellCoord),
    #[error("grey cell {0} is on the loop")]
    GreyVisited(CellCoord),
    #[error("shaded cells {0} and {1} are adjacent")]
    AdjacentShaded(CellCoord, CellCoord),
    #[error("arrow at {cell} expects {expected} shaded cells, found {found}")]
    ArrowCount { cell: CellCoord, expected: u32, found: u32 },
}

/// Loop edges incident to the four sides of a cell on the dot lattice.
pub fn cell_edges(cell: CellCoord) -> [EdgeId; 4] {
    let (c, r) = (cell.col, cell.row);
    [EdgeId::horizontal(c, r), EdgeId::vertical(c + 1, r), EdgeId::horizontal(c, r + 1), EdgeId::vertical(c, r)]
}

/// Sides of `cell` through which the loop passes.
fn loop_sides(dims: GridDims, tour: &CellLoop, cell: CellCoord) -> Vec<Side> {
    Side::ALL
        .into_iter()
        .filter(|&s| dims.step(cell, s).is_some() && tour.contains(&dims.edge_towards(cell, s)))
        .collect()
}

fn goes_straight(dims: GridDims, tour: &CellLoop, cell: CellCoord) -> bool {
    let sides = loop_sides(dims, tour, cell);
    sides.len() == 2 && sides[0].opposite() == sides[1]
}

/// Cells the loop leaves unvisited, minus `grey`, form the shading.
pub fn yajilin_shading(dims: GridDims, grey: &BTreeMap<CellCoord, Option<ArrowClue>>, tour: &CellLoop) -> CellMask {
    let visited = tour.visited(dims);
    let mut shaded = CellMask::empty(dims);
    for cell in dims.cells() {
        if !visited.get(cell) && !grey.contains_key(&cell) {
            shaded.set(cell, true);
        }
    }
    shaded
}

pub fn verify_genre(puzzle: &GenrePuzzle, tour: &CellLoop) -> Result<(), GenreViolation> {
    match puzzle {
        GenrePuzzle::Slitherlink { clues, .. } => {
            validate_loop(puzzle.lattice(), tour, None)?;
            for (&cell, &expected) in clues {
                let found = cell_edges(cell).iter().filter(|e| tour.contains(e)).count();
                if found != expected as usize {
                    return Err(GenreViolation::ClueCount { cell, expected, found });
                }
            }
        }
        GenrePuzzle::Masyu { dims, pearls } => {
            validate_loop(*dims, tour, None)?;
            let visited = tour.visited(*dims);
            for (&cell, &color) in pearls {
                if !visited.get(cell) {
                    return Err(GenreViolation::PearlMissed(cell));
                }
                let sides = loop_sides(*dims, tour, cell);
                let straight = sides[0].opposite() == sides[1];
                match color {
                    Color::Black => {
                        if straight {
                            return Err(GenreViolation::BlackGoesStraight(cell));
                        }
                        for s in sides {
                            let next = dims.step(cell, s).expect("loop edge");
                            if !goes_straight(*dims, tour, next) {
                                return Err(GenreViolation::BlackNeighbourTurns(cell));
                            }
                        }
                    }
                    Color::White => {
                        if !straight {
                            return Err(GenreViolation::WhiteTurns(cell));
                        }
                        let both_straight =
                            sides.iter().all(|&s| goes_straight(*dims, tour, dims.step(cell, s).expect("loop edge")));
                        if both_straight {
                            return Err(GenreViolation::WhiteNoTurn(cell));
                        }
                    }
                }
            }
        }
        GenrePuzzle::Yajilin { dims, grey } => {
            validate_loop(*dims, tour, None)?;
            let visited = tour.visited(*dims);
            if let Some(&cell) = grey.keys().find(|&&c| visited.get(c)) {
                return Err(GenreViolation::GreyVisited(cell));
            }
            let shaded = yajilin_shading(*dims, grey, tour);
            for cell in shaded.iter() {
                for s in [Side::E, Side::S] {
                    if let Some(n) = dims.step(cell, s) {
                        if shaded.get(n) {
                            return Err(GenreViolation::AdjacentShaded(cell, n));
                        }
                    }
                }
            }
            for (&cell, clue) in grey {
                let Some(clue) = clue else { continue };
                let mut found = 0;
                let mut at = cell;
                while let Some(n) = dims.step(at, clue.direction) {
                    found += shaded.get(n) as u32;
                    at = n;
                }
                if found != clue.count {
                    return Err(GenreViolation::ArrowCount { cell, expected: clue.count, found });
                }
            }
        }
        GenrePuzzle::SimpleLoop { dims, shaded } => {
            let mut must = CellMask::full(*dims);
            for &c in shaded {
                must.set(c, false);
            }
            validate_loop(*dims, tour, Some(&must))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::{Outcome, TimeLimit};

    fn dims(w: usize, h: usize) -> GridDims {
        GridDims::new(w, h).unwrap()
    }

    fn c(col: usize, row: usize) -> CellCoord {
        CellCoord::new(col, row)
    }

    #[test]
    fn empty_loop_is_rejected() {
        let p = GenrePuzzle::Slitherlink { dims: dims(2, 2), clues: BTreeMap::new() };
        assert_eq!(verify_genre(&p, &CellLoop::default()), Err(GenreViolation::Loop(LoopViolation::Empty)));
    }

    #[test]
    fn simple_loop_small_cases() {
        let p = GenrePuzzle::SimpleLoop { dims: dims(2, 2), shaded: BTreeSet::new() };
        let square = CellLoop::from_cycle(&[c(0, 0), c(1, 0), c(1, 1), c(0, 1)]).unwrap();
        assert_eq!(solve_genre(&p, TimeLimit::UNLIMITED), Outcome::Solved(square));
        let p = GenrePuzzle::SimpleLoop { dims: dims(1, 3), shaded: BTreeSet::new() };
        assert_eq!(solve_genre(&p, TimeLimit::UNLIMITED), Outcome::Unsat);
    }

    #[test]
    fn masyu_rules() {
        // 3x3 ring: corners turn, edge midpoints go straight
        let ring =
            CellLoop::from_cycle(&[c(0, 0), c(1, 0), c(2, 0), c(2, 1), c(2, 2), c(1, 2), c(0, 2), c(0, 1)]).unwrap();
        let black = GenrePuzzle::Masyu { dims: dims(3, 3), pearls: [(c(0, 0), Color::Black)].into() };
        assert_eq!(verify_genre(&black, &ring), Ok(()));
        let white = GenrePuzzle::Masyu { dims: dims(3, 3), pearls: [(c(1, 0), Color::White)].into() };
        assert_eq!(verify_genre(&white, &ring), Ok(()));
        let bad = GenrePuzzle::Masyu { dims: dims(3, 3), pearls: [(c(0, 0), Color::White)].into() };
        assert_eq!(verify_genre(&bad, &ring), Err(GenreViolation::WhiteTurns(c(0, 0))));
        let missed = GenrePuzzle::Masyu { dims: dims(3, 3), pearls: [(c(1, 1), Color::Black)].into() };
        assert_eq!(verify_genre(&missed, &ring), Err(GenreViolation::PearlMissed(c(1, 1))));
    }

    #[test]
    fn yajilin_shading_rules() {
        // 3x2 board, loop round the left 2x2 block leaves the right column
        let tour = CellLoop::from_cycle(&[c(0, 0), c(1, 0), c(1, 1), c(0, 1)]).unwrap();
        let p = GenrePuzzle::Yajilin { dims: dims(3, 2), grey: BTreeMap::new() };
        assert_eq!(verify_genre(&p, &tour), Err(GenreViolation::AdjacentShaded(c(2, 0), c(2, 1))));
        let clue = ArrowClue { count: 1, direction: Side::E };
        let p = GenrePuzzle::Yajilin { dims: dims(3, 2), grey: [(c(2, 0), None)].into() };
        assert_eq!(verify_genre(&p, &tour), Ok(()));
        let p = GenrePuzzle::Yajilin { dims: dims(3, 2), grey: [(c(2, 0), Some(clue))].into() };
        assert_eq!(verify_genre(&p, &tour), Err(GenreViolation::ArrowCount { cell: c(2, 0), expected: 1, found: 0 }));
    }
}
