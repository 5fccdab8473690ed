//! Broken-profile dynamic programming deciding whether a barred grid has a
//! Hamiltonian cycle.
//!
//! The profile holds `w + 1` plugs of two bits each (`0` none, `1` opening,
//! `2` closing bracket). Before cell `(c, r)` is processed, slot `c` carries
//! the plug entering from the left and slot `c + 1` the plug entering from
//! above; slots left of `c` are downward plugs of the current row and slots
//! right of `c + 1` downward plugs of the previous row.

use std::collections::HashSet;

use thiserror::Error;

use super::BslPuzzle;
use crate::grid::{CellCoord, EdgeId};

pub const DEFAULT_PROFILE_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("profile width {width} exceeds the cap of {cap}")]
    ProfileTooWide { width: usize, cap: usize },
}

pub fn solve_bsl_dp(puzzle: &BslPuzzle) -> Result<bool, DpError> {
    solve_bsl_dp_with_cap(puzzle, DEFAULT_PROFILE_CAP)
}

pub fn solve_bsl_dp_with_cap(puzzle: &BslPuzzle, cap: usize) -> Result<bool, DpError> {
    let dims = puzzle.dims();
    let transpose = dims.width() > dims.height();
    let (w, h) = if transpose { (dims.height(), dims.width()) } else { (dims.width(), dims.height()) };
    if w > cap {
        return Err(DpError::ProfileTooWide { width: w, cap });
    }
    if w < 2 || (w * h) % 2 == 1 {
        return Ok(false);
    }
    // open(c, r, right?) in the possibly transposed frame
    let open = |c: usize, r: usize, right: bool| -> bool {
        let (nc, nr) = if right { (c + 1, r) } else { (c, r + 1) };
        if nc >= w || nr >= h {
            return false;
        }
        let (a, b) = if transpose {
            (CellCoord::new(r, c), CellCoord::new(nr, nc))
        } else {
            (CellCoord::new(c, r), CellCoord::new(nc, nr))
        };
        !puzzle.is_barred(&EdgeId::between(a, b).expect("adjacent"))
    };

    let get = |s: u64, i: usize| -> u64 { (s >> (2 * i)) & 3 };
    let put = |s: u64, i: usize, v: u64| -> u64 { (s & !(3u64 << (2 * i))) | (v << (2 * i)) };
    // partner of the bracket at slot i
    let partner = |s: u64, i: usize| -> usize {
        let mut depth = 0i32;
        if get(s, i) == 1 {
            for j in i..=w {
                match get(s, j) {
                    1 => depth += 1,
                    2 => {
                        depth -= 1;
                        if depth == 0 {
                            return j;
                        }
                    }
                    _ => {}
                }
            }
        } else {
            for j in (0..=i).rev() {
                match get(s, j) {
                    2 => depth += 1,
                    1 => {
                        depth -= 1;
                        if depth == 0 {
                            return j;
                        }
                    }
                    _ => {}
                }
            }
        }
        unreachable!("unbalanced profile")
    };

    let mut states: HashSet<u64> = HashSet::from([0]);
    for r in 0..h {
        for c in 0..w {
            let last = r == h - 1 && c == w - 1;
            let can_right = open(c, r, true);
            let can_down = open(c, r, false);
            let mut next: HashSet<u64> = HashSet::with_capacity(states.len() * 2);
            for &s in &states {
                let left = get(s, c);
                let up = get(s, c + 1);
                let base = put(put(s, c, 0), c + 1, 0);
                match (left, up) {
                    (0, 0) => {
                        if can_right && can_down {
                            next.insert(put(put(base, c, 1), c + 1, 2));
                        }
                    }
                    (x, 0) | (0, x) => {
                        if can_right {
                            next.insert(put(base, c + 1, x));
                        }
                        if can_down {
                            next.insert(put(base, c, x));
                        }
                    }
                    (1, 1) => {
                        let m = partner(s, c + 1);
                        next.insert(put(base, m, 1));
                    }
                    (2, 2) => {
                        let m = partner(s, c);
                        next.insert(put(base, m, 2));
                    }
                    (2, 1) => {
                        next.insert(base);
                    }
                    (1, 2) => {
                        if last && base == 0 {
                            return Ok(true);
                        }
                    }
                    _ => unreachable!(),
                }
            }
            states = next;
        }
        // move to the next row: no plug may leave through the right border
        states = states.into_iter().filter(|&s| get(s, w) == 0).map(|s| s << 2).collect();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDims;

    fn barless(w: usize, h: usize) -> BslPuzzle {
        BslPuzzle::barless(GridDims::new(w, h).unwrap())
    }

    #[test]
    fn small_boards() {
        assert_eq!(solve_bsl_dp(&barless(2, 2)), Ok(true));
        assert_eq!(solve_bsl_dp(&barless(3, 3)), Ok(false));
        assert_eq!(solve_bsl_dp(&barless(1, 4)), Ok(false));
        assert_eq!(solve_bsl_dp(&barless(4, 2)), Ok(true));
        assert_eq!(solve_bsl_dp(&barless(3, 4)), Ok(true));
        assert_eq!(solve_bsl_dp(&barless(1, 1)), Ok(false));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(solve_bsl_dp(&barless(15, 15)), Err(DpError::ProfileTooWide { width: 15, cap: 14 }));
        assert_eq!(solve_bsl_dp(&barless(14, 3)), Ok(true));
    }

    #[test]
    fn bar_splitting_a_2xn_board() {
        // a bar on the rung between the two columns is harmless, one on a rail is fatal
        let dims = GridDims::new(2, 4).unwrap();
        let rung = BslPuzzle::new(dims, [EdgeId::horizontal(0, 1)]).unwrap();
        assert_eq!(solve_bsl_dp(&rung), Ok(true));
        let rail = BslPuzzle::new(dims, [EdgeId::vertical(0, 1)]).unwrap();
        assert_eq!(solve_bsl_dp(&rail), Ok(false));
    }
}
