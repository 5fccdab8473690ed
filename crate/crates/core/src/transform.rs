//! The eight symmetries of a rectangle/square used to place gadget tiles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::grid::{CellCoord, EdgeId, Side};

/// A mirror across the vertical axis (optional) followed by `quarter_turns`
/// clockwise quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transform {
    mirror: bool,
    quarter_turns: u8,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { mirror: false, quarter_turns: 0 };
    pub const R90: Transform = Transform { mirror: false, quarter_turns: 1 };
    pub const R180: Transform = Transform { mirror: false, quarter_turns: 2 };
    pub const R270: Transform = Transform { mirror: false, quarter_turns: 3 };
    pub const FX: Transform = Transform { mirror: true, quarter_turns: 0 };
    pub const FY: Transform = Transform { mirror: true, quarter_turns: 2 };
    pub const FX_R90: Transform = Transform { mirror: true, quarter_turns: 1 };
    pub const FX_R270: Transform = Transform { mirror: true, quarter_turns: 3 };

    /// All eight, in canonical order.
    pub const ALL: [Transform; 8] = [
        Transform::IDENTITY,
        Transform::R90,
        Transform::R180,
        Transform::R270,
        Transform::FX,
        Transform::FY,
        Transform::FX_R90,
        Transform::FX_R270,
    ];

    pub const ROTATIONS: [Transform; 4] = [Transform::IDENTITY, Transform::R90, Transform::R180, Transform::R270];

    pub fn is_mirror(&self) -> bool {
        self.mirror
    }

    /// True when the transform swaps width and height.
    pub fn swaps_axes(&self) -> bool {
        self.quarter_turns % 2 == 1
    }

    /// Maps a point of a `width`×`height` box.
    pub fn apply(&self, x: usize, y: usize, width: usize, height: usize) -> (usize, usize) {
        let (mut x, mut y, mut w, mut h) = (x, y, width, height);
        if self.mirror {
            x = w - 1 - x;
        }
        for _ in 0..self.quarter_turns {
            let nx = h - 1 - y;
            let ny = x;
            x = nx;
            y = ny;
            std::mem::swap(&mut w, &mut h);
        }
        (x, y)
    }

    pub fn apply_side(&self, side: Side) -> Side {
        let mut s = side;
        if self.mirror {
            s = match s {
                Side::E => Side::W,
                Side::W => Side::E,
                other => other,
            };
        }
        for _ in 0..self.quarter_turns {
            s = s.clockwise();
        }
        s
    }

    pub fn apply_cell(&self, cell: CellCoord, width: usize, height: usize) -> CellCoord {
        let (col, row) = self.apply(cell.col, cell.row, width, height);
        CellCoord::new(col, row)
    }

    /// Maps an edge of a `width`×`height` box, keeping boundary edges on the
    /// boundary.
    pub fn apply_edge(&self, edge: EdgeId, width: usize, height: usize) -> EdgeId {
        match edge {
            EdgeId::Boundary { cell, side } => {
                EdgeId::Boundary { cell: self.apply_cell(cell, width, height), side: self.apply_side(side) }
            }
            EdgeId::Internal { .. } => {
                let (a, b) = edge.endpoints().expect("internal");
                EdgeId::between(self.apply_cell(a, width, height), self.apply_cell(b, width, height))
                    .expect("transforms preserve adjacency")
            }
        }
    }

    /// Dimensions of the image of a `width`×`height` box.
    pub fn image_dims(&self, width: usize, height: usize) -> (usize, usize) {
        if self.swaps_axes() {
            (height, width)
        } else {
            (width, height)
        }
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: Transform) -> Transform {
        // Rotation-then-mirror equals mirror-then-inverse-rotation.
        let (mirror, turns) = if then.mirror {
            (!self.mirror, (4 - self.quarter_turns % 4) % 4 + then.quarter_turns)
        } else {
            (self.mirror, self.quarter_turns + then.quarter_turns)
        };
        Transform { mirror, quarter_turns: turns % 4 }
    }

    pub fn inverse(&self) -> Transform {
        if self.mirror {
            *self
        } else {
            Transform { mirror: false, quarter_turns: (4 - self.quarter_turns) % 4 }
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.mirror, self.quarter_turns) {
            (false, 0) => "r0",
            (false, 1) => "r90",
            (false, 2) => "r180",
            (false, 3) => "r270",
            (true, 0) => "fx",
            (true, 2) => "fy",
            (true, 1) => "fx.r90",
            (true, 3) => "fx.r270",
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "fxy" {
            return Ok(Transform::R180);
        }
        Transform::ALL.iter().copied().find(|t| t.name() == s).ok_or_else(|| format!("unknown transform `{s}`"))
    }
}

impl Serialize for Transform {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Transform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_all(t: Transform, n: usize) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for y in 0..n {
            for x in 0..n {
                v.push(t.apply(x, y, n, n));
            }
        }
        v
    }

    #[test]
    fn names_round_trip() {
        for t in Transform::ALL {
            assert_eq!(t.name().parse::<Transform>().unwrap(), t);
        }
        assert_eq!("fxy".parse::<Transform>().unwrap(), Transform::R180);
    }

    #[test]
    fn quarter_turn_moves_top_left_to_top_right() {
        assert_eq!(Transform::R90.apply(0, 0, 5, 5), (4, 0));
        assert_eq!(Transform::R90.apply_side(Side::N), Side::E);
        assert_eq!(Transform::FY.apply(1, 0, 3, 3), (1, 2));
        assert_eq!(Transform::FY.apply_side(Side::N), Side::S);
    }

    #[test]
    fn composition_and_inverse_agree_with_pointwise_application() {
        let n = 4;
        for a in Transform::ALL {
            for b in Transform::ALL {
                let composed = a.then(b);
                for y in 0..n {
                    for x in 0..n {
                        let (x1, y1) = a.apply(x, y, n, n);
                        assert_eq!(b.apply(x1, y1, n, n), composed.apply(x, y, n, n), "{a} then {b}");
                    }
                }
                for s in Side::ALL {
                    assert_eq!(b.apply_side(a.apply_side(s)), composed.apply_side(s));
                }
            }
            assert_eq!(a.then(a.inverse()), Transform::IDENTITY);
        }
    }

    #[test]
    fn all_eight_are_distinct() {
        let images: std::collections::BTreeSet<_> = Transform::ALL.iter().map(|&t| apply_all(t, 3)).collect();
        assert_eq!(images.len(), 8);
    }

    #[test]
    fn side_mapping_matches_point_mapping() {
        let n = 5;
        for t in Transform::ALL {
            // middle of the north edge lands on the middle of the mapped side
            let (x, y) = t.apply(2, 0, n, n);
            let expect = match t.apply_side(Side::N) {
                Side::N => (2, 0),
                Side::E => (4, 2),
                Side::S => (2, 4),
                Side::W => (0, 2),
            };
            assert_eq!((x, y), expect, "{t}");
        }
    }
}
