//! JSON interchange for puzzles and solutions.
//!
//! Every file is one object `{"genre": ..., "width": ..., "height": ..., ...}`.
//! Puzzle fields by genre:
//!
//! | genre          | fields                                                      |
//! |----------------|-------------------------------------------------------------|
//! | `bsl`          | `bars`: internal edges such as `"h(1,0)"`                   |
//! | `cubic-bsl`    | `bars`, and every cell must keep at most three neighbours   |
//! | `slitherlink`  | `clues`: one string per row, `.` or a digit `0`-`3`         |
//! | `masyu`        | `pearls`: one string per row, `.`, `B` or `W`               |
//! | `yajilin`      | `grey`: rows of `.`/`#`; `arrows`: `{col,row,count,direction}` |
//! | `simple-loop`  | `shaded`: rows of `.`/`#`                                   |
//!
//! A solution carries `edges`, the sorted loop edges. Slitherlink edges join
//! dots of the `(width+1)×(height+1)` lattice; all other genres join cells.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bsl::{verify_bsl, BslError, BslPuzzle, BslViolation, CubicBslPuzzle};
use crate::genre::{verify_genre, ArrowClue, Genre, GenrePuzzle, GenreViolation, PuzzleError};
use crate::grid::{CellCoord, CellLoop, Color, EdgeId, GridDims, GridError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unknown genre `{0}`")]
    UnknownGenre(String),
    #[error("{kind} files need a `{field}` field")]
    MissingField { kind: PuzzleKind, field: &'static str },
    #[error("{kind} files do not take a `{field}` field")]
    UnexpectedField { kind: PuzzleKind, field: &'static str },
    #[error("`{field}` must have {expected} rows of {width} characters")]
    RowShape { field: &'static str, expected: usize, width: usize },
    #[error("`{field}` row {row}: unexpected {found:?}")]
    BadChar { field: &'static str, row: usize, found: char },
    #[error("arrow at {0} is not on a grey cell")]
    ArrowOffGrey(CellCoord),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Bsl(#[from] BslError),
    #[error(transparent)]
    Puzzle(#[from] PuzzleError),
}

/// What a file describes: a BSL variant or one of the target genres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PuzzleKind {
    Bsl,
    CubicBsl,
    Genre(Genre),
}

impl PuzzleKind {
    pub fn name(self) -> &'static str {
        match self {
            PuzzleKind::Bsl => "bsl",
            PuzzleKind::CubicBsl => "cubic-bsl",
            PuzzleKind::Genre(g) => g.name(),
        }
    }
}

impl fmt::Display for PuzzleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PuzzleKind {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bsl" => Ok(PuzzleKind::Bsl),
            "cubic-bsl" => Ok(PuzzleKind::CubicBsl),
            _ => s.parse().map(PuzzleKind::Genre).map_err(|_| FormatError::UnknownGenre(s.to_string())),
        }
    }
}

impl Serialize for PuzzleKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PuzzleKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyPuzzle {
    Bsl(BslPuzzle),
    Cubic(CubicBslPuzzle),
    Genre(GenrePuzzle),
}

impl AnyPuzzle {
    pub fn kind(&self) -> PuzzleKind {
        match self {
            AnyPuzzle::Bsl(_) => PuzzleKind::Bsl,
            AnyPuzzle::Cubic(_) => PuzzleKind::CubicBsl,
            AnyPuzzle::Genre(g) => PuzzleKind::Genre(g.genre()),
        }
    }

    pub fn dims(&self) -> GridDims {
        match self {
            AnyPuzzle::Bsl(p) => p.dims(),
            AnyPuzzle::Cubic(p) => p.dims(),
            AnyPuzzle::Genre(p) => p.dims(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dims = self.dims();
        let mut env = Envelope::new(self.kind(), dims);
        match self {
            AnyPuzzle::Bsl(p) => env.bars = Some(p.bars().iter().copied().collect()),
            AnyPuzzle::Cubic(p) => env.bars = Some(p.inner().bars().iter().copied().collect()),
            AnyPuzzle::Genre(GenrePuzzle::Slitherlink { clues, .. }) => {
                env.clues = Some(rows(dims, |c| clues.get(&c).map_or('.', |v| char::from(b'0' + v))))
            }
            AnyPuzzle::Genre(GenrePuzzle::Masyu { pearls, .. }) => {
                env.pearls = Some(rows(dims, |c| match pearls.get(&c) {
                    None => '.',
                    Some(Color::Black) => 'B',
                    Some(Color::White) => 'W',
                }))
            }
            AnyPuzzle::Genre(GenrePuzzle::Yajilin { grey, .. }) => {
                env.grey = Some(rows(dims, |c| if grey.contains_key(&c) { '#' } else { '.' }));
                let mut arrows: Vec<Arrow> = grey
                    .iter()
                    .filter_map(|(&c, clue)| {
                        clue.map(|a| Arrow { col: c.col, row: c.row, count: a.count, direction: a.direction })
                    })
                    .collect();
                arrows.sort_by_key(|a| (a.row, a.col));
                env.arrows = Some(arrows);
            }
            AnyPuzzle::Genre(GenrePuzzle::SimpleLoop { shaded, .. }) => {
                env.shaded = Some(rows(dims, |c| if shaded.contains(&c) { '#' } else { '.' }))
            }
        }
        serde_json::to_value(env).expect("envelope serialises")
    }
}

/// A loop for a puzzle of the given kind and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub kind: PuzzleKind,
    /// Puzzle size in cells.
    pub dims: GridDims,
    pub tour: CellLoop,
}

impl Solution {
    pub fn to_json(&self) -> serde_json::Value {
        let mut env = Envelope::new(self.kind, self.dims);
        env.edges = Some(self.tour.transitions.iter().copied().collect());
        serde_json::to_value(env).expect("envelope serialises")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    genre: String,
    width: usize,
    height: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bars: Option<Vec<EdgeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clues: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pearls: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grey: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arrows: Option<Vec<Arrow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shaded: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<EdgeId>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Arrow {
    col: usize,
    row: usize,
    count: u32,
    direction: Side,
}

impl Envelope {
    fn new(kind: PuzzleKind, dims: GridDims) -> Self {
        Envelope {
            genre: kind.name().to_string(),
            width: dims.width(),
            height: dims.height(),
            bars: None,
            clues: None,
            pearls: None,
            grey: None,
            arrows: None,
            shaded: None,
            edges: None,
        }
    }

    fn present(&self) -> [(&'static str, bool); 7] {
        [
            ("bars", self.bars.is_some()),
            ("clues", self.clues.is_some()),
            ("pearls", self.pearls.is_some()),
            ("grey", self.grey.is_some()),
            ("arrows", self.arrows.is_some()),
            ("shaded", self.shaded.is_some()),
            ("edges", self.edges.is_some()),
        ]
    }

    /// Rejects any field outside `allowed`.
    fn only(&self, kind: PuzzleKind, allowed: &[&'static str]) -> Result<(), FormatError> {
        match self.present().into_iter().find(|(name, set)| *set && !allowed.contains(name)) {
            Some((field, _)) => Err(FormatError::UnexpectedField { kind, field }),
            None => Ok(()),
        }
    }
}

fn rows(dims: GridDims, mut cell: impl FnMut(CellCoord) -> char) -> Vec<String> {
    (0..dims.height()).map(|r| (0..dims.width()).map(|c| cell(CellCoord::new(c, r))).collect()).collect()
}

fn read_rows(
    dims: GridDims,
    field: &'static str,
    rows: &[String],
    mut cell: impl FnMut(CellCoord, char) -> Option<()>,
) -> Result<(), FormatError> {
    let shape = FormatError::RowShape { field, expected: dims.height(), width: dims.width() };
    if rows.len() != dims.height() {
        return Err(shape);
    }
    for (r, line) in rows.iter().enumerate() {
        if line.chars().count() != dims.width() {
            return Err(shape);
        }
        for (c, ch) in line.chars().enumerate() {
            if ch != '.' {
                cell(CellCoord::new(c, r), ch).ok_or(FormatError::BadChar { field, row: r, found: ch })?;
            }
        }
    }
    Ok(())
}

fn envelope(text: &str) -> Result<(Envelope, PuzzleKind, GridDims), FormatError> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let kind: PuzzleKind = env.genre.parse()?;
    let dims = GridDims::new(env.width, env.height)?;
    Ok((env, kind, dims))
}

fn required<T>(field: Option<T>, kind: PuzzleKind, name: &'static str) -> Result<T, FormatError> {
    field.ok_or(FormatError::MissingField { kind, field: name })
}

pub fn parse_puzzle(text: &str) -> Result<AnyPuzzle, FormatError> {
    let (env, kind, dims) = envelope(text)?;
    let puzzle = match kind {
        PuzzleKind::Bsl | PuzzleKind::CubicBsl => {
            env.only(kind, &["bars"])?;
            let bars = BslPuzzle::new(dims, env.bars.unwrap_or_default())?;
            if kind == PuzzleKind::Bsl {
                AnyPuzzle::Bsl(bars)
            } else {
                AnyPuzzle::Cubic(CubicBslPuzzle::new(bars)?)
            }
        }
        PuzzleKind::Genre(Genre::Slitherlink) => {
            env.only(kind, &["clues"])?;
            let mut clues = BTreeMap::new();
            read_rows(dims, "clues", &required(env.clues, kind, "clues")?, |c, ch| {
                let v = ch.to_digit(10).filter(|&v| v <= 3)?;
                clues.insert(c, v as u8);
                Some(())
            })?;
            AnyPuzzle::Genre(GenrePuzzle::Slitherlink { dims, clues })
        }
        PuzzleKind::Genre(Genre::Masyu) => {
            env.only(kind, &["pearls"])?;
            let mut pearls = BTreeMap::new();
            read_rows(dims, "pearls", &required(env.pearls, kind, "pearls")?, |c, ch| {
                let color = match ch {
                    'B' => Color::Black,
                    'W' => Color::White,
                    _ => return None,
                };
                pearls.insert(c, color);
                Some(())
            })?;
            AnyPuzzle::Genre(GenrePuzzle::Masyu { dims, pearls })
        }
        PuzzleKind::Genre(Genre::Yajilin) => {
            env.only(kind, &["grey", "arrows"])?;
            let mut grey: BTreeMap<CellCoord, Option<ArrowClue>> = BTreeMap::new();
            read_rows(dims, "grey", &required(env.grey, kind, "grey")?, |c, ch| {
                (ch == '#').then(|| {
                    grey.insert(c, None);
                })
            })?;
            for a in env.arrows.unwrap_or_default() {
                let cell = CellCoord::new(a.col, a.row);
                let slot = grey.get_mut(&cell).ok_or(FormatError::ArrowOffGrey(cell))?;
                *slot = Some(ArrowClue { count: a.count, direction: a.direction });
            }
            AnyPuzzle::Genre(GenrePuzzle::Yajilin { dims, grey })
        }
        PuzzleKind::Genre(Genre::SimpleLoop) => {
            env.only(kind, &["shaded"])?;
            let mut shaded = BTreeSet::new();
            read_rows(dims, "shaded", &required(env.shaded, kind, "shaded")?, |c, ch| {
                (ch == '#').then(|| {
                    shaded.insert(c);
                })
            })?;
            AnyPuzzle::Genre(GenrePuzzle::SimpleLoop { dims, shaded })
        }
    };
    if let AnyPuzzle::Genre(g) = &puzzle {
        g.validate()?;
    }
    Ok(puzzle)
}

pub fn parse_solution(text: &str) -> Result<Solution, FormatError> {
    let (env, kind, dims) = envelope(text)?;
    env.only(kind, &["edges"])?;
    let edges = required(env.edges, kind, "edges")?;
    let lattice = match kind {
        PuzzleKind::Genre(g) if g.uses_dots() => GridDims::new(dims.width() + 1, dims.height() + 1)?,
        _ => dims,
    };
    for &e in &edges {
        lattice.check_edge(e)?;
        if !e.is_internal() {
            return Err(GridError::EdgeOutOfBounds(e).into());
        }
    }
    Ok(Solution { kind, dims, tour: CellLoop::new(edges) })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("solution is for {found}, puzzle is {expected}")]
    KindMismatch { expected: PuzzleKind, found: PuzzleKind },
    #[error("solution is for a {found} grid, puzzle is {expected}")]
    DimsMismatch { expected: GridDims, found: GridDims },
    #[error(transparent)]
    Bsl(#[from] BslViolation),
    #[error(transparent)]
    Genre(#[from] GenreViolation),
}

impl VerifyError {
    /// The solution does not belong to this puzzle at all.
    pub fn is_mismatch(&self) -> bool {
        matches!(self, VerifyError::KindMismatch { .. } | VerifyError::DimsMismatch { .. })
    }
}

/// Runs the verifier matching the puzzle kind.
pub fn verify(puzzle: &AnyPuzzle, solution: &Solution) -> Result<(), VerifyError> {
    if puzzle.kind() != solution.kind {
        return Err(VerifyError::KindMismatch { expected: puzzle.kind(), found: solution.kind });
    }
    if puzzle.dims() != solution.dims {
        return Err(VerifyError::DimsMismatch { expected: puzzle.dims(), found: solution.dims });
    }
    match puzzle {
        AnyPuzzle::Bsl(p) => verify_bsl(p, &solution.tour)?,
        AnyPuzzle::Cubic(p) => verify_bsl(p.inner(), &solution.tour)?,
        AnyPuzzle::Genre(p) => verify_genre(p, &solution.tour)?,
    }
    Ok(())
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bsl_round_trip() {
        let text = r#"{"genre":"bsl","width":3,"height":2,"bars":["v(1,0)"]}"#;
        let p = parse_puzzle(text).unwrap();
        assert_eq!(p.kind(), PuzzleKind::Bsl);
        assert_eq!(parse_puzzle(&to_text(&p.to_json())).unwrap(), p);
    }

    #[test]
    fn yajilin_arrows_sit_on_grey_cells() {
        let ok = r##"{"genre":"yajilin","width":2,"height":2,"grey":["#.",".."],"arrows":[{"col":0,"row":0,"count":1,"direction":"E"}]}"##;
        let p = parse_puzzle(ok).unwrap();
        assert_eq!(parse_puzzle(&to_text(&p.to_json())).unwrap(), p);
        let off = ok.replace(r#""col":0"#, r#""col":1"#);
        assert_eq!(parse_puzzle(&off), Err(FormatError::ArrowOffGrey(CellCoord::new(1, 0))));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_puzzle("{"), Err(FormatError::Json(_))));
        assert!(matches!(
            parse_puzzle(r#"{"genre":"kakuro","width":1,"height":1}"#),
            Err(FormatError::UnknownGenre(_))
        ));
        assert!(matches!(
            parse_puzzle(r#"{"genre":"masyu","width":2,"height":1,"pearls":["B"]}"#),
            Err(FormatError::RowShape { .. })
        ));
        assert!(matches!(
            parse_puzzle(r#"{"genre":"slitherlink","width":1,"height":1,"clues":["4"]}"#),
            Err(FormatError::BadChar { .. })
        ));
        assert!(matches!(
            parse_puzzle(r#"{"genre":"masyu","width":1,"height":1,"pearls":["."],"bars":[]}"#),
            Err(FormatError::UnexpectedField { .. })
        ));
        assert!(matches!(
            parse_puzzle(r#"{"genre":"cubic-bsl","width":3,"height":3,"bars":[]}"#),
            Err(FormatError::Bsl(BslError::NotCubic(_)))
        ));
        assert!(matches!(
            parse_solution(r#"{"genre":"bsl","width":2,"height":2,"edges":["h(1,0)"]}"#),
            Err(FormatError::Grid(_))
        ));
    }

    #[test]
    fn slitherlink_solutions_live_on_dots() {
        let s = parse_solution(
            r#"{"genre":"slitherlink","width":1,"height":1,"edges":["h(0,0)","h(0,1)","v(0,0)","v(1,0)"]}"#,
        )
        .unwrap();
        assert_eq!(s.tour.len(), 4);
        let text = to_text(&s.to_json());
        assert_eq!(parse_solution(&text).unwrap(), s);
    }
}
