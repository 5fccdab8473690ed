//! T-metacell gadget descriptors: tile clues, exits, allowed placements and
//! the forced and per-exit-pair line art, plus the geometry for tiling them.
//!
//! # File format
//!
//! A descriptor starts with header lines, one keyword each:
//!
//! ```text
//! genre yajilin                 slitherlink | masyu | yajilin | simple-loop
//! lattice cells                 cells, or dots for edge-drawn genres
//! size 5                        tile side in cells
//! transforms r0 r90 r180 r270   allowed placement transforms
//! exit E 2                      three lines: side and index along that side
//! certify exhaustive            exhaustive | witness
//! certified yes                 yes | partial | no
//! option zero-up-clues off      optional flags
//! ```
//!
//! followed by sections. `clues` holds `size` rows of space-separated tokens:
//! `.` or a digit for slitherlink, `.`/`B`/`W` for masyu, `.`/`#` for
//! simple-loop and `.`, `#` or `#<count><side>` for yajilin. `forced` and
//! `solution A-B` (one per exit pair) hold line art over the tile lattice of
//! `p` points per side: `2p-1` lines, with `o` or `.` at even positions of even
//! lines, `-` for a horizontal step and `|` for a vertical one. A point is `o`
//! exactly when a drawn step touches it. Stubs leaving through the exits are
//! implied by the pair. Blank lines before a keyword are ignored.

mod certify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::cubic::exit_pair;
use crate::genre::{ArrowClue, Genre, GenrePuzzle};
use crate::grid::{CellCoord, Color, EdgeId, GridDims, Side};
use crate::transform::Transform;

pub use certify::{certify_gadget, ConditionReport, GadgetCertificate, Verdict};

const SHIPPED: [(Genre, &str); 4] = [
    (Genre::Slitherlink, include_str!("../../catalog/slitherlink.txt")),
    (Genre::Masyu, include_str!("../../catalog/masyu.txt")),
    (Genre::Yajilin, include_str!("../../catalog/yajilin.txt")),
    (Genre::SimpleLoop, include_str!("../../catalog/simple-loop.txt")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("missing section `{0}`")]
    MissingSection(String),
    #[error("descriptor invariant violated: {0}")]
    Invariant(String),
    #[error("no descriptor for {0}")]
    UnknownGenre(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    Cells,
    Dots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMode {
    /// Every condition is decided by exhaustive search.
    Exhaustive,
    /// Exits and sub-solutions are witnessed by search; visiting is not
    /// machine-exhausted.
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certified {
    No,
    Partial,
    Yes,
}

impl fmt::Display for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certified::Yes => "yes",
            Certified::Partial => "partial",
            Certified::No => "no",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetDescriptor {
    genre: Genre,
    lattice: Lattice,
    size: usize,
    transforms: Vec<Transform>,
    exits: BTreeMap<Side, usize>,
    certify: CertifyMode,
    certified: Certified,
    zero_up_clues: bool,
    template: GenrePuzzle,
    forced: BTreeSet<EdgeId>,
    solutions: BTreeMap<(Side, Side), BTreeSet<EdgeId>>,
}

impl GadgetDescriptor {
    pub fn genre(&self) -> Genre {
        self.genre
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Tile side in cells.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Tile side in lattice points; tiles are laid out on this pitch.
    pub fn pitch(&self) -> usize {
        match self.lattice {
            Lattice::Cells => self.size,
            Lattice::Dots => self.size + 1,
        }
    }

    pub fn transforms(&self) -> &[Transform] {
        &self.transforms
    }

    pub fn exit_sides(&self) -> Vec<Side> {
        self.exits.keys().copied().collect()
    }

    /// The tile side without an exit.
    pub fn closed_side(&self) -> Side {
        Side::ALL.into_iter().find(|s| !self.exits.contains_key(s)).expect("three exits")
    }

    pub fn certify_mode(&self) -> CertifyMode {
        self.certify
    }

    /// Certification status recorded in the descriptor.
    pub fn certified(&self) -> Certified {
        self.certified
    }

    pub fn zero_up_clues(&self) -> bool {
        self.zero_up_clues
    }

    /// Clues of a single untransformed tile.
    pub fn template(&self) -> &GenrePuzzle {
        &self.template
    }

    pub fn forced(&self) -> &BTreeSet<EdgeId> {
        &self.forced
    }

    /// Red line art for an exit pair, in the tile frame.
    pub fn fragment(&self, a: Side, b: Side) -> Option<&BTreeSet<EdgeId>> {
        self.solutions.get(&exit_pair(a, b))
    }

    /// Forced lines plus the fragment for a pair: the whole path through the tile.
    pub fn tile_solution(&self, a: Side, b: Side) -> Option<BTreeSet<EdgeId>> {
        self.fragment(a, b).map(|f| f.union(&self.forced).copied().collect())
    }

    /// Lattice point of the exit on `side`, in the tile frame.
    pub fn exit_point(&self, side: Side) -> Option<CellCoord> {
        let i = *self.exits.get(&side)?;
        let last = self.pitch() - 1;
        Some(match side {
            Side::N => CellCoord::new(i, 0),
            Side::E => CellCoord::new(last, i),
            Side::S => CellCoord::new(i, last),
            Side::W => CellCoord::new(0, i),
        })
    }

    /// Sides carrying exits once the tile is placed with `t`.
    pub fn placed_exits(&self, t: Transform) -> Vec<Side> {
        let mut sides: Vec<Side> = self.exits.keys().map(|&s| t.apply_side(s)).collect();
        sides.sort();
        sides
    }

    /// First allowed transform that leaves `closed` without an exit.
    pub fn transform_closing(&self, closed: Side) -> Option<Transform> {
        let base = self.closed_side();
        self.transforms.iter().copied().find(|t| t.apply_side(base) == closed)
    }

    /// Board size in cells for a `tiles` layout.
    pub fn board_dims(&self, tiles: GridDims) -> GridDims {
        let p = self.pitch();
        let (w, h) = (tiles.width() * p, tiles.height() * p);
        match self.lattice {
            Lattice::Cells => GridDims::new(w, h),
            Lattice::Dots => GridDims::new(w - 1, h - 1),
        }
        .expect("board dimensions")
    }

    /// Lattice the loop lives on for a `tiles` layout.
    pub fn lattice_dims(&self, tiles: GridDims) -> GridDims {
        let p = self.pitch();
        GridDims::new(tiles.width() * p, tiles.height() * p).expect("lattice dimensions")
    }

    /// Top-left lattice point (and cell) of a tile.
    pub fn tile_origin(&self, tile: CellCoord) -> CellCoord {
        CellCoord::new(tile.col * self.pitch(), tile.row * self.pitch())
    }

    /// Lattice point of a placed tile's exit on world side `side`.
    pub fn placed_exit_point(&self, tile: CellCoord, t: Transform, side: Side) -> Option<CellCoord> {
        let p = self.pitch();
        let local = t.apply_cell(self.exit_point(t.inverse().apply_side(side))?, p, p);
        let o = self.tile_origin(tile);
        Some(CellCoord::new(o.col + local.col, o.row + local.row))
    }

    /// Edges of a tile's path for the world exit pair `(a, b)`, placed with `t`.
    pub fn placed_path(&self, tile: CellCoord, t: Transform, a: Side, b: Side) -> Option<BTreeSet<EdgeId>> {
        let inv = t.inverse();
        let path = self.tile_solution(inv.apply_side(a), inv.apply_side(b))?;
        Some(self.place_edges(tile, t, &path))
    }

    /// Forced lines of a placed tile.
    pub fn placed_forced(&self, tile: CellCoord, t: Transform) -> BTreeSet<EdgeId> {
        self.place_edges(tile, t, &self.forced)
    }

    fn place_edges(&self, tile: CellCoord, t: Transform, edges: &BTreeSet<EdgeId>) -> BTreeSet<EdgeId> {
        let p = self.pitch();
        let o = self.tile_origin(tile);
        edges.iter().map(|e| t.apply_edge(*e, p, p).offset(o.col, o.row)).collect()
    }

    /// Every lattice edge with both ends inside the tile.
    pub fn tile_edges(&self, tile: CellCoord) -> Vec<EdgeId> {
        let p = self.pitch();
        let o = self.tile_origin(tile);
        GridDims::new(p, p).expect("tile").internal_edges().into_iter().map(|e| e.offset(o.col, o.row)).collect()
    }

    /// Lattice edges joining two different tiles.
    pub fn seam_edges(&self, tiles: GridDims) -> Vec<EdgeId> {
        let p = self.pitch();
        self.lattice_dims(tiles)
            .internal_edges()
            .into_iter()
            .filter(|e| {
                let (a, b) = e.endpoints().expect("internal");
                a.col / p != b.col / p || a.row / p != b.row / p
            })
            .collect()
    }

    /// Lattice edges leaving `tile` towards its neighbours.
    pub fn tile_seams(&self, tiles: GridDims, tile: CellCoord) -> Vec<EdgeId> {
        let p = self.pitch();
        let inside = |c: CellCoord| c.col / p == tile.col && c.row / p == tile.row;
        self.seam_edges(tiles)
            .into_iter()
            .filter(|e| {
                let (a, b) = e.endpoints().expect("internal");
                inside(a) != inside(b)
            })
            .collect()
    }

    /// Lattice edge joining the facing exits of `tile` and its neighbour on
    /// `side`, when both placed tiles have an exit there and they line up.
    pub fn crossing(&self, layout: &TileLayout, tile: CellCoord, side: Side) -> Option<EdgeId> {
        let other = layout.dims.step(tile, side)?;
        let a = self.placed_exit_point(tile, layout.transform(tile), side)?;
        let b = self.placed_exit_point(other, layout.transform(other), side.opposite())?;
        EdgeId::between(a, b)
    }

    /// Tiles the clue template over a layout.
    pub fn build_board(&self, layout: &TileLayout) -> GenrePuzzle {
        let dims = self.board_dims(layout.dims);
        let n = self.size;
        let place = |tile: CellCoord, t: Transform, cell: CellCoord| {
            let o = self.tile_origin(tile);
            let c = t.apply_cell(cell, n, n);
            CellCoord::new(o.col + c.col, o.row + c.row)
        };
        let tiles = || layout.dims.cells().map(|tile| (tile, layout.transform(tile)));
        match &self.template {
            GenrePuzzle::Slitherlink { clues, .. } => GenrePuzzle::Slitherlink {
                dims,
                clues: tiles().flat_map(|(tile, t)| clues.iter().map(move |(&c, &v)| (place(tile, t, c), v))).collect(),
            },
            GenrePuzzle::Masyu { pearls, .. } => GenrePuzzle::Masyu {
                dims,
                pearls: tiles()
                    .flat_map(|(tile, t)| pearls.iter().map(move |(&c, &v)| (place(tile, t, c), v)))
                    .collect(),
            },
            GenrePuzzle::Yajilin { grey, .. } => GenrePuzzle::Yajilin {
                dims,
                grey: tiles()
                    .flat_map(|(tile, t)| {
                        grey.iter().map(move |(&c, clue)| {
                            let clue = clue
                                .map(|a| ArrowClue { count: a.count, direction: t.apply_side(a.direction) })
                                .or_else(|| {
                                    self.zero_up_clues.then(|| ArrowClue { count: 0, direction: t.apply_side(Side::N) })
                                });
                            (place(tile, t, c), clue)
                        })
                    })
                    .collect(),
            },
            GenrePuzzle::SimpleLoop { shaded, .. } => GenrePuzzle::SimpleLoop {
                dims,
                shaded: tiles().flat_map(|(tile, t)| shaded.iter().map(move |&c| place(tile, t, c))).collect(),
            },
        }
    }

    /// Cells of the tile that no loop may enter (grey or shaded), if the genre has walls.
    pub fn wall_cells(&self) -> Option<BTreeSet<CellCoord>> {
        match &self.template {
            GenrePuzzle::Yajilin { grey, .. } => Some(grey.keys().copied().collect()),
            GenrePuzzle::SimpleLoop { shaded, .. } => Some(shaded.clone()),
            _ => None,
        }
    }
}

/// Placement of tiles on a rectangular board of tiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileLayout {
    pub dims: GridDims,
    /// Row-major transform per tile.
    pub transforms: Vec<Transform>,
}

impl TileLayout {
    pub fn transform(&self, tile: CellCoord) -> Transform {
        self.transforms[self.dims.index(tile)]
    }
}

/// The shipped descriptor for a genre.
pub fn load_gadget(genre: Genre) -> Result<GadgetDescriptor, DescriptorError> {
    let text = SHIPPED.iter().find(|(g, _)| *g == genre).map(|(_, t)| *t).expect("every genre ships a descriptor");
    parse_descriptor(text)
}

/// Reads `<dir>/<genre>.txt`.
pub fn load_gadget_from(dir: &Path, genre: Genre) -> Result<GadgetDescriptor, DescriptorError> {
    let path = dir.join(format!("{}.txt", genre.name()));
    let text = std::fs::read_to_string(&path)
        .map_err(|e| DescriptorError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let desc = parse_descriptor(&text)?;
    if desc.genre != genre {
        return Err(DescriptorError::Invariant(format!("{} declares genre {}", path.display(), desc.genre)));
    }
    Ok(desc)
}

pub fn parse_descriptor(text: &str) -> Result<GadgetDescriptor, DescriptorError> {
    Parser::new(text).descriptor()
}

struct Parser<'a> {
    lines: Vec<&'a str>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { lines: text.lines().collect(), at: 0 }
    }

    fn error(&self, line: usize, message: impl Into<String>) -> DescriptorError {
        DescriptorError::Syntax { line: line + 1, message: message.into() }
    }

    fn skip_blank(&mut self) {
        while self.at < self.lines.len() && self.lines[self.at].trim().is_empty() {
            self.at += 1;
        }
    }

    fn descriptor(mut self) -> Result<GadgetDescriptor, DescriptorError> {
        let mut genre = None;
        let mut lattice = None;
        let mut size = None;
        let mut transforms = None;
        let mut exits = BTreeMap::new();
        let mut certify = None;
        let mut certified = None;
        let mut zero_up_clues = false;

        loop {
            self.skip_blank();
            let Some(&line) = self.lines.get(self.at) else {
                break;
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            if matches!(words[0], "clues" | "forced" | "solution") {
                break;
            }
            let n = self.at;
            self.at += 1;
            let one = |what: &str| -> Result<&str, DescriptorError> {
                match words.as_slice() {
                    [_, v] => Ok(*v),
                    _ => Err(self.error(n, format!("`{what}` takes one value"))),
                }
            };
            match words[0] {
                "genre" => genre = Some(one("genre")?.parse::<Genre>().map_err(|e| self.error(n, e))?),
                "lattice" => {
                    lattice = Some(match one("lattice")? {
                        "cells" => Lattice::Cells,
                        "dots" => Lattice::Dots,
                        other => return Err(self.error(n, format!("unknown lattice `{other}`"))),
                    })
                }
                "size" => {
                    let v: usize = one("size")?.parse().map_err(|_| self.error(n, "size must be a number"))?;
                    if v < 2 {
                        return Err(self.error(n, "size must be at least 2"));
                    }
                    size = Some(v);
                }
                "transforms" => {
                    let list = words[1..]
                        .iter()
                        .map(|w| w.parse::<Transform>().map_err(|e| self.error(n, e.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    if list.is_empty() {
                        return Err(self.error(n, "no transforms listed"));
                    }
                    transforms = Some(list);
                }
                "exit" => {
                    let [_, side, index] = words.as_slice() else {
                        return Err(self.error(n, "`exit` takes a side and an index"));
                    };
                    let side = side_word(side).ok_or_else(|| self.error(n, format!("bad side `{side}`")))?;
                    let index: usize = index.parse().map_err(|_| self.error(n, "exit index must be a number"))?;
                    if exits.insert(side, index).is_some() {
                        return Err(self.error(n, format!("second exit on side {side}")));
                    }
                }
                "certify" => {
                    certify = Some(match one("certify")? {
                        "exhaustive" => CertifyMode::Exhaustive,
                        "witness" => CertifyMode::Witness,
                        other => return Err(self.error(n, format!("unknown certify mode `{other}`"))),
                    })
                }
                "certified" => {
                    certified = Some(match one("certified")? {
                        "yes" => Certified::Yes,
                        "partial" => Certified::Partial,
                        "no" => Certified::No,
                        other => return Err(self.error(n, format!("unknown status `{other}`"))),
                    })
                }
                "option" => match words.as_slice() {
                    [_, "zero-up-clues", "on"] => zero_up_clues = true,
                    [_, "zero-up-clues", "off"] => zero_up_clues = false,
                    _ => return Err(self.error(n, format!("unknown option `{}`", words[1..].join(" ")))),
                },
                other => return Err(self.error(n, format!("unknown header `{other}`"))),
            }
        }

        let genre = genre.ok_or(DescriptorError::MissingHeader("genre"))?;
        let lattice = lattice.ok_or(DescriptorError::MissingHeader("lattice"))?;
        let size = size.ok_or(DescriptorError::MissingHeader("size"))?;
        let transforms = transforms.ok_or(DescriptorError::MissingHeader("transforms"))?;
        let certify = certify.ok_or(DescriptorError::MissingHeader("certify"))?;
        let certified = certified.ok_or(DescriptorError::MissingHeader("certified"))?;
        if (lattice == Lattice::Dots) != genre.uses_dots() {
            return Err(DescriptorError::Invariant(format!("{genre} does not use a {lattice:?} lattice")));
        }
        if zero_up_clues && genre != Genre::Yajilin {
            return Err(DescriptorError::Invariant("zero-up-clues applies to yajilin only".into()));
        }
        let pitch = if lattice == Lattice::Dots { size + 1 } else { size };
        if exits.len() != 3 {
            return Err(DescriptorError::Invariant(format!("expected 3 exits, found {}", exits.len())));
        }
        if let Some((side, i)) = exits.iter().find(|(_, &i)| i >= pitch) {
            return Err(DescriptorError::Invariant(format!("exit {side} index {i} is off the tile")));
        }

        let mut template = None;
        let mut forced = None;
        let mut solutions = BTreeMap::new();
        loop {
            self.skip_blank();
            let Some(&line) = self.lines.get(self.at) else {
                break;
            };
            let n = self.at;
            self.at += 1;
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["clues"] if template.is_none() => template = Some(self.clues(genre, size)?),
                ["forced"] if forced.is_none() => forced = Some(self.art(pitch)?),
                ["solution", pair] => {
                    let (a, b) = pair
                        .split_once('-')
                        .and_then(|(a, b)| Some((side_word(a)?, side_word(b)?)))
                        .ok_or_else(|| self.error(n, format!("bad exit pair `{pair}`")))?;
                    if a == b || !exits.contains_key(&a) || !exits.contains_key(&b) {
                        return Err(self.error(n, format!("`{pair}` is not a pair of exits")));
                    }
                    let art = self.art(pitch)?;
                    if solutions.insert(exit_pair(a, b), art).is_some() {
                        return Err(self.error(n, format!("second solution for `{pair}`")));
                    }
                }
                _ => return Err(self.error(n, format!("unexpected `{}`", line.trim()))),
            }
        }
        let template = template.ok_or_else(|| DescriptorError::MissingSection("clues".into()))?;
        let forced = forced.ok_or_else(|| DescriptorError::MissingSection("forced".into()))?;
        let sides: Vec<Side> = exits.keys().copied().collect();
        for (i, &a) in sides.iter().enumerate() {
            for &b in &sides[i + 1..] {
                if !solutions.contains_key(&exit_pair(a, b)) {
                    return Err(DescriptorError::MissingSection(format!("solution {a}-{b}")));
                }
            }
        }

        let desc = GadgetDescriptor {
            genre,
            lattice,
            size,
            transforms,
            exits,
            certify,
            certified,
            zero_up_clues,
            template,
            forced,
            solutions,
        };
        check_paths(&desc)?;
        Ok(desc)
    }

    fn clues(&mut self, genre: Genre, size: usize) -> Result<GenrePuzzle, DescriptorError> {
        let dims = GridDims::new(size, size).expect("tile size");
        let mut slither = BTreeMap::new();
        let mut pearls = BTreeMap::new();
        let mut grey = BTreeMap::new();
        let mut shaded = BTreeSet::new();
        for row in 0..size {
            let n = self.at;
            let line = *self.lines.get(n).ok_or_else(|| self.error(n, "clue rows end early"))?;
            self.at += 1;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != size {
                return Err(self.error(n, format!("expected {size} clue tokens, found {}", tokens.len())));
            }
            for (col, tok) in tokens.into_iter().enumerate() {
                let cell = CellCoord::new(col, row);
                let bad = || self.error(n, format!("bad {genre} clue `{tok}`"));
                if tok == "." {
                    continue;
                }
                match genre {
                    Genre::Slitherlink => {
                        let v: u8 = tok.parse().map_err(|_| bad())?;
                        if v > 3 {
                            return Err(bad());
                        }
                        slither.insert(cell, v);
                    }
                    Genre::Masyu => {
                        let color = match tok {
                            "B" => Color::Black,
                            "W" => Color::White,
                            _ => return Err(bad()),
                        };
                        pearls.insert(cell, color);
                    }
                    Genre::SimpleLoop => {
                        if tok != "#" {
                            return Err(bad());
                        }
                        shaded.insert(cell);
                    }
                    Genre::Yajilin => {
                        let rest = tok.strip_prefix('#').ok_or_else(bad)?;
                        let clue = if rest.is_empty() {
                            None
                        } else {
                            let split = rest.len() - 1;
                            let count = rest[..split].parse().map_err(|_| bad())?;
                            let direction = side_word(&rest[split..]).ok_or_else(bad)?;
                            Some(ArrowClue { count, direction })
                        };
                        grey.insert(cell, clue);
                    }
                }
            }
        }
        Ok(match genre {
            Genre::Slitherlink => GenrePuzzle::Slitherlink { dims, clues: slither },
            Genre::Masyu => GenrePuzzle::Masyu { dims, pearls },
            Genre::Yajilin => GenrePuzzle::Yajilin { dims, grey },
            Genre::SimpleLoop => GenrePuzzle::SimpleLoop { dims, shaded },
        })
    }

    fn art(&mut self, pitch: usize) -> Result<BTreeSet<EdgeId>, DescriptorError> {
        let span = 2 * pitch - 1;
        let first = self.at;
        if first + span > self.lines.len() {
            return Err(self.error(first, format!("line art needs {span} lines")));
        }
        let rows: Vec<Vec<char>> = self.lines[first..first + span].iter().map(|l| l.chars().collect()).collect();
        self.at += span;
        let mut edges = BTreeSet::new();
        let mut marked = BTreeSet::new();
        for (y, row) in rows.iter().enumerate() {
            if row.len() > span {
                return Err(self.error(first + y, format!("line art is wider than {span} columns")));
            }
            for (x, &ch) in row.iter().enumerate() {
                let at = |what: &str| self.error(first + y, format!("column {}: {what} {ch:?}", x + 1));
                match (y % 2, x % 2, ch) {
                    (_, _, ' ') => {}
                    (0, 0, '.') => {}
                    (0, 0, 'o') => {
                        marked.insert(CellCoord::new(x / 2, y / 2));
                    }
                    (0, 1, '-') => {
                        edges.insert(EdgeId::horizontal(x / 2, y / 2));
                    }
                    (1, 0, '|') => {
                        edges.insert(EdgeId::vertical(x / 2, y / 2));
                    }
                    _ => return Err(at("unexpected")),
                }
            }
            if y % 2 == 0 && row.len() != span {
                return Err(self.error(first + y, "point rows must list every point"));
            }
        }
        let touched: BTreeSet<CellCoord> = edges.iter().flat_map(|e| e.cells()).collect();
        if touched != marked {
            return Err(self.error(first, "points marked `o` do not match the drawn steps"));
        }
        Ok(edges)
    }
}

fn side_word(s: &str) -> Option<Side> {
    let mut chars = s.chars();
    let side = Side::from_letter(chars.next()?)?;
    chars.next().is_none().then_some(side)
}

/// Each tile solution, with stubs through its two exits, must be one simple
/// path from exit to exit.
fn check_paths(desc: &GadgetDescriptor) -> Result<(), DescriptorError> {
    for (&(a, b), fragment) in &desc.solutions {
        if let Some(e) = fragment.intersection(&desc.forced).next() {
            return Err(DescriptorError::Invariant(format!("solution {a}-{b} repeats forced step {e}")));
        }
        let path = desc.tile_solution(a, b).expect("pair present");
        let start = desc.exit_point(a).expect("exit");
        let end = desc.exit_point(b).expect("exit");
        let mut adjacency: BTreeMap<CellCoord, Vec<CellCoord>> = BTreeMap::new();
        for e in &path {
            let (p, q) = e.endpoints().expect("internal");
            adjacency.entry(p).or_default().push(q);
            adjacency.entry(q).or_default().push(p);
        }
        let fail = |why: String| DescriptorError::Invariant(format!("solution {a}-{b}: {why}"));
        for (&p, next) in &adjacency {
            let stubs = (p == start) as usize + (p == end) as usize;
            if next.len() + stubs != 2 {
                return Err(fail(format!("point {p} has {} steps", next.len() + stubs)));
            }
        }
        // walk from one exit; the walk must end at the other and use every step
        let (mut prev, mut at, mut steps) = (None, start, 0);
        while at != end || steps == 0 {
            let next = adjacency.get(&at).and_then(|n| n.iter().copied().find(|&q| Some(q) != prev));
            let Some(next) = next else {
                return Err(fail("path does not reach the second exit".into()));
            };
            prev = Some(at);
            at = next;
            steps += 1;
            if steps > path.len() {
                return Err(fail("path loops".into()));
            }
        }
        if steps != path.len() {
            return Err(fail("steps off the path".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_descriptors_load() {
        for genre in Genre::ALL {
            let d = load_gadget(genre).unwrap_or_else(|e| panic!("{genre}: {e}"));
            assert_eq!(d.genre(), genre);
            assert_eq!(d.closed_side(), Side::N);
        }
        let y = load_gadget(Genre::Yajilin).unwrap();
        let s = load_gadget(Genre::SimpleLoop).unwrap();
        assert_eq!(y.size(), 5);
        assert_eq!(y.wall_cells(), s.wall_cells());
        assert_eq!(y.transforms(), &Transform::ROTATIONS);
        assert_eq!(load_gadget(Genre::Masyu).unwrap().transforms().len(), 8);
        let slither = load_gadget(Genre::Slitherlink).unwrap();
        assert_eq!((slither.size(), slither.pitch()), (10, 11));
    }

    #[test]
    fn placing_a_tile_moves_its_exits() {
        let y = load_gadget(Genre::Yajilin).unwrap();
        assert_eq!(y.placed_exits(Transform::R90), vec![Side::N, Side::S, Side::W]);
        assert_eq!(y.transform_closing(Side::E), Some(Transform::R90));
        assert_eq!(y.placed_exit_point(CellCoord::new(1, 0), Transform::IDENTITY, Side::W), Some(CellCoord::new(5, 2)));
        assert_eq!(y.placed_exit_point(CellCoord::new(1, 0), Transform::IDENTITY, Side::N), None);
    }

    #[test]
    fn board_dims_follow_the_pitch() {
        let tiles = GridDims::new(2, 3).unwrap();
        assert_eq!(load_gadget(Genre::Masyu).unwrap().board_dims(tiles), GridDims::new(18, 27).unwrap());
        assert_eq!(load_gadget(Genre::Slitherlink).unwrap().board_dims(tiles), GridDims::new(21, 32).unwrap());
    }

    fn replace_line(text: &str, from: &str, to: &str) -> String {
        let mut done = false;
        text.lines()
            .map(|l| {
                if !done && l == from {
                    done = true;
                    to.to_string()
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn malformed_descriptors_are_rejected() {
        let text = SHIPPED[2].1;
        assert!(parse_descriptor(text).is_ok());
        let cases = [
            replace_line(text, "exit W 2", ""),
            replace_line(text, "exit W 2", "exit W 9"),
            replace_line(text, "genre yajilin", "genre kakuro"),
            replace_line(text, "lattice cells", "lattice dots"),
            replace_line(text, "# . . . .", "# . . ."),
            replace_line(text, "# . . . .", "# . . . 4"),
            replace_line(text, "solution E-W", "solution N-E"),
            replace_line(text, "o o o-o-o", "o o o-o o"),
            replace_line(text, "  | | | |", "  | | |  "),
            text.split("\nsolution S-W").next().unwrap().to_string(),
        ];
        for (i, bad) in cases.iter().enumerate() {
            assert!(parse_descriptor(bad).is_err(), "case {i} accepted");
        }
    }
}
