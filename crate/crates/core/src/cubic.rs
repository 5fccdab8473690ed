//! BSL → Cubic BSL: every cell becomes a 5×7 metacell whose exits line up
//! with those of its neighbours. Metacells in odd columns are mirrored left
//! to right, those in odd rows top to bottom.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bsl::{check_cubic, BslError, BslPuzzle, CubicBslPuzzle};
use crate::engine::{self, LoopGraph, LoopProblem, SearchOutcome};
use crate::grid::{checkerboard_color, CellCoord, CellLoop, CellPathFragmentSet, Color, EdgeId, GridDims, Side};
use crate::transform::Transform;

pub const METACELL_WIDTH: usize = 5;
pub const METACELL_HEIGHT: usize = 7;

const STANDARD_TEMPLATE: &str = include_str!("../catalog/metacell.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetacellError {
    #[error("template must have {expected} lines, found {found}")]
    LineCount { expected: usize, found: usize },
    #[error("line {line}: expected {expected} characters, found {found}")]
    LineLength { line: usize, expected: usize, found: usize },
    #[error("line {line}, column {column}: unexpected {found:?}")]
    BadChar { line: usize, column: usize, found: char },
    #[error("exit {0} appears more than once or on the wrong side")]
    BadExit(Side),
    #[error("exit {0} is missing")]
    MissingExit(Side),
    #[error("template invariant violated: {0}")]
    Invariant(String),
}

/// The metacell bar pattern and its four blockable exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetacellTemplate {
    dims: GridDims,
    bars: BTreeSet<EdgeId>,
    exits: [CellCoord; 4],
}

impl MetacellTemplate {
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    /// Internal bars of the template.
    pub fn bars(&self) -> &BTreeSet<EdgeId> {
        &self.bars
    }

    /// Cell holding the exit on `side`.
    pub fn exit(&self, side: Side) -> CellCoord {
        self.exits[side.index()]
    }

    /// Boundary edge through which the exit on `side` leaves.
    pub fn exit_edge(&self, side: Side) -> EdgeId {
        EdgeId::Boundary { cell: self.exit(side), side }
    }

    /// The template alone, as a BSL puzzle with every exit blocked.
    pub fn as_puzzle(&self) -> BslPuzzle {
        BslPuzzle::new(self.dims, self.bars.iter().copied()).expect("template bars are internal")
    }

    /// Renders the template in the file format accepted by [`parse_metacell`].
    pub fn render(&self) -> String {
        let (w, h) = (self.dims.width(), self.dims.height());
        let mut out = String::new();
        for line in 0..=2 * h {
            for x in 0..=2 * w {
                let ch = if line % 2 == 0 {
                    if x % 2 == 0 {
                        '+'
                    } else {
                        self.edge_char(x / 2, line / 2, true)
                    }
                } else if x % 2 == 1 {
                    '.'
                } else {
                    self.edge_char(x / 2, line / 2, false)
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }

    // character for the edge above (horizontal line) or left of (vertical
    // line) position (col,row); col/row may equal width/height on the far side
    fn edge_char(&self, col: usize, row: usize, above: bool) -> char {
        let (w, h) = (self.dims.width(), self.dims.height());
        let boundary = |cell: CellCoord, side: Side| {
            if self.exit(side) == cell {
                side.letter()
            } else {
                '#'
            }
        };
        if above {
            if row == 0 {
                return boundary(CellCoord::new(col, 0), Side::N);
            }
            if row == h {
                return boundary(CellCoord::new(col, h - 1), Side::S);
            }
            let e = EdgeId::vertical(col, row - 1);
            if self.bars.contains(&e) {
                '#'
            } else {
                ' '
            }
        } else {
            if col == 0 {
                return boundary(CellCoord::new(0, row), Side::W);
            }
            if col == w {
                return boundary(CellCoord::new(w - 1, row), Side::E);
            }
            let e = EdgeId::horizontal(col - 1, row);
            if self.bars.contains(&e) {
                '#'
            } else {
                ' '
            }
        }
    }
}

/// Parses a metacell template and checks its invariants.
///
/// The file is a `(2h+1)`×`(2w+1)` character grid. Even lines hold `+` corners
/// alternating with the horizontal edges above each cell; odd lines hold the
/// vertical edges left of each cell alternating with `.` cell markers. An
/// internal edge is `#` (bar) or a space (open). A border edge is `#` or the
/// letter of the exit's side (`N`, `E`, `S`, `W`), exactly one per side.
pub fn parse_metacell(text: &str) -> Result<MetacellTemplate, MetacellError> {
    let (w, h) = (METACELL_WIDTH, METACELL_HEIGHT);
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != 2 * h + 1 {
        return Err(MetacellError::LineCount { expected: 2 * h + 1, found: lines.len() });
    }
    let dims = GridDims::new(w, h).expect("fixed size");
    let mut bars = BTreeSet::new();
    let mut exits: [Option<CellCoord>; 4] = [None; 4];
    for (li, line) in lines.iter().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != 2 * w + 1 {
            return Err(MetacellError::LineLength { line: li + 1, expected: 2 * w + 1, found: chars.len() });
        }
        for (x, &ch) in chars.iter().enumerate() {
            let bad = || MetacellError::BadChar { line: li + 1, column: x + 1, found: ch };
            let (row, col) = (li / 2, x / 2);
            // locate the edge this position describes, if any
            let edge: Option<(EdgeId, Option<Side>)> = match (li % 2, x % 2) {
                (0, 0) => {
                    if ch != '+' {
                        return Err(bad());
                    }
                    None
                }
                (1, 1) => {
                    if ch != '.' {
                        return Err(bad());
                    }
                    None
                }
                (0, _) => Some(if row == 0 {
                    (EdgeId::Boundary { cell: CellCoord::new(col, 0), side: Side::N }, Some(Side::N))
                } else if row == h {
                    (EdgeId::Boundary { cell: CellCoord::new(col, h - 1), side: Side::S }, Some(Side::S))
                } else {
                    (EdgeId::vertical(col, row - 1), None)
                }),
                _ => Some(if col == 0 {
                    (EdgeId::Boundary { cell: CellCoord::new(0, row), side: Side::W }, Some(Side::W))
                } else if col == w {
                    (EdgeId::Boundary { cell: CellCoord::new(w - 1, row), side: Side::E }, Some(Side::E))
                } else {
                    (EdgeId::horizontal(col - 1, row), None)
                }),
            };
            let Some((edge, border)) = edge else { continue };
            match (ch, border) {
                ('#', None) => {
                    bars.insert(edge);
                }
                (' ', None) | ('#', Some(_)) => {}
                (letter, Some(side)) if Side::from_letter(letter).is_some() => {
                    if Side::from_letter(letter) != Some(side) || exits[side.index()].is_some() {
                        return Err(MetacellError::BadExit(Side::from_letter(letter).expect("checked")));
                    }
                    let EdgeId::Boundary { cell, .. } = edge else { unreachable!() };
                    exits[side.index()] = Some(cell);
                }
                _ => return Err(bad()),
            }
        }
    }
    let mut found = [CellCoord::new(0, 0); 4];
    for side in Side::ALL {
        found[side.index()] = exits[side.index()].ok_or(MetacellError::MissingExit(side))?;
    }
    let template = MetacellTemplate { dims, bars, exits: found };
    check_template(&template)?;
    Ok(template)
}

fn check_template(t: &MetacellTemplate) -> Result<(), MetacellError> {
    let inv = |msg: String| Err(MetacellError::Invariant(msg));
    if t.dims.cell_count() != 35 {
        return inv(format!("{} cells", t.dims.cell_count()));
    }
    let black = t.dims.cells().filter(|&c| checkerboard_color(c) == Color::Black).count();
    if (black, t.dims.cell_count() - black) != (18, 17) {
        return inv(format!("{black} black cells"));
    }
    for side in Side::ALL {
        if checkerboard_color(t.exit(side)) != Color::Black {
            return inv(format!("exit {side} sits on a white cell"));
        }
    }
    let puzzle = t.as_puzzle();
    if let Err(cells) = check_cubic(&puzzle) {
        return inv(format!("cell {} has four neighbours with every exit blocked", cells[0]));
    }
    // with all exits open, an exit cell gains one more neighbour outside
    for cell in t.dims.cells() {
        let open_exits = Side::ALL.iter().filter(|&&s| t.exit(s) == cell).count();
        if puzzle.accessible(cell).len() + open_exits > 3 {
            return inv(format!("cell {cell} has four neighbours with its exit open"));
        }
    }
    Ok(())
}

/// The template shipped with the crate.
pub fn load_metacell() -> Result<MetacellTemplate, MetacellError> {
    parse_metacell(STANDARD_TEMPLATE)
}

/// Unordered exit pair, stored in side order.
pub fn exit_pair(a: Side, b: Side) -> (Side, Side) {
    if a.index() <= b.index() {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn all_exit_pairs() -> Vec<(Side, Side)> {
    let mut out = Vec::new();
    for (i, &a) in Side::ALL.iter().enumerate() {
        for &b in &Side::ALL[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// One covering path through the metacell per exit pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MetacellBank {
    pub fragments: BTreeMap<(Side, Side), CellPathFragmentSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BankError {
    #[error("no fragment for exit pair {}-{}", .0.0, .0.1)]
    MissingPair((Side, Side)),
    #[error("pair {}-{}: cell {cell} has degree {degree}", .pair.0, .pair.1)]
    Degree { pair: (Side, Side), cell: CellCoord, degree: usize },
    #[error("pair {}-{}: crosses the bar at {edge}", .pair.0, .pair.1)]
    BarCrossed { pair: (Side, Side), edge: EdgeId },
    #[error("pair {}-{}: open ends are not exactly the two exits", .pair.0, .pair.1)]
    WrongEnds { pair: (Side, Side) },
    #[error("pair {}-{}: the fragment is not a single path", .pair.0, .pair.1)]
    NotAPath { pair: (Side, Side) },
    #[error("pair {}-{}: exhaustive search finds no covering path", .pair.0, .pair.1)]
    NoPath { pair: (Side, Side) },
}

/// Derives the bank by search: for each exit pair, the canonical path that
/// enters and leaves through those exits and visits every cell.
pub fn build_metacell_bank(template: &MetacellTemplate) -> Result<MetacellBank, BankError> {
    let puzzle = template.as_puzzle();
    let dims = template.dims;
    let edges = puzzle.open_edges();
    let mut bank = MetacellBank::default();
    for pair in all_exit_pairs() {
        // a virtual vertex outside the cell joins the two exits
        let outside = dims.cell_count();
        let mut graph = LoopGraph::new(outside + 1);
        for e in &edges {
            let (a, b) = e.endpoints().expect("internal");
            graph.add_edge(dims.index(a), dims.index(b));
        }
        let ea = graph.add_edge(dims.index(template.exit(pair.0)), outside);
        let eb = graph.add_edge(dims.index(template.exit(pair.1)), outside);
        let mut problem = LoopProblem::new(graph);
        problem.required = (0..=outside as u32).collect();
        problem.fixed = vec![(ea, true), (eb, true)];
        match engine::solve(&problem, engine::Budget::unlimited()) {
            SearchOutcome::Found(on) => {
                let transitions = edges.iter().zip(&on).filter(|(_, b)| **b).map(|(e, _)| *e).collect();
                let stubs = [template.exit_edge(pair.0), template.exit_edge(pair.1)].into_iter().collect();
                bank.fragments.insert(pair, CellPathFragmentSet { transitions, stubs });
            }
            _ => return Err(BankError::NoPath { pair }),
        }
    }
    Ok(bank)
}

/// Checks every fragment structurally and confirms, by an independent
/// depth-first search, that a covering path exists for each pair.
pub fn validate_metacell_bank(template: &MetacellTemplate, bank: &MetacellBank) -> Result<(), BankError> {
    let dims = template.dims;
    for pair in all_exit_pairs() {
        let frag = bank.fragments.get(&pair).ok_or(BankError::MissingPair(pair))?;
        if let Some(&edge) = frag.transitions.iter().find(|e| template.bars.contains(e) || !e.is_internal()) {
            return Err(BankError::BarCrossed { pair, edge });
        }
        let expected: BTreeSet<EdgeId> = [template.exit_edge(pair.0), template.exit_edge(pair.1)].into();
        if frag.stubs != expected {
            return Err(BankError::WrongEnds { pair });
        }
        for cell in dims.cells() {
            let degree = frag.degree(cell);
            if degree != 2 {
                return Err(BankError::Degree { pair, cell, degree });
            }
        }
        // all cells have degree two and there are exactly two stubs, so the
        // fragment is a path plus possibly cycles; a path alone has n-1 edges
        if frag.transitions.len() != dims.cell_count() - 1 || !connected(dims, &frag.transitions) {
            return Err(BankError::NotAPath { pair });
        }
        if !covering_path_exists(template, template.exit(pair.0), template.exit(pair.1)) {
            return Err(BankError::NoPath { pair });
        }
    }
    Ok(())
}

fn connected(dims: GridDims, edges: &BTreeSet<EdgeId>) -> bool {
    let mut adj = vec![Vec::new(); dims.cell_count()];
    for e in edges {
        let (a, b) = e.endpoints().expect("internal");
        adj[dims.index(a)].push(dims.index(b));
        adj[dims.index(b)].push(dims.index(a));
    }
    let mut seen = vec![false; dims.cell_count()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

// Plain depth-first search for a Hamiltonian path from `from` to `to`.
fn covering_path_exists(template: &MetacellTemplate, from: CellCoord, to: CellCoord) -> bool {
    let puzzle = template.as_puzzle();
    let dims = template.dims;
    let n = dims.cell_count();
    let adj: Vec<Vec<usize>> =
        dims.cells().map(|c| puzzle.accessible(c).into_iter().map(|(m, _)| dims.index(m)).collect()).collect();
    let target = dims.index(to);
    let mut visited = vec![false; n];

    fn dfs(v: usize, depth: usize, n: usize, target: usize, adj: &[Vec<usize>], visited: &mut [bool]) -> bool {
        if v == target {
            return depth == n;
        }
        for &w in &adj[v] {
            if !visited[w] {
                visited[w] = true;
                if dfs(w, depth + 1, n, target, adj, visited) {
                    return true;
                }
                visited[w] = false;
            }
        }
        false
    }

    let start = dims.index(from);
    visited[start] = true;
    dfs(start, 1, n, target, &adj, &mut visited)
}

/// The shipped template together with its derived bank.
#[derive(Debug, Clone)]
pub struct Metacell {
    pub template: MetacellTemplate,
    pub bank: MetacellBank,
}

impl Metacell {
    pub fn standard() -> &'static Metacell {
        static CELL: OnceLock<Metacell> = OnceLock::new();
        CELL.get_or_init(|| {
            let template = load_metacell().expect("shipped metacell template is valid");
            let bank = build_metacell_bank(&template).expect("shipped metacell has all covering paths");
            Metacell { template, bank }
        })
    }
}

/// Mirroring applied to the metacell of a source cell.
pub fn placement_transform(cell: CellCoord) -> Transform {
    match (cell.col % 2 == 1, cell.row % 2 == 1) {
        (false, false) => Transform::IDENTITY,
        (true, false) => Transform::FX,
        (false, true) => Transform::FY,
        (true, true) => Transform::R180,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetacellPlacement {
    pub cell: CellCoord,
    /// Top-left cell of the metacell in the image.
    pub origin: CellCoord,
    pub transform: Transform,
    /// Sides (in the image frame) whose exits are blocked.
    pub blocked: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicManifest {
    pub source: GridDims,
    pub image: GridDims,
    pub cells: Vec<MetacellPlacement>,
}

impl CubicManifest {
    fn placement(&self, cell: CellCoord) -> &MetacellPlacement {
        &self.cells[self.source.index(cell)]
    }

    /// Exit cell on `side` of the metacell for `cell`, in image coordinates.
    fn exit_cell(&self, template: &MetacellTemplate, cell: CellCoord, side: Side) -> CellCoord {
        let p = self.placement(cell);
        let base = p.transform.inverse().apply_side(side);
        let c = p.transform.apply_cell(template.exit(base), METACELL_WIDTH, METACELL_HEIGHT);
        CellCoord::new(p.origin.col + c.col, p.origin.row + c.row)
    }

    /// Image edge joining the exits of two adjacent source cells.
    fn connector(&self, template: &MetacellTemplate, a: CellCoord, b: CellCoord) -> EdgeId {
        let side = side_towards(a, b);
        let ea = self.exit_cell(template, a, side);
        let eb = self.exit_cell(template, b, side.opposite());
        EdgeId::between(ea, eb).expect("placed exits face each other")
    }
}

fn side_towards(a: CellCoord, b: CellCoord) -> Side {
    a.direction_to(b).expect("cells are adjacent")
}

pub fn reduce_to_cubic(puzzle: &BslPuzzle) -> (CubicBslPuzzle, CubicManifest) {
    let cell = Metacell::standard();
    let t = &cell.template;
    let src = puzzle.dims();
    let image = GridDims::new(src.width() * METACELL_WIDTH, src.height() * METACELL_HEIGHT)
        .expect("image of a valid grid stays in range");
    let mut placements = Vec::with_capacity(src.cell_count());
    for c in src.cells() {
        let blocked = Side::ALL
            .into_iter()
            .filter(|&s| match src.step(c, s) {
                None => true,
                Some(_) => puzzle.is_barred(&src.edge_towards(c, s)),
            })
            .collect();
        placements.push(MetacellPlacement {
            cell: c,
            origin: CellCoord::new(c.col * METACELL_WIDTH, c.row * METACELL_HEIGHT),
            transform: placement_transform(c),
            blocked,
        });
    }
    let manifest = CubicManifest { source: src, image, cells: placements };

    let mut bars = BTreeSet::new();
    for p in &manifest.cells {
        for bar in &t.bars {
            let e = p.transform.apply_edge(*bar, METACELL_WIDTH, METACELL_HEIGHT);
            bars.insert(e.offset(p.origin.col, p.origin.row));
        }
    }
    // every edge between metacells is a bar except connectors of open exits
    let mut open = BTreeSet::new();
    for e in src.internal_edges() {
        if !puzzle.is_barred(&e) {
            let (a, b) = e.endpoints().expect("internal");
            open.insert(manifest.connector(t, a, b));
        }
    }
    for e in image.internal_edges() {
        let (a, b) = e.endpoints().expect("internal");
        let crosses =
            a.col / METACELL_WIDTH != b.col / METACELL_WIDTH || a.row / METACELL_HEIGHT != b.row / METACELL_HEIGHT;
        if crosses && !open.contains(&e) {
            bars.insert(e);
        }
    }
    let out = BslPuzzle::new(image, bars).expect("bars are internal edges of the image");
    let cubic = CubicBslPuzzle::new(out).expect("metacell images are cubic");
    (cubic, manifest)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("solution grid {found} does not match the manifest's source grid {expected}")]
    DimsMismatch { expected: GridDims, found: GridDims },
    #[error("source cell {cell} has {degree} transitions")]
    Degree { cell: CellCoord, degree: usize },
    #[error("transition {0} leaves through a blocked exit")]
    Blocked(EdgeId),
    #[error("metacell for {cell} is crossed {crossings} times")]
    Crossings { cell: CellCoord, crossings: usize },
    #[error(transparent)]
    Bsl(#[from] BslError),
}

fn check_source_dims(manifest: &CubicManifest, found: GridDims) -> Result<(), LiftError> {
    if manifest.cells.len() != manifest.source.cell_count() || manifest.source != found {
        return Err(LiftError::DimsMismatch { expected: manifest.source, found });
    }
    Ok(())
}

/// Expands a source solution into a solution of the cubic image.
pub fn lift_to_cubic(manifest: &CubicManifest, dims: GridDims, solution: &CellLoop) -> Result<CellLoop, LiftError> {
    check_source_dims(manifest, dims)?;
    let cell = Metacell::standard();
    let mut sides: Vec<Vec<Side>> = vec![Vec::new(); dims.cell_count()];
    for &e in &solution.transitions {
        dims.check_edge(e).map_err(BslError::from)?;
        let (a, b) = e.endpoints().ok_or(LiftError::Blocked(e))?;
        let s = side_towards(a, b);
        for (c, side) in [(a, s), (b, s.opposite())] {
            if manifest.placement(c).blocked.contains(&side) {
                return Err(LiftError::Blocked(e));
            }
            sides[dims.index(c)].push(side);
        }
    }
    let mut out = BTreeSet::new();
    for c in dims.cells() {
        let s = &sides[dims.index(c)];
        if s.len() != 2 {
            return Err(LiftError::Degree { cell: c, degree: s.len() });
        }
        let p = manifest.placement(c);
        let inv = p.transform.inverse();
        let pair = exit_pair(inv.apply_side(s[0]), inv.apply_side(s[1]));
        let frag = &cell.bank.fragments[&pair];
        for &e in &frag.transitions {
            out.insert(p.transform.apply_edge(e, METACELL_WIDTH, METACELL_HEIGHT).offset(p.origin.col, p.origin.row));
        }
    }
    for &e in &solution.transitions {
        let (a, b) = e.endpoints().expect("internal");
        out.insert(manifest.connector(&cell.template, a, b));
    }
    Ok(CellLoop::new(out))
}

/// Reads the source loop off an image solution: a source transition for each
/// connector the image loop uses.
pub fn project_from_cubic(manifest: &CubicManifest, image_solution: &CellLoop) -> Result<CellLoop, LiftError> {
    let src = manifest.source;
    check_source_dims(manifest, src)?;
    let t = &Metacell::standard().template;
    let mut crossings = vec![0usize; src.cell_count()];
    let mut out = BTreeSet::new();
    for e in src.internal_edges() {
        let (a, b) = e.endpoints().expect("internal");
        let side = side_towards(a, b);
        if manifest.placement(a).blocked.contains(&side) {
            continue;
        }
        if image_solution.contains(&manifest.connector(t, a, b)) {
            out.insert(e);
            crossings[src.index(a)] += 1;
            crossings[src.index(b)] += 1;
        }
    }
    for c in src.cells() {
        let n = crossings[src.index(c)];
        if n != 2 {
            return Err(LiftError::Crossings { cell: c, crossings: n });
        }
    }
    Ok(CellLoop::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsl::verify_bsl;

    #[test]
    fn template_round_trips_through_render() {
        let t = load_metacell().unwrap();
        assert_eq!(t.render(), STANDARD_TEMPLATE);
        assert_eq!(parse_metacell(&t.render()).unwrap(), t);
    }

    #[test]
    fn template_rejects_malformed_files() {
        let short: String = STANDARD_TEMPLATE.lines().take(14).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_metacell(&short), Err(MetacellError::LineCount { .. })));
        let no_exit = STANDARD_TEMPLATE.replacen('N', "#", 1);
        assert_eq!(parse_metacell(&no_exit), Err(MetacellError::MissingExit(Side::N)));
        let stray = STANDARD_TEMPLATE.replacen('.', "x", 1);
        assert!(matches!(parse_metacell(&stray), Err(MetacellError::BadChar { line: 2, column: 2, found: 'x' })));
        // removing the bars under row 0 leaves interior cells with four neighbours
        let open = STANDARD_TEMPLATE.replacen("+ +#+#+#+ +", "+ + + + + +", 1);
        assert!(matches!(parse_metacell(&open), Err(MetacellError::Invariant(_))));
    }

    #[test]
    fn shipped_bank_validates() {
        let cell = Metacell::standard();
        assert_eq!(validate_metacell_bank(&cell.template, &cell.bank), Ok(()));
    }

    #[test]
    fn bank_mutations_are_caught() {
        let cell = Metacell::standard();
        let mut bank = cell.bank.clone();
        bank.fragments.remove(&(Side::N, Side::S));
        assert_eq!(validate_metacell_bank(&cell.template, &bank), Err(BankError::MissingPair((Side::N, Side::S))));
        let mut bank = cell.bank.clone();
        let frag = bank.fragments.get_mut(&(Side::E, Side::W)).unwrap();
        let first = *frag.transitions.iter().next().unwrap();
        frag.transitions.remove(&first);
        assert!(matches!(validate_metacell_bank(&cell.template, &bank), Err(BankError::Degree { .. })));
    }

    #[test]
    fn two_by_two_square_lifts_and_projects_back() {
        let dims = GridDims::new(2, 2).unwrap();
        let src = BslPuzzle::barless(dims);
        let (cubic, manifest) = reduce_to_cubic(&src);
        assert_eq!((cubic.dims().width(), cubic.dims().height()), (10, 14));
        let square = CellLoop::from_cycle(&[
            CellCoord::new(0, 0),
            CellCoord::new(1, 0),
            CellCoord::new(1, 1),
            CellCoord::new(0, 1),
        ])
        .unwrap();
        let lifted = lift_to_cubic(&manifest, dims, &square).unwrap();
        assert_eq!(lifted.len(), 140);
        assert_eq!(verify_bsl(cubic.inner(), &lifted), Ok(()));
        assert_eq!(project_from_cubic(&manifest, &lifted).unwrap(), square);
    }

    #[test]
    fn lifting_against_wrong_manifest_fails() {
        let (_, manifest) = reduce_to_cubic(&BslPuzzle::barless(GridDims::new(1, 1).unwrap()));
        let dims = GridDims::new(2, 2).unwrap();
        let square = CellLoop::from_cycle(&[
            CellCoord::new(0, 0),
            CellCoord::new(1, 0),
            CellCoord::new(1, 1),
            CellCoord::new(0, 1),
        ])
        .unwrap();
        assert!(matches!(lift_to_cubic(&manifest, dims, &square), Err(LiftError::DimsMismatch { .. })));
    }
}
