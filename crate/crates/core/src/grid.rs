//! Rectangular grid geometry shared by every puzzle kind.
//!
//! Coordinates are `(col, row)` with `(0, 0)` in the top-left corner and rows
//! growing downward. Loops are stored as unordered sets of internal edges.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Width and height of a rectangular board, in cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDims {
    width: usize,
    height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {width}x{height}")]
    Empty { width: usize, height: usize },
    #[error("grid {width}x{height} is too large")]
    TooLarge { width: usize, height: usize },
    #[error("cell ({col},{row}) is outside the {width}x{height} grid")]
    CellOutOfBounds { col: usize, row: usize, width: usize, height: usize },
    #[error("edge {0} is not an edge of the grid")]
    EdgeOutOfBounds(EdgeId),
}

// Keeps dual-lattice and tiled boards comfortably inside u32 indices.
const MAX_CELLS: usize = 1 << 28;

impl GridDims {
    pub fn new(width: usize, height: usize) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::Empty { width, height });
        }
        match width.checked_mul(height) {
            Some(n) if n <= MAX_CELLS => Ok(GridDims { width, height }),
            _ => Err(GridError::TooLarge { width, height }),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    /// The larger of the two side lengths.
    pub fn max_side(&self) -> usize {
        self.width.max(self.height)
    }

    pub fn contains(&self, cell: CellCoord) -> bool {
        cell.col < self.width && cell.row < self.height
    }

    pub fn check(&self, cell: CellCoord) -> Result<(), GridError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(GridError::CellOutOfBounds { col: cell.col, row: cell.row, width: self.width, height: self.height })
        }
    }

    /// Row-major index of a cell.
    pub fn index(&self, cell: CellCoord) -> usize {
        cell.row * self.width + cell.col
    }

    pub fn cell_at(&self, index: usize) -> CellCoord {
        CellCoord::new(index % self.width, index / self.width)
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellCoord> + '_ {
        (0..self.height).flat_map(move |row| (0..self.width).map(move |col| CellCoord::new(col, row)))
    }

    /// The cell one step from `cell` towards `side`, if it is on the grid.
    pub fn step(&self, cell: CellCoord, side: Side) -> Option<CellCoord> {
        let (dc, dr) = side.delta();
        let col = cell.col as isize + dc;
        let row = cell.row as isize + dr;
        if col < 0 || row < 0 {
            return None;
        }
        let next = CellCoord::new(col as usize, row as usize);
        self.contains(next).then_some(next)
    }

    /// The edge on `side` of `cell`: internal when a neighbour exists there,
    /// a boundary edge otherwise.
    pub fn edge_towards(&self, cell: CellCoord, side: Side) -> EdgeId {
        match self.step(cell, side) {
            Some(other) => EdgeId::between(cell, other).expect("orthogonal neighbours"),
            None => EdgeId::Boundary { cell, side },
        }
    }

    /// Every internal edge in canonical order.
    pub fn internal_edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for cell in self.cells() {
            if cell.col + 1 < self.width {
                out.push(EdgeId::Internal { cell, axis: Axis::Horizontal });
            }
            if cell.row + 1 < self.height {
                out.push(EdgeId::Internal { cell, axis: Axis::Vertical });
            }
        }
        out.sort();
        out
    }

    /// Checks that an edge lies on this grid and satisfies its kind's shape.
    pub fn check_edge(&self, edge: EdgeId) -> Result<(), GridError> {
        let ok = match edge {
            EdgeId::Internal { cell, axis } => {
                self.contains(cell)
                    && match axis {
                        Axis::Horizontal => cell.col + 1 < self.width,
                        Axis::Vertical => cell.row + 1 < self.height,
                    }
            }
            EdgeId::Boundary { cell, side } => self.contains(cell) && self.step(cell, side).is_none(),
        };
        if ok {
            Ok(())
        } else {
            Err(GridError::EdgeOutOfBounds(edge))
        }
    }

    pub fn transposed(&self) -> GridDims {
        GridDims { width: self.height, height: self.width }
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellCoord {
    pub col: usize,
    pub row: usize,
}

impl CellCoord {
    /// Side of `self` on which the orthogonal neighbour `other` lies.
    pub fn direction_to(self, other: CellCoord) -> Option<Side> {
        Side::ALL.into_iter().find(|s| {
            let (dc, dr) = s.delta();
            self.col as isize + dc == other.col as isize && self.row as isize + dr == other.row as isize
        })
    }

    pub const fn new(col: usize, row: usize) -> Self {
        CellCoord { col, row }
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// Orientation of an internal edge: `Horizontal` joins `(c,r)`–`(c+1,r)`,
/// `Vertical` joins `(c,r)`–`(c,r+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "h")]
    Horizontal,
    #[serde(rename = "v")]
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    pub fn delta(self) -> (isize, isize) {
        match self {
            Side::N => (0, -1),
            Side::E => (1, 0),
            Side::S => (0, 1),
            Side::W => (-1, 0),
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::N => Side::S,
            Side::E => Side::W,
            Side::S => Side::N,
            Side::W => Side::E,
        }
    }

    /// Quarter turn clockwise.
    pub fn clockwise(self) -> Side {
        match self {
            Side::N => Side::E,
            Side::E => Side::S,
            Side::S => Side::W,
            Side::W => Side::N,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Side::N => 'N',
            Side::E => 'E',
            Side::S => 'S',
            Side::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Side> {
        match c {
            'N' => Some(Side::N),
            'E' => Some(Side::E),
            'S' => Some(Side::S),
            'W' => Some(Side::W),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// An edge of the cell grid: either between two orthogonally adjacent cells,
/// or between a border cell and the exterior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeId {
    Internal { cell: CellCoord, axis: Axis },
    Boundary { cell: CellCoord, side: Side },
}

impl EdgeId {
    /// The internal edge joining two orthogonal neighbours.
    pub fn between(a: CellCoord, b: CellCoord) -> Option<EdgeId> {
        let (lo, hi) = if (a.row, a.col) <= (b.row, b.col) { (a, b) } else { (b, a) };
        if lo.row == hi.row && lo.col + 1 == hi.col {
            Some(EdgeId::Internal { cell: lo, axis: Axis::Horizontal })
        } else if lo.col == hi.col && lo.row + 1 == hi.row {
            Some(EdgeId::Internal { cell: lo, axis: Axis::Vertical })
        } else {
            None
        }
    }

    pub fn horizontal(col: usize, row: usize) -> EdgeId {
        EdgeId::Internal { cell: CellCoord::new(col, row), axis: Axis::Horizontal }
    }

    pub fn vertical(col: usize, row: usize) -> EdgeId {
        EdgeId::Internal { cell: CellCoord::new(col, row), axis: Axis::Vertical }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, EdgeId::Internal { .. })
    }

    /// Both cells of an internal edge.
    pub fn endpoints(&self) -> Option<(CellCoord, CellCoord)> {
        match *self {
            EdgeId::Internal { cell, axis: Axis::Horizontal } => Some((cell, CellCoord::new(cell.col + 1, cell.row))),
            EdgeId::Internal { cell, axis: Axis::Vertical } => Some((cell, CellCoord::new(cell.col, cell.row + 1))),
            EdgeId::Boundary { .. } => None,
        }
    }

    /// Cells touched by the edge (one for boundary edges).
    pub fn cells(&self) -> Vec<CellCoord> {
        match self.endpoints() {
            Some((a, b)) => vec![a, b],
            None => match *self {
                EdgeId::Boundary { cell, .. } => vec![cell],
                EdgeId::Internal { .. } => unreachable!(),
            },
        }
    }

    /// The same edge shifted by whole cells.
    pub fn offset(&self, dcol: usize, drow: usize) -> EdgeId {
        let shift = |c: CellCoord| CellCoord::new(c.col + dcol, c.row + drow);
        match *self {
            EdgeId::Internal { cell, axis } => EdgeId::Internal { cell: shift(cell), axis },
            EdgeId::Boundary { cell, side } => EdgeId::Boundary { cell: shift(cell), side },
        }
    }

    fn sort_key(&self) -> (u8, usize, usize, u8) {
        match *self {
            EdgeId::Internal { cell, axis } => (0, cell.row, cell.col, axis as u8),
            EdgeId::Boundary { cell, side } => (1, cell.row, cell.col, side as u8),
        }
    }
}

impl Ord for EdgeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for EdgeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeId::Internal { cell, axis: Axis::Horizontal } => write!(f, "h{}", cell),
            EdgeId::Internal { cell, axis: Axis::Vertical } => write!(f, "v{}", cell),
            EdgeId::Boundary { cell, side } => write!(f, "{}{}", side, cell),
        }
    }
}

impl FromStr for EdgeId {
    type Err = String;

    /// Parses the `Display` form: `h(c,r)`, `v(c,r)` or `N(c,r)` and friends.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed edge `{s}`");
        let mut chars = s.chars();
        let tag = chars.next().ok_or_else(bad)?;
        let coords = chars.as_str().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (col, row) = coords.split_once(',').ok_or_else(bad)?;
        let col: usize = col.trim().parse().map_err(|_| bad())?;
        let row: usize = row.trim().parse().map_err(|_| bad())?;
        match tag {
            'h' => Ok(EdgeId::horizontal(col, row)),
            'v' => Ok(EdgeId::vertical(col, row)),
            _ => {
                let side = Side::from_letter(tag).ok_or_else(bad)?;
                Ok(EdgeId::Boundary { cell: CellCoord::new(col, row), side })
            }
        }
    }
}

impl Serialize for EdgeId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// Checkerboard colouring with the top-left cell black.
pub fn checkerboard_color(cell: CellCoord) -> Color {
    if (cell.col + cell.row).is_multiple_of(2) {
        Color::Black
    } else {
        Color::White
    }
}

/// In-grid orthogonal neighbours of `cell` with their connecting edges, in
/// canonical edge order.
pub fn neighbors(dims: GridDims, cell: CellCoord) -> Result<Vec<(CellCoord, EdgeId)>, GridError> {
    dims.check(cell)?;
    let mut out: Vec<(CellCoord, EdgeId)> = Side::ALL
        .iter()
        .filter_map(|&side| dims.step(cell, side))
        .map(|n| (n, EdgeId::between(cell, n).expect("adjacent")))
        .collect();
    out.sort_by_key(|a| a.1);
    Ok(out)
}

/// A set of cells on a fixed grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMask {
    dims: GridDims,
    bits: Vec<bool>,
}

impl CellMask {
    pub fn empty(dims: GridDims) -> Self {
        CellMask { dims, bits: vec![false; dims.cell_count()] }
    }

    pub fn full(dims: GridDims) -> Self {
        CellMask { dims, bits: vec![true; dims.cell_count()] }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn get(&self, cell: CellCoord) -> bool {
        self.dims.contains(cell) && self.bits[self.dims.index(cell)]
    }

    pub fn set(&mut self, cell: CellCoord, value: bool) {
        let i = self.dims.index(cell);
        self.bits[i] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = CellCoord> + '_ {
        self.dims.cells().filter(move |&c| self.get(c))
    }
}

/// A single closed tour over cell centres, stored as its set of internal edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CellLoop {
    pub transitions: BTreeSet<EdgeId>,
}

impl CellLoop {
    pub fn new(transitions: impl IntoIterator<Item = EdgeId>) -> Self {
        CellLoop { transitions: transitions.into_iter().collect() }
    }

    /// Builds the loop through a closed sequence of cells (the last cell links
    /// back to the first).
    pub fn from_cycle(cells: &[CellCoord]) -> Option<Self> {
        let n = cells.len();
        let mut transitions = BTreeSet::new();
        for i in 0..n {
            transitions.insert(EdgeId::between(cells[i], cells[(i + 1) % n])?);
        }
        Some(CellLoop { transitions })
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn contains(&self, edge: &EdgeId) -> bool {
        self.transitions.contains(edge)
    }

    /// Cells with at least one incident transition.
    pub fn visited(&self, dims: GridDims) -> CellMask {
        let mut mask = CellMask::empty(dims);
        for e in &self.transitions {
            for c in e.cells() {
                if dims.contains(c) {
                    mask.set(c, true);
                }
            }
        }
        mask
    }
}

/// Path pieces inside a tile: internal transitions plus open ends that leave
/// the tile across its boundary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellPathFragmentSet {
    pub transitions: BTreeSet<EdgeId>,
    pub stubs: BTreeSet<EdgeId>,
}

impl CellPathFragmentSet {
    /// Number of transitions and stubs incident to `cell`.
    pub fn degree(&self, cell: CellCoord) -> usize {
        self.transitions.iter().chain(self.stubs.iter()).filter(|e| e.cells().contains(&cell)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopViolation {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("edge {0} is a boundary edge; loops use internal edges only")]
    BoundaryEdge(EdgeId),
    #[error("the loop is empty")]
    Empty,
    #[error("cell {cell} has {degree} incident transitions")]
    Degree { cell: CellCoord, degree: usize },
    #[error("the transitions form {components} separate loops")]
    Disconnected { components: usize },
    #[error("cell {0} is not visited")]
    Unvisited(CellCoord),
    #[error("cell {0} must not be visited")]
    Forbidden(CellCoord),
}

/// Structural cycle check on an abstract graph. `edges` are vertex pairs;
/// returns the number of cycle components when every touched vertex has
/// degree exactly two.
pub(crate) fn cycle_components(n: usize, edges: &[(usize, usize)]) -> Result<usize, (usize, usize)> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for (v, a) in adj.iter().enumerate() {
        if !a.is_empty() && a.len() != 2 {
            return Err((v, a.len()));
        }
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    Ok(components)
}

/// Checks that `tour` is a single cycle and, when `must_visit` is given, that
/// it visits exactly those cells.
pub fn validate_loop(dims: GridDims, tour: &CellLoop, must_visit: Option<&CellMask>) -> Result<(), LoopViolation> {
    let mut pairs = Vec::with_capacity(tour.len());
    for &e in &tour.transitions {
        if !e.is_internal() {
            return Err(LoopViolation::BoundaryEdge(e));
        }
        dims.check_edge(e)?;
        let (a, b) = e.endpoints().expect("internal");
        pairs.push((dims.index(a), dims.index(b)));
    }
    if pairs.is_empty() {
        return Err(LoopViolation::Empty);
    }
    let components = cycle_components(dims.cell_count(), &pairs)
        .map_err(|(v, degree)| LoopViolation::Degree { cell: dims.cell_at(v), degree })?;
    if components != 1 {
        return Err(LoopViolation::Disconnected { components });
    }
    if let Some(mask) = must_visit {
        let visited = tour.visited(dims);
        for cell in dims.cells() {
            match (mask.get(cell), visited.get(cell)) {
                (true, false) => return Err(LoopViolation::Unvisited(cell)),
                (false, true) => return Err(LoopViolation::Forbidden(cell)),
                _ => {}
            }
        }
    }
    Ok(())
}
