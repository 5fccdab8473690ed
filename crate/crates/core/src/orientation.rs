//! Free-edge orientation for two-exit cells.
//!
//! The bar graph has a vertex per cell and per exterior edge position, and an
//! edge per bar (grid borders count as bars to the exterior). In a cubic
//! instance every vertex has degree at most two, so the graph is a union of
//! paths and cycles. Walking each component in one direction gives every
//! degree-2 cell an outgoing bar, and no bar is outgoing for both its ends.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bsl::CubicBslPuzzle;
use crate::grid::{CellCoord, EdgeId, GridDims, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BarVertex {
    Cell(CellCoord),
    /// The exterior position just outside `cell` on `side`.
    Exterior {
        cell: CellCoord,
        side: Side,
    },
}

impl fmt::Display for BarVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarVertex::Cell(c) => write!(f, "{c}"),
            BarVertex::Exterior { cell, side } => write!(f, "{side}{cell}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error("cell {cell} has {degree} bars; at most two are allowed")]
    DegreeTooHigh { cell: CellCoord, degree: usize },
}

/// Bars as a graph. Vertices are cells (row-major) followed by exterior
/// positions in canonical boundary-edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarGraph {
    dims: GridDims,
    vertices: Vec<BarVertex>,
    /// Each bar with its two vertex indices.
    edges: Vec<(EdgeId, usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    exterior_index: BTreeMap<BarVertex, usize>,
}

impl BarGraph {
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn vertices(&self) -> &[BarVertex] {
        &self.vertices
    }

    /// Bars in canonical edge order.
    pub fn bars(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.0)
    }

    pub fn degree(&self, vertex: BarVertex) -> usize {
        let index = match vertex {
            BarVertex::Cell(c) if self.dims.contains(c) => Some(self.dims.index(c)),
            BarVertex::Cell(_) => None,
            BarVertex::Exterior { .. } => self.exterior_index.get(&vertex).copied(),
        };
        index.map_or(0, |i| self.adjacency[i].len())
    }
}

pub fn build_bar_graph(puzzle: &CubicBslPuzzle) -> Result<BarGraph, OrientationError> {
    let p = puzzle.inner();
    let dims = p.dims();
    let mut bars: Vec<EdgeId> = p.bars().iter().copied().collect();
    for cell in dims.cells() {
        for side in Side::ALL {
            if dims.step(cell, side).is_none() {
                bars.push(EdgeId::Boundary { cell, side });
            }
        }
    }
    bars.sort();
    let mut vertices: Vec<BarVertex> = dims.cells().map(BarVertex::Cell).collect();
    vertices.extend(bars.iter().filter_map(|e| match *e {
        EdgeId::Boundary { cell, side } => Some(BarVertex::Exterior { cell, side }),
        EdgeId::Internal { .. } => None,
    }));
    let exterior_start = dims.cell_count();
    let mut exterior_index = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate().skip(exterior_start) {
        exterior_index.insert(*v, i);
    }
    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut edges = Vec::with_capacity(bars.len());
    for bar in bars {
        let (a, b) = match bar {
            EdgeId::Internal { .. } => {
                let (x, y) = bar.endpoints().expect("internal");
                (dims.index(x), dims.index(y))
            }
            EdgeId::Boundary { cell, side } => (dims.index(cell), exterior_index[&BarVertex::Exterior { cell, side }]),
        };
        adjacency[a].push(edges.len());
        adjacency[b].push(edges.len());
        edges.push((bar, a, b));
    }
    for cell in dims.cells() {
        let degree = adjacency[dims.index(cell)].len();
        if degree > 2 {
            return Err(OrientationError::DegreeTooHigh { cell, degree });
        }
    }
    Ok(BarGraph { dims, vertices, edges, adjacency, exterior_index })
}

/// Free side for every cell with exactly two bars.
pub type FreeEdgeAssignment = BTreeMap<CellCoord, Side>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// One component of the bar graph, walked in its assigned direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// Vertices in walk order.
    pub vertices: Vec<BarVertex>,
    /// Bars in walk order; bar `i` runs from vertex `i` to vertex `i + 1`
    /// (wrapping for cycles).
    pub bars: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub components: Vec<Component>,
    pub free: FreeEdgeAssignment,
}

impl Orientation {
    /// JSON form for golden tests.
    pub fn debug_json(&self) -> serde_json::Value {
        let components: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|c| {
                let n = c.vertices.len();
                let arcs: Vec<serde_json::Value> = c
                    .bars
                    .iter()
                    .enumerate()
                    .map(|(i, bar)| {
                        serde_json::json!({
                            "bar": bar.to_string(),
                            "from": c.vertices[i].to_string(),
                            "to": c.vertices[(i + 1) % n].to_string(),
                        })
                    })
                    .collect();
                serde_json::json!({
                    "kind": c.kind,
                    "vertices": c.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "orientation": arcs,
                })
            })
            .collect();
        serde_json::json!({ "components": components })
    }
}

fn side_of(bar: EdgeId, from: CellCoord) -> Side {
    match bar {
        EdgeId::Boundary { side, .. } => side,
        EdgeId::Internal { .. } => {
            let (a, b) = bar.endpoints().expect("internal");
            let to = if a == from { b } else { a };
            from.direction_to(to).expect("adjacent")
        }
    }
}

/// Orients every component: paths from their least endpoint, cycles from
/// their least vertex towards its least neighbour.
pub fn orient(graph: &BarGraph) -> Orientation {
    let n = graph.vertices.len();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut free = FreeEdgeAssignment::new();
    let other = |e: usize, v: usize| {
        let (_, a, b) = graph.edges[e];
        if a == v {
            b
        } else {
            a
        }
    };
    for root in 0..n {
        if seen[root] || graph.adjacency[root].is_empty() {
            continue;
        }
        // gather the component to find its canonical start
        let mut members = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            for &e in &graph.adjacency[v] {
                let w = other(e, v);
                if !seen[w] {
                    seen[w] = true;
                    members.push(w);
                }
            }
            i += 1;
        }
        let endpoints: Vec<usize> = members.iter().copied().filter(|&v| graph.adjacency[v].len() == 1).collect();
        let (kind, start) = match endpoints.iter().min() {
            Some(&s) => (ComponentKind::Path, s),
            None => (ComponentKind::Cycle, *members.iter().min().expect("non-empty")),
        };
        let first_edge = *graph.adjacency[start].iter().min_by_key(|&&e| other(e, start)).expect("start has an edge");
        let mut vertices = vec![start];
        let mut bars = Vec::new();
        let (mut v, mut e) = (start, first_edge);
        loop {
            bars.push(graph.edges[e].0);
            if let BarVertex::Cell(cell) = graph.vertices[v] {
                if graph.adjacency[v].len() == 2 {
                    free.insert(cell, side_of(graph.edges[e].0, cell));
                }
            }
            let w = other(e, v);
            if w == start {
                break;
            }
            vertices.push(w);
            match graph.adjacency[w].iter().find(|&&f| f != e) {
                Some(&f) => {
                    v = w;
                    e = f;
                }
                None => break,
            }
        }
        components.push(Component { kind, vertices: vertices.into_iter().map(|v| graph.vertices[v]).collect(), bars });
    }
    Orientation { components, free }
}

/// Checks the assignment against the graph: every degree-2 cell has a free
/// side along one of its own bars, and no internal bar is chosen from both
/// sides.
pub fn check_assignment(graph: &BarGraph, free: &FreeEdgeAssignment) -> Result<(), String> {
    let dims = graph.dims;
    for cell in dims.cells() {
        let idx = dims.index(cell);
        let bars: Vec<EdgeId> = graph.adjacency[idx].iter().map(|&e| graph.edges[e].0).collect();
        match (bars.len(), free.get(&cell)) {
            (2, None) => return Err(format!("two-exit cell {cell} has no free side")),
            (2, Some(&side)) => {
                if !bars.iter().any(|&b| side_of(b, cell) == side) {
                    return Err(format!("free side {side} of {cell} is not barred"));
                }
                if let Some(n) = dims.step(cell, side) {
                    if free.get(&n) == Some(&side.opposite()) {
                        return Err(format!("free sides of {cell} and {n} face each other"));
                    }
                }
            }
            (_, Some(_)) => return Err(format!("cell {cell} does not have two exits but has a free side")),
            (_, None) => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsl::BslPuzzle;

    fn cubic(w: usize, h: usize, bars: &[EdgeId]) -> CubicBslPuzzle {
        CubicBslPuzzle::new(BslPuzzle::new(GridDims::new(w, h).unwrap(), bars.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn barless_square_gives_four_paths() {
        let g = build_bar_graph(&cubic(2, 2, &[])).unwrap();
        for cell in g.dims().cells() {
            assert_eq!(g.degree(BarVertex::Cell(cell)), 2);
        }
        let o = orient(&g);
        assert_eq!(o.components.len(), 4);
        assert!(o.components.iter().all(|c| c.kind == ComponentKind::Path && c.vertices.len() == 3));
        assert_eq!(o.free.len(), 4);
        assert_eq!(check_assignment(&g, &o.free), Ok(()));
    }

    #[test]
    fn one_by_two_is_rejected() {
        let err = build_bar_graph(&cubic(2, 1, &[])).unwrap_err();
        assert_eq!(err, OrientationError::DegreeTooHigh { cell: CellCoord::new(0, 0), degree: 3 });
    }

    #[test]
    fn four_cell_bar_cycle() {
        // four bars meeting at the lattice point in the middle of a 4x4 board
        let bars = [EdgeId::horizontal(1, 1), EdgeId::vertical(2, 1), EdgeId::horizontal(1, 2), EdgeId::vertical(1, 1)];
        let g = build_bar_graph(&cubic(4, 4, &bars)).unwrap();
        let o = orient(&g);
        let cycles: Vec<&Component> = o.components.iter().filter(|c| c.kind == ComponentKind::Cycle).collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].vertices.len(), 4);
        assert_eq!(check_assignment(&g, &o.free), Ok(()));
        // the reverse direction round the cycle is just as good
        let mut reversed = o.free.clone();
        let ring = [(1, 1, Side::S), (1, 2, Side::E), (2, 2, Side::N), (2, 1, Side::W)];
        for (col, row, side) in ring {
            reversed.insert(CellCoord::new(col, row), side);
        }
        assert_eq!(check_assignment(&g, &reversed), Ok(()));
        assert_ne!(reversed, o.free);
    }

    #[test]
    fn orientation_is_deterministic() {
        let g = build_bar_graph(&cubic(4, 4, &[EdgeId::horizontal(1, 1), EdgeId::horizontal(1, 2)])).unwrap();
        assert_eq!(orient(&g), orient(&g));
        assert_eq!(orient(&g).debug_json(), orient(&g).debug_json());
    }
}
