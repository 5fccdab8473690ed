//! Cubic BSL → genre: every source cell becomes a T-metacell tile turned so
//! that its closed side faces a bar the loop cannot use.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Genre, GenrePuzzle};
use crate::bsl::{degenerate_cells, CubicBslPuzzle};
use crate::catalog::{Certified, GadgetDescriptor, TileLayout};
use crate::grid::{CellCoord, CellLoop, GridDims, Side};
use crate::orientation::{build_bar_graph, orient, OrientationError};
use crate::transform::Transform;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilePlacement {
    /// Source cell (or tile position for a degenerate manifest).
    pub cell: CellCoord,
    /// Top-left lattice point of the tile.
    pub origin: CellCoord,
    pub transform: Transform,
    /// Placed exit sides and the neighbouring source cell each one faces.
    pub exits: BTreeMap<Side, Option<CellCoord>>,
    /// Exit kept only to give a two-exit cell its third side.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub free: Option<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenreManifest {
    pub genre: Genre,
    pub source: GridDims,
    /// Tile layout size; equals `source` unless degenerate.
    pub tiles: GridDims,
    /// Output board, in cells.
    pub board: GridDims,
    /// Lattice points per tile side.
    pub pitch: usize,
    /// The source had a cell with fewer than two exits and was replaced by a
    /// fixed unsolvable two-tile board.
    pub degenerate: bool,
    pub cells: Vec<TilePlacement>,
}

impl GenreManifest {
    pub fn layout(&self) -> TileLayout {
        TileLayout { dims: self.tiles, transforms: self.cells.iter().map(|p| p.transform).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("the {0} gadget is not certified")]
    Uncertified(Genre),
    #[error("no allowed placement of the {genre} gadget closes side {closed} of {cell}")]
    NoTransform { genre: Genre, cell: CellCoord, closed: Side },
    #[error(transparent)]
    Orientation(#[from] OrientationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenreLiftError {
    #[error("degenerate manifests have no solutions to lift")]
    Degenerate,
    #[error("manifest is for {expected}, descriptor is for {found}")]
    GenreMismatch { expected: Genre, found: Genre },
    #[error("solution grid {found} does not match the manifest's source grid {expected}")]
    DimsMismatch { expected: GridDims, found: GridDims },
    #[error("source cell {cell} has {degree} transitions")]
    Degree { cell: CellCoord, degree: usize },
    #[error("transition from {cell} leaves through side {side}, which has no exit")]
    NoExit { cell: CellCoord, side: Side },
    #[error("tile for {cell} has no sub-solution for {a}-{b}")]
    MissingFragment { cell: CellCoord, a: Side, b: Side },
}

/// Replaces each cell of a cubic puzzle with a placed gadget tile.
pub fn reduce_to_genre(
    puzzle: &CubicBslPuzzle,
    desc: &GadgetDescriptor,
) -> Result<(GenrePuzzle, GenreManifest), ReduceError> {
    let genre = desc.genre();
    if desc.certified() == Certified::No {
        return Err(ReduceError::Uncertified(genre));
    }
    let src = puzzle.dims();
    if !degenerate_cells(puzzle.inner()).is_empty() {
        return Ok(canonical_unsolvable(src, desc));
    }
    let free = orient(&build_bar_graph(puzzle)?).free;
    let mut cells = Vec::with_capacity(src.cell_count());
    for cell in src.cells() {
        let mut sides: BTreeSet<Side> = puzzle.inner().open_sides(cell).into_iter().collect();
        let spare = free.get(&cell).copied();
        sides.extend(spare);
        let closed = Side::ALL.into_iter().find(|s| !sides.contains(s)).expect("cubic cells have a closed side");
        let transform = desc.transform_closing(closed).ok_or(ReduceError::NoTransform { genre, cell, closed })?;
        let exits = sides.iter().map(|&s| (s, src.step(cell, s))).collect();
        cells.push(TilePlacement { cell, origin: desc.tile_origin(cell), transform, exits, free: spare });
    }
    let manifest = GenreManifest {
        genre,
        source: src,
        tiles: src,
        board: desc.board_dims(src),
        pitch: desc.pitch(),
        degenerate: false,
        cells,
    };
    Ok((desc.build_board(&manifest.layout()), manifest))
}

/// Two tiles side by side with their closed sides facing: neither can reach
/// the other, so the board has no single loop.
fn canonical_unsolvable(source: GridDims, desc: &GadgetDescriptor) -> (GenrePuzzle, GenreManifest) {
    let tiles = GridDims::new(2, 1).expect("2x1");
    let cells: Vec<TilePlacement> = [(CellCoord::new(0, 0), Side::E), (CellCoord::new(1, 0), Side::W)]
        .into_iter()
        .map(|(cell, closed)| {
            let transform = desc.transform_closing(closed).expect("every gadget closes east and west");
            let exits = desc.placed_exits(transform).into_iter().map(|s| (s, None)).collect();
            TilePlacement { cell, origin: desc.tile_origin(cell), transform, exits, free: None }
        })
        .collect();
    let manifest = GenreManifest {
        genre: desc.genre(),
        source,
        tiles,
        board: desc.board_dims(tiles),
        pitch: desc.pitch(),
        degenerate: true,
        cells,
    };
    (desc.build_board(&manifest.layout()), manifest)
}

/// Expands a cubic solution into a genre solution on the manifest's board.
pub fn lift_to_genre(
    manifest: &GenreManifest,
    desc: &GadgetDescriptor,
    dims: GridDims,
    solution: &CellLoop,
) -> Result<CellLoop, GenreLiftError> {
    if manifest.degenerate {
        return Err(GenreLiftError::Degenerate);
    }
    if manifest.genre != desc.genre() {
        return Err(GenreLiftError::GenreMismatch { expected: manifest.genre, found: desc.genre() });
    }
    if manifest.source != dims || manifest.cells.len() != dims.cell_count() {
        return Err(GenreLiftError::DimsMismatch { expected: manifest.source, found: dims });
    }
    let mut sides: Vec<Vec<Side>> = vec![Vec::new(); dims.cell_count()];
    for e in &solution.transitions {
        let Some((a, b)) = e.endpoints().filter(|&(a, b)| dims.contains(a) && dims.contains(b)) else {
            return Err(GenreLiftError::DimsMismatch { expected: manifest.source, found: dims });
        };
        let s = a.direction_to(b).expect("adjacent");
        sides[dims.index(a)].push(s);
        sides[dims.index(b)].push(s.opposite());
    }
    let layout = manifest.layout();
    let mut out = BTreeSet::new();
    for p in &manifest.cells {
        let s = &sides[dims.index(p.cell)];
        if s.len() != 2 {
            return Err(GenreLiftError::Degree { cell: p.cell, degree: s.len() });
        }
        if let Some(&side) = s.iter().find(|side| !p.exits.contains_key(side)) {
            return Err(GenreLiftError::NoExit { cell: p.cell, side });
        }
        let path = desc.placed_path(p.cell, p.transform, s[0], s[1]).ok_or(GenreLiftError::MissingFragment {
            cell: p.cell,
            a: s[0],
            b: s[1],
        })?;
        out.extend(path);
        for &side in s {
            let link = desc.crossing(&layout, p.cell, side).ok_or(GenreLiftError::NoExit { cell: p.cell, side })?;
            out.insert(link);
        }
    }
    Ok(CellLoop::new(out))
}
