//! Instance generators and independent checks shared by the test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use loopforge::bsl::{BslPuzzle, CubicBslPuzzle};
use loopforge::format::{parse_puzzle, parse_solution, AnyPuzzle, Solution};
use loopforge::grid::{CellCoord, EdgeId, GridDims, Side};
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_puzzle(name: &str) -> AnyPuzzle {
    parse_puzzle(&std::fs::read_to_string(fixture_path(&format!("{name}.json"))).unwrap()).unwrap()
}

pub fn fixture_solution(name: &str) -> Solution {
    parse_solution(&std::fs::read_to_string(fixture_path(&format!("{name}.solution.json"))).unwrap()).unwrap()
}

pub fn random_bsl(rng: &mut impl Rng, max: usize, density: f64) -> BslPuzzle {
    let dims = GridDims::new(rng.gen_range(1..=max), rng.gen_range(1..=max)).unwrap();
    let bars: Vec<EdgeId> = dims.internal_edges().into_iter().filter(|_| rng.gen_bool(density)).collect();
    BslPuzzle::new(dims, bars).unwrap()
}

/// Sides of `cell` that lead to an in-grid neighbour without a bar.
pub fn open_sides(p: &BslPuzzle, cell: CellCoord) -> Vec<Side> {
    let dims = p.dims();
    Side::ALL
        .into_iter()
        .filter(|&s| dims.step(cell, s).is_some() && !p.bars().contains(&dims.edge_towards(cell, s)))
        .collect()
}

/// A cubic instance in which every cell keeps two or three exits.
pub fn random_cubic(rng: &mut impl Rng, max: usize) -> CubicBslPuzzle {
    loop {
        let dims = GridDims::new(rng.gen_range(2..=max), rng.gen_range(2..=max)).unwrap();
        let mut bars: BTreeSet<EdgeId> = dims.internal_edges().into_iter().filter(|_| rng.gen_bool(0.15)).collect();
        for cell in dims.cells() {
            let p = BslPuzzle::new(dims, bars.iter().copied()).unwrap();
            let open = open_sides(&p, cell);
            if open.len() == 4 {
                bars.insert(dims.edge_towards(cell, open[rng.gen_range(0..4)]));
            }
        }
        let p = BslPuzzle::new(dims, bars).unwrap();
        if dims.cells().all(|c| (2..=3).contains(&open_sides(&p, c).len())) {
            return CubicBslPuzzle::new(p).unwrap();
        }
    }
}

/// Every two-exit cell has a free side on a barred or border side, and no
/// two free sides face each other across an internal edge.
pub fn check_free_sides(p: &BslPuzzle, free: &BTreeMap<CellCoord, Side>) -> Result<(), String> {
    let dims = p.dims();
    for cell in dims.cells() {
        let open = open_sides(p, cell);
        match (open.len(), free.get(&cell)) {
            (2, None) => return Err(format!("{cell} has two exits and no free side")),
            (2, Some(s)) if open.contains(s) => return Err(format!("free side {s} of {cell} is already open")),
            (2, Some(&s)) => {
                if let Some(n) = dims.step(cell, s) {
                    if free.get(&n) == Some(&s.opposite()) {
                        return Err(format!("free sides of {cell} and {n} face each other"));
                    }
                }
            }
            (_, Some(_)) => return Err(format!("{cell} has {} exits but a free side", open.len())),
            (_, None) => {}
        }
    }
    Ok(())
}

/// Copies of a descriptor with one `mark` cell of its clue art cleared, keyed
/// by the cell's (col, row) in the tile.
pub fn clue_deletions(text: &str, mark: u8) -> Vec<((usize, usize), String)> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| *l == "clues").unwrap() + 1;
    let mut out = Vec::new();
    for (r, line) in lines[start..].iter().take_while(|l| !l.is_empty()).enumerate() {
        for (c, &b) in line.as_bytes().iter().step_by(2).enumerate() {
            if b != mark {
                continue;
            }
            let mut copy: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
            let mut row = copy[start + r].clone().into_bytes();
            row[2 * c] = b'.';
            copy[start + r] = String::from_utf8(row).unwrap();
            out.push(((c, r), copy.join("\n") + "\n"));
        }
    }
    out
}
