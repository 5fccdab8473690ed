//! The shipped fixture pairs parse, round-trip byte for byte and verify, and
//! every single-edge change to a solution is caught.

use std::fs;
use std::path::PathBuf;

use loopforge::format::{parse_puzzle, parse_solution, to_text, verify, AnyPuzzle, Solution};
use loopforge::grid::{CellLoop, GridDims};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PAIRS: [&str; 6] = ["bsl-4x4", "cubic-bsl-4x4", "slitherlink-5x5", "masyu-6x6", "yajilin-6x6", "simple-loop-5x5"];

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(name: &str) -> String {
    fs::read_to_string(dir().join(name)).unwrap()
}

fn pair(name: &str) -> (AnyPuzzle, Solution) {
    let p = parse_puzzle(&read(&format!("{name}.json"))).unwrap();
    let s = parse_solution(&read(&format!("{name}.solution.json"))).unwrap();
    (p, s)
}

fn lattice(solution: &Solution) -> GridDims {
    match solution.kind {
        loopforge::format::PuzzleKind::Genre(g) if g.uses_dots() => {
            GridDims::new(solution.dims.width() + 1, solution.dims.height() + 1).unwrap()
        }
        _ => solution.dims,
    }
}

#[test]
fn fixtures_round_trip_unchanged() {
    let mut names: Vec<String> =
        PAIRS.iter().flat_map(|n| [format!("{n}.json"), format!("{n}.solution.json")]).collect();
    names.push("cubic-bsl-figure2.json".into());
    for name in names {
        let text = read(&name);
        let json = if name.contains(".solution") {
            parse_solution(&text).unwrap().to_json()
        } else {
            parse_puzzle(&text).unwrap().to_json()
        };
        assert_eq!(to_text(&json), text, "{name}");
    }
}

#[test]
fn fixture_solutions_verify() {
    for name in PAIRS {
        let (p, s) = pair(name);
        assert_eq!(verify(&p, &s), Ok(()), "{name}");
    }
}

#[test]
fn single_edge_mutations_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in PAIRS {
        let (p, s) = pair(name);
        let mut edges = lattice(&s).internal_edges();
        edges.shuffle(&mut rng);
        for e in edges.iter().take(24) {
            let mut on = s.tour.transitions.clone();
            if !on.remove(e) {
                on.insert(*e);
            }
            let mutant = Solution { tour: CellLoop::new(on), ..s.clone() };
            assert!(verify(&p, &mutant).is_err(), "{name}: toggling {e} was accepted");
        }
    }
}

#[test]
fn solution_of_another_genre_is_a_mismatch() {
    let (masyu, _) = pair("masyu-6x6");
    let (_, bsl) = pair("bsl-4x4");
    assert!(verify(&masyu, &bsl).unwrap_err().is_mismatch());
}
