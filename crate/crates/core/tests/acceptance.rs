//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    check_free_sides, clue_deletions, fixture_puzzle, fixture_solution, open_sides, random_bsl, random_cubic,
};
use loopforge::bsl::{parity_unsat, solve_bsl_backtrack, solve_bsl_dp, verify_bsl, BslPuzzle, CubicBslPuzzle};
use loopforge::catalog::{certify_gadget, load_gadget, parse_descriptor, Certified, Verdict};
use loopforge::cubic::{
    all_exit_pairs, build_metacell_bank, lift_to_cubic, load_metacell, reduce_to_cubic, validate_metacell_bank,
};
use loopforge::format::{verify, AnyPuzzle, PuzzleKind, Solution};
use loopforge::genre::{lift_to_genre, reduce_to_genre, solve_genre, verify_genre, Genre};
use loopforge::grid::{CellCoord, CellLoop, EdgeId, GridDims, Side};
use loopforge::orientation::{build_bar_graph, orient};
use loopforge::outcome::{Outcome, TimeLimit};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Check);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {:.1}s, over the {}s limit", t.as_secs_f64(), limit.as_secs()))
}

fn metacell_certification() -> Check {
    let start = Instant::now();
    let t = load_metacell().map_err(|e| e.to_string())?;
    let dims = t.dims();
    ensure(dims.cell_count() == 35, || format!("{} cells", dims.cell_count()))?;
    let black = dims.cells().filter(|c| (c.col + c.row) % 2 == 0).count();
    ensure(black == 18, || format!("{black}/{} checkerboard split", 35 - black))?;
    for s in Side::ALL {
        let e = t.exit(s);
        ensure((e.col + e.row) % 2 == 0, || format!("exit {s} at {e} is on a white cell"))?;
        ensure(dims.step(e, s).is_none(), || format!("exit {s} at {e} is not on the {s} border"))?;
    }
    let p = t.as_puzzle();
    for cell in dims.cells() {
        let inside = open_sides(&p, cell).len();
        let exits = Side::ALL.iter().filter(|&&s| t.exit(s) == cell).count();
        ensure(inside + exits <= 3, || format!("{cell} has {} exits with its exit open", inside + exits))?;
        ensure(inside >= 1, || format!("{cell} is sealed off"))?;
    }
    let bank = build_metacell_bank(&t).map_err(|e| e.to_string())?;
    validate_metacell_bank(&t, &bank).map_err(|e| e.to_string())?;
    for pair in all_exit_pairs() {
        let frag = &bank.fragments[&pair];
        ensure(walks_every_cell(dims, &frag.transitions, t.exit(pair.0), t.exit(pair.1)), || {
            format!("fragment {}-{} is not a covering path", pair.0, pair.1)
        })?;
    }
    within(start, Duration::from_secs(10), "metacell certification")?;
    Ok("35 cells, 18/17 split, 4 black exits, cubic, 6 covering paths".into())
}

/// Follows `edges` from `from` and reports whether the walk ends at `to`
/// after visiting every cell once.
fn walks_every_cell(dims: GridDims, edges: &BTreeSet<EdgeId>, from: CellCoord, to: CellCoord) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut at = from;
    loop {
        let next: Vec<CellCoord> = edges
            .iter()
            .filter_map(|e| e.endpoints())
            .filter_map(|(a, b)| {
                if a == at {
                    Some(b)
                } else if b == at {
                    Some(a)
                } else {
                    None
                }
            })
            .filter(|c| !seen.contains(c))
            .collect();
        match next.as_slice() {
            [] => return at == to && seen.len() == dims.cell_count(),
            [n] => {
                seen.insert(*n);
                at = *n;
            }
            _ => return false,
        }
    }
}

fn subsets(dims: GridDims) -> impl Iterator<Item = BslPuzzle> {
    let edges = dims.internal_edges();
    (0u32..1 << edges.len()).map(move |mask| {
        let bars = edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
        BslPuzzle::new(dims, bars).unwrap()
    })
}

fn cubic_equivalence() -> Check {
    let start = Instant::now();
    let mut sat = 0;
    for src in subsets(GridDims::new(2, 2).unwrap()) {
        let (image, _) = reduce_to_cubic(&src);
        ensure(image.dims() == GridDims::new(10, 14).unwrap(), || format!("image is {}", image.dims()))?;
        let a = solve_bsl_dp(&src).map_err(|e| e.to_string())?;
        let b = solve_bsl_dp(image.inner()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("bars {:?}: source {a}, image {b}", src.bars()))?;
        sat += a as usize;
    }
    within(start, Duration::from_secs(300), "cubic equivalence")?;
    Ok(format!("16 subsets agree ({sat} sat)"))
}

fn oracle_cross_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sat = 0;
    for i in 0..500 {
        let p = random_bsl(&mut rng, 4, 0.1);
        let dp = solve_bsl_dp(&p).map_err(|e| e.to_string())?;
        let bt = solve_bsl_backtrack(&p, TimeLimit::UNLIMITED).verdict();
        ensure(bt == Some(dp), || format!("instance {i}: dp {dp}, backtracking {bt:?}"))?;
        sat += dp as usize;
    }
    Ok(format!("500 instances agree ({sat} sat)"))
}

fn parity() -> Check {
    let mut odd = 0;
    for w in 1..=5 {
        for h in 1..=5 {
            let p = BslPuzzle::barless(GridDims::new(w, h).unwrap());
            let both_odd = w % 2 == 1 && h % 2 == 1;
            ensure(parity_unsat(&p) == both_odd, || format!("parity_unsat wrong on {w}x{h}"))?;
            if both_odd {
                ensure(solve_bsl_dp(&p) == Ok(false), || format!("dp solves {w}x{h}"))?;
                ensure(solve_bsl_backtrack(&p, TimeLimit::UNLIMITED) == Outcome::Unsat, || {
                    format!("backtracking solves {w}x{h}")
                })?;
                odd += 1;
            }
        }
    }
    Ok(format!("{odd} odd-by-odd grids unsat by both oracles"))
}

fn orientation() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances: Vec<CubicBslPuzzle> = (0..200).map(|_| random_cubic(&mut rng, 10)).collect();
    match fixture_puzzle("cubic-bsl-figure2") {
        AnyPuzzle::Cubic(p) => instances.push(p),
        other => return Err(format!("figure fixture parsed as {}", other.kind())),
    }
    let mut two_exit = 0;
    for (i, p) in instances.iter().enumerate() {
        let graph = build_bar_graph(p).map_err(|e| format!("instance {i}: {e}"))?;
        let o = orient(&graph);
        check_free_sides(p.inner(), &o.free).map_err(|e| format!("instance {i}: {e}"))?;
        two_exit += o.free.len();
    }
    within(start, Duration::from_secs(30), "orientation")?;
    Ok(format!("201 instances, {two_exit} two-exit cells, no facing free sides"))
}

fn gadget_certification() -> Check {
    let budget = TimeLimit::millis(60_000);
    let mut notes = Vec::new();
    for genre in Genre::ALL {
        let cert = certify_gadget(&load_gadget(genre).map_err(|e| e.to_string())?, budget);
        let v = |k: char| cert.conditions[&k].verdict;
        match genre {
            Genre::Yajilin | Genre::SimpleLoop => {
                for (k, r) in &cert.conditions {
                    ensure(r.verdict == Verdict::Pass, || format!("{genre} ({k}) {:?}: {}", r.verdict, r.detail))?;
                }
                ensure(cert.certified == Certified::Yes, || format!("{genre} is {}", cert.certified))?;
            }
            Genre::Masyu | Genre::Slitherlink => {
                for k in ['c', 'd', 'e'] {
                    ensure(matches!(v(k), Verdict::Pass | Verdict::Witnessed), || format!("{genre} ({k}) {:?}", v(k)))?;
                }
                if genre == Genre::Slitherlink {
                    ensure(v('a') == Verdict::BudgetLimited, || format!("slitherlink (a) {:?}", v('a')))?;
                }
            }
        }
        notes.push(format!("{genre} {}", cert.certified));
    }
    let (cell, text) = clue_deletions(include_str!("../catalog/yajilin.txt"), b'#')
        .into_iter()
        .find(|(cell, _)| *cell == (0, 1))
        .ok_or("yajilin tile has no grey cell at (0,1)")?;
    let mutant = parse_descriptor(&text).map_err(|e| e.to_string())?;
    let cert = certify_gadget(&mutant, budget);
    let failed: Vec<char> =
        cert.conditions.iter().filter(|(_, r)| r.verdict == Verdict::Fail).map(|(k, _)| *k).collect();
    ensure(!failed.is_empty(), || format!("clearing yajilin grey cell {cell:?} went unnoticed"))?;
    Ok(format!("{}; clearing yajilin grey {cell:?} fails {failed:?}", notes.join(", ")))
}

fn forward_soundness() -> Check {
    let start = Instant::now();
    let AnyPuzzle::Bsl(src) = fixture_puzzle("bsl-4x4") else {
        return Err("bsl fixture has the wrong kind".into());
    };
    let tour = fixture_solution("bsl-4x4").tour;
    verify_bsl(&src, &tour).map_err(|e| e.to_string())?;
    let (cubic, cm) = reduce_to_cubic(&src);
    let lifted = lift_to_cubic(&cm, src.dims(), &tour).map_err(|e| e.to_string())?;
    verify_bsl(cubic.inner(), &lifted).map_err(|e| format!("cubic: {e}"))?;
    let mut sizes = Vec::new();
    for genre in Genre::ALL {
        let desc = load_gadget(genre).map_err(|e| e.to_string())?;
        let (board, gm) = reduce_to_genre(&cubic, &desc).map_err(|e| e.to_string())?;
        let genre_tour = lift_to_genre(&gm, &desc, cubic.dims(), &lifted).map_err(|e| format!("{genre}: {e}"))?;
        verify_genre(&board, &genre_tour).map_err(|e| format!("{genre}: {e}"))?;
        sizes.push(format!("{genre} {}", board.dims()));
    }
    within(start, Duration::from_secs(120), "forward soundness")?;
    Ok(format!("4 lifts verify ({})", sizes.join(", ")))
}

fn small_equivalence() -> Check {
    let start = Instant::now();
    let limit = TimeLimit::millis(60_000);
    let mut sources: Vec<BslPuzzle> = subsets(GridDims::new(2, 1).unwrap()).collect();
    sources.extend(subsets(GridDims::new(2, 2).unwrap()));
    sources.extend(subsets(GridDims::new(2, 3).unwrap()));
    sources.extend(subsets(GridDims::new(3, 2).unwrap()));
    let (mut runs, mut sat) = (0, 0);
    for genre in [Genre::SimpleLoop, Genre::Yajilin] {
        let desc = load_gadget(genre).map_err(|e| e.to_string())?;
        for src in &sources {
            let expected = solve_bsl_dp(src).map_err(|e| e.to_string())?;
            let cubic = CubicBslPuzzle::new(src.clone()).map_err(|e| e.to_string())?;
            let (board, _) = reduce_to_genre(&cubic, &desc).map_err(|e| e.to_string())?;
            let got = solve_genre(&board, limit).verdict();
            ensure(got == Some(expected), || {
                format!(
                    "{genre} image of {} bars {:?}: expected {expected}, solver says {got:?}",
                    src.dims(),
                    src.bars()
                )
            })?;
            runs += 1;
            sat += expected as usize;
        }
    }
    within(start, Duration::from_secs(600), "small-scale equivalence")?;
    Ok(format!("{runs} source/genre pairs agree, {sat} sat (every bar subset of 2x1, 2x2, 2x3, 3x2)"))
}

fn lattice(s: &Solution) -> GridDims {
    match s.kind {
        PuzzleKind::Genre(g) if g.uses_dots() => GridDims::new(s.dims.width() + 1, s.dims.height() + 1).unwrap(),
        _ => s.dims,
    }
}

fn fixture_conformance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut killed = 0;
    for name in ["bsl-4x4", "cubic-bsl-4x4", "slitherlink-5x5", "masyu-6x6", "yajilin-6x6", "simple-loop-5x5"] {
        let p = fixture_puzzle(name);
        let s = fixture_solution(name);
        verify(&p, &s).map_err(|e| format!("{name}: {e}"))?;
        let mut edges = lattice(&s).internal_edges();
        edges.shuffle(&mut rng);
        for e in edges.iter().take(24) {
            let mut on = s.tour.transitions.clone();
            if !on.remove(e) {
                on.insert(*e);
            }
            let mutant = Solution { tour: CellLoop::new(on), ..s.clone() };
            ensure(verify(&p, &mutant).is_err(), || format!("{name}: toggling {e} is accepted"))?;
            killed += 1;
        }
    }
    Ok(format!("6 fixtures verify, {killed}/{killed} mutations rejected"))
}

const CRITERIA: [Criterion; 9] = [
    (1, "metacell certification", metacell_certification),
    (2, "cubic reduction equivalence", cubic_equivalence),
    (3, "oracle cross-check", oracle_cross_check),
    (4, "parity", parity),
    (5, "orientation", orientation),
    (6, "gadget certification", gadget_certification),
    (7, "forward soundness", forward_soundness),
    (8, "small-scale equivalence", small_equivalence),
    (9, "fixture conformance", fixture_conformance),
];

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (id, name, run) in CRITERIA {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id} PASS [{secs:.1}s] {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id} FAIL [{secs:.1}s] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failures, CRITERIA.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
