//! `roundtrip`: solve a BSL source, reduce it twice, lift the solution twice
//! and verify, recording a verdict per stage.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use loopforge::bsl::{parity_unsat, solve_bsl_backtrack};
use loopforge::cubic::{lift_to_cubic, reduce_to_cubic, CubicManifest};
use loopforge::format::AnyPuzzle;
use loopforge::genre::{lift_to_genre, reduce_to_genre, solve_genre, verify_genre, Genre};
use loopforge::grid::CellLoop;
use loopforge::outcome::{Outcome, TimeLimit};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{emit, gadget, read_puzzle, size, CmdResult, Failure, EXIT_PARSE};

/// Genre boards above this many cells are not searched when confirming unsat.
const IMAGE_CHECK_CELLS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StageVerdict {
    Pass,
    Fail,
    Skipped,
    BudgetSkipped,
}

#[derive(Debug, Serialize)]
struct Stage {
    stage: &'static str,
    verdict: StageVerdict,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u64>,
}

#[derive(Debug, Serialize)]
struct RunReport {
    command: Vec<String>,
    /// SHA-256 of each input file.
    inputs: BTreeMap<String, String>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u64>,
    stages: Vec<Stage>,
}

struct Recorder {
    timing: bool,
    stages: Vec<Stage>,
    clock: Instant,
}

impl Recorder {
    fn push(&mut self, stage: &'static str, verdict: StageVerdict, detail: impl Into<String>) {
        let elapsed_ms = self.timing.then(|| self.clock.elapsed().as_millis() as u64);
        self.stages.push(Stage { stage, verdict, detail: detail.into(), elapsed_ms });
        self.clock = Instant::now();
    }

    fn failed(&self) -> bool {
        self.stages.iter().any(|s| s.verdict == StageVerdict::Fail)
    }
}

pub fn run(file: &Path, genre: Genre, budget: u64, timing: bool) -> CmdResult {
    let start = Instant::now();
    let bytes = std::fs::read(file).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", file.display())))?;
    let puzzle = read_puzzle(file)?;
    let bsl = match &puzzle {
        AnyPuzzle::Bsl(p) => p.clone(),
        AnyPuzzle::Cubic(p) => p.inner().clone(),
        AnyPuzzle::Genre(_) => return Err(Failure::new(EXIT_PARSE, "roundtrip takes a bsl or cubic-bsl puzzle")),
    };
    let desc = gadget(genre)?;
    let limit = TimeLimit::millis(budget);
    let mut rec = Recorder { timing, stages: Vec::new(), clock: Instant::now() };

    let source = if parity_unsat(&bsl) { Outcome::Unsat } else { solve_bsl_backtrack(&bsl, limit) };
    let source_tour: Option<CellLoop> = match &source {
        Outcome::Solved(t) => {
            rec.push("source-solve", StageVerdict::Pass, format!("sat, {} transitions", t.len()));
            Some(t.clone())
        }
        Outcome::Unsat => {
            rec.push("source-solve", StageVerdict::Pass, "unsat");
            None
        }
        Outcome::Timeout => {
            rec.push("source-solve", StageVerdict::BudgetSkipped, format!("no verdict within {budget} ms"));
            None
        }
    };

    let (cubic, cubic_manifest) = match &puzzle {
        AnyPuzzle::Cubic(c) => {
            rec.push("cubic-reduce", StageVerdict::Skipped, "input is already cubic");
            (c.clone(), None)
        }
        _ => {
            let (image, m) = reduce_to_cubic(&bsl);
            rec.push("cubic-reduce", StageVerdict::Pass, format!("{} -> {}", size(m.source), size(m.image)));
            (image, Some(m))
        }
    };

    let (board, manifest) = match reduce_to_genre(&cubic, &desc) {
        Ok(r) => r,
        Err(e) => {
            rec.push("genre-reduce", StageVerdict::Fail, e.to_string());
            return finish(rec, file, &bytes, start);
        }
    };
    let note = if manifest.degenerate { ", degenerate source: fixed unsolvable two-tile board" } else { "" };
    rec.push("genre-reduce", StageVerdict::Pass, format!("{} -> {}{note}", size(cubic.dims()), size(manifest.board)));

    match source_tour {
        Some(tour) => {
            let lifted = lift_through(cubic_manifest.as_ref(), &tour)
                .and_then(|t| lift_to_genre(&manifest, &desc, cubic.dims(), &t).map_err(|e| e.to_string()));
            match lifted {
                Err(e) => rec.push("lift", StageVerdict::Fail, e),
                Ok(t) => {
                    rec.push("lift", StageVerdict::Pass, format!("{} edges", t.len()));
                    match verify_genre(&board, &t) {
                        Ok(()) => rec.push("verify", StageVerdict::Pass, format!("{genre} verifier accepts the lift")),
                        Err(e) => rec.push("verify", StageVerdict::Fail, e.to_string()),
                    }
                }
            }
        }
        None if source.verdict() == Some(false) => {
            if board.dims().cell_count() > IMAGE_CHECK_CELLS {
                rec.push(
                    "image-check",
                    StageVerdict::BudgetSkipped,
                    format!("{} board is too large to search", size(board.dims())),
                );
            } else {
                match solve_genre(&board, limit) {
                    Outcome::Unsat => rec.push("image-check", StageVerdict::Pass, "genre image is unsat"),
                    Outcome::Solved(_) => rec.push("image-check", StageVerdict::Fail, "genre image has a solution"),
                    Outcome::Timeout => {
                        rec.push("image-check", StageVerdict::BudgetSkipped, format!("no verdict within {budget} ms"))
                    }
                }
            }
        }
        None => rec.push("lift", StageVerdict::Skipped, "source has no verdict"),
    }
    finish(rec, file, &bytes, start)
}

/// Source loop on the cubic grid; a cubic input is its own image.
fn lift_through(manifest: Option<&CubicManifest>, tour: &CellLoop) -> Result<CellLoop, String> {
    match manifest {
        Some(m) => lift_to_cubic(m, m.source, tour).map_err(|e| e.to_string()),
        None => Ok(tour.clone()),
    }
}

fn finish(rec: Recorder, file: &Path, bytes: &[u8], start: Instant) -> CmdResult {
    let failed = rec.failed();
    let inconclusive = rec.stages.iter().any(|s| s.stage == "source-solve" && s.verdict == StageVerdict::BudgetSkipped);
    let verdict = match (failed, inconclusive) {
        (true, _) => "fail",
        (false, true) => "inconclusive",
        (false, false) => "pass",
    };
    let report = RunReport {
        command: std::env::args().skip(1).collect(),
        inputs: BTreeMap::from([(file.display().to_string(), hex::encode(Sha256::digest(bytes)))]),
        verdict,
        elapsed_ms: rec.timing.then(|| start.elapsed().as_millis() as u64),
        stages: rec.stages,
    };
    emit(&report, None)?;
    Ok(match verdict {
        "pass" => 0,
        "inconclusive" => 2,
        _ => 1,
    })
}
