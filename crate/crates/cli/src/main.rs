use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use loopforge::bsl::{solve_bsl_backtrack, solve_bsl_dp, BslPuzzle, CubicBslPuzzle};
use loopforge::catalog::{certify_gadget, load_gadget, load_gadget_from, DescriptorError, GadgetDescriptor};
use loopforge::cubic::{lift_to_cubic, reduce_to_cubic, CubicManifest};
use loopforge::format::{parse_puzzle, parse_solution, to_text, verify, AnyPuzzle, PuzzleKind, Solution};
use loopforge::genre::{lift_to_genre, reduce_to_genre, solve_genre, Genre, GenreManifest, ReduceError};
use loopforge::grid::GridDims;
use loopforge::outcome::{Outcome, TimeLimit};
use serde::{Deserialize, Serialize};

mod roundtrip;

/// Exit codes beyond the 0/1/2 verdicts.
const EXIT_PARSE: u8 = 64;
const EXIT_MISMATCH: u8 = 65;
const EXIT_UNAVAILABLE: u8 = 66;

#[derive(Parser)]
#[command(name = "loopforge", version, about = "Loop puzzle solvers and reductions from Barred Simple Loop")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a puzzle; exit 0 sat, 1 unsat, 2 timeout.
    Solve {
        file: PathBuf,
        /// Time budget in milliseconds.
        #[arg(long, default_value_t = 60_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Oracle::Backtrack)]
        oracle: Oracle,
    },
    /// Check a solution against a puzzle; exit 0 valid, 1 invalid.
    Verify { puzzle: PathBuf, solution: PathBuf },
    /// Reduce a BSL puzzle to Cubic BSL or one of the loop genres.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        to: Target,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Carry a source solution through a reduction manifest.
    Lift {
        manifest: PathBuf,
        solution: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve, reduce, lift and verify in one go, printing a JSON report.
    Roundtrip {
        file: PathBuf,
        #[arg(long)]
        genre: Genre,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run the gadget certification procedure for one genre.
    Certify {
        #[arg(long)]
        genre: Genre,
        #[arg(long, default_value_t = 60_000)]
        budget: u64,
        #[arg(long)]
        timing: bool,
    },
    /// List the gadget descriptors.
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Backtrack,
    Dp,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Cubic,
    Genre(Genre),
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cubic" | "cubic-bsl" => Ok(Target::Cubic),
            _ => s.parse().map(Target::Genre).map_err(|_| format!("unknown target `{s}`")),
        }
    }
}

/// Chained manifest written by `reduce` and read by `lift`.
#[derive(Debug, Serialize, Deserialize)]
struct PipelineManifest {
    source: PuzzleKind,
    source_dims: GridDims,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cubic: Option<CubicManifest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genre: Option<GenreManifest>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { file, budget, oracle } => cmd_solve(&file, budget, oracle),
        Command::Verify { puzzle, solution } => cmd_verify(&puzzle, &solution),
        Command::Reduce { file, to, output, manifest } => cmd_reduce(&file, to, output.as_deref(), manifest.as_deref()),
        Command::Lift { manifest, solution, output } => cmd_lift(&manifest, &solution, output.as_deref()),
        Command::Roundtrip { file, genre, budget, timing } => roundtrip::run(&file, genre, budget, timing),
        Command::Certify { genre, budget, timing } => cmd_certify(genre, budget, timing),
        Command::Catalog => cmd_catalog(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn read_puzzle(path: &Path) -> Result<AnyPuzzle, Failure> {
    parse_puzzle(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn read_solution(path: &Path) -> Result<Solution, Failure> {
    parse_solution(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let json = serde_json::to_value(value).expect("values serialise");
    let text = to_text(&json);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::new(1, e))?;
            Ok(())
        }
    }
}

/// Descriptor from `LOOPFORGE_CATALOG` when set, else the shipped one.
pub(crate) fn gadget(genre: Genre) -> Result<GadgetDescriptor, Failure> {
    let loaded = match std::env::var_os("LOOPFORGE_CATALOG") {
        Some(dir) => load_gadget_from(Path::new(&dir), genre),
        None => load_gadget(genre),
    };
    loaded.map_err(|e| match e {
        DescriptorError::Io { .. } => Failure::new(EXIT_UNAVAILABLE, e),
        _ => Failure::new(EXIT_UNAVAILABLE, format!("{genre} descriptor is invalid: {e}")),
    })
}

/// The BSL view of a bsl or cubic-bsl input.
fn as_bsl(puzzle: &AnyPuzzle) -> Option<&BslPuzzle> {
    match puzzle {
        AnyPuzzle::Bsl(p) => Some(p),
        AnyPuzzle::Cubic(p) => Some(p.inner()),
        AnyPuzzle::Genre(_) => None,
    }
}

fn cmd_solve(file: &Path, budget: u64, oracle: Oracle) -> CmdResult {
    let puzzle = read_puzzle(file)?;
    let limit = TimeLimit::millis(budget);
    let kind = puzzle.kind();
    let outcome = match (&puzzle, oracle) {
        (AnyPuzzle::Genre(g), Oracle::Backtrack) => solve_genre(g, limit),
        (AnyPuzzle::Genre(_), Oracle::Dp) => {
            return Err(Failure::new(EXIT_PARSE, "the dp oracle only handles bsl and cubic-bsl puzzles"))
        }
        (p, Oracle::Backtrack) => solve_bsl_backtrack(as_bsl(p).expect("bsl"), limit),
        (p, Oracle::Dp) => {
            let bsl = as_bsl(p).expect("bsl");
            match solve_bsl_dp(bsl) {
                Err(e) => return Err(Failure::new(EXIT_PARSE, e)),
                Ok(false) => Outcome::Unsat,
                // the DP decides; the witness comes from the exact search
                Ok(true) => solve_bsl_backtrack(bsl, limit),
            }
        }
    };
    match outcome {
        Outcome::Solved(tour) => {
            emit(&Solution { kind, dims: puzzle.dims(), tour }.to_json(), None)?;
            Ok(0)
        }
        Outcome::Unsat => {
            eprintln!("unsat");
            Ok(1)
        }
        Outcome::Timeout => {
            eprintln!("timeout after {budget} ms");
            Ok(2)
        }
    }
}

fn cmd_verify(puzzle: &Path, solution: &Path) -> CmdResult {
    let p = read_puzzle(puzzle)?;
    let s = read_solution(solution)?;
    match verify(&p, &s) {
        Ok(()) => {
            println!("ok");
            Ok(0)
        }
        Err(e) if e.is_mismatch() => Err(Failure::new(EXIT_MISMATCH, e)),
        Err(e) => {
            println!("violation: {e}");
            Ok(1)
        }
    }
}

fn size(d: GridDims) -> String {
    format!("{}×{}", d.width(), d.height())
}

fn cmd_reduce(file: &Path, to: Target, output: Option<&Path>, manifest_out: Option<&Path>) -> CmdResult {
    let puzzle = read_puzzle(file)?;
    let mut manifest = PipelineManifest { source: puzzle.kind(), source_dims: puzzle.dims(), cubic: None, genre: None };
    let mut sizes = vec![puzzle.dims()];
    let cubic: CubicBslPuzzle = match (&puzzle, to) {
        (AnyPuzzle::Genre(_), _) => {
            return Err(Failure::new(EXIT_PARSE, "only bsl and cubic-bsl puzzles can be reduced"))
        }
        (AnyPuzzle::Cubic(c), Target::Genre(_)) => c.clone(),
        (p, _) => {
            let (image, m) = reduce_to_cubic(as_bsl(p).expect("bsl"));
            sizes.push(m.image);
            manifest.cubic = Some(m);
            image
        }
    };
    let result = match to {
        Target::Cubic => AnyPuzzle::Cubic(cubic),
        Target::Genre(genre) => {
            let desc = gadget(genre)?;
            let (board, m) = reduce_to_genre(&cubic, &desc).map_err(|e| match e {
                ReduceError::Uncertified(_) => Failure::new(EXIT_UNAVAILABLE, e),
                _ => Failure::new(1, e),
            })?;
            if m.degenerate {
                eprintln!("source has a cell with fewer than two exits; emitting the fixed unsolvable board");
            }
            sizes.push(m.board);
            manifest.genre = Some(m);
            AnyPuzzle::Genre(board)
        }
    };
    eprintln!("{}", sizes.into_iter().map(size).collect::<Vec<_>>().join(" -> "));
    emit(&result.to_json(), output)?;
    if let Some(path) = manifest_out {
        emit(&manifest, Some(path))?;
    }
    Ok(0)
}

fn cmd_lift(manifest: &Path, solution: &Path, output: Option<&Path>) -> CmdResult {
    let m: PipelineManifest = serde_json::from_str(&read(manifest)?)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", manifest.display())))?;
    let s = read_solution(solution)?;
    if s.kind != m.source || s.dims != m.source_dims {
        return Err(Failure::new(
            EXIT_MISMATCH,
            format!(
                "solution is a {} {}, manifest expects a {} {}",
                size(s.dims),
                s.kind,
                size(m.source_dims),
                m.source
            ),
        ));
    }
    let mut lifted = s;
    if let Some(cm) = &m.cubic {
        let tour = lift_to_cubic(cm, lifted.dims, &lifted.tour).map_err(|e| Failure::new(1, e))?;
        lifted = Solution { kind: PuzzleKind::CubicBsl, dims: cm.image, tour };
    }
    if let Some(gm) = &m.genre {
        let desc = gadget(gm.genre)?;
        let tour = lift_to_genre(gm, &desc, lifted.dims, &lifted.tour).map_err(|e| Failure::new(1, e))?;
        lifted = Solution { kind: PuzzleKind::Genre(gm.genre), dims: gm.board, tour };
    }
    emit(&lifted.to_json(), output)?;
    Ok(0)
}

fn cmd_certify(genre: Genre, budget: u64, timing: bool) -> CmdResult {
    let desc = gadget(genre)?;
    let mut cert = certify_gadget(&desc, TimeLimit::millis(budget));
    if !timing {
        cert.elapsed_ms = None;
    }
    emit(&cert, None)?;
    Ok(0)
}

fn cmd_catalog() -> CmdResult {
    for genre in Genre::ALL {
        let d = gadget(genre)?;
        let transforms: Vec<&str> = d.transforms().iter().map(|t| t.name()).collect();
        println!("{genre} {0}x{0} transforms={1} certified={2}", d.size(), transforms.join(","), d.certified());
    }
    Ok(0)
}
