//! Command-line interface: randomized verification sweeps, explicit
//! division-recursion checks, and region-map plots.
//!
//! Exit codes: `0` when every certificate holds, `1` when a violation was
//! found, `2` when trials stayed degenerate after the retry budget (or an
//! instance could not be built), `64` for usage errors, `74` for output
//! I/O failures. Reports on stdout are byte-deterministic for a fixed
//! command line; wall-clock timing goes to stderr and the `elapsed_ms`
//! field is zeroed in JSON output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::child_seed;
use crate::loewner::{
    bol_sweep, claim1_pair, claim2_pair, deformation_sweep, dual_agreement_sweep,
    fixed_pair_sweep, recursion_chain, verify_theorem, ChainStage, LoewnerInstance, SweepConfig,
    VerificationReport,
};
use crate::polyops::{random_interlaced_pair, InterlacedPair, PolyError};
use crate::svg::render_svg;
use crate::trigpoly::TrigPoly;
use crate::winding::{grid_rotation_numbers, RegionMap, REGION_SENTINEL};

#[derive(Debug, Parser)]
#[command(name = "holonomic", version, about = "Rotation-number verification lab for curves built from interlaced polynomial pairs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format on stdout (plots emit SVG in text mode).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep random interlaced pairs and functions; certify rotation
    /// numbers over a grid around each curve.
    Verify(SweepArgs),
    /// Sweep the pair (x, 1) — curves (f', f) — and certify the
    /// crossing-direction rule on every grid level.
    Claim1(SweepArgs),
    /// Sweep the pair (x² - 1, x) — curves (f'' - f, f').
    Claim2(SweepArgs),
    /// Certify the extremum-pairing mechanism on curves (f'' - f, f').
    Bol(SweepArgs),
    /// Compare the ray-crossing and angle-accumulation rotation
    /// algorithms at random points.
    Dual {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Certified points per curve.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Certify deformation events, determinants, and the rotation-number
    /// drop on random instances with at least two roots.
    Deform {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Certified base points per instance.
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
    /// Run the division recursion on an explicit pair of root lists and
    /// certify every stage.
    Divide {
        /// Roots of the outer polynomial, comma-separated (e.g. "-1,0,1").
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Roots of the inner polynomial, comma-separated; empty for a
        /// single-root pair.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        b: String,
    },
    /// Render the rotation-number region map of one random instance as
    /// SVG (text mode) or as the raw grid (JSON mode).
    Plot {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of roots of the outer polynomial.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        f_degree: usize,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Nodes per grid axis.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Bounding-box inflation factor for the plotted window.
        #[arg(long, default_value_t = 1.3)]
        margin: f64,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Largest pair size drawn (ignored by fixed-pair sweeps).
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Trigonometric degree of the random functions.
    #[arg(long, default_value_t = 10)]
    f_degree: usize,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Nodes per grid axis.
    #[arg(long, default_value_t = 20)]
    grid: usize,
    /// Bounding-box inflation factor for grids and point draws.
    #[arg(long, default_value_t = 1.2)]
    margin: f64,
}

#[derive(Debug)]
struct CommandError {
    message: String,
    code: i32,
}

fn usage(message: impl Into<String>) -> CommandError {
    CommandError { message: message.into(), code: 64 }
}

impl SweepArgs {
    fn config(&self) -> Result<SweepConfig, CommandError> {
        if self.grid < 2 {
            return Err(usage("--grid must be at least 2"));
        }
        if self.n_max < 1 {
            return Err(usage("--n-max must be at least 1"));
        }
        if !(self.margin.is_finite() && self.margin > 0.0) {
            return Err(usage("--margin must be positive"));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(usage("--amplitude must be positive"));
        }
        Ok(SweepConfig {
            seed: self.seed,
            trials: self.trials,
            n_max: self.n_max,
            f_degree: self.f_degree,
            amplitude: self.amplitude,
            grid: (self.grid, self.grid),
            margin: self.margin,
        })
    }
}

/// Parses arguments, runs the command, and writes the report; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let (body, code) = match execute(&cli) {
        Ok(done) => done,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    eprintln!("# completed in {} ms", started.elapsed().as_millis());
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, body.as_bytes()) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 74;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if lock.write_all(body.as_bytes()).and_then(|_| lock.flush()).is_err() {
                return 74;
            }
        }
    }
    code
}

fn execute(cli: &Cli) -> Result<(String, i32), CommandError> {
    match &cli.command {
        Command::Verify(args) => sweep_output("verify", verify_theorem(&args.config()?), cli.format),
        Command::Claim1(args) => sweep_output(
            "claim1",
            fixed_pair_sweep(&claim1_pair(), &args.config()?, true),
            cli.format,
        ),
        Command::Claim2(args) => sweep_output(
            "claim2",
            fixed_pair_sweep(&claim2_pair(), &args.config()?, false),
            cli.format,
        ),
        Command::Bol(args) => sweep_output("bol", bol_sweep(&args.config()?), cli.format),
        Command::Dual { sweep, points } => {
            if *points == 0 {
                return Err(usage("--points must be positive"));
            }
            sweep_output("dual", dual_agreement_sweep(&sweep.config()?, *points), cli.format)
        }
        Command::Deform { sweep, points } => {
            let cfg = sweep.config()?;
            if cfg.n_max < 2 {
                return Err(usage("--n-max must be at least 2 for deformations"));
            }
            if *points == 0 {
                return Err(usage("--points must be positive"));
            }
            sweep_output("deform", deformation_sweep(&cfg, *points), cli.format)
        }
        Command::Divide { a, b } => divide_output(a, b, cli.format),
        Command::Plot { seed, n, f_degree, amplitude, grid, margin } => {
            plot_output(*seed, *n, *f_degree, *amplitude, *grid, *margin, cli.format)
        }
    }
}

fn sweep_output(
    label: &str,
    mut report: VerificationReport,
    format: Format,
) -> Result<(String, i32), CommandError> {
    let code = if !report.violations.is_empty() {
        1
    } else if !report.unresolved_trials.is_empty() {
        2
    } else {
        0
    };
    let body = match format {
        Format::Json => {
            report.elapsed_ms = 0; // keep JSON output byte-deterministic
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report_text(label, &report),
    };
    Ok((body, code))
}

fn report_text(label: &str, report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sweep: {label}");
    let _ = writeln!(out, "seed: {}", report.seed);
    let _ = writeln!(out, "pair size: {}", report.n);
    let _ = writeln!(out, "function degree: {}", report.f_degree);
    let _ = writeln!(out, "trials: {}", report.trials);
    let _ = writeln!(out, "points tested: {}", report.points_tested);
    let _ = writeln!(out, "points excluded: {}", report.points_excluded);
    let _ = writeln!(out, "crossings certified: {}", report.crossings_certified);
    let _ = writeln!(out, "min rotation: {}", report.min_rotation);
    let _ = writeln!(out, "perturbations applied: {}", report.perturbations.len());
    let _ = writeln!(out, "unresolved trials: {}", report.unresolved_trials.len());
    let _ = writeln!(out, "violations: {}", report.violations.len());
    for v in &report.violations {
        let at = match v.point {
            Some([x, y]) => format!(" at ({x}, {y})"),
            None => String::new(),
        };
        let _ = writeln!(out, "  trial {} {}{} value {}", v.trial, v.kind, at, v.value);
    }
    let verdict = if !report.violations.is_empty() {
        "FAIL"
    } else if !report.unresolved_trials.is_empty() {
        "UNRESOLVED"
    } else {
        "PASS"
    };
    let _ = writeln!(out, "verdict: {verdict}");
    out
}

fn parse_roots(label: &str, text: &str) -> Result<Vec<f64>, CommandError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("--{label}: cannot parse {:?} as a number", part.trim())))
        })
        .collect()
}

#[derive(Serialize)]
struct DivideOutput {
    a_roots: Vec<f64>,
    b_roots: Vec<f64>,
    stages: Vec<ChainStage>,
}

fn divide_output(a: &str, b: &str, format: Format) -> Result<(String, i32), CommandError> {
    let a_roots = parse_roots("a", a)?;
    let b_roots = parse_roots("b", b)?;
    let pair = InterlacedPair::new(a_roots.clone(), b_roots.clone())
        .map_err(|e| usage(format!("invalid pair: {e}")))?;
    let stages = match recursion_chain(&pair) {
        Ok(stages) => stages,
        Err(e @ PolyError::LemmaViolation(_)) => {
            return Err(CommandError { message: format!("division step failed: {e}"), code: 1 })
        }
        Err(e) => return Err(CommandError { message: format!("division step failed: {e}"), code: 2 }),
    };
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&DivideOutput { a_roots, b_roots, stages })
                .expect("chain serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "pair: a={a_roots:?} b={b_roots:?}");
            let _ = writeln!(out, "stages: {}", stages.len());
            for (i, stage) in stages.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  stage {i}: c={} scale={} next_a={:?} next_b={:?}",
                    stage.c,
                    stage.scale,
                    stage.pair.a_roots(),
                    stage.pair.b_roots()
                );
            }
            let _ = writeln!(out, "verdict: PASS");
            out
        }
    };
    Ok((body, 0))
}

fn plot_output(
    seed: u64,
    n: usize,
    f_degree: usize,
    amplitude: f64,
    grid: usize,
    margin: f64,
    format: Format,
) -> Result<(String, i32), CommandError> {
    if grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    if f_degree < 1 {
        return Err(usage("--f-degree must be at least 1"));
    }
    if !(margin.is_finite() && margin > 0.0) {
        return Err(usage("--margin must be positive"));
    }
    if !(amplitude.is_finite() && amplitude > 0.0) {
        return Err(usage("--amplitude must be positive"));
    }
    let pair = random_interlaced_pair(child_seed(seed, 3, 0), n, 1.0);
    let f_base = TrigPoly::random(child_seed(seed, 4, 0), f_degree, amplitude);
    let mut built = None;
    for attempt in 0..8u64 {
        let f = if attempt == 0 {
            f_base.clone()
        } else {
            let noise =
                TrigPoly::random(child_seed(seed, 5, attempt), f_degree, 1e-7 * amplitude);
            &f_base + &noise
        };
        if let Ok(inst) = LoewnerInstance::build(pair.clone(), f) {
            built = Some(inst);
            break;
        }
    }
    let Some(inst) = built else {
        return Err(CommandError {
            message: "instance stayed degenerate after retries".into(),
            code: 2,
        });
    };
    let b = inst.curve().bounding_box();
    let cx = 0.5 * (b[0] + b[2]);
    let cy = 0.5 * (b[1] + b[3]);
    let hw = 0.5 * (b[2] - b[0]) * margin;
    let hh = 0.5 * (b[3] - b[1]) * margin;
    let bounds = [cx - hw, cy - hh, cx + hw, cy + hh];
    let outcome = grid_rotation_numbers(inst.curve(), bounds, grid, grid);
    let map = RegionMap {
        bounds,
        nx: grid,
        ny: grid,
        values: outcome
            .values
            .iter()
            .map(|v| v.unwrap_or(REGION_SENTINEL))
            .collect(),
        sentinel: REGION_SENTINEL,
    };
    let code = if map.values.iter().any(|v| *v != map.sentinel && *v < 0) {
        1
    } else if outcome.unresolved > 0 {
        2
    } else {
        0
    };
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&map).expect("map serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let title = format!("rotation regions: n={n} degree={f_degree} seed={seed}");
            render_svg(inst.curve(), &map, &title)
        }
    };
    Ok((body, code))
}
