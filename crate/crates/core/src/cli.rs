//! Command-line front end. Every command prints a JSON report on stdout.
//!
//! Exit codes: 0 success, 1 the checked property fails (invalid tiling, no
//! E-configuration to descend from), 2 usage or I/O errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{AnalysisError, Patch};
use crate::generators::{generate_family, generate_figure3, generate_graded, generate_hexagonal, FamilyParams};
use crate::io::{e_configuration_json, failure_json, neighborhood_json, rational_json, read_tiling, trace_json, write_text, write_tiling};
use crate::lattice::{format_rational, parse_rational, Rational};
use crate::render::{fills_by_role, fills_by_size, render_svg};
use crate::tiling::{Region, Tiling};
use crate::tlr::{extract_from_patch, infer_alpha, TlrError};
use crate::walk;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn report(exit_code: i32, v: Value) -> CommandResult {
        let mut stdout = serde_json::to_string_pretty(&v).expect("reports serialise");
        stdout.push('\n');
        CommandResult { exit_code, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> CommandResult {
        CommandResult { exit_code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

#[derive(Debug, Parser)]
#[command(name = "trilab", version, about = "Tilings of the plane by equilateral triangles")]
struct Cli {
    /// Also print a one-line human-readable summary on stderr.
    #[arg(long, global = true)]
    summary: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated tiling as JSON.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Check validity only.
    Verify { input: PathBuf },
    /// Validity, perfectness, shared sides, E-configurations and T/L/R structure.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value = "2", value_parser = parse_rational)]
        margin: Rational,
    },
    /// Follow the descent from an E-configuration.
    Descend {
        input: PathBuf,
        #[arg(long, default_value = "2", value_parser = parse_rational)]
        margin: Rational,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        /// Start from this detected E-configuration instead of the longest.
        #[arg(long)]
        index: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Quantities of the random walk on the index lattice.
    Walk {
        #[command(subcommand)]
        kind: WalkKind,
    },
    /// Draw a tiling as SVG.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = ColorBy::Size)]
        color_by: ColorBy,
        #[arg(long, default_value = "2", value_parser = parse_rational)]
        margin: Rational,
    },
}

#[derive(Debug, Args)]
struct Out {
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenerateKind {
    /// Periodic T/L/R family with parameter alpha in (0, 1/2].
    Family {
        #[arg(long, value_parser = parse_rational)]
        alpha: Rational,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[command(flatten)]
        out: Out,
    },
    /// One of five small polygons tiled without an E-configuration.
    Figure3 {
        #[arg(long)]
        variant: u32,
        #[command(flatten)]
        out: Out,
    },
    /// Unit triangles filling an n x n window.
    Hexagonal {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Randomly refined unit tiling with tiles of several sizes.
    Graded {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        levels: u32,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
enum WalkKind {
    /// Exact return probability after n steps.
    Exact {
        #[arg(long)]
        n: i64,
    },
    /// Partial sum of the Green function up to m = M.
    Green {
        #[arg(long = "M", alias = "m-max")]
        m_max: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Monte-Carlo estimate of the return frequency.
    Simulate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        n: u64,
    },
    /// Term, Stirling lower bound and ratio to the asymptote at m.
    Stirling {
        #[arg(long)]
        m: u64,
        /// Write the table for 1..=m as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColorBy {
    Size,
    Role,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { exit_code: 2, stdout: String::new(), stderr: text }
            } else {
                CommandResult { exit_code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut res = match cli.command {
        Command::Generate { kind } => generate(kind),
        Command::Verify { input } => verify(&input),
        Command::Analyze { input, margin } => analyze(&input, &margin),
        Command::Descend { input, margin, max_steps, index, output } => descend(&input, &margin, max_steps, index, output),
        Command::Walk { kind } => walk_cmd(kind),
        Command::Render { input, output, color_by, margin } => render(&input, &output, color_by, &margin),
    };
    if cli.summary && !res.stdout.is_empty() {
        if let Ok(v) = serde_json::from_str::<Value>(&res.stdout) {
            res.stderr.push_str(&summary_line(&v));
            res.stderr.push('\n');
        }
    }
    res
}

fn summary_line(v: &Value) -> String {
    let Some(obj) = v.as_object() else { return v.to_string() };
    obj.iter()
        .filter(|(_, x)| !x.is_array() && !x.is_object())
        .map(|(k, x)| format!("{k}={}", x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())))
        .collect::<Vec<_>>()
        .join(" ")
}

fn multiset_json(t: &Tiling) -> Value {
    Value::Object(t.diameter_multiset().iter().map(|(d, n)| (format_rational(d), json!(n))).collect())
}

fn generate(kind: GenerateKind) -> CommandResult {
    let (made, out) = match kind {
        GenerateKind::Family { alpha, reps, out } => {
            (FamilyParams::new(alpha).and_then(|f| generate_family(&f, reps)), out)
        }
        GenerateKind::Figure3 { variant, out } => (generate_figure3(variant), out),
        GenerateKind::Hexagonal { n, out } => (generate_hexagonal(n), out),
        GenerateKind::Graded { seed, levels, out } => {
            if levels > 6 {
                return CommandResult::usage("graded fixtures support at most 6 levels");
            }
            (Ok(generate_graded(seed, levels)), out)
        }
    };
    let t = match made {
        Ok(t) => t,
        Err(e) => return CommandResult::usage(e),
    };
    let mut report = json!({ "tiles": t.tiles.len(), "diameters": multiset_json(&t) });
    match out.output {
        Some(path) => {
            if let Err(e) = write_tiling(&path, &t) {
                return CommandResult::usage(e);
            }
            report["output"] = json!(path.display().to_string());
        }
        None => report["tiling"] = serde_json::from_str(&crate::io::tiling_to_json(&t)).expect("own output parses"),
    }
    CommandResult::report(0, report)
}

fn load(path: &std::path::Path) -> Result<Tiling, CommandResult> {
    read_tiling(path).map_err(CommandResult::usage)
}

fn validity(t: &Tiling) -> Result<(bool, Value), CommandResult> {
    let report = t.validate().map_err(CommandResult::usage)?;
    Ok((report.valid, json!({ "valid": report.valid, "failure": report.failure.as_ref().map(failure_json) })))
}

fn verify(input: &std::path::Path) -> CommandResult {
    let t = match load(input) {
        Ok(t) => t,
        Err(e) => return e,
    };
    match validity(&t) {
        Ok((valid, v)) => CommandResult::report(if valid { 0 } else { 1 }, v),
        Err(e) => e,
    }
}

fn analyze(input: &std::path::Path, margin: &Rational) -> CommandResult {
    let t = match load(input) {
        Ok(t) => t,
        Err(e) => return e,
    };
    let (valid, mut report) = match validity(&t) {
        Ok(x) => x,
        Err(e) => return e,
    };
    if !valid {
        return CommandResult::report(1, report);
    }
    let perf = t.perfectness();
    report["tiles"] = json!(t.tiles.len());
    report["diameters"] = multiset_json(&t);
    report["perfect"] = json!(perf.is_perfect());
    report["perfectness_reason"] = json!(perf.reason());
    let shared = t.shared_side_pairs();
    report["shared_side_pairs"] = json!(shared);
    let patch = match Patch::new(&t, margin) {
        Ok(p) => p,
        Err(e) => {
            report["analysis_error"] = json!(e.to_string());
            return CommandResult::report(0, report);
        }
    };
    let es = patch.e_configurations(Default::default());
    report["e_configurations"] = json!(es.iter().map(e_configuration_json).collect::<Vec<_>>());
    if matches!(t.region, Region::PlaneWindow(_)) {
        report["tlr"] = match extract_from_patch(&patch) {
            Ok(idx) => {
                let alpha = infer_alpha(&idx);
                json!({
                    "outcome": "ok",
                    "t": idx.t.len(),
                    "l": idx.l.len(),
                    "r": idx.r.len(),
                    "alpha": alpha.as_ref().ok().map(|f| rational_json(f.alpha())),
                    "relation_error": alpha.err().map(|e| e.to_string()),
                })
            }
            Err(TlrError::TopologyMismatch { segment, neighborhood }) => json!({
                "outcome": "topology_mismatch",
                "segment": crate::io::segment_json(&segment),
                "neighborhood": neighborhood.as_ref().map(neighborhood_json),
            }),
            Err(e) => json!({ "outcome": "error", "error": e.to_string() }),
        };
    }
    CommandResult::report(0, report)
}

fn descend(input: &std::path::Path, margin: &Rational, max_steps: usize, index: Option<usize>, output: Option<PathBuf>) -> CommandResult {
    let t = match load(input) {
        Ok(t) => t,
        Err(e) => return e,
    };
    let patch = match Patch::new(&t, margin) {
        Ok(p) => p,
        Err(e @ (AnalysisError::InvalidTiling(_) | AnalysisError::MarginTooSmall { .. } | AnalysisError::EmptyCore(_))) => {
            return CommandResult::report(1, json!({ "error": e.to_string() }))
        }
        Err(e) => return CommandResult::usage(e),
    };
    let es = patch.e_configurations(Default::default());
    let start = match index {
        Some(k) => match es.get(k) {
            Some(e) => e,
            None => return CommandResult::usage(format!("only {} E-configurations detected", es.len())),
        },
        // the longest, earliest in canonical order among ties
        None => match es.iter().rev().max_by_key(|e| e.length()) {
            Some(e) => e,
            None => return CommandResult::report(1, json!({ "error": "no E-configuration", "detected": 0 })),
        },
    };
    let trace = match patch.descend(start, max_steps) {
        Ok(tr) => tr,
        Err(e) => return CommandResult::report(1, json!({ "error": e.to_string() })),
    };
    let v = trace_json(&trace);
    if let Some(path) = output {
        let mut text = serde_json::to_string_pretty(&v).expect("traces serialise");
        text.push('\n');
        if let Err(e) = write_text(&path, &text) {
            return CommandResult::usage(e);
        }
    }
    CommandResult::report(0, v)
}

fn walk_cmd(kind: WalkKind) -> CommandResult {
    match kind {
        WalkKind::Exact { n } => match walk::return_probability(n) {
            Ok(p) => CommandResult::report(0, json!({ "n": n, "probability": rational_json(&p), "float": crate::lattice::to_f64(&p) })),
            Err(e) => CommandResult::usage(e),
        },
        WalkKind::Green { m_max, mode } => {
            let v = match mode {
                Mode::Exact => walk::green_partial(m_max, walk::GreenMode::Exact),
                Mode::Float => walk::green_partial(m_max, walk::GreenMode::Float),
            };
            let value = match &v {
                walk::GreenValue::Exact(r) => rational_json(r),
                walk::GreenValue::Float(x) => json!(x),
            };
            CommandResult::report(0, json!({ "M": m_max, "partial_sum": value, "float": v.to_f64() }))
        }
        WalkKind::Simulate { seed, trials, n } => {
            if trials == 0 {
                return CommandResult::usage("trials must be at least 1");
            }
            match walk::estimate_return_frequency(seed, trials, n) {
                Ok(f) => {
                    let exact = walk::return_probability(n as i64).expect("non-negative");
                    CommandResult::report(
                        0,
                        json!({ "seed": seed, "trials": trials, "n": n, "frequency": f, "exact": rational_json(&exact), "exact_float": crate::lattice::to_f64(&exact) }),
                    )
                }
                Err(e) => CommandResult::usage(e),
            }
        }
        WalkKind::Stirling { m, csv } => {
            let c = match walk::stirling_term_check(m) {
                Ok(c) => c,
                Err(e @ walk::WalkError::BoundViolated { .. }) => return CommandResult::report(1, json!({ "error": e.to_string() })),
                Err(e) => return CommandResult::usage(e),
            };
            if let Some(path) = csv {
                let mut buf = Vec::new();
                if let Err(e) = walk::write_stirling_csv(&walk::stirling_table(m), &mut buf) {
                    return CommandResult::usage(e);
                }
                if let Err(e) = write_text(&path, &String::from_utf8(buf).expect("csv is utf-8")) {
                    return CommandResult::usage(e);
                }
            }
            CommandResult::report(
                0,
                json!({ "m": m, "term": c.term, "lower_bound": c.lower_bound, "ratio_to_asymptote": c.ratio_to_asymptote }),
            )
        }
    }
}

fn render(input: &std::path::Path, output: &std::path::Path, color_by: ColorBy, margin: &Rational) -> CommandResult {
    let t = match load(input) {
        Ok(t) => t,
        Err(e) => return e,
    };
    let fills = match color_by {
        ColorBy::Size => fills_by_size(&t.tiles),
        ColorBy::Role => {
            let idx = Patch::new(&t, margin).map_err(TlrError::from).and_then(|p| extract_from_patch(&p));
            match idx {
                Ok(idx) => fills_by_role(&t.tiles, &idx),
                Err(e) => return CommandResult::report(1, json!({ "error": e.to_string() })),
            }
        }
    };
    let svg = render_svg(&t.tiles, &fills);
    if let Err(e) = write_text(output, &svg) {
        return CommandResult::usage(e);
    }
    let mut classes: Vec<&str> = fills.iter().map(|f| f.class.as_str()).collect();
    classes.sort();
    classes.dedup();
    CommandResult::report(0, json!({ "output": output.display().to_string(), "polygons": t.tiles.len(), "fill_classes": classes }))
}
