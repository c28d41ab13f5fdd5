//! Command-line front end: class enumeration, per-game bounds, censuses,
//! seesaw quantum lower bounds, counting-bound curves, and the verification
//! suite. Machine-readable output goes to --out (default stdout); human
//! progress goes to stderr. Identical configurations produce byte-identical
//! output files.

use clap::{Args, Parser, Subcommand, ValueEnum};
use idgames::census::{run_census, verify};
use idgames::classical::optimal_classical;
use idgames::counting;
use idgames::exact::{FractionDoc, Rational};
use idgames::game::{GameFunction, Scenario};
use idgames::io;
use idgames::ns::optimal_ns;
use idgames::quantum::seesaw::{seesaw, SeesawOptions};
use idgames::symmetry::enumerate_classes;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "idgames",
    about = "Optimal classical, no-signaling and quantum bounds for identity games",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    TextTable,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ThreadArgs {
    /// Worker threads; defaults to IDGAMES_THREADS or the available
    /// parallelism.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate equivalence classes of a scenario.
    Enumerate {
        /// Scenario as n,m_i,m_o (e.g. 2,3,2).
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact classical and no-signaling bounds plus a seesaw quantum lower
    /// bound for one game.
    Bounds {
        /// Bundled game name, a .json game document, or a .txt table.
        #[arg(long)]
        game: String,
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        threads: ThreadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full census of a scenario: classes, exact bounds, statistics tables.
    Census {
        #[arg(long)]
        scenario: String,
        #[command(flatten)]
        threads: ThreadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seesaw lower bound on the quantum value of a game.
    Quantum {
        #[arg(long)]
        game: String,
        /// Component dimensions, e.g. 2,2 (defaults to qubits).
        #[arg(long)]
        dims: Option<String>,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        threads: ThreadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Encoding-bound curves and sampled classical-optimum distributions.
    Counting {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Single m for the bound, or the end of the curve when --m-from is
        /// given.
        #[arg(long, default_value_t = 64)]
        m: usize,
        #[arg(long)]
        m_from: Option<usize>,
        #[arg(long, default_value_t = 0.375)]
        omega: f64,
        /// Sample functions at (n, m) and report the exact classical
        /// optimum distribution instead of the bound.
        #[arg(long)]
        samples: Option<u64>,
        /// Near-floor threshold offset for the sampled report, as a
        /// fraction a/b.
        #[arg(long, default_value = "1/16")]
        epsilon: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the bundled verification suite; one line per check on stderr,
    /// JSON report to --out, nonzero exit on any failure.
    VerifyPaper {
        #[command(flatten)]
        threads: ThreadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<idgames::Error> for CliError {
    fn from(e: idgames::Error) -> Self {
        let code = match &e {
            idgames::Error::Parse(_) => "E_PARSE",
            idgames::Error::OutOfRange { .. } => "E_RANGE",
            idgames::Error::ScenarioMismatch(_) | idgames::Error::InvalidScenario(_) => {
                "E_SCENARIO"
            }
            idgames::Error::TooLarge(_) => "E_TOO_LARGE",
            idgames::Error::UnnormalizedBox => "E_BOX",
            idgames::Error::NonBinaryOutputs(_) => "E_OUTPUTS",
            idgames::Error::WrongPlayerCount { .. } => "E_PLAYERS",
            idgames::Error::InvalidStrategy(_) => "E_STRATEGY",
            idgames::Error::NotBijective => "E_RELABEL",
            idgames::Error::Io(_) => "E_IO",
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("E_IO", e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {}", e.code, e.message);
            ExitCode::FAILURE
        }
    }
}

fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::new(
            "E_PARSE",
            format!("scenario must be n,m_i,m_o, got {text:?}"),
        ));
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::new("E_PARSE", format!("bad scenario {text:?}")))?;
    Ok(Scenario::symmetric(nums[0], nums[1], nums[2])?)
}

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::new("E_PARSE", format!("bad dims {text:?}")))
}

fn parse_fraction(text: &str) -> Result<Rational, CliError> {
    let parse_err = || CliError::new("E_PARSE", format!("bad fraction {text:?}"));
    if let Some((a, b)) = text.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| parse_err())?;
        let den: i64 = b.trim().parse().map_err(|_| parse_err())?;
        if den == 0 {
            return Err(parse_err());
        }
        Ok(Rational::new(num.into(), den.into()))
    } else {
        let num: i64 = text.trim().parse().map_err(|_| parse_err())?;
        Ok(Rational::from_integer(num.into()))
    }
}

const BUNDLED: &[(&str, &str)] = &[
    ("addition", include_str!("../games/addition.json")),
    ("class25", include_str!("../games/class25.json")),
    (
        "dimension_witness",
        include_str!("../games/dimension_witness.json"),
    ),
    ("facet", include_str!("../games/facet.json")),
    (
        "partial_entanglement",
        include_str!("../games/partial_entanglement.json"),
    ),
    (
        "symmetric_five_input",
        include_str!("../games/symmetric_five_input.json"),
    ),
    (
        "symmetric_three_input",
        include_str!("../games/symmetric_three_input.json"),
    ),
    (
        "three_input_example",
        include_str!("../games/three_input_example.json"),
    ),
    ("tripartite", include_str!("../games/tripartite.json")),
];

/// Loads a game from a bundled name, a JSON document, or a 2-player text
/// table (binary outputs).
fn load_game(spec: &str) -> Result<(String, GameFunction), CliError> {
    if let Some((name, text)) = BUNDLED.iter().find(|(name, _)| *name == spec) {
        return Ok((name.to_string(), io::parse_game_json(text)?));
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
        return Err(CliError::new(
            "E_GAME",
            format!(
                "{spec:?} is neither a file nor a bundled game ({})",
                names.join(", ")
            ),
        ));
    }
    let text = std::fs::read_to_string(&path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    let game = if path.extension().is_some_and(|e| e == "txt") {
        io::parse_game_text(&text, 2)?
    } else {
        io::parse_game_json(&text)?
    };
    Ok((name, game))
}

fn thread_count(args: &ThreadArgs) -> usize {
    args.threads
        .or_else(|| {
            std::env::var("IDGAMES_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1)
}

fn emit(output: &OutputArgs, content: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::Enumerate { scenario, output } => {
            let s = parse_scenario(&scenario)?;
            let classes = enumerate_classes(&s)?;
            eprintln!(
                "{} classes over {} functions",
                classes.len(),
                s.function_space_size().unwrap_or(0)
            );
            let content = match output.format {
                Format::Csv | Format::TextTable => {
                    let mut out = String::from("representative,orbit_size\n");
                    for c in &classes {
                        writeln!(out, "{},{}", c.code, c.orbit_size).unwrap();
                    }
                    out
                }
                Format::Json => {
                    let rows: Vec<(u64, u64)> =
                        classes.iter().map(|c| (c.code, c.orbit_size)).collect();
                    json_line(&serde_json::json!({
                        "players": s.players(),
                        "inputs": s.inputs(),
                        "outputs": s.outputs(),
                        "class_count": classes.len(),
                        "classes": rows,
                    }))
                }
            };
            emit(&output, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bounds {
            game,
            dims,
            restarts,
            seed,
            tol,
            threads,
            output,
        } => {
            let (name, f) = load_game(&game)?;
            let cl = optimal_classical(&f)?;
            let ns = optimal_ns(&f)?;
            // Seesaw handles binary outputs only; bounds for other games
            // still report the exact values.
            let q = if f.scenario().outputs() == 2 {
                let dims = match dims {
                    Some(text) => parse_dims(&text)?,
                    None => vec![2; f.scenario().players()],
                };
                let mut opts = SeesawOptions::new(dims)
                    .restarts(restarts)
                    .seed(seed)
                    .threads(thread_count(&threads));
                opts.tol = tol;
                Some(seesaw(&f, &opts)?)
            } else {
                None
            };
            match &q {
                Some(q) => eprintln!(
                    "{name}: omega_cl={}, omega_ns={}, omega_q_lower={:.6}",
                    cl.value, ns.value, q.value
                ),
                None => eprintln!(
                    "{name}: omega_cl={}, omega_ns={} (no seesaw: outputs != 2)",
                    cl.value, ns.value
                ),
            }
            let doc = serde_json::json!({
                "game": name,
                "omega_cl": FractionDoc::of(&cl.value),
                "omega_cl_witness": cl.witness.maps(),
                "omega_ns": FractionDoc::of(&ns.value),
                "omega_ns_witness": ns.to_doc().witness,
                "omega_q_lower": q.as_ref().map(|q| q.value),
                "seesaw": q.as_ref().map(|q| serde_json::json!({
                    "restarts": restarts,
                    "seed": seed,
                    "converged": q.converged,
                    "best_restart": q.best_restart,
                })),
            });
            emit(&output, &json_line(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Census {
            scenario,
            threads,
            output,
        } => {
            let s = parse_scenario(&scenario)?;
            let report = run_census(&s, thread_count(&threads))?;
            eprintln!(
                "{} classes, {} nontrivial, {} nontrivial functions",
                report.class_count, report.nontrivial_class_count, report.nontrivial_function_count
            );
            let content = match output.format {
                Format::Csv | Format::TextTable => report.to_csv(),
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&report.to_doc()).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            emit(&output, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Quantum {
            game,
            dims,
            restarts,
            seed,
            tol,
            threads,
            output,
        } => {
            let (name, f) = load_game(&game)?;
            let dims = match dims {
                Some(text) => parse_dims(&text)?,
                None => vec![2; f.scenario().players()],
            };
            let mut opts = SeesawOptions::new(dims.clone())
                .restarts(restarts)
                .seed(seed)
                .threads(thread_count(&threads));
            opts.tol = tol;
            let out = seesaw(&f, &opts)?;
            eprintln!(
                "{name}: omega_q_lower={:.7} (dims {dims:?}, {} restarts, converged={})",
                out.value, restarts, out.converged
            );
            let doc = serde_json::json!({
                "game": name,
                "dims": dims,
                "restarts": restarts,
                "seed": seed,
                "value": out.value,
                "converged": out.converged,
                "monotone": out.monotone,
                "iterations": out.iterations,
                "best_restart": out.best_restart,
                "strategy": out.strategy.to_doc(),
            });
            emit(&output, &json_line(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Counting {
            n,
            m,
            m_from,
            omega,
            samples,
            epsilon,
            seed,
            output,
        } => {
            let content = if let Some(samples) = samples {
                let eps = parse_fraction(&epsilon)?;
                let g = counting::empirical_gap_sample(n, m, samples, eps, seed)?;
                let hist: Vec<(FractionDoc, u64)> = g
                    .histogram
                    .iter()
                    .map(|(k, v)| (FractionDoc::of(k), *v))
                    .collect();
                json_line(&serde_json::json!({
                    "players": n,
                    "inputs": m,
                    "samples": g.samples,
                    "histogram_cl": hist,
                    "near_floor_fraction": FractionDoc::of(&g.near_floor_fraction),
                    "ns_guarantee": FractionDoc::of(&g.ns_guarantee),
                }))
            } else {
                let from = m_from.unwrap_or(m);
                if from > m {
                    return Err(CliError::new("E_PARSE", "--m-from exceeds --m"));
                }
                match output.format {
                    Format::Csv | Format::TextTable => {
                        let mut out = String::from("m,hstar,mprime,log_total,log_fraction_bound\n");
                        for mi in from..=m {
                            let b = counting::encoding_bound(n, mi, omega)?;
                            writeln!(
                                out,
                                "{mi},{:.6},{:.6},{:.6},{:.6}",
                                b.hstar, b.mprime, b.log_total, b.log_fraction_bound
                            )
                            .unwrap();
                        }
                        out
                    }
                    Format::Json => {
                        let rows: Vec<serde_json::Value> = (from..=m)
                            .map(|mi| {
                                let b = counting::encoding_bound(n, mi, omega).expect("in range");
                                serde_json::json!({
                                    "m": mi,
                                    "hstar": b.hstar,
                                    "mprime": b.mprime,
                                    "log_total": b.log_total,
                                    "log_fraction_bound": b.log_fraction_bound,
                                })
                            })
                            .collect();
                        json_line(&serde_json::json!({
                            "players": n,
                            "omega": omega,
                            "bounds": rows,
                        }))
                    }
                }
            };
            emit(&output, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyPaper { threads, output } => {
            let report = verify::verify_paper(thread_count(&threads))?;
            eprint!("{}", report.render());
            let rows: Vec<serde_json::Value> = report
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "id": c.id,
                        "name": c.name,
                        "expected": c.expected,
                        "actual": c.actual,
                        "tolerance": c.tolerance,
                        "passed": c.passed,
                        "stochastic": c.stochastic,
                        "seconds": c.seconds,
                    })
                })
                .collect();
            emit(
                &output,
                &json_line(&serde_json::json!({
                    "passed": report.passed(),
                    "checks": rows,
                })),
            )?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
