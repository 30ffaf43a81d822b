//! Command-line interface.
//!
//! Exit codes: 0 success (including `flat` and torsion-free answers),
//! 1 torsion demonstrated (`notflat`, torsion found, oracle witness found),
//! 2 usage, parse or semantic errors, 3 resource limit hit,
//! 4 certificate failure or corpus mismatch.

use clap::{Parser, Subcommand, ValueEnum};
use flatkit::clock::WallDeadline;
use flatkit::corpus;
use flatkit::problem::ProblemFile;
use flatkit::render::{self, Format};
use flatkit_core::flatness::{flat_at_origin, flat_check, first_torsion_power, FlatnessError, FlatnessStatus};
use flatkit_core::fibred::{fibre_dimension_at, generic_fibre_dimension, image_closure, FibredError};
use flatkit_core::groebner::groebner_basis;
use flatkit_core::limits::{Budget, EngineError, ResourceLimits};
use flatkit_core::oracle::{brute_torsion_search, MembershipMode, OracleError, SearchBounds};
use flatkit_core::order::ModuleOrder;
use flatkit_core::torsion::torsion_submodule;
use std::path::{Path, PathBuf};
use std::time::Duration;

const EXIT_TORSION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_RESOURCE: i32 = 3;
const EXIT_CERTIFICATE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "flatkit",
    version,
    about = "Exact flatness analysis for finitely presented modules over polynomial base rings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Cap on the total degree reached inside basis computations.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Cap on the size of any single basis.
    #[arg(long, global = true)]
    max_basis: Option<usize>,
    /// Wall-clock budget in seconds; FLATKIT_TIMEOUT is the fallback.
    #[arg(long, global = true)]
    timeout: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    /// Position over term with graded reverse lexicographic ties.
    Grevlex,
    /// Position over term with lexicographic ties.
    Lex,
    /// Fiber-elimination block order.
    Block,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide flatness over the base via the tensor-power torsion test.
    Flatcheck {
        file: PathBuf,
        /// Test this tensor power instead of the base dimension.
        #[arg(long)]
        power: Option<u32>,
        /// Decide at the origin of the source instead of globally.
        #[arg(long, conflicts_with = "power")]
        at_origin: bool,
        /// Print the torsion certificate when the verdict is notflat.
        #[arg(long)]
        certificate: bool,
    },
    /// Compute the base-torsion submodule of a tensor power.
    Torsion {
        file: PathBuf,
        /// Tensor power to inspect (default 1).
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Scan tensor powers for the first one with base torsion.
    FirstTorsionPower { file: PathBuf },
    /// Dimension of the fibre over a named point, or the generic fibre.
    Fibredim {
        file: PathBuf,
        /// A point declared in the problem file.
        #[arg(long)]
        point: Option<String>,
    },
    /// Closure of the image of the source in the base.
    Image { file: PathBuf },
    /// Reduced Groebner basis of the presented relations.
    Gb {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
        order: OrderArg,
    },
    /// Brute-force torsion search, independent of the main engine.
    Oracle {
        file: PathBuf,
        /// Witness total-degree bound.
        #[arg(long)]
        degree: Option<u32>,
        /// Annihilator total-degree bound.
        #[arg(long)]
        multiplier: Option<u32>,
        /// Tensor power to search (default 1).
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Cross-validate every .prob file in a directory against the oracle.
    Corpus {
        dir: PathBuf,
        /// Number of worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip instances marked heavy.
        #[arg(long)]
        skip_heavy: bool,
    },
}

/// An error that already knows its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<ProblemFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    flatkit::parse_problem(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn limits_from(cli: &Cli) -> ResourceLimits {
    let mut l = ResourceLimits::default();
    if let Some(d) = cli.max_degree {
        l.max_total_degree = d;
    }
    if let Some(b) = cli.max_basis {
        l.max_basis_size = b;
    }
    let timeout = cli.timeout.or_else(|| {
        std::env::var("FLATKIT_TIMEOUT")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(secs) = timeout {
        l.wall_budget = Some(Duration::from_secs(secs));
    }
    l
}

fn format_of(cli: &Cli) -> Format {
    match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let limits = limits_from(cli);
    let format = format_of(cli);
    // The deadline must outlive the budget borrowing it.
    let deadline = limits.wall_budget.map(WallDeadline::new);
    let mut budget = match &deadline {
        Some(d) => Budget::with_deadline(limits.clone(), d),
        None => Budget::new(limits.clone()),
    };

    match &cli.cmd {
        Cmd::Flatcheck {
            file,
            power,
            at_origin,
            certificate,
        } => {
            let f = load(file)?;
            if matches!(power, Some(0)) {
                return Err(Failure::usage("--power must be at least 1"));
            }
            let verdict = if *at_origin {
                flat_at_origin(&f.problem, &mut budget)
            } else {
                flat_check(&f.problem, *power, &mut budget)
            }
            .map_err(|e| match e {
                FlatnessError::OriginOffVariety => Failure::usage(e.to_string()),
                FlatnessError::Certificate(_) => Failure {
                    code: EXIT_CERTIFICATE,
                    message: e.to_string(),
                },
            })?;
            match format {
                Format::Text => print!("{}", render::verdict_text(&verdict, *certificate)),
                Format::Json => print!("{}", render::emit_json(&render::verdict_json(&verdict))),
            }
            Ok(match verdict.status {
                FlatnessStatus::Flat | FlatnessStatus::Inconclusive => 0,
                FlatnessStatus::NotFlat => EXIT_TORSION,
                FlatnessStatus::ResourceExceeded => EXIT_RESOURCE,
            })
        }
        Cmd::Torsion { file, power } => {
            let f = load(file)?;
            if *power == 0 {
                return Err(Failure::usage("--power must be at least 1"));
            }
            let tensor = f
                .problem
                .presentation
                .tensor_power(*power)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let t = torsion_submodule(&tensor, &mut budget)?;
            let vars = tensor.vars();
            match format {
                Format::Text => print!("{}", render::torsion_text(&t, *power, vars)),
                Format::Json => print!("{}", render::emit_json(&render::torsion_json(&t, *power, vars))),
            }
            Ok(if t.generators.is_empty() { 0 } else { EXIT_TORSION })
        }
        Cmd::FirstTorsionPower { file } => {
            let f = load(file)?;
            let first = first_torsion_power(&f.problem, &mut budget)?;
            let base_dim = f.problem.base_dimension();
            match format {
                Format::Text => print!("{}", render::first_power_text(first, base_dim)),
                Format::Json => {
                    print!("{}", render::emit_json(&render::first_power_json(first, base_dim)))
                }
            }
            Ok(if first.is_some() { EXIT_TORSION } else { 0 })
        }
        Cmd::Fibredim { file, point } => {
            let f = load(file)?;
            let tower = f.problem.presentation.tower();
            match point {
                Some(name) => {
                    let coords = f.points.get(name).ok_or_else(|| {
                        Failure::usage(format!(
                            "unknown point `{name}`; declare it in the problem file"
                        ))
                    })?;
                    let d = fibre_dimension_at(tower, coords, &mut budget)
                        .map_err(fibred_failure)?;
                    match format {
                        Format::Text => {
                            print!("{}", render::dimension_text(&d, &format!("fibre dimension at {name}")))
                        }
                        Format::Json => {
                            print!("{}", render::emit_json(&render::dimension_json(&d, Some(name))))
                        }
                    }
                }
                None => {
                    let d = generic_fibre_dimension(tower, &mut budget)?;
                    match format {
                        Format::Text => {
                            print!("{}", render::dimension_text(&d, "generic fibre dimension"))
                        }
                        Format::Json => {
                            print!("{}", render::emit_json(&render::dimension_json(&d, None)))
                        }
                    }
                }
            }
            Ok(0)
        }
        Cmd::Image { file } => {
            let f = load(file)?;
            let tower = f.problem.presentation.tower();
            let gens = image_closure(tower, &mut budget)?;
            let vars = tower.vars();
            match format {
                Format::Text => print!("{}", render::image_text(&gens, vars)),
                Format::Json => print!("{}", render::emit_json(&render::image_json(&gens, vars))),
            }
            Ok(0)
        }
        Cmd::Gb { file, order } => {
            let f = load(file)?;
            let pres = &f.problem.presentation;
            let vars = pres.vars();
            let (ord, label) = match order {
                OrderArg::Grevlex => (ModuleOrder::pot_grevlex(), "grevlex"),
                OrderArg::Lex => (ModuleOrder::pot_lex(), "lex"),
                OrderArg::Block => (ModuleOrder::elimination(vars.fiber_blocks()), "block"),
            };
            let gb = groebner_basis(vars, pres.rank(), pres.relations(), &ord, &mut budget)?;
            let elems: Vec<String> = gb
                .elements
                .iter()
                .map(|e| e.to_display_string(vars))
                .collect();
            match format {
                Format::Text => print!("{}", render::basis_text(&elems, label)),
                Format::Json => print!("{}", render::emit_json(&render::basis_json(&elems, label))),
            }
            Ok(0)
        }
        Cmd::Oracle {
            file,
            degree,
            multiplier,
            power,
        } => {
            let f = load(file)?;
            if *power == 0 {
                return Err(Failure::usage("--power must be at least 1"));
            }
            let tensor = f
                .problem
                .presentation
                .tensor_power(*power)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let bounds = match (degree, multiplier) {
                (Some(d), Some(e)) => SearchBounds::new(*d, *e),
                (Some(d), None) => SearchBounds::recommended(*d, &tensor),
                (None, Some(e)) => {
                    let d = f
                        .oracle_bounds
                        .map(|b| b.witness_degree)
                        .unwrap_or(2);
                    SearchBounds::new(d, *e)
                }
                (None, None) => f
                    .oracle_bounds
                    .unwrap_or_else(|| SearchBounds::recommended(2, &tensor)),
            };
            let witness = brute_torsion_search(
                &tensor,
                &bounds,
                MembershipMode::Groebner,
                &mut budget,
            )
            .map_err(|e| match e {
                OracleError::Engine(inner) => Failure::from(inner),
                other => Failure::usage(other.to_string()),
            })?;
            let vars = tensor.vars();
            match format {
                Format::Text => print!("{}", render::oracle_text(&witness, &bounds, *power, vars)),
                Format::Json => print!(
                    "{}",
                    render::emit_json(&render::oracle_json(&witness, &bounds, *power, vars))
                ),
            }
            Ok(if witness.is_some() { EXIT_TORSION } else { 0 })
        }
        Cmd::Corpus {
            dir,
            jobs,
            skip_heavy,
        } => {
            let instances = corpus::load_dir(dir)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let (results, skipped) = corpus::run(&instances, *jobs, *skip_heavy);
            match format {
                Format::Text => print!("{}", render::corpus_text(&results, &skipped)),
                Format::Json => {
                    print!("{}", render::emit_json(&render::corpus_json(&results, &skipped)))
                }
            }
            let clean = results.iter().all(|t| {
                !matches!(t.outcome.agreement, flatkit_core::oracle::Agreement::Mismatch(_))
            });
            Ok(if clean { 0 } else { EXIT_CERTIFICATE })
        }
    }
}

fn fibred_failure(e: FibredError) -> Failure {
    match e {
        FibredError::Engine(inner) => Failure::from(inner),
        other => Failure::usage(other.to_string()),
    }
}
