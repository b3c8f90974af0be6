//! `mb`: exact price intervals for basket calls on multi-asset binomial trees.

mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mb_core::pricing::{payoff, price_interval, spec_from_market};
use mb_core::tree::{extend_at, TreeConfig, TreePolicy, Word};
use mb_core::verify::{self, VerifyConfig};
use mb_core::PolytopeSpec;
use serde_json::{json, Value};

use config::ConfigError;

#[derive(Parser)]
#[command(name = "mb", version, about = "Exact price bounds for multi-asset binomial basket calls")]
struct Cli {
    /// Largest m·n for which the exponential tree oracle may run.
    #[arg(long, global = true, env = "MB_MAX_ORACLE_BITS", default_value_t = mb_core::tree::DEFAULT_MAX_ORACLE_BITS)]
    max_oracle_bits: usize,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price interval [F_min, F_max] of the basket call described by a model file.
    Price {
        #[arg(long)]
        config: PathBuf,
        /// Report values discounted by R^-n.
        #[arg(long)]
        discount: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertices and criterion of the polytope P(b).
    Polytope {
        /// Comma-separated entries of b, e.g. "1/2,-1/3,0".
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded cross-checks of the closed forms against the LP and tree oracles.
    Verify {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Perturb the supervertex to exercise the failure path.
        #[arg(long, hide = true)]
        corrupt_supervertex: bool,
    },
    /// Expectation of the payoff under a constant one-step policy.
    Expect {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyKind::Constant)]
        policy: PolicyKind,
        /// Density on {0,1}^m: all 2^m entries in index order, or "λ:weight" pairs.
        #[arg(long)]
        density: Option<String>,
        /// Condition on a node: letters of {0,1}^m separated by spaces or commas.
        #[arg(long, default_value = "")]
        node: String,
        #[arg(long)]
        discount: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyKind {
    Constant,
    Supervertex,
    Subvertex,
}

enum Failure {
    Config(String),
    Counterexample(Value),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::Config(e.0)
    }
}

impl From<mb_core::Error> for Failure {
    fn from(e: mb_core::Error) -> Self {
        Self::Config(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).expect("serializable") + "\n";
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tree_config = TreeConfig {
        max_bits: cli.max_oracle_bits,
    };
    match cli.command {
        Command::Price { config, discount, out } => {
            let mut model = config::parse_model(&read(&config)?)?;
            model.discount |= discount;
            emit(&report::price(&price_interval(&model)?), out.as_deref())
        }
        Command::Polytope { b, out } => {
            let spec = PolytopeSpec::new(config::parse_b(&b)?)?;
            emit(&report::polytope(&spec)?, out.as_deref())
        }
        Command::Verify {
            m,
            n,
            cases,
            seed,
            out,
            corrupt_supervertex,
        } => {
            let report = verify::run(&VerifyConfig {
                m_max: m,
                n_max: n,
                cases,
                seed,
                max_bits: cli.max_oracle_bits,
                corrupt_supervertex,
            })?;
            let doc = report::verify(&report, seed);
            if report.passed() {
                emit(&doc, out.as_deref())
            } else {
                emit(&doc, out.as_deref())?;
                Err(Failure::Counterexample(doc))
            }
        }
        Command::Expect {
            config,
            policy,
            density,
            node,
            discount,
            out,
        } => {
            let mut model = config::parse_model(&read(&config)?)?;
            model.discount |= discount;
            let m = model.m();
            let spec = spec_from_market(&model)?;
            let q = match (policy, density) {
                (PolicyKind::Constant, Some(d)) => config::parse_density(&d, m)?,
                (PolicyKind::Constant, None) => {
                    return Err(Failure::Config("--policy constant requires --density".into()))
                }
                (_, Some(_)) => {
                    return Err(Failure::Config("--density applies only to --policy constant".into()))
                }
                (PolicyKind::Supervertex, None) => spec.supervertex()?.to_vector(),
                (PolicyKind::Subvertex, None) => {
                    if !spec.subvertex_in_polytope()? {
                        return Err(Failure::Config(format!(
                            "subvertex is not a density: sum of b(i) = {} exceeds 2 - m = {}",
                            spec.b_sum(),
                            spec.criterion_bound()
                        )));
                    }
                    spec.subvertex()?.to_vector()
                }
            };
            let node = Word::parse(m, &node)?;
            if node.len() > model.horizon {
                return Err(Failure::Config(format!(
                    "--node has {} letters but the horizon is {}",
                    node.len(),
                    model.horizon
                )));
            }
            let f = payoff(&model)?;
            let value = extend_at(&f, &TreePolicy::constant(q.clone())?, &node, &tree_config)?
                * model.discount_factor(model.horizon - node.len());
            let in_polytope = !spec.is_empty() && spec.contains(&q)?;
            let doc = json!({
                "density": report::density(&q),
                "in_polytope": in_polytope,
                "node": node.letters().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "expectation": report::rational(&value),
                "discounted": model.discount,
            });
            emit(&doc, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Counterexample(doc)) => {
            eprintln!("error: counterexample found: {}", doc["counterexample"]);
            ExitCode::from(1)
        }
    }
}
