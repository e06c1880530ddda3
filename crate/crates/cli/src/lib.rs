//! Command-line interface for efficiency routing.
//!
//! Exit codes: 0 success, 1 no chain / some pair unreachable, 2 bad input,
//! 3 precondition violated (network not connected or not symmetric).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use logichain::algebra::{to_lossiness, DEFAULT_BASE};
use logichain::guaranteed::{guaranteed_min_all_pairs, guaranteed_min_by_tree};
use logichain::io::{format_fixed, parse_network};
use logichain::routing::{best_chain_multiplicative, best_chain_via_lossiness};
use logichain::{Chain, Efficiency, GuaranteedLevel, LevelError, Network, RoutingError, Witness};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO_RESULT: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "logichain", about = "Efficient chains in logistic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Most efficient chain between two nodes.
    BestChain {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value_t = RouteMethod::Mult)]
        method: RouteMethod,
        #[arg(long, default_value_t = DEFAULT_BASE)]
        base: f64,
        #[arg(long)]
        json: bool,
    },
    /// Guaranteed minimum efficiency between any two nodes.
    GuaranteedMin {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum)]
        method: LevelMethod,
        #[arg(long)]
        json: bool,
    },
    /// Print the network kind.
    Classify {
        #[arg(long)]
        net: PathBuf,
    },
    /// Lossiness -log_base(eta) of one efficiency.
    Lossiness {
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = DEFAULT_BASE)]
        base: f64,
    },
    /// Print the program version.
    Version,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RouteMethod {
    Mult,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelMethod {
    Tree,
    AllPairs,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

impl From<RoutingError> for Failure {
    fn from(err: RoutingError) -> Self {
        Failure::input(err)
    }
}

impl From<LevelError> for Failure {
    fn from(err: LevelError) -> Self {
        let code = match &err {
            LevelError::SomePairUnreachable { .. } => EXIT_NO_RESULT,
            e if e.is_precondition() => EXIT_PRECONDITION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

/// Numbers are reported rounded to 8 decimals in both plain and JSON output.
fn rounded(value: f64) -> Value {
    let text = format_fixed(value);
    json!(text.parse::<f64>().expect("fixed rendering parses"))
}

fn load(path: &Path) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_network(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn chain_line(chain: &Chain) -> String {
    format!(
        "{}  {}",
        chain.labels().join(" "),
        format_fixed(chain.efficiency())
    )
}

/// Runs one invocation and returns the process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.message);
            failure.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let mut emit = |text: String| writeln!(out, "{text}").map_err(Failure::input);
    match command {
        Command::BestChain {
            net,
            from,
            to,
            method,
            base,
            json,
        } => {
            let net = load(&net)?;
            let found = match method {
                RouteMethod::Mult => {
                    // Validate the base even though this route does not need it.
                    to_lossiness(Efficiency::ONE, base).map_err(Failure::input)?;
                    best_chain_multiplicative(&net, &from, &to)?.map(|chain| {
                        let total = to_lossiness(
                            Efficiency::new(chain.efficiency())
                                .expect("chain efficiency in (0, 1]"),
                            base,
                        )
                        .expect("base checked")
                        .value();
                        (chain, total)
                    })
                }
                RouteMethod::Log => best_chain_via_lossiness(&net, &from, &to, base)?
                    .map(|found| (found.chain, found.lossiness_total)),
            };
            let Some((chain, total)) = found else {
                return Err(Failure {
                    code: EXIT_NO_RESULT,
                    message: format!("no chain from {from} to {to}"),
                });
            };
            if json {
                let doc = json!({
                    "chain": chain.labels(),
                    "efficiency": rounded(chain.efficiency()),
                    "lossiness_total": rounded(total),
                    "base": base,
                });
                emit(doc.to_string())
            } else {
                emit(chain_line(&chain))
            }
        }
        Command::GuaranteedMin { net, method, json } => {
            let net = load(&net)?;
            let level = match method {
                LevelMethod::Tree => {
                    let view = net.as_symmetric().map_err(LevelError::from)?;
                    guaranteed_min_by_tree(&view)?
                }
                LevelMethod::AllPairs => guaranteed_min_all_pairs(&net)?,
            };
            if json {
                emit(level_json(&level).to_string())
            } else {
                emit(level_text(&level))
            }
        }
        Command::Classify { net } => {
            let net = load(&net)?;
            emit(net.classify().to_string())
        }
        Command::Lossiness { eta, base } => {
            let eta = Efficiency::new(eta).map_err(Failure::input)?;
            let t = to_lossiness(eta, base).map_err(Failure::input)?;
            emit(format_fixed(t.value()))
        }
        Command::Version => emit(format!("logichain {}", env!("CARGO_PKG_VERSION"))),
    }
}

fn level_text(level: &GuaranteedLevel) -> String {
    let mut lines = vec![format_fixed(level.value)];
    match &level.witness {
        Witness::Tree(tree) => {
            lines.push("tree:".to_owned());
            for e in tree.edges() {
                lines.push(format!(
                    "{} {} {}",
                    tree.label(e.a),
                    tree.label(e.b),
                    format_fixed(e.efficiency)
                ));
            }
        }
        Witness::Pair { from, to, chain } => {
            lines.push(format!("worst pair: {from} {to}"));
            lines.push(format!("chain: {}", chain_line(chain)));
        }
        Witness::Trivial => lines.push("fewer than two nodes".to_owned()),
    }
    lines.join("\n")
}

fn level_json(level: &GuaranteedLevel) -> Value {
    match &level.witness {
        Witness::Tree(tree) => json!({
            "method": "tree",
            "value": rounded(level.value),
            "edges": tree.edges().iter().map(|e| json!({
                "a": tree.label(e.a).as_str(),
                "b": tree.label(e.b).as_str(),
                "efficiency": rounded(e.efficiency),
            })).collect::<Vec<_>>(),
        }),
        Witness::Pair { from, to, chain } => json!({
            "method": "all-pairs",
            "value": rounded(level.value),
            "from": from.as_str(),
            "to": to.as_str(),
            "chain": chain.labels(),
        }),
        Witness::Trivial => json!({
            "method": "all-pairs",
            "value": rounded(level.value),
        }),
    }
}
