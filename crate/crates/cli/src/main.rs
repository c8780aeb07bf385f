use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use necklace_core::blocks::{enumerate_blocks, BlockKind};
use necklace_core::construct::{construct_or_search, Construction};
use necklace_core::enumerate::{enumerate_necklaces, NODE_BUDGET_ENV};
use necklace_core::model::quick_fact_reason;
use necklace_core::recurrence::{detect_minimal, signed};
use necklace_core::transfer::{
    build_d_prime_with, build_d_quotient_with, build_d_with, count_with, sequence_with, DigraphOptions, Method,
};
use necklace_core::verify::{check_cell, verify_tables, Scope};
use necklace_core::{Error, Necklace, Params};

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Construct, enumerate and count (a,b)-difference necklaces.
#[derive(Parser)]
#[command(name = "necklace", version)]
struct Cli {
    /// Abort exhaustive searches after this many nodes.
    #[arg(long, global = true, env = NODE_BUDGET_ENV)]
    node_budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Pair {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
}

impl Pair {
    fn params(self) -> Result<Params, Error> {
        Params::new(self.a, self.b)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Dfs,
    Transfer,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Dfs => Method::Dfs,
            MethodArg::Transfer => Method::Transfer,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Start,
    Mid,
    End,
}

#[derive(Clone, Copy, ValueEnum)]
enum DigraphArg {
    /// Walks count 2-regular spanning subgraphs.
    TwoRegular,
    /// Walks count Hamiltonian cycles, one vertex per block and pairing.
    Hamiltonian,
    /// The Hamiltonian digraph with equivalent vertices merged.
    Quotient,
}

#[derive(Subcommand)]
enum Command {
    /// Count the necklaces of length n.
    Count {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// List the necklaces of length n in canonical form.
    Enumerate {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: usize,
        /// Stop after this many necklaces (the lexicographically smallest).
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print one necklace of length n, built explicitly where possible.
    Construct {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Detect the minimal linear recurrence of N(a+b), ..., N(n_max).
    Recurrence {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Recompute the embedded reference tables.
    VerifyTables {
        #[arg(long, value_enum, default_value = "fast")]
        scope: ScopeArg,
        /// Check only these cells, given as a,b,n.
        #[arg(long, value_parser = parse_cell)]
        cell: Vec<(usize, usize, usize)>,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Print the blocks of a pair as edge lists.
    Blocks {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Print a transfer digraph as vertex and edge lines.
    Digraph {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, default_value = "quotient")]
        kind: DigraphArg,
        /// Build even when b exceeds the default size guard.
        #[arg(long)]
        allow_large: bool,
    },
}

fn parse_cell(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
    match parts.as_slice() {
        [Ok(a), Ok(b), Ok(n)] => Ok((*a, *b, *n)),
        _ => Err(format!("expected a,b,n, got {s:?}")),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParams(_) | Error::Precondition(_) => EXIT_USAGE,
        Error::BudgetExceeded { .. } | Error::TooLarge { .. } => EXIT_RESOURCE,
        _ => EXIT_MISMATCH,
    }
}

fn print_necklaces(necklaces: &[Necklace], format: Format) {
    match format {
        Format::Text => {
            for neck in necklaces {
                println!("{neck}");
            }
        }
        Format::Json => {
            let beads: Vec<&[usize]> = necklaces.iter().map(Necklace::beads).collect();
            println!("{}", serde_json::to_string(&beads).expect("integer arrays serialize"));
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Count { pair, n, method } => {
            let params = pair.params()?;
            let (count, route) = count_with(params, n, method.into())?;
            println!("{count}");
            println!("method: {}", route.name());
            if let Some(reason) = quick_fact_reason(params, n) {
                println!("note: {reason}");
            }
        }
        Command::Enumerate { pair, n, limit, format } => {
            let necklaces = enumerate_necklaces(pair.params()?, n, limit)?;
            print_necklaces(&necklaces, format);
        }
        Command::Construct { pair, n, format } => match construct_or_search(pair.params()?, n)? {
            Construction::Built(neck) | Construction::Found(neck) => {
                print_necklaces(&[neck.canonical()], format);
            }
            Construction::NoneExists => match format {
                Format::Text => println!("none exists"),
                Format::Json => println!("[]"),
            },
        },
        Command::Recurrence { pair, n_max, method } => {
            let params = pair.params()?;
            let first = pair.a + pair.b;
            if n_max < first + 4 {
                return Err(Error::Precondition(format!("n-max must be at least a+b+4 = {}", first + 4)));
            }
            let seq = signed(&sequence_with(params, n_max, method.into())?);
            println!("terms: n = {first}..={n_max} ({} values)", seq.len());
            match detect_minimal(&seq) {
                Some(rec) => {
                    let coefficients: Vec<String> = rec.coefficients().iter().map(ToString::to_string).collect();
                    println!("order {}", rec.order());
                    println!("coefficients: ({})", coefficients.join(","));
                    println!("{}", rec.shifted(first));
                }
                None => println!("no recurrence of order ≤ {} found", (seq.len() - 1) / 2),
            }
        }
        Command::VerifyTables { scope, cell, method } => {
            if !cell.is_empty() {
                let mut code = 0;
                for (a, b, n) in cell {
                    let (count, expected) = check_cell(a, b, n, method.into())?;
                    match expected {
                        Some(e) if e == count => println!("ok ({a},{b}) n={n}: {count}"),
                        Some(e) => {
                            println!("MISMATCH ({a},{b}) n={n}: expected {e}, computed {count}");
                            code = EXIT_MISMATCH;
                        }
                        None => println!("untabulated ({a},{b}) n={n}: {count}"),
                    }
                }
                return Ok(code);
            }
            let scope = match scope {
                ScopeArg::Fast => Scope::Fast,
                ScopeArg::Full => Scope::Full,
            };
            let report = verify_tables(scope);
            println!("{report}");
            if report.aborted() {
                return Ok(EXIT_RESOURCE);
            }
            if !report.passed() {
                return Ok(EXIT_MISMATCH);
            }
        }
        Command::Blocks { pair, kind } => {
            let set = enumerate_blocks(pair.params()?)?;
            let kind = kind.map(|k| match k {
                KindArg::Start => BlockKind::Start,
                KindArg::Mid => BlockKind::Mid,
                KindArg::End => BlockKind::End,
            });
            for block in set.all().filter(|blk| kind.is_none_or(|k| blk.kind() == k)) {
                print!("{}", block.export());
            }
        }
        Command::Digraph { pair, kind, allow_large } => {
            let params = pair.params()?;
            let options = DigraphOptions { allow_large };
            let d = match kind {
                DigraphArg::TwoRegular => build_d_prime_with(params, options)?,
                DigraphArg::Hamiltonian => build_d_with(params, options)?,
                DigraphArg::Quotient => build_d_quotient_with(params, options)?,
            };
            print!("{}", d.export());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(budget) = cli.node_budget {
        std::env::set_var(NODE_BUDGET_ENV, budget.to_string());
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
