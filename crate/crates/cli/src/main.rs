use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lazy_tournament::kapranov::embed_interior_all;
use lazy_tournament::multidegree::{multidegree_table, odd_double_factorial};
use lazy_tournament::trees::{par_for_each_partition, DEFAULT_MAX_N};
use lazy_tournament::{
    classify, embed_boundary, multidegree, run_tournament, tau, tau_inverse, Composition, Error,
    InteriorConfiguration, LabeledTree, ParkingFunction, Suite,
};

const MAX_N_VAR: &str = "LAZYTOUR_MAX_N";

/// Lazy tournaments, column-restricted parking functions and multidegrees
/// of the iterated Kapranov embedding.
#[derive(Parser)]
#[command(name = "lazytour", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lists trees with a and b adjacent, or the trees of Tour(k).
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Restrict to Tour(k), e.g. `1,0,1,2`.
        #[arg(long)]
        k: Option<Composition>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Multidegree of one composition, or the CSV table for all of size n.
    Multidegree {
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        k: Option<Composition>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Runs the tournament and prints the composition k with the tree in Tour(k).
    Classify {
        tree: LabeledTree,
        /// `json` prints the full transcript.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Converts between tournament trees and column-restricted parking functions.
    Bijection {
        #[command(subcommand)]
        direction: Direction,
    },
    /// Kapranov coordinates of a tree, or of an interior point given as
    /// `a=0,b=1,c=2,1=inf,...`.
    Coords {
        #[arg(required_unless_present = "interior")]
        tree: Option<LabeledTree>,
        #[arg(long, conflicts_with = "tree")]
        interior: Option<InteriorConfiguration>,
        #[arg(long, value_enum, default_value_t = CoordFormat::Text)]
        format: CoordFormat,
    },
    /// Runs exhaustive property suites for every size up to n-max.
    Verify {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum Direction {
    /// Tree to parking function, e.g. `(a,b,(((2,3),4),(c,1)))`.
    ToPf {
        tree: LabeledTree,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parking function to tree, e.g. `3;-;1;2,4`.
    ToTree {
        #[arg(allow_hyphen_values = true)]
        pf: ParkingFunction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordFormat {
    Text,
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Verification,
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("serialization error: {e}"))
    }
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_N_VAR} must be a number, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_size(k: &Composition, n: usize) -> Result<(), Failure> {
    k.check_square()?;
    if k.len() != n {
        return Err(Failure::Usage(format!("--k has {} parts but --n is {n}", k.len())));
    }
    Ok(())
}

fn enumerate(n: usize, k: Option<Composition>, format: Format, jobs: usize) -> Result<(), Failure> {
    if let Some(k) = &k {
        check_size(k, n)?;
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut count = 0usize;
    par_for_each_partition(
        n,
        true,
        max_n()?,
        jobs,
        |trees| -> Result<Vec<String>, Error> {
            let mut lines = Vec::new();
            for t in trees {
                let transcript = run_tournament(&t)?;
                if k.as_ref().is_some_and(|k| *k != transcript.win_counts) {
                    continue;
                }
                lines.push(match format {
                    Format::Text => t.to_string(),
                    Format::Json => serde_json::to_string(&transcript)
                        .map_err(|e| Error::Internal(e.to_string()))?,
                });
            }
            Ok(lines)
        },
        |lines| {
            for line in lines? {
                writeln!(out, "{line}").map_err(|e| Error::Internal(e.to_string()))?;
                count += 1;
            }
            Ok(())
        },
    )?;
    out.flush()?;
    eprintln!("count: {count}");
    Ok(())
}

fn multidegree_cmd(k: Option<Composition>, n: Option<usize>) -> Result<(), Failure> {
    let mut out = BufWriter::new(io::stdout().lock());
    if let Some(k) = k {
        writeln!(out, "{}", multidegree(&k)?)?;
    } else if let Some(n) = n {
        let max = max_n()?;
        if n > max {
            return Err(Error::ResourceLimit { n, max }.into());
        }
        writeln!(out, "k,multidegree")?;
        for (k, d) in multidegree_table(n) {
            let field: Vec<String> = k.parts().iter().map(usize::to_string).collect();
            writeln!(out, "{},{d}", field.join(";"))?;
        }
        writeln!(out, "total,{}", odd_double_factorial(n))?;
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { n, k, format, jobs } => enumerate(n, k, format, jobs),
        Command::Multidegree { k, n } => multidegree_cmd(k, n),
        Command::Classify { tree, format } => {
            match format {
                Format::Text => println!("{}", classify(&tree)?),
                Format::Json => {
                    classify(&tree)?;
                    println!("{}", serde_json::to_string(&run_tournament(&tree)?)?);
                }
            }
            Ok(())
        }
        Command::Bijection { direction } => {
            match direction {
                Direction::ToPf { tree, format } => {
                    let p = tau(&tree)?;
                    match format {
                        Format::Text => println!("{p}"),
                        Format::Json => println!("{}", serde_json::to_string(&p)?),
                    }
                }
                Direction::ToTree { pf } => println!("{}", tau_inverse(&pf)?),
            }
            Ok(())
        }
        Command::Coords { tree, interior, format } => {
            let coords = match (tree, interior) {
                (Some(t), _) => embed_boundary(&t)?,
                (None, Some(cfg)) => embed_interior_all(&cfg)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            match format {
                CoordFormat::Text => println!("{coords}"),
                CoordFormat::Json => println!("{}", serde_json::to_string(&coords)?),
                CoordFormat::Csv => {
                    println!("factor,coordinate,value");
                    for row in coords.csv_rows() {
                        println!("{row}");
                    }
                }
            }
            Ok(())
        }
        Command::Verify { n_max, suite, jobs } => {
            let report = lazy_tournament::verify(n_max, suite, max_n()?, jobs)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some((n, check)) = report.first_failure() {
                eprintln!(
                    "FAIL {} at n = {n}: {}",
                    check.name,
                    check.counterexample.as_deref().unwrap_or("")
                );
                return Err(Failure::Verification);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
