//! `qct`: batch front door for generating, enumerating, verifying, diffing,
//! composing, and closing constraint networks over composition tables.
//!
//! Exit codes: 0 on success, 1 on a verification/diff mismatch or an
//! inconsistent network, 2 on usage or I/O errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qct::calculi::DomainSpec;
use qct::generator::{generate_sharded, GenOptions, TerminationCondition};
use qct::io::{diff_ct, read_ct, write_ct_to_string, CtDiff};
use qct::oracle::{enumerate_ct_with_budget, DEFAULT_TRIPLE_BUDGET};
use qct::reasoner::{algebraic_closure, weak_compose, Closure, ConstraintNetwork};
use qct::schema::RelationSet;
use qct::table::{CompositionTable, GenStats};

#[derive(Parser)]
#[command(name = "qct", version, about = "Composition-table workbench for qualitative calculi")]
struct Cli {
    /// Seed for all randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DomainArgs {
    /// Domain token: pa, ia, indu, rcc8-rect, rcc8-disk, opra<m>-cart,
    /// opra<m>-polar, opra2-grid4.
    #[arg(long)]
    calculus: String,
    /// Size parameters, e.g. `M=8` or `M1=4,M2=16`.
    #[arg(long)]
    param: String,
}

impl DomainArgs {
    fn spec(&self) -> qct::Result<DomainSpec> {
        let mut params = BTreeMap::new();
        for field in self.param.split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (k, v) = field.split_once('=').ok_or_else(|| qct::Error::InvalidDomain(
                format!("malformed parameter `{field}`; expected key=value"),
            ))?;
            let v = v.parse().map_err(|_| {
                qct::Error::InvalidDomain(format!("parameter `{field}` is not an integer"))
            })?;
            params.insert(k.trim().to_string(), v);
        }
        DomainSpec::parse(&self.calculus, &params)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample random element triples until the termination condition stops.
    Generate {
        #[command(flatten)]
        domain: DomainArgs,
        /// Stop after exactly this many loops.
        #[arg(long)]
        max_loops: Option<u64>,
        /// Stop once no new triad appeared within this many loops.
        #[arg(long)]
        stall: Option<u64>,
        /// Stop once the table holds this many triads.
        #[arg(long)]
        target: Option<u64>,
        /// Output table file.
        #[arg(long)]
        out: PathBuf,
        /// Relate all six ordered pairs instead of deriving converses.
        #[arg(long)]
        no_converse_shortcut: bool,
        /// Sample fully at random instead of pre-seeding identity triads and
        /// drawing pairwise-distinct triples.
        #[arg(long)]
        no_seed_identity: bool,
        /// Record per-triad hit counts.
        #[arg(long)]
        hits: bool,
        /// Record one witness element triple per triad.
        #[arg(long)]
        witnesses: bool,
        /// Run this many independent shards and merge them.
        #[arg(long, default_value_t = 1)]
        shards: u64,
    },
    /// Exhaustively enumerate all element triples of the subdomain.
    Enumerate {
        #[command(flatten)]
        domain: DomainArgs,
        /// Output table file.
        #[arg(long)]
        out: PathBuf,
        /// Cap on |D|^3.
        #[arg(long, default_value_t = DEFAULT_TRIPLE_BUDGET)]
        budget: u128,
    },
    /// Compare two tables; exits 1 when they differ.
    Diff { a: PathBuf, b: PathBuf },
    /// Check a table against a reference; exits 1 on any mismatch.
    Verify {
        got: PathBuf,
        #[arg(long)]
        against: PathBuf,
    },
    /// Print the weak composition of two relations from a table.
    Compose {
        table: PathBuf,
        /// Left relation: one symbol or a comma-separated set.
        #[arg(long)]
        left: String,
        /// Right relation: one symbol or a comma-separated set.
        #[arg(long)]
        right: String,
    },
    /// Run algebraic closure on a constraint network; exits 1 when the
    /// network is inconsistent.
    Closure {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        network: PathBuf,
        /// Where to write the refined network (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict the INDU table from complete IA and PA tables.
    InduFilter {
        #[arg(long)]
        ia: PathBuf,
        #[arg(long)]
        pa: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("qct: {err}");
            ExitCode::from(2)
        }
    }
}

fn read_table(path: &Path) -> qct::Result<CompositionTable> {
    let text = std::fs::read_to_string(path)?;
    read_ct(&text)
}

fn write_table(path: &Path, table: &CompositionTable) -> qct::Result<()> {
    std::fs::write(path, write_ct_to_string(table))?;
    Ok(())
}

fn parse_set(schema: &qct::schema::Schema, spec: &str) -> qct::Result<RelationSet> {
    let mut set = RelationSet::empty(schema);
    for sym in spec.split(',') {
        let sym = sym.trim();
        let ix = schema.lookup(sym).ok_or_else(|| {
            qct::Error::UnknownSymbol(sym.to_string(), schema.name().to_string())
        })?;
        set.insert(ix);
    }
    Ok(set)
}

fn print_diff(diff: &CtDiff, a: &CompositionTable) {
    let schema = a.schema();
    println!("missing: {}", diff.missing.len());
    for t in &diff.missing {
        println!(
            "- {} {} {}",
            schema.symbol(t.alpha),
            schema.symbol(t.gamma),
            schema.symbol(t.beta)
        );
    }
    println!("extra: {}", diff.extra.len());
    for t in &diff.extra {
        println!(
            "+ {} {} {}",
            schema.symbol(t.alpha),
            schema.symbol(t.gamma),
            schema.symbol(t.beta)
        );
    }
}

fn run(cli: Cli) -> qct::Result<ExitCode> {
    match cli.command {
        Command::Generate {
            domain,
            max_loops,
            stall,
            target,
            out,
            no_converse_shortcut,
            no_seed_identity,
            hits,
            witnesses,
            shards,
        } => {
            let spec = domain.spec()?;
            let mut bounds = Vec::new();
            if let Some(n) = max_loops {
                bounds.push(TerminationCondition::MaxLoops(n));
            }
            if let Some(w) = stall {
                bounds.push(TerminationCondition::StallWindow(w));
            }
            if let Some(n) = target {
                bounds.push(TerminationCondition::TargetTriads(n));
            }
            let psi = match bounds.len() {
                0 => TerminationCondition::default_for_unknown(),
                1 => bounds.pop().unwrap(),
                _ => TerminationCondition::All(bounds),
            };
            let opts = GenOptions {
                use_converse_shortcut: !no_converse_shortcut,
                seed_identity: !no_seed_identity,
                record_hits: hits,
                record_witnesses: witnesses,
            };
            let (table, stats) = generate_sharded(&spec, &psi, cli.seed, &opts, shards)?;
            write_table(&out, &table)?;
            eprintln!("{stats}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { domain, out, budget } => {
            let spec = domain.spec()?;
            let table = enumerate_ct_with_budget(&spec, budget)?;
            let stats = GenStats {
                loops: 0,
                triads: table.triad_count(),
                last_found: 0,
            };
            write_table(&out, &table)?;
            eprintln!("{stats}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Diff { a, b } => {
            let table_a = read_table(&a)?;
            let table_b = read_table(&b)?;
            let diff = diff_ct(&table_a, &table_b)?;
            print_diff(&diff, &table_a);
            Ok(if diff.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Verify { got, against } => {
            let table_got = read_table(&got)?;
            let table_ref = read_table(&against)?;
            let diff = diff_ct(&table_got, &table_ref)?;
            print_diff(&diff, &table_got);
            if diff.is_empty() {
                eprintln!("verified: tables identical");
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "mismatch: {} missing, {} extra",
                    diff.missing.len(),
                    diff.extra.len()
                );
                Ok(ExitCode::from(1))
            }
        }
        Command::Compose { table, left, right } => {
            let table = read_table(&table)?;
            let a = parse_set(table.schema(), &left)?;
            let b = parse_set(table.schema(), &right)?;
            let composed = weak_compose(&table, &a, &b)?;
            println!("{composed}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Closure { table, network, out } => {
            let table = read_table(&table)?;
            let text = std::fs::read_to_string(&network)?;
            let net = ConstraintNetwork::parse(table.schema(), &text)?;
            match algebraic_closure(&net, &table)? {
                Closure::Stable(refined) => {
                    let rendered = refined.to_text();
                    match out {
                        Some(path) => std::fs::write(path, rendered)?,
                        None => print!("{rendered}"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Closure::Inconsistent { i, j } => {
                    eprintln!("INCONSISTENT: label ({i}, {j}) became empty");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::InduFilter { ia, pa, out } => {
            let ia_table = read_table(&ia)?;
            let pa_table = read_table(&pa)?;
            let predicted = qct::reasoner::indu_candidate_filter(&ia_table, &pa_table)?;
            write_table(&out, &predicted)?;
            let stats = GenStats {
                loops: 0,
                triads: predicted.triad_count(),
                last_found: 0,
            };
            eprintln!("{stats}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
