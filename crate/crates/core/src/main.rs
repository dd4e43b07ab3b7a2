use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fusionlab::harness::{
    analyze, builtin_corpus, dump_fusion, find_entry, load_corpus, run_suite, CorpusEntry,
    SuiteConfig, Theorem,
};
use fusionlab::permcore::Limits;

#[derive(Parser)]
#[command(
    name = "fusionlab",
    version,
    about = "Fusion systems of small permutation groups and nilpotency criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize Sylow, Frattini, J, Z(J), strong closure and fusion data for one group.
    Analyze {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run criterion verifiers over a corpus and write a JSON report.
    Verify {
        /// Corpus file (JSON).
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        corpus: Option<PathBuf>,
        /// Use the built-in corpus.
        #[arg(long)]
        builtin: bool,
        /// Comma-separated: A,B,C,kizmaz,generation,frobenius.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "A,B,C,kizmaz,generation,frobenius"
        )]
        theorems: Vec<Theorem>,
        /// Only this prime.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = Limits::default().max_order)]
        max_order: usize,
        #[arg(long, default_value_t = Limits::default().max_subgroup_order)]
        max_subgroup_order: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also run odd-p criteria at p = 2; outcomes do not affect the exit code.
        #[arg(long)]
        include_even_p_exploratory: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write hom-set sizes of F_P(G) for every pair of subgroups of P.
    DumpFusion {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Target {
    /// `<corpus-path>#<name>`; use `builtin#<name>` for the built-in corpus.
    #[arg(long)]
    group: String,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = Limits::default().max_order)]
    max_order: usize,
    #[arg(long, default_value_t = Limits::default().max_subgroup_order)]
    max_subgroup_order: usize,
}

impl Target {
    fn limits(&self) -> Limits {
        Limits {
            max_order: self.max_order,
            max_subgroup_order: self.max_subgroup_order,
        }
    }

    fn entry(&self) -> anyhow::Result<CorpusEntry> {
        let (path, name) = self
            .group
            .rsplit_once('#')
            .ok_or_else(|| anyhow!("--group must look like <corpus-path>#<name>"))?;
        let corpus = if path == "builtin" {
            builtin_corpus()
        } else {
            load_corpus(Path::new(path)).with_context(|| format!("loading {path}"))?
        };
        Ok(find_entry(&corpus, name)?.clone())
    }
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze { target, out } => {
            let entry = target.entry()?;
            let g = entry.build(&target.limits())?;
            let summary = analyze(&entry.name, &g, target.p, &target.limits())?;
            write_json(&summary, out.as_deref())?;
            Ok(0)
        }
        Command::DumpFusion { target, out } => {
            let entry = target.entry()?;
            let g = entry.build(&target.limits())?;
            let dump = dump_fusion(&entry.name, &g, target.p, &target.limits())?;
            write_json(&dump, Some(&out))?;
            Ok(0)
        }
        Command::Verify {
            corpus,
            builtin,
            theorems,
            p,
            max_order,
            max_subgroup_order,
            jobs,
            include_even_p_exploratory,
            out,
        } => {
            let (entries, label) = match corpus {
                Some(path) if !builtin => (
                    load_corpus(&path).with_context(|| format!("loading {}", path.display()))?,
                    path.display().to_string(),
                ),
                _ => (builtin_corpus(), "builtin".to_string()),
            };
            if let Some(p) = p {
                if !fusionlab::permcore::arith::is_prime(p) {
                    return Err(anyhow!("--p {p} is not prime"));
                }
            }
            let config = SuiteConfig {
                corpus_label: label,
                theorems,
                p,
                limits: Limits {
                    max_order,
                    max_subgroup_order,
                },
                jobs,
                include_even_p_exploratory,
            };
            let doc = run_suite(&entries, &config);
            write_json(&doc, Some(&out))?;
            let s = &doc.summary;
            eprintln!(
                "pass={} degenerate_pass={} counterexample={} skipped={} invariant_failure={}",
                s.pass, s.degenerate_pass, s.counterexample, s.skipped, s.invariant_failure
            );
            Ok(doc.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
