use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use rgnn::data::{self, DatasetCounts, Manifest};
use rgnn::experiment::{self, paired_comparison, summarize, ExperimentConfig};

#[derive(Parser)]
#[command(name = "rgnn", version, about = "Robust graph-filter GNN experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a perturbation sweep and write a results CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Number of realizations trained concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Results file; defaults to `output` from the config, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dataset root; defaults to $RGNN_DATA_ROOT, else ./data.
        #[arg(long)]
        data_root: Option<PathBuf>,
    },
    /// Print per-(dataset, method, level) accuracy statistics of a results CSV.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the counts of the datasets found under the data root.
    Manifest {
        #[arg(long)]
        data_root: Option<PathBuf>,
        #[arg(required = true)]
        datasets: Vec<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run {
            config,
            jobs,
            out,
            data_root,
        } => run(config, jobs, out, data_root),
        Command::Summarize { input } => {
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let rows = experiment::read_results(BufReader::new(file))?;
            print_summary(&rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Manifest { data_root, datasets } => {
            let root = data::data_root(data_root.as_deref());
            let mut manifest = Manifest::default();
            for name in datasets {
                let d = data::load_webkb(&root, &name)?;
                manifest
                    .datasets
                    .insert(name.to_ascii_lowercase(), DatasetCounts::of(&d));
            }
            print!("{}", manifest.render());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(config: PathBuf, jobs: usize, out: Option<PathBuf>, data_root: Option<PathBuf>) -> Result<ExitCode> {
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let cfg = ExperimentConfig::from_file(&config)?;
    let root = data::data_root(data_root.as_deref());
    let dataset = experiment::load_dataset(&cfg, &root).with_context(|| format!("loading dataset {}", cfg.dataset))?;
    log::info!(
        "{}: {} nodes, {} features, {} classes, {} edges",
        dataset.name,
        dataset.num_nodes(),
        dataset.num_features(),
        dataset.targets.num_classes(),
        dataset.adjacency.edge_count()
    );
    let outcome = match out.or_else(|| cfg.output.clone()) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
            let outcome = experiment::run_experiment_to(&cfg, &dataset, jobs, &mut w)?;
            w.flush()?;
            log::info!("wrote {} rows to {}", outcome.rows.len(), path.display());
            outcome
        }
        None => experiment::run_experiment_to(&cfg, &dataset, jobs, &mut std::io::stdout().lock())?,
    };
    if outcome.errors > 0 {
        log::error!("{} of {} trials failed", outcome.errors, outcome.rows.len());
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(rows: &[experiment::ResultRow]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "dataset,method,pert_level,n,mean_test_acc,sd_test_acc,errors")?;
    for s in summarize(rows) {
        writeln!(
            out,
            "{},{},{},{},{:.4},{:.4},{}",
            s.dataset, s.method, s.pert_level, s.n, s.mean, s.sd, s.errors
        )?;
    }
    let pairs = paired_comparison(rows, "rgcnh", "gcnh");
    if !pairs.is_empty() {
        writeln!(out)?;
        writeln!(
            out,
            "dataset,pert_level,pairs,mean_diff_rgcnh_minus_gcnh,wins,losses,ties,sign_test_p"
        )?;
        for c in pairs {
            writeln!(
                out,
                "{},{},{},{:.4},{},{},{},{:.4}",
                c.dataset, c.pert_level, c.pairs, c.mean_diff, c.wins, c.losses, c.ties, c.p_value
            )?;
        }
    }
    Ok(())
}
