//! Command-line front end: `simulate`, `estimate`, `compare`, `check-stats`.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or input error. All
//! randomness flows from `--seed`; no command reads OS entropy or clocks.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::estimators::{
    enumerate_splits, estimate_all_paths, estimate_node, write_estimates_csv, EstimatorId,
    SplitPolicy,
};
use crate::fmtnum::sig12;
use crate::harness::{convergence_slopes, run_experiment, write_results_csv, ExperimentConfig};
use crate::simulator::{simulate_probes, ObservationMatrix};
use crate::stats::{inclusion_exclusion_reconstruct, project_indicators, NodeIndicators};
use crate::topology::{NodeId, Tree};

#[derive(Parser)]
#[command(
    name = "losstomo",
    version,
    about = "Multicast loss tomography: probe simulation and path/link pass-rate estimation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate Bernoulli probe outcomes and write the observation CSV
    Simulate {
        /// Topology file (`link <child> <parent> <rate>` lines)
        #[arg(long)]
        topology: PathBuf,
        /// Number of probes to send (>= 1)
        #[arg(long)]
        probes: usize,
        /// RNG seed; the output is a pure function of topology, probes, seed
        #[arg(long)]
        seed: u64,
        /// Output file (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate path and link pass rates from an observation CSV
    Estimate {
        #[arg(long)]
        topology: PathBuf,
        /// Observation CSV produced by `simulate`
        #[arg(long)]
        obs: PathBuf,
        /// One of: minc-mle, merged-mle, lln, order-r:<r>
        #[arg(long)]
        estimator: String,
        /// merged-mle only: explicit partition `a,b|c,d`, or `all` to emit
        /// every two-part partition per node
        #[arg(long)]
        split: Option<String>,
        /// Clamp derived link rates above 1 down to 1
        #[arg(long)]
        clamp: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo comparison of estimators across probe counts
    Compare {
        #[arg(long)]
        topology: PathBuf,
        /// Comma-separated strictly increasing probe counts
        #[arg(long, value_delimiter = ',')]
        probes: Vec<usize>,
        /// Replicates per probe count
        #[arg(long)]
        reps: usize,
        /// Master seed; replicate seeds are derived from it
        #[arg(long)]
        seed: u64,
        /// Comma-separated estimator names
        #[arg(long, value_delimiter = ',')]
        estimators: Vec<String>,
        /// Report mean absolute gap to this estimator per row
        #[arg(long)]
        reference: Option<String>,
        /// Add a grid-search oracle gap column (nodes with <= 4 children)
        #[arg(long)]
        with_oracle: bool,
        /// Oracle grid step
        #[arg(long, default_value_t = 0.002)]
        oracle_step: f64,
        #[arg(long)]
        clamp: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the inclusion-exclusion identity between subset statistics
    /// and direct counts at every internal node
    CheckStats {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        obs: PathBuf,
        /// Skip nodes with more children than this (subset enumeration cap)
        #[arg(long, default_value_t = 16)]
        max_order: usize,
    },
}

/// Run the CLI and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, String> {
    match cmd {
        Command::Simulate {
            topology,
            probes,
            seed,
            out,
        } => cmd_simulate(&topology, probes, seed, out.as_deref()),
        Command::Estimate {
            topology,
            obs,
            estimator,
            split,
            clamp,
            out,
        } => cmd_estimate(&topology, &obs, &estimator, split.as_deref(), clamp, out.as_deref()),
        Command::Compare {
            topology,
            probes,
            reps,
            seed,
            estimators,
            reference,
            with_oracle,
            oracle_step,
            clamp,
            out,
        } => cmd_compare(
            &topology,
            probes,
            reps,
            seed,
            &estimators,
            reference.as_deref(),
            with_oracle,
            oracle_step,
            clamp,
            out.as_deref(),
        ),
        Command::CheckStats {
            topology,
            obs,
            max_order,
        } => cmd_check_stats(&topology, &obs, max_order),
    }
}

fn read_topology(path: &Path) -> Result<Tree, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read topology {}: {e}", path.display()))?;
    Tree::parse(&text).map_err(|e| e.to_string())
}

fn read_observations(path: &Path) -> Result<ObservationMatrix, String> {
    let file =
        File::open(path).map_err(|e| format!("cannot read observations {}: {e}", path.display()))?;
    ObservationMatrix::read_csv(BufReader::new(file)).map_err(|e| e.to_string())
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>, String> {
    match out {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn cmd_simulate(
    topology: &Path,
    probes: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32, String> {
    let tree = read_topology(topology)?;
    let obs = simulate_probes(&tree, probes, seed).map_err(|e| e.to_string())?;
    let name = topology
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| topology.display().to_string());
    let mut w = open_out(out)?;
    obs.write_csv(&mut w, seed, &name).map_err(|e| e.to_string())?;
    w.flush().map_err(|e| e.to_string())?;
    Ok(0)
}

fn parse_split_spec(spec: &str) -> Result<(Vec<NodeId>, Vec<NodeId>), String> {
    let (l, r) = spec
        .split_once('|')
        .ok_or_else(|| format!("split `{spec}` must be `a,b|c,d` or `all`"))?;
    let parse_group = |g: &str| -> Result<Vec<NodeId>, String> {
        let ids: Vec<NodeId> = g
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad node id `{t}` in split")))
            .collect::<Result<_, _>>()?;
        if ids.is_empty() {
            return Err("empty split group".into());
        }
        Ok(ids)
    };
    Ok((parse_group(l)?, parse_group(r)?))
}

fn cmd_estimate(
    topology: &Path,
    obs: &Path,
    estimator: &str,
    split: Option<&str>,
    clamp: bool,
    out: Option<&Path>,
) -> Result<i32, String> {
    let tree = read_topology(topology)?;
    let matrix = read_observations(obs)?;
    let ind = project_indicators(&tree, &matrix).map_err(|e| e.to_string())?;
    let mut est = EstimatorId::parse(estimator).map_err(|e| e.to_string())?;

    if let Some(spec) = split {
        if !matches!(est, EstimatorId::MergedMle(_)) {
            return Err("--split only applies to merged-mle".into());
        }
        if spec == "all" {
            let mut w = open_out(out)?;
            write_all_splits_csv(&tree, &ind, &mut w).map_err(|e| e.to_string())?;
            w.flush().map_err(|e| e.to_string())?;
            return Ok(0);
        }
        let (left, right) = parse_split_spec(spec)?;
        est = EstimatorId::MergedMle(SplitPolicy::Explicit { left, right });
    }

    let set = estimate_all_paths(&tree, &ind, &est, clamp);
    let mut w = open_out(out)?;
    write_estimates_csv(&[set], &mut w).map_err(|e| e.to_string())?;
    w.flush().map_err(|e| e.to_string())?;
    Ok(0)
}

// One row per two-part partition per internal node; leaves keep a single
// row. Link rates are omitted because they depend on a single chosen
// partition per node.
fn write_all_splits_csv<W: Write>(
    tree: &Tree,
    ind: &NodeIndicators,
    w: &mut W,
) -> io::Result<()> {
    writeln!(w, "estimator,node,gamma_hat,a_hat,alpha_hat,loss_hat,flags")?;
    for node in 1..=tree.max_node() {
        if tree.is_leaf(node) {
            let g = ind.gamma_hat(node);
            writeln!(w, "merged-mle,{node},{},{},,,", sig12(g), sig12(g))?;
            continue;
        }
        for (left, right) in enumerate_splits(tree.children(node)) {
            let est = EstimatorId::MergedMle(SplitPolicy::Explicit {
                left: left.clone(),
                right: right.clone(),
            });
            let p = estimate_node(tree, ind, node, &est);
            writeln!(
                w,
                "{},{node},{},{},,,{}",
                est.label(),
                sig12(p.gamma_hat),
                p.a_hat.map(sig12).unwrap_or_default(),
                p.flags
            )?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    topology: &Path,
    probes: Vec<usize>,
    reps: usize,
    seed: u64,
    estimators: &[String],
    reference: Option<&str>,
    with_oracle: bool,
    oracle_step: f64,
    clamp: bool,
    out: Option<&Path>,
) -> Result<i32, String> {
    let tree = read_topology(topology)?;
    let estimators: Vec<EstimatorId> = estimators
        .iter()
        .map(|s| EstimatorId::parse(s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let reference = reference
        .map(|s| EstimatorId::parse(s).map_err(|e| e.to_string()))
        .transpose()?;
    let config = ExperimentConfig {
        topology: tree,
        probe_counts: probes,
        replicates: reps,
        master_seed: seed,
        estimators,
        reference,
        with_oracle,
        oracle_step,
        clamp,
    };
    let rows = run_experiment(&config).map_err(|e| e.to_string())?;
    let slopes = if config.probe_counts.len() >= 3 {
        convergence_slopes(&rows)
    } else {
        Vec::new()
    };
    let mut w = open_out(out)?;
    write_results_csv(&rows, &slopes, with_oracle, &mut w).map_err(|e| e.to_string())?;
    w.flush().map_err(|e| e.to_string())?;
    Ok(0)
}

fn cmd_check_stats(topology: &Path, obs: &Path, max_order: usize) -> Result<i32, String> {
    let tree = read_topology(topology)?;
    let matrix = read_observations(obs)?;
    let ind = project_indicators(&tree, &matrix).map_err(|e| e.to_string())?;
    let mut all_pass = true;
    for node in 1..=tree.max_node() {
        if !tree.is_internal(node) {
            continue;
        }
        if tree.children(node).len() > max_order {
            println!(
                "node {node}: SKIP ({} children exceed --max-order {max_order})",
                tree.children(node).len()
            );
            continue;
        }
        let direct = ind.count(node) as i64;
        let reconstructed =
            inclusion_exclusion_reconstruct(&tree, &ind, node).map_err(|e| e.to_string())?;
        if direct == reconstructed {
            println!("node {node}: PASS (direct={direct}, reconstructed={reconstructed})");
        } else {
            println!("node {node}: FAIL (direct={direct}, reconstructed={reconstructed})");
            all_pass = false;
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}
