//! Monte Carlo experiment runner: paired estimator comparison across probe
//! counts and replicates, plus convergence-rate fitting. Everything is
//! sequential and seed-derived, so output is byte-identical across runs.

use std::io::{self, Write};

use thiserror::Error;

use crate::estimators::{estimate_all_paths, EstimatorId};
use crate::fmtnum::sig12;
use crate::oracle::{grid_full_likelihood_mle, OracleError, PatternCounts};
use crate::simulator::{derive_seed, simulate_probes, SimError};
use crate::stats::{project_indicators, StatsError};
use crate::topology::{NodeId, TopologyError, Tree};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("need at least 3 distinct probe counts with nonzero RMSE")]
    InsufficientPoints,
    #[error("zero RMSE points cannot be fitted on a log scale")]
    ZeroRmse,
}

/// One Monte Carlo comparison run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub topology: Tree,
    /// Strictly increasing probe counts.
    pub probe_counts: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub estimators: Vec<EstimatorId>,
    /// When set, every row carries the mean absolute gap to this
    /// estimator's path estimate on the same dataset.
    pub reference: Option<EstimatorId>,
    pub with_oracle: bool,
    pub oracle_step: f64,
    pub clamp: bool,
}

/// Aggregate accuracy of one estimator at one node and probe count.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub estimator: String,
    pub node: NodeId,
    pub n: usize,
    pub reps_used: usize,
    pub true_a: f64,
    pub mean_est: f64,
    pub bias: f64,
    pub variance: f64,
    pub rmse: f64,
    pub undef_frac: f64,
    pub clamp_frac: f64,
    pub ref_gap: Option<f64>,
    pub oracle_gap: Option<f64>,
}

fn validate(config: &ExperimentConfig) -> Result<(), HarnessError> {
    if config.probe_counts.is_empty() {
        return Err(HarnessError::Config("no probe counts".into()));
    }
    if !config.probe_counts.windows(2).all(|w| w[0] < w[1]) {
        return Err(HarnessError::Config(
            "probe counts must be strictly increasing".into(),
        ));
    }
    if config.replicates == 0 {
        return Err(HarnessError::Config("replicates must be >= 1".into()));
    }
    if config.estimators.is_empty() {
        return Err(HarnessError::Config("no estimators".into()));
    }
    Ok(())
}

// per (estimator, node, n): replicate-level observations
#[derive(Debug, Clone, Default)]
struct Cell {
    estimates: Vec<Option<f64>>,
    clamped: usize,
    ref_gaps: Vec<f64>,
    oracle_gaps: Vec<f64>,
}

/// Run the experiment: every estimator consumes the same dataset per
/// replicate, undefined estimates are counted but excluded from moments.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<SummaryRow>, HarnessError> {
    validate(config)?;
    let tree = &config.topology;
    let m = tree.max_node();
    let n_counts = config.probe_counts.len();
    let n_est = config.estimators.len();

    // cells[est][node-1][n_idx]
    let mut cells: Vec<Vec<Vec<Cell>>> =
        vec![vec![vec![Cell::default(); n_counts]; m]; n_est];

    for (n_idx, &n) in config.probe_counts.iter().enumerate() {
        for rep in 0..config.replicates {
            let seed = derive_seed(config.master_seed, rep as u64);
            let obs = simulate_probes(tree, n, seed)?;
            let ind = project_indicators(tree, &obs)?;

            let sets: Vec<_> = config
                .estimators
                .iter()
                .map(|e| estimate_all_paths(tree, &ind, e, config.clamp))
                .collect();
            let ref_set = config
                .reference
                .as_ref()
                .map(|e| estimate_all_paths(tree, &ind, e, config.clamp));

            // node-local oracle argmax, shared by all estimators
            let mut oracle_stars: Vec<Option<f64>> = vec![None; m + 1];
            if config.with_oracle {
                for (node, star) in oracle_stars.iter_mut().enumerate().skip(1) {
                    let arity = tree.children(node).len();
                    if tree.is_internal(node) && (2..=4).contains(&arity) {
                        let counts = PatternCounts::from_indicators(tree, &ind, node)?;
                        let res = grid_full_likelihood_mle(&counts, config.oracle_step)?;
                        if !res.degenerate {
                            *star = Some(res.a_star);
                        }
                    }
                }
            }

            for (e_idx, set) in sets.iter().enumerate() {
                for node in 1..=m {
                    let p = set.path(node);
                    let cell = &mut cells[e_idx][node - 1][n_idx];
                    cell.estimates.push(p.a_hat);
                    if p.flags.clamped() {
                        cell.clamped += 1;
                    }
                    if let (Some(a), Some(r)) = (
                        p.a_hat,
                        ref_set.as_ref().and_then(|s| s.path(node).a_hat),
                    ) {
                        cell.ref_gaps.push((a - r).abs());
                    }
                    if let (Some(a), Some(star)) = (p.a_hat, oracle_stars[node]) {
                        cell.oracle_gaps.push((a - star).abs());
                    }
                }
            }
        }
    }

    let mut rows = Vec::new();
    for (e_idx, est) in config.estimators.iter().enumerate() {
        let label = est.label();
        for node in 1..=m {
            let true_a = tree.true_path_rate(node)?;
            for (n_idx, &n) in config.probe_counts.iter().enumerate() {
                let cell = &cells[e_idx][node - 1][n_idx];
                rows.push(summarize(cell, &label, node, n, true_a, config));
            }
        }
    }
    Ok(rows)
}

fn summarize(
    cell: &Cell,
    label: &str,
    node: NodeId,
    n: usize,
    true_a: f64,
    config: &ExperimentConfig,
) -> SummaryRow {
    let reps = cell.estimates.len();
    let defined: Vec<f64> = cell.estimates.iter().filter_map(|&a| a).collect();
    let used = defined.len();
    let mean = if used > 0 {
        defined.iter().sum::<f64>() / used as f64
    } else {
        f64::NAN
    };
    let variance = if used > 1 {
        defined.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (used - 1) as f64
    } else {
        0.0
    };
    let rmse = if used > 0 {
        (defined.iter().map(|x| (x - true_a).powi(2)).sum::<f64>() / used as f64).sqrt()
    } else {
        f64::NAN
    };
    let mean_of = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    SummaryRow {
        estimator: label.to_string(),
        node,
        n,
        reps_used: used,
        true_a,
        mean_est: mean,
        bias: mean - true_a,
        variance,
        rmse,
        undef_frac: (reps - used) as f64 / reps as f64,
        clamp_frac: cell.clamped as f64 / reps as f64,
        ref_gap: if config.reference.is_some() && !cell.ref_gaps.is_empty() {
            Some(mean_of(&cell.ref_gaps))
        } else {
            None
        },
        oracle_gap: if config.with_oracle && !cell.oracle_gaps.is_empty() {
            Some(mean_of(&cell.oracle_gaps))
        } else {
            None
        },
    }
}

/// Least-squares slope of `log(RMSE)` against `log(n)`.
pub fn fit_convergence_slope(points: &[(usize, f64)]) -> Result<f64, HarnessError> {
    if points.iter().any(|&(_, rmse)| rmse == 0.0) {
        return Err(HarnessError::ZeroRmse);
    }
    let mut ns: Vec<usize> = points.iter().map(|&(n, _)| n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(HarnessError::InsufficientPoints);
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Fitted log-log slopes per (estimator, node) for rows with at least three
/// probe counts of nonzero RMSE. Skips groups that cannot be fitted.
pub fn convergence_slopes(rows: &[SummaryRow]) -> Vec<(String, NodeId, f64)> {
    let mut keys: Vec<(String, NodeId)> = Vec::new();
    for r in rows {
        let key = (r.estimator.clone(), r.node);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut out = Vec::new();
    for (label, node) in keys {
        let points: Vec<(usize, f64)> = rows
            .iter()
            .filter(|r| r.estimator == label && r.node == node && r.rmse > 0.0)
            .map(|r| (r.n, r.rmse))
            .collect();
        if let Ok(slope) = fit_convergence_slope(&points) {
            out.push((label, node, slope));
        }
    }
    out
}

/// Write the results CSV plus trailing slope comment lines.
pub fn write_results_csv<W: Write>(
    rows: &[SummaryRow],
    slopes: &[(String, NodeId, f64)],
    with_oracle: bool,
    w: &mut W,
) -> io::Result<()> {
    write!(
        w,
        "estimator,node,n,reps_used,true_A,mean_est,bias,variance,rmse,undef_frac,clamp_frac,ref_gap"
    )?;
    if with_oracle {
        write!(w, ",oracle_gap")?;
    }
    writeln!(w)?;
    for r in rows {
        write!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.estimator,
            r.node,
            r.n,
            r.reps_used,
            sig12(r.true_a),
            sig12(r.mean_est),
            sig12(r.bias),
            sig12(r.variance),
            sig12(r.rmse),
            sig12(r.undef_frac),
            sig12(r.clamp_frac),
            r.ref_gap.map(sig12).unwrap_or_default()
        )?;
        if with_oracle {
            write!(w, ",{}", r.oracle_gap.map(sig12).unwrap_or_default())?;
        }
        writeln!(w)?;
    }
    for (label, node, slope) in slopes {
        writeln!(w, "# slope estimator={label} node={node} slope={}", sig12(*slope))?;
    }
    Ok(())
}
