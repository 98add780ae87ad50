//! Monte Carlo comparison of the estimator families on a tertiary tree:
//! bias, RMSE, and the fitted log-log convergence slope per estimator.
//! The slope should sit near -1/2, the parametric rate.
//!
//! Run with: cargo run --release --example estimator_comparison

use losstomo::estimators::{EstimatorId, SplitPolicy};
use losstomo::harness::{convergence_slopes, run_experiment, ExperimentConfig};
use losstomo::topology::Tree;

fn main() {
    let config = ExperimentConfig {
        topology: Tree::parse(
            "link 1 0 0.9\n\
             link 2 1 0.8\n\
             link 3 1 0.8\n\
             link 4 1 0.8",
        )
        .unwrap(),
        probe_counts: vec![1000, 4000, 16000, 64000],
        replicates: 100,
        master_seed: 7,
        estimators: vec![
            EstimatorId::MincMle,
            EstimatorId::MergedMle(SplitPolicy::FirstHalf),
            EstimatorId::Lln,
            EstimatorId::OrderR(2),
        ],
        reference: Some(EstimatorId::MincMle),
        with_oracle: false,
        oracle_step: 0.002,
        clamp: false,
    };

    let rows = run_experiment(&config).unwrap();

    println!("path node 1 (true A = 0.9):");
    println!("{:<12} {:>7} {:>10} {:>10} {:>10}", "estimator", "n", "bias", "rmse", "ref_gap");
    for r in rows.iter().filter(|r| r.node == 1) {
        println!(
            "{:<12} {:>7} {:>10.6} {:>10.6} {:>10.6}",
            r.estimator,
            r.n,
            r.bias,
            r.rmse,
            r.ref_gap.unwrap_or(f64::NAN)
        );
    }

    println!("\nfitted log-log RMSE slopes (node 1):");
    for (label, node, slope) in convergence_slopes(&rows) {
        if node == 1 {
            println!("  {label:<12} {slope:+.4}");
        }
    }
}
