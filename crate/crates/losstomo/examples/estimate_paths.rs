//! Estimate every path and link pass rate from simulated observations
//! with each of the four estimator families.
//!
//! Run with: cargo run --example estimate_paths

use losstomo::estimators::{estimate_all_paths, EstimatorId, SplitPolicy};
use losstomo::simulator::simulate_probes;
use losstomo::stats::project_indicators;
use losstomo::topology::Tree;

fn main() {
    // Two internal branch points so link recovery is non-trivial.
    let tree = Tree::parse(
        "link 1 0 0.95\n\
         link 2 1 0.90\n\
         link 3 1 0.85\n\
         link 4 2 0.90\n\
         link 5 2 0.80\n\
         link 6 3 0.95\n\
         link 7 3 0.75",
    )
    .unwrap();

    let obs = simulate_probes(&tree, 20_000, 7).unwrap();
    let ind = project_indicators(&tree, &obs).unwrap();

    for est in [
        EstimatorId::MincMle,
        EstimatorId::MergedMle(SplitPolicy::FirstHalf),
        EstimatorId::Lln,
        EstimatorId::OrderR(2),
    ] {
        let set = estimate_all_paths(&tree, &ind, &est, false);
        println!("{}:", est.label());
        for (p, l) in set.paths().iter().zip(set.links()) {
            let a_hat = p.a_hat.map_or("-".into(), |v| format!("{v:.4}"));
            let alpha = l.alpha.map_or("-".into(), |v| format!("{v:.4}"));
            println!(
                "  node {}: A_hat={a_hat} (true {:.4})  alpha_hat={alpha} (true {:.4}){}",
                p.node,
                tree.true_path_rate(p.node).unwrap(),
                tree.link_rate(p.node),
                if p.flags.is_empty() {
                    String::new()
                } else {
                    format!("  [{}]", p.flags)
                }
            );
        }
    }
}
