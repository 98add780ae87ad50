//! Simulate probe outcomes over a small tree and print the observation
//! CSV plus the empirical receiver rates against their true path rates.
//!
//! Run with: cargo run --example simulate

use losstomo::simulator::simulate_probes;
use losstomo::stats::project_indicators;
use losstomo::topology::Tree;

fn main() {
    let tree = Tree::parse(
        "link 1 0 0.95\n\
         link 2 1 0.90\n\
         link 3 1 0.85\n\
         link 4 1 0.80",
    )
    .unwrap();

    let n = 20;
    let obs = simulate_probes(&tree, n, 42).unwrap();
    let mut csv = Vec::new();
    obs.write_csv(&mut csv, 42, "example").unwrap();
    print!("{}", String::from_utf8(csv).unwrap());

    // With a larger sample the empirical rates settle near the true path
    // rates A_k = product of link rates from the root.
    let big = simulate_probes(&tree, 100_000, 42).unwrap();
    let ind = project_indicators(&tree, &big).unwrap();
    println!("\nreceiver rates over 100000 probes:");
    for &k in obs.receiver_ids() {
        println!(
            "  node {k}: empirical {:.4}, true A_{k} = {:.4}",
            ind.gamma_hat(k),
            tree.true_path_rate(k).unwrap()
        );
    }
}
