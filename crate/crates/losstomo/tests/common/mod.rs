//! Shared fixtures for integration tests.
#![allow(dead_code)]

use losstomo::simulator::SplitMix64;

pub const BINARY_TOPOLOGY: &str = "link 1 0 0.9\nlink 2 1 0.8\nlink 3 1 0.8";
pub const TERTIARY_TOPOLOGY: &str = "link 1 0 0.9\nlink 2 1 0.8\nlink 3 1 0.8\nlink 4 1 0.8";

/// Worked tertiary dataset D1 (n=8): n2=6, n3=4, n4=4, n23=3, n24=3,
/// n34=2, n234=1, hence n1=7.
pub const D1_OBS: &str = "\
probe,2,3,4
1,1,1,1
2,1,1,0
3,1,1,0
4,1,0,1
5,1,0,1
6,0,1,1
7,1,0,0
8,0,0,0
";

/// Worked binary dataset D2 (n=8): n2=4, n3=4, n23=3, hence n1=5.
pub const D2_OBS: &str = "\
probe,2,3
1,1,1
2,1,1
3,1,1
4,1,0
5,0,1
6,0,0
7,0,0
8,0,0
";

/// Root of the D1 likelihood quadratic 0.875 a^2 - a + 0.1875 = 0
/// inside (0.875, 1), by the quadratic formula.
pub fn d1_quadratic_root() -> f64 {
    (1.0 + 0.34375f64.sqrt()) / 1.75
}

/// Random tree text with at most `max_depth` levels below the root child
/// and 2..=6 children per internal node, BFS-numbered so parents precede
/// children. Link rates fall in (0.5, 1.0].
pub fn random_tree_text(rng: &mut SplitMix64, max_depth: usize) -> String {
    let mut lines = vec![format!("link 1 0 {:.6}", 0.5 + 0.5 * rng.next_f64())];
    let mut next_id = 2usize;
    let mut queue = vec![(1usize, 1usize)]; // (node, depth)
    let mut qi = 0;
    while qi < queue.len() {
        let (node, depth) = queue[qi];
        qi += 1;
        let expand = depth < max_depth && (node == 1 || rng.next_f64() < 0.6);
        if !expand {
            continue;
        }
        let n_children = 2 + (rng.next_u64() % 5) as usize; // 2..=6
        for _ in 0..n_children {
            lines.push(format!(
                "link {next_id} {node} {:.6}",
                0.5 + 0.5 * rng.next_f64()
            ));
            queue.push((next_id, depth + 1));
            next_id += 1;
        }
    }
    lines.join("\n")
}
