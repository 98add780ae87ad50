//! Rooted multicast tree with per-link true pass rates.
//!
//! Nodes are numbered 0..=m with node 0 the source attachment point. Link
//! `i` connects `parent(i)` to node `i`, so links are named by their child
//! node. The tree is immutable after parsing.

use thiserror::Error;

/// Node index in 0..=m. Node 0 is the root.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid topology: {0}")]
    Invalid(String),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
}

/// Immutable multicast tree `T=(V,E)` with true link pass rates.
#[derive(Debug, Clone)]
pub struct Tree {
    parent: Vec<NodeId>,
    children: Vec<Vec<NodeId>>,
    link_rate: Vec<f64>,
    receivers: Vec<NodeId>,
    receivers_of: Vec<Vec<NodeId>>,
}

impl Tree {
    /// Parse the line-based topology format: `link <child> <parent> <rate>`,
    /// one link per line, child ids ascending from 1, blank lines and `#`
    /// comments ignored.
    pub fn parse(text: &str) -> Result<Tree, TopologyError> {
        let mut parent: Vec<NodeId> = vec![0];
        let mut link_rate: Vec<f64> = vec![1.0];

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "link" {
                return Err(TopologyError::Syntax {
                    line,
                    msg: format!("expected `link <child> <parent> <rate>`, got `{trimmed}`"),
                });
            }
            let child: NodeId = toks[1].parse().map_err(|_| TopologyError::Syntax {
                line,
                msg: format!("bad child id `{}`", toks[1]),
            })?;
            let par: NodeId = toks[2].parse().map_err(|_| TopologyError::Syntax {
                line,
                msg: format!("bad parent id `{}`", toks[2]),
            })?;
            let rate: f64 = toks[3].parse().map_err(|_| TopologyError::Syntax {
                line,
                msg: format!("bad rate `{}`", toks[3]),
            })?;

            let expected = parent.len();
            if child != expected {
                return Err(TopologyError::Syntax {
                    line,
                    msg: format!(
                        "node ids not contiguous from 0: expected child {expected}, got {child}"
                    ),
                });
            }
            if par >= child {
                return Err(TopologyError::Syntax {
                    line,
                    msg: format!("parent {par} must be smaller than child {child}"),
                });
            }
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(TopologyError::Syntax {
                    line,
                    msg: format!("rate {rate} outside (0,1]"),
                });
            }
            parent.push(par);
            link_rate.push(rate);
        }

        let m = parent.len() - 1;
        if m == 0 {
            return Err(TopologyError::Invalid("no links defined".into()));
        }

        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); m + 1];
        for i in 1..=m {
            children[parent[i]].push(i);
        }
        // child ids are inserted in ascending order already

        if children[0].len() != 1 {
            return Err(TopologyError::Invalid(format!(
                "root must have exactly one child, has {}",
                children[0].len()
            )));
        }
        for (i, kids) in children.iter().enumerate().skip(1) {
            if kids.len() == 1 {
                return Err(TopologyError::Invalid(format!(
                    "internal node {i} has a single child; serial links are unidentifiable"
                )));
            }
        }

        // receiver sets bottom-up; f(i) < i makes descending order valid
        let mut receivers_of: Vec<Vec<NodeId>> = vec![Vec::new(); m + 1];
        for i in (0..=m).rev() {
            if children[i].is_empty() {
                receivers_of[i] = vec![i];
            } else {
                let mut r: Vec<NodeId> = children[i]
                    .iter()
                    .flat_map(|&c| receivers_of[c].iter().copied())
                    .collect();
                r.sort_unstable();
                receivers_of[i] = r;
            }
        }
        let receivers = receivers_of[0].clone();

        Ok(Tree {
            parent,
            children,
            link_rate,
            receivers,
            receivers_of,
        })
    }

    /// Number of nodes, m+1.
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Largest node id m.
    pub fn max_node(&self) -> NodeId {
        self.parent.len() - 1
    }

    pub fn parent(&self, i: NodeId) -> NodeId {
        self.parent[i]
    }

    pub fn children(&self, i: NodeId) -> &[NodeId] {
        &self.children[i]
    }

    /// True pass rate of link `i` (the link ending at node `i`).
    pub fn link_rate(&self, i: NodeId) -> f64 {
        self.link_rate[i]
    }

    /// All receivers (leaf nodes), ascending.
    pub fn receivers(&self) -> &[NodeId] {
        &self.receivers
    }

    /// Receivers of the subtree whose root link ends at node `i`, ascending.
    pub fn receivers_of(&self, i: NodeId) -> &[NodeId] {
        &self.receivers_of[i]
    }

    pub fn is_leaf(&self, i: NodeId) -> bool {
        i != 0 && self.children[i].is_empty()
    }

    /// Non-root node with children.
    pub fn is_internal(&self, i: NodeId) -> bool {
        i != 0 && !self.children[i].is_empty()
    }

    /// True path pass rate `A_k`, the product of link rates on the path
    /// 0 -> k. `A_0 = 1` by the empty-product convention.
    pub fn true_path_rate(&self, k: NodeId) -> Result<f64, TopologyError> {
        if k >= self.parent.len() {
            return Err(TopologyError::UnknownNode(k));
        }
        let mut a = 1.0;
        let mut cur = k;
        while cur != 0 {
            a *= self.link_rate[cur];
            cur = self.parent[cur];
        }
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BINARY: &str = "link 1 0 0.95\nlink 2 1 0.9\nlink 3 1 0.9";

    #[test]
    fn parses_smallest_binary_tree() {
        let t = Tree::parse(BINARY).unwrap();
        assert_eq!(t.node_count(), 4);
        assert_eq!(t.receivers(), &[2, 3]);
        assert_eq!(t.children(1), &[2, 3]);
        assert_eq!(t.parent(3), 1);
    }

    #[test]
    fn parses_lossless_tertiary_tree() {
        let t = Tree::parse("link 1 0 1.0\nlink 2 1 1.0\nlink 3 1 1.0\nlink 4 1 1.0").unwrap();
        assert_eq!(t.receivers(), &[2, 3, 4]);
        for k in 1..=4 {
            assert_eq!(t.true_path_rate(k).unwrap(), 1.0);
        }
    }

    #[test]
    fn rejects_non_contiguous_ids() {
        let err = Tree::parse("link 2 1 0.9").unwrap_err();
        assert!(err.to_string().contains("not contiguous"));
    }

    #[test]
    fn rejects_parent_not_smaller() {
        assert!(Tree::parse("link 1 0 0.9\nlink 2 2 0.9").is_err());
    }

    #[test]
    fn rejects_root_with_two_children() {
        assert!(Tree::parse("link 1 0 0.9\nlink 2 0 0.9").is_err());
    }

    #[test]
    fn rejects_single_child_internal_node() {
        let err = Tree::parse("link 1 0 0.9\nlink 2 1 0.8").unwrap_err();
        assert!(err.to_string().contains("single child"));
    }

    #[test]
    fn rejects_rate_out_of_range() {
        assert!(Tree::parse("link 1 0 0.0").is_err());
        assert!(Tree::parse("link 1 0 1.5").is_err());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let t = Tree::parse("# topology\n\nlink 1 0 0.95\nlink 2 1 0.9\nlink 3 1 0.9\n").unwrap();
        assert_eq!(t.node_count(), 4);
    }

    #[test]
    fn true_path_rate_is_link_product() {
        let t = Tree::parse(BINARY).unwrap();
        assert!((t.true_path_rate(2).unwrap() - 0.855).abs() < 1e-15);
        assert_eq!(t.true_path_rate(0).unwrap(), 1.0);
        assert!(matches!(
            t.true_path_rate(9),
            Err(TopologyError::UnknownNode(9))
        ));
    }

    #[test]
    fn receiver_sets_partition_at_internal_nodes() {
        let t = Tree::parse(
            "link 1 0 0.9\nlink 2 1 0.9\nlink 3 1 0.9\nlink 4 2 0.8\nlink 5 2 0.8\nlink 6 3 0.7\nlink 7 3 0.7",
        )
        .unwrap();
        assert_eq!(t.receivers_of(1), &[4, 5, 6, 7]);
        assert_eq!(t.receivers_of(2), &[4, 5]);
        assert_eq!(t.receivers_of(3), &[6, 7]);
        assert_eq!(t.receivers(), t.receivers_of(1));
        // path rates non-increasing toward the leaves
        for k in 1..=t.max_node() {
            let a_k = t.true_path_rate(k).unwrap();
            let a_p = t.true_path_rate(t.parent(k)).unwrap();
            assert!(a_k <= a_p);
        }
    }
}
