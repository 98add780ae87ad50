//! Per-node indicator sequences and the sufficient statistics derived
//! from them: direct counts `n_i(1)`, sibling subset intersection counts
//! `n_S(1)`, group union counts, and empirical pass rates.

use thiserror::Error;

use crate::bits::{self, BitSeq};
use crate::simulator::ObservationMatrix;
use crate::topology::{NodeId, Tree};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("observation receivers do not match topology receivers")]
    ReceiverMismatch,
    #[error("node {0} is not an internal node")]
    NotInternal(NodeId),
    #[error("subset order {order} out of range [2, {max}]")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("group is empty")]
    EmptyGroup,
    #[error("group members do not share a parent")]
    MixedParents,
}

/// Indicator sequences `Y_i` for every node `i` in 1..=m: `Y_i^j = 1` iff
/// probe `j` was seen by some receiver of the subtree at node `i`.
#[derive(Debug, Clone)]
pub struct NodeIndicators {
    n: usize,
    y: Vec<BitSeq>, // index by node id; slot 0 is an unused placeholder
}

impl NodeIndicators {
    pub fn probe_count(&self) -> usize {
        self.n
    }

    pub fn indicator(&self, node: NodeId) -> &BitSeq {
        assert!(node >= 1 && node < self.y.len(), "node {node} out of range");
        &self.y[node]
    }

    /// Direct count `n_i(1)`.
    pub fn count(&self, node: NodeId) -> usize {
        self.indicator(node).count_ones()
    }

    /// Empirical pass rate of the subtree at `node`.
    pub fn gamma_hat(&self, node: NodeId) -> f64 {
        self.count(node) as f64 / self.n as f64
    }
}

/// Project receiver observations onto every node: `Y_k = X_k` at the
/// receivers, element-wise OR of the children above them.
pub fn project_indicators(
    tree: &Tree,
    obs: &ObservationMatrix,
) -> Result<NodeIndicators, StatsError> {
    if obs.receiver_ids() != tree.receivers() {
        return Err(StatsError::ReceiverMismatch);
    }
    let n = obs.probe_count();
    let m = tree.max_node();
    let mut y = vec![BitSeq::zeros(n); m + 1];
    // children carry larger ids than their parent, so descending order is
    // bottom-up
    for i in (1..=m).rev() {
        if tree.is_leaf(i) {
            y[i] = obs.outcomes_for(i).ok_or(StatsError::ReceiverMismatch)?.clone();
        } else {
            let mut acc = BitSeq::zeros(n);
            for &c in tree.children(i) {
                acc.or_assign(&y[c]);
            }
            y[i] = acc;
        }
    }
    Ok(NodeIndicators { n, y })
}

/// One sibling-subset statistic: the members (ascending child ids) and the
/// count of probes seen in every member's subtree simultaneously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCount {
    pub members: Vec<NodeId>,
    pub count: usize,
}

/// All `n_S(1)` for subsets `S` of `node`'s children with
/// `2 <= |S| <= max_order`, in ascending bitmask order over the ascending
/// child list.
pub fn subset_counts(
    tree: &Tree,
    ind: &NodeIndicators,
    node: NodeId,
    max_order: usize,
) -> Result<Vec<SubsetCount>, StatsError> {
    if !tree.is_internal(node) {
        return Err(StatsError::NotInternal(node));
    }
    let d = tree.children(node);
    if max_order < 2 || max_order > d.len() {
        return Err(StatsError::OrderOutOfRange {
            order: max_order,
            max: d.len(),
        });
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << d.len()) {
        let size = mask.count_ones() as usize;
        if size < 2 || size > max_order {
            continue;
        }
        let members: Vec<NodeId> = (0..d.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| d[b])
            .collect();
        let seqs: Vec<&BitSeq> = members.iter().map(|&c| ind.indicator(c)).collect();
        out.push(SubsetCount {
            members,
            count: bits::intersection_count(&seqs),
        });
    }
    Ok(out)
}

/// Count of probes reaching at least one receiver of the merged subtree
/// formed by `group` (siblings under one parent).
pub fn group_union_count(
    tree: &Tree,
    ind: &NodeIndicators,
    group: &[NodeId],
) -> Result<usize, StatsError> {
    if group.is_empty() {
        return Err(StatsError::EmptyGroup);
    }
    let parent = tree.parent(group[0]);
    if group.iter().any(|&c| tree.parent(c) != parent) {
        return Err(StatsError::MixedParents);
    }
    let seqs: Vec<&BitSeq> = group.iter().map(|&c| ind.indicator(c)).collect();
    Ok(bits::union_count(&seqs))
}

/// Reconstruct `n_node(1)` from the children's subset statistics by the
/// alternating inclusion-exclusion sum. Must equal the direct count for any
/// 0/1 matrix; `check-stats` verifies exactly that.
pub fn inclusion_exclusion_reconstruct(
    tree: &Tree,
    ind: &NodeIndicators,
    node: NodeId,
) -> Result<i64, StatsError> {
    if !tree.is_internal(node) {
        return Err(StatsError::NotInternal(node));
    }
    let d = tree.children(node);
    let mut total: i64 = 0;
    for mask in 1u64..(1u64 << d.len()) {
        let members: Vec<&BitSeq> = (0..d.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| ind.indicator(d[b]))
            .collect();
        let count = bits::intersection_count(&members) as i64;
        if mask.count_ones() % 2 == 1 {
            total += count;
        } else {
            total -= count;
        }
    }
    Ok(total)
}
