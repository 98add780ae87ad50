//! Path pass-rate estimators: the numerical MINC MLE, the merged-subtree
//! explicit MLE, the law-of-large-numbers explicit estimator, and the
//! order-r explicit family. Degenerate data never aborts; it is reported
//! through flags so Monte Carlo runs can count it.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::bits::{self, BitSeq};
use crate::fmtnum::sig12;
use crate::stats::NodeIndicators;
use crate::topology::{NodeId, Tree};

/// Bisection stopping width for the MINC likelihood root.
pub const BISECT_TOL: f64 = 1e-12;
/// Bisection iteration cap.
pub const BISECT_MAX_ITER: usize = 200;

/// Estimate quality flags, `|`-joined in CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags(u8);

impl Flags {
    pub const CLAMPED_HIGH: Flags = Flags(1);
    pub const CLAMPED_LOW: Flags = Flags(1 << 1);
    pub const INCONSISTENT_DATA: Flags = Flags(1 << 2);
    pub const NO_DATA: Flags = Flags(1 << 3);
    pub const DROPPED_ZERO_CHILDREN: Flags = Flags(1 << 4);
    pub const UNDEFINED: Flags = Flags(1 << 5);

    pub fn empty() -> Flags {
        Flags(0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, other: Flags) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn insert(&mut self, other: Flags) {
        self.0 |= other.0;
    }

    pub fn union(self, other: Flags) -> Flags {
        Flags(self.0 | other.0)
    }

    /// Raw bit pattern, for exact comparisons.
    pub fn bits(self) -> u8 {
        self.0
    }

    /// True when the estimate was clamped either way.
    pub fn clamped(self) -> bool {
        self.contains(Flags::CLAMPED_HIGH) || self.contains(Flags::CLAMPED_LOW)
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [(Flags, &str); 6] = [
            (Flags::CLAMPED_HIGH, "CLAMPED_HIGH"),
            (Flags::CLAMPED_LOW, "CLAMPED_LOW"),
            (Flags::INCONSISTENT_DATA, "INCONSISTENT_DATA"),
            (Flags::NO_DATA, "NO_DATA"),
            (Flags::DROPPED_ZERO_CHILDREN, "DROPPED_ZERO_CHILDREN"),
            (Flags::UNDEFINED, "UNDEFINED"),
        ];
        let mut first = true;
        for (flag, name) in NAMES {
            if self.contains(flag) {
                if !first {
                    write!(f, "|")?;
                }
                write!(f, "{name}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Estimated path pass rate for one node.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEstimate {
    pub node: NodeId,
    pub gamma_hat: f64,
    /// `None` exactly when UNDEFINED is flagged.
    pub a_hat: Option<f64>,
    pub flags: Flags,
}

impl PathEstimate {
    fn undefined(node: NodeId, gamma_hat: f64, extra: Flags) -> Self {
        PathEstimate {
            node,
            gamma_hat,
            a_hat: None,
            flags: extra.union(Flags::UNDEFINED),
        }
    }
}

/// Derived per-link rate `alpha_i = A_i / A_f(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkEstimate {
    pub node: NodeId,
    pub alpha: Option<f64>,
    pub loss: Option<f64>,
    pub flags: Flags,
}

/// How merged-mle partitions a node's children into two groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitPolicy {
    /// Ascending child ids, first ceil(|d|/2) against the rest.
    FirstHalf,
    /// Explicit partition; applied at the node whose child set matches,
    /// other nodes fall back to `FirstHalf`.
    Explicit {
        left: Vec<NodeId>,
        right: Vec<NodeId>,
    },
}

/// Estimator identity with parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorId {
    MincMle,
    MergedMle(SplitPolicy),
    Lln,
    OrderR(usize),
}

#[derive(Debug, Error)]
pub enum EstimatorParseError {
    #[error("unknown estimator `{0}`")]
    Unknown(String),
    #[error("order-r requires an integer order >= 2, got `{0}`")]
    BadOrder(String),
}

impl EstimatorId {
    /// Parse `minc-mle`, `merged-mle`, `lln`, or `order-r:<r>`.
    pub fn parse(s: &str) -> Result<EstimatorId, EstimatorParseError> {
        match s {
            "minc-mle" => Ok(EstimatorId::MincMle),
            "merged-mle" => Ok(EstimatorId::MergedMle(SplitPolicy::FirstHalf)),
            "lln" => Ok(EstimatorId::Lln),
            _ => {
                if let Some(rest) = s.strip_prefix("order-r:") {
                    let r: usize = rest
                        .parse()
                        .map_err(|_| EstimatorParseError::BadOrder(rest.into()))?;
                    if r < 2 {
                        return Err(EstimatorParseError::BadOrder(rest.into()));
                    }
                    Ok(EstimatorId::OrderR(r))
                } else {
                    Err(EstimatorParseError::Unknown(s.into()))
                }
            }
        }
    }

    /// Stable label used in CSV output.
    pub fn label(&self) -> String {
        match self {
            EstimatorId::MincMle => "minc-mle".into(),
            EstimatorId::MergedMle(SplitPolicy::FirstHalf) => "merged-mle".into(),
            EstimatorId::MergedMle(SplitPolicy::Explicit { left, right }) => {
                format!("merged-mle:{}|{}", join_ids(left), join_ids(right))
            }
            EstimatorId::Lln => "lln".into(),
            EstimatorId::OrderR(r) => format!("order-r:{r}"),
        }
    }
}

// `+` rather than `,` so the label stays a single CSV field.
fn join_ids(ids: &[NodeId]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

/// Value of the MINC likelihood polynomial
/// `H(a,k) = 1 - gamma_k/a - prod_j (1 - gamma_j/a)`.
pub fn minc_poly_value(a: f64, gamma_k: f64, child_gammas: &[f64]) -> f64 {
    assert!(a > 0.0, "H is undefined at a = 0");
    let mut prod = 1.0;
    for g in child_gammas {
        prod *= 1.0 - g / a;
    }
    1.0 - gamma_k / a - prod
}

fn clamp_into(node: NodeId, gamma_k: f64, v: f64, mut flags: Flags) -> PathEstimate {
    let a = if v > 1.0 {
        flags.insert(Flags::CLAMPED_HIGH);
        1.0
    } else if v < gamma_k {
        flags.insert(Flags::CLAMPED_LOW);
        gamma_k
    } else {
        v
    };
    PathEstimate {
        node,
        gamma_hat: gamma_k,
        a_hat: Some(a),
        flags,
    }
}

/// Root of `H` on `[gamma_k, 1]` by bisection. Children with zero empirical
/// rate are dropped from the product; data with no sign change on the
/// bracket is clamped high and flagged.
pub fn solve_minc_mle(node: NodeId, gamma_k: f64, child_gammas: &[f64]) -> PathEstimate {
    if gamma_k == 0.0 {
        return PathEstimate::undefined(node, gamma_k, Flags::NO_DATA);
    }
    let mut flags = Flags::empty();
    let kept: Vec<f64> = child_gammas.iter().copied().filter(|&g| g > 0.0).collect();
    if kept.len() < child_gammas.len() {
        flags.insert(Flags::DROPPED_ZERO_CHILDREN);
    }
    if kept.len() < 2 {
        flags.insert(Flags::INCONSISTENT_DATA);
        return PathEstimate {
            node,
            gamma_hat: gamma_k,
            a_hat: Some(gamma_k),
            flags,
        };
    }

    let mut lo = gamma_k;
    let mut hi = 1.0;
    let f_lo = minc_poly_value(lo, gamma_k, &kept);
    let f_hi = minc_poly_value(hi, gamma_k, &kept);
    let root = if f_lo == 0.0 {
        lo
    } else if f_hi == 0.0 {
        hi
    } else if f_lo.signum() == f_hi.signum() {
        flags.insert(Flags::CLAMPED_HIGH);
        flags.insert(Flags::INCONSISTENT_DATA);
        return PathEstimate {
            node,
            gamma_hat: gamma_k,
            a_hat: Some(1.0),
            flags,
        };
    } else {
        let neg_at_lo = f_lo < 0.0;
        let mut iter = 0;
        while hi - lo > BISECT_TOL && iter < BISECT_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            let f_mid = minc_poly_value(mid, gamma_k, &kept);
            if f_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (f_mid < 0.0) == neg_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
            iter += 1;
        }
        0.5 * (lo + hi)
    };
    PathEstimate {
        node,
        gamma_hat: gamma_k,
        a_hat: Some(root),
        flags,
    }
}

/// Merged-subtree explicit MLE:
/// `A_k = g1*g2 / (g1 + g2 - gamma_k)` for a two-group partition of the
/// children, with `g1`, `g2` the group union rates.
pub fn merged_mle(node: NodeId, gamma_k: f64, group1_gamma: f64, group2_gamma: f64) -> PathEstimate {
    if gamma_k == 0.0 {
        return PathEstimate::undefined(node, gamma_k, Flags::NO_DATA);
    }
    let denom = group1_gamma + group2_gamma - gamma_k;
    if denom <= 0.0 {
        return PathEstimate {
            node,
            gamma_hat: gamma_k,
            a_hat: Some(1.0),
            flags: Flags::CLAMPED_HIGH.union(Flags::INCONSISTENT_DATA),
        };
    }
    clamp_into(node, gamma_k, group1_gamma * group2_gamma / denom, Flags::empty())
}

/// Law-of-large-numbers explicit estimator:
/// `A_k = (prod_j gamma_j / B_k)^(1/(|d_k|-1))` with `B_k` the all-children
/// intersection rate.
pub fn lln_explicit(node: NodeId, gamma_k: f64, child_gammas: &[f64], b_hat: f64) -> PathEstimate {
    assert!(child_gammas.len() >= 2, "lln needs at least two children");
    if b_hat == 0.0 {
        return PathEstimate::undefined(node, gamma_k, Flags::NO_DATA);
    }
    let v = subset_term(child_gammas, b_hat, child_gammas.len());
    clamp_into(node, gamma_k, v, Flags::empty())
}

// One order-r term: (prod gammas / b)^(1/(r-1)). Shared between lln and
// order_r so that r = |d_k| reproduces lln bit-for-bit.
fn subset_term(gammas: &[f64], b_hat: f64, r: usize) -> f64 {
    let mut prod = 1.0;
    for g in gammas {
        prod *= g;
    }
    (prod / b_hat).powf(1.0 / (r - 1) as f64)
}

/// One subset statistic feeding the order-r family: the member gammas in
/// ascending child order plus the subset intersection rate.
#[derive(Debug, Clone)]
pub struct SubsetTerm {
    pub member_gammas: Vec<f64>,
    pub b_hat: f64,
}

/// Order-r explicit family: average of the subset-wise closed form over all
/// r-subsets of the children. Subsets with zero intersection count are
/// excluded from the average.
pub fn order_r_explicit(
    node: NodeId,
    gamma_k: f64,
    terms: &[SubsetTerm],
    r: usize,
) -> PathEstimate {
    assert!(r >= 2, "order must be >= 2");
    let mut flags = Flags::empty();
    let mut sum = 0.0;
    let mut used = 0usize;
    for t in terms {
        debug_assert_eq!(t.member_gammas.len(), r);
        if t.b_hat == 0.0 {
            flags.insert(Flags::DROPPED_ZERO_CHILDREN);
            continue;
        }
        sum += subset_term(&t.member_gammas, t.b_hat, r);
        used += 1;
    }
    if used == 0 {
        return PathEstimate::undefined(node, gamma_k, flags);
    }
    clamp_into(node, gamma_k, sum / used as f64, flags)
}

/// Full estimate set for one estimator: per-node path estimates plus the
/// per-link rates derived from them.
#[derive(Debug, Clone)]
pub struct EstimateSet {
    pub label: String,
    path: Vec<PathEstimate>,
    links: Vec<LinkEstimate>,
}

impl EstimateSet {
    pub fn path(&self, node: NodeId) -> &PathEstimate {
        &self.path[node - 1]
    }

    pub fn link(&self, node: NodeId) -> &LinkEstimate {
        &self.links[node - 1]
    }

    pub fn paths(&self) -> &[PathEstimate] {
        &self.path
    }

    pub fn links(&self) -> &[LinkEstimate] {
        &self.links
    }
}

/// All unordered two-part partitions of `children`, the first child pinned
/// to the left group so each partition appears once. Deterministic order.
pub fn enumerate_splits(children: &[NodeId]) -> Vec<(Vec<NodeId>, Vec<NodeId>)> {
    let d = children.len();
    assert!(d >= 2);
    let mut out = Vec::new();
    let full = (1u64 << (d - 1)) - 1;
    for mask in 0..full {
        let mut left = vec![children[0]];
        let mut right = Vec::new();
        for (b, &c) in children[1..].iter().enumerate() {
            if mask >> b & 1 == 1 {
                left.push(c);
            } else {
                right.push(c);
            }
        }
        out.push((left, right));
    }
    out
}

fn default_split(children: &[NodeId]) -> (Vec<NodeId>, Vec<NodeId>) {
    let cut = children.len().div_ceil(2);
    (children[..cut].to_vec(), children[cut..].to_vec())
}

fn resolve_split(policy: &SplitPolicy, children: &[NodeId]) -> (Vec<NodeId>, Vec<NodeId>) {
    if let SplitPolicy::Explicit { left, right } = policy {
        let mut union: Vec<NodeId> = left.iter().chain(right).copied().collect();
        union.sort_unstable();
        if union == children {
            return (left.clone(), right.clone());
        }
    }
    default_split(children)
}

/// Apply `estimator` at one internal node given the indicator sequences.
pub fn estimate_node(
    tree: &Tree,
    ind: &NodeIndicators,
    node: NodeId,
    estimator: &EstimatorId,
) -> PathEstimate {
    debug_assert!(tree.is_internal(node));
    let n = ind.probe_count() as f64;
    let children = tree.children(node);
    let gamma_k = ind.gamma_hat(node);
    let child_gammas: Vec<f64> = children.iter().map(|&c| ind.gamma_hat(c)).collect();

    match estimator {
        EstimatorId::MincMle => solve_minc_mle(node, gamma_k, &child_gammas),
        EstimatorId::MergedMle(policy) => {
            let (left, right) = resolve_split(policy, children);
            let g1 = union_rate(ind, &left, n);
            let g2 = union_rate(ind, &right, n);
            merged_mle(node, gamma_k, g1, g2)
        }
        EstimatorId::Lln => {
            let seqs: Vec<&BitSeq> = children.iter().map(|&c| ind.indicator(c)).collect();
            let b_hat = bits::intersection_count(&seqs) as f64 / n;
            lln_explicit(node, gamma_k, &child_gammas, b_hat)
        }
        EstimatorId::OrderR(r) => {
            let r = *r;
            if r < 2 || r > children.len() {
                return PathEstimate::undefined(node, gamma_k, Flags::INCONSISTENT_DATA);
            }
            let terms = order_r_terms(ind, children, &child_gammas, r, n);
            order_r_explicit(node, gamma_k, &terms, r)
        }
    }
}

fn union_rate(ind: &NodeIndicators, group: &[NodeId], n: f64) -> f64 {
    let seqs: Vec<&BitSeq> = group.iter().map(|&c| ind.indicator(c)).collect();
    bits::union_count(&seqs) as f64 / n
}

fn order_r_terms(
    ind: &NodeIndicators,
    children: &[NodeId],
    child_gammas: &[f64],
    r: usize,
    n: f64,
) -> Vec<SubsetTerm> {
    let d = children.len();
    let mut terms = Vec::new();
    for mask in 1u64..(1u64 << d) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let idxs: Vec<usize> = (0..d).filter(|&b| mask >> b & 1 == 1).collect();
        let seqs: Vec<&BitSeq> = idxs.iter().map(|&b| ind.indicator(children[b])).collect();
        terms.push(SubsetTerm {
            member_gammas: idxs.iter().map(|&b| child_gammas[b]).collect(),
            b_hat: bits::intersection_count(&seqs) as f64 / n,
        });
    }
    terms
}

/// Apply `estimator` at every node: internal nodes get the estimator,
/// receivers get the directly observed `gamma_hat` as their path estimate.
/// Link rates `alpha_i = A_i / A_f(i)` complete the set; `alpha > 1` is
/// flagged and clamped only when `clamp_links` is set.
pub fn estimate_all_paths(
    tree: &Tree,
    ind: &NodeIndicators,
    estimator: &EstimatorId,
    clamp_links: bool,
) -> EstimateSet {
    let m = tree.max_node();
    let mut path = Vec::with_capacity(m);
    for node in 1..=m {
        if tree.is_leaf(node) {
            let g = ind.gamma_hat(node);
            path.push(PathEstimate {
                node,
                gamma_hat: g,
                a_hat: Some(g),
                flags: Flags::empty(),
            });
        } else {
            path.push(estimate_node(tree, ind, node, estimator));
        }
    }

    let mut links = Vec::with_capacity(m);
    for node in 1..=m {
        let a_node = path[node - 1].a_hat;
        let parent = tree.parent(node);
        let a_parent = if parent == 0 {
            Some(1.0)
        } else {
            path[parent - 1].a_hat
        };
        let mut flags = Flags::empty();
        let (alpha, loss) = match (a_node, a_parent) {
            (Some(an), Some(ap)) if ap > 0.0 => {
                let mut alpha = an / ap;
                if alpha > 1.0 {
                    flags.insert(Flags::CLAMPED_HIGH);
                    if clamp_links {
                        alpha = 1.0;
                    }
                }
                (Some(alpha), Some(1.0 - alpha))
            }
            (Some(_), Some(_)) => {
                flags.insert(Flags::UNDEFINED);
                flags.insert(Flags::NO_DATA);
                (None, None)
            }
            _ => {
                flags.insert(Flags::UNDEFINED);
                (None, None)
            }
        };
        links.push(LinkEstimate {
            node,
            alpha,
            loss,
            flags,
        });
    }

    EstimateSet {
        label: estimator.label(),
        path,
        links,
    }
}

/// Write the estimates CSV:
/// `estimator,node,gamma_hat,a_hat,alpha_hat,loss_hat,flags`.
pub fn write_estimates_csv<W: Write>(sets: &[EstimateSet], w: &mut W) -> io::Result<()> {
    writeln!(w, "estimator,node,gamma_hat,a_hat,alpha_hat,loss_hat,flags")?;
    for set in sets {
        for p in &set.path {
            let link = &set.links[p.node - 1];
            let flags = p.flags.union(link.flags);
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                set.label,
                p.node,
                sig12(p.gamma_hat),
                p.a_hat.map(sig12).unwrap_or_default(),
                link.alpha.map(sig12).unwrap_or_default(),
                link.loss.map(sig12).unwrap_or_default(),
                flags
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::fixtures::{d1, d2};

    // root of 0.875 a^2 - a + 0.1875 = 0 in (0.875, 1), by the quadratic formula
    fn d1_root() -> f64 {
        (1.0 + 0.34375f64.sqrt()) / 1.75
    }

    #[test]
    fn poly_value_identity_root_at_lossless() {
        assert_eq!(minc_poly_value(1.0, 1.0, &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn poly_value_d1_root_and_sign() {
        let g = [0.75, 0.5, 0.5];
        assert!(minc_poly_value(0.906458, 0.875, &g).abs() < 1e-5);
        // at a = gamma_k the value is -prod(1 - gamma_j/gamma_k) < 0
        assert!(minc_poly_value(0.875, 0.875, &g) < 0.0);
    }

    #[test]
    fn solve_minc_binary_closed_form() {
        let est = solve_minc_mle(1, 0.625, &[0.5, 0.5]);
        assert!(est.flags.is_empty());
        assert!((est.a_hat.unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_minc_d1_quadratic_root() {
        let est = solve_minc_mle(1, 0.875, &[0.75, 0.5, 0.5]);
        assert!(est.flags.is_empty());
        let a = est.a_hat.unwrap();
        assert!((a - d1_root()).abs() < 1e-9);
        assert!(minc_poly_value(a, 0.875, &[0.75, 0.5, 0.5]).abs() < 1e-9);
        assert!((0.875..=1.0).contains(&a));
    }

    #[test]
    fn solve_minc_lossless() {
        let est = solve_minc_mle(1, 1.0, &[1.0, 1.0]);
        assert_eq!(est.a_hat, Some(1.0));
        assert!(est.flags.is_empty());
    }

    #[test]
    fn solve_minc_degenerate_paths() {
        let est = solve_minc_mle(1, 0.0, &[0.0, 0.0]);
        assert!(est.a_hat.is_none());
        assert!(est.flags.contains(Flags::UNDEFINED) && est.flags.contains(Flags::NO_DATA));

        let est = solve_minc_mle(1, 0.5, &[0.5, 0.0]);
        assert_eq!(est.a_hat, Some(0.5));
        assert!(est.flags.contains(Flags::DROPPED_ZERO_CHILDREN));
        assert!(est.flags.contains(Flags::INCONSISTENT_DATA));
    }

    #[test]
    fn merged_mle_d1_both_splits() {
        // split {2,3}|{4}
        let est = merged_mle(1, 0.875, 0.875, 0.5);
        assert_eq!(est.a_hat, Some(0.875));
        assert!(est.flags.is_empty());
        // split {3,4}|{2}
        let est = merged_mle(1, 0.875, 0.75, 0.75);
        assert_eq!(est.a_hat, Some(0.9));
        assert!(est.flags.is_empty());
    }

    #[test]
    fn merged_mle_symmetry_and_degenerate_denominator() {
        let a = merged_mle(1, 0.7, 0.6, 0.5);
        let b = merged_mle(1, 0.7, 0.5, 0.6);
        assert_eq!(a.a_hat, b.a_hat);
        let est = merged_mle(1, 0.9, 0.4, 0.4);
        assert_eq!(est.a_hat, Some(1.0));
        assert!(est.flags.contains(Flags::CLAMPED_HIGH));
        assert!(est.flags.contains(Flags::INCONSISTENT_DATA));
    }

    #[test]
    fn lln_binary_matches_mle() {
        let est = lln_explicit(1, 0.625, &[0.5, 0.5], 3.0 / 8.0);
        assert!((est.a_hat.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(est.flags.is_empty());
    }

    #[test]
    fn lln_d1_clamped_high() {
        // (0.1875 / 0.125)^(1/2) = sqrt(1.5) ~ 1.224745
        let est = lln_explicit(1, 0.875, &[0.75, 0.5, 0.5], 0.125);
        assert_eq!(est.a_hat, Some(1.0));
        assert!(est.flags.contains(Flags::CLAMPED_HIGH));
    }

    #[test]
    fn lln_no_data() {
        let est = lln_explicit(1, 0.5, &[0.3, 0.3], 0.0);
        assert!(est.a_hat.is_none());
        assert!(est.flags.contains(Flags::UNDEFINED) && est.flags.contains(Flags::NO_DATA));
    }

    #[test]
    fn order_two_on_d1_is_one() {
        let (tree, ind) = d1();
        let est = estimate_node(&tree, &ind, 1, &EstimatorId::OrderR(2));
        assert_eq!(est.a_hat, Some(1.0));
        assert!(!est.flags.clamped());
    }

    #[test]
    fn order_full_equals_lln_bitwise() {
        let (tree, ind) = d1();
        let lln = estimate_node(&tree, &ind, 1, &EstimatorId::Lln);
        let ord = estimate_node(&tree, &ind, 1, &EstimatorId::OrderR(3));
        assert_eq!(lln.a_hat, ord.a_hat);
        assert_eq!(lln.flags, ord.flags);
    }

    #[test]
    fn order_out_of_range_flagged_not_aborted() {
        let (tree, ind) = d2();
        let est = estimate_node(&tree, &ind, 1, &EstimatorId::OrderR(3));
        assert!(est.a_hat.is_none());
        assert!(est.flags.contains(Flags::UNDEFINED));
        assert!(est.flags.contains(Flags::INCONSISTENT_DATA));
    }

    #[test]
    fn binary_node_all_estimators_agree() {
        let (tree, ind) = d2();
        let minc = estimate_node(&tree, &ind, 1, &EstimatorId::MincMle);
        let merged = estimate_node(&tree, &ind, 1, &EstimatorId::MergedMle(SplitPolicy::FirstHalf));
        let lln = estimate_node(&tree, &ind, 1, &EstimatorId::Lln);
        let a = minc.a_hat.unwrap();
        assert!((a - 2.0 / 3.0).abs() < 1e-12);
        assert!((a - merged.a_hat.unwrap()).abs() < 1e-12);
        assert!((a - lln.a_hat.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn estimate_all_paths_d2() {
        let (tree, ind) = d2();
        let set = estimate_all_paths(&tree, &ind, &EstimatorId::MincMle, false);
        let a1 = set.path(1).a_hat.unwrap();
        assert!((a1 - 2.0 / 3.0).abs() < 1e-12);
        // leaf 2: alpha = gamma_2 / A_1 = 0.5 / (2/3) = 0.75, loss 0.25
        let l2 = set.link(2);
        assert!((l2.alpha.unwrap() - 0.75).abs() < 1e-9);
        assert!((l2.loss.unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn minc_vs_merged_discrepancy_on_d1() {
        let (tree, ind) = d1();
        let minc = estimate_node(&tree, &ind, 1, &EstimatorId::MincMle);
        let merged = estimate_node(
            &tree,
            &ind,
            1,
            &EstimatorId::MergedMle(SplitPolicy::Explicit {
                left: vec![2, 3],
                right: vec![4],
            }),
        );
        assert!((minc.a_hat.unwrap() - d1_root()).abs() < 1e-9);
        assert_eq!(merged.a_hat, Some(0.875));
    }

    #[test]
    fn enumerate_splits_counts_and_canonical_form() {
        let splits = enumerate_splits(&[2, 3, 4]);
        assert_eq!(splits.len(), 3); // 2^(3-1) - 1
        for (l, r) in &splits {
            assert!(l.contains(&2));
            assert!(!r.is_empty());
            assert_eq!(l.len() + r.len(), 3);
        }
    }

    #[test]
    fn estimator_id_parse_and_label() {
        assert_eq!(EstimatorId::parse("minc-mle").unwrap().label(), "minc-mle");
        assert_eq!(EstimatorId::parse("order-r:2").unwrap().label(), "order-r:2");
        assert!(EstimatorId::parse("order-r:1").is_err());
        assert!(EstimatorId::parse("bogus").is_err());
    }

    #[test]
    fn flags_render_joined() {
        let f = Flags::CLAMPED_HIGH.union(Flags::INCONSISTENT_DATA);
        assert_eq!(f.to_string(), "CLAMPED_HIGH|INCONSISTENT_DATA");
        assert_eq!(Flags::empty().to_string(), "");
    }
}
