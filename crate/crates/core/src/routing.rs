//! Maximum-efficiency chain search.
//!
//! Two searches are provided. [`multiplicative_search`] works on the raw
//! efficiencies: the source starts at weight 1, every other node at 0, and
//! the unsettled node of largest weight is settled next. [`lossiness_search`]
//! first maps every arc to its lossiness and then runs the ordinary min-sum
//! search. Both settle nodes in the same order under the same tie-break and
//! so find chains of the same efficiency.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::algebra::{
    check_base, from_lossiness, to_lossiness, AlgebraError, Efficiency, Lossiness,
};
use crate::network::{Network, NetworkError, NodeId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoutingError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which node to settle when several unsettled nodes share the best label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    SmallestLabel,
    LargestLabel,
}

impl TieBreak {
    fn rank(self, node: usize) -> usize {
        match self {
            TieBreak::SmallestLabel => usize::MAX - node,
            TieBreak::LargestLabel => node,
        }
    }
}

/// A chain of nodes from a source to a target with its overall efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    nodes: Vec<NodeId>,
    efficiency: f64,
}

impl Chain {
    pub fn new(nodes: Vec<NodeId>, efficiency: f64) -> Self {
        Chain { nodes, efficiency }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    /// Number of links.
    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Recomputes the product of the traversed steps in `net`, or `None` if
    /// some step does not exist there.
    pub fn product_in(&self, net: &Network) -> Option<f64> {
        let mut product = 1.0;
        for pair in self.nodes.windows(2) {
            let from = net.position(pair[0].as_str()).ok()?;
            let to = net.position(pair[1].as_str()).ok()?;
            product *= net.step_efficiency(from, to)?;
        }
        Some(product)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.nodes.iter().map(NodeId::as_str).collect()
    }
}

const NO_PRED: usize = usize::MAX;

#[derive(Debug, Clone, Copy)]
struct Entry {
    score: f64,
    rank: usize,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then(self.rank.cmp(&other.rank))
    }
}

/// Label state left behind by a search.
#[derive(Debug, Clone)]
struct Labels {
    source: usize,
    value: Vec<f64>,
    pred: Vec<usize>,
    settled: Vec<bool>,
    order: Vec<usize>,
}

impl Labels {
    fn path(&self, target: usize) -> Option<Vec<usize>> {
        if target != self.source && self.pred[target] == NO_PRED {
            return None;
        }
        let mut path = vec![target];
        let mut v = target;
        while v != self.source {
            v = self.pred[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }
}

/// Result of a multiplicative search from one source.
#[derive(Debug, Clone)]
pub struct MultiplicativeRun {
    labels: Labels,
}

impl MultiplicativeRun {
    pub fn source(&self) -> usize {
        self.labels.source
    }

    /// Current weight of `node`; 0 means unreached.
    pub fn weight(&self, node: usize) -> f64 {
        self.labels.value[node]
    }

    pub fn is_settled(&self, node: usize) -> bool {
        self.labels.settled[node]
    }

    /// Node positions in the order they were settled.
    pub fn settle_order(&self) -> &[usize] {
        &self.labels.order
    }

    /// The recorded history of `node`: the node sequence of the best chain
    /// found to it, starting at the source.
    pub fn history(&self, node: usize) -> Option<Vec<usize>> {
        self.labels.path(node)
    }

    pub fn chain(&self, net: &Network, target: usize) -> Option<Chain> {
        let path = self.history(target)?;
        Some(Chain {
            nodes: path.into_iter().map(|v| net.label(v).clone()).collect(),
            efficiency: self.weight(target),
        })
    }
}

/// Multiplicative search from `source`. Stops once `target` is settled, or
/// when every remaining unsettled node has weight 0.
pub fn multiplicative_search(
    net: &Network,
    source: usize,
    target: Option<usize>,
    tie: TieBreak,
) -> MultiplicativeRun {
    let n = net.node_count();
    let mut labels = Labels {
        source,
        value: vec![0.0; n],
        pred: vec![NO_PRED; n],
        settled: vec![false; n],
        order: Vec::new(),
    };
    labels.value[source] = 1.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry {
        score: 1.0,
        rank: tie.rank(source),
        node: source,
    });

    while let Some(Entry { score, node: v, .. }) = heap.pop() {
        if labels.settled[v] || score != labels.value[v] {
            continue;
        }
        labels.settled[v] = true;
        labels.order.push(v);
        if Some(v) == target {
            break;
        }
        for (u, eta) in net.successors(v) {
            if labels.settled[u] {
                continue;
            }
            let candidate = score * eta;
            // Strict improvement only: an equal candidate keeps the old history.
            if candidate > labels.value[u] {
                labels.value[u] = candidate;
                labels.pred[u] = v;
                heap.push(Entry {
                    score: candidate,
                    rank: tie.rank(u),
                    node: u,
                });
            }
        }
    }
    MultiplicativeRun { labels }
}

/// Result of a min-sum search over lossiness weights.
#[derive(Debug, Clone)]
pub struct LossinessRun {
    labels: Labels,
    base: f64,
}

impl LossinessRun {
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Total lossiness of the best chain found to `node`; infinite if unreached.
    pub fn distance(&self, node: usize) -> f64 {
        self.labels.value[node]
    }

    pub fn settle_order(&self) -> &[usize] {
        &self.labels.order
    }

    pub fn path(&self, node: usize) -> Option<Vec<usize>> {
        self.labels.path(node)
    }
}

/// Min-sum search over arc lossiness values `-log_base(eta)`.
pub fn lossiness_search(
    net: &Network,
    source: usize,
    target: Option<usize>,
    base: f64,
    tie: TieBreak,
) -> Result<LossinessRun, AlgebraError> {
    check_base(base)?;
    let n = net.node_count();
    let mut labels = Labels {
        source,
        value: vec![f64::INFINITY; n],
        pred: vec![NO_PRED; n],
        settled: vec![false; n],
        order: Vec::new(),
    };
    labels.value[source] = 0.0;
    let mut heap = BinaryHeap::new();
    // Scores are negated distances so the max-heap yields the minimum.
    heap.push(Entry {
        score: -0.0,
        rank: tie.rank(source),
        node: source,
    });

    while let Some(Entry { score, node: v, .. }) = heap.pop() {
        let dist = -score;
        if labels.settled[v] || dist != labels.value[v] {
            continue;
        }
        labels.settled[v] = true;
        labels.order.push(v);
        if Some(v) == target {
            break;
        }
        for (u, eta) in net.successors(v) {
            if labels.settled[u] {
                continue;
            }
            let t = to_lossiness(Efficiency::new(eta)?, base)?.value();
            let candidate = dist + t;
            if candidate < labels.value[u] {
                labels.value[u] = candidate;
                labels.pred[u] = v;
                heap.push(Entry {
                    score: -candidate,
                    rank: tie.rank(u),
                    node: u,
                });
            }
        }
    }
    Ok(LossinessRun { labels, base })
}

/// A best chain found through the lossiness transform.
#[derive(Debug, Clone, PartialEq)]
pub struct LossinessChain {
    /// Efficiency is recovered from the total lossiness as `base^-total`.
    pub chain: Chain,
    pub lossiness_total: f64,
    pub base: f64,
}

/// Maximum-efficiency chain from `a` to `z` by multiplicative search.
/// `Ok(None)` means no chain exists.
pub fn best_chain_multiplicative(
    net: &Network,
    a: &str,
    z: &str,
) -> Result<Option<Chain>, RoutingError> {
    best_chain_multiplicative_with(net, a, z, TieBreak::default())
}

pub fn best_chain_multiplicative_with(
    net: &Network,
    a: &str,
    z: &str,
    tie: TieBreak,
) -> Result<Option<Chain>, RoutingError> {
    let (a, z) = (net.position(a)?, net.position(z)?);
    Ok(multiplicative_search(net, a, Some(z), tie).chain(net, z))
}

/// Maximum-efficiency chain from `a` to `z` by minimising total lossiness.
pub fn best_chain_via_lossiness(
    net: &Network,
    a: &str,
    z: &str,
    base: f64,
) -> Result<Option<LossinessChain>, RoutingError> {
    best_chain_via_lossiness_with(net, a, z, base, TieBreak::default())
}

pub fn best_chain_via_lossiness_with(
    net: &Network,
    a: &str,
    z: &str,
    base: f64,
    tie: TieBreak,
) -> Result<Option<LossinessChain>, RoutingError> {
    check_base(base)?;
    let (a, z) = (net.position(a)?, net.position(z)?);
    let run = lossiness_search(net, a, Some(z), base, tie)?;
    let Some(path) = run.path(z) else {
        return Ok(None);
    };
    let total = run.distance(z);
    let efficiency = from_lossiness(Lossiness::new(total, base)?).value();
    Ok(Some(LossinessChain {
        chain: Chain {
            nodes: path.into_iter().map(|v| net.label(v).clone()).collect(),
            efficiency,
        },
        lossiness_total: total,
        base,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1_replica;
    use crate::network::{build_network, NetworkBuilder, RawArc};

    fn labels(chain: &Chain) -> Vec<&str> {
        chain.labels()
    }

    #[test]
    fn replica_best_chain() {
        let net = fig1_replica();
        for tie in [TieBreak::SmallestLabel, TieBreak::LargestLabel] {
            let chain = best_chain_multiplicative_with(&net, "a", "z", tie)
                .unwrap()
                .unwrap();
            assert_eq!(labels(&chain), ["a", "b", "c", "d", "z"]);
            assert!((chain.efficiency() - 0.93168306).abs() < 1e-9);
        }
    }

    #[test]
    fn replica_has_weight_parity_between_d_and_e() {
        let net = fig1_replica();
        let (a, c, d, e) = (0, 2, 3, 4);
        assert_eq!(net.label(d).as_str(), "d");
        let run = multiplicative_search(&net, a, None, TieBreak::SmallestLabel);
        // After c is settled, d and e both hold 0.941094.
        let order = run.settle_order();
        assert_eq!(order[..3], [a, 1, c]);
        assert_eq!(run.weight(d), run.weight(e));
        assert!((run.weight(d) - 0.941094).abs() < 1e-12);
        assert_eq!(order[3], d);

        let rev = multiplicative_search(&net, a, None, TieBreak::LargestLabel);
        assert_eq!(rev.settle_order()[3], e);
        assert_eq!(rev.history(5).unwrap(), vec![0, 1, 2, 3, 5]);
    }

    #[test]
    fn source_equals_target() {
        let net = fig1_replica();
        let chain = best_chain_multiplicative(&net, "a", "a").unwrap().unwrap();
        assert_eq!(labels(&chain), ["a"]);
        assert_eq!(chain.efficiency(), 1.0);
        assert_eq!(chain.len(), 0);
        let via = best_chain_via_lossiness(&net, "c", "c", 2.0)
            .unwrap()
            .unwrap();
        assert_eq!(via.chain.efficiency(), 1.0);
        assert_eq!(via.lossiness_total, 0.0);
    }

    #[test]
    fn unreachable_is_none() {
        let mut b = NetworkBuilder::new();
        b.add_node("a").unwrap().add_node("z").unwrap();
        let net = b.build();
        assert_eq!(best_chain_multiplicative(&net, "a", "z").unwrap(), None);
        assert_eq!(best_chain_via_lossiness(&net, "a", "z", 2.0).unwrap(), None);

        let one_way = build_network([RawArc::directed("z", "a", 0.5)]).unwrap();
        assert_eq!(best_chain_multiplicative(&one_way, "a", "z").unwrap(), None);
    }

    #[test]
    fn product_beats_sum() {
        let net = build_network([
            RawArc::directed("a", "b", 0.8),
            RawArc::directed("b", "z", 0.3),
            RawArc::directed("a", "c", 0.5),
            RawArc::directed("c", "z", 0.5),
        ])
        .unwrap();
        let chain = best_chain_multiplicative(&net, "a", "z").unwrap().unwrap();
        assert_eq!(labels(&chain), ["a", "c", "z"]);
        assert_eq!(chain.efficiency(), 0.25);
        let via = best_chain_via_lossiness(&net, "a", "z", 2.0)
            .unwrap()
            .unwrap();
        assert_eq!(labels(&via.chain), ["a", "c", "z"]);
        assert!((via.chain.efficiency() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn single_arc_lossiness() {
        let net = build_network([RawArc::directed("a", "z", 0.5)]).unwrap();
        let via = best_chain_via_lossiness(&net, "a", "z", 2.0)
            .unwrap()
            .unwrap();
        assert_eq!(via.lossiness_total, 1.0);
        assert_eq!(via.chain.efficiency(), 0.5);
        assert_eq!(labels(&via.chain), ["a", "z"]);
    }

    #[test]
    fn errors() {
        let net = fig1_replica();
        assert!(matches!(
            best_chain_multiplicative(&net, "a", "nope"),
            Err(RoutingError::Network(NetworkError::UnknownNode(_)))
        ));
        assert!(matches!(
            best_chain_via_lossiness(&net, "a", "z", 1.0),
            Err(RoutingError::Algebra(AlgebraError::BadBase(_)))
        ));
    }

    #[test]
    fn unit_efficiency_cycles_do_not_loop() {
        let net = build_network([
            RawArc::undirected("a", "b", 1.0),
            RawArc::undirected("b", "c", 1.0),
            RawArc::undirected("a", "c", 1.0),
            RawArc::directed("c", "z", 0.5),
        ])
        .unwrap();
        let chain = best_chain_multiplicative(&net, "a", "z").unwrap().unwrap();
        assert_eq!(labels(&chain), ["a", "c", "z"]);
        assert_eq!(chain.product_in(&net), Some(0.5));
    }

    #[test]
    fn settled_weights_never_increase() {
        let net = fig1_replica();
        let run = multiplicative_search(&net, 0, None, TieBreak::SmallestLabel);
        let ws: Vec<f64> = run.settle_order().iter().map(|&v| run.weight(v)).collect();
        assert!(ws.windows(2).all(|w| w[0] >= w[1]));
    }
}
