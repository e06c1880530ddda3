//! Guaranteed minimum efficiency between every pair of nodes.
//!
//! Two methods are offered. The tree method builds the spanning tree with
//! the largest product of link efficiencies (greedy, largest link first,
//! skipping links that close a cycle). Every tree path multiplies a subset
//! of the tree's factors, each at most 1, so every pair is served at least
//! as well as the product of all of them. The bound is exact on trees and
//! loosens as the network gets denser.
//!
//! The all-pairs method runs a full multiplicative search from every node
//! and takes the worst pairwise optimum. It is exact and applies to any
//! network, but costs a search per node instead of one sort.

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::network::{Edge, Network, NetworkError, NodeId, UndirectedView};
use crate::routing::{multiplicative_search, Chain, TieBreak};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevelError {
    #[error("network is not connected")]
    NotConnected,
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("no chain from {from} to {to}")]
    SomePairUnreachable { from: NodeId, to: NodeId },
}

impl LevelError {
    /// True for precondition failures (disconnected or non-symmetric input).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            LevelError::NotConnected | LevelError::Network(NetworkError::NotSymmetric { .. })
        )
    }
}

/// A spanning tree of a symmetric network with the product of its links.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    product: f64,
}

impl SpanningTree {
    /// Edges are stored sorted by endpoints.
    pub(crate) fn from_edges(nodes: Vec<NodeId>, mut edges: Vec<Edge>) -> Self {
        edges.sort_by(|x, y| (x.a, x.b).cmp(&(y.a, y.b)));
        let product = canonical_product(edges.iter().map(|e| e.efficiency).collect());
        SpanningTree {
            nodes,
            edges,
            product,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn label(&self, ix: usize) -> &NodeId {
        &self.nodes[ix]
    }

    /// Product of all link efficiencies; 1 for the empty tree.
    pub fn product(&self) -> f64 {
        self.product
    }

    pub fn efficiency_sum(&self) -> f64 {
        self.edges.iter().map(|e| e.efficiency).sum()
    }

    fn position(&self, label: &str) -> Result<usize, LevelError> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(label))
            .map_err(|_| NetworkError::UnknownNode(label.to_owned()).into())
    }
}

/// Product of factors in ascending order, so that the same multiset of
/// factors always yields the same bits whatever order it was listed in.
fn canonical_product(mut factors: Vec<f64>) -> f64 {
    factors.sort_by(f64::total_cmp);
    factors.iter().product()
}

/// Greedy maximum-product spanning tree. Ties between equal links go to the
/// lexicographically smaller endpoint pair.
pub fn max_product_spanning_tree(view: &UndirectedView<'_>) -> Result<SpanningTree, LevelError> {
    if !view.is_connected() {
        return Err(LevelError::NotConnected);
    }
    let n = view.node_count();
    let mut candidates = view.edges().to_vec();
    candidates.sort_by(|x, y| {
        y.efficiency
            .total_cmp(&x.efficiency)
            .then((x.a, x.b).cmp(&(y.a, y.b)))
    });

    let mut sets = DisjointSets::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for edge in candidates {
        if chosen.len() + 1 >= n {
            break;
        }
        if sets.union(edge.a, edge.b) {
            chosen.push(edge);
        }
    }
    Ok(SpanningTree::from_edges(
        view.network().nodes().to_vec(),
        chosen,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Tree,
    AllPairs,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// The maximum-product spanning tree; every tree path meets the level.
    Tree(SpanningTree),
    /// The pair whose best chain is worst, with that chain.
    Pair {
        from: NodeId,
        to: NodeId,
        chain: Chain,
    },
    /// Fewer than two nodes: no pair to serve.
    Trivial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteedLevel {
    pub value: f64,
    pub method: Method,
    pub witness: Witness,
}

pub fn guaranteed_min_by_tree(view: &UndirectedView<'_>) -> Result<GuaranteedLevel, LevelError> {
    let tree = max_product_spanning_tree(view)?;
    Ok(GuaranteedLevel {
        value: tree.product(),
        method: Method::Tree,
        witness: Witness::Tree(tree),
    })
}

/// The unique path between `u` and `v` in `tree`.
pub fn tree_path(tree: &SpanningTree, u: &str, v: &str) -> Result<Chain, LevelError> {
    let (src, dst) = (tree.position(u)?, tree.position(v)?);
    let n = tree.nodes.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &tree.edges {
        adj[e.a].push((e.b, e.efficiency));
        adj[e.b].push((e.a, e.efficiency));
    }
    let mut parent: Vec<Option<(usize, f64)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[src] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(x) = queue.pop_front() {
        if x == dst {
            break;
        }
        for &(y, w) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, w));
                queue.push_back(y);
            }
        }
    }
    if !seen[dst] {
        // Only possible for a tree that does not span its nodes.
        return Err(LevelError::NotConnected);
    }

    let mut nodes = vec![dst];
    let mut steps = Vec::new();
    let mut x = dst;
    while let Some((p, w)) = parent[x] {
        steps.push(w);
        nodes.push(p);
        x = p;
    }
    nodes.reverse();
    let efficiency = canonical_product(steps);
    Ok(Chain::new(
        nodes.into_iter().map(|ix| tree.nodes[ix].clone()).collect(),
        efficiency,
    ))
}

// Worst target from one source, or the first unreachable target.
type SourceOutcome = Result<Option<(f64, usize)>, usize>;

fn worst_from(net: &Network, source: usize) -> SourceOutcome {
    let run = multiplicative_search(net, source, None, TieBreak::default());
    let mut worst: Option<(f64, usize)> = None;
    for target in (0..net.node_count()).filter(|&t| t != source) {
        let w = run.weight(target);
        if w == 0.0 {
            return Err(target);
        }
        if worst.map_or(true, |(best, _)| w < best) {
            worst = Some((w, target));
        }
    }
    Ok(worst)
}

fn combine(net: &Network, outcomes: Vec<SourceOutcome>) -> Result<GuaranteedLevel, LevelError> {
    let mut worst: Option<(f64, usize, usize)> = None;
    for (source, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Err(target) => {
                return Err(LevelError::SomePairUnreachable {
                    from: net.label(source).clone(),
                    to: net.label(target).clone(),
                })
            }
            Ok(Some((w, target))) => {
                if worst.map_or(true, |(best, _, _)| w < best) {
                    worst = Some((w, source, target));
                }
            }
            Ok(None) => {}
        }
    }
    let Some((value, source, target)) = worst else {
        return Ok(GuaranteedLevel {
            value: 1.0,
            method: Method::AllPairs,
            witness: Witness::Trivial,
        });
    };
    let chain = multiplicative_search(net, source, Some(target), TieBreak::default())
        .chain(net, target)
        .expect("target was reached in the full search");
    Ok(GuaranteedLevel {
        value,
        method: Method::AllPairs,
        witness: Witness::Pair {
            from: net.label(source).clone(),
            to: net.label(target).clone(),
            chain,
        },
    })
}

/// Exact level: the smallest best-chain efficiency over all ordered pairs.
/// Sources are searched in parallel; the result does not depend on it.
pub fn guaranteed_min_all_pairs(net: &Network) -> Result<GuaranteedLevel, LevelError> {
    let outcomes = (0..net.node_count())
        .into_par_iter()
        .map(|s| worst_from(net, s))
        .collect();
    combine(net, outcomes)
}

pub fn guaranteed_min_all_pairs_sequential(net: &Network) -> Result<GuaranteedLevel, LevelError> {
    let outcomes = (0..net.node_count()).map(|s| worst_from(net, s)).collect();
    combine(net, outcomes)
}
