//! Exhaustive reference answers for small networks.
//!
//! Nothing here is clever on purpose: chains come from a plain depth-first
//! walk over simple paths and spanning trees from testing every
//! `(n - 1)`-subset of links for connectivity.

use thiserror::Error;

use crate::guaranteed::SpanningTree;
use crate::network::{Edge, Network, NetworkError, UndirectedView};
use crate::routing::Chain;

pub const CHAIN_NODE_LIMIT: usize = 12;
pub const TREE_NODE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("network has {nodes} nodes, oracle limit is {limit}")]
    SizeLimitExceeded { nodes: usize, limit: usize },
    #[error("network is not connected")]
    NotConnected,
}

/// Every simple chain from `a` to `z`, in depth-first order with successors
/// visited by ascending label. For `a == z` the only chain is `[a]`.
pub fn enumerate_chains(net: &Network, a: &str, z: &str) -> Result<Vec<Chain>, OracleError> {
    if net.node_count() > CHAIN_NODE_LIMIT {
        return Err(OracleError::SizeLimitExceeded {
            nodes: net.node_count(),
            limit: CHAIN_NODE_LIMIT,
        });
    }
    let (a, z) = (net.position(a)?, net.position(z)?);
    let mut out = Vec::new();
    let mut on_path = vec![false; net.node_count()];
    let mut path = vec![a];
    let mut steps = Vec::new();
    on_path[a] = true;
    walk(net, z, &mut on_path, &mut path, &mut steps, &mut out);
    Ok(out)
}

fn walk(
    net: &Network,
    z: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    steps: &mut Vec<f64>,
    out: &mut Vec<Chain>,
) {
    let v = *path.last().unwrap();
    if v == z {
        let efficiency = steps.iter().fold(1.0, |acc, eta| acc * eta);
        out.push(Chain::new(
            path.iter().map(|&ix| net.label(ix).clone()).collect(),
            efficiency,
        ));
        return;
    }
    for (u, eta) in net.successors(v) {
        if on_path[u] {
            continue;
        }
        on_path[u] = true;
        path.push(u);
        steps.push(eta);
        walk(net, z, on_path, path, steps, out);
        steps.pop();
        path.pop();
        on_path[u] = false;
    }
}

/// The most efficient simple chain; ties go to fewer links, then to the
/// lexicographically smaller node sequence.
pub fn brute_best_chain(net: &Network, a: &str, z: &str) -> Result<Option<Chain>, OracleError> {
    let chains = enumerate_chains(net, a, z)?;
    Ok(chains.into_iter().min_by(|x, y| {
        y.efficiency()
            .total_cmp(&x.efficiency())
            .then(x.len().cmp(&y.len()))
            .then_with(|| x.nodes().cmp(y.nodes()))
    }))
}

/// Every spanning tree of a connected symmetric network, each exactly once.
pub fn enumerate_spanning_trees(
    view: &UndirectedView<'_>,
) -> Result<Vec<SpanningTree>, OracleError> {
    let n = view.node_count();
    if n > TREE_NODE_LIMIT {
        return Err(OracleError::SizeLimitExceeded {
            nodes: n,
            limit: TREE_NODE_LIMIT,
        });
    }
    if !spans(n, view.edges()) {
        return Err(OracleError::NotConnected);
    }
    let nodes = view.network().nodes().to_vec();
    let want = n.saturating_sub(1);
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(want);
    subsets(view.edges(), 0, want, &mut pick, &mut |chosen| {
        if spans(n, chosen) {
            out.push(SpanningTree::from_edges(nodes.clone(), chosen.to_vec()));
        }
    });
    Ok(out)
}

fn subsets(
    edges: &[Edge],
    start: usize,
    want: usize,
    pick: &mut Vec<Edge>,
    visit: &mut dyn FnMut(&[Edge]),
) {
    if pick.len() == want {
        visit(pick);
        return;
    }
    for i in start..edges.len() {
        pick.push(edges[i]);
        subsets(edges, i + 1, want, pick, visit);
        pick.pop();
    }
}

// n - 1 links reaching all n nodes form a tree.
fn spans(n: usize, edges: &[Edge]) -> bool {
    if n == 0 {
        return true;
    }
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut grew = true;
    while grew {
        grew = false;
        for e in edges {
            if reached[e.a] != reached[e.b] {
                reached[e.a] = true;
                reached[e.b] = true;
                grew = true;
            }
        }
    }
    reached.iter().all(|&r| r)
}
