//! Logistic-network data model.
//!
//! A network is a directed graph whose arcs carry an efficiency in `(0, 1]`.
//! Service flowing both ways across a pair of nodes with equal efficiency is
//! stored once, as an undirected link. Nodes are kept in ascending label
//! order and every iteration order in the crate follows it.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::algebra::Efficiency;

/// Opposite arcs whose efficiencies differ by at most this much are merged
/// into a single undirected link.
pub const MERGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error(
        "invalid node label {0:?}: labels must be non-empty and contain no commas or whitespace"
    )]
    InvalidLabel(String),
    #[error("efficiency {efficiency} on {tail}->{head} is outside (0, 1]")]
    EfficiencyOutOfRange {
        tail: String,
        head: String,
        efficiency: f64,
    },
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("duplicate arc {tail}->{head}")]
    DuplicateArc { tail: String, head: String },
    #[error("{tail} and {head} are joined by both a directed arc and an undirected link")]
    ConflictingArc { tail: String, head: String },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("network is not symmetric: directed arc {tail}->{head}")]
    NotSymmetric { tail: String, head: String },
}

/// A node label: a non-empty token without commas or whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(label: impl Into<String>) -> Result<Self, NetworkError> {
        let label = label.into();
        if label.is_empty() || label.chars().any(|c| c == ',' || c.is_whitespace()) {
            return Err(NetworkError::InvalidLabel(label));
        }
        Ok(NodeId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

// Hash and Eq of NodeId agree with those of the inner str.
impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for NodeId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// An arc as supplied by a caller, before validation and merging.
#[derive(Debug, Clone, PartialEq)]
pub struct RawArc {
    pub tail: String,
    pub head: String,
    pub efficiency: f64,
    pub undirected: bool,
}

impl RawArc {
    pub fn directed(tail: impl Into<String>, head: impl Into<String>, efficiency: f64) -> Self {
        RawArc {
            tail: tail.into(),
            head: head.into(),
            efficiency,
            undirected: false,
        }
    }

    pub fn undirected(a: impl Into<String>, b: impl Into<String>, efficiency: f64) -> Self {
        RawArc {
            tail: a.into(),
            head: b.into(),
            efficiency,
            undirected: true,
        }
    }
}

/// A validated arc. Endpoints are positions in the network's node order.
/// Undirected links always have `tail < head`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub efficiency: f64,
    pub undirected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetworkKind {
    OneSided,
    SymmetricTwoSided,
    AsymmetricTwoSided,
    Mixed,
}

impl NetworkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::OneSided => "one-sided",
            NetworkKind::SymmetricTwoSided => "symmetric-two-sided",
            NetworkKind::AsymmetricTwoSided => "asymmetric-two-sided",
            NetworkKind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Incremental network construction.
///
/// Per-arc checks (label syntax, efficiency range, self-loops, duplicates and
/// directed/undirected conflicts) run eagerly in [`NetworkBuilder::add_arc`]
/// so callers can attribute a failure to the offending input record.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    labels: BTreeSet<NodeId>,
    arcs: Vec<RawArc>,
    directed: HashSet<(String, String)>,
    undirected: HashSet<(String, String)>,
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a node, which may stay isolated.
    pub fn add_node(&mut self, label: &str) -> Result<&mut Self, NetworkError> {
        self.labels.insert(NodeId::new(label)?);
        Ok(self)
    }

    pub fn add_arc(&mut self, arc: RawArc) -> Result<&mut Self, NetworkError> {
        let tail = NodeId::new(arc.tail.as_str())?;
        let head = NodeId::new(arc.head.as_str())?;
        if Efficiency::new(arc.efficiency).is_err() {
            return Err(NetworkError::EfficiencyOutOfRange {
                tail: arc.tail,
                head: arc.head,
                efficiency: arc.efficiency,
            });
        }
        if tail == head {
            return Err(NetworkError::SelfLoop(arc.tail));
        }

        let pair = unordered(&arc.tail, &arc.head);
        if arc.undirected {
            if self.undirected.contains(&pair) {
                return Err(NetworkError::DuplicateArc {
                    tail: arc.tail,
                    head: arc.head,
                });
            }
            if self
                .directed
                .contains(&(arc.tail.clone(), arc.head.clone()))
                || self
                    .directed
                    .contains(&(arc.head.clone(), arc.tail.clone()))
            {
                return Err(NetworkError::ConflictingArc {
                    tail: arc.tail,
                    head: arc.head,
                });
            }
            self.undirected.insert(pair);
        } else {
            let key = (arc.tail.clone(), arc.head.clone());
            if self.directed.contains(&key) {
                return Err(NetworkError::DuplicateArc {
                    tail: arc.tail,
                    head: arc.head,
                });
            }
            if self.undirected.contains(&pair) {
                return Err(NetworkError::ConflictingArc {
                    tail: arc.tail,
                    head: arc.head,
                });
            }
            self.directed.insert(key);
        }

        self.labels.insert(tail);
        self.labels.insert(head);
        self.arcs.push(arc);
        Ok(self)
    }

    /// Resolves labels, merges equal opposite arcs and freezes the network.
    pub fn build(self) -> Network {
        let nodes: Vec<NodeId> = self.labels.into_iter().collect();
        let index: HashMap<NodeId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let ix = |label: &str| index[label];

        let mut arcs = Vec::with_capacity(self.arcs.len());
        let mut directed: HashMap<(usize, usize), f64> = HashMap::new();
        for raw in &self.arcs {
            let (t, h) = (ix(&raw.tail), ix(&raw.head));
            if raw.undirected {
                arcs.push(Arc {
                    tail: t.min(h),
                    head: t.max(h),
                    efficiency: raw.efficiency,
                    undirected: true,
                });
            } else {
                directed.insert((t, h), raw.efficiency);
            }
        }

        for (&(t, h), &eta) in &directed {
            match directed.get(&(h, t)) {
                Some(&back) if (eta - back).abs() <= MERGE_TOLERANCE => {
                    // The link keeps the efficiency of the arc running from
                    // the smaller label to the larger one.
                    if t < h {
                        arcs.push(Arc {
                            tail: t,
                            head: h,
                            efficiency: eta,
                            undirected: true,
                        });
                    }
                }
                _ => arcs.push(Arc {
                    tail: t,
                    head: h,
                    efficiency: eta,
                    undirected: false,
                }),
            }
        }
        arcs.sort_by(|a, b| (a.tail, a.head).cmp(&(b.tail, b.head)));

        Network::from_parts(nodes, index, arcs)
    }
}

/// Builds a validated network from raw arcs. Nodes are the arc endpoints.
pub fn build_network<I>(raw_arcs: I) -> Result<Network, NetworkError>
where
    I: IntoIterator<Item = RawArc>,
{
    let mut builder = NetworkBuilder::new();
    for arc in raw_arcs {
        builder.add_arc(arc)?;
    }
    Ok(builder.build())
}

/// An immutable logistic network.
#[derive(Debug, Clone)]
pub struct Network {
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    arcs: Vec<Arc>,
    // CSR out-adjacency, each row sorted by head position.
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.arcs == other.arcs
    }
}

impl Network {
    fn from_parts(nodes: Vec<NodeId>, index: HashMap<NodeId, usize>, arcs: Vec<Arc>) -> Self {
        let n = nodes.len();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for arc in &arcs {
            rows[arc.tail].push((arc.head, arc.efficiency));
            if arc.undirected {
                rows[arc.head].push((arc.tail, arc.efficiency));
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_by_key(|&(h, _)| h);
            for (h, w) in row {
                targets.push(h);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Network {
            nodes,
            index,
            arcs,
            offsets,
            targets,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in ascending label order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Arcs sorted by `(tail, head)` position.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn label(&self, ix: usize) -> &NodeId {
        &self.nodes[ix]
    }

    pub fn position(&self, label: &str) -> Result<usize, NetworkError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| NetworkError::UnknownNode(label.to_owned()))
    }

    /// Arcs in the form accepted by [`build_network`].
    pub fn raw_arcs(&self) -> Vec<RawArc> {
        self.arcs
            .iter()
            .map(|a| RawArc {
                tail: self.nodes[a.tail].0.clone(),
                head: self.nodes[a.head].0.clone(),
                efficiency: a.efficiency,
                undirected: a.undirected,
            })
            .collect()
    }

    /// One-step successors of the node at position `ix`, ascending by label.
    pub fn successors(&self, ix: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[ix]..self.offsets[ix + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Efficiency of the single step `from -> to`, if one exists.
    pub fn step_efficiency(&self, from: usize, to: usize) -> Option<f64> {
        let range = self.offsets[from]..self.offsets[from + 1];
        let row = &self.targets[range.clone()];
        row.binary_search(&to)
            .ok()
            .map(|k| self.weights[range.start + k])
    }

    pub fn out_neighbors(&self, label: &str) -> Result<Vec<(&NodeId, f64)>, NetworkError> {
        let u = self.position(label)?;
        Ok(self
            .successors(u)
            .map(|(v, w)| (&self.nodes[v], w))
            .collect())
    }

    pub fn classify(&self) -> NetworkKind {
        let (mut one_way, mut equal, mut unequal) = (false, false, false);
        let mut directed: HashMap<(usize, usize), f64> = HashMap::new();
        for arc in &self.arcs {
            if arc.undirected {
                equal = true;
            } else {
                directed.insert((arc.tail, arc.head), arc.efficiency);
            }
        }
        for &(t, h) in directed.keys() {
            if directed.contains_key(&(h, t)) {
                // Equal opposite pairs were merged during build.
                unequal = true;
            } else {
                one_way = true;
            }
        }
        match (one_way, equal || unequal) {
            (true, true) => NetworkKind::Mixed,
            (true, false) => NetworkKind::OneSided,
            (false, _) if unequal => NetworkKind::AsymmetricTwoSided,
            // Includes the arc-free network, which is trivially undirected.
            (false, _) => NetworkKind::SymmetricTwoSided,
        }
    }

    /// The undirected reading of a symmetric two-sided network.
    pub fn as_symmetric(&self) -> Result<UndirectedView<'_>, NetworkError> {
        if let Some(arc) = self.arcs.iter().find(|a| !a.undirected) {
            return Err(NetworkError::NotSymmetric {
                tail: self.nodes[arc.tail].0.clone(),
                head: self.nodes[arc.head].0.clone(),
            });
        }
        let edges = self
            .arcs
            .iter()
            .map(|a| Edge {
                a: a.tail,
                b: a.head,
                efficiency: a.efficiency,
            })
            .collect();
        Ok(UndirectedView { net: self, edges })
    }
}

/// An unordered weighted edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub efficiency: f64,
}

/// Each link of a symmetric network, exactly once.
#[derive(Debug, Clone)]
pub struct UndirectedView<'a> {
    net: &'a Network,
    edges: Vec<Edge>,
}

impl<'a> UndirectedView<'a> {
    pub fn network(&self) -> &'a Network {
        self.net
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.net.node_count()
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }
}

pub fn is_connected(view: &UndirectedView<'_>) -> bool {
    let n = view.node_count();
    if n <= 1 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for e in view.edges() {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(t: &str, h: &str, w: f64) -> RawArc {
        RawArc::directed(t, h, w)
    }

    fn u(t: &str, h: &str, w: f64) -> RawArc {
        RawArc::undirected(t, h, w)
    }

    #[test]
    fn single_arc() {
        let net = build_network([d("a", "z", 0.5)]).unwrap();
        assert_eq!(net.node_count(), 2);
        assert_eq!(net.arcs().len(), 1);
        assert!(!net.arcs()[0].undirected);
    }

    #[test]
    fn equal_opposite_arcs_merge() {
        let net = build_network([d("e", "d", 0.99), d("d", "e", 0.99)]).unwrap();
        assert_eq!(
            net.arcs(),
            &[Arc {
                tail: 0,
                head: 1,
                efficiency: 0.99,
                undirected: true
            }]
        );
        assert_eq!(net.label(0).as_str(), "d");
    }

    #[test]
    fn merge_respects_tolerance() {
        let net = build_network([d("a", "b", 0.5), d("b", "a", 0.5 + 1e-13)]).unwrap();
        assert_eq!(net.arcs().len(), 1);
        let net = build_network([d("a", "b", 0.5), d("b", "a", 0.5 + 1e-9)]).unwrap();
        assert_eq!(net.arcs().len(), 2);
        assert_eq!(net.classify(), NetworkKind::AsymmetricTwoSided);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build_network([d("a", "b", 1.2)]),
            Err(NetworkError::EfficiencyOutOfRange { .. })
        ));
        assert!(matches!(
            build_network([d("a", "b", 0.0)]),
            Err(NetworkError::EfficiencyOutOfRange { .. })
        ));
        assert!(matches!(
            build_network([d("a", "b", f64::NAN)]),
            Err(NetworkError::EfficiencyOutOfRange { .. })
        ));
        assert_eq!(
            build_network([d("a", "a", 0.5)]),
            Err(NetworkError::SelfLoop("a".into()))
        );
        assert!(matches!(
            build_network([d("a", "b", 0.5), d("a", "b", 0.6)]),
            Err(NetworkError::DuplicateArc { .. })
        ));
        assert!(matches!(
            build_network([u("a", "b", 0.5), u("b", "a", 0.5)]),
            Err(NetworkError::DuplicateArc { .. })
        ));
        assert!(matches!(
            build_network([u("a", "b", 0.5), d("b", "a", 0.5)]),
            Err(NetworkError::ConflictingArc { .. })
        ));
        assert!(matches!(
            build_network([d("a", "b", 0.5), u("a", "b", 0.5)]),
            Err(NetworkError::ConflictingArc { .. })
        ));
        assert!(matches!(
            build_network([d("a b", "c", 0.5)]),
            Err(NetworkError::InvalidLabel(_))
        ));
        assert!(matches!(
            build_network([d("", "c", 0.5)]),
            Err(NetworkError::InvalidLabel(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let sym = build_network([u("a", "b", 0.9), u("b", "c", 0.8)]).unwrap();
        assert_eq!(sym.classify(), NetworkKind::SymmetricTwoSided);
        let one = build_network([d("a", "b", 0.9)]).unwrap();
        assert_eq!(one.classify(), NetworkKind::OneSided);
        let mixed = build_network([d("a", "b", 0.9), u("c", "d", 0.5)]).unwrap();
        assert_eq!(mixed.classify(), NetworkKind::Mixed);
        let empty = NetworkBuilder::new().build();
        assert_eq!(empty.classify(), NetworkKind::SymmetricTwoSided);
    }

    #[test]
    fn neighbors() {
        let mut b = NetworkBuilder::new();
        b.add_node("x").unwrap();
        b.add_arc(d("a", "b", 0.9)).unwrap();
        let net = b.build();
        assert!(net.out_neighbors("x").unwrap().is_empty());
        let got: Vec<_> = net
            .out_neighbors("a")
            .unwrap()
            .into_iter()
            .map(|(n, w)| (n.as_str(), w))
            .collect();
        assert_eq!(got, vec![("b", 0.9)]);
        assert!(net.out_neighbors("b").unwrap().is_empty());
        assert_eq!(
            net.out_neighbors("q"),
            Err(NetworkError::UnknownNode("q".into()))
        );

        let net = build_network([u("a", "b", 0.9)]).unwrap();
        let got: Vec<_> = net
            .out_neighbors("b")
            .unwrap()
            .into_iter()
            .map(|(n, w)| (n.as_str(), w))
            .collect();
        assert_eq!(got, vec![("a", 0.9)]);
    }

    #[test]
    fn neighbors_sorted_by_label() {
        let net = build_network([d("a", "c", 0.1), d("a", "b", 0.2), u("a", "0", 0.3)]).unwrap();
        let labels: Vec<_> = net
            .out_neighbors("a")
            .unwrap()
            .into_iter()
            .map(|(n, _)| n.as_str().to_owned())
            .collect();
        assert_eq!(labels, ["0", "b", "c"]);
    }

    #[test]
    fn symmetric_view() {
        let tri = build_network([u("a", "b", 0.9), u("b", "c", 0.8), u("a", "c", 0.7)]).unwrap();
        assert_eq!(tri.as_symmetric().unwrap().edges().len(), 3);
        let one = build_network([d("a", "b", 0.9)]).unwrap();
        assert!(matches!(
            one.as_symmetric(),
            Err(NetworkError::NotSymmetric { .. })
        ));
        let merged = build_network([d("e", "d", 0.99), d("d", "e", 0.99)]).unwrap();
        let view = merged.as_symmetric().unwrap();
        assert_eq!(
            view.edges(),
            &[Edge {
                a: 0,
                b: 1,
                efficiency: 0.99
            }]
        );
    }

    #[test]
    fn connectivity() {
        let mut b = NetworkBuilder::new();
        b.add_node("a").unwrap();
        let single = b.build();
        assert!(single.as_symmetric().unwrap().is_connected());

        let mut b = NetworkBuilder::new();
        b.add_node("a").unwrap().add_node("b").unwrap();
        let pair = b.build();
        assert!(!pair.as_symmetric().unwrap().is_connected());

        let path = build_network([u("a", "b", 0.5), u("b", "c", 0.5)]).unwrap();
        assert!(path.as_symmetric().unwrap().is_connected());
    }

    #[test]
    fn step_lookup() {
        let net = build_network([d("a", "b", 0.4), u("b", "c", 0.6)]).unwrap();
        assert_eq!(net.step_efficiency(0, 1), Some(0.4));
        assert_eq!(net.step_efficiency(1, 0), None);
        assert_eq!(net.step_efficiency(2, 1), Some(0.6));
    }
}
