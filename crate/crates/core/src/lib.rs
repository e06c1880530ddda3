//! Efficiency routing in logistic networks.
//!
//! A logistic network is a directed graph whose arcs carry an efficiency in
//! `(0, 1]`: the share of service entering a link that leaves it. A chain's
//! efficiency is the product of its links' efficiencies. This crate finds
//! the most efficient chain between two nodes ([`routing`]) and the best
//! efficiency level every pair of nodes is guaranteed to reach
//! ([`guaranteed`]).

pub mod algebra;
mod dsu;
pub mod fixtures;
pub mod guaranteed;
pub mod io;
pub mod network;
pub mod oracle;
pub mod routing;

pub use algebra::{Efficiency, Lossiness, DEFAULT_BASE};
pub use guaranteed::{GuaranteedLevel, LevelError, Method, SpanningTree, Witness};
pub use network::{
    build_network, Network, NetworkBuilder, NetworkError, NetworkKind, NodeId, RawArc,
};
pub use routing::{Chain, RoutingError, TieBreak};
