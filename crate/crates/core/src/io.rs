//! Edge-list documents.
//!
//! One record per line: `tail,head,efficiency[,mode]` with mode `dir`
//! (default) or `undir`. A line holding a single label declares an isolated
//! node. The first record may be a header, recognised by a third field that
//! is not a number. Blank lines are ignored; LF and CRLF both work.

use std::fmt::Write as _;

use thiserror::Error;

use crate::network::{Network, NetworkBuilder, NetworkError, RawArc};

/// Number of decimals used when reporting efficiencies and lossiness.
pub const DECIMALS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub kind: ParseErrorKind,
}

pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut builder = NetworkBuilder::new();
    let mut first = true;
    for (k, raw_line) in text.lines().enumerate() {
        let line = k + 1;
        let record = raw_line.trim_end_matches('\r').trim();
        if record.is_empty() {
            continue;
        }
        let fields: Vec<&str> = record.split(',').map(str::trim).collect();
        let is_first = std::mem::replace(&mut first, false);
        if is_first && fields.len() >= 3 && fields[2].parse::<f64>().is_err() {
            continue;
        }
        let fail = |kind: ParseErrorKind| ParseError { line, kind };
        let syntax = |msg: String| fail(ParseErrorKind::Syntax(msg));

        match fields.as_slice() {
            [label] => {
                builder.add_node(label).map_err(|e| fail(e.into()))?;
            }
            [tail, head, eta, rest @ ..] if rest.len() <= 1 => {
                let efficiency: f64 = eta
                    .parse()
                    .map_err(|_| syntax(format!("efficiency {eta:?} is not a number")))?;
                let undirected = match rest.first().copied() {
                    None | Some("dir") => false,
                    Some("undir") => true,
                    Some(other) => {
                        return Err(syntax(format!(
                            "mode {other:?} must be \"dir\" or \"undir\""
                        )))
                    }
                };
                builder
                    .add_arc(RawArc {
                        tail: (*tail).to_owned(),
                        head: (*head).to_owned(),
                        efficiency,
                        undirected,
                    })
                    .map_err(|e| fail(e.into()))?;
            }
            _ => {
                return Err(syntax(format!(
                    "expected tail,head,efficiency[,mode], found {} fields",
                    fields.len()
                )))
            }
        }
    }
    Ok(builder.build())
}

/// Canonical edge list: header, arcs in network order, then isolated nodes.
/// Efficiencies use the shortest exact representation, so parsing the
/// output gives back an equal network.
pub fn render_network(net: &Network) -> String {
    let mut out = String::from("tail,head,efficiency,mode\n");
    let mut touched = vec![false; net.node_count()];
    for arc in net.arcs() {
        touched[arc.tail] = true;
        touched[arc.head] = true;
        let mode = if arc.undirected { "undir" } else { "dir" };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            net.label(arc.tail),
            net.label(arc.head),
            arc.efficiency,
            mode
        );
    }
    for (ix, _) in touched.iter().enumerate().filter(|(_, t)| !**t) {
        let _ = writeln!(out, "{}", net.label(ix));
    }
    out
}

/// Fixed 8-decimal rendering; exact halfway cases round to even.
pub fn format_fixed(value: f64) -> String {
    format!("{value:.DECIMALS$}")
}
