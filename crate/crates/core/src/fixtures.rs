//! Bundled example networks.

use rand::Rng;

use crate::network::{build_network, Network, NetworkBuilder, RawArc};

/// Edge list of the six-node mixed energy network used as the reference
/// example: the best a-to-z chain is a,b,c,d,z with efficiency
/// 0.99 * 0.98 * 0.97 * 0.99 = 0.93168306, and d and e tie at 0.941094
/// once c is settled.
pub const FIG1_REPLICA_CSV: &str = "\
tail,head,efficiency,mode
a,b,0.99,dir
b,c,0.98,dir
c,d,0.97,dir
c,e,0.97,dir
d,e,0.99,undir
d,z,0.99,dir
e,z,0.97,dir
";

pub fn fig1_replica_arcs() -> Vec<RawArc> {
    vec![
        RawArc::directed("a", "b", 0.99),
        RawArc::directed("b", "c", 0.98),
        RawArc::directed("c", "d", 0.97),
        RawArc::directed("c", "e", 0.97),
        RawArc::undirected("d", "e", 0.99),
        RawArc::directed("d", "z", 0.99),
        RawArc::directed("e", "z", 0.97),
    ]
}

pub fn fig1_replica() -> Network {
    build_network(fig1_replica_arcs()).expect("replica arcs are valid")
}

/// Uniform efficiency in `(0, 1]`.
pub fn random_efficiency<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// A random network on `n` nodes labelled `n0, n1, ...`. Each unordered pair
/// is joined with probability `density`, as a one-way arc in either
/// direction, two opposite arcs with independent efficiencies, or an
/// undirected link.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Network {
    let mut builder = NetworkBuilder::new();
    for i in 0..n {
        builder.add_node(&format!("n{i}")).expect("valid label");
    }
    for i in 0..n {
        for j in i + 1..n {
            if !rng.gen_bool(density) {
                continue;
            }
            let (a, b) = (format!("n{i}"), format!("n{j}"));
            let arcs = match rng.gen_range(0..4) {
                0 => vec![RawArc::directed(a, b, random_efficiency(rng))],
                1 => vec![RawArc::directed(b, a, random_efficiency(rng))],
                2 => vec![
                    RawArc::directed(a.clone(), b.clone(), random_efficiency(rng)),
                    RawArc::directed(b, a, random_efficiency(rng)),
                ],
                _ => vec![RawArc::undirected(a, b, random_efficiency(rng))],
            };
            for arc in arcs {
                builder.add_arc(arc).expect("fresh pair");
            }
        }
    }
    builder.build()
}

/// A random connected network made only of undirected links: a random
/// spanning tree plus every other pair with probability `density`.
pub fn random_connected_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Network {
    let mut builder = NetworkBuilder::new();
    if n > 0 {
        builder.add_node("n0").expect("valid label");
    }
    let mut joined = vec![vec![false; n]; n];
    for i in 1..n {
        let j = rng.gen_range(0..i);
        joined[i][j] = true;
        joined[j][i] = true;
        builder
            .add_arc(RawArc::undirected(
                format!("n{j}"),
                format!("n{i}"),
                random_efficiency(rng),
            ))
            .expect("fresh pair");
    }
    for i in 0..n {
        for j in i + 1..n {
            if !joined[i][j] && rng.gen_bool(density) {
                builder
                    .add_arc(RawArc::undirected(
                        format!("n{i}"),
                        format!("n{j}"),
                        random_efficiency(rng),
                    ))
                    .expect("fresh pair");
            }
        }
    }
    builder.build()
}

/// A large sparse directed network for timing: a backbone path
/// `n0 -> n1 -> ...` plus random extra arcs, `arcs` in total.
pub fn random_large_network<R: Rng + ?Sized>(rng: &mut R, n: usize, arcs: usize) -> Network {
    let label = |i: usize| format!("n{i}");
    let mut builder = NetworkBuilder::new();
    let mut added = 0;
    for i in 1..n {
        if added == arcs {
            break;
        }
        builder
            .add_arc(RawArc::directed(
                label(i - 1),
                label(i),
                random_efficiency(rng),
            ))
            .expect("fresh pair");
        added += 1;
    }
    while added < arcs {
        let (t, h) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if builder
            .add_arc(RawArc::directed(label(t), label(h), random_efficiency(rng)))
            .is_ok()
        {
            added += 1;
        }
    }
    builder.build()
}
