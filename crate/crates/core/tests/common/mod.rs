#![allow(dead_code)]

use qws::{Edge, Mode, Quad, WeightedGraph};
use rand::Rng;

/// Every connected labelled graph on `n` vertices with unit weights and
/// terminals (0, 1). Labelled enumeration covers every terminal placement.
pub fn connected_unit_graphs(n: usize) -> Vec<WeightedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| Edge::unit(u, v))
            .collect();
        if let Ok(g) = WeightedGraph::new(n, edges, (0, 1), Mode::Real) {
            out.push(g);
        }
    }
    out
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Quad {
    loop {
        let p = rng.gen_range(-5..=5);
        let q = rng.gen_range(1..=4);
        if p != 0 {
            return Quad::from_ratio(p, q);
        }
    }
}

/// Random connected real graph with rational weights, optional potentials
/// and distinct terminals.
pub fn random_graph<R: Rng>(rng: &mut R, min_n: usize, max_n: usize, density: f64) -> WeightedGraph {
    loop {
        let n = rng.gen_range(min_n..=max_n);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    edges.push(Edge::real(u, v, small_rational(rng)));
                }
            }
            if rng.gen_bool(0.2) {
                edges.push(Edge::real(u, u, small_rational(rng)));
            }
        }
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n);
        while b == a {
            b = rng.gen_range(0..n);
        }
        if let Ok(g) = WeightedGraph::new(n, edges, (a, b), Mode::Real) {
            return g;
        }
    }
}

/// Same vertex structure as `g` with every weight replaced by a random
/// rational.
pub fn reweighted<R: Rng>(rng: &mut R, g: &WeightedGraph) -> WeightedGraph {
    let edges = g.edges().iter().map(|e| Edge::real(e.u, e.v, small_rational(rng))).collect();
    WeightedGraph::new(g.n(), edges, g.terminals(), Mode::Real).expect("same support stays valid")
}

pub fn random_momentum<R: Rng>(rng: &mut R) -> qws::momentum::Momentum {
    qws::momentum::Momentum::new(rng.gen_range(-3.1..-0.04)).unwrap()
}
