//! Weighted two-terminal graphs and their compositions.
//!
//! A [`WeightedGraph`] is the finite part of a scattering setup: a connected
//! graph with Hermitian edge weights and two labelled terminals where the
//! semi-infinite leads attach. The leads themselves are never materialised.
//! Terminals may coincide, which models a graph hanging off a single vertex
//! of an infinite line.
//!
//! Diagonal entries (`u == v`) are real vertex potentials.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::{Field, Quad, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Real,
    Hermitian,
}

/// Edge `u → v` with weight `w`; the reverse direction carries `conj(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Scalar,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: Scalar) -> Self {
        Edge { u, v, w }
    }

    pub fn unit(u: usize, v: usize) -> Self {
        Edge { u, v, w: Scalar::one() }
    }

    pub fn real(u: usize, v: usize, w: Quad) -> Self {
        Edge { u, v, w: Scalar::real(w) }
    }

    pub fn is_diagonal(&self) -> bool {
        self.u == self.v
    }
}

/// Anything with a vertex count and an edge list: full graphs and the
/// vertex-deleted subgraphs used by the characteristic-polynomial code.
pub trait Adjacency {
    fn order(&self) -> usize;
    fn edge_list(&self) -> &[Edge];

    fn is_real(&self) -> bool {
        self.edge_list().iter().all(|e| e.w.is_real())
    }

    /// Weighted adjacency matrix `H` with `H[u][v] = w`, `H[v][u] = conj(w)`.
    fn matrix<F: Field>(&self) -> Vec<Vec<F>> {
        let n = self.order();
        let mut h = vec![vec![F::zero(); n]; n];
        for e in self.edge_list() {
            let w = F::from_scalar(&e.w);
            if e.is_diagonal() {
                h[e.u][e.u] = w;
            } else {
                h[e.v][e.u] = w.conj();
                h[e.u][e.v] = w;
            }
        }
        h
    }

    /// Oriented neighbour lists `u → (v, H[u][v])`, excluding loops.
    fn neighbors(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut out = vec![Vec::new(); self.order()];
        for e in self.edge_list() {
            if e.is_diagonal() {
                continue;
            }
            out[e.u].push((e.v, e.w.clone()));
            out[e.v].push((e.u, e.w.conj()));
        }
        for list in &mut out {
            list.sort_by_key(|(v, _)| *v);
        }
        out
    }

    /// Vertex potential `H[v][v]`.
    fn potential(&self, v: usize) -> Quad {
        self.edge_list()
            .iter()
            .find(|e| e.u == v && e.v == v)
            .map(|e| e.w.re.clone())
            .unwrap_or_else(<Quad as Field>::zero)
    }

    /// Induced subgraph on the vertices not in `removed`, reindexed in
    /// increasing order.
    fn delete_vertices(&self, removed: &[usize]) -> Result<Subgraph> {
        let n = self.order();
        if let Some(&bad) = removed.iter().find(|&&v| v >= n) {
            return Err(Error::Validation(format!("vertex {bad} out of range (n = {n})")));
        }
        let gone: HashSet<usize> = removed.iter().copied().collect();
        let keep: Vec<usize> = (0..n).filter(|v| !gone.contains(v)).collect();
        Ok(self.induced(&keep))
    }

    /// Induced subgraph on `keep` (in the given order).
    fn induced(&self, keep: &[usize]) -> Subgraph {
        let mut new_index = vec![usize::MAX; self.order()];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let edges = self
            .edge_list()
            .iter()
            .filter(|e| new_index[e.u] != usize::MAX && new_index[e.v] != usize::MAX)
            .map(|e| Edge { u: new_index[e.u], v: new_index[e.v], w: e.w.clone() })
            .collect();
        Subgraph { n: keep.len(), edges, index_map: keep.to_vec() }
    }
}

/// A vertex-induced subgraph without terminals. May be empty or disconnected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub n: usize,
    pub edges: Vec<Edge>,
    /// `index_map[new] = old` vertex index in the parent graph.
    pub index_map: Vec<usize>,
}

impl Adjacency for Subgraph {
    fn order(&self) -> usize {
        self.n
    }
    fn edge_list(&self) -> &[Edge] {
        &self.edges
    }
}

/// Finite scattering graph with two (possibly coincident) terminals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    terminals: (usize, usize),
    mode: Mode,
}

impl Adjacency for WeightedGraph {
    fn order(&self) -> usize {
        self.n
    }
    fn edge_list(&self) -> &[Edge] {
        &self.edges
    }
}

impl WeightedGraph {
    /// Validates and builds a graph.
    pub fn new(n: usize, edges: Vec<Edge>, terminals: (usize, usize), mode: Mode) -> Result<Self> {
        let g = WeightedGraph { n, edges, terminals, mode };
        g.validate()?;
        Ok(g)
    }

    /// Real graph from `(u, v, weight)` triples with rational weights given as
    /// integers.
    pub fn from_int_edges(n: usize, edges: &[(usize, usize, i64)], terminals: (usize, usize)) -> Result<Self> {
        let edges = edges.iter().map(|&(u, v, w)| Edge::real(u, v, Quad::from(w))).collect();
        Self::new(n, edges, terminals, Mode::Real)
    }

    /// Unit-weight path with `len` edges; terminals at the two ends. `len = 0`
    /// is the single vertex with coincident terminals.
    pub fn path(len: usize) -> Self {
        let edges = (0..len).map(|i| Edge::unit(i, i + 1)).collect();
        WeightedGraph { n: len + 1, edges, terminals: (0, len), mode: Mode::Real }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn terminals(&self) -> (usize, usize) {
        self.terminals
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn has_distinct_terminals(&self) -> bool {
        self.terminals.0 != self.terminals.1
    }

    /// Same graph with a different terminal pair.
    pub fn with_terminals(&self, terminals: (usize, usize)) -> Result<Self> {
        Self::new(self.n, self.edges.clone(), terminals, self.mode)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if self.n == 0 {
            return bad("graph must have at least one vertex".into());
        }
        let (t1, t2) = self.terminals;
        if t1 >= self.n || t2 >= self.n {
            return bad(format!("terminal out of range (n = {})", self.n));
        }
        let mut seen = HashSet::new();
        let mut radicand: Option<u32> = None;
        for e in &self.edges {
            if e.u >= self.n || e.v >= self.n {
                return bad(format!("edge ({}, {}) out of range (n = {})", e.u, e.v, self.n));
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !seen.insert(key) {
                return bad(format!("duplicate edge ({}, {})", key.0, key.1));
            }
            if e.is_diagonal() && !e.w.is_real() {
                return bad(format!("vertex potential at {} must be real", e.u));
            }
            if !e.is_diagonal() && e.w.is_zero() {
                return bad(format!("edge ({}, {}) has zero weight", e.u, e.v));
            }
            if self.mode == Mode::Real && !e.w.is_real() {
                return bad(format!("complex weight on edge ({}, {}) in real mode", e.u, e.v));
            }
            if let Some(d) = e.w.radicand() {
                match radicand {
                    Some(r) if r != d => return Err(Error::MixedRadicals(r, d)),
                    _ => radicand = Some(d),
                }
            }
        }
        if !self.is_connected() {
            return bad("graph is disconnected".into());
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let nb = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &nb[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Radicand shared by the weights, if any are irrational.
    pub fn radicand(&self) -> Option<u32> {
        self.edges.iter().find_map(|e| e.w.radicand())
    }

    /// Parallel composition: all terminal-1 vertices are identified, all
    /// terminal-2 vertices are identified, and direct terminal-terminal
    /// weights (and terminal potentials) are summed.
    ///
    /// Vertex 0 and 1 of the result are the shared terminals; the interiors
    /// follow in input order.
    pub fn parallel_compose(gs: &[WeightedGraph]) -> Result<WeightedGraph> {
        let first = gs
            .first()
            .ok_or_else(|| Error::Validation("parallel composition of an empty list".into()))?;
        let mode = first.mode;
        let mut edges = Vec::new();
        let mut direct = Scalar::zero();
        let mut pot = [<Quad as Field>::zero(), <Quad as Field>::zero()];
        let mut next = 2usize;
        for g in gs {
            if !g.has_distinct_terminals() {
                return Err(Error::Validation(
                    "graphs with coincident terminals cannot be composed in parallel".into(),
                ));
            }
            if g.mode != mode {
                return Err(Error::Validation("mode mismatch in parallel composition".into()));
            }
            let (t1, t2) = g.terminals;
            let mut map = vec![0usize; g.n];
            for (v, slot) in map.iter_mut().enumerate() {
                *slot = if v == t1 {
                    0
                } else if v == t2 {
                    1
                } else {
                    next += 1;
                    next - 1
                };
            }
            for e in &g.edges {
                let (u, v) = (map[e.u], map[e.v]);
                match (u, v) {
                    (0, 0) | (1, 1) => pot[u] = pot[u].clone() + e.w.re.clone(),
                    (0, 1) => direct = direct + e.w.clone(),
                    (1, 0) => direct = direct + e.w.conj(),
                    _ => edges.push(Edge { u, v, w: e.w.clone() }),
                }
            }
        }
        let mut head = Vec::new();
        for (t, p) in pot.into_iter().enumerate() {
            if !p.is_zero() {
                head.push(Edge::real(t, t, p));
            }
        }
        if !direct.is_zero() {
            head.push(Edge { u: 0, v: 1, w: direct });
        }
        head.extend(edges);
        WeightedGraph::new(next, head, (0, 1), mode)
    }

    /// Series composition: terminal 2 of `g1` is glued to terminal 1 of `g2`.
    ///
    /// Result vertices: 0 is terminal 1 of `g1`, 1 the glued vertex, 2 terminal
    /// 2 of `g2`, then the remaining vertices of `g1` and `g2` in order.
    pub fn series_compose(g1: &WeightedGraph, g2: &WeightedGraph) -> Result<WeightedGraph> {
        if g1.mode != g2.mode {
            return Err(Error::Validation("mode mismatch in series composition".into()));
        }
        if !g1.has_distinct_terminals() || !g2.has_distinct_terminals() {
            return Err(Error::Validation("series composition needs distinct terminals".into()));
        }
        let mut next = 3usize;
        let mut relabel = |g: &WeightedGraph, a: usize, b: usize| -> Vec<usize> {
            (0..g.n)
                .map(|v| {
                    if v == g.terminals.0 {
                        a
                    } else if v == g.terminals.1 {
                        b
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect()
        };
        let m1 = relabel(g1, 0, 1);
        let m2 = relabel(g2, 1, 2);
        let mut glued = <Quad as Field>::zero();
        let mut edges = Vec::new();
        for (g, m) in [(g1, &m1), (g2, &m2)] {
            for e in &g.edges {
                let (u, v) = (m[e.u], m[e.v]);
                if u == 1 && v == 1 {
                    glued = glued + e.w.re.clone();
                } else {
                    edges.push(Edge { u, v, w: e.w.clone() });
                }
            }
        }
        if !glued.is_zero() {
            edges.insert(0, Edge::real(1, 1, glued));
        }
        WeightedGraph::new(next, edges, (0, 2), g1.mode)
    }

    /// Extends the graph one site up each lead: two new pendant vertices
    /// (`n` and `n + 1`) become the terminals.
    pub fn extend_up_leads(&self) -> WeightedGraph {
        let (t1, t2) = self.terminals;
        let mut edges = self.edges.clone();
        edges.push(Edge::unit(t1, self.n));
        edges.push(Edge::unit(t2, self.n + 1));
        WeightedGraph { n: self.n + 2, edges, terminals: (self.n, self.n + 1), mode: self.mode }
    }

    /// Extends a subset of leads (`extend[j]` for terminal `j`) by one site.
    pub fn extend_leads(&self, which: [bool; 2]) -> WeightedGraph {
        let mut g = self.clone();
        let mut terms = [self.terminals.0, self.terminals.1];
        for (j, ext) in which.iter().enumerate() {
            if *ext {
                g.edges.push(Edge::unit(terms[j], g.n));
                terms[j] = g.n;
                g.n += 1;
            }
        }
        g.terminals = (terms[0], terms[1]);
        g
    }

    /// Stable identifier derived from the canonical JSON form.
    pub fn graph_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let text = crate::json::graph_to_string(self);
        let digest = Sha256::digest(text.as_bytes());
        hex::encode(&digest[..8])
    }

    /// Count multiset expanded into repeated copies, for parallel composition.
    pub fn parallel_from_counts(blocks: &BTreeMap<String, (WeightedGraph, usize)>) -> Result<WeightedGraph> {
        let mut gs = Vec::new();
        for (g, c) in blocks.values() {
            for _ in 0..*c {
                gs.push(g.clone());
            }
        }
        Self::parallel_compose(&gs)
    }
}
