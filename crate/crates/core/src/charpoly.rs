//! Characteristic polynomials `φ_G(y) = det(yI − H)` and relatives.
//!
//! The production path is the division-free Berkowitz iteration, exact over
//! any [`Field`]. Two independent routes exist for cross-checking: the
//! Schwenk vertex recursion ([`charpoly_schwenk`]) and explicit enumeration of
//! simple paths ([`path_sum_poly`]).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, WeightedGraph};
use crate::poly::Poly;
use crate::scalar::{Field, Quad, Scalar};

/// Default vertex-count ceiling for the enumeration-based cross-checks.
pub const DEFAULT_ENUM_LIMIT: usize = 14;

/// Coefficients of `det(yI − M)` in ascending order, by Berkowitz's
/// algorithm. No divisions, so the result is exact for exact fields.
pub fn berkowitz<F: Field>(m: &[Vec<F>]) -> Poly<F> {
    let n = m.len();
    // descending coefficients of the leading r×r block
    let mut v: Vec<F> = vec![F::one()];
    for r in 0..n {
        // t = [1, −a_rr, −R·C, −R·M·C, …, −R·M^{r−1}·C]
        let mut t = Vec::with_capacity(r + 2);
        t.push(F::one());
        t.push(-m[r][r].clone());
        let mut x: Vec<F> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(F::zero(), |acc, j| acc + m[r][j].clone() * x[j].clone());
            t.push(-rc);
            x = (0..r)
                .map(|i| (0..r).fold(F::zero(), |acc, j| acc + m[i][j].clone() * x[j].clone()))
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = F::zero();
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    acc = acc + t[i - j].clone() * vj.clone();
                }
            }
            next.push(acc);
        }
        v = next;
    }
    v.reverse();
    Poly::new(v)
}

/// Exact characteristic polynomial of a graph or subgraph. The empty graph
/// gives the constant 1.
pub fn charpoly<G: Adjacency + ?Sized>(g: &G) -> Poly<Quad> {
    if g.is_real() {
        berkowitz(&g.matrix::<Quad>())
    } else {
        let p = berkowitz(&g.matrix::<Scalar>());
        debug_assert!(p.coeffs().iter().all(|c| c.im.is_zero()));
        p.map(|c| c.re.clone())
    }
}

/// Characteristic polynomial of `g` with the vertices in `removed` deleted.
pub fn charpoly_deleted<G: Adjacency + ?Sized>(g: &G, removed: &[usize]) -> Result<Poly<Quad>> {
    Ok(charpoly(&g.delete_vertices(removed)?))
}

/// Entry `(u, v)` of `adj(yI − M)` as a polynomial in `y`.
///
/// Uses `adj(yI − M) = Σ_m y^m Σ_{i>m} a_i M^{i−m−1}` where `a_i` are the
/// characteristic polynomial coefficients.
pub fn adjugate_entry<F: Field>(m: &[Vec<F>], u: usize, v: usize) -> Poly<F> {
    let n = m.len();
    let a = berkowitz(m);
    // powers[j] = (M^j)_{u v}
    let mut x: Vec<F> = (0..n).map(|i| if i == v { F::one() } else { F::zero() }).collect();
    let mut powers = Vec::with_capacity(n);
    for _ in 0..n {
        powers.push(x[u].clone());
        x = (0..n)
            .map(|i| (0..n).fold(F::zero(), |acc, j| acc + m[i][j].clone() * x[j].clone()))
            .collect();
    }
    let coeffs = (0..n)
        .map(|deg| {
            ((deg + 1)..=n).fold(F::zero(), |acc, i| acc + a.coeff(i) * powers[i - deg - 1].clone())
        })
        .collect();
    Poly::new(coeffs)
}

/// The signed path-sum polynomial `Σ_P ω(P) φ_{G∖P}` between `u ≠ v`,
/// computed as the adjugate entry of `yI − H` (no enumeration).
pub fn path_sum_cofactor<G: Adjacency + ?Sized>(g: &G, u: usize, v: usize) -> Result<Poly<Quad>> {
    if u == v {
        return Err(Error::Validation("path sum needs two distinct vertices".into()));
    }
    if !g.is_real() {
        return Err(Error::Unsupported("path-sum sign is only defined for real weights".into()));
    }
    Ok(adjugate_entry(&g.matrix::<Quad>(), u, v))
}

/// Path-sum polynomial by explicit depth-first enumeration of simple
/// `u`–`v` paths. Cross-check for [`path_sum_cofactor`].
pub fn path_sum_poly(g: &WeightedGraph, u: usize, v: usize, limit: usize) -> Result<Poly<Quad>> {
    if u == v {
        return Err(Error::Validation("path sum needs two distinct vertices".into()));
    }
    if !g.is_real() {
        return Err(Error::Unsupported("path-sum sign is only defined for real weights".into()));
    }
    if g.n() > limit {
        return Err(Error::ResourceLimit(format!(
            "path enumeration limited to {limit} vertices (graph has {})",
            g.n()
        )));
    }
    let nb = g.neighbors();
    let mut total = Poly::zero();
    let mut stack = vec![u];
    let mut on_path = vec![false; g.n()];
    on_path[u] = true;
    fn dfs(
        g: &WeightedGraph,
        nb: &[Vec<(usize, Scalar)>],
        target: usize,
        stack: &mut Vec<usize>,
        on_path: &mut [bool],
        weight: Quad,
        total: &mut Poly<Quad>,
    ) {
        let end = *stack.last().unwrap();
        if end == target {
            let rest = g.delete_vertices(stack).expect("path vertices are in range");
            *total = &*total + &charpoly(&rest).scale(&weight);
            return;
        }
        for (next, w) in &nb[end] {
            if on_path[*next] {
                continue;
            }
            on_path[*next] = true;
            stack.push(*next);
            dfs(g, nb, target, stack, on_path, weight.clone() * w.re.clone(), total);
            stack.pop();
            on_path[*next] = false;
        }
    }
    dfs(g, &nb, v, &mut stack, &mut on_path, Quad::from(1), &mut total);
    Ok(total)
}

/// Characteristic polynomial by the Hermitian Schwenk recursion expanded at
/// `v`, then recursively at the lowest remaining vertex of each deleted part:
///
/// `φ_S = (y − w_vv) φ_{S∖v} − Σ_{u∼v} |ω(u,v)|² φ_{S∖u∖v} − 2 Σ_{C∋v} Re ω(C) φ_{S∖C}`.
///
/// Entirely independent of the determinant code.
pub fn charpoly_schwenk(g: &WeightedGraph, v: usize, limit: usize) -> Result<Poly<Quad>> {
    let n = g.n();
    if v >= n {
        return Err(Error::Validation(format!("vertex {v} out of range")));
    }
    if n > limit || n > 63 {
        return Err(Error::ResourceLimit(format!("Schwenk recursion limited to {limit} vertices")));
    }
    let mut s = Schwenk { h: g.matrix::<Scalar>(), memo: HashMap::new(), budget: 5_000_000 };
    let full = (1u64 << n) - 1;
    let p = s.phi(full, Some(v))?;
    Ok(p.map(|c| c.re.clone()))
}

struct Schwenk {
    h: Vec<Vec<Scalar>>,
    memo: HashMap<u64, Poly<Scalar>>,
    budget: u64,
}

impl Schwenk {
    fn phi(&mut self, set: u64, at: Option<usize>) -> Result<Poly<Scalar>> {
        if set == 0 {
            return Ok(Poly::one());
        }
        if at.is_none() {
            if let Some(p) = self.memo.get(&set) {
                return Ok(p.clone());
            }
        }
        let v = at.unwrap_or(set.trailing_zeros() as usize);
        let rest = set & !(1 << v);
        let mut out = &Poly::linear_root(self.h[v][v].clone()) * &self.phi(rest, None)?;
        for u in members(rest) {
            let w = self.h[v][u].clone();
            if w.is_zero() {
                continue;
            }
            let sub = self.phi(rest & !(1 << u), None)?;
            out = &out - &sub.scale(&w.norm_sqr().into());
        }
        for (verts, weight) in self.cycles_through(v, set)? {
            let sub = self.phi(set & !verts, None)?;
            let two_re = Scalar::real(weight.re * Quad::from(2));
            out = &out - &sub.scale(&two_re);
        }
        self.memo.insert(set, out.clone());
        Ok(out)
    }

    /// Simple cycles of length ≥ 3 through `v` within `set`, each undirected
    /// cycle once, as (vertex mask, oriented weight product).
    fn cycles_through(&mut self, v: usize, set: u64) -> Result<Vec<(u64, Scalar)>> {
        let mut out = Vec::new();
        let mut path = vec![v];
        self.extend(v, set, 1 << v, &mut path, Scalar::one(), &mut out)?;
        Ok(out)
    }

    fn extend(
        &mut self,
        v: usize,
        set: u64,
        used: u64,
        path: &mut Vec<usize>,
        weight: Scalar,
        out: &mut Vec<(u64, Scalar)>,
    ) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::ResourceLimit("cycle enumeration budget exhausted".into()));
        }
        self.budget -= 1;
        let end = *path.last().unwrap();
        if path.len() >= 3 && path[1] < end && !self.h[end][v].is_zero() {
            out.push((used, weight.clone() * self.h[end][v].clone()));
        }
        for next in members(set & !used) {
            let w = self.h[end][next].clone();
            if w.is_zero() {
                continue;
            }
            path.push(next);
            self.extend(v, set, used | (1 << next), path, weight.clone() * w, out)?;
            path.pop();
        }
        Ok(())
    }
}

fn members(set: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set & (1 << i) != 0)
}

/// `φ_G`, `φ_{G∖1}`, `φ_{G∖2}`, `φ_{G∖1∖2}` for the terminals of `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminalPolys {
    pub phi: Poly<Quad>,
    pub phi1: Poly<Quad>,
    pub phi2: Poly<Quad>,
    pub phi12: Poly<Quad>,
}

impl TerminalPolys {
    pub fn of(g: &WeightedGraph) -> Result<Self> {
        let (t1, t2) = g.terminals();
        if t1 == t2 {
            return Err(Error::Validation("terminal polynomials need distinct terminals".into()));
        }
        Ok(TerminalPolys {
            phi: charpoly(g),
            phi1: charpoly_deleted(g, &[t1])?,
            phi2: charpoly_deleted(g, &[t2])?,
            phi12: charpoly_deleted(g, &[t1, t2])?,
        })
    }

    /// `φ_{G∖1} φ_{G∖2} − φ_G φ_{G∖1∖2}`, the square of the path sum for real
    /// graphs and `|resolvent entry|² φ_G²`-like in general.
    pub fn transmission_poly(&self) -> Poly<Quad> {
        &(&self.phi1 * &self.phi2) - &(&self.phi * &self.phi12)
    }
}
