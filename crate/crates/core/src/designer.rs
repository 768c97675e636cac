//! Vector-sum search over a library of two-terminal blocks.
//!
//! Each block contributes the point `(μ₁, μ₂, ν)` at the query momentum and
//! parallel composition adds points, so finding a perfect-transmission
//! composite is a bounded integer search for sums on the hyperbola. The
//! search splits the blocks in two halves, enumerates count vectors on each
//! side and joins them on the `μ` sums.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::admittance::{
    check_pr, check_pt, derivative_values, effective_length_from_values, hyperbola_param, num_sum,
    AdmittancePoint, AdmittanceTriple, EffectiveLength, Num, PtResult, PtStatus, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::json::{graph_to_value, read_graph, SCHEMA};
use crate::momentum::Momentum;
use crate::scalar::{Field, Quad};
use crate::scattering::{sign_calibration, smatrix_oracle, SMatrix};

/// Default bound on the number of enumerated half-partials.
pub const DEFAULT_PARTIAL_CAP: usize = 2_000_000;

/// Certificate threshold on `|S₁₂|` or `|S₁₁|`.
pub const CERTIFICATE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Block {
    pub name: String,
    /// `None` for synthetic blocks given only by their admittance.
    pub graph: Option<WeightedGraph>,
    pub triple: AdmittanceTriple,
    pub point: AdmittancePoint,
    /// `(μ₁′, μ₂′, ν′)` at the query point.
    pub derivatives: Option<[Num; 3]>,
}

impl Block {
    pub fn values(&self) -> [Num; 3] {
        self.point.values.clone().expect("library blocks are finite")
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        match self.point.exact_values() {
            Some([a, b, _]) => a == b,
            None => {
                let v = self.point.float_values().unwrap();
                (v[0] - v[1]).abs() < tol
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockLibrary {
    pub k: Momentum,
    pub blocks: Vec<Block>,
    /// Blocks with a pole at the query point, excluded from the search.
    pub quarantined: Vec<(String, AdmittancePoint)>,
    pub warnings: Vec<String>,
    /// Files that failed to load, when partial loading was allowed.
    pub failures: Vec<(PathBuf, String)>,
}

impl BlockLibrary {
    fn empty(k: &Momentum) -> Self {
        BlockLibrary { k: k.clone(), blocks: Vec::new(), quarantined: Vec::new(), warnings: Vec::new(), failures: Vec::new() }
    }

    /// Library from in-memory graphs.
    pub fn from_graphs(k: &Momentum, graphs: Vec<(String, WeightedGraph)>) -> Result<Self> {
        let mut lib = Self::empty(k);
        for (name, g) in graphs {
            let t = AdmittanceTriple::of(&g)?;
            lib.push(name, Some(g), t);
        }
        lib.finish()
    }

    /// Library of synthetic triples (no graphs, so no oracle certificates).
    pub fn from_triples(k: &Momentum, triples: Vec<(String, AdmittanceTriple)>) -> Result<Self> {
        let mut lib = Self::empty(k);
        for (name, t) in triples {
            lib.push(name, None, t);
        }
        lib.finish()
    }

    fn push(&mut self, name: String, graph: Option<WeightedGraph>, triple: AdmittanceTriple) {
        let mut unique = name.clone();
        let mut i = 2;
        while self.blocks.iter().any(|b| b.name == unique) || self.quarantined.iter().any(|(n, _)| *n == unique) {
            unique = format!("{name}#{i}");
            i += 1;
        }
        if unique != name {
            self.warnings.push(format!("duplicate block name {name:?} renamed to {unique:?}"));
        }
        let point = triple.at(&self.k);
        if !point.is_finite() {
            self.warnings.push(format!("block {unique:?} has a pole at y = {} and is quarantined", point.y));
            self.quarantined.push((unique, point));
            return;
        }
        let derivatives = derivative_values(&triple, &self.k);
        self.blocks.push(Block { name: unique, graph, triple, point, derivatives });
    }

    fn finish(self) -> Result<Self> {
        if self.blocks.is_empty() && self.quarantined.is_empty() {
            return Err(Error::Validation("empty block library".into()));
        }
        Ok(self)
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    /// Common quadratic field of the query point and all block values, or
    /// `None` when some value is a float or two fields clash.
    pub fn exact_field(&self) -> Option<Option<u32>> {
        let mut field = self.k.exact_y()?.radicand();
        for b in &self.blocks {
            for v in b.point.exact_values()? {
                match (field, v.radicand()) {
                    (Some(a), Some(r)) if a != r => return None,
                    (None, Some(r)) => field = Some(r),
                    _ => {}
                }
            }
        }
        Some(field)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "k": self.k.k(),
            "k_label": self.k.label(),
            "blocks": self.blocks.iter().map(|b| json!({
                "name": b.name,
                "point": b.point.to_json(),
                "synthetic": b.graph.is_none(),
            })).collect::<Vec<_>>(),
            "quarantined": self.quarantined.iter().map(|(n, p)| json!({"name": n, "point": p.to_json()})).collect::<Vec<_>>(),
            "warnings": self.warnings,
            "failures": self.failures.iter().map(|(p, e)| json!({"path": p.display().to_string(), "error": e})).collect::<Vec<_>>(),
        })
    }
}

/// Loads blocks from graph files, directories (a `manifest.json` inside, or
/// every `*.json` in name order) and manifest files
/// `{"blocks": [{"name": ..., "path": ...}]}`.
pub fn load_library(paths: &[PathBuf], k: &Momentum, allow_partial: bool) -> Result<BlockLibrary> {
    let mut entries: Vec<(String, PathBuf)> = Vec::new();
    for p in paths {
        collect_entries(p, &mut entries)?;
    }
    let mut lib = BlockLibrary::empty(k);
    for (name, path) in entries {
        let loaded = read_graph(&path).and_then(|g| AdmittanceTriple::of(&g).map(|t| (g, t)));
        match loaded {
            Ok((g, t)) => lib.push(name, Some(g), t),
            Err(e) if allow_partial => lib.failures.push((path, e.to_string())),
            Err(e) => return Err(Error::Validation(format!("{}: {e}", path.display()))),
        }
    }
    lib.finish()
}

fn collect_entries(p: &Path, out: &mut Vec<(String, PathBuf)>) -> Result<()> {
    if p.is_dir() {
        let manifest = p.join("manifest.json");
        if manifest.is_file() {
            return collect_entries(&manifest, out);
        }
        let mut files: Vec<PathBuf> = std::fs::read_dir(p)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|f| f.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        for f in files {
            out.push((stem(&f), f));
        }
        return Ok(());
    }
    let bytes = std::fs::read(p)?;
    let v: Value = serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    match v.get("blocks").and_then(Value::as_array) {
        Some(blocks) => {
            let base = p.parent().unwrap_or(Path::new("."));
            for b in blocks {
                let rel = b
                    .get("path")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse(format!("{}: manifest entry without path", p.display())))?;
                let path = base.join(rel);
                let name = b.get("name").and_then(Value::as_str).map_or_else(|| stem(&path), str::to_string);
                out.push((name, path));
            }
        }
        None => out.push((stem(p), p.to_path_buf())),
    }
    Ok(())
}

fn stem(p: &Path) -> String {
    p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

// ---------------------------------------------------------------------------
// Search

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionQuery {
    pub target_theta: Option<f64>,
    pub max_total_blocks: usize,
    pub max_per_block: usize,
    pub tol: f64,
    pub angle_tol: f64,
    pub require_symmetric: bool,
    pub partial_cap: usize,
    pub parallel: bool,
    /// Compose the graph and run the oracle for each result.
    pub verify: bool,
}

impl Default for CompositionQuery {
    fn default() -> Self {
        CompositionQuery {
            target_theta: None,
            max_total_blocks: 16,
            max_per_block: 16,
            tol: DEFAULT_TOL,
            angle_tol: 1e-6,
            require_symmetric: true,
            partial_cap: DEFAULT_PARTIAL_CAP,
            parallel: true,
            verify: true,
        }
    }
}

impl CompositionQuery {
    fn validate(&self) -> Result<()> {
        if self.max_total_blocks == 0 || self.max_per_block == 0 {
            return Err(Error::Validation("search bounds must be positive".into()));
        }
        if !(self.tol > 0.0) || !(self.angle_tol > 0.0) {
            return Err(Error::Validation("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CompositionResult {
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    pub achieved: AdmittancePoint,
    pub pt: PtResult,
    pub effective_length: Option<EffectiveLength>,
    pub composed: Option<WeightedGraph>,
    pub certificate: Option<SMatrix>,
    /// Whether the oracle confirms the claimed status.
    pub certificate_valid: Option<bool>,
}

impl CompositionResult {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "counts": self.counts,
            "total": self.total,
            "achieved": self.achieved.to_json(),
            "pt": self.pt.to_json(),
            "effective_length": self.effective_length.as_ref().map(|l| json!({
                "value": l.value,
                "exact": l.exact.as_ref().map(crate::json::quad_to_json),
            })),
            "composed": self.composed.as_ref().map(graph_to_value),
            "certificate": self.certificate.as_ref().map(SMatrix::to_json),
            "certificate_valid": self.certificate_valid,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub results: Vec<CompositionResult>,
    /// The partial cap was hit; results cover only part of the space.
    pub truncated: bool,
    pub partials: usize,
    pub exact: bool,
}

/// Count vectors per half, with their sums.
struct Half<V> {
    counts: Vec<Vec<u16>>,
    totals: Vec<usize>,
    sums: Vec<[V; 3]>,
}

fn enumerate_half<V: Clone>(
    values: &[[V; 3]],
    zero: &V,
    add: &impl Fn(&V, &V, usize) -> V,
    q: &CompositionQuery,
    budget: &mut usize,
) -> (Half<V>, bool) {
    let mut half = Half { counts: Vec::new(), totals: Vec::new(), sums: Vec::new() };
    let mut cur = vec![0u16; values.len()];
    let start = [zero.clone(), zero.clone(), zero.clone()];
    let truncated = !rec(values, 0, &mut cur, 0, &start, add, q, budget, &mut half);
    (half, truncated)
}

#[allow(clippy::too_many_arguments)]
fn rec<V: Clone>(
    values: &[[V; 3]],
    i: usize,
    cur: &mut Vec<u16>,
    total: usize,
    sum: &[V; 3],
    add: &impl Fn(&V, &V, usize) -> V,
    q: &CompositionQuery,
    budget: &mut usize,
    out: &mut Half<V>,
) -> bool {
    if i == values.len() {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        out.counts.push(cur.clone());
        out.totals.push(total);
        out.sums.push(sum.clone());
        return true;
    }
    let max_c = q.max_per_block.min(q.max_total_blocks - total);
    for c in 0..=max_c {
        cur[i] = c as u16;
        let next = [0, 1, 2].map(|j| add(&sum[j], &values[i][j], c));
        if !rec(values, i + 1, cur, total + c, &next, add, q, budget, out) {
            cur[i] = 0;
            return false;
        }
    }
    cur[i] = 0;
    true
}

/// Finds count vectors whose summed point is a perfect-transmission point
/// (with the requested phase), sorted by total and then lexicographically.
pub fn search(lib: &BlockLibrary, q: &CompositionQuery) -> Result<SearchOutcome> {
    q.validate()?;
    let usable: Vec<&Block> = lib.blocks.iter().filter(|b| !q.require_symmetric || b.is_symmetric(q.tol)).collect();
    if usable.is_empty() {
        return Err(Error::Validation("no usable blocks after pole quarantine and symmetry filter".into()));
    }
    let split = usable.len().div_ceil(2);
    let mut budget = q.partial_cap;
    let field = lib.exact_field();
    let (candidates, truncated) = match field {
        Some(f) => {
            let vals: Vec<[Quad; 3]> = usable.iter().map(|b| b.point.exact_values().unwrap()).collect();
            let add = |a: &Quad, b: &Quad, c: usize| a.clone() + b.clone() * Quad::from(c as i64);
            let zero = Quad::from(0);
            let (left, t1) = enumerate_half(&vals[..split], &zero, &add, q, &mut budget);
            let (right, t2) = enumerate_half(&vals[split..], &zero, &add, q, &mut budget);
            (join_exact(&left, &right, &lib.k.exact_y().unwrap(), f, q), t1 || t2)
        }
        None => {
            let vals: Vec<[f64; 3]> = usable.iter().map(|b| b.point.float_values().unwrap()).collect();
            let add = |a: &f64, b: &f64, c: usize| a + b * c as f64;
            let (left, t1) = enumerate_half(&vals[..split], &0.0, &add, q, &mut budget);
            let (right, t2) = enumerate_half(&vals[split..], &0.0, &add, q, &mut budget);
            (join_float(&left, &right, &lib.k, q), t1 || t2)
        }
    };
    let partials = q.partial_cap - budget;
    let mut results = Vec::new();
    for counts in candidates {
        let named: BTreeMap<String, usize> = usable
            .iter()
            .zip(&counts)
            .filter(|(_, &c)| c > 0)
            .map(|(b, &c)| (b.name.clone(), c as usize))
            .collect();
        let r = evaluate_counts(lib, &named, q.tol, q.verify)?;
        if !r.pt.is_pt() {
            continue;
        }
        if let Some(target) = q.target_theta {
            let theta = r.pt.theta.unwrap_or(f64::NAN);
            if angle_distance(theta, target) >= q.angle_tol {
                continue;
            }
        }
        results.push((counts, r));
    }
    results.sort_by(|a, b| (a.1.total, &a.0).cmp(&(b.1.total, &b.0)));
    Ok(SearchOutcome {
        results: results.into_iter().map(|(_, r)| r).collect(),
        truncated,
        partials,
        exact: field.is_some(),
    })
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn merge(left: &[u16], right: &[u16]) -> Vec<u16> {
    left.iter().chain(right).copied().collect()
}

fn run_groups<T: Sync, F>(groups: &[T], parallel: bool, f: F) -> Vec<Vec<u16>>
where
    F: Fn(&T) -> Vec<Vec<u16>> + Sync + Send,
{
    let mut out: Vec<Vec<u16>> = if parallel {
        groups.par_iter().flat_map_iter(&f).collect()
    } else {
        groups.iter().flat_map(&f).collect()
    };
    out.sort();
    out.dedup();
    out
}

fn join_exact(left: &Half<Quad>, right: &Half<Quad>, y: &Quad, field: Option<u32>, q: &CompositionQuery) -> Vec<Vec<u16>> {
    type Key = (Quad, Quad);
    let mut right_groups: HashMap<Key, HashMap<Quad, Vec<usize>>> = HashMap::new();
    for (i, s) in right.sums.iter().enumerate() {
        right_groups
            .entry((s[0].clone(), s[1].clone()))
            .or_default()
            .entry(s[2].clone())
            .or_default()
            .push(i);
    }
    // right groups indexed by μ₁ − μ₂ so the sum can be made symmetric
    let mut by_diff: HashMap<Quad, Vec<&Key>> = HashMap::new();
    for key in right_groups.keys() {
        by_diff.entry(key.0.clone() - key.1.clone()).or_default().push(key);
    }
    let mut left_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut left_keys: Vec<Key> = Vec::new();
    let mut key_index: HashMap<Key, usize> = HashMap::new();
    for (i, s) in left.sums.iter().enumerate() {
        let key = (s[0].clone(), s[1].clone());
        let id = *key_index.entry(key.clone()).or_insert_with(|| {
            left_keys.push(key);
            left_keys.len() - 1
        });
        left_groups.entry(id).or_default().push(i);
    }
    let groups: Vec<(usize, Vec<usize>)> = left_groups.into_iter().collect();
    let one = Quad::from(1);
    run_groups(&groups, q.parallel, |(id, members)| {
        let (m1, m2) = &left_keys[*id];
        let need = m2.clone() - m1.clone();
        let mut out = Vec::new();
        let Some(rkeys) = by_diff.get(&need) else { return out };
        for rkey in rkeys {
            let mu = m1.clone() + rkey.0.clone();
            let rhs = mu.clone() * mu.clone() - mu * y.clone() + one.clone();
            let Some(root) = rhs.sqrt_in(field) else { continue };
            let targets = if root.is_zero() { vec![root] } else { vec![root.clone(), -root] };
            let nu_map = &right_groups[*rkey];
            for &li in members {
                for t in &targets {
                    let Some(ris) = nu_map.get(&(t.clone() - left.sums[li][2].clone())) else { continue };
                    for &ri in ris {
                        let total = left.totals[li] + right.totals[ri];
                        if total >= 1 && total <= q.max_total_blocks {
                            out.push(merge(&left.counts[li], &right.counts[ri]));
                        }
                    }
                }
            }
        }
        out
    })
}

fn join_float(left: &Half<f64>, right: &Half<f64>, k: &Momentum, q: &CompositionQuery) -> Vec<Vec<u16>> {
    const GRID: f64 = 1e-6;
    let y = k.y();
    let key = |s: &[f64; 3]| ((s[0] / GRID).round() as i64, (s[1] / GRID).round() as i64);
    let mut groups: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, s) in right.sums.iter().enumerate() {
        groups.entry(key(s)).or_default().push(i);
    }
    let right_groups: Vec<(f64, f64, Vec<(f64, usize)>)> = groups
        .into_values()
        .map(|mut idx| {
            idx.sort_by(|&a, &b| right.sums[a][2].total_cmp(&right.sums[b][2]));
            let s = right.sums[idx[0]];
            (s[0], s[1], idx.into_iter().map(|i| (right.sums[i][2], i)).collect())
        })
        .collect();
    let window = 4.0 * GRID + q.tol;
    let lefts: Vec<usize> = (0..left.sums.len()).collect();
    run_groups(&lefts, q.parallel, |&li| {
        let ls = left.sums[li];
        let mut out = Vec::new();
        for (r1, r2, nus) in &right_groups {
            if ((ls[0] + r1) - (ls[1] + r2)).abs() > window {
                continue;
            }
            let mu = 0.5 * (ls[0] + r1 + ls[1] + r2);
            let root = (mu * mu - mu * y + 1.0).max(0.0).sqrt();
            for t in [root, -root] {
                let want = t - ls[2];
                let lo = nus.partition_point(|(v, _)| *v < want - window);
                for &(v, ri) in &nus[lo..] {
                    if v > want + window {
                        break;
                    }
                    let total = left.totals[li] + right.totals[ri];
                    if total >= 1 && total <= q.max_total_blocks {
                        out.push(merge(&left.counts[li], &right.counts[ri]));
                    }
                }
            }
        }
        out
    })
}

/// Sum of the block points for `counts`, with the transmission verdict.
pub fn summed_point(lib: &BlockLibrary, counts: &BTreeMap<String, usize>) -> Result<AdmittancePoint> {
    let mut parts: Vec<(&Block, usize)> = Vec::new();
    for (name, &c) in counts {
        let b = lib.block(name).ok_or_else(|| Error::Validation(format!("unknown or quarantined block {name:?}")))?;
        parts.push((b, c));
    }
    if parts.iter().map(|p| p.1).sum::<usize>() == 0 {
        return Err(Error::Validation("empty composition".into()));
    }
    let vals: Vec<[Num; 3]> = parts.iter().map(|(b, _)| b.values()).collect();
    let sum = |j: usize| num_sum(vals.iter().zip(&parts).map(|(v, (_, c))| (&v[j], *c)));
    Ok(AdmittancePoint { y: parts[0].0.point.y.clone(), values: Some([sum(0), sum(1), sum(2)]), laurent: None })
}

fn evaluate_counts(lib: &BlockLibrary, counts: &BTreeMap<String, usize>, tol: f64, verify: bool) -> Result<CompositionResult> {
    let cal = sign_calibration();
    let achieved = summed_point(lib, counts)?;
    let mut pt = check_pt(&achieved, &lib.k, tol, cal)?;
    if !pt.is_pt() {
        let pr = check_pr(&achieved, &lib.k, tol, cal)?;
        if pr.status == PtStatus::PerfectReflection {
            pt = pr;
        }
    }
    let mut derivs: Vec<([Num; 3], usize)> = Vec::new();
    for (name, &c) in counts {
        if let Some(d) = lib.block(name).and_then(|b| b.derivatives.clone()) {
            derivs.push((d, c));
        }
    }
    let effective_length = if pt.is_pt() && derivs.len() == counts.len() {
        let s = |j: usize| num_sum(derivs.iter().map(|(d, c)| (&d[j], *c)));
        effective_length_from_values(&[s(0), s(1), s(2)], &pt).ok()
    } else {
        None
    };
    let total = counts.values().sum();
    let mut r = CompositionResult {
        counts: counts.clone(),
        total,
        achieved,
        pt,
        effective_length,
        composed: None,
        certificate: None,
        certificate_valid: None,
    };
    let all_graphs = counts.keys().all(|n| lib.block(n).is_some_and(|b| b.graph.is_some()));
    if verify && all_graphs {
        let multiset: BTreeMap<String, (WeightedGraph, usize)> = counts
            .iter()
            .map(|(n, &c)| (n.clone(), (lib.block(n).unwrap().graph.clone().unwrap(), c)))
            .collect();
        let g = WeightedGraph::parallel_from_counts(&multiset)?;
        let s = smatrix_oracle(&g, &lib.k)?;
        r.certificate_valid = match r.pt.status {
            PtStatus::PerfectTransmission => Some(s.s12().norm() >= 1.0 - CERTIFICATE_TOL),
            PtStatus::PerfectReflection => Some(s.s11().norm() >= 1.0 - CERTIFICATE_TOL),
            PtStatus::Partial => None,
        };
        r.composed = Some(g);
        r.certificate = Some(s);
    }
    Ok(r)
}

/// Composes the multiset, runs the oracle and reports the verdict with its
/// certificate.
pub fn verify_composition(lib: &BlockLibrary, counts: &BTreeMap<String, usize>, tol: f64) -> Result<CompositionResult> {
    evaluate_counts(lib, counts, tol, true)
}

// ---------------------------------------------------------------------------
// Hyperbola samples

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperbolaPoint {
    pub theta: f64,
    pub mu: f64,
    /// Display sign convention.
    pub nu: f64,
}

/// `n` phases per branch, `θ = −π + jπ/(n+1)` for the lower branch and the
/// same shifted by `π` for the upper one, plus the anchor `θ = k` (and
/// `k + π`) when it is not already on the grid.
pub fn hyperbola_samples(k: &Momentum, n: usize) -> Result<Vec<HyperbolaPoint>> {
    if n < 2 {
        return Err(Error::Validation("at least two samples per branch".into()));
    }
    let mut lower: Vec<f64> = (1..=n).map(|j| -PI + j as f64 * PI / (n + 1) as f64).collect();
    if !lower.iter().any(|t| (t - k.k()).abs() < 1e-12) {
        lower.push(k.k());
        lower.sort_by(f64::total_cmp);
    }
    let mut out = Vec::with_capacity(2 * lower.len());
    for shift in [0.0, PI] {
        for &t in &lower {
            let theta = t + shift;
            let (mu, nu) = hyperbola_param(theta, k)?;
            out.push(HyperbolaPoint { theta, mu, nu });
        }
    }
    Ok(out)
}

pub fn hyperbola_csv(points: &[HyperbolaPoint]) -> String {
    let mut s = String::from("theta,mu,nu\n");
    for p in points {
        s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p.theta, p.mu, p.nu));
    }
    s
}

pub fn hyperbola_json(k: &Momentum, points: &[HyperbolaPoint]) -> Value {
    json!({
        "schema": SCHEMA,
        "k": k.k(),
        "k_label": k.label(),
        "nu_convention": "display",
        "points": points.iter().map(|p| json!({"theta": p.theta, "mu": p.mu, "nu": p.nu})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admittance::PAPER_NU_SIGN;

    fn paths_library(k: &Momentum) -> BlockLibrary {
        let graphs = (1..=8).map(|l| (format!("l{l}"), WeightedGraph::path(l))).collect();
        BlockLibrary::from_graphs(k, graphs).unwrap()
    }

    fn counts(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
        pairs.iter().map(|(n, c)| (n.to_string(), *c)).collect()
    }

    #[test]
    fn quarantines_pole_paths() {
        let lib = paths_library(&Momentum::literal("-pi/4"));
        assert_eq!(lib.blocks.len(), 6);
        let names: Vec<_> = lib.quarantined.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["l4", "l8"]);
        assert_eq!(lib.exact_field(), Some(Some(2)));
    }

    #[test]
    fn duplicate_names_get_suffixes() {
        let k = Momentum::literal("-pi/4");
        let lib = BlockLibrary::from_graphs(&k, vec![("a".into(), WeightedGraph::path(1)), ("a".into(), WeightedGraph::path(3))]).unwrap();
        assert_eq!(lib.blocks[1].name, "a#2");
        assert_eq!(lib.warnings.len(), 1);
    }

    #[test]
    fn finds_known_compositions() {
        let k = Momentum::literal("-pi/4");
        let lib = paths_library(&k);
        let q = CompositionQuery { max_total_blocks: 13, max_per_block: 13, ..Default::default() };
        let out = search(&lib, &q).unwrap();
        assert!(out.exact && !out.truncated);
        let found: Vec<_> = out.results.iter().map(|r| r.counts.clone()).collect();
        assert!(found.contains(&counts(&[("l3", 4), ("l5", 9)])));
        assert!(found.contains(&counts(&[("l3", 1), ("l5", 2)])));
        for r in &out.results {
            assert_eq!(r.certificate_valid, Some(true), "{:?}", r.counts);
        }
        let serial = search(&lib, &CompositionQuery { parallel: false, ..q }).unwrap();
        let again: Vec<_> = serial.results.iter().map(|r| r.counts.clone()).collect();
        assert_eq!(found, again);
    }

    #[test]
    fn achieved_sum_of_example() {
        let k = Momentum::literal("-pi/4");
        let lib = paths_library(&k);
        let p = summed_point(&lib, &counts(&[("l3", 4), ("l5", 9)])).unwrap();
        let [mu1, _, nu] = p.exact_values().unwrap();
        assert_eq!(mu1, Quad::sqrt_int(2) * Quad::from(4));
        assert_eq!(nu.abs(), Quad::from(5));
        let r = verify_composition(&lib, &counts(&[("l3", 1), ("l5", 1)]), DEFAULT_TOL).unwrap();
        assert_eq!(r.pt.status, PtStatus::PerfectReflection);
        assert_eq!(r.certificate_valid, Some(true));
        assert_eq!(r.composed.unwrap().n(), 8);
    }

    #[test]
    fn impossible_query_is_empty() {
        let k = Momentum::literal("-pi/4");
        let t = AdmittanceTriple::symmetric(
            crate::RationalFunction::zero(),
            crate::RationalFunction::constant(Quad::from_ratio(1, 10)),
            "weak",
        );
        let lib = BlockLibrary::from_triples(&k, vec![("weak".into(), t)]).unwrap();
        let q = CompositionQuery { max_total_blocks: 6, max_per_block: 6, ..Default::default() };
        assert!(search(&lib, &q).unwrap().results.is_empty());
    }

    #[test]
    fn float_matches_exact_search() {
        let k = Momentum::literal("-pi/4");
        let lib = paths_library(&k);
        let mut float_lib = lib.clone();
        for b in &mut float_lib.blocks {
            let v = b.point.float_values().unwrap();
            b.point = AdmittancePoint::float(k.y(), v[0], v[1], v[2]);
        }
        let q = CompositionQuery { max_total_blocks: 8, max_per_block: 8, verify: false, ..Default::default() };
        let a: Vec<_> = search(&lib, &q).unwrap().results.into_iter().map(|r| r.counts).collect();
        let b = search(&float_lib, &q).unwrap();
        assert!(!b.exact);
        let b: Vec<_> = b.results.into_iter().map(|r| r.counts).collect();
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }

    #[test]
    fn partial_cap_truncates() {
        let k = Momentum::literal("-pi/4");
        let lib = paths_library(&k);
        let q = CompositionQuery { partial_cap: 10, verify: false, ..Default::default() };
        let out = search(&lib, &q).unwrap();
        assert!(out.truncated);
        assert_eq!(out.partials, 10);
    }

    #[test]
    fn hyperbola_grid() {
        let k = Momentum::literal("-pi/4");
        let pts = hyperbola_samples(&k, 3).unwrap();
        assert_eq!(pts.len(), 6);
        let anchor = pts.iter().find(|p| (p.theta - k.k()).abs() < 1e-12).unwrap();
        assert!(anchor.mu.abs() < 1e-15 && (anchor.nu - PAPER_NU_SIGN as f64).abs() < 1e-15);
        for p in &pts {
            let (s, c) = (k.sin(), k.cos());
            assert!(((p.nu / s).powi(2) - ((p.mu - c) / s).powi(2) - 1.0).abs() < 1e-12);
        }
        for (a, b) in pts[..3].iter().zip(&pts[3..]) {
            assert!((a.mu - b.mu).abs() < 1e-12 && (a.nu + b.nu).abs() < 1e-12);
        }
        assert_eq!(hyperbola_samples(&k, 5).unwrap().len(), 12);
        assert!(hyperbola_csv(&pts).starts_with("theta,mu,nu\n"));
    }
}
