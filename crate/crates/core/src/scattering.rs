//! Scattering matrices: the Schur-complement oracle, the two-terminal closed
//! forms built from characteristic polynomials, lead shifts and the global
//! off-diagonal sign calibration.
//!
//! With terminal block `H_U`, coupling `B` and interior `H_int`, the oracle
//! forms
//!
//! ```text
//! Q(z⁻¹) = z⁻¹I − H_U − B†(εI − H_int)⁻¹B,    S = −I − (z − z⁻¹) Q⁻¹,
//! ```
//!
//! with `ε = z + z⁻¹`. Everything else in the crate is checked against it.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::charpoly::{charpoly, charpoly_deleted, path_sum_cofactor, TerminalPolys};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, WeightedGraph};
use crate::json::{c64_to_json, SCHEMA};
use crate::linalg::{adjoint, condition_number, invert, matmul, Matrix};
use crate::momentum::Momentum;
use crate::poly::Poly;
use crate::scalar::{Field, Quad, Scalar};

/// Condition number above which a float solve counts as singular.
pub const SINGULAR_CONDITION: f64 = 1e10;
/// Momentum offset used when both oracle formulations are singular.
pub const PERTURBATION: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Closed,
    Admittance,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Closed => "closed",
            Method::Admittance => "admittance",
        }
    }
}

/// How the oracle obtained its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// Schur complement on the graph as given.
    Direct,
    /// Schur complement on `G^{+1}`, lead phase removed.
    Extended,
    /// Average of the solutions at `k ± 1e−7`.
    Perturbed,
}

impl Formulation {
    pub fn as_str(self) -> &'static str {
        match self {
            Formulation::Direct => "direct",
            Formulation::Extended => "extended",
            Formulation::Perturbed => "perturbed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Exact field arithmetic; needs a literal momentum.
    Exact,
}

#[derive(Clone, Debug)]
pub struct SMatrix {
    pub k: Momentum,
    pub entries: Matrix<Complex64>,
    pub method: Method,
    pub graph_hash: Option<String>,
    pub formulation: Option<Formulation>,
    pub condition: Option<f64>,
    /// False when only `|S₁₂|` is known (closed form on complex weights);
    /// the off-diagonal entries then hold real magnitudes.
    pub phase_known: bool,
}

impl SMatrix {
    fn new(k: &Momentum, entries: Matrix<Complex64>, method: Method) -> Self {
        SMatrix {
            k: k.clone(),
            entries,
            method,
            graph_hash: None,
            formulation: None,
            condition: None,
            phase_known: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    pub fn s11(&self) -> Complex64 {
        self.entries[0][0]
    }

    pub fn s12(&self) -> Complex64 {
        self.entries[0][1]
    }

    pub fn s21(&self) -> Complex64 {
        self.entries[1][0]
    }

    pub fn s22(&self) -> Complex64 {
        self.entries[1][1]
    }

    pub fn unitarity_defect(&self) -> f64 {
        check_unitarity(&self.entries)
    }

    /// `max |S − Sᵀ|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[i][j] - self.entries[j][i]).norm());
            }
        }
        worst
    }

    /// Largest entrywise difference to another matrix of the same size.
    pub fn max_diff(&self, other: &SMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).norm());
            }
        }
        worst
    }

    pub fn scaled(&self, c: Complex64) -> SMatrix {
        let mut s = self.clone();
        for row in &mut s.entries {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> =
            self.entries.iter().map(|row| Value::Array(row.iter().map(|z| c64_to_json(*z)).collect())).collect();
        let mut v = json!({
            "schema": SCHEMA,
            "k": self.k.k(),
            "k_label": self.k.label(),
            "method": self.method.as_str(),
            "entries": entries,
            "unitarity_defect": if self.phase_known { Value::from(self.unitarity_defect()) } else { Value::Null },
            "phase_known": self.phase_known,
        });
        let obj = v.as_object_mut().unwrap();
        if let Some(h) = &self.graph_hash {
            obj.insert("graph_hash".into(), h.clone().into());
        }
        if let Some(f) = self.formulation {
            obj.insert("formulation".into(), f.as_str().into());
        }
        if let Some(c) = self.condition {
            obj.insert("condition_number".into(), c.into());
        }
        v
    }
}

/// `max |S†S − I|` entrywise.
pub fn check_unitarity(s: &Matrix<Complex64>) -> f64 {
    let p = matmul(&adjoint(s), s);
    let mut worst: f64 = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x - target).norm());
        }
    }
    worst
}

/// Multiplies row and column `lead` by `z`: the effect of moving terminal
/// `lead` one site up its lead.
pub fn shift_phase(s: &SMatrix, lead: usize) -> Result<SMatrix> {
    shift_by(s, lead, s.k.z())
}

/// Inverse of [`shift_phase`].
pub fn unshift_phase(s: &SMatrix, lead: usize) -> Result<SMatrix> {
    shift_by(s, lead, s.k.z().conj())
}

fn shift_by(s: &SMatrix, lead: usize, z: Complex64) -> Result<SMatrix> {
    if lead >= s.dim() {
        return Err(Error::Validation(format!("lead {lead} out of range for a {}-lead S-matrix", s.dim())));
    }
    let mut out = s.clone();
    for j in 0..s.dim() {
        out.entries[lead][j] *= z;
        out.entries[j][lead] *= z;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Oracle

/// Result of one Schur-complement solve: `S` and the worst condition number.
type Solve<F> = Option<(Matrix<F>, f64)>;

fn schur<F: Field>(h: &Matrix<F>, terms: &[usize], z: &F) -> Solve<F> {
    let n = h.len();
    let zinv = F::one() / z.clone();
    let eps = z.clone() + zinv.clone();
    let interior: Vec<usize> = (0..n).filter(|v| !terms.contains(v)).collect();
    let nu = terms.len();
    let mut q: Matrix<F> = (0..nu)
        .map(|i| {
            (0..nu)
                .map(|j| {
                    let d = if i == j { zinv.clone() } else { F::zero() };
                    d - h[terms[i]][terms[j]].clone()
                })
                .collect()
        })
        .collect();
    let mut cond: f64 = 1.0;
    if !interior.is_empty() {
        let a: Matrix<F> = interior
            .iter()
            .map(|&i| {
                interior
                    .iter()
                    .map(|&j| {
                        let d = if i == j { eps.clone() } else { F::zero() };
                        d - h[i][j].clone()
                    })
                    .collect()
            })
            .collect();
        let a_inv = invert(&a)?;
        if !F::EXACT {
            cond = cond.max(condition_number(&a, &a_inv));
            if cond > SINGULAR_CONDITION {
                return None;
            }
        }
        let b: Matrix<F> =
            interior.iter().map(|&i| terms.iter().map(|&t| h[i][t].clone()).collect()).collect();
        let corr = matmul(&adjoint(&b), &matmul(&a_inv, &b));
        for i in 0..nu {
            for j in 0..nu {
                q[i][j] = q[i][j].clone() - corr[i][j].clone();
            }
        }
    }
    let q_inv = invert(&q)?;
    if !F::EXACT {
        cond = cond.max(condition_number(&q, &q_inv));
        if cond > SINGULAR_CONDITION {
            return None;
        }
    }
    let factor = z.clone() - zinv;
    let s = (0..nu)
        .map(|i| {
            (0..nu)
                .map(|j| {
                    let d = if i == j { -F::one() } else { F::zero() };
                    d - factor.clone() * q_inv[i][j].clone()
                })
                .collect()
        })
        .collect();
    Some((s, cond))
}

/// Adds a pendant vertex to every terminal; returns the new matrix and the
/// pendant indices.
fn extended<F: Field>(h: &Matrix<F>, terms: &[usize]) -> (Matrix<F>, Vec<usize>) {
    let n = h.len();
    let m = n + terms.len();
    let mut out = vec![vec![F::zero(); m]; m];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = h[i][j].clone();
        }
    }
    for (j, &t) in terms.iter().enumerate() {
        out[n + j][t] = F::one();
        out[t][n + j] = F::one();
    }
    (out, (n..m).collect())
}

fn solve<F: Field>(h: &Matrix<F>, terms: &[usize], z: &F) -> Option<(Matrix<F>, f64, Formulation)> {
    let distinct = terms.iter().enumerate().all(|(i, t)| !terms[..i].contains(t));
    if distinct {
        if let Some((s, c)) = schur(h, terms, z) {
            return Some((s, c, Formulation::Direct));
        }
    }
    let (he, te) = extended(h, terms);
    let (s, c) = schur(&he, &te, z)?;
    let zinv2 = F::one() / (z.clone() * z.clone());
    let s = s.into_iter().map(|row| row.into_iter().map(|x| x * zinv2.clone()).collect()).collect();
    Some((s, c, Formulation::Extended))
}

fn to_c64<F: Field>(m: Matrix<F>) -> Matrix<Complex64> {
    m.into_iter().map(|r| r.into_iter().map(|x| x.to_complex()).collect()).collect()
}

fn exact_compatible(radicand: Option<u32>, k: &Momentum) -> bool {
    match (radicand, k.exact_y().and_then(|y| y.radicand()).or_else(|| k.exact_z().and_then(|z| z.radicand()))) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    }
}

fn graph_radicand<G: Adjacency + ?Sized>(g: &G) -> Option<u32> {
    g.edge_list().iter().find_map(|e| e.w.radicand())
}

/// N-terminal oracle. `terms` may repeat a vertex (several leads on one
/// site); such inputs always go through the extended formulation.
pub fn oracle_terminals<G: Adjacency + ?Sized>(
    g: &G,
    terms: &[usize],
    k: &Momentum,
    precision: Precision,
) -> Result<SMatrix> {
    if terms.is_empty() {
        return Err(Error::Validation("the oracle needs at least one terminal".into()));
    }
    if let Some(&t) = terms.iter().find(|&&t| t >= g.order()) {
        return Err(Error::Validation(format!("terminal {t} out of range")));
    }
    let solved = match precision {
        Precision::Double => solve(&g.matrix::<Complex64>(), terms, &k.z()).map(|(s, c, f)| (s, Some(c), f)),
        Precision::Exact => {
            let z = k
                .exact_z()
                .ok_or_else(|| Error::Unsupported("exact precision needs a literal momentum such as -pi/4".into()))?;
            let d = graph_radicand(g);
            if !exact_compatible(d, k) {
                return Err(Error::MixedRadicals(d.unwrap_or(0), k.exact_y().and_then(|y| y.radicand()).unwrap_or(0)));
            }
            solve(&g.matrix::<Scalar>(), terms, &z).map(|(s, _, f)| (to_c64(s), None, f))
        }
    };
    if let Some((entries, condition, formulation)) = solved {
        let mut s = SMatrix::new(k, entries, Method::Oracle);
        s.formulation = Some(formulation);
        s.condition = condition;
        return Ok(s);
    }
    log::warn!("oracle singular at k = {} in both formulations; perturbing", k.label());
    let h = g.matrix::<Complex64>();
    let mut acc: Option<Matrix<Complex64>> = None;
    for dk in [PERTURBATION, -PERTURBATION] {
        let kk = k.shifted(dk)?;
        let Some((s, _, _)) = solve(&h, terms, &kk.z()) else {
            return Err(Error::Singular {
                reason: format!("interior resolvent singular at k = {} and at k {:+e}", k.label(), dk),
                eigenvalue: k.y(),
            });
        };
        acc = Some(match acc {
            None => s,
            Some(a) => a
                .into_iter()
                .zip(s)
                .map(|(ra, rb)| ra.into_iter().zip(rb).map(|(x, y)| (x + y) * 0.5).collect())
                .collect(),
        });
    }
    let mut s = SMatrix::new(k, acc.unwrap(), Method::Oracle);
    s.formulation = Some(Formulation::Perturbed);
    Ok(s)
}

/// Two-lead oracle on a graph's terminal pair (coincident terminals allowed).
pub fn smatrix_oracle(g: &WeightedGraph, k: &Momentum) -> Result<SMatrix> {
    smatrix_oracle_with(g, k, Precision::Double)
}

pub fn smatrix_oracle_with(g: &WeightedGraph, k: &Momentum, precision: Precision) -> Result<SMatrix> {
    let (t1, t2) = g.terminals();
    let mut s = oracle_terminals(g, &[t1, t2], k, precision)?;
    s.graph_hash = Some(g.graph_hash());
    Ok(s)
}

// ---------------------------------------------------------------------------
// Closed forms

/// The reduced polynomial data behind the two-terminal closed forms.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub phi: Poly<Quad>,
    pub phi1: Poly<Quad>,
    pub phi2: Poly<Quad>,
    pub phi12: Poly<Quad>,
    /// Path-sum numerator; `None` for complex weights.
    pub path_sum: Option<Poly<Quad>>,
    /// The common factor removed from all of the above.
    pub common: Poly<Quad>,
}

impl ClosedForm {
    pub fn of(g: &WeightedGraph) -> Result<Self> {
        let tp = TerminalPolys::of(g)?;
        let (t1, t2) = g.terminals();
        let path_sum = if g.is_real() { Some(path_sum_cofactor(g, t1, t2)?) } else { None };
        let common = tp.phi.gcd(&tp.phi1).gcd(&tp.phi2).gcd(&tp.phi12);
        let cut = |p: &Poly<Quad>| p.exact_div(&common);
        Ok(ClosedForm {
            phi: cut(&tp.phi),
            phi1: cut(&tp.phi1),
            phi2: cut(&tp.phi2),
            phi12: cut(&tp.phi12),
            path_sum: path_sum.as_ref().map(cut),
            common,
        })
    }

    /// `[[S11, S12], [S21, S22]]` with `raw` off-diagonals (sign `+1`), or
    /// `None` if the denominator vanishes. Complex weights leave the
    /// off-diagonals at zero (only `|S₁₂|` is available for them).
    pub fn eval<F: Field>(&self, y: &F, z: &F) -> Option<[[F; 2]; 2]> {
        let e = |p: &Poly<Quad>| p.eval_with(y, F::from_quad);
        let (phi, phi1, phi2, phi12) = (e(&self.phi), e(&self.phi1), e(&self.phi2), e(&self.phi12));
        let zinv = F::one() / z.clone();
        let d = phi.clone() - z.clone() * (phi1.clone() + phi2.clone()) + z.clone() * z.clone() * phi12.clone();
        if d.is_zero() || (!F::EXACT && d.magnitude() < 1e-14 * (1.0 + phi.magnitude() + phi1.magnitude())) {
            return None;
        }
        let s11 = -(phi.clone() - zinv.clone() * phi1.clone() - z.clone() * phi2.clone() + phi12.clone()) / d.clone();
        let s22 = -(phi.clone() - zinv.clone() * phi2.clone() - z.clone() * phi1.clone() + phi12.clone()) / d.clone();
        let off = match &self.path_sum {
            Some(ps) => (z.clone() - zinv) * e(ps) / d,
            None => F::zero(),
        };
        Some([[s11, off.clone()], [off, s22]])
    }
}

/// Two-terminal closed forms at `k`, with the calibrated off-diagonal sign.
pub fn smatrix_closed2(g: &WeightedGraph, k: &Momentum, cal: &SignCalibration) -> Result<SMatrix> {
    if !g.has_distinct_terminals() {
        return same_vertex_smatrix(g, k, cal);
    }
    let cf = ClosedForm::of(g)?;
    let sigma = cal.sigma as f64;
    let degenerate = || Error::Degenerate(format!("closed-form denominator vanishes at k = {}", k.label()));
    let mut entries = if g.is_real() && k.is_exact() && exact_compatible(g.radicand(), k) {
        let y = Scalar::real(k.exact_y().unwrap());
        let z = k.exact_z().unwrap();
        let m = cf.eval(&y, &z).ok_or_else(degenerate)?;
        m.map(|r| r.map(|x| x.to_c64())).map(Vec::from).to_vec()
    } else {
        let m = cf.eval(&Complex64::new(k.y(), 0.0), &k.z()).ok_or_else(degenerate)?;
        m.map(Vec::from).to_vec()
    };
    let phase_known = g.is_real();
    if phase_known {
        entries[0][1] *= sigma;
        entries[1][0] *= sigma;
    } else {
        let t = closed_transmission_probability(g, k)?;
        entries[0][1] = Complex64::new(t.sqrt(), 0.0);
        entries[1][0] = entries[0][1];
    }
    let mut s = SMatrix::new(k, entries, Method::Closed);
    s.phase_known = phase_known;
    s.graph_hash = Some(g.graph_hash());
    Ok(s)
}

/// `|S₁₂|² = |z − z⁻¹|² (φ_{G∖1}φ_{G∖2} − φ_Gφ_{G∖1∖2}) / |D|²`, valid for
/// Hermitian weights.
pub fn closed_transmission_probability(g: &WeightedGraph, k: &Momentum) -> Result<f64> {
    let cf = ClosedForm::of(g)?;
    let y = k.y();
    let z = k.z();
    let e = |p: &Poly<Quad>| p.eval_f64(y);
    let d = e(&cf.phi) - z * (e(&cf.phi1) + e(&cf.phi2)) + z * z * e(&cf.phi12);
    if d.norm() == 0.0 {
        return Err(Error::Degenerate(format!("closed-form denominator vanishes at k = {}", k.label())));
    }
    let t = e(&cf.phi1) * e(&cf.phi2) - e(&cf.phi) * e(&cf.phi12);
    Ok((z - 1.0 / z).norm_sqr() * t / d.norm_sqr())
}

/// Closed form for two leads on the same vertex.
pub fn same_vertex_smatrix(g: &WeightedGraph, k: &Momentum, cal: &SignCalibration) -> Result<SMatrix> {
    let (t, t2) = g.terminals();
    if t != t2 {
        return Err(Error::Validation("same-vertex closed form needs coincident terminals".into()));
    }
    let phi = charpoly(g);
    let phi1 = charpoly_deleted(g, &[t])?;
    let common = phi.gcd(&phi1);
    let (phi, phi1) = (phi.exact_div(&common), phi1.exact_div(&common));
    fn eval<F: Field>(phi: &Poly<Quad>, phi1: &Poly<Quad>, y: &F, z: &F, sigma: i32) -> Option<[F; 2]> {
        let p = phi.eval_with(y, F::from_quad);
        let p1 = phi1.eval_with(y, F::from_quad);
        let zinv = F::one() / z.clone();
        let d = p.clone() - F::from_int(2) * z.clone() * p1.clone();
        if d.is_zero() || (!F::EXACT && d.magnitude() < 1e-14 * (1.0 + p.magnitude())) {
            return None;
        }
        let s11 = -(p - y.clone() * p1.clone()) / d.clone();
        let s12 = F::from_int(sigma as i64) * (z.clone() - zinv) * p1 / d;
        Some([s11, s12])
    }
    let degenerate = || Error::Degenerate(format!("same-vertex denominator vanishes at k = {}", k.label()));
    let [s11, s12] = if k.is_exact() && exact_compatible(g.radicand(), k) {
        let y = Scalar::real(k.exact_y().unwrap());
        let z = k.exact_z().unwrap();
        eval(&phi, &phi1, &y, &z, cal.sigma).ok_or_else(degenerate)?.map(|x| x.to_c64())
    } else {
        eval(&phi, &phi1, &Complex64::new(k.y(), 0.0), &k.z(), cal.sigma).ok_or_else(degenerate)?
    };
    let mut s = SMatrix::new(k, vec![vec![s11, s12], vec![s12, s11]], Method::Closed);
    s.graph_hash = Some(g.graph_hash());
    Ok(s)
}

// ---------------------------------------------------------------------------
// Sign calibration

/// The single global sign relating the path-sum closed form of `S₁₂` to the
/// oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCalibration {
    pub sigma: i32,
    pub calibrated_against: String,
    pub oracle_value: Complex64,
    pub closed_raw: Complex64,
    /// `|oracle − sigma·closed_raw|`.
    pub residual: f64,
}

impl SignCalibration {
    /// A calibration with the given sign, for experiments with the other
    /// convention.
    pub fn fixed(sigma: i32) -> Self {
        SignCalibration {
            sigma,
            calibrated_against: "fixed".into(),
            oracle_value: Complex64::new(f64::NAN, f64::NAN),
            closed_raw: Complex64::new(f64::NAN, f64::NAN),
            residual: f64::NAN,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "sigma": self.sigma,
            "calibrated_against": self.calibrated_against,
            "oracle_s12": c64_to_json(self.oracle_value),
            "closed_raw_s12": c64_to_json(self.closed_raw),
            "residual": self.residual,
        })
    }
}

/// Compares the oracle with the unsigned closed form on the one-edge path at
/// `k = −π/4` and picks the sign that makes them agree.
pub fn calibrate_sign() -> Result<SignCalibration> {
    let g = WeightedGraph::path(1);
    let k = Momentum::literal("-pi/4");
    let oracle = smatrix_oracle(&g, &k)?.s12();
    let raw = smatrix_closed2(&g, &k, &SignCalibration::fixed(1))?.s12();
    if (oracle.norm() - raw.norm()).abs() > 1e-9 {
        return Err(Error::Calibration(format!("|oracle| = {} but |closed| = {}", oracle.norm(), raw.norm())));
    }
    let sigma = if (oracle / raw).re >= 0.0 { 1 } else { -1 };
    let residual = (oracle - raw * sigma as f64).norm();
    if residual > 1e-12 {
        return Err(Error::Calibration(format!("no sign reconciles oracle {oracle} and closed form {raw}")));
    }
    Ok(SignCalibration {
        sigma,
        calibrated_against: "one-edge path, k = -pi/4".into(),
        oracle_value: oracle,
        closed_raw: raw,
        residual,
    })
}

static CALIBRATION: OnceLock<SignCalibration> = OnceLock::new();

/// Process-wide calibration, computed on first use.
pub fn sign_calibration() -> &'static SignCalibration {
    CALIBRATION.get_or_init(|| calibrate_sign().expect("sign calibration on the one-edge path"))
}
