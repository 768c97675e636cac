//! The admittance triple `(μ₁, μ₂, ν)` of a two-terminal graph.
//!
//! ```text
//! μ₁ = y − φ_{G∖1}/φ_{G∖1∖2},  μ₂ = y − φ_{G∖2}/φ_{G∖1∖2},  ν = Σ_P ω(P)φ_{G∖P} / φ_{G∖1∖2}
//! ```
//!
//! `ν` is stored with the path-sum sign. The triple is additive under
//! parallel composition, and perfect transmission at `k` is the hyperbola
//! `ν² − (μ − cos k)² = sin²k` together with `μ₁ = μ₂`.
//!
//! Two phase conventions appear in the literature on these formulas. The
//! physical transmission amplitude at a perfect-transmission point is
//! `S₁₂ = σ·ν/(μ − e^{−ik})` with the calibrated sign `σ`, while the
//! unsigned expression `ν/(μ − e^{−ik})` is what the bare formula gives.
//! Results carry both.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::charpoly::{path_sum_cofactor, TerminalPolys};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, WeightedGraph};
use crate::json::{c64_to_json, quad_to_json, rf_to_json, scalar_to_json, SCHEMA};
use crate::momentum::Momentum;
use crate::poly::Poly;
use crate::ratfunc::{LaurentExpansion, RationalFunction};
use crate::scalar::{Field, Quad, Scalar};
use crate::scattering::{SMatrix, SignCalibration};

type Rf = RationalFunction<Quad>;

/// Sign mapping stored (path-sum) `ν` to the display convention used in the
/// usual tables of path values, where the one-edge path sits at `(0, −1)`.
pub const PAPER_NU_SIGN: i32 = -1;

/// Default tolerance of the float predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    FromGraph,
    Synthetic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmittanceTriple {
    pub mu1: Rf,
    pub mu2: Rf,
    pub nu: Rf,
    pub source: String,
    pub origin: Origin,
}

impl AdmittanceTriple {
    /// Exact triple of a real-weighted graph with distinct terminals.
    pub fn of(g: &WeightedGraph) -> Result<Self> {
        if !g.is_real() {
            return Err(Error::Unsupported("admittance needs real weights".into()));
        }
        let tp = TerminalPolys::of(g)?;
        let (t1, t2) = g.terminals();
        let ps = path_sum_cofactor(g, t1, t2)?;
        let y = Poly::y();
        let mu = |phi_j: &Poly<Quad>| Rf::new(&(&y * &tp.phi12) - phi_j, tp.phi12.clone());
        Ok(AdmittanceTriple {
            mu1: mu(&tp.phi1)?,
            mu2: mu(&tp.phi2)?,
            nu: Rf::new(ps, tp.phi12.clone())?,
            source: g.graph_hash(),
            origin: Origin::FromGraph,
        })
    }

    pub fn synthetic(mu1: Rf, mu2: Rf, nu: Rf, name: &str) -> Self {
        AdmittanceTriple { mu1, mu2, nu, source: name.to_string(), origin: Origin::Synthetic }
    }

    /// Symmetric synthetic triple with `μ₁ = μ₂ = mu`.
    pub fn symmetric(mu: Rf, nu: Rf, name: &str) -> Self {
        Self::synthetic(mu.clone(), mu, nu, name)
    }

    pub fn is_symmetric(&self) -> bool {
        self.mu1 == self.mu2
    }

    pub fn radicand(&self) -> Option<u32> {
        self.mu1.radicand().or(self.mu2.radicand()).or(self.nu.radicand())
    }

    /// `(y − μ₁)(y − μ₂) − ν²`, which equals `φ_G/φ_{G∖1∖2}` for graph triples.
    pub fn determinant_ratio(&self) -> Rf {
        let y = Rf::y();
        &(&(&y - &self.mu1) * &(&y - &self.mu2)) - &(&self.nu * &self.nu)
    }

    /// Negated `ν`, i.e. the same block in the opposite sign convention.
    pub fn with_flipped_nu(&self) -> Self {
        AdmittanceTriple { nu: -&self.nu, ..self.clone() }
    }

    /// Whether every component has at worst simple poles (squarefree
    /// reduced denominators).
    pub fn poles_are_simple(&self) -> bool {
        [&self.mu1, &self.mu2, &self.nu].iter().all(|f| f.den().is_squarefree())
    }

    pub fn evaluate(&self, y: &YValue) -> AdmittancePoint {
        match y {
            YValue::Exact(q) if compatible(self.radicand(), q.radicand()) => self.evaluate_exact(q),
            YValue::Exact(q) => self.evaluate_float(q.to_f64()),
            YValue::Float(x) => self.evaluate_float(*x),
        }
    }

    /// Evaluation at `y = 2cos k`, exact for literal momenta.
    pub fn at(&self, k: &Momentum) -> AdmittancePoint {
        match k.exact_y() {
            Some(y) => self.evaluate(&YValue::Exact(y)),
            None => self.evaluate(&YValue::Float(k.y())),
        }
    }

    fn evaluate_exact(&self, y: &Quad) -> AdmittancePoint {
        let vals = [self.mu1.eval(y), self.mu2.eval(y), self.nu.eval(y)];
        if let [Some(a), Some(b), Some(c)] = vals {
            return AdmittancePoint {
                y: Num::Exact(y.clone()),
                values: Some([Num::Exact(a), Num::Exact(b), Num::Exact(c)]),
                laurent: None,
            };
        }
        let expand = |f: &Rf| f.laurent(y, 1);
        AdmittancePoint {
            y: Num::Exact(y.clone()),
            values: None,
            laurent: Some([expand(&self.mu1), expand(&self.mu2), expand(&self.nu)]),
        }
    }

    fn evaluate_float(&self, y: f64) -> AdmittancePoint {
        let e = |f: &Rf| {
            let d = f.den().eval_f64(y);
            (d != 0.0).then(|| f.num().eval_f64(y) / d)
        };
        let values = match (e(&self.mu1), e(&self.mu2), e(&self.nu)) {
            (Some(a), Some(b), Some(c)) => Some([Num::Float(a), Num::Float(b), Num::Float(c)]),
            _ => None,
        };
        AdmittancePoint { y: Num::Float(y), values, laurent: None }
    }

    /// Derivatives `(μ₁′, μ₂′, ν′)`.
    pub fn derivatives(&self) -> [Rf; 3] {
        [self.mu1.derivative(), self.mu2.derivative(), self.nu.derivative()]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mu1": rf_to_json(&self.mu1),
            "mu2": rf_to_json(&self.mu2),
            "nu": rf_to_json(&self.nu),
            "source": self.source,
            "origin": match self.origin { Origin::FromGraph => "from_graph", Origin::Synthetic => "synthetic" },
            "convention": "path-sum",
        })
    }
}

fn compatible(a: Option<u32>, b: Option<u32>) -> bool {
    !matches!((a, b), (Some(x), Some(y)) if x != y)
}

/// A real number that is either exact or a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(Quad),
    Float(f64),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(q) => q.to_f64(),
            Num::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Quad> {
        match self {
            Num::Exact(q) => Some(q),
            Num::Float(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Num::Exact(q) => quad_to_json(q),
            Num::Float(x) => json!(x),
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(q) => write!(f, "{q}"),
            Num::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Where to evaluate: an exact spectral point or a float.
#[derive(Clone, Debug, PartialEq)]
pub enum YValue {
    Exact(Quad),
    Float(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmittancePoint {
    pub y: Num,
    /// `[μ₁, μ₂, ν]`; `None` at a pole.
    pub values: Option<[Num; 3]>,
    /// Laurent data of `[μ₁, μ₂, ν]` at `y`, present at exact poles.
    pub laurent: Option<[LaurentExpansion<Quad>; 3]>,
}

impl AdmittancePoint {
    /// A finite point from plain values.
    pub fn exact(y: Quad, mu1: Quad, mu2: Quad, nu: Quad) -> Self {
        AdmittancePoint {
            y: Num::Exact(y),
            values: Some([Num::Exact(mu1), Num::Exact(mu2), Num::Exact(nu)]),
            laurent: None,
        }
    }

    pub fn float(y: f64, mu1: f64, mu2: f64, nu: f64) -> Self {
        AdmittancePoint {
            y: Num::Float(y),
            values: Some([Num::Float(mu1), Num::Float(mu2), Num::Float(nu)]),
            laurent: None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.is_some()
    }

    pub fn mu1(&self) -> Option<&Num> {
        self.values.as_ref().map(|v| &v[0])
    }

    pub fn mu2(&self) -> Option<&Num> {
        self.values.as_ref().map(|v| &v[1])
    }

    pub fn nu(&self) -> Option<&Num> {
        self.values.as_ref().map(|v| &v[2])
    }

    /// All three values exactly, when available.
    pub fn exact_values(&self) -> Option<[Quad; 3]> {
        let v = self.values.as_ref()?;
        Some([v[0].exact()?.clone(), v[1].exact()?.clone(), v[2].exact()?.clone()])
    }

    pub fn float_values(&self) -> Option<[f64; 3]> {
        self.values.as_ref().map(|v| [v[0].to_f64(), v[1].to_f64(), v[2].to_f64()])
    }

    /// `ν` in the display convention (`PAPER_NU_SIGN · ν`).
    pub fn display_nu(&self) -> Option<Num> {
        Some(match self.nu()? {
            Num::Exact(q) => Num::Exact(q.clone() * Quad::from(PAPER_NU_SIGN as i64)),
            Num::Float(x) => Num::Float(x * PAPER_NU_SIGN as f64),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "y": self.y.to_json(),
            "finite": self.is_finite(),
            "convention": "path-sum",
        });
        let obj = v.as_object_mut().unwrap();
        if let Some(vals) = &self.values {
            obj.insert("mu1".into(), vals[0].to_json());
            obj.insert("mu2".into(), vals[1].to_json());
            obj.insert("nu".into(), vals[2].to_json());
        } else {
            for key in ["mu1", "mu2", "nu"] {
                obj.insert(key.into(), Value::Null);
            }
        }
        if let Some(l) = &self.laurent {
            let one = |e: &LaurentExpansion<Quad>| {
                json!({
                    "order": e.order,
                    "c_minus1": quad_to_json(&e.coeff(-1)),
                    "c0": quad_to_json(&e.coeff(0)),
                    "c1": quad_to_json(&e.coeff(1)),
                })
            };
            obj.insert("laurent".into(), json!({"mu1": one(&l[0]), "mu2": one(&l[1]), "nu": one(&l[2])}));
        }
        v
    }
}

// ---------------------------------------------------------------------------
// S-matrix in admittance form

fn point_momentum_check(p: &AdmittancePoint, k: &Momentum) -> Result<()> {
    if (p.y.to_f64() - k.y()).abs() > 1e-9 {
        return Err(Error::Validation(format!(
            "point evaluated at y = {} but 2cos(k) = {}",
            p.y,
            k.y()
        )));
    }
    Ok(())
}

/// Exact context for a point and momentum sharing one quadratic field.
fn exact_context(p: &AdmittancePoint, k: &Momentum) -> Option<([Quad; 3], Scalar)> {
    let vals = p.exact_values()?;
    let z = k.exact_z()?;
    let mut d = z.radicand();
    for v in &vals {
        match (d, v.radicand()) {
            (Some(a), Some(b)) if a != b => return None,
            (None, Some(b)) => d = Some(b),
            _ => {}
        }
    }
    Some((vals, z))
}

fn admittance_entries<F: Field>(mu1: F, mu2: F, nu: F, z: F, sigma: i64) -> Option<[[F; 2]; 2]> {
    let zb = F::one() / z.clone();
    let nu2 = nu.clone() * nu.clone();
    let den = (mu1.clone() - zb.clone()) * (mu2.clone() - zb.clone()) - nu2.clone();
    if den.is_zero() || (!F::EXACT && den.magnitude() < 1e-300) {
        return None;
    }
    let s11 = -((mu1.clone() - zb.clone()) * (mu2.clone() - z.clone()) - nu2.clone()) / den.clone();
    let s22 = -((mu1 - z.clone()) * (mu2 - zb.clone()) - nu2) / den.clone();
    let s12 = F::from_int(sigma) * (z - zb) * nu / den;
    Some([[s11, s12.clone()], [s12, s22]])
}

/// S-matrix from a finite admittance point.
pub fn smatrix_from_admittance(p: &AdmittancePoint, k: &Momentum, cal: &SignCalibration) -> Result<SMatrix> {
    point_momentum_check(p, k)?;
    let vals = p
        .float_values()
        .ok_or_else(|| Error::Degenerate("admittance point is a pole; use the pole-branch test".into()))?;
    let degenerate = || Error::Degenerate("vanishing admittance-form denominator".into());
    let m: [[Complex64; 2]; 2] = match exact_context(p, k) {
        Some(([a, b, c], z)) => {
            admittance_entries(Scalar::real(a), Scalar::real(b), Scalar::real(c), z, cal.sigma as i64)
                .ok_or_else(degenerate)?
                .map(|r| r.map(|x| x.to_c64()))
        }
        None => {
            let c = |x: f64| Complex64::new(x, 0.0);
            admittance_entries(c(vals[0]), c(vals[1]), c(vals[2]), k.z(), cal.sigma as i64).ok_or_else(degenerate)?
        }
    };
    Ok(SMatrix {
        k: k.clone(),
        entries: m.map(Vec::from).to_vec(),
        method: crate::scattering::Method::Admittance,
        graph_hash: None,
        formulation: None,
        condition: None,
        phase_known: true,
    })
}

// ---------------------------------------------------------------------------
// Perfect transmission and reflection

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PtStatus {
    PerfectTransmission,
    PerfectReflection,
    Partial,
}

impl PtStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PtStatus::PerfectTransmission => "perfect_transmission",
            PtStatus::PerfectReflection => "perfect_reflection",
            PtStatus::Partial => "partial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Regular,
    Pole,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Regular => "regular",
            Branch::Pole => "pole",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtResult {
    pub status: PtStatus,
    pub branch: Branch,
    /// Whether the verdict was reached in exact arithmetic.
    pub exact: bool,
    /// Physical transmission phase `arg S₁₂ = arg(σ·ν/(μ − e^{−ik}))`.
    pub theta: Option<f64>,
    /// `arg(ν/(μ − e^{−ik}))` with `ν` as stored.
    pub theta_printed: Option<f64>,
    pub phase: Option<Complex64>,
    pub phase_printed: Option<Complex64>,
    /// Exact `ν/(μ − e^{−ik})` (stored sign) when decided exactly.
    pub phase_printed_exact: Option<Scalar>,
    /// `(ν/sin k)² − ((μ − cos k)/sin k)² − 1`.
    pub hyperbola_residual: f64,
    /// `μ₁ − μ₂` as a float.
    pub asymmetry: f64,
    pub sigma: i32,
    /// Named condition values, for reports.
    pub conditions: Vec<(String, Value)>,
}

impl PtResult {
    fn new(status: PtStatus, branch: Branch, sigma: i32) -> Self {
        PtResult {
            status,
            branch,
            exact: false,
            theta: None,
            theta_printed: None,
            phase: None,
            phase_printed: None,
            phase_printed_exact: None,
            hyperbola_residual: f64::NAN,
            asymmetry: f64::NAN,
            sigma,
            conditions: Vec::new(),
        }
    }

    pub fn is_pt(&self) -> bool {
        self.status == PtStatus::PerfectTransmission
    }

    fn set_phase(&mut self, printed: Complex64) {
        let physical = printed * self.sigma as f64;
        self.phase_printed = Some(printed);
        self.phase = Some(physical);
        self.theta_printed = Some(principal_arg(printed));
        self.theta = Some(principal_arg(physical));
    }

    pub fn to_json(&self) -> Value {
        let opt = |x: Option<f64>| x.map_or(Value::Null, Value::from);
        let mut conditions = serde_json::Map::new();
        for (name, v) in &self.conditions {
            conditions.insert(name.clone(), v.clone());
        }
        json!({
            "schema": SCHEMA,
            "status": self.status.as_str(),
            "branch": self.branch.as_str(),
            "exact": self.exact,
            "theta": opt(self.theta),
            "theta_convention": "physical (calibrated sign)",
            "theta_printed": opt(self.theta_printed),
            "theta_printed_convention": "nu/(mu - e^{-ik}) with path-sum nu",
            "phase": self.phase.map_or(Value::Null, c64_to_json),
            "phase_printed": self.phase_printed.map_or(Value::Null, c64_to_json),
            "phase_printed_exact": self.phase_printed_exact.as_ref().map_or(Value::Null, scalar_to_json),
            "hyperbola_residual": if self.hyperbola_residual.is_finite() { Value::from(self.hyperbola_residual) } else { Value::Null },
            "asymmetry": if self.asymmetry.is_finite() { Value::from(self.asymmetry) } else { Value::Null },
            "sigma": self.sigma,
            "conditions": conditions,
        })
    }
}

/// Argument in `(−π, π]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Regular-branch perfect-transmission test. Exact when the point and `k`
/// are exact in one field (then `tol` is ignored); otherwise float with
/// `tol` on both `|μ₁ − μ₂|` and the hyperbola residual. Pole points go to
/// [`check_pt_pole_point`].
pub fn check_pt(p: &AdmittancePoint, k: &Momentum, tol: f64, cal: &SignCalibration) -> Result<PtResult> {
    point_momentum_check(p, k)?;
    if !p.is_finite() {
        return check_pt_pole_point(p, cal);
    }
    let [mu1f, mu2f, nuf] = p.float_values().unwrap();
    let s = k.sin();
    let c = k.cos();
    let mut r = PtResult::new(PtStatus::Partial, Branch::Regular, cal.sigma);
    r.asymmetry = mu1f - mu2f;
    let mu_avg = 0.5 * (mu1f + mu2f);
    r.hyperbola_residual = (nuf / s).powi(2) - ((mu_avg - c) / s).powi(2) - 1.0;
    if let Some(([mu1, mu2, nu], z)) = exact_context(p, k) {
        r.exact = true;
        let y = k.exact_y().unwrap();
        let residual = nu.clone() * nu.clone() - mu1.clone() * mu1.clone() + mu1.clone() * y - Quad::from(1);
        let s2 = z.im.clone() * z.im.clone();
        let scaled = residual.clone() / s2;
        r.hyperbola_residual = scaled.to_f64();
        r.conditions.push(("mu1_minus_mu2".into(), quad_to_json(&(mu1.clone() - mu2.clone()))));
        r.conditions.push(("hyperbola_numerator".into(), quad_to_json(&residual)));
        if mu1 == mu2 && scaled.is_zero() {
            let zb = Scalar::new(z.re.clone(), -z.im.clone());
            let den = Scalar::real(mu1) - zb;
            let ratio = Scalar::real(nu) / den;
            r.status = PtStatus::PerfectTransmission;
            r.set_phase(ratio.to_c64());
            r.phase_printed_exact = Some(ratio);
        } else if nuf == 0.0 && p.nu().and_then(Num::exact).is_some_and(|q| q.is_zero()) {
            r.status = PtStatus::PerfectReflection;
        }
        return Ok(r);
    }
    r.conditions.push(("mu1_minus_mu2".into(), json!(r.asymmetry)));
    r.conditions.push(("hyperbola_residual".into(), json!(r.hyperbola_residual)));
    if r.asymmetry.abs() < tol && r.hyperbola_residual.abs() < tol {
        let zb = k.z().conj();
        r.status = PtStatus::PerfectTransmission;
        r.set_phase(nuf / (mu_avg - zb));
    } else if nuf.abs() < tol {
        r.status = PtStatus::PerfectReflection;
    }
    Ok(r)
}

/// Pole-branch test at `y₀ = 2cos k` for a triple.
pub fn check_pt_pole(t: &AdmittanceTriple, k: &Momentum, cal: &SignCalibration) -> Result<PtResult> {
    let y0 = k
        .exact_y()
        .ok_or_else(|| Error::Unsupported("the pole branch needs an exact momentum literal".into()))?;
    if !compatible(t.radicand(), y0.radicand()) {
        return Err(Error::MixedRadicals(t.radicand().unwrap_or(0), y0.radicand().unwrap_or(0)));
    }
    let p = t.evaluate(&YValue::Exact(y0));
    if p.is_finite() {
        return Err(Error::Validation(format!("no component of the triple has a pole at y = {}", p.y)));
    }
    check_pt_pole_point(&p, cal)
}

/// Residue conditions at a pole:
/// `μ₁,₋₁μ₂,₋₁ = ν₋₁²`, `μ₁,₋₁ = μ₂,₋₁`,
/// `(μ₁,₀ + μ₂,₀) ∓ 2ν₀ = 2cos k` with the sign matching `ν₋₁ = ±μ₁,₋₁`.
pub fn check_pt_pole_point(p: &AdmittancePoint, cal: &SignCalibration) -> Result<PtResult> {
    let l = p
        .laurent
        .as_ref()
        .ok_or_else(|| Error::Unsupported("pole classification needs exact Laurent data".into()))?;
    let y = p.y.exact().cloned().ok_or_else(|| Error::Unsupported("pole point must be exact".into()))?;
    let mut r = PtResult::new(PtStatus::Partial, Branch::Pole, cal.sigma);
    r.exact = true;
    for e in l {
        if e.order.is_some_and(|o| o < -1) {
            return Err(Error::Validation("pole of order greater than one".into()));
        }
    }
    let (a, b, c) = (l[0].coeff(-1), l[1].coeff(-1), l[2].coeff(-1));
    let cond1 = a.clone() * b.clone() == c.clone() * c.clone();
    let cond2 = a == b;
    let sign: i32 = if c == a { 1 } else if c == -a.clone() { -1 } else { 0 };
    let lhs = l[0].coeff(0) + l[1].coeff(0) - Quad::from(2 * sign as i64) * l[2].coeff(0);
    let cond3 = sign != 0 && lhs == y;
    r.conditions = vec![
        ("mu1_residue".into(), quad_to_json(&a)),
        ("mu2_residue".into(), quad_to_json(&b)),
        ("nu_residue".into(), quad_to_json(&c)),
        ("residue_product".into(), json!(cond1)),
        ("residue_equal".into(), json!(cond2)),
        ("constant_term".into(), quad_to_json(&lhs)),
        ("constant_condition".into(), json!(cond3)),
    ];
    if cond1 && cond2 && cond3 && !a.is_zero() {
        r.status = PtStatus::PerfectTransmission;
        let printed = Complex64::new(sign as f64, 0.0);
        r.set_phase(printed);
        r.theta = Some(if sign * cal.sigma > 0 { 0.0 } else { PI });
        r.theta_printed = Some(if sign > 0 { 0.0 } else { PI });
        r.phase_printed_exact = Some(Scalar::real(Quad::from(sign as i64)));
        r.hyperbola_residual = 0.0;
        r.asymmetry = 0.0;
    }
    Ok(r)
}

/// Perfect reflection: `ν = 0` (exactly, or `|ν| < tol` for floats).
/// Reports `S₁₁ = −(μ₂ − e^{ik})/(μ₂ − e^{−ik})` and the mirrored `S₂₂`.
pub fn check_pr(p: &AdmittancePoint, k: &Momentum, tol: f64, cal: &SignCalibration) -> Result<PtResult> {
    point_momentum_check(p, k)?;
    let vals = p.float_values().ok_or_else(|| Error::Degenerate("perfect-reflection test needs a finite point".into()))?;
    let mut r = PtResult::new(PtStatus::Partial, Branch::Regular, cal.sigma);
    let is_zero = match p.nu() {
        Some(Num::Exact(q)) => {
            r.exact = true;
            q.is_zero()
        }
        _ => vals[2].abs() < tol,
    };
    let z = k.z();
    let s11 = -(vals[1] - z) / (vals[1] - z.conj());
    let s22 = -(vals[0] - z) / (vals[0] - z.conj());
    r.conditions = vec![
        ("nu".into(), p.nu().unwrap().to_json()),
        ("s11".into(), c64_to_json(s11)),
        ("s22".into(), c64_to_json(s22)),
    ];
    if is_zero {
        r.status = PtStatus::PerfectReflection;
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Hyperbola geometry

/// Display-convention point of the hyperbola with transmission phase `theta`:
/// `μ = sin(θ − k)/sin θ`, `ν = −sin k / sin θ`.
pub fn hyperbola_param(theta: f64, k: &Momentum) -> Result<(f64, f64)> {
    let st = theta.sin();
    if !theta.is_finite() || st.abs() < 1e-12 {
        return Err(Error::Validation(format!("theta = {theta} is not on the hyperbola (sin theta = 0)")));
    }
    Ok(((theta - k.k()).sin() / st, -k.sin() / st))
}

/// `arg(ν/(μ − e^{−ik}))`, the inverse of [`hyperbola_param`].
pub fn phase_from_point(mu: f64, nu: f64, k: &Momentum) -> f64 {
    principal_arg(Complex64::new(nu, 0.0) / (mu - k.z().conj()))
}

// ---------------------------------------------------------------------------
// Composition

/// Component-wise sum, the admittance of the parallel composition.
pub fn parallel_add(ts: &[AdmittanceTriple]) -> Result<AdmittanceTriple> {
    let first = ts.first().ok_or_else(|| Error::Validation("parallel_add of an empty list".into()))?;
    let mut acc = first.clone();
    for t in &ts[1..] {
        acc.mu1 = &acc.mu1 + &t.mu1;
        acc.mu2 = &acc.mu2 + &t.mu2;
        acc.nu = &acc.nu + &t.nu;
        if t.origin == Origin::Synthetic {
            acc.origin = Origin::Synthetic;
        }
    }
    acc.source = ts.iter().map(|t| t.source.as_str()).collect::<Vec<_>>().join("|");
    Ok(acc)
}

/// Which self-energies meet at the glued vertex in [`series_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesPairing {
    /// Shared denominator `y − μ₁(G₁) − μ₂(G₂)`.
    Printed,
    /// Shared denominator `y − μ₂(G₁) − μ₁(G₂)`.
    Swapped,
}

/// Series combination:
/// `μ₁ = μ₁(G₂) + ν(G₂)²/D`, `μ₂ = μ₂(G₁) + ν(G₁)²/D`, `ν = ν(G₁)ν(G₂)/D`.
pub fn series_combine(t1: &AdmittanceTriple, t2: &AdmittanceTriple, pairing: SeriesPairing) -> Result<AdmittanceTriple> {
    let y = Rf::y();
    let d = match pairing {
        SeriesPairing::Printed => &(&y - &t1.mu1) - &t2.mu2,
        SeriesPairing::Swapped => &(&y - &t1.mu2) - &t2.mu1,
    };
    let over = |f: &Rf| f.checked_div(&d);
    Ok(AdmittanceTriple {
        mu1: &t2.mu1 + &over(&(&t2.nu * &t2.nu))?,
        mu2: &t1.mu2 + &over(&(&t1.nu * &t1.nu))?,
        nu: over(&(&t1.nu * &t2.nu))?,
        source: format!("{}~{}", t1.source, t2.source),
        origin: if t1.origin == Origin::Synthetic || t2.origin == Origin::Synthetic {
            Origin::Synthetic
        } else {
            Origin::FromGraph
        },
    })
}

// ---------------------------------------------------------------------------
// Effective length

#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveLength {
    pub value: f64,
    pub exact: Option<Quad>,
}

/// `ℓ = −(μ₁′ + μ₂′) + 2cos(θ)ν′ + 1` at a regular perfect-transmission
/// point, with `θ` the phase paired with the stored `ν`. Invariant under
/// flipping the sign of `ν`.
pub fn effective_length(t: &AdmittanceTriple, k: &Momentum, pt: &PtResult) -> Result<EffectiveLength> {
    let y = match k.exact_y() {
        Some(y) if compatible(t.radicand(), y.radicand()) => YValue::Exact(y),
        _ => YValue::Float(k.y()),
    };
    let d = t.derivatives().map(|f| eval_num(&f, &y));
    let [Some(d1), Some(d2), Some(dn)] = d else {
        return Err(Error::Degenerate("derivative has a pole".into()));
    };
    effective_length_from_values(&[d1, d2, dn], pt)
}

fn eval_num(f: &Rf, y: &YValue) -> Option<Num> {
    match y {
        YValue::Exact(q) => f.eval(q).map(Num::Exact),
        YValue::Float(x) => {
            let d = f.den().eval_f64(*x);
            (d != 0.0).then(|| Num::Float(f.num().eval_f64(*x) / d))
        }
    }
}

/// Derivative values `(μ₁′, μ₂′, ν′)` of a triple at `k`, exact when possible.
pub fn derivative_values(t: &AdmittanceTriple, k: &Momentum) -> Option<[Num; 3]> {
    let y = match k.exact_y() {
        Some(y) if compatible(t.radicand(), y.radicand()) => YValue::Exact(y),
        _ => YValue::Float(k.y()),
    };
    let [a, b, c] = t.derivatives().map(|f| eval_num(&f, &y));
    Some([a?, b?, c?])
}

/// Effective length from derivative values at the point. For a parallel
/// composite these are the sums of the block derivatives.
pub fn effective_length_from_values(d: &[Num; 3], pt: &PtResult) -> Result<EffectiveLength> {
    if !pt.is_pt() {
        return Err(Error::Validation("effective length needs a perfect-transmission point".into()));
    }
    if pt.branch == Branch::Pole {
        return Err(Error::Unsupported("effective length is not defined on the pole branch".into()));
    }
    if let (Some(ratio), [Num::Exact(d1), Num::Exact(d2), Num::Exact(dn)]) = (&pt.phase_printed_exact, d) {
        let fields = [ratio.radicand(), d1.radicand(), d2.radicand(), dn.radicand()];
        let mut field = None;
        let ok = fields.iter().flatten().all(|&r| *field.get_or_insert(r) == r);
        if ok {
            let l = -(d1.clone() + d2.clone()) + Quad::from(2) * ratio.re.clone() * dn.clone() + Quad::from(1);
            return Ok(EffectiveLength { value: l.to_f64(), exact: Some(l) });
        }
    }
    let cos_theta = pt.phase_printed.map(|z| z.re / z.norm()).unwrap_or(f64::NAN);
    let l = -(d[0].to_f64() + d[1].to_f64()) + 2.0 * cos_theta * d[2].to_f64() + 1.0;
    Ok(EffectiveLength { value: l, exact: None })
}

/// Exact sum when every term is exact in one field, float otherwise.
pub fn num_sum<'a>(terms: impl IntoIterator<Item = (&'a Num, usize)>) -> Num {
    let terms: Vec<_> = terms.into_iter().collect();
    let mut field = None;
    let exact = terms.iter().all(|(n, _)| match n {
        Num::Exact(q) => q.radicand().is_none_or(|r| *field.get_or_insert(r) == r),
        Num::Float(_) => false,
    });
    if exact {
        let mut acc = Quad::from(0);
        for (n, c) in &terms {
            acc = acc + n.exact().unwrap().clone() * Quad::from(*c as i64);
        }
        Num::Exact(acc)
    } else {
        Num::Float(terms.iter().map(|(n, c)| n.to_f64() * *c as f64).sum())
    }
}

// ---------------------------------------------------------------------------
// Charpoly-level criteria

/// Exact conditions `φ_{G∖1}(ε) = φ_{G∖2}(ε)` and
/// `φ_G(ε) − εφ_{G∖1}(ε) + φ_{G∖1∖2}(ε) = 0`.
pub fn charpoly_pt_conditions(g: &WeightedGraph, k: &Momentum) -> Result<bool> {
    let y = k.exact_y().ok_or_else(|| Error::Unsupported("exact momentum literal required".into()))?;
    if !compatible(g.radicand(), y.radicand()) {
        return Err(Error::MixedRadicals(g.radicand().unwrap_or(0), y.radicand().unwrap_or(0)));
    }
    let tp = TerminalPolys::of(g)?;
    let e = |p: &Poly<Quad>| p.eval(&y);
    let (phi, phi1, phi2, phi12) = (e(&tp.phi), e(&tp.phi1), e(&tp.phi2), e(&tp.phi12));
    Ok(phi1 == phi2 && (phi - y * phi1 + phi12).is_zero())
}

/// `(e^{−ik}φ_{G∖1∖2} − φ_{G∖1}) / |…|` at `ε = 2cos k`, the charpoly form of
/// the transmission phase (up to the global sign).
pub fn charpoly_phase(g: &WeightedGraph, k: &Momentum) -> Result<Complex64> {
    let tp = TerminalPolys::of(g)?;
    let y = k.y();
    let w = k.z().conj() * tp.phi12.eval_f64(y) - tp.phi1.eval_f64(y);
    if w.norm() == 0.0 {
        return Err(Error::Degenerate("charpoly phase undefined".into()));
    }
    Ok(w / w.norm())
}
