//! Lead momentum `k ∈ (−π, 0)` and its derived quantities.
//!
//! A handful of literal angles (`-pi/4`, `-pi/6`, …) carry exact cosines and
//! sines so `y = 2cos k` and `z = e^{ik}` stay inside ℚ(√2) or ℚ(√3).

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{parse_quad, Quad, Scalar};

/// Distance kept from each end of `(−π, 0)`.
pub const GUARD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactAngle {
    pub label: &'static str,
    pub cos: Quad,
    pub sin: Quad,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Momentum {
    k: f64,
    exact: Option<ExactAngle>,
}

// (literal, numerator, denominator of k/π, cos, sin)
const LITERALS: &[(&str, f64, f64, &str, &str)] = &[
    ("-pi/6", -1.0, 6.0, "sqrt(3)/2", "-1/2"),
    ("-pi/4", -1.0, 4.0, "sqrt(2)/2", "-sqrt(2)/2"),
    ("-pi/3", -1.0, 3.0, "1/2", "-sqrt(3)/2"),
    ("-pi/2", -1.0, 2.0, "0", "-1"),
    ("-2pi/3", -2.0, 3.0, "-1/2", "-sqrt(3)/2"),
    ("-3pi/4", -3.0, 4.0, "-sqrt(2)/2", "-sqrt(2)/2"),
    ("-5pi/6", -5.0, 6.0, "-sqrt(3)/2", "-1/2"),
];

impl Momentum {
    /// Floating momentum; rejects values outside the guarded interval.
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || k <= -PI + GUARD || k >= -GUARD {
            return Err(Error::Momentum(format!("k = {k} must lie in (-pi, 0) away from the endpoints")));
        }
        Ok(Momentum { k, exact: None })
    }

    /// Radians (`-0.7`) or one of the exact literals (`-pi/4`, `-2pi/3`, ...).
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let t = t.to_ascii_lowercase();
        for &(label, p, q, c, s) in LITERALS {
            if t == label {
                return Ok(Momentum {
                    k: p * PI / q,
                    exact: Some(ExactAngle { label, cos: parse_quad(c)?, sin: parse_quad(s)? }),
                });
            }
        }
        let k: f64 = t.parse().map_err(|_| Error::Momentum(format!("cannot parse momentum {text:?}")))?;
        Momentum::new(k)
    }

    /// Shorthand for an exact literal; panics on an unknown label.
    pub fn literal(label: &str) -> Self {
        Momentum::parse(label).expect("known momentum literal")
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn exact(&self) -> Option<&ExactAngle> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `z = e^{ik}`.
    pub fn z(&self) -> Complex64 {
        match &self.exact {
            Some(e) => Complex64::new(e.cos.to_f64(), e.sin.to_f64()),
            None => Complex64::from_polar(1.0, self.k),
        }
    }

    pub fn cos(&self) -> f64 {
        self.exact.as_ref().map_or(self.k.cos(), |e| e.cos.to_f64())
    }

    pub fn sin(&self) -> f64 {
        self.exact.as_ref().map_or(self.k.sin(), |e| e.sin.to_f64())
    }

    /// `y = ε(k) = 2cos k = z + z⁻¹`.
    pub fn y(&self) -> f64 {
        2.0 * self.cos()
    }

    /// Exact `2cos k` for literal momenta.
    pub fn exact_y(&self) -> Option<Quad> {
        self.exact.as_ref().map(|e| e.cos.clone() * Quad::from(2))
    }

    /// Exact `e^{ik}` for literal momenta.
    pub fn exact_z(&self) -> Option<Scalar> {
        self.exact.as_ref().map(|e| Scalar::new(e.cos.clone(), e.sin.clone()))
    }

    /// The same momentum shifted by `dk`, as a float.
    pub fn shifted(&self, dk: f64) -> Result<Self> {
        Momentum::new(self.k + dk)
    }

    /// Human label (`-pi/4` or the radian value).
    pub fn label(&self) -> String {
        match &self.exact {
            Some(e) => e.label.to_string(),
            None => format!("{}", self.k),
        }
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
