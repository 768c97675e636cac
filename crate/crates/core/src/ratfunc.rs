//! Reduced ratios of polynomials and their Laurent expansions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Quad};

/// `num / den`, always stored reduced: `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction<F> {
    num: Poly<F>,
    den: Poly<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lead = den.leading();
        if lead == F::one() {
            RationalFunction { num, den }
        } else {
            let inv = F::one() / lead;
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn y() -> Self {
        Self::from_poly(Poly::y())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn apply(&self, op: RfOp, rhs: &Self) -> Result<Self> {
        Ok(match op {
            RfOp::Add => self + rhs,
            RfOp::Sub => self - rhs,
            RfOp::Mul => self * rhs,
            RfOp::Div => return self.checked_div(rhs),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    /// Quotient-rule derivative with respect to `y`.
    pub fn derivative(&self) -> Self {
        let top = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduced(top, &self.den * &self.den)
    }

    /// `None` at a pole of the reduced function.
    pub fn eval(&self, y: &F) -> Option<F> {
        let d = self.den.eval(y);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(y) / d)
    }

    /// Laurent coefficients around `y0` from the lowest nonvanishing order
    /// through `max_order` inclusive.
    pub fn laurent(&self, y0: &F, max_order: i32) -> LaurentExpansion<F> {
        if self.num.is_zero() {
            return LaurentExpansion { point: y0.clone(), order: None, coeffs: Vec::new() };
        }
        let n = self.num.taylor_shift(y0);
        let d = self.den.taylor_shift(y0);
        let a = n.coeffs().iter().take_while(|c| c.is_zero()).count();
        let b = d.coeffs().iter().take_while(|c| c.is_zero()).count();
        let order = a as i32 - b as i32;
        let n: Vec<F> = n.coeffs()[a..].to_vec();
        let d: Vec<F> = d.coeffs()[b..].to_vec();
        let len = (max_order - order + 1).max(0) as usize;
        let d0_inv = F::one() / d[0].clone();
        let mut q: Vec<F> = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = n.get(i).cloned().unwrap_or_else(F::zero);
            for j in 1..=i.min(d.len() - 1) {
                acc = acc - d[j].clone() * q[i - j].clone();
            }
            q.push(acc * d0_inv.clone());
        }
        LaurentExpansion { point: y0.clone(), order: Some(order), coeffs: q }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> RationalFunction<G> {
        RationalFunction::reduced(self.num.map(f), self.den.map(f))
    }
}

impl RationalFunction<Quad> {
    pub fn radicand(&self) -> Option<u32> {
        self.num.radicand().or(self.den.radicand())
    }

    pub fn eval_f64(&self, y: f64) -> f64 {
        self.num.eval_f64(y) / self.den.eval_f64(y)
    }
}

/// Laurent data `Σ_{n ≥ order} c_n (y − y0)^n`, truncated.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentExpansion<F> {
    pub point: F,
    /// Lowest nonvanishing exponent; `None` for the zero function.
    pub order: Option<i32>,
    /// `coeffs[i]` is the coefficient of `(y − y0)^(order + i)`.
    pub coeffs: Vec<F>,
}

impl<F: Field> LaurentExpansion<F> {
    /// Coefficient of `(y − y0)^n`, zero outside the stored range.
    pub fn coeff(&self, n: i32) -> F {
        match self.order {
            Some(o) if n >= o => self.coeffs.get((n - o) as usize).cloned().unwrap_or_else(F::zero),
            _ => F::zero(),
        }
    }

    pub fn has_pole(&self) -> bool {
        self.order.is_some_and(|o| o < 0)
    }

    pub fn residue(&self) -> F {
        self.coeff(-1)
    }
}

impl<F: Field> Add for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn add(self, rhs: &RationalFunction<F>) -> RationalFunction<F> {
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::reduced(num, &self.den * &rhs.den)
    }
}

impl<F: Field> Sub for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn sub(self, rhs: &RationalFunction<F>) -> RationalFunction<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn mul(self, rhs: &RationalFunction<F>) -> RationalFunction<F> {
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<F: Field> Neg for &RationalFunction<F> {
    type Output = RationalFunction<F>;
    fn neg(self) -> RationalFunction<F> {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl<F: Field + fmt::Display> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}", self.num, self.den)
    }
}
