//! Exact scalars.
//!
//! [`Quad`] is an element `a + b·√d` of a real quadratic field with rational
//! `a`, `b` and a square-free radicand `d ≥ 2` (or a plain rational when
//! `b = 0`). [`Scalar`] adds an imaginary part, `re + i·im`, which is enough
//! to hold Hermitian edge weights and the unit phases `e^{ik}` at the
//! operating momenta used throughout the crate.
//!
//! Arithmetic never mixes two different radicands. Doing so is a logic error
//! and panics; call sites that accept user data check compatibility with
//! [`Quad::radicand`] first and report [`Error::MixedRadicals`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic needed by the polynomial, determinant and linear-solve code.
///
/// Implemented for the exact [`Quad`] and [`Scalar`] types and for
/// [`Complex64`], so the scattering oracle can run either exactly or in
/// double precision through the same code.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn from_quad(q: &Quad) -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn conj(&self) -> Self;
    /// Absolute value as a float, used for pivot selection.
    fn magnitude(&self) -> f64;
    fn to_complex(&self) -> Complex64;
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, `p/q` with arbitrary-precision integers.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("bad rational string {text:?}"));
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// Lowest-terms `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

pub(crate) fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow of both parts; scale down.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Splits `n` into `s² · f` with `f` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    f *= n;
    (s, f)
}

/// `a + b·√d` over the rationals.
///
/// Stored normalised: `b = 0` implies `d = 0`, so derived equality and
/// hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    d: u32,
}

impl Quad {
    pub fn from_rational(a: BigRational) -> Self {
        Quad { a, b: BigRational::zero(), d: 0 }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat_frac(n, d))
    }

    /// `a + b·√d`. The radicand must be square-free and at least 2 unless
    /// `b` is zero.
    pub fn new(a: BigRational, b: BigRational, d: u32) -> Result<Self> {
        if b.is_zero() {
            return Ok(Self::from_rational(a));
        }
        if d < 2 || square_free_split(d as u64).0 != 1 {
            return Err(Error::Validation(format!("radicand {d} is not square-free and >= 2")));
        }
        Ok(Quad { a, b, d })
    }

    /// `√n`, with square factors pulled out (`√12 = 2√3`).
    pub fn sqrt_int(n: u32) -> Self {
        let (s, f) = square_free_split(n as u64);
        let s = BigRational::from_integer(BigInt::from(s));
        if f == 1 {
            Self::from_rational(s)
        } else {
            Quad { a: BigRational::zero(), b: s, d: f as u32 }
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> Option<u32> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn to_f64(&self) -> f64 {
        if self.b.is_zero() {
            rational_to_f64(&self.a)
        } else {
            rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.d as f64).sqrt()
        }
    }

    fn merged_radicand(&self, other: &Quad) -> u32 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (x, y) if x == y => x,
            (x, y) => panic!("{}", Error::MixedRadicals(x, y)),
        }
    }

    /// Whether `self` and `other` can be combined arithmetically.
    pub fn compatible(&self, other: &Quad) -> bool {
        self.d == 0 || other.d == 0 || self.d == other.d
    }

    fn normalized(a: BigRational, b: BigRational, d: u32) -> Self {
        if b.is_zero() {
            Self::from_rational(a)
        } else {
            Quad { a, b, d }
        }
    }

    /// Conjugate `a − b·√d` in the quadratic field (not complex conjugation).
    pub fn field_conjugate(&self) -> Self {
        Quad { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn field_norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d as i64)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero_value() {
            return None;
        }
        if self.b.is_zero() {
            return Some(Self::from_rational(self.a.recip()));
        }
        let n = self.field_norm();
        Some(Quad { a: &self.a / &n, b: -(&self.b / &n), d: self.d })
    }

    fn is_zero_value(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rat(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact total order; panics on mixed radicands like the arithmetic.
    pub fn cmp_exact(&self, other: &Quad) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Quad::one_value();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    fn one_value() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// Non-negative square root inside `Q(√d)` when `field` is `Some(d)`, or
    /// inside `Q` when `None`. Returns `None` when no such root exists.
    pub fn sqrt_in(&self, field: Option<u32>) -> Option<Quad> {
        let field = match (self.radicand(), field) {
            (Some(x), Some(y)) if x != y => return None,
            (Some(x), _) => Some(x),
            (None, f) => f,
        };
        if self.signum() < 0 {
            return None;
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::from_rational(r));
            }
            let d = field?;
            let q = rational_sqrt(&(&self.a / rat(d as i64)))?;
            return Some(Quad { a: BigRational::zero(), b: q, d });
        }
        let d = self.d;
        let disc = rational_sqrt(&self.field_norm())?;
        let two = rat(2);
        for cand in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if !cand.is_positive() {
                continue;
            }
            if let Some(p) = rational_sqrt(&cand) {
                let q = &self.b / (&two * &p);
                let root = Quad::normalized(p, q, d);
                if &(root.clone() * root.clone()) == self {
                    return Some(root.abs());
                }
            }
        }
        None
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl From<i64> for Quad {
    fn from(n: i64) -> Self {
        Quad::from_rational(rat(n))
    }
}

impl From<BigRational> for Quad {
    fn from(r: BigRational) -> Self {
        Quad::from_rational(r)
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        if self.b.is_zero() && rhs.b.is_zero() {
            return Quad::from_rational(self.a + rhs.a);
        }
        let d = self.merged_radicand(&rhs);
        Quad::normalized(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        self + (-rhs)
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        if self.b.is_zero() && rhs.b.is_zero() {
            return Quad::from_rational(self.a * rhs.a);
        }
        let d = self.merged_radicand(&rhs);
        let dd = rat(d as i64);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Quad::normalized(a, b, d)
    }
}

impl Div for Quad {
    type Output = Quad;
    fn div(self, rhs: Quad) -> Quad {
        if self.b.is_zero() && rhs.b.is_zero() {
            return Quad::from_rational(self.a / rhs.a);
        }
        let inv = rhs.inv().expect("division by zero");
        self * inv
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let radical = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if (-self.b.clone()).is_one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        if self.a.is_zero() {
            write!(f, "{radical}")
        } else if let Some(rest) = radical.strip_prefix('-') {
            write!(f, "{} - {}", self.a, rest)
        } else {
            write!(f, "{} + {}", self.a, radical)
        }
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Field for Quad {
    const EXACT: bool = true;

    fn zero() -> Self {
        Quad::from_rational(BigRational::zero())
    }
    fn one() -> Self {
        Quad::one_value()
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
    fn from_int(n: i64) -> Self {
        Quad::from(n)
    }
    fn from_quad(q: &Quad) -> Self {
        q.clone()
    }
    fn from_scalar(s: &Scalar) -> Self {
        debug_assert!(s.im.is_zero_value(), "complex value used as real");
        s.re.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

/// Exact complex number `re + i·im` with [`Quad`] parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: Quad,
    pub im: Quad,
}

impl Scalar {
    pub fn new(re: Quad, im: Quad) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Quad) -> Self {
        Scalar { re, im: <Quad as Field>::zero() }
    }

    pub fn i() -> Self {
        Scalar { re: <Quad as Field>::zero(), im: <Quad as Field>::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero_value()
    }

    pub fn norm_sqr(&self) -> Quad {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn radicand(&self) -> Option<u32> {
        self.re.radicand().or(self.im.radicand())
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().inv()?;
        Some(Scalar { re: self.re.clone() * n.clone(), im: -(self.im.clone() * n) })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<Quad> for Scalar {
    fn from(q: Quad) -> Self {
        Scalar::real(q)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        if self.im.is_zero_value() && rhs.im.is_zero_value() {
            return Scalar::real(self.re * rhs.re);
        }
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Scalar { re, im }
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        if self.im.is_zero_value() && rhs.im.is_zero_value() {
            return Scalar::real(self.re / rhs.re);
        }
        self * rhs.inv().expect("division by zero")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero_value() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero_value() {
            write!(f, "({})i", self.im)
        } else {
            write!(f, "{} + ({})i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Field for Scalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        Scalar::real(<Quad as Field>::zero())
    }
    fn one() -> Self {
        Scalar::real(<Quad as Field>::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero_value() && self.im.is_zero_value()
    }
    fn from_int(n: i64) -> Self {
        Scalar::real(Quad::from(n))
    }
    fn from_quad(q: &Quad) -> Self {
        Scalar::real(q.clone())
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_complex(&self) -> Complex64 {
        self.to_c64()
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_quad(q: &Quad) -> Self {
        Complex64::new(q.to_f64(), 0.0)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.to_c64()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Parses a real exact number: `p/q`, `sqrt(d)`, `-sqrt(d)`, `c*sqrt(d)`,
/// `sqrt(d)/q`, or a sum `p/q + c*sqrt(d)`.
pub fn parse_quad(text: &str) -> Result<Quad> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    // split into signed terms at top-level + / - (not the leading sign)
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = t.as_bytes();
    let mut depth = 0i32;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if i > start && depth == 0 && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' => {
                terms.push(&t[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&t[start..]);
    let mut acc = <Quad as Field>::zero();
    for term in terms {
        let q = parse_quad_term(term)?;
        if !acc.compatible(&q) {
            return Err(Error::MixedRadicals(acc.d, q.d));
        }
        acc = acc + q;
    }
    Ok(acc)
}

fn parse_quad_term(term: &str) -> Result<Quad> {
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, term.strip_prefix('+').unwrap_or(term)),
    };
    let Some(pos) = body.find("sqrt(") else {
        let r = parse_rational(body)?;
        return Ok(Quad::from_rational(r * rat(sign)));
    };
    let close = body[pos..]
        .find(')')
        .map(|c| c + pos)
        .ok_or_else(|| Error::Parse(format!("unbalanced sqrt in {term:?}")))?;
    let radicand: u32 = body[pos + 5..close]
        .parse()
        .map_err(|_| Error::Parse(format!("bad radicand in {term:?}")))?;
    let coeff = match body[..pos].strip_suffix('*') {
        Some(c) => parse_rational(c)?,
        None if pos == 0 => BigRational::one(),
        None => return Err(Error::Parse(format!("bad coefficient in {term:?}"))),
    };
    let divisor = match body[close + 1..].strip_prefix('/') {
        Some(q) => parse_rational(q)?,
        None if close + 1 == body.len() => BigRational::one(),
        None => return Err(Error::Parse(format!("trailing characters in {term:?}"))),
    };
    if divisor.is_zero() {
        return Err(Error::Parse(format!("zero divisor in {term:?}")));
    }
    let scale = Quad::from_rational(coeff * rat(sign) / divisor);
    Ok(scale * Quad::sqrt_int(radicand))
}

/// Common denominator form `(a + b·√d)/c` with integer `a`, `b`, `c > 0`.
pub fn quad_integer_form(q: &Quad) -> (BigInt, BigInt, BigInt) {
    let c = q.a.denom().lcm(q.b.denom());
    let cr = BigRational::from_integer(c.clone());
    let a = (&q.a * &cr).to_integer();
    let b = (&q.b * &cr).to_integer();
    (a, b, c)
}
