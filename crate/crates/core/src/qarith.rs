//! Scalar layer: evaluation points for the deformation parameter, q-numbers,
//! q-factorials, and the exact coefficient ring.
//!
//! The q-number of `x` is `[x] = (q^x - q^-x)/(q - q^-1)`; it reduces to `x`
//! at `q = 1` and is invariant under `q -> 1/q`. Exact arithmetic happens in
//! Laurent polynomials in the formal unit `u = q^(1/8)` with rational
//! coefficients, localized at `omega = q - q^-1` (see [`LaurentU`]): every
//! scalar produced by reordering normal-ordered monomials in scope lives in
//! that ring.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::report::CheckReport;

/// Errors from the scalar layer.
#[derive(Debug, Clone, PartialEq)]
pub enum QarithError {
    /// `q = 1` must be requested as a [`QPoint::Classical`] point.
    ClassicalRequired,
    /// Real-mode parameter out of range (needs `q > 0`, `q != 1`).
    BadRealParameter(f64),
    /// Unit-circle angle outside the positivity window for the configured cap.
    ThetaOutOfRange { theta: f64, max: f64 },
    /// q-number argument with a denominator not dividing 8.
    BadDenominator(Rational64),
    /// Half-integer parse failure.
    BadHalfInt(String),
}

impl fmt::Display for QarithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QarithError::ClassicalRequired => write!(f, "q=1 requires ClassicalPoint"),
            QarithError::BadRealParameter(q) => {
                write!(f, "real q must be positive and != 1, got {q}")
            }
            QarithError::ThetaOutOfRange { theta, max } => write!(
                f,
                "theta={theta} outside the admissible window (0, {max}) for the configured cap"
            ),
            QarithError::BadDenominator(x) => {
                write!(f, "q-number argument {x} has denominator not dividing 8")
            }
            QarithError::BadHalfInt(s) => write!(f, "not a half-integer: `{s}`"),
        }
    }
}

impl std::error::Error for QarithError {}

/// Default truncation cap used to size the unit-circle positivity window.
pub const DEFAULT_N_CAP: usize = 12;

/// A half-integer `j`, stored as `2j`.
///
/// Spins satisfy `j >= 0`; weights `m` satisfy `-j <= m <= j` with `j - m`
/// integer. Both are represented by this type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn to_rational(&self) -> Rational64 {
        Rational64::new(self.twice, 2)
    }

    /// Parse `"p/2"` strings: `"3/2"`, `"-1/2"`, or plain integers `"2"`.
    pub fn parse(s: &str) -> Result<Self, QarithError> {
        let s = s.trim();
        let bad = || QarithError::BadHalfInt(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            let d: i64 = den.trim().parse().map_err(|_| bad())?;
            match d {
                1 => Ok(HalfInt::from_int(n)),
                2 => Ok(HalfInt::from_twice(n)),
                _ => Err(bad()),
            }
        } else {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(HalfInt::from_int(n))
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

/// A concrete evaluation of the deformation parameter.
///
/// `Real` points have `q > 0`, `q != 1`; `UnitCircle` points have
/// `q = e^{i theta}` inside the window where every q-number that can appear
/// on a capped space is positive. The limit `q = 1` is its own variant with
/// `[x] = x` and `q^x = 1` so no `0/0` ever forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QPoint {
    Classical,
    Real { q: f64 },
    UnitCircle { theta: f64 },
}

impl QPoint {
    pub fn classical() -> Self {
        QPoint::Classical
    }

    pub fn real(q: f64) -> Result<Self, QarithError> {
        if q == 1.0 {
            return Err(QarithError::ClassicalRequired);
        }
        if !(q > 0.0) || !q.is_finite() {
            return Err(QarithError::BadRealParameter(q));
        }
        Ok(QPoint::Real { q })
    }

    /// Unit-circle point `q = e^{i theta}` with `0 < theta < pi/(2*n_cap+4)`.
    ///
    /// The bound keeps `[n] = sin(n theta)/sin(theta)` strictly positive for
    /// all `n <= 2*n_cap + 2`, so square roots of q-factorials taken on a
    /// space capped at `n_cap` are real positive.
    pub fn unit_circle(theta: f64, n_cap: usize) -> Result<Self, QarithError> {
        let max = std::f64::consts::PI / (2.0 * n_cap as f64 + 4.0);
        if !(theta > 0.0 && theta < max) {
            return Err(QarithError::ThetaOutOfRange { theta, max });
        }
        Ok(QPoint::UnitCircle { theta })
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, QPoint::Classical)
    }

    pub fn q(&self) -> Complex64 {
        self.q_pow(Rational64::one())
    }

    /// Principal eighth root `u = q^(1/8)`.
    pub fn u(&self) -> Complex64 {
        self.q_pow(Rational64::new(1, 8))
    }

    /// Principal power `q^r`. At the classical point this is 1 for every `r`.
    pub fn q_pow(&self, r: Rational64) -> Complex64 {
        let x = *r.numer() as f64 / *r.denom() as f64;
        match self {
            QPoint::Classical => Complex64::new(1.0, 0.0),
            QPoint::Real { q } => Complex64::new(q.powf(x), 0.0),
            QPoint::UnitCircle { theta } => Complex64::from_polar(1.0, x * theta),
        }
    }

    /// `u^k = q^(k/8)`.
    pub fn u_pow(&self, k: i64) -> Complex64 {
        self.q_pow(Rational64::new(k, 8))
    }

    /// `omega = q - q^-1` (zero at the classical point).
    pub fn omega(&self) -> Complex64 {
        self.q() - self.q_pow(-Rational64::one())
    }

    /// q-number `[x] = (q^x - q^-x)/(q - q^-1)`, defined for arguments with
    /// denominator dividing 8; returns `x` at the classical point.
    pub fn q_num(&self, x: Rational64) -> Result<Complex64, QarithError> {
        if 8 % x.denom() != 0 {
            return Err(QarithError::BadDenominator(x));
        }
        Ok(self.q_num_unchecked(x))
    }

    fn q_num_unchecked(&self, x: Rational64) -> Complex64 {
        let xf = *x.numer() as f64 / *x.denom() as f64;
        match self {
            QPoint::Classical => Complex64::new(xf, 0.0),
            _ => (self.q_pow(x) - self.q_pow(-x)) / self.omega(),
        }
    }

    /// q-number of an integer argument.
    pub fn q_num_int(&self, n: i64) -> Complex64 {
        self.q_num_unchecked(Rational64::from_integer(n))
    }

    /// q-factorial `[n]! = [1][2]...[n]` with `[0]! = 1`.
    pub fn q_fact(&self, n: u64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            acc *= self.q_num_int(k as i64);
        }
        acc
    }

    /// Stable textual label used when echoing parameters in reports.
    pub fn label(&self) -> String {
        match self {
            QPoint::Classical => "1".to_string(),
            QPoint::Real { q } => format!("{q}"),
            QPoint::UnitCircle { theta } => format!("circle:{theta}"),
        }
    }

    /// Parse `"1"`, a positive real, or `"circle:<theta>"`.
    pub fn parse(s: &str, n_cap: usize) -> Result<Self, QarithError> {
        let s = s.trim();
        if s == "1" || s == "1.0" {
            return Ok(QPoint::Classical);
        }
        if let Some(theta) = s.strip_prefix("circle:") {
            let theta: f64 = theta
                .parse()
                .map_err(|_| QarithError::BadRealParameter(f64::NAN))?;
            return QPoint::unit_circle(theta, n_cap);
        }
        let q: f64 = s
            .parse()
            .map_err(|_| QarithError::BadRealParameter(f64::NAN))?;
        QPoint::real(q)
    }
}

/// Residual check of the splitting rule `[a] q^b + [b] q^-a = [a+b]`.
pub fn check_q_identity(
    a: Rational64,
    b: Rational64,
    qp: &QPoint,
    tol: f64,
) -> Result<CheckReport, QarithError> {
    let lhs = qp.q_num(a)? * qp.q_pow(b) + qp.q_num(b)? * qp.q_pow(-a);
    let rhs = qp.q_num(a + b)?;
    let res = (lhs - rhs).norm();
    Ok(CheckReport::residual(
        &format!("qnum-split[{a},{b}]"),
        "q1",
        res,
        tol,
    ))
}

// ---------------------------------------------------------------------------
// Exact coefficient ring
// ---------------------------------------------------------------------------

/// Element of `Q[u, u^-1]` localized at `omega = u^8 - u^-8`: a Laurent
/// polynomial numerator over an `omega` power.
///
/// Stored normalized: no zero coefficients, and the numerator is not
/// divisible by `omega` while `omega_den > 0`. Equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentU {
    terms: BTreeMap<i64, BigRational>,
    omega_den: u32,
}

fn brat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LaurentU {
    pub fn zero() -> Self {
        LaurentU {
            terms: BTreeMap::new(),
            omega_den: 0,
        }
    }

    pub fn one() -> Self {
        LaurentU::u_pow(0)
    }

    /// The monomial `u^k`.
    pub fn u_pow(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, BigRational::one());
        LaurentU {
            terms,
            omega_den: 0,
        }
    }

    /// `q^(k/8) = u^k` scaled by a rational.
    pub fn monomial(coeff: BigRational, k: i64) -> Self {
        let mut out = LaurentU::zero();
        if !coeff.is_zero() {
            out.terms.insert(k, coeff);
        }
        out
    }

    pub fn from_int(n: i64) -> Self {
        LaurentU::monomial(brat(n), 0)
    }

    pub fn from_rational(r: BigRational) -> Self {
        LaurentU::monomial(r, 0)
    }

    /// `omega = u^8 - u^-8`.
    pub fn omega() -> Self {
        &LaurentU::u_pow(8) - &LaurentU::u_pow(-8)
    }

    /// `omega^-1`.
    pub fn omega_inv() -> Self {
        LaurentU {
            terms: LaurentU::one().terms,
            omega_den: 1,
        }
    }

    /// q-number `[n]` of an integer as an exact element:
    /// `[n] = u^{8(n-1)} + u^{8(n-3)} + ... + u^{-8(n-1)}`.
    pub fn q_num_int(n: i64) -> Self {
        if n == 0 {
            return LaurentU::zero();
        }
        let (sign, n_abs) = if n > 0 { (1, n) } else { (-1, -n) };
        let mut out = LaurentU::zero();
        for k in 0..n_abs {
            out.terms.insert(8 * (n_abs - 1 - 2 * k), brat(sign));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.omega_den == 0
            && self.terms.len() == 1
            && self
                .terms
                .get(&0)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// If the value is a pure monomial `c * u^k` (no omega denominator),
    /// return `(c, k)`.
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        if self.omega_den == 0 && self.terms.len() == 1 {
            let (&k, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), k))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.omega_den = 0;
            return;
        }
        while self.omega_den > 0 {
            match div_by_omega(&self.terms) {
                Some(q) => {
                    self.terms = q;
                    self.omega_den -= 1;
                }
                None => break,
            }
        }
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn add(&self, other: &LaurentU) -> Self {
        // Bring both to the common denominator omega^max.
        let d = self.omega_den.max(other.omega_den);
        let a = mul_omega_pow(&self.terms, d - self.omega_den);
        let b = mul_omega_pow(&other.terms, d - other.omega_den);
        let mut terms = a;
        for (k, c) in b {
            let e = terms.entry(k).or_insert_with(BigRational::zero);
            *e += c;
        }
        let mut out = LaurentU {
            terms,
            omega_den: d,
        };
        out.normalize();
        out
    }

    pub fn sub(&self, other: &LaurentU) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentU) -> Self {
        let mut terms: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let e = terms.entry(ka + kb).or_insert_with(BigRational::zero);
                *e += ca * cb;
            }
        }
        let mut out = LaurentU {
            terms,
            omega_den: self.omega_den + other.omega_den,
        };
        out.normalize();
        out
    }

    /// Multiply by `omega^-1` (exact; cancels against the numerator when
    /// possible).
    pub fn mul_omega_inv(&self) -> Self {
        let mut out = self.clone();
        if out.terms.is_empty() {
            return out;
        }
        out.omega_den += 1;
        out.normalize();
        out
    }

    /// Multiplicative inverse, defined for units of the localized ring:
    /// values of the form `c * u^k * omega^j`.
    pub fn try_inverse(&self) -> Option<Self> {
        if self.terms.is_empty() {
            return None;
        }
        let mut numer = self.terms.clone();
        let mut omega_factors: i64 = 0;
        while let Some(q) = div_by_omega(&numer) {
            numer = q;
            omega_factors += 1;
        }
        if numer.len() != 1 {
            return None;
        }
        let (&k, c) = numer.iter().next().unwrap();
        let coeff_inv = c.recip();
        let net = omega_factors - self.omega_den as i64;
        let base = LaurentU::monomial(coeff_inv, -k);
        if net >= 0 {
            // inverse carries omega^net in the denominator
            let mut out = base;
            out.omega_den = net as u32;
            out.normalize();
            Some(out)
        } else {
            let mut out = base;
            for _ in 0..(-net) {
                out = out.mul(&LaurentU::omega());
            }
            Some(out)
        }
    }

    /// Evaluate at a q-point. Values with an omega denominator cannot be
    /// evaluated at the classical point.
    pub fn eval(&self, qp: &QPoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, c) in &self.terms {
            acc += Complex64::new(c.to_f64().expect("rational fits f64"), 0.0) * qp.u_pow(k);
        }
        if self.omega_den > 0 {
            assert!(
                !qp.is_classical(),
                "cannot evaluate an omega-denominator value at q = 1"
            );
            acc /= qp.omega().powu(self.omega_den);
        }
        acc
    }

    pub fn omega_den(&self) -> u32 {
        self.omega_den
    }
}

/// Exact division of a Laurent numerator by `omega = u^8 - u^-8`.
/// Returns `None` when not divisible.
fn div_by_omega(terms: &BTreeMap<i64, BigRational>) -> Option<BTreeMap<i64, BigRational>> {
    if terms.is_empty() {
        return Some(BTreeMap::new());
    }
    // f / omega = f * u^8 / (u^16 - 1); divide descending by exponent.
    let mut rem: BTreeMap<i64, BigRational> = terms.iter().map(|(k, c)| (k + 8, c.clone())).collect();
    let mut quot: BTreeMap<i64, BigRational> = BTreeMap::new();
    let low = *rem.keys().next().unwrap();
    loop {
        let (&top, _) = match rem.last_key_value() {
            Some(kv) => kv,
            None => break,
        };
        if top < low + 16 {
            // Remaining terms cannot be reduced further; divisible only if
            // nothing is left.
            return if rem.is_empty() { Some(quot) } else { None };
        }
        let c = rem.remove(&top).unwrap();
        let qe = top - 16;
        let e = quot.entry(qe).or_insert_with(BigRational::zero);
        *e += c.clone();
        let r = rem.entry(qe).or_insert_with(BigRational::zero);
        *r += c;
        if r.is_zero() {
            rem.remove(&qe);
        }
    }
    Some(quot)
}

fn mul_omega_pow(terms: &BTreeMap<i64, BigRational>, pow: u32) -> BTreeMap<i64, BigRational> {
    let mut acc = terms.clone();
    for _ in 0..pow {
        let mut next: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (k, c) in &acc {
            let e = next.entry(k + 8).or_insert_with(BigRational::zero);
            *e += c;
            let e = next.entry(k - 8).or_insert_with(BigRational::zero);
            *e -= c;
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    acc
}

impl fmt::Debug for LaurentU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if *k == 0 {
                    format!("{c}")
                } else {
                    format!("{c}*u^{k}")
                }
            })
            .collect();
        if self.omega_den > 0 {
            write!(f, "({})/w^{}", body.join(" + "), self.omega_den)
        } else {
            write!(f, "{}", body.join(" + "))
        }
    }
}

impl fmt::Display for LaurentU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::ops::Add for &LaurentU {
    type Output = LaurentU;
    fn add(self, rhs: &LaurentU) -> LaurentU {
        LaurentU::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentU {
    type Output = LaurentU;
    fn sub(self, rhs: &LaurentU) -> LaurentU {
        LaurentU::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentU {
    type Output = LaurentU;
    fn mul(self, rhs: &LaurentU) -> LaurentU {
        LaurentU::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentU {
    type Output = LaurentU;
    fn neg(self) -> LaurentU {
        LaurentU::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qpoints() -> Vec<QPoint> {
        vec![
            QPoint::real(0.7).unwrap(),
            QPoint::real(1.3).unwrap(),
            QPoint::unit_circle(std::f64::consts::PI / 40.0, DEFAULT_N_CAP).unwrap(),
        ]
    }

    #[test]
    fn qpoint_construction() {
        let qp = QPoint::real(1.3).unwrap();
        assert!((qp.q().re - 1.3).abs() < 1e-15);
        assert!((qp.u().re - 1.3f64.powf(0.125)).abs() < 1e-15);
        assert!((qp.u_pow(8) - qp.q()).norm() < 1e-14);

        let qp = QPoint::unit_circle(std::f64::consts::PI / 40.0, DEFAULT_N_CAP).unwrap();
        assert!((qp.q().norm() - 1.0).abs() < 1e-15);
        // u^4 = q^(1/2)
        assert!((qp.u_pow(4) - qp.q_pow(Rational64::new(1, 2))).norm() < 1e-15);

        assert_eq!(QPoint::real(1.0), Err(QarithError::ClassicalRequired));
        assert!(QPoint::real(-2.0).is_err());
        assert!(QPoint::unit_circle(1.0, DEFAULT_N_CAP).is_err());
        assert!(QPoint::unit_circle(0.0, DEFAULT_N_CAP).is_err());
    }

    #[test]
    fn qpoint_parsing() {
        assert_eq!(QPoint::parse("1", 12).unwrap(), QPoint::Classical);
        assert_eq!(QPoint::parse("1.3", 12).unwrap(), QPoint::Real { q: 1.3 });
        let c = QPoint::parse("circle:0.05", 12).unwrap();
        assert_eq!(c, QPoint::UnitCircle { theta: 0.05 });
        assert!(QPoint::parse("zebra", 12).is_err());
    }

    #[test]
    fn q_number_values() {
        let qp = QPoint::real(2.0).unwrap();
        assert!(qp.q_num_int(0).norm() < 1e-15);
        // [2] at q=2: (4 - 1/4)/(2 - 1/2) = 2.5
        assert!((qp.q_num_int(2).re - 2.5).abs() < 1e-14);
        for qp in qpoints() {
            assert!((qp.q_num_int(1) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        // classical factorial
        let cl = QPoint::classical();
        assert!((cl.q_fact(3).re - 6.0).abs() < 1e-15);
        assert!((cl.q_fact(0).re - 1.0).abs() < 1e-15);
        // [1][2] = q + 1/q
        let qp = QPoint::real(1.3).unwrap();
        assert!((qp.q_fact(2).re - (1.3 + 1.0 / 1.3)).abs() < 1e-14);
    }

    #[test]
    fn q_number_denominator_guard() {
        let qp = QPoint::real(1.3).unwrap();
        assert!(qp.q_num(Rational64::new(1, 8)).is_ok());
        assert!(qp.q_num(Rational64::new(1, 3)).is_err());
    }

    #[test]
    fn q_number_antisymmetry_and_conjugation() {
        for qp in qpoints() {
            for t in [-7, -3, -1, 0, 1, 2, 5, 11] {
                let x = Rational64::new(t, 2);
                let a = qp.q_num(x).unwrap();
                let b = qp.q_num(-x).unwrap();
                assert!((a + b).norm() < 1e-12, "antisymmetry at {qp:?} x={x}");
            }
        }
        // Conjugation invariance: replacing q by conj(q) conjugates [x].
        let theta = std::f64::consts::PI / 40.0;
        let qp = QPoint::unit_circle(theta, DEFAULT_N_CAP).unwrap();
        for t in [1, 2, 3, 7] {
            let x = Rational64::new(t, 2);
            let v = qp.q_num(x).unwrap();
            // conj(q) = e^{-i theta}: [x] there is sin(-x theta)/sin(-theta),
            // equal to conj([x]) = [x] (real).
            let manual = (x.to_f64().unwrap() * theta).sin() / theta.sin();
            assert!((v - Complex64::new(manual, 0.0)).norm() < 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
        let qp = QPoint::real(1.3).unwrap();
        for t in [1, 3] {
            let v = qp.q_num(Rational64::new(t, 2)).unwrap();
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn q_identity_grid() {
        for qp in qpoints() {
            for ta in [-4, -1, 0, 1, 2, 3, 6] {
                for tb in [-2, 0, 1, 5] {
                    let rep = check_q_identity(
                        Rational64::new(ta, 2),
                        Rational64::new(tb, 2),
                        &qp,
                        1e-12,
                    )
                    .unwrap();
                    assert!(rep.pass, "{rep}");
                }
            }
        }
        // [0] case reduces to [5] = [5]
        let qp = QPoint::real(1.3).unwrap();
        let rep = check_q_identity(
            Rational64::from_integer(0),
            Rational64::from_integer(5),
            &qp,
            1e-12,
        )
        .unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn laurent_basics() {
        // (u + u^-1)(u - u^-1) = u^2 - u^-2
        let a = &LaurentU::u_pow(1) + &LaurentU::u_pow(-1);
        let b = &LaurentU::u_pow(1) - &LaurentU::u_pow(-1);
        let p = &a * &b;
        let expect = &LaurentU::u_pow(2) - &LaurentU::u_pow(-2);
        assert_eq!(p, expect);

        let qp = QPoint::real(1.3).unwrap();
        assert!((LaurentU::u_pow(8).eval(&qp).re - 1.3).abs() < 1e-14);

        assert!((&a - &a).is_zero());
    }

    #[test]
    fn omega_localization() {
        let w = LaurentU::omega();
        let winv = LaurentU::omega_inv();
        assert!(w.mul(&winv).is_one());
        // omega/omega = 1 by normalization
        assert!(w.mul_omega_inv().is_one());
        // [n] * omega = u^{8n} - u^{-8n}
        for n in 1..6 {
            let lhs = LaurentU::q_num_int(n).mul(&w);
            let rhs = &LaurentU::u_pow(8 * n) - &LaurentU::u_pow(-8 * n);
            assert_eq!(lhs, rhs);
            // and dividing back recovers [n]
            assert_eq!(rhs.mul_omega_inv(), LaurentU::q_num_int(n));
        }
        // u is not divisible by omega: denominator stays
        let x = LaurentU::u_pow(1).mul_omega_inv();
        assert_eq!(x.omega_den(), 1);
        // 1/(omega^2) * omega = 1/omega
        let y = LaurentU::omega_inv().mul_omega_inv().mul(&w);
        assert_eq!(y, LaurentU::omega_inv());
    }

    #[test]
    fn laurent_inverse() {
        for v in [
            LaurentU::u_pow(5),
            LaurentU::monomial(BigRational::new(BigInt::from(3), BigInt::from(4)), -2),
            LaurentU::omega(),
            LaurentU::omega_inv(),
            LaurentU::omega().mul(&LaurentU::u_pow(3)),
        ] {
            let inv = v.try_inverse().expect("unit");
            assert!(v.mul(&inv).is_one(), "{v:?}");
        }
        // Non-units have no inverse.
        let s = &LaurentU::u_pow(1) + &LaurentU::one();
        assert!(s.try_inverse().is_none());
        assert!(LaurentU::zero().try_inverse().is_none());
    }

    #[test]
    fn q_num_squared_identity_exact() {
        // [n+1][n-1] + 1 = [n]^2, exactly in the ring.
        for n in 1..12 {
            let lhs = LaurentU::q_num_int(n + 1)
                .mul(&LaurentU::q_num_int(n - 1))
                .add(&LaurentU::one());
            let rhs = LaurentU::q_num_int(n).mul(&LaurentU::q_num_int(n));
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn eval_matches_q_num() {
        for qp in qpoints() {
            for n in -6..7 {
                let exact = LaurentU::q_num_int(n).eval(&qp);
                let numeric = qp.q_num_int(n);
                assert!((exact - numeric).norm() < 1e-12, "n={n} at {qp:?}");
            }
        }
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentU> {
        proptest::collection::vec((-20i64..20, -6i64..6), 0..6).prop_map(|pairs| {
            let mut acc = LaurentU::zero();
            for (k, c) in pairs {
                acc = acc.add(&LaurentU::monomial(brat(c), k));
            }
            acc
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn eval_is_ring_homomorphism(a in arb_laurent(), b in arb_laurent()) {
            let qp = QPoint::real(1.3).unwrap();
            let scale = 1.0f64.max(a.eval(&qp).norm()).max(b.eval(&qp).norm());
            let pm = (a.mul(&b).eval(&qp) - a.eval(&qp) * b.eval(&qp)).norm();
            let ps = (a.add(&b).eval(&qp) - (a.eval(&qp) + b.eval(&qp))).norm();
            prop_assert!(pm / (scale * scale) < 1e-12);
            prop_assert!(ps / scale < 1e-12);
        }
    }

    #[test]
    fn half_int_parse_and_format() {
        assert_eq!(HalfInt::parse("3/2").unwrap(), HalfInt::from_twice(3));
        assert_eq!(HalfInt::parse("-1/2").unwrap(), HalfInt::from_twice(-1));
        assert_eq!(HalfInt::parse("2").unwrap(), HalfInt::from_int(2));
        assert_eq!(HalfInt::parse("4/2").unwrap(), HalfInt::from_int(2));
        assert!(HalfInt::parse("7/3").is_err());
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_twice(4).to_string(), "2");
    }
}
