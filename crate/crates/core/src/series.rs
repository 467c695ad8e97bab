//! Truncated Laurent series with absolute precision tracking, and the
//! exponential-type functions the residue formulas are built from.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactlat::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient of x^{requested} unavailable: series known only below x^{available}")]
    PrecisionLoss { requested: i64, available: i64 },
}

/// Coefficient ring of a Laurent series.
pub trait Coeff: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    /// True only for an exact zero.
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

/// `Σ_{e ≥ val} c_e x^e + O(x^prec)`; `prec = None` means exact.
#[derive(Clone, Debug)]
pub struct LaurentSeries<C> {
    val: i64,
    coeffs: Vec<C>,
    prec: Option<i64>,
    zero: C,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl<C: Coeff> LaurentSeries<C> {
    pub fn new(zero: C, val: i64, coeffs: Vec<C>, prec: Option<i64>) -> Self {
        let mut s = LaurentSeries {
            val,
            coeffs,
            prec,
            zero,
        };
        s.normalize();
        s
    }

    pub fn exact(zero: C, val: i64, coeffs: Vec<C>) -> Self {
        Self::new(zero, val, coeffs, None)
    }

    pub fn zero(zero: C) -> Self {
        Self::exact(zero, 0, Vec::new())
    }

    /// The constant series `c`.
    pub fn constant(c: C) -> Self {
        let zero = c.zero_like();
        Self::exact(zero, 0, vec![c])
    }

    /// `c·x^e`.
    pub fn monomial(c: C, e: i64) -> Self {
        let zero = c.zero_like();
        Self::exact(zero, e, vec![c])
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.val).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn valuation_bound(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn zero_coefficient(&self) -> &C {
        &self.zero
    }

    pub fn coefficient(&self, e: i64) -> Result<C, SeriesError> {
        if let Some(p) = self.prec {
            if e >= p {
                return Err(SeriesError::PrecisionLoss {
                    requested: e,
                    available: p,
                });
            }
        }
        if e < self.val {
            return Ok(self.zero.clone());
        }
        Ok(self
            .coeffs
            .get((e - self.val) as usize)
            .cloned()
            .unwrap_or_else(|| self.zero.clone()))
    }

    /// Coefficient of `x^{-1}`.
    pub fn residue(&self) -> Result<C, SeriesError> {
        self.coefficient(-1)
    }

    /// Exponents with stored coefficients, lowest first.
    pub fn stored_terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.val + i as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        let val = self.val.min(other.val);
        let top_self = self.val + self.coeffs.len() as i64;
        let top_other = other.val + other.coeffs.len() as i64;
        let mut top = top_self.max(top_other);
        if let Some(p) = prec {
            top = top.min(p);
        }
        let coeffs = (val..top.max(val))
            .map(|e| {
                let a = self.coefficient_unchecked(e);
                let b = other.coefficient_unchecked(e);
                a.add(&b)
            })
            .collect();
        Self::new(self.zero.clone(), val, coeffs, prec)
    }

    fn coefficient_unchecked(&self, e: i64) -> C {
        if e < self.val {
            return self.zero.clone();
        }
        self.coeffs
            .get((e - self.val) as usize)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = min_prec(
            self.prec.map(|p| p + other.val),
            other.prec.map(|p| p + self.val),
        );
        let val = self.val + other.val;
        let mut top = self.val + self.coeffs.len() as i64 + other.val + other.coeffs.len() as i64 - 1;
        if let Some(p) = prec {
            top = top.min(p);
        }
        let len = (top - val).max(0) as usize;
        let mut coeffs = vec![self.zero.clone(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[k] = coeffs[k].add(&a.mul(b));
            }
        }
        Self::new(self.zero.clone(), val, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        Self::new(self.zero.clone(), self.val, coeffs, self.prec)
    }

    /// Multiplies every coefficient by a ring element.
    pub fn times_coefficient(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.mul(c)).collect();
        Self::new(self.zero.clone(), self.val, coeffs, self.prec)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(
            self.zero.clone(),
            self.val + k,
            self.coeffs.clone(),
            self.prec.map(|p| p + k),
        )
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(
            self.zero.clone(),
            self.val,
            self.coeffs.clone(),
            min_prec(self.prec, Some(prec)),
        )
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(self.val + i as i64))))
            .collect();
        Self::new(self.zero.clone(), self.val - 1, coeffs, self.prec.map(|p| p - 1))
    }

    /// Substitutes `x ↦ a·x` for a nonzero rational `a`.
    pub fn rescale_variable(&self, a: &Rational) -> Self {
        assert!(!Zero::is_zero(a), "rescaling by zero");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&rational_pow(a, self.val + i as i64)))
            .collect();
        Self::new(self.zero.clone(), self.val, coeffs, self.prec)
    }

    /// Maps coefficients into another ring.
    pub fn map<D: Coeff>(&self, zero: D, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries::new(zero, self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }
}

impl<C: Coeff> Coeff for LaurentSeries<C> {
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.zero.clone())
    }

    fn is_zero(&self) -> bool {
        self.prec.is_none() && self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        LaurentSeries::add(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        LaurentSeries::mul(self, other)
    }

    fn scale(&self, c: &Rational) -> Self {
        LaurentSeries::scale(self, c)
    }
}

pub fn rational_pow(a: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(a.clone(), e as usize)
    } else {
        num_traits::pow(a.recip(), (-e) as usize)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// The four exponential-type factors appearing in residue integrands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpFunction {
    /// `e^{-x}`
    ExpNeg,
    /// `1 - e^{-x}`
    OneMinusExpNeg,
    /// `1 / (1 - e^{-x})`
    InvOneMinusExpNeg,
    /// `x / (1 - e^{-x})`
    Todd,
}

impl ExpFunction {
    pub fn valuation(self) -> i64 {
        match self {
            ExpFunction::ExpNeg | ExpFunction::Todd => 0,
            ExpFunction::OneMinusExpNeg => 1,
            ExpFunction::InvOneMinusExpNeg => -1,
        }
    }

    /// Expansion at `x = 0` known below `x^prec`.
    pub fn series(self, prec: i64) -> LaurentSeries<Rational> {
        let z = Rational::zero();
        let n = |p: i64| p.max(0) as u64;
        match self {
            ExpFunction::ExpNeg => {
                let coeffs = (0..n(prec)).map(|i| sign(i) * inv_factorial(i)).collect();
                LaurentSeries::new(z, 0, coeffs, Some(prec))
            }
            ExpFunction::OneMinusExpNeg => {
                let coeffs = (0..n(prec - 1))
                    .map(|i| -(sign(i + 1) * inv_factorial(i + 1)))
                    .collect();
                LaurentSeries::new(z, 1, coeffs, Some(prec))
            }
            ExpFunction::Todd => LaurentSeries::new(z, 0, todd_coefficients(n(prec) as usize), Some(prec)),
            ExpFunction::InvOneMinusExpNeg => {
                let coeffs = todd_coefficients(n(prec + 1) as usize);
                LaurentSeries::new(z, -1, coeffs, Some(prec))
            }
        }
    }

    /// Evaluates the power series at a nilpotent argument given by the
    /// powers `x^0, x^1, …` (the list ends where powers vanish).
    pub fn evaluate_nilpotent<C: Coeff>(self, powers: &[C]) -> Result<C, SeriesError> {
        assert!(self.valuation() >= 0, "only power series can be evaluated at nilpotents");
        let s = self.series(powers.len() as i64);
        let mut acc = powers[0].zero_like();
        for (i, p) in powers.iter().enumerate() {
            let c = s.coefficient(i as i64)?;
            if !Zero::is_zero(&c) {
                acc = acc.add(&p.scale(&c));
            }
        }
        Ok(acc)
    }
}

fn sign(i: u64) -> Rational {
    if i.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Coefficients of `x/(1-e^{-x})` by inverting `(1-e^{-x})/x`.
pub fn todd_coefficients(n: usize) -> Vec<Rational> {
    let h: Vec<Rational> = (0..n as u64).map(|i| sign(i) * inv_factorial(i + 1)).collect();
    let mut g: Vec<Rational> = Vec::with_capacity(n);
    for m in 0..n {
        if m == 0 {
            g.push(Rational::one());
            continue;
        }
        let s: Rational = (1..=m).map(|i| &h[i] * &g[m - i]).sum();
        g.push(-s);
    }
    g
}

/// `φ(c·x + y)` as a series in `x` with coefficients in the ring of `y`,
/// for `y` nilpotent with the given powers `y^0, y^1, …`. Uses
/// `φ(X + Y) = Σ φ^{(i)}(X) Y^i / i!`.
pub fn shifted_series<C: Coeff>(
    f: ExpFunction,
    c: &Rational,
    y_powers: &[C],
    prec: i64,
) -> LaurentSeries<C> {
    let zero = y_powers[0].zero_like();
    let depth = y_powers.len() as i64;
    let mut phi = f.series(prec + depth);
    let mut out = LaurentSeries::zero(zero.clone());
    for (i, yp) in y_powers.iter().enumerate() {
        if i > 0 {
            phi = phi.derivative();
        }
        let term = phi
            .rescale_variable(c)
            .scale(&inv_factorial(i as u64))
            .map(zero.clone(), |r| yp.scale(r));
        out = out.add(&term);
    }
    out.truncate(prec)
}

/// `(h·x + y)^{-1} = Σ_m (-y)^m / (h·x)^{m+1}` for nilpotent `y`, exact.
pub fn inverse_linear<C: Coeff>(h: &Rational, y_powers: &[C]) -> LaurentSeries<C> {
    let zero = y_powers[0].zero_like();
    let depth = y_powers.len() as i64;
    let coeffs: Vec<C> = (0..depth)
        .rev()
        .map(|m| {
            let s = if m % 2 == 0 { Rational::one() } else { -Rational::one() };
            y_powers[m as usize].scale(&(s * rational_pow(h, -(m + 1))))
        })
        .collect();
    LaurentSeries::exact(zero, -depth, coeffs)
}

/// `φ(a·μ + b·ν)` expanded for `|ν| ≪ |μ|`: a series in `ν` whose
/// coefficients are Laurent series in `μ`.
pub fn nested_series(
    f: ExpFunction,
    a: &Rational,
    b: &Rational,
    prec_mu: i64,
    prec_nu: i64,
) -> LaurentSeries<LaurentSeries<Rational>> {
    let zr = Rational::zero();
    let inner_zero = LaurentSeries::zero(zr.clone());
    if Zero::is_zero(a) {
        let outer = f.series(prec_nu).rescale_variable(b);
        return outer.map(inner_zero, |r| LaurentSeries::constant(r.clone()));
    }
    let mut phi = f.series(prec_mu + prec_nu.max(0) + 1);
    let mut coeffs = Vec::new();
    for i in 0..prec_nu.max(0) {
        if i > 0 {
            phi = phi.derivative();
        }
        let scale = rational_pow(b, i) * inv_factorial(i as u64);
        let inner = if Zero::is_zero(b) && i > 0 {
            LaurentSeries::zero(zr.clone())
        } else {
            phi.rescale_variable(a).scale(&scale).truncate(prec_mu)
        };
        coeffs.push(inner);
    }
    let prec = if Zero::is_zero(b) { None } else { Some(prec_nu) };
    LaurentSeries::new(inner_zero, 0, coeffs, prec)
}
