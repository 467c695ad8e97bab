//! Monodromy operators on `H`: torus loops, the loop around the discriminant
//! point of an edge, the wall condition, Horn uniformization of the principal
//! discriminant, and the closed-form composite for two-parameter families.
//!
//! Operators are matrices on the monomial basis of `H` acting on coefficient
//! columns. A loop word `w_1·w_2·…·w_n` is represented by the matrix product
//! `M_{w_1}·M_{w_2}⋯M_{w_n}` in the same order.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::chowring::{
    exp_class, from_poly, generator, linear_map_matrix, one, point_form, AlgebraElement, ChowError,
    EdgeData, GradedAlgebra, Phase,
};
use crate::exactlat::{rat_int, LatticeError, Rational, RationalMatrix};
use crate::poly::{resultant, Poly};
use crate::series::{inverse_linear, nested_series, shifted_series, ExpFunction, LaurentSeries, SeriesError};
use crate::triangulate::{ASet, Circuit};

/// Largest absolute precision tried before giving up on a residue.
const MAX_PRECISION: i64 = 1 << 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("contour reduction invalid: wall condition fails for the circuit")]
    ContourReduction,
    #[error("not a two-parameter family of the expected shape: {0}")]
    NotTwoParameter(String),
    #[error("Horn elimination is implemented for one and two parameters, got {0}")]
    UnsupportedRank(usize),
    #[error("operator is not invertible")]
    Singular,
    #[error("a point has vanishing class, residue integrand undefined")]
    VanishingClass,
}

type Result<T> = std::result::Result<T, MonodromyError>;

/// Laurent series in the contour variable with coefficients in `H`.
pub type LaurentElement = LaurentSeries<AlgebraElement>;

/// Which series the operator acts on: the Γ-series itself (`Phi`), or the
/// rescaled series with the partition factors divided out (`Psi`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    Phi,
    Psi,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Phi => "phi",
            Normalization::Psi => "psi",
        })
    }
}

/// Linear operator on `H` with a description of the loop it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyOperator {
    pub label: String,
    pub matrix: RationalMatrix,
}

impl MonodromyOperator {
    pub fn new(label: impl Into<String>, matrix: RationalMatrix) -> Self {
        MonodromyOperator {
            label: label.into(),
            matrix,
        }
    }

    /// The word `self·other`.
    pub fn then(&self, other: &MonodromyOperator) -> MonodromyOperator {
        MonodromyOperator::new(format!("{}·{}", self.label, other.label), &self.matrix * &other.matrix)
    }

    pub fn inverse(&self) -> Result<MonodromyOperator> {
        let inv = self.matrix.inverse().map_err(|_| MonodromyError::Singular)?;
        Ok(MonodromyOperator::new(format!("{}^-1", self.label), inv))
    }

    /// `g·self·g⁻¹`.
    pub fn conjugate_by(&self, g: &MonodromyOperator) -> Result<MonodromyOperator> {
        Ok(g.then(self).then(&g.inverse()?))
    }

    pub fn pow(&self, e: u32) -> MonodromyOperator {
        MonodromyOperator::new(format!("({})^{}", self.label, e), self.matrix.pow(e))
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.determinant().map(|d| !d.is_zero()).unwrap_or(false)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn apply(&self, g: &AlgebraElement) -> AlgebraElement {
        crate::chowring::element_from_vector(g.algebra(), self.matrix.apply(g.coeffs()))
    }
}

/// Product of a word of operators, left to right.
pub fn compose(word: &[&MonodromyOperator]) -> MonodromyOperator {
    let mut iter = word.iter();
    let first = (*iter.next().expect("nonempty word")).clone();
    iter.fold(first, |acc, op| acc.then(op))
}

/// Loop `z_{j0} ↦ e^{2πi t} z_{j0}`: multiplication by `exp(λ_{j0})`.
pub fn torus_loop(phase: &Phase, j0: usize) -> Result<MonodromyOperator> {
    let e = exp_class(&phase.lambda(j0))?;
    Ok(MonodromyOperator::new(format!("torus:{}", j0 + 1), e.multiplication_matrix()))
}

/// Multiplication by `exp(x)` for a class `x` without constant term.
pub fn class_loop(label: &str, x: &AlgebraElement) -> Result<MonodromyOperator> {
    Ok(MonodromyOperator::new(label, exp_class(x)?.multiplication_matrix()))
}

/// Coefficient of `ξ^{-1}`.
pub fn residue_extract(f: &LaurentElement) -> Result<AlgebraElement> {
    Ok(f.residue()?)
}

/// Evaluates a residue built at increasing precision until it is determined.
pub fn residue_with_retry<T>(mut attempt: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut prec = 8;
    loop {
        match attempt(prec) {
            Err(MonodromyError::Series(SeriesError::PrecisionLoss { .. })) if prec < MAX_PRECISION => prec *= 2,
            other => return other,
        }
    }
}

/// `Σ_a ξ^a G_a` as an exact series.
pub fn xi_polynomial(alg: &Arc<GradedAlgebra>, parts: Vec<AlgebraElement>) -> LaurentElement {
    LaurentSeries::exact(crate::chowring::zero(alg), 0, parts)
}

/// `φ(c·ξ + y)` for nilpotent `y`, as a series in `ξ`.
pub fn factor_series(f: ExpFunction, c: &Rational, y: &AlgebraElement, prec: i64) -> LaurentElement {
    shifted_series(f, c, &y.powers(), prec)
}

fn product(alg: &Arc<GradedAlgebra>, factors: Vec<LaurentElement>) -> LaurentElement {
    factors
        .into_iter()
        .fold(LaurentSeries::constant(one(alg)), |acc, f| acc.mul(&f))
}

/// `∏_{j∈I_-'} (1 - exp(λ_j))`, the factor in front of the residue.
fn minus_prime_prefactor(edge: &EdgeData, alg: &Arc<GradedAlgebra>) -> Result<AlgebraElement> {
    let mut acc = one(alg);
    for (j, q) in edge.circuit.minus_prime() {
        let lam = &edge.mu.scale(&-rat_int(&q)) + &edge.mu_prime[j];
        acc = &acc * &(&one(alg) - &exp_class(&lam)?);
    }
    Ok(acc)
}

/// `∏_{j∈I_-''} (1 - exp(λ_j))` evaluated at `μ`.
fn minus_dprime_prefactor(edge: &EdgeData, alg: &Arc<GradedAlgebra>) -> Result<AlgebraElement> {
    let mut acc = one(alg);
    for (j, d) in edge.circuit.minus_dprime() {
        let lam = &edge.mu.scale(&-rat_int(&d)) + &edge.mu_prime[j];
        acc = &acc * &(&one(alg) - &exp_class(&lam)?);
    }
    Ok(acc)
}

/// The residue in the edge-loop formula for one class `γ`.
fn edge_residue(alg: &Arc<GradedAlgebra>, edge: &EdgeData, g: &AlgebraElement, norm: Normalization) -> Result<AlgebraElement> {
    let parts = edge.split(g);
    residue_with_retry(|prec| {
        let mut factors = vec![xi_polynomial(alg, parts.clone())];
        for (j, q) in edge.circuit.plus() {
            factors.push(factor_series(ExpFunction::InvOneMinusExpNeg, &rat_int(&q), &edge.mu_prime[j], prec));
        }
        match norm {
            Normalization::Psi => {
                for (j, d) in edge.circuit.minus_dprime() {
                    factors.push(factor_series(ExpFunction::OneMinusExpNeg, &rat_int(&d), &-&edge.mu_prime[j], prec));
                }
            }
            Normalization::Phi => {
                let eps = rat_int(&edge.epsilon_prime);
                factors.push(factor_series(ExpFunction::ExpNeg, &eps, &crate::chowring::zero(alg), prec));
            }
        }
        residue_extract(&product(alg, factors))
    })
}

/// The loop around the discriminant point on the curve of an edge:
/// `γ ↦ γ - P·Res_ξ[ … γ(μ→ξ) ]` with the contour reduced to `ξ = 0`.
pub fn edge_loop(phase: &Phase, edge: &EdgeData, norm: Normalization) -> Result<MonodromyOperator> {
    if !check_condition2(&edge.circuit) {
        return Err(MonodromyError::ContourReduction);
    }
    let alg = &phase.h;
    let mut pre = minus_prime_prefactor(edge, alg)?;
    if norm == Normalization::Phi {
        pre = &pre * &minus_dprime_prefactor(edge, alg)?;
        pre = &pre * &exp_class(&edge.mu.scale(&rat_int(&edge.epsilon_prime)))?;
    }
    let matrix = linear_map_matrix(alg, |g| -> Result<AlgebraElement> {
        let res = edge_residue(alg, edge, g, norm)?;
        Ok(g - &(&pre * &res))
    })?;
    Ok(MonodromyOperator::new(format!("edge[{}]:{}", edge.circuit, norm), matrix))
}

/// Nonzero rationals `r ∈ [0,1)` with `r·m ∈ Z`, reduced.
fn fractions(m: &BigInt) -> BTreeSet<Rational> {
    let m = m.to_i64().expect("coefficient exceeds machine range");
    (1..m).map(|a| Rational::new(BigInt::from(a), BigInt::from(m))).collect()
}

fn count_containing(r: &Rational, coeffs: &[(usize, BigInt)]) -> usize {
    coeffs.iter().filter(|(_, q)| (r * rat_int(q)).is_integer()).count()
}

/// For every nonzero `r`, `#{j∈I_+ : r∈A_{q_j}} ≤ #{j∈I_-'' : r∈A_{d_j}}`.
pub fn check_condition2(c: &Circuit) -> bool {
    let plus = c.plus();
    let dprime = c.minus_dprime();
    let candidates: BTreeSet<Rational> = plus.iter().flat_map(|(_, q)| fractions(q)).collect();
    candidates
        .iter()
        .all(|r| count_containing(r, &plus) <= count_containing(r, &dprime))
}

/// Dense univariate polynomial, ascending coefficients.
fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn upoly_divides(d: &[Rational], n: &[Rational]) -> bool {
    let mut rem = n.to_vec();
    let lead = d.last().expect("nonzero divisor").clone();
    while rem.len() >= d.len() {
        let c = rem.last().expect("nonempty").clone() / &lead;
        let shift = rem.len() - d.len();
        for (i, x) in d.iter().enumerate() {
            rem[shift + i] -= &c * x;
        }
        rem.pop();
    }
    rem.iter().all(|x| x.is_zero())
}

/// The wall condition as polynomial divisibility: `∏_{I_+} (1+t+…+t^{q_j-1})`
/// divides `∏_{I_-''} (1 - t^{d_j})`.
pub fn condition2_by_divisibility(c: &Circuit) -> bool {
    let small = |x: &BigInt| x.to_usize().expect("coefficient exceeds machine range");
    let den = c
        .plus()
        .iter()
        .fold(vec![Rational::one()], |acc, (_, q)| upoly_mul(&acc, &vec![Rational::one(); small(q)]));
    let num = c.minus_dprime().iter().fold(vec![Rational::one()], |acc, (_, d)| {
        let mut f = vec![Rational::zero(); small(d) + 1];
        f[0] = Rational::one();
        f[small(d)] = -Rational::one();
        upoly_mul(&acc, &f)
    });
    upoly_divides(&den, &num)
}

/// `∏_j |h_j|^{h_j}` over the support of the circuit.
pub fn conifold_value(c: &Circuit) -> Rational {
    c.h()
        .iter()
        .filter(|x| !x.is_zero())
        .fold(Rational::one(), |acc, h| {
            let e = h.to_i64().expect("coefficient exceeds machine range");
            acc * crate::series::rational_pow(&rat_int(&h.abs()), e)
        })
}

/// Rational parameterization `x_i = num_i(u)/den_i(u)` of the principal
/// discriminant, and its implicit equation in `x_1..x_r` when eliminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornDiscriminant {
    pub parameterization: Vec<(Poly, Poly)>,
    pub implicit: Poly,
}

/// `x_i = ∏_j (s_j⟨w_j,u⟩)^{w_{j,i}}` with `s_j = -1` on the partition
/// vertices, from the large-`t` limits of coefficient ratios.
pub fn horn_parameterization(a: &ASet) -> Vec<(Poly, Poly)> {
    let r = a.corank();
    let b = a.relations();
    (0..r)
        .map(|i| {
            let mut num = Poly::one(r);
            let mut den = Poly::one(r);
            for j in 0..a.len() {
                let w: Vec<Rational> = b.column(j).iter().map(rat_int).collect();
                let e = b.get(i, j).to_i64().expect("small exponent");
                if e == 0 {
                    continue;
                }
                let mut form = Poly::linear(&w);
                if j < a.k() {
                    form = -&form;
                }
                let p = form.pow(e.unsigned_abs() as u32);
                if e > 0 {
                    num = &num * &p;
                } else {
                    den = &den * &p;
                }
            }
            (num, den)
        })
        .collect()
}

/// Horn uniformization with the implicit equation, for corank 1 and 2.
pub fn horn_discriminant(a: &ASet) -> Result<HornDiscriminant> {
    let r = a.corank();
    let params = horn_parameterization(a);
    let implicit = match r {
        1 => {
            let (num, den) = &params[0];
            let c = num.evaluate(&[Rational::one()]) / den.evaluate(&[Rational::one()]);
            &Poly::var(1, 0) - &Poly::constant(1, c)
        }
        2 => {
            // Dehomogenize at u = 1; variables (x, y, v).
            let embed = |p: &Poly| p.substitute(&[Poly::one(3), Poly::var(3, 2)]);
            let eqs: Vec<Poly> = params
                .iter()
                .enumerate()
                .map(|(i, (num, den))| &(&Poly::var(3, i) * &embed(den)) - &embed(num))
                .collect();
            let res = resultant(&eqs[0], &eqs[1], 2);
            let mut out = Poly::zero(2);
            for (e, c) in res.terms() {
                out.add_term(vec![e[0], e[1]], c.clone());
            }
            out.monic()
        }
        _ => return Err(MonodromyError::UnsupportedRank(r)),
    };
    Ok(HornDiscriminant {
        parameterization: params,
        implicit,
    })
}

/// `4x²y - (x - c)²`, the expected principal discriminant of the
/// two-parameter family.
pub fn two_param_discriminant(c: &Rational) -> Poly {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let shifted = &x - &Poly::constant(2, c.clone());
    &(&x.pow(2) * &y).scale(&Rational::from_integer(4.into())) - &shifted.pow(2)
}

/// `∬ T(μ,ν) γ(μ,ν) dν dμ` with
/// `T = ∏_{j≤k}(1-e^{λ_j}) / ∏_{j>k}(1-e^{-λ_j})`, the inner residue at
/// `ν = 0` taken for `|ν| ≪ |μ|`.
pub fn double_residue(phase: &Phase, g: &AlgebraElement) -> Result<Rational> {
    let a = &phase.aset;
    if a.corank() != 2 {
        return Err(MonodromyError::NotTwoParameter(format!("corank {}", a.corank())));
    }
    let b = a.relations();
    let lift = g.lift();
    residue_with_retry(|prec| {
        let inner_one = LaurentSeries::constant(Rational::one());
        let mut acc: LaurentSeries<LaurentSeries<Rational>> = LaurentSeries::constant(inner_one.clone());
        for j in 0..a.len() {
            let (p, q) = (rat_int(b.get(0, j)), rat_int(b.get(1, j)));
            if p.is_zero() && q.is_zero() {
                return Err(MonodromyError::VanishingClass);
            }
            let f = if j < a.k() {
                nested_series(ExpFunction::OneMinusExpNeg, &-p, &-q, prec, prec)
            } else {
                nested_series(ExpFunction::InvOneMinusExpNeg, &p, &q, prec, prec)
            };
            acc = acc.mul(&f);
        }
        let mut total = Rational::zero();
        for (e, c) in lift.terms() {
            let shifted = acc.shift(e[1] as i64);
            let inner = shifted.residue()?;
            total += c * inner.shift(e[0] as i64).residue()?;
        }
        Ok(total)
    })
}

/// Indices of the classes `ν` (twice) and `μ - 2ν` in the two-parameter
/// family, read off the relation basis.
fn two_param_shape(a: &ASet) -> Result<(Vec<usize>, usize)> {
    if a.corank() != 2 {
        return Err(MonodromyError::NotTwoParameter(format!("corank {}", a.corank())));
    }
    let b = a.relations();
    let col = |j: usize| (b.get(0, j).clone(), b.get(1, j).clone());
    let nu: Vec<usize> = (0..a.len()).filter(|&j| col(j) == (BigInt::zero(), BigInt::one())).collect();
    let mixed: Vec<usize> = (0..a.len())
        .filter(|&j| col(j) == (BigInt::one(), BigInt::from(-2)))
        .collect();
    if nu.len() != 2 || mixed.len() != 1 {
        return Err(MonodromyError::NotTwoParameter("relation basis does not match".into()));
    }
    Ok((nu, mixed[0]))
}

/// The closed form of the composite loop `p·t·p⁻¹·v`:
/// `γ ↦ e^ν(γ - e^{μ-2ν}·∬Tγ - (1-e^{μ-2ν})·Res_ξ γ(μ,ξ)/(1-e^{-ξ})²)`.
pub fn two_param_lhs_operator(phase: &Phase) -> Result<MonodromyOperator> {
    let (_, mixed) = two_param_shape(&phase.aset)?;
    let alg = &phase.h;
    let nu = generator(alg, 1);
    let mixed_class = from_poly(alg, &point_form(&phase.aset, mixed));
    let e_nu = exp_class(&nu)?;
    let e_mixed = exp_class(&mixed_class)?;
    let matrix = linear_map_matrix(alg, |g| -> Result<AlgebraElement> {
        let s = double_residue(phase, g)?;
        let parts: Vec<AlgebraElement> = {
            let by_power = g.lift().coefficients_in(1);
            let top = by_power.keys().next_back().copied().unwrap_or(0) as usize;
            (0..=top)
                .map(|p| by_power.get(&(p as u32)).map_or_else(|| crate::chowring::zero(alg), |c| from_poly(alg, c)))
                .collect()
        };
        let res = residue_with_retry(|prec| {
            let inv = ExpFunction::InvOneMinusExpNeg.series(prec);
            let sq = inv.mul(&inv).map(crate::chowring::zero(alg), |c| one(alg).scale(c));
            residue_extract(&sq.mul(&xi_polynomial(alg, parts.clone())))
        })?;
        let inner = &(g - &e_mixed.scale(&s)) - &(&(&one(alg) - &e_mixed) * &res);
        Ok(&e_nu * &inner)
    })?;
    Ok(MonodromyOperator::new("p·t·p^-1·v", matrix))
}

/// `∫_W γ·Todd_W` as a functional, for comparison with [`double_residue`].
pub fn todd_pairing(phase: &Phase, g: &AlgebraElement) -> Result<Rational> {
    Ok(phase.integrate(&(g * &phase.todd()?))?)
}

/// Gysin-type residue `Res_ξ ∏_j (h_j ξ + y_j)^{-1} · f(ξ)` for exact
/// inverse-linear factors.
pub fn inverse_linear_residue(
    factors: &[(Rational, AlgebraElement)],
    f: &LaurentElement,
) -> Result<AlgebraElement> {
    let mut series = f.clone();
    for (h, y) in factors {
        series = series.mul(&inverse_linear(h, &y.powers()));
    }
    residue_extract(&series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chowring::edge_coordinates;
    use crate::exactlat::{lattice_vector, rat};
    use crate::triangulate::{build_aset, circuit_between, triangulation_from_weights, NefSpec};

    fn quintic() -> (Phase, EdgeData) {
        let a = build_aset(&NefSpec {
            k: 1,
            rays: vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![-1, -1, -1, -1],
            ],
            groups: vec![0; 5],
        })
        .unwrap();
        let t1 = triangulation_from_weights(&a, &lattice_vector(&[1])).unwrap();
        let t2 = triangulation_from_weights(&a, &lattice_vector(&[-1])).unwrap();
        let p = Phase::new(&a, &t1).unwrap();
        let c = circuit_between(&a, &t1, &t2).unwrap();
        let e = edge_coordinates(&p, &c).unwrap();
        (p, e)
    }

    #[test]
    fn quintic_edge_loop_values() {
        let (p, e) = quintic();
        let m = edge_loop(&p, &e, Normalization::Psi).unwrap();
        let l = p.lambda(1);
        let one_el = one(&p.h);
        assert_eq!(m.apply(&l.pow(3)), &l.pow(3) - &one_el.scale(&rat(5, 1)));
        assert_eq!(m.apply(&l), &l - &one_el.scale(&rat(25, 6)));
        assert_eq!(m.apply(&one_el), one_el);
    }

    #[test]
    fn quintic_condition2() {
        let (_, e) = quintic();
        assert!(check_condition2(&e.circuit));
        assert!(condition2_by_divisibility(&e.circuit));
        assert_eq!(conifold_value(&e.circuit), rat(1, 3125));
    }
}
