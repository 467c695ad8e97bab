//! Cohomology-valued Γ-series of a GKZ system, truncated to a bounded
//! region of the dual cone, with exact checks of the box and Euler
//! equations and the Frobenius basis of scalar solutions.
//!
//! The transcendental factor `∏_j 1/Γ(1+λ_j)` is common to every
//! coefficient and is divided out, so coefficients are rational elements of
//! `H`: products of factors `(λ_j + m)` and inverses of such units.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::chowring::{one, AlgebraElement, ChowError, Phase};
use crate::exactlat::{dot, rat_int, IntMatrix, LatticeError, LatticeVector, Rational};
use crate::triangulate::{Chamber, TriangulationError};

/// Number of lattice points visited before the enumeration is abandoned.
const ENUMERATION_GUARD: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkzError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("vector {0:?} is not in the relation lattice")]
    NotARelation(LatticeVector),
    #[error("chamber does not belong to the phase's triangulation")]
    ChamberMismatch,
    #[error("support enumeration exceeded {guard} points at order {order}")]
    EnumerationGuard { guard: usize, order: usize },
}

type Result<T> = std::result::Result<T, GkzError>;

/// Coefficient of the Γ-series at a relation `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCoefficient {
    pub l: LatticeVector,
    pub value: AlgebraElement,
}

/// Γ-series truncated to `l ∈ C^∨ ∩ L` with chamber height at most `order`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    /// Generators of the chamber, in relation-dual coordinates.
    pub chamber: Vec<LatticeVector>,
    pub order: usize,
    pub terms: BTreeMap<LatticeVector, GammaCoefficient>,
}

impl TruncatedSeries {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, l: &[BigInt]) -> Option<&AlgebraElement> {
        self.terms.get(l).map(|c| &c.value)
    }
}

/// Inverse of `c + x` for a nonzero constant `c` and nilpotent `x`.
fn unit_inverse(u: &AlgebraElement) -> Result<AlgebraElement> {
    let c = u.constant_term();
    if c.is_zero() {
        return Err(ChowError::NonNilpotent.into());
    }
    let x = &u.scale(&c.recip()) - &one(u.algebra());
    let mut acc = one(u.algebra());
    let mut term = one(u.algebra());
    let neg = -&x;
    loop {
        term = &term * &neg;
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    Ok(acc.scale(&c.recip()))
}

/// `∏_{i=a}^{b} (x + i)`, empty product one.
fn rising(x: &AlgebraElement, a: i64, b: i64) -> AlgebraElement {
    let unit = one(x.algebra());
    (a..=b).fold(unit.clone(), |acc, i| &acc * &(x + &unit.scale(&Rational::from_integer(i.into()))))
}

/// `Γ(1+x)/Γ(x+1+m)` for integer `m`, exact in a nilpotent algebra.
fn gamma_ratio(x: &AlgebraElement, m: i64) -> Result<AlgebraElement> {
    if m >= 0 {
        unit_inverse(&rising(x, 1, m))
    } else {
        Ok(rising(x, m + 1, 0))
    }
}

fn small(x: &BigInt) -> i64 {
    x.to_i64().expect("lattice coordinate exceeds machine range")
}

/// `∏_{j≤k} Γ(1+λ_j)/Γ(λ_j+l_j) · ∏_{j>k} Γ(1+λ_j)/Γ(1+λ_j+l_j)` in `R_T`.
fn ring_coefficient(phase: &Phase, l: &[BigInt]) -> Result<AlgebraElement> {
    let k = phase.aset.k();
    let mut acc = one(&phase.ring);
    for (j, lj) in l.iter().enumerate() {
        let shift = if j < k { -1 } else { 0 };
        acc = &acc * &gamma_ratio(&phase.lambda_ring(j), small(lj) + shift)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

fn check_relation(phase: &Phase, l: &[BigInt]) -> Result<()> {
    if l.len() != phase.aset.len() || !phase.aset.is_relation(l) {
        return Err(GkzError::NotARelation(l.to_vec()));
    }
    Ok(())
}

fn partition_sign(phase: &Phase, l: &[BigInt]) -> Rational {
    let s: BigInt = l[..phase.aset.k()].iter().sum();
    if s.is_even() {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Coefficient of `x^l` in the rescaled Γ-series:
/// `(-1)^{Σ_{j≤k} l_j}` times the ratio of Γ-factors divided by `λ_1⋯λ_k`.
pub fn gamma_coefficient(phase: &Phase, l: &[BigInt]) -> Result<AlgebraElement> {
    check_relation(phase, l)?;
    let c = phase.divide_by_product(&ring_coefficient(phase, l)?)?;
    Ok(c.scale(&partition_sign(phase, l)))
}

/// Integer points `y ≥ 0` with `Σy ≤ order`.
fn bounded_points(dim: usize, order: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                let used: i64 = p.iter().sum();
                (0..=(order as i64 - used)).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Relations `l = Σ_p m_p ℓ_p` with `G m ≥ 0` and `Σ G m ≤ order`, where the
/// rows of `G` are the chamber generators.
pub fn cone_support(phase: &Phase, chamber: &Chamber, order: usize) -> Result<Vec<LatticeVector>> {
    let a = &phase.aset;
    let r = a.corank();
    let gens = IntMatrix::from_big_rows(&chamber.generators)?;
    if gens.rows() != r || gens.cols() != r {
        return Err(GkzError::ChamberMismatch);
    }
    let ginv = gens.to_rational().inverse()?;
    let rel = a.relations();
    let mut out = Vec::new();
    let mut visited = 0;
    for y in bounded_points(r, order) {
        visited += 1;
        if visited > ENUMERATION_GUARD {
            return Err(GkzError::EnumerationGuard {
                guard: ENUMERATION_GUARD,
                order,
            });
        }
        let yr: Vec<Rational> = y.iter().map(|&v| Rational::from_integer(v.into())).collect();
        let m = ginv.apply(&yr);
        if m.iter().any(|x| !x.is_integer()) {
            continue;
        }
        let l: LatticeVector = (0..a.len())
            .map(|j| (0..r).map(|p| m[p].to_integer() * rel.get(p, j)).sum())
            .collect();
        out.push(l);
    }
    out.sort();
    Ok(out)
}

/// Γ-series of the phase on the chamber `C`, truncated at `order`.
pub fn phi_series(phase: &Phase, chamber: &Chamber, order: usize) -> Result<TruncatedSeries> {
    if chamber.triangulation != phase.triangulation {
        return Err(GkzError::ChamberMismatch);
    }
    let mut terms = BTreeMap::new();
    for l in cone_support(phase, chamber, order)? {
        let value = gamma_coefficient(phase, &l)?;
        terms.insert(l.clone(), GammaCoefficient { l, value });
    }
    Ok(TruncatedSeries {
        chamber: chamber.generators.clone(),
        order,
        terms,
    })
}

/// Exponent of `z_j` in the monomial carrying the coefficient at `l`.
fn exponent(phase: &Phase, l: &[BigInt], j: usize) -> AlgebraElement {
    let c = Rational::from_integer(exponent_shift(phase, l, j).into());
    &phase.lambda(j) + &one(&phase.h).scale(&c)
}

/// Integer part of the exponent of `z_j`: `l_j - 1` on the partition
/// vertices, `l_j` elsewhere.
fn exponent_shift(phase: &Phase, l: &[BigInt], j: usize) -> i64 {
    if j < phase.aset.k() {
        small(&l[j]) - 1
    } else {
        small(&l[j])
    }
}

/// `∏_j e_j(e_j-1)⋯(e_j-n_j+1)` for the exponents at `l`.
fn falling(phase: &Phase, l: &[BigInt], n: &[i64]) -> AlgebraElement {
    let mut acc = one(&phase.h);
    for (j, &nj) in n.iter().enumerate() {
        let e = exponent(phase, l, j);
        for i in 0..nj {
            acc = &acc * &(&e - &one(&phase.h).scale(&Rational::from_integer(i.into())));
        }
    }
    acc
}

/// Stored coefficient at `l` without the partition sign.
fn stored_unsigned(phase: &Phase, s: &TruncatedSeries, l: &[BigInt]) -> Option<AlgebraElement> {
    s.coefficient(l).map(|c| c.scale(&partition_sign(phase, l)))
}

/// `c(l)·[e(l)]_n` with `[e]_n` the falling factorial produced by `∂^n` on
/// `z^e`. Uses the stored coefficient when present; otherwise the product is
/// formed in `R_T` and divided by `λ_1⋯λ_k` afterwards, since `c(l)` alone
/// need not be divisible.
fn coefficient_times_falling(phase: &Phase, s: &TruncatedSeries, l: &[BigInt], n: &[i64]) -> Result<AlgebraElement> {
    match stored_unsigned(phase, s, l) {
        Some(c) => Ok(&c * &falling(phase, l, n)),
        None => {
            let ring = &ring_coefficient(phase, l)? * &ring_falling(phase, l, n);
            Ok(phase.divide_by_product(&ring)?)
        }
    }
}

/// Box equation for `rel` at every stored `l`:
/// `c(l)·[e(l)]_{ℓ⁺} = c(l-ℓ)·[e(l-ℓ)]_{ℓ⁻}`.
pub fn verify_box(phase: &Phase, s: &TruncatedSeries, rel: &[BigInt]) -> Result<bool> {
    check_relation(phase, rel)?;
    let plus: Vec<i64> = rel.iter().map(|x| small(x).max(0)).collect();
    let minus: Vec<i64> = rel.iter().map(|x| (-small(x)).max(0)).collect();
    for l in s.terms.keys() {
        let shifted: LatticeVector = l.iter().zip(rel).map(|(a, b)| a - b).collect();
        let lhs = coefficient_times_falling(phase, s, l, &plus)?;
        let rhs = coefficient_times_falling(phase, s, &shifted, &minus)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ring_falling(phase: &Phase, l: &[BigInt], n: &[i64]) -> AlgebraElement {
    let unit = one(&phase.ring);
    let mut acc = unit.clone();
    for (j, &nj) in n.iter().enumerate() {
        let e = &phase.lambda_ring(j) + &unit.scale(&Rational::from_integer(exponent_shift(phase, l, j).into()));
        for i in 0..nj {
            acc = &acc * &(&e - &unit.scale(&Rational::from_integer(i.into())));
        }
    }
    acc
}

/// Euler equations `(Σ_j v̄_{ja} z_j∂_j - β_a)Φ = 0` with
/// `β = -(v̄_1 + … + v̄_k)`, checked on every stored term.
pub fn verify_euler(phase: &Phase, s: &TruncatedSeries) -> bool {
    let a = &phase.aset;
    let dim = a.point(0).len();
    let beta: Vec<BigInt> = (0..dim)
        .map(|c| -(0..a.k()).map(|j| a.point(j)[c].clone()).sum::<BigInt>())
        .collect();
    s.terms.iter().all(|(l, c)| {
        (0..dim).all(|coord| {
            let mut op = one(&phase.h).scale(&-rat_int(&beta[coord]));
            for j in 0..a.len() {
                op = &op + &exponent(phase, l, j).scale(&rat_int(&a.point(j)[coord]));
            }
            (&op * &c.value).is_zero()
        })
    })
}

/// Box equations for `rel` and the Euler equations on the truncated series.
pub fn verify_gkz_annihilation(phase: &Phase, s: &TruncatedSeries, rel: &[BigInt]) -> Result<bool> {
    Ok(verify_box(phase, s, rel)? && verify_euler(phase, s))
}

/// Scalar series `l ↦ F(c(l))` for each coordinate functional `F` of the
/// monomial basis of `H`.
pub fn frobenius_basis(s: &TruncatedSeries) -> Vec<BTreeMap<LatticeVector, Rational>> {
    let dim = s.terms.values().next().map_or(0, |c| c.value.algebra().dim());
    (0..dim)
        .map(|i| {
            s.terms
                .iter()
                .map(|(l, c)| (l.clone(), c.value.coefficient(i).clone()))
                .collect()
        })
        .collect()
}

/// Pairing of a relation with a dual-cone generator, used for the support
/// invariant.
pub fn in_dual_cone(phase: &Phase, chamber: &Chamber, l: &[BigInt]) -> Result<bool> {
    let m = phase.aset.relation_coordinates(l)?;
    Ok(chamber
        .generators
        .iter()
        .all(|w| !dot(w, &m).is_negative()))
}
