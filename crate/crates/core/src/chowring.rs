//! Stanley-Reisner rings of triangulations, the quotient `H` by the
//! annihilator of the partition classes, integration, Todd classes and the
//! coordinates adapted to a circuit.
//!
//! Algebras are graded quotients of `Q[t_1..t_r]`, where `t` are coordinates
//! dual to the relation basis and each point contributes the linear form
//! `λ_i = ⟨w_i, t⟩`. Each degree is handled by exact linear algebra; the
//! basis consists of standard monomials ordered by degree, then
//! lexicographically with larger exponents first.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlat::{
    extend_to_basis, nullspace, rat_int, rref, solve, IntMatrix, LatticeError, Rational,
    RationalMatrix,
};
use crate::poly::{Exponent, Poly};
use crate::series::{ExpFunction, SeriesError};
use crate::triangulate::{ASet, Circuit, Triangulation, TriangulationError};

const MAX_DEGREE: usize = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("quotient is not finite dimensional below degree {0}")]
    Infinite(usize),
    #[error("product of the partition classes vanishes")]
    ZeroProduct,
    #[error("class is not divisible by the product of the partition classes")]
    NotDivisible,
    #[error("not a smooth phase: {0}")]
    NotSmoothPhase(String),
    #[error("class has a nonzero constant term")]
    NonNilpotent,
    #[error("element is not homogeneous")]
    NotHomogeneous,
}

type Result<T> = std::result::Result<T, ChowError>;

/// Monomials of degree `d` in `n` variables, largest first.
pub fn monomials(n: usize, d: usize) -> Vec<Exponent> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d as u32, &mut Vec::new(), &mut out);
    out
}

/// Finite-dimensional graded quotient of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    names: Vec<String>,
    basis: Vec<Exponent>,
    degrees: Vec<usize>,
    top_degree: usize,
    normal_forms: BTreeMap<Exponent, Vec<Rational>>,
    mult: Vec<Vec<Vec<Rational>>>,
}

impl GradedAlgebra {
    /// Builds `Q[t]/J` where `relations(d, monomials)` spans `J_d` in the
    /// coordinates of the listed degree-`d` monomials.
    pub fn from_relations(
        names: Vec<String>,
        relations: impl Fn(usize, &[Exponent]) -> Result<Vec<Vec<Rational>>>,
    ) -> Result<GradedAlgebra> {
        let nvars = names.len();
        let mut basis: Vec<Exponent> = Vec::new();
        let mut degrees = Vec::new();
        let mut per_degree: Vec<(Vec<Exponent>, Vec<usize>, Vec<Vec<Rational>>, Vec<usize>)> = Vec::new();
        let mut d = 0;
        loop {
            if d > MAX_DEGREE {
                return Err(ChowError::Infinite(MAX_DEGREE));
            }
            let mons = monomials(nvars, d);
            let mut span = relations(d, &mons)?;
            let (_, pivots) = rref(&mut span);
            let standard: Vec<usize> = (0..mons.len()).filter(|c| !pivots.contains(c)).collect();
            if standard.is_empty() {
                break;
            }
            for &s in &standard {
                basis.push(mons[s].clone());
                degrees.push(d);
            }
            per_degree.push((mons, pivots, span, standard));
            d += 1;
        }
        let top_degree = d.saturating_sub(1);
        let dim = basis.len();
        let index: BTreeMap<Exponent, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut normal_forms = BTreeMap::new();
        for (mons, pivots, span, standard) in &per_degree {
            for (c, m) in mons.iter().enumerate() {
                let mut v = vec![Rational::zero(); dim];
                if let Some(row) = pivots.iter().position(|&p| p == c) {
                    for &s in standard {
                        v[index[&mons[s]]] = -span[row][s].clone();
                    }
                } else {
                    v[index[m]] = Rational::one();
                }
                normal_forms.insert(m.clone(), v);
            }
        }
        let mut alg = GradedAlgebra {
            names,
            basis,
            degrees,
            top_degree,
            normal_forms,
            mult: Vec::new(),
        };
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let e: Exponent = alg.basis[i].iter().zip(&alg.basis[j]).map(|(a, b)| a + b).collect();
                mult[i][j] = alg.normal_form(&e);
            }
        }
        alg.mult = mult;
        Ok(alg)
    }

    /// `Q[t]` modulo the ideal generated by homogeneous polynomials.
    pub fn from_ideal(names: Vec<String>, generators: &[Poly]) -> Result<GradedAlgebra> {
        let nvars = names.len();
        GradedAlgebra::from_relations(names, |d, mons| {
            let mut rows = Vec::new();
            for g in generators {
                let Some(e) = g.total_degree() else { continue };
                let e = e as usize;
                if e > d {
                    continue;
                }
                for m in monomials(nvars, d - e) {
                    let p = &g.clone() * &Poly::monomial(m, Rational::one());
                    rows.push(mons.iter().map(|x| p.coeff(x)).collect());
                }
            }
            Ok(rows)
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn basis_monomials(&self) -> &[Exponent] {
        &self.basis
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.degrees[i]
    }

    /// Basis indices of a given degree.
    pub fn degree_range(&self, d: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    /// Coefficient vector of a monomial.
    pub fn normal_form(&self, e: &[u32]) -> Vec<Rational> {
        let deg: u32 = e.iter().sum();
        if deg as usize > self.top_degree {
            return vec![Rational::zero(); self.dim()];
        }
        self.normal_forms[e].clone()
    }

    pub fn monomial_name(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], k) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.basis.iter().map(|e| self.monomial_name(e)).collect()
    }

    /// Checks commutativity and associativity on all basis triples.
    pub fn is_commutative_associative(&self) -> bool {
        let n = self.dim();
        let mul = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); n];
            for i in 0..n {
                if a[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if b[j].is_zero() {
                        continue;
                    }
                    let c = &a[i] * &b[j];
                    for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                        *o += &c * m;
                    }
                }
            }
            out
        };
        let unit = |i: usize| -> Vec<Rational> {
            (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
        };
        for i in 0..n {
            for j in 0..n {
                if self.mult[i][j] != self.mult[j][i] {
                    return false;
                }
                for k in 0..n {
                    let left = mul(&self.mult[i][j], &unit(k));
                    let right = mul(&unit(i), &self.mult[j][k]);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn zero(alg: &Arc<GradedAlgebra>) -> AlgebraElement {
    AlgebraElement::new(alg.clone(), vec![Rational::zero(); alg.dim()])
}

pub fn one(alg: &Arc<GradedAlgebra>) -> AlgebraElement {
    from_poly(alg, &Poly::one(alg.nvars()))
}

/// Class of the variable `t_p`.
pub fn generator(alg: &Arc<GradedAlgebra>, p: usize) -> AlgebraElement {
    from_poly(alg, &Poly::var(alg.nvars(), p))
}

pub fn basis_element(alg: &Arc<GradedAlgebra>, i: usize) -> AlgebraElement {
    let mut v = vec![Rational::zero(); alg.dim()];
    v[i] = Rational::one();
    AlgebraElement::new(alg.clone(), v)
}

pub fn from_poly(alg: &Arc<GradedAlgebra>, p: &Poly) -> AlgebraElement {
    let mut v = vec![Rational::zero(); alg.dim()];
    for (e, c) in p.terms() {
        for (o, x) in v.iter_mut().zip(alg.normal_form(e)) {
            *o += c * x;
        }
    }
    AlgebraElement::new(alg.clone(), v)
}

/// Element of a [`GradedAlgebra`] as a coefficient vector over its basis.
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Arc<GradedAlgebra>,
    coeffs: Vec<Rational>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg)
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.alg.names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.lift().render(&names))
    }
}

impl AlgebraElement {
    pub fn new(alg: Arc<GradedAlgebra>, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), alg.dim(), "coefficient vector must match the basis");
        AlgebraElement { alg, coeffs }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlgebraElement::new(self.alg.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Component of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if self.alg.degree_of(i) == d { c.clone() } else { Rational::zero() })
            .collect();
        AlgebraElement::new(self.alg.clone(), coeffs)
    }

    pub fn constant_term(&self) -> Rational {
        (0..self.coeffs.len())
            .filter(|&i| self.alg.degree_of(i) == 0)
            .map(|i| self.coeffs[i].clone())
            .sum()
    }

    /// The degree when homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let degs: Vec<usize> = (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .map(|i| self.alg.degree_of(i))
            .unique()
            .collect();
        (degs.len() == 1).then(|| degs[0])
    }

    /// Polynomial lift through the standard monomials.
    pub fn lift(&self) -> Poly {
        let mut p = Poly::zero(self.alg.nvars());
        for (c, e) in self.coeffs.iter().zip(self.alg.basis_monomials()) {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = one(&self.alg);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `x^0, x^1, …` up to the first vanishing power (inclusive of the
    /// constant term when `x` is not nilpotent, up to the top degree).
    pub fn powers(&self) -> Vec<AlgebraElement> {
        let mut out = vec![one(&self.alg)];
        for _ in 0..=self.alg.top_degree() {
            let next = out.last().expect("nonempty") * self;
            if next.is_zero() {
                break;
            }
            out.push(next);
        }
        out
    }

    /// Matrix of multiplication by this element, columns are images of the
    /// basis.
    pub fn multiplication_matrix(&self) -> RationalMatrix {
        let n = self.alg.dim();
        let cols: Vec<Vec<Rational>> = (0..n).map(|i| (&basis_element(&self.alg, i) * self).coeffs).collect();
        RationalMatrix::from_columns(&cols).expect("square")
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self.alg.clone(), self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self.alg.clone(), self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement::new(self.alg.clone(), self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let n = self.alg.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let c = &self.coeffs[i] * &rhs.coeffs[j];
                for (o, m) in out.iter_mut().zip(&self.alg.mult[i][j]) {
                    if !m.is_zero() {
                        *o += &c * m;
                    }
                }
            }
        }
        AlgebraElement::new(self.alg.clone(), out)
    }
}

impl crate::series::Coeff for AlgebraElement {
    fn zero_like(&self) -> Self {
        zero(&self.alg)
    }

    fn is_zero(&self) -> bool {
        AlgebraElement::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn scale(&self, c: &Rational) -> Self {
        AlgebraElement::scale(self, c)
    }
}

/// Matrix of a linear map on the algebra; columns are images of the basis.
pub fn linear_map_matrix<E>(
    alg: &Arc<GradedAlgebra>,
    mut f: impl FnMut(&AlgebraElement) -> std::result::Result<AlgebraElement, E>,
) -> std::result::Result<RationalMatrix, E> {
    let mut cols = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        cols.push(f(&basis_element(alg, i))?.coeffs);
    }
    Ok(RationalMatrix::from_columns(&cols).expect("square"))
}

/// Element with the given coefficient vector, for matrix outputs.
pub fn element_from_vector(alg: &Arc<GradedAlgebra>, v: Vec<Rational>) -> AlgebraElement {
    AlgebraElement::new(alg.clone(), v)
}

/// `Σ x^m/m!` for nilpotent `x`.
pub fn exp_class(x: &AlgebraElement) -> Result<AlgebraElement> {
    if !x.constant_term().is_zero() {
        return Err(ChowError::NonNilpotent);
    }
    Ok(ExpFunction::ExpNeg.evaluate_nilpotent(&(-x).powers())?)
}

/// `x/(1-e^{-x})` for nilpotent `x`.
pub fn todd_factor(x: &AlgebraElement) -> Result<AlgebraElement> {
    if !x.constant_term().is_zero() {
        return Err(ChowError::NonNilpotent);
    }
    Ok(ExpFunction::Todd.evaluate_nilpotent(&x.powers())?)
}

/// `(1-e^{-x})/x` for nilpotent `x`, the inverse of [`todd_factor`].
pub fn inverse_todd_factor(x: &AlgebraElement) -> Result<AlgebraElement> {
    if !x.constant_term().is_zero() {
        return Err(ChowError::NonNilpotent);
    }
    let powers = x.powers();
    let coeffs: Vec<Rational> = (0..powers.len() as u64)
        .map(|i| {
            let s = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            s / rat_int(&crate::series::factorial(i + 1))
        })
        .collect();
    let mut acc = zero(x.algebra());
    for (p, c) in powers.iter().zip(&coeffs) {
        acc = &acc + &p.scale(c);
    }
    Ok(acc)
}

/// Names `t1..tr`, or the conventional ones for ranks one and two.
pub fn default_names(r: usize) -> Vec<String> {
    match r {
        1 => vec!["lambda".into()],
        2 => vec!["mu".into(), "nu".into()],
        _ => (1..=r).map(|i| format!("t{i}")).collect(),
    }
}

/// `λ_i = ⟨w_i, t⟩` as a polynomial.
pub fn point_form(a: &ASet, i: usize) -> Poly {
    let w: Vec<Rational> = a.relations().column(i).iter().map(rat_int).collect();
    Poly::linear(&w)
}

/// Subsets of the points lying in no maximal simplex while all their
/// proper subsets do.
pub fn minimal_non_faces(a: &ASet, t: &Triangulation) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for size in 1..=a.n() + 1 {
        for s in (0..a.len()).combinations(size) {
            if t.has_face(&s) {
                continue;
            }
            if out.iter().any(|m| m.iter().all(|x| s.contains(x))) {
                continue;
            }
            out.push(s);
        }
    }
    out
}

/// `Q[λ]/(I_lin + I_mon)` in the coordinates `t`.
pub fn stanley_reisner(a: &ASet, t: &Triangulation, names: Vec<String>) -> Result<Arc<GradedAlgebra>> {
    if names.len() != a.corank() {
        return Err(ChowError::NotSmoothPhase("one name per relation required".into()));
    }
    for s in t.simplices() {
        if s.len() != a.n() {
            return Err(ChowError::NotSmoothPhase("simplex of wrong size".into()));
        }
    }
    let gens: Vec<Poly> = minimal_non_faces(a, t)
        .iter()
        .map(|s| {
            s.iter()
                .fold(Poly::one(a.corank()), |acc, &i| &acc * &point_form(a, i))
        })
        .collect();
    Ok(Arc::new(GradedAlgebra::from_ideal(names, &gens)?))
}

/// `R/Ann(p)` realized on `Q[t]`: degree `d` is the image of multiplication
/// by `p` from degree `d` into degree `d + deg p`.
pub fn quotient_by_annihilator(r: &Arc<GradedAlgebra>, p: &AlgebraElement) -> Result<Arc<GradedAlgebra>> {
    if p.is_zero() {
        return Err(ChowError::ZeroProduct);
    }
    if p.degree().is_none() {
        return Err(ChowError::NotHomogeneous);
    }
    let n = r.nvars();
    let names = r.names().to_vec();
    let alg = GradedAlgebra::from_relations(names, |_d, mons| {
        let images: Vec<Vec<Rational>> = mons
            .iter()
            .map(|m| (&from_poly(r, &Poly::monomial(m.clone(), Rational::one())) * p).coeffs)
            .collect();
        let dim = r.dim();
        let mat: Vec<Vec<Rational>> = (0..dim).map(|row| images.iter().map(|c| c[row].clone()).collect()).collect();
        Ok(nullspace(&mat, mons.len()))
    })?;
    debug_assert_eq!(alg.nvars(), n);
    Ok(Arc::new(alg))
}

/// A triangulation together with its algebras: `R_T`, `H = R_T/Ann(P_0)`,
/// `P_0 = λ_1⋯λ_k`, and the integration functional on `H`.
#[derive(Clone, Debug)]
pub struct Phase {
    pub aset: ASet,
    pub triangulation: Triangulation,
    pub ring: Arc<GradedAlgebra>,
    pub h: Arc<GradedAlgebra>,
    pub product_class: AlgebraElement,
    integral: Option<Vec<Rational>>,
}

impl Phase {
    /// Builds the algebras; the integration functional is attached when the
    /// triangulation is a smooth phase (every simplex contains the first
    /// `k` points and the top degree is one-dimensional).
    pub fn new(a: &ASet, t: &Triangulation) -> Result<Phase> {
        Phase::with_names(a, t, default_names(a.corank()))
    }

    pub fn with_names(a: &ASet, t: &Triangulation, names: Vec<String>) -> Result<Phase> {
        let ring = stanley_reisner(a, t, names)?;
        let p0 = (0..a.k()).fold(one(&ring), |acc, j| &acc * &from_poly(&ring, &point_form(a, j)));
        let h = quotient_by_annihilator(&ring, &p0)?;
        let mut phase = Phase {
            aset: a.clone(),
            triangulation: t.clone(),
            ring,
            h,
            product_class: p0,
            integral: None,
        };
        phase.integral = integration_functional(&phase).ok();
        Ok(phase)
    }

    /// Class of `λ_i` in `H`.
    pub fn lambda(&self, i: usize) -> AlgebraElement {
        from_poly(&self.h, &point_form(&self.aset, i))
    }

    /// Class of `λ_i` in `R_T`.
    pub fn lambda_ring(&self, i: usize) -> AlgebraElement {
        from_poly(&self.ring, &point_form(&self.aset, i))
    }

    pub fn is_smooth_phase(&self) -> bool {
        self.integral.is_some()
    }

    /// `∫_W γ`.
    pub fn integrate(&self, g: &AlgebraElement) -> Result<Rational> {
        let f = self
            .integral
            .as_ref()
            .ok_or_else(|| ChowError::NotSmoothPhase("no integration functional".into()))?;
        Ok(f.iter().zip(g.coeffs()).map(|(a, b)| a * b).sum())
    }

    pub fn integral_vector(&self) -> Option<&[Rational]> {
        self.integral.as_deref()
    }

    /// Image in `H` of `c/P_0` for `c` in the ideal generated by `P_0`.
    pub fn divide_by_product(&self, c: &AlgebraElement) -> Result<AlgebraElement> {
        let k = self.aset.k();
        let n = self.ring.nvars();
        let mut out = zero(&self.h);
        for d in 0..=self.ring.top_degree() {
            let part = c.homogeneous_part(d);
            if part.is_zero() {
                continue;
            }
            if d < k {
                return Err(ChowError::NotDivisible);
            }
            let mons = monomials(n, d - k);
            let images: Vec<Vec<Rational>> = mons
                .iter()
                .map(|m| (&from_poly(&self.ring, &Poly::monomial(m.clone(), Rational::one())) * &self.product_class).coeffs)
                .collect();
            let mat: Vec<Vec<Rational>> = (0..self.ring.dim())
                .map(|row| images.iter().map(|im| im[row].clone()).collect())
                .collect();
            let x = solve(&mat, part.coeffs()).ok_or(ChowError::NotDivisible)?;
            let mut p = Poly::zero(n);
            for (m, xi) in mons.iter().zip(x) {
                p.add_term(m.clone(), xi);
            }
            out = &out + &from_poly(&self.h, &p);
        }
        Ok(out)
    }

    /// `Todd_W = ∏_{j>k} g(λ_j) / ∏_{j≤k} g(-λ_j)`, `g(x) = x/(1-e^{-x})`.
    pub fn todd(&self) -> Result<AlgebraElement> {
        let mut acc = one(&self.h);
        for j in 0..self.aset.len() {
            let l = self.lambda(j);
            let f = if j < self.aset.k() {
                inverse_todd_factor(&-&l)?
            } else {
                todd_factor(&l)?
            };
            acc = &acc * &f;
        }
        Ok(acc)
    }
}

/// Integration on `H`: `∫_W γ = (-1)^k ∫_X P_0·γ`, with `∫_X` normalized by
/// `∫_X ∏_{i∈S, i>k} λ_i = 1/|det v̄_S|` on maximal simplices `S`.
pub fn integration_functional(phase: &Phase) -> Result<Vec<Rational>> {
    let a = &phase.aset;
    let r = &phase.ring;
    let k = a.k();
    let top = r.degree_range(r.top_degree());
    if top.len() != 1 || r.top_degree() + k != a.n() {
        return Err(ChowError::NotSmoothPhase("top degree is not a single class in the expected degree".into()));
    }
    let b = top[0];
    let mut value: Option<Rational> = None;
    for s in phase.triangulation.simplices() {
        if (0..k).any(|j| !s.contains(&j)) {
            return Err(ChowError::NotSmoothPhase("simplex misses a partition vertex".into()));
        }
        let mono = s.iter().filter(|&&i| i >= k).fold(one(r), |acc, &i| &acc * &phase.lambda_ring(i));
        let alpha = mono.coefficient(b).clone();
        if alpha.is_zero() {
            return Err(ChowError::NotSmoothPhase("maximal cone class vanishes".into()));
        }
        let vol = rat_int(&a.simplex_volume(s)?);
        let v = (vol * alpha).recip();
        match &value {
            Some(prev) if *prev != v => {
                return Err(ChowError::NotSmoothPhase("inconsistent cone multiplicities".into()))
            }
            _ => value = Some(v),
        }
    }
    let on_top = value.ok_or_else(|| ChowError::NotSmoothPhase("empty triangulation".into()))?;
    let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let h = &phase.h;
    Ok((0..h.dim())
        .map(|i| {
            let lifted = from_poly(r, &Poly::monomial(h.basis_monomials()[i].clone(), Rational::one()));
            let prod = &lifted * &phase.product_class;
            &sign * &on_top * prod.coefficient(b)
        })
        .collect())
}

/// Coordinates adapted to a circuit: `λ_j = h_j·μ + μ'_j` with `μ` dual to
/// `h` and `μ'_j` built from a complement of `h` in the relation lattice.
#[derive(Clone, Debug)]
pub struct EdgeData {
    pub circuit: Circuit,
    /// Unimodular, first row the coordinates of `h` in the relation basis.
    pub basis_change: IntMatrix,
    pub mu: AlgebraElement,
    pub mu_prime: Vec<AlgebraElement>,
    pub epsilon_prime: BigInt,
    pub l_sum: BigInt,
    /// `t_q` expressed in the adapted coordinates `c`.
    t_in_c: Vec<Poly>,
    /// `c_p` expressed in `t`.
    c_in_t: Vec<Poly>,
}

/// `1 + L/2` for even `L`, `(1 + L)/2` for odd `L`.
pub fn epsilon_prime(l: &BigInt) -> BigInt {
    if l.is_even() {
        BigInt::one() + l / 2
    } else {
        (BigInt::one() + l) / 2
    }
}

pub fn edge_coordinates(phase: &Phase, c: &Circuit) -> Result<EdgeData> {
    edge_coordinates_in(&phase.h, &phase.aset, c, None)
}

/// As [`edge_coordinates`] with a caller-chosen completion `u` (unimodular,
/// first row the coordinates of `h`).
pub fn edge_coordinates_with_basis(phase: &Phase, c: &Circuit, u: IntMatrix) -> Result<EdgeData> {
    edge_coordinates_in(&phase.h, &phase.aset, c, Some(u))
}

/// Adapted coordinates in any algebra presented on the relation-dual
/// coordinates `t` of `a`.
pub fn edge_coordinates_in(
    alg: &Arc<GradedAlgebra>,
    a: &ASet,
    c: &Circuit,
    u: Option<IntMatrix>,
) -> Result<EdgeData> {
    let r = a.corank();
    let eta = a.relation_coordinates(c.h())?;
    let u = match u {
        Some(u) => u,
        None => extend_to_basis(&eta, eta.len())?,
    };
    if u.rows() != r || u.cols() != r || u.row(0) != eta.as_slice() || !u.determinant()?.abs().is_one() {
        return Err(ChowError::Lattice(LatticeError::Dimension(
            "completion is not unimodular with first row h".into(),
        )));
    }
    let ur = u.to_rational();
    // t = Uᵀ c, so c = (Uᵀ)⁻¹ t.
    let t_in_c: Vec<Poly> = (0..r).map(|q| Poly::linear(&ur.column(q))).collect();
    let winv = ur.transpose().inverse()?;
    let c_in_t: Vec<Poly> = (0..r).map(|p| Poly::linear(winv.row(p))).collect();
    let mu = from_poly(alg, &c_in_t[0]);
    let mu_prime: Vec<AlgebraElement> = (0..a.len())
        .map(|j| &from_poly(alg, &point_form(a, j)) - &mu.scale(&rat_int(&c.h()[j])))
        .collect();
    let l_sum = c.l_sum();
    Ok(EdgeData {
        circuit: c.clone(),
        basis_change: u,
        mu,
        mu_prime,
        epsilon_prime: epsilon_prime(&l_sum),
        l_sum,
        t_in_c,
        c_in_t,
    })
}

impl EdgeData {
    /// `γ(μ → ξ) = Σ_a ξ^a G_a`, returned as `[G_0, G_1, …]`.
    pub fn split(&self, g: &AlgebraElement) -> Vec<AlgebraElement> {
        let alg = g.algebra();
        let in_c = g.lift().substitute(&self.t_in_c);
        let mut back = self.c_in_t.clone();
        back[0] = Poly::zero(alg.nvars());
        in_c.coefficients_in(0)
            .into_iter()
            .fold(Vec::new(), |mut acc: Vec<AlgebraElement>, (a, coeff)| {
                while acc.len() <= a as usize {
                    acc.push(zero(alg));
                }
                acc[a as usize] = from_poly(alg, &coeff.substitute(&back));
                acc
            })
    }

    /// Recombines `Σ_a μ^a G_a`.
    pub fn join(&self, parts: &[AlgebraElement]) -> AlgebraElement {
        let alg = self.mu.algebra();
        parts
            .iter()
            .enumerate()
            .fold(zero(alg), |acc, (a, g)| &acc + &(&self.mu.pow(a as u32) * g))
    }

    /// `(h_j, μ'_j)` for each index of the circuit's positive side.
    pub fn plus_data(&self) -> Vec<(Rational, AlgebraElement)> {
        self.circuit
            .plus()
            .into_iter()
            .map(|(j, q)| (rat_int(&q), self.mu_prime[j].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlat::{lattice_vector, rat};
    use crate::triangulate::{build_aset, triangulation_from_weights, NefSpec};

    fn quintic_phase() -> Phase {
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
        let t = triangulation_from_weights(&a, &lattice_vector(&[1])).unwrap();
        Phase::new(&a, &t).unwrap()
    }

    #[test]
    fn quintic_algebras() {
        let p = quintic_phase();
        assert_eq!(p.ring.dim(), 5);
        assert_eq!(p.h.dim(), 4);
        assert_eq!(p.h.basis_names(), vec!["1", "lambda", "lambda^2", "lambda^3"]);
        let l = p.lambda(1);
        assert_eq!(p.integrate(&l.pow(3)).unwrap(), rat(5, 1));
    }

    #[test]
    fn quintic_todd() {
        let p = quintic_phase();
        let l = p.lambda(1);
        let td = p.todd().unwrap();
        let expected = &one(&p.h) + &l.pow(2).scale(&rat(5, 6));
        assert_eq!(td, expected);
        assert_eq!(p.integrate(&(&td * &l)).unwrap(), rat(25, 6));
    }

    #[test]
    fn exp_rejects_constants() {
        let p = quintic_phase();
        assert_eq!(exp_class(&one(&p.h)), Err(ChowError::NonNilpotent));
    }
}
