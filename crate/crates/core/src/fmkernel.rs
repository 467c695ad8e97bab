//! Cohomological actions of Fourier-Mukai kernels on `H`.
//!
//! Every action here is computed from the geometry of the kernel (Chern
//! characters, Todd classes and Gysin maps), independently of the residue
//! formulas in [`crate::monodromy`], so the two can be compared.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::chowring::{
    default_names, edge_coordinates_in, exp_class, from_poly, linear_map_matrix, one, point_form, stanley_reisner,
    AlgebraElement, ChowError, EdgeData, GradedAlgebra, Phase,
};
use crate::exactlat::{lattice_vector, rat_int, Rational, RationalMatrix};
use crate::monodromy::{check_condition2, residue_with_retry, xi_polynomial, LaurentElement, MonodromyError};
use crate::series::{inverse_linear, shifted_series, ExpFunction};
use crate::triangulate::{build_aset, ASet, Circuit, NefSpec, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error("the exceptional locus of this edge is not a fibration over its image")]
    NotFibred,
}

type Result<T> = std::result::Result<T, KernelError>;

/// A kernel on `W × W`, described by the data that determines its action.
#[derive(Clone, Debug)]
pub enum KernelSpec {
    /// `O_Δ ⊗ L` with `c_1(L)` given: tensoring by a line bundle.
    Twist(AlgebraElement),
    /// Ideal sheaf of the diagonal, shifted: the spherical twist by `O_W`.
    DiagonalIdeal,
    /// Spherical twist by the line bundle with the given first Chern class.
    TwistedConjugate(AlgebraElement),
    /// Window-shift kernel across a wall, from the exceptional locus.
    Edge(EdgeData),
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Twist(c) => write!(f, "twist({})", c),
            KernelSpec::DiagonalIdeal => f.write_str("diagonal-ideal"),
            KernelSpec::TwistedConjugate(c) => write!(f, "spherical({})", c),
            KernelSpec::Edge(e) => write!(f, "edge({})", e.circuit),
        }
    }
}

/// `γ ↦ ch(L)·γ`.
pub fn twist(c1: &AlgebraElement) -> Result<RationalMatrix> {
    Ok(exp_class(c1)?.multiplication_matrix())
}

/// `γ ↦ γ - (∫_W γ·Td_W)·1`, the action of the twist by `O_W`.
pub fn diagonal_ideal(phase: &Phase) -> Result<RationalMatrix> {
    diagonal_ideal_with_todd(phase, &phase.todd()?)
}

/// [`diagonal_ideal`] with a caller-supplied Todd class.
pub fn diagonal_ideal_with_todd(phase: &Phase, td: &AlgebraElement) -> Result<RationalMatrix> {
    let unit = one(&phase.h);
    linear_map_matrix(&phase.h, |g| -> Result<AlgebraElement> {
        Ok(g - &unit.scale(&phase.integrate(&(g * td))?))
    })
}

/// `γ ↦ γ - χ(L, γ)·ch(L)`, the spherical twist by a line bundle `L`.
pub fn twisted_conjugate(phase: &Phase, c1: &AlgebraElement) -> Result<RationalMatrix> {
    let td = phase.todd()?;
    let ch = exp_class(c1)?;
    let dual = exp_class(&-c1)?;
    linear_map_matrix(&phase.h, |g| -> Result<AlgebraElement> {
        let chi = phase.integrate(&(&(g * &dual) * &td))?;
        Ok(g - &ch.scale(&chi))
    })
}

/// `Res_ξ ∏_j (h_j ξ + μ'_j)^{-1} · f(ξ)`: push forward along the weighted
/// projective fibre cut out by the given coordinates, pulled back to the
/// total space.
pub fn pushforward_series(
    edge: &EdgeData,
    fibre: &[usize],
    f: &LaurentElement,
) -> std::result::Result<AlgebraElement, MonodromyError> {
    let h = edge.circuit.h();
    let mut series = f.clone();
    for &j in fibre {
        series = series.mul(&inverse_linear(&rat_int(&h[j]), &edge.mu_prime[j].powers()));
    }
    Ok(series.residue()?)
}

/// Gysin pushforward of a class along the fibre `{h_j ≠ 0, j ∈ fibre}`.
pub fn gysin_pushforward(edge: &EdgeData, fibre: &[usize], g: &AlgebraElement) -> Result<AlgebraElement> {
    let f = xi_polynomial(g.algebra(), edge.split(g));
    Ok(pushforward_series(edge, fibre, &f)?)
}

/// Action of the window-shift kernel of an edge: restrict to the exceptional
/// locus, twist by the relative Todd class and the normal contribution of
/// the contracted directions, push forward along the fibre and include.
pub fn edge_kernel_action(phase: &Phase, edge: &EdgeData) -> Result<RationalMatrix> {
    if !check_condition2(&edge.circuit) {
        return Err(MonodromyError::ContourReduction.into());
    }
    let alg = &phase.h;
    let fibre: Vec<usize> = edge.circuit.plus().into_iter().map(|(j, _)| j).collect();
    if fibre.is_empty() {
        return Err(KernelError::NotFibred);
    }
    let mut inclusion = one(alg);
    for (j, q) in edge.circuit.minus_prime() {
        let lam = &edge.mu.scale(&-rat_int(&q)) + &edge.mu_prime[j];
        inclusion = &inclusion * &(&one(alg) - &exp_class(&lam)?);
    }
    linear_map_matrix(alg, |g| -> Result<AlgebraElement> {
        let parts = edge.split(g);
        let pushed = residue_with_retry(|prec| {
            let mut f = xi_polynomial(alg, parts.clone());
            for (j, q) in edge.circuit.plus() {
                f = f.mul(&shifted_series(ExpFunction::Todd, &rat_int(&q), &edge.mu_prime[j].powers(), prec));
            }
            for (j, d) in edge.circuit.minus_dprime() {
                f = f.mul(&shifted_series(
                    ExpFunction::OneMinusExpNeg,
                    &rat_int(&d),
                    &(-&edge.mu_prime[j]).powers(),
                    prec,
                ));
            }
            pushforward_series(edge, &fibre, &f)
        })?;
        Ok(g - &(&inclusion * &pushed))
    })
}

/// Matrix of the action of a kernel on the monomial basis of `H`.
pub fn kernel_action(phase: &Phase, spec: &KernelSpec) -> Result<RationalMatrix> {
    match spec {
        KernelSpec::Twist(c) => twist(c),
        KernelSpec::DiagonalIdeal => diagonal_ideal(phase),
        KernelSpec::TwistedConjugate(c) => twisted_conjugate(phase, c),
        KernelSpec::Edge(e) => edge_kernel_action(phase, e),
    }
}

/// A toric variety fibred over a toric base, presented as a point
/// configuration at height one whose triangulation cones over the fan.
#[derive(Clone, Debug)]
pub struct ToricFibration {
    pub aset: ASet,
    pub triangulation: Triangulation,
    /// Cohomology ring of the total space.
    pub ring: Arc<GradedAlgebra>,
    /// Point indices of the fibre rays.
    pub fibre: Vec<usize>,
    /// Point indices of the base rays.
    pub base: Vec<usize>,
    /// Coordinates adapted to the fibre relation `Σ h_j v_j = 0`.
    pub edge: EdgeData,
}

/// Builds the fibration from fibre rays with their weights `h_j`, base
/// rays, and the maximal cones (indices into fibre rays followed by base
/// rays).
pub fn toric_fibration(fibre: &[(Vec<i64>, i64)], base: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<ToricFibration> {
    let rays: Vec<Vec<i64>> = fibre.iter().map(|(v, _)| v.clone()).chain(base.iter().cloned()).collect();
    let a = build_aset(&NefSpec {
        k: 1,
        groups: vec![0; rays.len()],
        rays,
    })
    .map_err(ChowError::from)?;
    let t = Triangulation::new(cones.iter().map(|c| {
        let mut s: Vec<usize> = std::iter::once(0).chain(c.iter().map(|i| i + 1)).collect();
        s.sort_unstable();
        s
    }));
    let ring = stanley_reisner(&a, &t, default_names(a.corank()))?;
    let mut h = vec![-fibre.iter().map(|(_, w)| w).sum::<i64>()];
    h.extend(fibre.iter().map(|(_, w)| *w));
    h.extend(std::iter::repeat_n(0, base.len()));
    let circuit = Circuit::from_relation(&a, lattice_vector(&h)).map_err(ChowError::from)?;
    let edge = edge_coordinates_in(&ring, &a, &circuit, None)?;
    Ok(ToricFibration {
        fibre: (1..=fibre.len()).collect(),
        base: (fibre.len() + 1..=fibre.len() + base.len()).collect(),
        aset: a,
        triangulation: t,
        ring,
        edge,
    })
}

impl ToricFibration {
    /// Class of the divisor of the `i`-th point.
    pub fn divisor(&self, i: usize) -> AlgebraElement {
        from_poly(&self.ring, &point_form(&self.aset, i))
    }

    /// `p^*p_*γ` by the residue formula.
    pub fn pushforward(&self, g: &AlgebraElement) -> Result<AlgebraElement> {
        gysin_pushforward(&self.edge, &self.fibre, g)
    }
}

/// `χ(γ) = ∫_W γ·Td_W`.
pub fn euler_pairing(phase: &Phase, g: &AlgebraElement) -> Result<Rational> {
    Ok(phase.integrate(&(g * &phase.todd()?))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chowring::edge_coordinates;
    use crate::monodromy::{edge_loop, Normalization};
    use crate::triangulate::{build_aset, circuit_between, triangulation_from_weights, NefSpec};

    #[test]
    fn quintic_edge_kernel_is_diagonal_ideal() {
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
        let e = edge_coordinates(&p, &circuit_between(&a, &t1, &t2).unwrap()).unwrap();
        let k = edge_kernel_action(&p, &e).unwrap();
        assert_eq!(k, diagonal_ideal(&p).unwrap());
        assert_eq!(k, edge_loop(&p, &e, Normalization::Psi).unwrap().matrix);
    }
}
