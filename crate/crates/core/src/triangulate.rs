//! Point configurations, Gale transforms, regular triangulations and the
//! circuit calculus relating adjacent ones.
//!
//! Indices are 0-based throughout; `Display` impls print them 1-based.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlat::{
    canonical_row_basis, content, hermite_normal_form, int_rank, kernel_basis, rank_of,
    rat_int, saturate, solve, to_rational_vec, IntMatrix, LatticeError, LatticeVector, Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("points do not generate the ambient lattice")]
    NotGenerating,
    #[error("no linear functional takes the value 1 on every point")]
    NoHyperplane,
    #[error("invalid configuration: {0}")]
    InvalidSpec(String),
    #[error("rows are not a basis of the relation lattice")]
    NotRelationBasis,
    #[error("degenerate weight: lies in the span of the Gale vectors {0:?}")]
    DegenerateWeight(Vec<usize>),
    #[error("weight lies outside the support of the secondary fan")]
    OutsideSupport,
    #[error("secondary fan enumeration supports corank at most 2, got {0}")]
    UnsupportedRank(usize),
    #[error("triangulations are not adjacent: {0}")]
    NotAdjacent(String),
    #[error("triangulation is not supported on the circuit")]
    Unsupported,
    #[error("circuit does not meet any maximal simplex of the triangulation")]
    NoSeparatingSet,
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

type Result<T> = std::result::Result<T, TriangulationError>;

/// Fan rays split into the groups of a nef-partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefSpec {
    pub k: usize,
    pub rays: Vec<Vec<i64>>,
    /// Group (0-based, below `k`) of each ray.
    pub groups: Vec<usize>,
}

/// Lattice points `v̄_1..v̄_N` on an affine hyperplane, with the first `k`
/// playing the role of the nef-partition vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASet {
    n: usize,
    k: usize,
    points: Vec<LatticeVector>,
    groups: Vec<usize>,
    relations: IntMatrix,
}

/// Builds the point configuration `(e_j, 0)` for `j < k` followed by
/// `(e_group, v)` for every ray `v`.
pub fn build_aset(spec: &NefSpec) -> Result<ASet> {
    if spec.k == 0 {
        return Err(TriangulationError::InvalidSpec("partition must have at least one group".into()));
    }
    if spec.rays.len() != spec.groups.len() {
        return Err(TriangulationError::InvalidSpec("one group per ray required".into()));
    }
    let m = spec.rays.first().map_or(0, |r| r.len());
    if spec.rays.iter().any(|r| r.len() != m) {
        return Err(TriangulationError::InvalidSpec("rays of different lengths".into()));
    }
    if let Some(g) = spec.groups.iter().find(|&&g| g >= spec.k) {
        return Err(TriangulationError::InvalidSpec(format!("group {g} out of range")));
    }
    let n = spec.k + m;
    let mut points = Vec::with_capacity(spec.k + spec.rays.len());
    for j in 0..spec.k {
        let mut p = vec![BigInt::zero(); n];
        p[j] = BigInt::one();
        points.push(p);
    }
    for (ray, &g) in spec.rays.iter().zip(&spec.groups) {
        let mut p = vec![BigInt::zero(); n];
        p[g] = BigInt::one();
        for (i, &x) in ray.iter().enumerate() {
            p[spec.k + i] = BigInt::from(x);
        }
        points.push(p);
    }
    ASet::from_points(points, spec.k, spec.groups.clone())
}

impl ASet {
    /// Validates a configuration and computes its relation lattice.
    pub fn from_points(points: Vec<LatticeVector>, k: usize, groups: Vec<usize>) -> Result<ASet> {
        let n = points.first().map_or(0, |p| p.len());
        if points.iter().any(|p| p.len() != n) {
            return Err(TriangulationError::InvalidSpec("points of different lengths".into()));
        }
        if groups.len() + k != points.len() {
            return Err(TriangulationError::InvalidSpec("group assignment length".into()));
        }
        let m = IntMatrix::from_big_rows_with_cols(&points, n)?;
        let (h, _) = hermite_normal_form(&m);
        let pivots: Vec<BigInt> = (0..h.rows())
            .filter_map(|i| h.row(i).iter().find(|x| !x.is_zero()).cloned())
            .collect();
        if pivots.len() != n || pivots.iter().any(|p| !p.is_one()) {
            return Err(TriangulationError::NotGenerating);
        }
        let rows: Vec<Vec<Rational>> = points.iter().map(|p| to_rational_vec(p)).collect();
        let ones = vec![Rational::one(); points.len()];
        if solve(&rows, &ones).is_none() {
            return Err(TriangulationError::NoHyperplane);
        }
        let basis = kernel_basis(&m);
        let relations = IntMatrix::from_big_rows_with_cols(&basis, points.len())?;
        Ok(ASet {
            n,
            k,
            points,
            groups,
            relations,
        })
    }

    /// Replaces the relation basis by another Z-basis of the same lattice.
    pub fn with_relation_basis(&self, rows: &[Vec<i64>]) -> Result<ASet> {
        let big: Vec<LatticeVector> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        if big.len() != self.corank() || big.iter().any(|r| r.len() != self.len()) {
            return Err(TriangulationError::NotRelationBasis);
        }
        for r in &big {
            for c in 0..self.n {
                let s: BigInt = r.iter().zip(&self.points).map(|(l, p)| l * &p[c]).sum();
                if !s.is_zero() {
                    return Err(TriangulationError::NotRelationBasis);
                }
            }
        }
        if !big.is_empty() && canonical_row_basis(&big) != canonical_row_basis(&self.relations.to_rows()) {
            return Err(TriangulationError::NotRelationBasis);
        }
        let mut out = self.clone();
        out.relations = IntMatrix::from_big_rows_with_cols(&big, self.len())?;
        Ok(out)
    }

    /// Ambient lattice rank.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rank of the relation lattice.
    pub fn corank(&self) -> usize {
        self.relations.rows()
    }

    pub fn points(&self) -> &[LatticeVector] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &LatticeVector {
        &self.points[i]
    }

    /// Nef-partition group of point `i`, `None` for the first `k` points.
    pub fn group_of(&self, i: usize) -> Option<usize> {
        i.checked_sub(self.k).map(|r| self.groups[r])
    }

    /// Relation basis, one relation per row.
    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    fn gale_vector(&self, i: usize) -> LatticeVector {
        self.relations.column(i)
    }

    /// Coordinates of a relation in the relation basis.
    pub fn relation_coordinates(&self, l: &[BigInt]) -> Result<LatticeVector> {
        let bt: Vec<Vec<Rational>> = (0..self.len())
            .map(|i| to_rational_vec(&self.relations.column(i)))
            .collect();
        let x = solve(&bt, &to_rational_vec(l))
            .ok_or_else(|| TriangulationError::InvalidCircuit("vector is not a relation".into()))?;
        if x.iter().any(|v| !v.is_integer()) {
            return Err(TriangulationError::InvalidCircuit("vector is not in the relation lattice".into()));
        }
        Ok(x.iter().map(|v| v.to_integer()).collect())
    }

    /// True when `l` is an integral relation among the points.
    pub fn is_relation(&self, l: &[BigInt]) -> bool {
        l.len() == self.len()
            && (0..self.n).all(|c| l.iter().zip(&self.points).map(|(x, p)| x * &p[c]).sum::<BigInt>().is_zero())
    }

    fn points_independent(&self, idx: &[usize]) -> bool {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| to_rational_vec(&self.points[i])).collect();
        rank_of(&rows) == idx.len()
    }

    /// `|det|` of the points of a maximal simplex.
    pub fn simplex_volume(&self, simplex: &[usize]) -> Result<BigInt> {
        let rows: Vec<LatticeVector> = simplex.iter().map(|&i| self.points[i].clone()).collect();
        Ok(IntMatrix::from_big_rows_with_cols(&rows, self.n)?.determinant()?.abs())
    }

    /// `|det|` of the Gale vectors indexed by the complement of a simplex.
    pub fn gale_cone_volume(&self, simplex: &[usize]) -> Result<BigInt> {
        let rows: Vec<LatticeVector> = complement(self.len(), simplex)
            .iter()
            .map(|&i| self.gale_vector(i))
            .collect();
        Ok(IntMatrix::from_big_rows_with_cols(&rows, self.corank())?.determinant()?.abs())
    }
}

fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !idx.contains(i)).collect()
}

/// The vectors `w_i`: columns of the relation basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleTransform {
    pub vectors: Vec<LatticeVector>,
}

pub fn gale_transform(a: &ASet) -> GaleTransform {
    GaleTransform {
        vectors: (0..a.len()).map(|i| a.gale_vector(i)).collect(),
    }
}

/// A set of maximal simplices, each a sorted list of point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    simplices: BTreeSet<Vec<usize>>,
}

impl Triangulation {
    pub fn new<I: IntoIterator<Item = Vec<usize>>>(simplices: I) -> Self {
        Triangulation {
            simplices: simplices
                .into_iter()
                .map(|mut s| {
                    s.sort_unstable();
                    s
                })
                .collect(),
        }
    }

    pub fn simplices(&self) -> &BTreeSet<Vec<usize>> {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.contains(&s)
    }

    /// True when `face` lies in some maximal simplex.
    pub fn has_face(&self, face: &[usize]) -> bool {
        self.simplices.iter().any(|s| face.iter().all(|i| s.contains(i)))
    }

    /// Indices used by some simplex.
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.simplices.iter().flatten().copied().collect()
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .simplices
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|i| (i + 1).to_string()).join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn express_in(vectors: &[LatticeVector], target: &[Rational]) -> Option<Vec<Rational>> {
    let r = target.len();
    let a: Vec<Vec<Rational>> = (0..r)
        .map(|row| vectors.iter().map(|v| rat_int(&v[row])).collect())
        .collect();
    solve(&a, target)
}

fn independent(vectors: &[LatticeVector]) -> bool {
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| to_rational_vec(v)).collect();
    rank_of(&rows) == vectors.len()
}

/// Checks that `w` avoids every hyperplane spanned by `corank - 1`
/// independent Gale vectors.
pub fn check_generic_weight(a: &ASet, w: &[BigInt]) -> Result<()> {
    let r = a.corank();
    let gale = gale_transform(a);
    let target = to_rational_vec(w);
    for j in (0..a.len()).combinations(r.saturating_sub(1)) {
        let vs: Vec<LatticeVector> = j.iter().map(|&i| gale.vectors[i].clone()).collect();
        if !independent(&vs) {
            continue;
        }
        if express_in(&vs, &target).is_some() {
            return Err(TriangulationError::DegenerateWeight(j));
        }
    }
    Ok(())
}

/// The regular triangulation whose secondary cone contains `w`: all `I`
/// whose complement `I*` has independent Gale vectors with `w` in their
/// nonnegative span.
pub fn triangulation_from_weights(a: &ASet, w: &[BigInt]) -> Result<Triangulation> {
    let r = a.corank();
    if w.len() != r {
        return Err(TriangulationError::InvalidSpec(format!(
            "weight of length {} for corank {}",
            w.len(),
            r
        )));
    }
    check_generic_weight(a, w)?;
    let gale = gale_transform(a);
    let target = to_rational_vec(w);
    let mut simplices = Vec::new();
    for star in (0..a.len()).combinations(r) {
        let vs: Vec<LatticeVector> = star.iter().map(|&i| gale.vectors[i].clone()).collect();
        if !independent(&vs) {
            continue;
        }
        let Some(coeffs) = express_in(&vs, &target) else {
            continue;
        };
        if coeffs.iter().all(|c| !c.is_negative()) {
            let simplex = complement(a.len(), &star);
            debug_assert!(a.points_independent(&simplex));
            simplices.push(simplex);
        }
    }
    if simplices.is_empty() {
        return Err(TriangulationError::OutsideSupport);
    }
    Ok(Triangulation::new(simplices))
}

/// A full-dimensional cone of the secondary fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub generators: Vec<LatticeVector>,
    pub interior: LatticeVector,
    pub triangulation: Triangulation,
}

fn half(v: &[BigInt]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn cross(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn angle_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| cross(b, a).cmp(&BigInt::zero()))
}

/// Chambers of the secondary fan in corank 1 or 2, ordered by angle
/// starting from the positive first axis.
pub fn secondary_chambers(a: &ASet) -> Result<Vec<Chamber>> {
    let gale = gale_transform(a);
    match a.corank() {
        1 => {
            let mut out = Vec::new();
            for s in [1i64, -1] {
                if gale.vectors.iter().any(|w| (&w[0] * BigInt::from(s)).is_positive()) {
                    let g = vec![BigInt::from(s)];
                    out.push(Chamber {
                        generators: vec![g.clone()],
                        interior: g.clone(),
                        triangulation: triangulation_from_weights(a, &g)?,
                    });
                }
            }
            Ok(out)
        }
        2 => rank_two_chambers(a, &gale),
        r => Err(TriangulationError::UnsupportedRank(r)),
    }
}

fn interior_point(a: &ASet, g1: &LatticeVector, g2: &LatticeVector) -> Result<LatticeVector> {
    for s in 2..64i64 {
        for x in 1..s {
            let y = s - x;
            let p: LatticeVector = (0..2)
                .map(|c| BigInt::from(x) * &g1[c] + BigInt::from(y) * &g2[c])
                .collect();
            if check_generic_weight(a, &p).is_ok() {
                return Ok(p);
            }
        }
    }
    Err(TriangulationError::InvalidSpec("no generic interior point found".into()))
}

fn rank_two_chambers(a: &ASet, gale: &GaleTransform) -> Result<Vec<Chamber>> {
    let mut rays: Vec<LatticeVector> = Vec::new();
    for w in &gale.vectors {
        if w.iter().all(|x| x.is_zero()) {
            continue;
        }
        let p = saturate(w)?;
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    rays.sort_by(angle_cmp);
    let m = rays.len();
    let mut sectors: Vec<(LatticeVector, LatticeVector, Option<Triangulation>)> = Vec::new();
    for i in 0..m {
        let g1 = rays[i].clone();
        let g2 = rays[(i + 1) % m].clone();
        let convex = m > 1 && cross(&g1, &g2).is_positive();
        let tri = if convex {
            let p = interior_point(a, &g1, &g2)?;
            match triangulation_from_weights(a, &p) {
                Ok(t) => Some(t),
                Err(TriangulationError::OutsideSupport) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        sectors.push((g1, g2, tri));
    }
    // Merge neighbouring sectors separated by a ray that is not a wall.
    let mut merged: Vec<(LatticeVector, LatticeVector, Triangulation)> = Vec::new();
    let start = (0..m)
        .find(|&i| {
            let prev = &sectors[(i + m - 1) % m].2;
            sectors[i].2.is_some() && prev.as_ref() != sectors[i].2.as_ref()
        })
        .unwrap_or(0);
    for off in 0..m {
        let (g1, g2, tri) = &sectors[(start + off) % m];
        let Some(t) = tri else { continue };
        match merged.last_mut() {
            Some(last) if &last.2 == t && &last.1 == g1 => last.1 = g2.clone(),
            _ => merged.push((g1.clone(), g2.clone(), t.clone())),
        }
    }
    let mut out = Vec::new();
    for (g1, g2, t) in merged {
        let interior = interior_point(a, &g1, &g2)?;
        out.push(Chamber {
            generators: vec![g1, g2],
            interior,
            triangulation: t,
        });
    }
    out.sort_by(|x, y| angle_cmp(&x.generators[0], &y.generators[0]));
    Ok(out)
}

/// Pairs `(J', J'')` of Gale index sets whose cones are properly nested.
pub fn nested_cone_violations(a: &ASet) -> Vec<(Vec<usize>, Vec<usize>)> {
    let gale = gale_transform(a);
    let size = a.corank().saturating_sub(1);
    let cones: Vec<Vec<usize>> = (0..a.len())
        .combinations(size)
        .filter(|j| independent(&j.iter().map(|&i| gale.vectors[i].clone()).collect::<Vec<_>>()))
        .collect();
    let inside = |gens: &[usize], of: &[usize]| {
        let vs: Vec<LatticeVector> = of.iter().map(|&i| gale.vectors[i].clone()).collect();
        gens.iter().all(|&g| {
            express_in(&vs, &to_rational_vec(&gale.vectors[g]))
                .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
        })
    };
    let mut out = Vec::new();
    for p in &cones {
        for q in &cones {
            if p != q && inside(p, q) && !inside(q, p) {
                out.push((p.clone(), q.clone()));
            }
        }
    }
    out
}

/// A minimal dependent subset together with its primitive relation `h`,
/// oriented so that `I_+ = {h_j > 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    h: LatticeVector,
    k: usize,
}

impl Circuit {
    /// Validates `h` as a primitive relation of `a` with minimal support.
    pub fn from_relation(a: &ASet, h: LatticeVector) -> Result<Circuit> {
        if !a.is_relation(&h) {
            return Err(TriangulationError::InvalidCircuit("not a relation among the points".into()));
        }
        let g = content(&h);
        if g.is_zero() {
            return Err(TriangulationError::InvalidCircuit("zero relation".into()));
        }
        if !g.is_one() {
            return Err(TriangulationError::InvalidCircuit("relation is not primitive".into()));
        }
        let support: Vec<usize> = (0..h.len()).filter(|&i| !h[i].is_zero()).collect();
        let rows: Vec<LatticeVector> = support.iter().map(|&i| a.points[i].clone()).collect();
        let m = IntMatrix::from_big_rows_with_cols(&rows, a.n())?;
        if support.len() - int_rank(&m) != 1 {
            return Err(TriangulationError::InvalidCircuit("support is not a minimal dependent set".into()));
        }
        Ok(Circuit { h, k: a.k() })
    }

    pub fn h(&self) -> &LatticeVector {
        &self.h
    }

    pub fn negated(&self) -> Circuit {
        Circuit {
            h: self.h.iter().map(|x| -x).collect(),
            k: self.k,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.h.len()).filter(|&i| !self.h[i].is_zero()).collect()
    }

    /// `(j, h_j)` for `h_j > 0`.
    pub fn plus(&self) -> Vec<(usize, BigInt)> {
        (0..self.h.len())
            .filter(|&i| self.h[i].is_positive())
            .map(|i| (i, self.h[i].clone()))
            .collect()
    }

    pub fn minus(&self) -> Vec<(usize, BigInt)> {
        (0..self.h.len())
            .filter(|&i| self.h[i].is_negative())
            .map(|i| (i, -self.h[i].clone()))
            .collect()
    }

    /// `(j, q_j)` for negative entries outside the first `k` indices.
    pub fn minus_prime(&self) -> Vec<(usize, BigInt)> {
        self.minus().into_iter().filter(|(i, _)| *i >= self.k).collect()
    }

    /// `(j, d_j)` for negative entries among the first `k` indices.
    pub fn minus_dprime(&self) -> Vec<(usize, BigInt)> {
        self.minus().into_iter().filter(|(i, _)| *i < self.k).collect()
    }

    /// `L = Σ_{I_+} h_j`.
    pub fn l_sum(&self) -> BigInt {
        self.plus().into_iter().map(|(_, q)| q).sum()
    }

    /// True when no positive index lies among the first `k`.
    pub fn is_standard(&self) -> bool {
        self.plus().iter().all(|(i, _)| *i >= self.k)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |terms: Vec<(usize, BigInt)>| {
            terms
                .iter()
                .map(|(i, c)| if c.is_one() { format!("v{}", i + 1) } else { format!("{}*v{}", c, i + 1) })
                .join(" + ")
        };
        write!(f, "{} = {}", side(self.plus()), side(self.minus()))
    }
}

fn without(set: &[usize], i: usize) -> Vec<usize> {
    set.iter().copied().filter(|&x| x != i).collect()
}

fn in_convex_hull(a: &ASet, c: &Circuit, m: usize) -> bool {
    let support = c.support();
    let n = a.n();
    let mat: Vec<Vec<Rational>> = (0..n)
        .map(|row| support.iter().map(|&i| rat_int(&a.points[i][row])).collect())
        .collect();
    let Some(x0) = solve(&mat, &to_rational_vec(&a.points[m])) else {
        return false;
    };
    // Solutions are x0 + s·h restricted to the support; need all entries ≥ 0.
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (pos, &i) in support.iter().enumerate() {
        let hi_coef = rat_int(&c.h[i]);
        let bound = -&x0[pos] / &hi_coef;
        if hi_coef.is_positive() {
            lo = Some(lo.map_or(bound.clone(), |l: Rational| l.max(bound.clone())));
        } else {
            hi = Some(hi.map_or(bound.clone(), |u: Rational| u.min(bound.clone())));
        }
    }
    match (lo, hi) {
        (Some(l), Some(u)) => l <= u,
        _ => true,
    }
}

fn side_is_induced(t: &Triangulation, support: &[usize], side: &[(usize, BigInt)]) -> bool {
    side.iter().all(|(i, _)| t.has_face(&without(support, *i)))
}

/// Checks the three support conditions literally.
pub fn is_supported_on(a: &ASet, t: &Triangulation, c: &Circuit) -> bool {
    let support = c.support();
    // 1. No other vertex of the triangulation inside Conv(I).
    for m in t.vertices() {
        if !support.contains(&m) && in_convex_hull(a, c, m) {
            return false;
        }
    }
    // 2. Conv(I) is covered by faces of the triangulation.
    let plus = c.plus();
    let minus = c.minus();
    let side = if side_is_induced(t, &support, &plus) {
        plus
    } else if side_is_induced(t, &support, &minus) {
        minus
    } else {
        return false;
    };
    // 3. J ∪ F appears iff J' ∪ F appears, for J, J' cells of that side.
    let rest: Vec<usize> = complement(a.len(), &support);
    let max_f = a.n() + 1 - support.len();
    for size in 0..=max_f.min(rest.len()) {
        for f in rest.iter().copied().combinations(size) {
            let appears: Vec<bool> = side
                .iter()
                .map(|(i, _)| {
                    let mut s = without(&support, *i);
                    s.extend(&f);
                    a.points_independent(&s) && t.has_face(&s)
                })
                .collect();
            if appears.iter().any(|&x| x != appears[0]) {
                return false;
            }
        }
    }
    true
}

/// Sets `J ⊂ A∖I` with `(I∖i) ∪ J` a maximal simplex for some `i ∈ I`.
pub fn separating_sets(t: &Triangulation, c: &Circuit) -> Result<Vec<Vec<usize>>> {
    let support = c.support();
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in t.simplices() {
        let common = s.iter().filter(|i| support.contains(i)).count();
        if common + 1 == support.len() {
            out.insert(s.iter().copied().filter(|i| !support.contains(i)).collect());
        }
    }
    if out.is_empty() {
        return Err(TriangulationError::NoSeparatingSet);
    }
    Ok(out.into_iter().collect())
}

/// The flip along `c`, in whichever direction `t` allows.
pub fn flip(a: &ASet, t: &Triangulation, c: &Circuit) -> Result<Triangulation> {
    if !is_supported_on(a, t, c) {
        return Err(TriangulationError::Unsupported);
    }
    let support = c.support();
    let plus = c.plus();
    let minus = c.minus();
    let (from, to) = if side_is_induced(t, &support, &plus) {
        (plus, minus)
    } else {
        (minus, plus)
    };
    let js = separating_sets(t, c)?;
    let cell = |i: usize, j: &[usize]| {
        let mut s = without(&support, i);
        s.extend(j);
        s.sort_unstable();
        s
    };
    let mut simplices = t.simplices().clone();
    for j in &js {
        for (i, _) in &from {
            simplices.remove(&cell(*i, j));
        }
    }
    for j in &js {
        for (i, _) in &to {
            simplices.insert(cell(*i, j));
        }
    }
    Ok(Triangulation { simplices })
}

/// The circuit of the flip taking `t1` to `t2`, oriented so that `t1`
/// contains the cells `(I∖j) ∪ J` for `j ∈ I_+`.
pub fn circuit_between(a: &ASet, t1: &Triangulation, t2: &Triangulation) -> Result<Circuit> {
    let removed: Vec<&Vec<usize>> = t1.simplices().difference(t2.simplices()).collect();
    let added: Vec<&Vec<usize>> = t2.simplices().difference(t1.simplices()).collect();
    if removed.is_empty() || added.is_empty() {
        return Err(TriangulationError::NotAdjacent("triangulations do not differ by a flip".into()));
    }
    let meet = |cells: &[&Vec<usize>]| -> BTreeSet<usize> {
        let mut it = cells.iter();
        let first: BTreeSet<usize> = it.next().map(|c| c.iter().copied().collect()).unwrap_or_default();
        it.fold(first, |acc, c| acc.intersection(&c.iter().copied().collect()).copied().collect())
    };
    let x: Vec<usize> = meet(&removed).union(&meet(&added)).copied().collect();
    let rows: Vec<LatticeVector> = x.iter().map(|&i| a.points[i].clone()).collect();
    let kernel = kernel_basis(&IntMatrix::from_big_rows_with_cols(&rows, a.n())?);
    if kernel.len() != 1 {
        return Err(TriangulationError::NotAdjacent(format!(
            "changed cells span a relation space of dimension {}",
            kernel.len()
        )));
    }
    let mut h = vec![BigInt::zero(); a.len()];
    for (pos, &i) in x.iter().enumerate() {
        h[i] = kernel[0][pos].clone();
    }
    let mut c = Circuit::from_relation(a, h)?;
    let support = c.support();
    let missing: Vec<usize> = support.iter().copied().filter(|i| !removed[0].contains(i)).collect();
    if missing.len() != 1 {
        return Err(TriangulationError::NotAdjacent("removed cell does not meet the circuit in a facet".into()));
    }
    if c.h[missing[0]].is_negative() {
        c = c.negated();
    }
    if flip(a, t1, &c)? != *t2 {
        return Err(TriangulationError::NotAdjacent("flip along the circuit does not reach the target".into()));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub indices: Vec<usize>,
    pub is_simplex: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralSubdivision {
    pub cells: Vec<Cell>,
}

/// Common simplices of two adjacent triangulations plus the cells
/// `Conv(I ∪ J)`.
pub fn edge_subdivision(a: &ASet, t1: &Triangulation, t2: &Triangulation) -> Result<PolyhedralSubdivision> {
    let c = circuit_between(a, t1, t2)?;
    let mut cells: Vec<Cell> = t1
        .simplices()
        .intersection(t2.simplices())
        .map(|s| Cell {
            indices: s.clone(),
            is_simplex: true,
        })
        .collect();
    let support = c.support();
    for j in separating_sets(t1, &c)? {
        let mut idx: Vec<usize> = support.iter().copied().chain(j).collect();
        idx.sort_unstable();
        cells.push(Cell {
            indices: idx,
            is_simplex: false,
        });
    }
    cells.sort();
    Ok(PolyhedralSubdivision { cells })
}

/// The relation `h` restricted to a circuit given by its signed
/// coefficients on point indices.
pub fn relation_from_terms(len: usize, terms: &[(usize, i64)]) -> LatticeVector {
    let mut h = vec![BigInt::zero(); len];
    for &(i, c) in terms {
        h[i] += BigInt::from(c);
    }
    h
}
