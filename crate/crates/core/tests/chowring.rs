mod common;

use common::data;
use proptest::prelude::*;
use toricmono::chowring::*;
use toricmono::exactlat::{rat, Rational};
use toricmono::mirrorlab::registry;

/// A random nilpotent class: rational combination of the positive-degree
/// basis monomials of the phase's `H`.
fn nilpotent(name: &'static str) -> impl Strategy<Value = AlgebraElement> {
    let h = data(name).phase.h;
    let n = h.dim();
    prop::collection::vec((-6i64..=6, 1i64..=4), n).prop_map(move |c| {
        let coeffs: Vec<Rational> = c
            .iter()
            .enumerate()
            .map(|(i, (p, q))| if h.degree_of(i) == 0 { rat(0, 1) } else { rat(*p, *q) })
            .collect();
        AlgebraElement::new(h.clone(), coeffs)
    })
}

fn pair(name: &'static str) -> impl Strategy<Value = (AlgebraElement, AlgebraElement)> {
    (nilpotent(name), nilpotent(name))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_is_a_homomorphism_quintic((a, b) in pair("quintic")) {
        prop_assert_eq!(exp_class(&(&a + &b)).unwrap(), &exp_class(&a).unwrap() * &exp_class(&b).unwrap());
    }

    #[test]
    fn exp_is_a_homomorphism_two_param((a, b) in pair("two-param-22211")) {
        prop_assert_eq!(exp_class(&(&a + &b)).unwrap(), &exp_class(&a).unwrap() * &exp_class(&b).unwrap());
    }

    #[test]
    fn todd_factor_inverts(a in nilpotent("two-param-62211")) {
        let unit = one(a.algebra());
        prop_assert_eq!(&todd_factor(&a).unwrap() * &inverse_todd_factor(&a).unwrap(), unit);
    }

    #[test]
    fn multiplication_matrix_represents_products((a, b) in pair("bicubic")) {
        let m = a.multiplication_matrix();
        let image = element_from_vector(a.algebra(), m.apply(b.coeffs()));
        prop_assert_eq!(image, &a * &b);
    }
}

/// `1 + c_2/12` with `c(W) = ∏_{j>k}(1+λ_j) / ∏_{j≤k}(1-λ_j)`: the Todd
/// class of a Calabi-Yau threefold from its total Chern class.
fn todd_from_chern(phase: &Phase) -> AlgebraElement {
    let unit = one(&phase.h);
    let mut c = unit.clone();
    for j in 0..phase.aset.len() {
        let l = phase.lambda(j);
        if j < phase.aset.k() {
            // (1 - λ)^{-1} = Σ λ^m.
            let inv = l.powers().into_iter().fold(zero(&phase.h), |acc, p| &acc + &p);
            c = &c * &inv;
        } else {
            c = &c * &(&unit + &l);
        }
    }
    assert!(c.homogeneous_part(1).is_zero(), "first Chern class vanishes");
    &unit + &c.homogeneous_part(2).scale(&rat(1, 12))
}

#[test]
fn todd_matches_chern_class_oracle() {
    for e in registry() {
        let d = e.data().unwrap();
        assert_eq!(d.phase.h.top_degree(), 3, "{}", e.name);
        assert_eq!(d.phase.todd().unwrap(), todd_from_chern(&d.phase), "{}", e.name);
    }
}

#[test]
fn quintic_integrals() {
    let p = data("quintic").phase;
    let l = p.lambda(1);
    let td = p.todd().unwrap();
    assert_eq!(td, &one(&p.h) + &l.pow(2).scale(&rat(5, 6)));
    assert_eq!(p.integrate(&l.pow(3)).unwrap(), rat(5, 1));
    assert_eq!(p.integrate(&(&td * &l)).unwrap(), rat(25, 6));
    assert_eq!(p.integrate(&td).unwrap(), rat(0, 1));
    // c_2·H = 50.
    assert_eq!(p.integrate(&l.pow(3).scale(&rat(10, 1))).unwrap(), rat(50, 1));
}

#[test]
fn two_param_triple_intersections() {
    let p = data("two-param-22211").phase;
    let names = p.h.basis_names();
    assert_eq!(names, ["1", "mu", "nu", "mu^2", "mu*nu", "mu^2*nu"]);
    let mu = generator(&p.h, 0);
    let nu = generator(&p.h, 1);
    assert_eq!(p.integrate(&mu.pow(3)).unwrap(), rat(8, 1));
    assert_eq!(p.integrate(&(&mu.pow(2) * &nu)).unwrap(), rat(4, 1));
    assert!(nu.pow(2).is_zero());
}

#[test]
fn algebras_are_commutative_and_associative() {
    for e in registry() {
        let d = e.data().unwrap();
        assert!(d.phase.ring.is_commutative_associative(), "{}", e.name);
        assert!(d.phase.h.is_commutative_associative(), "{}", e.name);
        assert_eq!(d.phase.h.degree_range(3).len(), 1, "{}", e.name);
    }
}

#[test]
fn exp_rejects_units() {
    let p = data("quintic").phase;
    assert_eq!(exp_class(&one(&p.h)), Err(ChowError::NonNilpotent));
}

#[test]
fn edge_coordinates_split_and_join() {
    let d = data("two-param-22211");
    for (_, c) in d.edges() {
        let e = d.edge_data(&c).unwrap();
        for i in 0..d.phase.h.dim() {
            let g = basis_element(&d.phase.h, i);
            assert_eq!(e.join(&e.split(&g)), g);
        }
    }
}
