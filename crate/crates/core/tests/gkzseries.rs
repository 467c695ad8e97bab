mod common;

use common::data;
use num_bigint::BigInt;
use toricmono::exactlat::{lattice_vector, rat, Rational};
use toricmono::gkzseries::*;
use toricmono::mirrorlab::{registry, ExampleData};
use toricmono::series::factorial;

fn series(d: &ExampleData, order: usize) -> TruncatedSeries {
    phi_series(&d.phase, &d.chambers[d.smooth], order).unwrap()
}

fn fact(n: i64) -> Rational {
    Rational::from_integer(factorial(n as u64))
}

fn annihilated(d: &ExampleData, s: &TruncatedSeries) -> bool {
    let rel = d.aset.relations();
    (0..rel.rows()).all(|p| verify_gkz_annihilation(&d.phase, s, rel.row(p)).unwrap())
        && d.edges().iter().all(|(_, c)| verify_box(&d.phase, s, c.h()).unwrap())
}

#[test]
fn quintic_scalar_part_is_the_period() {
    let d = data("quintic");
    let s = series(&d, 6);
    assert_eq!(s.len(), 7);
    let scalar = &frobenius_basis(&s)[0];
    for m in 0..=6i64 {
        let l = lattice_vector(&[-5 * m, m, m, m, m, m]);
        let expected = fact(5 * m) / (fact(m).pow(5));
        assert_eq!(scalar[&l], expected, "m = {m}");
    }
    assert_eq!(scalar[&lattice_vector(&[-10, 2, 2, 2, 2, 2])], rat(113400, 1));
}

#[test]
fn bicubic_scalar_part_is_the_period() {
    let d = data("bicubic");
    let s = series(&d, 4);
    let scalar = &frobenius_basis(&s)[0];
    for (l, value) in scalar {
        let m: i64 = l[l.len() - 1].clone().try_into().unwrap();
        assert_eq!(*value, fact(3 * m).pow(2) / fact(m).pow(6), "{l:?}");
    }
}

#[test]
fn every_series_is_annihilated() {
    for e in registry() {
        let d = e.data().unwrap();
        let s = series(&d, 3);
        assert!(annihilated(&d, &s), "{}", e.name);
        assert!(verify_euler(&d.phase, &s), "{}", e.name);
        for l in s.terms.keys() {
            assert!(in_dual_cone(&d.phase, &d.chambers[d.smooth], l).unwrap(), "{} {l:?}", e.name);
        }
    }
}

#[test]
fn corrupted_coefficient_is_detected() {
    for name in ["quintic", "two-param-22211"] {
        let d = data(name);
        let mut s = series(&d, 3);
        let key = s.terms.keys().nth(2).unwrap().clone();
        let entry = s.terms.get_mut(&key).unwrap();
        entry.value = entry.value.scale(&rat(2, 1));
        let rel = d.aset.relations();
        let ok = (0..rel.rows()).all(|p| verify_box(&d.phase, &s, rel.row(p)).unwrap());
        assert!(!ok, "{name}");
    }
}

#[test]
fn truncations_are_nested() {
    let d = data("two-param-62211");
    let small = series(&d, 2);
    let large = series(&d, 4);
    assert!(small.len() < large.len());
    for (l, c) in &small.terms {
        assert_eq!(large.coefficient(l), Some(&c.value));
    }
    assert_eq!(small.coefficient(&vec![BigInt::from(0); d.aset.len()]).map(|c| c.coeffs()[0].clone()), Some(rat(1, 1)));
}

#[test]
fn bad_inputs_are_rejected() {
    let d = data("quintic");
    assert!(matches!(
        gamma_coefficient(&d.phase, &lattice_vector(&[1, 0, 0, 0, 0, 0])),
        Err(GkzError::NotARelation(_))
    ));
    let other = d.chambers.iter().position(|c| c.triangulation != d.phase.triangulation).unwrap();
    assert!(matches!(
        phi_series(&d.phase, &d.chambers[other], 2),
        Err(GkzError::ChamberMismatch)
    ));
}
