mod common;

use common::data;
use toricmono::chowring::stanley_reisner;
use toricmono::chowring::default_names;
use toricmono::exactlat::lattice_vector;
use toricmono::mirrorlab::{expected_two_param_chambers, registry};
use toricmono::triangulate::*;

#[test]
fn flips_are_involutions() {
    for e in registry() {
        let d = e.data().unwrap();
        let t1 = &d.chambers[d.smooth].triangulation;
        for (i, c) in d.edges() {
            let t2 = &d.chambers[i].triangulation;
            assert!(is_supported_on(&d.aset, t1, &c), "{}", e.name);
            assert_eq!(&flip(&d.aset, t1, &c).unwrap(), t2, "{}", e.name);
            assert_eq!(&flip(&d.aset, t2, &c.negated()).unwrap(), t1, "{}", e.name);
        }
    }
}

#[test]
fn ring_rank_counts_simplices() {
    for e in registry() {
        let d = e.data().unwrap();
        for ch in &d.chambers {
            let r = stanley_reisner(&d.aset, &ch.triangulation, default_names(d.aset.corank())).unwrap();
            assert_eq!(r.dim(), ch.triangulation.len(), "{} {}", e.name, ch.triangulation);
        }
    }
}

#[test]
fn chambers_cover_the_plane_in_order() {
    for name in ["two-param-22211", "two-param-62211"] {
        let d = data(name);
        assert_eq!(d.chambers.len(), 4);
        let found: Vec<_> = d
            .chambers
            .iter()
            .map(|c| c.generators.iter().cloned().collect::<std::collections::BTreeSet<_>>())
            .collect();
        assert_eq!(found, expected_two_param_chambers().to_vec());
        for (i, c) in d.chambers.iter().enumerate() {
            let next = &d.chambers[(i + 1) % 4];
            assert!(c.generators.iter().any(|g| next.generators.contains(g)));
            assert_eq!(triangulation_from_weights(&d.aset, &c.interior).unwrap(), c.triangulation);
        }
    }
}

#[test]
fn quintic_circuit_sets() {
    let d = data("quintic");
    let (_, c) = d.edges().pop().unwrap();
    let c = if c.plus().len() == 5 { c } else { c.negated() };
    assert_eq!(c.h(), &lattice_vector(&[-5, 1, 1, 1, 1, 1]));
    assert_eq!(c.minus_prime().len() + c.minus_dprime().len(), c.minus().len());
    assert_eq!(c.l_sum(), 5.into());
    assert!(c.is_standard());
    assert_eq!(d.chambers.len(), 2);
}

#[test]
fn nef_partition_points_are_consistent() {
    for e in registry() {
        let a = e.aset().unwrap();
        assert!(nested_cone_violations(&a).is_empty(), "{}", e.name);
        for p in 0..a.relations().rows() {
            assert!(a.is_relation(a.relations().row(p)));
        }
        assert_eq!(a.relations().rows(), a.corank());
    }
}

#[test]
fn generic_weights_are_checked() {
    let d = data("quintic");
    assert!(check_generic_weight(&d.aset, &lattice_vector(&[0])).is_err());
    assert!(check_generic_weight(&d.aset, &lattice_vector(&[3])).is_ok());
}
