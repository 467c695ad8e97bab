mod common;

use common::{data, example};
use itertools::Itertools;
use toricmono::chowring::{basis_element, generator};
use toricmono::exactlat::{rat, Rational};
use toricmono::fmkernel::twist;
use toricmono::mirrorlab::{phi_mismatch, registry, ExampleSpec};
use toricmono::monodromy::*;

fn quintic_loops() -> (MonodromyOperator, MonodromyOperator) {
    let d = data("quintic");
    let (_, c) = d.edges().pop().unwrap();
    let sigma1 = edge_loop(&d.phase, &d.edge_data(&c).unwrap(), Normalization::Psi).unwrap();
    let sigma0 = class_loop("sigma0", &d.phase.lambda(1)).unwrap();
    (sigma0, sigma1)
}

#[test]
fn quintic_loops_satisfy_the_order_five_relation() {
    let (s0, s1) = quintic_loops();
    assert!(compose(&[&s1, &s0]).pow(5).is_identity());
    assert!(compose(&[&s0, &s1]).pow(5).is_identity());
    assert!(!compose(&[&s1, &s0]).pow(1).is_identity());
    assert!(!compose(&[&s0.inverse().unwrap(), &s1]).pow(5).is_identity());
}

#[test]
fn quintic_edge_loop_entries() {
    let (_, s1) = quintic_loops();
    let m = &s1.matrix;
    assert_eq!(m.get(0, 3), &rat(-5, 1));
    assert_eq!(m.get(0, 1), &rat(-25, 6));
    assert_eq!(m.get(0, 0), &rat(1, 1));
    assert_eq!(m.get(0, 2), &rat(0, 1));
    assert_eq!(m.determinant().unwrap(), rat(1, 1));
}

#[test]
fn torus_loops_are_twists() {
    for e in registry() {
        let d = e.data().unwrap();
        for j in 0..d.aset.len() {
            let t = torus_loop(&d.phase, j).unwrap();
            assert_eq!(t.matrix, twist(&d.phase.lambda(j)).unwrap(), "{} point {}", e.name, j + 1);
            assert!(t.is_invertible());
        }
    }
}

#[test]
fn every_edge_loop_is_invertible() {
    for e in registry() {
        let d = e.data().unwrap();
        for (_, c) in d.edges() {
            if !check_condition2(&c) {
                continue;
            }
            let ed = d.edge_data(&c).unwrap();
            for norm in [Normalization::Psi, Normalization::Phi] {
                let op = edge_loop(&d.phase, &ed, norm).unwrap();
                assert!(op.is_invertible(), "{} {}", e.name, op.label);
                assert!(op.then(&op.inverse().unwrap()).is_identity());
            }
        }
    }
}

#[test]
fn normalizations_differ_on_every_example() {
    for e in registry() {
        let d = e.data().unwrap();
        for (i, (_, c)) in d.edges().into_iter().enumerate() {
            if check_condition2(&c) {
                assert!(phi_mismatch(&e, i).unwrap(), "{}", e.name);
            }
        }
    }
}

#[test]
fn failing_condition_blocks_the_edge_loop() {
    let d = data("octic-11222");
    let (_, c) = d.edges().pop().unwrap();
    assert!(!check_condition2(&c));
    assert_eq!(
        edge_loop(&d.phase, &d.edge_data(&c).unwrap(), Normalization::Psi).unwrap_err(),
        MonodromyError::ContourReduction
    );
}

/// Every weighted projective hypersurface with weights up to 6 that has a
/// smooth phase: the two formulations of the wall condition agree.
#[test]
fn wall_condition_formulations_agree() {
    let mut seen = 0;
    for tail in (1..=6i64).combinations_with_replacement(4) {
        let weights: Vec<i64> = std::iter::once(1).chain(tail).collect();
        let d: i64 = weights.iter().sum();
        let spec = ExampleSpec::one_param("scan", &weights, &[d], &[0; 5]);
        let Ok(data) = spec.data() else { continue };
        for (_, c) in data.edges() {
            assert_eq!(check_condition2(&c), condition2_by_divisibility(&c), "{weights:?}");
            seen += 1;
        }
    }
    assert!(seen > 5);
}

#[test]
fn conifold_points() {
    let product = |d: i64, q: &[i64]| {
        let mut v = Rational::from_integer(1.into());
        for _ in 0..d {
            v /= rat(d, 1);
        }
        for &x in q {
            for _ in 0..x {
                v *= rat(x, 1);
            }
        }
        v
    };
    for (name, d, q) in [
        ("quintic", 5, vec![1, 1, 1, 1, 1]),
        ("sextic-11112", 6, vec![1, 1, 1, 1, 2]),
        ("octic-11114", 8, vec![1, 1, 1, 1, 4]),
    ] {
        let (_, c) = data(name).edges().pop().unwrap();
        assert_eq!(conifold_value(&c), product(d, &q), "{name}");
    }
    let (_, c) = data("quintic").edges().pop().unwrap();
    assert_eq!(conifold_value(&c), rat(1, 3125));
}

#[test]
fn horn_curves_of_the_two_parameter_family() {
    for name in ["two-param-22211", "two-param-62211"] {
        let e = example(name);
        // c = d^{-d} ∏ q^q with d = Σ q + 1.
        let q = e.half_weights();
        let d = e.degrees[0] / 2;
        let mut c = Rational::from_integer(1.into());
        for _ in 0..d {
            c /= rat(d, 1);
        }
        for &x in &q {
            for _ in 0..x {
                c *= rat(x, 1);
            }
        }
        let horn = horn_discriminant(&e.aset().unwrap()).unwrap();
        assert_eq!(horn.implicit, two_param_discriminant(&c).monic(), "{name}");
    }
}

#[test]
fn quintic_horn_point() {
    let horn = horn_discriminant(&example("quintic").aset().unwrap()).unwrap();
    let x = toricmono::poly::Poly::var(1, 0);
    assert_eq!(horn.implicit, &x - &toricmono::poly::Poly::constant(1, rat(1, 3125)));
}

#[test]
fn double_residue_is_the_todd_pairing() {
    for name in ["two-param-22211", "two-param-62211"] {
        let p = data(name).phase;
        for i in 0..p.h.dim() {
            let g = basis_element(&p.h, i);
            assert_eq!(double_residue(&p, &g).unwrap(), todd_pairing(&p, &g).unwrap(), "{name} {i}");
        }
    }
    let p = data("two-param-22211").phase;
    assert_eq!(double_residue(&p, &generator(&p.h, 0)).unwrap(), rat(14, 3));
}

#[test]
fn class_loops_compose_additively() {
    let p = data("two-param-62211").phase;
    let mu = generator(&p.h, 0);
    let nu = generator(&p.h, 1);
    let a = class_loop("mu", &mu).unwrap();
    let b = class_loop("nu", &nu).unwrap();
    let ab = class_loop("mu+nu", &(&mu + &nu)).unwrap();
    assert_eq!(compose(&[&a, &b]).matrix, ab.matrix);
    assert_eq!(a.inverse().unwrap().matrix, class_loop("-mu", &-&mu).unwrap().matrix);
}
