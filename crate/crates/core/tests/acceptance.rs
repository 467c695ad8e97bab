//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{check_gysin, data, example, gysin_toys};
use toricmono::chowring::{basis_element, exp_class, generator, stanley_reisner, default_names};
use toricmono::exactlat::{rat, Rational, RationalMatrix};
use toricmono::fmkernel::{diagonal_ideal, edge_kernel_action, twist, twisted_conjugate};
use toricmono::gkzseries::{phi_series, verify_box, verify_euler};
use toricmono::mirrorlab::{
    expected_two_param_chambers, expected_two_param_triangulations, registry, two_param_loops, ExampleKind,
};
use toricmono::monodromy::{
    check_condition2, class_loop, compose, double_residue, edge_loop, horn_discriminant, todd_pairing, torus_loop,
    two_param_discriminant, MonodromyOperator, Normalization,
};
use toricmono::triangulate::flip;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < budget, || format!("took {spent:?}, budget {budget:?}"))
}

fn mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    a.checked_mul(b).expect("square matrices of equal size")
}

fn two_param_names() -> [&'static str; 2] {
    ["two-param-22211", "two-param-62211"]
}

fn a1() -> Outcome {
    let start = Instant::now();
    let d = data("quintic");
    let (_, c) = d.edges().pop().ok_or("no wall")?;
    let ed = d.edge_data(&c).map_err(|e| e.to_string())?;
    let loop_m = edge_loop(&d.phase, &ed, Normalization::Psi).map_err(|e| e.to_string())?.matrix;
    let kernel = diagonal_ideal(&d.phase).map_err(|e| e.to_string())?;
    ensure(loop_m == kernel, || format!("loop {loop_m} differs from kernel {kernel}"))?;
    ensure(loop_m.get(0, 3) == &rat(-5, 1), || format!("lambda^3 -> 1 entry {}", loop_m.get(0, 3)))?;
    ensure(loop_m.get(0, 1) == &rat(-25, 6), || format!("lambda -> 1 entry {}", loop_m.get(0, 1)))?;
    ensure(d.phase.integrate(&d.phase.lambda(1).pow(3)) == Ok(rat(5, 1)), || "integral of lambda^3".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("4x4 exact match in {:?}", start.elapsed()))
}

fn a2() -> Outcome {
    let start = Instant::now();
    let mut checked = Vec::new();
    for e in registry().into_iter().filter(|e| e.kind == ExampleKind::OneParam) {
        let d = e.data().map_err(|err| err.to_string())?;
        let edges = d.edges();
        if !edges.iter().all(|(_, c)| check_condition2(c)) {
            continue;
        }
        let p = &d.phase;
        let err = |x: &dyn std::fmt::Display| format!("{}: {x}", e.name);
        let h = p.lambda(d.aset.len() - 1);
        let ed = d.edge_data(&edges[0].1).map_err(|x| err(&x))?;
        let sigma1 = edge_loop(p, &ed, Normalization::Psi).map_err(|x| err(&x))?;
        let sigma0 = class_loop("sigma0", &h).map_err(|x| err(&x))?;
        let diag = diagonal_ideal(p).map_err(|x| err(&x))?;
        ensure(sigma1.matrix == diag, || err(&"edge loop differs from diagonal-ideal kernel"))?;
        let t = torus_loop(p, d.aset.len() - 1).map_err(|x| err(&x))?;
        ensure(t.matrix == twist(&h).map_err(|x| err(&x))?, || err(&"torus loop differs from twist"))?;
        let conj = compose(&[&sigma0, &sigma1, &sigma0.inverse().map_err(|x| err(&x))?]);
        let spherical = twisted_conjugate(p, &h).map_err(|x| err(&x))?;
        ensure(conj.matrix == spherical, || err(&"conjugated loop differs from spherical twist"))?;
        checked.push(e.name);
    }
    ensure(checked.len() >= 4, || format!("only {checked:?} checked"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} in {:?}", checked.join(", "), start.elapsed()))
}

fn a3() -> Outcome {
    for name in two_param_names() {
        let e = example(name);
        let d = data(name);
        ensure(d.chambers.len() == 4, || format!("{name}: {} chambers", d.chambers.len()))?;
        let n = e.weights.len() - 2;
        let expected_t = expected_two_param_triangulations(e.degrees.len(), n);
        let expected_g = expected_two_param_chambers();
        for (ch, (g, t)) in d.chambers.iter().zip(expected_g.iter().zip(&expected_t)) {
            let found: std::collections::BTreeSet<_> = ch.generators.iter().cloned().collect();
            ensure(&found == g, || format!("{name}: generators {found:?}, expected {g:?}"))?;
            ensure(&ch.triangulation == t, || format!("{name}: triangulation {}, expected {t}", ch.triangulation))?;
        }
    }
    Ok("4 chambers with matching generators and triangulations for both families".into())
}

fn a4() -> Outcome {
    let mut shown = Vec::new();
    for name in two_param_names() {
        let e = example(name);
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
        let horn = horn_discriminant(&e.aset().map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
        let expected = two_param_discriminant(&c).monic();
        ensure(horn.implicit == expected, || format!("{name}: eliminant {}", horn.implicit.render(&["x", "y"])))?;
        shown.push(format!("{name}: c = {c}"));
    }
    Ok(shown.join(", "))
}

fn a5() -> Outcome {
    let mut count = 0;
    for name in two_param_names() {
        let p = data(name).phase;
        for i in 0..p.h.dim() {
            let g = basis_element(&p.h, i);
            let lhs = double_residue(&p, &g).map_err(|x| x.to_string())?;
            let rhs = todd_pairing(&p, &g).map_err(|x| x.to_string())?;
            ensure(lhs == rhs, || format!("{name} {}: {lhs} vs {rhs}", p.h.basis_names()[i]))?;
            count += 1;
        }
    }
    Ok(format!("{count} basis classes"))
}

fn a6() -> Outcome {
    let start = Instant::now();
    for name in two_param_names() {
        let d = data(name);
        let p = &d.phase;
        let err = |x: &dyn std::fmt::Display| format!("{name}: {x}");
        let loops = two_param_loops(&d).map_err(|x| err(&x))?;
        let diag = diagonal_ideal(p).map_err(|x| err(&x))?;
        let right = mul(&mul(&loops.tau.matrix, &loops.v.matrix), &diag);
        ensure(loops.lhs.matrix == right, || err(&"composite differs from tau.v.Td"))?;
        let mu = generator(&p.h, 0);
        let nu = generator(&p.h, 1);
        ensure(loops.u.matrix == twist(&mu).map_err(|x| err(&x))?, || err(&"u differs from twist by mu"))?;
        ensure(loops.v.matrix == twist(&nu).map_err(|x| err(&x))?, || err(&"v differs from twist by nu"))?;
        ensure(loops.delta0.matrix == diag, || err(&"delta0 differs from diagonal-ideal kernel"))?;
        let conj = loops.delta0.conjugate_by(&loops.v).map_err(|x| err(&x))?;
        ensure(conj.matrix == twisted_conjugate(p, &nu).map_err(|x| err(&x))?, || {
            err(&"v.delta0.v^-1 differs from the spherical twist by nu")
        })?;
        let kernel = MonodromyOperator::new("K", edge_kernel_action(p, &loops.edge).map_err(|x| err(&x))?);
        ensure(kernel.conjugate_by(&loops.v).map_err(|x| err(&x))?.matrix == loops.tau.matrix, || {
            err(&"tau differs from the conjugated edge kernel")
        })?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("composite and four bullets for both families in {:?}", start.elapsed()))
}

fn a7() -> Outcome {
    let mut matched = 0;
    let mut skipped = Vec::new();
    for e in registry() {
        let d = e.data().map_err(|x| x.to_string())?;
        for (i, c) in d.edges() {
            if !check_condition2(&c) {
                skipped.push(format!("{} edge {}", e.name, i + 1));
                continue;
            }
            let ed = d.edge_data(&c).map_err(|x| x.to_string())?;
            let lhs = edge_loop(&d.phase, &ed, Normalization::Psi).map_err(|x| x.to_string())?;
            let rhs = edge_kernel_action(&d.phase, &ed).map_err(|x| x.to_string())?;
            ensure(lhs.matrix == rhs, || format!("{} edge {}: {}", e.name, i + 1, c))?;
            matched += 1;
        }
    }
    Ok(format!(
        "{matched} walls match; outside the wall condition: {}",
        if skipped.is_empty() { "none".to_string() } else { skipped.join(", ") }
    ))
}

fn a8() -> Outcome {
    let toys = gysin_toys();
    for toy in &toys {
        check_gysin(toy)?;
    }
    Ok(toys.iter().map(|t| t.name).collect::<Vec<_>>().join(", "))
}

fn a9() -> Outcome {
    let order = 4;
    let mut terms = 0;
    for e in registry() {
        let d = e.data().map_err(|x| x.to_string())?;
        let s = phi_series(&d.phase, &d.chambers[d.smooth], order).map_err(|x| x.to_string())?;
        let rel = d.aset.relations();
        let mut generators: Vec<Vec<_>> = (0..rel.rows()).map(|p| rel.row(p).to_vec()).collect();
        generators.extend(d.edges().into_iter().map(|(_, c)| c.h().clone()));
        for g in &generators {
            let ok = verify_box(&d.phase, &s, g).map_err(|x| x.to_string())?;
            ensure(ok, || format!("{}: box operator for {g:?}", e.name))?;
        }
        ensure(verify_euler(&d.phase, &s), || format!("{}: Euler operators", e.name))?;
        terms += s.len();
    }
    Ok(format!("order {order}, {terms} coefficients across the registry"))
}

fn a10() -> Outcome {
    let mut facts = Vec::new();
    for e in registry() {
        let d = e.data().map_err(|x| x.to_string())?;
        let t1 = &d.chambers[d.smooth].triangulation;
        for (i, c) in d.edges() {
            let t2 = flip(&d.aset, t1, &c).map_err(|x| x.to_string())?;
            ensure(t2 == d.chambers[i].triangulation, || format!("{}: flip target", e.name))?;
            let back = flip(&d.aset, &t2, &c.negated()).map_err(|x| x.to_string())?;
            ensure(&back == t1, || format!("{}: flip is not an involution", e.name))?;
        }
        for ch in &d.chambers {
            let r = stanley_reisner(&d.aset, &ch.triangulation, default_names(d.aset.corank()))
                .map_err(|x| x.to_string())?;
            ensure(r.dim() == ch.triangulation.len(), || {
                format!("{}: rank {} vs {} simplices", e.name, r.dim(), ch.triangulation.len())
            })?;
        }
        let p = &d.phase;
        let classes: Vec<_> = (0..p.aset.len()).map(|j| p.lambda(j)).collect();
        for a in &classes {
            for b in &classes {
                let sum = exp_class(&(a + b)).map_err(|x| x.to_string())?;
                let prod = &exp_class(a).map_err(|x| x.to_string())? * &exp_class(b).map_err(|x| x.to_string())?;
                ensure(sum == prod, || format!("{}: exp group law", e.name))?;
                let ts = twist(&(a + b)).map_err(|x| x.to_string())?;
                let tp = mul(&twist(a).map_err(|x| x.to_string())?, &twist(b).map_err(|x| x.to_string())?);
                ensure(ts == tp, || format!("{}: twist group law", e.name))?;
            }
        }
        let mut ops = vec![diagonal_ideal(p).map_err(|x| x.to_string())?];
        for j in 0..p.aset.len() {
            ops.push(torus_loop(p, j).map_err(|x| x.to_string())?.matrix);
            ops.push(twisted_conjugate(p, &classes[j]).map_err(|x| x.to_string())?);
        }
        for (_, c) in d.edges().into_iter().filter(|(_, c)| check_condition2(c)) {
            let ed = d.edge_data(&c).map_err(|x| x.to_string())?;
            for norm in [Normalization::Psi, Normalization::Phi] {
                ops.push(edge_loop(p, &ed, norm).map_err(|x| x.to_string())?.matrix);
            }
            ops.push(edge_kernel_action(p, &ed).map_err(|x| x.to_string())?);
        }
        for m in &ops {
            let inv = m.inverse().map_err(|x| format!("{}: singular operator ({x})", e.name))?;
            ensure(mul(m, &inv).is_identity(), || format!("{}: inverse check", e.name))?;
        }
    }
    facts.push("flips, ring ranks, group laws, invertibility".to_string());

    let d = data("quintic");
    let (_, c) = d.edges().pop().ok_or("no wall")?;
    let ed = d.edge_data(&c).map_err(|x| x.to_string())?;
    let s1 = edge_loop(&d.phase, &ed, Normalization::Psi).map_err(|x| x.to_string())?;
    let s0 = class_loop("sigma0", &d.phase.lambda(1)).map_err(|x| x.to_string())?;
    ensure(compose(&[&s1, &s0]).pow(5).is_identity(), || "(M_s1 M_s0)^5 is not the identity".into())?;
    facts.push("quintic (M_s1 M_s0)^5 = I".into());
    Ok(facts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("{name} PASS {detail}"),
            Err(reason) => {
                failed += 1;
                println!("{name} FAIL {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
