#![allow(dead_code)]

use toricmono::chowring::{one, zero, AlgebraElement};
use toricmono::exactlat::{rank_of, rat, Rational};
use toricmono::fmkernel::{toric_fibration, ToricFibration};
use toricmono::mirrorlab::{find_example, registry, ExampleData, ExampleSpec};

pub fn example(name: &str) -> ExampleSpec {
    find_example(&registry(), name).unwrap()
}

pub fn data(name: &str) -> ExampleData {
    example(name).data().unwrap()
}

/// A toric fibration together with the fibre weights `h_j`.
pub struct Toy {
    pub name: &'static str,
    pub fibration: ToricFibration,
    pub weights: Vec<i64>,
}

/// Maximal cones of a product fan: one fibre ray with each base cone.
fn product_cones(fibre: usize, base_cones: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for f in 0..fibre {
        for c in base_cones {
            let mut cone = vec![f];
            cone.extend(c.iter().map(|b| b + fibre));
            out.push(cone);
        }
    }
    out
}

/// Hirzebruch surfaces, a `P(1,2)`-bundle over `P^1`, and a `P^1`-bundle
/// over `P^2`.
pub fn gysin_toys() -> Vec<Toy> {
    let line = vec![vec![0], vec![1]];
    let plane = vec![vec![0, 1], vec![1, 2], vec![2, 0]];
    let build = |name, fibre: Vec<(Vec<i64>, i64)>, base: Vec<Vec<i64>>, cones: &[Vec<usize>]| {
        let weights = fibre.iter().map(|(_, w)| *w).collect();
        let fibration = toric_fibration(&fibre, &base, &product_cones(fibre.len(), cones)).unwrap();
        Toy {
            name,
            fibration,
            weights,
        }
    };
    vec![
        build(
            "F1",
            vec![(vec![1, 0], 1), (vec![-1, 0], 1)],
            vec![vec![1, 1], vec![0, -1]],
            &line,
        ),
        build(
            "F3",
            vec![(vec![1, 0], 1), (vec![-1, 0], 1)],
            vec![vec![3, 1], vec![0, -1]],
            &line,
        ),
        build(
            "P(1,2) over P1",
            vec![(vec![2, 0], 1), (vec![-1, 0], 2)],
            vec![vec![1, 1], vec![0, -1]],
            &line,
        ),
        build(
            "P1 over P2",
            vec![(vec![1, 0, 0], 1), (vec![-1, 0, 0], 1)],
            vec![vec![1, 1, 0], vec![2, 0, 1], vec![0, -1, -1]],
            &plane,
        ),
    ]
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m & (1 << i) != 0).collect())
}

/// Pushforward of a squarefree divisor monomial from the combinatorial
/// rules: base divisors factor out, a product of all fibre divisors but
/// `D_i` maps to `1/h_i`, and every other fibre monomial maps to zero.
pub fn combinatorial_pushforward(toy: &Toy, fibre_part: &[usize], base_part: &[usize]) -> AlgebraElement {
    let f = &toy.fibration;
    let l = f.fibre.len() - 1;
    if fibre_part.len() != l {
        return zero(&f.ring);
    }
    let missing = (0..f.fibre.len()).find(|i| !fibre_part.contains(&f.fibre[*i])).unwrap();
    base_part
        .iter()
        .fold(one(&f.ring), |acc, &j| &acc * &f.divisor(j))
        .scale(&rat(1, toy.weights[missing]))
}

/// Compares the residue pushforward with the combinatorial rules on every
/// squarefree divisor monomial, and checks that those monomials span the
/// ring (so the two maps agree on every basis class).
pub fn check_gysin(toy: &Toy) -> Result<(), String> {
    let f = &toy.fibration;
    let rays: Vec<usize> = f.fibre.iter().chain(&f.base).copied().collect();
    let mut spanning: Vec<Vec<Rational>> = Vec::new();
    for s in subsets(rays.len()) {
        let picked: Vec<usize> = s.iter().map(|&i| rays[i]).collect();
        let monomial = picked.iter().fold(one(&f.ring), |acc, &j| &acc * &f.divisor(j));
        spanning.push(monomial.coeffs().to_vec());
        let fibre_part: Vec<usize> = picked.iter().copied().filter(|j| f.fibre.contains(j)).collect();
        let base_part: Vec<usize> = picked.iter().copied().filter(|j| f.base.contains(j)).collect();
        let expected = combinatorial_pushforward(toy, &fibre_part, &base_part);
        let got = f.pushforward(&monomial).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!(
                "{}: pushforward of D{:?} is {got}, expected {expected}",
                toy.name, picked
            ));
        }
    }
    if rank_of(&spanning) != f.ring.dim() {
        return Err(format!("{}: divisor monomials do not span the ring", toy.name));
    }
    Ok(())
}
