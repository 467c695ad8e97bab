//! Parsers for the `--loop`, `--kernel` and class arguments.

use std::sync::Arc;

use thiserror::Error;
use toricmono::chowring::{generator, one, zero, AlgebraElement, GradedAlgebra};
use toricmono::exactlat::{parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectorError {
    #[error("unknown loop {0:?} (expected torus:<j>, edge[:<n>] or composite:<word>)")]
    Loop(String),
    #[error("unknown kernel {0:?} (expected twist:<class>, diagonal-ideal, conjugate:<class> or edge[:<n>])")]
    Kernel(String),
    #[error("bad word token {0:?} (expected t<j>, e or e<n>, optionally followed by ^<k> or ^-1)")]
    Token(String),
    #[error("cannot parse class {text:?}: {reason}")]
    Class { text: String, reason: String },
}

/// Which wall an edge selector refers to: the only one, or chamber `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeRef {
    Only,
    Chamber(usize),
}

/// One letter of a composite word with its exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: LoopRef,
    pub exponent: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopRef {
    /// Torus loop of the point with the given 1-based index.
    Torus(usize),
    Edge(EdgeRef),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopSelector {
    Single(LoopRef),
    Composite(Vec<Letter>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSelector {
    Twist(String),
    DiagonalIdeal,
    Conjugate(String),
    Edge(EdgeRef),
}

fn edge_ref(rest: Option<&str>) -> Option<EdgeRef> {
    match rest {
        None => Some(EdgeRef::Only),
        Some(n) => n.parse::<usize>().ok().filter(|&n| n >= 1).map(EdgeRef::Chamber),
    }
}

fn split_tag(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    }
}

pub fn parse_loop(s: &str) -> Result<LoopSelector, SelectorError> {
    let bad = || SelectorError::Loop(s.into());
    match split_tag(s.trim()) {
        ("torus", Some(j)) => {
            let j: usize = j.parse().map_err(|_| bad())?;
            if j == 0 {
                return Err(bad());
            }
            Ok(LoopSelector::Single(LoopRef::Torus(j)))
        }
        ("edge", rest) => Ok(LoopSelector::Single(LoopRef::Edge(edge_ref(rest).ok_or_else(bad)?))),
        ("composite", Some(word)) => Ok(LoopSelector::Composite(parse_word(word)?)),
        _ => Err(bad()),
    }
}

/// Parses `t6.e2^-1.t1^3` into letters; the word reads left to right.
pub fn parse_word(word: &str) -> Result<Vec<Letter>, SelectorError> {
    let letters: Result<Vec<Letter>, SelectorError> = word.split('.').map(parse_letter).collect();
    let letters = letters?;
    if letters.is_empty() {
        return Err(SelectorError::Token(word.into()));
    }
    Ok(letters)
}

fn parse_letter(token: &str) -> Result<Letter, SelectorError> {
    let bad = || SelectorError::Token(token.into());
    let t = token.trim();
    let (base, exponent) = match t.split_once('^') {
        Some((b, e)) => (b, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 1),
    };
    let generator = if let Some(j) = base.strip_prefix('t') {
        let j: usize = j.parse().map_err(|_| bad())?;
        if j == 0 {
            return Err(bad());
        }
        LoopRef::Torus(j)
    } else if let Some(n) = base.strip_prefix('e') {
        LoopRef::Edge(edge_ref(if n.is_empty() { None } else { Some(n) }).ok_or_else(bad)?)
    } else {
        return Err(bad());
    };
    Ok(Letter { generator, exponent })
}

pub fn parse_kernel(s: &str) -> Result<KernelSelector, SelectorError> {
    let bad = || SelectorError::Kernel(s.into());
    match split_tag(s.trim()) {
        ("twist", Some(c)) if !c.trim().is_empty() => Ok(KernelSelector::Twist(c.into())),
        ("conjugate", Some(c)) if !c.trim().is_empty() => Ok(KernelSelector::Conjugate(c.into())),
        ("diagonal-ideal", None) => Ok(KernelSelector::DiagonalIdeal),
        ("edge", rest) => Ok(KernelSelector::Edge(edge_ref(rest).ok_or_else(bad)?)),
        _ => Err(bad()),
    }
}

/// Parses a linear form such as `mu - 2*nu + 1/2` in the generators of `alg`.
pub fn parse_class(alg: &Arc<GradedAlgebra>, text: &str) -> Result<AlgebraElement, SelectorError> {
    let fail = |reason: String| SelectorError::Class {
        text: text.into(),
        reason,
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(fail("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in compact.char_indices() {
        let after_op = i > 0 && matches!(compact.as_bytes()[i - 1], b'*' | b'/');
        if (ch == '+' || ch == '-') && i > start && !after_op {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut out = zero(alg);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        let (coeff, name) = match body.rsplit_once('*') {
            Some((c, n)) => (parse_rational(c).ok_or_else(|| fail(format!("bad coefficient {c:?}")))?, Some(n)),
            None => match parse_rational(body) {
                Some(c) => (c, None),
                None => (Rational::from_integer(1.into()), Some(body)),
            },
        };
        let coeff = if sign < 0 { -coeff } else { coeff };
        let base = match name {
            None => one(alg),
            Some(n) => {
                let p = alg
                    .names()
                    .iter()
                    .position(|g| g == n)
                    .ok_or_else(|| fail(format!("unknown generator {n:?}; known: {}", alg.names().join(", "))))?;
                generator(alg, p)
            }
        };
        out = &out + &base.scale(&coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use toricmono::chowring::GradedAlgebra;
    use toricmono::poly::Poly;

    fn plane_pair() -> Arc<GradedAlgebra> {
        let mu = Poly::var(2, 0);
        let nu = Poly::var(2, 1);
        Arc::new(
            GradedAlgebra::from_ideal(vec!["mu".into(), "nu".into()], &[mu.pow(2), nu.pow(2)]).unwrap(),
        )
    }

    #[test]
    fn loops() {
        assert_eq!(parse_loop("torus:3").unwrap(), LoopSelector::Single(LoopRef::Torus(3)));
        assert_eq!(parse_loop("edge").unwrap(), LoopSelector::Single(LoopRef::Edge(EdgeRef::Only)));
        assert_eq!(
            parse_loop("edge:2").unwrap(),
            LoopSelector::Single(LoopRef::Edge(EdgeRef::Chamber(2)))
        );
        assert!(parse_loop("torus:0").is_err());
        assert!(parse_loop("spiral").is_err());
    }

    #[test]
    fn words() {
        let w = parse_word("t6.e^-1.e3^2").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w[0].generator, LoopRef::Torus(6));
        assert_eq!(w[1].exponent, -1);
        assert_eq!(w[2].generator, LoopRef::Edge(EdgeRef::Chamber(3)));
        assert!(parse_word("t6..e").is_err());
        assert!(parse_word("x1").is_err());
    }

    #[test]
    fn kernels() {
        assert_eq!(parse_kernel("diagonal-ideal").unwrap(), KernelSelector::DiagonalIdeal);
        assert_eq!(parse_kernel("twist:mu").unwrap(), KernelSelector::Twist("mu".into()));
        assert!(parse_kernel("twist:").is_err());
        assert!(parse_kernel("nonsense").is_err());
    }

    #[test]
    fn classes() {
        let alg = plane_pair();
        let c = parse_class(&alg, "mu - 2*nu + 1/2").unwrap();
        let expected = &(&generator(&alg, 0) - &generator(&alg, 1).scale(&Rational::from_integer(2.into())))
            + &one(&alg).scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(c, expected);
        assert_eq!(parse_class(&alg, "-3/2*nu").unwrap(), generator(&alg, 1).scale(&Rational::new((-3).into(), 2.into())));
        assert!(parse_class(&alg, "xi").is_err());
        assert!(parse_class(&alg, "").is_err());
    }
}
