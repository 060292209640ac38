//! Potentials (rational combinations of cyclic words), their traces on
//! representations, cyclic derivatives and critical loci.
//!
//! A word `x1 x2 ... xn` is read as a composition of maps: `xn` acts first
//! and its matrix product is `X1 X2 ... Xn`. A word is a closed cycle when
//! `src(xk) = tgt(x(k+1))` for every `k`, indices taken cyclically.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quiver::{Quiver, QuiverKind};
use crate::rational::{self, Rational};
use crate::representation::Representation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "rational::serde_q")]
    pub coeff: Rational,
    pub cycle: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawPotential")]
pub struct Potential {
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawPotential {
    terms: Vec<Term>,
}

impl From<RawPotential> for Potential {
    fn from(r: RawPotential) -> Self {
        Potential::from_terms(r.terms)
    }
}

/// Least rotation of a cyclic word.
pub fn canonical_rotation(word: &[String]) -> Vec<String> {
    (0..word.len())
        .map(|k| word[k..].iter().chain(&word[..k]).cloned().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl Potential {
    /// Canonicalizes each cycle, merges equal cycles and drops zero terms.
    /// Does not check closure; see [`Potential::validate`].
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut out: Vec<Term> = Vec::new();
        for t in terms {
            if t.cycle.is_empty() {
                continue;
            }
            let cycle = canonical_rotation(&t.cycle);
            match out.iter_mut().find(|o| o.cycle == cycle) {
                Some(o) => o.coeff += t.coeff,
                None => out.push(Term { coeff: t.coeff, cycle }),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Potential { terms: out }
    }

    pub fn new(quiver: &Quiver, terms: Vec<Term>) -> Result<Self> {
        let p = Potential::from_terms(terms);
        p.validate(quiver)?;
        Ok(p)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn validate(&self, quiver: &Quiver) -> Result<()> {
        for t in &self.terms {
            check_cycle(quiver, &t.cycle)?;
        }
        Ok(())
    }

    /// The same potential with each cycle rotated by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Vec<Term> {
        self.terms
            .iter()
            .map(|t| {
                let k = shift % t.cycle.len();
                Term { coeff: t.coeff.clone(), cycle: t.cycle[k..].iter().chain(&t.cycle[..k]).cloned().collect() }
            })
            .collect()
    }
}

fn check_cycle(quiver: &Quiver, cycle: &[String]) -> Result<()> {
    let n = cycle.len();
    for k in 0..n {
        let here = quiver.arrow(&cycle[k])?;
        let next = quiver.arrow(&cycle[(k + 1) % n])?;
        if here.src != next.tgt {
            return Err(Error::NotACycle(cycle.join(" ")));
        }
    }
    Ok(())
}

/// A formal sum of paths sharing endpoints; words follow the composition
/// convention, so every word maps `source -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSum {
    pub source: String,
    pub target: String,
    pub terms: Vec<Term>,
}

impl PathSum {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Matrix of shape `dim(target) x dim(source)`.
    pub fn evaluate(&self, rep: &Representation) -> Result<Matrix> {
        let rows = rep.dims().get(&self.target);
        let cols = rep.dims().get(&self.source);
        let mut acc = Matrix::zeros(rows, cols);
        for t in &self.terms {
            let m = word_product(rep, &t.cycle, cols)?;
            acc = acc.checked_add(&m.scale(&t.coeff))?;
        }
        Ok(acc)
    }
}

fn word_product(rep: &Representation, word: &[String], empty_dim: usize) -> Result<Matrix> {
    let mut it = word.iter();
    let Some(first) = it.next() else {
        return Ok(Matrix::identity(empty_dim));
    };
    let mut acc = rep.matrix(first)?.clone();
    for x in it {
        acc = acc.checked_mul(rep.matrix(x)?)?;
    }
    Ok(acc)
}

/// `sum coeff * Tr(product along cycle)`.
pub fn trace_eval(rep: &Representation, pot: &Potential) -> Result<Rational> {
    pot.validate(rep.quiver())?;
    let mut total = Rational::zero();
    for t in &pot.terms {
        let m = word_product(rep, &t.cycle, 0)?;
        total += &t.coeff * m.trace()?;
    }
    Ok(total)
}

/// Cyclic derivative with respect to `arrow`: each occurrence contributes
/// the cycle read from just after it, with the occurrence removed.
pub fn cyclic_derivative(quiver: &Quiver, pot: &Potential, arrow: &str) -> Result<PathSum> {
    let a = quiver.arrow(arrow)?;
    let mut terms: Vec<Term> = Vec::new();
    for t in &pot.terms {
        let n = t.cycle.len();
        for k in (0..n).filter(|&k| t.cycle[k] == arrow) {
            let word: Vec<String> = (1..n).map(|s| t.cycle[(k + s) % n].clone()).collect();
            match terms.iter_mut().find(|o| o.cycle == word) {
                Some(o) => o.coeff += &t.coeff,
                None => terms.push(Term { coeff: t.coeff.clone(), cycle: word }),
            }
        }
    }
    terms.retain(|t| !t.coeff.is_zero());
    Ok(PathSum { source: a.tgt.clone(), target: a.src.clone(), terms })
}

/// Gradient of `Tr W` at every arrow. The entry for `x: s -> t` has shape
/// `dim(s) x dim(t)`, so `Tr(grad[x] * E)` is the derivative in direction `E`.
pub fn gradient_eval(rep: &Representation, pot: &Potential) -> Result<BTreeMap<String, Matrix>> {
    pot.validate(rep.quiver())?;
    rep.quiver()
        .arrows()
        .iter()
        .map(|a| {
            let ps = cyclic_derivative(rep.quiver(), pot, &a.id)?;
            Ok((a.id.clone(), ps.evaluate(rep)?))
        })
        .collect()
}

pub fn is_critical(rep: &Representation, pot: &Potential) -> Result<bool> {
    Ok(gradient_eval(rep, pot)?.values().all(Matrix::is_zero))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    /// `a1 b1 a2 b2 - a1 b2 a2 b1` on the conifold quiver.
    Conifold,
    /// `sum_i (b1'i a2'' a1'i - b1'i a1'' a2'i) + a1'' b1'' a2'' - a2'' b1'' a1''`.
    Reduced { r: usize },
    /// `Tr C[A,B]`.
    TripleLoop,
    /// `Tr C([A,B] + sum_i ui vi)` on the DT/PT quiver; the extra framings
    /// `e1..er` do not enter.
    Dtpt { a: usize, r: usize },
}

impl PotentialKind {
    pub fn quiver_kind(self) -> QuiverKind {
        match self {
            PotentialKind::Conifold => QuiverKind::Conifold,
            PotentialKind::Reduced { r } => QuiverKind::Reduced { r },
            PotentialKind::TripleLoop => QuiverKind::TripleLoop,
            PotentialKind::Dtpt { a, r } => QuiverKind::Dtpt { a, r },
        }
    }

    pub fn from_name(name: &str, params: &BTreeMap<&str, i64>) -> Result<Self> {
        Ok(match QuiverKind::from_name(name, params)? {
            QuiverKind::Conifold => PotentialKind::Conifold,
            QuiverKind::Reduced { r } => PotentialKind::Reduced { r },
            QuiverKind::TripleLoop => PotentialKind::TripleLoop,
            QuiverKind::Dtpt { a, r } => PotentialKind::Dtpt { a, r },
            other => {
                return Err(Error::InvalidParameter(format!("no built-in potential for {other:?}")))
            }
        })
    }
}

fn term(c: i64, word: &[&str]) -> Term {
    Term { coeff: rational::int(c), cycle: word.iter().map(|s| s.to_string()).collect() }
}

fn owned_term(c: i64, word: Vec<String>) -> Term {
    Term { coeff: rational::int(c), cycle: word }
}

/// `C A B - C B A`.
pub(crate) fn commutator_terms() -> Vec<Term> {
    vec![term(1, &["C", "A", "B"]), term(-1, &["C", "B", "A"])]
}

/// Builds the potential and checks it against its own quiver.
pub fn build_potential(kind: PotentialKind) -> Result<Potential> {
    let quiver = crate::quiver::build_quiver(kind.quiver_kind())?;
    build_potential_on(kind, &quiver)
}

/// Builds the potential on a caller-supplied quiver; fails when the quiver
/// lacks the arrows the potential needs.
pub fn build_potential_on(kind: PotentialKind, quiver: &Quiver) -> Result<Potential> {
    let terms = match kind {
        PotentialKind::Conifold => {
            vec![term(1, &["a1", "b1", "a2", "b2"]), term(-1, &["a1", "b2", "a2", "b1"])]
        }
        PotentialKind::Reduced { r } => {
            let mut t = Vec::new();
            for i in 1..=r {
                t.push(owned_term(1, vec![format!("b1'{i}"), "a2''".into(), format!("a1'{i}")]));
                t.push(owned_term(-1, vec![format!("b1'{i}"), "a1''".into(), format!("a2'{i}")]));
            }
            t.push(term(1, &["a1''", "b1''", "a2''"]));
            t.push(term(-1, &["a2''", "b1''", "a1''"]));
            t
        }
        PotentialKind::TripleLoop => commutator_terms(),
        PotentialKind::Dtpt { a, .. } => {
            let mut t = commutator_terms();
            for i in 1..=a {
                t.push(owned_term(1, vec!["C".into(), format!("u{i}"), format!("v{i}")]));
            }
            t
        }
    };
    Potential::new(quiver, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::build_quiver;
    use crate::rational::int;

    fn words(ps: &PathSum) -> Vec<(Rational, String)> {
        ps.terms.iter().map(|t| (t.coeff.clone(), t.cycle.join(" "))).collect()
    }

    fn canon(c: i64, w: &[&str]) -> Term {
        let w: Vec<String> = w.iter().map(|s| s.to_string()).collect();
        Term { coeff: int(c), cycle: canonical_rotation(&w) }
    }

    #[test]
    fn triple_loop_terms() {
        let p = build_potential(PotentialKind::TripleLoop).unwrap();
        assert_eq!(p.terms(), &[canon(1, &["C", "A", "B"]), canon(-1, &["C", "B", "A"])]);
    }

    #[test]
    fn conifold_terms() {
        let p = build_potential(PotentialKind::Conifold).unwrap();
        assert_eq!(
            p.terms(),
            &[canon(1, &["a1", "b1", "a2", "b2"]), canon(-1, &["a1", "b2", "a2", "b1"])]
        );
    }

    #[test]
    fn reduced_term_count() {
        assert_eq!(build_potential(PotentialKind::Reduced { r: 1 }).unwrap().terms().len(), 4);
        assert_eq!(build_potential(PotentialKind::Reduced { r: 3 }).unwrap().terms().len(), 8);
    }

    #[test]
    fn derivative_examples() {
        let q = build_quiver(QuiverKind::TripleLoop).unwrap();
        let p = build_potential(PotentialKind::TripleLoop).unwrap();
        let dc = cyclic_derivative(&q, &p, "C").unwrap();
        assert_eq!(words(&dc), vec![(int(1), "A B".into()), (int(-1), "B A".into())]);

        let q = build_quiver(QuiverKind::Conifold).unwrap();
        let p = build_potential(PotentialKind::Conifold).unwrap();
        let da = cyclic_derivative(&q, &p, "a1").unwrap();
        assert_eq!(words(&da), vec![(int(1), "b1 a2 b2".into()), (int(-1), "b2 a2 b1".into())]);
        assert_eq!((da.source.as_str(), da.target.as_str()), ("2", "1"));
    }

    #[test]
    fn absent_arrow_gives_empty_sum() {
        let q = build_quiver(QuiverKind::Dtpt { a: 1, r: 1 }).unwrap();
        let p = build_potential(PotentialKind::Dtpt { a: 1, r: 1 }).unwrap();
        assert!(cyclic_derivative(&q, &p, "e1").unwrap().is_empty());
        assert!(cyclic_derivative(&q, &p, "nope").is_err());
    }

    #[test]
    fn open_paths_are_rejected() {
        let q = build_quiver(QuiverKind::Conifold).unwrap();
        let bad = vec![term(1, &["a1", "a2"])];
        assert!(matches!(Potential::new(&q, bad), Err(Error::NotACycle(_))));
        let q = build_quiver(QuiverKind::TripleLoop).unwrap();
        assert!(build_potential_on(PotentialKind::Conifold, &q).is_err());
    }

    #[test]
    fn like_terms_merge() {
        let p = Potential::from_terms(vec![
            term(1, &["A", "B", "C"]),
            term(-1, &["B", "C", "A"]),
            term(2, &["C", "B", "A"]),
        ]);
        assert_eq!(p.terms(), &[canon(2, &["A", "C", "B"])]);
    }
}
