//! Semistability of framed representations of the DT/PT quiver for the
//! determinant character and its inverse.
//!
//! With `u` the framing columns, `v` the coframing rows and loops `A, B, C`:
//!
//! * DT side: semistable iff the smallest loop-invariant subspace containing
//!   every framing column is all of `V`;
//! * PT side: semistable iff the largest loop-invariant subspace killed by
//!   every coframing row is zero.
//!
//! [`one_ps_falsifier`] searches for a one-parameter subgroup violating the
//! Hilbert–Mumford numerical criterion directly and serves as an oracle for
//! the two subspace tests.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{span_basis, Matrix};
use crate::quiver::{build_quiver, QuiverKind};
use crate::rational::{self, Rational};
use crate::representation::Representation;

mod small;

use small::SmallRep;

/// A point of `R^{a,r}(1, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFramedRep", into = "RawFramedRep")]
pub struct FramedRep {
    a: usize,
    r: usize,
    d: usize,
    /// `A`, `B`, `C`.
    loops: [Matrix; 3],
    /// `a + r` columns: the paired `u1..ua`, then the extra `e1..er`.
    framings: Vec<Vec<Rational>>,
    /// `a` rows `v1..va`.
    coframings: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Loop,
    Framing,
    Coframing,
}

#[derive(Serialize, Deserialize)]
struct RoleArrow {
    id: String,
    role: Role,
    #[serde(with = "rational::serde_q_vec")]
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawFramedRep {
    a: usize,
    r: usize,
    d: usize,
    arrows: Vec<RoleArrow>,
}

impl From<FramedRep> for RawFramedRep {
    fn from(f: FramedRep) -> Self {
        let mut arrows = Vec::new();
        for (id, m) in ["A", "B", "C"].iter().zip(f.loops) {
            arrows.push(RoleArrow { id: id.to_string(), role: Role::Loop, entries: m.into_data() });
        }
        for (k, col) in f.framings.into_iter().enumerate() {
            arrows.push(RoleArrow { id: framing_id(f.a, k), role: Role::Framing, entries: col });
        }
        for (k, row) in f.coframings.into_iter().enumerate() {
            arrows.push(RoleArrow { id: format!("v{}", k + 1), role: Role::Coframing, entries: row });
        }
        RawFramedRep { a: f.a, r: f.r, d: f.d, arrows }
    }
}

impl TryFrom<RawFramedRep> for FramedRep {
    type Error = Error;
    fn try_from(raw: RawFramedRep) -> Result<Self> {
        let mut loops: BTreeMap<String, Matrix> = BTreeMap::new();
        let mut fr = Vec::new();
        let mut co = Vec::new();
        for arr in raw.arrows {
            match arr.role {
                Role::Loop => {
                    loops.insert(arr.id, Matrix::from_data(raw.d, raw.d, arr.entries)?);
                }
                Role::Framing => fr.push(arr.entries),
                Role::Coframing => co.push(arr.entries),
            }
        }
        let mut take = |k: &str| loops.remove(k).ok_or_else(|| Error::Shape(format!("missing loop `{k}`")));
        let l = [take("A")?, take("B")?, take("C")?];
        FramedRep::new(raw.a, raw.r, l, fr, co)
    }
}

fn framing_id(a: usize, k: usize) -> String {
    if k < a {
        format!("u{}", k + 1)
    } else {
        format!("e{}", k - a + 1)
    }
}

impl FramedRep {
    pub fn new(
        a: usize,
        r: usize,
        loops: [Matrix; 3],
        framings: Vec<Vec<Rational>>,
        coframings: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let d = loops[0].rows();
        if loops.iter().any(|m| m.shape() != (d, d)) {
            return Err(Error::Shape("loops must be square of equal size".into()));
        }
        if framings.len() != a + r {
            return Err(Error::Dimension { expected: a + r, got: framings.len() });
        }
        if coframings.len() != a {
            return Err(Error::Dimension { expected: a, got: coframings.len() });
        }
        if let Some(bad) = framings.iter().chain(&coframings).find(|x| x.len() != d) {
            return Err(Error::Dimension { expected: d, got: bad.len() });
        }
        Ok(FramedRep { a, r, d, loops, framings, coframings })
    }

    pub fn zero(a: usize, r: usize, d: usize) -> Self {
        let z = || Matrix::zeros(d, d);
        FramedRep {
            a,
            r,
            d,
            loops: [z(), z(), z()],
            framings: vec![vec![Rational::zero(); d]; a + r],
            coframings: vec![vec![Rational::zero(); d]; a],
        }
    }

    /// Random point with integer entries in `[-bound, bound]`.
    pub fn random<R: Rng>(a: usize, r: usize, d: usize, bound: i64, rng: &mut R) -> Self {
        let mut x = || rational::int(rng.gen_range(-bound..=bound));
        let mut mat = || Matrix::from_data(d, d, (0..d * d).map(|_| x()).collect()).expect("square");
        let loops = [mat(), mat(), mat()];
        let mut x = || rational::int(rng.gen_range(-bound..=bound));
        let framings = (0..a + r).map(|_| (0..d).map(|_| x()).collect()).collect();
        let coframings = (0..a).map(|_| (0..d).map(|_| x()).collect()).collect();
        FramedRep { a, r, d, loops, framings, coframings }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn loops(&self) -> &[Matrix; 3] {
        &self.loops
    }

    pub fn framings(&self) -> &[Vec<Rational>] {
        &self.framings
    }

    pub fn coframings(&self) -> &[Vec<Rational>] {
        &self.coframings
    }

    pub fn loops_mut(&mut self) -> &mut [Matrix; 3] {
        &mut self.loops
    }

    pub fn framings_mut(&mut self) -> &mut [Vec<Rational>] {
        &mut self.framings
    }

    pub fn coframings_mut(&mut self) -> &mut [Vec<Rational>] {
        &mut self.coframings
    }

    /// Appends an extra framing column (raising `r`).
    pub fn with_extra_framing(&self, col: Vec<Rational>) -> Result<FramedRep> {
        let mut fr = self.framings.clone();
        fr.push(col);
        FramedRep::new(self.a, self.r + 1, self.loops.clone(), fr, self.coframings.clone())
    }

    /// Gauge action of `g in GL(d)`: `u -> g u`, `v -> v g^-1`, `A -> g A g^-1`.
    pub fn conjugate(&self, g: &Matrix) -> Result<FramedRep> {
        let inv = g.inverse().ok_or_else(|| Error::InvalidParameter("singular gauge".into()))?;
        if g.shape() != (self.d, self.d) {
            return Err(Error::Shape("gauge size".into()));
        }
        let loops = [0, 1, 2].map(|k| &(g * &self.loops[k]) * &inv);
        let framings = self.framings.iter().map(|u| g.apply(u)).collect();
        let coframings = self.coframings.iter().map(|v| inv.transpose().apply(v)).collect();
        Ok(FramedRep { loops, framings, coframings, ..*self })
    }

    /// The same data on the DT/PT quiver with vertex `1` of dimension `d`.
    pub fn to_representation(&self) -> Result<Representation> {
        let q = build_quiver(QuiverKind::Dtpt { a: self.a, r: self.r })?;
        let dims = q.dim_vector(&[("1", self.d)])?;
        let mut rep = Representation::zero(q, dims)?;
        for (id, m) in ["A", "B", "C"].iter().zip(&self.loops) {
            rep.set_matrix(id, m.clone())?;
        }
        for (k, col) in self.framings.iter().enumerate() {
            rep.set_matrix(&framing_id(self.a, k), Matrix::column(col.clone()))?;
        }
        for (k, row) in self.coframings.iter().enumerate() {
            rep.set_matrix(&format!("v{}", k + 1), Matrix::row(row.clone()))?;
        }
        Ok(rep)
    }

    pub fn from_representation(rep: &Representation, a: usize, r: usize) -> Result<FramedRep> {
        let expected = build_quiver(QuiverKind::Dtpt { a, r })?;
        if rep.quiver() != &expected {
            return Err(Error::Quiver(format!("not the DT/PT quiver with a = {a}, r = {r}")));
        }
        let loops = [rep.matrix("A")?.clone(), rep.matrix("B")?.clone(), rep.matrix("C")?.clone()];
        let framings = (0..a + r).map(|k| Ok(rep.matrix(&framing_id(a, k))?.col_vec(0))).collect::<Result<_>>()?;
        let coframings = (1..=a).map(|k| Ok(rep.matrix(&format!("v{k}"))?.row_vec(0))).collect::<Result<_>>()?;
        FramedRep::new(a, r, loops, framings, coframings)
    }
}

/// Outcome of a semistability test. An unstable verdict carries the
/// destabilizing subspace as row-reduced basis rows: for DT a proper
/// loop-stable subspace containing every framing (possibly zero), for PT a
/// nonzero loop-stable subspace inside every coframing kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub semistable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessVector>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WitnessVector(#[serde(with = "rational::serde_q_vec")] pub Vec<Rational>);

/// Smallest subspace containing the framing image and stable under the loops.
pub fn reachable_subspace(rep: &FramedRep) -> Vec<Vec<Rational>> {
    let mut basis = span_basis(rep.d, &rep.framings);
    loop {
        let mut gens = basis.clone();
        for b in &basis {
            for l in &rep.loops {
                gens.push(l.apply(b));
            }
        }
        let next = span_basis(rep.d, &gens);
        if next.len() == basis.len() {
            return next;
        }
        basis = next;
    }
}

/// Largest loop-stable subspace on which every coframing vanishes.
///
/// Tracked through its annihilator: `S = ker P`, and `S` is stable iff
/// `P A`, `P B`, `P C` vanish on `S`, so `P` grows until its row space stops.
pub fn hidden_subspace(rep: &FramedRep) -> Vec<Vec<Rational>> {
    let d = rep.d;
    let mut ann = span_basis(d, &rep.coframings);
    loop {
        let mut gens = ann.clone();
        for p in &ann {
            for l in &rep.loops {
                gens.push(l.transpose().apply(p));
            }
        }
        let next = span_basis(d, &gens);
        if next.len() == ann.len() {
            ann = next;
            break;
        }
        ann = next;
    }
    if ann.is_empty() {
        return (0..d).map(|i| unit(d, i)).collect();
    }
    let kernel = Matrix::from_rows(ann).expect("uniform rows").kernel();
    span_basis(d, &kernel)
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); d];
    e[i] = rational::int(1);
    e
}

/// DT semistability without a witness.
pub fn dt_semistable(rep: &FramedRep) -> bool {
    match SmallRep::from_rep(rep).and_then(|s| s.dt_semistable()) {
        Some(b) => b,
        None => reachable_subspace(rep).len() == rep.d,
    }
}

/// PT semistability without a witness.
pub fn pt_semistable(rep: &FramedRep) -> bool {
    match SmallRep::from_rep(rep).and_then(|s| s.pt_semistable()) {
        Some(b) => b,
        None => hidden_subspace(rep).is_empty(),
    }
}

pub fn is_dt_semistable(rep: &FramedRep) -> StabilityVerdict {
    if dt_semistable(rep) {
        return StabilityVerdict { semistable: true, witness: None };
    }
    let s = reachable_subspace(rep);
    StabilityVerdict { semistable: false, witness: Some(s.into_iter().map(WitnessVector).collect()) }
}

pub fn is_pt_semistable(rep: &FramedRep) -> StabilityVerdict {
    if pt_semistable(rep) {
        return StabilityVerdict { semistable: true, witness: None };
    }
    let h = hidden_subspace(rep);
    StabilityVerdict { semistable: false, witness: Some(h.into_iter().map(WitnessVector).collect()) }
}

/// Applies `conjugations` random base changes and returns the first one
/// that changes either verdict.
pub fn gauge_invariance_violation(rep: &FramedRep, conjugations: usize, seed: u64) -> Option<Matrix> {
    let d = rep.d;
    let base = (dt_semistable(rep), pt_semistable(rep));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = SmallRep::from_rep(rep);
    let exact = |g: &Matrix| {
        let moved = rep.conjugate(g).expect("invertible draw");
        (reachable_subspace(&moved).len() == d, hidden_subspace(&moved).is_empty())
    };
    for _ in 0..conjugations {
        if d > small::MAX_D {
            let g = random_invertible(d, &mut rng);
            if exact(&g) != base {
                return Some(g);
            }
            continue;
        }
        let g = small::draw_invertible(d, &mut rng);
        let fast = small.as_ref().and_then(|s| {
            let moved = s.conjugate(&g, &small::adjugate(&g, d)?)?;
            Some((moved.dt_semistable()?, moved.pt_semistable()?))
        });
        let after = match fast {
            Some(v) => v,
            None => exact(&small::narrow(&g, d)),
        };
        if after != base {
            return Some(small::narrow(&g, d));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Dt,
    Pt,
}

/// A base change `g` and exponents `k` such that `lambda(t) = diag(t^k)`
/// applied to `g . rep` has a limit at `t -> 0` while `sum k` has the
/// destabilizing sign (negative for DT, positive for PT).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePsWitness {
    pub gauge: Matrix,
    pub exponents: Vec<i64>,
}

/// Whether `lambda(t) = diag(t^k)` has a limit on `rep` as `t -> 0`.
pub fn limit_exists(rep: &FramedRep, k: &[i64]) -> bool {
    let d = rep.d;
    let framing_ok = rep.framings.iter().all(|u| (0..d).all(|i| u[i].is_zero() || k[i] >= 0));
    let coframing_ok = rep.coframings.iter().all(|v| (0..d).all(|i| v[i].is_zero() || k[i] <= 0));
    let loops_ok = rep.loops.iter().all(|m| {
        (0..d).all(|i| (0..d).all(|j| m.get(i, j).is_zero() || k[i] >= k[j]))
    });
    framing_ok && coframing_ok && loops_ok
}

fn destabilizing(side: Side, k: &[i64]) -> bool {
    let s: i64 = k.iter().sum();
    match side {
        Side::Dt => s < 0,
        Side::Pt => s > 0,
    }
}

/// Samples random base changes and coordinate one-parameter subgroups,
/// returning the first Hilbert–Mumford violation found.
pub fn one_ps_falsifier(rep: &FramedRep, side: Side, trials: usize, seed: u64) -> Option<OnePsWitness> {
    let d = rep.d;
    if d == 0 {
        return None;
    }
    if let Some(found) = SmallRep::from_rep(rep).and_then(|s| s.falsify(side, trials, &mut ChaCha8Rng::seed_from_u64(seed))) {
        return found.map(|(g, k)| OnePsWitness { gauge: small::to_rational_matrix(&g, d), exponents: k });
    }
    one_ps_falsifier_exact(rep, side, trials, seed)
}

/// The sampler on rational data only; same draws as [`one_ps_falsifier`].
pub fn one_ps_falsifier_exact(rep: &FramedRep, side: Side, trials: usize, seed: u64) -> Option<OnePsWitness> {
    let d = rep.d;
    if d == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        // The first trial uses the given basis; later ones a random one.
        let g = if trial == 0 { Matrix::identity(d) } else { random_invertible(d, &mut rng) };
        let k: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
        if !destabilizing(side, &k) {
            continue;
        }
        let moved = rep.conjugate(&g).expect("invertible draw");
        if limit_exists(&moved, &k) {
            return Some(OnePsWitness { gauge: g, exponents: k });
        }
    }
    None
}

pub fn random_invertible<R: Rng>(d: usize, rng: &mut R) -> Matrix {
    loop {
        let data = (0..d * d).map(|_| rational::int(rng.gen_range(-2..=2))).collect();
        let g = Matrix::from_data(d, d, data).expect("square");
        if g.rank() == d {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn col(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn reachable_examples() {
        let rep = FramedRep::zero(0, 1, 2);
        assert!(reachable_subspace(&rep).is_empty());

        let mut rep = FramedRep::zero(0, 1, 1);
        rep.framings_mut()[0] = col(&[3]);
        assert_eq!(reachable_subspace(&rep), vec![col(&[1])]);

        let mut rep = FramedRep::zero(0, 1, 2);
        rep.framings_mut()[0] = col(&[1, 0]);
        rep.loops_mut()[0] = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        assert_eq!(reachable_subspace(&rep).len(), 2);
    }

    #[test]
    fn hidden_examples() {
        let rep = FramedRep::zero(0, 1, 2);
        assert_eq!(hidden_subspace(&rep).len(), 2);

        let mut rep = FramedRep::zero(1, 1, 1);
        rep.coframings_mut()[0] = col(&[2]);
        assert!(hidden_subspace(&rep).is_empty());

        let mut rep = FramedRep::zero(1, 1, 2);
        rep.coframings_mut()[0] = col(&[1, 0]);
        assert_eq!(hidden_subspace(&rep), vec![col(&[0, 1])]);
    }

    #[test]
    fn verdict_examples() {
        let empty = FramedRep::zero(1, 2, 0);
        assert!(is_dt_semistable(&empty).semistable);
        assert!(is_pt_semistable(&empty).semistable);

        let rep = FramedRep::random(0, 2, 2, 1, &mut ChaCha8Rng::seed_from_u64(3));
        let v = is_pt_semistable(&rep);
        assert!(!v.semistable);
        assert_eq!(v.witness.unwrap().len(), 2);

        let mut rep = FramedRep::zero(1, 1, 1);
        rep.framings_mut()[0] = col(&[1]);
        rep.coframings_mut()[0] = col(&[-1]);
        assert!(is_dt_semistable(&rep).semistable);
        assert!(is_pt_semistable(&rep).semistable);
    }

    #[test]
    fn falsifier_examples() {
        let rep = FramedRep::zero(1, 1, 1);
        let w = one_ps_falsifier(&rep, Side::Dt, 500, 0).expect("u = 0 is DT-unstable");
        assert!(w.exponents[0] < 0);
        assert!(one_ps_falsifier(&FramedRep::zero(1, 1, 0), Side::Dt, 10, 0).is_none());

        let mut rep = FramedRep::zero(0, 1, 2);
        rep.framings_mut()[0] = col(&[1, 0]);
        rep.loops_mut()[0] = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        assert!(is_dt_semistable(&rep).semistable);
        assert!(one_ps_falsifier(&rep, Side::Dt, 500, 7).is_none());
    }

    #[test]
    fn fast_paths_match_rational() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..300 {
            let d = n % 4;
            let mut rep = FramedRep::random(n % 2, 1 + n % 2, d, 1, &mut rng);
            if n % 3 == 0 && d > 0 {
                rep.loops_mut()[1] = Matrix::zeros(d, d);
                rep.framings_mut()[0] = vec![Rational::zero(); d];
            }
            assert_eq!(dt_semistable(&rep), reachable_subspace(&rep).len() == d);
            assert_eq!(pt_semistable(&rep), hidden_subspace(&rep).is_empty());
            for side in [Side::Dt, Side::Pt] {
                assert_eq!(
                    one_ps_falsifier(&rep, side, 60, n as u64),
                    one_ps_falsifier_exact(&rep, side, 60, n as u64)
                );
            }
            assert!(gauge_invariance_violation(&rep, 10, n as u64).is_none());
        }
    }

    #[test]
    fn json_roundtrip() {
        let rep = FramedRep::random(1, 2, 2, 3, &mut ChaCha8Rng::seed_from_u64(1));
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains(r#""role":"coframing""#));
        assert_eq!(serde_json::from_str::<FramedRep>(&s).unwrap(), rep);
        let back = FramedRep::from_representation(&rep.to_representation().unwrap(), 1, 2).unwrap();
        assert_eq!(back, rep);
    }
}
