//! ADHM data: the moment map, plane-curve polynomials `f_alpha` evaluated at
//! non-commuting matrices, the division identity and the extended map.
//!
//! Monomials `x^i y^j` are substituted as `A^i B^j` (all `A` factors to the
//! left), and `u: U -> V`, `v: V -> U` are `d x r` and `r x d` blocks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::potential::{commutator_terms, Potential, Term};
use crate::quiver::{build_quiver, QuiverKind};
use crate::rational::{self, Rational};
use crate::representation::Representation;

fn square_pair(a: &Matrix, b: &Matrix) -> Result<usize> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::Shape(format!("A is {:?}, B is {:?}", a.shape(), b.shape())));
    }
    Ok(a.rows())
}

/// `[A, B] + u v`.
pub fn adhm_moment(u: &Matrix, v: &Matrix, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let d = square_pair(a, b)?;
    if u.rows() != d || v.cols() != d || u.cols() != v.rows() {
        return Err(Error::Shape(format!("u is {:?}, v is {:?} for d = {d}", u.shape(), v.shape())));
    }
    a.commutator(b)?.checked_add(&u.checked_mul(v)?)
}

/// Coefficients of `f = 1 + sum alpha_ij x^i y^j` over `1 <= i + j <= m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct CurveParam {
    m: u32,
    alpha: BTreeMap<(u32, u32), Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    m: u32,
    /// `[i, j, "p/q"]` triples; omitted monomials are zero.
    alpha: Vec<(u32, u32, String)>,
}

impl TryFrom<RawCurve> for CurveParam {
    type Error = Error;
    fn try_from(r: RawCurve) -> Result<Self> {
        let entries = r
            .alpha
            .iter()
            .map(|(i, j, s)| Ok(((*i, *j), rational::parse(s)?)))
            .collect::<Result<Vec<_>>>()?;
        CurveParam::from_sparse(r.m, entries)
    }
}

impl From<CurveParam> for RawCurve {
    fn from(c: CurveParam) -> Self {
        RawCurve {
            m: c.m,
            alpha: c
                .alpha
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(&(i, j), v)| (i, j, rational::format(v)))
                .collect(),
        }
    }
}

/// The index set `{(i, j) : 1 <= i + j <= m}`.
pub fn monomial_indices(m: u32) -> Vec<(u32, u32)> {
    (1..=m).flat_map(|s| (0..=s).map(move |i| (i, s - i))).collect()
}

impl CurveParam {
    /// `alpha` must have exactly the keys `1 <= i + j <= m`.
    pub fn new(m: u32, alpha: BTreeMap<(u32, u32), Rational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("curve degree m must be at least 1".into()));
        }
        let want = monomial_indices(m);
        if alpha.len() != want.len() || want.iter().any(|k| !alpha.contains_key(k)) {
            return Err(Error::InvalidParameter(format!("alpha keys must be exactly I_{m}")));
        }
        Ok(CurveParam { m, alpha })
    }

    /// Fills unspecified monomials with zero; rejects keys outside the index set.
    pub fn from_sparse(m: u32, entries: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Result<Self> {
        let mut alpha: BTreeMap<_, _> = monomial_indices(m).into_iter().map(|k| (k, Rational::zero())).collect();
        for (k, v) in entries {
            match alpha.get_mut(&k) {
                Some(slot) => *slot += v,
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "monomial x^{} y^{} is outside degree 1..={m}",
                        k.0, k.1
                    )))
                }
            }
        }
        CurveParam::new(m, alpha)
    }

    pub fn zero(m: u32) -> Result<Self> {
        CurveParam::from_sparse(m, [])
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn alpha(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.alpha
    }

    fn nonzero(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.alpha.iter().filter(|(_, v)| !v.is_zero()).map(|(&(i, j), v)| (i, j, v))
    }
}

/// `Id + sum alpha_ij A^i B^j`.
pub fn eval_f_alpha(cp: &CurveParam, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let d = square_pair(a, b)?;
    let mut acc = Matrix::identity(d);
    for (i, j, c) in cp.nonzero() {
        let mono = a.pow(i)?.checked_mul(&b.pow(j)?)?;
        acc = acc.checked_add(&mono.scale(c))?;
    }
    Ok(acc)
}

/// Polynomial in commuting `x, y` whose coefficients are linear
/// combinations of the ordered words `A^p B^q`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordPolynomial {
    /// `(x exponent, y exponent) -> {(p, q) -> coefficient}`.
    coeffs: BTreeMap<(u32, u32), BTreeMap<(u32, u32), Rational>>,
}

impl WordPolynomial {
    fn add(&mut self, xy: (u32, u32), word: (u32, u32), c: &Rational) {
        let slot = self.coeffs.entry(xy).or_default().entry(word).or_insert_with(Rational::zero);
        *slot += c;
    }

    fn prune(&mut self) {
        for words in self.coeffs.values_mut() {
            words.retain(|_, c| !c.is_zero());
        }
        self.coeffs.retain(|_, w| !w.is_empty());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree in `x, y`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|(s, t)| s + t).max()
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BTreeMap<(u32, u32), Rational>> {
        &self.coeffs
    }

    /// Substitutes concrete matrices, giving one matrix per monomial in `x, y`.
    pub fn evaluate(&self, a: &Matrix, b: &Matrix) -> Result<BTreeMap<(u32, u32), Matrix>> {
        let d = square_pair(a, b)?;
        let mut out = BTreeMap::new();
        for (&xy, words) in &self.coeffs {
            let mut m = Matrix::zeros(d, d);
            for (&(p, q), c) in words {
                m = m.checked_add(&a.pow(p)?.checked_mul(&b.pow(q)?)?.scale(c))?;
            }
            out.insert(xy, m);
        }
        Ok(out)
    }
}

/// `g, h` with `f(A,B) - f(x,y) Id = g (A - x Id) + h (B - y Id)`, built
/// monomial by monomial from
/// `A^i B^j - x^i y^j = y^j (A^i - x^i) + A^i (B^j - y^j)`.
pub fn division_polynomials(cp: &CurveParam) -> (WordPolynomial, WordPolynomial) {
    let mut g = WordPolynomial::default();
    let mut h = WordPolynomial::default();
    for (i, j, c) in cp.nonzero() {
        for s in 0..i {
            g.add((s, j), (i - 1 - s, 0), c);
        }
        for t in 0..j {
            h.add((0, t), (i, j - 1 - t), c);
        }
    }
    g.prune();
    h.prune();
    (g, h)
}

/// Expands both sides of the division identity at concrete `A, B` and
/// compares them coefficient by coefficient in `x, y`.
pub fn verify_division(cp: &CurveParam, a: &Matrix, b: &Matrix) -> Result<bool> {
    let d = square_pair(a, b)?;
    let (g, h) = division_polynomials(cp);
    if [g.degree(), h.degree()].into_iter().flatten().any(|deg| deg >= cp.degree()) {
        return Ok(false);
    }
    let mut lhs: BTreeMap<(u32, u32), Matrix> = BTreeMap::new();
    let add = |map: &mut BTreeMap<(u32, u32), Matrix>, k: (u32, u32), m: Matrix| -> Result<()> {
        let slot = map.entry(k).or_insert_with(|| Matrix::zeros(d, d));
        *slot = slot.checked_add(&m)?;
        Ok(())
    };
    add(&mut lhs, (0, 0), eval_f_alpha(cp, a, b)?.checked_sub(&Matrix::identity(d))?)?;
    for (i, j, c) in cp.nonzero() {
        add(&mut lhs, (i, j), Matrix::identity(d).scale(&-c.clone()))?;
    }
    let mut rhs: BTreeMap<(u32, u32), Matrix> = BTreeMap::new();
    for ((s, t), gm) in g.evaluate(a, b)? {
        add(&mut rhs, (s, t), gm.checked_mul(a)?)?;
        add(&mut rhs, (s + 1, t), -&gm)?;
    }
    for ((s, t), hm) in h.evaluate(a, b)? {
        add(&mut rhs, (s, t), hm.checked_mul(b)?)?;
        add(&mut rhs, (s, t + 1), -&hm)?;
    }
    lhs.retain(|_, m| !m.is_zero());
    rhs.retain(|_, m| !m.is_zero());
    Ok(lhs == rhs)
}

/// `([A,B] + u v, v f_alpha(A,B))`.
pub fn extended_adhm_map(
    u: &Matrix,
    v: &Matrix,
    a: &Matrix,
    b: &Matrix,
    cp: &CurveParam,
) -> Result<(Matrix, Matrix)> {
    let moment = adhm_moment(u, v, a, b)?;
    let second = v.checked_mul(&eval_f_alpha(cp, a, b)?)?;
    Ok((moment, second))
}

/// Matrices of a point of the extended ADHM space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedAdhmPoint {
    pub u1: Matrix,
    pub u2: Matrix,
    pub v: Matrix,
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

impl ExtendedAdhmPoint {
    pub fn zero(r: usize, d: usize) -> Self {
        ExtendedAdhmPoint {
            u1: Matrix::zeros(d, r),
            u2: Matrix::zeros(d, r),
            v: Matrix::zeros(r, d),
            a: Matrix::zeros(d, d),
            b: Matrix::zeros(d, d),
            c: Matrix::zeros(d, d),
        }
    }

    /// The same data as a representation of the extended ADHM quiver.
    pub fn to_representation(&self, m: u32) -> Result<Representation> {
        let r = self.v.rows();
        let q = build_quiver(QuiverKind::ExtendedAdhm { r, m: m as usize })?;
        let dims = q.dim_vector(&[("V", self.a.rows())])?;
        let mut rep = Representation::zero(q, dims)?;
        for (id, mat) in [
            ("u1", &self.u1),
            ("u2", &self.u2),
            ("v", &self.v),
            ("A", &self.a),
            ("B", &self.b),
            ("C", &self.c),
        ] {
            rep.set_matrix(id, mat.clone())?;
        }
        Ok(rep)
    }
}

/// `Tr v f_alpha(A,B) u2 + Tr C([A,B] + u1 v)`.
pub fn trace_w_rmd(p: &ExtendedAdhmPoint, cp: &CurveParam) -> Result<Rational> {
    let first = p.v.checked_mul(&eval_f_alpha(cp, &p.a, &p.b)?)?.checked_mul(&p.u2)?.trace()?;
    let moment = adhm_moment(&p.u1, &p.v, &p.a, &p.b)?;
    let second = p.c.checked_mul(&moment)?.trace()?;
    Ok(first + second)
}

/// `Tr W_{r,m,d}` written as a potential on the extended ADHM quiver.
pub fn rmd_potential(r: usize, cp: &CurveParam) -> Result<Potential> {
    let q = build_quiver(QuiverKind::ExtendedAdhm { r, m: cp.degree() as usize })?;
    let s = |x: &str| x.to_string();
    let mut terms = vec![Term { coeff: Rational::one(), cycle: vec![s("v"), s("u2")] }];
    for (i, j, c) in cp.nonzero() {
        let mut word = vec![s("v")];
        word.extend((0..i).map(|_| s("A")));
        word.extend((0..j).map(|_| s("B")));
        word.push(s("u2"));
        terms.push(Term { coeff: c.clone(), cycle: word });
    }
    terms.extend(commutator_terms());
    terms.push(Term { coeff: Rational::one(), cycle: vec![s("C"), s("u1"), s("v")] });
    Potential::new(&q, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cp(m: u32, e: &[((u32, u32), i64)]) -> CurveParam {
        CurveParam::from_sparse(m, e.iter().map(|&(k, v)| (k, int(v)))).unwrap()
    }

    #[test]
    fn moment_small_cases() {
        let z = Matrix::zeros(2, 2);
        assert!(adhm_moment(&Matrix::zeros(2, 1), &Matrix::zeros(1, 2), &z, &z).unwrap().is_zero());
        let one = |x| Matrix::from_i64(&[&[x]]);
        assert_eq!(adhm_moment(&one(3), &one(5), &one(2), &one(7)).unwrap(), one(15));
        assert!(adhm_moment(&Matrix::zeros(3, 1), &Matrix::zeros(1, 2), &z, &z).is_err());
    }

    #[test]
    fn moment_vanishes_on_relation() {
        let a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let ab = a.commutator(&b).unwrap();
        let u = Matrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert!(adhm_moment(&u, &-&ab, &a, &b).unwrap().is_zero());
    }

    #[test]
    fn curve_param_keys() {
        assert_eq!(monomial_indices(2), vec![(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
        assert!(CurveParam::from_sparse(1, [((1, 1), int(1))]).is_err());
        assert!(CurveParam::new(1, BTreeMap::new()).is_err());
        assert!(CurveParam::zero(0).is_err());
    }

    #[test]
    fn f_alpha_examples() {
        let a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        assert_eq!(eval_f_alpha(&CurveParam::zero(3).unwrap(), &a, &b).unwrap(), Matrix::identity(2));
        let f = eval_f_alpha(&cp(1, &[((1, 0), 5)]), &a, &b).unwrap();
        assert_eq!(f, &Matrix::identity(2) + &a.scale(&int(5)));
        let f = eval_f_alpha(&cp(2, &[((1, 1), 1)]), &a, &b).unwrap();
        assert_eq!(f, &Matrix::identity(2) + &(&a * &b));
        assert_ne!(f, &Matrix::identity(2) + &(&b * &a));
    }

    #[test]
    fn division_examples() {
        let (g, h) = division_polynomials(&cp(1, &[((1, 0), 4)]));
        let want: BTreeMap<_, _> = [((0, 0), [((0, 0), int(4))].into_iter().collect())].into_iter().collect();
        assert_eq!(g.terms(), &want);
        assert!(h.is_zero());

        let (g, h) = division_polynomials(&CurveParam::zero(2).unwrap());
        assert!(g.is_zero() && h.is_zero());

        // f = 1 + xy: g = y Id, h = A.
        let (g, h) = division_polynomials(&cp(2, &[((1, 1), 1)]));
        let g_want: BTreeMap<_, _> = [((0, 1), [((0, 0), int(1))].into_iter().collect())].into_iter().collect();
        let h_want: BTreeMap<_, _> = [((0, 0), [((1, 0), int(1))].into_iter().collect())].into_iter().collect();
        assert_eq!(g.terms(), &g_want);
        assert_eq!(h.terms(), &h_want);
        let a = Matrix::from_i64(&[&[1, 2], &[0, 3]]);
        let b = Matrix::from_i64(&[&[0, 1], &[1, 1]]);
        assert!(verify_division(&cp(2, &[((1, 1), 1)]), &a, &b).unwrap());
    }

    #[test]
    fn extended_map_examples() {
        let p = ExtendedAdhmPoint::zero(1, 2);
        let (m0, m1) = extended_adhm_map(&p.u1, &p.v, &p.a, &p.b, &CurveParam::zero(1).unwrap()).unwrap();
        assert!(m0.is_zero() && m1.is_zero());
        // d = 1: f = 1 - x vanishes at A = 1, so v f(A,B) = 0 while u v = 0 via u = 0.
        let one = |x| Matrix::from_i64(&[&[x]]);
        let c = cp(1, &[((1, 0), -1)]);
        let (m0, m1) = extended_adhm_map(&one(0), &one(4), &one(1), &one(9), &c).unwrap();
        assert!(m0.is_zero() && m1.is_zero());
    }

    #[test]
    fn trace_rmd_examples() {
        let c = cp(2, &[((2, 0), 3), ((0, 1), -1)]);
        assert!(trace_w_rmd(&ExtendedAdhmPoint::zero(2, 3), &c).unwrap().is_zero());

        let mut p = ExtendedAdhmPoint::zero(1, 2);
        p.u1 = Matrix::from_i64(&[&[1], &[2]]);
        p.v = Matrix::from_i64(&[&[3, -1]]);
        p.a = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        p.b = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        p.c = Matrix::from_i64(&[&[1, 0], &[0, 2]]);
        let want = (&p.c * &adhm_moment(&p.u1, &p.v, &p.a, &p.b).unwrap()).trace().unwrap();
        assert_eq!(trace_w_rmd(&p, &CurveParam::zero(1).unwrap()).unwrap(), want);

        // Scalars: v f(A,B) u2 with f = 1 + 2x - y at A = 3, B = 5 gives 2.
        let one = |x| Matrix::from_i64(&[&[x]]);
        let p = ExtendedAdhmPoint { u1: one(7), u2: one(1), v: one(1), a: one(3), b: one(5), c: one(0) };
        let c = cp(1, &[((1, 0), 2), ((0, 1), -1)]);
        assert_eq!(trace_w_rmd(&p, &c).unwrap(), int(2));
    }
}
