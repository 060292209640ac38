//! Integer fast path for small framed representations.
//!
//! Subspaces and zero patterns are unchanged when a matrix, column or row is
//! scaled by a positive integer, and `g^-1` may be replaced by the adjugate
//! (a nonzero multiple). So everything the stability tests look at can be
//! computed on cleared-denominator integer data. Every routine returns `None`
//! on overflow so callers can fall back to the rational path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{destabilizing, FramedRep, Side};
use crate::rational::Rational;

/// Entries are kept below this bound so that products of a few of them fit
/// comfortably in `i64`.
const LIMIT: i64 = 1 << 24;

/// Largest `d` handled here.
pub(crate) const MAX_D: usize = 4;

type Sq = [i64; MAX_D * MAX_D];
type Vect = [i64; MAX_D];

#[derive(Debug, Clone)]
pub(crate) struct SmallRep {
    d: usize,
    /// Row-major with stride `d`.
    loops: [Sq; 3],
    framings: Vec<Vect>,
    coframings: Vec<Vect>,
}

fn clear(xs: &[Rational]) -> Option<Vect> {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    let mut out = [0i64; MAX_D];
    for (o, x) in out.iter_mut().zip(xs) {
        let v = (x.numer() * (&l / x.denom())).to_i64()?;
        if v.abs() >= LIMIT {
            return None;
        }
        *o = v;
    }
    Some(out)
}

fn clear_sq(xs: &[Rational]) -> Option<Sq> {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    let mut out = [0i64; MAX_D * MAX_D];
    for (o, x) in out.iter_mut().zip(xs) {
        let v = (x.numer() * (&l / x.denom())).to_i64()?;
        if v.abs() >= LIMIT {
            return None;
        }
        *o = v;
    }
    Some(out)
}

fn primitive(v: &mut [i64]) {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn small_enough(v: &[i64]) -> bool {
    v.iter().all(|x| x.abs() < LIMIT)
}

fn apply(d: usize, m: &Sq, v: &Vect) -> Option<Vect> {
    let mut out = [0i64; MAX_D];
    for i in 0..d {
        let mut s = 0i64;
        for j in 0..d {
            s = s.checked_add(m[i * d + j].checked_mul(v[j])?)?;
        }
        out[i] = s;
    }
    Some(out)
}

fn apply_transpose(d: usize, m: &Sq, v: &Vect) -> Option<Vect> {
    let mut out = [0i64; MAX_D];
    for j in 0..d {
        let mut s = 0i64;
        for i in 0..d {
            s = s.checked_add(m[i * d + j].checked_mul(v[i])?)?;
        }
        out[j] = s;
    }
    Some(out)
}

fn mul(d: usize, a: &Sq, b: &Sq) -> Option<Sq> {
    let mut out = [0i64; MAX_D * MAX_D];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0i64;
            for k in 0..d {
                s = s.checked_add(a[i * d + k].checked_mul(b[k * d + j])?)?;
            }
            out[i * d + j] = s;
        }
    }
    Some(out)
}

/// Row echelon form kept primitive, for rank-only span computations.
struct Echelon {
    d: usize,
    rows: [(usize, Vect); MAX_D],
    len: usize,
}

impl Echelon {
    fn new(d: usize) -> Self {
        Echelon { d, rows: [(0, [0; MAX_D]); MAX_D], len: 0 }
    }

    /// Inserts `v`; returns whether it enlarged the span, or `None` on overflow.
    fn insert(&mut self, mut v: Vect) -> Option<bool> {
        let d = self.d;
        for (p, row) in &self.rows[..self.len] {
            if v[*p] != 0 {
                let (a, b) = (row[*p], v[*p]);
                for (x, y) in v[..d].iter_mut().zip(&row[..d]) {
                    *x = a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)?;
                }
                primitive(&mut v[..d]);
                if !small_enough(&v) {
                    return None;
                }
            }
        }
        let Some(p) = v[..d].iter().position(|x| *x != 0) else { return Some(false) };
        primitive(&mut v[..d]);
        self.rows[self.len] = (p, v);
        self.len += 1;
        Some(true)
    }
}

impl SmallRep {
    pub(crate) fn from_rep(rep: &FramedRep) -> Option<SmallRep> {
        if rep.d > MAX_D {
            return None;
        }
        let loops = [clear_sq(rep.loops[0].data())?, clear_sq(rep.loops[1].data())?, clear_sq(rep.loops[2].data())?];
        let framings = rep.framings.iter().map(|u| clear(u)).collect::<Option<_>>()?;
        let coframings = rep.coframings.iter().map(|v| clear(v)).collect::<Option<_>>()?;
        Some(SmallRep { d: rep.d, loops, framings, coframings })
    }

    fn closure_rank(&self, seeds: &[Vect], transpose: bool) -> Option<usize> {
        let d = self.d;
        let mut span = Echelon::new(d);
        // At most `d` insertions succeed, each pushing three images.
        let mut stack = [[0i64; MAX_D]; 3 * MAX_D];
        let mut top = 0;
        let mut seeds = seeds.iter();
        loop {
            let v = if top > 0 {
                top -= 1;
                stack[top]
            } else {
                match seeds.next() {
                    Some(v) => *v,
                    None => break,
                }
            };
            if span.insert(v)? {
                if span.len == d {
                    break;
                }
                for l in &self.loops {
                    let w = if transpose { apply_transpose(d, l, &v)? } else { apply(d, l, &v)? };
                    if !small_enough(&w) {
                        return None;
                    }
                    stack[top] = w;
                    top += 1;
                }
            }
        }
        Some(span.len)
    }

    /// Dimension of the smallest loop-stable subspace containing the framings.
    pub(crate) fn reachable_rank(&self) -> Option<usize> {
        self.closure_rank(&self.framings, false)
    }

    /// Codimension of the largest loop-stable subspace inside every
    /// coframing kernel.
    pub(crate) fn annihilator_rank(&self) -> Option<usize> {
        self.closure_rank(&self.coframings, true)
    }

    pub(crate) fn dt_semistable(&self) -> Option<bool> {
        Some(self.reachable_rank()? == self.d)
    }

    pub(crate) fn pt_semistable(&self) -> Option<bool> {
        Some(self.annihilator_rank()? == self.d)
    }

    /// `g . rep` up to positive rescaling, with `adj` the adjugate of `g`
    /// multiplied by the sign of `det g`.
    pub(crate) fn conjugate(&self, g: &Sq, adj: &Sq) -> Option<SmallRep> {
        let d = self.d;
        let mut loops = self.loops;
        for l in loops.iter_mut() {
            *l = mul(d, &mul(d, g, l)?, adj)?;
            if !small_enough(l) {
                return None;
            }
        }
        let mut framings = Vec::with_capacity(self.framings.len());
        for u in &self.framings {
            let w = apply(d, g, u)?;
            if !small_enough(&w) {
                return None;
            }
            framings.push(w);
        }
        let mut coframings = Vec::with_capacity(self.coframings.len());
        for v in &self.coframings {
            let w = apply_transpose(d, adj, v)?;
            if !small_enough(&w) {
                return None;
            }
            coframings.push(w);
        }
        Some(SmallRep { d, loops, framings, coframings })
    }

    /// Zero-pattern test for `lambda = diag(t^k)` on `g . rep`.
    fn limit_exists_after(&self, g: &Sq, adj: &Sq, k: &[i64]) -> Option<bool> {
        let d = self.d;
        for u in &self.framings {
            let gu = apply(d, g, u)?;
            if (0..d).any(|i| gu[i] != 0 && k[i] < 0) {
                return Some(false);
            }
        }
        for v in &self.coframings {
            let va = apply_transpose(d, adj, v)?;
            if (0..d).any(|i| va[i] != 0 && k[i] > 0) {
                return Some(false);
            }
        }
        for i in 0..d {
            for j in 0..d {
                if k[i] >= k[j] {
                    continue;
                }
                // (g L adj)_{ij} for each loop L.
                for l in &self.loops {
                    let mut s = 0i64;
                    for q in 0..d {
                        let mut gl = 0i64;
                        for p in 0..d {
                            gl = gl.checked_add(g[i * d + p].checked_mul(l[p * d + q])?)?;
                        }
                        s = s.checked_add(gl.checked_mul(adj[q * d + j])?)?;
                    }
                    if s != 0 {
                        return Some(false);
                    }
                }
            }
        }
        Some(true)
    }

    /// Mirrors [`super::one_ps_falsifier_exact`] draw for draw.
    pub(crate) fn falsify(&self, side: Side, trials: usize, rng: &mut ChaCha8Rng) -> Option<Option<(Vec<i64>, Vec<i64>)>> {
        let d = self.d;
        let mut id = [0i64; MAX_D * MAX_D];
        for i in 0..d {
            id[i * d + i] = 1;
        }
        let mut k = [0i64; MAX_D];
        for trial in 0..trials {
            let g = if trial == 0 { id } else { draw_invertible(d, rng) };
            for x in &mut k[..d] {
                *x = rng.gen_range(-2..=2);
            }
            if !destabilizing(side, &k[..d]) {
                continue;
            }
            let adj = adjugate(&g, d)?;
            if self.limit_exists_after(&g, &adj, &k[..d])? {
                return Some(Some((g[..d * d].to_vec(), k[..d].to_vec())));
            }
        }
        Some(None)
    }
}

/// Random integer matrix with entries in `[-2, 2]` and nonzero determinant,
/// consuming the same draws as [`super::random_invertible`].
pub(crate) fn draw_invertible(d: usize, rng: &mut ChaCha8Rng) -> Sq {
    loop {
        let mut g = [0i64; MAX_D * MAX_D];
        for x in &mut g[..d * d] {
            *x = rng.gen_range(-2i64..=2);
        }
        if det(&g, d).is_some_and(|x| x != 0) {
            return g;
        }
    }
}

pub(crate) fn det(m: &[i64], d: usize) -> Option<i64> {
    match d {
        0 => return Some(1),
        1 => return Some(m[0]),
        2 => return m[0].checked_mul(m[3])?.checked_sub(m[1].checked_mul(m[2])?),
        _ => {}
    }
    // Bareiss elimination.
    let mut a = [0i64; MAX_D * MAX_D];
    a[..d * d].copy_from_slice(&m[..d * d]);
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..d {
        if a[k * d + k] == 0 {
            let Some(s) = (k + 1..d).find(|&s| a[s * d + k] != 0) else { return Some(0) };
            for j in 0..d {
                a.swap(k * d + j, s * d + j);
            }
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let v = a[i * d + j]
                    .checked_mul(a[k * d + k])?
                    .checked_sub(a[i * d + k].checked_mul(a[k * d + j])?)?;
                a[i * d + j] = v / prev;
            }
        }
        prev = a[k * d + k];
    }
    Some(sign * a[(d - 1) * d + (d - 1)])
}

/// `sign(det g) * adj(g)`, a positive multiple of `g^-1`.
pub(crate) fn adjugate(g: &Sq, d: usize) -> Option<Sq> {
    let dg = det(g, d)?;
    let mut adj = [0i64; MAX_D * MAX_D];
    match d {
        1 => adj[0] = 1,
        2 => {
            adj[0] = g[3];
            adj[1] = -g[1];
            adj[2] = -g[2];
            adj[3] = g[0];
        }
        _ => {
            for i in 0..d {
                for j in 0..d {
                    let mut minor = [0i64; MAX_D * MAX_D];
                    let mut n = 0;
                    for r in (0..d).filter(|&r| r != j) {
                        for c in (0..d).filter(|&c| c != i) {
                            minor[n] = g[r * d + c];
                            n += 1;
                        }
                    }
                    let c = det(&minor, d - 1)?;
                    adj[i * d + j] = if (i + j) % 2 == 0 { c } else { -c };
                }
            }
        }
    }
    if dg < 0 {
        for x in adj.iter_mut() {
            *x = -*x;
        }
    }
    Some(adj)
}

pub(crate) fn to_rational_matrix(g: &[i64], d: usize) -> crate::matrix::Matrix {
    crate::matrix::Matrix::from_data(d, d, g.iter().map(|&x| crate::rational::int(x)).collect()).expect("square")
}

pub(crate) fn narrow(g: &Sq, d: usize) -> crate::matrix::Matrix {
    crate::matrix::Matrix::from_data(d, d, g[..d * d].iter().map(|&x| crate::rational::Rational::from_integer(x.into())).collect())
        .expect("square")
}

#[cfg(test)]
pub(crate) fn widen(g: &[i64], d: usize) -> Sq {
    let mut out = [0i64; MAX_D * MAX_D];
    for (o, x) in out.iter_mut().zip(&g[..d * d]) {
        *o = (*x).into();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_adjugate() {
        let g = widen(&[2, 1, 1, 1], 2);
        assert_eq!(det(&g, 2), Some(1));
        assert_eq!(adjugate(&g, 2).unwrap()[..4], [1, -1, -1, 2]);
        let h = widen(&[0, 1, 1, 0], 2);
        assert_eq!(det(&h, 2), Some(-1));
        assert_eq!(adjugate(&h, 2).unwrap()[..4], [0, 1, 1, 0]);
        let m = widen(&[1, 2, 3, 0, 1, 4, 5, 6, 0], 3);
        assert_eq!(det(&m, 3), Some(1));
        let a = adjugate(&m, 3).unwrap();
        assert_eq!(mul(3, &m, &a).unwrap()[..9], [1, 0, 0, 0, 1, 0, 0, 0, 1]);
    }
}
