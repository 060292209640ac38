//! Fourier–Motzkin elimination as an independent membership oracle.
//!
//! Slower than the simplex path and only meant for small zonotopes, but it
//! shares no code with it: the certificate-free answer here is compared with
//! [`Zonotope::contains`](crate::zonotope::Zonotope::contains) in tests.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::rational::Rational;
use crate::zonotope::Zonotope;

/// `a . x <= b0 + b1 eps` (or `<` when `strict`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Ineq {
    a: Vec<Rational>,
    b0: Rational,
    b1: Rational,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Ineq {
        if let Some(s) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in &mut self.a {
                *x /= &s;
            }
            self.b0 /= &s;
            self.b1 /= &s;
        }
        self
    }

    /// Truth of `0 <= b0 + b1 eps` (or `<`) for all small `eps > 0`.
    fn holds_trivially(&self) -> bool {
        use std::cmp::Ordering::*;
        match (self.b0.cmp(&Rational::zero()), self.b1.cmp(&Rational::zero())) {
            (Greater, _) => true,
            (Equal, Greater) => true,
            (Equal, Equal) => !self.strict,
            _ => false,
        }
    }
}

/// Membership of `p + eps u` (for all small `eps > 0`; `u = None` means a
/// fixed point) by eliminating every coefficient variable.
pub fn fm_contains(z: &Zonotope, p: &[Rational], u: Option<&[Rational]>) -> bool {
    let ng = z.generators.len();
    let n = ng + z.lineality.len();
    let zero = Rational::zero();

    let mut eqs: Vec<(Vec<Rational>, Rational, Rational)> = (0..z.dim())
        .map(|r| {
            let mut a: Vec<Rational> = z.generators.iter().map(|g| g.vector[r].clone()).collect();
            a.extend(z.lineality.iter().map(|l| l.0[r].clone()));
            let b1 = u.map_or(zero.clone(), |u| u[r].clone());
            (a, &p[r] - &z.translate[r], b1)
        })
        .collect();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for (i, g) in z.generators.iter().enumerate() {
        let mut lo = vec![zero.clone(); n];
        lo[i] = -Rational::from_integer(1.into());
        ineqs.push(Ineq { a: lo, b0: -g.lo.clone(), b1: zero.clone(), strict: g.lo_open });
        let mut hi = vec![zero.clone(); n];
        hi[i] = Rational::from_integer(1.into());
        ineqs.push(Ineq { a: hi, b0: g.hi.clone(), b1: zero.clone(), strict: g.hi_open });
    }

    // Solve each equality for one variable and substitute it everywhere.
    while let Some((a, b0, b1)) = eqs.pop() {
        let Some(k) = a.iter().position(|x| !x.is_zero()) else {
            if !b0.is_zero() || !b1.is_zero() {
                return false;
            }
            continue;
        };
        let ak = a[k].clone();
        for (e, f0, f1) in &mut eqs {
            let c = e[k].clone() / &ak;
            if c.is_zero() {
                continue;
            }
            for (x, y) in e.iter_mut().zip(&a) {
                *x -= &c * y;
            }
            *f0 -= &c * &b0;
            *f1 -= &c * &b1;
        }
        for q in &mut ineqs {
            let c = q.a[k].clone() / &ak;
            if c.is_zero() {
                continue;
            }
            for (x, y) in q.a.iter_mut().zip(&a) {
                *x -= &c * y;
            }
            q.b0 -= &c * &b0;
            q.b1 -= &c * &b1;
        }
    }

    for k in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in ineqs {
            if q.a[k].is_positive() {
                pos.push(q);
            } else if q.a[k].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        let mut seen: HashSet<Ineq> = rest.iter().cloned().collect();
        for pq in &pos {
            for nq in &neg {
                let (sp, sn) = (-nq.a[k].clone(), pq.a[k].clone());
                let combo = Ineq {
                    a: pq.a.iter().zip(&nq.a).map(|(x, y)| &sp * x + &sn * y).collect(),
                    b0: &sp * &pq.b0 + &sn * &nq.b0,
                    b1: &sp * &pq.b1 + &sn * &nq.b1,
                    strict: pq.strict || nq.strict,
                }
                .normalized();
                if combo.a.iter().all(Zero::is_zero) {
                    if !combo.holds_trivially() {
                        return false;
                    }
                } else if seen.insert(combo.clone()) {
                    rest.push(combo);
                }
            }
        }
        ineqs = rest;
    }
    ineqs.iter().all(Ineq::holds_trivially)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::zonotope::{make_zonotope, ZonotopeKind};

    #[test]
    fn agrees_on_simple_points() {
        let z = make_zonotope(ZonotopeKind::Wa { d: 1, a: 2 }).unwrap();
        assert!(fm_contains(&z, &[int(1)], None));
        assert!(!fm_contains(&z, &[int(-1)], None));
        assert!(fm_contains(&z, &[int(-1)], Some(&[int(1)])));
        assert!(!fm_contains(&z, &[int(1)], Some(&[int(1)])));
        let s = make_zonotope(ZonotopeKind::WSlice { d: 2, w: 0 }).unwrap();
        assert!(fm_contains(&s, &[frac(3, 2), frac(-3, 2)], None));
        assert!(!fm_contains(&s, &[int(2), int(-2)], None));
        let w = make_zonotope(ZonotopeKind::W { d: 3 }).unwrap();
        assert!(fm_contains(&w, &[int(7), int(7), int(7)], None));
    }
}
