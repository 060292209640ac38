//! Translated zonotopes with a lineality space and half-open segments, and
//! exact membership with certificates.
//!
//! Membership is decided by linear programming over the segment coefficients.
//! Open endpoints are handled by maximizing a common slack `t`: the strict
//! system is feasible iff the optimum is positive. Points moving along a
//! direction, `p + eps u` for all small `eps > 0`, are decided by two problems:
//! a strict one with `eps` as a positive variable, and a closed one where the
//! smallest admissible `eps` must be zero. Interpolating the two solutions
//! gives a certificate that is affine in `eps`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LpOutcome, StandardLp};
use crate::rational::{self, Rational};
use crate::weights::{beta, tau, WeightVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    #[serde(with = "rational::serde_q_vec")]
    pub vector: Vec<Rational>,
    #[serde(with = "rational::serde_q")]
    pub lo: Rational,
    #[serde(with = "rational::serde_q")]
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Generator {
    pub fn closed(vector: Vec<Rational>, lo: Rational, hi: Rational) -> Self {
        Generator { vector, lo, hi, lo_open: false, hi_open: false }
    }

    pub fn admits(&self, c: &Rational) -> bool {
        let above = if self.lo_open { c > &self.lo } else { c >= &self.lo };
        let below = if self.hi_open { c < &self.hi } else { c <= &self.hi };
        above && below
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zonotope {
    #[serde(with = "rational::serde_q_vec")]
    pub translate: Vec<Rational>,
    pub generators: Vec<Generator>,
    pub lineality: Vec<LinealityDir>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinealityDir(#[serde(with = "rational::serde_q_vec")] pub Vec<Rational>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ZonotopeKind {
    W { d: usize },
    WSlice { d: usize, w: i64 },
    V { d: usize, r: u32 },
    Wa { d: usize, a: u32 },
    Va { d: usize, a: u32, r: u32 },
}

impl ZonotopeKind {
    pub fn dim(&self) -> usize {
        match *self {
            ZonotopeKind::W { d }
            | ZonotopeKind::WSlice { d, .. }
            | ZonotopeKind::V { d, .. }
            | ZonotopeKind::Wa { d, .. }
            | ZonotopeKind::Va { d, .. } => d,
        }
    }
}

/// Builds the window polytopes. Segment families whose scale is zero
/// (`a = 0` or `r = 0`) are omitted: a zero multiple of a segment is the
/// origin, including for the half-open family of `Wa`.
pub fn make_zonotope(kind: ZonotopeKind) -> Result<Zonotope> {
    let d = kind.dim();
    if d == 0 {
        return Err(Error::InvalidParameter("zonotopes need d >= 1".into()));
    }
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let v: Vec<Rational> = (0..d)
                    .map(|k| rational::int(i64::from(k == i) - i64::from(k == j)))
                    .collect();
                gens.push(Generator::closed(v, Rational::zero(), rational::frac(3, 2)));
            }
        }
    }
    let neg_beta = |k: usize| beta(d, k).into_iter().map(|x| -x).collect::<Vec<_>>();
    let add_r = |gens: &mut Vec<Generator>, r: u32| {
        if r > 0 {
            for k in 0..d {
                gens.push(Generator::closed(neg_beta(k), Rational::zero(), rational::int(r.into())));
            }
        }
    };
    let half_a = |a: u32| rational::frac(a.into(), 2);
    let mut lineality = Vec::new();
    let mut translate = vec![Rational::zero(); d];
    match kind {
        ZonotopeKind::W { .. } => lineality.push(LinealityDir(tau(d))),
        ZonotopeKind::WSlice { w, .. } => {
            translate = tau(d).into_iter().map(|x| x * rational::int(w)).collect();
        }
        ZonotopeKind::V { r, .. } => add_r(&mut gens, r),
        ZonotopeKind::Wa { a, .. } => {
            if a > 0 {
                for k in 0..d {
                    gens.push(Generator {
                        vector: beta(d, k),
                        lo: -half_a(a),
                        hi: half_a(a),
                        lo_open: true,
                        hi_open: false,
                    });
                }
            }
        }
        ZonotopeKind::Va { a, r, .. } => {
            if a > 0 {
                for k in 0..d {
                    gens.push(Generator::closed(beta(d, k), -half_a(a), half_a(a)));
                }
            }
            add_r(&mut gens, r);
        }
    }
    Ok(Zonotope { translate, generators: gens, lineality })
}

/// Outcome of a membership query. For a moving point `p + eps u` the
/// coefficients are `coefficients + eps * eps_coefficients`, valid for
/// `0 < eps <= eps_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum MembershipCertificate {
    Feasible {
        #[serde(with = "rational::serde_q_vec")]
        coefficients: Vec<Rational>,
        #[serde(with = "rational::serde_q_vec")]
        lineality: Vec<Rational>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        moving: Option<MovingPart>,
    },
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingPart {
    #[serde(with = "rational::serde_q_vec")]
    pub eps_coefficients: Vec<Rational>,
    #[serde(with = "rational::serde_q_vec")]
    pub eps_lineality: Vec<Rational>,
    #[serde(with = "rational::serde_q")]
    pub eps_max: Rational,
}

impl MembershipCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, MembershipCertificate::Feasible { .. })
    }
}

struct Layout {
    lp: StandardLp,
    ys: Vec<usize>,
    lin: Vec<(usize, usize)>,
    e: Option<usize>,
}

impl Zonotope {
    pub fn dim(&self) -> usize {
        self.translate.len()
    }

    /// The point `translate + sum c_i g_i + sum t_j l_j`.
    pub fn evaluate(&self, coeffs: &[Rational], lin: &[Rational]) -> WeightVec {
        let mut p = self.translate.clone();
        for (g, c) in self.generators.iter().zip(coeffs) {
            for (x, v) in p.iter_mut().zip(&g.vector) {
                *x += c * v;
            }
        }
        for (l, t) in self.lineality.iter().zip(lin) {
            for (x, v) in p.iter_mut().zip(&l.0) {
                *x += t * v;
            }
        }
        p
    }

    pub fn contains(&self, p: &[Rational]) -> Result<MembershipCertificate> {
        self.check_dim(p)?;
        self.solve(p, None)
    }

    /// Whether `p + eps u` lies in the zonotope for every small enough `eps > 0`.
    pub fn contains_moving(&self, p: &[Rational], u: &[Rational]) -> Result<MembershipCertificate> {
        self.check_dim(p)?;
        self.check_dim(u)?;
        if u.iter().all(Zero::is_zero) {
            return self.solve(p, None);
        }
        self.solve(p, Some(u))
    }

    /// Re-evaluates a certificate against the query, including open flags.
    pub fn verify(&self, p: &[Rational], u: Option<&[Rational]>, cert: &MembershipCertificate) -> bool {
        let MembershipCertificate::Feasible { coefficients, lineality, moving } = cert else {
            return false;
        };
        if coefficients.len() != self.generators.len() || lineality.len() != self.lineality.len() {
            return false;
        }
        let u = u.filter(|u| !u.iter().all(Zero::is_zero));
        match (u, moving) {
            (None, None) => {
                self.evaluate(coefficients, lineality) == p
                    && self.generators.iter().zip(coefficients).all(|(g, c)| g.admits(c))
            }
            (Some(u), Some(m)) => {
                let slope = self.evaluate(&m.eps_coefficients, &m.eps_lineality);
                let slope: Vec<Rational> = slope.iter().zip(&self.translate).map(|(s, t)| s - t).collect();
                if self.evaluate(coefficients, lineality) != p || slope != u || !m.eps_max.is_positive() {
                    return false;
                }
                self.generators.iter().enumerate().all(|(i, g)| {
                    let c0 = &coefficients[i];
                    let c1 = c0 + &m.eps_max * &m.eps_coefficients[i];
                    // Affine in eps: closed at 0 and admitted at eps_max covers
                    // the whole half-open range.
                    g.admits(&c1) && c0 >= &g.lo && c0 <= &g.hi
                })
            }
            _ => false,
        }
    }

    fn check_dim(&self, p: &[Rational]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: p.len() });
        }
        Ok(())
    }

    fn layout(&self, p: &[Rational], u: Option<&[Rational]>) -> Layout {
        let d = self.dim();
        let mut lp = StandardLp::new(0);
        let ys: Vec<usize> = self.generators.iter().map(|_| lp.add_var()).collect();
        let lin: Vec<(usize, usize)> = self.lineality.iter().map(|_| (lp.add_var(), lp.add_var())).collect();
        let e = u.map(|_| lp.add_var());
        for row in 0..d {
            let mut coeffs = Vec::new();
            let mut rhs = &p[row] - &self.translate[row];
            for (g, &y) in self.generators.iter().zip(&ys) {
                if !g.vector[row].is_zero() {
                    coeffs.push((y, g.vector[row].clone()));
                    rhs -= &g.lo * &g.vector[row];
                }
            }
            for (l, &(tp, tn)) in self.lineality.iter().zip(&lin) {
                if !l.0[row].is_zero() {
                    coeffs.push((tp, l.0[row].clone()));
                    coeffs.push((tn, -l.0[row].clone()));
                }
            }
            if let (Some(u), Some(e)) = (u, e) {
                if !u[row].is_zero() {
                    coeffs.push((e, -u[row].clone()));
                }
            }
            lp.add_eq(&coeffs, rhs);
        }
        for (g, &y) in self.generators.iter().zip(&ys) {
            lp.add_le(&[(y, Rational::one())], &g.hi - &g.lo);
        }
        Layout { lp, ys, lin, e }
    }

    fn solve(&self, p: &[Rational], u: Option<&[Rational]>) -> Result<MembershipCertificate> {
        if self.generators.iter().any(|g| g.lo > g.hi) {
            return Err(Error::InvalidParameter("segment with lo > hi".into()));
        }
        let needs_strict = u.is_some() || self.generators.iter().any(|g| g.lo_open || g.hi_open);
        let base = self.layout(p, u);

        let strict_point = if needs_strict {
            let mut l = self.layout(p, u);
            let t = l.lp.add_var();
            l.lp.add_le(&[(t, Rational::one())], Rational::one());
            for (g, &y) in self.generators.iter().zip(&l.ys) {
                if g.lo_open {
                    l.lp.add_ge(&[(y, Rational::one()), (t, -Rational::one())], Rational::zero());
                }
                if g.hi_open {
                    l.lp.add_le(&[(y, Rational::one()), (t, Rational::one())], &g.hi - &g.lo);
                }
            }
            if let Some(e) = l.e {
                l.lp.add_ge(&[(e, Rational::one()), (t, -Rational::one())], Rational::zero());
            }
            match l.lp.maximize(&[(t, Rational::one())]) {
                LpOutcome::Optimal { x, value } if value.is_positive() => Some(x),
                _ => return Ok(MembershipCertificate::Infeasible),
            }
        } else {
            None
        };

        let Some(_) = u else {
            let x = match strict_point {
                Some(x) => x,
                None => {
                    // Smallest total mass gives a canonical certificate.
                    let mut cost: Vec<(usize, Rational)> = base.ys.iter().map(|&y| (y, Rational::one())).collect();
                    for &(tp, tn) in &base.lin {
                        cost.push((tp, Rational::one()));
                        cost.push((tn, Rational::one()));
                    }
                    match base.lp.minimize(&cost) {
                        LpOutcome::Optimal { x, .. } => x,
                        _ => return Ok(MembershipCertificate::Infeasible),
                    }
                }
            };
            let (c, t) = self.read(&base, &x);
            return Ok(MembershipCertificate::Feasible { coefficients: c, lineality: t, moving: None });
        };

        let e = base.e.expect("moving layout has eps");
        let x0 = match base.lp.minimize(&[(e, Rational::one())]) {
            LpOutcome::Optimal { x, value } if value.is_zero() => x,
            _ => return Ok(MembershipCertificate::Infeasible),
        };
        let x1 = strict_point.expect("moving queries are strict");
        let (c0, t0) = self.read(&base, &x0);
        let (c1, t1) = self.read(&base, &x1);
        let e1 = x1[e].clone();
        let slope = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            a.iter().zip(b).map(|(x1, x0)| (x1 - x0) / &e1).collect()
        };
        Ok(MembershipCertificate::Feasible {
            moving: Some(MovingPart { eps_coefficients: slope(&c1, &c0), eps_lineality: slope(&t1, &t0), eps_max: e1.clone() }),
            coefficients: c0,
            lineality: t0,
        })
    }

    fn read(&self, l: &Layout, x: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let c = self.generators.iter().zip(&l.ys).map(|(g, &y)| &g.lo + &x[y]).collect();
        let t = l.lin.iter().map(|&(tp, tn)| &x[tp] - &x[tn]).collect();
        (c, t)
    }
}
