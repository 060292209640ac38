//! Index sets of the semiorthogonal decompositions and the unique weight
//! decomposition behind them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::weights::{is_dominant, rho, sigma, to_weight};
use crate::zonotope::{make_zonotope, MembershipCertificate, Zonotope, ZonotopeKind};

/// `base + eps * infinitesimal`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsRational {
    pub base: Rational,
    pub eps: Rational,
}

impl EpsRational {
    pub fn exact(base: Rational) -> Self {
        EpsRational { base, eps: Rational::zero() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsSign {
    None,
    Plus,
    Minus,
}

/// The stability parameter `mu`, possibly shifted by a formal infinitesimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MuParam {
    pub base: Rational,
    pub eps_sign: EpsSign,
}

impl MuParam {
    pub fn exact(base: Rational) -> Self {
        MuParam { base, eps_sign: EpsSign::None }
    }

    pub fn plus_eps(base: Rational) -> Self {
        MuParam { base, eps_sign: EpsSign::Plus }
    }

    pub fn eps_coeff(&self) -> Rational {
        rational::int(match self.eps_sign {
            EpsSign::None => 0,
            EpsSign::Plus => 1,
            EpsSign::Minus => -1,
        })
    }

    pub fn as_eps(&self) -> EpsRational {
        EpsRational { base: self.base.clone(), eps: self.eps_coeff() }
    }
}

impl FromStr for MuParam {
    type Err = Error;

    /// Accepts `p/q`, `p/q+eps` and `p/q-eps`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (num, sign) = if let Some(head) = t.strip_suffix("+eps") {
            (head, EpsSign::Plus)
        } else if let Some(head) = t.strip_suffix("-eps") {
            (head, EpsSign::Minus)
        } else {
            (t.as_str(), EpsSign::None)
        };
        Ok(MuParam { base: rational::parse(num)?, eps_sign: sign })
    }
}

impl fmt::Display for MuParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational::format(&self.base))?;
        match self.eps_sign {
            EpsSign::None => Ok(()),
            EpsSign::Plus => write!(f, "+eps"),
            EpsSign::Minus => write!(f, "-eps"),
        }
    }
}

impl Serialize for MuParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MuParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsMode {
    /// `-r - mu - a/2 <= v_1/d_1 < ... < v_k/d_k <= -mu - a/2`
    Closed,
    /// Same with strict inequalities at both ends.
    Open,
}

impl FromStr for BoundsMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(BoundsMode::Closed),
            "open" => Ok(BoundsMode::Open),
            _ => Err(Error::InvalidParameter(format!("unknown bounds mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Part {
    pub d: u32,
    pub w: i64,
    pub v: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SummandDescriptor {
    pub d_prime: u32,
    pub parts: Vec<Part>,
}

impl SummandDescriptor {
    fn sort_key(&self) -> (std::cmp::Reverse<u32>, Vec<(u32, i64, i64)>) {
        (std::cmp::Reverse(self.d_prime), self.parts.iter().map(|p| (p.d, p.w, p.v)).collect())
    }
}

impl Ord for SummandDescriptor {
    /// Larger `d'` first, then parts lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for SummandDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn offsets(d_parts: &[u32], d_prime: u32) -> Vec<i64> {
    (0..d_parts.len())
        .map(|i| {
            let after: i64 = d_parts[i + 1..].iter().map(|&x| i64::from(x)).sum();
            let before: i64 = d_parts[..i].iter().map(|&x| i64::from(x)).sum();
            i64::from(d_parts[i]) * (i64::from(d_prime) + after - before)
        })
        .collect()
}

/// `v_i = w_i + d_i (d' + sum_{j>i} d_j - sum_{j<i} d_j)`.
pub fn v_from_w(w: &[i64], d_parts: &[u32], d_prime: u32) -> Result<Vec<i64>> {
    if w.len() != d_parts.len() {
        return Err(Error::Dimension { expected: d_parts.len(), got: w.len() });
    }
    Ok(w.iter().zip(offsets(d_parts, d_prime)).map(|(w, o)| w + o).collect())
}

pub fn w_from_v(v: &[i64], d_parts: &[u32], d_prime: u32) -> Result<Vec<i64>> {
    if v.len() != d_parts.len() {
        return Err(Error::Dimension { expected: d_parts.len(), got: v.len() });
    }
    Ok(v.iter().zip(offsets(d_parts, d_prime)).map(|(v, o)| v - o).collect())
}

/// `2 mu l` is never an integer for `1 <= l <= d`; a formal offset always
/// qualifies.
pub fn check_generic(mu: &MuParam, d: u32) -> bool {
    if mu.eps_sign != EpsSign::None {
        return true;
    }
    (1..=d).all(|l| !(&mu.base * rational::int(2 * i64::from(l))).is_integer())
}

/// The slope interval `(-r - mu - a/2, -mu - a/2)`.
pub fn slope_interval(r: u32, a: u32, mu: &MuParam) -> (EpsRational, EpsRational) {
    let half_a = rational::frac(a.into(), 2);
    let m = mu.as_eps();
    let hi = EpsRational { base: -&m.base - &half_a, eps: -m.eps.clone() };
    let lo = EpsRational { base: &hi.base - rational::int(r.into()), eps: hi.eps.clone() };
    (lo, hi)
}

fn slope_ok(s: &Rational, lo: &EpsRational, hi: &EpsRational, mode: BoundsMode) -> bool {
    let s = EpsRational::exact(s.clone());
    match mode {
        BoundsMode::Closed => lo <= &s && &s <= hi,
        BoundsMode::Open => lo < &s && &s < hi,
    }
}

/// Integers `v` with `v / dp` inside the slope interval and above `after`.
fn slope_candidates(
    dp: u32,
    lo: &EpsRational,
    hi: &EpsRational,
    mode: BoundsMode,
    after: Option<&Rational>,
) -> Vec<i64> {
    let dq = rational::int(dp.into());
    let from = rational::floor_to_i64(&(&lo.base * &dq)).expect("small bound") - 1;
    let to = rational::ceil_to_i64(&(&hi.base * &dq)).expect("small bound") + 1;
    (from..=to)
        .filter(|&v| {
            let s = rational::frac(v, dp.into());
            slope_ok(&s, lo, hi, mode) && after.is_none_or(|a| &s > a)
        })
        .collect()
}

/// Ordered compositions of `e` into positive parts.
pub fn compositions(e: u32) -> Vec<Vec<u32>> {
    if e == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=e {
        for mut tail in compositions(e - first) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Every `(d', parts)` whose slopes increase strictly inside the interval.
pub fn enumerate_summands(d: u32, r: u32, a: u32, mu: &MuParam, mode: BoundsMode) -> Result<Vec<SummandDescriptor>> {
    if mode == BoundsMode::Open && !check_generic(mu, d) {
        return Err(Error::NonGeneric(format!("mu = {mu} is not generic for d = {d}")));
    }
    let (lo, hi) = slope_interval(r, a, mu);
    let mut out = Vec::new();
    for d_prime in (0..=d).rev() {
        for comp in compositions(d - d_prime) {
            let mut vs = Vec::new();
            extend_slopes(&comp, &lo, &hi, mode, &mut vs, &mut |v| {
                let w = w_from_v(v, &comp, d_prime).expect("lengths agree");
                let parts = comp
                    .iter()
                    .zip(v)
                    .zip(w)
                    .map(|((&d, &v), w)| Part { d, w, v })
                    .collect();
                out.push(SummandDescriptor { d_prime, parts });
            });
        }
    }
    out.sort();
    Ok(out)
}

fn extend_slopes(
    comp: &[u32],
    lo: &EpsRational,
    hi: &EpsRational,
    mode: BoundsMode,
    vs: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    let i = vs.len();
    if i == comp.len() {
        emit(vs);
        return;
    }
    let prev = (i > 0).then(|| rational::frac(vs[i - 1], comp[i - 1].into()));
    for v in slope_candidates(comp[i], lo, hi, mode, prev.as_ref()) {
        vs.push(v);
        extend_slopes(comp, lo, hi, mode, vs, emit);
        vs.pop();
    }
}

/// Recheck of the emitted invariants, independent of the enumeration.
pub fn descriptor_is_valid(s: &SummandDescriptor, d: u32, r: u32, a: u32, mu: &MuParam, mode: BoundsMode) -> bool {
    let total: u32 = s.d_prime + s.parts.iter().map(|p| p.d).sum::<u32>();
    let ds: Vec<u32> = s.parts.iter().map(|p| p.d).collect();
    let ws: Vec<i64> = s.parts.iter().map(|p| p.w).collect();
    let Ok(vs) = v_from_w(&ws, &ds, s.d_prime) else { return false };
    let (lo, hi) = slope_interval(r, a, mu);
    let slopes: Vec<Rational> = s.parts.iter().map(|p| rational::frac(p.v, p.d.into())).collect();
    total == d
        && s.parts.iter().all(|p| p.d > 0)
        && vs.iter().zip(&s.parts).all(|(v, p)| *v == p.v)
        && slopes.windows(2).all(|w| w[0] < w[1])
        && slopes.iter().all(|x| slope_ok(x, &lo, &hi, mode))
}

/// One solution of the weight decomposition: the summand it belongs to and
/// the restriction of `chi` to each block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub summand: SummandDescriptor,
    pub chi_parts: Vec<Vec<i64>>,
    pub chi_prime: Vec<i64>,
}

/// Bound on `|chi_k|` for admissible weights.
pub fn search_box(d: u32, r: u32, a: u32, mu: &MuParam) -> i64 {
    let b = rational::frac(3 * i64::from(d), 2)
        + rational::int(r.into())
        + rational::frac(a.into(), 2)
        + mu.base.abs()
        + rational::int(d.into());
    rational::ceil_to_i64(&b).expect("small bound")
}

fn shifted(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x + c).collect()
}

fn member(z: &Zonotope, p: &[Rational], moving: Option<&[Rational]>) -> Result<bool> {
    let cert = match moving {
        Some(u) => z.contains_moving(p, u)?,
        None => z.contains(p)?,
    };
    Ok(matches!(cert, MembershipCertificate::Feasible { .. }))
}

/// Tests `chi + rho + mu sigma` for membership in `Va(1, d)`.
pub fn in_outer_window(chi: &[i64], a: u32, r: u32, mu: &MuParam) -> Result<bool> {
    let d = chi.len();
    if d == 0 {
        return Ok(true);
    }
    let z = make_zonotope(ZonotopeKind::Va { d, a, r })?;
    let p: Vec<Rational> = to_weight(chi).iter().zip(rho(d)).map(|(c, r)| c + r + &mu.base).collect();
    let u = shifted(&sigma(d), &Rational::zero()).into_iter().map(|x| x * mu.eps_coeff()).collect::<Vec<_>>();
    member(&z, &p, (mu.eps_sign != EpsSign::None).then_some(u.as_slice()))
}

/// Cheap necessary condition for [`in_outer_window`]: coordinate ranges and
/// the coordinate-sum range of the outer window.
pub fn outer_window_prefilter(chi: &[i64], a: u32, r: u32, mu: &MuParam) -> bool {
    let d = chi.len() as i64;
    let reach = rational::frac(3 * (d - 1), 2) + rational::frac(a.into(), 2) + rational::int(r.into());
    let rh = rho(chi.len());
    let mut sum = Rational::zero();
    for (c, rk) in chi.iter().zip(&rh) {
        let x = rational::int(*c) + rk + &mu.base;
        if x.abs() > &reach + rational::int(1) {
            return false;
        }
        sum += x;
    }
    // Sum of coordinates ranges over [-(a/2 + r) d, (a/2) d]; pad by d for eps.
    let half = rational::frac(a.into(), 2);
    let lo = -(&half + rational::int(r.into())) * rational::int(d) - rational::int(d);
    let hi = &half * rational::int(d) + rational::int(d);
    lo <= sum && sum <= hi
}

/// All decompositions of a dominant `chi` satisfying the window conditions.
pub fn decompose_weight(chi: &[i64], a: u32, r: u32, mu: &MuParam) -> Result<Vec<Decomposition>> {
    let d = chi.len() as u32;
    if !is_dominant(&to_weight(chi)) {
        return Err(Error::Precondition("chi is not dominant".into()));
    }
    if !in_outer_window(chi, a, r, mu)? {
        return Err(Error::Precondition("chi + rho + delta is outside the outer window".into()));
    }
    decompose_unchecked(chi, d, a, r, mu)
}

fn decompose_unchecked(chi: &[i64], d: u32, a: u32, r: u32, mu: &MuParam) -> Result<Vec<Decomposition>> {
    let (lo, hi) = slope_interval(r, a, mu);
    let mut out = Vec::new();
    for d_prime in (0..=d).rev() {
        let e = d - d_prime;
        'comp: for comp in compositions(e) {
            // Blocks in order d_1, .., d_k, then the d' block.
            let mut start = 0usize;
            let mut parts = Vec::new();
            let mut ws = Vec::new();
            for &dp in &comp {
                let block = chi[start..start + dp as usize].to_vec();
                ws.push(block.iter().sum::<i64>());
                parts.push(block);
                start += dp as usize;
            }
            let chi_prime = chi[start..].to_vec();
            let vs = v_from_w(&ws, &comp, d_prime)?;
            let slopes: Vec<Rational> = vs.iter().zip(&comp).map(|(&v, &dp)| rational::frac(v, dp.into())).collect();
            if !slopes.windows(2).all(|w| w[0] < w[1]) || !slopes.iter().all(|s| slope_ok(s, &lo, &hi, BoundsMode::Closed)) {
                continue;
            }
            for (block, &w) in parts.iter().zip(&ws) {
                let n = block.len();
                if n == 1 {
                    continue; // a point equal to its own slice
                }
                let z = make_zonotope(ZonotopeKind::WSlice { d: n, w })?;
                let p: Vec<Rational> = to_weight(block).iter().zip(rho(n)).map(|(c, r)| c + r).collect();
                if !member(&z, &p, None)? {
                    continue 'comp;
                }
            }
            if d_prime > 0 {
                let n = d_prime as usize;
                let z = make_zonotope(ZonotopeKind::Wa { d: n, a })?;
                let shift = &mu.base - rational::int(e.into());
                let p: Vec<Rational> = to_weight(&chi_prime).iter().zip(rho(n)).map(|(c, r)| c + r + &shift).collect();
                let u: Vec<Rational> = vec![mu.eps_coeff(); n];
                let moving = (mu.eps_sign != EpsSign::None).then_some(u.as_slice());
                if !member(&z, &p, moving)? {
                    continue;
                }
            }
            let summand = SummandDescriptor {
                d_prime,
                parts: comp.iter().zip(&ws).zip(&vs).map(|((&d, &w), &v)| Part { d, w, v }).collect(),
            };
            out.push(Decomposition { summand, chi_parts: parts, chi_prime });
        }
    }
    Ok(out)
}

/// Result of checking uniqueness over every admissible dominant weight.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub admissible: usize,
    pub violations: Vec<(Vec<i64>, usize)>,
}

pub fn sweep_unique_decomposition(d: u32, a: u32, r: u32, mu: &MuParam) -> Result<SweepReport> {
    let b = search_box(d, r, a, mu);
    let mut report = SweepReport::default();
    for chi in crate::weights::enumerate_dominant(d as usize, -b, b) {
        if !outer_window_prefilter(&chi, a, r, mu) || !in_outer_window(&chi, a, r, mu)? {
            continue;
        }
        assert!(chi.iter().all(|c| c.abs() < b), "admissible weight on the search box boundary");
        report.admissible += 1;
        let n = decompose_unchecked(&chi, d, a, r, mu)?.len();
        if n != 1 {
            report.violations.push((chi, n));
        }
    }
    Ok(report)
}
