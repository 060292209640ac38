//! Weights of the maximal torus `T(d)` in the basis `beta_1..beta_d`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type WeightVec = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialWeights {
    /// Half the sum of the roots `beta_i - beta_j` with `j < i`.
    pub rho: WeightVec,
    pub sigma: WeightVec,
    pub tau: WeightVec,
    pub beta: Vec<WeightVec>,
}

pub fn special_weights(d: usize) -> Result<SpecialWeights> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    Ok(SpecialWeights { rho: rho(d), sigma: sigma(d), tau: tau(d), beta: (0..d).map(|k| beta(d, k)).collect() })
}

/// Coordinate `i` (1-based) is `(2i - d - 1) / 2`.
pub fn rho(d: usize) -> WeightVec {
    (1..=d).map(|i| rational::frac(2 * i as i64 - d as i64 - 1, 2)).collect()
}

pub fn sigma(d: usize) -> WeightVec {
    vec![rational::int(1); d]
}

pub fn tau(d: usize) -> WeightVec {
    vec![rational::frac(1, d as i64); d]
}

/// The basis vector `beta_{k+1}`.
pub fn beta(d: usize, k: usize) -> WeightVec {
    let mut v = vec![Rational::zero(); d];
    v[k] = rational::int(1);
    v
}

/// Dominant means weakly increasing coordinates: `chi_i >= chi_j` whenever
/// `i > j`, i.e. nonnegative pairing with every root `beta_i - beta_j`
/// occurring in `rho`.
pub fn is_dominant(chi: &[Rational]) -> bool {
    chi.windows(2).all(|w| w[0] <= w[1])
}

/// All integral dominant weights of `T(d)` with coordinates in `[lo, hi]`,
/// in lexicographic order.
pub fn enumerate_dominant(d: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut next = if lo <= hi { Some(vec![lo; d]) } else { None };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        // Successor: bump the rightmost coordinate below `hi`, keep the tail
        // weakly increasing by resetting it to the new value.
        let mut succ = cur.clone();
        if let Some(k) = (0..d).rev().find(|&k| succ[k] < hi) {
            let v = succ[k] + 1;
            for x in &mut succ[k..] {
                *x = v;
            }
            next = Some(succ);
        }
        Some(cur)
    })
}

pub fn to_weight(chi: &[i64]) -> WeightVec {
    chi.iter().map(|&x| rational::int(x)).collect()
}
