//! Truncated integer power series in `q` and the MacMahon identity
//! `sum a_d q^d = prod_gamma prod_k (1 - q^{b k})^{-1} = M(q)^r`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational;
use crate::sod::{enumerate_summands, BoundsMode, MuParam};

/// Coefficients of `q^0 .. q^D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntSeries {
    #[serde(with = "bigint_strings")]
    pub coeffs: Vec<BigInt>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
    }
}

impl IntSeries {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        IntSeries { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntSeries { coeffs: c.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn truncate(&self, order: usize) -> IntSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigInt::zero());
        IntSeries { coeffs }
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let n = self.order().min(other.order());
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        IntSeries { coeffs }
    }

    /// Multiplies in place by `(1 - q^n)^{-1}`.
    fn divide_by_one_minus(&mut self, n: usize) {
        for k in n..self.coeffs.len() {
            let prev = self.coeffs[k - n].clone();
            self.coeffs[k] += prev;
        }
    }

    pub fn first_difference(&self, other: &IntSeries) -> Option<usize> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        (0..n).find(|&i| self.coeffs.get(i).unwrap_or(&zero) != other.coeffs.get(i).unwrap_or(&zero))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

/// Number of partitions of `n`.
pub fn p2(n: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!("p2 of negative {n}")));
    }
    Ok(partition_counts(n as usize).swap_remove(n as usize))
}

/// `p2(0..=n)` by the part-by-part recurrence.
pub fn partition_counts(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for part in 1..=n {
        for k in part..=n {
            let prev = p[k - part].clone();
            p[k] += prev;
        }
    }
    p
}

/// `prod_{n >= 1} (1 - q^n)^{-n}` to order `D`.
pub fn macmahon(order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    for n in 1..=order {
        for _ in 0..n {
            s.divide_by_one_minus(n);
        }
    }
    s
}

pub fn series_pow(s: &IntSeries, r: u32, order: usize) -> IntSeries {
    let base = s.truncate(order);
    let mut out = IntSeries::one(order);
    for _ in 0..r {
        out = out.mul(&base);
    }
    out
}

/// `a_d` summed over the `d' = 0` summands of the open-mode enumeration at
/// `a = 0`, `mu = -r + eps`, each weighted by `prod p2(gcd(d_i, v_i))`.
pub fn dt_series(d_max: usize, r: u32) -> Result<IntSeries> {
    let p = partition_counts(d_max);
    let mu = MuParam::plus_eps(-rational::int(r.into()));
    let mut coeffs = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max {
        let mut a = BigInt::zero();
        for s in enumerate_summands(d as u32, r, 0, &mu, BoundsMode::Open)? {
            if s.d_prime != 0 {
                continue;
            }
            let mut w = BigInt::one();
            for part in &s.parts {
                w *= &p[i64::from(part.d).gcd(&part.v) as usize];
            }
            a += w;
        }
        coeffs.push(a);
    }
    Ok(IntSeries { coeffs })
}

/// The same coefficients by direct recursion over slope-increasing tuples
/// with slopes in `[0, r)`, sharing no code with the enumerator.
pub fn dt_series_recursive(d_max: usize, r: u32) -> IntSeries {
    let p = partition_counts(d_max);
    let r = i64::from(r);

    // Tuples using total size `rem` whose slopes exceed `last = (num, den)`.
    fn count(rem: i64, last: Option<(i64, i64)>, r: i64, p: &[BigInt]) -> BigInt {
        if rem == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for di in 1..=rem {
            for v in 0..r * di {
                if let Some((n, m)) = last {
                    if v * m <= n * di {
                        continue;
                    }
                }
                let g = if v == 0 { di } else { gcd_i64(di, v) };
                total += &p[g as usize] * count(rem - di, Some((v, di)), r, p);
            }
        }
        total
    }

    let coeffs = (0..=d_max as i64).map(|d| count(d, None, r, &p)).collect();
    IntSeries { coeffs }
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// `prod_k (1 - q^{b k})^{-1}` to order `D`.
pub fn euler_factor(b: usize, order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    let mut k = b;
    while k <= order {
        s.divide_by_one_minus(k);
        k += b;
    }
    s
}

/// Product over reduced fractions `gamma = a/b` in `[0, r)` of the Euler
/// factor of `b`. Denominators above `D` only touch `q^{> D}`.
pub fn euler_product_gamma(r: u32, order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    for b in 1..=order.max(1) {
        let f = euler_factor(b, order);
        for a in 0..i64::from(r) * b as i64 {
            if gcd_i64(a, b as i64) == 1 {
                s = s.mul(&f);
            }
        }
    }
    debug_assert_eq!(euler_factor(order + 1, order), IntSeries::one(order));
    s
}

pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd_i64(k as i64, n as i64) == 1).count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub r: u32,
    pub order: usize,
    pub dt: IntSeries,
    pub euler: IntSeries,
    pub macmahon_power: IntSeries,
    pub equal: bool,
    pub first_discrepancy: Option<usize>,
}

pub fn verify_identity(r: u32, order: usize) -> Result<IdentityReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let dt = dt_series(order, r)?;
    let euler = euler_product_gamma(r, order);
    let macmahon_power = series_pow(&macmahon(order), r, order);
    let first_discrepancy = dt.first_difference(&euler).into_iter().chain(dt.first_difference(&macmahon_power)).min();
    Ok(IdentityReport { r, order, equal: first_discrepancy.is_none(), first_discrepancy, dt, euler, macmahon_power })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> IntSeries {
        IntSeries::from_i64(c)
    }

    /// Partitions counted by listing them.
    fn brute_partitions(n: u32, max: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| brute_partitions(n - k, k)).sum()
    }

    #[test]
    fn partitions() {
        let ps: Vec<_> = (0..=6).map(|n| p2(n).unwrap()).collect();
        assert_eq!(ps, s(&[1, 1, 2, 3, 5, 7, 11]).coeffs);
        for n in 0..15 {
            assert_eq!(p2(n).unwrap(), BigInt::from(brute_partitions(n as u32, n as u32)));
        }
        assert!(p2(-1).is_err());
        assert_eq!(IntSeries { coeffs: partition_counts(20) }, euler_factor(1, 20));
    }

    #[test]
    fn macmahon_and_powers() {
        assert_eq!(macmahon(5), s(&[1, 1, 3, 6, 13, 24]));
        assert_eq!(series_pow(&macmahon(2), 1, 2), macmahon(2));
        assert_eq!(series_pow(&macmahon(2), 2, 2), s(&[1, 2, 7]));
    }

    #[test]
    fn dt_examples() {
        assert_eq!(dt_series(3, 1).unwrap(), s(&[1, 1, 3, 6]));
        assert_eq!(dt_series(2, 2).unwrap(), s(&[1, 2, 7]));
        assert_eq!(dt_series(0, 5).unwrap(), s(&[1]));
        assert_eq!(dt_series_recursive(3, 1), s(&[1, 1, 3, 6]));
        assert_eq!(dt_series_recursive(2, 2), s(&[1, 2, 7]));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_product_gamma(1, 3), s(&[1, 1, 3, 6]));
        assert_eq!(euler_product_gamma(1, 0), s(&[1]));
        assert_eq!(euler_product_gamma(1, 10), macmahon(10));
    }

    #[test]
    fn identity_report() {
        let rep = verify_identity(1, 10).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.dt, s(&[1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]));
        assert!(verify_identity(2, 8).unwrap().equal);
        assert!(verify_identity(3, 6).unwrap().equal);
        let json = serde_json::to_string(&rep.dt).unwrap();
        assert_eq!(json, r#"{"coeffs":["1","1","3","6","13","24","48","86","160","282","500"]}"#);
    }
}
