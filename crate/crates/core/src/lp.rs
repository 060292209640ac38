//! Exact two-phase simplex over the rationals for problems in standard form
//! `min c.x  s.t.  A x = b, x >= 0`. Bland's rule keeps it cycle-free.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

/// Equality-constrained problem over nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct StandardLp {
    n: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
}

impl StandardLp {
    pub fn new(n: usize) -> Self {
        StandardLp { n, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Adds a fresh variable and returns its index.
    pub fn add_var(&mut self) -> usize {
        for (row, _) in &mut self.rows {
            row.push(Rational::zero());
        }
        self.n += 1;
        self.n - 1
    }

    /// Adds `sum coeffs[k].1 * x[coeffs[k].0] = rhs`.
    pub fn add_eq(&mut self, coeffs: &[(usize, Rational)], rhs: Rational) {
        let mut row = vec![Rational::zero(); self.n];
        for (j, c) in coeffs {
            row[*j] += c;
        }
        self.rows.push((row, rhs));
    }

    /// Adds `sum coeffs <= rhs` through a new slack variable.
    pub fn add_le(&mut self, coeffs: &[(usize, Rational)], rhs: Rational) {
        let s = self.add_var();
        let mut c = coeffs.to_vec();
        c.push((s, Rational::one()));
        self.add_eq(&c, rhs);
    }

    /// Adds `sum coeffs >= rhs` through a new surplus variable.
    pub fn add_ge(&mut self, coeffs: &[(usize, Rational)], rhs: Rational) {
        let s = self.add_var();
        let mut c = coeffs.to_vec();
        c.push((s, -Rational::one()));
        self.add_eq(&c, rhs);
    }

    pub fn minimize(&self, cost: &[(usize, Rational)]) -> LpOutcome {
        let mut c = vec![Rational::zero(); self.n];
        for (j, v) in cost {
            c[*j] += v;
        }
        Tableau::solve(self.n, &self.rows, &c)
    }

    pub fn maximize(&self, cost: &[(usize, Rational)]) -> LpOutcome {
        let neg: Vec<_> = cost.iter().map(|(j, v)| (*j, -v)).collect();
        match self.minimize(&neg) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }

    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        match self.minimize(&[]) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    /// `m` constraint rows of width `cols + 1` (last entry is the rhs).
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn solve(n: usize, rows: &[(Vec<Rational>, Rational)], cost: &[Rational]) -> LpOutcome {
        let m = rows.len();
        let cols = n + m;
        let mut t = Vec::with_capacity(m);
        for (i, (a, b)) in rows.iter().enumerate() {
            let flip = b.is_negative();
            let mut row: Vec<Rational> = a.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row.push(if flip { -b } else { b.clone() });
            t.push(row);
        }
        let mut tab = Tableau { t, basis: (n..n + m).collect(), cols };

        // Phase one: drive the artificial variables to zero.
        let mut art_cost = vec![Rational::zero(); cols];
        for c in &mut art_cost[n..] {
            *c = Rational::one();
        }
        if !tab.optimize(&art_cost, cols) {
            unreachable!("phase one is bounded below by zero");
        }
        if !tab.objective(&art_cost).is_zero() {
            return LpOutcome::Infeasible;
        }
        // Pivot remaining artificials out, dropping redundant rows.
        let mut i = 0;
        while i < tab.t.len() {
            if tab.basis[i] >= n {
                match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.t.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut full_cost = cost.to_vec();
        full_cost.resize(cols, Rational::zero());
        if !tab.optimize(&full_cost, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.t[i][tab.cols].clone();
            }
        }
        let value = tab.objective(&full_cost);
        LpOutcome::Optimal { x, value }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().enumerate().map(|(i, &b)| &cost[b] * &self.t[i][self.cols]).sum()
    }

    /// Runs simplex iterations over columns `< allowed`. Returns false when
    /// the objective is unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            // Reduced cost of column j: c_j - sum_i c_{B_i} t_ij. Bland: first negative.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut red = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                        red -= &cost[b] * &self.t[i][j];
                    }
                }
                red.is_negative()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if self.t[i][j].is_positive() {
                    let ratio = &self.t[i][self.cols] / &self.t[i][j];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((i, _)) = best else { return false };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        if !p.is_one() {
            for v in &mut self.t[r] {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn small_problems() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let mut lp = StandardLp::new(2);
        lp.add_le(&[(0, int(1)), (1, int(2))], int(4));
        lp.add_le(&[(0, int(3)), (1, int(1))], int(6));
        match lp.maximize(&[(0, int(1)), (1, int(1))]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, frac(14, 5));
                assert_eq!(x[0], frac(8, 5));
                assert_eq!(x[1], frac(6, 5));
            }
            o => panic!("{o:?}"),
        }

        let mut lp = StandardLp::new(1);
        lp.add_ge(&[(0, int(1))], int(2));
        lp.add_le(&[(0, int(1))], int(1));
        assert_eq!(lp.minimize(&[]), LpOutcome::Infeasible);

        let mut lp = StandardLp::new(2);
        lp.add_eq(&[(0, int(1)), (1, int(-1))], int(-3));
        assert_eq!(lp.maximize(&[(0, int(1))]), LpOutcome::Unbounded);
        assert_eq!(lp.feasible_point().unwrap()[1], int(3));
    }

    #[test]
    fn redundant_rows() {
        let mut lp = StandardLp::new(2);
        lp.add_eq(&[(0, int(1)), (1, int(1))], int(2));
        lp.add_eq(&[(0, int(2)), (1, int(2))], int(4));
        match lp.minimize(&[(0, int(1))]) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, int(0));
                assert_eq!(x[1], int(2));
            }
            o => panic!("{o:?}"),
        }
    }
}
