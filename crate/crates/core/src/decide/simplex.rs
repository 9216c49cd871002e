//! Exact two-phase tableau simplex over rationals with Bland's rule.
//!
//! Every solve also returns dual multipliers for the original rows, so
//! optimality and infeasibility can be certified without trusting the
//! pivoting.

use num_traits::{One, Signed, Zero};

use crate::models::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `maximize c·x` subject to rows `aᵢ·x (≤|≥|=) bᵢ` and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub variables: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Relation, Rational)>,
}

/// The outcome of [`LinearProgram::solve`].
///
/// Duals `z` refer to the original rows. At an optimum they satisfy
/// `Σᵢ zᵢ aᵢⱼ ≥ cⱼ` for every variable `j`, `z·b` equals the optimal value,
/// `zᵢ ≤ 0` on `≥` rows and `zᵢ ≥ 0` on `≤` rows. For an infeasible
/// program they satisfy the same sign conditions with `Σᵢ zᵢ aᵢⱼ ≥ 0` and
/// `z·b < 0`, which rules out any feasible point.
#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        duals: Vec<Rational>,
    },
    Infeasible {
        duals: Vec<Rational>,
    },
    Unbounded,
}

struct Tableau {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let factor = line[col].clone();
            for (v, pv) in line.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.t[r][j].is_zero() {
                d -= &cost[b] * &self.t[r][j];
            }
        }
        d
    }

    /// Maximizes `cost` over the current basis; columns with `barred[j]`
    /// never enter. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], barred: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols)
                .find(|&j| !barred[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive());
            let Some(col) = entering else {
                return true;
            };
            let rhs = self.cols;
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                if self.t[r][col].is_positive() {
                    let ratio = &self.t[r][rhs] / &self.t[r][col];
                    let better = match &leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .map(|(r, &b)| &cost[b] * &self.t[r][self.cols])
            .sum()
    }

    /// `y = c_B B⁻¹`, read through the columns that formed the initial basis.
    fn duals(&self, cost: &[Rational], initial: &[usize]) -> Vec<Rational> {
        initial
            .iter()
            .map(|&col| {
                self.basis
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| &cost[b] * &self.t[r][col])
                    .sum()
            })
            .collect()
    }
}

impl LinearProgram {
    pub fn new(variables: usize, objective: Vec<Rational>) -> LinearProgram {
        assert_eq!(objective.len(), variables);
        LinearProgram {
            variables,
            objective,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coefficients.len(), self.variables);
        self.rows.push((coefficients, relation, rhs));
    }

    pub fn solve(&self) -> LpSolution {
        let n = self.variables;
        let m = self.rows.len();
        // Normalize right-hand sides to be nonnegative.
        let mut sign = Vec::with_capacity(m);
        let mut rel = Vec::with_capacity(m);
        for (_, r, b) in &self.rows {
            let flip = b.is_negative();
            sign.push(if flip { -Rational::one() } else { Rational::one() });
            rel.push(match (r, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => *r,
            });
        }
        // Column layout: structural, one slack/surplus per inequality row,
        // one artificial per ≥ or = row.
        let slack_count = rel.iter().filter(|r| **r != Relation::Eq).count();
        let art_count = rel.iter().filter(|r| **r != Relation::Le).count();
        let cols = n + slack_count + art_count;
        let mut t = vec![vec![Rational::zero(); cols + 1]; m];
        let mut basis = vec![0; m];
        let mut initial = vec![0; m];
        let mut is_art = vec![false; cols];
        let (mut next_slack, mut next_art) = (n, n + slack_count);
        for (i, (a, _, b)) in self.rows.iter().enumerate() {
            for (j, v) in a.iter().enumerate() {
                t[i][j] = &sign[i] * v;
            }
            t[i][cols] = &sign[i] * b;
            match rel[i] {
                Relation::Le => {
                    t[i][next_slack] = Rational::one();
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    t[i][next_slack] = -Rational::one();
                    next_slack += 1;
                    t[i][next_art] = Rational::one();
                    is_art[next_art] = true;
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    t[i][next_art] = Rational::one();
                    is_art[next_art] = true;
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
            initial[i] = basis[i];
        }
        let mut tab = Tableau { t, basis, cols };
        let unsign = |y: Vec<Rational>| -> Vec<Rational> {
            y.into_iter().zip(&sign).map(|(y, s)| y * s).collect()
        };

        // Phase 1: maximize −Σ artificials.
        if art_count > 0 {
            let cost1: Vec<Rational> = is_art
                .iter()
                .map(|&a| if a { -Rational::one() } else { Rational::zero() })
                .collect();
            let no_bar = vec![false; cols];
            tab.optimize(&cost1, &no_bar);
            if tab.value(&cost1).is_negative() {
                return LpSolution::Infeasible {
                    duals: unsign(tab.duals(&cost1, &initial)),
                };
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..m {
                if is_art[tab.basis[r]] {
                    if let Some(j) = (0..cols).find(|&j| !is_art[j] && !tab.t[r][j].is_zero()) {
                        tab.pivot(r, j);
                    }
                }
            }
        }

        // Phase 2.
        let mut cost2 = vec![Rational::zero(); cols];
        cost2[..n].clone_from_slice(&self.objective);
        if !tab.optimize(&cost2, &is_art) {
            return LpSolution::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.t[r][cols].clone();
            }
        }
        LpSolution::Optimal {
            value: tab.value(&cost2),
            duals: unsign(tab.duals(&cost2, &initial)),
            x,
        }
    }
}
