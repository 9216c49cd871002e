//! The measure-feasibility linear program over the valuations of a set of
//! letters, and its infeasibility certificates.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use super::simplex::{LinearProgram, LpSolution, Relation};
use super::DecideError;
use crate::formula::Formula;
use crate::models::{format_rational, Rational};

/// Default cap on the letters of one linear program (4096 variables).
pub const LETTER_CAP: usize = 12;

/// Truth vector of a propositional formula over all `2^|letters|`
/// valuations; valuation `v` makes `letters[i]` true iff bit `i` of `v` is
/// set.
pub fn truth_vector(f: &Formula, letters: &[Arc<str>]) -> FixedBitSet {
    let size = 1usize << letters.len();
    let full = || {
        let mut s = FixedBitSet::with_capacity(size);
        s.insert_range(..);
        s
    };
    match f {
        Formula::Top => full(),
        Formula::Bot => FixedBitSet::with_capacity(size),
        Formula::Atom(p) => {
            let i = letters
                .iter()
                .position(|l| l == p)
                .unwrap_or_else(|| panic!("letter `{p}` missing from the program"));
            let mut s = FixedBitSet::with_capacity(size);
            for v in 0..size {
                if v >> i & 1 == 1 {
                    s.insert(v);
                }
            }
            s
        }
        Formula::Not(a) => {
            let mut s = truth_vector(a, letters);
            s.toggle_range(..);
            s
        }
        Formula::And(a, b) => {
            let mut s = truth_vector(a, letters);
            s.intersect_with(&truth_vector(b, letters));
            s
        }
        Formula::Geq(..) => panic!("comparison inside a measure program"),
    }
}

fn difference(f: &Formula, g: &Formula, letters: &[Arc<str>]) -> Vec<i8> {
    let (a, b) = (truth_vector(f, letters), truth_vector(g, letters));
    (0..1usize << letters.len())
        .map(|v| a.contains(v) as i8 - b.contains(v) as i8)
        .collect()
}

/// Find a probability measure `x` over the valuations of `letters` with
/// `x(φ) ≥ x(ψ)` for every positive pair and `x(ψ) > x(φ)` for every
/// target pair `(φ, ψ)` (a negated comparison `¬(φ ≿ ψ)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureLP {
    letters: Vec<Arc<str>>,
    positives: Vec<(Formula, Formula)>,
    targets: Vec<(Formula, Formula)>,
    /// `a(v) = [v ⊨ φ] − [v ⊨ ψ]` per positive pair.
    positive_rows: Vec<Vec<i8>>,
    /// `g(v) = [v ⊨ ψ] − [v ⊨ φ]` per target pair.
    target_rows: Vec<Vec<i8>>,
}

/// Result of [`MeasureLP::solve`].
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Weights per valuation, and the common margin by which every target
    /// holds (zero when there are no targets).
    Feasible { weights: Vec<Rational>, margin: Rational },
    Infeasible(FarkasCertificate),
}

/// Nonnegative multipliers `λ` on the positive rows and `λ₀` on the target
/// rows. With `h(v) = Σ λᵢ aᵢ(v) + Σ λ₀ⱼ gⱼ(v)`, any feasible measure gives
/// `Σ_v x_v h(v) ≥ 0`, strictly so when some `λ₀ⱼ > 0`. The certificate is
/// valid when `max_v h(v) < 0`, or `max_v h(v) ≤ 0` with `Σ λ₀ > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub positive: Vec<Rational>,
    pub target: Vec<Rational>,
}

impl FarkasCertificate {
    /// Checks the certificate against `lp` using only exact arithmetic on
    /// the program's coefficients.
    pub fn verify(&self, lp: &MeasureLP) -> bool {
        if self.positive.len() != lp.positive_rows.len() || self.target.len() != lp.target_rows.len() {
            return false;
        }
        if self.positive.iter().chain(&self.target).any(Signed::is_negative) {
            return false;
        }
        let mut max_h: Option<Rational> = None;
        for v in 0..lp.variable_count() {
            let h: Rational = self
                .positive
                .iter()
                .zip(&lp.positive_rows)
                .chain(self.target.iter().zip(&lp.target_rows))
                .filter(|(_, row)| row[v] != 0)
                .map(|(l, row)| l * Rational::from_integer(row[v].into()))
                .sum();
            if max_h.as_ref().is_none_or(|m| h > *m) {
                max_h = Some(h);
            }
        }
        let max_h = max_h.unwrap_or_else(Rational::zero);
        let strict_mass: Rational = self.target.iter().sum();
        max_h.is_negative() || (!max_h.is_positive() && strict_mass.is_positive())
    }
}

impl fmt::Display for FarkasCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "positive multipliers [{}], target multipliers [{}]",
            show(&self.positive),
            show(&self.target)
        )
    }
}

impl MeasureLP {
    /// Builds the program. Every letter of the pairs must be listed in
    /// `letters`, and all formulas must be propositional.
    pub fn new(
        letters: Vec<Arc<str>>,
        positives: Vec<(Formula, Formula)>,
        targets: Vec<(Formula, Formula)>,
        letter_cap: usize,
    ) -> Result<MeasureLP, DecideError> {
        if letters.len() > letter_cap {
            return Err(DecideError::LetterCap {
                letters: letters.len(),
                cap: letter_cap,
            });
        }
        let positive_rows = positives
            .iter()
            .map(|(f, g)| difference(f, g, &letters))
            .collect();
        let target_rows = targets
            .iter()
            .map(|(f, g)| difference(g, f, &letters))
            .collect();
        Ok(MeasureLP {
            letters,
            positives,
            targets,
            positive_rows,
            target_rows,
        })
    }

    pub fn letters(&self) -> &[Arc<str>] {
        &self.letters
    }

    pub fn positives(&self) -> &[(Formula, Formula)] {
        &self.positives
    }

    pub fn targets(&self) -> &[(Formula, Formula)] {
        &self.targets
    }

    /// One variable per valuation: `2^|letters|`.
    pub fn variable_count(&self) -> usize {
        1 << self.letters.len()
    }

    /// Whether `weights` is a probability vector meeting every constraint.
    pub fn check_point(&self, weights: &[Rational]) -> bool {
        if weights.len() != self.variable_count()
            || weights.iter().any(Signed::is_negative)
            || !weights.iter().sum::<Rational>().is_one()
        {
            return false;
        }
        let dot = |row: &[i8]| -> Rational {
            row.iter()
                .zip(weights)
                .filter(|(c, _)| **c != 0)
                .map(|(c, w)| w * Rational::from_integer((*c).into()))
                .sum()
        };
        self.positive_rows.iter().all(|r| !dot(r).is_negative())
            && self.target_rows.iter().all(|r| dot(r).is_positive())
    }

    /// Maximizes the common margin `t` of the targets over probability
    /// vectors satisfying the positive rows. Valuations with identical
    /// coefficient columns are merged before solving; the merged weight goes
    /// to the lowest such valuation.
    pub fn solve(&self) -> LpOutcome {
        let mut reps: Vec<usize> = Vec::new();
        let mut seen: HashMap<Vec<i8>, usize> = HashMap::new();
        for v in 0..self.variable_count() {
            let key: Vec<i8> = self
                .positive_rows
                .iter()
                .chain(&self.target_rows)
                .map(|r| r[v])
                .collect();
            seen.entry(key).or_insert_with(|| {
                reps.push(v);
                reps.len() - 1
            });
        }
        let k = reps.len();
        let strict = !self.target_rows.is_empty();
        // Variables: one per merged column, then s = t + 1 when strict.
        let vars = k + strict as usize;
        let mut objective = vec![Rational::zero(); vars];
        if strict {
            objective[k] = Rational::one();
        }
        let mut lp = LinearProgram::new(vars, objective);
        let int = |c: i8| Rational::from_integer(c.into());
        for row in &self.positive_rows {
            let mut a: Vec<Rational> = reps.iter().map(|&v| int(row[v])).collect();
            if strict {
                a.push(Rational::zero());
            }
            lp.add_row(a, Relation::Ge, Rational::zero());
        }
        for row in &self.target_rows {
            let mut a: Vec<Rational> = reps.iter().map(|&v| int(row[v])).collect();
            a.push(-Rational::one());
            lp.add_row(a, Relation::Ge, -Rational::one());
        }
        let mut norm = vec![Rational::one(); k];
        if strict {
            norm.push(Rational::zero());
        }
        lp.add_row(norm, Relation::Eq, Rational::one());

        let p = self.positive_rows.len();
        let certificate = |duals: Vec<Rational>| FarkasCertificate {
            positive: duals[..p].iter().map(|z| -z).collect(),
            target: duals[p..p + self.target_rows.len()].iter().map(|z| -z).collect(),
        };
        match lp.solve() {
            LpSolution::Optimal { x, value, duals } => {
                let margin = if strict { value - Rational::one() } else { Rational::zero() };
                if strict && !margin.is_positive() {
                    return LpOutcome::Infeasible(certificate(duals));
                }
                let mut weights = vec![Rational::zero(); self.variable_count()];
                for (i, &v) in reps.iter().enumerate() {
                    weights[v] = x[i].clone();
                }
                LpOutcome::Feasible { weights, margin }
            }
            LpSolution::Infeasible { duals } => LpOutcome::Infeasible(certificate(duals)),
            LpSolution::Unbounded => unreachable!("the margin is bounded by one"),
        }
    }
}

/// A measure meeting the program's constraints, if one exists.
pub fn lp_feasible_strict(lp: &MeasureLP) -> Option<Vec<Rational>> {
    match lp.solve() {
        LpOutcome::Feasible { weights, .. } => Some(weights),
        LpOutcome::Infeasible(_) => None,
    }
}

/// Largest bit length among the numerators and denominators of `weights`.
pub fn max_bits(weights: &[Rational]) -> u64 {
    weights
        .iter()
        .map(|w| w.numer().bits().max(w.denom().bits()))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn letters(ls: &[&str]) -> Vec<Arc<str>> {
        ls.iter().map(|&l| Arc::from(l)).collect()
    }

    #[test]
    fn unconstrained_is_feasible() {
        let lp = MeasureLP::new(letters(&["p"]), vec![], vec![], LETTER_CAP).unwrap();
        let w = lp_feasible_strict(&lp).unwrap();
        assert!(lp.check_point(&w));
    }

    #[test]
    fn nothing_beats_top() {
        let lp = MeasureLP::new(letters(&["p"]), vec![], vec![(f("T"), f("p"))], LETTER_CAP).unwrap();
        match lp.solve() {
            LpOutcome::Infeasible(c) => assert!(c.verify(&lp), "{c}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradictory_target() {
        let lp = MeasureLP::new(
            letters(&["p", "q"]),
            vec![(f("p"), f("q"))],
            vec![(f("p"), f("q"))],
            LETTER_CAP,
        )
        .unwrap();
        match lp.solve() {
            LpOutcome::Infeasible(c) => assert!(c.verify(&lp), "{c}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn impossible_positive() {
        let lp = MeasureLP::new(letters(&["p"]), vec![(f("F"), f("T"))], vec![], LETTER_CAP).unwrap();
        match lp.solve() {
            LpOutcome::Infeasible(c) => {
                assert!(c.verify(&lp), "{c}");
                assert!(c.target.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strict_target_met() {
        let lp = MeasureLP::new(
            letters(&["p", "q"]),
            vec![(f("p"), f("q"))],
            vec![(f("q"), f("p"))],
            LETTER_CAP,
        )
        .unwrap();
        match lp.solve() {
            LpOutcome::Feasible { weights, margin } => {
                assert!(margin.is_positive());
                assert!(lp.check_point(&weights));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bogus_certificates_rejected() {
        let lp = MeasureLP::new(letters(&["p"]), vec![], vec![(f("p"), f("~p"))], LETTER_CAP).unwrap();
        let zero = FarkasCertificate {
            positive: vec![],
            target: vec![Rational::zero()],
        };
        assert!(!zero.verify(&lp));
        let one = FarkasCertificate {
            positive: vec![],
            target: vec![Rational::one()],
        };
        assert!(!one.verify(&lp));
    }

    #[test]
    fn letter_cap() {
        let many: Vec<String> = (0..13).map(|i| format!("a{i}")).collect();
        let ls: Vec<Arc<str>> = many.iter().map(|s| Arc::from(s.as_str())).collect();
        assert!(matches!(
            MeasureLP::new(ls, vec![], vec![], LETTER_CAP),
            Err(DecideError::LetterCap { letters: 13, cap: 12 })
        ));
    }
}
