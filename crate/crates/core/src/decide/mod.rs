//! Satisfiability and validity for the logic of imprecise probability.
//!
//! A formula is rewritten into guarded disjuncts
//! `¬(φ₁ ≿ ψ₁) ∧ … ∧ ¬(φₙ ≿ ψₙ) ∧ (α₁ ≿ β₁) ∧ … ∧ ξ`. A disjunct is
//! satisfiable in a multi-measure model iff each negated comparison can be
//! realized by its own measure that also respects every positive
//! comparison. Each of those is an exact linear program over the valuations
//! of the disjunct's comparison letters. A witness model is the disjoint
//! union of the measures' supports, plus a zero-weight state when no
//! supported state can carry a valuation of `ξ`.
//!
//! Unsatisfiable disjuncts come with Farkas certificates that
//! [`FarkasCertificate::verify`] checks independently of the simplex.

mod lp;
mod oracle;
pub mod simplex;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::formula::{to_guarded_dnf, Formula, GuardedDisjunct};
use crate::models::{format_rational, Model, MultiMeasureModel, Rational};
use crate::semantics::{eval, Semantics};

pub use lp::{
    lp_feasible_strict, max_bits, truth_vector, FarkasCertificate, LpOutcome, MeasureLP, LETTER_CAP,
};
pub use oracle::{
    enumerate_sat_preferential, enumerate_sat_preferential_with, ORACLE_MAX_LETTERS,
    ORACLE_MAX_STATES,
};

/// Witnesses satisfy `|W| ≤ STATE_FACTOR · |θ|²`.
pub const STATE_FACTOR: usize = 2;
/// Witnesses satisfy `|𝒫| ≤ MEASURE_FACTOR · |θ|`.
pub const MEASURE_FACTOR: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("a disjunct uses {letters} letters, above the cap of {cap}")]
    LetterCap { letters: usize, cap: usize },
    #[error("the preferential search handles at most {limit} {what}, got {found}")]
    OracleCap {
        what: &'static str,
        found: usize,
        limit: usize,
    },
    #[error("witness failed to re-check: {0}")]
    Witness(String),
}

/// Solver settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// Look for a model with exactly one measure (sharp probability).
    pub single_measure: bool,
    /// Largest number of letters a single disjunct may use.
    pub letter_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            single_measure: false,
            letter_cap: LETTER_CAP,
        }
    }
}

/// Size figures of a witness, with the bounds it is checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStats {
    pub formula_length: usize,
    pub states: usize,
    pub measures: usize,
    pub state_bound: usize,
    pub measure_bound: usize,
    /// Largest bit length of a weight's numerator or denominator.
    pub max_weight_bits: u64,
}

impl WitnessStats {
    pub fn within_bounds(&self) -> bool {
        self.states <= self.state_bound && self.measures <= self.measure_bound
    }
}

/// A model satisfying the input at a designated state.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub model: MultiMeasureModel,
    pub state: String,
    /// Position of the satisfied disjunct in the guarded normal form.
    pub disjunct: usize,
    pub stats: WitnessStats,
}

/// Why one disjunct has no model.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjunctRefutation {
    pub index: usize,
    pub disjunct: GuardedDisjunct,
    /// The negated comparison whose measure program failed; `None` when the
    /// positive comparisons alone admit no measure, or in single-measure
    /// mode when the targets cannot be met together.
    pub target: Option<(Formula, Formula)>,
    pub certificate: FarkasCertificate,
    /// The failing program, kept so the certificate can be re-verified.
    pub program: MeasureLP,
}

/// Evidence that no multi-measure model satisfies the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Refutation {
    pub formula: Formula,
    pub disjuncts: Vec<DisjunctRefutation>,
}

impl Refutation {
    /// Re-checks every certificate.
    pub fn verify(&self) -> bool {
        self.disjuncts
            .iter()
            .all(|d| d.certificate.verify(&d.program))
    }

    /// Machine-readable trace: one entry per disjunct with its reason.
    pub fn to_json(&self) -> Value {
        let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        let disjuncts: Vec<Value> = self
            .disjuncts
            .iter()
            .map(|d| {
                json!({
                    "index": d.index,
                    "disjunct": d.disjunct.to_formula().to_string(),
                    "reason": match &d.target {
                        Some(_) => "no measure realizes the negated comparison",
                        None => "no measure meets the comparisons together",
                    },
                    "target": d.target.as_ref().map(|(a, b)| format!("{}", Formula::geq(a.clone(), b.clone()))),
                    "positives": d.program.positives().iter().map(|(a, b)| Formula::geq(a.clone(), b.clone()).to_string()).collect::<Vec<_>>(),
                    "certificate": {
                        "positive": show(&d.certificate.positive),
                        "target": show(&d.certificate.target),
                    },
                })
            })
            .collect();
        json!({
            "status": "unsat",
            "formula": self.formula.to_string(),
            "propositionally_contradictory": self.disjuncts.is_empty(),
            "disjuncts": disjuncts,
        })
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.disjuncts.is_empty() {
            return writeln!(f, "every disjunct is propositionally contradictory");
        }
        for d in &self.disjuncts {
            write!(f, "disjunct {}: {}\n  ", d.index, d.disjunct.to_formula())?;
            match &d.target {
                Some((a, b)) => writeln!(
                    f,
                    "no measure makes {} false while keeping the positive comparisons",
                    Formula::geq(a.clone(), b.clone())
                )?,
                None => writeln!(f, "no measure meets the comparisons together")?,
            }
            writeln!(f, "  certificate: {}", d.certificate)?;
        }
        Ok(())
    }
}

/// Outcome of [`sat_ip`].
#[derive(Debug, Clone, PartialEq)]
pub enum SatResult {
    Sat(Witness),
    Unsat(Refutation),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SatResult::Sat(w) => Some(w),
            SatResult::Unsat(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            SatResult::Sat(_) => None,
            SatResult::Unsat(r) => Some(r),
        }
    }
}

/// Outcome of [`valid_ip`]: valid with the refutation of the negation, or
/// invalid with a countermodel.
#[derive(Debug, Clone, PartialEq)]
pub enum Validity {
    Valid(Refutation),
    Invalid(Witness),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid(_))
    }

    pub fn countermodel(&self) -> Option<&Witness> {
        match self {
            Validity::Valid(_) => None,
            Validity::Invalid(w) => Some(w),
        }
    }
}

fn letter_index(letters: &[Arc<str>], p: &str) -> usize {
    letters.iter().position(|l| l.as_ref() == p).expect("known letter")
}

/// A valuation of `all` (bit `i` ↔ `all[i]`) satisfying `xi` and agreeing
/// with `fixed` on the letters of `lp_letters`, if any.
fn complete_valuation(
    xi: &Formula,
    all: &[Arc<str>],
    lp_letters: &[Arc<str>],
    fixed: Option<usize>,
) -> Option<u64> {
    let free: Vec<usize> = (0..all.len())
        .filter(|&i| fixed.is_none() || !lp_letters.contains(&all[i]))
        .collect();
    let mut base = 0u64;
    if let Some(v) = fixed {
        for (j, l) in lp_letters.iter().enumerate() {
            if v >> j & 1 == 1 {
                base |= 1 << letter_index(all, l);
            }
        }
    }
    (0u64..1 << free.len()).find_map(|bits| {
        let mut val = base;
        for (k, &i) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                val |= 1 << i;
            }
        }
        let lookup = |p: &str| val >> letter_index(all, p) & 1 == 1;
        xi.eval_propositional(&lookup)
            .expect("residue is propositional")
            .then_some(val)
    })
}

enum DisjunctOutcome {
    Sat(Vec<(MeasureLP, Vec<Rational>)>),
    Unsat(Option<(Formula, Formula)>, FarkasCertificate, MeasureLP),
}

fn solve_disjunct(d: &GuardedDisjunct, opts: &Options) -> Result<DisjunctOutcome, DecideError> {
    let letters: Vec<Arc<str>> = d.comparison_atoms().into_iter().collect();
    let programs: Vec<(Option<(Formula, Formula)>, Vec<(Formula, Formula)>)> =
        if opts.single_measure || d.negatives.is_empty() {
            vec![(None, d.negatives.clone())]
        } else {
            d.negatives
                .iter()
                .map(|n| (Some(n.clone()), vec![n.clone()]))
                .collect()
        };
    let mut fragments = Vec::with_capacity(programs.len());
    for (label, targets) in programs {
        let lp = MeasureLP::new(letters.clone(), d.positives.clone(), targets, opts.letter_cap)?;
        match lp.solve() {
            LpOutcome::Feasible { weights, .. } => fragments.push((lp, weights)),
            LpOutcome::Infeasible(cert) => return Ok(DisjunctOutcome::Unsat(label, cert, lp)),
        }
    }
    Ok(DisjunctOutcome::Sat(fragments))
}

fn build_witness(
    f: &Formula,
    d: &GuardedDisjunct,
    index: usize,
    fragments: &[(MeasureLP, Vec<Rational>)],
) -> Result<Witness, DecideError> {
    let all: Vec<Arc<str>> = d.atoms().into_iter().collect();
    let lp_letters: Vec<Arc<str>> = d.comparison_atoms().into_iter().collect();

    // Positive-weight states of every fragment, in order.
    let support: Vec<Vec<usize>> = fragments
        .iter()
        .map(|(_, w)| (0..w.len()).filter(|&v| !w[v].is_zero()).collect())
        .collect();
    let designated = support
        .iter()
        .enumerate()
        .flat_map(|(i, vs)| vs.iter().enumerate().map(move |(k, &v)| (i, k, v)))
        .find_map(|(i, k, v)| {
            complete_valuation(&d.propositional, &all, &lp_letters, Some(v)).map(|val| (Some((i, k)), val))
        })
        .or_else(|| {
            complete_valuation(&d.propositional, &all, &lp_letters, None).map(|val| (None, val))
        })
        .ok_or_else(|| DecideError::Witness("residue has no satisfying valuation".into()))?;
    let (at, designated_val) = designated;

    let mut names = Vec::new();
    let mut truth: Vec<u64> = Vec::new();
    for (i, vs) in support.iter().enumerate() {
        for (k, &v) in vs.iter().enumerate() {
            names.push(format!("m{i}.{k}"));
            let mut val = designated_val;
            for (j, l) in lp_letters.iter().enumerate() {
                let bit = 1u64 << letter_index(&all, l);
                if v >> j & 1 == 1 {
                    val |= bit;
                } else {
                    val &= !bit;
                }
            }
            truth.push(val);
        }
    }
    let state = match at {
        Some((i, k)) => format!("m{i}.{k}"),
        None => {
            names.push("d".to_string());
            truth.push(designated_val);
            "d".to_string()
        }
    };
    let n = names.len();
    let mut measures = Vec::with_capacity(fragments.len());
    let mut offset = 0;
    for ((_, w), vs) in fragments.iter().zip(&support) {
        let mut weights = vec![Rational::zero(); n];
        for (k, &v) in vs.iter().enumerate() {
            weights[offset + k] = w[v].clone();
        }
        offset += vs.len();
        measures.push(weights);
    }
    let mut valuation: BTreeMap<String, FixedBitSet> = f
        .atoms()
        .into_iter()
        .map(|p| (p.to_string(), FixedBitSet::with_capacity(n)))
        .collect();
    for (idx, &val) in truth.iter().enumerate() {
        for (i, l) in all.iter().enumerate() {
            if val >> i & 1 == 1 {
                valuation
                    .get_mut(l.as_ref())
                    .expect("disjunct letters occur in the formula")
                    .insert(idx);
            }
        }
    }
    let max_weight_bits = measures.iter().map(|m| max_bits(m)).max().unwrap_or(0);
    let model = MultiMeasureModel::from_indexed(names, measures, valuation)
        .map_err(|e| DecideError::Witness(e.to_string()))?;
    let length = f.length();
    let stats = WitnessStats {
        formula_length: length,
        states: n,
        measures: model.measures().len(),
        state_bound: STATE_FACTOR * length * length,
        measure_bound: MEASURE_FACTOR * length,
        max_weight_bits,
    };
    let wrapped = Model::MultiMeasure(model);
    match eval(&wrapped, Semantics::MultiMeasure, &state, f) {
        Ok(true) => {}
        Ok(false) => return Err(DecideError::Witness(format!("{f} is false at {state}"))),
        Err(e) => return Err(DecideError::Witness(e.to_string())),
    }
    let Model::MultiMeasure(model) = wrapped else {
        unreachable!()
    };
    Ok(Witness {
        model,
        state,
        disjunct: index,
        stats,
    })
}

/// Decides whether some multi-measure model satisfies `f` at some state.
///
/// ```
/// use qualprob::decide::{sat_ip, Options};
/// use qualprob::formula::parse;
///
/// let incomparable = parse("~(p >= q) & ~(q >= p)").unwrap();
/// let result = sat_ip(&incomparable, &Options::default()).unwrap();
/// assert_eq!(result.witness().unwrap().model.measures().len(), 2);
///
/// let sharp = Options { single_measure: true, ..Options::default() };
/// assert!(!sat_ip(&incomparable, &sharp).unwrap().is_sat());
/// ```
pub fn sat_ip(f: &Formula, opts: &Options) -> Result<SatResult, DecideError> {
    let dnf = to_guarded_dnf(f);
    let mut order: Vec<(usize, usize, usize)> = Vec::with_capacity(dnf.len());
    for (i, d) in dnf.iter().enumerate() {
        let letters = d.atoms().len();
        if letters > opts.letter_cap {
            return Err(DecideError::LetterCap {
                letters,
                cap: opts.letter_cap,
            });
        }
        order.push((d.negatives.len(), letters, i));
    }
    order.sort_unstable();
    let mut refuted = Vec::new();
    for (_, _, i) in order {
        let d = &dnf[i];
        match solve_disjunct(d, opts)? {
            DisjunctOutcome::Sat(fragments) => {
                return Ok(SatResult::Sat(build_witness(f, d, i, &fragments)?));
            }
            DisjunctOutcome::Unsat(target, certificate, program) => refuted.push(DisjunctRefutation {
                index: i,
                disjunct: d.clone(),
                target,
                certificate,
                program,
            }),
        }
    }
    refuted.sort_by_key(|r| r.index);
    Ok(SatResult::Unsat(Refutation {
        formula: f.clone(),
        disjuncts: refuted,
    }))
}

/// Decides validity over all multi-measure models: `f` is valid iff `¬f`
/// is unsatisfiable.
///
/// ```
/// use qualprob::decide::{valid_ip, Options};
/// use qualprob::formula::parse;
///
/// let a1 = parse("p >= F").unwrap();
/// assert!(valid_ip(&a1, &Options::default()).unwrap().is_valid());
/// ```
pub fn valid_ip(f: &Formula, opts: &Options) -> Result<Validity, DecideError> {
    Ok(match sat_ip(&Formula::not(f.clone()), opts)? {
        SatResult::Sat(w) => Validity::Invalid(w),
        SatResult::Unsat(r) => Validity::Valid(r),
    })
}
