//! Axiom schemas of the logics IL, SP and IP, their instantiation, the
//! balanced-sequence relation, and soundness auditing over finite models.
//!
//! | logic | schemas                          | read with                |
//! |-------|----------------------------------|--------------------------|
//! | IL    | L1–L4, I1, I2                    | inflationary functions   |
//! | SP    | A0–A3, A4, I1, I2                | counting (one measure)   |
//! | IP    | A1–A3, A4′, I1, I2               | inflationary injections  |

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{build_equinumerosity, Formula, FormulaError};
use crate::models::Model;
use crate::random::{self, FormulaShape};
use crate::semantics::{ComparisonTrace, EvalError, Evaluator, Semantics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaId {
    /// `φ ≿ φ`
    L1,
    /// `(⊥ ≿ (ψ ∧ ¬φ)) → (φ ≿ ψ)`
    L2,
    /// `((φ ≿ ψ) ∧ (ψ ≿ χ)) → (φ ≿ χ)`
    L3,
    /// `((φ ≿ ψ) ∧ (φ ≿ χ)) → (φ ≿ (ψ ∨ χ))`
    L4,
    /// `(φ ≿ ψ) → ((φ ≿ ψ) ≿ ⊤)`
    I1,
    /// `¬(φ ≿ ψ) → (¬(φ ≿ ψ) ≿ ⊤)`
    I2,
    /// `(φ ≿ ψ) ∨ (ψ ≿ φ)`
    A0,
    /// `φ ≿ ⊥`
    A1,
    /// `φ ≿ φ`
    A2,
    /// `¬(⊥ ≿ ⊤)`
    A3,
    /// Cancellation with one copy of `φ′`, `ψ′`.
    A4 { n: usize },
    /// Cancellation with `k` copies of `φ′`, `ψ′`.
    A4Prime { n: usize, k: usize },
}

impl SchemaId {
    /// Number of formula components the schema takes. For `A4` and `A4′`
    /// these are `φ₁,…,φₙ, ψ₁,…,ψₙ, φ′, ψ′` in that order.
    pub fn arity(self) -> usize {
        match self {
            SchemaId::A3 => 0,
            SchemaId::L1 | SchemaId::A1 | SchemaId::A2 => 1,
            SchemaId::L2 | SchemaId::I1 | SchemaId::I2 | SchemaId::A0 => 2,
            SchemaId::L3 | SchemaId::L4 => 3,
            SchemaId::A4 { n } | SchemaId::A4Prime { n, .. } => 2 * n + 2,
        }
    }

    fn check_parameters(self) -> Result<(), AxiomError> {
        match self {
            SchemaId::A4 { n: 0 } | SchemaId::A4Prime { n: 0, .. } => {
                Err(AxiomError::Parameter(format!("{self} needs n ≥ 1")))
            }
            SchemaId::A4Prime { k: 0, .. } => {
                Err(AxiomError::Parameter(format!("{self} needs k ≥ 1")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaId::A4 { n } => write!(f, "A4(n={n})"),
            SchemaId::A4Prime { n, k } => write!(f, "A4'(n={n},k={k})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("{schema} takes {expected} components, got {found}")]
    Arity {
        schema: SchemaId,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Parameter(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("sequences have different lengths: {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Fills a schema with components.
///
/// ```
/// use qualprob::axioms::{instantiate, SchemaId};
/// use qualprob::formula::parse;
///
/// let l1 = instantiate(SchemaId::L1, &[parse("p").unwrap()]).unwrap();
/// assert_eq!(l1, parse("p >= p").unwrap());
/// assert_eq!(instantiate(SchemaId::A3, &[]).unwrap(), parse("~(F >= T)").unwrap());
/// ```
pub fn instantiate(schema: SchemaId, components: &[Formula]) -> Result<Formula, AxiomError> {
    schema.check_parameters()?;
    if components.len() != schema.arity() {
        return Err(AxiomError::Arity {
            schema,
            expected: schema.arity(),
            found: components.len(),
        });
    }
    let c = |i: usize| components[i].clone();
    let geq = Formula::geq;
    Ok(match schema {
        SchemaId::L1 | SchemaId::A2 => geq(c(0), c(0)),
        SchemaId::L2 => Formula::implies(
            geq(Formula::Bot, Formula::and(c(1), Formula::not(c(0)))),
            geq(c(0), c(1)),
        ),
        SchemaId::L3 => Formula::implies(
            Formula::and(geq(c(0), c(1)), geq(c(1), c(2))),
            geq(c(0), c(2)),
        ),
        SchemaId::L4 => Formula::implies(
            Formula::and(geq(c(0), c(1)), geq(c(0), c(2))),
            geq(c(0), Formula::or(c(1), c(2))),
        ),
        SchemaId::I1 => {
            let g = geq(c(0), c(1));
            Formula::implies(g.clone(), geq(g, Formula::Top))
        }
        SchemaId::I2 => {
            let g = Formula::not(geq(c(0), c(1)));
            Formula::implies(g.clone(), geq(g, Formula::Top))
        }
        SchemaId::A0 => Formula::or(geq(c(0), c(1)), geq(c(1), c(0))),
        SchemaId::A1 => geq(c(0), Formula::Bot),
        SchemaId::A3 => Formula::not(geq(Formula::Bot, Formula::Top)),
        SchemaId::A4 { n } => cancellation(components, n, 1)?,
        SchemaId::A4Prime { n, k } => cancellation(components, n, k)?,
    })
}

fn cancellation(components: &[Formula], n: usize, k: usize) -> Result<Formula, AxiomError> {
    let (phis, rest) = components.split_at(n);
    let (psis, primes) = rest.split_at(n);
    let (phi_p, psi_p) = (&primes[0], &primes[1]);
    let mut left = phis.to_vec();
    left.extend(std::iter::repeat_n(phi_p.clone(), k));
    let mut right = psis.to_vec();
    right.extend(std::iter::repeat_n(psi_p.clone(), k));
    let same_count = build_equinumerosity(&left, &right)?;
    let premises = phis
        .iter()
        .zip(psis)
        .map(|(a, b)| Formula::geq(a.clone(), b.clone()))
        .chain(std::iter::once(Formula::geq(same_count, Formula::Top)));
    Ok(Formula::implies(
        Formula::big_and(premises),
        Formula::geq(psi_p.clone(), phi_p.clone()),
    ))
}

/// `⟨E₁,…⟩ =₀ ⟨F₁,…⟩`: every state lies in as many `Eᵢ` as `Fᵢ`.
///
/// ```
/// use fixedbitset::FixedBitSet;
/// use qualprob::axioms::balanced;
///
/// let set = |xs: &[usize]| {
///     let mut s = FixedBitSet::with_capacity(2);
///     xs.iter().for_each(|&x| s.insert(x));
///     s
/// };
/// assert!(balanced(&[set(&[0]), set(&[1])], &[set(&[0, 1]), set(&[])]).unwrap());
/// assert!(!balanced(&[set(&[0])], &[set(&[1])]).unwrap());
/// ```
pub fn balanced(lhs: &[FixedBitSet], rhs: &[FixedBitSet]) -> Result<bool, AxiomError> {
    if lhs.len() != rhs.len() {
        return Err(AxiomError::LengthMismatch {
            left: lhs.len(),
            right: rhs.len(),
        });
    }
    let width = lhs.iter().chain(rhs).map(FixedBitSet::len).max().unwrap_or(0);
    let mut counts = vec![0i64; width];
    for s in lhs {
        s.ones().for_each(|x| counts[x] += 1);
    }
    for s in rhs {
        s.ones().for_each(|x| counts[x] -= 1);
    }
    Ok(counts.iter().all(|&c| c == 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    /// Preferential models under inflationary functions.
    IL,
    /// Sharp probability: one measure, or counting.
    SP,
    /// Imprecise probability: sets of measures, or inflationary injections.
    IP,
}

impl Logic {
    /// The schemas of the logic with cancellation arities up to `max_n`
    /// and copy counts up to `max_k`.
    pub fn schemas(self, max_n: usize, max_k: usize) -> Vec<SchemaId> {
        use SchemaId::*;
        let mut out = match self {
            Logic::IL => vec![L1, L2, L3, L4, I1, I2],
            Logic::SP => vec![A0, A1, A2, A3, I1, I2],
            Logic::IP => vec![A1, A2, A3, I1, I2],
        };
        for n in 1..=max_n {
            match self {
                Logic::IL => {}
                Logic::SP => out.push(A4 { n }),
                Logic::IP => out.extend((1..=max_k).map(|k| A4Prime { n, k })),
            }
        }
        out
    }

    /// The semantics under which the logic is sound for the model kind it
    /// is audited against.
    pub fn semantics(self) -> Semantics {
        match self {
            Logic::IL => Semantics::Function,
            Logic::SP => Semantics::Cardinality,
            Logic::IP => Semantics::Injection,
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "IL" => Ok(Logic::IL),
            "SP" => Ok(Logic::SP),
            "IP" => Ok(Logic::IP),
            _ => Err(format!("unknown logic `{s}` (expected IL, SP or IP)")),
        }
    }
}

/// A filled schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance {
    pub schema: SchemaId,
    pub components: Vec<Formula>,
    pub formula: Formula,
}

/// How [`sample_instances`] draws components.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    /// Components are depth-0 formulas over these letters.
    pub letters: Vec<String>,
    pub max_length: usize,
    pub max_n: usize,
    pub max_k: usize,
    /// Probability that a cancellation instance is drawn with components
    /// whose equinumerosity premise holds at every state, so that the
    /// conclusion is actually exercised.
    pub balanced_bias: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            letters: random::letters(3),
            max_length: 12,
            max_n: 3,
            max_k: 3,
            balanced_bias: 0.5,
        }
    }
}

fn minterms(letters: &[String], table: u32) -> Formula {
    Formula::big_or((0..1u32 << letters.len()).filter(|v| table >> v & 1 == 1).map(|v| {
        Formula::big_and(letters.iter().enumerate().map(|(i, p)| {
            let a = Formula::atom(p);
            if v >> i & 1 == 1 {
                a
            } else {
                Formula::not(a)
            }
        }))
    }))
}

/// Components `φ₁..φₙ, ψ₁..ψₙ, φ′, ψ′` whose sequences (with `k` copies of
/// the primed formulas) are balanced at every valuation, so the
/// equinumerosity premise is a tautology.
fn balanced_components<R: Rng + ?Sized>(
    rng: &mut R,
    letters: &[String],
    n: usize,
    k: usize,
) -> Vec<Formula> {
    let rows = 1u32 << letters.len();
    let es: Vec<u32> = (0..n).map(|_| rng.random_range(0..1 << rows)).collect();
    let a: u32 = rng.random_range(0..1 << rows);
    let mut fs = vec![0u32; n];
    let mut b = 0u32;
    let mut slots: Vec<usize> = (0..n).collect();
    for v in 0..rows {
        let bit = |t: u32| (t >> v & 1) as usize;
        let c = es.iter().map(|&e| bit(e)).sum::<usize>() + k * bit(a);
        let in_b = if c > n {
            true
        } else if c < k {
            false
        } else {
            rng.random_bool(0.5)
        };
        let rest = c - if in_b { k } else { 0 };
        if in_b {
            b |= 1 << v;
        }
        slots.shuffle(rng);
        for &i in &slots[..rest] {
            fs[i] |= 1 << v;
        }
    }
    es.iter()
        .chain(&fs)
        .chain([&a, &b])
        .map(|&t| minterms(letters, t))
        .collect()
}

/// Draws `count` random instances of the logic's schemas.
pub fn sample_instances<R: Rng + ?Sized>(
    rng: &mut R,
    logic: Logic,
    config: &SampleConfig,
    count: usize,
) -> Result<Vec<AxiomInstance>, AxiomError> {
    let schemas = logic.schemas(config.max_n, config.max_k);
    let shape = FormulaShape {
        letters: config.letters.clone(),
        max_length: config.max_length,
        max_depth: 0,
        constants: true,
    };
    (0..count)
        .map(|i| {
            let schema = schemas[i % schemas.len()];
            let components = match schema {
                SchemaId::A4 { n } | SchemaId::A4Prime { n, .. }
                    if rng.random_bool(config.balanced_bias) =>
                {
                    let k = match schema {
                        SchemaId::A4Prime { k, .. } => k,
                        _ => 1,
                    };
                    balanced_components(rng, &config.letters, n, k)
                }
                _ => (0..schema.arity())
                    .map(|_| random::formula(rng, &shape))
                    .collect(),
            };
            let formula = instantiate(schema, &components)?;
            Ok(AxiomInstance {
                schema,
                components,
                formula,
            })
        })
        .collect()
}

/// An instance that fails somewhere in a model.
#[derive(Debug, Clone)]
pub struct SoundnessViolation {
    pub schema: SchemaId,
    pub formula: Formula,
    pub state: String,
    pub trace: Vec<ComparisonTrace>,
}

impl fmt::Display for SoundnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} fails at {}: {}", self.schema, self.state, self.formula)?;
        for t in &self.trace {
            writeln!(f, "  {t}")?;
        }
        Ok(())
    }
}

/// Evaluates every instance at every state of `model` under `semantics` and
/// returns the failures, each with its comparison trace.
pub fn audit_instances(
    model: &Model,
    semantics: Semantics,
    instances: &[AxiomInstance],
) -> Result<Vec<SoundnessViolation>, EvalError> {
    let ev = Evaluator::new(model, semantics)?;
    let mut out = Vec::new();
    for inst in instances {
        let (holds, trace) = ev.trace(&inst.formula)?;
        if let Some(state) = (0..model.states().len()).find(|&i| !holds.contains(i)) {
            out.push(SoundnessViolation {
                schema: inst.schema,
                formula: inst.formula.clone(),
                state: model.states().name(state).to_string(),
                trace,
            });
        }
    }
    Ok(out)
}

/// Samples `budget` instances of `logic` and audits them in `model` under
/// the logic's own semantics. An empty result is expected.
pub fn audit_soundness<R: Rng + ?Sized>(
    rng: &mut R,
    model: &Model,
    logic: Logic,
    budget: usize,
    config: &SampleConfig,
) -> Result<Vec<SoundnessViolation>, AuditError> {
    let instances = sample_instances(rng, logic, config, budget)?;
    Ok(audit_instances(model, logic.semantics(), &instances)?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
