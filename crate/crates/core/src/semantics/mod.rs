//! The four satisfaction relations.
//!
//! | tag            | model              | `φ ≿ ψ` holds iff                                   |
//! |----------------|--------------------|-----------------------------------------------------|
//! | `function`     | preferential       | every `b ∈ [[ψ]]` has some `a ∈ [[φ]]` with `a ⪰ b` |
//! | `injection`    | preferential       | an inflationary injection `[[ψ]] → [[φ]]` exists     |
//! | `multimeasure` | multi-measure      | `μ([[φ]]) ≥ μ([[ψ]])` for every `μ ∈ 𝒫`              |
//! | `cardinality`  | distinguished-state| `|[[φ]] ∩ W₊| ≥ |[[ψ]] ∩ W₊|`                        |
//!
//! Brackets range over the semantics' carrier: `W_⪰` for preferential models,
//! `W` for multi-measure models and `W₊` for distinguished-state models.
//! Atoms and Boolean connectives are answered at any state of `W`, while a
//! comparison has the same value at every state.

mod matching;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::formula::Formula;
use crate::models::{format_rational, Model};

pub use matching::{
    brute_force_injection, hopcroft_karp, inflationary_function, inflationary_injection,
    is_inflationary_injection, Injection, MatchingError, BRUTE_FORCE_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Function,
    Injection,
    MultiMeasure,
    Cardinality,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [
        Semantics::Function,
        Semantics::Injection,
        Semantics::MultiMeasure,
        Semantics::Cardinality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Function => "function",
            Semantics::Injection => "injection",
            Semantics::MultiMeasure => "multimeasure",
            Semantics::Cardinality => "cardinality",
        }
    }

    /// The model kind (as reported by [`Model::kind`]) this semantics reads.
    pub fn model_kind(self) -> &'static str {
        match self {
            Semantics::Function | Semantics::Injection => "preferential",
            Semantics::MultiMeasure => "multimeasure",
            Semantics::Cardinality => "distinguished",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|sem| sem.name() == s)
            .ok_or_else(|| {
                format!("unknown semantics `{s}` (expected function, injection, multimeasure or cardinality)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("atom `{0}` is not in the model's valuation")]
    UnknownAtom(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("{semantics} semantics needs a {expected} model, got a {found} model")]
    Mismatch {
        semantics: Semantics,
        expected: &'static str,
        found: &'static str,
    },
}

/// Why a comparison came out the way it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// The inflationary injection `b ↦ a` that makes the comparison true.
    Injection(Vec<(String, String)>),
    /// An inflationary map `b ↦ a` (not necessarily injective).
    Function(Vec<(String, String)>),
    /// A state of `[[ψ]]` dominated by nothing in `[[φ]]`.
    Uncovered(String),
    /// No injection exists; the sizes of the two brackets are reported.
    NoInjection { lhs: usize, rhs: usize },
    /// `(μ([[φ]]), μ([[ψ]]))` for each measure, rendered as `num/den`.
    Measures(Vec<(String, String)>),
    /// `(|[[φ]] ∩ W₊|, |[[ψ]] ∩ W₊|)`.
    Counts(usize, usize),
}

/// One comparison subformula with its value and evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonTrace {
    pub formula: Formula,
    pub holds: bool,
    pub evidence: Evidence,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = |v: &[(String, String)]| {
            v.iter()
                .map(|(b, a)| format!("{b}->{a}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Evidence::Injection(m) => write!(f, "injection {{{}}}", pairs(m)),
            Evidence::Function(m) => write!(f, "function {{{}}}", pairs(m)),
            Evidence::Uncovered(s) => write!(f, "nothing on the left dominates {s}"),
            Evidence::NoInjection { lhs, rhs } => write!(
                f,
                "no injection from the {rhs} right-hand states into the {lhs} left-hand states"
            ),
            Evidence::Measures(v) => {
                let parts: Vec<_> = v
                    .iter()
                    .enumerate()
                    .map(|(i, (l, r))| format!("measure {i}: {l} vs {r}"))
                    .collect();
                f.write_str(&parts.join("; "))
            }
            Evidence::Counts(l, r) => write!(f, "counts {l} vs {r}"),
        }
    }
}

impl fmt::Display for ComparisonTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "true" } else { "false" };
        write!(f, "{} is {verdict}: {}", self.formula, self.evidence)
    }
}

/// Evaluates formulas in one model under one semantics.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'m> {
    model: &'m Model,
    semantics: Semantics,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model, semantics: Semantics) -> Result<Evaluator<'m>, EvalError> {
        if model.kind() != semantics.model_kind() {
            return Err(EvalError::Mismatch {
                semantics,
                expected: semantics.model_kind(),
                found: model.kind(),
            });
        }
        Ok(Evaluator { model, semantics })
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// The states that comparisons quantify over.
    pub fn carrier(&self) -> FixedBitSet {
        match self.model {
            Model::Preferential(m) => m.field().clone(),
            Model::MultiMeasure(m) => {
                let mut all = FixedBitSet::with_capacity(m.states().len());
                all.insert_range(..);
                all
            }
            Model::Distinguished(m) => m.plus().clone(),
        }
    }

    /// Every state of `W` satisfying `f`.
    pub fn satisfying(&self, f: &Formula) -> Result<FixedBitSet, EvalError> {
        self.walk(f, &mut Walk::default())
    }

    /// `[[f]]`: the satisfying states within the carrier.
    pub fn truth_set(&self, f: &Formula) -> Result<FixedBitSet, EvalError> {
        let mut set = self.satisfying(f)?;
        set.intersect_with(&self.carrier());
        Ok(set)
    }

    /// Whether `f` holds at the named state.
    pub fn holds(&self, state: &str, f: &Formula) -> Result<bool, EvalError> {
        let index = self
            .model
            .states()
            .index_of(state)
            .ok_or_else(|| EvalError::UnknownState(state.to_string()))?;
        Ok(self.satisfying(f)?.contains(index))
    }

    /// Evaluates `f` and records every comparison met along the way, with
    /// evidence, innermost first.
    pub fn trace(&self, f: &Formula) -> Result<(FixedBitSet, Vec<ComparisonTrace>), EvalError> {
        let mut walk = Walk {
            log: Some(Vec::new()),
            ..Walk::default()
        };
        let set = self.walk(f, &mut walk)?;
        Ok((set, walk.log.unwrap_or_default()))
    }

    /// Decides `lhs ≿ rhs` for two brackets (subsets of the carrier).
    pub fn compare(&self, lhs: &FixedBitSet, rhs: &FixedBitSet) -> bool {
        self.compare_with_evidence(lhs, rhs, false).0
    }

    fn compare_with_evidence(
        &self,
        lhs: &FixedBitSet,
        rhs: &FixedBitSet,
        want_evidence: bool,
    ) -> (bool, Option<Evidence>) {
        let names = |map: &[(usize, usize)]| {
            let space = self.model.states();
            map.iter()
                .map(|&(b, a)| (space.name(b).to_string(), space.name(a).to_string()))
                .collect()
        };
        match (self.model, self.semantics) {
            (Model::Preferential(m), Semantics::Injection) => {
                let found = inflationary_injection(m.order(), rhs, lhs)
                    .expect("brackets lie inside the field");
                let evidence = want_evidence.then(|| match &found {
                    Some(map) => Evidence::Injection(names(map)),
                    None => Evidence::NoInjection {
                        lhs: lhs.count_ones(..),
                        rhs: rhs.count_ones(..),
                    },
                });
                (found.is_some(), evidence)
            }
            (Model::Preferential(m), _) => {
                let order = m.order();
                let mut map = Vec::new();
                for b in rhs.ones() {
                    match lhs.ones().find(|&a| order.geq(a, b)) {
                        Some(a) => map.push((b, a)),
                        None => {
                            let name = self.model.states().name(b).to_string();
                            return (false, want_evidence.then_some(Evidence::Uncovered(name)));
                        }
                    }
                }
                (true, want_evidence.then(|| Evidence::Function(names(&map))))
            }
            (Model::MultiMeasure(m), _) => {
                let values: Vec<_> = m
                    .measures()
                    .iter()
                    .map(|mu| (mu.measure_of(lhs), mu.measure_of(rhs)))
                    .collect();
                let holds = values.iter().all(|(l, r)| l >= r);
                let evidence = want_evidence.then(|| {
                    Evidence::Measures(
                        values
                            .iter()
                            .map(|(l, r)| (format_rational(l), format_rational(r)))
                            .collect(),
                    )
                });
                (holds, evidence)
            }
            (Model::Distinguished(_), _) => {
                let (l, r) = (lhs.count_ones(..), rhs.count_ones(..));
                (l >= r, want_evidence.then_some(Evidence::Counts(l, r)))
            }
        }
    }

    fn all(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.model.states().len());
        s.insert_range(..);
        s
    }

    /// Evaluates `f`. Subformulas shared through the same `Arc` are
    /// evaluated once per pass, so formulas built with heavy sharing cost
    /// their number of distinct nodes rather than their length.
    fn walk(&self, f: &Formula, walk: &mut Walk) -> Result<FixedBitSet, EvalError> {
        let n = self.model.states().len();
        let set = match f {
            Formula::Not(a) => {
                let mut s = self.child(a, walk)?;
                s.toggle_range(..);
                s
            }
            Formula::And(a, b) => {
                let mut s = self.child(a, walk)?;
                s.intersect_with(&self.child(b, walk)?);
                s
            }
            Formula::Geq(a, b) => {
                let carrier = walk.carrier.get_or_insert_with(|| self.carrier()).clone();
                let mut lhs = self.child(a, walk)?;
                lhs.intersect_with(&carrier);
                let mut rhs = self.child(b, walk)?;
                rhs.intersect_with(&carrier);
                let (holds, evidence) = self.compare_with_evidence(&lhs, &rhs, walk.log.is_some());
                if let (Some(log), Some(evidence)) = (walk.log.as_mut(), evidence) {
                    log.push(ComparisonTrace {
                        formula: f.clone(),
                        holds,
                        evidence,
                    });
                }
                if holds {
                    self.all()
                } else {
                    FixedBitSet::with_capacity(n)
                }
            }
            Formula::Top => self.all(),
            Formula::Bot => FixedBitSet::with_capacity(n),
            Formula::Atom(p) => self
                .model
                .valuation()
                .get(p)
                .cloned()
                .ok_or_else(|| EvalError::UnknownAtom(p.to_string()))?,
        };
        Ok(set)
    }

    /// Evaluates a subformula, reusing the result when the node is shared.
    fn child(&self, f: &Arc<Formula>, walk: &mut Walk) -> Result<FixedBitSet, EvalError> {
        if Arc::strong_count(f) == 1 {
            return self.walk(f, walk);
        }
        let key = Arc::as_ptr(f);
        if let Some(hit) = walk.memo.get(&key) {
            return Ok(hit.clone());
        }
        let set = self.walk(f, walk)?;
        walk.memo.insert(key, set.clone());
        Ok(set)
    }
}

/// State of one evaluation pass. Keys are node addresses, which stay valid
/// because the formula is borrowed for the whole pass.
#[derive(Default)]
struct Walk {
    memo: HashMap<*const Formula, FixedBitSet>,
    carrier: Option<FixedBitSet>,
    log: Option<Vec<ComparisonTrace>>,
}

/// Whether `f` holds at `state` of `model` under `semantics`.
///
/// ```
/// use qualprob::{eval, parse, Model, Semantics};
///
/// let model = Model::from_json(r#"{"type":"multimeasure","states":["u","v"],
///     "measures":[{"u":"3/5","v":"2/5"},{"u":"1/5","v":"4/5"}],
///     "valuation":{"p":["u"]}}"#).unwrap();
/// let comparable = parse("(p >= ~p) | (~p >= p)").unwrap();
/// assert!(!eval(&model, Semantics::MultiMeasure, "u", &comparable).unwrap());
/// ```
pub fn eval(model: &Model, semantics: Semantics, state: &str, f: &Formula) -> Result<bool, EvalError> {
    Evaluator::new(model, semantics)?.holds(state, f)
}

/// `[[f]]` under `semantics`, as state names.
pub fn truth_set(model: &Model, semantics: Semantics, f: &Formula) -> Result<Vec<String>, EvalError> {
    let set = Evaluator::new(model, semantics)?.truth_set(f)?;
    Ok(model.states().names_of(&set))
}
