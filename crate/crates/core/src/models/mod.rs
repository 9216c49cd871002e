//! Finite models: preferential, multi-measure and distinguished-state.
//!
//! All three share a named state space and a valuation. Models are immutable
//! once built; every constructor checks the type's invariants and reports
//! each violation it finds.

mod file;
mod preorder;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

pub use file::{DistinguishedSpec, ModelSpec, MultiMeasureSpec, PreferentialSpec};
pub use preorder::{preorder_violations, Preorder};

/// Exact rational weights.
pub type Rational = num_rational::BigRational;

/// Renders a rational as `num/den`, the form used in model files.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Reads `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid model:\n{0}")]
    Invalid(ValidationReport),
    #[error("order pair ({0}, {1}) lies outside the distinguished field")]
    PairOutsideField(usize, usize),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
}

/// One broken invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    DuplicateState(String),
    UnknownState { context: String, state: String },
    EmptyField,
    OrderOutsideField { above: String, below: String },
    NotPreorder(String),
    EmptyPlus,
    NoMeasures,
    BadWeight { measure: usize, state: String, text: String },
    NegativeWeight { measure: usize, state: String, weight: String },
    BadSum { measure: usize, sum: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "W must be nonempty"),
            Violation::DuplicateState(s) => write!(f, "state `{s}` is listed twice"),
            Violation::UnknownState { context, state } => {
                write!(f, "{context} mentions unknown state `{state}`")
            }
            Violation::EmptyField => write!(f, "W_⪰ must be nonempty"),
            Violation::OrderOutsideField { above, below } => {
                write!(f, "order pair ({above}, {below}) is not inside W_⪰")
            }
            Violation::NotPreorder(msg) => write!(f, "{msg}"),
            Violation::EmptyPlus => write!(f, "W₊ must be nonempty"),
            Violation::NoMeasures => write!(f, "the set of measures must be nonempty"),
            Violation::BadWeight { measure, state, text } => {
                write!(f, "measure {measure}: weight `{text}` of `{state}` is not a rational")
            }
            Violation::NegativeWeight {
                measure,
                state,
                weight,
            } => write!(f, "measure {measure}: weight {weight} of `{state}` is negative"),
            Violation::BadSum { measure, sum } => {
                write!(f, "measure {measure}: weights sum to {sum}")
            }
        }
    }
}

/// Every violation found in a model; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Named states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl StateSpace {
    fn new(names: Vec<String>, report: &mut ValidationReport) -> StateSpace {
        if names.is_empty() {
            report.push(Violation::NoStates);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                report.push(Violation::DuplicateState(n.clone()));
            }
        }
        StateSpace { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The set of the named states.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<FixedBitSet, ModelError> {
        let mut set = FixedBitSet::with_capacity(self.len());
        for n in names {
            let i = self
                .index_of(n.as_ref())
                .ok_or_else(|| ModelError::UnknownState(n.as_ref().to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Names of the members of `set`, in state order.
    pub fn names_of(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|i| self.names[i].clone()).collect()
    }

    fn resolve(
        &self,
        names: &[String],
        context: &str,
        report: &mut ValidationReport,
    ) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        for n in names {
            match self.index_of(n) {
                Some(i) => set.insert(i),
                None => report.push(Violation::UnknownState {
                    context: context.to_string(),
                    state: n.clone(),
                }),
            }
        }
        set
    }
}

/// Proposition letter → set of states where it is true.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    letters: BTreeMap<String, FixedBitSet>,
}

impl Valuation {
    pub fn new(letters: BTreeMap<String, FixedBitSet>) -> Valuation {
        Valuation { letters }
    }

    pub fn get(&self, letter: &str) -> Option<&FixedBitSet> {
        self.letters.get(letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = &str> {
        self.letters.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FixedBitSet)> {
        self.letters.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn from_names(
        space: &StateSpace,
        spec: &BTreeMap<String, Vec<String>>,
        report: &mut ValidationReport,
    ) -> Valuation {
        let letters = spec
            .iter()
            .map(|(p, states)| {
                let ctx = format!("valuation of `{p}`");
                let mut set = space.resolve(states, &ctx, report);
                set.grow(space.len());
                (p.clone(), set)
            })
            .collect();
        Valuation { letters }
    }

    fn to_names(&self, space: &StateSpace) -> BTreeMap<String, Vec<String>> {
        self.letters
            .iter()
            .map(|(p, set)| (p.clone(), space.names_of(set)))
            .collect()
    }
}

/// A preorder on a nonempty distinguished subset of the states, with a
/// valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferentialModel {
    space: StateSpace,
    generators: Vec<(usize, usize)>,
    order: Preorder,
    valuation: Valuation,
}

impl PreferentialModel {
    /// Builds a model from indexed parts. `generators` are `(x, y)` pairs
    /// meaning `x ⪰ y`; the closure is computed here.
    pub fn from_indexed(
        names: Vec<String>,
        field: FixedBitSet,
        generators: Vec<(usize, usize)>,
        valuation: BTreeMap<String, FixedBitSet>,
    ) -> Result<PreferentialModel, ModelError> {
        let mut report = ValidationReport::default();
        let space = StateSpace::new(names, &mut report);
        if field.count_ones(..) == 0 {
            report.push(Violation::EmptyField);
        }
        if !report.is_valid() {
            return Err(ModelError::Invalid(report));
        }
        let order = Preorder::closure(space.len(), &field, &generators)?;
        let valuation = Valuation::new(
            valuation
                .into_iter()
                .map(|(p, mut s)| {
                    s.grow(space.len());
                    (p, s)
                })
                .collect(),
        );
        Ok(PreferentialModel {
            space,
            generators,
            order,
            valuation,
        })
    }

    pub fn states(&self) -> &StateSpace {
        &self.space
    }

    /// The distinguished field `W_⪰`.
    pub fn field(&self) -> &FixedBitSet {
        self.order.field()
    }

    pub fn order(&self) -> &Preorder {
        &self.order
    }

    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }
}

/// A probability measure as point weights on the states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, state: usize) -> &Rational {
        &self.weights[state]
    }

    /// `μ(event)`, the sum of the point weights in `event`.
    pub fn measure_of(&self, event: &FixedBitSet) -> Rational {
        event
            .ones()
            .filter(|&i| i < self.weights.len())
            .fold(Rational::zero(), |acc, i| acc + &self.weights[i])
    }
}

/// A nonempty finite set of probability measures over the states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMeasureModel {
    space: StateSpace,
    measures: Vec<Measure>,
    valuation: Valuation,
}

fn check_measures(space: &StateSpace, measures: &[Vec<Rational>], report: &mut ValidationReport) {
    if measures.is_empty() {
        report.push(Violation::NoMeasures);
    }
    for (m, weights) in measures.iter().enumerate() {
        for (i, w) in weights.iter().enumerate() {
            if w.is_negative() {
                report.push(Violation::NegativeWeight {
                    measure: m,
                    state: space.name(i).to_string(),
                    weight: format_rational(w),
                });
            }
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            report.push(Violation::BadSum {
                measure: m,
                sum: if sum.denom().is_one() {
                    sum.numer().to_string()
                } else {
                    format_rational(&sum)
                },
            });
        }
    }
}

impl MultiMeasureModel {
    /// Builds a model from indexed parts; each measure lists one weight per
    /// state.
    pub fn from_indexed(
        names: Vec<String>,
        measures: Vec<Vec<Rational>>,
        valuation: BTreeMap<String, FixedBitSet>,
    ) -> Result<MultiMeasureModel, ModelError> {
        let mut report = ValidationReport::default();
        let space = StateSpace::new(names, &mut report);
        if measures.iter().any(|m| m.len() != space.len()) {
            return Err(ModelError::StateOutOfRange(space.len()));
        }
        check_measures(&space, &measures, &mut report);
        if !report.is_valid() {
            return Err(ModelError::Invalid(report));
        }
        Ok(MultiMeasureModel {
            measures: measures.into_iter().map(|weights| Measure { weights }).collect(),
            valuation: Valuation::new(
                valuation
                    .into_iter()
                    .map(|(p, mut s)| {
                        s.grow(space.len());
                        (p, s)
                    })
                    .collect(),
            ),
            space,
        })
    }

    pub fn states(&self) -> &StateSpace {
        &self.space
    }

    pub fn measures(&self) -> &[Measure] {
        &self.measures
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    /// `μ(event)` for the measure at `index`, with the event given by state
    /// names.
    pub fn measure_of<S: AsRef<str>>(&self, index: usize, event: &[S]) -> Result<Rational, ModelError> {
        let set = self.space.set_of(event)?;
        Ok(self.measures[index].measure_of(&set))
    }
}

/// States with a nonempty distinguished subset `W₊`, compared by counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishedStateModel {
    space: StateSpace,
    plus: FixedBitSet,
    valuation: Valuation,
}

impl DistinguishedStateModel {
    pub fn from_indexed(
        names: Vec<String>,
        mut plus: FixedBitSet,
        valuation: BTreeMap<String, FixedBitSet>,
    ) -> Result<DistinguishedStateModel, ModelError> {
        let mut report = ValidationReport::default();
        let space = StateSpace::new(names, &mut report);
        if plus.count_ones(..) == 0 {
            report.push(Violation::EmptyPlus);
        }
        if plus.ones().any(|i| i >= space.len()) {
            return Err(ModelError::StateOutOfRange(space.len()));
        }
        if !report.is_valid() {
            return Err(ModelError::Invalid(report));
        }
        plus.grow(space.len());
        Ok(DistinguishedStateModel {
            valuation: Valuation::new(
                valuation
                    .into_iter()
                    .map(|(p, mut s)| {
                        s.grow(space.len());
                        (p, s)
                    })
                    .collect(),
            ),
            space,
            plus,
        })
    }

    pub fn states(&self) -> &StateSpace {
        &self.space
    }

    /// `W₊`.
    pub fn plus(&self) -> &FixedBitSet {
        &self.plus
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }
}

/// Any of the three model kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Preferential(PreferentialModel),
    MultiMeasure(MultiMeasureModel),
    Distinguished(DistinguishedStateModel),
}

impl Model {
    pub fn states(&self) -> &StateSpace {
        match self {
            Model::Preferential(m) => &m.space,
            Model::MultiMeasure(m) => &m.space,
            Model::Distinguished(m) => &m.space,
        }
    }

    pub fn valuation(&self) -> &Valuation {
        match self {
            Model::Preferential(m) => &m.valuation,
            Model::MultiMeasure(m) => &m.valuation,
            Model::Distinguished(m) => &m.valuation,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Preferential(_) => "preferential",
            Model::MultiMeasure(_) => "multimeasure",
            Model::Distinguished(_) => "distinguished",
        }
    }

    /// Loads a model file, rejecting malformed JSON, unknown keys and any
    /// invariant violation.
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let spec: ModelSpec = serde_json::from_str(text)?;
        Model::try_from(spec)
    }

    /// Pretty-printed model file. Output is deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_spec()).expect("model specs serialize");
        s.push('\n');
        s
    }

    pub fn to_spec(&self) -> ModelSpec {
        match self {
            Model::Preferential(m) => ModelSpec::Preferential(PreferentialSpec {
                states: m.space.names.clone(),
                distinguished: m.space.names_of(m.field()),
                order: m
                    .generators
                    .iter()
                    .map(|&(x, y)| (m.space.names[x].clone(), m.space.names[y].clone()))
                    .collect(),
                valuation: m.valuation.to_names(&m.space),
            }),
            Model::MultiMeasure(m) => ModelSpec::MultiMeasure(MultiMeasureSpec {
                states: m.space.names.clone(),
                measures: m
                    .measures
                    .iter()
                    .map(|mu| {
                        mu.weights
                            .iter()
                            .enumerate()
                            .filter(|(_, w)| !w.is_zero())
                            .map(|(i, w)| (m.space.names[i].clone(), format_rational(w)))
                            .collect()
                    })
                    .collect(),
                valuation: m.valuation.to_names(&m.space),
            }),
            Model::Distinguished(m) => ModelSpec::Distinguished(DistinguishedSpec {
                states: m.space.names.clone(),
                plus: m.space.names_of(&m.plus),
                valuation: m.valuation.to_names(&m.space),
            }),
        }
    }

    /// Re-checks the model's invariants through its file representation.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_spec())
    }
}

impl From<PreferentialModel> for Model {
    fn from(m: PreferentialModel) -> Self {
        Model::Preferential(m)
    }
}

impl From<MultiMeasureModel> for Model {
    fn from(m: MultiMeasureModel) -> Self {
        Model::MultiMeasure(m)
    }
}

impl From<DistinguishedStateModel> for Model {
    fn from(m: DistinguishedStateModel) -> Self {
        Model::Distinguished(m)
    }
}

/// Checks every invariant of a model description and names each violation.
///
/// ```
/// use qualprob::models::{validate, ModelSpec, MultiMeasureSpec};
///
/// let spec = ModelSpec::MultiMeasure(MultiMeasureSpec::new(
///     &["u", "v"],
///     &[&[("u", "1/2"), ("v", "1/3")]],
///     &[("p", &["u"])],
/// ));
/// let report = validate(&spec);
/// assert_eq!(report.violations[0].to_string(), "measure 0: weights sum to 5/6");
/// ```
pub fn validate(spec: &ModelSpec) -> ValidationReport {
    build(spec).err().unwrap_or_default()
}

/// Shared by [`validate`] and `TryFrom<ModelSpec>`: either a model or the
/// full list of violations.
fn build(spec: &ModelSpec) -> Result<Model, ValidationReport> {
    let mut report = ValidationReport::default();
    let model = match spec {
        ModelSpec::Preferential(s) => {
            let space = StateSpace::new(s.states.clone(), &mut report);
            let mut field = space.resolve(&s.distinguished, "distinguished set", &mut report);
            field.grow(space.len());
            if s.distinguished.is_empty() {
                report.push(Violation::EmptyField);
            }
            let mut generators = Vec::with_capacity(s.order.len());
            for (x, y) in &s.order {
                match (space.index_of(x), space.index_of(y)) {
                    (Some(a), Some(b)) if field.contains(a) && field.contains(b) => {
                        generators.push((a, b))
                    }
                    _ => report.push(Violation::OrderOutsideField {
                        above: x.clone(),
                        below: y.clone(),
                    }),
                }
            }
            let valuation = Valuation::from_names(&space, &s.valuation, &mut report);
            if !report.is_valid() {
                return Err(report);
            }
            let order = Preorder::closure(space.len(), &field, &generators)
                .expect("generators checked against the field");
            for msg in preorder_violations(order.field(), &order.pairs()) {
                report.push(Violation::NotPreorder(msg));
            }
            Model::Preferential(PreferentialModel {
                space,
                generators,
                order,
                valuation,
            })
        }
        ModelSpec::MultiMeasure(s) => {
            let space = StateSpace::new(s.states.clone(), &mut report);
            let mut measures = Vec::with_capacity(s.measures.len());
            for (m, weights) in s.measures.iter().enumerate() {
                let mut w = vec![Rational::zero(); space.len()];
                for (state, text) in weights {
                    let Some(i) = space.index_of(state) else {
                        report.push(Violation::UnknownState {
                            context: format!("measure {m}"),
                            state: state.clone(),
                        });
                        continue;
                    };
                    match parse_rational(text) {
                        Some(r) => w[i] = r,
                        None => report.push(Violation::BadWeight {
                            measure: m,
                            state: state.clone(),
                            text: text.clone(),
                        }),
                    }
                }
                measures.push(w);
            }
            check_measures(&space, &measures, &mut report);
            let valuation = Valuation::from_names(&space, &s.valuation, &mut report);
            Model::MultiMeasure(MultiMeasureModel {
                space,
                measures: measures.into_iter().map(|weights| Measure { weights }).collect(),
                valuation,
            })
        }
        ModelSpec::Distinguished(s) => {
            let space = StateSpace::new(s.states.clone(), &mut report);
            let mut plus = space.resolve(&s.plus, "W₊", &mut report);
            plus.grow(space.len());
            if s.plus.is_empty() {
                report.push(Violation::EmptyPlus);
            }
            let valuation = Valuation::from_names(&space, &s.valuation, &mut report);
            Model::Distinguished(DistinguishedStateModel {
                space,
                plus,
                valuation,
            })
        }
    };
    if report.is_valid() {
        Ok(model)
    } else {
        Err(report)
    }
}

impl TryFrom<ModelSpec> for Model {
    type Error = ModelError;

    fn try_from(spec: ModelSpec) -> Result<Self, Self::Error> {
        build(&spec).map_err(ModelError::Invalid)
    }
}

impl TryFrom<&ModelSpec> for Model {
    type Error = ModelError;

    fn try_from(spec: &ModelSpec) -> Result<Self, Self::Error> {
        build(spec).map_err(ModelError::Invalid)
    }
}
