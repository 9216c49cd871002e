//! Translations from measure models to counting and preferential models.
//!
//! [`lemma4`] turns a single exact measure into a distinguished-state model:
//! scaling by the common denominator gives every state an integer weight,
//! and a state of weight `n` becomes `n` equally labelled states in `W₊`.
//!
//! [`lemma5`] turns any finite multi-measure model into a preferential model
//! whose preorder is total on its field. Each measure is first counted out as
//! above, giving one block per measure. Blocks are then stacked in layers:
//! every state of layer `i` is copied once more than the whole population of
//! the layers before it, and lower layers sit above higher ones. A failed
//! comparison in some block then outnumbers everything an inflationary
//! injection could borrow from above.
//!
//! [`audit_equivalence`] checks the translations on a formula list.
//! Comparisons have the same value at every state, so agreement on every
//! propositional formula and every comparison between propositional formulas
//! over the model's letters covers all formulas of depth at most one, which
//! [`template_formulas`] enumerates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::formula::Formula;
use crate::models::{
    DistinguishedStateModel, Model, ModelError, MultiMeasureModel, PreferentialModel,
};
use crate::semantics::{EvalError, Evaluator, Semantics};

/// Most measures [`lemma5`] accepts.
pub const LEMMA5_MAX_MEASURES: usize = 3;
/// Most source states [`lemma5`] accepts.
pub const LEMMA5_MAX_STATES: usize = 4;
/// Largest model either translation builds.
pub const MAX_OUTPUT_STATES: usize = 100_000;

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error("expected a single measure, found {0}")]
    NotSingleMeasure(usize),
    #[error("at most {limit} {what} are supported, got {found}")]
    Capacity {
        what: &'static str,
        found: usize,
        limit: usize,
    },
    #[error("the state map misses source state `{0}`")]
    StateMap(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Name of a copied state: `origin#layer.index`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CopyTag {
    pub origin: String,
    pub layer: usize,
    pub index: usize,
}

impl fmt::Display for CopyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}.{}", self.origin, self.layer, self.index)
    }
}

impl FromStr for CopyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<CopyTag, String> {
        let bad = || format!("`{s}` is not of the form origin#layer.index");
        let (origin, rest) = s.rsplit_once('#').ok_or_else(bad)?;
        let (layer, index) = rest.split_once('.').ok_or_else(bad)?;
        Ok(CopyTag {
            origin: origin.to_string(),
            layer: layer.parse().map_err(|_| bad())?,
            index: index.parse().map_err(|_| bad())?,
        })
    }
}

/// Result of [`lemma4`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingModel {
    pub model: DistinguishedStateModel,
    /// Origin of every state, by index. Source states are their own copy 0.
    pub tags: Vec<CopyTag>,
    /// Common denominator of the weights, equal to `|W₊|`.
    pub scale: usize,
}

/// Result of [`lemma5`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredModel {
    pub model: PreferentialModel,
    /// Tag of every state, by index; also its name.
    pub tags: Vec<CopyTag>,
    /// Number of states in each layer.
    pub layer_sizes: Vec<usize>,
    /// Source state to the target state that mirrors it.
    pub state_map: BTreeMap<String, String>,
}

impl LayeredModel {
    /// Layer of a target state.
    pub fn layer_of(&self, state: usize) -> usize {
        self.tags[state].layer
    }
}

/// Integer weights of a measure and their total.
fn integerize(weights: &[crate::models::Rational]) -> Result<(Vec<usize>, usize), TransformError> {
    let scale = weights
        .iter()
        .fold(BigInt::one(), |d, w| d.lcm(w.denom()));
    let too_big = |found: &BigInt| TransformError::Capacity {
        what: "output states",
        found: found.to_usize().unwrap_or(usize::MAX),
        limit: MAX_OUTPUT_STATES,
    };
    if scale > BigInt::from(MAX_OUTPUT_STATES) {
        return Err(too_big(&scale));
    }
    let counts = weights
        .iter()
        .map(|w| (w.numer() * (&scale / w.denom())).to_usize().expect("bounded by scale"))
        .collect();
    Ok((counts, scale.to_usize().expect("checked above")))
}

/// Counts out a single-measure model. Every source state keeps its name and
/// valuation; a state of integer weight `n ≥ 1` is in `W₊` together with
/// `n - 1` copies named `w#0.1`, `w#0.2`, and so on. Zero-weight states stay
/// outside `W₊`.
///
/// ```
/// use qualprob::models::Model;
/// use qualprob::transform::lemma4;
///
/// let m = Model::from_json(r#"{"type":"multimeasure","states":["w1","w2"],
///     "measures":[{"w1":"2/3","w2":"1/3"}],"valuation":{"p":["w1"]}}"#).unwrap();
/// let Model::MultiMeasure(m) = m else { unreachable!() };
/// let out = lemma4(&m).unwrap();
/// assert_eq!(out.scale, 3);
/// assert_eq!(out.model.states().names(), ["w1", "w2", "w1#0.1"]);
/// ```
pub fn lemma4(m: &MultiMeasureModel) -> Result<CountingModel, TransformError> {
    if m.measures().len() != 1 {
        return Err(TransformError::NotSingleMeasure(m.measures().len()));
    }
    let (counts, scale) = integerize(m.measures()[0].weights())?;
    let source = m.states().names();
    let total = source.len() + scale - counts.iter().filter(|&&c| c > 0).count();
    if total > MAX_OUTPUT_STATES {
        return Err(TransformError::Capacity {
            what: "output states",
            found: total,
            limit: MAX_OUTPUT_STATES,
        });
    }
    let mut tags: Vec<CopyTag> = source
        .iter()
        .map(|w| CopyTag {
            origin: w.clone(),
            layer: 0,
            index: 0,
        })
        .collect();
    let mut origin_of: Vec<usize> = (0..source.len()).collect();
    for (w, &c) in counts.iter().enumerate() {
        for index in 1..c {
            tags.push(CopyTag {
                origin: source[w].clone(),
                layer: 0,
                index,
            });
            origin_of.push(w);
        }
    }
    let n = tags.len();
    let mut plus = FixedBitSet::with_capacity(n);
    for (x, &w) in origin_of.iter().enumerate() {
        if counts[w] > 0 {
            plus.insert(x);
        }
    }
    let names: Vec<String> = tags
        .iter()
        .enumerate()
        .map(|(x, t)| if x < source.len() { t.origin.clone() } else { t.to_string() })
        .collect();
    let valuation = copy_valuation(m.valuation().iter(), &origin_of);
    let model = DistinguishedStateModel::from_indexed(names, plus, valuation)?;
    Ok(CountingModel { model, tags, scale })
}

fn copy_valuation<'a>(
    source: impl Iterator<Item = (&'a str, &'a FixedBitSet)>,
    origin_of: &[usize],
) -> BTreeMap<String, FixedBitSet> {
    source
        .map(|(p, set)| {
            let mut out = FixedBitSet::with_capacity(origin_of.len());
            for (x, &w) in origin_of.iter().enumerate() {
                if set.contains(w) {
                    out.insert(x);
                }
            }
            (p.to_string(), out)
        })
        .collect()
}

/// Builds a preferential model with a total preorder that agrees with `m`
/// under injection semantics. Source state `w` is mirrored by `w#0.0`.
///
/// Layer `i` counts out measure `i` and repeats each of its states
/// `1 + (size of layers 0..i)` times. The copy index within a layer runs
/// over the counted-out copies first and the repetitions second. The field
/// holds the copies of positive-weight states, and `x ⪰ y` on the field iff
/// `x` sits in a layer no higher than `y`.
///
/// ```
/// use qualprob::models::Model;
/// use qualprob::transform::lemma5;
///
/// let m = Model::from_json(r#"{"type":"multimeasure","states":["u","v"],
///     "measures":[{"u":"1/2","v":"1/2"},{"u":"1/2","v":"1/2"}],
///     "valuation":{"p":["u"]}}"#).unwrap();
/// let Model::MultiMeasure(m) = m else { unreachable!() };
/// let out = lemma5(&m).unwrap();
/// assert_eq!(out.layer_sizes, vec![2, 6]);
/// assert_eq!(out.state_map["u"], "u#0.0");
/// ```
pub fn lemma5(m: &MultiMeasureModel) -> Result<LayeredModel, TransformError> {
    let measures = m.measures().len();
    if measures > LEMMA5_MAX_MEASURES {
        return Err(TransformError::Capacity {
            what: "measures",
            found: measures,
            limit: LEMMA5_MAX_MEASURES,
        });
    }
    let source = m.states().names();
    if source.len() > LEMMA5_MAX_STATES {
        return Err(TransformError::Capacity {
            what: "source states",
            found: source.len(),
            limit: LEMMA5_MAX_STATES,
        });
    }
    // Per measure: (source state, positive) for each counted-out state.
    let mut blocks: Vec<Vec<(usize, bool)>> = Vec::with_capacity(measures);
    for measure in m.measures() {
        let (counts, _) = integerize(measure.weights())?;
        let mut block: Vec<(usize, bool)> = (0..source.len()).map(|w| (w, counts[w] > 0)).collect();
        for (w, &c) in counts.iter().enumerate() {
            block.extend((1..c).map(|_| (w, true)));
        }
        blocks.push(block);
    }
    let mut layer_sizes = Vec::with_capacity(measures);
    let mut below = 0usize;
    for block in &blocks {
        let size = block
            .len()
            .checked_mul(below + 1)
            .filter(|&s| below + s <= MAX_OUTPUT_STATES)
            .ok_or(TransformError::Capacity {
                what: "output states",
                found: MAX_OUTPUT_STATES + 1,
                limit: MAX_OUTPUT_STATES,
            })?;
        layer_sizes.push(size);
        below += size;
    }

    let mut tags = Vec::with_capacity(below);
    let mut origin_of = Vec::with_capacity(below);
    let mut positive = Vec::with_capacity(below);
    let mut prefix = 0;
    for (layer, block) in blocks.iter().enumerate() {
        let repeats = prefix + 1;
        let mut next_index = vec![0usize; source.len()];
        for &(w, pos) in block {
            for _ in 0..repeats {
                tags.push(CopyTag {
                    origin: source[w].clone(),
                    layer,
                    index: next_index[w],
                });
                next_index[w] += 1;
                origin_of.push(w);
                positive.push(pos);
            }
        }
        prefix += layer_sizes[layer];
    }
    let n = tags.len();
    let mut field = FixedBitSet::with_capacity(n);
    for (x, &pos) in positive.iter().enumerate() {
        if pos {
            field.insert(x);
        }
    }
    // A total preorder by layer: each field state points at one
    // representative of its own layer and every representative points at
    // the next lower layer's representative.
    let mut representatives: Vec<Option<usize>> = vec![None; measures];
    let mut generators = Vec::new();
    for x in field.ones() {
        match representatives[tags[x].layer] {
            Some(r) => {
                generators.push((r, x));
                generators.push((x, r));
            }
            None => representatives[tags[x].layer] = Some(x),
        }
    }
    let reps: Vec<usize> = representatives.into_iter().flatten().collect();
    generators.extend(reps.windows(2).map(|w| (w[0], w[1])));

    let names: Vec<String> = tags.iter().map(CopyTag::to_string).collect();
    let valuation = copy_valuation(m.valuation().iter(), &origin_of);
    let model = PreferentialModel::from_indexed(names, field, generators, valuation)?;
    let state_map = source
        .iter()
        .map(|w| {
            let tag = CopyTag {
                origin: w.clone(),
                layer: 0,
                index: 0,
            };
            (w.clone(), tag.to_string())
        })
        .collect();
    Ok(LayeredModel {
        model,
        tags,
        layer_sizes,
        state_map,
    })
}

/// A formula whose value differs between a source state and its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub formula: Formula,
    pub source_state: String,
    pub target_state: String,
    pub source_value: bool,
}

/// Outcome of [`audit_equivalence`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Number of (formula, state) pairs compared.
    pub checks: usize,
    pub disagreements: Vec<Disagreement>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Evaluates every formula at every source state and at its image under
/// `state_map`, and lists the pairs that disagree.
pub fn audit_equivalence(
    source: &Model,
    source_semantics: Semantics,
    target: &Model,
    target_semantics: Semantics,
    state_map: &BTreeMap<String, String>,
    formulas: &[Formula],
) -> Result<EquivalenceReport, TransformError> {
    let src = Evaluator::new(source, source_semantics)?;
    let tgt = Evaluator::new(target, target_semantics)?;
    let mut pairs = Vec::with_capacity(source.states().len());
    for name in source.states().names() {
        let image = state_map
            .get(name)
            .ok_or_else(|| TransformError::StateMap(name.clone()))?;
        let t = target
            .states()
            .index_of(image)
            .ok_or_else(|| EvalError::UnknownState(image.clone()))?;
        let s = source.states().index_of(name).expect("listed state");
        pairs.push((s, t));
    }
    let mut report = EquivalenceReport::default();
    for f in formulas {
        let a = src.satisfying(f)?;
        let b = tgt.satisfying(f)?;
        for &(s, t) in &pairs {
            report.checks += 1;
            if a.contains(s) != b.contains(t) {
                report.disagreements.push(Disagreement {
                    formula: f.clone(),
                    source_state: source.states().name(s).to_string(),
                    target_state: target.states().name(t).to_string(),
                    source_value: a.contains(s),
                });
            }
        }
    }
    Ok(report)
}

/// Every propositional formula over `letters` up to equivalence, written in
/// full disjunctive form with `⊤` and `⊥` for the extremes, followed by
/// every comparison between two of them.
///
/// ```
/// use qualprob::transform::template_formulas;
///
/// assert_eq!(template_formulas(&["p"]).len(), 4 + 16);
/// assert_eq!(template_formulas(&["p", "q"]).len(), 16 + 256);
/// ```
pub fn template_formulas<S: AsRef<str>>(letters: &[S]) -> Vec<Formula> {
    let k = letters.len();
    let rows = 1usize << k;
    assert!(rows <= 16, "templates cover at most four letters");
    let minterm = |row: usize| {
        Formula::big_and((0..k).map(|i| {
            let p = Formula::atom(letters[i].as_ref());
            if row >> i & 1 == 1 {
                p
            } else {
                Formula::not(p)
            }
        }))
    };
    let full = (1u64 << rows) - 1;
    let bases: Vec<Formula> = (0..=full)
        .map(|table| match table {
            0 => Formula::Bot,
            t if t == full => Formula::Top,
            t => Formula::big_or((0..rows).filter(|r| t >> r & 1 == 1).map(minterm)),
        })
        .collect();
    let mut out = bases.clone();
    for a in &bases {
        for b in &bases {
            out.push(Formula::geq(a.clone(), b.clone()));
        }
    }
    out
}
