//! Seeded generators for formulas, models and balanced-sequence instances.
//!
//! Every generator takes an explicit RNG so runs are reproducible; the
//! fuzzers and the CLI use [`rng`] to build a ChaCha8 generator from a seed.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::models::{
    DistinguishedStateModel, MultiMeasureModel, Preorder, PreferentialModel, Rational,
};
use crate::semantics::inflationary_injection;

/// The generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Proposition letters `p`, `q`, `r`, `s`, then `p4`, `p5`, ...
pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "p".to_string(),
            1 => "q".to_string(),
            2 => "r".to_string(),
            3 => "s".to_string(),
            _ => format!("p{i}"),
        })
        .collect()
}

/// State names `w0`, `w1`, ...
pub fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Shape of random formulas.
#[derive(Debug, Clone)]
pub struct FormulaShape {
    pub letters: Vec<String>,
    /// Upper bound on [`Formula::length`].
    pub max_length: usize,
    /// Upper bound on [`Formula::modal_depth`].
    pub max_depth: usize,
    /// Whether `⊤` and `⊥` may appear as leaves.
    pub constants: bool,
}

impl FormulaShape {
    pub fn propositional(letters: Vec<String>, max_length: usize) -> FormulaShape {
        FormulaShape {
            letters,
            max_length,
            max_depth: 0,
            constants: false,
        }
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    if shape.constants && rng.random_bool(0.1) {
        if rng.random_bool(0.5) {
            Formula::Top
        } else {
            Formula::Bot
        }
    } else {
        Formula::atom(shape.letters.choose(rng).expect("at least one letter"))
    }
}

fn grow<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape, budget: usize, depth: usize) -> Formula {
    if budget <= 1 {
        return leaf(rng, shape);
    }
    let split = |rng: &mut R| {
        let rest = budget - 1;
        let left = rng.random_range(0..=rest);
        (left.max(1), (rest - left).max(1))
    };
    match rng.random_range(0..10) {
        0..=1 => Formula::not(grow(rng, shape, budget - 1, depth)),
        2..=4 => {
            let (l, r) = split(rng);
            Formula::and(grow(rng, shape, l, depth), grow(rng, shape, r, depth))
        }
        5..=6 => {
            let (l, r) = split(rng);
            Formula::or(grow(rng, shape, l, depth), grow(rng, shape, r, depth))
        }
        7 => {
            let (l, r) = split(rng);
            Formula::implies(grow(rng, shape, l, depth), grow(rng, shape, r, depth))
        }
        _ if depth > 0 => {
            let (l, r) = split(rng);
            Formula::geq(
                grow(rng, shape, l, depth - 1),
                grow(rng, shape, r, depth - 1),
            )
        }
        _ => {
            let (l, r) = split(rng);
            Formula::and(grow(rng, shape, l, depth), grow(rng, shape, r, depth))
        }
    }
}

/// A random formula within `shape`. The target node count is drawn first,
/// then formulas are regenerated until the length bound holds.
pub fn formula<R: Rng + ?Sized>(rng: &mut R, shape: &FormulaShape) -> Formula {
    loop {
        let budget = rng.random_range(1..=(shape.max_length / 2).max(1));
        let f = grow(rng, shape, budget, shape.max_depth);
        if f.length() <= shape.max_length && f.modal_depth() <= shape.max_depth {
            return f;
        }
    }
}

/// A uniformly random subset of `0..n`, containing each element with
/// probability one half.
pub fn subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if rng.random_bool(0.5) {
            s.insert(i);
        }
    }
    s
}

/// Random subset of `within`.
pub fn subset_of<R: Rng + ?Sized>(rng: &mut R, within: &FixedBitSet) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(within.len());
    for i in within.ones() {
        if rng.random_bool(0.5) {
            s.insert(i);
        }
    }
    s
}

fn valuation<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    letters: &[String],
) -> BTreeMap<String, FixedBitSet> {
    letters
        .iter()
        .map(|p| (p.clone(), subset(rng, n)))
        .collect()
}

/// A random preorder over a random nonempty field inside `0..universe`, as
/// `(field, generators)`.
///
/// Generators come from a random DAG of strict edges along a shuffled order
/// of the field, plus occasional back edges that create ties. With `total`
/// set, states get random levels instead and every pair is related by level.
pub fn preorder<R: Rng + ?Sized>(
    rng: &mut R,
    universe: usize,
    total: bool,
) -> (FixedBitSet, Vec<(usize, usize)>) {
    let mut field = subset(rng, universe);
    if field.count_ones(..) == 0 {
        field.insert(rng.random_range(0..universe));
    }
    let mut members: Vec<usize> = field.ones().collect();
    members.shuffle(rng);
    let mut generators = Vec::new();
    if total {
        let levels = rng.random_range(1..=members.len());
        let level: Vec<usize> = members.iter().map(|_| rng.random_range(0..levels)).collect();
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                if i != j && level[i] <= level[j] {
                    generators.push((x, y));
                }
            }
        }
    } else {
        let density = rng.random_range(0.1..0.6);
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if rng.random_bool(density) {
                    generators.push((members[i], members[j]));
                }
                if rng.random_bool(0.08) {
                    generators.push((members[j], members[i]));
                }
            }
        }
    }
    generators.sort_unstable();
    generators.dedup();
    (field, generators)
}

/// A random preferential model with between 1 and `max_states` states.
/// Roughly a third of the preorders are total.
pub fn preferential<R: Rng + ?Sized>(
    rng: &mut R,
    max_states: usize,
    letters: &[String],
) -> PreferentialModel {
    let n = rng.random_range(1..=max_states);
    let total = rng.random_bool(1.0 / 3.0);
    let (field, generators) = preorder(rng, n, total);
    let val = valuation(rng, n, letters);
    PreferentialModel::from_indexed(state_names(n), field, generators, val)
        .expect("generated preorders are well formed")
}

/// A random point-mass measure on `n` states whose weights have denominators
/// dividing some `d ≤ max_denominator`.
pub fn measure<R: Rng + ?Sized>(rng: &mut R, n: usize, max_denominator: u64) -> Vec<Rational> {
    let d = rng.random_range(1..=max_denominator.max(1));
    // Split d units among n states by sorted cut points.
    let mut cuts: Vec<u64> = (0..n.saturating_sub(1)).map(|_| rng.random_range(0..=d)).collect();
    cuts.push(0);
    cuts.push(d);
    cuts.sort_unstable();
    let mut parts: Vec<u64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    parts.shuffle(rng);
    parts
        .into_iter()
        .map(|k| Rational::new(k.into(), d.into()))
        .collect()
}

/// A random multi-measure model with `1..=max_states` states and
/// `1..=max_measures` measures.
pub fn multimeasure<R: Rng + ?Sized>(
    rng: &mut R,
    max_states: usize,
    max_measures: usize,
    max_denominator: u64,
    letters: &[String],
) -> MultiMeasureModel {
    let n = rng.random_range(1..=max_states);
    let m = rng.random_range(1..=max_measures);
    let measures = (0..m).map(|_| measure(rng, n, max_denominator)).collect();
    let val = valuation(rng, n, letters);
    MultiMeasureModel::from_indexed(state_names(n), measures, val)
        .expect("generated measures are normalized")
}

/// A random distinguished-state model with `1..=max_states` states.
pub fn distinguished<R: Rng + ?Sized>(
    rng: &mut R,
    max_states: usize,
    letters: &[String],
) -> DistinguishedStateModel {
    let n = rng.random_range(1..=max_states);
    let mut plus = subset(rng, n);
    if plus.count_ones(..) == 0 {
        plus.insert(rng.random_range(0..n));
    }
    let val = valuation(rng, n, letters);
    DistinguishedStateModel::from_indexed(state_names(n), plus, val)
        .expect("generated models are well formed")
}

/// A balanced-sequence instance
/// `⟨E₁,…,Eₙ, A×r⟩ =₀ ⟨F₁,…,Fₙ, B×r⟩` over a preorder, with an
/// inflationary injection `Fᵢ → Eᵢ` for every `i`.
#[derive(Debug, Clone)]
pub struct BalancedInstance {
    pub order: Preorder,
    pub es: Vec<FixedBitSet>,
    pub fs: Vec<FixedBitSet>,
    pub a: FixedBitSet,
    pub b: FixedBitSet,
    pub r: usize,
}

impl BalancedInstance {
    /// The left sequence `⟨E₁,…,Eₙ, A,…,A⟩`.
    pub fn lhs(&self) -> Vec<FixedBitSet> {
        let mut v = self.es.clone();
        v.extend(std::iter::repeat_n(self.a.clone(), self.r));
        v
    }

    /// The right sequence `⟨F₁,…,Fₙ, B,…,B⟩`.
    pub fn rhs(&self) -> Vec<FixedBitSet> {
        let mut v = self.fs.clone();
        v.extend(std::iter::repeat_n(self.b.clone(), self.r));
        v
    }
}

/// Tries once to build a [`BalancedInstance`] with `|W| ≤ max_states`,
/// `1 ≤ n ≤ max_n` and `1 ≤ r ≤ max_r`. Returns `None` when the random
/// draw cannot be completed to a balanced pair; callers simply retry.
///
/// Each `Fᵢ` is built by sending a random part of `Eᵢ` to distinct states
/// below it, so the required injections exist by construction. The
/// imbalance `D(s) = #{i : s ∈ Eᵢ} − #{i : s ∈ Fᵢ}` must then lie in
/// `{−r, 0, r}`, and `A`, `B` absorb it: `A ⊇ {D = −r}`, `B ⊇ {D = r}`,
/// with a random common part drawn from `{D = 0}`.
pub fn balanced_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_states: usize,
    max_n: usize,
    max_r: usize,
) -> Option<BalancedInstance> {
    let universe = rng.random_range(1..=max_states);
    let total = rng.random_bool(0.25);
    let (field, generators) = preorder(rng, universe, total);
    let order = Preorder::closure(universe, &field, &generators).ok()?;
    let n = rng.random_range(1..=max_n);
    let r = rng.random_range(1..=max_r);

    let mut es = Vec::with_capacity(n);
    let mut fs = Vec::with_capacity(n);
    for _ in 0..n {
        let e = subset_of(rng, &field);
        let mut f = FixedBitSet::with_capacity(universe);
        for x in e.ones() {
            if rng.random_bool(0.7) {
                let below: Vec<usize> = field
                    .ones()
                    .filter(|&y| order.geq(x, y) && !f.contains(y))
                    .collect();
                if let Some(&y) = below.choose(rng) {
                    f.insert(y);
                }
            }
        }
        debug_assert!(inflationary_injection(&order, &f, &e).ok()??.len() == f.count_ones(..));
        es.push(e);
        fs.push(f);
    }

    let r_i = r as i64;
    let mut a = FixedBitSet::with_capacity(universe);
    let mut b = FixedBitSet::with_capacity(universe);
    for s in field.ones() {
        let d = es.iter().filter(|e| e.contains(s)).count() as i64
            - fs.iter().filter(|f| f.contains(s)).count() as i64;
        if d == -r_i {
            a.insert(s);
        } else if d == r_i {
            b.insert(s);
        } else if d.is_zero() {
            if rng.random_bool(0.3) {
                a.insert(s);
                b.insert(s);
            }
        } else {
            return None;
        }
    }
    Some(BalancedInstance {
        order,
        es,
        fs,
        a,
        b,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn formulas_respect_shape() {
        let mut rng = rng(7);
        let shape = FormulaShape {
            letters: letters(3),
            max_length: 40,
            max_depth: 3,
            constants: true,
        };
        for _ in 0..500 {
            let f = formula(&mut rng, &shape);
            assert!(f.length() <= 40);
            assert!(f.modal_depth() <= 3);
            assert!(f.atoms().iter().all(|a| shape.letters.iter().any(|l| **l == **a)));
        }
    }

    #[test]
    fn measures_are_normalized() {
        let mut rng = rng(1);
        for _ in 0..200 {
            let mu = measure(&mut rng, 3, 4);
            assert_eq!(mu.len(), 3);
            assert!(mu.iter().sum::<Rational>().is_one());
            assert!(mu.iter().all(|w| *w >= Rational::zero()));
        }
    }

    #[test]
    fn total_preorders_are_total() {
        let mut rng = rng(3);
        for _ in 0..100 {
            let (field, gens) = preorder(&mut rng, 5, true);
            assert!(Preorder::closure(5, &field, &gens).unwrap().is_total());
        }
    }

    #[test]
    fn balanced_instances_are_balanced() {
        let mut rng = rng(11);
        let mut made = 0;
        for _ in 0..500 {
            if let Some(inst) = balanced_instance(&mut rng, 6, 3, 3) {
                made += 1;
                let (l, r) = (inst.lhs(), inst.rhs());
                for s in 0..inst.order.universe() {
                    let c = |v: &[FixedBitSet]| v.iter().filter(|x| x.contains(s)).count();
                    assert_eq!(c(&l), c(&r));
                }
                for (e, f) in inst.es.iter().zip(&inst.fs) {
                    assert!(inflationary_injection(&inst.order, f, e).unwrap().is_some());
                }
            }
        }
        assert!(made > 50, "only {made} instances");
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = preferential(&mut rng(5), 6, &letters(2));
        let b = preferential(&mut rng(5), 6, &letters(2));
        assert_eq!(a, b);
    }
}
