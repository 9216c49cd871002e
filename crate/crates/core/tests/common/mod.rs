//! Reference implementations used to cross-check the library.
//!
//! Everything here is written directly from the definitions, with no
//! matching, no linear programming and no shared evaluation code.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use qualprob::models::{Model, Rational};
use qualprob::{Formula, Semantics};

/// `geq[x][y]` iff `x ⪰ y`, closed by Floyd–Warshall from the generators.
pub fn order_matrix(n: usize, field: &[usize], generators: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut geq = vec![vec![false; n]; n];
    for &x in field {
        geq[x][x] = true;
    }
    for &(x, y) in generators {
        geq[x][y] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if geq[i][k] && geq[k][j] {
                    geq[i][j] = true;
                }
            }
        }
    }
    geq
}

/// Tries every injective assignment of `from` into `to`.
pub fn injection_by_search(geq: &[Vec<bool>], from: &[usize], to: &[usize]) -> Option<Vec<(usize, usize)>> {
    fn go(geq: &[Vec<bool>], from: &[usize], to: &[usize], used: &mut Vec<bool>, acc: &mut Vec<(usize, usize)>) -> bool {
        let Some(&b) = from.get(acc.len()) else {
            return true;
        };
        for (j, &a) in to.iter().enumerate() {
            if !used[j] && geq[a][b] {
                used[j] = true;
                acc.push((b, a));
                if go(geq, from, to, used, acc) {
                    return true;
                }
                acc.pop();
                used[j] = false;
            }
        }
        false
    }
    assert!(from.len() <= 10, "search space too large");
    let mut acc = Vec::new();
    go(geq, from, to, &mut vec![false; to.len()], &mut acc).then_some(acc)
}

/// For a total preorder: an injection exists iff, reading the classes from
/// the top down, the right-hand set never has more members so far than the
/// left-hand set.
pub fn injection_by_counting(geq: &[Vec<bool>], field: &[usize], from: &[usize], to: &[usize]) -> bool {
    // Rank = number of field states strictly above.
    let rank = |x: usize| field.iter().filter(|&&y| geq[y][x] && !geq[x][y]).count();
    let mut thresholds: Vec<usize> = field.iter().map(|&x| rank(x)).collect();
    thresholds.sort_unstable();
    thresholds.dedup();
    thresholds.iter().all(|&t| {
        from.iter().filter(|&&b| rank(b) <= t).count() <= to.iter().filter(|&&a| rank(a) <= t).count()
    })
}

pub fn is_total(geq: &[Vec<bool>], field: &[usize]) -> bool {
    field.iter().all(|&x| field.iter().all(|&y| geq[x][y] || geq[y][x]))
}

/// Truth value of `f` at every state, straight from the satisfaction clauses.
pub fn naive_truth(model: &Model, semantics: Semantics, f: &Formula) -> Vec<bool> {
    let n = model.states().len();
    let carrier: Vec<bool> = match model {
        Model::Preferential(m) => (0..n).map(|i| m.field().contains(i)).collect(),
        Model::MultiMeasure(_) => vec![true; n],
        Model::Distinguished(m) => (0..n).map(|i| m.plus().contains(i)).collect(),
    };
    let geq = match model {
        Model::Preferential(m) => {
            let field: Vec<usize> = m.field().ones().collect();
            order_matrix(n, &field, m.generators())
        }
        _ => Vec::new(),
    };
    let field: Vec<usize> = (0..n).filter(|&i| carrier[i]).collect();
    let total = !geq.is_empty() && is_total(&geq, &field);
    let compare = |lhs: &[usize], rhs: &[usize]| -> bool {
        match (model, semantics) {
            (Model::Preferential(_), Semantics::Function) => {
                rhs.iter().all(|&b| lhs.iter().any(|&a| geq[a][b]))
            }
            (Model::Preferential(_), Semantics::Injection) => {
                if total {
                    injection_by_counting(&geq, &field, rhs, lhs)
                } else {
                    injection_by_search(&geq, rhs, lhs).is_some()
                }
            }
            (Model::MultiMeasure(m), Semantics::MultiMeasure) => m.measures().iter().all(|mu| {
                let mass = |s: &[usize]| s.iter().fold(Rational::zero(), |acc, &i| acc + mu.weight(i));
                mass(lhs) >= mass(rhs)
            }),
            (Model::Distinguished(_), Semantics::Cardinality) => lhs.len() >= rhs.len(),
            _ => panic!("semantics does not fit the model"),
        }
    };
    // Shared subformulas are evaluated once, keyed by node address.
    type Memo = HashMap<*const Formula, Vec<bool>>;
    fn sub(
        f: &Arc<Formula>,
        model: &Model,
        n: usize,
        carrier: &[bool],
        compare: &dyn Fn(&[usize], &[usize]) -> bool,
        memo: &mut Memo,
    ) -> Vec<bool> {
        if let Some(v) = memo.get(&Arc::as_ptr(f)) {
            return v.clone();
        }
        let v = go(f, model, n, carrier, compare, memo);
        memo.insert(Arc::as_ptr(f), v.clone());
        v
    }
    fn go(
        f: &Formula,
        model: &Model,
        n: usize,
        carrier: &[bool],
        compare: &dyn Fn(&[usize], &[usize]) -> bool,
        memo: &mut Memo,
    ) -> Vec<bool> {
        match f {
            Formula::Top => vec![true; n],
            Formula::Bot => vec![false; n],
            Formula::Atom(p) => {
                let set = model.valuation().get(p).expect("letter in the model");
                (0..n).map(|i| set.contains(i)).collect()
            }
            Formula::Not(a) => sub(a, model, n, carrier, compare, memo).into_iter().map(|x| !x).collect(),
            Formula::And(a, b) => {
                let (x, y) = (sub(a, model, n, carrier, compare, memo), sub(b, model, n, carrier, compare, memo));
                x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
            }
            Formula::Geq(a, b) => {
                let bracket = |v: Vec<bool>| -> Vec<usize> { (0..n).filter(|&i| v[i] && carrier[i]).collect() };
                let lhs = bracket(sub(a, model, n, carrier, compare, memo));
                let rhs = bracket(sub(b, model, n, carrier, compare, memo));
                vec![compare(&lhs, &rhs); n]
            }
        }
    }
    go(f, model, n, &carrier, &compare, &mut Memo::new())
}

pub fn naive_holds(model: &Model, semantics: Semantics, state: &str, f: &Formula) -> bool {
    let i = model.states().index_of(state).expect("known state");
    naive_truth(model, semantics, f)[i]
}

/// Every measure is a probability distribution.
pub fn measures_normalized(model: &qualprob::MultiMeasureModel) -> bool {
    !model.measures().is_empty()
        && model.measures().iter().all(|mu| {
            mu.weights().iter().all(|w| *w >= Rational::zero())
                && mu.weights().iter().fold(Rational::zero(), |a, w| a + w) == Rational::from_integer(1.into())
        })
}

/// The distinct probability distributions on two states whose weights have
/// denominators at most `max_den`.
pub fn two_point_distributions(max_den: i64) -> Vec<(Rational, Rational)> {
    let mut seen = BTreeMap::new();
    for d in 1..=max_den {
        for k in 0..=d {
            let w = Rational::new(k.into(), d.into());
            let rest = Rational::from_integer(1.into()) - &w;
            seen.insert(w.clone(), (w, rest));
        }
    }
    seen.into_values().collect()
}

/// Every multi-measure model with one or two states over `letters`, every
/// valuation, and one or two measures with denominators at most `max_den`.
pub fn small_measure_models(letters: &[&str], max_den: i64) -> Vec<Model> {
    let mut out = Vec::new();
    for n in 1..=2usize {
        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let dists: Vec<Vec<Rational>> = if n == 1 {
            vec![vec![Rational::from_integer(1.into())]]
        } else {
            two_point_distributions(max_den).into_iter().map(|(a, b)| vec![a, b]).collect()
        };
        let mut families: Vec<Vec<Vec<Rational>>> = dists.iter().map(|d| vec![d.clone()]).collect();
        for (i, a) in dists.iter().enumerate() {
            for b in &dists[i + 1..] {
                families.push(vec![a.clone(), b.clone()]);
            }
        }
        for code in 0..1usize << (n * letters.len()) {
            let valuation: BTreeMap<String, fixedbitset::FixedBitSet> = letters
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    let mut s = fixedbitset::FixedBitSet::with_capacity(n);
                    (0..n).filter(|i| code >> (j * n + i) & 1 == 1).for_each(|i| s.insert(i));
                    (p.to_string(), s)
                })
                .collect();
            for measures in &families {
                let m = qualprob::MultiMeasureModel::from_indexed(names.clone(), measures.clone(), valuation.clone())
                    .expect("valid model");
                out.push(Model::MultiMeasure(m));
            }
        }
    }
    out
}

/// Whether `f` and `g` agree at every state of every model in `models`.
pub fn equivalent_on(models: &[Model], f: &Formula, g: &Formula) -> bool {
    models
        .iter()
        .all(|m| naive_truth(m, Semantics::MultiMeasure, f) == naive_truth(m, Semantics::MultiMeasure, g))
}
