//! Acceptance suite: one line per criterion, with timing against its budget.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    injection_by_counting, injection_by_search, is_total, measures_normalized, naive_holds, naive_truth, order_matrix,
    two_point_distributions,
};
use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;
use qualprob::axioms::{audit_instances, instantiate, sample_instances, Logic, SampleConfig, SchemaId};
use qualprob::decide::{
    enumerate_sat_preferential, enumerate_sat_preferential_with, sat_ip, valid_ip, Options, SatResult, Validity,
    WitnessStats,
};
use qualprob::formula::{flatten_depth, flatten_disjuncts, parse};
use qualprob::models::{Model, MultiMeasureModel, Rational};
use qualprob::random::{self, FormulaShape};
use qualprob::semantics::{brute_force_injection, inflationary_injection};
use qualprob::transform::{audit_equivalence, lemma4, lemma5, template_formulas};
use qualprob::{Formula, Semantics};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn letters(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Witness sizes gathered by the decision criteria, audited by criterion 9.
#[derive(Default)]
struct Ledger {
    witnesses: Vec<WitnessStats>,
}

fn soundness(logic: Logic, semantics: Semantics, seed: u64) -> Check {
    let mut rng = random::rng(seed);
    let config = SampleConfig::default();
    let per_model = logic.schemas(config.max_n, config.max_k).len();
    let mut instances = 0;
    let mut cross_checked = 0;
    for i in 0..10_000 {
        let model = Model::Preferential(random::preferential(&mut rng, 6, &config.letters));
        let batch = sample_instances(&mut rng, logic, &config, per_model).map_err(|e| e.to_string())?;
        instances += batch.len();
        let violations = audit_instances(&model, semantics, &batch).map_err(|e| e.to_string())?;
        if let Some(v) = violations.first() {
            return Err(format!("{v}in {}", model.to_json()));
        }
        if i % 25 == 0 {
            for inst in &batch {
                let truth = naive_truth(&model, semantics, &inst.formula);
                ensure(truth.iter().all(|&t| t), || {
                    format!("reference evaluator rejects {}: {}", inst.schema, inst.formula)
                })?;
                cross_checked += 1;
            }
        }
    }
    Ok(format!(
        "10000 models, {instances} instances, 0 violations ({cross_checked} re-checked by the reference evaluator)"
    ))
}

fn c1() -> Check {
    soundness(Logic::IP, Semantics::Injection, 1)
}

fn c2() -> Check {
    soundness(Logic::IL, Semantics::Function, 2)
}

fn c3() -> Check {
    let l4 = instantiate(SchemaId::L4, &[f("p"), f("q"), f("r")]).unwrap();
    let negation = Formula::not(l4.clone());
    let verdict = valid_ip(&l4, &Options::default()).map_err(|e| e.to_string())?;
    let Validity::Invalid(w) = verdict else {
        return Err("the union principle was reported valid".into());
    };
    let counter = Model::MultiMeasure(w.model.clone());
    ensure(measures_normalized(&w.model), || "countermodel measures are not distributions".into())?;
    ensure(naive_holds(&counter, Semantics::MultiMeasure, &w.state, &negation), || {
        "countermodel fails the reference check".into()
    })?;
    let (pref, state) = enumerate_sat_preferential(&negation, 4)
        .map_err(|e| e.to_string())?
        .ok_or("no preferential countermodel with at most 4 states")?;
    let states = pref.states().len();
    let pref = Model::Preferential(pref);
    ensure(naive_holds(&pref, Semantics::Injection, &state, &negation), || {
        "preferential countermodel fails the reference check".into()
    })?;
    let function = enumerate_sat_preferential_with(&negation, 4, Semantics::Function).map_err(|e| e.to_string())?;
    ensure(function.is_none(), || "the union principle failed under the function lifting".into())?;
    Ok(format!(
        "countermodel with {} states and {} measure(s); injection countermodel with {states} states; none under the function lifting",
        w.model.states().len(),
        w.model.measures().len()
    ))
}

fn c4(ledger: &mut Ledger) -> Check {
    let formula = f("~(p >= q) & ~(q >= p)");
    let result = sat_ip(&formula, &Options::default()).map_err(|e| e.to_string())?;
    let SatResult::Sat(w) = result else {
        return Err("incomparability reported unsatisfiable".into());
    };
    ensure(w.model.measures().len() == 2, || {
        format!("witness has {} measures", w.model.measures().len())
    })?;
    let model = Model::MultiMeasure(w.model.clone());
    ensure(naive_holds(&model, Semantics::MultiMeasure, &w.state, &formula), || {
        "witness fails the reference check".into()
    })?;
    ledger.witnesses.push(w.stats.clone());
    let sharp = Options {
        single_measure: true,
        ..Options::default()
    };
    let SatResult::Unsat(refutation) = sat_ip(&formula, &sharp).map_err(|e| e.to_string())? else {
        return Err("satisfiable with a single measure".into());
    };
    ensure(refutation.verify(), || "refutation certificate does not verify".into())?;
    Ok("2-measure witness; unsatisfiable with one measure (certificate verified)".into())
}

/// Every multi-measure model on states `{u, v}` with the given letters and
/// measures drawn from two-point distributions with small denominators.
fn two_state_models(names: &[String], max_den: i64) -> Vec<Model> {
    let dists = two_point_distributions(max_den);
    let mut out = Vec::new();
    for val_bits in 0u32..1 << (2 * names.len()) {
        let valuation: BTreeMap<String, FixedBitSet> = names
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut s = FixedBitSet::with_capacity(2);
                for state in 0..2 {
                    if val_bits >> (2 * i + state) & 1 == 1 {
                        s.insert(state);
                    }
                }
                (p.clone(), s)
            })
            .collect();
        for set in 1u32..1 << dists.len() {
            let measures: Vec<Vec<Rational>> = (0..dists.len())
                .filter(|j| set >> j & 1 == 1)
                .map(|j| vec![dists[j].0.clone(), dists[j].1.clone()])
                .collect();
            let m = MultiMeasureModel::from_indexed(vec!["u".into(), "v".into()], measures, valuation.clone()).unwrap();
            out.push(Model::MultiMeasure(m));
        }
    }
    out
}

fn c5() -> Check {
    let mut rng = random::rng(5);
    let names = letters(&["p", "q"]);
    let shape = FormulaShape {
        letters: names.clone(),
        max_length: 40,
        max_depth: 3,
        constants: true,
    };
    let models = two_state_models(&names, 3);
    let mut nested = 0;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let phi = random::formula(&mut rng, &shape);
        let flat = flatten_depth(&phi);
        ensure(flat.modal_depth() <= 1, || format!("depth {} after flattening {phi}", flat.modal_depth()))?;
        if phi.modal_depth() > 1 {
            nested += 1;
        }
        for d in flatten_disjuncts(&phi) {
            let ratio = d.length() as f64 / phi.length() as f64;
            worst = worst.max(ratio);
            ensure(d.length() <= 8 * phi.length(), || {
                format!("disjunct of length {} from {phi} of length {}", d.length(), phi.length())
            })?;
        }
        for model in &models {
            ensure(
                naive_truth(model, Semantics::MultiMeasure, &phi) == naive_truth(model, Semantics::MultiMeasure, &flat),
                || format!("{phi} and its flattening differ in {}", model.to_json()),
            )?;
        }
    }
    Ok(format!(
        "1000 formulas ({nested} of depth 2 or 3), {} models each; longest disjunct {worst:.2}|φ|",
        models.len()
    ))
}

fn c6() -> Check {
    let mut rng = random::rng(6);
    let names = letters(&["p", "q"]);
    let templates = template_formulas(&names);
    let mut checks = 0;
    for _ in 0..200 {
        let m = random::multimeasure(&mut rng, 3, 1, 4, &names);
        let out = lemma4(&m).map_err(|e| e.to_string())?;
        let total: usize = m.measures()[0]
            .weights()
            .iter()
            .map(|w| (w * Rational::from_integer(out.scale.into())).to_integer().to_usize().unwrap())
            .sum();
        ensure(out.model.plus().count_ones(..) == total && total == out.scale, || {
            format!("|W+| = {} for scale {}", out.model.plus().count_ones(..), out.scale)
        })?;
        let source = Model::MultiMeasure(m.clone());
        let target = Model::Distinguished(out.model.clone());
        let map: BTreeMap<String, String> = m.states().names().iter().map(|w| (w.clone(), w.clone())).collect();
        let report = audit_equivalence(&source, Semantics::MultiMeasure, &target, Semantics::Cardinality, &map, &templates)
            .map_err(|e| e.to_string())?;
        ensure(report.is_clean(), || format!("lemma4 disagreement: {:?}", report.disagreements[0]))?;
        checks += report.checks;
        for t in &templates {
            let a = naive_truth(&source, Semantics::MultiMeasure, t);
            let b = naive_truth(&target, Semantics::Cardinality, t);
            ensure((0..a.len()).all(|i| a[i] == b[i]), || format!("reference disagreement on {t}"))?;
        }
    }
    let mut layers_seen = 0;
    for _ in 0..100 {
        let m = random::multimeasure(&mut rng, 3, 2, 3, &names);
        let out = lemma5(&m).map_err(|e| e.to_string())?;
        let source = Model::MultiMeasure(m.clone());
        let target = Model::Preferential(out.model.clone());
        ensure(target.validate().is_valid(), || "lemma5 output does not validate".into())?;
        let n = target.states().len();
        let field: Vec<usize> = out.model.field().ones().collect();
        let geq = order_matrix(n, &field, out.model.generators());
        ensure(is_total(&geq, &field), || "lemma5 order is not total".into())?;
        for &x in &field {
            for &y in &field {
                ensure(geq[x][y] == (out.layer_of(x) <= out.layer_of(y)), || "order does not follow layers".into())?;
            }
        }
        let report = audit_equivalence(&source, Semantics::MultiMeasure, &target, Semantics::Injection, &out.state_map, &templates)
            .map_err(|e| e.to_string())?;
        ensure(report.is_clean(), || format!("lemma5 disagreement: {:?}", report.disagreements[0]))?;
        checks += report.checks;
        let index: Vec<usize> = m
            .states()
            .names()
            .iter()
            .map(|w| target.states().index_of(&out.state_map[w]).unwrap())
            .collect();
        for t in &templates {
            let a = naive_truth(&source, Semantics::MultiMeasure, t);
            let b = naive_truth(&target, Semantics::Injection, t);
            ensure(index.iter().enumerate().all(|(s, &x)| a[s] == b[x]), || format!("reference disagreement on {t}"))?;
        }
        // Layer blocking: a comparison failing in measure i is failed by a
        // margin larger than the population of all earlier layers.
        let props: Vec<&Formula> = templates.iter().filter(|t| t.modal_depth() == 0).collect();
        for (i, mu) in m.measures().iter().enumerate() {
            let below: usize = out.layer_sizes[..i].iter().sum();
            let in_layer = |g: &Formula| {
                let truth = naive_truth(&target, Semantics::Injection, g);
                field.iter().filter(|&&x| truth[x] && out.layer_of(x) == i).count()
            };
            for phi in &props {
                for psi in &props {
                    let mass = |g: &Formula| {
                        let truth = naive_truth(&source, Semantics::MultiMeasure, g);
                        (0..truth.len()).filter(|&s| truth[s]).map(|s| mu.weight(s).clone()).sum::<Rational>()
                    };
                    if mass(psi) > mass(phi) {
                        ensure(in_layer(psi) > in_layer(phi) + below, || {
                            format!("layer {i} does not block {psi} over {phi}")
                        })?;
                    }
                }
            }
        }
        layers_seen = layers_seen.max(out.layer_sizes.len());
    }
    Ok(format!(
        "300 models, {} templates, {checks} state checks, 0 disagreements; layered orders total",
        templates.len()
    ))
}

fn c7() -> Check {
    let mut rng = random::rng(7);
    let mut instances = 0;
    let mut attempts = 0;
    while instances < 1000 {
        attempts += 1;
        let Some(inst) = random::balanced_instance(&mut rng, 6, 3, 3) else {
            continue;
        };
        let n = inst.order.universe();
        let field: Vec<usize> = inst.order.field().ones().collect();
        let pairs = inst.order.pairs();
        let geq = order_matrix(n, &field, &pairs);
        let (lhs, rhs) = (inst.lhs(), inst.rhs());
        for s in 0..n {
            let count = |seq: &[FixedBitSet]| seq.iter().filter(|e| e.contains(s)).count();
            ensure(count(&lhs) == count(&rhs), || format!("state {s} unbalanced"))?;
        }
        for (e, f) in inst.es.iter().zip(&inst.fs) {
            let (e, f): (Vec<usize>, Vec<usize>) = (e.ones().collect(), f.ones().collect());
            ensure(injection_by_search(&geq, &f, &e).is_some(), || "missing F->E injection".into())?;
        }
        let a: Vec<usize> = inst.a.ones().collect();
        let b: Vec<usize> = inst.b.ones().collect();
        let found = inflationary_injection(&inst.order, &inst.a, &inst.b).map_err(|e| e.to_string())?;
        ensure(found.is_some(), || format!("no injection A -> B: A={a:?} B={b:?} order={pairs:?}"))?;
        let map = found.unwrap();
        let images: std::collections::BTreeSet<usize> = map.iter().map(|&(_, y)| y).collect();
        ensure(
            map.len() == a.len() && images.len() == a.len() && map.iter().all(|&(x, y)| inst.b.contains(y) && geq[y][x]),
            || "returned map is not an inflationary injection".into(),
        )?;
        ensure(injection_by_search(&geq, &a, &b).is_some(), || "reference search finds no injection".into())?;
        instances += 1;
    }
    Ok(format!("{instances} instances ({attempts} draws), 0 failures"))
}

/// Curated formulas with their expected satisfiability in multi-measure
/// models.
const CURATED: [(&str, bool); 50] = [
    ("F >= T", false),
    ("~(p >= F)", false),
    ("~(p >= p)", false),
    ("~(T >= p)", false),
    ("(p >= q) & (q >= r) & ~(p >= r)", false),
    ("p & ~p", false),
    ("(F >= p) & p & ~(F >= (p & q))", false),
    ("~((p >= q) -> ((p >= q) >= T))", false),
    ("~(~(p >= q) -> (~(p >= q) >= T))", false),
    ("(p >= q) & ~(~q >= ~p)", false),
    ("(p >= q) & (q >= p) & ~((p & ~q) >= (q & ~p))", false),
    ("~((p | q) >= p)", false),
    ("(F >= p) & ~(q >= (p & q))", false),
    ("(p >= T) & ~((p & q) >= q)", false),
    ("(p >= q) & (r >= p) & ~(r >= q)", false),
    ("~((p >= q) | (q >= p)) & (p >= T)", false),
    ("(F >= p) & (F >= q) & ~(F >= (p | q))", false),
    ("(F >= (p >= q)) & (F >= ~(p >= q))", false),
    ("~(T >= (p | ~p))", false),
    ("(q >= p) & ~(q >= (p & r))", false),
    ("p", true),
    ("~p & (p >= ~p)", true),
    ("~(p >= q) & ~(q >= p)", true),
    ("~(((p >= q) & (p >= r)) -> (p >= (q | r)))", true),
    ("(p >= ~p) & (~p >= p)", true),
    ("~(p >= q)", true),
    ("(F >= p) & p", true),
    ("(p >= T) & ~p", true),
    ("~(p >= q) & ~(q >= r) & ~(r >= p)", true),
    ("(p >= q) & ~(p >= (q | r))", true),
    ("(q >= p) & (r >= p) & ~((q & r) >= p)", true),
    ("(p >= q) & (q >= p) & ~p & q", true),
    ("(p >= q) >= T", true),
    ("~((p >= q) >= (q >= p))", true),
    ("(p >= (q >= r)) & ~(q >= r)", true),
    ("~(p >= (p & q))", false),
    ("(p & q) >= p", true),
    ("~(F >= (p & ~q)) & (q >= p)", true),
    ("(p >= q) & (q >= r) & (r >= p) & ~(p >= (q & r))", false),
    ("~(p >= ~p) & ~(~p >= p)", true),
    ("~(q >= p) & (p >= T)", true),
    ("(T >= p) & (F >= ~p) & ~(p >= q)", false),
    ("((p | q) >= r) & ~(p >= r) & ~(q >= r)", true),
    ("((p >= q) & ~(q >= p)) & ((q >= r) & ~(r >= q)) & ~(p >= r)", false),
    ("(p >= q) | (q >= p)", true),
    ("~((p >= q) | (q >= p)) & (r >= T) & r", true),
    ("(F >= q) & ~(p >= (p | q))", false),
    ("(r >= (p & q)) & ~(r >= p) & ~(r >= q)", true),
    ("~(((p & q) >= r) >= ((p >= r) & (q >= r)))", true),
    ("(F >= (p & q)) & (F >= (p & ~q)) & ~(F >= p)", false),
];

#[derive(Default)]
struct Tally {
    both_sat: usize,
    both_unsat: usize,
    certified: usize,
    uncertified: usize,
}

/// Runs both procedures on `phi` and checks every implication between them
/// that can be certified.
fn agree(phi: &Formula, ledger: &mut Ledger, tally: &mut Tally) -> Result<bool, String> {
    let found = enumerate_sat_preferential(phi, 4).map_err(|e| e.to_string())?;
    if let Some((m, s)) = &found {
        ensure(naive_holds(&Model::Preferential(m.clone()), Semantics::Injection, s, phi), || {
            format!("oracle model fails the reference check for {phi}")
        })?;
    }
    let decided = sat_ip(phi, &Options::default()).map_err(|e| e.to_string())?;
    match &decided {
        SatResult::Sat(w) => {
            ensure(measures_normalized(&w.model), || format!("witness for {phi} is not normalized"))?;
            let model = Model::MultiMeasure(w.model.clone());
            ensure(naive_holds(&model, Semantics::MultiMeasure, &w.state, phi), || {
                format!("witness for {phi} fails the reference check")
            })?;
            ledger.witnesses.push(w.stats.clone());
            if found.is_some() {
                tally.both_sat += 1;
            } else {
                // A witness whose layered translation has at most four states
                // proves that the search should have succeeded.
                let small = lemma5(&w.model).ok().filter(|l| l.model.states().len() <= 4);
                match small {
                    Some(l) => {
                        tally.certified += 1;
                        return Err(format!(
                            "{phi} has a {}-state preferential model the search missed",
                            l.model.states().len()
                        ));
                    }
                    None => tally.uncertified += 1,
                }
            }
        }
        SatResult::Unsat(r) => {
            ensure(r.verify(), || format!("certificate for {phi} does not verify"))?;
            ensure(found.is_none(), || format!("{phi}: preferential model found but reported unsatisfiable"))?;
            tally.both_unsat += 1;
        }
    }
    if found.is_some() {
        tally.certified += 1;
    }
    Ok(decided.is_sat())
}

fn c8(ledger: &mut Ledger) -> Check {
    let mut curated = Tally::default();
    for (text, expected) in CURATED {
        let phi = f(text);
        let sat = agree(&phi, ledger, &mut curated)?;
        ensure(sat == expected, || format!("{text}: expected sat = {expected}"))?;
    }
    let mut rng = random::rng(8);
    let mut random_tally = Tally::default();
    for _ in 0..500 {
        let k = rand::Rng::random_range(&mut rng, 1..=3);
        let shape = FormulaShape {
            letters: random::letters(k),
            max_length: 16,
            max_depth: 2,
            constants: true,
        };
        let phi = random::formula(&mut rng, &shape);
        agree(&phi, ledger, &mut random_tally)?;
    }
    Ok(format!(
        "curated 50: {} sat / {} unsat agree, {} uncertified; random 500: {} sat / {} unsat agree, {} uncertified",
        curated.both_sat,
        curated.both_unsat,
        curated.uncertified,
        random_tally.both_sat,
        random_tally.both_unsat,
        random_tally.uncertified
    ))
}

fn c9(ledger: &Ledger) -> Check {
    ensure(!ledger.witnesses.is_empty(), || "no witnesses were recorded".into())?;
    let mut state_ratio = 0.0f64;
    let mut measure_ratio = 0.0f64;
    let mut bits = 0;
    for s in &ledger.witnesses {
        ensure(s.within_bounds(), || format!("witness out of bounds: {s:?}"))?;
        let len = s.formula_length as f64;
        state_ratio = state_ratio.max(s.states as f64 / (len * len));
        measure_ratio = measure_ratio.max(s.measures as f64 / len);
        bits = bits.max(s.max_weight_bits);
    }
    Ok(format!(
        "{} witnesses within |W| <= {}|θ|² and |P| <= {}|θ|; observed max |W|/|θ|² = {state_ratio:.3}, |P|/|θ| = {measure_ratio:.3}, weights up to {bits} bits",
        ledger.witnesses.len(),
        qualprob::decide::STATE_FACTOR,
        qualprob::decide::MEASURE_FACTOR,
    ))
}

fn c10() -> Check {
    let mut rng = random::rng(10);
    let mut positive = 0;
    for _ in 0..10_000 {
        let universe = rand::Rng::random_range(&mut rng, 1..=10);
        let total = rand::Rng::random_bool(&mut rng, 0.3);
        let (field, generators) = random::preorder(&mut rng, universe, total);
        let order = qualprob::models::Preorder::closure(universe, &field, &generators).unwrap();
        let a = random::subset_of(&mut rng, &field);
        let mut b = random::subset_of(&mut rng, &field);
        while b.count_ones(..) > 8 {
            let first = b.ones().next().unwrap();
            b.set(first, false);
        }
        let fast = inflationary_injection(&order, &b, &a).map_err(|e| e.to_string())?;
        let slow = brute_force_injection(&order, &b, &a).map_err(|e| e.to_string())?;
        let fieldv: Vec<usize> = field.ones().collect();
        let geq = order_matrix(universe, &fieldv, &generators);
        let (av, bv): (Vec<usize>, Vec<usize>) = (a.ones().collect(), b.ones().collect());
        let reference = injection_by_search(&geq, &bv, &av).is_some();
        ensure(fast.is_some() == slow.is_some() && fast.is_some() == reference, || {
            format!("disagreement on B={bv:?} A={av:?} generators={generators:?}")
        })?;
        if is_total(&geq, &fieldv) {
            ensure(injection_by_counting(&geq, &fieldv, &bv, &av) == reference, || "counting oracle disagrees".into())?;
        }
        if let Some(map) = fast {
            let images: std::collections::BTreeSet<usize> = map.iter().map(|&(_, y)| y).collect();
            ensure(
                map.len() == bv.len() && images.len() == bv.len() && map.iter().all(|&(x, y)| a.contains(y) && geq[y][x]),
                || "matching result is not an inflationary injection".into(),
            )?;
            positive += 1;
        }
    }
    Ok(format!("10000 instances agree ({positive} with an injection)"))
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let mut failures = 0;
    let mut run = |id: usize, title: &str, budget: u64, check: &mut dyn FnMut(&mut Ledger) -> Check| {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(&mut ledger)))
            .unwrap_or_else(|p| Err(format!("panic: {:?}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())))));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {id:>2} {status} [{:.1} s / {budget} s] {title}: {detail}",
            elapsed.as_secs_f64()
        );
    };
    run(1, "IP soundness under injection semantics", 60, &mut |_| c1());
    run(2, "IL soundness under function semantics", 60, &mut |_| c2());
    run(3, "union principle separation", 10, &mut |_| c3());
    run(4, "totality fails with several measures", 5, &mut c4);
    run(5, "depth flattening", 120, &mut |_| c5());
    run(6, "counting and layered translations", 120, &mut |_| c6());
    run(7, "balanced sequences admit injections", 30, &mut |_| c7());
    run(8, "decision procedure against preferential search", 300, &mut c8);
    run(9, "witness size bounds", 1, &mut |l| c9(l));
    run(10, "matching against brute force", 30, &mut |_| c10());
    if failures == 0 {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria fail");
        ExitCode::FAILURE
    }
}
