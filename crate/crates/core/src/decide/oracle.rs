//! Exhaustive search for small preferential models.
//!
//! Every subformula's truth at a state depends only on the state's
//! valuation, because comparisons have the same value everywhere. With at
//! most three letters a valuation is one of eight types, so each subformula
//! compiles to an 8-bit mask over types. A model is a preorder on a field of
//! at most four states plus a type per field state; one further state
//! outside the field may serve as the evaluation point.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::DecideError;
use crate::formula::Formula;
use crate::models::{Model, PreferentialModel};
use crate::semantics::{eval, Semantics};

/// Largest model the search builds.
pub const ORACLE_MAX_STATES: usize = 4;
/// Most letters the search accepts.
pub const ORACLE_MAX_LETTERS: usize = 3;

enum Node {
    Top,
    Bot,
    Atom(u8),
    Not(usize),
    And(usize, usize),
    Geq(usize, usize),
}

struct Compiled {
    nodes: Vec<Node>,
    types: usize,
}

fn compile(f: &Formula, letters: &[Arc<str>]) -> Compiled {
    fn go(
        f: &Formula,
        letters: &[Arc<str>],
        nodes: &mut Vec<Node>,
        memo: &mut HashMap<Formula, usize>,
    ) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let node = match f {
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
            Formula::Atom(p) => {
                let i = letters.iter().position(|l| l == p).expect("known letter");
                let types = 1usize << letters.len();
                let mask = (0..types).filter(|t| t >> i & 1 == 1).fold(0u8, |m, t| m | 1 << t);
                Node::Atom(mask)
            }
            Formula::Not(a) => Node::Not(go(a, letters, nodes, memo)),
            Formula::And(a, b) => {
                let (x, y) = (go(a, letters, nodes, memo), go(b, letters, nodes, memo));
                Node::And(x, y)
            }
            Formula::Geq(a, b) => {
                let (x, y) = (go(a, letters, nodes, memo), go(b, letters, nodes, memo));
                Node::Geq(x, y)
            }
        };
        nodes.push(node);
        memo.insert(f.clone(), nodes.len() - 1);
        nodes.len() - 1
    }
    let mut nodes = Vec::new();
    go(f, letters, &mut nodes, &mut HashMap::new());
    Compiled {
        nodes,
        types: 1 << letters.len(),
    }
}

/// A preorder on `0..k`: `up[s]` is the bitmask of states `a` with `a ⪰ s`,
/// and `lift[b][a]` tells whether the comparison holds between brackets
/// `a` (left) and `b` (right).
struct SmallOrder {
    k: usize,
    pairs: Vec<(usize, usize)>,
    lift: Vec<Vec<bool>>,
}

fn injection_exists(up: &[u8], a: u8, b: u8) -> bool {
    // Hall's condition on every subset of b.
    let mut s = b;
    loop {
        if s != 0 {
            let reach = (0..8).filter(|i| s >> i & 1 == 1).fold(0u8, |m, i| m | up[i]);
            if (reach & a).count_ones() < s.count_ones() {
                return false;
            }
        }
        if s == 0 {
            return true;
        }
        s = (s - 1) & b;
    }
}

fn function_exists(up: &[u8], a: u8, b: u8) -> bool {
    (0..8).filter(|i| b >> i & 1 == 1).all(|i| up[i] & a != 0)
}

/// All preorders on `k` states, one per isomorphism class.
fn preorders(k: usize, semantics: Semantics) -> Vec<SmallOrder> {
    let off: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let perms = permutations(k);
    let encode = |rel: &dyn Fn(usize, usize) -> bool| -> u32 {
        off.iter()
            .enumerate()
            .filter(|(_, &(i, j))| rel(i, j))
            .fold(0u32, |c, (bit, _)| c | 1 << bit)
    };
    let mut out = Vec::new();
    for code in 0u32..1 << off.len() {
        let rel = |i: usize, j: usize| {
            i == j || off.iter().position(|&p| p == (i, j)).is_some_and(|b| code >> b & 1 == 1)
        };
        let transitive = (0..k).all(|i| {
            (0..k).all(|j| !rel(i, j) || (0..k).all(|l| !rel(j, l) || rel(i, l)))
        });
        if !transitive {
            continue;
        }
        let canonical = perms.iter().all(|p| {
            let permuted = |i: usize, j: usize| rel(p[i], p[j]);
            encode(&permuted) >= code
        });
        if !canonical {
            continue;
        }
        let up: Vec<u8> = (0..8)
            .map(|s| {
                if s < k {
                    (0..k).filter(|&a| rel(a, s)).fold(0u8, |m, a| m | 1 << a)
                } else {
                    0
                }
            })
            .collect();
        let lift = (0..1u16 << k)
            .map(|b| {
                (0..1u16 << k)
                    .map(|a| match semantics {
                        Semantics::Function => function_exists(&up, a as u8, b as u8),
                        _ => injection_exists(&up, a as u8, b as u8),
                    })
                    .collect()
            })
            .collect();
        let pairs = off.iter().copied().filter(|&(i, j)| rel(i, j)).collect();
        out.push(SmallOrder { k, pairs, lift });
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Evaluates the compiled formula; returns the type mask of the root.
fn evaluate(c: &Compiled, order: &SmallOrder, types: &[usize], masks: &mut [u8]) -> u8 {
    let all = if c.types == 8 { 0xFF } else { (1u8 << c.types) - 1 };
    let bracket = |m: u8| {
        types
            .iter()
            .enumerate()
            .filter(|(_, &t)| m >> t & 1 == 1)
            .fold(0u8, |acc, (s, _)| acc | 1 << s)
    };
    for (i, node) in c.nodes.iter().enumerate() {
        masks[i] = match *node {
            Node::Top => all,
            Node::Bot => 0,
            Node::Atom(m) => m,
            Node::Not(a) => !masks[a] & all,
            Node::And(a, b) => masks[a] & masks[b],
            Node::Geq(a, b) => {
                if order.lift[bracket(masks[b]) as usize][bracket(masks[a]) as usize] {
                    all
                } else {
                    0
                }
            }
        };
    }
    masks[c.nodes.len() - 1]
}

/// Searches every preferential model with at most `max_states` states for
/// one satisfying `f` under inflationary-injection semantics.
///
/// ```
/// use qualprob::decide::enumerate_sat_preferential;
/// use qualprob::{eval, parse, Model, Semantics};
///
/// assert!(enumerate_sat_preferential(&parse("F >= T").unwrap(), 4).unwrap().is_none());
/// let p = parse("p").unwrap();
/// let (model, state) = enumerate_sat_preferential(&p, 4).unwrap().unwrap();
/// assert!(eval(&Model::from(model), Semantics::Injection, &state, &p).unwrap());
/// ```
pub fn enumerate_sat_preferential(
    f: &Formula,
    max_states: usize,
) -> Result<Option<(PreferentialModel, String)>, DecideError> {
    enumerate_sat_preferential_with(f, max_states, Semantics::Injection)
}

/// As [`enumerate_sat_preferential`], for either preferential semantics.
pub fn enumerate_sat_preferential_with(
    f: &Formula,
    max_states: usize,
    semantics: Semantics,
) -> Result<Option<(PreferentialModel, String)>, DecideError> {
    if max_states > ORACLE_MAX_STATES {
        return Err(DecideError::OracleCap {
            what: "states",
            found: max_states,
            limit: ORACLE_MAX_STATES,
        });
    }
    let letters: Vec<Arc<str>> = f.atoms().into_iter().collect();
    if letters.len() > ORACLE_MAX_LETTERS {
        return Err(DecideError::OracleCap {
            what: "letters",
            found: letters.len(),
            limit: ORACLE_MAX_LETTERS,
        });
    }
    let c = compile(f, &letters);
    let mut masks = vec![0u8; c.nodes.len()];
    for k in 1..=max_states {
        for order in preorders(k, semantics) {
            let mut types = vec![0usize; k];
            loop {
                let root = evaluate(&c, &order, &types, &mut masks);
                let present = types.iter().fold(0u8, |m, &t| m | 1 << t);
                let found = if root & present != 0 {
                    let s = types.iter().position(|&t| root >> t & 1 == 1).unwrap();
                    Some((None, s))
                } else if root != 0 && k < max_states {
                    Some((Some(root.trailing_zeros() as usize), k))
                } else {
                    None
                };
                if let Some((extra, state)) = found {
                    return Ok(Some(realize(f, semantics, &letters, &order, &types, extra, state)?));
                }
                // Next type assignment.
                let mut i = 0;
                while i < k {
                    types[i] += 1;
                    if types[i] < c.types {
                        break;
                    }
                    types[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
    }
    Ok(None)
}

fn realize(
    f: &Formula,
    semantics: Semantics,
    letters: &[Arc<str>],
    order: &SmallOrder,
    types: &[usize],
    extra: Option<usize>,
    state: usize,
) -> Result<(PreferentialModel, String), DecideError> {
    let k = order.k;
    let mut names: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
    let mut all_types = types.to_vec();
    if let Some(t) = extra {
        names.push("d".to_string());
        all_types.push(t);
    }
    let n = names.len();
    let mut field = FixedBitSet::with_capacity(n);
    field.insert_range(..k);
    let valuation: BTreeMap<String, FixedBitSet> = letters
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut s = FixedBitSet::with_capacity(n);
            for (x, &t) in all_types.iter().enumerate() {
                if t >> i & 1 == 1 {
                    s.insert(x);
                }
            }
            (p.to_string(), s)
        })
        .collect();
    let model = PreferentialModel::from_indexed(names.clone(), field, order.pairs.clone(), valuation)
        .map_err(|e| DecideError::Witness(e.to_string()))?;
    let wrapped = Model::Preferential(model);
    let name = names[state].clone();
    match eval(&wrapped, semantics, &name, f) {
        Ok(true) => {}
        Ok(false) => return Err(DecideError::Witness(format!("{f} is false at {name}"))),
        Err(e) => return Err(DecideError::Witness(e.to_string())),
    }
    let Model::Preferential(model) = wrapped else {
        unreachable!()
    };
    Ok((model, name))
}
