//! Normal forms: depth flattening, guarded disjunctive normal form, and the
//! equinumerosity abbreviation used by the cancellation axioms.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Formula, FormulaError};

/// Largest sequence length accepted by [`build_equinumerosity`].
pub const MAX_EQUINUMEROSITY: usize = 8;

/// Finds the leftmost comparison with propositional operands that sits
/// inside the scope of another comparison.
fn nested_comparison(f: &Formula, inside: bool) -> Option<&Formula> {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(_) => None,
        Formula::Not(g) => nested_comparison(g, inside),
        Formula::And(a, b) => nested_comparison(a, inside).or_else(|| nested_comparison(b, inside)),
        Formula::Geq(a, b) => {
            if inside && a.is_propositional() && b.is_propositional() {
                Some(f)
            } else {
                nested_comparison(a, true).or_else(|| nested_comparison(b, true))
            }
        }
    }
}

/// Splits `f` into disjuncts of modal depth at most one.
///
/// Each step picks a nested comparison `γ` with propositional operands and
/// replaces the current formula `φ` by the two cases `φ[⊤/γ] ∧ γ` and
/// `φ[⊥/γ] ∧ ¬γ`; both are processed again until nothing is nested. A
/// formula of depth at most one comes back as a single disjunct, unchanged.
pub fn flatten_disjuncts(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut todo = vec![f.clone()];
    while let Some(g) = todo.pop() {
        match nested_comparison(&g, false).cloned() {
            None => out.push(g),
            Some(gamma) => {
                let when_false =
                    Formula::and(g.replace(&gamma, &Formula::Bot), Formula::not(gamma.clone()));
                let when_true = Formula::and(g.replace(&gamma, &Formula::Top), gamma);
                // stack order keeps the "true" branch first in the output
                todo.push(when_false);
                todo.push(when_true);
            }
        }
    }
    out
}

/// An equivalent formula of modal depth at most one, built as the
/// disjunction of [`flatten_disjuncts`].
///
/// ```
/// use qualprob::formula::{flatten_depth, parse};
///
/// let f = parse("(p >= q) >= r").unwrap();
/// assert_eq!(
///     flatten_depth(&f),
///     parse("((T >= r) & (p >= q)) | ((F >= r) & ~(p >= q))").unwrap()
/// );
/// ```
pub fn flatten_depth(f: &Formula) -> Formula {
    if f.modal_depth() <= 1 {
        return f.clone();
    }
    Formula::big_or(flatten_disjuncts(f))
}

/// One disjunct of the guarded normal form:
/// `¬(φ₁ ≿ ψ₁) ∧ … ∧ ¬(φₙ ≿ ψₙ) ∧ (α₁ ≿ β₁) ∧ … ∧ ξ` with every `φᵢ, ψᵢ,
/// αⱼ, βⱼ, ξ` propositional.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedDisjunct {
    pub negatives: Vec<(Formula, Formula)>,
    pub positives: Vec<(Formula, Formula)>,
    pub propositional: Formula,
}

impl GuardedDisjunct {
    /// The conjunction this disjunct stands for.
    pub fn to_formula(&self) -> Formula {
        let negs = self
            .negatives
            .iter()
            .map(|(a, b)| Formula::not(Formula::geq(a.clone(), b.clone())));
        let pos = self
            .positives
            .iter()
            .map(|(a, b)| Formula::geq(a.clone(), b.clone()));
        Formula::big_and(negs.chain(pos).chain(std::iter::once(self.propositional.clone())))
    }

    /// Letters occurring inside the comparisons.
    pub fn comparison_atoms(&self) -> BTreeSet<Arc<str>> {
        self.negatives
            .iter()
            .chain(&self.positives)
            .flat_map(|(a, b)| a.atoms().into_iter().chain(b.atoms()))
            .collect()
    }

    /// All letters of the disjunct.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = self.comparison_atoms();
        out.extend(self.propositional.atoms());
        out
    }
}

enum Lit {
    Prop(Formula),
    Pos(Formula, Formula),
    Neg(Formula, Formula),
}

type Cube = Vec<Lit>;

/// Disjunctive normal form over comparison literals, keeping maximal
/// propositional subformulas intact. `f` must have depth at most one.
fn dnf(f: &Formula, positive: bool) -> Vec<Cube> {
    if f.is_propositional() {
        let lit = if positive { f.clone() } else { Formula::not(f.clone()) };
        return vec![vec![Lit::Prop(lit)]];
    }
    match f {
        Formula::Not(g) => dnf(g, !positive),
        Formula::And(a, b) => {
            let (l, r) = (dnf(a, positive), dnf(b, positive));
            if positive {
                let mut out = Vec::with_capacity(l.len() * r.len());
                for x in &l {
                    for y in &r {
                        out.push(x.iter().chain(y).map(Lit::clone_lit).collect());
                    }
                }
                out
            } else {
                l.into_iter().chain(r).collect()
            }
        }
        Formula::Geq(a, b) => {
            let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
            vec![vec![if positive { Lit::Pos(a, b) } else { Lit::Neg(a, b) }]]
        }
        Formula::Top | Formula::Bot | Formula::Atom(_) => unreachable!("handled as propositional"),
    }
}

impl Lit {
    fn clone_lit(&self) -> Lit {
        match self {
            Lit::Prop(f) => Lit::Prop(f.clone()),
            Lit::Pos(a, b) => Lit::Pos(a.clone(), b.clone()),
            Lit::Neg(a, b) => Lit::Neg(a.clone(), b.clone()),
        }
    }
}

/// Constant folding for `⊤`/`⊥` inside a propositional formula.
fn fold_constants(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => match fold_constants(g) {
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            h => Formula::not(h),
        },
        Formula::And(a, b) => match (fold_constants(a), fold_constants(b)) {
            (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
            (Formula::Top, h) | (h, Formula::Top) => h,
            (x, y) => Formula::and(x, y),
        },
        _ => f.clone(),
    }
}

/// Letter count above which [`prop_satisfiable`] gives up and reports `None`.
const TRUTH_TABLE_LIMIT: usize = 20;

/// Truth-table satisfiability of a propositional formula. `None` if the
/// formula is not propositional or has too many letters to enumerate.
pub fn prop_satisfiable(f: &Formula) -> Option<bool> {
    if !f.is_propositional() {
        return None;
    }
    let atoms: Vec<Arc<str>> = f.atoms().into_iter().collect();
    if atoms.len() > TRUTH_TABLE_LIMIT {
        return None;
    }
    let sat = (0u64..1 << atoms.len()).any(|bits| {
        let lookup = |p: &str| {
            let i = atoms.iter().position(|a| a.as_ref() == p).unwrap();
            bits >> i & 1 == 1
        };
        f.eval_propositional(&lookup).unwrap()
    });
    Some(sat)
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

/// Rewrites `f` as an equivalent disjunction of [`GuardedDisjunct`]s.
///
/// Depth is flattened first. Disjuncts whose propositional part is
/// unsatisfiable, or which assert and deny the same comparison, are dropped,
/// so an empty result means `f` is unsatisfiable on propositional grounds.
///
/// ```
/// use qualprob::formula::{parse, to_guarded_dnf};
///
/// let dnf = to_guarded_dnf(&parse("~((p >= q) & (q >= p))").unwrap());
/// assert_eq!(dnf.len(), 2);
/// assert_eq!(dnf[0].negatives, vec![(parse("p").unwrap(), parse("q").unwrap())]);
/// assert_eq!(dnf[1].negatives, vec![(parse("q").unwrap(), parse("p").unwrap())]);
/// ```
pub fn to_guarded_dnf(f: &Formula) -> Vec<GuardedDisjunct> {
    let mut out: Vec<GuardedDisjunct> = Vec::new();
    for flat in flatten_disjuncts(f) {
        'cube: for cube in dnf(&flat, true) {
            let mut negatives = Vec::new();
            let mut positives = Vec::new();
            let mut props = Vec::new();
            for lit in cube {
                match lit {
                    Lit::Prop(p) => match fold_constants(&p) {
                        Formula::Top => {}
                        Formula::Bot => continue 'cube,
                        p => push_unique(&mut props, p),
                    },
                    Lit::Pos(a, b) => push_unique(&mut positives, (a, b)),
                    Lit::Neg(a, b) => push_unique(&mut negatives, (a, b)),
                }
            }
            if negatives.iter().any(|n| positives.contains(n)) {
                continue;
            }
            let propositional = Formula::big_and(props);
            if prop_satisfiable(&propositional) == Some(false) {
                continue;
            }
            let d = GuardedDisjunct {
                negatives,
                positives,
                propositional,
            };
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// `(φ₁,…,φₙ) ≡ (ψ₁,…,ψₙ)`: true at a state iff as many `φᵢ` as `ψᵢ` hold
/// there.
///
/// Built literally as `C₀ ∨ … ∨ Cₙ`, where `Cₖ` is the disjunction of all
/// conjunctions of the `φ`s and `ψ`s, each possibly negated, with exactly `k`
/// unnegated on each side. Each conjunction is written as the `φ` part
/// conjoined with the `ψ` part. The size grows like `C(2n, n)`, hence the cap of
/// [`MAX_EQUINUMEROSITY`].
pub fn build_equinumerosity(phis: &[Formula], psis: &[Formula]) -> Result<Formula, FormulaError> {
    if phis.len() != psis.len() {
        return Err(FormulaError::LengthMismatch {
            left: phis.len(),
            right: psis.len(),
        });
    }
    let n = phis.len();
    if n == 0 {
        return Err(FormulaError::EmptySequence);
    }
    if n > MAX_EQUINUMEROSITY {
        return Err(FormulaError::Capacity {
            requested: n,
            limit: MAX_EQUINUMEROSITY,
        });
    }
    for (position, f) in phis.iter().chain(psis).enumerate() {
        let depth = f.modal_depth();
        if depth > 0 {
            return Err(FormulaError::NotPropositional { position, depth });
        }
    }
    // Each side's conjunction for each subset is built once and shared by
    // every block that uses it.
    let side = |fs: &[Formula]| -> Vec<Formula> {
        let negated: Vec<Formula> = fs.iter().map(|f| Formula::not(f.clone())).collect();
        (0u32..1 << n)
            .map(|mask| {
                Formula::big_and((0..n).map(|i| {
                    if mask >> i & 1 == 1 {
                        fs[i].clone()
                    } else {
                        negated[i].clone()
                    }
                }))
            })
            .collect()
    };
    let (left, right) = (side(phis), side(psis));
    let mut blocks = Vec::new();
    for k in 0..=n as u32 {
        let subsets: Vec<usize> = (0..1usize << n).filter(|m| m.count_ones() == k).collect();
        for &l in &subsets {
            for &r in &subsets {
                blocks.push(Formula::and(left[l].clone(), right[r].clone()));
            }
        }
    }
    Ok(Formula::big_or(blocks))
}
