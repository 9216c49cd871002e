//! The comparative-likelihood language.
//!
//! A [`Formula`] is built from proposition letters with negation,
//! conjunction and the binary comparison `φ ≿ ψ`. Disjunction, implication
//! and the biconditional are abbreviations and are expanded on construction,
//! so the AST only ever contains the primitive connectives plus the two
//! constants `⊤` and `⊥`.

mod normal;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use normal::{
    build_equinumerosity, flatten_depth, flatten_disjuncts, prop_satisfiable, to_guarded_dnf,
    GuardedDisjunct, MAX_EQUINUMEROSITY,
};
pub use parse::{parse, ParseError};

/// A formula of the comparative-likelihood language.
///
/// Children are reference counted, so cloning is cheap and large derived
/// formulas (equinumerosity blocks in particular) share their components.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Atom(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    /// `lhs ≿ rhs`: the left side is at least as likely as the right side.
    Geq(Arc<Formula>, Arc<Formula>),
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("sequence lengths differ: {left} on the left, {right} on the right")]
    LengthMismatch { left: usize, right: usize },
    #[error("equinumerosity needs at least one formula on each side")]
    EmptySequence,
    #[error("formula at position {position} has modal depth {depth}, expected 0")]
    NotPropositional { position: usize, depth: usize },
    #[error("equinumerosity over {requested} formulas exceeds the limit of {limit}")]
    Capacity { requested: usize, limit: usize },
}

fn balanced(items: &[Formula], join: &dyn Fn(Formula, Formula) -> Formula) -> Option<Formula> {
    match items {
        [] => None,
        [one] => Some(one.clone()),
        _ => {
            let mid = items.len().div_ceil(2);
            Some(join(balanced(&items[..mid], join)?, balanced(&items[mid..], join)?))
        }
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn geq(a: Formula, b: Formula) -> Formula {
        Formula::Geq(Arc::new(a), Arc::new(b))
    }

    /// `a ∨ b`, expanded to `¬(¬a ∧ ¬b)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `a → b`, expanded to `¬(a ∧ ¬b)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    /// `a ↔ b`, expanded to `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// Conjunction of the items, nested as a balanced tree (left-nested for
    /// three or fewer); `⊤` for an empty iterator.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        balanced(&items, &Formula::and).unwrap_or(Formula::Top)
    }

    /// Disjunction of the items, nested like [`Formula::big_and`]; `⊥` for an
    /// empty iterator.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        balanced(&items, &Formula::or).unwrap_or(Formula::Bot)
    }

    /// Nesting depth of `≿`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Geq(a, b) => a.modal_depth().max(b.modal_depth()) + 1,
        }
    }

    /// Number of symbols in the canonical rendering (see [`Formula::canonical`]).
    ///
    /// Every atom and constant is one symbol, `¬` is one symbol, and each
    /// binary connective contributes itself plus a pair of parentheses.
    pub fn length(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.length(),
            Formula::And(a, b) | Formula::Geq(a, b) => 3 + a.length() + b.length(),
        }
    }

    pub fn is_propositional(&self) -> bool {
        self.modal_depth() == 0
    }

    /// Proposition letters occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Geq(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Replaces every occurrence of `target` by `with`.
    pub fn replace(&self, target: &Formula, with: &Formula) -> Formula {
        if self == target {
            return with.clone();
        }
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.replace(target, with)),
            Formula::And(a, b) => Formula::and(a.replace(target, with), b.replace(target, with)),
            Formula::Geq(a, b) => Formula::geq(a.replace(target, with), b.replace(target, with)),
        }
    }

    /// Truth value of a propositional formula under `assignment`.
    ///
    /// Comparisons are not propositional; this returns `None` if one is met.
    pub fn eval_propositional(&self, assignment: &dyn Fn(&str) -> bool) -> Option<bool> {
        Some(match self {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(p) => assignment(p),
            Formula::Not(f) => !f.eval_propositional(assignment)?,
            Formula::And(a, b) => {
                a.eval_propositional(assignment)? && b.eval_propositional(assignment)?
            }
            Formula::Geq(..) => return None,
        })
    }

    /// Primitive-only rendering with single-character connectives and no
    /// whitespace, e.g. `¬(p∧¬q)` or `(p≿⊤)`. For formulas whose atoms are
    /// single characters, the number of characters equals [`Formula::length`].
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s);
        s
    }

    fn write_canonical(&self, s: &mut String) {
        match self {
            Formula::Top => s.push('⊤'),
            Formula::Bot => s.push('⊥'),
            Formula::Atom(p) => s.push_str(p),
            Formula::Not(f) => {
                s.push('¬');
                f.write_canonical(s);
            }
            Formula::And(a, b) | Formula::Geq(a, b) => {
                s.push('(');
                a.write_canonical(s);
                s.push(if matches!(self, Formula::And(..)) { '∧' } else { '≿' });
                b.write_canonical(s);
                s.push(')');
            }
        }
    }

    /// Rendering with the abbreviations `∨` and `→` restored, in either the
    /// ASCII surface syntax (which [`parse`] reads back to the same AST) or
    /// Unicode.
    pub fn render(&self, style: Style) -> String {
        let mut s = String::new();
        self.write_pretty(&mut s, style);
        s
    }

    fn write_pretty(&self, s: &mut String, style: Style) {
        let sym = style.symbols();
        match self {
            Formula::Top => s.push_str(sym.top),
            Formula::Bot => s.push_str(sym.bot),
            Formula::Atom(p) => s.push_str(p),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Formula::Not(x), Formula::Not(y)) => binary(s, style, x, sym.or, y),
                    (_, Formula::Not(y)) => binary(s, style, a, sym.implies, y),
                    _ => {
                        s.push_str(sym.not);
                        inner.write_pretty(s, style);
                    }
                },
                _ => {
                    s.push_str(sym.not);
                    inner.write_pretty(s, style);
                }
            },
            Formula::And(a, b) => binary(s, style, a, sym.and, b),
            Formula::Geq(a, b) => binary(s, style, a, sym.geq, b),
        }
    }
}

fn binary(s: &mut String, style: Style, a: &Formula, op: &str, b: &Formula) {
    s.push('(');
    a.write_pretty(s, style);
    s.push(' ');
    s.push_str(op);
    s.push(' ');
    b.write_pretty(s, style);
    s.push(')');
}

/// Output alphabet for [`Formula::render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Ascii,
    Unicode,
}

struct Symbols {
    top: &'static str,
    bot: &'static str,
    not: &'static str,
    and: &'static str,
    or: &'static str,
    implies: &'static str,
    geq: &'static str,
}

impl Style {
    fn symbols(self) -> Symbols {
        match self {
            Style::Ascii => Symbols {
                top: "T",
                bot: "F",
                not: "~",
                and: "&",
                or: "|",
                implies: "->",
                geq: ">=",
            },
            Style::Unicode => Symbols {
                top: "⊤",
                bot: "⊥",
                not: "¬",
                and: "∧",
                or: "∨",
                implies: "→",
                geq: "≿",
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Ascii))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Ascii))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
