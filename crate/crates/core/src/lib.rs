//! Reasoning about comparative likelihood.
//!
//! Formulas of the form `φ ≿ ψ` ("φ is at least as likely as ψ") are
//! interpreted over three families of finite models:
//!
//! * preferential models, a preorder on a distinguished set of states, read
//!   either with the inflationary *function* lifting or the inflationary
//!   *injection* lifting;
//! * multi-measure models, a nonempty set of exact rational probability
//!   measures compared by unanimity;
//! * distinguished-state models, compared by counting.
//!
//! On top of the model checker sit an exact decision procedure for the logic
//! of imprecise probability ([`decide::sat_ip`], [`decide::valid_ip`]), axiom
//! instantiation and soundness auditing ([`axioms`]), and the constructive
//! translations from measure models to counting and preferential models
//! ([`transform`]).
//!
//! ```
//! use qualprob::decide::{valid_ip, Options};
//! use qualprob::formula::parse;
//!
//! // Transitivity of "at least as likely" is valid...
//! let transitivity = parse("((p >= q) & (q >= r)) -> (p >= r)").unwrap();
//! assert!(valid_ip(&transitivity, &Options::default()).unwrap().is_valid());
//!
//! // ...but unions of unlikely events need not stay unlikely.
//! let union = parse("((p >= q) & (p >= r)) -> (p >= (q | r))").unwrap();
//! assert!(!valid_ip(&union, &Options::default()).unwrap().is_valid());
//! ```

pub mod axioms;
pub mod decide;
pub mod formula;
pub mod models;
pub mod random;
pub mod semantics;
pub mod transform;

pub use formula::{parse, Formula};
pub use models::{DistinguishedStateModel, Model, MultiMeasureModel, PreferentialModel, Rational};
pub use semantics::{eval, Semantics};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/deciding.md")]
    mod deciding {}
    #[doc = include_str!("../../../book/src/transformations.md")]
    mod transformations {}
}
