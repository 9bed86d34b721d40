//! Stable matching by constraint propagation.
//!
//! The crate couples a small finite-domain kernel ([`kernel`]) with an n-ary
//! stability constraint ([`constraint`]) posted over one variable per person,
//! whose arc-consistent fixpoint reproduces the reduced preference lists of
//! the Gale-Shapley algorithm. On top of those sit a failure-free enumerator
//! for the full set of stable matchings and a branch-and-bound optimiser for
//! the sex-equal objective ([`search`]). An independent implementation of the
//! extended Gale-Shapley algorithm ([`egs`]) and a brute-force stability
//! checker ([`oracle`]) serve as cross-validation references.
//!
//! People and preference ranks are numbered from 1 in every public interface,
//! matching the instance file format.

pub mod constraint;
pub mod egs;
pub mod instance;
pub mod kernel;
pub mod matching;
pub mod oracle;
pub mod search;
