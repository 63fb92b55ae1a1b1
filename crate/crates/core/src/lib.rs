//! A finite-scale workbench for prop-categorical semantics of
//! nonclassical first-order logics.
//!
//! The crate is organised in five layers:
//!
//! * [`syntax`] — multi-sorted first-order syntax with contexts:
//!   signatures, terms, formulas, assertions, theories, α-equivalence
//!   and capture-avoiding substitution.
//! * [`calculus`] — proof objects for equational logic, the minimal
//!   sequent rules, and the adjoint quantifier/equality rules, plus a
//!   bounded backward proof search.
//! * [`propcat`] — finite prop-categories: a base category with
//!   designated finite products together with poset-valued fibers
//!   carrying connective algebras, quantifier maps and fibered
//!   equality; includes a full axiom verifier and builtin constructor
//!   families (lattice-valued, powerset/Mostowski, fuzzy T-norm).
//! * [`semantics`] — structures in a prop-category, the recursive
//!   interpretation of terms and formulas in context, satisfaction,
//!   bounded theories of structures, and a randomized rule-soundness
//!   sweep.
//! * [`fibered`] — morphisms of prop-categories and the universal
//!   algebra built on them: kernels, structure transport, products,
//!   images, the homomorphism theorem, external H/S/P operations,
//!   theory translation and internal structures.
//!
//! All values are immutable after construction and all operations are
//! pure, so everything is safe to share across threads.

pub mod calculus;
pub mod fibered;
pub mod propcat;
pub mod semantics;
pub mod syntax;

pub use num_rational::BigRational;

/// Exact rational truth value used by symbolic (fuzzy) fibers.
pub type Rat = num_rational::BigRational;

/// Build an exact rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    use num_bigint::BigInt;
    Rat::new(BigInt::from(num), BigInt::from(den))
}
