//! Command-line front end for the `fibra` workbench: s-expression
//! file formats for theories, prop-categories, structures, morphisms,
//! proofs and interpretations, plus the subcommand implementations.

pub mod formats;
pub mod sexp;
