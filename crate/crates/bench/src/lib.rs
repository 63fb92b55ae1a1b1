//! Shared host constructors for the benchmarks in `benches/`.

use std::sync::Arc;

use fibra::propcat::{
    mk_fuzzy_propcat, mk_lattice_propcat, mk_powerset_propcat, FinPropCategory, FuzzyQuantifier,
    QuantSpec, TNorm, ValueLattice,
};

pub fn powerset_host() -> Arc<FinPropCategory> {
    Arc::new(
        mk_powerset_propcat(
            "pow",
            &[("B".to_string(), 2)],
            &[
                ("forall".to_string(), QuantSpec::Forall),
                ("exists".to_string(), QuantSpec::Exists),
            ],
            2,
        )
        .unwrap(),
    )
}

pub fn lukasiewicz_host(n: usize, atom_size: usize) -> Arc<FinPropCategory> {
    Arc::new(
        mk_lattice_propcat(
            &format!("l{n}"),
            &[("A".to_string(), atom_size)],
            &ValueLattice::lukasiewicz_chain(n),
            2,
        )
        .unwrap(),
    )
}

pub fn fuzzy_host() -> Arc<FinPropCategory> {
    Arc::new(
        mk_fuzzy_propcat(
            "fuzzy",
            &[("B".to_string(), 2)],
            TNorm::Product,
            &[
                FuzzyQuantifier::Forall,
                FuzzyQuantifier::Exists,
                FuzzyQuantifier::Oprod,
            ],
            2,
            None,
        )
        .unwrap(),
    )
}
