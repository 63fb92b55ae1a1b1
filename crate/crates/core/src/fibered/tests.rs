//! Morphism-layer tests.  The fixture family covers identities,
//! lattice collapses between Łukasiewicz and Gödel chains, a
//! powerset automorphism induced by swapping the carrier, and their
//! composites; every constructed morphism is validated exhaustively
//! before it is used in a factorization, completion, or transport.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::propcat::{
    check_fa, mk_lattice_propcat, mk_powerset_propcat, Elem, FinPropCategory, OpTable, QuantSpec,
    ValueLattice,
};
use crate::semantics::{satisfies, sweep::sweep_signature, Budget, Structure};
use crate::syntax::{Assertion, Context, Formula, Language, Signature, Term, Theory};

fn powerset_host() -> Arc<FinPropCategory> {
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

/// A Gödel chain: the Łukasiewicz order with `tensor = min`.
fn godel_chain(n: usize) -> ValueLattice {
    let mut l = ValueLattice::lukasiewicz_chain(n);
    l.name = format!("godel{n}");
    l.ops
        .insert("tensor".to_string(), OpTable::binary_from(n, usize::min));
    l
}

fn chain_host(name: &str, lattice: &ValueLattice, atom_size: usize) -> Arc<FinPropCategory> {
    Arc::new(
        mk_lattice_propcat(name, &[("A".to_string(), atom_size)], lattice, 2).unwrap(),
    )
}

fn l5_host() -> Arc<FinPropCategory> {
    chain_host("l5", &ValueLattice::lukasiewicz_chain(5), 2)
}

fn l2_host() -> Arc<FinPropCategory> {
    chain_host("l2", &ValueLattice::lukasiewicz_chain(2), 2)
}

/// Top-element indicator: a homomorphism from any chain with a
/// strict tensor onto the two-element chain.
fn top_indicator(n: usize) -> Vec<usize> {
    (0..n).map(|i| usize::from(i == n - 1)).collect()
}

/// The powerset-host automorphism conjugating everything by the
/// carrier swap on the atom.
fn swap_automorphism(pow: &Arc<FinPropCategory>) -> PropMorphism {
    let cb = pow.concrete.as_ref().unwrap();
    let ff = pow.finite().unwrap();
    let base = &pow.base;
    // Per object, the induced swap: flip every atom coordinate of the
    // carrier point.
    let swaps: Vec<usize> = (0..base.object_count())
        .map(|o| {
            let word_len = cb.words[o].len();
            let size = cb.carriers[o];
            let graph: Vec<usize> = (0..size)
                .map(|mut i| {
                    let mut coords = vec![0usize; word_len];
                    for c in coords.iter_mut().rev() {
                        *c = i % 2;
                        i /= 2;
                    }
                    coords.iter().fold(0, |acc, &c| acc * 2 + (1 - c))
                })
                .collect();
            cb.morphism_with_graph(o, o, &graph).unwrap()
        })
        .collect();
    let mmap: Vec<usize> = (0..base.morphism_count())
        .map(|m| {
            base.compose_chain(&[swaps[base.cod(m)], m, swaps[base.dom(m)]])
                .unwrap()
        })
        .collect();
    let pmap: Vec<Vec<u32>> = (0..base.object_count())
        .map(|o| ff.restriction[swaps[o]].clone())
        .collect();
    PropMorphism {
        name: "conj_swap".to_string(),
        source: Arc::clone(pow),
        target: Arc::clone(pow),
        omap: (0..base.object_count()).collect(),
        mmap,
        pmap,
    }
}

/// The fixture family: a dozen validated morphisms of varied shape.
fn fixture_morphisms() -> Vec<PropMorphism> {
    let pow = powerset_host();
    let l5 = l5_host();
    let l2 = l2_host();
    let g5 = chain_host("g5", &godel_chain(5), 2);
    let g3 = chain_host("g3", &godel_chain(3), 2);
    let g2 = chain_host("g2", &godel_chain(2), 2);
    let l5s = chain_host("l5s", &ValueLattice::lukasiewicz_chain(5), 1);
    let l2s = chain_host("l2s", &ValueLattice::lukasiewicz_chain(2), 1);
    let g5_to_g3 = pointwise_hom_morphism("g5->g3", &g5, &g3, &[0, 0, 1, 1, 2]).unwrap();
    let g3_to_g2 = pointwise_hom_morphism("g3->g2", &g3, &g2, &top_indicator(3)).unwrap();
    let composite = g5_to_g3.then(&g3_to_g2).unwrap();
    vec![
        PropMorphism::identity(&pow).unwrap(),
        PropMorphism::identity(&l5).unwrap(),
        PropMorphism::identity(&g5).unwrap(),
        pointwise_hom_morphism("l5->l2", &l5, &l2, &top_indicator(5)).unwrap(),
        pointwise_hom_morphism("l5s->l2s", &l5s, &l2s, &top_indicator(5)).unwrap(),
        g5_to_g3,
        g3_to_g2,
        pointwise_hom_morphism("g5->g2", &g5, &g2, &top_indicator(5)).unwrap(),
        composite,
        swap_automorphism(&pow),
        PropMorphism::identity(&l5s).unwrap(),
        pointwise_hom_morphism("g5s->g2s", &chain_host("g5s", &godel_chain(5), 1),
            &chain_host("g2s", &godel_chain(2), 1), &top_indicator(5)).unwrap(),
    ]
}

#[test]
fn fixture_morphisms_pass_every_law() {
    let fixtures = fixture_morphisms();
    assert!(fixtures.len() >= 10);
    for f in &fixtures {
        let report = check_morphism(f);
        assert!(report.ok(), "{}: {report}", f.name);
    }
}

#[test]
fn a_non_homomorphic_value_map_is_rejected() {
    let l5 = l5_host();
    let l2 = l2_host();
    // Sending 3/4 to 1 breaks the tensor: 3/4 ⊗ 3/4 = 1/2 ↦ 0 but
    // 1 ⊗ 1 = 1.
    let broken = pointwise_hom_morphism("broken", &l5, &l2, &[0, 0, 0, 1, 1]).unwrap();
    let report = check_morphism(&broken);
    assert!(!report.ok());
    assert!(report
        .violations
        .iter()
        .any(|v| v.condition == "condition 1"));
}

#[test]
fn wrong_endpoints_and_broken_naturality_are_reported() {
    let l5 = l5_host();
    let mut f = PropMorphism::identity(&l5).unwrap();
    // Swap two fiber elements over the terminal object: monotonicity
    // and naturality both break.
    let t = l5.base.terminal;
    f.pmap[t].swap(0, 1);
    let report = check_morphism(&f);
    assert!(!report.ok());
}

#[test]
fn factorization_splits_every_fixture_morphism() {
    for f in fixture_morphisms() {
        let fz = factorize(&f).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        // The image is itself a valid host.
        let report = check_fa(&fz.image);
        assert!(report.ok(), "im({}): {report}", f.name);
        // Both legs are valid morphisms.
        let re = check_morphism(&fz.corestriction);
        assert!(re.ok(), "eps({}): {re}", f.name);
        let ri = check_morphism(&fz.inclusion);
        assert!(ri.ok(), "incl({}): {ri}", f.name);
        // They recompose to the original.
        let back = fz.corestriction.then(&fz.inclusion).unwrap();
        assert_eq!(back.omap, f.omap, "{}", f.name);
        assert_eq!(back.mmap, f.mmap, "{}", f.name);
        assert_eq!(back.pmap, f.pmap, "{}", f.name);
        // The corestriction has the same kernel as the original.
        let ke = kernel(&fz.corestriction).unwrap();
        let kf = kernel(&f).unwrap();
        assert!(kernel_leq(&ke, &kf).unwrap(), "{}", f.name);
        assert!(kernel_leq(&kf, &ke).unwrap(), "{}", f.name);
        // The inclusion is a sub-prop-category morphism.
        assert!(is_subprop_morphism(&fz.inclusion).unwrap(), "{}", f.name);
    }
}

#[test]
fn kernel_orders_collapses_correctly() {
    let g5 = chain_host("g5", &godel_chain(5), 2);
    let g3 = chain_host("g3", &godel_chain(3), 2);
    let g2 = chain_host("g2", &godel_chain(2), 2);
    let coarse = pointwise_hom_morphism("g5->g2", &g5, &g2, &top_indicator(5)).unwrap();
    let fine = pointwise_hom_morphism("g5->g3", &g5, &g3, &[0, 0, 1, 1, 2]).unwrap();
    let kc = kernel(&coarse).unwrap();
    let kf = kernel(&fine).unwrap();
    // The finer collapse identifies less.
    assert!(kernel_leq(&kf, &kc).unwrap());
    assert!(!kernel_leq(&kc, &kf).unwrap());
    // Over the terminal object, 1/2 and 0 are identified by the
    // coarse map but separated by the fine one.
    let t = g5.base.terminal;
    assert!(kc.fiber_related(t, 2, t, 0));
    assert!(!kf.fiber_related(t, 2, t, 0));
}

#[test]
fn completion_exists_exactly_when_kernels_compare() {
    // Success: completing a morphism through its own corestriction
    // recovers the inclusion.
    let l5 = l5_host();
    let l2 = l2_host();
    let f = pointwise_hom_morphism("l5->l2", &l5, &l2, &top_indicator(5)).unwrap();
    let fz = factorize(&f).unwrap();
    match complete_through(&f, &fz.corestriction).unwrap() {
        Completion::Found(h) => {
            assert_eq!(h.omap, fz.inclusion.omap);
            assert_eq!(h.mmap, fz.inclusion.mmap);
            assert_eq!(h.pmap, fz.inclusion.pmap);
            assert!(check_morphism(&h).ok());
            // The preimage choice does not matter.
            match complete_through_with(&f, &fz.corestriction, true).unwrap() {
                Completion::Found(h2) => {
                    assert_eq!(h2.omap, h.omap);
                    assert_eq!(h2.mmap, h.mmap);
                    assert_eq!(h2.pmap, h.pmap);
                }
                Completion::Obstructed(o) => panic!("unexpected obstruction: {}", o.witness),
            }
        }
        Completion::Obstructed(o) => panic!("unexpected obstruction: {}", o.witness),
    }

    // Obstruction: the coarse collapse identifies a pair the finer
    // one separates, so nothing factors through it.
    let g5 = chain_host("g5", &godel_chain(5), 2);
    let g3 = chain_host("g3", &godel_chain(3), 2);
    let g2 = chain_host("g2", &godel_chain(2), 2);
    let through = pointwise_hom_morphism("g5->g2", &g5, &g2, &top_indicator(5)).unwrap();
    let fine = pointwise_hom_morphism("g5->g3", &g5, &g3, &[0, 0, 1, 1, 2]).unwrap();
    // complete_through factors through surjections; g5->g2 is
    // fiberwise surjective, so only the kernel comparison can fail.
    match complete_through(&fine, &through).unwrap() {
        Completion::Found(_) => panic!("a completion should not exist"),
        Completion::Obstructed(o) => {
            assert!(!o.witness.is_empty());
        }
    }
}

#[test]
fn two_cells_are_checked_for_naturality_and_fiber_compatibility() {
    let l5 = l5_host();
    let id = PropMorphism::identity(&l5).unwrap();
    let identity_cell = TwoCell {
        eta: (0..l5.base.object_count()).map(|o| l5.base.id(o)).collect(),
    };
    assert!(check_two_cell(&id, &id, &identity_cell).ok());
    // A component with the wrong endpoints is rejected.
    let a = l5
        .base
        .hom(l5.base.terminal, 1.min(l5.base.object_count() - 1))
        .first()
        .copied()
        .unwrap();
    let mut broken = identity_cell.clone();
    broken.eta[l5.base.terminal] = a;
    assert!(!check_two_cell(&id, &id, &broken).ok());
}

fn swap_structure(host: &Arc<FinPropCategory>) -> Structure {
    let cb = host.concrete.as_ref().unwrap();
    let b = cb.atom_object("B").unwrap();
    Structure {
        name: "swap".to_string(),
        host: Arc::clone(host),
        signature: sweep_signature(),
        sorts: BTreeMap::from([("s".to_string(), b)]),
        functions: BTreeMap::from([
            (
                "f".to_string(),
                cb.morphism_with_graph(b, b, &[1, 0]).unwrap(),
            ),
            (
                "c".to_string(),
                cb.morphism_with_graph(host.base.terminal, b, &[0]).unwrap(),
            ),
        ]),
        relations: BTreeMap::from([
            ("R".to_string(), Elem::Fin(0b10)),
            ("R2".to_string(), Elem::Fin(0b0010)),
        ]),
    }
}

fn sample_assertions(ctx_sort: &str) -> Vec<Assertion> {
    let ctx = Context::of(&[("x", ctx_sort)]);
    let rx = Formula::rel("R", vec![Term::var("x")]);
    let rfx = Formula::rel("R", vec![Term::app("f", vec![Term::var("x")])]);
    let ffx = Term::app("f", vec![Term::app("f", vec![Term::var("x")])]);
    vec![
        Assertion::eqn(ctx.clone(), ffx, Term::var("x"), ctx_sort),
        Assertion::seq(ctx.clone(), vec![rx.clone()], rx.clone()),
        Assertion::seq(ctx.clone(), vec![], Formula::Conn("e".to_string(), vec![])),
        Assertion::seq(ctx.clone(), vec![rx.clone()], rfx.clone()),
        Assertion::seq(ctx.clone(), vec![rfx], rx),
        Assertion::seq(
            Context::empty(),
            vec![],
            Formula::Quant(
                "exists".to_string(),
                "y".to_string(),
                ctx_sort.to_string(),
                Box::new(Formula::rel("R", vec![Term::var("y")])),
            ),
        ),
    ]
}

#[test]
fn transport_preserves_satisfaction_and_commutes() {
    let pow = powerset_host();
    let f = swap_automorphism(&pow);
    assert!(check_morphism(&f).ok());
    let s = swap_structure(&pow);
    s.validate().unwrap();
    let moved = transport_structure(&f, &s).unwrap();
    moved.validate().unwrap();
    for a in sample_assertions("s") {
        let before = satisfies(&s, &a).unwrap().verdict;
        if before {
            assert!(
                satisfies(&moved, &a).unwrap().verdict,
                "transport lost satisfaction of {a:?}"
            );
        }
    }
    let budget = Budget {
        max_ctx: 2,
        max_term_depth: 2,
        max_formula_depth: 2,
        max_antecedents: 1,
    };
    transport_commutes(&f, &s, &budget).unwrap();
}

#[test]
fn transport_commutes_along_a_lattice_collapse() {
    let l5 = l5_host();
    let l2 = l2_host();
    let f = pointwise_hom_morphism("l5->l2", &l5, &l2, &top_indicator(5)).unwrap();
    let cb = l5.concrete.as_ref().unwrap();
    let a = cb.atom_object("A").unwrap();
    let s = Structure {
        name: "halfish".to_string(),
        host: Arc::clone(&l5),
        signature: sweep_signature(),
        sorts: BTreeMap::from([("s".to_string(), a)]),
        functions: BTreeMap::from([
            (
                "f".to_string(),
                cb.morphism_with_graph(a, a, &[1, 0]).unwrap(),
            ),
            (
                "c".to_string(),
                cb.morphism_with_graph(l5.base.terminal, a, &[0]).unwrap(),
            ),
        ]),
        relations: BTreeMap::from([
            // R = (1/2, 1) pointwise; R2 constant 3/4, both as
            // little-endian base-5 digit strings.
            ("R".to_string(), Elem::Fin(2 + 5 * 4)),
            ("R2".to_string(), Elem::Fin(3 + 5 * 3 + 25 * 3 + 125 * 3)),
        ]),
    };
    s.validate().unwrap();
    let moved = transport_structure(&f, &s).unwrap();
    moved.validate().unwrap();
    // Pointwise: R survives only where it was 1.
    assert_eq!(moved.relations["R"], Elem::Fin(0 + 2 * 1));
    let budget = Budget {
        max_ctx: 2,
        max_term_depth: 2,
        max_formula_depth: 2,
        max_antecedents: 1,
    };
    transport_commutes(&f, &s, &budget).unwrap();
}

#[test]
fn small_product_host_is_a_prop_category() {
    let l5s = chain_host("l5s", &ValueLattice::lukasiewicz_chain(5), 1);
    let l2s = chain_host("l2s", &ValueLattice::lukasiewicz_chain(2), 1);
    let prod = product_propcat(&[Arc::clone(&l5s), Arc::clone(&l2s)], "l5xl2").unwrap();
    let report = check_fa(&prod.host);
    assert!(report.ok(), "{report}");
    for p in &prod.projections {
        let r = check_morphism(p);
        assert!(r.ok(), "{}: {r}", p.name);
    }
}

#[test]
fn pairing_into_a_product_recovers_the_components() {
    let l5s = chain_host("l5s", &ValueLattice::lukasiewicz_chain(5), 1);
    let prod = product_propcat(&[Arc::clone(&l5s), Arc::clone(&l5s)], "l5xl5").unwrap();
    let id = PropMorphism::identity(&l5s).unwrap();
    let diag = pair_into_product(&prod, &[id.clone(), id.clone()]).unwrap();
    assert!(check_morphism(&diag).ok());
    for p in &prod.projections {
        let back = diag.then(p).unwrap();
        assert_eq!(back.omap, id.omap);
        assert_eq!(back.mmap, id.mmap);
        assert_eq!(back.pmap, id.pmap);
    }
}

#[test]
fn empty_product_satisfies_every_assertion() {
    let prod = product_propcat(&[], "terminal").unwrap();
    assert!(check_fa(&prod.host).ok());
    let s = Structure {
        name: "point".to_string(),
        host: Arc::clone(&prod.host),
        signature: sweep_signature(),
        sorts: BTreeMap::from([("s".to_string(), 0)]),
        functions: BTreeMap::from([("f".to_string(), 0), ("c".to_string(), 0)]),
        relations: BTreeMap::from([
            ("R".to_string(), Elem::Fin(0)),
            ("R2".to_string(), Elem::Fin(0)),
        ]),
    };
    s.validate().unwrap();
    for a in sample_assertions("s") {
        assert!(
            satisfies(&s, &a).unwrap().verdict,
            "terminal structure fails {a:?}"
        );
    }
}

#[test]
fn product_structure_satisfies_exactly_the_common_assertions() {
    let pow = powerset_host();
    let l5s = chain_host("l5s", &ValueLattice::lukasiewicz_chain(5), 1);
    let prod = product_propcat(&[Arc::clone(&pow), Arc::clone(&l5s)], "pow_x_l5s").unwrap();
    for p in &prod.projections {
        assert!(check_morphism(p).ok(), "{}", p.name);
    }

    let s_pow = swap_structure(&pow);
    let cb = l5s.concrete.as_ref().unwrap();
    let a = cb.atom_object("A").unwrap();
    let s_l5 = Structure {
        name: "const".to_string(),
        host: Arc::clone(&l5s),
        signature: sweep_signature(),
        sorts: BTreeMap::from([("s".to_string(), a)]),
        functions: BTreeMap::from([
            ("f".to_string(), cb.morphism_with_graph(a, a, &[0]).unwrap()),
            (
                "c".to_string(),
                cb.morphism_with_graph(l5s.base.terminal, a, &[0]).unwrap(),
            ),
        ]),
        relations: BTreeMap::from([
            ("R".to_string(), Elem::Fin(4)), // value 1 at the point
            ("R2".to_string(), Elem::Fin(2)), // value 1/2
        ]),
    };
    s_l5.validate().unwrap();
    let s = external_product(&prod, &[&s_pow, &s_l5]).unwrap();
    s.validate().unwrap();

    // The shared language of the product keeps tensor/e and the two
    // quantifiers; build assertions in it.
    let ctx = Context::of(&[("x", "s")]);
    let rx = Formula::rel("R", vec![Term::var("x")]);
    let rfx = Formula::rel("R", vec![Term::app("f", vec![Term::var("x")])]);
    let r2xx = Formula::rel("R2", vec![Term::var("x"), Term::var("x")]);
    let checks = vec![
        Assertion::seq(ctx.clone(), vec![rx.clone()], rx.clone()),
        Assertion::seq(ctx.clone(), vec![], Formula::Conn("e".to_string(), vec![])),
        Assertion::seq(ctx.clone(), vec![rx.clone()], rfx.clone()),
        Assertion::seq(ctx.clone(), vec![rfx.clone()], rx.clone()),
        Assertion::seq(ctx.clone(), vec![r2xx.clone()], rx.clone()),
        Assertion::seq(
            ctx.clone(),
            vec![Formula::Conn("tensor".to_string(), vec![rx.clone(), rx.clone()])],
            rx.clone(),
        ),
        Assertion::seq(
            Context::empty(),
            vec![],
            Formula::Quant(
                "exists".to_string(),
                "y".to_string(),
                "s".to_string(),
                Box::new(Formula::rel("R", vec![Term::var("y")])),
            ),
        ),
        Assertion::seq(
            Context::empty(),
            vec![],
            Formula::Quant(
                "forall".to_string(),
                "y".to_string(),
                "s".to_string(),
                Box::new(Formula::rel("R", vec![Term::var("y")])),
            ),
        ),
        Assertion::eqn(
            ctx.clone(),
            Term::app("f", vec![Term::app("f", vec![Term::var("x")])]),
            Term::var("x"),
            "s",
        ),
    ];
    for a in checks {
        let in_pow = satisfies(&s_pow, &a).unwrap().verdict;
        let in_l5 = satisfies(&s_l5, &a).unwrap().verdict;
        let in_prod = satisfies(&s, &a).unwrap().verdict;
        assert_eq!(
            in_prod,
            in_pow && in_l5,
            "componentwise satisfaction fails for {a:?} (pow={in_pow}, l5={in_l5}, prod={in_prod})"
        );
    }
}

#[test]
fn submodels_are_recognized_along_inclusions() {
    let l5 = l5_host();
    let l2 = l2_host();
    let f = pointwise_hom_morphism("l5->l2", &l5, &l2, &top_indicator(5)).unwrap();
    let fz = factorize(&f).unwrap();
    // Build a structure in the image and check it against its own
    // transport along the inclusion.
    let cb = l5.concrete.as_ref().unwrap();
    let a = cb.atom_object("A").unwrap();
    let src = Structure {
        name: "img_side".to_string(),
        host: Arc::clone(&fz.image),
        signature: sweep_signature(),
        sorts: BTreeMap::from([("s".to_string(), a)]),
        functions: BTreeMap::from([
            (
                "f".to_string(),
                fz.corestriction.mor(cb.morphism_with_graph(a, a, &[1, 0]).unwrap()),
            ),
            (
                "c".to_string(),
                fz.corestriction
                    .mor(cb.morphism_with_graph(l5.base.terminal, a, &[0]).unwrap()),
            ),
        ]),
        relations: BTreeMap::from([
            ("R".to_string(), Elem::Fin(0)),
            ("R2".to_string(), Elem::Fin(0)),
        ]),
    };
    src.validate().unwrap();
    let ambient = transport_structure(&fz.inclusion, &src).unwrap();
    assert!(external_submodel(&fz.inclusion, &src, &ambient).unwrap());
    // A mismatched ambient structure is rejected.
    let mut other = ambient.clone();
    other
        .relations
        .insert("R".to_string(), Elem::Fin(1));
    assert!(!external_submodel(&fz.inclusion, &src, &other).unwrap());
    // A non-embedding is rejected outright.
    let collapse = pointwise_hom_morphism("l5->l2", &l5, &l2, &top_indicator(5)).unwrap();
    let s5 = {
        let mut s = src.clone();
        s.host = Arc::clone(&l5);
        s.functions.insert(
            "f".to_string(),
            cb.morphism_with_graph(a, a, &[1, 0]).unwrap(),
        );
        s.functions.insert(
            "c".to_string(),
            cb.morphism_with_graph(l5.base.terminal, a, &[0]).unwrap(),
        );
        s
    };
    let moved = transport_structure(&collapse, &s5).unwrap();
    assert!(!external_submodel(&collapse, &s5, &moved).unwrap());
}

#[test]
fn internal_structure_presents_the_host_to_itself() {
    let l5s = chain_host("l5s", &ValueLattice::lukasiewicz_chain(5), 1);
    let (sig, s) = internal_structure(&l5s).unwrap();
    s.validate().unwrap();
    assert_eq!(sig.sorts.len(), l5s.base.object_count());
    assert_eq!(sig.functions.len(), l5s.base.morphism_count());
    // A fiber-element relation interprets as exactly that element.
    let ff = l5s.finite().unwrap();
    for c in 0..l5s.base.object_count() {
        if c == l5s.base.terminal {
            continue;
        }
        let sort = format!("s{c}");
        let ctx = Context::of(&[("x", sort.as_str())]);
        for r in 0..ff.fibers[c].len() {
            let phi = Formula::rel(&format!("r{c}_{r}"), vec![Term::var("x")]);
            let got = crate::semantics::interpret_formula(&s, &ctx, &phi).unwrap();
            assert_eq!(got, Elem::Fin(r));
        }
    }
    // Composition is reflected by term equality: for composable
    // morphisms g∘f = h, the equation m_g(m_f(x)) = m_h(x) holds.
    let base = &l5s.base;
    let mut checked = 0;
    for (&(g, f), &gf) in base.comp.iter().take(20) {
        let dom = base.dom(f);
        let sort = format!("s{dom}");
        let ctx = Context::of(&[("x", sort.as_str())]);
        let lhs = Term::app(&format!("m{g}"), vec![Term::app(&format!("m{f}"), vec![Term::var("x")])]);
        let rhs = Term::app(&format!("m{gf}"), vec![Term::var("x")]);
        let eqn = Assertion::eqn(ctx, lhs, rhs, &format!("s{}", base.cod(g)));
        assert!(satisfies(&s, &eqn).unwrap().verdict);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn theory_translation_substitutes_symbol_images() {
    let mut sig = Signature::new();
    sig.add_sort("s");
    sig.functions.insert(
        "f".to_string(),
        crate::syntax::FnType {
            args: vec!["s".to_string()],
            result: "s".to_string(),
        },
    );
    sig.relations.insert("R".to_string(), vec!["s".to_string()]);
    let mut lang = Language::minimal();
    lang.quantifiers.insert("forall".to_string());
    let ctx = Context::of(&[("x", "s")]);
    let ax = Assertion::seq(
        ctx,
        vec![Formula::rel("R", vec![Term::var("x")])],
        Formula::rel("R", vec![Term::app("f", vec![Term::var("x")])]),
    );
    let theory = Theory::new(sig.clone(), lang.clone(), vec![ax]);

    // Identity interpretation: translation is syntactically trivial.
    let id = SignatureInterpretation::identity(&sig);
    let same = translate_theory(&id, &theory, &sig, &lang).unwrap();
    assert_eq!(same.axioms, theory.axioms);

    // Doubling interpretation: f ↦ f∘f.
    let mut interp = SignatureInterpretation::identity(&sig);
    interp.fns.insert(
        "f".to_string(),
        FnImage {
            params: vec!["p1".to_string()],
            body: Term::app("f", vec![Term::app("f", vec![Term::var("p1")])]),
        },
    );
    let doubled = translate_theory(&interp, &theory, &sig, &lang).unwrap();
    let expected = Assertion::seq(
        Context::of(&[("x", "s")]),
        vec![Formula::rel("R", vec![Term::var("x")])],
        Formula::rel(
            "R",
            vec![Term::app(
                "f",
                vec![Term::app("f", vec![Term::var("x")])],
            )],
        ),
    );
    assert_eq!(doubled.axioms, vec![expected]);

    // Interpretations compose.
    let twice = interp.then(&interp).unwrap();
    let body = &twice.fns["f"].body;
    // f ↦ f⁴(p1)
    let mut depth = 0;
    let mut cur = body;
    while let Term::App(_, args) = cur {
        depth += 1;
        cur = &args[0];
    }
    assert_eq!(depth, 4);

    // Missing images are rejected.
    let mut partial = SignatureInterpretation::identity(&sig);
    partial.rels.clear();
    assert!(translate_theory(&partial, &theory, &sig, &lang).is_err());
}
