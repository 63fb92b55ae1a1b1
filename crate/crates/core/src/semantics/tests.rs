//! Semantics tests.  The centerpiece is an independent oracle: on
//! subset-valued hosts over a concrete carrier, formulas can be
//! evaluated directly by Tarskian recursion over variable
//! assignments, and the categorical interpretation must agree with it
//! bit for bit.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::sweep::{random_formula, random_structure, random_term, sweep, sweep_signature, SweepConfig};
use super::*;
use crate::calculus::RuleId;
use crate::propcat::{
    mk_fuzzy_propcat, mk_lattice_propcat, mk_powerset_propcat, Elem, FinPropCategory,
    FuzzyQuantifier, QuantSpec, TNorm, ValueLattice,
};
use crate::rat;
use crate::syntax::{substitute_formula, Context, Signature, Term};

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

fn l5_host() -> Arc<FinPropCategory> {
    Arc::new(
        mk_lattice_propcat(
            "l5",
            &[("A".to_string(), 2)],
            &ValueLattice::lukasiewicz_chain(5),
            2,
        )
        .unwrap(),
    )
}

/// A fixed structure on the powerset host: `f` swaps the two carrier
/// points, `c` names point 0, `R = {1}`, `R2 = {(0,1)}`.
fn swap_structure(host: &Arc<FinPropCategory>) -> Structure {
    let cb = host.concrete.as_ref().unwrap();
    let b = cb.atom_object("B").unwrap();
    let square = host.base.nary_product(&[b, b]).unwrap().obj;
    let _ = square;
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
            // bit i ⇔ point i ∈ R; bit 2a+j ⇔ (a,j) ∈ R2.
            ("R".to_string(), Elem::Fin(0b10)),
            ("R2".to_string(), Elem::Fin(0b0010)),
        ]),
    }
}

#[test]
fn equations_compare_interpreted_morphisms() {
    let host = powerset_host();
    let s = swap_structure(&host);
    s.validate().unwrap();
    let ctx = Context::of(&[("x", "s")]);
    let ffx = Term::app("f", vec![Term::app("f", vec![Term::var("x")])]);
    let involutive = Assertion::eqn(ctx.clone(), ffx.clone(), Term::var("x"), "s");
    assert!(satisfies(&s, &involutive).unwrap().verdict);
    let fixed = Assertion::eqn(ctx, Term::app("f", vec![Term::var("x")]), Term::var("x"), "s");
    assert!(!satisfies(&s, &fixed).unwrap().verdict);

    // The same equation fails once f is a constant map.
    let cb = host.concrete.as_ref().unwrap();
    let b = cb.atom_object("B").unwrap();
    let mut collapsed = s.clone();
    collapsed
        .functions
        .insert("f".to_string(), cb.morphism_with_graph(b, b, &[0, 0]).unwrap());
    assert!(!satisfies(&collapsed, &involutive).unwrap().verdict);
}

#[test]
fn sequent_satisfaction_is_containment_in_the_fiber() {
    let host = powerset_host();
    let s = swap_structure(&host);
    let ctx2 = Context::of(&[("x", "s"), ("y", "s")]);
    let rxy = Formula::rel("R2", vec![Term::var("x"), Term::var("y")]);
    let ryx = Formula::rel("R2", vec![Term::var("y"), Term::var("x")]);
    // R2 = {(0,1)} is not symmetric.
    let sym = Assertion::seq(ctx2.clone(), vec![rxy.clone()], ryx);
    let report = satisfies(&s, &sym).unwrap();
    assert!(!report.verdict, "{report}");
    assert!(satisfies(&s, &Assertion::seq(ctx2.clone(), vec![rxy.clone()], rxy.clone())).unwrap().verdict);

    // The empty antecedent list denotes e = ⊤, which only entails ⊤.
    let top = Assertion::seq(ctx2.clone(), vec![], Formula::e());
    assert!(satisfies(&s, &top).unwrap().verdict);
    let all_r = Assertion::seq(
        Context::of(&[("x", "s")]),
        vec![],
        Formula::rel("R", vec![Term::var("x")]),
    );
    assert!(!satisfies(&s, &all_r).unwrap().verdict);
}

#[test]
fn diagonal_equality_atoms() {
    let host = powerset_host();
    let s = swap_structure(&host);
    let refl = Assertion::seq(
        Context::of(&[("x", "s")]),
        vec![],
        Formula::eq(Term::var("x"), Term::var("x"), "s"),
    );
    assert!(satisfies(&s, &refl).unwrap().verdict);
    let all_eq = Assertion::seq(
        Context::of(&[("x", "s"), ("y", "s")]),
        vec![],
        Formula::eq(Term::var("x"), Term::var("y"), "s"),
    );
    assert!(!satisfies(&s, &all_eq).unwrap().verdict);
}

// ---------------------------------------------------------------
// Independent Tarskian oracle on the powerset host.
// ---------------------------------------------------------------

fn oracle_term(s: &Structure, asg: &BTreeMap<String, usize>, t: &Term) -> usize {
    match t {
        Term::Var(v) => asg[v],
        Term::App(f, args) => {
            let cb = s.host.concrete.as_ref().unwrap();
            let n = cb.carriers[s.sorts["s"]];
            let mut idx = 0;
            for a in args {
                idx = idx * n + oracle_term(s, asg, a);
            }
            cb.functions[s.functions[f]][idx]
        }
    }
}

fn oracle_formula(s: &Structure, asg: &BTreeMap<String, usize>, f: &Formula) -> bool {
    let n = s.host.concrete.as_ref().unwrap().carriers[s.sorts["s"]];
    match f {
        Formula::Rel(r, args) => {
            let mut idx = 0;
            for a in args {
                idx = idx * n + oracle_term(s, asg, a);
            }
            let mask = match &s.relations[r] {
                Elem::Fin(m) => *m,
                _ => panic!("oracle needs bitmask relations"),
            };
            (mask >> idx) & 1 == 1
        }
        Formula::Eq(l, r, _) => oracle_term(s, asg, l) == oracle_term(s, asg, r),
        Formula::Conn(c, args) => match c.as_str() {
            "e" => true,
            "not" => !oracle_formula(s, asg, &args[0]),
            "and" | "tensor" => args.iter().all(|a| oracle_formula(s, asg, a)),
            "or" => args.iter().any(|a| oracle_formula(s, asg, a)),
            other => panic!("oracle does not know connective {other}"),
        },
        Formula::Quant(q, x, _, body) => {
            let eval = |v: usize| {
                let mut asg2 = asg.clone();
                asg2.insert(x.clone(), v);
                oracle_formula(s, &asg2, body)
            };
            match q.as_str() {
                "forall" => (0..n).all(eval),
                "exists" => (0..n).any(eval),
                other => panic!("oracle does not know quantifier {other}"),
            }
        }
    }
}

/// Every assignment of carrier points to the context variables, with
/// the row-major index of the corresponding point of ⟦Γ⟧.
fn assignments(s: &Structure, ctx: &Context) -> Vec<(BTreeMap<String, usize>, usize)> {
    let n = s.host.concrete.as_ref().unwrap().carriers[s.sorts["s"]];
    let mut out = vec![(BTreeMap::new(), 0usize)];
    for (v, _) in ctx.entries() {
        out = out
            .into_iter()
            .flat_map(|(asg, idx)| {
                (0..n).map(move |p| {
                    let mut asg2 = asg.clone();
                    asg2.insert(v.clone(), p);
                    (asg2, idx * n + p)
                })
            })
            .collect();
    }
    out
}

#[test]
fn interpretation_agrees_with_tarskian_evaluation() {
    let host = powerset_host();
    let sg = sweep_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACE);
    let names = ["x", "y"];
    for _ in 0..350 {
        let s = random_structure(&host, &sg, &mut rng);
        let so = s.sorts["s"];
        let k = rng.gen_range(0..=2usize);
        let ctx = Context::new(
            names[..k].iter().map(|v| (v.to_string(), "s".to_string())).collect(),
        )
        .unwrap();
        let allow_quant = host.base.nary_product(&vec![so; k + 1]).is_some();
        let f = random_formula(&s, &ctx, allow_quant, &mut rng);
        let interpreted = match interpret_formula(&s, &ctx, &f) {
            Ok(Elem::Fin(mask)) => mask,
            Ok(_) => unreachable!(),
            Err(e) => panic!("uninterpretable formula {f}: {e}"),
        };
        for (asg, idx) in assignments(&s, &ctx) {
            assert_eq!(
                (interpreted >> idx) & 1 == 1,
                oracle_formula(&s, &asg, &f),
                "formula {f} at assignment {asg:?} in {}",
                s.name
            );
        }

        // The same comparison for sequent satisfaction: the verdict
        // must equal pointwise material implication.
        let antecedents: Vec<Formula> = (0..rng.gen_range(0..=2))
            .map(|_| random_formula(&s, &ctx, allow_quant, &mut rng))
            .collect();
        let consequent = random_formula(&s, &ctx, allow_quant, &mut rng);
        let a = Assertion::seq(ctx.clone(), antecedents.clone(), consequent.clone());
        let verdict = satisfies(&s, &a).unwrap().verdict;
        let expected = assignments(&s, &ctx).iter().all(|(asg, _)| {
            !antecedents.iter().all(|f| oracle_formula(&s, asg, f))
                || oracle_formula(&s, asg, &consequent)
        });
        assert_eq!(verdict, expected, "{a} in {}", s.name);
    }
}

// ---------------------------------------------------------------
// Structural properties of the interpretation.
// ---------------------------------------------------------------

#[test]
fn substitution_commutes_with_interpretation() {
    let sg = sweep_signature();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for host in [powerset_host(), l5_host()] {
        for _ in 0..150 {
            let s = random_structure(&host, &sg, &mut rng);
            let gamma_ctx = Context::of(&[("x", "s")]);
            let ext_ctx = gamma_ctx.extended("z", "s").unwrap();
            let phi = random_formula(&s, &ext_ctx, false, &mut rng);
            let m = random_term(&gamma_ctx, &mut rng);
            // ⟦φ[M/z]⟧ = P(⟨π, ⟦M⟧⟩)(⟦φ⟧)
            let substituted = substitute_formula(
                &phi,
                &BTreeMap::from([("z".to_string(), m.clone())]),
                &gamma_ctx.vars(),
            );
            let lhs = interpret_formula(&s, &gamma_ctx, &substituted).unwrap();
            let gamma = s.ctx_product(&gamma_ctx).unwrap();
            let mm = interpret_term(&s, &gamma_ctx, &m).unwrap();
            let tuple = s
                .host
                .base
                .nary_tuple(gamma.obj, &[gamma.projections[0], mm])
                .unwrap();
            let inner = interpret_formula(&s, &ext_ctx, &phi).unwrap();
            let rhs = s.host.restrict(tuple, &inner).unwrap();
            assert_eq!(lhs, rhs, "φ = {phi}, M = {m} in {}", host.name);
        }
    }
}

#[test]
fn bound_variable_names_are_irrelevant() {
    let host = powerset_host();
    let s = swap_structure(&host);
    let ctx = Context::of(&[("y", "s")]);
    let with_v = Formula::quant(
        "forall",
        "v",
        "s",
        Formula::rel("R2", vec![Term::var("y"), Term::var("v")]),
    );
    let with_w = Formula::quant(
        "forall",
        "w",
        "s",
        Formula::rel("R2", vec![Term::var("y"), Term::var("w")]),
    );
    assert_eq!(
        interpret_formula(&s, &ctx, &with_v).unwrap(),
        interpret_formula(&s, &ctx, &with_w).unwrap()
    );

    // A binder shadowing a context variable is renamed, not captured.
    let ctx_x = Context::of(&[("x", "s")]);
    let shadowing = Formula::quant("exists", "x", "s", Formula::rel("R", vec![Term::var("x")]));
    let fresh = Formula::quant("exists", "u", "s", Formula::rel("R", vec![Term::var("u")]));
    assert_eq!(
        interpret_formula(&s, &ctx_x, &shadowing).unwrap(),
        interpret_formula(&s, &ctx_x, &fresh).unwrap()
    );
}

#[test]
fn product_tnorm_quantifiers_on_the_constant_half() {
    let host = Arc::new(
        mk_fuzzy_propcat(
            "fuz",
            &[("A".to_string(), 1), ("B".to_string(), 2)],
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
    );
    let mut sg = Signature::new();
    sg.add_sort("s");
    sg.add_rel("R", vec!["s"]);
    let cb = host.concrete.as_ref().unwrap();
    let b = cb.atom_object("B").unwrap();
    let s = Structure {
        name: "half".to_string(),
        host: Arc::clone(&host),
        signature: sg,
        sorts: BTreeMap::from([("s".to_string(), b)]),
        functions: BTreeMap::new(),
        relations: BTreeMap::from([(
            "R".to_string(),
            Elem::Fuz(vec![rat(1, 2), rat(1, 2)]),
        )]),
    };
    s.validate().unwrap();
    let ctx = Context::empty();
    let body = Formula::rel("R", vec![Term::var("x")]);
    let at = |q: &str| {
        interpret_formula(&s, &ctx, &Formula::quant(q, "x", "s", body.clone())).unwrap()
    };
    // Over a two-point carrier at the constant 1/2, the generalized
    // product quantifier multiplies to exactly 1/4 while the lattice
    // quantifiers stay at 1/2.
    assert_eq!(at("Oprod"), Elem::Fuz(vec![rat(1, 4)]));
    assert_eq!(at("forall"), Elem::Fuz(vec![rat(1, 2)]));
    assert_eq!(at("exists"), Elem::Fuz(vec![rat(1, 2)]));
}

// ---------------------------------------------------------------
// Rule-soundness sweeps.
// ---------------------------------------------------------------

#[test]
fn rule_sweeps_find_no_violations_on_verified_hosts() {
    let rules: Vec<RuleId> = RuleId::all()
        .into_iter()
        .filter(|r| *r != RuleId::Axiom)
        .collect();
    let cfg = SweepConfig { seed: 42, trials: 60 };
    let mut applicable: BTreeMap<RuleId, usize> = BTreeMap::new();
    for host in [powerset_host(), l5_host()] {
        for outcome in sweep(&host, &rules, &cfg) {
            assert!(
                outcome.violations.is_empty(),
                "{} on {}: {:?}",
                outcome.rule,
                host.name,
                outcome.violations
            );
            *applicable.entry(outcome.rule).or_default() += outcome.applicable;
        }
    }
    // Every rule must have been exercised non-vacuously somewhere.
    for rule in &rules {
        assert!(
            applicable.get(rule).copied().unwrap_or(0) > 0,
            "no applicable instance of {rule} in 120 trials"
        );
    }
}

// ---------------------------------------------------------------
// Bounded theories.
// ---------------------------------------------------------------

fn small_signature() -> Signature {
    let mut sg = Signature::new();
    sg.add_sort("s");
    sg.add_fn("f", vec!["s"], "s");
    sg.add_fn("c", vec![], "s");
    sg.add_rel("R", vec!["s"]);
    sg
}

#[test]
fn budgeted_theory_contains_identities_and_grows_with_the_budget() {
    let host = powerset_host();
    let mut s = swap_structure(&host);
    s.signature = small_signature();
    s.relations.remove("R2");
    s.validate().unwrap();

    let small = Budget {
        max_ctx: 1,
        max_term_depth: 3,
        max_formula_depth: 1,
        max_antecedents: 1,
    };
    let theory = theory_of(&s, &small);
    let ctx = Context::of(&[("x1", "s")]);
    let r = Formula::rel("R", vec![Term::var("x1")]);
    assert!(theory.contains(&Assertion::seq(ctx.clone(), vec![r.clone()], r.clone())));
    assert!(theory.contains(&Assertion::seq(ctx.clone(), vec![], Formula::e())));
    assert!(!theory.contains(&Assertion::seq(ctx.clone(), vec![], r.clone())));
    // f is involutive in this structure, and the enumeration reaches
    // the equation at term depth 2.
    let ffx = Term::app("f", vec![Term::app("f", vec![Term::var("x1")])]);
    assert!(theory.contains(&Assertion::eqn(ctx, ffx, Term::var("x1"), "s")));

    // Raising any budget axis only adds assertions.
    let more_antecedents = Budget { max_antecedents: 2, ..small };
    let bigger = theory_of(&s, &more_antecedents);
    for a in &theory {
        assert!(bigger.contains(a), "lost {a} when raising the budget");
    }
    let deeper = Budget {
        max_ctx: 0,
        max_formula_depth: 2,
        ..small
    };
    let shallow = Budget {
        max_ctx: 0,
        max_formula_depth: 1,
        ..small
    };
    let deep_theory = theory_of(&s, &deeper);
    for a in theory_of(&s, &shallow) {
        assert!(deep_theory.contains(&a), "lost {a} when deepening formulas");
    }
}
