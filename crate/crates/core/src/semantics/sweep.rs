//! Randomized rule-soundness sweeps: for each inference rule,
//! generate seeded random instances (random structure in a host plus
//! random instantiation syntax), confirm the instance against the
//! proof checker, and verify that whenever every premise is satisfied
//! the conclusion is too.
//!
//! Instances are built to each rule's schema, so the proof-checker
//! confirmation is a self-test of the generator; a generation bug
//! surfaces as a hard error rather than a silent vacuous pass.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{check_proof, ProofNode, RuleId};
use crate::propcat::{Elem, Fibers, FinPropCategory, Obj};
use crate::syntax::{
    substitute_formula, substitute_term, Assertion, Context, Formula, Signature, Term, Theory,
};

use super::{satisfies, Structure};

/// Sweep parameters: the RNG seed and the number of instances per
/// rule.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            trials: 200,
        }
    }
}

/// Per-rule sweep outcome.  `applicable` counts trials whose premises
/// were all satisfied (the non-vacuous ones); `violations` holds a
/// rendering of every instance whose premises held but whose
/// conclusion failed.
#[derive(Debug, Clone)]
pub struct RuleOutcome {
    pub rule: RuleId,
    pub trials: usize,
    pub applicable: usize,
    pub violations: Vec<String>,
}

/// Sweep every rule in `rules` over `trials` random instances in the
/// given host.  Panics if the generator emits an instance the proof
/// checker rejects (a generator bug, not a soundness result).
pub fn sweep(
    host: &Arc<FinPropCategory>,
    rules: &[RuleId],
    cfg: &SweepConfig,
) -> Vec<RuleOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sg = sweep_signature();
    let lang = host.language();
    let theory_template = Theory::new(sg.clone(), lang, vec![]);
    let mut out = vec![];
    for &rule in rules {
        let mut outcome = RuleOutcome {
            rule,
            trials: cfg.trials,
            applicable: 0,
            violations: vec![],
        };
        for _ in 0..cfg.trials {
            let s = random_structure(host, &sg, &mut rng);
            let Some((premises, conclusion)) = random_instance(rule, &s, &mut rng) else {
                continue; // rule not instantiable in this host
            };
            confirm_instance(&theory_template, rule, &premises, &conclusion);
            let mut all_premises_hold = true;
            let mut interpretable = true;
            for p in &premises {
                match satisfies(&s, p) {
                    Ok(r) => {
                        if !r.verdict {
                            all_premises_hold = false;
                            break;
                        }
                    }
                    Err(_) => {
                        interpretable = false;
                        break;
                    }
                }
            }
            if !interpretable || !all_premises_hold {
                continue;
            }
            match satisfies(&s, &conclusion) {
                Ok(r) => {
                    outcome.applicable += 1;
                    if !r.verdict {
                        outcome.violations.push(format!(
                            "structure {} in {}: premises hold but conclusion fails: {r}",
                            s.name, host.name
                        ));
                    }
                }
                Err(_) => {} // conclusion not interpretable: skip
            }
        }
        out.push(outcome);
    }
    out
}

/// Feed the generated instance through the proof checker, premises
/// quoted as theory axioms.
fn confirm_instance(template: &Theory, rule: RuleId, premises: &[Assertion], conclusion: &Assertion) {
    let theory = Theory::new(
        template.signature.clone(),
        template.language.clone(),
        premises.to_vec(),
    );
    let node = ProofNode::node(
        rule,
        conclusion.clone(),
        premises
            .iter()
            .map(|p| ProofNode::leaf(RuleId::Axiom, p.clone()))
            .collect(),
    );
    let mut enabled = std::collections::BTreeSet::from([rule]);
    enabled.insert(RuleId::Axiom);
    if let Err(e) = check_proof(&theory, &enabled, &node) {
        panic!("sweep generator produced an invalid {rule} instance: {e}\n{conclusion}");
    }
}

/// The sweep's fixed one-sort signature: a unary function, a
/// constant, and unary/binary relations.
pub fn sweep_signature() -> Signature {
    let mut sg = Signature::new();
    sg.add_sort("s");
    sg.add_fn("f", vec!["s"], "s");
    sg.add_fn("c", vec![], "s");
    sg.add_rel("R", vec!["s"]);
    sg.add_rel("R2", vec!["s", "s"]);
    sg
}

/// Objects eligible to interpret the sweep sort: their square (and
/// hence every context the generator emits) must exist.
fn eligible_sort_objects(host: &FinPropCategory) -> Vec<Obj> {
    (0..host.base.object_count())
        .filter(|&o| host.base.nary_product(&[o, o]).is_some())
        .collect()
}

/// A uniformly random element of the fiber over `at` (index for
/// finite fibers, probe element for symbolic ones).
fn random_elem(host: &FinPropCategory, at: Obj, rng: &mut ChaCha8Rng) -> Elem {
    match &host.fibers {
        Fibers::Finite(ff) => Elem::Fin(rng.gen_range(0..ff.fibers[at].len())),
        Fibers::Fuzzy(fz) => {
            let probes = &fz.probes[at];
            Elem::Fuz(probes[rng.gen_range(0..probes.len())].clone())
        }
    }
}

/// A random structure over the sweep signature in the host.
pub fn random_structure(
    host: &Arc<FinPropCategory>,
    sg: &Signature,
    rng: &mut ChaCha8Rng,
) -> Structure {
    let eligible = eligible_sort_objects(host);
    let so = eligible[rng.gen_range(0..eligible.len())];
    let random_mor = |dom: Obj, cod: Obj, rng: &mut ChaCha8Rng| {
        let pool = host.base.hom(dom, cod);
        assert!(!pool.is_empty(), "empty hom-set in sweep host");
        pool[rng.gen_range(0..pool.len())]
    };
    let square = host.base.nary_product(&[so, so]).unwrap().obj;
    let s = Structure {
        name: format!("random@{}", host.base.objects[so]),
        host: Arc::clone(host),
        signature: sg.clone(),
        sorts: BTreeMap::from([("s".to_string(), so)]),
        functions: BTreeMap::from([
            ("f".to_string(), random_mor(so, so, rng)),
            ("c".to_string(), random_mor(host.base.terminal, so, rng)),
        ]),
        relations: BTreeMap::from([
            ("R".to_string(), random_elem(host, so, rng)),
            ("R2".to_string(), random_elem(host, square, rng)),
        ]),
    };
    debug_assert!(s.validate().is_ok());
    s
}

/// A random term of sort `s` over the context, depth ≤ 2.
pub(crate) fn random_term(ctx: &Context, rng: &mut ChaCha8Rng) -> Term {
    let mut leaves: Vec<Term> = ctx.entries().iter().map(|(v, _)| Term::var(v)).collect();
    leaves.push(Term::app("c", vec![]));
    let leaf = leaves[rng.gen_range(0..leaves.len())].clone();
    if rng.gen_bool(0.5) {
        Term::app("f", vec![leaf])
    } else {
        leaf
    }
}

/// A random formula over the context, depth ≤ 2, drawn from the
/// host's connectives and quantifiers.  Quantifiers are only emitted
/// when `allow_quant` (the caller knows whether the extended context
/// stays within the host's product depth).
pub(crate) fn random_formula(
    s: &Structure,
    ctx: &Context,
    allow_quant: bool,
    rng: &mut ChaCha8Rng,
) -> Formula {
    let atom = |rng: &mut ChaCha8Rng| -> Formula {
        match rng.gen_range(0..4) {
            0 => Formula::rel("R", vec![random_term(ctx, rng)]),
            1 => Formula::rel("R2", vec![random_term(ctx, rng), random_term(ctx, rng)]),
            2 => Formula::eq(random_term(ctx, rng), random_term(ctx, rng), "s"),
            _ => Formula::e(),
        }
    };
    let lang = s.host.language();
    let binary: Vec<&String> = lang
        .connectives
        .iter()
        .filter(|(_, &a)| a == 2)
        .map(|(n, _)| n)
        .collect();
    let quants: Vec<&String> = lang.quantifiers.iter().collect();
    match rng.gen_range(0..4) {
        0 => atom(rng),
        1 => {
            let c = binary[rng.gen_range(0..binary.len())].clone();
            Formula::conn(&c, vec![atom(rng), atom(rng)])
        }
        2 if allow_quant && !quants.is_empty() => {
            let q = quants[rng.gen_range(0..quants.len())].clone();
            let x = format!("q{}", ctx.len());
            let inner = ctx.extended(&x, "s").expect("fresh binder");
            let body = match rng.gen_range(0..3) {
                0 => Formula::rel("R", vec![Term::var(&x)]),
                1 => Formula::rel("R2", vec![random_term(ctx, rng), Term::var(&x)]),
                _ => Formula::eq(Term::var(&x), random_term(&inner, rng), "s"),
            };
            Formula::quant(&q, &x, "s", body)
        }
        _ => atom(rng),
    }
}

/// A formula equivalent to `f` in every host (used to produce
/// non-vacuous instances of the congruence rules): either `f` itself
/// or `f ⊗ e`.
fn equivalent_variant(f: &Formula, rng: &mut ChaCha8Rng) -> Formula {
    if rng.gen_bool(0.5) {
        f.clone()
    } else {
        Formula::tensor(f.clone(), Formula::e())
    }
}

fn random_ctx(max_vars: usize, rng: &mut ChaCha8Rng) -> Context {
    let names = ["x", "y"];
    let k = rng.gen_range(0..=max_vars.min(2));
    Context::new(
        names[..k]
            .iter()
            .map(|v| (v.to_string(), "s".to_string()))
            .collect(),
    )
    .unwrap()
}

/// Does the host interpret contexts with this many sort-`s` slots
/// (plus one more for a binder)?
fn depth_allows(s: &Structure, vars: usize) -> bool {
    let so = s.sorts["s"];
    s.host.base.nary_product(&vec![so; vars]).is_some()
}

/// Build a random valid instance of `rule`: `(premises, conclusion)`.
/// `None` when the host's product depth cannot fit any instance.
pub fn random_instance(
    rule: RuleId,
    s: &Structure,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<Assertion>, Assertion)> {
    use RuleId::*;
    let max_ctx = if depth_allows(s, 2) { 2 } else { 1 };
    match rule {
        Axiom => None, // quoting a theory axiom has no soundness content of its own
        Refl => {
            let ctx = random_ctx(max_ctx, rng);
            let m = random_term(&ctx, rng);
            Some((vec![], Assertion::eqn(ctx, m.clone(), m, "s")))
        }
        Sym => {
            let ctx = random_ctx(max_ctx, rng);
            let (m, n) = (random_term(&ctx, rng), random_term(&ctx, rng));
            Some((
                vec![Assertion::eqn(ctx.clone(), m.clone(), n.clone(), "s")],
                Assertion::eqn(ctx, n, m, "s"),
            ))
        }
        Trans => {
            let ctx = random_ctx(max_ctx, rng);
            // Bias the middle and end toward the start so the
            // premises hold often enough to exercise the conclusion.
            let m = random_term(&ctx, rng);
            let n = if rng.gen_bool(0.5) { m.clone() } else { random_term(&ctx, rng) };
            let p = if rng.gen_bool(0.5) { n.clone() } else { random_term(&ctx, rng) };
            Some((
                vec![
                    Assertion::eqn(ctx.clone(), m.clone(), n.clone(), "s"),
                    Assertion::eqn(ctx.clone(), n, p.clone(), "s"),
                ],
                Assertion::eqn(ctx, m, p, "s"),
            ))
        }
        EqSubst => {
            if max_ctx < 2 {
                return None;
            }
            // Δ ⊆ Γ = [x:s]; premise context Γ, z:s.
            let gamma = Context::of(&[("x", "s")]);
            let delta = if rng.gen_bool(0.5) {
                Context::empty()
            } else {
                gamma.clone()
            };
            let prem_ctx = gamma.extended("z", "s").unwrap();
            // Bias toward premises that actually hold.
            let m = random_term(&delta, rng);
            let m2 = if rng.gen_bool(0.5) { m.clone() } else { random_term(&delta, rng) };
            let n = random_term(&prem_ctx, rng);
            let n2 = if rng.gen_bool(0.5) { n.clone() } else { random_term(&prem_ctx, rng) };
            let sub = |t: &Term, repl: &Term| {
                substitute_term(t, &BTreeMap::from([("z".to_string(), repl.clone())]))
            };
            Some((
                vec![
                    Assertion::eqn(delta, m.clone(), m2.clone(), "s"),
                    Assertion::eqn(prem_ctx, n.clone(), n2.clone(), "s"),
                ],
                Assertion::eqn(gamma, sub(&n, &m), sub(&n2, &m2), "s"),
            ))
        }
        Ax => {
            let ctx = random_ctx(max_ctx, rng);
            let phi = random_formula(s, &ctx, depth_allows(s, ctx.len() + 1), rng);
            Some((vec![], Assertion::seq(ctx, vec![phi.clone()], phi)))
        }
        Cut => {
            let ctx = random_ctx(max_ctx, rng);
            let aq = depth_allows(s, ctx.len() + 1);
            let (a, b, c) = (
                random_formula(s, &ctx, aq, rng),
                random_formula(s, &ctx, aq, rng),
                random_formula(s, &ctx, aq, rng),
            );
            // Bias the middle toward the endpoint to dodge vacuity.
            let b = if rng.gen_bool(0.5) { equivalent_variant(&a, rng) } else { b };
            Some((
                vec![
                    Assertion::seq(ctx.clone(), vec![a.clone()], b.clone()),
                    Assertion::seq(ctx.clone(), vec![b], c.clone()),
                ],
                Assertion::seq(ctx, vec![a], c),
            ))
        }
        Cwk => {
            let ctx = random_ctx(max_ctx - 1, rng);
            if !depth_allows(s, ctx.len() + 1) {
                return None;
            }
            let aq = depth_allows(s, ctx.len() + 2);
            let phi = random_formula(s, &ctx, aq, rng);
            let psi = random_formula(s, &ctx, aq, rng);
            let wk = ctx.extended("w", "s").unwrap();
            Some((
                vec![Assertion::seq(ctx, vec![phi.clone()], psi.clone())],
                Assertion::seq(wk, vec![phi], psi),
            ))
        }
        Sub => {
            if max_ctx < 2 {
                return None;
            }
            let gamma = Context::of(&[("x", "s")]);
            let delta = if rng.gen_bool(0.5) {
                Context::empty()
            } else {
                gamma.clone()
            };
            let prem_ctx = gamma.extended("z", "s").unwrap();
            let m = random_term(&delta, rng);
            let m2 = if rng.gen_bool(0.5) { m.clone() } else { random_term(&delta, rng) };
            let n_ante = rng.gen_range(0..=2);
            let antecedents: Vec<Formula> = (0..n_ante)
                .map(|_| random_formula(s, &prem_ctx, false, rng))
                .collect();
            let psi = random_formula(s, &prem_ctx, false, rng);
            let avoid = gamma.vars();
            let sub = |f: &Formula, repl: &Term| {
                substitute_formula(
                    f,
                    &BTreeMap::from([("z".to_string(), repl.clone())]),
                    &avoid,
                )
            };
            Some((
                vec![
                    Assertion::eqn(delta, m.clone(), m2.clone(), "s"),
                    Assertion::seq(prem_ctx, antecedents.clone(), psi.clone()),
                ],
                Assertion::seq(
                    gamma,
                    antecedents.iter().map(|a| sub(a, &m)).collect(),
                    sub(&psi, &m2),
                ),
            ))
        }
        OmegaCon => {
            let quants = s.host.quantifier_names();
            if quants.is_empty() {
                return None;
            }
            let ctx = random_ctx(max_ctx - 1, rng);
            if !depth_allows(s, ctx.len() + 1) {
                return None;
            }
            let q = &quants[rng.gen_range(0..quants.len())];
            let inner = ctx.extended("z", "s").unwrap();
            let phi = random_formula(s, &inner, false, rng);
            let psi = if rng.gen_bool(0.6) {
                equivalent_variant(&phi, rng)
            } else {
                random_formula(s, &inner, false, rng)
            };
            let wrap = |f: &Formula| Formula::quant(q, "z", "s", f.clone());
            Some((
                vec![
                    Assertion::seq(inner.clone(), vec![phi.clone()], psi.clone()),
                    Assertion::seq(inner, vec![psi.clone()], phi.clone()),
                ],
                Assertion::seq(ctx, vec![wrap(&phi)], wrap(&psi)),
            ))
        }
        ConnCong => {
            let lang = s.host.language();
            let pool: Vec<(String, usize)> = lang
                .connectives
                .iter()
                .filter(|(_, &a)| a > 0)
                .map(|(n, &a)| (n.clone(), a))
                .collect();
            let (conn, arity) = pool[rng.gen_range(0..pool.len())].clone();
            let ctx = random_ctx(max_ctx, rng);
            let aq = depth_allows(s, ctx.len() + 1);
            let args: Vec<Formula> = (0..arity)
                .map(|_| random_formula(s, &ctx, aq, rng))
                .collect();
            let args2: Vec<Formula> = args
                .iter()
                .map(|a| {
                    if rng.gen_bool(0.7) {
                        equivalent_variant(a, rng)
                    } else {
                        random_formula(s, &ctx, aq, rng)
                    }
                })
                .collect();
            let mut premises = vec![];
            for (a, b) in args.iter().zip(&args2) {
                premises.push(Assertion::seq(ctx.clone(), vec![a.clone()], b.clone()));
                premises.push(Assertion::seq(ctx.clone(), vec![b.clone()], a.clone()));
            }
            Some((
                premises,
                Assertion::seq(
                    ctx,
                    vec![Formula::conn(&conn, args)],
                    Formula::conn(&conn, args2),
                ),
            ))
        }
        TensorRefIntro | TensorRefElim => {
            let ctx = random_ctx(max_ctx, rng);
            let aq = depth_allows(s, ctx.len() + 1);
            let extra = rng.gen_range(0..=1);
            let mut split: Vec<Formula> = (0..2 + extra)
                .map(|_| random_formula(s, &ctx, aq, rng))
                .collect();
            let psi = random_formula(s, &ctx, aq, rng);
            let i = rng.gen_range(0..split.len() - 1);
            let mut fused = split.clone();
            let beta = fused.remove(i + 1);
            fused[i] = Formula::tensor(fused[i].clone(), beta);
            if rule == TensorRefElim {
                std::mem::swap(&mut split, &mut fused);
            }
            // intro: premise = split list, conclusion fuses;
            // elim: premise = fused list, conclusion splits.
            Some((
                vec![Assertion::seq(ctx.clone(), split, psi.clone())],
                Assertion::seq(ctx, fused, psi),
            ))
        }
        ERefIntro | ERefElim => {
            let ctx = random_ctx(max_ctx, rng);
            let aq = depth_allows(s, ctx.len() + 1);
            let without: Vec<Formula> = (0..rng.gen_range(0..=2))
                .map(|_| random_formula(s, &ctx, aq, rng))
                .collect();
            let psi = random_formula(s, &ctx, aq, rng);
            let mut with_e = without.clone();
            with_e.insert(rng.gen_range(0..=with_e.len()), Formula::e());
            let (prem, concl) = if rule == ERefIntro {
                (without, with_e)
            } else {
                (with_e, without)
            };
            Some((
                vec![Assertion::seq(ctx.clone(), prem, psi.clone())],
                Assertion::seq(ctx, concl, psi),
            ))
        }
        EqAdjFwd | EqAdjBwd => {
            if max_ctx < 2 {
                return None;
            }
            let open_ctx = Context::of(&[("x", "s")]);
            let closed_ctx = Context::of(&[("x", "s"), ("x2", "s")]);
            let n_ante = rng.gen_range(0..=1);
            let phi: Vec<Formula> = (0..n_ante)
                .map(|_| random_formula(s, &open_ctx, false, rng))
                .collect();
            let psi = random_formula(s, &closed_ctx, false, rng);
            let psi_subst = substitute_formula(
                &psi,
                &BTreeMap::from([("x2".to_string(), Term::var("x"))]),
                &open_ctx.vars(),
            );
            let mut with_ante = phi.clone();
            with_ante.push(Formula::eq(Term::var("x"), Term::var("x2"), "s"));
            let with = Assertion::seq(closed_ctx, with_ante, psi);
            let without = Assertion::seq(open_ctx, phi, psi_subst);
            Some(if rule == EqAdjFwd {
                (vec![without], with)
            } else {
                (vec![with], without)
            })
        }
        AllAdjFwd | AllAdjBwd => {
            let closed_ctx = random_ctx(max_ctx - 1, rng);
            if !depth_allows(s, closed_ctx.len() + 1) {
                return None;
            }
            let open_ctx = closed_ctx.extended("z", "s").unwrap();
            let n_ante = rng.gen_range(0..=1);
            let phi: Vec<Formula> = (0..n_ante)
                .map(|_| random_formula(s, &closed_ctx, false, rng))
                .collect();
            let psi = random_formula(s, &open_ctx, false, rng);
            let open = Assertion::seq(open_ctx, phi.clone(), psi.clone());
            let closed = Assertion::seq(
                closed_ctx,
                phi,
                Formula::quant("forall", "z", "s", psi),
            );
            Some(if rule == AllAdjFwd {
                (vec![open], closed)
            } else {
                (vec![closed], open)
            })
        }
        ExAdjFwd | ExAdjBwd => {
            let closed_ctx = random_ctx(max_ctx - 1, rng);
            if !depth_allows(s, closed_ctx.len() + 1) {
                return None;
            }
            let open_ctx = closed_ctx.extended("z", "s").unwrap();
            let n_ante = rng.gen_range(0..=1);
            let phi: Vec<Formula> = (0..n_ante)
                .map(|_| random_formula(s, &closed_ctx, false, rng))
                .collect();
            let psi = random_formula(s, &open_ctx, false, rng);
            let theta = random_formula(s, &closed_ctx, false, rng);
            let mut open_ante = phi.clone();
            open_ante.push(psi.clone());
            let open = Assertion::seq(open_ctx, open_ante, theta.clone());
            let mut closed_ante = phi;
            closed_ante.push(Formula::quant("exists", "z", "s", psi));
            let closed = Assertion::seq(closed_ctx, closed_ante, theta);
            Some(if rule == ExAdjFwd {
                (vec![open], closed)
            } else {
                (vec![closed], open)
            })
        }
    }
}
