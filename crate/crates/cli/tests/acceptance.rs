//! End-to-end acceptance checks.  Each numbered criterion prints one
//! pass/fail line; the test fails if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fibra::calculus::{check_proof, derive_bounded, RuleId};
use fibra::fibered::{
    check_morphism, complete_through_with, external_product, external_submodel, factorize,
    is_subprop_morphism, kernel, kernel_leq, product_propcat, transport_commutes,
    transport_structure, Completion,
};
use fibra::propcat::{check_fa, Elem, FinPropCategory};
use fibra::semantics::sweep::{sweep, SweepConfig};
use fibra::semantics::{enumerate_assertions, satisfies, Budget, Structure};
use fibra::syntax::{wf_assertion, Assertion, Context, Formula, Term};
use fibra_cli::formats::{
    load_morphism, load_pc, load_proof, load_structure, load_theory, print_morphism,
    print_pc_explicit, print_proof, print_structure, print_theory, LoadedMorphism,
    LoadedStructure,
};
use fibra_cli::sexp::parse_one;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibra"))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("fibra-acc-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

struct Tally {
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, n: usize, what: &str, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => println!("criterion {n}: pass - {what}"),
            Err(e) => {
                println!("criterion {n}: FAIL - {what}: {e}");
                self.failures.push(format!("criterion {n}: {e}"));
            }
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

const MORPHISM_FILES: [&str; 13] = [
    "id_pow.morphism",
    "id_l5.morphism",
    "id_l5s.morphism",
    "id_g5.morphism",
    "l5_to_l2.morphism",
    "l5s_to_l2s.morphism",
    "g5_to_g3.morphism",
    "g3_to_g2.morphism",
    "g5_to_g2.morphism",
    "g5_comp.morphism",
    "g5s_to_g2s.morphism",
    "swap_pow.morphism",
    "incl_l5s.morphism",
];

/// Exact quantifier values on the fuzzy fixture, through the CLI.
fn criterion1() -> Result<(), String> {
    let start = Instant::now();
    let cases = [
        ("(Oprod (y tau) (R y))", "1/4"),
        ("(forall (y tau) (R y))", "1/2"),
        ("(exists (y tau) (R y))", "1/2"),
    ];
    for (expr, expected) in cases {
        let out = cli()
            .current_dir(fixtures())
            .args(["eval", "fuzzy.structure", expr])
            .output()
            .map_err(|e| e.to_string())?;
        let got = String::from_utf8_lossy(&out.stdout).trim().to_string();
        require(out.status.success(), &format!("eval of {expr} failed"))?;
        require(
            got == expected,
            &format!("eval of {expr} printed `{got}`, expected `{expected}`"),
        )?;
    }
    require(
        start.elapsed() < Duration::from_secs(1),
        &format!("took {:?}, budget 1s", start.elapsed()),
    )
}

/// The law checker rejects the exactly-two quantifier with a
/// substitution-law witness and accepts the powerset and fuzzy hosts.
fn criterion2() -> Result<(), String> {
    let start = Instant::now();
    let bad = cli()
        .current_dir(fixtures())
        .args(["check-pc", "mostowski2.pc"])
        .output()
        .map_err(|e| e.to_string())?;
    require(!bad.status.success(), "mostowski2 was accepted")?;
    let text = String::from_utf8_lossy(&bad.stdout).to_string();
    require(text.contains("condition 5"), "no substitution-law witness cited")?;
    for n in [1, 2, 3, 4, 6] {
        require(
            !text.contains(&format!("condition {n}")),
            &format!("unexpected condition {n} violation"),
        )?;
    }
    for good in ["pow.pc", "fuzzy.pc"] {
        let out = cli()
            .current_dir(fixtures())
            .args(["check-pc", good])
            .output()
            .map_err(|e| e.to_string())?;
        require(out.status.success(), &format!("{good} was rejected"))?;
    }
    require(
        start.elapsed() < Duration::from_secs(10),
        &format!("took {:?}, budget 10s", start.elapsed()),
    )
}

/// Seeded random rule-soundness sweeps over three verified hosts.
fn criterion3(
    pow: &Arc<FinPropCategory>,
    l5: &Arc<FinPropCategory>,
    prod: &Arc<FinPropCategory>,
) -> Result<(), String> {
    let start = Instant::now();
    for host in [pow, l5, prod] {
        require(
            check_fa(host).ok(),
            &format!("host {} fails its own laws", host.name),
        )?;
    }
    let rules: Vec<RuleId> = RuleId::all().into_iter().collect();
    let cfg = SweepConfig {
        seed: 0,
        trials: 200,
    };
    for host in [pow, l5, prod] {
        for outcome in sweep(host, &rules, &cfg) {
            require(
                outcome.violations.is_empty(),
                &format!(
                    "{:?} violated {} time(s) on {}: {}",
                    outcome.rule,
                    outcome.violations.len(),
                    host.name,
                    outcome.violations.first().cloned().unwrap_or_default()
                ),
            )?;
            require(
                outcome.trials == 200,
                &format!("{:?} ran {} trials, expected 200", outcome.rule, outcome.trials),
            )?;
        }
    }
    // Both directions of every adjunction rule must actually fire on
    // the powerset host.
    let pow_outcomes = sweep(pow, &rules, &cfg);
    for rule in RuleId::adjoint() {
        let o = pow_outcomes
            .iter()
            .find(|o| o.rule == rule)
            .ok_or_else(|| format!("{rule:?} was not swept"))?;
        require(
            o.applicable > 0,
            &format!("{rule:?} never applicable on the powerset host"),
        )?;
    }
    require(
        start.elapsed() < Duration::from_secs(120),
        &format!("took {:?}, budget 2min", start.elapsed()),
    )
}

/// Transport along every fixture morphism with a matching structure
/// preserves bounded satisfaction and both commutation equations.
fn criterion4(pairs: &[(&LoadedMorphism, &LoadedStructure)]) -> Result<(), String> {
    let sat_budget = Budget {
        max_ctx: 1,
        max_term_depth: 2,
        max_formula_depth: 1,
        max_antecedents: 1,
    };
    let commute_budget = Budget {
        max_ctx: 2,
        max_term_depth: 2,
        max_formula_depth: 2,
        max_antecedents: 1,
    };
    for (lm, ls) in pairs {
        let f = &lm.morphism;
        let s = Structure {
            host: Arc::clone(&f.source),
            ..ls.structure.clone()
        };
        let t = transport_structure(f, &s).map_err(|e| format!("{}: {e}", f.name))?;
        transport_commutes(f, &s, &commute_budget)
            .map_err(|e| format!("{} does not commute: {e}", f.name))?;
        let src_lang = f.source.language();
        let tgt_lang = f.target.language();
        let mut checked = 0usize;
        for a in enumerate_assertions(&s.signature, &src_lang, &sat_budget) {
            if wf_assertion(&s.signature, &tgt_lang, &a).is_err() {
                continue;
            }
            if !matches!(satisfies(&s, &a), Ok(r) if r.verdict) {
                continue;
            }
            checked += 1;
            let held = matches!(satisfies(&t, &a), Ok(r) if r.verdict);
            require(held, &format!("{}: lost `{a}` after transport", f.name))?;
        }
        require(
            checked > 0,
            &format!("{}: no satisfied assertions to transport", f.name),
        )?;
    }
    Ok(())
}

/// Image factorization splits every fixture morphism, and completion
/// through another morphism exists exactly when kernels compare.
fn criterion5(morphisms: &[LoadedMorphism]) -> Result<(), String> {
    for lm in morphisms {
        let f = &lm.morphism;
        let fac = factorize(f).map_err(|e| format!("{}: {e}", f.name))?;
        require(
            check_fa(&fac.image).ok(),
            &format!("{}: image breaks the prop-category laws", f.name),
        )?;
        require(
            check_morphism(&fac.corestriction).ok(),
            &format!("{}: corestriction is not a morphism", f.name),
        )?;
        require(
            check_morphism(&fac.inclusion).ok(),
            &format!("{}: inclusion is not a morphism", f.name),
        )?;
        let again = fac
            .corestriction
            .then(&fac.inclusion)
            .map_err(|e| format!("{}: {e}", f.name))?;
        require(
            again.omap == f.omap && again.mmap == f.mmap && again.pmap == f.pmap,
            &format!("{}: inclusion . corestriction differs from the original", f.name),
        )?;
        let kf = kernel(f).map_err(|e| e.to_string())?;
        let ke = kernel(&fac.corestriction).map_err(|e| e.to_string())?;
        require(
            kernel_leq(&kf, &ke).map_err(|e| e.to_string())?
                && kernel_leq(&ke, &kf).map_err(|e| e.to_string())?,
            &format!("{}: kernel of the corestriction differs", f.name),
        )?;
        require(
            is_subprop_morphism(&fac.inclusion).map_err(|e| e.to_string())?,
            &format!("{}: inclusion is not an embedding", f.name),
        )?;
    }

    // Completion through a comparable collapse succeeds, and the
    // result is independent of the preimage scan order.
    let by_name = |n: &str| {
        morphisms
            .iter()
            .find(|m| m.morphism.name == n)
            .expect("fixture present")
    };
    let fine = &by_name("g5_to_g3").morphism;
    let coarse = &by_name("g5_to_g2").morphism;
    let fwd = complete_through_with(coarse, fine, false).map_err(|e| e.to_string())?;
    let rev = complete_through_with(coarse, fine, true).map_err(|e| e.to_string())?;
    let (h1, h2) = match (fwd, rev) {
        (Completion::Found(a), Completion::Found(b)) => (a, b),
        _ => return Err("completion through the finer collapse failed".to_string()),
    };
    require(
        h1.omap == h2.omap && h1.mmap == h2.mmap && h1.pmap == h2.pmap,
        "completion depends on the preimage order",
    )?;
    let recomposed = fine.then(&h1).map_err(|e| e.to_string())?;
    require(
        recomposed.omap == coarse.omap
            && recomposed.mmap == coarse.mmap
            && recomposed.pmap == coarse.pmap,
        "completion does not recompose",
    )?;
    match complete_through_with(fine, coarse, false).map_err(|e| e.to_string())? {
        Completion::Obstructed(o) => require(!o.witness.is_empty(), "empty obstruction witness"),
        Completion::Found(_) => Err("completion through the coarser collapse should fail".into()),
    }
}

/// The empty product satisfies everything; binary-product
/// satisfaction is componentwise in both directions.
fn criterion6(
    prod: &fibra::fibered::ProductPropCat,
    swap: &Structure,
    chain_s: &Structure,
) -> Result<(), String> {
    // Empty product.
    let empty = product_propcat(&[], "empty").map_err(|e| e.to_string())?;
    let sig = swap.signature.clone();
    let trivial = Structure {
        name: "trivial".to_string(),
        host: Arc::clone(&empty.host),
        signature: sig.clone(),
        sorts: sig.sorts.iter().map(|s| (s.clone(), 0)).collect(),
        functions: sig.functions.keys().map(|f| (f.clone(), 0)).collect(),
        relations: sig.relations.keys().map(|r| (r.clone(), Elem::Fin(0))).collect(),
    };
    trivial.validate().map_err(|e| e.to_string())?;
    let empty_budget = Budget {
        max_ctx: 1,
        max_term_depth: 2,
        max_formula_depth: 2,
        max_antecedents: 0,
    };
    let lang = empty.host.language();
    let mut count = 0usize;
    for a in enumerate_assertions(&sig, &lang, &empty_budget) {
        count += 1;
        let r = satisfies(&trivial, &a).map_err(|e| format!("{a}: {e}"))?;
        require(r.verdict, &format!("empty product refutes `{a}`"))?;
    }
    require(count > 1000, "too few assertions enumerated over the empty product")?;
    // Sequents with antecedents hold too.
    let with_ante = Assertion::Seq {
        ctx: Context::of(&[("x", "s")]),
        antecedents: vec![Formula::rel("R", vec![Term::var("x")])],
        consequent: Formula::rel("R2", vec![Term::var("x"), Term::app("f", vec![Term::var("x")])]),
    };
    require(
        satisfies(&trivial, &with_ante).map_err(|e| e.to_string())?.verdict,
        "empty product refutes a hypothetical sequent",
    )?;

    // Binary product: satisfaction is exactly the conjunction of the
    // factors' verdicts.
    let ps = external_product(prod, &[swap, chain_s]).map_err(|e| e.to_string())?;
    let budget = Budget {
        max_ctx: 1,
        max_term_depth: 2,
        max_formula_depth: 1,
        max_antecedents: 1,
    };
    let plang = prod.host.language();
    let mut seen = 0usize;
    for a in enumerate_assertions(&swap.signature, &plang, &budget) {
        let in_pow = matches!(satisfies(swap, &a), Ok(r) if r.verdict);
        let in_l5s = matches!(satisfies(chain_s, &a), Ok(r) if r.verdict);
        let in_prod = matches!(satisfies(&ps, &a), Ok(r) if r.verdict);
        require(
            in_prod == (in_pow && in_l5s),
            &format!("`{a}`: product {in_prod} vs components {in_pow} & {in_l5s}"),
        )?;
        seen += 1;
    }
    require(seen > 100, "too few assertions compared on the binary product")
}

/// Products, homomorphic images and submodels keep every budgeted
/// assertion common to their inputs.
fn criterion7(
    prod: &fibra::fibered::ProductPropCat,
    swap: &Structure,
    chain_s: &Structure,
) -> Result<(), String> {
    let budget = Budget {
        max_ctx: 1,
        max_term_depth: 2,
        max_formula_depth: 1,
        max_antecedents: 1,
    };
    // Product.
    let ps = external_product(prod, &[swap, chain_s]).map_err(|e| e.to_string())?;
    let plang = prod.host.language();
    for a in enumerate_assertions(&swap.signature, &plang, &budget) {
        let common = matches!(satisfies(swap, &a), Ok(r) if r.verdict)
            && matches!(satisfies(chain_s, &a), Ok(r) if r.verdict);
        if common {
            require(
                matches!(satisfies(&ps, &a), Ok(r) if r.verdict),
                &format!("product loses common assertion `{a}`"),
            )?;
        }
    }

    // Homomorphic image along the chain collapse.
    let lm = load_morphism(&fixtures().join("l5_to_l2.morphism")).map_err(|e| e.to_string())?;
    let ls = load_structure(&fixtures().join("chain.structure"), None).map_err(|e| e.to_string())?;
    let s = Structure {
        host: Arc::clone(&lm.morphism.source),
        ..ls.structure
    };
    let image = transport_structure(&lm.morphism, &s).map_err(|e| e.to_string())?;
    let tgt_lang = lm.morphism.target.language();
    for a in enumerate_assertions(&s.signature, &lm.morphism.source.language(), &budget) {
        if wf_assertion(&s.signature, &tgt_lang, &a).is_err() {
            continue;
        }
        if matches!(satisfies(&s, &a), Ok(r) if r.verdict) {
            require(
                matches!(satisfies(&image, &a), Ok(r) if r.verdict),
                &format!("image loses `{a}`"),
            )?;
        }
    }

    // Submodel along the image inclusion.
    let incl = load_morphism(&fixtures().join("incl_l5s.morphism")).map_err(|e| e.to_string())?;
    let sub = load_structure(&fixtures().join("sub.structure"), None).map_err(|e| e.to_string())?;
    let amb = load_structure(&fixtures().join("ambient.structure"), None).map_err(|e| e.to_string())?;
    let sub_s = Structure {
        host: Arc::clone(&incl.morphism.source),
        ..sub.structure
    };
    let amb_s = Structure {
        host: Arc::clone(&incl.morphism.target),
        ..amb.structure
    };
    require(
        external_submodel(&incl.morphism, &sub_s, &amb_s).map_err(|e| e.to_string())?,
        "the fixture submodel is not recognized",
    )?;
    let sub_lang = incl.morphism.source.language();
    for a in enumerate_assertions(&amb_s.signature, &incl.morphism.target.language(), &budget) {
        if wf_assertion(&amb_s.signature, &sub_lang, &a).is_err() {
            continue;
        }
        if matches!(satisfies(&amb_s, &a), Ok(r) if r.verdict) {
            require(
                matches!(satisfies(&sub_s, &a), Ok(r) if r.verdict),
                &format!("submodel loses `{a}`"),
            )?;
        }
    }
    Ok(())
}

/// Checked proofs have semantically valid conclusions, and bounded
/// proof search returns checkable proofs.
fn criterion8(structures: &[&Structure]) -> Result<(), String> {
    let th = load_theory(&fixtures().join("involution.theory")).map_err(|e| e.to_string())?;
    let proof = load_proof(&fixtures().join("involution.proof"), &th.signature, &th.language)
        .map_err(|e| e.to_string())?;
    let concl = check_proof(&th, &RuleId::all(), &proof).map_err(|e| e.to_string())?;
    for s in structures {
        // Only structures that model the axioms are bound by the
        // conclusion.
        for ax in &th.axioms {
            require(
                satisfies(s, ax).map_err(|e| e.to_string())?.verdict,
                &format!("{} does not model the axioms", s.name),
            )?;
        }
        require(
            satisfies(s, &concl).map_err(|e| e.to_string())?.verdict,
            &format!("{} refutes the proved conclusion `{concl}`", s.name),
        )?;
    }
    // Bounded search re-checks.
    let goal = concl.clone();
    let found = derive_bounded(&th, &RuleId::all(), &goal, 3)
        .ok_or("bounded search failed on a provable goal")?;
    let rechecked = check_proof(&th, &RuleId::all(), &found).map_err(|e| e.to_string())?;
    require(rechecked == goal, "searched proof concludes something else")?;
    for s in structures {
        require(
            satisfies(s, &rechecked).map_err(|e| e.to_string())?.verdict,
            &format!("{} refutes the searched conclusion", s.name),
        )?;
    }
    Ok(())
}

/// Every fixture file survives a print/parse round trip.
fn criterion9() -> Result<(), String> {
    let dir = fixtures();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    require(!entries.is_empty(), "no fixtures found")?;
    for path in entries {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let file = path.file_name().unwrap().to_str().unwrap().to_string();
        match ext {
            "theory" | "sig" => {
                let t = load_theory(&path).map_err(|e| e.to_string())?;
                let t2 = load_theory(&temp_file(&file, &print_theory(&t)))
                    .map_err(|e| e.to_string())?;
                require(t == t2, &format!("{file}: reload differs"))?;
            }
            "pc" => {
                let pc = load_pc(&path, None).map_err(|e| e.to_string())?;
                if pc.finite().is_some() {
                    let printed = print_pc_explicit(&pc).map_err(|e| e.to_string())?;
                    let pc2 =
                        load_pc(&temp_file(&file, &printed), None).map_err(|e| e.to_string())?;
                    require(
                        pc.name == pc2.name && pc.base == pc2.base && pc.fibers == pc2.fibers,
                        &format!("{file}: explicit reload differs"),
                    )?;
                } else {
                    // Symbolic fibers have no table printer; the
                    // source itself must normalize stably.
                    let src = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
                    let norm = parse_one(&src).map_err(|e| e.to_string())?.to_string();
                    let pc2 = load_pc(&temp_file(&file, &norm), None).map_err(|e| e.to_string())?;
                    require(*pc == *pc2, &format!("{file}: normalized reload differs"))?;
                }
            }
            "structure" => {
                let ls = load_structure(&path, None).map_err(|e| e.to_string())?;
                let printed = print_structure(
                    &ls.structure,
                    ls.host_path.to_str().unwrap(),
                    ls.sig_path.to_str().unwrap(),
                );
                let ls2 = load_structure(&temp_file(&file, &printed), None)
                    .map_err(|e| e.to_string())?;
                require(ls.structure == ls2.structure, &format!("{file}: reload differs"))?;
            }
            "morphism" => {
                let lm = load_morphism(&path).map_err(|e| e.to_string())?;
                let printed = print_morphism(
                    &lm.morphism,
                    lm.src_path.to_str().unwrap(),
                    lm.tgt_path.to_str().unwrap(),
                );
                let lm2 = load_morphism(&temp_file(&file, &printed)).map_err(|e| e.to_string())?;
                require(
                    lm.morphism.omap == lm2.morphism.omap
                        && lm.morphism.mmap == lm2.morphism.mmap
                        && lm.morphism.pmap == lm2.morphism.pmap
                        && *lm.morphism.source == *lm2.morphism.source
                        && *lm.morphism.target == *lm2.morphism.target,
                    &format!("{file}: reload differs"),
                )?;
            }
            "proof" => {
                let th = load_theory(&fixtures().join("involution.theory"))
                    .map_err(|e| e.to_string())?;
                let p = load_proof(&path, &th.signature, &th.language).map_err(|e| e.to_string())?;
                let p2 = load_proof(
                    &temp_file(&file, &print_proof(&p).to_string()),
                    &th.signature,
                    &th.language,
                )
                .map_err(|e| e.to_string())?;
                require(p == p2, &format!("{file}: reload differs"))?;
            }
            "interp" => {
                let th = load_theory(&fixtures().join("involution.theory"))
                    .map_err(|e| e.to_string())?;
                let i = fibra_cli::formats::load_interp(&path, &th.signature, &th.language)
                    .map_err(|e| e.to_string())?;
                let i2 = fibra_cli::formats::load_interp(
                    &temp_file(&file, &fibra_cli::formats::print_interp(&i)),
                    &th.signature,
                    &th.language,
                )
                .map_err(|e| e.to_string())?;
                require(i == i2, &format!("{file}: reload differs"))?;
            }
            "probe" => {
                let probes = fibra_cli::formats::load_probes(&path).map_err(|e| e.to_string())?;
                let printed = format!(
                    "(probes {})",
                    probes
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                let probes2 = fibra_cli::formats::load_probes(&temp_file(&file, &printed))
                    .map_err(|e| e.to_string())?;
                require(probes == probes2, &format!("{file}: reload differs"))?;
            }
            _ => return Err(format!("unrecognized fixture `{file}`")),
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let suite_start = Instant::now();
    let mut tally = Tally { failures: vec![] };

    tally.record(1, "exact fuzzy quantifier values via the CLI", criterion1());
    tally.record(2, "law checker verdicts on fixture hosts", criterion2());

    let dir = fixtures();
    let pow = load_pc(&dir.join("pow.pc"), None).unwrap();
    let l5 = load_pc(&dir.join("l5.pc"), None).unwrap();
    let l5s = load_pc(&dir.join("l5s.pc"), None).unwrap();
    let prod = product_propcat(&[Arc::clone(&pow), Arc::clone(&l5s)], "pow_x_l5s").unwrap();

    tally.record(
        3,
        "seeded rule-soundness sweeps on three hosts",
        criterion3(&pow, &l5, &prod.host),
    );

    let morphisms: Vec<LoadedMorphism> = MORPHISM_FILES
        .iter()
        .map(|f| load_morphism(&dir.join(f)).unwrap())
        .collect();
    let swap_ls = load_structure(&dir.join("swap.structure"), None).unwrap();
    let chain_ls = load_structure(&dir.join("chain.structure"), None).unwrap();
    let chain_s_ls = load_structure(&dir.join("chain_s.structure"), None).unwrap();
    let sub_ls = load_structure(&dir.join("sub.structure"), None).unwrap();
    let by_name = |n: &str| morphisms.iter().find(|m| m.morphism.name == n).unwrap();
    let pairs: Vec<(&LoadedMorphism, &LoadedStructure)> = vec![
        (by_name("swap_pow"), &swap_ls),
        (by_name("l5_to_l2"), &chain_ls),
        (by_name("l5s_to_l2s"), &chain_s_ls),
        (by_name("incl(l5s_to_l2s)"), &sub_ls),
    ];
    tally.record(4, "transport preserves satisfaction and commutes", criterion4(&pairs));
    tally.record(5, "image factorization and completion", criterion5(&morphisms));

    // Structures re-hosted onto the shared product factors.
    let swap_s = Structure {
        host: Arc::clone(&pow),
        ..swap_ls.structure.clone()
    };
    let chain_s_s = Structure {
        host: Arc::clone(&l5s),
        ..chain_s_ls.structure.clone()
    };
    tally.record(
        6,
        "empty and binary product satisfaction",
        criterion6(&prod, &swap_s, &chain_s_s),
    );
    tally.record(
        7,
        "products, images and submodels keep common assertions",
        criterion7(&prod, &swap_s, &chain_s_s),
    );
    tally.record(
        8,
        "proof conclusions hold in models of the axioms",
        criterion8(&[&swap_s, &chain_ls.structure, &chain_s_s]),
    );
    tally.record(9, "every fixture survives print/parse", criterion9());

    let elapsed = suite_start.elapsed();
    tally.record(
        10,
        "acceptance run fits the time budget",
        require(
            elapsed < Duration::from_secs(300),
            &format!("took {elapsed:?}, budget 5min"),
        ),
    );

    assert!(
        tally.failures.is_empty(),
        "acceptance failures:\n{}",
        tally.failures.join("\n")
    );
}
