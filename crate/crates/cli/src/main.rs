//! `fibra` — a workbench for finite prop-categorical semantics of
//! nonclassical first-order logics.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fibra::calculus::{check_proof, derive_bounded, RuleId};
use fibra::fibered::{
    check_morphism, complete_through, external_product, external_submodel, factorize,
    internal_structure, is_subprop_morphism, kernel, kernel_leq, product_propcat,
    translate_theory, transport_commutes, transport_structure, Completion,
};
use fibra::propcat::{check_fa, Elem, FaReport};
use fibra::semantics::sweep::{sweep, SweepConfig};
use fibra::semantics::{
    enumerate_assertions, interpret_formula, interpret_term, satisfies, Budget, Structure,
};
use fibra::syntax::Context;
use fibra::Rat;

use fibra_cli::formats::{
    load_interp, load_morphism, load_pc, load_probes, load_proof, load_structure, load_theory,
    parse_assertion, parse_ctx, parse_formula, parse_term, print_assertion, print_morphism,
    print_pc_explicit, print_proof, print_structure, print_theory, LoadedStructure,
};
use fibra_cli::sexp::parse_one;

#[derive(Parser)]
#[command(name = "fibra", version, about = "Finite prop-categorical semantics workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Random seed for sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials per rule in sweeps.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Enumeration budget, e.g. `ctx=3,term=3,fml=3,ante=2`.
    #[arg(long, global = true, default_value = "ctx=3,term=3,fml=3,ante=2")]
    budget: String,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// A `(probes r ...)` file overriding the probe set of fuzzy hosts.
    #[arg(long, global = true)]
    probe: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// Line-delimited JSON records.
    Records,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleSet {
    All,
    Minimal,
    Equational,
    Adjoint,
}

impl RuleSet {
    fn rules(self) -> BTreeSet<RuleId> {
        match self {
            RuleSet::All => RuleId::all(),
            RuleSet::Minimal => RuleId::minimal(),
            RuleSet::Equational => RuleId::equational(),
            RuleSet::Adjoint => RuleId::adjoint(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the prop-category laws of a `.pc` file.
    CheckPc { pc: PathBuf },
    /// Check the morphism laws of a `.morphism` file.
    CheckMor { morphism: PathBuf },
    /// Evaluate a formula (or term) in a structure.
    Eval {
        structure: PathBuf,
        /// A formula or term s-expression, e.g. `(Oprod (y tau) (R y))`.
        expr: String,
        /// Context for open expressions, e.g. `(ctx (x s))`.
        #[arg(long)]
        ctx: Option<String>,
    },
    /// Check a structure against every axiom of a theory.
    Sat { structure: PathBuf, theory: PathBuf },
    /// Search for a bounded-depth proof of a goal assertion.
    Prove {
        theory: PathBuf,
        /// Goal assertion, e.g. `(seq (ctx) (hyp) (concl (e)))`.
        goal: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = RuleSet::All)]
        rules: RuleSet,
    },
    /// Check a proof file against a theory.
    Checkproof {
        theory: PathBuf,
        proof: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleSet::All)]
        rules: RuleSet,
    },
    /// Transport a structure along a morphism and verify commutation.
    Transport { morphism: PathBuf, structure: PathBuf },
    /// Summarize a morphism's kernel, or compare two kernels.
    Kernel {
        morphism: PathBuf,
        other: Option<PathBuf>,
    },
    /// Build the product of prop-categories and print it explicitly.
    Product {
        #[arg(required = false)]
        pcs: Vec<PathBuf>,
        #[arg(long, default_value = "product")]
        name: String,
    },
    /// Factorize a morphism through its image and verify both legs.
    Factor { morphism: PathBuf },
    /// Complete `f` through `k` (find `h` with `h . k = f`) or report
    /// the kernel obstruction.
    Complete { f: PathBuf, k: PathBuf },
    /// Closure checks: products, homomorphic images, submodels.
    #[command(subcommand)]
    Hsp(HspCommand),
    /// Present a prop-category's base to itself as a structure.
    Internal { pc: PathBuf },
    /// Translate a theory along a signature interpretation.
    Translate {
        interp: PathBuf,
        source: PathBuf,
        target: PathBuf,
    },
    /// Random soundness sweeps of the proof rules over hosts.
    Soundness {
        #[arg(required = true)]
        pcs: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HspCommand {
    /// External product: verify the product structure satisfies every
    /// budgeted assertion satisfied by all factors.
    Product {
        #[arg(required = true)]
        structures: Vec<PathBuf>,
    },
    /// Homomorphic image: transport and verify budgeted assertions of
    /// the source persist.
    Image { morphism: PathBuf, structure: PathBuf },
    /// Submodel recognition along an inclusion.
    Submodel {
        inclusion: PathBuf,
        sub: PathBuf,
        ambient: PathBuf,
    },
}

struct Out {
    records: bool,
}

impl Out {
    fn line(&self, text: impl AsRef<str>, record: Value) {
        if self.records {
            println!("{record}");
        } else {
            println!("{}", text.as_ref());
        }
    }
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    let mut b = Budget::default();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| format!("budget entry `{part}` is not key=value"))?;
        let val: usize = val
            .parse()
            .map_err(|_| format!("budget value `{val}` is not a number"))?;
        match key {
            "ctx" => b.max_ctx = val,
            "term" => b.max_term_depth = val,
            "fml" => b.max_formula_depth = val,
            "ante" => b.max_antecedents = val,
            _ => return Err(format!("unknown budget key `{key}`")),
        }
    }
    Ok(b)
}

/// Render the violations of a law-check report; returns `report.ok()`.
fn report_fa(out: &Out, subject: &str, report: &FaReport) -> bool {
    for v in &report.violations {
        out.line(
            format!("violation: {}: {}", v.condition, v.witness),
            json!({"kind": "violation", "subject": subject,
                   "condition": v.condition, "witness": v.witness}),
        );
    }
    let status = if report.ok() { "ok" } else { "fail" };
    let mode = if report.probed { "probed" } else { "exhaustive" };
    out.line(
        format!("{subject}: {status} ({mode}, {} violation(s))", report.violations.len()),
        json!({"kind": "report", "subject": subject, "ok": report.ok(),
               "probed": report.probed, "violations": report.violations.len()}),
    );
    report.ok()
}

fn render_elem(s: &Structure, c: usize, e: &Elem) -> String {
    // A constant fuzzy predicate is one rational; print it bare so
    // closed formulas evaluate to plain numbers like `1/4`.
    if let Elem::Fuz(vals) = e {
        if let [v] = vals.as_slice() {
            return v.to_string();
        }
        if !vals.is_empty() && vals.iter().all(|v| v == &vals[0]) {
            return vals[0].to_string();
        }
    }
    s.host.elem_name(c, e)
}

fn probes_from(path: Option<&PathBuf>) -> Result<Option<Vec<Rat>>, Box<dyn std::error::Error>> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(load_probes(p)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out {
        records: cli.format == Format::Records,
    };
    match run(&cli, &out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &Out) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let budget = parse_budget(&cli.budget)?;
    let probes = probes_from(cli.probe.as_ref())?;
    match &cli.command {
        Command::CheckPc { pc } => {
            let host = load_pc(pc, probes.as_deref())?;
            let report = check_fa(&host);
            let ok = report_fa(out, &host.name, &report);
            Ok(exit(ok))
        }
        Command::CheckMor { morphism } => {
            let lm = load_morphism(morphism)?;
            let report = check_morphism(&lm.morphism);
            let ok = report_fa(out, &lm.morphism.name, &report);
            Ok(exit(ok))
        }
        Command::Eval {
            structure,
            expr,
            ctx,
        } => {
            let ls = load_structure(structure, probes.as_deref())?;
            let s = &ls.structure;
            let arg = Path::new("<expr>");
            let ectx = match ctx {
                None => Context::empty(),
                Some(c) => parse_ctx(arg, &parse_one(c)?)?,
            };
            let sx = parse_one(expr)?;
            let lang = s.host.language();
            // A formula if its head is a known logical or relation
            // symbol; otherwise a term.
            let as_formula = parse_formula(arg, &sx, &s.signature, &lang);
            match as_formula {
                Ok(f) => {
                    let e = interpret_formula(s, &ectx, &f)?;
                    let c = ctx_obj(s, &ectx)?;
                    let rendered = render_elem(s, c, &e);
                    out.line(
                        &rendered,
                        json!({"kind": "eval", "formula": f.to_string(), "value": rendered}),
                    );
                }
                Err(fe) => {
                    let Ok(t) = parse_term(arg, &sx) else {
                        return Err(Box::new(fe));
                    };
                    // Only fall back when the term is well-formed.
                    let m = match interpret_term(s, &ectx, &t) {
                        Ok(m) => m,
                        Err(_) => return Err(Box::new(fe)),
                    };
                    let name = s.host.base.morphisms[m].name.clone();
                    out.line(
                        &name,
                        json!({"kind": "eval", "term": t.to_string(), "value": name}),
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sat { structure, theory } => {
            let ls = load_structure(structure, probes.as_deref())?;
            let th = load_theory(theory)?;
            let mut all_ok = true;
            for a in &th.axioms {
                let r = satisfies(&ls.structure, a)?;
                all_ok &= r.verdict;
                let status = if r.verdict { "sat" } else { "UNSAT" };
                out.line(
                    format!("{status}: {} (left {} , right {} at {})", a, r.left, r.right, r.at),
                    json!({"kind": "sat", "assertion": a.to_string(), "verdict": r.verdict,
                           "left": r.left, "right": r.right, "at": r.at}),
                );
            }
            Ok(exit(all_ok))
        }
        Command::Prove {
            theory,
            goal,
            depth,
            rules,
        } => {
            let th = load_theory(theory)?;
            let goal =
                parse_assertion(Path::new("<goal>"), &parse_one(goal)?, &th.signature, &th.language)?;
            match derive_bounded(&th, &rules.rules(), &goal, *depth) {
                Some(p) => {
                    out.line(
                        print_proof(&p).to_string(),
                        json!({"kind": "proof", "found": true, "height": p.height(),
                               "proof": print_proof(&p).to_string()}),
                    );
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    out.line(
                        format!("no proof of depth <= {depth} found"),
                        json!({"kind": "proof", "found": false, "depth": depth}),
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Checkproof {
            theory,
            proof,
            rules,
        } => {
            let th = load_theory(theory)?;
            let p = load_proof(proof, &th.signature, &th.language)?;
            match check_proof(&th, &rules.rules(), &p) {
                Ok(a) => {
                    out.line(
                        format!("checked: {}", print_assertion(&a)),
                        json!({"kind": "checkproof", "ok": true,
                               "conclusion": print_assertion(&a).to_string()}),
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    out.line(
                        format!("invalid proof: {e}"),
                        json!({"kind": "checkproof", "ok": false, "error": e.to_string()}),
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Transport {
            morphism,
            structure,
        } => {
            let lm = load_morphism(morphism)?;
            let ls = load_structure(structure, probes.as_deref())?;
            let s = rehost(&ls, &lm.morphism.source)?;
            let t = transport_structure(&lm.morphism, &s)?;
            transport_commutes(&lm.morphism, &s, &budget)?;
            let text = print_structure(
                &t,
                &lm.tgt_path.display().to_string(),
                &ls.sig_path.display().to_string(),
            );
            out.line(
                &text,
                json!({"kind": "transport", "ok": true, "structure": text}),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel { morphism, other } => {
            let lm = load_morphism(morphism)?;
            let k1 = kernel(&lm.morphism)?;
            match other {
                None => {
                    let objs = k1.objects.iter().filter(|&&b| b).count();
                    let mors = k1.morphisms.iter().filter(|&&b| b).count();
                    let elems = k1.fibers.iter().filter(|&&b| b).count();
                    out.line(
                        format!(
                            "kernel of {}: {objs} object pair(s), {mors} morphism pair(s), {elems} fiber pair(s) identified",
                            lm.morphism.name
                        ),
                        json!({"kind": "kernel", "morphism": lm.morphism.name,
                               "object_pairs": objs, "morphism_pairs": mors, "fiber_pairs": elems}),
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Some(other) => {
                    let lm2 = load_morphism(other)?;
                    let k2 = kernel(&lm2.morphism)?;
                    let le = kernel_leq(&k1, &k2)?;
                    let ge = kernel_leq(&k2, &k1)?;
                    out.line(
                        format!(
                            "ker({}) <= ker({}): {le}; ker({}) <= ker({}): {ge}",
                            lm.morphism.name, lm2.morphism.name, lm2.morphism.name, lm.morphism.name
                        ),
                        json!({"kind": "kernel-compare", "le": le, "ge": ge}),
                    );
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Product { pcs, name } => {
            let hosts = pcs
                .iter()
                .map(|p| load_pc(p, None))
                .collect::<Result<Vec<_>, _>>()?;
            let prod = product_propcat(&hosts, name)?;
            let text = print_pc_explicit(&prod.host)?;
            out.line(
                &text,
                json!({"kind": "product", "name": name,
                       "objects": prod.host.base.object_count(),
                       "morphisms": prod.host.base.morphism_count(),
                       "pc": text}),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Factor { morphism } => {
            let lm = load_morphism(morphism)?;
            let f = &lm.morphism;
            let fac = factorize(f)?;
            let mut ok = true;
            ok &= report_fa(out, &fac.corestriction.name, &check_morphism(&fac.corestriction));
            ok &= report_fa(out, &fac.inclusion.name, &check_morphism(&fac.inclusion));
            let recomposed = fac.corestriction.then(&fac.inclusion)?;
            let recomposes = recomposed.omap == f.omap
                && recomposed.mmap == f.mmap
                && recomposed.pmap == f.pmap;
            let kf = kernel(f)?;
            let ke = kernel(&fac.corestriction)?;
            let kernels_equal = kernel_leq(&kf, &ke)? && kernel_leq(&ke, &kf)?;
            let sub = is_subprop_morphism(&fac.inclusion)?;
            ok &= recomposes && kernels_equal && sub;
            out.line(
                format!(
                    "factor {}: recomposes={recomposes} kernels-equal={kernels_equal} inclusion-embeds={sub}",
                    f.name
                ),
                json!({"kind": "factor", "morphism": f.name, "recomposes": recomposes,
                       "kernels_equal": kernels_equal, "inclusion_embeds": sub, "ok": ok}),
            );
            Ok(exit(ok))
        }
        Command::Complete { f, k } => {
            let lf = load_morphism(f)?;
            let lk = load_morphism(k)?;
            match complete_through(&lf.morphism, &lk.morphism)? {
                Completion::Found(h) => {
                    let text = print_morphism(
                        &h,
                        &lk.tgt_path.display().to_string(),
                        &lf.tgt_path.display().to_string(),
                    );
                    out.line(&text, json!({"kind": "complete", "found": true, "morphism": text}));
                    Ok(ExitCode::SUCCESS)
                }
                Completion::Obstructed(o) => {
                    out.line(
                        format!("obstruction: {}", o.witness),
                        json!({"kind": "complete", "found": false, "witness": o.witness}),
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Hsp(cmd) => run_hsp(cmd, out, &budget, probes.as_deref()),
        Command::Internal { pc } => {
            let host = load_pc(pc, probes.as_deref())?;
            let (sig, s) = internal_structure(&host)?;
            s.validate()?;
            out.line(
                format!(
                    "{}: {} sort(s), {} function(s), {} relation(s)",
                    s.name,
                    sig.sorts.len(),
                    sig.functions.len(),
                    sig.relations.len()
                ),
                json!({"kind": "internal", "name": s.name, "sorts": sig.sorts.len(),
                       "functions": sig.functions.len(), "relations": sig.relations.len()}),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate {
            interp,
            source,
            target,
        } => {
            let src = load_theory(source)?;
            let tgt = load_theory(target)?;
            let i = load_interp(interp, &tgt.signature, &tgt.language)?;
            let translated = translate_theory(&i, &src, &tgt.signature, &tgt.language)?;
            let text = print_theory(&translated);
            out.line(&text, json!({"kind": "translate", "theory": text}));
            Ok(ExitCode::SUCCESS)
        }
        Command::Soundness { pcs } => {
            let rules: Vec<RuleId> = RuleId::all().into_iter().collect();
            let cfg = SweepConfig {
                seed: cli.seed,
                trials: cli.trials,
            };
            let mut clean = true;
            for p in pcs {
                let host = load_pc(p, probes.as_deref())?;
                for o in sweep(&host, &rules, &cfg) {
                    clean &= o.violations.is_empty();
                    for v in &o.violations {
                        out.line(
                            format!("violation: {} on {:?}: {v}", host.name, o.rule),
                            json!({"kind": "violation", "host": host.name,
                                   "rule": format!("{:?}", o.rule), "witness": v}),
                        );
                    }
                    out.line(
                        format!(
                            "{} {:?}: {} trial(s), {} applicable, {} violation(s)",
                            host.name,
                            o.rule,
                            o.trials,
                            o.applicable,
                            o.violations.len()
                        ),
                        json!({"kind": "sweep", "host": host.name, "rule": format!("{:?}", o.rule),
                               "trials": o.trials, "applicable": o.applicable,
                               "violations": o.violations.len()}),
                    );
                }
            }
            Ok(exit(clean))
        }
    }
}

fn run_hsp(
    cmd: &HspCommand,
    out: &Out,
    budget: &Budget,
    probes: Option<&[Rat]>,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cmd {
        HspCommand::Product { structures } => {
            let loaded = structures
                .iter()
                .map(|p| load_structure(p, probes))
                .collect::<Result<Vec<_>, _>>()?;
            let hosts: Vec<_> = loaded.iter().map(|l| l.structure.host.clone()).collect();
            let prod = product_propcat(&hosts, "product")?;
            let refs: Vec<&Structure> = loaded.iter().map(|l| &l.structure).collect();
            let ps = external_product(&prod, &refs)?;
            let sig = &loaded[0].structure.signature;
            let lang = prod.host.language();
            let mut common = 0usize;
            let mut preserved = 0usize;
            let mut lost = Vec::new();
            for a in enumerate_assertions(sig, &lang, budget) {
                let in_all = refs
                    .iter()
                    .all(|s| matches!(satisfies(s, &a), Ok(r) if r.verdict));
                if !in_all {
                    continue;
                }
                common += 1;
                if matches!(satisfies(&ps, &a), Ok(r) if r.verdict) {
                    preserved += 1;
                } else {
                    lost.push(a.to_string());
                }
            }
            for a in &lost {
                out.line(
                    format!("lost in product: {a}"),
                    json!({"kind": "violation", "assertion": a}),
                );
            }
            out.line(
                format!("product: {preserved}/{common} common assertion(s) preserved"),
                json!({"kind": "hsp-product", "common": common, "preserved": preserved}),
            );
            Ok(exit(lost.is_empty()))
        }
        HspCommand::Image {
            morphism,
            structure,
        } => {
            let lm = load_morphism(morphism)?;
            let ls = load_structure(structure, probes)?;
            let s = rehost(&ls, &lm.morphism.source)?;
            let t = transport_structure(&lm.morphism, &s)?;
            let lang = lm.morphism.source.language();
            let tgt_lang = lm.morphism.target.language();
            let mut common = 0usize;
            let mut preserved = 0usize;
            let mut lost = Vec::new();
            for a in enumerate_assertions(&s.signature, &lang, budget) {
                // Only assertions expressible in both hosts' languages.
                if fibra::syntax::wf_assertion(&s.signature, &tgt_lang, &a).is_err() {
                    continue;
                }
                if !matches!(satisfies(&s, &a), Ok(r) if r.verdict) {
                    continue;
                }
                common += 1;
                if matches!(satisfies(&t, &a), Ok(r) if r.verdict) {
                    preserved += 1;
                } else {
                    lost.push(a.to_string());
                }
            }
            for a in &lost {
                out.line(
                    format!("lost in image: {a}"),
                    json!({"kind": "violation", "assertion": a}),
                );
            }
            out.line(
                format!("image: {preserved}/{common} source assertion(s) preserved"),
                json!({"kind": "hsp-image", "common": common, "preserved": preserved}),
            );
            Ok(exit(lost.is_empty()))
        }
        HspCommand::Submodel {
            inclusion,
            sub,
            ambient,
        } => {
            let lm = load_morphism(inclusion)?;
            let lsub = load_structure(sub, probes)?;
            let lamb = load_structure(ambient, probes)?;
            let sub_s = rehost(&lsub, &lm.morphism.source)?;
            let amb_s = rehost(&lamb, &lm.morphism.target)?;
            let is_sub = external_submodel(&lm.morphism, &sub_s, &amb_s)?;
            out.line(
                format!("submodel: {is_sub}"),
                json!({"kind": "hsp-submodel", "submodel": is_sub}),
            );
            Ok(exit(is_sub))
        }
    }
}

/// Reattach a loaded structure to the prop-category instance a
/// morphism carries, so element tables line up; the two must describe
/// the same host.
fn rehost(ls: &LoadedStructure, host: &Arc<fibra::propcat::FinPropCategory>) -> Result<Structure, String> {
    if *ls.structure.host != **host {
        return Err(format!(
            "structure host `{}` differs from the morphism endpoint `{}`",
            ls.structure.host.name, host.name
        ));
    }
    Ok(Structure {
        host: host.clone(),
        ..ls.structure.clone()
    })
}

/// The product object interpreting a context in a structure's host.
fn ctx_obj(s: &Structure, ctx: &Context) -> Result<usize, String> {
    let objs: Vec<usize> = ctx
        .entries()
        .iter()
        .map(|(_, sort)| {
            s.sorts
                .get(sort)
                .copied()
                .ok_or_else(|| format!("sort `{sort}` is not interpreted"))
        })
        .collect::<Result<_, _>>()?;
    let p = s
        .host
        .base
        .nary_product(&objs)
        .ok_or("the context product does not exist in the host")?;
    Ok(p.obj)
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
