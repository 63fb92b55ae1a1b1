//! Model-theoretic constructions that live outside a single host:
//! products of structures across a product of hosts, images and
//! submodels along morphisms, signature-to-signature translations,
//! and the tautological structure a host carries over its own
//! internal signature.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::propcat::{Elem, FinPropCategory, Obj};
use crate::semantics::Structure;
use crate::syntax::{
    substitute_formula, substitute_term, wf_formula, wf_term, Assertion, Context, FnType,
    Formula, Language, Signature, Term, Theory,
};

use super::image::is_subprop_morphism;
use super::product::{product_elem, ProductPropCat};
use super::{transport_structure, PropMorphism};

/// The product of same-signature structures, one per factor of a
/// product host, formed componentwise.
pub fn external_product(
    prod: &ProductPropCat,
    structures: &[&Structure],
) -> Result<Structure, String> {
    if structures.len() != prod.factors.len() {
        return Err(format!(
            "{} structures given, product has {} factors",
            structures.len(),
            prod.factors.len()
        ));
    }
    for (s, f) in structures.iter().zip(&prod.factors) {
        if *s.host != **f {
            return Err(format!(
                "structure `{}` does not live in the corresponding factor",
                s.name
            ));
        }
    }
    let signature = if let Some(first) = structures.first() {
        if structures.iter().any(|s| s.signature != first.signature) {
            return Err("structures have different signatures".to_string());
        }
        first.signature.clone()
    } else {
        // Empty product: every signature is realizable in the
        // terminal host, but none is given; use the empty one.
        Signature::new()
    };
    let mut sorts = BTreeMap::new();
    for sort in &signature.sorts {
        let parts: Vec<Obj> = structures.iter().map(|s| s.sorts[sort]).collect();
        sorts.insert(sort.clone(), prod.obj_index(&parts));
    }
    let mut functions = BTreeMap::new();
    for name in signature.functions.keys() {
        let parts: Vec<usize> = structures.iter().map(|s| s.functions[name]).collect();
        functions.insert(name.clone(), prod.mor_index(&parts));
    }
    let mut relations = BTreeMap::new();
    for (name, args) in &signature.relations {
        let obj_parts: Vec<Obj> = structures
            .iter()
            .map(|s| {
                let arg_objs: Vec<Obj> = args.iter().map(|a| s.sorts[a]).collect();
                s.host
                    .base
                    .nary_product(&arg_objs)
                    .map(|p| p.obj)
                    .ok_or_else(|| format!("factor lacks the argument product of `{name}`"))
            })
            .collect::<Result<_, String>>()?;
        let parts: Vec<&Elem> = structures.iter().map(|s| &s.relations[name]).collect();
        relations.insert(name.clone(), product_elem(prod, &obj_parts, &parts)?);
    }
    Ok(Structure {
        name: format!(
            "prod({})",
            structures
                .iter()
                .map(|s| s.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        host: Arc::clone(&prod.host),
        signature,
        sorts,
        functions,
        relations,
    })
}

/// The image of a structure along a morphism of hosts — transport.
pub fn external_hom_image(f: &PropMorphism, s: &Structure) -> Result<Structure, String> {
    transport_structure(f, s)
}

/// Check that `sub` (living in the source of `incl`) is a submodel
/// of `ambient` (living in the target): `incl` must exhibit its
/// source as a sub-prop-category, and transporting `sub` along it
/// must reproduce `ambient` exactly.
pub fn external_submodel(
    incl: &PropMorphism,
    sub: &Structure,
    ambient: &Structure,
) -> Result<bool, String> {
    if !is_subprop_morphism(incl)? {
        return Ok(false);
    }
    let moved = transport_structure(incl, sub)?;
    Ok(moved.signature == ambient.signature
        && moved.sorts == ambient.sorts
        && moved.functions == ambient.functions
        && moved.relations == ambient.relations)
}

/// A function symbol's image under a signature interpretation: a
/// term over the listed parameter variables (one per argument, in
/// order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnImage {
    pub params: Vec<String>,
    pub body: Term,
}

/// A relation symbol's image: a formula over the listed parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelImage {
    pub params: Vec<String>,
    pub body: Formula,
}

/// An interpretation of one signature in another: each sort maps to
/// a sort, each function symbol to a term, each relation symbol to a
/// formula.  Sort images are single sorts (not general contexts), so
/// translation is symbol-for-symbol substitution.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignatureInterpretation {
    pub sorts: BTreeMap<String, String>,
    pub fns: BTreeMap<String, FnImage>,
    pub rels: BTreeMap<String, RelImage>,
}

impl SignatureInterpretation {
    /// The identity interpretation of a signature in itself.
    pub fn identity(sg: &Signature) -> SignatureInterpretation {
        let sorts = sg.sorts.iter().map(|s| (s.clone(), s.clone())).collect();
        let fns = sg
            .functions
            .iter()
            .map(|(f, ty)| {
                let params: Vec<String> =
                    (0..ty.args.len()).map(|i| format!("p{}", i + 1)).collect();
                let body = Term::App(f.clone(), params.iter().map(|p| Term::var(p)).collect());
                (f.clone(), FnImage { params, body })
            })
            .collect();
        let rels = sg
            .relations
            .iter()
            .map(|(r, args)| {
                let params: Vec<String> =
                    (0..args.len()).map(|i| format!("p{}", i + 1)).collect();
                let body =
                    Formula::Rel(r.clone(), params.iter().map(|p| Term::var(p)).collect());
                (r.clone(), RelImage { params, body })
            })
            .collect();
        SignatureInterpretation { sorts, fns, rels }
    }

    /// Check the interpretation against a source and target
    /// signature (and the target language, for connectives and
    /// quantifiers in relation images).
    pub fn validate(
        &self,
        src: &Signature,
        tgt: &Signature,
        tgt_lang: &Language,
    ) -> Result<(), String> {
        for s in &src.sorts {
            let img = self
                .sorts
                .get(s)
                .ok_or_else(|| format!("sort `{s}` has no image"))?;
            if !tgt.sorts.contains(img) {
                return Err(format!("sort image `{img}` is not a target sort"));
            }
        }
        for (f, ty) in &src.functions {
            let img = self
                .fns
                .get(f)
                .ok_or_else(|| format!("function `{f}` has no image"))?;
            if img.params.len() != ty.args.len() {
                return Err(format!("image of `{f}` has the wrong parameter count"));
            }
            let ctx = self.param_ctx(&img.params, &ty.args)?;
            let got = wf_term(tgt, &ctx, &img.body).map_err(|e| format!("image of `{f}`: {e}"))?;
            let want = &self.sorts[&ty.result];
            if got != *want {
                return Err(format!(
                    "image of `{f}` has sort `{got}`, expected `{want}`"
                ));
            }
        }
        for (r, args) in &src.relations {
            let img = self
                .rels
                .get(r)
                .ok_or_else(|| format!("relation `{r}` has no image"))?;
            if img.params.len() != args.len() {
                return Err(format!("image of `{r}` has the wrong parameter count"));
            }
            let ctx = self.param_ctx(&img.params, args)?;
            wf_formula(tgt, tgt_lang, &ctx, &img.body)
                .map_err(|e| format!("image of `{r}`: {e}"))?;
        }
        Ok(())
    }

    fn param_ctx(&self, params: &[String], arg_sorts: &[String]) -> Result<Context, String> {
        let entries: Vec<(String, String)> = params
            .iter()
            .zip(arg_sorts)
            .map(|(p, a)| {
                self.sorts
                    .get(a)
                    .map(|img| (p.clone(), img.clone()))
                    .ok_or_else(|| format!("sort `{a}` has no image"))
            })
            .collect::<Result<_, String>>()?;
        Context::new(entries).map_err(|e| e.to_string())
    }

    pub fn translate_sort(&self, s: &str) -> Result<String, String> {
        self.sorts
            .get(s)
            .cloned()
            .ok_or_else(|| format!("sort `{s}` has no image"))
    }

    pub fn translate_ctx(&self, ctx: &Context) -> Result<Context, String> {
        let entries: Vec<(String, String)> = ctx
            .entries()
            .iter()
            .map(|(v, s)| Ok((v.clone(), self.translate_sort(s)?)))
            .collect::<Result<_, String>>()?;
        Context::new(entries).map_err(|e| e.to_string())
    }

    pub fn translate_term(&self, t: &Term) -> Result<Term, String> {
        match t {
            Term::Var(_) => Ok(t.clone()),
            Term::App(f, args) => {
                let img = self
                    .fns
                    .get(f)
                    .ok_or_else(|| format!("function `{f}` has no image"))?;
                let moved: Vec<Term> = args
                    .iter()
                    .map(|a| self.translate_term(a))
                    .collect::<Result<_, String>>()?;
                let subst: BTreeMap<String, Term> =
                    img.params.iter().cloned().zip(moved).collect();
                Ok(substitute_term(&img.body, &subst))
            }
        }
    }

    pub fn translate_formula(&self, f: &Formula) -> Result<Formula, String> {
        match f {
            Formula::Rel(r, args) => {
                let img = self
                    .rels
                    .get(r)
                    .ok_or_else(|| format!("relation `{r}` has no image"))?;
                let moved: Vec<Term> = args
                    .iter()
                    .map(|a| self.translate_term(a))
                    .collect::<Result<_, String>>()?;
                let avoid = moved.iter().flat_map(|t| t.vars()).collect();
                let subst: BTreeMap<String, Term> =
                    img.params.iter().cloned().zip(moved).collect();
                Ok(substitute_formula(&img.body, &subst, &avoid))
            }
            Formula::Eq(l, r, sort) => Ok(Formula::Eq(
                self.translate_term(l)?,
                self.translate_term(r)?,
                self.translate_sort(sort)?,
            )),
            Formula::Conn(c, args) => Ok(Formula::Conn(
                c.clone(),
                args.iter()
                    .map(|a| self.translate_formula(a))
                    .collect::<Result<_, String>>()?,
            )),
            Formula::Quant(q, x, sort, body) => Ok(Formula::Quant(
                q.clone(),
                x.clone(),
                self.translate_sort(sort)?,
                Box::new(self.translate_formula(body)?),
            )),
        }
    }

    pub fn translate_assertion(&self, a: &Assertion) -> Result<Assertion, String> {
        match a {
            Assertion::Eqn {
                ctx,
                lhs,
                rhs,
                sort,
            } => Ok(Assertion::Eqn {
                ctx: self.translate_ctx(ctx)?,
                lhs: self.translate_term(lhs)?,
                rhs: self.translate_term(rhs)?,
                sort: self.translate_sort(sort)?,
            }),
            Assertion::Seq {
                ctx,
                antecedents,
                consequent,
            } => Ok(Assertion::Seq {
                ctx: self.translate_ctx(ctx)?,
                antecedents: antecedents
                    .iter()
                    .map(|f| self.translate_formula(f))
                    .collect::<Result<_, String>>()?,
                consequent: self.translate_formula(consequent)?,
            }),
        }
    }

    /// Compose two interpretations: first `self`, then `other`.
    pub fn then(&self, other: &SignatureInterpretation) -> Result<SignatureInterpretation, String> {
        let sorts = self
            .sorts
            .iter()
            .map(|(s, img)| Ok((s.clone(), other.translate_sort(img)?)))
            .collect::<Result<_, String>>()?;
        let fns = self
            .fns
            .iter()
            .map(|(f, img)| {
                Ok((
                    f.clone(),
                    FnImage {
                        params: img.params.clone(),
                        body: other.translate_term(&img.body)?,
                    },
                ))
            })
            .collect::<Result<_, String>>()?;
        let rels = self
            .rels
            .iter()
            .map(|(r, img)| {
                Ok((
                    r.clone(),
                    RelImage {
                        params: img.params.clone(),
                        body: other.translate_formula(&img.body)?,
                    },
                ))
            })
            .collect::<Result<_, String>>()?;
        Ok(SignatureInterpretation { sorts, fns, rels })
    }
}

/// Translate a theory along an interpretation into a target
/// signature and language.
pub fn translate_theory(
    interp: &SignatureInterpretation,
    theory: &Theory,
    tgt_sig: &Signature,
    tgt_lang: &Language,
) -> Result<Theory, String> {
    interp.validate(&theory.signature, tgt_sig, tgt_lang)?;
    let axioms = theory
        .axioms
        .iter()
        .map(|a| interp.translate_assertion(a))
        .collect::<Result<_, String>>()?;
    Ok(Theory::new(tgt_sig.clone(), tgt_lang.clone(), axioms))
}

/// The tautological structure a host carries over its own internal
/// signature: one sort per object, one unary function symbol per
/// morphism, one nullary relation symbol per terminal fiber element
/// and one unary relation symbol per fiber element elsewhere.
/// Requires the host's designated unary products to be identities
/// (which holds in the word-based hosts), so that a morphism
/// `m : c → d` literally interprets the symbol `m : s_c → s_d`.
pub fn internal_structure(
    host: &Arc<FinPropCategory>,
) -> Result<(Signature, Structure), String> {
    let ff = host
        .finite()
        .ok_or("the internal structure needs table-backed fibers")?;
    let base = &host.base;
    for c in 0..base.object_count() {
        match base.nary_product(&[c]) {
            Some(p) if p.obj == c => {}
            _ => {
                return Err(format!(
                    "unary product of `{}` is not the object itself",
                    base.objects[c]
                ))
            }
        }
    }
    let mut sig = Signature::new();
    let sort_name = |c: Obj| format!("s{c}");
    for c in 0..base.object_count() {
        sig.add_sort(sort_name(c));
    }
    let mut functions = BTreeMap::new();
    for m in 0..base.morphism_count() {
        let name = format!("m{m}");
        sig.functions.insert(
            name.clone(),
            FnType {
                args: vec![sort_name(base.dom(m))],
                result: sort_name(base.cod(m)),
            },
        );
        functions.insert(name, m);
    }
    let mut relations = BTreeMap::new();
    for c in 0..base.object_count() {
        for r in 0..ff.fibers[c].len() {
            let name = format!("r{c}_{r}");
            let args = if c == base.terminal {
                vec![]
            } else {
                vec![sort_name(c)]
            };
            sig.relations.insert(name.clone(), args);
            relations.insert(name, Elem::Fin(r));
        }
    }
    let sorts: BTreeMap<String, Obj> =
        (0..base.object_count()).map(|c| (sort_name(c), c)).collect();
    let structure = Structure {
        name: format!("internal({})", host.name),
        host: Arc::clone(host),
        signature: sig.clone(),
        sorts,
        functions,
        relations,
    };
    Ok((sig, structure))
}
