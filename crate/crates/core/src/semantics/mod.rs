//! Structures in a prop-category, the recursive interpretation of
//! terms and formulas in context, satisfaction of assertions, and
//! bounded theories of structures.
//!
//! A term `M : τ [Γ]` denotes a base morphism `⟦Γ⟧ → ⟦τ⟧`; a formula
//! `φ [Γ]` denotes an element of the fiber over `⟦Γ⟧`.  An equation
//! is satisfied when its sides denote the same morphism; a sequent is
//! satisfied when the left-associated ⊗-product of its antecedents
//! lies below its consequent in the fiber order.

pub mod sweep;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::propcat::{Elem, FinPropCategory, Mor, NaryProduct, Obj};
use crate::syntax::{
    fresh_var, substitute_formula, wf_assertion, wf_term, Assertion, Context, Formula, Signature,
    SyntaxError, Term,
};

/// Interpretation failure.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("sort `{0}` has no interpretation")]
    MissingSort(String),
    #[error("function symbol `{0}` has no interpretation")]
    MissingFn(String),
    #[error("relation symbol `{0}` has no interpretation")]
    MissingRel(String),
    #[error("the host lacks a designated product for {0}")]
    NoProduct(String),
    #[error("invalid interpretation: {0}")]
    BadInterpretation(String),
    #[error("fiber operation failed: {0}")]
    Fiber(String),
}

/// A structure: sorts to base objects, function symbols to base
/// morphisms, relation symbols to fiber elements, all in one host
/// prop-category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub name: String,
    pub host: Arc<FinPropCategory>,
    pub signature: Signature,
    pub sorts: BTreeMap<String, Obj>,
    pub functions: BTreeMap<String, Mor>,
    pub relations: BTreeMap<String, Elem>,
}

impl Structure {
    /// Check every assignment against the signature: function
    /// morphisms must run from the designated product of their
    /// argument sorts to their result sort (nullary symbols from the
    /// terminal object), and relation elements must live in the fiber
    /// over the designated product of their argument sorts.
    pub fn validate(&self) -> Result<(), SemError> {
        self.signature.validate()?;
        for s in &self.signature.sorts {
            let &o = self
                .sorts
                .get(s)
                .ok_or_else(|| SemError::MissingSort(s.clone()))?;
            if o >= self.host.base.object_count() {
                return Err(SemError::BadInterpretation(format!(
                    "sort `{s}` maps to a nonexistent object"
                )));
            }
        }
        for (f, ty) in &self.signature.functions {
            let &m = self
                .functions
                .get(f)
                .ok_or_else(|| SemError::MissingFn(f.clone()))?;
            let dom = self.sort_product(&ty.args)?;
            let cod = self.sort_obj(&ty.result)?;
            if self.host.base.dom(m) != dom.obj || self.host.base.cod(m) != cod {
                return Err(SemError::BadInterpretation(format!(
                    "`{f}` maps to a morphism with the wrong endpoints"
                )));
            }
        }
        for (r, args) in &self.signature.relations {
            let e = self
                .relations
                .get(r)
                .ok_or_else(|| SemError::MissingRel(r.clone()))?;
            let at = self.sort_product(args)?;
            self.check_elem(at.obj, e).map_err(|why| {
                SemError::BadInterpretation(format!("relation `{r}`: {why}"))
            })?;
        }
        Ok(())
    }

    fn check_elem(&self, at: Obj, e: &Elem) -> Result<(), String> {
        match (self.host.fiber_size(at), e) {
            (Some(n), Elem::Fin(i)) => {
                if *i < n {
                    Ok(())
                } else {
                    Err(format!("element index {i} exceeds fiber size {n}"))
                }
            }
            (None, Elem::Fuz(v)) => {
                let want = self.host.carrier(at).ok_or("host has no carriers")?;
                if v.len() == want {
                    Ok(())
                } else {
                    Err(format!(
                        "element has {} carrier points, fiber needs {want}",
                        v.len()
                    ))
                }
            }
            _ => Err("element kind does not match the fiber backend".to_string()),
        }
    }

    pub fn sort_obj(&self, sort: &str) -> Result<Obj, SemError> {
        self.sorts
            .get(sort)
            .copied()
            .ok_or_else(|| SemError::MissingSort(sort.to_string()))
    }

    /// Designated (left-folded) product of a list of sorts.
    pub fn sort_product(&self, sorts: &[String]) -> Result<NaryProduct, SemError> {
        let objs: Vec<Obj> = sorts
            .iter()
            .map(|s| self.sort_obj(s))
            .collect::<Result<_, _>>()?;
        self.host
            .base
            .nary_product(&objs)
            .ok_or_else(|| SemError::NoProduct(sorts.join(" × ")))
    }

    /// Designated product interpreting a context.
    pub fn ctx_product(&self, ctx: &Context) -> Result<NaryProduct, SemError> {
        let sorts: Vec<String> = ctx.entries().iter().map(|(_, s)| s.clone()).collect();
        self.sort_product(&sorts)
    }
}

/// Interpret a term in context as a base morphism `⟦Γ⟧ → ⟦τ⟧`:
/// variables become designated projections, applications compose the
/// symbol's morphism with the tuple of argument interpretations
/// (constants with the unique morphism to the terminal object).
pub fn interpret_term(s: &Structure, ctx: &Context, t: &Term) -> Result<Mor, SemError> {
    wf_term(&s.signature, ctx, t)?;
    let gamma = s.ctx_product(ctx)?;
    interpret_term_at(s, ctx, &gamma, t)
}

fn interpret_term_at(
    s: &Structure,
    ctx: &Context,
    gamma: &NaryProduct,
    t: &Term,
) -> Result<Mor, SemError> {
    match t {
        Term::Var(v) => {
            let i = ctx
                .index_of(v)
                .ok_or_else(|| SyntaxError::VarNotInContext { var: v.clone() })?;
            Ok(gamma.projections[i])
        }
        Term::App(f, args) => {
            let &fm = s
                .functions
                .get(f)
                .ok_or_else(|| SemError::MissingFn(f.clone()))?;
            let components: Vec<Mor> = args
                .iter()
                .map(|a| interpret_term_at(s, ctx, gamma, a))
                .collect::<Result<_, _>>()?;
            let tuple = s
                .host
                .base
                .nary_tuple(gamma.obj, &components)
                .ok_or_else(|| SemError::NoProduct(format!("arguments of `{f}`")))?;
            s.host
                .base
                .compose(fm, tuple)
                .ok_or_else(|| SemError::BadInterpretation(format!("`{f}` does not compose")))
        }
    }
}

/// Interpret a formula in context as an element of the fiber over
/// `⟦Γ⟧`: relation atoms pull the relation's element back along the
/// tuple of argument interpretations, equality atoms pull back the
/// designated `Eq`, connectives act fiberwise, and a quantifier
/// applies `Ω_{⟦Γ⟧,⟦σ⟧}` after realigning along the change-of-product
/// morphism `⟦Γ⟧×⟦σ⟧ → ⟦Γ,x:σ⟧`.
pub fn interpret_formula(s: &Structure, ctx: &Context, f: &Formula) -> Result<Elem, SemError> {
    let gamma = s.ctx_product(ctx)?;
    match f {
        Formula::Rel(r, args) => {
            let elem = s
                .relations
                .get(r)
                .ok_or_else(|| SemError::MissingRel(r.clone()))?;
            let components: Vec<Mor> = args
                .iter()
                .map(|a| {
                    wf_term(&s.signature, ctx, a)?;
                    interpret_term_at(s, ctx, &gamma, a)
                })
                .collect::<Result<_, _>>()?;
            let tuple = s
                .host
                .base
                .nary_tuple(gamma.obj, &components)
                .ok_or_else(|| SemError::NoProduct(format!("arguments of `{r}`")))?;
            s.host.restrict(tuple, elem).map_err(SemError::Fiber)
        }
        Formula::Eq(l, r, sort) => {
            let so = s.sort_obj(sort)?;
            let lm = {
                wf_term(&s.signature, ctx, l)?;
                interpret_term_at(s, ctx, &gamma, l)?
            };
            let rm = {
                wf_term(&s.signature, ctx, r)?;
                interpret_term_at(s, ctx, &gamma, r)?
            };
            let pair = s
                .host
                .base
                .pair(lm, rm)
                .ok_or_else(|| SemError::NoProduct(format!("{sort} × {sort}")))?;
            let eq = s.host.eq_elem(so).map_err(SemError::Fiber)?;
            s.host.restrict(pair, &eq).map_err(SemError::Fiber)
        }
        Formula::Conn(c, args) => {
            let elems: Vec<Elem> = args
                .iter()
                .map(|a| interpret_formula(s, ctx, a))
                .collect::<Result<_, _>>()?;
            let refs: Vec<&Elem> = elems.iter().collect();
            s.host.op(gamma.obj, c, &refs).map_err(SemError::Fiber)
        }
        Formula::Quant(q, x, sort, body) => {
            // Shadowed binders are α-renamed before extending Γ.
            let (x, body) = if ctx.contains(x) {
                let mut avoid = ctx.vars();
                avoid.extend(body.free_vars());
                let x2 = fresh_var(x, &avoid);
                let ren = BTreeMap::from([(x.clone(), Term::Var(x2.clone()))]);
                (x2.clone(), substitute_formula(body, &ren, &ctx.vars()))
            } else {
                (x.clone(), (**body).clone())
            };
            let inner_ctx = ctx.extended(&x, sort)?;
            let inner = interpret_formula(s, &inner_ctx, &body)?;
            let so = s.sort_obj(sort)?;
            let prod = s
                .host
                .base
                .product(gamma.obj, so)
                .ok_or_else(|| SemError::NoProduct(format!("⟦Γ⟧ × {sort}")))?;
            // Change-of-product ⟦Γ⟧×⟦σ⟧ → ⟦Γ,x:σ⟧ from the paired
            // object's projections onto the extended factor list.
            let mut projections: Vec<Mor> = gamma
                .projections
                .iter()
                .map(|&p| {
                    s.host
                        .base
                        .compose(p, prod.p1)
                        .ok_or_else(|| SemError::BadInterpretation("projection".to_string()))
                })
                .collect::<Result<_, _>>()?;
            projections.push(prod.p2);
            let realign = s
                .host
                .base
                .change_of_product(prod.obj, &projections)
                .ok_or_else(|| SemError::NoProduct(format!("⟦Γ, {x}:{sort}⟧")))?;
            let moved = s.host.restrict(realign, &inner).map_err(SemError::Fiber)?;
            s.host
                .quant(q, gamma.obj, so, &moved)
                .map_err(SemError::Fiber)
        }
    }
}

/// Outcome of a satisfaction check, carrying both compared values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfactionReport {
    pub assertion: Assertion,
    pub verdict: bool,
    /// Rendered left-hand value (a morphism, or the ⊗-product of the
    /// antecedents).
    pub left: String,
    /// Rendered right-hand value.
    pub right: String,
    /// Where the comparison happened: a hom-set or a fiber.
    pub at: String,
}

impl std::fmt::Display for SatisfactionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} : {} [{} vs {} at {}]",
            self.assertion,
            if self.verdict { "holds" } else { "fails" },
            self.left,
            self.right,
            self.at
        )
    }
}

/// Decide whether a structure satisfies an assertion.  An equation
/// compares the two term interpretations as morphisms; a sequent
/// compares the left-associated ⊗-product of the antecedents (empty
/// product = `e`) against the consequent in the fiber order.
pub fn satisfies(s: &Structure, a: &Assertion) -> Result<SatisfactionReport, SemError> {
    let lang = s.host.language();
    wf_assertion(&s.signature, &lang, a)?;
    match a {
        Assertion::Eqn { ctx, lhs, rhs, .. } => {
            let lm = interpret_term(s, ctx, lhs)?;
            let rm = interpret_term(s, ctx, rhs)?;
            Ok(SatisfactionReport {
                assertion: a.clone(),
                verdict: lm == rm,
                left: s.host.base.morphisms[lm].name.clone(),
                right: s.host.base.morphisms[rm].name.clone(),
                at: format!(
                    "hom({}, {})",
                    s.host.base.objects[s.host.base.dom(lm)],
                    s.host.base.objects[s.host.base.cod(lm)]
                ),
            })
        }
        Assertion::Seq {
            ctx,
            antecedents,
            consequent,
        } => {
            let gamma = s.ctx_product(ctx)?;
            let mut acc: Option<Elem> = None;
            for f in antecedents {
                let e = interpret_formula(s, ctx, f)?;
                acc = Some(match acc {
                    None => e,
                    Some(prev) => s
                        .host
                        .op(gamma.obj, "tensor", &[&prev, &e])
                        .map_err(SemError::Fiber)?,
                });
            }
            let left = match acc {
                Some(e) => e,
                None => s.host.e_elem(gamma.obj).map_err(SemError::Fiber)?,
            };
            let right = interpret_formula(s, ctx, consequent)?;
            let verdict = s.host.leq(gamma.obj, &left, &right).map_err(SemError::Fiber)?;
            Ok(SatisfactionReport {
                assertion: a.clone(),
                verdict,
                left: s.host.elem_name(gamma.obj, &left),
                right: s.host.elem_name(gamma.obj, &right),
                at: format!("P({})", s.host.base.objects[gamma.obj]),
            })
        }
    }
}

/// Size budget for assertion enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_ctx: usize,
    pub max_term_depth: usize,
    pub max_formula_depth: usize,
    pub max_antecedents: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_ctx: 3,
            max_term_depth: 3,
            max_formula_depth: 3,
            max_antecedents: 2,
        }
    }
}

/// Deterministically enumerate every well-formed assertion within the
/// budget over a signature and language: contexts use the canonical
/// variables `x1, x2, …` with all sort combinations; terms, formulas
/// and antecedent lists grow to their depth/length bounds.  The
/// output is host-independent.
pub fn enumerate_assertions(
    sg: &Signature,
    lang: &crate::syntax::Language,
    budget: &Budget,
) -> Vec<Assertion> {
    let sorts: Vec<String> = sg.sorts.iter().cloned().collect();
    let mut out = vec![];
    for k in 0..=budget.max_ctx {
        for combo in combinations(&sorts, k) {
            let entries: Vec<(String, String)> = combo
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("x{}", i + 1), s.clone()))
                .collect();
            let Ok(ctx) = Context::new(entries) else { continue };
            let terms = enumerate_terms(sg, &ctx, budget.max_term_depth);
            for sort in &sorts {
                let of_sort: Vec<&Term> = terms
                    .iter()
                    .filter(|(_, s)| s == sort)
                    .map(|(t, _)| t)
                    .collect();
                for l in &of_sort {
                    for r in &of_sort {
                        out.push(Assertion::eqn(ctx.clone(), (*l).clone(), (*r).clone(), sort));
                    }
                }
            }
            let formulas = enumerate_formulas(sg, lang, &ctx, &terms, budget.max_formula_depth);
            for consequent in &formulas {
                for n in 0..=budget.max_antecedents {
                    for ante in combinations(&formulas, n) {
                        out.push(Assertion::seq(
                            ctx.clone(),
                            ante.to_vec(),
                            consequent.clone(),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// All length-`k` sequences over `pool` (with repetition), in
/// lexicographic pool order.
fn combinations<T: Clone>(pool: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                pool.iter().map(move |p| {
                    let mut v2 = v.clone();
                    v2.push(p.clone());
                    v2
                })
            })
            .collect();
    }
    out
}

/// All well-typed terms over a context up to a depth bound, with
/// their sorts.
pub fn enumerate_terms(sg: &Signature, ctx: &Context, depth: usize) -> Vec<(Term, String)> {
    let mut layer: Vec<(Term, String)> = ctx
        .entries()
        .iter()
        .map(|(v, s)| (Term::var(v), s.clone()))
        .collect();
    for (f, ty) in &sg.functions {
        if ty.args.is_empty() {
            layer.push((Term::app(f, vec![]), ty.result.clone()));
        }
    }
    let mut all = layer.clone();
    for _ in 1..depth {
        let mut next = vec![];
        for (f, ty) in &sg.functions {
            if ty.args.is_empty() {
                continue;
            }
            let pools: Vec<Vec<&Term>> = ty
                .args
                .iter()
                .map(|want| {
                    all.iter()
                        .filter(|(_, s)| s == want)
                        .map(|(t, _)| t)
                        .collect()
                })
                .collect();
            for args in cartesian(&pools) {
                next.push((
                    Term::app(f, args.into_iter().cloned().collect()),
                    ty.result.clone(),
                ));
            }
        }
        let before = all.len();
        for t in next {
            if !all.contains(&t) {
                all.push(t);
            }
        }
        if all.len() == before {
            break;
        }
    }
    all
}

fn cartesian<'a, T>(pools: &'a [Vec<&'a T>]) -> Vec<Vec<&'a T>> {
    let mut out: Vec<Vec<&T>> = vec![vec![]];
    for pool in pools {
        out = out
            .into_iter()
            .flat_map(|v| {
                pool.iter().map(move |p| {
                    let mut v2 = v.clone();
                    v2.push(*p);
                    v2
                })
            })
            .collect();
    }
    out
}

/// All well-formed formulas over a context up to a depth bound.
/// Quantifiers bind the canonical next variable `x{n+1}`.
pub fn enumerate_formulas(
    sg: &Signature,
    lang: &crate::syntax::Language,
    ctx: &Context,
    terms: &[(Term, String)],
    depth: usize,
) -> Vec<Formula> {
    if depth == 0 {
        return vec![];
    }
    let mut atoms: Vec<Formula> = vec![];
    for (r, args) in &sg.relations {
        let pools: Vec<Vec<&Term>> = args
            .iter()
            .map(|want| {
                terms
                    .iter()
                    .filter(|(_, s)| s == want)
                    .map(|(t, _)| t)
                    .collect()
            })
            .collect();
        for chosen in cartesian(&pools) {
            atoms.push(Formula::rel(r, chosen.into_iter().cloned().collect()));
        }
    }
    for sort in &sg.sorts {
        let of_sort: Vec<&Term> = terms
            .iter()
            .filter(|(_, s)| s == sort)
            .map(|(t, _)| t)
            .collect();
        for l in &of_sort {
            for r in &of_sort {
                atoms.push(Formula::eq((*l).clone(), (*r).clone(), sort));
            }
        }
    }
    for (c, arity) in &lang.connectives {
        if *arity == 0 {
            atoms.push(Formula::conn(c, vec![]));
        }
    }
    let mut all = atoms.clone();
    let mut prev = atoms;
    for d in 1..depth {
        let mut next = vec![];
        for (c, arity) in &lang.connectives {
            if *arity == 0 {
                continue;
            }
            let pools: Vec<Vec<&Formula>> =
                (0..*arity).map(|_| prev.iter().collect()).collect();
            for args in cartesian(&pools) {
                next.push(Formula::conn(c, args.into_iter().cloned().collect()));
            }
        }
        // Quantified formulas: bind a fresh canonical variable over
        // an extended context, at one depth below.
        let x = format!("x{}", ctx.len() + 1);
        for q in &lang.quantifiers {
            for sort in &sg.sorts {
                if let Ok(inner_ctx) = ctx.extended(&x, sort) {
                    let inner_terms = enumerate_terms(sg, &inner_ctx, d);
                    for body in enumerate_formulas(sg, lang, &inner_ctx, &inner_terms, d) {
                        next.push(Formula::quant(q, &x, sort, body));
                    }
                }
            }
        }
        for f in next {
            if !all.contains(&f) {
                all.push(f);
            }
        }
        prev = all.clone();
    }
    all
}

/// The budgeted theory of a structure: every enumerated assertion it
/// satisfies.  Assertions the host cannot interpret (contexts beyond
/// its product depth, connectives it lacks) are skipped.
pub fn theory_of(s: &Structure, budget: &Budget) -> Vec<Assertion> {
    enumerate_assertions(&s.signature, &s.host.language(), budget)
        .into_iter()
        .filter(|a| matches!(satisfies(s, a), Ok(r) if r.verdict))
        .collect()
}

#[cfg(test)]
mod tests;
