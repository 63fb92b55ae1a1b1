//! Multi-sorted first-order syntax with contexts.
//!
//! Terms and formulas are judged well-formed relative to a
//! [`Signature`], a logic [`Language`] (quantifier and connective
//! alphabets) and an ordered [`Context`] of typed variables.
//! α-equivalence is decided through a canonical renaming of binders
//! ([`alpha_canon`]), and substitution is simultaneous and
//! capture-avoiding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// The designated nullary connective (the monoid unit).
pub const E: &str = "e";
/// The designated binary connective (the monoid multiplication).
pub const TENSOR: &str = "tensor";

/// Type of a function symbol: argument sorts and result sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnType {
    pub args: Vec<String>,
    pub result: String,
}

/// A multi-sorted first-order signature: sorts, typed function
/// symbols and typed relation symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: BTreeSet<String>,
    pub functions: BTreeMap<String, FnType>,
    pub relations: BTreeMap<String, Vec<String>>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn add_sort(&mut self, s: impl Into<String>) -> &mut Self {
        self.sorts.insert(s.into());
        self
    }

    pub fn add_fn(
        &mut self,
        name: impl Into<String>,
        args: Vec<&str>,
        result: &str,
    ) -> &mut Self {
        self.functions.insert(
            name.into(),
            FnType {
                args: args.into_iter().map(String::from).collect(),
                result: result.to_string(),
            },
        );
        self
    }

    pub fn add_rel(&mut self, name: impl Into<String>, args: Vec<&str>) -> &mut Self {
        self.relations
            .insert(name.into(), args.into_iter().map(String::from).collect());
        self
    }

    /// Check that every sort referenced by a function or relation
    /// symbol is declared.
    pub fn validate(&self) -> Result<(), SyntaxError> {
        for (f, ty) in &self.functions {
            for s in ty.args.iter().chain(std::iter::once(&ty.result)) {
                if !self.sorts.contains(s) {
                    return Err(SyntaxError::UnknownSort {
                        sort: s.clone(),
                        referent: f.clone(),
                    });
                }
            }
        }
        for (r, args) in &self.relations {
            for s in args {
                if !self.sorts.contains(s) {
                    return Err(SyntaxError::UnknownSort {
                        sort: s.clone(),
                        referent: r.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A logic language: a quantifier alphabet and a connective alphabet
/// with arities.  Always contains the connectives [`E`] (arity 0) and
/// [`TENSOR`] (arity 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub quantifiers: BTreeSet<String>,
    pub connectives: BTreeMap<String, usize>,
}

impl Language {
    /// A language with just the mandatory `e` and `tensor`.
    pub fn minimal() -> Self {
        let mut connectives = BTreeMap::new();
        connectives.insert(E.to_string(), 0);
        connectives.insert(TENSOR.to_string(), 2);
        Language {
            quantifiers: BTreeSet::new(),
            connectives,
        }
    }

    pub fn with_quantifiers(mut self, qs: &[&str]) -> Self {
        for q in qs {
            self.quantifiers.insert(q.to_string());
        }
        self
    }

    pub fn with_connective(mut self, name: &str, arity: usize) -> Self {
        self.connectives.insert(name.to_string(), arity);
        self
    }
}

impl Default for Language {
    fn default() -> Self {
        Language::minimal()
    }
}

/// An ordered list of distinct typed variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    entries: Vec<(String, String)>,
}

impl Context {
    pub fn empty() -> Self {
        Context { entries: vec![] }
    }

    /// Build from (variable, sort) pairs, rejecting duplicate names.
    pub fn new(entries: Vec<(String, String)>) -> Result<Self, SyntaxError> {
        let mut seen = BTreeSet::new();
        for (v, _) in &entries {
            if !seen.insert(v.clone()) {
                return Err(SyntaxError::DuplicateVariable { var: v.clone() });
            }
        }
        Ok(Context { entries })
    }

    /// Convenience constructor from string pairs; panics on duplicates.
    pub fn of(pairs: &[(&str, &str)]) -> Self {
        Context::new(
            pairs
                .iter()
                .map(|(v, s)| (v.to_string(), s.to_string()))
                .collect(),
        )
        .expect("duplicate variable in context literal")
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, var: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, s)| s.as_str())
    }

    /// Position of a variable in the context.
    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.entries.iter().position(|(v, _)| v == var)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.lookup(var).is_some()
    }

    /// Extended context `Γ, x:σ`; errors when `x` already occurs.
    pub fn extended(&self, var: &str, sort: &str) -> Result<Context, SyntaxError> {
        if self.contains(var) {
            return Err(SyntaxError::DuplicateVariable {
                var: var.to_string(),
            });
        }
        let mut entries = self.entries.clone();
        entries.push((var.to_string(), sort.to_string()));
        Ok(Context { entries })
    }

    /// Variable set `VS(Γ)`.
    pub fn vars(&self) -> BTreeSet<String> {
        self.entries.iter().map(|(v, _)| v.clone()).collect()
    }

    /// Concatenation `Γ, Γ'`; errors on clashing names.
    pub fn concat(&self, other: &Context) -> Result<Context, SyntaxError> {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Context::new(entries)
    }
}

/// A first-order term: a variable or a function application.
/// Nullary function symbols are arity-0 applications.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(v: &str) -> Term {
        Term::Var(v.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    /// Free variables (all variables; terms have no binders).
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

/// A first-order formula over a signature and a logic language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// Relation atom `R(M₁,…,Mₙ)`.
    Rel(String, Vec<Term>),
    /// Equality atom `M₁ =_σ M₂`.
    Eq(Term, Term, String),
    /// Connective application `◇(φ₁,…,φₙ)`.
    Conn(String, Vec<Formula>),
    /// Quantification `Ω_{x:σ} φ`.
    Quant(String, String, String, Box<Formula>),
}

impl Formula {
    pub fn rel(r: &str, args: Vec<Term>) -> Formula {
        Formula::Rel(r.to_string(), args)
    }

    pub fn eq(lhs: Term, rhs: Term, sort: &str) -> Formula {
        Formula::Eq(lhs, rhs, sort.to_string())
    }

    pub fn conn(c: &str, args: Vec<Formula>) -> Formula {
        Formula::Conn(c.to_string(), args)
    }

    pub fn e() -> Formula {
        Formula::conn(E, vec![])
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::conn(TENSOR, vec![a, b])
    }

    pub fn quant(q: &str, var: &str, sort: &str, body: Formula) -> Formula {
        Formula::Quant(
            q.to_string(),
            var.to_string(),
            sort.to_string(),
            Box::new(body),
        )
    }

    /// Free variables of the formula.
    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Rel(_, args) => {
                let mut out = BTreeSet::new();
                for a in args {
                    a.collect_vars(&mut out);
                }
                out
            }
            Formula::Eq(l, r, _) => {
                let mut out = l.vars();
                r.collect_vars(&mut out);
                out
            }
            Formula::Conn(_, args) => {
                let mut out = BTreeSet::new();
                for a in args {
                    out.extend(a.free_vars());
                }
                out
            }
            Formula::Quant(_, x, _, body) => {
                let mut out = body.free_vars();
                out.remove(x);
                out
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Rel(..) | Formula::Eq(..) => 1,
            Formula::Conn(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Quant(_, _, _, body) => 1 + body.depth(),
        }
    }
}

/// An assertion: an equation-in-context or a sequent-in-context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    /// `M₁ = M₂ : τ [Γ]`
    Eqn {
        ctx: Context,
        lhs: Term,
        rhs: Term,
        sort: String,
    },
    /// `φ₁,…,φₙ ⊢ ψ [Γ]` with `n ≥ 0`
    Seq {
        ctx: Context,
        antecedents: Vec<Formula>,
        consequent: Formula,
    },
}

impl Assertion {
    pub fn eqn(ctx: Context, lhs: Term, rhs: Term, sort: &str) -> Assertion {
        Assertion::Eqn {
            ctx,
            lhs,
            rhs,
            sort: sort.to_string(),
        }
    }

    pub fn seq(ctx: Context, antecedents: Vec<Formula>, consequent: Formula) -> Assertion {
        Assertion::Seq {
            ctx,
            antecedents,
            consequent,
        }
    }

    pub fn ctx(&self) -> &Context {
        match self {
            Assertion::Eqn { ctx, .. } => ctx,
            Assertion::Seq { ctx, .. } => ctx,
        }
    }
}

/// A theory: a signature, a logic language, and a set of axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub language: Language,
    pub axioms: Vec<Assertion>,
}

impl Theory {
    pub fn new(signature: Signature, language: Language, axioms: Vec<Assertion>) -> Self {
        Theory {
            signature,
            language,
            axioms,
        }
    }

    /// Check the signature and every axiom for well-formedness.
    pub fn validate(&self) -> Result<(), SyntaxError> {
        self.signature.validate()?;
        for a in &self.axioms {
            wf_assertion(&self.signature, &self.language, a)?;
        }
        Ok(())
    }

    /// Membership up to α-equivalence.
    pub fn contains(&self, a: &Assertion) -> bool {
        self.axioms.iter().any(|ax| alpha_eq_assertion(ax, a))
    }
}

/// Well-formedness and substitution errors.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("unknown sort `{sort}` referenced by `{referent}`")]
    UnknownSort { sort: String, referent: String },
    #[error("unknown {kind} symbol `{name}`")]
    UnknownSymbol { kind: &'static str, name: String },
    #[error("variable `{var}` not in context")]
    VarNotInContext { var: String },
    #[error("duplicate variable `{var}` in context")]
    DuplicateVariable { var: String },
    #[error("`{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("argument {position} of `{symbol}`: expected sort `{expected}`, got `{got}`")]
    ArgSortMismatch {
        symbol: String,
        position: usize,
        expected: String,
        got: String,
    },
    #[error("equality at sort `{expected}` applied to term of sort `{got}`")]
    EqSortMismatch { expected: String, got: String },
    #[error("substitution for `{var}`: expected sort `{expected}`, got `{got}`")]
    SubstSortMismatch {
        var: String,
        expected: String,
        got: String,
    },
}

/// Infer the unique sort of a term in context, or report the
/// offending subterm.
pub fn wf_term(sg: &Signature, ctx: &Context, t: &Term) -> Result<String, SyntaxError> {
    match t {
        Term::Var(v) => ctx
            .lookup(v)
            .map(String::from)
            .ok_or_else(|| SyntaxError::VarNotInContext { var: v.clone() }),
        Term::App(f, args) => {
            let ty = sg
                .functions
                .get(f)
                .ok_or_else(|| SyntaxError::UnknownSymbol {
                    kind: "function",
                    name: f.clone(),
                })?;
            if ty.args.len() != args.len() {
                return Err(SyntaxError::ArityMismatch {
                    symbol: f.clone(),
                    expected: ty.args.len(),
                    got: args.len(),
                });
            }
            for (i, (arg, expected)) in args.iter().zip(&ty.args).enumerate() {
                let got = wf_term(sg, ctx, arg)?;
                if &got != expected {
                    return Err(SyntaxError::ArgSortMismatch {
                        symbol: f.clone(),
                        position: i,
                        expected: expected.clone(),
                        got,
                    });
                }
            }
            Ok(ty.result.clone())
        }
    }
}

/// Check that a formula is well-formed in context.
pub fn wf_formula(
    sg: &Signature,
    lang: &Language,
    ctx: &Context,
    f: &Formula,
) -> Result<(), SyntaxError> {
    match f {
        Formula::Rel(r, args) => {
            let expected = sg
                .relations
                .get(r)
                .ok_or_else(|| SyntaxError::UnknownSymbol {
                    kind: "relation",
                    name: r.clone(),
                })?;
            if expected.len() != args.len() {
                return Err(SyntaxError::ArityMismatch {
                    symbol: r.clone(),
                    expected: expected.len(),
                    got: args.len(),
                });
            }
            for (i, (arg, want)) in args.iter().zip(expected).enumerate() {
                let got = wf_term(sg, ctx, arg)?;
                if &got != want {
                    return Err(SyntaxError::ArgSortMismatch {
                        symbol: r.clone(),
                        position: i,
                        expected: want.clone(),
                        got,
                    });
                }
            }
            Ok(())
        }
        Formula::Eq(l, r, sort) => {
            if !sg.sorts.contains(sort) {
                return Err(SyntaxError::UnknownSort {
                    sort: sort.clone(),
                    referent: "equality".to_string(),
                });
            }
            for side in [l, r] {
                let got = wf_term(sg, ctx, side)?;
                if &got != sort {
                    return Err(SyntaxError::EqSortMismatch {
                        expected: sort.clone(),
                        got,
                    });
                }
            }
            Ok(())
        }
        Formula::Conn(c, args) => {
            let arity = *lang
                .connectives
                .get(c)
                .ok_or_else(|| SyntaxError::UnknownSymbol {
                    kind: "connective",
                    name: c.clone(),
                })?;
            if arity != args.len() {
                return Err(SyntaxError::ArityMismatch {
                    symbol: c.clone(),
                    expected: arity,
                    got: args.len(),
                });
            }
            for a in args {
                wf_formula(sg, lang, ctx, a)?;
            }
            Ok(())
        }
        Formula::Quant(q, x, sort, body) => {
            if !lang.quantifiers.contains(q) {
                return Err(SyntaxError::UnknownSymbol {
                    kind: "quantifier",
                    name: q.clone(),
                });
            }
            if !sg.sorts.contains(sort) {
                return Err(SyntaxError::UnknownSort {
                    sort: sort.clone(),
                    referent: q.clone(),
                });
            }
            // The bound variable may shadow a context variable; the
            // inner context rebinds it at the quantifier's sort.
            let inner = shadowing_extend(ctx, x, sort);
            wf_formula(sg, lang, &inner, body)
        }
    }
}

/// Extend a context with `x:σ`, replacing any existing binding of `x`
/// (quantifier shadowing).
fn shadowing_extend(ctx: &Context, x: &str, sort: &str) -> Context {
    let mut entries: Vec<(String, String)> = ctx
        .entries()
        .iter()
        .filter(|(v, _)| v != x)
        .cloned()
        .collect();
    entries.push((x.to_string(), sort.to_string()));
    Context { entries }
}

/// Check an assertion for well-formedness over a signature and
/// language.
pub fn wf_assertion(
    sg: &Signature,
    lang: &Language,
    a: &Assertion,
) -> Result<(), SyntaxError> {
    match a {
        Assertion::Eqn {
            ctx,
            lhs,
            rhs,
            sort,
        } => {
            for t in [lhs, rhs] {
                let got = wf_term(sg, ctx, t)?;
                if &got != sort {
                    return Err(SyntaxError::EqSortMismatch {
                        expected: sort.clone(),
                        got,
                    });
                }
            }
            Ok(())
        }
        Assertion::Seq {
            ctx,
            antecedents,
            consequent,
        } => {
            for f in antecedents.iter().chain(std::iter::once(consequent)) {
                wf_formula(sg, lang, ctx, f)?;
            }
            Ok(())
        }
    }
}

/// A fresh variable name based on `base`, avoiding everything in
/// `avoid` (primes are appended until the name is fresh).
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Simultaneous substitution on terms (terms bind nothing, so no
/// capture can occur).
pub fn substitute_term(t: &Term, subst: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| substitute_term(a, subst)).collect(),
        ),
    }
}

/// Simultaneous capture-avoiding substitution on formulas.  Bound
/// variables are renamed fresh whenever a replacement's free variable
/// (or a name in `avoid`) would capture them.
pub fn substitute_formula(
    f: &Formula,
    subst: &BTreeMap<String, Term>,
    avoid: &BTreeSet<String>,
) -> Formula {
    match f {
        Formula::Rel(r, args) => Formula::Rel(
            r.clone(),
            args.iter().map(|a| substitute_term(a, subst)).collect(),
        ),
        Formula::Eq(l, r, sort) => Formula::Eq(
            substitute_term(l, subst),
            substitute_term(r, subst),
            sort.clone(),
        ),
        Formula::Conn(c, args) => Formula::Conn(
            c.clone(),
            args.iter()
                .map(|a| substitute_formula(a, subst, avoid))
                .collect(),
        ),
        Formula::Quant(q, x, sort, body) => {
            // The binder shadows x: drop it from the substitution.
            let mut inner: BTreeMap<String, Term> = subst.clone();
            inner.remove(x);
            // Names that must not be captured by the binder.
            let mut danger: BTreeSet<String> = avoid.clone();
            for t in inner.values() {
                danger.extend(t.vars());
            }
            if danger.contains(x) && body_mentions_replaced(body, &inner) {
                let mut all_avoid = danger;
                all_avoid.extend(body.free_vars());
                all_avoid.insert(x.clone());
                let x2 = fresh_var(x, &all_avoid);
                inner.insert(x.clone(), Term::Var(x2.clone()));
                Formula::Quant(
                    q.clone(),
                    x2,
                    sort.clone(),
                    Box::new(substitute_formula(body, &inner, avoid)),
                )
            } else {
                Formula::Quant(
                    q.clone(),
                    x.clone(),
                    sort.clone(),
                    Box::new(substitute_formula(body, &inner, avoid)),
                )
            }
        }
    }
}

/// Does the body mention any variable the substitution replaces?
/// Used to skip needless binder renames.
fn body_mentions_replaced(body: &Formula, subst: &BTreeMap<String, Term>) -> bool {
    if subst.is_empty() {
        return false;
    }
    let fv = body.free_vars();
    subst.keys().any(|v| fv.contains(v))
}

/// Typed entry point for substitution on terms, mirroring the
/// admissible substitution rule: each replacement must be well-typed
/// at its variable's declared sort under the source context, and the
/// result lives in the target context `tgt`.
pub fn substitute_term_checked(
    sg: &Signature,
    src: &Context,
    tgt: &Context,
    t: &Term,
    subst: &BTreeMap<String, Term>,
) -> Result<Term, SyntaxError> {
    check_subst_typing(sg, src, tgt, subst)?;
    Ok(substitute_term(t, subst))
}

/// Typed entry point for substitution on formulas; bound variables
/// are additionally kept clear of the target context's names.
pub fn substitute_formula_checked(
    sg: &Signature,
    src: &Context,
    tgt: &Context,
    f: &Formula,
    subst: &BTreeMap<String, Term>,
) -> Result<Formula, SyntaxError> {
    check_subst_typing(sg, src, tgt, subst)?;
    Ok(substitute_formula(f, subst, &tgt.vars()))
}

fn check_subst_typing(
    sg: &Signature,
    src: &Context,
    tgt: &Context,
    subst: &BTreeMap<String, Term>,
) -> Result<(), SyntaxError> {
    for (v, t) in subst {
        let expected = src
            .lookup(v)
            .ok_or_else(|| SyntaxError::VarNotInContext { var: v.clone() })?;
        let got = wf_term(sg, tgt, t)?;
        if got != expected {
            return Err(SyntaxError::SubstSortMismatch {
                var: v.clone(),
                expected: expected.to_string(),
                got,
            });
        }
    }
    Ok(())
}

/// Canonical α-form: binders are renamed `#0`, `#1`, … in
/// left-to-right preorder.  `#` never occurs in user identifiers, so
/// canonical names cannot clash with free variables; two formulas are
/// α-equivalent iff their canonical forms are structurally equal.
pub fn alpha_canon(f: &Formula) -> Formula {
    let mut counter = 0usize;
    canon_rec(f, &BTreeMap::new(), &mut counter)
}

fn canon_rec(f: &Formula, ren: &BTreeMap<String, String>, counter: &mut usize) -> Formula {
    let ren_term = |t: &Term| -> Term {
        let subst: BTreeMap<String, Term> = ren
            .iter()
            .map(|(k, v)| (k.clone(), Term::Var(v.clone())))
            .collect();
        substitute_term(t, &subst)
    };
    match f {
        Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(ren_term).collect()),
        Formula::Eq(l, r, sort) => Formula::Eq(ren_term(l), ren_term(r), sort.clone()),
        Formula::Conn(c, args) => Formula::Conn(
            c.clone(),
            args.iter().map(|a| canon_rec(a, ren, counter)).collect(),
        ),
        Formula::Quant(q, x, sort, body) => {
            let fresh = format!("#{counter}");
            *counter += 1;
            let mut inner = ren.clone();
            inner.insert(x.clone(), fresh.clone());
            Formula::Quant(
                q.clone(),
                fresh,
                sort.clone(),
                Box::new(canon_rec(body, &inner, counter)),
            )
        }
    }
}

/// α-equivalence of formulas (assumed well-formed in the same
/// context).
pub fn alpha_eq(f1: &Formula, f2: &Formula) -> bool {
    alpha_canon(f1) == alpha_canon(f2)
}

/// α-equivalence of assertions: contexts must agree on the nose,
/// formulas up to bound-variable renaming.
pub fn alpha_eq_assertion(a1: &Assertion, a2: &Assertion) -> bool {
    match (a1, a2) {
        (
            Assertion::Eqn {
                ctx: c1,
                lhs: l1,
                rhs: r1,
                sort: s1,
            },
            Assertion::Eqn {
                ctx: c2,
                lhs: l2,
                rhs: r2,
                sort: s2,
            },
        ) => c1 == c2 && l1 == l2 && r1 == r2 && s1 == s2,
        (
            Assertion::Seq {
                ctx: c1,
                antecedents: h1,
                consequent: g1,
            },
            Assertion::Seq {
                ctx: c2,
                antecedents: h2,
                consequent: g2,
            },
        ) => {
            c1 == c2
                && h1.len() == h2.len()
                && h1.iter().zip(h2).all(|(a, b)| alpha_eq(a, b))
                && alpha_eq(g1, g2)
        }
        _ => false,
    }
}

/// Canonical α-form of an assertion (binders renamed, context and
/// free variables untouched).
pub fn alpha_canon_assertion(a: &Assertion) -> Assertion {
    match a {
        Assertion::Eqn { .. } => a.clone(),
        Assertion::Seq {
            ctx,
            antecedents,
            consequent,
        } => Assertion::Seq {
            ctx: ctx.clone(),
            antecedents: antecedents.iter().map(alpha_canon).collect(),
            consequent: alpha_canon(consequent),
        },
    }
}

/// Utility predicate: are two assertions equal up to a positional
/// renaming of their (free) context variables?  Contexts must list
/// the same sorts in the same order; the first context's variables
/// are renamed to the second's and the results compared up to
/// α-equivalence.
pub fn fv_renaming_equivalent(a1: &Assertion, a2: &Assertion) -> bool {
    let (c1, c2) = (a1.ctx(), a2.ctx());
    if c1.len() != c2.len() {
        return false;
    }
    for ((_, s1), (_, s2)) in c1.entries().iter().zip(c2.entries()) {
        if s1 != s2 {
            return false;
        }
    }
    let subst: BTreeMap<String, Term> = c1
        .entries()
        .iter()
        .zip(c2.entries())
        .map(|((v1, _), (v2, _))| (v1.clone(), Term::Var(v2.clone())))
        .collect();
    let avoid = c2.vars();
    let renamed = match a1 {
        Assertion::Eqn {
            lhs, rhs, sort, ..
        } => Assertion::Eqn {
            ctx: c2.clone(),
            lhs: substitute_term(lhs, &subst),
            rhs: substitute_term(rhs, &subst),
            sort: sort.clone(),
        },
        Assertion::Seq {
            antecedents,
            consequent,
            ..
        } => Assertion::Seq {
            ctx: c2.clone(),
            antecedents: antecedents
                .iter()
                .map(|f| substitute_formula(f, &subst, &avoid))
                .collect(),
            consequent: substitute_formula(consequent, &subst, &avoid),
        },
    };
    alpha_eq_assertion(&renamed, a2)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel(r, args) => {
                write!(f, "({r}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(l, r, sort) => write!(f, "(= {l} {r} {sort})"),
            Formula::Conn(c, args) => {
                write!(f, "({c}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Formula::Quant(q, x, sort, body) => write!(f, "({q} ({x} {sort}) {body})"),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ctx")?;
        for (v, s) in &self.entries {
            write!(f, " ({v} {s})")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Eqn {
                ctx,
                lhs,
                rhs,
                sort,
            } => write!(f, "(eqn {ctx} {lhs} {rhs} {sort})"),
            Assertion::Seq {
                ctx,
                antecedents,
                consequent,
            } => {
                write!(f, "(seq {ctx} (hyp")?;
                for a in antecedents {
                    write!(f, " {a}")?;
                }
                write!(f, ") (concl {consequent}))")
            }
        }
    }
}
