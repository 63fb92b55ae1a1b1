//! File formats: theories, prop-categories, structures, morphisms,
//! proofs, and signature interpretations, all in the s-expression
//! dialect of [`crate::sexp`].  Every loader reports positioned
//! errors; every printer emits a form the loader reparses to an
//! equal object.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use fibra::calculus::{ProofNode, RuleId};
use fibra::fibered::{FnImage, PropMorphism, RelImage, SignatureInterpretation};
use fibra::propcat::{
    mk_fuzzy_propcat, mk_lattice_propcat, mk_powerset_propcat, Elem, Fibers, FinCategory,
    FinPropCategory, FiniteFiber, FiniteFibers, FuzzyQuantifier, MorData, OpTable, ProductData,
    QuantSpec, TNorm, ValueLattice,
};
use fibra::semantics::Structure;
use fibra::syntax::{
    Assertion, Context, Formula, Language, Signature, Term, Theory,
};
use fibra::Rat;

use crate::sexp::{atom, list, parse_all, Pos, Sexp};

/// A positioned error attributed to a file.
#[derive(Debug, Clone)]
pub struct FileError {
    pub path: PathBuf,
    pub pos: Option<Pos>,
    pub message: String,
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.pos {
            Some(p) => write!(f, "{}:{p}: {}", self.path.display(), self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

impl std::error::Error for FileError {}

pub type FResult<T> = Result<T, FileError>;

fn err<T>(path: &Path, pos: Option<Pos>, message: impl Into<String>) -> FResult<T> {
    Err(FileError {
        path: path.to_path_buf(),
        pos,
        message: message.into(),
    })
}

fn read_forms(path: &Path) -> FResult<Vec<Sexp>> {
    let src = std::fs::read_to_string(path).map_err(|e| FileError {
        path: path.to_path_buf(),
        pos: None,
        message: format!("cannot read file: {e}"),
    })?;
    parse_all(&src).map_err(|e| FileError {
        path: path.to_path_buf(),
        pos: Some(e.pos),
        message: e.message,
    })
}

fn expect_atom<'a>(path: &Path, sx: &'a Sexp, what: &str) -> FResult<&'a str> {
    sx.as_atom()
        .ok_or(())
        .or_else(|_| err(path, Some(sx.pos()), format!("expected {what}, found a list")))
}

fn expect_list<'a>(path: &Path, sx: &'a Sexp, what: &str) -> FResult<&'a [Sexp]> {
    sx.as_list()
        .ok_or(())
        .or_else(|_| err(path, Some(sx.pos()), format!("expected {what}, found an atom")))
}

fn expect_usize(path: &Path, sx: &Sexp, what: &str) -> FResult<usize> {
    let a = expect_atom(path, sx, what)?;
    a.parse()
        .or_else(|_| err(path, Some(sx.pos()), format!("expected {what} (a number), found `{a}`")))
}

fn expect_rat(path: &Path, sx: &Sexp) -> FResult<Rat> {
    let a = expect_atom(path, sx, "a rational")?;
    Rat::from_str(a)
        .or_else(|_| err(path, Some(sx.pos()), format!("expected a rational, found `{a}`")))
}

/// Resolve a path mentioned inside a file, relative to that file.
fn sibling(path: &Path, rel: &str) -> PathBuf {
    match path.parent() {
        Some(dir) => dir.join(rel),
        None => PathBuf::from(rel),
    }
}

// ---------------------------------------------------------------------------
// Terms, formulas, assertions
// ---------------------------------------------------------------------------

pub fn parse_term(path: &Path, sx: &Sexp) -> FResult<Term> {
    match sx {
        Sexp::Atom(v, _) => Ok(Term::Var(v.clone())),
        Sexp::List(items, pos) => {
            let Some(head) = items.first() else {
                return err(path, Some(*pos), "empty term");
            };
            let f = expect_atom(path, head, "a function symbol")?;
            let args = items[1..]
                .iter()
                .map(|a| parse_term(path, a))
                .collect::<FResult<_>>()?;
            Ok(Term::App(f.to_string(), args))
        }
    }
}

pub fn print_term(t: &Term) -> Sexp {
    match t {
        Term::Var(v) => atom(v.clone()),
        Term::App(f, args) => {
            let mut items = vec![atom(f.clone())];
            items.extend(args.iter().map(print_term));
            list(items)
        }
    }
}

pub fn parse_formula(
    path: &Path,
    sx: &Sexp,
    sig: &Signature,
    lang: &Language,
) -> FResult<Formula> {
    let items = expect_list(path, sx, "a formula")?;
    let Some(head) = items.first() else {
        return err(path, Some(sx.pos()), "empty formula");
    };
    let h = expect_atom(path, head, "a formula head symbol")?;
    if h == "=" {
        if items.len() != 4 {
            return err(path, Some(sx.pos()), "equality is (= lhs rhs sort)");
        }
        let lhs = parse_term(path, &items[1])?;
        let rhs = parse_term(path, &items[2])?;
        let sort = expect_atom(path, &items[3], "a sort")?;
        return Ok(Formula::Eq(lhs, rhs, sort.to_string()));
    }
    if lang.quantifiers.contains(h) {
        if items.len() != 3 {
            return err(path, Some(sx.pos()), format!("quantifier is ({h} (x sort) body)"));
        }
        let binder = expect_list(path, &items[1], "a (variable sort) binder")?;
        if binder.len() != 2 {
            return err(path, Some(items[1].pos()), "binder is (variable sort)");
        }
        let var = expect_atom(path, &binder[0], "a variable")?;
        let sort = expect_atom(path, &binder[1], "a sort")?;
        let body = parse_formula(path, &items[2], sig, lang)?;
        return Ok(Formula::Quant(
            h.to_string(),
            var.to_string(),
            sort.to_string(),
            Box::new(body),
        ));
    }
    if let Some(&arity) = lang.connectives.get(h) {
        if items.len() != arity + 1 {
            return err(
                path,
                Some(sx.pos()),
                format!("connective `{h}` takes {arity} argument(s), found {}", items.len() - 1),
            );
        }
        let args = items[1..]
            .iter()
            .map(|a| parse_formula(path, a, sig, lang))
            .collect::<FResult<_>>()?;
        return Ok(Formula::Conn(h.to_string(), args));
    }
    if sig.relations.contains_key(h) {
        let args = items[1..]
            .iter()
            .map(|a| parse_term(path, a))
            .collect::<FResult<_>>()?;
        return Ok(Formula::Rel(h.to_string(), args));
    }
    err(
        path,
        Some(head.pos()),
        format!("`{h}` is not a connective, quantifier, or relation of this signature"),
    )
}

pub fn print_formula(f: &Formula) -> Sexp {
    match f {
        Formula::Rel(r, args) => {
            let mut items = vec![atom(r.clone())];
            items.extend(args.iter().map(print_term));
            list(items)
        }
        Formula::Eq(l, r, sort) => list(vec![
            atom("="),
            print_term(l),
            print_term(r),
            atom(sort.clone()),
        ]),
        Formula::Conn(c, args) => {
            let mut items = vec![atom(c.clone())];
            items.extend(args.iter().map(print_formula));
            list(items)
        }
        Formula::Quant(q, x, sort, body) => list(vec![
            atom(q.clone()),
            list(vec![atom(x.clone()), atom(sort.clone())]),
            print_formula(body),
        ]),
    }
}

pub fn parse_ctx(path: &Path, sx: &Sexp) -> FResult<Context> {
    let items = expect_list(path, sx, "(ctx (x sort) ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("ctx") {
        return err(path, Some(sx.pos()), "expected (ctx (x sort) ...)");
    }
    let mut entries = Vec::new();
    for e in &items[1..] {
        let pair = expect_list(path, e, "a (variable sort) entry")?;
        if pair.len() != 2 {
            return err(path, Some(e.pos()), "context entry is (variable sort)");
        }
        entries.push((
            expect_atom(path, &pair[0], "a variable")?.to_string(),
            expect_atom(path, &pair[1], "a sort")?.to_string(),
        ));
    }
    Context::new(entries).or_else(|e| err(path, Some(sx.pos()), e.to_string()))
}

fn print_ctx(ctx: &Context) -> Sexp {
    let mut items = vec![atom("ctx")];
    items.extend(
        ctx.entries()
            .iter()
            .map(|(v, s)| list(vec![atom(v.clone()), atom(s.clone())])),
    );
    list(items)
}

pub fn parse_assertion(
    path: &Path,
    sx: &Sexp,
    sig: &Signature,
    lang: &Language,
) -> FResult<Assertion> {
    let items = expect_list(path, sx, "an assertion (seq ...) or (eqn ...)")?;
    match items.first().and_then(Sexp::as_atom) {
        Some("seq") => {
            if items.len() != 4 {
                return err(path, Some(sx.pos()), "sequent is (seq (ctx ...) (hyp ...) (concl f))");
            }
            let ctx = parse_ctx(path, &items[1])?;
            let hyp = expect_list(path, &items[2], "(hyp formulas...)")?;
            if hyp.first().and_then(Sexp::as_atom) != Some("hyp") {
                return err(path, Some(items[2].pos()), "expected (hyp ...)");
            }
            let antecedents = hyp[1..]
                .iter()
                .map(|f| parse_formula(path, f, sig, lang))
                .collect::<FResult<_>>()?;
            let concl = expect_list(path, &items[3], "(concl formula)")?;
            if concl.first().and_then(Sexp::as_atom) != Some("concl") || concl.len() != 2 {
                return err(path, Some(items[3].pos()), "expected (concl formula)");
            }
            let consequent = parse_formula(path, &concl[1], sig, lang)?;
            Ok(Assertion::Seq {
                ctx,
                antecedents,
                consequent,
            })
        }
        Some("eqn") => {
            if items.len() != 5 {
                return err(path, Some(sx.pos()), "equation is (eqn (ctx ...) lhs rhs sort)");
            }
            let ctx = parse_ctx(path, &items[1])?;
            let lhs = parse_term(path, &items[2])?;
            let rhs = parse_term(path, &items[3])?;
            let sort = expect_atom(path, &items[4], "a sort")?;
            Ok(Assertion::Eqn {
                ctx,
                lhs,
                rhs,
                sort: sort.to_string(),
            })
        }
        _ => err(path, Some(sx.pos()), "expected (seq ...) or (eqn ...)"),
    }
}

pub fn print_assertion(a: &Assertion) -> Sexp {
    match a {
        Assertion::Seq {
            ctx,
            antecedents,
            consequent,
        } => {
            let mut hyp = vec![atom("hyp")];
            hyp.extend(antecedents.iter().map(print_formula));
            list(vec![
                atom("seq"),
                print_ctx(ctx),
                list(hyp),
                list(vec![atom("concl"), print_formula(consequent)]),
            ])
        }
        Assertion::Eqn {
            ctx,
            lhs,
            rhs,
            sort,
        } => list(vec![
            atom("eqn"),
            print_ctx(ctx),
            print_term(lhs),
            print_term(rhs),
            atom(sort.clone()),
        ]),
    }
}

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

/// Load a theory: one `(theory ...)` form holding sort/fn/rel/conn/
/// quant declarations followed by axioms.
pub fn load_theory(path: &Path) -> FResult<Theory> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (theory ...) form");
    };
    let items = expect_list(path, form, "(theory ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("theory") {
        return err(path, Some(form.pos()), "expected (theory ...)");
    }
    let mut sig = Signature::new();
    let mut lang = Language::minimal();
    // First pass: declarations, so axiom formulas can resolve symbols.
    let mut axiom_forms = Vec::new();
    for decl in &items[1..] {
        let d = expect_list(path, decl, "a declaration or axiom")?;
        match d.first().and_then(Sexp::as_atom) {
            Some("sort") => {
                if d.len() != 2 {
                    return err(path, Some(decl.pos()), "sort declaration is (sort name)");
                }
                sig.add_sort(expect_atom(path, &d[1], "a sort name")?);
            }
            Some("fn") => {
                if d.len() != 4 {
                    return err(path, Some(decl.pos()), "function declaration is (fn name (args) result)");
                }
                let name = expect_atom(path, &d[1], "a function name")?;
                let args = expect_list(path, &d[2], "an argument sort list")?
                    .iter()
                    .map(|a| expect_atom(path, a, "a sort"))
                    .collect::<FResult<Vec<_>>>()?;
                let result = expect_atom(path, &d[3], "a result sort")?;
                sig.add_fn(name, args, result);
            }
            Some("rel") => {
                if d.len() != 3 {
                    return err(path, Some(decl.pos()), "relation declaration is (rel name (args))");
                }
                let name = expect_atom(path, &d[1], "a relation name")?;
                let args = expect_list(path, &d[2], "an argument sort list")?
                    .iter()
                    .map(|a| expect_atom(path, a, "a sort"))
                    .collect::<FResult<Vec<_>>>()?;
                sig.add_rel(name, args);
            }
            Some("conn") => {
                if d.len() != 3 {
                    return err(path, Some(decl.pos()), "connective declaration is (conn name arity)");
                }
                let name = expect_atom(path, &d[1], "a connective name")?;
                let arity = expect_usize(path, &d[2], "an arity")?;
                lang.connectives.insert(name.to_string(), arity);
            }
            Some("quant") => {
                if d.len() != 2 {
                    return err(path, Some(decl.pos()), "quantifier declaration is (quant name)");
                }
                lang.quantifiers
                    .insert(expect_atom(path, &d[1], "a quantifier name")?.to_string());
            }
            Some("seq") | Some("eqn") => axiom_forms.push(decl),
            _ => return err(path, Some(decl.pos()), "unknown theory item"),
        }
    }
    let axioms = axiom_forms
        .iter()
        .map(|a| parse_assertion(path, a, &sig, &lang))
        .collect::<FResult<Vec<_>>>()?;
    let theory = Theory::new(sig, lang, axioms);
    theory
        .validate()
        .or_else(|e| err(path, None, e.to_string()))?;
    Ok(theory)
}

pub fn print_theory(t: &Theory) -> String {
    let mut items = vec![atom("theory")];
    for s in &t.signature.sorts {
        items.push(list(vec![atom("sort"), atom(s.clone())]));
    }
    for (f, ty) in &t.signature.functions {
        items.push(list(vec![
            atom("fn"),
            atom(f.clone()),
            list(ty.args.iter().map(|a| atom(a.clone())).collect()),
            atom(ty.result.clone()),
        ]));
    }
    for (r, args) in &t.signature.relations {
        items.push(list(vec![
            atom("rel"),
            atom(r.clone()),
            list(args.iter().map(|a| atom(a.clone())).collect()),
        ]));
    }
    let minimal = Language::minimal();
    for (c, arity) in &t.language.connectives {
        if minimal.connectives.get(c) != Some(arity) {
            items.push(list(vec![
                atom("conn"),
                atom(c.clone()),
                atom(arity.to_string()),
            ]));
        }
    }
    for q in &t.language.quantifiers {
        items.push(list(vec![atom("quant"), atom(q.clone())]));
    }
    for a in &t.axioms {
        items.push(print_assertion(a));
    }
    format!("{}\n", list(items))
}

// ---------------------------------------------------------------------------
// Prop-categories
// ---------------------------------------------------------------------------

fn parse_atoms(path: &Path, sx: &Sexp) -> FResult<Vec<(String, usize)>> {
    let items = expect_list(path, sx, "(atoms (name size) ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("atoms") {
        return err(path, Some(sx.pos()), "expected (atoms (name size) ...)");
    }
    items[1..]
        .iter()
        .map(|a| {
            let pair = expect_list(path, a, "an (atom size) pair")?;
            if pair.len() != 2 {
                return err(path, Some(a.pos()), "atom entry is (name size)");
            }
            Ok((
                expect_atom(path, &pair[0], "an atom name")?.to_string(),
                expect_usize(path, &pair[1], "a carrier size")?,
            ))
        })
        .collect()
}

fn builtin_pc(
    path: &Path,
    name: &str,
    items: &[Sexp],
    probe_override: Option<&[Rat]>,
) -> FResult<FinPropCategory> {
    let kind = expect_atom(path, &items[1], "a builtin kind")?;
    let mut atoms = None;
    let mut depth = None;
    let mut values = None;
    let mut quants: Vec<&Sexp> = Vec::new();
    let mut tnorm = None;
    let mut probes = None;
    for clause in &items[2..] {
        let c = expect_list(path, clause, "a builtin clause")?;
        match c.first().and_then(Sexp::as_atom) {
            Some("atoms") => atoms = Some(parse_atoms(path, clause)?),
            Some("depth") => {
                if c.len() != 2 {
                    return err(path, Some(clause.pos()), "(depth n)");
                }
                depth = Some(expect_usize(path, &c[1], "a depth")?);
            }
            Some("values") => values = Some(c),
            Some("quant") => quants.push(clause),
            Some("tnorm") => {
                if c.len() != 2 {
                    return err(path, Some(clause.pos()), "(tnorm product|lukasiewicz|minimum)");
                }
                tnorm = Some(match expect_atom(path, &c[1], "a t-norm name")? {
                    "product" => TNorm::Product,
                    "lukasiewicz" => TNorm::Lukasiewicz,
                    "minimum" => TNorm::Minimum,
                    other => {
                        return err(path, Some(c[1].pos()), format!("unknown t-norm `{other}`"))
                    }
                });
            }
            Some("probes") => {
                probes = Some(
                    c[1..]
                        .iter()
                        .map(|r| expect_rat(path, r))
                        .collect::<FResult<Vec<_>>>()?,
                );
            }
            _ => return err(path, Some(clause.pos()), "unknown builtin clause"),
        }
    }
    let atoms = atoms.ok_or(()).or_else(|_| err(path, None, "builtin needs (atoms ...)"))?;
    let depth = depth.ok_or(()).or_else(|_| err(path, None, "builtin needs (depth n)"))?;
    match kind {
        "lattice" => {
            let v = values
                .ok_or(())
                .or_else(|_| err(path, None, "lattice builtin needs (values ...)"))?;
            let lattice = match v[1].as_atom() {
                Some("bool") => ValueLattice::bool2(),
                Some("lukasiewicz") => {
                    ValueLattice::lukasiewicz_chain(expect_usize(path, &v[2], "a chain length")?)
                }
                Some("godel") => {
                    let n = expect_usize(path, &v[2], "a chain length")?;
                    let mut l = ValueLattice::lukasiewicz_chain(n);
                    l.name = format!("godel{n}");
                    l.ops
                        .insert("tensor".to_string(), OpTable::binary_from(n, usize::min));
                    l
                }
                _ => return err(path, Some(v[1].pos()), "values are bool, lukasiewicz N, or godel N"),
            };
            mk_lattice_propcat(name, &atoms, &lattice, depth)
                .or_else(|e| err(path, None, e))
        }
        "powerset" => {
            let qs = quants
                .iter()
                .map(|q| {
                    let c = q.as_list().unwrap();
                    if c.len() != 3 {
                        return err(path, Some(q.pos()), "(quant name all|some|(exactly k))");
                    }
                    let qname = expect_atom(path, &c[1], "a quantifier name")?.to_string();
                    let spec = match &c[2] {
                        Sexp::Atom(a, _) if a == "all" => QuantSpec::Forall,
                        Sexp::Atom(a, _) if a == "some" => QuantSpec::Exists,
                        Sexp::List(sub, _)
                            if sub.first().and_then(Sexp::as_atom) == Some("exactly")
                                && sub.len() == 2 =>
                        {
                            QuantSpec::ExactlyK(expect_usize(path, &sub[1], "a cardinality")?)
                        }
                        other => {
                            return err(path, Some(other.pos()), "quantifier spec is all, some, or (exactly k)")
                        }
                    };
                    Ok((qname, spec))
                })
                .collect::<FResult<Vec<_>>>()?;
            mk_powerset_propcat(name, &atoms, &qs, depth).or_else(|e| err(path, None, e))
        }
        "fuzzy" => {
            let tnorm = tnorm
                .ok_or(())
                .or_else(|_| err(path, None, "fuzzy builtin needs (tnorm ...)"))?;
            let qs = quants
                .iter()
                .map(|q| {
                    let c = q.as_list().unwrap();
                    if c.len() != 2 {
                        return err(path, Some(q.pos()), "(quant forall|exists|Oprod)");
                    }
                    match expect_atom(path, &c[1], "a quantifier name")? {
                        "forall" => Ok(FuzzyQuantifier::Forall),
                        "exists" => Ok(FuzzyQuantifier::Exists),
                        "Oprod" => Ok(FuzzyQuantifier::Oprod),
                        other => err(path, Some(c[1].pos()), format!("unknown fuzzy quantifier `{other}`")),
                    }
                })
                .collect::<FResult<Vec<_>>>()?;
            let chosen = probe_override
                .map(|p| p.to_vec())
                .or(probes);
            mk_fuzzy_propcat(name, &atoms, tnorm, &qs, depth, chosen.as_deref())
                .or_else(|e| err(path, None, e))
        }
        other => err(path, Some(items[1].pos()), format!("unknown builtin `{other}`")),
    }
}

fn explicit_pc(path: &Path, name: &str, items: &[Sexp]) -> FResult<FinPropCategory> {
    let mut objects = Vec::new();
    let mut terminal = None;
    let mut morphisms = Vec::new();
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comp = std::collections::HashMap::new();
    let mut products = BTreeMap::new();
    let mut pairing = std::collections::HashMap::new();
    let mut fibers: BTreeMap<usize, FiniteFiber> = BTreeMap::new();
    let mut restriction: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    let mut quantifiers: BTreeMap<String, BTreeMap<(usize, usize), Vec<u32>>> = BTreeMap::new();
    let mut eq = BTreeMap::new();

    for section in &items[1..] {
        let s = expect_list(path, section, "a prop-category section")?;
        match s.first().and_then(Sexp::as_atom) {
            Some("category") => {
                for entry in &s[1..] {
                    let e = expect_list(path, entry, "a category entry")?;
                    match e.first().and_then(Sexp::as_atom) {
                        Some("obj") if e.len() == 2 => {
                            objects.push(expect_atom(path, &e[1], "an object name")?.to_string());
                        }
                        Some("terminal") if e.len() == 2 => {
                            terminal = Some(expect_usize(path, &e[1], "an object index")?);
                        }
                        Some("mor") if e.len() == 4 => {
                            morphisms.push(MorData {
                                name: expect_atom(path, &e[1], "a morphism name")?.to_string(),
                                dom: expect_usize(path, &e[2], "a domain index")?,
                                cod: expect_usize(path, &e[3], "a codomain index")?,
                            });
                        }
                        Some("id") if e.len() == 3 => {
                            ids.insert(
                                expect_usize(path, &e[1], "an object index")?,
                                expect_usize(path, &e[2], "a morphism index")?,
                            );
                        }
                        Some("comp") if e.len() == 4 => {
                            comp.insert(
                                (
                                    expect_usize(path, &e[1], "a morphism index")?,
                                    expect_usize(path, &e[2], "a morphism index")?,
                                ),
                                expect_usize(path, &e[3], "a morphism index")?,
                            );
                        }
                        Some("prod") if e.len() == 6 => {
                            products.insert(
                                (
                                    expect_usize(path, &e[1], "an object index")?,
                                    expect_usize(path, &e[2], "an object index")?,
                                ),
                                ProductData {
                                    obj: expect_usize(path, &e[3], "an object index")?,
                                    p1: expect_usize(path, &e[4], "a morphism index")?,
                                    p2: expect_usize(path, &e[5], "a morphism index")?,
                                },
                            );
                        }
                        Some("pair") if e.len() == 4 => {
                            pairing.insert(
                                (
                                    expect_usize(path, &e[1], "a morphism index")?,
                                    expect_usize(path, &e[2], "a morphism index")?,
                                ),
                                expect_usize(path, &e[3], "a morphism index")?,
                            );
                        }
                        _ => return err(path, Some(entry.pos()), "unknown category entry"),
                    }
                }
            }
            Some("fiber") => {
                if s.len() < 4 {
                    return err(path, Some(section.pos()), "(fiber obj (elems ...) (leq ...) (op ...)*)");
                }
                let c = expect_usize(path, &s[1], "an object index")?;
                let mut elem_names = Vec::new();
                let mut leq = Vec::new();
                let mut ops = BTreeMap::new();
                for clause in &s[2..] {
                    let cl = expect_list(path, clause, "a fiber clause")?;
                    match cl.first().and_then(Sexp::as_atom) {
                        Some("elems") => {
                            elem_names = cl[1..]
                                .iter()
                                .map(|e| Ok(expect_atom(path, e, "an element name")?.to_string()))
                                .collect::<FResult<_>>()?;
                        }
                        Some("leq") => {
                            leq = cl[1..]
                                .iter()
                                .map(|b| Ok(expect_usize(path, b, "a 0/1 bit")? != 0))
                                .collect::<FResult<_>>()?;
                        }
                        Some("op") => {
                            if cl.len() < 3 {
                                return err(path, Some(clause.pos()), "(op name arity table...)");
                            }
                            let opname = expect_atom(path, &cl[1], "an operation name")?;
                            let arity = expect_usize(path, &cl[2], "an arity")?;
                            let table = cl[3..]
                                .iter()
                                .map(|v| Ok(expect_usize(path, v, "an element index")? as u32))
                                .collect::<FResult<_>>()?;
                            ops.insert(opname.to_string(), OpTable { arity, table });
                        }
                        _ => return err(path, Some(clause.pos()), "unknown fiber clause"),
                    }
                }
                fibers.insert(
                    c,
                    FiniteFiber {
                        elem_names,
                        leq,
                        ops,
                    },
                );
            }
            Some("restrict") => {
                if s.len() < 2 {
                    return err(path, Some(section.pos()), "(restrict mor table...)");
                }
                let m = expect_usize(path, &s[1], "a morphism index")?;
                let table = s[2..]
                    .iter()
                    .map(|v| Ok(expect_usize(path, v, "an element index")? as u32))
                    .collect::<FResult<_>>()?;
                restriction.insert(m, table);
            }
            Some("quant") => {
                if s.len() < 4 {
                    return err(path, Some(section.pos()), "(quant name b c table...)");
                }
                let qname = expect_atom(path, &s[1], "a quantifier name")?.to_string();
                let b = expect_usize(path, &s[2], "an object index")?;
                let c = expect_usize(path, &s[3], "an object index")?;
                let table = s[4..]
                    .iter()
                    .map(|v| Ok(expect_usize(path, v, "an element index")? as u32))
                    .collect::<FResult<_>>()?;
                quantifiers.entry(qname).or_default().insert((b, c), table);
            }
            Some("eq") => {
                if s.len() != 3 {
                    return err(path, Some(section.pos()), "(eq obj elem)");
                }
                eq.insert(
                    expect_usize(path, &s[1], "an object index")?,
                    expect_usize(path, &s[2], "an element index")? as u32,
                );
            }
            _ => return err(path, Some(section.pos()), "unknown prop-category section"),
        }
    }
    let terminal = terminal
        .ok_or(())
        .or_else(|_| err(path, None, "explicit prop-category needs (terminal i)"))?;
    let identities = (0..objects.len())
        .map(|o| {
            ids.get(&o)
                .copied()
                .ok_or(())
                .or_else(|_| err(path, None, format!("missing identity for object {o}")))
        })
        .collect::<FResult<Vec<_>>>()?;
    let nmor = morphisms.len();
    let base = FinCategory::new(
        objects.clone(),
        morphisms,
        comp,
        identities,
        terminal,
        products,
        pairing,
    );
    let fiber_vec = (0..objects.len())
        .map(|o| {
            fibers
                .remove(&o)
                .ok_or(())
                .or_else(|_| err(path, None, format!("missing fiber for object {o}")))
        })
        .collect::<FResult<Vec<_>>>()?;
    let restr_vec = (0..nmor)
        .map(|m| {
            restriction
                .remove(&m)
                .ok_or(())
                .or_else(|_| err(path, None, format!("missing restriction table for morphism {m}")))
        })
        .collect::<FResult<Vec<_>>>()?;
    Ok(FinPropCategory {
        name: name.to_string(),
        base,
        concrete: None,
        fibers: Fibers::Finite(FiniteFibers {
            fibers: fiber_vec,
            restriction: restr_vec,
            quantifiers,
            eq,
        }),
    })
}

/// Load a prop-category file: `(propcat NAME (builtin ...))` or
/// `(propcat NAME (category ...) (fiber ...) ...)`.
pub fn load_pc(path: &Path, probe_override: Option<&[Rat]>) -> FResult<Arc<FinPropCategory>> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (propcat ...) form");
    };
    let items = expect_list(path, form, "(propcat ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("propcat") || items.len() < 3 {
        return err(path, Some(form.pos()), "expected (propcat name ...)");
    }
    let name = expect_atom(path, &items[1], "a prop-category name")?;
    let pc = if items[2].head() == Some("builtin") {
        if items.len() != 3 {
            return err(path, Some(items[3].pos()), "a builtin prop-category is a single (builtin ...) clause");
        }
        let bitems = items[2].as_list().unwrap();
        builtin_pc(path, name, bitems, probe_override)?
    } else {
        explicit_pc(path, name, &items[1..])?
    };
    Ok(Arc::new(pc))
}

/// Print a finite-fiber prop-category as an explicit-table file.
pub fn print_pc_explicit(pc: &FinPropCategory) -> Result<String, String> {
    let ff = pc
        .finite()
        .ok_or("symbolic fibers cannot be printed as tables")?;
    let b = &pc.base;
    let mut cat = vec![atom("category")];
    for o in &b.objects {
        cat.push(list(vec![atom("obj"), atom(o.clone())]));
    }
    cat.push(list(vec![atom("terminal"), atom(b.terminal.to_string())]));
    for m in &b.morphisms {
        cat.push(list(vec![
            atom("mor"),
            atom(m.name.clone()),
            atom(m.dom.to_string()),
            atom(m.cod.to_string()),
        ]));
    }
    for (o, &m) in b.identities.iter().enumerate() {
        cat.push(list(vec![
            atom("id"),
            atom(o.to_string()),
            atom(m.to_string()),
        ]));
    }
    let mut comps: Vec<_> = b.comp.iter().collect();
    comps.sort();
    for (&(g, f), &gf) in comps {
        cat.push(list(vec![
            atom("comp"),
            atom(g.to_string()),
            atom(f.to_string()),
            atom(gf.to_string()),
        ]));
    }
    for (&(x, y), pd) in &b.products {
        cat.push(list(vec![
            atom("prod"),
            atom(x.to_string()),
            atom(y.to_string()),
            atom(pd.obj.to_string()),
            atom(pd.p1.to_string()),
            atom(pd.p2.to_string()),
        ]));
    }
    let mut pairs: Vec<_> = b.pairing.iter().collect();
    pairs.sort();
    for (&(f, g), &fg) in pairs {
        cat.push(list(vec![
            atom("pair"),
            atom(f.to_string()),
            atom(g.to_string()),
            atom(fg.to_string()),
        ]));
    }
    let mut items = vec![atom("propcat"), atom(pc.name.clone()), list(cat)];
    for (c, fiber) in ff.fibers.iter().enumerate() {
        let mut fsx = vec![atom("fiber"), atom(c.to_string())];
        let mut elems = vec![atom("elems")];
        elems.extend(fiber.elem_names.iter().map(|e| atom(e.clone())));
        fsx.push(list(elems));
        let mut leq = vec![atom("leq")];
        leq.extend(fiber.leq.iter().map(|&x| atom(if x { "1" } else { "0" })));
        fsx.push(list(leq));
        for (opname, op) in &fiber.ops {
            let mut osx = vec![
                atom("op"),
                atom(opname.clone()),
                atom(op.arity.to_string()),
            ];
            osx.extend(op.table.iter().map(|v| atom(v.to_string())));
            fsx.push(list(osx));
        }
        items.push(list(fsx));
    }
    for (m, table) in ff.restriction.iter().enumerate() {
        let mut rsx = vec![atom("restrict"), atom(m.to_string())];
        rsx.extend(table.iter().map(|v| atom(v.to_string())));
        items.push(list(rsx));
    }
    for (qname, tables) in &ff.quantifiers {
        for (&(x, y), table) in tables {
            let mut qsx = vec![
                atom("quant"),
                atom(qname.clone()),
                atom(x.to_string()),
                atom(y.to_string()),
            ];
            qsx.extend(table.iter().map(|v| atom(v.to_string())));
            items.push(list(qsx));
        }
    }
    for (&c, &e) in &ff.eq {
        items.push(list(vec![
            atom("eq"),
            atom(c.to_string()),
            atom(e.to_string()),
        ]));
    }
    Ok(format!("{}\n", list(items)))
}

// ---------------------------------------------------------------------------
// Structures
// ---------------------------------------------------------------------------

fn resolve_obj(path: &Path, pc: &FinPropCategory, sx: &Sexp) -> FResult<usize> {
    let a = expect_atom(path, sx, "an object index or name")?;
    if let Ok(i) = a.parse::<usize>() {
        if i < pc.base.object_count() {
            return Ok(i);
        }
    }
    pc.base
        .objects
        .iter()
        .position(|o| o == a)
        .ok_or(())
        .or_else(|_| err(path, Some(sx.pos()), format!("unknown object `{a}`")))
}

fn resolve_mor(path: &Path, pc: &FinPropCategory, sx: &Sexp) -> FResult<usize> {
    let a = expect_atom(path, sx, "a morphism index or name")?;
    if let Ok(i) = a.parse::<usize>() {
        if i < pc.base.morphism_count() {
            return Ok(i);
        }
    }
    pc.base
        .morphisms
        .iter()
        .position(|m| m.name == a)
        .ok_or(())
        .or_else(|_| err(path, Some(sx.pos()), format!("unknown morphism `{a}`")))
}

fn parse_elem(path: &Path, sx: &Sexp) -> FResult<Elem> {
    match sx {
        Sexp::Atom(..) => Ok(Elem::Fin(expect_usize(path, sx, "an element index")?)),
        Sexp::List(items, pos) => {
            if items.first().and_then(Sexp::as_atom) != Some("fuz") {
                return err(path, Some(*pos), "elements are an index or (fuz r ...)");
            }
            Ok(Elem::Fuz(
                items[1..]
                    .iter()
                    .map(|r| expect_rat(path, r))
                    .collect::<FResult<_>>()?,
            ))
        }
    }
}

fn print_elem(e: &Elem) -> Sexp {
    match e {
        Elem::Fin(i) => atom(i.to_string()),
        Elem::Fuz(vals) => {
            let mut items = vec![atom("fuz")];
            items.extend(vals.iter().map(|r| atom(r.to_string())));
            list(items)
        }
    }
}

/// A structure together with the file references it was loaded from.
pub struct LoadedStructure {
    pub structure: Structure,
    pub host_path: PathBuf,
    pub sig_path: PathBuf,
    pub theory: Theory,
}

/// Load a structure file:
/// `(structure NAME (host pc) (sig theory) (sort s ref) (fn f ref) (rel R elem))`.
pub fn load_structure(path: &Path, probe_override: Option<&[Rat]>) -> FResult<LoadedStructure> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (structure ...) form");
    };
    let items = expect_list(path, form, "(structure ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("structure") || items.len() < 2 {
        return err(path, Some(form.pos()), "expected (structure name ...)");
    }
    let name = expect_atom(path, &items[1], "a structure name")?;
    let mut host = None;
    let mut sig = None;
    let mut sort_forms = Vec::new();
    let mut fn_forms = Vec::new();
    let mut rel_forms = Vec::new();
    for clause in &items[2..] {
        let c = expect_list(path, clause, "a structure clause")?;
        match c.first().and_then(Sexp::as_atom) {
            Some("host") if c.len() == 2 => {
                host = Some(sibling(path, expect_atom(path, &c[1], "a file path")?));
            }
            Some("sig") if c.len() == 2 => {
                sig = Some(sibling(path, expect_atom(path, &c[1], "a file path")?));
            }
            Some("sort") if c.len() == 3 => sort_forms.push((&c[1], &c[2])),
            Some("fn") if c.len() == 3 => fn_forms.push((&c[1], &c[2])),
            Some("rel") if c.len() == 3 => rel_forms.push((&c[1], &c[2])),
            _ => return err(path, Some(clause.pos()), "unknown structure clause"),
        }
    }
    let host_path = host
        .ok_or(())
        .or_else(|_| err(path, None, "structure needs (host file)"))?;
    let sig_path = sig
        .ok_or(())
        .or_else(|_| err(path, None, "structure needs (sig theoryfile)"))?;
    let pc = load_pc(&host_path, probe_override)?;
    let theory = load_theory(&sig_path)?;
    let mut sorts = BTreeMap::new();
    for (s, r) in sort_forms {
        sorts.insert(
            expect_atom(path, s, "a sort name")?.to_string(),
            resolve_obj(path, &pc, r)?,
        );
    }
    let mut functions = BTreeMap::new();
    for (f, r) in fn_forms {
        functions.insert(
            expect_atom(path, f, "a function name")?.to_string(),
            resolve_mor(path, &pc, r)?,
        );
    }
    let mut relations = BTreeMap::new();
    for (r, e) in rel_forms {
        relations.insert(
            expect_atom(path, r, "a relation name")?.to_string(),
            parse_elem(path, e)?,
        );
    }
    let structure = Structure {
        name: name.to_string(),
        host: pc,
        signature: theory.signature.clone(),
        sorts,
        functions,
        relations,
    };
    structure
        .validate()
        .or_else(|e| err(path, None, e.to_string()))?;
    Ok(LoadedStructure {
        structure,
        host_path,
        sig_path,
        theory,
    })
}

pub fn print_structure(s: &Structure, host_rel: &str, sig_rel: &str) -> String {
    let mut items = vec![
        atom("structure"),
        atom(s.name.clone()),
        list(vec![atom("host"), atom(host_rel)]),
        list(vec![atom("sig"), atom(sig_rel)]),
    ];
    for (name, &o) in &s.sorts {
        items.push(list(vec![
            atom("sort"),
            atom(name.clone()),
            atom(o.to_string()),
        ]));
    }
    for (name, &m) in &s.functions {
        items.push(list(vec![
            atom("fn"),
            atom(name.clone()),
            atom(m.to_string()),
        ]));
    }
    for (name, e) in &s.relations {
        items.push(list(vec![atom("rel"), atom(name.clone()), print_elem(e)]));
    }
    format!("{}\n", list(items))
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

pub struct LoadedMorphism {
    pub morphism: PropMorphism,
    pub src_path: PathBuf,
    pub tgt_path: PathBuf,
}

/// Load a morphism file:
/// `(morphism NAME (src pc) (tgt pc) (omap i...) (mmap i...) (pmap c i...)...)`.
pub fn load_morphism(path: &Path) -> FResult<LoadedMorphism> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (morphism ...) form");
    };
    let items = expect_list(path, form, "(morphism ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("morphism") || items.len() < 2 {
        return err(path, Some(form.pos()), "expected (morphism name ...)");
    }
    let name = expect_atom(path, &items[1], "a morphism name")?;
    let mut src = None;
    let mut tgt = None;
    let mut omap = None;
    let mut mmap = None;
    let mut pmap_entries: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for clause in &items[2..] {
        let c = expect_list(path, clause, "a morphism clause")?;
        match c.first().and_then(Sexp::as_atom) {
            Some("src") if c.len() == 2 => {
                src = Some(sibling(path, expect_atom(path, &c[1], "a file path")?));
            }
            Some("tgt") if c.len() == 2 => {
                tgt = Some(sibling(path, expect_atom(path, &c[1], "a file path")?));
            }
            Some("omap") => {
                omap = Some(
                    c[1..]
                        .iter()
                        .map(|v| expect_usize(path, v, "an object index"))
                        .collect::<FResult<Vec<_>>>()?,
                );
            }
            Some("mmap") => {
                mmap = Some(
                    c[1..]
                        .iter()
                        .map(|v| expect_usize(path, v, "a morphism index"))
                        .collect::<FResult<Vec<_>>>()?,
                );
            }
            Some("pmap") => {
                if c.len() < 2 {
                    return err(path, Some(clause.pos()), "(pmap obj table...)");
                }
                let o = expect_usize(path, &c[1], "an object index")?;
                let table = c[2..]
                    .iter()
                    .map(|v| Ok(expect_usize(path, v, "an element index")? as u32))
                    .collect::<FResult<_>>()?;
                pmap_entries.insert(o, table);
            }
            _ => return err(path, Some(clause.pos()), "unknown morphism clause"),
        }
    }
    let src_path = src
        .ok_or(())
        .or_else(|_| err(path, None, "morphism needs (src file)"))?;
    let tgt_path = tgt
        .ok_or(())
        .or_else(|_| err(path, None, "morphism needs (tgt file)"))?;
    let source = load_pc(&src_path, None)?;
    let target = load_pc(&tgt_path, None)?;
    let omap = omap
        .ok_or(())
        .or_else(|_| err(path, None, "morphism needs (omap ...)"))?;
    let mmap = mmap
        .ok_or(())
        .or_else(|_| err(path, None, "morphism needs (mmap ...)"))?;
    let pmap = (0..source.base.object_count())
        .map(|o| {
            pmap_entries
                .remove(&o)
                .ok_or(())
                .or_else(|_| err(path, None, format!("missing (pmap {o} ...)")))
        })
        .collect::<FResult<Vec<_>>>()?;
    Ok(LoadedMorphism {
        morphism: PropMorphism {
            name: name.to_string(),
            source,
            target,
            omap,
            mmap,
            pmap,
        },
        src_path,
        tgt_path,
    })
}

pub fn print_morphism(m: &PropMorphism, src_rel: &str, tgt_rel: &str) -> String {
    let mut items = vec![
        atom("morphism"),
        atom(m.name.clone()),
        list(vec![atom("src"), atom(src_rel)]),
        list(vec![atom("tgt"), atom(tgt_rel)]),
    ];
    let mut omap = vec![atom("omap")];
    omap.extend(m.omap.iter().map(|o| atom(o.to_string())));
    items.push(list(omap));
    let mut mmap = vec![atom("mmap")];
    mmap.extend(m.mmap.iter().map(|x| atom(x.to_string())));
    items.push(list(mmap));
    for (o, table) in m.pmap.iter().enumerate() {
        let mut p = vec![atom("pmap"), atom(o.to_string())];
        p.extend(table.iter().map(|v| atom(v.to_string())));
        items.push(list(p));
    }
    format!("{}\n", list(items))
}

// ---------------------------------------------------------------------------
// Proofs
// ---------------------------------------------------------------------------

const RULE_NAMES: &[(&str, RuleId)] = &[
    ("Refl", RuleId::Refl),
    ("Sym", RuleId::Sym),
    ("Trans", RuleId::Trans),
    ("EqSubst", RuleId::EqSubst),
    ("Ax", RuleId::Ax),
    ("Cut", RuleId::Cut),
    ("Cwk", RuleId::Cwk),
    ("Sub", RuleId::Sub),
    ("OmegaCon", RuleId::OmegaCon),
    ("ConnCong", RuleId::ConnCong),
    ("TensorRefIntro", RuleId::TensorRefIntro),
    ("TensorRefElim", RuleId::TensorRefElim),
    ("ERefIntro", RuleId::ERefIntro),
    ("ERefElim", RuleId::ERefElim),
    ("EqAdjFwd", RuleId::EqAdjFwd),
    ("EqAdjBwd", RuleId::EqAdjBwd),
    ("AllAdjFwd", RuleId::AllAdjFwd),
    ("AllAdjBwd", RuleId::AllAdjBwd),
    ("ExAdjFwd", RuleId::ExAdjFwd),
    ("ExAdjBwd", RuleId::ExAdjBwd),
    ("Axiom", RuleId::Axiom),
];

pub fn rule_from_name(name: &str) -> Option<RuleId> {
    RULE_NAMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, r)| r)
}

pub fn rule_name(rule: RuleId) -> &'static str {
    RULE_NAMES
        .iter()
        .find(|&&(_, r)| r == rule)
        .map(|&(n, _)| n)
        .expect("every rule is named")
}

pub fn parse_proof(
    path: &Path,
    sx: &Sexp,
    sig: &Signature,
    lang: &Language,
) -> FResult<ProofNode> {
    let items = expect_list(path, sx, "(proof (rule R) (concl a) (sub ...))")?;
    if items.first().and_then(Sexp::as_atom) != Some("proof") {
        return err(path, Some(sx.pos()), "expected (proof ...)");
    }
    let mut rule = None;
    let mut concl = None;
    let mut subs = Vec::new();
    for clause in &items[1..] {
        let c = expect_list(path, clause, "a proof clause")?;
        match c.first().and_then(Sexp::as_atom) {
            Some("rule") if c.len() == 2 => {
                let rname = expect_atom(path, &c[1], "a rule name")?;
                rule = Some(rule_from_name(rname).ok_or(()).or_else(|_| {
                    err(path, Some(c[1].pos()), format!("unknown rule `{rname}`"))
                })?);
            }
            Some("concl") if c.len() == 2 => {
                concl = Some(parse_assertion(path, &c[1], sig, lang)?);
            }
            Some("sub") => {
                for sub in &c[1..] {
                    subs.push(parse_proof(path, sub, sig, lang)?);
                }
            }
            _ => return err(path, Some(clause.pos()), "unknown proof clause"),
        }
    }
    Ok(ProofNode {
        rule: rule
            .ok_or(())
            .or_else(|_| err(path, Some(sx.pos()), "proof needs (rule R)"))?,
        conclusion: concl
            .ok_or(())
            .or_else(|_| err(path, Some(sx.pos()), "proof needs (concl a)"))?,
        premises: subs,
    })
}

pub fn load_proof(path: &Path, sig: &Signature, lang: &Language) -> FResult<ProofNode> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (proof ...) form");
    };
    parse_proof(path, form, sig, lang)
}

pub fn print_proof(p: &ProofNode) -> Sexp {
    let mut items = vec![
        atom("proof"),
        list(vec![atom("rule"), atom(rule_name(p.rule))]),
        list(vec![atom("concl"), print_assertion(&p.conclusion)]),
    ];
    if !p.premises.is_empty() {
        let mut subs = vec![atom("sub")];
        subs.extend(p.premises.iter().map(print_proof));
        items.push(list(subs));
    }
    list(items)
}

// ---------------------------------------------------------------------------
// Signature interpretations
// ---------------------------------------------------------------------------

/// Load an interpretation file against a target signature/language:
/// `(interp (sort s (ctx t)) (fn f (params p...) term) (rel R (params p...) formula))`.
pub fn load_interp(
    path: &Path,
    tgt_sig: &Signature,
    tgt_lang: &Language,
) -> FResult<SignatureInterpretation> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (interp ...) form");
    };
    let items = expect_list(path, form, "(interp ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("interp") {
        return err(path, Some(form.pos()), "expected (interp ...)");
    }
    let mut interp = SignatureInterpretation::default();
    for clause in &items[1..] {
        let c = expect_list(path, clause, "an interpretation clause")?;
        match c.first().and_then(Sexp::as_atom) {
            Some("sort") if c.len() == 3 => {
                let s = expect_atom(path, &c[1], "a sort name")?;
                let ctx = expect_list(path, &c[2], "(ctx sort)")?;
                if ctx.first().and_then(Sexp::as_atom) != Some("ctx") || ctx.len() != 2 {
                    return err(
                        path,
                        Some(c[2].pos()),
                        "sort images are single-sort contexts: (ctx sort)",
                    );
                }
                interp.sorts.insert(
                    s.to_string(),
                    expect_atom(path, &ctx[1], "a sort")?.to_string(),
                );
            }
            Some("fn") if c.len() == 4 => {
                let f = expect_atom(path, &c[1], "a function name")?;
                let params = parse_params(path, &c[2])?;
                let body = parse_term(path, &c[3])?;
                interp.fns.insert(f.to_string(), FnImage { params, body });
            }
            Some("rel") if c.len() == 4 => {
                let r = expect_atom(path, &c[1], "a relation name")?;
                let params = parse_params(path, &c[2])?;
                let body = parse_formula(path, &c[3], tgt_sig, tgt_lang)?;
                interp.rels.insert(r.to_string(), RelImage { params, body });
            }
            _ => return err(path, Some(clause.pos()), "unknown interpretation clause"),
        }
    }
    Ok(interp)
}

fn parse_params(path: &Path, sx: &Sexp) -> FResult<Vec<String>> {
    let items = expect_list(path, sx, "(params p...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("params") {
        return err(path, Some(sx.pos()), "expected (params p...)");
    }
    items[1..]
        .iter()
        .map(|p| Ok(expect_atom(path, p, "a parameter")?.to_string()))
        .collect()
}

pub fn print_interp(i: &SignatureInterpretation) -> String {
    let mut items = vec![atom("interp")];
    for (s, img) in &i.sorts {
        items.push(list(vec![
            atom("sort"),
            atom(s.clone()),
            list(vec![atom("ctx"), atom(img.clone())]),
        ]));
    }
    for (f, img) in &i.fns {
        let mut params = vec![atom("params")];
        params.extend(img.params.iter().map(|p| atom(p.clone())));
        items.push(list(vec![
            atom("fn"),
            atom(f.clone()),
            list(params),
            print_term(&img.body),
        ]));
    }
    for (r, img) in &i.rels {
        let mut params = vec![atom("params")];
        params.extend(img.params.iter().map(|p| atom(p.clone())));
        items.push(list(vec![
            atom("rel"),
            atom(r.clone()),
            list(params),
            print_formula(&img.body),
        ]));
    }
    format!("{}\n", list(items))
}

// ---------------------------------------------------------------------------
// Probe files
// ---------------------------------------------------------------------------

/// Load a probe file: `(probes r r ...)`.
pub fn load_probes(path: &Path) -> FResult<Vec<Rat>> {
    let forms = read_forms(path)?;
    let [form] = forms.as_slice() else {
        return err(path, None, "expected exactly one (probes ...) form");
    };
    let items = expect_list(path, form, "(probes r ...)")?;
    if items.first().and_then(Sexp::as_atom) != Some("probes") {
        return err(path, Some(form.pos()), "expected (probes r ...)");
    }
    items[1..].iter().map(|r| expect_rat(path, r)).collect()
}
