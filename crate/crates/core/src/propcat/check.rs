//! The prop-category verifier: base category axioms, designated
//! product data, contravariant functoriality, and the six fiber
//! conditions (algebra homomorphisms, equality, quantifier
//! naturality, the (⊗, e) monoid, the quantifier iteration laws, and
//! the equality decomposition laws).
//!
//! Finite fibers are checked exhaustively over their tables.
//! Symbolic fuzzy fibers are checked on their probe sets, and the
//! report says so via the `probed` flag.

use super::{Elem, Fibers, FinPropCategory, Mor};

/// One failed equation: the condition it belongs to and a witness
/// naming the objects/elements involved and both sides' values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: String,
    pub witness: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.condition, self.witness)
    }
}

/// Outcome of [`check_fa`]: empty `violations` means the input is a
/// prop-category (over the probe set, when `probed`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaReport {
    pub violations: Vec<Violation>,
    /// True when symbolic fibers forced probe-set (non-exhaustive)
    /// checking.
    pub probed: bool,
}

impl FaReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// The violations hitting the named condition.
    pub fn against(&self, condition: &str) -> Vec<&Violation> {
        self.violations
            .iter()
            .filter(|v| v.condition == condition)
            .collect()
    }
}

impl std::fmt::Display for FaReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            write!(f, "ok")?;
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
        }
        if self.probed {
            write!(f, " (symbolic fibers checked on probe sets only)")?;
        }
        Ok(())
    }
}

const MAX_VIOLATIONS: usize = 25;

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn full(&self) -> bool {
        self.violations.len() >= MAX_VIOLATIONS
    }

    fn add(&mut self, condition: &str, witness: String) {
        if !self.full() {
            self.violations.push(Violation {
                condition: condition.to_string(),
                witness,
            });
        }
    }
}

/// Verify that a candidate is a prop-category.  Returns a report
/// rather than an error: an empty violation list is acceptance.
pub fn check_fa(pc: &FinPropCategory) -> FaReport {
    let mut c = Checker { violations: vec![] };
    let probed = pc.fuzzy().is_some();

    check_category(pc, &mut c);
    check_terminal(pc, &mut c);
    check_products(pc, &mut c);
    check_fiber_shapes(pc, &mut c);
    if c.full() {
        // Structural damage makes the fiber equations meaningless.
        return FaReport {
            violations: c.violations,
            probed,
        };
    }
    check_functoriality(pc, &mut c);
    check_condition1(pc, &mut c);
    check_condition4(pc, &mut c);
    check_conditions_2_and_6(pc, &mut c);
    check_condition3(pc, &mut c);
    check_condition5(pc, &mut c);

    FaReport {
        violations: c.violations,
        probed,
    }
}

/// Dense composition matrix: `comp[g * m + f] = g∘f`, `u32::MAX`
/// when undefined.  Turns the hot associativity/functoriality loops
/// into array indexing.
fn dense_comp(pc: &FinPropCategory) -> Vec<u32> {
    let m = pc.base.morphism_count();
    let mut out = vec![u32::MAX; m * m];
    for (&(g, f), &gf) in &pc.base.comp {
        out[g * m + f] = gf as u32;
    }
    out
}

fn mors_by_dom(pc: &FinPropCategory) -> Vec<Vec<Mor>> {
    let mut out = vec![vec![]; pc.base.object_count()];
    for (i, m) in pc.base.morphisms.iter().enumerate() {
        out[m.dom].push(i);
    }
    out
}

fn check_category(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "category";
    for (o, &i) in cat.identities.iter().enumerate() {
        if cat.dom(i) != o || cat.cod(i) != o {
            c.add(cond, format!("id of {} has wrong endpoints", cat.objects[o]));
        }
    }
    for f in 0..cat.morphism_count() {
        let (d, e) = (cat.dom(f), cat.cod(f));
        if cat.compose(f, cat.id(d)) != Some(f) || cat.compose(cat.id(e), f) != Some(f) {
            c.add(
                cond,
                format!("identity laws fail at {}", cat.morphisms[f].name),
            );
            if c.full() {
                return;
            }
        }
    }
    // Closure and endpoint sanity of the composition table.
    let by_dom = mors_by_dom(pc);
    for f in 0..cat.morphism_count() {
        for &g in &by_dom[cat.cod(f)] {
            match cat.compose(g, f) {
                None => c.add(
                    cond,
                    format!(
                        "composite of {} then {} is missing",
                        cat.morphisms[f].name, cat.morphisms[g].name
                    ),
                ),
                Some(gf) => {
                    if cat.dom(gf) != cat.dom(f) || cat.cod(gf) != cat.cod(g) {
                        c.add(
                            cond,
                            format!(
                                "composite of {} then {} has wrong endpoints",
                                cat.morphisms[f].name, cat.morphisms[g].name
                            ),
                        );
                    }
                }
            }
            if c.full() {
                return;
            }
        }
    }
    // Associativity over all composable triples.
    let m = cat.morphism_count();
    let comp = dense_comp(pc);
    for f in 0..m {
        for &g in &by_dom[cat.cod(f)] {
            let gf = comp[g * m + f];
            if gf == u32::MAX {
                continue;
            }
            for &h in &by_dom[cat.cod(g)] {
                let hg = comp[h * m + g];
                let left = comp[h * m + gf as usize];
                let right = if hg == u32::MAX {
                    u32::MAX
                } else {
                    comp[hg as usize * m + f]
                };
                if left != right {
                    c.add(
                        cond,
                        format!(
                            "associativity fails on chain {} ; {} ; {}",
                            cat.morphisms[f].name, cat.morphisms[g].name, cat.morphisms[h].name
                        ),
                    );
                    if c.full() {
                        return;
                    }
                }
            }
        }
    }
}

fn check_terminal(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    for o in 0..cat.object_count() {
        let n = cat.hom(o, cat.terminal).len();
        if n != 1 {
            c.add(
                "terminal",
                format!(
                    "{} has {} morphisms into the terminal object (want 1)",
                    cat.objects[o], n
                ),
            );
        }
    }
}

fn check_products(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "product";
    for (&(b, d), prod) in &cat.products {
        if cat.dom(prod.p1) != prod.obj
            || cat.cod(prod.p1) != b
            || cat.dom(prod.p2) != prod.obj
            || cat.cod(prod.p2) != d
        {
            c.add(
                cond,
                format!(
                    "projections of {}×{} have wrong endpoints",
                    cat.objects[b], cat.objects[d]
                ),
            );
            continue;
        }
        for a in 0..cat.object_count() {
            for &f in cat.hom(a, b) {
                for &g in cat.hom(a, d) {
                    match cat.pair(f, g) {
                        None => c.add(
                            cond,
                            format!(
                                "pairing of {} and {} is missing",
                                cat.morphisms[f].name, cat.morphisms[g].name
                            ),
                        ),
                        Some(fg) => {
                            if cat.compose(prod.p1, fg) != Some(f)
                                || cat.compose(prod.p2, fg) != Some(g)
                            {
                                c.add(
                                    cond,
                                    format!(
                                        "projection laws fail for ⟨{}, {}⟩",
                                        cat.morphisms[f].name, cat.morphisms[g].name
                                    ),
                                );
                            }
                        }
                    }
                    if c.full() {
                        return;
                    }
                }
            }
            // Uniqueness: every map into the product is the pairing
            // of its projections.
            for &h in cat.hom(a, prod.obj) {
                let f = cat.compose(prod.p1, h);
                let g = cat.compose(prod.p2, h);
                let paired = match (f, g) {
                    (Some(f), Some(g)) => cat.pair(f, g),
                    _ => None,
                };
                if paired != Some(h) {
                    c.add(
                        cond,
                        format!(
                            "uniqueness fails: {} ≠ ⟨π₁∘—, π₂∘—⟩ into {}×{}",
                            cat.morphisms[h].name, cat.objects[b], cat.objects[d]
                        ),
                    );
                    if c.full() {
                        return;
                    }
                }
            }
        }
    }
}

/// Table shapes: fiber orders are partial orders, operation tables
/// are total and closed, restriction/quantifier tables have the right
/// lengths and ranges, Eq is present wherever `c×c` is designated.
fn check_fiber_shapes(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "fiber";
    match &pc.fibers {
        Fibers::Finite(ff) => {
            if ff.fibers.len() != cat.object_count() {
                c.add(cond, "one fiber per object is required".to_string());
                return;
            }
            if ff.restriction.len() != cat.morphism_count() {
                c.add(cond, "one restriction table per morphism is required".to_string());
                return;
            }
            for (o, fib) in ff.fibers.iter().enumerate() {
                let n = fib.len();
                if n == 0 || fib.leq.len() != n * n {
                    c.add(
                        cond,
                        format!("fiber over {} has a malformed order", cat.objects[o]),
                    );
                    continue;
                }
                for a in 0..n {
                    if !fib.leq(a, a) {
                        c.add(
                            cond,
                            format!(
                                "order over {} not reflexive at {}",
                                cat.objects[o], fib.elem_names[a]
                            ),
                        );
                    }
                    for b in 0..n {
                        if a != b && fib.leq(a, b) && fib.leq(b, a) {
                            c.add(
                                cond,
                                format!(
                                    "order over {} not antisymmetric at {}, {}",
                                    cat.objects[o], fib.elem_names[a], fib.elem_names[b]
                                ),
                            );
                            if c.full() {
                                return;
                            }
                        }
                    }
                }
                // Transitivity, on raw tables (the hot loop).
                'trans: for a in 0..n {
                    for b in 0..n {
                        if !fib.leq[a * n + b] {
                            continue;
                        }
                        for d in 0..n {
                            if fib.leq[b * n + d] && !fib.leq[a * n + d] {
                                c.add(
                                    cond,
                                    format!(
                                        "order over {} not transitive at {}, {}, {}",
                                        cat.objects[o],
                                        fib.elem_names[a],
                                        fib.elem_names[b],
                                        fib.elem_names[d]
                                    ),
                                );
                                if c.full() {
                                    return;
                                }
                                break 'trans;
                            }
                        }
                    }
                }
                for (op, t) in &fib.ops {
                    if t.table.len() != n.pow(t.arity as u32) {
                        c.add(
                            cond,
                            format!("`{op}` over {} is not total", cat.objects[o]),
                        );
                    }
                    if t.table.iter().any(|&v| v as usize >= n) {
                        c.add(
                            cond,
                            format!("`{op}` over {} is not closed", cat.objects[o]),
                        );
                    }
                }
                if !fib.ops.contains_key("e") || !fib.ops.contains_key("tensor") {
                    c.add(
                        cond,
                        format!("fiber over {} lacks ⊗ or e", cat.objects[o]),
                    );
                }
            }
            // All fibers carry the same connective inventory.
            if let Some(first) = ff.fibers.first() {
                let inventory: Vec<(&String, usize)> =
                    first.ops.iter().map(|(k, v)| (k, v.arity)).collect();
                for (o, fib) in ff.fibers.iter().enumerate() {
                    let here: Vec<(&String, usize)> =
                        fib.ops.iter().map(|(k, v)| (k, v.arity)).collect();
                    if here != inventory {
                        c.add(
                            cond,
                            format!(
                                "fiber over {} has a different connective inventory",
                                cat.objects[o]
                            ),
                        );
                    }
                }
            }
            for (f, table) in ff.restriction.iter().enumerate() {
                let nd = ff.fibers[cat.dom(f)].len();
                let nc = ff.fibers[cat.cod(f)].len();
                if table.len() != nc || table.iter().any(|&v| v as usize >= nd) {
                    c.add(
                        cond,
                        format!("restriction along {} is malformed", cat.morphisms[f].name),
                    );
                }
            }
            for (q, tables) in &ff.quantifiers {
                for (&(b, d), prod) in &cat.products {
                    match tables.get(&(b, d)) {
                        None => c.add(
                            "condition 3",
                            format!(
                                "quantifier {q} lacks a component at ({}, {})",
                                cat.objects[b], cat.objects[d]
                            ),
                        ),
                        Some(t) => {
                            let np = ff.fibers[prod.obj].len();
                            let nb = ff.fibers[b].len();
                            if t.table_malformed(np, nb) {
                                c.add(
                                    cond,
                                    format!(
                                        "quantifier {q} at ({}, {}) is malformed",
                                        cat.objects[b], cat.objects[d]
                                    ),
                                );
                            }
                        }
                    }
                }
            }
            for o in 0..cat.object_count() {
                if let Some(prod) = cat.product(o, o) {
                    match ff.eq.get(&o) {
                        None => c.add(
                            "condition 2",
                            format!("no Eq element at {}", cat.objects[o]),
                        ),
                        Some(&v) => {
                            if v as usize >= ff.fibers[prod.obj].len() {
                                c.add(
                                    cond,
                                    format!("Eq at {} is out of range", cat.objects[o]),
                                );
                            }
                        }
                    }
                }
            }
        }
        Fibers::Fuzzy(fz) => {
            let Some(cb) = pc.concrete.as_ref() else {
                c.add(cond, "fuzzy fibers require a concrete base".to_string());
                return;
            };
            if fz.probes.len() != cat.object_count() {
                c.add(cond, "one probe set per object is required".to_string());
                return;
            }
            for (o, probes) in fz.probes.iter().enumerate() {
                if probes.is_empty() {
                    c.add(cond, format!("empty probe set over {}", cat.objects[o]));
                }
                for p in probes {
                    if p.len() != cb.carriers[o] {
                        c.add(
                            cond,
                            format!(
                                "probe over {} has the wrong carrier length",
                                cat.objects[o]
                            ),
                        );
                    }
                }
            }
        }
    }
}

trait TableShape {
    fn table_malformed(&self, domain: usize, range: usize) -> bool;
}

impl TableShape for Vec<u32> {
    fn table_malformed(&self, domain: usize, range: usize) -> bool {
        self.len() != domain || self.iter().any(|&v| v as usize >= range)
    }
}

/// `P(id) = id` and `P(g∘f) = P(f)∘P(g)`.
fn check_functoriality(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "functoriality";
    match &pc.fibers {
        Fibers::Finite(ff) => {
            for o in 0..cat.object_count() {
                let t = &ff.restriction[cat.id(o)];
                if t.iter().enumerate().any(|(i, &v)| v as usize != i) {
                    c.add(
                        cond,
                        format!("P(id) ≠ id at {}", cat.objects[o]),
                    );
                }
            }
            for (&(g, f), &gf) in &cat.comp {
                let (rf, rg, rgf) = (
                    &ff.restriction[f],
                    &ff.restriction[g],
                    &ff.restriction[gf],
                );
                for (x, &via) in rgf.iter().enumerate() {
                    if rf[rg[x] as usize] != via {
                        c.add(
                            cond,
                            format!(
                                "P(g∘f) ≠ P(f)∘P(g) for f = {}, g = {} at element {}",
                                cat.morphisms[f].name,
                                cat.morphisms[g].name,
                                ff.fibers[cat.cod(g)].elem_names[x]
                            ),
                        );
                        if c.full() {
                            return;
                        }
                        break;
                    }
                }
            }
        }
        Fibers::Fuzzy(_) => {
            // Precomposition is functorial; still spot the tables on
            // probes so explicit-table fuzzy inputs would be caught.
            for (&(g, f), &gf) in &cat.comp {
                let (elems, _) = pc.fiber_elements(cat.cod(g));
                for x in &elems {
                    let via = pc
                        .restrict(g, x)
                        .and_then(|y| pc.restrict(f, &y));
                    if via != pc.restrict(gf, x) {
                        c.add(
                            cond,
                            format!(
                                "P(g∘f) ≠ P(f)∘P(g) for f = {}, g = {}",
                                cat.morphisms[f].name, cat.morphisms[g].name
                            ),
                        );
                        if c.full() {
                            return;
                        }
                        break;
                    }
                }
            }
        }
    }
}

/// Condition 1: every `P(f)` is a monotone homomorphism for the
/// whole connective inventory.
fn check_condition1(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "condition 1";
    match &pc.fibers {
        Fibers::Finite(ff) => {
            for f in 0..cat.morphism_count() {
                let (dom, cod) = (cat.dom(f), cat.cod(f));
                let rf = &ff.restriction[f];
                let (fd, fc) = (&ff.fibers[dom], &ff.fibers[cod]);
                let (nd, nc) = (fd.len(), fc.len());
                // Monotonicity, on raw tables.
                'mono: for a in 0..nc {
                    let ra = rf[a] as usize;
                    for b in 0..nc {
                        if fc.leq[a * nc + b] && !fd.leq[ra * nd + rf[b] as usize] {
                            c.add(
                                cond,
                                format!(
                                    "P({}) not monotone: {} ≤ {} but images are not",
                                    cat.morphisms[f].name, fc.elem_names[a], fc.elem_names[b]
                                ),
                            );
                            if c.full() {
                                return;
                            }
                            break 'mono;
                        }
                    }
                }
                for (op, tc) in &fc.ops {
                    let Some(td) = fd.ops.get(op) else { continue };
                    let bad = |c: &mut Checker, lhs: u32, rhs: u32, at: String| {
                        c.add(
                            cond,
                            format!(
                                "P({}) not a `{op}`-homomorphism at {at}: {} vs {}",
                                cat.morphisms[f].name,
                                fd.elem_names[lhs as usize],
                                fd.elem_names[rhs as usize]
                            ),
                        );
                    };
                    match tc.arity {
                        0 => {
                            let (l, r) = (rf[tc.table[0] as usize], td.table[0]);
                            if l != r {
                                bad(c, l, r, "()".to_string());
                            }
                        }
                        1 => {
                            for a in 0..nc {
                                let l = rf[tc.table[a] as usize];
                                let r = td.table[rf[a] as usize];
                                if l != r {
                                    bad(c, l, r, fc.elem_names[a].clone());
                                    break;
                                }
                            }
                        }
                        2 => {
                            'hom2: for b in 0..nc {
                                let rb = rf[b] as usize * nd;
                                let row = &tc.table[b * nc..(b + 1) * nc];
                                for a in 0..nc {
                                    let l = rf[row[a] as usize];
                                    let r = td.table[rf[a] as usize + rb];
                                    if l != r {
                                        bad(
                                            c,
                                            l,
                                            r,
                                            format!(
                                                "({}, {})",
                                                fc.elem_names[a], fc.elem_names[b]
                                            ),
                                        );
                                        break 'hom2;
                                    }
                                }
                            }
                        }
                        _ => {}
                    }
                    if c.full() {
                        return;
                    }
                }
            }
        }
        Fibers::Fuzzy(_) => {
            let ops: [(&str, usize); 4] =
                [("e", 0), ("tensor", 2), ("min", 2), ("max", 2)];
            for f in 0..cat.morphism_count() {
                let (dom, cod) = (cat.dom(f), cat.cod(f));
                let (elems, _) = pc.fiber_elements(cod);
                for a in &elems {
                    let ra = pc.restrict(f, a).unwrap();
                    for b in &elems {
                        let rb = pc.restrict(f, b).unwrap();
                        if pc.leq(cod, a, b).unwrap() && !pc.leq(dom, &ra, &rb).unwrap() {
                            c.add(
                                cond,
                                format!("P({}) not monotone", cat.morphisms[f].name),
                            );
                            break;
                        }
                        for (op, arity) in ops {
                            if arity != 2 {
                                continue;
                            }
                            let l = pc
                                .restrict(f, &pc.op(cod, op, &[a, b]).unwrap())
                                .unwrap();
                            let r = pc.op(dom, op, &[&ra, &rb]).unwrap();
                            if l != r {
                                c.add(
                                    cond,
                                    format!(
                                        "P({}) is not a `{op}`-homomorphism",
                                        cat.morphisms[f].name
                                    ),
                                );
                                break;
                            }
                        }
                        if c.full() {
                            return;
                        }
                    }
                }
                let l = pc.restrict(f, &pc.e_elem(cod).unwrap()).unwrap();
                if l != pc.e_elem(dom).unwrap() {
                    c.add(
                        cond,
                        format!("P({}) does not preserve e", cat.morphisms[f].name),
                    );
                }
            }
        }
    }
}

/// Condition 4: `(P(c), ⊗, e)` is a monoid.
fn check_condition4(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "condition 4";
    match &pc.fibers {
        Fibers::Finite(ff) => {
            for (o, fib) in ff.fibers.iter().enumerate() {
                let n = fib.len();
                let (Some(e), Some(t)) = (fib.ops.get("e"), fib.ops.get("tensor")) else {
                    continue; // reported by the shape check
                };
                let e = e.table[0] as usize;
                let t = &t.table;
                for a in 0..n {
                    if t[a + n * e] as usize != a || t[e + n * a] as usize != a {
                        c.add(
                            cond,
                            format!(
                                "e is not a ⊗-unit over {} at {}",
                                cat.objects[o], fib.elem_names[a]
                            ),
                        );
                        if c.full() {
                            return;
                        }
                    }
                }
                'assoc: for a in 0..n {
                    for b in 0..n {
                        let ab = t[a + n * b] as usize;
                        for d in 0..n {
                            let bd = t[b + n * d] as usize;
                            if t[ab + n * d] != t[a + n * bd] {
                                c.add(
                                    cond,
                                    format!(
                                        "⊗ not associative over {} at {}, {}, {}",
                                        cat.objects[o],
                                        fib.elem_names[a],
                                        fib.elem_names[b],
                                        fib.elem_names[d]
                                    ),
                                );
                                if c.full() {
                                    return;
                                }
                                break 'assoc;
                            }
                        }
                    }
                }
            }
        }
        Fibers::Fuzzy(_) => {
            for o in 0..cat.object_count() {
                let (elems, _) = pc.fiber_elements(o);
                let e = pc.e_elem(o).unwrap();
                for a in &elems {
                    if pc.op(o, "tensor", &[a, &e]).unwrap() != *a
                        || pc.op(o, "tensor", &[&e, a]).unwrap() != *a
                    {
                        c.add(
                            cond,
                            format!("e is not a ⊗-unit over {}", cat.objects[o]),
                        );
                    }
                    for b in &elems {
                        let ab = pc.op(o, "tensor", &[a, b]).unwrap();
                        for d in &elems {
                            let bd = pc.op(o, "tensor", &[b, d]).unwrap();
                            if pc.op(o, "tensor", &[&ab, d]).unwrap()
                                != pc.op(o, "tensor", &[a, &bd]).unwrap()
                            {
                                c.add(
                                    cond,
                                    format!("⊗ not associative over {}", cat.objects[o]),
                                );
                                if c.full() {
                                    return;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Conditions 2 and 6: fibered equality exists (shape check), equals
/// `e` at the terminal square, and decomposes over designated
/// products.
fn check_conditions_2_and_6(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "condition 6";
    // Eq₁ = e_{1×1}.
    if let Some(t2) = cat.product(cat.terminal, cat.terminal) {
        match (pc.eq_elem(cat.terminal), pc.e_elem(t2.obj)) {
            (Ok(eq1), Ok(e)) => {
                if eq1 != e {
                    c.add(
                        cond,
                        format!(
                            "Eq at the terminal object is {}, not e = {}",
                            pc.elem_name(t2.obj, &eq1),
                            pc.elem_name(t2.obj, &e)
                        ),
                    );
                }
            }
            (Err(why), _) | (_, Err(why)) => c.add(cond, why),
        }
    }
    // Eq_{c₁×c₂} = P(⟨q₁p₁, q₁p₂⟩)(Eq_{c₁}) ⊗ P(⟨q₂p₁, q₂p₂⟩)(Eq_{c₂}).
    for (&(c1, c2), prod) in &cat.products {
        let p = prod.obj;
        let (Some(square), Some(sq1), Some(sq2)) = (
            cat.product(p, p),
            cat.product(c1, c1),
            cat.product(c2, c2),
        ) else {
            continue;
        };
        let _ = (square, sq1, sq2);
        let (Ok(eq_p), Ok(eq1), Ok(eq2)) = (
            pc.eq_elem(p),
            pc.eq_elem(c1),
            pc.eq_elem(c2),
        ) else {
            continue; // missing Eq reported by the shape check
        };
        let pp = cat.product(p, p).unwrap();
        let q1p1 = cat.compose(prod.p1, pp.p1);
        let q1p2 = cat.compose(prod.p1, pp.p2);
        let q2p1 = cat.compose(prod.p2, pp.p1);
        let q2p2 = cat.compose(prod.p2, pp.p2);
        let (Some(a1), Some(a2), Some(b1), Some(b2)) = (q1p1, q1p2, q2p1, q2p2) else {
            continue;
        };
        let (Some(m1), Some(m2)) = (cat.pair(a1, a2), cat.pair(b1, b2)) else {
            continue;
        };
        let lhs = eq_p;
        let rhs = (|| -> Result<Elem, String> {
            let x = pc.restrict(m1, &eq1)?;
            let y = pc.restrict(m2, &eq2)?;
            pc.op(pp.obj, "tensor", &[&x, &y])
        })();
        match rhs {
            Ok(rhs) => {
                if lhs != rhs {
                    c.add(
                        cond,
                        format!(
                            "Eq over {}×{} is {}, decomposition gives {}",
                            cat.objects[c1],
                            cat.objects[c2],
                            pc.elem_name(pp.obj, &lhs),
                            pc.elem_name(pp.obj, &rhs)
                        ),
                    );
                }
            }
            Err(why) => c.add(cond, why),
        }
        if c.full() {
            return;
        }
    }
}

/// Condition 3: each `Ω_{(·),c}` is natural in its first argument —
/// `Ω_{b′,c} ∘ P(f×id) = P(f) ∘ Ω_{b,c}` for every `f : b′ → b`.
/// (Components need not be monotone: non-monotone quantifiers can
/// still be natural.)
fn check_condition3(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "condition 3";
    let quantifiers = pc.quantifier_names();
    for q in &quantifiers {
        for (&(b, d), prod) in &cat.products {
            for f in 0..cat.morphism_count() {
                if cat.cod(f) != b {
                    continue;
                }
                let b2 = cat.dom(f);
                let Some(prod2) = cat.product(b2, d) else { continue };
                // f×id : b′×d → b×d as ⟨f∘π₁, π₂⟩.
                let Some(fp1) = cat.compose(f, prod2.p1) else { continue };
                let Some(fxid) = cat.pair(fp1, prod2.p2) else { continue };
                let (elems, _) = pc.fiber_elements(prod.obj);
                for x in &elems {
                    let lhs = pc
                        .restrict(fxid, x)
                        .and_then(|y| pc.quant(q, b2, d, &y));
                    let rhs = pc
                        .quant(q, b, d, x)
                        .and_then(|y| pc.restrict(f, &y));
                    match (lhs, rhs) {
                        (Ok(l), Ok(r)) => {
                            if l != r {
                                c.add(
                                    cond,
                                    format!(
                                        "{q} not natural along {} at {} over ({}, {}): {} vs {}",
                                        cat.morphisms[f].name,
                                        pc.elem_name(prod.obj, x),
                                        cat.objects[b],
                                        cat.objects[d],
                                        pc.elem_name(prod2.obj, &l),
                                        pc.elem_name(prod2.obj, &r)
                                    ),
                                );
                                if c.full() {
                                    return;
                                }
                                break;
                            }
                        }
                        (Err(why), _) | (_, Err(why)) => {
                            c.add(cond, why);
                            break;
                        }
                    }
                }
            }
        }
    }
}

/// Condition 5: the quantifier iteration laws
/// `Ω_{b,1} ∘ P(π₁) = id` and
/// `Ω_{b,c×d} ∘ P(a_{b,c,d}) = Ω_{b,c} ∘ Ω_{b×c,d}`.
fn check_condition5(pc: &FinPropCategory, c: &mut Checker) {
    let cat = &pc.base;
    let cond = "condition 5";
    let quantifiers = pc.quantifier_names();
    for q in &quantifiers {
        // First law, at every designated b×1.
        for b in 0..cat.object_count() {
            let Some(prod) = cat.product(b, cat.terminal) else { continue };
            let (elems, _) = pc.fiber_elements(b);
            for x in &elems {
                let out = pc
                    .restrict(prod.p1, x)
                    .and_then(|y| pc.quant(q, b, cat.terminal, &y));
                match out {
                    Ok(out) => {
                        if out != *x {
                            c.add(
                                cond,
                                format!(
                                    "Ω_{{b,1}}∘P(π₁) ≠ id for {q} at {} over {}: got {}",
                                    pc.elem_name(b, x),
                                    cat.objects[b],
                                    pc.elem_name(b, &out)
                                ),
                            );
                            if c.full() {
                                return;
                            }
                            break;
                        }
                    }
                    Err(why) => {
                        c.add(cond, why);
                        break;
                    }
                }
            }
        }
        // Second law, wherever all four products are designated.
        let n = cat.object_count();
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    let (Some(cd), Some(bc)) = (cat.product(cc, d), cat.product(b, cc))
                    else {
                        continue;
                    };
                    let (Some(b_cd), Some(bc_d)) =
                        (cat.product(b, cd.obj), cat.product(bc.obj, d))
                    else {
                        continue;
                    };
                    let Some(a_iso) = cat.assoc_iso(b, cc, d) else { continue };
                    let _ = b_cd;
                    let (elems, _) = pc.fiber_elements(bc_d.obj);
                    for x in &elems {
                        let lhs = pc
                            .restrict(a_iso, x)
                            .and_then(|y| pc.quant(q, b, cd.obj, &y));
                        let rhs = pc
                            .quant(q, bc.obj, d, x)
                            .and_then(|y| pc.quant(q, b, cc, &y));
                        match (lhs, rhs) {
                            (Ok(l), Ok(r)) => {
                                if l != r {
                                    c.add(
                                        cond,
                                        format!(
                                            "iteration law fails for {q} at {} over \
                                             ({}, {}, {}): Ω∘P(a) = {} but Ω∘Ω = {}",
                                            pc.elem_name(bc_d.obj, x),
                                            cat.objects[b],
                                            cat.objects[cc],
                                            cat.objects[d],
                                            pc.elem_name(b, &l),
                                            pc.elem_name(b, &r)
                                        ),
                                    );
                                    if c.full() {
                                        return;
                                    }
                                    break;
                                }
                            }
                            (Err(why), _) | (_, Err(why)) => {
                                c.add(cond, why);
                                break;
                            }
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::builders::{
        mk_fuzzy_propcat, mk_lattice_propcat, mk_powerset_propcat, FuzzyQuantifier, QuantSpec,
    };
    use super::super::fiber::{TNorm, ValueLattice};
    use super::*;

    #[test]
    fn powerset_forall_exists_is_accepted() {
        let pc = mk_powerset_propcat(
            "pow",
            &[("B".to_string(), 2)],
            &[
                ("forall".to_string(), QuantSpec::Forall),
                ("exists".to_string(), QuantSpec::Exists),
            ],
            2,
        )
        .unwrap();
        let report = check_fa(&pc);
        assert!(report.ok(), "{report}");
        assert!(!report.probed);
    }

    #[test]
    fn exactly_two_quantifier_fails_condition5_with_diagonal_witness() {
        let pc = mk_powerset_propcat(
            "mostowski",
            &[("A".to_string(), 2)],
            &[("exactly2".to_string(), QuantSpec::ExactlyK(2))],
            2,
        )
        .unwrap();
        let report = check_fa(&pc);
        assert!(!report.ok());
        let c5 = report.against("condition 5");
        assert!(!c5.is_empty(), "expected a condition-5 witness: {report}");
        // Everything else about the construction is fine: only the
        // iteration laws break.
        for v in &report.violations {
            assert_eq!(v.condition, "condition 5", "{v}");
        }
    }

    #[test]
    fn lukasiewicz_lattice_host_is_accepted() {
        let pc = mk_lattice_propcat(
            "l5",
            &[("A".to_string(), 2)],
            &ValueLattice::lukasiewicz_chain(5),
            2,
        )
        .unwrap();
        let report = check_fa(&pc);
        assert!(report.ok(), "{report}");
    }

    #[test]
    fn fuzzy_product_tnorm_host_is_accepted_on_probes() {
        let pc = mk_fuzzy_propcat(
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
        .unwrap();
        let report = check_fa(&pc);
        assert!(report.ok(), "{report}");
        assert!(report.probed);
    }

    #[test]
    fn corrupted_restriction_is_reported() {
        let mut pc = mk_powerset_propcat(
            "pow",
            &[("B".to_string(), 2)],
            &[("exists".to_string(), QuantSpec::Exists)],
            2,
        )
        .unwrap();
        // Break one non-identity restriction table.
        if let Fibers::Finite(ff) = &mut pc.fibers {
            let victim = (0..pc.base.morphism_count())
                .find(|&f| pc.base.identities.iter().all(|&i| i != f) && ff.restriction[f].len() > 1)
                .unwrap();
            ff.restriction[victim].swap(0, 1);
        }
        let report = check_fa(&pc);
        assert!(!report.ok());
    }
}
