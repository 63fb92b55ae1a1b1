//! Morphisms between prop-categories: validity checking, 2-cells,
//! kernels, and structure transport.
//!
//! A morphism is a product-preserving base functor together with one
//! fiber map per source object, natural in the base and commuting
//! with connectives, quantifiers, and equality.  All data is tabled,
//! so every law is checked exhaustively; morphisms are supported
//! between table-backed (finite-fiber) hosts.

pub mod external;
pub mod image;
pub mod product;

pub use external::{
    external_hom_image, external_product, external_submodel, internal_structure,
    translate_theory, FnImage, RelImage, SignatureInterpretation,
};
pub use image::{
    complete_through, complete_through_with, factorize, image_factor, is_subprop_morphism,
    Completion, Factorization, Obstruction,
};
pub use product::{pair_into_product, product_propcat, ProductPropCat};

use std::sync::Arc;

use crate::propcat::{
    Elem, FaReport, FinPropCategory, FiniteFibers, Mor, Obj, Violation,
};
use crate::semantics::{
    enumerate_formulas, enumerate_terms, interpret_formula, interpret_term, Budget, Structure,
};
use crate::syntax::Context;

/// A morphism of prop-categories: base functor (object and morphism
/// tables) plus one fiber map per source object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropMorphism {
    pub name: String,
    pub source: Arc<FinPropCategory>,
    pub target: Arc<FinPropCategory>,
    /// Per source object: its image object.
    pub omap: Vec<Obj>,
    /// Per source morphism: its image morphism.
    pub mmap: Vec<Mor>,
    /// Per source object `c`: the fiber map `P(c) → Q(F c)` as an
    /// element-index table.
    pub pmap: Vec<Vec<u32>>,
}

impl PropMorphism {
    /// The identity morphism on a table-backed host.
    pub fn identity(host: &Arc<FinPropCategory>) -> Result<PropMorphism, String> {
        let ff = host.finite().ok_or("identity morphism needs finite fibers")?;
        Ok(PropMorphism {
            name: format!("id_{}", host.name),
            source: Arc::clone(host),
            target: Arc::clone(host),
            omap: (0..host.base.object_count()).collect(),
            mmap: (0..host.base.morphism_count()).collect(),
            pmap: ff
                .fibers
                .iter()
                .map(|f| (0..f.len() as u32).collect())
                .collect(),
        })
    }

    pub fn obj(&self, c: Obj) -> Obj {
        self.omap[c]
    }

    pub fn mor(&self, m: Mor) -> Mor {
        self.mmap[m]
    }

    /// Apply the fiber map over `c`.
    pub fn elem(&self, c: Obj, e: &Elem) -> Result<Elem, String> {
        match e {
            Elem::Fin(i) => self
                .pmap
                .get(c)
                .and_then(|t| t.get(*i))
                .map(|&v| Elem::Fin(v as usize))
                .ok_or_else(|| format!("no fiber-map entry for element {i} over object {c}")),
            Elem::Fuz(_) => Err("fiber maps are tables over finite fibers".to_string()),
        }
    }

    /// Composite `g ∘ f` (this = f applied first).
    pub fn then(&self, g: &PropMorphism) -> Result<PropMorphism, String> {
        if *self.target != *g.source {
            return Err(format!(
                "codomain of {} is not the domain of {}",
                self.name, g.name
            ));
        }
        Ok(PropMorphism {
            name: format!("{};{}", self.name, g.name),
            source: Arc::clone(&self.source),
            target: Arc::clone(&g.target),
            omap: self.omap.iter().map(|&c| g.omap[c]).collect(),
            mmap: self.mmap.iter().map(|&m| g.mmap[m]).collect(),
            pmap: self
                .pmap
                .iter()
                .enumerate()
                .map(|(c, t)| {
                    let gt = &g.pmap[self.omap[c]];
                    t.iter().map(|&v| gt[v as usize]).collect()
                })
                .collect(),
        })
    }

    /// The change-of-product comparison `a : F(⟦factors⟧) → ⟦F factors⟧`
    /// from the image of the source's designated product onto the
    /// target's, computed by pairing the imaged projections.
    pub fn product_iso(&self, factors: &[Obj]) -> Result<Mor, String> {
        let src = self
            .source
            .base
            .nary_product(factors)
            .ok_or("source lacks the designated product")?;
        let imaged: Vec<Mor> = src.projections.iter().map(|&p| self.mmap[p]).collect();
        self.target
            .base
            .change_of_product(self.omap[src.obj], &imaged)
            .ok_or_else(|| "target lacks the designated product of the imaged factors".to_string())
    }

    /// `product_iso` inverted; errors when the comparison morphism is
    /// not invertible (the functor is not product-preserving there).
    pub fn product_iso_inv(&self, factors: &[Obj]) -> Result<Mor, String> {
        let a = self.product_iso(factors)?;
        self.target
            .base
            .inverse(a)
            .ok_or_else(|| "product comparison morphism is not an isomorphism".to_string())
    }
}

/// Build a morphism between two hosts sharing the same base category
/// by post-composing every fiber with a pointwise value map `h`
/// (e.g. a lattice homomorphism between the value lattices the hosts
/// were generated from).  The base functor is the identity.
pub fn pointwise_hom_morphism(
    name: &str,
    source: &Arc<FinPropCategory>,
    target: &Arc<FinPropCategory>,
    h: &[usize],
) -> Result<PropMorphism, String> {
    if source.base != target.base {
        return Err("pointwise morphisms need identical base categories".to_string());
    }
    let sf = source.finite().ok_or("source has symbolic fibers")?;
    let tf = target.finite().ok_or("target has symbolic fibers")?;
    // Source/target fibers are pointwise-value encodings over the same
    // carriers: little-endian digits base |L_src| map digitwise
    // through h into base |L_tgt| digits.
    let nsrc = sf.fibers[source.base.terminal].len();
    let ntgt = tf.fibers[target.base.terminal].len();
    if h.len() != nsrc {
        return Err(format!("value map has {} entries, lattice has {nsrc}", h.len()));
    }
    if let Some(&bad) = h.iter().find(|&&v| v >= ntgt) {
        return Err(format!("value map hits {bad}, outside the target lattice"));
    }
    let pmap = (0..source.base.object_count())
        .map(|c| {
            let n = sf.fibers[c].len();
            // digits count = log_{nsrc} n
            let mut digits = 0usize;
            let mut acc = 1usize;
            while acc < n {
                acc *= nsrc;
                digits += 1;
            }
            if acc != n || tf.fibers[c].len() != ntgt.pow(digits as u32) {
                return Err(format!(
                    "fiber over object {c} is not a pointwise value encoding"
                ));
            }
            Ok((0..n as u32)
                .map(|r| {
                    let mut rest = r as usize;
                    let mut out = 0usize;
                    let mut stride = 1usize;
                    for _ in 0..digits {
                        out += h[rest % nsrc] * stride;
                        rest /= nsrc;
                        stride *= ntgt;
                    }
                    out as u32
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<u32>>, String>>()?;
    Ok(PropMorphism {
        name: name.to_string(),
        source: Arc::clone(source),
        target: Arc::clone(target),
        omap: (0..source.base.object_count()).collect(),
        mmap: (0..source.base.morphism_count()).collect(),
        pmap,
    })
}

const MAX_VIOLATIONS: usize = 25;

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn add(&mut self, condition: &str, witness: String) {
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(Violation {
                condition: condition.to_string(),
                witness,
            });
        }
    }

    fn full(&self) -> bool {
        self.violations.len() >= MAX_VIOLATIONS
    }
}

/// Check every morphism law exhaustively over the source tables:
/// functoriality, preservation of the terminal object and designated
/// products, naturality of the fiber maps, monotone connective
/// homomorphism ("condition 1"), quantifier compatibility
/// ("condition 2"), and equality compatibility ("condition 3").
pub fn check_morphism(f: &PropMorphism) -> FaReport {
    let mut c = Checker { violations: vec![] };
    let (Some(sf), Some(tf)) = (f.source.finite(), f.target.finite()) else {
        c.add(
            "shape",
            "morphism checking requires table-backed fibers on both ends".to_string(),
        );
        return FaReport {
            violations: c.violations,
            probed: false,
        };
    };
    if check_shape(f, sf, tf, &mut c) {
        check_functoriality(f, &mut c);
        check_products(f, &mut c);
        check_naturality(f, sf, tf, &mut c);
        check_condition1(f, sf, tf, &mut c);
        check_condition2(f, sf, tf, &mut c);
        check_condition3(f, sf, tf, &mut c);
    }
    FaReport {
        violations: c.violations,
        probed: false,
    }
}

/// Table dimensions and index ranges; returns false when the data is
/// too damaged for the law checks to index safely.
fn check_shape(f: &PropMorphism, sf: &FiniteFibers, tf: &FiniteFibers, c: &mut Checker) -> bool {
    let mut ok = true;
    let (no, nm) = (f.source.base.object_count(), f.source.base.morphism_count());
    if f.omap.len() != no {
        c.add("shape", format!("object map has {} entries, source has {no} objects", f.omap.len()));
        ok = false;
    }
    if f.mmap.len() != nm {
        c.add("shape", format!("morphism map has {} entries, source has {nm} morphisms", f.mmap.len()));
        ok = false;
    }
    if f.pmap.len() != no {
        c.add("shape", format!("fiber-map family has {} entries, source has {no} objects", f.pmap.len()));
        ok = false;
    }
    if !ok {
        return false;
    }
    if let Some(&bad) = f.omap.iter().find(|&&o| o >= f.target.base.object_count()) {
        c.add("shape", format!("object map hits nonexistent target object {bad}"));
        ok = false;
    }
    if let Some(&bad) = f.mmap.iter().find(|&&m| m >= f.target.base.morphism_count()) {
        c.add("shape", format!("morphism map hits nonexistent target morphism {bad}"));
        ok = false;
    }
    if !ok {
        return false;
    }
    for o in 0..no {
        let want = sf.fibers[o].len();
        let tn = tf.fibers[f.omap[o]].len() as u32;
        if f.pmap[o].len() != want {
            c.add("shape", format!("fiber map over object {o} has {} entries, fiber has {want}", f.pmap[o].len()));
            ok = false;
        } else if let Some(&bad) = f.pmap[o].iter().find(|&&v| v >= tn) {
            c.add("shape", format!("fiber map over object {o} hits nonexistent target element {bad}"));
            ok = false;
        }
    }
    ok
}

fn check_functoriality(f: &PropMorphism, c: &mut Checker) {
    let sb = &f.source.base;
    let tb = &f.target.base;
    for m in 0..sb.morphism_count() {
        let fm = f.mmap[m];
        if tb.dom(fm) != f.omap[sb.dom(m)] || tb.cod(fm) != f.omap[sb.cod(m)] {
            c.add(
                "functoriality",
                format!("image of `{}` has the wrong endpoints", sb.morphisms[m].name),
            );
            if c.full() {
                return;
            }
        }
    }
    for o in 0..sb.object_count() {
        if f.mmap[sb.id(o)] != tb.id(f.omap[o]) {
            c.add(
                "functoriality",
                format!("identity of `{}` is not mapped to an identity", sb.objects[o]),
            );
            if c.full() {
                return;
            }
        }
    }
    for (&(g, h), &gh) in &sb.comp {
        if tb.compose(f.mmap[g], f.mmap[h]) != Some(f.mmap[gh]) {
            c.add(
                "functoriality",
                format!(
                    "F({} ∘ {}) ≠ F({}) ∘ F({})",
                    sb.morphisms[g].name, sb.morphisms[h].name, sb.morphisms[g].name, sb.morphisms[h].name
                ),
            );
            if c.full() {
                return;
            }
        }
    }
}

fn check_products(f: &PropMorphism, c: &mut Checker) {
    let tb = &f.target.base;
    // Terminal: the unique map F(1) → 1 must be invertible.
    match tb.bang(f.omap[f.source.base.terminal]) {
        Some(bang) if tb.is_iso(bang) => {}
        _ => c.add(
            "product preservation",
            "image of the terminal object is not terminal".to_string(),
        ),
    }
    for &(b, cc) in f.source.base.products.keys() {
        match f.product_iso_inv(&[b, cc]) {
            Ok(_) => {}
            Err(why) => {
                c.add(
                    "product preservation",
                    format!(
                        "designated product of `{}` and `{}`: {why}",
                        f.source.base.objects[b], f.source.base.objects[cc]
                    ),
                );
                if c.full() {
                    return;
                }
            }
        }
    }
}

fn check_naturality(f: &PropMorphism, sf: &FiniteFibers, tf: &FiniteFibers, c: &mut Checker) {
    let sb = &f.source.base;
    for m in 0..sb.morphism_count() {
        let (b, cc) = (sb.dom(m), sb.cod(m));
        let src_table = &sf.restriction[m];
        let tgt_table = &tf.restriction[f.mmap[m]];
        let (pb, pc) = (&f.pmap[b], &f.pmap[cc]);
        for r in 0..sf.fibers[cc].len() {
            if pb[src_table[r] as usize] != tgt_table[pc[r] as usize] {
                c.add(
                    "naturality",
                    format!(
                        "F^p(P({})({})) ≠ Q(F {})(F^p({}))",
                        sb.morphisms[m].name,
                        sf.fibers[cc].elem_names[r],
                        sb.morphisms[m].name,
                        sf.fibers[cc].elem_names[r]
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

fn check_condition1(f: &PropMorphism, sf: &FiniteFibers, tf: &FiniteFibers, c: &mut Checker) {
    for o in 0..f.source.base.object_count() {
        let src = &sf.fibers[o];
        let tgt = &tf.fibers[f.omap[o]];
        let p = &f.pmap[o];
        let n = src.len();
        // Monotone.
        'mono: for r in 0..n {
            for s in 0..n {
                if src.leq(r, s) && !tgt.leq(p[r] as usize, p[s] as usize) {
                    c.add(
                        "condition 1",
                        format!(
                            "fiber map over `{}` is not monotone at ({}, {})",
                            f.source.base.objects[o], src.elem_names[r], src.elem_names[s]
                        ),
                    );
                    if c.full() {
                        return;
                    }
                    break 'mono;
                }
            }
        }
        // Connective homomorphism, per source operation.
        for (name, op) in &src.ops {
            let Some(tgt_op) = tgt.ops.get(name) else {
                c.add(
                    "condition 1",
                    format!("target fiber over `F {}` lacks connective `{name}`", f.source.base.objects[o]),
                );
                continue;
            };
            if tgt_op.arity != op.arity {
                c.add(
                    "condition 1",
                    format!("connective `{name}` changes arity across the morphism"),
                );
                continue;
            }
            let mut args = vec![0usize; op.arity];
            'tuples: loop {
                let lhs = op.apply(n, &args).map(|v| p[v] as usize);
                let mapped: Vec<usize> = args.iter().map(|&a| p[a] as usize).collect();
                let rhs = tgt_op.apply(tgt.len(), &mapped);
                if lhs != rhs {
                    c.add(
                        "condition 1",
                        format!(
                            "F^p({name}{args:?}) ≠ {name}(F^p args) over `{}`",
                            f.source.base.objects[o]
                        ),
                    );
                    if c.full() {
                        return;
                    }
                    break 'tuples;
                }
                // advance the tuple
                let mut i = 0;
                loop {
                    if i == args.len() {
                        break 'tuples;
                    }
                    args[i] += 1;
                    if args[i] < n {
                        break;
                    }
                    args[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

fn check_condition2(f: &PropMorphism, sf: &FiniteFibers, tf: &FiniteFibers, c: &mut Checker) {
    let sb = &f.source.base;
    for (qname, tables) in &sf.quantifiers {
        let Some(tgt_tables) = tf.quantifiers.get(qname) else {
            c.add("condition 2", format!("target lacks quantifier `{qname}`"));
            continue;
        };
        for (&(b, cc), table) in tables {
            let prod = sb.product(b, cc).expect("designated product backs the quantifier table");
            let a_inv = match f.product_iso_inv(&[b, cc]) {
                Ok(m) => m,
                Err(_) => continue, // already reported by product preservation
            };
            let Some(tgt_table) = tgt_tables.get(&(f.omap[b], f.omap[cc])) else {
                c.add(
                    "condition 2",
                    format!(
                        "target lacks `{qname}` at (F {}, F {})",
                        sb.objects[b], sb.objects[cc]
                    ),
                );
                continue;
            };
            let realign = &tf.restriction[a_inv];
            let (pb, pp) = (&f.pmap[b], &f.pmap[prod.obj]);
            for r in 0..sf.fibers[prod.obj].len() {
                let lhs = pb[table[r] as usize];
                let rhs = tgt_table[realign[pp[r] as usize] as usize];
                if lhs != rhs {
                    c.add(
                        "condition 2",
                        format!(
                            "F^p(Ω^{qname}_{{{},{}}}({})) ≠ Ω^{qname}(Q(a⁻¹)(F^p(...)))",
                            sb.objects[b],
                            sb.objects[cc],
                            sf.fibers[prod.obj].elem_names[r]
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

fn check_condition3(f: &PropMorphism, sf: &FiniteFibers, tf: &FiniteFibers, c: &mut Checker) {
    let sb = &f.source.base;
    for (&o, &eq) in &sf.eq {
        let Some(prod) = sb.product(o, o) else { continue };
        let a = match f.product_iso(&[o, o]) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let Some(&tgt_eq) = tf.eq.get(&f.omap[o]) else {
            c.add(
                "condition 3",
                format!("target lacks equality over `F {}`", sb.objects[o]),
            );
            continue;
        };
        let lhs = f.pmap[prod.obj][eq as usize];
        let rhs = tf.restriction[a][tgt_eq as usize];
        if lhs != rhs {
            c.add(
                "condition 3",
                format!("F^p(Eq_{}) ≠ Q(a)(Eq_{{F {}}})", sb.objects[o], sb.objects[o]),
            );
            if c.full() {
                return;
            }
        }
    }
}

/// A 2-cell between parallel morphisms `F, H`: one target morphism
/// `η_c : F c → H c` per source object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCell {
    pub eta: Vec<Mor>,
}

/// Check a 2-cell: η must be natural over the base, and the fiber
/// maps must satisfy `F^p = Q(η) ∘ H^p`.
pub fn check_two_cell(f: &PropMorphism, h: &PropMorphism, cell: &TwoCell) -> FaReport {
    let mut c = Checker { violations: vec![] };
    if *f.source != *h.source || *f.target != *h.target {
        c.add("shape", "2-cells relate parallel morphisms".to_string());
        return FaReport { violations: c.violations, probed: false };
    }
    let sb = &f.source.base;
    let tb = &f.target.base;
    let tf = f.target.finite().expect("checked hosts are table-backed");
    if cell.eta.len() != sb.object_count() {
        c.add("shape", format!("2-cell has {} components, source has {} objects", cell.eta.len(), sb.object_count()));
        return FaReport { violations: c.violations, probed: false };
    }
    for o in 0..sb.object_count() {
        let e = cell.eta[o];
        if tb.dom(e) != f.omap[o] || tb.cod(e) != h.omap[o] {
            c.add("shape", format!("component at `{}` has the wrong endpoints", sb.objects[o]));
            return FaReport { violations: c.violations, probed: false };
        }
    }
    for m in 0..sb.morphism_count() {
        let (b, cc) = (sb.dom(m), sb.cod(m));
        if tb.compose(cell.eta[cc], f.mmap[m]) != tb.compose(h.mmap[m], cell.eta[b]) {
            c.add(
                "naturality",
                format!("η is not natural at `{}`", sb.morphisms[m].name),
            );
            if c.full() {
                break;
            }
        }
    }
    let sfib = f.source.finite().expect("checked hosts are table-backed");
    for o in 0..sb.object_count() {
        let realign = &tf.restriction[cell.eta[o]];
        for r in 0..sfib.fibers[o].len() {
            if f.pmap[o][r] != realign[h.pmap[o][r] as usize] {
                c.add(
                    "fiber compatibility",
                    format!(
                        "F^p ≠ Q(η)∘H^p at `{}` on {}",
                        sb.objects[o], sfib.fibers[o].elem_names[r]
                    ),
                );
                if c.full() {
                    return FaReport { violations: c.violations, probed: false };
                }
                break;
            }
        }
    }
    FaReport { violations: c.violations, probed: false }
}

/// The kernel of a morphism: which objects, morphisms, and fiber
/// elements it identifies.  The fiber part is a preorder on the
/// disjoint union of all source fibers (elements over objects with
/// different images are unrelated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub n_objects: usize,
    /// Row-major object equivalence.
    pub objects: Vec<bool>,
    pub n_morphisms: usize,
    /// Row-major morphism equivalence.
    pub morphisms: Vec<bool>,
    /// Start offset of each object's fiber in the disjoint union.
    pub fiber_offsets: Vec<usize>,
    pub n_fiber_elems: usize,
    /// Row-major fiber preorder on the disjoint union.
    pub fibers: Vec<bool>,
}

impl Kernel {
    pub fn objects_related(&self, a: Obj, b: Obj) -> bool {
        self.objects[a * self.n_objects + b]
    }

    pub fn morphisms_related(&self, a: Mor, b: Mor) -> bool {
        self.morphisms[a * self.n_morphisms + b]
    }

    pub fn fiber_related(&self, c1: Obj, r1: usize, c2: Obj, r2: usize) -> bool {
        let i = self.fiber_offsets[c1] + r1;
        let j = self.fiber_offsets[c2] + r2;
        self.fibers[i * self.n_fiber_elems + j]
    }
}

/// Compute the kernel of a morphism extensionally from its tables.
pub fn kernel(f: &PropMorphism) -> Result<Kernel, String> {
    let sf = f.source.finite().ok_or("kernels need table-backed fibers")?;
    let tf = f.target.finite().ok_or("kernels need table-backed fibers")?;
    let no = f.source.base.object_count();
    let nm = f.source.base.morphism_count();
    let mut objects = vec![false; no * no];
    for a in 0..no {
        for b in 0..no {
            objects[a * no + b] = f.omap[a] == f.omap[b];
        }
    }
    let mut morphisms = vec![false; nm * nm];
    for a in 0..nm {
        for b in 0..nm {
            morphisms[a * nm + b] = f.mmap[a] == f.mmap[b];
        }
    }
    let mut fiber_offsets = Vec::with_capacity(no);
    let mut total = 0usize;
    for o in 0..no {
        fiber_offsets.push(total);
        total += sf.fibers[o].len();
    }
    let mut fibers = vec![false; total * total];
    for c1 in 0..no {
        for c2 in 0..no {
            if f.omap[c1] != f.omap[c2] {
                continue;
            }
            let tfib = &tf.fibers[f.omap[c1]];
            for r1 in 0..sf.fibers[c1].len() {
                for r2 in 0..sf.fibers[c2].len() {
                    let i = fiber_offsets[c1] + r1;
                    let j = fiber_offsets[c2] + r2;
                    fibers[i * total + j] =
                        tfib.leq(f.pmap[c1][r1] as usize, f.pmap[c2][r2] as usize);
                }
            }
        }
    }
    Ok(Kernel {
        n_objects: no,
        objects,
        n_morphisms: nm,
        morphisms,
        fiber_offsets,
        n_fiber_elems: total,
        fibers,
    })
}

/// Componentwise containment of kernels over the same source.
pub fn kernel_leq(k1: &Kernel, k2: &Kernel) -> Result<bool, String> {
    if k1.n_objects != k2.n_objects
        || k1.n_morphisms != k2.n_morphisms
        || k1.n_fiber_elems != k2.n_fiber_elems
    {
        return Err("kernels come from different sources".to_string());
    }
    Ok(k1.objects.iter().zip(&k2.objects).all(|(a, b)| !a || *b)
        && k1.morphisms.iter().zip(&k2.morphisms).all(|(a, b)| !a || *b)
        && k1.fibers.iter().zip(&k2.fibers).all(|(a, b)| !a || *b))
}

/// Transport a structure along a morphism: sorts and functions map
/// through the base functor (corrected by the product comparison
/// isomorphism), relations through the fiber maps.
pub fn transport_structure(f: &PropMorphism, s: &Structure) -> Result<Structure, String> {
    if *s.host != *f.source {
        return Err(format!(
            "structure `{}` does not live in the source of `{}`",
            s.name, f.name
        ));
    }
    let mut sorts = std::collections::BTreeMap::new();
    for (name, &o) in &s.sorts {
        sorts.insert(name.clone(), f.omap[o]);
    }
    let mut functions = std::collections::BTreeMap::new();
    for (name, &m) in &s.functions {
        let ty = s
            .signature
            .functions
            .get(name)
            .ok_or_else(|| format!("undeclared function `{name}`"))?;
        let arg_objs: Vec<Obj> = ty.args.iter().map(|a| s.sorts[a]).collect();
        let a_inv = f.product_iso_inv(&arg_objs)?;
        let moved = f
            .target
            .base
            .compose(f.mmap[m], a_inv)
            .ok_or_else(|| format!("transported `{name}` does not compose"))?;
        functions.insert(name.clone(), moved);
    }
    let mut relations = std::collections::BTreeMap::new();
    for (name, e) in &s.relations {
        let args = s
            .signature
            .relations
            .get(name)
            .ok_or_else(|| format!("undeclared relation `{name}`"))?;
        let arg_objs: Vec<Obj> = args.iter().map(|a| s.sorts[a]).collect();
        let a_inv = f.product_iso_inv(&arg_objs)?;
        let imaged = f.elem(s.host.base.nary_product(&arg_objs).unwrap().obj, e)?;
        relations.insert(name.clone(), f.target.restrict(a_inv, &imaged)?);
    }
    Ok(Structure {
        name: format!("{}({})", f.name, s.name),
        host: Arc::clone(&f.target),
        signature: s.signature.clone(),
        sorts,
        functions,
        relations,
    })
}

/// Verify the transport commutation equations over every enumerated
/// term and formula within the budget:
/// `⟦M⟧_{F(S)} = F(⟦M⟧_S) ∘ a⁻¹` and `⟦φ⟧_{F(S)} = Q(a⁻¹)(F^p(⟦φ⟧_S))`.
pub fn transport_commutes(f: &PropMorphism, s: &Structure, budget: &Budget) -> Result<(), String> {
    let moved = transport_structure(f, s)?;
    let sorts: Vec<String> = s.signature.sorts.iter().cloned().collect();
    let lang = s.host.language();
    let mut combos: Vec<Vec<String>> = vec![vec![]];
    let mut frontier: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..budget.max_ctx {
        frontier = frontier
            .iter()
            .flat_map(|c| {
                sorts.iter().map(|so| {
                    let mut c2 = c.clone();
                    c2.push(so.clone());
                    c2
                })
            })
            .collect();
        combos.extend(frontier.iter().cloned());
    }
    for combo in combos {
        let entries: Vec<(String, String)> = combo
            .iter()
            .enumerate()
            .map(|(i, so)| (format!("x{}", i + 1), so.clone()))
            .collect();
        let Ok(ctx) = Context::new(entries) else { continue };
        let ctx_objs: Vec<Obj> = combo.iter().map(|so| s.sorts[so]).collect();
        if s.host.base.nary_product(&ctx_objs).is_none() {
            continue;
        }
        let a_inv = f.product_iso_inv(&ctx_objs)?;
        let terms = enumerate_terms(&s.signature, &ctx, budget.max_term_depth);
        for (t, _) in &terms {
            let src = interpret_term(s, &ctx, t).map_err(|e| e.to_string())?;
            let tgt = interpret_term(&moved, &ctx, t).map_err(|e| e.to_string())?;
            let via = f
                .target
                .base
                .compose(f.mmap[src], a_inv)
                .ok_or("commutation composite undefined")?;
            if tgt != via {
                return Err(format!("term commutation fails for `{t}` in context `{ctx}`"));
            }
        }
        for phi in enumerate_formulas(&s.signature, &lang, &ctx, &terms, budget.max_formula_depth)
        {
            let src = match interpret_formula(s, &ctx, &phi) {
                Ok(e) => e,
                Err(_) => continue, // beyond the host's product depth
            };
            let tgt = match interpret_formula(&moved, &ctx, &phi) {
                Ok(e) => e,
                Err(_) => continue,
            };
            let gamma = s.host.base.nary_product(&ctx_objs).unwrap();
            let via = f
                .target
                .restrict(a_inv, &f.elem(gamma.obj, &src)?)?;
            if tgt != via {
                return Err(format!(
                    "formula commutation fails for `{phi}` in context `{ctx}`"
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
