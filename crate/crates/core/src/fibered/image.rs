//! Image factorization of prop-category morphisms, sub-prop-category
//! recognition, and completion of one morphism through another.
//!
//! `image_factor` cuts a morphism `F : P → Q` (injective on objects)
//! into a corestriction `ε : P → Im(F)` followed by an inclusion
//! `ι : Im(F) → Q`.  The image inherits its structure from the
//! target, restricted to what `F` actually hits; the corestriction
//! has the same kernel as `F` while the inclusion is a
//! sub-prop-category morphism.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::propcat::{
    Elem, Fibers, FinCategory, FinPropCategory, FiniteFiber, FiniteFibers, Mor, MorData, Obj,
    OpTable, ProductData,
};

use super::{kernel, kernel_leq, PropMorphism};

/// Outcome of [`factorize`] / [`image_factor`].
#[derive(Debug, Clone)]
pub struct Factorization {
    pub image: Arc<FinPropCategory>,
    /// `ε : source → image`, surjective by construction.
    pub corestriction: PropMorphism,
    /// `ι : image → target`, a sub-prop-category morphism.
    pub inclusion: PropMorphism,
}

/// Compute the image factorization of a morphism.  Requires the
/// object map to be injective (so the image base category closes
/// under composition without quotienting) and the morphism to pass
/// [`super::check_morphism`] — run that first; this function assumes
/// the laws and only reports structural impossibilities.
pub fn image_factor(f: &PropMorphism) -> Result<Factorization, String> {
    let sb = &f.source.base;
    let tb = &f.target.base;
    let sf = f.source.finite().ok_or("image needs table-backed fibers")?;
    let tf = f.target.finite().ok_or("image needs table-backed fibers")?;

    // Injectivity on objects.
    {
        let mut seen = HashMap::new();
        for (o, &fo) in f.omap.iter().enumerate() {
            if let Some(prev) = seen.insert(fo, o) {
                return Err(format!(
                    "object map is not injective: `{}` and `{}` share an image",
                    sb.objects[prev], sb.objects[o]
                ));
            }
        }
    }

    // Image objects are indexed like source objects, named after
    // their target representatives.
    let no = sb.object_count();
    let objects: Vec<String> = (0..no).map(|o| tb.objects[f.omap[o]].clone()).collect();

    // Image morphisms: distinct values of the morphism map, in first
    // occurrence order.
    let mut tgt_to_img: HashMap<Mor, usize> = HashMap::new();
    let mut img_reps: Vec<Mor> = Vec::new();
    let mut eps_mmap: Vec<usize> = Vec::with_capacity(sb.morphism_count());
    for &fm in &f.mmap {
        let idx = *tgt_to_img.entry(fm).or_insert_with(|| {
            img_reps.push(fm);
            img_reps.len() - 1
        });
        eps_mmap.push(idx);
    }
    // With the object map injective, every image morphism's endpoints
    // are image objects, so endpoints re-index cleanly.
    let obj_to_img: HashMap<Obj, usize> =
        f.omap.iter().enumerate().map(|(o, &fo)| (fo, o)).collect();
    let morphisms: Vec<MorData> = img_reps
        .iter()
        .map(|&m| {
            let dom = *obj_to_img
                .get(&tb.dom(m))
                .ok_or_else(|| "an image morphism leaves the image objects".to_string())?;
            let cod = *obj_to_img
                .get(&tb.cod(m))
                .ok_or_else(|| "an image morphism leaves the image objects".to_string())?;
            Ok(MorData {
                name: tb.morphisms[m].name.clone(),
                dom,
                cod,
            })
        })
        .collect::<Result<_, String>>()?;

    // Composition, identities, products, pairing: push the source
    // tables through. Functoriality makes the result well defined on
    // image indices.
    let mut comp: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for (&(g, h), &gh) in &sb.comp {
        comp.insert((eps_mmap[g], eps_mmap[h]), eps_mmap[gh]);
    }
    let identities: Vec<Mor> = (0..no).map(|o| eps_mmap[sb.id(o)]).collect();
    let terminal = sb.terminal;
    let mut products = BTreeMap::new();
    for (&(b, c), pd) in &sb.products {
        products.insert(
            (b, c),
            ProductData {
                obj: pd.obj,
                p1: eps_mmap[pd.p1],
                p2: eps_mmap[pd.p2],
            },
        );
    }
    let mut pairing = HashMap::new();
    for (&(p, q), &pq) in &sb.pairing {
        pairing.insert((eps_mmap[p], eps_mmap[q]), eps_mmap[pq]);
    }
    let base = FinCategory::new(
        objects,
        morphisms,
        comp,
        identities,
        terminal,
        products,
        pairing,
    );

    // Image fibers: the distinct fiber-map values over each object,
    // as a sub-poset of the target fiber.
    let mut elem_reps: Vec<Vec<u32>> = Vec::with_capacity(no); // image elem -> target elem
    let mut eps_pmap: Vec<Vec<u32>> = Vec::with_capacity(no); // source elem -> image elem
    for o in 0..no {
        let mut tgt_to_local: BTreeMap<u32, u32> = BTreeMap::new();
        for &v in &f.pmap[o] {
            tgt_to_local.entry(v).or_insert(0);
        }
        for (i, (_, slot)) in tgt_to_local.iter_mut().enumerate() {
            *slot = i as u32;
        }
        let reps: Vec<u32> = tgt_to_local.keys().copied().collect();
        eps_pmap.push(f.pmap[o].iter().map(|v| tgt_to_local[v]).collect());
        elem_reps.push(reps);
    }
    let mut fibers = Vec::with_capacity(no);
    for o in 0..no {
        let tfib = &tf.fibers[f.omap[o]];
        let reps = &elem_reps[o];
        let n = reps.len();
        let local_of: BTreeMap<u32, usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let elem_names: Vec<String> = reps
            .iter()
            .map(|&r| tfib.elem_names[r as usize].clone())
            .collect();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = tfib.leq(reps[a] as usize, reps[b] as usize);
            }
        }
        // Connectives: the source's inventory, computed in the target
        // (the image is closed under them because the fiber maps are
        // connective homomorphisms).
        let mut ops = BTreeMap::new();
        for (name, src_op) in &sf.fibers[o].ops {
            let arity = src_op.arity;
            let tgt_op = tfib
                .ops
                .get(name)
                .ok_or_else(|| format!("target fiber lacks connective `{name}`"))?;
            let total = n.pow(arity as u32);
            let mut table = vec![0u32; total];
            for (slot, entry) in table.iter_mut().enumerate() {
                let mut rest = slot;
                let args: Vec<usize> = (0..arity)
                    .map(|_| {
                        let a = rest % n;
                        rest /= n;
                        reps[a] as usize
                    })
                    .collect();
                let v = tgt_op
                    .apply(tfib.len(), &args)
                    .ok_or_else(|| format!("target connective `{name}` is partial"))?;
                *entry = *local_of
                    .get(&(v as u32))
                    .ok_or_else(|| format!("image is not closed under `{name}`"))?
                    as u32;
            }
            ops.insert(name.clone(), OpTable { arity, table });
        }
        fibers.push(FiniteFiber {
            elem_names,
            leq,
            ops,
        });
    }

    // Restriction: restrict the target tables to image elements.
    let mut restriction = Vec::with_capacity(img_reps.len());
    for (im, &m) in img_reps.iter().enumerate() {
        let b = base.dom(im);
        let c = base.cod(im);
        let tgt_table = &tf.restriction[m];
        let dom_local: BTreeMap<u32, usize> = elem_reps[b]
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i))
            .collect();
        let table: Vec<u32> = elem_reps[c]
            .iter()
            .map(|&r| {
                dom_local
                    .get(&tgt_table[r as usize])
                    .map(|&i| i as u32)
                    .ok_or_else(|| "image is not closed under restriction".to_string())
            })
            .collect::<Result<_, String>>()?;
        restriction.push(table);
    }

    // Quantifiers: the source's inventory, computed through the
    // target tables along the product comparison isomorphism.
    let mut quantifiers = BTreeMap::new();
    for (q, src_tables) in &sf.quantifiers {
        let tgt_tables = tf
            .quantifiers
            .get(q)
            .ok_or_else(|| format!("target lacks quantifier `{q}`"))?;
        let mut tables: BTreeMap<(Obj, Obj), Vec<u32>> = BTreeMap::new();
        for &(b, c) in src_tables.keys() {
            let prod = sb.product(b, c).expect("quantifier tables sit on designated products");
            let a_inv = f.product_iso_inv(&[b, c])?;
            let tgt_table = tgt_tables
                .get(&(f.omap[b], f.omap[c]))
                .ok_or_else(|| format!("target lacks `{q}` at the imaged pair"))?;
            let realign = &tf.restriction[a_inv];
            let b_local: BTreeMap<u32, usize> = elem_reps[b]
                .iter()
                .enumerate()
                .map(|(i, &r)| (r, i))
                .collect();
            let table: Vec<u32> = elem_reps[prod.obj]
                .iter()
                .map(|&r| {
                    let v = tgt_table[realign[r as usize] as usize];
                    b_local
                        .get(&v)
                        .map(|&i| i as u32)
                        .ok_or_else(|| format!("image is not closed under `{q}`"))
                })
                .collect::<Result<_, String>>()?;
            tables.insert((b, c), table);
        }
        quantifiers.insert(q.clone(), tables);
    }

    // Equality: image of the source equality elements.
    let mut eq = BTreeMap::new();
    for (&o, &e) in &sf.eq {
        let prod = sb.product(o, o).expect("equality sits over a designated square");
        eq.insert(o, eps_pmap[prod.obj][e as usize]);
    }

    let image = Arc::new(FinPropCategory {
        name: format!("im({})", f.name),
        base,
        concrete: None,
        fibers: Fibers::Finite(FiniteFibers {
            fibers,
            restriction,
            quantifiers,
            eq,
        }),
    });

    let corestriction = PropMorphism {
        name: format!("eps({})", f.name),
        source: Arc::clone(&f.source),
        target: Arc::clone(&image),
        omap: (0..no).collect(),
        mmap: eps_mmap,
        pmap: eps_pmap,
    };
    let inclusion = PropMorphism {
        name: format!("incl({})", f.name),
        source: Arc::clone(&image),
        target: Arc::clone(&f.target),
        omap: f.omap.clone(),
        mmap: img_reps,
        pmap: elem_reps,
    };
    Ok(Factorization {
        image,
        corestriction,
        inclusion,
    })
}

/// Alias for [`image_factor`] emphasizing the `F = ι ∘ ε` reading.
pub fn factorize(f: &PropMorphism) -> Result<Factorization, String> {
    image_factor(f)
}

/// A morphism exhibits its source as a sub-prop-category of its
/// target when it is injective on objects, faithful, and every fiber
/// map is an order embedding.
pub fn is_subprop_morphism(f: &PropMorphism) -> Result<bool, String> {
    let sf = f.source.finite().ok_or("needs table-backed fibers")?;
    let tf = f.target.finite().ok_or("needs table-backed fibers")?;
    let sb = &f.source.base;
    // Injective on objects.
    {
        let mut seen = std::collections::HashSet::new();
        if !f.omap.iter().all(|&o| seen.insert(o)) {
            return Ok(false);
        }
    }
    // Faithful: injective on each hom-set.
    for a in 0..sb.object_count() {
        for b in 0..sb.object_count() {
            let hom = sb.hom(a, b);
            let mut seen = std::collections::HashSet::new();
            if !hom.iter().all(|&m| seen.insert(f.mmap[m])) {
                return Ok(false);
            }
        }
    }
    // Fiber maps reflect (and preserve) the order.
    for o in 0..sb.object_count() {
        let src = &sf.fibers[o];
        let tgt = &tf.fibers[f.omap[o]];
        let p = &f.pmap[o];
        for r in 0..src.len() {
            for s in 0..src.len() {
                if src.leq(r, s) != tgt.leq(p[r] as usize, p[s] as usize) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Why a completion does not exist: a pair identified by `k` but
/// separated by `f`.
#[derive(Debug, Clone)]
pub struct Obstruction {
    pub witness: String,
}

/// Outcome of [`complete_through`].
#[derive(Debug, Clone)]
pub enum Completion {
    /// `h` with `h ∘ k = f`.
    Found(PropMorphism),
    /// No completion exists; the kernel comparison fails at the
    /// witness.
    Obstructed(Obstruction),
}

/// Complete `f : P → R` through `k : P → Q`: find `h : Q → R` with
/// `h ∘ k = f`.  Requires `k` to be surjective on objects and
/// morphisms and fiberwise surjective (each target fiber element is
/// hit from some fiber over a preimage object); a completion then
/// exists exactly when the kernel of `k` is contained in the kernel
/// of `f`.
pub fn complete_through(f: &PropMorphism, k: &PropMorphism) -> Result<Completion, String> {
    complete_through_with(f, k, false)
}

/// Like [`complete_through`], but optionally scanning preimages in
/// reverse table order.  Any preimage choice yields the same
/// completion when one exists; exposing the choice lets callers
/// confirm that.
pub fn complete_through_with(
    f: &PropMorphism,
    k: &PropMorphism,
    reverse_preimages: bool,
) -> Result<Completion, String> {
    if *f.source != *k.source {
        return Err("the two morphisms must share a source".to_string());
    }
    let q = &k.target;
    let qf = q.finite().ok_or("completion needs table-backed fibers")?;
    let sf = f.source.finite().ok_or("completion needs table-backed fibers")?;

    let pick = |range: usize, pred: &dyn Fn(usize) -> bool| -> Option<usize> {
        if reverse_preimages {
            (0..range).rev().find(|&i| pred(i))
        } else {
            (0..range).find(|&i| pred(i))
        }
    };

    // Surjectivity of k on objects, morphisms, and fibers.
    let no_src = f.source.base.object_count();
    let nm_src = f.source.base.morphism_count();
    let obj_pre: Vec<usize> = (0..q.base.object_count())
        .map(|o| {
            pick(no_src, &|s| k.omap[s] == o)
                .ok_or_else(|| format!("`{}` is not surjective on objects", k.name))
        })
        .collect::<Result<_, String>>()?;
    let mor_pre: Vec<usize> = (0..q.base.morphism_count())
        .map(|m| {
            pick(nm_src, &|s| k.mmap[s] == m)
                .ok_or_else(|| format!("`{}` is not surjective on morphisms", k.name))
        })
        .collect::<Result<_, String>>()?;
    // Fiber elements: search over all (preimage object, source
    // element) pairs mapping onto each target element.
    let mut elem_pre: Vec<Vec<(usize, usize)>> = Vec::with_capacity(q.base.object_count());
    for o in 0..q.base.object_count() {
        let mut per_elem = Vec::with_capacity(qf.fibers[o].len());
        for r in 0..qf.fibers[o].len() {
            let mut found = None;
            let src_objs: Vec<usize> = if reverse_preimages {
                (0..no_src).rev().collect()
            } else {
                (0..no_src).collect()
            };
            'search: for s in src_objs {
                if k.omap[s] != o {
                    continue;
                }
                let n = sf.fibers[s].len();
                let hit = pick(n, &|e| k.pmap[s][e] as usize == r);
                if let Some(e) = hit {
                    found = Some((s, e));
                    break 'search;
                }
            }
            per_elem.push(found.ok_or_else(|| {
                format!("`{}` is not surjective on fibers", k.name)
            })?);
        }
        elem_pre.push(per_elem);
    }

    // Kernel comparison: the factorization exists iff ker(k) ≤ ker(f).
    let kk = kernel(k)?;
    let kf = kernel(f)?;
    if !kernel_leq(&kk, &kf)? {
        // Produce a concrete witness.
        let sb = &f.source.base;
        for a in 0..no_src {
            for b in 0..no_src {
                if kk.objects_related(a, b) && !kf.objects_related(a, b) {
                    return Ok(Completion::Obstructed(Obstruction {
                        witness: format!(
                            "objects `{}` and `{}` are identified by `{}` but separated by `{}`",
                            sb.objects[a], sb.objects[b], k.name, f.name
                        ),
                    }));
                }
            }
        }
        for a in 0..nm_src {
            for b in 0..nm_src {
                if kk.morphisms_related(a, b) && !kf.morphisms_related(a, b) {
                    return Ok(Completion::Obstructed(Obstruction {
                        witness: format!(
                            "morphisms `{}` and `{}` are identified by `{}` but separated by `{}`",
                            sb.morphisms[a].name, sb.morphisms[b].name, k.name, f.name
                        ),
                    }));
                }
            }
        }
        for c1 in 0..no_src {
            for r1 in 0..sf.fibers[c1].len() {
                for c2 in 0..no_src {
                    for r2 in 0..sf.fibers[c2].len() {
                        if kk.fiber_related(c1, r1, c2, r2) && !kf.fiber_related(c1, r1, c2, r2) {
                            return Ok(Completion::Obstructed(Obstruction {
                                witness: format!(
                                    "{} over `{}` is below {} over `{}` under `{}` but not under `{}`",
                                    sf.fibers[c1].elem_names[r1],
                                    sb.objects[c1],
                                    sf.fibers[c2].elem_names[r2],
                                    sb.objects[c2],
                                    k.name,
                                    f.name
                                ),
                            }));
                        }
                    }
                }
            }
        }
        return Err("kernel comparison failed without a witness".to_string());
    }

    // Build h by pushing preimages through f; the kernel containment
    // makes the choice immaterial.
    let omap: Vec<Obj> = obj_pre.iter().map(|&s| f.omap[s]).collect();
    let mmap: Vec<Mor> = mor_pre.iter().map(|&s| f.mmap[s]).collect();
    let pmap: Vec<Vec<u32>> = elem_pre
        .iter()
        .map(|per| per.iter().map(|&(s, e)| f.pmap[s][e]).collect())
        .collect();
    let h = PropMorphism {
        name: format!("{}/{}", f.name, k.name),
        source: Arc::clone(q),
        target: Arc::clone(&f.target),
        omap,
        mmap,
        pmap,
    };
    // Verify h ∘ k = f.
    let hk = k.then(&h)?;
    if hk.omap != f.omap || hk.mmap != f.mmap || hk.pmap != f.pmap {
        return Err("constructed completion does not recompose".to_string());
    }
    Ok(Completion::Found(h))
}

/// Convenience: apply the corestriction of a factorization to a
/// fiber element (useful when chaining factorization with
/// transports).
pub fn corestrict_elem(fz: &Factorization, c: Obj, e: &Elem) -> Result<Elem, String> {
    fz.corestriction.elem(c, e)
}
