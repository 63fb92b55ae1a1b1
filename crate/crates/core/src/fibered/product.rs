//! Finite products of prop-categories, with their projection
//! morphisms and pairing.
//!
//! Everything is componentwise: objects, morphisms, composition and
//! designated products are tuples; fibers are products of the factor
//! fibers ordered pointwise.  The connective and quantifier
//! inventory of the product is the intersection of the factors'
//! inventories (an operation survives only if every factor carries
//! it with the same arity).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::propcat::{
    Elem, Fibers, FinCategory, FinPropCategory, FiniteFiber, FiniteFibers, Mor, MorData, Obj,
    OpTable, ProductData,
};

use super::PropMorphism;

/// A product prop-category together with its projections.  The
/// factor list is kept so tuple indices can be split and joined.
#[derive(Debug, Clone)]
pub struct ProductPropCat {
    pub host: Arc<FinPropCategory>,
    pub factors: Vec<Arc<FinPropCategory>>,
    pub projections: Vec<PropMorphism>,
}

/// Mixed-radix tuple coding: the last component varies fastest.
fn join(parts: &[usize], radices: &[usize]) -> usize {
    parts
        .iter()
        .zip(radices)
        .fold(0, |acc, (&p, &r)| acc * r + p)
}

fn split(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = idx % r;
        idx /= r;
    }
    out
}

/// Every tuple over the given radices, in index order.
fn tuples(radices: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = radices.iter().product();
    (0..total).map(|i| split(i, radices)).collect()
}

impl ProductPropCat {
    pub fn obj_radices(&self) -> Vec<usize> {
        self.factors
            .iter()
            .map(|f| f.base.object_count())
            .collect()
    }

    pub fn mor_radices(&self) -> Vec<usize> {
        self.factors
            .iter()
            .map(|f| f.base.morphism_count())
            .collect()
    }

    pub fn obj_index(&self, parts: &[Obj]) -> Obj {
        join(parts, &self.obj_radices())
    }

    pub fn obj_split(&self, o: Obj) -> Vec<Obj> {
        split(o, &self.obj_radices())
    }

    pub fn mor_index(&self, parts: &[Mor]) -> Mor {
        join(parts, &self.mor_radices())
    }

    pub fn mor_split(&self, m: Mor) -> Vec<Mor> {
        split(m, &self.mor_radices())
    }

    fn fiber_radices(&self, obj_parts: &[Obj]) -> Vec<usize> {
        self.factors
            .iter()
            .zip(obj_parts)
            .map(|(f, &o)| f.fiber_size(o).expect("product factors have finite fibers"))
            .collect()
    }

    /// Combine one fiber element per factor into the product fiber
    /// element over the tuple object.
    pub fn elem_index(&self, obj_parts: &[Obj], elems: &[usize]) -> usize {
        join(elems, &self.fiber_radices(obj_parts))
    }

    pub fn elem_split(&self, obj_parts: &[Obj], e: usize) -> Vec<usize> {
        split(e, &self.fiber_radices(obj_parts))
    }
}

fn tuple_name(parts: impl Iterator<Item = String>) -> String {
    format!("({})", parts.collect::<Vec<_>>().join(", "))
}

/// Connectives present in every factor fiber with a consistent
/// arity, given one representative fiber per factor.
fn shared_ops(fibers: &[&FiniteFiber]) -> BTreeMap<String, usize> {
    let mut shared: Option<BTreeMap<String, usize>> = None;
    for f in fibers {
        let mine: BTreeMap<String, usize> =
            f.ops.iter().map(|(n, t)| (n.clone(), t.arity)).collect();
        shared = Some(match shared {
            None => mine,
            Some(prev) => prev
                .into_iter()
                .filter(|(n, a)| mine.get(n) == Some(a))
                .collect(),
        });
    }
    shared.unwrap_or_default()
}

/// The empty product: one object, one morphism, a one-element fiber.
/// Its single fiber carries a generous connective inventory (every
/// operation is forced, since there is only one element) so that
/// assertions written in any of the usual languages can be evaluated
/// in it.
fn terminal_propcat(name: &str) -> FinPropCategory {
    let mut comp = HashMap::new();
    comp.insert((0, 0), 0);
    let mut products = BTreeMap::new();
    products.insert((0, 0), ProductData { obj: 0, p1: 0, p2: 0 });
    let mut pairing = HashMap::new();
    pairing.insert((0, 0), 0);
    let base = FinCategory::new(
        vec!["1".to_string()],
        vec![MorData { name: "id".to_string(), dom: 0, cod: 0 }],
        comp,
        vec![0],
        0,
        products,
        pairing,
    );
    let mut ops = BTreeMap::new();
    for (n, arity) in [
        ("e", 0),
        ("not", 1),
        ("and", 2),
        ("or", 2),
        ("min", 2),
        ("max", 2),
        ("tensor", 2),
    ] {
        ops.insert(n.to_string(), OpTable { arity, table: vec![0] });
    }
    let fiber = FiniteFiber {
        elem_names: vec!["*".to_string()],
        leq: vec![true],
        ops,
    };
    let mut quantifiers = BTreeMap::new();
    for q in ["forall", "exists"] {
        let mut t = BTreeMap::new();
        t.insert((0, 0), vec![0u32]);
        quantifiers.insert(q.to_string(), t);
    }
    let mut eq = BTreeMap::new();
    eq.insert(0, 0u32);
    FinPropCategory {
        name: name.to_string(),
        base,
        concrete: None,
        fibers: Fibers::Finite(FiniteFibers {
            fibers: vec![fiber],
            restriction: vec![vec![0]],
            quantifiers,
            eq,
        }),
    }
}

/// Build the product of finitely many table-backed prop-categories.
/// The empty product is the terminal prop-category.
pub fn product_propcat(
    factors: &[Arc<FinPropCategory>],
    name: &str,
) -> Result<ProductPropCat, String> {
    if factors.is_empty() {
        let host = Arc::new(terminal_propcat(name));
        return Ok(ProductPropCat {
            host,
            factors: vec![],
            projections: vec![],
        });
    }
    let ffs: Vec<&FiniteFibers> = factors
        .iter()
        .map(|f| {
            f.finite()
                .ok_or_else(|| format!("factor `{}` has symbolic fibers", f.name))
        })
        .collect::<Result<_, String>>()?;
    let obj_radices: Vec<usize> = factors.iter().map(|f| f.base.object_count()).collect();
    let mor_radices: Vec<usize> = factors.iter().map(|f| f.base.morphism_count()).collect();

    // Objects.
    let obj_tuples = tuples(&obj_radices);
    let objects: Vec<String> = obj_tuples
        .iter()
        .map(|t| {
            tuple_name(
                t.iter()
                    .zip(factors)
                    .map(|(&o, f)| f.base.objects[o].clone()),
            )
        })
        .collect();

    // Morphisms: every tuple of factor morphisms.
    let mor_tuples = tuples(&mor_radices);
    let morphisms: Vec<MorData> = mor_tuples
        .iter()
        .map(|t| MorData {
            name: tuple_name(
                t.iter()
                    .zip(factors)
                    .map(|(&m, f)| f.base.morphisms[m].name.clone()),
            ),
            dom: join(
                &t.iter()
                    .zip(factors)
                    .map(|(&m, f)| f.base.dom(m))
                    .collect::<Vec<_>>(),
                &obj_radices,
            ),
            cod: join(
                &t.iter()
                    .zip(factors)
                    .map(|(&m, f)| f.base.cod(m))
                    .collect::<Vec<_>>(),
                &obj_radices,
            ),
        })
        .collect();

    // Composition: tuples of composable pairs. Walk the Cartesian
    // product of the factor composition tables.
    let comp_entries: Vec<Vec<(&(Mor, Mor), &Mor)>> = factors
        .iter()
        .map(|f| f.base.comp.iter().collect())
        .collect();
    let comp_radices: Vec<usize> = comp_entries.iter().map(Vec::len).collect();
    let mut comp: HashMap<(Mor, Mor), Mor> =
        HashMap::with_capacity(comp_radices.iter().product());
    for pick in tuples(&comp_radices) {
        let mut gs = Vec::with_capacity(factors.len());
        let mut fs = Vec::with_capacity(factors.len());
        let mut gfs = Vec::with_capacity(factors.len());
        for (i, &k) in pick.iter().enumerate() {
            let (&(g, f), &gf) = comp_entries[i][k];
            gs.push(g);
            fs.push(f);
            gfs.push(gf);
        }
        comp.insert(
            (join(&gs, &mor_radices), join(&fs, &mor_radices)),
            join(&gfs, &mor_radices),
        );
    }

    let identities: Vec<Mor> = obj_tuples
        .iter()
        .map(|t| {
            join(
                &t.iter()
                    .zip(factors)
                    .map(|(&o, f)| f.base.id(o))
                    .collect::<Vec<_>>(),
                &mor_radices,
            )
        })
        .collect();
    let terminal = join(
        &factors.iter().map(|f| f.base.terminal).collect::<Vec<_>>(),
        &obj_radices,
    );

    // Designated products: tuples of designated factor products.
    let prod_entries: Vec<Vec<(&(Obj, Obj), &ProductData)>> = factors
        .iter()
        .map(|f| f.base.products.iter().collect())
        .collect();
    let prod_radices: Vec<usize> = prod_entries.iter().map(Vec::len).collect();
    let mut products = BTreeMap::new();
    for pick in tuples(&prod_radices) {
        let mut bs = Vec::new();
        let mut cs = Vec::new();
        let mut objs = Vec::new();
        let mut p1s = Vec::new();
        let mut p2s = Vec::new();
        for (i, &k) in pick.iter().enumerate() {
            let (&(b, c), pd) = prod_entries[i][k];
            bs.push(b);
            cs.push(c);
            objs.push(pd.obj);
            p1s.push(pd.p1);
            p2s.push(pd.p2);
        }
        products.insert(
            (join(&bs, &obj_radices), join(&cs, &obj_radices)),
            ProductData {
                obj: join(&objs, &obj_radices),
                p1: join(&p1s, &mor_radices),
                p2: join(&p2s, &mor_radices),
            },
        );
    }

    // Pairing: tuples of designated factor pairings.
    let pair_entries: Vec<Vec<(&(Mor, Mor), &Mor)>> = factors
        .iter()
        .map(|f| f.base.pairing.iter().collect())
        .collect();
    let pair_radices: Vec<usize> = pair_entries.iter().map(Vec::len).collect();
    let mut pairing = HashMap::new();
    for pick in tuples(&pair_radices) {
        let mut fs = Vec::new();
        let mut gs = Vec::new();
        let mut ps = Vec::new();
        for (i, &k) in pick.iter().enumerate() {
            let (&(f, g), &p) = pair_entries[i][k];
            fs.push(f);
            gs.push(g);
            ps.push(p);
        }
        pairing.insert(
            (join(&fs, &mor_radices), join(&gs, &mor_radices)),
            join(&ps, &mor_radices),
        );
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

    // Fibers: pointwise products, with the shared connective
    // inventory.
    let rep_fibers: Vec<&FiniteFiber> = ffs
        .iter()
        .zip(factors)
        .map(|(ff, f)| &ff.fibers[f.base.terminal])
        .collect();
    let op_names = shared_ops(&rep_fibers);

    let fiber_radices_of = |obj_parts: &[Obj]| -> Vec<usize> {
        ffs.iter()
            .zip(obj_parts)
            .map(|(ff, &o)| ff.fibers[o].len())
            .collect()
    };

    let mut fibers = Vec::with_capacity(obj_tuples.len());
    for t in &obj_tuples {
        let radices = fiber_radices_of(t);
        let n: usize = radices.iter().product();
        let elem_tuples = tuples(&radices);
        let elem_names: Vec<String> = elem_tuples
            .iter()
            .map(|et| {
                tuple_name(et.iter().zip(ffs.iter().zip(t.iter())).map(
                    |(&e, (ff, &o))| ff.fibers[o].elem_names[e].clone(),
                ))
            })
            .collect();
        let mut leq = vec![false; n * n];
        for (a, at) in elem_tuples.iter().enumerate() {
            for (b, bt) in elem_tuples.iter().enumerate() {
                leq[a * n + b] = at
                    .iter()
                    .zip(bt)
                    .zip(ffs.iter().zip(t.iter()))
                    .all(|((&x, &y), (ff, &o))| ff.fibers[o].leq(x, y));
            }
        }
        let mut ops = BTreeMap::new();
        for (op, &arity) in &op_names {
            let total = n.pow(arity as u32);
            let mut table = vec![0u32; total];
            let mut args = vec![0usize; arity];
            for (slot, entry) in table.iter_mut().enumerate() {
                // little-endian decode of the arg tuple
                let mut rest = slot;
                for a in args.iter_mut() {
                    *a = rest % n;
                    rest /= n;
                }
                let mut out_parts = Vec::with_capacity(factors.len());
                for (i, (ff, &o)) in ffs.iter().zip(t.iter()).enumerate() {
                    let comp_args: Vec<usize> = args
                        .iter()
                        .map(|&a| elem_tuples[a][i])
                        .collect();
                    let v = ff.fibers[o]
                        .op(op, &comp_args)
                        .ok_or_else(|| format!("factor op `{op}` is partial"))?;
                    out_parts.push(v);
                }
                *entry = join(&out_parts, &radices) as u32;
            }
            ops.insert(op.clone(), OpTable { arity, table });
        }
        fibers.push(FiniteFiber {
            elem_names,
            leq,
            ops,
        });
    }

    // Restriction tables, componentwise.
    let mut restriction = Vec::with_capacity(mor_tuples.len());
    for mt in &mor_tuples {
        let cod_parts: Vec<Obj> = mt
            .iter()
            .zip(factors)
            .map(|(&m, f)| f.base.cod(m))
            .collect();
        let dom_parts: Vec<Obj> = mt
            .iter()
            .zip(factors)
            .map(|(&m, f)| f.base.dom(m))
            .collect();
        let cod_radices = fiber_radices_of(&cod_parts);
        let dom_radices = fiber_radices_of(&dom_parts);
        let table: Vec<u32> = (0..cod_radices.iter().product::<usize>())
            .map(|r| {
                let parts = split(r, &cod_radices);
                let moved: Vec<usize> = parts
                    .iter()
                    .zip(ffs.iter().zip(mt))
                    .map(|(&e, (ff, &m))| ff.restriction[m][e] as usize)
                    .collect();
                join(&moved, &dom_radices) as u32
            })
            .collect();
        restriction.push(table);
    }

    // Quantifiers: names present in every factor, tables where every
    // factor has one.
    let shared_quants: BTreeSet<String> = {
        let mut iter = ffs.iter();
        let first: BTreeSet<String> = iter
            .next()
            .map(|ff| ff.quantifiers.keys().cloned().collect())
            .unwrap_or_default();
        ffs.iter().skip(1).fold(first, |acc, ff| {
            acc.intersection(&ff.quantifiers.keys().cloned().collect())
                .cloned()
                .collect()
        })
    };
    let mut quantifiers = BTreeMap::new();
    for q in &shared_quants {
        let mut tables: BTreeMap<(Obj, Obj), Vec<u32>> = BTreeMap::new();
        for (&(b, c), pd) in &base.products {
            let b_parts = split(b, &obj_radices);
            let c_parts = split(c, &obj_radices);
            let prod_parts = split(pd.obj, &obj_radices);
            let factor_tables: Option<Vec<&Vec<u32>>> = ffs
                .iter()
                .zip(b_parts.iter().zip(&c_parts))
                .map(|(ff, (&bi, &ci))| ff.quantifiers[q].get(&(bi, ci)))
                .collect();
            let Some(factor_tables) = factor_tables else { continue };
            let prod_radices = fiber_radices_of(&prod_parts);
            let b_radices = fiber_radices_of(&b_parts);
            let table: Vec<u32> = (0..prod_radices.iter().product::<usize>())
                .map(|r| {
                    let parts = split(r, &prod_radices);
                    let moved: Vec<usize> = parts
                        .iter()
                        .zip(&factor_tables)
                        .map(|(&e, t)| t[e] as usize)
                        .collect();
                    join(&moved, &b_radices) as u32
                })
                .collect();
            tables.insert((b, c), table);
        }
        quantifiers.insert(q.clone(), tables);
    }

    // Equality, where every factor provides it and the square exists.
    let mut eq = BTreeMap::new();
    for (o, t) in obj_tuples.iter().enumerate() {
        if base.product(o, o).is_none() {
            continue;
        }
        let parts: Option<Vec<u32>> = ffs
            .iter()
            .zip(t.iter())
            .map(|(ff, &oi)| ff.eq.get(&oi).copied())
            .collect();
        let Some(parts) = parts else { continue };
        let sq_parts: Vec<Obj> = t
            .iter()
            .zip(factors)
            .map(|(&oi, f)| f.base.product(oi, oi).expect("factor square exists").obj)
            .collect();
        let sq_radices = fiber_radices_of(&sq_parts);
        let parts_usize: Vec<usize> = parts.iter().map(|&p| p as usize).collect();
        eq.insert(o, join(&parts_usize, &sq_radices) as u32);
    }

    let host = Arc::new(FinPropCategory {
        name: name.to_string(),
        base,
        concrete: None,
        fibers: Fibers::Finite(FiniteFibers {
            fibers,
            restriction,
            quantifiers,
            eq,
        }),
    });

    // Projection morphisms.
    let factor_list: Vec<Arc<FinPropCategory>> = factors.to_vec();
    let mut projections = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        let omap: Vec<Obj> = obj_tuples.iter().map(|t| t[i]).collect();
        let mmap: Vec<Mor> = mor_tuples.iter().map(|t| t[i]).collect();
        let pmap: Vec<Vec<u32>> = obj_tuples
            .iter()
            .map(|t| {
                let radices = fiber_radices_of(t);
                (0..radices.iter().product::<usize>())
                    .map(|r| split(r, &radices)[i] as u32)
                    .collect()
            })
            .collect();
        projections.push(PropMorphism {
            name: format!("pi{}", i + 1),
            source: Arc::clone(&host),
            target: Arc::clone(f),
            omap,
            mmap,
            pmap,
        });
    }

    Ok(ProductPropCat {
        host,
        factors: factor_list,
        projections,
    })
}

/// Pair a family of morphisms with a common source into the product
/// of their targets: the unique morphism whose composite with each
/// projection is the corresponding component.
pub fn pair_into_product(
    prod: &ProductPropCat,
    components: &[PropMorphism],
) -> Result<PropMorphism, String> {
    if components.len() != prod.factors.len() {
        return Err(format!(
            "{} components given, product has {} factors",
            components.len(),
            prod.factors.len()
        ));
    }
    for (c, f) in components.iter().zip(&prod.factors) {
        if *c.target != **f {
            return Err(format!(
                "component `{}` does not land in the corresponding factor",
                c.name
            ));
        }
    }
    if components.is_empty() {
        return Err("pairing into the empty product needs a designated source".to_string());
    }
    let source = &components[0].source;
    if components.iter().any(|c| *c.source != **source) {
        return Err("components have different sources".to_string());
    }
    let sf = source.finite().ok_or("source has symbolic fibers")?;
    let no = source.base.object_count();
    let omap: Vec<Obj> = (0..no)
        .map(|o| {
            prod.obj_index(&components.iter().map(|c| c.omap[o]).collect::<Vec<_>>())
        })
        .collect();
    let mmap: Vec<Mor> = (0..source.base.morphism_count())
        .map(|m| {
            prod.mor_index(&components.iter().map(|c| c.mmap[m]).collect::<Vec<_>>())
        })
        .collect();
    let pmap: Vec<Vec<u32>> = (0..no)
        .map(|o| {
            let obj_parts: Vec<Obj> = components.iter().map(|c| c.omap[o]).collect();
            (0..sf.fibers[o].len())
                .map(|r| {
                    let parts: Vec<usize> = components
                        .iter()
                        .map(|c| c.pmap[o][r] as usize)
                        .collect();
                    prod.elem_index(&obj_parts, &parts) as u32
                })
                .collect()
        })
        .collect();
    Ok(PropMorphism {
        name: tuple_name(components.iter().map(|c| c.name.clone())),
        source: Arc::clone(source),
        target: Arc::clone(&prod.host),
        omap,
        mmap,
        pmap,
    })
}

/// Evaluate a product fiber element from factor elements.
pub fn product_elem(prod: &ProductPropCat, obj_parts: &[Obj], parts: &[&Elem]) -> Result<Elem, String> {
    let idx: Vec<usize> = parts
        .iter()
        .map(|e| match e {
            Elem::Fin(i) => Ok(*i),
            Elem::Fuz(_) => Err("product fibers are finite".to_string()),
        })
        .collect::<Result<_, String>>()?;
    Ok(Elem::Fin(prod.elem_index(obj_parts, &idx)))
}
