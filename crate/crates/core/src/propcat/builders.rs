//! Constructor families for prop-categories: lattice-valued fibers,
//! powersets with Mostowski-style quantifiers, and symbolic fuzzy
//! fibers over a T-norm.  All of them sit on a bounded word base
//! category: objects are formal products of atoms up to a depth
//! bound, morphisms are all functions between the carriers.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::category::{word_category, ConcreteBase, FinCategory, Obj};
use super::fiber::{FiniteFiber, OpTable, TNorm, ValueLattice};
use super::{Fibers, FinPropCategory, FiniteFibers, FuzzyFibers, OPROD};
use crate::rat;
use crate::Rat;

/// A quantifier over powerset fibers, given by the family of accepted
/// row-sets: `Ω_{b,c}(R) = {a : {j : (a,j) ∈ R} accepted over c}`.
/// The built-in families depend only on the row's cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantSpec {
    /// Accepts only the full carrier: fiberwise meet.
    Forall,
    /// Accepts every nonempty subset: fiberwise join.
    Exists,
    /// Accepts exactly the subsets of the given cardinality.  For
    /// k ≥ 2 this is a genuinely non-monotone Mostowski quantifier.
    ExactlyK(usize),
}

impl QuantSpec {
    /// Is a row-set of size `count` out of a `carrier`-element set
    /// accepted?
    pub fn accepts(&self, count: usize, carrier: usize) -> bool {
        match self {
            QuantSpec::Forall => count == carrier,
            QuantSpec::Exists => count > 0,
            QuantSpec::ExactlyK(k) => count == *k,
        }
    }
}

/// Quantifier selection for fuzzy fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FuzzyQuantifier {
    /// Pointwise infimum over the second factor.
    Forall,
    /// Pointwise supremum over the second factor.
    Exists,
    /// Iterated ⊗ over the second factor (`Ω^⊙`).
    Oprod,
}

impl FuzzyQuantifier {
    pub fn name(&self) -> &'static str {
        match self {
            FuzzyQuantifier::Forall => "forall",
            FuzzyQuantifier::Exists => "exists",
            FuzzyQuantifier::Oprod => OPROD,
        }
    }
}

/// Decode a fiber-element index into per-carrier-point lattice
/// values, little-endian: digit `i` is the value at carrier point `i`.
fn decode(mut idx: usize, points: usize, base: usize) -> Vec<usize> {
    let mut digits = Vec::with_capacity(points);
    for _ in 0..points {
        digits.push(idx % base);
        idx /= base;
    }
    digits
}

fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Lattice-valued fibers over a word base: the fiber over an object
/// with an `n`-point carrier is all functions into the lattice,
/// encoded little-endian base `|L|`, ordered pointwise, with every
/// lattice connective extended pointwise.  Restriction along `f` is
/// precomposition with `f`'s graph.
fn lattice_fibers(
    cat: &FinCategory,
    concrete: &ConcreteBase,
    lattice: &ValueLattice,
) -> Result<FiniteFibers, String> {
    let l = lattice.len();
    let top = lattice.top().ok_or("lattice has no top")?;
    let bot = lattice.bot().ok_or("lattice has no bottom")?;

    let mut fibers = Vec::with_capacity(cat.object_count());
    for c in 0..cat.object_count() {
        let points = concrete.carriers[c];
        let size = l.pow(points as u32);
        let elem_names: Vec<String> = (0..size)
            .map(|i| {
                let digits = decode(i, points, l);
                let body: Vec<&str> = digits.iter().map(|&d| lattice.elems[d].as_str()).collect();
                format!("[{}]", body.join(" "))
            })
            .collect();
        let mut leq = vec![false; size * size];
        for a in 0..size {
            let da = decode(a, points, l);
            for b in 0..size {
                let db = decode(b, points, l);
                leq[a * size + b] = da.iter().zip(&db).all(|(&x, &y)| lattice.leq(x, y));
            }
        }
        let mut ops = BTreeMap::new();
        for (name, op) in &lattice.ops {
            let table = match op.arity {
                0 => {
                    let v = op.table[0] as usize;
                    OpTable::constant(encode(&vec![v; points], l) as u32)
                }
                1 => OpTable::unary(
                    (0..size)
                        .map(|a| {
                            let digits: Vec<usize> = decode(a, points, l)
                                .iter()
                                .map(|&d| op.apply(l, &[d]).unwrap())
                                .collect();
                            encode(&digits, l) as u32
                        })
                        .collect(),
                ),
                2 => OpTable::binary_from(size, |a, b| {
                    let da = decode(a, points, l);
                    let db = decode(b, points, l);
                    let digits: Vec<usize> = da
                        .iter()
                        .zip(&db)
                        .map(|(&x, &y)| op.apply(l, &[x, y]).unwrap())
                        .collect();
                    encode(&digits, l)
                }),
                n => return Err(format!("unsupported connective arity {n}")),
            };
            ops.insert(name.clone(), table);
        }
        fibers.push(FiniteFiber {
            elem_names,
            leq,
            ops,
        });
    }

    let mut restriction = Vec::with_capacity(cat.morphism_count());
    for f in 0..cat.morphism_count() {
        let (dom, cod) = (cat.dom(f), cat.cod(f));
        let graph = &concrete.functions[f];
        let (nd, nc) = (concrete.carriers[dom], concrete.carriers[cod]);
        let table: Vec<u32> = (0..fibers[cod].len())
            .map(|r| {
                let digits = decode(r, nc, l);
                let pulled: Vec<usize> = (0..nd).map(|x| digits[graph[x]]).collect();
                encode(&pulled, l) as u32
            })
            .collect();
        restriction.push(table);
    }

    let mut eq = BTreeMap::new();
    for c in 0..cat.object_count() {
        if let Some(prod) = cat.product(c, c) {
            let n = concrete.carriers[c];
            let mut digits = vec![bot; n * n];
            for i in 0..n {
                digits[i * n + i] = top;
            }
            eq.insert(c, encode(&digits, l) as u32);
            debug_assert_eq!(concrete.carriers[prod.obj], n * n);
        }
    }

    Ok(FiniteFibers {
        fibers,
        restriction,
        quantifiers: BTreeMap::new(),
        eq,
    })
}

/// Quantifier tables over lattice fibers: fold each row of the
/// row-major relation with the given lattice operation (`meet` for
/// ∀, `join` for ∃), seeded with the given unit.
fn fold_quantifier(
    cat: &FinCategory,
    concrete: &ConcreteBase,
    base: usize,
    unit: usize,
    fold: impl Fn(usize, usize) -> usize,
) -> BTreeMap<(Obj, Obj), Vec<u32>> {
    let mut out = BTreeMap::new();
    for (&(b, c), prod) in &cat.products {
        let (nb, nc) = (concrete.carriers[b], concrete.carriers[c]);
        let size = base.pow(concrete.carriers[prod.obj] as u32);
        let table: Vec<u32> = (0..size)
            .map(|r| {
                let digits = decode(r, nb * nc, base);
                let folded: Vec<usize> = (0..nb)
                    .map(|a| digits[a * nc..(a + 1) * nc].iter().fold(unit, |x, &y| fold(x, y)))
                    .collect();
                encode(&folded, base) as u32
            })
            .collect();
        out.insert((b, c), table);
    }
    out
}

/// Build the lattice-valued prop-category over the given atoms:
/// pointwise fibers into `lattice`, `∀`/`∃` as fiberwise meet/join
/// over the second product factor, and equality the ⊤/⊥ indicator of
/// the diagonal.
pub fn mk_lattice_propcat(
    name: &str,
    atoms: &[(String, usize)],
    lattice: &ValueLattice,
    product_depth: usize,
) -> Result<FinPropCategory, String> {
    if product_depth == 0 {
        return Err("product_depth must be at least 1".to_string());
    }
    lattice.validate()?;
    let (cat, concrete) = word_category(atoms, product_depth);
    let mut fibers = lattice_fibers(&cat, &concrete, lattice)?;
    let meet = |a, b| lattice.meet(a, b).unwrap();
    let join = |a, b| lattice.join(a, b).unwrap();
    let top = lattice.top().unwrap();
    let bot = lattice.bot().unwrap();
    fibers.quantifiers.insert(
        "forall".to_string(),
        fold_quantifier(&cat, &concrete, lattice.len(), top, meet),
    );
    fibers.quantifiers.insert(
        "exists".to_string(),
        fold_quantifier(&cat, &concrete, lattice.len(), bot, join),
    );
    Ok(FinPropCategory {
        name: name.to_string(),
        base: cat,
        concrete: Some(concrete),
        fibers: Fibers::Finite(fibers),
    })
}

/// Build the powerset prop-category over the given atoms: fibers are
/// all subsets of the carrier (bitmask-encoded), connectives are
/// `and`/`or`/`not` with `⊗ = and` and `e = ⊤`, equality is the
/// diagonal, and each named quantifier follows its accepted-row-set
/// family: `Ω_{b,c}(R) = {a : {j : (a,j) ∈ R} accepted over c}`.
pub fn mk_powerset_propcat(
    name: &str,
    atoms: &[(String, usize)],
    quantifiers: &[(String, QuantSpec)],
    product_depth: usize,
) -> Result<FinPropCategory, String> {
    if product_depth == 0 {
        return Err("product_depth must be at least 1".to_string());
    }
    let bool2 = ValueLattice::bool2();
    let (cat, concrete) = word_category(atoms, product_depth);
    let mut fibers = lattice_fibers(&cat, &concrete, &bool2)?;
    for (qname, spec) in quantifiers {
        let mut tables = BTreeMap::new();
        for (&(b, c), prod) in &cat.products {
            let (nb, nc) = (concrete.carriers[b], concrete.carriers[c]);
            let size = 1usize << concrete.carriers[prod.obj];
            let table: Vec<u32> = (0..size)
                .map(|r| {
                    let mut out = 0u32;
                    for a in 0..nb {
                        let row = (r >> (a * nc)) & ((1usize << nc) - 1);
                        if spec.accepts(row.count_ones() as usize, nc) {
                            out |= 1 << a;
                        }
                    }
                    out
                })
                .collect();
            tables.insert((b, c), table);
        }
        fibers.quantifiers.insert(qname.clone(), tables);
    }
    Ok(FinPropCategory {
        name: name.to_string(),
        base: cat,
        concrete: Some(concrete),
        fibers: Fibers::Finite(fibers),
    })
}

/// The default probe values for T-norm validation and fuzzy fiber
/// checks: `0, 1/4, 1/2, 3/4, 1`.
pub fn default_probe_values() -> Vec<Rat> {
    [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
        .iter()
        .map(|&(n, d)| rat(n, d))
        .collect()
}

/// Build the fuzzy prop-category over the given atoms: fibers are all
/// functions from the carrier to exact rationals in `[0,1]` (held
/// symbolically), with `min`/`max`, `⊗` the T-norm, `e ≡ 1`, the
/// selected quantifiers, and equality the 0/1 indicator of the
/// diagonal.  Verification over these fibers runs on the per-object
/// probe sets built here from the probe values.
pub fn mk_fuzzy_propcat(
    name: &str,
    atoms: &[(String, usize)],
    tnorm: TNorm,
    quantifiers: &[FuzzyQuantifier],
    product_depth: usize,
    probe_values: Option<&[Rat]>,
) -> Result<FinPropCategory, String> {
    if product_depth == 0 {
        return Err("product_depth must be at least 1".to_string());
    }
    let values = match probe_values {
        Some(v) => v.to_vec(),
        None => default_probe_values(),
    };
    for v in &values {
        if *v < Rat::zero() || *v > Rat::one() {
            return Err(format!("probe value {v} outside [0,1]"));
        }
    }
    tnorm
        .validate_on(&values)
        .map_err(|e| format!("T-norm law violation on probe set: {e}"))?;
    let (cat, concrete) = word_category(atoms, product_depth);

    // Per-object probe elements: all vectors over a small value grid
    // when feasible, otherwise constants plus scaled point indicators.
    let grid: Vec<Rat> = vec![Rat::zero(), rat(1, 2), Rat::one()];
    let probes: Vec<Vec<Vec<Rat>>> = concrete
        .carriers
        .iter()
        .map(|&n| {
            if grid.len().pow(n as u32) <= 27 {
                let mut out: Vec<Vec<Rat>> = vec![vec![]];
                for _ in 0..n {
                    out = out
                        .into_iter()
                        .flat_map(|v| {
                            grid.iter().map(move |g| {
                                let mut v2 = v.clone();
                                v2.push(g.clone());
                                v2
                            })
                        })
                        .collect();
                }
                out
            } else {
                let mut out: Vec<Vec<Rat>> =
                    values.iter().map(|v| vec![v.clone(); n]).collect();
                for i in 0..n {
                    for v in &values {
                        let mut e = vec![Rat::zero(); n];
                        e[i] = v.clone();
                        out.push(e);
                    }
                }
                out.sort();
                out.dedup();
                out
            }
        })
        .collect();

    Ok(FinPropCategory {
        name: name.to_string(),
        base: cat,
        concrete: Some(concrete),
        fibers: Fibers::Fuzzy(FuzzyFibers {
            tnorm,
            quantifiers: quantifiers
                .iter()
                .map(|q| q.name().to_string())
                .collect::<BTreeSet<String>>(),
            probes,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propcat::Elem;

    #[test]
    fn powerset_quantifiers_are_meet_and_join() {
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
        let lat = mk_lattice_propcat(
            "bool",
            &[("B".to_string(), 2)],
            &ValueLattice::bool2(),
            2,
        )
        .unwrap();
        // Same base, and bitmask encodings agree with base-2 digit
        // encodings, so the quantifier tables must coincide.
        let pf = pc.finite().unwrap();
        let lf = lat.finite().unwrap();
        assert_eq!(pf.quantifiers["forall"], lf.quantifiers["forall"]);
        assert_eq!(pf.quantifiers["exists"], lf.quantifiers["exists"]);
        assert_eq!(pf.eq, lf.eq);
    }

    #[test]
    fn exists_of_empty_relation_is_empty() {
        let pc = mk_powerset_propcat(
            "pow",
            &[("B".to_string(), 2)],
            &[("exists".to_string(), QuantSpec::Exists)],
            2,
        )
        .unwrap();
        let cb = pc.concrete.as_ref().unwrap();
        let b = cb.atom_object("B").unwrap();
        let out = pc.quant("exists", b, b, &Elem::Fin(0)).unwrap();
        assert_eq!(out, Elem::Fin(0));
    }

    #[test]
    fn exactly_two_accepts_only_pairs() {
        let q = QuantSpec::ExactlyK(2);
        assert!(!q.accepts(0, 2));
        assert!(!q.accepts(1, 2));
        assert!(q.accepts(2, 2));
        assert!(!q.accepts(3, 4));
    }

    #[test]
    fn lattice_restriction_is_precomposition() {
        let pc = mk_lattice_propcat(
            "l5",
            &[("A".to_string(), 2)],
            &ValueLattice::lukasiewicz_chain(5),
            2,
        )
        .unwrap();
        let cb = pc.concrete.as_ref().unwrap();
        let a = cb.atom_object("A").unwrap();
        let swap = cb.morphism_with_graph(a, a, &[1, 0]).unwrap();
        // The fiber element [0 1] (value 0 at point 0, value 1 at
        // point 1) pulls back along swap to [1 0].
        let r = Elem::Fin(encode(&[0, 4], 5));
        let pulled = pc.restrict(swap, &r).unwrap();
        assert_eq!(pulled, Elem::Fin(encode(&[4, 0], 5)));
    }

    #[test]
    fn fuzzy_singleton_quantifier_values() {
        // Product T-norm, singleton A, two-point B, R ≡ 1/2:
        // Ω^⊙(R) = 1/4 while ∀(R) = ∃(R) = 1/2.
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
        let cb = pc.concrete.as_ref().unwrap();
        let a = cb.atom_object("A").unwrap();
        let b = cb.atom_object("B").unwrap();
        let r = Elem::Fuz(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(
            pc.quant(OPROD, a, b, &r).unwrap(),
            Elem::Fuz(vec![rat(1, 4)])
        );
        assert_eq!(
            pc.quant("forall", a, b, &r).unwrap(),
            Elem::Fuz(vec![rat(1, 2)])
        );
        assert_eq!(
            pc.quant("exists", a, b, &r).unwrap(),
            Elem::Fuz(vec![rat(1, 2)])
        );
    }

    #[test]
    fn fuzzy_min_oprod_equals_forall_on_probes() {
        let pc = mk_fuzzy_propcat(
            "fuz-min",
            &[("B".to_string(), 2)],
            TNorm::Minimum,
            &[FuzzyQuantifier::Forall, FuzzyQuantifier::Oprod],
            2,
            None,
        )
        .unwrap();
        let cb = pc.concrete.as_ref().unwrap();
        let b = cb.atom_object("B").unwrap();
        let (elems, exhaustive) = pc.fiber_elements(cb.object_of_word(&[0, 0]).unwrap());
        assert!(!exhaustive);
        for r in &elems {
            assert_eq!(
                pc.quant(OPROD, b, b, r).unwrap(),
                pc.quant("forall", b, b, r).unwrap()
            );
        }
    }

    #[test]
    fn empty_atom_list_gives_terminal_base() {
        let pc = mk_lattice_propcat("triv", &[], &ValueLattice::bool2(), 2).unwrap();
        assert_eq!(pc.base.object_count(), 1);
        assert_eq!(pc.fiber_size(pc.base.terminal), Some(2));
    }
}
