//! Finite prop-categories: a base category with designated finite
//! products together with a contravariant assignment of fibers
//! (posets carrying connective algebras, a `(⊗, e)` monoid,
//! quantifier maps and fibered equality).
//!
//! Two fiber backends exist: explicit finite tables, and symbolic
//! fuzzy fibers (functions from a finite carrier to exact rationals)
//! whose checks run on probe sets.  All element-level operations are
//! exposed uniformly through [`FinPropCategory`] so the semantics and
//! fibered layers never care which backend they are on.

mod builders;
mod category;
mod check;
mod fiber;

pub use builders::{
    mk_fuzzy_propcat, mk_lattice_propcat, mk_powerset_propcat, FuzzyQuantifier, QuantSpec,
};
pub use category::{
    word_category, ConcreteBase, FinCategory, Mor, MorData, NaryProduct, Obj, ProductData,
};
pub use check::{check_fa, FaReport, Violation};
pub use fiber::{Elem, FiniteFiber, OpTable, TNorm, ValueLattice};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::syntax::Language;
use crate::Rat;

/// Explicit-table fiber assignment: one finite fiber per object,
/// restriction tables per morphism, quantifier tables per designated
/// product, and fibered equality per object whose square exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFibers {
    /// Per object.
    pub fibers: Vec<FiniteFiber>,
    /// Per morphism `f`: the table of `P(f) : P(cod f) → P(dom f)`.
    pub restriction: Vec<Vec<u32>>,
    /// Per quantifier symbol and designated product `(b, c)`: the
    /// table of `Ω_{b,c} : P(b×c) → P(b)`.
    pub quantifiers: BTreeMap<String, BTreeMap<(Obj, Obj), Vec<u32>>>,
    /// Per object `c` with `(c, c)` designated: `Eq_c ∈ P(c×c)`.
    pub eq: BTreeMap<Obj, u32>,
}

/// Symbolic fuzzy fiber assignment: the fiber over `c` is the set of
/// functions `carrier(c) → ℚ ∩ [0,1]`, ordered pointwise, with
/// connectives `min`, `max`, `tensor` (the T-norm) and `e ≡ 1`.
/// Requires the base to carry concrete carrier data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyFibers {
    pub tnorm: TNorm,
    /// Enabled quantifier symbols among `forall`, `exists`, `Oprod`.
    pub quantifiers: BTreeSet<String>,
    /// Per object: probe elements used by checks (never exhaustive).
    pub probes: Vec<Vec<Vec<Rat>>>,
}

/// The fiber assignment backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fibers {
    Finite(FiniteFibers),
    Fuzzy(FuzzyFibers),
}

/// A finite prop-category: base category, fiber assignment, and
/// (when built from atoms) the concrete carrier realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPropCategory {
    pub name: String,
    pub base: FinCategory,
    /// Concrete carriers/functions when the base is a word category;
    /// required by the fuzzy backend, informational otherwise.
    pub concrete: Option<ConcreteBase>,
    pub fibers: Fibers,
}

/// The fuzzy T-norm quantifier symbol.
pub const OPROD: &str = "Oprod";

impl FinPropCategory {
    /// The finite-table backend, if that is what this category uses.
    pub fn finite(&self) -> Option<&FiniteFibers> {
        match &self.fibers {
            Fibers::Finite(f) => Some(f),
            Fibers::Fuzzy(_) => None,
        }
    }

    pub fn fuzzy(&self) -> Option<&FuzzyFibers> {
        match &self.fibers {
            Fibers::Finite(_) => None,
            Fibers::Fuzzy(f) => Some(f),
        }
    }

    /// The logic language this prop-category interprets: its
    /// connective tables and quantifier maps.
    pub fn language(&self) -> Language {
        let mut lang = Language::minimal();
        match &self.fibers {
            Fibers::Finite(ff) => {
                if let Some(f) = ff.fibers.first() {
                    for (name, op) in &f.ops {
                        lang.connectives.insert(name.clone(), op.arity);
                    }
                }
                for q in ff.quantifiers.keys() {
                    lang.quantifiers.insert(q.clone());
                }
            }
            Fibers::Fuzzy(fz) => {
                lang.connectives.insert("min".to_string(), 2);
                lang.connectives.insert("max".to_string(), 2);
                for q in &fz.quantifiers {
                    lang.quantifiers.insert(q.clone());
                }
            }
        }
        lang
    }

    /// Number of elements of the fiber over `c`; `None` for symbolic
    /// fibers.
    pub fn fiber_size(&self, c: Obj) -> Option<usize> {
        match &self.fibers {
            Fibers::Finite(ff) => Some(ff.fibers[c].len()),
            Fibers::Fuzzy(_) => None,
        }
    }

    /// Carrier size of an object (concrete bases only).
    pub fn carrier(&self, c: Obj) -> Option<usize> {
        self.concrete.as_ref().map(|cb| cb.carriers[c])
    }

    /// `P(f)` applied to an element of the fiber over `cod f`.
    pub fn restrict(&self, f: Mor, e: &Elem) -> Result<Elem, String> {
        match (&self.fibers, e) {
            (Fibers::Finite(ff), Elem::Fin(i)) => {
                let table = &ff.restriction[f];
                table
                    .get(*i)
                    .map(|&v| Elem::Fin(v as usize))
                    .ok_or_else(|| format!("element {i} out of range for P({f})"))
            }
            (Fibers::Fuzzy(_), Elem::Fuz(r)) => {
                let cb = self.concrete.as_ref().ok_or("fuzzy backend without concrete base")?;
                let graph = &cb.functions[f];
                if r.len() != cb.carriers[self.base.cod(f)] {
                    return Err("element has the wrong carrier length".to_string());
                }
                Ok(Elem::Fuz(graph.iter().map(|&i| r[i].clone()).collect()))
            }
            _ => Err("element kind does not match the fiber backend".to_string()),
        }
    }

    /// Apply a connective in the fiber over `c`.
    pub fn op(&self, c: Obj, name: &str, args: &[&Elem]) -> Result<Elem, String> {
        match &self.fibers {
            Fibers::Finite(ff) => {
                let fiber = &ff.fibers[c];
                let idx: Option<Vec<usize>> = args.iter().map(|e| e.as_fin()).collect();
                let idx = idx.ok_or("finite fiber expects index elements")?;
                fiber
                    .op(name, &idx)
                    .map(Elem::Fin)
                    .ok_or_else(|| format!("no connective `{name}`/{} in fiber", args.len()))
            }
            Fibers::Fuzzy(fz) => {
                let cb = self.concrete.as_ref().ok_or("fuzzy backend without concrete base")?;
                let n = cb.carriers[c];
                let vals: Option<Vec<&[Rat]>> = args.iter().map(|e| e.as_fuz()).collect();
                let vals = vals.ok_or("fuzzy fiber expects rational-vector elements")?;
                if vals.iter().any(|v| v.len() != n) {
                    return Err("element has the wrong carrier length".to_string());
                }
                let out: Vec<Rat> = match (name, vals.as_slice()) {
                    ("e", []) => vec![Rat::one(); n],
                    ("tensor", [x, y]) => {
                        (0..n).map(|i| fz.tnorm.apply(&x[i], &y[i])).collect()
                    }
                    ("min", [x, y]) => (0..n)
                        .map(|i| if x[i] <= y[i] { x[i].clone() } else { y[i].clone() })
                        .collect(),
                    ("max", [x, y]) => (0..n)
                        .map(|i| if x[i] >= y[i] { x[i].clone() } else { y[i].clone() })
                        .collect(),
                    _ => {
                        return Err(format!(
                            "no connective `{name}`/{} in fuzzy fibers",
                            args.len()
                        ))
                    }
                };
                Ok(Elem::Fuz(out))
            }
        }
    }

    /// The monoid unit of the fiber over `c`.
    pub fn e_elem(&self, c: Obj) -> Result<Elem, String> {
        self.op(c, "e", &[])
    }

    /// Fiber order.
    pub fn leq(&self, c: Obj, a: &Elem, b: &Elem) -> Result<bool, String> {
        match (&self.fibers, a, b) {
            (Fibers::Finite(ff), Elem::Fin(i), Elem::Fin(j)) => Ok(ff.fibers[c].leq(*i, *j)),
            (Fibers::Fuzzy(_), Elem::Fuz(x), Elem::Fuz(y)) => {
                if x.len() != y.len() {
                    return Err("elements have different carrier lengths".to_string());
                }
                Ok(x.iter().zip(y).all(|(p, q)| p <= q))
            }
            _ => Err("element kind does not match the fiber backend".to_string()),
        }
    }

    /// Apply the quantifier map `Ω_{b,c} : P(b×c) → P(b)`.
    pub fn quant(&self, name: &str, b: Obj, c: Obj, r: &Elem) -> Result<Elem, String> {
        match (&self.fibers, r) {
            (Fibers::Finite(ff), Elem::Fin(i)) => {
                let table = ff
                    .quantifiers
                    .get(name)
                    .and_then(|m| m.get(&(b, c)))
                    .ok_or_else(|| {
                        format!("no quantifier map {name} at ({}, {})", b, c)
                    })?;
                table
                    .get(*i)
                    .map(|&v| Elem::Fin(v as usize))
                    .ok_or_else(|| format!("element {i} out of range for {name}"))
            }
            (Fibers::Fuzzy(fz), Elem::Fuz(r)) => {
                if !fz.quantifiers.contains(name) {
                    return Err(format!("no quantifier `{name}` in fuzzy fibers"));
                }
                let cb = self.concrete.as_ref().ok_or("fuzzy backend without concrete base")?;
                self.base
                    .product(b, c)
                    .ok_or_else(|| format!("product ({b}, {c}) is not designated"))?;
                let (nb, nc) = (cb.carriers[b], cb.carriers[c]);
                if r.len() != nb * nc {
                    return Err("element has the wrong carrier length".to_string());
                }
                let out: Vec<Rat> = (0..nb)
                    .map(|a| {
                        let row = &r[a * nc..(a + 1) * nc];
                        match name {
                            "forall" => row
                                .iter()
                                .cloned()
                                .fold(Rat::one(), |acc, v| if v < acc { v } else { acc }),
                            "exists" => row
                                .iter()
                                .cloned()
                                .fold(Rat::zero(), |acc, v| if v > acc { v } else { acc }),
                            // Ω^⊙ over a finite fiber collapses to the
                            // full finite ⊗-product by monotonicity.
                            _ => row.iter().fold(Rat::one(), |acc, v| fz.tnorm.apply(&acc, v)),
                        }
                    })
                    .collect();
                Ok(Elem::Fuz(out))
            }
            _ => Err("element kind does not match the fiber backend".to_string()),
        }
    }

    /// The designated equality element `Eq_c ∈ P(c×c)`.
    pub fn eq_elem(&self, c: Obj) -> Result<Elem, String> {
        match &self.fibers {
            Fibers::Finite(ff) => ff
                .eq
                .get(&c)
                .map(|&v| Elem::Fin(v as usize))
                .ok_or_else(|| format!("no Eq at object {c}")),
            Fibers::Fuzzy(_) => {
                let cb = self.concrete.as_ref().ok_or("fuzzy backend without concrete base")?;
                self.base
                    .product(c, c)
                    .ok_or_else(|| format!("product ({c}, {c}) is not designated"))?;
                let n = cb.carriers[c];
                let mut out = vec![Rat::zero(); n * n];
                for i in 0..n {
                    out[i * n + i] = Rat::one();
                }
                Ok(Elem::Fuz(out))
            }
        }
    }

    /// Quantifier symbols available in this prop-category.
    pub fn quantifier_names(&self) -> Vec<String> {
        match &self.fibers {
            Fibers::Finite(ff) => ff.quantifiers.keys().cloned().collect(),
            Fibers::Fuzzy(fz) => fz.quantifiers.iter().cloned().collect(),
        }
    }

    /// Human-readable rendering of a fiber element.
    pub fn elem_name(&self, c: Obj, e: &Elem) -> String {
        match (&self.fibers, e) {
            (Fibers::Finite(ff), Elem::Fin(i)) => ff.fibers[c]
                .elem_names
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("#{i}")),
            (_, Elem::Fuz(v)) => {
                let body: Vec<String> = v.iter().map(|r| r.to_string()).collect();
                format!("[{}]", body.join(" "))
            }
            _ => "?".to_string(),
        }
    }

    /// All elements of the fiber over `c` for finite fibers, or the
    /// probe set for symbolic ones (with a flag saying which).
    pub fn fiber_elements(&self, c: Obj) -> (Vec<Elem>, bool) {
        match &self.fibers {
            Fibers::Finite(ff) => (
                (0..ff.fibers[c].len()).map(Elem::Fin).collect(),
                true,
            ),
            Fibers::Fuzzy(fz) => (
                fz.probes[c].iter().cloned().map(Elem::Fuz).collect(),
                false,
            ),
        }
    }
}
