//! Fibers: the poset/algebra assigned to each base object.
//!
//! Finite fibers are explicit tables over dense element indices.
//! Symbolic (fuzzy) fibers are functions from a finite carrier to
//! exact rationals in `[0,1]`; they cannot be enumerated, so checks
//! over them run on probe sets.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::Rat;

/// An operation table over a finite fiber: `arity`-tuples of element
/// indices, little-endian (`index = a₀ + n·a₁ + n²·a₂ + …`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub arity: usize,
    pub table: Vec<u32>,
}

impl OpTable {
    pub fn constant(v: u32) -> OpTable {
        OpTable {
            arity: 0,
            table: vec![v],
        }
    }

    pub fn unary(table: Vec<u32>) -> OpTable {
        OpTable { arity: 1, table }
    }

    /// Build a binary table from a function, over `n` elements.
    pub fn binary_from(n: usize, f: impl Fn(usize, usize) -> usize) -> OpTable {
        let mut table = Vec::with_capacity(n * n);
        for b in 0..n {
            for a in 0..n {
                table.push(f(a, b) as u32);
            }
        }
        OpTable { arity: 2, table }
    }

    /// Apply to argument indices over an `n`-element carrier.
    pub fn apply(&self, n: usize, args: &[usize]) -> Option<usize> {
        if args.len() != self.arity {
            return None;
        }
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &a in args {
            if a >= n {
                return None;
            }
            idx += a * stride;
            stride *= n;
        }
        self.table.get(idx).map(|&v| v as usize)
    }
}

/// An explicit finite fiber: named elements, a decidable order, and
/// one closed operation table per connective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFiber {
    pub elem_names: Vec<String>,
    /// Row-major `n×n` order matrix: `leq[a·n + b]` iff `a ≤ b`.
    pub leq: Vec<bool>,
    pub ops: BTreeMap<String, OpTable>,
}

impl FiniteFiber {
    pub fn len(&self) -> usize {
        self.elem_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elem_names.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn op(&self, name: &str, args: &[usize]) -> Option<usize> {
        self.ops.get(name)?.apply(self.len(), args)
    }
}

/// A finite lattice of truth values with connective tables, used to
/// generate lattice-valued fibers pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueLattice {
    pub name: String,
    pub elems: Vec<String>,
    /// Row-major order matrix as in [`FiniteFiber`].
    pub leq: Vec<bool>,
    pub ops: BTreeMap<String, OpTable>,
}

impl ValueLattice {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    /// Greatest lower bound computed from the order matrix.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq(x, a) && self.leq(x, b))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&x| self.leq(x, m)))
    }

    /// Least upper bound computed from the order matrix.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&x| self.leq(a, x) && self.leq(b, x))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&j| upper.iter().all(|&x| self.leq(j, x)))
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|x| self.leq(x, t)))
    }

    pub fn bot(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.leq(b, x)))
    }

    /// Check the partial-order and lattice laws, and that every
    /// operation table is total and closed.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.len();
        if n == 0 {
            return Err("value lattice is empty".to_string());
        }
        if self.leq.len() != n * n {
            return Err("order matrix has the wrong shape".to_string());
        }
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(format!("order not reflexive at {}", self.elems[a]));
            }
            for b in 0..n {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(format!(
                        "order not antisymmetric at {}, {}",
                        self.elems[a], self.elems[b]
                    ));
                }
                for c in 0..n {
                    if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                        return Err(format!(
                            "order not transitive at {}, {}, {}",
                            self.elems[a], self.elems[b], self.elems[c]
                        ));
                    }
                }
                if self.meet(a, b).is_none() {
                    return Err(format!(
                        "no meet of {} and {}",
                        self.elems[a], self.elems[b]
                    ));
                }
                if self.join(a, b).is_none() {
                    return Err(format!(
                        "no join of {} and {}",
                        self.elems[a], self.elems[b]
                    ));
                }
            }
        }
        for (op, t) in &self.ops {
            let expected = n.pow(t.arity as u32);
            if t.table.len() != expected {
                return Err(format!("operation `{op}` table is not total"));
            }
            if t.table.iter().any(|&v| v as usize >= n) {
                return Err(format!("operation `{op}` is not closed"));
            }
        }
        Ok(())
    }

    /// The two-element Boolean lattice with `and`, `or`, `not`,
    /// `tensor` = `and` and `e` = ⊤.
    pub fn bool2() -> ValueLattice {
        let mut ops = BTreeMap::new();
        ops.insert("and".to_string(), OpTable::binary_from(2, |a, b| a & b));
        ops.insert("or".to_string(), OpTable::binary_from(2, |a, b| a | b));
        ops.insert("not".to_string(), OpTable::unary(vec![1, 0]));
        ops.insert("tensor".to_string(), OpTable::binary_from(2, |a, b| a & b));
        ops.insert("e".to_string(), OpTable::constant(1));
        ValueLattice {
            name: "bool2".to_string(),
            elems: vec!["0".to_string(), "1".to_string()],
            leq: vec![true, true, false, true],
            ops,
        }
    }

    /// The `n`-element Łukasiewicz chain `0, 1/(n-1), …, 1` with
    /// `min`, `max`, `tensor(x,y) = max{0, x+y-1}` and `e` = 1.
    pub fn lukasiewicz_chain(n: usize) -> ValueLattice {
        assert!(n >= 2, "a chain needs at least two elements");
        let elems: Vec<String> = (0..n)
            .map(|i| {
                if i == 0 {
                    "0".to_string()
                } else if i == n - 1 {
                    "1".to_string()
                } else {
                    format!("{}/{}", i, n - 1)
                }
            })
            .collect();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                leq[a * n + b] = true;
            }
        }
        let mut ops = BTreeMap::new();
        ops.insert("min".to_string(), OpTable::binary_from(n, usize::min));
        ops.insert("max".to_string(), OpTable::binary_from(n, usize::max));
        ops.insert(
            "tensor".to_string(),
            OpTable::binary_from(n, |a, b| (a + b).saturating_sub(n - 1)),
        );
        ops.insert("e".to_string(), OpTable::constant((n - 1) as u32));
        ValueLattice {
            name: format!("lukasiewicz{n}"),
            elems,
            leq,
            ops,
        }
    }
}

/// A T-norm on exact rationals in `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TNorm {
    Product,
    Lukasiewicz,
    Minimum,
}

impl TNorm {
    pub fn apply(&self, x: &Rat, y: &Rat) -> Rat {
        match self {
            TNorm::Product => x * y,
            TNorm::Lukasiewicz => {
                let s = x + y - Rat::one();
                if s < Rat::zero() {
                    Rat::zero()
                } else {
                    s
                }
            }
            TNorm::Minimum => {
                if x <= y {
                    x.clone()
                } else {
                    y.clone()
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TNorm::Product => "product",
            TNorm::Lukasiewicz => "lukasiewicz",
            TNorm::Minimum => "min",
        }
    }

    /// Verify the T-norm laws (associativity, commutativity, unit 1,
    /// monotonicity) on a finite probe set.
    pub fn validate_on(&self, probe: &[Rat]) -> Result<(), String> {
        let one = Rat::one();
        for x in probe {
            if self.apply(x, &one) != *x {
                return Err(format!("1 is not a unit at {x}"));
            }
            for y in probe {
                if self.apply(x, y) != self.apply(y, x) {
                    return Err(format!("not commutative at {x}, {y}"));
                }
                for z in probe {
                    if self.apply(&self.apply(x, y), z) != self.apply(x, &self.apply(y, z)) {
                        return Err(format!("not associative at {x}, {y}, {z}"));
                    }
                    if y <= z && self.apply(x, y) > self.apply(x, z) {
                        return Err(format!("not monotone at {x}: {y} ≤ {z}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A fiber element: an index into a finite fiber, or a function from
/// a carrier to exact rationals for symbolic fuzzy fibers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Elem {
    Fin(usize),
    Fuz(Vec<Rat>),
}

impl Elem {
    pub fn as_fin(&self) -> Option<usize> {
        match self {
            Elem::Fin(i) => Some(*i),
            Elem::Fuz(_) => None,
        }
    }

    pub fn as_fuz(&self) -> Option<&[Rat]> {
        match self {
            Elem::Fin(_) => None,
            Elem::Fuz(v) => Some(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn bool2_is_a_lattice() {
        ValueLattice::bool2().validate().unwrap();
    }

    #[test]
    fn lukasiewicz_chain_is_a_lattice_with_closed_tnorm() {
        let l = ValueLattice::lukasiewicz_chain(5);
        l.validate().unwrap();
        // ⊗ is closed on the chain by construction; spot-check the
        // clamp: 1/4 ⊗ 1/2 = 0, 3/4 ⊗ 3/4 = 1/2, 1 ⊗ x = x.
        let t = &l.ops["tensor"];
        assert_eq!(t.apply(5, &[1, 2]), Some(0));
        assert_eq!(t.apply(5, &[3, 3]), Some(2));
        for x in 0..5 {
            assert_eq!(t.apply(5, &[4, x]), Some(x));
        }
    }

    #[test]
    fn lukasiewicz_tnorm_point_values() {
        // 0.7 ⊗ 0.6 = 0.3 under max{0, x+y-1}.
        let t = TNorm::Lukasiewicz;
        assert_eq!(t.apply(&rat(7, 10), &rat(6, 10)), rat(3, 10));
        // Clamped at zero.
        assert_eq!(t.apply(&rat(1, 4), &rat(1, 2)), rat(0, 1));
    }

    #[test]
    fn tnorm_laws_on_probe() {
        let probe: Vec<Rat> = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
            .iter()
            .map(|&(n, d)| rat(n, d))
            .collect();
        TNorm::Product.validate_on(&probe).unwrap();
        TNorm::Lukasiewicz.validate_on(&probe).unwrap();
        TNorm::Minimum.validate_on(&probe).unwrap();
    }

    #[test]
    fn meet_join_top_bot() {
        let l = ValueLattice::lukasiewicz_chain(5);
        assert_eq!(l.meet(1, 3), Some(1));
        assert_eq!(l.join(1, 3), Some(3));
        assert_eq!(l.top(), Some(4));
        assert_eq!(l.bot(), Some(0));
    }
}
