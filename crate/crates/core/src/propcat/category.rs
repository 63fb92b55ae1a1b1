//! Finite categories with designated finite products.
//!
//! Objects and morphisms are dense indices into tables, so every
//! structural question (composition, hom-sets, products, pairing) is
//! a lookup.  Designated product data carries an explicit pairing
//! table, so the universal property is witnessed rather than
//! searched.  n-ary products are the left fold of the designated
//! binary product seeded with the terminal object, and
//! change-of-product isomorphisms are computed from projections and
//! pairing on demand — never stored.

use std::collections::{BTreeMap, HashMap};

/// Index of an object in a [`FinCategory`].
pub type Obj = usize;
/// Index of a morphism in a [`FinCategory`].
pub type Mor = usize;

/// A morphism entry: display name plus endpoint objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorData {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// Designated binary product of a pair of objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductData {
    pub obj: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

/// An n-ary designated product: the folded object and one projection
/// per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaryProduct {
    pub obj: Obj,
    pub projections: Vec<Mor>,
}

/// A finite category with composition, identity, terminal and
/// designated-product tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorData>,
    /// `(g, f) ↦ g∘f`, defined exactly when `cod f = dom g`.
    pub comp: HashMap<(Mor, Mor), Mor>,
    /// Identity morphism per object.
    pub identities: Vec<Mor>,
    /// Designated terminal object.
    pub terminal: Obj,
    /// Designated binary products `(b, c) ↦ (b×c, π₁, π₂)`.
    pub products: BTreeMap<(Obj, Obj), ProductData>,
    /// Designated pairing `(f: a→b, g: a→c) ↦ ⟨f,g⟩ : a → b×c`.
    pub pairing: HashMap<(Mor, Mor), Mor>,
    hom_index: HashMap<(Obj, Obj), Vec<Mor>>,
}

impl FinCategory {
    /// Assemble a category from its tables; the hom-set index is
    /// derived.  No axioms are verified here — that is the job of the
    /// prop-category verifier.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<MorData>,
        comp: HashMap<(Mor, Mor), Mor>,
        identities: Vec<Mor>,
        terminal: Obj,
        products: BTreeMap<(Obj, Obj), ProductData>,
        pairing: HashMap<(Mor, Mor), Mor>,
    ) -> Self {
        let mut hom_index: HashMap<(Obj, Obj), Vec<Mor>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            hom_index.entry((m.dom, m.cod)).or_default().push(i);
        }
        FinCategory {
            objects,
            morphisms,
            comp,
            identities,
            terminal,
            products,
            pairing,
            hom_index,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.morphisms[f].cod
    }

    pub fn id(&self, c: Obj) -> Mor {
        self.identities[c]
    }

    /// `g∘f` when composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.comp.get(&(g, f)).copied()
    }

    /// Compose a chain right-to-left: `compose_chain([h,g,f]) = h∘g∘f`.
    pub fn compose_chain(&self, chain: &[Mor]) -> Option<Mor> {
        let (&last, rest) = chain.split_last()?;
        let mut acc = last;
        for &m in rest.iter().rev() {
            acc = self.compose(m, acc)?;
        }
        Some(acc)
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        self.hom_index
            .get(&(a, b))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// The unique morphism into the terminal object, when the tables
    /// indeed contain exactly one.
    pub fn bang(&self, c: Obj) -> Option<Mor> {
        match self.hom(c, self.terminal) {
            [unique] => Some(*unique),
            _ => None,
        }
    }

    pub fn product(&self, b: Obj, c: Obj) -> Option<ProductData> {
        self.products.get(&(b, c)).copied()
    }

    pub fn pair(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.pairing.get(&(f, g)).copied()
    }

    /// Left-folded designated product of a list of objects, seeded
    /// with the terminal object: `⟦⟧ = 1`, `⟦c̄, c⟧ = ⟦c̄⟧ × c`.
    /// Projections target the individual factors.
    pub fn nary_product(&self, factors: &[Obj]) -> Option<NaryProduct> {
        let mut acc = NaryProduct {
            obj: self.terminal,
            projections: vec![],
        };
        for &c in factors {
            let prod = self.product(acc.obj, c)?;
            let mut projections = Vec::with_capacity(acc.projections.len() + 1);
            for &p in &acc.projections {
                projections.push(self.compose(p, prod.p1)?);
            }
            projections.push(prod.p2);
            acc = NaryProduct {
                obj: prod.obj,
                projections,
            };
        }
        Some(acc)
    }

    /// Tupling into the left-folded product: `⟨f₁,…,fₙ⟩ : a → ⟦c̄⟧`
    /// where `fᵢ : a → cᵢ`.  The empty tuple is the unique map to the
    /// terminal object.
    pub fn nary_tuple(&self, dom: Obj, components: &[Mor]) -> Option<Mor> {
        let mut acc = self.bang(dom)?;
        for &f in components {
            acc = self.pair(acc, f)?;
        }
        Some(acc)
    }

    /// Change-of-product morphism from an object `x` equipped with
    /// projections `px : x → cᵢ` onto the left-folded designated
    /// product of the same factors: the replayed pairing of `px`.
    /// When `x` is itself that designated product this computes the
    /// identity (in any category satisfying the product laws).
    pub fn change_of_product(&self, x: Obj, px: &[Mor]) -> Option<Mor> {
        self.nary_tuple(x, px)
    }

    /// The associativity isomorphism `a_{b,c,d} : b×(c×d) → (b×c)×d`
    /// computed from designated projections and pairing.
    pub fn assoc_iso(&self, b: Obj, c: Obj, d: Obj) -> Option<Mor> {
        let cd = self.product(c, d)?;
        let b_cd = self.product(b, cd.obj)?;
        let bc = self.product(b, c)?;
        let _bc_d = self.product(bc.obj, d)?;
        // Projections out of b×(c×d):
        let pb = b_cd.p1;
        let pc = self.compose(cd.p1, b_cd.p2)?;
        let pd = self.compose(cd.p2, b_cd.p2)?;
        // ⟨⟨π_b, π_c⟩, π_d⟩ into (b×c)×d.
        let inner = self.pair(pb, pc)?;
        self.pair(inner, pd)
    }

    /// Is `f` an isomorphism?  Searches the reverse hom-set for a
    /// two-sided inverse.
    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    /// The two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| {
                self.compose(g, f) == Some(self.id(a)) && self.compose(f, g) == Some(self.id(b))
            })
    }
}

/// Concrete realization of a word-built base category: every object
/// is a word of atoms with a cartesian-product carrier, and every
/// morphism is a function between carriers.  Carrier tuples are
/// indexed row-major, so the designated product's carrier index is
/// `i_b · |c| + i_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteBase {
    pub atom_names: Vec<String>,
    pub atom_sizes: Vec<usize>,
    /// Per object: its word of atom indices (empty = terminal).
    pub words: Vec<Vec<usize>>,
    /// Per object: carrier size (product of atom sizes).
    pub carriers: Vec<usize>,
    /// Per morphism: the function as an index map `dom → cod`.
    pub functions: Vec<Vec<usize>>,
    /// Lookup `(dom, cod, graph) → morphism`.
    fn_index: HashMap<(Obj, Obj, Vec<usize>), Mor>,
}

impl ConcreteBase {
    pub fn morphism_with_graph(&self, dom: Obj, cod: Obj, graph: &[usize]) -> Option<Mor> {
        self.fn_index.get(&(dom, cod, graph.to_vec())).copied()
    }

    /// Find the object realizing a given word of atoms.
    pub fn object_of_word(&self, word: &[usize]) -> Option<Obj> {
        self.words.iter().position(|w| w == word)
    }

    /// Find the atom object with the given name.
    pub fn atom_object(&self, name: &str) -> Option<Obj> {
        let atom = self.atom_names.iter().position(|n| n == name)?;
        self.object_of_word(&[atom])
    }
}

/// Build the bounded word category over the given atoms: objects are
/// all words of length ≤ `product_depth` (the empty word is the
/// terminal object), morphisms are all functions between the
/// corresponding cartesian-product carriers, and the designated
/// product of two words is their concatenation when within bound.
pub fn word_category(
    atoms: &[(String, usize)],
    product_depth: usize,
) -> (FinCategory, ConcreteBase) {
    assert!(product_depth >= 1, "product_depth must be at least 1");
    for (name, size) in atoms {
        assert!(*size >= 1, "atom `{name}` must be nonempty");
    }
    let atom_names: Vec<String> = atoms.iter().map(|(n, _)| n.clone()).collect();
    let atom_sizes: Vec<usize> = atoms.iter().map(|(_, s)| *s).collect();

    // Objects: words by length, then lexicographically.
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..product_depth {
        let mut next = vec![];
        for w in &frontier {
            for a in 0..atoms.len() {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let carriers: Vec<usize> = words
        .iter()
        .map(|w| w.iter().map(|&a| atom_sizes[a]).product())
        .collect();
    let word_name = |w: &[usize]| -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.iter()
                .map(|&a| atom_names[a].clone())
                .collect::<Vec<_>>()
                .join("*")
        }
    };
    let objects: Vec<String> = words.iter().map(|w| word_name(w)).collect();

    // Morphisms: all functions between carriers, ordered by
    // (dom, cod, graph).
    let mut morphisms: Vec<MorData> = vec![];
    let mut functions: Vec<Vec<usize>> = vec![];
    let mut fn_index: HashMap<(Obj, Obj, Vec<usize>), Mor> = HashMap::new();
    for dom in 0..words.len() {
        for cod in 0..words.len() {
            for graph in all_functions(carriers[dom], carriers[cod]) {
                let id = morphisms.len();
                let name = format!(
                    "{}->{}:{}",
                    objects[dom],
                    objects[cod],
                    graph
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                morphisms.push(MorData {
                    name,
                    dom,
                    cod,
                });
                fn_index.insert((dom, cod, graph.clone()), id);
                functions.push(graph);
            }
        }
    }

    // Identities.
    let identities: Vec<Mor> = (0..words.len())
        .map(|o| {
            let graph: Vec<usize> = (0..carriers[o]).collect();
            fn_index[&(o, o, graph)]
        })
        .collect();

    // Composition: function composition.
    let mut comp: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for f in 0..morphisms.len() {
        for &g in (0..words.len())
            .flat_map(|cod| {
                let key = (morphisms[f].cod, cod);
                hom_of(&morphisms, key)
            })
            .collect::<Vec<_>>()
            .iter()
        {
            let graph: Vec<usize> = functions[f].iter().map(|&i| functions[g][i]).collect();
            let gf = fn_index[&(morphisms[f].dom, morphisms[g].cod, graph)];
            comp.insert((g, f), gf);
        }
    }

    // Designated products: word concatenation within bound.
    let word_index: HashMap<Vec<usize>, Obj> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let mut products: BTreeMap<(Obj, Obj), ProductData> = BTreeMap::new();
    for b in 0..words.len() {
        for c in 0..words.len() {
            let mut w = words[b].clone();
            w.extend(&words[c]);
            if w.len() > product_depth {
                continue;
            }
            let Some(&obj) = word_index.get(&w) else { continue };
            let (nb, nc) = (carriers[b], carriers[c]);
            let p1_graph: Vec<usize> = (0..nb * nc).map(|i| i / nc).collect();
            let p2_graph: Vec<usize> = (0..nb * nc).map(|i| i % nc).collect();
            let p1 = fn_index[&(obj, b, p1_graph)];
            let p2 = fn_index[&(obj, c, p2_graph)];
            products.insert((b, c), ProductData { obj, p1, p2 });
        }
    }

    // Pairing tables for every designated product.
    let mut pairing: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for (&(b, c), prod) in &products {
        let nc = carriers[c];
        for a in 0..words.len() {
            for f in hom_of(&morphisms, (a, b)) {
                for g in hom_of(&morphisms, (a, c)) {
                    let graph: Vec<usize> = functions[f]
                        .iter()
                        .zip(&functions[g])
                        .map(|(&i, &j)| i * nc + j)
                        .collect();
                    let fg = fn_index[&(a, prod.obj, graph)];
                    pairing.insert((f, g), fg);
                }
            }
        }
    }

    let category = FinCategory::new(
        objects,
        morphisms,
        comp,
        identities,
        terminal_of(&words),
        products,
        pairing,
    );
    let concrete = ConcreteBase {
        atom_names,
        atom_sizes,
        words,
        carriers,
        functions,
        fn_index,
    };
    (category, concrete)
}

fn terminal_of(words: &[Vec<usize>]) -> Obj {
    words
        .iter()
        .position(|w| w.is_empty())
        .expect("word list contains the empty word")
}

/// All functions from an `n`-element set to an `m`-element set, in
/// lexicographic order of their graphs.
fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * m);
        for g in &out {
            for v in 0..m {
                let mut g2 = g.clone();
                g2.push(v);
                next.push(g2);
            }
        }
        out = next;
    }
    out
}

fn hom_of(morphisms: &[MorData], key: (Obj, Obj)) -> Vec<Mor> {
    morphisms
        .iter()
        .enumerate()
        .filter(|(_, m)| (m.dom, m.cod) == key)
        .map(|(i, _)| i)
        .collect()
}
