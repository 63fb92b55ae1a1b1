//! Regenerates the `.morphism` files in `fixtures/` from the `.pc`
//! files next to them.  Run from the workspace root:
//!
//! ```text
//! cargo run -p fibra-cli --example gen_fixtures
//! ```

use std::path::{Path, PathBuf};
use std::sync::Arc;

use fibra::fibered::{factorize, pointwise_hom_morphism, transport_structure, PropMorphism};
use fibra::propcat::{Elem, FinPropCategory};
use fibra::semantics::Structure;
use fibra_cli::formats::{load_pc, print_morphism, print_pc_explicit, print_structure};
use fibra_cli::formats::load_theory;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .canonicalize()
        .expect("fixtures directory exists")
}

fn pc(dir: &Path, file: &str) -> Arc<FinPropCategory> {
    load_pc(&dir.join(file), None).expect("fixture prop-category loads")
}

/// The automorphism of a powerset host conjugating everything by the
/// per-object coordinate flip (on carriers of size 2^k, index `i`
/// maps to `carrier - 1 - i`).
fn swap_automorphism(host: &Arc<FinPropCategory>) -> PropMorphism {
    let concrete = host.concrete.as_ref().expect("builtin hosts are concrete");
    let ff = host.finite().expect("powerset fibers are tables");
    let swaps: Vec<usize> = (0..host.base.object_count())
        .map(|o| {
            let n = concrete.carriers[o];
            let graph: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
            concrete
                .morphism_with_graph(o, o, &graph)
                .expect("the flip is a function of the base")
        })
        .collect();
    let mmap: Vec<usize> = (0..host.base.morphism_count())
        .map(|m| {
            let d = host.base.dom(m);
            let c = host.base.cod(m);
            host.base
                .compose_chain(&[swaps[c], m, swaps[d]])
                .expect("conjugation composes")
        })
        .collect();
    let pmap: Vec<Vec<u32>> = (0..host.base.object_count())
        .map(|o| ff.restriction[swaps[o]].clone())
        .collect();
    PropMorphism {
        name: "swap_pow".to_string(),
        source: Arc::clone(host),
        target: Arc::clone(host),
        omap: (0..host.base.object_count()).collect(),
        mmap,
        pmap,
    }
}

fn main() {
    let dir = fixtures_dir();
    let pow = pc(&dir, "pow.pc");
    let l5 = pc(&dir, "l5.pc");
    let l2 = pc(&dir, "l2.pc");
    let l5s = pc(&dir, "l5s.pc");
    let l2s = pc(&dir, "l2s.pc");
    let g5 = pc(&dir, "g5.pc");
    let g3 = pc(&dir, "g3.pc");
    let g2 = pc(&dir, "g2.pc");
    let g5s = pc(&dir, "g5s.pc");
    let g2s = pc(&dir, "g2s.pc");

    let mut id_pow = PropMorphism::identity(&pow).unwrap();
    id_pow.name = "id_pow".to_string();
    let mut id_l5 = PropMorphism::identity(&l5).unwrap();
    id_l5.name = "id_l5".to_string();
    let mut id_l5s = PropMorphism::identity(&l5s).unwrap();
    id_l5s.name = "id_l5s".to_string();
    let mut id_g5 = PropMorphism::identity(&g5).unwrap();
    id_g5.name = "id_g5".to_string();

    let l5_to_l2 = pointwise_hom_morphism("l5_to_l2", &l5, &l2, &[0, 0, 0, 0, 1]).unwrap();
    let l5s_to_l2s = pointwise_hom_morphism("l5s_to_l2s", &l5s, &l2s, &[0, 0, 0, 0, 1]).unwrap();
    let g5_to_g3 = pointwise_hom_morphism("g5_to_g3", &g5, &g3, &[0, 0, 1, 1, 2]).unwrap();
    let g3_to_g2 = pointwise_hom_morphism("g3_to_g2", &g3, &g2, &[0, 0, 1]).unwrap();
    let g5_to_g2 = pointwise_hom_morphism("g5_to_g2", &g5, &g2, &[0, 0, 0, 0, 1]).unwrap();
    let mut g5_comp = g5_to_g3.then(&g3_to_g2).unwrap();
    g5_comp.name = "g5_comp".to_string();
    let g5s_to_g2s = pointwise_hom_morphism("g5s_to_g2s", &g5s, &g2s, &[0, 0, 0, 0, 1]).unwrap();
    let swap = swap_automorphism(&pow);

    let files: Vec<(&str, &PropMorphism, &str, &str)> = vec![
        ("id_pow.morphism", &id_pow, "pow.pc", "pow.pc"),
        ("id_l5.morphism", &id_l5, "l5.pc", "l5.pc"),
        ("id_l5s.morphism", &id_l5s, "l5s.pc", "l5s.pc"),
        ("id_g5.morphism", &id_g5, "g5.pc", "g5.pc"),
        ("l5_to_l2.morphism", &l5_to_l2, "l5.pc", "l2.pc"),
        ("l5s_to_l2s.morphism", &l5s_to_l2s, "l5s.pc", "l2s.pc"),
        ("g5_to_g3.morphism", &g5_to_g3, "g5.pc", "g3.pc"),
        ("g3_to_g2.morphism", &g3_to_g2, "g3.pc", "g2.pc"),
        ("g5_to_g2.morphism", &g5_to_g2, "g5.pc", "g2.pc"),
        ("g5_comp.morphism", &g5_comp, "g5.pc", "g2.pc"),
        ("g5s_to_g2s.morphism", &g5s_to_g2s, "g5s.pc", "g2s.pc"),
        ("swap_pow.morphism", &swap, "pow.pc", "pow.pc"),
    ];
    for (file, m, src, tgt) in files {
        std::fs::write(dir.join(file), print_morphism(m, src, tgt)).expect("write fixture");
        println!("wrote {file}");
    }

    // The image factorization of the singleton-atom collapse gives a
    // genuine sub-prop-category inclusion, plus a submodel/ambient
    // pair related by transport along it.
    let fac = factorize(&l5s_to_l2s).expect("the collapse factorizes");
    std::fs::write(
        dir.join("im_l5s.pc"),
        print_pc_explicit(&fac.image).expect("image fibers are tables"),
    )
    .expect("write fixture");
    println!("wrote im_l5s.pc");
    std::fs::write(
        dir.join("incl_l5s.morphism"),
        print_morphism(&fac.inclusion, "im_l5s.pc", "l2s.pc"),
    )
    .expect("write fixture");
    println!("wrote incl_l5s.morphism");

    let theory = load_theory(&dir.join("involution.theory")).expect("theory loads");
    let by_name = |host: &Arc<FinPropCategory>, name: &str| {
        host.base
            .morphisms
            .iter()
            .position(|m| m.name == name)
            .expect("named base morphism exists")
    };
    let obj_a = fac
        .image
        .base
        .objects
        .iter()
        .position(|o| o == "A")
        .expect("image keeps the atom object");
    let sub = Structure {
        name: "sub".to_string(),
        host: Arc::clone(&fac.image),
        signature: theory.signature.clone(),
        sorts: [("s".to_string(), obj_a)].into(),
        functions: [
            ("f".to_string(), by_name(&fac.image, "A->A:0")),
            ("c".to_string(), by_name(&fac.image, "1->A:0")),
        ]
        .into(),
        relations: [
            ("R".to_string(), Elem::Fin(1)),
            ("R2".to_string(), Elem::Fin(0)),
        ]
        .into(),
    };
    sub.validate().expect("the submodel is well-formed");
    let ambient = transport_structure(&fac.inclusion, &sub).expect("transport succeeds");
    std::fs::write(
        dir.join("sub.structure"),
        print_structure(&sub, "im_l5s.pc", "involution.theory"),
    )
    .expect("write fixture");
    println!("wrote sub.structure");
    std::fs::write(
        dir.join("ambient.structure"),
        print_structure(&ambient, "l2s.pc", "involution.theory"),
    )
    .expect("write fixture");
    println!("wrote ambient.structure");
}
