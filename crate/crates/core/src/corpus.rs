//! Bundled example documents, and the constructions they describe.

use crate::fieldgalois::{galois_algebra, Fq, FqAlgebra};
use crate::fincat::{identity_functor, CategoryBuilder, FinCategory, FinGroup, FinGroupoid, Functor};
use crate::limits::LimitDiagram;
use crate::schema::{to_json, AlgebraDoc, CategoryDoc, DiagramDoc, FunctorDoc, PresheafDoc, RingDoc, TorsorDoc};
use crate::topos::{CartRing, FinLattice, Presheaf};
use crate::torsors::RightGRep;

/// `a ⇉ b`.
pub fn parallel_pair() -> FinCategory {
    CategoryBuilder::new()
        .object("a")
        .object("b")
        .arrow("ida", "a", "a")
        .arrow("idb", "b", "b")
        .identity("a", "ida")
        .identity("b", "idb")
        .arrow("f", "a", "b")
        .arrow("g", "a", "b")
        .build()
        .expect("parallel pair is a category")
}

fn group(name: &str) -> FinGroup {
    FinGroup::by_name(name).expect("bundled group names parse")
}

fn bgroup(name: &str) -> FinCategory {
    FinCategory::from_group(&group(name))
}

/// Every arrow of a one-object category to its identity.
fn collapse(g: &FinCategory) -> Functor {
    Functor { obj: vec![0], arr: vec![g.id(0); g.num_arrows()] }
}

fn f2() -> Fq {
    Fq::of_order(2).expect("F2")
}

/// The document each bundled file must equal, built from library constructors.
pub fn expected(name: &str) -> Option<String> {
    let cat = |c: FinCategory| Some(to_json(&CategoryDoc::from_category(&c)));
    let alg = |r: FqAlgebra| Some(to_json(&AlgebraDoc::from_algebra(&r)));
    let ring = |r: CartRing| Some(to_json(&RingDoc::from_ring(&r)));
    match name {
        "category/terminal" => cat(FinCategory::terminal()),
        "category/interval" => cat(FinCategory::interval()),
        "category/codiscrete2" => cat(FinCategory::codiscrete(2)),
        "category/walking_idempotent" => cat(FinCategory::walking_idempotent()),
        "category/walking_projection" => cat(FinCategory::walking_projection()),
        "category/parallel_pair" => cat(parallel_pair()),
        "category/bz2" => cat(bgroup("Z2")),
        "category/bz3" => cat(bgroup("Z3")),
        "category/bz4" => cat(bgroup("Z4")),
        "category/bs3" => cat(bgroup("S3")),
        "category/bz2_plus_1" => cat(bgroup("Z2").disjoint_union(&FinCategory::terminal())),
        "functor/bz2_identity" => {
            let g = bgroup("Z2");
            Some(to_json(&FunctorDoc::from_functor(&g, &g, &identity_functor(&g))))
        }
        "functor/bz2_collapse" => {
            let g = bgroup("Z2");
            Some(to_json(&FunctorDoc::from_functor(&g, &g, &collapse(&g))))
        }
        "diagram/product_bz2_bz3" => Some(to_json(&DiagramDoc::from_diagram(&LimitDiagram::Product {
            g: FinGroupoid::from_group(&group("Z2")),
            h: FinGroupoid::from_group(&group("Z3")),
        }))),
        "diagram/equalizer_bz2" => {
            let g = FinGroupoid::from_group(&group("Z2"));
            let (phi, psi) = (identity_functor(&g), collapse(&g));
            Some(to_json(&DiagramDoc::from_diagram(&LimitDiagram::Equalizer { h: g.clone(), g, phi, psi })))
        }
        "diagram/equalizer_bs3_z2" => {
            // sign map S3 → Z2 against the trivial map
            let s3 = group("S3");
            let z2 = group("Z2");
            let g = FinGroupoid::from_group(&s3);
            let h = FinGroupoid::from_group(&z2);
            let sign = |x: usize| if s3.element_order(x) == 2 { 1 } else { 0 };
            let phi = Functor { obj: vec![0], arr: g.arrows().map(sign).collect() };
            let psi = Functor { obj: vec![0], arr: vec![0; g.num_arrows()] };
            Some(to_json(&DiagramDoc::from_diagram(&LimitDiagram::Equalizer { g, h, phi, psi })))
        }
        "presheaf/parallel_pair" => {
            let c = parallel_pair();
            let p = Presheaf { sets: vec![1, 2], maps: vec![vec![0], vec![0, 1], vec![0], vec![1]] };
            Some(to_json(&PresheafDoc::from_presheaf(&c, &p)))
        }
        "ring/finset" => ring(CartRing::FinSet),
        "ring/presheaf_interval" => ring(CartRing::Presheaf(FinCategory::interval())),
        "ring/presheaf_walking_idempotent" => ring(CartRing::Presheaf(FinCategory::walking_idempotent())),
        "ring/lattice_chain2" => ring(CartRing::Lattice(FinLattice::chain2())),
        "torsor/regular_bz2" => {
            let g = FinGroupoid::from_group(&group("Z2"));
            Some(to_json(&TorsorDoc::from_rep(&RightGRep::regular(&g, 0))))
        }
        "algebra/f4" => alg(FqAlgebra::extension(&f2(), 2).ok()?),
        "algebra/f2_split" => alg(FqAlgebra::quotient(&f2(), &[0, 1, 1]).ok()?),
        "algebra/f2_dual_numbers" => alg(FqAlgebra::quotient(&f2(), &[0, 0, 1]).ok()?),
        "algebra/galois_z2" => {
            let r = galois_algebra(&group("Z2"), 1, &f2()).ok()?;
            Some(to_json(&AlgebraDoc::from_g_algebra(&r.rep)))
        }
        _ => None,
    }
}

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        /// `(name, json)` for every bundled document; names are paths under `corpus/` without `.json`.
        pub const FILES: &[(&str, &str)] = &[$(($name, include_str!(concat!("../corpus/", $name, ".json")))),*];
    };
}

bundle!(
    "category/terminal",
    "category/interval",
    "category/codiscrete2",
    "category/walking_idempotent",
    "category/walking_projection",
    "category/parallel_pair",
    "category/bz2",
    "category/bz3",
    "category/bz4",
    "category/bs3",
    "category/bz2_plus_1",
    "functor/bz2_identity",
    "functor/bz2_collapse",
    "diagram/product_bz2_bz3",
    "diagram/equalizer_bz2",
    "diagram/equalizer_bs3_z2",
    "presheaf/parallel_pair",
    "ring/finset",
    "ring/presheaf_interval",
    "ring/presheaf_walking_idempotent",
    "ring/lattice_chain2",
    "torsor/regular_bz2",
    "algebra/f4",
    "algebra/f2_split",
    "algebra/f2_dual_numbers",
    "algebra/galois_z2",
);

/// Every bundled name.
pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn get(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[ignore]
    fn regenerate() {
        let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
        for name in names() {
            let path = root.join(format!("{name}.json"));
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(path, expected(name).unwrap() + "\n").unwrap();
        }
    }

    #[test]
    fn every_file_validates_with_its_tag() {
        for (name, text) in FILES {
            let tag = crate::schema::validate(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(tag.split('/').next(), name.split('/').next(), "{name}");
        }
    }

    #[test]
    fn every_file_matches_its_construction() {
        for (name, text) in FILES {
            assert_eq!(text.trim_end(), expected(name).unwrap(), "{name} is stale");
        }
    }

    #[test]
    fn parsed_categories_equal_constructions() {
        use crate::schema::{parse, CategoryDoc};
        let c: CategoryDoc = parse(get("category/walking_projection").unwrap()).unwrap();
        assert_eq!(c.to_category().unwrap(), FinCategory::walking_projection());
        let c: CategoryDoc = parse(get("category/bs3").unwrap()).unwrap();
        assert_eq!(c.to_category().unwrap(), bgroup("S3"));
    }
}
