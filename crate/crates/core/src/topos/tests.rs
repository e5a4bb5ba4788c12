use super::*;
use crate::fincat::FinGroup;
use proptest::prelude::*;

fn bz2() -> FinCategory {
    FinCategory::from_group(&FinGroup::cyclic(2))
}

fn regular_z2() -> Presheaf {
    Presheaf { sets: vec![2], maps: vec![vec![0, 1], vec![1, 0]] }
}

fn parallel_pair() -> FinCategory {
    crate::fincat::CategoryBuilder::new()
        .object("a")
        .object("b")
        .arrow("ida", "a", "a")
        .arrow("idb", "b", "b")
        .identity("a", "ida")
        .identity("b", "idb")
        .arrow("f", "a", "b")
        .arrow("g", "a", "b")
        .build()
        .unwrap()
}

#[test]
fn finset_coproduct_images_are_disjoint() {
    let r = CartRing::FinSet;
    let (sum, inj) = r.coproduct(&[CartObject::Set(2), CartObject::Set(1)]).unwrap();
    assert_eq!(sum, CartObject::Set(3));
    assert_eq!(inj, vec![CartMap::Set(vec![0, 1]), CartMap::Set(vec![2])]);
    let (pb, _, _) = r.pullback(&CartObject::Set(2), &CartObject::Set(1), &inj[0], &inj[1]).unwrap();
    assert!(r.is_initial(&pb));
}

#[test]
fn presheaf_product_of_regular_reps() {
    let c = bz2();
    let r = CartRing::Presheaf(c.clone());
    let x = CartObject::Presheaf(regular_z2());
    let (p, p1, p2) = r.product(&x, &x).unwrap();
    let CartObject::Presheaf(ps) = &p else { panic!() };
    assert_eq!(ps.sets, vec![4]);
    ps.check(&c).unwrap();
    r.check_map(&p, &x, &p1).unwrap();
    r.check_map(&p, &x, &p2).unwrap();
}

#[test]
fn lattice_pullback_and_colimits() {
    let l = FinLattice::chain2();
    let r = CartRing::Lattice(l);
    let one = CartObject::Lattice(1);
    let (pb, _, _) = r.pullback(&one, &one, &CartMap::Lattice, &CartMap::Lattice).unwrap();
    assert_eq!(pb, one);
    let d = Diagram { shape: FinCategory::empty(), objects: vec![], maps: vec![] };
    assert!(r.is_initial(&r.finite_colimit(&d).unwrap().object));
}

#[test]
fn empty_colimit_is_initial() {
    let d = Diagram { shape: FinCategory::empty(), objects: vec![], maps: vec![] };
    assert_eq!(CartRing::FinSet.finite_colimit(&d).unwrap().object, CartObject::Set(0));
}

#[test]
fn coequalizer_of_identity_and_swap() {
    // parallel pair a ⇉ b as a diagram shape
    let shape = parallel_pair();
    let mut objects = vec![CartObject::Set(0); 2];
    let mut maps = vec![CartMap::Set(vec![]); shape.num_arrows()];
    objects[shape.obj_by_name("a").unwrap()] = CartObject::Set(2);
    objects[shape.obj_by_name("b").unwrap()] = CartObject::Set(2);
    for o in shape.objects() {
        maps[shape.id(o)] = CartMap::Set(vec![0, 1]);
    }
    maps[shape.arr_by_name("f").unwrap()] = CartMap::Set(vec![0, 1]);
    maps[shape.arr_by_name("g").unwrap()] = CartMap::Set(vec![1, 0]);
    let c = CartRing::FinSet.finite_colimit(&Diagram { shape, objects, maps }).unwrap();
    assert_eq!(c.object, CartObject::Set(1));
}

#[test]
fn colimit_of_regular_rep_is_a_point() {
    for g in [FinGroup::cyclic(3), FinGroup::symmetric(3)] {
        let shape = FinCategory::from_group(&g).opposite();
        let n = g.order();
        let maps = (0..n).map(|h| CartMap::Set((0..n).map(|x| g.mul(x, h)).collect())).collect();
        let d = Diagram { shape, objects: vec![CartObject::Set(n)], maps };
        assert_eq!(CartRing::FinSet.finite_colimit(&d).unwrap().object, CartObject::Set(1));
    }
}

#[test]
fn presheaf_colimit_is_pointwise() {
    let c = bz2();
    let r = CartRing::Presheaf(c);
    let x = CartObject::Presheaf(regular_z2());
    // coequalizer of identity and the (natural) swap on the regular rep
    let shape = parallel_pair();
    let mut maps = vec![CartMap::Presheaf(vec![vec![0, 1]]); shape.num_arrows()];
    maps[shape.arr_by_name("g").unwrap()] = CartMap::Presheaf(vec![vec![1, 0]]);
    let col = r.finite_colimit(&Diagram { shape, objects: vec![x.clone(), x], maps }).unwrap();
    let CartObject::Presheaf(p) = col.object else { panic!() };
    assert_eq!(p.sets, vec![1]);
}

#[test]
fn goodness_of_instances() {
    let r = CartRing::FinSet.is_good(3);
    assert!(r.good());
    assert_eq!(r.scope, Scope::Bounded(3));

    let l = CartRing::Lattice(FinLattice::chain2());
    let r = l.is_good(0);
    assert!(!r.disjoint);
    assert!(r.stable);
    let w = r.disjoint_counterexample.unwrap();
    assert_eq!((w.left.clone(), w.right.clone()), (CartObject::Lattice(1), CartObject::Lattice(1)));
    assert!(replay_disjointness(&l, &w).unwrap());

    // the one-element lattice is degenerate but good
    assert!(CartRing::Lattice(FinLattice::chain(1)).is_good(0).good());

    let m = CartRing::Presheaf(FinCategory::walking_idempotent());
    let r = m.is_good(2);
    assert!(r.good() && r.structural);
}

#[test]
fn coproduct_component_iso_examples() {
    let l = CartRing::Lattice(FinLattice::chain2());
    let arrows = vec![
        (CartObject::Lattice(0), CartObject::Lattice(1), CartMap::Lattice),
        (CartObject::Lattice(1), CartObject::Lattice(1), CartMap::Lattice),
    ];
    assert!(!l.coproduct_component_iso(&arrows).unwrap());

    let s = CartRing::FinSet;
    let arrows = vec![
        (CartObject::Set(2), CartObject::Set(2), CartMap::Set(vec![1, 0])),
        (CartObject::Set(1), CartObject::Set(1), CartMap::Set(vec![0])),
    ];
    assert!(s.coproduct_component_iso(&arrows).unwrap());
}

#[test]
fn mixed_instances_are_rejected() {
    let r = CartRing::FinSet;
    assert!(matches!(r.product(&CartObject::Set(1), &CartObject::Lattice(0)), Err(Error::MixedInstance)));
}

proptest! {
    #[test]
    fn set_pullback_counts(f in proptest::collection::vec(0usize..3, 0..5), g in proptest::collection::vec(0usize..3, 0..5)) {
        let r = CartRing::FinSet;
        let (pb, _, _) = r.pullback(&CartObject::Set(f.len()), &CartObject::Set(g.len()), &CartMap::Set(f.clone()), &CartMap::Set(g.clone())).unwrap();
        let expected: usize = (0..3).map(|c| f.iter().filter(|&&x| x == c).count() * g.iter().filter(|&&x| x == c).count()).sum();
        prop_assert_eq!(pb, CartObject::Set(expected));
    }

    #[test]
    fn lattice_product_distributes_over_coproduct(a in 0usize..4, b in 0usize..4, c in 0usize..4) {
        let l = FinLattice::chain(4);
        let r = CartRing::Lattice(l.clone());
        let (s, _) = r.coproduct(&[CartObject::Lattice(b), CartObject::Lattice(c)]).unwrap();
        let CartObject::Lattice(s) = s else { unreachable!() };
        prop_assert_eq!(l.meet(a, s), l.join(l.meet(a, b), l.meet(a, c)));
    }
}
