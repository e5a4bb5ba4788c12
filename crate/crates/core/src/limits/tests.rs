use super::*;
use crate::fincat::{equivalence_check, FinGroup, DEFAULT_FUNCTOR_BUDGET as B};

fn bg(g: &FinGroup) -> FinGroupoid {
    FinGroupoid::from_group(g)
}

fn trivial_functor(dom: &FinCategory, cod: &FinCategory, o: Obj) -> Functor {
    Functor { obj: vec![o; dom.num_objects()], arr: vec![cod.id(o); dom.num_arrows()] }
}

fn id_f(c: &FinCategory) -> Functor {
    crate::fincat::identity_functor(c)
}

#[test]
fn product_with_terminal_and_counts() {
    let g = bg(&FinGroup::symmetric(3));
    let one = FinCategory::terminal().into_groupoid().unwrap();
    let (p, _, _) = product(&g, &one);
    assert!(equivalence_check(&p, &g, B).unwrap().is_some());
    let h = bg(&FinGroup::cyclic(4));
    assert_eq!(product(&g, &h).0.num_arrows(), 24);
}

#[test]
fn product_crt() {
    let (p, _, _) = product(&bg(&FinGroup::cyclic(2)), &bg(&FinGroup::cyclic(3)));
    let z6 = FinCategory::from_group(&FinGroup::cyclic(6));
    assert!(equivalence_check(&p, &z6, B).unwrap().is_some());
}

#[test]
fn equalizer_of_identities_is_inertia() {
    for g in [FinGroup::symmetric(3), FinGroup::cyclic(4), FinGroup::quaternion()] {
        let b = bg(&g);
        let e = equalizer(&b, &b, &id_f(&b), &id_f(&b));
        assert_eq!(e.k.num_objects(), g.order());
        assert!(equivalence_check(&e.k, &FinCategory::inertia(&g), B).unwrap().is_some());
        // literally isomorphic, not only equivalent
        assert!(crate::fincat::find_isomorphism(&e.k, &FinCategory::inertia(&g), B).unwrap().is_some());
    }
}

#[test]
fn equalizer_id_vs_trivial_is_contractible_pair() {
    let b = bg(&FinGroup::cyclic(2));
    let e = equalizer(&b, &b, &id_f(&b), &trivial_functor(&b, &b, 0));
    assert_eq!(e.objects, vec![(0, 0), (0, 1)]);
    // the non-identity arrow of ℤ/2 moves (•,h) to (•,h+1)
    for a in e.k.arrows() {
        let (s, t) = (e.k.src(a), e.k.tgt(a));
        assert_eq!(t, if e.arrows[a] == 1 { 1 - s } else { s });
    }
    assert!(crate::fincat::find_isomorphism(&e.k, &FinCategory::codiscrete(2), B).unwrap().is_some());
}

#[test]
fn identity_section_is_equivalent_to_source() {
    let g = bg(&FinGroup::symmetric(3)).disjoint_union(&FinCategory::codiscrete(2)).into_groupoid().unwrap();
    let f = id_f(&g);
    let e = equalizer(&g, &g, &f, &f);
    let section: Vec<usize> = (0..e.objects.len()).filter(|&i| g.is_identity(e.objects[i].1)).collect();
    for a in e.k.arrows() {
        if section.contains(&e.k.src(a)) {
            assert!(section.contains(&e.k.tgt(a)));
        }
    }
    let (sub, _) = e.k.full_subcategory(&section);
    assert!(equivalence_check(&sub, &g, B).unwrap().is_some());
}

#[test]
fn equifier_examples() {
    let g = bg(&FinGroup::cyclic(2));
    let ids: Vec<Arr> = vec![0];
    assert_eq!(equifier(&g, &ids, &ids).k.num_objects(), 1);
    // central non-identity element against the identity transformation
    let e = equifier(&g, &[0], &[1]);
    assert_eq!(e.k.num_objects(), 0);
    let two = FinCategory::codiscrete(2).into_groupoid().unwrap();
    let e = equifier(&two, &[0, 3], &[0, 2]);
    assert_eq!(e.objects, vec![0]);
    assert_eq!(e.k.num_arrows(), 1);
    // full: every arrow between survivors survives
    let e = equifier(&two, &[0, 3], &[0, 3]);
    assert_eq!(e.k.num_arrows(), 4);
}

#[test]
fn oracle_passes_on_computed_limits() {
    let tests = default_test_family();
    for d in bundled_diagrams() {
        let cone = compute_limit(&d);
        let r = universal_property_oracle(&d, &cone, &tests, B).unwrap();
        assert!(r.passed, "{d:?} {r:?}");
    }
}

#[test]
fn oracle_product_against_terminal_counts_pairs() {
    let d = &bundled_diagrams()[1];
    let cone = compute_limit(d);
    let r = universal_property_oracle(d, &cone, &[FinCategory::terminal()], B).unwrap();
    assert_eq!(r.per_test[0].cone_objects, 2);
    assert_eq!(r.per_test[0].factorizations, 2);
}

#[test]
fn oracle_rejects_corrupted_limits() {
    let controls = corrupted_controls(&bundled_diagrams());
    assert_eq!(controls.len(), 3);
    for (name, d, cone) in controls {
        let r = universal_property_oracle(&d, &cone, &default_test_family(), B).unwrap();
        assert!(!r.passed, "{name} passed");
    }
}
