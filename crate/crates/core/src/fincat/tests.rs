use super::*;

const B: u64 = DEFAULT_FUNCTOR_BUDGET;

fn bz(n: usize) -> FinCategory {
    FinCategory::from_group(&FinGroup::cyclic(n))
}

/// Every map on arrows, filtered by the functor laws. Independent of the search engine.
fn brute_functors(c: &FinCategory, d: &FinCategory) -> Vec<Functor> {
    let na = c.num_arrows();
    let nd = d.num_arrows();
    let mut out = Vec::new();
    let total = nd.pow(na as u32);
    for code in 0..total {
        let mut x = code;
        let arr: Vec<Arr> = (0..na)
            .map(|_| {
                let a = x % nd;
                x /= nd;
                a
            })
            .collect();
        let obj: Vec<Obj> = c.objects().map(|o| d.src(arr[c.id(o)])).collect();
        let f = Functor { obj, arr };
        if f.check(c, d).is_ok() {
            out.push(f);
        }
    }
    out.sort();
    out
}

#[test]
fn terminal_is_valid() {
    let c = CategoryBuilder::new().object("*").arrow("id", "*", "*").identity("*", "id").build().unwrap();
    assert_eq!(c.num_arrows(), 1);
    assert!(c.is_groupoid().is_ok());
}

#[test]
fn walking_idempotent_from_table() {
    let m = CategoryBuilder::new()
        .object("•")
        .arrow("id", "•", "•")
        .arrow("m", "•", "•")
        .identity("•", "id")
        .compose("m", "m", "m")
        .build()
        .unwrap();
    assert_eq!(m.is_groupoid().unwrap_err(), m.arr_by_name("m").unwrap());
    assert!(find_isomorphism(&m, &FinCategory::walking_idempotent(), B).unwrap().is_some());
}

#[test]
fn contradictory_table_rejected() {
    let r = CategoryBuilder::new()
        .object("•")
        .arrow("id", "•", "•")
        .arrow("m", "•", "•")
        .identity("•", "id")
        .compose("m", "m", "id")
        .compose("m", "m", "m")
        .build();
    match r {
        Err(crate::Error::Axioms(v)) => assert!(v.iter().any(|x| x.kind == ViolationKind::Contradiction)),
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn missing_identity_and_nonassociative_rejected() {
    let r = CategoryBuilder::new().object("a").arrow("f", "a", "a").compose("f", "f", "f").build();
    assert!(matches!(r, Err(crate::Error::Axioms(_))));
    // two non-identity arrows with a table that fails associativity
    let r = CategoryBuilder::new()
        .object("•")
        .arrow("id", "•", "•")
        .arrow("a", "•", "•")
        .arrow("b", "•", "•")
        .identity("•", "id")
        .compose("a", "a", "b")
        .compose("a", "b", "a")
        .compose("b", "a", "b")
        .compose("b", "b", "a")
        .build();
    match r {
        Err(crate::Error::Axioms(v)) => assert!(v.iter().any(|x| x.kind == ViolationKind::NotAssociative)),
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn standard_instances_satisfy_axioms() {
    let cats = [
        FinCategory::terminal(),
        FinCategory::discrete(3),
        FinCategory::codiscrete(3),
        FinCategory::interval(),
        FinCategory::walking_idempotent(),
        FinCategory::walking_projection(),
        bz(4),
        FinCategory::from_group(&FinGroup::symmetric(3)),
        FinCategory::from_group(&FinGroup::quaternion()),
        FinCategory::from_group(&FinGroup::dihedral(4)),
        bz(2).disjoint_union(&FinCategory::codiscrete(2)),
        bz(2).product(&FinCategory::interval()).0,
        FinCategory::walking_projection().opposite(),
    ];
    for c in &cats {
        assert!(c.violations().is_empty(), "{c:?}");
    }
}

#[test]
fn groupoid_detection_matches_brute_inverse_search() {
    let cats = [bz(3), FinCategory::walking_idempotent(), FinCategory::walking_projection(), FinCategory::interval()];
    for c in &cats {
        let brute = c.arrows().all(|f| {
            c.arrows().any(|g| c.compose(g, f) == Some(c.id(c.src(f))) && c.compose(f, g) == Some(c.id(c.tgt(f))))
        });
        assert_eq!(c.is_groupoid().is_ok(), brute);
    }
    let p = FinCategory::walking_projection();
    let w = p.is_groupoid().unwrap_err();
    // the first non-invertible arrow in id order is p; i∘p is also non-invertible
    assert!(!p.is_iso(p.arr_by_name("ip").unwrap()));
    assert!(!p.is_iso(w));
}

#[test]
fn only_identities_are_idempotent_in_groupoids() {
    let g = FinCategory::from_group(&FinGroup::symmetric(3)).disjoint_union(&FinCategory::codiscrete(3));
    for f in g.arrows() {
        assert_eq!(g.is_idempotent(f), g.is_identity(f));
    }
}

#[test]
fn components() {
    assert_eq!(FinCategory::discrete(2).connected_components().num_classes(), 2);
    assert_eq!(bz(2).connected_components().num_classes(), 1);
    let c = bz(2).disjoint_union(&FinCategory::codiscrete(2)).connected_components();
    let mut sizes = c.class_sizes();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2]);
}

#[test]
fn karoubi_of_walking_idempotent_is_walking_projection() {
    let k = karoubi_envelope(&FinCategory::walking_idempotent());
    assert!(k.category.violations().is_empty());
    assert!(find_isomorphism(&k.category, &FinCategory::walking_projection(), B).unwrap().is_some());
    assert!(k.embedding.check(&FinCategory::walking_idempotent(), &k.category).is_ok());
}

#[test]
fn karoubi_trivial_cases() {
    let t = karoubi_envelope(&FinCategory::terminal()).category;
    assert!(equivalence_check(&t, &FinCategory::terminal(), B).unwrap().is_some());
    let g = bz(3);
    let k = karoubi_envelope(&g).category;
    assert!(equivalence_check(&k, &g, B).unwrap().is_some());
}

#[test]
fn karoubi_is_idempotent_up_to_equivalence() {
    for c in [FinCategory::walking_idempotent(), FinCategory::walking_projection(), FinCategory::interval()] {
        let k1 = karoubi_envelope(&c).category;
        let k2 = karoubi_envelope(&k1).category;
        assert!(equivalence_check(&k1, &k2, B).unwrap().is_some());
    }
}

#[test]
fn functor_search_matches_brute_force() {
    let cats = [
        FinCategory::terminal(),
        FinCategory::interval(),
        FinCategory::walking_idempotent(),
        FinCategory::walking_projection(),
        bz(2),
        bz(3),
        FinCategory::codiscrete(2),
    ];
    for c in &cats {
        for d in &cats {
            if d.num_arrows().pow(c.num_arrows() as u32) > 200_000 {
                continue;
            }
            let mut fast = enumerate_functors(c, d, B).unwrap().functors;
            fast.sort();
            assert_eq!(fast, brute_functors(c, d));
        }
    }
}

#[test]
fn fun_from_terminal_has_objects_of_target() {
    for d in [FinCategory::walking_projection(), bz(3), FinCategory::codiscrete(3)] {
        assert_eq!(enumerate_functors(&FinCategory::terminal(), &d, B).unwrap().functors.len(), d.num_objects());
    }
}

#[test]
fn fun_m_to_s3_is_single_functor() {
    let s3 = FinCategory::from_group(&FinGroup::symmetric(3));
    let fc = enumerate_functors(&FinCategory::walking_idempotent(), &s3, B).unwrap();
    assert_eq!(fc.functors.len(), 1);
}

#[test]
fn fun_bz2_to_bz3_is_single_functor_with_aut_z3() {
    let fc = enumerate_functors(&bz(2), &bz(3), B).unwrap();
    assert_eq!(fc.functors.len(), 1);
    assert_eq!(fc.category.num_arrows(), 3);
    let g = fc.category.is_groupoid().unwrap();
    let (aut, _) = g.vertex_group(0);
    assert!(aut.is_abelian() && aut.order() == 3);
}

#[test]
fn crt_equivalence() {
    let (p, _, _) = bz(2).product(&bz(3));
    assert!(equivalence_check(&bz(6), &p, B).unwrap().is_some());
    assert!(equivalence_check(&bz(6), &FinCategory::from_group(&FinGroup::symmetric(3)), B).unwrap().is_none());
}

#[test]
fn equivalence_basics() {
    let c = FinCategory::walking_projection();
    let e = equivalence_check(&c, &c, B).unwrap().unwrap();
    assert!(is_equivalence(&c, &c, &e.witness));
    assert!(equivalence_check(&bz(2), &FinCategory::discrete(2), B).unwrap().is_none());
    assert!(equivalence_check(&FinCategory::codiscrete(3), &FinCategory::terminal(), B).unwrap().is_some());
}

#[test]
fn functor_counts_invariant_under_equivalent_target() {
    let d1 = bz(2);
    let (d2, _, _) = bz(2).product(&FinCategory::codiscrete(2));
    for c in [FinCategory::interval(), bz(2), FinCategory::walking_idempotent()] {
        let f1 = enumerate_functors(&c, &d1, B).unwrap().category;
        let f2 = enumerate_functors(&c, &d2, B).unwrap().category;
        assert!(equivalence_check(&f1, &f2, B).unwrap().is_some());
    }
}

#[test]
fn budget_is_enforced() {
    let s3 = FinCategory::from_group(&FinGroup::symmetric(3));
    let r = enumerate_functors(&s3, &s3, 3);
    assert!(matches!(r, Err(crate::Error::BudgetExceeded { .. })));
}

#[test]
fn group_constructions() {
    let s3 = FinGroup::symmetric(3);
    assert_eq!(s3.order(), 6);
    assert_eq!(s3.conjugacy_classes().len(), 3);
    assert_eq!(FinGroup::quaternion().conjugacy_classes().len(), 5);
    assert_eq!(FinGroup::dihedral(4).order(), 8);
    assert_eq!(FinGroup::by_name("Z2xZ2").unwrap().order(), 4);
    assert!(FinGroup::from_table("x", vec!["a".into(), "b".into()], vec![0, 0, 0, 0]).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_cat() -> impl Strategy<Value = FinCategory> {
        prop_oneof![
            Just(FinCategory::terminal()),
            Just(FinCategory::interval()),
            Just(FinCategory::walking_idempotent()),
            Just(FinCategory::walking_projection()),
            (1usize..5).prop_map(bz),
            (1usize..4).prop_map(FinCategory::codiscrete),
            (1usize..3).prop_map(FinCategory::discrete),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn products_and_unions_are_categories(a in small_cat(), b in small_cat()) {
            let (p, p1, p2) = a.product(&b);
            prop_assert!(p.violations().is_empty());
            prop_assert!(p1.check(&p, &a).is_ok());
            prop_assert!(p2.check(&p, &b).is_ok());
            prop_assert_eq!(p.num_arrows(), a.num_arrows() * b.num_arrows());
            prop_assert!(a.disjoint_union(&b).violations().is_empty());
        }

        #[test]
        fn karoubi_twice_is_equivalent(a in small_cat()) {
            let k1 = karoubi_envelope(&a).category;
            let k2 = karoubi_envelope(&k1).category;
            prop_assert!(equivalence_check(&k1, &k2, B).unwrap().is_some());
        }

        #[test]
        fn skeleton_is_equivalent(a in small_cat(), b in small_cat()) {
            let c = a.product(&b).0;
            let (s, _) = c.skeleton();
            prop_assert!(equivalence_check(&c, &s, B).unwrap().is_some());
        }
    }
}
