use super::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn f(q: usize) -> Fq {
    Fq::of_order(q).unwrap()
}

/// Trial division by every monic polynomial of degree 1..=n/2.
fn irreducible_oracle(k: &Fq, p: &[usize]) -> bool {
    let n = p.len() - 1;
    let q = k.order() as u64;
    for d in 1..=n / 2 {
        for code in 0..q.pow(d as u32) {
            let mut g: Vec<usize> = (0..d).map(|i| ((code / q.pow(i as u32)) % q) as usize).collect();
            g.push(1);
            if k.poly_rem(p, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

fn monic(k: &Fq, n: usize, code: u64) -> Vec<usize> {
    let q = k.order() as u64;
    let mut p: Vec<usize> = (0..n).map(|i| ((code / q.pow(i as u32)) % q) as usize).collect();
    p.push(1);
    p
}

#[test]
fn field_construction() {
    assert_eq!(f(4).modulus(), &[1, 1, 1]);
    assert_eq!(f(8).modulus(), &[1, 1, 0, 1]);
    for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let k = f(q);
        assert_eq!(k.order(), q);
        for a in 1..q {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
    }
    assert!(Fq::with_modulus(2, vec![1, 0, 1]).is_err());
    assert!(Fq::of_order(6).is_err());
}

#[test]
fn irreducibility_matches_trial_division() {
    for (q, max) in [(2, 6), (3, 4), (4, 3), (5, 3)] {
        let k = f(q);
        for n in 1..=max {
            for code in 0..(q as u64).pow(n as u32) {
                let p = monic(&k, n, code);
                assert_eq!(k.is_irreducible(&p), irreducible_oracle(&k, &p), "{p:?} over F{q}");
            }
        }
    }
}

#[test]
fn linear_algebra() {
    let k = f(3);
    let m = Mat { rows: 2, cols: 4, data: vec![1, 2, 0, 1, 2, 1, 0, 2] };
    let ker = m.kernel(&k);
    assert_eq!(m.rank(&k) + ker.len(), 4);
    for v in &ker {
        assert!(m.apply(&k, v).iter().all(|&x| x == 0));
    }
    let (x, _) = m.solve(&k, &[1, 2]).unwrap();
    assert_eq!(m.apply(&k, &x), vec![1, 2]);
    assert!(Mat { rows: 2, cols: 1, data: vec![1, 1] }.solve(&k, &[1, 0]).is_none());
}

#[test]
fn idempotent_examples() {
    let k = f(2);
    let f4 = FqAlgebra::extension(&k, 2).unwrap();
    assert_eq!(idempotents_exhaustive(&f4).unwrap().len(), 2);
    assert_eq!(primitive_idempotents(&f4).unwrap().points(), 1);

    let split = FqAlgebra::quotient(&k, &[0, 1, 1]).unwrap();
    let mut idems = idempotents_exhaustive(&split).unwrap();
    idems.sort();
    assert_eq!(idems, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(primitive_idempotents(&split).unwrap().points(), 2);

    let dual = FqAlgebra::quotient(&k, &[0, 0, 1]).unwrap();
    assert_eq!(idempotents_exhaustive(&dual).unwrap().len(), 2);
    assert_eq!(primitive_idempotents(&dual).unwrap().points(), 1);

    for r in [&f4, &split, &dual] {
        assert!(primitive_idempotents(r).unwrap().verify(r));
    }
}

#[test]
fn separability_examples() {
    let k = f(2);
    assert!(is_separable(&FqAlgebra::extension(&k, 2).unwrap()));
    assert!(!is_separable(&FqAlgebra::quotient(&k, &[0, 0, 1]).unwrap()));
    assert!(is_separable(&FqAlgebra::split(&k, 2)));
}

fn has_nilpotent(r: &FqAlgebra) -> bool {
    (1..r.size().unwrap()).any(|i| {
        let x = r.element(i);
        r.pow(&x, r.dim() as u64 + 1) == r.zero()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn splitting_agrees_with_exhaustive(q in prop::sample::select(vec![2usize, 3, 4]), n in 1usize..5, code in any::<u64>()) {
        let k = f(q);
        let p = monic(&k, n, code % (q as u64).pow(n as u32));
        let r = FqAlgebra::quotient(&k, &p).unwrap();
        let mut brute = minimal_idempotents(&r, &idempotents_exhaustive(&r).unwrap());
        brute.sort();
        prop_assert_eq!(split_primitives(&r), brute);
        prop_assert_eq!(is_separable(&r), !has_nilpotent(&r));
    }
}

#[test]
fn spectrum_of_products_is_disjoint_union() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let q = [2, 3][rng.random_range(0..2)];
        let k = f(q);
        let rand_alg = |rng: &mut rand_chacha::ChaCha8Rng| {
            let n = rng.random_range(1..4);
            let code = rng.random_range(0..(q as u64).pow(n as u32));
            FqAlgebra::quotient(&k, &monic(&k, n, code)).unwrap()
        };
        let (a, b) = (rand_alg(&mut rng), rand_alg(&mut rng));
        let (sa, sb) = (primitive_idempotents(&a).unwrap(), primitive_idempotents(&b).unwrap());
        let ab = a.product(&b).unwrap();
        let sab = primitive_idempotents(&ab).unwrap();
        assert_eq!(sab.points(), sa.points() + sb.points());
        let mut dims: Vec<usize> = sa.components.iter().chain(&sb.components).map(|c| c.dim()).collect();
        let mut dims_ab: Vec<usize> = sab.components.iter().map(|c| c.dim()).collect();
        dims.sort();
        dims_ab.sort();
        assert_eq!(dims, dims_ab);
        assert!(sab.verify(&ab));
    }
}

#[test]
fn large_algebras_use_splitting() {
    let k = f(4);
    let r = FqAlgebra::split(&k, 3).product(&FqAlgebra::extension(&k, 6).unwrap()).unwrap();
    let s = primitive_idempotents(&r).unwrap();
    assert_eq!(s.method, SpectrumMethod::Splitting);
    assert_eq!(s.points(), 4);
    assert!(s.verify(&r));
    assert_eq!(idempotents(&r, DEFAULT_BUDGET).unwrap().len(), 16);
}

#[test]
fn galois_algebra_examples() {
    let k = f(2);
    let z2 = FinGroup::cyclic(2);
    let triv = galois_algebra(&z2, 0, &k).unwrap();
    assert_eq!(primitive_idempotents(&triv.rep.algebra).unwrap().points(), 2);
    // the non-identity element swaps the two factors
    assert_eq!(triv.rep.action[1], Mat { rows: 2, cols: 2, data: vec![0, 1, 1, 0] });

    let f4 = galois_algebra(&z2, 1, &k).unwrap();
    assert_eq!(f4.rep.algebra.dim(), 2);
    assert_eq!(primitive_idempotents(&f4.rep.algebra).unwrap().points(), 1);
    assert!(is_separable(&f4.rep.algebra));
    // the action is the Frobenius
    assert_eq!(f4.rep.action[1], f4.rep.algebra.frobenius_matrix());

    let s3 = FinGroup::symmetric(3);
    let three = (0..6).find(|&g| s3.element_order(g) == 3).unwrap();
    let r = galois_algebra(&s3, three, &k).unwrap();
    let spec = primitive_idempotents(&r.rep.algebra).unwrap();
    assert_eq!(r.rep.algebra.dim(), 6);
    assert_eq!(spec.points(), 2);
    for c in &spec.components {
        assert_eq!(c.dim(), 3);
        assert_eq!(idempotents_exhaustive(c).unwrap().len(), 2);
        assert!(is_separable(c));
    }
}

#[test]
fn torsor_verdicts() {
    let k = f(2);
    let z2 = FinGroup::cyclic(2);
    let (_, v) = dual_torsor_coalgebra(&galois_algebra(&z2, 1, &k).unwrap().rep);
    assert_eq!(v.galois_shape, (4, 4));
    assert!(v.torsor());

    let nil = GAlgebra::trivial(FqAlgebra::quotient(&k, &[0, 0, 1]).unwrap(), z2.clone());
    let (c, v) = dual_torsor_coalgebra(&nil);
    assert!(c.check().is_ok());
    assert!(!v.galois_full_rank());
    assert!(!v.torsor());

    let s3 = FinGroup::symmetric(3);
    let (_, v) = dual_torsor_coalgebra(&galois_algebra(&s3, s3.identity(), &f(3)).unwrap().rep);
    assert!(v.torsor());
}

#[test]
fn dualization_round_trip() {
    for (g, q) in [(FinGroup::symmetric(3), 2), (FinGroup::cyclic(4), 3), (FinGroup::quaternion(), 2)] {
        for e in 0..g.order() {
            let r = galois_algebra(&g, e, &f(q)).unwrap();
            let c = r.rep.dual();
            let back = c.dual(&g).unwrap();
            assert_eq!(back.algebra, r.rep.algebra);
            assert_eq!(back.action, r.rep.action);
        }
    }
}

#[test]
fn fast_isomorphisms_match_exhaustive_search() {
    for (g, q) in [
        (FinGroup::cyclic(2), 2),
        (FinGroup::cyclic(3), 2),
        (FinGroup::symmetric(3), 2),
        (FinGroup::cyclic(4), 2),
        (FinGroup::cyclic(3), 3),
    ] {
        let k = f(q);
        let algs: Vec<GaloisAlgebra> = (0..g.order()).map(|e| galois_algebra(&g, e, &k).unwrap()).collect();
        for x in &algs {
            for y in &algs {
                let mut fast = galois_isomorphisms(x, y, DEFAULT_BUDGET).unwrap();
                let mut slow = equivariant_isomorphisms_exhaustive(&x.rep, &y.rep, DEFAULT_BUDGET).unwrap();
                fast.sort_by(|a, b| a.data.cmp(&b.data));
                slow.sort_by(|a, b| a.data.cmp(&b.data));
                assert_eq!(fast, slow);
            }
        }
    }
}

/// Conjugacy classes and centralizer orders straight from the multiplication table.
fn centralizer_orders(g: &FinGroup) -> Vec<usize> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        for h in 0..n {
            let hinv = (0..n).find(|&x| g.mul(h, x) == g.identity()).unwrap();
            seen[g.mul(g.mul(h, a), hinv)] = true;
        }
        out.push((0..n).filter(|&h| g.mul(h, a) == g.mul(a, h)).count());
    }
    out.sort();
    out
}

#[test]
fn classification_examples() {
    let k = f(2);
    let t = classify_torsors(&FinGroup::trivial(), &k, DEFAULT_BUDGET).unwrap();
    assert_eq!(t.automorphism_orders, vec![1]);

    let t = classify_torsors(&FinGroup::cyclic(2), &k, DEFAULT_BUDGET).unwrap();
    assert_eq!(t.automorphism_orders, vec![2, 2]);
    let points: Vec<usize> =
        t.classes.iter().map(|c| primitive_idempotents(&c.rep.algebra).unwrap().points()).collect();
    assert_eq!(points, vec![2, 1]);
    assert!(t.inertia_equivalent);

    let s3 = FinGroup::symmetric(3);
    let t = classify_torsors(&s3, &k, DEFAULT_BUDGET).unwrap();
    let mut orders = t.automorphism_orders.clone();
    orders.sort();
    assert_eq!(orders, centralizer_orders(&s3));
    assert_eq!(orders, vec![2, 3, 6]);
    assert!(t.inertia_equivalent);
    assert!(t.verdicts.iter().all(|v| v.torsor()));
}

#[test]
fn bundled_groups_classify_to_inertia() {
    let groups = [
        FinGroup::cyclic(4),
        FinGroup::cyclic(2).direct_product(&FinGroup::cyclic(2)),
        FinGroup::dihedral(4),
        FinGroup::quaternion(),
        FinGroup::cyclic(8),
    ];
    for g in &groups {
        for q in [2, 3, 4] {
            let t = classify_torsors(g, &f(q), DEFAULT_BUDGET).unwrap();
            assert!(t.inertia_equivalent, "{} over F{q}", g.label());
            let mut orders = t.automorphism_orders.clone();
            orders.sort();
            assert_eq!(orders, centralizer_orders(g));
            for c in &t.classes {
                assert!(is_separable(&c.rep.algebra));
                assert_eq!(c.rep.algebra.dim(), g.order());
            }
            assert!(t.verdicts.iter().all(|v| v.torsor()));
        }
    }
}
