//! Pro-groupoids indexed by chains, their hom-groupoids into finite groupoids,
//! the Ẑ tower, and the comparison with finite-field torsor classification.

use crate::error::{Error, Result};
use crate::fieldgalois::{classify_torsors, Fq, TorsorClassification};
use crate::fincat::{
    enumerate_functors, equivalence_check, is_equivalence, FinCategory, FinGroup, FinGroupoid, Functor, FunctorCategory,
};

/// Highest Ẑ level materialized (`B(ℤ/n!)` has `n!` arrows).
pub const MAX_ZHAT_LEVEL: usize = 7;
pub const DEFAULT_HORIZON: usize = 6;

/// A strict diagram over a chain `0 ≥ 1 ≥ 2 ≥ …` with transitions `x(n+1) → x(n)`.
#[derive(Clone, Debug)]
pub enum ProGroupoid {
    /// A finite chain; its last level is the limit point of the index.
    Chain { levels: Vec<FinGroupoid>, transitions: Vec<Functor> },
    /// Level `n ≥ 1` is `B(ℤ/n!)` with reduction maps, generated up to `horizon`.
    Zhat { horizon: usize },
}

impl ProGroupoid {
    pub fn constant(h: FinGroupoid) -> ProGroupoid {
        ProGroupoid::Chain { levels: vec![h], transitions: Vec::new() }
    }

    pub fn chain(levels: Vec<FinGroupoid>, transitions: Vec<Functor>) -> Result<ProGroupoid> {
        if levels.is_empty() || transitions.len() + 1 != levels.len() {
            return Err(Error::Precondition("a chain needs one transition between consecutive levels".into()));
        }
        for (k, t) in transitions.iter().enumerate() {
            t.check(&levels[k + 1], &levels[k]).map_err(|e| Error::Precondition(format!("transition {k}: {e}")))?;
        }
        Ok(ProGroupoid::Chain { levels, transitions })
    }

    pub fn len(&self) -> usize {
        match self {
            ProGroupoid::Chain { levels, .. } => levels.len(),
            ProGroupoid::Zhat { horizon } => *horizon,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Level by position in the chain (position 0 is Ẑ level 1).
    pub fn level(&self, k: usize) -> Result<FinGroupoid> {
        match self {
            ProGroupoid::Chain { levels, .. } => Ok(levels[k].clone()),
            ProGroupoid::Zhat { .. } => Ok(FinGroupoid::from_group(&FinGroup::cyclic(zhat_order(k + 1)?))),
        }
    }

    /// The transition from position `k + 1` to position `k`.
    pub fn transition(&self, k: usize) -> Result<Functor> {
        match self {
            ProGroupoid::Chain { transitions, .. } => Ok(transitions[k].clone()),
            ProGroupoid::Zhat { .. } => {
                let (hi, lo) = (zhat_order(k + 2)?, zhat_order(k + 1)?);
                Ok(Functor { obj: vec![0], arr: (0..hi).map(|a| a % lo).collect() })
            }
        }
    }
}

fn zhat_order(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_ZHAT_LEVEL {
        return Err(Error::BudgetExceeded { what: "Ẑ level", limit: MAX_ZHAT_LEVEL as u64 });
    }
    Ok((1..=n).product())
}

/// The Ẑ tower `B(ℤ/1!) ← B(ℤ/2!) ← … ← B(ℤ/N!)`. Levels are built on demand, so a
/// horizon past `MAX_ZHAT_LEVEL` fails only if a computation actually reaches that far.
pub fn zhat_chain(levels: usize) -> Result<ProGroupoid> {
    if levels == 0 {
        return Err(Error::Precondition("the Ẑ tower needs at least one level".into()));
    }
    Ok(ProGroupoid::Zhat { horizon: levels })
}

/// `colim_j Fun(x(j), G)` together with the position where it was read off.
#[derive(Clone, Debug)]
pub struct ProHom {
    pub functors: FunctorCategory,
    /// Position in the chain; for the Ẑ tower, level `position + 1`.
    pub position: usize,
    /// Whether the value was certified by an equivalence to the next level.
    pub stabilized: bool,
    pub levels_tried: usize,
}

impl ProHom {
    pub fn groupoid(&self) -> &FinCategory {
        &self.functors.category
    }
}

/// Least common multiple of the orders of all endomorphisms of a finite groupoid.
pub fn groupoid_exponent(g: &FinCategory) -> usize {
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut e = 1;
    for o in g.objects() {
        for &f in g.hom(o, o) {
            let (mut k, mut x) = (1, f);
            while x != g.id(o) {
                x = g.comp(f, x);
                k += 1;
            }
            e = e / gcd(e, k) * k;
        }
    }
    e
}

/// Hom from a pro-groupoid to a finite groupoid. Finite chains return the value at the
/// last level. The Ẑ tower is scanned until precomposition with a transition is an
/// equivalence at a level `n` with `exp(G) | n!`; past that point every `Hom(ℤ/n!, H)`
/// is all of `H`, so equal consecutive values alone (e.g. `ℤ/2` and `ℤ/6` into `ℤ/4`)
/// are not taken as stable.
pub fn pro_hom(x: &ProGroupoid, g: &FinCategory, budget: u64) -> Result<ProHom> {
    match x {
        ProGroupoid::Chain { levels, .. } => {
            let last = levels.len() - 1;
            let functors = enumerate_functors(&levels[last], g, budget)?;
            Ok(ProHom { functors, position: last, stabilized: true, levels_tried: levels.len() })
        }
        ProGroupoid::Zhat { horizon } => {
            let exp = groupoid_exponent(g);
            let first = x.level(0)?;
            let mut current = enumerate_functors(&first, g, budget)?;
            for k in 0..horizon.saturating_sub(1) {
                let level = x.level(k + 1)?;
                let next = enumerate_functors(&level, g, budget)?;
                let restrict = current
                    .restrict_along(&next, &x.transition(k)?)
                    .ok_or_else(|| Error::Precondition("internal: restriction left the functor category".into()))?;
                if zhat_order(k + 1)? % exp == 0 && is_equivalence(&current.category, &next.category, &restrict) {
                    return Ok(ProHom { functors: current, position: k, stabilized: true, levels_tried: k + 2 });
                }
                current = next;
            }
            Err(Error::NoStabilization { levels_tried: *horizon })
        }
    }
}

/// Finite-field torsor classification against `Hom(Ẑ, BΓ)`.
#[derive(Clone, Debug)]
pub struct FieldCrossCheck {
    pub classification: TorsorClassification,
    pub pro: ProHom,
    pub equivalent: bool,
}

impl FieldCrossCheck {
    /// Automorphism orders per iso class on both sides, sorted.
    pub fn automorphism_orders(&self) -> (Vec<usize>, Vec<usize>) {
        let mut a = self.classification.automorphism_orders.clone();
        let (sk, _) = self.pro.groupoid().skeleton();
        let mut b: Vec<usize> = sk.objects().map(|o| sk.hom(o, o).len()).collect();
        a.sort();
        b.sort();
        (a, b)
    }
}

/// Bundled groups of order at most 8 for the field cross-check. `ℤ/7` is left out: its
/// exponent first divides `7!`, and certifying that level needs `B(ℤ/8!)`.
pub fn bundled_groups() -> Vec<FinGroup> {
    let c = FinGroup::cyclic;
    vec![
        FinGroup::trivial(),
        c(2),
        c(3),
        c(4),
        c(2).direct_product(&c(2)),
        c(5),
        c(6),
        FinGroup::symmetric(3),
        c(8),
        c(2).direct_product(&c(4)),
        c(2).direct_product(&c(2)).direct_product(&c(2)),
        FinGroup::dihedral(4),
        FinGroup::quaternion(),
    ]
}

pub const BUNDLED_FIELD_ORDERS: [usize; 3] = [2, 3, 4];

pub fn cross_check_field(gamma: &FinGroup, q: usize, budget: u64) -> Result<FieldCrossCheck> {
    let field = Fq::of_order(q)?;
    let classification = classify_torsors(gamma, &field, budget)?;
    let pro = pro_hom(&zhat_chain(MAX_ZHAT_LEVEL)?, &FinCategory::from_group(gamma), budget)?;
    let equivalent = equivalence_check(&classification.groupoid, pro.groupoid(), budget)?.is_some();
    Ok(FieldCrossCheck { classification, pro, equivalent })
}

/// Counting evidence for one candidate `X`: the functor `Fun(X, M) → M` sending
/// isomorphisms to `id` and all other transformations to `m`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CandidateEvidence {
    pub name: String,
    pub functors: usize,
    pub transformations: usize,
    pub isomorphisms: usize,
    pub non_isomorphisms: usize,
    pub collapse_is_functor: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct NonRepresentability {
    pub candidates: Vec<CandidateEvidence>,
    /// Functors `P → M` from the walking projection, and how many are surjective on arrows.
    pub projection_functors: usize,
    pub projection_surjective: usize,
    pub holds: bool,
}

/// The bundled candidate family.
pub fn candidate_family() -> Vec<(String, FinCategory)> {
    let g = |g: FinGroup| FinCategory::from_group(&g);
    vec![
        ("empty".into(), FinCategory::empty()),
        ("point".into(), FinCategory::terminal()),
        ("two points".into(), FinCategory::discrete(2)),
        ("arrow".into(), FinCategory::interval()),
        ("walking idempotent".into(), FinCategory::walking_idempotent()),
        ("walking projection".into(), FinCategory::walking_projection()),
        ("B(Z2)".into(), g(FinGroup::cyclic(2))),
        ("contractible pair".into(), FinCategory::codiscrete(2)),
    ]
}

pub fn non_representability_demo(budget: u64) -> Result<NonRepresentability> {
    let m = FinCategory::walking_idempotent();
    let idem = m.arrows().find(|&a| !m.is_identity(a)).expect("M has a non-identity arrow");
    let mut candidates = Vec::new();
    for (name, x) in candidate_family() {
        let fun = enumerate_functors(&x, &m, budget)?;
        let c = &fun.category;
        let collapse = Functor {
            obj: vec![0; c.num_objects()],
            arr: c.arrows().map(|a| if c.is_iso(a) { m.id(0) } else { idem }).collect(),
        };
        let isomorphisms = c.arrows().filter(|&a| c.is_iso(a)).count();
        let collapse_is_functor = collapse.check(c, &m).is_ok();
        let surjective = collapse_is_functor && m.arrows().all(|b| collapse.arr.contains(&b));
        candidates.push(CandidateEvidence {
            name,
            functors: c.num_objects(),
            transformations: c.num_arrows(),
            isomorphisms,
            non_isomorphisms: c.num_arrows() - isomorphisms,
            collapse_is_functor,
            surjective,
        });
    }
    let p = FinCategory::walking_projection();
    let from_p = enumerate_functors(&p, &m, budget)?;
    let projection_surjective = from_p.functors.iter().filter(|f| m.arrows().all(|b| f.arr.contains(&b))).count();
    let holds = candidates.iter().all(|c| c.collapse_is_functor && (c.surjective || c.name == "empty"))
        && candidates.iter().any(|c| c.name == "empty" && !c.surjective)
        && projection_surjective == 0;
    Ok(NonRepresentability { candidates, projection_functors: from_p.functors.len(), projection_surjective, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::DEFAULT_FUNCTOR_BUDGET as B;

    #[test]
    fn constant_pro_object_is_plain_functor_category() {
        let h = FinCategory::codiscrete(2).into_groupoid().unwrap();
        let g = FinCategory::from_group(&FinGroup::cyclic(2));
        let pro = pro_hom(&ProGroupoid::constant(h.clone()), &g, B).unwrap();
        let direct = enumerate_functors(&h, &g, B).unwrap();
        assert!(equivalence_check(pro.groupoid(), &direct.category, B).unwrap().is_some());
    }

    #[test]
    fn zhat_levels() {
        let z = zhat_chain(4).unwrap();
        assert_eq!(z.level(0).unwrap().num_arrows(), 1);
        assert_eq!(z.level(2).unwrap().num_arrows(), 6);
        let t = z.transition(1).unwrap();
        assert_eq!(t.arr, (0..6).map(|a| a % 2).collect::<Vec<_>>());
        assert!(t.check(&z.level(2).unwrap(), &z.level(1).unwrap()).is_ok());
        let one = pro_hom(&z, &FinCategory::terminal(), B).unwrap();
        assert_eq!((one.groupoid().num_objects(), one.groupoid().num_arrows()), (1, 1));
    }

    #[test]
    fn zhat_against_groups() {
        let z = zhat_chain(MAX_ZHAT_LEVEL).unwrap();
        let z6 = pro_hom(&z, &FinCategory::from_group(&FinGroup::cyclic(6)), B).unwrap();
        assert!(z6.position < 6);
        assert_eq!(z6.groupoid().num_objects(), 6);
        assert!(z6.groupoid().objects().all(|o| z6.groupoid().hom(o, o).len() == 6));

        let s3 = FinGroup::symmetric(3);
        let p = pro_hom(&z, &FinCategory::from_group(&s3), B).unwrap();
        assert!(equivalence_check(p.groupoid(), &FinCategory::inertia(&s3), B).unwrap().is_some());

        // a finite horizon too short to see the exponent
        let short = zhat_chain(2).unwrap();
        assert!(matches!(
            pro_hom(&short, &FinCategory::from_group(&FinGroup::cyclic(3)), B),
            Err(Error::NoStabilization { levels_tried: 2 })
        ));

        // a long horizon is fine when stabilization comes early, and refused when it would not
        let long = zhat_chain(MAX_ZHAT_LEVEL + 1).unwrap();
        assert!(pro_hom(&long, &FinCategory::from_group(&FinGroup::cyclic(2)), B).unwrap().stabilized);
        assert!(matches!(
            pro_hom(&long, &FinCategory::from_group(&FinGroup::cyclic(7)), B),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn abelian_targets_have_order_many_classes() {
        let z = zhat_chain(MAX_ZHAT_LEVEL).unwrap();
        for g in [FinGroup::cyclic(4), FinGroup::cyclic(2).direct_product(&FinGroup::cyclic(2)), FinGroup::cyclic(5)] {
            let p = pro_hom(&z, &FinCategory::from_group(&g), B).unwrap();
            let (sk, _) = p.groupoid().skeleton();
            assert_eq!(sk.num_objects(), g.order());
            assert!(sk.objects().all(|o| sk.hom(o, o).len() == g.order()));
            // stabilized once n! is a multiple of the exponent
            let level = p.position + 1;
            assert!(zhat_order(level).unwrap() % g.exponent() == 0);
        }
    }

    #[test]
    fn cross_checks() {
        for (g, q) in [(FinGroup::cyclic(2), 2), (FinGroup::cyclic(3), 2), (FinGroup::symmetric(3), 3)] {
            let c = cross_check_field(&g, q, B).unwrap();
            assert!(c.equivalent);
            let (a, b) = c.automorphism_orders();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn all_bundled_cross_checks() {
        for g in bundled_groups() {
            for q in BUNDLED_FIELD_ORDERS {
                let c = cross_check_field(&g, q, B).unwrap();
                assert!(c.equivalent, "{} over F{q}", g.label());
            }
        }
    }

    #[test]
    fn non_representability() {
        let d = non_representability_demo(B).unwrap();
        assert!(d.holds);
        let point = d.candidates.iter().find(|c| c.name == "point").unwrap();
        assert_eq!((point.functors, point.transformations, point.non_isomorphisms), (1, 2, 1));
        let empty = d.candidates.iter().find(|c| c.name == "empty").unwrap();
        assert!(!empty.surjective);
        assert_eq!(d.projection_surjective, 0);
        assert!(d.projection_functors >= 1);
    }
}
