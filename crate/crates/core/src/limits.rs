//! Products, equalizers (iso-inserters) and equifiers of finite groupoids,
//! with a brute-force check of their universal properties.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{enumerate_functors, is_equivalence, Arr, FinCategory, FinGroupoid, Functor, FunctorCategory, Obj};

/// Groupoids used by default to probe universal properties.
pub fn default_test_family() -> Vec<FinCategory> {
    use crate::fincat::FinGroup;
    vec![
        FinCategory::terminal(),
        FinCategory::discrete(2),
        FinCategory::from_group(&FinGroup::cyclic(2)),
        FinCategory::from_group(&FinGroup::cyclic(3)),
        FinCategory::codiscrete(2),
        FinCategory::from_group(&FinGroup::cyclic(2)).disjoint_union(&FinCategory::terminal()),
    ]
}

/// Products, equalizers and equifiers of small groupoids whose limits are checked by default.
pub fn bundled_diagrams() -> Vec<LimitDiagram> {
    use crate::fincat::{identity_functor as id_f, FinGroup};
    let trivial_functor = |d: &FinCategory, c: &FinCategory, o: Obj| Functor {
        obj: vec![o; d.num_objects()],
        arr: vec![c.id(o); d.num_arrows()],
    };
    let z2 = FinGroupoid::from_group(&FinGroup::cyclic(2));
    let z3 = FinGroupoid::from_group(&FinGroup::cyclic(3));
    let pair = FinCategory::codiscrete(2).into_groupoid().unwrap();
    vec![
        LimitDiagram::Product { g: z2.clone(), h: z3.clone() },
        LimitDiagram::Product { g: pair.clone(), h: z2.clone() },
        LimitDiagram::Equalizer { g: z2.clone(), h: z2.clone(), phi: id_f(&z2), psi: trivial_functor(&z2, &z2, 0) },
        LimitDiagram::Equalizer { g: z2.clone(), h: z2.clone(), phi: id_f(&z2), psi: id_f(&z2) },
        LimitDiagram::Equifier {
            g: z2.clone(),
            h: z2.clone(),
            phi: id_f(&z2),
            psi: id_f(&z2),
            xi: vec![0],
            xi2: vec![1],
        },
        LimitDiagram::Equifier {
            g: pair.clone(),
            h: pair.clone(),
            phi: id_f(&pair),
            psi: id_f(&pair),
            xi: vec![0, 3],
            xi2: vec![0, 3],
        },
    ]
}

pub fn product(g: &FinGroupoid, h: &FinGroupoid) -> (FinGroupoid, Functor, Functor) {
    let (p, p1, p2) = g.product(h);
    (p.into_groupoid().expect("product of groupoids"), p1, p2)
}

/// The iso-inserter of `φ, ψ: G → H`.
#[derive(Clone, Debug)]
pub struct EqualizerResult {
    pub k: FinGroupoid,
    /// `(s, h)` with `h: φ(s) → ψ(s)` for each object of `k`.
    pub objects: Vec<(Obj, Arr)>,
    /// Underlying arrow of `G` for each arrow of `k`.
    pub arrows: Vec<Arr>,
    pub xi: Functor,
    /// Components of `p: φξ ⇒ ψξ`, indexed by objects of `k`.
    pub p: Vec<Arr>,
}

/// Objects `(s, h)`, `h: φ(s) → ψ(s)`; arrows `g: (s,h) → (s',h')` with `h' ∘ φ(g) = ψ(g) ∘ h`.
pub fn equalizer(g: &FinGroupoid, h: &FinGroupoid, phi: &Functor, psi: &Functor) -> EqualizerResult {
    let mut objects = Vec::new();
    for s in g.objects() {
        for &a in h.hom(phi.obj[s], psi.obj[s]) {
            objects.push((s, a));
        }
    }
    let obj_index: HashMap<(Obj, Arr), usize> = objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut arrows = Vec::new();
    let mut arr_list = Vec::new();
    let mut arr_index = HashMap::new();
    for (i, &(s, hs)) in objects.iter().enumerate() {
        for t in g.objects() {
            for &a in g.hom(s, t) {
                // the unique target h' = ψ(a) ∘ h ∘ φ(a)⁻¹
                let ht = h.comp(h.comp(psi.arr[a], hs), h.inv(phi.arr[a]));
                let j = obj_index[&(t, ht)];
                arr_index.insert((a, i), arrows.len());
                arr_list.push((g.arr_name(a).to_string(), i, j));
                arrows.push(a);
            }
        }
    }
    let names = objects.iter().map(|&(s, a)| format!("({},{})", g.obj_name(s), h.arr_name(a))).collect();
    let ids = objects.iter().enumerate().map(|(i, &(s, _))| arr_index[&(g.id(s), i)]).collect();
    let src_of: Vec<usize> = arr_list.iter().map(|x| x.1).collect();
    let k = FinCategory::from_fn_unchecked(names, arr_list, ids, |b, a| {
        arr_index[&(g.comp(arrows[b], arrows[a]), src_of[a])]
    });
    let xi = Functor { obj: objects.iter().map(|x| x.0).collect(), arr: arrows.clone() };
    let p = objects.iter().map(|x| x.1).collect();
    EqualizerResult { k: k.into_groupoid().expect("iso-inserter of groupoids"), objects, arrows, xi, p }
}

/// Full subgroupoid of `G` on objects where two parallel transformations agree.
#[derive(Clone, Debug)]
pub struct EquifierResult {
    pub k: FinGroupoid,
    pub objects: Vec<Obj>,
    pub j: Functor,
}

pub fn equifier(g: &FinGroupoid, xi: &[Arr], xi2: &[Arr]) -> EquifierResult {
    let objects: Vec<Obj> = g.objects().filter(|&o| xi[o] == xi2[o]).collect();
    let (k, incl) = g.full_subcategory(&objects);
    let j = Functor { obj: objects.clone(), arr: incl };
    EquifierResult { k: k.into_groupoid().expect("full subgroupoid"), objects, j }
}

/// A diagram whose limit is computed.
#[derive(Clone, Debug)]
pub enum LimitDiagram {
    Product { g: FinGroupoid, h: FinGroupoid },
    Equalizer { g: FinGroupoid, h: FinGroupoid, phi: Functor, psi: Functor },
    Equifier { g: FinGroupoid, h: FinGroupoid, phi: Functor, psi: Functor, xi: Vec<Arr>, xi2: Vec<Arr> },
}

/// A candidate limit: apex plus structure maps.
#[derive(Clone, Debug)]
pub enum LimitCone {
    Product { apex: FinCategory, p1: Functor, p2: Functor },
    Equalizer { apex: FinCategory, xi: Functor, p: Vec<Arr> },
    Equifier { apex: FinCategory, j: Functor },
}

impl LimitCone {
    pub fn apex(&self) -> &FinCategory {
        match self {
            LimitCone::Product { apex, .. } | LimitCone::Equalizer { apex, .. } | LimitCone::Equifier { apex, .. } => {
                apex
            }
        }
    }
}

pub fn compute_limit(d: &LimitDiagram) -> LimitCone {
    match d {
        LimitDiagram::Product { g, h } => {
            let (apex, p1, p2) = product(g, h);
            LimitCone::Product { apex: apex.into_category(), p1, p2 }
        }
        LimitDiagram::Equalizer { g, h, phi, psi } => {
            let e = equalizer(g, h, phi, psi);
            LimitCone::Equalizer { apex: e.k.into_category(), xi: e.xi, p: e.p }
        }
        LimitDiagram::Equifier { g, xi, xi2, .. } => {
            let e = equifier(g, xi, xi2);
            LimitCone::Equifier { apex: e.k.into_category(), j: e.j }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestVerdict {
    pub test_objects: usize,
    pub cone_objects: usize,
    pub cone_iso_classes: usize,
    pub factorizations: usize,
    pub equivalence: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub passed: bool,
    /// Set when the candidate is not a cone over the diagram at all.
    pub invalid_cone: Option<String>,
    pub per_test: Vec<TestVerdict>,
}

/// For each test groupoid `T`, compares `Fun(T, apex)` with the groupoid of cones
/// from `T` through the comparison functor; passes iff all comparisons are equivalences.
pub fn universal_property_oracle(
    d: &LimitDiagram,
    cone: &LimitCone,
    tests: &[FinCategory],
    budget: u64,
) -> Result<OracleReport> {
    if let Err(reason) = validate_cone(d, cone) {
        return Ok(OracleReport { passed: false, invalid_cone: Some(reason), per_test: Vec::new() });
    }
    let mut per_test = Vec::new();
    for t in tests {
        let (cones, comparison) = cone_groupoid(d, cone, t, budget)?;
        let fl = enumerate_functors(t, cone.apex(), budget)?;
        let comp = comparison(&fl)?;
        let equivalence = is_equivalence(&fl.category, &cones, &comp);
        per_test.push(TestVerdict {
            test_objects: t.num_objects(),
            cone_objects: cones.num_objects(),
            cone_iso_classes: cones.iso_classes().num_classes(),
            factorizations: fl.category.num_objects(),
            equivalence,
        });
    }
    Ok(OracleReport { passed: per_test.iter().all(|v| v.equivalence), invalid_cone: None, per_test })
}

fn validate_cone(d: &LimitDiagram, cone: &LimitCone) -> std::result::Result<(), String> {
    match (d, cone) {
        (LimitDiagram::Product { g, h }, LimitCone::Product { apex, p1, p2 }) => {
            p1.check(apex, g)?;
            p2.check(apex, h)
        }
        (LimitDiagram::Equalizer { g, h, phi, psi }, LimitCone::Equalizer { apex, xi, p }) => {
            xi.check(apex, g)?;
            let (a, b) = (phi.after(xi), psi.after(xi));
            if crate::fincat::is_natural(apex, h, &a, &b, p) {
                Ok(())
            } else {
                Err("p is not natural φξ ⇒ ψξ".into())
            }
        }
        (LimitDiagram::Equifier { g, xi, xi2, .. }, LimitCone::Equifier { apex, j }) => {
            j.check(apex, g)?;
            if apex.objects().all(|o| xi[j.obj[o]] == xi2[j.obj[o]]) {
                Ok(())
            } else {
                Err("the two whiskered transformations differ".into())
            }
        }
        _ => Err("diagram and cone shapes differ".into()),
    }
}

type Comparison<'a> = Box<dyn Fn(&FunctorCategory) -> Result<Functor> + 'a>;

/// The groupoid of cones from `t`, and the comparison functor out of `Fun(t, apex)`.
fn cone_groupoid<'a>(
    d: &'a LimitDiagram,
    cone: &'a LimitCone,
    t: &'a FinCategory,
    budget: u64,
) -> Result<(FinCategory, Comparison<'a>)> {
    match (d, cone) {
        (LimitDiagram::Product { g, h }, LimitCone::Product { p1, p2, .. }) => {
            let fg = enumerate_functors(t, g, budget)?;
            let fh = enumerate_functors(t, h, budget)?;
            let (cones, _, _) = fg.category.product(&fh.category);
            let (ng, nh) = (fh.category.num_objects(), fh.category.num_arrows());
            let cmp = move |fl: &FunctorCategory| -> Result<Functor> {
                let obj = fl
                    .functors
                    .iter()
                    .map(|f| Ok(find(fg.functor_index(&p1.after(f)))? * ng + find(fh.functor_index(&p2.after(f)))?))
                    .collect::<Result<Vec<_>>>()?;
                let arr = fl
                    .transformations
                    .iter()
                    .map(|(i, j, c)| {
                        let gi = fg.functor_index(&p1.after(&fl.functors[*i])).unwrap();
                        let gj = fg.functor_index(&p1.after(&fl.functors[*j])).unwrap();
                        let hi = fh.functor_index(&p2.after(&fl.functors[*i])).unwrap();
                        let hj = fh.functor_index(&p2.after(&fl.functors[*j])).unwrap();
                        let cg: Vec<Arr> = c.iter().map(|&a| p1.arr[a]).collect();
                        let ch: Vec<Arr> = c.iter().map(|&a| p2.arr[a]).collect();
                        Ok(find(fg.transformation_index(gi, gj, &cg))? * nh
                            + find(fh.transformation_index(hi, hj, &ch))?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Functor { obj, arr })
            };
            Ok((cones, Box::new(cmp)))
        }
        (LimitDiagram::Equalizer { g, h, phi, psi }, LimitCone::Equalizer { xi, p, .. }) => {
            let fg = enumerate_functors(t, g, budget)?;
            // objects: (functor a, components β: φa ⇒ ψa)
            let mut objs: Vec<(usize, Vec<Arr>)> = Vec::new();
            for (ai, a) in fg.functors.iter().enumerate() {
                let fa = phi.after(a);
                let ga = psi.after(a);
                for beta in crate::fincat::enumerate_transformations(t, h, &fa, &ga, budget)? {
                    objs.push((ai, beta));
                }
            }
            let mut arrows = Vec::new();
            for (si, (ai, beta)) in objs.iter().enumerate() {
                for (ti, (bi, beta2)) in objs.iter().enumerate() {
                    for (k, (x, y, theta)) in fg.transformations.iter().enumerate() {
                        if x != ai || y != bi {
                            continue;
                        }
                        let ok = t
                            .objects()
                            .all(|o| h.comp(beta2[o], phi.arr[theta[o]]) == h.comp(psi.arr[theta[o]], beta[o]));
                        if ok {
                            arrows.push((k, si, ti));
                        }
                    }
                }
            }
            let index: HashMap<(usize, usize, usize), usize> =
                arrows.iter().enumerate().map(|(n, &x)| (x, n)).collect();
            let ids = objs
                .iter()
                .enumerate()
                .map(|(si, (ai, _))| {
                    let id_t = fg
                        .transformation_index(
                            *ai,
                            *ai,
                            &t.objects().map(|o| g.id(fg.functors[*ai].obj[o])).collect::<Vec<_>>(),
                        )
                        .unwrap();
                    index[&(id_t, si, si)]
                })
                .collect();
            let names = (0..objs.len()).map(|i| format!("c{i}")).collect();
            let arr_list = arrows.iter().enumerate().map(|(n, &(_, s, tt))| (format!("m{n}"), s, tt)).collect();
            let cones = FinCategory::from_fn_unchecked(names, arr_list, ids, |b, a| {
                let (ka, sa, _) = arrows[a];
                let (kb, _, tb) = arrows[b];
                index[&(fg.category.comp(kb, ka), sa, tb)]
            });
            let cmp = move |fl: &FunctorCategory| -> Result<Functor> {
                let obj_of = |f: &Functor| -> Result<usize> {
                    let ai = find(fg.functor_index(&xi.after(f)))?;
                    let beta: Vec<Arr> = f.obj.iter().map(|&o| p[o]).collect();
                    find(objs.iter().position(|(x, b)| *x == ai && *b == beta))
                };
                let obj = fl.functors.iter().map(obj_of).collect::<Result<Vec<_>>>()?;
                let arr = fl
                    .transformations
                    .iter()
                    .map(|(i, j, c)| {
                        let (si, ti) = (obj[*i], obj[*j]);
                        let theta: Vec<Arr> = c.iter().map(|&a| xi.arr[a]).collect();
                        let k = find(fg.transformation_index(objs[si].0, objs[ti].0, &theta))?;
                        find(index.get(&(k, si, ti)).copied())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Functor { obj, arr })
            };
            Ok((cones, Box::new(cmp)))
        }
        (LimitDiagram::Equifier { g, xi, xi2, .. }, LimitCone::Equifier { j, .. }) => {
            let fg = enumerate_functors(t, g, budget)?;
            let keep: Vec<usize> = fg
                .functors
                .iter()
                .enumerate()
                .filter(|(_, a)| a.obj.iter().all(|&o| xi[o] == xi2[o]))
                .map(|(i, _)| i)
                .collect();
            let (cones, incl) = fg.category.full_subcategory(&keep);
            let cmp = move |fl: &FunctorCategory| -> Result<Functor> {
                let obj = fl
                    .functors
                    .iter()
                    .map(|f| {
                        let i = find(fg.functor_index(&j.after(f)))?;
                        find(keep.iter().position(|&k| k == i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let arr = fl
                    .transformations
                    .iter()
                    .map(|(a, b, c)| {
                        let ia = keep[obj[*a]];
                        let ib = keep[obj[*b]];
                        let comp: Vec<Arr> = c.iter().map(|&x| j.arr[x]).collect();
                        let k = find(fg.transformation_index(ia, ib, &comp))?;
                        find(incl.iter().position(|&x| x == k))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Functor { obj, arr })
            };
            Ok((cones, Box::new(cmp)))
        }
        _ => Err(Error::Precondition("diagram and cone shapes differ".into())),
    }
}

fn find<T>(x: Option<T>) -> Result<T> {
    x.ok_or_else(|| Error::Precondition("comparison leaves the cone groupoid".into()))
}

/// Negative controls: three corruptions of computed limits that must fail the oracle.
pub fn corrupted_controls(diagrams: &[LimitDiagram]) -> Vec<(String, LimitDiagram, LimitCone)> {
    let mut out = Vec::new();
    for d in diagrams {
        match (d, compute_limit(d)) {
            (LimitDiagram::Product { .. }, LimitCone::Product { apex, p1, p2 }) if apex.num_objects() > 0 => {
                if out.iter().any(|(n, _, _): &(String, _, _)| n.starts_with("product")) {
                    continue;
                }
                let keep: Vec<Obj> = (0..apex.num_objects() - 1).collect();
                let (sub, incl) = apex.full_subcategory(&keep);
                let restrict = |f: &Functor| Functor {
                    obj: keep.iter().map(|&o| f.obj[o]).collect(),
                    arr: incl.iter().map(|&a| f.arr[a]).collect(),
                };
                let cone = LimitCone::Product { p1: restrict(&p1), p2: restrict(&p2), apex: sub };
                out.push(("product with an object dropped".to_string(), d.clone(), cone));
            }
            (LimitDiagram::Equalizer { .. }, LimitCone::Equalizer { apex, xi, p })
                if apex.arrows().any(|a| !apex.is_identity(a)) =>
            {
                if out.iter().any(|(n, _, _): &(String, _, _)| n.starts_with("equalizer")) {
                    continue;
                }
                let n = apex.num_objects();
                let disc = FinCategory::discrete(n);
                let xi2 = Functor { obj: xi.obj.clone(), arr: (0..n).map(|o| xi.arr[apex.id(o)]).collect() };
                let cone = LimitCone::Equalizer { apex: disc, xi: xi2, p };
                out.push(("equalizer with non-identity arrows dropped".to_string(), d.clone(), cone));
            }
            (LimitDiagram::Equifier { g, xi, xi2, .. }, _) if xi != xi2 => {
                if out.iter().any(|(n, _, _): &(String, _, _)| n.starts_with("equifier")) {
                    continue;
                }
                let cone = LimitCone::Equifier { apex: g.category().clone(), j: crate::fincat::identity_functor(g) };
                out.push(("equifier replaced by the whole groupoid".to_string(), d.clone(), cone));
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests;
