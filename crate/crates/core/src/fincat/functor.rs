use std::collections::HashMap;

use super::search::FunctorSearch;
use super::{Arr, FinCategory, Obj};
use crate::error::{Error, Result};

/// Object and arrow maps of a functor. Endpoints are supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functor {
    pub obj: Vec<Obj>,
    pub arr: Vec<Arr>,
}

impl Functor {
    /// Exhaustive check of endpoints, identities and composition.
    pub fn check(&self, dom: &FinCategory, cod: &FinCategory) -> std::result::Result<(), String> {
        if self.obj.len() != dom.num_objects() || self.arr.len() != dom.num_arrows() {
            return Err("map sizes do not match the domain".into());
        }
        if self.obj.iter().any(|&o| o >= cod.num_objects()) || self.arr.iter().any(|&f| f >= cod.num_arrows()) {
            return Err("image out of range".into());
        }
        for f in dom.arrows() {
            let g = self.arr[f];
            if cod.src(g) != self.obj[dom.src(f)] || cod.tgt(g) != self.obj[dom.tgt(f)] {
                return Err(format!("arrow {} not sent over its endpoints", dom.arr_name(f)));
            }
        }
        for o in dom.objects() {
            if self.arr[dom.id(o)] != cod.id(self.obj[o]) {
                return Err(format!("identity at {} not preserved", dom.obj_name(o)));
            }
        }
        for f in dom.arrows() {
            for g in dom.arrows() {
                if let Some(h) = dom.compose(f, g) {
                    if cod.compose(self.arr[f], self.arr[g]) != Some(self.arr[h]) {
                        return Err(format!("composite {}∘{} not preserved", dom.arr_name(f), dom.arr_name(g)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        compose_functors(self, first)
    }
}

pub fn identity_functor(c: &FinCategory) -> Functor {
    Functor { obj: c.objects().collect(), arr: c.arrows().collect() }
}

/// `g ∘ f`.
pub fn compose_functors(g: &Functor, f: &Functor) -> Functor {
    Functor { obj: f.obj.iter().map(|&o| g.obj[o]).collect(), arr: f.arr.iter().map(|&a| g.arr[a]).collect() }
}

/// A natural transformation, by its components indexed by domain objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NatTransform {
    pub comp: Vec<Arr>,
}

/// Whether `comp` is a natural transformation `f ⇒ g` between functors `dom → cod`.
pub fn is_natural(dom: &FinCategory, cod: &FinCategory, f: &Functor, g: &Functor, comp: &[Arr]) -> bool {
    if comp.len() != dom.num_objects() {
        return false;
    }
    for o in dom.objects() {
        if cod.src(comp[o]) != f.obj[o] || cod.tgt(comp[o]) != g.obj[o] {
            return false;
        }
    }
    dom.arrows().all(|a| {
        let (s, t) = (dom.src(a), dom.tgt(a));
        cod.compose(g.arr[a], comp[s]) == cod.compose(comp[t], f.arr[a])
    })
}

/// All natural transformations `f ⇒ g`, in lexicographic order of components.
pub fn enumerate_transformations(
    dom: &FinCategory,
    cod: &FinCategory,
    f: &Functor,
    g: &Functor,
    budget: u64,
) -> Result<Vec<Vec<Arr>>> {
    let mut closing: Vec<Vec<Arr>> = vec![Vec::new(); dom.num_objects()];
    for a in dom.arrows() {
        closing[dom.src(a).max(dom.tgt(a))].push(a);
    }
    let mut out = Vec::new();
    let mut comp = vec![usize::MAX; dom.num_objects()];
    let mut steps = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        o: Obj,
        dom: &FinCategory,
        cod: &FinCategory,
        f: &Functor,
        g: &Functor,
        closing: &[Vec<Arr>],
        comp: &mut Vec<Arr>,
        out: &mut Vec<Vec<Arr>>,
        steps: &mut u64,
        budget: u64,
    ) -> Result<()> {
        if o == dom.num_objects() {
            out.push(comp.clone());
            return Ok(());
        }
        for &c in cod.hom(f.obj[o], g.obj[o]) {
            *steps += 1;
            if *steps > budget {
                return Err(Error::BudgetExceeded { what: "transformation enumeration", limit: budget });
            }
            comp[o] = c;
            let ok = closing[o].iter().all(|&a| {
                let (s, t) = (dom.src(a), dom.tgt(a));
                cod.compose(g.arr[a], comp[s]) == cod.compose(comp[t], f.arr[a])
            });
            if ok {
                rec(o + 1, dom, cod, f, g, closing, comp, out, steps, budget)?;
            }
        }
        comp[o] = usize::MAX;
        Ok(())
    }
    rec(0, dom, cod, f, g, &closing, &mut comp, &mut out, &mut steps, budget)?;
    Ok(out)
}

/// The category of functors `dom → cod` and natural transformations.
#[derive(Clone, Debug)]
pub struct FunctorCategory {
    pub functors: Vec<Functor>,
    /// `(source functor, target functor, components)` for each arrow of `category`.
    pub transformations: Vec<(usize, usize, Vec<Arr>)>,
    pub category: FinCategory,
}

impl FunctorCategory {
    /// Assembles the category from functors and all transformations between them.
    pub fn assemble(
        dom: &FinCategory,
        cod: &FinCategory,
        functors: Vec<Functor>,
        budget: u64,
    ) -> Result<FunctorCategory> {
        let mut transformations = Vec::new();
        let mut spent = 0u64;
        for i in 0..functors.len() {
            for j in 0..functors.len() {
                let ts = enumerate_transformations(dom, cod, &functors[i], &functors[j], budget.saturating_sub(spent))?;
                spent += ts.len() as u64;
                transformations.extend(ts.into_iter().map(|c| (i, j, c)));
            }
        }
        let index: HashMap<(usize, usize, &[Arr]), usize> =
            transformations.iter().enumerate().map(|(k, (i, j, c))| ((*i, *j, c.as_slice()), k)).collect();
        let ids: Vec<usize> = (0..functors.len())
            .map(|i| {
                let comp: Vec<Arr> = dom.objects().map(|o| cod.id(functors[i].obj[o])).collect();
                index[&(i, i, comp.as_slice())]
            })
            .collect();
        let names = (0..functors.len()).map(|i| format!("F{i}")).collect();
        let arrows = transformations.iter().enumerate().map(|(k, (i, j, _))| (format!("t{k}"), *i, *j)).collect();
        let category = FinCategory::from_fn_unchecked(names, arrows, ids, |b, a| {
            let (i, _, ca) = &transformations[a];
            let (_, k, cb) = &transformations[b];
            let comp: Vec<Arr> = dom.objects().map(|o| cod.comp(cb[o], ca[o])).collect();
            index[&(*i, *k, comp.as_slice())]
        });
        Ok(FunctorCategory { functors, transformations, category })
    }
}

impl FunctorCategory {
    pub fn functor_index(&self, f: &Functor) -> Option<usize> {
        self.functors.iter().position(|g| g == f)
    }

    /// Arrow of `category` for the transformation `i ⇒ j` with the given components.
    pub fn transformation_index(&self, i: usize, j: usize, comp: &[Arr]) -> Option<usize> {
        self.transformations.iter().position(|(a, b, c)| *a == i && *b == j && c.as_slice() == comp)
    }

    /// Precomposition with `along: C → D`, from `self = Fun(D, T)` to `inner = Fun(C, T)`.
    pub fn restrict_along(&self, inner: &FunctorCategory, along: &Functor) -> Option<Functor> {
        let fidx: HashMap<&Functor, usize> = inner.functors.iter().enumerate().map(|(k, f)| (f, k)).collect();
        let tidx: HashMap<(usize, usize, &[Arr]), usize> =
            inner.transformations.iter().enumerate().map(|(k, (i, j, c))| ((*i, *j, c.as_slice()), k)).collect();
        let obj = self.functors.iter().map(|f| fidx.get(&f.after(along)).copied()).collect::<Option<Vec<_>>>()?;
        let arr = self
            .transformations
            .iter()
            .map(|(i, j, comp)| {
                let restricted: Vec<Arr> = along.obj.iter().map(|&o| comp[o]).collect();
                tidx.get(&(obj[*i], obj[*j], restricted.as_slice())).copied()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Functor { obj, arr })
    }
}

/// All functors `dom → cod` with all natural transformations between them.
pub fn enumerate_functors(dom: &FinCategory, cod: &FinCategory, budget: u64) -> Result<FunctorCategory> {
    let functors = FunctorSearch::new(dom, cod, false, budget, usize::MAX).run()?;
    FunctorCategory::assemble(dom, cod, functors, budget)
}

/// An isomorphism of categories `c → d`, if one exists.
pub fn find_isomorphism(c: &FinCategory, d: &FinCategory, budget: u64) -> Result<Option<Functor>> {
    Ok(FunctorSearch::new(c, d, true, budget, 1).run()?.into_iter().next())
}

/// Fully faithful and essentially surjective.
pub fn is_equivalence(c: &FinCategory, d: &FinCategory, f: &Functor) -> bool {
    if f.check(c, d).is_err() {
        return false;
    }
    for a in c.objects() {
        for b in c.objects() {
            let mut imgs: Vec<Arr> = c.hom(a, b).iter().map(|&x| f.arr[x]).collect();
            imgs.sort_unstable();
            imgs.dedup();
            if imgs.len() != c.hom(a, b).len() || imgs.len() != d.hom(f.obj[a], f.obj[b]).len() {
                return false;
            }
        }
    }
    let mut hit = vec![false; d.num_objects()];
    for &o in &f.obj {
        hit[o] = true;
    }
    for y in d.objects() {
        if !hit[y] {
            let reached = c.objects().any(|a| d.hom(f.obj[a], y).iter().any(|&g| d.is_iso(g)));
            if !reached {
                return false;
            }
        }
    }
    true
}

/// Result of [`equivalence_check`]: a verified witness functor, if the categories are equivalent.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub witness: Functor,
    pub skeleton_objects: usize,
}

/// Decides `c ≃ d` by comparing skeleta up to isomorphism; the witness `c → d`
/// is re-verified to be fully faithful and essentially surjective.
pub fn equivalence_check(c: &FinCategory, d: &FinCategory, budget: u64) -> Result<Option<Equivalence>> {
    let (sc, rc) = c.skeleton();
    let (sd, rd) = d.skeleton();
    let Some(iso) = find_isomorphism(&sc, &sd, budget)? else {
        return Ok(None);
    };
    let classes = c.iso_classes();
    // u[o]: chosen iso o → rep(o), with its inverse
    let mut u = vec![(0usize, 0usize); c.num_objects()];
    for o in c.objects() {
        let r = rc[classes.class_of[o]];
        let a = c.hom(o, r).iter().copied().find(|&a| c.is_iso(a)).expect("iso to representative");
        u[o] = (a, c.inverse_of(a).unwrap());
    }
    let (_, incl_c) = c.full_subcategory(&rc);
    let mut sc_arrow = vec![usize::MAX; c.num_arrows()];
    for (k, &a) in incl_c.iter().enumerate() {
        sc_arrow[a] = k;
    }
    let (_, incl_d) = d.full_subcategory(&rd);
    let witness = Functor {
        obj: c.objects().map(|o| rd[iso.obj[classes.class_of[o]]]).collect(),
        arr: c
            .arrows()
            .map(|f| {
                let (s, t) = (c.src(f), c.tgt(f));
                let moved = c.comp(u[t].0, c.comp(f, u[s].1));
                incl_d[iso.arr[sc_arrow[moved]]]
            })
            .collect(),
    };
    if !is_equivalence(c, d, &witness) {
        return Err(Error::Precondition("internal: equivalence witness failed verification".into()));
    }
    Ok(Some(Equivalence { witness, skeleton_objects: sc.num_objects() }))
}
