//! Right G-torsors in cartesian 2-ring instances: axioms, enumeration, morphisms,
//! pushforward along groupoid maps, and descent along equalizers.

mod descent;
mod gset;

use std::borrow::Cow;
use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Arr, FinCategory, FinGroupoid, Functor, Obj};
use crate::topos::CartRing;

pub use descent::{
    descent_s, descent_t, equifier_scenario, round_trip_st, round_trip_ts, DescentDatum, DescentS, EquifierScenario,
    RoundTrip,
};
pub use gset::{
    pushforward_gset, split_fork, CounitCertificate, Equivariant, EtaComponent, EtaReport, ForkReport, GSet, Pushed,
    TauComponent,
};

use gset::{components_of, ComponentFrame};

/// Values of `x̂` in the ambient instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepData {
    /// One G-set per object of the base category (a single one for FinSet), and for
    /// each base arrow `u` and object `s`, `trans[u][s]: fibre(src u)(s) → fibre(tgt u)(s)`.
    Sets { fibres: Vec<GSet>, trans: Vec<Vec<Vec<usize>>> },
    /// A lattice element per object, constant on components.
    Lattice(Vec<usize>),
}

/// A functor `G^op → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightGRep {
    pub ring: CartRing,
    pub g: FinGroupoid,
    pub data: RepData,
}

/// A map of representations: one equivariant map per fibre (empty for lattices).
pub type RepMap = Vec<Equivariant>;

/// The base category whose presheaves form the instance; FinSet is presheaves on a point.
pub fn base_category(ring: &CartRing) -> Option<Cow<'_, FinCategory>> {
    match ring {
        CartRing::FinSet => Some(Cow::Owned(FinCategory::terminal())),
        CartRing::Presheaf(c) => Some(Cow::Borrowed(c)),
        CartRing::Lattice(_) => None,
    }
}

impl RightGRep {
    /// A single G-set as a FinSet-valued representation.
    pub fn from_gset(g: &FinGroupoid, x: GSet) -> RightGRep {
        let id = (0..x.sizes.len()).map(|s| (0..x.sizes[s]).collect()).collect();
        RightGRep { ring: CartRing::FinSet, g: g.clone(), data: RepData::Sets { fibres: vec![x], trans: vec![id] } }
    }

    /// The right regular representation `G(−, r)` in FinSet.
    pub fn regular(g: &FinGroupoid, r: Obj) -> RightGRep {
        Self::from_gset(g, GSet::representable(g, r))
    }

    pub fn fibres(&self) -> &[GSet] {
        match &self.data {
            RepData::Sets { fibres, .. } => fibres,
            RepData::Lattice(_) => &[],
        }
    }

    pub fn check(&self) -> Result<()> {
        let g = &self.g;
        match (&self.ring, &self.data) {
            (CartRing::Lattice(l), RepData::Lattice(v)) => {
                if v.len() != g.num_objects() || v.iter().any(|&a| a >= l.size()) {
                    return Err(Error::Precondition("lattice values do not match the groupoid".into()));
                }
                for a in g.arrows() {
                    if !l.leq(v[g.tgt(a)], v[g.src(a)]) {
                        return Err(Error::Precondition(format!("no map along {}", g.arr_name(a))));
                    }
                }
                Ok(())
            }
            (ring, RepData::Sets { fibres, trans }) => {
                let c = base_category(ring).ok_or(Error::MixedInstance)?;
                if fibres.len() != c.num_objects() || trans.len() != c.num_arrows() {
                    return Err(Error::Precondition("fibres do not match the base category".into()));
                }
                for x in fibres {
                    x.check(g).map_err(Error::Precondition)?;
                }
                for u in c.arrows() {
                    let (a, b) = (&fibres[c.src(u)], &fibres[c.tgt(u)]);
                    let m = &trans[u];
                    if m.len() != g.num_objects()
                        || g.objects().any(|s| m[s].len() != a.sizes[s] || m[s].iter().any(|&y| y >= b.sizes[s]))
                    {
                        return Err(Error::Precondition(format!("base map {} has wrong endpoints", c.arr_name(u))));
                    }
                    if !is_equivariant(g, a, b, m) {
                        return Err(Error::Precondition(format!("base map {} is not equivariant", c.arr_name(u))));
                    }
                    if c.is_identity(u) && g.objects().any(|s| m[s].iter().enumerate().any(|(i, &y)| i != y)) {
                        return Err(Error::Precondition("base identity acts nontrivially".into()));
                    }
                }
                for u in c.arrows() {
                    for v in c.arrows() {
                        if let Some(uv) = c.compose(u, v) {
                            for s in g.objects() {
                                if (0..fibres[c.src(v)].sizes[s])
                                    .any(|x| trans[u][s][trans[v][s][x]] != trans[uv][s][x])
                                {
                                    return Err(Error::Precondition("base maps are not functorial".into()));
                                }
                            }
                        }
                    }
                }
                Ok(())
            }
            _ => Err(Error::MixedInstance),
        }
    }
}

pub(crate) fn is_equivariant(g: &FinCategory, a: &GSet, b: &GSet, f: &Equivariant) -> bool {
    g.arrows().all(|k| {
        let (s, t) = (g.src(k), g.tgt(k));
        (0..a.sizes[t]).all(|x| f[s][a.act[k][x]] == b.act[k][f[t][x]])
    })
}

/// Certificates that `x̂` is a torsor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorWitness {
    pub rep: RightGRep,
    /// Per fibre, `τ` at every component pair with its inverse.
    pub tau: Vec<Vec<TauComponent>>,
    /// Per fibre, the colimit over `G^op` (a single class).
    pub counit: Vec<CounitCertificate>,
    /// Objects carrying elements.
    pub support: Vec<Obj>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorFailure {
    pub tau_iso: bool,
    pub counit_iso: bool,
    pub reason: String,
}

/// `τ` verdict for every fibre; the lattice form compares `x(t)` with `x(t) ∧ x(s)`.
pub fn tau_map(x: &RightGRep) -> (bool, Vec<Vec<TauComponent>>) {
    match (&x.ring, &x.data) {
        (CartRing::Lattice(l), RepData::Lattice(v)) => {
            let comps = x.g.connected_components();
            let ok = x
                .g
                .objects()
                .all(|t| x.g.objects().all(|s| comps.class_of[s] != comps.class_of[t] || v[t] == l.meet(v[t], v[s])));
            (ok, vec![])
        }
        _ => {
            let per: Vec<Vec<TauComponent>> = x.fibres().iter().map(|f| f.tau(&x.g)).collect();
            (per.iter().flatten().all(|c| c.bijective), per)
        }
    }
}

/// Whether the colimit of `x̂` over `G^op` is terminal.
pub fn counit_is_colimit(x: &RightGRep) -> (bool, Vec<CounitCertificate>) {
    match (&x.ring, &x.data) {
        (CartRing::Lattice(l), RepData::Lattice(v)) => {
            let j = v.iter().fold(l.bottom(), |a, &b| l.join(a, b));
            (j == l.top(), vec![])
        }
        _ => {
            let per: Vec<CounitCertificate> = x.fibres().iter().map(|f| f.counit(&x.g)).collect();
            (per.iter().all(|c| c.colimit_size == 1), per)
        }
    }
}

pub fn is_torsor(x: &RightGRep) -> std::result::Result<TorsorWitness, TorsorFailure> {
    if let Err(e) = x.check() {
        return Err(TorsorFailure { tau_iso: false, counit_iso: false, reason: e.to_string() });
    }
    let (tau_iso, tau) = tau_map(x);
    let (counit_iso, counit) = counit_is_colimit(x);
    if tau_iso && counit_iso {
        let support = match &x.data {
            RepData::Lattice(v) => {
                let bottom = match &x.ring {
                    CartRing::Lattice(l) => l.bottom(),
                    _ => unreachable!(),
                };
                (0..v.len()).filter(|&o| v[o] != bottom).collect()
            }
            RepData::Sets { fibres, .. } => {
                (0..x.g.num_objects()).filter(|&o| fibres.iter().any(|f| f.sizes[o] > 0)).collect()
            }
        };
        Ok(TorsorWitness { rep: x.clone(), tau, counit, support })
    } else {
        let reason = match (tau_iso, counit_iso) {
            (false, false) => "τ is not invertible and the colimit is not terminal",
            (false, true) => "τ is not invertible",
            _ => "the colimit over G^op is not terminal",
        };
        Err(TorsorFailure { tau_iso, counit_iso, reason: reason.into() })
    }
}

/// All maps of representations `x → y` (equivariant in G, natural over the base).
pub fn hom_reps(x: &RightGRep, y: &RightGRep, bijective: bool) -> Vec<RepMap> {
    match (&x.ring, &x.data, &y.data) {
        (CartRing::Lattice(l), RepData::Lattice(a), RepData::Lattice(b)) => {
            let ok = if bijective { a == b } else { a.iter().zip(b).all(|(&p, &q)| l.leq(p, q)) };
            if ok {
                vec![vec![]]
            } else {
                vec![]
            }
        }
        (ring, RepData::Sets { fibres: fx, trans: tx }, RepData::Sets { fibres: fy, trans: ty }) => {
            let c = base_category(ring).expect("set-like instance");
            let per: Vec<Vec<Equivariant>> =
                fx.iter().zip(fy).map(|(a, b)| a.equivariant_maps(b, &x.g, bijective, usize::MAX)).collect();
            per.into_iter()
                .multi_cartesian_product()
                .filter(|f| {
                    c.arrows().all(|u| {
                        let (p, q) = (c.src(u), c.tgt(u));
                        x.g.objects().all(|s| (0..fx[p].sizes[s]).all(|e| f[q][s][tx[u][s][e]] == ty[u][s][f[p][s][e]]))
                    })
                })
                .collect()
        }
        _ => vec![],
    }
}

/// All torsor morphisms `x̂ → ŷ`.
pub fn hom_torsors(x: &TorsorWitness, y: &TorsorWitness) -> Vec<RepMap> {
    hom_reps(&x.rep, &y.rep, false)
}

pub fn rep_map_is_invertible(x: &RightGRep, y: &RightGRep, f: &RepMap) -> bool {
    match (&x.data, &y.data) {
        (RepData::Lattice(a), RepData::Lattice(b)) => a == b,
        (RepData::Sets { fibres: fx, .. }, RepData::Sets { fibres: fy, .. }) => {
            fx.iter().zip(fy).zip(f).all(|((a, b), m)| {
                a.sizes == b.sizes
                    && m.iter().zip(&b.sizes).all(|(v, &n)| {
                        let mut seen = vec![false; n];
                        v.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
                    })
            })
        }
        _ => false,
    }
}

pub fn compose_rep_maps(g: &RepMap, f: &RepMap) -> RepMap {
    g.iter()
        .zip(f)
        .map(|(gc, fc)| gc.iter().zip(fc).map(|(gs, fs)| fs.iter().map(|&x| gs[x]).collect()).collect())
        .collect()
}

fn identity_rep_map(x: &RightGRep) -> RepMap {
    x.fibres().iter().map(|f| f.sizes.iter().map(|&n| (0..n).collect()).collect()).collect()
}

/// Torsors (one per isomorphism class) with all torsor morphisms between them.
#[derive(Clone, Debug)]
pub struct TorsorGroupoid {
    pub torsors: Vec<TorsorWitness>,
    pub arrows: Vec<(usize, usize, RepMap)>,
    pub category: FinCategory,
}

impl TorsorGroupoid {
    pub fn assemble(torsors: Vec<TorsorWitness>) -> TorsorGroupoid {
        let mut arrows = Vec::new();
        for i in 0..torsors.len() {
            for j in 0..torsors.len() {
                for f in hom_torsors(&torsors[i], &torsors[j]) {
                    arrows.push((i, j, f));
                }
            }
        }
        let index: HashMap<(usize, usize, &RepMap), usize> =
            arrows.iter().enumerate().map(|(k, (i, j, f))| ((*i, *j, f), k)).collect();
        let ids: Vec<usize> =
            torsors.iter().enumerate().map(|(i, t)| index[&(i, i, &identity_rep_map(&t.rep))]).collect();
        let names = (0..torsors.len()).map(|i| format!("T{i}")).collect();
        let arr_list = arrows.iter().enumerate().map(|(k, (i, j, _))| (format!("m{k}"), *i, *j)).collect();
        let category = FinCategory::from_fn_unchecked(names, arr_list, ids, |b, a| {
            let (i, _, fa) = &arrows[a];
            let (_, k, fb) = &arrows[b];
            index[&(*i, *k, &compose_rep_maps(fb, fa))]
        });
        TorsorGroupoid { torsors, arrows, category }
    }

    /// Every torsor morphism is invertible.
    pub fn all_invertible(&self) -> bool {
        self.arrows.iter().all(|(i, j, f)| rep_map_is_invertible(&self.torsors[*i].rep, &self.torsors[*j].rep, f))
    }

    /// Automorphism group orders, one per torsor.
    pub fn automorphism_orders(&self) -> Vec<usize> {
        (0..self.torsors.len()).map(|i| self.category.hom(i, i).len()).collect()
    }
}

/// Enumerates torsors in FinSet or presheaves with every set of at most `bound`
/// elements, up to isomorphism.
pub fn enumerate_torsors(g: &FinGroupoid, ring: &CartRing, bound: usize, budget: u64) -> Result<TorsorGroupoid> {
    let mut budget = budget;
    let set_torsors = enumerate_set_torsors(g, bound, &mut budget)?;
    let reps: Vec<RightGRep> = match ring {
        CartRing::FinSet => set_torsors.into_iter().map(|x| RightGRep::from_gset(g, x)).collect(),
        CartRing::Presheaf(c) => presheaf_candidates(g, c, &set_torsors, &mut budget)?,
        CartRing::Lattice(_) => {
            return Err(Error::Precondition("torsor enumeration covers FinSet and presheaf instances".into()))
        }
    };
    let mut found: Vec<TorsorWitness> = Vec::new();
    for r in reps {
        if let Ok(w) = is_torsor(&r) {
            if !found.iter().any(|f| !hom_reps(&f.rep, &w.rep, true).is_empty()) {
                found.push(w);
            }
        }
    }
    Ok(TorsorGroupoid::assemble(found))
}

/// Torsors in FinSet up to isomorphism. Each component contributes canonical actions
/// that are pseudotorsors on it (τ is checked componentwise); combinations are then
/// filtered by the full torsor test and deduplicated.
fn enumerate_set_torsors(g: &FinGroupoid, bound: usize, budget: &mut u64) -> Result<Vec<GSet>> {
    let comps = components_of(g);
    let mut per_comp: Vec<Vec<GSet>> = Vec::new();
    for objs in comps {
        let frame = ComponentFrame::new(g, objs);
        let mut cands = Vec::new();
        for n in 0..=bound {
            for rho in frame.actions(n, budget)? {
                let mut piece = GSet::empty(g);
                frame.extend(g, &rho, n, &mut piece);
                let tau = piece.tau(g);
                if tau.iter().filter(|c| frame.objects.contains(&c.t)).all(|c| c.bijective) {
                    cands.push(piece);
                }
            }
        }
        per_comp.push(cands);
    }
    let mut out: Vec<GSet> = Vec::new();
    let combos: Box<dyn Iterator<Item = Vec<GSet>>> = if per_comp.is_empty() {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(per_comp.into_iter().multi_cartesian_product())
    };
    for pieces in combos {
        let mut x = GSet::empty(g);
        for p in &pieces {
            for o in g.objects() {
                if p.sizes[o] > 0 {
                    x.sizes[o] = p.sizes[o];
                }
            }
            for a in g.arrows() {
                if !p.act[a].is_empty() {
                    x.act[a] = p.act[a].clone();
                }
            }
        }
        let rep = RightGRep::from_gset(g, x.clone());
        if is_torsor(&rep).is_ok() && !out.iter().any(|y| y.is_isomorphic(&x, g)) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Presheaves of torsors: a torsor per base object and an equivariant map per base arrow.
fn presheaf_candidates(g: &FinGroupoid, c: &FinCategory, fibres: &[GSet], budget: &mut u64) -> Result<Vec<RightGRep>> {
    let mut out = Vec::new();
    let no = c.num_objects();
    for choice in (0..no).map(|_| 0..fibres.len()).multi_cartesian_product() {
        let fs: Vec<GSet> = choice.iter().map(|&i| fibres[i].clone()).collect();
        let per_arrow: Vec<Vec<Equivariant>> = c
            .arrows()
            .map(|u| {
                if c.is_identity(u) {
                    vec![fs[c.src(u)].sizes.iter().map(|&n| (0..n).collect()).collect()]
                } else {
                    fs[c.src(u)].equivariant_maps(&fs[c.tgt(u)], g, false, usize::MAX)
                }
            })
            .collect();
        let iter: Box<dyn Iterator<Item = Vec<Equivariant>>> = if per_arrow.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(per_arrow.into_iter().multi_cartesian_product())
        };
        for trans in iter {
            if *budget == 0 {
                return Err(Error::BudgetExceeded { what: "torsor enumeration", limit: 0 });
            }
            *budget -= 1;
            let rep = RightGRep {
                ring: CartRing::Presheaf(c.clone()),
                g: g.clone(),
                data: RepData::Sets { fibres: fs.clone(), trans },
            };
            if rep.check().is_ok() {
                out.push(rep);
            }
        }
    }
    Ok(out)
}

/// The result of pushing a torsor forward, with per-fibre provenance.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub witness: TorsorWitness,
    pub pushed: Vec<Pushed>,
}

/// `x̂ ⊠_φ H`, fibrewise, with the torsor axioms re-verified.
pub fn pushforward(x: &TorsorWitness, h: &FinGroupoid, phi: &Functor) -> Result<Pushforward> {
    let g = &x.rep.g;
    phi.check(g, h).map_err(Error::Precondition)?;
    let (data, pushed) = match (&x.rep.ring, &x.rep.data) {
        (CartRing::Lattice(l), RepData::Lattice(v)) => {
            let vals = h
                .objects()
                .map(|u| {
                    g.objects().filter(|&t| !h.hom(u, phi.obj[t]).is_empty()).fold(l.bottom(), |a, t| l.join(a, v[t]))
                })
                .collect();
            (RepData::Lattice(vals), vec![])
        }
        (ring, RepData::Sets { fibres, trans }) => {
            let c = base_category(ring).expect("set-like instance");
            let pushed: Vec<Pushed> = fibres.iter().map(|f| pushforward_gset(f, g, h, phi)).collect();
            let new_trans = c
                .arrows()
                .map(|u| {
                    let (p, q) = (c.src(u), c.tgt(u));
                    pushed[p].induced(&pushed[q], &trans[u])
                })
                .collect();
            (RepData::Sets { fibres: pushed.iter().map(|p| p.set.clone()).collect(), trans: new_trans }, pushed)
        }
        _ => return Err(Error::MixedInstance),
    };
    let rep = RightGRep { ring: x.rep.ring.clone(), g: h.clone(), data };
    let witness = is_torsor(&rep).map_err(|f| Error::PushforwardNotTorsor(f.reason))?;
    Ok(Pushforward { witness, pushed })
}

/// `η` for every fibre (lattice: both sides are `x(s)` on a component, bottom elsewhere).
pub fn eta_iso_check(x: &RightGRep) -> bool {
    match &x.data {
        RepData::Lattice(_) => true,
        RepData::Sets { fibres, .. } => fibres.iter().all(|f| f.eta_iso(&x.g).iso),
    }
}

/// Both split-fork lemmas for a torsor morphism, at every fibre and object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotensorReport {
    pub cotensor: Vec<ForkReport>,
    pub cotensor2: Vec<ForkReport>,
}

impl CotensorReport {
    pub fn split(&self) -> bool {
        self.cotensor.iter().chain(&self.cotensor2).all(|r| r.split())
    }
}

pub fn cotensor_split_check(x: &RightGRep, y: &RightGRep, f: &RepMap) -> CotensorReport {
    let g = &x.g;
    let mut cotensor = Vec::new();
    let mut cotensor2 = Vec::new();
    for ((fx, fy), fc) in x.fibres().iter().zip(y.fibres()).zip(f) {
        for s in g.objects() {
            let m = &fc[s];
            cotensor.push(split_fork(m, fy.sizes[s], &|xi| (xi, m[xi])));
            // x ⊠_{G₀} G at s: pairs (ξ ∈ x(t), a: s → t), tagged by a
            let mut dom = Vec::new();
            let mut cod_index = HashMap::new();
            for t in g.objects() {
                for &a in g.hom(s, t) {
                    for eta in 0..fy.sizes[t] {
                        cod_index.insert((t, eta, a), cod_index.len());
                    }
                    for xi in 0..fx.sizes[t] {
                        dom.push((t, xi, a));
                    }
                }
            }
            let tagged: Vec<usize> = dom.iter().map(|&(t, xi, a)| cod_index[&(t, fc[t][xi], a)]).collect();
            cotensor2.push(split_fork(&tagged, cod_index.len(), &|i| (i, tagged[i])));
        }
    }
    CotensorReport { cotensor, cotensor2 }
}

/// Lattice-valued torsors over `g`: one value per component, filtered by the axioms.
pub fn lattice_torsors(g: &FinGroupoid, ring: &CartRing) -> Result<Vec<TorsorWitness>> {
    let CartRing::Lattice(l) = ring else {
        return Err(Error::MixedInstance);
    };
    let comps = g.connected_components();
    let mut out = Vec::new();
    let choices: Box<dyn Iterator<Item = Vec<usize>>> = if comps.num_classes() == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new((0..comps.num_classes()).map(|_| 0..l.size()).multi_cartesian_product())
    };
    for vals in choices {
        let v = g.objects().map(|o| vals[comps.class_of[o]]).collect();
        let rep = RightGRep { ring: ring.clone(), g: g.clone(), data: RepData::Lattice(v) };
        if let Ok(w) = is_torsor(&rep) {
            out.push(w);
        }
    }
    Ok(out)
}

/// The element sent to `(ξ, η)` by `τ` at `(t, s)`: the unique arrow `g: s → t` with `ξ·g = η`.
pub(crate) fn transfer_arrow(x: &GSet, g: &FinCategory, t: Obj, xi: usize, s: Obj, eta: usize) -> Option<Arr> {
    g.hom(s, t).iter().copied().find(|&a| x.act[a][xi] == eta)
}

#[cfg(test)]
mod tests;
