//! Right actions of a finite groupoid on finite sets: the fibrewise engine behind
//! every set-like torsor computation.

use std::collections::HashMap;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Arr, FinCategory, FinGroupoid, Functor, Obj};
use crate::topos::{CartMap, CartObject, CartRing, Diagram};

/// A functor `G^op → FinSet`: `act[g]` sends `x(tgt g)` to `x(src g)`, so that
/// `ξ·(f∘g) = (ξ·f)·g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GSet {
    pub sizes: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

/// `τ` at one pair `(t, s)` of objects in a common component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauComponent {
    pub t: Obj,
    pub s: Obj,
    /// For `(ξ, η) ∈ x(t)×x(s)` at `ξ·|x(s)| + η`: the arrow `g: s → t` with `ξ·g = η`.
    pub inverse: Vec<Option<Arr>>,
    pub bijective: bool,
}

/// The colimit of `x̂` over `G^op`, with the class of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounitCertificate {
    pub colimit_size: usize,
    pub classes: Vec<Vec<usize>>,
}

/// A map of G-sets, one function per object.
pub type Equivariant = Vec<Vec<usize>>;

impl GSet {
    pub fn check(&self, g: &FinCategory) -> std::result::Result<(), String> {
        if self.sizes.len() != g.num_objects() || self.act.len() != g.num_arrows() {
            return Err("action does not match the groupoid".into());
        }
        for a in g.arrows() {
            let m = &self.act[a];
            if m.len() != self.sizes[g.tgt(a)] || m.iter().any(|&y| y >= self.sizes[g.src(a)]) {
                return Err(format!("action of {} has wrong endpoints", g.arr_name(a)));
            }
        }
        for o in g.objects() {
            if self.act[g.id(o)].iter().enumerate().any(|(i, &y)| i != y) {
                return Err(format!("identity at {} acts nontrivially", g.obj_name(o)));
            }
        }
        for f in g.arrows() {
            for h in g.arrows() {
                if let Some(fh) = g.compose(f, h) {
                    if (0..self.sizes[g.tgt(f)]).any(|x| self.act[h][self.act[f][x]] != self.act[fh][x]) {
                        return Err(format!("action not functorial at {}∘{}", g.arr_name(f), g.arr_name(h)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty(g: &FinCategory) -> GSet {
        GSet { sizes: vec![0; g.num_objects()], act: vec![vec![]; g.num_arrows()] }
    }

    /// The representable `G(−, r)`: `x(s) = G(s, r)`, acting by precomposition.
    pub fn representable(g: &FinCategory, r: Obj) -> GSet {
        let sizes = g.objects().map(|s| g.hom(s, r).len()).collect();
        let act = g
            .arrows()
            .map(|a| {
                let (s, t) = (g.src(a), g.tgt(a));
                let pos: HashMap<Arr, usize> = g.hom(s, r).iter().enumerate().map(|(i, &f)| (f, i)).collect();
                g.hom(t, r).iter().map(|&f| pos[&g.comp(f, a)]).collect()
            })
            .collect();
        GSet { sizes, act }
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Objects carrying at least one element.
    pub fn support(&self) -> Vec<Obj> {
        (0..self.sizes.len()).filter(|&o| self.sizes[o] > 0).collect()
    }

    /// `τ` restricted to pairs of objects in a common component.
    pub fn tau(&self, g: &FinCategory) -> Vec<TauComponent> {
        let comps = g.connected_components();
        let mut out = Vec::new();
        for t in g.objects() {
            for s in g.objects() {
                if comps.class_of[s] != comps.class_of[t] {
                    continue;
                }
                let (nt, ns) = (self.sizes[t], self.sizes[s]);
                let mut inverse = vec![None; nt * ns];
                let mut bijective = true;
                for &a in g.hom(s, t) {
                    for xi in 0..nt {
                        let k = xi * ns + self.act[a][xi];
                        if inverse[k].is_some() {
                            bijective = false;
                        }
                        inverse[k] = Some(a);
                    }
                }
                if inverse.iter().any(|x| x.is_none()) {
                    bijective = false;
                }
                out.push(TauComponent { t, s, inverse, bijective });
            }
        }
        out
    }

    /// The colimit over `G^op`, computed as a finite-set colimit.
    pub fn counit(&self, g: &FinCategory) -> CounitCertificate {
        let d = Diagram {
            shape: g.opposite(),
            objects: self.sizes.iter().map(|&n| CartObject::Set(n)).collect(),
            maps: self.act.iter().map(|m| CartMap::Set(m.clone())).collect(),
        };
        let col = CartRing::FinSet.finite_colimit(&d).expect("finite-set diagram");
        let CartObject::Set(n) = col.object else { unreachable!() };
        let classes = col
            .cocone
            .into_iter()
            .map(|m| match m {
                CartMap::Set(v) => v,
                _ => unreachable!(),
            })
            .collect();
        CounitCertificate { colimit_size: n, classes }
    }

    /// All equivariant maps `self → other`, optionally only bijections, up to `limit`.
    pub fn equivariant_maps(&self, other: &GSet, g: &FinCategory, bijective: bool, limit: usize) -> Vec<Equivariant> {
        if bijective && self.sizes != other.sizes {
            return vec![];
        }
        let mut f: Equivariant = self.sizes.iter().map(|&n| vec![usize::MAX; n]).collect();
        let mut used: Vec<Vec<bool>> = other.sizes.iter().map(|&n| vec![false; n]).collect();
        let elems: Vec<(Obj, usize)> =
            (0..self.sizes.len()).flat_map(|s| (0..self.sizes[s]).map(move |x| (s, x))).collect();
        let mut out = Vec::new();
        self.maps_rec(other, g, bijective, limit, &elems, 0, &mut f, &mut used, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn maps_rec(
        &self,
        other: &GSet,
        g: &FinCategory,
        bijective: bool,
        limit: usize,
        elems: &[(Obj, usize)],
        mut i: usize,
        f: &mut Equivariant,
        used: &mut Vec<Vec<bool>>,
        out: &mut Vec<Equivariant>,
    ) {
        while i < elems.len() && f[elems[i].0][elems[i].1] != usize::MAX {
            i += 1;
        }
        if i == elems.len() {
            out.push(f.clone());
            return;
        }
        let (s, x) = elems[i];
        for y in 0..other.sizes[s] {
            if out.len() >= limit {
                return;
            }
            let mut trail = Vec::new();
            if self.assign(other, g, bijective, s, x, y, f, used, &mut trail) {
                self.maps_rec(other, g, bijective, limit, elems, i + 1, f, used, out);
            }
            for (s, x) in trail {
                if bijective {
                    used[s][f[s][x]] = false;
                }
                f[s][x] = usize::MAX;
            }
        }
    }

    /// Sets `f_s(x) = y` and propagates along the action; false on a clash.
    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        other: &GSet,
        g: &FinCategory,
        bijective: bool,
        s: Obj,
        x: usize,
        y: usize,
        f: &mut Equivariant,
        used: &mut [Vec<bool>],
        trail: &mut Vec<(Obj, usize)>,
    ) -> bool {
        let mut stack = vec![(s, x, y)];
        while let Some((s, x, y)) = stack.pop() {
            let cur = f[s][x];
            if cur != usize::MAX {
                if cur != y {
                    return false;
                }
                continue;
            }
            if bijective {
                if used[s][y] {
                    return false;
                }
                used[s][y] = true;
            }
            f[s][x] = y;
            trail.push((s, x));
            for &a in g.hom_into(s).iter() {
                stack.push((g.src(a), self.act[a][x], other.act[a][y]));
            }
        }
        true
    }

    pub fn is_isomorphic(&self, other: &GSet, g: &FinCategory) -> bool {
        !self.equivariant_maps(other, g, true, 1).is_empty()
    }

    /// `η: x̂ ⊠_G Λ̂ → x̂ ⊠^{π₀}_{G₀} x̂` at every pair `(s, s')`; true when each
    /// component is well defined and bijective.
    pub fn eta_iso(&self, g: &FinCategory) -> EtaReport {
        let comps = g.connected_components();
        let mut per_pair = Vec::new();
        for s in g.objects() {
            for s2 in g.objects() {
                // elements (t, ξ, g: s→t, g': s'→t)
                let mut elems = Vec::new();
                let mut index = HashMap::new();
                for t in g.objects() {
                    for xi in 0..self.sizes[t] {
                        for &a in g.hom(s, t) {
                            for &b in g.hom(s2, t) {
                                index.insert((t, xi, a, b), elems.len());
                                elems.push((t, xi, a, b));
                            }
                        }
                    }
                }
                let mut uf = UnionFind::<usize>::new(elems.len());
                // (ξ·k, λ) ~ (ξ, k∘λ) for k: t' → t
                for k in g.arrows() {
                    let (t2, t) = (g.src(k), g.tgt(k));
                    for xi in 0..self.sizes[t] {
                        for &a in g.hom(s, t2) {
                            for &b in g.hom(s2, t2) {
                                let l = index[&(t2, self.act[k][xi], a, b)];
                                let r = index[&(t, xi, g.comp(k, a), g.comp(k, b))];
                                uf.union(l, r);
                            }
                        }
                    }
                }
                let mut image: HashMap<usize, (usize, usize)> = HashMap::new();
                let mut well_defined = true;
                for (i, &(_, xi, a, b)) in elems.iter().enumerate() {
                    let v = (self.act[a][xi], self.act[b][xi]);
                    let root = uf.find(i);
                    if let Some(&w) = image.get(&root) {
                        well_defined &= w == v;
                    } else {
                        image.insert(root, v);
                    }
                }
                let target = if comps.class_of[s] == comps.class_of[s2] { self.sizes[s] * self.sizes[s2] } else { 0 };
                let mut hit: Vec<(usize, usize)> = image.values().copied().collect();
                hit.sort_unstable();
                hit.dedup();
                let bijective = well_defined && hit.len() == image.len() && image.len() == target;
                per_pair.push(EtaComponent { s, s2, classes: image.len(), target, bijective });
            }
        }
        EtaReport { iso: per_pair.iter().all(|c| c.bijective), per_pair }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaComponent {
    pub s: Obj,
    pub s2: Obj,
    pub classes: usize,
    pub target: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaReport {
    pub iso: bool,
    pub per_pair: Vec<EtaComponent>,
}

/// `x̂ ⊠_φ H` with provenance: each class remembers a representative `(t, ξ, h)`
/// with `ξ ∈ x(t)` and `h: u → φ(t)`.
#[derive(Clone, Debug)]
pub struct Pushed {
    pub set: GSet,
    pub reps: Vec<Vec<(Obj, usize, Arr)>>,
    index: Vec<HashMap<(Obj, usize, Arr), usize>>,
}

impl Pushed {
    /// Class at `u = src(h)` of the pair `(ξ ∈ x(t), h: u → φ(t))`.
    pub fn class(&self, u: Obj, t: Obj, xi: usize, h: Arr) -> usize {
        self.index[u][&(t, xi, h)]
    }

    /// The map `[ξ, h] ↦ [f(ξ), h]` induced by an equivariant `f: x → y`.
    pub fn induced(&self, onto: &Pushed, f: &Equivariant) -> Equivariant {
        self.reps
            .iter()
            .enumerate()
            .map(|(u, cls)| cls.iter().map(|&(t, xi, h)| onto.class(u, t, f[t][xi], h)).collect())
            .collect()
    }
}

/// The coend `(x̂ ⊠_φ H)(u) = ⊔_t x(t) × H(u, φt) / (ξ·g, h) ~ (ξ, φ(g)∘h)`.
pub fn pushforward_gset(x: &GSet, g: &FinCategory, h: &FinCategory, phi: &Functor) -> Pushed {
    let mut reps = Vec::new();
    let mut index = Vec::new();
    let mut sizes = Vec::new();
    for u in h.objects() {
        let mut elems = Vec::new();
        let mut idx = HashMap::new();
        for t in g.objects() {
            for xi in 0..x.sizes[t] {
                for &hh in h.hom(u, phi.obj[t]) {
                    idx.insert((t, xi, hh), elems.len());
                    elems.push((t, xi, hh));
                }
            }
        }
        let mut uf = UnionFind::<usize>::new(elems.len());
        for a in g.arrows() {
            let (s, t) = (g.src(a), g.tgt(a));
            for xi in 0..x.sizes[t] {
                for &hh in h.hom(u, phi.obj[s]) {
                    uf.union(idx[&(s, x.act[a][xi], hh)], idx[&(t, xi, h.comp(phi.arr[a], hh))]);
                }
            }
        }
        let mut class_of_root = HashMap::new();
        let mut cls_reps = Vec::new();
        let mut class_idx = HashMap::new();
        for (i, &e) in elems.iter().enumerate() {
            let r = uf.find(i);
            let c = *class_of_root.entry(r).or_insert_with(|| {
                cls_reps.push(e);
                cls_reps.len() - 1
            });
            class_idx.insert(e, c);
        }
        sizes.push(cls_reps.len());
        reps.push(cls_reps);
        index.push(class_idx);
    }
    let act = h
        .arrows()
        .map(|k| {
            let (u2, u) = (h.src(k), h.tgt(k));
            reps[u].iter().map(|&(t, xi, hh)| index[u2][&(t, xi, h.comp(hh, k))]).collect()
        })
        .collect();
    Pushed { set: GSet { sizes, act }, reps, index }
}

/// Right actions of a connected component's vertex group, extended along a spanning
/// tree so that tree arrows act as identities.
pub(crate) struct ComponentFrame {
    pub objects: Vec<Obj>,
    /// `p[o]`: the chosen arrow `root → o`.
    pub tree: HashMap<Obj, Arr>,
    pub gens: Vec<Arr>,
    pub elems: Vec<Arr>,
    pub table: Vec<usize>,
    pub pos: HashMap<Arr, usize>,
    pub id_pos: usize,
}

impl ComponentFrame {
    pub fn new(g: &FinGroupoid, objects: Vec<Obj>) -> ComponentFrame {
        let root = objects[0];
        let tree = objects.iter().map(|&o| (o, g.hom(root, o)[0])).collect();
        let (grp, elems) = g.vertex_group(root);
        let pos: HashMap<Arr, usize> = elems.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let id_pos = pos[&g.id(root)];
        let gens = grp.generators().into_iter().map(|i| elems[i]).collect();
        let n = grp.order();
        let table = (0..n * n).map(|k| grp.mul(k / n, k % n)).collect();
        ComponentFrame { objects, tree, gens, elems, table, pos, id_pos }
    }

    /// All anti-homomorphisms `ρ` from the vertex group to permutations of `n` points
    /// (`ρ(a∘b) = ρ(b)∘ρ(a)`), found by trying generator images.
    pub fn actions(&self, n: usize, budget: &mut u64) -> Result<Vec<Vec<Vec<usize>>>> {
        let order = self.elems.len();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut out = Vec::new();
        let gen_idx: Vec<usize> = self.gens.iter().map(|a| self.pos[a]).collect();
        let choices: Box<dyn Iterator<Item = Vec<usize>>> = if gen_idx.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(itertools::repeat_n(0..perms.len(), gen_idx.len()).multi_cartesian_product())
        };
        for choice in choices {
            if *budget == 0 {
                return Err(Error::BudgetExceeded { what: "torsor enumeration", limit: 0 });
            }
            *budget -= 1;
            let mut rho: Vec<Option<Vec<usize>>> = vec![None; order];
            rho[self.id_pos] = Some((0..n).collect());
            let mut queue = vec![self.id_pos];
            let mut ok = true;
            let mut qi = 0;
            while ok && qi < queue.len() {
                let a = queue[qi];
                qi += 1;
                for (k, &s) in gen_idx.iter().enumerate() {
                    let b = self.table[a * order + s];
                    let ra = rho[a].as_ref().unwrap();
                    let rs = &perms[choice[k]];
                    let cand: Vec<usize> = (0..n).map(|x| rs[ra[x]]).collect();
                    match &rho[b] {
                        Some(rb) => {
                            if *rb != cand {
                                ok = false;
                                break;
                            }
                        }
                        None => {
                            rho[b] = Some(cand);
                            queue.push(b);
                        }
                    }
                }
            }
            if ok {
                out.push(rho.into_iter().map(|r| r.expect("generators generate")).collect());
            }
        }
        Ok(out)
    }

    /// Writes the extension of `ρ` into `x` on this component: `x̂(g) = ρ(p_t⁻¹∘g∘p_s)`.
    pub fn extend(&self, g: &FinGroupoid, rho: &[Vec<usize>], n: usize, x: &mut GSet) {
        for &o in &self.objects {
            x.sizes[o] = n;
        }
        for &s in &self.objects {
            for &t in &self.objects {
                for &a in g.hom(s, t) {
                    let inner = g.comp(g.inv(self.tree[&t]), g.comp(a, self.tree[&s]));
                    x.act[a] = rho[self.pos[&inner]].clone();
                }
            }
        }
    }
}

/// The split fork of a map of G-sets at one object: `e(ξ) = (ξ, fξ)`,
/// `∂₁(ξ,η) = (ξ, fξ, η)`, `∂₀(ξ,η) = (ξ, η, η)`, with splittings `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForkReport {
    pub fork_commutes: bool,
    pub ue_identity: bool,
    pub v_d0_identity: bool,
    pub v_d1_is_eu: bool,
    pub equalizer_is_image: bool,
}

impl ForkReport {
    pub fn split(&self) -> bool {
        self.fork_commutes && self.ue_identity && self.v_d0_identity && self.v_d1_is_eu && self.equalizer_is_image
    }
}

/// Checks the split fork for `f: X → Y` on finite sets. `e` is passed explicitly so
/// that corrupted coactions can be tested.
pub fn split_fork(f: &[usize], ny: usize, e: &dyn Fn(usize) -> (usize, usize)) -> ForkReport {
    let nx = f.len();
    let enc2 = |a: usize, b: usize| a * ny + b;
    let d1 = |a: usize, b: usize| (a, f[a], b);
    let d0 = |a: usize, b: usize| (a, b, b);
    let u = |k: usize| k / ny;
    let v = |t: (usize, usize, usize)| enc2(t.0, t.1);
    let ev: Vec<usize> = (0..nx)
        .map(|x| {
            let (a, b) = e(x);
            enc2(a, b)
        })
        .collect();
    let fork_commutes = (0..nx).all(|x| {
        let (a, b) = (ev[x] / ny, ev[x] % ny);
        d0(a, b) == d1(a, b)
    });
    let ue_identity = (0..nx).all(|x| u(ev[x]) == x);
    let all_pairs = || (0..nx).cartesian_product(0..ny);
    let v_d0_identity = all_pairs().all(|(a, b)| v(d0(a, b)) == enc2(a, b));
    let v_d1_is_eu = all_pairs().all(|(a, b)| v(d1(a, b)) == ev[a]);
    let mut eq: Vec<usize> = all_pairs().filter(|&(a, b)| d0(a, b) == d1(a, b)).map(|(a, b)| enc2(a, b)).collect();
    let mut img = ev.clone();
    eq.sort_unstable();
    img.sort_unstable();
    img.dedup();
    let equalizer_is_image = eq == img && img.len() == nx;
    ForkReport { fork_commutes, ue_identity, v_d0_identity, v_d1_is_eu, equalizer_is_image }
}

pub(crate) fn components_of(g: &FinCategory) -> Vec<Vec<Obj>> {
    let p = g.connected_components();
    (0..p.num_classes()).map(|c| p.members(c)).collect()
}
