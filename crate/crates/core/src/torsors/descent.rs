//! Descent along the equalizer `K` of `φ, ψ: G → H`: a torsor over `K` is the same
//! as a torsor `x̂` over `G` with an isomorphism `q: x̂ ⊠_φ H → x̂ ⊠_ψ H`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{Arr, FinGroup, FinGroupoid, Functor, Obj};
use crate::limits::{equalizer, equifier, EqualizerResult};
use crate::topos::{CartRing, FinLattice, GoodnessReport};

use super::{
    base_category, enumerate_torsors, hom_reps, hom_torsors, is_equivariant, is_torsor, lattice_torsors, pushforward,
    rep_map_is_invertible, transfer_arrow, Equivariant, GSet, Pushed, RepData, RepMap, RightGRep, TorsorWitness,
};

/// A torsor over `G` with an `H`-isomorphism `q: x̂ ⊠_φ H → x̂ ⊠_ψ H`.
#[derive(Clone, Debug)]
pub struct DescentDatum {
    pub x: TorsorWitness,
    pub h: FinGroupoid,
    pub phi: Functor,
    pub psi: Functor,
    pub along_phi: TorsorWitness,
    pub along_psi: TorsorWitness,
    pub pushed_phi: Vec<Pushed>,
    pub pushed_psi: Vec<Pushed>,
    /// Per fibre and object `u` of `H`, the class map of `q`.
    pub q: RepMap,
}

impl DescentDatum {
    /// Validates `q` as an invertible map of `H`-representations.
    pub fn new(x: TorsorWitness, h: &FinGroupoid, phi: &Functor, psi: &Functor, q: RepMap) -> Result<DescentDatum> {
        let a = pushforward(&x, h, phi)?;
        let b = pushforward(&x, h, psi)?;
        let d = DescentDatum {
            x,
            h: h.clone(),
            phi: phi.clone(),
            psi: psi.clone(),
            along_phi: a.witness,
            along_psi: b.witness,
            pushed_phi: a.pushed,
            pushed_psi: b.pushed,
            q,
        };
        if !is_rep_map(&d.along_phi.rep, &d.along_psi.rep, &d.q)
            || !rep_map_is_invertible(&d.along_phi.rep, &d.along_psi.rep, &d.q)
        {
            return Err(Error::Precondition("q is not an isomorphism of H-representations".into()));
        }
        Ok(d)
    }

    /// Every datum on `x̂`: all isomorphisms `x̂ ⊠_φ H → x̂ ⊠_ψ H`.
    pub fn enumerate(x: &TorsorWitness, h: &FinGroupoid, phi: &Functor, psi: &Functor) -> Result<Vec<DescentDatum>> {
        let a = pushforward(x, h, phi)?;
        let b = pushforward(x, h, psi)?;
        hom_reps(&a.witness.rep, &b.witness.rep, true)
            .into_iter()
            .map(|q| DescentDatum::new(x.clone(), h, phi, psi, q))
            .collect()
    }

    /// `x ⊠ q` on a pair `(ξ ∈ x(t), h: u → φ(t))` of fibre `c`: with
    /// `q[ξ, h] = [ζ, h']`, `ζ ∈ x(t')`, returns `(ξ, ψ(g)∘h')` for the unique
    /// `g: t' → t` with `ξ·g = ζ`.
    pub fn x_boxtimes_q(&self, c: usize, t: Obj, xi: usize, hh: Arr) -> Result<(usize, Arr)> {
        let x = &self.x.rep.fibres()[c];
        let u = self.h.src(hh);
        let cls = self.pushed_phi[c].class(u, t, xi, hh);
        let (t2, zeta, h2) = self.pushed_psi[c].reps[u][self.q[c][u][cls]];
        let g = &self.x.rep.g;
        let hits = g.hom(t2, t).iter().filter(|&&a| x.act[a][xi] == zeta).count();
        if hits != 1 {
            return Err(Error::FreenessFailure(format!(
                "{hits} arrows {} → {} carry the element to its image",
                g.obj_name(t2),
                g.obj_name(t)
            )));
        }
        let a = transfer_arrow(x, g, t, xi, t2, zeta).expect("counted above");
        Ok((xi, self.h.comp(self.psi.arr[a], h2)))
    }

    /// Whether an automorphism `a` of `x̂` commutes with `q`.
    pub fn respects(&self, a: &RepMap) -> bool {
        self.pushed_phi.iter().enumerate().all(|(c, pp)| {
            let left = pp.induced(pp, &a[c]);
            let right = self.pushed_psi[c].induced(&self.pushed_psi[c], &a[c]);
            (0..self.h.num_objects())
                .all(|u| (0..pp.set.sizes[u]).all(|k| self.q[c][u][left[u][k]] == right[u][self.q[c][u][k]]))
        })
    }
}

/// Whether `f` is a map of representations (equivariant, natural over the base).
pub(crate) fn is_rep_map(x: &RightGRep, y: &RightGRep, f: &RepMap) -> bool {
    match (&x.data, &y.data) {
        (RepData::Lattice(a), RepData::Lattice(b)) => match &x.ring {
            CartRing::Lattice(l) => a.iter().zip(b).all(|(&p, &q)| l.leq(p, q)),
            _ => false,
        },
        (RepData::Sets { fibres: fx, trans: tx }, RepData::Sets { fibres: fy, trans: ty }) => {
            let c = base_category(&x.ring).expect("set-like");
            f.len() == fx.len()
                && fx.iter().zip(fy).zip(f).all(|((a, b), m)| {
                    m.len() == a.sizes.len()
                        && m.iter().zip(&a.sizes).all(|(v, &n)| v.len() == n)
                        && m.iter().zip(&b.sizes).all(|(v, &n)| v.iter().all(|&y| y < n))
                        && is_equivariant(&x.g, a, b, m)
                })
                && c.arrows().all(|u| {
                    let (p, q) = (c.src(u), c.tgt(u));
                    x.g.objects().all(|s| (0..fx[p].sizes[s]).all(|e| f[q][s][tx[u][s][e]] == ty[u][s][f[p][s][e]]))
                })
        }
        _ => false,
    }
}

/// The torsor over `K` produced from a datum, with the decomposition of each `x(s)`.
#[derive(Clone, Debug)]
pub struct DescentS {
    pub eq: EqualizerResult,
    pub y: TorsorWitness,
    /// Per fibre and object `k = (s, h)` of `K`: the elements of `x(s)` forming `ŷ(k)`.
    pub embed: Vec<Vec<Vec<usize>>>,
    /// Per fibre, object `s` and `ξ ∈ x(s)`: the object `k` with `ξ ∈ ŷ(k)` and its slot there.
    pub breakup: Vec<Vec<Vec<(usize, usize)>>>,
}

impl DescentS {
    /// Each `x(s)` is the disjoint union of the `ŷ(s, h)`.
    pub fn breakup_certified(&self, d: &DescentDatum) -> bool {
        self.breakup.iter().enumerate().all(|(c, per_s)| {
            let x = &d.x.rep.fibres()[c];
            per_s.iter().enumerate().all(|(s, v)| {
                v.len() == x.sizes[s]
                    && v.iter()
                        .enumerate()
                        .all(|(xi, &(k, slot))| self.eq.objects[k].0 == s && self.embed[c][k][slot] == xi)
            }) && self.embed[c].iter().map(|v| v.len()).sum::<usize>() == x.total()
        })
    }
}

fn check_good(ring: &CartRing) -> Result<()> {
    if let CartRing::Lattice(_) = ring {
        let report = ring.is_good(0);
        if !report.good() {
            let why = match (&report.disjoint_counterexample, &report.stable_counterexample) {
                (Some(w), _) => {
                    format!("coproducts are not disjoint: {:?} ⊔ {:?} meet in {:?}", w.left, w.right, w.pullback)
                }
                (None, Some(w)) => format!("coproducts are not stable: base {:?}", w.base),
                _ => String::new(),
            };
            return Err(Error::NotGood(why));
        }
        return Err(Error::Precondition("descent is implemented for set-like instances".into()));
    }
    Ok(())
}

/// `ŷ(s, h) = {ξ ∈ x(s) : (x ⊠ q)(ξ, id_{φ s}) = (ξ, h)}` with the restricted action.
pub fn descent_s(d: &DescentDatum) -> Result<DescentS> {
    check_good(&d.x.rep.ring)?;
    let g = &d.x.rep.g;
    let eq = equalizer(g, &d.h, &d.phi, &d.psi);
    let obj_index: HashMap<(Obj, Arr), usize> = eq.objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let RepData::Sets { fibres, trans } = &d.x.rep.data else { unreachable!() };
    let c = base_category(&d.x.rep.ring).expect("set-like");
    let nk = eq.objects.len();
    let mut embed = vec![vec![Vec::new(); nk]; fibres.len()];
    let mut breakup = Vec::new();
    for (ci, x) in fibres.iter().enumerate() {
        let mut per_s = Vec::new();
        for s in g.objects() {
            let mut v = Vec::new();
            for xi in 0..x.sizes[s] {
                let (xi2, hh) = d.x_boxtimes_q(ci, s, xi, d.h.id(d.phi.obj[s]))?;
                debug_assert_eq!(xi2, xi);
                let k = obj_index[&(s, hh)];
                v.push((k, embed[ci][k].len()));
                embed[ci][k].push(xi);
            }
            per_s.push(v);
        }
        breakup.push(per_s);
    }
    let k = &eq.k;
    let mut new_fibres = Vec::new();
    for (ci, x) in fibres.iter().enumerate() {
        let sizes: Vec<usize> = (0..nk).map(|j| embed[ci][j].len()).collect();
        let mut act = Vec::new();
        for a in k.arrows() {
            let (k1, k2) = (k.src(a), k.tgt(a));
            let ga = eq.arrows[a];
            let mut m = Vec::new();
            for &xi in &embed[ci][k2] {
                let (kk, slot) = breakup[ci][eq.objects[k1].0][x.act[ga][xi]];
                if kk != k1 {
                    return Err(Error::Precondition("descended action leaves its fibre".into()));
                }
                m.push(slot);
            }
            act.push(m);
        }
        new_fibres.push(GSet { sizes, act });
    }
    let mut new_trans = Vec::new();
    for u in c.arrows() {
        let (p, q) = (c.src(u), c.tgt(u));
        let mut per_k = Vec::new();
        for j in 0..nk {
            let s = eq.objects[j].0;
            let mut m = Vec::new();
            for &xi in &embed[p][j] {
                let (kk, slot) = breakup[q][s][trans[u][s][xi]];
                if kk != j {
                    return Err(Error::Precondition("base map does not respect the decomposition".into()));
                }
                m.push(slot);
            }
            per_k.push(m);
        }
        new_trans.push(per_k);
    }
    let rep = RightGRep {
        ring: d.x.rep.ring.clone(),
        g: eq.k.clone(),
        data: RepData::Sets { fibres: new_fibres, trans: new_trans },
    };
    let y = is_torsor(&rep).map_err(|f| Error::Precondition(format!("descended representation: {}", f.reason)))?;
    Ok(DescentS { eq, y, embed, breakup })
}

/// `x̂ = ŷ ⊠_ξ G` with `q[[η, g], h] = [[η, id], p_k ∘ φ(g) ∘ h]`.
pub fn descent_t(
    eq: &EqualizerResult,
    y: &TorsorWitness,
    g: &FinGroupoid,
    h: &FinGroupoid,
    phi: &Functor,
    psi: &Functor,
) -> Result<(DescentDatum, Vec<Pushed>)> {
    check_good(&y.rep.ring)?;
    let along_xi = pushforward(y, g, &eq.xi)?;
    let x = along_xi.witness;
    let pushed_xi = along_xi.pushed;
    let a = pushforward(&x, h, phi)?;
    let b = pushforward(&x, h, psi)?;
    let mut q = Vec::new();
    for (ci, pp) in a.pushed.iter().enumerate() {
        let px = &pushed_xi[ci];
        let mut per_u = Vec::new();
        for u in h.objects() {
            let m = pp.reps[u]
                .iter()
                .map(|&(s, xcls, hh)| {
                    let (k, eta, gg) = px.reps[s][xcls];
                    let sk = eq.objects[k].0;
                    let base = px.class(sk, k, eta, g.id(sk));
                    let h2 = h.comp(eq.p[k], h.comp(phi.arr[gg], hh));
                    b.pushed[ci].class(u, sk, base, h2)
                })
                .collect();
            per_u.push(m);
        }
        q.push(per_u);
    }
    let d = DescentDatum::new(x, h, phi, psi, q)?;
    Ok((d, pushed_xi))
}

/// Components, naturality and equivariance of a round-trip comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub bijective: bool,
    pub equivariant: bool,
    pub compatible: bool,
    pub natural: bool,
    pub automorphisms_checked: usize,
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.bijective && self.equivariant && self.compatible && self.natural
    }
}

/// `ŷ → S(T(ŷ))`, `η ↦ [η, id]`, checked for bijectivity, equivariance and naturality
/// against every automorphism of `ŷ`.
pub fn round_trip_st(
    eq: &EqualizerResult,
    y: &TorsorWitness,
    g: &FinGroupoid,
    h: &FinGroupoid,
    phi: &Functor,
    psi: &Functor,
) -> Result<RoundTrip> {
    let (d, pushed_xi) = descent_t(eq, y, g, h, phi, psi)?;
    let s = descent_s(&d)?;
    let g = &d.x.rep.g;
    let nk = eq.objects.len();
    let mut iso: RepMap = Vec::new();
    let mut landed = true;
    for (ci, yf) in y.rep.fibres().iter().enumerate() {
        let mut per_k = Vec::new();
        for k in 0..nk {
            let sk = eq.objects[k].0;
            let m: Vec<usize> = (0..yf.sizes[k])
                .map(|eta| {
                    let xcls = pushed_xi[ci].class(sk, k, eta, g.id(sk));
                    let (kk, slot) = s.breakup[ci][sk][xcls];
                    landed &= kk == k;
                    slot
                })
                .collect();
            per_k.push(m);
        }
        iso.push(per_k);
    }
    let bijective = landed && rep_map_is_invertible(&y.rep, &s.y.rep, &iso);
    let equivariant = landed && is_rep_map(&y.rep, &s.y.rep, &iso);
    let autos = hom_torsors(y, y);
    let mut natural = bijective;
    for a in &autos {
        // S(T(a)) restricts the induced map on ŷ ⊠_ξ G to the fibres of S
        let st_a: RepMap = (0..iso.len())
            .map(|ci| {
                let ta = pushed_xi[ci].induced(&pushed_xi[ci], &a[ci]);
                (0..nk)
                    .map(|k| {
                        let sk = eq.objects[k].0;
                        s.embed[ci][k].iter().map(|&xc| s.breakup[ci][sk][ta[sk][xc]].1).collect()
                    })
                    .collect()
            })
            .collect();
        for ci in 0..iso.len() {
            for k in 0..nk {
                for eta in 0..iso[ci][k].len() {
                    natural &= iso[ci][k][a[ci][k][eta]] == st_a[ci][k][iso[ci][k][eta]];
                }
            }
        }
    }
    Ok(RoundTrip { bijective, equivariant, compatible: true, natural, automorphisms_checked: autos.len() })
}

/// `T(S(x̂, q)) → (x̂, q)`, `[ζ, g] ↦ ζ·g`, checked for bijectivity, equivariance,
/// compatibility with `q`, and naturality against every automorphism of the datum.
pub fn round_trip_ts(d: &DescentDatum) -> Result<RoundTrip> {
    let s = descent_s(d)?;
    let (d2, pushed_xi) = descent_t(&s.eq, &s.y, &d.x.rep.g, &d.h, &d.phi, &d.psi)?;
    let g = &d.x.rep.g;
    let xf = d.x.rep.fibres();
    let alpha: RepMap = pushed_xi
        .iter()
        .enumerate()
        .map(|(ci, px)| {
            g.objects()
                .map(|s0| px.reps[s0].iter().map(|&(k, zeta, gg)| xf[ci].act[gg][s.embed[ci][k][zeta]]).collect())
                .collect()
        })
        .collect();
    let bijective = rep_map_is_invertible(&d2.x.rep, &d.x.rep, &alpha);
    let equivariant = is_rep_map(&d2.x.rep, &d.x.rep, &alpha);
    let mut compatible = true;
    for ci in 0..alpha.len() {
        for u in d.h.objects() {
            for (cls, &(s0, xi, hh)) in d2.pushed_phi[ci].reps[u].iter().enumerate() {
                let left = d.q[ci][u][d.pushed_phi[ci].class(u, s0, alpha[ci][s0][xi], hh)];
                let (s1, xi1, h1) = d2.pushed_psi[ci].reps[u][d2.q[ci][u][cls]];
                let right = d.pushed_psi[ci].class(u, s1, alpha[ci][s1][xi1], h1);
                compatible &= left == right;
            }
        }
    }
    let autos: Vec<RepMap> = hom_torsors(&d.x, &d.x).into_iter().filter(|a| d.respects(a)).collect();
    let mut natural = bijective;
    for a in &autos {
        for ci in 0..alpha.len() {
            // S(a) on ŷ, then T(S(a)) on ŷ ⊠_ξ G
            let sa: Equivariant = (0..s.eq.objects.len())
                .map(|k| {
                    let sk = s.eq.objects[k].0;
                    s.embed[ci][k].iter().map(|&xi| s.breakup[ci][sk][a[ci][sk][xi]].1).collect()
                })
                .collect();
            let tsa = pushed_xi[ci].induced(&pushed_xi[ci], &sa);
            for s0 in g.objects() {
                for e in 0..alpha[ci][s0].len() {
                    natural &= alpha[ci][s0][tsa[s0][e]] == a[ci][s0][alpha[ci][s0][e]];
                }
            }
        }
    }
    Ok(RoundTrip { bijective, equivariant, compatible, natural, automorphisms_checked: autos.len() })
}

/// The equifier of the identity and the central non-identity element of `ℤ/2`,
/// as a failure of descent in a lattice instance.
#[derive(Clone, Debug)]
pub struct EquifierScenario {
    pub goodness: GoodnessReport,
    pub equifier_objects: usize,
    /// Torsors over the (empty) equifier in the lattice.
    pub equifier_torsors: usize,
    /// Lattice torsors over `B(ℤ/2)` on which the two induced maps agree.
    pub data: usize,
    /// The same count in FinSet, where descent holds.
    pub finset_data: usize,
}

impl EquifierScenario {
    pub fn reproduced(&self) -> bool {
        !self.goodness.good() && self.equifier_torsors == 0 && self.data > 0 && self.finset_data == 0
    }
}

pub fn equifier_scenario(l: &FinLattice) -> Result<EquifierScenario> {
    let ring = CartRing::Lattice(l.clone());
    let goodness = ring.is_good(0);
    let g = FinGroupoid::from_group(&FinGroup::cyclic(2));
    let id = crate::fincat::identity_functor(&g);
    let (xi, xi2): (Vec<Arr>, Vec<Arr>) = (vec![0], vec![1]);
    let e = equifier(&g, &xi, &xi2);
    let equifier_torsors = lattice_torsors(&e.k, &ring)?.len();
    // in a poset the two maps x⊠ξ, x⊠ξ' agree whenever they exist
    let mut data = 0;
    for x in lattice_torsors(&g, &ring)? {
        let a = pushforward(&x, &g, &id)?;
        if hom_reps(&a.witness.rep, &a.witness.rep, false).len() == 1 {
            data += 1;
        }
    }
    let mut finset_data = 0;
    let tors = enumerate_torsors(&g, &CartRing::FinSet, 2, crate::fincat::DEFAULT_FUNCTOR_BUDGET)?;
    for x in &tors.torsors {
        let a = pushforward(x, &g, &id)?;
        let p = &a.pushed[0];
        let agree = p.reps.iter().enumerate().all(|(u, cls)| {
            cls.iter().all(|&(t, e0, hh)| {
                let _ = t;
                p.class(u, t, e0, g.comp(xi[t], hh)) == p.class(u, t, e0, g.comp(xi2[t], hh))
            })
        });
        if agree {
            finset_data += 1;
        }
    }
    Ok(EquifierScenario { goodness, equifier_objects: e.k.num_objects(), equifier_torsors, data, finset_data })
}
