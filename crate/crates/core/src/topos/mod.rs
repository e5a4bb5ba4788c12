//! Finite cartesian 2-ring instances behind one interface: finite sets, presheaves
//! `C → FinSet` on a finite category, and finite distributive lattices.

mod lattice;

use std::collections::HashMap;
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::fincat::FinCategory;

pub use lattice::FinLattice;

/// A functor `C → FinSet`: a set size per object and a function per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presheaf {
    pub sets: Vec<usize>,
    /// `maps[f]` sends `sets[src f]` to `sets[tgt f]`.
    pub maps: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn check(&self, c: &FinCategory) -> std::result::Result<(), String> {
        if self.sets.len() != c.num_objects() || self.maps.len() != c.num_arrows() {
            return Err("shape does not match the base category".into());
        }
        for f in c.arrows() {
            let m = &self.maps[f];
            if m.len() != self.sets[c.src(f)] || m.iter().any(|&y| y >= self.sets[c.tgt(f)]) {
                return Err(format!("map for {} has wrong endpoints", c.arr_name(f)));
            }
        }
        for o in c.objects() {
            if self.maps[c.id(o)].iter().enumerate().any(|(i, &y)| i != y) {
                return Err(format!("identity at {} not sent to identity", c.obj_name(o)));
            }
        }
        for f in c.arrows() {
            for g in c.arrows() {
                if let Some(h) = c.compose(f, g) {
                    let (mf, mg, mh) = (&self.maps[f], &self.maps[g], &self.maps[h]);
                    if (0..mg.len()).any(|x| mf[mg[x]] != mh[x]) {
                        return Err(format!("composite {}∘{} not preserved", c.arr_name(f), c.arr_name(g)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn constant(c: &FinCategory, n: usize) -> Presheaf {
        Presheaf { sets: vec![n; c.num_objects()], maps: vec![(0..n).collect(); c.num_arrows()] }
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CartObject {
    /// A finite set `{0, …, n-1}`.
    Set(usize),
    Presheaf(Presheaf),
    Lattice(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CartMap {
    Set(Vec<usize>),
    /// One function per object of the base category.
    Presheaf(Vec<Vec<usize>>),
    /// The unique arrow `a ≤ b`.
    Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CartRing {
    FinSet,
    Presheaf(FinCategory),
    Lattice(FinLattice),
}

/// A diagram `J → A`: an object per object of `J` and a map per arrow (covariant).
#[derive(Clone, Debug)]
pub struct Diagram {
    pub shape: FinCategory,
    pub objects: Vec<CartObject>,
    pub maps: Vec<CartMap>,
}

/// A colimit with its cocone and, for set-like instances, the element classes.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub object: CartObject,
    pub cocone: Vec<CartMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Exhaustive,
    Bounded(usize),
}

/// Pullback of two coproduct injections that fails to be initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessFailure {
    pub left: CartObject,
    pub right: CartObject,
    pub pullback: CartObject,
}

/// A map `b → a₁ ⊔ a₂` whose pulled-back coproduct is not `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityFailure {
    pub base: CartObject,
    pub left: CartObject,
    pub right: CartObject,
    pub map: CartMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    pub disjoint: bool,
    pub disjoint_counterexample: Option<DisjointnessFailure>,
    pub stable: bool,
    pub stable_counterexample: Option<StabilityFailure>,
    pub scope: Scope,
    /// Presheaf topoi are good by construction; the bounded check is a spot check.
    pub structural: bool,
    pub checks: u64,
}

impl GoodnessReport {
    pub fn good(&self) -> bool {
        self.disjoint && self.stable
    }
}

impl fmt::Display for CartRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartRing::FinSet => write!(f, "FinSet"),
            CartRing::Presheaf(c) => write!(f, "presheaves on a category with {} objects", c.num_objects()),
            CartRing::Lattice(l) => write!(f, "lattice with {} elements", l.size()),
        }
    }
}

// ---- set-level helpers ----

fn set_pullback(f: &[usize], g: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (x, &fx) in f.iter().enumerate() {
        for (y, &gy) in g.iter().enumerate() {
            if fx == gy {
                out.push((x, y));
            }
        }
    }
    out
}

/// Quotient of a tagged disjoint union; returns the class of each tagged element,
/// numbering classes by first appearance in tag order.
fn set_colimit(
    sizes: &[usize],
    edges: impl Iterator<Item = ((usize, usize), (usize, usize))>,
) -> (usize, Vec<Vec<usize>>) {
    let mut offset = vec![0; sizes.len() + 1];
    for (i, &s) in sizes.iter().enumerate() {
        offset[i + 1] = offset[i] + s;
    }
    let total = offset[sizes.len()];
    let mut uf = UnionFind::<usize>::new(total);
    for ((a, x), (b, y)) in edges {
        uf.union(offset[a] + x, offset[b] + y);
    }
    let labels = uf.into_labeling();
    let mut class_id = HashMap::new();
    let mut out = Vec::with_capacity(sizes.len());
    for (i, &s) in sizes.iter().enumerate() {
        let mut v = Vec::with_capacity(s);
        for x in 0..s {
            let next = class_id.len();
            v.push(*class_id.entry(labels[offset[i] + x]).or_insert(next));
        }
        out.push(v);
    }
    (class_id.len(), out)
}

fn is_bijection(f: &[usize], n: usize) -> bool {
    if f.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in f {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

impl CartRing {
    fn mixed<T>(&self) -> Result<T> {
        Err(Error::MixedInstance)
    }

    /// Whether `x` is a well-formed object of this instance.
    pub fn check_object(&self, x: &CartObject) -> Result<()> {
        match (self, x) {
            (CartRing::FinSet, CartObject::Set(_)) => Ok(()),
            (CartRing::Presheaf(c), CartObject::Presheaf(p)) => p.check(c).map_err(Error::Precondition),
            (CartRing::Lattice(l), CartObject::Lattice(a)) if *a < l.size() => Ok(()),
            _ => self.mixed(),
        }
    }

    pub fn terminal(&self) -> CartObject {
        match self {
            CartRing::FinSet => CartObject::Set(1),
            CartRing::Presheaf(c) => CartObject::Presheaf(Presheaf::constant(c, 1)),
            CartRing::Lattice(l) => CartObject::Lattice(l.top()),
        }
    }

    pub fn initial(&self) -> CartObject {
        match self {
            CartRing::FinSet => CartObject::Set(0),
            CartRing::Presheaf(c) => CartObject::Presheaf(Presheaf::constant(c, 0)),
            CartRing::Lattice(l) => CartObject::Lattice(l.bottom()),
        }
    }

    pub fn is_initial(&self, x: &CartObject) -> bool {
        match x {
            CartObject::Set(n) => *n == 0,
            CartObject::Presheaf(p) => p.total_size() == 0,
            CartObject::Lattice(a) => matches!(self, CartRing::Lattice(l) if l.bottom() == *a),
        }
    }

    pub fn is_terminal(&self, x: &CartObject) -> bool {
        match x {
            CartObject::Set(n) => *n == 1,
            CartObject::Presheaf(p) => p.sets.iter().all(|&s| s == 1),
            CartObject::Lattice(a) => matches!(self, CartRing::Lattice(l) if l.top() == *a),
        }
    }

    /// Validates that `f` is an arrow `a → b`.
    pub fn check_map(&self, a: &CartObject, b: &CartObject, f: &CartMap) -> Result<()> {
        match (self, a, b, f) {
            (CartRing::FinSet, CartObject::Set(m), CartObject::Set(n), CartMap::Set(v)) => {
                if v.len() == *m && v.iter().all(|&y| y < *n) {
                    Ok(())
                } else {
                    Err(Error::Precondition("set map has wrong endpoints".into()))
                }
            }
            (CartRing::Presheaf(c), CartObject::Presheaf(p), CartObject::Presheaf(q), CartMap::Presheaf(v)) => {
                if v.len() != c.num_objects() {
                    return Err(Error::Precondition("natural map has wrong number of components".into()));
                }
                for o in c.objects() {
                    if v[o].len() != p.sets[o] || v[o].iter().any(|&y| y >= q.sets[o]) {
                        return Err(Error::Precondition("natural map has wrong endpoints".into()));
                    }
                }
                for u in c.arrows() {
                    let (s, t) = (c.src(u), c.tgt(u));
                    if (0..p.sets[s]).any(|x| v[t][p.maps[u][x]] != q.maps[u][v[s][x]]) {
                        return Err(Error::Precondition(format!("not natural at {}", c.arr_name(u))));
                    }
                }
                Ok(())
            }
            (CartRing::Lattice(l), CartObject::Lattice(x), CartObject::Lattice(y), CartMap::Lattice) => {
                if l.leq(*x, *y) {
                    Ok(())
                } else {
                    Err(Error::Precondition(format!("{} is not below {}", l.name(*x), l.name(*y))))
                }
            }
            _ => self.mixed(),
        }
    }

    pub fn is_iso(&self, a: &CartObject, b: &CartObject, f: &CartMap) -> bool {
        match (a, b, f) {
            (CartObject::Set(_), CartObject::Set(n), CartMap::Set(v)) => is_bijection(v, *n),
            (CartObject::Presheaf(_), CartObject::Presheaf(q), CartMap::Presheaf(v)) => {
                v.iter().zip(&q.sets).all(|(m, &n)| is_bijection(m, n))
            }
            (CartObject::Lattice(x), CartObject::Lattice(y), CartMap::Lattice) => x == y,
            _ => false,
        }
    }

    /// Binary product with its projections.
    pub fn product(&self, a: &CartObject, b: &CartObject) -> Result<(CartObject, CartMap, CartMap)> {
        match (self, a, b) {
            (CartRing::FinSet, CartObject::Set(m), CartObject::Set(n)) => Ok((
                CartObject::Set(m * n),
                CartMap::Set((0..m * n).map(|k| k / n).collect()),
                CartMap::Set((0..m * n).map(|k| k % n).collect()),
            )),
            (CartRing::Presheaf(c), CartObject::Presheaf(p), CartObject::Presheaf(q)) => {
                let sets: Vec<usize> = c.objects().map(|o| p.sets[o] * q.sets[o]).collect();
                let maps = c
                    .arrows()
                    .map(|f| {
                        let (s, t) = (c.src(f), c.tgt(f));
                        (0..sets[s]).map(|k| p.maps[f][k / q.sets[s]] * q.sets[t] + q.maps[f][k % q.sets[s]]).collect()
                    })
                    .collect();
                let p1 = c.objects().map(|o| (0..sets[o]).map(|k| k / q.sets[o]).collect()).collect();
                let p2 = c.objects().map(|o| (0..sets[o]).map(|k| k % q.sets[o]).collect()).collect();
                Ok((CartObject::Presheaf(Presheaf { sets, maps }), CartMap::Presheaf(p1), CartMap::Presheaf(p2)))
            }
            (CartRing::Lattice(l), CartObject::Lattice(x), CartObject::Lattice(y)) => {
                Ok((CartObject::Lattice(l.meet(*x, *y)), CartMap::Lattice, CartMap::Lattice))
            }
            _ => self.mixed(),
        }
    }

    /// Finite coproduct with its injections.
    pub fn coproduct(&self, parts: &[CartObject]) -> Result<(CartObject, Vec<CartMap>)> {
        match self {
            CartRing::FinSet => {
                let sizes = parts
                    .iter()
                    .map(|x| match x {
                        CartObject::Set(n) => Ok(*n),
                        _ => self.mixed(),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut off = 0;
                let mut inj = Vec::new();
                for &n in &sizes {
                    inj.push(CartMap::Set((off..off + n).collect()));
                    off += n;
                }
                Ok((CartObject::Set(off), inj))
            }
            CartRing::Presheaf(c) => {
                let ps = parts
                    .iter()
                    .map(|x| match x {
                        CartObject::Presheaf(p) => Ok(p),
                        _ => self.mixed(),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut offsets = vec![vec![0; c.num_objects()]; ps.len() + 1];
                for (i, p) in ps.iter().enumerate() {
                    for o in c.objects() {
                        offsets[i + 1][o] = offsets[i][o] + p.sets[o];
                    }
                }
                let sets = offsets[ps.len()].clone();
                let maps = c
                    .arrows()
                    .map(|f| {
                        let (s, t) = (c.src(f), c.tgt(f));
                        let mut m = Vec::with_capacity(sets[s]);
                        for (i, p) in ps.iter().enumerate() {
                            m.extend(p.maps[f].iter().map(|&y| y + offsets[i][t]));
                        }
                        m
                    })
                    .collect();
                let inj = (0..ps.len())
                    .map(|i| {
                        CartMap::Presheaf(c.objects().map(|o| (offsets[i][o]..offsets[i + 1][o]).collect()).collect())
                    })
                    .collect();
                Ok((CartObject::Presheaf(Presheaf { sets, maps }), inj))
            }
            CartRing::Lattice(l) => {
                let mut acc = l.bottom();
                for x in parts {
                    match x {
                        CartObject::Lattice(a) => acc = l.join(acc, *a),
                        _ => return self.mixed(),
                    }
                }
                Ok((CartObject::Lattice(acc), vec![CartMap::Lattice; parts.len()]))
            }
        }
    }

    /// Pullback of `f: a → c ← b: g`, with its two projections.
    pub fn pullback(
        &self,
        a: &CartObject,
        b: &CartObject,
        f: &CartMap,
        g: &CartMap,
    ) -> Result<(CartObject, CartMap, CartMap)> {
        match (self, a, b, f, g) {
            (CartRing::FinSet, CartObject::Set(_), CartObject::Set(_), CartMap::Set(f), CartMap::Set(g)) => {
                let pairs = set_pullback(f, g);
                Ok((
                    CartObject::Set(pairs.len()),
                    CartMap::Set(pairs.iter().map(|p| p.0).collect()),
                    CartMap::Set(pairs.iter().map(|p| p.1).collect()),
                ))
            }
            (
                CartRing::Presheaf(c),
                CartObject::Presheaf(p),
                CartObject::Presheaf(q),
                CartMap::Presheaf(f),
                CartMap::Presheaf(g),
            ) => {
                let pairs: Vec<Vec<(usize, usize)>> = c.objects().map(|o| set_pullback(&f[o], &g[o])).collect();
                let index: Vec<HashMap<(usize, usize), usize>> =
                    pairs.iter().map(|v| v.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
                let sets = pairs.iter().map(|v| v.len()).collect();
                let maps = c
                    .arrows()
                    .map(|u| {
                        let (s, t) = (c.src(u), c.tgt(u));
                        pairs[s].iter().map(|&(x, y)| index[t][&(p.maps[u][x], q.maps[u][y])]).collect()
                    })
                    .collect();
                let pa = pairs.iter().map(|v| v.iter().map(|x| x.0).collect()).collect();
                let pb = pairs.iter().map(|v| v.iter().map(|x| x.1).collect()).collect();
                Ok((CartObject::Presheaf(Presheaf { sets, maps }), CartMap::Presheaf(pa), CartMap::Presheaf(pb)))
            }
            (
                CartRing::Lattice(l),
                CartObject::Lattice(x),
                CartObject::Lattice(y),
                CartMap::Lattice,
                CartMap::Lattice,
            ) => Ok((CartObject::Lattice(l.meet(*x, *y)), CartMap::Lattice, CartMap::Lattice)),
            _ => self.mixed(),
        }
    }

    /// Colimit of a finite diagram: a quotient of the disjoint union for set-like
    /// instances (union-find; classes numbered by first appearance), a join for lattices.
    pub fn finite_colimit(&self, d: &Diagram) -> Result<Colimit> {
        let j = &d.shape;
        match self {
            CartRing::FinSet => {
                let sizes = d
                    .objects
                    .iter()
                    .map(|x| match x {
                        CartObject::Set(n) => Ok(*n),
                        _ => self.mixed(),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let edges = set_edges(j, &d.maps)?;
                let (n, classes) = set_colimit(&sizes, edges.into_iter());
                Ok(Colimit { object: CartObject::Set(n), cocone: classes.into_iter().map(CartMap::Set).collect() })
            }
            CartRing::Presheaf(c) => {
                let ps = d
                    .objects
                    .iter()
                    .map(|x| match x {
                        CartObject::Presheaf(p) => Ok(p),
                        _ => self.mixed(),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ms = d
                    .maps
                    .iter()
                    .map(|m| match m {
                        CartMap::Presheaf(v) => Ok(v),
                        _ => self.mixed(),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut sets = Vec::new();
                let mut classes: Vec<Vec<Vec<usize>>> = Vec::new(); // [c][jobj][x]
                for o in c.objects() {
                    let sizes: Vec<usize> = ps.iter().map(|p| p.sets[o]).collect();
                    let ms = &ms;
                    let sizes_ref = &sizes;
                    let edges = j.arrows().flat_map(move |a| {
                        let (s, t) = (j.src(a), j.tgt(a));
                        (0..sizes_ref[s]).map(move |x| ((s, x), (t, ms[a][o][x])))
                    });
                    let (n, cl) = set_colimit(&sizes, edges);
                    sets.push(n);
                    classes.push(cl);
                }
                let maps = c
                    .arrows()
                    .map(|u| {
                        let (s, t) = (c.src(u), c.tgt(u));
                        let mut m = vec![usize::MAX; sets[s]];
                        for (ji, p) in ps.iter().enumerate() {
                            for x in 0..p.sets[s] {
                                m[classes[s][ji][x]] = classes[t][ji][p.maps[u][x]];
                            }
                        }
                        m
                    })
                    .collect();
                let cocone = (0..ps.len())
                    .map(|ji| CartMap::Presheaf(c.objects().map(|o| classes[o][ji].clone()).collect()))
                    .collect();
                Ok(Colimit { object: CartObject::Presheaf(Presheaf { sets, maps }), cocone })
            }
            CartRing::Lattice(_) => {
                let (object, cocone) = self.coproduct(&d.objects)?;
                Ok(Colimit { object, cocone })
            }
        }
    }

    /// Disjointness and stability of finite coproducts. Lattices are checked over all
    /// elements; set-like instances over objects up to `size_bound` elements per component.
    pub fn is_good(&self, size_bound: usize) -> GoodnessReport {
        match self {
            CartRing::Lattice(l) => lattice_goodness(self, l),
            CartRing::FinSet => {
                let objs: Vec<CartObject> = (0..=size_bound).map(CartObject::Set).collect();
                bounded_goodness(self, &objs, size_bound, false)
            }
            CartRing::Presheaf(c) => {
                let objs: Vec<CartObject> =
                    small_presheaves(c, size_bound, 400).into_iter().map(CartObject::Presheaf).collect();
                bounded_goodness(self, &objs, size_bound, true)
            }
        }
    }

    /// Checks the consequence of goodness that `⊔fᵢ` iso forces every `fᵢ` iso.
    /// Returns `false` exactly when the implication fails on the given arrows.
    pub fn coproduct_component_iso(&self, arrows: &[(CartObject, CartObject, CartMap)]) -> Result<bool> {
        for (a, b, f) in arrows {
            self.check_map(a, b, f)?;
        }
        let srcs: Vec<CartObject> = arrows.iter().map(|x| x.0.clone()).collect();
        let tgts: Vec<CartObject> = arrows.iter().map(|x| x.1.clone()).collect();
        let (sa, _) = self.coproduct(&srcs)?;
        let (sb, inj_b) = self.coproduct(&tgts)?;
        let total = match self {
            CartRing::Lattice(_) => CartMap::Lattice,
            CartRing::FinSet => {
                let mut v = Vec::new();
                for ((_, _, f), inj) in arrows.iter().zip(&inj_b) {
                    if let (CartMap::Set(f), CartMap::Set(inj)) = (f, inj) {
                        v.extend(f.iter().map(|&y| inj[y]));
                    }
                }
                CartMap::Set(v)
            }
            CartRing::Presheaf(c) => {
                let mut comps = vec![Vec::new(); c.num_objects()];
                for ((_, _, f), inj) in arrows.iter().zip(&inj_b) {
                    if let (CartMap::Presheaf(f), CartMap::Presheaf(inj)) = (f, inj) {
                        for o in c.objects() {
                            comps[o].extend(f[o].iter().map(|&y| inj[o][y]));
                        }
                    }
                }
                CartMap::Presheaf(comps)
            }
        };
        if !self.is_iso(&sa, &sb, &total) {
            return Ok(true);
        }
        Ok(arrows.iter().all(|(a, b, f)| self.is_iso(a, b, f)))
    }
}

type Edge = ((usize, usize), (usize, usize));

fn set_edges(j: &FinCategory, maps: &[CartMap]) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for a in j.arrows() {
        let CartMap::Set(m) = &maps[a] else {
            return Err(Error::MixedInstance);
        };
        for (x, &y) in m.iter().enumerate() {
            out.push(((j.src(a), x), (j.tgt(a), y)));
        }
    }
    Ok(out)
}

fn lattice_goodness(ring: &CartRing, l: &FinLattice) -> GoodnessReport {
    let n = l.size();
    let mut checks = 0;
    let mut disjoint_counterexample = None;
    'outer: for a in 0..n {
        for b in 0..n {
            checks += 1;
            let pb = l.meet(a, b);
            if pb != l.bottom() {
                disjoint_counterexample = Some(DisjointnessFailure {
                    left: CartObject::Lattice(a),
                    right: CartObject::Lattice(b),
                    pullback: CartObject::Lattice(pb),
                });
                break 'outer;
            }
        }
    }
    let mut stable_counterexample = None;
    'stab: for a1 in 0..n {
        for a2 in 0..n {
            let top = l.join(a1, a2);
            for b in (0..n).filter(|&b| l.leq(b, top)) {
                checks += 1;
                if l.join(l.meet(b, a1), l.meet(b, a2)) != b {
                    stable_counterexample = Some(StabilityFailure {
                        base: CartObject::Lattice(b),
                        left: CartObject::Lattice(a1),
                        right: CartObject::Lattice(a2),
                        map: CartMap::Lattice,
                    });
                    break 'stab;
                }
            }
        }
    }
    let _ = ring;
    GoodnessReport {
        disjoint: disjoint_counterexample.is_none(),
        disjoint_counterexample,
        stable: stable_counterexample.is_none(),
        stable_counterexample,
        scope: Scope::Exhaustive,
        structural: false,
        checks,
    }
}

/// Replays a disjointness counterexample: recomputes the pullback of the two injections.
pub fn replay_disjointness(ring: &CartRing, w: &DisjointnessFailure) -> Result<bool> {
    let (_, inj) = ring.coproduct(&[w.left.clone(), w.right.clone()])?;
    let (pb, _, _) = ring.pullback(&w.left, &w.right, &inj[0], &inj[1])?;
    Ok(!ring.is_initial(&pb) && pb == w.pullback)
}

fn bounded_goodness(ring: &CartRing, objs: &[CartObject], bound: usize, structural: bool) -> GoodnessReport {
    let mut checks = 0u64;
    let mut disjoint_counterexample = None;
    'outer: for a in objs {
        for b in objs {
            checks += 1;
            let (_, inj) = ring.coproduct(&[a.clone(), b.clone()]).expect("same instance");
            let injective = inj.iter().all(map_is_injective);
            let (pb, _, _) = ring.pullback(a, b, &inj[0], &inj[1]).expect("same instance");
            if !injective || !ring.is_initial(&pb) {
                disjoint_counterexample = Some(DisjointnessFailure { left: a.clone(), right: b.clone(), pullback: pb });
                break 'outer;
            }
        }
    }
    let mut stable_counterexample = None;
    let small: Vec<&CartObject> = objs.iter().filter(|x| object_size(x) <= bound).collect();
    'stab: for a1 in &small {
        for a2 in &small {
            if object_size(a1) + object_size(a2) > bound {
                continue;
            }
            let (sum, inj) = ring.coproduct(&[(*a1).clone(), (*a2).clone()]).expect("same instance");
            for b in &small {
                for f in maps_between(ring, b, &sum, 256) {
                    checks += 1;
                    let (p1, q1, _) = ring.pullback(b, a1, &f, &inj[0]).expect("pullback");
                    let (p2, q2, _) = ring.pullback(b, a2, &f, &inj[1]).expect("pullback");
                    let (cp, _) = ring.coproduct(&[p1, p2]).expect("coproduct");
                    let induced = concat_maps(&q1, &q2);
                    if !ring.is_iso(&cp, b, &induced) {
                        stable_counterexample = Some(StabilityFailure {
                            base: (*b).clone(),
                            left: (*a1).clone(),
                            right: (*a2).clone(),
                            map: f,
                        });
                        break 'stab;
                    }
                }
            }
        }
    }
    GoodnessReport {
        disjoint: disjoint_counterexample.is_none(),
        disjoint_counterexample,
        stable: stable_counterexample.is_none(),
        stable_counterexample,
        scope: Scope::Bounded(bound),
        structural,
        checks,
    }
}

fn object_size(x: &CartObject) -> usize {
    match x {
        CartObject::Set(n) => *n,
        CartObject::Presheaf(p) => p.sets.iter().copied().max().unwrap_or(0),
        CartObject::Lattice(_) => 1,
    }
}

fn map_is_injective(m: &CartMap) -> bool {
    let inj = |v: &[usize]| {
        let mut s = v.to_vec();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    };
    match m {
        CartMap::Set(v) => inj(v),
        CartMap::Presheaf(vs) => vs.iter().all(|v| inj(v)),
        CartMap::Lattice => true,
    }
}

fn concat_maps(a: &CartMap, b: &CartMap) -> CartMap {
    match (a, b) {
        (CartMap::Set(x), CartMap::Set(y)) => CartMap::Set(x.iter().chain(y).copied().collect()),
        (CartMap::Presheaf(x), CartMap::Presheaf(y)) => {
            CartMap::Presheaf(x.iter().zip(y).map(|(u, v)| u.iter().chain(v).copied().collect()).collect())
        }
        _ => CartMap::Lattice,
    }
}

/// All arrows `a → b`, up to `cap` of them.
pub fn maps_between(ring: &CartRing, a: &CartObject, b: &CartObject, cap: usize) -> Vec<CartMap> {
    match (ring, a, b) {
        (CartRing::FinSet, CartObject::Set(m), CartObject::Set(n)) => {
            all_functions(*m, *n, cap).into_iter().map(CartMap::Set).collect()
        }
        (CartRing::Presheaf(c), CartObject::Presheaf(p), CartObject::Presheaf(q)) => {
            let per: Vec<Vec<Vec<usize>>> = c.objects().map(|o| all_functions(p.sets[o], q.sets[o], 4096)).collect();
            let mut out = Vec::new();
            let mut idx = vec![0usize; c.num_objects()];
            if per.iter().any(|v| v.is_empty()) {
                return out;
            }
            loop {
                let cand = CartMap::Presheaf(c.objects().map(|o| per[o][idx[o]].clone()).collect());
                if ring.check_map(a, b, &cand).is_ok() {
                    out.push(cand);
                    if out.len() >= cap {
                        return out;
                    }
                }
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        return out;
                    }
                    idx[k] += 1;
                    if idx[k] < per[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        (CartRing::Lattice(l), CartObject::Lattice(x), CartObject::Lattice(y)) => {
            if l.leq(*x, *y) {
                vec![CartMap::Lattice]
            } else {
                vec![]
            }
        }
        _ => vec![],
    }
}

fn all_functions(m: usize, n: usize, cap: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    loop {
        out.push(cur.clone());
        if out.len() >= cap {
            return out;
        }
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            cur[k] += 1;
            if cur[k] < n {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Presheaves with every set of size at most `bound`, up to `cap` of them.
pub fn small_presheaves(c: &FinCategory, bound: usize, cap: usize) -> Vec<Presheaf> {
    let mut out = Vec::new();
    let no = c.num_objects();
    let mut sizes = vec![0usize; no];
    loop {
        let per: Vec<Vec<Vec<usize>>> =
            c.arrows().map(|f| all_functions(sizes[c.src(f)], sizes[c.tgt(f)], 4096)).collect();
        if per.iter().all(|v| !v.is_empty()) {
            let mut idx = vec![0usize; c.num_arrows()];
            'maps: loop {
                let p = Presheaf { sets: sizes.clone(), maps: c.arrows().map(|f| per[f][idx[f]].clone()).collect() };
                if p.check(c).is_ok() {
                    out.push(p);
                    if out.len() >= cap {
                        return out;
                    }
                }
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        break 'maps;
                    }
                    // identities admit only the identity function
                    if c.is_identity(k) {
                        k += 1;
                        continue;
                    }
                    idx[k] += 1;
                    if idx[k] < per[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == no {
                return out;
            }
            sizes[k] += 1;
            if sizes[k] <= bound {
                break;
            }
            sizes[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests;
