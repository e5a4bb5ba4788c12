//! Finite categories, groupoids, functors and natural transformations.
//!
//! Arrows compose right to left: `compose(f, g)` is `f ∘ g`, defined when
//! `src(f) == tgt(g)`. `hom(s, t)` lists the arrows `s → t`.

mod build;
mod functor;
mod group;
mod karoubi;
mod search;

use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

pub use build::CategoryBuilder;
pub use functor::{
    compose_functors, enumerate_functors, enumerate_transformations, equivalence_check, find_isomorphism,
    identity_functor, is_equivalence, is_natural, Equivalence, Functor, FunctorCategory, NatTransform,
};
pub use group::FinGroup;
pub use karoubi::{karoubi_envelope, Karoubi};

pub type Obj = usize;
pub type Arr = usize;

const NONE: u32 = u32::MAX;

/// Default bound on candidate assignments during functor search.
pub const DEFAULT_FUNCTOR_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    MissingIdentity,
    BadIdentity,
    MissingComposite,
    Contradiction,
    Partiality,
    BadEndpoints,
    NotUnital,
    NotAssociative,
    UnknownName,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxiomViolation {
    pub kind: ViolationKind,
    pub witness: Vec<Arr>,
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?}", self.kind, self.witness)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinCategory {
    obj_names: Vec<String>,
    arr_names: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    ids: Vec<Arr>,
    table: Vec<u32>,
    homs: Vec<Vec<Arr>>,
}

impl FinCategory {
    /// Builds from a total composition function over composable pairs, then validates.
    pub fn from_fn(
        obj_names: Vec<String>,
        arrows: Vec<(String, Obj, Obj)>,
        ids: Vec<Arr>,
        compose: impl Fn(Arr, Arr) -> Arr,
    ) -> Result<Self> {
        let c = Self::from_fn_unchecked(obj_names, arrows, ids, compose);
        let v = c.violations();
        if v.is_empty() {
            Ok(c)
        } else {
            Err(Error::Axioms(v))
        }
    }

    /// Same as [`from_fn`](Self::from_fn) without the axiom checks. Callers must
    /// pass a lawful composition.
    pub fn from_fn_unchecked(
        obj_names: Vec<String>,
        arrows: Vec<(String, Obj, Obj)>,
        ids: Vec<Arr>,
        compose: impl Fn(Arr, Arr) -> Arr,
    ) -> Self {
        let n = arrows.len();
        let mut arr_names = Vec::with_capacity(n);
        let mut src = Vec::with_capacity(n);
        let mut tgt = Vec::with_capacity(n);
        for (name, s, t) in arrows {
            arr_names.push(name);
            src.push(s);
            tgt.push(t);
        }
        let mut table = vec![NONE; n * n];
        for f in 0..n {
            for g in 0..n {
                if src[f] == tgt[g] {
                    table[f * n + g] = compose(f, g) as u32;
                }
            }
        }
        Self::assemble(obj_names, arr_names, src, tgt, ids, table)
    }

    fn assemble(
        obj_names: Vec<String>,
        arr_names: Vec<String>,
        src: Vec<Obj>,
        tgt: Vec<Obj>,
        ids: Vec<Arr>,
        table: Vec<u32>,
    ) -> Self {
        let no = obj_names.len();
        let mut homs = vec![Vec::new(); no * no];
        for f in 0..src.len() {
            homs[src[f] * no + tgt[f]].push(f);
        }
        FinCategory { obj_names, arr_names, src, tgt, ids, table, homs }
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.num_objects()
    }

    pub fn arrows(&self) -> std::ops::Range<Arr> {
        0..self.num_arrows()
    }

    pub fn src(&self, f: Arr) -> Obj {
        self.src[f]
    }

    pub fn tgt(&self, f: Arr) -> Obj {
        self.tgt[f]
    }

    pub fn id(&self, o: Obj) -> Arr {
        self.ids[o]
    }

    pub fn is_identity(&self, f: Arr) -> bool {
        self.ids[self.src[f]] == f
    }

    /// `f ∘ g`, or `None` when `src(f) != tgt(g)`.
    pub fn compose(&self, f: Arr, g: Arr) -> Option<Arr> {
        let n = self.num_arrows();
        match self.table[f * n + g] {
            NONE => None,
            h => Some(h as Arr),
        }
    }

    /// `f ∘ g` for a pair known to be composable.
    pub fn comp(&self, f: Arr, g: Arr) -> Arr {
        self.compose(f, g).unwrap_or_else(|| panic!("arrows {f} and {g} are not composable"))
    }

    /// Arrows `s → t`.
    pub fn hom(&self, s: Obj, t: Obj) -> &[Arr] {
        &self.homs[s * self.num_objects() + t]
    }

    pub fn obj_name(&self, o: Obj) -> &str {
        &self.obj_names[o]
    }

    pub fn arr_name(&self, f: Arr) -> &str {
        &self.arr_names[f]
    }

    pub fn obj_names(&self) -> &[String] {
        &self.obj_names
    }

    pub fn arr_names(&self) -> &[String] {
        &self.arr_names
    }

    pub fn obj_by_name(&self, name: &str) -> Option<Obj> {
        self.obj_names.iter().position(|n| n == name)
    }

    pub fn arr_by_name(&self, name: &str) -> Option<Arr> {
        self.arr_names.iter().position(|n| n == name)
    }

    /// All axiom failures: identities, endpoints of composites, unit laws, associativity.
    pub fn violations(&self) -> Vec<AxiomViolation> {
        let mut out = Vec::new();
        let viol = |kind, witness: Vec<Arr>, detail: String| AxiomViolation { kind, witness, detail };
        for o in self.objects() {
            let i = self.ids[o];
            if i >= self.num_arrows() || self.src[i] != o || self.tgt[i] != o {
                out.push(viol(ViolationKind::BadIdentity, vec![i], format!("object {}", self.obj_names[o])));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let n = self.num_arrows();
        for f in 0..n {
            for g in 0..n {
                let h = self.table[f * n + g];
                let composable = self.src[f] == self.tgt[g];
                if composable && h == NONE {
                    out.push(viol(ViolationKind::MissingComposite, vec![f, g], String::new()));
                } else if !composable && h != NONE {
                    out.push(viol(ViolationKind::Partiality, vec![f, g], String::new()));
                } else if composable {
                    let h = h as usize;
                    if self.src[h] != self.src[g] || self.tgt[h] != self.tgt[f] {
                        out.push(viol(ViolationKind::BadEndpoints, vec![f, g, h], String::new()));
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in 0..n {
            let (s, t) = (self.src[f], self.tgt[f]);
            if self.comp(f, self.ids[s]) != f || self.comp(self.ids[t], f) != f {
                out.push(viol(ViolationKind::NotUnital, vec![f], String::new()));
            }
        }
        for f in 0..n {
            for g in self.hom_into(self.src[f]) {
                let fg = self.comp(f, g);
                for h in self.hom_into(self.src[g]) {
                    if self.comp(fg, h) != self.comp(f, self.comp(g, h)) {
                        out.push(viol(ViolationKind::NotAssociative, vec![f, g, h], String::new()));
                    }
                }
            }
        }
        out
    }

    /// Arrows whose target is `o`.
    pub fn hom_into(&self, o: Obj) -> Vec<Arr> {
        self.arrows().filter(|&f| self.tgt[f] == o).collect()
    }

    pub fn is_idempotent(&self, f: Arr) -> bool {
        self.compose(f, f) == Some(f)
    }

    /// Two-sided inverse of `f`, if any.
    pub fn inverse_of(&self, f: Arr) -> Option<Arr> {
        let (s, t) = (self.src[f], self.tgt[f]);
        self.hom(t, s).iter().copied().find(|&g| self.comp(g, f) == self.ids[s] && self.comp(f, g) == self.ids[t])
    }

    pub fn is_iso(&self, f: Arr) -> bool {
        self.inverse_of(f).is_some()
    }

    pub fn opposite(&self) -> FinCategory {
        let n = self.num_arrows();
        let mut table = vec![NONE; n * n];
        for f in 0..n {
            for g in 0..n {
                if let Some(h) = self.compose(g, f) {
                    table[f * n + g] = h as u32;
                }
            }
        }
        Self::assemble(
            self.obj_names.clone(),
            self.arr_names.clone(),
            self.tgt.clone(),
            self.src.clone(),
            self.ids.clone(),
            table,
        )
    }

    /// Full subcategory on `objs` (in the given order) with the inclusion on arrows.
    pub fn full_subcategory(&self, objs: &[Obj]) -> (FinCategory, Vec<Arr>) {
        let mut new_obj = vec![usize::MAX; self.num_objects()];
        for (i, &o) in objs.iter().enumerate() {
            new_obj[o] = i;
        }
        let incl: Vec<Arr> = self
            .arrows()
            .filter(|&f| new_obj[self.src[f]] != usize::MAX && new_obj[self.tgt[f]] != usize::MAX)
            .collect();
        let mut new_arr = vec![usize::MAX; self.num_arrows()];
        for (i, &f) in incl.iter().enumerate() {
            new_arr[f] = i;
        }
        let arrows =
            incl.iter().map(|&f| (self.arr_names[f].clone(), new_obj[self.src[f]], new_obj[self.tgt[f]])).collect();
        let ids = objs.iter().map(|&o| new_arr[self.ids[o]]).collect();
        let names = objs.iter().map(|&o| self.obj_names[o].clone()).collect();
        let sub = Self::from_fn_unchecked(names, arrows, ids, |f, g| new_arr[self.comp(incl[f], incl[g])]);
        (sub, incl)
    }

    /// Connected components under zigzags of arrows.
    pub fn connected_components(&self) -> Pi0Partition {
        let no = self.num_objects();
        let mut uf = UnionFind::<usize>::new(no);
        for f in self.arrows() {
            uf.union(self.src[f], self.tgt[f]);
        }
        Pi0Partition::from_labels(&uf.into_labeling())
    }

    /// Partition of objects into isomorphism classes.
    pub fn iso_classes(&self) -> Pi0Partition {
        let no = self.num_objects();
        let mut uf = UnionFind::<usize>::new(no);
        for f in self.arrows() {
            if self.src[f] != self.tgt[f] && self.is_iso(f) {
                uf.union(self.src[f], self.tgt[f]);
            }
        }
        Pi0Partition::from_labels(&uf.into_labeling())
    }

    /// Full subcategory on one representative (the least id) per isomorphism class.
    pub fn skeleton(&self) -> (FinCategory, Vec<Obj>) {
        let reps = self.iso_classes().reps;
        let (s, _) = self.full_subcategory(&reps);
        (s, reps)
    }

    /// Returns the inverse table if every arrow is invertible, else a non-invertible arrow.
    pub fn is_groupoid(&self) -> std::result::Result<FinGroupoid, Arr> {
        let mut inv = Vec::with_capacity(self.num_arrows());
        for f in self.arrows() {
            match self.inverse_of(f) {
                Some(g) => inv.push(g),
                None => return Err(f),
            }
        }
        Ok(FinGroupoid { cat: self.clone(), inv })
    }

    pub fn into_groupoid(self) -> Result<FinGroupoid> {
        self.is_groupoid().map_err(|f| Error::Precondition(format!("arrow {} has no inverse", self.arr_name(f))))
    }

    // ---- standard instances ----

    pub fn terminal() -> FinCategory {
        Self::discrete(1)
    }

    pub fn empty() -> FinCategory {
        Self::discrete(0)
    }

    pub fn discrete(n: usize) -> FinCategory {
        let names = (0..n).map(|i| i.to_string()).collect();
        let arrows = (0..n).map(|i| (format!("id{i}"), i, i)).collect();
        Self::from_fn_unchecked(names, arrows, (0..n).collect(), |f, _| f)
    }

    /// The contractible groupoid on `n` objects: exactly one arrow between any two.
    pub fn codiscrete(n: usize) -> FinCategory {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        for s in 0..n {
            for t in 0..n {
                arrows.push((format!("{s}>{t}"), s, t));
            }
        }
        let idx = |s: usize, t: usize| s * n + t;
        let ids = (0..n).map(|i| idx(i, i)).collect();
        Self::from_fn_unchecked(names, arrows, ids, |f, g| idx(g / n, f % n))
    }

    /// The poset `{0 → 1}`.
    pub fn interval() -> FinCategory {
        let names = vec!["0".into(), "1".into()];
        let arrows = vec![("id0".into(), 0, 0), ("id1".into(), 1, 1), ("a".into(), 0, 1)];
        Self::from_fn_unchecked(names, arrows, vec![0, 1], |f, g| match (f, g) {
            (1, x) | (x, 0) => x,
            _ => unreachable!(),
        })
    }

    /// One object with a non-identity arrow `m`, `m ∘ m = m`.
    pub fn walking_idempotent() -> FinCategory {
        let arrows = vec![("id".into(), 0, 0), ("m".into(), 0, 0)];
        Self::from_fn_unchecked(vec!["•".into()], arrows, vec![0], |f, g| f.max(g))
    }

    /// Objects `•, ∘`; `p: • → ∘`, `i: ∘ → •`, `p ∘ i = id_∘`, and the idempotent `i ∘ p`.
    pub fn walking_projection() -> FinCategory {
        // 0 id•, 1 id∘, 2 p, 3 i, 4 i∘p
        let arrows = vec![
            ("id•".into(), 0, 0),
            ("id∘".into(), 1, 1),
            ("p".into(), 0, 1),
            ("i".into(), 1, 0),
            ("ip".into(), 0, 0),
        ];
        Self::from_fn_unchecked(vec!["•".into(), "∘".into()], arrows, vec![0, 1], |f, g| match (f, g) {
            (0, x) | (1, x) => x,
            (x, 0) | (x, 1) => x,
            (2, 3) => 1,
            (2, 4) => 2,
            (4, 3) => 3,
            (4, 4) => 4,
            (3, 2) => 4,
            _ => unreachable!("{f} {g}"),
        })
    }

    /// One-object category of a group.
    pub fn from_group(g: &FinGroup) -> FinCategory {
        let arrows = (0..g.order()).map(|a| (g.name(a).to_string(), 0, 0)).collect();
        Self::from_fn_unchecked(vec!["*".into()], arrows, vec![g.identity()], |a, b| g.mul(a, b))
    }

    /// Inertia groupoid `Γ//Γ`: objects the elements, arrows `h: a → h a h⁻¹`.
    pub fn inertia(g: &FinGroup) -> FinCategory {
        let n = g.order();
        let names = (0..n).map(|a| g.name(a).to_string()).collect();
        // arrow index h * n + a is h acting on a
        let arrows = (0..n * n)
            .map(|k| {
                let (h, a) = (k / n, k % n);
                (format!("{}@{}", g.name(h), g.name(a)), a, g.conjugate(h, a))
            })
            .collect();
        let ids = (0..n).map(|a| g.identity() * n + a).collect();
        Self::from_fn_unchecked(names, arrows, ids, |f, e| g.mul(f / n, e / n) * n + e % n)
    }

    pub fn disjoint_union(&self, other: &FinCategory) -> FinCategory {
        let (no, na) = (self.num_objects(), self.num_arrows());
        let mut names: Vec<String> = self.obj_names.iter().map(|s| format!("L{s}")).collect();
        names.extend(other.obj_names.iter().map(|s| format!("R{s}")));
        let mut arrows: Vec<(String, Obj, Obj)> =
            self.arrows().map(|f| (format!("L{}", self.arr_names[f]), self.src[f], self.tgt[f])).collect();
        arrows
            .extend(other.arrows().map(|f| (format!("R{}", other.arr_names[f]), other.src[f] + no, other.tgt[f] + no)));
        let mut ids = self.ids.clone();
        ids.extend(other.ids.iter().map(|&i| i + na));
        Self::from_fn_unchecked(names, arrows, ids, |f, g| {
            if f < na {
                self.comp(f, g)
            } else {
                other.comp(f - na, g - na) + na
            }
        })
    }

    /// Cartesian product with the two projections.
    pub fn product(&self, other: &FinCategory) -> (FinCategory, Functor, Functor) {
        let (no2, na2) = (other.num_objects(), other.num_arrows());
        let names = self
            .objects()
            .flat_map(|a| other.objects().map(move |b| (a, b)))
            .map(|(a, b)| format!("({},{})", self.obj_names[a], other.obj_names[b]))
            .collect();
        let arrows = self
            .arrows()
            .flat_map(|f| other.arrows().map(move |g| (f, g)))
            .map(|(f, g)| {
                (
                    format!("({},{})", self.arr_names[f], other.arr_names[g]),
                    self.src[f] * no2 + other.src[g],
                    self.tgt[f] * no2 + other.tgt[g],
                )
            })
            .collect();
        let ids = self
            .objects()
            .flat_map(|a| other.objects().map(move |b| (a, b)))
            .map(|(a, b)| self.ids[a] * na2 + other.ids[b])
            .collect();
        let prod = Self::from_fn_unchecked(names, arrows, ids, |x, y| {
            self.comp(x / na2, y / na2) * na2 + other.comp(x % na2, y % na2)
        });
        let p1 =
            Functor { obj: prod.objects().map(|o| o / no2).collect(), arr: prod.arrows().map(|f| f / na2).collect() };
        let p2 =
            Functor { obj: prod.objects().map(|o| o % no2).collect(), arr: prod.arrows().map(|f| f % na2).collect() };
        (prod, p1, p2)
    }

    pub fn with_names(mut self, obj_names: Vec<String>, arr_names: Vec<String>) -> FinCategory {
        assert_eq!(obj_names.len(), self.obj_names.len());
        assert_eq!(arr_names.len(), self.arr_names.len());
        self.obj_names = obj_names;
        self.arr_names = arr_names;
        self
    }
}

/// A finite category in which every arrow is invertible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinGroupoid {
    cat: FinCategory,
    inv: Vec<Arr>,
}

impl FinGroupoid {
    pub fn inv(&self, f: Arr) -> Arr {
        self.inv[f]
    }

    pub fn category(&self) -> &FinCategory {
        &self.cat
    }

    pub fn into_category(self) -> FinCategory {
        self.cat
    }

    pub fn from_group(g: &FinGroup) -> FinGroupoid {
        let cat = FinCategory::from_group(g);
        let inv = (0..g.order()).map(|a| g.inv(a)).collect();
        FinGroupoid { cat, inv }
    }

    /// Vertex group at `o` as a [`FinGroup`] together with the arrow ids of its elements.
    pub fn vertex_group(&self, o: Obj) -> (FinGroup, Vec<Arr>) {
        let elems = self.hom(o, o).to_vec();
        let mut pos = vec![usize::MAX; self.num_arrows()];
        for (i, &f) in elems.iter().enumerate() {
            pos[f] = i;
        }
        let n = elems.len();
        let mut table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = pos[self.comp(elems[i], elems[j])];
            }
        }
        let names = elems.iter().map(|&f| self.arr_name(f).to_string()).collect();
        let g = FinGroup::from_table_unchecked(format!("Aut({})", self.obj_name(o)), names, table);
        (g, elems)
    }
}

impl std::ops::Deref for FinGroupoid {
    type Target = FinCategory;
    fn deref(&self) -> &FinCategory {
        &self.cat
    }
}

/// Partition of objects into classes, each with its least object as representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Partition {
    pub class_of: Vec<usize>,
    pub reps: Vec<Obj>,
}

impl Pi0Partition {
    fn from_labels(labels: &[usize]) -> Pi0Partition {
        let mut class_of = vec![usize::MAX; labels.len()];
        let mut reps = Vec::new();
        let mut seen = std::collections::HashMap::new();
        for (o, &l) in labels.iter().enumerate() {
            let c = *seen.entry(l).or_insert_with(|| {
                reps.push(o);
                reps.len() - 1
            });
            class_of[o] = c;
        }
        Pi0Partition { class_of, reps }
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn members(&self, c: usize) -> Vec<Obj> {
        (0..self.class_of.len()).filter(|&o| self.class_of[o] == c).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.reps.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }
}

#[cfg(test)]
mod tests;
