//! Universal enveloping groupoid of a finite category: invert every arrow and
//! close the resulting presentation by coset enumeration.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fincat::{enumerate_functors, is_equivalence, Arr, FinCategory, FinGroupoid, Functor, Obj};

/// Default cap on defined cosets per component.
pub const DEFAULT_STEP_BOUND: u64 = 100_000;

const NONE: usize = usize::MAX;

/// A group presentation on `gens` generators; letter `2i` is generator `i`, `2i+1` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub gens: usize,
    pub relators: Vec<Vec<usize>>,
}

/// A closed coset table of the trivial subgroup: the regular right action.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// `table[c][letter]`; coset 0 is the identity. Cosets are numbered in shortlex
    /// order of their normal words.
    pub table: Vec<Vec<usize>>,
    pub words: Vec<Vec<usize>>,
    pub steps_used: u64,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn apply(&self, c: usize, word: &[usize]) -> usize {
        word.iter().fold(c, |c, &x| self.table[c][x])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.apply(a, &self.words[b])
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    defined: u64,
    bound: u64,
}

impl Enumerator {
    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.defined >= self.bound {
            return Err(Error::Inconclusive { steps_used: self.defined });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.defined += 1;
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k != l {
            let (lo, hi) = if k < l { (k, l) } else { (l, k) };
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][x ^ 1] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t, &mut queue);
                } else if self.table[nu][x ^ 1] != NONE {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Felsch-free HLT coset enumeration of the trivial subgroup, with coincidence handling.
pub fn enumerate_cosets(p: &GroupPresentation, bound: u64) -> Result<CosetTable> {
    let cols = 2 * p.gens;
    let mut e = Enumerator { cols, table: vec![vec![NONE; cols]], parent: vec![0], defined: 1, bound };
    let mut c = 0;
    while c < e.table.len() {
        if e.alive(c) {
            for r in &p.relators {
                if !e.alive(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            for x in 0..cols {
                if e.alive(c) && e.table[c][x] == NONE {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    // renumber live cosets by breadth-first search in letter order: shortlex words
    let steps_used = e.defined;
    let mut index = HashMap::new();
    let mut words = vec![Vec::new()];
    let mut order = vec![0usize];
    index.insert(0usize, 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for x in 0..cols {
            let d = e.table[c][x];
            if let Entry::Vacant(slot) = index.entry(d) {
                slot.insert(order.len());
                let mut w = words[index[&c]].clone();
                w.push(x);
                words.push(w);
                order.push(d);
                queue.push_back(d);
            }
        }
    }
    let table = order.iter().map(|&c| (0..cols).map(|x| index[&e.table[c][x]]).collect()).collect();
    Ok(CosetTable { table, words, steps_used })
}

/// The enveloping groupoid `E` of `C` with the unit `C → E`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub groupoid: FinGroupoid,
    pub unit: Functor,
    /// Per component: root object and the presentation of its vertex group.
    pub presentations: Vec<(Obj, GroupPresentation)>,
    pub steps_used: u64,
}

/// Generators are the non-identity arrows; relators are the composition table and
/// the spanning-tree arrows, read at a chosen root of each component.
pub fn enveloping_groupoid(c: &FinCategory, step_bound: u64) -> Result<Envelope> {
    let comps = c.connected_components();
    let mut comp_data = Vec::new();
    let mut steps_used = 0;
    // per object: (component, path word from the root, as letters over C's arrows)
    let mut path: Vec<Vec<(Arr, bool)>> = vec![Vec::new(); c.num_objects()];
    for k in 0..comps.num_classes() {
        let objs = comps.members(k);
        let root = objs[0];
        let arrows: Vec<Arr> = c.arrows().filter(|&a| comps.class_of[c.src(a)] == k && !c.is_identity(a)).collect();
        let letter: HashMap<Arr, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, 2 * i)).collect();
        // spanning tree by breadth-first search over arrows in either direction
        let mut reached = vec![false; c.num_objects()];
        reached[root] = true;
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([root]);
        while let Some(o) = queue.pop_front() {
            for &a in &arrows {
                let (s, t) = (c.src(a), c.tgt(a));
                if s == o && !reached[t] {
                    reached[t] = true;
                    let mut w = path[o].clone();
                    w.insert(0, (a, false));
                    path[t] = w;
                    tree.push(a);
                    queue.push_back(t);
                } else if t == o && !reached[s] {
                    reached[s] = true;
                    let mut w = path[o].clone();
                    w.insert(0, (a, true));
                    path[s] = w;
                    tree.push(a);
                    queue.push_back(s);
                }
            }
        }
        let mut relators: Vec<Vec<usize>> = tree.iter().map(|a| vec![letter[a]]).collect();
        for &f in &arrows {
            for &g in &arrows {
                if let Some(fg) = c.compose(f, g) {
                    let mut r = vec![letter[&f], letter[&g]];
                    if !c.is_identity(fg) {
                        r.push(letter[&fg] ^ 1);
                    }
                    relators.push(r);
                }
            }
        }
        let p = GroupPresentation { gens: arrows.len(), relators };
        let table = enumerate_cosets(&p, step_bound)?;
        steps_used += table.steps_used;
        comp_data.push((objs, root, letter, table, p));
    }
    // arrows of E: (s, t, γ) standing for p_t ∘ γ ∘ p_s⁻¹
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for (k, (objs, _, _, table, _)) in comp_data.iter().enumerate() {
        for &s in objs {
            for &t in objs {
                for gamma in 0..table.order() {
                    index.insert((s, t, gamma), arrows.len());
                    arrows.push((k, s, t, gamma));
                }
            }
        }
    }
    let ids: Vec<Arr> = c.objects().map(|o| index[&(o, o, 0)]).collect();
    let names: Vec<(String, Obj, Obj)> = arrows
        .iter()
        .map(|&(k, s, t, gamma)| {
            let (_, _, letter, table, _) = &comp_data[k];
            let name = if s == t && gamma == 0 {
                c.arr_name(c.id(s)).to_string()
            } else {
                arrow_word(c, letter, &path[t], &table.words[gamma], &path[s])
            };
            (name, s, t)
        })
        .collect();
    let e = FinCategory::from_fn_unchecked(c.obj_names().to_vec(), names, ids, |b, a| {
        let (k, s, _, ga) = arrows[a];
        let (_, _, u, gb) = arrows[b];
        index[&(s, u, comp_data[k].3.mul(gb, ga))]
    });
    let groupoid = e.into_groupoid()?;
    let unit = Functor {
        obj: c.objects().collect(),
        arr: c
            .arrows()
            .map(|a| {
                let (s, t) = (c.src(a), c.tgt(a));
                let k = comps.class_of[s];
                let gamma = if c.is_identity(a) { 0 } else { comp_data[k].3.table[0][comp_data[k].2[&a]] };
                index[&(s, t, gamma)]
            })
            .collect(),
    };
    unit.check(c, &groupoid).map_err(|e| Error::Precondition(format!("internal: unit is not a functor: {e}")))?;
    let presentations = comp_data.into_iter().map(|(_, root, _, _, p)| (root, p)).collect();
    Ok(Envelope { groupoid, unit, presentations, steps_used })
}

/// Name of `p_t ∘ γ ∘ p_s⁻¹` as a freely reduced composite of arrows of `C` and inverses.
fn arrow_word(
    c: &FinCategory,
    letter: &HashMap<Arr, usize>,
    pt: &[(Arr, bool)],
    gamma: &[usize],
    ps: &[(Arr, bool)],
) -> String {
    let by_letter: HashMap<usize, Arr> = letter.iter().map(|(&a, &l)| (l, a)).collect();
    let mut w: Vec<(Arr, bool)> = pt.to_vec();
    w.extend(gamma.iter().map(|&x| (by_letter[&(x & !1)], x & 1 == 1)));
    w.extend(ps.iter().rev().map(|&(a, inv)| (a, !inv)));
    let mut reduced: Vec<(Arr, bool)> = Vec::new();
    for x in w {
        if reduced.last() == Some(&(x.0, !x.1)) {
            reduced.pop();
        } else {
            reduced.push(x);
        }
    }
    if reduced.is_empty() {
        return "1".into();
    }
    reduced
        .iter()
        .map(|&(a, inv)| if inv { format!("{}⁻¹", c.arr_name(a)) } else { c.arr_name(a).to_string() })
        .collect::<Vec<_>>()
        .join("∘")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopingVerdict {
    /// `(functors C → T, functors E → T, restriction is an equivalence)` per test groupoid.
    pub per_test: Vec<(usize, usize, bool)>,
    pub passed: bool,
}

/// Checks that restriction along `unit: C → E` gives `Fun(E, T) ≃ Fun(C, T)` for each `T`.
pub fn verify_enveloping(
    c: &FinCategory,
    e: &FinCategory,
    unit: &Functor,
    tests: &[FinCategory],
    budget: u64,
) -> Result<EnvelopingVerdict> {
    if let Err(a) = e.is_groupoid() {
        return Err(Error::Precondition(format!("candidate is not a groupoid: {} has no inverse", e.arr_name(a))));
    }
    unit.check(c, e).map_err(Error::Precondition)?;
    let mut per_test = Vec::new();
    for t in tests {
        let fe = enumerate_functors(e, t, budget)?;
        let fc = enumerate_functors(c, t, budget)?;
        let r = fe
            .restrict_along(&fc, unit)
            .ok_or_else(|| Error::Precondition("internal: restriction left the functor category".into()))?;
        let ok = is_equivalence(&fe.category, &fc.category, &r);
        per_test.push((fc.functors.len(), fe.functors.len(), ok));
    }
    let passed = per_test.iter().all(|x| x.2);
    Ok(EnvelopingVerdict { per_test, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_isomorphism, CategoryBuilder, FinGroup, DEFAULT_FUNCTOR_BUDGET as B};
    use crate::limits::default_test_family;

    #[test]
    fn coset_enumeration_orders() {
        // S3 = ⟨a, b | a², b³, (ab)²⟩
        let p = GroupPresentation { gens: 2, relators: vec![vec![0, 0], vec![2, 2, 2], vec![0, 2, 0, 2]] };
        assert_eq!(enumerate_cosets(&p, 1000).unwrap().order(), 6);
        // Q8 = ⟨i, j | i⁴, i²j⁻², j⁻¹iji⟩
        let p = GroupPresentation { gens: 2, relators: vec![vec![0; 4], vec![0, 0, 3, 3], vec![3, 0, 2, 0]] };
        assert_eq!(enumerate_cosets(&p, 10_000).unwrap().order(), 8);
        // a free generator never closes
        let p = GroupPresentation { gens: 1, relators: vec![] };
        assert!(matches!(enumerate_cosets(&p, 500), Err(Error::Inconclusive { .. })));
    }

    #[test]
    fn shortlex_words_are_minimal() {
        let p = GroupPresentation { gens: 1, relators: vec![vec![0; 5]] };
        let t = enumerate_cosets(&p, 1000).unwrap();
        let lens: Vec<usize> = t.words.iter().map(|w| w.len()).collect();
        assert_eq!(lens, vec![0, 1, 1, 2, 2]);
    }

    #[test]
    fn envelope_examples() {
        let m = FinCategory::walking_idempotent();
        let env = enveloping_groupoid(&m, DEFAULT_STEP_BOUND).unwrap();
        assert_eq!(env.groupoid.num_arrows(), 1);

        let i = FinCategory::interval();
        let env = enveloping_groupoid(&i, DEFAULT_STEP_BOUND).unwrap();
        assert!(find_isomorphism(&env.groupoid, &FinCategory::codiscrete(2), B).unwrap().is_some());
        assert_eq!(env.unit.obj, vec![0, 1]);

        for g in [FinGroup::symmetric(3), FinGroup::quaternion()] {
            let c = FinCategory::from_group(&g);
            let env = enveloping_groupoid(&c, DEFAULT_STEP_BOUND).unwrap();
            // the unit is an isomorphism
            let mut seen = env.unit.arr.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), c.num_arrows());
            assert_eq!(env.groupoid.num_arrows(), c.num_arrows());
        }
    }

    #[test]
    fn parallel_pair_is_inconclusive() {
        let c = CategoryBuilder::new()
            .object("a")
            .object("b")
            .arrow("ida", "a", "a")
            .arrow("idb", "b", "b")
            .identity("a", "ida")
            .identity("b", "idb")
            .arrow("f", "a", "b")
            .arrow("g", "a", "b")
            .build()
            .unwrap();
        assert!(matches!(enveloping_groupoid(&c, 2000), Err(Error::Inconclusive { .. })));
    }

    #[test]
    fn verification() {
        let m = FinCategory::walking_idempotent();
        let env = enveloping_groupoid(&m, DEFAULT_STEP_BOUND).unwrap();
        let tests =
            vec![FinCategory::from_group(&FinGroup::cyclic(2)), FinCategory::from_group(&FinGroup::symmetric(3))];
        assert!(verify_enveloping(&m, &env.groupoid, &env.unit, &tests, B).unwrap().passed);
        for c in [FinCategory::interval(), FinCategory::walking_projection(), FinCategory::codiscrete(2)] {
            let env = enveloping_groupoid(&c, DEFAULT_STEP_BOUND).unwrap();
            assert!(verify_enveloping(&c, &env.groupoid, &env.unit, &default_test_family(), B).unwrap().passed);
        }
        // a non-groupoid candidate is rejected
        let id = crate::fincat::identity_functor(&m);
        assert!(matches!(verify_enveloping(&m, &m, &id, &tests, B), Err(Error::Precondition(_))));
        // collapsing B(Z/2) to a point loses the group
        let bz2 = FinCategory::from_group(&FinGroup::cyclic(2));
        let collapse = Functor { obj: vec![0], arr: vec![0; 2] };
        let one = FinCategory::terminal();
        assert!(!verify_enveloping(&bz2, &one, &collapse, &default_test_family(), B).unwrap().passed);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn groupoids_are_their_own_envelope(parts in proptest::collection::vec(0usize..6, 1..4)) {
            let pieces: Vec<FinCategory> = parts
                .iter()
                .map(|&k| match k {
                    0 => FinCategory::terminal(),
                    1 => FinCategory::codiscrete(2),
                    2 => FinCategory::from_group(&FinGroup::cyclic(3)),
                    3 => FinCategory::from_group(&FinGroup::symmetric(3)),
                    4 => FinCategory::from_group(&FinGroup::dihedral(4)),
                    _ => FinCategory::codiscrete(3),
                })
                .collect();
            let c = pieces[1..].iter().fold(pieces[0].clone(), |acc, p| acc.disjoint_union(p));
            let env = enveloping_groupoid(&c, DEFAULT_STEP_BOUND).unwrap();
            let mut image = env.unit.arr.clone();
            image.sort_unstable();
            image.dedup();
            proptest::prop_assert_eq!(image.len(), c.num_arrows());
            proptest::prop_assert_eq!(env.groupoid.num_arrows(), c.num_arrows());
            proptest::prop_assert!(is_equivalence(&c, &env.groupoid, &env.unit));
        }
    }
}
