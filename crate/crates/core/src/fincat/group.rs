use crate::error::{Error, Result};

/// A finite group by multiplication table. Element 0 is not assumed to be the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinGroup {
    name: String,
    names: Vec<String>,
    table: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

impl FinGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(name: impl Into<String>, names: Vec<String>, table: Vec<usize>) -> Result<FinGroup> {
        let n = names.len();
        if table.len() != n * n || table.iter().any(|&x| x >= n) {
            return Err(Error::Precondition("malformed group table".into()));
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let e = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::Precondition("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| m(a, b) == e && m(b, a) == e) {
                return Err(Error::Precondition(format!("{} has no inverse", names[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::Precondition("not associative".into()));
                    }
                }
            }
        }
        Ok(Self::from_table_unchecked(name, names, table))
    }

    pub(crate) fn from_table_unchecked(name: impl Into<String>, names: Vec<String>, table: Vec<usize>) -> FinGroup {
        let n = names.len();
        let identity = (0..n).find(|&e| (0..n).all(|a| table[e * n + a] == a)).expect("identity");
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == identity).expect("inverse")).collect();
        FinGroup { name: name.into(), names, table, inv, identity }
    }

    pub fn trivial() -> FinGroup {
        Self::cyclic(1)
    }

    /// ℤ/n with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> FinGroup {
        let names = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        FinGroup { name: format!("Z{n}"), names, table, inv: (0..n).map(|k| (n - k) % n).collect(), identity: 0 }
    }

    /// Symmetric group on `n` letters; permutations in lexicographic order, `(a·b)(i) = a(b(i))`.
    pub fn symmetric(n: usize) -> FinGroup {
        let perms = permutations(n);
        Self::from_permutations(format!("S{n}"), &perms)
    }

    /// Dihedral group of order `2n` as permutations of the `n`-gon.
    pub fn dihedral(n: usize) -> FinGroup {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        let perms = close_permutations(n, &[rot, refl]);
        Self::from_permutations(format!("D{n}"), &perms)
    }

    /// Quaternion group Q8 as a permutation group on itself.
    pub fn quaternion() -> FinGroup {
        // elements ±1, ±i, ±j, ±k encoded as (sign, unit) with unit 0..4 = 1,i,j,k
        let mul_unit = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let code = |neg: bool, u: usize| u + if neg { 4 } else { 0 };
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"];
        let mut table = vec![0; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (neg, u) = mul_unit(a % 4, b % 4);
                let neg = neg ^ (a >= 4) ^ (b >= 4);
                table[a * 8 + b] = code(neg, u);
            }
        }
        Self::from_table_unchecked("Q8", labels.iter().map(|s| s.to_string()).collect(), table)
    }

    pub fn direct_product(&self, other: &FinGroup) -> FinGroup {
        let (n, m) = (self.order(), other.order());
        let names = (0..n * m).map(|i| format!("({},{})", self.names[i / m], other.names[i % m])).collect();
        let table = (0..n * m * n * m)
            .map(|k| {
                let (a, b) = (k / (n * m), k % (n * m));
                self.mul(a / m, b / m) * m + other.mul(a % m, b % m)
            })
            .collect();
        Self::from_table_unchecked(format!("{}x{}", self.name, other.name), names, table)
    }

    pub fn from_permutations(name: impl Into<String>, perms: &[Vec<usize>]) -> FinGroup {
        let n = perms.len();
        let index: std::collections::HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let c: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
                table[a * n + b] = index[&c];
            }
        }
        let names = perms.iter().map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("")).collect();
        Self::from_table_unchecked(name, names, table)
    }

    /// Parses names like `Z4`, `S3`, `D4`, `Q8`, `Z2xZ2`, `1`.
    pub fn by_name(name: &str) -> Option<FinGroup> {
        if name.contains('x') {
            let mut it = name.split('x').map(Self::by_name);
            let first = it.next()??;
            return it.try_fold(first, |acc, g| Some(acc.direct_product(&g?)));
        }
        let (head, rest) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
        let k: Option<usize> = rest.parse().ok();
        match (head, k) {
            ("1", None) => Some(Self::trivial()),
            ("Z", Some(k)) if k >= 1 => Some(Self::cyclic(k)),
            ("S", Some(k)) if (1..=5).contains(&k) => Some(Self::symmetric(k)),
            ("D", Some(k)) if k >= 3 => Some(Self::dihedral(k)),
            ("Q", Some(8)) => Some(Self::quaternion()),
            _ => None,
        }
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn label(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, lcm)
    }

    pub fn conjugate(&self, h: usize, a: usize) -> usize {
        self.mul(self.mul(h, a), self.inv(h))
    }

    /// Conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| self.conjugate(h, a)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class);
        }
        out
    }

    pub fn centralizer(&self, a: usize) -> Vec<usize> {
        (0..self.order()).filter(|&h| self.mul(h, a) == self.mul(a, h)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set: greedily add elements not in the generated subgroup.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![self.identity];
        for a in 0..self.order() {
            if !sub.contains(&a) {
                gens.push(a);
                sub = self.generated(&gens);
            }
        }
        gens
    }

    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut sub = vec![self.identity];
        let mut i = 0;
        while i < sub.len() {
            for &g in gens {
                let x = self.mul(sub[i], g);
                if !sub.contains(&x) {
                    sub.push(x);
                }
            }
            i += 1;
        }
        sub.sort_unstable();
        sub
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn close_permutations(n: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![(0..n).collect::<Vec<_>>()];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let p: Vec<usize> = out[i].iter().map(|&k| g[k]).collect();
            if !out.contains(&p) {
                out.push(p);
            }
        }
        i += 1;
    }
    out.sort();
    out
}
