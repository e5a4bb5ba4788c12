use crate::error::{Error, Result};

/// A finite distributive lattice given by its order relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinLattice {
    names: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FinLattice {
    /// From covering pairs `(a, b)` meaning `a < b` with nothing between. Validates
    /// antisymmetry, existence of meets and joins, and distributivity.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<FinLattice> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Precondition("a lattice needs at least one element".into()));
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Precondition("cover refers to unknown element".into()));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::Precondition(format!("{} and {} form a cycle", names[a], names[b])));
                }
            }
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> =
                (0..n).filter(|&c| if upper { le(a, c) && le(b, c) } else { le(c, a) && le(c, b) }).collect();
            cands.iter().copied().find(|&c| cands.iter().all(|&d| if upper { le(c, d) } else { le(d, c) }))
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = bound(a, b, false)
                    .ok_or_else(|| Error::Precondition(format!("no meet of {} and {}", names[a], names[b])))?;
                join[a * n + b] = bound(a, b, true)
                    .ok_or_else(|| Error::Precondition(format!("no join of {} and {}", names[a], names[b])))?;
            }
        }
        let bottom = (0..n).find(|&a| (0..n).all(|b| le(a, b))).expect("finite lattice has a bottom");
        let top = (0..n).find(|&a| (0..n).all(|b| le(b, a))).expect("finite lattice has a top");
        let l = FinLattice { names, leq, meet, join, bottom, top };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)) {
                        return Err(Error::Precondition("lattice is not distributive".into()));
                    }
                }
            }
        }
        Ok(l)
    }

    /// The two-element chain `{0 → 1}`.
    pub fn chain2() -> FinLattice {
        Self::from_covers(vec!["0".into(), "1".into()], &[(0, 1)]).unwrap()
    }

    /// Chain with `n` elements.
    pub fn chain(n: usize) -> FinLattice {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers((0..n).map(|i| i.to_string()).collect(), &covers).unwrap()
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Covering pairs, for serialization.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}
