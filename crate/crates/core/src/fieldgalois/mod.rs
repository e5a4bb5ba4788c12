//! Finite-dimensional commutative algebras and coalgebras over finite fields:
//! idempotents and Pierce spectra, separability, Galois algebras of finite groups
//! and the classification of their torsors.

mod field;

pub use field::{is_prime, prime_power, Fq, Mat, MAX_TABLE_ORDER};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{equivalence_check, FinCategory, FinGroup, FinGroupoid};

/// Algebras with at most this many elements have their idempotents enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A commutative unital algebra of dimension `dim` over `F_q`, given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqAlgebra {
    field: Fq,
    dim: usize,
    /// `consts[i * dim + j]` is the coordinate vector of `bᵢ·bⱼ`.
    consts: Vec<Vec<usize>>,
    unit: Vec<usize>,
}

impl FqAlgebra {
    pub fn new(field: Fq, dim: usize, consts: Vec<Vec<usize>>, unit: Vec<usize>) -> Result<FqAlgebra> {
        let q = field.order();
        let bad = consts.len() != dim * dim
            || consts.iter().any(|v| v.len() != dim || v.iter().any(|&c| c >= q))
            || unit.len() != dim
            || unit.iter().any(|&c| c >= q);
        if bad {
            return Err(Error::Precondition("structure constants have the wrong shape".into()));
        }
        let a = FqAlgebra { field, dim, consts, unit };
        a.check()?;
        Ok(a)
    }

    /// Commutativity, associativity and the unit law on all basis triples.
    fn check(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            let bi = self.basis(i);
            if self.mul(&self.unit, &bi) != bi {
                return Err(Error::Precondition(format!("unit law fails on basis vector {i}")));
            }
            for j in 0..n {
                if self.consts[i * n + j] != self.consts[j * n + i] {
                    return Err(Error::Precondition(format!("not commutative at ({i},{j})")));
                }
                for k in 0..n {
                    let l = self.mul(&self.consts[i * n + j], &self.basis(k));
                    let r = self.mul(&bi, &self.consts[j * n + k]);
                    if l != r {
                        return Err(Error::Precondition(format!("not associative at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit(&self) -> &[usize] {
        &self.unit
    }
    pub fn structure_constants(&self) -> &[Vec<usize>] {
        &self.consts
    }

    pub fn zero(&self) -> Vec<usize> {
        vec![0; self.dim]
    }

    pub fn basis(&self, i: usize) -> Vec<usize> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn add(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn scale(&self, c: usize, x: &[usize]) -> Vec<usize> {
        x.iter().map(|&a| self.field.mul(c, a)).collect()
    }

    pub fn mul(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        let f = &self.field;
        let mut r = self.zero();
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                let c = f.mul(a, b);
                if c == 0 {
                    continue;
                }
                for (k, &s) in self.consts[i * self.dim + j].iter().enumerate() {
                    if s != 0 {
                        r[k] = f.add(r[k], f.mul(c, s));
                    }
                }
            }
        }
        r
    }

    pub fn pow(&self, x: &[usize], mut e: u64) -> Vec<usize> {
        let (mut base, mut acc) = (x.to_vec(), self.unit.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Number of elements, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.dim as u32)
    }

    /// The element with base-`q` code `idx`.
    pub fn element(&self, mut idx: u64) -> Vec<usize> {
        let q = self.field.order() as u64;
        (0..self.dim)
            .map(|_| {
                let c = (idx % q) as usize;
                idx /= q;
                c
            })
            .collect()
    }

    /// Matrix of `x ↦ x^q`, which is `F_q`-linear.
    pub fn frobenius_matrix(&self) -> Mat {
        let cols: Vec<Vec<usize>> =
            (0..self.dim).map(|i| self.pow(&self.basis(i), self.field.order() as u64)).collect();
        Mat::from_columns(self.dim, &cols)
    }

    pub fn multiplication_matrix(&self, x: &[usize]) -> Mat {
        let cols: Vec<Vec<usize>> = (0..self.dim).map(|j| self.mul(x, &self.basis(j))).collect();
        Mat::from_columns(self.dim, &cols)
    }

    /// `F_q[x]/(f)` for a monic `f` of positive degree, on the basis `1, x, …`.
    pub fn quotient(field: &Fq, f: &[usize]) -> Result<FqAlgebra> {
        let n = f.len().saturating_sub(1);
        if n == 0 || f[n] != 1 {
            return Err(Error::Precondition("quotient polynomial must be monic of positive degree".into()));
        }
        let mut consts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut mono = vec![0; i + j + 1];
                mono[i + j] = 1;
                let mut r = field.poly_rem(&mono, f);
                r.resize(n, 0);
                consts.push(r);
            }
        }
        let mut unit = vec![0; n];
        unit[0] = 1;
        FqAlgebra::new(field.clone(), n, consts, unit)
    }

    /// `F_q^n` with pointwise multiplication.
    pub fn split(field: &Fq, n: usize) -> FqAlgebra {
        let consts = (0..n * n)
            .map(|ij| {
                let mut v = vec![0; n];
                if ij / n == ij % n {
                    v[ij / n] = 1;
                }
                v
            })
            .collect();
        FqAlgebra { field: field.clone(), dim: n, consts, unit: vec![1; n] }
    }

    /// `F_{q^n}` as `F_q[x]/(f)` with `f` the least irreducible of degree `n`.
    pub fn extension(field: &Fq, n: usize) -> Result<FqAlgebra> {
        let f =
            field.first_irreducible(n).ok_or(Error::BudgetExceeded { what: "irreducible search", limit: u64::MAX })?;
        FqAlgebra::quotient(field, &f)
    }

    pub fn product(&self, other: &FqAlgebra) -> Result<FqAlgebra> {
        if self.field != other.field {
            return Err(Error::MixedInstance);
        }
        let (n, m) = (self.dim, other.dim);
        let d = n + m;
        let mut consts = vec![vec![0; d]; d * d];
        for i in 0..n {
            for j in 0..n {
                consts[i * d + j][..n].copy_from_slice(&self.consts[i * n + j]);
            }
        }
        for i in 0..m {
            for j in 0..m {
                consts[(n + i) * d + n + j][n..].copy_from_slice(&other.consts[i * m + j]);
            }
        }
        let unit = self.unit.iter().chain(&other.unit).copied().collect();
        Ok(FqAlgebra { field: self.field.clone(), dim: d, consts, unit })
    }

    /// The algebra `eR` for an idempotent `e`, on a basis extracted from the image of `x ↦ ex`.
    pub fn corner(&self, e: &[usize]) -> FqAlgebra {
        let f = &self.field;
        let m = self.multiplication_matrix(e);
        let pivots = m.clone().rref(f);
        let basis: Vec<Vec<usize>> = pivots.iter().map(|&c| m.column(c)).collect();
        let b = Mat::from_columns(self.dim, &basis);
        let coords = |v: &[usize]| b.solve(f, v).expect("product stays in the corner").0;
        let k = basis.len();
        let consts = (0..k * k).map(|ij| coords(&self.mul(&basis[ij / k], &basis[ij % k]))).collect();
        FqAlgebra { field: f.clone(), dim: k, consts, unit: coords(e) }
    }

    pub fn is_idempotent(&self, e: &[usize]) -> bool {
        self.mul(e, e) == e
    }
}

/// How a spectrum was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMethod {
    Exhaustive,
    Splitting,
}

/// Primitive idempotents with their component algebras `eR`.
#[derive(Clone, Debug)]
pub struct PierceSpectrum {
    pub primitives: Vec<Vec<usize>>,
    pub components: Vec<FqAlgebra>,
    pub method: SpectrumMethod,
}

impl PierceSpectrum {
    pub fn points(&self) -> usize {
        self.primitives.len()
    }

    /// Orthogonal, summing to 1, and no component with a nontrivial idempotent.
    pub fn verify(&self, r: &FqAlgebra) -> bool {
        let sum = self.primitives.iter().fold(r.zero(), |acc, e| r.add(&acc, e));
        let orth = self
            .primitives
            .iter()
            .enumerate()
            .all(|(i, e)| r.is_idempotent(e) && self.primitives[i + 1..].iter().all(|f| r.mul(e, f) == r.zero()));
        let connected = self.components.iter().all(|c| split_primitives(c).len() == 1);
        sum == r.unit() && orth && connected
    }
}

/// All idempotents of `r` by exhaustive search.
pub fn idempotents_exhaustive(r: &FqAlgebra) -> Result<Vec<Vec<usize>>> {
    let size = r
        .size()
        .filter(|&s| s <= EXHAUSTIVE_LIMIT)
        .ok_or(Error::BudgetExceeded { what: "exhaustive idempotent search", limit: EXHAUSTIVE_LIMIT })?;
    Ok((0..size).map(|i| r.element(i)).filter(|e| r.is_idempotent(e)).collect())
}

/// Nonzero idempotents with no nonzero idempotent strictly below them (`f ≤ e` iff `fe = f`).
pub fn minimal_idempotents(r: &FqAlgebra, idems: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let z = r.zero();
    idems
        .iter()
        .filter(|e| **e != z)
        .filter(|e| !idems.iter().any(|f| *f != z && f != *e && r.mul(f, e) == *f))
        .cloned()
        .collect()
}

/// Primitive idempotents by splitting the Frobenius-fixed subalgebra `{x : x^q = x} ≅ F_q^k`:
/// each basis element of it refines the current idempotents by Lagrange interpolation.
pub fn split_primitives(r: &FqAlgebra) -> Vec<Vec<usize>> {
    let f = r.field();
    let mut fr = r.frobenius_matrix();
    for i in 0..r.dim() {
        fr.data[i * r.dim() + i] = f.sub(fr.at(i, i), 1);
    }
    let fixed = fr.kernel(f);
    let mut idems = vec![r.unit().to_vec()];
    for b in &fixed {
        let mut next = Vec::new();
        for e in &idems {
            let x = r.mul(b, e);
            for lambda in 0..f.order() {
                let mut acc = e.clone();
                let mut denom = 1;
                for mu in (0..f.order()).filter(|&mu| mu != lambda) {
                    acc = r.mul(&acc, &r.sub(&x, &r.scale(mu, e)));
                    denom = f.mul(denom, f.sub(lambda, mu));
                }
                let part = r.scale(f.inv(denom), &acc);
                if part != r.zero() {
                    next.push(part);
                }
            }
        }
        idems = next;
    }
    idems.sort();
    idems
}

/// The idempotents of `r`: exhaustively when small, otherwise as sums of primitives.
pub fn idempotents(r: &FqAlgebra, budget: u64) -> Result<Vec<Vec<usize>>> {
    if r.size().is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
        return idempotents_exhaustive(r);
    }
    let prims = split_primitives(r);
    if prims.len() >= 64 || 1u64 << prims.len() > budget {
        return Err(Error::BudgetExceeded { what: "idempotent subsets", limit: budget });
    }
    Ok((0..1u64 << prims.len())
        .map(|mask| {
            prims.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(r.zero(), |acc, (_, e)| r.add(&acc, e))
        })
        .collect())
}

pub fn primitive_idempotents(r: &FqAlgebra) -> Result<PierceSpectrum> {
    let (mut primitives, method) = match idempotents_exhaustive(r) {
        Ok(all) => (minimal_idempotents(r, &all), SpectrumMethod::Exhaustive),
        Err(_) => (split_primitives(r), SpectrumMethod::Splitting),
    };
    primitives.sort();
    let components = primitives.iter().map(|e| r.corner(e)).collect();
    Ok(PierceSpectrum { primitives, components, method })
}

/// Reducedness: the `q`-power map is injective iff there is no nonzero nilpotent.
pub fn is_separable(r: &FqAlgebra) -> bool {
    r.frobenius_matrix().rank(r.field()) == r.dim()
}

/// An algebra with a right action of a finite group by algebra automorphisms:
/// `x·h = action[h]·x` and `action[h·k] = action[k]·action[h]`.
#[derive(Clone, Debug)]
pub struct GAlgebra {
    pub algebra: FqAlgebra,
    pub group: FinGroup,
    pub action: Vec<Mat>,
}

impl GAlgebra {
    pub fn trivial(algebra: FqAlgebra, group: FinGroup) -> GAlgebra {
        let action = vec![Mat::identity(algebra.dim()); group.order()];
        GAlgebra { algebra, group, action }
    }

    pub fn check(&self) -> Result<()> {
        let (r, f, g) = (&self.algebra, self.algebra.field(), &self.group);
        if self.action.len() != g.order() || self.action[g.identity()] != Mat::identity(r.dim()) {
            return Err(Error::Precondition("identity must act trivially".into()));
        }
        for h in 0..g.order() {
            let a = &self.action[h];
            if !is_algebra_map(r, r, a) || a.rank(f) != r.dim() {
                return Err(Error::Precondition(format!("element {} does not act by an automorphism", g.name(h))));
            }
            for k in 0..g.order() {
                if self.action[g.mul(h, k)] != self.action[k].mul(f, a) {
                    return Err(Error::Precondition("action is not a right action".into()));
                }
            }
        }
        Ok(())
    }

    /// The dual coalgebra with the transposed right action `φ·h = φ ∘ action[h⁻¹]`.
    pub fn dual(&self) -> FqCoalgebra {
        let r = &self.algebra;
        let n = r.dim();
        let mut delta = Mat::zero(n * n, n);
        for ij in 0..n * n {
            for k in 0..n {
                delta.data[ij * n + k] = r.consts[ij][k];
            }
        }
        let action = (0..self.group.order()).map(|h| self.action[self.group.inv(h)].transpose()).collect();
        FqCoalgebra { field: r.field().clone(), dim: n, delta, counit: r.unit().to_vec(), action }
    }
}

/// Unital and multiplicative on basis pairs.
pub fn is_algebra_map(dom: &FqAlgebra, cod: &FqAlgebra, m: &Mat) -> bool {
    let f = dom.field();
    if m.apply(f, dom.unit()) != cod.unit() {
        return false;
    }
    let images: Vec<Vec<usize>> = (0..dom.dim()).map(|i| m.column(i)).collect();
    (0..dom.dim())
        .all(|i| (i..dom.dim()).all(|j| m.apply(f, &dom.consts[i * dom.dim() + j]) == cod.mul(&images[i], &images[j])))
}

/// A cocommutative coalgebra with a right group action, `Δ` as a `dim² × dim` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqCoalgebra {
    pub field: Fq,
    pub dim: usize,
    pub delta: Mat,
    pub counit: Vec<usize>,
    pub action: Vec<Mat>,
}

impl FqCoalgebra {
    /// Coassociativity, counit laws, cocommutativity, and the action by coalgebra maps.
    pub fn check(&self) -> std::result::Result<(), String> {
        let (f, n) = (&self.field, self.dim);
        let d = |k: usize, i: usize, j: usize| self.delta.at(i * n + j, k);
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if d(k, a, b) != d(k, b, a) {
                        return Err(format!("not cocommutative at e{k}"));
                    }
                    for c in 0..n {
                        let l = (0..n).fold(0, |acc, m| f.add(acc, f.mul(d(k, m, c), d(m, a, b))));
                        let r = (0..n).fold(0, |acc, m| f.add(acc, f.mul(d(k, a, m), d(m, b, c))));
                        if l != r {
                            return Err(format!("not coassociative at e{k}"));
                        }
                    }
                }
                let left = (0..n).fold(0, |acc, i| f.add(acc, f.mul(self.counit[i], d(k, i, a))));
                if left != (k == a) as usize {
                    return Err(format!("counit law fails at e{k}"));
                }
            }
        }
        for (h, a) in self.action.iter().enumerate() {
            if (Mat { rows: 1, cols: n, data: self.counit.clone() }).mul(f, a).data != self.counit {
                return Err(format!("element {h} does not preserve the counit"));
            }
            let mut aa = Mat::zero(n * n, n * n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            aa.data[(i * n + j) * n * n + k * n + l] = f.mul(a.at(i, k), a.at(j, l));
                        }
                    }
                }
            }
            if self.delta.mul(f, a) != aa.mul(f, &self.delta) {
                return Err(format!("element {h} does not act by a coalgebra map"));
            }
        }
        Ok(())
    }

    /// The dual algebra with the transposed action.
    pub fn dual(&self, group: &FinGroup) -> Result<GAlgebra> {
        let n = self.dim;
        let consts = (0..n * n).map(|ij| (0..n).map(|k| self.delta.at(ij, k)).collect()).collect();
        let algebra = FqAlgebra::new(self.field.clone(), n, consts, self.counit.clone())?;
        let action = (0..group.order()).map(|h| self.action[group.inv(h)].transpose()).collect();
        Ok(GAlgebra { algebra, group: group.clone(), action })
    }
}

/// Evidence for the two torsor axioms of a coalgebra with group action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorVerdict {
    pub coalgebra: std::result::Result<(), String>,
    /// Shape and rank of the matrix of `c ⊗ g ↦ c₍₁₎ ⊗ c₍₂₎·g`.
    pub galois_shape: (usize, usize),
    pub galois_rank: usize,
    pub counit_invariant: bool,
    pub coinvariant_dim: usize,
}

impl TorsorVerdict {
    pub fn galois_full_rank(&self) -> bool {
        self.galois_shape.0 == self.galois_shape.1 && self.galois_rank == self.galois_shape.0
    }

    pub fn counit_is_quotient(&self) -> bool {
        self.counit_invariant && self.coinvariant_dim == 1
    }

    pub fn torsor(&self) -> bool {
        self.coalgebra.is_ok() && self.galois_full_rank() && self.counit_is_quotient()
    }
}

/// Dualizes `r` and tests both torsor axioms by rank computations.
pub fn dual_torsor_coalgebra(r: &GAlgebra) -> (FqCoalgebra, TorsorVerdict) {
    let c = r.dual();
    let (f, n, g) = (&c.field, c.dim, r.group.order());
    let mut galois = Mat::zero(n * n, n * g);
    for k in 0..n {
        for h in 0..g {
            for i in 0..n {
                for j in 0..n {
                    let v =
                        (0..n).fold(0, |acc, jj| f.add(acc, f.mul(c.delta.at(i * n + jj, k), c.action[h].at(j, jj))));
                    galois.data[(i * n + j) * (n * g) + k * g + h] = v;
                }
            }
        }
    }
    let counit_row = Mat { rows: 1, cols: n, data: c.counit.clone() };
    let counit_invariant =
        c.counit.iter().any(|&x| x != 0) && c.action.iter().all(|a| counit_row.mul(f, a).data == c.counit);
    let moved: Vec<Vec<usize>> = c
        .action
        .iter()
        .flat_map(|a| (0..n).map(move |k| (0..n).map(|i| f.sub(a.at(i, k), (i == k) as usize)).collect()))
        .collect();
    let coinvariant_dim = n - Mat::from_columns(n, &moved).rank(f);
    let verdict = TorsorVerdict {
        coalgebra: c.check(),
        galois_shape: (galois.rows, galois.cols),
        galois_rank: galois.rank(f),
        counit_invariant,
        coinvariant_dim,
    };
    (c, verdict)
}

/// The algebra of maps `u: Γ → F_{q^n}` with `u(g·γ) = u(γ)^q`, `n` the order of `g`,
/// with `Γ` acting by `(u·h)(γ) = u(γ·h⁻¹)`.
#[derive(Clone, Debug)]
pub struct GaloisAlgebra {
    pub rep: GAlgebra,
    pub element: usize,
    pub order: usize,
    /// Representatives `γᵢ` of the cosets `⟨g⟩γ`; basis vector `i·n + k` is `αᵏ` at `γᵢ`.
    pub cosets: Vec<usize>,
}

pub fn galois_algebra(gamma: &FinGroup, g: usize, field: &Fq) -> Result<GaloisAlgebra> {
    let n = gamma.element_order(g);
    let k = FqAlgebra::extension(field, n)?;
    let fr = k.frobenius_matrix();
    let mut frob_pows = vec![Mat::identity(n)];
    for a in 1..n {
        frob_pows.push(fr.mul(field, &frob_pows[a - 1]));
    }
    // γ = g^a · γ_i
    let mut coset_of = vec![None; gamma.order()];
    let mut cosets = Vec::new();
    for c in 0..gamma.order() {
        if coset_of[c].is_some() {
            continue;
        }
        let i = cosets.len();
        cosets.push(c);
        let mut x = c;
        for a in 0..n {
            coset_of[x] = Some((i, a));
            x = gamma.mul(g, x);
        }
    }
    let m = cosets.len();
    let mut r = k.clone();
    for _ in 1..m {
        r = r.product(&k)?;
    }
    let dim = m * n;
    let action = (0..gamma.order())
        .map(|h| {
            let hinv = gamma.inv(h);
            let mut a = Mat::zero(dim, dim);
            for (i, &ci) in cosets.iter().enumerate() {
                let (j, pw) = coset_of[gamma.mul(ci, hinv)].expect("cosets cover the group");
                for s in 0..n {
                    for t in 0..n {
                        a.data[(i * n + s) * dim + j * n + t] = frob_pows[pw].at(s, t);
                    }
                }
            }
            a
        })
        .collect();
    let rep = GAlgebra { algebra: r, group: gamma.clone(), action };
    rep.check()?;
    Ok(GaloisAlgebra { rep, element: g, order: n, cosets })
}

fn enumerate_affine(f: &Fq, x: &[usize], kernel: &[Vec<usize>], budget: u64) -> Result<Vec<Vec<usize>>> {
    let q = f.order() as u64;
    let total = q
        .checked_pow(kernel.len() as u32)
        .filter(|&t| t <= budget)
        .ok_or(Error::BudgetExceeded { what: "affine solution space", limit: budget })?;
    Ok((0..total)
        .map(|mut code| {
            let mut v = x.to_vec();
            for b in kernel {
                let c = (code % q) as usize;
                code /= q;
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = f.add(*vi, f.mul(c, bi));
                }
            }
            v
        })
        .collect())
}

/// Linear equations `M·A_h = B_h·M` on the `n×m` unknown entries of `M` (row-major).
fn equivariance_rows(f: &Fq, dom: &[Mat], cod: &[Mat], rows: &mut Vec<Vec<usize>>) {
    for (a, b) in dom.iter().zip(cod) {
        let (n, m) = (b.rows, a.rows);
        for r in 0..n {
            for c in 0..m {
                let mut eq = vec![0; n * m];
                for k in 0..m {
                    eq[r * m + k] = f.add(eq[r * m + k], a.at(k, c));
                }
                for k in 0..n {
                    eq[k * m + c] = f.sub(eq[k * m + c], b.at(r, k));
                }
                rows.push(eq);
            }
        }
    }
}

fn to_matrix(n: usize, m: usize, v: Vec<usize>) -> Mat {
    Mat { rows: n, cols: m, data: v }
}

/// All linear maps commuting with the actions, then filtered to algebra isomorphisms.
/// Exhaustive over the equivariant solution space; used as an oracle.
pub fn equivariant_isomorphisms_exhaustive(x: &GAlgebra, y: &GAlgebra, budget: u64) -> Result<Vec<Mat>> {
    let (f, n) = (x.algebra.field(), x.algebra.dim());
    if y.algebra.dim() != n {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    equivariance_rows(f, &x.action, &y.action, &mut rows);
    let sys = Mat { rows: rows.len(), cols: n * n, data: rows.concat() };
    let kernel = sys.kernel(f);
    let all = enumerate_affine(f, &vec![0; n * n], &kernel, budget)?;
    Ok(all
        .into_iter()
        .map(|v| to_matrix(n, n, v))
        .filter(|m| m.rank(f) == n && is_algebra_map(&x.algebra, &y.algebra, m))
        .collect())
}

/// Equivariant algebra isomorphisms between two Galois algebras. An isomorphism sends the
/// idempotent at `γ₀` to some primitive idempotent `e'ⱼ` and the generator `α` there to a
/// root of its minimal polynomial in `e'ⱼR' ≅ F_{q^n}`, i.e. a Frobenius conjugate of `α'ⱼ`;
/// each such choice fixes `M` on the first component, and equivariance fixes the rest.
pub fn galois_isomorphisms(x: &GaloisAlgebra, y: &GaloisAlgebra, budget: u64) -> Result<Vec<Mat>> {
    let (rx, ry) = (&x.rep.algebra, &y.rep.algebra);
    let (f, dim, n) = (rx.field(), rx.dim(), x.order);
    if y.order != n || ry.dim() != dim {
        return Ok(Vec::new());
    }
    let mut base = Vec::new();
    equivariance_rows(f, &x.rep.action, &y.rep.action, &mut base);
    let mut found: Vec<Mat> = Vec::new();
    for j in 0..y.cosets.len() {
        let ej = ry.basis(j * n);
        let alpha = if n > 1 { ry.basis(j * n + 1) } else { ej.clone() };
        for k in 0..n {
            let beta = ry.pow(&alpha, (f.order() as u64).pow(k as u32));
            let mut rows = base.clone();
            let mut rhs = vec![0; rows.len()];
            let mut img = ej.clone();
            for t in 0..n {
                // M·b_t = β^t (β⁰ = e'ⱼ)
                for r in 0..dim {
                    let mut eq = vec![0; dim * dim];
                    eq[r * dim + t] = 1;
                    rows.push(eq);
                    rhs.push(img[r]);
                }
                img = ry.mul(&img, &beta);
            }
            let sys = Mat { rows: rows.len(), cols: dim * dim, data: rows.concat() };
            if let Some((sol, kernel)) = sys.solve(f, &rhs) {
                for v in enumerate_affine(f, &sol, &kernel, budget)? {
                    let m = to_matrix(dim, dim, v);
                    if m.rank(f) == dim && is_algebra_map(rx, ry, &m) && !found.contains(&m) {
                        found.push(m);
                    }
                }
            }
        }
    }
    Ok(found)
}

/// Galois algebras for one element per conjugacy class with their isomorphism groupoid.
#[derive(Clone, Debug)]
pub struct TorsorClassification {
    pub classes: Vec<GaloisAlgebra>,
    pub verdicts: Vec<TorsorVerdict>,
    pub groupoid: FinGroupoid,
    pub automorphism_orders: Vec<usize>,
    /// Whether the groupoid is equivalent to the inertia groupoid `Γ//Γ`.
    pub inertia_equivalent: bool,
}

pub fn classify_torsors(gamma: &FinGroup, field: &Fq, budget: u64) -> Result<TorsorClassification> {
    let reps: Vec<usize> = gamma.conjugacy_classes().iter().map(|c| *c.iter().min().unwrap()).collect();
    let classes = reps.iter().map(|&g| galois_algebra(gamma, g, field)).collect::<Result<Vec<_>>>()?;
    let verdicts = classes.iter().map(|c| dual_torsor_coalgebra(&c.rep).1).collect();
    let mut arrows: Vec<(usize, usize, Mat)> = Vec::new();
    for (s, x) in classes.iter().enumerate() {
        for (t, y) in classes.iter().enumerate() {
            for m in galois_isomorphisms(x, y, budget)? {
                arrows.push((s, t, m));
            }
        }
    }
    let index: HashMap<(usize, usize, &Mat), usize> =
        arrows.iter().enumerate().map(|(i, (s, t, m))| ((*s, *t, m), i)).collect();
    let dim = gamma.order();
    let mut ids = Vec::new();
    for s in 0..classes.len() {
        let id = Mat::identity(dim);
        ids.push(
            *index
                .get(&(s, s, &id))
                .ok_or_else(|| Error::Precondition("internal: identity is not an isomorphism".into()))?,
        );
    }
    let mut table = HashMap::new();
    for (b, (t2, u, mb)) in arrows.iter().enumerate() {
        for (a, (s, t, ma)) in arrows.iter().enumerate() {
            if t2 == t {
                let prod = mb.mul(field, ma);
                let c = *index
                    .get(&(*s, *u, &prod))
                    .ok_or_else(|| Error::Precondition("internal: isomorphisms not closed".into()))?;
                table.insert((b, a), c);
            }
        }
    }
    let names = classes.iter().map(|c| format!("R[{}]", gamma.name(c.element))).collect();
    let arr = arrows.iter().enumerate().map(|(i, (s, t, _))| (format!("φ{i}"), *s, *t)).collect();
    let cat = FinCategory::from_fn_unchecked(names, arr, ids, |b, a| table[&(b, a)]);
    let violations = cat.violations();
    if !violations.is_empty() {
        return Err(Error::Axioms(violations));
    }
    let groupoid = cat.into_groupoid()?;
    let automorphism_orders = (0..classes.len()).map(|o| groupoid.hom(o, o).len()).collect();
    let inertia_equivalent = equivalence_check(&groupoid, &FinCategory::inertia(gamma), budget)?.is_some();
    Ok(TorsorClassification { classes, verdicts, groupoid, automorphism_orders, inertia_equivalent })
}

#[cfg(test)]
mod tests;
