use crate::error::{Error, Result};

/// Largest field order served from lookup tables.
pub const MAX_TABLE_ORDER: usize = 1 << 10;

/// The finite field `F_{p^d}`, elements encoded as base-`p` coefficient vectors
/// (`Σ cᵢ pⁱ`) modulo an irreducible monic polynomial.
#[derive(Clone, Debug)]
pub struct Fq {
    p: usize,
    d: usize,
    modulus: Vec<usize>,
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    inv: Vec<usize>,
}

impl PartialEq for Fq {
    fn eq(&self, o: &Fq) -> bool {
        self.p == o.p && self.modulus == o.modulus
    }
}

impl Eq for Fq {}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// `(p, d)` with `q = p^d`, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    let p = (2..=q).find(|k| q % k == 0)?;
    let (mut r, mut d) = (q, 0);
    while r % p == 0 {
        r /= p;
        d += 1;
    }
    (r == 1).then_some((p, d))
}

impl Fq {
    /// `F_q` with the lexicographically least irreducible monic modulus of degree `d`.
    pub fn of_order(q: usize) -> Result<Fq> {
        let (p, d) = prime_power(q).ok_or_else(|| Error::Precondition(format!("{q} is not a prime power")))?;
        let prime = Fq::with_modulus(p, vec![0, 1])?;
        let modulus = prime.first_irreducible(d).expect("irreducibles exist in every degree");
        Fq::with_modulus(p, modulus)
    }

    /// `F_p[x]/(modulus)`; the modulus must be monic and irreducible.
    pub fn with_modulus(p: usize, modulus: Vec<usize>) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Precondition("modulus must be monic with coefficients below p".into()));
        }
        let d = modulus.len() - 1;
        let q = p
            .checked_pow(d as u32)
            .filter(|&q| q <= MAX_TABLE_ORDER)
            .ok_or(Error::BudgetExceeded { what: "field order", limit: MAX_TABLE_ORDER as u64 })?;
        let digits = |a: usize| -> Vec<usize> {
            (0..d)
                .scan(a, |r, _| {
                    let c = *r % p;
                    *r /= p;
                    Some(c)
                })
                .collect()
        };
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = (0..d).map(|i| (da[i] + db[i]) % p).collect();
                add[a * q + b] = encode(&s);
                let mut prod = vec![0; 2 * d];
                for i in 0..d {
                    for j in 0..d {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for k in (d..2 * d).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, &m) in modulus.iter().enumerate() {
                            prod[k - d + i] = (prod[k - d + i] + p * p - c * m) % p;
                        }
                    }
                }
                mul[a * q + b] = encode(&prod[..d]);
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap()).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            match (1..q).find(|&b| mul[a * q + b] == 1) {
                Some(b) => inv[a] = b,
                None => return Err(Error::Precondition(format!("modulus {modulus:?} is reducible"))),
            }
        }
        let f = Fq { p, d, modulus, q, add, mul, neg, inv };
        f.spot_check()?;
        Ok(f)
    }

    fn spot_check(&self) -> Result<()> {
        let q = self.q;
        let step = (q / 17).max(1);
        for a in (0..q).step_by(step) {
            for b in (0..q).step_by(step) {
                for c in (0..q).step_by(step) {
                    let l = self.mul(a, self.add(b, c));
                    let r = self.add(self.mul(a, b), self.mul(a, c));
                    let assoc = self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
                    if l != r || !assoc || self.mul(a, b) != self.mul(b, a) {
                        return Err(Error::Precondition(format!("field axioms fail at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.d
    }
    pub fn order(&self) -> usize {
        self.q
    }
    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }
    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }
    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    // polynomials over the field, coefficients low to high, trimmed

    fn trim(mut a: Vec<usize>) -> Vec<usize> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn poly_mul(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = self.add(r[i + j], self.mul(x, y));
            }
        }
        Fq::trim(r)
    }

    pub fn poly_rem(&self, a: &[usize], m: &[usize]) -> Vec<usize> {
        let mut r = Fq::trim(a.to_vec());
        let dm = m.len() - 1;
        let lead = self.inv(m[dm]);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = self.mul(r[k], lead);
            for (i, &mi) in m.iter().enumerate() {
                r[k - dm + i] = self.sub(r[k - dm + i], self.mul(c, mi));
            }
            r = Fq::trim(r);
        }
        r
    }

    fn poly_sub(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let n = a.len().max(b.len());
        let r = (0..n).map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect();
        Fq::trim(r)
    }

    fn poly_gcd(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let (mut a, mut b) = (Fq::trim(a.to_vec()), Fq::trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn poly_powmod(&self, a: &[usize], mut e: u64, m: &[usize]) -> Vec<usize> {
        let mut base = self.poly_rem(a, m);
        let mut acc = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_rem(&self.poly_mul(&acc, &base), m);
            }
            base = self.poly_rem(&self.poly_mul(&base, &base), m);
            e >>= 1;
        }
        acc
    }

    /// `x^(q^k) mod f`, by `k` successive `q`-th powers.
    fn frobenius_x(&self, k: usize, f: &[usize]) -> Vec<usize> {
        (0..k).fold(self.poly_rem(&[0, 1], f), |acc, _| self.poly_powmod(&acc, self.q as u64, f))
    }

    /// Rabin's irreducibility test for a monic polynomial over this field.
    pub fn is_irreducible(&self, f: &[usize]) -> bool {
        let n = f.len().saturating_sub(1);
        if n == 0 || f[n] != 1 {
            return false;
        }
        if n == 1 {
            return true;
        }
        if self.poly_sub(&self.frobenius_x(n, f), &[0, 1]).iter().any(|&c| c != 0) {
            return false;
        }
        let primes = (2..=n).filter(|&r| n % r == 0 && is_prime(r));
        for r in primes {
            let h = self.poly_sub(&self.frobenius_x(n / r, f), &[0, 1]);
            if self.poly_gcd(f, &h).len() != 1 {
                return false;
            }
        }
        true
    }

    /// Least monic irreducible of degree `n` in the order of base-`q` encodings of
    /// the lower coefficients.
    pub fn first_irreducible(&self, n: usize) -> Option<Vec<usize>> {
        let count = (self.q as u64).checked_pow(n as u32)?;
        (0..count).find_map(|code| {
            let mut f: Vec<usize> = (0..n)
                .scan(code, |r, _| {
                    let c = (*r % self.q as u64) as usize;
                    *r /= self.q as u64;
                    Some(c)
                })
                .collect();
            f.push(1);
            self.is_irreducible(&f).then_some(f)
        })
    }
}

/// Dense matrices over `F_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<usize>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<usize>]) -> Mat {
        let mut m = Mat::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i];
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.at(i, j);
            }
        }
        t
    }

    pub fn mul(&self, f: &Fq, o: &Mat) -> Mat {
        let mut r = Mat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    r.data[idx] = f.add(r.data[idx], f.mul(a, o.at(k, j)));
                }
            }
        }
        r
    }

    pub fn apply(&self, f: &Fq, v: &[usize]) -> Vec<usize> {
        (0..self.rows).map(|i| (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.at(i, j), v[j])))).collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &Fq) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| self.at(i, c) != 0) else { continue };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let s = f.inv(self.at(r, c));
            for j in 0..self.cols {
                self.data[r * self.cols + j] = f.mul(s, self.at(r, j));
            }
            for i in 0..self.rows {
                let k = self.at(i, c);
                if i != r && k != 0 {
                    for j in 0..self.cols {
                        let v = f.sub(self.at(i, j), f.mul(k, self.at(r, j)));
                        self.data[i * self.cols + j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self, f: &Fq) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{v : self·v = 0}`.
    pub fn kernel(&self, f: &Fq) -> Vec<Vec<usize>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.at(r, fc));
                }
                v
            })
            .collect()
    }

    /// Solutions of `self·v = b`: a particular solution and a kernel basis, or `None`.
    pub fn solve(&self, f: &Fq, b: &[usize]) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.at(i, j);
            }
            aug.data[i * (self.cols + 1) + self.cols] = b[i];
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols);
        }
        Some((x, self.kernel(f)))
    }
}
