//! Finite fields `F_{p^m}` with log/exp tables.
//!
//! Elements are `u32` values in the canonical base-`p` digit encoding: the
//! residue `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` modulo the defining
//! polynomial is stored as `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The
//! defining polynomial is the lexicographically first monic irreducible of
//! degree `m`, comparing coefficient tuples `(c_0, c_1, ..., c_{m-1})`.

use std::fmt;

use crate::error::{require, Error, Result};

/// Largest field order the tables are built for.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Above this order additions go digit by digit instead of through a table.
const ADD_TABLE_LIMIT: u32 = 1024;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Splits `q = p^m`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|f| q.is_multiple_of(*f))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// Dense polynomials over F_p, coefficients low to high, no trailing zeros.
mod fp_poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        // p is prime and small
        (1..p).find(|x| a * x % p == 1).expect("nonzero residue is invertible")
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        while a.len() > db {
            let da = a.len() - 1;
            let c = a[da] * lead_inv % p;
            for (i, &bc) in b.iter().enumerate() {
                let idx = da - db + i;
                a[idx] = (a[idx] + p * p - c * bc % p) % p;
            }
            a = trim(a);
        }
        a
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    /// Ben-Or: `f` of degree `m` is irreducible iff `gcd(x^{p^i} - x, f) = 1` for `i <= m / 2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 0..m / 2 {
            xp = pow_mod(&xp, p, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Lexicographically first monic irreducible of degree `m` over `F_p`,
/// returned low to high including the leading 1.
pub fn first_irreducible(p: u64, m: u32) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    require(m >= 1, || format!("extension degree m = {m} must satisfy m >= 1"))?;
    let total = (p as u128).pow(m);
    for n in 0..total {
        // c_0 is the most significant digit of n
        let mut coeffs = vec![0u64; m as usize + 1];
        let mut rest = n;
        for i in (0..m as usize).rev() {
            coeffs[i] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        coeffs[m as usize] = 1;
        if m > 1 && coeffs[0] == 0 {
            continue;
        }
        if fp_poly::is_irreducible(&coeffs, p) {
            return Ok(coeffs);
        }
    }
    Err(Error::NoIrreducible { p, m })
}

/// `F_{p^m}` with exact table-driven arithmetic.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp has length 2(q - 1) so that log a + log b never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    /// The field of order `p^m` with the deterministic modulus.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        require(m >= 1, || format!("extension degree m = {m} must satisfy m >= 1"))?;
        let q = (p as u128).pow(m);
        require(q <= MAX_FIELD_ORDER as u128, || {
            format!("field order {p}^{m} must satisfy q <= {MAX_FIELD_ORDER}")
        })?;
        let modulus = first_irreducible(p, m)?;
        Ok(Self::with_modulus(p as u32, m, &modulus))
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::Precondition(format!("q = {q} must be a prime power")))?;
        Self::new(p, m)
    }

    fn with_modulus(p: u32, m: u32, modulus: &[u64]) -> Self {
        let q = p.pow(m);
        let modulus: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
        let mut field = GaloisField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
        };
        field.build_tables();
        field
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| self.slow_order(g) == order)
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp[i as usize] = acc;
            exp[(i + order) as usize] = acc;
            log[acc as usize] = i;
            acc = self.slow_mul(acc, generator);
        }
        self.exp = exp;
        self.log = log;
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.digit_add(a, b);
                }
            }
            self.add_table = Some(table);
        }
    }

    fn digits(&self, mut a: u32) -> Vec<u64> {
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d as u64
            })
            .collect()
    }

    fn undigits(&self, digits: &[u64]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d as u32)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let modulus: Vec<u64> = self.modulus.iter().map(|&c| c as u64).collect();
        let prod = fp_poly::mul_mod(
            &fp_poly::trim(self.digits(a)),
            &fp_poly::trim(self.digits(b)),
            &modulus,
            self.p as u64,
        );
        self.undigits(&prod)
    }

    fn slow_order(&self, g: u32) -> u32 {
        let mut acc = g;
        let mut n = 1;
        while acc != 1 {
            acc = self.slow_mul(acc, g);
            n += 1;
        }
        n
    }

    fn digit_add(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `p^m`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, low to high, monic of degree `m`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.digit_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        // -1 = g^{(q-1)/2} for odd q
        self.mul(a, self.exp[((self.q - 1) / 2) as usize])
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| {
            let l = self.log[a as usize];
            self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
        })
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[l as usize]
    }

    /// Encoding of the prime-field element `n mod p`.
    pub fn from_int(&self, n: u64) -> u32 {
        (n % self.p as u64) as u32
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    /// True when `value` is a valid element encoding.
    pub fn contains(&self, value: u64) -> bool {
        value < self.q as u64
    }
}

/// Field homomorphism `F_{p^m} -> F_{p^n}` for `m | n`, sending the class of
/// `x` to the smallest-encoded root of the source modulus in the target.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    images: Vec<u32>,
}

impl FieldEmbedding {
    pub fn new(source: &GaloisField, target: &GaloisField) -> Result<Self> {
        require(source.p == target.p, || {
            format!("characteristics differ: {} vs {}", source.p, target.p)
        })?;
        require(target.m.is_multiple_of(source.m), || {
            format!("degree {} does not divide {}", source.m, target.m)
        })?;
        let root = target
            .elements()
            .find(|&x| {
                // evaluate the source modulus (prime-field coefficients) at x
                source
                    .modulus
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| target.add(target.mul(acc, x), target.from_int(c as u64)))
                    == 0
            })
            .ok_or_else(|| Error::Precondition("source modulus has no root in target".into()))?;
        let images = source
            .elements()
            .map(|a| {
                let digits = source.digits(a);
                digits
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| target.add(target.mul(acc, root), target.from_int(c)))
            })
            .collect();
        Ok(FieldEmbedding { images })
    }

    pub fn identity(field: &GaloisField) -> Self {
        FieldEmbedding { images: field.elements().collect() }
    }

    #[inline]
    pub fn apply(&self, a: u32) -> u32 {
        self.images[a as usize]
    }
}
