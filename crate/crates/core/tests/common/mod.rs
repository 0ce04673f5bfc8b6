//! Oracles shared by the integration tests. None of them calls into the
//! library's arithmetic.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Binomial table built by Pascal's rule.
pub fn pascal(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

fn exponent_vectors(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponent_vectors(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binary_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for i in rank + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] / &pivot;
            for j in c..cols {
                let t = &f * &rows[rank][j];
                rows[i][j] -= t;
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the degree-`d` part of the homogeneous coordinate ring of a
/// rational normal curve in `P^r`: the rank of restricting all degree-`d`
/// forms to the parametrization `x_i = prod_{j != i} (s - j t)`.
pub fn rational_normal_curve_hilbert(r: usize, d: u32) -> usize {
    // binary forms as coefficient vectors of s^{n-k} t^k
    let coords: Vec<Vec<BigInt>> = (0..=r)
        .map(|i| {
            (0..=r).filter(|&j| j != i).fold(vec![BigInt::one()], |acc, j| {
                binary_mul(&acc, &[BigInt::one(), BigInt::from(-(j as i64))])
            })
        })
        .collect();
    let rows: Vec<Vec<BigRational>> = exponent_vectors(r + 1, d)
        .into_iter()
        .map(|exps| {
            let mut acc = vec![BigInt::one()];
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    acc = binary_mul(&acc, &coords[i]);
                }
            }
            acc.into_iter().map(BigRational::from_integer).collect()
        })
        .collect();
    rank(rows)
}

/// Multiplication in `F_q` for `q` in {2, 3, 4}; `F_4 = F_2[w]/(w^2 + w + 1)`
/// with `w` encoded as 2.
pub fn small_field(q: u32) -> (impl Fn(u32, u32) -> u32, impl Fn(u32, u32) -> u32) {
    let add = move |a: u32, b: u32| if q == 4 { a ^ b } else { (a + b) % q };
    let mul = move |a: u32, b: u32| {
        if q != 4 {
            return a * b % q;
        }
        // carry-less product reduced by w^2 = w + 1
        let mut p = 0;
        for i in 0..2 {
            if b >> i & 1 == 1 {
                p ^= a << i;
            }
        }
        if p & 4 != 0 {
            p ^= 0b111;
        }
        p
    };
    (add, mul)
}

/// Pairs of linear forms in three variables over `F_q` whose 2 x 3
/// coefficient matrix has rank at most 1, by brute force over all pairs.
pub fn rank_le1_pairs(q: u32) -> u64 {
    let (add, mul) = small_field(q);
    let neg = |x: u32| if q == 4 { x } else { (q - x) % q };
    let mut count = 0;
    let total = q.pow(6);
    for t in 0..total {
        let mut v = [0u32; 6];
        let mut x = t;
        for c in v.iter_mut() {
            *c = x % q;
            x /= q;
        }
        let (a, b) = (&v[..3], &v[3..]);
        let minor = |i: usize, j: usize| add(mul(a[i], b[j]), neg(mul(a[j], b[i])));
        if minor(0, 1) == 0 && minor(0, 2) == 0 && minor(1, 2) == 0 {
            count += 1;
        }
    }
    count
}

/// Closed form of [`rank_le1_pairs`]: the zero matrix plus every nonzero row
/// space of dimension 1 times its nonzero 2 x 1 coefficient columns.
pub fn rank_le1_formula(q: u64) -> u64 {
    1 + (q * q - 1) * (q.pow(3) - 1) / (q - 1)
}

/// Pairs of ternary conics over prime `F_p` that share a nonconstant factor
/// (or contain a zero form). Two forms over `F_p` have a common factor over
/// the closure iff their gcd over `F_p` is nonconstant, so it suffices to
/// test divisibility by rational lines and proportionality.
pub fn conic_pairs_with_common_factor(p: u32) -> u64 {
    // conic coefficients on x^2, xy, xz, y^2, yz, z^2
    let conic_index = |c: &[u32; 6]| c.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize);
    let n = (p as usize).pow(6);
    let lines: Vec<[u32; 3]> = (0..p.pow(3))
        .map(|t| [t % p, t / p % p, t / (p * p)])
        .filter(|l| l.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    let mut divisors = vec![0u64; n];
    for (li, l) in lines.iter().enumerate() {
        for t in 0..p.pow(3) {
            let m = [t % p, t / p % p, t / (p * p)];
            let c = [
                l[0] * m[0] % p,
                (l[0] * m[1] + l[1] * m[0]) % p,
                (l[0] * m[2] + l[2] * m[0]) % p,
                l[1] * m[1] % p,
                (l[1] * m[2] + l[2] * m[1]) % p,
                l[2] * m[2] % p,
            ];
            divisors[conic_index(&c)] |= 1 << li;
        }
    }
    let decode = |i: usize| {
        let mut c = [0u32; 6];
        let mut x = i;
        for v in c.iter_mut() {
            *v = (x % p as usize) as u32;
            x /= p as usize;
        }
        c
    };
    let proportional = |f: usize, g: usize| {
        let (f, g) = (decode(f), decode(g));
        (1..p).any(|s| f.iter().zip(&g).all(|(&a, &b)| a == s * b % p))
    };
    let mut count = 0;
    for f in 0..n {
        for g in 0..n {
            if f == 0 || g == 0 || divisors[f] & divisors[g] != 0 || proportional(f, g) {
                count += 1;
            }
        }
    }
    count
}
