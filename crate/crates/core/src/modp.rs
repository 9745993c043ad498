//! Word-sized modular arithmetic and univariate root finding over `F_p`.
//!
//! Polynomials here are `Vec<u64>` with the constant term first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow(a, p - 2, p)
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = (v % BigInt::from(p)).to_i128().expect("residue fits");
    r.rem_euclid(p as i128) as u64
}

/// Recover `a/b` from `r = a * b^-1 mod p` when `|a|, |b| <= sqrt(p/2)`.
pub(crate) fn rational_reconstruct(r: u64, p: u64) -> Option<BigRational> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, r as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn make_monic(a: &mut Vec<u64>, p: u64) {
    trim(a);
    if let Some(&lead) = a.last() {
        let li = inv(lead, p);
        for c in a.iter_mut() {
            *c = mul(*c, li, p);
        }
    }
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let li = inv(b[db], p);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = mul(r[dr], li, p);
        let shift = dr - db;
        for (i, &bc) in b[..=db].iter().enumerate() {
            r[shift + i] = sub(r[shift + i], mul(f, bc, p), p);
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], mul(x, y, p), p);
        }
    }
    rem(&out, m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
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

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

/// Distinct roots of `f` in `F_p`, sorted ascending.
pub(crate) fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let mut f: Vec<u64> = f.iter().map(|&c| c % p).collect();
    make_monic(&mut f, p);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    // g = gcd(f, x^p - x) is the product of the distinct linear factors.
    let xp = pow_mod(&[0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(xp_minus_x.len().max(2), 0);
    xp_minus_x[1] = sub(xp_minus_x[1], 1, p);
    let g = gcd(&f, &xp_minus_x, p);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_7007);
    split_linear(g, p, &mut rng, &mut out);
    out.sort_unstable();
    out
}

fn split_linear(g: Vec<u64>, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(sub(0, mul(g[0], inv(g[1], p), p), p)),
        Some(d) => {
            loop {
                let a = rng.gen_range(0..p);
                let mut w = pow_mod(&[a, 1], (p - 1) / 2, &g, p);
                if w.is_empty() {
                    w.push(0);
                }
                w[0] = sub(w[0], 1, p);
                let h = gcd(&g, &w, p);
                let dh = degree(&h).unwrap_or(0);
                if dh > 0 && dh < d {
                    let other = quotient(&g, &h, p);
                    split_linear(h, p, rng, out);
                    split_linear(other, p, rng, out);
                    return;
                }
            }
        }
    }
}

fn quotient(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return Vec::new();
    };
    if da < db {
        return Vec::new();
    }
    let mut q = vec![0u64; da - db + 1];
    let li = inv(b[db], p);
    for k in (0..=da - db).rev() {
        let f = mul(r[k + db], li, p);
        q[k] = f;
        for (i, &bc) in b[..=db].iter().enumerate() {
            r[k + i] = sub(r[k + i], mul(f, bc, p), p);
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_split_polynomial() {
        let p = 1_000_003;
        // (x - 2)(x - 5)(x + 7)
        let rs = [2u64, 5, p - 7];
        let mut f = vec![1u64];
        for &r in &rs {
            let mut next = vec![0u64; f.len() + 1];
            for (i, &c) in f.iter().enumerate() {
                next[i + 1] = add(next[i + 1], c, p);
                next[i] = sub(next[i], mul(c, r, p), p);
            }
            f = next;
        }
        // times an irreducible quadratic x^2 + 1 (p = 3 mod 4)
        let mut g = vec![0u64; f.len() + 2];
        for (i, &c) in f.iter().enumerate() {
            g[i] = add(g[i], c, p);
            g[i + 2] = add(g[i + 2], c, p);
        }
        let mut expect = rs.to_vec();
        expect.sort_unstable();
        assert_eq!(roots(&g, p), expect);
    }

    #[test]
    fn zero_root_and_repeated_roots() {
        let p = 101;
        // x^2 (x - 3)^2
        let f = vec![0, 0, 9, p - 6, 1];
        assert_eq!(roots(&f, p), vec![0, 3]);
    }

    #[test]
    fn reconstruction() {
        let p = crate::field::DEFAULT_PRIME;
        let r = mul(p - 3, inv(7, p), p);
        assert_eq!(
            rational_reconstruct(r, p).unwrap(),
            BigRational::new((-3).into(), 7.into())
        );
    }
}
