//! Exact scalar fields.
//!
//! Every algorithm in this crate is generic over a [`Field`] context. The
//! context owns the arithmetic, so a prime field can carry a modulus chosen at
//! runtime while the rationals stay a zero-sized tag. Elements are plain data
//! (`BigRational` or a reduced `u64`) and never carry their field around.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::FieldError;
use crate::modp;

/// 2^62 - 57, the default prime for modular work.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

/// 2^31 - 1, the default prime for Monte-Carlo surveys.
pub const SURVEY_PRIME: u64 = 2_147_483_647;

/// Integers sampled for random rational elements lie in `[-BOUND, BOUND]`.
pub const RATIONAL_SAMPLE_BOUND: i64 = 1000;

/// Which field a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldTag::Rational);
        }
        let p = s
            .strip_prefix("Fp:")
            .ok_or_else(|| FieldError::BadTag(s.to_string()))?
            .parse::<u64>()
            .map_err(|_| FieldError::BadTag(s.to_string()))?;
        PrimeField::new(p)?;
        Ok(FieldTag::Prime(p))
    }
}

/// Arithmetic context for an exact field.
///
/// The linear-algebra hooks (`rank_of`, `rref`) have generic Gauss-Jordan
/// defaults; the rationals override them with fraction-free elimination.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn tag(&self) -> FieldTag;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// A pseudo-random element drawn from `rng`.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Render as `"p/q"` (or `"p"` for integers).
    fn format(&self, a: &Self::Elem) -> String;

    /// Distinct roots in this field of the univariate polynomial with
    /// coefficients `coeffs` (constant term first), sorted canonically.
    ///
    /// Over the rationals only roots recoverable by rational reconstruction
    /// modulo [`DEFAULT_PRIME`] are found; callers compare the count against
    /// the degree to detect irrational roots.
    fn roots(&self, coeffs: &[Self::Elem]) -> Vec<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Parse `"p/q"`, `"p"` or `"-p/q"`.
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError> {
        let q = parse_ratio(s)?;
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
            .ok_or_else(|| FieldError::DenominatorVanishes(s.to_string(), self.tag()))
    }

    /// Whether integer constants up to `2 * degree` stay nonzero.
    fn admits_degree(&self, degree: usize) -> bool {
        let p = self.characteristic();
        p == 0 || p > 2 * degree as u64
    }

    /// Rescale a projective vector to its canonical representative: first
    /// nonzero entry equal to one.
    fn normalize_projective(&self, v: &mut [Self::Elem]) {
        if let Some(lead) = v.iter().find(|x| !self.is_zero(x)).cloned() {
            let li = self.inv(&lead).expect("nonzero");
            for x in v.iter_mut() {
                *x = self.mul(x, &li);
            }
        }
    }

    /// Rank of the matrix whose rows are `rows` (each of length `ncols`).
    fn rank_of(&self, mut rows: Vec<Vec<Self::Elem>>, ncols: usize) -> usize {
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&r| !self.is_zero(&rows[r][col])) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(&rows[rank][col]).expect("pivot is nonzero");
            for r in rank + 1..rows.len() {
                if self.is_zero(&rows[r][col]) {
                    continue;
                }
                let factor = self.mul(&rows[r][col], &inv);
                for c in col..ncols {
                    let t = self.mul(&factor, &rows[rank][c]);
                    rows[r][c] = self.sub(&rows[r][c], &t);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form. Returns the nonzero rows (pivots equal to
    /// one, zeros above and below) and the pivot columns.
    fn rref(&self, mut rows: Vec<Vec<Self::Elem>>, ncols: usize) -> (Vec<Vec<Self::Elem>>, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..rows.len()).find(|&r| !self.is_zero(&rows[r][col])) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(&rows[rank][col]).expect("pivot is nonzero");
            for c in col..ncols {
                rows[rank][c] = self.mul(&rows[rank][c], &inv);
            }
            for r in 0..rows.len() {
                if r == rank || self.is_zero(&rows[r][col]) {
                    continue;
                }
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let t = self.mul(&factor, &rows[rank][c]);
                    rows[r][c] = self.sub(&rows[r][c], &t);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        (rows, pivots)
    }
}

fn parse_ratio(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::BadNumber(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> FieldTag {
        FieldTag::Rational
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn roots(&self, coeffs: &[BigRational]) -> Vec<BigRational> {
        rational_roots(coeffs)
    }

    /// Clear denominators and divide out the content, leaving a primitive
    /// integer vector whose first nonzero entry is positive.
    fn normalize_projective(&self, v: &mut [BigRational]) {
        let Some(lead) = v.iter().find(|x| !x.is_zero()) else {
            return;
        };
        let negate = lead.is_negative();
        let ints = integer_row(v);
        let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        for (x, i) in v.iter_mut().zip(ints) {
            let mut q = i / &content;
            if negate {
                q = -q;
            }
            *x = BigRational::from_integer(q);
        }
    }

    fn rank_of(&self, rows: Vec<Vec<BigRational>>, ncols: usize) -> usize {
        let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
        bareiss_forward(&mut m, ncols)
    }

    fn rref(&self, rows: Vec<Vec<BigRational>>, ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
        let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
        let pivots = fraction_free_gauss_jordan(&mut m, ncols);
        let rank = pivots.len();
        let out = m
            .into_iter()
            .take(rank)
            .zip(&pivots)
            .map(|(row, &pc)| {
                let d = row[pc].clone();
                row.into_iter().map(|x| BigRational::new(x, d.clone())).collect()
            })
            .collect();
        (out, pivots)
    }
}

/// Scale a rational row by the lcm of its denominators.
fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Fraction-free forward elimination; returns the rank.
fn bareiss_forward(m: &mut [Vec<BigInt>], ncols: usize) -> usize {
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        let p = &prow[col];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for c in col + 1..ncols {
                let v = p * &row[c] - &lead * &prow[c];
                row[c] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Fraction-free Gauss-Jordan elimination. On return the first `rank` rows
/// are reduced with every pivot equal to the same integer `d`, so dividing
/// by `d` yields the reduced row echelon form. Returns pivot columns.
fn fraction_free_gauss_jordan(m: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let prow = m[rank].clone();
        let p = &prow[col];
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let lead = row[col].clone();
            for c in 0..ncols {
                if c == col {
                    continue;
                }
                let v = p * &row[c] - &lead * &prow[c];
                debug_assert!((&v % &prev).is_zero(), "inexact fraction-free step");
                row[c] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        // Earlier pivots were rescaled to p by the update above.
        for (r, &pc) in pivots.iter().enumerate() {
            debug_assert_eq!(&m[r][pc], p);
        }
        prev = p.clone();
        pivots.push(col);
        rank += 1;
    }
    pivots
}

fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let Some(deg) = coeffs.iter().rposition(|c| !c.is_zero()) else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let ints = integer_row(&coeffs[..=deg]);
    let p = DEFAULT_PRIME;
    let lead = modp::reduce_bigint(&ints[deg], p);
    if lead == 0 {
        return Vec::new();
    }
    let residues: Vec<u64> = ints.iter().map(|c| modp::reduce_bigint(c, p)).collect();
    let mut found: Vec<BigRational> = modp::roots(&residues, p)
        .into_iter()
        .filter_map(|r| modp::rational_reconstruct(r, p))
        .filter(|q| eval_rational(&ints, q).is_zero())
        .collect();
    found.sort();
    found.dedup();
    found
}

fn eval_rational(ints: &[BigInt], x: &BigRational) -> BigRational {
    ints.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

/// A prime field `F_p` with `2 < p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p >= 1 << 63 || !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> FieldTag {
        FieldTag::Prime(self.p)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    fn from_bigint(&self, v: &BigInt) -> u64 {
        modp::reduce_bigint(v, self.p)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        modp::add(*a, *b, self.p)
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        modp::sub(*a, *b, self.p)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        modp::mul(*a, *b, self.p)
    }

    fn neg(&self, a: &u64) -> u64 {
        modp::sub(0, *a, self.p)
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| modp::inv(*a, self.p))
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn roots(&self, coeffs: &[u64]) -> Vec<u64> {
        modp::roots(coeffs, self.p)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = modp::pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = modp::mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Convert a rational element to `i64` if it is a small integer.
pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    q.is_integer().then(|| q.numer().to_i64()).flatten()
}
