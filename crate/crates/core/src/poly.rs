//! Homogeneous polynomials in two variables `s, t`.
//!
//! A [`BinaryPoly`] of nominal degree `d` stores `d + 1` coefficients in the
//! monomial basis `s^(d-i) t^i`. The nominal degree is kept even when the
//! leading or trailing coefficients vanish, so roots at `[1:0]` and `[0:1]`
//! are ordinary factors `t` and `s`.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

/// A projective point `[s:t]` of the parameter line.
pub type ProjectivePoint<E> = (E, E);

impl<F: Field> BinaryPoly<F> {
    pub fn new(field: &F, coeffs: Vec<F::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &F, degree: usize) -> Self {
        Self::new(field, vec![field.zero(); degree + 1])
    }

    pub fn one(field: &F) -> Self {
        Self::new(field, vec![field.one()])
    }

    /// `c * s^(d-i) t^i`.
    pub fn monomial(field: &F, degree: usize, i: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, degree);
        p.coeffs[i] = c;
        p
    }

    /// The linear form `b s - a t` vanishing at `[a:b]`.
    pub fn vanishing_at(field: &F, a: &F::Elem, b: &F::Elem) -> Self {
        Self::new(field, vec![b.clone(), field.neg(a)])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "homogeneous sum needs equal degrees");
        let f = &self.field;
        Self::new(f, self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "homogeneous difference needs equal degrees");
        let f = &self.field;
        Self::new(f, self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.sub(a, b)).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    /// Partial derivative in `s`; degree drops by one (stays 0 for constants).
    pub fn d_ds(&self) -> Self {
        let f = &self.field;
        let d = self.degree();
        if d == 0 {
            return Self::zero(f, 0);
        }
        let coeffs = (0..d)
            .map(|i| f.mul(&f.from_i64((d - i) as i64), &self.coeffs[i]))
            .collect();
        Self::new(f, coeffs)
    }

    /// Partial derivative in `t`.
    pub fn d_dt(&self) -> Self {
        let f = &self.field;
        let d = self.degree();
        if d == 0 {
            return Self::zero(f, 0);
        }
        let coeffs = (0..d)
            .map(|i| f.mul(&f.from_i64((i + 1) as i64), &self.coeffs[i + 1]))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn eval(&self, s: &F::Elem, t: &F::Elem) -> F::Elem {
        let f = &self.field;
        let d = self.degree() as u32;
        self.coeffs.iter().enumerate().fold(f.zero(), |acc, (i, c)| {
            let term = f.mul(c, &f.mul(&f.pow(s, d - i as u32), &f.pow(t, i as u32)));
            f.add(&acc, &term)
        })
    }

    /// Scale so the first nonzero coefficient is one.
    pub fn normalized(&self) -> Self {
        let f = &self.field;
        let mut c = self.coeffs.clone();
        if let Some(lead) = c.iter().find(|x| !f.is_zero(x)).cloned() {
            let li = f.inv(&lead).expect("nonzero");
            for x in c.iter_mut() {
                *x = f.mul(x, &li);
            }
        }
        Self::new(f, c)
    }

    /// Power of `t` dividing the form (number of leading zero coefficients).
    fn t_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| self.field.is_zero(c)).count()
    }

    /// Power of `s` dividing the form.
    fn s_valuation(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| self.field.is_zero(c)).count()
    }

    /// Coefficients of the dehomogenization at `s = 1` after removing the
    /// `s`- and `t`-power content: nonzero constant and leading terms.
    fn core(&self) -> Vec<F::Elem> {
        let lo = self.t_valuation();
        let hi = self.coeffs.len() - self.s_valuation();
        self.coeffs[lo..hi].to_vec()
    }

    /// Distinct roots `[s:t]` in the field: `[1:0]` first, then the affine
    /// roots `[1:r]` in the field's canonical order, then `[0:1]`.
    pub fn roots(&self) -> Result<Vec<ProjectivePoint<F::Elem>>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let f = &self.field;
        let mut out = Vec::new();
        if self.t_valuation() > 0 {
            out.push((f.one(), f.zero()));
        }
        for r in f.roots(&self.core()) {
            out.push((f.one(), r));
        }
        if self.s_valuation() > 0 {
            out.push((f.zero(), f.one()));
        }
        Ok(out)
    }

    pub fn is_squarefree(&self) -> Result<bool, AlgebraError> {
        is_squarefree(self)
    }

    pub fn display_with(&self, var_s: &str, var_t: &str) -> String {
        let f = &self.field;
        let d = self.degree();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let mut mono = Vec::new();
            for (var, e) in [(var_s, d - i), (var_t, i)] {
                match e {
                    0 => {}
                    1 => mono.push(var.to_string()),
                    _ => mono.push(format!("{var}^{e}")),
                }
            }
            let coef = f.format(c);
            let term = match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef,
                (false, "1") => mono.join("*"),
                (false, "-1") => format!("-{}", mono.join("*")),
                (false, _) => format!("{coef}*{}", mono.join("*")),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return "0".into();
        }
        terms.join(" + ").replace("+ -", "- ")
    }
}

impl<F: Field> fmt::Display for BinaryPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("s", "t"))
    }
}

fn uni_trim<F: Field>(f: &F, a: &mut Vec<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

fn uni_rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let db = b.len() - 1;
    let li = f.inv(&b[db]).expect("trimmed divisor");
    let mut r = a.to_vec();
    uni_trim(f, &mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = f.mul(&r[dr], &li);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&factor, bc));
        }
        uni_trim(f, &mut r);
    }
    r
}

fn uni_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    uni_trim(f, &mut x);
    uni_trim(f, &mut y);
    while !y.is_empty() {
        let r = uni_rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Greatest common divisor of two binary forms, normalized so its first
/// nonzero coefficient is one. Powers of `s` and `t` are tracked
/// separately and Euclid runs on the dehomogenized cores.
pub fn poly_gcd<F: Field>(a: &BinaryPoly<F>, b: &BinaryPoly<F>) -> Result<BinaryPoly<F>, AlgebraError> {
    let f = a.field();
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(AlgebraError::ZeroGcd),
        (true, false) => return Ok(b.normalized()),
        (false, true) => return Ok(a.normalized()),
        _ => {}
    }
    let tv = a.t_valuation().min(b.t_valuation());
    let sv = a.s_valuation().min(b.s_valuation());
    let g = uni_gcd(f, &a.core(), &b.core());
    let mut coeffs = vec![f.zero(); tv];
    coeffs.extend(g);
    coeffs.extend(std::iter::repeat(f.zero()).take(sv));
    Ok(BinaryPoly::new(f, coeffs).normalized())
}

/// Gcd of a nonempty list of forms; zero entries are skipped.
pub fn poly_gcd_all<F: Field>(forms: &[BinaryPoly<F>]) -> Result<BinaryPoly<F>, AlgebraError> {
    let mut acc: Option<BinaryPoly<F>> = None;
    for p in forms.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.normalized(),
            Some(g) => poly_gcd(&g, p)?,
        });
        if acc.as_ref().is_some_and(|g| g.degree() == 0) {
            break;
        }
    }
    acc.ok_or(AlgebraError::ZeroGcd)
}

/// True iff the form has no repeated projective root, i.e. it is coprime
/// to both of its partial derivatives.
pub fn is_squarefree<F: Field>(a: &BinaryPoly<F>) -> Result<bool, AlgebraError> {
    if a.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if a.degree() <= 1 {
        return Ok(true);
    }
    let g = poly_gcd(a, &a.d_ds())?;
    let g = poly_gcd(&g, &a.d_dt())?;
    Ok(g.degree() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> BinaryPoly<Rationals> {
        BinaryPoly::from_i64(&Rationals, c)
    }

    #[test]
    fn gcd_examples() {
        // s^2 - t^2 and s - t
        assert_eq!(poly_gcd(&p(&[1, 0, -1]), &p(&[1, -1])).unwrap(), p(&[1, -1]));
        // s^3 and t^3
        assert_eq!(poly_gcd(&p(&[1, 0, 0, 0]), &p(&[0, 0, 0, 1])).unwrap(), p(&[1]));
        // s^2 t and s t^2
        assert_eq!(poly_gcd(&p(&[0, 1, 0, 0]), &p(&[0, 0, 1, 0])).unwrap(), p(&[0, 1, 0]));
        assert_eq!(poly_gcd(&p(&[0, 0]), &p(&[0, 0])), Err(AlgebraError::ZeroGcd));
    }

    #[test]
    fn squarefree_examples() {
        // s t (s - t) = s^2 t - s t^2
        assert!(is_squarefree(&p(&[0, 1, -1, 0])).unwrap());
        // s^2 t
        assert!(!is_squarefree(&p(&[0, 1, 0, 0])).unwrap());
        assert!(is_squarefree(&p(&[0, 0, 0])).is_err());
        // t^2 at the boundary
        assert!(!is_squarefree(&p(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn roots_include_boundary_points() {
        let q = Rationals;
        // s t (s - t): roots [1:0], [1:1], [0:1]
        let r = p(&[0, 1, -1, 0]).roots().unwrap();
        assert_eq!(
            r,
            vec![(q.one(), q.zero()), (q.one(), q.one()), (q.zero(), q.one())]
        );
    }

    #[test]
    fn derivatives_satisfy_euler() {
        let f = p(&[3, -1, 4, 1, -5]);
        let s = p(&[1, 0]);
        let t = p(&[0, 1]);
        let lhs = s.mul(&f.d_ds()).add(&t.mul(&f.d_dt()));
        assert_eq!(lhs, f.scale(&Rationals.from_i64(4)));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[0, 1, -1, 0]).to_string(), "s^2*t - s*t^2");
        assert_eq!(p(&[2]).to_string(), "2");
    }

    /// `g` divides `a` iff `a = g * q` is solvable for `q`, checked as a
    /// linear system in the coefficients of `q`.
    fn divides_by_linear_algebra(a: &BinaryPoly<PrimeField>, g: &BinaryPoly<PrimeField>) -> bool {
        let f = a.field().clone();
        if g.degree() > a.degree() {
            return false;
        }
        let qdeg = a.degree() - g.degree();
        let mut m = crate::matrix::DenseMatrix::zeros(&f, a.degree() + 1, qdeg + 1);
        for j in 0..=qdeg {
            for (i, c) in g.coeffs().iter().enumerate() {
                m.set(i + j, j, *c);
            }
        }
        m.solve(a.coeffs()).is_some()
    }

    proptest! {
        #[test]
        fn gcd_divides_both_inputs(
            a in proptest::collection::vec(0u64..13, 1..6),
            b in proptest::collection::vec(0u64..13, 1..6),
        ) {
            let f = PrimeField::new(13).unwrap();
            let pa = BinaryPoly::new(&f, a);
            let pb = BinaryPoly::new(&f, b);
            prop_assume!(!(pa.is_zero() && pb.is_zero()));
            let g = poly_gcd(&pa, &pb).unwrap();
            if !pa.is_zero() {
                prop_assert!(g.degree() <= pa.degree());
                prop_assert!(divides_by_linear_algebra(&pa, &g));
            }
            if !pb.is_zero() {
                prop_assert!(g.degree() <= pb.degree());
                prop_assert!(divides_by_linear_algebra(&pb, &g));
            }
        }
    }
}
