//! Binary forms, the contraction action and apolarity.
//!
//! A degree-`n` form is stored in catalecticant coordinates `a_0..a_n`,
//! meaning `f = sum_d C(n,d) a_d x0^(n-d) x1^d`. In these coordinates the
//! point `[a_0 : ... : a_n]` of `P^n` is the point used by the projection
//! matrices, the rational normal curve is `{L^n}` with `a_d = l0^(n-d) l1^d`,
//! and contraction by a dual form is a Hankel convolution.
//!
//! Dual forms `phi = sum_j b_j d0^(e-j) d1^j` are stored by their plain
//! coefficients `b_j`; as a [`BinaryPoly`] in `(s, t)` they evaluate on a
//! point `p = (a0, a1)` as `phi(p)`.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::FormError;
use crate::field::Field;
use crate::matrix::DenseMatrix;
use crate::poly::{is_squarefree, BinaryPoly};

/// Seed for the deterministic squarefree-witness sweep.
const SWEEP_SEED: u64 = 0x5157_ee9a;
/// Random combinations tried per sweep after the basis and pairwise sums.
const SWEEP_RANDOM_COMBINATIONS: usize = 16;

fn binomial(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// A binary form of degree `n` in catalecticant coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryForm<F: Field> {
    field: F,
    coords: Vec<F::Elem>,
}

impl<F: Field> BinaryForm<F> {
    pub fn new(field: &F, coords: Vec<F::Elem>) -> Self {
        assert!(!coords.is_empty(), "a form needs n + 1 >= 1 coordinates");
        Self {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_i64(field: &F, coords: &[i64]) -> Self {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Self::new(field, vec![field.zero(); n + 1])
    }

    /// From plain coefficients `m_d` of `x0^(n-d) x1^d`.
    pub fn from_monomial(field: &F, coeffs: Vec<F::Elem>) -> Result<Self, FormError> {
        let n = coeffs.len().checked_sub(1).ok_or(FormError::CoefficientCount { expected: 1, found: 0 })?;
        if !field.admits_degree(n) {
            return Err(FormError::CharacteristicTooSmall { p: field.characteristic(), n });
        }
        let coords = coeffs
            .iter()
            .enumerate()
            .map(|(d, m)| {
                let b = field.from_bigint(&binomial(n, d));
                field.div(m, &b).expect("binomial invertible when p > n")
            })
            .collect();
        Ok(Self::new(field, coords))
    }

    /// Plain monomial coefficients `m_d = C(n,d) a_d`.
    pub fn to_monomial(&self) -> Vec<F::Elem> {
        let f = &self.field;
        let n = self.degree();
        self.coords
            .iter()
            .enumerate()
            .map(|(d, a)| f.mul(a, &f.from_bigint(&binomial(n, d))))
            .collect()
    }

    pub fn random<R: rand::Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Self {
        Self::new(field, (0..=n).map(|_| field.random(rng)).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        let f = &self.field;
        Self::new(f, self.coords.iter().zip(&other.coords).map(|(a, b)| f.add(a, b)).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coords.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Substitute `x0 -> g00 x0 + g01 x1`, `x1 -> g10 x0 + g11 x1`. This is
    /// the action of `GL_2` on `S_n`; it maps the rational normal curve to
    /// itself.
    pub fn transform(&self, g: &[[F::Elem; 2]; 2]) -> Self {
        let f = &self.field;
        let n = self.degree();
        let lin0 = BinaryPoly::new(f, vec![g[0][0].clone(), g[0][1].clone()]);
        let lin1 = BinaryPoly::new(f, vec![g[1][0].clone(), g[1][1].clone()]);
        let pow = |l: &BinaryPoly<F>, e: usize| (0..e).fold(BinaryPoly::one(f), |acc, _| acc.mul(l));
        let mut out = BinaryPoly::zero(f, n);
        for (d, m) in self.to_monomial().iter().enumerate() {
            if f.is_zero(m) {
                continue;
            }
            out = out.add(&pow(&lin0, n - d).mul(&pow(&lin1, d)).scale(m));
        }
        Self::from_monomial(f, out.into_coeffs()).expect("degree already validated")
    }
}

/// A differential operator `sum_j b_j d0^(e-j) d1^j` of degree `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualForm<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> DualForm<F> {
    pub fn new(field: &F, coeffs: Vec<F::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a dual form needs e + 1 >= 1 coefficients");
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The product of the dual linear forms `a1 d0 - a0 d1` of the points.
    pub fn vanishing_on(field: &F, points: &[(F::Elem, F::Elem)]) -> Self {
        let poly = points
            .iter()
            .fold(BinaryPoly::one(field), |acc, (a0, a1)| acc.mul(&BinaryPoly::vanishing_at(field, a0, a1)));
        Self::from_poly(&poly)
    }

    pub fn from_poly(p: &BinaryPoly<F>) -> Self {
        Self::new(p.field(), p.coeffs().to_vec())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The same coefficients read as a polynomial in `(s, t)`.
    pub fn as_poly(&self) -> BinaryPoly<F> {
        BinaryPoly::new(&self.field, self.coeffs.clone())
    }

    /// `phi(p) = sum_j b_j a0^(e-j) a1^j`.
    pub fn eval(&self, a0: &F::Elem, a1: &F::Elem) -> F::Elem {
        self.as_poly().eval(a0, a1)
    }

    pub fn is_squarefree(&self) -> bool {
        self.coeffs.iter().any(|c| !self.field.is_zero(c))
            && is_squarefree(&self.as_poly()).expect("nonzero checked")
    }
}

/// The power `L_p^n` of the linear form `L_p = a0 x0 + a1 x1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFormPower<F: Field> {
    pub a0: F::Elem,
    pub a1: F::Elem,
    pub n: usize,
}

impl<F: Field> LinearFormPower<F> {
    pub fn new(a0: F::Elem, a1: F::Elem, n: usize) -> Self {
        Self { a0, a1, n }
    }

    /// Catalecticant coordinates `a_d = a0^(n-d) a1^d`.
    pub fn to_form(&self, field: &F) -> BinaryForm<F> {
        let coords = (0..=self.n)
            .map(|d| field.mul(&field.pow(&self.a0, (self.n - d) as u32), &field.pow(&self.a1, d as u32)))
            .collect();
        BinaryForm::new(field, coords)
    }
}

/// `phi o f`: catalecticant coordinates `c_i = sum_j b_j a_(i+j)`.
pub fn contract<F: Field>(phi: &DualForm<F>, f: &BinaryForm<F>) -> Result<BinaryForm<F>, FormError> {
    let (e, n) = (phi.degree(), f.degree());
    if e > n {
        return Err(FormError::DegreeTooLarge { e, n });
    }
    let field = f.field();
    let a = f.coords();
    let coords = (0..=n - e)
        .map(|i| {
            phi.coeffs()
                .iter()
                .enumerate()
                .fold(field.zero(), |acc, (j, b)| field.add(&acc, &field.mul(b, &a[i + j])))
        })
        .collect();
    Ok(BinaryForm::new(field, coords))
}

/// Hankel matrix with `rows + 1` rows and `n - rows + 1` columns, entry
/// `(i, j) = a_(i+j)`; `rows` may be any value in `0..=n`.
fn hankel<F: Field>(f: &BinaryForm<F>, rows: usize) -> DenseMatrix<F> {
    let n = f.degree();
    let a = f.coords();
    let data = (0..=rows).map(|i| (0..=n - rows).map(|j| a[i + j].clone()).collect()).collect();
    DenseMatrix::from_rows(f.field(), n - rows + 1, data).expect("rectangular")
}

/// The catalecticant matrix `Cat_f(e, n-e)` for `1 <= e <= n-1`.
pub fn catalecticant<F: Field>(f: &BinaryForm<F>, e: usize) -> Result<DenseMatrix<F>, FormError> {
    let n = f.degree();
    if e < 1 || e + 1 > n {
        return Err(FormError::CatalecticantRange { e, n, max: n.saturating_sub(1) });
    }
    Ok(hankel(f, e))
}

fn check_apolar_degree(e: usize, n: usize) -> Result<(), FormError> {
    if e < 1 || e > n {
        return Err(FormError::CatalecticantRange { e, n, max: n });
    }
    Ok(())
}

fn kernel_as_dual_forms<F: Field>(m: &DenseMatrix<F>) -> Vec<DualForm<F>> {
    m.kernel_basis()
        .into_iter()
        .map(|v| DualForm::new(m.field(), v))
        .collect()
}

/// Basis of the degree-`e` part of `Ann(f)`: the kernel of `Cat_f(n-e, e)`.
///
/// `e = n` is accepted as well (the kernel is then a hyperplane of `T_n`).
pub fn apolar_forms<F: Field>(f: &BinaryForm<F>, e: usize) -> Result<Vec<DualForm<F>>, FormError> {
    check_apolar_degree(e, f.degree())?;
    Ok(kernel_as_dual_forms(&hankel(f, f.degree() - e)))
}

/// Basis of the common degree-`e` apolar space of several forms of one degree.
pub fn simultaneous_apolar<F: Field>(forms: &[BinaryForm<F>], e: usize) -> Result<Vec<DualForm<F>>, FormError> {
    let first = forms.first().ok_or(FormError::CoefficientCount { expected: 1, found: 0 })?;
    let n = first.degree();
    if let Some(bad) = forms.iter().find(|g| g.degree() != n) {
        return Err(FormError::DegreeMismatch(n, bad.degree()));
    }
    check_apolar_degree(e, n)?;
    let blocks: Vec<_> = forms.iter().map(|g| hankel(g, n - e)).collect();
    let stacked = DenseMatrix::vstack(first.field(), e + 1, &blocks)?;
    Ok(kernel_as_dual_forms(&stacked))
}

/// Try basis elements, pairwise sums, then seeded random combinations until a
/// squarefree element of the span is found.
pub fn squarefree_sweep<F: Field>(basis: &[DualForm<F>]) -> Option<DualForm<F>> {
    let first = basis.first()?;
    let field = first.field().clone();
    let combine = |weights: &[F::Elem]| {
        let mut acc = vec![field.zero(); first.coeffs().len()];
        for (w, b) in weights.iter().zip(basis) {
            for (x, c) in acc.iter_mut().zip(b.coeffs()) {
                *x = field.add(x, &field.mul(w, c));
            }
        }
        DualForm::new(&field, acc)
    };
    if let Some(found) = basis.iter().find(|b| b.is_squarefree()) {
        return Some(found.clone());
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = DualForm::new(
                &field,
                basis[i].coeffs().iter().zip(basis[j].coeffs()).map(|(x, y)| field.add(x, y)).collect(),
            );
            if s.is_squarefree() {
                return Some(s);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    (0..SWEEP_RANDOM_COMBINATIONS)
        .map(|_| combine(&basis.iter().map(|_| field.random(&mut rng)).collect::<Vec<_>>()))
        .find(|c| c.is_squarefree())
}

/// Outcome of Sylvester's algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct WaringCertificate<F: Field> {
    pub rank: usize,
    /// Degree of the lowest-degree generator of `Ann(f)`.
    pub first_apolar_degree: usize,
    /// A squarefree apolar form of degree `rank`, when the sweep found one.
    pub witness: Option<DualForm<F>>,
}

/// Waring rank of a binary form via Sylvester's algorithm: if the first
/// nonzero graded piece of `Ann(f)` (degree `e`) has a squarefree element
/// the rank is `e`, otherwise it is `n - e + 2`.
pub fn waring_certificate<F: Field>(f: &BinaryForm<F>) -> Result<WaringCertificate<F>, FormError> {
    if f.is_zero() {
        return Err(FormError::ZeroForm);
    }
    let n = f.degree();
    if n == 0 {
        return Ok(WaringCertificate { rank: 1, first_apolar_degree: 1, witness: None });
    }
    let (e, basis) = (1..=n)
        .map(|e| (e, apolar_forms(f, e).expect("degree in range")))
        .find(|(_, b)| !b.is_empty())
        .expect("Ann(f) is nonzero in degree n");
    if let Some(w) = squarefree_sweep(&basis) {
        return Ok(WaringCertificate { rank: e, first_apolar_degree: e, witness: Some(w) });
    }
    if basis.len() == 1 {
        // a lone generator that is not squarefree: the rank jumps to the
        // degree of the second generator
        let rank = n + 2 - e;
        let witness = if rank <= n { apolar_forms(f, rank).ok().and_then(|b| squarefree_sweep(&b)) } else { None };
        return Ok(WaringCertificate { rank, first_apolar_degree: e, witness });
    }
    // Inconclusive sweep on a pencil or larger space: escalate the degree.
    for d in e + 1..=n {
        let b = apolar_forms(f, d)?;
        if let Some(w) = squarefree_sweep(&b) {
            return Ok(WaringCertificate { rank: d, first_apolar_degree: e, witness: Some(w) });
        }
    }
    Ok(WaringCertificate { rank: n + 2 - e, first_apolar_degree: e, witness: None })
}

pub fn waring_rank<F: Field>(f: &BinaryForm<F>) -> Result<usize, FormError> {
    waring_certificate(f).map(|c| c.rank)
}

/// One summand `c * L^n` of a Waring decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct WaringTerm<F: Field> {
    pub coefficient: F::Elem,
    pub power: LinearFormPower<F>,
}

/// Explicit decomposition `f = sum c_j L_j^n` driven by a squarefree apolar
/// form `phi` whose roots are the points of the `L_j`.
pub fn decompose<F: Field>(f: &BinaryForm<F>, phi: &DualForm<F>) -> Result<Vec<WaringTerm<F>>, FormError> {
    let field = f.field();
    let n = f.degree();
    if !contract(phi, f)?.is_zero() {
        return Err(FormError::NotApolar);
    }
    if !phi.is_squarefree() {
        return Err(FormError::NotSquarefree);
    }
    let roots = phi.as_poly().roots()?;
    if roots.len() < phi.degree() {
        return Err(FormError::RootsOutsideField {
            found: roots.len(),
            needed: phi.degree(),
            field: field.tag(),
        });
    }
    let powers: Vec<LinearFormPower<F>> = roots.into_iter().map(|(a0, a1)| LinearFormPower::new(a0, a1, n)).collect();
    let columns: Vec<BinaryForm<F>> = powers.iter().map(|p| p.to_form(field)).collect();
    let rows = (0..=n).map(|d| columns.iter().map(|c| c.coords()[d].clone()).collect()).collect();
    let system = DenseMatrix::from_rows(field, columns.len(), rows)?;
    let coeffs = system.solve(f.coords()).ok_or(FormError::NotApolar)?;
    let terms: Vec<WaringTerm<F>> = coeffs
        .into_iter()
        .zip(powers)
        .map(|(coefficient, power)| WaringTerm { coefficient, power })
        .collect();
    debug_assert_eq!(&expand(field, n, &terms), f);
    Ok(terms)
}

/// Re-expand `sum c_j L_j^n`.
pub fn expand<F: Field>(field: &F, n: usize, terms: &[WaringTerm<F>]) -> BinaryForm<F> {
    terms.iter().fold(BinaryForm::zero(field, n), |acc, t| {
        acc.add(&t.power.to_form(field).scale(&t.coefficient))
    })
}

/// Whether `f` lies on the `s`-secant variety of the rational normal curve
/// (border rank at most `s`), tested on the most balanced catalecticant.
pub fn ps_membership<F: Field>(f: &BinaryForm<F>, s: usize) -> Result<bool, FormError> {
    let n = f.degree();
    if s < 1 || s > n + 1 {
        return Err(FormError::SecantRange { s, max: n + 1 });
    }
    if 2 * s >= n + 1 {
        return Ok(true);
    }
    Ok(catalecticant(f, s)?.rank() <= s)
}
