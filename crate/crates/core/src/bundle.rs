//! Normal and restricted tangent bundles of projected rational normal curves.
//!
//! The curve `C_n` is `(s^n, s^(n-1) t, ..., t^n)` in catalecticant
//! coordinates. Projecting from a center `L` spanned by `k` points yields a
//! curve in `P^(n-k)`; both bundles are recovered from presentations
//!
//! ```text
//! 0 -> N^v(n+2) -> O^(n-1) -> O(2)^k -> 0
//! 0 -> T^v(n+1) -> O^n     -> O(1)^k -> 0
//! ```
//!
//! whose maps are built from the point coordinates. Twisting by `O(j)` and
//! taking kernels on global sections gives `h(j)`, and the second
//! differences of `h` give the splitting type.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::BundleError;
use crate::field::Field;
use crate::forms::{catalecticant, BinaryForm};
use crate::matrix::DenseMatrix;
use crate::poly::{poly_gcd, BinaryPoly, ProjectivePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleKind {
    Normal,
    Tangent,
}

impl BundleKind {
    /// Degree `n+2` or `n+1` of the minimal possible summand.
    pub fn base(self, n: usize) -> usize {
        match self {
            BundleKind::Normal => n + 2,
            BundleKind::Tangent => n + 1,
        }
    }

    pub fn rank(self, n: usize, k: usize) -> usize {
        match self {
            BundleKind::Normal => n - k - 1,
            BundleKind::Tangent => n - k,
        }
    }

    /// Total degree of the bundle on `P^1`.
    pub fn degree_sum(self, n: usize, k: usize) -> usize {
        match self {
            BundleKind::Normal => n * n + n - k * n - 2,
            BundleKind::Tangent => (n - k) * (n + 1) + k,
        }
    }

    /// Largest possible shift of a summand above the base.
    pub fn max_shift(self, k: usize) -> usize {
        match self {
            BundleKind::Normal => 2 * k,
            BundleKind::Tangent => k,
        }
    }

    /// Number of quadratic (normal) or linear (tangent) relations per point.
    fn entry_degree(self) -> usize {
        match self {
            BundleKind::Normal => 2,
            BundleKind::Tangent => 1,
        }
    }
}

impl fmt::Display for BundleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BundleKind::Normal => "normal",
            BundleKind::Tangent => "tangent",
        })
    }
}

/// A linear `P^(k-1)` in `P^n` spanned by `k` independent points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCenter<F: Field> {
    field: F,
    n: usize,
    points: Vec<BinaryForm<F>>,
}

impl<F: Field> ProjectionCenter<F> {
    pub fn new(field: &F, points: Vec<BinaryForm<F>>) -> Result<Self, BundleError> {
        let invalid = |m: String| Err(BundleError::InvalidCenter(m));
        let Some(first) = points.first() else {
            return invalid("a center needs at least one point".into());
        };
        let (n, k) = (first.degree(), points.len());
        if let Some(p) = points.iter().find(|p| p.degree() != n) {
            return invalid(format!("points of degrees {n} and {}", p.degree()));
        }
        if k + 2 >= n {
            return invalid(format!("need k < n - 2, got n = {n}, k = {k}"));
        }
        if !field.admits_degree(n) {
            return invalid(format!("characteristic {} must exceed 2n = {}", field.characteristic(), 2 * n));
        }
        let center = Self {
            field: field.clone(),
            n,
            points,
        };
        let rank = center.point_matrix().rank();
        if rank != k {
            return invalid(format!("the {k} points span only a P^{}", rank as isize - 1));
        }
        Ok(center)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[BinaryForm<F>] {
        &self.points
    }

    /// The `k x (n+1)` matrix of point coordinates.
    pub fn point_matrix(&self) -> DenseMatrix<F> {
        let rows = self.points.iter().map(|p| p.coords().to_vec()).collect();
        DenseMatrix::from_rows(&self.field, self.n + 1, rows).expect("equal degrees")
    }

    /// Same subspace, spanned by `g * points` for an invertible `k x k` matrix `g`.
    pub fn change_basis(&self, g: &DenseMatrix<F>) -> Result<Self, BundleError> {
        let f = &self.field;
        let points = (0..g.nrows())
            .map(|r| {
                (0..g.ncols()).fold(BinaryForm::zero(f, self.n), |acc, c| acc.add(&self.points[c].scale(&g[(r, c)])))
            })
            .collect();
        Self::new(f, points)
    }

    /// Reparametrize `P^1` by `g`; the curve, and so every invariant, is preserved.
    pub fn transform(&self, g: &[[F::Elem; 2]; 2]) -> Result<Self, BundleError> {
        Self::new(&self.field, self.points.iter().map(|p| p.transform(g)).collect())
    }
}

/// The global-sections matrix of the presentation twisted by `O(j)`.
///
/// Rows are indexed by (point, power of `s` in the product), columns by
/// (coordinate `i`, monomial `s^u t^(j-u)`); `j = 0` gives exactly the
/// normal / tangent matrices.
pub fn ladder_matrix<F: Field>(center: &ProjectionCenter<F>, kind: BundleKind, j: usize) -> DenseMatrix<F> {
    let field = center.field();
    let n = center.n();
    let deg = kind.entry_degree();
    // the quadratic entries a_i t^2 - 2 a_(i+1) s t + a_(i+2) s^2, or the
    // linear entries a_i t - a_(i+1) s, listed by power of s
    let weights: Vec<F::Elem> = match kind {
        BundleKind::Normal => vec![field.one(), field.from_i64(-2), field.one()],
        BundleKind::Tangent => vec![field.one(), field.from_i64(-1)],
    };
    let ncoords = n + 1 - deg;
    let (row_block, col_block) = (j + deg + 1, j + 1);
    let mut m = DenseMatrix::zeros(field, center.k() * row_block, ncoords * col_block);
    for (c, p) in center.points().iter().enumerate() {
        let a = p.coords();
        for i in 0..ncoords {
            for u in 0..=j {
                for (e, w) in weights.iter().enumerate() {
                    m.set(c * row_block + u + e, i * col_block + u, field.mul(w, &a[i + e]));
                }
            }
        }
    }
    m
}

/// The `3k x (n-1)` matrix whose rank controls the minimal normal summand.
pub fn normal_matrix<F: Field>(center: &ProjectionCenter<F>) -> DenseMatrix<F> {
    ladder_matrix(center, BundleKind::Normal, 0)
}

/// The `2k x n` matrix whose rank controls the minimal tangent summand.
pub fn tangent_matrix<F: Field>(center: &ProjectionCenter<F>) -> DenseMatrix<F> {
    ladder_matrix(center, BundleKind::Tangent, 0)
}

static LADDERS_CHECKED: AtomicUsize = AtomicUsize::new(0);
static LADDER_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Process-wide count of ladders turned into splittings, and of those that
/// failed an invariant, since startup.
pub fn ladder_audit() -> (usize, usize) {
    (LADDERS_CHECKED.load(Ordering::Relaxed), LADDER_VIOLATIONS.load(Ordering::Relaxed))
}

/// `h(j) = h^0(E^v(base + j))` for `j = 0..=max_shift + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLadder {
    pub kind: BundleKind,
    pub h: Vec<usize>,
}

impl TwistLadder {
    /// First differences `d(j) = h(j) - h(j-1)` with `h(-1) = 0`.
    pub fn differences(&self) -> Vec<usize> {
        let mut prev = 0;
        self.h
            .iter()
            .map(|&x| {
                let d = x.saturating_sub(prev);
                prev = x;
                d
            })
            .collect()
    }

    /// Monotonicity, convexity and saturation at the bundle rank.
    pub fn check(&self, n: usize, k: usize) -> Result<(), BundleError> {
        let bad = |m: String| Err(BundleError::LadderInvariant(m));
        if self.h.len() != self.kind.max_shift(k) + 2 {
            return bad(format!("ladder of length {} for k = {k}", self.h.len()));
        }
        if let Some(w) = self.h.windows(2).find(|w| w[1] < w[0]) {
            return bad(format!("h decreases from {} to {} in {:?}", w[0], w[1], self.h));
        }
        let d = self.differences();
        if let Some(w) = d.windows(2).find(|w| w[1] < w[0]) {
            return bad(format!("h is not convex: differences {:?} (step {} to {})", d, w[0], w[1]));
        }
        let rank = self.kind.rank(n, k);
        let tail = &d[d.len() - 2..];
        if tail.iter().any(|&x| x != rank) {
            return bad(format!("h does not saturate at rank {rank}: differences {d:?}"));
        }
        Ok(())
    }

    /// Read off the splitting: `d(j) - d(j-1)` summands have degree `base + j`.
    pub fn splitting(&self, n: usize, k: usize) -> Result<SplittingType, BundleError> {
        LADDERS_CHECKED.fetch_add(1, Ordering::Relaxed);
        let result = self.recover(n, k);
        if result.is_err() {
            LADDER_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        }
        result
    }

    fn recover(&self, n: usize, k: usize) -> Result<SplittingType, BundleError> {
        self.check(n, k)?;
        let d = self.differences();
        let base = self.kind.base(n);
        let mut summands = Vec::new();
        for j in 0..=self.kind.max_shift(k) {
            let count = d[j] - if j == 0 { 0 } else { d[j - 1] };
            summands.extend(std::iter::repeat(base + j).take(count));
        }
        SplittingType::new(self.kind, n, k, summands)
    }
}

/// Compute the twist ladder; levels are independent rank computations.
pub fn twist_ladder<F: Field>(center: &ProjectionCenter<F>, kind: BundleKind) -> TwistLadder {
    let depth = kind.max_shift(center.k()) + 1;
    let h = (0..=depth)
        .into_par_iter()
        .map(|j| {
            let m = ladder_matrix(center, kind, j);
            m.ncols() - m.rank()
        })
        .collect();
    TwistLadder { kind, h }
}

/// Degrees of the line-bundle summands, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplittingType {
    pub kind: BundleKind,
    pub n: usize,
    pub k: usize,
    pub summands: Vec<usize>,
}

impl SplittingType {
    /// Validates cardinality, degree sum and the per-summand bounds.
    pub fn new(kind: BundleKind, n: usize, k: usize, mut summands: Vec<usize>) -> Result<Self, BundleError> {
        summands.sort_unstable();
        let st = Self { kind, n, k, summands };
        st.check()?;
        Ok(st)
    }

    pub fn check(&self) -> Result<(), BundleError> {
        let (kind, n, k) = (self.kind, self.n, self.k);
        let bad = |m: String| Err(BundleError::SplittingInvariant(format!("{kind} {}: {m}", self.label())));
        if self.summands.len() != kind.rank(n, k) {
            return bad(format!("{} summands, expected {}", self.summands.len(), kind.rank(n, k)));
        }
        let sum: usize = self.summands.iter().sum();
        if sum != kind.degree_sum(n, k) {
            return bad(format!("degree sum {sum}, expected {}", kind.degree_sum(n, k)));
        }
        let (lo, hi) = (kind.base(n), kind.base(n) + kind.max_shift(k));
        if let Some(x) = self.summands.iter().find(|&&x| x < lo || x > hi) {
            return bad(format!("summand {x} outside {lo}..={hi}"));
        }
        Ok(())
    }

    /// Multiplicity of the minimal possible summand `O(base)`.
    pub fn base_multiplicity(&self) -> usize {
        let base = self.kind.base(self.n);
        self.summands.iter().filter(|&&x| x == base).count()
    }

    /// `"(7,11)"`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.summands.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// `h(j)` that this splitting would produce, for `j = 0..=max_shift + 1`.
    pub fn expected_ladder(&self) -> Vec<usize> {
        let base = self.kind.base(self.n);
        (0..=self.kind.max_shift(self.k) + 1)
            .map(|j| self.summands.iter().map(|&x| (base + j + 1).saturating_sub(x)).sum())
            .collect()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Result of the immersion test.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionReport<F: Field> {
    pub immersive: bool,
    /// gcd of the `2 x 2` Jacobian minors (zero if they all vanish).
    pub gcd: BinaryPoly<F>,
    /// Roots of the gcd lying in the working field.
    pub cusps: Vec<ProjectivePoint<F::Elem>>,
}

impl<F: Field> ImmersionReport<F> {
    pub fn cusp_labels(&self, field: &F) -> String {
        let parts: Vec<String> = self
            .cusps
            .iter()
            .map(|(a, b)| format!("({}:{})", field.format(a), field.format(b)))
            .collect();
        parts.join(", ")
    }
}

/// The projected parametrization `psi_r = sum_d Q_r[d] s^(n-d) t^d`, where
/// the rows of `Q` span the linear forms vanishing on `L`.
pub fn projected_parametrization<F: Field>(center: &ProjectionCenter<F>) -> Vec<BinaryPoly<F>> {
    center
        .point_matrix()
        .kernel_basis()
        .into_iter()
        .map(|q| BinaryPoly::new(center.field(), q))
        .collect()
}

/// The projection restricted to `C_n` is an immersion iff the `2 x 2` minors
/// of the Jacobian of the projected parametrization have no common root.
/// Points of `C_n` inside `L` are caught too: there all `psi_r` vanish, and
/// Euler's relation makes the two partial-derivative vectors dependent.
pub fn immersion_report<F: Field>(center: &ProjectionCenter<F>) -> ImmersionReport<F> {
    let field = center.field();
    let psi = projected_parametrization(center);
    let ds: Vec<_> = psi.iter().map(|p| p.d_ds()).collect();
    let dt: Vec<_> = psi.iter().map(|p| p.d_dt()).collect();
    let mut gcd: Option<BinaryPoly<F>> = None;
    'outer: for a in 0..psi.len() {
        for b in a + 1..psi.len() {
            let minor = ds[a].mul(&dt[b]).sub(&ds[b].mul(&dt[a]));
            if minor.is_zero() {
                continue;
            }
            let g = match &gcd {
                None => minor.normalized(),
                Some(g) => poly_gcd(g, &minor).expect("minor is nonzero"),
            };
            let done = g.degree() == 0;
            gcd = Some(g);
            if done {
                break 'outer;
            }
        }
    }
    match gcd {
        None => ImmersionReport {
            immersive: false,
            gcd: BinaryPoly::zero(field, 0),
            cusps: Vec::new(),
        },
        Some(g) => {
            let cusps = g.roots().expect("nonzero gcd");
            ImmersionReport {
                immersive: g.degree() == 0,
                gcd: g,
                cusps,
            }
        }
    }
}

pub fn ordinary_singularities<F: Field>(center: &ProjectionCenter<F>) -> bool {
    immersion_report(center).immersive
}

fn not_immersive<F: Field>(center: &ProjectionCenter<F>, report: &ImmersionReport<F>) -> BundleError {
    let cusps = if report.cusps.is_empty() {
        "no point defined over the working field".to_string()
    } else {
        report.cusp_labels(center.field())
    };
    BundleError::NotImmersive {
        gcd: report.gcd.to_string(),
        cusps,
    }
}

/// Splitting type of the normal or restricted tangent bundle. Refuses
/// centers whose projection is not an immersion.
pub fn splitting_type<F: Field>(center: &ProjectionCenter<F>, kind: BundleKind) -> Result<SplittingType, BundleError> {
    let report = immersion_report(center);
    if !report.immersive {
        return Err(not_immersive(center, &report));
    }
    twist_ladder(center, kind).splitting(center.n(), center.k())
}

/// Everything computed for one center and one bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleAnalysis {
    pub splitting: SplittingType,
    pub ladder: TwistLadder,
    /// Rank of the normal or tangent matrix.
    pub rank: usize,
}

/// Both bundles at once, sharing a single immersion check.
pub fn analyze<F: Field>(center: &ProjectionCenter<F>) -> Result<[BundleAnalysis; 2], BundleError> {
    let report = immersion_report(center);
    if !report.immersive {
        return Err(not_immersive(center, &report));
    }
    let one = |kind: BundleKind| -> Result<BundleAnalysis, BundleError> {
        let ladder = twist_ladder(center, kind);
        let splitting = ladder.splitting(center.n(), center.k())?;
        let cols = center.n() + 1 - kind.entry_degree();
        Ok(BundleAnalysis {
            rank: cols - ladder.h[0],
            splitting,
            ladder,
        })
    };
    Ok([one(BundleKind::Normal)?, one(BundleKind::Tangent)?])
}

fn det3<F: Field>(m: [[&BinaryPoly<F>; 3]; 3]) -> BinaryPoly<F> {
    let cof = |a: usize, b: usize, c: usize, d: usize| m[1][a].mul(m[2][b]).sub(&m[1][c].mul(m[2][d]));
    m[0][0]
        .mul(&cof(1, 2, 2, 1))
        .sub(&m[0][1].mul(&cof(0, 2, 2, 0)))
        .add(&m[0][2].mul(&cof(0, 1, 1, 0)))
}

/// Whether the projected curve is smooth: `Some` for `k <= 2`, `None` beyond.
///
/// For `k = 1` the image is smooth iff the center is off the secant variety,
/// i.e. `rank Cat_p(2, n-2) >= 3`. For `k = 2` the center line must avoid the
/// secant variety: the `3 x 3` minors of `Cat_(lambda f1 + mu f2)(2, n-2)`,
/// cubics in `(lambda, mu)`, must have constant gcd; the projection must also
/// be an immersion.
pub fn smooth_image<F: Field>(center: &ProjectionCenter<F>) -> Option<bool> {
    let field = center.field();
    match center.points() {
        [p] => Some(catalecticant(p, 2).expect("n >= 4").rank() >= 3),
        [f1, f2] => {
            let c1 = catalecticant(f1, 2).expect("n >= 4");
            let c2 = catalecticant(f2, 2).expect("n >= 4");
            let entry = |r: usize, c: usize| BinaryPoly::new(field, vec![c1[(r, c)].clone(), c2[(r, c)].clone()]);
            let cols = c1.ncols();
            let table: Vec<Vec<BinaryPoly<F>>> = (0..3).map(|r| (0..cols).map(|c| entry(r, c)).collect()).collect();
            let mut gcd: Option<BinaryPoly<F>> = None;
            for a in 0..cols {
                for b in a + 1..cols {
                    for c in b + 1..cols {
                        let pick = |r: usize| [&table[r][a], &table[r][b], &table[r][c]];
                        let minor = det3([pick(0), pick(1), pick(2)]);
                        if minor.is_zero() {
                            continue;
                        }
                        let g = match &gcd {
                            None => minor.normalized(),
                            Some(g) => poly_gcd(g, &minor).expect("nonzero"),
                        };
                        if g.degree() == 0 {
                            return Some(ordinary_singularities(center));
                        }
                        gcd = Some(g);
                    }
                }
            }
            Some(false)
        }
        _ => None,
    }
}
