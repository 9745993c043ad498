//! Strata of projection centers by the multiplicity of the minimal summand.
//!
//! A stratum is indexed directly by `rho` (multiplicity of `O(n+2)` in the
//! normal bundle) or `delta` (multiplicity of `O(n+1)` in the tangent
//! bundle). The r-indexed values are available through [`rho_value`] and
//! [`delta_value`].

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::{
    analyze, immersion_report, normal_matrix, splitting_type, tangent_matrix, BundleKind, ProjectionCenter,
    SplittingType,
};
use crate::error::{BundleError, StrataError};
use crate::field::Field;
use crate::forms::{contract, BinaryForm, DualForm};
use crate::matrix::DenseMatrix;
use crate::rng::{derive_seed, rng_from_seed};

/// Resamples allowed before [`construct_special_center`] gives up.
pub const RETRY_BUDGET: usize = 32;

/// Bidegree of the class of the codimension-3 stratum of lines in
/// `Gr(P^1, P^5)`; a quoted constant, not recomputed.
pub const QUINTIC_STRATUM_BIDEGREE: (u32, u32) = (1, 6);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumSpec {
    pub kind: BundleKind,
    pub n: usize,
    pub k: usize,
    /// `rho` for the normal bundle, `delta` for the tangent bundle.
    pub multiplicity: usize,
}

impl StratumSpec {
    pub fn normal(n: usize, k: usize, rho: usize) -> Result<Self, StrataError> {
        Self::new(BundleKind::Normal, n, k, rho)
    }

    pub fn tangent(n: usize, k: usize, delta: usize) -> Result<Self, StrataError> {
        Self::new(BundleKind::Tangent, n, k, delta)
    }

    pub fn new(kind: BundleKind, n: usize, k: usize, multiplicity: usize) -> Result<Self, StrataError> {
        let spec = Self { kind, n, k, multiplicity };
        spec.check()?;
        Ok(spec)
    }

    /// Smallest possible multiplicity, attained by a generic center.
    pub fn generic_multiplicity(kind: BundleKind, n: usize, k: usize) -> usize {
        match kind {
            BundleKind::Normal => (n - 1).saturating_sub(3 * k),
            BundleKind::Tangent => n.saturating_sub(2 * k),
        }
    }

    /// Multiplicity of the minimal summand can only range over these values.
    pub fn range(kind: BundleKind, n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
        let hi = match kind {
            BundleKind::Normal => n - k - 2,
            BundleKind::Tangent => n - k - 1,
        };
        Self::generic_multiplicity(kind, n, k)..=hi
    }

    pub fn check(&self) -> Result<(), StrataError> {
        let (n, k, m) = (self.n, self.k, self.multiplicity);
        if k == 0 || k + 2 >= n {
            return Err(StrataError::Bounds(format!("need 1 <= k < n - 2, got n = {n}, k = {k}")));
        }
        let range = Self::range(self.kind, n, k);
        if !range.contains(&m) {
            return Err(StrataError::Bounds(format!(
                "{} = {m} outside {}..={} for n = {n}, k = {k}",
                self.symbol(),
                range.start(),
                range.end()
            )));
        }
        Ok(())
    }

    /// Construction needs the base locus `P^(n - per * m)` to hold a `P^(k-1)`.
    pub fn check_constructible(&self) -> Result<(), StrataError> {
        self.check()?;
        let per = self.conditions_per_generator();
        if per * self.multiplicity + self.k > self.n + 1 {
            return Err(StrataError::Bounds(format!(
                "{} = {} needs {}{} <= n - k + 1 = {}",
                self.symbol(),
                self.multiplicity,
                per,
                self.symbol(),
                self.n + 1 - self.k
            )));
        }
        Ok(())
    }

    pub fn symbol(&self) -> &'static str {
        match self.kind {
            BundleKind::Normal => "rho",
            BundleKind::Tangent => "delta",
        }
    }

    fn conditions_per_generator(&self) -> usize {
        match self.kind {
            BundleKind::Normal => 3,
            BundleKind::Tangent => 2,
        }
    }

    fn generator_degree(&self) -> usize {
        match self.kind {
            BundleKind::Normal => self.n - 2,
            BundleKind::Tangent => self.n - 1,
        }
    }

    /// Rank of the normal or tangent matrix on the stratum.
    pub fn expected_rank(&self) -> usize {
        match self.kind {
            BundleKind::Normal => self.n - 1 - self.multiplicity,
            BundleKind::Tangent => self.n - self.multiplicity,
        }
    }
}

/// `rho^{n,k}_r`: `r` when `3k >= n-1` (`1 <= r < n-k`), otherwise
/// `n - 3k + r - 1` (`r <= 2k - 1`; `r = 0` gives the generic value).
pub fn rho_value(n: usize, k: usize, r: usize) -> Result<usize, StrataError> {
    let err = Err(StrataError::IndexOutOfRange { n, k, r });
    if 3 * k + 1 >= n {
        if r >= 1 && r + k < n {
            return Ok(r);
        }
        return err;
    }
    if r < 2 * k {
        return Ok(n + r - 3 * k - 1);
    }
    err
}

/// `delta^{n,k}_r` as literally defined: `r` when `2k <= n` and
/// `1 <= 2r <= k-1`, `n - 3k + r - 1` when `2k > n` and `r <= n-k-1`.
///
/// The definition is unreliable: the first branch is empty for `k = 2`, yet
/// `delta = 2` occurs at `(n, k) = (5, 2)`, and the second branch is never a
/// natural number. Stratum code uses `delta` directly.
pub fn delta_value(n: usize, k: usize, r: usize) -> Result<usize, StrataError> {
    let err = Err(StrataError::IndexOutOfRange { n, k, r });
    if 2 * k <= n {
        if 2 * r >= 1 && 2 * r < k {
            return Ok(r);
        }
        return err;
    }
    if r + k < n && n + r > 3 * k {
        return Ok(n + r - 3 * k - 1);
    }
    err
}

/// Splitting type of a general center in the stratum.
pub fn generic_splitting(spec: &StratumSpec) -> Result<SplittingType, StrataError> {
    let (n, k, m) = (spec.n, spec.k, spec.multiplicity);
    spec.check()?;
    let (a, twists) = match spec.kind {
        BundleKind::Normal => ((n - 1).checked_sub(m + k), 2 * k),
        BundleKind::Tangent => (n.checked_sub(m + k), k),
    };
    let a = a.filter(|&a| a > 0).ok_or(StrataError::NoResidualBundle)?;
    let b = twists / a;
    let base = spec.kind.base(n);
    let mut summands = vec![base; m];
    summands.extend(std::iter::repeat(base + b).take(a + b * a - twists));
    summands.extend(std::iter::repeat(base + b + 1).take(twists - b * a));
    Ok(SplittingType::new(spec.kind, n, k, summands)?)
}

/// Codimension of the stratum in `Gr(P^(k-1), P^n)`.
pub fn stratum_codim(spec: &StratumSpec) -> usize {
    let (n, k, m) = (spec.n as i64, spec.k as i64, spec.multiplicity as i64);
    let c = match spec.kind {
        BundleKind::Normal => m * (3 * k - n + 1 + m),
        BundleKind::Tangent => m * (2 * k - n + m),
    };
    usize::try_from(c).expect("nonnegative within bounds")
}

/// `dim Gr(P^(k-1), P^n)`.
pub fn grassmannian_dim(n: usize, k: usize) -> usize {
    k * (n + 1 - k)
}

/// Parameter count of the family of centers: choices of the linear system
/// plus choices of `L` in its base locus.
pub fn family_dim(spec: &StratumSpec) -> i64 {
    let (n, k, m) = (spec.n as i64, spec.k as i64, spec.multiplicity as i64);
    match spec.kind {
        BundleKind::Normal => m * (n - 1 - m) + k * (n - 3 * m + 1 - k),
        BundleKind::Tangent => m * (n - m) + k * (n + 1 - 2 * m - k),
    }
}

/// Expected dimension of the `s`-planes lying in `(r+1)`-secant `r`-planes of `C_n`.
pub fn expected_dim_secant_grassmannian(n: usize, s: usize, r: usize) -> usize {
    assert!(s <= r && r <= n, "need 0 <= s <= r <= n");
    ((s + 1) * (n - s)).min((s + 1) * (r - s) + r + 1)
}

/// The dual forms cutting out the base locus that contains the center.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystemPhi<F: Field> {
    pub generators: Vec<DualForm<F>>,
}

impl<F: Field> LinearSystemPhi<F> {
    /// Rows `row[d] = b_(d-i)` expressing `phi o f = 0` for each generator.
    pub fn condition_matrix(&self, field: &F, n: usize) -> DenseMatrix<F> {
        let mut rows = Vec::new();
        for phi in &self.generators {
            let e = phi.degree();
            for i in 0..=n - e {
                let mut row = vec![field.zero(); n + 1];
                for (j, b) in phi.coeffs().iter().enumerate() {
                    row[i + j] = b.clone();
                }
                rows.push(row);
            }
        }
        DenseMatrix::from_rows(field, n + 1, rows).expect("rectangular")
    }

    /// `phi o f = 0` for every generator and every point.
    pub fn contains(&self, center: &ProjectionCenter<F>) -> bool {
        self.generators
            .iter()
            .all(|phi| center.points().iter().all(|p| contract(phi, p).map(|c| c.is_zero()).unwrap_or(false)))
    }
}

fn random_squarefree<F: Field, R: Rng>(field: &F, degree: usize, rng: &mut R) -> DualForm<F> {
    let mut points: Vec<(F::Elem, F::Elem)> = Vec::with_capacity(degree);
    while points.len() < degree {
        let (a0, a1) = (field.random(rng), field.random(rng));
        let distinct = points
            .iter()
            .all(|(b0, b1)| !field.is_zero(&field.sub(&field.mul(&a0, b1), &field.mul(&a1, b0))));
        if !(field.is_zero(&a0) && field.is_zero(&a1)) && distinct {
            points.push((a0, a1));
        }
    }
    DualForm::vanishing_on(field, &points)
}

fn attempt<F: Field, R: Rng>(
    field: &F,
    spec: &StratumSpec,
    rng: &mut R,
) -> Result<(ProjectionCenter<F>, LinearSystemPhi<F>), String> {
    let n = spec.n;
    let generators: Vec<DualForm<F>> =
        (0..spec.multiplicity).map(|_| random_squarefree(field, spec.generator_degree(), rng)).collect();
    let gens = DenseMatrix::from_rows(
        field,
        spec.generator_degree() + 1,
        generators.iter().map(|g| g.coeffs().to_vec()).collect(),
    )
    .expect("equal degrees");
    if gens.rank() < generators.len() {
        return Err("dependent dual generators".into());
    }
    let phi = LinearSystemPhi { generators };
    let base = phi.condition_matrix(field, n).kernel_basis();
    let want = n + 1 - spec.conditions_per_generator() * spec.multiplicity;
    if base.len() != want {
        return Err(format!("base locus of dimension {} instead of {want}", base.len()));
    }
    let points = (0..spec.k)
        .map(|_| {
            let mut v = vec![field.zero(); n + 1];
            for b in &base {
                let c = field.random(rng);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = field.add(x, &field.mul(&c, y));
                }
            }
            field.normalize_projective(&mut v);
            BinaryForm::new(field, v)
        })
        .collect();
    let center = ProjectionCenter::new(field, points).map_err(|e| e.to_string())?;
    let report = immersion_report(&center);
    if !report.immersive {
        return Err(format!("not an immersion (minor gcd {})", report.gcd));
    }
    let rank = match spec.kind {
        BundleKind::Normal => normal_matrix(&center).rank(),
        BundleKind::Tangent => tangent_matrix(&center).rank(),
    };
    if rank != spec.expected_rank() {
        return Err(format!("{} matrix rank {rank}, expected {}", spec.kind, spec.expected_rank()));
    }
    Ok((center, phi))
}

/// Build a center in the stratum: sample `rho` (or `delta`) independent
/// squarefree dual forms of degree `n-2` (or `n-1`), take `k` random points
/// of their common apolar space, and retry until the center is immersive
/// with exactly the predicted matrix rank.
pub fn construct_special_center<F: Field>(
    field: &F,
    spec: &StratumSpec,
    seed: u64,
) -> Result<(ProjectionCenter<F>, LinearSystemPhi<F>), StrataError> {
    spec.check_constructible()?;
    if !field.admits_degree(spec.n) {
        return Err(BundleError::InvalidCenter(format!("characteristic too small for n = {}", spec.n)).into());
    }
    let mut rng = rng_from_seed(seed);
    let mut last = String::new();
    for _ in 0..RETRY_BUDGET {
        match attempt(field, spec, &mut rng) {
            Ok(found) => return Ok(found),
            Err(why) => last = why,
        }
    }
    Err(StrataError::RetryBudgetExhausted { attempts: RETRY_BUDGET, last })
}

/// One round trip through construction and splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumReport<F: Field> {
    pub spec: StratumSpec,
    pub seed: u64,
    pub center: ProjectionCenter<F>,
    pub phi: LinearSystemPhi<F>,
    pub predicted: SplittingType,
    pub computed: SplittingType,
    /// Predicted and computed splittings agree.
    pub agreement: bool,
    /// The minimal summand has multiplicity exactly `rho` (or `delta`).
    pub converse: bool,
}

/// Run `trials` seeded constructions and compare with the generic splitting.
pub fn verify_equivalence<F: Field>(
    field: &F,
    spec: &StratumSpec,
    trials: usize,
    seed: u64,
) -> Result<Vec<StratumReport<F>>, StrataError> {
    let predicted = generic_splitting(spec)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(seed, t);
            let (center, phi) = construct_special_center(field, spec, trial_seed)?;
            let computed = splitting_type(&center, spec.kind)?;
            Ok(StratumReport {
                spec: *spec,
                seed: trial_seed,
                agreement: computed == predicted,
                converse: computed.base_multiplicity() == spec.multiplicity,
                predicted: predicted.clone(),
                computed,
                center,
                phi,
            })
        })
        .collect()
}

/// Aggregate of [`verify_equivalence`] runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceSummary {
    pub spec: StratumSpec,
    pub trials: usize,
    pub agreements: usize,
    pub histogram: BTreeMap<String, usize>,
    /// Seeds whose splitting disagreed or whose minimal multiplicity was off.
    pub quarantined_seeds: Vec<u64>,
}

pub fn summarize<F: Field>(spec: &StratumSpec, reports: &[StratumReport<F>]) -> EquivalenceSummary {
    let mut histogram = BTreeMap::new();
    for r in reports {
        *histogram.entry(r.computed.label()).or_insert(0) += 1;
    }
    EquivalenceSummary {
        spec: *spec,
        trials: reports.len(),
        agreements: reports.iter().filter(|r| r.agreement).count(),
        histogram,
        quarantined_seeds: reports.iter().filter(|r| !r.agreement || !r.converse).map(|r| r.seed).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyViolation {
    pub seed: u64,
    pub message: String,
}

/// Histogram of splitting types of uniformly random centers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub n: usize,
    pub k: usize,
    pub field: String,
    pub seed: u64,
    pub trials: usize,
    /// Samples whose points were dependent.
    pub degenerate: usize,
    /// Samples whose projection was not an immersion.
    pub non_immersive: usize,
    pub normal: BTreeMap<String, usize>,
    pub tangent: BTreeMap<String, usize>,
    pub violations: Vec<SurveyViolation>,
}

impl SurveyReport {
    /// Most frequent type and its share of all trials.
    pub fn modal(&self, kind: BundleKind) -> Option<(String, f64)> {
        let hist = match kind {
            BundleKind::Normal => &self.normal,
            BundleKind::Tangent => &self.tangent,
        };
        hist.iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(label, &count)| (label.clone(), count as f64 / self.trials.max(1) as f64))
    }
}

enum SurveySample {
    Degenerate,
    NonImmersive,
    Split(String, String),
    Violation(String),
}

/// Sample `trials` random centers with independent per-trial seeds.
pub fn survey_generic<F: Field>(field: &F, n: usize, k: usize, trials: usize, seed: u64) -> Result<SurveyReport, StrataError> {
    if k == 0 || k + 2 >= n {
        return Err(StrataError::Bounds(format!("need 1 <= k < n - 2, got n = {n}, k = {k}")));
    }
    if !field.admits_degree(n) {
        return Err(BundleError::InvalidCenter(format!("characteristic too small for n = {n}")).into());
    }
    let samples: Vec<(u64, SurveySample)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(seed, t);
            let mut rng = rng_from_seed(trial_seed);
            let points = (0..k).map(|_| BinaryForm::random(field, n, &mut rng)).collect();
            let sample = match ProjectionCenter::new(field, points) {
                Err(_) => SurveySample::Degenerate,
                Ok(center) => match analyze(&center) {
                    Ok([normal, tangent]) => SurveySample::Split(normal.splitting.label(), tangent.splitting.label()),
                    Err(BundleError::NotImmersive { .. }) => SurveySample::NonImmersive,
                    Err(e) => SurveySample::Violation(e.to_string()),
                },
            };
            (trial_seed, sample)
        })
        .collect();
    let mut report = SurveyReport {
        n,
        k,
        field: field.tag().to_string(),
        seed,
        trials,
        degenerate: 0,
        non_immersive: 0,
        normal: BTreeMap::new(),
        tangent: BTreeMap::new(),
        violations: Vec::new(),
    };
    for (seed, sample) in samples {
        match sample {
            SurveySample::Degenerate => report.degenerate += 1,
            SurveySample::NonImmersive => report.non_immersive += 1,
            SurveySample::Split(nl, tl) => {
                *report.normal.entry(nl).or_insert(0) += 1;
                *report.tangent.entry(tl).or_insert(0) += 1;
            }
            SurveySample::Violation(message) => report.violations.push(SurveyViolation { seed, message }),
        }
    }
    Ok(report)
}

/// All `(multiplicity, splitting, codim)` rows for one `(n, k)` and kind.
pub fn formula_rows(kind: BundleKind, n: usize, k: usize) -> Vec<(StratumSpec, Result<SplittingType, StrataError>, usize)> {
    if k == 0 || k + 2 >= n {
        return Vec::new();
    }
    StratumSpec::range(kind, n, k)
        .map(|m| {
            let spec = StratumSpec { kind, n, k, multiplicity: m };
            (spec, generic_splitting(&spec), stratum_codim(&spec))
        })
        .collect()
}
