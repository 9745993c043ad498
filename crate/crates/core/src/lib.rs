//! Splitting types of normal and restricted tangent bundles of projected
//! rational normal curves, and the apolarity of the binary forms spanning
//! the projection center.
//!
//! Everything is exact: computations run over [`Rationals`] or a word-sized
//! [`PrimeField`], selected at runtime through the [`Field`] trait.

pub mod bundle;
pub mod error;
pub mod field;
pub mod forms;
pub mod io;
pub mod matrix;
mod modp;
pub mod poly;
pub mod rng;
pub mod strata;

pub use bundle::{
    analyze, immersion_report, normal_matrix, ordinary_singularities, smooth_image, splitting_type, tangent_matrix,
    twist_ladder, BundleKind, ProjectionCenter, SplittingType, TwistLadder,
};
pub use error::{AlgebraError, BundleError, FieldError, FormError, StrataError};
pub use field::{Field, FieldTag, PrimeField, Rationals, DEFAULT_PRIME, SURVEY_PRIME};
pub use forms::{
    apolar_forms, catalecticant, contract, decompose, ps_membership, simultaneous_apolar, waring_rank, BinaryForm,
    DualForm, LinearFormPower,
};
pub use matrix::DenseMatrix;
pub use poly::{is_squarefree, poly_gcd, BinaryPoly};
pub use strata::{
    construct_special_center, generic_splitting, stratum_codim, survey_generic, verify_equivalence, StratumSpec,
};

pub type QMatrix = DenseMatrix<Rationals>;
pub type FpMatrix = DenseMatrix<PrimeField>;
pub type QForm = BinaryForm<Rationals>;
pub type FpForm = BinaryForm<PrimeField>;
pub type QDualForm = DualForm<Rationals>;
pub type FpDualForm = DualForm<PrimeField>;
pub type QPoly = BinaryPoly<Rationals>;
pub type FpPoly = BinaryPoly<PrimeField>;
pub type QCenter = ProjectionCenter<Rationals>;
pub type FpCenter = ProjectionCenter<PrimeField>;
