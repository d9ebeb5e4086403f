//! Trend filters as matrix operators.
//!
//! A symmetric trend filter applied to a finite series becomes an `n x n`
//! smoother matrix `S` once boundary rows are chosen. This crate builds
//! those matrices, compares them with the circulant and τ₁₁ operators of
//! the same filter, bounds their spectra, and designs new smoothers by
//! truncating the τ₁₁ spectrum.
//!
//! ```
//! use trendspectra::{build_smoother, symmetric_filter, BoundaryPolicy, LocalPolySpec};
//!
//! let sym = symmetric_filter(&LocalPolySpec::henderson13()).unwrap();
//! let s = build_smoother(&sym, &BoundaryPolicy::lpr(LocalPolySpec::henderson13()), 40).unwrap();
//! assert!(s.row_sum_defect() < 1e-12);
//! ```

pub mod algebra;
pub mod design;
pub mod error;
pub mod filters;
pub mod linalg;
pub mod smoother;
pub mod spectral;

pub use algebra::{
    circulant_eigenvalues, circulant_matrix, tau_eigenvalues, tau_eigenvectors, tau_matrix,
    transfer_function_value, CirculantOperator, TauOperator,
};
pub use design::{
    bias_discrepancy, cutoff_from_period, designed_smoother, latent_decomposition, select_cutoff,
    truncated_operator, variance_diagnostics, CutoffDesign, CutoffMode, DesignedSmoother,
    VarianceDiagnostics,
};
pub use error::{Error, Result};
pub use filters::{
    asymmetric_lpr_filter, kernel_weights, mmsre_filter, symmetric_filter, AsymmetricFilter,
    KernelKind, KernelSpec, LocalPolySpec, MmsreFamily, MmsreSpec, SymmetricFilter,
    MUSGRAVE_NOISE_RATIO,
};
pub use linalg::{Matrix, Vector};
pub use smoother::{
    apply, build_smoother, polynomial_reproduction_residual, BoundaryFill, BoundaryPolicy,
    BoundaryRule, ReplaceScope, SmootherMatrix, TimeSeries,
};
pub use spectral::{
    eigenvector_perturbation, general_eigenvalues, perturbation_report, spectral_norm,
    symmetric_eigen, Algebra, EigenSystem, PerturbationReport,
};
