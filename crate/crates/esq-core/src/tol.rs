//! Named numerical tolerances used across the library.
//!
//! Every comparison against a tolerance in this crate goes through one of
//! these constants, so the contract a caller gets is visible in one place.

/// Hermiticity, trace, and eigenvalue checks on density operators.
/// Eigenvalues in `[-EIGEN_TOL, 0)` are clamped to zero before entropies
/// are taken; anything more negative is rejected.
pub const EIGEN_TOL: f64 = 1e-9;

/// Probability vectors fed to the Pauli closed forms must sum to 1 this
/// tightly. Deliberately much stricter than [`EIGEN_TOL`]: these are caller
/// inputs, not the output of a numerical pipeline.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Deviation of `V† V` from the identity tolerated when accepting an
/// isometry (decoded squashers, explicitly constructed extensions).
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Frobenius deviation of `Σ K† K` from the identity tolerated when
/// accepting a Kraus family. Looser than [`ISOMETRY_TOL`] because channel
/// descriptions often arrive from files with rounded entries.
pub const KRAUS_CLOSURE_TOL: f64 = 1e-9;

/// Deviation of `S Ω Sᵀ` from `Ω` tolerated by [`crate::gaussian::apply_symplectic`].
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Symplectic eigenvalues below `1` by less than this are clamped to `1`
/// (pure-mode numerical noise); larger violations are errors.
pub const SYMPLECTIC_EIGEN_CLAMP: f64 = 1e-9;

/// `g(x)` returns exactly `0` for `x` below this threshold, so vacuum
/// modes contribute no spurious entropy.
pub const G_ZERO_THRESHOLD: f64 = 1e-12;

/// Residual column norm below which Gram–Schmidt declares the raw squasher
/// parametrization rank-deficient and asks the caller to re-randomize.
pub const RANK_TOL: f64 = 1e-9;

/// Largest ambient Hilbert-space dimension the dense routines accept.
pub const MAX_AMBIENT_DIM: usize = 64;
