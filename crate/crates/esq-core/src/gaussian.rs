//! Capacity bounds for phase-insensitive bosonic Gaussian channels.
//!
//! States are Gaussian states described by a mean vector and covariance
//! matrix over quadratures in interleaved order `(x1, p1, x2, p2, …)`,
//! normalized so the vacuum covariance is the identity. Entropies come
//! from symplectic eigenvalues through the bosonic entropy function `g`.
//!
//! The central construction is the pure-loss channel of transmissivity
//! `η`: a beamsplitter coupling the signal to a vacuum environment. A
//! second beamsplitter of transmissivity `η1` splits that environment in
//! two; discarding either half is a squashing channel and the two
//! conditional entropies it induces bound the two-way assisted
//! capacities. The split is optimal at the balanced point `η1 = ½` and,
//! as the input photon number grows, the bound converges to
//! `log2((1+η)/(1−η))`. General phase-insensitive channels reduce to the
//! same formula through a loss–amplification decomposition.

use nalgebra::DMatrix;

use crate::bound::BoundResult;
use crate::entropy::bosonic_g;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::tol;

/// The symplectic form on `n` modes in interleaved quadrature order:
/// block diagonal with `[[0, 1], [-1, 0]]` per mode.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// Symplectic matrix of a beamsplitter of transmissivity `eta` acting on
/// modes `i` and `j` (0-based) of an `n_modes`-mode system:
///
/// ```text
/// mode i  ←  √η · i + √(1−η) · j
/// mode j  ← −√(1−η) · i + √η · j
/// ```
///
/// acting identically on `x` and `p`.
pub fn beamsplitter_symplectic(eta: f64, n_modes: usize, modes: (usize, usize)) -> Result<DMatrix<f64>> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::validation(format!(
            "beamsplitter transmissivity {eta} outside [0, 1]"
        )));
    }
    let (i, j) = modes;
    if i >= n_modes || j >= n_modes || i == j {
        return Err(Error::validation(format!(
            "beamsplitter modes ({i}, {j}) invalid for {n_modes} modes"
        )));
    }
    let t = eta.sqrt();
    let r = (1.0 - eta).sqrt();
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for q in 0..2 {
        let (a, b) = (2 * i + q, 2 * j + q);
        s[(a, a)] = t;
        s[(a, b)] = r;
        s[(b, a)] = -r;
        s[(b, b)] = t;
    }
    Ok(s)
}

/// Symplectic eigenvalues of a positive-definite covariance matrix,
/// sorted descending. Computed from the Hermitian matrix
/// `i·Γ^{1/2}·Ω·Γ^{1/2}`, whose spectrum is `±ν_k`; this stays in
/// Hermitian eigensolvers throughout. Values that dip below 1 by less
/// than [`tol::SYMPLECTIC_EIGEN_CLAMP`] are clamped to 1; larger dips are
/// an error (not a physical state).
pub fn symplectic_eigenvalues(covariance: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = covariance.nrows();
    if dim == 0 || dim % 2 != 0 || covariance.ncols() != dim {
        return Err(Error::validation(format!(
            "covariance must be square and even-dimensional, got {}x{}",
            dim,
            covariance.ncols()
        )));
    }
    if (covariance - covariance.transpose()).norm() > tol::SYMPLECTIC_TOL {
        return Err(Error::validation("covariance matrix is not symmetric"));
    }
    let n = dim / 2;
    let sym = covariance.clone().symmetric_eigen();
    if sym.eigenvalues.iter().any(|&e| e <= 0.0) {
        return Err(Error::validation(
            "covariance matrix is not positive definite",
        ));
    }
    // Γ^{1/2} from the spectral decomposition
    let mut root = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let v = sym.eigenvectors.column(k);
        root += sym.eigenvalues[k].sqrt() * &v * v.transpose();
    }
    let h_real = &root * omega(n) * &root;
    // i·(L Ω L) is Hermitian because L Ω L is real antisymmetric
    let herm = DMatrix::from_fn(dim, dim, |r, c| C64::new(0.0, h_real[(r, c)]));
    let mut magnitudes: Vec<f64> = crate::linalg::hermitian_eigenvalues(&herm)
        .into_iter()
        .map(f64::abs)
        .collect();
    magnitudes.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // the spectrum of i·ΓΩ is ±ν for each symplectic eigenvalue ν, so the
    // sorted magnitudes come in adjacent pairs; average each pair
    let mut eigs: Vec<f64> = (0..n)
        .map(|k| 0.5 * (magnitudes[2 * k] + magnitudes[2 * k + 1]))
        .collect();
    for nu in eigs.iter_mut() {
        if *nu < 1.0 {
            if 1.0 - *nu > tol::SYMPLECTIC_EIGEN_CLAMP {
                return Err(Error::validation(format!(
                    "symplectic eigenvalue {nu} below 1: not a quantum covariance matrix"
                )));
            }
            *nu = 1.0;
        }
    }
    Ok(eigs)
}

/// Von Neumann entropy of a Gaussian state with the given covariance
/// matrix: `Σ g((ν_k − 1)/2)` over symplectic eigenvalues.
pub fn gaussian_entropy(covariance: &DMatrix<f64>) -> Result<f64> {
    let mut total = 0.0;
    for nu in symplectic_eigenvalues(covariance)? {
        total += bosonic_g((nu - 1.0) / 2.0)?;
    }
    Ok(total)
}

/// A Gaussian state: mean vector and covariance matrix in interleaved
/// quadrature order, vacuum normalized to identity covariance.
#[derive(Debug, Clone)]
pub struct GaussianState {
    mean: nalgebra::DVector<f64>,
    covariance: DMatrix<f64>,
}

impl GaussianState {
    pub fn new(mean: nalgebra::DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        if mean.len() != covariance.nrows() {
            return Err(Error::validation(format!(
                "mean length {} does not match covariance dimension {}",
                mean.len(),
                covariance.nrows()
            )));
        }
        // validates shape, symmetry, and the uncertainty bound ν ≥ 1
        symplectic_eigenvalues(&covariance)?;
        Ok(GaussianState { mean, covariance })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        GaussianState {
            mean: nalgebra::DVector::zeros(2 * n_modes),
            covariance: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &nalgebra::DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    /// Apply a symplectic transformation: `Γ → SΓSᵀ`, `mean → S·mean`.
    /// `S` must satisfy `SΩSᵀ = Ω` within [`tol::SYMPLECTIC_TOL`].
    pub fn apply_symplectic(&self, s: &DMatrix<f64>) -> Result<GaussianState> {
        let dim = self.mean.len();
        if s.nrows() != dim || s.ncols() != dim {
            return Err(Error::validation(format!(
                "symplectic matrix is {}x{}, state has dimension {dim}",
                s.nrows(),
                s.ncols()
            )));
        }
        let om = omega(dim / 2);
        if (s * &om * s.transpose() - &om).norm() > tol::SYMPLECTIC_TOL {
            return Err(Error::validation("matrix does not preserve the symplectic form"));
        }
        Ok(GaussianState {
            mean: s * &self.mean,
            covariance: s * &self.covariance * s.transpose(),
        })
    }

    /// Restrict to a subset of modes (0-based, distinct), in the order
    /// given.
    pub fn reduce(&self, modes: &[usize]) -> Result<GaussianState> {
        let n = self.n_modes();
        let mut seen = vec![false; n];
        for &m in modes {
            if m >= n {
                return Err(Error::validation(format!(
                    "mode {m} out of range for {n}-mode state"
                )));
            }
            if seen[m] {
                return Err(Error::validation(format!("mode {m} listed twice")));
            }
            seen[m] = true;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = nalgebra::DVector::from_fn(idx.len(), |r, _| self.mean[idx[r]]);
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.covariance[(idx[r], idx[c])]);
        Ok(GaussianState {
            mean,
            covariance: cov,
        })
    }

    pub fn entropy(&self) -> Result<f64> {
        gaussian_entropy(&self.covariance)
    }
}

/// Covariance of one arm of a two-mode squeezed vacuum with mean photon
/// number `ns`: a thermal state, `diag(1 + 2ns)`.
pub fn tmsv_reduced_covariance(ns: f64) -> Result<DMatrix<f64>> {
    check_photon_number(ns)?;
    Ok(DMatrix::identity(2, 2) * (1.0 + 2.0 * ns))
}

/// Covariance of the full two-mode squeezed vacuum with mean photon
/// number `ns` per arm.
pub fn two_mode_squeezed_covariance(ns: f64) -> Result<DMatrix<f64>> {
    check_photon_number(ns)?;
    let m = 1.0 + 2.0 * ns;
    let s = 2.0 * (ns * (ns + 1.0)).sqrt();
    let mut cov = DMatrix::identity(4, 4) * m;
    cov[(0, 2)] = s;
    cov[(2, 0)] = s;
    cov[(1, 3)] = -s;
    cov[(3, 1)] = -s;
    Ok(cov)
}

/// Three-mode state `(B, E', F)` after sending one arm of a TMSV with
/// photon number `ns` through a pure-loss channel of transmissivity
/// `eta`, then splitting the leaked environment mode on a beamsplitter of
/// transmissivity `eta1`. The other TMSV arm is traced out, so mode 0
/// starts thermal with covariance `diag(1 + 2ns)`.
pub fn pure_loss_state(eta: f64, eta1: f64, ns: f64) -> Result<GaussianState> {
    check_photon_number(ns)?;
    let mut cov = DMatrix::identity(6, 6);
    let thermal = tmsv_reduced_covariance(ns)?;
    cov.view_mut((0, 0), (2, 2)).copy_from(&thermal);
    let input = GaussianState {
        mean: nalgebra::DVector::zeros(6),
        covariance: cov,
    };
    let loss = beamsplitter_symplectic(eta, 3, (0, 1))?;
    let split = beamsplitter_symplectic(eta1, 3, (1, 2))?;
    input.apply_symplectic(&loss)?.apply_symplectic(&split)
}

/// Entropies `[H(BE'), H(BF), H(E'), H(F)]` of the pure-loss squashing
/// construction, computed through the covariance pipeline.
pub fn pure_loss_entropies(eta: f64, eta1: f64, ns: f64) -> Result<[f64; 4]> {
    let state = pure_loss_state(eta, eta1, ns)?;
    Ok([
        state.reduce(&[0, 1])?.entropy()?,
        state.reduce(&[0, 2])?.entropy()?,
        state.reduce(&[1])?.entropy()?,
        state.reduce(&[2])?.entropy()?,
    ])
}

/// Upper bound at finite input photon number `ns` and split `eta1`, in
/// closed form:
///
/// ```text
/// ½[g((1−η1+ηη1)ns) + g((η1+η(1−η1))ns) − g(η1(1−η)ns) − g((1−η1)(1−η)ns)]
/// ```
pub fn pure_loss_bound_finite(eta: f64, eta1: f64, ns: f64) -> Result<f64> {
    check_transmissivity(eta)?;
    if !(0.0..=1.0).contains(&eta1) {
        return Err(Error::validation(format!(
            "environment split {eta1} outside [0, 1]"
        )));
    }
    check_photon_number(ns)?;
    let be = bosonic_g((1.0 - eta1 + eta * eta1) * ns)?;
    let bf = bosonic_g((eta1 + eta * (1.0 - eta1)) * ns)?;
    let e = bosonic_g(eta1 * (1.0 - eta) * ns)?;
    let f = bosonic_g((1.0 - eta1) * (1.0 - eta) * ns)?;
    Ok(0.5 * (be + bf - e - f))
}

/// Upper bound at the optimal balanced split `eta1 = ½`:
/// `g((1+η)ns/2) − g((1−η)ns/2)`.
pub fn pure_loss_bound(eta: f64, ns: f64) -> Result<f64> {
    check_transmissivity(eta)?;
    check_photon_number(ns)?;
    Ok(bosonic_g((1.0 + eta) * ns / 2.0)? - bosonic_g((1.0 - eta) * ns / 2.0)?)
}

/// Unconstrained-energy limit of [`pure_loss_bound`]:
/// `log2((1+η)/(1−η))`, infinite at `η = 1`.
pub fn pure_loss_bound_limit(eta: f64) -> Result<f64> {
    check_transmissivity(eta)?;
    if eta == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((1.0 + eta) / (1.0 - eta)).log2())
}

/// Reverse coherent information of the pure-loss channel in the
/// unconstrained-energy limit: `−log2(1−η)`, a lower bound on the
/// two-way assisted capacities. Infinite at `η = 1`.
pub fn pure_loss_lower_bound(eta: f64) -> Result<f64> {
    check_transmissivity(eta)?;
    if eta == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-(1.0 - eta).log2())
}

/// A phase-insensitive single-mode Gaussian channel, parametrized by its
/// transmissivity/gain `tau` and additive noise `nu` acting on covariance
/// as `Γ → τΓ + νI`. Complete positivity requires `ν ≥ |τ − 1|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInsensitiveParams {
    tau: f64,
    nu: f64,
}

impl PhaseInsensitiveParams {
    pub fn new(tau: f64, nu: f64) -> Result<Self> {
        if tau < 0.0 {
            return Err(Error::validation(format!("tau must be nonnegative, got {tau}")));
        }
        if nu < (tau - 1.0).abs() - 1e-12 {
            return Err(Error::validation(format!(
                "noise nu = {nu} below complete-positivity floor |tau - 1| = {}",
                (tau - 1.0).abs()
            )));
        }
        Ok(PhaseInsensitiveParams { tau, nu })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Thermal channel: transmissivity `eta`, environment photon number
    /// `nb`. Covariance action `Γ → ηΓ + (1−η)(1+2nb)I`.
    pub fn thermal(eta: f64, nb: f64) -> Result<Self> {
        check_transmissivity(eta)?;
        check_photon_number(nb)?;
        PhaseInsensitiveParams::new(eta, (1.0 - eta) * (1.0 + 2.0 * nb))
    }

    /// Additive-noise channel: `Γ → Γ + 2n̄·I` with `n̄ > 0`.
    pub fn additive_noise(nbar: f64) -> Result<Self> {
        if nbar <= 0.0 {
            return Err(Error::validation(format!(
                "additive noise variance must be positive, got {nbar}"
            )));
        }
        PhaseInsensitiveParams::new(1.0, 2.0 * nbar)
    }

    /// Amplifier of gain `kappa ≥ 1` with environment photon number `nb`.
    pub fn amplifier(kappa: f64, nb: f64) -> Result<Self> {
        if kappa < 1.0 {
            return Err(Error::validation(format!(
                "amplifier gain must be at least 1, got {kappa}"
            )));
        }
        check_photon_number(nb)?;
        PhaseInsensitiveParams::new(kappa, (kappa - 1.0) * (1.0 + 2.0 * nb))
    }
}

/// A pure-loss stage followed by a quantum-limited amplifier; every
/// phase-insensitive channel factors this way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossAmpDecomposition {
    /// Transmissivity of the loss stage, in `[0, 1]`.
    pub transmissivity: f64,
    /// Gain of the amplifier stage, at least 1.
    pub gain: f64,
}

/// Factor a phase-insensitive channel into loss followed by
/// amplification: `T = 2τ/(τ+ν+1)`, `G = (τ+ν+1)/2`. Complete
/// positivity guarantees `T ∈ [0, 1]` and `G ≥ 1`, so `τ = TG` and
/// `ν = (1−T)G + G − 1`.
pub fn decompose_phase_insensitive(params: &PhaseInsensitiveParams) -> LossAmpDecomposition {
    let denom = params.tau() + params.nu() + 1.0;
    LossAmpDecomposition {
        transmissivity: 2.0 * params.tau() / denom,
        gain: denom / 2.0,
    }
}

/// Upper bound for a phase-insensitive channel in the
/// unconstrained-energy limit: the pure-loss bound of the loss stage of
/// its decomposition, `log2((1+T)/(1−T))`. Infinite for a noiseless
/// identity (`T = 1`).
pub fn phase_insensitive_bound(params: &PhaseInsensitiveParams) -> BoundResult {
    let decomp = decompose_phase_insensitive(params);
    let t = decomp.transmissivity;
    let value = if t >= 1.0 {
        f64::INFINITY
    } else {
        ((1.0 + t) / (1.0 - t)).log2()
    };
    BoundResult::closed_form(
        "phase_insensitive",
        value,
        &[
            ("tau", params.tau()),
            ("nu", params.nu()),
            ("transmissivity", decomp.transmissivity),
            ("gain", decomp.gain),
        ],
    )
}

/// Upper bound for the thermal channel of transmissivity `eta` and
/// environment photon number `nb`:
/// `log2((m+η)/(m−η))` with `m = (1−η)nb + 1`. Reduces exactly to the
/// pure-loss limit at `nb = 0`; infinite at `η = 1`.
pub fn thermal_bound(eta: f64, nb: f64) -> Result<f64> {
    check_transmissivity(eta)?;
    check_photon_number(nb)?;
    if eta == 1.0 {
        return Ok(f64::INFINITY);
    }
    let m = (1.0 - eta) * nb + 1.0;
    Ok(((m + eta) / (m - eta)).log2())
}

/// Upper bound for the additive-noise channel with noise variance
/// `nbar ≥ 0`: `log2((n̄+2)/n̄)`, infinite at `n̄ = 0` (noiseless identity).
pub fn additive_noise_bound(nbar: f64) -> Result<f64> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::validation(format!(
            "additive noise variance must be nonnegative, got {nbar}"
        )));
    }
    if nbar == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((nbar + 2.0) / nbar).log2())
}

/// Scan of the finite-energy pure-loss bound over the environment split
/// `η1`, recording the symmetry about `η1 = ½` and discrete convexity of
/// the scanned values.
#[derive(Debug, Clone)]
pub struct ConvexityReport {
    /// Interior grid `η1 = k/(grid+1)`, `k = 1..=grid`.
    pub eta1_grid: Vec<f64>,
    /// Bound values on the grid.
    pub values: Vec<f64>,
    /// Largest `|f(η1) − f(1−η1)|` over the grid.
    pub max_symmetry_defect: f64,
    /// Smallest second difference `f_{k−1} − 2f_k + f_{k+1}`.
    pub min_second_difference: f64,
    /// Index of the grid minimum.
    pub argmin_index: usize,
    /// Symmetry defect within `1e-10`.
    pub symmetric: bool,
    /// All second differences at least `−1e-8`.
    pub convex: bool,
}

/// Evaluate [`pure_loss_bound_finite`] on an interior grid of splits and
/// check the two structural properties that make `η1 = ½` optimal.
pub fn convexity_report(eta: f64, ns: f64, grid_size: usize) -> Result<ConvexityReport> {
    if grid_size < 3 {
        return Err(Error::validation("convexity scan needs at least 3 grid points"));
    }
    let eta1_grid: Vec<f64> = (1..=grid_size)
        .map(|k| k as f64 / (grid_size + 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(grid_size);
    for &e1 in &eta1_grid {
        values.push(pure_loss_bound_finite(eta, e1, ns)?);
    }
    let mut max_symmetry_defect = 0.0f64;
    for k in 0..grid_size {
        let mirror = grid_size - 1 - k;
        max_symmetry_defect = max_symmetry_defect.max((values[k] - values[mirror]).abs());
    }
    let mut min_second_difference = f64::INFINITY;
    for k in 1..grid_size - 1 {
        let d2 = values[k - 1] - 2.0 * values[k] + values[k + 1];
        min_second_difference = min_second_difference.min(d2);
    }
    let argmin_index = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    Ok(ConvexityReport {
        symmetric: max_symmetry_defect <= 1e-10,
        convex: min_second_difference >= -1e-8,
        eta1_grid,
        values,
        max_symmetry_defect,
        min_second_difference,
        argmin_index,
    })
}

fn check_transmissivity(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::validation(format!(
            "transmissivity {eta} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_photon_number(n: f64) -> Result<()> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::validation(format!(
            "photon number must be finite and nonnegative, got {n}"
        )));
    }
    Ok(())
}
