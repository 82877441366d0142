//! Labeled multipartite states on small dense Hilbert spaces.
//!
//! Subsystems are tracked by string labels so that partial traces and
//! conditional entropies can be requested by name instead of by position.
//!
//! # Index convention
//!
//! Factor 0 is the most significant digit of a flat index: a state on
//! subsystems `(A, B, C)` with dimensions `(dA, dB, dC)` stores the
//! amplitude of `|a⟩|b⟩|c⟩` at flat index `(a·dB + b)·dC + c`. Every
//! reshuffle in this crate is an explicit permutation of these digits.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::tol;

/// Dimensions and labels of an ordered list of tensor factors.
///
/// The empty list is legal and describes the trivial (one-dimensional)
/// space; it shows up when a partial trace keeps nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemDims {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemDims {
    /// Build from `(label, dimension)` pairs, e.g. `&[("A", 2), ("B", 3)]`.
    pub fn new(pairs: &[(&str, usize)]) -> Result<Self> {
        let dims: Vec<usize> = pairs.iter().map(|&(_, d)| d).collect();
        let labels: Vec<String> = pairs.iter().map(|&(l, _)| l.to_string()).collect();
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::validation("subsystem dimensions must be positive"));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::labels("empty subsystem label"));
            }
            if labels[..i].contains(l) {
                return Err(Error::labels(format!("duplicate subsystem label {l:?}")));
            }
        }
        let total: usize = dims.iter().product();
        if total > tol::MAX_AMBIENT_DIM {
            return Err(Error::DimensionBudget {
                requested: total,
                cap: tol::MAX_AMBIENT_DIM,
            });
        }
        Ok(SubsystemDims { dims, labels })
    }

    /// All factors two-dimensional: `qubits(&["A", "B"])`.
    pub fn qubits(labels: &[&str]) -> Result<Self> {
        let pairs: Vec<(&str, usize)> = labels.iter().map(|&l| (l, 2)).collect();
        SubsystemDims::new(&pairs)
    }

    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    /// Product of all factor dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|s| s.as_str())
    }

    pub fn dim_of(&self, label: &str) -> Option<usize> {
        self.position(label).map(|i| self.dims[i])
    }

    fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Positions of `wanted` labels, rejecting unknowns and duplicates.
    pub(crate) fn positions(&self, wanted: &[&str]) -> Result<Vec<usize>> {
        let mut seen = Vec::with_capacity(wanted.len());
        for &w in wanted {
            let p = self
                .position(w)
                .ok_or_else(|| Error::labels(format!("unknown subsystem label {w:?}")))?;
            if seen.contains(&p) {
                return Err(Error::labels(format!("duplicate subsystem label {w:?}")));
            }
            seen.push(p);
        }
        Ok(seen)
    }

    /// Stride of each factor: `stride[k] = dims[k+1] * ... * dims[n-1]`.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    fn select(&self, positions: &[usize]) -> SubsystemDims {
        SubsystemDims {
            dims: positions.iter().map(|&p| self.dims[p]).collect(),
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    fn concat(&self, other: &SubsystemDims) -> Result<SubsystemDims> {
        let pairs: Vec<(&str, usize)> = self
            .labels
            .iter()
            .map(|s| s.as_str())
            .zip(self.dims.iter().copied())
            .chain(other.labels.iter().map(|s| s.as_str()).zip(other.dims.iter().copied()))
            .collect();
        SubsystemDims::new(&pairs)
    }
}

/// Offsets into the flat index contributed by a subset of factors.
///
/// For the factor subset at `positions`, returns one offset per joint value
/// of those factors (enumerated with the subset's own row-major order), so a
/// full flat index is the sum of the offsets of complementary subsets.
fn subset_offsets(dims: &SubsystemDims, positions: &[usize]) -> Vec<usize> {
    let strides = dims.strides();
    let sub_dims: Vec<usize> = positions.iter().map(|&p| dims.dims[p]).collect();
    let count: usize = sub_dims.iter().product();
    let mut offsets = vec![0usize; count];
    for (flat, offset) in offsets.iter_mut().enumerate() {
        let mut rest = flat;
        // decode `flat` into digits over sub_dims, least significant last
        for k in (0..sub_dims.len()).rev() {
            let digit = rest % sub_dims[k];
            rest /= sub_dims[k];
            *offset += digit * strides[positions[k]];
        }
    }
    offsets
}

/// A normalized pure state with labeled tensor factors.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: DVector<C64>,
    dims: SubsystemDims,
}

impl PureState {
    /// Validates length and normalization (within [`tol::EIGEN_TOL`]), then
    /// renormalizes to machine precision.
    pub fn new(amplitudes: DVector<C64>, dims: SubsystemDims) -> Result<Self> {
        if amplitudes.len() != dims.total_dim() {
            return Err(Error::validation(format!(
                "amplitude vector has length {}, subsystems give {}",
                amplitudes.len(),
                dims.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::EIGEN_TOL {
            return Err(Error::validation(format!(
                "state norm {norm} is not 1 within {:.0e}",
                tol::EIGEN_TOL
            )));
        }
        Ok(PureState {
            amplitudes: amplitudes / C64::new(norm, 0.0),
            dims,
        })
    }

    pub(crate) fn trusted(amplitudes: DVector<C64>, dims: SubsystemDims) -> Self {
        PureState { amplitudes, dims }
    }

    /// Maximally entangled state `Σ_i |i⟩|i⟩ / √d` on two `d`-dimensional
    /// factors with the given labels.
    pub fn maximally_entangled(label_a: &str, label_b: &str, d: usize) -> Result<Self> {
        let dims = SubsystemDims::new(&[(label_a, d), (label_b, d)])?;
        let mut v = DVector::<C64>::zeros(d * d);
        let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        for i in 0..d {
            v[i * d + i] = amp;
        }
        Ok(PureState::trusted(v, dims))
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    /// `|ψ⟩⟨ψ|` as a density operator (no re-validation needed).
    pub fn density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::trusted(m, self.dims.clone())
    }

    /// Tensor product; labels must stay unique across both factors.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let dims = self.dims.concat(&other.dims)?;
        let v = self.amplitudes.kronecker(&other.amplitudes);
        Ok(PureState::trusted(
            DVector::from_column_slice(v.as_slice()),
            dims,
        ))
    }

    /// Reorder tensor factors into `order` (a permutation of all labels).
    ///
    /// The amplitude of `|a⟩|b⟩...` is untouched; only its flat position
    /// changes, by re-encoding the index digits in the new factor order.
    pub fn permute(&self, order: &[&str]) -> Result<PureState> {
        let positions = self.dims.positions(order)?;
        if positions.len() != self.dims.factor_count() {
            return Err(Error::labels(
                "permutation must mention every subsystem exactly once".to_string(),
            ));
        }
        let new_dims = self.dims.select(&positions);
        let old_strides = self.dims.strides();
        let new_strides = new_dims.strides();
        let mut out = DVector::<C64>::zeros(self.amplitudes.len());
        for old_flat in 0..self.amplitudes.len() {
            // digit of factor p in the old index
            let mut new_flat = 0usize;
            for (k, &p) in positions.iter().enumerate() {
                let digit = (old_flat / old_strides[p]) % self.dims.dims[p];
                new_flat += digit * new_strides[k];
            }
            out[new_flat] = self.amplitudes[old_flat];
        }
        Ok(PureState::trusted(out, new_dims))
    }

    /// Rename subsystems without touching amplitudes.
    pub fn relabel(&self, from_to: &[(&str, &str)]) -> Result<PureState> {
        let mut labels = self.dims.labels.clone();
        for &(from, to) in from_to {
            let p = self
                .dims
                .position(from)
                .ok_or_else(|| Error::labels(format!("unknown subsystem label {from:?}")))?;
            labels[p] = to.to_string();
        }
        let pairs: Vec<(&str, usize)> = labels
            .iter()
            .map(|s| s.as_str())
            .zip(self.dims.dims.iter().copied())
            .collect();
        Ok(PureState::trusted(
            self.amplitudes.clone(),
            SubsystemDims::new(&pairs)?,
        ))
    }
}

/// A density operator with labeled tensor factors.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
    dims: SubsystemDims,
}

impl DensityOperator {
    /// Validates shape, Hermiticity, unit trace, and positivity, each
    /// within [`tol::EIGEN_TOL`].
    pub fn new(matrix: DMatrix<C64>, dims: SubsystemDims) -> Result<Self> {
        let d = dims.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::validation(format!(
                "matrix is {}x{}, subsystems give {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > tol::EIGEN_TOL {
            return Err(Error::validation(format!(
                "matrix is not Hermitian: ||M - M'|| = {herm:.3e}"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::EIGEN_TOL || trace.im.abs() > tol::EIGEN_TOL {
            return Err(Error::validation(format!(
                "trace {} is not 1 within {:.0e}",
                trace,
                tol::EIGEN_TOL
            )));
        }
        let min_ev = linalg::hermitian_eigenvalues(&matrix)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_ev < -tol::EIGEN_TOL {
            return Err(Error::validation(format!(
                "matrix has negative eigenvalue {min_ev:.3e}"
            )));
        }
        Ok(DensityOperator { matrix, dims })
    }

    /// Construction for internal pipelines whose outputs are Hermitian,
    /// trace-one, and positive by construction (partial traces, |ψ⟩⟨ψ|).
    pub(crate) fn trusted(matrix: DMatrix<C64>, dims: SubsystemDims) -> Self {
        DensityOperator { matrix, dims }
    }

    /// Maximally mixed state `I/d` on a single labeled factor.
    pub fn maximally_mixed(label: &str, d: usize) -> Result<Self> {
        let dims = SubsystemDims::new(&[(label, d)])?;
        let m = DMatrix::<C64>::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
        Ok(DensityOperator::trusted(m, dims))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    /// Tensor product; labels must stay unique across both factors.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let dims = self.dims.concat(&other.dims)?;
        Ok(DensityOperator::trusted(
            self.matrix.kronecker(&other.matrix),
            dims,
        ))
    }

    /// Rename subsystems without touching the matrix.
    pub fn relabel(&self, from_to: &[(&str, &str)]) -> Result<DensityOperator> {
        let mut labels = self.dims.labels.clone();
        for &(from, to) in from_to {
            let p = self
                .dims
                .position(from)
                .ok_or_else(|| Error::labels(format!("unknown subsystem label {from:?}")))?;
            labels[p] = to.to_string();
        }
        let pairs: Vec<(&str, usize)> = labels
            .iter()
            .map(|s| s.as_str())
            .zip(self.dims.dims.iter().copied())
            .collect();
        Ok(DensityOperator::trusted(
            self.matrix.clone(),
            SubsystemDims::new(&pairs)?,
        ))
    }
}

/// Trace out every subsystem not named in `keep`, preserving the original
/// relative order of the kept factors.
///
/// With kept positions `K` and traced positions `T`, the reduced matrix is
/// `out[i,j] = Σ_t ρ[base(i)+off(t), base(j)+off(t)]`, where `base`/`off`
/// re-embed kept and traced digits into the full flat index.
pub fn partial_trace(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    let keep_positions = {
        let mut p = rho.dims.positions(keep)?;
        p.sort_unstable();
        p
    };
    let traced_positions: Vec<usize> = (0..rho.dims.factor_count())
        .filter(|p| !keep_positions.contains(p))
        .collect();
    let kept_dims = rho.dims.select(&keep_positions);
    let base = subset_offsets(&rho.dims, &keep_positions);
    let off = subset_offsets(&rho.dims, &traced_positions);
    let dk = kept_dims.total_dim();
    let mut out = DMatrix::<C64>::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &off {
                acc += rho.matrix[(base[i] + t, base[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityOperator::trusted(out, kept_dims))
}

/// Purify `ρ` by appending a reference factor labeled `"R"`.
///
/// Eigendecomposition-based: `|ψ⟩ = Σ_r √λ_r |v_r⟩ ⊗ |r⟩_R`, eigenvalues
/// taken in descending order for determinism. The purifying dimension
/// always equals the full input dimension (rank rounded up), so callers
/// get a predictable shape.
pub fn purify(rho: &DensityOperator) -> Result<PureState> {
    if rho.dims.position("R").is_some() {
        return Err(Error::labels(
            "purify appends a factor labeled \"R\", which is already present".to_string(),
        ));
    }
    let d = rho.dims.total_dim();
    let (values, vectors) = linalg::hermitian_eigen(&rho.matrix);
    let mut amps = DVector::<C64>::zeros(d * d);
    for (r, &lam) in values.iter().enumerate() {
        let lam = if lam < 0.0 {
            if lam < -tol::EIGEN_TOL {
                return Err(Error::validation(format!(
                    "cannot purify: negative eigenvalue {lam:.3e}"
                )));
            }
            0.0
        } else {
            lam
        };
        let w = C64::new(lam.sqrt(), 0.0);
        for o in 0..d {
            // flat index over (original ⊗ R): original digit o, reference digit r
            amps[o * d + r] += w * vectors[(o, r)];
        }
    }
    let dims = rho.dims.concat(&SubsystemDims::new(&[("R", d)])?)?;
    // Renormalize away the clamping drift.
    PureState::new(amps, dims)
}
