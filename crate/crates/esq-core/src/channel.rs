//! Finite-dimensional channels in Kraus form and their isometric extensions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::state::{PureState, SubsystemDims};
use crate::tol;

/// A completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone)]
pub struct FiniteChannel {
    kraus: Vec<DMatrix<C64>>,
    in_dim: usize,
    out_dim: usize,
}

impl FiniteChannel {
    /// Validates uniform shapes and the completeness relation
    /// `Σ K† K = I` within [`tol::KRAUS_CLOSURE_TOL`] (Frobenius norm).
    pub fn new(kraus: Vec<DMatrix<C64>>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::validation("channel needs at least one Kraus operator"))?;
        let (out_dim, in_dim) = (first.nrows(), first.ncols());
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::validation("Kraus operators must be non-empty"));
        }
        if kraus.iter().any(|k| k.nrows() != out_dim || k.ncols() != in_dim) {
            return Err(Error::validation("Kraus operators must share one shape"));
        }
        let mut closure = DMatrix::<C64>::zeros(in_dim, in_dim);
        for k in &kraus {
            closure += k.adjoint() * k;
        }
        let deviation = (closure - DMatrix::<C64>::identity(in_dim, in_dim)).norm();
        if deviation > tol::KRAUS_CLOSURE_TOL {
            return Err(Error::KrausClosure { deviation });
        }
        Ok(FiniteChannel {
            kraus,
            in_dim,
            out_dim,
        })
    }

    /// The identity channel on a `d`-dimensional system (one Kraus operator).
    pub fn identity(d: usize) -> Result<Self> {
        FiniteChannel::new(vec![DMatrix::<C64>::identity(d, d)])
    }

    pub fn kraus(&self) -> &[DMatrix<C64>] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Environment dimension of the canonical isometric extension: one
    /// basis direction per Kraus operator.
    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    /// Apply the channel to a raw matrix: `Σ K ρ K†`.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::<C64>::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// Tensor product of two channels. The Kraus family is the set of
    /// products `K_i ⊗ L_j`, ordered with `i` as the slow index so the
    /// combined environment basis is `|i⟩|j⟩ ↦ i·env_other + j`.
    pub fn tensor(&self, other: &FiniteChannel) -> Result<FiniteChannel> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for ki in &self.kraus {
            for lj in &other.kraus {
                kraus.push(ki.kronecker(lj));
            }
        }
        FiniteChannel::new(kraus)
    }
}

/// An isometry between labeled tensor-product spaces, `V† V = I`.
#[derive(Debug, Clone)]
pub struct IsometryMatrix {
    matrix: DMatrix<C64>,
    input_dims: SubsystemDims,
    output_dims: SubsystemDims,
}

impl IsometryMatrix {
    /// Validates shape against the labeled dimensions and `V† V = I`
    /// within [`tol::ISOMETRY_TOL`].
    pub fn new(
        matrix: DMatrix<C64>,
        input_dims: SubsystemDims,
        output_dims: SubsystemDims,
    ) -> Result<Self> {
        if matrix.ncols() != input_dims.total_dim() || matrix.nrows() != output_dims.total_dim() {
            return Err(Error::validation(format!(
                "isometry is {}x{}, labeled dims give {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                output_dims.total_dim(),
                input_dims.total_dim()
            )));
        }
        if matrix.nrows() < matrix.ncols() {
            return Err(Error::validation(
                "isometry cannot shrink dimension".to_string(),
            ));
        }
        let defect = linalg::isometry_defect(&matrix);
        if defect > tol::ISOMETRY_TOL {
            return Err(Error::validation(format!(
                "columns are not orthonormal: ||V'V - I|| = {defect:.3e}"
            )));
        }
        Ok(IsometryMatrix {
            matrix,
            input_dims,
            output_dims,
        })
    }

    pub(crate) fn trusted(
        matrix: DMatrix<C64>,
        input_dims: SubsystemDims,
        output_dims: SubsystemDims,
    ) -> Self {
        IsometryMatrix {
            matrix,
            input_dims,
            output_dims,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn input_dims(&self) -> &SubsystemDims {
        &self.input_dims
    }

    pub fn output_dims(&self) -> &SubsystemDims {
        &self.output_dims
    }

    /// Apply to the trailing factors of `psi`, which must match this
    /// isometry's input dimensions; they are replaced by the output factors.
    ///
    /// Viewing the amplitudes as a (leading × input) matrix `Ψ` — leading
    /// digits index rows — the result is `Ψ Vᵀ` flattened back, i.e.
    /// `out[l, o] = Σ_i V[o, i] ψ[l, i]`.
    pub fn apply_to_suffix(&self, psi: &PureState) -> Result<PureState> {
        let psi_dims = psi.dims();
        let n_in = self.input_dims.factor_count();
        let n_psi = psi_dims.factor_count();
        if n_in > n_psi {
            return Err(Error::validation(
                "state has fewer factors than the isometry input".to_string(),
            ));
        }
        let lead_count = n_psi - n_in;
        let suffix: Vec<usize> = psi_dims.dims()[lead_count..].to_vec();
        if suffix != self.input_dims.dims() {
            return Err(Error::validation(format!(
                "trailing factor dims {:?} do not match isometry input {:?}",
                suffix,
                self.input_dims.dims()
            )));
        }
        let lead_pairs: Vec<(&str, usize)> = psi_dims
            .labels()
            .zip(psi_dims.dims().iter().copied())
            .take(lead_count)
            .collect();
        let out_pairs: Vec<(&str, usize)> = lead_pairs
            .into_iter()
            .chain(
                self.output_dims
                    .labels()
                    .zip(self.output_dims.dims().iter().copied()),
            )
            .collect();
        let new_dims = SubsystemDims::new(&out_pairs)?;

        let d_in = self.input_dims.total_dim();
        let d_out = self.output_dims.total_dim();
        let d_lead = psi.amplitudes().len() / d_in;
        let mut out = DVector::<C64>::zeros(d_lead * d_out);
        for l in 0..d_lead {
            for o in 0..d_out {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..d_in {
                    acc += self.matrix[(o, i)] * psi.amplitudes()[l * d_in + i];
                }
                out[l * d_out + o] = acc;
            }
        }
        Ok(PureState::trusted(out, new_dims))
    }
}

/// Canonical isometric extension of a channel: `V|ψ⟩ = Σ_k (K_k|ψ⟩) ⊗ |k⟩_E`.
///
/// Input factor is labeled `"A"`, outputs `("B", out_dim)` then
/// `("E", env_dim)`; the entry layout is `V[b·env + k, a] = K_k[b, a]`.
pub fn kraus_to_isometry(channel: &FiniteChannel) -> IsometryMatrix {
    let env = channel.env_dim();
    let (din, dout) = (channel.in_dim(), channel.out_dim());
    let mut v = DMatrix::<C64>::zeros(dout * env, din);
    for (k, kraus) in channel.kraus().iter().enumerate() {
        for b in 0..dout {
            for a in 0..din {
                v[(b * env + k, a)] = kraus[(b, a)];
            }
        }
    }
    let input_dims = SubsystemDims::new(&[("A", din)]).expect("valid channel dims");
    let output_dims =
        SubsystemDims::new(&[("B", dout), ("E", env)]).expect("valid channel dims");
    // Completeness of the Kraus family was already checked at 1e-9, which
    // can exceed the stricter isometry tolerance; the matrix is exactly as
    // orthonormal as the Kraus family, so no second check is needed.
    IsometryMatrix::trusted(v, input_dims, output_dims)
}
