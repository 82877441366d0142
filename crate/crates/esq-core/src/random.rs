//! Seeded random states, unitaries, and channels for estimator restarts
//! and randomized consistency tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::Result;
use crate::linalg::C64;
use crate::state::{DensityOperator, PureState, SubsystemDims};
use crate::FiniteChannel;

pub(crate) fn gaussian_pair(rng: &mut impl Rng) -> (f64, f64) {
    // Box-Muller; avoids pulling in a distributions crate for one shape.
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let (re, im) = gaussian_pair(rng);
        C64::new(re, im)
    })
}

/// Haar-distributed `d × d` unitary via QR of a Ginibre matrix with the
/// phase convention fixed from the diagonal of R.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> DMatrix<C64> {
    let qr = ginibre(rng, d, d).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / C64::new(rjj.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random pure state on the given subsystems.
pub fn random_pure_state(rng: &mut impl Rng, dims: SubsystemDims) -> PureState {
    let d = dims.total_dim();
    let mut v = DVector::from_fn(d, |_, _| {
        let (re, im) = gaussian_pair(rng);
        C64::new(re, im)
    });
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    PureState::new(v, dims).expect("normalized by construction")
}

/// Random full-rank density operator (Hilbert-Schmidt-style: `GG†/tr GG†`).
pub fn random_density_operator(rng: &mut impl Rng, dims: SubsystemDims) -> DensityOperator {
    let d = dims.total_dim();
    let g = ginibre(rng, d, d);
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    DensityOperator::new(m, dims).expect("positive and normalized by construction")
}

/// Random channel with `n_kraus` Kraus operators, sampled by slicing a
/// Haar-random isometry `in_dim → out_dim · n_kraus` into blocks.
pub fn random_channel(
    rng: &mut impl Rng,
    in_dim: usize,
    out_dim: usize,
    n_kraus: usize,
) -> Result<FiniteChannel> {
    let big = out_dim * n_kraus;
    let u = random_unitary(rng, big.max(in_dim));
    // first `in_dim` columns of a Haar unitary form a Haar isometry
    let v = u.columns(0, in_dim).into_owned();
    let kraus: Vec<DMatrix<C64>> = (0..n_kraus)
        .map(|k| {
            DMatrix::from_fn(out_dim, in_dim, |b, a| v[(b * n_kraus + k, a)])
        })
        .collect();
    FiniteChannel::new(kraus)
}
