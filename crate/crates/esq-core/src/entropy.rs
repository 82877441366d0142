//! Entropy primitives. Everything is in bits (log base 2).

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{partial_trace, DensityOperator};
use crate::tol;

/// Shannon entropy `H(p) = -Σ p_i log2 p_i` of a probability vector.
///
/// Entries in `[-EIGEN_TOL, 0)` are clamped to zero and the vector must sum
/// to 1 within [`tol::EIGEN_TOL`]; this is the tolerance regime of spectra
/// coming out of eigendecompositions.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut h = 0.0;
    for &p in probs {
        let p = if p < 0.0 {
            if p < -tol::EIGEN_TOL {
                return Err(Error::validation(format!(
                    "negative probability {p:.3e}"
                )));
            }
            0.0
        } else {
            p
        };
        sum += p;
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    if (sum - 1.0).abs() > tol::EIGEN_TOL {
        return Err(Error::validation(format!(
            "probabilities sum to {sum}, not 1 within {:.0e}",
            tol::EIGEN_TOL
        )));
    }
    Ok(h)
}

/// Binary entropy `h2(p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-tol::EIGEN_TOL..=1.0 + tol::EIGEN_TOL).contains(&p) {
        return Err(Error::validation(format!("binary entropy argument {p} outside [0, 1]")));
    }
    let p = p.clamp(0.0, 1.0);
    shannon_entropy(&[p, 1.0 - p])
}

/// Entropy of a thermal bosonic mode with mean photon number `x`:
/// `g(x) = (x+1) log2(x+1) - x log2 x`, with `g(0) = 0`.
///
/// Values below [`tol::G_ZERO_THRESHOLD`] return exactly 0 so vacuum modes
/// contribute nothing; negative input beyond that noise floor is an error.
pub fn bosonic_g(x: f64) -> Result<f64> {
    if x < -tol::G_ZERO_THRESHOLD {
        return Err(Error::validation(format!(
            "mean photon number {x} is negative"
        )));
    }
    if x < tol::G_ZERO_THRESHOLD {
        return Ok(0.0);
    }
    Ok((x + 1.0) * (x + 1.0).log2() - x * x.log2())
}

/// Von Neumann entropy `S(ρ) = -tr ρ log2 ρ` via Hermitian eigendecomposition.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let spectrum = linalg::hermitian_eigenvalues(rho.matrix());
    shannon_entropy(&spectrum)
}

/// Conditional entropy `H(target | given) = H(target ∪ given) - H(given)`.
///
/// The two label sets must be disjoint. `given` may be empty, in which case
/// this reduces to the marginal entropy of `target`.
pub fn conditional_entropy(
    rho: &DensityOperator,
    target: &[&str],
    given: &[&str],
) -> Result<f64> {
    check_disjoint(&[target, given])?;
    let joint: Vec<&str> = target.iter().chain(given.iter()).copied().collect();
    let h_joint = von_neumann_entropy(&partial_trace(rho, &joint)?)?;
    let h_given = von_neumann_entropy(&partial_trace(rho, given)?)?;
    Ok(h_joint - h_given)
}

/// Conditional mutual information
/// `I(a; b | c) = H(a ∪ c) + H(b ∪ c) - H(c) - H(a ∪ b ∪ c)`.
///
/// Nonnegative for every state (strong subadditivity), up to eigensolver
/// noise. `c` may be empty, giving the plain mutual information.
pub fn conditional_mutual_information(
    rho: &DensityOperator,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    check_disjoint(&[a, b, c])?;
    let ac: Vec<&str> = a.iter().chain(c.iter()).copied().collect();
    let bc: Vec<&str> = b.iter().chain(c.iter()).copied().collect();
    let abc: Vec<&str> = a.iter().chain(b.iter()).chain(c.iter()).copied().collect();
    let h_ac = von_neumann_entropy(&partial_trace(rho, &ac)?)?;
    let h_bc = von_neumann_entropy(&partial_trace(rho, &bc)?)?;
    let h_c = von_neumann_entropy(&partial_trace(rho, c)?)?;
    let h_abc = von_neumann_entropy(&partial_trace(rho, &abc)?)?;
    Ok(h_ac + h_bc - h_c - h_abc)
}

fn check_disjoint(sets: &[&[&str]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for set in sets {
        for &l in *set {
            if seen.contains(&l) {
                return Err(Error::labels(format!(
                    "label {l:?} appears in more than one argument set"
                )));
            }
            seen.push(l);
        }
    }
    Ok(())
}
