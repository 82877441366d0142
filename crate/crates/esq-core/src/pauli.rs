//! Closed-form capacity bounds for qubit Pauli channels.
//!
//! A Pauli channel applies `I, X, Y, Z` with probabilities `(p0, p1, p2, p3)`.
//! Its isometric extension can be written with a two-qubit environment
//! `E ⊗ F` in which each Pauli branch is tagged by one of the four Bell
//! states; discarding `F` is then a squashing channel, and the resulting
//! conditional entropies have closed-form spectra `λ(φ)` and `λ'(φ)`
//! depending on three free branch phases. Minimizing over the phases gives
//! an upper bound on the two-way assisted quantum and private capacities:
//!
//! ```text
//! Q2, P2  ≤  min_φ ½·[H(λ(φ)) + H(λ'(φ))] − 1
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::bound::{BoundResult, OptimizerTrace};
use crate::channel::{FiniteChannel, IsometryMatrix};
use crate::entropy::{binary_entropy, shannon_entropy};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::optim::golden_section;
use crate::state::SubsystemDims;
use crate::tol;

const TAU: f64 = 2.0 * PI;

/// Probabilities of applying `I, X, Y, Z`. Sum must be 1 within
/// [`tol::PROB_SUM_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliProbabilities {
    probs: [f64; 4],
}

impl PauliProbabilities {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::validation("Pauli probabilities must be nonnegative"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol::PROB_SUM_TOL {
            return Err(Error::validation(format!(
                "Pauli probabilities sum to {sum}, not 1 within {:.0e}",
                tol::PROB_SUM_TOL
            )));
        }
        Ok(PauliProbabilities { probs })
    }

    /// Dephasing channel: identity with probability `p`, phase flip otherwise.
    pub fn dephasing(p: f64) -> Result<Self> {
        check_unit_interval(p, "dephasing probability")?;
        PauliProbabilities::new([p, 0.0, 0.0, 1.0 - p])
    }

    /// Depolarizing channel with error parameter `p`:
    /// `(1 - 3p/4, p/4, p/4, p/4)`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_unit_interval(p, "depolarizing parameter")?;
        let q = p / 4.0;
        PauliProbabilities::new([1.0 - 3.0 * q, q, q, q])
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }
}

/// The three free phases of the Bell-tagged isometric extension, one per
/// non-identity Pauli branch (the identity branch phase is fixed to 0 by
/// global-phase freedom). Stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquashingPhases {
    phases: [f64; 3],
}

impl SquashingPhases {
    pub fn new(phases: [f64; 3]) -> Self {
        SquashingPhases {
            phases: phases.map(|p| p.rem_euclid(TAU)),
        }
    }

    pub fn zero() -> Self {
        SquashingPhases { phases: [0.0; 3] }
    }

    pub fn phases(&self) -> [f64; 3] {
        self.phases
    }
}

/// Controls for the phase search in [`minimize_pauli_bound`]: a coarse grid
/// followed by coordinate-wise golden-section refinement.
#[derive(Debug, Clone, Copy)]
pub struct PhaseOptimizerConfig {
    /// Grid points per free axis in the coarse scan over `[0, 2π)`.
    pub grid_points_per_axis: usize,
    /// Number of single-axis golden-section line searches in the
    /// refinement stage.
    pub refine_iterations: usize,
    /// Stop refining when a full cycle over the axes improves the bound by
    /// less than this (bits).
    pub tolerance: f64,
    /// Kept for interface parity with the stochastic estimators; the phase
    /// search itself is deterministic and does not consume randomness.
    pub seed: u64,
}

impl Default for PhaseOptimizerConfig {
    fn default() -> Self {
        PhaseOptimizerConfig {
            grid_points_per_axis: 25,
            refine_iterations: 200,
            tolerance: 1e-12,
            seed: 7,
        }
    }
}

impl PhaseOptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_points_per_axis == 0 {
            return Err(Error::validation("grid_points_per_axis must be positive"));
        }
        if self.tolerance < 0.0 {
            return Err(Error::validation("tolerance must be nonnegative"));
        }
        Ok(())
    }
}

/// Amplitudes shared by the two spectra. With `s_i = √p_i` and
/// `e_i = exp(iφ_i)`:
///
/// ```text
/// a = s0 + e3·s3    b = e1·s1 − e2·s2
/// c = s0 − e3·s3    d = e1·s1 + e2·s2
/// ```
fn branch_amplitudes(p: &PauliProbabilities, phases: [f64; 3]) -> (C64, C64, C64, C64) {
    let [p0, p1, p2, p3] = p.probs();
    let e1 = C64::from_polar(p1.sqrt(), phases[0]);
    let e2 = C64::from_polar(p2.sqrt(), phases[1]);
    let e3 = C64::from_polar(p3.sqrt(), phases[2]);
    let s0 = C64::new(p0.sqrt(), 0.0);
    (s0 + e3, e1 - e2, s0 - e3, e1 + e2)
}

/// Spectrum of the joint output-environment state `ρ_BE` at phases `φ`:
/// `(¼|a+b|², ¼|a−b|², ¼|c+d|², ¼|d−c|²)`.
///
/// The four entries sum to 1 analytically; renormalizing by the computed
/// sum strips the last-ulp drift of `|e^{iφ}|²` so that degenerate
/// spectra (all entries equal, or exact halves) come out bit-exact.
pub fn lambda_spectrum(p: &PauliProbabilities, phases: &SquashingPhases) -> [f64; 4] {
    let (a, b, c, d) = branch_amplitudes(p, phases.phases());
    let raw = [
        (a + b).norm_sqr() / 4.0,
        (a - b).norm_sqr() / 4.0,
        (c + d).norm_sqr() / 4.0,
        (d - c).norm_sqr() / 4.0,
    ];
    let total = (raw[0] + raw[1]) + (raw[2] + raw[3]);
    raw.map(|x| x / total)
}

/// Spectrum of `ρ_BF`: identical to [`lambda_spectrum`] with `φ2 → φ2 + π`.
pub fn lambda_prime_spectrum(p: &PauliProbabilities, phases: &SquashingPhases) -> [f64; 4] {
    let [f1, f2, f3] = phases.phases();
    lambda_spectrum(p, &SquashingPhases::new([f1, f2 + PI, f3]))
}

/// The squashed-entanglement upper bound at fixed phases:
/// `½[H(λ) + H(λ')] − 1` bits per channel use. The quantity is half a
/// conditional mutual information, so it is nonnegative by strong
/// subadditivity; the clamp only removes last-ulp rounding below zero.
pub fn pauli_bound_at(p: &PauliProbabilities, phases: &SquashingPhases) -> f64 {
    let h = shannon_entropy(&lambda_spectrum(p, phases)).expect("spectrum sums to 1");
    let hp = shannon_entropy(&lambda_prime_spectrum(p, phases)).expect("spectrum sums to 1");
    (0.5 * (h + hp) - 1.0).max(0.0)
}

/// Minimize [`pauli_bound_at`] over the free phases.
///
/// Axes whose branch probability vanishes are pinned to phase 0 (they do
/// not enter the objective). The coarse grid scans each free axis over
/// `[0, 2π)`; ties break toward the lexicographically smallest phase
/// triple because the scan visits cells in lexicographic order and only
/// strict improvements move the incumbent. Golden-section refinement then
/// cycles through the free axes with a shrinking trust interval.
pub fn minimize_pauli_bound(
    p: &PauliProbabilities,
    config: &PhaseOptimizerConfig,
) -> Result<BoundResult> {
    config.validate()?;
    let [_, p1, p2, p3] = p.probs();
    let free: Vec<usize> = [p1, p2, p3]
        .iter()
        .enumerate()
        .filter(|&(_, &pi)| pi > 0.0)
        .map(|(i, _)| i)
        .collect();

    let mut evals: u64 = 0;
    let mut best_phases = [0.0f64; 3];
    let mut best = pauli_bound_at(p, &SquashingPhases::new(best_phases));
    evals += 1;
    let mut running_best = Vec::new();

    // coarse grid over the free axes
    let n = config.grid_points_per_axis;
    if !free.is_empty() {
        let total = n.pow(free.len() as u32);
        for cell in 0..total {
            let mut phases = [0.0f64; 3];
            let mut rest = cell;
            // lexicographic decode: first free axis is the slow digit
            for &axis in free.iter().rev() {
                phases[axis] = TAU * (rest % n) as f64 / n as f64;
                rest /= n;
            }
            let value = pauli_bound_at(p, &SquashingPhases::new(phases));
            evals += 1;
            if value < best {
                best = value;
                best_phases = phases;
            }
        }
    }
    running_best.push(best);

    // coordinate-wise golden-section refinement around the best cell
    let mut width = TAU / n as f64;
    let mut line_searches = 0usize;
    'refine: while line_searches < config.refine_iterations && !free.is_empty() {
        let cycle_start = best;
        for &axis in &free {
            if line_searches >= config.refine_iterations {
                break;
            }
            let center = best_phases[axis];
            let (x, value) = golden_section(
                |t| {
                    let mut phases = best_phases;
                    phases[axis] = t;
                    pauli_bound_at(p, &SquashingPhases::new(phases))
                },
                center - width,
                center + width,
                48,
                &mut evals,
            );
            if value < best {
                best = value;
                best_phases[axis] = x;
            }
            running_best.push(best);
            line_searches += 1;
        }
        width *= 0.5;
        if cycle_start - best < config.tolerance {
            break 'refine;
        }
    }

    let reduced = SquashingPhases::new(best_phases);
    let [p0v, p1v, p2v, p3v] = p.probs();
    let [f1, f2, f3] = reduced.phases();
    let mut params = BTreeMap::new();
    for (k, v) in [
        ("p0", p0v),
        ("p1", p1v),
        ("p2", p2v),
        ("p3", p3v),
        ("phi1", f1),
        ("phi2", f2),
        ("phi3", f3),
    ] {
        params.insert(k.to_string(), v);
    }
    Ok(BoundResult {
        name: "pauli".to_string(),
        value: best,
        params,
        trace: OptimizerTrace {
            evaluations: evals,
            restarts: 0,
            running_best,
            converged: true,
        },
        caveat: None,
    })
}

/// Closed-form bound for the dephasing channel:
/// `h2((1 + 2√(p(1−p)))/2)`, the phase minimum in closed form.
pub fn dephasing_bound(p: f64) -> Result<f64> {
    check_unit_interval(p, "dephasing probability")?;
    let s = (p * (1.0 - p)).sqrt();
    binary_entropy((1.0 + 2.0 * s) / 2.0)
}

/// Bound for the depolarizing channel with error parameter `p`, found by
/// the phase optimizer with default settings.
pub fn depolarizing_bound(p: f64) -> Result<BoundResult> {
    let probs = PauliProbabilities::depolarizing(p)?;
    let mut result = minimize_pauli_bound(&probs, &PhaseOptimizerConfig::default())?;
    result.name = "depolarizing".to_string();
    result.params.insert("p".to_string(), p);
    Ok(result)
}

/// Reverse coherent information of a Pauli channel at maximally entangled
/// input: `max{0, 1 − H(p)}` bits per use. A lower bound on the two-way
/// assisted capacities.
pub fn reverse_coherent_information(p: &PauliProbabilities) -> f64 {
    let h = shannon_entropy(&p.probs()).expect("validated probabilities");
    (1.0 - h).max(0.0)
}

/// The Bell-tagged isometric extension underlying the closed forms, as an
/// explicit isometry `A' → B ⊗ E ⊗ F` (all qubits):
///
/// ```text
/// W|ψ⟩ = √p0 |ψ⟩|Φ+⟩ + e^{iφ1}√p1 X|ψ⟩|Ψ+⟩
///      + e^{iφ2}√p2 XZ|ψ⟩|Ψ−⟩ + e^{iφ3}√p3 Z|ψ⟩|Φ−⟩
/// ```
///
/// Tracing out `E ⊗ F` recovers the Pauli channel (the `XZ` branch equals
/// the `Y` branch up to a phase absorbed into `φ2`); tracing out only `F`
/// is the squashing map that yields the λ spectra.
pub fn bell_environment_isometry(
    p: &PauliProbabilities,
    phases: &SquashingPhases,
) -> IsometryMatrix {
    let [p0, p1, p2, p3] = p.probs();
    let [f1, f2, f3] = phases.phases();
    let coeff = [
        C64::new(p0.sqrt(), 0.0),
        C64::from_polar(p1.sqrt(), f1),
        C64::from_polar(p2.sqrt(), f2),
        C64::from_polar(p3.sqrt(), f3),
    ];
    let id = DMatrix::<C64>::identity(2, 2);
    let x = DMatrix::from_row_slice(2, 2, &cvec(&[0.0, 1.0, 1.0, 0.0]));
    let z = DMatrix::from_row_slice(2, 2, &cvec(&[1.0, 0.0, 0.0, -1.0]));
    let xz = &x * &z;
    let ops = [&id, &x, &xz, &z];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // Bell states on E ⊗ F in the order matching the branches above.
    let bells: [DVector<C64>; 4] = [
        DVector::from_vec(cvec(&[s, 0.0, 0.0, s])),   // Φ+
        DVector::from_vec(cvec(&[0.0, s, s, 0.0])),   // Ψ+
        DVector::from_vec(cvec(&[0.0, s, -s, 0.0])),  // Ψ−
        DVector::from_vec(cvec(&[s, 0.0, 0.0, -s])),  // Φ−
    ];

    // output flat index over (B, E, F): b·4 + e·2 + f
    let mut w = DMatrix::<C64>::zeros(8, 2);
    for a in 0..2 {
        for (branch, op) in ops.iter().enumerate() {
            for b in 0..2 {
                for ef in 0..4 {
                    w[(b * 4 + ef, a)] += coeff[branch] * op[(b, a)] * bells[branch][ef];
                }
            }
        }
    }
    let input = SubsystemDims::new(&[("A", 2)]).expect("qubit");
    let output = SubsystemDims::qubits(&["B", "E", "F"]).expect("three qubits");
    IsometryMatrix::new(w, input, output).expect("Bell branches are orthonormal")
}

/// The same extension packaged as a four-Kraus channel whose canonical
/// environment is the combined `E ⊗ F` (so `kraus_to_isometry` rebuilds
/// exactly [`bell_environment_isometry`]'s matrix).
pub fn pauli_channel(p: &PauliProbabilities, phases: &SquashingPhases) -> FiniteChannel {
    let w = bell_environment_isometry(p, phases);
    let kraus: Vec<DMatrix<C64>> = (0..4)
        .map(|m| DMatrix::from_fn(2, 2, |b, a| w.matrix()[(b * 4 + m, a)]))
        .collect();
    FiniteChannel::new(kraus).expect("isometry blocks close")
}

fn check_unit_interval(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(format!("{what} {p} outside [0, 1]")));
    }
    Ok(())
}

fn cvec(values: &[f64]) -> Vec<C64> {
    values.iter().map(|&v| C64::new(v, 0.0)).collect()
}
