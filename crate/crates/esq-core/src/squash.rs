//! Variational estimator of channel squashed entanglement for small
//! finite-dimensional channels.
//!
//! For a channel with isometric extension `U: A' → B⊗E` and a squashing
//! isometry `V: E → E'⊗F`, the state `ω = V·U|φ⟩_{AA'}` is pure on
//! `A⊗B⊗E'⊗F` and the quantity
//!
//! ```text
//! ½[H(B|E')_ω + H(B|F)_ω]  =  ½ I(A;B|E')_ω
//! ```
//!
//! is nonnegative and, maximized over inputs and minimized over
//! squashers, upper-bounds the two-way assisted capacities of the
//! channel. This module evaluates the objective exactly and runs an
//! alternating derivative-free search over both arguments. The search is
//! deterministic for a fixed seed. Because the input maximization is
//! itself numerical, results carry a caveat: a reported value is a true
//! upper bound only up to the quality of that inner maximization.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use nalgebra::{DMatrix, DVector};

use crate::bound::{BoundResult, OptimizerTrace};
use crate::channel::{kraus_to_isometry, FiniteChannel, IsometryMatrix};
use crate::entropy::conditional_entropy;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::optim::nelder_mead;
use crate::random::gaussian_pair;
use crate::state::{partial_trace, DensityOperator, PureState, SubsystemDims};
use crate::tol;

/// Objective value assigned to squasher parameters that fail to decode
/// (rank-deficient raw matrices); steers the simplex away without
/// aborting the search.
const DECODE_PENALTY: f64 = 1.0e3;

/// Raw parametrization of a squashing isometry `E → E'⊗F`: the real and
/// imaginary parts of a complex `(eprime_dim·f_dim) × env_dim` matrix,
/// column-major (`raw[2(e·rows + r)]` is the real part of entry `(r, e)`),
/// orthonormalized by [`decode_squasher`].
#[derive(Debug, Clone, PartialEq)]
pub struct SquasherParams {
    pub eprime_dim: usize,
    pub f_dim: usize,
    pub raw: Vec<f64>,
}

impl SquasherParams {
    pub fn new(eprime_dim: usize, f_dim: usize, raw: Vec<f64>) -> Result<Self> {
        if eprime_dim == 0 || f_dim == 0 {
            return Err(Error::validation("squasher dimensions must be positive"));
        }
        Ok(SquasherParams {
            eprime_dim,
            f_dim,
            raw,
        })
    }

    /// Parameters encoding the identity block: column `e` is the `e`-th
    /// standard basis vector of `E'⊗F`. Decodes to the embedding
    /// `|e⟩ → |e div f_dim⟩_{E'} |e mod f_dim⟩_F`. With `f_dim = 1` this
    /// is the squasher that keeps all of `E` and discards nothing.
    pub fn identity_block(eprime_dim: usize, f_dim: usize, env_dim: usize) -> Result<Self> {
        if eprime_dim * f_dim < env_dim {
            return Err(Error::validation(format!(
                "squasher output {eprime_dim}x{f_dim} cannot embed environment of dimension {env_dim}"
            )));
        }
        let rows = eprime_dim * f_dim;
        let mut raw = vec![0.0; 2 * rows * env_dim];
        for e in 0..env_dim {
            raw[2 * (e * rows + e)] = 1.0;
        }
        SquasherParams::new(eprime_dim, f_dim, raw)
    }

    /// The squasher that copies `E` into `E'` and puts `F` in a fixed
    /// pure state: `|e⟩ → |e⟩_{E'}|0⟩_F`. Squashing with it leaves the
    /// environment untouched, so the objective is the unsquashed
    /// `½ I(A;B|E)`.
    pub fn trace_out_f(env_dim: usize, f_dim: usize) -> Result<Self> {
        if env_dim == 0 || f_dim == 0 {
            return Err(Error::validation("squasher dimensions must be positive"));
        }
        let rows = env_dim * f_dim;
        let mut raw = vec![0.0; 2 * rows * env_dim];
        for e in 0..env_dim {
            raw[2 * (e * rows + e * f_dim)] = 1.0;
        }
        SquasherParams::new(env_dim, f_dim, raw)
    }
}

/// Raw parametrization of a pure input state on `A⊗A'` with
/// `|A| = |A'| = in_dim`: real and imaginary parts of the `in_dim²`
/// amplitudes, normalized by [`decode_input`].
#[derive(Debug, Clone, PartialEq)]
pub struct InputParams {
    pub raw: Vec<f64>,
}

impl InputParams {
    pub fn new(raw: Vec<f64>) -> Self {
        InputParams { raw }
    }
}

/// Parameters for the maximally entangled input `Σ_a |a⟩_A |a⟩_{A'} / √d`.
pub fn maximally_entangled_input(in_dim: usize) -> InputParams {
    let mut raw = vec![0.0; 2 * in_dim * in_dim];
    for a in 0..in_dim {
        raw[2 * (a * in_dim + a)] = 1.0;
    }
    InputParams::new(raw)
}

/// Search budgets for [`estimate_channel_bound`]. The defaults are tuned
/// so qubit channels with environments up to dimension 4 converge in
/// seconds.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorConfig {
    /// Random restarts per optimization phase (on top of the
    /// deterministic starts).
    pub restarts: usize,
    /// Squasher-min / input-max rounds.
    pub max_alternations: usize,
    /// Simplex iterations per restart.
    pub inner_iterations: usize,
    /// Stop alternating when the bound improves by less than this (bits).
    pub tolerance: f64,
    /// Seed for the restart generator; fixes the whole run.
    pub seed: u64,
    /// Squasher output dimension for `E'`; defaults to the environment
    /// dimension, shrunk to a balanced split if that exceeds the
    /// dimension budget.
    pub eprime_dim: Option<usize>,
    /// Squasher output dimension for `F`; same defaulting as `eprime_dim`.
    pub f_dim: Option<usize>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            restarts: 6,
            max_alternations: 4,
            inner_iterations: 400,
            tolerance: 1e-7,
            seed: 7,
            eprime_dim: None,
            f_dim: None,
        }
    }
}

impl EstimatorConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_alternations == 0 || self.inner_iterations == 0 {
            return Err(Error::validation(
                "restarts, max_alternations, and inner_iterations must be positive",
            ));
        }
        if self.tolerance <= 0.0 {
            return Err(Error::validation("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Decode raw squasher parameters into a verified isometry `E → E'⊗F`.
///
/// The raw matrix is orthonormalized column-by-column by modified
/// Gram–Schmidt with deterministic pivoting (largest remaining residual
/// first, ties broken by lowest column index; orthonormalized vectors
/// stay in their original column positions). A residual below
/// [`tol::RANK_TOL`] means the raw matrix has (numerically) dependent
/// columns and decoding fails with [`Error::RankDeficient`].
pub fn decode_squasher(params: &SquasherParams, env_dim: usize) -> Result<IsometryMatrix> {
    let rows = params.eprime_dim * params.f_dim;
    if env_dim == 0 {
        return Err(Error::validation("environment dimension must be positive"));
    }
    if rows < env_dim {
        return Err(Error::validation(format!(
            "squasher output dimension {rows} is smaller than environment dimension {env_dim}"
        )));
    }
    let expected = 2 * rows * env_dim;
    if params.raw.len() != expected {
        return Err(Error::validation(format!(
            "squasher raw vector has length {}, expected {expected}",
            params.raw.len()
        )));
    }
    let mut cols: Vec<DVector<C64>> = (0..env_dim)
        .map(|e| {
            DVector::from_fn(rows, |r, _| {
                C64::new(params.raw[2 * (e * rows + r)], params.raw[2 * (e * rows + r) + 1])
            })
        })
        .collect();

    let mut done = vec![false; env_dim];
    let mut basis: Vec<usize> = Vec::with_capacity(env_dim);
    for _ in 0..env_dim {
        let pivot = (0..env_dim)
            .filter(|&j| !done[j])
            .max_by(|&a, &b| cols[a].norm().partial_cmp(&cols[b].norm()).unwrap())
            .unwrap();
        let norm = cols[pivot].norm();
        if norm < tol::RANK_TOL {
            return Err(Error::RankDeficient);
        }
        cols[pivot] /= C64::new(norm, 0.0);
        done[pivot] = true;
        // two projection passes keep orthogonality at machine precision
        // even when the pivot column started nearly dependent
        for _ in 0..2 {
            let q = cols[pivot].clone();
            for j in 0..env_dim {
                if !done[j] {
                    let overlap = q.dotc(&cols[j]);
                    let update = &q * overlap;
                    cols[j] -= update;
                }
            }
        }
        basis.push(pivot);
    }

    let mut v = DMatrix::<C64>::zeros(rows, env_dim);
    for (e, col) in cols.iter().enumerate() {
        v.set_column(e, col);
    }
    let input = SubsystemDims::new(&[("E", env_dim)])?;
    let output = SubsystemDims::new(&[("Ep", params.eprime_dim), ("F", params.f_dim)])?;
    IsometryMatrix::new(v, input, output)
}

/// Decode raw input parameters into a pure state on `(A, Ap)` with both
/// factors of dimension `in_dim`.
pub fn decode_input(params: &InputParams, in_dim: usize) -> Result<PureState> {
    let expected = 2 * in_dim * in_dim;
    if params.raw.len() != expected {
        return Err(Error::validation(format!(
            "input raw vector has length {}, expected {expected}",
            params.raw.len()
        )));
    }
    let mut amps = DVector::from_fn(in_dim * in_dim, |k, _| {
        C64::new(params.raw[2 * k], params.raw[2 * k + 1])
    });
    let norm = amps.norm();
    if norm < 1e-12 {
        return Err(Error::validation(
            "input parameters decode to the zero vector",
        ));
    }
    amps /= C64::new(norm, 0.0);
    let dims = SubsystemDims::new(&[("A", in_dim), ("Ap", in_dim)])?;
    PureState::new(amps, dims)
}

/// `½[H(B|E') + H(B|F)]` of the squashed extension of `pre`, a pure
/// state whose trailing factor is the channel environment.
fn squashed_value(pre: &PureState, squasher: &IsometryMatrix) -> Result<f64> {
    let full = squasher.apply_to_suffix(pre)?;
    let rho = partial_trace(&full.density(), &["B", "Ep", "F"])?;
    let h_be = conditional_entropy(&rho, &["B"], &["Ep"])?;
    let h_bf = conditional_entropy(&rho, &["B"], &["F"])?;
    Ok(0.5 * (h_be + h_bf))
}

/// Evaluate the squashed-entanglement objective at explicit parameters:
/// decode the input and squasher, push the input through the channel's
/// canonical extension and the squasher, and return
/// `½[H(B|E') + H(B|F)]` in bits. Nonnegative up to eigensolver noise.
pub fn evaluate_objective(
    channel: &FiniteChannel,
    input: &InputParams,
    squasher: &SquasherParams,
) -> Result<f64> {
    let state = decode_input(input, channel.in_dim())?;
    let v = decode_squasher(squasher, channel.env_dim())?;
    let iso = kraus_to_isometry(channel);
    let pre = iso.apply_to_suffix(&state)?;
    squashed_value(&pre, &v)
}

/// The same objective evaluated at a mixed channel input `ρ_{A'}`
/// (implicitly purified by a reference system): conjugate `ρ` by the
/// composed isometry `(1_B ⊗ V)·U` and read the conditional entropies
/// off the resulting `B⊗E'⊗F` state.
pub fn objective_for_density(
    channel: &FiniteChannel,
    rho: &DensityOperator,
    squasher: &IsometryMatrix,
) -> Result<f64> {
    let din = channel.in_dim();
    if rho.dims().total_dim() != din {
        return Err(Error::validation(format!(
            "input density operator has dimension {}, channel expects {din}",
            rho.dims().total_dim()
        )));
    }
    let env = channel.env_dim();
    if squasher.input_dims().total_dim() != env {
        return Err(Error::validation(format!(
            "squasher acts on dimension {}, channel environment is {env}",
            squasher.input_dims().total_dim()
        )));
    }
    let ep = squasher.output_dims().dim_of("Ep").ok_or_else(|| {
        Error::validation("squasher output must carry labels Ep and F")
    })?;
    let f = squasher.output_dims().dim_of("F").ok_or_else(|| {
        Error::validation("squasher output must carry labels Ep and F")
    })?;
    let dout = channel.out_dim();
    let epf = ep * f;
    // composed isometry K[(b·epf + r), a] = Σ_k V[r, k]·K_k[b, a]
    let mut big = DMatrix::<C64>::zeros(dout * epf, din);
    for (k, kraus) in channel.kraus().iter().enumerate() {
        for r in 0..epf {
            let vrk = squasher.matrix()[(r, k)];
            if vrk == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..dout {
                for a in 0..din {
                    big[(b * epf + r, a)] += vrk * kraus[(b, a)];
                }
            }
        }
    }
    let omega = &big * rho.matrix() * big.adjoint();
    let dims = SubsystemDims::new(&[("B", dout), ("Ep", ep), ("F", f)])?;
    let state = DensityOperator::trusted(omega, dims);
    let h_be = conditional_entropy(&state, &["B"], &["Ep"])?;
    let h_bf = conditional_entropy(&state, &["B"], &["F"])?;
    Ok(0.5 * (h_be + h_bf))
}

fn random_raw(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let mut raw = Vec::with_capacity(len);
    while raw.len() < len {
        let (a, b) = gaussian_pair(rng);
        raw.push(a);
        if raw.len() < len {
            raw.push(b);
        }
    }
    raw
}

/// Resolve the squasher output dimensions for a channel under the
/// dimension budget `in·out·env·e'·f ≤ 64`. Explicit requests are taken
/// as-is (and rejected if over budget); the default `e' = f = env` falls
/// back to a balanced factorization of the environment when the full
/// square would blow the budget.
fn resolve_squasher_dims(channel: &FiniteChannel, config: &EstimatorConfig) -> Result<(usize, usize)> {
    let env = channel.env_dim();
    let budget = |ep: usize, f: usize| -> Result<()> {
        let requested = channel.in_dim() * channel.out_dim() * env * ep * f;
        if requested > tol::MAX_AMBIENT_DIM {
            return Err(Error::DimensionBudget {
                requested,
                cap: tol::MAX_AMBIENT_DIM,
            });
        }
        Ok(())
    };
    if config.eprime_dim.is_some() || config.f_dim.is_some() {
        let ep = config.eprime_dim.unwrap_or(env);
        let f = config.f_dim.unwrap_or(env);
        if ep * f < env {
            return Err(Error::validation(format!(
                "requested squasher output {ep}x{f} cannot embed environment of dimension {env}"
            )));
        }
        budget(ep, f)?;
        return Ok((ep, f));
    }
    if budget(env, env).is_ok() {
        return Ok((env, env));
    }
    // balanced split: smallest f with f ≥ √env, then e' covering the rest
    let mut f = 1;
    while f * f < env {
        f += 1;
    }
    let ep = env.div_ceil(f);
    budget(ep, f)?;
    Ok((ep, f))
}

/// Maximize the objective over input states at a fixed squasher, by
/// simplex ascent from the maximally entangled input plus seeded random
/// restarts. Returns the best parameters and value found. The objective
/// is concave in the input density operator, so the maximally entangled
/// start already sits at the optimum for group-covariant channels; the
/// restarts guard against stalls in the raw-coordinate chart.
pub fn maximize_over_input(
    channel: &FiniteChannel,
    squasher: &SquasherParams,
    config: &EstimatorConfig,
) -> Result<(InputParams, f64)> {
    config.validate()?;
    let v = decode_squasher(squasher, channel.env_dim())?;
    let iso = kraus_to_isometry(channel);
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut evals = 0u64;
    let (params, value, _) = input_phase(
        channel,
        &iso,
        &v,
        &maximally_entangled_input(channel.in_dim()),
        config,
        &mut rng,
        &mut evals,
    )?;
    Ok((params, value))
}

/// One input-maximization phase; returns (best params, best value,
/// restarts run).
fn input_phase(
    channel: &FiniteChannel,
    iso: &IsometryMatrix,
    squasher: &IsometryMatrix,
    current: &InputParams,
    config: &EstimatorConfig,
    rng: &mut impl Rng,
    evals: &mut u64,
) -> Result<(InputParams, f64, u32)> {
    let din = channel.in_dim();
    let objective = |raw: &[f64]| -> f64 {
        let params = InputParams::new(raw.to_vec());
        match decode_input(&params, din)
            .and_then(|state| iso.apply_to_suffix(&state))
            .and_then(|pre| squashed_value(&pre, squasher))
        {
            // negated: the simplex minimizes
            Ok(v) => -v,
            Err(_) => DECODE_PENALTY,
        }
    };
    let mut starts: Vec<Vec<f64>> = vec![maximally_entangled_input(din).raw, current.raw.clone()];
    for _ in 0..config.restarts {
        starts.push(random_raw(rng, 2 * din * din));
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut restarts = 0u32;
    for start in starts {
        let (x, value) = nelder_mead(
            objective,
            &start,
            0.15,
            config.inner_iterations,
            1e-10,
            evals,
        );
        restarts += 1;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((x, value));
        }
    }
    let (raw, neg) = best.expect("at least one start");
    Ok((InputParams::new(raw), -neg, restarts))
}

/// Estimate the squashed-entanglement upper bound of a channel by
/// alternating squasher minimization and input maximization.
///
/// Each alternation first minimizes over squasher parameters at the
/// current input (simplex descent from the identity-block squasher, the
/// previous best, and seeded random restarts), then re-maximizes over
/// inputs at the new squasher. The reported value is the smallest
/// input-maximized value seen. The trace records the running minimum of
/// the squasher search (nonincreasing), total objective evaluations, and
/// whether the alternation converged within its budget; `converged =
/// false` means the budget ran out first and the value is best-so-far.
pub fn estimate_channel_bound(
    channel: &FiniteChannel,
    config: &EstimatorConfig,
) -> Result<BoundResult> {
    config.validate()?;
    let (ep, f) = resolve_squasher_dims(channel, config)?;
    let env = channel.env_dim();
    let din = channel.in_dim();
    let iso = kraus_to_isometry(channel);
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let raw_len = 2 * ep * f * env;

    let mut evals = 0u64;
    let mut total_restarts = 0u32;
    let mut running_best: Vec<f64> = Vec::new();
    let mut sq_running_min = f64::INFINITY;

    let mut input = maximally_entangled_input(din);
    let mut best_squasher = SquasherParams::identity_block(ep, f, env)?.raw;
    let mut reported = f64::INFINITY;
    let mut prev_round = f64::INFINITY;
    let mut converged = false;

    for _ in 0..config.max_alternations {
        let input_state = decode_input(&input, din)?;
        let pre = iso.apply_to_suffix(&input_state)?;
        let objective = |raw: &[f64]| -> f64 {
            let params = match SquasherParams::new(ep, f, raw.to_vec()) {
                Ok(p) => p,
                Err(_) => return DECODE_PENALTY,
            };
            match decode_squasher(&params, env).and_then(|v| squashed_value(&pre, &v)) {
                Ok(v) => v,
                Err(_) => DECODE_PENALTY,
            }
        };

        let mut starts: Vec<Vec<f64>> =
            vec![SquasherParams::identity_block(ep, f, env)?.raw, best_squasher.clone()];
        for _ in 0..config.restarts {
            starts.push(random_raw(&mut rng, raw_len));
        }
        let mut phase_best: Option<(Vec<f64>, f64)> = None;
        for start in starts {
            let (x, value) = nelder_mead(
                objective,
                &start,
                0.25,
                config.inner_iterations,
                1e-10,
                &mut evals,
            );
            total_restarts += 1;
            if phase_best.as_ref().is_none_or(|(_, b)| value < *b) {
                phase_best = Some((x, value));
            }
            sq_running_min = sq_running_min.min(value);
            running_best.push(sq_running_min);
        }
        best_squasher = phase_best.expect("at least one start").0;

        let squasher = decode_squasher(&SquasherParams::new(ep, f, best_squasher.clone())?, env)?;
        let (new_input, round_value, input_restarts) =
            input_phase(channel, &iso, &squasher, &input, config, &mut rng, &mut evals)?;
        input = new_input;
        total_restarts += input_restarts;
        reported = reported.min(round_value);

        if (prev_round - round_value).abs() < config.tolerance {
            converged = true;
            break;
        }
        prev_round = round_value;
    }

    let mut params = BTreeMap::new();
    for (k, v) in [
        ("in_dim", din as f64),
        ("out_dim", channel.out_dim() as f64),
        ("env_dim", env as f64),
        ("eprime_dim", ep as f64),
        ("f_dim", f as f64),
        ("seed", config.seed as f64),
        ("restarts", config.restarts as f64),
    ] {
        params.insert(k.to_string(), v);
    }
    Ok(BoundResult {
        name: "generic".to_string(),
        value: reported,
        params,
        trace: OptimizerTrace {
            evaluations: evals,
            restarts: total_restarts,
            running_best,
            converged,
        },
        caveat: Some("upper bound certified only up to input-maximization quality".to_string()),
    })
}

/// Tensor product of two `(A, Ap)` input states, flattened so the joint
/// `Ap` index matches a tensor-product channel's input ordering (first
/// factor is the slow index).
pub fn product_input(a: &PureState, b: &PureState) -> Result<PureState> {
    for (state, which) in [(a, "first"), (b, "second")] {
        if state.dims().factor_count() != 2 {
            return Err(Error::validation(format!(
                "{which} input state must have exactly two factors (reference, channel input)"
            )));
        }
    }
    let (ra, ca) = (a.dims().dims()[0], a.dims().dims()[1]);
    let (rb, cb) = (b.dims().dims()[0], b.dims().dims()[1]);
    let dims = SubsystemDims::new(&[("A", ra * rb), ("Ap", ca * cb)])?;
    let mut amps = DVector::<C64>::zeros(ra * rb * ca * cb);
    for a1 in 0..ra {
        for p1 in 0..ca {
            let amp_a = a.amplitudes()[a1 * ca + p1];
            for a2 in 0..rb {
                for p2 in 0..cb {
                    let row = a1 * rb + a2;
                    let col = p1 * cb + p2;
                    amps[row * (ca * cb) + col] = amp_a * b.amplitudes()[a2 * cb + p2];
                }
            }
        }
    }
    PureState::new(amps, dims)
}

/// Tensor product of two squashing isometries, index-matched to
/// [`FiniteChannel::tensor`]'s environment ordering.
pub fn product_squasher(a: &IsometryMatrix, b: &IsometryMatrix) -> Result<IsometryMatrix> {
    let dims_of = |v: &IsometryMatrix, which: &str| -> Result<(usize, usize, usize)> {
        let env = v.input_dims().total_dim();
        let (ep, f) = match (v.output_dims().dim_of("Ep"), v.output_dims().dim_of("F")) {
            (Some(ep), Some(f)) => (ep, f),
            _ => {
                return Err(Error::validation(format!(
                    "{which} squasher output must carry labels Ep and F"
                )))
            }
        };
        Ok((env, ep, f))
    };
    let (ea, epa, fa) = dims_of(a, "first")?;
    let (eb, epb, fb) = dims_of(b, "second")?;
    let rows = epa * epb * fa * fb;
    let mut v = DMatrix::<C64>::zeros(rows, ea * eb);
    for e1 in 0..ea {
        for e2 in 0..eb {
            let col = e1 * eb + e2;
            for ep1 in 0..epa {
                for f1 in 0..fa {
                    let entry_a = a.matrix()[(ep1 * fa + f1, e1)];
                    for ep2 in 0..epb {
                        for f2 in 0..fb {
                            let row = (ep1 * epb + ep2) * (fa * fb) + (f1 * fb + f2);
                            v[(row, col)] = entry_a * b.matrix()[(ep2 * fb + f2, e2)];
                        }
                    }
                }
            }
        }
    }
    let input = SubsystemDims::new(&[("E", ea * eb)])?;
    let output = SubsystemDims::new(&[("Ep", epa * epb), ("F", fa * fb)])?;
    IsometryMatrix::new(v, input, output)
}

/// Outcome of a product-additivity check: on a tensor-product channel
/// with product input and product squasher, the objective must equal the
/// sum of the factors' objectives.
#[derive(Debug, Clone)]
pub struct AdditivityReport {
    pub joint_value: f64,
    pub sum_of_parts: f64,
    pub defect: f64,
    pub pass: bool,
}

/// Check objective additivity on `channel_a ⊗ channel_b` at the given
/// per-factor inputs and squashers.
pub fn product_additivity_check(
    channel_a: &FiniteChannel,
    channel_b: &FiniteChannel,
    inputs: (&InputParams, &InputParams),
    squashers: (&SquasherParams, &SquasherParams),
) -> Result<AdditivityReport> {
    let value_a = evaluate_objective(channel_a, inputs.0, squashers.0)?;
    let value_b = evaluate_objective(channel_b, inputs.1, squashers.1)?;
    let sum_of_parts = value_a + value_b;

    let joint = channel_a.tensor(channel_b)?;
    let input = product_input(
        &decode_input(inputs.0, channel_a.in_dim())?,
        &decode_input(inputs.1, channel_b.in_dim())?,
    )?;
    let squasher = product_squasher(
        &decode_squasher(squashers.0, channel_a.env_dim())?,
        &decode_squasher(squashers.1, channel_b.env_dim())?,
    )?;
    let pre = kraus_to_isometry(&joint).apply_to_suffix(&input)?;
    let joint_value = squashed_value(&pre, &squasher)?;
    let defect = (joint_value - sum_of_parts).abs();
    Ok(AdditivityReport {
        joint_value,
        sum_of_parts,
        defect,
        pass: defect <= 1e-9,
    })
}

/// Outcome of a concavity check: the objective at a mixture of inputs
/// must be at least the mixture of objectives.
#[derive(Debug, Clone)]
pub struct ConcavityReport {
    pub mixture_value: f64,
    pub average_value: f64,
    /// `mixture_value − average_value`; concavity demands ≥ 0 up to noise.
    pub defect: f64,
    pub pass: bool,
}

/// Check concavity of the objective in the channel input at a fixed
/// squasher: `f(Σ wᵢρᵢ) ≥ Σ wᵢ f(ρᵢ)`.
pub fn concavity_check(
    channel: &FiniteChannel,
    squasher: &SquasherParams,
    weights: &[f64],
    states: &[DensityOperator],
) -> Result<ConcavityReport> {
    if weights.len() != states.len() || weights.is_empty() {
        return Err(Error::validation(
            "weights and states must be nonempty and of equal length",
        ));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::validation("mixture weights must be nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "mixture weights sum to {total}, not 1"
        )));
    }
    let din = channel.in_dim();
    for state in states {
        if state.dims().total_dim() != din {
            return Err(Error::validation(format!(
                "mixture state has dimension {}, channel expects {din}",
                state.dims().total_dim()
            )));
        }
    }
    let v = decode_squasher(squasher, channel.env_dim())?;
    let mut average_value = 0.0;
    let mut mix = DMatrix::<C64>::zeros(din, din);
    for (w, state) in weights.iter().zip(states) {
        average_value += w * objective_for_density(channel, state, &v)?;
        mix += state.matrix() * C64::new(*w, 0.0);
    }
    let mixture = DensityOperator::trusted(mix, states[0].dims().clone());
    let mixture_value = objective_for_density(channel, &mixture, &v)?;
    let defect = mixture_value - average_value;
    Ok(ConcavityReport {
        mixture_value,
        average_value,
        defect,
        pass: defect >= -1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{binary_entropy, von_neumann_entropy};
    use crate::pauli::{
        pauli_bound_at, pauli_channel, PauliProbabilities, SquashingPhases,
    };
    use crate::random::{random_channel, random_density_operator, random_unitary};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // two-Kraus form {√p·I, √(1−p)·Z}: environment dimension 2
    fn dephasing_channel(p: f64) -> FiniteChannel {
        let s = p.sqrt();
        let t = (1.0 - p).sqrt();
        let id = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(s, 0.0),
            C64::new(s, 0.0),
        ]));
        let z = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(t, 0.0),
            C64::new(-t, 0.0),
        ]));
        FiniteChannel::new(vec![id, z]).unwrap()
    }

    #[test]
    fn decode_identity_block_variants() {
        // f_dim = 1: keeps all of E in E'
        let sq = SquasherParams::identity_block(3, 1, 3).unwrap();
        let v = decode_squasher(&sq, 3).unwrap();
        assert_eq!(v.matrix().nrows(), 3);
        for e in 0..3 {
            assert_abs_diff_eq!(v.matrix()[(e, e)].re, 1.0, epsilon = 1e-14);
        }
        // eprime_dim = 1: everything lands in F
        let sq = SquasherParams::identity_block(1, 3, 3).unwrap();
        let v = decode_squasher(&sq, 3).unwrap();
        assert_eq!(v.output_dims().dim_of("Ep"), Some(1));
        assert_eq!(v.output_dims().dim_of("F"), Some(3));
    }

    #[test]
    fn decode_orthonormalizes_random_raw() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let raw = random_raw(&mut rng, 2 * 4 * 2);
            let sq = SquasherParams::new(2, 2, raw).unwrap();
            let v = decode_squasher(&sq, 2).unwrap();
            let defect = (v.matrix().adjoint() * v.matrix()
                - DMatrix::<C64>::identity(2, 2))
            .norm();
            assert!(defect < 1e-10, "defect {defect}");
        }
    }

    #[test]
    fn decode_rejects_dependent_columns() {
        // two identical columns
        let mut raw = vec![0.0; 2 * 4 * 2];
        raw[0] = 1.0;
        raw[2 * 4] = 1.0;
        let sq = SquasherParams::new(2, 2, raw).unwrap();
        match decode_squasher(&sq, 2) {
            Err(Error::RankDeficient) => {}
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn identity_channel_objective_is_one() {
        let channel = FiniteChannel::identity(2).unwrap();
        let input = maximally_entangled_input(2);
        let sq = SquasherParams::identity_block(1, 1, 1).unwrap();
        let v = evaluate_objective(&channel, &input, &sq).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn product_input_scores_zero() {
        let channel = dephasing_channel(0.8);
        // |0⟩⊗|0⟩ carries no reference correlations
        let mut raw = vec![0.0; 8];
        raw[0] = 1.0;
        let v = evaluate_objective(&channel, &InputParams::new(raw), &SquasherParams::identity_block(2, 2, 2).unwrap())
            .unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn bell_extension_matches_closed_form() {
        let probs = PauliProbabilities::new([0.55, 0.15, 0.1, 0.2]).unwrap();
        for phases in [
            SquashingPhases::zero(),
            SquashingPhases::new([0.4, 1.9, 3.3]),
        ] {
            let channel = pauli_channel(&probs, &phases);
            // identity-block (2, 2) splits the 4-dim environment back
            // into the extension's E and F qubits
            let sq = SquasherParams::identity_block(2, 2, 4).unwrap();
            let v = evaluate_objective(&channel, &maximally_entangled_input(2), &sq).unwrap();
            assert_abs_diff_eq!(v, pauli_bound_at(&probs, &phases), epsilon = 1e-9);
        }
    }

    #[test]
    fn trace_out_f_reproduces_unsquashed_cmi() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let channel = random_channel(&mut rng, 2, 2, 2).unwrap();
        let input = decode_input(&maximally_entangled_input(2), 2).unwrap();
        let pre = kraus_to_isometry(&channel).apply_to_suffix(&input).unwrap();
        // direct ½ I(A;B|E) on the pure (A, B, E) state
        let rho = pre.density();
        let direct = 0.5
            * crate::entropy::conditional_mutual_information(&rho, &["A"], &["B"], &["E"]).unwrap();
        let sq = SquasherParams::trace_out_f(2, 2).unwrap();
        let v = evaluate_objective(&channel, &maximally_entangled_input(2), &sq).unwrap();
        assert_abs_diff_eq!(v, direct, epsilon = 1e-10);
    }

    #[test]
    fn density_path_agrees_with_state_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let channel = random_channel(&mut rng, 2, 2, 2).unwrap();
            let raw = random_raw(&mut rng, 8);
            let input = InputParams::new(raw);
            let sq_raw = random_raw(&mut rng, 2 * 4 * 2);
            let sq = SquasherParams::new(2, 2, sq_raw).unwrap();
            let via_state = evaluate_objective(&channel, &input, &sq).unwrap();
            let state = decode_input(&input, 2).unwrap();
            let rho_in = partial_trace(&state.density(), &["Ap"]).unwrap();
            let rho_in = DensityOperator::trusted(
                rho_in.matrix().clone(),
                SubsystemDims::new(&[("Ap", 2)]).unwrap(),
            );
            let v = decode_squasher(&sq, 2).unwrap();
            let via_density = objective_for_density(&channel, &rho_in, &v).unwrap();
            assert_abs_diff_eq!(via_state, via_density, epsilon = 1e-10);
        }
    }

    #[test]
    fn objective_invariant_under_local_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let channel = dephasing_channel(0.85);
        let sq_raw = random_raw(&mut rng, 2 * 4 * 2);
        let sq = SquasherParams::new(2, 2, sq_raw).unwrap();
        let input = InputParams::new(random_raw(&mut rng, 8));
        let base = evaluate_objective(&channel, &input, &sq).unwrap();

        // unitary on the reference A: rotate the input's A factor
        let u = random_unitary(&mut rng, 2);
        let state = decode_input(&input, 2).unwrap();
        let rotator = IsometryMatrix::new(
            u,
            SubsystemDims::new(&[("A", 2)]).unwrap(),
            SubsystemDims::new(&[("A", 2)]).unwrap(),
        )
        .unwrap();
        let rotated = rotator
            .apply_to_suffix(&state.permute(&["Ap", "A"]).unwrap())
            .unwrap()
            .permute(&["A", "Ap"])
            .unwrap();
        let pre = kraus_to_isometry(&channel).apply_to_suffix(&rotated).unwrap();
        let v = decode_squasher(&sq, 2).unwrap();
        let with_ua = squashed_value(&pre, &v).unwrap();
        assert_abs_diff_eq!(with_ua, base, epsilon = 1e-10);

        // unitary on E' after the squasher
        let w = random_unitary(&mut rng, 2);
        let rotator_ep = IsometryMatrix::new(
            w,
            SubsystemDims::new(&[("Ep", 2)]).unwrap(),
            SubsystemDims::new(&[("Ep", 2)]).unwrap(),
        )
        .unwrap();
        let full = v
            .apply_to_suffix(&kraus_to_isometry(&channel).apply_to_suffix(&state).unwrap())
            .unwrap();
        let spun = rotator_ep
            .apply_to_suffix(&full.permute(&["A", "B", "F", "Ep"]).unwrap())
            .unwrap()
            .permute(&["A", "B", "Ep", "F"])
            .unwrap();
        let rho = partial_trace(&spun.density(), &["B", "Ep", "F"]).unwrap();
        let h_be = conditional_entropy(&rho, &["B"], &["Ep"]).unwrap();
        let h_bf = conditional_entropy(&rho, &["B"], &["F"]).unwrap();
        assert_abs_diff_eq!(0.5 * (h_be + h_bf), base, epsilon = 1e-10);
    }

    #[test]
    fn maximally_entangled_input_is_optimal_for_pauli() {
        let probs = PauliProbabilities::new([0.7, 0.1, 0.1, 0.1]).unwrap();
        let channel = pauli_channel(&probs, &SquashingPhases::zero());
        let sq = SquasherParams::identity_block(2, 2, 4).unwrap();
        let config = EstimatorConfig {
            restarts: 3,
            inner_iterations: 150,
            ..EstimatorConfig::default()
        };
        let me_value =
            evaluate_objective(&channel, &maximally_entangled_input(2), &sq).unwrap();
        let (_, best) = maximize_over_input(&channel, &sq, &config).unwrap();
        assert!(best >= me_value - 1e-12);
        assert!(
            best <= me_value + 1e-6,
            "input search beat the covariant optimum: {best} vs {me_value}"
        );
    }

    #[test]
    fn estimator_on_identity_channel() {
        let channel = FiniteChannel::identity(2).unwrap();
        let config = EstimatorConfig {
            restarts: 2,
            max_alternations: 2,
            inner_iterations: 60,
            ..EstimatorConfig::default()
        };
        let result = estimate_channel_bound(&channel, &config).unwrap();
        assert_abs_diff_eq!(result.value, 1.0, epsilon = 1e-6);
        assert_eq!(result.params["env_dim"], 1.0);
        for w in result.trace.running_best.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }

    #[test]
    fn estimator_stays_between_known_bounds_for_dephasing() {
        let channel = dephasing_channel(0.9);
        let config = EstimatorConfig {
            restarts: 2,
            max_alternations: 2,
            inner_iterations: 250,
            ..EstimatorConfig::default()
        };
        let result = estimate_channel_bound(&channel, &config).unwrap();
        // any squasher upper-bounds the capacity, which exceeds the
        // coherent-information lower bound; the unsquashed value caps it
        let lower = 1.0 - binary_entropy(0.9).unwrap();
        assert!(result.value >= lower - 1e-6, "value {}", result.value);
        assert!(result.value <= 1.0 + 1e-9);
        assert!(result.caveat.is_some());
    }

    #[test]
    fn budget_fallback_and_rejection() {
        // 4-Kraus qubit channel: full env×env squasher blows the budget,
        // the default falls back to a balanced 2x2 split
        let probs = PauliProbabilities::new([0.25; 4]).unwrap();
        let channel = pauli_channel(&probs, &SquashingPhases::zero());
        let config = EstimatorConfig::default();
        let (ep, f) = resolve_squasher_dims(&channel, &config).unwrap();
        assert_eq!((ep, f), (2, 2));
        // explicit oversized request is an error, not a silent shrink
        let big = EstimatorConfig {
            eprime_dim: Some(4),
            f_dim: Some(4),
            ..EstimatorConfig::default()
        };
        match resolve_squasher_dims(&channel, &big) {
            Err(Error::DimensionBudget { requested, cap }) => {
                assert_eq!(requested, 2 * 2 * 4 * 4 * 4);
                assert_eq!(cap, 64);
            }
            other => panic!("expected budget rejection, got {other:?}"),
        }
    }

    #[test]
    fn additivity_identity_pair() {
        let id = FiniteChannel::identity(2).unwrap();
        let sq = SquasherParams::identity_block(1, 1, 1).unwrap();
        let me = maximally_entangled_input(2);
        let report = product_additivity_check(&id, &id, (&me, &me), (&sq, &sq)).unwrap();
        assert!(report.pass, "defect {}", report.defect);
        assert_abs_diff_eq!(report.joint_value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn additivity_dephasing_times_identity() {
        let deph = dephasing_channel(0.9);
        let id = FiniteChannel::identity(2).unwrap();
        let sq_d = SquasherParams::identity_block(2, 2, 2).unwrap();
        let sq_i = SquasherParams::identity_block(1, 1, 1).unwrap();
        let me = maximally_entangled_input(2);
        let report =
            product_additivity_check(&deph, &id, (&me, &me), (&sq_d, &sq_i)).unwrap();
        assert!(report.pass, "defect {}", report.defect);
    }

    #[test]
    fn concavity_on_dephasing_mixture() {
        let channel = dephasing_channel(0.7);
        let sq = SquasherParams::identity_block(2, 2, 2).unwrap();
        let basis0 = DensityOperator::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ])),
            SubsystemDims::new(&[("Ap", 2)]).unwrap(),
        )
        .unwrap();
        let basis1 = DensityOperator::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ])),
            SubsystemDims::new(&[("Ap", 2)]).unwrap(),
        )
        .unwrap();
        let report =
            concavity_check(&channel, &sq, &[0.5, 0.5], &[basis0.clone(), basis1]).unwrap();
        assert!(report.pass, "defect {}", report.defect);
        // trivial weight: equality
        let trivial = concavity_check(&channel, &sq, &[1.0], &[basis0]).unwrap();
        assert_abs_diff_eq!(trivial.defect, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn objective_never_negative_on_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..10 {
            let channel = random_channel(&mut rng, 2, 2, 2).unwrap();
            let input = InputParams::new(random_raw(&mut rng, 8));
            let sq = SquasherParams::new(2, 2, random_raw(&mut rng, 16)).unwrap();
            let v = evaluate_objective(&channel, &input, &sq).unwrap();
            assert!(v >= -1e-9, "objective {v}");
        }
    }

    #[test]
    fn random_mixed_inputs_keep_concavity() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let channel = random_channel(&mut rng, 2, 2, 2).unwrap();
        let sq = SquasherParams::identity_block(2, 2, 2).unwrap();
        let dims = SubsystemDims::new(&[("Ap", 2)]).unwrap();
        let states: Vec<DensityOperator> = (0..3)
            .map(|_| random_density_operator(&mut rng, dims.clone()))
            .collect();
        let report = concavity_check(&channel, &sq, &[0.2, 0.5, 0.3], &states).unwrap();
        assert!(report.pass, "defect {}", report.defect);
    }

    #[test]
    fn unsquashed_value_never_below_estimate_inputs() {
        // sanity on reported quantities: estimates are finite, traces
        // populated, and purity of the pre-state is preserved
        let channel = dephasing_channel(0.6);
        let input = decode_input(&maximally_entangled_input(2), 2).unwrap();
        let pre = kraus_to_isometry(&channel).apply_to_suffix(&input).unwrap();
        let rho = pre.density();
        assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), 0.0, epsilon = 1e-9);
    }
}
