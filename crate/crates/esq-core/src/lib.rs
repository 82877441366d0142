//! Upper and lower bounds on two-way assisted quantum channel capacities.
//!
//! The two-way assisted quantum capacity `Q2` and private capacity `P2`
//! of a channel admit an upper bound through squashed entanglement: for
//! any isometric extension `U: A' → B⊗E` of the channel and any
//! squashing isometry `V: E → E'⊗F`,
//!
//! ```text
//! Q2, P2  ≤  max_input  ½ [H(B|E') + H(B|F)]
//! ```
//!
//! and the bound may be minimized over squashers. This crate evaluates
//! that quantity three ways:
//!
//! * [`pauli`] — closed forms for qubit Pauli channels via a
//!   Bell-state-tagged environment, with a three-phase minimization;
//!   includes the dephasing and depolarizing families and the
//!   reverse-coherent-information lower bound.
//! * [`gaussian`] — closed forms for phase-insensitive bosonic Gaussian
//!   channels (pure-loss, thermal, additive-noise, amplifier) via
//!   covariance-matrix propagation and symplectic spectra, including the
//!   photon-number-independent limits.
//! * [`squash`] — a direct variational estimator for arbitrary small
//!   finite-dimensional channels given by Kraus operators, alternating
//!   input maximization and squasher minimization.
//!
//! Supporting machinery: labeled multipartite states with partial trace
//! and purification ([`state`]), entropy functions ([`entropy`]),
//! channels and isometric extensions ([`channel`]), seeded random
//! instances ([`random`]), and derivative-free optimizers ([`optim`]).
//! All entropies and bounds are in bits (base-2 logarithms).

pub mod bound;
pub mod channel;
pub mod entropy;
pub mod error;
pub mod gaussian;
mod linalg;
pub mod optim;
pub mod pauli;
pub mod random;
pub mod squash;
pub mod state;
pub mod tol;

pub use bound::{BoundResult, OptimizerTrace};
pub use channel::{kraus_to_isometry, FiniteChannel, IsometryMatrix};
pub use entropy::{
    binary_entropy, bosonic_g, conditional_entropy, conditional_mutual_information,
    shannon_entropy, von_neumann_entropy,
};
pub use error::{Error, Result};
pub use gaussian::{
    additive_noise_bound, beamsplitter_symplectic, convexity_report,
    decompose_phase_insensitive, gaussian_entropy, omega, phase_insensitive_bound,
    pure_loss_bound, pure_loss_bound_finite, pure_loss_bound_limit, pure_loss_entropies,
    pure_loss_lower_bound, pure_loss_state, symplectic_eigenvalues, thermal_bound,
    two_mode_squeezed_covariance, tmsv_reduced_covariance, ConvexityReport, GaussianState,
    LossAmpDecomposition, PhaseInsensitiveParams,
};
pub use pauli::{
    bell_environment_isometry, dephasing_bound, depolarizing_bound, lambda_prime_spectrum,
    lambda_spectrum, minimize_pauli_bound, pauli_bound_at, pauli_channel,
    reverse_coherent_information, PauliProbabilities, PhaseOptimizerConfig, SquashingPhases,
};
pub use random::{random_channel, random_density_operator, random_pure_state, random_unitary};
pub use squash::{
    concavity_check, decode_input, decode_squasher, estimate_channel_bound, evaluate_objective,
    maximally_entangled_input, maximize_over_input, objective_for_density,
    product_additivity_check, product_input, product_squasher, AdditivityReport, ConcavityReport,
    EstimatorConfig, InputParams, SquasherParams,
};
pub use state::{partial_trace, purify, DensityOperator, PureState, SubsystemDims};
