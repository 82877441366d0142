//! `esq`: capacity bounds for qubit Pauli channels, phase-insensitive
//! bosonic Gaussian channels, and small generic channels from Kraus files.

mod channel_file;
mod render;
mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use esq_core::gaussian::{
    additive_noise_bound, phase_insensitive_bound, pure_loss_bound, pure_loss_bound_finite,
    pure_loss_bound_limit, pure_loss_lower_bound, thermal_bound, PhaseInsensitiveParams,
};
use esq_core::pauli::{
    dephasing_bound, minimize_pauli_bound, pauli_bound_at, reverse_coherent_information,
    PauliProbabilities, PhaseOptimizerConfig, SquashingPhases,
};
use esq_core::squash::{estimate_channel_bound, EstimatorConfig};
use esq_core::BoundResult;

use render::emit_bound;
use sweep::FigureName;

pub const INPUT_ERROR: i32 = 2;
pub const IO_ERROR: i32 = 3;

/// Failure with a process exit code: 2 for bad input, 3 for I/O.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<esq_core::Error> for CliError {
    fn from(e: esq_core::Error) -> Self {
        CliError::new(INPUT_ERROR, e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "esq",
    version,
    about = "Upper and lower bounds on two-way assisted quantum channel capacities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound a Pauli channel given its four probabilities
    Pauli {
        p0: f64,
        p1: f64,
        p2: f64,
        p3: f64,
        /// Evaluate at a fixed squashing phase instead of minimizing
        #[arg(long)]
        phi1: Option<f64>,
        #[arg(long)]
        phi2: Option<f64>,
        #[arg(long)]
        phi3: Option<f64>,
        /// Grid points per free phase axis in the coarse scan
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Dephasing channel closed form
    Dephasing {
        p: f64,
        #[arg(long)]
        json: bool,
    },
    /// Depolarizing channel via the phase minimizer
    Depolarizing {
        p: f64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Pure-loss bosonic channel of transmissivity eta
    #[command(name = "pure-loss")]
    PureLoss {
        eta: f64,
        /// Mean input photon number; omitting it gives the energy limit
        #[arg(long)]
        ns: Option<f64>,
        /// Environment split for the finite-energy bound (needs --ns)
        #[arg(long)]
        eta1: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Thermal channel of transmissivity eta and environment photons nb
    Thermal {
        eta: f64,
        nb: f64,
        #[arg(long)]
        json: bool,
    },
    /// Additive-noise channel of noise variance nbar
    Additive {
        nbar: f64,
        #[arg(long)]
        json: bool,
    },
    /// Phase-insensitive channel of gain tau and noise nu
    #[command(name = "phase-insensitive")]
    PhaseInsensitive {
        tau: f64,
        nu: f64,
        #[arg(long)]
        json: bool,
    },
    /// Emit a figure-ready CSV sweep
    Figure {
        #[arg(value_enum)]
        name: FigureName,
        /// Output path; defaults to <name>.csv
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of sweep points
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Estimate a bound for a channel described by a Kraus JSON file
    Generic {
        path: PathBuf,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in consistency checks
    Selftest,
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Pauli {
            p0,
            p1,
            p2,
            p3,
            phi1,
            phi2,
            phi3,
            grid,
            seed,
            json,
        } => cmd_pauli([p0, p1, p2, p3], [phi1, phi2, phi3], grid, seed, json),
        Command::Dephasing { p, json } => {
            let upper = BoundResult::closed_form("dephasing", dephasing_bound(p)?, &[("p", p)]);
            let lower = reverse_coherent_information(&PauliProbabilities::dephasing(p)?);
            emit_bound(&upper, Some(lower), json);
            Ok(())
        }
        Command::Depolarizing {
            p,
            grid,
            seed,
            json,
        } => {
            let config = phase_config(grid, seed);
            let probs = PauliProbabilities::depolarizing(p)?;
            let mut upper = minimize_pauli_bound(&probs, &config)?;
            upper.name = "depolarizing".to_string();
            upper.params.insert("p".to_string(), p);
            let lower = reverse_coherent_information(&probs);
            emit_bound(&upper, Some(lower), json);
            Ok(())
        }
        Command::PureLoss {
            eta,
            ns,
            eta1,
            json,
        } => cmd_pure_loss(eta, ns, eta1, json),
        Command::Thermal { eta, nb, json } => {
            let upper = BoundResult::closed_form(
                "thermal",
                thermal_bound(eta, nb)?,
                &[("eta", eta), ("nb", nb)],
            );
            emit_bound(&upper, None, json);
            Ok(())
        }
        Command::Additive { nbar, json } => {
            let upper = BoundResult::closed_form(
                "additive",
                additive_noise_bound(nbar)?,
                &[("nbar", nbar)],
            );
            emit_bound(&upper, None, json);
            Ok(())
        }
        Command::PhaseInsensitive { tau, nu, json } => {
            let params = PhaseInsensitiveParams::new(tau, nu)?;
            let upper = phase_insensitive_bound(&params);
            emit_bound(&upper, None, json);
            Ok(())
        }
        Command::Figure { name, out, grid } => {
            let path =
                out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", name.file_stem())));
            let rows = sweep::write_figure(name, grid, &path)?;
            println!("wrote {} ({rows} rows)", path.display());
            Ok(())
        }
        Command::Generic {
            path,
            restarts,
            seed,
            json,
        } => {
            let channel = channel_file::load_channel(&path)?;
            let mut config = EstimatorConfig::default();
            if let Some(r) = restarts {
                config.restarts = r;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let upper = estimate_channel_bound(&channel, &config)?;
            emit_bound(&upper, None, json);
            Ok(())
        }
        Command::Selftest => selftest(),
    }
}

fn phase_config(grid: Option<usize>, seed: Option<u64>) -> PhaseOptimizerConfig {
    let mut config = PhaseOptimizerConfig::default();
    if let Some(g) = grid {
        config.grid_points_per_axis = g;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    config
}

/// Accept probabilities that sum to 1 within 1e-3, renormalizing with a
/// note; anything further off is an input error.
fn normalized_probabilities(p: [f64; 4]) -> Result<PauliProbabilities, CliError> {
    if p.iter().any(|&x| x < 0.0) {
        return Err(CliError::new(
            INPUT_ERROR,
            "probabilities must be nonnegative",
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-3 {
        return Err(CliError::new(
            INPUT_ERROR,
            format!("probabilities sum to {total}, expected 1"),
        ));
    }
    let scaled = if total == 1.0 {
        p
    } else {
        eprintln!("note: probabilities sum to {total}; renormalizing");
        [
            p[0] / total,
            p[1] / total,
            p[2] / total,
            p[3] / total,
        ]
    };
    Ok(PauliProbabilities::new(scaled)?)
}

fn cmd_pauli(
    p: [f64; 4],
    phi: [Option<f64>; 3],
    grid: Option<usize>,
    seed: Option<u64>,
    json: bool,
) -> Result<(), CliError> {
    let probs = normalized_probabilities(p)?;
    let fixed = phi.iter().any(Option::is_some);
    let upper = if fixed {
        let phases = SquashingPhases::new([
            phi[0].unwrap_or(0.0),
            phi[1].unwrap_or(0.0),
            phi[2].unwrap_or(0.0),
        ]);
        let value = pauli_bound_at(&probs, &phases);
        let raw = phases.phases();
        let pr = probs.probs();
        BoundResult::closed_form(
            "pauli",
            value,
            &[
                ("p0", pr[0]),
                ("p1", pr[1]),
                ("p2", pr[2]),
                ("p3", pr[3]),
                ("phi1", raw[0]),
                ("phi2", raw[1]),
                ("phi3", raw[2]),
            ],
        )
    } else {
        minimize_pauli_bound(&probs, &phase_config(grid, seed))?
    };
    let lower = reverse_coherent_information(&probs);
    emit_bound(&upper, Some(lower), json);
    Ok(())
}

fn cmd_pure_loss(
    eta: f64,
    ns: Option<f64>,
    eta1: Option<f64>,
    json: bool,
) -> Result<(), CliError> {
    if eta1.is_some() && ns.is_none() {
        return Err(CliError::new(
            INPUT_ERROR,
            "--eta1 selects the environment split of the finite-energy bound; give --ns too",
        ));
    }
    let upper = match (ns, eta1) {
        (None, _) => BoundResult::closed_form(
            "pure_loss_limit",
            pure_loss_bound_limit(eta)?,
            &[("eta", eta)],
        ),
        (Some(ns), None) => BoundResult::closed_form(
            "pure_loss",
            pure_loss_bound(eta, ns)?,
            &[("eta", eta), ("ns", ns)],
        ),
        (Some(ns), Some(eta1)) => BoundResult::closed_form(
            "pure_loss",
            pure_loss_bound_finite(eta, eta1, ns)?,
            &[("eta", eta), ("eta1", eta1), ("ns", ns)],
        ),
    };
    let lower = pure_loss_lower_bound(eta)?;
    emit_bound(&upper, Some(lower), json);
    Ok(())
}

fn selftest() -> Result<(), CliError> {
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        if ok {
            println!("selftest {name}: ok");
        } else {
            println!("selftest {name}: FAILED ({detail})");
            all_ok = false;
        }
    };

    let closed = dephasing_bound(0.3).expect("valid probability");
    let direct = pauli_bound_at(
        &PauliProbabilities::dephasing(0.3).expect("valid probability"),
        &SquashingPhases::zero(),
    );
    check(
        "dephasing-closed-form",
        (closed - direct).abs() < 1e-12,
        format!("{closed} vs {direct}"),
    );

    let identity = minimize_pauli_bound(
        &PauliProbabilities::new([1.0, 0.0, 0.0, 0.0]).expect("valid"),
        &PhaseOptimizerConfig::default(),
    )
    .expect("optimizer runs");
    check(
        "identity-pauli",
        (identity.value - 1.0).abs() < 1e-9,
        format!("{}", identity.value),
    );

    let limit = pure_loss_bound_limit(0.5).expect("valid eta");
    check(
        "pure-loss-half",
        (limit - 3.0f64.log2()).abs() < 1e-12,
        format!("{limit}"),
    );

    let thermal = thermal_bound(0.7, 0.0).expect("valid");
    let pl = pure_loss_bound_limit(0.7).expect("valid");
    check(
        "thermal-zero-photons",
        thermal == pl,
        format!("{thermal} vs {pl}"),
    );

    let entropies = esq_core::gaussian::pure_loss_entropies(0.6, 0.3, 0.5).expect("valid");
    let expected = esq_core::entropy::bosonic_g(0.36).expect("valid");
    check(
        "loss-pipeline-entropy",
        (entropies[0] - expected).abs() < 1e-9,
        format!("{} vs {expected}", entropies[0]),
    );

    let estimate = estimate_channel_bound(
        &esq_core::FiniteChannel::identity(2).expect("valid"),
        &EstimatorConfig {
            restarts: 2,
            max_alternations: 2,
            inner_iterations: 150,
            ..EstimatorConfig::default()
        },
    )
    .expect("estimator runs");
    check(
        "identity-estimator",
        (estimate.value - 1.0).abs() < 1e-6,
        format!("{}", estimate.value),
    );

    let doc = serde_json::to_string(&estimate).expect("serializes");
    let back: BoundResult = serde_json::from_str(&doc).expect("parses");
    check(
        "json-round-trip",
        back.value == estimate.value,
        format!("{} vs {}", back.value, estimate.value),
    );

    if all_ok {
        Ok(())
    } else {
        Err(CliError::new(1, "selftest failed"))
    }
}
