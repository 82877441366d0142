//! Seeded invariant sweeps across the state, entropy, pauli, gaussian,
//! and squash layers. Each test draws many random instances and checks a
//! property that must hold identically, up to eigensolver noise.

use esq_core::entropy::{
    bosonic_g, conditional_entropy, conditional_mutual_information, von_neumann_entropy,
};
use esq_core::gaussian::{
    beamsplitter_symplectic, pure_loss_bound_finite, pure_loss_entropies, pure_loss_state,
    symplectic_eigenvalues, GaussianState,
};
use esq_core::pauli::{
    dephasing_bound, lambda_prime_spectrum, lambda_spectrum, pauli_bound_at, pauli_channel,
    PauliProbabilities, SquashingPhases,
};
use esq_core::random::{random_channel, random_density_operator, random_pure_state};
use esq_core::squash::{
    decode_squasher, evaluate_objective, maximally_entangled_input, InputParams, SquasherParams,
};
use esq_core::state::{partial_trace, purify, PureState, SubsystemDims};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn conditional_entropy_duality_on_pure_tripartite_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let dims =
            SubsystemDims::new(&[("K", 2), ("L", 3), ("M", 4)]).unwrap();
        let psi = random_pure_state(&mut rng, dims);
        let rho = psi.density();
        let h_k_given_l = conditional_entropy(&rho, &["K"], &["L"]).unwrap();
        let h_k_given_m = conditional_entropy(&rho, &["K"], &["M"]).unwrap();
        assert!(
            (h_k_given_l + h_k_given_m).abs() < 1e-9,
            "duality violated at trial {trial}: {h_k_given_l} vs {h_k_given_m}"
        );
    }
}

#[test]
fn conditional_mutual_information_is_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..40 {
        let dims =
            SubsystemDims::new(&[("A", 2), ("B", 2), ("C", 3)]).unwrap();
        let rho = random_density_operator(&mut rng, dims);
        let cmi = conditional_mutual_information(&rho, &["A"], &["B"], &["C"]).unwrap();
        assert!(
            cmi >= -1e-9,
            "strong subadditivity violated at trial {trial}: {cmi}"
        );
    }
}

#[test]
fn conditional_mutual_information_adds_over_product_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..15 {
        let left = random_density_operator(
            &mut rng,
            SubsystemDims::qubits(&["A1", "B1", "C1"]).unwrap(),
        );
        let right = random_density_operator(
            &mut rng,
            SubsystemDims::qubits(&["A2", "B2", "C2"]).unwrap(),
        );
        let joint = left.tensor(&right).unwrap();
        let cmi_joint = conditional_mutual_information(
            &joint,
            &["A1", "A2"],
            &["B1", "B2"],
            &["C1", "C2"],
        )
        .unwrap();
        let cmi_left = conditional_mutual_information(&left, &["A1"], &["B1"], &["C1"]).unwrap();
        let cmi_right =
            conditional_mutual_information(&right, &["A2"], &["B2"], &["C2"]).unwrap();
        assert!(
            (cmi_joint - cmi_left - cmi_right).abs() < 1e-9,
            "CMI not additive: {cmi_joint} vs {} + {}",
            cmi_left,
            cmi_right
        );
    }
}

#[test]
fn purification_round_trips_through_partial_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let dims = SubsystemDims::new(&[("X", 2), ("Y", 3)]).unwrap();
        let rho = random_density_operator(&mut rng, dims);
        let psi = purify(&rho).unwrap();
        let back = partial_trace(&psi.density(), &["X", "Y"]).unwrap();
        let diff = (back.matrix() - rho.matrix()).norm();
        assert!(diff < 1e-10, "purify/partial_trace drift {diff}");
        // and the reference marginal carries the same spectrum
        let h_ref = von_neumann_entropy(&partial_trace(&psi.density(), &["R"]).unwrap()).unwrap();
        let h_rho = von_neumann_entropy(&rho).unwrap();
        assert!((h_ref - h_rho).abs() < 1e-9);
    }
}

#[test]
fn pauli_spectra_are_probability_vectors_and_phases_are_periodic() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..60 {
        let mut p = [0.0f64; 4];
        let mut total = 0.0;
        for entry in p.iter_mut() {
            *entry = rng.random::<f64>();
            total += *entry;
        }
        for entry in p.iter_mut() {
            *entry /= total;
        }
        let probs = PauliProbabilities::new(p).unwrap();
        let phases = SquashingPhases::new([
            rng.random::<f64>() * 7.0 - 3.5,
            rng.random::<f64>() * 7.0 - 3.5,
            rng.random::<f64>() * 7.0 - 3.5,
        ]);
        for spectrum in [lambda_spectrum(&probs, &phases), lambda_prime_spectrum(&probs, &phases)] {
            let sum: f64 = spectrum.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "spectrum sum {sum}");
            assert!(spectrum.iter().all(|&x| x >= -1e-12));
        }
        let raw = phases.phases();
        let shifted = SquashingPhases::new([
            raw[0] + 2.0 * std::f64::consts::PI,
            raw[1] - 2.0 * std::f64::consts::PI,
            raw[2] + 4.0 * std::f64::consts::PI,
        ]);
        let a = pauli_bound_at(&probs, &phases);
        let b = pauli_bound_at(&probs, &shifted);
        assert!((a - b).abs() < 1e-12, "phase periodicity broke: {a} vs {b}");
        assert!((0.0..=1.0 + 1e-12).contains(&a), "bound out of range: {a}");
    }
}

#[test]
fn dephasing_probabilities_at_zero_phase_hit_the_closed_form() {
    for k in 1..10 {
        let p = f64::from(k) / 10.0;
        let probs = PauliProbabilities::dephasing(p).unwrap();
        let direct = pauli_bound_at(&probs, &SquashingPhases::zero());
        let closed = dephasing_bound(p).unwrap();
        assert!(
            (direct - closed).abs() < 1e-12,
            "p={p}: {direct} vs {closed}"
        );
    }
}

#[test]
fn pauli_channel_env_entropy_matches_the_probability_spectrum() {
    // Sending half of a maximally entangled pair through the channel leaves
    // the Bell-tagged environment in a diagonal mixture of the four branch
    // probabilities, so H(EF) must equal H(p).
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..10 {
        let mut p = [0.0f64; 4];
        let mut total = 0.0;
        for entry in p.iter_mut() {
            *entry = rng.random::<f64>() + 0.05;
            total += *entry;
        }
        for entry in p.iter_mut() {
            *entry /= total;
        }
        let probs = PauliProbabilities::new(p).unwrap();
        let phases = SquashingPhases::new([
            rng.random::<f64>(),
            rng.random::<f64>(),
            rng.random::<f64>(),
        ]);
        let channel = pauli_channel(&probs, &phases);
        let iso = esq_core::channel::kraus_to_isometry(&channel);
        let me = PureState::maximally_entangled("A", "Ap", 2).unwrap();
        let out = iso.apply_to_suffix(&me).unwrap();
        let env = partial_trace(&out.density(), &["E"]).unwrap();
        let h_env = von_neumann_entropy(&env).unwrap();
        let h_probs = esq_core::entropy::shannon_entropy(&p).unwrap();
        assert!(
            (h_env - h_probs).abs() < 1e-9,
            "H(env)={h_env} vs H(p)={h_probs}"
        );
    }
}

#[test]
fn pure_loss_pipeline_matches_closed_forms_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..25 {
        let eta = 0.02 + 0.96 * rng.random::<f64>();
        let eta1 = 0.02 + 0.96 * rng.random::<f64>();
        let ns = 0.05 + 10.0 * rng.random::<f64>();
        let [h_be, h_bf, h_e, h_f] = pure_loss_entropies(eta, eta1, ns).unwrap();
        let g = |x: f64| bosonic_g(x).unwrap();
        assert!((h_be - g((eta + (1.0 - eta) * eta1) * ns)).abs() < 1e-9);
        assert!((h_bf - g((eta + (1.0 - eta) * (1.0 - eta1)) * ns)).abs() < 1e-9);
        assert!((h_e - g(eta1 * (1.0 - eta) * ns)).abs() < 1e-9);
        assert!((h_f - g((1.0 - eta1) * (1.0 - eta) * ns)).abs() < 1e-9);
        let from_pipeline = 0.5 * (h_be + h_bf - h_e - h_f);
        let closed = pure_loss_bound_finite(eta, eta1, ns).unwrap();
        assert!((from_pipeline - closed).abs() < 1e-9);
    }
}

#[test]
fn beamsplitters_preserve_purity_and_symplectic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..20 {
        let eta = rng.random::<f64>();
        let state = GaussianState::vacuum(3);
        let s = beamsplitter_symplectic(eta, 3, (0, 2)).unwrap();
        let out = state.apply_symplectic(&s).unwrap();
        assert!(out.entropy().unwrap().abs() < 1e-10);
        let nus = symplectic_eigenvalues(out.covariance()).unwrap();
        for nu in nus {
            assert!((nu - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn three_mode_loss_state_purifies_to_global_entropy() {
    // The three retained modes form the reduction of a pure four-mode
    // state, so the total entropy must equal that of the traced-out arm.
    let state = pure_loss_state(0.7, 0.4, 1.3).unwrap();
    let total = state.entropy().unwrap();
    let expected = bosonic_g(1.3).unwrap();
    assert!((total - expected).abs() < 1e-9, "{total} vs {expected}");
}

#[test]
fn decoded_squashers_are_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..20 {
        let env = 1 + rng.random_range(0..4usize);
        let ep = 1 + rng.random_range(0..3usize);
        let f = 1 + rng.random_range(0..3usize);
        if ep * f < env {
            continue;
        }
        let raw: Vec<f64> = (0..2 * ep * f * env)
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        let params = SquasherParams::new(ep, f, raw).unwrap();
        let iso = decode_squasher(&params, env).unwrap();
        let v = iso.matrix();
        let gram = v.adjoint() * v;
        let eye = DMatrix::identity(env, env);
        assert!((gram - eye).norm() < 1e-10);
    }
}

#[test]
fn squash_objective_is_nonnegative_for_random_channels_and_squashers() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..12 {
        let channel = random_channel(&mut rng, 2, 2, 2).unwrap();
        let raw: Vec<f64> = (0..2 * 4 * 2)
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        let squasher = SquasherParams::new(2, 2, raw).unwrap();
        let input_raw: Vec<f64> = (0..2 * 4).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let input = InputParams::new(input_raw);
        let value = evaluate_objective(&channel, &input, &squasher).unwrap();
        assert!(value >= -1e-9, "objective negative at trial {trial}: {value}");
    }
}

#[test]
fn identity_channel_objective_is_one_bit_at_maximally_entangled_input() {
    // With a one-dimensional environment the squasher is trivial and the
    // objective is the entanglement of the input across A:B.
    let channel = esq_core::channel::FiniteChannel::identity(2).unwrap();
    let squasher = SquasherParams::identity_block(1, 1, 1).unwrap();
    let input = maximally_entangled_input(2);
    let value = evaluate_objective(&channel, &input, &squasher).unwrap();
    assert!((value - 1.0).abs() < 1e-10, "got {value}");
}
