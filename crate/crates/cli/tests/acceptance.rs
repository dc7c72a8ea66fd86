//! Acceptance suite: one test and one printed verdict line per release
//! criterion. Run with `cargo test -p vnpointer-cli --test acceptance --
//! --nocapture` to see every line.

use std::path::{Path, PathBuf};
use std::process::Command;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnpointer_cli::pipeline::{INVERSE_IDENTITY_TOL, ORACLE_DEVIATION_TOL, PHASE_TOL};
use vnpointer_cli::scenario::Scenario;
use vnpointer_cli::verify::{
    battery_grid, inverse_battery, negative_control_deviation, pps_battery, ps_battery,
    random_projector, random_state, NEGATIVE_CONTROL_FLOOR,
};
use vnpointer_core::analysis::{interference_report, momentum_shift};
use vnpointer_core::measurement::{
    postselect, pps_pointer_density, pps_pointer_state, ps_density_decomposition, ps_measure,
};
use vnpointer_core::oracle::{momentum_space_evolve, OracleConfig};
use vnpointer_core::pointer::{
    gaussian_pointer, position_expectation, probability_density, MeasurementConfig,
};
use vnpointer_core::system::weak_value;

const SEED: u64 = 0x20260810;

fn verdict(number: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {tag}: {detail}");
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn shipped(name: &str) -> Scenario {
    Scenario::load(&scenarios_dir().join(name)).expect("shipped scenario loads")
}

#[test]
fn criterion_1_operator_identity() {
    let grid = battery_grid(1024).unwrap();
    let stats = ps_battery(200, SEED, grid).unwrap();
    let control = negative_control_deviation(grid).unwrap();
    let pass = stats.max_deviation <= ORACLE_DEVIATION_TOL && control > NEGATIVE_CONTROL_FLOOR;
    verdict(
        1,
        "operator identity",
        pass,
        &format!(
            "{} randomized cases max deviation {:.3e} (tol {ORACLE_DEVIATION_TOL:.0e}); \
             negative control deviation {control:.3e} (floor {NEGATIVE_CONTROL_FLOOR:.0e})",
            stats.trials, stats.max_deviation
        ),
    );
}

#[test]
fn criterion_2_inverse_adjoint_identity() {
    let grid = battery_grid(1024).unwrap();
    let worst = inverse_battery(64, SEED ^ 0x22, grid).unwrap();

    // The identity is what normalizes every measured state: check the
    // norms of randomized closed-form outputs directly.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x2222);
    let mut worst_norm = 0.0f64;
    for trial in 0..50 {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let psi = random_state(&mut rng, dim);
        let phi = gaussian_pointer(grid, 0.0, rng.gen_range(0.8..1.3)).unwrap();
        let cfg = MeasurementConfig::with_gamma(rng.gen_range(-8.0..8.0)).unwrap();
        let state = ps_measure(&a, &psi, &phi, &cfg).unwrap();
        worst_norm = worst_norm.max((state.total_norm_sq().sqrt() - 1.0).abs());
    }
    let pass = worst <= INVERSE_IDENTITY_TOL && worst_norm <= 1e-10;
    verdict(
        2,
        "inverse/adjoint identity",
        pass,
        &format!(
            "max recovery deviation {worst:.3e} (tol {INVERSE_IDENTITY_TOL:.0e}); \
             max measured-state norm error {worst_norm:.3e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_3_ps_no_interference() {
    let grid = battery_grid(1024).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x33);
    let mut worst_pointwise = 0.0f64;
    let mut worst_mass = 0.0f64;
    for trial in 0..1000 {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let psi = random_state(&mut rng, dim);
        let sigma = rng.gen_range(0.8..1.3);
        // A third of the trials keep the profiles strongly overlapping.
        let gamma = if trial % 3 == 0 {
            rng.gen_range(-1.0..1.0) * sigma
        } else {
            rng.gen_range(-8.0..8.0)
        };
        let phi = gaussian_pointer(grid, 0.0, sigma).unwrap();
        let cfg = MeasurementConfig::with_gamma(gamma).unwrap();
        let parts = ps_density_decomposition(&a, &psi, &phi, &cfg).unwrap();
        let report = interference_report(&parts).unwrap();
        worst_pointwise = worst_pointwise.max(report.max_abs_cross);
        worst_mass = worst_mass.max(report.cross_l1);
    }
    let pass = worst_pointwise <= 1e-10 && worst_mass <= 1e-9;
    verdict(
        3,
        "no preselected interference",
        pass,
        &format!(
            "1000 randomized cases: max pointwise cross {worst_pointwise:.3e} (tol 1e-10), \
             max cross mass {worst_mass:.3e} (tol 1e-9)"
        ),
    );
}

#[test]
fn criterion_4_pps_closed_form_vs_oracle() {
    let grid = battery_grid(1024).unwrap();
    let stats = pps_battery(200, SEED ^ 0x44, grid).unwrap();
    let pass = stats.max_pointer_residual <= ORACLE_DEVIATION_TOL
        && stats.max_phase_error <= PHASE_TOL;
    verdict(
        4,
        "postselected closed form",
        pass,
        &format!(
            "{} randomized cases: max pointer residual {:.3e} (tol {ORACLE_DEVIATION_TOL:.0e}), \
             max Pancharatnam-phase error {:.3e} rad (tol {PHASE_TOL:.0e})",
            stats.trials, stats.max_pointer_residual, stats.max_phase_error
        ),
    );
}

#[test]
fn criterion_5_pps_density_decomposition() {
    let grid = battery_grid(1024).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x55);
    let mut worst_consistency = 0.0f64;
    let mut worst_mass_error = 0.0f64;
    for trial in 0..100 {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let pre = random_state(&mut rng, dim);
        let post = loop {
            let candidate = random_state(&mut rng, dim);
            if candidate.inner(&pre).unwrap().norm() > 0.1 {
                break candidate;
            }
        };
        let phi = gaussian_pointer(grid, 0.0, rng.gen_range(0.8..1.3)).unwrap();
        let cfg = MeasurementConfig::with_gamma(rng.gen_range(-8.0..8.0)).unwrap();

        let parts = pps_pointer_density(&a, &pre, &post, &phi, &cfg).unwrap();
        let state = pps_pointer_state(&a, &pre, &post, &phi, &cfg).unwrap();
        let density = probability_density(&state.pointer);
        for (k, d) in density.iter().enumerate() {
            let sum = parts.term_unshifted[k] + parts.term_shifted[k] + parts.cross[k];
            worst_consistency = worst_consistency
                .max((parts.total[k] - sum).abs())
                .max((parts.total[k] - d).abs());
        }
        let mass: f64 = parts.total.iter().sum::<f64>() * grid.dq();
        worst_mass_error = worst_mass_error.max((mass - 1.0).abs());
    }

    // The shipped anomalous scenario: interference mass far above the
    // floor, while the same configuration without postselection has none.
    let scenario = shipped("anomalous-weak-value.json");
    let built = scenario.build().unwrap();
    let post = built.postselection.as_ref().unwrap();
    let pps_parts = pps_pointer_density(
        &built.projector,
        &built.preselection,
        post,
        &built.pointer,
        &built.config,
    )
    .unwrap();
    let pps_mass = interference_report(&pps_parts).unwrap().cross_l1;
    let ps_parts = ps_density_decomposition(
        &built.projector,
        &built.preselection,
        &built.pointer,
        &built.config,
    )
    .unwrap();
    let ps_mass = interference_report(&ps_parts).unwrap().cross_l1;

    let pass = worst_consistency <= 1e-12
        && worst_mass_error <= 1e-10
        && pps_mass > 0.05
        && ps_mass <= 1e-9;
    verdict(
        5,
        "density decomposition",
        pass,
        &format!(
            "100 randomized cases: max |components - |pointer|^2| {worst_consistency:.3e} \
             (tol 1e-12), max unit-mass error {worst_mass_error:.3e} (tol 1e-10); anomalous \
             scenario cross mass {pps_mass:.4} (> 0.05) vs preselected {ps_mass:.3e} (<= 1e-9)"
        ),
    );
}

#[test]
fn criterion_6_momentum_law() {
    let grid = battery_grid(1024).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x66);
    let mut worst_ps_shift = 0.0f64;
    for trial in 0..200 {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let psi = random_state(&mut rng, dim);
        let phi = gaussian_pointer(grid, 0.0, rng.gen_range(0.8..1.3)).unwrap();
        let cfg = MeasurementConfig::with_gamma(rng.gen_range(-8.0..8.0)).unwrap();
        let state = ps_measure(&a, &psi, &phi, &cfg).unwrap();
        worst_ps_shift = worst_ps_shift.max(momentum_shift(&phi, &state, 1.0).unwrap().abs());
    }

    // Shipped complex-weak-value scenario: a genuine momentum kick,
    // confirmed through the oracle route.
    let scenario = shipped("complex-weak-value.json");
    let built = scenario.build().unwrap();
    let post = built.postselection.as_ref().unwrap();
    let closed = pps_pointer_state(
        &built.projector,
        &built.preselection,
        post,
        &built.pointer,
        &built.config,
    )
    .unwrap();
    let closed_shift = momentum_shift(&built.pointer, &closed.pointer, built.config.hbar).unwrap();
    let evolved = momentum_space_evolve(
        &built.projector,
        &built.preselection,
        &built.pointer,
        &built.config,
        &OracleConfig::default(),
    )
    .unwrap();
    let (oracle_pointer, _) = postselect(&evolved, post).unwrap();
    let oracle_shift = momentum_shift(&built.pointer, &oracle_pointer, built.config.hbar).unwrap();

    let pass = worst_ps_shift <= 1e-10
        && closed_shift.abs() > 1e-3
        && oracle_shift.abs() > 1e-3
        && (closed_shift - oracle_shift).abs() <= 1e-9;
    verdict(
        6,
        "momentum law",
        pass,
        &format!(
            "200 preselected cases: max |momentum shift| {worst_ps_shift:.3e} (tol 1e-10); \
             complex weak value shifts momentum by {closed_shift:.6} \
             (oracle {oracle_shift:.6}, both > 1e-3)"
        ),
    );
}

#[test]
fn criterion_7_weak_value_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x77);
    let mut worst_sum = 0.0f64;
    let mut worst_pin = 0.0f64;
    for trial in 0..200 {
        let dim = [2usize, 4, 8][trial % 3];
        let rank = rng.gen_range(1..dim);
        let a = random_projector(&mut rng, dim, rank);
        let pre = random_state(&mut rng, dim);
        let post = loop {
            let candidate = random_state(&mut rng, dim);
            if candidate.inner(&pre).unwrap().norm() > 0.05 {
                break candidate;
            }
        };
        let w = weak_value(&a, &pre, &post).unwrap();
        let w_complement = weak_value(&a.complement(), &pre, &post).unwrap();
        worst_sum = worst_sum.max((w + w_complement - Complex64::new(1.0, 0.0)).norm());

        // Eigenvector preselection pins the weak value to the eigenvalue.
        if let Ok(eigenvector) =
            vnpointer_core::system::SystemState::normalized(a.apply(pre.amplitudes()))
        {
            if let Ok(post_inner) = post.inner(&eigenvector) {
                if post_inner.norm() > 0.05 {
                    let pinned = weak_value(&a, &eigenvector, &post).unwrap();
                    worst_pin = worst_pin.max((pinned - Complex64::new(1.0, 0.0)).norm());
                    let zero = weak_value(&a.complement(), &eigenvector, &post).unwrap();
                    worst_pin = worst_pin.max(zero.norm());
                }
            }
        }
    }

    let scenario = shipped("anomalous-weak-value.json");
    let built = scenario.build().unwrap();
    let w = weak_value(
        &built.projector,
        &built.preselection,
        built.postselection.as_ref().unwrap(),
    )
    .unwrap();
    let exact = 1.0 + std::f64::consts::FRAC_1_SQRT_2;
    let anomalous_error = (w - Complex64::new(exact, 0.0)).norm();

    let pass = worst_sum <= 1e-12
        && worst_pin <= 1e-12
        && anomalous_error <= 1e-6
        && (w.re - 1.7071067).abs() <= 1e-6;
    verdict(
        7,
        "weak-value algebra",
        pass,
        &format!(
            "complement sums deviate by {worst_sum:.3e} (tol 1e-12); eigenvector pinning \
             deviates by {worst_pin:.3e} (tol 1e-12); shipped anomalous A_w = {:.7} \
             (exact 1+1/sqrt2, error {anomalous_error:.3e})",
            w.re
        ),
    );
}

#[test]
fn criterion_8_weak_limit() {
    let files = [
        "eigenstate.json",
        "symmetric-superposition.json",
        "anomalous-weak-value.json",
        "complex-weak-value.json",
        "gamma-sweep.json",
    ];
    let mut detail = String::new();
    let mut pass = true;
    for name in files {
        let mut scenario = shipped(name);
        scenario.gamma = 1e-3 * scenario.pointer.sigma;
        let built = scenario.build().unwrap();
        let post = built.postselection.as_ref().unwrap();
        let result = pps_pointer_state(
            &built.projector,
            &built.preselection,
            post,
            &built.pointer,
            &built.config,
        )
        .unwrap();
        let shift =
            position_expectation(&result.pointer) - position_expectation(&built.pointer);
        let expected = scenario.gamma * result.report.weak_value.re;
        let relative = (shift - expected).abs() / expected.abs();
        pass &= relative < 0.01;
        detail.push_str(&format!("{name}: rel err {relative:.2e}; "));
    }
    verdict(
        8,
        "weak-measurement limit",
        pass,
        &format!("pointer shift vs gamma*Re(A_w) at gamma = 1e-3 sigma: {detail}"),
    );
}

#[test]
fn criterion_9_determinism_and_round_trip() {
    let binary = env!("CARGO_BIN_EXE_vnpointer");
    let tmp = tempfile::tempdir().unwrap();
    let scenario_path = scenarios_dir().join("anomalous-weak-value.json");

    // Byte-identical artifacts across repeated runs.
    let mut identical = true;
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    for out in [&out_a, &out_b] {
        let status = Command::new(binary)
            .args(["run", scenario_path.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .output()
            .expect("binary runs");
        assert!(status.status.success());
    }
    for name in ["ps_density.csv", "pps_density.csv", "report.json"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        identical &= a == b;
    }

    // Dump/reload is lossless and canonical.
    let dumped = tmp.path().join("dumped.json");
    let status = Command::new(binary)
        .args([
            "run",
            scenario_path.to_str().unwrap(),
            "--dump-config",
            dumped.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(status.status.success());
    let original = Scenario::load(&scenario_path).unwrap();
    let reloaded = Scenario::load(&dumped).unwrap();
    let lossless = original == reloaded && reloaded.dump_string() == original.dump_string();

    verdict(
        9,
        "determinism and round-trip",
        identical && lossless,
        &format!(
            "repeated runs byte-identical: {identical}; dump-config reload identical: {lossless}"
        ),
    );
}
