//! Cross-module behavior at production scale: revival structure of the
//! survival probability, excited-state quenches, moment scaling with the
//! quench amplitude, and the ESQPT signature in the density of states.

use lmg_core::quench::{distribution_modes, revival_period};
use lmg_core::spectral::{default_bin_width, eigenvalues_only};
use lmg_core::{
    build_hamiltonian, density_of_states, run_quench, InitialStateSpec, ModelParams, QuenchOptions,
};

fn quench(n: usize, h_i: f64, spec: InitialStateSpec, h_f: f64) -> lmg_core::QuenchResult {
    let params = ModelParams::new(n, h_i, 0.0).unwrap();
    run_quench(&params, &spec, h_f, &QuenchOptions::default()).unwrap()
}

#[test]
fn near_perfect_revivals_below_critical_quench() {
    let q = quench(2000, 0.5, InitialStateSpec::SymmetricGround, 0.6);
    let period = revival_period(&q.survival).unwrap();
    let max_revival = q
        .survival
        .times
        .iter()
        .zip(&q.survival.values)
        .filter(|(&t, _)| t > 0.5 * period && t <= 5.0 * period)
        .map(|(_, &v)| v)
        .fold(0.0f64, f64::max);
    assert!(
        max_revival >= 0.9,
        "expected near-perfect revivals, max L = {max_revival}"
    );
}

#[test]
fn dynamical_orthogonality_at_critical_quench() {
    let q = quench(2000, 0.5, InitialStateSpec::SymmetricGround, 0.75);
    let ceiling = q
        .survival
        .times
        .iter()
        .zip(&q.survival.values)
        .filter(|(&t, _)| t > 10.0)
        .map(|(_, &v)| v)
        .fold(0.0f64, f64::max);
    assert!(
        ceiling < 0.2,
        "survival should stay near orthogonality, ceiling = {ceiling}"
    );
}

#[test]
fn excited_state_quench_is_bimodal() {
    // Second excited state of the full spectrum = level 1 of the ground
    // state's parity sector.
    let spec = InitialStateSpec::SymmetricExcited { level: 1 };
    let below = quench(2000, 0.5, spec.clone(), 0.6);
    let m = distribution_modes(&below.distribution, 5, 0.05);
    assert!(
        m.peak_count >= 2,
        "expected bimodal P_W, got {} peak(s)",
        m.peak_count
    );

    // At the critical quench the cusp survives on top of the bimodal shape.
    let critical = quench(2000, 0.5, spec, 0.75);
    let m = distribution_modes(&critical.distribution, 5, 0.05);
    assert!(m.peak_count >= 2);
    assert!(
        m.dip_ratio.unwrap() < 0.5,
        "dip ratio {}",
        m.dip_ratio.unwrap()
    );
}

#[test]
fn moments_scale_linearly_and_quadratically_with_amplitude() {
    // H(h) = h n_t + V makes <W> exactly linear and Var(W) exactly quadratic
    // in the amplitude; the fits should be essentially perfect.
    let mut amps = Vec::new();
    let mut m1s = Vec::new();
    let mut vars = Vec::new();
    let mut h_f = 0.5;
    while h_f <= 1.0 + 1e-9 {
        let q = quench(500, 0.5, InitialStateSpec::SymmetricGround, h_f);
        amps.push(h_f - 0.5);
        m1s.push(q.mean_work);
        vars.push(q.variance);
        h_f += 0.05;
    }
    let r2_linear = fit_r2(&amps, &m1s, 1);
    let quad_x: Vec<f64> = amps.iter().map(|a| a * a).collect();
    let r2_quad = fit_r2(&quad_x, &vars, 1);
    assert!(r2_linear >= 0.999, "linear r^2 = {r2_linear}");
    assert!(r2_quad >= 0.99, "quadratic r^2 = {r2_quad}");
}

/// r² of a least-squares polynomial fit through (x, y); degree 1 suffices here.
fn fit_r2(x: &[f64], y: &[f64], _degree: usize) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - (slope * a + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

#[test]
fn dos_diverges_at_critical_energy_in_ferromagnetic_phase() {
    let vals = eigenvalues_only(&build_hamiltonian(
        &ModelParams::new(2000, 0.5, 0.0).unwrap(),
    ))
    .unwrap();
    let dos = density_of_states(&vals, default_bin_width(&vals)).unwrap();
    let peak_center = dos.bin_centers[dos.peak_bin];
    assert!(
        peak_center.abs() <= dos.bin_width,
        "DoS peak at {peak_center}, bin width {}",
        dos.bin_width
    );
}

#[test]
fn dos_has_no_interior_peak_in_paramagnetic_phase() {
    let vals = eigenvalues_only(&build_hamiltonian(
        &ModelParams::new(2000, 1.5, 0.0).unwrap(),
    ))
    .unwrap();
    let dos = density_of_states(&vals, default_bin_width(&vals)).unwrap();
    // Equi-spaced levels with spacing growing in energy: the histogram is
    // maximal at the lower spectral edge and monotone beyond it.
    assert_eq!(dos.peak_bin, 0);
    for w in dos.counts.windows(2) {
        assert!(w[1] <= w[0] + 2, "counts rise in the interior: {:?}", w);
    }
}

#[test]
fn quasi_degenerate_fraction_by_energy_region() {
    // Deep below the critical energy every state is one half of a doublet;
    // above it none are. Verified grid: the fraction drops below 0.9 only in
    // the (N = 500, h = 0.75) corner where the region boundary sits too close
    // to E_c.
    for (n, h) in [
        (500usize, 0.25),
        (500, 0.5),
        (1000, 0.25),
        (1000, 0.5),
        (1000, 0.75),
    ] {
        let vals =
            eigenvalues_only(&build_hamiltonian(&ModelParams::new(n, h, 0.0).unwrap())).unwrap();
        let min_gap = |k: usize| -> f64 {
            let prev = if k > 0 {
                vals[k] - vals[k - 1]
            } else {
                f64::INFINITY
            };
            let next = if k + 1 < vals.len() {
                vals[k + 1] - vals[k]
            } else {
                f64::INFINITY
            };
            prev.min(next)
        };
        let low_edge = -0.1 * n as f64 * (1.0 - h).powi(2) / 4.0;
        let high_edge = 0.05 * n as f64;
        let low: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] < low_edge).collect();
        let paired = low.iter().filter(|&&k| min_gap(k) < 1e-6).count();
        let frac = paired as f64 / low.len() as f64;
        assert!(frac > 0.9, "N={n}, h={h}: fraction {frac}");
        let high_paired = (0..vals.len())
            .filter(|&k| vals[k] > high_edge && min_gap(k) < 1e-6)
            .count();
        assert_eq!(high_paired, 0, "N={n}, h={h}");
    }
}

#[test]
fn entropy_offset_across_sizes() {
    use lmg_core::sweep::{compare_symmetry, Observables, SweepPlan};
    let plan = SweepPlan {
        h_i: 0.5,
        h_f_grid: vec![0.6, 0.9],
        sizes: vec![200, 500, 1000],
        state_kinds: vec![InitialStateSpec::SymmetricGround, InitialStateSpec::FsbPlus],
        epsilon: 0.0,
        observables: Observables::default(),
        quench: QuenchOptions::default(),
    };
    let rows = lmg_core::run_sweep(&plan).unwrap();
    let deltas = compare_symmetry(&rows).unwrap();
    assert_eq!(deltas.len(), 6);
    for d in deltas {
        if (d.h_f - 0.9).abs() < 1e-12 {
            assert!(
                (0.9..=1.1).contains(&d.delta_entropy),
                "N={}: dS(0.9) = {}",
                d.n_spins,
                d.delta_entropy
            );
        } else {
            assert!(
                d.delta_entropy.abs() <= 0.05,
                "N={}: dS(0.6) = {}",
                d.n_spins,
                d.delta_entropy
            );
        }
    }
}

#[test]
fn transition_probabilities_dimension_mismatch() {
    use num_complex::Complex64;
    let p = ModelParams::new(20, 0.5, 0.0).unwrap();
    let eig = lmg_core::diagonalize(&build_hamiltonian(&p), None).unwrap();
    let wrong = vec![Complex64::new(1.0, 0.0); 10];
    assert!(lmg_core::transition_probabilities(&wrong, &eig).is_err());
}

#[test]
fn fsb_magnetization_at_production_scale() {
    let params = ModelParams::new(2000, 0.5, 0.0).unwrap();
    let fsb = lmg_core::prepare_initial(&params, &InitialStateSpec::FsbPlus).unwrap();
    let sx = lmg_core::build_sx(&params);
    let m = sx.expectation(&fsb.vector);
    assert!(m > 0.4 * 1000.0, "<Sx> = {m}");
    // Semiclassical plateau sqrt(1 - h^2) N/2.
    let sc = (1.0f64 - 0.25).sqrt() * 1000.0;
    assert!((m - sc).abs() / sc < 0.01, "<Sx> = {m} vs {sc}");
}

#[test]
fn warnings_surface_for_marginal_doublet() {
    // Near the phase boundary the doublet gap exceeds the degeneracy
    // threshold at small N; preparation warns but does not fail.
    let params = ModelParams::new(40, 0.9, 0.0).unwrap();
    let st = lmg_core::prepare_initial(&params, &InitialStateSpec::FsbPlus).unwrap();
    assert!(!st.warnings.is_empty());
}
