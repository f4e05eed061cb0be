mod common;

use common::*;
use ndarray::Array2;
use superatom::dynamics::{basis_ket, evolve_master, ket_to_dm, MasterOptions};
use superatom::hilbert::{microscopic_basis, CollectiveBasis};
use superatom::linalg::{dagger, hermitian_eigenvalues, identity, kron, trace};
use superatom::models::*;
use superatom::{Error, Matrix, C64};

fn lossy(n: usize) -> PhysicalParams {
    PhysicalParams {
        g: 0.7,
        big_g: 0.9,
        g_phase: 0.4,
        rabi: 1.1,
        kappa: 0.3,
        gamma_e: 0.25,
        gamma_r: 0.05,
        gamma_m: 0.02,
        n_m: 1.5,
        ..PhysicalParams::with_detunings(n, 1.3, -0.8)
    }
}

/// `I ⊗ I ⊗ V` with the isometry's columns in collective-basis order.
fn symmetric_isometry(n: usize, cut: Cutoffs) -> Matrix {
    let micro = microscopic_basis(n, true, None, "atoms").unwrap();
    let coll = CollectiveBasis::new(n, "atoms").unwrap();
    let emb = micro.symmetric_embedding();
    let mut v = Matrix::zeros((micro.dim(), coll.dim()));
    for (k, &label) in emb.labels().iter().enumerate() {
        v.column_mut(coll.index(label).unwrap()).assign(&emb.isometry().column(k));
    }
    kron(&identity(cut.phonon * cut.cavity), &v)
}

#[test]
fn every_builder_preserves_trace() {
    let mut r = rng(1);
    let p = lossy(1);
    let cool = CoolingParams::from_rate(0.1, 100.0);
    let ld = LongDistanceParams { g_m: 0.3, g_at: 0.5, k_l_m: 1.0, z_bar: 0.4, drive: 0.2 };
    let mut p2 = lossy(2);
    p2.gamma_e = 0.0;
    let dispersive = PhysicalParams { rabi: 0.5, big_g: 0.5, ..lossy(3) }.clone();
    let dispersive = PhysicalParams { omega_0: 10.0, omega_ge: 12.0, ..dispersive };
    let models = vec![
        build_microscopic(&p, Cutoffs::new(2, 2)).unwrap(),
        build_microscopic(&lossy(2), Cutoffs::new(2, 2)).unwrap(),
        build_symmetric(&p, Cutoffs::new(3, 2)).unwrap(),
        build_symmetric(&p2, Cutoffs::new(2, 3)).unwrap(),
        build_effective_n(&dispersive, 3, false).unwrap(),
        build_effective_n(&dispersive, 1, true).unwrap(),
        build_cooling(&dispersive, &cool, 4).unwrap(),
        build_long_distance(&ld, &lossy(5), LongDistanceMode::ResonantLimit, 4).unwrap(),
        build_long_distance(&ld, &lossy(1), LongDistanceMode::Positional, 4).unwrap(),
        build_semiclassical(3, 0.5, 0.7, 1.0, 0.35).unwrap(),
    ];
    for m in &models {
        let probes: Vec<Matrix> = (0..3).map(|_| random_hermitian(m.dim(), &mut r)).collect();
        let defect = m.trace_defect(&probes);
        assert!(defect < 1e-10, "{}: {defect:e}", m.name());
        assert!(m.trace_preservation_defect() < 1e-10, "{}", m.name());
        m.check_hermitian(1e-12).unwrap();
    }
}

#[test]
fn symmetric_model_is_compression_of_microscopic() {
    // Per-atom decay projected onto the symmetric subspace: P σ_i|S⟩ = L|S⟩/N
    // for symmetric |S⟩, so V† L_micro[VρV†] V reproduces the collective blocks.
    for n in [1, 2, 3] {
        let mut p = lossy(n);
        p.gamma_r = 0.0;
        let cut = Cutoffs::new(2, 2);
        let micro = build_microscopic(&p, cut).unwrap();
        let sym = build_symmetric(&p, cut).unwrap();
        let w = symmetric_isometry(n, cut);
        assert_eq!(w.dim(), (micro.dim(), sym.dim()));
        let h_c = dagger(&w).dot(&micro.hamiltonian().to_dense()).dot(&w);
        assert!(max_diff(&h_c, &sym.hamiltonian().to_dense()) < 1e-12, "H, N = {n}");
        let mut r = rng(n as u64);
        for _ in 0..3 {
            let rho = random_hermitian(sym.dim(), &mut r);
            let lifted = micro.apply(&w.dot(&rho).dot(&dagger(&w)));
            let compressed = dagger(&w).dot(&lifted).dot(&w);
            assert!(max_diff(&compressed, &sym.apply(&rho)) < 1e-12, "N = {n}");
        }
    }
}

#[test]
fn symmetric_leakage_is_the_nonsymmetric_gain() {
    let n = 3;
    let mut p = lossy(n);
    p.gamma_r = 0.0;
    let cut = Cutoffs::new(2, 2);
    let micro = build_microscopic(&p, cut).unwrap();
    let sym = build_symmetric(&p, cut).unwrap();
    assert!(sym.warnings().iter().any(|w| w.contains("leak")));
    let w = symmetric_isometry(n, cut);
    let p_sym = w.dot(&dagger(&w));
    let mut r = rng(9);
    let rho = random_density(sym.dim(), &mut r);
    let lifted = micro.apply(&w.dot(&rho).dot(&dagger(&w)));
    let nonsym_rate = (trace(&lifted) - trace(&p_sym.dot(&lifted))).re;
    let sym_loss = -trace(&sym.apply(&rho)).re;
    assert!(nonsym_rate > 1e-3);
    assert!((nonsym_rate - sym_loss).abs() < 1e-12);
}

#[test]
fn rydberg_decay_matches_compression_only_from_single_rydberg_excitation() {
    // Γ_r D[|E^j⟩⟨E^jR|] returns all of E^jR to E^j; the per-atom decay returns
    // only (N−j)/N of it to the symmetric subspace.
    let n = 3;
    let p = PhysicalParams { gamma_r: 0.4, ..PhysicalParams::with_detunings(n, 1.0, 1.0) };
    let cut = Cutoffs::new(1, 1);
    let micro = build_microscopic(&p, cut).unwrap();
    let sym = build_symmetric(&p, cut).unwrap();
    let w = symmetric_isometry(n, cut);
    let coll = CollectiveBasis::new(n, "atoms").unwrap();
    for j in 0..n {
        let k = coll.index(superatom::CollectiveLabel::ER(j)).unwrap();
        let rho = ket_to_dm(&basis_ket(sym.dim(), k).unwrap());
        let compressed = dagger(&w).dot(&micro.apply(&w.dot(&rho).dot(&dagger(&w)))).dot(&w);
        let gain_micro = trace(&compressed).re + 2.0 * p.gamma_r;
        let gain_sym = trace(&sym.apply(&rho)).re + 2.0 * p.gamma_r;
        assert!((gain_sym - 2.0 * p.gamma_r).abs() < 1e-12);
        let expect = 2.0 * p.gamma_r * (n - j) as f64 / n as f64;
        assert!((gain_micro - expect).abs() < 1e-12, "j = {j}: {gain_micro} vs {expect}");
    }
}

#[test]
fn single_atom_models_share_liouvillian_spectrum() {
    let p = lossy(1);
    let cut = Cutoffs::new(2, 2);
    let micro = build_microscopic(&p, cut).unwrap();
    let sym = build_symmetric(&p, cut).unwrap();
    assert_eq!(micro.dim(), 12);
    let a = hermitian_eigenvalues(&micro.hamiltonian().to_dense()).unwrap();
    let b = hermitian_eigenvalues(&sym.hamiltonian().to_dense()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
    let la = superatom::dynamics::liouvillian(&micro).unwrap();
    let lb = superatom::dynamics::liouvillian(&sym).unwrap();
    let w = symmetric_isometry(1, cut);
    // the two bases differ by a permutation, so the superoperators are similar
    let s = kron(&w.mapv(|z| z.conj()), &w);
    assert!(max_diff(&s.t().mapv(|z| z.conj()).dot(&la).dot(&s), &lb) < 1e-12);
}

#[test]
fn blockaded_pair_stays_symmetric_without_dissipation() {
    let p = PhysicalParams { g: 0.8, big_g: 0.6, rabi: 1.0, ..PhysicalParams::with_detunings(2, 0.5, 0.3) };
    let cut = Cutoffs::new(2, 2);
    let micro = build_microscopic(&p, cut).unwrap();
    let w = symmetric_isometry(2, cut);
    let coll = CollectiveBasis::new(2, "atoms").unwrap();
    // one phonon, cavity empty, atoms in |E^0R⟩
    let k = coll.dim() * cut.cavity + coll.index(superatom::CollectiveLabel::ER(0)).unwrap();
    let psi = w.dot(&basis_ket(w.dim().1, k).unwrap());
    let run = evolve_master(&micro, &ket_to_dm(&psi), &grid(10.0, 20), &MasterOptions::default()).unwrap();
    let p_sym = w.dot(&dagger(&w));
    for rho in &run.states {
        assert!((1.0 - trace(&p_sym.dot(rho)).re).abs() < 1e-8);
    }
}

#[test]
fn collective_dimension_scales_linearly() {
    let p = PhysicalParams { g: 1.0, ..PhysicalParams::with_detunings(1000, 1.0, 1.0) };
    let m = build_symmetric(&p, Cutoffs::new(2, 2)).unwrap();
    assert_eq!(m.dim(), 8004);
}

#[test]
fn free_evolution_keeps_populations() {
    let p = PhysicalParams::with_detunings(2, 0.7, -0.3);
    let m = build_microscopic(&p, Cutoffs::new(2, 2)).unwrap();
    let mut r = rng(4);
    let rho = random_density(m.dim(), &mut r);
    let d = m.apply(&rho);
    for i in 0..m.dim() {
        assert!(d[[i, i]].norm() < 1e-14);
    }
}

#[test]
fn approximate_and_exact_couplings_agree_in_the_dispersive_limit() {
    let p = PhysicalParams { g: 1.0, big_g: 1.0, rabi: 1.0, ..PhysicalParams::with_detunings(100, 10.0, 10.0) };
    let approx = effective_rates_approx(&p).unwrap();
    assert!((approx.g_eff - 0.1).abs() < 1e-14);
    // ḡ² = Δ_cΔ_e here: the closed form has a pole
    assert!(matches!(effective_rates_exact(&p), Err(Error::Singular(_))));
    let p1 = PhysicalParams { n_atoms: 1, ..p };
    let exact = effective_rates_exact(&p1).unwrap();
    let approx = effective_rates_approx(&p1).unwrap();
    assert!((exact.g_eff.abs() / approx.g_eff - 1.0).abs() < 0.02);
    assert!((exact.delta_g.abs() / approx.delta_g - 1.0).abs() < 0.02);
    assert!((exact.delta_r.abs() / approx.delta_r - 1.0).abs() < 0.02);
}

#[test]
fn exact_rates_examples() {
    let p = PhysicalParams { g: 0.1, big_g: 1.0, rabi: 1.0, ..PhysicalParams::with_detunings(1, 10.0, 10.0) };
    let r = effective_rates_exact(&p).unwrap();
    assert!((r.g_eff - 0.1 / (0.01 - 100.0)).abs() < 1e-15);
    assert!(r.exact_jump_gamma.iter().all(|z| z.norm() == 0.0));
    // Δ_c ↔ Δ_e, κ ↔ Γ_e, G ↔ Ω swaps the two shifts
    let a = PhysicalParams { kappa: 0.2, gamma_e: 0.7, big_g: 0.4, rabi: 1.3, g: 0.9, ..PhysicalParams::with_detunings(2, 3.0, 5.0) };
    let b = PhysicalParams { kappa: 0.7, gamma_e: 0.2, big_g: 1.3, rabi: 0.4, g: 0.9, ..PhysicalParams::with_detunings(2, 5.0, 3.0) };
    let (ra, rb) = (effective_rates_exact(&a).unwrap(), effective_rates_exact(&b).unwrap());
    assert!((ra.delta_g - rb.delta_r).abs() < 1e-14 && (ra.delta_r - rb.delta_g).abs() < 1e-14);
    assert!((ra.g_eff - rb.g_eff).abs() < 1e-14);
}

#[test]
fn avoided_crossing_splitting_is_twice_the_effective_coupling() {
    let p = PhysicalParams { g: 0.1, big_g: 1.0, rabi: 1.0, ..PhysicalParams::with_detunings(1, 10.0, 10.0) };
    let m = build_symmetric(&p, Cutoffs::new(2, 2)).unwrap();
    // single-excitation block: |1,0,E⁰⟩, |0,1,E⁰⟩, |0,0,E¹⟩, |0,0,E⁰R⟩
    let idx = [6, 3, 1, 2];
    let h = &m.hamiltonian().to_dense();
    let block = Array2::from_shape_fn((4, 4), |(i, j)| h[[idx[i], idx[j]]]);
    let mut ev = hermitian_eigenvalues(&block).unwrap().to_vec();
    ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let splitting = (ev[0] - ev[1]).abs();
    let g_eff = effective_rates_exact(&p).unwrap().g_eff;
    assert!((splitting / (2.0 * g_eff.abs()) - 1.0).abs() < 0.05, "{splitting} vs {g_eff}");
}

#[test]
fn effective_rydberg_decay_matches_symmetric_model() {
    let p = PhysicalParams { gamma_e: 3.0, rabi: 10.0, ..PhysicalParams::with_detunings(1, 100.0, 100.0) };
    let rates = effective_rates_approx(&p).unwrap();
    assert!((rates.gamma_r_eff - 0.03).abs() < 1e-15);
    let m = build_symmetric(&p, Cutoffs::new(1, 1)).unwrap();
    let times = grid(20.0, 40);
    let run = evolve_master(&m, &ket_to_dm(&basis_ket(3, 2).unwrap()), &times, &MasterOptions::default()).unwrap();
    let p_r: Vec<f64> = run.states.iter().map(|r| r[[2, 2]].re).collect();
    // D[·] convention: population decays at 2Γ_r^eff
    let rate = -((p_r[40] / p_r[20]).ln()) / (times[40] - times[20]) / 2.0;
    assert!((rate / rates.gamma_r_eff - 1.0).abs() < 0.05, "{rate}");
}

#[test]
fn effective_model_errors_and_examples() {
    let p = PhysicalParams { g: 1.0, big_g: 1.0, rabi: 1.0, ..PhysicalParams::with_detunings(1, 10.0, 10.0) };
    assert!(matches!(build_effective_n(&p, 0, false), Err(Error::InvalidArgument(_))));
    assert!(matches!(build_effective_n(&p, 2, true), Err(Error::Unsupported(_))));
    let zero = PhysicalParams::with_detunings(1, 10.0, 10.0);
    let m = build_effective_n(&zero, 2, false).unwrap();
    let h = &m.hamiltonian().to_dense();
    for ((i, j), z) in h.indexed_iter() {
        if i != j {
            assert_eq!(z.norm(), 0.0);
        }
    }
}

#[test]
fn phase_of_optomechanical_coupling_is_a_gauge() {
    let p = lossy(2);
    let q = PhysicalParams { g_phase: p.g_phase + 1.9, ..p.clone() };
    let (a, b) = (
        build_symmetric(&p, Cutoffs::new(3, 2)).unwrap(),
        build_symmetric(&q, Cutoffs::new(3, 2)).unwrap(),
    );
    let ea = hermitian_eigenvalues(&a.hamiltonian().to_dense()).unwrap();
    let eb = hermitian_eigenvalues(&b.hamiltonian().to_dense()).unwrap();
    for (x, y) in ea.iter().zip(&eb) {
        assert!((x - y).abs() < 1e-12);
    }
    // observable dynamics agree: phonon number from the same initial state
    let times = grid(3.0, 6);
    // one phonon, empty cavity, atoms in E⁰
    let psi = basis_ket(a.dim(), 10).unwrap();
    let ra = evolve_master(&a, &ket_to_dm(&psi), &times, &MasterOptions::default()).unwrap();
    let rb = evolve_master(&b, &ket_to_dm(&psi), &times, &MasterOptions::default()).unwrap();
    for (x, y) in ra.states.iter().zip(&rb.states) {
        for i in 0..a.dim() {
            assert!((x[[i, i]] - y[[i, i]]).norm() < 1e-7);
        }
    }
}

#[test]
fn long_distance_examples() {
    let ld = LongDistanceParams::from_collective(0.5, 4);
    assert!((ld.g_bar_eff(4) - 0.5).abs() < 1e-14);
    let p = PhysicalParams::with_detunings(4, 1.0, 1.0);
    // k z̄ = 0: the sine-weighted blocks vanish and the coupling is Ḡ_eff
    let m = build_long_distance(&ld, &p, LongDistanceMode::Positional, 3).unwrap();
    let r = build_long_distance(&ld, &p, LongDistanceMode::ResonantLimit, 3).unwrap();
    assert!(max_diff(&m.hamiltonian().to_dense(), &r.hamiltonian().to_dense()) < 1e-14);
    assert_eq!(m.terms().len(), 1);
    // lossless resonant limit: |R,0⟩ ↔ |G,1⟩ with p_R = cos²(Ḡt)
    let p1 = PhysicalParams::with_detunings(1, 1.0, 1.0);
    let ld1 = LongDistanceParams { g_m: 0.8, g_at: 0.8, ..Default::default() };
    let m1 = build_long_distance(&ld1, &p1, LongDistanceMode::ResonantLimit, 3).unwrap();
    let gbar = ld1.g_bar_eff(1);
    let lossless = superatom::LindbladModel::new("jcm", m1.hamiltonian().clone());
    let times = grid(6.0, 30);
    let tight = MasterOptions { tol: superatom::dynamics::Tolerances { atol: 1e-12, rtol: 1e-11 }, ..Default::default() };
    let run = evolve_master(&lossless, &ket_to_dm(&basis_ket(6, 1).unwrap()), &times, &tight).unwrap();
    for (t, rho) in times.iter().zip(&run.states) {
        assert!((rho[[1, 1]].re - (gbar * t).cos().powi(2)).abs() < 1e-7, "{t}: {} vs {}", rho[[1, 1]].re, (gbar * t).cos().powi(2));
        assert!((rho[[2, 2]].re - (gbar * t).sin().powi(2)).abs() < 1e-7);
    }
}

#[test]
fn positional_detuning_block_trace_defect_is_analytic() {
    // 2Δ_at sin²(kz̄)(2Nσ_GRρσ_RG − σ_RRρ − ρσ_RR) gains 4Δ_at sin²(kz̄)(N−1)p_R
    let ld = LongDistanceParams { g_m: 0.3, g_at: 0.6, k_l_m: 1.0, z_bar: 0.7, drive: 0.0 };
    let n = 3;
    let p = PhysicalParams::with_detunings(n, 1.0, 1.0);
    let m = build_long_distance(&ld, &p, LongDistanceMode::Positional, 3).unwrap();
    assert!(m.warnings().iter().any(|w| w.contains("trace")));
    let mut r = rng(3);
    let rho = random_density(m.dim(), &mut r);
    let p_r: f64 = (0..3).map(|k| rho[[2 * k + 1, 2 * k + 1]].re).sum();
    let expect = 4.0 * ld.delta_at() * ld.phase().sin().powi(2) * (n - 1) as f64 * p_r;
    assert!((trace(&m.apply(&rho)).re - expect).abs() < 1e-12);
}

#[test]
fn semiclassical_without_laser_never_reaches_rydberg() {
    let m = build_semiclassical(3, 0.4, 0.7, 0.0, 0.35).unwrap();
    let basis = microscopic_basis(3, true, None, "atoms").unwrap();
    let n_r = basis.level_count_op(superatom::hilbert::AtomLevel::R);
    let run = evolve_master(&m, &ket_to_dm(&basis_ket(m.dim(), 0).unwrap()), &grid(10.0, 10), &MasterOptions::default()).unwrap();
    for rho in &run.states {
        assert!(n_r.expect_rho(rho).re.abs() < 1e-12);
    }
}

#[test]
fn paper_feasibility_table_passes() {
    let tau = 2.0 * std::f64::consts::PI;
    let p = PhysicalParams {
        kappa: tau,
        g: tau,
        rabi: 10.0 * tau,
        big_g: 10.0 * tau,
        gamma_e: 3.0 * tau,
        gamma_r: 3.0 * tau / 1000.0,
        gamma_m: 0.01 * tau,
        n_m: 0.0,
        ..PhysicalParams::with_detunings(1000, 100.0 * tau, 100.0 * tau)
    };
    let report = check_strong_coupling(&p, DEFAULT_MARGIN);
    assert!(report.pass, "{report:?}");
    assert!(report.terms.iter().all(|t| t.ratio >= 10.0));
    let weak = PhysicalParams { kappa: 100.0 * tau, ..p };
    assert!(!check_strong_coupling(&weak, DEFAULT_MARGIN).pass);
}

#[test]
fn validation_rejects_bad_records() {
    let mut p = PhysicalParams::with_detunings(0, 1.0, 1.0);
    assert!(build_symmetric(&p, Cutoffs::new(2, 2)).is_err());
    p.n_atoms = 1;
    p.kappa = -1.0;
    assert!(matches!(build_microscopic(&p, Cutoffs::new(2, 2)), Err(Error::InvalidArgument(_))));
    p.kappa = 0.0;
    p.omega_gr = 0.3;
    let m = build_symmetric(&p, Cutoffs::new(2, 2)).unwrap();
    assert!(m.warnings().iter().any(|w| w.contains("resonance")));
    let _ = C64::from(0.0);
}
