mod common;

use common::*;
use ndarray::Array2;
use proptest::prelude::*;
use superatom::analysis::*;
use superatom::dynamics::{basis_ket, ket_to_dm, min_eigenvalue, MasterOptions, Tolerances};
use superatom::hilbert::{fock_space, microscopic_basis, AtomLevel, MicroscopicBasis, SpaceSpec};
use superatom::linalg::{dagger, trace};
use superatom::models::*;
use superatom::{Matrix, Vector, C64};

use AtomLevel::{E, G, R};

fn ket(basis: &MicroscopicBasis, terms: &[(&[AtomLevel], f64)]) -> Vector {
    let mut v = Vector::zeros(basis.dim());
    for (levels, c) in terms {
        v[basis.index_of(levels).unwrap()] += C64::from(*c);
    }
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv(|z| z / n)
}

#[test]
fn ground_state_is_symmetric() {
    let b = microscopic_basis(3, true, None, "atoms").unwrap();
    let rho = ket_to_dm(&ket(&b, &[(&[G, G, G], 1.0)]));
    let p = subspace_populations(&rho, b.space(), 0.0).unwrap();
    assert!((p.p_symmetric - 1.0).abs() < 1e-12 && p.p_nonsymmetric.abs() < 1e-12);
    assert!((p.p_g - 1.0).abs() < 1e-12 && p.p_r.abs() < 1e-12);
}

#[test]
fn antisymmetric_rydberg_state_is_nonsymmetric() {
    let b = microscopic_basis(2, true, None, "atoms").unwrap();
    let rho = ket_to_dm(&ket(&b, &[(&[R, G], 1.0), (&[G, R], -1.0)]));
    let p = subspace_populations(&rho, b.space(), 0.0).unwrap();
    assert!((p.p_nonsymmetric - 1.0).abs() < 1e-12);
    let sym = ket_to_dm(&ket(&b, &[(&[R, G], 1.0), (&[G, R], 1.0)]));
    let p = subspace_populations(&sym, b.space(), 0.0).unwrap();
    assert!((p.p_r - 1.0).abs() < 1e-12);
}

#[test]
fn single_atom_decay_splits_symmetric_and_nonsymmetric() {
    let b = microscopic_basis(2, true, None, "atoms").unwrap();
    let e1r = ket(&b, &[(&[E, R], 1.0), (&[R, E], 1.0)]);
    let j = b.transition(0, G, E).unwrap();
    let after = j.apply(&e1r);
    let n = after.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rho = ket_to_dm(&after.mapv(|z| z / n));
    let p = subspace_populations(&rho, b.space(), 0.0).unwrap();
    assert!((p.p_symmetric - 0.5).abs() < 1e-12 && (p.p_nonsymmetric - 0.5).abs() < 1e-12);
}

#[test]
fn populations_of_a_product_with_the_cavity() {
    let b = microscopic_basis(2, true, None, "atoms").unwrap();
    let cav = fock_space(3, "cavity").unwrap();
    let space = SpaceSpec::new(cav.tensor(b.space()).factors().to_vec()).unwrap();
    let rho_at = ket_to_dm(&ket(&b, &[(&[R, G], 1.0), (&[G, R], -1.0)]));
    let rho_c = random_density(3, &mut rng(4));
    let p = subspace_populations(&superatom::linalg::kron(&rho_c, &rho_at), &space, 1.5).unwrap();
    assert!((p.p_nonsymmetric - 1.0).abs() < 1e-12);
    assert_eq!(p.t, 1.5);
    assert!(subspace_populations(&rho_c, &cav, 0.0).is_err());
}

#[test]
fn thermal_phonon_statistics() {
    let s = fock_space(40, "membrane").unwrap();
    let p = bose_einstein(1.0, 40);
    let rho = Matrix::from_diag(&ndarray::Array1::from_iter(p.iter().map(|&x| C64::from(x))));
    let d = phonon_distribution(&rho, &s, 0, 0.0).unwrap();
    for n in 0..10 {
        assert!((d.p_n[n] - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
    }
    assert!(d.truncation_defect < 1e-11);
    assert!((d.mean - 1.0).abs() < 1e-9);
    // thermal light is super-Poissonian: Q = N
    assert!((d.mandel_q - 1.0).abs() < 1e-8);
    assert!(bose_einstein_distance(&d.p_n, BeReference::MatchedMean) < 1e-10);
}

#[test]
fn fock_state_statistics() {
    let s = fock_space(6, "membrane").unwrap();
    let rho = ket_to_dm(&basis_ket(6, 1).unwrap());
    let d = phonon_distribution(&rho, &s, 0, 0.0).unwrap();
    assert_eq!(d.p_n[1], 1.0);
    assert!((d.mandel_q + 1.0).abs() < 1e-15);
    // ½(½ + ¾ + Σ_{n≥2} 2^{−n−1}) = ½(½ + ¾ + ¼)
    assert!((bose_einstein_distance(&d.p_n, BeReference::MatchedMean) - 0.75).abs() < 1e-12);
    assert!((bose_einstein_distance(&d.p_n, BeReference::Mean(1.0)) - 0.75).abs() < 1e-12);
}

#[test]
fn phonon_distribution_traces_out_the_atom() {
    let ph = fock_space(4, "membrane").unwrap();
    let at = superatom::hilbert::two_level_space("superatom").unwrap();
    let space = SpaceSpec::new(ph.tensor(&at).factors().to_vec()).unwrap();
    // (|G,1⟩ + |R,0⟩)/√2 with index 2·phonon + atom
    let mut psi = Vector::zeros(8);
    psi[2] = C64::from(0.5f64.sqrt());
    psi[1] = C64::from(0.5f64.sqrt());
    let d = phonon_distribution(&ket_to_dm(&psi), &space, 0, 0.0).unwrap();
    assert!((d.p_n[0] - 0.5).abs() < 1e-15 && (d.p_n[1] - 0.5).abs() < 1e-15);
    assert!((d.mandel_q + 0.5).abs() < 1e-12);
}

#[test]
fn mixture_sweep_is_monotone_in_distance() {
    let len = 60;
    let thermal = bose_einstein(1.0, len);
    let mut last = -1.0;
    for k in 0..=20 {
        let lam = k as f64 / 20.0;
        let p: Vec<f64> = (0..len).map(|n| (1.0 - lam) * thermal[n] + if n == 1 { lam } else { 0.0 }).collect();
        let tv = bose_einstein_distance(&p, BeReference::MatchedMean);
        assert!(tv >= last - 1e-12, "λ = {lam}: {tv} < {last}");
        last = tv;
    }
    assert!((last - 0.75).abs() < 1e-12);
}

fn permute_atoms(rho: &Matrix, b: &MicroscopicBasis, perm: &[usize]) -> Matrix {
    let d = b.dim();
    let mut p = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        let s = b.state(i);
        let t: Vec<AtomLevel> = (0..s.len()).map(|a| s[perm[a]]).collect();
        p[[b.index_of(&t).unwrap(), i]] = C64::from(1.0);
    }
    p.dot(rho).dot(&dagger(&p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partial_traces_are_states(seed in 0u64..10_000, keep in prop::collection::vec(0usize..3, 1..3)) {
        let a = fock_space(2, "a").unwrap();
        let b = fock_space(3, "b").unwrap();
        let c = fock_space(2, "c").unwrap();
        let space = SpaceSpec::new(a.tensor(&b).tensor(&c).factors().to_vec()).unwrap();
        let rho = random_density(12, &mut rng(seed));
        let (red, sub) = partial_trace(&rho, &space, &keep).unwrap();
        prop_assert_eq!(red.nrows(), sub.dim());
        prop_assert!((trace(&red) - 1.0).norm() < 1e-12);
        prop_assert!(max_diff(&red, &dagger(&red)) < 1e-14);
        prop_assert!(min_eigenvalue(&red).unwrap() > -1e-12);
    }

    #[test]
    fn symmetric_population_is_permutation_invariant(
        n in 1usize..=4,
        blockade in any::<bool>(),
        seed in 0u64..10_000,
        perm_seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        let b = microscopic_basis(n, blockade, None, "atoms").unwrap();
        let rho = random_density(b.dim(), &mut rng(seed));
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng(perm_seed));
        let p0 = atomic_populations(&rho, &b, 0.0);
        let p1 = atomic_populations(&permute_atoms(&rho, &b, &perm), &b, 0.0);
        prop_assert!((p0.p_symmetric - p1.p_symmetric).abs() < 1e-12);
        prop_assert!((p0.p_symmetric + p0.p_nonsymmetric - 1.0).abs() < 1e-9);
        prop_assert!(p0.p_symmetric >= -1e-12 && p0.p_symmetric <= 1.0 + 1e-12);
    }
}

#[test]
fn fidelity_estimate_examples() {
    let f = fidelity_estimate_from(1.0, 0.0, 0.01, 0.0, 0.0);
    assert!((f - 0.984_292).abs() < 1e-6);
    let base = 1.0 - fidelity_estimate_from(0.7, 0.5, 2e-3, 1e-3, 3e-3);
    let doubled = 1.0 - fidelity_estimate_from(0.7, 0.5, 4e-3, 2e-3, 6e-3);
    assert!((doubled - 2.0 * base).abs() < 1e-15);
    assert!((gate_time(2.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}

/// `G_eff = 0.02`, resonant because `Δ_G = Δ_Ω`.
fn transfer_params(gamma_m: f64, n_m: f64, gamma_r: f64) -> PhysicalParams {
    PhysicalParams { g: 1.0, big_g: 1.0, rabi: 1.0, gamma_m, n_m, gamma_r, ..PhysicalParams::with_detunings(4, 10.0, 10.0) }
}

fn simulated_transfer(p: &PhysicalParams) -> TransferFidelity {
    let m = build_effective_n(p, 2, false).unwrap();
    let g_eff = effective_rates_approx(p).unwrap().g_eff;
    // |R,0⟩ = 1, |G,1⟩ = 2
    let opts = MasterOptions { tol: Tolerances { atol: 1e-12, rtol: 1e-10 }, ..Default::default() };
    transfer_fidelity(&m, &basis_ket(m.dim(), 1).unwrap(), &basis_ket(m.dim(), 2).unwrap(), gate_time(g_eff), &opts).unwrap()
}

#[test]
fn lossless_transfer_is_perfect() {
    let f = simulated_transfer(&transfer_params(0.0, 0.0, 0.0));
    assert!((f.population - 1.0).abs() < 1e-8);
    assert!((f.amplitude - 1.0).abs() < 1e-8);
}

#[test]
fn first_order_estimate_tracks_the_target_population() {
    let g_eff = effective_rates_approx(&transfer_params(0.0, 0.0, 0.0)).unwrap().g_eff;
    for (gm, nm, gr) in [(1e-4, 0.0, 0.0), (0.0, 0.0, 8e-4), (1e-4, 1.0, 0.0), (2e-5, 3.0, 5e-4)] {
        let p = transfer_params(gm, nm, gr);
        let est = fidelity_estimate(&p).unwrap();
        let loss = (4.0 * nm * gm + gm + gr) / g_eff;
        assert!(loss <= 0.05);
        let sim = simulated_transfer(&p);
        assert!((sim.population - est).abs() <= 2.0 * loss * loss, "{sim:?} vs {est}");
        // the amplitude sees only half the first-order loss
        assert!(((1.0 - sim.amplitude) - 0.5 * (1.0 - est)).abs() <= 2.0 * loss * loss);
    }
}

#[test]
fn cooling_formula_examples() {
    // G_eff = ḡGΩ/(Δ_cΔ_e) = 1 with Δ_G = Δ_Ω
    let base = PhysicalParams { g: 1.0, big_g: 10.0, rabi: 10.0, n_m: 10.0, gamma_m: 1e-3, ..PhysicalParams::with_detunings(1, 10.0, 10.0) };
    let c = CoolingParams::from_rate(0.1, 100.0);
    let est = cooling_steady_phonon(&base, &c).unwrap();
    assert!((est.g_eff - 1.0).abs() < 1e-12);
    assert!((est.n_s - 0.22).abs() < 1e-12);
    assert!(est.strong_coupling);

    let cold = PhysicalParams { gamma_m: 0.0, ..base.clone() };
    assert_eq!(cooling_steady_phonon(&cold, &c).unwrap().n_s, 0.0);

    let fast = cooling_steady_phonon(&base, &CoolingParams::from_rate(1e9, 1e12)).unwrap();
    assert!((fast.n_s - 2.0 * 10.0 * 1e-3).abs() < 1e-9);

    let weak = PhysicalParams { gamma_m: 0.05, ..base };
    assert!(!cooling_steady_phonon(&weak, &c).unwrap().strong_coupling);
}

#[test]
fn cooling_formula_against_steady_state() {
    // The estimate assumes H_s ≈ H_JCM: dispersive shifts Δ_G = Δ_Ω = 0.1 ≪ G_eff = 1.
    let p = PhysicalParams { g: 1.0, big_g: 1.0, rabi: 1.0, n_m: 10.0, gamma_m: 1e-3, ..PhysicalParams::with_detunings(10_000, 10.0, 10.0) };
    let est = cooling_steady_phonon_simulated(&p, &CoolingParams::from_rate(0.1, 100.0), 8).unwrap();
    assert!((est.g_eff - 1.0).abs() < 1e-12);
    let sim = est.simulated.unwrap();
    assert!((sim - est.n_s).abs() <= 0.2 * est.n_s, "simulated {sim} vs formula {}", est.n_s);
}

#[test]
fn dispersive_shifts_block_cooling_beyond_one_phonon() {
    // Same G_eff with Δ_G = Δ_Ω = 10: only the one-phonon manifold is resonant.
    let p = PhysicalParams { g: 1.0, big_g: 10.0, rabi: 10.0, n_m: 10.0, gamma_m: 1e-3, ..PhysicalParams::with_detunings(1, 10.0, 10.0) };
    let est = cooling_steady_phonon_simulated(&p, &CoolingParams::from_rate(0.1, 100.0), 8).unwrap();
    assert!(est.simulated.unwrap() > 2.0 * est.n_s);
}
