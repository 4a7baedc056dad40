//! Randomized invariants of the public API.

use lqsynth::io::{emit_netlist, emit_system_spec, parse_netlist, parse_system_spec, SystemSpec};
use lqsynth::linalg::{
    c, identity_c, max_abs, max_abs_c, to_complex, unitarity_residual, CMat, RMat,
};
use lqsynth::moments::{
    convergence_study, covariance_trajectory, AdiabaticModelParams, ChannelStats, ItoTable,
    SimulationSettings,
};
use lqsynth::optics::coupling::{
    coupling_scheme1, coupling_scheme2, dpa_from_r, ladder_coefficients, ModeCoupling,
};
use lqsynth::optics::devices::{quasi_unitarity_residual, squeezed_field_params, SqueezerParams};
use lqsynth::optics::netlist::{build_netlist, ComponentParams, NetlistOptions};
use lqsynth::optics::{
    mesh_matrix, passive_unitary_to_mesh, quasiunitary_decompose, QuasiUnitaryDecomposition,
};
use lqsynth::random::{random_complex, random_oscillator, random_real, random_unitary};
use lqsynth::realizability::field_commutator;
use lqsynth::{
    allocate_scattering, check_physical_realizability, concatenate, decompose, from_state_space,
    make_commutation_matrix, reassemble, reduce_network, series, to_state_space,
    validate_oscillator, DirectCoupling, NetworkSpec, OscillatorParams, SeriesConnection,
};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn theta(n: usize) -> RMat {
    make_commutation_matrix(n).unwrap().into_matrix()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn random_mode_coupling(r: &mut ChaCha8Rng, scale: f64) -> ModeCoupling {
    let z = random_complex(r, 1, 2, scale);
    ModeCoupling {
        alpha_t: z[(0, 0)],
        beta_t: z[(0, 1)],
    }
}

fn random_quasi_unitary(r: &mut ChaCha8Rng, m: usize) -> CMat {
    QuasiUnitaryDecomposition {
        u1: random_unitary(r, m),
        d: DVector::from_fn(m, |_, _| r.random_range(0.0..1.5)),
        u3: random_unitary(r, m),
    }
    .reconstruct()
}

#[test]
fn commutation_matrix_structure() {
    for n in 1..=8 {
        let t = theta(n);
        assert_eq!(&t * &t, -RMat::identity(2 * n, 2 * n));
        assert_eq!(t.transpose(), -&t);
    }
}

#[test]
fn dpa_round_trip_on_grid() {
    let vals = [-3.0, -1.25, -0.5, 0.0, 0.5, 2.0, 7.5];
    for &a in &vals {
        for &b in &vals {
            for &d in &vals {
                let r = RMat::from_row_slice(2, 2, &[a, b, b, d]);
                let back = dpa_from_r(&r).unwrap().hamiltonian_matrix();
                assert!(max_abs(&(back - &r)) <= 1e-12, "{r}");
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn series_is_associative(seed in any::<u64>(), m in 1usize..=3) {
        let mut r = rng(seed);
        let g: Vec<_> = (0..3).map(|_| random_oscillator(&mut r, 1, m, 1.0)).collect();
        let spec = NetworkSpec {
            oscillators: g.clone(),
            series: vec![SeriesConnection { from: 0, to: 1 }, SeriesConnection { from: 1, to: 2 }],
            couplings: vec![],
        };
        let left = series(&g[2], &series(&g[1], &g[0]).unwrap()).unwrap();
        let right = series(&series(&g[2], &g[1]).unwrap(), &g[0]).unwrap();
        prop_assert!(reduce_network(&spec).unwrap().max_difference(&left) <= TOL);
        prop_assert!(right.max_difference(&left) <= TOL);
    }

    #[test]
    fn concatenation_keeps_validity(seed in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3, m1 in 1usize..=2, m2 in 1usize..=2) {
        let mut r = rng(seed);
        let g = concatenate(&random_oscillator(&mut r, n1, m1, 1.0), &random_oscillator(&mut r, n2, m2, 1.0));
        prop_assert!(validate_oscillator(&g, 1e-9).is_valid());
        prop_assert_eq!((g.dof(), g.channels()), (n1 + n2, m1 + m2));
    }

    #[test]
    fn reduced_networks_are_valid(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=3) {
        let mut r = rng(seed);
        let oscillators: Vec<_> = (0..n).map(|_| random_oscillator(&mut r, 1, m, 1.0)).collect();
        let series = (1..n)
            .filter(|_| r.random_bool(0.6))
            .map(|k| SeriesConnection { from: k - 1, to: k })
            .collect();
        let mut couplings = Vec::new();
        for k in 1..n {
            for j in 0..k {
                if r.random_bool(0.4) {
                    couplings.push(DirectCoupling::new(j, k, random_real(&mut r, 2, 2, 1.0)).unwrap());
                }
            }
        }
        let g = reduce_network(&NetworkSpec { oscillators, series, couplings }).unwrap();
        prop_assert!(validate_oscillator(&g, 1e-9).is_valid());
    }

    #[test]
    fn scattering_factorizations(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut r = rng(seed);
        let g = random_oscillator(&mut r, n, m, 1.0);
        let plain = OscillatorParams { s: identity_c(m), ..g.clone() };
        let front = OscillatorParams::static_network(g.s.clone());
        // (S, L, H) = (I, L, H) ◁ (S, 0, 0)
        prop_assert!(series(&plain, &front).unwrap().max_difference(&g) <= 1e-12);
        // (S, L, H) = (S, 0, 0) ◁ (I, S†L, H)
        let inner = OscillatorParams { k: g.s.adjoint() * &g.k, ..plain };
        prop_assert!(series(&front, &inner).unwrap().max_difference(&g) <= 1e-12);
    }

    #[test]
    fn state_space_bijection(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3) {
        let mut r = rng(seed);
        let g = random_oscillator(&mut r, n, m, 1.0);
        let ss = to_state_space(&g).unwrap();
        let report = check_physical_realizability(&ss, TOL);
        prop_assert!(report.is_realizable);
        prop_assert!(report.ccr_residual <= TOL);
        let back = from_state_space(&ss, TOL).unwrap();
        prop_assert!(back.max_difference(&g) <= TOL);
        prop_assert!(max_abs(&(&back.r - back.r.transpose())) <= 1e-12);
        prop_assert!(to_state_space(&back).unwrap().max_difference(&ss) <= TOL);
        let im = (g.k.adjoint() * &g.k).map(|z| z.im);
        prop_assert!(max_abs(&(&im + im.transpose())) <= 1e-12);
    }

    #[test]
    fn off_manifold_drift_is_flagged(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3) {
        let mut r = rng(seed);
        let mut ss = to_state_space(&random_oscillator(&mut r, n, m, 1.0)).unwrap();
        ss.a += RMat::identity(2 * n, 2 * n) * 1e-3;
        let report = check_physical_realizability(&ss, TOL);
        prop_assert!(!report.is_realizable);
        prop_assert!(report.ccr_residual > 1e-3);
    }

    #[test]
    fn synthesis_round_trip(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=3) {
        let mut r = rng(seed);
        let g = random_oscillator(&mut r, n, m, 1.0);
        let plan = decompose(&g).unwrap();
        prop_assert!(reassemble(&plan).unwrap().max_difference(&g) <= TOL);
        prop_assert_eq!(plan.blocks.len(), n);
        for cp in &plan.couplings {
            prop_assert!(cp.c.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn allocation_multiplies_to_s(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=3) {
        let mut r = rng(seed);
        let s = random_unitary(&mut r, m);
        let alloc = allocate_scattering(&s, n).unwrap();
        let product = alloc.iter().fold(identity_c(m), |acc, sk| sk * acc);
        prop_assert_eq!(product, s);
    }

    #[test]
    fn identity_scattering_keeps_couplings(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3) {
        let mut r = rng(seed);
        let g = OscillatorParams { s: identity_c(m), ..random_oscillator(&mut r, n, m, 1.0) };
        let plan = decompose(&g).unwrap();
        for (k, block) in plan.blocks.iter().enumerate() {
            prop_assert_eq!(&block.k_tilde, &g.k.columns(2 * k, 2).into_owned());
        }
    }

    #[test]
    fn scheme1_reproduces_coupling(seed in any::<u64>(), gamma2 in 1.0f64..1e3) {
        let mut r = rng(seed);
        let mc = random_mode_coupling(&mut r, 2.0);
        let p = coupling_scheme1(&mc, gamma2).unwrap();
        let back = p.effective_coupling();
        prop_assert!((back.alpha_t - mc.alpha_t).norm() <= 1e-12 * mc.alpha_t.norm().max(1.0));
        prop_assert!((back.beta_t - mc.beta_t).norm() <= 1e-12 * mc.beta_t.norm().max(1.0));
        prop_assert!(unitarity_residual(&p.beam_splitter().matrix()) <= TOL);
    }

    #[test]
    fn schemes_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let beta_t = random_complex(&mut r, 1, 1, 1.0)[(0, 0)];
        let alpha_t = c(beta_t.norm() + r.random_range(0.1..3.0), 0.0);
        let mc = ModeCoupling { alpha_t, beta_t };
        let s2 = coupling_scheme2(&mc).unwrap().effective_coupling();
        let s1 = coupling_scheme1(&mc, 100.0).unwrap().effective_coupling();
        prop_assert!((s1.alpha_t - s2.alpha_t).norm() <= 1e-12 * alpha_t.norm().max(1.0));
        prop_assert!((s1.beta_t - s2.beta_t).norm() <= 1e-12 * alpha_t.norm().max(1.0));
    }

    #[test]
    fn squeezers_are_quasi_unitary(s in -3.0f64..3.0, th in 0.0f64..std::f64::consts::TAU) {
        let q = SqueezerParams { s, theta: th }.matrix();
        let scale = max_abs_c(&q).powi(2);
        prop_assert!(quasi_unitarity_residual(&q) <= TOL * scale);
    }

    #[test]
    fn emitted_devices_are_physical(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2, sandwich in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_oscillator(&mut r, n, m, 1.0);
        let options = NetlistOptions { prefer_squeezer_sandwich: sandwich, ..NetlistOptions::default() };
        let nl = build_netlist(&decompose(&g).unwrap(), &options).unwrap();
        for comp in &nl.components {
            match &comp.params {
                ComponentParams::BeamSplitter(bs) => prop_assert!(unitarity_residual(&bs.matrix()) <= TOL),
                ComponentParams::Squeezer(sq) => {
                    let q = sq.matrix();
                    prop_assert!(quasi_unitarity_residual(&q) <= TOL * max_abs_c(&q).powi(2));
                }
                ComponentParams::Mirror(mi) => prop_assert!(mi.kappa >= 0.0),
                _ => {}
            }
        }
    }

    #[test]
    fn static_decompositions_reconstruct(seed in any::<u64>(), m in 1usize..=4) {
        let mut r = rng(seed);
        let u = random_unitary(&mut r, m);
        prop_assert!(max_abs_c(&(mesh_matrix(m, &passive_unitary_to_mesh(&u).unwrap()) - &u)) <= 1e-9);
        let q = random_quasi_unitary(&mut r, m);
        let dec = quasiunitary_decompose(&q).unwrap();
        prop_assert!(max_abs_c(&(dec.reconstruct() - &q)) <= 1e-9 * max_abs_c(&q).max(1.0));
        prop_assert!(dec.d.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn direct_coupling_coefficients_pair_up(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = ladder_coefficients(&random_real(&mut r, 2, 2, 2.0)).unwrap();
        // Index 0 is a, index 1 is a*.
        prop_assert!((n[0][0] - n[1][1].conj()).norm() <= 1e-12);
        prop_assert!((n[0][1] - n[1][0].conj()).norm() <= 1e-12);
    }

    #[test]
    fn squeezed_tables_keep_commutators(seed in any::<u64>(), m in 1usize..=3) {
        let mut r = rng(seed);
        let chans: Vec<_> = (0..m)
            .map(|_| ChannelStats::squeezed(r.random_range(-2.0..2.0), r.random_range(0.0..6.3)))
            .collect();
        let table = ItoTable::squeezed(&chans).unwrap();
        prop_assert!(max_abs_c(&(table.commutator() - field_commutator(m))) <= 1e-12);
        let p = squeezed_field_params(r.random_range(-3.0..3.0), r.random_range(0.0..6.3));
        prop_assert!(p.constraint_residual() <= 1e-12 * p.c.norm_sqr().max(1.0));
    }

    #[test]
    fn simulator_matrices_preserve_ccr(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut r = rng(seed);
        let ss = to_state_space(&random_oscillator(&mut r, n, m, 1.0)).unwrap();
        let chans: Vec<_> = (0..m).map(|_| ChannelStats::squeezed(r.random_range(-1.0..1.0), 0.3)).collect();
        let table = ItoTable::squeezed(&chans).unwrap();
        let th = to_complex(&theta(n));
        let a = to_complex(&ss.a);
        let ccr = (&a * &th + &th * a.transpose()) * c(0.0, 2.0) + &ss.b * table.commutator() * ss.b.transpose();
        prop_assert!(max_abs_c(&ccr) <= TOL);
    }

    #[test]
    fn system_specs_round_trip(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3, abcd in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_oscillator(&mut r, n, m, 1.0);
        let spec = if abcd { SystemSpec::Abcd(to_state_space(&g).unwrap()) } else { SystemSpec::Skr(g) };
        let text = emit_system_spec(&spec);
        let back = parse_system_spec(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(emit_system_spec(&back), text);
    }

    #[test]
    fn netlists_round_trip(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=2) {
        let mut r = rng(seed);
        let nl = build_netlist(&decompose(&random_oscillator(&mut r, n, m, 1.0)).unwrap(), &NetlistOptions::default()).unwrap();
        let text = emit_netlist(&nl);
        prop_assert_eq!(&parse_netlist(&text).unwrap(), &nl);
        prop_assert_eq!(emit_netlist(&parse_netlist(&text).unwrap()), text);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn cavities_hold_vacuum(gamma in 0.1f64..5.0) {
        let h = gamma.sqrt() / 2.0;
        let g = OscillatorParams::new(identity_c(1), CMat::from_row_slice(1, 2, &[c(h, 0.0), c(0.0, h)]), RMat::zeros(2, 2)).unwrap();
        let ss = to_state_space(&g).unwrap();
        let tr = covariance_trajectory(&ss, &RMat::identity(2, 2), &SimulationSettings::new(10.0, 1e-3).every(50), &ItoTable::vacuum(1)).unwrap();
        for m in &tr.second_moments {
            prop_assert!(max_abs(&(m - RMat::identity(2, 2))) <= 1e-8);
        }
    }
}

#[test]
fn adiabatic_errors_decrease_in_k() {
    let mut r = rng(7);
    for draw in 0..20 {
        let gamma2 = r.random_range(50.0..150.0);
        let bound = gamma2 / 4.0;
        let pick = |r: &mut ChaCha8Rng| {
            let z = c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            z / z.norm().max(1.0) * bound * r.random_range(0.0..1.0)
        };
        let p = AdiabaticModelParams {
            gamma1: r.random_range(0.5..2.0),
            gamma2,
            delta1: r.random_range(-1.0..1.0),
            delta2: 0.0,
            alpha: pick(&mut r),
            beta: pick(&mut r),
        };
        let pts =
            convergence_study(&p, &[2.0, 4.0, 8.0], 0.5, 1e-3, &RMat::identity(2, 2)).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].error < w[0].error, "draw {draw}: {p:?} {pts:?}");
        }
    }
}
