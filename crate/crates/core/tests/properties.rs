use std::f64::consts::PI;

use nalgebra::DVector;
use proptest::prelude::*;
use psquid::cli::{read_csv, render_csv, Job, ResultEnvelope, RunConfig, Table, TOOL_VERSION};
use psquid::dynamics::su2::{axis_angle, fidelity_proxy, rotation};
use psquid::dynamics::PulseSchedule;
use psquid::holonomy::{curvature_matrix, wilson_phase_from_states};
use psquid::model::{
    build_hamiltonian, build_hamiltonian_unshifted, d_hamiltonian_d_flux, effective_junction,
};
use psquid::spectral::{eigensystem, localize_qubit_basis, solve};
use psquid::{CircuitParams, C64};

fn circuit() -> impl Strategy<Value = CircuitParams> {
    (
        0.0..1500.0f64,
        1000.0..8000.0f64,
        0.0..0.3f64,
        0.0..0.3f64,
        150.0..300.0f64,
        -1.0..1.0f64,
    )
        .prop_map(|(ej1, ej2, d1, d2, ec, ng)| {
            CircuitParams::new(ej1, ej2, d1, d2, ec, ng, 20).unwrap()
        })
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

fn unit_axis() -> impl Strategy<Value = [f64; 3]> {
    (0.0..PI, -PI..PI)
        .prop_map(|(t, p): (f64, f64)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn amplitudes_reproduce_the_complex_form(p in circuit(), flux in -6.0 * PI..6.0 * PI) {
        let ej = effective_junction(&p, flux);
        let a1 = C64::new((0.5 * flux).cos(), p.d1 * (0.5 * flux).sin()) * p.ej1_sum;
        let a2 = C64::new(flux.cos(), p.d2 * flux.sin()) * p.ej2_sum;
        prop_assert!((ej.amplitude1() - a1).norm() <= 1e-12 * p.ej1_sum.max(1.0));
        prop_assert!((ej.amplitude2() - a2).norm() <= 1e-12 * p.ej2_sum);
        prop_assert!(ej.phi1.abs() <= PI / 2.0 && ej.phi2.abs() <= PI / 2.0);
        prop_assert_eq!(ej.phi0, ej.phi1 - 0.5 * ej.phi2);
    }

    #[test]
    fn operators_are_hermitian(p in circuit(), flux in -PI..3.0 * PI) {
        for h in [build_hamiltonian(&p, flux), build_hamiltonian_unshifted(&p, flux), d_hamiltonian_d_flux(&p, flux)] {
            prop_assert!(h.hermiticity_error() <= 1e-12 * h.max_abs().max(1e-300));
        }
    }

    #[test]
    fn spectrum_is_gauge_and_period_invariant(p in circuit(), flux in -PI..3.0 * PI) {
        let shifted = eigensystem(&build_hamiltonian(&p, flux), 6).unwrap().energies;
        let unshifted = eigensystem(&build_hamiltonian_unshifted(&p, flux), 6).unwrap().energies;
        let later = solve(&p, flux + 2.0 * PI, 6).unwrap().energies;
        prop_assert!(max_rel_diff(&shifted, &unshifted) < 1e-9);
        prop_assert!(max_rel_diff(&shifted, &later) < 1e-9);
    }

    #[test]
    fn offset_charge_is_periodic(p in circuit(), flux in -PI..PI) {
        let p = p.with_n_cut(25);
        let a = solve(&p, flux, 4).unwrap().energies;
        let b = solve(&p.with_ng(p.ng + 1.0), flux, 4).unwrap().energies;
        prop_assert!(max_rel_diff(&a, &b) < 1e-9);
    }

    #[test]
    fn eigenpairs_are_accurate_and_orthonormal(p in circuit(), flux in -PI..PI) {
        let h = build_hamiltonian(&p, flux);
        let s = eigensystem(&h, 8).unwrap();
        prop_assert!(s.energies.windows(2).all(|w| w[1] >= w[0]));
        let gram = s.states.adjoint() * &s.states;
        for i in 0..8 {
            let v = s.state(i);
            prop_assert!((h.matrix() * &v - v.scale(s.energies[i])).norm() < 1e-8 * h.max_abs());
            for j in 0..8 {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[(i, j)] - C64::new(target, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn levels_fall_as_the_cutoff_grows(p in circuit(), flux in -PI..PI) {
        let mut prev = vec![f64::INFINITY; 4];
        for n in [15, 20, 25, 30] {
            let e = solve(&p.with_n_cut(n), flux, 4).unwrap().energies;
            for (new, old) in e.iter().zip(&prev) {
                prop_assert!(*new <= old + 1e-9 * old.abs().max(1.0));
            }
            prev = e;
        }
    }

    #[test]
    fn logical_basis_is_orthogonal_and_phase_fixed(ej1 in 50.0..1500.0f64, d in 0.01..0.3f64) {
        let p = CircuitParams::reference().with_ej1_sum(ej1).with_asymmetry(d, d);
        let basis = localize_qubit_basis(&p, PI).unwrap();
        prop_assert!(basis.psi0.dotc(&basis.psi1).norm() < 1e-10);
        for psi in basis.states() {
            // near-ties within 1e-10 go to the lowest index
            let max = psi.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let i = psi.iter().position(|z| z.norm() >= max * (1.0 - 1e-10)).unwrap();
            prop_assert!(psi[i].im == 0.0 && psi[i].re > 0.0);
        }
        prop_assert!(basis.sin_phi[0] * basis.sin_phi[1] < 0.0);
    }

    #[test]
    fn schedules_are_continuous(
        target in 1.05 * PI..1.4 * PI,
        ramp in 1e-4..1e-2f64,
        hold in 0.0..1e-2f64,
    ) {
        let s = PulseSchedule::excursion(PI, target, ramp, hold).unwrap();
        prop_assert!(s.total_duration() > 0.0);
        for w in s.segments().windows(2) {
            prop_assert_eq!(w[0].flux_end, w[1].flux_start);
        }
        for t in s.boundaries() {
            prop_assert!(s.flux_at(t).unwrap().is_finite());
        }
        prop_assert_eq!(s.flux_at(0.0).unwrap(), PI);
        prop_assert_eq!(s.flux_at(s.total_duration()).unwrap(), PI);
    }

    #[test]
    fn rotations_round_trip(axis in unit_axis(), angle in -3.1..3.1f64, phase in -PI..PI) {
        let u = rotation(axis, angle);
        let aa = axis_angle(&(u * C64::from_polar(1.0, phase)));
        let norm = aa.axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-9);
        prop_assert!(aa.angle > -PI && aa.angle <= PI);
        prop_assert!((fidelity_proxy(&u, &aa.to_unitary()) - 1.0).abs() < 1e-12);
        prop_assert!(fidelity_proxy(&u, &rotation([1.0, 0.0, 0.0], 1.0)) <= 1.0 + 1e-12);
    }

    #[test]
    fn curvature_is_antisymmetric_and_sums_to_zero(flux in -PI..PI, ng in 0.0..1.0f64) {
        let p = CircuitParams::reference().with_n_cut(8);
        let b = curvature_matrix(&p, flux, ng, p.dim()).unwrap();
        let mut total = 0.0;
        let mut scale = 1.0f64;
        for k in 0..p.dim() {
            for l in 0..p.dim() {
                if k != l {
                    prop_assert!((b[(k, l)] + b[(l, k)]).abs() <= 1e-10 * b[(k, l)].abs().max(1.0));
                    total += b[(k, l)];
                    scale = scale.max(b[(k, l)].abs());
                }
            }
        }
        prop_assert!(total.abs() < 1e-10 * scale, "{total}");
    }

    #[test]
    fn wilson_phase_ignores_state_phases(phases in proptest::collection::vec(-PI..PI, 16)) {
        let p = CircuitParams::reference().with_n_cut(10);
        let states: Vec<DVector<C64>> = (0..16)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / 16.0;
                let params = p.with_ng(0.5 + 0.2 * t.sin());
                solve(&params, 0.3 * PI * t.cos(), 2).unwrap().state(1)
            })
            .collect();
        let twirled: Vec<DVector<C64>> = states
            .iter()
            .zip(&phases)
            .map(|(s, &a)| s * C64::from_polar(1.0, a))
            .collect();
        let a = wilson_phase_from_states(&states);
        let b = wilson_phase_from_states(&twirled);
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn configs_round_trip(points in 2usize..500, start in 0.0..1.0f64, span in 0.1..1.0f64, seed in any::<u64>()) {
        let text = format!(
            r#"{{"circuit": {{"ej1_sum": 600.0, "ej2_sum": 6000.0, "d1": 0.05, "d2": 0.05, "ec": 200.0}},
               "job": {{"kind": "splitting", "flux_start_pi": {start}, "flux_end_pi": {}, "points": {points},
                        "ej1_sum_values": [], "approximation": false}},
               "seed": {seed}}}"#,
            start + span
        );
        let cfg = RunConfig::from_json(&text).unwrap();
        let is_splitting = matches!(cfg.job, Job::Splitting { .. });
        prop_assert!(is_splitting);
        prop_assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn csv_tables_round_trip_bitwise(rows in proptest::collection::vec(proptest::collection::vec(any::<f64>(), 3), 1..20)) {
        let mut table = Table::new("values", vec!["a".into(), "b".into(), "c".into()]);
        for r in rows {
            table.push(r.into_iter().map(|v| if v.is_infinite() { 0.0 } else { v }).collect());
        }
        let cfg = psquid::cli::recipe("fig2c").unwrap();
        let env = ResultEnvelope {
            tool_version: TOOL_VERSION.into(),
            config: cfg,
            wall_clock_s: 0.5,
            meta: Default::default(),
            tables: vec![table.clone()],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, render_csv(&env, &table)).unwrap();
        let back = read_csv(&path).unwrap();
        prop_assert!(back.tables[0].bitwise_eq(&table));
        prop_assert_eq!(back.config, env.config);
    }
}
