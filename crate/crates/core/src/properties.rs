// Copyright 2026 The nvsense Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

//! Randomized checks of the model invariants.

use proptest::prelude::*;

use crate::config::RunConfig;
use crate::diamond::{DiamondParams, DopedDiamond, Interface, SpaceCharge};
use crate::electrolyte::{ElectrolyteParams, Species};
use crate::nv_spin::{self, NVParams, T2Convention};
use crate::pipeline::{default_cb_grid, evaluate_point, run_sweep, SweepSettings};
use crate::stochastic_oracle::{simulate, McConfig};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn electrolyte() -> impl Strategy<Value = ElectrolyteParams> {
    (-1.5f64..3.0, 1u32..4, 0.5e-9f64..3e-9).prop_map(|(lc, z, d)| ElectrolyteParams {
        c_b: 10f64.powf(lc),
        valence: z,
        d_plus: d,
        d_minus: 1.3 * d,
        ..ElectrolyteParams::default()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gouy_chapman_solves_first_order_ode(ep in electrolyte(), v0 in -0.3f64..0.3, m in 0.05f64..6.0) {
        prop_assume!(v0.abs() > 1e-4);
        let z = m * ep.debye_length();
        let rhs = ep.gouy_chapman_field(v0, z).unwrap();
        let h = 1e-4 * (ep.gouy_chapman_potential(v0, z).unwrap() / rhs).abs();
        let d = (ep.gouy_chapman_potential(v0, z + h).unwrap() - ep.gouy_chapman_potential(v0, z - h).unwrap()) / (2.0 * h);
        prop_assert!(rel(-d, rhs) < 1e-6, "{} {}", -d, rhs);
    }

    #[test]
    fn small_steps_are_linear(ep in electrolyte(), x in -0.049f64..0.049, m in 0.0f64..8.0) {
        prop_assume!(x.abs() > 1e-6);
        let scale = crate::constants::thermal_voltage(ep.temperature) / ep.valence as f64;
        let v0 = x * scale;
        let z = m * ep.debye_length();
        let exact = ep.gouy_chapman_potential(v0, z).unwrap();
        prop_assert!(rel(ep.linearized_potential(v0, z), exact) < 5e-3);
    }

    #[test]
    fn bulk_is_neutral(ep in electrolyte(), v0 in -0.5f64..0.5) {
        let cp = ep.concentration_profile(v0, ep.delta, Species::Cation).unwrap();
        let cm = ep.concentration_profile(v0, ep.delta, Species::Anion).unwrap();
        prop_assert_eq!(cp - cm, 0.0);
    }

    #[test]
    fn interface_field_is_surface_slope(ep in electrolyte(), v0 in -0.3f64..0.3) {
        prop_assume!(v0.abs() > 1e-4);
        let e0 = ep.interface_field(v0).unwrap();
        // steps scaled to the surface decay length, which shrinks at high potential
        let h = 1e-5 * (v0 / e0).abs();
        let d = (ep.gouy_chapman_potential(v0, h).unwrap() - v0) / h;
        let d2 = (ep.gouy_chapman_potential(v0, 2.0 * h).unwrap() - v0) / (2.0 * h);
        prop_assert!(rel(-(2.0 * d - d2), e0) < 1e-6);
    }

    #[test]
    fn carriers_obey_mass_action(phi in -4.0f64..5.0, t in 250.0f64..350.0) {
        let dp = DiamondParams { temperature: t, ..DiamondParams::default() };
        let m = DopedDiamond::new(&dp);
        let b = m.band;
        let kt = crate::constants::thermal_voltage(t);
        let (n, p) = m.carrier_densities(phi).unwrap();
        prop_assert!(rel(n * p, b.n_c * b.n_v * (-(b.e_c - b.e_v) / kt).exp()) < 1e-12);
    }

    #[test]
    fn ramsey_signal_is_a_probability(tau in 0.0f64..1e-3, t2 in 1e-8f64..1e-3, psi in -10.0f64..10.0) {
        let p = nv_spin::ramsey_signal(tau, t2, psi);
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn levels_are_symmetric_about_zfs(e in -1e9f64..1e9, b in -0.2f64..0.2) {
        let nv = NVParams::default();
        let l = nv.spin_levels(e, b);
        prop_assert_eq!(l.nu_plus + l.nu_minus, 2.0 * nv.zfs);
        prop_assert!(l.nu_plus >= l.nu_minus);
        let zeeman = nv.spin_levels(0.0, b);
        prop_assert!((zeeman.nu_plus - zeeman.nu_minus - 2.0 * nv.gamma_e * b.abs()).abs() <= 1e-6 * nv.zfs * f64::EPSILON.sqrt());
    }

    #[test]
    fn phase_variance_of_white_noise(lc in 0.0f64..14.0, lt in -9.0f64..-2.0) {
        let (c, tau) = (10f64.powf(lc), 10f64.powf(lt));
        let v = nv_spin::phase_variance(|_| c, tau).unwrap();
        prop_assert!(rel(v, 4.0 * std::f64::consts::PI.powi(2) * c * tau * tau) < 1e-10);
    }

    #[test]
    fn config_text_round_trips(c_b in 1e-3f64..1e3, depth in 1e-9f64..20e-9, alpha in 0.01f64..0.1, seed in any::<u64>()) {
        let mut cfg = RunConfig::default();
        cfg.set("electrolyte.c_b", &c_b.to_string()).unwrap();
        cfg.set("sweep.depth", &depth.to_string()).unwrap();
        cfg.set("readout.alpha", &alpha.to_string()).unwrap();
        cfg.set("seed", &seed.to_string()).unwrap();
        let mut back = RunConfig::default();
        back.apply_text(&cfg.to_text()).unwrap();
        prop_assert_eq!(back.sha256(), cfg.sha256());
        prop_assert_eq!(back, cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn interface_solutions_are_consistent(lc in -2.0f64..3.0, shift in -2.0f64..2.0) {
        let ep = ElectrolyteParams::default().with_concentration(10f64.powf(lc));
        let dp = DiamondParams::default();
        let it = Interface::new(ep, &dp).unwrap();
        let sol = it.solve().unwrap();
        prop_assert!(sol.converged && sol.residual < 1e-6);
        prop_assert!(rel(dp.eps * sol.e_d0, ep.eps * sol.e_e0) < 1e-9);
        let e0 = it.permittivity_ratio() * sol.e_e0;
        for s in sol.profile.iter().step_by(7) {
            let res = s.field * s.field - e0 * e0 + 2.0 / it.eps_d * it.charge.integrated(sol.phi0, s.phi).unwrap();
            prop_assert!(res.abs() <= 1e-6 * (s.field * s.field).max(e0 * e0));
            if s.depth > 0.0 {
                let z = it.depth_of_potential(sol.phi0, sol.e_e0, s.phi).unwrap();
                prop_assert!(rel(z, s.depth) < 1e-3);
            }
        }

        let moved = Interface::new(
            ElectrolyteParams { phi_bulk: ep.phi_bulk + shift, ..ep },
            &DiamondParams { phi_bulk: dp.phi_bulk + shift, ..dp },
        )
        .unwrap()
        .solve()
        .unwrap();
        prop_assert!(rel(moved.e_e0, sol.e_e0) < 1e-9);
        prop_assert!(rel(moved.e_d0, sol.e_d0) < 1e-9);
        prop_assert!((moved.phi0 - shift - sol.phi0).abs() < 1e-9);
    }

    #[test]
    fn plateau_is_linear_in_concentration(lc in -2.0f64..3.0, k in 1.1f64..10.0) {
        let s = SweepSettings::default();
        let ep = ElectrolyteParams::default();
        let dp = DiamondParams::default();
        let nv = NVParams::default();
        let a = evaluate_point(&ep, &dp, &nv, &s, 10f64.powf(lc)).unwrap();
        let b = evaluate_point(&ep, &dp, &nv, &s, k * 10f64.powf(lc)).unwrap();
        prop_assert!(rel(b.plateau, k * a.plateau) < 1e-9);
        prop_assert!(b.inv_t2_star > a.inv_t2_star);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn brownian_runs_conserve_and_reproduce(seed in any::<u64>(), n in 50usize..400) {
        let cfg = McConfig { n_particles: n, n_steps: 400, n_batches: 4, seed, ..McConfig::default() };
        let a = simulate(&cfg, &[0.0]).unwrap();
        let b = simulate(&cfg, &[0.0]).unwrap();
        prop_assert!(a.particles_per_step.iter().all(|&c| c == 2 * n));
        prop_assert_eq!(a, b);
    }
}

#[test]
fn sweep_is_monotone_on_default_grid() {
    let out = run_sweep(
        &ElectrolyteParams::default(),
        &DiamondParams::default(),
        &NVParams::default(),
        &SweepSettings::default(),
        &default_cb_grid(),
    );
    let v: Vec<f64> = out.iter().map(|o| o.result.as_ref().unwrap().inv_t2_star).collect();
    assert!(v.windows(2).all(|w| w[1] > w[0]));
    let fit = crate::pipeline::fit_sweep(&out).unwrap();
    assert!(fit.rms_log_residual < 0.15);
}

#[test]
fn t2_star_depends_only_on_zero_lag() {
    let ep = ElectrolyteParams::default();
    let nv = NVParams::default();
    let plateau = ep.white_noise_variance(crate::electrolyte::SpeciesSum::Both);
    let flat = nv_spin::t2_star(|_| nv.nu_fluctuation_correlator(13.8, plateau), T2Convention::TwoPi);
    let kernel = nv_spin::t2_star(
        |t| nv.nu_fluctuation_correlator(13.8, ep.field_correlator_simplified(t.min(1e-3))),
        T2Convention::TwoPi,
    );
    assert_eq!(flat, kernel);
}
