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

//! Gouy-Chapman electrostatics of a symmetric z:z electrolyte next to a
//! blocking interface, and the correlator of thermal field fluctuations at
//! that interface.
//!
//! Coordinates: `z = 0` is the interface, `z = delta` the bulk reference
//! plane where the potential is `phi_bulk`. `V0 = phi(0) - phi(delta)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{AVOGADRO, FARADAY, GAS_CONSTANT, VACUUM_PERMITTIVITY};
use crate::error::{ensure_positive, Error, Result};
use crate::numeric::{erf, Integrator};

/// Minimum `kappa * delta` for which the semi-infinite Gouy-Chapman profile
/// is accepted.
pub const SCREENING_THRESHOLD: f64 = 10.0;

/// Ionic species of the symmetric salt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Species {
    Cation,
    Anion,
}

impl Species {
    pub const BOTH: [Species; 2] = [Species::Cation, Species::Anion];

    /// Sign of the charge number.
    pub fn sign(self) -> f64 {
        match self {
            Species::Cation => 1.0,
            Species::Anion => -1.0,
        }
    }
}

/// How many species enter the white-noise plateau of the field correlator.
///
/// `Both` keeps the sum over cations and anions (factor `2 z^2`); `Single`
/// is the one-species shorthand (factor `z^2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SpeciesSum {
    #[default]
    Both,
    Single,
}

impl SpeciesSum {
    pub fn factor(self) -> f64 {
        match self {
            SpeciesSum::Both => 2.0,
            SpeciesSum::Single => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectrolyteParams {
    /// Bulk concentration of each species (mol/m^3).
    pub c_b: f64,
    /// Valence of the symmetric salt.
    pub valence: u32,
    /// Cation diffusion constant (m^2/s).
    pub d_plus: f64,
    /// Anion diffusion constant (m^2/s).
    pub d_minus: f64,
    /// Absolute permittivity of the solution (F/m).
    pub eps: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Distance from the interface to the bulk reference plane (m).
    pub delta: f64,
    /// Transverse interface area (m^2).
    pub area: f64,
    /// Potential at the bulk reference plane (V).
    pub phi_bulk: f64,
}

impl Default for ElectrolyteParams {
    fn default() -> Self {
        Self {
            c_b: 1.0,
            valence: 2,
            d_plus: 2.3e-9,
            d_minus: 2.3e-9,
            eps: 80.0 * VACUUM_PERMITTIVITY,
            temperature: 298.0,
            delta: 1e-3,
            area: 4e-6,
            phi_bulk: 1.5,
        }
    }
}

impl ElectrolyteParams {
    pub fn with_concentration(mut self, c_b: f64) -> Self {
        self.c_b = c_b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("electrolyte.c_b", self.c_b)?;
        ensure_positive("electrolyte.d_plus", self.d_plus)?;
        ensure_positive("electrolyte.d_minus", self.d_minus)?;
        ensure_positive("electrolyte.eps", self.eps)?;
        ensure_positive("electrolyte.temperature", self.temperature)?;
        ensure_positive("electrolyte.delta", self.delta)?;
        ensure_positive("electrolyte.area", self.area)?;
        if self.valence == 0 {
            return Err(Error::InvalidParameter {
                name: "electrolyte.valence",
                reason: "must be >= 1".into(),
            });
        }
        if !self.phi_bulk.is_finite() {
            return Err(Error::InvalidParameter {
                name: "electrolyte.phi_bulk",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    fn z(&self) -> f64 {
        self.valence as f64
    }

    /// `z F / (R T)` in 1/V.
    fn beta(&self) -> f64 {
        self.z() * FARADAY / (GAS_CONSTANT * self.temperature)
    }

    fn diffusion(&self, s: Species) -> f64 {
        match s {
            Species::Cation => self.d_plus,
            Species::Anion => self.d_minus,
        }
    }

    /// Inverse Debye screening length (1/m).
    pub fn debye_kappa(&self) -> f64 {
        let z = self.z();
        (2.0 * z * z * FARADAY * FARADAY * self.c_b / (GAS_CONSTANT * self.temperature * self.eps)).sqrt()
    }

    pub fn debye_length(&self) -> f64 {
        1.0 / self.debye_kappa()
    }

    /// Fails unless `kappa * delta` exceeds [`SCREENING_THRESHOLD`].
    pub fn check_screening(&self) -> Result<()> {
        let kd = self.debye_kappa() * self.delta;
        if kd > SCREENING_THRESHOLD {
            Ok(())
        } else {
            Err(Error::ScreeningRegime {
                kappa_delta: kd,
                threshold: SCREENING_THRESHOLD,
            })
        }
    }

    /// Exact Poisson-Boltzmann potential `phi(z) - phi(delta)` (V).
    pub fn gouy_chapman_potential(&self, v0: f64, z: f64) -> Result<f64> {
        self.check_screening()?;
        if v0 == 0.0 {
            return Ok(0.0);
        }
        let beta = self.beta();
        let a = 0.25 * beta * v0.abs();
        let xi = self.debye_kappa() * z.max(0.0);
        let decay = (-xi).exp();
        let g = a.tanh();
        // 1 - g = 2 e^{-2a} / (1 + e^{-2a}), kept exact when tanh saturates
        let e2a = (-2.0 * a).exp();
        let one_minus_g = 2.0 * e2a / (1.0 + e2a);
        let denom = -(-xi).exp_m1() + decay * one_minus_g;
        let u = g * decay;
        let phi = 2.0 / beta * (u.ln_1p() - denom.ln());
        Ok(phi.copysign(v0))
    }

    /// Field `-d phi/dz` of the exact profile (V/m).
    pub fn gouy_chapman_field(&self, v0: f64, z: f64) -> Result<f64> {
        let phi = self.gouy_chapman_potential(v0, z)?;
        let beta = self.beta();
        Ok(2.0 * self.debye_kappa() / beta * (0.5 * beta * phi).sinh())
    }

    /// Debye-Hueckel potential `phi(z) - phi(delta)` between the interface
    /// and the reference plane, valid for any `kappa * delta`.
    pub fn linearized_potential(&self, v0: f64, z: f64) -> f64 {
        let k = self.debye_kappa();
        let (kd, kz) = (k * self.delta, k * z);
        if kd == 0.0 {
            return v0 * (1.0 - z / self.delta);
        }
        // sinh(k(d - z)) / sinh(kd) written with decaying exponentials
        let ratio = (-kz).exp() * (-2.0 * (kd - kz)).exp_m1() / (-2.0 * kd).exp_m1();
        v0 * ratio
    }

    /// Field `-d phi/dz` of the Debye-Hueckel profile (V/m).
    pub fn linearized_field(&self, v0: f64, z: f64) -> f64 {
        let k = self.debye_kappa();
        let (kd, kz) = (k * self.delta, k * z);
        if kd == 0.0 {
            return v0 / self.delta;
        }
        // k cosh(k(d - z)) / sinh(kd)
        let num = (-kz).exp() * (1.0 + (-2.0 * (kd - kz)).exp());
        v0 * k * num / -(-2.0 * kd).exp_m1()
    }

    /// Equilibrium concentration of one species (mol/m^3).
    pub fn concentration_profile(&self, v0: f64, z: f64, species: Species) -> Result<f64> {
        let phi = self.gouy_chapman_potential(v0, z)?;
        Ok(self.c_b * (-species.sign() * self.beta() * phi).exp())
    }

    /// Interface field `E(0+)` for a potential step `v0` (V/m).
    pub fn interface_field(&self, v0: f64) -> Result<f64> {
        self.check_screening()?;
        Ok(self.interface_field_unchecked(v0))
    }

    fn interface_field_unchecked(&self, v0: f64) -> f64 {
        let beta = self.beta();
        2.0 * self.debye_kappa() / beta * (0.5 * beta * v0).sinh()
    }

    /// Potential step `v0` that produces the interface field `e_field`.
    pub fn invert_interface_field(&self, e_field: f64) -> f64 {
        let beta = self.beta();
        2.0 / beta * (0.5 * beta * e_field / self.debye_kappa()).asinh()
    }

    fn correlator_prefactor(&self) -> f64 {
        FARADAY * FARADAY / (AVOGADRO * self.area * self.eps * self.eps)
    }

    /// Field-fluctuation correlator `<dE(0,t) dE(0,0)>` for a flat
    /// equilibrium concentration, summed over both species ((V/m)^2).
    ///
    /// `t = 0` returns the `t -> 0+` limit.
    pub fn field_correlator_simplified(&self, t: f64) -> f64 {
        let z2 = self.z() * self.z();
        let sum: f64 = Species::BOTH
            .iter()
            .map(|&s| z2 * window_retention(self.delta, (4.0 * self.diffusion(s) * t.max(0.0)).sqrt()))
            .sum();
        self.correlator_prefactor() * self.delta * self.c_b * sum
    }

    /// Field-fluctuation correlator using the Gouy-Chapman equilibrium
    /// concentrations for the step `v0`, by adaptive quadrature ((V/m)^2).
    pub fn field_correlator_full(&self, v0: f64, t: f64) -> Result<f64> {
        self.check_screening()?;
        ensure_positive("t", t)?;
        let z2 = self.z() * self.z();
        let kappa = self.debye_kappa();
        let quad = Integrator::new(1e-8, 1e-30).max_segments(20_000);
        let mut total = 0.0;
        for s in Species::BOTH {
            let width = (4.0 * self.diffusion(s) * t).sqrt();
            let mut breaks = vec![0.0, self.delta];
            for m in [1.0, 5.0, 20.0, 60.0] {
                breaks.push(m / kappa);
            }
            for m in [1.0, 5.0] {
                breaks.push(m * width);
                breaks.push(self.delta - m * width);
            }
            breaks.retain(|x| *x >= 0.0 && *x <= self.delta);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let mut err = None;
            let integrand = |v: f64| {
                let c = match self.concentration_profile(v0, v, s) {
                    Ok(c) => c,
                    Err(e) => {
                        err.get_or_insert(e);
                        return f64::NAN;
                    }
                };
                let kernel = 0.5 * (erf((self.delta - v) / width) + erf(v / width));
                c * kernel
            };
            let value = quad.integrate_with_breaks(integrand, &breaks)?;
            if let Some(e) = err {
                return Err(e);
            }
            total += z2 * value;
        }
        Ok(self.correlator_prefactor() * total)
    }

    /// The `t`-independent plateau of the correlator in the regime
    /// `delta >> sqrt(4 D t)` ((V/m)^2).
    pub fn white_noise_variance(&self, convention: SpeciesSum) -> f64 {
        let z2 = self.z() * self.z();
        self.correlator_prefactor() * z2 * self.delta * self.c_b * convention.factor()
    }
}

/// Fraction of a uniform layer `[0, delta]` still inside it after free
/// diffusion with spread `width = sqrt(4 D t)`:
/// `erf(d/w) - (w/d)(1 - exp(-(d/w)^2))/sqrt(pi)`.
fn window_retention(delta: f64, width: f64) -> f64 {
    if width == 0.0 {
        return 1.0;
    }
    let x = delta / width;
    erf(x) + (-x * x).exp_m1() / (x * PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::logspace;

    fn fig2() -> ElectrolyteParams {
        ElectrolyteParams::default()
    }

    /// Classic RK4 on dPhi/dxi = -2 sinh(Phi/2), the first integral of the
    /// dimensionless Poisson-Boltzmann equation.
    fn integrate_first_order_ode(phi0: f64, xi_end: f64, steps: usize) -> f64 {
        let f = |p: f64| -2.0 * (0.5 * p).sinh();
        let h = xi_end / steps as f64;
        let mut p = phi0;
        for _ in 0..steps {
            let k1 = f(p);
            let k2 = f(p + 0.5 * h * k1);
            let k3 = f(p + 0.5 * h * k2);
            let k4 = f(p + h * k3);
            p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        p
    }

    #[test]
    fn kappa_for_divalent_salt_at_one_millimolar() {
        let p = ElectrolyteParams {
            c_b: 1.0,
            ..fig2()
        };
        // sqrt(2*4*F^2*1/(R*298*80*eps0)) evaluated independently
        let f = 96485.3365_f64;
        let expect = (8.0 * f * f / (8.314 * 298.0 * 80.0 * 8.8541878128e-12)).sqrt();
        assert!((p.debye_kappa() - expect).abs() / expect < 1e-14);
        assert!((p.debye_kappa() - 2.06e8).abs() < 0.01e8);
        assert!((p.debye_length() - 4.86e-9).abs() < 0.05e-9);
    }

    #[test]
    fn kappa_scales_as_sqrt_concentration() {
        let p = fig2();
        let k4 = p.with_concentration(4.0).debye_kappa();
        assert!((k4 / p.debye_kappa() - 2.0).abs() < 1e-15);
        assert!(p.with_concentration(1e-30).debye_kappa() < 1e-5);
    }

    #[test]
    fn screening_guard() {
        let p = fig2().with_concentration(1e-12);
        assert!(matches!(
            p.gouy_chapman_potential(0.1, 0.0),
            Err(Error::ScreeningRegime { .. })
        ));
        assert!(matches!(p.interface_field(0.1), Err(Error::ScreeningRegime { .. })));
    }

    #[test]
    fn gouy_chapman_boundary_values() {
        let p = fig2();
        for v0 in [-1.0, -0.3, 0.05, 0.7, 2.0] {
            let at0 = p.gouy_chapman_potential(v0, 0.0).unwrap();
            assert!((at0 - v0).abs() <= 4.0 * f64::EPSILON * v0.abs(), "{v0} {at0}");
            let far = p.gouy_chapman_potential(v0, 100.0 / p.debye_kappa()).unwrap();
            assert!(far.abs() < 1e-40);
        }
        assert_eq!(p.gouy_chapman_potential(0.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn gouy_chapman_matches_ode_integration() {
        let p = ElectrolyteParams {
            c_b: 1.0,
            valence: 2,
            temperature: 298.0,
            ..fig2()
        };
        let v0 = 0.05;
        let beta = 2.0 * FARADAY / (GAS_CONSTANT * 298.0);
        let ode = integrate_first_order_ode(beta * v0, 1.0, 4000) / beta;
        let closed = p.gouy_chapman_potential(v0, 1.0 / p.debye_kappa()).unwrap();
        assert!((ode - closed).abs() / closed.abs() < 1e-10, "{ode} {closed}");
    }

    #[test]
    fn gouy_chapman_is_fixed_point_of_first_order_ode() {
        let p = fig2();
        let k = p.debye_kappa();
        let beta = p.beta();
        let v0 = 0.2;
        for i in 0..100 {
            let xi = 0.05 + 6.0 * i as f64 / 100.0;
            let h = 1e-4;
            let phi = |x: f64| beta * p.gouy_chapman_potential(v0, x / k).unwrap();
            let deriv = (phi(xi - 2.0 * h) - 8.0 * phi(xi - h) + 8.0 * phi(xi + h) - phi(xi + 2.0 * h))
                / (12.0 * h);
            let rhs = -2.0 * (0.5 * phi(xi)).sinh();
            assert!((deriv - rhs).abs() / rhs.abs() < 1e-6, "xi={xi} {deriv} {rhs}");
        }
    }

    #[test]
    fn interface_field_is_minus_derivative_at_surface() {
        let p = fig2();
        let v0 = -0.12;
        let h = 1e-4 / p.debye_kappa();
        let phi = |z: f64| p.gouy_chapman_potential(v0, z).unwrap();
        // one-sided 4th-order difference at z = 0
        let d = (-25.0 * phi(0.0) + 48.0 * phi(h) - 36.0 * phi(2.0 * h) + 16.0 * phi(3.0 * h)
            - 3.0 * phi(4.0 * h))
            / (12.0 * h);
        let e = p.interface_field(v0).unwrap();
        assert!((-d - e).abs() / e.abs() < 1e-6, "{} {}", -d, e);
        assert!((p.gouy_chapman_field(v0, 0.0).unwrap() - e).abs() / e.abs() < 1e-12);
    }

    #[test]
    fn linearized_limits() {
        let p = fig2();
        assert_eq!(p.linearized_potential(0.0, 3e-9), 0.0);
        let dilute = p.with_concentration(1e-24);
        let e = dilute.linearized_field(0.3, 0.4e-3);
        assert!((e - 0.3 / p.delta).abs() / (0.3 / p.delta) < 1e-10);
        assert!((dilute.linearized_potential(0.3, 0.25e-3) - 0.225).abs() < 1e-9);
    }

    #[test]
    fn exact_and_linearized_agree_for_small_potentials() {
        let p = fig2();
        // z F V0 / (R T) = 0.04
        let v0 = 0.04 / p.beta();
        let k = p.debye_kappa();
        for i in 0..=50 {
            let z = 10.0 * i as f64 / 50.0 / k;
            let a = p.gouy_chapman_potential(v0, z).unwrap();
            let b = p.linearized_potential(v0, z);
            assert!((a - b).abs() / a.abs() < 5e-3, "z={z} {a} {b}");
        }
        let v_small = 0.4 / p.beta() * 0.01;
        let a = p.gouy_chapman_potential(v_small, 0.5 / k).unwrap();
        let b = p.linearized_potential(v_small, 0.5 / k);
        assert!((a - b).abs() / a < 1e-2);
    }

    #[test]
    fn concentrations_obey_boundary_and_mass_action() {
        let p = fig2();
        for s in Species::BOTH {
            assert_eq!(p.concentration_profile(0.0, 2e-9, s).unwrap(), p.c_b);
            assert!((p.concentration_profile(0.2, p.delta, s).unwrap() - p.c_b).abs() < 1e-15);
        }
        for z in [0.0, 1e-9, 4e-9, 2e-8] {
            let cp = p.concentration_profile(0.15, z, Species::Cation).unwrap();
            let cm = p.concentration_profile(0.15, z, Species::Anion).unwrap();
            assert!((cp * cm - p.c_b * p.c_b).abs() < 1e-12);
            assert!(cp < p.c_b && cm > p.c_b);
        }
        // electroneutral at the reference plane
        let z = p.z();
        let q = z * p.concentration_profile(0.3, p.delta, Species::Cation).unwrap()
            - z * p.concentration_profile(0.3, p.delta, Species::Anion).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn interface_field_symmetry_and_small_signal() {
        let p = fig2();
        assert_eq!(p.interface_field(0.0).unwrap(), 0.0);
        let e = p.interface_field(0.37).unwrap();
        assert_eq!(p.interface_field(-0.37).unwrap(), -e);
        let v0 = 0.09 * 2.0 / p.beta();
        let lin = p.debye_kappa() * v0;
        assert!((p.interface_field(v0).unwrap() - lin).abs() / lin < 1e-2);
    }

    #[test]
    fn invert_interface_field_round_trips() {
        let p = fig2();
        assert_eq!(p.invert_interface_field(0.0), 0.0);
        for i in 0..100 {
            let v0 = -1.0 + 2.0 * i as f64 / 99.0;
            let e = p.interface_field(v0).unwrap();
            let back = p.invert_interface_field(e);
            if v0 != 0.0 {
                assert!((back - v0).abs() / v0.abs() < 1e-12, "{v0} {back}");
            }
        }
        let e = p.interface_field(0.3).unwrap();
        assert!((p.interface_field(p.invert_interface_field(e)).unwrap() - e).abs() / e < 1e-12);
    }

    #[test]
    fn correlator_plateau_at_default_parameters() {
        let p = fig2();
        // 2 F^2 z^2 delta c_b / (N_A A eps^2), evaluated by hand
        let f = 96485.3365_f64;
        let eps = 80.0 * 8.8541878128e-12;
        let expect = 2.0 * f * f * 4.0 * 1e-3 * 1.0 / (6.02e23 * 4e-6 * eps * eps);
        let c0 = p.field_correlator_simplified(0.0);
        assert!((c0 - expect).abs() / expect < 1e-13);
        assert!((c0 - 6.16e7).abs() < 0.02e7, "{c0}");
        assert!((p.white_noise_variance(SpeciesSum::Single) - expect / 2.0).abs() / expect < 1e-14);
        assert!((p.white_noise_variance(SpeciesSum::Both) - c0).abs() / c0 < 1e-14);
    }

    #[test]
    fn correlator_at_diffusion_time_of_the_layer() {
        let p = fig2();
        let t = p.delta * p.delta / (4.0 * p.d_plus);
        // erf(1) - (1 - 1/e)/sqrt(pi) at 20 digits
        let braces = 0.486_064_958_112_255_9;
        let ratio = p.field_correlator_simplified(t) / p.field_correlator_simplified(0.0);
        assert!((ratio - braces).abs() < 1e-14, "{ratio}");
    }

    #[test]
    fn correlator_linearity_and_decay() {
        let p = fig2();
        let p2 = p.with_concentration(2.0);
        let ts = logspace(1e-6, 1e4, 60);
        let mut prev = f64::INFINITY;
        for &t in &ts {
            let c = p.field_correlator_simplified(t);
            assert!((p2.field_correlator_simplified(t) - 2.0 * c).abs() <= 1e-14 * c);
            assert!(c <= prev);
            prev = c;
        }
        assert!(p.field_correlator_simplified(1e12) / p.field_correlator_simplified(0.0) < 1e-4);
        let wide = ElectrolyteParams { delta: 2e-3, ..p };
        let narrow = ElectrolyteParams { area: 8e-6, ..p };
        let w0 = p.white_noise_variance(SpeciesSum::Both);
        assert!((wide.white_noise_variance(SpeciesSum::Both) / w0 - 2.0).abs() < 1e-14);
        assert!((narrow.white_noise_variance(SpeciesSum::Both) / w0 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn full_correlator_reduces_to_simplified_for_flat_profile() {
        let p = fig2();
        for t in logspace(1e-6, 1e3, 20) {
            let full = p.field_correlator_full(0.0, t).unwrap();
            let simple = p.field_correlator_simplified(t);
            assert!((full - simple).abs() / simple < 1e-6, "t={t} {full} {simple}");
        }
    }

    #[test]
    fn full_correlator_with_double_layer() {
        let p = fig2();
        let ts = logspace(1e-5, 1e4, 12);
        let mut prev = f64::INFINITY;
        for &t in &ts {
            let c = p.field_correlator_full(0.1, t).unwrap();
            assert!(c <= prev * (1.0 + 1e-9));
            prev = c;
        }
        assert!(p.field_correlator_full(0.1, 1e9).unwrap() < 1e-3 * p.field_correlator_simplified(0.0));
        // Excess ions in the double layer: integral of 2 c_b (cosh(Phi) - 1)
        // is 4 c_b (cosh(Phi0/2) - 1) / kappa. They sit at v ~ 0 where the
        // kernel is 1/2 once sqrt(4Dt) >> 1/kappa.
        let t = 1.0;
        let phi0 = p.beta() * 0.1;
        let excess_ions = 4.0 * p.c_b * ((0.5 * phi0).cosh() - 1.0) / p.debye_kappa();
        let flat = p.field_correlator_simplified(t) / (p.correlator_prefactor() * p.z() * p.z());
        let expect = 0.5 * excess_ions / flat;
        let excess = p.field_correlator_full(0.1, t).unwrap() / p.field_correlator_simplified(t) - 1.0;
        assert!((excess - expect).abs() / expect < 1e-3, "{excess} {expect}");
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(fig2().validate().is_ok());
        assert!(ElectrolyteParams { c_b: 0.0, ..fig2() }.validate().is_err());
        assert!(ElectrolyteParams { valence: 0, ..fig2() }.validate().is_err());
        assert!(ElectrolyteParams { area: -1.0, ..fig2() }.validate().is_err());
        assert!(ElectrolyteParams { phi_bulk: f64::NAN, ..fig2() }.validate().is_err());
    }
}
