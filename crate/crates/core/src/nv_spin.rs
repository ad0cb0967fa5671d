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

//! Ground-state spin of a shallow NV centre: level structure under electric
//! and magnetic fields, Ramsey decay driven by field noise, and the photon
//! readout statistics that set the concentration sensitivity.
//!
//! All spin frequencies are in Hz (not rad/s).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::numeric::Integrator;

/// `1 Hz cm / V` in `Hz m / V`.
pub const HZ_CM_PER_V: f64 = 1e-2;
/// `1 Hz / G` in `Hz / T`.
pub const HZ_PER_GAUSS: f64 = 1e4;
/// Ratio `gamma_e |B| / D` above which the perturbative level picture is flagged.
pub const STRONG_FIELD_RATIO: f64 = 0.1;

/// Angle between a <111> NV axis and the [001] surface normal.
pub fn default_nv_tilt() -> f64 {
    (1.0f64 / 3.0).sqrt().acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NVParams {
    /// Zero-field splitting (Hz).
    pub zfs: f64,
    /// Electron gyromagnetic ratio (Hz/T).
    pub gamma_e: f64,
    /// Axial electric coupling (Hz m/V).
    pub d_par: f64,
    /// Transverse electric coupling (Hz m/V).
    pub d_perp: f64,
    /// Second transverse coupling (Hz m/V); unused by the level model.
    pub d_perp_prime: f64,
    /// Angle between the NV axis and the lab z axis, axis in the lab x-z plane (rad).
    pub tilt: f64,
    /// Axial magnetic field (T).
    pub b_z: f64,
    /// Azimuth of the transverse magnetic field (rad).
    pub phi_b: f64,
}

impl Default for NVParams {
    fn default() -> Self {
        Self {
            zfs: 2.87e9,
            gamma_e: 2.8e6 * HZ_PER_GAUSS,
            d_par: 0.35 * HZ_CM_PER_V,
            d_perp: 17.0 * HZ_CM_PER_V,
            d_perp_prime: 17.0 * HZ_CM_PER_V,
            tilt: default_nv_tilt(),
            b_z: 0.0,
            phi_b: 0.0,
        }
    }
}

/// Eigenfrequencies of the `|+-1>` manifold relative to `|0>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinLevels {
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// Mixing angle, `tan(theta) = xi_perp / beta_z` (rad).
    pub theta: f64,
    /// Azimuth of the transverse electric field in the NV frame (rad).
    pub phi_e: f64,
    /// Transverse Stark term `d_perp E_perp` (Hz).
    pub xi_perp: f64,
    /// Zeeman term `gamma_e B_z` (Hz).
    pub beta_z: f64,
    /// Set when `gamma_e |B_z| / D >= 0.1`.
    pub strong_field: bool,
}

/// How the Ramsey decay is tied to the zero-lag frequency correlator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T2Convention {
    /// `1/T2* = 2 pi sqrt(C(0))`.
    #[default]
    TwoPi,
    /// `1/T2*^2 = 2 pi^2 C(0)`, from the `exp(-<dpsi^2>/2)` envelope.
    Half,
}

impl std::str::FromStr for T2Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_pi" => Ok(Self::TwoPi),
            "half" => Ok(Self::Half),
            _ => Err(Error::Config(format!("unknown T2* convention `{s}` (two_pi|half)"))),
        }
    }
}

impl NVParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("nv.zfs", self.zfs)?;
        ensure_positive("nv.gamma_e", self.gamma_e)?;
        ensure_positive("nv.d_perp", self.d_perp)?;
        for (name, v) in [
            ("nv.d_par", self.d_par),
            ("nv.d_perp_prime", self.d_perp_prime),
            ("nv.tilt", self.tilt),
            ("nv.b_z", self.b_z),
            ("nv.phi_b", self.phi_b),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        Ok(())
    }

    /// Components of a lab-frame field `E_z` in the NV frame (V/m).
    pub fn lab_to_nv_field(&self, e_z_lab: f64) -> [f64; 3] {
        [self.tilt.sin() * e_z_lab, 0.0, self.tilt.cos() * e_z_lab]
    }

    /// Share of the lab-frame field variance seen transversally (`2/3` for <111>).
    pub fn transverse_projection(&self) -> f64 {
        self.tilt.sin().powi(2)
    }

    pub fn spin_levels(&self, e_z_lab: f64, b_z: f64) -> SpinLevels {
        let [ex, ey, _] = self.lab_to_nv_field(e_z_lab);
        let xi_perp = self.d_perp * ex.hypot(ey);
        let beta_z = self.gamma_e * b_z;
        let split = xi_perp.hypot(beta_z);
        SpinLevels {
            nu_plus: self.zfs + split,
            nu_minus: self.zfs - split,
            theta: xi_perp.atan2(beta_z),
            phi_e: ey.atan2(ex),
            xi_perp,
            beta_z,
            strong_field: (beta_z / self.zfs).abs() >= STRONG_FIELD_RATIO,
        }
    }

    /// Shift of `|->` in the basis prepared by a transverse field at
    /// azimuth `phi_b`, `d_perp E_x^NV cos(2 phi_b)` (Hz); `|+>` moves by
    /// the opposite amount.
    ///
    /// A 230 kV/m change gives about 32 kHz here; leaving out the
    /// projection onto the NV frame, as [`Self::stark_shift_unprojected`]
    /// does, gives about 39 kHz.
    pub fn stark_shift(&self, e_z_lab: f64, phi_b: f64) -> f64 {
        self.d_perp * self.lab_to_nv_field(e_z_lab)[0] * (2.0 * phi_b).cos()
    }

    /// `d_perp E_z cos(2 phi_b)` with the lab field used directly (Hz).
    pub fn stark_shift_unprojected(&self, e_z_lab: f64, phi_b: f64) -> f64 {
        self.d_perp * e_z_lab * (2.0 * phi_b).cos()
    }

    /// Frequency correlator from the electrolyte field correlator and the
    /// surface-to-NV transfer derivative (Hz^2).
    pub fn nu_fluctuation_correlator(&self, transfer: f64, field_correlator: f64) -> f64 {
        self.d_perp * self.d_perp * self.transverse_projection() * transfer * transfer * field_correlator
    }
}

/// Frequency correlator built from an electric field correlator, with an
/// optional magnetic contribution added on top (Hz^2).
pub fn nu_correlator_fn<'a>(
    nv: &'a NVParams,
    transfer: f64,
    field_correlator: impl Fn(f64) -> f64 + 'a,
    magnetic: Option<&'a dyn Fn(f64) -> f64>,
) -> impl Fn(f64) -> f64 + 'a {
    move |t| nv.nu_fluctuation_correlator(transfer, field_correlator(t)) + magnetic.map_or(0.0, |m| m(t))
}

/// Accumulated phase variance `4 pi^2 int_0^tau int_0^tau C(t - t') dt dt'`
/// of a stationary correlator, reduced to `8 pi^2 int_0^tau (tau - s) C(s) ds` (rad^2).
pub fn phase_variance<F: Fn(f64) -> f64>(nu_correlator: F, tau: f64) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    ensure_positive("tau", tau)?;
    let inner = Integrator::new(1e-12, 0.0)
        .max_segments(10_000)
        .integrate(|s| (tau - s) * nu_correlator(s), 0.0, tau)?;
    Ok(8.0 * PI * PI * inner)
}

/// `1/T2*` (Hz) from the zero-lag frequency correlator `C(0)` (Hz^2).
pub fn inv_t2_star(c0: f64, convention: T2Convention) -> f64 {
    let c0 = c0.max(0.0);
    match convention {
        T2Convention::TwoPi => 2.0 * PI * c0.sqrt(),
        T2Convention::Half => PI * (2.0 * c0).sqrt(),
    }
}

/// `T2*` (s) of a frequency correlator; infinite when it vanishes at zero lag.
pub fn t2_star<F: Fn(f64) -> f64>(nu_correlator: F, convention: T2Convention) -> f64 {
    1.0 / inv_t2_star(nu_correlator(0.0), convention)
}

/// Ramsey population of `|0>`-complement,
/// `(1 - exp(-(tau/T2*)^2) cos psi) / 2`.
pub fn ramsey_signal(tau: f64, t2_star: f64, psi: f64) -> f64 {
    let x = tau / t2_star;
    0.5 * (1.0 - (-x * x).exp() * psi.cos())
}

/// Mean photon counts per shot for the two spin states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for ReadoutParams {
    fn default() -> Self {
        Self::new(0.03)
    }
}

impl ReadoutParams {
    /// Readout with `beta = 2 alpha / 3`.
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha,
            beta: 2.0 * alpha / 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("readout.beta", self.beta)?;
        if !(self.alpha > self.beta) {
            return Err(Error::InvalidParameter {
                name: "readout.alpha",
                reason: format!("must exceed beta = {}", self.beta),
            });
        }
        Ok(())
    }

    /// Averaged observable `<M>`.
    pub fn mean_m(&self, t: f64, t2_star: f64, psi: f64) -> f64 {
        let x = t / t2_star;
        0.5 * (self.alpha + self.beta) + 0.5 * (self.alpha - self.beta) * (-x * x).exp() * psi.cos()
    }

    /// Shot variance `(Delta M)^2`: Poisson term plus spin projection noise.
    pub fn var_m(&self, t: f64, t2_star: f64, psi: f64) -> f64 {
        let x = t / t2_star;
        let d = self.alpha - self.beta;
        let c = psi.cos() * (-x * x).exp();
        self.mean_m(t, t2_star, psi) + 0.25 * d * d * (1.0 - c * c)
    }
}

/// `(Delta T2*)^2 = 15 T2*^6 exp(2 (t/T2*)^2) / (2 alpha t^4 cos^2 psi)` (s^2),
/// keeping only the leading Poisson term at `alpha = 3 beta / 2`.
pub fn variance_of_t2_estimate(t2_star: f64, t: f64, psi: f64, readout: &ReadoutParams) -> Result<f64> {
    let c = psi.cos();
    if c.abs() < 1e-15 {
        return Err(Error::DivisionByZero);
    }
    let x = t / t2_star;
    Ok(15.0 * t2_star.powi(6) * (2.0 * x * x).exp() / (2.0 * readout.alpha * t.powi(4) * c * c))
}

/// Concentration sensitivity (mol m^-3 Hz^-1/2) at interrogation time `t`
/// for `1/T2* = a c_b^b`, with `cos psi = 1`.
pub fn sensitivity(a: f64, b: f64, c_b: f64, t: f64, readout: &ReadoutParams) -> f64 {
    let t2 = 1.0 / (a * c_b.powf(b));
    let x = t / t2;
    (15.0 * t / (2.0 * readout.alpha)).sqrt() * (a / b) * c_b.powf(b + 1.0) * t.powi(-2) * t2.powi(3) * (x * x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_conversions() {
        let nv = NVParams::default();
        assert_eq!(nv.d_perp, 0.17);
        assert!((nv.d_par - 0.0035).abs() < 1e-18);
        assert_eq!(nv.gamma_e, 2.8e10);
    }

    #[test]
    fn lab_projection() {
        let nv = NVParams::default();
        assert_eq!(nv.lab_to_nv_field(0.0), [0.0, 0.0, 0.0]);
        let [x, y, z] = nv.lab_to_nv_field(1.0);
        assert!((x - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(y, 0.0);
        assert!((z - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((x * x + z * z - 1.0).abs() < 1e-15);
        assert!((nv.transverse_projection() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn levels() {
        let nv = NVParams::default();
        let l = nv.spin_levels(0.0, 0.0);
        assert_eq!((l.nu_plus, l.nu_minus), (2.87e9, 2.87e9));
        let e = 3e6;
        let l = nv.spin_levels(e, 0.0);
        let expect = 2.0 * 0.17 * (2.0f64 / 3.0).sqrt() * e;
        assert!((l.nu_plus - l.nu_minus - expect).abs() < 1e-6 * expect);
        let l = nv.spin_levels(0.0, 1e-3);
        assert_eq!(l.nu_plus - l.nu_minus, 2.0 * 2.8e10 * 1e-3);
        assert_eq!(l.theta, 0.0);
        assert!(!l.strong_field);
        assert!(nv.spin_levels(0.0, 0.02).strong_field);
    }

    #[test]
    fn stark_shift_conventions() {
        let nv = NVParams::default();
        assert!(nv.stark_shift(1e6, PI / 4.0).abs() < 1e-9);
        let lab = nv.stark_shift_unprojected(230e3, 0.0);
        let projected = nv.stark_shift(230e3, 0.0);
        assert!((lab - 39.1e3).abs() < 0.1e3, "{lab}");
        assert!((projected - 31.9e3).abs() < 0.1e3, "{projected}");
        assert_eq!(nv.stark_shift(2e5, 0.3), 2.0 * nv.stark_shift(1e5, 0.3));
    }

    #[test]
    fn frequency_correlator_scalar() {
        let nv = NVParams::default();
        let c = nv.nu_fluctuation_correlator(1.0, 6.2e7);
        assert!((c - 0.17f64 * 0.17 * 2.0 / 3.0 * 6.2e7).abs() < 1e-9 * c);
        assert!((c - 1.19e6).abs() < 0.01e6);
        assert_eq!(nv.nu_fluctuation_correlator(1.0, 0.0), 0.0);
        assert!((nv.nu_fluctuation_correlator(3.0, 6.2e7) / c - 9.0).abs() < 1e-14);
        let magnetic = |_t: f64| 5.0;
        let f = nu_correlator_fn(&nv, 1.0, |_| 6.2e7, Some(&magnetic));
        assert!((f(1e-6) - c - 5.0).abs() < 1e-9);
    }

    #[test]
    fn phase_variance_closed_forms() {
        let c = 1.3e6;
        for tau in [1e-7, 1e-5, 3e-3] {
            let v = phase_variance(|_| c, tau).unwrap();
            let exact = 4.0 * PI * PI * c * tau * tau;
            assert!((v - exact).abs() <= 1e-10 * exact);
        }
        assert_eq!(phase_variance(|_| c, 0.0).unwrap(), 0.0);
        // exponential kernel: 8 pi^2 C tc^2 (tau/tc - 1 + exp(-tau/tc))
        let tc = 1e-3;
        for tau in [1e-5, 1e-3, 7e-3] {
            let v = phase_variance(|s| c * (-s / tc).exp(), tau).unwrap();
            let r = tau / tc;
            let exact = 8.0 * PI * PI * c * tc * tc * (r - 1.0 + (-r).exp());
            assert!((v - exact).abs() <= 1e-9 * exact, "{v} {exact}");
        }
        let short = phase_variance(|s| c * (-s / tc).exp(), tc / 100.0).unwrap();
        let flat = 4.0 * PI * PI * c * (tc / 100.0).powi(2);
        assert!((short - flat).abs() < 0.01 * flat);
    }

    #[test]
    fn t2_star_conventions() {
        assert!(t2_star(|_| 0.0, T2Convention::TwoPi).is_infinite());
        let a = t2_star(|_| 1e6, T2Convention::TwoPi);
        let b = t2_star(|_| 4e6, T2Convention::TwoPi);
        assert!((a / b - 2.0).abs() < 1e-15);
        assert!((a - 1.0 / (2.0 * PI * 1e3)).abs() < 1e-18);
        let h = t2_star(|_| 1e6, T2Convention::Half);
        assert!((h / a - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!("half".parse::<T2Convention>().unwrap(), T2Convention::Half);
        assert!("x".parse::<T2Convention>().is_err());
    }

    #[test]
    fn ramsey_limits() {
        assert_eq!(ramsey_signal(0.0, 1e-5, 0.0), 0.0);
        assert!((ramsey_signal(1e-9, 1e-5, PI) - 1.0).abs() < 1e-7);
        assert_eq!(ramsey_signal(1.0, 1e-5, 0.3), 0.5);
        assert!((ramsey_signal(2e-6, 1e-5, PI / 2.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn readout_variance_matches_error_propagation() {
        let r = ReadoutParams::default();
        assert!(r.validate().is_ok());
        assert!((r.beta - 0.02).abs() < 1e-17);
        let (t2, t, psi) = (1e-5, 7e-6, 0.2);
        // leading Poisson term over the squared slope of <M>
        let h = 1e-6 * t2;
        let slope = (r.mean_m(t, t2 + h, psi) - r.mean_m(t, t2 - h, psi)) / (2.0 * h);
        let poisson = 0.5 * (r.alpha + r.beta);
        let v = variance_of_t2_estimate(t2, t, psi, &r).unwrap();
        assert!((v - poisson / (slope * slope)).abs() < 1e-6 * v);
        assert!(r.var_m(t, t2, psi) > r.mean_m(t, t2, psi));
        assert_eq!(variance_of_t2_estimate(t2, t, PI / 2.0, &r), Err(Error::DivisionByZero));
        let at_t2 = variance_of_t2_estimate(t2, t2, 0.0, &r).unwrap();
        let e2 = 1f64.exp().powi(2);
        assert!((at_t2 - 15.0 * t2 * t2 * e2 / (2.0 * r.alpha)).abs() < 1e-12 * at_t2);
        let r2 = ReadoutParams::new(0.06);
        assert!((variance_of_t2_estimate(t2, t, psi, &r2).unwrap() * 2.0 - v).abs() < 1e-12 * v);
    }

    #[test]
    fn t2_uncertainty_is_smallest_near_t2() {
        let r = ReadoutParams::default();
        let t2 = 1e-5;
        let best = (1..2000)
            .map(|i| i as f64 * 1e-3 * 3.0 * t2)
            .min_by(|a, b| {
                let va = variance_of_t2_estimate(t2, *a, 0.0, &r).unwrap();
                let vb = variance_of_t2_estimate(t2, *b, 0.0, &r).unwrap();
                va.total_cmp(&vb)
            })
            .unwrap();
        assert!((best - t2).abs() < 2e-3 * t2, "{best}");
    }

    #[test]
    fn worked_sensitivity_example() {
        let r = ReadoutParams::default();
        let eta = sensitivity(39295.0, 0.417, 10.0, 10e-6, &r);
        assert!((eta - 3.27).abs() < 0.05, "{eta}");
        assert!(sensitivity(39295.0, 0.417, 10.0, 1e-12, &r) > 1e6);
        let doubled = sensitivity(39295.0, 0.417, 10.0, 10e-6, &ReadoutParams::new(0.06));
        assert!((eta / doubled - 2f64.sqrt()).abs() < 1e-12);
    }
}
