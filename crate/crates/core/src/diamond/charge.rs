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

use serde::{Deserialize, Serialize};

use super::DiamondParams;
use crate::constants::{thermal_voltage, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};
use crate::numeric::{fermi, softplus, Bracket, Integrator};

/// Largest exponent accepted when evaluating carrier densities.
const EXPONENT_GUARD: f64 = 700.0;

/// Band edges, effective densities of states and the intrinsic chemical
/// potential. Energies in eV with the valence band maximum at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandModel {
    pub n_c: f64,
    pub n_v: f64,
    pub mu0: f64,
    pub e_c: f64,
    pub e_v: f64,
}

impl BandModel {
    pub fn from_params(p: &DiamondParams) -> Self {
        let (n_c, n_v) = p.effective_dos();
        let (e_c, e_v) = (p.band_gap, 0.0);
        Self {
            n_c,
            n_v,
            mu0: p.intrinsic_mu(e_c, e_v),
            e_c,
            e_v,
        }
    }
}

/// Charge density as a function of the local electrostatic potential.
pub trait SpaceCharge: Sync {
    /// Charge density (C/m^3) at potential `phi` (V).
    fn density(&self, phi: f64) -> f64;

    /// `integral_{from}^{to} density(phi) dphi` (C V / m^3).
    fn integrated(&self, from: f64, to: f64) -> Result<f64> {
        integrate_by_quadrature(self, from, to)
    }

    /// Potentials where the density changes sign. The field first integral
    /// is extremal there, so these are the only interior candidates for a
    /// vanishing radicand.
    fn neutral_points(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Adaptive quadrature of the charge density, relative tolerance 1e-10.
pub fn integrate_by_quadrature<C: SpaceCharge + ?Sized>(charge: &C, from: f64, to: f64) -> Result<f64> {
    Integrator::new(1e-10, 1e-300).integrate(|phi| charge.density(phi), from, to)
}

/// Charge-free dielectric.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeutralDielectric;

impl SpaceCharge for NeutralDielectric {
    fn density(&self, _phi: f64) -> f64 {
        0.0
    }

    fn integrated(&self, _from: f64, _to: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Potential-independent charge density.
#[derive(Debug, Clone, Copy)]
pub struct UniformCharge(pub f64);

impl SpaceCharge for UniformCharge {
    fn density(&self, _phi: f64) -> f64 {
        self.0
    }

    fn integrated(&self, from: f64, to: f64) -> Result<f64> {
        Ok(self.0 * (to - from))
    }
}

/// Boltzmann carriers plus Fermi-occupied donor and acceptor levels.
///
/// Statistics are evaluated at the band bending `phi - phi_bulk`, so the
/// model is unchanged by a global shift of all potentials.
#[derive(Debug, Clone, Copy)]
pub struct DopedDiamond {
    pub band: BandModel,
    kt: f64,
    reference: f64,
    donor_density: f64,
    donor_level: f64,
    acceptor_density: f64,
    acceptor_level: f64,
    extra_donor: Option<(f64, f64)>,
}

impl DopedDiamond {
    pub fn new(params: &DiamondParams) -> Self {
        let band = params.band_model();
        Self {
            band,
            kt: thermal_voltage(params.temperature),
            reference: params.phi_bulk,
            donor_density: params.donor_density(),
            donor_level: band.e_c - params.donor_depth,
            acceptor_density: params.acceptor_density(),
            acceptor_level: band.e_v + params.acceptor_level,
            extra_donor: params.extra_donor.map(|x| {
                (
                    x.fraction * params.areal_density / params.implant_depth,
                    band.e_c - x.depth_below_ec,
                )
            }),
        }
    }

    /// Electron and hole densities `(n, p)` (1/m^3).
    pub fn carrier_densities(&self, phi: f64) -> Result<(f64, f64)> {
        let b = &self.band;
        let psi = phi - self.reference;
        let xn = (b.mu0 + psi - b.e_c) / self.kt;
        let xp = (b.e_v - b.mu0 - psi) / self.kt;
        for x in [xn, xp] {
            if x > EXPONENT_GUARD {
                return Err(Error::Overflow { exponent: x });
            }
        }
        Ok((b.n_c * xn.exp(), b.n_v * xp.exp()))
    }

    /// Ionized donor and acceptor densities `(N_d+, N_a-)` (1/m^3).
    /// The optional extra donor level is folded into `N_d+`.
    pub fn ionized_dopants(&self, phi: f64) -> (f64, f64) {
        let psi = phi - self.reference;
        let mu = self.band.mu0 + psi;
        let mut nd = self.donor_density * fermi((mu - self.donor_level) / self.kt);
        if let Some((density, level)) = self.extra_donor {
            nd += density * fermi((mu - level) / self.kt);
        }
        let na = self.acceptor_density * fermi((self.acceptor_level - mu) / self.kt);
        (nd, na)
    }

    /// Potential (V) at which the space charge vanishes.
    pub fn neutral_potential(&self) -> Result<f64> {
        let mut f = |phi: f64| self.density(phi);
        let span = self.band.e_c - self.band.e_v;
        let lo = self.reference - span;
        let hi = self.reference + span;
        let bracket = Bracket::scan(&mut f, lo, hi, 64).ok_or(Error::NoBracket { lo, hi })?;
        crate::numeric::find_root(f, bracket, Default::default())
    }

    fn donor_antiderivative(&self, psi: f64, density: f64, level: f64) -> f64 {
        // d/dpsi [psi - kT softplus(u/kT)] = fermi(u/kT), u = mu0 + psi - level
        let u = self.band.mu0 + psi - level;
        let g = if u > 0.0 {
            (level - self.band.mu0) - self.kt * (-u / self.kt).exp().ln_1p()
        } else {
            psi - self.kt * softplus(u / self.kt)
        };
        density * g
    }

    fn acceptor_antiderivative(&self, psi: f64) -> f64 {
        // d/dpsi [kT softplus(w/kT) - w] = fermi(w/kT), w = E_a - mu0 - psi
        let w = self.acceptor_level - self.band.mu0 - psi;
        let h = if w > 0.0 {
            self.kt * (-w / self.kt).exp().ln_1p()
        } else {
            self.kt * (w / self.kt).exp().ln_1p() - w
        };
        self.acceptor_density * h
    }

    /// Antiderivative of `density / e` with respect to the band bending.
    fn antiderivative_pieces(&self, psi: f64) -> [f64; 4] {
        let b = &self.band;
        let n = b.n_c * ((b.mu0 + psi - b.e_c) / self.kt).exp();
        let p = b.n_v * ((b.e_v - b.mu0 - psi) / self.kt).exp();
        let mut donors = self.donor_antiderivative(psi, self.donor_density, self.donor_level);
        if let Some((density, level)) = self.extra_donor {
            donors += self.donor_antiderivative(psi, density, level);
        }
        [-self.kt * p, -self.kt * n, donors, -self.acceptor_antiderivative(psi)]
    }
}

impl SpaceCharge for DopedDiamond {
    fn density(&self, phi: f64) -> f64 {
        let b = &self.band;
        let psi = phi - self.reference;
        let n = b.n_c * ((b.mu0 + psi - b.e_c) / self.kt).exp();
        let p = b.n_v * ((b.e_v - b.mu0 - psi) / self.kt).exp();
        let (nd, na) = self.ionized_dopants(phi);
        ELEMENTARY_CHARGE * ((p - n) + (nd - na))
    }

    /// Closed-form integral; differences are taken term by term so that
    /// the large linear pieces of the dopant antiderivatives cancel exactly.
    fn integrated(&self, from: f64, to: f64) -> Result<f64> {
        if from == to {
            return Ok(0.0);
        }
        let a = self.antiderivative_pieces(from - self.reference);
        let b = self.antiderivative_pieces(to - self.reference);
        let sum: f64 = a.iter().zip(&b).map(|(x, y)| y - x).sum();
        Ok(ELEMENTARY_CHARGE * sum)
    }

    fn neutral_points(&self) -> Vec<f64> {
        self.neutral_potential().into_iter().collect()
    }
}
