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

//! Electrostatics inside nitrogen-implanted diamond.
//!
//! The space charge depends on the local potential only, which turns the
//! one-dimensional Poisson equation into a first integral `E(phi)` and a
//! quadrature `z(phi)`. [`Interface`] matches that column to the
//! electrolyte through potential and displacement continuity.

mod charge;
mod interface;

pub use charge::{BandModel, DopedDiamond, NeutralDielectric, SpaceCharge, UniformCharge};
pub use interface::{Interface, InterfaceSolution, ProfileSample};

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, ELECTRON_MASS, HBAR, VACUUM_PERMITTIVITY};
use crate::error::{ensure_positive, Error, Result};

/// Extra donor level, e.g. NV- acting as a deep donor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtraDonor {
    /// Share of the implanted areal density carried by this level.
    pub fraction: f64,
    /// Ionization energy below the conduction band edge (eV).
    pub depth_below_ec: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamondParams {
    /// Absolute permittivity (F/m).
    pub eps: f64,
    /// Band gap (eV).
    pub band_gap: f64,
    /// Conduction band effective mass (units of m0).
    pub m_eff_n: f64,
    /// Valence band effective mass (units of m0).
    pub m_eff_p: f64,
    /// Implanted nitrogen areal density (1/m^2).
    pub areal_density: f64,
    /// Implantation depth over which the dopants are spread (m).
    pub implant_depth: f64,
    /// Share of implanted nitrogen ending up as substitutional N (donor).
    pub frac_ns: f64,
    /// Share ending up as NV (acceptor).
    pub frac_nv: f64,
    /// Substitutional N donor level below E_c (eV).
    pub donor_depth: f64,
    /// NV acceptor level above E_v (eV).
    pub acceptor_level: f64,
    pub extra_donor: Option<ExtraDonor>,
    /// Depth of the bulk Dirichlet plane (m).
    pub z_bulk: f64,
    /// Potential at the bulk plane (V).
    pub phi_bulk: f64,
    /// Temperature (K).
    pub temperature: f64,
}

impl Default for DiamondParams {
    fn default() -> Self {
        Self {
            eps: 5.8 * VACUUM_PERMITTIVITY,
            band_gap: 5.47,
            m_eff_n: 0.57,
            m_eff_p: 0.8,
            areal_density: 1e16,
            implant_depth: 14e-9,
            frac_ns: 0.96,
            frac_nv: 0.04,
            donor_depth: 1.7,
            acceptor_level: 1.0,
            extra_donor: None,
            z_bulk: 100e-9,
            phi_bulk: 0.0,
            temperature: 298.0,
        }
    }
}

impl DiamondParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("diamond.eps", self.eps)?;
        ensure_positive("diamond.band_gap", self.band_gap)?;
        ensure_positive("diamond.m_eff_n", self.m_eff_n)?;
        ensure_positive("diamond.m_eff_p", self.m_eff_p)?;
        ensure_positive("diamond.areal_density", self.areal_density)?;
        ensure_positive("diamond.implant_depth", self.implant_depth)?;
        ensure_positive("diamond.temperature", self.temperature)?;
        for (name, f) in [("diamond.frac_ns", self.frac_ns), ("diamond.frac_nv", self.frac_nv)] {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must lie in (0, 1), got {f}"),
                });
            }
        }
        if (self.frac_ns + self.frac_nv - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "diamond.frac_ns",
                reason: format!("frac_ns + frac_nv must be 1, got {}", self.frac_ns + self.frac_nv),
            });
        }
        if !(self.z_bulk > self.implant_depth) {
            return Err(Error::InvalidParameter {
                name: "diamond.z_bulk",
                reason: "must exceed the implantation depth".into(),
            });
        }
        if !(self.donor_depth > 0.0 && self.donor_depth < self.band_gap) {
            return Err(Error::InvalidParameter {
                name: "diamond.donor_depth",
                reason: "donor level must lie inside the gap".into(),
            });
        }
        if !(self.acceptor_level > 0.0 && self.acceptor_level < self.band_gap) {
            return Err(Error::InvalidParameter {
                name: "diamond.acceptor_level",
                reason: "acceptor level must lie inside the gap".into(),
            });
        }
        if let Some(x) = self.extra_donor {
            if !(x.fraction > 0.0) || !(x.depth_below_ec > 0.0 && x.depth_below_ec < self.band_gap) {
                return Err(Error::InvalidParameter {
                    name: "diamond.extra_donor",
                    reason: "needs fraction > 0 and a level inside the gap".into(),
                });
            }
        }
        if !self.phi_bulk.is_finite() {
            return Err(Error::InvalidParameter {
                name: "diamond.phi_bulk",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    /// Substitutional nitrogen donor density (1/m^3).
    pub fn donor_density(&self) -> f64 {
        self.frac_ns * self.areal_density / self.implant_depth
    }

    /// NV acceptor density (1/m^3).
    pub fn acceptor_density(&self) -> f64 {
        self.frac_nv * self.areal_density / self.implant_depth
    }

    /// Effective densities of states `(N_c, N_v)` (1/m^3).
    pub fn effective_dos(&self) -> (f64, f64) {
        let dos = |m: f64| {
            let x = m * ELECTRON_MASS * BOLTZMANN * self.temperature / (2.0 * std::f64::consts::PI * HBAR * HBAR);
            2.0 * x.powf(1.5)
        };
        (dos(self.m_eff_n), dos(self.m_eff_p))
    }

    /// Intrinsic chemical potential (eV) for the given band edges.
    pub fn intrinsic_mu(&self, e_c: f64, e_v: f64) -> f64 {
        let kt = crate::constants::thermal_voltage(self.temperature);
        0.5 * (e_v + e_c) + 0.75 * kt * (self.m_eff_p / self.m_eff_n).ln()
    }

    pub fn band_model(&self) -> BandModel {
        BandModel::from_params(self)
    }
}
