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

//! Physical constants shared by the electrolyte and diamond models.
//!
//! Faraday, gas and Avogadro constants use the rounded values of the
//! reference model rather than CODATA so that published numbers are
//! reproduced exactly.

/// Faraday constant (C/mol).
pub const FARADAY: f64 = 96485.3365;
/// Molar gas constant (J/(mol K)).
pub const GAS_CONSTANT: f64 = 8.314;
/// Avogadro number (1/mol).
pub const AVOGADRO: f64 = 6.02e23;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054571817e-34;
/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;
/// Electron rest mass (kg).
pub const ELECTRON_MASS: f64 = 9.1093837015e-31;

/// Bundle of the constants above, for callers that want to pass them around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub faraday: f64,
    pub gas_constant: f64,
    pub avogadro: f64,
    pub boltzmann: f64,
    pub elementary_charge: f64,
    pub hbar: f64,
    pub eps0: f64,
    pub electron_mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            faraday: FARADAY,
            gas_constant: GAS_CONSTANT,
            avogadro: AVOGADRO,
            boltzmann: BOLTZMANN,
            elementary_charge: ELEMENTARY_CHARGE,
            hbar: HBAR,
            eps0: VACUUM_PERMITTIVITY,
            electron_mass: ELECTRON_MASS,
        }
    }
}

/// Thermal energy kT expressed in eV.
pub fn thermal_voltage(temperature: f64) -> f64 {
    BOLTZMANN * temperature / ELEMENTARY_CHARGE
}

/// RT/F in volts, the electrolyte-side thermal voltage.
pub fn molar_thermal_voltage(temperature: f64) -> f64 {
    GAS_CONSTANT * temperature / FARADAY
}
