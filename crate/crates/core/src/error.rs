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

use thiserror::Error;

/// Errors raised by the solvers and drivers in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Gouy-Chapman solution requires kappa*Delta > {threshold}, got {kappa_delta:.4e}")]
    ScreeningRegime { kappa_delta: f64, threshold: f64 },

    #[error("quadrature did not reach tolerance: estimate {estimate:.6e}, error {error:.3e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("radicand of the field first integral is negative ({radicand:.6e}) at phi = {phi:.9} V")]
    RadicandNegative { phi: f64, radicand: f64 },

    #[error("potential {phi:.9} V is not reached: the field vanishes or points away before it")]
    Unreachable { phi: f64 },

    #[error("exponent {exponent:.3e} exceeds the overflow guard")]
    Overflow { exponent: f64 },

    #[error("no sign change found for the surface potential in [{lo:.3}, {hi:.3}] V")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root finding did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConverged { iterations: usize, residual: f64 },

    #[error("finite-difference derivative unstable: estimates {coarse:.6e} and {fine:.6e}")]
    DerivativeUnstable { coarse: f64, fine: f64 },

    #[error("cos(psi) = 0 makes the T2* estimate variance singular")]
    DivisionByZero,

    #[error("power-law fit needs at least {required} points, got {got}")]
    InsufficientPoints { required: usize, got: usize },

    #[error("bin width {bin_width:.3e} m is below three diffusion step lengths ({step:.3e} m)")]
    Resolution { bin_width: f64, step: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
