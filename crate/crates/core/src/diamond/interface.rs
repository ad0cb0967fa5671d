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

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{DiamondParams, DopedDiamond, SpaceCharge};
use crate::electrolyte::ElectrolyteParams;
use crate::error::{Error, Result};
use crate::numeric::{find_root, linspace, logspace, Bracket, Integrator, RootOptions};

/// Half-width of the fallback search window for the surface potential (V).
const SEARCH_MARGIN: f64 = 5.0;
const SEARCH_CELLS: usize = 200;
/// Relative step of the interface field used by [`Interface::transfer_derivative`].
const TRANSFER_STEP: f64 = 1e-4;
const TRANSFER_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    /// Depth below the surface (m).
    pub depth: f64,
    /// Potential (V).
    pub phi: f64,
    /// Field `d phi / d depth` (V/m).
    pub field: f64,
}

/// Matched electrolyte/diamond state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSolution {
    /// Surface potential `phi(0)` (V).
    pub phi0: f64,
    /// Step across the electrolyte, `phi(0) - phi_be` (V).
    pub v0: f64,
    /// Electrolyte-side interface field (V/m).
    pub e_e0: f64,
    /// Diamond-side interface field (V/m).
    pub e_d0: f64,
    pub profile: Vec<ProfileSample>,
    pub converged: bool,
    /// `|phi(z_bulk) - phi_bd|` (V).
    pub residual: f64,
}

impl InterfaceSolution {
    /// Profile as CSV with header `depth_m,phi_V,E_Vpm`.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("depth_m,phi_V,E_Vpm\n");
        for s in &self.profile {
            let _ = writeln!(out, "{:e},{:e},{:e}", s.depth, s.phi, s.field);
        }
        out
    }
}

/// Diamond column below an electrolyte, coupled through continuity of
/// potential and displacement at the surface.
///
/// Depth runs into the diamond and fields are `d phi / d depth`. The
/// space charge depends on `phi` only, so the field follows from the first
/// integral `E^2 = (r E_e0)^2 - (2/eps_d) int_{phi0}^{phi} rho`, with
/// `r = eps_e / eps_d`, and depth from `z = int dphi / E`.
#[derive(Debug, Clone)]
pub struct Interface<C> {
    pub electrolyte: ElectrolyteParams,
    pub eps_d: f64,
    pub z_bulk: f64,
    pub phi_bulk: f64,
    pub charge: C,
    neutral: Vec<f64>,
    quad: Integrator,
}

impl Interface<DopedDiamond> {
    pub fn new(electrolyte: ElectrolyteParams, diamond: &DiamondParams) -> Result<Self> {
        diamond.validate()?;
        Self::with_charge(electrolyte, diamond, DopedDiamond::new(diamond))
    }
}

impl<C: SpaceCharge> Interface<C> {
    /// Uses `charge` in place of the doped-diamond model; geometry and
    /// permittivity still come from `diamond`.
    pub fn with_charge(electrolyte: ElectrolyteParams, diamond: &DiamondParams, charge: C) -> Result<Self> {
        electrolyte.validate()?;
        crate::error::ensure_positive("diamond.eps", diamond.eps)?;
        crate::error::ensure_positive("diamond.z_bulk", diamond.z_bulk)?;
        let neutral = charge.neutral_points();
        Ok(Self {
            electrolyte,
            eps_d: diamond.eps,
            z_bulk: diamond.z_bulk,
            phi_bulk: diamond.phi_bulk,
            charge,
            neutral,
            quad: Integrator::new(1e-10, 0.0).max_segments(2000),
        })
    }

    /// `eps_e / eps_d`.
    pub fn permittivity_ratio(&self) -> f64 {
        self.electrolyte.eps / self.eps_d
    }

    /// `(r E_e0)^2 - (2/eps_d) int_{phi0}^{phi} rho dphi` ((V/m)^2).
    pub fn radicand(&self, phi0: f64, e_e0: f64, phi: f64) -> Result<f64> {
        let e0 = self.permittivity_ratio() * e_e0;
        Ok(e0 * e0 - 2.0 / self.eps_d * self.charge.integrated(phi0, phi)?)
    }

    /// Rounding scale of [`Self::radicand`]; an endpoint radicand within it
    /// of zero is a turning point rather than an overshoot.
    fn radicand_noise(&self, phi0: f64, e_e0: f64, phi: f64) -> Result<f64> {
        let e0 = self.permittivity_ratio() * e_e0;
        let integral = 2.0 / self.eps_d * self.charge.integrated(phi0, phi)?;
        Ok(64.0 * f64::EPSILON * (e0 * e0 + integral.abs()))
    }

    /// Direction in which the potential moves away from the surface.
    fn direction(&self, phi0: f64, e_e0: f64) -> f64 {
        if e_e0 != 0.0 {
            e_e0.signum()
        } else {
            let rho = self.charge.density(phi0);
            if rho == 0.0 {
                0.0
            } else {
                -rho.signum()
            }
        }
    }

    /// Field at potential `phi` on the branch leaving the surface (V/m).
    pub fn field_first_integral(&self, phi0: f64, e_e0: f64, phi: f64) -> Result<f64> {
        let mut r = self.radicand(phi0, e_e0, phi)?;
        if r < 0.0 {
            if r < -self.radicand_noise(phi0, e_e0, phi)? {
                return Err(Error::RadicandNegative { phi, radicand: r });
            }
            r = 0.0;
        }
        let s = self.direction(phi0, e_e0);
        let s = if s == 0.0 { (phi - phi0).signum() } else { s };
        Ok(s * r.sqrt())
    }

    /// Fails unless the radicand stays positive on the open path from `a`
    /// to `b` and non-negative at its ends.
    fn check_reachable(&self, phi0: f64, e_e0: f64, a: f64, b: f64) -> Result<()> {
        let dir = self.direction(phi0, e_e0);
        if dir == 0.0 || (b - a).signum() != dir {
            return Err(Error::Unreachable { phi: b });
        }
        for &x in &[a, b] {
            let r = self.radicand(phi0, e_e0, x)?;
            if r < -self.radicand_noise(phi0, e_e0, x)? {
                return Err(Error::RadicandNegative { phi: x, radicand: r });
            }
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for &x in self.neutral.iter().filter(|&&x| x > lo && x < hi) {
            let r = self.radicand(phi0, e_e0, x)?;
            if r <= 0.0 {
                return Err(Error::RadicandNegative { phi: x, radicand: r });
            }
        }
        Ok(())
    }

    /// Depth travelled while the potential moves from `a` to `b` along the
    /// branch leaving the surface at `phi0` (m).
    fn segment_depth(&self, phi0: f64, e_e0: f64, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        self.check_reachable(phi0, e_e0, a, b)?;
        let mut breaks = vec![a];
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut inner: Vec<f64> = self.neutral.iter().copied().filter(|&x| x > lo && x < hi).collect();
        if inner.is_empty() {
            inner.push(0.5 * (a + b));
        }
        if a > b {
            inner.sort_by(|x, y| y.total_cmp(x));
        } else {
            inner.sort_by(f64::total_cmp);
        }
        breaks.extend(inner);
        breaks.push(b);

        let inv_field = |phi: f64| -> f64 {
            match self.radicand(phi0, e_e0, phi) {
                Ok(r) if r > 0.0 => 1.0 / r.sqrt(),
                Ok(_) => f64::INFINITY,
                Err(_) => f64::NAN,
            }
        };
        let last = breaks.len() - 2;
        let mut total = 0.0;
        for (i, w) in breaks.windows(2).enumerate() {
            let (x0, x1) = (w[0], w[1]);
            let len = (x1 - x0).abs();
            let value = if i == 0 || i == last {
                // phi = end + (other - end) u^2 removes an inverse square
                // root at a turning point or at a zero starting field
                let (end, other) = if i == 0 { (x0, x1) } else { (x1, x0) };
                self.quad
                    .integrate(|u| 2.0 * len * u * inv_field(end + (other - end) * u * u), 0.0, 1.0)?
            } else {
                self.quad.integrate(|phi| inv_field(phi), x0.min(x1), x0.max(x1))?
            };
            if !value.is_finite() {
                return Err(Error::Quadrature {
                    estimate: value,
                    error: f64::INFINITY,
                });
            }
            total += value;
        }
        Ok(total)
    }

    /// Depth at which the profile leaving the surface at `phi0` with
    /// electrolyte-side field `e_e0` reaches `phi_target` (m).
    pub fn depth_of_potential(&self, phi0: f64, e_e0: f64, phi_target: f64) -> Result<f64> {
        self.segment_depth(phi0, e_e0, phi0, phi_target)
    }

    /// Inverse of [`Self::depth_of_potential`].
    pub fn potential_at_depth(&self, phi0: f64, e_e0: f64, depth: f64) -> Result<f64> {
        self.advance(phi0, e_e0, phi0, depth)
    }

    /// Potential reached after a further `dz` of depth, starting from the
    /// point of the profile at potential `from`.
    fn advance(&self, phi0: f64, e_e0: f64, from: f64, dz: f64) -> Result<f64> {
        if dz == 0.0 {
            return Ok(from);
        }
        if !(dz > 0.0) {
            return Err(Error::InvalidParameter {
                name: "depth",
                reason: format!("must be >= 0, got {dz}"),
            });
        }
        let dir = self.direction(phi0, e_e0);
        if dir == 0.0 {
            return Err(Error::Unreachable { phi: from });
        }
        let g = |phi: f64| match self.segment_depth(phi0, e_e0, from, phi) {
            Ok(z) => z - dz,
            Err(Error::RadicandNegative { .. }) | Err(Error::Unreachable { .. }) => f64::INFINITY,
            Err(_) => f64::NAN,
        };
        // first guess from the local field, then widen until the depth is passed
        let e = self.field_first_integral(phi0, e_e0, from)?.abs();
        let mut step = if e > 0.0 { 2.0 * e * dz } else { 1e-3 };
        let mut hi = from + dir * step;
        let mut g_hi = g(hi);
        let mut lo = from;
        let mut g_lo = -dz;
        while g_hi < 0.0 {
            lo = hi;
            g_lo = g_hi;
            step *= 2.0;
            hi = from + dir * step;
            g_hi = g(hi);
            if step > 1e3 {
                return Err(Error::NoBracket { lo: from, hi });
            }
        }
        if g_hi.is_nan() {
            // surface the underlying failure
            self.segment_depth(phi0, e_e0, from, hi)?;
        }
        let bracket = Bracket::from_values(lo, hi, g_lo, g_hi).ok_or(Error::NoBracket { lo, hi })?;
        find_root(
            g,
            bracket,
            RootOptions {
                x_tol: 1e-15,
                ..RootOptions::default()
            },
        )
    }

    /// `depth(phi_bd) - z_bulk` for a trial surface potential; `+inf` when
    /// the bulk potential is never reached.
    fn bulk_mismatch(&self, phi0: f64) -> Result<f64> {
        let e_e0 = self.electrolyte.interface_field(phi0 - self.electrolyte.phi_bulk)?;
        match self.depth_of_potential(phi0, e_e0, self.phi_bulk) {
            Ok(z) => Ok(z - self.z_bulk),
            Err(Error::RadicandNegative { .. }) | Err(Error::Unreachable { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }

    /// Finds the surface potential for which the profile reaches `phi_bd`
    /// at `z_bulk`, and samples the matched profile.
    pub fn solve(&self) -> Result<InterfaceSolution> {
        self.electrolyte.check_screening()?;
        let phi_be = self.electrolyte.phi_bulk;
        let phi_bd = self.phi_bulk;
        if phi_be == phi_bd && self.charge.density(phi_bd) == 0.0 {
            return self.finish(phi_bd, 0.0);
        }

        let mut failure = None;
        let mut g = |phi0: f64| match self.bulk_mismatch(phi0) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let seeded = Bracket::new(&mut g, phi_bd, phi_be);
        let bracket = match seeded {
            Some(b) => Some(b),
            None => {
                let lo = phi_bd.min(phi_be) - SEARCH_MARGIN;
                let hi = phi_bd.max(phi_be) + SEARCH_MARGIN;
                Bracket::scan(&mut g, lo, hi, SEARCH_CELLS)
            }
        };
        let bracket = match bracket {
            Some(b) => b,
            None => {
                if let Some(e) = failure {
                    return Err(e);
                }
                return Err(Error::NoBracket {
                    lo: phi_bd.min(phi_be) - SEARCH_MARGIN,
                    hi: phi_bd.max(phi_be) + SEARCH_MARGIN,
                });
            }
        };
        let phi0 = find_root(&mut g, bracket, RootOptions::default());
        if let Some(e) = failure {
            return Err(e);
        }
        let phi0 = phi0?;
        let e_e0 = self.electrolyte.interface_field(phi0 - phi_be)?;
        self.finish(phi0, e_e0)
    }

    fn finish(&self, phi0: f64, e_e0: f64) -> Result<InterfaceSolution> {
        let e_d0 = self.permittivity_ratio() * e_e0;
        let profile = if self.direction(phi0, e_e0) == 0.0 {
            self.sample_depths()
                .into_iter()
                .map(|depth| ProfileSample {
                    depth,
                    phi: phi0,
                    field: e_d0,
                })
                .collect()
        } else {
            self.sample_profile(phi0, e_e0)?
        };
        let end = profile.last().map_or(phi0, |s| s.phi);
        let residual = (end - self.phi_bulk).abs();
        Ok(InterfaceSolution {
            phi0,
            v0: phi0 - self.electrolyte.phi_bulk,
            e_e0,
            e_d0,
            profile,
            converged: residual < 1e-6,
            residual,
        })
    }

    /// Depth grid: the surface, 120 log-spaced points up to a tenth of the
    /// column and 100 uniform points below that.
    fn sample_depths(&self) -> Vec<f64> {
        let mut depths = vec![0.0];
        depths.extend(logspace(1e-4 * self.z_bulk, 0.1 * self.z_bulk, 120));
        depths.extend(linspace(0.1 * self.z_bulk, self.z_bulk, 101).into_iter().skip(1));
        depths
    }

    fn sample_profile(&self, phi0: f64, e_e0: f64) -> Result<Vec<ProfileSample>> {
        let mut out = Vec::new();
        let (mut phi, mut z) = (phi0, 0.0);
        for depth in self.sample_depths() {
            phi = self.advance(phi0, e_e0, phi, depth - z)?;
            z = depth;
            out.push(ProfileSample {
                depth,
                phi,
                field: self.field_first_integral(phi0, e_e0, phi)?,
            });
        }
        Ok(out)
    }

    /// Field at `depth` for a solved interface (V/m).
    pub fn field_at_nv(&self, sol: &InterfaceSolution, depth: f64) -> Result<f64> {
        if !(depth >= 0.0 && depth <= self.z_bulk) {
            return Err(Error::InvalidParameter {
                name: "depth",
                reason: format!("must lie in [0, {}], got {depth}", self.z_bulk),
            });
        }
        self.field_from_surface(sol.phi0, sol.e_e0, depth)
    }

    fn field_from_surface(&self, phi0: f64, e_e0: f64, depth: f64) -> Result<f64> {
        if self.direction(phi0, e_e0) == 0.0 {
            return Ok(self.permittivity_ratio() * e_e0);
        }
        let phi = self.potential_at_depth(phi0, e_e0, depth)?;
        self.field_first_integral(phi0, e_e0, phi)
    }

    /// `d E(depth) / d E_e0`, holding the electrolyte bulk potential fixed.
    ///
    /// A perturbed interface field sets a new surface potential through the
    /// Gouy-Chapman relation; the diamond profile is then continued from the
    /// surface. Central differences at steps `h` and `h/2` are combined by
    /// Richardson extrapolation.
    pub fn transfer_derivative(&self, sol: &InterfaceSolution, depth: f64) -> Result<f64> {
        let e0 = sol.e_e0;
        let h = TRANSFER_STEP * if e0 != 0.0 { e0.abs() } else { 1.0 };
        let f = |e: f64| {
            let phi0 = self.electrolyte.phi_bulk + self.electrolyte.invert_interface_field(e);
            self.field_from_surface(phi0, e, depth)
        };
        let central = |h: f64| -> Result<f64> { Ok((f(e0 + h)? - f(e0 - h)?) / (2.0 * h)) };
        let coarse = central(h)?;
        let fine = central(0.5 * h)?;
        if (coarse - fine).abs() > TRANSFER_TOLERANCE * fine.abs() {
            return Err(Error::DerivativeUnstable { coarse, fine });
        }
        Ok((4.0 * fine - coarse) / 3.0)
    }
}
