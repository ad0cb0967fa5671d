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

//! Run configuration: flat `section.key = value` text, one entry per line.
//!
//! ```text
//! # comments and blank lines are ignored
//! electrolyte.c_b = 10
//! sweep.t2_convention = half
//! ```
//!
//! Every key has a default; unknown keys are rejected. [`RunConfig::to_text`]
//! writes the full resolved configuration back in the same format.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::constants::VACUUM_PERMITTIVITY;
use crate::diamond::{DiamondParams, ExtraDonor};
use crate::electrolyte::{ElectrolyteParams, SpeciesSum};
use crate::error::{Error, Result};
use crate::nv_spin::{NVParams, ReadoutParams, T2Convention};
use crate::pipeline::{default_cb_grid, SweepSettings};
use crate::stochastic_oracle::McConfig;

/// Space charge used for the diamond column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChargeModel {
    #[default]
    Doped,
    /// Charge-free dielectric.
    Neutral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub cb_min: f64,
    pub cb_max: f64,
    pub cb_points: usize,
    /// Explicit grid; overrides the log-spaced one when non-empty.
    pub cb_list: Vec<f64>,
    pub settings: SweepSettings,
    pub stark_pairs: Vec<(f64, f64)>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let grid = default_cb_grid();
        Self {
            cb_min: grid[0],
            cb_max: grid[grid.len() - 1],
            cb_points: grid.len(),
            cb_list: Vec::new(),
            settings: SweepSettings::default(),
            stark_pairs: vec![(0.001, 0.01), (0.01, 0.1), (0.1, 1.0), (1.0, 10.0)],
        }
    }
}

impl SweepConfig {
    pub fn grid(&self) -> Vec<f64> {
        if self.cb_list.is_empty() {
            crate::numeric::logspace(self.cb_min, self.cb_max, self.cb_points)
        } else {
            self.cb_list.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamseyConfig {
    pub c_b: f64,
    pub psi: f64,
    pub tau_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityConfig {
    pub a: f64,
    pub b: f64,
    /// Use the fit of the configured sweep instead of `a`, `b`.
    pub use_fit: bool,
    pub c_b: f64,
    pub tau: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub mc: McConfig,
    /// Lags (s); empty means [`crate::stochastic_oracle::default_lags`].
    pub lags: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub electrolyte: ElectrolyteParams,
    pub diamond: DiamondParams,
    pub charge_model: ChargeModel,
    pub nv: NVParams,
    pub readout: ReadoutParams,
    pub sweep: SweepConfig,
    pub correlator: CorrelatorConfig,
    pub ramsey: RamseyConfig,
    pub sensitivity: SensitivityConfig,
    pub oracle: OracleConfig,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            electrolyte: ElectrolyteParams::default(),
            diamond: DiamondParams::default(),
            charge_model: ChargeModel::Doped,
            nv: NVParams::default(),
            readout: ReadoutParams::default(),
            sweep: SweepConfig::default(),
            correlator: CorrelatorConfig {
                t_min: 1e-6,
                t_max: 1e3,
                points: 46,
            },
            ramsey: RamseyConfig {
                c_b: 10.0,
                psi: 0.0,
                tau_max: 30e-6,
                points: 301,
            },
            sensitivity: SensitivityConfig {
                a: 39295.0,
                b: 0.417,
                use_fit: false,
                c_b: 10.0,
                tau: 10e-6,
                tau_min: 1e-6,
                tau_max: 50e-6,
                points: 50,
            },
            oracle: OracleConfig {
                mc: McConfig::default(),
                lags: Vec::new(),
            },
            seed: McConfig::default().seed,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Config(format!("`{key}`: expected a number, got `{v}`")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::Config(format!("`{key}`: expected a non-negative integer, got `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("`{key}`: expected true or false, got `{v}`"))),
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_f64(key, s.trim())).collect()
}

fn parse_pairs(key: &str, v: &str) -> Result<Vec<(f64, f64)>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("`{key}`: expected lo:hi pairs, got `{p}`")))?;
            Ok((parse_f64(key, a.trim())?, parse_f64(key, b.trim())?))
        })
        .collect()
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Defaults overridden by the file at `path`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got `{raw}`", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Applies one `KEY=VALUE` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected KEY=VALUE, got `{assignment}`")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let f = || parse_f64(key, v);
        let u = || parse_usize(key, v);
        let e = &mut self.electrolyte;
        let d = &mut self.diamond;
        let nv = &mut self.nv;
        let mc = &mut self.oracle.mc;
        match key {
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| Error::Config(format!("`seed`: expected an integer, got `{v}`")))?;
                mc.seed = self.seed;
            }
            "temperature" => {
                let t = f()?;
                e.temperature = t;
                d.temperature = t;
            }

            "electrolyte.c_b" => e.c_b = f()?,
            "electrolyte.valence" => {
                e.valence = u()? as u32;
            }
            "electrolyte.d_plus" => e.d_plus = f()?,
            "electrolyte.d_minus" => e.d_minus = f()?,
            "electrolyte.eps_r" => e.eps = f()? * VACUUM_PERMITTIVITY,
            "electrolyte.delta" => e.delta = f()?,
            "electrolyte.area" => e.area = f()?,
            "electrolyte.phi_bulk" => e.phi_bulk = f()?,

            "diamond.eps_r" => d.eps = f()? * VACUUM_PERMITTIVITY,
            "diamond.band_gap" => d.band_gap = f()?,
            "diamond.m_eff_n" => d.m_eff_n = f()?,
            "diamond.m_eff_p" => d.m_eff_p = f()?,
            "diamond.areal_density" => d.areal_density = f()?,
            "diamond.implant_depth" => d.implant_depth = f()?,
            "diamond.frac_ns" => d.frac_ns = f()?,
            "diamond.frac_nv" => d.frac_nv = f()?,
            "diamond.donor_depth" => d.donor_depth = f()?,
            "diamond.acceptor_level" => d.acceptor_level = f()?,
            "diamond.extra_donor_fraction" => {
                let x = f()?;
                d.extra_donor = if x == 0.0 {
                    None
                } else {
                    Some(ExtraDonor {
                        fraction: x,
                        depth_below_ec: d.extra_donor.map_or(2.75, |o| o.depth_below_ec),
                    })
                };
            }
            "diamond.extra_donor_depth" => {
                let x = f()?;
                match &mut d.extra_donor {
                    Some(o) => o.depth_below_ec = x,
                    None => {
                        return Err(Error::Config(
                            "set diamond.extra_donor_fraction before diamond.extra_donor_depth".into(),
                        ))
                    }
                }
            }
            "diamond.z_bulk" => d.z_bulk = f()?,
            "diamond.phi_bulk" => d.phi_bulk = f()?,
            "diamond.charge_model" => {
                self.charge_model = match v {
                    "doped" => ChargeModel::Doped,
                    "neutral" => ChargeModel::Neutral,
                    _ => return Err(Error::Config(format!("`{key}`: expected doped or neutral, got `{v}`"))),
                }
            }

            "nv.zfs" => nv.zfs = f()?,
            "nv.gamma_e" => nv.gamma_e = f()?,
            "nv.d_par" => nv.d_par = f()?,
            "nv.d_perp" => nv.d_perp = f()?,
            "nv.d_perp_prime" => nv.d_perp_prime = f()?,
            "nv.tilt" => nv.tilt = f()?,
            "nv.b_z" => nv.b_z = f()?,
            "nv.phi_b" => nv.phi_b = f()?,

            "readout.alpha" => self.readout = ReadoutParams::new(f()?),
            "readout.beta" => self.readout.beta = f()?,

            "sweep.cb_min" => self.sweep.cb_min = f()?,
            "sweep.cb_max" => self.sweep.cb_max = f()?,
            "sweep.cb_points" => self.sweep.cb_points = u()?,
            "sweep.cb_list" => self.sweep.cb_list = parse_list(key, v)?,
            "sweep.depth" => self.sweep.settings.depth = f()?,
            "sweep.species_sum" => {
                self.sweep.settings.species_sum = match v {
                    "both" => SpeciesSum::Both,
                    "single" => SpeciesSum::Single,
                    _ => return Err(Error::Config(format!("`{key}`: expected both or single, got `{v}`"))),
                }
            }
            "sweep.t2_convention" => self.sweep.settings.convention = v.parse::<T2Convention>()?,
            "sweep.stark_pairs" => self.sweep.stark_pairs = parse_pairs(key, v)?,

            "correlator.t_min" => self.correlator.t_min = f()?,
            "correlator.t_max" => self.correlator.t_max = f()?,
            "correlator.points" => self.correlator.points = u()?,

            "ramsey.c_b" => self.ramsey.c_b = f()?,
            "ramsey.psi" => self.ramsey.psi = f()?,
            "ramsey.tau_max" => self.ramsey.tau_max = f()?,
            "ramsey.points" => self.ramsey.points = u()?,

            "sensitivity.a" => self.sensitivity.a = f()?,
            "sensitivity.b" => self.sensitivity.b = f()?,
            "sensitivity.use_fit" => self.sensitivity.use_fit = parse_bool(key, v)?,
            "sensitivity.c_b" => self.sensitivity.c_b = f()?,
            "sensitivity.tau" => self.sensitivity.tau = f()?,
            "sensitivity.tau_min" => self.sensitivity.tau_min = f()?,
            "sensitivity.tau_max" => self.sensitivity.tau_max = f()?,
            "sensitivity.points" => self.sensitivity.points = u()?,

            "mc.n_particles" => mc.n_particles = u()?,
            "mc.box_length" => mc.box_length = f()?,
            "mc.area" => mc.area = f()?,
            "mc.diffusion" => mc.diffusion = f()?,
            "mc.dt" => mc.dt = f()?,
            "mc.n_steps" => mc.n_steps = u()?,
            "mc.n_bins" => mc.n_bins = u()?,
            "mc.valence" => mc.valence = u()? as u32,
            "mc.eps_r" => mc.eps = f()? * VACUUM_PERMITTIVITY,
            "mc.window_fraction" => mc.window_fraction = f()?,
            "mc.probe_bin_a" => mc.probe_bins[0] = u()?,
            "mc.probe_bin_b" => mc.probe_bins[1] = u()?,
            "mc.n_batches" => mc.n_batches = u()?,
            "mc.lags" => self.oracle.lags = parse_list(key, v)?,

            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Checks every parameter set before any computation starts.
    pub fn validate(&self) -> Result<()> {
        self.electrolyte.validate()?;
        self.diamond.validate()?;
        self.nv.validate()?;
        self.readout.validate()?;
        self.oracle.mc.validate()?;
        if (self.electrolyte.temperature - self.diamond.temperature).abs() > 0.0 {
            return Err(Error::Config(
                "electrolyte and diamond temperatures differ; set `temperature`".into(),
            ));
        }
        let s = &self.sweep;
        if s.cb_list.is_empty() && !(s.cb_min > 0.0 && s.cb_max >= s.cb_min && s.cb_points > 0) {
            return Err(Error::Config("sweep grid needs 0 < cb_min <= cb_max and cb_points > 0".into()));
        }
        if s.cb_list.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::Config("sweep.cb_list entries must be > 0".into()));
        }
        if !(s.settings.depth > 0.0 && s.settings.depth < self.diamond.z_bulk) {
            return Err(Error::Config("sweep.depth must lie in (0, diamond.z_bulk)".into()));
        }
        let c = &self.correlator;
        if !(c.t_min > 0.0 && c.t_max >= c.t_min && c.points > 0) {
            return Err(Error::Config("correlator grid needs 0 < t_min <= t_max and points > 0".into()));
        }
        let r = &self.ramsey;
        if !(r.c_b > 0.0 && r.tau_max > 0.0 && r.points > 1) {
            return Err(Error::Config("ramsey needs c_b > 0, tau_max > 0 and points > 1".into()));
        }
        let q = &self.sensitivity;
        if !(q.a > 0.0 && q.b > 0.0 && q.c_b > 0.0 && q.tau > 0.0 && q.tau_min > 0.0 && q.tau_max >= q.tau_min) {
            return Err(Error::Config("sensitivity parameters must be positive with tau_min <= tau_max".into()));
        }
        Ok(())
    }

    /// Full resolved configuration in the input format. Parsing it back
    /// gives the same configuration.
    pub fn to_text(&self) -> String {
        let e = &self.electrolyte;
        let d = &self.diamond;
        let nv = &self.nv;
        let mc = &self.oracle.mc;
        let s = &self.sweep;
        let mut entries: Vec<(&str, String)> = vec![
            ("seed", self.seed.to_string()),
            ("temperature", e.temperature.to_string()),
            ("electrolyte.c_b", e.c_b.to_string()),
            ("electrolyte.valence", e.valence.to_string()),
            ("electrolyte.d_plus", e.d_plus.to_string()),
            ("electrolyte.d_minus", e.d_minus.to_string()),
            ("electrolyte.eps_r", (e.eps / VACUUM_PERMITTIVITY).to_string()),
            ("electrolyte.delta", e.delta.to_string()),
            ("electrolyte.area", e.area.to_string()),
            ("electrolyte.phi_bulk", e.phi_bulk.to_string()),
            ("diamond.eps_r", (d.eps / VACUUM_PERMITTIVITY).to_string()),
            ("diamond.band_gap", d.band_gap.to_string()),
            ("diamond.m_eff_n", d.m_eff_n.to_string()),
            ("diamond.m_eff_p", d.m_eff_p.to_string()),
            ("diamond.areal_density", d.areal_density.to_string()),
            ("diamond.implant_depth", d.implant_depth.to_string()),
            ("diamond.frac_ns", d.frac_ns.to_string()),
            ("diamond.frac_nv", d.frac_nv.to_string()),
            ("diamond.donor_depth", d.donor_depth.to_string()),
            ("diamond.acceptor_level", d.acceptor_level.to_string()),
            (
                "diamond.extra_donor_fraction",
                d.extra_donor.map_or(0.0, |x| x.fraction).to_string(),
            ),
        ];
        if let Some(x) = d.extra_donor {
            entries.push(("diamond.extra_donor_depth", x.depth_below_ec.to_string()));
        }
        entries.extend([
            ("diamond.z_bulk", d.z_bulk.to_string()),
            ("diamond.phi_bulk", d.phi_bulk.to_string()),
            (
                "diamond.charge_model",
                match self.charge_model {
                    ChargeModel::Doped => "doped",
                    ChargeModel::Neutral => "neutral",
                }
                .to_string(),
            ),
            ("nv.zfs", nv.zfs.to_string()),
            ("nv.gamma_e", nv.gamma_e.to_string()),
            ("nv.d_par", nv.d_par.to_string()),
            ("nv.d_perp", nv.d_perp.to_string()),
            ("nv.d_perp_prime", nv.d_perp_prime.to_string()),
            ("nv.tilt", nv.tilt.to_string()),
            ("nv.b_z", nv.b_z.to_string()),
            ("nv.phi_b", nv.phi_b.to_string()),
            ("readout.alpha", self.readout.alpha.to_string()),
            ("readout.beta", self.readout.beta.to_string()),
            ("sweep.cb_min", s.cb_min.to_string()),
            ("sweep.cb_max", s.cb_max.to_string()),
            ("sweep.cb_points", s.cb_points.to_string()),
            ("sweep.cb_list", join(&s.cb_list)),
            ("sweep.depth", s.settings.depth.to_string()),
            (
                "sweep.species_sum",
                match s.settings.species_sum {
                    SpeciesSum::Both => "both",
                    SpeciesSum::Single => "single",
                }
                .to_string(),
            ),
            (
                "sweep.t2_convention",
                match s.settings.convention {
                    T2Convention::TwoPi => "two_pi",
                    T2Convention::Half => "half",
                }
                .to_string(),
            ),
            (
                "sweep.stark_pairs",
                join(s.stark_pairs.iter().map(|(a, b)| format!("{a}:{b}"))),
            ),
            ("correlator.t_min", self.correlator.t_min.to_string()),
            ("correlator.t_max", self.correlator.t_max.to_string()),
            ("correlator.points", self.correlator.points.to_string()),
            ("ramsey.c_b", self.ramsey.c_b.to_string()),
            ("ramsey.psi", self.ramsey.psi.to_string()),
            ("ramsey.tau_max", self.ramsey.tau_max.to_string()),
            ("ramsey.points", self.ramsey.points.to_string()),
            ("sensitivity.a", self.sensitivity.a.to_string()),
            ("sensitivity.b", self.sensitivity.b.to_string()),
            ("sensitivity.use_fit", self.sensitivity.use_fit.to_string()),
            ("sensitivity.c_b", self.sensitivity.c_b.to_string()),
            ("sensitivity.tau", self.sensitivity.tau.to_string()),
            ("sensitivity.tau_min", self.sensitivity.tau_min.to_string()),
            ("sensitivity.tau_max", self.sensitivity.tau_max.to_string()),
            ("sensitivity.points", self.sensitivity.points.to_string()),
            ("mc.n_particles", mc.n_particles.to_string()),
            ("mc.box_length", mc.box_length.to_string()),
            ("mc.area", mc.area.to_string()),
            ("mc.diffusion", mc.diffusion.to_string()),
            ("mc.dt", mc.dt.to_string()),
            ("mc.n_steps", mc.n_steps.to_string()),
            ("mc.n_bins", mc.n_bins.to_string()),
            ("mc.valence", mc.valence.to_string()),
            ("mc.eps_r", (mc.eps / VACUUM_PERMITTIVITY).to_string()),
            ("mc.window_fraction", mc.window_fraction.to_string()),
            ("mc.probe_bin_a", mc.probe_bins[0].to_string()),
            ("mc.probe_bin_b", mc.probe_bins[1].to_string()),
            ("mc.n_batches", mc.n_batches.to_string()),
            ("mc.lags", join(&self.oracle.lags)),
        ]);
        let mut out = String::new();
        for (k, v) in entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    /// SHA-256 of [`Self::to_text`], hex encoded.
    pub fn sha256(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}
