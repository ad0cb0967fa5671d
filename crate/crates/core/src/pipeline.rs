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

//! Concentration sweeps: interface solve, transfer to the NV depth, noise
//! plateau and `1/T2*`, followed by the power-law fit and the Stark table.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diamond::{DiamondParams, Interface};
use crate::electrolyte::{ElectrolyteParams, SpeciesSum};
use crate::error::{Error, Result};
use crate::numeric::logspace;
use crate::nv_spin::{self, NVParams, ReadoutParams, T2Convention};

pub const SWEEP_CSV_HEADER: &str = "c_b,phi0_V,E_e0_Vpm,E_nv_Vpm,transfer,plateau_V2pm2,inv_T2star_Hz,error";

/// 25 log-spaced concentrations in `[1e-2, 1e3]` mol/m^3.
pub fn default_cb_grid() -> Vec<f64> {
    logspace(1e-2, 1e3, 25)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    /// NV depth (m).
    pub depth: f64,
    pub species_sum: SpeciesSum,
    pub convention: T2Convention,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            depth: 10e-9,
            species_sum: SpeciesSum::Both,
            convention: T2Convention::TwoPi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub c_b: f64,
    pub phi0: f64,
    pub e_e0: f64,
    pub e_nv: f64,
    pub transfer: f64,
    /// White-noise plateau of the surface field correlator ((V/m)^2).
    pub plateau: f64,
    pub inv_t2_star: f64,
}

/// A sweep entry; failed points keep their concentration and the error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub c_b: f64,
    pub result: std::result::Result<SweepPoint, Error>,
}

pub fn evaluate_point(
    template: &ElectrolyteParams,
    diamond: &DiamondParams,
    nv: &NVParams,
    settings: &SweepSettings,
    c_b: f64,
) -> Result<SweepPoint> {
    let ep = template.with_concentration(c_b);
    let interface = Interface::new(ep, diamond)?;
    let sol = interface.solve()?;
    let e_nv = interface.field_at_nv(&sol, settings.depth)?;
    let transfer = interface.transfer_derivative(&sol, settings.depth)?;
    let plateau = ep.white_noise_variance(settings.species_sum);
    let c0 = nv.nu_fluctuation_correlator(transfer, plateau);
    Ok(SweepPoint {
        c_b,
        phi0: sol.phi0,
        e_e0: sol.e_e0,
        e_nv,
        transfer,
        plateau,
        inv_t2_star: nv_spin::inv_t2_star(c0, settings.convention),
    })
}

/// Evaluates every concentration in parallel; results keep the grid order.
pub fn run_sweep(
    template: &ElectrolyteParams,
    diamond: &DiamondParams,
    nv: &NVParams,
    settings: &SweepSettings,
    grid: &[f64],
) -> Vec<SweepOutcome> {
    grid.par_iter()
        .map(|&c_b| SweepOutcome {
            c_b,
            result: evaluate_point(template, diamond, nv, settings, c_b),
        })
        .collect()
}

pub fn sweep_csv(outcomes: &[SweepOutcome]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for o in outcomes {
        match &o.result {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "{:e},{:e},{:e},{:e},{:e},{:e},{:e},",
                    p.c_b, p.phi0, p.e_e0, p.e_nv, p.transfer, p.plateau, p.inv_t2_star
                );
            }
            Err(e) => {
                let msg = e.to_string().replace([',', '\n'], ";");
                let _ = writeln!(out, "{:e},,,,,,,{msg}", o.c_b);
            }
        }
    }
    out
}

/// `1/T2* = a c_b^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    pub rms_log_residual: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn eval(&self, c_b: f64) -> f64 {
        self.a * c_b.powf(self.b)
    }
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    const MIN_POINTS: usize = 5;
    if points.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints {
            required: MIN_POINTS,
            got: points.len(),
        });
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("power-law fit needs positive data, got ({x}, {y})"),
        });
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: "all concentrations are equal".into(),
        });
    }
    let b = sxy / sxx;
    let ln_a = my - b * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - ln_a - b * x).powi(2)).sum();
    Ok(PowerLawFit {
        a: ln_a.exp(),
        b,
        rms_log_residual: (ss / n).sqrt(),
        n_points: points.len(),
    })
}

/// Fits the successful points of a sweep.
pub fn fit_sweep(outcomes: &[SweepOutcome]) -> Result<PowerLawFit> {
    let points: Vec<(f64, f64)> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok())
        .map(|p| (p.c_b, p.inv_t2_star))
        .collect();
    fit_power_law(&points)
}

/// Sweep provenance and fit, serialized as the JSON summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub fit: Option<PowerLawFit>,
    pub fit_error: Option<String>,
    pub n_points: usize,
    pub failed: Vec<(f64, String)>,
    pub settings: SweepSettings,
    pub config_sha256: String,
    pub version: String,
}

impl SweepSummary {
    pub fn new(outcomes: &[SweepOutcome], settings: SweepSettings, config_sha256: String) -> Self {
        let fit = fit_sweep(outcomes);
        Self {
            fit_error: fit.as_ref().err().map(ToString::to_string),
            fit: fit.ok(),
            n_points: outcomes.len(),
            failed: outcomes
                .iter()
                .filter_map(|o| o.result.as_ref().err().map(|e| (o.c_b, e.to_string())))
                .collect(),
            settings,
            config_sha256,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarkRow {
    pub c_b_lo: f64,
    pub c_b_hi: f64,
    /// `|E_nv(c_b_hi)| - |E_nv(c_b_lo)|` (V/m).
    pub delta_e: f64,
    /// Change of the `|->` Stark shift with the NV-frame projection (Hz).
    pub delta_shift: f64,
    /// Same with the lab field used directly (Hz).
    pub delta_shift_unprojected: f64,
}

pub const STARK_CSV_HEADER: &str = "c_b_lo,c_b_hi,delta_E_Vpm,delta_shift_Hz,delta_shift_unprojected_Hz";

/// Field change at the NV for each concentration pair and the Stark shift
/// it produces in the basis set by `nv.phi_b`.
pub fn stark_sensing_table(
    template: &ElectrolyteParams,
    diamond: &DiamondParams,
    nv: &NVParams,
    depth: f64,
    pairs: &[(f64, f64)],
) -> Result<Vec<StarkRow>> {
    let field = |c_b: f64| -> Result<f64> {
        let it = Interface::new(template.with_concentration(c_b), diamond)?;
        let sol = it.solve()?;
        Ok(it.field_at_nv(&sol, depth)?.abs())
    };
    pairs
        .par_iter()
        .map(|&(lo, hi)| {
            let delta_e = if lo == hi { 0.0 } else { field(hi)? - field(lo)? };
            Ok(StarkRow {
                c_b_lo: lo,
                c_b_hi: hi,
                delta_e,
                delta_shift: nv.stark_shift(delta_e, nv.phi_b),
                delta_shift_unprojected: nv.stark_shift_unprojected(delta_e, nv.phi_b),
            })
        })
        .collect()
}

pub fn stark_csv(rows: &[StarkRow]) -> String {
    let mut out = String::from(STARK_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e}",
            r.c_b_lo, r.c_b_hi, r.delta_e, r.delta_shift, r.delta_shift_unprojected
        );
    }
    out
}

/// Sensitivity against interrogation time for a fitted power law (mol m^-3 Hz^-1/2).
pub fn sensitivity_curve(fit: &PowerLawFit, c_b: f64, times: &[f64], readout: &ReadoutParams) -> Vec<(f64, f64)> {
    times
        .iter()
        .map(|&t| (t, nv_spin::sensitivity(fit.a, fit.b, c_b, t, readout)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = logspace(0.1, 100.0, 10).into_iter().map(|x| (x, 100.0 * x.sqrt())).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.a - 100.0).abs() < 1e-10 * 100.0);
        assert!((fit.b - 0.5).abs() < 1e-10);
        assert!(fit.rms_log_residual < 1e-12);
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, 7.0 * y)).collect();
        let g = fit_power_law(&scaled).unwrap();
        assert!((g.a / fit.a - 7.0).abs() < 1e-10);
        assert!((g.b - fit.b).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_short_or_bad_input() {
        assert!(matches!(
            fit_power_law(&[(1.0, 1.0); 4]),
            Err(Error::InsufficientPoints { required: 5, got: 4 })
        ));
        let mut pts = vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0), (5.0, 0.0)];
        assert!(fit_power_law(&pts).is_err());
        pts[4] = (5.0, 5.0);
        assert!(fit_power_law(&pts).is_ok());
    }

    #[test]
    fn failed_points_are_reported_not_fitted() {
        let ok = |c: f64| SweepOutcome {
            c_b: c,
            result: Ok(SweepPoint {
                c_b: c,
                phi0: 1.4,
                e_e0: -1.0,
                e_nv: -2.0,
                transfer: 13.0,
                plateau: 1.0,
                inv_t2_star: 3.0 * c.powf(0.4),
            }),
        };
        let mut outcomes: Vec<SweepOutcome> = [1.0, 2.0, 4.0, 8.0, 16.0].into_iter().map(ok).collect();
        outcomes.insert(
            2,
            SweepOutcome {
                c_b: 3.0,
                result: Err(Error::NoBracket { lo: 0.0, hi: 1.0 }),
            },
        );
        let fit = fit_sweep(&outcomes).unwrap();
        assert_eq!(fit.n_points, 5);
        assert!((fit.b - 0.4).abs() < 1e-12);
        let csv = sweep_csv(&outcomes);
        let row = csv.lines().nth(3).unwrap();
        assert!(row.starts_with("3e0,,,,,,,no sign change"), "{row}");
        let summary = SweepSummary::new(&outcomes, SweepSettings::default(), "abc".into());
        assert_eq!(summary.failed.len(), 1);
        let json = serde_json::to_string(&summary).unwrap();
        assert!(json.contains("\"config_sha256\":\"abc\""));
    }

    #[test]
    fn single_point_sweep() {
        let out = run_sweep(
            &ElectrolyteParams::default(),
            &DiamondParams::default(),
            &NVParams::default(),
            &SweepSettings::default(),
            &[1.0],
        );
        let p = out[0].result.as_ref().unwrap();
        assert!(p.inv_t2_star > 0.0 && p.transfer > 0.0);
        assert!((p.plateau - ElectrolyteParams::default().white_noise_variance(SpeciesSum::Both)).abs() == 0.0);
    }

    #[test]
    fn identical_stark_pair_is_zero() {
        let rows = stark_sensing_table(
            &ElectrolyteParams::default(),
            &DiamondParams::default(),
            &NVParams::default(),
            10e-9,
            &[(0.05, 0.05)],
        )
        .unwrap();
        assert_eq!((rows[0].delta_e, rows[0].delta_shift), (0.0, 0.0));
    }
}
