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

//! The command-line subcommands as library functions. Each writes its
//! files under an output directory together with `config.txt` (the
//! resolved configuration) and `manifest.json`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ChargeModel, RunConfig};
use crate::diamond::{Interface, InterfaceSolution, NeutralDielectric};
use crate::error::{Error, Result};
use crate::numeric::{linspace, logspace};
use crate::nv_spin::{self, nu_correlator_fn, phase_variance, ramsey_signal};
use crate::pipeline::{self, SweepSummary};
use crate::stochastic_oracle::{self, correlator_csv, default_lags, disagreement_fraction, CorrelatorEstimate};

/// Lags allowed outside `n_sigma` before `oracle` reports a failure.
pub const ORACLE_SIGMA: f64 = 3.0;
pub const ORACLE_MAX_FRACTION: f64 = 0.05;

/// Exit status for a library error: 2 for bad input, 3 for solver failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidParameter { .. } | Error::ScreeningRegime { .. } => 2,
        _ => 3,
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    /// Human-readable summary lines.
    pub lines: Vec<String>,
    /// Set when a verification command found a disagreement.
    pub failed: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

struct Output<'a> {
    dir: &'a Path,
    report: Report,
}

impl<'a> Output<'a> {
    fn new(dir: &'a Path) -> Self {
        Self {
            dir,
            report: Report::default(),
        }
    }

    fn file(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.report.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        self.file(name, &(text + "\n"))
    }

    fn line(&mut self, s: String) {
        self.report.lines.push(s);
    }

    fn finish(mut self, command: &str, cfg: &RunConfig) -> Result<Report> {
        self.file("config.txt", &cfg.to_text())?;
        #[derive(Serialize)]
        struct Manifest<'b> {
            command: &'b str,
            version: &'b str,
            seed: u64,
            config_sha256: String,
            config: Vec<String>,
            files: Vec<String>,
        }
        let files = self
            .report
            .files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        let manifest = Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.seed,
            config_sha256: cfg.sha256(),
            config: cfg.to_text().lines().map(String::from).collect(),
            files,
        };
        self.json("manifest.json", &manifest)?;
        Ok(self.report)
    }
}

fn require_doped(cfg: &RunConfig, command: &str) -> Result<()> {
    if cfg.charge_model == ChargeModel::Neutral {
        return Err(Error::Config(format!(
            "`{command}` needs the doped diamond; diamond.charge_model = neutral is only used by profile and correlator"
        )));
    }
    Ok(())
}

fn solve_interface(cfg: &RunConfig, c_b: f64) -> Result<InterfaceSolution> {
    let ep = cfg.electrolyte.with_concentration(c_b);
    match cfg.charge_model {
        ChargeModel::Doped => Interface::new(ep, &cfg.diamond)?.solve(),
        ChargeModel::Neutral => Interface::with_charge(ep, &cfg.diamond, NeutralDielectric)?.solve(),
    }
}

fn electrolyte_profile_csv(cfg: &RunConfig, sol: &InterfaceSolution) -> Result<String> {
    let ep = &cfg.electrolyte;
    let debye = ep.debye_length();
    let far = (60.0 * debye).min(ep.delta);
    let mut zs = vec![0.0];
    zs.extend(logspace(1e-3 * debye, far, 219));
    let mut out = String::from("z_m,phi_V,E_Vpm\n");
    for z in zs {
        let phi = ep.phi_bulk + ep.gouy_chapman_potential(sol.v0, z)?;
        let field = if sol.v0 == 0.0 { 0.0 } else { ep.gouy_chapman_field(sol.v0, z)? };
        let _ = writeln!(out, "{z:e},{phi:e},{field:e}");
    }
    Ok(out)
}

/// Potential and field on both sides of the interface at `electrolyte.c_b`.
///
/// `electrolyte_profile.csv` runs from the surface into the solution with
/// `E = -d phi/dz`; `diamond_profile.csv` runs into the diamond with
/// `E = d phi / d depth`, so both give the field along the same lab axis.
pub fn cmd_profile(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    let sol = solve_interface(cfg, cfg.electrolyte.c_b)?;
    let mut o = Output::new(out);
    o.file("electrolyte_profile.csv", &electrolyte_profile_csv(cfg, &sol)?)?;
    o.file("diamond_profile.csv", &sol.profile_csv())?;
    o.line(format!(
        "c_b = {} mol/m^3: phi0 = {:.6} V, V0 = {:.6} V, E_e0 = {:.4e} V/m, E_d0 = {:.4e} V/m, residual = {:.2e} V",
        cfg.electrolyte.c_b, sol.phi0, sol.v0, sol.e_e0, sol.e_d0, sol.residual
    ));
    o.finish("profile", cfg)
}

/// Concentration sweep, `sweep.csv`, `sweep_summary.json` and `stark.csv`.
pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    require_doped(cfg, "sweep")?;
    let settings = cfg.sweep.settings;
    let outcomes = pipeline::run_sweep(&cfg.electrolyte, &cfg.diamond, &cfg.nv, &settings, &cfg.sweep.grid());
    if outcomes.iter().all(|o| o.result.is_err()) {
        return Err(outcomes
            .into_iter()
            .find_map(|o| o.result.err())
            .unwrap_or(Error::InsufficientPoints { required: 1, got: 0 }));
    }
    let summary = SweepSummary::new(&outcomes, settings, cfg.sha256());
    let stark = pipeline::stark_sensing_table(
        &cfg.electrolyte,
        &cfg.diamond,
        &cfg.nv,
        settings.depth,
        &cfg.sweep.stark_pairs,
    )?;
    let mut o = Output::new(out);
    o.file("sweep.csv", &pipeline::sweep_csv(&outcomes))?;
    o.json("sweep_summary.json", &summary)?;
    o.file("stark.csv", &pipeline::stark_csv(&stark))?;
    o.line(format!(
        "{} points, {} failed",
        summary.n_points,
        summary.failed.len()
    ));
    match (&summary.fit, &summary.fit_error) {
        (Some(f), _) => o.line(format!("1/T2* = {:.6e} * c_b^{:.6}", f.a, f.b)),
        (None, Some(e)) => o.line(format!("fit failed: {e}")),
        _ => {}
    }
    for r in &stark {
        o.line(format!(
            "c_b {} -> {}: dE = {:.4e} V/m, shift = {:.4e} Hz (lab field: {:.4e} Hz)",
            r.c_b_lo, r.c_b_hi, r.delta_e, r.delta_shift, r.delta_shift_unprojected
        ));
    }
    o.finish("sweep", cfg)
}

/// Runs the configured sweep and fits `1/T2* = A c_b^B` (`fit.json`).
pub fn cmd_fit(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    require_doped(cfg, "fit")?;
    let outcomes = pipeline::run_sweep(
        &cfg.electrolyte,
        &cfg.diamond,
        &cfg.nv,
        &cfg.sweep.settings,
        &cfg.sweep.grid(),
    );
    let fit = pipeline::fit_sweep(&outcomes)?;
    let mut o = Output::new(out);
    o.json("fit.json", &fit)?;
    o.line(format!("A = {:.6e} Hz (mol/m^3)^-B", fit.a));
    o.line(format!("B = {:.6}", fit.b));
    o.line(format!(
        "rms log residual = {:.3e} over {} points",
        fit.rms_log_residual, fit.n_points
    ));
    o.finish("fit", cfg)
}

/// Surface field correlator against lag at `electrolyte.c_b` (`correlator.csv`).
pub fn cmd_correlator(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    let ep = cfg.electrolyte;
    let sol = solve_interface(cfg, ep.c_b)?;
    let plateau = ep.white_noise_variance(cfg.sweep.settings.species_sum);
    let c = &cfg.correlator;
    let mut csv = String::from("t_s,simplified_V2pm2,full_V2pm2,plateau_V2pm2\n");
    for t in logspace(c.t_min, c.t_max, c.points) {
        let simple = ep.field_correlator_simplified(t);
        let full = ep.field_correlator_full(sol.v0, t)?;
        let _ = writeln!(csv, "{t:e},{simple:e},{full:e},{plateau:e}");
    }
    let mut o = Output::new(out);
    o.file("correlator.csv", &csv)?;
    o.line(format!(
        "c_b = {} mol/m^3, V0 = {:.6} V, plateau = {:.4e} (V/m)^2",
        ep.c_b, sol.v0, plateau
    ));
    o.finish("correlator", cfg)
}

/// Ramsey signal, accumulated phase variance and readout statistics at `ramsey.c_b`.
pub fn cmd_ramsey(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    require_doped(cfg, "ramsey")?;
    let r = &cfg.ramsey;
    let settings = cfg.sweep.settings;
    let point = pipeline::evaluate_point(&cfg.electrolyte, &cfg.diamond, &cfg.nv, &settings, r.c_b)?;
    let t2 = 1.0 / point.inv_t2_star;
    let ep = cfg.electrolyte.with_concentration(r.c_b);
    let nu = nu_correlator_fn(&cfg.nv, point.transfer, |t| ep.field_correlator_simplified(t), None);
    let mut csv = String::from("tau_s,signal,phase_variance_rad2,mean_M,var_M\n");
    for tau in linspace(0.0, r.tau_max, r.points) {
        let p = ramsey_signal(tau, t2, r.psi);
        let var = phase_variance(&nu, tau)?;
        let _ = writeln!(
            csv,
            "{tau:e},{p:e},{var:e},{:e},{:e}",
            cfg.readout.mean_m(tau, t2, r.psi),
            cfg.readout.var_m(tau, t2, r.psi)
        );
    }
    let mut o = Output::new(out);
    o.file("ramsey.csv", &csv)?;
    o.line(format!(
        "c_b = {} mol/m^3: transfer = {:.4}, T2* = {:.4e} s",
        r.c_b, point.transfer, t2
    ));
    o.finish("ramsey", cfg)
}

/// Concentration sensitivity against interrogation time (`sensitivity.csv`).
pub fn cmd_sensitivity(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    let s = &cfg.sensitivity;
    let fit = if s.use_fit {
        require_doped(cfg, "sensitivity")?;
        let outcomes = pipeline::run_sweep(
            &cfg.electrolyte,
            &cfg.diamond,
            &cfg.nv,
            &cfg.sweep.settings,
            &cfg.sweep.grid(),
        );
        pipeline::fit_sweep(&outcomes)?
    } else {
        pipeline::PowerLawFit {
            a: s.a,
            b: s.b,
            rms_log_residual: 0.0,
            n_points: 0,
        }
    };
    let times = logspace(s.tau_min, s.tau_max, s.points);
    let curve = pipeline::sensitivity_curve(&fit, s.c_b, &times, &cfg.readout);
    let mut csv = String::from("tau_s,eta_molm3_per_rtHz\n");
    for (t, eta) in &curve {
        let _ = writeln!(csv, "{t:e},{eta:e}");
    }
    let eta = nv_spin::sensitivity(fit.a, fit.b, s.c_b, s.tau, &cfg.readout);
    let (best_t, best_eta) = curve
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((s.tau, eta));
    let mut o = Output::new(out);
    o.file("sensitivity.csv", &csv)?;
    o.line(format!("A = {:.6e}, B = {:.6}, c_b = {} mol/m^3", fit.a, fit.b, s.c_b));
    o.line(format!("eta({:e} s) = {:.6} mol m^-3 Hz^-1/2", s.tau, eta));
    o.line(format!("best on grid: eta({best_t:e} s) = {best_eta:.6}"));
    o.finish("sensitivity", cfg)
}

#[derive(Serialize)]
struct OracleRow {
    lag: f64,
    value: f64,
    stderr: f64,
    reference: f64,
    z: f64,
}

#[derive(Serialize)]
struct OracleSummary {
    seed: u64,
    n_sigma: f64,
    max_fraction: f64,
    density_fraction: f64,
    field_fraction: f64,
    density: Vec<OracleRow>,
    field: Vec<OracleRow>,
    /// Field correlator of a uniform layer without walls, at the same lags.
    field_open_reference: Vec<f64>,
}

fn rows(est: &[CorrelatorEstimate]) -> Vec<OracleRow> {
    est.iter()
        .map(|e| OracleRow {
            lag: e.lag,
            value: e.value,
            stderr: e.stderr,
            reference: e.reference,
            z: e.z_score(),
        })
        .collect()
}

/// Brownian-dynamics check of the density and field correlators against
/// their analytic values. The report fails when more than 5% of lags on
/// either correlator are over 3 standard errors away.
pub fn cmd_oracle(cfg: &RunConfig, out: &Path) -> Result<Report> {
    cfg.validate()?;
    let mc = &cfg.oracle.mc;
    let lags = if cfg.oracle.lags.is_empty() {
        default_lags(mc)
    } else {
        cfg.oracle.lags.clone()
    };
    let run = stochastic_oracle::simulate(mc, &lags)?;
    let density_fraction = disagreement_fraction(&run.density, ORACLE_SIGMA);
    let field_fraction = disagreement_fraction(&run.field, ORACLE_SIGMA);
    let summary = OracleSummary {
        seed: mc.seed,
        n_sigma: ORACLE_SIGMA,
        max_fraction: ORACLE_MAX_FRACTION,
        density_fraction,
        field_fraction,
        density: rows(&run.density),
        field: rows(&run.field),
        field_open_reference: run
            .field
            .iter()
            .map(|e| stochastic_oracle::open_reference(mc, e.lag))
            .collect(),
    };
    let mut o = Output::new(out);
    o.file("oracle_density.csv", &correlator_csv(&run.density))?;
    o.file("oracle_field.csv", &correlator_csv(&run.field))?;
    o.json("oracle_summary.json", &summary)?;
    for (name, est) in [("density", &run.density), ("field", &run.field)] {
        for e in est.iter() {
            o.line(format!(
                "{name} lag {:.3e} s: {:.4e} +- {:.2e} (reference {:.4e}, z = {:.2})",
                e.lag,
                e.value,
                e.stderr,
                e.reference,
                e.z_score()
            ));
        }
    }
    o.line(format!(
        "lags beyond {ORACLE_SIGMA} sigma: density {:.1}%, field {:.1}%",
        100.0 * density_fraction,
        100.0 * field_fraction
    ));
    o.report.failed = density_fraction > ORACLE_MAX_FRACTION || field_fraction > ORACLE_MAX_FRACTION;
    if o.report.failed {
        o.line("oracle: FAIL".into());
    } else {
        o.line("oracle: ok".into());
    }
    o.finish("oracle", cfg)
}

/// Subcommand names accepted by [`run_command`].
pub const COMMANDS: [&str; 7] = ["profile", "sweep", "fit", "correlator", "ramsey", "sensitivity", "oracle"];

pub fn run_command(name: &str, cfg: &RunConfig, out: &Path) -> Result<Report> {
    match name {
        "profile" => cmd_profile(cfg, out),
        "sweep" => cmd_sweep(cfg, out),
        "fit" => cmd_fit(cfg, out),
        "correlator" => cmd_correlator(cfg, out),
        "ramsey" => cmd_ramsey(cfg, out),
        "sensitivity" => cmd_sensitivity(cfg, out),
        "oracle" => cmd_oracle(cfg, out),
        _ => Err(Error::Config(format!("unknown command `{name}`"))),
    }
}
