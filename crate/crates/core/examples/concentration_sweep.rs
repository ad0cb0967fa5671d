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

use nvsense::diamond::DiamondParams;
use nvsense::electrolyte::{ElectrolyteParams, SpeciesSum};
use nvsense::nv_spin::{NVParams, T2Convention};
use nvsense::pipeline::{default_cb_grid, fit_sweep, run_sweep, sweep_csv, SweepSettings};

fn main() {
    let ep = ElectrolyteParams::default();
    let dp = DiamondParams::default();
    let nv = NVParams::default();
    let grid = default_cb_grid();

    let settings = SweepSettings::default();
    let outcomes = run_sweep(&ep, &dp, &nv, &settings, &grid);
    print!("{}", sweep_csv(&outcomes));

    println!();
    for species_sum in [SpeciesSum::Both, SpeciesSum::Single] {
        for convention in [T2Convention::TwoPi, T2Convention::Half] {
            let s = SweepSettings {
                species_sum,
                convention,
                ..settings
            };
            let fit = fit_sweep(&run_sweep(&ep, &dp, &nv, &s, &grid)).unwrap();
            println!(
                "{species_sum:?}/{convention:?}: 1/T2* = {:.4e} c_b^{:.4}  (rms log residual {:.1e})",
                fit.a, fit.b, fit.rms_log_residual
            );
        }
    }
}
