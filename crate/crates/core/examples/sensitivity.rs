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
use nvsense::electrolyte::ElectrolyteParams;
use nvsense::nv_spin::{sensitivity, NVParams, ReadoutParams};
use nvsense::numeric::logspace;
use nvsense::pipeline::{default_cb_grid, fit_sweep, run_sweep, sensitivity_curve, PowerLawFit, SweepSettings};

fn main() {
    let readout = ReadoutParams::default();
    println!("eta at c_b = 10 mol/m^3, t = 10 us, A = 39295, B = 0.417: {:.4}", sensitivity(39295.0, 0.417, 10.0, 10e-6, &readout));

    let outcomes = run_sweep(
        &ElectrolyteParams::default(),
        &DiamondParams::default(),
        &NVParams::default(),
        &SweepSettings::default(),
        &default_cb_grid(),
    );
    let model = fit_sweep(&outcomes).unwrap();
    let fixed = PowerLawFit {
        a: 39295.0,
        b: 0.417,
        rms_log_residual: 0.0,
        n_points: 0,
    };

    let times = logspace(0.3e-6, 30e-6, 12);
    for c_b in [0.1, 1.0, 10.0] {
        println!("\nc_b = {c_b} mol/m^3");
        let a = sensitivity_curve(&fixed, c_b, &times, &readout);
        let b = sensitivity_curve(&model, c_b, &times, &readout);
        for ((t, x), (_, y)) in a.iter().zip(&b) {
            println!("  t = {:>7.3} us   eta(fixed) = {:>11.4e}   eta(model fit) = {:>11.4e}", t * 1e6, x, y);
        }
    }
}
