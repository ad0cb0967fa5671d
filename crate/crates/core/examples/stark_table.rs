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
use nvsense::nv_spin::NVParams;
use nvsense::pipeline::stark_sensing_table;

fn main() {
    let pairs = [(0.001, 0.01), (0.01, 0.1), (0.1, 1.0), (1.0, 10.0), (10.0, 100.0)];
    let nv = NVParams::default();
    for depth in [5e-9, 10e-9, 20e-9] {
        let rows = stark_sensing_table(&ElectrolyteParams::default(), &DiamondParams::default(), &nv, depth, &pairs)
            .expect("stark table");
        println!("NV at {:.0} nm", depth * 1e9);
        for r in rows {
            println!(
                "  {:>6} -> {:<6} mol/m^3: dE = {:>10.4e} V/m  shift {:>8.2} kHz (lab field {:>8.2} kHz)",
                r.c_b_lo,
                r.c_b_hi,
                r.delta_e,
                r.delta_shift * 1e-3,
                r.delta_shift_unprojected * 1e-3
            );
        }
    }
}
