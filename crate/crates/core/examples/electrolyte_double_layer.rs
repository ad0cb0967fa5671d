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

use nvsense::electrolyte::{ElectrolyteParams, Species};

fn main() {
    let v0 = -0.05;
    for c_b in [0.1, 1.0, 10.0, 100.0] {
        let ep = ElectrolyteParams::default().with_concentration(c_b);
        let debye = ep.debye_length();
        println!("c_b = {c_b} mol/m^3, Debye length = {:.3} nm", debye * 1e9);
        println!("  {:>10} {:>12} {:>14} {:>12} {:>12}", "z/nm", "phi-phi_b/V", "E/(V/m)", "c+/c_b", "c-/c_b");
        for m in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let z = m * debye;
            let phi = ep.gouy_chapman_potential(v0, z).unwrap();
            let e = ep.gouy_chapman_field(v0, z).unwrap();
            let cp = ep.concentration_profile(v0, z, Species::Cation).unwrap() / c_b;
            let cm = ep.concentration_profile(v0, z, Species::Anion).unwrap() / c_b;
            println!("  {:>10.3} {:>12.5} {:>14.4e} {:>12.4} {:>12.4}", z * 1e9, phi, e, cp, cm);
        }
        // small steps reduce to Debye-Hueckel
        let lin = ep.linearized_field(1e-4, 0.0);
        let exact = ep.interface_field(1e-4).unwrap();
        println!("  E(0) at 0.1 mV: exact {exact:.6e}, linear {lin:.6e}\n");
    }

    let ep = ElectrolyteParams::default();
    println!("surface field correlator at c_b = 1 mol/m^3");
    for t in [1e-6, 1e-3, 1.0, 10.0, 100.0] {
        println!("  t = {t:>8.0e} s  <dE dE> = {:.5e} (V/m)^2", ep.field_correlator_simplified(t));
    }
}
