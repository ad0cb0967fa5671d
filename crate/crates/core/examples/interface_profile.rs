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

//! Solves the electrolyte/diamond boundary value problem and prints the
//! diamond-side profile. Pass a concentration (mol/m^3) as the first argument.

use nvsense::diamond::{DiamondParams, Interface};
use nvsense::electrolyte::ElectrolyteParams;

fn main() {
    let c_b: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let ep = ElectrolyteParams::default().with_concentration(c_b);
    let dp = DiamondParams::default();
    let interface = Interface::new(ep, &dp).expect("valid parameters");
    let sol = interface.solve().expect("interface solve");

    println!("c_b      = {c_b} mol/m^3");
    println!("phi0     = {:.6} V", sol.phi0);
    println!("V0       = {:.6} V", sol.v0);
    println!("E_e(0)   = {:.4e} V/m", sol.e_e0);
    println!("E_d(0)   = {:.4e} V/m", sol.e_d0);
    println!("eps_e E_e - eps_d E_d = {:.3e} C/m^2", ep.eps * sol.e_e0 - dp.eps * sol.e_d0);
    println!("residual = {:.2e} V\n", sol.residual);

    for depth in [1e-9, 5e-9, 10e-9, 20e-9, 50e-9] {
        let e = interface.field_at_nv(&sol, depth).unwrap();
        let dt = interface.transfer_derivative(&sol, depth).unwrap();
        println!("depth {:>4.0} nm: E = {:>12.4e} V/m, dE_nv/dE_e0 = {:.4}", depth * 1e9, e, dt);
    }

    println!();
    for s in sol.profile.iter().step_by(20) {
        println!("{:>12.4e} m {:>12.6} V {:>14.4e} V/m", s.depth, s.phi, s.field);
    }
}
