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

use nvsense::nv_spin::{self, NVParams, ReadoutParams, T2Convention};

fn main() {
    let nv = NVParams::default();
    println!("levels (field along the surface normal):");
    for e in [0.0, 1e5, 1e6, 1e7] {
        let l = nv.spin_levels(e, nv.b_z);
        println!(
            "  E = {e:>8.1e} V/m: nu+ = {:.6} GHz, nu- = {:.6} GHz, theta = {:.4}, strong = {}",
            l.nu_plus * 1e-9,
            l.nu_minus * 1e-9,
            l.theta,
            l.strong_field
        );
    }

    // white field noise of 6e7 (V/m)^2 passed to the NV with transfer 13.8
    let c0 = nv.nu_fluctuation_correlator(13.8, 6.0e7);
    for conv in [T2Convention::TwoPi, T2Convention::Half] {
        let t2 = 1.0 / nv_spin::inv_t2_star(c0, conv);
        println!("\n{conv:?}: T2* = {:.3} us", t2 * 1e6);
        let readout = ReadoutParams::default();
        for tau in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let t = tau * t2;
            println!(
                "  tau = {:>5.2} T2*: P = {:.4}, <M> = {:.5}, var M = {:.5}, phase var = {:.4}",
                tau,
                nv_spin::ramsey_signal(t, t2, 0.0),
                readout.mean_m(t, t2, 0.0),
                readout.var_m(t, t2, 0.0),
                nv_spin::phase_variance(|_| c0, t).unwrap()
            );
        }
    }
}
