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

//! Brownian dynamics of a closed box of ions compared with the analytic
//! correlators. `--full` runs the default (slower) configuration.

use nvsense::stochastic_oracle::{default_lags, disagreement_fraction, open_reference, simulate, McConfig};

fn main() {
    let full = std::env::args().any(|a| a == "--full");
    let cfg = if full {
        McConfig::default()
    } else {
        McConfig {
            n_particles: 3000,
            n_steps: 16000,
            n_batches: 16,
            ..McConfig::default()
        }
    };
    let lags = default_lags(&cfg);
    let start = std::time::Instant::now();
    let run = simulate(&cfg, &lags).expect("simulation");
    println!("{} particles/species, {} steps, {:.1?}", cfg.n_particles, cfg.n_steps, start.elapsed());

    println!("\ndensity <dn_a(t) dn_b(0)>, bins {:?}", cfg.probe_bins);
    for e in &run.density {
        println!("  {:>9.2e} s {:>12.4e} +- {:>9.2e}  ref {:>12.4e}  z {:.2}", e.lag, e.value, e.stderr, e.reference, e.z_score());
    }
    println!("\nsurface field <dE(t) dE(0)>");
    for e in &run.field {
        println!(
            "  {:>9.2e} s {:>12.4e} +- {:>9.2e}  ref {:>12.4e}  open layer {:>12.4e}  z {:.2}",
            e.lag,
            e.value,
            e.stderr,
            e.reference,
            open_reference(&cfg, e.lag),
            e.z_score()
        );
    }
    println!(
        "\nbeyond 3 sigma: density {:.0}%, field {:.0}%",
        100.0 * disagreement_fraction(&run.density, 3.0),
        100.0 * disagreement_fraction(&run.field, 3.0)
    );
}
