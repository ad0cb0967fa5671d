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

//! Drives the subcommands from a configuration file, the way the
//! `nvsense` binary does.

use nvsense::commands::{exit_code, run_command};
use nvsense::config::RunConfig;

const CONFIG: &str = "
# concentration and NV placement
electrolyte.c_b = 10
sweep.depth = 8e-9
sweep.cb_min = 0.01
sweep.cb_max = 100
sweep.cb_points = 13
sweep.t2_convention = half
";

fn main() {
    let out = std::env::temp_dir().join("nvsense-example");
    let mut cfg = RunConfig::default();
    cfg.apply_text(CONFIG).unwrap();
    cfg.apply_override("ramsey.c_b=1").unwrap();
    println!("config sha256 {}", cfg.sha256());

    for cmd in ["profile", "fit", "ramsey", "sensitivity"] {
        let report = run_command(cmd, &cfg, &out.join(cmd)).unwrap();
        println!("\n[{cmd}]");
        for l in report.lines {
            println!("  {l}");
        }
        for f in report.files {
            println!("  -> {}", f.display());
        }
    }

    let mut bad = cfg.clone();
    let err = bad.apply_override("electrolyte.c_b=-3").and_then(|_| bad.validate()).unwrap_err();
    println!("\nrejected: {err} (exit {})", exit_code(&err));
}
