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

//! Brownian-dynamics check of the concentration and field correlators.
//!
//! Two ideal ionic species random-walk in a box `[0, L]` with reflecting
//! walls. Bin occupancies give the density correlator; the net charge in a
//! window `[0, w]` at the wall gives the field at the wall. Analytic
//! references account for the finite box: a closed box holds a fixed number
//! of particles, which subtracts `N p_i p_j` from every covariance, and the
//! walls fold the Gaussian propagator through its mirror images.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{AVOGADRO, FARADAY, VACUUM_PERMITTIVITY};
use crate::electrolyte::ElectrolyteParams;
use crate::error::{ensure_positive, Error, Result};
use crate::numeric::erf;

/// Particles are split into this many independently seeded streams. The
/// split does not depend on the thread count, so results are reproducible.
const STREAMS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    /// Particles per species.
    pub n_particles: usize,
    /// Box length (m).
    pub box_length: f64,
    /// Transverse area (m^2).
    pub area: f64,
    /// Diffusion constant of both species (m^2/s).
    pub diffusion: f64,
    /// Time step (s).
    pub dt: f64,
    /// Production steps after burn-in.
    pub n_steps: usize,
    pub n_bins: usize,
    pub seed: u64,
    /// Ion valence.
    pub valence: u32,
    /// Solvent permittivity (F/m).
    pub eps: f64,
    /// Field window width as a fraction of the box.
    pub window_fraction: f64,
    /// Bins whose occupancies are correlated, `<dn_a(t) dn_b(0)>`.
    pub probe_bins: [usize; 2],
    /// Batches for the standard errors.
    pub n_batches: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_particles: 10_000,
            box_length: 1e-6,
            area: 1e-12,
            diffusion: 2.3e-9,
            dt: 5e-8,
            n_steps: 60_000,
            n_bins: 20,
            seed: 1,
            valence: 2,
            eps: 80.0 * VACUUM_PERMITTIVITY,
            window_fraction: 0.1,
            probe_bins: [8, 10],
            n_batches: 20,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mc.box_length", self.box_length),
            ("mc.area", self.area),
            ("mc.diffusion", self.diffusion),
            ("mc.dt", self.dt),
            ("mc.eps", self.eps),
        ] {
            ensure_positive(name, v)?;
        }
        for (name, v) in [
            ("mc.n_particles", self.n_particles),
            ("mc.n_steps", self.n_steps),
            ("mc.n_bins", self.n_bins),
            ("mc.valence", self.valence as usize),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be positive".into(),
                });
            }
        }
        if self.n_batches < 2 || self.n_steps < 2 * self.n_batches {
            return Err(Error::InvalidParameter {
                name: "mc.n_batches",
                reason: "need at least 2 batches of 2 steps".into(),
            });
        }
        if !(self.window_fraction > 0.0 && self.window_fraction < 1.0) {
            return Err(Error::InvalidParameter {
                name: "mc.window_fraction",
                reason: format!("must lie in (0, 1), got {}", self.window_fraction),
            });
        }
        if self.probe_bins.iter().any(|&b| b >= self.n_bins) {
            return Err(Error::InvalidParameter {
                name: "mc.probe_bins",
                reason: format!("bins must be < {}", self.n_bins),
            });
        }
        let limit = self.box_length * self.box_length / (100.0 * self.diffusion);
        if !(self.dt < limit) {
            return Err(Error::InvalidParameter {
                name: "mc.dt",
                reason: format!("must be below L^2/(100 D) = {limit:e} s"),
            });
        }
        let step = self.step_length();
        if self.bin_width() < 3.0 * step {
            return Err(Error::Resolution {
                bin_width: self.bin_width(),
                step,
            });
        }
        Ok(())
    }

    pub fn bin_width(&self) -> f64 {
        self.box_length / self.n_bins as f64
    }

    pub fn window(&self) -> f64 {
        self.window_fraction * self.box_length
    }

    /// RMS displacement per step, `sqrt(2 D dt)` (m).
    pub fn step_length(&self) -> f64 {
        (2.0 * self.diffusion * self.dt).sqrt()
    }

    /// Burn-in length covering one diffusion time `L^2 / D`.
    pub fn burn_in_steps(&self) -> usize {
        (self.box_length * self.box_length / (self.diffusion * self.dt)).ceil() as usize
    }

    pub fn batch_len(&self) -> usize {
        self.n_steps / self.n_batches
    }

    /// Equivalent bulk concentration per species (mol/m^3).
    pub fn concentration(&self) -> f64 {
        self.n_particles as f64 / (AVOGADRO * self.area * self.box_length)
    }

    /// Field contributed per unit of net charge count in the window (V/m).
    fn field_per_count(&self) -> f64 {
        self.valence as f64 * FARADAY / (AVOGADRO * self.eps * self.area)
    }

    /// Lag rounded to whole steps.
    pub fn lag_steps(&self, lag: f64) -> usize {
        (lag / self.dt).round().max(0.0) as usize
    }
}

/// One lag of a simulated correlator with its analytic reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorEstimate {
    /// Lag actually used, a multiple of `dt` (s).
    pub lag: f64,
    pub value: f64,
    pub stderr: f64,
    /// Closed-box analytic value.
    pub reference: f64,
}

impl CorrelatorEstimate {
    /// `|value - reference| / stderr`.
    pub fn z_score(&self) -> f64 {
        (self.value - self.reference).abs() / self.stderr
    }
}

/// Fraction of estimates further than `n_sigma` standard errors from their reference.
pub fn disagreement_fraction(estimates: &[CorrelatorEstimate], n_sigma: f64) -> f64 {
    if estimates.is_empty() {
        return 0.0;
    }
    let bad = estimates.iter().filter(|e| !(e.z_score() <= n_sigma)).count();
    bad as f64 / estimates.len() as f64
}

/// CSV with header `lag_s,correlator,stderr`.
pub fn correlator_csv(estimates: &[CorrelatorEstimate]) -> String {
    let mut out = String::from("lag_s,correlator,stderr\n");
    for e in estimates {
        let _ = writeln!(out, "{:e},{:e},{:e}", e.lag, e.value, e.stderr);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRun {
    /// `<dn_a(t) dn_b(0)>` of one species (1/m^6).
    pub density: Vec<CorrelatorEstimate>,
    /// `<dE(0,t) dE(0,0)>` ((V/m)^2).
    pub field: Vec<CorrelatorEstimate>,
    /// Mean occupancy of each bin over the production run, one species.
    pub mean_occupancy: Vec<f64>,
    /// Particles counted in each production step, both species.
    pub particles_per_step: Vec<usize>,
}

struct StreamRecord {
    probe_a: Vec<i32>,
    probe_b: Vec<i32>,
    net_window: Vec<i32>,
    histogram: Vec<u64>,
    counted: Vec<u32>,
}

fn reflect(mut x: f64, l: f64) -> f64 {
    loop {
        if x < 0.0 {
            x = -x;
        } else if x > l {
            x = 2.0 * l - x;
        } else {
            return x;
        }
    }
}

fn run_stream(cfg: &McConfig, stream: usize) -> StreamRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream as u64);
    let share = |n: usize| n / STREAMS + usize::from(stream < n % STREAMS);
    let n = share(cfg.n_particles);
    let l = cfg.box_length;
    let uniform = Uniform::new(0.0, l);
    // cations first, then anions
    let mut pos: Vec<f64> = (0..2 * n).map(|_| uniform.sample(&mut rng)).collect();
    let sigma = cfg.step_length();
    let step = |pos: &mut [f64], rng: &mut ChaCha8Rng| {
        for x in pos.iter_mut() {
            let g: f64 = StandardNormal.sample(rng);
            *x = reflect(*x + sigma * g, l);
        }
    };
    for _ in 0..cfg.burn_in_steps() {
        step(&mut pos, &mut rng);
    }
    let w = cfg.bin_width();
    let window = cfg.window();
    let bin = |x: f64| ((x / w) as usize).min(cfg.n_bins - 1);
    let mut rec = StreamRecord {
        probe_a: Vec::with_capacity(cfg.n_steps),
        probe_b: Vec::with_capacity(cfg.n_steps),
        net_window: Vec::with_capacity(cfg.n_steps),
        histogram: vec![0; cfg.n_bins],
        counted: Vec::with_capacity(cfg.n_steps),
    };
    let [a, b] = cfg.probe_bins;
    for _ in 0..cfg.n_steps {
        step(&mut pos, &mut rng);
        let (mut ca, mut cb, mut net, mut counted) = (0, 0, 0, 0u32);
        for (i, &x) in pos.iter().enumerate() {
            if !(0.0..=l).contains(&x) {
                continue;
            }
            counted += 1;
            let cation = i < n;
            if x < window {
                net += if cation { 1 } else { -1 };
            }
            if cation {
                let k = bin(x);
                rec.histogram[k] += 1;
                ca += i32::from(k == a);
                cb += i32::from(k == b);
            }
        }
        rec.probe_a.push(ca);
        rec.probe_b.push(cb);
        rec.net_window.push(net);
        rec.counted.push(counted);
    }
    rec
}

/// Lagged covariance `<x(t+k) y(t)>` of fluctuations about known means,
/// averaged within batches; returns the batch mean and its standard error.
fn batched_covariance(x: &[f64], y: &[f64], k: usize, batches: usize) -> (f64, f64) {
    let len = x.len() / batches;
    let values: Vec<f64> = (0..batches)
        .map(|i| {
            let start = i * len;
            let pairs = len - k;
            (start..start + pairs).map(|t| x[t + k] * y[t]).sum::<f64>() / pairs as f64
        })
        .collect();
    let mean = values.iter().sum::<f64>() / batches as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

/// `x erf(x) + exp(-x^2) / sqrt(pi)`, the second antiderivative of the Gaussian kernel.
fn h(x: f64) -> f64 {
    x * erf(x) + (-x * x).exp() / PI.sqrt()
}

/// Probability that a particle uniform over a width-`w` interval lands in
/// another width-`w` interval whose centre lies `d` away, in free space.
fn interval_transfer(d: f64, w: f64, spread: f64) -> f64 {
    if spread == 0.0 {
        return if d.abs() < 0.5 * w { 1.0 } else { 0.0 };
    }
    let s = spread;
    0.5 * s / w * (h((d + w) / s) - 2.0 * h(d / s) + h((d - w) / s))
}

/// Same, inside a reflecting box `[0, l]`, summing mirror images.
fn box_transfer(to: f64, from: f64, w: f64, l: f64, spread: f64) -> f64 {
    if spread == 0.0 {
        return interval_transfer(to - from, w, 0.0);
    }
    let images = (3.0 + 8.0 * spread / l).ceil() as i64;
    (-images..=images)
        .map(|k| {
            let shift = 2.0 * k as f64 * l;
            interval_transfer(to - from + shift, w, spread) + interval_transfer(to + from + shift, w, spread)
        })
        .sum()
}

/// Closed-box `<dn_a(t) dn_b(0)>` for one species (1/m^6).
pub fn density_reference(cfg: &McConfig, lag: f64) -> f64 {
    let w = cfg.bin_width();
    let l = cfg.box_length;
    let p = w / l;
    let centre = |i: usize| (i as f64 + 0.5) * w;
    let [a, b] = cfg.probe_bins;
    let spread = (4.0 * cfg.diffusion * lag).sqrt();
    let transfer = box_transfer(centre(a), centre(b), w, l, spread);
    let n = cfg.n_particles as f64;
    n * p * (transfer - p) / (cfg.area * w).powi(2)
}

/// Closed-box field correlator at the wall for both species ((V/m)^2).
pub fn field_reference(cfg: &McConfig, lag: f64) -> f64 {
    let window = cfg.window();
    let l = cfg.box_length;
    let p = window / l;
    let spread = (4.0 * cfg.diffusion * lag).sqrt();
    let transfer = box_transfer(0.5 * window, 0.5 * window, window, l, spread);
    let n = cfg.n_particles as f64;
    2.0 * n * p * (transfer - p) * cfg.field_per_count().powi(2)
}

/// Half-space field correlator of an electrolyte at the box concentration,
/// with the window as its reference plane ((V/m)^2). The closed box
/// multiplies it by `1 - w/L` at zero lag.
pub fn open_reference(cfg: &McConfig, lag: f64) -> f64 {
    let ep = ElectrolyteParams {
        c_b: cfg.concentration(),
        valence: cfg.valence,
        d_plus: cfg.diffusion,
        d_minus: cfg.diffusion,
        eps: cfg.eps,
        delta: cfg.window(),
        area: cfg.area,
        ..ElectrolyteParams::default()
    };
    ep.field_correlator_simplified(lag)
}

/// Runs the simulation once and estimates both correlators on `lags` (s).
pub fn simulate(cfg: &McConfig, lags: &[f64]) -> Result<McRun> {
    cfg.validate()?;
    let batch = cfg.batch_len();
    for &lag in lags {
        let k = cfg.lag_steps(lag);
        if !(lag >= 0.0) || k >= batch {
            return Err(Error::InvalidParameter {
                name: "lag",
                reason: format!("lag {lag:e} s must lie in [0, {:e}) s", batch as f64 * cfg.dt),
            });
        }
    }
    let records: Vec<StreamRecord> = (0..STREAMS).into_par_iter().map(|s| run_stream(cfg, s)).collect();

    let steps = cfg.n_batches * batch;
    let sum = |f: &dyn Fn(&StreamRecord) -> &Vec<i32>| -> Vec<f64> {
        (0..steps).map(|t| records.iter().map(|r| f(r)[t] as f64).sum()).collect()
    };
    let p_bin = cfg.bin_width() / cfg.box_length;
    let expected = cfg.n_particles as f64 * p_bin;
    let to_density = 1.0 / (cfg.area * cfg.bin_width());
    let fluct = |v: Vec<f64>, mean: f64, scale: f64| -> Vec<f64> { v.into_iter().map(|c| (c - mean) * scale).collect() };
    let xa = fluct(sum(&|r| &r.probe_a), expected, to_density);
    let xb = fluct(sum(&|r| &r.probe_b), expected, to_density);
    let field = fluct(sum(&|r| &r.net_window), 0.0, cfg.field_per_count());

    let mut density = Vec::with_capacity(lags.len());
    let mut field_est = Vec::with_capacity(lags.len());
    for &lag in lags {
        let k = cfg.lag_steps(lag);
        let used = k as f64 * cfg.dt;
        let (v, se) = batched_covariance(&xa, &xb, k, cfg.n_batches);
        density.push(CorrelatorEstimate {
            lag: used,
            value: v,
            stderr: se,
            reference: density_reference(cfg, used),
        });
        let (v, se) = batched_covariance(&field, &field, k, cfg.n_batches);
        field_est.push(CorrelatorEstimate {
            lag: used,
            value: v,
            stderr: se,
            reference: field_reference(cfg, used),
        });
    }

    let mut histogram = vec![0u64; cfg.n_bins];
    for r in &records {
        for (h, c) in histogram.iter_mut().zip(&r.histogram) {
            *h += c;
        }
    }
    let particles_per_step = (0..cfg.n_steps)
        .map(|t| records.iter().map(|r| r.counted[t] as usize).sum())
        .collect();
    Ok(McRun {
        density,
        field: field_est,
        mean_occupancy: histogram.iter().map(|&c| c as f64 / cfg.n_steps as f64).collect(),
        particles_per_step,
    })
}

pub fn simulate_density_correlator(cfg: &McConfig, lags: &[f64]) -> Result<Vec<CorrelatorEstimate>> {
    Ok(simulate(cfg, lags)?.density)
}

pub fn simulate_field_correlator(cfg: &McConfig, lags: &[f64]) -> Result<Vec<CorrelatorEstimate>> {
    Ok(simulate(cfg, lags)?.field)
}

/// Lags (s) at 0 and `2^j` steps up to a quarter batch.
pub fn default_lags(cfg: &McConfig) -> Vec<f64> {
    let mut lags = vec![0.0];
    let mut k = 1;
    while k < cfg.batch_len() / 4 {
        lags.push(k as f64 * cfg.dt);
        k *= 2;
    }
    lags
}
