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

use crate::error::{Error, Result};

/// A sign-changing interval `[lo, hi]` with the function values at its ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends; `None` unless the signs differ.
    ///
    /// Infinite values count with their sign, so a function that diverges
    /// on one side of the root still brackets it.
    pub fn new<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Option<Self> {
        let (f_lo, f_hi) = (f(lo), f(hi));
        Self::from_values(lo, hi, f_lo, f_hi)
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Option<Self> {
        if f_lo.is_nan() || f_hi.is_nan() {
            return None;
        }
        if f_lo == 0.0 || f_hi == 0.0 || (f_lo < 0.0) != (f_hi < 0.0) {
            Some(Self { lo, hi, f_lo, f_hi })
        } else {
            None
        }
    }

    /// Scans `n` uniform cells of `[lo, hi]` for the first sign change.
    pub fn scan<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, n: usize) -> Option<Self> {
        let n = n.max(1);
        let mut x0 = lo;
        let mut f0 = f(lo);
        for i in 1..=n {
            let x1 = lo + (hi - lo) * i as f64 / n as f64;
            let f1 = f(x1);
            if let Some(b) = Self::from_values(x0, x1, f0, f1) {
                return Some(b);
            }
            x0 = x1;
            f0 = f1;
        }
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-14,
            f_tol: 0.0,
            max_iter: 200,
        }
    }
}

/// Brent's method (inverse quadratic / secant steps safeguarded by bisection).
///
/// Non-finite function values inside the bracket force a bisection step, which
/// makes the solver usable on residuals that blow up on one side of the root.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, opts: RootOptions) -> Result<f64> {
    let Bracket {
        lo: mut a,
        hi: mut b,
        f_lo: mut fa,
        f_hi: mut fb,
    } = bracket;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() || !fb.is_finite() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || (fb.is_finite() && fb.abs() <= opts.f_tol) {
            return Ok(b);
        }
        let finite = fa.is_finite() && fb.is_finite() && fc.is_finite();
        if finite && e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::NonConverged {
                iterations: opts.max_iter,
                residual: f64::NAN,
            });
        }
    }
    Err(Error::NonConverged {
        iterations: opts.max_iter,
        residual: fb,
    })
}
