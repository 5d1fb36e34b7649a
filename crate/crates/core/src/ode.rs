//! Dormand–Prince 5(4) integrator with max-norm error control.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    /// Absolute and relative tolerance both equal to `tol`.
    pub fn with_tol(tol: f64) -> OdeOptions {
        OdeOptions { rtol: tol, atol: tol, max_steps: 1_000_000 }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions::with_tol(1e-10)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest accepted scaled error estimate (≤ 1 means within tolerance).
    pub max_error: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = f(t, y)` from `t0` to `t1` in place.
///
/// The step sequence is clipped so that every time in `stops` (ascending,
/// inside (t0, t1]) is hit exactly; `observe` is called at `t0`, after every
/// accepted step, and therefore at every stop.
pub fn integrate<F, O>(
    mut f: F,
    t0: f64,
    y: &mut [f64],
    t1: f64,
    opts: &OdeOptions,
    stops: &[f64],
    mut observe: O,
) -> Result<OdeStats>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    O: FnMut(f64, &[f64]),
{
    let n = y.len();
    let mut stats = OdeStats::default();
    observe(t0, y);
    if t1 == t0 {
        return Ok(stats);
    }
    let dir = (t1 - t0).signum();
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    f(t0, y, &mut k[0])?;
    stats.evaluations += 1;
    let mut h = initial_step(&mut f, t0, y, &k[0], dir, opts, &mut stats)?.min((t1 - t0).abs());
    let mut t = t0;
    let mut next_stop = 0;
    let mut last_rejected = false;

    while (t1 - t) * dir > 0.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::TooManySteps { limit: opts.max_steps, t });
        }
        while next_stop < stops.len() && (stops[next_stop] - t) * dir <= 0.0 {
            next_stop += 1;
        }
        let target = if next_stop < stops.len() { stops[next_stop] } else { t1 };
        let mut hs = h;
        let remaining = (target - t).abs();
        let mut hits = false;
        if hs >= remaining * (1.0 - 1e-12) {
            hs = remaining;
            hits = true;
        }
        if hs < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        let hd = hs * dir;

        for i in 0..n {
            tmp[i] = y[i] + hd * A21 * k[0][i];
        }
        f(t + C2 * hd, &tmp, &mut k[1])?;
        for i in 0..n {
            tmp[i] = y[i] + hd * (A31 * k[0][i] + A32 * k[1][i]);
        }
        f(t + C3 * hd, &tmp, &mut k[2])?;
        for i in 0..n {
            tmp[i] = y[i] + hd * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        f(t + C4 * hd, &tmp, &mut k[3])?;
        for i in 0..n {
            tmp[i] = y[i] + hd * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        f(t + C5 * hd, &tmp, &mut k[4])?;
        for i in 0..n {
            tmp[i] = y[i]
                + hd * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
        }
        f(t + hd, &tmp, &mut k[5])?;
        for i in 0..n {
            ynew[i] = y[i]
                + hd * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        f(t + hd, &ynew, &mut k[6])?;
        stats.evaluations += 6;

        let mut err: f64 = 0.0;
        for i in 0..n {
            let e = hd
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
            err = err.max(e.abs() / sc);
        }
        if !err.is_finite() {
            stats.rejected += 1;
            h = 0.25 * hs;
            last_rejected = true;
            continue;
        }

        if err <= 1.0 {
            stats.accepted += 1;
            stats.max_error = stats.max_error.max(err);
            t = if hits { target } else { t + hd };
            y.copy_from_slice(&ynew);
            k.swap(0, 6);
            observe(t, y);
            let mut fac = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            // A step clipped to a stop says nothing about the natural size.
            h = if hits { h.max(hs * fac) } else { hs * fac };
            last_rejected = false;
        } else {
            stats.rejected += 1;
            h = hs * (0.9 * err.powf(-0.2)).max(0.2);
            last_rejected = true;
        }
    }
    Ok(stats)
}

fn initial_step<F>(
    f: &mut F,
    t0: f64,
    y: &[f64],
    f0: &[f64],
    dir: f64,
    opts: &OdeOptions,
    stats: &mut OdeStats,
) -> Result<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let sc: Vec<f64> = y.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let d0 = y.iter().zip(&sc).map(|(v, s)| (v / s).abs()).fold(0.0, f64::max);
    let d1 = f0.iter().zip(&sc).map(|(v, s)| (v / s).abs()).fold(0.0, f64::max);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: Vec<f64> = (0..n).map(|i| y[i] + dir * h0 * f0[i]).collect();
    let mut f1 = vec![0.0; n];
    f(t0 + dir * h0, &y1, &mut f1)?;
    stats.evaluations += 1;
    let d2 = (0..n).map(|i| ((f1[i] - f0[i]) / sc[i]).abs()).fold(0.0, f64::max) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1))
}
