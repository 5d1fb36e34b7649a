//! Closed forms on the Heisenberg group: exponential map, its Jacobian,
//! cut time, the sine integral and the constants c₀, c₁.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

/// Below this |w| the Jacobian-type profiles switch to their Taylor series.
pub const PROFILE_SERIES_BELOW: f64 = 1.0;
/// Below this |wt| the vertical exponential coordinate uses its series.
pub const EXP_SERIES_BELOW: f64 = 0.5;

/// Taylor coefficients in w² of (2 − 2cos w − w sin w)/w⁴.
const J_SERIES: [f64; 13] = [
    1.0 / 12.0,
    -1.0 / 180.0,
    1.0 / 6720.0,
    -1.0 / 453600.0,
    1.0 / 47900160.0,
    -1.0 / 7264857600.0,
    1.0 / 1494484992000.0,
    -1.0 / 400148356608000.0,
    1.0 / 135161222676480000.0,
    -1.0 / 56200036388880384000.0,
    1.0 / 28202200078783610880000.0,
    -1.0 / 16803810880275234816000000.0,
    1.0 / 11726474792758225403904000000.0,
];

/// Taylor coefficients in w² of g₀.
const G0_SERIES: [f64; 13] = [
    1.0 / 20.0,
    -3.0 / 280.0,
    9.0 / 11200.0,
    -1.0 / 29700.0,
    151.0 / 161441280.0,
    -101.0 / 5381376000.0,
    7279.0 / 25406244864000.0,
    -809.0 / 234654900480000.0,
    863.0 / 25697318879232000.0,
    -46603.0 / 172346778259233177600.0,
    621377.0 / 339470926874247168000000.0,
    -11507.0 / 1089135890388209664000000.0,
    29826157.0 / 566779614983314227855360000000.0,
];

/// Taylor coefficients in w² of (5w sin w − (w² − 8)cos w − 8)/w⁶.
const H_SERIES: [f64; 13] = [
    -1.0 / 90.0,
    1.0 / 1680.0,
    -1.0 / 75600.0,
    1.0 / 5987520.0,
    -1.0 / 726485760.0,
    1.0 / 124540416000.0,
    -1.0 / 28582025472000.0,
    1.0 / 8447576417280000.0,
    -1.0 / 3122224243826688000.0,
    1.0 / 1410110003939180544000.0,
    -1.0 / 763809585467056128000000.0,
    1.0 / 488603116364926058496000000.0,
    -1.0 / 364358323917844860764160000000.0,
];

fn even_series(c: &[f64], w: f64) -> f64 {
    let w2 = w * w;
    c.iter().rev().fold(0.0, |acc, k| acc * w2 + k)
}

fn sinc(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s.sin() / s
    }
}

/// (u − sin u)/u², with a series near 0.
fn vertical_profile(u: f64) -> (f64, bool) {
    if u.abs() < EXP_SERIES_BELOW {
        // u/6 − u³/120 + u⁵/5040 − …
        let u2 = u * u;
        let mut term = u / 6.0;
        let mut sum = term;
        for k in 1..10 {
            let n = (2 * k + 2) as f64;
            term *= -u2 / (n * (n + 1.0));
            sum += term;
        }
        (sum, true)
    } else {
        ((u - u.sin()) / (u * u), false)
    }
}

/// Endpoint of a Heisenberg geodesic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeisExpResult {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub valid_series: bool,
}

impl HeisExpResult {
    pub fn point(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Time-`t` point of the Heisenberg geodesic with covector (ρ, θ, w):
/// x = ρ(sin(wt+θ) − sin θ)/w, y = −ρ(cos(wt+θ) − cos θ)/w,
/// z = ρ²(wt − sin wt)/(2w²).
pub fn heis_exp(rho: f64, theta: f64, w: f64, t: f64) -> HeisExpResult {
    let u = w * t;
    let s = sinc(0.5 * u);
    let phase = theta + 0.5 * u;
    let (v, series) = vertical_profile(u);
    HeisExpResult {
        x: rho * t * phase.cos() * s,
        y: rho * t * phase.sin() * s,
        z: 0.5 * rho * rho * t * t * v,
        valid_series: series,
    }
}

/// J(w) = (2 − 2cos w − w sin w)/w⁴.
pub fn jacobian_profile(w: f64) -> f64 {
    if w.abs() < PROFILE_SERIES_BELOW {
        even_series(&J_SERIES, w)
    } else {
        (2.0 - 2.0 * w.cos() - w * w.sin()) / w.powi(4)
    }
}

/// det J exp at (ρ, θ, w) on the Heisenberg group: ρ³ J(w).
pub fn heis_jacobian(rho: f64, _theta: f64, w: f64) -> f64 {
    rho.powi(3) * jacobian_profile(w)
}

/// g₀(w) = ((16 − 3w²)cos w + 2cos 2w + 13w sin w + w sin 2w − 18)/w⁶.
pub fn g0(w: f64) -> f64 {
    if w.abs() < PROFILE_SERIES_BELOW {
        even_series(&G0_SERIES, w)
    } else {
        let (s, c) = w.sin_cos();
        let (s2, c2) = (2.0 * w).sin_cos();
        ((16.0 - 3.0 * w * w) * c + 2.0 * c2 + 13.0 * w * s + w * s2 - 18.0) / w.powi(6)
    }
}

/// h(w) = (5w sin w − (w² − 8)cos w − 8)/w⁶.
pub fn h_profile(w: f64) -> f64 {
    if w.abs() < PROFILE_SERIES_BELOW {
        even_series(&H_SERIES, w)
    } else {
        let (s, c) = w.sin_cos();
        (5.0 * w * s - (w * w - 8.0) * c - 8.0) / w.powi(6)
    }
}

/// sin²(w/2)(2cos w + w sin w − 2)/w⁶, written as −sinc²(w/2)·J(w)/4.
pub fn radial_profile(w: f64) -> f64 {
    let s = sinc(0.5 * w);
    -0.25 * s * s * jacobian_profile(w)
}

/// Si(x) = ∫₀ˣ sin t/t dt, by power series for |x| ≤ 4 and the continued
/// fraction for E₁(ix) beyond.
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= 4.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut k = 0;
        loop {
            k += 1;
            let n = (2 * k + 1) as f64;
            term *= -x2 / ((n - 1.0) * n);
            let add = term / n;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() || k > 60 {
                break;
            }
        }
        sum
    } else {
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, ax);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 2..200 {
            let a = -((i - 1) as f64).powi(2);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(ax.cos(), -ax.sin());
        FRAC_PI_2 + h.im
    };
    v.copysign(x)
}

/// c₀ = (1 + 2π Si(2π))/12, the Popp volume of the Heisenberg unit ball.
pub fn c0() -> f64 {
    (1.0 + TAU * sine_integral(TAU)) / 12.0
}

/// c₁ = (2 + 4π Si(2π) − 1/π²)/(160 c₀).
pub fn c1() -> f64 {
    (2.0 + 2.0 * TAU * sine_integral(TAU) - 1.0 / (PI * PI)) / (160.0 * c0())
}

/// First conjugate (= cut) time 2π/|w|; infinite for w = 0.
pub fn heis_cut_time(w: f64) -> f64 {
    if w == 0.0 {
        f64::INFINITY
    } else {
        TAU / w.abs()
    }
}
