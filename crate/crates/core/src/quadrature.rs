//! Gauss–Legendre rules and adaptive Gauss–Kronrod integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Nodes and weights of the n-point Gauss–Legendre rule on [a, b].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule on [−1, 1], nodes ascending.
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Rule mapped to [a, b].
    pub fn on(n: usize, a: f64, b: f64) -> GaussLegendre {
        let r = GaussLegendre::new(n);
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        GaussLegendre {
            nodes: r.nodes.iter().map(|x| m + h * x).collect(),
            weights: r.weights.iter().map(|w| h * w).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Pₙ(x) and Pₙ'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive G7/K15 integration of `f` over [a, b], bisecting the
/// worst segment until the summed error estimate is below
/// `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    const MAX_SEGMENTS: usize = 4000;
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let (mut total, mut err) = (v, e);
    while err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_SEGMENTS {
        let Some(s) = heap.pop() else { break };
        let m = 0.5 * (s.a + s.b);
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        total += v1 + v2 - s.value;
        err += e1 + e2 - s.err;
        heap.push(Segment { a: s.a, b: m, value: v1, err: e1 });
        heap.push(Segment { a: m, b: s.b, value: v2, err: e2 });
    }
    // Re-sum to shed drift from the running updates.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.err).sum();
    Integral { value, error, converged: error <= abs_tol.max(rel_tol * value.abs()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 48] {
            let r = GaussLegendre::on(n, 0.0, 2.0);
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let exact = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            let got = r.integrate(|x| x.powi(deg as i32));
            assert!((got - exact).abs() < 1e-12 * exact, "n={n}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let r = GaussLegendre::new(7);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(r.nodes[3], 0.0);
        assert!((r.nodes[0] + r.nodes[6]).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let r = integrate_adaptive(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-13);
        let exact = 2.0 * (1.0 / 1e-2_f64) * (1.0 / 1e-2_f64).atan();
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-9 * exact);
        let s = integrate_adaptive(f64::sin, 0.0, std::f64::consts::PI, 1e-14, 0.0);
        assert!((s.value - 2.0).abs() < 1e-14);
    }
}
