use std::f64::consts::{PI, TAU};

use srball::contact::{chi_at, kappa_at, ContactStructure};
use srball::cutdomain::cut_time_asymptotic_guarded;
use srball::dilation::DilatedStructure;
use srball::families::Family;
use srball::geodesic::first_conjugate_time;
use srball::heisenberg::{c0, c1};
use srball::parallel::Execution;
use srball::volume::{ball_volume, fit_expansion, QuadratureSpec};

fn structure(f: Family) -> ContactStructure {
    ContactStructure::derive(f.frame().unwrap()).unwrap()
}

fn small(n_rho: usize, n_theta: usize, n_w: usize) -> QuadratureSpec {
    QuadratureSpec { n_rho, n_theta, n_w, ..QuadratureSpec::default() }
}

#[test]
fn heisenberg_volume_is_c0_eps4() {
    let s = structure(Family::Heisenberg);
    for eps in [0.3, 0.1, 0.02] {
        let r = ball_volume(&s, eps, &small(4, 4, 48)).unwrap();
        assert!(((r.scaled - c0()) / c0()).abs() < 1e-6, "eps {eps}: {}", r.scaled);
        assert!((r.volume / eps.powi(4) - r.scaled).abs() < 1e-12);
    }
}

#[test]
fn heisenberg_quadrature_converges_under_doubling() {
    let s = structure(Family::Heisenberg);
    let quad = QuadratureSpec { convergence_tol: Some(1e-8), ..small(4, 4, 24) };
    let r = ball_volume(&s, 0.1, &quad).unwrap();
    assert!(r.doubling_change.unwrap() < 1e-7);
}

#[test]
fn heisenberg_fit_is_flat() {
    let s = structure(Family::Heisenberg);
    let r = fit_expansion(&s, &[0.2, 0.15, 0.1, 0.05], &small(4, 4, 48)).unwrap();
    assert!((r.c0_est - c0()).abs() < 1e-6);
    assert!(r.slope_est.abs() < 1e-3);
}

#[test]
fn kappa4_volume_below_heisenberg_and_monotone() {
    let s = structure(Family::Kappa4);
    let q = small(8, 16, 24);
    let mut prev = 0.0;
    for eps in [0.05, 0.1, 0.15] {
        let r = ball_volume(&s, eps, &q).unwrap();
        assert!(r.volume > prev);
        assert!(r.scaled < c0(), "eps {eps}: {}", r.scaled);
        assert!(r.scaled > 0.5 * c0());
        assert_eq!(r.negative_jacobian, 0);
        prev = r.volume;
    }
    let r = ball_volume(&s, 0.1, &q).unwrap();
    let pred = c0() * (1.0 - 4.0 * c1() * 0.01);
    assert!(((r.scaled - pred) / pred).abs() < 1e-3, "{} vs {pred}", r.scaled);
}

#[test]
fn parallel_and_sequential_agree_bitwise() {
    let s = structure(Family::Chi4);
    let p = ball_volume(&s, 0.1, &small(4, 8, 8)).unwrap();
    let q = ball_volume(&s, 0.1, &QuadratureSpec { execution: Execution::Sequential, ..small(4, 8, 8) }).unwrap();
    assert_eq!(p.volume.to_bits(), q.volume.to_bits());
}

/// Conjugate time of the dilated structure at |w| = 6π against the cut-time
/// asymptotic. For χ = 0 the ε² coefficient matches within 25%; the conjugate
/// time is never below the cut-time prediction.
#[test]
fn conjugate_time_against_cut_asymptotic() {
    let w = 6.0 * PI;
    for f in [Family::Kappa2, Family::Kappa4, Family::Chi4] {
        let frame = f.frame().unwrap();
        let s = structure(f);
        let (k, x) = (kappa_at(&s, [0.0; 3]).unwrap(), chi_at(&s, [0.0; 3]).unwrap());
        for th in [0.0, 1.0, PI / 2.0] {
            let eps = 0.1;
            let d = DilatedStructure::new(eps, &frame).unwrap();
            let t = first_conjugate_time(d.structure(), th, w, 1e-12).unwrap();
            let coef = (t - TAU / w) / (eps * eps);
            // ε² coefficient of the dilated cut time: the |w|⁻³ term at unit ε.
            let pred = cut_time_asymptotic_guarded(k, x, th, w, 0.0).value - TAU / w;
            if x == 0.0 {
                assert!(((coef - pred) / pred).abs() < 0.25, "{f} θ={th}: {coef} vs {pred}");
            }
            assert!(coef >= pred - 1e-6, "{f} θ={th}: conjugate {coef} below cut {pred}");
        }
    }
}
