use proptest::prelude::*;
use srball::contact::{build_normal_frame, ContactStructure, NormalFormSpec};
use srball::dilation::{contract_point, dilate_point, tau, DilatedStructure};
use srball::geodesic::{exp_map, CylCovector};
use srball::polyexpr::parse_poly;

proptest! {
    #[test]
    fn dilation_inverse(e in 0.01..3.0f64, p in [-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64]) {
        let q = contract_point(e, dilate_point(e, p));
        for i in 0..3 {
            prop_assert!((q[i] - p[i]).abs() <= 1e-12 * (1.0 + p[i].abs()));
        }
    }

    #[test]
    fn dilations_compose(a in 0.05..2.0f64, b in 0.05..2.0f64, p in [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]) {
        let l = dilate_point(a, dilate_point(b, p));
        let r = dilate_point(a * b, p);
        for i in 0..3 {
            prop_assert!((l[i] - r[i]).abs() <= 1e-13);
        }
    }

    #[test]
    fn dilation_preserves_weighted_ordering(
        a in 0.05..1.0f64, b in 0.05..1.0f64, p in [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64],
    ) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let norm = |q: [f64; 3]| q[0].abs().max(q[1].abs()).max(q[2].abs().sqrt());
        prop_assert!(norm(dilate_point(lo, p)) <= norm(dilate_point(hi, p)) + 1e-15);
        prop_assert!((norm(dilate_point(hi, p)) - hi * norm(p)).abs() <= 1e-12);
    }

    #[test]
    fn tau_scales_only_rho(e in 0.01..1.0f64, r in 0.0..1.0f64, th in 0.0..6.0f64, w in -6.0..6.0f64) {
        let c = tau(e, &CylCovector::new(r, th, w).unwrap());
        prop_assert_eq!((c.theta, c.w), (th, w));
        prop_assert!((c.rho - e * r).abs() <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn exp_diagram_commutes(e in 0.05..0.5f64, r in 0.1..1.0f64, th in 0.0..6.2f64, w in -6.0..6.0f64) {
        let spec = NormalFormSpec::new(parse_poly("0.4*x - 0.2*y").unwrap(), parse_poly("x^2 - 0.5*x*y + 0.3*y^2 + x^2*z").unwrap()).unwrap();
        let f = build_normal_frame(&spec).unwrap();
        let parent = ContactStructure::derive(f.clone()).unwrap();
        let d = DilatedStructure::new(e, &f).unwrap();
        let cov = CylCovector::new(r, th, w).unwrap();
        let l = d.to_parent(exp_map(d.structure(), &cov, 1e-11).unwrap());
        let rr = exp_map(&parent, &tau(e, &cov), 1e-11).unwrap();
        for i in 0..3 {
            prop_assert!((l[i] - rr[i]).abs() <= 1e-9);
        }
    }
}
