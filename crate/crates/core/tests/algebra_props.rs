use proptest::prelude::*;
use srball::polyexpr::{lie_bracket, parse_poly, Polynomial, RationalField3, RationalFn, Var};

fn coeff() -> impl Strategy<Value = f64> {
    prop_oneof![(-9i32..=9).prop_map(f64::from), -2.0..2.0f64]
}

fn poly(max_terms: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg, 0..=max_deg), coeff()), 0..=max_terms)
        .prop_map(|t| Polynomial::from_terms(t.into_iter().map(|((a, b, c), v)| ([a, b, c], v))))
}

fn field() -> impl Strategy<Value = RationalField3> {
    [poly(3, 2), poly(3, 2), poly(3, 2)].prop_map(RationalField3::from_polys)
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64]
}

fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= tol * (1.0 + a[i].abs().max(b[i].abs())))
}

proptest! {
    #[test]
    fn display_parse_round_trip(p in poly(6, 4)) {
        let q = parse_poly(&p.to_string()).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(4, 3), q in poly(4, 3), x in point()) {
        let (a, b) = (p.eval(x), q.eval(x));
        let tol = 1e-11 * (1.0 + a.abs()) * (1.0 + b.abs());
        prop_assert!(((&p + &q).eval(x) - (a + b)).abs() <= tol);
        prop_assert!(((&p * &q).eval(x) - a * b).abs() <= tol);
        prop_assert!(((&p - &p).eval(x)).abs() == 0.0);
    }

    #[test]
    fn partials_match_finite_differences(p in poly(4, 3), x in point()) {
        let h = 1e-5;
        for v in [Var::X, Var::Y, Var::Z] {
            let mut a = x;
            let mut b = x;
            a[v.index()] += h;
            b[v.index()] -= h;
            let fd = (p.eval(a) - p.eval(b)) / (2.0 * h);
            prop_assert!((p.partial(v).eval(x) - fd).abs() <= 1e-5 * (1.0 + p.max_abs_coefficient()));
        }
    }

    #[test]
    fn quotient_rule(p in poly(3, 2), q in poly(3, 2), x in point()) {
        let d = &Polynomial::one() + &(&q * &q);
        let r = RationalFn::from_poly(p.clone()).div_poly(&d).unwrap();
        let (pv, dv) = (p.eval(x), d.eval(x));
        for v in [Var::X, Var::Y, Var::Z] {
            let expect = (p.partial(v).eval(x) * dv - pv * d.partial(v).eval(x)) / (dv * dv);
            prop_assert!((r.partial(v).eval(x) - expect).abs() <= 1e-10 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn bracket_antisymmetry(v in field(), w in field(), x in point()) {
        let a = lie_bracket(&v, &w).eval(x);
        let b = lie_bracket(&w, &v).eval(x);
        prop_assert!(close(a, b.map(|c| -c), 1e-10));
    }

    #[test]
    fn bracket_jacobi(u in field(), v in field(), w in field(), x in point()) {
        let t1 = lie_bracket(&u, &lie_bracket(&v, &w)).eval(x);
        let t2 = lie_bracket(&v, &lie_bracket(&w, &u)).eval(x);
        let t3 = lie_bracket(&w, &lie_bracket(&u, &v)).eval(x);
        let scale = t1.iter().chain(&t2).chain(&t3).fold(1.0f64, |m, c| m.max(c.abs()));
        for i in 0..3 {
            prop_assert!((t1[i] + t2[i] + t3[i]).abs() <= 1e-10 * scale);
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    for (s, pos) in [("x + * y", 4), ("x^", 2), ("2*(x", 4), ("x^-1", 2)] {
        let e = parse_poly(s).unwrap_err();
        assert_eq!(e.position(), pos, "{s}: {e}");
    }
}
