use fracbvp::expr::Expr;
use fracbvp::fracops::{frac_diff, frac_diff_matrix, frac_sum, GridFunction};
use fracbvp::green::{green_table, lambda_constant, FracOrder};
use fracbvp::lyapunov::{certify, eigen_exclusion, lyapunov_constant, CertifyMode, Variant};
use fracbvp::solver::{apply_t, residual, solve_picard, PicardOptions, ProblemSpec};
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![Just(2.0), 1.01f64..2.0]
}

fn values(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frac_sum_is_linear(nu in 0.05f64..3.0, f in values(1..12), c in -3.0f64..3.0) {
        let g: Vec<f64> = f.iter().map(|x| x * 0.5 - 1.0).collect();
        let combo: Vec<f64> = f.iter().zip(&g).map(|(x, y)| x + c * y).collect();
        let sf = frac_sum(&GridFunction::new(0.0, f.clone()).unwrap(), nu).unwrap();
        let sg = frac_sum(&GridFunction::new(0.0, g).unwrap(), nu).unwrap();
        let sc = frac_sum(&GridFunction::new(0.0, combo).unwrap(), nu).unwrap();
        for i in 0..f.len() {
            let want = sf.values()[i] + c * sg.values()[i];
            prop_assert!((sc.values()[i] - want).abs() <= 1e-9 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn matrix_form_agrees(a in alpha(), f in values(3..12)) {
        let gf = GridFunction::new(0.0, f.clone()).unwrap();
        let op = frac_diff(&gf, a).unwrap();
        let m = frac_diff_matrix(a, f.len()).unwrap();
        let v = m * nalgebra::DVector::from_vec(f);
        for (x, y) in op.values().iter().zip(v.iter()) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn green_entries_positive_and_bounded(a in alpha(), b in 2usize..10) {
        let order = FracOrder::new(a).unwrap();
        let t = green_table(order, b).unwrap();
        let max = t.max_entry().0;
        prop_assert!(t.as_slice().iter().all(|&g| g > 0.0 && g <= max));
        prop_assert!((lyapunov_constant(order, b).unwrap() * max - 1.0).abs() < 1e-12);
        let lambda = lambda_constant(order, b).unwrap();
        prop_assert!(lambda > 0.0 && lambda < 1.0);
        prop_assert!(eigen_exclusion(order, b).unwrap() > 0.0);
    }

    #[test]
    fn linear_problems_solve_exactly(a in alpha(), b in 2usize..7, c in 0.0f64..3.0) {
        // Affine f keeps T an affine contraction for these loads.
        let q = format!("{c}");
        let p = ProblemSpec::new(a, b, &q, "1 + y/100").unwrap();
        let sol = solve_picard(&p, &PicardOptions::default()).unwrap();
        prop_assert!(sol.converged);
        prop_assert!(residual(&p, &sol.y).unwrap() < 1e-9);
        let again = apply_t(&p, &sol.y).unwrap();
        for (x, y) in again.values().iter().zip(sol.y.values()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn nontrivial_certificate_holds_for_solutions(a in alpha(), b in 2usize..7, c in 0.1f64..2.0) {
        let p = ProblemSpec::new(a, b, &format!("{c}*t"), "1/(y+20)").unwrap();
        let sol = solve_picard(&p, &PicardOptions::default()).unwrap();
        let cert = certify(&p, CertifyMode::NontrivialSolution { eta: sol.eta }, Variant::Exact).unwrap();
        prop_assert!(cert.satisfied, "{cert:?}");
    }

    #[test]
    fn display_round_trips(src in expr_source()) {
        if let Ok(e) = Expr::parse(&src, "t") {
            let again = Expr::parse(&e.to_string(), "t").unwrap();
            prop_assert_eq!(&e, &again);
            match (e.eval(0.75), again.eval(0.75)) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x.to_bits(), y.to_bits()),
                (Err(_), Err(_)) => {}
                (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
            }
        }
    }
}

fn expr_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("t".to_string()),
        (0.0f64..100.0).prop_map(|x| format!("{x}")),
        (1u32..9).prop_map(|n| n.to_string()),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (
                inner.clone(),
                prop::sample::select(vec!["+", "-", "*", "/", "^"]),
                inner.clone()
            )
                .prop_map(|(l, op, r)| format!("{l}{op}{r}")),
            inner.clone().prop_map(|e| format!("({e})")),
            inner.clone().prop_map(|e| format!("-{e}")),
            (
                prop::sample::select(vec!["ln", "exp", "sqrt", "abs", "gamma"]),
                inner
            )
                .prop_map(|(f, e)| format!("{f}({e})")),
        ]
    })
}
