use hklab::diffseq::{diff_apply, diff_inverse, hardy_constant, hardy_ratio, CoeffVec};
use hklab::generator::{
    group_apply, operator_norm, resolvent_apply, spectrum_distance, GeneratorConfig, NormMethod, OperatorKind,
};
use hklab::hkspace::{minimality_distance, space_norm, SpaceConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn coeffs(len: std::ops::Range<usize>) -> impl Strategy<Value = CoeffVec> {
    prop::collection::vec(complex(), len).prop_map(|v| CoeffVec::new(v).unwrap())
}

fn pair(len: std::ops::Range<usize>) -> impl Strategy<Value = (CoeffVec, CoeffVec)> {
    len.prop_flat_map(|n| (coeffs(n..n + 1), coeffs(n..n + 1)))
}

fn close(a: &CoeffVec, b: &CoeffVec, tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm())))
}

proptest! {
    #[test]
    fn differences_are_linear((x, y) in pair(1..40), k in 1usize..5, alpha in complex()) {
        let lhs = diff_apply(k, &x.scale(alpha).checked_add(&y).unwrap()).unwrap();
        let rhs = diff_apply(k, &x).unwrap().scale(alpha).checked_add(&diff_apply(k, &y).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn differences_compose(x in coeffs(1..40), j in 1usize..4, k in 1usize..4) {
        let stepwise = diff_apply(j, &diff_apply(k, &x).unwrap()).unwrap();
        let direct = diff_apply(j + k, &x).unwrap();
        prop_assert!(close(&stepwise, &direct, 1e-9));
    }

    #[test]
    fn inverse_round_trips(x in coeffs(1..40), k in 1usize..5) {
        let back = diff_inverse(k, &diff_apply(k, &x).unwrap()).unwrap();
        prop_assert!(close(&back, &x, 1e-8));
        let fwd = diff_apply(k, &diff_inverse(k, &x).unwrap()).unwrap();
        prop_assert!(close(&fwd, &x, 1e-8));
    }

    #[test]
    fn space_norm_is_a_norm((x, y) in pair(1..30), k in 1usize..4, p in 1.0f64..4.0, alpha in complex()) {
        let s = SpaceConfig::banach(k, p).unwrap();
        let nx = space_norm(&s, &x).unwrap();
        let ny = space_norm(&s, &y).unwrap();
        let nsum = space_norm(&s, &x.checked_add(&y).unwrap()).unwrap();
        prop_assert!(nsum <= (nx + ny) * (1.0 + 1e-12) + 1e-12);
        let nscaled = space_norm(&s, &x.scale(alpha)).unwrap();
        prop_assert!((nscaled - alpha.norm() * nx).abs() <= 1e-10 * (1.0 + nscaled));
        prop_assert!(nx >= 0.0);
        prop_assert!(space_norm(&s, &CoeffVec::zeros(x.len()).unwrap()).unwrap() == 0.0);
    }

    #[test]
    fn truncations_never_decrease_the_norm(x in coeffs(2..40), k in 1usize..4) {
        let s = SpaceConfig::hilbert(k).unwrap();
        let mut last = 0.0;
        for m in 1..=x.len() {
            let head = CoeffVec::new(x.entries()[..m].to_vec()).unwrap();
            let v = space_norm(&s, &head).unwrap();
            prop_assert!(v >= last * (1.0 - 1e-12));
            last = v;
        }
    }

    #[test]
    fn group_law_and_unimodularity(x in coeffs(1..50), s in -20.0f64..20.0, t in -20.0f64..20.0, k in 1usize..3) {
        let g = GeneratorConfig::log(k, 64).unwrap();
        let lhs = group_apply(&g, s + t, &x).unwrap();
        let rhs = group_apply(&g, s, &group_apply(&g, t, &x).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-9));
        for (a, b) in group_apply(&g, t, &x).unwrap().iter().zip(x.iter()) {
            prop_assert!((a.norm() - b.norm()).abs() <= 1e-12 * (1.0 + b.norm()));
        }
        let zero = group_apply(&g, 0.0, &x).unwrap();
        prop_assert_eq!(zero.entries(), x.entries());
    }

    #[test]
    fn resolvent_identity(x in coeffs(1..50), lre in 0.05f64..3.0, lim in -2.0f64..6.0, mre in 0.05f64..3.0, mim in -2.0f64..6.0) {
        let g = GeneratorConfig::log(1, 64).unwrap();
        let (l, m) = (Complex64::new(lre, lim), Complex64::new(mre, mim));
        let rl = resolvent_apply(&g, l, &x).unwrap();
        let rm = resolvent_apply(&g, m, &x).unwrap();
        let rlrm = resolvent_apply(&g, l, &rm).unwrap();
        let lhs = rl.checked_add(&rm.scale(Complex64::new(-1.0, 0.0))).unwrap();
        let rhs = rlrm.scale(l - m);
        prop_assert!(close(&lhs, &rhs, 1e-8));
    }

    #[test]
    fn resolvent_norm_dominates_inverse_distance(re in -3.0f64..3.0, im in -1.0f64..8.0, k in 1usize..3) {
        prop_assume!(re.abs() > 1e-3);
        let g = GeneratorConfig::log(k, 256).unwrap();
        let lambda = Complex64::new(re, im);
        let d = spectrum_distance(&g, lambda, 256).unwrap();
        let norm = operator_norm(&g, OperatorKind::Resolvent(lambda), 256, NormMethod::MatrixFree).unwrap();
        prop_assert!(norm.value >= (1.0 / d) * (1.0 - 1e-9));
    }

    #[test]
    fn minimality_shrinks_with_more_vectors(n in 1usize..30, extra in 1usize..40, k in 1usize..4) {
        let s = SpaceConfig::hilbert(k).unwrap();
        let a = minimality_distance(&s, n, n + extra).unwrap();
        let b = minimality_distance(&s, n, n + extra + 7).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(a > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hardy_ratio_stays_below_constant(a in prop::collection::vec(0.0f64..1.0, 1..200), pi in 0usize..3) {
        prop_assume!(a.iter().any(|&x| x > 0.0));
        let p = [1.5, 2.0, 3.0][pi];
        let r = hardy_ratio(p, &a).unwrap();
        prop_assert!(r < hardy_constant(p));
        prop_assert!(r >= 0.0);
    }
}
