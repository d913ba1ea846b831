use std::f64::consts::PI;

use proptest::prelude::*;
use spiderweb_core::curves::{delta_arg, level_curve, Curve};
use spiderweb_core::dynamics::{classify_point, thresholds, EscapeParams};
use spiderweb_core::modulus::{hadamard_check, log_max_modulus};
use spiderweb_core::theorems::{admissible_ta, theorem1_verify};
use spiderweb_core::{ClosedForm, EntireProductFunction, LogComplex, Zero};

fn product(zeros: &[(f64, u32)]) -> EntireProductFunction {
    let mut zs: Vec<Zero> = zeros.iter().map(|&(a, p)| Zero { a, p }).collect();
    zs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    zs.dedup_by(|x, y| x.a == y.a);
    EntireProductFunction::from_zeros(1.0, 0, zs).unwrap()
}

fn zeros() -> impl Strategy<Value = Vec<(f64, u32)>> {
    prop::collection::vec((0.1f64..500.0, 1u32..3), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_div_round_trip(a in -50.0f64..50.0, b in -3.0f64..3.0, c in -50.0f64..50.0, d in -3.0f64..3.0) {
        let x = LogComplex::new(a, b);
        let y = LogComplex::new(c, d);
        let back = x.mul(y).div(y);
        prop_assert!((back.log_mod - a).abs() < 1e-12);
        prop_assert!((back.arg - b).abs() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry(zs in zeros(), lr in -2.0f64..8.0, th in 0.0f64..PI) {
        let f = product(&zs);
        let z = LogComplex::new(lr, th);
        match (f.eval_log(z), f.eval_log(z.conj())) {
            (Ok(u), Ok(v)) => {
                prop_assert!((u.log_mod - v.log_mod).abs() <= 1e-10 * u.log_mod.abs().max(1.0));
                let d = spiderweb_core::logpolar::reduce_arg(u.arg + v.arg);
                prop_assert!(d.abs() < 1e-9, "{} {}", u.arg, v.arg);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "asymmetric failure"),
        }
    }

    #[test]
    fn modulus_decreases_in_angle(zs in zeros(), lr in -2.0f64..8.0) {
        let f = product(&zs);
        let mut prev = f64::INFINITY;
        for k in 0..=32 {
            let th = PI * k as f64 / 32.0;
            let v = match f.eval_log(LogComplex::new(lr, th)) {
                Ok(v) => v.log_mod,
                Err(_) => f64::NEG_INFINITY,
            };
            prop_assert!(v <= prev + 1e-9 * prev.abs().max(1.0));
            prev = v;
        }
    }

    #[test]
    fn argument_principle(zs in zeros(), lr in -1.0f64..7.0) {
        let f = product(&zs);
        prop_assume!(!f.is_zero_radius(lr));
        prop_assume!(f.stored_zeros().iter().all(|z| (z.a.ln() - lr).abs() > 1e-6));
        let inside: u32 = f.stored_zeros().iter().filter(|z| z.a.ln() < lr).map(|z| z.p).sum();
        let w = delta_arg(&f, &Curve::circle(lr, 64)).unwrap();
        prop_assert!((w.delta_arg - 2.0 * PI * f64::from(inside)).abs() < 1e-6, "{}", w.delta_arg);
    }

    #[test]
    fn hadamard_convexity(lr in 1.0f64..60.0, c in 1.0f64..8.0) {
        let f = EntireProductFunction::closed_form(ClosedForm::CoshSqrt).unwrap();
        prop_assert!(hadamard_check(&f, lr, c).unwrap());
    }

    #[test]
    fn classification_ignores_conjugation(lr in 0.0f64..12.0, th in 0.0f64..PI) {
        let f = EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }).unwrap();
        let t = thresholds(&f, EscapeParams::new(9.0, 6.0, 2)).unwrap();
        let z = LogComplex::new(lr, th);
        prop_assert_eq!(classify_point(&f, z, &t), classify_point(&f, z.conj(), &t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // the winding bound on level curves |f| = λ of order-1/2 functions
    #[test]
    fn winding_bound_on_level_curves(
        which in 0usize..3,
        log_t in 20.0f64..40.0,
        a in 1.0f64..2.0,
        frac in 0.05f64..0.95,
    ) {
        let f = match which {
            0 => EntireProductFunction::closed_form(ClosedForm::CoshSqrt),
            1 => EntireProductFunction::closed_form(ClosedForm::SinhSqrtOverSqrt),
            _ => EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 2 }),
        }
        .unwrap();
        prop_assume!(admissible_ta(log_t, a, 0.0));
        let log_m = log_max_modulus(&f, log_t).unwrap();
        let curve = level_curve(&f, log_t, (1.0 + a) * log_t + 0.5, frac * log_m, 256).unwrap();
        let cert = theorem1_verify(&f, &curve, log_t, a, 0.0).unwrap();
        prop_assert_eq!(cert.passed, Some(true), "margin {}", cert.margin());
    }
}
