use lacelab::frac::*;
use lacelab::lattice::{fourier_inverse, LatticeField};
use proptest::prelude::*;

#[test]
fn fourier_identity_on_both_parities() {
    for parity in [Parity::Odd, Parity::Even] {
        for eps in [0.25, 0.5, 0.75] {
            let k = FracKernel::new(parity, eps).unwrap();
            for x in [-50, -7, -1, 1, 2, 13, 50] {
                let r = kernel_fourier_identity(&k, x, 20).unwrap();
                assert!(r.residual < 1e-10, "{parity:?} ε={eps} x={x}: {}", r.residual);
            }
        }
    }
}

#[test]
fn eta_special_values() {
    assert!((dirichlet_eta(0.5) - 0.6048986434216303).abs() < 1e-12);
    assert!((dirichlet_eta(1e-9) - 0.5).abs() < 1e-8);
}

#[test]
fn domain_errors() {
    assert!(FracKernel::new(Parity::Odd, 0.0).is_err());
    assert!(FracKernel::new(Parity::Even, 1.0).is_err());
    let k = FracKernel::new(Parity::Odd, 0.5).unwrap();
    assert!(k.eval(0.0).is_err());
    assert!(k.eval(3.5).is_err());
}

#[test]
fn transform_round_trip() {
    let f = LatticeField::from_fn(2, 7, false, |x| ((x[0] * 7 + x[1] * 3).rem_euclid(5)) as f64 / 5.0).unwrap();
    for (m, eps) in [(1u32, 0.5), (2, 0.3), (0, 0.4), (3, 0.7)] {
        let tr = frac_transform(&f, m, eps, 8, 20).unwrap();
        let back = fourier_inverse(&tr.grid, 7).unwrap();
        for i in 0..f.len() {
            let x = f.coords(i);
            let w = if x[0] == 0 { 0.0 } else { (x[0].abs() as f64).powf(m as f64 - eps) };
            assert!((back.values[i] - w * f.values[i]).abs() < 1e-12, "m={m} ε={eps} x={x:?}");
        }
    }
}

#[test]
fn conv_bound_margin_is_grid_stable() {
    let a = conv_bound_check(3.0, 0.5, 16).unwrap();
    let b = conv_bound_check(3.0, 0.5, 32).unwrap();
    assert!(a.margin.is_finite() && b.margin.is_finite());
    assert!((a.margin - b.margin).abs() < 0.05 * a.margin.abs().max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_value_bounds(eps in 0.05f64..0.95, p in -std::f64::consts::PI..std::f64::consts::PI) {
        prop_assume!(p.abs() > 1e-6);
        let odd = FracKernel::new(Parity::Odd, eps).unwrap();
        let even = FracKernel::new(Parity::Even, eps).unwrap();
        let lo = odd.real_profile(p).unwrap();
        prop_assert!(lo.abs() <= 0.5 * p.abs().powf(eps - 1.0) * (1.0 + 1e-12));
        let le = even.real_profile(p).unwrap();
        prop_assert!(le >= -std::f64::consts::LN_2 / std::f64::consts::PI - 1e-12);
    }

    #[test]
    fn odd_kernel_is_odd_even_kernel_is_even(eps in 0.05f64..0.95, p in 1e-3f64..3.1) {
        let odd = FracKernel::new(Parity::Odd, eps).unwrap();
        let even = FracKernel::new(Parity::Even, eps).unwrap();
        prop_assert!((odd.real_profile(p).unwrap() + odd.real_profile(-p).unwrap()).abs() < 1e-12 * odd.real_profile(p).unwrap().abs().max(1.0));
        prop_assert!((even.real_profile(p).unwrap() - even.real_profile(-p).unwrap()).abs() < 1e-12 * even.real_profile(p).unwrap().abs().max(1.0));
    }
}
