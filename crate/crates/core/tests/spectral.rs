use std::f64::consts::PI;

use pn_core::elastic::{mode_y_integral, ElasticProfile, ModeProfile};
use pn_core::operators::{apply_half_laplacian, inner};
use pn_core::profile::u_bg;
use pn_core::quadrature::integrate_half_line;
use pn_core::seminorm::background_difference_seminorm;
use pn_core::{hs_seminorm_samples, Grid1D, PhysParams};
use proptest::prelude::*;

fn difference_error(l_over_zeta: f64, n: usize, s: f64) -> f64 {
    let z = PhysParams::desk().zeta();
    let g = Grid1D::new(l_over_zeta * z, n).unwrap();
    let d: Vec<f64> = g.nodes().iter().map(|x| u_bg(*x, 1.0, 0.5 * z) - u_bg(*x, 1.0, z)).collect();
    let exact = background_difference_seminorm(1.0, 0.5 * z, z, s).unwrap();
    (hs_seminorm_samples(&g, &d, s).unwrap() / exact - 1.0).abs()
}

#[test]
fn grid_seminorm_converges_in_domain_size() {
    // fixed spacing, L doubled each time
    let e: Vec<f64> = [(100.0, 2048), (200.0, 4096), (400.0, 8192)]
        .iter()
        .map(|&(l, n)| difference_error(l, n, 1.0))
        .collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.0, "{e:?}");
    }
    assert!(e[2] < 1e-3);
}

#[test]
fn single_mode_energy_matches_y_quadrature() {
    // a cos(xi x) trace: int_0^inf int_period |u|^2 dx dy against the closed per-mode integral
    let nu = 0.25;
    let prof = ElasticProfile { nu };
    for xi in [0.5, 2.0] {
        for m in 0..=1usize {
            let num = integrate_half_line(
                |y| {
                    let [g1, d1, g2, d2] = prof.eval(xi * y);
                    let (a, b) = if m == 0 { (g1, g2) } else { (xi * d1, xi * d2) };
                    a * a + b * b
                },
                1e-16,
                1e-12,
            );
            let closed = mode_y_integral(xi, m, nu) * xi.powi(2 * m as i32);
            assert!((num / closed - 1.0).abs() < 1e-9, "xi={xi} m={m}");
        }
    }
}

#[test]
fn gaussian_half_laplacian_energy() {
    // the |xi| kink at xi = 0 costs (pi/L)^2 w^2 / 12 relative in the periodic sum
    let g = Grid1D::new(240.0, 16384).unwrap();
    let (a, w) = (0.3, 1.5);
    let f: Vec<f64> = g.nodes().iter().map(|x| a * (-(x / w).powi(2)).exp()).collect();
    let hf = apply_half_laplacian(&g, &f).unwrap();
    // (1/2pi) int |xi| |f^|^2 = a^2 for a Gaussian of any width
    let e = inner(&g, &f, &hf) / (a * a) - 1.0;
    assert!(e.abs() < 1e-4, "{e}");
    // value at the center: 2a / (w sqrt(pi))
    let center = 2.0 * a / (w * PI.sqrt());
    assert!((hf[g.len() / 2] / center - 1.0).abs() < 1e-4, "{} {center}", hf[g.len() / 2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn seminorm_is_quadratic(c in prop::collection::vec(-1.0f64..1.0, 64), k in -3.0f64..3.0, s in 0.5f64..2.0) {
        let g = Grid1D::new(5.0, 64).unwrap();
        let a = hs_seminorm_samples(&g, &c, s).unwrap();
        let scaled: Vec<f64> = c.iter().map(|v| k * v).collect();
        let b = hs_seminorm_samples(&g, &scaled, s).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((b - k * k * a).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    #[test]
    fn seminorm_ignores_constants(c in prop::collection::vec(-1.0f64..1.0, 32), k in -5.0f64..5.0) {
        let g = Grid1D::new(3.0, 32).unwrap();
        let a = hs_seminorm_samples(&g, &c, 1.0).unwrap();
        let shifted: Vec<f64> = c.iter().map(|v| v + k).collect();
        let b = hs_seminorm_samples(&g, &shifted, 1.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a));
    }
}
