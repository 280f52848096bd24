use pn_core::elastic::{extend_to_half_planes, stress_field, YLevels};
use pn_core::{Grid1D, PhysParams, Profile};

fn bumped(g: &Grid1D, p: PhysParams) -> Profile {
    let v: Vec<f64> = g
        .nodes()
        .iter()
        .map(|x| 0.03 * (-(x - 0.4).powi(2)).exp() - 0.02 * x * (-x * x / 3.0).exp())
        .collect();
    Profile::analytic(g, p).with_v(v).unwrap()
}

#[test]
fn trace_of_extension_is_the_profile() {
    let p = PhysParams::desk();
    let g = Grid1D::new(200.0 * p.zeta(), 4096).unwrap();
    let pr = bumped(&g, p);
    let f = extend_to_half_planes(&pr, &YLevels::new(vec![1e-13], true).unwrap());
    let u = pr.u1();
    let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (j, uj) in u.iter().enumerate() {
        assert!((f.u1_plus[[0, j]] - uj).abs() <= 1e-10 * scale);
        assert!((f.u1_minus[[0, j]] + uj).abs() <= 1e-10 * scale);
    }
}

/// Largest |div sigma| by central differences at y0, relative to the largest stress there.
fn divergence_defect(n: usize) -> f64 {
    let p = PhysParams::desk();
    let g = Grid1D::new(30.0, n).unwrap();
    let pr = bumped(&g, p);
    let h = g.spacing();
    let y0 = 0.5;
    let sf = stress_field(&pr, &YLevels::new(vec![y0 - h, y0, y0 + h], true).unwrap());
    let s = &sf.upper;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for j in 1..n - 1 {
        if g.node(j).abs() > 5.0 {
            continue;
        }
        let dx = |a: &ndarray::Array2<f64>| (a[[1, j + 1]] - a[[1, j - 1]]) / (2.0 * h);
        let dy = |a: &ndarray::Array2<f64>| (a[[2, j]] - a[[0, j]]) / (2.0 * h);
        worst = worst.max((dx(&s.s11) + dy(&s.s12)).abs()).max((dx(&s.s12) + dy(&s.s22)).abs());
        scale = scale.max(s.s11[[1, j]].abs()).max(s.s12[[1, j]].abs());
    }
    worst / scale
}

#[test]
fn stress_is_divergence_free_under_refinement() {
    let e: Vec<f64> = [512, 1024, 2048].iter().map(|&n| divergence_defect(n)).collect();
    for w in e.windows(2) {
        assert!((w[0] / w[1]).log2() > 1.8, "{e:?}");
    }
    assert!(e[2] < 1e-3, "{e:?}");
}

#[test]
fn odd_profile_has_no_shear_on_the_axis() {
    let p = PhysParams::desk();
    let g = Grid1D::new(200.0 * p.zeta(), 4096).unwrap();
    let v: Vec<f64> = g.nodes().iter().map(|x| -0.02 * x * (-x * x).exp()).collect();
    let pr = Profile::analytic(&g, p).with_v(v).unwrap();
    let sf = stress_field(&pr, &YLevels::geometric(0.05, 20.0, 12, true).unwrap());
    let j0 = g.len() / 2;
    for i in 0..12 {
        assert!(sf.upper.s12[[i, j0]].abs() < 1e-12);
        assert!(sf.lower.s12[[i, j0]].abs() < 1e-12);
    }
}
