//! Elastic extension of a slip-plane trace into both half-planes.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, PnError, Result};
use crate::grid::Grid1D;
use crate::params::PhysParams;
use crate::profile::Profile;
use crate::seminorm::{hs_seminorm, SeminormMode};

/// Positive y sample levels; `mirrored` requests the matching -y levels too.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YLevels {
    values: Vec<f64>,
    pub mirrored: bool,
}

impl YLevels {
    pub fn new(values: Vec<f64>, mirrored: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("ylevels", "empty"));
        }
        if !(values[0] > 0.0) {
            return Err(invalid("ylevels", "smallest level must be positive"));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("ylevels", "levels must be strictly increasing"));
        }
        Ok(Self { values, mirrored })
    }

    /// `count` levels spaced geometrically from y_min to y_max.
    pub fn geometric(y_min: f64, y_max: f64, count: usize, mirrored: bool) -> Result<Self> {
        if !(y_min > 0.0 && y_max > y_min) || count < 2 {
            return Err(invalid("ylevels", "need 0 < y_min < y_max and at least two levels"));
        }
        let r = (y_max / y_min).ln() / (count - 1) as f64;
        let mut v: Vec<f64> = (0..count).map(|i| y_min * (r * i as f64).exp()).collect();
        v[count - 1] = y_max;
        Self::new(v, mirrored)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Per-mode y-profiles of an extension. With t = |xi| y the Fourier factors are
/// u1^ = c g1(t), u2^ = -i sgn(xi) c g2(t).
pub trait ModeProfile: Sync {
    /// (g1, g1', g2, g2') at t >= 0; g1(0) must be 1.
    fn eval(&self, t: f64) -> [f64; 4];
}

/// The elastic extension: g1 = (1 - a t) e^{-t}, g2 = a((1-2nu) + t) e^{-t}, a = 1/(2-2nu).
#[derive(Debug, Clone, Copy)]
pub struct ElasticProfile {
    pub nu: f64,
}

impl ModeProfile for ElasticProfile {
    fn eval(&self, t: f64) -> [f64; 4] {
        let a = 1.0 / (2.0 - 2.0 * self.nu);
        let e = (-t).exp();
        let c = 1.0 - 2.0 * self.nu;
        [
            (1.0 - a * t) * e,
            -(1.0 + a - a * t) * e,
            a * (c + t) * e,
            a * (1.0 - c - t) * e,
        ]
    }
}

/// Spectral displacement and strain on one level above the plane.
#[derive(Debug, Clone)]
pub struct LevelFields {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub e11: Vec<f64>,
    pub e22: Vec<f64>,
    pub e12: Vec<f64>,
}

/// Fields at height y >= 0 generated by trace coefficients (raw FFT of samples).
/// The Nyquist mode keeps only the real part of each factor.
pub fn spectral_level<M: ModeProfile>(grid: &Grid1D, raw: &[Complex64], y: f64, prof: &M) -> LevelFields {
    let n = grid.len();
    let mut bufs: [Vec<Complex64>; 5] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]);
    for k in 0..n {
        let xi = grid.xi(k);
        let a = xi.abs();
        let s = if xi > 0.0 {
            1.0
        } else if xi < 0.0 {
            -1.0
        } else {
            0.0
        };
        let [g1, g1p, g2, g2p] = prof.eval(a * y);
        let i = Complex64::new(0.0, 1.0);
        let mut f = [
            Complex64::new(g1, 0.0),
            -i * s * g2,
            i * xi * g1,
            -i * s * a * g2p,
            Complex64::new(0.5 * a * (g1p + g2), 0.0),
        ];
        if grid.is_nyquist(k) {
            f.iter_mut().for_each(|c| *c = Complex64::new(c.re, 0.0));
        }
        for (b, f) in bufs.iter_mut().zip(f) {
            b[k] = raw[k] * f;
        }
    }
    let [u1, u2, e11, e22, e12] = bufs.map(|b| grid.ifft_real(b));
    LevelFields { u1, u2, e11, e22, e12 }
}

/// Closed-form displacement and stress at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointFields {
    pub u1: f64,
    pub u2: f64,
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
    pub s33: f64,
}

/// Closed-form fields of the arctan dislocation of width `zeta`. `upper` selects the
/// half-plane when y = 0; otherwise the sign of y decides.
pub fn background_point(params: &PhysParams, zeta: f64, x: f64, y: f64, upper: bool) -> PointFields {
    let up = if y == 0.0 { upper } else { y > 0.0 };
    let z = if up { zeta } else { -zeta };
    let (b, nu) = (params.b(), params.nu());
    let a = y + z;
    let r2 = x * x + a * a;
    let r4 = r2 * r2;
    let k = b / (2.0 * PI);
    let u1 = k * (-(x / a).atan() + x * y / (2.0 * (1.0 - nu) * r2));
    let u2 = -k
        * ((1.0 - 2.0 * nu) / (4.0 * (1.0 - nu)) * r2.ln()
            + (x * x - y * y + z * z) / (4.0 * (1.0 - nu) * r2));
    let p = params.g() * b / (2.0 * PI * (1.0 - nu));
    PointFields {
        u1,
        u2,
        s11: p * (-(3.0 * y + 2.0 * z) / r2 + 2.0 * y * a * a / r4),
        s12: p * (x / r2 - 2.0 * x * y * a / r4),
        s22: p * (-y / r2 + 2.0 * x * x * y / r4),
        s33: p * (-2.0 * nu * a / r2),
    }
}

/// Closed-form fields at the given points for the width zeta = d/(2(1-nu)).
/// y = 0 is read as the limit from above.
pub fn analytic_fields(params: &PhysParams, points: &[(f64, f64)]) -> Vec<PointFields> {
    points
        .iter()
        .map(|&(x, y)| background_point(params, params.zeta(), x, y, true))
        .collect()
}

/// Displacements on levels (rows) by nodes (columns). The `minus` arrays hold
/// values at -y for each level y.
#[derive(Debug, Clone)]
pub struct HalfPlaneField {
    pub grid: Grid1D,
    pub ylevels: YLevels,
    pub u1_plus: Array2<f64>,
    pub u2_plus: Array2<f64>,
    pub u1_minus: Array2<f64>,
    pub u2_minus: Array2<f64>,
}

impl HalfPlaneField {
    /// Largest deviation from u1+(x,y) = -u1-(x,-y), u2+(x,y) = u2-(x,-y).
    pub fn mirror_defect(&self) -> f64 {
        let a = (&self.u1_plus + &self.u1_minus).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let b = (&self.u2_plus - &self.u2_minus).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        a.max(b)
    }
}

#[derive(Debug, Clone)]
pub struct StressComponents {
    pub s11: Array2<f64>,
    pub s12: Array2<f64>,
    pub s22: Array2<f64>,
    pub s33: Array2<f64>,
}

impl StressComponents {
    fn zeros(rows: usize, cols: usize) -> Self {
        let z = Array2::zeros((rows, cols));
        Self {
            s11: z.clone(),
            s12: z.clone(),
            s22: z.clone(),
            s33: z,
        }
    }

    /// Plane-strain strains (e11, e12, e22) recovered from the stresses.
    pub fn strains(&self, params: &PhysParams) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
        let (g2, nu) = (2.0 * params.g(), params.nu());
        let tr = &self.s11 + &self.s22;
        let e11 = (&self.s11 - &(&tr * nu)) / g2;
        let e22 = (&self.s22 - &(&tr * nu)) / g2;
        let e12 = &self.s12 / g2;
        (e11, e12, e22)
    }
}

#[derive(Debug, Clone)]
pub struct StressField {
    pub grid: Grid1D,
    pub ylevels: YLevels,
    pub upper: StressComponents,
    /// Values at -y for each level y.
    pub lower: StressComponents,
}

/// Stresses from strains with eps33 = 0.
pub(crate) fn stress_from_strain(params: &PhysParams, e11: f64, e22: f64, e12: f64) -> [f64; 4] {
    let g = params.g();
    let lam = params.lame_lambda();
    let tr = e11 + e22;
    [2.0 * g * e11 + lam * tr, 2.0 * g * e12, 2.0 * g * e22 + lam * tr, lam * tr]
}

struct LevelOut {
    u1: Vec<f64>,
    u2: Vec<f64>,
    s: [Vec<f64>; 4],
}

fn compute_levels(p: &Profile, ylevels: &[f64], with_stress: bool) -> Vec<LevelOut> {
    let grid = p.grid();
    let params = *p.params();
    let raw = grid.fft(p.v());
    let prof = ElasticProfile { nu: params.nu() };
    let x = grid.nodes();
    ylevels
        .par_iter()
        .map(|&y| {
            let lf = spectral_level(grid, &raw, y, &prof);
            let n = grid.len();
            let mut u1 = lf.u1;
            let mut u2 = lf.u2;
            let mut s: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; if with_stress { n } else { 0 }]);
            for j in 0..n {
                if with_stress {
                    let st = stress_from_strain(&params, lf.e11[j], lf.e22[j], lf.e12[j]);
                    for c in 0..4 {
                        s[c][j] = st[c];
                    }
                }
                if let Some(bg) = p.background() {
                    let f = background_point(&params, bg.zeta_bg, x[j] - bg.x0, y, true);
                    u1[j] += f.u1;
                    u2[j] += f.u2;
                    if with_stress {
                        s[0][j] += f.s11;
                        s[1][j] += f.s12;
                        s[2][j] += f.s22;
                        s[3][j] += f.s33;
                    }
                }
            }
            LevelOut { u1, u2, s }
        })
        .collect()
}

fn stack(rows: Vec<&Vec<f64>>, cols: usize) -> Array2<f64> {
    let mut a = Array2::zeros((rows.len(), cols));
    for (mut r, src) in a.axis_iter_mut(Axis(0)).zip(rows) {
        r.iter_mut().zip(src).for_each(|(d, s)| *d = *s);
    }
    a
}

/// Displacement fields in both half-planes; the lower half-plane is the mirror image.
pub fn extend_to_half_planes(p: &Profile, yl: &YLevels) -> HalfPlaneField {
    let n = p.grid().len();
    let levels = compute_levels(p, yl.values(), false);
    let u1_plus = stack(levels.iter().map(|l| &l.u1).collect(), n);
    let u2_plus = stack(levels.iter().map(|l| &l.u2).collect(), n);
    HalfPlaneField {
        grid: p.grid().clone(),
        ylevels: yl.clone(),
        u1_minus: -&u1_plus,
        u2_minus: u2_plus.clone(),
        u1_plus,
        u2_plus,
    }
}

/// Stress tensor on the levels, assembled per Fourier mode with exact y-derivatives.
pub fn stress_field(p: &Profile, yl: &YLevels) -> StressField {
    let n = p.grid().len();
    let levels = compute_levels(p, yl.values(), true);
    let comp = |c: usize| stack(levels.iter().map(|l| &l.s[c]).collect(), n);
    let upper = StressComponents {
        s11: comp(0),
        s12: comp(1),
        s22: comp(2),
        s33: comp(3),
    };
    let mut lower = StressComponents::zeros(yl.values().len(), n);
    lower.s11 = -&upper.s11;
    lower.s12 = upper.s12.clone();
    lower.s22 = -&upper.s22;
    lower.s33 = -&upper.s33;
    StressField {
        grid: p.grid().clone(),
        ylevels: yl.clone(),
        upper,
        lower,
    }
}

/// Traction on the slip plane: sigma12 = -(G/(1-nu)) (-d_xx)^{1/2} u1, sigma22 = 0.
pub fn dtn_traction(p: &Profile) -> (Vec<f64>, Vec<f64>) {
    let k = p.params().kappa();
    let s12 = p.half_laplacian().iter().map(|h| -k * h).collect();
    (s12, vec![0.0; p.grid().len()])
}

/// Traction and sigma22 on the plane from the extension formulas (y -> 0+).
pub fn trace_stress(p: &Profile) -> (Vec<f64>, Vec<f64>) {
    let mut out = compute_levels(p, &[0.0], true);
    let l = out.pop().expect("one level");
    let [_, s12, s22, _] = l.s;
    (s12, s22)
}

/// Closed-form y-integral over (0, inf) of the squared m-th y-derivative factor of
/// both displacement components, for a unit coefficient at wavenumber |xi| = a,
/// divided by a^{2m}.
pub fn mode_y_integral(a: f64, m: usize, nu: f64) -> f64 {
    let al = 1.0 / (2.0 - 2.0 * nu);
    let quad = |p: f64, q: f64| p * p / 2.0 + p * q / 2.0 + q * q / 4.0;
    let mf = m as f64;
    (quad(1.0 + al * mf, -al) + al * al * quad(1.0 - 2.0 * nu - mf, 1.0)) / a
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaSeminorm {
    /// Squared seminorm over both half-planes.
    pub value: f64,
    /// Squared trace seminorm of order s - 1/2.
    pub trace: f64,
    /// sqrt(value / trace).
    pub ratio: f64,
}

/// ||(-d_xx)^{(s-m)/2} d_y^m u||^2 over both half-planes for the elastic extension of p.
pub fn lambda_seminorm(p: &Profile, s: f64, m: usize) -> Result<LambdaSeminorm> {
    if !(s >= 1.0) {
        return Err(invalid("s", format!("must be at least 1, got {s}")));
    }
    if m as f64 > s.floor() {
        return Err(PnError::LambdaOrder { s, m });
    }
    let trace = hs_seminorm(p, s - 0.5, SeminormMode::Analytic)?;
    // per mode: |xi|^{2(s-m)} |c|^2 a^{2m} I_m(a) = |xi|^{2s-1} |c|^2 (a I_m(a)); doubled for the mirror
    let factor = 2.0 * mode_y_integral(1.0, m, p.params().nu());
    let value = factor * trace;
    let ratio = if trace > 0.0 { (value / trace).sqrt() } else { 0.0 };
    Ok(LambdaSeminorm { value, trace, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::u_bg;
    use crate::quadrature::integrate_half_line;

    fn desk() -> (Grid1D, PhysParams) {
        let p = PhysParams::desk();
        (Grid1D::new(200.0 * p.zeta(), 4096).unwrap(), p)
    }

    #[test]
    fn ylevels_validation() {
        assert!(YLevels::new(vec![0.0, 1.0], false).is_err());
        assert!(YLevels::new(vec![1.0, 1.0], false).is_err());
        let g = YLevels::geometric(0.1, 10.0, 5, true).unwrap();
        assert!((g.values()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_value_at_core_scale() {
        let p = PhysParams::desk();
        let z = p.zeta();
        let f = analytic_fields(&p, &[(z, z)])[0];
        let want = (-(0.5f64).atan() + 1.0 / 7.5) / (2.0 * PI);
        assert!((f.u1 - want).abs() < 1e-15);
        assert!((f.u1 + 0.052570).abs() < 2e-6);
        let f = analytic_fields(&p, &[(0.0, z)])[0];
        assert!((f.s22 + 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(f.u1, 0.0);
        let f = analytic_fields(&p, &[(z, 0.0)])[0];
        assert!((f.s12 - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((f.u1 - u_bg(z, 1.0, z)).abs() < 1e-15);
    }

    #[test]
    fn lower_side_is_mirror_of_upper() {
        let p = PhysParams::desk();
        for &(x, y) in &[(0.3, 0.7), (-1.2, 0.1), (2.0, 3.0)] {
            let u = background_point(&p, 0.9, x, y, true);
            let l = background_point(&p, 0.9, x, -y, true);
            assert!((u.u1 + l.u1).abs() < 1e-15);
            assert!((u.u2 - l.u2).abs() < 1e-15);
            assert!((u.s11 + l.s11).abs() < 1e-15);
            assert!((u.s12 - l.s12).abs() < 1e-15);
            assert!((u.s22 + l.s22).abs() < 1e-15);
            assert!((u.s33 + l.s33).abs() < 1e-15);
        }
    }

    #[test]
    fn trace_is_reproduced() {
        let (g, p) = desk();
        let v: Vec<f64> = g.nodes().iter().map(|x| 0.01 * (-x * x).exp()).collect();
        let pr = Profile::new(&g, p, Profile::analytic(&g, p).background(), v).unwrap();
        let lf = spectral_level(&g, &g.fft(pr.v()), 0.0, &ElasticProfile { nu: p.nu() });
        for (a, b) in lf.u1.iter().zip(pr.v()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn single_mode_root() {
        let (g, p) = desk();
        let xi1 = g.xi(40);
        let v: Vec<f64> = g.nodes().iter().map(|x| (xi1 * x).cos()).collect();
        let pr = Profile::new(&g, p, None, v).unwrap();
        let y = (2.0 - 2.0 * p.nu()) / xi1;
        let f = extend_to_half_planes(&pr, &YLevels::new(vec![y], false).unwrap());
        assert!(f.u1_plus.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn spectral_traction_matches_dtn() {
        let (g, p) = desk();
        let v: Vec<f64> = g.nodes().iter().map(|x| 0.02 * x * (-x * x / 4.0).exp()).collect();
        let pr = Profile::new(&g, p, Profile::analytic(&g, p).background(), v).unwrap();
        let (s12, s22) = trace_stress(&pr);
        let (d12, d22) = dtn_traction(&pr);
        for j in 0..g.len() {
            assert!((s12[j] - d12[j]).abs() < 1e-12);
            assert!(s22[j].abs() < 1e-12);
            assert_eq!(d22[j], 0.0);
        }
        let j = g.len() / 2 + (p.zeta() / g.spacing()).round() as usize;
        let pa = Profile::analytic(&g, p);
        let x = g.node(j);
        let want = p.kappa() * p.b() * x / (2.0 * PI * (x * x + p.zeta() * p.zeta()));
        assert!((dtn_traction(&pa).0[j] - want).abs() < 1e-14);
    }

    #[test]
    fn plane_strain_identity() {
        let (g, p) = desk();
        let v: Vec<f64> = g.nodes().iter().map(|x| 0.02 * (-x * x / 3.0).exp()).collect();
        let pr = Profile::new(&g, p, Profile::analytic(&g, p).background(), v).unwrap();
        let sf = stress_field(&pr, &YLevels::geometric(0.05, 5.0, 7, true).unwrap());
        for c in [&sf.upper, &sf.lower] {
            let max = c.s33.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let d = &c.s33 - &((&c.s11 + &c.s22) * p.nu());
            assert!(d.iter().all(|v| v.abs() <= 1e-10 * max));
        }
    }

    #[test]
    fn mode_integral_matches_quadrature() {
        let nu = 0.25;
        let prof = ElasticProfile { nu };
        for a in [0.3, 1.0, 4.0] {
            for m in 0..=1usize {
                let num = integrate_half_line(
                    |y| {
                        let [g1, g1p, g2, g2p] = prof.eval(a * y);
                        let (f1, f2) = if m == 0 { (g1, g2) } else { (g1p, g2p) };
                        f1 * f1 + f2 * f2
                    },
                    1e-15,
                    1e-12,
                );
                assert!((num / mode_y_integral(a, m, nu) - 1.0).abs() < 1e-9, "a={a} m={m}");
            }
        }
    }

    #[test]
    fn lambda_seminorm_orders() {
        let (g, p) = desk();
        let pr = Profile::analytic(&g, p);
        assert!(matches!(lambda_seminorm(&pr, 1.5, 2), Err(PnError::LambdaOrder { .. })));
        let z = Profile::new(&g, p, None, vec![0.0; g.len()]).unwrap();
        assert_eq!(lambda_seminorm(&z, 1.0, 0).unwrap().value, 0.0);
        for m in 0..=1 {
            let l = lambda_seminorm(&pr, 1.5, m).unwrap();
            assert!(l.value.is_finite() && l.value > 0.0);
        }
    }
}
