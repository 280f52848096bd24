//! Misfit potentials W(u1) with period b/2 in the slip-plane displacement.

use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

use crate::error::{PnError, Result};
use crate::params::PhysParams;

pub const MIN_SAMPLES_PER_PERIOD: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// (G b^2 / 4 pi^2 d)(1 + cos(4 pi u / b)).
    Frenkel(PhysParams),
    /// Periodic cubic spline through sampled values, shifted so W(b/4) = 0.
    Table(TablePotential),
    Zero,
    /// k u^2 / 2. Not periodic; used to isolate the linear part of the dynamics.
    Harmonic { stiffness: f64 },
}

impl PotentialSpec {
    pub fn frenkel(params: PhysParams) -> Self {
        Self::Frenkel(params)
    }

    pub fn value(&self, u: f64) -> f64 {
        match self {
            Self::Frenkel(p) => {
                let amp = p.g() * p.b() * p.b() / (4.0 * PI * PI * p.d());
                amp * (1.0 + (4.0 * PI * u / p.b()).cos())
            }
            Self::Table(t) => t.eval3(u).0 - t.offset,
            Self::Zero => 0.0,
            Self::Harmonic { stiffness } => 0.5 * stiffness * u * u,
        }
    }

    /// W'(u).
    pub fn force(&self, u: f64) -> f64 {
        match self {
            Self::Frenkel(p) => -p.g() * p.b() / (PI * p.d()) * (4.0 * PI * u / p.b()).sin(),
            Self::Table(t) => t.eval3(u).1,
            Self::Zero => 0.0,
            Self::Harmonic { stiffness } => stiffness * u,
        }
    }

    /// W''(u).
    pub fn stiffness(&self, u: f64) -> f64 {
        match self {
            Self::Frenkel(p) => -4.0 * p.g() / p.d() * (4.0 * PI * u / p.b()).cos(),
            Self::Table(t) => t.eval3(u).2,
            Self::Zero => 0.0,
            Self::Harmonic { stiffness } => *stiffness,
        }
    }

    pub fn eval(&self, u: f64, order: usize) -> Result<f64> {
        match order {
            0 => Ok(self.value(u)),
            1 => Ok(self.force(u)),
            2 => Ok(self.stiffness(u)),
            k => Err(PnError::DerivativeOrder(k)),
        }
    }

    /// Period in u, if the potential is periodic.
    pub fn period(&self) -> Option<f64> {
        match self {
            Self::Frenkel(p) => Some(0.5 * p.b()),
            Self::Table(t) => Some(t.period),
            Self::Zero => Some(f64::INFINITY),
            Self::Harmonic { .. } => None,
        }
    }

    /// Whether W(u) = W(-u) for all u; checked by sampling for tables.
    pub fn is_even(&self) -> bool {
        match self {
            Self::Frenkel(_) | Self::Zero | Self::Harmonic { .. } => true,
            Self::Table(t) => (0..257).all(|i| {
                let u = t.period * i as f64 / 256.0;
                (self.value(u) - self.value(-u)).abs() <= 1e-12 * (1.0 + self.value(u).abs())
            }),
        }
    }
}

/// Periodic cubic spline potential.
#[derive(Debug, Clone, PartialEq)]
pub struct TablePotential {
    period: f64,
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
    offset: f64,
}

impl TablePotential {
    /// Build from (u, W) pairs. Samples are folded into one period b/2.
    pub fn new(b: f64, samples: &[(f64, f64)]) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(PnError::PotentialTable(format!("invalid Burgers vector {b}")));
        }
        let period = 0.5 * b;
        let mut pts: Vec<(f64, f64)> = samples
            .iter()
            .map(|&(u, w)| (u.rem_euclid(period), w))
            .collect();
        if pts.iter().any(|(u, w)| !u.is_finite() || !w.is_finite()) {
            return Err(PnError::PotentialTable("non-finite sample".into()));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let eps = 1e-12 * period;
        let mut knots: Vec<f64> = Vec::with_capacity(pts.len());
        let mut values: Vec<f64> = Vec::with_capacity(pts.len());
        for (u, w) in pts {
            if knots.last().is_some_and(|&l| u - l <= eps) {
                continue;
            }
            knots.push(u);
            values.push(w);
        }
        if knots.len() > 1 && knots[0] + period - knots[knots.len() - 1] <= eps {
            knots.pop();
            values.pop();
        }
        if knots.len() < MIN_SAMPLES_PER_PERIOD {
            return Err(PnError::PotentialTable(format!(
                "{} distinct samples per period, need at least {MIN_SAMPLES_PER_PERIOD}",
                knots.len()
            )));
        }
        let second = periodic_spline_second(&knots, &values, period);
        let mut t = Self {
            period,
            knots,
            values,
            second,
            offset: 0.0,
        };
        t.offset = t.eval3(0.25 * b).0;
        Ok(t)
    }

    /// Load a two-column CSV with header `u,W`.
    pub fn from_csv(path: &Path, b: f64) -> Result<Self> {
        let io = |e: csv::Error| PnError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(io)?;
        let mut samples = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(io)?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| PnError::PotentialTable(format!("bad row {:?}", rec)))
            };
            samples.push((parse(0)?, parse(1)?));
        }
        Self::new(b, &samples)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Raw spline value and first two derivatives.
    fn eval3(&self, u: f64) -> (f64, f64, f64) {
        let n = self.knots.len();
        let t0 = self.knots[0];
        let tau = (u - t0).rem_euclid(self.period) + t0;
        let i = self.knots.partition_point(|&k| k <= tau).saturating_sub(1);
        let (ti1, yi1, mi1) = if i + 1 < n {
            (self.knots[i + 1], self.values[i + 1], self.second[i + 1])
        } else {
            (t0 + self.period, self.values[0], self.second[0])
        };
        let (ti, yi, mi) = (self.knots[i], self.values[i], self.second[i]);
        let h = ti1 - ti;
        let a = (ti1 - tau) / h;
        let bb = 1.0 - a;
        let w = a * yi + bb * yi1 + ((a * a * a - a) * mi + (bb * bb * bb - bb) * mi1) * h * h / 6.0;
        let dw = (yi1 - yi) / h - (3.0 * a * a - 1.0) / 6.0 * h * mi + (3.0 * bb * bb - 1.0) / 6.0 * h * mi1;
        let d2w = a * mi + bb * mi1;
        (w, dw, d2w)
    }
}

/// Second derivatives of the periodic cubic spline (cyclic tridiagonal solve).
fn periodic_spline_second(t: &[f64], y: &[f64], period: f64) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { t[i + 1] - t[i] } else { t[0] + period - t[n - 1] })
        .collect();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut r = vec![0.0; n];
    for i in 0..n {
        let im = (i + n - 1) % n;
        let ip = (i + 1) % n;
        a[i] = h[im];
        b[i] = 2.0 * (h[im] + h[i]);
        c[i] = h[i];
        r[i] = 6.0 * ((y[ip] - y[i]) / h[i] - (y[i] - y[im]) / h[im]);
    }
    let alpha = h[n - 1];
    let beta = h[n - 1];
    let gamma = -b[0];
    let mut bb = b.clone();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;
    let x = tridiag(&a, &bb, &c, &r);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = tridiag(&a, &bb, &c, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(x, z)| x - fact * z).collect()
}

fn tridiag(a: &[f64], b: &[f64], c: &[f64], r: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut bet = b[0];
    x[0] = r[0] / bet;
    for i in 1..n {
        cp[i] = c[i - 1] / bet;
        bet = b[i] - a[i] * cp[i];
        x[i] = (r[i] - a[i] * x[i - 1]) / bet;
    }
    for i in (0..n - 1).rev() {
        x[i] -= cp[i + 1] * x[i + 1];
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialReport {
    pub interior_above_endpoints: bool,
    pub positive_curvature: bool,
    pub endpoints_equal: bool,
    pub pass: bool,
    /// min over interior samples of W(u) - max(W(b/4), W(-b/4)).
    pub min_interior_excess: f64,
}

/// Check the structural assumptions on W over [-b/4, b/4]: strict interior
/// excess over the endpoint wells, positive curvature there, equal well depths.
pub fn validate_potential(spec: &PotentialSpec, b: f64) -> PotentialReport {
    let (lo, hi) = (-0.25 * b, 0.25 * b);
    let (wl, wr) = (spec.value(lo), spec.value(hi));
    let wmax = wl.max(wr);
    let samples = 10_000;
    let min_interior_excess = (1..=samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples + 1) as f64)
        .map(|u| spec.value(u) - wmax)
        .fold(f64::INFINITY, f64::min);
    let interior = min_interior_excess > 0.0;
    let curvature = spec.stiffness(lo) > 0.0 && spec.stiffness(hi) > 0.0;
    let endpoints = (wl - wr).abs() <= 1e-12;
    PotentialReport {
        interior_above_endpoints: interior,
        positive_curvature: curvature,
        endpoints_equal: endpoints,
        pass: interior && curvature && endpoints,
        min_interior_excess,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frenkel() -> PotentialSpec {
        PotentialSpec::frenkel(PhysParams::new(1.0, 0.25, 1.0, 1.0).unwrap())
    }

    fn frenkel_table(per_period: usize, sign: f64) -> PotentialSpec {
        let f = frenkel();
        let samples: Vec<(f64, f64)> = (0..per_period)
            .map(|i| {
                let u = 0.5 * i as f64 / per_period as f64;
                (u, sign * f.value(u))
            })
            .collect();
        PotentialSpec::Table(TablePotential::new(1.0, &samples).unwrap())
    }

    #[test]
    fn frenkel_values() {
        let f = frenkel();
        assert!(f.eval(0.25, 0).unwrap().abs() < 1e-17);
        assert!((f.eval(0.0, 0).unwrap() - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        assert!((f.eval(0.125, 1).unwrap() + 1.0 / PI).abs() < 1e-15);
        assert!((f.eval(0.25, 2).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(f.eval(0.1, 3), Err(PnError::DerivativeOrder(3)));
    }

    #[test]
    fn finite_difference_order() {
        let f = frenkel();
        let u = 0.0731;
        let err = |h: f64| {
            let d1 = (f.value(u + h) - f.value(u - h)) / (2.0 * h);
            let d2 = (f.force(u + h) - f.force(u - h)) / (2.0 * h);
            ((d1 - f.force(u)).abs(), (d2 - f.stiffness(u)).abs())
        };
        let (a1, a2) = err(1e-3);
        let (b1, b2) = err(1e-4);
        assert!((a1 / b1).log10() >= 1.9);
        assert!((a2 / b2).log10() >= 1.9);
    }

    #[test]
    fn frenkel_passes_validation() {
        let r = validate_potential(&frenkel(), 1.0);
        assert!(r.pass, "{r:?}");
        assert!(r.min_interior_excess > 1e-10);
    }

    #[test]
    fn inverted_well_fails_interior() {
        let r = validate_potential(&frenkel_table(64, -1.0), 1.0);
        assert!(!r.interior_above_endpoints);
        assert!(!r.pass);
    }

    #[test]
    fn table_of_frenkel_passes_and_interpolates() {
        let t = frenkel_table(64, 1.0);
        let r = validate_potential(&t, 1.0);
        assert!(r.pass, "{r:?}");
        let f = frenkel();
        for i in 0..100 {
            let u = -0.3 + 0.6 * i as f64 / 99.0;
            assert!((t.value(u) - f.value(u)).abs() < 1e-5);
            assert!((t.force(u) - f.force(u)).abs() < 1e-3);
        }
        assert!(t.is_even());
    }

    #[test]
    fn too_few_samples() {
        let s: Vec<(f64, f64)> = (0..7).map(|i| (i as f64 / 14.0, 0.0)).collect();
        assert!(matches!(TablePotential::new(1.0, &s), Err(PnError::PotentialTable(_))));
    }

    #[test]
    fn duplicate_period_endpoint_is_folded() {
        let f = frenkel();
        let s: Vec<(f64, f64)> = (0..=16).map(|i| {
            let u = -0.25 + 0.5 * i as f64 / 16.0;
            (u, f.value(u))
        }).collect();
        assert!(TablePotential::new(1.0, &s).is_ok());
    }

    #[test]
    fn zero_potential_fails_interior() {
        assert!(!validate_potential(&PotentialSpec::Zero, 1.0).pass);
    }

    proptest! {
        #[test]
        fn periodic(u in -3.0f64..3.0) {
            let f = frenkel();
            prop_assert!((f.value(u) - f.value(u + 0.5)).abs() <= 1e-10);
            let t = frenkel_table(32, 1.0);
            prop_assert!((t.value(u) - t.value(u + 0.5)).abs() <= 1e-10);
        }

        #[test]
        fn frenkel_nonnegative_min_at_wells(u in -0.2499f64..0.2499) {
            prop_assert!(frenkel().value(u) > 0.0);
        }
    }

    #[test]
    fn interior_min_strictly_positive() {
        let f = frenkel();
        let worst = (1..=10_000)
            .map(|i| -0.25 + 0.5 * i as f64 / 10_001.0)
            .map(|u| f.value(u))
            .fold(f64::INFINITY, f64::min);
        assert!(worst > 1e-10);
    }
}
