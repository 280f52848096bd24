use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::Grid1D;
use crate::operators::{apply_half_laplacian, derivative, fourier_shift};
use crate::params::PhysParams;

pub const DEFAULT_TAIL_TOL: f64 = 1e-3;

/// -(b/2pi) arctan(x/zeta).
pub fn u_bg(x: f64, b: f64, zeta: f64) -> f64 {
    -b / (2.0 * PI) * (x / zeta).atan()
}

pub fn u_bg_prime(x: f64, b: f64, zeta: f64) -> f64 {
    -b / (2.0 * PI) * zeta / (x * x + zeta * zeta)
}

/// Closed-form half-Laplacian of the arctan background.
pub fn half_laplacian_bg(x: f64, b: f64, zeta: f64) -> f64 {
    -b / (2.0 * PI) * x / (x * x + zeta * zeta)
}

/// Arctan background of width `zeta_bg` centred at `x0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Background {
    pub zeta_bg: f64,
    pub x0: f64,
}

/// Slip-plane displacement u1 = u_bg(x - x0; zeta_bg) + v(x).
#[derive(Debug, Clone)]
pub struct Profile {
    grid: Grid1D,
    params: PhysParams,
    background: Option<Background>,
    v: Vec<f64>,
}

impl Profile {
    pub fn new(
        grid: &Grid1D,
        params: PhysParams,
        background: Option<Background>,
        v: Vec<f64>,
    ) -> Result<Self> {
        grid.check_len(v.len())?;
        if let Some(bg) = background {
            if !(bg.zeta_bg.is_finite() && bg.zeta_bg > 0.0) {
                return Err(invalid("zeta_bg", format!("must be positive, got {}", bg.zeta_bg)));
            }
            if !bg.x0.is_finite() {
                return Err(invalid("x0", "must be finite"));
            }
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(invalid("v", "contains non-finite samples"));
        }
        Ok(Self {
            grid: grid.clone(),
            params,
            background,
            v,
        })
    }

    /// The closed-form solution: background width zeta, no correction.
    pub fn analytic(grid: &Grid1D, params: PhysParams) -> Self {
        Self::with_background(grid, params, params.zeta(), 0.0)
    }

    pub fn with_background(grid: &Grid1D, params: PhysParams, zeta_bg: f64, x0: f64) -> Self {
        Self::new(
            grid,
            params,
            Some(Background { zeta_bg, x0 }),
            vec![0.0; grid.len()],
        )
        .expect("valid background")
    }

    /// Split given u1 samples against a background.
    pub fn from_u1(
        grid: &Grid1D,
        params: PhysParams,
        background: Option<Background>,
        u1: &[f64],
    ) -> Result<Self> {
        grid.check_len(u1.len())?;
        let mut p = Self::new(grid, params, background, vec![0.0; grid.len()])?;
        let bg = p.bg_samples();
        p.v = u1.iter().zip(&bg).map(|(u, b)| u - b).collect();
        Ok(p)
    }

    /// -(b/4) tanh(x/zeta), a smooth initial guess with the right far field.
    pub fn tanh_guess(grid: &Grid1D, params: PhysParams) -> Self {
        let b = params.b();
        let z = params.zeta();
        let u1: Vec<f64> = grid.nodes().iter().map(|x| -0.25 * b * (x / z).tanh()).collect();
        Self::from_u1(
            grid,
            params,
            Some(Background { zeta_bg: z, x0: 0.0 }),
            &u1,
        )
        .expect("matching length")
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }
    pub fn params(&self) -> &PhysParams {
        &self.params
    }
    pub fn background(&self) -> Option<Background> {
        self.background
    }
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn with_v(&self, v: Vec<f64>) -> Result<Self> {
        Self::new(&self.grid, self.params, self.background, v)
    }

    pub fn bg_at(&self, x: f64) -> f64 {
        match self.background {
            Some(bg) => u_bg(x - bg.x0, self.params.b(), bg.zeta_bg),
            None => 0.0,
        }
    }

    pub fn bg_samples(&self) -> Vec<f64> {
        self.grid.nodes().iter().map(|&x| self.bg_at(x)).collect()
    }

    pub fn u1(&self) -> Vec<f64> {
        self.grid
            .nodes()
            .iter()
            .zip(&self.v)
            .map(|(&x, v)| self.bg_at(x) + v)
            .collect()
    }

    /// Background half-Laplacian in closed form (zero without a background).
    pub fn bg_half_laplacian(&self) -> Vec<f64> {
        let b = self.params.b();
        self.grid
            .nodes()
            .iter()
            .map(|&x| match self.background {
                Some(bg) => half_laplacian_bg(x - bg.x0, b, bg.zeta_bg),
                None => 0.0,
            })
            .collect()
    }

    /// (-d_xx)^{1/2} u1: closed form for the background plus spectral for v.
    pub fn half_laplacian(&self) -> Vec<f64> {
        let hv = apply_half_laplacian(&self.grid, &self.v).expect("matching length");
        self.bg_half_laplacian()
            .iter()
            .zip(&hv)
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn du1(&self) -> Vec<f64> {
        let dv = derivative(&self.grid, &self.v).expect("matching length");
        let b = self.params.b();
        self.grid
            .nodes()
            .iter()
            .zip(&dv)
            .map(|(&x, d)| {
                d + match self.background {
                    Some(bg) => u_bg_prime(x - bg.x0, b, bg.zeta_bg),
                    None => 0.0,
                }
            })
            .collect()
    }

    /// phi = 2 u1 + b/2.
    pub fn disregistry(&self) -> Vec<f64> {
        let hb = 0.5 * self.params.b();
        self.u1().iter().map(|u| 2.0 * u + hb).collect()
    }

    /// Largest end value of |v| in units of b when it exceeds `tail_tol`.
    pub fn tail_violation(&self, tail_tol: f64) -> Option<f64> {
        let n = self.v.len();
        let t = self.v[0].abs().max(self.v[n - 1].abs()) / self.params.b();
        (t > tail_tol).then_some(t)
    }

    /// The profile x -> u1(x - a).
    pub fn translated(&self, a: f64) -> Self {
        let v = fourier_shift(&self.grid, &self.v, a).expect("matching length");
        let background = self.background.map(|bg| Background {
            zeta_bg: bg.zeta_bg,
            x0: bg.x0 + a,
        });
        Self {
            grid: self.grid.clone(),
            params: self.params,
            background,
            v,
        }
    }
}
