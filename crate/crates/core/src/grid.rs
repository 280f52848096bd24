use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, PnError, Result};

/// Uniform periodic grid on [-L, L) with cached FFT plans.
#[derive(Clone)]
pub struct Grid1D {
    l: f64,
    n: usize,
    h: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid1D")
            .field("l", &self.l)
            .field("n", &self.n)
            .field("h", &self.h)
            .finish()
    }
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.n == other.n
    }
}

pub fn build_grid(l: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(l, n)
}

impl Grid1D {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(invalid("L", format!("must be positive, got {l}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(invalid("N", format!("must be even and at least 4, got {n}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            l,
            n,
            h: 2.0 * l / n as f64,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn half_length(&self) -> f64 {
        self.l
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.l + j as f64 * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Signed mode number of FFT slot `k` (Nyquist reported as -N/2).
    pub fn mode(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    pub fn is_nyquist(&self, k: usize) -> bool {
        k == self.n / 2
    }

    /// Wavenumber of FFT slot `k`.
    pub fn xi(&self, k: usize) -> f64 {
        PI * self.mode(k) as f64 / self.l
    }

    /// Wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.xi(k)).collect()
    }

    /// Wavenumbers sorted ascending, -N/2 .. N/2-1.
    pub fn wavenumbers_sorted(&self) -> Vec<f64> {
        let n = self.n as i64;
        (-n / 2..n / 2).map(|m| PI * m as f64 / self.l).collect()
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(PnError::LengthMismatch {
                expected: self.n,
                actual: len,
            });
        }
        Ok(())
    }

    /// Raw unnormalized FFT of real samples.
    pub(crate) fn fft(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse FFT including the 1/N factor.
    pub(crate) fn ifft(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        self.inv.process(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= s);
        buf
    }

    /// Inverse FFT keeping the real part.
    pub(crate) fn ifft_real(&self, buf: Vec<Complex64>) -> Vec<f64> {
        self.ifft(buf).into_iter().map(|c| c.re).collect()
    }

    /// Coefficients c_k = h sum_j u_j exp(-i xi_k x_j), FFT order.
    pub fn forward(&self, f: &[f64]) -> Result<SpectralField> {
        self.check_len(f.len())?;
        let raw = self.fft(f);
        let coeffs = raw
            .into_iter()
            .enumerate()
            .map(|(k, c)| c * (self.h * alt(k)))
            .collect();
        Ok(SpectralField {
            grid: self.clone(),
            coeffs,
        })
    }
}

fn alt(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Fourier coefficients of a field on a grid, in FFT order.
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: Grid1D,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: &Grid1D, coeffs: Vec<Complex64>) -> Result<Self> {
        grid.check_len(coeffs.len())?;
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Inverse of `Grid1D::forward`; the imaginary part is dropped.
    pub fn to_samples(&self) -> Vec<f64> {
        let g = &self.grid;
        let buf = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (alt(k) / g.h))
            .collect();
        g.ifft_real(buf)
    }

    /// Largest violation of c_{-k} = conj(c_k) over non-Nyquist modes.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let n = self.coeffs.len();
        (1..n / 2)
            .map(|k| (self.coeffs[k] - self.coeffs[n - k].conj()).norm())
            .fold(0.0, f64::max)
    }
}
