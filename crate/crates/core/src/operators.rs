//! Diagonal Fourier multipliers on a periodic grid.

use rustfft::num_complex::Complex64;

use crate::error::Result;
use crate::grid::Grid1D;

/// Apply the multiplier `m(k, xi)` (FFT slot and wavenumber) and return the real part.
pub fn apply_multiplier<M>(grid: &Grid1D, f: &[f64], m: M) -> Result<Vec<f64>>
where
    M: Fn(usize, f64) -> Complex64,
{
    grid.check_len(f.len())?;
    let mut buf = grid.fft(f);
    for (k, c) in buf.iter_mut().enumerate() {
        *c *= m(k, grid.xi(k));
    }
    Ok(grid.ifft_real(buf))
}

/// (-d^2/dx^2)^{1/2}: multiplier |xi|. The Nyquist mode is kept.
pub fn apply_half_laplacian(grid: &Grid1D, f: &[f64]) -> Result<Vec<f64>> {
    apply_multiplier(grid, f, |_, xi| Complex64::new(xi.abs(), 0.0))
}

/// Hilbert transform: multiplier -i sgn(xi), zero and Nyquist modes removed.
pub fn apply_hilbert(grid: &Grid1D, f: &[f64]) -> Result<Vec<f64>> {
    apply_multiplier(grid, f, |k, xi| {
        if grid.is_nyquist(k) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -xi.signum() * (xi != 0.0) as i32 as f64)
        }
    })
}

/// Spectral derivative: multiplier i xi, Nyquist removed.
pub fn derivative(grid: &Grid1D, f: &[f64]) -> Result<Vec<f64>> {
    apply_multiplier(grid, f, |k, xi| {
        if grid.is_nyquist(k) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, xi)
        }
    })
}

/// Samples of f(x - a) by a Fourier phase shift. The Nyquist mode keeps only
/// the real part of its phase so the output stays real.
pub fn fourier_shift(grid: &Grid1D, f: &[f64], a: f64) -> Result<Vec<f64>> {
    apply_multiplier(grid, f, |k, xi| {
        if grid.is_nyquist(k) {
            Complex64::new((xi * a).cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, -xi * a)
        }
    })
}

/// Trigonometric interpolant of periodic samples evaluated at x.
pub fn interpolate(grid: &Grid1D, f: &[f64], x: f64) -> Result<f64> {
    grid.check_len(f.len())?;
    let c = grid.fft(f);
    let s = x + grid.half_length();
    let sum: f64 = c
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let ph = grid.xi(k) * s;
            if grid.is_nyquist(k) {
                c.re * ph.cos()
            } else {
                c.re * ph.cos() - c.im * ph.sin()
            }
        })
        .sum();
    Ok(sum / grid.len() as f64)
}

/// Discrete inner product h * sum f_j g_j.
pub fn inner(grid: &Grid1D, f: &[f64], g: &[f64]) -> f64 {
    grid.spacing() * f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>()
}
