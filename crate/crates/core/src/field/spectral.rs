//! Fourier transforms and spectral derivatives on periodic grids.
//!
//! Transforms are complex-to-complex with plans cached per length. Forward
//! transforms are unnormalized; inverses carry the 1/N factor. First
//! derivatives zero the Nyquist mode, and every spectral symbol in the crate
//! is built from these derivative wavenumbers, so all spectral operators are
//! exact gradients of the matching discrete energies.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::Array2;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::PeriodicGrid;

static PLANS: Lazy<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = PLANS.lock().unwrap();
    cache
        .entry((len, forward))
        .or_insert_with(|| {
            FftPlanner::new().plan_fft(
                len,
                if forward {
                    FftDirection::Forward
                } else {
                    FftDirection::Inverse
                },
            )
        })
        .clone()
}

/// Transform every row (contiguous axis) in place.
fn fft_rows(data: &mut Array2<Complex64>, forward: bool) {
    let len = data.ncols();
    if len == 1 {
        return;
    }
    let fft = plan(len, forward);
    let scratch_len = fft.get_inplace_scratch_len();
    data.as_slice_mut()
        .expect("row-major layout")
        .par_chunks_exact_mut(len)
        .for_each_init(
            || vec![Complex64::default(); scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
}

fn transpose(data: &Array2<Complex64>) -> Array2<Complex64> {
    let view = data.t();
    let mut out = Array2::default(view.raw_dim());
    out.assign(&view);
    out
}

fn fft2_inplace(data: &mut Array2<Complex64>, forward: bool) {
    fft_rows(data, forward);
    if data.nrows() > 1 {
        let mut t = transpose(data);
        fft_rows(&mut t, forward);
        *data = transpose(&t);
    }
}

/// Forward 2D transform of a real field (unnormalized).
pub fn forward(field: &Array2<f64>) -> Array2<Complex64> {
    let mut buf = field.mapv(|v| Complex64::new(v, 0.0));
    fft2_inplace(&mut buf, true);
    buf
}

/// Inverse 2D transform, returning the real part scaled by 1/N.
pub fn inverse(hat: &Array2<Complex64>) -> Array2<f64> {
    let mut buf = hat.clone();
    fft2_inplace(&mut buf, false);
    let scale = 1.0 / (buf.len() as f64);
    buf.mapv(|v| v.re * scale)
}

/// Derivative wavenumbers 2 pi k / l with the Nyquist mode zeroed.
pub fn deriv_wavenumbers(n: usize, l: f64) -> Vec<f64> {
    let base = 2.0 * std::f64::consts::PI / l;
    (0..n)
        .map(|i| {
            if 2 * i == n {
                0.0
            } else if 2 * i < n {
                base * i as f64
            } else {
                base * (i as f64 - n as f64)
            }
        })
        .collect()
}

/// Spectral partial derivatives of a real field.
pub fn gradient(grid: &PeriodicGrid, field: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let kx = deriv_wavenumbers(grid.nx(), grid.lx());
    let ky = deriv_wavenumbers(grid.ny(), grid.ly());
    let hat = forward(field);
    let mut dx_hat = hat.clone();
    let mut dy_hat = hat;
    for ((iy, ix), v) in dx_hat.indexed_iter_mut() {
        *v *= Complex64::new(0.0, kx[ix]);
        let _ = iy;
    }
    for ((iy, _ix), v) in dy_hat.indexed_iter_mut() {
        *v *= Complex64::new(0.0, ky[iy]);
    }
    (inverse(&dx_hat), inverse(&dy_hat))
}

/// Spectral divergence of a vector field.
pub fn divergence(grid: &PeriodicGrid, vx: &Array2<f64>, vy: &Array2<f64>) -> Array2<f64> {
    let kx = deriv_wavenumbers(grid.nx(), grid.lx());
    let ky = deriv_wavenumbers(grid.ny(), grid.ly());
    let mut hx = forward(vx);
    let hy = forward(vy);
    for ((iy, ix), v) in hx.indexed_iter_mut() {
        *v = Complex64::new(0.0, kx[ix]) * *v + Complex64::new(0.0, ky[iy]) * hy[[iy, ix]];
    }
    inverse(&hx)
}

/// Leray projection onto divergence-free fields: v -> v - k (k.v)/|k|^2.
pub fn project_divergence_free(grid: &PeriodicGrid, vx: &mut Array2<f64>, vy: &mut Array2<f64>) {
    let kx = deriv_wavenumbers(grid.nx(), grid.lx());
    let ky = deriv_wavenumbers(grid.ny(), grid.ly());
    let mut hx = forward(vx);
    let mut hy = forward(vy);
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let k2 = kx[ix] * kx[ix] + ky[iy] * ky[iy];
            if k2 == 0.0 {
                continue;
            }
            let kdotv = kx[ix] * hx[[iy, ix]] + ky[iy] * hy[[iy, ix]];
            hx[[iy, ix]] -= kx[ix] * kdotv / k2;
            hy[[iy, ix]] -= ky[iy] * kdotv / k2;
        }
    }
    *vx = inverse(&hx);
    *vy = inverse(&hy);
}

/// Solve the periodic Poisson problem lap(u) = rhs with mean-zero u.
pub fn solve_poisson(grid: &PeriodicGrid, rhs: &Array2<f64>) -> Array2<f64> {
    let kx = deriv_wavenumbers(grid.nx(), grid.lx());
    let ky = deriv_wavenumbers(grid.ny(), grid.ly());
    let mut hat = forward(rhs);
    for ((iy, ix), v) in hat.indexed_iter_mut() {
        let k2 = kx[ix] * kx[ix] + ky[iy] * ky[iy];
        if k2 == 0.0 {
            *v = Complex64::default();
        } else {
            *v /= -k2;
        }
    }
    inverse(&hat)
}
