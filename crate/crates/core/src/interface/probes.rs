//! Jump and boundary-layer probes evaluated on extracted interface curves.

use nalgebra::{Matrix3, Vector3};
use ndarray::Array2;

use super::InterfaceCurve;
use crate::error::{CoreError, Result};
use crate::field::{PeriodicGrid, PressureField, QField, VelocityField};
use crate::profile::{integral_sprime_sq, ProfileSolution};
use crate::qtensor::{director, QTensor};

/// Periodic bilinear interpolation.
pub fn sample_bilinear(grid: &PeriodicGrid, field: &Array2<f64>, x: f64, y: f64) -> f64 {
    let h = grid.h();
    let (nx, ny) = (grid.nx(), grid.ny());
    let fx = (x / h).rem_euclid(nx as f64);
    let fy = (y / h).rem_euclid(ny as f64);
    let ix = fx.floor() as usize % nx;
    let iy = fy.floor() as usize % ny;
    let tx = fx - fx.floor();
    let ty = fy - fy.floor();
    let xp = (ix + 1) % nx;
    let yp = (iy + 1) % ny;
    field[[iy, ix]] * (1.0 - tx) * (1.0 - ty)
        + field[[iy, xp]] * tx * (1.0 - ty)
        + field[[yp, ix]] * (1.0 - tx) * ty
        + field[[yp, xp]] * tx * ty
}

fn sample_q(q: &QField, x: f64, y: f64) -> QTensor {
    QTensor::from_components(std::array::from_fn(|c| {
        sample_bilinear(&q.grid, q.component(c), x, y)
    }))
}

fn check_probe_length(grid: &PeriodicGrid, delta: f64) -> Result<()> {
    if 2.0 * delta > 0.5 * grid.lx().min(grid.ly()) {
        return Err(CoreError::ProbeTooLong { delta });
    }
    Ok(())
}

/// Mean jump of a scalar field across the curve: average over curve samples
/// of f(x + delta nu) - f(x - delta nu) (nematic side minus isotropic side).
pub fn scalar_jump_probe(
    grid: &PeriodicGrid,
    field: &Array2<f64>,
    curve: &InterfaceCurve,
    delta: f64,
) -> Result<f64> {
    check_probe_length(grid, delta)?;
    let mut acc = 0.0;
    for (p, nu) in curve.points.iter().zip(curve.normals.iter()) {
        let plus = sample_bilinear(grid, field, p[0] + delta * nu[0], p[1] + delta * nu[1]);
        let minus = sample_bilinear(grid, field, p[0] - delta * nu[0], p[1] - delta * nu[1]);
        acc += plus - minus;
    }
    Ok(acc / curve.points.len() as f64)
}

/// Mean pressure jump across the curve, nematic side minus isotropic side.
pub fn pressure_jump_probe(
    p: &PressureField,
    curve: &InterfaceCurve,
    delta: f64,
) -> Result<f64> {
    scalar_jump_probe(&p.grid, &p.p, curve, delta)
}

#[derive(Clone, Copy, Debug)]
pub struct VelocityJump {
    /// Componentwise mean jump vector.
    pub mean: [f64; 2],
    /// Mean of |v(x+delta nu) - v(x-delta nu)| over samples; robust against
    /// sign cancellation along a closed curve.
    pub mean_abs: f64,
}

pub fn velocity_jump_probe(
    v: &VelocityField,
    curve: &InterfaceCurve,
    delta: f64,
) -> Result<VelocityJump> {
    check_probe_length(&v.grid, delta)?;
    let mut mean = [0.0f64; 2];
    let mut mean_abs = 0.0f64;
    for (p, nu) in curve.points.iter().zip(curve.normals.iter()) {
        let (xp, yp) = (p[0] + delta * nu[0], p[1] + delta * nu[1]);
        let (xm, ym) = (p[0] - delta * nu[0], p[1] - delta * nu[1]);
        let jx = sample_bilinear(&v.grid, &v.vx, xp, yp) - sample_bilinear(&v.grid, &v.vx, xm, ym);
        let jy = sample_bilinear(&v.grid, &v.vy, xp, yp) - sample_bilinear(&v.grid, &v.vy, xm, ym);
        mean[0] += jx;
        mean[1] += jy;
        mean_abs += (jx * jx + jy * jy).sqrt();
    }
    let n = curve.points.len() as f64;
    Ok(VelocityJump {
        mean: [mean[0] / n, mean[1] / n],
        mean_abs: mean_abs / n,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct NeumannDefect {
    /// Band-averaged |nu . grad n|^2.
    pub mean_sq: f64,
    pub samples: usize,
    /// Samples skipped because the order parameter was too small or the
    /// director degenerate there.
    pub excluded: usize,
}

/// Band-averaged squared normal derivative of the director on the nematic
/// side, sampled at distances 3 eps .. 6 eps from the curve. Samples with
/// order parameter below 0.8 s+ or a degenerate director are excluded.
pub fn neumann_defect(
    q: &QField,
    curve: &InterfaceCurve,
    eps: f64,
    s_plus: f64,
) -> Result<NeumannDefect> {
    check_probe_length(&q.grid, 6.0 * eps)?;
    let h = q.grid.h();
    let stride = (curve.points.len() / 256).max(1);
    let reference = Vector3::x();
    let mut acc = 0.0;
    let mut samples = 0usize;
    let mut excluded = 0usize;
    for k in (0..curve.points.len()).step_by(stride) {
        let p = curve.points[k];
        let nu = curve.normals[k];
        for level in 0..4 {
            let d = eps * (3.0 + level as f64);
            let at = |dist: f64| -> Option<Vector3<f64>> {
                let t = sample_q(q, p[0] + dist * nu[0], p[1] + dist * nu[1]);
                if t.order_parameter() < 0.8 * s_plus {
                    return None;
                }
                director(&t, &reference).ok()
            };
            match (at(d + h), at(d - h)) {
                (Some(np), Some(mut nm)) => {
                    if np.dot(&nm) < 0.0 {
                        nm = -nm;
                    }
                    let deriv = (np - nm) / (2.0 * h);
                    acc += deriv.norm_squared();
                    samples += 1;
                }
                _ => excluded += 1,
            }
        }
    }
    Ok(NeumannDefect {
        mean_sq: if samples > 0 { acc / samples as f64 } else { 0.0 },
        samples,
        excluded,
    })
}

/// Flow-coupling correction to the interface normal velocity:
/// (xi/2) (int s'^2 dz)^-1 int s'(1 + s - 2 s^2) D(z) : nn dz,
/// with D sampled on the profile grid. Requires the normalized profile
/// (s+ = 1), which the 1 + s - 2 s^2 weight assumes.
pub fn mcf_xi_correction(
    prof: &ProfileSolution,
    xi: f64,
    d_samples: &[Matrix3<f64>],
    n: &Vector3<f64>,
) -> f64 {
    assert!(
        (prof.s_plus - 1.0).abs() <= 1e-8,
        "xi correction assumes the normalized profile s+ = 1"
    );
    assert_eq!(d_samples.len(), prof.n_points());
    if xi == 0.0 {
        return 0.0;
    }
    let h = prof.h();
    let mut acc = 0.0;
    for i in 0..prof.n_points() {
        let s = prof.s[i];
        let sp = prof.s_prime[i];
        let dnn = (n.transpose() * d_samples[i] * n)[(0, 0)];
        let w = if i == 0 || i == prof.n_points() - 1 {
            0.5
        } else {
            1.0
        };
        acc += w * sp * (1.0 + s - 2.0 * s * s) * dnn;
    }
    let integral = acc * h;
    0.5 * xi * integral / integral_sprime_sq(prof)
}
