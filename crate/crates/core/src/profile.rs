//! 1D transition profile between the isotropic and nematic wells, and the
//! interface constants derived from it.
//!
//! With equal-depth wells (b^2 = 27ac) the scalar profile solves
//!
//! ```text
//! -kappa s'' + 2c s (s+ - s)(s+ - 2s) = 0,   s(-inf) = 0,  s(+inf) = s+,
//! ```
//!
//! where kappa = 6 L1 + L2. Multiplying by s' gives the first integral
//! (kappa/2) s'^2 = W(s) = c s^2 (s+ - s)^2, which reduces the boundary-value
//! problem to the monotone first-order equation s' = sqrt(2 W(s)/kappa). The
//! primary solver integrates that equation from the centering condition
//! s(0) = s+/2 with RK4; an independent damped-Newton relaxation of the
//! discretized second-order equation serves as a cross-check, so a quadrature
//! bias near the degenerate endpoints cannot go unnoticed.

use nalgebra::{Matrix3, Vector3};

use crate::error::{CoreError, Result};
use crate::qtensor::{critical_points, BulkParams};

/// Relative tolerance on b^2/(27ac) - 1 below which the wells count as equal.
pub const EQUAL_WELL_TOL: f64 = 1e-10;

/// Solved transition profile on a uniform grid.
#[derive(Clone, Debug)]
pub struct ProfileSolution {
    /// Uniform grid on [-Z, Z] (inner variable).
    pub z: Vec<f64>,
    /// Order parameter values, nondecreasing, s(0) = s+/2.
    pub s: Vec<f64>,
    /// First-integral derivative values s'(z).
    pub s_prime: Vec<f64>,
    pub params: BulkParams,
    /// Elastic scaling kappa = 6 L1 + L2 used in the solve.
    pub kappa: f64,
    pub s_plus: f64,
}

/// Interface constants for a profile and a given director.
#[derive(Clone, Debug)]
pub struct InterfaceConstants {
    /// Surface tension (2/3) int s'^2 dz; coefficient of the curvature in the
    /// leading-order pressure jump.
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Mobility scalar int |dQ/dz|^2 dz = (2/3) int s'^2 dz.
    pub c_mobility: f64,
    /// Mobility tensor A = L1 c I + (L2+L3) int s'^2 ((1/3) nn + (1/9) I).
    pub a_mobility: Matrix3<f64>,
}

impl ProfileSolution {
    pub fn n_points(&self) -> usize {
        self.z.len()
    }

    pub fn h(&self) -> f64 {
        self.z[1] - self.z[0]
    }

    /// Exponential decay rate at both wells, m = s+ sqrt(2c/kappa).
    pub fn decay_rate(&self) -> f64 {
        self.s_plus * (2.0 * self.params.c / self.kappa).sqrt()
    }

    /// Build a profile from raw samples. No invariants are checked; intended
    /// for synthetic diagnostics input.
    pub fn from_samples(
        z: Vec<f64>,
        s: Vec<f64>,
        s_prime: Vec<f64>,
        params: BulkParams,
        kappa: f64,
        s_plus: f64,
    ) -> Self {
        assert_eq!(z.len(), s.len());
        assert_eq!(z.len(), s_prime.len());
        ProfileSolution {
            z,
            s,
            s_prime,
            params,
            kappa,
            s_plus,
        }
    }

    /// Cubic Hermite interpolation of s at an arbitrary inner coordinate,
    /// saturating to the exact limits outside the solved window.
    pub fn sample(&self, z: f64) -> f64 {
        let h = self.h();
        if z <= self.z[0] {
            return 0.0;
        }
        if z >= *self.z.last().unwrap() {
            return self.s_plus;
        }
        let t = (z - self.z[0]) / h;
        let i = (t.floor() as usize).min(self.z.len() - 2);
        let u = t - i as f64;
        let (s0, s1) = (self.s[i], self.s[i + 1]);
        let (d0, d1) = (self.s_prime[i] * h, self.s_prime[i + 1] * h);
        let u2 = u * u;
        let u3 = u2 * u;
        s0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + d0 * (u3 - 2.0 * u2 + u)
            + s1 * (-2.0 * u3 + 3.0 * u2)
            + d1 * (u3 - u2)
    }
}

fn check_equal_wells(p: &BulkParams) -> Result<f64> {
    let ratio = p.well_ratio();
    if (ratio - 1.0).abs() > EQUAL_WELL_TOL {
        return Err(CoreError::UnequalWells { ratio });
    }
    critical_points(p)
        .s_plus()
        .ok_or(CoreError::UnequalWells { ratio })
}

/// W'(s) = 2c (s+^2 s - 3 s+ s^2 + 2 s^3), the nonlinearity of the profile
/// equation written with the equal-well factorization.
fn w_prime(s: f64, c: f64, s_plus: f64) -> f64 {
    2.0 * c * s * (s_plus - s) * (s_plus - 2.0 * s)
}

fn w_second(s: f64, c: f64, s_plus: f64) -> f64 {
    2.0 * c * (s_plus * s_plus - 6.0 * s_plus * s + 6.0 * s * s)
}

/// Default half-width of the solve window: the profile decays like
/// exp(-m |z|), so 25 decay lengths push the endpoint error below 1e-10.
pub fn default_z_span(p: &BulkParams, kappa: f64) -> Result<f64> {
    let s_plus = check_equal_wells(p)?;
    let m = s_plus * (2.0 * p.c / kappa).sqrt();
    Ok(25.0 / m)
}

/// Default node count: 64 nodes per decay length over the default window.
pub const DEFAULT_N_POINTS: usize = 3201;

/// Solve the profile equation on [-Z, Z] with n_points nodes (forced odd so
/// that z = 0 is a node). Primary method: RK4 on the first-integral equation
/// s' = sqrt(2 W(s)/kappa) outward from s(0) = s+/2. The result is
/// cross-checked against a damped-Newton relaxation of the discretized
/// second-order equation started from an independent initial guess.
pub fn solve_profile(
    p: &BulkParams,
    kappa: f64,
    z_span: f64,
    n_points: usize,
) -> Result<ProfileSolution> {
    assert!(kappa > 0.0, "kappa must be positive");
    let s_plus = check_equal_wells(p)?;
    let n = if n_points % 2 == 0 {
        n_points + 1
    } else {
        n_points
    };
    let n = n.max(9);
    let h = 2.0 * z_span / (n - 1) as f64;
    let z: Vec<f64> = (0..n).map(|i| -z_span + i as f64 * h).collect();

    let g = |s: f64| -> f64 {
        let w = p.c * s * s * (s_plus - s) * (s_plus - s);
        (2.0 * w.max(0.0) / kappa).sqrt()
    };
    let rk4 = |s: f64, step: f64| -> f64 {
        let k1 = g(s);
        let k2 = g(s + 0.5 * step * k1);
        let k3 = g(s + 0.5 * step * k2);
        let k4 = g(s + step * k3);
        (s + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).clamp(0.0, s_plus)
    };

    let mid = (n - 1) / 2;
    let mut s = vec![0.0; n];
    s[mid] = 0.5 * s_plus;
    for i in mid..n - 1 {
        s[i + 1] = rk4(s[i], h);
    }
    for i in (1..=mid).rev() {
        s[i - 1] = rk4(s[i], -h);
    }
    let s_prime: Vec<f64> = s.iter().map(|&v| g(v)).collect();

    let prof = ProfileSolution {
        z,
        s,
        s_prime,
        params: *p,
        kappa,
        s_plus,
    };

    // Independent relaxation of the second-order equation; disagreement
    // signals a quadrature bias near the degenerate endpoints.
    let relaxed = relax_profile(p, kappa, z_span, n)?;
    let max_diff = prof
        .s
        .iter()
        .zip(relaxed.s.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / s_plus;
    // The relaxation solves the h^2-accurate discrete equations, so the two
    // routes agree only to the discretization error of the coarser one.
    let fd_err = 0.5 * (prof.decay_rate() * h).powi(2);
    if max_diff > 1e-6 + 10.0 * fd_err {
        return Err(CoreError::ProfileIteration {
            residual: max_diff,
            iterations: 0,
        });
    }

    Ok(prof)
}

/// Convenience wrapper with the default window and node count.
pub fn solve_profile_default(p: &BulkParams, kappa: f64) -> Result<ProfileSolution> {
    let z_span = default_z_span(p, kappa)?;
    solve_profile(p, kappa, z_span, DEFAULT_N_POINTS)
}

/// Damped-Newton relaxation of the discretized boundary-value problem
/// -kappa D2 s + W'(s) = 0 with Dirichlet values 0 and s+. Returns the
/// relaxed profile recentered so that s crosses s+/2 at z = 0 (the Dirichlet
/// problem pins the translation only through the window ends).
pub fn relax_profile(
    p: &BulkParams,
    kappa: f64,
    z_span: f64,
    n_points: usize,
) -> Result<ProfileSolution> {
    let s_plus = check_equal_wells(p)?;
    let n = n_points.max(9);
    let h = 2.0 * z_span / (n - 1) as f64;
    let z: Vec<f64> = (0..n).map(|i| -z_span + i as f64 * h).collect();
    let m = s_plus * (2.0 * p.c / kappa).sqrt();

    // Independent initial guess: a tanh ramp of roughly the right width.
    let mut s: Vec<f64> = z
        .iter()
        .map(|&zi| 0.5 * s_plus * (1.0 + (0.5 * m * zi).tanh()))
        .collect();
    s[0] = 0.0;
    s[n - 1] = s_plus;

    let residual = |s: &[f64], out: &mut [f64]| {
        for i in 1..n - 1 {
            out[i] = -kappa * (s[i + 1] - 2.0 * s[i] + s[i - 1]) / (h * h)
                + w_prime(s[i], p.c, s_plus);
        }
    };
    let norm = |f: &[f64]| f[1..n - 1].iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut f = vec![0.0; n];
    residual(&s, &mut f);
    let mut fnorm = norm(&f);
    let tol = 1e-11 * kappa * s_plus / (h * h) * (n as f64).sqrt();

    let max_iter = 100;
    for iter in 0..max_iter {
        if fnorm <= tol {
            break;
        }
        if iter == max_iter - 1 {
            return Err(CoreError::ProfileIteration {
                residual: fnorm,
                iterations: iter,
            });
        }
        // Tridiagonal Newton system, Thomas algorithm.
        let mut diag: Vec<f64> = (1..n - 1)
            .map(|i| 2.0 * kappa / (h * h) + w_second(s[i], p.c, s_plus))
            .collect();
        let off = -kappa / (h * h);
        let mut rhs: Vec<f64> = f[1..n - 1].to_vec();
        let m_sys = n - 2;
        for i in 1..m_sys {
            let w = off / diag[i - 1];
            diag[i] -= w * off;
            rhs[i] -= w * rhs[i - 1];
        }
        let mut delta = vec![0.0; m_sys];
        delta[m_sys - 1] = rhs[m_sys - 1] / diag[m_sys - 1];
        for i in (0..m_sys - 1).rev() {
            delta[i] = (rhs[i] - off * delta[i + 1]) / diag[i];
        }

        // Backtracking damping on the residual norm.
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = s
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if i == 0 || i == n - 1 {
                        v
                    } else {
                        v - lambda * delta[i - 1]
                    }
                })
                .collect();
            let mut ft = vec![0.0; n];
            residual(&trial, &mut ft);
            let fn_trial = norm(&ft);
            if fn_trial <= (1.0 - 0.25 * lambda) * fnorm || lambda < 1e-4 {
                s = trial;
                f = ft;
                fnorm = fn_trial;
                break;
            }
            lambda *= 0.5;
        }
    }

    // Recenter to s(0) = s+/2 by locating the crossing and shifting the grid.
    let half = 0.5 * s_plus;
    let k = (0..n - 1)
        .find(|&i| s[i] <= half && s[i + 1] > half)
        .unwrap_or((n - 1) / 2);
    let frac = (half - s[k]) / (s[k + 1] - s[k]);
    let z_half = z[k] + frac * h;
    let z_centered: Vec<f64> = z.iter().map(|&zi| zi - z_half).collect();

    let s_prime: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                (s[1] - s[0]) / h
            } else if i == n - 1 {
                (s[n - 1] - s[n - 2]) / h
            } else {
                (s[i + 1] - s[i - 1]) / (2.0 * h)
            }
        })
        .collect();

    Ok(ProfileSolution {
        z: z_centered,
        s,
        s_prime,
        params: *p,
        kappa,
        s_plus,
    })
}

/// Trapezoid rule over the profile grid plus analytic tail corrections.
/// The integrands used here are quadratic in the deviation from the exact
/// well limits, so they decay like exp(-2m |z -+ Z|) beyond the window and
/// the two tails contribute value_at_end / (2m) each.
fn integrate(prof: &ProfileSolution, values: &[f64]) -> f64 {
    let h = prof.h();
    let n = values.len();
    let m = prof.decay_rate();
    let interior: f64 = values[1..n - 1].iter().sum();
    h * (interior + 0.5 * (values[0] + values[n - 1]))
        + (values[0] + values[n - 1]) / (2.0 * m)
}

/// int s'^2 dz by composite quadrature on the profile grid, tail-corrected.
pub fn integral_sprime_sq(prof: &ProfileSolution) -> f64 {
    let vals: Vec<f64> = prof.s_prime.iter().map(|v| v * v).collect();
    integrate(prof, &vals)
}

/// Surface tension sigma = (2/3) int s'^2 dz = int |dQ/dz|^2 dz for the
/// uniaxial ansatz.
pub fn surface_tension(prof: &ProfileSolution) -> f64 {
    2.0 / 3.0 * integral_sprime_sq(prof)
}

/// The two energy-asymptotics constants
/// alpha = (1/9) int (c s^2 (s+ - s)^2 + (1/2)(6 L1 + L2) s'^2) dz and
/// beta = (L2/6) int s'^2 dz.
/// Errors if 6 L1 + L2 does not match the kappa the profile was solved with.
pub fn alpha_beta(prof: &ProfileSolution, l1: f64, l2: f64) -> Result<(f64, f64)> {
    let kappa = 6.0 * l1 + l2;
    if (kappa - prof.kappa).abs() > 1e-12 * prof.kappa.max(1.0) {
        return Err(CoreError::KappaMismatch {
            given: kappa,
            expected: prof.kappa,
        });
    }
    let c = prof.params.c;
    let sp = prof.s_plus;
    let pot: Vec<f64> = prof
        .s
        .iter()
        .map(|&s| c * s * s * (sp - s) * (sp - s))
        .collect();
    let int_pot = integrate(prof, &pot);
    let int_sq = integral_sprime_sq(prof);
    let alpha = (int_pot + 0.5 * kappa * int_sq) / 9.0;
    let beta = l2 / 6.0 * int_sq;
    Ok((alpha, beta))
}

/// All interface constants for a given director n and elastic constants.
pub fn mobility_tensors(
    prof: &ProfileSolution,
    n: &Vector3<f64>,
    l1: f64,
    l2: f64,
    l3: f64,
) -> Result<InterfaceConstants> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(CoreError::NonUnitDirector { norm });
    }
    let int_sq = integral_sprime_sq(prof);
    let c_mobility = 2.0 / 3.0 * int_sq;
    // dQ/dz = s'(z)(nn - I/3), so the z-quadrature of the matrix square is
    // int s'^2 (nn - I/3)^2 = int s'^2 ((1/3) nn + (1/9) I).
    let nn = n * n.transpose();
    let a_mobility = Matrix3::identity() * (l1 * c_mobility)
        + (nn / 3.0 + Matrix3::identity() / 9.0) * ((l2 + l3) * int_sq);
    let (alpha, beta) = alpha_beta(prof, l1, l2)?;
    Ok(InterfaceConstants {
        sigma: surface_tension(prof),
        alpha,
        beta,
        c_mobility,
        a_mobility,
    })
}

/// Max-norm residual of -(6 L1 + L2) s'' + 2c(s+^2 s - 3 s+ s^2 + 2 s^3) over
/// interior grid nodes, with s'' from fourth-order central differences of the
/// stored values (an evaluation route independent of the first integral).
pub fn euler_lagrange_residual(prof: &ProfileSolution, l1: f64, l2: f64) -> f64 {
    let kappa = 6.0 * l1 + l2;
    let h2 = prof.h() * prof.h();
    let s = &prof.s;
    let n = s.len();
    let mut worst = 0.0f64;
    for i in 2..n - 2 {
        let d2 = (-s[i + 2] + 16.0 * s[i + 1] - 30.0 * s[i] + 16.0 * s[i - 1] - s[i - 2])
            / (12.0 * h2);
        let r = -kappa * d2 + w_prime(s[i], prof.params.c, prof.s_plus);
        worst = worst.max(r.abs());
    }
    worst
}
