//! Discrete differential and elastic operators on Q-tensor fields.
//!
//! Two backends share one algebraic core: the Fourier-spectral path (default,
//! used by the time steppers) and a second-order finite-difference path kept
//! for cross-validation. In both, the elastic operator is the exact gradient
//! of the matching discrete elastic energy, which is what guarantees energy
//! dissipation of the flows independently of truncation error.

use nalgebra::{Matrix3, Vector3};
use ndarray::Array2;
use num_complex::Complex64;

use super::spectral;
use super::{ElasticParams, PeriodicGrid, QField};
use crate::qtensor::{bulk_energy, bulk_force, BulkParams, QTensor};

/// Operator backend selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Discretization {
    Spectral,
    FiniteDifference,
}

/// 3x3 stress tensor per node, stored as nine planes.
#[derive(Clone, Debug)]
pub struct StressField {
    pub grid: PeriodicGrid,
    comps: [Array2<f64>; 9],
}

impl StressField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        StressField {
            grid,
            comps: std::array::from_fn(|_| grid.zeros()),
        }
    }

    pub fn get(&self, iy: usize, ix: usize) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| self.comps[3 * r + c][[iy, ix]])
    }

    pub fn set(&mut self, iy: usize, ix: usize, m: &Matrix3<f64>) {
        for r in 0..3 {
            for c in 0..3 {
                self.comps[3 * r + c][[iy, ix]] = m[(r, c)];
            }
        }
    }

    pub fn plane(&self, r: usize, c: usize) -> &Array2<f64> {
        &self.comps[3 * r + c]
    }

    pub fn add_assign(&mut self, other: &StressField) {
        for (a, b) in self.comps.iter_mut().zip(other.comps.iter()) {
            a.zip_mut_with(b, |x, y| *x += y);
        }
    }
}

/// T_kl = sum_m (H_{ml})_{km} + sum_m (H_{mk})_{lm} - (2/3) d_kl sum_ij (H_{ij})_{ij}
/// built from the three in-plane second-derivative matrices of Q. Feeding
/// H_ab = -k_a k_b Q_hat yields the Fourier symbol of the same expression.
fn mixed_term(hxx: &Matrix3<f64>, hxy: &Matrix3<f64>, hyy: &Matrix3<f64>) -> Matrix3<f64> {
    let h = |a: usize, b: usize| -> &Matrix3<f64> {
        match (a, b) {
            (0, 0) => hxx,
            (1, 1) => hyy,
            _ => hxy,
        }
    };
    let mut t1 = Matrix3::zeros();
    for k in 0..3 {
        for l in 0..2 {
            let mut acc = 0.0;
            for m in 0..2 {
                acc += h(m, l)[(k, m)];
            }
            t1[(k, l)] = acc;
        }
    }
    let trace_term = hxx[(0, 0)] + 2.0 * hxy[(0, 1)] + hyy[(1, 1)];
    t1 + t1.transpose() - Matrix3::identity() * (2.0 / 3.0 * trace_term)
}

fn centered_dx(grid: &PeriodicGrid, f: &Array2<f64>) -> Array2<f64> {
    let (ny, nx) = (grid.ny(), grid.nx());
    let inv2h = 1.0 / (2.0 * grid.h());
    let mut out = grid.zeros();
    for iy in 0..ny {
        for ix in 0..nx {
            let xp = f[[iy, (ix + 1) % nx]];
            let xm = f[[iy, (ix + nx - 1) % nx]];
            out[[iy, ix]] = (xp - xm) * inv2h;
        }
    }
    out
}

fn centered_dy(grid: &PeriodicGrid, f: &Array2<f64>) -> Array2<f64> {
    let (ny, nx) = (grid.ny(), grid.nx());
    if ny == 1 {
        return grid.zeros();
    }
    let inv2h = 1.0 / (2.0 * grid.h());
    let mut out = grid.zeros();
    for iy in 0..ny {
        let yp = (iy + 1) % ny;
        let ym = (iy + ny - 1) % ny;
        for ix in 0..nx {
            out[[iy, ix]] = (f[[yp, ix]] - f[[ym, ix]]) * inv2h;
        }
    }
    out
}

fn laplacian_5pt(grid: &PeriodicGrid, f: &Array2<f64>) -> Array2<f64> {
    let (ny, nx) = (grid.ny(), grid.nx());
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut out = grid.zeros();
    for iy in 0..ny {
        let yp = (iy + 1) % ny;
        let ym = (iy + ny - 1) % ny;
        for ix in 0..nx {
            let xp = (ix + 1) % nx;
            let xm = (ix + nx - 1) % nx;
            out[[iy, ix]] = (f[[iy, xp]] + f[[iy, xm]] + f[[yp, ix]] + f[[ym, ix]]
                - 4.0 * f[[iy, ix]])
                * inv_h2;
        }
    }
    out
}

/// Per-direction gradient of a Q field as two tensor fields (dQ/dx, dQ/dy).
fn q_gradient(q: &QField, disc: Discretization) -> (QField, QField) {
    let grid = q.grid;
    let mut gx = QField::zeros(grid);
    let mut gy = QField::zeros(grid);
    for c in 0..5 {
        let (dx, dy) = match disc {
            Discretization::Spectral => spectral::gradient(&grid, q.component(c)),
            Discretization::FiniteDifference => (
                centered_dx(&grid, q.component(c)),
                centered_dy(&grid, q.component(c)),
            ),
        };
        *gx.component_mut(c) = dx;
        *gy.component_mut(c) = dy;
    }
    (gx, gy)
}

/// Elastic operator
/// (LQ)_kl = L1 lap Q_kl + (1/2)(L2+L3)(Q_km,ml + Q_lm,mk - (2/3) d_kl Q_ij,ij).
/// Output is traceless symmetric nodewise.
pub fn elastic_operator(q: &QField, ep: &ElasticParams, disc: Discretization) -> QField {
    match disc {
        Discretization::Spectral => elastic_spectral(q, ep),
        Discretization::FiniteDifference => elastic_fd(q, ep),
    }
}

fn elastic_spectral(q: &QField, ep: &ElasticParams) -> QField {
    let grid = q.grid;
    let kx = spectral::deriv_wavenumbers(grid.nx(), grid.lx());
    let ky = spectral::deriv_wavenumbers(grid.ny(), grid.ly());
    let mixed = 0.5 * (ep.l2 + ep.l3);
    let mut hats: Vec<Array2<Complex64>> =
        (0..5).map(|c| spectral::forward(q.component(c))).collect();

    if mixed == 0.0 {
        for hat in hats.iter_mut() {
            for ((iy, ix), v) in hat.indexed_iter_mut() {
                let k2 = kx[ix] * kx[ix] + ky[iy] * ky[iy];
                *v *= -ep.l1 * k2;
            }
        }
    } else {
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let (kxv, kyv) = (kx[ix], ky[iy]);
                let k2 = kxv * kxv + kyv * kyv;
                let re = QTensor::from_components(std::array::from_fn(|c| hats[c][[iy, ix]].re));
                let im = QTensor::from_components(std::array::from_fn(|c| hats[c][[iy, ix]].im));
                let apply = |t: &QTensor| -> QTensor {
                    let m = t.to_matrix();
                    let out = m * (-ep.l1 * k2)
                        + mixed_term(
                            &(m * (-kxv * kxv)),
                            &(m * (-kxv * kyv)),
                            &(m * (-kyv * kyv)),
                        ) * mixed;
                    QTensor::from_matrix(&out)
                };
                let out_re = apply(&re).components();
                let out_im = apply(&im).components();
                for c in 0..5 {
                    hats[c][[iy, ix]] = Complex64::new(out_re[c], out_im[c]);
                }
            }
        }
    }

    let mut out = QField::zeros(grid);
    for c in 0..5 {
        *out.component_mut(c) = spectral::inverse(&hats[c]);
    }
    out
}

fn elastic_fd(q: &QField, ep: &ElasticParams) -> QField {
    let grid = q.grid;
    let mut out = QField::zeros(grid);
    for c in 0..5 {
        *out.component_mut(c) = laplacian_5pt(&grid, q.component(c)).mapv(|v| ep.l1 * v);
    }
    let mixed = 0.5 * (ep.l2 + ep.l3);
    if mixed != 0.0 {
        // Wide second derivatives from repeated centered differences keep the
        // operator the exact gradient of the centered-difference energy.
        let (gx, gy) = q_gradient(q, Discretization::FiniteDifference);
        let (hxx, hxy) = q_gradient(&gx, Discretization::FiniteDifference);
        let (_, hyy) = q_gradient(&gy, Discretization::FiniteDifference);
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let t = mixed_term(
                    &hxx.get(iy, ix).to_matrix(),
                    &hxy.get(iy, ix).to_matrix(),
                    &hyy.get(iy, ix).to_matrix(),
                );
                let add = QTensor::from_matrix(&t) * mixed;
                let cur = out.get(iy, ix);
                out.set(iy, ix, &(cur + add));
            }
        }
    }
    out
}

/// Nodewise bulk force as a field.
pub fn bulk_force_field(q: &QField, p: &BulkParams) -> QField {
    let grid = q.grid;
    let mut out = QField::zeros(grid);
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            out.set(iy, ix, &bulk_force(&q.get(iy, ix), p));
        }
    }
    out
}

/// Total free energy
/// (1/eps^2) sum F_b h^2
/// + (1/2) sum (L1 |grad Q|^2 + L2 Q_ij,j Q_ik,k + L3 Q_ij,k Q_ik,j) h^2.
pub fn total_energy(
    q: &QField,
    eps: f64,
    p: &BulkParams,
    ep: &ElasticParams,
    disc: Discretization,
) -> f64 {
    assert!(eps > 0.0);
    let grid = q.grid;
    let cell = grid.cell_measure();
    let mut bulk = 0.0;
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            bulk += bulk_energy(&q.get(iy, ix), p);
        }
    }
    bulk *= cell / (eps * eps);
    bulk + elastic_energy(q, ep, disc)
}

/// Elastic part of the energy in the backend-matched discrete form.
pub fn elastic_energy(q: &QField, ep: &ElasticParams, disc: Discretization) -> f64 {
    let grid = q.grid;
    let cell = grid.cell_measure();
    match disc {
        Discretization::Spectral => {
            // Parseval form: (cell/N) sum_k (1/2)[L1 k^2 |Qhat|^2
            //                                    + (L2+L3) |Qhat k|^2].
            let kx = spectral::deriv_wavenumbers(grid.nx(), grid.lx());
            let ky = spectral::deriv_wavenumbers(grid.ny(), grid.ly());
            let hats: Vec<Array2<Complex64>> =
                (0..5).map(|c| spectral::forward(q.component(c))).collect();
            let mut acc = 0.0;
            for iy in 0..grid.ny() {
                for ix in 0..grid.nx() {
                    let k2 = kx[ix] * kx[ix] + ky[iy] * ky[iy];
                    if k2 == 0.0 {
                        continue;
                    }
                    let norm2: f64 = (0..5).map(|c| hats[c][[iy, ix]].norm_sqr()).sum();
                    acc += 0.5 * ep.l1 * k2 * norm2;
                    if ep.l2 != 0.0 || ep.l3 != 0.0 {
                        let kvec = Vector3::new(kx[ix], ky[iy], 0.0);
                        let re =
                            QTensor::from_components(std::array::from_fn(|c| hats[c][[iy, ix]].re));
                        let im =
                            QTensor::from_components(std::array::from_fn(|c| hats[c][[iy, ix]].im));
                        let dre = re.to_matrix() * kvec;
                        let dim = im.to_matrix() * kvec;
                        acc += 0.5 * (ep.l2 + ep.l3) * (dre.norm_squared() + dim.norm_squared());
                    }
                }
            }
            acc * cell / grid.n_nodes() as f64
        }
        Discretization::FiniteDifference => {
            // Forward differences for the L1 part (whose exact gradient is the
            // five-point Laplacian), centered differences for the mixed part.
            let (ny, nx) = (grid.ny(), grid.nx());
            let inv_h = 1.0 / grid.h();
            let mut acc = 0.0;
            for c in 0..5 {
                let f = q.component(c);
                for iy in 0..ny {
                    let yp = (iy + 1) % ny;
                    for ix in 0..nx {
                        let xp = (ix + 1) % nx;
                        let dx = (f[[iy, xp]] - f[[iy, ix]]) * inv_h;
                        let dy = if ny == 1 {
                            0.0
                        } else {
                            (f[[yp, ix]] - f[[iy, ix]]) * inv_h
                        };
                        acc += 0.5 * ep.l1 * (dx * dx + dy * dy);
                    }
                }
            }
            if ep.l2 != 0.0 || ep.l3 != 0.0 {
                let (gx, gy) = q_gradient(q, Discretization::FiniteDifference);
                for iy in 0..ny {
                    for ix in 0..nx {
                        let gxm = gx.get(iy, ix).to_matrix();
                        let gym = gy.get(iy, ix).to_matrix();
                        let g = |d: usize| if d == 0 { &gxm } else { &gym };
                        // (div Q)_i = Q_ix,x + Q_iy,y
                        let mut div2 = 0.0;
                        for i in 0..3 {
                            let d = gxm[(i, 0)] + gym[(i, 1)];
                            div2 += d * d;
                        }
                        // Q_ij,k Q_ik,j = sum_{j,k in plane} (G_k G_j)_{jk}
                        let mut cross = 0.0;
                        for j in 0..2 {
                            for k in 0..2 {
                                cross += (g(k) * g(j))[(j, k)];
                            }
                        }
                        acc += 0.5 * (ep.l2 * div2 + ep.l3 * cross);
                    }
                }
            }
            acc * cell
        }
    }
}

/// Molecular field with the dissipative sign, H = -(1/eps^2) f(Q) + LQ.
/// Equals minus the discrete gradient of [`total_energy`] in the grid inner
/// product, for the same backend.
pub fn molecular_field(
    q: &QField,
    eps: f64,
    p: &BulkParams,
    ep: &ElasticParams,
    disc: Discretization,
) -> QField {
    let mut h = elastic_operator(q, ep, disc);
    let inv_eps2 = 1.0 / (eps * eps);
    let grid = q.grid;
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let f = bulk_force(&q.get(iy, ix), p);
            let cur = h.get(iy, ix);
            h.set(iy, ix, &(cur - f * inv_eps2));
        }
    }
    h
}

/// Distortion stress sigma^d_ij = -(dF_e/dQ_ab,j) Q_ab,i, i.e.
/// -[L1 Q_ab,j + L2 d_bj (div Q)_a + L3 Q_aj,b] Q_ab,i.
/// For L2 = L3 = 0 this reduces to -L1 Q_ab,i Q_ab,j.
pub fn distortion_stress(q: &QField, ep: &ElasticParams, disc: Discretization) -> StressField {
    let grid = q.grid;
    let (gx, gy) = q_gradient(q, disc);
    let mut out = StressField::zeros(grid);
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let gm = [gx.get(iy, ix).to_matrix(), gy.get(iy, ix).to_matrix()];
            let mut sigma = Matrix3::zeros();
            let div = Vector3::new(
                gm[0][(0, 0)] + gm[1][(0, 1)],
                gm[0][(1, 0)] + gm[1][(1, 1)],
                gm[0][(2, 0)] + gm[1][(2, 1)],
            );
            for i in 0..2 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            let mut conj = if j < 2 { ep.l1 * gm[j][(a, b)] } else { 0.0 };
                            if b == j {
                                conj += ep.l2 * div[a];
                            }
                            if b < 2 {
                                conj += ep.l3 * gm[b][(a, j)];
                            }
                            acc -= conj * gm[i][(a, b)];
                        }
                    }
                    sigma[(i, j)] = acc;
                }
            }
            out.set(iy, ix, &sigma);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtensor::{uniaxial, BulkParams};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Smooth band-limited random field, two modes per component.
    fn smooth_random_q(grid: PeriodicGrid, seed: u64, amplitude: f64) -> QField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let two_pi = 2.0 * std::f64::consts::PI;
        let modes: Vec<(usize, f64, f64, f64, f64)> = (0..5)
            .map(|c| {
                (
                    c,
                    rng.gen_range(-3..=3i32) as f64 * two_pi,
                    rng.gen_range(-3..=3i32) as f64 * two_pi,
                    rng.gen_range(0.0..two_pi),
                    rng.gen_range(0.5..1.0) * amplitude,
                )
            })
            .collect();
        let mut q = QField::zeros(grid);
        for (c, kx, ky, phase, amp) in modes {
            for ((iy, ix), v) in q.component_mut(c).indexed_iter_mut() {
                *v = amp * (kx * grid.x(ix) + ky * grid.y(iy) + phase).sin();
            }
        }
        q
    }

    #[test]
    fn elastic_of_constant_field_vanishes() {
        let grid = PeriodicGrid::square(16, 1.0).unwrap();
        let t = uniaxial(0.7, &Vector3::x()).unwrap();
        let q = QField::from_fn(grid, |_, _| t);
        for disc in [Discretization::Spectral, Discretization::FiniteDifference] {
            let l = elastic_operator(&q, &ElasticParams::new(1.0, 0.3, -0.2), disc);
            assert!(l.max_norm() <= 1e-12, "{disc:?}");
        }
    }

    #[test]
    fn elastic_single_mode_matches_symbol() {
        let grid = PeriodicGrid::square(64, 1.0).unwrap();
        let k = 2.0 * std::f64::consts::PI / grid.lx();
        let t = QTensor::from_components([0.3, -0.2, 0.5, 0.1, -0.4]);
        let q = {
            let mut q = QField::zeros(grid);
            for c in 0..5 {
                for ((_iy, ix), v) in q.component_mut(c).indexed_iter_mut() {
                    *v = t.components()[c] * (k * grid.x(ix)).sin();
                }
            }
            q
        };
        let ep = ElasticParams::isotropic(1.0);
        let spec = elastic_operator(&q, &ep, Discretization::Spectral);
        let mut worst = 0.0f64;
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let expect = q.get(iy, ix) * (-k * k);
                worst = worst.max((spec.get(iy, ix) - expect).norm());
            }
        }
        assert!(worst <= 1e-10, "spectral deviates {worst}");

        // FD path: symbol is -sin^2(kh)(k/ kh)^2 ... i.e. accurate to O(h^2).
        let fd = elastic_operator(&q, &ep, Discretization::FiniteDifference);
        let mut worst_fd = 0.0f64;
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let expect = q.get(iy, ix) * (-k * k);
                worst_fd = worst_fd.max((fd.get(iy, ix) - expect).norm());
            }
        }
        let h = grid.h();
        assert!(
            worst_fd <= k.powi(4) * h * h,
            "fd error {worst_fd} exceeds O(h^2) bound"
        );
    }

    #[test]
    fn elastic_spectral_is_self_adjoint_and_dissipative() {
        let grid = PeriodicGrid::square(32, 1.0).unwrap();
        let ep = ElasticParams::new(1.3, 0.4, -0.3);
        let q1 = smooth_random_q(grid, 5, 1.0);
        let q2 = smooth_random_q(grid, 9, 1.0);
        let l1 = elastic_operator(&q1, &ep, Discretization::Spectral);
        let l2 = elastic_operator(&q2, &ep, Discretization::Spectral);
        let a = l1.inner(&q2);
        let b = q1.inner(&l2);
        assert!(
            (a - b).abs() <= 1e-10 * a.abs().max(1.0),
            "adjointness defect {}",
            (a - b).abs()
        );
        // Negative semidefiniteness for the isotropic operator.
        let iso = ElasticParams::isotropic(1.0);
        let lq = elastic_operator(&q1, &iso, Discretization::Spectral);
        assert!(lq.inner(&q1) <= 0.0);
    }

    #[test]
    fn energy_vanishes_on_ground_states() {
        let grid = PeriodicGrid::square(16, 1.0).unwrap();
        let p = BulkParams::normalized();
        let ep = ElasticParams::isotropic(1.0);
        let well = QField::from_fn(grid, |_, _| uniaxial(1.0, &Vector3::x()).unwrap());
        for disc in [Discretization::Spectral, Discretization::FiniteDifference] {
            assert!(total_energy(&well, 0.1, &p, &ep, disc).abs() <= 1e-12);
            let zero = QField::zeros(grid);
            assert_eq!(total_energy(&zero, 0.1, &p, &ep, disc), 0.0);
        }
    }

    #[test]
    fn spectral_and_fd_energies_agree_on_smooth_fields() {
        let p = BulkParams::normalized();
        let ep = ElasticParams::new(1.0, -0.4, 0.2);
        let mut prev_gap = f64::INFINITY;
        for n in [32, 64, 128] {
            let grid = PeriodicGrid::square(n, 1.0).unwrap();
            let q = smooth_random_q(grid, 3, 0.4);
            let es = total_energy(&q, 1.0, &p, &ep, Discretization::Spectral);
            let ef = total_energy(&q, 1.0, &p, &ep, Discretization::FiniteDifference);
            let gap = (es - ef).abs() / es.abs();
            assert!(gap < prev_gap, "no convergence: {gap} vs {prev_gap}");
            prev_gap = gap;
        }
        assert!(prev_gap <= 1e-3);
    }

    #[test]
    fn molecular_field_vanishes_at_uniform_well() {
        let grid = PeriodicGrid::square(16, 1.0).unwrap();
        let p = BulkParams::normalized();
        let ep = ElasticParams::isotropic(1.0);
        let well = QField::from_fn(grid, |_, _| uniaxial(1.0, &Vector3::y()).unwrap());
        let h = molecular_field(&well, 0.05, &p, &ep, Discretization::Spectral);
        assert!(h.max_norm() <= 1e-11);
    }

    #[test]
    fn molecular_field_is_negative_energy_gradient() {
        let p = BulkParams::normalized();
        let eps = 0.5;
        for (ep, disc) in [
            (ElasticParams::isotropic(1.0), Discretization::Spectral),
            (ElasticParams::new(1.0, -0.4, 0.2), Discretization::Spectral),
            (
                ElasticParams::new(1.0, 0.3, 0.1),
                Discretization::FiniteDifference,
            ),
        ] {
            let grid = PeriodicGrid::square(32, 1.0).unwrap();
            let q = smooth_random_q(grid, 11, 0.3);
            let dq = smooth_random_q(grid, 13, 1.0);
            let hfield = molecular_field(&q, eps, &p, &ep, disc);
            let step = 1e-6;
            let mut qp = q.clone();
            qp.scaled_add(step, &dq);
            let mut qm = q.clone();
            qm.scaled_add(-step, &dq);
            let fd = (total_energy(&qp, eps, &p, &ep, disc)
                - total_energy(&qm, eps, &p, &ep, disc))
                / (2.0 * step);
            let inner = hfield.inner(&dq);
            assert!(
                (inner + fd).abs() <= 1e-5 * fd.abs().max(1e-3),
                "{disc:?}: <H,dQ> = {inner} vs -dE = {}",
                -fd
            );
        }
    }

    #[test]
    fn distortion_stress_constant_field_vanishes() {
        let grid = PeriodicGrid::square(16, 1.0).unwrap();
        let t = uniaxial(0.9, &Vector3::z()).unwrap();
        let q = QField::from_fn(grid, |_, _| t);
        let s = distortion_stress(&q, &ElasticParams::new(1.0, 0.2, 0.3), Discretization::Spectral);
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                assert!(s.get(iy, ix).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn distortion_stress_matches_gradient_contraction_for_l1() {
        let grid = PeriodicGrid::square(32, 1.0).unwrap();
        let q = smooth_random_q(grid, 17, 0.5);
        let ep = ElasticParams::isotropic(1.3);
        let s = distortion_stress(&q, &ep, Discretization::Spectral);
        let (gx, gy) = q_gradient(&q, Discretization::Spectral);
        for iy in (0..grid.ny()).step_by(5) {
            for ix in (0..grid.nx()).step_by(5) {
                let g = [gx.get(iy, ix), gy.get(iy, ix)];
                let m = s.get(iy, ix);
                for i in 0..2 {
                    for j in 0..2 {
                        let expect = -ep.l1 * g[i].dot(&g[j]);
                        assert_abs_diff_eq!(m[(i, j)], expect, epsilon = 1e-10);
                    }
                }
                assert_eq!(m[(2, 0)], 0.0);
            }
        }
    }

    /// Max norm of div sigma^d + grad(1/2|grad Q|^2 + eps^-2 F_b) + H : grad Q
    /// over the grid, all terms evaluated with the given backend.
    fn ericksen_residual(n: usize, disc: Discretization) -> f64 {
        let p = BulkParams::normalized();
        let ep = ElasticParams::isotropic(1.0);
        let eps = 1.0;
        let grid = PeriodicGrid::square(n, 1.0).unwrap();
        let q = smooth_random_q(grid, 23, 0.4);
        let s = distortion_stress(&q, &ep, disc);
        let hf = molecular_field(&q, eps, &p, &ep, disc);
        let (gx, gy) = q_gradient(&q, disc);
        let mut e = grid.zeros();
        for ((iy, ix), v) in e.indexed_iter_mut() {
            *v = 0.5 * (gx.get(iy, ix).norm_sq() + gy.get(iy, ix).norm_sq())
                + bulk_energy(&q.get(iy, ix), &p) / (eps * eps);
        }
        let d = |f: &Array2<f64>| -> (Array2<f64>, Array2<f64>) {
            match disc {
                Discretization::Spectral => spectral::gradient(&grid, f),
                Discretization::FiniteDifference => {
                    (centered_dx(&grid, f), centered_dy(&grid, f))
                }
            }
        };
        let (ex, ey) = d(&e);
        let (sxx_x, _) = d(s.plane(0, 0));
        let (_, sxy_y) = d(s.plane(0, 1));
        let (syx_x, _) = d(s.plane(1, 0));
        let (_, syy_y) = d(s.plane(1, 1));
        let mut worst = 0.0f64;
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let h = hf.get(iy, ix);
                let rx =
                    sxx_x[[iy, ix]] + sxy_y[[iy, ix]] + ex[[iy, ix]] + h.dot(&gx.get(iy, ix));
                let ry =
                    syx_x[[iy, ix]] + syy_y[[iy, ix]] + ey[[iy, ix]] + h.dot(&gy.get(iy, ix));
                worst = worst.max(rx.abs().max(ry.abs()));
            }
        }
        worst
    }

    #[test]
    fn ericksen_identity_spectral_exact_on_band_limited_fields() {
        // All products stay below the Nyquist band at n = 32, so the spectral
        // evaluation of the identity is exact up to roundoff.
        assert!(ericksen_residual(32, Discretization::Spectral) <= 1e-9);
    }

    #[test]
    fn ericksen_identity_fd_residual_is_second_order() {
        let coarse = ericksen_residual(32, Discretization::FiniteDifference);
        let fine = ericksen_residual(64, Discretization::FiniteDifference);
        assert!(
            fine <= coarse / 3.0,
            "residuals {coarse} -> {fine} do not shrink like O(h^2)"
        );
    }
}
