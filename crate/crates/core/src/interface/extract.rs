//! Marching-squares extraction of the order-parameter level set, with
//! sub-cell crossings, oriented normals and osculating-circle curvature.

use std::collections::HashMap;

use nalgebra::{Matrix3, Vector3};
use ndarray::Array2;

use crate::field::{PeriodicGrid, QField};

/// One closed polyline on the periodic domain. Points are unwrapped along
/// the walk, so segments never jump across the box; a curve that closes
/// through the periodic boundary carries the lattice offset in
/// `wrap_vector`.
#[derive(Clone, Debug)]
pub struct InterfaceCurve {
    pub points: Vec<[f64; 2]>,
    /// Unit normals, oriented toward increasing field value (the nematic
    /// side for the order parameter).
    pub normals: Vec<[f64; 2]>,
    /// Signed curvature div(nu) per point from a 5-point circle fit.
    pub kappa: Vec<f64>,
    /// Cumulative arclength per point, starting at zero.
    pub arclength: Vec<f64>,
    pub length: f64,
    /// Lattice vector connecting the last point back to the first; zero for
    /// contractible curves.
    pub wrap_vector: [f64; 2],
}

impl InterfaceCurve {
    pub fn is_contractible(&self) -> bool {
        self.wrap_vector[0].abs() < 1e-9 && self.wrap_vector[1].abs() < 1e-9
    }

    /// Integral of kappa over arclength; +-2 pi for contractible curves.
    pub fn total_curvature(&self) -> f64 {
        let n = self.points.len();
        let mut acc = 0.0;
        for k in 0..n {
            // Trapezoid weight: half of the two adjacent segment lengths.
            let prev = if k == 0 { n - 1 } else { k - 1 };
            let next = (k + 1) % n;
            let lp = seg_len(self.points[prev], self.points[k], if k == 0 { self.wrap_vector } else { [0.0, 0.0] });
            let ln = seg_len(self.points[k], self.points[next], if next == 0 { self.wrap_vector } else { [0.0, 0.0] });
            acc += self.kappa[k] * 0.5 * (lp + ln);
        }
        acc
    }

    /// Mean radius |Gamma| / (2 pi), meaningful for near-circular curves.
    pub fn circle_radius(&self) -> f64 {
        self.length / (2.0 * std::f64::consts::PI)
    }
}

fn seg_len(a: [f64; 2], b: [f64; 2], wrap: [f64; 2]) -> f64 {
    let dx = b[0] + wrap[0] - a[0];
    let dy = b[1] + wrap[1] - a[1];
    (dx * dx + dy * dy).sqrt()
}

/// Edge identifier: horizontal edge h=(0) from node (ix,iy) to (ix+1,iy),
/// vertical edge h=(1) from node (ix,iy) to (ix,iy+1).
type EdgeId = (usize, usize, u8);

/// Extract all level-set curves of a scalar field at the given threshold.
pub fn extract_contours(
    grid: &PeriodicGrid,
    field: &Array2<f64>,
    threshold: f64,
) -> Vec<InterfaceCurve> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let h = grid.h();
    let g = |ix: usize, iy: usize| field[[iy % ny, ix % nx]] - threshold;

    // Crossing position on an edge, by linear interpolation.
    let crossing = |id: EdgeId| -> [f64; 2] {
        let (ix, iy, dir) = id;
        let v0 = g(ix, iy);
        let (x0, y0) = (grid.x(ix), grid.y(iy));
        match dir {
            0 => {
                let v1 = g(ix + 1, iy);
                let t = v0 / (v0 - v1);
                [x0 + t * h, y0]
            }
            _ => {
                let v1 = g(ix, iy + 1);
                let t = v0 / (v0 - v1);
                [x0, y0 + t * h]
            }
        }
    };

    // Per-cell segments as pairs of edge ids; adjacency map edge -> segments.
    let mut adjacency: HashMap<EdgeId, Vec<(EdgeId, EdgeId)>> = HashMap::new();
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let v = [g(ix, iy), g(ix + 1, iy), g(ix + 1, iy + 1), g(ix, iy + 1)];
            let mut code = 0usize;
            for (bit, val) in v.iter().enumerate() {
                if *val > 0.0 {
                    code |= 1 << bit;
                }
            }
            if code == 0 || code == 15 {
                continue;
            }
            // Edges of this cell: bottom, right, top, left.
            let bottom: EdgeId = (ix, iy, 0);
            let right: EdgeId = ((ix + 1) % nx, iy, 1);
            let top: EdgeId = (ix, (iy + 1) % ny, 0);
            let left: EdgeId = (ix, iy, 1);
            let mut segs: Vec<(EdgeId, EdgeId)> = Vec::new();
            match code {
                1 | 14 => segs.push((left, bottom)),
                2 | 13 => segs.push((bottom, right)),
                4 | 11 => segs.push((right, top)),
                8 | 7 => segs.push((top, left)),
                3 | 12 => segs.push((left, right)),
                6 | 9 => segs.push((bottom, top)),
                5 | 10 => {
                    // Saddle: split by the cell-center average.
                    let center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    let positive_diag_connects = (code == 5) == (center > 0.0);
                    if positive_diag_connects {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    } else {
                        segs.push((bottom, right));
                        segs.push((top, left));
                    }
                }
                _ => unreachable!(),
            }
            for seg in segs {
                adjacency.entry(seg.0).or_default().push(seg);
                adjacency.entry(seg.1).or_default().push(seg);
                segments.push(seg);
            }
        }
    }

    // Walk the segment graph into closed chains, unwrapping coordinates.
    let mut used: HashMap<(EdgeId, EdgeId), bool> =
        segments.iter().map(|s| (*s, false)).collect();
    let mut curves = Vec::new();
    for start in &segments {
        if used[start] {
            continue;
        }
        let mut chain_edges: Vec<EdgeId> = vec![start.0, start.1];
        *used.get_mut(start).unwrap() = true;
        loop {
            let tail = *chain_edges.last().unwrap();
            let next = adjacency[&tail]
                .iter()
                .find(|s| !used[*s])
                .copied();
            match next {
                Some(seg) => {
                    *used.get_mut(&seg).unwrap() = true;
                    let other = if seg.0 == tail { seg.1 } else { seg.0 };
                    chain_edges.push(other);
                }
                None => break,
            }
        }
        // The chain is closed when its two ends are the same edge.
        let closed = chain_edges.first() == chain_edges.last() && chain_edges.len() > 2;
        if closed {
            chain_edges.pop();
        }
        if chain_edges.len() < 3 {
            continue;
        }
        // Unwrap the raw crossing coordinates along the walk.
        let mut points = Vec::with_capacity(chain_edges.len());
        let mut prev = crossing(chain_edges[0]);
        points.push(prev);
        for id in chain_edges.iter().skip(1) {
            let raw = crossing(*id);
            let p = [
                prev[0] + grid.wrap_dx(raw[0], prev[0]),
                prev[1] + grid.wrap_dy(raw[1], prev[1]),
            ];
            points.push(p);
            prev = p;
        }
        let raw0 = crossing(chain_edges[0]);
        let closing = [
            prev[0] + grid.wrap_dx(raw0[0], prev[0]),
            prev[1] + grid.wrap_dy(raw0[1], prev[1]),
        ];
        let wrap_vector = [closing[0] - points[0][0], closing[1] - points[0][1]];
        curves.push(build_curve(grid, field, points, wrap_vector));
    }
    curves.sort_by(|a, b| b.length.partial_cmp(&a.length).unwrap());
    curves
}

/// Extract the nematic-isotropic interface of a Q field at the given order
/// parameter threshold (s+/2 matches the profile centering, so the curve is
/// the inner-coordinate origin). Returns an empty list when the field never
/// crosses the threshold.
pub fn extract_interface(q: &QField, threshold: f64) -> Vec<InterfaceCurve> {
    let op = q.order_parameter_field();
    extract_contours(&q.grid, &op, threshold)
}

fn build_curve(
    grid: &PeriodicGrid,
    field: &Array2<f64>,
    points: Vec<[f64; 2]>,
    wrap_vector: [f64; 2],
) -> InterfaceCurve {
    let n = points.len();
    // Normals from the interpolated field gradient, toward increasing value.
    let (gx, gy) = centered_gradient(grid, field);
    let mut normals = Vec::with_capacity(n);
    for p in &points {
        let nx = super::probes::sample_bilinear(grid, &gx, p[0], p[1]);
        let ny = super::probes::sample_bilinear(grid, &gy, p[0], p[1]);
        let norm = (nx * nx + ny * ny).sqrt().max(1e-300);
        normals.push([nx / norm, ny / norm]);
    }

    let mut arclength = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 0..n {
        arclength.push(acc);
        let next = (k + 1) % n;
        let wrap = if next == 0 { wrap_vector } else { [0.0, 0.0] };
        acc += seg_len(points[k], points[next], wrap);
    }
    let length = acc;

    // Consecutive crossings sit less than a cell apart; stretch the 5-point
    // stencil so it spans about eight cells, which keeps the circle fit well
    // conditioned against the O(h^2) crossing noise.
    let spacing = length / n as f64;
    let stride = ((2.0 * grid.h() / spacing).round() as usize)
        .max(1)
        .min(((n - 1) / 4).max(1));
    let kappa = (0..n)
        .map(|k| fit_curvature(&points, wrap_vector, k, &normals[k], stride))
        .collect();

    InterfaceCurve {
        points,
        normals,
        kappa,
        arclength,
        length,
        wrap_vector,
    }
}

fn centered_gradient(grid: &PeriodicGrid, f: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let (nx, ny) = (grid.nx(), grid.ny());
    let inv2h = 1.0 / (2.0 * grid.h());
    let mut gx = grid.zeros();
    let mut gy = grid.zeros();
    for iy in 0..ny {
        let yp = (iy + 1) % ny;
        let ym = (iy + ny - 1) % ny;
        for ix in 0..nx {
            let xp = (ix + 1) % nx;
            let xm = (ix + nx - 1) % nx;
            gx[[iy, ix]] = (f[[iy, xp]] - f[[iy, xm]]) * inv2h;
            if ny > 1 {
                gy[[iy, ix]] = (f[[yp, ix]] - f[[ym, ix]]) * inv2h;
            }
        }
    }
    (gx, gy)
}

/// Signed curvature at point k from a least-squares circle through a
/// 5-point stencil (strided by `stride`) centered there. Sign convention:
/// kappa = div(nu), so a circle whose center lies on the +nu side has
/// kappa = -1/R.
fn fit_curvature(
    points: &[[f64; 2]],
    wrap: [f64; 2],
    k: usize,
    nu: &[f64; 2],
    stride: usize,
) -> f64 {
    let n = points.len();
    let take = 5.min(n);
    let half = take / 2;
    // Gather the stencil with unwrapped coordinates relative to point k.
    let mut stencil = Vec::with_capacity(take);
    for off in 0..take {
        let raw = k as isize + (off as isize - half as isize) * stride as isize;
        let idx = raw.rem_euclid(n as isize) as usize;
        let mut p = points[idx];
        if raw < 0 {
            p = [p[0] - wrap[0], p[1] - wrap[1]];
        } else if raw >= n as isize {
            p = [p[0] + wrap[0], p[1] + wrap[1]];
        }
        stencil.push(p);
    }
    let cx: f64 = stencil.iter().map(|p| p[0]).sum::<f64>() / take as f64;
    let cy: f64 = stencil.iter().map(|p| p[1]).sum::<f64>() / take as f64;

    // Kasa fit: |p|^2 = u x + v y + w with center (u/2, v/2).
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for p in &stencil {
        let (x, y) = (p[0] - cx, p[1] - cy);
        let row = Vector3::new(x, y, 1.0);
        let b = x * x + y * y;
        ata += row * row.transpose();
        atb += row * b;
    }
    let Some(sol) = ata.lu().solve(&atb) else {
        return 0.0;
    };
    let ccx = 0.5 * sol[0];
    let ccy = 0.5 * sol[1];
    let r2 = sol[2] + ccx * ccx + ccy * ccy;
    if !(r2 > 0.0) || !r2.is_finite() {
        return 0.0;
    }
    let r = r2.sqrt();
    // Nearly straight stencils produce huge radii; call them flat.
    if r > 1e6 {
        return 0.0;
    }
    let to_center = [ccx + cx - points[k][0], ccy + cy - points[k][1]];
    let side = to_center[0] * nu[0] + to_center[1] * nu[1];
    -side.signum() / r
}
