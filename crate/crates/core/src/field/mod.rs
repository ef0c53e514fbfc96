//! Periodic-grid discretizations of the tensor, velocity and pressure fields,
//! with spectral (default) and second-order finite-difference operators.

use ndarray::Array2;

use crate::error::{CoreError, Result};
use crate::qtensor::QTensor;

mod ops;
mod snapshot;
pub mod spectral;

pub use ops::{
    distortion_stress, elastic_operator, molecular_field, total_energy, Discretization,
    StressField,
};
pub use snapshot::{load_snapshot, load_snapshot_header, save_snapshot, Snapshot, SnapshotMeta};

/// Uniform periodic grid on [0, Lx) x [0, Ly). Node counts must be powers of
/// two (spectral transforms) and the spacing isotropic. A 1D domain is the
/// special case ny = 1 with Ly = h.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicGrid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

/// Outcome of the interface-resolution rule h <= eps/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Resolved,
    /// eps/4 < h <= eps/3: usable but flagged.
    Marginal,
    /// h > eps/3: the transition layer is unresolved.
    TooCoarse,
}

impl PeriodicGrid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if !nx.is_power_of_two() || !ny.is_power_of_two() {
            return Err(CoreError::GridNotPowerOfTwo { nx, ny });
        }
        let hx = lx / nx as f64;
        let hy = ly / ny as f64;
        if (hx - hy).abs() > 1e-12 * hx.max(hy) {
            return Err(CoreError::AnisotropicGrid { hx, hy });
        }
        Ok(PeriodicGrid { nx, ny, lx, ly })
    }

    /// Square grid with n x n nodes on an l x l box.
    pub fn square(n: usize, l: f64) -> Result<Self> {
        PeriodicGrid::new(n, n, l, l)
    }

    /// 1D grid: n nodes on [0, l), one cell high.
    pub fn line(n: usize, l: f64) -> Result<Self> {
        let h = l / n as f64;
        PeriodicGrid::new(n, 1, l, h)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn h(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn n_nodes(&self) -> usize {
        self.nx * self.ny
    }

    /// Area element h^2 (h in the 1D case).
    pub fn cell_measure(&self) -> f64 {
        if self.ny == 1 {
            self.h()
        } else {
            self.h() * self.h()
        }
    }

    pub fn x(&self, ix: usize) -> f64 {
        ix as f64 * self.h()
    }

    pub fn y(&self, iy: usize) -> f64 {
        iy as f64 * self.h()
    }

    /// Shortest periodic displacement from b to a in the x direction.
    pub fn wrap_dx(&self, a: f64, b: f64) -> f64 {
        let mut d = a - b;
        d -= (d / self.lx).round() * self.lx;
        d
    }

    pub fn wrap_dy(&self, a: f64, b: f64) -> f64 {
        let mut d = a - b;
        d -= (d / self.ly).round() * self.ly;
        d
    }

    pub fn zeros(&self) -> Array2<f64> {
        Array2::zeros((self.ny, self.nx))
    }

    pub fn check_resolution(&self, eps: f64) -> Resolution {
        let h = self.h();
        if h <= eps / 4.0 {
            Resolution::Resolved
        } else if h <= eps / 3.0 {
            Resolution::Marginal
        } else {
            Resolution::TooCoarse
        }
    }
}

/// Elastic constants. L4 is fixed to zero because the cubic term makes the
/// energy unbounded below.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ElasticParams {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl ElasticParams {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        ElasticParams { l1, l2, l3 }
    }

    pub fn isotropic(l1: f64) -> Self {
        ElasticParams {
            l1,
            l2: 0.0,
            l3: 0.0,
        }
    }

    /// kappa = 6 L1 + L2, the profile-equation scaling.
    pub fn kappa(&self) -> f64 {
        6.0 * self.l1 + self.l2
    }

    /// Crude sufficient coercivity check for the elastic energy, via the
    /// integral bounds int |div Q|^2 <= int |grad Q|^2 and
    /// |int Q_ij,k Q_ik,j| <= int |grad Q|^2. Returns a warning when the
    /// check fails; no sharp admissibility bound is claimed.
    pub fn coercivity_warning(&self) -> Option<String> {
        if self.l1 <= 0.0 {
            return Some(format!("elastic energy not coercive: L1 = {} <= 0", self.l1));
        }
        let lower = self.l1 + self.l2.min(0.0) + self.l3.min(0.0);
        if lower <= 0.0 {
            return Some(format!(
                "elastic energy may lose positivity: L1 + min(L2,0) + min(L3,0) = {lower} <= 0"
            ));
        }
        None
    }
}

/// Q-tensor field: five component planes in the orthonormal tensor basis.
#[derive(Clone, Debug)]
pub struct QField {
    pub grid: PeriodicGrid,
    comps: [Array2<f64>; 5],
}

impl QField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        QField {
            grid,
            comps: std::array::from_fn(|_| grid.zeros()),
        }
    }

    /// Fill from a function of the node position.
    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> QTensor) -> Self {
        let mut q = QField::zeros(grid);
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let t = f(grid.x(ix), grid.y(iy));
                q.set(iy, ix, &t);
            }
        }
        q
    }

    pub fn get(&self, iy: usize, ix: usize) -> QTensor {
        QTensor::from_components(std::array::from_fn(|c| self.comps[c][[iy, ix]]))
    }

    pub fn set(&mut self, iy: usize, ix: usize, q: &QTensor) {
        let c = q.components();
        for k in 0..5 {
            self.comps[k][[iy, ix]] = c[k];
        }
    }

    pub fn component(&self, c: usize) -> &Array2<f64> {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut Array2<f64> {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Array2<f64>; 5] {
        &self.comps
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|a| a.iter().all(|v| v.is_finite()))
    }

    /// Largest nodewise Frobenius norm.
    pub fn max_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for iy in 0..self.grid.ny() {
            for ix in 0..self.grid.nx() {
                worst = worst.max(self.get(iy, ix).norm_sq());
            }
        }
        worst.sqrt()
    }

    /// Scalar order parameter at every node.
    pub fn order_parameter_field(&self) -> Array2<f64> {
        let mut out = self.grid.zeros();
        for iy in 0..self.grid.ny() {
            for ix in 0..self.grid.nx() {
                out[[iy, ix]] = self.get(iy, ix).order_parameter();
            }
        }
        out
    }

    /// Discrete L2 inner product sum(Qa : Qb) h^2.
    pub fn inner(&self, other: &QField) -> f64 {
        let mut acc = 0.0;
        for c in 0..5 {
            acc += self.comps[c]
                .iter()
                .zip(other.comps[c].iter())
                .map(|(a, b)| a * b)
                .sum::<f64>();
        }
        acc * self.grid.cell_measure()
    }

    pub fn scaled_add(&mut self, alpha: f64, other: &QField) {
        for c in 0..5 {
            self.comps[c].zip_mut_with(&other.comps[c], |a, b| *a += alpha * b);
        }
    }
}

/// In-plane velocity field (vx, vy).
#[derive(Clone, Debug)]
pub struct VelocityField {
    pub grid: PeriodicGrid,
    pub vx: Array2<f64>,
    pub vy: Array2<f64>,
}

impl VelocityField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        VelocityField {
            grid,
            vx: grid.zeros(),
            vy: grid.zeros(),
        }
    }

    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> (f64, f64)) -> Self {
        let mut v = VelocityField::zeros(grid);
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let (vx, vy) = f(grid.x(ix), grid.y(iy));
                v.vx[[iy, ix]] = vx;
                v.vy[[iy, ix]] = vy;
            }
        }
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.vx
            .iter()
            .chain(self.vy.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.vx.iter().chain(self.vy.iter()).all(|v| v.is_finite())
    }

    /// Kinetic energy sum(|v|^2/2) h^2.
    pub fn kinetic_energy(&self) -> f64 {
        let sum: f64 = self
            .vx
            .iter()
            .zip(self.vy.iter())
            .map(|(x, y)| 0.5 * (x * x + y * y))
            .sum();
        sum * self.grid.cell_measure()
    }

    /// Max norm of the spectral divergence.
    pub fn max_divergence(&self) -> f64 {
        let div = spectral::divergence(&self.grid, &self.vx, &self.vy);
        div.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Scalar pressure field (diagnostic; the solvers eliminate pressure by
/// projection and recover it on demand).
#[derive(Clone, Debug)]
pub struct PressureField {
    pub grid: PeriodicGrid,
    pub p: Array2<f64>,
}

impl PressureField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        PressureField {
            grid,
            p: grid.zeros(),
        }
    }
}
