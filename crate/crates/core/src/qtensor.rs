//! Symmetric traceless 3x3 tensor algebra and the Landau-de Gennes bulk potential.
//!
//! A Q-tensor is stored by its five coordinates in a fixed orthonormal basis
//! (Frobenius inner product) of the space of symmetric traceless matrices:
//!
//! ```text
//! B0 = diag(-1,-1,2)/sqrt(6)      B1 = diag(1,-1,0)/sqrt(2)
//! B2 = (e1e2 + e2e1)/sqrt(2)      B3 = (e1e3 + e3e1)/sqrt(2)
//! B4 = (e2e3 + e3e2)/sqrt(2)
//! ```
//!
//! In this basis `|Q|^2 = sum q_i^2` and the Frobenius contraction of two
//! tensors is the dot product of their coordinate vectors, so trace-free
//! symmetry is exact by construction and fields store 5 reals per node
//! instead of 9.

use nalgebra::{Matrix3, Vector3};

use crate::error::{CoreError, Result};

const INV_SQRT6: f64 = 0.408_248_290_463_863_05;
const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Symmetric traceless 3x3 tensor in the 5-component orthonormal basis.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QTensor {
    c: [f64; 5],
}

impl QTensor {
    pub const ZERO: QTensor = QTensor { c: [0.0; 5] };

    pub fn from_components(c: [f64; 5]) -> Self {
        QTensor { c }
    }

    pub fn components(&self) -> [f64; 5] {
        self.c
    }

    /// Reconstruct the full 3x3 matrix.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        let [c0, c1, c2, c3, c4] = self.c;
        let d = c0 * INV_SQRT6;
        Matrix3::new(
            -d + c1 * INV_SQRT2,
            c2 * INV_SQRT2,
            c3 * INV_SQRT2,
            c2 * INV_SQRT2,
            -d - c1 * INV_SQRT2,
            c4 * INV_SQRT2,
            c3 * INV_SQRT2,
            c4 * INV_SQRT2,
            2.0 * d,
        )
    }

    /// Project an arbitrary 3x3 matrix onto the symmetric traceless subspace
    /// and return its coordinates. For matrices that are already symmetric
    /// traceless this is the exact inverse of [`QTensor::to_matrix`].
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        let s = (m + m.transpose()) * 0.5;
        let tr3 = s.trace() / 3.0;
        QTensor {
            c: [
                (-(s[(0, 0)] - tr3) - (s[(1, 1)] - tr3) + 2.0 * (s[(2, 2)] - tr3)) * INV_SQRT6,
                ((s[(0, 0)] - tr3) - (s[(1, 1)] - tr3)) * INV_SQRT2,
                2.0 * s[(0, 1)] * INV_SQRT2,
                2.0 * s[(0, 2)] * INV_SQRT2,
                2.0 * s[(1, 2)] * INV_SQRT2,
            ],
        }
    }

    /// Frobenius contraction Q1 : Q2.
    pub fn dot(&self, other: &QTensor) -> f64 {
        self.c
            .iter()
            .zip(other.c.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// |Q|^2 = Q : Q.
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// Scalar order parameter sqrt(3/2 |Q|^2); equals |s| for a uniaxial tensor.
    pub fn order_parameter(&self) -> f64 {
        (1.5 * self.norm_sq()).sqrt()
    }
}

impl std::ops::Add for QTensor {
    type Output = QTensor;
    fn add(self, rhs: QTensor) -> QTensor {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
        QTensor { c }
    }
}

impl std::ops::Sub for QTensor {
    type Output = QTensor;
    fn sub(self, rhs: QTensor) -> QTensor {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a -= b;
        }
        QTensor { c }
    }
}

impl std::ops::Mul<f64> for QTensor {
    type Output = QTensor;
    fn mul(self, rhs: f64) -> QTensor {
        QTensor {
            c: self.c.map(|x| x * rhs),
        }
    }
}

impl std::ops::Neg for QTensor {
    type Output = QTensor;
    fn neg(self) -> QTensor {
        QTensor {
            c: self.c.map(|x| -x),
        }
    }
}

/// Uniaxial tensor s (nn - I/3). Eigenvalues are {2s/3, -s/3, -s/3}.
pub fn uniaxial(s: f64, n: &Vector3<f64>) -> Result<QTensor> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(CoreError::NonUnitDirector { norm });
    }
    Ok(uniaxial_unchecked(s, n))
}

pub(crate) fn uniaxial_unchecked(s: f64, n: &Vector3<f64>) -> QTensor {
    // B_i : (nn - I/3) = B_i : nn because the basis is traceless.
    QTensor {
        c: [
            s * (-n.x * n.x - n.y * n.y + 2.0 * n.z * n.z) * INV_SQRT6,
            s * (n.x * n.x - n.y * n.y) * INV_SQRT2,
            s * 2.0 * n.x * n.y * INV_SQRT2,
            s * 2.0 * n.x * n.z * INV_SQRT2,
            s * 2.0 * n.y * n.z * INV_SQRT2,
        ],
    }
}

/// Bulk potential coefficients. All nonnegative, c strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BulkParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BulkParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && c > 0.0) {
            return Err(CoreError::InvalidBulkParams { a, b, c });
        }
        Ok(BulkParams { a, b, c })
    }

    /// The normalized double-well case a = 1/3, b = 3, c = 1 (s+ = 1).
    pub fn normalized() -> Self {
        BulkParams {
            a: 1.0 / 3.0,
            b: 3.0,
            c: 1.0,
        }
    }

    /// b^2 / (27 a c); the wells have equal depth exactly when this is 1.
    pub fn well_ratio(&self) -> f64 {
        self.b * self.b / (27.0 * self.a * self.c)
    }

    pub fn has_equal_wells(&self, rel_tol: f64) -> bool {
        (self.well_ratio() - 1.0).abs() <= rel_tol
    }
}

/// Stability of a scalar critical value of the bulk potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
    /// Double root of 2cs^2 - bs + 3a at the degenerate discriminant b^2 = 24ac.
    Inflection,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CriticalValue {
    pub s: f64,
    pub stability: Stability,
}

/// Critical points of the bulk potential, as scalar order parameters of the
/// uniaxial family s (nn - I/3).
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSet {
    pub values: Vec<CriticalValue>,
}

impl CriticalSet {
    /// Largest nonzero critical value s1, if any.
    pub fn s_plus(&self) -> Option<f64> {
        self.values
            .iter()
            .map(|v| v.s)
            .fold(None, |acc: Option<f64>, s| {
                Some(acc.map_or(s, |a| a.max(s)))
            })
            .filter(|s| *s != 0.0)
    }
}

/// Bulk energy density F_b(Q) = a/2 tr Q^2 - b/3 tr Q^3 + c/4 (tr Q^2)^2.
pub fn bulk_energy(q: &QTensor, p: &BulkParams) -> f64 {
    let m = q.to_matrix();
    let tr2 = q.norm_sq();
    let tr3 = (m * m * m).trace();
    p.a / 2.0 * tr2 - p.b / 3.0 * tr3 + p.c / 4.0 * tr2 * tr2
}

/// Gradient of the bulk energy restricted to the traceless-symmetric subspace:
/// f(Q) = aQ - bQ^2 + c|Q|^2 Q + (b/3)|Q|^2 I. The last term makes the result
/// traceless, so f is the constrained gradient of F_b.
pub fn bulk_force(q: &QTensor, p: &BulkParams) -> QTensor {
    let m = q.to_matrix();
    let tr2 = q.norm_sq();
    let f = m * p.a - m * m * p.b + m * (p.c * tr2)
        + Matrix3::identity() * (p.b / 3.0 * tr2);
    QTensor::from_matrix(&f)
}

/// Scalar critical values: s = 0 always, plus the roots of 2cs^2 - bs + 3a = 0
/// when the discriminant b^2 - 24ac is nonnegative. The larger root s1 is the
/// stable nematic state; a degenerate discriminant yields the double root once,
/// flagged as an inflection.
pub fn critical_points(p: &BulkParams) -> CriticalSet {
    let mut values = vec![CriticalValue {
        s: 0.0,
        stability: Stability::Stable,
    }];
    let disc = p.b * p.b - 24.0 * p.a * p.c;
    if disc > 0.0 {
        let root = disc.sqrt();
        let s1 = (p.b + root) / (4.0 * p.c);
        let s2 = (p.b - root) / (4.0 * p.c);
        values.push(CriticalValue {
            s: s1,
            stability: Stability::Stable,
        });
        values.push(CriticalValue {
            s: s2,
            stability: Stability::Unstable,
        });
    } else if disc == 0.0 {
        values.push(CriticalValue {
            s: p.b / (4.0 * p.c),
            stability: Stability::Inflection,
        });
    }
    CriticalSet { values }
}

/// Linearization f'(Q0) of the bulk force applied to Q:
/// aQ - b(Q0 Q + Q Q0) + c|Q0|^2 Q + 2(Q0:Q)(c Q0 + (b/3) I).
pub fn linearized_bulk(q0: &QTensor, q: &QTensor, p: &BulkParams) -> QTensor {
    let m0 = q0.to_matrix();
    let m = q.to_matrix();
    let q0q = q0.dot(q);
    let out = m * p.a - (m0 * m + m * m0) * p.b + m * (p.c * q0.norm_sq())
        + (m0 * (2.0 * p.c * q0q) + Matrix3::identity() * (2.0 * p.b / 3.0 * q0q));
    QTensor::from_matrix(&out)
}

/// Second derivative of the bulk force, as the matrix-valued bilinear form
/// f''(Q0)[Q1, Q2] = -b(Q1 Q2 + Q2 Q1) + 2c(Q0:Q2) Q1 + 2c(Q0:Q1) Q2
///                   + 2(Q1:Q2)(c Q0 + (b/3) I).
/// Symmetric under swapping Q1 and Q2.
pub fn bilinear_bulk(q0: &QTensor, q1: &QTensor, q2: &QTensor, p: &BulkParams) -> QTensor {
    let m0 = q0.to_matrix();
    let m1 = q1.to_matrix();
    let m2 = q2.to_matrix();
    let q12 = q1.dot(q2);
    let out = -(m1 * m2 + m2 * m1) * p.b
        + m1 * (2.0 * p.c * q0.dot(q2))
        + m2 * (2.0 * p.c * q0.dot(q1))
        + (m0 * (2.0 * p.c * q12) + Matrix3::identity() * (2.0 * p.b / 3.0 * q12));
    QTensor::from_matrix(&out)
}

/// Orthonormal basis {n n1 + n1 n, n n2 + n2 n} of the kernel of f'(Q0) at a
/// nonzero uniaxial critical point Q0 = s (nn - I/3), where {n1, n2} complete
/// n to an orthonormal frame.
pub fn kernel_basis(s: f64, n: &Vector3<f64>) -> Result<[QTensor; 2]> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(CoreError::NonUnitDirector { norm });
    }
    if s == 0.0 {
        return Err(CoreError::ZeroOrderParameter);
    }
    // Pick the coordinate axis least aligned with n to seed Gram-Schmidt.
    let seed = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vector3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let n1 = (seed - n * n.dot(&seed)).normalize();
    let n2 = n.cross(&n1);
    let sym = |u: &Vector3<f64>, v: &Vector3<f64>| {
        QTensor::from_matrix(&(u * v.transpose() + v * u.transpose()))
    };
    Ok([sym(n, &n1), sym(n, &n2)])
}

/// Co-rotational coupling tensor
/// S_Q(M) = xi ( M (Q + I/3) + (Q + I/3) M - 2 (Q + I/3) (M : Q) )
/// for symmetric traceless M. The result is symmetric with exactly zero trace.
pub fn s_transport(q: &QTensor, m: &QTensor, xi: f64) -> QTensor {
    let qi = q.to_matrix() + Matrix3::identity() / 3.0;
    let mm = m.to_matrix();
    let out = (mm * qi + qi * mm - qi * (2.0 * m.dot(q))) * xi;
    let st = QTensor::from_matrix(&out);
    debug_assert!(out.trace().abs() <= 1e-13 * (1.0 + out.norm()));
    st
}

/// Principal eigenvector of Q, oriented so that dot(result, reference) >= 0.
///
/// Fails when the two largest eigenvalues are closer than 1e-10 (the director
/// is then undefined up to a rotation in their eigenplane).
pub fn director(q: &QTensor, reference: &Vector3<f64>) -> Result<Vector3<f64>> {
    let eig = q.to_matrix().symmetric_eigen();
    let mut idx = [0, 1, 2];
    idx.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap()
    });
    let gap = eig.eigenvalues[idx[0]] - eig.eigenvalues[idx[1]];
    if gap < 1e-10 {
        return Err(CoreError::DegenerateDirector { gap });
    }
    let mut n = eig.eigenvectors.column(idx[0]).into_owned();
    n /= n.norm();
    if n.dot(reference) < 0.0 {
        n = -n;
    }
    Ok(n)
}
