//! Closed-form coefficient maps connecting the Q-tensor model to the
//! director-based limit theories, plus the sharp-interface jump predictions
//! used as verification targets.

use crate::profile::{surface_tension, ProfileSolution};

/// Oseen-Frank elastic constants induced by (L1, L2, L3) at order s+^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OseenFrankConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
}

/// k1 = k3 = (2 L1 + L2 + L3) s+^2, k2 = 2 L1 s+^2, k4 = L3 s+^2.
pub fn oseen_frank(l1: f64, l2: f64, l3: f64, s_plus: f64) -> OseenFrankConstants {
    let s2 = s_plus * s_plus;
    let k13 = (2.0 * l1 + l2 + l3) * s2;
    OseenFrankConstants {
        k1: k13,
        k2: 2.0 * l1 * s2,
        k3: k13,
        k4: l3 * s2,
    }
}

/// Leslie viscosities of the limiting Ericksen-Leslie system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeslieCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
}

impl LeslieCoefficients {
    /// Residual of the Parodi relation a2 + a3 = a6 - a5 (an algebraic
    /// identity of the coefficient formulas; nonzero only through roundoff).
    pub fn parodi_defect(&self) -> f64 {
        (self.alpha2 + self.alpha3 - (self.alpha6 - self.alpha5)).abs()
    }
}

/// Leslie coefficients as functions of the coupling parameter xi and s+.
pub fn leslie(xi: f64, s_plus: f64) -> LeslieCoefficients {
    let s = s_plus;
    let rot = xi * s * (2.0 + s) / 3.0;
    let sym = xi * xi * s * (4.0 - s) / 3.0;
    LeslieCoefficients {
        alpha1: -2.0 * xi * xi * s * s * (3.0 - 2.0 * s) * (1.0 + 2.0 * s) / 3.0,
        alpha2: -s * s - rot,
        alpha3: s * s - rot,
        alpha4: 1.0 + 4.0 * xi * xi * (1.0 - s) * (1.0 - s) / 9.0,
        alpha5: sym + rot,
        alpha6: sym - rot,
    }
}

/// Predicted jumps across the interface at the successive pressure orders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictedJumps {
    /// Jump of the eps^-2 pressure content; vanishes because the bulk energy
    /// takes the same value in both wells.
    pub p_minus2_jump: f64,
    /// Young-Laplace jump of the eps^-1 pressure content: -sigma * kappa,
    /// with kappa the signed curvature in the div(nu) convention (nu points
    /// into the nematic phase).
    pub p_minus1_jump: f64,
    /// Velocity jump; zero in the co-rotational case xi = 0.
    pub v_jump: f64,
}

pub fn predicted_jumps(prof: &ProfileSolution, kappa: f64) -> PredictedJumps {
    PredictedJumps {
        p_minus2_jump: 0.0,
        p_minus1_jump: -surface_tension(prof) * kappa,
        v_jump: 0.0,
    }
}

/// One term of a stress expansion, e.g. (-s+^2, "Nn").
#[derive(Clone, Debug, PartialEq)]
pub struct StressTerm {
    pub coefficient: f64,
    pub expression: &'static str,
}

/// Coefficient-instantiated description of the limit systems on both sides of
/// the interface. Emitted for documentation and golden tests; nothing here is
/// integrated numerically.
#[derive(Clone, Debug)]
pub struct LimitSystems {
    pub xi: f64,
    pub s_plus: f64,
    pub leslie: LeslieCoefficients,
    /// Nonzero terms of the Leslie stress on the nematic side.
    pub nematic_stress_terms: Vec<StressTerm>,
    /// Stress terms on the isotropic side (a plain Newtonian fluid).
    pub isotropic_stress_terms: Vec<StressTerm>,
    /// Shape of the director equation in the nematic region.
    pub director_equation: String,
    /// Coefficient of D.n in the director equation after dividing by s+.
    pub director_d_coefficient: f64,
    /// Law of motion of the interface.
    pub interface_law: String,
}

/// Emit the limit systems for given (xi, s+).
pub fn limit_systems_doc(xi: f64, s_plus: f64) -> LimitSystems {
    let l = leslie(xi, s_plus);
    let candidates = [
        (l.alpha1, "(nn:D) nn"),
        (l.alpha2, "Nn"),
        (l.alpha3, "nN"),
        (l.alpha4, "D"),
        (l.alpha5, "D.nn"),
        (l.alpha6, "nn.D"),
    ];
    let nematic_stress_terms = candidates
        .iter()
        .filter(|(c, _)| *c != 0.0)
        .map(|&(coefficient, expression)| StressTerm {
            coefficient,
            expression,
        })
        .collect();
    LimitSystems {
        xi,
        s_plus,
        leslie: l,
        nematic_stress_terms,
        isotropic_stress_terms: vec![StressTerm {
            coefficient: 1.0,
            expression: "D",
        }],
        director_equation: "n x (-Delta n + N - D.n) = 0".to_string(),
        director_d_coefficient: xi * (2.0 + s_plus) / (3.0 * s_plus),
        interface_law: "phi_t = Delta phi - v.grad phi".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::solve_profile_default;
    use crate::qtensor::BulkParams;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn oseen_frank_one_constant_case() {
        let k = oseen_frank(1.0, 0.0, 0.0, 1.0);
        assert_eq!((k.k1, k.k2, k.k3, k.k4), (2.0, 2.0, 2.0, 0.0));
    }

    #[test]
    fn oseen_frank_general_values() {
        let k = oseen_frank(0.5, 0.2, 0.1, 2.0);
        assert_abs_diff_eq!(k.k2, 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.k4, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(k.k1, 5.2, epsilon = 1e-14);
        assert_eq!(k.k1, k.k3);
    }

    #[test]
    fn oseen_frank_scales_quadratically_in_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let (l1, l2, l3, s) = (
                rng.gen_range(0.1..2.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.1..2.0),
            );
            let k1 = oseen_frank(l1, l2, l3, s);
            let k2 = oseen_frank(l1, l2, l3, 2.0 * s);
            assert_eq!(k2.k1, 4.0 * k1.k1);
            assert_eq!(k2.k2, 4.0 * k1.k2);
            assert_eq!(k2.k4, 4.0 * k1.k4);
        }
    }

    #[test]
    fn leslie_corotational_case() {
        let s = 0.8;
        let l = leslie(0.0, s);
        assert_eq!(l.alpha1, 0.0);
        assert_eq!(l.alpha2, -s * s);
        assert_eq!(l.alpha3, s * s);
        assert_eq!(l.alpha4, 1.0);
        assert_eq!(l.alpha5, 0.0);
        assert_eq!(l.alpha6, 0.0);
    }

    #[test]
    fn leslie_xi_one_s_one() {
        let l = leslie(1.0, 1.0);
        assert_abs_diff_eq!(l.alpha1, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.alpha2, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.alpha3, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.alpha4, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.alpha5, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.alpha6, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn parodi_identity_on_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let xi = rng.gen_range(-2.0..2.0);
            let s = rng.gen_range(0.1..2.0);
            let l = leslie(xi, s);
            assert!(l.parodi_defect() <= 1e-14, "defect {}", l.parodi_defect());
            // Both sides equal -2 xi s (2+s)/3.
            let expect = -2.0 * xi * s * (2.0 + s) / 3.0;
            assert_abs_diff_eq!(l.alpha2 + l.alpha3, expect, epsilon = 1e-14);
            // alpha3 - alpha2 = 2 s^2 for all xi.
            assert_abs_diff_eq!(l.alpha3 - l.alpha2, 2.0 * s * s, epsilon = 1e-14);
        }
    }

    #[test]
    fn predicted_jumps_normalized_droplet() {
        let prof = solve_profile_default(&BulkParams::normalized(), 6.0).unwrap();
        let j = predicted_jumps(&prof, 1.0 / 0.3);
        assert_eq!(j.p_minus2_jump, 0.0);
        assert_eq!(j.v_jump, 0.0);
        assert_abs_diff_eq!(j.p_minus1_jump, -0.2138334330331948, epsilon = 1e-7);
        let flat = predicted_jumps(&prof, 0.0);
        assert_eq!(flat.p_minus1_jump, 0.0);
    }

    #[test]
    fn limit_systems_corotational_stress_terms() {
        let sys = limit_systems_doc(0.0, 1.0);
        let terms: Vec<(&str, f64)> = sys
            .nematic_stress_terms
            .iter()
            .map(|t| (t.expression, t.coefficient))
            .collect();
        assert_eq!(terms, vec![("Nn", -1.0), ("nN", 1.0), ("D", 1.0)]);
        assert_eq!(sys.isotropic_stress_terms.len(), 1);
        assert_eq!(sys.isotropic_stress_terms[0].expression, "D");
        assert_eq!(sys.isotropic_stress_terms[0].coefficient, 1.0);
        assert_eq!(sys.director_equation, "n x (-Delta n + N - D.n) = 0");
        assert_eq!(sys.director_d_coefficient, 0.0);
    }
}
