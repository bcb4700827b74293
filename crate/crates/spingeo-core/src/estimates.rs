//! Scalar-level eigenvalue estimates for the square of the cubic Dirac
//! operator, the Killing criterion, and the Ricci coefficient polynomial.
//!
//! All quantities are exact; the polynomial variants keep a formal
//! parameter (the torsion constant of a structure family, or the
//! connection parameter `s`).

use thiserror::Error;

use crate::exactfield::{Scalar, ScalarPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EstimateError {
    #[error("the twistorial estimate degenerates in dimension {0}")]
    DegenerateDimension(usize),
    #[error("dimension {0} out of range for this formula")]
    DimOutOfRange(usize),
}

/// Input data for the estimates: dimension, minimal scalar curvature,
/// squared torsion norm and the torsion eigenvalue of interest.
#[derive(Debug, Clone)]
pub struct EstimateInput {
    pub n: usize,
    pub sca_g_min: Scalar,
    pub tnorm2: Scalar,
    pub gamma: Scalar,
}

impl EstimateInput {
    pub fn new(n: usize, sca_g_min: Scalar, tnorm2: Scalar, gamma: Scalar) -> Self {
        assert!(n >= 3);
        EstimateInput { n, sca_g_min, tnorm2, gamma }
    }

    fn gamma2(&self) -> Scalar {
        &self.gamma * &self.gamma
    }
}

/// Universal estimate `1/4 Sca_min + 1/8 |T|^2 - 1/4 gamma^2`.
pub fn beta_univ(input: &EstimateInput) -> Scalar {
    let quarter = Scalar::rational(1, 4);
    let eighth = Scalar::rational(1, 8);
    &(&(&quarter * &input.sca_g_min) + &(&eighth * &input.tnorm2)) - &(&quarter * &input.gamma2())
}

/// Twistorial estimate
/// `n/(4(n-1)) Sca + n(n-5)/(8(n-3)^2) |T|^2 + n(4-n)/(4(n-3)^2) gamma^2`.
pub fn beta_tw(input: &EstimateInput) -> Result<Scalar, EstimateError> {
    let n = input.n as i64;
    if n == 3 {
        return Err(EstimateError::DegenerateDimension(3));
    }
    let d = (n - 3) * (n - 3);
    let c_sca = Scalar::rational(n, 4 * (n - 1));
    let c_t = Scalar::rational(n * (n - 5), 8 * d);
    let c_g = Scalar::rational(n * (4 - n), 4 * d);
    Ok(&(&(&c_sca * &input.sca_g_min) + &(&c_t * &input.tnorm2)) + &(&c_g * &input.gamma2()))
}

/// The Killing criterion: the squared eigenvalue `gamma^2` a parallel
/// spinor must realize to be a Riemannian Killing spinor,
/// `gamma^2 = 4n/(9(n-1)) Sca^g`.
pub fn killing_criterion(n: usize, sca_g: &Scalar) -> Scalar {
    assert!(n >= 3);
    &Scalar::rational(4 * n as i64, 9 * (n as i64 - 1)) * sca_g
}

/// Low-dimensional variants of the criterion (valid for `3 < n <= 8`):
/// `gamma^2 = 2n |T|^2 / (9-n)` and `Sca^g = 9(n-1) |T|^2 / (2(9-n))`.
#[derive(Debug, Clone)]
pub struct LowDimVariants {
    pub gamma2: Scalar,
    pub sca_g: Scalar,
}

pub fn low_dim_variants(n: usize, tnorm2: &Scalar) -> Result<LowDimVariants, EstimateError> {
    if !(4..=8).contains(&n) {
        return Err(EstimateError::DimOutOfRange(n));
    }
    let n = n as i64;
    Ok(LowDimVariants {
        gamma2: &Scalar::rational(2 * n, 9 - n) * tnorm2,
        sca_g: &Scalar::rational(9 * (n - 1), 2 * (9 - n)) * tnorm2,
    })
}

/// Classification of one inequality evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IneqStatus {
    Strict,
    Equality,
    Violated,
}

impl IneqStatus {
    fn of(margin: &Scalar) -> IneqStatus {
        match margin.sign() {
            0 => IneqStatus::Equality,
            s if s > 0 => IneqStatus::Strict,
            _ => IneqStatus::Violated,
        }
    }
}

impl std::fmt::Display for IneqStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IneqStatus::Strict => "strict",
            IneqStatus::Equality => "equality",
            IneqStatus::Violated => "violated",
        };
        write!(f, "{s}")
    }
}

/// Outcome of [`inequality_suite`].
#[derive(Debug, Clone)]
pub struct InequalityReport {
    /// `0 <= 2n |T|^2 + (n-9) gamma^2`.
    pub torsion_bound: IneqStatus,
    /// `Sca^g <= 9(n-1)/(2(9-n)) |T|^2`.
    pub scalar_bound: IneqStatus,
    /// `beta_tw <= beta_univ`.
    pub estimate_comparison: IneqStatus,
    pub beta_univ: Scalar,
    pub beta_tw: Scalar,
    /// Set when the two estimates coincide: the parallel spinor is then a
    /// real Killing spinor with number `kappa`.
    pub killing_flag: bool,
    pub kappa: Scalar,
}

/// Evaluates both low-dimensional inequalities and the comparison of the
/// two estimates; equality of the estimates raises the Killing flag.
pub fn inequality_suite(input: &EstimateInput) -> Result<InequalityReport, EstimateError> {
    let n = input.n as i64;
    if !(4..=8).contains(&input.n) {
        return Err(EstimateError::DimOutOfRange(input.n));
    }
    let gamma2 = input.gamma2();
    let torsion_margin = &(&Scalar::from_integer(2 * n) * &input.tnorm2)
        + &(&Scalar::from_integer(n - 9) * &gamma2);
    let scalar_margin =
        &(&Scalar::rational(9 * (n - 1), 2 * (9 - n)) * &input.tnorm2) - &input.sca_g_min;
    let bu = beta_univ(input);
    let bt = beta_tw(input)?;
    let estimate_margin = &bu - &bt;
    let comparison = IneqStatus::of(&estimate_margin);
    let kappa = &Scalar::rational(3, 4 * n) * &input.gamma;
    Ok(InequalityReport {
        torsion_bound: IneqStatus::of(&torsion_margin),
        scalar_bound: IneqStatus::of(&scalar_margin),
        estimate_comparison: comparison,
        beta_univ: bu,
        beta_tw: bt,
        killing_flag: comparison == IneqStatus::Equality,
        kappa,
    })
}

/// The coefficient polynomial
/// `C(n,s) = [6(n-1)(1-4s)^2 + 96 s (1-4s) + 16 s (3-4s) (n-3)] / 16`,
/// so that a parallel twistor spinor forces
/// `Ric^s = (6 gamma^2 / n^2) C(n,s) Id`.
pub fn ric_coefficient_poly(n: usize) -> ScalarPoly {
    assert!(n >= 3);
    let n = n as i64;
    let s = ScalarPoly::var();
    let one = ScalarPoly::constant(Scalar::one());
    let one_minus_4s = &one - &s.scale(&Scalar::from_integer(4));
    let three_minus_4s = &ScalarPoly::constant(Scalar::from_integer(3))
        - &s.scale(&Scalar::from_integer(4));
    let t1 = (&one_minus_4s * &one_minus_4s).scale(&Scalar::from_integer(6 * (n - 1)));
    let t2 = (&s * &one_minus_4s).scale(&Scalar::from_integer(96));
    let t3 = (&s * &three_minus_4s).scale(&Scalar::from_integer(16 * (n - 3)));
    (&(&t1 + &t2) + &t3).scale(&Scalar::rational(1, 16))
}

/// `C(n, s)` at a concrete parameter value.
pub fn ric_coefficient(n: usize, s: &Scalar) -> Scalar {
    ric_coefficient_poly(n).eval(s)
}

/// The derived constants of a parallel spinor in the `gamma`-eigenspace,
/// as polynomials in whatever formal parameter `gamma` carries.
#[derive(Debug, Clone)]
pub struct SpinorConstants {
    pub kappa: ScalarPoly,
    pub zeta: ScalarPoly,
    pub sca_g: ScalarPoly,
    pub sca_c: ScalarPoly,
    /// `|T|^2` reconstructed from the low-dimensional criterion.
    pub tnorm2: ScalarPoly,
    pub dt_eigenvalue: ScalarPoly,
    pub sigma_eigenvalue: ScalarPoly,
    pub t_squared_eigenvalue: ScalarPoly,
    pub dirac_g_eigenvalue: ScalarPoly,
    pub cubic_eigenvalue: ScalarPoly,
    /// The distinguished parameter `(n-1)/(4(n-3))`; absent for `n = 3`.
    pub s_star: Option<Scalar>,
}

/// Constants attached to a `∇^c`-parallel spinor with `T`-eigenvalue
/// `gamma`, for the family member with parameter `s`.
pub fn spinor_constants(n: usize, gamma: &ScalarPoly, s: &ScalarPoly) -> SpinorConstants {
    assert!(n >= 3, "dimension must be at least 3");
    let n_i = n as i64;
    let gamma2 = gamma * gamma;
    let kappa = gamma.scale(&Scalar::rational(3, 4 * n_i));
    let one_minus_4s =
        &ScalarPoly::constant(Scalar::one()) - &s.scale(&Scalar::from_integer(4));
    let zeta = (gamma * &one_minus_4s).scale(&Scalar::rational(3, 4 * n_i));
    let sca_g = gamma2.scale(&Scalar::rational(9 * (n_i - 1), 4 * n_i));
    let sca_c = gamma2.scale(&Scalar::rational(3 * (n_i - 3), n_i));
    let tnorm2 = gamma2.scale(&Scalar::rational(9 - n_i, 2 * n_i));
    let dt_eigenvalue = gamma2.scale(&Scalar::rational(-3 * (n_i - 3), 2 * n_i));
    let sigma_eigenvalue = sca_c.scale(&Scalar::rational(-1, 4));
    let t_squared_eigenvalue = (&sca_g.scale(&Scalar::from_integer(2)) + &tnorm2)
        .scale(&Scalar::rational(1, 4));
    let dirac_g_eigenvalue = gamma.scale(&Scalar::rational(-3, 4));
    let cubic_eigenvalue = gamma.scale(&Scalar::rational(-1, 2));
    let s_star =
        (n > 3).then(|| Scalar::rational(n_i - 1, 4 * (n_i - 3)));
    let constants = SpinorConstants {
        kappa,
        zeta,
        sca_g,
        sca_c,
        tnorm2,
        dt_eigenvalue,
        sigma_eigenvalue,
        t_squared_eigenvalue,
        dirac_g_eigenvalue,
        cubic_eigenvalue,
        s_star,
    };
    // Internal consistency: T^2 acts on the eigenspace as gamma^2, and the
    // two expressions for the scalar curvatures agree.
    assert_eq!(constants.t_squared_eigenvalue, gamma2, "T^2 eigenvalue mismatch");
    let sca_g_alt = &gamma2.scale(&Scalar::from_integer(2))
        - &constants.tnorm2.scale(&Scalar::rational(1, 2));
    assert_eq!(constants.sca_g, sca_g_alt, "Sca^g expressions disagree");
    let sca_c_alt = (&gamma2 - &constants.tnorm2).scale(&Scalar::from_integer(2));
    assert_eq!(constants.sca_c, sca_c_alt, "Sca^c expressions disagree");
    constants
}

/// The distinguished twistor parameter `s* = (n-1)/(4(n-3))`.
pub fn special_s(n: usize) -> Result<Scalar, EstimateError> {
    if n <= 3 {
        return Err(EstimateError::DimOutOfRange(n));
    }
    Ok(Scalar::rational(n as i64 - 1, 4 * (n as i64 - 3)))
}
