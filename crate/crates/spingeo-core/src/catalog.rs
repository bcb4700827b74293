//! Built-in example spaces and scalar suites.
//!
//! Two constructed geometries: the round 3-sphere as `SU(2)` with the
//! bi-invariant metric normalized to sectional curvature one, and the
//! seven-dimensional Berger space `SO(5)/SO(3)` with the isotropy-
//! irreducible embedding.  Two formula-level suites check the scalar
//! tables of the six-dimensional nearly Kaehler and seven-dimensional
//! nearly parallel structures as polynomial identities in the torsion
//! constant.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::Multivector;
use crate::exactfield::{poly_identity, Scalar, ScalarPoly};
use crate::homspace::ReductiveSpace;
use crate::linalg::Mat;
use crate::spinrep::{GammaRep, VolumeSign};
use crate::torsion::TorsionContext;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog target `{0}`")]
    UnknownTarget(String),
    #[error("cannot parse space definition: {0}")]
    Parse(String),
    #[error("space definition is invalid: {0}")]
    Validation(String),
}

/// A ready-to-verify example: a validated space, its designated torsion,
/// the matching spin module and the torsion eigenvalue of interest,
/// together with the expected constants (which verification re-derives).
#[derive(Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub space: Arc<ReductiveSpace>,
    pub torsion: Multivector,
    pub rep: Arc<GammaRep>,
    pub gamma: Scalar,
    pub expected: ExpectedConstants,
}

/// Golden constants of an entry; every verification run recomputes each
/// of them from the structure constants.
#[derive(Debug, Clone)]
pub struct ExpectedConstants {
    pub tnorm2: Scalar,
    pub sca_g: Scalar,
    pub sca_c: Scalar,
    pub ric_g_coeff: Scalar,
    pub kappa: Scalar,
}

impl CatalogEntry {
    pub fn torsion_context(&self) -> TorsionContext {
        TorsionContext::from_space(self.space.clone(), self.torsion.clone())
            .expect("catalog torsion context")
    }
}

/// `su(2)` with `[e_i, e_j] = c eps_{ijk} e_k` (no isotropy part).
pub fn su2_space(c: i64) -> ReductiveSpace {
    let coeff = Scalar::from_integer(c);
    let mut entries = Vec::new();
    for (a, b, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
        let mut v = vec![Scalar::zero(); 3];
        v[k] = coeff.clone();
        entries.push((a, b, v));
    }
    ReductiveSpace::new("su2", 0, 3, entries)
}

/// The round 3-sphere: `su(2)` scaled to sectional curvature one, the
/// (canonical) volume torsion, and the spinor module in which the
/// designated torsion acts with the positive eigenvalue.
pub fn build_s3() -> CatalogEntry {
    let space = Arc::new(su2_space(2));
    let report = space.validate();
    assert!(report.all_passed(), "su(2) structure constants: {report:?}");
    let torsion = space.canonical_torsion().expect("canonical torsion");
    // The torsion is -2 e123; take the module where the volume element
    // acts as -Id, so that T acts as +2 and the frame constants of the
    // sphere come out with the usual signs.
    let rep = GammaRep::build_with_volume(3, VolumeSign::Minus).expect("dimension 3");
    CatalogEntry {
        name: "s3".into(),
        space,
        torsion,
        rep,
        gamma: Scalar::from_integer(2),
        expected: ExpectedConstants {
            tnorm2: Scalar::from_integer(4),
            sca_g: Scalar::from_integer(6),
            sca_c: Scalar::zero(),
            ric_g_coeff: Scalar::from_integer(2),
            kappa: Scalar::rational(1, 2),
        },
    }
}

/// The skew endomorphism mapping `e_i` to `e_j` and `e_j` to `-e_i`
/// (1-based indices) on `R^dim`.
pub fn e_matrix(dim: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(dim, dim);
    m[(j - 1, i - 1)] = Scalar::one();
    m[(i - 1, j - 1)] = Scalar::from_integer(-1);
    m
}

fn so5_inner(a: &Mat, b: &Mat) -> Scalar {
    // (A, B) = -(1/2) tr(AB).
    &a.matmul(b).trace() * &Scalar::rational(-1, 2)
}

/// The frozen `so(5)` basis of the Berger space: the irreducible `so(3)`
/// generators followed by the orthonormal frame of the complement.
fn berger_basis() -> (Vec<Mat>, Vec<Mat>) {
    let sqrt3 = Scalar::sqrt(3).expect("3 is square-free");
    let inv_sqrt5 = Scalar::sqrt(5).expect("5 is square-free").inverse().expect("non-zero");
    let half = Scalar::rational(1, 2);
    let two_over_sqrt5 = &Scalar::from_integer(2) * &inv_sqrt5;

    let lin = |terms: &[(Scalar, (usize, usize))]| -> Mat {
        let mut m = Mat::zeros(5, 5);
        for (c, (i, j)) in terms {
            m = &m + &e_matrix(5, *i, *j).scale(c);
        }
        m
    };

    // Isotropy basis: the image of the standard so(3) generators under the
    // irreducible embedding; each has squared length five.
    let k_basis = vec![
        lin(&[(sqrt3.clone(), (1, 5)), (Scalar::from_integer(-1), (2, 5)), (Scalar::one(), (3, 4))]),
        lin(&[(-&sqrt3, (1, 4)), (Scalar::from_integer(-1), (2, 4)), (Scalar::from_integer(-1), (3, 5))]),
        lin(&[(Scalar::from_integer(2), (2, 3)), (Scalar::one(), (4, 5))]),
    ];
    // Orthonormal frame of the complement.
    let m_basis = vec![
        lin(&[(Scalar::from_integer(-1), (1, 2))]),
        lin(&[(Scalar::from_integer(-1), (1, 3))]),
        lin(&[(-&half, (1, 4)), (&half * &sqrt3, (3, 5))]),
        lin(&[(inv_sqrt5.clone(), (2, 3)), (&Scalar::from_integer(-2) * &inv_sqrt5, (4, 5))]),
        lin(&[
            (two_over_sqrt5.clone(), (2, 5)),
            (&two_over_sqrt5 * &Scalar::rational(1, 4), (3, 4)),
            (&two_over_sqrt5 * &(&sqrt3 * &Scalar::rational(1, 4)), (1, 5)),
        ]),
        lin(&[(half.clone(), (1, 5)), (-&(&half * &sqrt3), (3, 4))]),
        lin(&[
            (two_over_sqrt5.clone(), (2, 4)),
            (&two_over_sqrt5 * &Scalar::rational(-1, 4), (3, 5)),
            (&two_over_sqrt5 * &(&sqrt3 * &Scalar::rational(-1, 4)), (1, 4)),
        ]),
    ];
    (k_basis, m_basis)
}

/// Squared lengths of the three isotropy generators with respect to
/// `(A, B) = -(1/2) tr(AB)`.
pub fn berger_isotropy_norms() -> Vec<Scalar> {
    let (k_basis, _) = berger_basis();
    k_basis.iter().map(|a| so5_inner(a, a)).collect()
}

/// The Berger space `SO(5)/SO(3)`: structure constants derived from the
/// frozen matrix basis.
pub fn berger_space() -> ReductiveSpace {
    let (k_basis, m_basis) = berger_basis();
    let mut basis = k_basis;
    basis.extend(m_basis);
    // Norms: 5 on the isotropy part, 1 on the frame; cross products vanish.
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expect = if i != j {
                Scalar::zero()
            } else if i < 3 {
                Scalar::from_integer(5)
            } else {
                Scalar::one()
            };
            assert_eq!(so5_inner(a, b), expect, "inner product ({i}, {j})");
        }
    }

    let mut entries = Vec::new();
    for a in 0..10 {
        for b in a + 1..10 {
            let commutator = basis[a].commutator(&basis[b]);
            let mut coeffs = Vec::with_capacity(10);
            let mut reconstructed = Mat::zeros(5, 5);
            for (k, e) in basis.iter().enumerate() {
                let norm = if k < 3 { Scalar::from_integer(5) } else { Scalar::one() };
                let c = &so5_inner(&commutator, e) / &norm;
                reconstructed = &reconstructed + &e.scale(&c);
                coeffs.push(c);
            }
            assert_eq!(reconstructed, commutator, "bracket ({a}, {b}) expands in the basis");
            entries.push((a, b, coeffs));
        }
    }
    ReductiveSpace::new("berger", 3, 7, entries)
}

/// The Berger space entry, with its canonical torsion and the real
/// eight-dimensional spinor module.
pub fn build_b7() -> CatalogEntry {
    let space = Arc::new(berger_space());
    let report = space.validate();
    assert!(report.all_passed(), "so(5) structure constants: {report:?}");
    let torsion = space.canonical_torsion().expect("canonical torsion");
    let rep = GammaRep::build(7).expect("dimension 7");
    let gamma = &Scalar::from_integer(-7) * &Scalar::sqrt(5).unwrap().inverse().unwrap();
    let kappa = &Scalar::from_integer(-3)
        * &(&Scalar::from_integer(4) * &Scalar::sqrt(5).unwrap()).inverse().unwrap();
    CatalogEntry {
        name: "b7".into(),
        space,
        torsion,
        rep,
        gamma,
        expected: ExpectedConstants {
            tnorm2: Scalar::rational(7, 5),
            sca_g: Scalar::rational(189, 10),
            sca_c: Scalar::rational(84, 5),
            ric_g_coeff: Scalar::rational(27, 10),
            kappa,
        },
    }
}

/// Reference realization of the Berger torsion as an endomorphism of the
/// real spinor module, frozen from the literature.  Its own basis differs
/// from ours, so comparisons go through basis-independent data
/// (characteristic polynomial, traces of powers).
pub fn berger_reference_torsion_matrix() -> Mat {
    let rows: [[i64; 8]; 8] = [
        [0, -1, -1, 1, -1, -1, 1, 1],
        [-1, 0, 1, -1, 1, 1, -1, -1],
        [-1, 1, 0, -1, 1, 1, -1, -1],
        [1, -1, -1, 0, -1, -1, 1, 1],
        [-1, 1, 1, -1, 0, 1, -1, -1],
        [-1, 1, 1, -1, 1, 0, -1, -1],
        [1, -1, -1, 1, -1, -1, 0, 1],
        [1, -1, -1, 1, -1, -1, 1, 0],
    ];
    let c = -&Scalar::sqrt(5).expect("5 is square-free").inverse().expect("non-zero");
    let mut m = Mat::zeros(8, 8);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if *v != 0 {
                m[(i, j)] = &c * &Scalar::from_integer(*v);
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// scalar suites

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Six-dimensional nearly Kaehler table.
    Nk6,
    /// Seven-dimensional nearly parallel table.
    Npg2,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Nk6 => "nk6-table",
            SuiteKind::Npg2 => "npg2-table",
        }
    }
}

/// One verified relation of a scalar suite.
pub struct SuiteRow {
    pub name: String,
    pub lhs: ScalarPoly,
    pub rhs: ScalarPoly,
    pub pass: bool,
}

pub struct ScalarSuite {
    pub kind: SuiteKind,
    pub rows: Vec<SuiteRow>,
}

impl ScalarSuite {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn row(rows: &mut Vec<SuiteRow>, name: &str, lhs: ScalarPoly, rhs: ScalarPoly) {
    let pass = poly_identity(&lhs, &rhs);
    rows.push(SuiteRow { name: name.into(), lhs, rhs, pass });
}

/// Verifies every relation of the chosen scalar table as an exact
/// polynomial identity in the structure constant `tau0`.
pub fn scalar_suite(kind: SuiteKind) -> ScalarSuite {
    match kind {
        SuiteKind::Nk6 => nk6_suite(),
        SuiteKind::Npg2 => npg2_suite(),
    }
}

fn nk6_suite() -> ScalarSuite {
    let n = 6i64;
    let tau = ScalarPoly::var();
    let mut rows = Vec::new();
    // Table data: |T|^2 = 2 tau, Sca^g = 15 tau, Sca^c = 12 tau,
    // Ric^g = (5/2) tau Id, gamma^2 = 4 |T|^2 = 8 tau.
    let tnorm2 = tau.scale(&Scalar::from_integer(2));
    let sca_g = tau.scale(&Scalar::from_integer(15));
    let sca_c = tau.scale(&Scalar::from_integer(12));
    let ric_g = tau.scale(&Scalar::rational(5, 2));
    let gamma2 = tau.scale(&Scalar::from_integer(8));

    row(&mut rows, "sca-g-from-gamma", sca_g.clone(), gamma2.scale(&Scalar::rational(9 * (n - 1), 4 * n)));
    row(&mut rows, "sca-g-from-torsion", sca_g.clone(), tnorm2.scale(&Scalar::rational(9 * (n - 1), 2 * (9 - n))));
    row(&mut rows, "gamma-from-torsion", gamma2.clone(), tnorm2.scale(&Scalar::rational(2 * n, 9 - n)));
    row(&mut rows, "killing-criterion", gamma2.clone(), sca_g.scale(&Scalar::rational(4 * n, 9 * (n - 1))));
    row(&mut rows, "sca-c-from-gamma", sca_c.clone(), gamma2.scale(&Scalar::rational(3 * (n - 3), n)));
    row(&mut rows, "sca-family-quarter", sca_c.clone(), &sca_g - &tnorm2.scale(&Scalar::rational(24, 16)));
    row(&mut rows, "sca-g-eigenspace", sca_g.clone(), &gamma2.scale(&Scalar::from_integer(2)) - &tnorm2.scale(&Scalar::rational(1, 2)));
    row(&mut rows, "sca-c-eigenspace", sca_c.clone(), (&gamma2 - &tnorm2).scale(&Scalar::from_integer(2)));
    row(&mut rows, "ric-g-coefficient", ric_g.clone(), gamma2.scale(&Scalar::rational(9 * (n - 1), 4 * n * n)));
    row(&mut rows, "ric-c-coefficient", tnorm2.clone(), gamma2.scale(&Scalar::rational(3 * (n - 3), n * n)));
    row(&mut rows, "killing-number-squared", tnorm2.scale(&Scalar::rational(1, 16)), gamma2.scale(&Scalar::rational(9, 16 * n * n)));
    row(&mut rows, "dt-eigenvalue", tnorm2.scale(&Scalar::from_integer(-3)), gamma2.scale(&Scalar::rational(-3 * (n - 3), 2 * n)));
    row(&mut rows, "sigma-eigenvalue", sca_c.scale(&Scalar::rational(-1, 4)), tau.scale(&Scalar::from_integer(-3)));
    row(&mut rows, "t-squared-eigenvalue", (&sca_g.scale(&Scalar::from_integer(2)) + &tnorm2).scale(&Scalar::rational(1, 4)), gamma2.clone());
    let beta_u = &(&sca_g.scale(&Scalar::rational(1, 4)) + &tnorm2.scale(&Scalar::rational(1, 8))) - &gamma2.scale(&Scalar::rational(1, 4));
    row(&mut rows, "universal-estimate", beta_u.clone(), sca_g.scale(&Scalar::rational(2, 15)));
    let d = (n - 3) * (n - 3);
    let beta_t = &(&sca_g.scale(&Scalar::rational(n, 4 * (n - 1))) + &tnorm2.scale(&Scalar::rational(n * (n - 5), 8 * d))) + &gamma2.scale(&Scalar::rational(n * (4 - n), 4 * d));
    row(&mut rows, "twistorial-estimate", beta_t, beta_u);
    for (label, s) in [("0", Scalar::zero()), ("1/12", Scalar::rational(1, 12)), ("1/4", Scalar::rational(1, 4)), ("1/2", Scalar::rational(1, 2))] {
        let c = crate::estimates::ric_coefficient(6, &s);
        let lhs = gamma2.scale(&(&Scalar::rational(6, n * n) * &c));
        let sixteen_s2 = &(&s * &s) * &Scalar::from_integer(16);
        let rhs = tau.scale(&(&(&Scalar::from_integer(5) - &sixteen_s2) * &Scalar::rational(1, 2)));
        row(&mut rows, &format!("ric-family-coefficient-s-{label}"), lhs, rhs);
    }
    ScalarSuite { kind: SuiteKind::Nk6, rows }
}

fn npg2_suite() -> ScalarSuite {
    let n = 7i64;
    let tau = ScalarPoly::var();
    let tau2 = &tau * &tau;
    let mut rows = Vec::new();
    // Table data: T = -(tau/6) omega, |T|^2 = (7/36) tau^2,
    // Ric^g = (3/8) tau^2 Id, Sca^g = (21/8) tau^2, Sca^c = (7/3) tau^2,
    // gamma = -(7/6) tau.
    let tnorm2 = tau2.scale(&Scalar::rational(7, 36));
    let sca_g = tau2.scale(&Scalar::rational(21, 8));
    let sca_c = tau2.scale(&Scalar::rational(7, 3));
    let ric_g = tau2.scale(&Scalar::rational(3, 8));
    let gamma = tau.scale(&Scalar::rational(-7, 6));
    let gamma2 = &gamma * &gamma;

    row(&mut rows, "torsion-norm-from-gamma", tnorm2.clone(), gamma2.scale(&Scalar::rational(9 - n, 2 * n)));
    row(&mut rows, "gamma-vs-torsion-norm", gamma2.clone(), tnorm2.scale(&Scalar::from_integer(7)));
    row(&mut rows, "sca-g-from-gamma", sca_g.clone(), gamma2.scale(&Scalar::rational(9 * (n - 1), 4 * n)));
    row(&mut rows, "sca-c-from-gamma", sca_c.clone(), gamma2.scale(&Scalar::rational(3 * (n - 3), n)));
    row(&mut rows, "sca-family-quarter", sca_c.clone(), &sca_g - &tnorm2.scale(&Scalar::rational(3, 2)));
    row(&mut rows, "ric-g-coefficient", ric_g.clone(), gamma2.scale(&Scalar::rational(9 * (n - 1), 4 * n * n)));
    row(&mut rows, "ric-c-coefficient", tau2.scale(&Scalar::rational(1, 3)), gamma2.scale(&Scalar::rational(3 * (n - 3), n * n)));
    row(&mut rows, "ric-c-from-s-tensor", tau2.scale(&Scalar::rational(1, 3)), &ric_g - &tau2.scale(&Scalar::rational(1, 24)));
    row(&mut rows, "killing-number", tau.scale(&Scalar::rational(-1, 8)), gamma.scale(&Scalar::rational(3, 4 * n)));
    row(&mut rows, "dirac-eigenvalue", tau.scale(&Scalar::rational(7, 8)), gamma.scale(&Scalar::rational(-3, 4)));
    row(&mut rows, "dt-eigenvalue", tnorm2.scale(&Scalar::from_integer(-6)), gamma2.scale(&Scalar::rational(-3 * (n - 3), 2 * n)));
    row(&mut rows, "sigma-eigenvalue", sca_c.scale(&Scalar::rational(-1, 4)), tau2.scale(&Scalar::rational(-7, 12)));
    row(&mut rows, "t-squared-eigenvalue", (&sca_g.scale(&Scalar::from_integer(2)) + &tnorm2).scale(&Scalar::rational(1, 4)), gamma2.clone());
    let sl_constant = &(&sca_g.scale(&Scalar::rational(1, 4)) - &gamma2.scale(&Scalar::rational(1, 4))) + &tnorm2.scale(&Scalar::rational(1, 8));
    row(&mut rows, "cubic-dirac-square", gamma2.scale(&Scalar::rational(1, 4)), sl_constant);
    let beta_u = &(&sca_g.scale(&Scalar::rational(1, 4)) + &tnorm2.scale(&Scalar::rational(1, 8))) - &gamma2.scale(&Scalar::rational(1, 4));
    row(&mut rows, "universal-estimate", beta_u.clone(), sca_g.scale(&Scalar::rational(7, 54)));
    let d = (n - 3) * (n - 3);
    let beta_t = &(&sca_g.scale(&Scalar::rational(n, 4 * (n - 1))) + &tnorm2.scale(&Scalar::rational(n * (n - 5), 8 * d))) + &gamma2.scale(&Scalar::rational(n * (4 - n), 4 * d));
    row(&mut rows, "twistorial-estimate", beta_t, beta_u);
    for (label, s) in [("0", Scalar::zero()), ("1/12", Scalar::rational(1, 12)), ("1/4", Scalar::rational(1, 4)), ("1/2", Scalar::rational(1, 2))] {
        let c = crate::estimates::ric_coefficient(7, &s);
        let lhs = gamma2.scale(&(&Scalar::rational(6, n * n) * &c));
        let sixteen_s2 = &(&s * &s) * &Scalar::from_integer(16);
        let rhs = tau2.scale(&(&(&Scalar::from_integer(9) - &sixteen_s2) * &Scalar::rational(1, 24)));
        row(&mut rows, &format!("ric-family-coefficient-s-{label}"), lhs, rhs);
        let zeta = tau.scale(&(&(&(&s * &Scalar::from_integer(4)) - &Scalar::one()) * &Scalar::rational(1, 8)));
        let zeta_general = gamma.scale(&(&(&Scalar::one() - &(&s * &Scalar::from_integer(4))) * &Scalar::rational(3, 4 * n)));
        row(&mut rows, &format!("killing-number-family-s-{label}"), zeta, zeta_general);
    }
    ScalarSuite { kind: SuiteKind::Npg2, rows }
}

// ---------------------------------------------------------------------------
// JSON space definitions

/// `[a, b, [[k, coeff], ...]]`: one bracket `[x_a, x_b]` with its target
/// coefficients.
pub type BracketEntry = (usize, usize, Vec<(usize, String)>);

#[derive(Debug, Serialize, Deserialize)]
pub struct SpaceDefinition {
    pub name: String,
    #[serde(default)]
    pub field: FieldDefinition,
    pub dim_k: usize,
    pub dim_m: usize,
    /// Brackets over the combined 0-based basis (isotropy first).
    pub brackets: Vec<BracketEntry>,
    /// `"canonical"` or explicit 3-form terms `[[i, j, k], coeff]`
    /// (1-based frame indices).
    #[serde(default)]
    pub torsion: TorsionDefinition,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct FieldDefinition {
    #[serde(default)]
    pub radicals: Vec<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TorsionDefinition {
    Named(String),
    Explicit(Vec<(Vec<usize>, String)>),
}

impl Default for TorsionDefinition {
    fn default() -> Self {
        TorsionDefinition::Named("canonical".into())
    }
}

/// Loads and fully validates a user space from its JSON definition.
pub fn load_space(json: &str) -> Result<CatalogEntry, CatalogError> {
    let def: SpaceDefinition =
        serde_json::from_str(json).map_err(|e| CatalogError::Parse(e.to_string()))?;
    Scalar::validate_tower(&def.field.radicals)
        .map_err(|e| CatalogError::Validation(e.to_string()))?;
    if !(3..=8).contains(&def.dim_m) {
        return Err(CatalogError::Validation(format!(
            "frame dimension {} outside the supported range 3..=8",
            def.dim_m
        )));
    }
    let dim = def.dim_k + def.dim_m;
    let parse = |text: &str| -> Result<Scalar, CatalogError> {
        let v = Scalar::parse(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        for d in v.tower() {
            if !def.field.radicals.contains(d) {
                return Err(CatalogError::Validation(format!(
                    "coefficient `{text}` uses radical {d} not declared in the field"
                )));
            }
        }
        Ok(v)
    };
    let mut entries = Vec::new();
    for (a, b, terms) in &def.brackets {
        if *a >= dim || *b >= dim {
            return Err(CatalogError::Validation(format!(
                "bracket index ({a}, {b}) out of range for dimension {dim}"
            )));
        }
        let mut coeffs = vec![Scalar::zero(); dim];
        for (k, text) in terms {
            if *k >= dim {
                return Err(CatalogError::Validation(format!(
                    "bracket target index {k} out of range"
                )));
            }
            coeffs[*k] = parse(text)?;
        }
        entries.push((*a, *b, coeffs));
    }
    let space = Arc::new(ReductiveSpace::new(def.name.clone(), def.dim_k, def.dim_m, entries));
    let report = space.validate();
    if !report.all_passed() {
        let failed: Vec<String> = report
            .checks()
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.witness.clone().unwrap_or_default()))
            .collect();
        return Err(CatalogError::Validation(failed.join("; ")));
    }
    let torsion = match &def.torsion {
        TorsionDefinition::Named(name) if name == "canonical" => space
            .canonical_torsion()
            .map_err(|e| CatalogError::Validation(e.to_string()))?,
        TorsionDefinition::Named(other) => {
            return Err(CatalogError::Validation(format!("unknown torsion `{other}`")));
        }
        TorsionDefinition::Explicit(terms) => {
            let mut t = Multivector::zero(def.dim_m);
            for (indices, text) in terms {
                if indices.len() != 3 {
                    return Err(CatalogError::Validation(format!(
                        "torsion term {indices:?} is not a 3-form index triple"
                    )));
                }
                let mut sorted = indices.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(CatalogError::Validation(format!(
                        "torsion term {indices:?} has a repeated index and is not skew"
                    )));
                }
                let c = parse(text)?;
                let blade = Multivector::blade(def.dim_m, indices, c)
                    .map_err(|e| CatalogError::Validation(e.to_string()))?;
                t = &t + &blade;
            }
            let invariant = space
                .is_invariant(&t)
                .map_err(|e| CatalogError::Validation(e.to_string()))?;
            if !invariant {
                return Err(CatalogError::Validation(
                    "torsion form is not isotropy-invariant".into(),
                ));
            }
            t
        }
    };
    let rep = GammaRep::build(def.dim_m).map_err(|e| CatalogError::Validation(e.to_string()))?;
    // Derived golden data for user spaces: recomputed rather than declared.
    let tnorm2 = torsion
        .three_form_norm_sq()
        .map_err(|e| CatalogError::Validation(e.to_string()))?;
    let sca_g = space.scalar_curvature(&Scalar::zero());
    let sca_c = crate::torsion::sca_s(&sca_g, &tnorm2, &Scalar::rational(1, 4));
    let n = def.dim_m as i64;
    let expected = ExpectedConstants {
        tnorm2,
        sca_g: sca_g.clone(),
        sca_c,
        ric_g_coeff: &sca_g * &Scalar::rational(1, n),
        kappa: Scalar::zero(),
    };
    Ok(CatalogEntry { name: def.name, space, torsion, rep, gamma: Scalar::zero(), expected })
}

/// Serializes a catalog entry back into the JSON space-definition schema.
pub fn to_json(entry: &CatalogEntry) -> String {
    let dim = entry.space.dim();
    let mut radicals: Vec<i64> = Vec::new();
    let mut brackets = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let coeffs = entry.space.bracket(a, b);
            let mut terms = Vec::new();
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    for d in c.tower() {
                        if !radicals.contains(d) {
                            radicals.push(*d);
                        }
                    }
                    terms.push((k, format!("{c}")));
                }
            }
            if !terms.is_empty() {
                brackets.push((a, b, terms));
            }
        }
    }
    let mut torsion_terms = Vec::new();
    for (mask, c) in entry.torsion.terms() {
        let idx: Vec<usize> =
            (0..entry.space.dim_m).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        for d in c.tower() {
            if !radicals.contains(d) {
                radicals.push(*d);
            }
        }
        torsion_terms.push((idx, format!("{c}")));
    }
    radicals.sort_unstable();
    let def = SpaceDefinition {
        name: entry.name.clone(),
        field: FieldDefinition { radicals },
        dim_k: entry.space.dim_k,
        dim_m: entry.space.dim_m,
        brackets,
        torsion: TorsionDefinition::Explicit(torsion_terms),
    };
    serde_json::to_string_pretty(&def).expect("schema serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;

    #[test]
    fn berger_bracket_is_cyclic() {
        let space = berger_space();
        assert!(space.validate().all_passed());
        let c = testutil::inv_sqrt5();
        for i in 0..7usize {
            let j = (i + 1) % 7;
            let target = (i + 3) % 7;
            let bm = space.bracket_m(i, j);
            for (k, v) in bm.iter().enumerate() {
                let expect = if k == target { c.clone() } else { Scalar::zero() };
                assert_eq!(*v, expect, "[e_{}, e_{}] component {}", i + 1, j + 1, k + 1);
            }
        }
    }

    #[test]
    fn berger_torsion_matches_frozen_form() {
        let entry = build_b7();
        assert_eq!(entry.torsion, testutil::berger_torsion());
        assert_eq!(
            entry.torsion.three_form_norm_sq().unwrap(),
            Scalar::rational(7, 5)
        );
        // omega = -sqrt5 T has squared norm 7.
        let omega = entry.torsion.scale(&-&Scalar::sqrt(5).unwrap());
        assert_eq!(omega.coeff_norm_sq(), Scalar::from_integer(7));
    }

    #[test]
    fn sphere_entry_constants() {
        let entry = build_s3();
        let ric = entry.space.ricci(&Scalar::zero());
        assert_eq!(ric, Mat::identity(3).scale(&entry.expected.ric_g_coeff));
        assert_eq!(entry.space.scalar_curvature(&Scalar::zero()), entry.expected.sca_g);
        // Designated torsion acts as +2 on the chosen module.
        let t_act = entry.rep.act_matrix(&entry.torsion).unwrap();
        assert_eq!(t_act, Mat::identity(2).scale(&Scalar::from_integer(2)));
    }

    #[test]
    fn scalar_suites_pass() {
        for kind in [SuiteKind::Nk6, SuiteKind::Npg2] {
            let suite = scalar_suite(kind);
            assert!(suite.rows.len() >= 12, "{:?} has {} rows", kind, suite.rows.len());
            for r in &suite.rows {
                assert!(
                    r.pass,
                    "{} failed: {} vs {}",
                    r.name,
                    r.lhs.to_string_with_var("tau0"),
                    r.rhs.to_string_with_var("tau0")
                );
            }
        }
    }

    #[test]
    fn json_round_trip_berger() {
        let entry = build_b7();
        let json = to_json(&entry);
        let loaded = load_space(&json).unwrap();
        assert_eq!(loaded.torsion, entry.torsion);
        assert_eq!(
            loaded.space.scalar_curvature(&Scalar::zero()),
            Scalar::rational(189, 10)
        );
        assert_eq!(loaded.expected.tnorm2, Scalar::rational(7, 5));
    }

    #[test]
    fn json_rejects_bad_torsion() {
        let json = r#"{
            "name": "bad",
            "field": {"radicals": []},
            "dim_k": 0,
            "dim_m": 3,
            "brackets": [[0, 1, [[2, "2"]]], [1, 2, [[0, "2"]]], [2, 0, [[1, "2"]]]],
            "torsion": [[[1, 1, 2], "1"]]
        }"#;
        match load_space(json) {
            Err(CatalogError::Validation(msg)) => assert!(msg.contains("repeated index")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn json_user_space_rescaled_sphere() {
        // su(2) with bracket constant 1: Ric^g = (1/2) Id.
        let json = r#"{
            "name": "small-sphere",
            "field": {"radicals": []},
            "dim_k": 0,
            "dim_m": 3,
            "brackets": [[0, 1, [[2, "1"]]], [1, 2, [[0, "1"]]], [2, 0, [[1, "1"]]]],
            "torsion": "canonical"
        }"#;
        let entry = load_space(json).unwrap();
        let ric = entry.space.ricci(&Scalar::zero());
        assert_eq!(ric, Mat::identity(3).scale(&Scalar::rational(1, 2)));
    }

    #[test]
    fn json_rejects_broken_jacobi() {
        let json = r#"{
            "name": "broken",
            "field": {"radicals": []},
            "dim_k": 0,
            "dim_m": 3,
            "brackets": [[0, 1, [[1, "1"]]], [1, 2, [[0, "1"]]]],
            "torsion": "canonical"
        }"#;
        match load_space(json) {
            Err(CatalogError::Validation(msg)) => assert!(msg.contains("jacobi"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn json_rejects_non_reductive_metric() {
        // A valid Lie algebra whose bracket 3-tensor is not totally skew.
        let json = r#"{
            "name": "non-skew",
            "field": {"radicals": []},
            "dim_k": 0,
            "dim_m": 3,
            "brackets": [[0, 1, [[2, "2"]]], [1, 2, [[0, "2"]]], [0, 2, [[1, "2"]]]],
            "torsion": "canonical"
        }"#;
        match load_space(json) {
            Err(CatalogError::Validation(msg)) => {
                assert!(msg.contains("natural-reductivity"), "{msg}")
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }
}
