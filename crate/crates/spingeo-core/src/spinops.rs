//! Spinor-level differential operators on invariant spinors.
//!
//! On a naturally reductive space the relevant spinor fields correspond to
//! constant maps into the spinor module, so every operator below is a
//! finite matrix: the covariant derivative of the connection with skew
//! torsion `H` acts on constants as
//! `∇^H_X φ = Λ̃^g(X) φ + (1/4)(X ⌟ H)·φ`, the Dirac operator is
//! `D^H = sum_i e_i · ∇^H_{e_i}`, and the twistor operator collects the
//! residuals `∇^H_{e_i} φ + (1/n) e_i · D^H φ`.  The family
//! `∇^s = ∇^g + 2sT` is the special case `H = 4sT`.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::clifford::{CliffordError, Multivector};
use crate::exactfield::{Scalar, ScalarPoly};
use crate::homspace::HomError;
use crate::linalg::{columns, same_column_span, Mat};
use crate::spinrep::{GammaRep, SpinError, SpinorVec};
use crate::torsion::{sca_s, TorsionContext, TorsionError};

#[derive(Debug, Error)]
pub enum SpinOpsError {
    #[error("dimension mismatch between space, representation and context")]
    DimMismatch,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("spectrum not resolved exactly; float fallback also failed: {0}")]
    SpectrumNotResolved(String),
    #[error("spinor is not a T-eigenspinor")]
    NotTEigenspinor,
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
}

/// A homogeneous space with a spin representation and a torsion context;
/// caches the Levi-Civita Nomizu maps, their spin lifts, and the family
/// Ricci tensors.
pub struct SpinGeometry {
    pub rep: Arc<GammaRep>,
    pub ctx: TorsionContext,
    lambda_g: Vec<Mat>,
    lambda_g_lift: Vec<Mat>,
    ricci_cache: std::sync::Mutex<std::collections::BTreeMap<String, Mat>>,
    conv_cache: std::sync::OnceLock<Vec<(Mat, Mat)>>,
}

impl SpinGeometry {
    pub fn new(rep: Arc<GammaRep>, ctx: TorsionContext) -> Result<Self, SpinOpsError> {
        let space = ctx.space.clone().ok_or(TorsionError::FormulaModeUnsupported)?;
        if space.dim_m != rep.frame_dim() || ctx.dim() != rep.frame_dim() {
            return Err(SpinOpsError::DimMismatch);
        }
        let lambda_g = space.nomizu_family(&Scalar::zero());
        let lambda_g_lift = lambda_g
            .iter()
            .map(|m| rep.spin_lift(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpinGeometry {
            rep,
            ctx,
            lambda_g,
            lambda_g_lift,
            ricci_cache: std::sync::Mutex::new(std::collections::BTreeMap::new()),
            conv_cache: std::sync::OnceLock::new(),
        })
    }

    pub fn space(&self) -> &Arc<crate::homspace::ReductiveSpace> {
        self.ctx.space.as_ref().expect("constructor guarantees a space")
    }

    pub fn frame_dim(&self) -> usize {
        self.rep.frame_dim()
    }

    pub fn spinor_dim(&self) -> usize {
        self.rep.spinor_dim()
    }

    /// The Levi-Civita Nomizu map of the frame vector `e_i` (1-based).
    pub fn levi_civita_map(&self, i: usize) -> &Mat {
        &self.lambda_g[i - 1]
    }

    /// Its lift to the spinor module.
    pub fn levi_civita_lift(&self, i: usize) -> &Mat {
        &self.lambda_g_lift[i - 1]
    }

    fn frame_vector(&self, i: usize) -> Multivector {
        Multivector::basis_vector(self.frame_dim(), i).expect("frame index")
    }

    /// `∇^H_{e_i}` as a matrix on the spinor module.
    pub fn nabla_matrix(&self, i: usize, torsion: &Multivector) -> Result<Mat, SpinOpsError> {
        let x = self.frame_vector(i);
        let xt = x.contract(torsion)?;
        let act = self.rep.act_matrix(&xt)?;
        Ok(&self.lambda_g_lift[i - 1] + &act.scale(&Scalar::rational(1, 4)))
    }

    /// Covariant derivative `∇^H_X φ` of an invariant spinor along a frame
    /// vector (1-based index).
    pub fn nabla_spinor(
        &self,
        i: usize,
        phi: &SpinorVec,
        torsion: &Multivector,
    ) -> Result<SpinorVec, SpinOpsError> {
        let m = self.nabla_matrix(i, torsion)?;
        Ok(SpinorVec::from_components(m.apply(&phi.components)))
    }

    /// `D^H` as a matrix: `sum_i gamma_i ∇^H_{e_i}`.
    pub fn dirac_matrix(&self, torsion: &Multivector) -> Result<Mat, SpinOpsError> {
        let d = self.spinor_dim();
        let mut out = Mat::zeros(d, d);
        for i in 1..=self.frame_dim() {
            let nab = self.nabla_matrix(i, torsion)?;
            out = &out + &self.rep.gamma(i).matmul(&nab);
        }
        Ok(out)
    }

    pub fn dirac(&self, phi: &SpinorVec, torsion: &Multivector) -> Result<SpinorVec, SpinOpsError> {
        let m = self.dirac_matrix(torsion)?;
        Ok(SpinorVec::from_components(m.apply(&phi.components)))
    }

    /// The family torsion `4sT` of `∇^s = ∇^g + 2sT`.
    pub fn family_torsion(&self, s: &Scalar) -> Multivector {
        self.ctx.torsion.scale(&(&Scalar::from_integer(4) * s))
    }

    /// Twistor residuals `∇^H_{e_i} φ + (1/n) e_i · D^H φ`, one per frame
    /// vector; all zero iff `φ` is in the kernel of the twistor operator.
    pub fn twistor_residual(
        &self,
        phi: &SpinorVec,
        torsion: &Multivector,
    ) -> Result<Vec<SpinorVec>, SpinOpsError> {
        let n = self.frame_dim();
        let dphi = self.dirac(phi, torsion)?;
        let inv_n = Scalar::rational(1, n as i64);
        let mut out = Vec::with_capacity(n);
        for i in 1..=n {
            let nab = self.nabla_spinor(i, phi, torsion)?;
            let xd = self.rep.act(&self.frame_vector(i), &dphi)?;
            out.push(&nab + &xd.scale(&inv_n));
        }
        Ok(out)
    }

    /// The stacked twistor-residual matrices for kernel computations.
    pub fn twistor_matrices(&self, torsion: &Multivector) -> Result<Vec<Mat>, SpinOpsError> {
        let n = self.frame_dim();
        let dm = self.dirac_matrix(torsion)?;
        let inv_n = Scalar::rational(1, n as i64);
        (1..=n)
            .map(|i| {
                let nab = self.nabla_matrix(i, torsion)?;
                let gd = self.rep.gamma(i).matmul(&dm).scale(&inv_n);
                Ok(&nab + &gd)
            })
            .collect()
    }

    /// Basis of the isotropy-invariant `∇^c`-parallel spinors (parallel
    /// sections correspond to isotropy-fixed constants annihilated by the
    /// characteristic covariant derivative).
    pub fn parallel_basis(&self) -> Result<Vec<SpinorVec>, SpinOpsError> {
        Ok(mat_kernel_basis(&self.parallel_stack()?))
    }

    fn parallel_stack(&self) -> Result<Mat, SpinOpsError> {
        let space = self.space().clone();
        let d = self.spinor_dim();
        let mut stack = Mat::zeros(0, d);
        for a in 0..space.dim_k {
            let lifted = self.rep.spin_lift(&space.isotropy_action(a))?;
            stack = stack.vstack(&lifted);
        }
        for i in 1..=self.frame_dim() {
            stack = stack.vstack(&self.nabla_matrix(i, &self.ctx.torsion)?);
        }
        Ok(stack)
    }

    /// The spinor-bundle curvature of the family member with torsion
    /// `t * T`: the lift of the frame curvature endomorphism.
    pub fn spinor_curvature(&self, t: &Scalar) -> Result<Vec<Vec<Mat>>, SpinOpsError> {
        let curv = self.space().curvature(t);
        let n = self.frame_dim();
        let mut out = vec![vec![Mat::zeros(0, 0); n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = self.rep.spin_lift(&curv.r[i][j])?;
            }
        }
        Ok(out)
    }

    /// Exact eigenvalue `gamma` with `T · φ = gamma φ`, if any.
    pub fn t_eigenvalue_of(&self, phi: &SpinorVec) -> Result<Scalar, SpinOpsError> {
        if phi.is_zero() {
            return Err(SpinOpsError::NotTEigenspinor);
        }
        let tphi = self.rep.act(&self.ctx.torsion, phi)?;
        let k = phi
            .components
            .iter()
            .position(|c| !c.is_zero())
            .expect("non-zero spinor");
        let gamma = &tphi.components[k] / &phi.components[k];
        let expect = phi.scale(&gamma);
        if tphi == expect {
            Ok(gamma)
        } else {
            Err(SpinOpsError::NotTEigenspinor)
        }
    }

    /// Spectrum of the symmetric endomorphism `T` on the spinor module.
    ///
    /// The characteristic polynomial is computed exactly; a float root
    /// finder only locates candidates, which are then lifted back into the
    /// scalar field and verified by exact polynomial division.  If the
    /// lift fails the float spectrum is returned with `exact = false`.
    pub fn t_spectrum(&self) -> Result<TSpectrum, SpinOpsError> {
        let t_mat = self.rep.act_matrix(&self.ctx.torsion)?;
        let chi = t_mat.char_poly();
        // Locate roots on the square-free part, where they are simple and
        // the float root finder is sharp.
        let sf = chi.square_free_part();
        let deg = sf.degree().unwrap_or(0);
        let coeffs: Vec<(f64, f64)> = (0..=deg).map(|k| sf.coeff(k).to_complex64()).collect();
        let roots = durand_kerner(&coeffs).map_err(SpinOpsError::SpectrumNotResolved)?;
        let located = cluster_real(&roots);

        // Candidate radicals: anything the torsion coefficients use.
        let mut radicals: Vec<i64> = Vec::new();
        for (_, c) in self.ctx.torsion.terms() {
            for &d in c.tower() {
                if !radicals.contains(&d) {
                    radicals.push(d);
                }
            }
        }
        let mut exact: Vec<(Scalar, usize)> = Vec::new();
        let mut float_eigenvalues: Vec<(f64, usize)> = Vec::new();
        let mut lifted_all = true;
        let x = ScalarPoly::var();
        let mut remainder_poly = chi.clone();
        for &(value, _) in &located {
            let Some(gamma) = recognize_scalar(value, &radicals) else {
                lifted_all = false;
                break;
            };
            // Exact multiplicity: divide the characteristic polynomial by
            // (x - gamma) as often as it stays exact.
            let factor = &x - &ScalarPoly::constant(gamma.clone());
            let mut mult = 0usize;
            loop {
                let (q, r) = remainder_poly.div_rem(&factor);
                if r.is_zero() {
                    remainder_poly = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult == 0 {
                lifted_all = false;
                break;
            }
            exact.push((gamma, mult));
            float_eigenvalues.push((value, mult));
        }
        // Everything is accounted for exactly when only the (monic) leading
        // constant survives the divisions.
        lifted_all = lifted_all
            && remainder_poly.degree() == Some(0)
            && exact.iter().map(|(_, m)| m).sum::<usize>() == self.spinor_dim();
        if !lifted_all {
            // Float fallback: cluster the roots of the full polynomial.
            let deg = chi.degree().unwrap_or(0);
            let coeffs: Vec<(f64, f64)> =
                (0..=deg).map(|k| chi.coeff(k).to_complex64()).collect();
            let roots = durand_kerner(&coeffs).map_err(SpinOpsError::SpectrumNotResolved)?;
            return Ok(TSpectrum {
                eigenvalues: Vec::new(),
                eigenbasis: Vec::new(),
                float_eigenvalues: cluster_real(&roots),
                exact: false,
            });
        }
        let mut eigenbasis = Vec::new();
        let d = self.spinor_dim();
        for (gamma, mult) in &exact {
            let shifted = &t_mat - &Mat::identity(d).scale(gamma);
            let basis: Vec<SpinorVec> = shifted
                .nullspace()
                .into_iter()
                .map(SpinorVec::from_components)
                .collect();
            if basis.len() != *mult {
                return Ok(TSpectrum {
                    eigenvalues: Vec::new(),
                    eigenbasis: Vec::new(),
                    float_eigenvalues,
                    exact: false,
                });
            }
            eigenbasis.push((gamma.clone(), basis));
        }
        Ok(TSpectrum { eigenvalues: exact, eigenbasis, float_eigenvalues, exact: true })
    }

    /// Exact basis of the `gamma`-eigenspace of `T`.
    pub fn t_eigenspace(&self, gamma: &Scalar) -> Result<Vec<SpinorVec>, SpinOpsError> {
        let t_mat = self.rep.act_matrix(&self.ctx.torsion)?;
        let shifted = &t_mat - &Mat::identity(self.spinor_dim()).scale(gamma);
        Ok(shifted.nullspace().into_iter().map(SpinorVec::from_components).collect())
    }

    /// Checks the two eigenspinor relations of a `∇^c`-parallel Killing
    /// spinor: `(X ⌟ T)·φ + (3γ/n) X·φ = 0` and
    /// `(X ∧ T)·φ = ((n-3)γ/n) X·φ` for every frame vector.
    pub fn eigenspinor_relation_check(&self, phi: &SpinorVec) -> Result<bool, SpinOpsError> {
        let gamma = self.t_eigenvalue_of(phi)?;
        let n = self.frame_dim();
        let contraction_coeff = &gamma * &Scalar::rational(3, n as i64);
        let wedge_coeff = &gamma * &Scalar::rational(n as i64 - 3, n as i64);
        for i in 1..=n {
            let x = self.frame_vector(i);
            let xphi = self.rep.act(&x, phi)?;
            let xt = x.contract(&self.ctx.torsion)?;
            let lhs1 = &self.rep.act(&xt, phi)? + &xphi.scale(&contraction_coeff);
            if !lhs1.is_zero() {
                return Ok(false);
            }
            let xw = x.wedge(&self.ctx.torsion)?;
            let lhs2 = &self.rep.act(&xw, phi)? - &xphi.scale(&wedge_coeff);
            if !lhs2.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Ricci endomorphism of the family member `∇^s` as a frame matrix,
    /// from the curvature engine.
    pub fn ricci_s(&self, s: &Scalar) -> Result<Mat, SpinOpsError> {
        let key = format!("{s}");
        if let Some(m) = self.ricci_cache.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let h = self.family_torsion(s);
        let m = self.space().ricci_with_torsion(&h)?;
        self.ricci_cache.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    /// Clifford action of the vector `Ric^s(X) = sum_j Ric^s(X, e_j) e_j`.
    fn ricci_vector_action(
        &self,
        ric: &Mat,
        i: usize,
        phi: &SpinorVec,
    ) -> Result<SpinorVec, SpinOpsError> {
        let n = self.frame_dim();
        let mut v = Multivector::zero(n);
        for j in 0..n {
            if !ric[(i - 1, j)].is_zero() {
                v = &v + &Multivector::blade(n, &[j + 1], ric[(i - 1, j)].clone())?;
            }
        }
        Ok(self.rep.act(&v, phi)?)
    }

    /// Applies the two-by-two block connection on `Σ ⊕ Σ` along the frame
    /// vector `e_i`: the operator whose parallel sections are exactly the
    /// pairs `(φ, D^s φ)` with `φ` a twistor spinor of `∇^s`.
    pub fn super_connection_apply(
        &self,
        i: usize,
        phi1: &SpinorVec,
        phi2: &SpinorVec,
        s: &Scalar,
    ) -> Result<(SpinorVec, SpinorVec), SpinOpsError> {
        let n = self.frame_dim() as i64;
        let h = self.family_torsion(s);
        let x = self.frame_vector(i);
        let first = {
            let nab = self.nabla_spinor(i, phi1, &h)?;
            let xphi2 = self.rep.act(&x, phi2)?;
            &nab + &xphi2.scale(&Scalar::rational(1, n))
        };

        let ric = self.ricci_s(s)?;
        let sca = ric.trace();
        // Schouten term: -(n/2) * (1/(n-2)) [ -Ric^s(X) + Sca^s/(2(n-1)) X ] φ1.
        let ric_x_phi = self.ricci_vector_action(&ric, i, phi1)?;
        let x_phi1 = self.rep.act(&x, phi1)?;
        let schouten = &(-&ric_x_phi) + &x_phi1.scale(&(&sca * &Scalar::rational(1, 2 * (n - 1))));
        let mut second = schouten.scale(&Scalar::rational(-n, 2 * (n - 2)));

        // -(s n (3-4s) / ((n-1)(n-2))) [ X·dT + (n-1)(X ⌟ sigma_T) ] φ1.
        let three_minus_4s = &Scalar::from_integer(3) - &(&Scalar::from_integer(4) * s);
        let c1 = &(&(s * &Scalar::from_integer(n)) * &three_minus_4s)
            * &Scalar::rational(-1, (n - 1) * (n - 2));
        if !c1.is_zero() {
            let x_dt = x.geometric_product(&self.ctx.dt)?;
            let x_sigma = x.contract(&self.ctx.sigma)?;
            let combo = &x_dt + &x_sigma.scale(&Scalar::from_integer(n - 1));
            second = &second + &self.rep.act(&combo, phi1)?.scale(&c1);
        }

        // -(s n / ((n-1)(n-2))) [ (8(n-1)/n)(X ⌟ T) + (12/n) X·T ] φ2.
        let c2 = &(s * &Scalar::from_integer(n)) * &Scalar::rational(-1, (n - 1) * (n - 2));
        if !c2.is_zero() {
            let xt = x.contract(&self.ctx.torsion)?.scale(&Scalar::rational(8 * (n - 1), n));
            let x_t = x.geometric_product(&self.ctx.torsion)?.scale(&Scalar::rational(12, n));
            let combo = &xt + &x_t;
            second = &second + &self.rep.act(&combo, phi2)?.scale(&c2);
        }

        second = &second + &self.nabla_spinor(i, phi2, &h)?;
        Ok((first, second))
    }

    /// The four coinciding spinor classes, as exact
    /// subspaces of the spinor module (columns of each matrix):
    /// parallel spinors, Riemannian Killing spinors in the eigenspace,
    /// Killing spinors with torsion, and characteristic twistor spinors.
    pub fn coincidence_classes(
        &self,
        gamma: &Scalar,
        s: &Scalar,
    ) -> Result<SpinorClasses, SpinOpsError> {
        let n = self.frame_dim() as i64;
        let d = self.spinor_dim();
        let t_mat = self.rep.act_matrix(&self.ctx.torsion)?;
        let eigen_rows = &t_mat - &Mat::identity(d).scale(gamma);

        let parallel = self.parallel_stack()?;

        let kappa = gamma.clone() * Scalar::rational(3, 4 * n);
        let mut killing = eigen_rows.clone();
        for i in 1..=self.frame_dim() {
            let row = &self.lambda_g_lift[i - 1]
                - &self.rep.gamma(i).scale(&kappa);
            killing = killing.vstack(&row);
        }

        let zeta = &kappa * &(&Scalar::one() - &(&Scalar::from_integer(4) * s));
        let h = self.family_torsion(s);
        let mut kst = eigen_rows.clone();
        for i in 1..=self.frame_dim() {
            let row = &self.nabla_matrix(i, &h)? - &self.rep.gamma(i).scale(&zeta);
            kst = kst.vstack(&row);
        }

        let mut twistor = eigen_rows;
        for m in self.twistor_matrices(&h)? {
            twistor = twistor.vstack(&m);
        }
        twistor = twistor.vstack(&self.dirac_matrix(&self.ctx.torsion)?);

        Ok(SpinorClasses {
            parallel: columns(&mat_kernel_basis(&parallel).iter().map(|v| v.components.clone()).collect::<Vec<_>>(), d),
            killing: columns(&mat_kernel_basis(&killing).iter().map(|v| v.components.clone()).collect::<Vec<_>>(), d),
            kst: columns(&mat_kernel_basis(&kst).iter().map(|v| v.components.clone()).collect::<Vec<_>>(), d),
            twistor_characteristic: columns(&mat_kernel_basis(&twistor).iter().map(|v| v.components.clone()).collect::<Vec<_>>(), d),
        })
    }

    /// Evaluates one of the curvature/spinor identities on `φ`, exactly.
    pub fn curvature_identity_check(
        &self,
        kind: IdentityKind,
        phi: &SpinorVec,
    ) -> Result<IdentityOutcome, SpinOpsError> {
        match kind {
            IdentityKind::KstRicci { s } => self.check_kst_ricci(phi, &s),
            IdentityKind::TwistorRicci { s } => self.check_twistor_ricci(phi, &s),
            IdentityKind::TwistorSca { s } => self.check_twistor_sca(phi, &s),
            IdentityKind::DiracSq { s } => self.check_dirac_sq(phi, &s),
            IdentityKind::Conv => self.check_conv(phi),
            IdentityKind::Integrab => self.check_integrab(phi),
            IdentityKind::Parallel => self.check_parallel(phi),
        }
    }

    fn require_kst(&self, phi: &SpinorVec, s: &Scalar) -> Result<Scalar, SpinOpsError> {
        // A Killing spinor with torsion for the family member s, with some
        // number zeta: ∇^s φ = zeta X φ for all frame X.
        let h = self.family_torsion(s);
        let first = self.nabla_spinor(1, phi, &h)?;
        let xphi = self.rep.act(&self.frame_vector(1), phi)?;
        let zeta = proportionality(&first, &xphi).ok_or_else(|| {
            SpinOpsError::PreconditionFailed(format!("not a Killing spinor with torsion at s = {s}"))
        })?;
        for i in 1..=self.frame_dim() {
            let lhs = self.nabla_spinor(i, phi, &h)?;
            let rhs = self.rep.act(&self.frame_vector(i), phi)?.scale(&zeta);
            if lhs != rhs {
                return Err(SpinOpsError::PreconditionFailed(format!(
                    "not a Killing spinor with torsion at s = {s} (frame vector {i})"
                )));
            }
        }
        Ok(zeta)
    }

    fn require_twistor(&self, phi: &SpinorVec, s: &Scalar) -> Result<(), SpinOpsError> {
        let h = self.family_torsion(s);
        let residuals = self.twistor_residual(phi, &h)?;
        if residuals.iter().all(SpinorVec::is_zero) {
            Ok(())
        } else {
            Err(SpinOpsError::PreconditionFailed(format!(
                "not a twistor spinor with torsion at s = {s}"
            )))
        }
    }

    fn check_kst_ricci(&self, phi: &SpinorVec, s: &Scalar) -> Result<IdentityOutcome, SpinOpsError> {
        let zeta = self.require_kst(phi, s)?;
        let ric = self.ricci_s(s)?;
        let n = self.frame_dim() as i64;
        let c_x = &(&(&zeta * &zeta) * &Scalar::from_integer(4 * (n - 1))) * &Scalar::one();
        let c_xt = &(&Scalar::from_integer(-16) * s) * &zeta;
        let three_minus_4s = &Scalar::from_integer(3) - &(&Scalar::from_integer(4) * s);
        let c_sigma = &(&Scalar::from_integer(2) * s) * &three_minus_4s;
        let mut outcome = IdentityOutcome::new("kst-ricci");
        for i in 1..=self.frame_dim() {
            let x = self.frame_vector(i);
            let lhs = self.ricci_vector_action(&ric, i, phi)?;
            let xphi = self.rep.act(&x, phi)?;
            let xt_phi = self.rep.act(&x.contract(&self.ctx.torsion)?, phi)?;
            let xsig_phi = self.rep.act(&x.contract(&self.ctx.sigma)?, phi)?;
            let rhs = &(&xphi.scale(&c_x) + &xt_phi.scale(&c_xt)) + &xsig_phi.scale(&c_sigma);
            outcome.record_frame(i, &lhs, &rhs);
        }
        Ok(outcome)
    }

    fn check_twistor_ricci(
        &self,
        phi: &SpinorVec,
        s: &Scalar,
    ) -> Result<IdentityOutcome, SpinOpsError> {
        self.require_twistor(phi, s)?;
        let h = self.family_torsion(s);
        let n = self.frame_dim() as i64;
        let ric = self.ricci_s(s)?;
        let dphi = self.dirac(phi, &h)?;
        let ddphi = self.dirac(&dphi, &h)?;
        let three_minus_4s = &Scalar::from_integer(3) - &(&Scalar::from_integer(4) * s);
        let mut outcome = IdentityOutcome::new("twistor-ricci");
        for i in 1..=self.frame_dim() {
            let x = self.frame_vector(i);
            let lhs = self.ricci_vector_action(&ric, i, phi)?.scale(&Scalar::rational(-1, 2));
            let t1 = self
                .rep
                .act(&x.contract(&self.ctx.torsion)?, &dphi)?
                .scale(&(&(&Scalar::from_integer(-8) * s) * &Scalar::rational(1, n)));
            let t2 = self.nabla_spinor(i, &dphi, &h)?.scale(&Scalar::rational(n - 2, n));
            let t3 = self.rep.act(&x, &ddphi)?.scale(&Scalar::rational(-1, n));
            let t4 = self
                .rep
                .act(&x.contract(&self.ctx.sigma)?, phi)?
                .scale(&(&(-s) * &three_minus_4s));
            let rhs = &(&(&t1 + &t2) + &t3) + &t4;
            outcome.record_frame(i, &lhs, &rhs);
        }
        Ok(outcome)
    }

    fn check_twistor_sca(
        &self,
        phi: &SpinorVec,
        s: &Scalar,
    ) -> Result<IdentityOutcome, SpinOpsError> {
        self.require_twistor(phi, s)?;
        let h = self.family_torsion(s);
        let n = self.frame_dim() as i64;
        let sca = self.ricci_s(s)?.trace();
        let dphi = self.dirac(phi, &h)?;
        let ddphi = self.dirac(&dphi, &h)?;
        let three_minus_4s = &Scalar::from_integer(3) - &(&Scalar::from_integer(4) * s);
        let lhs = phi.scale(&(&sca * &Scalar::rational(1, 2)));
        let t1 = self
            .rep
            .act(&self.ctx.torsion, &dphi)?
            .scale(&(&(&Scalar::from_integer(-24) * s) * &Scalar::rational(1, n)));
        let t2 = ddphi.scale(&Scalar::rational(2 * (n - 1), n));
        let t3 = self
            .rep
            .act(&self.ctx.sigma, phi)?
            .scale(&(&(&(&Scalar::from_integer(-4) * s) * &three_minus_4s) * &Scalar::one()));
        let rhs = &(&t1 + &t2) + &t3;
        let mut outcome = IdentityOutcome::new("twistor-sca");
        outcome.record_frame(0, &lhs, &rhs);
        Ok(outcome)
    }

    fn check_dirac_sq(&self, phi: &SpinorVec, s: &Scalar) -> Result<IdentityOutcome, SpinOpsError> {
        self.require_twistor(phi, s)?;
        let h = self.family_torsion(s);
        let n = self.frame_dim() as i64;
        let sca = self.ricci_s(s)?.trace();
        let dphi = self.dirac(phi, &h)?;
        let lhs = self.dirac(&dphi, &h)?;
        let three_minus_4s = &Scalar::from_integer(3) - &(&Scalar::from_integer(4) * s);
        let t1 = self.rep.act(&self.ctx.dt, phi)?.scale(&(s * &three_minus_4s));
        let t2 = self
            .rep
            .act(&self.ctx.torsion, &dphi)?
            .scale(&(&(&Scalar::from_integer(12) * s) * &Scalar::rational(1, n)));
        let t3 = phi.scale(&(&sca * &Scalar::rational(1, 4)));
        let rhs = (&(&t1 + &t2) + &t3).scale(&Scalar::rational(n, n - 1));
        let mut outcome = IdentityOutcome::new("dirac-square");
        outcome.record_frame(0, &lhs, &rhs);
        Ok(outcome)
    }

    /// Operator pairs of the conversion identity between the Levi-Civita
    /// and characteristic spinor curvatures: for each frame vector `x` the
    /// matrices of `sum_i e_i R^g(e_x, e_i)` and of
    /// `sum_i e_i R^c(e_x, e_i) - (6/16)(e_x ⌟ sigma_T) + (1/8) sum_i
    /// T(e_x, e_i)(e_i ⌟ T)`; the identity states that each pair is equal,
    /// on every spinor.
    pub fn conv_operator_pairs(&self) -> Result<&[(Mat, Mat)], SpinOpsError> {
        if self.conv_cache.get().is_none() {
            let pairs = self.build_conv_operators()?;
            let _ = self.conv_cache.set(pairs);
        }
        Ok(self.conv_cache.get().expect("just set"))
    }

    fn build_conv_operators(&self) -> Result<Vec<(Mat, Mat)>, SpinOpsError> {
        let n = self.frame_dim();
        let d = self.spinor_dim();
        let r_g = self.spinor_curvature(&Scalar::zero())?;
        let r_c = self.spinor_curvature(&Scalar::one())?;
        // Reused per-frame contraction actions.
        let contraction_act: Vec<Mat> = (1..=n)
            .map(|i| {
                let c = self.frame_vector(i).contract(&self.ctx.torsion)?;
                self.rep.act_matrix(&c).map_err(SpinOpsError::from)
            })
            .collect::<Result<_, _>>()?;
        let mut pairs = Vec::with_capacity(n);
        for x in 1..=n {
            let mut lhs = Mat::zeros(d, d);
            let mut rhs = Mat::zeros(d, d);
            for i in 1..=n {
                if i == x {
                    continue;
                }
                let gi = self.rep.gamma(i);
                lhs = &lhs + &gi.matmul(&r_g[x - 1][i - 1]);
                rhs = &rhs + &gi.matmul(&r_c[x - 1][i - 1]);
            }
            let xv = self.frame_vector(x);
            let sig = self.rep.act_matrix(&xv.contract(&self.ctx.sigma)?)?;
            rhs = &rhs + &sig.scale(&Scalar::rational(-6, 16));
            let mut third = Mat::zeros(d, d);
            for i in 1..=n {
                let tv = self.ctx.torsion.torsion_vector(&xv, &self.frame_vector(i))?;
                if tv.is_zero() {
                    continue;
                }
                let tv_act = self.rep.act_matrix(&tv)?;
                third = &third + &tv_act.matmul(&contraction_act[i - 1]);
            }
            rhs = &rhs + &third.scale(&Scalar::rational(1, 8));
            pairs.push((lhs, rhs));
        }
        Ok(pairs)
    }

    /// Relation between the spinor curvatures of the Levi-Civita and the
    /// characteristic connection; holds for every spinor.
    fn check_conv(&self, phi: &SpinorVec) -> Result<IdentityOutcome, SpinOpsError> {
        let pairs = self.conv_operator_pairs()?;
        let mut outcome = IdentityOutcome::new("curvature-conversion");
        for (x, (lhs_op, rhs_op)) in pairs.iter().enumerate() {
            let lhs = SpinorVec::from_components(lhs_op.apply(&phi.components));
            let rhs = SpinorVec::from_components(rhs_op.apply(&phi.components));
            outcome.record_frame(x + 1, &lhs, &rhs);
        }
        Ok(outcome)
    }

    /// Full integrability condition at the distinguished parameter
    /// `s* = (n-1)/(4(n-3))`, with `lambda = 1/(2(n-3))`.
    fn check_integrab(&self, phi: &SpinorVec) -> Result<IdentityOutcome, SpinOpsError> {
        let n = self.frame_dim() as i64;
        if n <= 3 {
            return Err(SpinOpsError::PreconditionFailed(
                "integrability check needs dimension > 3".into(),
            ));
        }
        let s = Scalar::rational(n - 1, 4 * (n - 3));
        let zeta = self.require_kst(phi, &s)?;
        let lambda = Scalar::rational(1, 2 * (n - 3));
        let ric_c = self.ricci_s(&Scalar::rational(1, 4))?;
        let lam2 = &lambda * &lambda;
        let c_sigma = &Scalar::one() - &(&Scalar::from_integer(12) * &lam2);
        let c_tt = &Scalar::from_integer(-2)
            * &(&(&Scalar::from_integer(2) * &lam2) + &lambda);
        let c_xt = &(&Scalar::from_integer(-16) * &s) * &zeta;
        let c_x = &(&zeta * &zeta) * &Scalar::from_integer(4 * (n - 1));
        let mut outcome = IdentityOutcome::new("integrability");
        for i in 1..=self.frame_dim() {
            let x = self.frame_vector(i);
            let lhs = self.ricci_vector_action(&ric_c, i, phi)?;
            let xphi = self.rep.act(&x, phi)?;
            let xt_phi = self.rep.act(&x.contract(&self.ctx.torsion)?, phi)?;
            let xsig_phi = self.rep.act(&x.contract(&self.ctx.sigma)?, phi)?;
            let mut tt = SpinorVec::zero(self.spinor_dim());
            for j in 1..=self.frame_dim() {
                let tv = self.ctx.torsion.torsion_vector(&x, &self.frame_vector(j))?;
                let inner = self.rep.act(&self.frame_vector(j).contract(&self.ctx.torsion)?, phi)?;
                tt = &tt + &self.rep.act(&tv, &inner)?;
            }
            let rhs = &(&(&xt_phi.scale(&c_xt) + &xphi.scale(&c_x)) + &xsig_phi.scale(&c_sigma))
                + &tt.scale(&c_tt);
            outcome.record_frame(i, &lhs, &rhs);
        }
        Ok(outcome)
    }

    /// Integrability conditions of a parallel spinor:
    /// `Sca^c φ = -2 dT·φ = -4 sigma_T·φ` and
    /// `Ric^c(X)·φ = (X ⌟ sigma_T)·φ`.
    fn check_parallel(&self, phi: &SpinorVec) -> Result<IdentityOutcome, SpinOpsError> {
        for i in 1..=self.frame_dim() {
            if !self.nabla_spinor(i, phi, &self.ctx.torsion)?.is_zero() {
                return Err(SpinOpsError::PreconditionFailed(format!(
                    "spinor is not parallel for the characteristic connection (frame vector {i})"
                )));
            }
        }
        let ric_c = self.ricci_s(&Scalar::rational(1, 4))?;
        let sca_c = ric_c.trace();
        let mut outcome = IdentityOutcome::new("parallel-integrability");
        let lhs = phi.scale(&sca_c);
        let dt_phi = self.rep.act(&self.ctx.dt, phi)?.scale(&Scalar::from_integer(-2));
        let sig_phi = self.rep.act(&self.ctx.sigma, phi)?.scale(&Scalar::from_integer(-4));
        outcome.record_frame(0, &lhs, &dt_phi);
        outcome.record_frame(0, &dt_phi, &sig_phi);
        for i in 1..=self.frame_dim() {
            let lhs = self.ricci_vector_action(&ric_c, i, phi)?;
            let rhs = self
                .rep
                .act(&self.frame_vector(i).contract(&self.ctx.sigma)?, phi)?;
            outcome.record_frame(i, &lhs, &rhs);
        }
        Ok(outcome)
    }

    /// Scalar curvature of the family member (`Sca^s` rule), for reports.
    pub fn sca_s(&self, s: &Scalar) -> Scalar {
        let sca_g = self.space().scalar_curvature(&Scalar::zero());
        sca_s(&sca_g, &self.ctx.tnorm2, s)
    }
}

/// The four computed spinor-class subspaces.
pub struct SpinorClasses {
    pub parallel: Mat,
    pub killing: Mat,
    pub kst: Mat,
    pub twistor_characteristic: Mat,
}

impl SpinorClasses {
    pub fn dims(&self) -> [usize; 4] {
        [
            self.parallel.cols,
            self.killing.cols,
            self.kst.cols,
            self.twistor_characteristic.cols,
        ]
    }

    /// True iff all four subspaces coincide.
    pub fn all_coincide(&self) -> bool {
        same_column_span(&self.parallel, &self.killing)
            && same_column_span(&self.parallel, &self.kst)
            && same_column_span(&self.parallel, &self.twistor_characteristic)
    }
}

/// Which identity [`SpinGeometry::curvature_identity_check`] evaluates.
#[derive(Debug, Clone)]
pub enum IdentityKind {
    /// Ricci action on a Killing spinor with torsion.
    KstRicci { s: Scalar },
    /// Ricci action on a twistor spinor with torsion.
    TwistorRicci { s: Scalar },
    /// Scalar-curvature action on a twistor spinor with torsion.
    TwistorSca { s: Scalar },
    /// Action of the Dirac square on a twistor spinor.
    DiracSq { s: Scalar },
    /// Relation between the Levi-Civita and characteristic spinor
    /// curvatures (any spinor).
    Conv,
    /// Full integrability condition at `s* = (n-1)/(4(n-3))`.
    Integrab,
    /// Integrability conditions of a parallel spinor.
    Parallel,
}

/// Outcome of an identity evaluation, with the first failing frame vector
/// as a witness.
#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    pub witness: Option<String>,
    pub max_residual: f64,
}

impl IdentityOutcome {
    fn new(name: &'static str) -> Self {
        IdentityOutcome {
            name,
            holds: true,
            lhs: String::new(),
            rhs: String::new(),
            witness: None,
            max_residual: 0.0,
        }
    }

    fn record_frame(&mut self, i: usize, lhs: &SpinorVec, rhs: &SpinorVec) {
        if self.lhs.is_empty() {
            self.lhs = format_spinor(lhs);
            self.rhs = format_spinor(rhs);
        }
        for (a, b) in lhs.components.iter().zip(&rhs.components) {
            let (dr, di) = (a - b).to_complex64();
            self.max_residual = self.max_residual.max(dr.abs()).max(di.abs());
        }
        if lhs != rhs && self.holds {
            self.holds = false;
            self.witness = Some(if i == 0 {
                "scalar part".into()
            } else {
                format!("frame vector e{i}")
            });
            self.lhs = format_spinor(lhs);
            self.rhs = format_spinor(rhs);
        }
    }
}

pub fn format_spinor(v: &SpinorVec) -> String {
    let mut s = String::from("(");
    for (k, c) in v.components.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}", c);
    }
    s.push(')');
    s
}

fn mat_kernel_basis(m: &Mat) -> Vec<SpinorVec> {
    if m.rows == 0 {
        let d = m.cols;
        return (0..d).map(|k| SpinorVec::basis(d, k)).collect();
    }
    m.nullspace().into_iter().map(SpinorVec::from_components).collect()
}

/// If `lhs = c * rhs` for a scalar `c`, returns `c` (requires `rhs != 0`).
fn proportionality(lhs: &SpinorVec, rhs: &SpinorVec) -> Option<Scalar> {
    let k = rhs.components.iter().position(|c| !c.is_zero())?;
    let c = &lhs.components[k] / &rhs.components[k];
    if *lhs == rhs.scale(&c) {
        Some(c)
    } else {
        None
    }
}

/// The exact spectrum of the torsion action.
#[derive(Debug, Clone)]
pub struct TSpectrum {
    /// Exact eigenvalues with multiplicities (empty when `exact` is false).
    pub eigenvalues: Vec<(Scalar, usize)>,
    pub eigenbasis: Vec<(Scalar, Vec<SpinorVec>)>,
    /// Clustered float eigenvalues from the oracle root finder.
    pub float_eigenvalues: Vec<(f64, usize)>,
    pub exact: bool,
}

// ---------------------------------------------------------------------------
// float root localisation and exact lifting

type C64 = (f64, f64);

fn c_mul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn c_sub(a: C64, b: C64) -> C64 {
    (a.0 - b.0, a.1 - b.1)
}

fn c_div(a: C64, b: C64) -> C64 {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn c_abs(a: C64) -> f64 {
    a.0.hypot(a.1)
}

/// Durand-Kerner root finder for a polynomial given by complex
/// coefficients in ascending degree.
fn durand_kerner(coeffs: &[C64]) -> Result<Vec<C64>, String> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if c_abs(lead) == 0.0 {
        return Err("zero leading coefficient".into());
    }
    let monic: Vec<C64> = coeffs.iter().map(|&c| c_div(c, lead)).collect();
    let eval = |x: C64| -> C64 {
        let mut acc = (0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = c_mul(acc, x);
            acc = (acc.0 + c.0, acc.1 + c.1);
        }
        acc
    };
    let mut roots: Vec<C64> = (0..deg)
        .map(|k| {
            let angle = 0.4 + 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64);
            (1.2 * angle.cos(), 1.2 * angle.sin())
        })
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for j in 0..deg {
            let mut denom = (1.0, 0.0);
            for k in 0..deg {
                if k != j {
                    denom = c_mul(denom, c_sub(roots[j], roots[k]));
                }
            }
            let step = c_div(eval(roots[j]), denom);
            roots[j] = c_sub(roots[j], step);
            delta = delta.max(c_abs(step));
        }
        if delta < 1e-13 {
            break;
        }
    }
    let residual: f64 = roots.iter().map(|&r| c_abs(eval(r))).fold(0.0, f64::max);
    if residual > 1e-6 {
        return Err(format!("root finder residual {residual:.2e}"));
    }
    Ok(roots)
}

/// Clusters roots on the real axis (the torsion action is symmetric, so
/// its eigenvalues are real).
fn cluster_real(roots: &[C64]) -> Vec<(f64, usize)> {
    let mut values: Vec<f64> = roots.iter().map(|&(re, _)| re).collect();
    values.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for v in values {
        match clusters.last_mut() {
            Some((center, count)) if (v - *center).abs() < 1e-6 => {
                *center = (*center * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((v, 1)),
        }
    }
    clusters
}

/// Best rational approximation with bounded denominator (continued
/// fractions); accepts only near-exact matches.
fn recognize_rational(v: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, v.floor() as i64, 1i64);
    let mut frac = v - v.floor();
    for _ in 0..40 {
        if (p1 as f64 / q1 as f64 - v).abs() < 1e-9 * (1.0 + v.abs()) {
            return Some((p1, q1));
        }
        if frac.abs() < 1e-12 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        frac = r - a;
        let p2 = a as i64 * p1 + p0;
        let q2 = a as i64 * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if q1 > max_den {
            break;
        }
    }
    None
}

/// Lifts a float into `Q(sqrt(d_1), ...)` as `p/q` or `(p/q) sqrt(D)` for a
/// subset product `D` of the given radicals.
fn recognize_scalar(v: f64, radicals: &[i64]) -> Option<Scalar> {
    if let Some((p, q)) = recognize_rational(v, 10_000) {
        return Some(Scalar::rational(p, q));
    }
    let positive: Vec<i64> = radicals.iter().copied().filter(|&d| d > 1).collect();
    let mut products: Vec<i64> = Vec::new();
    for mask in 1u32..(1 << positive.len()) {
        let d: i64 = positive
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &d)| d)
            .product();
        if !products.contains(&d) {
            products.push(d);
        }
    }
    for d in products {
        let scaled = v / (d as f64).sqrt();
        if let Some((p, q)) = recognize_rational(scaled, 10_000) {
            let s = &Scalar::rational(p, q) * &Scalar::sqrt(d).ok()?;
            let err = (s.to_f64() - v).abs();
            if err < 1e-9 * (1.0 + v.abs()) {
                return Some(s);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::clifford::Multivector;

    #[test]
    fn zero_torsion_spectrum() {
        let space = std::sync::Arc::new(catalog::su2_space(2));
        let ctx = TorsionContext::from_space(space, Multivector::zero(3)).unwrap();
        let rep = crate::spinrep::GammaRep::build(3).unwrap();
        let geo = SpinGeometry::new(rep, ctx).unwrap();
        let spectrum = geo.t_spectrum().unwrap();
        assert!(spectrum.exact);
        assert_eq!(spectrum.eigenvalues, vec![(Scalar::zero(), 2)]);
    }

    #[test]
    fn identity_preconditions_are_named() {
        let entry = catalog::build_b7();
        let geo = crate::report::entry_geometry(&entry);
        // A generic spinor is not a Killing spinor with torsion.
        let generic = SpinorVec::basis(8, 1);
        let err = geo
            .curvature_identity_check(IdentityKind::KstRicci { s: Scalar::rational(1, 2) }, &generic)
            .unwrap_err();
        assert!(matches!(err, SpinOpsError::PreconditionFailed(_)));
        assert!(err.to_string().contains("Killing"));
        // Nor a torsion eigenspinor in general.
        let mixed = &SpinorVec::basis(8, 0) + &SpinorVec::basis(8, 3);
        assert!(matches!(
            geo.t_eigenvalue_of(&mixed),
            Err(SpinOpsError::NotTEigenspinor)
        ));
    }

    #[test]
    fn recognizes_simple_values() {
        assert_eq!(recognize_scalar(2.45, &[]), Some(Scalar::rational(49, 20)));
        let g = recognize_scalar(-7.0 / 5f64.sqrt(), &[5]).unwrap();
        let expect = &Scalar::from_integer(-7) * &Scalar::sqrt(5).unwrap().inverse().unwrap();
        assert_eq!(g, expect);
        assert_eq!(recognize_scalar(0.0, &[3, 5]), Some(Scalar::zero()));
    }

    #[test]
    fn root_finder_on_known_polynomial() {
        // (x - 1)(x + 2)(x - 3) = x^3 - 2x^2 - 5x + 6.
        let coeffs: Vec<C64> =
            [6.0, -5.0, -2.0, 1.0].iter().map(|&c| (c, 0.0)).collect();
        let mut roots: Vec<f64> =
            durand_kerner(&coeffs).unwrap().iter().map(|&(re, _)| re).collect();
        roots.sort_by(f64::total_cmp);
        let expect = [-2.0, 1.0, 3.0];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r - e).abs() < 1e-9);
        }
    }
}
