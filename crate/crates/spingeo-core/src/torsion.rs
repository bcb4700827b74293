//! Derived torsion data and the curvature family of the connections
//! `∇^s = ∇^g + 2sT` (torsion `4sT`).
//!
//! Carries, for a fixed 3-form `T`: the 4-form `sigma_T`, the exterior
//! derivative `dT`, the squared norm, the symmetric tensor
//! `S(X,Y) = sum_i <T(X,e_i), T(Y,e_i)>`, and the affine-in-`s^2` family
//! `Ric^s = Ric^g - 4 s^2 S`, `Sca^s = Sca^g - 24 s^2 |T|^2`.

use std::sync::Arc;

use thiserror::Error;

use crate::clifford::{sigma_t, CliffordError, Multivector};
use crate::exactfield::Scalar;
use crate::homspace::{HomError, ReductiveSpace};
use crate::linalg::Mat;

#[derive(Debug, Error)]
pub enum TorsionError {
    #[error("operation requires a homogeneous space, not formula-only mode")]
    FormulaModeUnsupported,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// A torsion 3-form with its derived data, over a space or in bare-frame
/// (formula-only) mode.
#[derive(Debug, Clone)]
pub struct TorsionContext {
    pub space: Option<Arc<ReductiveSpace>>,
    pub torsion: Multivector,
    pub sigma: Multivector,
    pub dt: Multivector,
    pub tnorm2: Scalar,
    pub s_tensor: Mat,
    /// Set when `dT = 2 sigma_T` holds exactly (parallel torsion).
    pub parallel: bool,
}

impl TorsionContext {
    /// Builds the context over a homogeneous space; `dT` comes from the
    /// invariant exterior differential, independently of `sigma_T`.
    pub fn from_space(
        space: Arc<ReductiveSpace>,
        torsion: Multivector,
    ) -> Result<Self, TorsionError> {
        let sigma = sigma_t(&torsion)?;
        let dt = space.invariant_d(&torsion)?;
        let tnorm2 = torsion.three_form_norm_sq()?;
        let s = s_tensor(&torsion)?;
        let parallel = dt == sigma.scale(&Scalar::from_integer(2));
        let ctx = TorsionContext {
            space: Some(space),
            torsion,
            sigma,
            dt,
            tnorm2,
            s_tensor: s,
            parallel,
        };
        ctx.check_invariants();
        Ok(ctx)
    }

    /// Bare-frame mode: no space, `dT := 2 sigma_T` by fiat.
    pub fn from_form(torsion: Multivector) -> Result<Self, TorsionError> {
        let sigma = sigma_t(&torsion)?;
        let dt = sigma.scale(&Scalar::from_integer(2));
        let tnorm2 = torsion.three_form_norm_sq()?;
        let s = s_tensor(&torsion)?;
        let ctx = TorsionContext {
            space: None,
            torsion,
            sigma,
            dt,
            tnorm2,
            s_tensor: s,
            parallel: true,
        };
        ctx.check_invariants();
        Ok(ctx)
    }

    fn check_invariants(&self) {
        let six = Scalar::from_integer(6);
        assert_eq!(
            self.s_tensor.trace(),
            &six * &self.tnorm2,
            "trace(S) must equal 6 |T|^2"
        );
        assert!(self.s_tensor.is_symmetric());
    }

    pub fn dim(&self) -> usize {
        self.torsion.dim()
    }

    /// `Ric^s` for the space-backed context.
    pub fn ric_s_from_space(&self, s: &Scalar) -> Result<Mat, TorsionError> {
        let space = self.space.as_ref().ok_or(TorsionError::FormulaModeUnsupported)?;
        let ric_g = space.ricci(&Scalar::zero());
        Ok(ric_s(&ric_g, &self.s_tensor, s))
    }

    /// Checks `∇^s_X T (Y,Z,V) = ((4s-1)/2) sigma_T(Y,Z,V,X)` for every
    /// frame vector `X`, evaluating the covariant derivative through the
    /// Nomizu maps as a tensor derivation.
    pub fn nabla_s_torsion_check(&self, s: &Scalar) -> Result<bool, TorsionError> {
        let space = self.space.as_ref().ok_or(TorsionError::FormulaModeUnsupported)?;
        let n = self.dim();
        // Torsion of the family member is 4sT; for the designated torsion
        // this is the scale-4s member of the canonical family.
        let scale = &Scalar::from_integer(4) * s;
        let h = self.torsion.scale(&scale);
        let maps = space.nomizu_with_torsion(&h)?;
        let factor = &(&scale - &Scalar::one()) * &Scalar::rational(1, 2);
        for x in 0..n {
            for combo in crate::homspace::index_combinations(n, 3) {
                let (y, z, v) = (combo[0], combo[1], combo[2]);
                // (∇_X T)(Y,Z,V) = -T(L(X)Y, Z, V) - T(Y, L(X)Z, V) - T(Y, Z, L(X)V)
                let mut lhs = Scalar::zero();
                for (slot, &col) in [y, z, v].iter().enumerate() {
                    for row in 0..n {
                        let c = &maps[x][(row, col)];
                        if c.is_zero() {
                            continue;
                        }
                        let mut idx = [y + 1, z + 1, v + 1];
                        idx[slot] = row + 1;
                        let t = self.torsion.eval_on_frame(&idx)?;
                        if !t.is_zero() {
                            lhs = &lhs - &(c * &t);
                        }
                    }
                }
                let rhs = if n >= 4 {
                    let sig = self.sigma.eval_on_frame(&[y + 1, z + 1, v + 1, x + 1])?;
                    &factor * &sig
                } else {
                    Scalar::zero()
                };
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The symmetric tensor `S(X,Y) = sum_i <T(X,e_i), T(Y,e_i)>` of a 3-form.
pub fn s_tensor(torsion: &Multivector) -> Result<Mat, TorsionError> {
    if !torsion.is_form_of_grade(3) {
        return Err(CliffordError::NotA3Form(torsion.grades()).into());
    }
    let n = torsion.dim();
    let mut s = Mat::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            // sum_i <T(e_a, e_i), T(e_b, e_i)> with the frame components
            // T(e_a, e_i)_k = T(e_a, e_i, e_k).
            let mut acc = Scalar::zero();
            for i in 0..n {
                for k in 0..n {
                    let ta = torsion.eval_on_frame(&[a + 1, i + 1, k + 1])?;
                    if ta.is_zero() {
                        continue;
                    }
                    let tb = torsion.eval_on_frame(&[b + 1, i + 1, k + 1])?;
                    if !tb.is_zero() {
                        acc = &acc + &(&ta * &tb);
                    }
                }
            }
            s[(a, b)] = acc.clone();
            s[(b, a)] = acc;
        }
    }
    Ok(s)
}

/// `Ric^s = Ric^g - 4 s^2 S`.
pub fn ric_s(ric_g: &Mat, s_tensor: &Mat, s: &Scalar) -> Mat {
    assert_eq!(
        (ric_g.rows, ric_g.cols),
        (s_tensor.rows, s_tensor.cols),
        "shape mismatch between Ric^g and S"
    );
    let c = &(&Scalar::from_integer(4) * s) * s;
    ric_g - &s_tensor.scale(&c)
}

/// `Sca^s = Sca^g - 24 s^2 |T|^2`.
pub fn sca_s(sca_g: &Scalar, tnorm2: &Scalar, s: &Scalar) -> Scalar {
    let c = &(&Scalar::from_integer(24) * s) * s;
    sca_g - &(&c * tnorm2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn s_tensor_of_unit_volume_form() {
        let t = Multivector::blade(3, &[1, 2, 3], Scalar::one()).unwrap();
        assert_eq!(s_tensor(&t).unwrap(), Mat::identity(3).scale(&s(2)));
        let zero = Multivector::zero(4);
        assert!(s_tensor(&zero).unwrap().is_zero());
    }

    #[test]
    fn sphere_family() {
        let space = Arc::new(catalog::su2_space(2));
        let torsion = Multivector::blade(3, &[1, 2, 3], s(-2)).unwrap();
        let ctx = TorsionContext::from_space(space.clone(), torsion).unwrap();
        assert!(ctx.parallel);
        assert_eq!(ctx.tnorm2, s(4));
        assert_eq!(ctx.s_tensor, Mat::identity(3).scale(&s(8)));
        // Ric^s = 2 (1 - 16 s^2) Id at s = 0, 1/4, 1/2.
        for (sv, expect) in [
            (Scalar::zero(), s(2)),
            (Scalar::rational(1, 4), Scalar::zero()),
            (Scalar::rational(1, 2), s(-6)),
        ] {
            let ric = ctx.ric_s_from_space(&sv).unwrap();
            assert_eq!(ric, Mat::identity(3).scale(&expect), "s = {sv}");
            // trace(Ric^s) = Sca^s.
            let sca = sca_s(&space.scalar_curvature(&Scalar::zero()), &ctx.tnorm2, &sv);
            assert_eq!(ric.trace(), sca);
        }
    }

    #[test]
    fn formula_mode_has_no_space_operations() {
        let t = Multivector::blade(6, &[1, 2, 3], Scalar::one()).unwrap();
        let ctx = TorsionContext::from_form(t).unwrap();
        assert!(ctx.parallel);
        assert!(matches!(
            ctx.nabla_s_torsion_check(&Scalar::zero()),
            Err(TorsionError::FormulaModeUnsupported)
        ));
        assert!(matches!(
            ctx.ric_s_from_space(&Scalar::zero()),
            Err(TorsionError::FormulaModeUnsupported)
        ));
    }

    #[test]
    fn nabla_family_derivative_on_sphere() {
        let space = Arc::new(catalog::su2_space(2));
        let torsion = Multivector::blade(3, &[1, 2, 3], s(-2)).unwrap();
        let ctx = TorsionContext::from_space(space, torsion).unwrap();
        // sigma_T = 0 in dimension 3, so both sides vanish for every s.
        for sv in [Scalar::zero(), Scalar::rational(1, 4), Scalar::rational(1, 2)] {
            assert!(ctx.nabla_s_torsion_check(&sv).unwrap());
        }
    }
}
