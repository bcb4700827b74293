//! Spin representations for frame dimensions 3 through 8.
//!
//! Even dimensions (and 3, 5) use the standard tensor-product gamma
//! construction with entries in `{0, ±1, ±i}`.  Dimension 7 is special: the
//! spinor module is real eight-dimensional, realized here by (negated) left
//! multiplication of imaginary octonions on the octonions, which gives
//! gamma matrices with entries in `{0, ±1}`.  The frozen octonion table
//! has `o_i o_{i+1} = o_{i+3}` cyclically mod 7.

use std::sync::Arc;

use thiserror::Error;

use crate::clifford::Multivector;
use crate::exactfield::Scalar;
use crate::linalg::Mat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpinError {
    #[error("unsupported frame dimension {0} (supported: 3..=8)")]
    UnsupportedDim(usize),
    #[error("dimension mismatch between representation and operand")]
    DimMismatch,
    #[error("matrix is not skew-symmetric")]
    NotSkew,
}

/// Which irreducible module to take when the volume element acts as a
/// scalar (odd frame dimension): the two choices differ by a global sign
/// of the gamma matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeSign {
    Plus,
    Minus,
}

/// A concrete realization of the Clifford relations
/// `gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij`.
#[derive(Debug, Clone)]
pub struct GammaRep {
    n: usize,
    gamma: Vec<Mat>,
    convention: String,
}

impl GammaRep {
    /// Builds the representation for frame dimension `n`.
    ///
    /// In odd dimensions the two irreducible modules differ by a global
    /// sign of the gammas; this takes the default, and
    /// [`GammaRep::build_with_volume`] picks explicitly (for dimensions
    /// `3 mod 4` the choice is the sign of the scalar volume action).
    pub fn build(n: usize) -> Result<Arc<Self>, SpinError> {
        GammaRep::build_with_volume(n, VolumeSign::Plus)
    }

    pub fn build_with_volume(n: usize, vol: VolumeSign) -> Result<Arc<Self>, SpinError> {
        if !(3..=8).contains(&n) {
            return Err(SpinError::UnsupportedDim(n));
        }
        let rep = if n == 7 {
            let mut gamma = octonion_gammas();
            let convention = match vol {
                // Negated left multiplication: volume acts as +Id and the
                // Berger torsion has its single negative eigenvalue.
                VolumeSign::Plus => "octonion-real",
                VolumeSign::Minus => {
                    for g in &mut gamma {
                        *g = -&*g;
                    }
                    "octonion-real-neg"
                }
            };
            GammaRep { n, gamma, convention: convention.into() }
        } else {
            let mut gamma = tensor_gammas(n);
            let mut convention = String::from("pauli-tensor");
            if n % 2 == 1 && vol == VolumeSign::Minus {
                let last = gamma.len() - 1;
                gamma[last] = -&gamma[last];
                convention.push_str("-neg");
            }
            GammaRep { n, gamma, convention }
        };
        Ok(Arc::new(rep))
    }

    pub fn frame_dim(&self) -> usize {
        self.n
    }

    /// Dimension of the spinor module.
    pub fn spinor_dim(&self) -> usize {
        self.gamma[0].rows
    }

    pub fn convention(&self) -> &str {
        &self.convention
    }

    pub fn gamma(&self, i: usize) -> &Mat {
        &self.gamma[i - 1]
    }

    /// Clifford action of a multivector on a spinor.
    pub fn act(&self, a: &Multivector, v: &SpinorVec) -> Result<SpinorVec, SpinError> {
        if a.dim() != self.n || v.components.len() != self.spinor_dim() {
            return Err(SpinError::DimMismatch);
        }
        let mut out = vec![Scalar::zero(); self.spinor_dim()];
        for (mask, c) in a.terms() {
            // Apply the blade as gamma_{i_1} ... gamma_{i_k} v, rightmost
            // factor first.
            let mut w = v.components.clone();
            for i in (0..self.n).rev() {
                if mask >> i & 1 == 1 {
                    w = self.gamma[i].apply(&w);
                }
            }
            for (o, x) in out.iter_mut().zip(&w) {
                *o = &*o + &(c * x);
            }
        }
        Ok(SpinorVec { components: out })
    }

    /// The action of a multivector as an explicit matrix on the spinor
    /// module.
    pub fn act_matrix(&self, a: &Multivector) -> Result<Mat, SpinError> {
        let d = self.spinor_dim();
        let mut m = Mat::zeros(d, d);
        for j in 0..d {
            let col = self.act(a, &SpinorVec::basis(d, j))?;
            for i in 0..d {
                m[(i, j)] = col.components[i].clone();
            }
        }
        Ok(m)
    }

    /// Lift of a skew-symmetric endomorphism of the frame to the spinor
    /// module, `E_{i,j} -> gamma_i gamma_j / 2` (where `E_{i,j}` maps
    /// `e_i` to `e_j` and `e_j` to `-e_i`).
    pub fn spin_lift(&self, a: &Mat) -> Result<Mat, SpinError> {
        if a.rows != self.n || a.cols != self.n {
            return Err(SpinError::DimMismatch);
        }
        if !a.is_skew() {
            return Err(SpinError::NotSkew);
        }
        let d = self.spinor_dim();
        let mut out = Mat::zeros(d, d);
        for i in 0..self.n {
            for j in i + 1..self.n {
                // Coefficient of E_{i+1,j+1} in a: the (j, i) entry.
                let c = &a[(j, i)] * &Scalar::rational(1, 2);
                if c.is_zero() {
                    continue;
                }
                let gij = self.gamma[i].matmul(&self.gamma[j]);
                out = &out + &gij.scale(&c);
            }
        }
        Ok(out)
    }

    /// The volume element `e_1 ... e_n` as a matrix.
    pub fn volume_matrix(&self) -> Mat {
        let mut m = Mat::identity(self.spinor_dim());
        for g in self.gamma.iter().rev() {
            m = g.matmul(&m);
        }
        m
    }
}

/// An element of the spinor module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinorVec {
    pub components: Vec<Scalar>,
}

impl SpinorVec {
    pub fn zero(dim: usize) -> Self {
        SpinorVec { components: vec![Scalar::zero(); dim] }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = SpinorVec::zero(dim);
        v.components[k] = Scalar::one();
        v
    }

    pub fn from_components(components: Vec<Scalar>) -> Self {
        SpinorVec { components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, by: &Scalar) -> Self {
        SpinorVec { components: self.components.iter().map(|c| c * by).collect() }
    }
}

impl std::ops::Add for &SpinorVec {
    type Output = SpinorVec;
    fn add(self, rhs: &SpinorVec) -> SpinorVec {
        assert_eq!(self.components.len(), rhs.components.len());
        SpinorVec {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &SpinorVec {
    type Output = SpinorVec;
    fn sub(self, rhs: &SpinorVec) -> SpinorVec {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &SpinorVec {
    type Output = SpinorVec;
    fn neg(self) -> SpinorVec {
        SpinorVec { components: self.components.iter().map(|c| -c).collect() }
    }
}

// ---------------------------------------------------------------------------
// constructions

fn pauli() -> (Mat, Mat, Mat) {
    let i = Scalar::i();
    let one = Scalar::one();
    let s1 = Mat::from_rows(vec![
        vec![Scalar::zero(), one.clone()],
        vec![one.clone(), Scalar::zero()],
    ]);
    let s2 = Mat::from_rows(vec![
        vec![Scalar::zero(), -&i],
        vec![i.clone(), Scalar::zero()],
    ]);
    let s3 = Mat::from_rows(vec![
        vec![one.clone(), Scalar::zero()],
        vec![Scalar::zero(), -&one],
    ]);
    (s1, s2, s3)
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = &a[(i, j)] * &b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tensor-product gammas: for `n = 2m` or `2m+1`, matrices of size `2^m`
/// with `gamma_{2k-1} = s3^(k-1) x (i s1) x 1...` and `gamma_n = i s3^m`
/// in odd dimensions.  Whenever the volume element is a real scalar
/// (odd `n` with `n = 3 mod 4`) its sign is normalized to `+Id`; for
/// `n = 1 mod 4` the volume is imaginary and the last gamma's sign picks
/// one of the two modules.
fn tensor_gammas(n: usize) -> Vec<Mat> {
    let m = n / 2;
    let (s1, s2, s3) = pauli();
    let i = Scalar::i();
    let is1 = s1.scale(&i);
    let is2 = s2.scale(&i);
    let ident = Mat::identity(2);
    let build = |slot: usize, mid: &Mat| -> Mat {
        let mut acc = Mat::identity(1);
        for k in 0..m {
            let factor = if k < slot {
                &s3
            } else if k == slot {
                mid
            } else {
                &ident
            };
            acc = kron(&acc, factor);
        }
        acc
    };
    let mut gamma = Vec::with_capacity(n);
    for k in 0..m {
        gamma.push(build(k, &is1));
        gamma.push(build(k, &is2));
    }
    if n % 2 == 1 {
        let mut acc = Mat::identity(1);
        for _ in 0..m {
            acc = kron(&acc, &s3);
        }
        let mut last = acc.scale(&i);
        let mut vol = Mat::identity(1 << m);
        for g in &gamma {
            vol = vol.matmul(g);
        }
        vol = vol.matmul(&last);
        if vol[(0, 0)] == Scalar::from_integer(-1) {
            last = -&last;
        }
        gamma.push(last);
    }
    gamma
}

/// Fano-plane lines of the frozen octonion table: `o_i o_{i+1} = o_{i+3}`
/// with indices cyclic mod 7.
pub const FANO_LINES: [[usize; 3]; 7] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

/// Octonion product of imaginary units: `o_i o_j = sign * o_k` (index 0
/// denotes the real unit).
fn octonion_mul(i: usize, j: usize) -> (i32, usize) {
    if i == j {
        return (-1, 0);
    }
    for line in FANO_LINES {
        let [a, b, c] = line;
        // Cyclic orientation a -> b -> c -> a.
        if (i, j) == (a, b) || (i, j) == (b, c) || (i, j) == (c, a) {
            let k = line.iter().copied().find(|&x| x != i && x != j).unwrap();
            return (1, k);
        }
        if (j, i) == (a, b) || (j, i) == (b, c) || (j, i) == (c, a) {
            let k = line.iter().copied().find(|&x| x != i && x != j).unwrap();
            return (-1, k);
        }
    }
    unreachable!("indices {i},{j} not covered by the Fano lines")
}

/// Gamma matrices for dimension 7: `gamma_i = -L_{o_i}` acting on the
/// octonions with basis `(1, o_1, ..., o_7)`.
fn octonion_gammas() -> Vec<Mat> {
    let mut gamma = Vec::with_capacity(7);
    for i in 1..=7 {
        let mut g = Mat::zeros(8, 8);
        // Column 0: o_i * 1 = o_i.
        g[(i, 0)] = Scalar::from_integer(-1);
        for j in 1..=7 {
            let (sign, k) = octonion_mul(i, j);
            g[(k, j)] = Scalar::from_integer(-(sign as i64));
        }
        gamma.push(g);
    }
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn anticommutation_holds(rep: &GammaRep) {
        let n = rep.frame_dim();
        let d = rep.spinor_dim();
        for i in 1..=n {
            for j in 1..=n {
                let s = &rep.gamma(i).matmul(rep.gamma(j)) + &rep.gamma(j).matmul(rep.gamma(i));
                let expect = if i == j {
                    Mat::identity(d).scale(&Scalar::from_integer(-2))
                } else {
                    Mat::zeros(d, d)
                };
                assert_eq!(s, expect, "gamma_{i} gamma_{j} anticommutator, n = {n}");
            }
        }
    }

    #[test]
    fn relations_hold_for_all_dims() {
        for n in 3..=8 {
            let rep = GammaRep::build(n).unwrap();
            assert_eq!(rep.spinor_dim(), 1 << (n / 2));
            anticommutation_holds(&rep);
        }
        assert!(GammaRep::build(9).is_err());
    }

    #[test]
    fn dim7_is_real_with_unit_entries() {
        let rep = GammaRep::build(7).unwrap();
        for i in 1..=7 {
            let g = rep.gamma(i);
            for r in 0..8 {
                for c in 0..8 {
                    let v = &g[(r, c)];
                    assert!(
                        v.is_zero()
                            || *v == Scalar::from_integer(1)
                            || *v == Scalar::from_integer(-1)
                    );
                }
            }
        }
        // The volume element of an irreducible odd-dimensional module is a
        // scalar.
        let vol = rep.volume_matrix();
        let id = Mat::identity(8);
        assert!(vol == id || vol == id.scale(&Scalar::from_integer(-1)));
        assert_eq!(vol, id);
    }

    #[test]
    fn berger_torsion_spectrum() {
        let rep = GammaRep::build(7).unwrap();
        let t = rep.act_matrix(&testutil::berger_torsion()).unwrap();
        // (T + 7/sqrt5)(T - 1/sqrt5) = 0, exactly.
        let c1 = &Scalar::from_integer(7) * &testutil::inv_sqrt5();
        let c2 = testutil::inv_sqrt5();
        let f1 = &t + &Mat::identity(8).scale(&c1);
        let f2 = &t - &Mat::identity(8).scale(&c2);
        assert!(f1.matmul(&f2).is_zero());
        // Multiplicity of -7/sqrt5 is one.
        assert_eq!(f1.nullspace().len(), 1);
        assert_eq!(f2.nullspace().len(), 7);
    }

    #[test]
    fn action_is_algebra_homomorphism() {
        let mut rng = StdRng::seed_from_u64(19);
        for n in [3usize, 4, 7] {
            let rep = GammaRep::build(n).unwrap();
            let d = rep.spinor_dim();
            for _ in 0..34 {
                let a = testutil::random_multivector(n, &mut rng);
                let b = testutil::random_multivector(n, &mut rng);
                let v = SpinorVec::from_components(
                    (0..d).map(|_| Scalar::from_integer(rng.gen_range(-2..=2))).collect(),
                );
                let ab = a.geometric_product(&b).unwrap();
                let lhs = rep.act(&ab, &v).unwrap();
                let rhs = rep.act(&a, &rep.act(&b, &v).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "act(a*b) vs act(a)act(b), n = {n}");
            }
        }
    }

    #[test]
    fn action_unit_and_square() {
        let rep = GammaRep::build(5).unwrap();
        let v = SpinorVec::from_components(
            (0..4).map(|k| Scalar::from_integer(k as i64 - 1)).collect(),
        );
        let one = Multivector::one(5);
        assert_eq!(rep.act(&one, &v).unwrap(), v);
        for i in 1..=5 {
            let ei = Multivector::basis_vector(5, i).unwrap();
            let twice = rep.act(&ei, &rep.act(&ei, &v).unwrap()).unwrap();
            assert_eq!(twice, -&v);
        }
    }

    #[test]
    fn spin_lift_basics() {
        let rep = GammaRep::build(5).unwrap();
        assert!(rep.spin_lift(&Mat::zeros(5, 5)).unwrap().is_zero());
        // E_{1,2}: e_1 -> e_2, e_2 -> -e_1.
        let mut e12 = Mat::zeros(5, 5);
        e12[(1, 0)] = Scalar::one();
        e12[(0, 1)] = Scalar::from_integer(-1);
        let lifted = rep.spin_lift(&e12).unwrap();
        let expect = rep.gamma(1).matmul(rep.gamma(2)).scale(&Scalar::rational(1, 2));
        assert_eq!(lifted, expect);
        // Not skew -> error.
        let mut bad = Mat::zeros(5, 5);
        bad[(0, 1)] = Scalar::one();
        assert_eq!(rep.spin_lift(&bad), Err(SpinError::NotSkew));
    }

    #[test]
    fn spin_lift_is_lie_homomorphism() {
        let rep = GammaRep::build(5).unwrap();
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..25 {
            let a = testutil::random_skew(5, &mut rng);
            let b = testutil::random_skew(5, &mut rng);
            let lhs = rep.spin_lift(&a.commutator(&b)).unwrap();
            let rhs = rep.spin_lift(&a).unwrap().commutator(&rep.spin_lift(&b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn omega_action_spectrum() {
        // The stable 3-form omega = -sqrt5 T acts with annihilating
        // polynomial (omega - 7)(omega + 1) = 0, eigenvalue 7 simple.
        let rep = GammaRep::build(7).unwrap();
        let omega = testutil::berger_torsion().scale(&-&Scalar::sqrt(5).unwrap());
        let m = rep.act_matrix(&omega).unwrap();
        let f1 = &m - &Mat::identity(8).scale(&Scalar::from_integer(7));
        let f2 = &m + &Mat::identity(8);
        assert!(f1.matmul(&f2).is_zero());
        assert_eq!(f1.nullspace().len(), 1);
        assert_eq!(f2.nullspace().len(), 7);
    }

    #[test]
    fn volume_sign_choice() {
        let plus = GammaRep::build_with_volume(3, VolumeSign::Plus).unwrap();
        let minus = GammaRep::build_with_volume(3, VolumeSign::Minus).unwrap();
        assert_eq!(plus.volume_matrix(), Mat::identity(2));
        assert_eq!(minus.volume_matrix(), Mat::identity(2).scale(&Scalar::from_integer(-1)));
    }
}
