//! Graded Clifford/exterior algebra over an orthonormal frame.
//!
//! Basis blades are bitmasks over the frame indices `1..=n`, with the
//! negative-definite convention `e_i * e_i = -1`, so that
//! `e_i * X + X * e_i = -2 g(e_i, X)`.  k-forms embed as sums of blades;
//! for an orthonormal frame this coincides with the antisymmetrised tensor
//! picture, and one representation serves the wedge, the contraction and
//! the Clifford product.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactfield::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("expected a vector (grade 1), got grades {0:?}")]
    NotAVector(Vec<u32>),
    #[error("expected a 3-form, got grades {0:?}")]
    NotA3Form(Vec<u32>),
    #[error("expected a homogeneous form of grade {0}")]
    NotAForm(u32),
    #[error("frame index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
}

/// Sign of interleaving the blade `a` with the blade `b`, counting the
/// transpositions needed to bring `e_a * e_b` into ascending order.
fn reorder_sign(a: u32, b: u32) -> i32 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Clifford product of two basis blades: resulting blade and sign, using
/// `e_i^2 = -1`.
fn blade_mul(a: u32, b: u32) -> (u32, i32) {
    let mut sign = reorder_sign(a, b);
    if (a & b).count_ones() % 2 == 1 {
        sign = -sign;
    }
    (a ^ b, sign)
}

/// Element of the Clifford/exterior algebra of an n-dimensional
/// orthonormal frame, with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector {
    dim: usize,
    terms: BTreeMap<u32, Scalar>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Self {
        assert!((3..=10).contains(&dim), "dimension must be in 3..=10");
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, value: Scalar) -> Self {
        let mut m = Multivector::zero(dim);
        m.add_term(0, value);
        m
    }

    pub fn one(dim: usize) -> Self {
        Multivector::scalar(dim, Scalar::one())
    }

    /// The frame vector `e_i`, 1-based.
    pub fn basis_vector(dim: usize, i: usize) -> Result<Self, CliffordError> {
        if i == 0 || i > dim {
            return Err(CliffordError::IndexOutOfRange(i, dim));
        }
        let mut m = Multivector::zero(dim);
        m.add_term(1 << (i - 1), Scalar::one());
        Ok(m)
    }

    /// The blade `e_{i_1} ^ ... ^ e_{i_k}` with the sign of the sorting
    /// permutation; zero for repeated indices.
    pub fn blade(dim: usize, indices: &[usize], coeff: Scalar) -> Result<Self, CliffordError> {
        let mut m = Multivector::zero(dim);
        let Some((mask, sign)) = sort_indices(indices, dim)? else {
            return Ok(m);
        };
        let c = if sign < 0 { -coeff } else { coeff };
        m.add_term(mask, c);
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn add_term(&mut self, mask: u32, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Scalar::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// The grades present, ascending.
    pub fn grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.terms.keys().map(|m| m.count_ones()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn is_form_of_grade(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.count_ones() == k)
    }

    pub fn grade_part(&self, k: u32) -> Multivector {
        let mut out = Multivector::zero(self.dim);
        for (&m, c) in &self.terms {
            if m.count_ones() == k {
                out.add_term(m, c.clone());
            }
        }
        out
    }

    pub fn scalar_part(&self) -> Scalar {
        self.terms.get(&0).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, by: &Scalar) -> Multivector {
        let mut out = Multivector::zero(self.dim);
        for (&m, c) in &self.terms {
            out.add_term(m, c * by);
        }
        out
    }

    fn check_dim(&self, rhs: &Multivector) -> Result<(), CliffordError> {
        if self.dim != rhs.dim {
            return Err(CliffordError::DimMismatch(self.dim, rhs.dim));
        }
        Ok(())
    }

    /// The Clifford (geometric) product.
    pub fn geometric_product(&self, rhs: &Multivector) -> Result<Multivector, CliffordError> {
        self.check_dim(rhs)?;
        let mut out = Multivector::zero(self.dim);
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &rhs.terms {
                let (mask, sign) = blade_mul(ma, mb);
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(mask, c);
            }
        }
        Ok(out)
    }

    /// The exterior product.
    pub fn wedge(&self, rhs: &Multivector) -> Result<Multivector, CliffordError> {
        self.check_dim(rhs)?;
        let mut out = Multivector::zero(self.dim);
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &rhs.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = reorder_sign(ma, mb);
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(ma | mb, c);
            }
        }
        Ok(out)
    }

    /// Interior product `self ⌟ rhs` where `self` must be a vector.
    /// Implemented directly on blades (independent of the Clifford product).
    pub fn contract(&self, rhs: &Multivector) -> Result<Multivector, CliffordError> {
        self.check_dim(rhs)?;
        if !self.is_form_of_grade(1) {
            return Err(CliffordError::NotAVector(self.grades()));
        }
        let mut out = Multivector::zero(self.dim);
        for (&xm, xc) in &self.terms {
            let i = xm.trailing_zeros();
            for (&m, c) in &rhs.terms {
                if m & xm == 0 {
                    continue;
                }
                let below = (m & (xm - 1)).count_ones();
                let mut t = xc * c;
                if below % 2 == 1 {
                    t = -t;
                }
                out.add_term(m & !(1 << i), t);
            }
        }
        Ok(out)
    }

    /// Sum of squared blade coefficients; for a k-form this is the standard
    /// norm with respect to the orthonormal frame.
    pub fn coeff_norm_sq(&self) -> Scalar {
        let mut s = Scalar::zero();
        for c in self.terms.values() {
            s = &s + &(c * c);
        }
        s
    }

    /// `sum_{i<j<k} T_{ijk}^2` of a 3-form; equals
    /// `(1/3) sum_{i<j} g(T(e_i,e_j), T(e_i,e_j))`.
    pub fn three_form_norm_sq(&self) -> Result<Scalar, CliffordError> {
        if !self.is_form_of_grade(3) {
            return Err(CliffordError::NotA3Form(self.grades()));
        }
        Ok(self.coeff_norm_sq())
    }

    /// Hodge star with respect to the frame volume `e_1 ^ ... ^ e_n`.
    pub fn hodge_star(&self) -> Multivector {
        let full = ((1u64 << self.dim) - 1) as u32;
        let mut out = Multivector::zero(self.dim);
        for (&m, c) in &self.terms {
            let comp = full & !m;
            let sign = reorder_sign(m, comp);
            let mut t = c.clone();
            if sign < 0 {
                t = -t;
            }
            out.add_term(comp, t);
        }
        out
    }

    /// The vector `T(x, y) = sum_k T(x, y, e_k) e_k` of a 3-form, i.e. the
    /// frame expansion of `g(T(x,y), .)`.
    pub fn torsion_vector(
        &self,
        x: &Multivector,
        y: &Multivector,
    ) -> Result<Multivector, CliffordError> {
        if !self.is_form_of_grade(3) {
            return Err(CliffordError::NotA3Form(self.grades()));
        }
        let yt = y.contract(self)?;
        x.contract(&yt).map(|v| -&v)
    }

    /// Evaluates a k-form on k frame vectors (1-based indices), with full
    /// antisymmetry; zero on repeated indices.
    pub fn eval_on_frame(&self, indices: &[usize]) -> Result<Scalar, CliffordError> {
        let k = indices.len() as u32;
        if !self.is_form_of_grade(k) {
            return Err(CliffordError::NotAForm(k));
        }
        let Some((mask, sign)) = sort_indices(indices, self.dim)? else {
            return Ok(Scalar::zero());
        };
        let c = self.terms.get(&mask).cloned().unwrap_or_else(Scalar::zero);
        Ok(if sign < 0 { -c } else { c })
    }

    /// Frame components of a vector (grade-1) multivector, 0-based storage.
    pub fn vector_components(&self) -> Result<Vec<Scalar>, CliffordError> {
        if !self.is_form_of_grade(1) {
            return Err(CliffordError::NotAVector(self.grades()));
        }
        let mut v = vec![Scalar::zero(); self.dim];
        for (&m, c) in &self.terms {
            v[m.trailing_zeros() as usize] = c.clone();
        }
        Ok(v)
    }
}

fn sort_indices(indices: &[usize], dim: usize) -> Result<Option<(u32, i32)>, CliffordError> {
    let mut v: Vec<usize> = indices.to_vec();
    for &i in &v {
        if i == 0 || i > dim {
            return Err(CliffordError::IndexOutOfRange(i, dim));
        }
    }
    let mut sign = 1i32;
    // Insertion sort, tracking the permutation parity.
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Ok(None);
    }
    let mut mask = 0u32;
    for &i in &v {
        mask |= 1 << (i - 1);
    }
    Ok(Some((mask, sign)))
}

/// The 4-form `sigma_T = 1/2 sum_i (e_i ⌟ T) ^ (e_i ⌟ T)` of a 3-form.
pub fn sigma_t(t: &Multivector) -> Result<Multivector, CliffordError> {
    if !t.is_form_of_grade(3) {
        return Err(CliffordError::NotA3Form(t.grades()));
    }
    let n = t.dim();
    let mut acc = Multivector::zero(n);
    for i in 1..=n {
        let ei = Multivector::basis_vector(n, i)?;
        let c = ei.contract(t)?;
        acc = &acc + &c.wedge(&c)?;
    }
    Ok(acc.scale(&Scalar::rational(1, 2)))
}

impl std::ops::Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (&m, c) in &rhs.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let mut out = Multivector::zero(self.dim);
        for (&m, c) in &self.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, c) in &self.terms {
            let repr = format!("{}", c);
            let (neg, mag) = match repr.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, repr),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mask == 0 {
                write!(f, "{}", mag)?;
                continue;
            }
            let blade = blade_name(mask, self.dim);
            if mag == "1" {
                write!(f, "{}", blade)?;
            } else if mag.contains(" + ") || mag.contains(" - ") {
                write!(f, "({})*{}", mag, blade)?;
            } else {
                write!(f, "{}*{}", mag, blade)?;
            }
        }
        Ok(())
    }
}

fn blade_name(mask: u32, dim: usize) -> String {
    let idx: Vec<usize> = (0..dim).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
    if dim < 10 {
        format!("e{}", idx.iter().map(usize::to_string).collect::<String>())
    } else {
        format!("e{{{}}}", idx.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{berger_star_omega, berger_torsion, random_three_form, random_vector};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn e(dim: usize, i: usize) -> Multivector {
        Multivector::basis_vector(dim, i).unwrap()
    }

    #[test]
    fn clifford_convention() {
        let p = e(4, 1).geometric_product(&e(4, 1)).unwrap();
        assert_eq!(p, Multivector::scalar(4, Scalar::from_integer(-1)));
        let anti = &e(4, 1).geometric_product(&e(4, 2)).unwrap()
            + &e(4, 2).geometric_product(&e(4, 1)).unwrap();
        assert!(anti.is_zero());
    }

    #[test]
    fn wedge_basics() {
        assert!(e(5, 1).wedge(&e(5, 1)).unwrap().is_zero());
        let e23 = Multivector::blade(5, &[2, 3], Scalar::one()).unwrap();
        let expect = Multivector::blade(5, &[1, 2, 3], Scalar::one()).unwrap();
        assert_eq!(e(5, 1).wedge(&e23).unwrap(), expect);
    }

    #[test]
    fn contraction_basics() {
        let e123 = Multivector::blade(5, &[1, 2, 3], Scalar::one()).unwrap();
        let e23 = Multivector::blade(5, &[2, 3], Scalar::one()).unwrap();
        assert_eq!(e(5, 1).contract(&e123).unwrap(), e23);
        assert!(e(5, 4).contract(&e123).unwrap().is_zero());
    }

    #[test]
    fn hodge_star_convention() {
        let vol = Multivector::blade(7, &[1, 2, 3, 4, 5, 6, 7], Scalar::one()).unwrap();
        assert_eq!(vol.hodge_star(), Multivector::one(7));
        // The Berger-space value freezes the sign convention.
        let omega = berger_torsion().scale(&-&Scalar::sqrt(5).unwrap());
        assert_eq!(omega.hodge_star(), berger_star_omega());
        // star(star) = +1 on 3-forms in dimension 7.
        assert_eq!(omega.hodge_star().hodge_star(), omega);
    }

    #[test]
    fn berger_torsion_values() {
        let t = berger_torsion();
        assert_eq!(t.three_form_norm_sq().unwrap(), Scalar::rational(7, 5));
        // T.T = -2 sigma_T + |T|^2 inside the Clifford algebra.
        let tt = t.geometric_product(&t).unwrap();
        let sigma = sigma_t(&t).unwrap();
        let expect = &sigma.scale(&Scalar::from_integer(-2))
            + &Multivector::scalar(7, Scalar::rational(7, 5));
        assert_eq!(tt, expect);
        // T(e_1, e_2) = -(1/sqrt5) e_4.
        let tv = t.torsion_vector(&e(7, 1), &e(7, 2)).unwrap();
        let c = -&Scalar::sqrt(5).unwrap().inverse().unwrap();
        assert_eq!(tv, Multivector::blade(7, &[4], c).unwrap());
    }

    #[test]
    fn torsion_vector_basics() {
        let t = Multivector::blade(3, &[1, 2, 3], Scalar::one()).unwrap();
        assert_eq!(t.torsion_vector(&e(3, 1), &e(3, 2)).unwrap(), e(3, 3));
        let s3 = Multivector::blade(3, &[1, 2, 3], Scalar::from_integer(-2)).unwrap();
        assert_eq!(s3.three_form_norm_sq().unwrap(), Scalar::from_integer(4));
    }

    #[test]
    fn sigma_vanishes_in_dimension_three() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let t = random_three_form(3, &mut rng);
            assert!(sigma_t(&t).unwrap().is_zero());
        }
    }

    #[test]
    fn identity_fuzz_small() {
        let mut rng = StdRng::seed_from_u64(42);
        for dim in 3..=8 {
            for _ in 0..8 {
                let t = random_three_form(dim, &mut rng);
                let x = random_vector(dim, &mut rng);
                for (name, check) in crate::report::clifford_identities(&t, &x) {
                    assert!(check, "identity {name} failed in dim {dim}");
                }
            }
        }
    }

    #[test]
    fn clifford_relation_on_random_vectors() {
        // e_i X + X e_i = -2 g(e_i, X).
        let mut rng = StdRng::seed_from_u64(3);
        for dim in 3..=8 {
            for _ in 0..10 {
                let x = random_vector(dim, &mut rng);
                let comps = x.vector_components().unwrap();
                for i in 1..=dim {
                    let ei = e(dim, i);
                    let anti = &ei.geometric_product(&x).unwrap()
                        + &x.geometric_product(&ei).unwrap();
                    let expect = Multivector::scalar(
                        dim,
                        &Scalar::from_integer(-2) * &comps[i - 1],
                    );
                    assert_eq!(anti, expect);
                }
            }
        }
    }

    #[test]
    fn display_style() {
        let t = berger_torsion();
        let s = format!("{}", t);
        assert!(s.starts_with("-1/sqrt5*e124"), "got {s}");
    }
}
