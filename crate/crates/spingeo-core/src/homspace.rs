//! Naturally reductive homogeneous spaces from structure constants.
//!
//! A space is a Lie algebra `g = k + m` given on a basis (isotropy part
//! first), with the inner product on `m` declared orthonormal.  Everything
//! else is derived: the canonical torsion `T(X,Y,Z) = -<[X,Y]_m, Z>`, the
//! one-parameter Nomizu family `L^t(X)Y = ((1-t)/2) [X,Y]_m` joining the
//! Levi-Civita connection (`t = 0`) to the canonical connection (`t = 1`),
//! the curvature `R(X,Y) = [L(X), L(Y)] - L([X,Y]_m) - ad([X,Y]_k)`, and
//! the invariant exterior differential and codifferential.

use thiserror::Error;

use crate::clifford::Multivector;
use crate::exactfield::Scalar;
use crate::linalg::Mat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("space is not naturally reductive: {0}")]
    NotNaturallyReductive(String),
    #[error("form is not isotropy-invariant (witness: {0})")]
    NotInvariant(String),
    #[error("{0}")]
    Clifford(#[from] crate::clifford::CliffordError),
}

/// One validation item with an optional violation witness.
#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Result of [`ReductiveSpace::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub jacobi: ValidationCheck,
    pub reductivity: ValidationCheck,
    pub natural_reductivity: ValidationCheck,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.jacobi.passed && self.reductivity.passed && self.natural_reductivity.passed
    }

    pub fn checks(&self) -> [&ValidationCheck; 3] {
        [&self.jacobi, &self.reductivity, &self.natural_reductivity]
    }
}

/// A reductive homogeneous space `G/K` described by structure constants on
/// a basis of `g = k + m` (the `dim_k` isotropy elements first), with the
/// metric on `m` the identity in the given frame.
#[derive(Debug, Clone)]
pub struct ReductiveSpace {
    pub name: String,
    pub dim_k: usize,
    pub dim_m: usize,
    /// `bracket[a][b]` = coefficients of `[x_a, x_b]` over the full basis.
    bracket: Vec<Vec<Vec<Scalar>>>,
}

impl ReductiveSpace {
    /// Builds a space from a list of brackets `[x_a, x_b]` (either order);
    /// the opposite order follows by antisymmetry.
    pub fn new(
        name: impl Into<String>,
        dim_k: usize,
        dim_m: usize,
        mut entries: Vec<(usize, usize, Vec<Scalar>)>,
    ) -> Self {
        let dim = dim_k + dim_m;
        let mut bracket = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
        for (a, b, coeffs) in entries.drain(..) {
            assert!(a < dim && b < dim && a != b && coeffs.len() == dim);
            for (k, c) in coeffs.into_iter().enumerate() {
                if a < b {
                    bracket[a][b][k] = c;
                } else {
                    bracket[b][a][k] = -c;
                }
            }
        }
        for a in 0..dim {
            for b in 0..a {
                for k in 0..dim {
                    bracket[a][b][k] = -&bracket[b][a][k];
                }
            }
        }
        ReductiveSpace { name: name.into(), dim_k, dim_m, bracket }
    }

    pub fn dim(&self) -> usize {
        self.dim_k + self.dim_m
    }

    /// `[x_a, x_b]` over the full basis (0-based indices into `k ++ m`).
    pub fn bracket(&self, a: usize, b: usize) -> &[Scalar] {
        &self.bracket[a][b]
    }

    /// The m-part of `[e_i, e_j]` for frame indices `i, j` (0-based in m).
    pub fn bracket_m(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.bracket[self.dim_k + i][self.dim_k + j][self.dim_k..].to_vec()
    }

    /// The k-part of `[e_i, e_j]` for frame indices (0-based in m).
    pub fn bracket_k(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.bracket[self.dim_k + i][self.dim_k + j][..self.dim_k].to_vec()
    }

    fn bracket_vectors(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        for a in 0..dim {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..dim {
                if y[b].is_zero() {
                    continue;
                }
                let f = &x[a] * &y[b];
                for k in 0..dim {
                    if !self.bracket[a][b][k].is_zero() {
                        out[k] = &out[k] + &(&f * &self.bracket[a][b][k]);
                    }
                }
            }
        }
        out
    }

    /// Checks the Jacobi identity, reductivity (`[k, m] ⊆ m`) and natural
    /// reductivity (total skewness of `<[X,Y]_m, Z>` on `m`), reporting the
    /// first violating tuple of each kind.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let mut jacobi = ValidationCheck { name: "jacobi", passed: true, witness: None };
        'outer: for a in 0..dim {
            for b in a + 1..dim {
                for c in b + 1..dim {
                    let ab = self.bracket[a][b].clone();
                    let bc = self.bracket[b][c].clone();
                    let ca = self.bracket[c][a].clone();
                    let basis = |k: usize| {
                        let mut v = vec![Scalar::zero(); dim];
                        v[k] = Scalar::one();
                        v
                    };
                    let mut total = vec![Scalar::zero(); dim];
                    for (lhs, other) in [(&ab, c), (&bc, a), (&ca, b)] {
                        let t = self.bracket_vectors(lhs, &basis(other));
                        for k in 0..dim {
                            total[k] = &total[k] + &t[k];
                        }
                    }
                    if total.iter().any(|v| !v.is_zero()) {
                        jacobi.passed = false;
                        jacobi.witness = Some(format!("basis triple ({a}, {b}, {c})"));
                        break 'outer;
                    }
                }
            }
        }

        let mut reductivity = ValidationCheck { name: "reductivity", passed: true, witness: None };
        'red: for a in 0..self.dim_k {
            for i in 0..self.dim_m {
                let v = &self.bracket[a][self.dim_k + i];
                if v[..self.dim_k].iter().any(|c| !c.is_zero()) {
                    reductivity.passed = false;
                    reductivity.witness = Some(format!("[k_{a}, e_{}] leaves m", i + 1));
                    break 'red;
                }
            }
        }

        let mut natural =
            ValidationCheck { name: "natural-reductivity", passed: true, witness: None };
        'nat: for i in 0..self.dim_m {
            for j in 0..self.dim_m {
                let bm = self.bracket_m(i, j);
                // <[e_i,e_j]_m, e_k> must be alternating in all three slots;
                // antisymmetry in (i,j) is built in, so check k against i, j.
                if !bm[i].is_zero() || !bm[j].is_zero() {
                    natural.passed = false;
                    natural.witness = Some(format!("<[e_{}, e_{}]_m, .> not skew", i + 1, j + 1));
                    break 'nat;
                }
                for k in 0..self.dim_m {
                    let other = self.bracket_m(k, j);
                    if (&bm[k] + &other[i]).is_zero() {
                        continue;
                    }
                    natural.passed = false;
                    natural.witness =
                        Some(format!("triple ({}, {}, {})", i + 1, j + 1, k + 1));
                    break 'nat;
                }
            }
        }

        ValidationReport { jacobi, reductivity, natural_reductivity: natural }
    }

    /// The canonical torsion `T(X,Y,Z) = -<[X,Y]_m, Z>` as an invariant
    /// 3-form on the frame.
    pub fn canonical_torsion(&self) -> Result<Multivector, HomError> {
        let report = self.validate();
        if !report.natural_reductivity.passed {
            return Err(HomError::NotNaturallyReductive(
                report.natural_reductivity.witness.unwrap_or_default(),
            ));
        }
        let n = self.dim_m;
        let mut t = Multivector::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let bm = self.bracket_m(i, j);
                for k in j + 1..n {
                    if !bm[k].is_zero() {
                        t = &t + &Multivector::blade(n, &[i + 1, j + 1, k + 1], -&bm[k])?;
                    }
                }
            }
        }
        Ok(t)
    }

    /// Nomizu maps of the connection family with torsion `t * T_can`:
    /// `L^t(e_i) e_j = ((1-t)/2) [e_i, e_j]_m`, one skew matrix per frame
    /// vector.  `t = 0` is Levi-Civita, `t = 1` the canonical connection.
    pub fn nomizu_family(&self, t: &Scalar) -> Vec<Mat> {
        let factor = &(&Scalar::one() - t) * &Scalar::rational(1, 2);
        let n = self.dim_m;
        (0..n)
            .map(|i| {
                let mut m = Mat::zeros(n, n);
                for j in 0..n {
                    let bm = self.bracket_m(i, j);
                    for k in 0..n {
                        if !bm[k].is_zero() {
                            m[(k, j)] = &factor * &bm[k];
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Nomizu maps of the metric connection with an arbitrary invariant
    /// skew torsion `H`: `L(X) = (1/2)[X, .]_m + (1/2) H(X, ., .)`.
    pub fn nomizu_with_torsion(&self, h: &Multivector) -> Result<Vec<Mat>, HomError> {
        let n = self.dim_m;
        let mut maps = self.nomizu_family(&Scalar::zero());
        for (i, m) in maps.iter_mut().enumerate() {
            for j in 0..n {
                for k in 0..n {
                    if j == k {
                        continue;
                    }
                    let c = h.eval_on_frame(&[i + 1, j + 1, k + 1])?;
                    if !c.is_zero() {
                        m[(k, j)] = &m[(k, j)] + &(&c * &Scalar::rational(1, 2));
                    }
                }
            }
        }
        Ok(maps)
    }

    /// `ad` of the k-basis element `a` restricted to `m` (the isotropy
    /// representation in matrix form).
    pub fn isotropy_action(&self, a: usize) -> Mat {
        let n = self.dim_m;
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            let v = &self.bracket[a][self.dim_k + j];
            for k in 0..n {
                m[(k, j)] = v[self.dim_k + k].clone();
            }
        }
        m
    }

    /// Curvature endomorphism `R(e_i, e_j)` of the family member with
    /// torsion scale `t`, on the frame:
    /// `R(X,Y) = [L(X), L(Y)] - L([X,Y]_m) - ad([X,Y]_k)`.
    pub fn curvature(&self, t: &Scalar) -> CurvatureData {
        self.curvature_from_maps(&self.nomizu_family(t))
    }

    /// Curvature of the invariant metric connection with an arbitrary
    /// invariant skew torsion `h`.
    pub fn curvature_with_torsion(&self, h: &Multivector) -> Result<CurvatureData, HomError> {
        Ok(self.curvature_from_maps(&self.nomizu_with_torsion(h)?))
    }

    fn curvature_from_maps(&self, maps: &[Mat]) -> CurvatureData {
        let n = self.dim_m;
        let mut r = vec![vec![Mat::zeros(n, n); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut m = maps[i].commutator(&maps[j]);
                // L([e_i, e_j]_m)
                let bm = self.bracket_m(i, j);
                for (k, c) in bm.iter().enumerate() {
                    if !c.is_zero() {
                        m = &m - &maps[k].scale(c);
                    }
                }
                // ad([e_i, e_j]_k)
                let bk = self.bracket_k(i, j);
                for (a, c) in bk.iter().enumerate() {
                    if !c.is_zero() {
                        m = &m - &self.isotropy_action(a).scale(c);
                    }
                }
                r[i][j] = m;
            }
        }
        CurvatureData { r }
    }

    /// Ricci tensor `Ric(X, Y) = sum_i <R(X, e_i) e_i, Y>` of the family
    /// member with torsion scale `t`.
    pub fn ricci(&self, t: &Scalar) -> Mat {
        self.curvature(t).ricci()
    }

    /// Ricci tensor of the connection with arbitrary invariant torsion `h`.
    pub fn ricci_with_torsion(&self, h: &Multivector) -> Result<Mat, HomError> {
        Ok(self.curvature_with_torsion(h)?.ricci())
    }

    pub fn scalar_curvature(&self, t: &Scalar) -> Scalar {
        self.ricci(t).trace()
    }

    /// True iff the form is annihilated by the isotropy action.
    pub fn is_invariant(&self, alpha: &Multivector) -> Result<bool, HomError> {
        Ok(self.invariance_witness(alpha)?.is_none())
    }

    fn invariance_witness(&self, alpha: &Multivector) -> Result<Option<String>, HomError> {
        let n = self.dim_m;
        let grades = alpha.grades();
        let k = *grades.first().unwrap_or(&0);
        for a in 0..self.dim_k {
            let ad = self.isotropy_action(a);
            for combo in index_combinations(n, k as usize) {
                let mut total = Scalar::zero();
                for slot in 0..combo.len() {
                    // Replace the slot by [y_a, e_slot]_m and evaluate.
                    let col = combo[slot];
                    for row in 0..n {
                        if ad[(row, col)].is_zero() {
                            continue;
                        }
                        let mut idx: Vec<usize> = combo.iter().map(|&c| c + 1).collect();
                        idx[slot] = row + 1;
                        let v = alpha.eval_on_frame(&idx)?;
                        if !v.is_zero() {
                            total = &total + &(&ad[(row, col)] * &v);
                        }
                    }
                }
                if !total.is_zero() {
                    return Ok(Some(format!(
                        "k-basis {a} on frame tuple {:?}",
                        combo.iter().map(|&c| c + 1).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(None)
    }

    /// Exterior differential of an invariant k-form:
    /// `(d a)(X_0..X_k) = sum_{i<j} (-1)^{i+j} a([X_i,X_j]_m, X_0..^i..^j..X_k)`.
    pub fn invariant_d(&self, alpha: &Multivector) -> Result<Multivector, HomError> {
        if let Some(w) = self.invariance_witness(alpha)? {
            return Err(HomError::NotInvariant(w));
        }
        let n = self.dim_m;
        let grades = alpha.grades();
        let k = *grades.first().unwrap_or(&0) as usize;
        let mut out = Multivector::zero(n);
        if k + 1 > n {
            return Ok(out);
        }
        for combo in index_combinations(n, k + 1) {
            let mut value = Scalar::zero();
            for i in 0..combo.len() {
                for j in i + 1..combo.len() {
                    let bm = self.bracket_m(combo[i], combo[j]);
                    let rest: Vec<usize> = combo
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != i && p != j)
                        .map(|(_, &c)| c + 1)
                        .collect();
                    let mut term = Scalar::zero();
                    for (l, c) in bm.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut idx = vec![l + 1];
                        idx.extend_from_slice(&rest);
                        let v = alpha.eval_on_frame(&idx)?;
                        if !v.is_zero() {
                            term = &term + &(c * &v);
                        }
                    }
                    if (i + j) % 2 == 1 {
                        term = -term;
                    }
                    value = &value + &term;
                }
            }
            if !value.is_zero() {
                let idx: Vec<usize> = combo.iter().map(|&c| c + 1).collect();
                out = &out + &Multivector::blade(n, &idx, value)?;
            }
        }
        Ok(out)
    }

    /// Codifferential `delta = (-1)^{n(k+1)+1} * d *` on invariant k-forms.
    pub fn invariant_delta(&self, alpha: &Multivector) -> Result<Multivector, HomError> {
        let n = self.dim_m;
        let grades = alpha.grades();
        let k = *grades.first().unwrap_or(&0) as usize;
        let star = alpha.hodge_star();
        let dstar = self.invariant_d(&star)?;
        let out = dstar.hodge_star();
        if (n * (k + 1) + 1) % 2 == 1 {
            Ok(-&out)
        } else {
            Ok(out)
        }
    }
}

/// Curvature endomorphisms `R(e_i, e_j)` on the frame.
pub struct CurvatureData {
    pub r: Vec<Vec<Mat>>,
}

impl CurvatureData {
    pub fn is_flat(&self) -> bool {
        self.r.iter().all(|row| row.iter().all(Mat::is_zero))
    }

    /// `Ric(X, Y) = sum_i <R(X, e_i) e_i, Y>`.
    pub fn ricci(&self) -> Mat {
        let n = self.r.len();
        let mut ric = Mat::zeros(n, n);
        for x in 0..n {
            for i in 0..n {
                if x == i {
                    continue;
                }
                // R(e_x, e_i) e_i is column i of the endomorphism.
                let r = &self.r[x][i];
                for y in 0..n {
                    ric[(x, y)] = &ric[(x, y)] + &r[(y, i)];
                }
            }
        }
        ric
    }
}

/// All ascending index combinations of size `k` out of `0..n`.
pub fn index_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exactfield::Scalar;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn su2_validates_and_is_round() {
        let space = catalog::su2_space(2);
        let report = space.validate();
        assert!(report.all_passed(), "{report:?}");
        // Ric^g = 2 Id, Sca^g = 6: sectional curvature one.
        let ric = space.ricci(&Scalar::zero());
        assert_eq!(ric, Mat::identity(3).scale(&s(2)));
        assert_eq!(space.scalar_curvature(&Scalar::zero()), s(6));
        // Canonical connection is flat.
        assert!(space.curvature(&Scalar::one()).is_flat());
        // Canonical torsion is -2 e123.
        let t = space.canonical_torsion().unwrap();
        assert_eq!(t, Multivector::blade(3, &[1, 2, 3], s(-2)).unwrap());
    }

    #[test]
    fn su2_rescaled_bracket_scales_ricci() {
        // [e_i, e_j] = e_k cyclic: Ric = (1/2) Id.
        let space = catalog::su2_space(1);
        assert!(space.validate().all_passed());
        let ric = space.ricci(&Scalar::zero());
        assert_eq!(ric, Mat::identity(3).scale(&Scalar::rational(1, 2)));
    }

    #[test]
    fn jacobi_violation_is_witnessed() {
        // [e1, e2] = e2, [e2, e3] = e1: the cyclic sum on (1, 2, 3) leaves
        // [e2, e3] = e1 uncancelled.
        let mut entries = Vec::new();
        entries.push((0usize, 1usize, {
            let mut v = vec![Scalar::zero(); 3];
            v[1] = s(1);
            v
        }));
        entries.push((1, 2, {
            let mut v = vec![Scalar::zero(); 3];
            v[0] = s(1);
            v
        }));
        let space = ReductiveSpace::new("broken", 0, 3, entries);
        let report = space.validate();
        assert!(!report.jacobi.passed);
        assert!(report.jacobi.witness.is_some());
    }

    #[test]
    fn abelian_torsion_vanishes() {
        let space = ReductiveSpace::new("torus", 0, 3, Vec::new());
        assert!(space.validate().all_passed());
        assert!(space.canonical_torsion().unwrap().is_zero());
    }

    #[test]
    fn nomizu_family_is_affine_in_t() {
        let space = catalog::su2_space(2);
        let l0 = space.nomizu_family(&Scalar::zero());
        let l1 = space.nomizu_family(&Scalar::one());
        let lq = space.nomizu_family(&Scalar::rational(1, 4));
        for i in 0..3 {
            assert!(l1[i].is_zero());
            assert_eq!(lq[i], l0[i].scale(&Scalar::rational(3, 4)));
            assert!(l0[i].is_skew());
        }
    }

    #[test]
    fn non_invariant_form_is_rejected() {
        let space = catalog::berger_space();
        let alpha = Multivector::blade(7, &[1, 2, 3], Scalar::one()).unwrap();
        assert!(!space.is_invariant(&alpha).unwrap());
        assert!(matches!(space.invariant_d(&alpha), Err(HomError::NotInvariant(_))));
        // The canonical torsion is the invariant 3-form.
        let t = space.canonical_torsion().unwrap();
        assert!(space.is_invariant(&t).unwrap());
    }

    #[test]
    fn invariant_d_on_lie_group_volume() {
        let space = catalog::su2_space(2);
        let t = space.canonical_torsion().unwrap();
        // Top form: dT = 0 in dimension 3, and delta T = 0.
        assert!(space.invariant_d(&t).unwrap().is_zero());
        assert!(space.invariant_delta(&t).unwrap().is_zero());
    }
}
