//! Exact scalar arithmetic in multi-quadratic extensions of the rationals.
//!
//! A [`Scalar`] is an element of `Q(sqrt(d_1), ..., sqrt(d_k))` where the
//! `d_i` are square-free integers, pairwise multiplicatively independent;
//! `d = -1` adjoins the imaginary unit.  Values are stored as rational
//! coefficients indexed by subsets of the adjoined radicals, so products
//! close under the rewrite `sqrt(d_i) * sqrt(d_i) = d_i`.  Division is
//! performed by successive conjugation, one radical at a time.
//!
//! [`ScalarPoly`] is a univariate polynomial over [`Scalar`], used to check
//! identities that hold for a formal parameter (the torsion constant of the
//! scalar-curvature suites, or the connection parameter of the Ricci
//! coefficient polynomial).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Maximum number of adjoined radicals.
pub const MAX_RADICALS: usize = 4;

/// Errors of the exact-field layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("tower overflow: at most {MAX_RADICALS} radicals may be adjoined, got {0}")]
    TowerOverflow(usize),
    #[error("{0} is not a valid radical (must be square-free and not 0 or 1)")]
    BadRadical(i64),
    #[error("radicals {0:?} are multiplicatively dependent (their product is a square)")]
    DependentRadicals(Vec<i64>),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
    #[error("value is not real")]
    NotReal,
}

fn is_square_free(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        while m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

fn is_perfect_square(v: i64) -> bool {
    if v < 0 {
        return false;
    }
    let r = (v as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|x| x * x == v)
}

/// An element of a multi-quadratic extension of the rationals.
///
/// The `tower` lists the adjoined square-free integers in ascending order;
/// `coeffs` maps bitmasks over the tower to non-zero rational coefficients.
/// The empty map is zero, and unused radicals are dropped eagerly so that
/// plain rationals always carry an empty tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    tower: Vec<i64>,
    coeffs: BTreeMap<u8, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { tower: Vec::new(), coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::from_big_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The exact rational `p/q`.  Panics if `q == 0`.
    pub fn rational(p: i64, q: i64) -> Self {
        assert!(q != 0, "rational with zero denominator");
        Scalar::from_big_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0u8, r);
        }
        Scalar { tower: Vec::new(), coeffs }
    }

    /// The square root of a square-free integer `d` (`d = -1` yields `i`).
    ///
    /// Internally the radical is split into its prime factors (plus a sign
    /// slot), so `sqrt(15)` and `sqrt(3) * sqrt(5)` are the same value in
    /// the same representation.
    pub fn sqrt(d: i64) -> Result<Self, FieldError> {
        if !is_square_free(d) {
            return Err(FieldError::BadRadical(d));
        }
        let mut tower: Vec<i64> = Vec::new();
        if d < 0 {
            tower.push(-1);
        }
        let mut m = d.unsigned_abs();
        let mut p = 2u64;
        while m > 1 {
            if m.is_multiple_of(p) {
                tower.push(p as i64);
                m /= p;
            } else {
                p += 1;
            }
        }
        tower.sort_unstable();
        if tower.len() > 8 {
            return Err(FieldError::TowerOverflow(tower.len()));
        }
        let mask = (1u16 << tower.len()) - 1;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mask as u8, BigRational::one());
        Ok(Scalar { tower, coeffs })
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::sqrt(-1).expect("-1 is square-free")
    }

    /// Validates a radical tower: square-free entries, pairwise
    /// multiplicatively independent, at most [`MAX_RADICALS`] entries.
    pub fn validate_tower(tower: &[i64]) -> Result<(), FieldError> {
        if tower.len() > MAX_RADICALS {
            return Err(FieldError::TowerOverflow(tower.len()));
        }
        for &d in tower {
            if !is_square_free(d) {
                return Err(FieldError::BadRadical(d));
            }
        }
        // No non-empty subset may multiply to a perfect square; this is what
        // makes the 2^k subset basis linearly independent over Q.
        for mask in 1u32..(1 << tower.len()) {
            let subset: Vec<i64> =
                tower.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &d)| d).collect();
            let prod: i64 = subset.iter().product();
            if is_perfect_square(prod) {
                return Err(FieldError::DependentRadicals(subset));
            }
        }
        Ok(())
    }

    fn normalize(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
        // Drop radicals that no longer occur in any term.
        let mut used = 0u8;
        for &m in self.coeffs.keys() {
            used |= m;
        }
        if used.count_ones() as usize == self.tower.len() && used == (1 << self.tower.len()) - 1 {
            return;
        }
        let mut new_tower = Vec::new();
        let mut remap = [0u8; 8];
        for (i, &d) in self.tower.iter().enumerate() {
            if used >> i & 1 == 1 {
                remap[i] = new_tower.len() as u8;
                new_tower.push(d);
            }
        }
        let old = std::mem::take(&mut self.coeffs);
        for (m, c) in old {
            let mut nm = 0u8;
            for i in 0..self.tower.len() {
                if m >> i & 1 == 1 {
                    nm |= 1 << remap[i];
                }
            }
            self.coeffs.insert(nm, c);
        }
        self.tower = new_tower;
    }

    /// Merges two towers, returning the union and the bit remappings.
    fn merge_towers(a: &[i64], b: &[i64]) -> (Vec<i64>, Vec<u8>, Vec<u8>) {
        let mut union: Vec<i64> = a.to_vec();
        for &d in b {
            if !union.contains(&d) {
                union.push(d);
            }
        }
        union.sort_unstable();
        // Eight prime slots fit the u8 subset masks; declared radical sets
        // are capped earlier by `validate_tower`.
        assert!(union.len() <= 8, "tower overflow while merging {:?} and {:?}", a, b);
        let pos = |t: &[i64], d: i64| t.iter().position(|&x| x == d).unwrap() as u8;
        let map_a: Vec<u8> = a.iter().map(|&d| pos(&union, d)).collect();
        let map_b: Vec<u8> = b.iter().map(|&d| pos(&union, d)).collect();
        (union, map_a, map_b)
    }

    fn remap_mask(mask: u8, map: &[u8]) -> u8 {
        let mut out = 0u8;
        for (i, &j) in map.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out |= 1 << j;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The radicals this value actually uses.
    pub fn tower(&self) -> &[i64] {
        &self.tower
    }

    /// True when the value lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.coeffs.keys().all(|&m| m == 0)
    }

    /// The rational part (coefficient of the empty radical product).
    pub fn rational_part(&self) -> BigRational {
        self.coeffs.get(&0).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    /// Evaluates to a complex double `(re, im)`; each radical contributes
    /// `sqrt(d)` for `d > 0` and `i*sqrt(|d|)` for `d < 0`.
    pub fn to_complex64(&self) -> (f64, f64) {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (&mask, c) in &self.coeffs {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            let mut imag_factors = 0u32;
            for (i, &d) in self.tower.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v *= (d.unsigned_abs() as f64).sqrt();
                    if d < 0 {
                        imag_factors += 1;
                    }
                }
            }
            // i^k cycles through 1, i, -1, -i.
            match imag_factors % 4 {
                0 => re += v,
                1 => im += v,
                2 => re -= v,
                _ => im -= v,
            }
        }
        (re, im)
    }

    /// Evaluates to `f64`.  Panics if the value has an imaginary part;
    /// use [`Scalar::to_complex64`] for possibly-complex values.
    pub fn to_f64(&self) -> f64 {
        let (re, im) = self.to_complex64();
        assert!(
            im == 0.0 || im.abs() <= 1e-14 * (1.0 + re.abs()),
            "to_f64 on a non-real value (im = {im})"
        );
        re
    }

    /// Exact sign for real values: `-1`, `0` or `1`.
    ///
    /// Zero is decided exactly; otherwise the sign is read off the float
    /// image, which is reliable for the magnitudes this crate produces.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let v = self.to_f64();
        if v > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_rational() {
            let r = self.rational_part();
            return Ok(Scalar::from_big_rational(r.recip()));
        }
        // Split off the highest adjoined radical: self = a + sqrt(d) * b.
        let idx = self.tower.len() - 1;
        let bit = 1u8 << idx;
        let d = self.tower[idx];
        let mut a = Scalar { tower: self.tower.clone(), coeffs: BTreeMap::new() };
        let mut b = Scalar { tower: self.tower.clone(), coeffs: BTreeMap::new() };
        for (&m, c) in &self.coeffs {
            if m & bit == 0 {
                a.coeffs.insert(m, c.clone());
            } else {
                b.coeffs.insert(m & !bit, c.clone());
            }
        }
        a.normalize();
        b.normalize();
        // (a + e b)(a - e b) = a^2 - d b^2 lives in the subfield without e.
        let norm = &(&a * &a) - &(&(&b * &b) * &Scalar::from_integer(d));
        let inv_norm = norm.inverse()?;
        let mut e = Scalar { tower: self.tower.clone(), coeffs: BTreeMap::new() };
        e.coeffs.insert(bit, BigRational::one());
        e.normalize();
        let conj = &a - &(&e * &b);
        Ok(&conj * &inv_norm)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Parses expressions like `-7/sqrt5`, `3/4*sqrt3 + 1/5`, `2*i`, `0.25`.
    pub fn parse(input: &str) -> Result<Self, FieldError> {
        parse_scalar(input)
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let (tower, map_a, map_b) = Scalar::merge_towers(&self.tower, &rhs.tower);
        let mut coeffs: BTreeMap<u8, BigRational> = BTreeMap::new();
        for (&m, c) in &self.coeffs {
            *coeffs.entry(Scalar::remap_mask(m, &map_a)).or_insert_with(BigRational::zero) += c;
        }
        for (&m, c) in &rhs.coeffs {
            *coeffs.entry(Scalar::remap_mask(m, &map_b)).or_insert_with(BigRational::zero) += c;
        }
        let mut out = Scalar { tower, coeffs };
        out.normalize();
        out
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let (tower, map_a, map_b) = Scalar::merge_towers(&self.tower, &rhs.tower);
        let mut coeffs: BTreeMap<u8, BigRational> = BTreeMap::new();
        for (&ma, ca) in &self.coeffs {
            let ma = Scalar::remap_mask(ma, &map_a);
            for (&mb, cb) in &rhs.coeffs {
                let mb = Scalar::remap_mask(mb, &map_b);
                let common = ma & mb;
                // sqrt(d)^2 = d for every shared radical.
                let mut factor = BigRational::one();
                for (i, &d) in tower.iter().enumerate() {
                    if common >> i & 1 == 1 {
                        factor *= BigRational::from_integer(BigInt::from(d));
                    }
                }
                let term = ca * cb * factor;
                *coeffs.entry(ma ^ mb).or_insert_with(BigRational::zero) += term;
            }
        }
        let mut out = Scalar { tower, coeffs };
        out.normalize();
        out
    }
}

impl std::ops::Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero");
        self * &inv
    }
}

macro_rules! forward_owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
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
            write!(f, "{}", format_term(&mag, mask, &self.tower))?;
        }
        Ok(())
    }
}

/// Formats `|c| * prod(sqrt(d))` compactly: `49/20`, `sqrt15`, `1/sqrt5`,
/// `3/4*i*sqrt3`, ...
fn format_term(mag: &BigRational, mask: u8, tower: &[i64]) -> String {
    let mut pos_prod: i64 = 1;
    let mut imag = 0u32;
    for (i, &d) in tower.iter().enumerate() {
        if mask >> i & 1 == 1 {
            if d < 0 {
                imag += 1;
                pos_prod *= -d;
            } else {
                pos_prod *= d;
            }
        }
    }
    let mut radical = String::new();
    if imag % 2 == 1 {
        radical.push('i');
    }
    debug_assert!(imag <= 1, "at most one negative radical is ever adjoined");
    if pos_prod != 1 {
        if !radical.is_empty() {
            radical.push('*');
        }
        radical.push_str(&format!("sqrt{}", pos_prod));
    }
    if radical.is_empty() {
        return format!("{}", mag);
    }
    let num = mag.numer();
    let den = mag.denom();
    // (p/q)*sqrtD with q a multiple of D prints as p'/sqrtD when the whole
    // denominator cancels, e.g. -1/sqrt5; otherwise fall through to the
    // plain (and parseable) p/q*sqrtD form.
    if imag == 0 && pos_prod != 1 && (den % BigInt::from(pos_prod)).is_zero() {
        let new_num = num * BigInt::from(pos_prod);
        let q = den.clone();
        let g = num_integer::Integer::gcd(&new_num, &q);
        let (p, q) = (&new_num / &g, &q / &g);
        if q.is_one() {
            return format!("{}/{}", p, radical);
        }
    }
    if mag.is_one() {
        radical
    } else if den.is_one() {
        format!("{}*{}", num, radical)
    } else {
        format!("{}/{}*{}", num, den, radical)
    }
}

// ---------------------------------------------------------------------------
// parsing

fn parse_scalar(input: &str) -> Result<Scalar, FieldError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(FieldError::Parse(input.to_string()));
    }
    // Split on top-level + and - (a leading sign belongs to the first term).
    let bytes = s.as_bytes();
    let mut terms: Vec<(i32, String)> = Vec::new();
    let mut sign = 1i32;
    let mut cur = String::new();
    let mut idx = 0;
    while idx < bytes.len() {
        let ch = bytes[idx] as char;
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with(['*', '/', '(']) {
            terms.push((sign, std::mem::take(&mut cur)));
            sign = if ch == '-' { -1 } else { 1 };
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            if ch == '-' {
                sign = -sign;
            }
        } else {
            cur.push(ch);
        }
        idx += 1;
    }
    if cur.is_empty() {
        return Err(FieldError::Parse(input.to_string()));
    }
    terms.push((sign, cur));

    let mut total = Scalar::zero();
    for (sg, term) in terms {
        let mut value = parse_product(&term, input)?;
        if sg < 0 {
            value = -value;
        }
        total = &total + &value;
    }
    Ok(total)
}

fn parse_product(term: &str, original: &str) -> Result<Scalar, FieldError> {
    let mut value = Scalar::one();
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(FieldError::Parse(original.to_string()));
        }
        let mut parts = factor.splitn(2, '/');
        let num = parse_atom(parts.next().unwrap(), original)?;
        let out = match parts.next() {
            Some(den) => {
                let d = parse_atom(den, original)?;
                let inv = d.inverse().map_err(|_| FieldError::Parse(original.to_string()))?;
                &num * &inv
            }
            None => num,
        };
        value = &value * &out;
    }
    Ok(value)
}

fn parse_atom(atom: &str, original: &str) -> Result<Scalar, FieldError> {
    let atom = atom.trim_start_matches('(').trim_end_matches(')');
    if atom == "i" {
        return Ok(Scalar::i());
    }
    if let Some(d) = atom.strip_prefix("sqrt") {
        let d = d.trim_start_matches('(').trim_end_matches(')');
        let d: i64 = d.parse().map_err(|_| FieldError::Parse(original.to_string()))?;
        return Scalar::sqrt(d);
    }
    if let Some(dot) = atom.find('.') {
        let (int_part, frac_part) = atom.split_at(dot);
        let frac_part = &frac_part[1..];
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(FieldError::Parse(original.to_string()));
        }
        let int_val: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| FieldError::Parse(original.to_string()))?
        };
        let numer: i64 =
            frac_part.parse().map_err(|_| FieldError::Parse(original.to_string()))?;
        let denom = 10i64.checked_pow(frac_part.len() as u32)
            .ok_or_else(|| FieldError::Parse(original.to_string()))?;
        return Ok(&Scalar::from_integer(int_val) + &Scalar::rational(numer, denom));
    }
    let n: i64 = atom.parse().map_err(|_| FieldError::Parse(original.to_string()))?;
    Ok(Scalar::from_integer(n))
}

// ---------------------------------------------------------------------------
// polynomials

/// Univariate polynomial over [`Scalar`], coefficients by ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarPoly {
    coeffs: Vec<Scalar>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = ScalarPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// The formal variable.
    pub fn var() -> Self {
        ScalarPoly { coeffs: vec![Scalar::zero(), Scalar::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        let mut p = ScalarPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            out = &(&out * at) + c;
        }
        out
    }

    pub fn scale(&self, by: &Scalar) -> Self {
        ScalarPoly::from_coeffs(self.coeffs.iter().map(|c| c * by).collect())
    }

    pub fn derivative(&self) -> ScalarPoly {
        if self.coeffs.len() <= 1 {
            return ScalarPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::from_integer(k as i64))
            .collect();
        ScalarPoly::from_coeffs(coeffs)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, rhs: &ScalarPoly) -> (ScalarPoly, ScalarPoly) {
        let d = rhs.degree().expect("division by the zero polynomial");
        let lead_inv = rhs.coeffs[d].inverse().expect("leading coefficient is non-zero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                quot[k - d] = c.clone();
                for j in 0..=d {
                    rem[k - d + j] = &rem[k - d + j] - &(&c * &rhs.coeffs[j]);
                }
            }
            rem.pop();
        }
        (ScalarPoly::from_coeffs(quot), ScalarPoly::from_coeffs(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.degree() {
            None => a,
            Some(d) => {
                let inv = a.coeffs[d].inverse().expect("non-zero leading coefficient");
                a.scale(&inv)
            }
        }
    }

    /// The square-free part `self / gcd(self, self')`, normalized monic.
    pub fn square_free_part(&self) -> ScalarPoly {
        if self.is_zero() {
            return ScalarPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        match q.degree() {
            None => q,
            Some(d) => {
                let inv = q.coeffs[d].inverse().expect("non-zero leading coefficient");
                q.scale(&inv)
            }
        }
    }

    pub fn to_string_with_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = format!("{}", c);
            let part = match k {
                0 => coeff,
                1 if coeff == "1" => var.to_string(),
                1 => format!("({})*{}", coeff, var),
                _ if coeff == "1" => format!("{}^{}", var, k),
                _ => format!("({})*{}^{}", coeff, var, k),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

/// True iff the two polynomials are identical (exact identity check).
pub fn poly_identity(lhs: &ScalarPoly, rhs: &ScalarPoly) -> bool {
    lhs == rhs
}

impl std::ops::Add for &ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: &ScalarPoly) -> ScalarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        ScalarPoly::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: &ScalarPoly) -> ScalarPoly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Mul for &ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || rhs.is_zero() {
            return ScalarPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        ScalarPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with_var("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn inv_sqrt5() -> Scalar {
        Scalar::sqrt(5).unwrap().inverse().unwrap()
    }

    #[test]
    fn radical_squares_to_rational() {
        let x = inv_sqrt5();
        assert_eq!(&x * &x, Scalar::rational(1, 5));
    }

    #[test]
    fn independent_radicals_multiply() {
        let a = Scalar::sqrt(3).unwrap();
        let b = Scalar::sqrt(5).unwrap();
        assert_eq!(&a * &b, Scalar::sqrt(15).unwrap());
    }

    #[test]
    fn gamma_squared_is_49_over_5() {
        let gamma = &Scalar::from_integer(-7) * &inv_sqrt5();
        assert_eq!(&gamma * &gamma, Scalar::rational(49, 5));
    }

    #[test]
    fn to_f64_values() {
        assert_eq!(Scalar::rational(49, 20).to_f64(), 2.45);
        assert_eq!(Scalar::zero().to_f64(), 0.0);
        assert_eq!(Scalar::rational(189, 10).to_f64(), 18.9);
    }

    #[test]
    fn tower_validation() {
        assert!(Scalar::validate_tower(&[-1, 3, 5]).is_ok());
        assert_eq!(Scalar::validate_tower(&[12]), Err(FieldError::BadRadical(12)));
        assert!(matches!(
            Scalar::validate_tower(&[2, 3, 6]),
            Err(FieldError::DependentRadicals(_))
        ));
        assert!(matches!(
            Scalar::validate_tower(&[-1, 2, 3, 5, 7]),
            Err(FieldError::TowerOverflow(5))
        ));
    }

    #[test]
    fn division_by_zero_reported() {
        assert_eq!(Scalar::zero().inverse(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn parse_round_trip() {
        for (src, expect) in [
            ("-7/sqrt5", &Scalar::from_integer(-7) * &inv_sqrt5()),
            ("49/20", Scalar::rational(49, 20)),
            ("1/2*sqrt3 + 1/5", {
                let t = &Scalar::rational(1, 2) * &Scalar::sqrt(3).unwrap();
                &t + &Scalar::rational(1, 5)
            }),
            ("2*i", &Scalar::from_integer(2) * &Scalar::i()),
            ("0.25", Scalar::rational(1, 4)),
            ("-0.5", Scalar::rational(-1, 2)),
            ("sqrt(15)/3", &Scalar::sqrt(15).unwrap() * &Scalar::rational(1, 3)),
        ] {
            let got = Scalar::parse(src).unwrap_or_else(|e| panic!("parse {src}: {e}"));
            assert_eq!(got, expect, "parsing {src}");
            // And the printed form parses back to the same value.
            let reparsed = Scalar::parse(&format!("{}", got)).unwrap();
            assert_eq!(reparsed, expect, "display of {src} is {}", got);
        }
    }

    #[test]
    fn display_matches_inverse_radical_style() {
        let t = &Scalar::from_integer(-1) * &inv_sqrt5();
        assert_eq!(format!("{}", t), "-1/sqrt5");
        assert_eq!(format!("{}", Scalar::rational(49, 20)), "49/20");
    }

    fn random_scalar(rng: &mut StdRng) -> Scalar {
        let mut x = Scalar::rational(rng.gen_range(-6..=6), rng.gen_range(1..=6));
        for d in [-1i64, 2, 3, 5] {
            if rng.gen_bool(0.4) {
                let c = Scalar::rational(rng.gen_range(-5..=5), rng.gen_range(1..=4));
                x = &x + &(&c * &Scalar::sqrt(d).unwrap());
            }
        }
        x
    }

    #[test]
    fn field_axioms_hold_exactly_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = random_scalar(&mut rng);
            let b = random_scalar(&mut rng);
            let c = random_scalar(&mut rng);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            if !a.is_zero() {
                assert_eq!(&a * &a.inverse().unwrap(), Scalar::one());
            }
        }
    }

    #[test]
    fn float_image_is_multiplicative() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let a = random_scalar(&mut rng);
            let b = random_scalar(&mut rng);
            let (pr, pi) = (&a * &b).to_complex64();
            let (ar, ai) = a.to_complex64();
            let (br, bi) = b.to_complex64();
            let (er, ei) = (ar * br - ai * bi, ar * bi + ai * br);
            let scale = 1.0f64.max(er.abs()).max(ei.abs());
            assert!((pr - er).abs() <= 1e-12 * scale, "{a} * {b}: {pr} vs {er}");
            assert!((pi - ei).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn poly_identities() {
        let tau = ScalarPoly::var();
        // 15*tau vs 9*5*(8 tau)/(4*6)
        let lhs = tau.scale(&Scalar::from_integer(15));
        let rhs = tau.scale(&Scalar::rational(9 * 5 * 8, 4 * 6));
        assert!(poly_identity(&lhs, &rhs));
        // tau vs tau^2
        assert!(!poly_identity(&tau, &(&tau * &tau)));
        // (21/8) tau^2 vs 9*6*(49 tau^2/36)/(4*7)
        let tau2 = &tau * &tau;
        let lhs = tau2.scale(&Scalar::rational(21, 8));
        let rhs = tau2.scale(&(&Scalar::rational(9 * 6 * 49, 36) * &Scalar::rational(1, 28)));
        assert!(poly_identity(&lhs, &rhs));
    }

    #[test]
    fn poly_division_and_square_free() {
        // p = (x - 1)^2 (x + 2).
        let x = ScalarPoly::var();
        let one = ScalarPoly::constant(Scalar::one());
        let f1 = &x - &one;
        let f2 = &x + &ScalarPoly::constant(Scalar::from_integer(2));
        let p = &(&f1 * &f1) * &f2;
        let (q, r) = p.div_rem(&f1);
        assert!(r.is_zero());
        assert_eq!(q, &f1 * &f2);
        let sf = p.square_free_part();
        assert_eq!(sf, &f1 * &f2);
        assert_eq!(p.gcd(&p.derivative()), f1);
    }

    proptest! {
        #[test]
        fn poly_identity_reflexive_and_symmetric(coeffs in proptest::collection::vec(-9i64..=9, 0..6)) {
            let p = ScalarPoly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_integer(c)).collect());
            prop_assert!(poly_identity(&p, &p));
            let q = &p + &ScalarPoly::constant(Scalar::one());
            prop_assert_eq!(poly_identity(&p, &q), poly_identity(&q, &p));
        }

        #[test]
        fn display_parse_round_trip(
            p in -20i64..=20,
            q in 1i64..=12,
            rp in -9i64..=9,
            rq in 1i64..=6,
            d in proptest::sample::select(vec![-1i64, 2, 3, 5, 15]),
        ) {
            let v = &Scalar::rational(p, q)
                + &(&Scalar::rational(rp, rq) * &Scalar::sqrt(d).unwrap());
            let printed = format!("{v}");
            let reparsed = Scalar::parse(&printed).unwrap();
            prop_assert_eq!(reparsed, v, "printed form {}", printed);
        }
    }
}
