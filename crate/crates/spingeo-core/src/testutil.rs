//! Shared helpers for unit tests.

use rand::rngs::StdRng;
use rand::Rng;

use crate::clifford::Multivector;
use crate::exactfield::Scalar;
use crate::linalg::Mat;

pub fn inv_sqrt5() -> Scalar {
    Scalar::sqrt(5).unwrap().inverse().unwrap()
}

/// The canonical torsion 3-form of the seven-dimensional Berger space,
/// written out literally; the homogeneous-space engine re-derives it from
/// structure constants.
pub fn berger_torsion() -> Multivector {
    let c = -&inv_sqrt5();
    let mut t = Multivector::zero(7);
    for idx in [[1, 2, 4], [1, 3, 7], [1, 5, 6], [2, 3, 5], [2, 6, 7], [3, 4, 6], [4, 5, 7]] {
        t = &t + &Multivector::blade(7, &idx, c.clone()).unwrap();
    }
    t
}

/// The Hodge dual of the stable 3-form of the Berger space, literal form.
pub fn berger_star_omega() -> Multivector {
    let mut w = Multivector::zero(7);
    for (sign, idx) in [
        (1i64, [1, 2, 3, 6]),
        (-1, [1, 2, 5, 7]),
        (-1, [1, 3, 4, 5]),
        (1, [1, 4, 6, 7]),
        (1, [2, 3, 4, 7]),
        (-1, [2, 4, 5, 6]),
        (-1, [3, 5, 6, 7]),
    ] {
        w = &w + &Multivector::blade(7, &idx, Scalar::from_integer(sign)).unwrap();
    }
    w
}

pub fn random_three_form(dim: usize, rng: &mut StdRng) -> Multivector {
    let mut t = Multivector::zero(dim);
    for i in 1..=dim {
        for j in i + 1..=dim {
            for k in j + 1..=dim {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    t = &t + &Multivector::blade(dim, &[i, j, k], Scalar::from_integer(c)).unwrap();
                }
            }
        }
    }
    t
}

pub fn random_vector(dim: usize, rng: &mut StdRng) -> Multivector {
    let mut x = Multivector::zero(dim);
    for i in 1..=dim {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            x = &x + &Multivector::blade(dim, &[i], Scalar::from_integer(c)).unwrap();
        }
    }
    x
}

pub fn random_multivector(dim: usize, rng: &mut StdRng) -> Multivector {
    let mut m = Multivector::zero(dim);
    for _ in 0..4 {
        let mask = rng.gen_range(0u32..1 << dim);
        let c = rng.gen_range(-2i64..=2);
        m.add_term(mask, Scalar::from_integer(c));
    }
    m
}

pub fn random_skew(n: usize, rng: &mut StdRng) -> Mat {
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c = Scalar::from_integer(rng.gen_range(-2i64..=2));
            a[(i, j)] = c.clone();
            a[(j, i)] = -&c;
        }
    }
    a
}
