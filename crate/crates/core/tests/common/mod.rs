#![allow(dead_code)]

use indalg::numkit::{self, c, Matrix};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn e(d: usize, i: usize) -> Matrix {
    indalg::numkit::unit(d, i, i)
}

pub fn diagonal_algebra(d: usize) -> Vec<Matrix> {
    (0..d).map(|i| e(d, i)).collect()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, d, d);
        if numkit::singular_values(&m).iter().all(|s| *s > 1e-3) {
            return m.qr().q();
        }
    }
}

/// `U diag(s) V` with singular values in `[1, cond]`, so the condition number
/// is at most `cond`.
pub fn random_invertible(rng: &mut ChaCha8Rng, d: usize, cond: f64) -> Matrix {
    let u = random_unitary(rng, d);
    let v = random_unitary(rng, d);
    let s: Vec<Complex64> = (0..d)
        .map(|i| match i {
            0 => c(1.0, 0.0),
            1 => c(cond, 0.0),
            _ => c(rng.gen_range(1.0..cond), 0.0),
        })
        .collect();
    u * indalg::numkit::diag(&s) * v
}

/// `A Aᴴ` for a random `A`, optionally rank-deficient.
pub fn random_psd(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let k = rng.gen_range(1..=d);
    let a = random_matrix(rng, d, k);
    &a * a.adjoint()
}
