//! Deterministic randomness.
//!
//! Everything stochastic in this crate draws from ChaCha8 streams keyed by a
//! user seed. Shot `i` of a sampling run uses stream `i` of the same seed, so
//! results are reproducible bit-for-bit regardless of how shots are
//! distributed across threads.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A ChaCha8 generator on stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard normal via Box-Muller on two uniform draws.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            let v: f64 = rng.gen();
            return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
        }
    }
}

/// Seeded generator for random test inputs: Gaussian matrices, Haar-like
/// orthogonal matrices, orthonormal frames, and unit vectors.
pub struct TestMatrices {
    rng: ChaCha8Rng,
}

impl TestMatrices {
    /// New generator on stream 0 of `seed`.
    pub fn new(seed: u64) -> Self {
        TestMatrices {
            rng: stream_rng(seed, 0),
        }
    }

    /// `n x m` matrix with i.i.d. standard normal entries.
    pub fn general(&mut self, n: usize, m: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, m, |_, _| standard_normal(&mut self.rng))
    }

    /// Haar-distributed `n x n` orthogonal matrix (QR of a Gaussian matrix
    /// with the R diagonal sign-normalized).
    pub fn orthogonal(&mut self, n: usize) -> DMatrix<f64> {
        let a = self.general(n, n);
        let qr = a.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                for i in 0..n {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
        q
    }

    /// Random `n x d` orthonormal frame.
    pub fn frame(&mut self, n: usize, d: usize) -> crate::linalg::OrthonormalFrame {
        loop {
            let a = self.general(n, d);
            if let Ok(f) = crate::linalg::orthogonalize(&a) {
                return f;
            }
        }
    }

    /// Random unit vector of length `n`.
    pub fn unit_vector(&mut self, n: usize) -> DVector<f64> {
        loop {
            let v = DVector::from_fn(n, |_, _| standard_normal(&mut self.rng));
            let norm = v.norm();
            if norm > 1e-6 {
                return v / norm;
            }
        }
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: Vec<f64> = {
            let mut r = stream_rng(7, 0);
            (0..8).map(|_| r.gen()).collect()
        };
        let a2: Vec<f64> = {
            let mut r = stream_rng(7, 0);
            (0..8).map(|_| r.gen()).collect()
        };
        let b: Vec<f64> = {
            let mut r = stream_rng(7, 1);
            (0..8).map(|_| r.gen()).collect()
        };
        assert_eq!(a, a2);
        assert_ne!(a, b);
    }

    #[test]
    fn normal_moments_are_sane() {
        let mut rng = stream_rng(42, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean = {mean}");
        assert!((var - 1.0).abs() < 0.02, "var = {var}");
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut gen = TestMatrices::new(1);
        for n in [2, 5, 8] {
            let q = gen.orthogonal(n);
            let dev = (q.transpose() * &q - DMatrix::identity(n, n)).abs().max();
            assert!(dev < 1e-12, "n = {n}: {dev:.3e}");
        }
    }
}
