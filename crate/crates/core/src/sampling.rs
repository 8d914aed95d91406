//! Seeded random-state generation and stream-seed derivation.
//!
//! Mixed states are drawn as partial traces of Haar-random pure states on a
//! d x k composite space (k = 1 gives pure states, larger k gives the
//! corresponding induced measures).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, DensityMatrix};

/// Derive a child seed from a root seed and a stream index (splitmix64).
///
/// Used wherever independent RNG streams must be reproducible regardless of
/// scheduling: Monte Carlo samples, sweep grid points, fuzz draws.
pub fn derive_stream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on a d-dimensional space.
pub fn random_pure(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Random mixed state on `dims` obtained by tracing a Haar-random pure state
/// over a k-dimensional environment: rho = G G† / Tr(G G†) with G a d x k
/// complex Gaussian matrix.
pub fn random_density(dims: &[usize], k: usize, rng: &mut impl Rng) -> DensityMatrix {
    let d: usize = dims.iter().product();
    loop {
        let g: Vec<Vec<Complex64>> = (0..d)
            .map(|_| (0..k).map(|_| gaussian(rng)).collect())
            .collect();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for l in 0..k {
                    s += g[i][l] * g[j][l].conj();
                }
                m[(i, j)] = s;
            }
        }
        let tr = m.trace().re;
        if tr <= 1e-12 {
            continue;
        }
        let m = m.scale(Complex64::new(1.0 / tr, 0.0)).hermitize();
        if let Ok(rho) = DensityMatrix::validate(m, dims) {
            return rho;
        }
    }
}

/// Random Hermitian matrix with Gaussian entries (GUE-style, unnormalized).
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..d {
            let z = gaussian(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}
