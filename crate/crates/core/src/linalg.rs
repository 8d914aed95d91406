//! Dense complex linear algebra for small Hermitian matrices.
//!
//! Everything downstream (entropies, coherence, tomography) reduces to the
//! primitives here: Kronecker products, partial traces, a cyclic-Jacobi
//! Hermitian eigensolver, PSD matrix square roots, and density-matrix
//! validation. Matrices are stored row-major; the two-qubit basis order is
//! fixed globally as (HH, HV, VH, VV), i.e. the A index is major.

use num_complex::Complex64;
use thiserror::Error;

/// Hermiticity tolerance for exact-path density matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues in [`PSD_CLAMP_FLOOR`, 0) are clamped to 0 during validation.
pub const PSD_CLAMP_FLOOR: f64 = -1e-9;
/// Trace may deviate from 1 by at most this much before validation fails.
pub const TRACE_TOL: f64 = 1e-6;
/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const JACOBI_SWEEP_BUDGET: usize = 100;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("entry count {0} does not match {1}x{2}")]
    BadEntryCount(usize, usize, usize),
    #[error("non-finite entry at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace differs from 1 by {0:.3e}")]
    TraceMismatch(f64),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid subsystem index {index} for {count} factors")]
    InvalidSubsystem { index: usize, count: usize },
    #[error("subsystem dimensions {0:?} do not multiply to {1}")]
    BadSubsystemDims(Vec<usize>, usize),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadEntryCount(data.len(), rows, cols));
        }
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite(k / cols, k % cols));
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Convenience constructor from real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Outer product v w†.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Kronecker product with a-index major, b-index minor ordering.
    pub fn kron(&self, other: &Self) -> Self {
        let (ra, ca) = (self.rows, self.cols);
        let (rb, cb) = (other.rows, other.cols);
        Self::from_fn(ra * rb, ca * cb, |i, j| {
            self[(i / rb, j / cb)] * other[(i % rb, j % cb)]
        })
    }

    /// Largest entry-wise deviation from Hermitian symmetry.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Hermitian part (m + m†)/2.
    pub fn hermitize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Pauli σ_x.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

/// Pauli σ_y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .unwrap()
}

/// Pauli σ_z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// Trace-one positive-semidefinite Hermitian matrix with a recorded tensor
/// factorization of its Hilbert space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    subsystem_dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validate a candidate density matrix.
    ///
    /// Checks Hermiticity, positivity, and unit trace; eigenvalues in
    /// [-1e-9, 0) are clamped to zero and the trace renormalized before the
    /// matrix is accepted.
    pub fn validate(m: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare(m.rows(), m.cols()));
        }
        let d = m.rows();
        let prod: usize = dims.iter().product();
        if dims.is_empty() || prod != d {
            return Err(LinalgError::BadSubsystemDims(dims.to_vec(), d));
        }
        let defect = m.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(LinalgError::NotHermitian(defect));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(LinalgError::TraceMismatch((tr - 1.0).abs()));
        }
        let herm = m.hermitize();
        let spec = eig_hermitian(&herm)?;
        let min_eig = spec.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < PSD_CLAMP_FLOOR {
            return Err(LinalgError::NotPsd(min_eig));
        }
        let mat = if min_eig < 0.0 {
            // Rebuild from the clamped spectrum, then renormalize.
            let clamped: Vec<f64> = spec.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
            let total: f64 = clamped.iter().sum();
            let scaled: Vec<f64> = clamped.iter().map(|&l| l / total).collect();
            spec.recompose(&scaled)
        } else {
            herm.scale(Complex64::new(1.0 / tr, 0.0))
        };
        Ok(Self {
            mat,
            subsystem_dims: dims.to_vec(),
        })
    }

    /// Density matrix of a normalized pure state vector.
    pub fn from_pure(amplitudes: &[Complex64], dims: &[usize]) -> Result<Self> {
        let m = ComplexMatrix::outer(amplitudes, amplitudes);
        Self::validate(m, dims)
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        let m = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        Self {
            mat: m,
            subsystem_dims: dims.to_vec(),
        }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    /// Purity Tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).trace().re
    }
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues descending,
/// eigenvector columns in matching order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors[(i, k)])
            .collect()
    }

    /// Rebuild V diag(vals) V† with substituted eigenvalues.
    pub fn recompose(&self, vals: &[f64]) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        assert_eq!(vals.len(), n);
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * vals[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Kronecker product of two operators (a-index major).
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Tensor product of two density matrices, concatenating subsystem dims.
pub fn tensor_product_density(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let mut dims = a.subsystem_dims().to_vec();
    dims.extend_from_slice(b.subsystem_dims());
    DensityMatrix::validate(a.mat().kron(b.mat()), &dims)
}

/// Reduced state over the kept subsystem, tracing out all other factors.
pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    let dims = rho.subsystem_dims();
    if dims.len() < 2 {
        return Err(LinalgError::InvalidSubsystem {
            index: keep,
            count: dims.len(),
        });
    }
    if keep >= dims.len() {
        return Err(LinalgError::InvalidSubsystem {
            index: keep,
            count: dims.len(),
        });
    }
    let dk = dims[keep];
    // Row-major mixed-radix index: stride of factor `keep` and the total
    // count of environment configurations.
    let stride: usize = dims[keep + 1..].iter().product();
    let env_dims: Vec<usize> = dims
        .iter()
        .enumerate()
        .filter(|&(f, _)| f != keep)
        .map(|(_, &d)| d)
        .collect();
    let env_total: usize = env_dims.iter().product();

    // Map an environment configuration index to a full-space base offset.
    let env_offset = |mut e: usize| -> usize {
        let mut offset = 0;
        let mut factor_stride = 1;
        for (f, &d) in dims.iter().enumerate().rev() {
            if f == keep {
                factor_stride *= d;
                continue;
            }
            let digit = e % d;
            e /= d;
            offset += digit * factor_stride;
            factor_stride *= d;
        }
        offset
    };

    let mut out = ComplexMatrix::zeros(dk, dk);
    for e in 0..env_total {
        let base = env_offset(e);
        for i in 0..dk {
            for j in 0..dk {
                out[(i, j)] += rho.mat()[(base + i * stride, base + j * stride)];
            }
        }
    }
    DensityMatrix::validate(out, &[dk])
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is symmetrized as (m + m†)/2 before solving; inputs whose
/// asymmetry exceeds 1e-8 are rejected. Ordering is deterministic:
/// descending eigenvalue, ties broken lexicographically on the eigenvector
/// entries.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let defect = m.hermiticity_defect();
    if defect > 1e-8 {
        return Err(LinalgError::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1e-300);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[(p, q)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_SWEEP_BUDGET {
        if off_norm(&a) <= 1e-13 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-30 * scale {
                    continue;
                }
                let phase = apq / mag; // e^{i beta}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary differs from identity only in the (p,q) block:
                //   U[p][p] = c          U[p][q] = -s
                //   U[q][p] = s e^{-ib}  U[q][q] = c e^{-ib}
                let se = phase.conj() * s;
                let ce = phase.conj() * c;
                for k in 0..n {
                    let tp = a[(k, p)];
                    let tq = a[(k, q)];
                    a[(k, p)] = tp * c + tq * se;
                    a[(k, q)] = tq * ce - tp * s;
                }
                let se_r = phase * s;
                let ce_r = phase * c;
                for k in 0..n {
                    let tp = a[(p, k)];
                    let tq = a[(q, k)];
                    a[(p, k)] = tp * c + tq * se_r;
                    a[(q, k)] = tq * ce_r - tp * s;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let tp = v[(k, p)];
                    let tq = v[(k, q)];
                    v[(k, p)] = tp * c + tq * se;
                    v[(k, q)] = tq * ce - tp * s;
                }
            }
        }
    }
    if !converged && off_norm(&a) > 1e-13 * scale {
        return Err(LinalgError::NoConvergence(JACOBI_SWEEP_BUDGET));
    }

    // Deterministic ordering: eigenvalue descending, exact ties broken by
    // lexicographic comparison of eigenvector entries.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let li = a[(i, i)].re;
        let lj = a[(j, j)].re;
        lj.total_cmp(&li).then_with(|| {
            for k in 0..n {
                let (zi, zj) = (v[(k, i)], v[(k, j)]);
                let c = zi.re.total_cmp(&zj.re).then(zi.im.total_cmp(&zj.im));
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Hermitian PSD square root; negative eigenvalues above -1e-6 are clamped
/// to zero, anything below is rejected.
pub fn matrix_sqrt_psd(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_matrix(rho.mat())
}

/// PSD square root of a raw Hermitian matrix (fidelity kernel plumbing).
pub fn sqrt_psd_matrix(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(m)?;
    let min_eig = spec.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -1e-6 {
        return Err(LinalgError::NotPsd(min_eig));
    }
    let roots: Vec<f64> = spec.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(spec.recompose(&roots))
}

/// Alias for [`DensityMatrix::validate`] matching the operation-style API.
pub fn validate_density(m: ComplexMatrix, dims: &[usize]) -> Result<DensityMatrix> {
    DensityMatrix::validate(m, dims)
}

/// Cholesky factor L (lower triangular, positive real diagonal) with
/// L L† = m. Fails if the matrix is not positive definite.
pub fn cholesky(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let scale = m.frobenius_norm().max(1e-300);
    let mut l = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[(i, j)];
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)].conj();
            }
            if i == j {
                let re = sum.re;
                if re <= 1e-14 * scale {
                    return Err(LinalgError::NotPsd(re));
                }
                l[(i, j)] = Complex64::new(re.sqrt(), 0.0);
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = tensor_product(&i2, &i2);
        assert_eq!(i4.max_abs_diff(&ComplexMatrix::identity(4)), 0.0);
    }

    #[test]
    fn kron_basis_bookkeeping() {
        // |H><H| x |V><V| = diag(0,1,0,0) in (HH, HV, VH, VV) order.
        let h = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let v = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let hv = tensor_product(&h, &v);
        let want = ComplexMatrix::diagonal(&[0.0, 1.0, 0.0, 0.0]);
        assert!(hv.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn kron_matches_index_oracle() {
        // Brute-force Kronecker index formula (a_ik * b_jl).
        let a = pauli_x();
        let b = pauli_z();
        let k = tensor_product(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        let want = a[(i, p)] * b[(j, q)];
                        let got = k[(2 * i + j, 2 * p + q)];
                        assert_eq!(got, want, "mismatch at ({i},{j},{p},{q})");
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_bell_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let rho = DensityMatrix::from_pure(&phi, &[2, 2]).unwrap();
        let rb = partial_trace(&rho, 1).unwrap();
        let want = ComplexMatrix::diagonal(&[0.5, 0.5]);
        assert!(rb.mat().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        let hh = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let rho = DensityMatrix::from_pure(&hh, &[2, 2]).unwrap();
        let ra = partial_trace(&rho, 0).unwrap();
        let want = ComplexMatrix::diagonal(&[1.0, 0.0]);
        assert!(ra.mat().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn partial_trace_bell_like_theta30() {
        // cos^2(30 deg) = 0.75 on the kept-B diagonal.
        let th = 30.0f64.to_radians();
        let psi = [c(th.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(th.sin(), 0.0)];
        let rho = DensityMatrix::from_pure(&psi, &[2, 2]).unwrap();
        let rb = partial_trace(&rho, 1).unwrap();
        let want = ComplexMatrix::diagonal(&[0.75, 0.25]);
        assert!(rb.mat().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn eig_pauli_x() {
        let spec = eig_hermitian(&pauli_x()).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-12);
        // Eigenvector for +1 is proportional to (1,1)/sqrt(2).
        let v0 = spec.eigenvector(0);
        let ratio = v0[1] / v0[0];
        assert!((ratio - c(1.0, 0.0)).norm() < 1e-10);
        assert!((v0[0].norm_sqr() + v0[1].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_scalar_matrix() {
        let m = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        let spec = eig_hermitian(&m).unwrap();
        for l in &spec.eigenvalues {
            assert!((l - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn eig_rank_two_mixture() {
        // Equal mixture of two orthogonal Bell-like pure states has
        // spectrum (0.5, 0.5, 0, 0).
        let th = std::f64::consts::FRAC_PI_4;
        let phi = [c(th.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(th.sin(), 0.0)];
        let psi = [c(0.0, 0.0), c(th.cos(), 0.0), c(-th.sin(), 0.0), c(0.0, 0.0)];
        let m = ComplexMatrix::outer(&phi, &phi)
            .scale(c(0.5, 0.0))
            .add(&ComplexMatrix::outer(&psi, &psi).scale(c(0.5, 0.0)));
        let spec = eig_hermitian(&m).unwrap();
        let want = [0.5, 0.5, 0.0, 0.0];
        for (got, want) in spec.eigenvalues.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(
            eig_hermitian(&m),
            Err(LinalgError::NotHermitian(_))
        ));
    }

    #[test]
    fn sqrt_identity_and_diagonal() {
        let s = sqrt_psd_matrix(&ComplexMatrix::identity(2)).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);

        let d = sqrt_psd_matrix(&ComplexMatrix::diagonal(&[0.25, 0.75])).unwrap();
        let want = ComplexMatrix::diagonal(&[0.5, 0.75f64.sqrt()]);
        assert!(d.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn sqrt_projector_idempotent() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let dket = [c(s, 0.0), c(s, 0.0)];
        let proj = ComplexMatrix::outer(&dket, &dket);
        let root = sqrt_psd_matrix(&proj).unwrap();
        assert!(root.max_abs_diff(&proj) < 1e-9);
    }

    #[test]
    fn validate_accepts_maximally_mixed() {
        let m = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(DensityMatrix::validate(m, &[2]).is_ok());
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        let m = ComplexMatrix::diagonal(&[1.2, -0.2]);
        assert!(matches!(
            DensityMatrix::validate(m, &[2]),
            Err(LinalgError::NotPsd(_))
        ));
    }

    #[test]
    fn validate_clamps_boundary_noise() {
        let m = ComplexMatrix::diagonal(&[0.5 + 1e-10, 0.5 - 1e-10, 0.0, 0.0]);
        let rho = DensityMatrix::validate(m, &[2, 2]).unwrap();
        assert!((rho.mat().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn validate_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(DensityMatrix::validate(m, &[3]).is_err());
    }

    #[test]
    fn cholesky_reconstructs() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(2.0, 0.0), c(0.3, 0.4), c(0.3, -0.4), c(1.0, 0.0)],
        )
        .unwrap();
        let l = cholesky(&m).unwrap();
        let back = l.matmul(&l.dagger());
        assert!(back.max_abs_diff(&m) < 1e-12);
    }
}
