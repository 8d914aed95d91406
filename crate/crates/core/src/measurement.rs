//! Local projective measurement of subsystem A of a bipartite state:
//! outcome probabilities, conditional joint and memory states, and the
//! dephased post-measurement state.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{partial_trace, tensor_product, ComplexMatrix, DensityMatrix, LinalgError};
use crate::states::{ProjectiveMeasurement, PureState};

/// Outcomes with probability below this are flagged zero-probability and
/// excluded from entropy sums (the 0 * S(.) = 0 convention).
pub const ZERO_PROB_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MeasurementError {
    #[error("measurement dimension {measurement} does not match subsystem dimension {subsystem}")]
    DimensionMismatch { measurement: usize, subsystem: usize },
    #[error("state has {0} subsystem factors, need exactly 2")]
    NotBipartite(usize),
    #[error("basis does not span the state space: {0}")]
    BadBasis(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, MeasurementError>;

/// Result of a local projective measurement on subsystem A.
#[derive(Debug, Clone)]
pub struct MeasurementOutcomeEnsemble {
    /// Outcome probabilities, clamped into [0, 1], summing to 1.
    pub probabilities: Vec<f64>,
    /// Renormalized conditional joint states; `None` for outcomes flagged
    /// zero-probability.
    pub conditional_joint_states: Vec<Option<DensityMatrix>>,
    /// Conditional memory states on B; `None` where probability vanishes.
    pub conditional_memory_states: Vec<Option<DensityMatrix>>,
    /// The dephased joint state rho_MB.
    pub dephased_joint: DensityMatrix,
}

impl MeasurementOutcomeEnsemble {
    /// Outcome indices carrying nonzero probability.
    pub fn supported_outcomes(&self) -> impl Iterator<Item = usize> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= ZERO_PROB_TOL)
            .map(|(i, _)| i)
    }
}

/// Measure subsystem A of `rho_ab` with the projective measurement `m`.
pub fn measure_local(
    rho_ab: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<MeasurementOutcomeEnsemble> {
    let dims = rho_ab.subsystem_dims();
    if dims.len() != 2 {
        return Err(MeasurementError::NotBipartite(dims.len()));
    }
    let (da, db) = (dims[0], dims[1]);
    if m.dim() != da {
        return Err(MeasurementError::DimensionMismatch {
            measurement: m.dim(),
            subsystem: da,
        });
    }

    let eye_b = ComplexMatrix::identity(db);
    let d = rho_ab.dim();
    let mut probabilities = Vec::with_capacity(m.num_outcomes());
    let mut conditional_joint_states = Vec::with_capacity(m.num_outcomes());
    let mut conditional_memory_states = Vec::with_capacity(m.num_outcomes());
    let mut dephased_sum = ComplexMatrix::zeros(d, d);

    for proj_a in m.projectors() {
        let big = tensor_product(proj_a, &eye_b);
        let block = big.matmul(rho_ab.mat()).matmul(&big).hermitize();
        let mut p = block.trace().re;
        if (-ZERO_PROB_TOL..0.0).contains(&p) {
            p = 0.0;
        }
        dephased_sum = dephased_sum.add(&block);
        if p < ZERO_PROB_TOL {
            probabilities.push(p.max(0.0));
            conditional_joint_states.push(None);
            conditional_memory_states.push(None);
            continue;
        }
        let joint =
            DensityMatrix::validate(block.scale(Complex64::new(1.0 / p, 0.0)), &[da, db])?;
        let memory = partial_trace(&joint, 1)?;
        probabilities.push(p);
        conditional_joint_states.push(Some(joint));
        conditional_memory_states.push(Some(memory));
    }

    let dephased_joint = DensityMatrix::validate(dephased_sum, &[da, db])?;
    Ok(MeasurementOutcomeEnsemble {
        probabilities,
        conditional_joint_states,
        conditional_memory_states,
        dephased_joint,
    })
}

/// Diagonal part of `rho` in the given orthonormal basis,
/// sum_i <i|rho|i> |i><i|.
pub fn dephase_global(rho: &DensityMatrix, basis: &[PureState]) -> Result<DensityMatrix> {
    let d = rho.dim();
    if basis.len() != d || basis.iter().any(|k| k.dim() != d) {
        return Err(MeasurementError::BadBasis(format!(
            "need {d} orthonormal kets of dimension {d}"
        )));
    }
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            let ip: Complex64 = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x.conj() * y)
                .sum();
            if (ip.norm() - want).abs() > 1e-9 {
                return Err(MeasurementError::BadBasis(format!(
                    "kets {i},{j} are not orthonormal"
                )));
            }
        }
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for ket in basis {
        let amps = ket.amplitudes();
        // <k|rho|k>
        let mut pop = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                pop += amps[i].conj() * rho.mat()[(i, j)] * amps[j];
            }
        }
        out = out.add(&ket.projector().scale(Complex64::new(pop.re, 0.0)));
    }
    Ok(DensityMatrix::validate(out, rho.subsystem_dims())?)
}
