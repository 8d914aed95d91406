//! Entropic and coherence functionals and the uncertainty inequalities:
//! Shannon and von Neumann entropies, conditional entropy, mutual
//! information, Holevo quantities, relative entropy of coherence, the
//! multi-measurement overlap factor, and the strengthened lower bounds.
//!
//! All logarithms are base 2; results are in bits.

use thiserror::Error;

use crate::linalg::{eig_hermitian, partial_trace, DensityMatrix, LinalgError};
use crate::measurement::{measure_local, MeasurementError, MeasurementOutcomeEnsemble};
use crate::states::{ProjectiveMeasurement, PureState};

/// Eigenvalues below this contribute exactly zero entropy.
pub const ENTROPY_EIG_FLOOR: f64 = 1e-15;
/// Two bases count as mutually unbiased when every cross overlap sits within
/// this tolerance of 1/d.
pub const MUB_DETECT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum InfoError {
    #[error("not a probability vector: {0}")]
    NotAProbabilityVector(String),
    #[error("need at least two measurements, got {0}")]
    TooFewMeasurements(usize),
    #[error("measurement dimensions disagree: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
}

pub type Result<T> = std::result::Result<T, InfoError>;

fn xlog2x(x: f64) -> f64 {
    if x < ENTROPY_EIG_FLOOR {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy S(rho) = -Tr(rho log2 rho) in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spec = eig_hermitian(rho.mat())?;
    // Rounding can leave a -1e-17 residue on pure states; entropy is
    // nonnegative by definition.
    Ok((-spec.eigenvalues.iter().map(|&l| xlog2x(l)).sum::<f64>()).max(0.0))
}

/// Shannon entropy of a probability vector in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &x in p {
        if !x.is_finite() || x < -1e-12 {
            return Err(InfoError::NotAProbabilityVector(format!(
                "entry {x} out of range"
            )));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(InfoError::NotAProbabilityVector(format!(
            "entries sum to {sum}"
        )));
    }
    Ok((-p.iter().map(|&x| xlog2x(x.max(0.0))).sum::<f64>()).max(0.0))
}

/// Conditional von Neumann entropy S(A|B) = S(rho_AB) - S(rho_B).
/// Negative values witness entanglement.
pub fn conditional_entropy(rho_ab: &DensityMatrix) -> Result<f64> {
    let rho_b = partial_trace(rho_ab, 1)?;
    Ok(von_neumann_entropy(rho_ab)? - von_neumann_entropy(&rho_b)?)
}

/// Mutual information I(A:B) = S(rho_A) + S(rho_B) - S(rho_AB).
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    let rho_a = partial_trace(rho_ab, 0)?;
    let rho_b = partial_trace(rho_ab, 1)?;
    Ok(von_neumann_entropy(&rho_a)? + von_neumann_entropy(&rho_b)? - von_neumann_entropy(rho_ab)?)
}

/// Holevo quantity I(M:B) = S(rho_B) - sum_i p_i S(rho_B|i) for a measured
/// ensemble and the reduced memory state it came from.
pub fn holevo_quantity(ens: &MeasurementOutcomeEnsemble, rho_b: &DensityMatrix) -> Result<f64> {
    let mut conditional = 0.0;
    for i in ens.supported_outcomes() {
        let mem = ens.conditional_memory_states[i]
            .as_ref()
            .expect("supported outcome carries a memory state");
        conditional += ens.probabilities[i] * von_neumann_entropy(mem)?;
    }
    Ok(von_neumann_entropy(rho_b)? - conditional)
}

/// Relative entropy of coherence in a reference basis:
/// C_re = S(diag(rho)) - S(rho).
pub fn relative_entropy_coherence(rho: &DensityMatrix, basis: &[PureState]) -> Result<f64> {
    let dephased = crate::measurement::dephase_global(rho, basis)?;
    Ok(von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?)
}

/// Unilateral coherence of a bipartite state with respect to a measurement
/// on A: S(rho_MB) - S(rho_AB).
pub fn unilateral_coherence(
    rho_ab: &DensityMatrix,
    m: &ProjectiveMeasurement,
) -> Result<f64> {
    let ens = measure_local(rho_ab, m)?;
    Ok(von_neumann_entropy(&ens.dephased_joint)? - von_neumann_entropy(rho_ab)?)
}

/// Overlap data for a collection of projective measurements.
#[derive(Debug, Clone, Copy)]
pub struct OverlapFactor {
    /// The nested max/sum overlap factor entering the multi-measurement
    /// bound; equals the pairwise maximum overlap when only two
    /// measurements are given.
    pub b: f64,
    /// Largest pairwise overlap max |<u|v>|^2 over all pairs of distinct
    /// measurements (the two-measurement bound constant).
    pub c_max: f64,
}

fn pairwise_overlap(a: &ProjectiveMeasurement, b: &ProjectiveMeasurement, i: usize, j: usize) -> f64 {
    // For rank-1 projectors, |<u_i|v_j>|^2 = Tr(P_i Q_j).
    a.projectors()[i].matmul(&b.projectors()[j]).trace().re
}

/// Overlap factor for N >= 2 measurements by exhaustive enumeration of the
/// nested max/sum expression:
///
/// b = max_{i_N} { sum_{i_2..i_{N-1}} max_{i_1}[c(u^1_{i_1}, u^2_{i_2})]
///     prod_{m=2}^{N-1} c(u^m_{i_m}, u^{m+1}_{i_{m+1}}) }
///
/// The measurement ordering is taken as given; no optimization over
/// orderings is attempted.
pub fn overlap_factor_b(measurements: &[ProjectiveMeasurement]) -> Result<OverlapFactor> {
    let n = measurements.len();
    if n < 2 {
        return Err(InfoError::TooFewMeasurements(n));
    }
    let d = measurements[0].dim();
    for m in measurements {
        if m.dim() != d {
            return Err(InfoError::DimensionMismatch(d, m.dim()));
        }
    }
    let outcomes: Vec<usize> = measurements.iter().map(|m| m.num_outcomes()).collect();

    let mut c_max = 0.0f64;
    for a in 0..n {
        for b in (a + 1)..n {
            for i in 0..outcomes[a] {
                for j in 0..outcomes[b] {
                    c_max = c_max.max(pairwise_overlap(
                        &measurements[a],
                        &measurements[b],
                        i,
                        j,
                    ));
                }
            }
        }
    }

    if n == 2 {
        return Ok(OverlapFactor { b: c_max, c_max });
    }

    // Pre-tabulate consecutive-pair overlaps c(u^m_i, u^{m+1}_j).
    let chain: Vec<Vec<Vec<f64>>> = (0..n - 1)
        .map(|m| {
            (0..outcomes[m])
                .map(|i| {
                    (0..outcomes[m + 1])
                        .map(|j| pairwise_overlap(&measurements[m], &measurements[m + 1], i, j))
                        .collect()
                })
                .collect()
        })
        .collect();

    // max over i_1 of c(u^1_{i_1}, u^2_{i_2}) for each i_2.
    let head_max: Vec<f64> = (0..outcomes[1])
        .map(|i2| {
            (0..outcomes[0])
                .map(|i1| chain[0][i1][i2])
                .fold(0.0, f64::max)
        })
        .collect();

    let mut best = 0.0f64;
    for i_n in 0..outcomes[n - 1] {
        // Enumerate all middle index tuples (i_2, ..., i_{N-1}).
        let middle = &outcomes[1..n - 1];
        let tuples: usize = middle.iter().product();
        let mut total = 0.0;
        for mut t in 0..tuples {
            let mut idx = Vec::with_capacity(middle.len());
            for &sz in middle {
                idx.push(t % sz);
                t /= sz;
            }
            let mut term = head_max[idx[0]];
            for m in 1..n - 1 {
                let from = idx[m - 1];
                let to = if m == n - 2 { i_n } else { idx[m] };
                term *= chain[m][from][to];
            }
            total += term;
        }
        best = best.max(total);
    }
    Ok(OverlapFactor { b: best, c_max })
}

/// Variant of the Holevo/mutual-information strengthening term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaVariant {
    /// delta = (N-1) I(A:B) - sum_m I(M_m:B). Tight on the showcased state
    /// families and never exceeds the measured uncertainty.
    Consistent,
    /// delta = N I(A:B) - sum_m I(M_m:B), the coefficient as printed in the
    /// source inequality. Violated by maximally entangled states; reported
    /// for adjudication, never asserted.
    AsPrinted,
}

impl DeltaVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            DeltaVariant::Consistent => "consistent",
            DeltaVariant::AsPrinted => "as_printed",
        }
    }
}

impl std::str::FromStr for DeltaVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "consistent" => Ok(DeltaVariant::Consistent),
            "as_printed" | "as-printed" => Ok(DeltaVariant::AsPrinted),
            other => Err(format!("unknown delta variant `{other}`")),
        }
    }
}

/// Everything the entropic and coherence uncertainty relations need for one
/// state and one measurement set, in bits.
#[derive(Debug, Clone)]
pub struct UncertaintyReport {
    /// S(M_m|B) per measurement.
    pub per_measurement_conditional_entropy: Vec<f64>,
    /// Unilateral coherence per measurement.
    pub per_measurement_coherence: Vec<f64>,
    /// Holevo quantity I(M_m:B) per measurement.
    pub holevo: Vec<f64>,
    pub elhs: f64,
    pub erhs1: f64,
    pub erhs2: f64,
    pub clhs: f64,
    pub crhs1: f64,
    pub crhs2: f64,
    pub s_ab: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_a_given_b: f64,
    pub i_ab: f64,
    /// The strengthening term before the max{0, .} clamp.
    pub delta: f64,
    pub delta_variant: DeltaVariant,
    /// log2(1/b); log2(d) when the set is a complete MUB set.
    pub log_overlap: f64,
    /// Whether the measurement set was detected as a complete MUB set.
    pub mub_set: bool,
}

impl UncertaintyReport {
    /// Positive when the strengthened bound exceeds the measured quantity,
    /// i.e. when the chosen delta variant is inconsistent.
    pub fn violation_margin(&self) -> f64 {
        (self.erhs2 - self.elhs).max(self.crhs2 - self.clhs)
    }

    pub fn is_violated(&self, tol: f64) -> bool {
        self.violation_margin() > tol
    }
}

/// True when `measurements` form a complete MUB set: d+1 bases of d rank-1
/// outcomes with every cross overlap equal to 1/d.
pub fn is_complete_mub_set(measurements: &[ProjectiveMeasurement]) -> bool {
    if measurements.is_empty() {
        return false;
    }
    let d = measurements[0].dim();
    if measurements.len() != d + 1 {
        return false;
    }
    for m in measurements {
        if m.dim() != d || m.num_outcomes() != d {
            return false;
        }
    }
    let want = 1.0 / d as f64;
    for a in 0..measurements.len() {
        for b in (a + 1)..measurements.len() {
            for i in 0..d {
                for j in 0..d {
                    let ov = pairwise_overlap(&measurements[a], &measurements[b], i, j);
                    if (ov - want).abs() > MUB_DETECT_TOL {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Evaluate the full uncertainty report (entropic and coherence blocks) for
/// a bipartite state under N >= 2 projective measurements on A.
///
/// For a detected complete MUB set the bound constants are log2(d) and
/// d*S(A|B); otherwise the enumerated overlap factor with (N-1)*S(A|B)
/// applies.
pub fn uncertainty_report(
    rho_ab: &DensityMatrix,
    measurements: &[ProjectiveMeasurement],
    delta_variant: DeltaVariant,
) -> Result<UncertaintyReport> {
    let n = measurements.len();
    if n < 2 {
        return Err(InfoError::TooFewMeasurements(n));
    }
    let rho_a = partial_trace(rho_ab, 0)?;
    let rho_b = partial_trace(rho_ab, 1)?;
    let s_ab = von_neumann_entropy(rho_ab)?;
    let s_a = von_neumann_entropy(&rho_a)?;
    let s_b = von_neumann_entropy(&rho_b)?;
    let s_a_given_b = s_ab - s_b;
    let i_ab = s_a + s_b - s_ab;

    let mut per_measurement_conditional_entropy = Vec::with_capacity(n);
    let mut per_measurement_coherence = Vec::with_capacity(n);
    let mut holevo = Vec::with_capacity(n);
    for m in measurements {
        let ens = measure_local(rho_ab, m)?;
        let s_mb = von_neumann_entropy(&ens.dephased_joint)?;
        per_measurement_conditional_entropy.push(s_mb - s_b);
        per_measurement_coherence.push(s_mb - s_ab);
        holevo.push(holevo_quantity(&ens, &rho_b)?);
    }
    let elhs: f64 = per_measurement_conditional_entropy.iter().sum();
    let clhs: f64 = per_measurement_coherence.iter().sum();

    let mub_set = is_complete_mub_set(measurements);
    let (log_overlap, entropic_state_term) = if mub_set {
        let d = measurements[0].dim() as f64;
        (d.log2(), d * s_a_given_b)
    } else {
        let overlap = overlap_factor_b(measurements)?;
        ((1.0 / overlap.b).log2(), (n as f64 - 1.0) * s_a_given_b)
    };
    let erhs1 = log_overlap + entropic_state_term;
    let crhs1 = log_overlap - s_a_given_b;

    let holevo_sum: f64 = holevo.iter().sum();
    let coeff = match delta_variant {
        DeltaVariant::Consistent => n as f64 - 1.0,
        DeltaVariant::AsPrinted => n as f64,
    };
    let delta = coeff * i_ab - holevo_sum;
    let bump = delta.max(0.0);

    Ok(UncertaintyReport {
        per_measurement_conditional_entropy,
        per_measurement_coherence,
        holevo,
        elhs,
        erhs1,
        erhs2: erhs1 + bump,
        clhs,
        crhs1,
        crhs2: crhs1 + bump,
        s_ab,
        s_a,
        s_b,
        s_a_given_b,
        i_ab,
        delta,
        delta_variant,
        log_overlap,
        mub_set,
    })
}

/// Entropic uncertainty relation report (alias of the full evaluation; the
/// report carries both blocks).
pub fn eur_report(
    rho_ab: &DensityMatrix,
    measurements: &[ProjectiveMeasurement],
    delta_variant: DeltaVariant,
) -> Result<UncertaintyReport> {
    uncertainty_report(rho_ab, measurements, delta_variant)
}

/// Coherence uncertainty relation report (alias of the full evaluation).
pub fn cur_report(
    rho_ab: &DensityMatrix,
    measurements: &[ProjectiveMeasurement],
    delta_variant: DeltaVariant,
) -> Result<UncertaintyReport> {
    uncertainty_report(rho_ab, measurements, delta_variant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::states::{
        bell_diagonal_state, bell_like_state, ket_d, ket_h, ket_v, mub_qubit, BellBranch,
        StateParams,
    };

    const TOL: f64 = 1e-9;

    fn binary_entropy(p: f64) -> f64 {
        let q = 1.0 - p;
        let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
        term(p) + term(q)
    }

    #[test]
    fn entropy_of_pure_and_mixed() {
        let pure = ket_d().density(&[2]).unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < TOL);

        let mixed = DensityMatrix::maximally_mixed(&[2]);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < TOL);

        let diag =
            DensityMatrix::validate(ComplexMatrix::diagonal(&[0.75, 0.25]), &[2]).unwrap();
        // Independent oracle: binary entropy evaluated directly.
        let want = binary_entropy(0.25);
        assert!((want - 0.8112781244591328).abs() < 1e-12);
        assert!((von_neumann_entropy(&diag).unwrap() - want).abs() < TOL);
    }

    #[test]
    fn shannon_entropy_examples() {
        assert!(shannon_entropy(&[1.0, 0.0]).unwrap().abs() < TOL);
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < TOL);
        assert!(
            (shannon_entropy(&[0.75, 0.25]).unwrap() - binary_entropy(0.25)).abs() < TOL
        );
        assert!(shannon_entropy(&[0.9, 0.2]).is_err());
        assert!(shannon_entropy(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let bell = bell_like_state(45.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        assert!((conditional_entropy(&bell).unwrap() + 1.0).abs() < TOL);

        let hh = bell_like_state(0.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        assert!(conditional_entropy(&hh).unwrap().abs() < TOL);

        let mixed = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        assert!(conditional_entropy(&mixed).unwrap().abs() < TOL);
    }

    #[test]
    fn mutual_information_examples() {
        let bell = bell_like_state(45.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        assert!((mutual_information(&bell).unwrap() - 2.0).abs() < TOL);

        let hh = bell_like_state(0.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        assert!(mutual_information(&hh).unwrap().abs() < TOL);

        let mixed = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        assert!((mutual_information(&mixed).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn holevo_examples() {
        let mubs = mub_qubit();
        let bell = bell_like_state(45.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        let rho_b = partial_trace(&bell, 1).unwrap();
        for m in &mubs {
            let ens = measure_local(&bell, m).unwrap();
            assert!((holevo_quantity(&ens, &rho_b).unwrap() - 1.0).abs() < TOL);
        }

        let hh = bell_like_state(0.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        let rho_b = partial_trace(&hh, 1).unwrap();
        for m in &mubs {
            let ens = measure_local(&hh, m).unwrap();
            assert!(holevo_quantity(&ens, &rho_b).unwrap().abs() < TOL);
        }

        let mixed = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        let rho_b = partial_trace(&mixed, 1).unwrap();
        let ens = measure_local(&mixed, &mubs[2]).unwrap();
        assert!(holevo_quantity(&ens, &rho_b).unwrap().abs() < TOL);
    }

    #[test]
    fn coherence_examples() {
        let d = ket_d().density(&[2]).unwrap();
        assert!(
            (relative_entropy_coherence(&d, &[ket_h(), ket_v()]).unwrap() - 1.0).abs() < TOL
        );
        // A state diagonal in its own basis has no coherence there.
        let diag =
            DensityMatrix::validate(ComplexMatrix::diagonal(&[0.7, 0.3]), &[2]).unwrap();
        assert!(
            relative_entropy_coherence(&diag, &[ket_h(), ket_v()])
                .unwrap()
                .abs()
                < TOL
        );

        let bell = bell_like_state(45.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        let product_basis = vec![
            ket_h().tensor(&ket_h()),
            ket_h().tensor(&ket_v()),
            ket_v().tensor(&ket_h()),
            ket_v().tensor(&ket_v()),
        ];
        assert!(
            (relative_entropy_coherence(&bell, &product_basis).unwrap() - 1.0).abs() < TOL
        );
    }

    #[test]
    fn unilateral_coherence_examples() {
        let mubs = mub_qubit();
        let bell = bell_like_state(45.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        assert!((unilateral_coherence(&bell, &mubs[2]).unwrap() - 1.0).abs() < TOL);

        // A state diagonal in M_z x (any B basis) is a dephasing fixed point.
        let diag = DensityMatrix::validate(
            ComplexMatrix::diagonal(&[0.4, 0.3, 0.2, 0.1]),
            &[2, 2],
        )
        .unwrap();
        assert!(unilateral_coherence(&diag, &mubs[2]).unwrap().abs() < TOL);

        let mixed = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        assert!((unilateral_coherence(&mixed, &mubs[0]).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn overlap_factor_for_mubs() {
        let mubs = mub_qubit();
        let two = overlap_factor_b(&mubs[..2]).unwrap();
        assert!((two.c_max - 0.5).abs() < 1e-12);
        assert!(((1.0 / two.b).log2() - 1.0).abs() < 1e-12);

        let three = overlap_factor_b(&mubs).unwrap();
        assert!((three.b - 0.5).abs() < 1e-12);
        assert!(((1.0 / three.b).log2() - 1.0).abs() < 1e-12);

        // Identical bases are degenerate: c = 1, bound term 0.
        let repeated = vec![mubs[2].clone(), mubs[2].clone()];
        let degenerate = overlap_factor_b(&repeated).unwrap();
        assert!((degenerate.b - 1.0).abs() < 1e-12);
        assert!((1.0 / degenerate.b).log2().abs() < 1e-12);
    }

    #[test]
    fn mub_detection() {
        let mubs = mub_qubit();
        assert!(is_complete_mub_set(&mubs));
        assert!(!is_complete_mub_set(&mubs[..2]));
        let repeated = vec![mubs[0].clone(), mubs[1].clone(), mubs[1].clone()];
        assert!(!is_complete_mub_set(&repeated));
    }

    #[test]
    fn report_bell_state() {
        let mubs = mub_qubit();
        let bell = bell_like_state(45.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        let rep = uncertainty_report(&bell, &mubs, DeltaVariant::Consistent).unwrap();
        assert!(rep.mub_set);
        assert!(rep.elhs.abs() < TOL);
        assert!((rep.clhs - 3.0).abs() < TOL);
        assert!((rep.erhs1 + 1.0).abs() < TOL);
        assert!((rep.delta - 1.0).abs() < TOL);
        assert!(rep.erhs2.abs() < TOL);
        assert!((rep.crhs1 - 2.0).abs() < TOL);
        assert!((rep.crhs2 - 3.0).abs() < TOL);
        assert!(!rep.is_violated(TOL));

        let printed = uncertainty_report(&bell, &mubs, DeltaVariant::AsPrinted).unwrap();
        assert!((printed.delta - 3.0).abs() < TOL);
        assert!((printed.erhs2 - 2.0).abs() < TOL);
        // The printed coefficient overshoots: flagged, not asserted.
        assert!(printed.is_violated(TOL));
        assert!((printed.violation_margin() - 2.0).abs() < TOL);
    }

    #[test]
    fn report_product_state() {
        let mubs = mub_qubit();
        let hh = bell_like_state(0.0, BellBranch::Phi)
            .unwrap()
            .density(&[2, 2])
            .unwrap();
        let rep = uncertainty_report(&hh, &mubs, DeltaVariant::Consistent).unwrap();
        assert!((rep.elhs - 2.0).abs() < TOL);
        assert!((rep.erhs1 - 1.0).abs() < TOL);
        assert!(rep.delta.abs() < TOL);
        assert!((rep.erhs2 - 1.0).abs() < TOL);
        assert!((rep.clhs - 2.0).abs() < TOL);
        assert!((rep.crhs1 - 1.0).abs() < TOL);
        assert!((rep.crhs2 - 1.0).abs() < TOL);
    }

    #[test]
    fn report_equal_mixture_is_tight() {
        // Direct algebra for p Phi+ + (1-p) Psi- at theta = 45 deg: both
        // branches anticorrelate perfectly in the y basis, so S(M_y|B) = 0
        // and I(M_y:B) = 1, while the x and z measurements each contribute
        // H(p). Hence ELHS = 2 H(p), CLHS = 3 - H(p), delta = 1, and both
        // strengthened bounds are tight for every p.
        let mubs = mub_qubit();
        let rho = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        let rep = uncertainty_report(&rho, &mubs, DeltaVariant::Consistent).unwrap();
        assert!((rep.elhs - 2.0).abs() < TOL);
        assert!((rep.erhs1 - 1.0).abs() < TOL);
        assert!((rep.delta - 1.0).abs() < TOL);
        assert!((rep.erhs2 - 2.0).abs() < TOL);
        assert!((rep.clhs - 2.0).abs() < TOL);
        assert!((rep.crhs1 - 1.0).abs() < TOL);
        assert!((rep.crhs2 - 2.0).abs() < TOL);
        assert!((rep.holevo[1] - 1.0).abs() < TOL, "y-basis Holevo is 1 bit");

        // Tightness across the whole p grid at theta = 45 deg.
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let rho = bell_diagonal_state(StateParams::new(p, 45.0).unwrap()).unwrap();
            let rep = uncertainty_report(&rho, &mubs, DeltaVariant::Consistent).unwrap();
            let h = binary_entropy(p);
            assert!((rep.elhs - 2.0 * h).abs() < TOL, "p={p}");
            assert!((rep.clhs - (3.0 - h)).abs() < TOL, "p={p}");
            assert!((rep.erhs2 - rep.elhs).abs() < TOL, "p={p}");
            assert!((rep.crhs2 - rep.clhs).abs() < TOL, "p={p}");
        }
    }

    #[test]
    fn report_maximally_mixed() {
        let mubs = mub_qubit();
        let rho = DensityMatrix::maximally_mixed(&[2, 2]);
        let rep = uncertainty_report(&rho, &mubs, DeltaVariant::Consistent).unwrap();
        assert!((rep.clhs - 0.0).abs() < TOL);
        assert!(rep.crhs1.abs() < TOL);
        assert!(rep.crhs2.abs() < TOL);
        assert!((rep.elhs - 3.0).abs() < TOL);
        assert!((rep.erhs1 - 3.0).abs() < TOL);
    }

    #[test]
    fn lhs_difference_identity() {
        // ELHS - CLHS = N * S(A|B) follows from S(M|B) - C = S(AB) - S(B).
        let mubs = mub_qubit();
        for &(p, theta) in &[(1.0, 45.0), (1.0, 0.0), (0.5, 45.0), (0.3, 20.0), (0.8, 70.0)] {
            let rho = bell_diagonal_state(StateParams::new(p, theta).unwrap()).unwrap();
            let rep = uncertainty_report(&rho, &mubs, DeltaVariant::Consistent).unwrap();
            assert!(
                (rep.elhs - rep.clhs - 3.0 * rep.s_a_given_b).abs() < TOL,
                "identity fails at p={p}, theta={theta}"
            );
            // Definitional recomputations.
            let sum_e: f64 = rep.per_measurement_conditional_entropy.iter().sum();
            let sum_c: f64 = rep.per_measurement_coherence.iter().sum();
            assert!((rep.elhs - sum_e).abs() < 1e-12);
            assert!((rep.clhs - sum_c).abs() < 1e-12);
            assert!(rep.erhs2 >= rep.erhs1 - 1e-12);
            assert!(rep.crhs2 >= rep.crhs1 - 1e-12);
        }
    }

    #[test]
    fn non_mub_pair_uses_enumerated_overlap() {
        let mubs = mub_qubit();
        let pair = &mubs[..2];
        let rho = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        let rep = uncertainty_report(&rho, pair, DeltaVariant::Consistent).unwrap();
        assert!(!rep.mub_set);
        assert!((rep.log_overlap - 1.0).abs() < TOL);
        // N = 2: ERHS1 = log2(1/c) + S(A|B).
        assert!((rep.erhs1 - 1.0).abs() < TOL);
        assert!(rep.elhs >= rep.erhs2 - TOL);
    }

    #[test]
    fn two_mub_shannon_bound_on_single_qubits() {
        // H(P) + H(Q) >= 1 for any single-qubit state and two MUBs.
        use rand::SeedableRng;
        let mubs = mub_qubit();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..500 {
            let k = [1, 2][trial % 2];
            let rho = crate::sampling::random_density(&[2], k, &mut rng);
            let probs = |m: &ProjectiveMeasurement| -> Vec<f64> {
                m.projectors()
                    .iter()
                    .map(|p| p.matmul(rho.mat()).trace().re.clamp(0.0, 1.0))
                    .collect()
            };
            for a in 0..3 {
                for b in 0..3 {
                    if a == b {
                        continue;
                    }
                    let h = shannon_entropy(&probs(&mubs[a])).unwrap()
                        + shannon_entropy(&probs(&mubs[b])).unwrap();
                    assert!(h >= 1.0 - TOL, "H(P)+H(Q) = {h} below bound");
                }
            }
        }
    }

    #[test]
    fn block_entropy_identity() {
        // S(rho_MB) = H(p) + sum_i p_i S(rho_B|i) for the dephased state.
        let mubs = mub_qubit();
        let rho = bell_diagonal_state(StateParams::new(0.3, 30.0).unwrap()).unwrap();
        for m in &mubs {
            let ens = measure_local(&rho, m).unwrap();
            let s_mb = von_neumann_entropy(&ens.dephased_joint).unwrap();
            let h = shannon_entropy(&ens.probabilities).unwrap();
            let mut cond = 0.0;
            for i in ens.supported_outcomes() {
                cond += ens.probabilities[i]
                    * von_neumann_entropy(ens.conditional_memory_states[i].as_ref().unwrap())
                        .unwrap();
            }
            assert!((s_mb - h - cond).abs() < TOL);
        }
    }

    #[test]
    fn delta_variant_parsing() {
        assert_eq!(
            "consistent".parse::<DeltaVariant>().unwrap(),
            DeltaVariant::Consistent
        );
        assert_eq!(
            "as-printed".parse::<DeltaVariant>().unwrap(),
            DeltaVariant::AsPrinted
        );
        assert!("weird".parse::<DeltaVariant>().is_err());
    }

    #[test]
    fn report_rejects_single_measurement() {
        let mubs = mub_qubit();
        let rho = DensityMatrix::maximally_mixed(&[2, 2]);
        assert!(matches!(
            uncertainty_report(&rho, &mubs[..1], DeltaVariant::Consistent),
            Err(InfoError::TooFewMeasurements(1))
        ));
    }

    #[test]
    fn entropy_zero_convention_for_singular_states() {
        let m = ComplexMatrix::diagonal(&[1.0 - 1e-16, 1e-16]);
        let rho = DensityMatrix::validate(m, &[2]).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        assert!(s.abs() < 1e-12);
    }
}
