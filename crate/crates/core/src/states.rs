//! State preparation: the Bell-like family, the qubit MUB set, the
//! polarization basis dictionary, and the Jones-calculus wave-plate model.
//!
//! Angles are accepted in degrees at every public boundary and converted to
//! radians exactly once, internally.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{ComplexMatrix, DensityMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum StateError {
    #[error("preparation angle {0} deg outside [0, 90]")]
    AngleOutOfRange(f64),
    #[error("mixing weight {0} outside [0, 1]")]
    MixingOutOfRange(f64),
    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("projectors do not form a projective measurement: {0}")]
    InvalidMeasurement(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, StateError>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Normalized pure state vector.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Rank-1 projector |psi><psi|.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self, dims: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_pure(&self.amplitudes, dims)?)
    }

    /// Tensor product |self> x |other| with self-index major.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState { amplitudes }
    }

    pub fn overlap_sq(&self, other: &PureState) -> f64 {
        let ip: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        ip.norm_sqr()
    }
}

/// Horizontal polarization ket |H>.
pub fn ket_h() -> PureState {
    PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
}

/// Vertical polarization ket |V>.
pub fn ket_v() -> PureState {
    PureState::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
}

/// Diagonal ket |D> = (|H> + |V>)/sqrt(2).
pub fn ket_d() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap()
}

/// Antidiagonal ket |A> = (|H> - |V>)/sqrt(2).
pub fn ket_a() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap()
}

/// Right-circular ket |R> = (|H> + i|V>)/sqrt(2).
pub fn ket_r() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![c(s, 0.0), c(0.0, s)]).unwrap()
}

/// Left-circular ket |L> = (|H> - i|V>)/sqrt(2).
pub fn ket_l() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![c(s, 0.0), c(0.0, -s)]).unwrap()
}

/// Look up a polarization ket by its single-letter name.
pub fn ket_by_name(name: char) -> Option<PureState> {
    match name {
        'H' => Some(ket_h()),
        'V' => Some(ket_v()),
        'D' => Some(ket_d()),
        'A' => Some(ket_a()),
        'R' => Some(ket_r()),
        'L' => Some(ket_l()),
        _ => None,
    }
}

/// Preparation parameters of the Bell-like diagonal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    p: f64,
    theta_rad: f64,
}

impl StateParams {
    pub fn new(p: f64, theta_deg: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(StateError::MixingOutOfRange(p));
        }
        if !(0.0..=90.0).contains(&theta_deg) || !theta_deg.is_finite() {
            return Err(StateError::AngleOutOfRange(theta_deg));
        }
        Ok(Self {
            p,
            theta_rad: theta_deg.to_radians(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn theta_rad(&self) -> f64 {
        self.theta_rad
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_rad.to_degrees()
    }
}

/// Which of the two Bell-like branches to prepare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellBranch {
    /// cos(theta)|HH> + sin(theta)|VV>
    Phi,
    /// cos(theta)|HV> - sin(theta)|VH>
    Psi,
}

/// Bell-like two-qubit pure state at preparation angle `theta_deg`.
pub fn bell_like_state(theta_deg: f64, which: BellBranch) -> Result<PureState> {
    if !(0.0..=90.0).contains(&theta_deg) || !theta_deg.is_finite() {
        return Err(StateError::AngleOutOfRange(theta_deg));
    }
    let th = theta_deg.to_radians();
    let (ct, st) = (th.cos(), th.sin());
    let amps = match which {
        BellBranch::Phi => vec![c(ct, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(st, 0.0)],
        BellBranch::Psi => vec![c(0.0, 0.0), c(ct, 0.0), c(-st, 0.0), c(0.0, 0.0)],
    };
    PureState::new(amps)
}

/// Mixture p |Phi_theta><Phi_theta| + (1-p) |Psi_theta><Psi_theta| on [2,2].
pub fn bell_diagonal_state(params: StateParams) -> Result<DensityMatrix> {
    let theta_deg = params.theta_deg();
    let phi = bell_like_state(theta_deg, BellBranch::Phi)?;
    let psi = bell_like_state(theta_deg, BellBranch::Psi)?;
    let m = phi
        .projector()
        .scale(c(params.p(), 0.0))
        .add(&psi.projector().scale(c(1.0 - params.p(), 0.0)));
    Ok(DensityMatrix::validate(m, &[2, 2])?)
}

/// Ordered set of rank-1 orthonormal projectors summing to the identity.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    label: String,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(label: impl Into<String>, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(StateError::InvalidMeasurement("no projectors".into()));
        }
        let d = projectors[0].rows();
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, p) in projectors.iter().enumerate() {
            if p.rows() != d || p.cols() != d {
                return Err(StateError::InvalidMeasurement(format!(
                    "projector {i} has mismatched shape"
                )));
            }
            if (p.trace().re - 1.0).abs() > 1e-9 {
                return Err(StateError::InvalidMeasurement(format!(
                    "projector {i} is not rank-1 normalized (trace {})",
                    p.trace().re
                )));
            }
            sum = sum.add(p);
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(d)) > 1e-10 {
            return Err(StateError::InvalidMeasurement(
                "projectors do not sum to the identity".into(),
            ));
        }
        for i in 0..projectors.len() {
            for j in 0..projectors.len() {
                let prod = projectors[i].matmul(&projectors[j]);
                let want = if i == j {
                    projectors[i].clone()
                } else {
                    ComplexMatrix::zeros(d, d)
                };
                if prod.max_abs_diff(&want) > 1e-9 {
                    return Err(StateError::InvalidMeasurement(format!(
                        "projectors {i},{j} are not orthogonal idempotents"
                    )));
                }
            }
        }
        Ok(Self {
            label: label.into(),
            projectors,
        })
    }

    /// Measurement whose projectors are the outer products of the given
    /// orthonormal basis kets, in order.
    pub fn from_basis(label: impl Into<String>, basis: &[PureState]) -> Result<Self> {
        Self::new(label, basis.iter().map(|k| k.projector()).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn num_outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }
}

/// The complete qubit MUB set: eigenbases of sigma_x, sigma_y, sigma_z in
/// that order, outcome 0 before outcome 1 (x0 = D, y0 = R, z0 = H).
pub fn mub_qubit() -> Vec<ProjectiveMeasurement> {
    vec![
        ProjectiveMeasurement::from_basis("x", &[ket_d(), ket_a()]).unwrap(),
        ProjectiveMeasurement::from_basis("y", &[ket_r(), ket_l()]).unwrap(),
        ProjectiveMeasurement::from_basis("z", &[ket_h(), ket_v()]).unwrap(),
    ]
}

/// Retarder kind of a wave plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateKind {
    Half,
    Quarter,
}

/// A wave plate at a given optical-axis angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePlate {
    pub kind: PlateKind,
    axis_rad: f64,
}

impl WavePlate {
    pub fn half(axis_deg: f64) -> Self {
        Self {
            kind: PlateKind::Half,
            axis_rad: axis_deg.to_radians(),
        }
    }

    pub fn quarter(axis_deg: f64) -> Self {
        Self {
            kind: PlateKind::Quarter,
            axis_rad: axis_deg.to_radians(),
        }
    }

    pub fn axis_rad(&self) -> f64 {
        self.axis_rad
    }
}

/// Jones matrix of a wave plate.
///
/// HWP(t) reflects polarization about its axis:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
/// QWP(t) is the retarder R(-t) diag(1, i) R(t) (fast axis horizontal at
/// t = 0, retardance pi/2 on the slow axis).
pub fn jones_matrix(plate: WavePlate) -> ComplexMatrix {
    let t = plate.axis_rad;
    match plate.kind {
        PlateKind::Half => {
            let (c2, s2) = ((2.0 * t).cos(), (2.0 * t).sin());
            ComplexMatrix::from_real(2, 2, &[c2, s2, s2, -c2]).unwrap()
        }
        PlateKind::Quarter => {
            let (ct, st) = (t.cos(), t.sin());
            // R(-t) diag(1, i) R(t) with R(t) = [[cos t, -sin t], [sin t, cos t]].
            let c2 = ct * ct;
            let s2 = st * st;
            let cs = ct * st;
            ComplexMatrix::new(
                2,
                2,
                vec![
                    c(c2, s2),
                    c(-cs, cs),
                    c(-cs, cs),
                    c(s2, c2),
                ],
            )
            .unwrap()
        }
    }
}

/// Projector onto the state the composed plates map to the PBS transmit
/// port: U† |H><H| U with U = J(p2) J(p1).
pub fn projector_from_plates(p1: WavePlate, p2: WavePlate) -> ComplexMatrix {
    let u = jones_matrix(p2).matmul(&jones_matrix(p1));
    projector_behind_pbs(&u)
}

/// Single-plate variant: U† |H><H| U with U = J(p).
///
/// The published plate table lists two identically set plates per outcome;
/// composing two equal reflections is the identity, so the single-plate
/// action is what actually reproduces the MUB projectors (up to y-outcome
/// relabeling under this retarder convention).
pub fn projector_from_plate(p: WavePlate) -> ComplexMatrix {
    projector_behind_pbs(&jones_matrix(p))
}

fn projector_behind_pbs(u: &ComplexMatrix) -> ComplexMatrix {
    // U† |H><H| U = (first row of U)† (first row of U).
    let row: Vec<Complex64> = vec![u[(0, 0)].conj(), u[(0, 1)].conj()];
    ComplexMatrix::outer(&row, &row)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state_at_45() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = bell_like_state(45.0, BellBranch::Phi).unwrap();
        let want = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        for (a, w) in phi.amplitudes().iter().zip(want) {
            assert!((a - w).norm() < 1e-12);
        }
    }

    #[test]
    fn product_endpoint() {
        let hh = bell_like_state(0.0, BellBranch::Phi).unwrap();
        assert!((hh.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-15);
        for k in 1..4 {
            assert!(hh.amplitudes()[k].norm() < 1e-15);
        }
    }

    #[test]
    fn psi_branch_at_30() {
        let psi = bell_like_state(30.0, BellBranch::Psi).unwrap();
        let amps = psi.amplitudes();
        assert!(amps[0].norm() < 1e-15);
        assert!((amps[1].re - 0.8660254037844387).abs() < 1e-12);
        assert!((amps[2].re + 0.5).abs() < 1e-12);
        assert!(amps[3].norm() < 1e-15);
    }

    #[test]
    fn angle_out_of_range() {
        assert!(matches!(
            bell_like_state(91.0, BellBranch::Phi),
            Err(StateError::AngleOutOfRange(_))
        ));
        assert!(matches!(
            bell_like_state(-0.5, BellBranch::Psi),
            Err(StateError::AngleOutOfRange(_))
        ));
    }

    #[test]
    fn bell_diagonal_pure_endpoint() {
        let rho = bell_diagonal_state(StateParams::new(1.0, 45.0).unwrap()).unwrap();
        let phi = bell_like_state(45.0, BellBranch::Phi).unwrap();
        assert!(rho.mat().max_abs_diff(&phi.projector()) < 1e-12);
    }

    #[test]
    fn bell_diagonal_spectrum_and_purity() {
        let rho = bell_diagonal_state(StateParams::new(0.5, 45.0).unwrap()).unwrap();
        let spec = crate::linalg::eig_hermitian(rho.mat()).unwrap();
        for (got, want) in spec.eigenvalues.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        let rho = bell_diagonal_state(StateParams::new(0.3, 20.0).unwrap()).unwrap();
        assert!((rho.purity() - 0.58).abs() < 1e-12);
    }

    #[test]
    fn branches_are_orthogonal_for_every_theta() {
        for k in 0..=18 {
            let theta = k as f64 * 5.0;
            let phi = bell_like_state(theta, BellBranch::Phi).unwrap();
            let psi = bell_like_state(theta, BellBranch::Psi).unwrap();
            assert!(phi.overlap_sq(&psi) < 1e-24);
        }
    }

    #[test]
    fn mixing_label_symmetry() {
        // Swapping p -> 1-p permutes the branch weights, so the spectra match.
        for &(p, theta) in &[(0.2, 30.0), (0.7, 60.0), (0.0, 45.0)] {
            let a = bell_diagonal_state(StateParams::new(p, theta).unwrap()).unwrap();
            let b = bell_diagonal_state(StateParams::new(1.0 - p, theta).unwrap()).unwrap();
            let sa = crate::linalg::eig_hermitian(a.mat()).unwrap().eigenvalues;
            let sb = crate::linalg::eig_hermitian(b.mat()).unwrap().eigenvalues;
            for (x, y) in sa.iter().zip(&sb) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mub_projectors_and_overlaps() {
        let mubs = mub_qubit();
        assert_eq!(mubs.len(), 3);
        assert_eq!(mubs[0].label(), "x");
        assert_eq!(mubs[2].label(), "z");

        // M_z projectors are diag(1,0) and diag(0,1).
        let z = &mubs[2];
        assert!(z.projectors()[0].max_abs_diff(&ComplexMatrix::diagonal(&[1.0, 0.0])) < 1e-15);
        assert!(z.projectors()[1].max_abs_diff(&ComplexMatrix::diagonal(&[0.0, 1.0])) < 1e-15);

        // M_y outcome 0 is |R><R| = [[1, -i], [i, 1]]/2.
        let want = ComplexMatrix::new(
            2,
            2,
            vec![c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(mubs[1].projectors()[0].max_abs_diff(&want) < 1e-15);

        // Cross-basis overlaps are all 1/2.
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                for i in 0..2 {
                    for j in 0..2 {
                        let overlap = mubs[a].projectors()[i]
                            .matmul(&mubs[b].projectors()[j])
                            .trace()
                            .re;
                        assert!((overlap - 0.5).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn jones_matrices_are_unitary() {
        for deg in [-45.0, -22.5, 0.0, 10.0, 22.5, 45.0, 90.0] {
            for plate in [WavePlate::half(deg), WavePlate::quarter(deg)] {
                let j = jones_matrix(plate);
                let ortho = j.dagger().matmul(&j);
                assert!(ortho.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
            }
        }
    }

    #[test]
    fn hwp_axis_aligned_fixes_h() {
        let j = jones_matrix(WavePlate::half(0.0));
        let out = j.apply(ket_h().amplitudes());
        // |H> up to global phase.
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }

    #[test]
    fn hwp_22_5_maps_d_to_h() {
        let j = jones_matrix(WavePlate::half(22.5));
        let out = j.apply(ket_d().amplitudes());
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }

    #[test]
    fn qwp_45_sends_r_to_pbs_port() {
        let j = jones_matrix(WavePlate::quarter(45.0));
        let out = j.apply(ket_r().amplitudes());
        let n: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
        // One component vanishes: the state lands on a definite PBS port.
        let min = out[0].norm().min(out[1].norm());
        assert!(min < 1e-12, "expected |H> or |V> up to phase, got {out:?}");
    }

    #[test]
    fn single_plate_settings_reproduce_mubs() {
        let mubs = mub_qubit();
        // HWP rows map directly onto the x and z outcomes.
        let x0 = projector_from_plate(WavePlate::half(22.5));
        let x1 = projector_from_plate(WavePlate::half(-22.5));
        assert!(x0.max_abs_diff(&mubs[0].projectors()[0]) < 1e-12);
        assert!(x1.max_abs_diff(&mubs[0].projectors()[1]) < 1e-12);

        let z0 = projector_from_plate(WavePlate::half(0.0));
        let z1 = projector_from_plate(WavePlate::half(45.0));
        assert!(z0.max_abs_diff(&mubs[2].projectors()[0]) < 1e-12);
        assert!(z1.max_abs_diff(&mubs[2].projectors()[1]) < 1e-12);

        // QWP rows reproduce the y basis with outcomes swapped under this
        // retarder convention.
        let y_a = projector_from_plate(WavePlate::quarter(45.0));
        let y_b = projector_from_plate(WavePlate::quarter(-45.0));
        assert!(y_a.max_abs_diff(&mubs[1].projectors()[1]) < 1e-12);
        assert!(y_b.max_abs_diff(&mubs[1].projectors()[0]) < 1e-12);
    }

    #[test]
    fn two_equal_plates_compose_to_identity_action() {
        // Two identical reflections cancel, so every doubled HWP row lands
        // back on |H><H| regardless of the axis angle.
        let h_proj = ket_h().projector();
        for deg in [0.0, 22.5, -22.5, 45.0] {
            let p = projector_from_plates(WavePlate::half(deg), WavePlate::half(deg));
            assert!(p.max_abs_diff(&h_proj) < 1e-12);
        }
        // The opposite-angle QWP pair likewise composes to the identity.
        let p = projector_from_plates(WavePlate::quarter(45.0), WavePlate::quarter(-45.0));
        assert!(p.max_abs_diff(&h_proj) < 1e-12);
    }
}
