//! Simulated tomography pipeline: Poissonian coincidence counts over
//! product-basis settings, linear and maximum-likelihood density-matrix
//! reconstruction, Uhlmann fidelity, and Monte Carlo error bars.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::infotheory::{uncertainty_report, DeltaVariant, InfoError, UncertaintyReport};
use crate::linalg::{
    cholesky, eig_hermitian, sqrt_psd_matrix, ComplexMatrix, DensityMatrix, LinalgError,
};
use crate::sampling::derive_stream_seed;
use crate::states::{ket_by_name, mub_qubit, PureState};

/// Above this Poisson mean the sampler switches from inversion to a rounded
/// normal approximation.
pub const POISSON_INVERSION_CUTOFF: f64 = 30.0;
/// Accepted-step log-likelihood improvement below which MLE stops.
pub const MLE_LL_TOL: f64 = 1e-10;
/// Gradient norm below which MLE stops.
pub const MLE_GRAD_TOL: f64 = 1e-8;
/// Hard cap on MLE iterations; hitting it leaves `converged = false`.
pub const MLE_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Error)]
pub enum TomographyError {
    #[error("settings are not informationally complete (rank below 16)")]
    UnderdeterminedSettings,
    #[error("exposure must be positive, got {0}")]
    InvalidExposure(f64),
    #[error("counts and settings disagree: {counts} counts for {settings} settings")]
    CountMismatch { counts: usize, settings: usize },
    #[error("need at least 2 Monte Carlo samples, got {0}")]
    TooFewSamples(usize),
    #[error("fewer than 2 Monte Carlo samples converged ({0})")]
    TooFewConverged(usize),
    #[error("count data is degenerate (all zero)")]
    DegenerateCounts,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Info(#[from] InfoError),
}

pub type Result<T> = std::result::Result<T, TomographyError>;

/// One coincidence-measurement setting: a product of local analysis kets.
#[derive(Debug, Clone)]
pub struct TomographySetting {
    pub basis_a: PureState,
    pub basis_b: PureState,
    pub label: String,
}

impl TomographySetting {
    /// Product projector |a><a| x |b><b|.
    pub fn projector(&self) -> ComplexMatrix {
        self.basis_a.projector().kron(&self.basis_b.projector())
    }

    /// Product ket |a> x |b>.
    pub fn ket(&self) -> Vec<Complex64> {
        self.basis_a.tensor(&self.basis_b).amplitudes().to_vec()
    }
}

/// Which tomography setting family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingsMode {
    /// The canonical minimal product set {H,V,D,R} x {H,V,D,R}.
    Sixteen,
    /// The full product set {H,V,D,A,R,L} x {H,V,D,A,R,L}.
    ThirtySix,
}

impl std::str::FromStr for SettingsMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "16" | "sixteen" => Ok(SettingsMode::Sixteen),
            "36" | "thirtysix" => Ok(SettingsMode::ThirtySix),
            other => Err(format!("unknown settings mode `{other}` (use 16 or 36)")),
        }
    }
}

/// Standard product-basis settings for two-qubit tomography.
pub fn standard_settings(mode: SettingsMode) -> Vec<TomographySetting> {
    let letters: &[char] = match mode {
        SettingsMode::Sixteen => &['H', 'V', 'D', 'R'],
        SettingsMode::ThirtySix => &['H', 'V', 'D', 'A', 'R', 'L'],
    };
    let mut settings = Vec::with_capacity(letters.len() * letters.len());
    for &a in letters {
        for &b in letters {
            settings.push(TomographySetting {
                basis_a: ket_by_name(a).unwrap(),
                basis_b: ket_by_name(b).unwrap(),
                label: format!("{a}{b}"),
            });
        }
    }
    settings
}

/// Simulated coincidence counts for a list of settings.
#[derive(Debug, Clone)]
pub struct CountTable {
    pub settings: Vec<TomographySetting>,
    pub counts: Vec<u64>,
    pub exposure: f64,
    pub seed: u64,
}

impl CountTable {
    /// Observed frequencies n_k / exposure.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&n| n as f64 / self.exposure)
            .collect()
    }

    /// CSV serialization: one row per setting with seed provenance.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# schema: quncert.counts.v1\n");
        out.push_str("setting_label,basis_a,basis_b,count,exposure,seed\n");
        for (setting, &count) in self.settings.iter().zip(&self.counts) {
            let mut chars = setting.label.chars();
            let a = chars.next().unwrap_or('?');
            let b: String = chars.collect();
            out.push_str(&format!(
                "{},{},{},{},{:.17e},{}\n",
                setting.label, a, b, count, self.exposure, self.seed
            ));
        }
        out
    }
}

fn sample_poisson(mean: f64, rng: &mut impl Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean < POISSON_INVERSION_CUTOFF {
        // Knuth inversion by uniform products.
        let limit = (-mean).exp();
        let mut k = 0u64;
        let mut p = 1.0f64;
        loop {
            p *= rng.gen::<f64>();
            if p <= limit {
                return k;
            }
            k += 1;
        }
    }
    let z: f64 = rng.sample(StandardNormal);
    let n = (mean + mean.sqrt() * z).round();
    if n < 0.0 {
        0
    } else {
        n as u64
    }
}

/// Exact outcome probabilities Tr[(Pi_a x Pi_b) rho] per setting.
pub fn expected_frequencies(rho: &DensityMatrix, settings: &[TomographySetting]) -> Vec<f64> {
    settings
        .iter()
        .map(|s| {
            let v = s.ket();
            let mut p = Complex64::new(0.0, 0.0);
            for i in 0..v.len() {
                for j in 0..v.len() {
                    p += v[i].conj() * rho.mat()[(i, j)] * v[j];
                }
            }
            p.re.clamp(0.0, 1.0)
        })
        .collect()
}

/// Draw Poissonian coincidence counts, count ~ Poisson(exposure * p_k).
/// Deterministic for a given seed.
pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[TomographySetting],
    exposure: f64,
    seed: u64,
) -> Result<CountTable> {
    if !(exposure > 0.0) || !exposure.is_finite() {
        return Err(TomographyError::InvalidExposure(exposure));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = expected_frequencies(rho, settings);
    let counts = probs
        .iter()
        .map(|&p| sample_poisson(exposure * p, &mut rng))
        .collect();
    Ok(CountTable {
        settings: settings.to_vec(),
        counts,
        exposure,
        seed,
    })
}

/// How a density matrix estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructionMethod {
    Linear,
    Mle,
}

impl ReconstructionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReconstructionMethod::Linear => "linear",
            ReconstructionMethod::Mle => "mle",
        }
    }
}

/// Result of a tomographic reconstruction.
///
/// Linear inversion can land outside the physical set, so the raw estimate
/// is kept as a plain matrix with a `physical` flag; [`Self::density`]
/// yields the validated state when it exists.
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub rho_hat: ComplexMatrix,
    pub method: ReconstructionMethod,
    pub log_likelihood: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// True when `rho_hat` passes density-matrix validation.
    pub physical: bool,
}

impl ReconstructionResult {
    pub fn density(&self) -> Result<DensityMatrix> {
        Ok(DensityMatrix::validate(self.rho_hat.clone(), &[2, 2])?)
    }

    /// Header for the reconstruction CSV: method metadata followed by the
    /// 16 matrix entries as re,im pairs, row-major.
    pub fn csv_header() -> String {
        let mut out = String::from("method,converged,iterations,log_likelihood");
        for i in 0..4 {
            for j in 0..4 {
                out.push_str(&format!(",m{i}{j}_re,m{i}{j}_im"));
            }
        }
        out
    }

    pub fn csv_row(&self) -> String {
        let mut out = format!(
            "{},{},{},{}",
            self.method.as_str(),
            self.converged,
            self.iterations,
            self.log_likelihood
                .map_or_else(|| "".to_string(), |l| format!("{l:.17e}"))
        );
        for i in 0..4 {
            for j in 0..4 {
                let z = self.rho_hat[(i, j)];
                out.push_str(&format!(",{:.17e},{:.17e}", z.re, z.im));
            }
        }
        out
    }

    /// Single-result CSV serialization with the schema comment line.
    pub fn to_csv(&self) -> String {
        format!(
            "# schema: quncert.rho.v1\n{}\n{}\n",
            Self::csv_header(),
            self.csv_row()
        )
    }
}

fn pauli_basis() -> Vec<ComplexMatrix> {
    let ops = [
        ComplexMatrix::identity(2),
        crate::linalg::pauli_x(),
        crate::linalg::pauli_y(),
        crate::linalg::pauli_z(),
    ];
    let mut basis = Vec::with_capacity(16);
    for a in &ops {
        for b in &ops {
            basis.push(a.kron(b));
        }
    }
    basis
}

/// Linear (Stokes) reconstruction from exact frequencies.
///
/// Solves the least-squares system mapping the 16 Pauli-product
/// coefficients to the observed setting frequencies. The output is
/// Hermitian and trace-normalized but may be non-PSD; it is returned
/// unvalidated with the `physical` flag set accordingly.
pub fn linear_reconstruct_from_frequencies(
    settings: &[TomographySetting],
    freqs: &[f64],
) -> Result<ReconstructionResult> {
    if settings.len() != freqs.len() {
        return Err(TomographyError::CountMismatch {
            counts: freqs.len(),
            settings: settings.len(),
        });
    }
    let basis = pauli_basis();
    let n = settings.len();
    // Design matrix: a[k][m] = Tr[Pi_k B_m] / 4.
    let mut design = vec![[0.0f64; 16]; n];
    for (k, s) in settings.iter().enumerate() {
        let proj = s.projector();
        for (m, b) in basis.iter().enumerate() {
            design[k][m] = 0.25 * proj.matmul(b).trace().re;
        }
    }
    // Normal equations, solved through the Hermitian Cholesky path.
    let mut ata = ComplexMatrix::zeros(16, 16);
    let mut atf = [0.0f64; 16];
    for k in 0..n {
        for i in 0..16 {
            atf[i] += design[k][i] * freqs[k];
            for j in 0..16 {
                ata[(i, j)] += Complex64::new(design[k][i] * design[k][j], 0.0);
            }
        }
    }
    let l = cholesky(&ata).map_err(|_| TomographyError::UnderdeterminedSettings)?;
    // Forward solve L y = atf, back solve L† x = y.
    let mut y = [0.0f64; 16];
    for i in 0..16 {
        let mut s = atf[i];
        for j in 0..i {
            s -= l[(i, j)].re * y[j];
        }
        y[i] = s / l[(i, i)].re;
    }
    let mut x = [0.0f64; 16];
    for i in (0..16).rev() {
        let mut s = y[i];
        for j in (i + 1)..16 {
            s -= l[(j, i)].re * x[j];
        }
        x[i] = s / l[(i, i)].re;
    }

    let mut rho = ComplexMatrix::zeros(4, 4);
    for (m, b) in basis.iter().enumerate() {
        rho = rho.add(&b.scale(Complex64::new(0.25 * x[m], 0.0)));
    }
    let rho = rho.hermitize();
    let tr = rho.trace().re;
    if tr.abs() < 1e-9 {
        return Err(TomographyError::DegenerateCounts);
    }
    let rho = rho.scale(Complex64::new(1.0 / tr, 0.0));
    let physical = DensityMatrix::validate(rho.clone(), &[2, 2]).is_ok();
    Ok(ReconstructionResult {
        rho_hat: rho,
        method: ReconstructionMethod::Linear,
        log_likelihood: None,
        iterations: 0,
        converged: true,
        physical,
    })
}

/// Linear reconstruction from a count table.
pub fn linear_reconstruct(table: &CountTable) -> Result<ReconstructionResult> {
    linear_reconstruct_from_frequencies(&table.settings, &table.frequencies())
}

/// Poissonian log-likelihood over a Cholesky-style parameterization.
///
/// The state is rho(t) = L L† / Tr(L L†) with L lower triangular: four real
/// diagonal entries followed by six complex off-diagonal entries, sixteen
/// real parameters in all. Exposed for the finite-difference gradient
/// cross-check.
pub struct PoissonLikelihood {
    kets: Vec<Vec<Complex64>>,
    counts: Vec<f64>,
    exposure: f64,
}

/// Lower-triangle coordinates of the 16 parameters: the first four are the
/// real diagonal, the remaining twelve are (re, im) pairs.
const LOWER_COORDS: [(usize, usize); 10] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (1, 0),
    (2, 0),
    (2, 1),
    (3, 0),
    (3, 1),
    (3, 2),
];

/// Assemble the lower-triangular factor from the 16 real parameters.
pub fn factor_from_params(t: &[f64; 16]) -> ComplexMatrix {
    let mut l = ComplexMatrix::zeros(4, 4);
    for (k, &(r, c)) in LOWER_COORDS.iter().enumerate().take(4) {
        l[(r, c)] = Complex64::new(t[k], 0.0);
    }
    for (k, &(r, c)) in LOWER_COORDS.iter().enumerate().skip(4) {
        let idx = 4 + 2 * (k - 4);
        l[(r, c)] = Complex64::new(t[idx], t[idx + 1]);
    }
    l
}

fn params_from_factor(l: &ComplexMatrix) -> [f64; 16] {
    let mut t = [0.0f64; 16];
    for (k, &(r, c)) in LOWER_COORDS.iter().enumerate().take(4) {
        t[k] = l[(r, c)].re;
    }
    for (k, &(r, c)) in LOWER_COORDS.iter().enumerate().skip(4) {
        let idx = 4 + 2 * (k - 4);
        t[idx] = l[(r, c)].re;
        t[idx + 1] = l[(r, c)].im;
    }
    t
}

/// Normalized density matrix rho(t) = L L† / Tr(L L†).
pub fn density_from_params(t: &[f64; 16]) -> ComplexMatrix {
    let l = factor_from_params(t);
    let prod = l.matmul(&l.dagger());
    let tau = prod.trace().re;
    prod.scale(Complex64::new(1.0 / tau, 0.0)).hermitize()
}

impl PoissonLikelihood {
    pub fn new(table: &CountTable) -> Self {
        Self {
            kets: table.settings.iter().map(|s| s.ket()).collect(),
            counts: table.counts.iter().map(|&n| n as f64).collect(),
            exposure: table.exposure,
        }
    }

    fn norms_and_tau(&self, l: &ComplexMatrix) -> (Vec<Vec<Complex64>>, Vec<f64>, f64) {
        let ldag = l.dagger();
        let ws: Vec<Vec<Complex64>> = self.kets.iter().map(|v| ldag.apply(v)).collect();
        let tau: f64 = l.data().iter().map(|z| z.norm_sqr()).sum();
        let norms: Vec<f64> = ws.iter().map(|w| w.iter().map(|z| z.norm_sqr()).sum()).collect();
        (ws, norms, tau)
    }

    /// Log-likelihood sum_k [n_k ln mu_k - mu_k] with mu_k = exposure * p_k.
    pub fn log_likelihood(&self, t: &[f64; 16]) -> f64 {
        let l = factor_from_params(t);
        let (_, norms, tau) = self.norms_and_tau(&l);
        let mut ll = 0.0;
        for (k, &num) in norms.iter().enumerate() {
            let mu = (self.exposure * num / tau).max(1e-300);
            if self.counts[k] > 0.0 {
                ll += self.counts[k] * mu.ln();
            }
            ll -= mu;
        }
        ll
    }

    /// Analytic gradient of the log-likelihood.
    pub fn gradient(&self, t: &[f64; 16]) -> [f64; 16] {
        let l = factor_from_params(t);
        let (ws, norms, tau) = self.norms_and_tau(&l);
        let mut grad = [0.0f64; 16];
        for (k, v) in self.kets.iter().enumerate() {
            let p = norms[k] / tau;
            let mu = (self.exposure * p).max(1e-300);
            let weight = (self.counts[k] / mu - 1.0) * self.exposure;
            let w = &ws[k];
            // d(v† L L† v)/dt for parameter E at (r,c): 2 Re[conj(v_r) w_c]
            // (real part) or -2 Im[conj(v_r) w_c] (imaginary part);
            // d tau/dt = 2 Re L[r][c] or 2 Im L[r][c].
            for (idx, &(r, c)) in LOWER_COORDS.iter().enumerate() {
                let z = v[r].conj() * w[c];
                if idx < 4 {
                    let dnum = 2.0 * z.re;
                    let dtau = 2.0 * l[(r, c)].re;
                    grad[idx] += weight * (dnum - p * dtau) / tau;
                } else {
                    let base = 4 + 2 * (idx - 4);
                    let dnum_re = 2.0 * z.re;
                    let dtau_re = 2.0 * l[(r, c)].re;
                    grad[base] += weight * (dnum_re - p * dtau_re) / tau;
                    let dnum_im = -2.0 * z.im;
                    let dtau_im = 2.0 * l[(r, c)].im;
                    grad[base + 1] += weight * (dnum_im - p * dtau_im) / tau;
                }
            }
        }
        grad
    }
}

fn initial_params(table: &CountTable, init: Option<&DensityMatrix>) -> [f64; 16] {
    let base = match init {
        Some(rho) => rho.mat().clone(),
        None => match linear_reconstruct(table) {
            Ok(res) => {
                // Clamp any negative eigenvalues before factorizing.
                match eig_hermitian(&res.rho_hat) {
                    Ok(spec) => {
                        let clamped: Vec<f64> =
                            spec.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
                        let total: f64 = clamped.iter().sum::<f64>().max(1e-12);
                        let scaled: Vec<f64> = clamped.iter().map(|&l| l / total).collect();
                        spec.recompose(&scaled)
                    }
                    Err(_) => ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)),
                }
            }
            Err(_) => ComplexMatrix::identity(4).scale(Complex64::new(0.25, 0.0)),
        },
    };
    // Blend in a little of the maximally mixed state so the Cholesky factor
    // exists even for rank-deficient starts.
    let eps = 1e-3;
    let blended = base
        .scale(Complex64::new(1.0 - eps, 0.0))
        .add(&ComplexMatrix::identity(4).scale(Complex64::new(eps / 4.0, 0.0)))
        .hermitize();
    match cholesky(&blended) {
        Ok(l) => params_from_factor(&l),
        Err(_) => {
            let l = ComplexMatrix::identity(4).scale(Complex64::new(0.5, 0.0));
            params_from_factor(&l)
        }
    }
}

/// Maximum-likelihood reconstruction over physical states.
///
/// Gradient ascent with backtracking halving on the 16-parameter
/// factorization; stops on log-likelihood improvement below 1e-10,
/// gradient norm below 1e-8, or the 10^4 iteration cap (in which case the
/// best iterate is returned with `converged = false`).
pub fn mle_reconstruct(
    table: &CountTable,
    init: Option<&DensityMatrix>,
) -> Result<ReconstructionResult> {
    if table.counts.len() != table.settings.len() {
        return Err(TomographyError::CountMismatch {
            counts: table.counts.len(),
            settings: table.settings.len(),
        });
    }
    // Fail early when the settings cannot determine a state.
    linear_reconstruct_from_frequencies(
        &table.settings,
        &vec![0.25; table.settings.len()],
    )
    .map_err(|e| match e {
        TomographyError::UnderdeterminedSettings => TomographyError::UnderdeterminedSettings,
        other => other,
    })?;

    let problem = PoissonLikelihood::new(table);
    let mut t = initial_params(table, init);
    let mut ll = problem.log_likelihood(&t);
    let mut iterations = 0;
    let mut converged = false;
    // Barzilai-Borwein secant step with backtracking halving as safeguard;
    // plain fixed-step ascent crawls on the ill-conditioned landscapes near
    // rank-deficient optima.
    let mut prev: Option<([f64; 16], [f64; 16])> = None;
    let mut step = 1e-3;

    while iterations < MLE_MAX_ITERATIONS {
        iterations += 1;
        let grad = problem.gradient(&t);
        let gnorm: f64 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < MLE_GRAD_TOL {
            converged = true;
            break;
        }
        if let Some((tp, gp)) = &prev {
            let mut sy = 0.0;
            let mut yy = 0.0;
            for i in 0..16 {
                let s = t[i] - tp[i];
                let y = gp[i] - grad[i];
                sy += s * y;
                yy += y * y;
            }
            if sy > 1e-300 && yy > 1e-300 {
                step = (sy / yy).clamp(1e-12, 1e6);
            } else {
                step = (step * 2.0).min(1e6);
            }
        }
        prev = Some((t, grad));

        let mut accepted = false;
        for _ in 0..60 {
            let mut cand = t;
            for i in 0..16 {
                cand[i] += step * grad[i];
            }
            let cand_ll = problem.log_likelihood(&cand);
            if cand_ll > ll {
                let improvement = cand_ll - ll;
                t = cand;
                ll = cand_ll;
                accepted = true;
                if improvement < MLE_LL_TOL {
                    converged = true;
                }
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if !accepted {
            // No ascent direction at any step size: numerically at the top.
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }

    let rho = density_from_params(&t);
    let physical = DensityMatrix::validate(rho.clone(), &[2, 2]).is_ok();
    Ok(ReconstructionResult {
        rho_hat: rho,
        method: ReconstructionMethod::Mle,
        log_likelihood: Some(ll),
        iterations,
        converged,
        physical,
    })
}

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let root = sqrt_psd_matrix(rho.mat())?;
    let kernel = root.matmul(sigma.mat()).matmul(&root).hermitize();
    let spec = eig_hermitian(&kernel)?;
    let f: f64 = spec
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Report quantities that Monte Carlo error bars can be attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Fidelity,
    Elhs,
    Erhs1,
    Erhs2,
    Clhs,
    Crhs1,
    Crhs2,
    SAb,
    SB,
    SAGivenB,
    IAb,
    Delta,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Fidelity => "fidelity",
            Quantity::Elhs => "elhs",
            Quantity::Erhs1 => "erhs1",
            Quantity::Erhs2 => "erhs2",
            Quantity::Clhs => "clhs",
            Quantity::Crhs1 => "crhs1",
            Quantity::Crhs2 => "crhs2",
            Quantity::SAb => "s_ab",
            Quantity::SB => "s_b",
            Quantity::SAGivenB => "s_a_given_b",
            Quantity::IAb => "i_ab",
            Quantity::Delta => "delta",
        }
    }

    pub fn extract(&self, report: &UncertaintyReport, fidelity: f64) -> f64 {
        match self {
            Quantity::Fidelity => fidelity,
            Quantity::Elhs => report.elhs,
            Quantity::Erhs1 => report.erhs1,
            Quantity::Erhs2 => report.erhs2,
            Quantity::Clhs => report.clhs,
            Quantity::Crhs1 => report.crhs1,
            Quantity::Crhs2 => report.crhs2,
            Quantity::SAb => report.s_ab,
            Quantity::SB => report.s_b,
            Quantity::SAGivenB => report.s_a_given_b,
            Quantity::IAb => report.i_ab,
            Quantity::Delta => report.delta,
        }
    }

    /// Every quantity, in the order used by sweep output.
    pub fn all() -> Vec<Quantity> {
        vec![
            Quantity::Elhs,
            Quantity::Erhs1,
            Quantity::Erhs2,
            Quantity::Clhs,
            Quantity::Crhs1,
            Quantity::Crhs2,
            Quantity::SAb,
            Quantity::SB,
            Quantity::SAGivenB,
            Quantity::IAb,
            Quantity::Delta,
            Quantity::Fidelity,
        ]
    }
}

/// Sample statistics per selected quantity across Monte Carlo repetitions.
#[derive(Debug, Clone)]
pub struct ErrorBarReport {
    pub quantity_names: Vec<String>,
    pub means: Vec<f64>,
    pub std_devs: Vec<f64>,
    /// Samples entering the statistics (converged reconstructions).
    pub n_samples: usize,
    /// Samples dropped because reconstruction did not converge.
    pub n_failed: usize,
}

/// Repeat simulate -> MLE -> report/fidelity `n_samples` times with derived
/// per-sample seeds; aggregate mean and standard deviation per quantity.
///
/// The uncertainty report is evaluated against the complete qubit MUB set.
/// Samples whose reconstruction fails to converge are counted and excluded.
pub fn monte_carlo_errors(
    rho_true: &DensityMatrix,
    settings: &[TomographySetting],
    exposure: f64,
    n_samples: usize,
    seed: u64,
    quantities: &[Quantity],
    delta_variant: DeltaVariant,
) -> Result<ErrorBarReport> {
    if n_samples < 2 {
        return Err(TomographyError::TooFewSamples(n_samples));
    }
    let mubs = mub_qubit();
    let samples: Vec<Option<Vec<f64>>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let sample_seed = derive_stream_seed(seed, i as u64);
            let table = simulate_counts(rho_true, settings, exposure, sample_seed).ok()?;
            let recon = mle_reconstruct(&table, None).ok()?;
            if !recon.converged {
                return None;
            }
            let rho_hat = recon.density().ok()?;
            let f = fidelity(&rho_hat, rho_true).ok()?;
            let report = uncertainty_report(&rho_hat, &mubs, delta_variant).ok()?;
            Some(quantities.iter().map(|q| q.extract(&report, f)).collect())
        })
        .collect();

    let mut used = 0usize;
    let mut sums = vec![0.0f64; quantities.len()];
    let mut sq_sums = vec![0.0f64; quantities.len()];
    // Stable aggregation in sample-index order.
    for sample in samples.iter().flatten() {
        used += 1;
        for (i, &x) in sample.iter().enumerate() {
            sums[i] += x;
            sq_sums[i] += x * x;
        }
    }
    if used < 2 {
        return Err(TomographyError::TooFewConverged(used));
    }
    let n = used as f64;
    let means: Vec<f64> = sums.iter().map(|s| s / n).collect();
    let std_devs: Vec<f64> = sq_sums
        .iter()
        .zip(&means)
        .map(|(&sq, &m)| ((sq - n * m * m).max(0.0) / (n - 1.0)).sqrt())
        .collect();
    Ok(ErrorBarReport {
        quantity_names: quantities.iter().map(|q| q.name().to_string()).collect(),
        means,
        std_devs,
        n_samples: used,
        n_failed: n_samples - used,
    })
}
