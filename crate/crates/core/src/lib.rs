//! Numerics for entropic and coherence uncertainty relations on bipartite
//! qubit states.
//!
//! The crate covers the full pipeline of an all-optical test of these
//! relations: preparation of Bell-like and Bell-like diagonal states,
//! local projective measurement over the complete qubit MUB set, simulated
//! coincidence counting with Poissonian shot noise, density-matrix
//! reconstruction (linear inversion and maximum likelihood), and evaluation
//! of the uncertainty and coherence bounds with their Holevo-strengthened
//! forms, including Monte Carlo error bars.
//!
//! Conventions fixed across the crate:
//! - two-qubit basis order (HH, HV, VH, VV), A-index major;
//! - all logarithms base 2, entropies in bits;
//! - angles in degrees at public boundaries, radians internally.

pub mod infotheory;
pub mod linalg;
pub mod measurement;
pub mod sampling;
pub mod states;
pub mod tomography;

pub use infotheory::{
    conditional_entropy, cur_report, eur_report, holevo_quantity, mutual_information,
    overlap_factor_b, relative_entropy_coherence, shannon_entropy, uncertainty_report,
    unilateral_coherence, von_neumann_entropy, DeltaVariant, UncertaintyReport,
};
pub use linalg::{
    eig_hermitian, matrix_sqrt_psd, partial_trace, tensor_product, validate_density,
    ComplexMatrix, DensityMatrix, Spectrum,
};
pub use measurement::{dephase_global, measure_local, MeasurementOutcomeEnsemble};
pub use states::{
    bell_diagonal_state, bell_like_state, jones_matrix, mub_qubit, projector_from_plate,
    projector_from_plates, BellBranch, PlateKind, ProjectiveMeasurement, PureState, StateParams,
    WavePlate,
};
pub use tomography::{
    fidelity, linear_reconstruct, mle_reconstruct, monte_carlo_errors, simulate_counts,
    standard_settings, CountTable, ErrorBarReport, Quantity, ReconstructionResult, SettingsMode,
    TomographySetting,
};
