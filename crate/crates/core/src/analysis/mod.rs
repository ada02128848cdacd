//! Two-qubit density matrices, Bell tests and tomography.
//!
//! States live in the basis {HH, HV, VH, VV} with output A in the first slot.

mod bootstrap;
mod chsh;
mod counts;
mod density;
mod io;
mod measurement;
mod tomography;

pub use bootstrap::{error_bars, ErrorBars, Estimator};
pub use chsh::{analyzer_observable, chsh_fixed, chsh_optimal, correlation, correlation_tensor, ChshAngles};
pub use counts::{
    expected_counts, noiseless_counts, poisson, simulate_counts, simulate_counts_with_background,
    subtract_background, trial_rng,
};
pub use density::{fidelity, pauli, trace_distance, DensityMatrix2Q, Ket2Q};
pub use io::{read_density_csv, read_records_csv, write_density_csv, write_records_csv};
pub use measurement::{
    half_wave_plate, overcomplete_settings, quarter_wave_plate, retarder, standard_settings, AnalyzerState,
    MeasurementRecord, MeasurementSetting, Waveplates,
};
pub use tomography::{log_likelihood, tomography_linear, tomography_mle, LinearEstimate, TomographyResult};
