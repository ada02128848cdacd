//! End-to-end source model and scenario runner.

pub mod config;
pub mod manifest;
mod predict;
mod scenarios;

pub use config::{load_config, validate_config, ConfigIssue, SourceConfig};
pub use manifest::{manifest, Check, CheckKind, Manifest, ManifestRow, PublishedValues, Status};
pub use predict::{
    dephased_coincidence_state, predict_state, predict_with_spectrum, shg_pair, spectral_model, CoherenceFactors,
    PredictedState, SpectralModel, StateMetrics,
};
pub use scenarios::{
    cw_variant, pulsed_variant, run_scenario, werner_line_chsh, RunOptions, Scenario, ScenarioReport,
};
