//! The single-site point process on finite boards and the statistics used
//! to exhibit phase coexistence.

mod chain;
mod render;
mod run;
mod stats;

pub use chain::{vacant_spin, Chain, Init, Kernel};
pub use render::{render, Image, RenderStyle};
pub use run::{decode_state, run, run_replicas, RunConfig, RunStats};
pub use stats::{
    bimodality_report, chi_square, hardcore_bimodality, integrated_time, parity_statistic, stationarity_check,
    wr_dominance, BimodalityReport, ChiSquare, StateFrequency, StationarityReport, WrPoint, WrReport, DIP_WINDOW,
    HISTOGRAM_BINS,
};
