//! Seeded simulation sweeps and their output formats.

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_weight_set, DecoderSettings, ExperimentConfig, Variant};
pub use output::{emit_csv, emit_gnuplot, read_csv, write_csv, write_gnuplot, CsvRecord};
pub use sweep::{
    measure_point, run_ber_sweep, run_throughput_sweep, FrameOutcome, LinkSetup, PointTally,
    SweepPoint, SweepResult, TrialPlan,
};
