//! Experiment orchestration: seeded parallel sweeps over the criticality
//! parameter, statistical checks of the subcritical and supercritical size
//! laws, and CSV/JSON reporting.

mod config;
mod gap;
mod sweep;
mod verify;

pub use config::{AttrCount, Family, Hypotheses, Outputs, Shape, SweepConfig, Thresholds};
pub use gap::{giant_gap_scan, median, scaling_exponent, GapSummary};
pub use sweep::{
    read_csv, run_sweep, write_csv, write_csv_to, SweepOutput, SweepRecord, SweepReport,
    TrialFailure, CSV_HEADER,
};
pub use verify::{
    verify_theorems, PointCheck, Theorem1Check, Theorem2Check, Theorem3Check, VerificationReport,
};
