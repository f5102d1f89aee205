//! Experiment plumbing: sweep configs, parallel sweeps, lemma batteries, the
//! reference-state reproduction and the CLI.

pub mod cli;
pub mod config;
pub mod example;
pub mod lemmas;
pub mod sweep;

pub use cli::{run, ExitCode};
pub use config::ExperimentConfig;
pub use example::{run_example, ExampleReport};
pub use lemmas::{run_lemmas, LemmaGrid, LemmaSummary};
pub use sweep::{
    csv_header, run_sweep, write_csv, write_csv_file, SweepOutcome, SweepRow, SweepSummary,
};
