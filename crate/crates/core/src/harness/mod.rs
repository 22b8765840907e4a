//! Multi-run campaigns, summary statistics and CSV output.

mod campaign;
mod config;
mod record;

pub use campaign::{derive_seed, run_experiment};
pub use config::{variant_label, Algorithm, Encoding, ExperimentConfig};
pub use record::{
    emit_csv, emit_plot_data, emit_summary_csv, format_fitness, read_records, summarize,
    summarize_values, write_records, RecordWriter, RunRecord, SummaryStats, CSV_HEADER,
};
