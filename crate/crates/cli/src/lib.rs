//! Command-line front end for `mscale`: CSV ingestion, JSON reports and
//! plot-ready tables.

pub mod app;
pub mod error;
pub mod ingest;
pub mod plot;
pub mod reports;

pub use error::{CliError, CliResult};
pub use ingest::{
    ingest, ingest_str, write_series, ColumnSelector, IngestSpec, Ingested, MissingPolicy,
    Transform,
};
pub use plot::{emit_plot_data, PlotKind};
pub use reports::{AnyReport, EstimateReport, TailsReport};
