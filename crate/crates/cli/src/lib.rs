//! Experiment driver: TOML study configs, grid sweeps over `(scheme, m, beta, N)`,
//! CSV tables and log-log SVG plots.

pub mod config;
pub mod run;
pub mod svg;

pub use config::{ConfigError, Mode, RunConfig};
pub use run::{plot_csv, run, RunError, RunOptions, RunSummary, RESULTS_HEADER};
pub use svg::{emit_svg, PlotLabels, ReferenceSlope, Series, SvgError};
