//! Presets, scenario files, figure datasets, fuzz campaigns and reports.

pub mod examples;
pub mod figures;
pub mod fuzz;
pub mod presets;
pub mod profile;
pub mod report;
pub mod scenario;

pub use figures::{check_orderings, figure_scenario, generate_figure, FigureData};
pub use fuzz::{run_fuzz, FuzzConfig, FuzzSummary};
pub use presets::Preset;
pub use profile::{pair_profile, ConcurrenceProfile};
pub use report::{emit_report, format_sig, write_report, Format};
pub use scenario::{run_verify, Grid, Scenario, StateSource, Sweep};
