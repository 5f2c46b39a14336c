//! Configuration-driven runs, random sweeps and reports.

mod config;
mod identities;
mod random;
mod report;
mod suite;

pub use config::{
    default_t_window, load_config, parse_blocks, parse_rational, BasisSpec, Block, ConfigError, Entry,
    FunctionsSpec, HolonomySpec, RunConfig, SampleSpec, Task, Value,
};
pub use identities::{evaluate_points, point_identities, totals, IdentityTotals, PointIdentities};
pub use random::{random_model, random_points, random_rational, sweep_samples, GenerationError, RETRY_CAP};
pub use report::{format_f64, mode_tolerance, Check, ModelSummary, Report, Section, Status};
pub use suite::{basis_checks, holonomy_generators, random_model_sweep, run_points, run_suite, sweep_models, SampledModel, LAW_TOL};
