//! Steady-state simulator for photon blockade in a three-mode cavity with a
//! non-degenerate four-wave-mixing interaction.
//!
//! The library builds truncated-Fock-space operators ([`fock`]), assembles the
//! rotating-frame Hamiltonian and dissipation channels ([`model`]), solves the
//! Lindblad master equation for the steady state or by time evolution
//! ([`liouvillian`]), and evaluates equal-time photon correlations g⁽²⁾(0) and
//! g⁽³⁾(0) of the signal mode. On top of that sit closed-form analytics for
//! the conventional and unconventional blockade mechanisms ([`analytics`]),
//! parameter sweeps with CSV/JSON/SVG output ([`sweep`], [`output`]), bundled
//! reference parameter scans ([`presets`]), and a self-check suite
//! ([`acceptance`]).
//!
//! Conventions used throughout:
//! - modes are ordered (a, b, c) with a the slowest-varying index;
//! - all frequencies and rates are quoted in units of a reference decay rate;
//! - density matrices are vectorized by column stacking.

pub mod acceptance;
pub mod analytics;
pub mod fock;
pub mod liouvillian;
pub mod model;
pub mod output;
pub mod presets;
mod sparse;
pub mod sweep;

pub use acceptance::{criterion, run_all, run_subset, CriterionReport, CRITERION_COUNT};
pub use analytics::{
    amplitude_model, amplitude_model_g2, classify, cpb_eigenfrequencies,
    cpb_eigenfrequencies_numerical, upb_optimal_e, upb_optimal_e_general, AmplitudeState,
    AnalyticsError, BlockadeVerdict, ClassifyTolerances, Mechanism,
};
pub use fock::{
    annihilation, creation, expectation, identity, number, FockError, FockOperator, HilbertSpace,
};
pub use liouvillian::{
    build_liouvillian, correlation_g_n, evolve, observables, steady_state, DensityMatrix,
    Observables, SolverError, SolverMethod, SolverOptions, Superoperator,
};
pub use model::{
    bose_einstein_occupation, build_collapse_channels, build_hamiltonian, CollapseChannel,
    ModelError, SystemParams,
};
pub use output::{csv_string, json_string, svg_string, write_outputs, OutputError, CSV_HEADER};
pub use presets::{figure_preset, FigurePreset, PresetCurve, PRESET_NAMES};
pub use sweep::{
    evaluate_point, find_maximum, find_minimum, run_sweep, AxisSpec, Metric, OutputSpec,
    OverlayCurve, Spacing, SweepConfig, SweepError, SweepParam, SweepPoint, SweepResult,
};
