//! Schreier graphs of finite-index subgroups of free groups, spectral radii of the Markov
//! averaging operator, and Benjamini–Schramm statistics of rooted balls.

mod cayley;
mod fixtures;
mod local;
mod radius;
mod report;
mod schreier;

pub use cayley::{cayley_spectral_radius_estimate, schur_upper, truncated_lower, CayleyInterval};
pub use fixtures::{cycle_kernel, cycle_rho0};
pub use local::{
    ball_key, bs_distance_to_cayley, bs_local_statistics, non_tree_fraction, tree_ball_key, BallKey,
    LocalBallStatistics,
};
pub use radius::{markov_spectral_radius_rho0, rho0_dense, rho0_power, DENSE_LIMIT, MAX_ITERATIONS, WINDOW};
pub use report::{local_approximation_report, LocalApproximationReport, ReportRow, REPORT_CAYLEY_RADIUS, TRAILING_WINDOW};
pub use schreier::SchreierGraph;
