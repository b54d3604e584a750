//! Toric Hermitian Ricci-flat ALF instantons built from convex
//! piecewise-linear rod functions.
//!
//! A rod function `f(z) = A + Σ a_i |z - z_i|` determines an axisymmetric
//! harmonic potential `U`, and from it a Ricci-flat metric in Harmark form,
//! a conformal Kähler metric, a moment polytope, and its lattice data.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod blowup;
pub mod classify;
pub mod curvature;
pub mod delzant;
pub mod error;
pub mod examples;
pub mod metric;
pub mod plf;
pub mod polytope;
pub mod potential;
pub mod verify;

pub use blowup::{blow_up, inserted_edge, BlowupRequest, InsertedEdge};
pub use classify::{classify_smooth, classify_smooth_with, Classification, SmoothFamily};
pub use curvature::{ricci_fd, scal_kahler_fd, CurvatureReport, FdOptions};
pub use delzant::{delzant_check, solve_cone_angles_general, solve_cone_angles_r2, AngleSolution, DelzantReport};
pub use error::{Error, Result};
pub use examples::{make_example, Example};
pub use metric::{kahler_sample, moment_map, tod_metric, tod_metric_in, KahlerSample, MetricSample, Moments};
pub use plf::{Kink, RodFunction, RodValue};
pub use polytope::{edge_normals, lattice_coords, polytope_vertices, rod_constants, PolytopeData, RodStructure};
pub use potential::{axis_limits, potential_eval, potential_eval_in, AxisLimits, Gauge, PotentialSample};
pub use verify::{verify_suite, CheckResult, GridConfig, VerificationReport};
