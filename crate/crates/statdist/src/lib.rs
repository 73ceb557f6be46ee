//! Statistical distances between probability distributions and the machinery
//! built on top of them: residual diagnostics, minimum-distance estimation,
//! kernel-smoothed and quadratic-form distances, and distribution-function
//! distances (Kolmogorov-Smirnov, L2).
//!
//! The discrete catalogue covers the chi-squared family (Pearson, Neyman,
//! blended, symmetric, generalized), the power-divergence family, the
//! Kullback-Leibler divergence, squared Hellinger, and the blended weighted
//! Hellinger distances, together with their extremal-function, testing, and
//! Bayes-risk interpretations. Every structural claim the library relies on
//! (metric axioms, sandwich bounds, sup characterizations, quadratic-form
//! equivalences, robustness contrasts) is runnable as a seeded verification
//! suite via [`suites`].

pub mod cdf_distances;
pub mod densities;
pub mod divergences;
pub mod estimation;
pub mod io;
pub mod optimize;
pub mod quadratic;
pub mod quadrature;
pub mod residuals;
pub mod suites;

pub use cdf_distances::{ks_distance, ks_testing_gap, l2_density_distance, MonotoneMap};
pub use densities::{
    contaminate, discretize, empirical_density, ContinuousDistribution, DiscreteDensity,
    Distribution, Normal, ParametricFamily, Sample, Uniform,
};
pub use divergences::{distance, DistanceSpec, ExtendedDistance};
pub use estimation::{
    contamination_sweep, distance_to_model, min_distance_fit, FitOptions, FitResult,
};
pub use quadratic::{
    locally_quadratic_distance, pearson_kernel, smooth_density, smoothed_bwhd, smoothed_pearson,
    smoothed_pearson_kernel, KernelShape, QuadraticKernel, SmoothingKernel,
};
pub use residuals::{log_residuals, pearson_residuals, raf, symmetrized_residuals, ResidualVector};
