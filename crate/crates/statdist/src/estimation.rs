//! Minimum-distance estimation over a parametric family, and contamination
//! sweeps exhibiting how the choice of distance changes the estimator's
//! sensitivity to an outlying cell.

use crate::densities::{contaminate, DensityError, DiscreteDensity, ParametricFamily};
use crate::divergences::{distance, DistanceSpec, DivergenceError, ExtendedDistance};
use crate::optimize::{grid_minimum, simplex_refine};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("every candidate model is at infinite distance from the data")]
    AllDistancesInfinite,
    #[error("generator failed over the whole parameter grid: {0}")]
    GeneratorDomainError(DensityError),
    #[error("invalid distance spec: {0}")]
    Spec(#[from] DivergenceError),
}

/// Knobs for the two-phase search. The defaults are the contract: a 64-point
/// grid per dimension, then simplex refinement until the parameter step is
/// below 1e-6 or 500 refinement evaluations are spent.
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub grid_points_per_dim: usize,
    pub max_refine_evals: usize,
    pub step_tol: f64,
    /// On an all-infinite Neyman-style fit (empty data cells), retry with
    /// the documented blended denominator at alpha = 0.99 instead of
    /// failing. The result is flagged.
    pub fallback_blend: bool,
    pub keep_trace: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            grid_points_per_dim: 64,
            max_refine_evals: 500,
            step_tol: 1e-6,
            fallback_blend: false,
            keep_trace: false,
        }
    }
}

/// The fitted parameter, the distance it attains, and how the search went.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub theta_hat: Vec<f64>,
    pub distance_at_min: ExtendedDistance,
    pub evaluations: usize,
    pub converged: bool,
    pub at_boundary: bool,
    pub used_fallback: bool,
    pub trace: Option<Vec<(Vec<f64>, f64)>>,
}

fn fit_with_spec(
    data: &DiscreteDensity,
    family: &ParametricFamily,
    spec: &DistanceSpec,
    options: &FitOptions,
) -> Result<Option<FitResult>, FitError> {
    let generator_error: std::cell::RefCell<Option<DensityError>> = std::cell::RefCell::new(None);
    let any_generated = std::cell::Cell::new(false);
    let mut objective = |theta: &[f64]| -> f64 {
        match family.generate(theta) {
            Ok(model) => {
                any_generated.set(true);
                match distance(data, &model, spec) {
                    Ok(d) => d.value(),
                    Err(_) => f64::INFINITY,
                }
            }
            Err(e) => {
                generator_error.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        }
    };

    let domain = family.domain().to_vec();
    let (grid_x, grid_f, grid_evals) =
        grid_minimum(&mut objective, &domain, options.grid_points_per_dim);
    if !any_generated.get() {
        return Err(FitError::GeneratorDomainError(
            generator_error
                .borrow_mut()
                .take()
                .expect("grid is nonempty"),
        ));
    }
    if grid_f.is_infinite() {
        return Ok(None);
    }

    let spacing: Vec<f64> = domain
        .iter()
        .map(|&(lo, hi)| (hi - lo) / (options.grid_points_per_dim - 1) as f64)
        .collect();
    let refined = simplex_refine(
        &mut objective,
        &grid_x,
        &spacing,
        &domain,
        options.step_tol,
        options.max_refine_evals,
    );

    // The grid phase dominates: never return anything worse than it found.
    let (theta_hat, converged) = if refined.fx <= grid_f {
        (refined.x.clone(), refined.converged)
    } else {
        (grid_x.clone(), refined.converged)
    };

    let model = family
        .generate(&theta_hat)
        .map_err(FitError::GeneratorDomainError)?;
    let distance_at_min = distance(data, &model, spec)?;
    let at_boundary = theta_hat.iter().zip(&domain).any(|(&t, &(lo, hi))| {
        (t - lo).abs() <= options.step_tol || (hi - t).abs() <= options.step_tol
    });

    let mut trace = None;
    if options.keep_trace {
        let mut t = vec![(grid_x, grid_f)];
        t.extend(refined.trace);
        trace = Some(t);
    }

    Ok(Some(FitResult {
        theta_hat,
        distance_at_min,
        evaluations: grid_evals + refined.evaluations,
        converged,
        at_boundary,
        used_fallback: false,
        trace,
    }))
}

/// Two-phase minimum-distance fit: coarse grid over the parameter box, then
/// derivative-free simplex contraction from the best grid point. Boundary
/// infima are legal results.
pub fn min_distance_fit(
    data: &DiscreteDensity,
    family: &ParametricFamily,
    spec: &DistanceSpec,
    options: &FitOptions,
) -> Result<FitResult, FitError> {
    spec.validate()?;
    if let Some(result) = fit_with_spec(data, family, spec, options)? {
        return Ok(result);
    }
    if options.fallback_blend {
        let fallback = DistanceSpec::BlendedChisq { alpha: 0.99 };
        if let Some(mut result) = fit_with_spec(data, family, &fallback, options)? {
            result.used_fallback = true;
            return Ok(result);
        }
    }
    Err(FitError::AllDistancesInfinite)
}

/// The infimum distance from the data to the model class; +inf when no
/// model is at finite distance.
pub fn distance_to_model(
    data: &DiscreteDensity,
    family: &ParametricFamily,
    spec: &DistanceSpec,
    options: &FitOptions,
) -> Result<ExtendedDistance, FitError> {
    match min_distance_fit(data, family, spec, options) {
        Ok(result) => Ok(result.distance_at_min),
        Err(FitError::AllDistancesInfinite) => Ok(ExtendedDistance::INFINITY),
        Err(e) => Err(e),
    }
}

/// One row of a contamination sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub spec_label: String,
    pub epsilon: f64,
    pub theta_hat: Option<Vec<f64>>,
    /// Euclidean distance from the clean fit of the same spec.
    pub shift: Option<f64>,
    pub converged: bool,
    pub error: Option<String>,
}

/// Fits every spec against the clean density and against each contaminated
/// density (1-eps) clean + eps delta_point, recording the parameter shift.
/// Per-cell fit failures land in the row, not in the result type.
pub fn contamination_sweep(
    clean: &DiscreteDensity,
    family: &ParametricFamily,
    specs: &[DistanceSpec],
    point: f64,
    epsilons: &[f64],
    options: &FitOptions,
) -> Result<Vec<SweepRow>, DensityError> {
    // Validate the contamination arguments once up front.
    contaminate(clean, point, *epsilons.first().unwrap_or(&0.0))?;
    let mut rows = Vec::with_capacity(specs.len() * epsilons.len());
    for spec in specs {
        let baseline = min_distance_fit(clean, family, spec, options);
        let baseline_theta = baseline.as_ref().ok().map(|r| r.theta_hat.clone());
        for &epsilon in epsilons {
            let contaminated = contaminate(clean, point, epsilon)?;
            let row = match (
                min_distance_fit(&contaminated, family, spec, options),
                &baseline_theta,
            ) {
                (Ok(result), Some(theta0)) => {
                    let shift = result
                        .theta_hat
                        .iter()
                        .zip(theta0)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    SweepRow {
                        spec_label: spec.label(),
                        epsilon,
                        theta_hat: Some(result.theta_hat),
                        shift: Some(shift),
                        converged: result.converged,
                        error: None,
                    }
                }
                (Ok(result), None) => SweepRow {
                    spec_label: spec.label(),
                    epsilon,
                    theta_hat: Some(result.theta_hat),
                    shift: None,
                    converged: result.converged,
                    error: Some("baseline fit failed".to_string()),
                },
                (Err(e), _) => SweepRow {
                    spec_label: spec.label(),
                    epsilon,
                    theta_hat: None,
                    shift: None,
                    converged: false,
                    error: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Renders sweep rows in the export format:
/// `spec,epsilon,theta_hat,shift,converged`, one row per fit, with
/// multi-dimensional parameters joined by ';' and failed cells left blank.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut csv = String::from("spec,epsilon,theta_hat,shift,converged\n");
    for row in rows {
        let theta = row
            .theta_hat
            .as_ref()
            .map(|t| {
                t.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default();
        let shift = row.shift.map(|s| s.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.spec_label, row.epsilon, theta, shift, row.converged
        ));
    }
    csv
}
