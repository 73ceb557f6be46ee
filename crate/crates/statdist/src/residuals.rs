//! Residual systems comparing a data density to a model density, and the
//! residual adjustment function that governs how a disparity weights them.
//!
//! Zero cells follow one convention throughout: a point carrying no mass
//! under either density gets residual 0, and one-sided zeros produce the
//! extended-real boundary value of each system's range instead of an error.

use crate::densities::DiscreteDensity;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ResidualError {
    #[error("pearson residual {delta} is below -1")]
    DeltaBelowMinusOne { delta: f64 },
    #[error("residual adjustment is undefined at lambda = -1")]
    LambdaUnsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualKind {
    /// tau/m - 1, range [-1, +inf].
    Pearson,
    /// (tau - m)/(tau + m), range [-1, 1].
    Symmetrized,
    /// log(tau/m), range [-inf, +inf].
    Logarithmic,
}

impl ResidualKind {
    /// The closed extended-real range of the residual system.
    pub fn range(self) -> (f64, f64) {
        match self {
            ResidualKind::Pearson => (-1.0, f64::INFINITY),
            ResidualKind::Symmetrized => (-1.0, 1.0),
            ResidualKind::Logarithmic => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

/// One residual per support point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualVector {
    support: Vec<f64>,
    values: Vec<f64>,
    kind: ResidualKind,
}

impl ResidualVector {
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ResidualKind {
        self.kind
    }
}

fn residuals_with(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    kind: ResidualKind,
    cell: impl Fn(f64, f64) -> f64,
) -> ResidualVector {
    let (tau, model) = DiscreteDensity::align(tau, model);
    let values = tau
        .masses()
        .iter()
        .zip(model.masses())
        .map(|(&t, &m)| {
            if t == 0.0 && m == 0.0 {
                0.0
            } else {
                cell(t, m)
            }
        })
        .collect();
    ResidualVector {
        support: tau.support().to_vec(),
        values,
        kind,
    }
}

/// Pearson residuals tau(t)/m(t) - 1. Exactly -1 where tau vanishes,
/// +inf where only the model vanishes.
pub fn pearson_residuals(tau: &DiscreteDensity, model: &DiscreteDensity) -> ResidualVector {
    residuals_with(tau, model, ResidualKind::Pearson, |t, m| {
        if m == 0.0 {
            f64::INFINITY
        } else {
            t / m - 1.0
        }
    })
}

/// Symmetrized residuals (tau - m)/(tau + m), confined to [-1, 1] with the
/// endpoints attained exactly on one-sided zeros.
pub fn symmetrized_residuals(tau: &DiscreteDensity, model: &DiscreteDensity) -> ResidualVector {
    residuals_with(tau, model, ResidualKind::Symmetrized, |t, m| {
        (t - m) / (t + m)
    })
}

/// Logarithmic residuals log(tau/m), extended-real on one-sided zeros.
/// Evaluated as log(tau) - log(m) so swapping the arguments negates the
/// result exactly.
pub fn log_residuals(tau: &DiscreteDensity, model: &DiscreteDensity) -> ResidualVector {
    residuals_with(tau, model, ResidualKind::Logarithmic, |t, m| {
        if t == 0.0 {
            f64::NEG_INFINITY
        } else if m == 0.0 {
            f64::INFINITY
        } else {
            t.ln() - m.ln()
        }
    })
}

/// Residual adjustment function ((1 + delta)^lambda - 1)/(lambda + 1).
/// Defined for delta >= -1; lambda = -1 is rejected because the family has
/// no displayed value there.
pub fn raf(delta: f64, lambda: f64) -> Result<f64, ResidualError> {
    if delta < -1.0 {
        return Err(ResidualError::DeltaBelowMinusOne { delta });
    }
    if lambda == -1.0 {
        return Err(ResidualError::LambdaUnsupported);
    }
    Ok(((1.0 + delta).powf(lambda) - 1.0) / (lambda + 1.0))
}
