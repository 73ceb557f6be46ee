//! The discrete distance catalogue: power divergences, the generalized /
//! blended / symmetric chi-squared family, Kullback-Leibler, squared
//! Hellinger and the blended weighted Hellinger distances, plus the
//! extremal-function and Bayes-testing quantities attached to them.
//!
//! Zero-cell conventions, applied uniformly: 0 * log 0 = 0, a positive mass
//! over a zero denominator is +inf, and a 0/0 cell contributes 0. Distances
//! return extended reals; +inf is a value, not an error.

use crate::densities::DiscreteDensity;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DivergenceError {
    #[error("blend weight alpha = {alpha} outside {allowed}")]
    AlphaOutOfRange { alpha: f64, allowed: &'static str },
    #[error("distance is zero: the extremal function is undefined")]
    ZeroDistance,
    #[error("distance is infinite: the extremal function is undefined")]
    InfiniteDistance,
    #[error("h has zero variance under the weighting density")]
    ZeroVariance,
    #[error("h has {got} entries but the aligned support has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A nonnegative distance value that may be +inf.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ExtendedDistance(f64);

impl ExtendedDistance {
    pub const INFINITY: Self = Self(f64::INFINITY);

    pub fn new(value: f64) -> Self {
        debug_assert!(value >= -1e-9, "distance fell below zero: {value}");
        Self(value.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl std::fmt::Display for ExtendedDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "inf")
        }
    }
}

/// Tagged choice of distance family plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceSpec {
    PowerDivergence { lambda: f64 },
    GeneralizedChisq { denominator: DiscreteDensity },
    BlendedChisq { alpha: f64 },
    SymmetricChisq,
    PearsonChisq,
    NeymanChisq,
    KullbackLeibler,
    SquaredHellinger,
    Bwhd { alpha: f64 },
}

impl DistanceSpec {
    pub fn label(&self) -> String {
        match self {
            DistanceSpec::PowerDivergence { lambda } => {
                format!("power-divergence(lambda={lambda})")
            }
            DistanceSpec::GeneralizedChisq { .. } => "generalized-chisq".to_string(),
            DistanceSpec::BlendedChisq { alpha } => format!("blended-chisq(alpha={alpha})"),
            DistanceSpec::SymmetricChisq => "symmetric-chisq".to_string(),
            DistanceSpec::PearsonChisq => "pearson".to_string(),
            DistanceSpec::NeymanChisq => "neyman".to_string(),
            DistanceSpec::KullbackLeibler => "kl".to_string(),
            DistanceSpec::SquaredHellinger => "hellinger-squared".to_string(),
            DistanceSpec::Bwhd { alpha } => format!("bwhd(alpha={alpha})"),
        }
    }

    pub fn validate(&self) -> Result<(), DivergenceError> {
        match *self {
            DistanceSpec::BlendedChisq { alpha } if !(0.0..=1.0).contains(&alpha) => {
                Err(DivergenceError::AlphaOutOfRange {
                    alpha,
                    allowed: "[0, 1]",
                })
            }
            DistanceSpec::Bwhd { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                Err(DivergenceError::AlphaOutOfRange {
                    alpha,
                    allowed: "(0, 1)",
                })
            }
            _ => Ok(()),
        }
    }
}

/// Dispatches to the family-specific operation.
pub fn distance(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    spec: &DistanceSpec,
) -> Result<ExtendedDistance, DivergenceError> {
    spec.validate()?;
    Ok(match spec {
        DistanceSpec::PowerDivergence { lambda } => power_divergence(tau, model, *lambda),
        DistanceSpec::GeneralizedChisq { denominator } => {
            generalized_chisq(tau, model, denominator)
        }
        DistanceSpec::BlendedChisq { alpha } => blended_chisq(tau, model, *alpha)?,
        DistanceSpec::SymmetricChisq => symmetric_chisq(tau, model),
        DistanceSpec::PearsonChisq => generalized_chisq(tau, model, model),
        DistanceSpec::NeymanChisq => generalized_chisq(tau, model, tau),
        DistanceSpec::KullbackLeibler => kl_divergence(tau, model),
        DistanceSpec::SquaredHellinger => squared_hellinger(tau, model),
        DistanceSpec::Bwhd { alpha } => bwhd_squared(tau, model, *alpha)?,
    })
}

fn aligned_sum(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    cell: impl Fn(f64, f64) -> f64,
) -> f64 {
    let (tau, model) = DiscreteDensity::align(tau, model);
    tau.masses()
        .iter()
        .zip(model.masses())
        .map(|(&t, &m)| {
            if t == 0.0 && m == 0.0 {
                0.0
            } else {
                cell(t, m)
            }
        })
        .sum()
}

/// The one-parameter power divergence family
/// (1/(lambda (lambda+1))) sum tau [(tau/m)^lambda - 1].
///
/// lambda = 0 and lambda = -1 are removable singularities evaluated by their
/// analytic limits, the likelihood disparity sum tau log(tau/m) and
/// sum m log(m/tau); nearby lambdas go through the generic formula, and the
/// verification suites confirm the two routes agree in the limit.
pub fn power_divergence(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    lambda: f64,
) -> ExtendedDistance {
    if lambda == 0.0 {
        return likelihood_disparity(tau, model);
    }
    if lambda == -1.0 {
        return kl_divergence(tau, model);
    }
    let scale = 1.0 / (lambda * (lambda + 1.0));
    let sum = aligned_sum(tau, model, |t, m| {
        if m == 0.0 {
            // t > 0: (t/0)^lambda is +inf for lambda > 0 and 0 for lambda < 0.
            if lambda > 0.0 {
                f64::INFINITY
            } else {
                -t
            }
        } else if t == 0.0 {
            // t^(lambda+1) m^(-lambda): 0 for lambda > -1, +inf for lambda < -1.
            if lambda < -1.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            t * ((t / m).powf(lambda) - 1.0)
        }
    });
    ExtendedDistance::new(sum * scale)
}

/// Likelihood disparity sum tau log(tau/m): the lambda -> 0 limit of the
/// power divergence family.
pub fn likelihood_disparity(tau: &DiscreteDensity, model: &DiscreteDensity) -> ExtendedDistance {
    ExtendedDistance::new(aligned_sum(tau, model, |t, m| {
        if t == 0.0 {
            0.0
        } else if m == 0.0 {
            f64::INFINITY
        } else {
            t * (t / m).ln()
        }
    }))
}

/// Kullback-Leibler divergence sum m(x) [log m(x) - log tau(x)].
///
/// The expectation is taken under the model density `m`, the reverse of the
/// more common orientation; callers comparing against other libraries should
/// swap arguments accordingly.
pub fn kl_divergence(tau: &DiscreteDensity, model: &DiscreteDensity) -> ExtendedDistance {
    ExtendedDistance::new(aligned_sum(tau, model, |t, m| {
        if m == 0.0 {
            0.0
        } else if t == 0.0 {
            f64::INFINITY
        } else {
            m * (m / t).ln()
        }
    }))
}

/// Generalized chi-squared sum (tau - m)^2 / a against a weighting density.
pub fn generalized_chisq(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    weight: &DiscreteDensity,
) -> ExtendedDistance {
    let (tau, model) = DiscreteDensity::align(tau, model);
    let sum = tau
        .support()
        .iter()
        .zip(tau.masses().iter().zip(model.masses()))
        .map(|(&point, (&t, &m))| chisq_cell(t, m, weight.mass_at(point)))
        .sum();
    ExtendedDistance::new(sum)
}

fn chisq_cell(t: f64, m: f64, a: f64) -> f64 {
    let diff = t - m;
    if diff == 0.0 {
        0.0
    } else if a == 0.0 {
        f64::INFINITY
    } else {
        diff * diff / a
    }
}

/// Generalized chi-squared with the blend denominator
/// alpha tau + (1 - alpha) m. alpha = 0 is Pearson, alpha = 1 is Neyman,
/// alpha = 1/2 is the symmetric chi-squared.
pub fn blended_chisq(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    alpha: f64,
) -> Result<ExtendedDistance, DivergenceError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(DivergenceError::AlphaOutOfRange {
            alpha,
            allowed: "[0, 1]",
        });
    }
    Ok(ExtendedDistance::new(aligned_sum(tau, model, |t, m| {
        chisq_cell(t, m, alpha * t + (1.0 - alpha) * m)
    })))
}

/// Symmetric chi-squared sum 2 (tau - m)^2 / (tau + m), a genuine metric
/// bounded by 4, attained exactly when the densities are mutually singular.
pub fn symmetric_chisq(tau: &DiscreteDensity, model: &DiscreteDensity) -> ExtendedDistance {
    ExtendedDistance::new(aligned_sum(tau, model, |t, m| {
        let diff = t - m;
        2.0 * diff * diff / (t + m)
    }))
}

/// Squared Hellinger distance (1/2) sum (sqrt tau - sqrt m)^2, in [0, 1].
pub fn squared_hellinger(tau: &DiscreteDensity, model: &DiscreteDensity) -> ExtendedDistance {
    ExtendedDistance::new(aligned_sum(tau, model, |t, m| {
        let diff = t.sqrt() - m.sqrt();
        0.5 * diff * diff
    }))
}

/// Squared blended weighted Hellinger distance
/// sum (tau - m)^2 / (2 [alpha sqrt(tau) + (1-alpha) sqrt(m)]^2),
/// for alpha strictly inside (0, 1). At alpha = 1/2 this collapses to
/// 2 sum (sqrt tau - sqrt m)^2 = 4 H^2, the same value as the
/// power divergence at lambda = -1/2.
pub fn bwhd_squared(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    alpha: f64,
) -> Result<ExtendedDistance, DivergenceError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(DivergenceError::AlphaOutOfRange {
            alpha,
            allowed: "(0, 1)",
        });
    }
    Ok(ExtendedDistance::new(aligned_sum(tau, model, |t, m| {
        let w = alpha * t.sqrt() + (1.0 - alpha) * m.sqrt();
        let diff = t - m;
        diff * diff / (2.0 * w * w)
    })))
}

fn align_three(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    weight: &DiscreteDensity,
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let (tau, model) = DiscreteDensity::align(tau, model);
    let support = crate::densities::merge_supports(tau.support(), weight.support());
    let t = support.iter().map(|&p| tau.mass_at(p)).collect();
    let m = support.iter().map(|&p| model.mass_at(p)).collect();
    let a = support.iter().map(|&p| weight.mass_at(p)).collect();
    (support, t, m, a)
}

/// The standardized function with the largest mean separation between tau
/// and m: h(t) = (tau - m)/(a sqrt(chi^2_a)). Its variance under `weight`
/// is 1 and its mean gap equals sqrt(chi^2_a).
///
/// The returned values live on the union of all three supports in
/// ascending order, the same alignment [`mean_separation`] expects.
pub fn extremal_function(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    weight: &DiscreteDensity,
) -> Result<Vec<f64>, DivergenceError> {
    let chisq = generalized_chisq(tau, model, weight);
    if !chisq.is_finite() {
        return Err(DivergenceError::InfiniteDistance);
    }
    if chisq.value() == 0.0 {
        return Err(DivergenceError::ZeroDistance);
    }
    let root = chisq.value().sqrt();
    let (_, t, m, a) = align_three(tau, model, weight);
    Ok(t.iter()
        .zip(m.iter().zip(&a))
        .map(
            |(&t, (&m, &a))| {
                if t == m {
                    0.0
                } else {
                    (t - m) / (a * root)
                }
            },
        )
        .collect())
}

/// The standardized mean-separation ratio
/// {E_tau h - E_m h}^2 / Var_a(h), never exceeding the generalized
/// chi-squared with the same weighting density.
///
/// `h` must have one entry per point of the aligned union support, in
/// ascending order; anything else is a [`DivergenceError::LengthMismatch`].
pub fn mean_separation(
    h: &[f64],
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    weight: &DiscreteDensity,
) -> Result<f64, DivergenceError> {
    let (support, t, m, a) = align_three(tau, model, weight);
    if h.len() != support.len() {
        return Err(DivergenceError::LengthMismatch {
            expected: support.len(),
            got: h.len(),
        });
    }
    // Center h under the weighting density first: the gap is invariant and
    // the variance becomes a sum of nonnegative terms, so a nearly constant
    // h cannot push the ratio past the supremum through cancellation.
    let mean_a: f64 = h.iter().zip(&a).map(|(&h, &a)| h * a).sum();
    let centered: Vec<f64> = h.iter().map(|&h| h - mean_a).collect();
    let variance: f64 = centered.iter().zip(&a).map(|(&h, &a)| h * h * a).sum();
    if variance <= 0.0 {
        return Err(DivergenceError::ZeroVariance);
    }
    let gap: f64 = centered
        .iter()
        .zip(t.iter().zip(&m))
        .map(|(&h, (&t, &m))| h * (t - m))
        .sum();
    Ok(gap * gap / variance)
}

/// The optimal test function for separating f from g under equal priors and
/// squared-error loss: the posterior probability g/(f + g) that the
/// alternative is correct. 0/0 cells return 1/2.
pub fn bayes_test_function(f: &DiscreteDensity, g: &DiscreteDensity) -> Vec<f64> {
    let (f, g) = DiscreteDensity::align(f, g);
    f.masses()
        .iter()
        .zip(g.masses())
        .map(|(&f, &g)| {
            if f == 0.0 && g == 0.0 {
                0.5
            } else {
                g / (f + g)
            }
        })
        .collect()
}

/// The minimum Bayes risk (1/4)(1 - S^2/4) of the testing problem above,
/// always in [0, 1/4].
pub fn bayes_risk(f: &DiscreteDensity, g: &DiscreteDensity) -> f64 {
    0.25 * (1.0 - symmetric_chisq(f, g).value() / 4.0)
}

/// The same risk through the other route in the identity,
/// (1/2) sum f g / (f + g). The two expressions agree to float precision.
pub fn bayes_risk_overlap_form(f: &DiscreteDensity, g: &DiscreteDensity) -> f64 {
    aligned_sum(f, g, |f, g| 0.5 * f * g / (f + g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_pair() -> (DiscreteDensity, DiscreteDensity) {
        (
            DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(),
            DiscreteDensity::new(vec![0.0, 1.0], vec![0.25, 0.75]).unwrap(),
        )
    }

    fn singular_pair() -> (DiscreteDensity, DiscreteDensity) {
        (
            DiscreteDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap(),
            DiscreteDensity::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap(),
        )
    }

    #[test]
    fn power_divergence_special_values() {
        let (tau, m) = running_pair();
        // Pearson = 1/3 and Neyman = 1/4 by direct sums.
        assert!((power_divergence(&tau, &m, 1.0).value() - 1.0 / 6.0).abs() < 1e-12);
        assert!((power_divergence(&tau, &m, -2.0).value() - 0.125).abs() < 1e-12);
        assert_eq!(power_divergence(&tau, &tau, 0.7).value(), 0.0);
    }

    #[test]
    fn power_divergence_zero_cells() {
        let tau = DiscreteDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let m = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        // Model mass on an empty data cell: +inf for lambda < -1.
        assert!(!power_divergence(&tau, &m, -2.0).is_finite());
        // Data mass on an empty model cell: +inf for lambda > 0.
        assert!(!power_divergence(&m, &tau, 1.0).is_finite());
        // Finite for lambda in (-1, 0).
        assert!(power_divergence(&tau, &m, -0.5).is_finite());
    }

    #[test]
    fn generalized_reproduces_pearson_and_neyman() {
        let (tau, m) = running_pair();
        assert!((generalized_chisq(&tau, &m, &m).value() - 1.0 / 3.0).abs() < 1e-12);
        assert!((generalized_chisq(&tau, &m, &tau).value() - 0.25).abs() < 1e-12);
        assert_eq!(generalized_chisq(&tau, &tau, &m).value(), 0.0);
    }

    #[test]
    fn blended_endpoints_and_midpoint() {
        let (tau, m) = running_pair();
        assert!((blended_chisq(&tau, &m, 0.0).unwrap().value() - 1.0 / 3.0).abs() < 1e-12);
        assert!((blended_chisq(&tau, &m, 1.0).unwrap().value() - 0.25).abs() < 1e-12);
        let s2 = symmetric_chisq(&tau, &m).value();
        assert!((blended_chisq(&tau, &m, 0.5).unwrap().value() - s2).abs() < 1e-15);
        assert!((s2 - 4.0 / 15.0).abs() < 1e-12);
        assert!(matches!(
            blended_chisq(&tau, &m, 1.5),
            Err(DivergenceError::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn symmetric_chisq_ceiling() {
        let (f, g) = singular_pair();
        assert!((symmetric_chisq(&f, &g).value() - 4.0).abs() < 1e-15);
        assert_eq!(symmetric_chisq(&f, &f).value(), 0.0);
    }

    #[test]
    fn kl_follows_model_side_convention() {
        let (tau, m) = running_pair();
        let expected = 0.25 * 0.5f64.ln() + 0.75 * 1.5f64.ln();
        assert!((kl_divergence(&tau, &m).value() - expected).abs() < 1e-12);
        assert!((expected - 0.130812).abs() < 1e-6);
        assert_eq!(kl_divergence(&tau, &tau).value(), 0.0);

        let tau = DiscreteDensity::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let m = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(!kl_divergence(&tau, &m).is_finite());
    }

    #[test]
    fn hellinger_values() {
        let (tau, m) = running_pair();
        let h2 = squared_hellinger(&tau, &m).value();
        let expected = 1.0 - (0.5f64 * 0.25).sqrt() - (0.5f64 * 0.75).sqrt();
        assert!((h2 - expected).abs() < 1e-12);
        assert!((h2 - 0.0340742).abs() < 1e-6);

        let (f, g) = singular_pair();
        assert!((squared_hellinger(&f, &g).value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hellinger_ratio_form_agrees() {
        let (tau, m) = running_pair();
        let direct = squared_hellinger(&tau, &m).value();
        let ratio = aligned_sum(&tau, &m, |t, m| {
            let w = t.sqrt() + m.sqrt();
            0.5 * (t - m) * (t - m) / (w * w)
        });
        assert!((direct - ratio).abs() < 1e-12);
    }

    #[test]
    fn bwhd_values() {
        let (tau, m) = running_pair();
        let h2 = squared_hellinger(&tau, &m).value();
        let b = bwhd_squared(&tau, &m, 0.5).unwrap().value();
        assert!((b - 4.0 * h2).abs() < 1e-12);
        let pd = power_divergence(&tau, &m, -0.5).value();
        assert!((b - pd).abs() < 1e-12);
        assert_eq!(bwhd_squared(&tau, &tau, 0.3).unwrap().value(), 0.0);

        // Mutually singular: each cell contributes 1 / (2 alpha^2) with the
        // whole mass on one side, so alpha = 1/2 gives 2 + 2.
        let (f, g) = singular_pair();
        assert!((bwhd_squared(&f, &g, 0.5).unwrap().value() - 4.0).abs() < 1e-12);

        assert!(matches!(
            bwhd_squared(&tau, &m, 1.0),
            Err(DivergenceError::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn extremal_function_attains_the_distance() {
        let (tau, m) = running_pair();
        let h = extremal_function(&tau, &m, &m).unwrap();
        assert!((h[0] - 3.0f64.sqrt()).abs() < 1e-12);
        assert!((h[1] + 1.0 / 3.0f64.sqrt()).abs() < 1e-12);

        let chisq = generalized_chisq(&tau, &m, &m).value();
        let gap: f64 = h.iter().zip([0.25, -0.25]).map(|(&h, d)| h * d).sum();
        assert!((gap - chisq.sqrt()).abs() < 1e-12);

        let sep = mean_separation(&h, &tau, &m, &m).unwrap();
        assert!((sep - chisq).abs() < 1e-12);

        assert_eq!(
            extremal_function(&tau, &tau, &m).unwrap_err(),
            DivergenceError::ZeroDistance
        );

        // A weighting density with no mass where tau and m disagree makes
        // the distance infinite and the extremal function undefined.
        let weight = DiscreteDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let spread = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let peaked = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5 - 0.2, 0.7]).unwrap();
        assert_eq!(
            extremal_function(&spread, &peaked, &weight).unwrap_err(),
            DivergenceError::InfiniteDistance
        );
    }

    #[test]
    fn mean_separation_two_point_support() {
        let (tau, m) = running_pair();
        let sep = mean_separation(&[1.0, 0.0], &tau, &m, &m).unwrap();
        assert!((sep - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(
            mean_separation(&[2.0, 2.0], &tau, &m, &m).unwrap_err(),
            DivergenceError::ZeroVariance
        );
    }

    #[test]
    fn bayes_quantities() {
        let (f, g) = running_pair();
        let phi = bayes_test_function(&f, &g);
        assert!((phi[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((phi[1] - 0.6).abs() < 1e-12);

        assert_eq!(bayes_test_function(&f, &f), vec![0.5, 0.5]);
        let (a, b) = singular_pair();
        assert_eq!(bayes_test_function(&a, &b), vec![0.0, 1.0]);

        assert!((bayes_risk(&f, &f) - 0.25).abs() < 1e-15);
        assert!((bayes_risk(&f, &g) - (0.25 * (1.0 - (4.0 / 15.0) / 4.0))).abs() < 1e-12);
        assert!((bayes_risk(&a, &b) - 0.0).abs() < 1e-15);

        assert!((bayes_risk(&f, &g) - bayes_risk_overlap_form(&f, &g)).abs() < 1e-12);
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let (tau, m) = running_pair();
        let s2 = distance(&tau, &m, &DistanceSpec::SymmetricChisq).unwrap();
        assert!((s2.value() - 4.0 / 15.0).abs() < 1e-12);
        let pd = distance(&tau, &m, &DistanceSpec::PowerDivergence { lambda: 1.0 }).unwrap();
        assert!((pd.value() - 1.0 / 6.0).abs() < 1e-12);
        let kl = distance(&tau, &tau, &DistanceSpec::KullbackLeibler).unwrap();
        assert_eq!(kl.value(), 0.0);
    }

    #[test]
    fn extended_distance_display() {
        assert_eq!(ExtendedDistance::new(0.25).to_string(), "0.25");
        assert_eq!(ExtendedDistance::INFINITY.to_string(), "inf");
    }
}
