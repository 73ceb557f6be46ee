//! Probability objects consumed by every other module: finite discrete
//! densities, raw samples, continuous distributions, and parametric families.
//!
//! All values are immutable after construction and all operations are pure.

use thiserror::Error;

/// Tolerance on the total mass of a discrete density at construction.
pub const MASS_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    #[error("negative mass {mass} at index {index}")]
    NegativeMass { index: usize, mass: f64 },
    #[error("masses sum to {sum}, outside tolerance {tol} of 1")]
    MassSumOutOfTolerance { sum: f64, tol: f64 },
    #[error("duplicate support point {point}")]
    DuplicateSupportPoint { point: f64 },
    #[error("support not strictly increasing at index {index}")]
    UnsortedSupport { index: usize },
    #[error("support has {support} points but {masses} masses were given")]
    LengthMismatch { support: usize, masses: usize },
    #[error("support point must be finite, got {point}")]
    NonFiniteSupport { point: f64 },
    #[error("sample value {value} is not a support point")]
    ValueOutsideSupport { value: f64 },
    #[error("sample is empty")]
    EmptySample,
    #[error("contamination point {point} is not a support point")]
    PointNotInSupport { point: f64 },
    #[error("epsilon {epsilon} outside [0, 1]")]
    EpsilonOutOfRange { epsilon: f64 },
    #[error("discretization grid is empty")]
    EmptyGrid,
    #[error("discretization grid not strictly increasing at index {index}")]
    UnsortedGrid { index: usize },
}

/// A probability mass function on a finite, strictly increasing support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDensity {
    support: Vec<f64>,
    masses: Vec<f64>,
}

impl DiscreteDensity {
    /// Validates and constructs a density. Masses must be nonnegative and sum
    /// to 1 within [`MASS_SUM_TOL`]; the support must be strictly increasing.
    /// No renormalization happens here — see [`DiscreteDensity::new_renormalized`].
    pub fn new(support: Vec<f64>, masses: Vec<f64>) -> Result<Self, DensityError> {
        Self::validate_support(&support)?;
        if support.len() != masses.len() {
            return Err(DensityError::LengthMismatch {
                support: support.len(),
                masses: masses.len(),
            });
        }
        for (index, &mass) in masses.iter().enumerate() {
            if mass.is_nan() || mass < 0.0 {
                return Err(DensityError::NegativeMass { index, mass });
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > MASS_SUM_TOL {
            return Err(DensityError::MassSumOutOfTolerance {
                sum,
                tol: MASS_SUM_TOL,
            });
        }
        Ok(Self { support, masses })
    }

    /// Like [`DiscreteDensity::new`] but divides the masses by their sum
    /// first. The explicit constructor keeps renormalization opt-in; silent
    /// rescaling would hide data errors.
    pub fn new_renormalized(support: Vec<f64>, mut masses: Vec<f64>) -> Result<Self, DensityError> {
        Self::validate_support(&support)?;
        if support.len() != masses.len() {
            return Err(DensityError::LengthMismatch {
                support: support.len(),
                masses: masses.len(),
            });
        }
        for (index, &mass) in masses.iter().enumerate() {
            if mass.is_nan() || mass < 0.0 {
                return Err(DensityError::NegativeMass { index, mass });
            }
        }
        let sum: f64 = masses.iter().sum();
        if sum <= 0.0 {
            return Err(DensityError::MassSumOutOfTolerance {
                sum,
                tol: MASS_SUM_TOL,
            });
        }
        for mass in &mut masses {
            *mass /= sum;
        }
        Ok(Self { support, masses })
    }

    fn validate_support(support: &[f64]) -> Result<(), DensityError> {
        for &point in support {
            if !point.is_finite() {
                return Err(DensityError::NonFiniteSupport { point });
            }
        }
        for (index, window) in support.windows(2).enumerate() {
            if window[0] == window[1] {
                return Err(DensityError::DuplicateSupportPoint { point: window[0] });
            }
            if window[0] > window[1] {
                return Err(DensityError::UnsortedSupport { index: index + 1 });
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Index of an exact support point, if present.
    pub fn index_of(&self, point: f64) -> Option<usize> {
        self.support
            .binary_search_by(|probe| probe.partial_cmp(&point).unwrap())
            .ok()
    }

    /// Mass at an exact support point; 0 off the support.
    pub fn mass_at(&self, point: f64) -> f64 {
        self.index_of(point).map_or(0.0, |i| self.masses[i])
    }

    /// Right-continuous CDF: P(X <= x).
    pub fn cdf(&self, x: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.masses)
            .take_while(|(&t, _)| t <= x)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Left limit of the CDF: P(X < x).
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.masses)
            .take_while(|(&t, _)| t < x)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Puts two densities on the union of their supports, zero-filling the
    /// missing masses. Every binary operation in the library aligns first so
    /// that both densities live on a common sample space.
    pub fn align(a: &Self, b: &Self) -> (Self, Self) {
        let support = merge_supports(&a.support, &b.support);
        let a_masses = support.iter().map(|&t| a.mass_at(t)).collect();
        let b_masses = support.iter().map(|&t| b.mass_at(t)).collect();
        (
            Self {
                support: support.clone(),
                masses: a_masses,
            },
            Self {
                support,
                masses: b_masses,
            },
        )
    }
}

pub(crate) fn merge_supports(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            merged.push(a[i]);
            i += 1;
        } else if b[j] < a[i] {
            merged.push(b[j]);
            j += 1;
        } else {
            merged.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    merged
}

/// Raw realizations x_1..x_n.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self, DensityError> {
        if values.is_empty() {
            return Err(DensityError::EmptySample);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Relative frequencies n(t)/n over the given support. Every sample value
/// must be a support point; unobserved support points get mass 0. Counts are
/// integers, so each mass is an exact multiple of 1/n.
pub fn empirical_density(
    sample: &Sample,
    support: &[f64],
) -> Result<DiscreteDensity, DensityError> {
    DiscreteDensity::validate_support(support)?;
    let mut counts = vec![0u64; support.len()];
    for &value in sample.values() {
        let index = support
            .binary_search_by(|probe| probe.partial_cmp(&value).unwrap())
            .map_err(|_| DensityError::ValueOutsideSupport { value })?;
        counts[index] += 1;
    }
    let n = sample.count() as f64;
    let masses = counts.iter().map(|&c| c as f64 / n).collect();
    DiscreteDensity::new(support.to_vec(), masses)
}

/// (1 - epsilon) * base + epsilon * point mass at `point`.
pub fn contaminate(
    base: &DiscreteDensity,
    point: f64,
    epsilon: f64,
) -> Result<DiscreteDensity, DensityError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(DensityError::EpsilonOutOfRange { epsilon });
    }
    let index = base
        .index_of(point)
        .ok_or(DensityError::PointNotInSupport { point })?;
    let mut masses: Vec<f64> = base.masses.iter().map(|&m| (1.0 - epsilon) * m).collect();
    masses[index] += epsilon;
    DiscreteDensity::new(base.support.clone(), masses)
}

/// A continuous distribution with evaluable pdf and cdf. `bounds` is the
/// effective support window used for quadrature and grid searches; the cdf
/// must be within 1e-9 of 0 and 1 at the lower and upper bound.
pub trait ContinuousDistribution: Sync {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    fn bounds(&self) -> (f64, f64);
}

/// Uniform distribution on [a, b].
#[derive(Debug, Clone, Copy)]
pub struct Uniform {
    a: f64,
    b: f64,
}

impl Uniform {
    pub fn new(a: f64, b: f64) -> Self {
        assert!(a < b, "uniform requires a < b");
        Self { a, b }
    }
}

impl ContinuousDistribution for Uniform {
    fn pdf(&self, x: f64) -> f64 {
        if x >= self.a && x <= self.b {
            1.0 / (self.b - self.a)
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        ((x - self.a) / (self.b - self.a)).clamp(0.0, 1.0)
    }

    fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// Normal distribution. The effective bounds are mean +/- 10 sd, where the
/// omitted tail mass is below 1e-23.
#[derive(Debug, Clone, Copy)]
pub struct Normal {
    mean: f64,
    sd: f64,
}

impl Normal {
    pub fn new(mean: f64, sd: f64) -> Self {
        assert!(sd > 0.0, "normal requires sd > 0");
        Self { mean, sd }
    }
}

impl ContinuousDistribution for Normal {
    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sd;
        (-0.5 * z * z).exp() / (self.sd * (2.0 * std::f64::consts::PI).sqrt())
    }

    fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / (self.sd * std::f64::consts::SQRT_2);
        0.5 * (1.0 + libm::erf(z))
    }

    fn bounds(&self) -> (f64, f64) {
        (self.mean - 10.0 * self.sd, self.mean + 10.0 * self.sd)
    }
}

/// Either side of a distance between distributions of mixed kinds.
#[derive(Clone, Copy)]
pub enum Distribution<'a> {
    Discrete(&'a DiscreteDensity),
    Continuous(&'a dyn ContinuousDistribution),
}

impl<'a> Distribution<'a> {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Distribution::Discrete(d) => d.cdf(x),
            Distribution::Continuous(c) => c.cdf(x),
        }
    }

    pub fn cdf_left(&self, x: f64) -> f64 {
        match self {
            Distribution::Discrete(d) => d.cdf_left(x),
            Distribution::Continuous(c) => c.cdf(x),
        }
    }

    pub fn window(&self) -> (f64, f64) {
        match self {
            Distribution::Discrete(d) => {
                let s = d.support();
                (s[0], s[s.len() - 1])
            }
            Distribution::Continuous(c) => c.bounds(),
        }
    }
}

/// Cell-probability discretization onto a grid: point i receives the cdf
/// increment over the cell bounded by the midpoints to its neighbors, with
/// the outer cells absorbing the tails so the masses sum to 1 exactly.
pub fn discretize(
    dist: &dyn ContinuousDistribution,
    grid: &[f64],
) -> Result<DiscreteDensity, DensityError> {
    if grid.is_empty() {
        return Err(DensityError::EmptyGrid);
    }
    for (index, window) in grid.windows(2).enumerate() {
        if window[0] >= window[1] {
            return Err(DensityError::UnsortedGrid { index: index + 1 });
        }
    }
    let n = grid.len();
    let mut masses = Vec::with_capacity(n);
    let mut lower_cdf = 0.0;
    for i in 0..n {
        let upper_cdf = if i + 1 < n {
            dist.cdf(0.5 * (grid[i] + grid[i + 1]))
        } else {
            1.0
        };
        masses.push((upper_cdf - lower_cdf).max(0.0));
        lower_cdf = upper_cdf;
    }
    DiscreteDensity::new(grid.to_vec(), masses)
}

/// A parameter box together with a generator mapping each parameter vector
/// to a density on a fixed support: the model class fitted by
/// [`crate::estimation::min_distance_fit`].
type DensityGenerator = Box<dyn Fn(&[f64]) -> Result<DiscreteDensity, DensityError> + Send + Sync>;

pub struct ParametricFamily {
    domain: Vec<(f64, f64)>,
    generator: DensityGenerator,
}

impl ParametricFamily {
    pub fn new(
        domain: Vec<(f64, f64)>,
        generator: impl Fn(&[f64]) -> Result<DiscreteDensity, DensityError> + Send + Sync + 'static,
    ) -> Self {
        assert!(!domain.is_empty(), "parameter domain must be nonempty");
        for &(lo, hi) in &domain {
            assert!(lo < hi, "parameter bounds must satisfy lo < hi");
        }
        Self {
            domain,
            generator: Box::new(generator),
        }
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn generate(&self, theta: &[f64]) -> Result<DiscreteDensity, DensityError> {
        (self.generator)(theta)
    }

    /// Binomial(n, p) on support {0, ..., n}, with p confined to the given
    /// parameter bounds.
    pub fn binomial(trials: u32, p_lo: f64, p_hi: f64) -> Self {
        let support: Vec<f64> = (0..=trials).map(f64::from).collect();
        Self::new(vec![(p_lo, p_hi)], move |theta| {
            let p = theta[0];
            DiscreteDensity::new(support.clone(), binomial_masses(trials, p))
        })
    }
}

pub(crate) fn binomial_masses(trials: u32, p: f64) -> Vec<f64> {
    let n = trials as usize;
    let q = 1.0 - p;
    let mut masses = Vec::with_capacity(n + 1);
    // C(n, k) p^k q^(n-k), built multiplicatively.
    let mut coeff = 1.0;
    for k in 0..=n {
        masses.push(coeff * p.powi(k as i32) * q.powi((n - k) as i32));
        if k < n {
            coeff = coeff * (n - k) as f64 / (k + 1) as f64;
        }
    }
    masses
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_uniform_is_valid() {
        let d = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(d.masses(), &[0.5, 0.5]);
    }

    #[test]
    fn mass_sum_out_of_tolerance_rejected() {
        let err = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.6]).unwrap_err();
        assert!(matches!(err, DensityError::MassSumOutOfTolerance { .. }));
    }

    #[test]
    fn negative_mass_rejected() {
        let err = DiscreteDensity::new(vec![0.0, 1.0], vec![-0.1, 1.1]).unwrap_err();
        assert!(matches!(err, DensityError::NegativeMass { index: 0, .. }));
    }

    #[test]
    fn duplicate_support_rejected() {
        let err = DiscreteDensity::new(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap_err();
        assert!(matches!(err, DensityError::DuplicateSupportPoint { .. }));
    }

    #[test]
    fn renormalize_is_opt_in() {
        let d = DiscreteDensity::new_renormalized(vec![0.0, 1.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(d.masses(), &[0.25, 0.75]);
    }

    #[test]
    fn empirical_counts() {
        let s = Sample::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let d = empirical_density(&s, &[0.0, 1.0]).unwrap();
        assert_eq!(d.masses(), &[0.5, 0.5]);

        let s = Sample::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let d = empirical_density(&s, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(d.masses(), &[0.75, 0.25, 0.0]);
    }

    #[test]
    fn empirical_value_outside_support() {
        let s = Sample::new(vec![5.0]).unwrap();
        let err = empirical_density(&s, &[0.0, 1.0]).unwrap_err();
        assert_eq!(err, DensityError::ValueOutsideSupport { value: 5.0 });
    }

    #[test]
    fn contaminate_mixture() {
        let base = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let c = contaminate(&base, 1.0, 0.0).unwrap();
        assert_eq!(c.masses(), &[0.5, 0.5]);
        let c = contaminate(&base, 1.0, 0.2).unwrap();
        assert!((c.masses()[0] - 0.4).abs() < 1e-15);
        assert!((c.masses()[1] - 0.6).abs() < 1e-15);

        let point = DiscreteDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let c = contaminate(&point, 1.0, 1.0).unwrap();
        assert_eq!(c.masses(), &[0.0, 1.0]);
    }

    #[test]
    fn contaminate_rejects_bad_args() {
        let base = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(
            contaminate(&base, 2.0, 0.1),
            Err(DensityError::PointNotInSupport { .. })
        ));
        assert!(matches!(
            contaminate(&base, 1.0, 1.5),
            Err(DensityError::EpsilonOutOfRange { .. })
        ));
    }

    #[test]
    fn discretize_uniform() {
        let u = Uniform::new(0.0, 1.0);
        let d = discretize(&u, &[0.5]).unwrap();
        assert_eq!(d.masses(), &[1.0]);

        let d = discretize(&u, &[0.125, 0.375, 0.625, 0.875]).unwrap();
        for &m in d.masses() {
            assert!((m - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn discretize_normal_symmetric() {
        let n = Normal::new(0.0, 1.0);
        let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let d = discretize(&n, &grid).unwrap();
        let m = d.masses();
        assert!((m[0] - m[4]).abs() < 1e-12);
        assert!((m[1] - m[3]).abs() < 1e-12);
        assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn discretize_rejects_bad_grids() {
        let u = Uniform::new(0.0, 1.0);
        assert_eq!(discretize(&u, &[]).unwrap_err(), DensityError::EmptyGrid);
        assert!(matches!(
            discretize(&u, &[0.5, 0.25]),
            Err(DensityError::UnsortedGrid { .. })
        ));
    }

    #[test]
    fn align_unions_supports() {
        let a = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let b = DiscreteDensity::new(vec![1.0, 2.0], vec![0.25, 0.75]).unwrap();
        let (aa, bb) = DiscreteDensity::align(&a, &b);
        assert_eq!(aa.support(), &[0.0, 1.0, 2.0]);
        assert_eq!(aa.masses(), &[0.5, 0.5, 0.0]);
        assert_eq!(bb.masses(), &[0.0, 0.25, 0.75]);
    }

    #[test]
    fn binomial_family_generates_valid_densities() {
        let family = ParametricFamily::binomial(5, 0.01, 0.99);
        let d = family.generate(&[0.3]).unwrap();
        assert_eq!(d.len(), 6);
        assert!((d.masses().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // C(5,2) 0.3^2 0.7^3 = 10 * 0.09 * 0.343
        assert!((d.masses()[2] - 0.3087).abs() < 1e-12);
    }

    #[test]
    fn declared_bounds_pin_the_cdf() {
        let dists: [&dyn ContinuousDistribution; 3] = [
            &Uniform::new(0.0, 1.0),
            &Normal::new(0.0, 1.0),
            &Normal::new(3.0, 0.2),
        ];
        for d in dists {
            let (lo, hi) = d.bounds();
            assert!(d.cdf(lo) <= 1e-9);
            assert!(d.cdf(hi) >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn normal_cdf_matches_known_values() {
        let n = Normal::new(0.0, 1.0);
        assert!((n.cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((n.cdf(1.0) - 0.841344746068543).abs() < 1e-12);
        assert!((n.pdf(0.0) - 0.3989422804014327).abs() < 1e-15);
    }
}
