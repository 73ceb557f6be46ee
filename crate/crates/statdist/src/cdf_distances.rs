//! Distribution-function distances (Kolmogorov-Smirnov, L2 between
//! densities) and the monotone-transformation machinery their invariance
//! properties are tested against.

use crate::densities::{ContinuousDistribution, DiscreteDensity, Distribution};
use crate::quadrature::{integrate, QuadratureConfig, QuadratureError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CdfError {
    #[error("map is not strictly increasing over the support near {at}")]
    NonMonotoneOnSupport { at: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
}

/// A strictly increasing map with its inverse, and optionally the forward
/// derivative for exact change-of-variables densities.
pub struct MonotoneMap {
    forward: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    inverse: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    forward_deriv: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl MonotoneMap {
    pub fn new(
        forward: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inverse: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            forward: Box::new(forward),
            inverse: Box::new(inverse),
            forward_deriv: None,
        }
    }

    pub fn with_derivative(mut self, deriv: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forward_deriv = Some(Box::new(deriv));
        self
    }

    /// y = a x + b with a > 0.
    pub fn affine(a: f64, b: f64) -> Self {
        assert!(a > 0.0, "affine map requires positive slope");
        Self::new(move |x| a * x + b, move |y| (y - b) / a).with_derivative(move |_| a)
    }

    /// y = x^3 + x, inverted in closed form.
    pub fn cubic_plus_x() -> Self {
        Self::new(
            |x| x * x * x + x,
            |y| {
                // Cardano for t^3 + t = y: discriminant y^2/4 + 1/27 > 0.
                let disc = (y * y / 4.0 + 1.0 / 27.0).sqrt();
                (y / 2.0 + disc).cbrt() + (y / 2.0 - disc).cbrt()
            },
        )
        .with_derivative(|x| 3.0 * x * x + 1.0)
    }

    /// y = exp(x).
    pub fn exponential() -> Self {
        Self::new(f64::exp, f64::ln).with_derivative(f64::exp)
    }

    pub fn forward(&self, x: f64) -> f64 {
        (self.forward)(x)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (self.inverse)(y)
    }

    fn inverse_derivative(&self, y: f64) -> Option<f64> {
        self.forward_deriv.as_ref().map(|d| {
            let x = self.inverse(y);
            1.0 / d(x)
        })
    }
}

/// Pushforward of a discrete density: support points mapped, masses kept.
pub fn transform_discrete(
    d: &DiscreteDensity,
    map: &MonotoneMap,
) -> Result<DiscreteDensity, CdfError> {
    let mapped: Vec<f64> = d.support().iter().map(|&x| map.forward(x)).collect();
    for window in mapped.windows(2) {
        if window[0] >= window[1] {
            return Err(CdfError::NonMonotoneOnSupport { at: window[0] });
        }
    }
    Ok(DiscreteDensity::new(mapped, d.masses().to_vec())
        .expect("masses unchanged by a pushforward"))
}

/// Pushforward of a continuous distribution, CDF-first:
/// cdf_Y(y) = cdf_X(inverse(y)), with the density derived from the map's
/// derivative when available and from a CDF central difference otherwise.
pub struct TransformedDistribution<D: ContinuousDistribution> {
    base: D,
    map: MonotoneMap,
}

pub fn transform_continuous<D: ContinuousDistribution>(
    base: D,
    map: MonotoneMap,
) -> Result<TransformedDistribution<D>, CdfError> {
    let (lo, hi) = base.bounds();
    // Spot-check strict monotonicity over the support.
    let mut prev = map.forward(lo);
    for i in 1..=16 {
        let x = lo + (hi - lo) * i as f64 / 16.0;
        let y = map.forward(x);
        if y <= prev {
            return Err(CdfError::NonMonotoneOnSupport { at: x });
        }
        prev = y;
    }
    Ok(TransformedDistribution { base, map })
}

impl<D: ContinuousDistribution> ContinuousDistribution for TransformedDistribution<D> {
    fn pdf(&self, y: f64) -> f64 {
        match self.map.inverse_derivative(y) {
            Some(dinv) => self.base.pdf(self.map.inverse(y)) * dinv,
            None => {
                let (lo, hi) = self.bounds();
                let step = 1e-6 * (hi - lo).max(1.0);
                (self.cdf(y + step) - self.cdf(y - step)) / (2.0 * step)
            }
        }
    }

    fn cdf(&self, y: f64) -> f64 {
        self.base.cdf(self.map.inverse(y))
    }

    fn bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.base.bounds();
        (self.map.forward(lo), self.map.forward(hi))
    }
}

/// Kolmogorov-Smirnov distance sup_x |F(x) - G(x)|.
///
/// Step functions are handled exactly by examining both one-sided limits at
/// every atom; a pair of continuous distributions goes through a 10^4-point
/// grid followed by golden-section refinement around the best bracket.
pub fn ks_distance(f: &Distribution<'_>, g: &Distribution<'_>) -> f64 {
    match (f, g) {
        (Distribution::Discrete(df), Distribution::Discrete(dg)) => {
            let atoms = crate::densities::merge_supports(df.support(), dg.support());
            sup_at_atoms(f, g, &atoms)
        }
        (Distribution::Discrete(d), _) | (_, Distribution::Discrete(d)) => {
            sup_at_atoms(f, g, d.support())
        }
        (Distribution::Continuous(_), Distribution::Continuous(_)) => {
            let (flo, fhi) = f.window();
            let (glo, ghi) = g.window();
            let lo = flo.min(glo);
            let hi = fhi.max(ghi);
            grid_sup(f, g, lo, hi)
        }
    }
}

fn sup_at_atoms(f: &Distribution<'_>, g: &Distribution<'_>, atoms: &[f64]) -> f64 {
    let mut best: f64 = 0.0;
    for &x in atoms {
        best = best.max((f.cdf(x) - g.cdf(x)).abs());
        best = best.max((f.cdf_left(x) - g.cdf_left(x)).abs());
    }
    best
}

fn grid_sup(f: &Distribution<'_>, g: &Distribution<'_>, lo: f64, hi: f64) -> f64 {
    const GRID: usize = 10_000;
    let gap = |x: f64| (f.cdf(x) - g.cdf(x)).abs();
    let step = (hi - lo) / GRID as f64;
    let mut best = 0.0;
    let mut best_x = lo;
    for i in 0..=GRID {
        let x = lo + i as f64 * step;
        let v = gap(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    // Golden-section refinement on the bracketing interval.
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = (best_x - step).max(lo);
    let mut b = (best_x + step).min(hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (gap(c), gap(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = gap(d);
        }
        best = best.max(fc.max(fd));
    }
    best
}

/// Squared L2 distance between densities, integral of (f - g)^2.
pub fn l2_density_distance(
    f: &dyn ContinuousDistribution,
    g: &dyn ContinuousDistribution,
) -> Result<f64, CdfError> {
    let (flo, fhi) = f.bounds();
    let (glo, ghi) = g.bounds();
    let value = integrate(
        |x| {
            let d = f.pdf(x) - g.pdf(x);
            d * d
        },
        flo.min(glo),
        fhi.max(ghi),
        &QuadratureConfig::default(),
    )?;
    Ok(value)
}

/// |F(x0) - G(x0)|: the power-minus-size gap of the threshold test at x0.
/// Its supremum over x0 is the Kolmogorov-Smirnov distance.
pub fn ks_testing_gap(f: &Distribution<'_>, g: &Distribution<'_>, x0: f64) -> f64 {
    (f.cdf(x0) - g.cdf(x0)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::{discretize, Normal, Uniform};

    #[test]
    fn ks_zero_for_identical() {
        let d = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(
            ks_distance(&Distribution::Discrete(&d), &Distribution::Discrete(&d)),
            0.0
        );
    }

    #[test]
    fn ks_uniform_vs_four_cell_discretization() {
        let u = Uniform::new(0.0, 1.0);
        let grid = [0.125, 0.375, 0.625, 0.875];
        let d = discretize(&u, &grid).unwrap();
        let ks = ks_distance(&Distribution::Continuous(&u), &Distribution::Discrete(&d));
        assert!((ks - 0.125).abs() < 1e-12);
    }

    #[test]
    fn ks_mutually_singular_step_functions() {
        let f = DiscreteDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let g = DiscreteDensity::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let ks = ks_distance(&Distribution::Discrete(&f), &Distribution::Discrete(&g));
        assert_eq!(ks, 1.0);
    }

    #[test]
    fn ks_continuous_pair() {
        let a = Normal::new(0.0, 1.0);
        let b = Normal::new(1.0, 1.0);
        let ks = ks_distance(&Distribution::Continuous(&a), &Distribution::Continuous(&b));
        // Max gap of two unit normals offset by 1 is at the midpoint:
        // Phi(0.5) - Phi(-0.5).
        let expected = 2.0 * Normal::new(0.0, 1.0).cdf(0.5) - 1.0;
        assert!((ks - expected).abs() < 1e-9, "got {ks}, want {expected}");
    }

    #[test]
    fn testing_gap_matches_ks_at_maximizer() {
        let u = Uniform::new(0.0, 1.0);
        let grid = [0.125, 0.375, 0.625, 0.875];
        let d = discretize(&u, &grid).unwrap();
        let f = Distribution::Continuous(&u);
        let g = Distribution::Discrete(&d);
        assert_eq!(ks_testing_gap(&f, &g, -1.0), 0.0);
        // Just below the first atom the step function is still 0.
        let gap = ks_testing_gap(&f, &g, 0.125 - 1e-12);
        assert!((gap - 0.125).abs() < 1e-9);
        assert_eq!(ks_testing_gap(&f, &f, 0.3), 0.0);
    }

    #[test]
    fn transform_discrete_fixed_points() {
        let d = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let t = transform_discrete(&d, &MonotoneMap::new(|x| x * x * x, |y| y.cbrt())).unwrap();
        assert_eq!(t.support(), &[0.0, 1.0]);
        assert_eq!(t.masses(), &[0.5, 0.5]);
    }

    #[test]
    fn transform_identity_is_identity() {
        let d = DiscreteDensity::new(vec![-1.0, 2.0], vec![0.25, 0.75]).unwrap();
        let t = transform_discrete(&d, &MonotoneMap::affine(1.0, 0.0)).unwrap();
        assert_eq!(&t, &d);
    }

    #[test]
    fn transform_continuous_square_map() {
        // uniform(0,1) under x -> x^2 has cdf sqrt(y).
        let u = Uniform::new(0.0, 1.0);
        let map = MonotoneMap::new(|x| x * x, |y| y.sqrt()).with_derivative(|x| 2.0 * x);
        let t = transform_continuous(u, map).unwrap();
        assert!((t.cdf(0.25) - 0.5).abs() < 1e-12);
        assert!((t.cdf(0.81) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn non_monotone_map_rejected() {
        let d = DiscreteDensity::new(vec![-1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let err = transform_discrete(&d, &MonotoneMap::new(|x| x * x, |y| y.sqrt())).unwrap_err();
        assert!(matches!(err, CdfError::NonMonotoneOnSupport { .. }));
    }

    #[test]
    fn cubic_map_round_trips() {
        let map = MonotoneMap::cubic_plus_x();
        for x in [-3.0, -0.7, 0.0, 0.2, 1.0, 4.5] {
            assert!((map.inverse(map.forward(x)) - x).abs() < 1e-9);
        }
    }

    #[test]
    fn l2_zero_for_identical() {
        let n = Normal::new(0.0, 1.0);
        assert!(l2_density_distance(&n, &n).unwrap().abs() < 1e-12);
    }

    #[test]
    fn l2_location_invariance() {
        let a = Normal::new(0.0, 1.0);
        let b = Normal::new(0.7, 1.0);
        let base = l2_density_distance(&a, &b).unwrap();
        let a2 = Normal::new(5.0, 1.0);
        let b2 = Normal::new(5.7, 1.0);
        let shifted = l2_density_distance(&a2, &b2).unwrap();
        assert!((base - shifted).abs() < 1e-8);
    }

    #[test]
    fn l2_scale_change_halves_at_c_two() {
        let a = Normal::new(0.0, 1.0);
        let b = Normal::new(0.7, 1.0);
        let base = l2_density_distance(&a, &b).unwrap();
        // Y = 2X: pdfs become half as tall and twice as wide.
        let a2 = Normal::new(0.0, 2.0);
        let b2 = Normal::new(1.4, 2.0);
        let scaled = l2_density_distance(&a2, &b2).unwrap();
        assert!((scaled - base / 2.0).abs() < 1e-6 * base.max(1.0));
    }
}
