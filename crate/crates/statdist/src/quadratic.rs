//! Locally and exactly quadratic distances: double sums against a
//! nonnegative-definite kernel, kernel smoothing of distributions, and the
//! smoothed Pearson distance with its quadratic-form kernel.

use crate::densities::{DiscreteDensity, Distribution};
use crate::quadrature::{integrate, QuadratureConfig, QuadratureError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadraticError {
    #[error("smoothing bandwidth must be positive, got {bandwidth}")]
    BandwidthNotPositive { bandwidth: f64 },
    #[error("blend weight alpha = {alpha} outside (0, 1)")]
    AlphaOutOfRange { alpha: f64 },
    #[error("kernel is asymmetric at ({s}, {t})")]
    AsymmetricKernel { s: f64, t: f64 },
    #[error("weighting density has a zero-mass cell at {point}")]
    ZeroMassCell { point: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
}

/// Density shape of the smoothing error variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelShape {
    Gaussian,
    Uniform,
}

/// The error density k_h with bandwidth h. Gaussian is the default choice;
/// the uniform shape has compact support [-h, h] and exposes the failure
/// modes of hard truncation as h shrinks.
#[derive(Debug, Clone, Copy)]
pub struct SmoothingKernel {
    shape: KernelShape,
    bandwidth: f64,
}

impl SmoothingKernel {
    pub fn new(shape: KernelShape, bandwidth: f64) -> Result<Self, QuadraticError> {
        if bandwidth.is_nan() || bandwidth <= 0.0 {
            return Err(QuadraticError::BandwidthNotPositive { bandwidth });
        }
        Ok(Self { shape, bandwidth })
    }

    pub fn gaussian(bandwidth: f64) -> Result<Self, QuadraticError> {
        Self::new(KernelShape::Gaussian, bandwidth)
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// k_h(eps), a density in eps integrating to 1.
    pub fn density(&self, eps: f64) -> f64 {
        let h = self.bandwidth;
        match self.shape {
            KernelShape::Gaussian => {
                let z = eps / h;
                (-0.5 * z * z).exp() / (h * (2.0 * std::f64::consts::PI).sqrt())
            }
            KernelShape::Uniform => {
                if eps.abs() <= h {
                    0.5 / h
                } else {
                    0.0
                }
            }
        }
    }

    /// Half-width beyond which the kernel is negligible (exactly zero for
    /// the uniform shape, tail mass < 1e-14 for the gaussian).
    pub fn tail_halfwidth(&self) -> f64 {
        match self.shape {
            KernelShape::Gaussian => 8.0 * self.bandwidth,
            KernelShape::Uniform => self.bandwidth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelProvenance {
    PearsonDiagonal,
    SmoothedPearson,
    User,
}

/// A symmetric, nonnegative-definite kernel K(s, t) for quadratic forms.
/// Nonnegative-definiteness is validated statistically (random weight
/// vectors over small point sets) rather than symbolically.
pub struct QuadraticKernel {
    evaluator: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    provenance: KernelProvenance,
}

impl QuadraticKernel {
    pub fn new_user(evaluator: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            evaluator: Box::new(evaluator),
            provenance: KernelProvenance::User,
        }
    }

    pub fn evaluate(&self, s: f64, t: f64) -> f64 {
        (self.evaluator)(s, t)
    }

    pub fn provenance(&self) -> KernelProvenance {
        self.provenance
    }
}

const SYMMETRY_TOL: f64 = 1e-12;

/// The double sum sum_{x,y} K(x, y) [tau(x) - m(x)] [tau(y) - m(y)].
/// Nonnegative up to round-off for any nonnegative-definite kernel.
pub fn locally_quadratic_distance(
    tau: &DiscreteDensity,
    model: &DiscreteDensity,
    kernel: &QuadraticKernel,
) -> Result<f64, QuadraticError> {
    let (tau, model) = DiscreteDensity::align(tau, model);
    let support = tau.support();
    let diffs: Vec<f64> = tau
        .masses()
        .iter()
        .zip(model.masses())
        .map(|(&t, &m)| t - m)
        .collect();
    let n = support.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k_ij = kernel.evaluate(support[i], support[j]);
            if k_ij.is_nan() {
                return Err(QuadratureError::NonFiniteEvaluation { at: support[i] }.into());
            }
            if i != j {
                let k_ji = kernel.evaluate(support[j], support[i]);
                let scale = k_ij.abs().max(k_ji.abs()).max(1.0);
                if (k_ij - k_ji).abs() > SYMMETRY_TOL * scale {
                    return Err(QuadraticError::AsymmetricKernel {
                        s: support[i],
                        t: support[j],
                    });
                }
                entries[j * n + i] = k_ji;
            }
            entries[i * n + j] = k_ij;
        }
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += entries[i * n + j] * diffs[i] * diffs[j];
        }
    }
    Ok(total)
}

/// The diagonal kernel 1[s = t]/sqrt(m(s) m(t)) whose quadratic form is the
/// Pearson chi-squared with denominator m. Requires m > 0 on its support.
pub fn pearson_kernel(model: &DiscreteDensity) -> Result<QuadraticKernel, QuadraticError> {
    for (&point, &mass) in model.support().iter().zip(model.masses()) {
        if mass == 0.0 {
            return Err(QuadraticError::ZeroMassCell { point });
        }
    }
    let support = model.support().to_vec();
    let masses = model.masses().to_vec();
    Ok(QuadraticKernel {
        evaluator: Box::new(move |s, t| {
            if s != t {
                return 0.0;
            }
            match support.binary_search_by(|probe| probe.partial_cmp(&s).unwrap()) {
                Ok(i) => 1.0 / masses[i],
                Err(_) => 0.0,
            }
        }),
        provenance: KernelProvenance::PearsonDiagonal,
    })
}

/// The smoothed density at a point: f*_h(y) = integral of k_h(y - x) dF(x).
/// A finite sum for discrete F, a quadrature over the truncation window for
/// continuous F.
pub fn smooth_density(
    dist: &Distribution<'_>,
    kernel: &SmoothingKernel,
    at: f64,
) -> Result<f64, QuadraticError> {
    match dist {
        Distribution::Discrete(d) => Ok(smooth_discrete_at(d, kernel, at)),
        Distribution::Continuous(c) => {
            let (lo, hi) = c.bounds();
            let tail = kernel.tail_halfwidth();
            let lo = lo.max(at - tail);
            let hi = hi.min(at + tail);
            if lo >= hi {
                return Ok(0.0);
            }
            Ok(integrate(
                |x| kernel.density(at - x) * c.pdf(x),
                lo,
                hi,
                &QuadratureConfig::with_tol(1e-10),
            )?)
        }
    }
}

fn smooth_discrete_at(d: &DiscreteDensity, kernel: &SmoothingKernel, at: f64) -> f64 {
    d.support()
        .iter()
        .zip(d.masses())
        .map(|(&x, &m)| m * kernel.density(at - x))
        .sum()
}

/// Integration window wide enough for ratio integrands such as
/// (f* - g*)^2 / g*, whose mass concentrates not only near the atoms but at
/// their reflections (around 2 max - min on the right and symmetrically on
/// the left).
fn ratio_window(atoms: &[f64], kernel: &SmoothingKernel) -> (f64, f64) {
    let lo = atoms.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = atoms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let margin = spread + kernel.tail_halfwidth();
    (lo - margin, hi + margin)
}

/// Integrates piecewise between the atom positions so no kernel bump can
/// hide inside a single coarse panel.
fn integrate_piecewise(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    atoms: &[f64],
    config: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let mut cuts = vec![lo];
    for &a in atoms {
        if a > lo && a < hi {
            cuts.push(a);
        }
    }
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let piece_config = QuadratureConfig {
        abs_tol: config.abs_tol / (cuts.len() - 1) as f64,
        max_panels: config.max_panels,
    };
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        total += integrate(&f, pair[0], pair[1], &piece_config)?;
        if total.is_infinite() {
            return Ok(f64::INFINITY);
        }
    }
    Ok(total)
}

fn union_atoms(f: &DiscreteDensity, g: &DiscreteDensity) -> Vec<f64> {
    crate::densities::merge_supports(f.support(), g.support())
}

/// Kernel-smoothed Pearson chi-squared
/// P*^2 = integral of (f* - g*)^2 / g* dy. Strictly positive g* on the
/// window is guaranteed for the gaussian shape; with the uniform shape the
/// value is +inf as soon as f* puts mass where g* vanishes.
pub fn smoothed_pearson(
    f: &DiscreteDensity,
    g: &DiscreteDensity,
    kernel: &SmoothingKernel,
) -> Result<f64, QuadraticError> {
    let atoms = union_atoms(f, g);
    let (lo, hi) = ratio_window(&atoms, kernel);
    let value = integrate_piecewise(
        |y| {
            let fs = smooth_discrete_at(f, kernel, y);
            let gs = smooth_discrete_at(g, kernel, y);
            let diff = fs - gs;
            if diff == 0.0 {
                0.0
            } else {
                diff * diff / gs
            }
        },
        lo,
        hi,
        &atoms,
        &QuadratureConfig::default(),
    )?;
    Ok(value.max(0.0))
}

/// The quadratic-form kernel of the smoothed Pearson distance:
/// K(s, t) = integral of k_h(y - s) k_h(y - t) / g*(y) dy. Plugging it into
/// [`locally_quadratic_distance`] reproduces [`smoothed_pearson`].
pub fn smoothed_pearson_kernel(g: &DiscreteDensity, kernel: &SmoothingKernel) -> QuadraticKernel {
    let g = g.clone();
    let kernel = *kernel;
    QuadraticKernel {
        evaluator: Box::new(move |s, t| {
            let mut atoms = g.support().to_vec();
            atoms.push(s);
            atoms.push(t);
            let (lo, hi) = ratio_window(&atoms, &kernel);
            atoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
            atoms.dedup();
            let value = integrate_piecewise(
                |y| {
                    let num = kernel.density(y - s) * kernel.density(y - t);
                    if num == 0.0 {
                        0.0
                    } else {
                        num / smooth_discrete_at(&g, &kernel, y)
                    }
                },
                lo,
                hi,
                &atoms,
                &QuadratureConfig::with_tol(1e-9),
            );
            // The evaluator signature is infallible; NaN marks a quadrature
            // failure and is caught by locally_quadratic_distance.
            value.unwrap_or(f64::NAN)
        }),
        provenance: KernelProvenance::SmoothedPearson,
    }
}

/// Kernel-smoothed blended weighted Hellinger distance
/// integral of (f* - g*)^2 / (alpha sqrt(f*) + (1-alpha) sqrt(g*))^2 dx.
pub fn smoothed_bwhd(
    f: &DiscreteDensity,
    g: &DiscreteDensity,
    kernel: &SmoothingKernel,
    alpha: f64,
) -> Result<f64, QuadraticError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(QuadraticError::AlphaOutOfRange { alpha });
    }
    let atoms = union_atoms(f, g);
    let (lo, hi) = ratio_window(&atoms, kernel);
    let value = integrate_piecewise(
        |y| {
            let fs = smooth_discrete_at(f, kernel, y);
            let gs = smooth_discrete_at(g, kernel, y);
            let diff = fs - gs;
            if diff == 0.0 {
                return 0.0;
            }
            let w = alpha * fs.sqrt() + (1.0 - alpha) * gs.sqrt();
            diff * diff / (w * w)
        },
        lo,
        hi,
        &atoms,
        &QuadratureConfig::default(),
    )?;
    Ok(value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::Uniform;
    use crate::divergences::generalized_chisq;

    fn running_pair() -> (DiscreteDensity, DiscreteDensity) {
        (
            DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(),
            DiscreteDensity::new(vec![0.0, 1.0], vec![0.25, 0.75]).unwrap(),
        )
    }

    #[test]
    fn pearson_kernel_entries() {
        let m = DiscreteDensity::new(vec![0.0, 1.0], vec![0.25, 0.75]).unwrap();
        let k = pearson_kernel(&m).unwrap();
        assert!((k.evaluate(0.0, 0.0) - 4.0).abs() < 1e-12);
        assert!((k.evaluate(1.0, 1.0) - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(k.evaluate(0.0, 1.0), 0.0);

        let degenerate = DiscreteDensity::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            pearson_kernel(&degenerate),
            Err(QuadraticError::ZeroMassCell { point }) if point == 1.0
        ));
    }

    #[test]
    fn pearson_kernel_quadratic_form_is_pearson() {
        let (tau, m) = running_pair();
        let k = pearson_kernel(&m).unwrap();
        let q = locally_quadratic_distance(&tau, &m, &k).unwrap();
        let direct = generalized_chisq(&tau, &m, &m).value();
        assert!((q - direct).abs() < 1e-12);
        assert!((q - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_kernel_annihilates_mass_differences() {
        let (tau, m) = running_pair();
        let k = QuadraticKernel::new_user(|_, _| 1.0);
        let q = locally_quadratic_distance(&tau, &m, &k).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn identical_densities_give_zero() {
        let (tau, _) = running_pair();
        let k = QuadraticKernel::new_user(|s, t| (-((s - t) * (s - t))).exp());
        assert_eq!(locally_quadratic_distance(&tau, &tau, &k).unwrap(), 0.0);
    }

    #[test]
    fn asymmetric_kernel_rejected() {
        let (tau, m) = running_pair();
        let k = QuadraticKernel::new_user(|s, t| s - t + 1.0);
        assert!(matches!(
            locally_quadratic_distance(&tau, &m, &k),
            Err(QuadraticError::AsymmetricKernel { .. })
        ));
    }

    #[test]
    fn smooth_point_mass_is_kernel_density() {
        let d = DiscreteDensity::new(vec![0.0], vec![1.0]).unwrap();
        let k = SmoothingKernel::gaussian(1.0).unwrap();
        let at0 = smooth_density(&Distribution::Discrete(&d), &k, 0.0).unwrap();
        assert!((at0 - 0.3989422804014327).abs() < 1e-12);
        let left = smooth_density(&Distribution::Discrete(&d), &k, -1.0).unwrap();
        let right = smooth_density(&Distribution::Discrete(&d), &k, 1.0).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn smooth_two_atoms() {
        let d = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let k = SmoothingKernel::gaussian(1.0).unwrap();
        let v = smooth_density(&Distribution::Discrete(&d), &k, 0.5).unwrap();
        let phi_half = (-0.125f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((v - phi_half).abs() < 1e-12);
        assert!((v - 0.352065).abs() < 1e-6);
    }

    #[test]
    fn smoothed_continuous_density_integrates_to_one() {
        let u = Uniform::new(0.0, 1.0);
        let k = SmoothingKernel::gaussian(0.5).unwrap();
        let total = integrate(
            |y| smooth_density(&Distribution::Continuous(&u), &k, y).unwrap(),
            -5.0,
            6.0,
            &QuadratureConfig::with_tol(1e-7),
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn smoothed_pearson_zero_for_identical() {
        let (f, _) = running_pair();
        let k = SmoothingKernel::gaussian(0.5).unwrap();
        assert!(smoothed_pearson(&f, &f, &k).unwrap().abs() < 1e-12);

        let point = DiscreteDensity::new(vec![0.0], vec![1.0]).unwrap();
        assert!(smoothed_pearson(&point, &point, &k).unwrap().abs() < 1e-12);
    }

    #[test]
    fn smoothed_pearson_matches_kernel_quadratic_form() {
        let f = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let g = DiscreteDensity::new(vec![0.0], vec![1.0]).unwrap();
        let k = SmoothingKernel::gaussian(1.0).unwrap();
        let direct = smoothed_pearson(&f, &g, &k).unwrap();
        assert!(direct > 0.0);
        let kernel = smoothed_pearson_kernel(&g, &k);
        let form = locally_quadratic_distance(&f, &g, &kernel).unwrap();
        assert!(
            (direct - form).abs() <= 1e-6,
            "direct {direct} vs quadratic form {form}"
        );
    }

    #[test]
    fn smoothed_pearson_kernel_is_symmetric() {
        let g = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let k = SmoothingKernel::gaussian(0.5).unwrap();
        let kernel = smoothed_pearson_kernel(&g, &k);
        for (s, t) in [(0.0, 1.0), (0.25, 0.75), (-0.5, 1.5)] {
            let a = kernel.evaluate(s, t);
            let b = kernel.evaluate(t, s);
            assert!((a - b).abs() < 1e-8, "K({s},{t})={a} vs K({t},{s})={b}");
        }
    }

    #[test]
    fn smoothed_bwhd_cross_checks_against_hellinger_integrand() {
        let f = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let g = DiscreteDensity::new(vec![0.0, 1.0], vec![0.25, 0.75]).unwrap();
        let k = SmoothingKernel::gaussian(0.5).unwrap();
        let bwhd_half = smoothed_bwhd(&f, &g, &k, 0.5).unwrap();
        // At alpha = 1/2 the integrand collapses to 4 (sqrt f* - sqrt g*)^2.
        let atoms = vec![0.0, 1.0];
        let (lo, hi) = ratio_window(&atoms, &k);
        let hell = integrate_piecewise(
            |y| {
                let fs = smooth_discrete_at(&f, &k, y);
                let gs = smooth_discrete_at(&g, &k, y);
                let d = fs.sqrt() - gs.sqrt();
                4.0 * d * d
            },
            lo,
            hi,
            &atoms,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((bwhd_half - hell).abs() <= 1e-6, "{bwhd_half} vs {hell}");
    }

    #[test]
    fn smoothed_bwhd_zero_and_separated() {
        let f = DiscreteDensity::new(vec![0.0], vec![1.0]).unwrap();
        let g = DiscreteDensity::new(vec![5.0], vec![1.0]).unwrap();
        let k = SmoothingKernel::gaussian(0.5).unwrap();
        assert!(smoothed_bwhd(&f, &f, &k, 0.5).unwrap().abs() < 1e-12);
        // Nearly disjoint smoothed masses: each side integrates its own
        // density over the blend weight squared, 1/alpha^2 + 1/(1-alpha)^2,
        // which is 8 at alpha = 1/2.
        let far = smoothed_bwhd(&f, &g, &k, 0.5).unwrap();
        assert!((far - 8.0).abs() < 0.01, "got {far}");
    }

    #[test]
    fn smoothing_kernel_density_integrates_to_one() {
        for shape in [KernelShape::Gaussian, KernelShape::Uniform] {
            for h in [0.25, 1.0, 3.0] {
                let k = SmoothingKernel::new(shape, h).unwrap();
                let tail = k.tail_halfwidth();
                let total =
                    integrate(|e| k.density(e), -tail, tail, &QuadratureConfig::default()).unwrap();
                assert!((total - 1.0).abs() < 1e-8, "{shape:?} h={h}: {total}");
            }
        }
    }

    #[test]
    fn smoothed_pearson_kernel_is_nonnegative_definite_statistically() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let atoms: Vec<f64> = vec![0.05, 0.3, 0.45, 0.8, 0.95];
        let g = DiscreteDensity::new(vec![0.2, 0.7], vec![0.6, 0.4]).unwrap();
        let smoothing = SmoothingKernel::gaussian(0.5).unwrap();
        let kernel = smoothed_pearson_kernel(&g, &smoothing);
        let n = atoms.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = kernel.evaluate(atoms[i], atoms[j]);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        for _ in 0..100 {
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut form = 0.0;
            for i in 0..n {
                for j in 0..n {
                    form += weights[i] * entries[i * n + j] * weights[j];
                }
            }
            assert!(form >= -1e-9, "quadratic form {form} went negative");
        }
    }

    #[test]
    fn uniform_kernel_with_separated_boxes_recovers_discrete_pearson() {
        // On a common support, a uniform kernel narrower than half the gap
        // smooths each atom into its own box and the integral telescopes to
        // the discrete Pearson value exactly.
        let f = DiscreteDensity::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let g = DiscreteDensity::new(vec![0.0, 1.0], vec![0.25, 0.75]).unwrap();
        let narrow = SmoothingKernel::new(KernelShape::Uniform, 0.2).unwrap();
        let v = smoothed_pearson(&f, &g, &narrow).unwrap();
        let discrete = generalized_chisq(&f, &g, &g).value();
        assert!((v - discrete).abs() < 1e-7, "{v} vs {discrete}");
    }

    #[test]
    fn uniform_kernel_disjoint_supports_is_infinite() {
        let f = DiscreteDensity::new(vec![0.0], vec![1.0]).unwrap();
        let g = DiscreteDensity::new(vec![3.0], vec![1.0]).unwrap();
        let k = SmoothingKernel::new(KernelShape::Uniform, 0.25).unwrap();
        assert_eq!(smoothed_pearson(&f, &g, &k).unwrap(), f64::INFINITY);
    }
}
