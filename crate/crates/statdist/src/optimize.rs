//! Derivative-free minimization used by the fitting module: a coarse grid
//! pass over a parameter box followed by simplex-style contraction around
//! the best grid point. Everything is deterministic: grid evaluation order
//! is lexicographic and argmin ties keep the lexicographically smallest
//! parameter vector.

/// Outcome of the local refinement phase.
#[derive(Debug, Clone)]
pub struct RefineResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub trace: Vec<(Vec<f64>, f64)>,
}

/// Evaluates `f` on a lexicographic grid with `points_per_dim` points per
/// coordinate (bounds included) and returns the strictly-first argmin.
pub fn grid_minimum(
    f: &mut impl FnMut(&[f64]) -> f64,
    domain: &[(f64, f64)],
    points_per_dim: usize,
) -> (Vec<f64>, f64, usize) {
    assert!(
        points_per_dim >= 2,
        "grid needs at least two points per dim"
    );
    let dims = domain.len();
    let mut index = vec![0usize; dims];
    let point_at = |index: &[usize]| -> Vec<f64> {
        index
            .iter()
            .zip(domain)
            .map(|(&i, &(lo, hi))| lo + (hi - lo) * i as f64 / (points_per_dim - 1) as f64)
            .collect()
    };
    let mut best_x = point_at(&index);
    let mut best_f = f(&best_x);
    let mut evaluations = 1;
    loop {
        // Advance the odometer.
        let mut dim = dims;
        loop {
            if dim == 0 {
                return (best_x, best_f, evaluations);
            }
            dim -= 1;
            index[dim] += 1;
            if index[dim] < points_per_dim {
                break;
            }
            index[dim] = 0;
        }
        let x = point_at(&index);
        let fx = f(&x);
        evaluations += 1;
        if fx < best_f {
            best_f = fx;
            best_x = x;
        }
    }
}

fn clamp_into(x: &mut [f64], domain: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(domain) {
        *xi = xi.clamp(lo, hi);
    }
}

/// Nelder-Mead with every candidate clamped into the box, so boundary
/// minima are reachable. Stops when the simplex diameter falls below
/// `step_tol` (converged) or the evaluation budget runs out.
pub fn simplex_refine(
    f: &mut impl FnMut(&[f64]) -> f64,
    start: &[f64],
    scale: &[f64],
    domain: &[(f64, f64)],
    step_tol: f64,
    max_evals: usize,
) -> RefineResult {
    let dims = start.len();
    let mut evaluations = 0;
    let mut trace: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    // Initial simplex: the start point plus one step along each axis.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dims + 1);
    let fx = eval(start, &mut evaluations);
    simplex.push((start.to_vec(), fx));
    for d in 0..dims {
        let mut v = start.to_vec();
        let span = domain[d].1 - domain[d].0;
        let mut step = scale[d].abs().max(1e-8 * span);
        if v[d] + step > domain[d].1 {
            step = -step;
        }
        v[d] += step;
        clamp_into(&mut v, domain);
        let fv = eval(&v, &mut evaluations);
        simplex.push((v, fv));
    }

    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);
    trace.push((simplex[0].0.clone(), simplex[0].1));

    let diameter = |s: &[(Vec<f64>, f64)]| -> f64 {
        let best = &s[0].0;
        s.iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;
    while evaluations < max_evals {
        if diameter(&simplex) < step_tol {
            converged = true;
            break;
        }
        let n = simplex.len();
        let centroid: Vec<f64> = (0..dims)
            .map(|d| simplex[..n - 1].iter().map(|(v, _)| v[d]).sum::<f64>() / (n - 1) as f64)
            .collect();
        let worst = simplex[n - 1].clone();

        let mut reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        clamp_into(&mut reflected, domain);
        let fr = eval(&reflected, &mut evaluations);

        if fr < simplex[0].1 {
            let mut expanded: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(c, r)| c + gamma * (r - c))
                .collect();
            clamp_into(&mut expanded, domain);
            let fe = eval(&expanded, &mut evaluations);
            simplex[n - 1] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 2].1 {
            simplex[n - 1] = (reflected, fr);
        } else {
            let mut contracted: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            clamp_into(&mut contracted, domain);
            let fc = eval(&contracted, &mut evaluations);
            if fc < worst.1 {
                simplex[n - 1] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (v, b) in vertex.0.iter_mut().zip(&best) {
                        *v = b + sigma * (*v - b);
                    }
                    vertex.1 = eval(&vertex.0, &mut evaluations);
                }
            }
        }
        order(&mut simplex);
        if simplex[0].1 < trace.last().map_or(f64::INFINITY, |(_, v)| *v) {
            trace.push((simplex[0].0.clone(), simplex[0].1));
        }
    }
    if !converged {
        converged = diameter(&simplex) < step_tol;
    }

    RefineResult {
        x: simplex[0].0.clone(),
        fx: simplex[0].1,
        evaluations,
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_finds_coarse_minimum() {
        let mut f = |x: &[f64]| (x[0] - 0.31).powi(2);
        let (x, _, evals) = grid_minimum(&mut f, &[(0.0, 1.0)], 64);
        assert_eq!(evals, 64);
        assert!((x[0] - 0.31).abs() < 1.0 / 63.0);
    }

    #[test]
    fn grid_tie_break_keeps_smallest() {
        // Flat objective: the first (smallest) grid point wins.
        let mut f = |_: &[f64]| 1.0;
        let (x, _, _) = grid_minimum(&mut f, &[(0.0, 1.0), (2.0, 3.0)], 4);
        assert_eq!(x, vec![0.0, 2.0]);
    }

    #[test]
    fn refine_reaches_interior_minimum() {
        let mut f = |x: &[f64]| (x[0] - 0.31).powi(2) + (x[1] + 0.2).powi(4);
        let r = simplex_refine(
            &mut f,
            &[0.3, 0.0],
            &[0.05, 0.05],
            &[(0.0, 1.0), (-1.0, 1.0)],
            1e-8,
            500,
        );
        assert!(r.converged);
        assert!((r.x[0] - 0.31).abs() < 1e-6);
        assert!((r.x[1] + 0.2).abs() < 1e-2);
    }

    #[test]
    fn refine_respects_boundary() {
        // True minimum at 0.6 lies below the box; the boundary is optimal.
        let mut f = |x: &[f64]| (x[0] - 0.6).powi(2);
        let r = simplex_refine(&mut f, &[0.8], &[0.05], &[(0.7, 0.9)], 1e-8, 500);
        assert!(r.converged);
        assert!((r.x[0] - 0.7).abs() < 1e-6);
    }

    #[test]
    fn one_dimensional_convergence_rate() {
        let mut f = |x: &[f64]| (x[0] - 0.123456).powi(2);
        let r = simplex_refine(&mut f, &[0.12], &[0.015], &[(0.0, 1.0)], 1e-7, 500);
        assert!(r.converged, "used {} evaluations", r.evaluations);
        assert!((r.x[0] - 0.123456).abs() < 1e-5);
    }
}
