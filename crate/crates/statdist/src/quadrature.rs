//! Adaptive Simpson quadrature with an absolute-error target and a hard
//! panel budget. An infinite integrand evaluation short-circuits to an
//! infinite integral; running out of panels before the tolerance is met is
//! an error, not a silent low-quality answer.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadratureError {
    #[error("tolerance {tol} not met within {budget} panels on [{lo}, {hi}]")]
    BudgetExhausted {
        lo: f64,
        hi: f64,
        tol: f64,
        budget: usize,
    },
    #[error("integrand evaluated to NaN at {at}")]
    NonFiniteEvaluation { at: f64 },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Absolute error target for the whole interval.
    pub abs_tol: f64,
    /// Maximum number of panel splits before giving up.
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            max_panels: 1 << 16,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

enum Evaluation {
    Finite(f64),
    Infinite,
}

struct Engine<'f> {
    f: &'f dyn Fn(f64) -> f64,
    panels_left: usize,
    exhausted: bool,
}

impl<'f> Engine<'f> {
    fn eval(&self, x: f64) -> Result<Evaluation, QuadratureError> {
        let y = (self.f)(x);
        if y.is_nan() {
            Err(QuadratureError::NonFiniteEvaluation { at: x })
        } else if y.is_infinite() {
            Ok(Evaluation::Infinite)
        } else {
            Ok(Evaluation::Finite(y))
        }
    }

    fn simpson(lo: f64, hi: f64, flo: f64, fmid: f64, fhi: f64) -> f64 {
        (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    }

    /// One level of bisection with Richardson correction. `whole` is the
    /// Simpson estimate over [lo, hi] computed by the caller.
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        lo: f64,
        hi: f64,
        flo: f64,
        fmid: f64,
        fhi: f64,
        whole: f64,
        tol: f64,
    ) -> Result<Evaluation, QuadratureError> {
        let mid = 0.5 * (lo + hi);
        let lmid = 0.5 * (lo + mid);
        let rmid = 0.5 * (mid + hi);
        let flmid = match self.eval(lmid)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(Evaluation::Infinite),
        };
        let frmid = match self.eval(rmid)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(Evaluation::Infinite),
        };
        let left = Self::simpson(lo, mid, flo, flmid, fmid);
        let right = Self::simpson(mid, hi, fmid, frmid, fhi);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(Evaluation::Finite(left + right + delta / 15.0));
        }
        if self.panels_left < 2 {
            self.exhausted = true;
            return Ok(Evaluation::Finite(left + right + delta / 15.0));
        }
        self.panels_left -= 2;
        let half_tol = 0.5 * tol;
        let l = match self.refine(lo, mid, flo, flmid, fmid, left, half_tol)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(Evaluation::Infinite),
        };
        let r = match self.refine(mid, hi, fmid, frmid, fhi, right, half_tol)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(Evaluation::Infinite),
        };
        Ok(Evaluation::Finite(l + r))
    }
}

/// Integrates `f` over [lo, hi]. Returns +inf if the integrand is +inf
/// anywhere it is sampled, and an error if the panel budget runs out before
/// the absolute tolerance is met.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    config: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(QuadratureError::InvalidInterval { lo, hi });
    }
    if lo == hi {
        return Ok(0.0);
    }
    // Seed with a few panels so a coarse Simpson estimate cannot accept a
    // spuriously small value on an integrand with isolated peaks.
    let seeds = 8;
    let mut engine = Engine {
        f: &f,
        panels_left: config.max_panels.saturating_sub(seeds),
        exhausted: false,
    };
    let step = (hi - lo) / seeds as f64;
    let mut total = 0.0;
    for i in 0..seeds {
        let a = lo + i as f64 * step;
        let b = if i + 1 == seeds { hi } else { a + step };
        let mid = 0.5 * (a + b);
        let fa = match engine.eval(a)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(f64::INFINITY),
        };
        let fm = match engine.eval(mid)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(f64::INFINITY),
        };
        let fb = match engine.eval(b)? {
            Evaluation::Finite(v) => v,
            Evaluation::Infinite => return Ok(f64::INFINITY),
        };
        let whole = Engine::simpson(a, b, fa, fm, fb);
        match engine.refine(a, b, fa, fm, fb, whole, config.abs_tol / seeds as f64)? {
            Evaluation::Finite(v) => total += v,
            Evaluation::Infinite => return Ok(f64::INFINITY),
        }
    }
    if engine.exhausted {
        return Err(QuadratureError::BudgetExhausted {
            lo,
            hi,
            tol: config.abs_tol,
            budget: config.max_panels,
        });
    }
    Ok(total)
}
