//! Adaptive Simpson quadrature with an absolute tolerance and an evaluation budget.

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_BUDGET: usize = 2_000_000;
const MAX_DEPTH: u32 = 60;

/// `∫_a^b f` to absolute tolerance `tol`, using at most `budget` evaluations.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<f64> {
    let fail = Error::QuadratureFailure {
        tolerance: tol,
        evaluations: budget,
    };
    if a == b {
        return Ok(0.0);
    }
    let mut evals = 3;
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut state = State {
        f: &f,
        evals: &mut evals,
        budget,
    };
    let value = state
        .recurse(Panel { a, b, fa, fm, fb, whole }, tol, MAX_DEPTH)
        .ok_or(fail.clone())?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(fail)
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct State<'a, F> {
    f: &'a F,
    evals: &'a mut usize,
    budget: usize,
}

impl<F: Fn(f64) -> f64> State<'_, F> {
    fn recurse(&mut self, p: Panel, tol: f64, depth: u32) -> Option<f64> {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        *self.evals += 2;
        if *self.evals > self.budget {
            return None;
        }
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let h = (p.b - p.a) / 12.0;
        let left = h * (p.fa + 4.0 * flm + p.fm);
        let right = h * (p.fm + 4.0 * frm + p.fb);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * tol {
            return Some(left + right + delta / 15.0);
        }
        if depth == 0 {
            return None;
        }
        let l = self.recurse(
            Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left },
            tol / 2.0,
            depth - 1,
        )?;
        let r = self.recurse(
            Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right },
            tol / 2.0,
            depth - 1,
        )?;
        Some(l + r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_smooth_functions() {
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12, DEFAULT_BUDGET).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-11);
        let v = adaptive_simpson(|x| x * x, -1.0, 2.0, 1e-12, DEFAULT_BUDGET).unwrap();
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = adaptive_simpson(|x| (1.0 / x).sin(), 1e-6, 1.0, 1e-14, 200).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { .. }));
    }
}
