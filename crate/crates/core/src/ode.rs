//! Classical fixed-step RK4 for complex first-order systems.

use crate::C64;

/// Grid states and derivatives of an integration run.
#[derive(Clone, Debug)]
pub struct Integration {
    pub t0: f64,
    pub t1: f64,
    /// `states[i]` at `t0 + i h`.
    pub states: Vec<Vec<C64>>,
    /// `f(t_i, states[i])`.
    pub derivatives: Vec<Vec<C64>>,
    /// Step-doubling estimate of the global error of `states`.
    pub error_estimate: f64,
}

fn axpy(y: &[C64], a: f64, k: &[C64]) -> Vec<C64> {
    y.iter().zip(k).map(|(y, k)| y + k * a).collect()
}

/// Integrates `y' = f(t, y)` with `steps` uniform RK4 steps.
pub fn rk4<F>(f: &F, y0: &[C64], t0: f64, t1: f64, steps: usize) -> Vec<Vec<C64>>
where
    F: Fn(f64, &[C64]) -> Vec<C64>,
{
    let h = (t1 - t0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    out.push(y.clone());
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = f(t + h, &axpy(&y, h, &k3));
        for j in 0..y.len() {
            y[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
        out.push(y.clone());
    }
    out
}

/// RK4 with `steps` steps, plus a second run at `2·steps` whose difference
/// (scaled by 16/15) estimates the error of the first.
pub fn integrate<F>(f: &F, y0: &[C64], t0: f64, t1: f64, steps: usize) -> Integration
where
    F: Fn(f64, &[C64]) -> Vec<C64>,
{
    let coarse = rk4(f, y0, t0, t1, steps);
    let fine = rk4(f, y0, t0, t1, 2 * steps);
    let error_estimate = coarse
        .iter()
        .enumerate()
        .flat_map(|(i, y)| y.iter().zip(&fine[2 * i]).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max)
        * 16.0
        / 15.0;
    let h = (t1 - t0) / steps as f64;
    let derivatives = coarse
        .iter()
        .enumerate()
        .map(|(i, y)| f(t0 + i as f64 * h, y))
        .collect();
    Integration { t0, t1, states: coarse, derivatives, error_estimate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_solution_stays_constant() {
        let run = integrate(&|_, y: &[C64]| vec![C64::new(0.0, 0.0); y.len()], &[C64::new(1.0, 0.0)], 0.0, 1.0, 16);
        assert!(run.states.iter().all(|y| y[0] == C64::new(1.0, 0.0)));
        assert_eq!(run.error_estimate, 0.0);
    }

    #[test]
    fn gaussian_decay() {
        // T' = -(12/5) t T  →  exp(-6t²/5)
        let f = |t: f64, y: &[C64]| vec![y[0] * (-2.4 * t)];
        let run = integrate(&f, &[C64::new(1.0, 0.0)], 0.0, 1.0, 1024);
        assert_abs_diff_eq!(run.states[1024][0].re, (-1.2f64).exp(), epsilon = 1e-12);
        assert!(run.error_estimate < 1e-10);
    }

    #[test]
    fn fourth_order_convergence() {
        let f = |_t: f64, y: &[C64]| vec![y[1], -y[0]];
        let err = |n: usize| {
            let y = rk4(&f, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], 0.0, 2.0, n);
            (y[n][0].re - 2f64.cos()).abs()
        };
        let ratio = err(20) / err(40);
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }
}
