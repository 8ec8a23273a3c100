//! Numerical checks on solved series.
//!
//! Nothing here proves convergence. Residuals come from finite differences
//! with a step-halving noise estimate, tail verdicts from a geometric fit
//! over the highest computed shells, and bounds from sampling.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisFamily, BasisIndex};
use crate::builtin::builtin_example;
use crate::error::{Error, Result};
use crate::problem::{ProblemSpec, ValidatedSpec};
use crate::quadrature::{adaptive_simpson, DEFAULT_BUDGET, DEFAULT_TOLERANCE};
use crate::solution::{CoefficientSeries, SeriesSolution, TimeFunction};
use crate::C64;

/// Steps per axis extent used by [`residual_check`].
pub const FD_DIVISIONS: f64 = 256.0;
/// Largest fitted decay ratio accepted by a tail verdict.
pub const TAIL_RATIO_LIMIT: f64 = 0.95;
/// Residual tolerance relative to `max(1, max |u|)` on the grid.
pub const RESIDUAL_TOLERANCE: f64 = 1e-3;
/// Multiple of the finite-difference noise floor always tolerated.
pub const NOISE_FACTOR: f64 = 10.0;
/// Tolerance on `|T^(j)(0) - r_jk|`.
pub const INITIAL_TOLERANCE: f64 = 1e-10;
/// Agreement required against an independent reference evaluator.
pub const REFERENCE_TOLERANCE: f64 = 1e-8;
pub const BOUND_SAMPLES: usize = 50;

/// Pointwise reference `u(x, t)`.
pub type Evaluator = Box<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Tensor grid of spatial points and times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Vec<f64>>,
    pub times: Vec<f64>,
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

fn interior(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|i| lo + (hi - lo) * i as f64 / (count + 1) as f64).collect()
}

impl Grid {
    pub fn new(axes: Vec<Vec<f64>>, times: Vec<f64>) -> Self {
        Grid { axes, times }
    }

    /// Endpoint-inclusive uniform grid.
    pub fn uniform(bounds: &[(f64, f64)], counts: &[usize], horizon: f64, time_count: usize) -> Self {
        Grid {
            axes: bounds.iter().zip(counts).map(|(&(lo, hi), &n)| linspace(lo, hi, n)).collect(),
            times: linspace(0.0, horizon, time_count),
        }
    }

    /// Interior points of the declared box and horizon, denser in low dimension.
    pub fn standard(spec: &ProblemSpec) -> Self {
        let per_axis = match spec.basis.dim() {
            1 => 9,
            2 => 6,
            _ => 3,
        };
        Grid {
            axes: spec.eval_box.iter().map(|&(lo, hi)| interior(lo, hi, per_axis)).collect(),
            times: interior(0.0, spec.horizon, 6),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len() * self.axes.iter().map(Vec::len).product::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in time-major order, then lexicographically over axes with the
    /// first axis varying slowest.
    pub fn points(&self) -> Vec<(Vec<f64>, f64)> {
        let mut spatial: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            spatial = spatial
                .iter()
                .flat_map(|p| {
                    axis.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        self.times.iter().flat_map(|&t| spatial.iter().map(move |p| (p.clone(), t))).collect()
    }
}

fn check_grid(sol: &SeriesSolution, grid: &Grid) -> Result<()> {
    let dim = sol.basis().dim();
    if grid.axes.len() != dim {
        return Err(Error::GridDomain(format!("grid has {} axes, basis has {dim}", grid.axes.len())));
    }
    for (j, axis) in grid.axes.iter().enumerate() {
        let (lo, hi) = sol.provenance.eval_box[j];
        for &x in axis {
            let probe: Vec<f64> = (0..dim).map(|i| if i == j { x } else { sol.provenance.eval_box[i].0 }).collect();
            if !sol.contains(&probe, 0.0) {
                return Err(Error::GridDomain(format!("axis {} value {x} outside [{lo}, {hi}]", j + 1)));
            }
        }
    }
    for &t in &grid.times {
        if !(0.0..=sol.provenance.horizon * (1.0 + 1e-9)).contains(&t) {
            return Err(Error::GridDomain(format!("time {t} outside [0, {}]", sol.provenance.horizon)));
        }
    }
    Ok(())
}

/// Weights of the `m`-th derivative at `z` for values at `nodes` (Fornberg's
/// recursion).
pub fn fd_weights(z: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Fourth-order stencil for `d/dx^order` at `x`, kept inside `[lo, hi]` by
/// switching to a one-sided stencil near the ends.
fn stencil(x: f64, h: f64, order: u32, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    if order == 0 {
        return vec![(x, 1.0)];
    }
    let d = order as i64;
    let half = (d + 3 + d % 2) / 2;
    let slack = 1e-9 * h;
    let offsets: Vec<i64> = if x - half as f64 * h >= lo - slack && x + half as f64 * h <= hi + slack {
        (-half..=half).collect()
    } else {
        let count = d + 4;
        let start = if x - half as f64 * h < lo - slack {
            ((lo - x) / h - 1e-9).ceil() as i64
        } else {
            ((hi - x) / h + 1e-9).floor() as i64 - (count - 1)
        };
        (start..start + count).collect()
    };
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    let scale = h.powi(order as i32);
    fd_weights(0.0, &nodes, order as usize)
        .into_iter()
        .zip(&nodes)
        .map(|(w, o)| (x + o * h, w / scale))
        .collect()
}

/// Drops identically zero modes so repeated evaluation stays cheap.
fn compact(sol: &SeriesSolution) -> SeriesSolution {
    let mut out = sol.clone();
    for m in &mut out.coefficients.modes {
        m.retain(|_, f| !f.is_zero());
    }
    out
}

struct Differencer<'a> {
    sol: &'a SeriesSolution,
    steps: Vec<f64>,
    time_step: f64,
}

impl Differencer<'_> {
    fn derivative(&self, q: usize, x: &[f64], t: f64, alpha: &[u32], time_order: u32) -> Result<C64> {
        let bounds = &self.sol.provenance.eval_box;
        let mut stencils: Vec<Vec<(f64, f64)>> = alpha
            .iter()
            .enumerate()
            .map(|(j, &a)| stencil(x[j], self.steps[j], a, bounds[j].0, bounds[j].1))
            .collect();
        stencils.push(stencil(t, self.time_step, time_order, 0.0, self.sol.provenance.horizon));
        let mut total = C64::new(0.0, 0.0);
        let mut idx = vec![0usize; stencils.len()];
        let mut point = x.to_vec();
        'outer: loop {
            let mut w = 1.0;
            for (j, s) in stencils.iter().enumerate().take(x.len()) {
                point[j] = s[idx[j]].0;
                w *= s[idx[j]].1;
            }
            let (tt, wt) = stencils[x.len()][idx[x.len()]];
            total += self.sol.eval(q, &point, tt)? * (w * wt);
            for j in (0..stencils.len()).rev() {
                idx[j] += 1;
                if idx[j] < stencils[j].len() {
                    continue 'outer;
                }
                idx[j] = 0;
            }
            break;
        }
        Ok(total)
    }
}

fn expansion_at(family: &BasisFamily, map: &BTreeMap<BasisIndex, C64>, x: &[f64]) -> Result<C64> {
    let mut s = C64::new(0.0, 0.0);
    for (k, c) in map {
        s += c * family.eval_element(k, x)?;
    }
    Ok(s)
}

/// Residual of every row (operator rows, then constraint rows) at one point.
fn row_residuals(spec: &ValidatedSpec, fd: &Differencer<'_>, x: &[f64], t: f64) -> Result<Vec<C64>> {
    let problem = spec.spec();
    let family = &problem.basis;
    let n = problem.n();
    let mut rows = vec![C64::new(0.0, 0.0); n + problem.constraints.len()];
    for term in &problem.operator {
        let m = term.spatial.multiplier_at(family, x)? * term.time_coeff.eval(t);
        rows[term.row] += m * fd.derivative(term.unknown, x, t, &term.spatial.derivative, term.time_order)?;
    }
    for term in &problem.quadratic {
        let l = fd.derivative(term.left.unknown, x, t, &term.left.derivative, 0)?;
        let r = fd.derivative(term.right.unknown, x, t, &term.right.derivative, 0)?;
        rows[term.row] += term.weight * l * r;
    }
    for (i, term) in problem.series_terms.iter().enumerate() {
        let known = expansion_at(family, spec.series_map(i), x)?;
        rows[term.row] += term.weight * known * fd.derivative(term.unknown, x, t, &term.derivative, term.time_order)?;
    }
    for (row, value) in rows.iter_mut().enumerate().take(n) {
        for (k, f) in spec.forcing_map(row) {
            *value -= f.eval(t) * family.eval_element(k, x)?;
        }
    }
    for (c, constraint) in problem.constraints.iter().enumerate() {
        for term in &constraint.terms {
            let m = term.spatial.multiplier_at(family, x)?;
            rows[n + c] += m * fd.derivative(term.unknown, x, t, &term.spatial.derivative, 0)?;
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowResidual {
    /// 1-based; constraint rows follow the operator rows.
    pub row: usize,
    pub max: f64,
    pub at: (Vec<f64>, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub rows: Vec<RowResidual>,
    pub max_residual: f64,
    /// Largest change of any residual when all steps are halved.
    pub noise_floor: f64,
    /// `max |u_q|` over the grid.
    pub scale: f64,
    pub points: usize,
    pub steps: Vec<f64>,
    pub time_step: f64,
}

impl ResidualReport {
    /// Residual small relative to the solution, or indistinguishable from
    /// finite-difference noise.
    pub fn verdict(&self) -> Verdict {
        let tol = RESIDUAL_TOLERANCE * self.scale.max(1.0);
        Verdict::from_bool(self.max_residual <= tol.max(NOISE_FACTOR * self.noise_floor))
    }
}

/// Applies each row of the problem to the truncated series by finite
/// differences at every grid point. Steps are `extent / 256` per axis and
/// `horizon / 256` in time; a second pass at half the steps gives the noise
/// floor.
pub fn residual_check(sol: &SeriesSolution, spec: &ValidatedSpec, grid: &Grid) -> Result<ResidualReport> {
    check_grid(sol, grid)?;
    for (j, axis) in spec.basis.axes.iter().enumerate() {
        if let crate::basis::AxisKind::Power { shift, .. } = axis.factor {
            if sol.provenance.eval_box[j].0 <= shift {
                return Err(Error::GridDomain(format!(
                    "axis {} box must lie strictly above the singular point {shift}",
                    j + 1
                )));
            }
        }
    }
    let sol = compact(sol);
    let steps: Vec<f64> = sol.provenance.eval_box.iter().map(|(lo, hi)| (hi - lo) / FD_DIVISIONS).collect();
    let time_step = sol.provenance.horizon / FD_DIVISIONS;
    let coarse = Differencer { sol: &sol, steps: steps.clone(), time_step };
    let fine = Differencer { sol: &sol, steps: steps.iter().map(|h| h / 2.0).collect(), time_step: time_step / 2.0 };
    let points = grid.points();
    let per_point: Vec<(Vec<f64>, f64, f64)> = points
        .par_iter()
        .map(|(x, t)| {
            let a = row_residuals(spec, &coarse, x, *t)?;
            let b = row_residuals(spec, &fine, x, *t)?;
            let floor = a.iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            let u = sol.eval_all(x, *t)?.iter().map(|v| v.norm()).fold(0.0, f64::max);
            Ok((a.iter().map(|v| v.norm()).collect(), floor, u))
        })
        .collect::<Result<_>>()?;
    let n_rows = spec.n() + spec.constraints.len();
    let mut rows: Vec<RowResidual> =
        (0..n_rows).map(|r| RowResidual { row: r + 1, max: 0.0, at: (Vec::new(), 0.0) }).collect();
    let (mut floor, mut scale) = (0.0f64, 0.0f64);
    for ((values, f, u), (x, t)) in per_point.iter().zip(&points) {
        floor = floor.max(*f);
        scale = scale.max(*u);
        for (row, &v) in rows.iter_mut().zip(values) {
            if v > row.max || row.at.0.is_empty() {
                row.max = row.max.max(v);
                row.at = (x.clone(), *t);
            }
        }
    }
    let max_residual = rows.iter().map(|r| r.max).fold(0.0, f64::max);
    Ok(ResidualReport { rows, max_residual, noise_floor: floor, scale, points: points.len(), steps, time_step })
}

/// One weighted sum `Σ w_k |c_k|`, as nonnegative terms tagged by shell `|k|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSeries {
    pub label: String,
    pub truncation: u32,
    pub terms: Vec<(u32, f64)>,
}

impl TailSeries {
    /// Terms `|k|^power · sup_box |ξ_k| · |c_k|`; with `bounds = None` the
    /// basis factor is left out.
    pub fn from_coefficients(
        label: &str,
        family: &BasisFamily,
        coeffs: &BTreeMap<BasisIndex, C64>,
        power: u32,
        bounds: Option<&[(f64, f64)]>,
        truncation: u32,
    ) -> Result<Self> {
        let mut terms = Vec::with_capacity(coeffs.len());
        for (k, c) in coeffs {
            let norm = k.norm() as u32;
            let mut w = f64::from(norm).powi(power as i32) * c.norm();
            if let Some(b) = bounds {
                for ((axis, &kc), &(lo, hi)) in family.axes.iter().zip(k.components()).zip(b) {
                    w *= axis.sup_abs(kc, lo, hi)?;
                }
            }
            terms.push((norm, w));
        }
        Ok(TailSeries { label: label.to_string(), truncation, terms })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub label: String,
    pub partial_half: f64,
    pub partial_full: f64,
    /// Fitted per-shell decay ratio; 0 when the top shells vanish.
    pub ratio: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub entries: Vec<TailEntry>,
}

impl TailReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.entries.iter().all(|e| e.verdict.passed()))
    }
}

/// Least-squares slope of `ln s` against shell, exponentiated.
fn fit_ratio(shells: &[(u32, f64)]) -> Option<f64> {
    if shells.len() < 2 {
        return None;
    }
    let n = shells.len() as f64;
    let mx = shells.iter().map(|s| f64::from(s.0)).sum::<f64>() / n;
    let my = shells.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let sxy: f64 = shells.iter().map(|s| (f64::from(s.0) - mx) * (s.1.ln() - my)).sum();
    let sxx: f64 = shells.iter().map(|s| (f64::from(s.0) - mx).powi(2)).sum();
    Some((sxy / sxx).exp())
}

/// Partial sums at `N/2` and `N`, and a geometric decay ratio fitted over the
/// shells in `(N/2, N]`. Labelled an engineering proxy: a finite number of
/// terms cannot certify summability.
pub fn tail_report(series: &[TailSeries]) -> TailReport {
    let entries = series
        .iter()
        .map(|s| {
            let n = s.truncation;
            let mut shells: BTreeMap<u32, f64> = BTreeMap::new();
            for &(k, v) in &s.terms {
                if k <= n {
                    *shells.entry(k).or_default() += v;
                }
            }
            let partial_full = shells.values().fold(0.0, |a, v| a + v);
            let partial_half = shells.range(..=n / 2).fold(0.0, |a, (_, v)| a + v);
            let nonzero: Vec<(u32, f64)> = shells.iter().filter(|(_, v)| **v > 0.0).map(|(k, v)| (*k, *v)).collect();
            let top: Vec<(u32, f64)> = nonzero.iter().copied().filter(|(k, _)| *k > n / 2).collect();
            let ratio = if top.is_empty() {
                0.0
            } else {
                fit_ratio(&top).or_else(|| fit_ratio(&nonzero)).unwrap_or(0.0)
            };
            TailEntry {
                label: s.label.clone(),
                partial_half,
                partial_full,
                ratio,
                verdict: Verdict::from_bool(ratio <= TAIL_RATIO_LIMIT),
            }
        })
        .collect();
    TailReport { entries }
}

/// Pointwise bounds on one-dimensional coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `0 < T_k(t) ≤ e^{kt}`.
    Growth,
    /// `0 < T_k(t) ≤ e^{-(k+1)t}`.
    Decay,
    /// `T_k(t) > 0`.
    Positive,
}

impl Bound {
    fn limit(self, k: i64, t: f64) -> f64 {
        match self {
            Bound::Growth => (k as f64 * t).exp(),
            Bound::Decay => (-(k as f64 + 1.0) * t).exp(),
            Bound::Positive => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: i64,
    pub t: f64,
    pub value: f64,
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: Bound,
    pub verdict: Verdict,
    pub modes: usize,
    pub samples: usize,
    pub first_violation: Option<Violation>,
}

/// Samples modes `k_min ≤ k ≤ k_max` at `t_i = i·horizon/50`, `i = 1..50`.
///
/// `t = 0` is left out since the strict inequalities fail there for every
/// mode with zero initial data.
pub fn bound_check(
    coeffs: &CoefficientSeries,
    unknown: usize,
    bound: Bound,
    k_range: (i64, i64),
    horizon: f64,
) -> Result<BoundReport> {
    if coeffs.basis.dim() != 1 {
        return Err(Error::Validation("bound checks need a one-dimensional basis".into()));
    }
    let mut first_violation = None;
    let mut modes = 0;
    'modes: for k in k_range.0..=k_range.1 {
        let idx = BasisIndex::scalar(k);
        let Some(f) = coeffs.get(unknown, &idx) else {
            return Err(Error::Validation(format!("mode {k} was not solved")));
        };
        let TimeFunction::Closed(p) = f else {
            return Err(Error::Validation("bound checks need closed-form coefficients".into()));
        };
        modes += 1;
        for i in 1..=BOUND_SAMPLES {
            let t = horizon * i as f64 / BOUND_SAMPLES as f64;
            let v = p.eval(t);
            let limit = bound.limit(k, t);
            let ok = v.re > 0.0 && v.im.abs() <= 1e-12 * v.re.abs().max(1e-300) && v.re <= limit * (1.0 + 1e-12);
            if !ok {
                first_violation = Some(Violation { index: k, t, value: v.re, limit });
                break 'modes;
            }
        }
    }
    Ok(BoundReport {
        bound,
        verdict: Verdict::from_bool(first_violation.is_none()),
        modes,
        samples: BOUND_SAMPLES,
        first_violation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelReport {
    pub k_max: u32,
    pub verdict: Verdict,
    pub first_failure: Option<u32>,
}

fn binomial(n: u32, k: u32) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Both sides of `k(k+1)^k = Σ_{m=1}^{k} C(k+1, m) m^m (k+1-m)^{k-m}`.
pub fn abel_sides(k: u32) -> (BigUint, BigUint) {
    let big = BigUint::from;
    let lhs = big(k) * big(k + 1).pow(k);
    let rhs = (1..=k).map(|m| binomial(k + 1, m) * big(m).pow(m) * big(k + 1 - m).pow(k - m)).sum();
    (lhs, rhs)
}

/// Checks the identity exactly for `1 ≤ k ≤ k_max`.
pub fn abel_identity_check(k_max: u32) -> AbelReport {
    let first_failure = (1..=k_max).find(|&k| {
        let (l, r) = abel_sides(k);
        l != r
    });
    AbelReport { k_max, verdict: Verdict::from_bool(first_failure.is_none()), first_failure }
}

/// Independently coded closed-form solutions of the built-in problems.
#[derive(Clone, Debug, PartialEq)]
pub enum Reference {
    /// `Σ (A_k cos(akπt/l) + l B_k/(akπ) sin(akπt/l)) sin(kπx/l)`.
    Wave { a: f64, l: f64, cos: Vec<(i64, f64)>, sin: Vec<(i64, f64)> },
    /// Travelling-wave form of `u_tt + a u_xt + b u_xx = 0`, `a² - 4b > 0`.
    Hyperbolic { a: f64, b: f64, l: f64, cos: Vec<(i64, f64)>, sin: Vec<(i64, f64)> },
    /// Damped oscillations of `u_tt + a u_xt + b u_xx = 0`, `a² - 4b < 0`,
    /// with data `cos e^{2x}`, `sin e^{2x}`.
    Elliptic { a: f64, b: f64 },
    /// `1 + Σ_{k≥1} (-1)^{k+1} k^{k-1}/k! t^{k-1} e^{k(x-t-12)}`.
    Burgers,
    /// `Σ A_km exp(-(6/5)(2m-1)k²t²) (y-3)^{3(2m-1)/5} sin 2kx`.
    Oo,
}

impl Reference {
    pub fn named(name: &str) -> Result<Self> {
        Ok(match name {
            "wave" => Reference::Wave { a: 1.0, l: PI, cos: vec![(1, 1.0)], sin: Vec::new() },
            "hyperbolic" => Reference::Hyperbolic { a: 0.0, b: -1.0, l: PI, cos: vec![(1, 1.0)], sin: Vec::new() },
            "elliptic" => Reference::Elliptic { a: 1.0, b: 1.0 },
            "burgers" => Reference::Burgers,
            "oo" => Reference::Oo,
            _ => return Err(Error::UnknownReference(name.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Reference::Wave { .. } => "wave",
            Reference::Hyperbolic { .. } => "hyperbolic",
            Reference::Elliptic { .. } => "elliptic",
            Reference::Burgers => "burgers",
            Reference::Oo => "oo",
        }
    }

    /// Evaluator of the reference truncated to index norm `n`.
    pub fn evaluator(&self, n: u32) -> Result<Evaluator> {
        let n = i64::from(n);
        Ok(match self.clone() {
            Reference::Wave { a, l, cos, sin } => {
                let cos: Vec<_> = cos.into_iter().filter(|&(k, _)| k <= n).collect();
                let sin: Vec<_> = sin.into_iter().filter(|&(k, _)| k <= n).collect();
                Box::new(move |x, t| {
                    let w = |k: i64| a * k as f64 * PI / l;
                    let mut u = 0.0;
                    for &(k, ak) in &cos {
                        u += ak * (w(k) * t).cos() * (k as f64 * PI * x[0] / l).sin();
                    }
                    for &(k, bk) in &sin {
                        u += bk / w(k) * (w(k) * t).sin() * (k as f64 * PI * x[0] / l).sin();
                    }
                    u
                })
            }
            Reference::Hyperbolic { a, b, l, cos, sin } => {
                let delta = a * a - 4.0 * b;
                if delta <= 0.0 {
                    return Err(Error::Domain("the hyperbolic reference needs a² - 4b > 0".into()));
                }
                let sd = delta.sqrt();
                let get = |v: &[(i64, f64)], k: i64| v.iter().filter(|e| e.0 == k).map(|e| e.1).sum::<f64>();
                let a0 = get(&cos, 0);
                let modes: Vec<(f64, f64, f64)> = (1..=n)
                    .map(|k| (k as f64, get(&cos, k), get(&sin, k)))
                    .filter(|&(_, ak, bk)| ak != 0.0 || bk != 0.0)
                    .collect();
                Box::new(move |x, t| {
                    let mut u = a0;
                    for &(k, ak, bk) in &modes {
                        let kp = k * PI / l;
                        let h1 = (-a + sd) / 2.0 * kp * t + kp * x[0];
                        let h2 = (-a - sd) / 2.0 * kp * t + kp * x[0];
                        let c1 = ((sd + a) * k * PI * ak - 2.0 * l * bk) / (2.0 * k * PI * sd);
                        let c2 = ((sd - a) * k * PI * ak + 2.0 * l * bk) / (2.0 * k * PI * sd);
                        u += c1 * h1.cos() + c2 * h2.cos();
                    }
                    u
                })
            }
            Reference::Elliptic { a, b } => {
                let delta = a * a - 4.0 * b;
                if delta >= 0.0 {
                    return Err(Error::Domain("the elliptic reference needs a² - 4b < 0".into()));
                }
                let w = (-delta).sqrt();
                Box::new(move |x, t| {
                    let mut u = 1.0;
                    let mut fact = 1.0;
                    for j in 1..=n {
                        fact *= j as f64;
                        let jf = j as f64;
                        let e = (jf * (-a * t + 2.0 * x[0])).exp();
                        if j % 2 == 0 {
                            let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
                            u += sign * e / fact * ((jf * w * t).cos() + a / w * (jf * w * t).sin());
                        } else {
                            let sign = if ((j + 1) / 2) % 2 == 1 { 1.0 } else { -1.0 };
                            u += sign * e / (fact * jf * w) * (jf * w * t).sin();
                        }
                    }
                    u
                })
            }
            Reference::Burgers => Box::new(move |x, t| {
                let mut u = 1.0;
                for k in 1..=n {
                    let kf = k as f64;
                    // k^{k-1}/k! as a product of k/i
                    let c = (1..=k).fold(1.0 / kf, |acc, i| acc * kf / i as f64);
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    u += sign * c * t.powi(k as i32 - 1) * (kf * (x[0] - t - 12.0)).exp();
                }
                u
            }),
            Reference::Oo => {
                let profile = |x: f64| x.powi(3) * (x - PI / 2.0).powi(3);
                let fourier: Vec<f64> = (1..=n.max(1))
                    .map(|k| {
                        let f = |x: f64| profile(x) * (2.0 * k as f64 * x).sin();
                        adaptive_simpson(f, 0.0, PI / 2.0, DEFAULT_TOLERANCE, DEFAULT_BUDGET).map(|v| 4.0 / PI * v)
                    })
                    .collect::<Result<_>>()?;
                Box::new(move |x, t| {
                    let mut u = 0.0;
                    for k in 1..=n {
                        let mut fact = 1.0;
                        for j in 1..=(n - k) {
                            fact *= j as f64;
                            if j % 2 == 0 {
                                continue;
                            }
                            let m = (j + 1) / 2;
                            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                            let kf = k as f64;
                            let jf = j as f64;
                            u += sign / fact
                                * fourier[(k - 1) as usize]
                                * (-1.2 * jf * kf * kf * t * t).exp()
                                * (x[1] - 3.0).powf(0.6 * jf)
                                * (2.0 * kf * x[0]).sin();
                        }
                    }
                    u
                })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub reference: String,
    pub max_deviation: f64,
    pub points: usize,
}

/// `max |u_1(x, t) - reference(x, t)|` over the grid.
pub fn closed_form_compare(sol: &SeriesSolution, reference: &Reference, grid: &Grid) -> Result<CompareReport> {
    check_grid(sol, grid)?;
    let eval = reference.evaluator(sol.provenance.truncation)?;
    let sol = compact(sol);
    let points = grid.points();
    let max_deviation = points
        .par_iter()
        .map(|(x, t)| Ok((sol.eval(0, x, *t)? - C64::new(eval(x, *t), 0.0)).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CompareReport { reference: reference.name().to_string(), max_deviation, points: points.len() })
}

/// `max |T^(j)_qk(0) - r_qjk|` over all unknowns, orders and indices in the ball.
pub fn initial_fidelity(spec: &ValidatedSpec, sol: &SeriesSolution) -> f64 {
    let mut worst = 0.0f64;
    for (q, &m) in spec.orders().iter().enumerate() {
        for j in 0..m {
            let data = spec.initial_map(q, j);
            for k in spec.modes() {
                let want = data.get(&k).copied().unwrap_or_default();
                let got = match sol.coefficients.get(q, &k) {
                    Some(f) => match f.eval_derivative(j, 0.0) {
                        Some(v) => v,
                        None => continue,
                    },
                    None => C64::new(0.0, 0.0),
                };
                worst = worst.max((got - want).norm());
            }
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub value: f64,
    pub threshold: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub problem: String,
    pub truncation: u32,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.passed())
    }

    /// Aligned-column table.
    pub fn to_text(&self) -> String {
        let header = ["check", "verdict", "value", "threshold", "note"];
        let rows: Vec<[String; 5]> = self
            .checks
            .iter()
            .map(|c| {
                [
                    c.name.clone(),
                    c.verdict.to_string(),
                    format!("{:.3e}", c.value),
                    format!("{:.3e}", c.threshold),
                    c.note.clone(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = format!("{} (N = {})\n", self.problem, self.truncation);
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                if i + 1 == cells.len() {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ");
                }
            }
            s.trim_end().to_string() + "\n"
        };
        out.push_str(&line(&header.map(String::from)));
        for r in &rows {
            out.push_str(&line(r));
        }
        let _ = writeln!(out, "overall: {}", Verdict::from_bool(self.passed()));
        out
    }
}

/// Whether the problem is a built-in one, unmodified apart from truncation.
fn builtin_match(spec: &ProblemSpec) -> Option<&'static str> {
    let name = crate::builtin::EXAMPLES.iter().map(|e| e.0).find(|n| *n == spec.name)?;
    let reference = builtin_example(name).ok()?.with_truncation(spec.truncation);
    (reference == *spec).then_some(name)
}

fn max_spatial_order(spec: &ProblemSpec) -> u32 {
    spec.operator
        .iter()
        .map(|t| t.spatial.derivative.iter().sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// Runs every applicable diagnostic on a solution of `spec`.
pub fn verify(spec: &ValidatedSpec, sol: &SeriesSolution) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let expected_hash = crate::document::spec_hash(spec.spec());
    checks.push(Check {
        name: "spec hash".into(),
        verdict: Verdict::from_bool(expected_hash == sol.provenance.spec_hash),
        value: 0.0,
        threshold: 0.0,
        note: format!("{}…", sol.provenance.spec_hash.chars().take(12).collect::<String>()),
    });

    let init = initial_fidelity(spec, sol);
    checks.push(Check {
        name: "initial data".into(),
        verdict: Verdict::from_bool(init <= INITIAL_TOLERANCE),
        value: init,
        threshold: INITIAL_TOLERANCE,
        note: "max |T^(j)(0) - r_jk|".into(),
    });

    let residual = residual_check(sol, spec, &Grid::standard(spec))?;
    let res_threshold = (RESIDUAL_TOLERANCE * residual.scale.max(1.0)).max(NOISE_FACTOR * residual.noise_floor);
    checks.push(Check {
        name: "residual".into(),
        verdict: residual.verdict(),
        value: residual.max_residual,
        threshold: res_threshold,
        note: format!("FD noise floor {:.1e}, {} points", residual.noise_floor, residual.points),
    });

    let d = max_spatial_order(spec);
    let mut tails = Vec::new();
    for (q, name) in spec.unknowns.iter().enumerate() {
        for j in 0..spec.orders()[q] {
            tails.push(TailSeries::from_coefficients(
                &format!("initial {name} order {j}"),
                &spec.basis,
                spec.initial_map(q, j),
                d.saturating_sub(j).max(1),
                Some(&spec.eval_box),
                spec.truncation,
            )?);
        }
        let t = spec.horizon / 2.0;
        let at_t: BTreeMap<BasisIndex, C64> =
            sol.coefficients.modes[q].iter().map(|(k, f)| (k.clone(), f.eval(t))).collect();
        tails.push(TailSeries::from_coefficients(
            &format!("{name} at t = {t}"),
            &spec.basis,
            &at_t,
            d.max(1),
            Some(&spec.eval_box),
            spec.truncation,
        )?);
    }
    for e in tail_report(&tails).entries {
        checks.push(Check {
            name: format!("tail: {}", e.label),
            verdict: e.verdict,
            value: e.ratio,
            threshold: TAIL_RATIO_LIMIT,
            note: format!("partial sums {:.4e} / {:.4e} (proxy)", e.partial_half, e.partial_full),
        });
    }

    let builtin = builtin_match(spec.spec());
    let bound = match builtin {
        Some("ma1") => Some((Bound::Growth, 0)),
        Some("qq0") => Some((Bound::Decay, 1)),
        _ => None,
    };
    if let Some((bound, k_min)) = bound {
        let report = bound_check(&sol.coefficients, 0, bound, (k_min, i64::from(spec.truncation)), spec.horizon)?;
        let note = match &report.first_violation {
            Some(v) => format!("violated at k = {}, t = {}", v.index, v.t),
            None => format!("{} modes x {} times", report.modes, report.samples),
        };
        checks.push(Check { name: format!("bound ({bound:?})").to_lowercase(), verdict: report.verdict, value: 0.0, threshold: 0.0, note });
    }
    if let Some(name) = builtin {
        if let Ok(reference) = Reference::named(name) {
            let grid = Grid::uniform(&spec.eval_box, &vec![if spec.basis.dim() == 1 { 20 } else { 8 }; spec.basis.dim()], spec.horizon, 10);
            let cmp = closed_form_compare(sol, &reference, &grid)?;
            checks.push(Check {
                name: "closed form".into(),
                verdict: Verdict::from_bool(cmp.max_deviation <= REFERENCE_TOLERANCE),
                value: cmp.max_deviation,
                threshold: REFERENCE_TOLERANCE,
                note: format!("{} points", cmp.points),
            });
        }
    }
    Ok(VerificationReport { problem: spec.name.clone(), truncation: spec.truncation, checks })
}
