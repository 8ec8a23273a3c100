//! Mode-by-mode solution of problems whose modes decouple.
//!
//! Constant-coefficient scalar modes of order at most two are solved exactly
//! in [`ExpPoly`]; everything else falls back to RK4 with dense output.
//! Modes with algebraic constraint rows (incompressible Stokes flow) are
//! solved by eliminating the algebraic unknowns first.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::basis::BasisIndex;
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::ode;
use crate::problem::{Incoming, ModeSystem, Structure, TimePoly, ValidatedSpec};
use crate::solution::{CoefficientSeries, Provenance, SeriesSolution, TimeFunction, Trajectory};
use crate::C64;

/// Step-doubling estimates above this are reported as stiffness warnings.
pub const STIFFNESS_THRESHOLD: f64 = 1e-6;

/// Cosine coefficients `A_k` (k ≥ 0) and sine coefficients `B_k` (k ≥ 1) to
/// coefficients of `e^{ikωx}` over all integers.
///
/// ```
/// use std::collections::BTreeMap;
/// use ftseries::{linear::convert_trig_to_complex, C64};
///
/// let b = BTreeMap::from([(1, C64::new(2.0, 0.0))]);
/// let c = convert_trig_to_complex(&BTreeMap::new(), &b);
/// assert_eq!(c[&1], C64::new(0.0, -1.0));
/// assert_eq!(c[&-1], C64::new(0.0, 1.0));
/// ```
pub fn convert_trig_to_complex(
    cos: &BTreeMap<i64, C64>,
    sin: &BTreeMap<i64, C64>,
) -> BTreeMap<i64, C64> {
    let mut out: BTreeMap<i64, C64> = BTreeMap::new();
    let mut add = |k: i64, v: C64| *out.entry(k).or_default() += v;
    for (&k, &a) in cos {
        if k == 0 {
            add(0, a);
        } else {
            add(k, a / 2.0);
            add(-k, a / 2.0);
        }
    }
    let two_i = C64::new(0.0, 2.0);
    for (&k, &b) in sin {
        if k != 0 {
            add(k, b / two_i);
            add(-k, -b / two_i);
        }
    }
    out.retain(|_, v| *v != C64::new(0.0, 0.0));
    out
}

/// A mode row with partner products resolved to constants and lower-mode
/// contributions folded into the right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedRow {
    /// `(unknown, order, coefficient)`, at most one entry per pair.
    pub terms: Vec<(usize, u32, TimePoly)>,
    pub rhs: ExpPoly,
}

impl ResolvedRow {
    fn add(&mut self, unknown: usize, order: u32, c: TimePoly) {
        match self.terms.iter_mut().find(|(u, o, _)| *u == unknown && *o == order) {
            Some(e) => e.2 = e.2.add(&c),
            None => self.terms.push((unknown, order, c)),
        }
        self.terms.retain(|e| !e.2.is_zero());
    }

    fn unknowns(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.terms.iter().map(|t| t.0).collect();
        u.sort_unstable();
        u.dedup();
        u
    }

    fn coefficient(&self, unknown: usize, order: u32) -> Option<&TimePoly> {
        self.terms.iter().find(|t| t.0 == unknown && t.1 == order).map(|t| &t.2)
    }
}

/// Resolves a mode's rows given access to already solved lower modes.
pub(crate) fn resolve_rows<F>(ms: &ModeSystem, lookup: F) -> Result<Vec<ResolvedRow>>
where
    F: Fn(&BasisIndex, usize) -> Result<ExpPoly>,
{
    let mut out = Vec::with_capacity(ms.rows.len());
    for row in &ms.rows {
        let mut r = ResolvedRow { terms: Vec::new(), rhs: ExpPoly::zero() };
        for e in &row.entries {
            let coeff = match &e.partner {
                None => e.coeff.clone(),
                Some((idx, q)) => {
                    let partner = lookup(idx, *q)?;
                    let value = partner
                        .constant_value()
                        .ok_or_else(|| Error::NonConstantCoefficient { index: ms.index.clone() })?;
                    e.coeff.scale(value)
                }
            };
            r.add(e.unknown, e.order, coeff);
        }
        let mut parts: Vec<ExpPoly> = vec![row.source.clone()];
        for inc in &row.incoming {
            parts.push(match inc {
                Incoming::Linear { from, unknown, order, coeff } => {
                    let mut f = lookup(from, *unknown)?;
                    for _ in 0..*order {
                        f = f.differentiate();
                    }
                    &coeff.to_exppoly() * &f
                }
                Incoming::Quadratic { left, right, coeff } => {
                    let l = lookup(&left.0, left.1)?;
                    let rr = lookup(&right.0, right.1)?;
                    (&l * &rr).scale(*coeff)
                }
            });
        }
        let weighted: Vec<(C64, &ExpPoly)> = parts.iter().map(|p| (C64::new(1.0, 0.0), p)).collect();
        r.rhs = ExpPoly::linear_combination(&weighted);
        out.push(r);
    }
    Ok(out)
}

fn no_dependencies(ms: &ModeSystem) -> Result<Vec<ResolvedRow>> {
    resolve_rows(ms, |idx, _| {
        Err(Error::MissingDependency { index: ms.index.clone(), missing: idx.clone() })
    })
}

/// Assigns each unknown the single row that mentions it, when rows are
/// decoupled.
fn row_assignment(ms: &ModeSystem, rows: &[ResolvedRow]) -> Option<Vec<Option<usize>>> {
    let mut owner = vec![None; ms.orders.len()];
    for (p, row) in rows.iter().enumerate() {
        match row.unknowns().as_slice() {
            [] => {}
            [q] => {
                if owner[*q].is_some() {
                    return None;
                }
                owner[*q] = Some(p);
            }
            _ => return None,
        }
    }
    Some(owner)
}

/// Whether the exact backend applies: decoupled scalar rows with constant
/// coefficients and order at most two.
pub fn closed_form_eligible(ms: &ModeSystem, rows: &[ResolvedRow]) -> bool {
    ms.constraints.is_empty()
        && row_assignment(ms, rows).is_some()
        && rows
            .iter()
            .all(|r| r.terms.iter().all(|(_, o, c)| *o <= 2 && c.as_constant().is_some()))
}

/// Closed-form solve of resolved rows.
pub(crate) fn closed_form_rows(ms: &ModeSystem, rows: &[ResolvedRow]) -> Result<Vec<ExpPoly>> {
    let k = &ms.index;
    let owner = row_assignment(ms, rows).ok_or_else(|| {
        Error::Validation(format!("mode {k}: coupled rows have no closed-form solver"))
    })?;
    let mut out = Vec::with_capacity(owner.len());
    for (q, row) in owner.iter().enumerate() {
        let init = &ms.initial[q];
        let m = ms.orders[q];
        let Some(p) = row else {
            if init.iter().all(|c| *c == C64::new(0.0, 0.0)) {
                out.push(ExpPoly::zero());
                continue;
            }
            return Err(Error::DegenerateMode { index: k.clone() });
        };
        let row = &rows[*p];
        if let Some(&(_, order, _)) = row.terms.iter().find(|t| t.1 > 2) {
            return Err(Error::UnsupportedOrder { index: k.clone(), order });
        }
        let coeff = |o: u32| -> Result<C64> {
            match row.coefficient(q, o) {
                None => Ok(C64::new(0.0, 0.0)),
                Some(c) => c
                    .as_constant()
                    .ok_or_else(|| Error::NonConstantCoefficient { index: k.clone() }),
            }
        };
        let lead = coeff(m)?;
        if lead == C64::new(0.0, 0.0) || row.terms.iter().any(|t| t.1 > m) {
            return Err(Error::DegenerateMode { index: k.clone() });
        }
        let src = row.rhs.scale(lead.inv());
        let sol = match m {
            0 => src,
            1 => ExpPoly::solve_first_order(coeff(0)? / lead, &src, init[0]),
            2 => ExpPoly::solve_second_order(coeff(1)? / lead, coeff(0)? / lead, &src, init[0], init[1]),
            order => return Err(Error::UnsupportedOrder { index: k.clone(), order }),
        };
        out.push(sol);
    }
    Ok(out)
}

/// Exact per-unknown solution of a mode with no lower-mode dependencies.
pub fn solve_mode_closed_form(ms: &ModeSystem) -> Result<Vec<ExpPoly>> {
    closed_form_rows(ms, &no_dependencies(ms)?)
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve_dense(mut m: Vec<Vec<C64>>, mut b: Vec<C64>) -> Option<Vec<C64>> {
    let n = b.len();
    let scale = m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))?;
        if m[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for c in col..n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

/// Numeric solve of resolved rows; returns one trajectory per unknown and
/// the step-doubling error estimate.
pub(crate) fn numeric_rows(
    ms: &ModeSystem,
    rows: &[ResolvedRow],
    horizon: f64,
    steps: u32,
) -> Result<(Vec<Trajectory>, f64)> {
    let k = &ms.index;
    let n = ms.orders.len();
    if let Some(&order) = ms.orders.iter().find(|&&m| m == 0) {
        return Err(Error::UnsupportedOrder { index: k.clone(), order });
    }
    if !ms.constraints.is_empty() {
        return Err(Error::Validation(format!(
            "mode {k}: constraint rows need the constrained solver"
        )));
    }
    // state layout: unknown q occupies offsets[q] .. offsets[q] + m_q
    let mut offsets = Vec::with_capacity(n);
    let mut size = 0;
    for &m in &ms.orders {
        offsets.push(size);
        size += m as usize;
    }
    let leading = |t: f64| -> Vec<Vec<C64>> {
        rows.iter()
            .map(|r| {
                (0..n)
                    .map(|q| r.coefficient(q, ms.orders[q]).map_or(C64::new(0.0, 0.0), |c| c.eval(t)))
                    .collect()
            })
            .collect()
    };
    if rows.iter().any(|r| r.terms.iter().any(|(q, o, _)| *o > ms.orders[*q])) {
        return Err(Error::DegenerateMode { index: k.clone() });
    }
    let failed = std::sync::atomic::AtomicBool::new(false);
    let rhs = |t: f64, y: &[C64]| -> Vec<C64> {
        let mut b: Vec<C64> = rows
            .iter()
            .map(|r| {
                let mut v = r.rhs.eval(t);
                for (q, o, c) in &r.terms {
                    if *o < ms.orders[*q] {
                        v -= c.eval(t) * y[offsets[*q] + *o as usize];
                    }
                }
                v
            })
            .collect();
        let top = match solve_dense(leading(t), std::mem::take(&mut b)) {
            Some(x) => x,
            None => {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                vec![C64::new(0.0, 0.0); n]
            }
        };
        let mut dy = vec![C64::new(0.0, 0.0); size];
        for q in 0..n {
            let m = ms.orders[q] as usize;
            for h in 0..m - 1 {
                dy[offsets[q] + h] = y[offsets[q] + h + 1];
            }
            dy[offsets[q] + m - 1] = top[q];
        }
        dy
    };
    let y0: Vec<C64> = (0..n).flat_map(|q| ms.initial[q].iter().copied()).collect();
    let run = ode::integrate(&rhs, &y0, 0.0, horizon, steps as usize);
    if failed.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::DegenerateMode { index: k.clone() });
    }
    let trajectories = (0..n)
        .map(|q| {
            let m = ms.orders[q] as usize;
            let mut samples: Vec<Vec<C64>> = (0..m)
                .map(|h| run.states.iter().map(|s| s[offsets[q] + h]).collect())
                .collect();
            samples.push(run.derivatives.iter().map(|d| d[offsets[q] + m - 1]).collect());
            Trajectory { t0: 0.0, t1: horizon, samples }
        })
        .collect();
    Ok((trajectories, run.error_estimate))
}

/// RK4 solve of a mode with no lower-mode dependencies over `[0, horizon]`.
///
/// Returns per-unknown trajectories and the step-doubling error estimate;
/// callers compare the estimate against [`STIFFNESS_THRESHOLD`].
pub fn solve_mode_numeric(ms: &ModeSystem, horizon: f64, steps: u32) -> Result<(Vec<Trajectory>, f64)> {
    numeric_rows(ms, &no_dependencies(ms)?, horizon, steps)
}

/// Solves a first-order mode with algebraic unknowns fixed by constraint
/// rows, as in incompressible flow: differentiating each constraint
/// eliminates the algebraic unknowns, then each dynamic unknown is an
/// integrating-factor solve.
pub(crate) fn constrained_rows(ms: &ModeSystem, rows: &[ResolvedRow]) -> Result<Vec<ExpPoly>> {
    let k = &ms.index;
    let n = ms.orders.len();
    let algebraic: Vec<usize> = (0..n).filter(|&q| ms.orders[q] == 0).collect();
    let bad = |why: &str| Error::Validation(format!("mode {k}: {why}"));
    if ms.orders.iter().any(|&m| m > 1) {
        return Err(bad("constrained modes must be first order"));
    }
    if algebraic.len() != ms.constraints.len() {
        return Err(bad("need one constraint row per algebraic unknown"));
    }
    // dynamic row for unknown q: T_q' + a_q T_q + Σ g_qs T_s = rhs_q
    let mut rate = vec![C64::new(0.0, 0.0); n];
    let mut coupling = vec![vec![C64::new(0.0, 0.0); algebraic.len()]; n];
    let mut source = vec![ExpPoly::zero(); n];
    let mut owned = vec![false; n];
    for row in rows {
        let leading: Vec<usize> = row.terms.iter().filter(|t| t.1 == 1).map(|t| t.0).collect();
        let q = match leading.as_slice() {
            [] if row.terms.is_empty() && row.rhs.is_zero() => continue,
            [q] => *q,
            _ => return Err(bad("each dynamic row needs exactly one time derivative")),
        };
        if owned[q] {
            return Err(bad("two rows drive the same unknown"));
        }
        owned[q] = true;
        let constant = |c: &TimePoly| {
            c.as_constant().ok_or_else(|| Error::NonConstantCoefficient { index: k.clone() })
        };
        let lead = constant(row.coefficient(q, 1).expect("leading term present"))?;
        for (s, o, c) in &row.terms {
            let c = constant(c)? / lead;
            match (*o, algebraic.iter().position(|a| a == s)) {
                (1, _) => {}
                (0, Some(j)) => coupling[q][j] += c,
                (0, None) if *s == q => rate[q] += c,
                _ => return Err(bad("dynamic unknowns may not couple to each other")),
            }
        }
        source[q] = row.rhs.scale(lead.inv());
    }
    let dynamic: Vec<usize> = (0..n).filter(|&q| ms.orders[q] == 1).collect();
    if let Some(q) = dynamic.iter().find(|&&q| !owned[q]) {
        return Err(bad(&format!("unknown {} has no dynamic row", q + 1)));
    }
    // constraint rows in terms of dynamic unknowns
    let cmat: Vec<Vec<C64>> = ms
        .constraints
        .iter()
        .map(|row| {
            let mut v = vec![C64::new(0.0, 0.0); n];
            for &(q, c) in row {
                v[q] += c;
            }
            v
        })
        .collect();
    if cmat.iter().flatten().enumerate().any(|(i, c)| algebraic.contains(&(i % n)) && *c != C64::new(0.0, 0.0)) {
        return Err(bad("constraints may only involve dynamic unknowns"));
    }
    for row in &cmat {
        let rates: Vec<C64> = dynamic.iter().filter(|&&q| row[q] != C64::new(0.0, 0.0)).map(|&q| rate[q]).collect();
        if let Some(first) = rates.first() {
            if rates.iter().any(|r| (r - first).norm() > 1e-12 * first.norm().max(1.0)) {
                return Err(bad("constrained unknowns need equal decay rates"));
            }
        }
    }
    // Σ_q C_rq (source_q − Σ_j g_qj P_j) = 0  →  (C G) P = C · source
    let na = algebraic.len();
    let cg: Vec<Vec<C64>> = cmat
        .iter()
        .map(|row| (0..na).map(|j| dynamic.iter().map(|&q| row[q] * coupling[q][j]).sum()).collect())
        .collect();
    let gauge = cmat.iter().flatten().all(|c| *c == C64::new(0.0, 0.0))
        && coupling.iter().flatten().all(|c| *c == C64::new(0.0, 0.0));
    let mut solution = vec![ExpPoly::zero(); n];
    if !gauge && na > 0 {
        let mut inverse = vec![vec![C64::new(0.0, 0.0); na]; na];
        for j in 0..na {
            let mut e = vec![C64::new(0.0, 0.0); na];
            e[j] = C64::new(1.0, 0.0);
            let col = solve_dense(cg.clone(), e).ok_or_else(|| Error::DegenerateMode { index: k.clone() })?;
            for i in 0..na {
                inverse[i][j] = col[i];
            }
        }
        for (i, &a) in algebraic.iter().enumerate() {
            let mut parts = Vec::new();
            for (r, row) in cmat.iter().enumerate() {
                for &q in &dynamic {
                    let w = inverse[i][r] * row[q];
                    if w != C64::new(0.0, 0.0) {
                        parts.push((w, &source[q]));
                    }
                }
            }
            solution[a] = ExpPoly::linear_combination(&parts);
        }
    }
    for &q in &dynamic {
        let mut parts = vec![(C64::new(1.0, 0.0), &source[q])];
        for (j, &a) in algebraic.iter().enumerate() {
            if coupling[q][j] != C64::new(0.0, 0.0) {
                parts.push((-coupling[q][j], &solution[a]));
            }
        }
        let rhs = ExpPoly::linear_combination(&parts);
        solution[q] = ExpPoly::solve_first_order(rate[q], &rhs, ms.initial[q][0]);
    }
    Ok(solution)
}

/// How one mode was solved.
pub(crate) struct ModeOutcome {
    pub functions: Vec<TimeFunction>,
    pub warning: Option<String>,
}

pub(crate) fn solve_resolved(
    spec: &ValidatedSpec,
    ms: &ModeSystem,
    rows: &[ResolvedRow],
) -> Result<ModeOutcome> {
    if !ms.constraints.is_empty() {
        let sol = constrained_rows(ms, rows)?;
        return Ok(ModeOutcome {
            functions: sol.into_iter().map(TimeFunction::Closed).collect(),
            warning: None,
        });
    }
    if closed_form_eligible(ms, rows) {
        match closed_form_rows(ms, rows) {
            Ok(sol) => {
                return Ok(ModeOutcome {
                    functions: sol.into_iter().map(TimeFunction::Closed).collect(),
                    warning: None,
                })
            }
            Err(Error::UnsupportedOrder { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let (traj, estimate) = numeric_rows(ms, rows, spec.horizon, spec.numeric_steps)?;
    let warning = (estimate > STIFFNESS_THRESHOLD).then(|| {
        format!(
            "mode {}: step-doubling error estimate {estimate:.3e} exceeds {STIFFNESS_THRESHOLD:e}",
            ms.index
        )
    });
    Ok(ModeOutcome { functions: traj.into_iter().map(TimeFunction::Sampled).collect(), warning })
}

pub(crate) fn new_solution(spec: &ValidatedSpec) -> SeriesSolution {
    SeriesSolution {
        unknowns: spec.unknowns.clone(),
        coefficients: CoefficientSeries::new(spec.basis.clone(), spec.n()),
        provenance: Provenance {
            name: spec.name.clone(),
            spec_hash: crate::document::spec_hash(spec.spec()),
            truncation: spec.truncation,
            horizon: spec.horizon,
            eval_box: spec.eval_box.clone(),
        },
        warnings: Vec::new(),
    }
}

/// Solves every mode of a diagonal problem independently (in parallel) and
/// merges the results by index.
pub fn solve_all(spec: &ValidatedSpec) -> Result<SeriesSolution> {
    if spec.detect_structure() != Structure::Diagonal {
        return Err(Error::Validation("modes are coupled; use the triangular solver".into()));
    }
    let modes = spec.modes();
    let results: Vec<Result<Option<(BasisIndex, ModeOutcome)>>> = modes
        .par_iter()
        .map(|k| {
            let ms = spec.assemble_mode_system(k)?;
            if ms.is_trivial() {
                return Ok(None);
            }
            let rows = no_dependencies(&ms)?;
            Ok(Some((k.clone(), solve_resolved(spec, &ms, &rows)?)))
        })
        .collect();
    let mut sol = new_solution(spec);
    for r in results {
        if let Some((k, outcome)) = r? {
            for (q, f) in outcome.functions.into_iter().enumerate() {
                sol.coefficients.modes[q].insert(k.clone(), f);
            }
            sol.warnings.extend(outcome.warning);
        }
    }
    Ok(sol)
}

/// Solves a problem with algebraic constraint rows (velocity–pressure
/// systems). The algebraic unknowns' zero mode is fixed to 0.
pub fn solve_stokes(spec: &ValidatedSpec) -> Result<SeriesSolution> {
    if spec.constraints.is_empty() {
        return Err(Error::Validation("problem has no constraint rows".into()));
    }
    solve_all(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{Axis, BasisFamily, Expansion, SpatialTerm};
    use crate::problem::{InitialCondition, OperatorTerm, ProblemSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trig_conversion() {
        let one = BTreeMap::from([(0, c(1.0))]);
        assert_eq!(convert_trig_to_complex(&one, &BTreeMap::new()), one);
        let a = BTreeMap::from([(1, c(2.0))]);
        assert_eq!(
            convert_trig_to_complex(&a, &BTreeMap::new()),
            BTreeMap::from([(-1, c(1.0)), (1, c(1.0))])
        );
        let b = BTreeMap::from([(1, c(2.0))]);
        let conv = convert_trig_to_complex(&BTreeMap::new(), &b);
        for x in [0.3, 1.1, 2.9] {
            let v = conv[&1] * C64::new(0.0, x).exp() + conv[&-1] * C64::new(0.0, -x).exp();
            assert_abs_diff_eq!(v.re, 2.0 * x.sin(), epsilon = 1e-15);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        }
    }

    fn wave(coeffs: &[(i64, f64)]) -> ProblemSpec {
        let mut s = ProblemSpec::new("wave", BasisFamily::new(vec![Axis::sine(1.0)]), &["u"]);
        s.operator.push(OperatorTerm::new(0, 0, 2, SpatialTerm::identity(1)));
        s.operator.push(OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[2]).with_coeff(c(-1.0))));
        s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::explicit_1d(coeffs) });
        s.initial.push(InitialCondition { unknown: 0, order: 1, data: Expansion::explicit_1d(&[]) });
        s.truncation = 5;
        s.horizon = 2.0;
        s.eval_box = vec![(0.0, PI)];
        s
    }

    #[test]
    fn wave_reproduces_initial_data() {
        let coeffs: Vec<(i64, f64)> = (1..=5).map(|k| (k, 1.0 / (k as f64).powi(4))).collect();
        let v = wave(&coeffs).validate().unwrap();
        let sol = solve_all(&v).unwrap();
        assert_eq!(sol.coefficients.modes[0].len(), 5);
        for i in 0..10 {
            let x = PI * i as f64 / 9.0;
            let expected: f64 = coeffs.iter().map(|&(k, a)| a * (k as f64 * x).sin()).sum();
            assert_abs_diff_eq!(sol.eval(0, &[x], 0.0).unwrap().re, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn numeric_and_closed_backends_agree() {
        let v = wave(&[(1, 1.0)]).validate().unwrap();
        let ms = v.assemble_mode_system(&BasisIndex::scalar(1)).unwrap();
        let exact = solve_mode_closed_form(&ms).unwrap();
        let (traj, est) = solve_mode_numeric(&ms, 2.0, 1024).unwrap();
        assert!(est < 1e-10);
        for i in 0..10 {
            let t = 2.0 * i as f64 / 9.0;
            assert_abs_diff_eq!(traj[0].eval(t).re, exact[0].eval(t).re, epsilon = 1e-8);
        }
    }

    #[test]
    fn empty_data_gives_zero_solution() {
        let v = wave(&[]).validate().unwrap();
        let sol = solve_all(&v).unwrap();
        for x in [0.5, 1.5] {
            assert_eq!(sol.eval(0, &[x], 1.0).unwrap(), c(0.0));
        }
    }

    #[test]
    fn dense_solver() {
        let m = vec![vec![c(0.0), c(2.0)], vec![c(1.0), c(1.0)]];
        let x = solve_dense(m, vec![c(4.0), c(3.0)]).unwrap();
        assert_abs_diff_eq!(x[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1].re, 2.0, epsilon = 1e-15);
        assert!(solve_dense(vec![vec![c(1.0), c(1.0)], vec![c(2.0), c(2.0)]], vec![c(0.0); 2]).is_none());
    }
}
