//! Sequential solution of modes coupled to strictly lower modes.
//!
//! Index shifts, products with known series and quadratic Cauchy products all
//! make mode `k` depend on modes that come earlier in the (norm, lex) order.
//! Solving in that order turns each mode into a scalar constant-coefficient
//! ODE whose source is an exact [`ExpPoly`] built from earlier modes.
//!
//! ```
//! use ftseries::{builtin, triangular, BasisIndex, ExpPoly, C64};
//!
//! let spec = builtin::builtin_example("burgers").unwrap().with_truncation(3).validate().unwrap();
//! let sol = triangular::solve_triangular(&spec).unwrap();
//! // T_3 = (3/2) t² e^{-3t}
//! let t3 = sol.coefficients.closed(0, &BasisIndex::scalar(3)).unwrap();
//! assert!(t3.approx_eq(&ExpPoly::term(C64::new(1.5, 0.0), 2, C64::new(-3.0, 0.0)), 1e-12));
//! ```

use std::collections::BTreeMap;

use crate::basis::{BasisFamily, BasisIndex, SpatialTerm};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::linear::{self, ResolvedRow};
use crate::problem::{Incoming, ModeSystem, ValidatedSpec};
use crate::solution::{CoefficientSeries, SeriesSolution, TimeFunction};
use crate::C64;

/// Hard cap on the number of terms in any one mode's expressions.
pub const TERM_LIMIT: usize = 10_000;

/// One side of a convolution.
#[derive(Clone, Copy, Debug)]
pub enum Operand<'a> {
    /// Time-independent known coefficients.
    Known(&'a BTreeMap<BasisIndex, C64>),
    /// Solved coefficients of one unknown; an absent index is unsolved.
    Solved { series: &'a CoefficientSeries, unknown: usize },
}

/// An operand with a spatial derivative applied; the derivative's
/// eigen-multiplier is the per-index weight and its shift offsets the sum.
#[derive(Clone, Debug)]
pub struct ConvolutionFactor<'a> {
    pub operand: Operand<'a>,
    pub derivative: Vec<u32>,
}

impl<'a> ConvolutionFactor<'a> {
    pub fn new(operand: Operand<'a>, derivative: &[u32]) -> Self {
        ConvolutionFactor { operand, derivative: derivative.to_vec() }
    }
}

/// Coefficient of `ξ_target` in the product `left · right`, summed over all
/// splittings except those where a solved operand is taken at `target`
/// itself (those belong to the target mode's own equation).
///
/// Both operands are restricted to `ball`.
pub fn convolve(
    family: &BasisFamily,
    left: &ConvolutionFactor<'_>,
    right: &ConvolutionFactor<'_>,
    target: &BasisIndex,
    ball: &[BasisIndex],
) -> Result<ExpPoly> {
    let lop = SpatialTerm::derivative(&left.derivative);
    let rop = SpatialTerm::derivative(&right.derivative);
    let offset = BasisIndex::new(family.term_shift(&lop)?).add(&BasisIndex::new(family.term_shift(&rop)?));
    let value = |op: &Operand<'_>, k: &BasisIndex| -> Result<Option<ExpPoly>> {
        match op {
            Operand::Known(map) => Ok(map.get(k).map(|&c| ExpPoly::constant(c))),
            Operand::Solved { series, unknown } => match series.get(*unknown, k) {
                Some(TimeFunction::Closed(p)) => Ok(Some(p.clone())),
                Some(TimeFunction::Sampled(_)) => Err(Error::NonConstantCoefficient { index: target.clone() }),
                None => Err(Error::MissingDependency { index: target.clone(), missing: k.clone() }),
            },
        }
    };
    let in_ball = |k: &BasisIndex| ball.binary_search(k).is_ok();
    let mut products = Vec::new();
    for a in ball {
        let b = target.sub(&offset).sub(a);
        let own = |op: &Operand<'_>, k: &BasisIndex| matches!(op, Operand::Solved { .. }) && k == target;
        if own(&left.operand, a) || own(&right.operand, &b) || !in_ball(&b) {
            continue;
        }
        let w = family.apply_spatial_term(&lop, a)?.multiplier * family.apply_spatial_term(&rop, &b)?.multiplier;
        if w == C64::new(0.0, 0.0) {
            continue;
        }
        let Some(l) = value(&left.operand, a)? else { continue };
        let Some(r) = value(&right.operand, &b)? else { continue };
        products.push((w, &l * &r));
    }
    let parts: Vec<(C64, &ExpPoly)> = products.iter().map(|(w, p)| (*w, p)).collect();
    Ok(ExpPoly::linear_combination(&parts))
}

fn check_growth(k: &BasisIndex, p: &ExpPoly) -> Result<()> {
    if p.len() > TERM_LIMIT {
        Err(Error::TermGrowth { index: k.clone(), limit: TERM_LIMIT })
    } else {
        Ok(())
    }
}

fn lookup<'a>(series: &'a CoefficientSeries, k: &'a BasisIndex) -> impl Fn(&BasisIndex, usize) -> Result<ExpPoly> + 'a {
    move |idx, q| match series.get(q, idx) {
        Some(TimeFunction::Closed(p)) => Ok(p.clone()),
        Some(TimeFunction::Sampled(_)) => Err(Error::NonConstantCoefficient { index: k.clone() }),
        None => Err(Error::MissingDependency { index: k.clone(), missing: idx.clone() }),
    }
}

/// Solves all modes in ascending order, each in closed form.
///
/// Every processed mode is stored, including identically zero ones, so an
/// absent index always means "not solved".
pub fn solve_triangular(spec: &ValidatedSpec) -> Result<SeriesSolution> {
    let mut sol = linear::new_solution(spec);
    for k in spec.modes() {
        let ms = spec.assemble_mode_system(&k)?;
        let rows = linear::resolve_rows(&ms, lookup(&sol.coefficients, &k))?;
        for r in &rows {
            check_growth(&k, &r.rhs)?;
        }
        let functions = if ms.constraints.is_empty() {
            linear::closed_form_rows(&ms, &rows)?
        } else {
            linear::constrained_rows(&ms, &rows)?
        };
        for (q, f) in functions.into_iter().enumerate() {
            check_growth(&k, &f)?;
            sol.coefficients.modes[q].insert(k.clone(), TimeFunction::Closed(f));
        }
    }
    Ok(sol)
}

/// Left-hand side minus right-hand side of every row of mode `k`, with the
/// solved family substituted. Zero in canonical form when the mode's ODE is
/// satisfied exactly.
pub fn mode_residual(spec: &ValidatedSpec, sol: &SeriesSolution, k: &BasisIndex) -> Result<Vec<ExpPoly>> {
    let ms: ModeSystem = spec.assemble_mode_system(k)?;
    let series = &sol.coefficients;
    let get = lookup(series, k);
    let own = |q: usize| -> Result<ExpPoly> {
        match series.get(q, k) {
            Some(TimeFunction::Closed(p)) => Ok(p.clone()),
            Some(TimeFunction::Sampled(_)) => Err(Error::NonConstantCoefficient { index: k.clone() }),
            None => Ok(ExpPoly::zero()),
        }
    };
    let mut out = Vec::new();
    for row in &ms.rows {
        let mut parts: Vec<ExpPoly> = Vec::new();
        for e in &row.entries {
            let mut f = own(e.unknown)?;
            for _ in 0..e.order {
                f = f.differentiate();
            }
            let mut term = &e.coeff.to_exppoly() * &f;
            if let Some((idx, q)) = &e.partner {
                term = &term * &get(idx, *q)?;
            }
            parts.push(term);
        }
        parts.push(-&row.source);
        for inc in &row.incoming {
            let rhs = match inc {
                Incoming::Linear { from, unknown, order, coeff } => {
                    let mut f = get(from, *unknown)?;
                    for _ in 0..*order {
                        f = f.differentiate();
                    }
                    &coeff.to_exppoly() * &f
                }
                Incoming::Quadratic { left, right, coeff } => {
                    (&get(&left.0, left.1)? * &get(&right.0, right.1)?).scale(*coeff)
                }
            };
            parts.push(-rhs);
        }
        let weighted: Vec<(C64, &ExpPoly)> = parts.iter().map(|p| (C64::new(1.0, 0.0), p)).collect();
        out.push(ExpPoly::linear_combination(&weighted));
    }
    for c in &ms.constraints {
        let fs: Vec<ExpPoly> = c.iter().map(|(q, _)| own(*q)).collect::<Result<_>>()?;
        let parts: Vec<(C64, &ExpPoly)> = c.iter().zip(&fs).map(|((_, w), f)| (*w, f)).collect();
        out.push(ExpPoly::linear_combination(&parts));
    }
    Ok(out)
}

/// Resolved rows of mode `k` against a solution (exposed for inspection).
pub fn resolved_rows(spec: &ValidatedSpec, sol: &SeriesSolution, k: &BasisIndex) -> Result<Vec<ResolvedRow>> {
    let ms = spec.assemble_mode_system(k)?;
    linear::resolve_rows(&ms, lookup(&sol.coefficients, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Axis;
    use crate::builtin::builtin_example;
    use crate::exppoly::Term;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn k(i: i64) -> BasisIndex {
        BasisIndex::scalar(i)
    }

    fn solve(name: &str, n: u32) -> (ValidatedSpec, SeriesSolution) {
        let spec = builtin_example(name).unwrap().with_truncation(n).validate().unwrap();
        let sol = solve_triangular(&spec).unwrap();
        (spec, sol)
    }

    #[test]
    fn burgers_matches_closed_form() {
        let (_, sol) = solve("burgers", 6);
        for j in 1..=6i64 {
            let kf = j as f64;
            let coeff = (-1f64).powi(j as i32 + 1) * kf.powi(j as i32 - 1)
                / (1..=j).map(|m| m as f64).product::<f64>();
            let expected = ExpPoly::term(c(coeff), (j - 1) as u32, c(-kf));
            assert!(sol.coefficients.closed(0, &k(j)).unwrap().approx_eq(&expected, 1e-12), "k = {j}");
        }
        assert_eq!(sol.coefficients.closed(0, &k(0)).unwrap(), &ExpPoly::constant(c(1.0)));
    }

    #[test]
    fn ma1_first_modes() {
        let (_, sol) = solve("ma1", 4);
        let t = |i| sol.coefficients.closed(0, &k(i)).unwrap().clone();
        assert_eq!(t(0), ExpPoly::constant(c(1.0)));
        assert!(t(1).approx_eq(&ExpPoly::polynomial(&[c(1.0), c(0.5), c(0.25)]), 1e-14));
        let t2 = ExpPoly::polynomial(&[c(0.0), c(0.5), c(1.0 / 12.0), c(1.0 / 36.0)]);
        assert!(t(2).approx_eq(&t2, 1e-14));
    }

    #[test]
    fn qq0_first_modes() {
        let (_, sol) = solve("qq0", 4);
        let t = |i| sol.coefficients.closed(0, &k(i)).unwrap().clone();
        assert_eq!(t(1), ExpPoly::term(c(1.0), 0, c(-2.0)));
        assert_eq!(t(2), ExpPoly::term(c(1.0), 0, c(-6.0)));
        let t3 = ExpPoly::from_terms([Term::new(c(-0.125), 0, c(-12.0)), Term::new(c(0.125), 0, c(-4.0))]);
        assert!(t(3).approx_eq(&t3, 1e-14));
    }

    #[test]
    fn ex5551_first_modes() {
        let (_, sol) = solve("ex5551", 5);
        let t = |i| sol.coefficients.closed(0, &k(i)).unwrap().clone();
        assert_eq!(t(1), ExpPoly::term(c(1.0), 0, c(-1.0)));
        assert!(t(2).is_zero() && t(4).is_zero());
        let t3 = ExpPoly::from_terms([Term::new(c(-1.0 / 6.0), 0, c(-1.0)), Term::new(c(0.25), 1, c(-1.0))]);
        assert!(t(3).approx_eq(&t3, 1e-14));
    }

    #[test]
    fn convolution_examples() {
        let (spec, sol) = solve("burgers", 4);
        let ball = spec.modes();
        let u = Operand::Solved { series: &sol.coefficients, unknown: 0 };
        let v = convolve(&spec.basis, &ConvolutionFactor::new(u, &[0]), &ConvolutionFactor::new(u, &[1]), &k(2), &ball)
            .unwrap();
        assert_eq!(v, ExpPoly::term(c(1.0), 0, c(-2.0)));

        let (spec, sol) = solve("ma1", 4);
        let ball = spec.modes();
        let known = spec.series_map(0).clone();
        let v = convolve(
            &spec.basis,
            &ConvolutionFactor::new(Operand::Known(&known), &[0]),
            &ConvolutionFactor::new(Operand::Solved { series: &sol.coefficients, unknown: 0 }, &[0]),
            &k(2),
            &ball,
        )
        .unwrap();
        assert!(v.approx_eq(&ExpPoly::polynomial(&[c(1.5), c(0.5), c(0.25)]), 1e-14));
    }

    #[test]
    fn convolution_with_zero_modes_is_zero() {
        let family = BasisFamily::new(vec![Axis::real_exponential(1.0, 0.0)]);
        let ball = family.ball(4);
        let zeros: BTreeMap<BasisIndex, C64> = BTreeMap::new();
        let f = ConvolutionFactor::new(Operand::Known(&zeros), &[0]);
        assert!(convolve(&family, &f, &f, &k(3), &ball).unwrap().is_zero());
    }

    #[test]
    fn missing_dependency_is_reported() {
        let family = BasisFamily::new(vec![Axis::real_exponential(1.0, 0.0)]);
        let ball = family.ball(3);
        let series = CoefficientSeries::new(family.clone(), 1);
        let f = ConvolutionFactor::new(Operand::Solved { series: &series, unknown: 0 }, &[0]);
        assert!(matches!(
            convolve(&family, &f, &f, &k(2), &ball),
            Err(Error::MissingDependency { .. })
        ));
    }

    #[test]
    fn recurrences_have_zero_residual() {
        for (name, n) in [("burgers", 12), ("ma1", 12), ("qq0", 10), ("ex5551", 9)] {
            let (spec, sol) = solve(name, n);
            for kk in spec.modes() {
                for r in mode_residual(&spec, &sol, &kk).unwrap() {
                    assert!(r.is_zero(), "{name} mode {kk}: {r}");
                }
            }
        }
    }
}
