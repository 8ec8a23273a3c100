//! Exponential polynomials: finite sums `Σ c · t^p · e^{q t}` with complex `c`, `q`.
//!
//! This is the closed-form algebra every mode coefficient `T_k(t)` lives in. It
//! is closed under addition, multiplication, differentiation and definite
//! integration from zero, which is exactly what integrating-factor solves of
//! constant-coefficient linear ODEs need.
//!
//! Trigonometric time dependence is expressed through complex rates:
//! `cos ωt = ½e^{iωt} + ½e^{-iωt}`.
//!
//! ```
//! use ftseries::{ExpPoly, C64};
//!
//! // T' + 2T = -e^{-2t}, T(0) = 0  has the resonant solution -t e^{-2t}
//! let source = ExpPoly::term(C64::new(-1.0, 0.0), 0, C64::new(-2.0, 0.0));
//! let t = ExpPoly::solve_first_order(C64::new(2.0, 0.0), &source, C64::new(0.0, 0.0));
//! assert_eq!(t, ExpPoly::term(C64::new(-1.0, 0.0), 1, C64::new(-2.0, 0.0)));
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::C64;

/// Relative cancellation threshold used when merging like terms.
///
/// A merged coefficient is dropped when its magnitude is at most this fraction
/// of the summed magnitudes of its contributions.
pub const CANCELLATION_TOL: f64 = 1e-12;

/// Two rates closer than this are treated as equal by the ODE solvers.
pub const RESONANCE_TOL: f64 = 1e-10;

/// One summand `coeff · t^power · e^{rate·t}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub power: u32,
    pub rate: C64,
}

impl Term {
    pub fn new(coeff: C64, power: u32, rate: C64) -> Self {
        Term { coeff, power, rate }
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.coeff * t.powi(self.power as i32) * (self.rate * t).exp()
    }

    /// The archive quintuple `(re c, im c, p, re q, im q)`.
    pub fn to_quintuple(&self) -> [f64; 5] {
        [
            self.coeff.re,
            self.coeff.im,
            f64::from(self.power),
            self.rate.re,
            self.rate.im,
        ]
    }

    pub fn from_quintuple(q: [f64; 5]) -> Option<Self> {
        let p = q[2];
        if !(p >= 0.0 && p.fract() == 0.0 && p <= f64::from(u32::MAX)) {
            return None;
        }
        Some(Term::new(
            C64::new(q[0], q[1]),
            p as u32,
            C64::new(q[3], q[4]),
        ))
    }
}

fn positive_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn key_cmp(a: &Term, b: &Term) -> Ordering {
    a.rate
        .re
        .total_cmp(&b.rate.re)
        .then(a.rate.im.total_cmp(&b.rate.im))
        .then(a.power.cmp(&b.power))
}

fn same_key(a: &Term, b: &Term) -> bool {
    a.power == b.power && a.rate == b.rate
}

/// A finite exponential polynomial in canonical form.
///
/// Canonical form: terms sorted by `(re rate, im rate, power)`, no repeated
/// `(power, rate)` keys, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::term(c, 0, C64::new(0.0, 0.0))
    }

    pub fn term(coeff: C64, power: u32, rate: C64) -> Self {
        Self::from_terms(std::iter::once(Term::new(coeff, power, rate)))
    }

    /// Polynomial `Σ coeffs[j] t^j`.
    pub fn polynomial(coeffs: &[C64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| Term::new(c, j as u32, C64::new(0.0, 0.0))),
        )
    }

    /// Builds the canonical form of an arbitrary list of terms.
    pub fn from_terms<I: IntoIterator<Item = Term>>(raw: I) -> Self {
        let mut raw: Vec<Term> = raw
            .into_iter()
            .filter(|t| t.coeff != C64::new(0.0, 0.0))
            .map(|t| Term {
                rate: C64::new(positive_zero(t.rate.re), positive_zero(t.rate.im)),
                ..t
            })
            .collect();
        raw.sort_by(key_cmp);

        let mut terms = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            let mut sum = raw[i].coeff;
            let mut magnitude = sum.norm();
            let mut j = i + 1;
            while j < raw.len() && same_key(&raw[i], &raw[j]) {
                sum += raw[j].coeff;
                magnitude += raw[j].coeff.norm();
                j += 1;
            }
            let cancelled = j > i + 1 && sum.norm() <= CANCELLATION_TOL * magnitude;
            if sum != C64::new(0.0, 0.0) && !cancelled {
                terms.push(Term { coeff: sum, ..raw[i] });
            }
            i = j;
        }
        ExpPoly { terms }
    }

    /// `Σ weight_i · poly_i`, merged in one pass so cancellation is measured
    /// against every contribution.
    pub fn linear_combination(parts: &[(C64, &ExpPoly)]) -> Self {
        Self::from_terms(parts.iter().flat_map(|&(w, p)| {
            p.terms.iter().map(move |t| Term {
                coeff: w * t.coeff,
                ..*t
            })
        }))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the function is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<C64> {
        match self.terms.as_slice() {
            [] => Some(C64::new(0.0, 0.0)),
            [t] if t.power == 0 && t.rate == C64::new(0.0, 0.0) => Some(t.coeff),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    /// Value of the `order`-th derivative at `t`.
    pub fn eval_derivative(&self, order: u32, t: f64) -> C64 {
        let mut d = self.clone();
        for _ in 0..order {
            d = d.differentiate();
        }
        d.eval(t)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term {
            coeff: c * t.coeff,
            ..*t
        }))
    }

    /// Multiplies by `e^{shift·t}`.
    pub fn shift_rate(&self, shift: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term {
            rate: t.rate + shift,
            ..*t
        }))
    }

    /// Complex conjugate as a function of real `t`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term {
            coeff: t.coeff.conj(),
            power: t.power,
            rate: t.rate.conj(),
        }))
    }

    pub fn mul(&self, other: &ExpPoly) -> Self {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(Term::new(a.coeff * b.coeff, a.power + b.power, a.rate + b.rate));
            }
        }
        Self::from_terms(raw)
    }

    pub fn differentiate(&self) -> Self {
        let mut raw = Vec::with_capacity(2 * self.len());
        for t in &self.terms {
            if t.power > 0 {
                raw.push(Term::new(
                    t.coeff * f64::from(t.power),
                    t.power - 1,
                    t.rate,
                ));
            }
            raw.push(Term::new(t.coeff * t.rate, t.power, t.rate));
        }
        Self::from_terms(raw)
    }

    /// The antiderivative `F` with `F(0) = 0`.
    pub fn integrate_from_zero(&self) -> Self {
        let mut raw = Vec::new();
        for t in &self.terms {
            if t.rate == C64::new(0.0, 0.0) {
                raw.push(Term::new(
                    t.coeff / f64::from(t.power + 1),
                    t.power + 1,
                    t.rate,
                ));
            } else {
                push_exponential_antiderivative(&mut raw, t.coeff, t.power, t.rate, t.rate, C64::new(0.0, 0.0));
            }
        }
        Self::from_terms(raw)
    }

    /// Solves `T' + rate·T = source`, `T(0) = initial` by the integrating
    /// factor: `T = e^{-rate·t} (initial + ∫₀ᵗ source(s) e^{rate·s} ds)`.
    ///
    /// Source terms whose rate is within [`RESONANCE_TOL`] of `-rate` are
    /// integrated as polynomials and produce `t`-multiplied homogeneous terms.
    pub fn solve_first_order(rate: C64, source: &ExpPoly, initial: C64) -> Self {
        let homogeneous = -rate;
        let mut raw = vec![Term::new(initial, 0, homogeneous)];
        for t in &source.terms {
            let mu = t.rate + rate;
            if mu.norm() < RESONANCE_TOL {
                raw.push(Term::new(
                    t.coeff / f64::from(t.power + 1),
                    t.power + 1,
                    homogeneous,
                ));
            } else {
                push_exponential_antiderivative(&mut raw, t.coeff, t.power, mu, t.rate, homogeneous);
            }
        }
        Self::from_terms(raw)
    }

    /// Solves `T'' + a T' + b T = source`, `T(0) = y0`, `T'(0) = y1`.
    ///
    /// The operator is factored as `(D - r1)(D - r2)` over the characteristic
    /// roots and inverted by two first-order solves, which covers distinct,
    /// double and resonant cases uniformly.
    pub fn solve_second_order(a: C64, b: C64, source: &ExpPoly, y0: C64, y1: C64) -> Self {
        let (r1, r2) = characteristic_roots(a, b);
        let w = Self::solve_first_order(-r1, source, y1 - r2 * y0);
        Self::solve_first_order(-r2, &w, y0)
    }

    /// Structural comparison with a relative tolerance on coefficients and
    /// rates; keys must match one-to-one.
    pub fn approx_eq(&self, other: &ExpPoly, tol: f64) -> bool {
        self.len() == other.len()
            && self.terms.iter().zip(&other.terms).all(|(a, b)| {
                a.power == b.power
                    && (a.rate - b.rate).norm() <= tol * a.rate.norm().max(1.0)
                    && (a.coeff - b.coeff).norm() <= tol * a.coeff.norm().max(b.coeff.norm())
            })
    }

    pub fn to_quintuples(&self) -> Vec<[f64; 5]> {
        self.terms.iter().map(Term::to_quintuple).collect()
    }

    /// Builds from archive quintuples; `None` on a malformed power.
    pub fn from_quintuples(q: &[[f64; 5]]) -> Option<Self> {
        let terms = q
            .iter()
            .map(|&x| Term::from_quintuple(x))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_terms(terms))
    }
}

/// Pushes the terms of `e^{-(mu - keep_rate) t}·∫₀ᵗ c s^p e^{mu s} ds`, i.e.
/// `e^{keep_rate t} Σ_j c (-1)^j p!/(p-j)! t^{p-j} / mu^{j+1}` followed by the
/// boundary term at rate `boundary_rate`.
fn push_exponential_antiderivative(
    raw: &mut Vec<Term>,
    c: C64,
    p: u32,
    mu: C64,
    keep_rate: C64,
    boundary_rate: C64,
) {
    let inv = mu.inv();
    let mut falling = 1.0;
    let mut inv_pow = inv;
    let mut sign = 1.0;
    for j in 0..=p {
        raw.push(Term::new(c * sign * falling * inv_pow, p - j, keep_rate));
        if j < p {
            falling *= f64::from(p - j);
            inv_pow *= inv;
            sign = -sign;
        }
    }
    // at j = p: falling = p!, inv_pow = mu^-(p+1), sign = (-1)^p
    raw.push(Term::new(-(c * sign * falling * inv_pow), 0, boundary_rate));
}

/// Roots of `r² + a r + b`, snapped together when closer than the resonance
/// threshold.
pub fn characteristic_roots(a: C64, b: C64) -> (C64, C64) {
    let disc = (a * a - 4.0 * b).sqrt();
    let plus = a + disc;
    let minus = a - disc;
    let q = if plus.norm() >= minus.norm() {
        -plus * 0.5
    } else {
        -minus * 0.5
    };
    if q.norm() == 0.0 {
        return (q, q);
    }
    let r1 = q;
    let r2 = b / q;
    if (r1 - r2).norm() < RESONANCE_TOL {
        (r1, r1)
    } else {
        (r1, r2)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeff)?;
            if t.power > 0 {
                write!(f, "·t^{}", t.power)?;
            }
            if t.rate != C64::new(0.0, 0.0) {
                write!(f, "·e^({}·t)", t.rate)?;
            }
        }
        Ok(())
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::from_terms(self.terms.iter().chain(&rhs.terms).copied())
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: ExpPoly) -> ExpPoly {
        &self + &rhs
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::from_terms(self.terms.iter().copied().chain(rhs.terms.iter().map(|t| Term {
            coeff: -t.coeff,
            ..*t
        })))
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        &self - &rhs
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        ExpPoly::mul(self, rhs)
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        ExpPoly::mul(&self, &rhs)
    }
}

impl Serialize for ExpPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_quintuples().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let q = Vec::<[f64; 5]>::deserialize(d)?;
        ExpPoly::from_quintuples(&q)
            .ok_or_else(|| serde::de::Error::custom("term power must be a natural number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn residual_first(rate: C64, source: &ExpPoly, sol: &ExpPoly) -> ExpPoly {
        let d = sol.differentiate();
        ExpPoly::linear_combination(&[(c(1.0), &d), (rate, sol), (c(-1.0), source)])
    }

    fn residual_second(a: C64, b: C64, source: &ExpPoly, sol: &ExpPoly) -> ExpPoly {
        let d1 = sol.differentiate();
        let d2 = d1.differentiate();
        ExpPoly::linear_combination(&[(c(1.0), &d2), (a, &d1), (b, sol), (c(-1.0), source)])
    }

    #[test]
    fn additive_identity_and_inverse() {
        let one = ExpPoly::constant(c(1.0));
        assert_eq!(&one + &ExpPoly::zero(), one);
        let a = ExpPoly::term(c(1.0), 1, c(-2.0));
        let b = ExpPoly::term(c(-1.0), 1, c(-2.0));
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn polynomial_addition() {
        let a = ExpPoly::polynomial(&[c(1.0), c(1.0)]);
        let b = ExpPoly::polynomial(&[c(0.0), c(-0.5), c(0.25)]);
        assert_eq!(&a + &b, ExpPoly::polynomial(&[c(1.0), c(0.5), c(0.25)]));
    }

    #[test]
    fn products_add_rates_and_powers() {
        let e1 = ExpPoly::term(c(1.0), 0, c(-1.0));
        assert_eq!(&e1 * &e1, ExpPoly::term(c(1.0), 0, c(-2.0)));
        let a = ExpPoly::term(c(1.0), 1, c(-2.0));
        assert_eq!(&a * &e1, ExpPoly::term(c(1.0), 1, c(-3.0)));
        let b = ExpPoly::term(c(-1.0), 1, c(-2.0));
        assert_eq!(&e1 * &b, ExpPoly::term(c(-1.0), 1, c(-3.0)));
    }

    #[test]
    fn integration_examples() {
        assert_eq!(
            ExpPoly::constant(c(1.0)).integrate_from_zero(),
            ExpPoly::term(c(1.0), 1, c(0.0))
        );
        assert_eq!(
            ExpPoly::term(c(1.0), 2, c(0.0)).integrate_from_zero(),
            ExpPoly::term(c(1.0 / 3.0), 3, c(0.0))
        );
        // ∫ s e^{-2s} = 1/4 - (1/4)(1 + 2t) e^{-2t}
        let f = ExpPoly::term(c(1.0), 1, c(-2.0)).integrate_from_zero();
        let expected = ExpPoly::from_terms([
            Term::new(c(0.25), 0, c(0.0)),
            Term::new(c(-0.25), 0, c(-2.0)),
            Term::new(c(-0.5), 1, c(-2.0)),
        ]);
        assert!(f.approx_eq(&expected, 1e-15));
        // values frozen from an independent 40-digit quadrature
        let reference = [
            (0.5, 0.066_060_279_414_278_84),
            (1.0, 0.148_498_537_572_540_48),
            (2.0, 0.227_105_451_389_082_27),
        ];
        for (t, v) in reference {
            assert_abs_diff_eq!(f.eval(t).re, v, epsilon = 1e-15);
        }
    }

    #[test]
    fn differentiation_examples() {
        assert!(ExpPoly::constant(c(3.5)).differentiate().is_zero());
        let d = ExpPoly::term(c(1.0), 1, c(-2.0)).differentiate();
        let expected = ExpPoly::from_terms([
            Term::new(c(1.0), 0, c(-2.0)),
            Term::new(c(-2.0), 1, c(-2.0)),
        ]);
        assert_eq!(d, expected);
        // T_1 = t²/4 + t/2 + 1 has T_1' = (T_0 + t)/2 with T_0 = 1
        let t1 = ExpPoly::polynomial(&[c(1.0), c(0.5), c(0.25)]);
        assert_eq!(t1.differentiate(), ExpPoly::polynomial(&[c(0.5), c(0.5)]));
    }

    #[test]
    fn first_order_examples() {
        let k = ExpPoly::solve_first_order(c(0.0), &ExpPoly::zero(), c(2.5));
        assert_eq!(k, ExpPoly::constant(c(2.5)));

        let src = ExpPoly::term(c(-1.0), 0, c(-2.0));
        let t2 = ExpPoly::solve_first_order(c(2.0), &src, c(0.0));
        assert_eq!(t2, ExpPoly::term(c(-1.0), 1, c(-2.0)));

        let src = ExpPoly::term(c(0.25), 0, c(-1.0));
        let t3 = ExpPoly::solve_first_order(c(1.0), &src, c(-1.0 / 6.0));
        let expected = ExpPoly::from_terms([
            Term::new(c(-1.0 / 6.0), 0, c(-1.0)),
            Term::new(c(0.25), 1, c(-1.0)),
        ]);
        assert!(t3.approx_eq(&expected, 1e-15));
        // fine-step RK4 at t = 1 as the independent check
        let f = |t: f64, y: f64| -y + 0.25 * (-t).exp();
        let (mut y, n) = (-1.0 / 6.0, 2000);
        let h = 1.0 / n as f64;
        for i in 0..n {
            let t = i as f64 * h;
            let k1 = f(t, y);
            let k2 = f(t + h / 2.0, y + h * k1 / 2.0);
            let k3 = f(t + h / 2.0, y + h * k2 / 2.0);
            let k4 = f(t + h, y + h * k3);
            y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        }
        assert_abs_diff_eq!(t3.eval(1.0).re, y, epsilon = 1e-10);
    }

    #[test]
    fn second_order_examples() {
        let lin = ExpPoly::solve_second_order(c(0.0), c(0.0), &ExpPoly::zero(), c(2.0), c(-3.0));
        assert_eq!(lin, ExpPoly::polynomial(&[c(2.0), c(-3.0)]));

        let (a, l, k, ak, bk) = (1.3, 2.0, 3.0, 0.7, -0.4);
        let w = a * k * std::f64::consts::PI / l;
        let sol = ExpPoly::solve_second_order(c(0.0), c(w * w), &ExpPoly::zero(), c(ak), c(bk));
        for i in 0..10 {
            let t = 0.37 * i as f64;
            let expected = ak * (w * t).cos() + bk / w * (w * t).sin();
            assert_abs_diff_eq!(sol.eval(t).re, expected, epsilon = 1e-12);
            assert!(sol.eval(t).im.abs() < 1e-12);
        }

        // u_tt + a u_xt + b u_xx = 0 on e^{2jx}: T'' + 2ja T' + 4j²b T = 0.
        // Even index j = 2 carries cos e^{2x}'s coefficient -1/2! and T'(0) = 0.
        let (a, b, j) = (1.0_f64, 1.0_f64, 2.0_f64);
        let s = (4.0 * b - a * a).sqrt();
        let sol = ExpPoly::solve_second_order(
            c(2.0 * j * a),
            c(4.0 * j * j * b),
            &ExpPoly::zero(),
            c(-0.5),
            c(0.0),
        );
        for t in [0.0, 0.3, 1.0] {
            let expected = -0.5
                * (-2.0 * a * t).exp()
                * ((2.0 * s * t).cos() + a / s * (2.0 * s * t).sin());
            assert_abs_diff_eq!(sol.eval(t).re, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn double_root_uses_t_multiplied_term() {
        // T'' + 2T' + T = 0, T(0) = 1, T'(0) = 0 → (1 + t) e^{-t}
        let sol = ExpPoly::solve_second_order(c(2.0), c(1.0), &ExpPoly::zero(), c(1.0), c(0.0));
        let expected = ExpPoly::from_terms([
            Term::new(c(1.0), 0, c(-1.0)),
            Term::new(c(1.0), 1, c(-1.0)),
        ]);
        assert!(sol.approx_eq(&expected, 1e-14));
        assert!(residual_second(c(2.0), c(1.0), &ExpPoly::zero(), &sol).is_zero());
    }

    #[test]
    fn resonant_forcing() {
        // T'' + T = cos t → t sin t / 2
        let src = ExpPoly::from_terms([
            Term::new(c(0.5), 0, C64::new(0.0, 1.0)),
            Term::new(c(0.5), 0, C64::new(0.0, -1.0)),
        ]);
        let sol = ExpPoly::solve_second_order(c(0.0), c(1.0), &src, c(0.0), c(0.0));
        for t in [0.1, 1.0, 2.5] {
            assert_abs_diff_eq!(sol.eval(t).re, 0.5 * t * t.sin(), epsilon = 1e-13);
        }
        assert!(residual_second(c(0.0), c(1.0), &src, &sol).is_zero());
    }

    #[test]
    fn quintuple_round_trip() {
        let p = ExpPoly::from_terms([
            Term::new(C64::new(1.5, -0.25), 2, C64::new(-3.0, 0.5)),
            Term::new(c(0.1), 0, c(0.0)),
        ]);
        let json = serde_json::to_string(&p).unwrap();
        let back: ExpPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
        assert!(ExpPoly::from_quintuples(&[[1.0, 0.0, 0.5, 0.0, 0.0]]).is_none());
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
    }

    fn arb_exppoly() -> impl Strategy<Value = ExpPoly> {
        let rate = prop_oneof![
            Just(C64::new(0.0, 0.0)),
            Just(C64::new(-1.0, 0.0)),
            Just(C64::new(0.0, 2.0)),
            arb_c64(),
        ];
        proptest::collection::vec((arb_c64(), 0u32..4, rate), 0..8)
            .prop_map(|v| ExpPoly::from_terms(v.into_iter().map(|(c, p, q)| Term::new(c, p, q))))
    }

    proptest! {
        #[test]
        fn ring_axioms_hold_pointwise(a in arb_exppoly(), b in arb_exppoly(), cc in arb_exppoly(), t in 0.0..2.0f64) {
            let close = |x: C64, y: C64| (x - y).norm() <= 1e-10 * x.norm().max(y.norm()).max(1.0);
            prop_assert!(close((&a + &b).eval(t), (&b + &a).eval(t)));
            prop_assert!(close((&a * &b).eval(t), (&b * &a).eval(t)));
            prop_assert!(close(((&a * &b) * cc.clone()).eval(t), (&a * &(&b * &cc)).eval(t)));
            prop_assert!(close((&a * &(&b + &cc)).eval(t), (&(&a * &b) + &(&a * &cc)).eval(t)));
            prop_assert!(close((&a + &b).eval(t), a.eval(t) + b.eval(t)));
        }

        #[test]
        fn derivative_inverts_integral(a in arb_exppoly()) {
            prop_assert!(a.integrate_from_zero().differentiate().approx_eq(&a, 1e-10));
            // tiny rates give large antiderivative coefficients that cancel at 0
            let int = a.integrate_from_zero();
            let scale: f64 = int.terms().iter().filter(|t| t.power == 0).map(|t| t.coeff.norm()).sum();
            prop_assert!(int.eval(0.0).norm() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn first_order_residual_vanishes(rate in arb_c64(), src in arb_exppoly(), y0 in arb_c64()) {
            let sol = ExpPoly::solve_first_order(rate, &src, y0);
            prop_assert!(residual_first(rate, &src, &sol).is_zero());
            prop_assert!((sol.eval(0.0) - y0).norm() < 1e-10);
        }

        #[test]
        fn second_order_residual_vanishes(a in arb_c64(), b in arb_c64(), src in arb_exppoly(), y0 in arb_c64(), y1 in arb_c64()) {
            let sol = ExpPoly::solve_second_order(a, b, &src, y0, y1);
            prop_assert!(residual_second(a, b, &src, &sol).is_zero());
        }

        #[test]
        fn conjugate_symmetric_sets_are_real(a in arb_exppoly(), t in -2.0..2.0f64) {
            let sym = &a + &a.conj();
            prop_assert!(sym.eval(t).im.abs() <= 1e-12 * sym.eval(t).norm().max(1.0));
        }
    }
}
