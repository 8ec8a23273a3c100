//! Spatial basis families, multi-indices, eigen-actions of spatial operator
//! terms, and expansion of initial data into basis coefficients.
//!
//! A family is a tensor product of one-dimensional factors. Element `ξ_k` is
//! the product over axes of the axis factor evaluated at component `k_j`:
//!
//! | axis kind            | factor                 |
//! |----------------------|------------------------|
//! | `ComplexExponential` | `e^{iωk x}`            |
//! | `Sine`               | `sin(ωk x)`            |
//! | `Cosine`             | `cos(ωk x)`            |
//! | `RealExponential`    | `e^{λk (x - x₀)}`      |
//! | `Power`              | `(x - x₀)^{μk}`        |
//!
//! ```
//! use ftseries::basis::{Axis, BasisFamily, BasisIndex, SpatialTerm};
//!
//! // (x+3)^{1/2} ∂_x on (x+3)^{-k/4} lands two modes higher
//! let family = BasisFamily::new(vec![Axis::power(-0.25, -3.0).positive()]);
//! let term = SpatialTerm::derivative(&[1]).with_power(0, 0.5);
//! let action = family.apply_spatial_term(&term, &BasisIndex::new(vec![1])).unwrap();
//! assert_eq!(action.shift, vec![2]);
//! assert!((action.multiplier.re + 0.25).abs() < 1e-15);
//! ```

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::literal::{de_real, Complex, Real};
use crate::quadrature;
use crate::C64;

/// Integer multi-index, one component per spatial axis.
///
/// Ordered by L1 norm, then lexicographically; this is the order in which
/// triangular problems are solved.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex(pub Vec<i64>);

impl BasisIndex {
    pub fn new(components: Vec<i64>) -> Self {
        BasisIndex(components)
    }

    pub fn scalar(k: i64) -> Self {
        BasisIndex(vec![k])
    }

    pub fn zero(dim: usize) -> Self {
        BasisIndex(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &BasisIndex) -> BasisIndex {
        BasisIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &BasisIndex) -> BasisIndex {
        BasisIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> BasisIndex {
        BasisIndex(self.0.iter().map(|a| -a).collect())
    }
}

impl Ord for BasisIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BasisIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [k] = self.0.as_slice() {
            return write!(f, "{k}");
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for BasisIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Scalar(i64),
            Vector(Vec<i64>),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Scalar(k) => BasisIndex(vec![k]),
            Raw::Vector(v) => BasisIndex(v),
        })
    }
}

/// Which integers an axis component may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    Naturals,
    PositiveNaturals,
    Integers,
}

impl IndexSet {
    pub fn contains(self, k: i64) -> bool {
        match self {
            IndexSet::Naturals => k >= 0,
            IndexSet::PositiveNaturals => k >= 1,
            IndexSet::Integers => true,
        }
    }

    fn range(self, n: i64) -> std::ops::RangeInclusive<i64> {
        match self {
            IndexSet::Naturals => 0..=n,
            IndexSet::PositiveNaturals => 1..=n,
            IndexSet::Integers => -n..=n,
        }
    }
}

/// One-dimensional basis factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxisKind {
    ComplexExponential {
        #[serde(deserialize_with = "de_real")]
        omega: f64,
    },
    Sine {
        #[serde(deserialize_with = "de_real")]
        omega: f64,
    },
    Cosine {
        #[serde(deserialize_with = "de_real")]
        omega: f64,
    },
    RealExponential {
        #[serde(deserialize_with = "de_real")]
        lambda: f64,
        #[serde(deserialize_with = "de_real")]
        shift: f64,
    },
    Power {
        #[serde(deserialize_with = "de_real")]
        mu: f64,
        #[serde(deserialize_with = "de_real")]
        shift: f64,
    },
}

impl AxisKind {
    pub fn name(&self) -> &'static str {
        match self {
            AxisKind::ComplexExponential { .. } => "complex exponential",
            AxisKind::Sine { .. } => "sine",
            AxisKind::Cosine { .. } => "cosine",
            AxisKind::RealExponential { .. } => "real exponential",
            AxisKind::Power { .. } => "power",
        }
    }

    pub fn is_trigonometric(&self) -> bool {
        matches!(self, AxisKind::Sine { .. } | AxisKind::Cosine { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub factor: AxisKind,
    pub index_set: IndexSet,
}

impl Axis {
    pub fn complex_exponential(omega: f64) -> Self {
        Axis { factor: AxisKind::ComplexExponential { omega }, index_set: IndexSet::Integers }
    }

    pub fn sine(omega: f64) -> Self {
        Axis { factor: AxisKind::Sine { omega }, index_set: IndexSet::PositiveNaturals }
    }

    pub fn cosine(omega: f64) -> Self {
        Axis { factor: AxisKind::Cosine { omega }, index_set: IndexSet::Naturals }
    }

    pub fn real_exponential(lambda: f64, shift: f64) -> Self {
        Axis {
            factor: AxisKind::RealExponential { lambda, shift },
            index_set: IndexSet::Naturals,
        }
    }

    pub fn power(mu: f64, shift: f64) -> Self {
        Axis { factor: AxisKind::Power { mu, shift }, index_set: IndexSet::Naturals }
    }

    pub fn positive(self) -> Self {
        Axis { index_set: IndexSet::PositiveNaturals, ..self }
    }

    pub fn naturals(self) -> Self {
        Axis { index_set: IndexSet::Naturals, ..self }
    }

    pub fn integers(self) -> Self {
        Axis { index_set: IndexSet::Integers, ..self }
    }

    /// Value of the axis factor for component `k` at coordinate `x`.
    pub fn eval(&self, k: i64, x: f64) -> Result<C64> {
        let kf = k as f64;
        Ok(match self.factor {
            AxisKind::ComplexExponential { omega } => C64::new(0.0, omega * kf * x).exp(),
            AxisKind::Sine { omega } => C64::new((omega * kf * x).sin(), 0.0),
            AxisKind::Cosine { omega } => C64::new((omega * kf * x).cos(), 0.0),
            AxisKind::RealExponential { lambda, shift } => {
                C64::new((lambda * kf * (x - shift)).exp(), 0.0)
            }
            AxisKind::Power { mu, shift } => C64::new(real_power(x - shift, mu * kf)?, 0.0),
        })
    }

    /// Upper bound of `|factor|` over `[lo, hi]`.
    pub fn sup_abs(&self, k: i64, lo: f64, hi: f64) -> Result<f64> {
        match self.factor {
            AxisKind::ComplexExponential { .. } | AxisKind::Sine { .. } | AxisKind::Cosine { .. } => {
                Ok(1.0)
            }
            // monotone in x on the domain
            _ => Ok(self.eval(k, lo)?.norm().max(self.eval(k, hi)?.norm())),
        }
    }

    fn validate(&self, position: usize) -> Result<()> {
        let bad = |what: &str| Err(Error::Validation(format!("axis {}: {what}", position + 1)));
        match self.factor {
            AxisKind::RealExponential { lambda, .. } if lambda == 0.0 || !lambda.is_finite() => {
                bad("exponential rate must be a nonzero real")
            }
            AxisKind::Power { mu, .. } if mu == 0.0 || !mu.is_finite() => {
                bad("power step must be a nonzero real")
            }
            AxisKind::ComplexExponential { omega }
            | AxisKind::Sine { omega }
            | AxisKind::Cosine { omega }
                if omega == 0.0 || !omega.is_finite() =>
            {
                bad("angular factor must be a nonzero real")
            }
            _ if self.index_set == IndexSet::Integers
                && !matches!(self.factor, AxisKind::ComplexExponential { .. }) =>
            {
                bad("negative indices are only allowed on complex exponential axes")
            }
            _ => Ok(()),
        }
    }
}

/// `base^exponent` on the principal real branch.
pub fn real_power(base: f64, exponent: f64) -> Result<f64> {
    if exponent == 0.0 {
        return Ok(1.0);
    }
    if base > 0.0 {
        return Ok(base.powf(exponent));
    }
    if exponent.fract() == 0.0 && exponent.abs() < i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return Err(Error::Domain(format!("0^{exponent} is undefined")));
        }
        return Ok(base.powi(exponent as i32));
    }
    Err(Error::Domain(format!(
        "fractional power {exponent} of nonpositive base {base}"
    )))
}

/// Tensor-product basis family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisFamily {
    pub axes: Vec<Axis>,
}

/// Spatial multiplier factor attached to one axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FactorKind {
    /// `(x_j - x₀)^s`, on a power axis.
    Power(f64),
    /// `e^{s (x_j - x₀)}`, on a real exponential axis.
    Exp(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisFactor {
    pub axis: usize,
    pub kind: FactorKind,
}

/// `coeff · Π factors · ∂_x^derivative`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialTerm {
    pub coeff: C64,
    pub factors: Vec<AxisFactor>,
    pub derivative: Vec<u32>,
}

impl SpatialTerm {
    pub fn identity(dim: usize) -> Self {
        SpatialTerm { coeff: C64::new(1.0, 0.0), factors: Vec::new(), derivative: vec![0; dim] }
    }

    pub fn derivative(alpha: &[u32]) -> Self {
        SpatialTerm {
            coeff: C64::new(1.0, 0.0),
            factors: Vec::new(),
            derivative: alpha.to_vec(),
        }
    }

    pub fn with_coeff(mut self, coeff: C64) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn with_power(mut self, axis: usize, s: f64) -> Self {
        self.factors.push(AxisFactor { axis, kind: FactorKind::Power(s) });
        self
    }

    pub fn with_exp(mut self, axis: usize, s: f64) -> Self {
        self.factors.push(AxisFactor { axis, kind: FactorKind::Exp(s) });
        self
    }

    pub fn max_derivative(&self) -> u32 {
        self.derivative.iter().copied().max().unwrap_or(0)
    }

    /// Evaluates the multiplier `coeff · Π factors` at a point.
    pub fn multiplier_at(&self, family: &BasisFamily, x: &[f64]) -> Result<C64> {
        let mut value = self.coeff;
        for f in &self.factors {
            let shift = match family.axes[f.axis].factor {
                AxisKind::Power { shift, .. } | AxisKind::RealExponential { shift, .. } => shift,
                _ => 0.0,
            };
            value *= match f.kind {
                FactorKind::Power(s) => real_power(x[f.axis] - shift, s)?,
                FactorKind::Exp(s) => (s * (x[f.axis] - shift)).exp(),
            };
        }
        Ok(value)
    }
}

/// How a spatial term acts on `ξ_k`: `term(ξ_k) = multiplier · ξ_{k+shift}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenAction {
    pub multiplier: C64,
    pub shift: Vec<i64>,
}

fn integral_ratio(num: f64, den: f64) -> Option<i64> {
    let r = num / den;
    let n = r.round();
    ((r - n).abs() <= 1e-9 * r.abs().max(1.0)).then_some(n as i64)
}

impl BasisFamily {
    pub fn new(axes: Vec<Axis>) -> Self {
        BasisFamily { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::Validation("basis needs at least one axis".into()));
        }
        self.axes.iter().enumerate().try_for_each(|(i, a)| a.validate(i))
    }

    pub fn contains(&self, k: &BasisIndex) -> bool {
        k.dim() == self.dim()
            && self.axes.iter().zip(&k.0).all(|(a, &c)| a.index_set.contains(c))
    }

    /// Whether `ξ_a ξ_b = ξ_{a+b}` holds on every axis.
    pub fn is_product_closed(&self) -> bool {
        self.axes.iter().all(|a| !a.factor.is_trigonometric())
    }

    /// All indices with `|k|₁ ≤ n` in ascending solve order.
    pub fn ball(&self, n: u32) -> Vec<BasisIndex> {
        let n = i64::from(n);
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.dim());
        self.collect_ball(0, n, &mut current, &mut out);
        out.sort();
        out
    }

    fn collect_ball(&self, axis: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<BasisIndex>) {
        if axis == self.dim() {
            out.push(BasisIndex(cur.clone()));
            return;
        }
        for c in self.axes[axis].index_set.range(budget) {
            cur.push(c);
            self.collect_ball(axis + 1, budget - c.abs(), cur, out);
            cur.pop();
        }
    }

    /// `ξ_k(x)`.
    pub fn eval_element(&self, k: &BasisIndex, x: &[f64]) -> Result<C64> {
        let mut value = C64::new(1.0, 0.0);
        for ((axis, &c), &xj) in self.axes.iter().zip(&k.0).zip(x) {
            value *= axis.eval(c, xj)?;
        }
        Ok(value)
    }

    /// `ξ_{k1} · ξ_{k2} = ξ_{k1+k2}` on product-closed families.
    pub fn multiply_indices(&self, k1: &BasisIndex, k2: &BasisIndex) -> Result<BasisIndex> {
        if let Some(axis) = self.axes.iter().position(|a| a.factor.is_trigonometric()) {
            return Err(Error::NotClosed { axis });
        }
        Ok(k1.add(k2))
    }

    /// Index shift of a term; independent of the index it acts on.
    pub fn term_shift(&self, term: &SpatialTerm) -> Result<Vec<i64>> {
        self.check_term_shape(term)?;
        let mut shift = vec![0i64; self.dim()];
        for (j, axis) in self.axes.iter().enumerate() {
            let d = term.derivative[j];
            let mut power = 0.0;
            let mut exp = 0.0;
            for f in term.factors.iter().filter(|f| f.axis == j) {
                match f.kind {
                    FactorKind::Power(s) => power += s,
                    FactorKind::Exp(s) => exp += s,
                }
            }
            let not_rep = |why: String| Error::NotRepresentable(format!("axis {}: {why}", j + 1));
            shift[j] = match axis.factor {
                AxisKind::ComplexExponential { .. } | AxisKind::Sine { .. } | AxisKind::Cosine { .. } => {
                    if power != 0.0 || exp != 0.0 {
                        return Err(not_rep(format!(
                            "{} axes accept only constant multipliers",
                            axis.factor.name()
                        )));
                    }
                    if axis.factor.is_trigonometric() && d % 2 == 1 {
                        return Err(not_rep(format!(
                            "odd derivative of order {d} leaves the {} family",
                            axis.factor.name()
                        )));
                    }
                    0
                }
                AxisKind::RealExponential { lambda, .. } => {
                    if power != 0.0 {
                        return Err(not_rep("power multiplier on an exponential axis".into()));
                    }
                    integral_ratio(exp, lambda).ok_or_else(|| {
                        not_rep(format!("e^({exp}x) is not a whole multiple of the basis rate {lambda}"))
                    })?
                }
                AxisKind::Power { mu, .. } => {
                    if exp != 0.0 {
                        return Err(not_rep("exponential multiplier on a power axis".into()));
                    }
                    integral_ratio(power - f64::from(d), mu).ok_or_else(|| {
                        not_rep(format!(
                            "exponent change {} is not a whole multiple of the step {mu}",
                            power - f64::from(d)
                        ))
                    })?
                }
            };
        }
        Ok(shift)
    }

    fn check_term_shape(&self, term: &SpatialTerm) -> Result<()> {
        if term.derivative.len() != self.dim() {
            return Err(Error::Validation(format!(
                "derivative multi-index has {} components for a {}-dimensional basis",
                term.derivative.len(),
                self.dim()
            )));
        }
        if let Some(f) = term.factors.iter().find(|f| f.axis >= self.dim()) {
            return Err(Error::Validation(format!("multiplier on missing axis {}", f.axis + 1)));
        }
        Ok(())
    }

    /// Eigen-action of `term` on `ξ_k`.
    pub fn apply_spatial_term(&self, term: &SpatialTerm, k: &BasisIndex) -> Result<EigenAction> {
        let shift = self.term_shift(term)?;
        let mut multiplier = term.coeff;
        for (j, axis) in self.axes.iter().enumerate() {
            let d = term.derivative[j];
            let kf = k.0[j] as f64;
            multiplier *= match axis.factor {
                AxisKind::ComplexExponential { omega } => {
                    C64::new(0.0, omega * kf).powi(d as i32)
                }
                AxisKind::Sine { omega } | AxisKind::Cosine { omega } => {
                    let sign = if (d / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                    C64::new(sign * (omega * kf).powi(d as i32), 0.0)
                }
                AxisKind::RealExponential { lambda, .. } => {
                    C64::new((lambda * kf).powi(d as i32), 0.0)
                }
                AxisKind::Power { mu, .. } => {
                    C64::new((0..d).map(|m| mu * kf - f64::from(m)).product(), 0.0)
                }
            };
        }
        Ok(EigenAction { multiplier, shift })
    }

    /// Expands initial data into coefficients supported on `|k| ≤ n`.
    pub fn expand(&self, expansion: &Expansion, n: u32) -> Result<BTreeMap<BasisIndex, C64>> {
        let mut out = BTreeMap::new();
        match expansion {
            Expansion::Explicit { coefficients } => {
                for (k, c) in coefficients {
                    if k.dim() != self.dim() {
                        return Err(Error::Validation(format!(
                            "coefficient index {k} has the wrong dimension"
                        )));
                    }
                    if !self.contains(k) {
                        return Err(Error::Validation(format!(
                            "coefficient index {k} is outside the declared index set"
                        )));
                    }
                    if k.norm() <= i64::from(n) && c.0 != C64::new(0.0, 0.0) {
                        *out.entry(k.clone()).or_insert(C64::new(0.0, 0.0)) += c.0;
                    }
                }
            }
            Expansion::Product { factors } => {
                if factors.len() != self.dim() {
                    return Err(Error::Validation(format!(
                        "product expansion has {} factors for a {}-dimensional basis",
                        factors.len(),
                        self.dim()
                    )));
                }
                let per_axis = factors
                    .iter()
                    .zip(&self.axes)
                    .map(|(f, a)| expand_axis(a, f, n))
                    .collect::<Result<Vec<_>>>()?;
                let mut partial: Vec<(Vec<i64>, C64)> = vec![(Vec::new(), C64::new(1.0, 0.0))];
                for coeffs in &per_axis {
                    let mut next = Vec::new();
                    for (idx, c) in &partial {
                        let used: i64 = idx.iter().map(|v: &i64| v.abs()).sum();
                        for &(k, ck) in coeffs {
                            if used + k.abs() <= i64::from(n) {
                                let mut i = idx.clone();
                                i.push(k);
                                next.push((i, c * ck));
                            }
                        }
                    }
                    partial = next;
                }
                for (idx, c) in partial {
                    if c != C64::new(0.0, 0.0) {
                        out.insert(BasisIndex(idx), c);
                    }
                }
            }
            other => {
                if self.dim() != 1 {
                    return Err(Error::Validation(
                        "named generators apply per axis; use a product expansion".into(),
                    ));
                }
                for (k, c) in expand_axis(&self.axes[0], other, n)? {
                    out.insert(BasisIndex(vec![k]), c);
                }
            }
        }
        Ok(out)
    }
}

/// Initial-data descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expansion {
    /// Listed coefficients `[[index, value], ...]`.
    Explicit { coefficients: Vec<(BasisIndex, Complex)> },
    /// `1/(1 - ξ₁) = Σ ξ_k`.
    Geometric,
    /// `cos ξ₁` on an exponential axis.
    CosOfExponential,
    /// `sin ξ₁` on an exponential axis.
    SinOfExponential,
    /// `sin ξ₁` on a power axis.
    SinOfPower,
    /// `e^{ξ₁} - 1` on an exponential axis.
    ExpOfExponentialMinusOne,
    /// Sine coefficients `(2/L)∫₀^L f(x) sin(kπx/L) dx` by adaptive quadrature.
    FourierSine { function: SmoothFunction, length: Real },
    /// Tensor product of one expansion per axis.
    Product { factors: Vec<Expansion> },
}

impl Expansion {
    pub fn explicit<I: IntoIterator<Item = (BasisIndex, C64)>>(coeffs: I) -> Self {
        Expansion::Explicit {
            coefficients: coeffs.into_iter().map(|(k, c)| (k, Complex(c))).collect(),
        }
    }

    /// One-dimensional explicit coefficients with real values.
    pub fn explicit_1d(coeffs: &[(i64, f64)]) -> Self {
        Self::explicit(coeffs.iter().map(|&(k, c)| (BasisIndex::scalar(k), C64::new(c, 0.0))))
    }
}

/// Smooth real functions for quadrature-based expansions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothFunction {
    /// `Σ coefficients[j] x^j`.
    Polynomial { coefficients: Vec<Real> },
    /// `scale · Π (x - root)^multiplicity`.
    RootProduct {
        #[serde(default = "unit")]
        scale: Real,
        roots: Vec<(Real, u32)>,
    },
}

fn unit() -> Real {
    Real(1.0)
}

impl SmoothFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SmoothFunction::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c.0)
            }
            SmoothFunction::RootProduct { scale, roots } => roots
                .iter()
                .fold(scale.0, |acc, (r, m)| acc * (x - r.0).powi(*m as i32)),
        }
    }
}

fn inverse_factorial(j: u32) -> f64 {
    (1..=j).fold(1.0, |acc, m| acc / f64::from(m))
}

/// Coefficients of a one-dimensional expansion on a single axis.
fn expand_axis(axis: &Axis, expansion: &Expansion, n: u32) -> Result<Vec<(i64, C64)>> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "{what} expansion does not apply to a {} axis",
                axis.factor.name()
            )))
        }
    };
    let exponential = matches!(axis.factor, AxisKind::RealExponential { .. });
    let power = matches!(axis.factor, AxisKind::Power { .. });
    let series: Box<dyn Fn(u32) -> f64> = match expansion {
        Expansion::Explicit { coefficients } => {
            let mut out = Vec::new();
            for (k, c) in coefficients {
                let [kk] = k.0.as_slice() else {
                    return Err(Error::Validation(format!("axis coefficient index {k} must be scalar")));
                };
                if !axis.index_set.contains(*kk) {
                    return Err(Error::Validation(format!(
                        "coefficient index {k} is outside the declared index set"
                    )));
                }
                if kk.unsigned_abs() <= u64::from(n) && c.0 != C64::new(0.0, 0.0) {
                    out.push((*kk, c.0));
                }
            }
            return Ok(out);
        }
        Expansion::Product { .. } => {
            return Err(Error::Validation("nested product expansion".into()));
        }
        Expansion::FourierSine { function, length } => {
            let AxisKind::Sine { omega } = axis.factor else {
                return need(false, "Fourier sine").map(|_| Vec::new());
            };
            let l = length.0;
            if !(l > 0.0) || ((omega * l - std::f64::consts::PI).abs() > 1e-9 * omega * l) {
                return Err(Error::Validation(format!(
                    "Fourier sine length {l} does not match the axis frequency {omega}"
                )));
            }
            let mut out = Vec::new();
            for k in 1..=i64::from(n) {
                if !axis.index_set.contains(k) {
                    continue;
                }
                let w = omega * k as f64;
                let integral = quadrature::adaptive_simpson(
                    |x| function.eval(x) * (w * x).sin(),
                    0.0,
                    l,
                    quadrature::DEFAULT_TOLERANCE,
                    quadrature::DEFAULT_BUDGET,
                )?;
                // below the quadrature tolerance the coefficient is noise
                if integral.abs() > quadrature::DEFAULT_TOLERANCE {
                    out.push((k, C64::new(2.0 / l * integral, 0.0)));
                }
            }
            return Ok(out);
        }
        Expansion::Geometric => {
            need(exponential || power, "geometric")?;
            Box::new(|_| 1.0)
        }
        Expansion::CosOfExponential => {
            need(exponential, "cos-of-exponential")?;
            Box::new(|j| match j % 4 {
                0 => inverse_factorial(j),
                2 => -inverse_factorial(j),
                _ => 0.0,
            })
        }
        Expansion::SinOfExponential | Expansion::SinOfPower => {
            if matches!(expansion, Expansion::SinOfPower) {
                need(power, "sin-of-power")?;
            } else {
                need(exponential, "sin-of-exponential")?;
            }
            Box::new(|j| match j % 4 {
                1 => inverse_factorial(j),
                3 => -inverse_factorial(j),
                _ => 0.0,
            })
        }
        Expansion::ExpOfExponentialMinusOne => {
            need(exponential, "exp-of-exponential-minus-one")?;
            Box::new(|j| if j == 0 { 0.0 } else { inverse_factorial(j) })
        }
    };
    let mut out = Vec::new();
    for j in 0..=n {
        let c = series(j);
        if c == 0.0 {
            continue;
        }
        if !axis.index_set.contains(i64::from(j)) {
            return Err(Error::Validation(format!(
                "expansion needs index {j}, which is outside the declared index set"
            )));
        }
        out.push((i64::from(j), C64::new(c, 0.0)));
    }
    Ok(out)
}
