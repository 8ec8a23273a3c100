//! Solved coefficient families and evaluation of `u_q(x, t) = Σ_k ξ_k(x) T_qk(t)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFamily, BasisIndex};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::C64;

/// Uniformly sampled trajectory on `[t0, t1]`.
///
/// `samples[j][i]` is the `j`-th time derivative at grid point `i`; at least
/// the value and first derivative are stored, which drives cubic Hermite
/// interpolation between grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub t1: f64,
    pub samples: Vec<Vec<C64>>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.samples[0].len() - 1
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let n = self.steps();
        let h = (self.t1 - self.t0) / n as f64;
        let s = ((t - self.t0) / h).clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        (i, s - i as f64, h)
    }

    /// Hermite interpolant of derivative row `j` using row `j + 1` as slope;
    /// the last stored row is interpolated linearly.
    pub fn eval_derivative(&self, j: usize, t: f64) -> Option<C64> {
        let row = self.samples.get(j)?;
        let (i, s, h) = self.locate(t);
        let (y0, y1) = (row[i], row[i + 1]);
        let Some(slope) = self.samples.get(j + 1) else {
            return Some(y0 + (y1 - y0) * s);
        };
        let (d0, d1) = (slope[i] * h, slope[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        Some(
            y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
                + d0 * (s3 - 2.0 * s2 + s)
                + y1 * (-2.0 * s3 + 3.0 * s2)
                + d1 * (s3 - s2),
        )
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.eval_derivative(0, t).unwrap_or_default()
    }
}

/// A solved `T_k(t)`.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeFunction {
    Closed(ExpPoly),
    Sampled(Trajectory),
}

/// Which solver produced a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    ClosedForm,
    Numeric,
}

impl TimeFunction {
    pub fn eval(&self, t: f64) -> C64 {
        match self {
            TimeFunction::Closed(p) => p.eval(t),
            TimeFunction::Sampled(s) => s.eval(t),
        }
    }

    /// `order`-th time derivative; `None` beyond what a trajectory stores.
    pub fn eval_derivative(&self, order: u32, t: f64) -> Option<C64> {
        match self {
            TimeFunction::Closed(p) => Some(p.eval_derivative(order, t)),
            TimeFunction::Sampled(s) => s.eval_derivative(order as usize, t),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            TimeFunction::Closed(_) => Backend::ClosedForm,
            TimeFunction::Sampled(_) => Backend::Numeric,
        }
    }

    pub fn as_closed(&self) -> Option<&ExpPoly> {
        match self {
            TimeFunction::Closed(p) => Some(p),
            TimeFunction::Sampled(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TimeFunction::Closed(p) => p.is_zero(),
            TimeFunction::Sampled(s) => s.samples.iter().flatten().all(|c| *c == C64::new(0.0, 0.0)),
        }
    }
}

/// Solved coefficients for every unknown: `modes[q][k] = T_qk`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSeries {
    pub basis: BasisFamily,
    pub modes: Vec<BTreeMap<BasisIndex, TimeFunction>>,
}

impl CoefficientSeries {
    pub fn new(basis: BasisFamily, unknowns: usize) -> Self {
        CoefficientSeries { basis, modes: vec![BTreeMap::new(); unknowns] }
    }

    pub fn get(&self, unknown: usize, k: &BasisIndex) -> Option<&TimeFunction> {
        self.modes.get(unknown)?.get(k)
    }

    /// Closed form of a mode; absent modes are zero.
    pub fn closed(&self, unknown: usize, k: &BasisIndex) -> Option<&ExpPoly> {
        self.get(unknown, k).and_then(TimeFunction::as_closed)
    }

    /// Number of stored `(unknown, index)` entries.
    pub fn len(&self) -> usize {
        self.modes.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Where a solution came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub name: String,
    pub spec_hash: String,
    pub truncation: u32,
    pub horizon: f64,
    pub eval_box: Vec<(f64, f64)>,
}

/// An evaluable truncated series solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub unknowns: Vec<String>,
    pub coefficients: CoefficientSeries,
    pub provenance: Provenance,
    /// Non-fatal solver diagnostics, e.g. step-doubling error estimates.
    pub warnings: Vec<String>,
}

/// Relative slack when testing membership of the evaluation box.
const BOX_SLACK: f64 = 1e-9;

impl SeriesSolution {
    pub fn basis(&self) -> &BasisFamily {
        &self.coefficients.basis
    }

    pub fn backends(&self) -> Vec<(usize, BasisIndex, Backend)> {
        self.coefficients
            .modes
            .iter()
            .enumerate()
            .flat_map(|(q, m)| m.iter().map(move |(k, f)| (q, k.clone(), f.backend())))
            .collect()
    }

    /// Whether `(x, t)` lies in the declared box and time horizon.
    pub fn contains(&self, x: &[f64], t: f64) -> bool {
        let p = &self.provenance;
        let within = |v: f64, lo: f64, hi: f64| {
            let slack = BOX_SLACK * (hi - lo).abs().max(1.0);
            v >= lo - slack && v <= hi + slack
        };
        x.len() == p.eval_box.len()
            && x.iter().zip(&p.eval_box).all(|(&v, &(lo, hi))| within(v, lo, hi))
            && within(t, 0.0, p.horizon)
    }

    /// `u_unknown(x, t)`.
    pub fn eval(&self, unknown: usize, x: &[f64], t: f64) -> Result<C64> {
        let family = self.basis();
        if x.len() != family.dim() {
            return Err(Error::GridDomain(format!(
                "point has {} coordinates, basis has {}",
                x.len(),
                family.dim()
            )));
        }
        let modes = self.coefficients.modes.get(unknown).ok_or_else(|| {
            Error::GridDomain(format!("no unknown {}", unknown + 1))
        })?;
        // per-axis factor values are shared across indices
        let mut cache: Vec<BTreeMap<i64, C64>> = vec![BTreeMap::new(); family.dim()];
        let mut sum = C64::new(0.0, 0.0);
        for (k, f) in modes {
            if f.is_zero() {
                continue;
            }
            let mut xi = C64::new(1.0, 0.0);
            for (j, &c) in k.components().iter().enumerate() {
                let v = match cache[j].get(&c) {
                    Some(v) => *v,
                    None => {
                        let v = family.axes[j].eval(c, x[j])?;
                        cache[j].insert(c, v);
                        v
                    }
                };
                xi *= v;
            }
            sum += xi * f.eval(t);
        }
        Ok(sum)
    }

    /// All unknowns at `(x, t)`.
    pub fn eval_all(&self, x: &[f64], t: f64) -> Result<Vec<C64>> {
        (0..self.unknowns.len()).map(|q| self.eval(q, x, t)).collect()
    }
}
