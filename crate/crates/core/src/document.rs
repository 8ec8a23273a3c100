//! JSON problem documents, schema version 1.
//!
//! Rows, unknowns and axes are numbered from 1 in documents. Reals accept
//! `"pi"`-style strings; complex values accept a number, a string or an
//! `[re, im]` pair. A minimal document:
//!
//! ```
//! let text = r#"{
//!   "schema": 1,
//!   "name": "heat",
//!   "basis": [{ "kind": "sine", "omega": 1 }],
//!   "unknowns": ["u"],
//!   "operator": [
//!     { "row": 1, "unknown": 1, "time_order": 1 },
//!     { "row": 1, "unknown": 1, "coeff": -1, "derivative": [2] }
//!   ],
//!   "initial": [{ "unknown": 1, "order": 0,
//!                 "data": { "kind": "explicit", "coefficients": [[1, 1], [3, 0.5]] } }],
//!   "truncation": 3,
//!   "horizon": 1,
//!   "eval_box": [[0, "pi"]]
//! }"#;
//! let spec = ftseries::document::from_json(text).unwrap();
//! assert_eq!(spec.unknowns, ["u"]);
//! let sol = ftseries::solve(&spec.validate().unwrap()).unwrap();
//! let u = sol.eval(0, &[std::f64::consts::FRAC_PI_2], 1.0).unwrap();
//! let exact = (-1.0f64).exp() - 0.5 * (-9.0f64).exp();
//! assert!((u.re - exact).abs() < 1e-14);
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::basis::{Axis, AxisFactor, AxisKind, BasisFamily, BasisIndex, Expansion, FactorKind, IndexSet, SpatialTerm};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::literal::{Complex, Real};
use crate::problem::{
    ConstraintRow, ConstraintTerm, Factor, Forcing, InitialCondition, OperatorTerm, ProblemSpec,
    QuadraticTerm, SeriesCoefficientTerm, TimePoly, DEFAULT_NUMERIC_STEPS,
};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;

fn one() -> Complex {
    Complex(C64::new(1.0, 0.0))
}

fn is_one(c: &Complex) -> bool {
    c.0 == C64::new(1.0, 0.0)
}

fn time_one() -> TimePoly {
    TimePoly::one()
}

fn is_time_one(p: &TimePoly) -> bool {
    *p == TimePoly::one()
}

fn default_steps() -> u32 {
    DEFAULT_NUMERIC_STEPS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisDoc {
    #[serde(flatten)]
    pub factor: AxisKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_set: Option<IndexSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    pub axis: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp: Option<Real>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDoc {
    pub row: usize,
    pub unknown: usize,
    #[serde(default)]
    pub time_order: u32,
    #[serde(default = "time_one", skip_serializing_if = "is_time_one")]
    pub time_coeff: TimePoly,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub coeff: Complex,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivative: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRefDoc {
    pub unknown: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivative: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticDoc {
    pub row: usize,
    pub left: FactorRefDoc,
    pub right: FactorRefDoc,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTermDoc {
    pub row: usize,
    pub coefficients: Expansion,
    pub unknown: usize,
    #[serde(default)]
    pub time_order: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivative: Vec<u32>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintTermDoc {
    pub unknown: usize,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub coeff: Complex,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivative: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub terms: Vec<ConstraintTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDoc {
    pub unknown: usize,
    #[serde(default)]
    pub order: u32,
    pub data: Expansion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingDoc {
    pub row: usize,
    /// `[index, [[re c, im c, p, re q, im q], ...]]` pairs.
    pub coefficients: Vec<(BasisIndex, ExpPoly)>,
}

fn pair_de<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<(f64, f64)>, D::Error> {
    let raw = Vec::<(Real, Real)>::deserialize(d)?;
    Ok(raw.into_iter().map(|(a, b)| (a.0, b.0)).collect())
}

/// The on-disk form of a [`ProblemSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema: u32,
    #[serde(default)]
    pub name: String,
    pub basis: Vec<AxisDoc>,
    pub unknowns: Vec<String>,
    #[serde(default)]
    pub operator: Vec<OperatorDoc>,
    #[serde(default)]
    pub quadratic: Vec<QuadraticDoc>,
    #[serde(default)]
    pub series_coefficient_terms: Vec<SeriesTermDoc>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
    #[serde(default)]
    pub initial: Vec<InitialDoc>,
    #[serde(default)]
    pub forcing: Vec<ForcingDoc>,
    pub truncation: u32,
    #[serde(deserialize_with = "crate::literal::de_real")]
    pub horizon: f64,
    #[serde(deserialize_with = "pair_de")]
    pub eval_box: Vec<(f64, f64)>,
    #[serde(default = "default_steps")]
    pub numeric_steps: u32,
}

fn default_index_set(kind: &AxisKind) -> IndexSet {
    match kind {
        AxisKind::ComplexExponential { .. } => IndexSet::Integers,
        AxisKind::Sine { .. } => IndexSet::PositiveNaturals,
        _ => IndexSet::Naturals,
    }
}

fn zero_based(what: &str, i: usize, count: usize) -> Result<usize> {
    if i == 0 || i > count {
        return Err(Error::Document(format!("{what} {i} out of range 1..={count}")));
    }
    Ok(i - 1)
}

fn derivative_or_zero(d: &[u32], dim: usize) -> Result<Vec<u32>> {
    match d.len() {
        0 => Ok(vec![0; dim]),
        n if n == dim => Ok(d.to_vec()),
        n => Err(Error::Document(format!("derivative has {n} entries, basis has {dim} axes"))),
    }
}

fn derivative_for_doc(d: &[u32]) -> Vec<u32> {
    if d.iter().all(|&a| a == 0) {
        Vec::new()
    } else {
        d.to_vec()
    }
}

fn spatial_from_doc(coeff: Complex, factors: &[FactorDoc], derivative: &[u32], dim: usize) -> Result<SpatialTerm> {
    let mut term = SpatialTerm::derivative(&derivative_or_zero(derivative, dim)?).with_coeff(coeff.0);
    for f in factors {
        let axis = zero_based("axis", f.axis, dim)?;
        let kind = match (f.power, f.exp) {
            (Some(s), None) => FactorKind::Power(s.0),
            (None, Some(s)) => FactorKind::Exp(s.0),
            _ => return Err(Error::Document("a factor needs exactly one of `power`, `exp`".into())),
        };
        term.factors.push(AxisFactor { axis, kind });
    }
    Ok(term)
}

fn factors_to_doc(term: &SpatialTerm) -> Vec<FactorDoc> {
    term.factors
        .iter()
        .map(|f| {
            let (power, exp) = match f.kind {
                FactorKind::Power(s) => (Some(Real(s)), None),
                FactorKind::Exp(s) => (None, Some(Real(s))),
            };
            FactorDoc { axis: f.axis + 1, power, exp }
        })
        .collect()
}

impl ProblemDocument {
    pub fn into_spec(self) -> Result<ProblemSpec> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "schema {} not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        let axes = self
            .basis
            .iter()
            .map(|a| Axis { factor: a.factor, index_set: a.index_set.unwrap_or_else(|| default_index_set(&a.factor)) })
            .collect();
        let names: Vec<&str> = self.unknowns.iter().map(String::as_str).collect();
        let mut spec = ProblemSpec::new(&self.name, BasisFamily::new(axes), &names);
        let dim = spec.basis.dim();
        let n = spec.n();
        // rows are numbered like unknowns
        for o in &self.operator {
            spec.operator.push(OperatorTerm {
                row: zero_based("row", o.row, n)?,
                unknown: zero_based("unknown", o.unknown, n)?,
                time_order: o.time_order,
                time_coeff: o.time_coeff.clone(),
                spatial: spatial_from_doc(o.coeff, &o.factors, &o.derivative, dim)?,
            });
        }
        let factor = |f: &FactorRefDoc| -> Result<Factor> {
            Ok(Factor { unknown: zero_based("unknown", f.unknown, n)?, derivative: derivative_or_zero(&f.derivative, dim)? })
        };
        for q in &self.quadratic {
            spec.quadratic.push(QuadraticTerm {
                row: zero_based("row", q.row, n)?,
                left: factor(&q.left)?,
                right: factor(&q.right)?,
                weight: q.weight.0,
            });
        }
        for s in self.series_coefficient_terms {
            spec.series_terms.push(SeriesCoefficientTerm {
                row: zero_based("row", s.row, n)?,
                unknown: zero_based("unknown", s.unknown, n)?,
                time_order: s.time_order,
                derivative: derivative_or_zero(&s.derivative, dim)?,
                weight: s.weight.0,
                coefficients: s.coefficients,
            });
        }
        for c in &self.constraints {
            let terms = c
                .terms
                .iter()
                .map(|t| {
                    Ok(ConstraintTerm {
                        unknown: zero_based("unknown", t.unknown, n)?,
                        spatial: spatial_from_doc(t.coeff, &t.factors, &t.derivative, dim)?,
                    })
                })
                .collect::<Result<_>>()?;
            spec.constraints.push(ConstraintRow { terms });
        }
        for i in self.initial {
            spec.initial.push(InitialCondition {
                unknown: zero_based("unknown", i.unknown, n)?,
                order: i.order,
                data: i.data,
            });
        }
        for f in self.forcing {
            spec.forcing.push(Forcing { row: zero_based("row", f.row, n)?, coefficients: f.coefficients });
        }
        spec.truncation = self.truncation;
        spec.horizon = self.horizon;
        spec.eval_box = self.eval_box;
        spec.numeric_steps = self.numeric_steps;
        Ok(spec)
    }

    pub fn from_spec(spec: &ProblemSpec) -> Self {
        ProblemDocument {
            schema: SCHEMA_VERSION,
            name: spec.name.clone(),
            basis: spec.basis.axes.iter().map(|a| AxisDoc { factor: a.factor, index_set: Some(a.index_set) }).collect(),
            unknowns: spec.unknowns.clone(),
            operator: spec
                .operator
                .iter()
                .map(|o| OperatorDoc {
                    row: o.row + 1,
                    unknown: o.unknown + 1,
                    time_order: o.time_order,
                    time_coeff: o.time_coeff.clone(),
                    coeff: Complex(o.spatial.coeff),
                    factors: factors_to_doc(&o.spatial),
                    derivative: derivative_for_doc(&o.spatial.derivative),
                })
                .collect(),
            quadratic: spec
                .quadratic
                .iter()
                .map(|q| {
                    let f = |f: &Factor| FactorRefDoc { unknown: f.unknown + 1, derivative: derivative_for_doc(&f.derivative) };
                    QuadraticDoc { row: q.row + 1, left: f(&q.left), right: f(&q.right), weight: Complex(q.weight) }
                })
                .collect(),
            series_coefficient_terms: spec
                .series_terms
                .iter()
                .map(|s| SeriesTermDoc {
                    row: s.row + 1,
                    coefficients: s.coefficients.clone(),
                    unknown: s.unknown + 1,
                    time_order: s.time_order,
                    derivative: derivative_for_doc(&s.derivative),
                    weight: Complex(s.weight),
                })
                .collect(),
            constraints: spec
                .constraints
                .iter()
                .map(|c| ConstraintDoc {
                    terms: c
                        .terms
                        .iter()
                        .map(|t| ConstraintTermDoc {
                            unknown: t.unknown + 1,
                            coeff: Complex(t.spatial.coeff),
                            factors: factors_to_doc(&t.spatial),
                            derivative: derivative_for_doc(&t.spatial.derivative),
                        })
                        .collect(),
                })
                .collect(),
            initial: spec
                .initial
                .iter()
                .map(|i| InitialDoc { unknown: i.unknown + 1, order: i.order, data: i.data.clone() })
                .collect(),
            forcing: spec
                .forcing
                .iter()
                .map(|f| ForcingDoc { row: f.row + 1, coefficients: f.coefficients.clone() })
                .collect(),
            truncation: spec.truncation,
            horizon: spec.horizon,
            eval_box: spec.eval_box.clone(),
            numeric_steps: spec.numeric_steps,
        }
    }
}

pub fn from_json(text: &str) -> Result<ProblemSpec> {
    let doc: ProblemDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    doc.into_spec()
}

pub fn to_json(spec: &ProblemSpec) -> String {
    serde_json::to_string_pretty(&ProblemDocument::from_spec(spec)).expect("documents always serialize")
}

pub fn load(path: &Path) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
}

/// SHA-256 (hex) of the compact canonical document.
pub fn spec_hash(spec: &ProblemSpec) -> String {
    let body = serde_json::to_vec(&ProblemDocument::from_spec(spec)).expect("documents always serialize");
    Sha256::digest(&body).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{builtin_example, EXAMPLES};

    #[test]
    fn builtins_round_trip() {
        for (name, _) in EXAMPLES {
            let spec = builtin_example(name).unwrap();
            let back = from_json(&to_json(&spec)).unwrap();
            assert_eq!(back, spec, "{name}");
            assert_eq!(spec_hash(&back), spec_hash(&spec));
        }
    }

    #[test]
    fn hash_depends_on_truncation() {
        let spec = builtin_example("wave").unwrap();
        assert_ne!(spec_hash(&spec), spec_hash(&spec.with_truncation(9)));
        assert_eq!(spec_hash(&spec).len(), 64);
    }

    #[test]
    fn rejects_bad_documents() {
        let base = to_json(&builtin_example("burgers").unwrap());
        let v2 = base.replacen("\"schema\": 1", "\"schema\": 2", 1);
        assert!(matches!(from_json(&v2), Err(Error::Document(_))));
        let row0 = base.replacen("\"row\": 1", "\"row\": 0", 1);
        assert!(matches!(from_json(&row0), Err(Error::Document(m)) if m.contains("row 0")));
        assert!(from_json("{").is_err());
        let extra = base.replacen("\"schema\": 1", "\"schema\": 1, \"bogus\": 3", 1);
        assert!(from_json(&extra).is_err());
    }

    #[test]
    fn pi_strings_resolve() {
        let text = r#"{"schema":1,"basis":[{"kind":"sine","omega":"2pi"}],"unknowns":["u"],
            "truncation":1,"horizon":"pi/2","eval_box":[[0,"pi"]]}"#;
        let spec = from_json(text).unwrap();
        assert_eq!(spec.horizon, std::f64::consts::FRAC_PI_2);
        assert_eq!(spec.eval_box, vec![(0.0, std::f64::consts::PI)]);
        assert_eq!(spec.basis.axes[0].index_set, IndexSet::PositiveNaturals);
    }
}
