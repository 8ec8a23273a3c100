//! Solution archives: versioned JSON holding every solved mode.
//!
//! Closed-form modes are stored as `[re c, im c, p, re q, im q]` quintuples,
//! numeric modes as their sampled grid. Serialization is deterministic:
//! modes appear by unknown, then index order, and nothing time-dependent is
//! recorded.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFamily, BasisIndex};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::literal::Complex;
use crate::solution::{CoefficientSeries, Provenance, SeriesSolution, TimeFunction, Trajectory};

pub const ARCHIVE_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum ModeRecord {
    ClosedForm {
        unknown: usize,
        index: BasisIndex,
        terms: Vec<[f64; 5]>,
    },
    Numeric {
        unknown: usize,
        index: BasisIndex,
        grid: SampleGrid,
        /// `samples[j][i]`: `j`-th derivative at grid point `i`.
        samples: Vec<Vec<Complex>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Archive {
    pub schema: u32,
    pub spec_hash: String,
    pub name: String,
    pub unknowns: Vec<String>,
    pub basis: BasisFamily,
    pub truncation: u32,
    pub horizon: f64,
    pub eval_box: Vec<(f64, f64)>,
    pub modes: Vec<ModeRecord>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Archive {
    pub fn from_solution(sol: &SeriesSolution) -> Self {
        let mut modes = Vec::new();
        for (q, map) in sol.coefficients.modes.iter().enumerate() {
            for (k, f) in map {
                modes.push(match f {
                    TimeFunction::Closed(p) => {
                        ModeRecord::ClosedForm { unknown: q + 1, index: k.clone(), terms: p.to_quintuples() }
                    }
                    TimeFunction::Sampled(s) => ModeRecord::Numeric {
                        unknown: q + 1,
                        index: k.clone(),
                        grid: SampleGrid { t0: s.t0, t1: s.t1, steps: s.steps() },
                        samples: s.samples.iter().map(|row| row.iter().map(|&c| Complex(c)).collect()).collect(),
                    },
                });
            }
        }
        let p = &sol.provenance;
        Archive {
            schema: ARCHIVE_SCHEMA,
            spec_hash: p.spec_hash.clone(),
            name: p.name.clone(),
            unknowns: sol.unknowns.clone(),
            basis: sol.basis().clone(),
            truncation: p.truncation,
            horizon: p.horizon,
            eval_box: p.eval_box.clone(),
            modes,
            warnings: sol.warnings.clone(),
        }
    }

    pub fn into_solution(self) -> Result<SeriesSolution> {
        let bad = |m: String| Error::Document(format!("archive: {m}"));
        if self.schema != ARCHIVE_SCHEMA {
            return Err(bad(format!("schema {} not supported (expected {ARCHIVE_SCHEMA})", self.schema)));
        }
        self.basis.validate()?;
        let n = self.unknowns.len();
        let mut coefficients = CoefficientSeries::new(self.basis.clone(), n);
        for record in self.modes {
            let (unknown, index, function) = match record {
                ModeRecord::ClosedForm { unknown, index, terms } => {
                    let p = ExpPoly::from_quintuples(&terms)
                        .ok_or_else(|| bad(format!("malformed terms for mode {index}")))?;
                    (unknown, index, TimeFunction::Closed(p))
                }
                ModeRecord::Numeric { unknown, index, grid, samples } => {
                    let ok = grid.steps > 0 && samples.len() >= 2 && samples.iter().all(|r| r.len() == grid.steps + 1);
                    if !ok {
                        return Err(bad(format!("sample grid of mode {index} is inconsistent")));
                    }
                    let samples = samples.into_iter().map(|r| r.into_iter().map(|c| c.0).collect()).collect();
                    (unknown, index, TimeFunction::Sampled(Trajectory { t0: grid.t0, t1: grid.t1, samples }))
                }
            };
            if unknown == 0 || unknown > n {
                return Err(bad(format!("unknown {unknown} out of range 1..={n}")));
            }
            if !self.basis.contains(&index) {
                return Err(bad(format!("index {index} is not in the basis")));
            }
            let slot: &mut BTreeMap<_, _> = &mut coefficients.modes[unknown - 1];
            if slot.insert(index.clone(), function).is_some() {
                return Err(bad(format!("mode {index} of unknown {unknown} listed twice")));
            }
        }
        Ok(SeriesSolution {
            unknowns: self.unknowns,
            coefficients,
            provenance: Provenance {
                name: self.name,
                spec_hash: self.spec_hash,
                truncation: self.truncation,
                horizon: self.horizon,
                eval_box: self.eval_box,
            },
            warnings: self.warnings,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("archives always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("archive: {e}")))
    }
}

pub fn write(sol: &SeriesSolution, path: &Path) -> Result<()> {
    std::fs::write(path, Archive::from_solution(sol).to_json())
        .map_err(|e| Error::Document(format!("cannot write {}: {e}", path.display())))
}

pub fn read(path: &Path) -> Result<SeriesSolution> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
    Archive::from_json(&text)?.into_solution()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_example;

    fn solved(name: &str, n: u32) -> SeriesSolution {
        crate::solve(&builtin_example(name).unwrap().with_truncation(n).validate().unwrap()).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        for (name, n) in [("burgers", 8), ("wave", 4), ("oo", 3)] {
            let sol = solved(name, n);
            let text = Archive::from_solution(&sol).to_json();
            let back = Archive::from_json(&text).unwrap().into_solution().unwrap();
            assert_eq!(back, sol, "{name}");
            assert_eq!(Archive::from_solution(&back).to_json(), text);
        }
    }

    #[test]
    fn burgers_mode_three_is_one_quintuple() {
        let archive = Archive::from_solution(&solved("burgers", 12));
        let three = archive
            .modes
            .iter()
            .find_map(|m| match m {
                ModeRecord::ClosedForm { index, terms, .. } if *index == BasisIndex::scalar(3) => Some(terms.clone()),
                _ => None,
            })
            .unwrap();
        assert_eq!(three.len(), 1);
        let [re, im, p, qre, qim] = three[0];
        assert!((re - 1.5).abs() < 1e-14 && im == 0.0 && p == 2.0 && qre == -3.0 && qim == 0.0);
    }

    #[test]
    fn rejects_foreign_schema_and_bad_modes() {
        let mut a = Archive::from_solution(&solved("wave", 2));
        a.schema = 7;
        assert!(a.clone().into_solution().is_err());
        a.schema = ARCHIVE_SCHEMA;
        a.modes.push(a.modes[0].clone());
        assert!(matches!(a.into_solution(), Err(Error::Document(m)) if m.contains("twice")));
    }
}
