//! Cauchy problems and their per-mode ODE systems.
//!
//! A problem for unknowns `u_1..u_n` is a sum of operator terms
//! `A(t) ∂_t^h B(x) ∂_x^α u_q` in each row `p`, plus optional quadratic
//! products, products with a known series, algebraic constraint rows,
//! initial data and forcing. Substituting `u_q = Σ_k T_qk(t) ξ_k` turns row
//! `p` into one ODE per index `k`; [`ValidatedSpec::assemble_mode_system`]
//! builds that ODE.
//!
//! Rows and unknowns are 0-based in the API and 1-based in problem documents.

use std::collections::BTreeMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFamily, BasisIndex, Expansion, SpatialTerm};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::literal::Complex;
use crate::C64;

pub const DEFAULT_NUMERIC_STEPS: u32 = 1024;

/// Polynomial in `t` with complex coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimePoly(Vec<C64>);

impl TimePoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        TimePoly(coeffs)
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// `c · t`.
    pub fn linear(c: C64) -> Self {
        Self::new(vec![C64::new(0.0, 0.0), c])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<C64> {
        match self.0.as_slice() {
            [] => Some(C64::new(0.0, 0.0)),
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.0.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.0.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &TimePoly) -> Self {
        let n = self.0.len().max(other.0.len());
        let get = |v: &[C64], i: usize| v.get(i).copied().unwrap_or_default();
        Self::new((0..n).map(|i| get(&self.0, i) + get(&other.0, i)).collect())
    }

    pub fn to_exppoly(&self) -> ExpPoly {
        ExpPoly::polynomial(&self.0)
    }
}

impl Serialize for TimePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|&c| Complex(c)).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TimePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Complex>::deserialize(d)?;
        Ok(TimePoly::new(v.into_iter().map(|c| c.0).collect()))
    }
}

/// `time_coeff(t) · ∂_t^time_order · spatial(u_unknown)` in row `row`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTerm {
    pub row: usize,
    pub unknown: usize,
    pub time_order: u32,
    pub time_coeff: TimePoly,
    pub spatial: SpatialTerm,
}

impl OperatorTerm {
    pub fn new(row: usize, unknown: usize, time_order: u32, spatial: SpatialTerm) -> Self {
        OperatorTerm { row, unknown, time_order, time_coeff: TimePoly::one(), spatial }
    }

    pub fn with_time_coeff(mut self, a: TimePoly) -> Self {
        self.time_coeff = a;
        self
    }
}

/// `∂_x^derivative u_unknown` as one side of a product.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub unknown: usize,
    pub derivative: Vec<u32>,
}

/// `weight · left · right` in row `row`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticTerm {
    pub row: usize,
    pub left: Factor,
    pub right: Factor,
    pub weight: C64,
}

/// `weight · (Σ_j c_j ξ_j) · ∂_t^time_order ∂_x^derivative u_unknown` with a
/// known, time-independent series `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficientTerm {
    pub row: usize,
    pub coefficients: Expansion,
    pub unknown: usize,
    pub time_order: u32,
    pub derivative: Vec<u32>,
    pub weight: C64,
}

/// One summand `spatial(u_unknown)` of an algebraic constraint `Σ ... = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintTerm {
    pub unknown: usize,
    pub spatial: SpatialTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRow {
    pub terms: Vec<ConstraintTerm>,
}

/// `∂_t^order u_unknown |_{t=0}` expanded in the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialCondition {
    pub unknown: usize,
    pub order: u32,
    pub data: Expansion,
}

/// Forcing `Σ_k Z_k(t) ξ_k` on the right-hand side of row `row`.
#[derive(Clone, Debug, PartialEq)]
pub struct Forcing {
    pub row: usize,
    pub coefficients: Vec<(BasisIndex, ExpPoly)>,
}

/// A full Cauchy problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub basis: BasisFamily,
    pub unknowns: Vec<String>,
    pub operator: Vec<OperatorTerm>,
    pub quadratic: Vec<QuadraticTerm>,
    pub series_terms: Vec<SeriesCoefficientTerm>,
    pub constraints: Vec<ConstraintRow>,
    pub initial: Vec<InitialCondition>,
    pub forcing: Vec<Forcing>,
    pub truncation: u32,
    pub horizon: f64,
    /// Per spatial axis `(min, max)`.
    pub eval_box: Vec<(f64, f64)>,
    pub numeric_steps: u32,
}

impl ProblemSpec {
    /// A problem with no terms and no data over `basis`.
    pub fn new(name: &str, basis: BasisFamily, unknowns: &[&str]) -> Self {
        let dim = basis.dim();
        ProblemSpec {
            name: name.to_string(),
            basis,
            unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
            operator: Vec::new(),
            quadratic: Vec::new(),
            series_terms: Vec::new(),
            constraints: Vec::new(),
            initial: Vec::new(),
            forcing: Vec::new(),
            truncation: 0,
            horizon: 1.0,
            eval_box: vec![(0.0, 1.0); dim],
            numeric_steps: DEFAULT_NUMERIC_STEPS,
        }
    }

    pub fn n(&self) -> usize {
        self.unknowns.len()
    }

    pub fn with_truncation(&self, n: u32) -> Self {
        ProblemSpec { truncation: n, ..self.clone() }
    }

    /// Highest time-derivative order of each unknown over all rows.
    pub fn orders(&self) -> Vec<u32> {
        let mut m = vec![0; self.n()];
        for t in &self.operator {
            if t.unknown < m.len() {
                m[t.unknown] = m[t.unknown].max(t.time_order);
            }
        }
        for s in &self.series_terms {
            if s.unknown < m.len() {
                m[s.unknown] = m[s.unknown].max(s.time_order);
            }
        }
        m
    }

    pub fn validate(self) -> Result<ValidatedSpec> {
        ValidatedSpec::new(self)
    }
}

/// Whether modes decouple or must be solved in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Diagonal,
    Triangular,
}

/// A problem whose invariants have been checked, with its data expanded at
/// the truncation order.
#[derive(Clone, Debug)]
pub struct ValidatedSpec {
    spec: ProblemSpec,
    orders: Vec<u32>,
    initial: Vec<Vec<BTreeMap<BasisIndex, C64>>>,
    forcing: Vec<BTreeMap<BasisIndex, ExpPoly>>,
    series: Vec<BTreeMap<BasisIndex, C64>>,
    operator_shifts: Vec<Vec<i64>>,
    quadratic_shifts: Vec<(Vec<i64>, Vec<i64>)>,
    series_shifts: Vec<Vec<i64>>,
}

impl Deref for ValidatedSpec {
    type Target = ProblemSpec;
    fn deref(&self) -> &ProblemSpec {
        &self.spec
    }
}

fn invalid<T>(msg: String) -> Result<T> {
    Err(Error::Validation(msg))
}

fn with_context(e: Error, what: &str) -> Error {
    match e {
        Error::NotRepresentable(m) => Error::NotRepresentable(format!("{what}: {m}")),
        Error::Validation(m) => Error::Validation(format!("{what}: {m}")),
        other => other,
    }
}

impl ValidatedSpec {
    fn new(spec: ProblemSpec) -> Result<Self> {
        let family = &spec.basis;
        family.validate()?;
        let dim = family.dim();
        let n = spec.n();
        if n == 0 {
            return invalid("problem has no unknowns".into());
        }
        if !(spec.horizon > 0.0 && spec.horizon.is_finite()) {
            return invalid(format!("horizon {} must be positive", spec.horizon));
        }
        if spec.numeric_steps == 0 {
            return invalid("numeric step count must be positive".into());
        }
        if spec.eval_box.len() != dim {
            return invalid(format!("evaluation box has {} axes, basis has {dim}", spec.eval_box.len()));
        }
        if let Some((j, _)) = spec.eval_box.iter().enumerate().find(|(_, (lo, hi))| !(lo < hi)) {
            return invalid(format!("evaluation box axis {} is empty", j + 1));
        }
        let check_rq = |what: &str, row: usize, unknown: usize| {
            if row >= n {
                invalid(format!("{what}: row {} exceeds system size {n}", row + 1))
            } else if unknown >= n {
                invalid(format!("{what}: unknown {} exceeds system size {n}", unknown + 1))
            } else {
                Ok(())
            }
        };

        let mut operator_shifts = Vec::new();
        for (i, t) in spec.operator.iter().enumerate() {
            let what = format!("operator term {}", i + 1);
            check_rq(&what, t.row, t.unknown)?;
            operator_shifts.push(family.term_shift(&t.spatial).map_err(|e| with_context(e, &what))?);
        }

        let needs_closure = !spec.quadratic.is_empty() || !spec.series_terms.is_empty();
        if needs_closure && !family.is_product_closed() {
            return Err(Error::NotClosed {
                axis: family.axes.iter().position(|a| a.factor.is_trigonometric()).unwrap_or(0),
            });
        }
        let mut quadratic_shifts = Vec::new();
        for (i, q) in spec.quadratic.iter().enumerate() {
            let what = format!("quadratic term {}", i + 1);
            check_rq(&what, q.row, q.left.unknown)?;
            check_rq(&what, q.row, q.right.unknown)?;
            let l = family
                .term_shift(&SpatialTerm::derivative(&q.left.derivative))
                .map_err(|e| with_context(e, &what))?;
            let r = family
                .term_shift(&SpatialTerm::derivative(&q.right.derivative))
                .map_err(|e| with_context(e, &what))?;
            quadratic_shifts.push((l, r));
        }

        let mut series = Vec::new();
        let mut series_shifts = Vec::new();
        for (i, s) in spec.series_terms.iter().enumerate() {
            let what = format!("series term {}", i + 1);
            check_rq(&what, s.row, s.unknown)?;
            series_shifts.push(
                family
                    .term_shift(&SpatialTerm::derivative(&s.derivative))
                    .map_err(|e| with_context(e, &what))?,
            );
            series.push(
                family
                    .expand(&s.coefficients, spec.truncation)
                    .map_err(|e| with_context(e, &what))?,
            );
        }

        for (i, c) in spec.constraints.iter().enumerate() {
            let what = format!("constraint {}", i + 1);
            for t in &c.terms {
                check_rq(&what, 0, t.unknown)?;
                let shift = family.term_shift(&t.spatial).map_err(|e| with_context(e, &what))?;
                if shift.iter().any(|&s| s != 0) {
                    return invalid(format!("{what}: constraint terms must not shift modes"));
                }
            }
        }

        let orders = spec.orders();
        let mut initial: Vec<Vec<BTreeMap<BasisIndex, C64>>> =
            orders.iter().map(|&m| vec![BTreeMap::new(); m as usize]).collect();
        let mut seen = vec![vec![false; 0]; n];
        for (q, m) in orders.iter().enumerate() {
            seen[q] = vec![false; *m as usize];
        }
        for ic in &spec.initial {
            if ic.unknown >= n {
                return invalid(format!("initial condition for missing unknown {}", ic.unknown + 1));
            }
            let m = orders[ic.unknown];
            if ic.order >= m {
                return invalid(format!(
                    "unknown {} has time order {m}; initial data of order {} is not expected",
                    ic.unknown + 1,
                    ic.order
                ));
            }
            let slot = &mut seen[ic.unknown][ic.order as usize];
            if *slot {
                return invalid(format!(
                    "duplicate initial data for unknown {} order {}",
                    ic.unknown + 1,
                    ic.order
                ));
            }
            *slot = true;
            let what = format!("initial data for unknown {} order {}", ic.unknown + 1, ic.order);
            initial[ic.unknown][ic.order as usize] = family
                .expand(&ic.data, spec.truncation)
                .map_err(|e| with_context(e, &what))?;
        }
        for (q, s) in seen.iter().enumerate() {
            if let Some(h) = s.iter().position(|&b| !b) {
                return invalid(format!(
                    "unknown {} has time order {} but no initial data of order {h}",
                    q + 1,
                    orders[q]
                ));
            }
        }

        let mut forcing = vec![BTreeMap::new(); n];
        for f in &spec.forcing {
            if f.row >= n {
                return invalid(format!("forcing on missing row {}", f.row + 1));
            }
            for (k, z) in &f.coefficients {
                if !family.contains(k) {
                    return invalid(format!("forcing index {k} is outside the declared index set"));
                }
                if k.norm() > i64::from(spec.truncation) {
                    continue;
                }
                let slot: &mut ExpPoly = forcing[f.row].entry(k.clone()).or_default();
                *slot = &*slot + z;
            }
        }

        let v = ValidatedSpec {
            spec,
            orders,
            initial,
            forcing,
            series,
            operator_shifts,
            quadratic_shifts,
            series_shifts,
        };
        v.check_constraints_at_zero()?;
        Ok(v)
    }

    fn check_constraints_at_zero(&self) -> Result<()> {
        for (ci, row) in self.spec.constraints.iter().enumerate() {
            for k in self.basis.ball(self.truncation) {
                let mut sum = C64::new(0.0, 0.0);
                let mut scale = 0.0f64;
                for t in &row.terms {
                    // algebraic unknowns carry no initial data and do not enter
                    let Some(data) = self.initial[t.unknown].first() else { continue };
                    let Some(r) = data.get(&k) else { continue };
                    let l = self.basis.apply_spatial_term(&t.spatial, &k)?.multiplier;
                    sum += l * r;
                    scale = scale.max((l * r).norm());
                }
                if sum.norm() > 1e-12 * scale.max(1.0) {
                    return invalid(format!(
                        "constraint {} violated by initial data at mode {k}",
                        ci + 1
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn into_spec(self) -> ProblemSpec {
        self.spec
    }

    /// `m_q` per unknown.
    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Expanded initial coefficients `r_qhk`.
    pub fn initial_map(&self, unknown: usize, order: u32) -> &BTreeMap<BasisIndex, C64> {
        &self.initial[unknown][order as usize]
    }

    /// Expanded forcing `Z_kp` of a row.
    pub fn forcing_map(&self, row: usize) -> &BTreeMap<BasisIndex, ExpPoly> {
        &self.forcing[row]
    }

    /// Expanded known series of a series-coefficient term.
    pub fn series_map(&self, term: usize) -> &BTreeMap<BasisIndex, C64> {
        &self.series[term]
    }

    pub fn detect_structure(&self) -> Structure {
        let shifted = self.operator_shifts.iter().any(|s| s.iter().any(|&c| c != 0));
        if shifted || !self.quadratic.is_empty() || !self.series_terms.is_empty() {
            Structure::Triangular
        } else {
            Structure::Diagonal
        }
    }

    /// Indices solved: the truncation ball.
    pub fn modes(&self) -> Vec<BasisIndex> {
        self.basis.ball(self.truncation)
    }

    fn in_range(&self, k: &BasisIndex) -> bool {
        self.basis.contains(k) && k.norm() <= i64::from(self.truncation)
    }

    /// The ODE system satisfied by the coefficients at index `k`.
    pub fn assemble_mode_system(&self, k: &BasisIndex) -> Result<ModeSystem> {
        let n = self.n();
        let family = &self.basis;
        let mut rows: Vec<ModeRow> = (0..n)
            .map(|p| ModeRow {
                entries: Vec::new(),
                source: self.forcing[p].get(k).cloned().unwrap_or_default(),
                incoming: Vec::new(),
            })
            .collect();
        let non_triangular = |reason: String| Error::NonTriangular { index: k.clone(), reason };

        for (term, shift) in self.operator.iter().zip(&self.operator_shifts) {
            let from = k.sub(&BasisIndex::new(shift.clone()));
            if !self.in_range(&from) {
                continue;
            }
            let l = family.apply_spatial_term(&term.spatial, &from)?.multiplier;
            if l == C64::new(0.0, 0.0) || term.time_coeff.is_zero() {
                continue;
            }
            let coeff = term.time_coeff.scale(l);
            if from == *k {
                rows[term.row].add_entry(term.unknown, term.time_order, coeff, None);
            } else if from < *k {
                rows[term.row].incoming.push(Incoming::Linear {
                    from,
                    unknown: term.unknown,
                    order: term.time_order,
                    coeff: coeff.scale(C64::new(-1.0, 0.0)),
                });
            } else {
                return Err(non_triangular(format!("operator term couples to higher mode {from}")));
            }
        }

        for (i, s) in self.series_terms.iter().enumerate() {
            let action_shift = BasisIndex::new(self.series_shifts[i].clone());
            let spatial = SpatialTerm::derivative(&s.derivative);
            for (j, &c) in &self.series[i] {
                let from = k.sub(j).sub(&action_shift);
                if !self.in_range(&from) {
                    continue;
                }
                let l = family.apply_spatial_term(&spatial, &from)?.multiplier;
                let coeff = s.weight * c * l;
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                if from == *k {
                    rows[s.row].add_entry(s.unknown, s.time_order, TimePoly::constant(coeff), None);
                } else if from < *k {
                    rows[s.row].incoming.push(Incoming::Linear {
                        from,
                        unknown: s.unknown,
                        order: s.time_order,
                        coeff: TimePoly::constant(-coeff),
                    });
                } else {
                    return Err(non_triangular(format!("series term couples to higher mode {from}")));
                }
            }
        }

        for (q, (ls, rs)) in self.quadratic.iter().zip(&self.quadratic_shifts) {
            let left_op = SpatialTerm::derivative(&q.left.derivative);
            let right_op = SpatialTerm::derivative(&q.right.derivative);
            let offset = BasisIndex::new(ls.clone()).add(&BasisIndex::new(rs.clone()));
            for a in self.modes() {
                let b = k.sub(&offset).sub(&a);
                if !self.in_range(&b) {
                    continue;
                }
                let la = family.apply_spatial_term(&left_op, &a)?.multiplier;
                let lb = family.apply_spatial_term(&right_op, &b)?.multiplier;
                let coeff = q.weight * la * lb;
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                let a_self = a == *k;
                let b_self = b == *k;
                match (a_self, b_self) {
                    (true, true) => {
                        return Err(non_triangular("quadratic term couples the mode to itself".into()))
                    }
                    (true, false) if b < *k => rows[q.row].add_entry(
                        q.left.unknown,
                        0,
                        TimePoly::constant(coeff),
                        Some((b, q.right.unknown)),
                    ),
                    (false, true) if a < *k => rows[q.row].add_entry(
                        q.right.unknown,
                        0,
                        TimePoly::constant(coeff),
                        Some((a, q.left.unknown)),
                    ),
                    (false, false) if a < *k && b < *k => rows[q.row].incoming.push(Incoming::Quadratic {
                        left: (a, q.left.unknown),
                        right: (b, q.right.unknown),
                        coeff: -coeff,
                    }),
                    _ => {
                        return Err(non_triangular(format!(
                            "quadratic term couples to modes {a} and {b}"
                        )))
                    }
                }
            }
        }

        let initial = (0..n)
            .map(|q| {
                self.initial[q]
                    .iter()
                    .map(|m| m.get(k).copied().unwrap_or_default())
                    .collect()
            })
            .collect();

        let mut constraints = Vec::new();
        for row in &self.constraints {
            let mut entries: Vec<(usize, C64)> = Vec::new();
            for t in &row.terms {
                let l = family.apply_spatial_term(&t.spatial, k)?.multiplier;
                match entries.iter_mut().find(|(u, _)| *u == t.unknown) {
                    Some(e) => e.1 += l,
                    None => entries.push((t.unknown, l)),
                }
            }
            entries.retain(|(_, c)| *c != C64::new(0.0, 0.0));
            constraints.push(entries);
        }

        Ok(ModeSystem {
            index: k.clone(),
            rows,
            orders: self.orders.clone(),
            initial,
            constraints,
        })
    }
}

/// `coeff(t) · [T_partner] · ∂_t^order T_{k,unknown}` on the left-hand side.
///
/// `partner` marks an entry produced by a quadratic product with a lower
/// mode; its coefficient is multiplied by that mode's (solved) function.
#[derive(Clone, Debug, PartialEq)]
pub struct RowEntry {
    pub unknown: usize,
    pub order: u32,
    pub coeff: TimePoly,
    pub partner: Option<(BasisIndex, usize)>,
}

/// A contribution from a lower mode, already moved to the right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub enum Incoming {
    /// `coeff(t) · ∂_t^order T_{from,unknown}`.
    Linear {
        from: BasisIndex,
        unknown: usize,
        order: u32,
        coeff: TimePoly,
    },
    /// `coeff · T_{left} · T_{right}`.
    Quadratic {
        left: (BasisIndex, usize),
        right: (BasisIndex, usize),
        coeff: C64,
    },
}

impl Incoming {
    pub fn dependencies(&self) -> Vec<(&BasisIndex, usize)> {
        match self {
            Incoming::Linear { from, unknown, .. } => vec![(from, *unknown)],
            Incoming::Quadratic { left, right, .. } => vec![(&left.0, left.1), (&right.0, right.1)],
        }
    }
}

/// Row `p` of the mode ODE: `Σ entries = source + Σ incoming`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModeRow {
    pub entries: Vec<RowEntry>,
    pub source: ExpPoly,
    pub incoming: Vec<Incoming>,
}

impl ModeRow {
    fn add_entry(&mut self, unknown: usize, order: u32, coeff: TimePoly, partner: Option<(BasisIndex, usize)>) {
        if let Some(e) = self
            .entries
            .iter_mut()
            .find(|e| e.unknown == unknown && e.order == order && e.partner == partner)
        {
            e.coeff = e.coeff.add(&coeff);
        } else {
            self.entries.push(RowEntry { unknown, order, coeff, partner });
        }
        self.entries.retain(|e| !e.coeff.is_zero());
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty() && self.source.is_zero() && self.incoming.is_empty()
    }

    /// Coefficient of `∂_t^order T_unknown` among entries without a partner.
    pub fn coefficient(&self, unknown: usize, order: u32) -> TimePoly {
        self.entries
            .iter()
            .filter(|e| e.unknown == unknown && e.order == order && e.partner.is_none())
            .fold(TimePoly::default(), |acc, e| acc.add(&e.coeff))
    }
}

/// The per-index ODE Cauchy problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSystem {
    pub index: BasisIndex,
    pub rows: Vec<ModeRow>,
    /// `m_q` per unknown.
    pub orders: Vec<u32>,
    /// `r_qhk` for `h < m_q`.
    pub initial: Vec<Vec<C64>>,
    /// Algebraic rows `Σ coeff · T_q = 0`.
    pub constraints: Vec<Vec<(usize, C64)>>,
}

impl ModeSystem {
    /// No equation content and zero data: the mode is identically zero.
    pub fn is_trivial(&self) -> bool {
        self.rows.iter().all(ModeRow::is_trivial)
            && self.initial.iter().flatten().all(|c| *c == C64::new(0.0, 0.0))
    }

    pub fn has_incoming(&self) -> bool {
        self.rows.iter().any(|r| !r.incoming.is_empty())
    }
}
