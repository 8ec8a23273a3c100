//! Ready-made problems, with builders for their parameterized families.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::basis::{Axis, BasisFamily, BasisIndex, Expansion, SmoothFunction, SpatialTerm};
use crate::error::{Error, Result};
use crate::exppoly::ExpPoly;
use crate::linear::convert_trig_to_complex;
use crate::literal::Real;
use crate::problem::{
    ConstraintRow, ConstraintTerm, Factor, Forcing, InitialCondition, OperatorTerm, ProblemSpec,
    QuadraticTerm, SeriesCoefficientTerm, TimePoly,
};
use crate::C64;

/// Names and one-line descriptions of the built-in problems.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("burgers", "u_t + u u_x = 0, u(x,0) = 1 + e^(x-12), x in [0,11]; exponential basis e^(k(x-12))"),
    ("ma1", "u_y - u_xy - (e^(e^-(x+2)) - 1) u = y e^-(x+2), u(x,0) = 1 + e^-(x+2); basis e^(-k(x+2))"),
    ("qq0", "u_t + (x+1)^2 u_xx + u_x u = 0, u(x,0) = (x+1)^-1 + (x+1)^-2, x >= 1; basis (x+1)^-k"),
    ("ex5551", "u_t + u + (x+3)^(1/2) u_x = 0, u(x,0) = sin (x+3)^(-1/4), x >= 0; basis (x+3)^(-k/4)"),
    ("wave", "u_tt - a^2 u_xx = 0 on [0,l], a = 1, l = pi, u(x,0) = sin x, u_t(x,0) = 0; sine basis"),
    ("hyperbolic", "u_tt + a u_xt + b u_xx = 0, a = 0, b = -1, u(x,0) = cos x; basis e^(ikx), k in Z"),
    ("elliptic", "u_tt + a u_xt + b u_xx = 0, a = b = 1, u(x,0) = cos e^(2x), u_t(x,0) = sin e^(2x); basis e^(2kx)"),
    ("oo", "u_t - t (y-3) u_xxy = 0, u(x,y,0) = x^3 (x-pi/2)^3 sin (y-3)^(3/5); basis sin(2kx) (y-3)^(3m/5)"),
    ("stokes_demo", "Stokes flow u_t - nu Lap u + grad p = f, div u = 0 with three Fourier modes; basis e^(i lambda.k x)"),
];

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Built-in problem by name, at its default truncation.
pub fn builtin_example(name: &str) -> Result<ProblemSpec> {
    Ok(match name {
        "burgers" => burgers(),
        "ma1" => ma1(),
        "qq0" => qq0(),
        "ex5551" => ex5551(),
        "wave" => wave(1.0, PI, &[(1, 1.0)], &[]),
        "hyperbolic" => hyperbolic(0.0, -1.0, PI, &[(1, 1.0)], &[]),
        "elliptic" => elliptic(1.0, 1.0),
        "oo" => oo(),
        "stokes_demo" => stokes_demo(),
        _ => return Err(Error::UnknownExample(name.to_string())),
    })
}

fn identity_in_time(order: u32, dim: usize) -> OperatorTerm {
    OperatorTerm::new(0, 0, order, SpatialTerm::identity(dim))
}

/// Inviscid Burgers equation `u_t + u u_x = 0`, `u(x,0) = 1 + e^{x-12}`.
pub fn burgers() -> ProblemSpec {
    let mut s = ProblemSpec::new("burgers", BasisFamily::new(vec![Axis::real_exponential(1.0, 12.0)]), &["u"]);
    s.operator.push(identity_in_time(1, 1));
    s.quadratic.push(QuadraticTerm {
        row: 0,
        left: Factor { unknown: 0, derivative: vec![0] },
        right: Factor { unknown: 0, derivative: vec![1] },
        weight: c(1.0),
    });
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::explicit_1d(&[(0, 1.0), (1, 1.0)]) });
    s.truncation = 12;
    s.horizon = 2.0;
    s.eval_box = vec![(0.0, 11.0)];
    s
}

/// `u_y - u_xy - (e^{e^{-(x+2)}} - 1) u = y e^{-(x+2)}`, `u(x,0) = 1 + e^{-(x+2)}`.
pub fn ma1() -> ProblemSpec {
    let mut s = ProblemSpec::new("ma1", BasisFamily::new(vec![Axis::real_exponential(-1.0, -2.0)]), &["u"]);
    s.operator.push(identity_in_time(1, 1));
    s.operator.push(OperatorTerm::new(0, 0, 1, SpatialTerm::derivative(&[1]).with_coeff(c(-1.0))));
    s.series_terms.push(SeriesCoefficientTerm {
        row: 0,
        coefficients: Expansion::ExpOfExponentialMinusOne,
        unknown: 0,
        time_order: 0,
        derivative: vec![0],
        weight: c(-1.0),
    });
    s.forcing.push(Forcing {
        row: 0,
        coefficients: vec![(BasisIndex::scalar(1), ExpPoly::term(c(1.0), 1, c(0.0)))],
    });
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::explicit_1d(&[(0, 1.0), (1, 1.0)]) });
    s.truncation = 12;
    s.horizon = 5.0;
    s.eval_box = vec![(5.0, 8.0)];
    s
}

/// `u_t + (x+1)² u_xx + u_x u = 0`, `u(x,0) = (x+1)^{-1} + (x+1)^{-2}`.
pub fn qq0() -> ProblemSpec {
    let mut s = ProblemSpec::new("qq0", BasisFamily::new(vec![Axis::power(-1.0, -1.0).positive()]), &["u"]);
    s.operator.push(identity_in_time(1, 1));
    s.operator.push(OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[2]).with_power(0, 2.0)));
    s.quadratic.push(QuadraticTerm {
        row: 0,
        left: Factor { unknown: 0, derivative: vec![1] },
        right: Factor { unknown: 0, derivative: vec![0] },
        weight: c(1.0),
    });
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::explicit_1d(&[(1, 1.0), (2, 1.0)]) });
    s.truncation = 10;
    s.horizon = 3.0;
    s.eval_box = vec![(1.0, 4.0)];
    s
}

/// `u_t + u + (x+3)^{1/2} u_x = 0`, `u(x,0) = sin (x+3)^{-1/4}`.
pub fn ex5551() -> ProblemSpec {
    let mut s = ProblemSpec::new("ex5551", BasisFamily::new(vec![Axis::power(-0.25, -3.0).positive()]), &["u"]);
    s.operator.push(identity_in_time(1, 1));
    s.operator.push(identity_in_time(0, 1));
    s.operator.push(OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[1]).with_power(0, 0.5)));
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::SinOfPower });
    s.truncation = 16;
    s.horizon = 2.0;
    s.eval_box = vec![(0.0, 3.0)];
    s
}

/// `u_tt - a² u_xx = 0` on `[0, l]` with `u(x,0) = Σ A_k sin(kπx/l)` and
/// `u_t(x,0) = Σ B_k sin(kπx/l)`.
pub fn wave(a: f64, l: f64, cos_coeffs: &[(i64, f64)], sin_coeffs: &[(i64, f64)]) -> ProblemSpec {
    let mut s = ProblemSpec::new("wave", BasisFamily::new(vec![Axis::sine(PI / l)]), &["u"]);
    s.operator.push(identity_in_time(2, 1));
    s.operator.push(OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[2]).with_coeff(c(-a * a))));
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::explicit_1d(cos_coeffs) });
    s.initial.push(InitialCondition { unknown: 0, order: 1, data: Expansion::explicit_1d(sin_coeffs) });
    s.truncation = 8;
    s.horizon = 2.0;
    s.eval_box = vec![(0.0, l)];
    s
}

/// `u_tt + a u_xt + b u_xx = 0` with `u(x,0) = Σ A_k cos(kπx/l)` and
/// `u_t(x,0) = Σ B_k sin(kπx/l)`, expanded in `e^{ikπx/l}`.
pub fn hyperbolic(a: f64, b: f64, l: f64, cos_coeffs: &[(i64, f64)], sin_coeffs: &[(i64, f64)]) -> ProblemSpec {
    let family = BasisFamily::new(vec![Axis::complex_exponential(PI / l)]);
    let mut s = ProblemSpec::new("hyperbolic", family, &["u"]);
    s.operator.push(identity_in_time(2, 1));
    if a != 0.0 {
        s.operator.push(OperatorTerm::new(0, 0, 1, SpatialTerm::derivative(&[1]).with_coeff(c(a))));
    }
    s.operator.push(OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[2]).with_coeff(c(b))));
    let to_map = |v: &[(i64, f64)]| v.iter().map(|&(k, x)| (k, c(x))).collect::<BTreeMap<_, _>>();
    let u0 = convert_trig_to_complex(&to_map(cos_coeffs), &BTreeMap::new());
    let u1 = convert_trig_to_complex(&BTreeMap::new(), &to_map(sin_coeffs));
    let expl = |m: BTreeMap<i64, C64>| Expansion::explicit(m.into_iter().map(|(k, v)| (BasisIndex::scalar(k), v)));
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: expl(u0) });
    s.initial.push(InitialCondition { unknown: 0, order: 1, data: expl(u1) });
    s.truncation = 4;
    s.horizon = 2.0;
    s.eval_box = vec![(0.0, l)];
    s
}

/// `u_tt + a u_xt + b u_xx = 0` with `u(x,0) = cos e^{2x}`, `u_t(x,0) = sin e^{2x}`.
pub fn elliptic(a: f64, b: f64) -> ProblemSpec {
    let mut s = ProblemSpec::new("elliptic", BasisFamily::new(vec![Axis::real_exponential(2.0, 0.0)]), &["u"]);
    s.operator.push(identity_in_time(2, 1));
    s.operator.push(OperatorTerm::new(0, 0, 1, SpatialTerm::derivative(&[1]).with_coeff(c(a))));
    s.operator.push(OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[2]).with_coeff(c(b))));
    s.initial.push(InitialCondition { unknown: 0, order: 0, data: Expansion::CosOfExponential });
    s.initial.push(InitialCondition { unknown: 0, order: 1, data: Expansion::SinOfExponential });
    s.truncation = 8;
    s.horizon = 1.0;
    s.eval_box = vec![(-2.0, 0.0)];
    s
}

/// `u_t - t (y-3) u_xxy = 0`, `u(x,y,0) = x³(x-π/2)³ sin (y-3)^{3/5}`.
///
/// The second axis index `j` carries `(y-3)^{3j/5}`; the initial data only
/// populates odd `j`.
pub fn oo() -> ProblemSpec {
    let family = BasisFamily::new(vec![Axis::sine(2.0), Axis::power(0.6, 3.0).positive()]);
    let mut s = ProblemSpec::new("oo", family, &["u"]);
    s.operator.push(identity_in_time(1, 2));
    s.operator.push(
        OperatorTerm::new(0, 0, 0, SpatialTerm::derivative(&[2, 1]).with_power(1, 1.0))
            .with_time_coeff(TimePoly::linear(c(-1.0))),
    );
    let profile = Expansion::FourierSine {
        function: SmoothFunction::RootProduct {
            scale: Real(1.0),
            roots: vec![(Real(0.0), 3), (Real(PI / 2.0), 3)],
        },
        length: Real(PI / 2.0),
    };
    s.initial.push(InitialCondition {
        unknown: 0,
        order: 0,
        data: Expansion::Product { factors: vec![profile, Expansion::SinOfPower] },
    });
    s.truncation = 11;
    s.horizon = 1.0;
    s.eval_box = vec![(0.0, PI / 2.0), (3.5, 5.0)];
    s
}

/// One Fourier mode of Stokes data: initial velocity and forcing.
#[derive(Clone, Debug)]
pub struct StokesMode {
    pub index: [i64; 3],
    pub velocity: [C64; 3],
    pub forcing: [ExpPoly; 3],
}

/// `u_jt - ν Δu_j + p_{x_j} = f_j`, `div u = 0` over
/// `e^{i(λ₁k₁x₁ + λ₂k₂x₂ + λ₃k₃x₃)}`. Unknowns are `u1, u2, u3, p`.
pub fn stokes(lambda: [f64; 3], nu: f64, modes: &[StokesMode]) -> ProblemSpec {
    let family = BasisFamily::new(lambda.iter().map(|&l| Axis::complex_exponential(l)).collect());
    let mut s = ProblemSpec::new("stokes", family, &["u1", "u2", "u3", "p"]);
    let unit = |j: usize, order: u32| {
        let mut d = vec![0; 3];
        d[j] = order;
        d
    };
    for j in 0..3 {
        s.operator.push(OperatorTerm { row: j, ..OperatorTerm::new(j, j, 1, SpatialTerm::identity(3)) });
        for m in 0..3 {
            s.operator
                .push(OperatorTerm::new(j, j, 0, SpatialTerm::derivative(&unit(m, 2)).with_coeff(c(-nu))));
        }
        s.operator.push(OperatorTerm::new(j, 3, 0, SpatialTerm::derivative(&unit(j, 1))));
    }
    s.constraints.push(ConstraintRow {
        terms: (0..3)
            .map(|j| ConstraintTerm { unknown: j, spatial: SpatialTerm::derivative(&unit(j, 1)) })
            .collect(),
    });
    for j in 0..3 {
        s.initial.push(InitialCondition {
            unknown: j,
            order: 0,
            data: Expansion::explicit(modes.iter().map(|m| (BasisIndex::new(m.index.to_vec()), m.velocity[j]))),
        });
        s.forcing.push(Forcing {
            row: j,
            coefficients: modes
                .iter()
                .filter(|m| !m.forcing[j].is_zero())
                .map(|m| (BasisIndex::new(m.index.to_vec()), m.forcing[j].clone()))
                .collect(),
        });
    }
    s.truncation = modes.iter().map(|m| m.index.iter().map(|k| k.unsigned_abs()).sum::<u64>()).max().unwrap_or(0) as u32;
    s.horizon = 2.0;
    s.eval_box = lambda.iter().map(|l| (0.0, 2.0 * PI / l.abs())).collect();
    s
}

/// Three conjugate-symmetric modes: a mean flow, `(1,1,0)` and `(-1,-1,0)`.
pub fn stokes_demo() -> ProblemSpec {
    let amp = C64::new(1.0, 0.5);
    let decay = ExpPoly::term(c(1.0), 0, c(-1.0));
    let wave = [c(2.0) * amp, c(-1.0) * amp, c(0.0)];
    let forcing = [decay.clone(), decay.scale(C64::new(0.0, 0.5)), ExpPoly::zero()];
    let modes = vec![
        StokesMode {
            index: [0, 0, 0],
            velocity: [c(0.5), c(0.0), c(-0.25)],
            forcing: [ExpPoly::zero(), ExpPoly::constant(c(0.1)), ExpPoly::zero()],
        },
        StokesMode { index: [1, 1, 0], velocity: wave, forcing: forcing.clone() },
        StokesMode {
            index: [-1, -1, 0],
            velocity: wave.map(|v| v.conj()),
            forcing: forcing.map(|f| f.conj()),
        },
    ];
    let mut s = stokes([1.0, 2.0, 1.0], 0.5, &modes);
    s.name = "stokes_demo".into();
    s
}
