use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use ftseries::archive::Archive;
use ftseries::builtin::{builtin_example, hyperbolic, stokes, wave, StokesMode};
use ftseries::diagnostics::{Grid, Reference};
use ftseries::exppoly::Term;
use ftseries::{BasisIndex, Error, ExpPoly, C64};
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn i(x: f64) -> C64 {
    C64::new(0.0, x)
}

#[test]
fn wave_modes_are_the_trigonometric_closed_form() {
    let (a, l) = (2.0, 3.0);
    let cos = [(1, 1.0), (2, -0.5)];
    let sin = [(1, 0.3), (3, 1.0)];
    let spec = wave(a, l, &cos, &sin).with_truncation(4).validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    for k in 1..=4i64 {
        let ak = cos.iter().find(|e| e.0 == k).map_or(0.0, |e| e.1);
        let bk = sin.iter().find(|e| e.0 == k).map_or(0.0, |e| e.1);
        let w = a * k as f64 * PI / l;
        // A cos wt + (B/w) sin wt in exponential form
        let expected = ExpPoly::from_terms([
            Term::new(c(ak / 2.0) + bk / w / i(2.0), 0, i(w)),
            Term::new(c(ak / 2.0) - bk / w / i(2.0), 0, i(-w)),
        ]);
        let got = sol.coefficients.closed(0, &BasisIndex::scalar(k)).unwrap();
        assert!(got.approx_eq(&expected, 1e-12), "k = {k}: {got} vs {expected}");
    }
}

#[test]
fn hyperbolic_matches_travelling_waves() {
    let (a, b, l) = (1.0, -1.0, 2.0);
    let cos = [(0, 0.5), (1, 1.0), (2, 0.25)];
    let sin = [(1, 0.5), (3, -0.2)];
    let spec = hyperbolic(a, b, l, &cos, &sin).with_truncation(3).validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    let reference = Reference::Hyperbolic { a, b, l, cos: cos.to_vec(), sin: sin.to_vec() };
    let eval = reference.evaluator(3).unwrap();
    for (x, t) in Grid::uniform(&[(0.0, l)], &[17], 2.0, 13).points() {
        let u = sol.eval(0, &x, t).unwrap();
        assert_abs_diff_eq!(u.re, eval(&x, t), epsilon = 1e-12);
        assert_abs_diff_eq!(u.im, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn elliptic_modes_solve_their_ode_exactly() {
    let spec = builtin_example("elliptic").unwrap().validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    for k in spec.modes() {
        let j = k.components()[0] as f64;
        let t = sol.coefficients.closed(0, &k).unwrap();
        // T'' + 2j T' + 4j² T with a = b = 1
        let residual = &(&t.differentiate().differentiate() + &t.differentiate().scale(c(2.0 * j))) + &t.scale(c(4.0 * j * j));
        let scale = t.terms().iter().map(|x| x.coeff.norm()).fold(0.0, f64::max);
        assert!(residual.terms().iter().all(|x| x.coeff.norm() <= 1e-12 * scale.max(1.0)), "mode {k}: {residual}");
    }
}

fn stokes_modes(amp: C64) -> Vec<StokesMode> {
    let decay = ExpPoly::term(c(1.0), 0, c(-1.0));
    let velocity = [c(2.0) * amp, c(-1.0) * amp, c(0.0)];
    let forcing = [decay.clone(), decay.scale(i(0.5)), ExpPoly::term(c(0.3), 1, c(0.0))];
    vec![
        StokesMode { index: [0, 0, 0], velocity: [c(0.5), c(0.0), c(-0.25)], forcing: [ExpPoly::zero(), ExpPoly::constant(c(0.1)), ExpPoly::zero()] },
        StokesMode { index: [1, 1, 0], velocity, forcing: forcing.clone() },
        StokesMode { index: [-1, -1, 0], velocity: velocity.map(|v| v.conj()), forcing: forcing.map(|f| f.conj()) },
    ]
}

#[test]
fn stokes_divergence_and_pressure() {
    let lambda = [1.0, 2.0, 1.0];
    let spec = stokes(lambda, 0.5, &stokes_modes(C64::new(1.0, 0.5))).validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    for k in spec.modes() {
        let kappa: Vec<f64> = k.components().iter().zip(lambda).map(|(&kc, l)| kc as f64 * l).collect();
        let u: Vec<ExpPoly> = (0..3).map(|q| sol.coefficients.closed(q, &k).unwrap().clone()).collect();
        let div = ExpPoly::linear_combination(&[(i(kappa[0]), &u[0]), (i(kappa[1]), &u[1]), (i(kappa[2]), &u[2])]);
        assert!(div.is_zero(), "mode {k}: {div}");
        let k2: f64 = kappa.iter().map(|x| x * x).sum();
        let p = sol.coefficients.closed(3, &k).unwrap();
        if k2 == 0.0 {
            assert!(p.is_zero());
            continue;
        }
        let f: Vec<ExpPoly> = (0..3)
            .map(|q| spec.forcing_map(q).get(&k).cloned().unwrap_or_else(ExpPoly::zero))
            .collect();
        let expected = ExpPoly::linear_combination(&[(c(kappa[0]), &f[0]), (c(kappa[1]), &f[1]), (c(kappa[2]), &f[2])])
            .scale(C64::new(1.0, 0.0) / i(k2));
        assert!(p.approx_eq(&expected, 1e-12), "mode {k}: {p} vs {expected}");
    }
}

#[test]
fn stokes_rejects_triangular_structure_and_missing_constraints() {
    let spec = builtin_example("burgers").unwrap().validate().unwrap();
    assert!(ftseries::linear::solve_all(&spec).is_err());
    assert!(ftseries::linear::solve_stokes(&spec).is_err());
}

#[test]
fn solving_twice_gives_identical_archives() {
    for name in ["burgers", "oo", "stokes_demo"] {
        let spec = builtin_example(name).unwrap().with_truncation(4).validate().unwrap();
        let a = Archive::from_solution(&ftseries::solve(&spec).unwrap()).to_json();
        let b = Archive::from_solution(&ftseries::solve(&spec).unwrap()).to_json();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn numeric_backend_is_used_only_for_time_dependent_coefficients() {
    let spec = builtin_example("oo").unwrap().with_truncation(4).validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    assert!(sol.backends().iter().all(|b| b.2 == ftseries::Backend::Numeric));
    let spec = builtin_example("wave").unwrap().validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    assert!(sol.backends().iter().all(|b| b.2 == ftseries::Backend::ClosedForm));
}

#[test]
fn truncation_zero_with_zero_data_is_zero() {
    let spec = wave(1.0, PI, &[], &[]).with_truncation(0).validate().unwrap();
    let sol = ftseries::solve(&spec).unwrap();
    assert_eq!(sol.eval(0, &[1.0], 1.0).unwrap(), c(0.0));
}

#[test]
fn unknown_example_is_an_error() {
    assert!(matches!(builtin_example("heat"), Err(Error::UnknownExample(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn archives_reproduce_evaluations_bit_for_bit(x in 0.0..11.0f64, t in 0.0..2.0f64, y in 3.5..5.0f64, s in 0.0..1.0f64) {
        use std::sync::OnceLock;
        static SOLS: OnceLock<Vec<(ftseries::SeriesSolution, ftseries::SeriesSolution)>> = OnceLock::new();
        let sols = SOLS.get_or_init(|| {
            ["burgers", "oo"]
                .iter()
                .map(|name| {
                    let spec = builtin_example(name).unwrap().with_truncation(6).validate().unwrap();
                    let sol = ftseries::solve(&spec).unwrap();
                    let back = Archive::from_json(&Archive::from_solution(&sol).to_json()).unwrap().into_solution().unwrap();
                    (sol, back)
                })
                .collect()
        });
        let (a, b) = &sols[0];
        prop_assert_eq!(a.eval(0, &[x], t).unwrap(), b.eval(0, &[x], t).unwrap());
        let (a, b) = &sols[1];
        let p = [s * PI / 2.0, y];
        prop_assert_eq!(a.eval(0, &p, s).unwrap(), b.eval(0, &p, s).unwrap());
    }
}
