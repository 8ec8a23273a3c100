//! Series solutions of linear and weakly nonlinear Cauchy problems in
//! Fourier–Taylor bases.
//!
//! A problem is posed over a product basis `ξ_k(x)` (complex exponentials,
//! sines, cosines, real exponentials or powers) on which every spatial term
//! acts by scalar multiplication and an index shift. Each coefficient
//! `T_k(t)` then satisfies an ODE that is solved exactly as an [`ExpPoly`]
//! when possible, numerically otherwise.
//!
//! ```
//! use ftseries::builtin::builtin_example;
//!
//! let spec = builtin_example("wave").unwrap().validate().unwrap();
//! let sol = ftseries::solve(&spec).unwrap();
//! let u = sol.eval(0, &[1.0], 0.5).unwrap();
//! assert!((u.re - 0.5f64.cos() * 1.0f64.sin()).abs() < 1e-12);
//! ```

pub mod archive;
pub mod basis;
pub mod builtin;
pub mod diagnostics;
pub mod document;
pub mod error;
pub mod exppoly;
pub mod linear;
pub mod literal;
pub mod ode;
pub mod problem;
pub mod quadrature;
pub mod solution;
pub mod triangular;

pub use num_complex::Complex64 as C64;

pub use basis::{Axis, AxisKind, BasisFamily, BasisIndex, EigenAction, Expansion, IndexSet, SpatialTerm};
pub use error::{Error, Result};
pub use exppoly::{ExpPoly, Term};
pub use problem::{ProblemSpec, Structure, ValidatedSpec};
pub use solution::{Backend, CoefficientSeries, SeriesSolution, TimeFunction};

/// Solves a validated problem with the solver its structure calls for.
pub fn solve(spec: &ValidatedSpec) -> Result<SeriesSolution> {
    if !spec.constraints.is_empty() {
        linear::solve_stokes(spec)
    } else if spec.detect_structure() == Structure::Triangular {
        triangular::solve_triangular(spec)
    } else {
        linear::solve_all(spec)
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/exppoly.md")]
    struct ExpPolyChapter;
    #[doc = include_str!("../../../book/src/bases.md")]
    struct BasesChapter;
    #[doc = include_str!("../../../book/src/problems.md")]
    struct ProblemsChapter;
    #[doc = include_str!("../../../book/src/solvers.md")]
    struct SolversChapter;
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    struct DiagnosticsChapter;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct CliChapter;
}
