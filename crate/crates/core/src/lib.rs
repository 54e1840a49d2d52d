//! Zeros of random polynomials with flip-invariant coefficients.
//!
//! * [`poly`]: polynomials, majorants `S(r,P)`, `h`, `H`, central index.
//! * [`newton`]: the Newton–Hadamard polygon and its vertex count `V(P)`.
//! * [`roots`]: Aberth–Ehrlich roots, exact Sturm real-root counts, zeros on Lipschitz curves.
//! * [`theta`]: the sign-flip coefficient model and property (Θ).
//! * [`certificates`]: Turán ratios, the `(1−z)P` majorant bound, Jensen and zero-free-circle checks, exhaustive flip experiments.
//! * [`harness`]: reproducible Monte Carlo experiments and their CSV/JSON output.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod error;
pub mod exec;
pub mod harness;
pub mod newton;
pub mod poly;
pub mod rng;
pub mod roots;
pub mod theta;

pub use error::{Error, Result};
pub use newton::{harmonic_v_bound, polygon, vertex_count, NewtonHadamardPolygon};
pub use num_complex::Complex64;
pub use poly::{ExpPolynomialView, Polynomial};
pub use roots::{all_roots, count_real, LipschitzCurve, RootSet};
