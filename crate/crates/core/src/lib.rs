//! Numerical toolkit for the self-adjoint fourth-order equation
//!
//! ```text
//! (r(x) y'')'' - (q(x) y')' = p(x) y,        r > 0, p > 0, q continuous,
//! ```
//!
//! written throughout in quasi-derivative form with the state
//! `(y, y', y1, Ty)` where `y1 = r y''` and `Ty = (r y'')' - q y'`.
//!
//! The crate computes, at desk scale:
//!
//! * fundamental solutions `u`, `v` with `u'(a) = 1` and `Tv(a) = 1`,
//!   their subwronskians `sigma`, `sigma'`, `tau`, `tau'`, `rho`, and the
//!   systems-conjugate and systems-focal points (first zeros of `sigma'`
//!   and `tau'` beyond `a`);
//! * the auxiliary second-order solution `h` of `(r h')' = q h` and the
//!   change of variables `t = ∫ h` that removes the middle term;
//! * shooting eigenvalues of the parameterized equation
//!   `(r y'')'' - (q y')' = λ p y` under focal boundary conditions, and
//!   of the Sturm-Liouville problem `-(r y')' + q y = ρ p y`;
//! * quadratic-functional machinery: Rayleigh quotients, the positivity
//!   check for `∫ r (w')² + q w²`, a Wirtinger-type minimum over
//!   polynomial trial spaces, coefficient comparison, and conjugacy
//!   criteria driven by divergence flags.

pub mod eigen;
pub mod expr;
pub mod functional;
pub mod ivp;
pub mod numfmt;
pub mod oscillation;
pub mod problem;
pub mod quad;
pub mod roots;
pub mod transform;

pub use expr::{CoefficientExpr, EvalError, ParseError};
pub use ivp::{integrate, OdeSystem, TolPair, Trajectory};
pub use oscillation::{FundamentalPair, OscillationReport, SubwronskianSample};
pub use problem::{CoeffError, CoefficientSet, Coefficients, DivergenceFlags, ProblemSpec, Tolerances};
