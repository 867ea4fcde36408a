//! Problem descriptions: coefficient triples and solver settings.

use crate::expr::{CoefficientExpr, EvalError, ParseError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoeffError {
    #[error("coefficient {name}: {source}")]
    Eval {
        name: &'static str,
        #[source]
        source: EvalError,
    },
    #[error("{name}(x) = {value} is not positive at x = {x}")]
    NotPositive { name: &'static str, x: f64, value: f64 },
    #[error("transformed coefficient at t = {t}: {msg}")]
    Transformed { t: f64, msg: String },
}

/// A coefficient triple evaluable at any point of the integration window.
///
/// `r` and `p` must be strictly positive wherever the solver evaluates
/// them; a violation surfaces as [`CoeffError::NotPositive`].
pub trait Coefficients {
    fn r(&self, x: f64) -> Result<f64, CoeffError>;
    fn p(&self, x: f64) -> Result<f64, CoeffError>;
    fn q(&self, x: f64) -> Result<f64, CoeffError>;
}

impl<T: Coefficients + ?Sized> Coefficients for &T {
    fn r(&self, x: f64) -> Result<f64, CoeffError> {
        (**self).r(x)
    }
    fn p(&self, x: f64) -> Result<f64, CoeffError> {
        (**self).p(x)
    }
    fn q(&self, x: f64) -> Result<f64, CoeffError> {
        (**self).q(x)
    }
}

/// The coefficient triple `(r, p, q)` given as parsed expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub r: CoefficientExpr,
    pub p: CoefficientExpr,
    pub q: CoefficientExpr,
}

impl CoefficientSet {
    pub fn parse(r: &str, p: &str, q: &str) -> Result<CoefficientSet, ParseError> {
        Ok(CoefficientSet {
            r: CoefficientExpr::parse(r)?,
            p: CoefficientExpr::parse(p)?,
            q: CoefficientExpr::parse(q)?,
        })
    }
}

fn eval_positive(
    expr: &CoefficientExpr,
    name: &'static str,
    x: f64,
) -> Result<f64, CoeffError> {
    let value = expr.eval(x).map_err(|source| CoeffError::Eval { name, source })?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(CoeffError::NotPositive { name, x, value })
    }
}

impl Coefficients for CoefficientSet {
    fn r(&self, x: f64) -> Result<f64, CoeffError> {
        eval_positive(&self.r, "r", x)
    }

    fn p(&self, x: f64) -> Result<f64, CoeffError> {
        eval_positive(&self.p, "p", x)
    }

    fn q(&self, x: f64) -> Result<f64, CoeffError> {
        self.q.eval(x).map_err(|source| CoeffError::Eval { name: "q", source })
    }
}

/// Coefficients given by plain closures, mainly for tests and for
/// transformed problems whose coefficients are not expression trees.
pub struct FnCoefficients<R, P, Q> {
    pub r: R,
    pub p: P,
    pub q: Q,
}

impl<R, P, Q> Coefficients for FnCoefficients<R, P, Q>
where
    R: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    fn r(&self, x: f64) -> Result<f64, CoeffError> {
        let value = (self.r)(x);
        if value > 0.0 {
            Ok(value)
        } else {
            Err(CoeffError::NotPositive { name: "r", x, value })
        }
    }

    fn p(&self, x: f64) -> Result<f64, CoeffError> {
        let value = (self.p)(x);
        if value > 0.0 {
            Ok(value)
        } else {
            Err(CoeffError::NotPositive { name: "p", x, value })
        }
    }

    fn q(&self, x: f64) -> Result<f64, CoeffError> {
        Ok((self.q)(x))
    }
}

/// Solver tolerances. Defaults leave headroom below the 1e-8 scale at
/// which the subwronskian identities are checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative local error target of the integrator.
    pub rel: f64,
    /// Absolute local error target of the integrator.
    pub abs: f64,
    /// Relative bound on the subwronskian identity residual.
    pub identity: f64,
    /// Zero-refinement width as a fraction of the window length.
    pub point_frac: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-10,
            abs: 1e-12,
            identity: 1e-8,
            point_frac: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn ivp(&self) -> crate::ivp::TolPair {
        crate::ivp::TolPair {
            rel: self.rel,
            abs: self.abs,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("rel", self.rel),
            ("abs", self.abs),
            ("identity", self.identity),
            ("point_frac", self.point_frac),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance `{name}` must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// User-asserted facts about the coefficients' improper integrals.
///
/// Divergence of an improper integral is not decidable numerically; the
/// conjugacy criteria consume these flags and a numeric heuristic is
/// reported alongside as a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DivergenceFlags {
    /// `∫^∞ q = -∞`
    pub int_q_diverges_to_minus_inf: bool,
    /// `∫^∞ p = +∞`
    pub int_p_diverges: bool,
    /// `∫^∞ 1/r = +∞`
    pub int_inv_r_diverges: bool,
}

/// A fully described problem instance.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub a: f64,
    pub coeffs: CoefficientSet,
    pub x_max: f64,
    pub tol: Tolerances,
    pub flags: Option<DivergenceFlags>,
}

impl ProblemSpec {
    pub fn new(a: f64, coeffs: CoefficientSet, x_max: f64) -> ProblemSpec {
        ProblemSpec {
            a,
            coeffs,
            x_max,
            tol: Tolerances::default(),
            flags: None,
        }
    }

    /// Offset past `a` at which zero scans start, skipping the zeros
    /// forced there by the initial conditions.
    pub fn scan_offset(&self) -> f64 {
        scan_offset(self.a, self.x_max)
    }

    /// Zero-refinement tolerance for located points.
    pub fn point_tol(&self) -> f64 {
        self.tol.point_frac * (self.x_max - self.a)
    }
}

pub fn scan_offset(a: f64, x_max: f64) -> f64 {
    (1e-4 * (x_max - a)).max(1e-6)
}

/// The λ-parameterized variant of a problem, `(r y'')'' - (q y')' = λ p y`,
/// restricted to a right end `b`.
#[derive(Debug, Clone)]
pub struct EigenProblemSpec {
    pub base: ProblemSpec,
    pub lambda: f64,
    pub right_end: f64,
}

impl EigenProblemSpec {
    pub fn new(base: ProblemSpec, lambda: f64, right_end: f64) -> Result<Self, String> {
        if !(right_end > base.a) {
            return Err(format!(
                "right end b = {right_end} must exceed a = {}",
                base.a
            ));
        }
        if !lambda.is_finite() {
            return Err(format!("lambda = {lambda} must be finite"));
        }
        Ok(EigenProblemSpec {
            base,
            lambda,
            right_end,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_enforced_at_evaluation() {
        let set = CoefficientSet::parse("x", "1", "0").unwrap();
        assert!(set.r(1.0).is_ok());
        match set.r(-1.0) {
            Err(CoeffError::NotPositive { name: "r", x, value }) => {
                assert_eq!(x, -1.0);
                assert_eq!(value, -1.0);
            }
            other => panic!("expected NotPositive, got {other:?}"),
        }
        let set = CoefficientSet::parse("1", "-1", "0").unwrap();
        assert!(set.p(0.0).is_err());
    }

    #[test]
    fn q_is_sign_free() {
        let set = CoefficientSet::parse("1", "1", "-5").unwrap();
        assert_eq!(set.q(2.0).unwrap(), -5.0);
    }

    #[test]
    fn default_tolerances_validate() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances {
            rel: -1.0,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn scan_offset_floors_at_1e6() {
        assert_eq!(scan_offset(0.0, 6.0), 6e-4);
        assert_eq!(scan_offset(0.0, 1e-3), 1e-6);
    }
}
