//! The auxiliary second-order equation and the change of variables that
//! removes the middle term.
//!
//! `h` solves `(r h')' - q h = 0` with `h(a) = 1`, `h'(a) = 0`. On any
//! interval where `h > 0`, the substitution `t(x) = ∫_a^x h` carries the
//! fourth-order equation into
//!
//! ```text
//! (r h³ ÿ)¨ = h⁻¹ p y
//! ```
//!
//! with dots denoting d/dt, i.e. an equation of the same form with
//! leading coefficient `r h³`, weight `p / h` and no middle term. The
//! auxiliary equation must carry `r` (not `p`) for the derivative
//! identity `(r h³ ÿ)˙ = (r y'')' - q y'` to close: differentiating the
//! left side in `x` leaves the term `(r h')' y'`, which must equal
//! `q h y'`.

use crate::ivp::{self, IvpError, OdeSystem, TolPair, Trajectory};
use crate::oscillation::LocatedZero;
use crate::problem::{CoeffError, Coefficients};
use crate::roots;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Ivp(#[from] IvpError),
    #[error(transparent)]
    Coefficient(#[from] CoeffError),
    #[error("positivity interval of h holds only {steps} mesh steps (need at least 10)")]
    PositivityIntervalTooSmall { steps: usize },
    #[error("grid point x = {x} exceeds the positivity interval end {end}")]
    GridExceedsPositivity { x: f64, end: f64 },
    #[error("t = {t} outside the transformed domain [0, {t_end}]")]
    OutsideDomain { t: f64, t_end: f64 },
}

/// Field of the auxiliary system: `h' = w / r`, `w' = q h`, `t' = h`
/// (so `w = r h'` and `t` accumulates the quadrature of `h`).
struct AuxField<'c, C: Coefficients> {
    coeffs: &'c C,
}

impl<C: Coefficients> OdeSystem for AuxField<'_, C> {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, x: f64, y: &[f64], dydx: &mut [f64]) -> Result<(), CoeffError> {
        let r = self.coeffs.r(x)?;
        let q = self.coeffs.q(x)?;
        dydx[0] = y[1] / r;
        dydx[1] = q * y[0];
        dydx[2] = y[0];
        Ok(())
    }
}

/// Dense auxiliary solution `(h, r h', ∫h)` with its positivity interval.
pub struct AuxiliarySolution {
    pub traj: Trajectory,
    /// Largest scanned abscissa `x̄ ≤ x_max` with `h > 0` on `[a, x̄]`.
    pub positivity_end: f64,
    /// Nodes `(x_i, t_i)` along the mesh, for inverting `t(x)`.
    node_t: Vec<(f64, f64)>,
    first_zero_bracket: Option<(f64, f64)>,
}

pub fn auxiliary_solution<C: Coefficients>(
    coeffs: &C,
    a: f64,
    x_max: f64,
    tol: TolPair,
) -> Result<AuxiliarySolution, TransformError> {
    let field = AuxField { coeffs };
    let traj = ivp::integrate(&field, (a, x_max), &[1.0, 0.0, 0.0], tol)?;
    let scan = ivp::detect_sign_changes(&traj, |_, s| s[0], a, x_max, 8)?;
    let (positivity_end, first_zero_bracket) = match scan.brackets.first() {
        Some(&(lo, hi)) => (lo, Some((lo, hi))),
        None => (x_max, None),
    };
    let node_t = traj
        .mesh()
        .iter()
        .map(|&x| {
            let s = traj.eval(x).expect("mesh node inside span");
            (x, s[2])
        })
        .collect();
    Ok(AuxiliarySolution {
        traj,
        positivity_end,
        node_t,
        first_zero_bracket,
    })
}

impl AuxiliarySolution {
    pub fn a(&self) -> f64 {
        self.traj.span().0
    }

    pub fn x_max(&self) -> f64 {
        self.traj.span().1
    }

    pub fn h(&self, x: f64) -> Result<f64, IvpError> {
        self.traj.component(x, 0)
    }

    /// `h'(x) = w / r`.
    pub fn hp<C: Coefficients>(&self, coeffs: &C, x: f64) -> Result<f64, TransformError> {
        let w = self.traj.component(x, 1)?;
        Ok(w / coeffs.r(x)?)
    }

    /// `t(x) = ∫_a^x h`, accumulated along the integration.
    pub fn t_of_x(&self, x: f64) -> Result<f64, IvpError> {
        self.traj.component(x, 2)
    }

    /// End of the transformed domain, `t(positivity_end)`.
    pub fn t_end(&self) -> f64 {
        self.t_of_x(self.positivity_end).expect("inside span")
    }

    /// Inverts the monotone map `t(x)`: mesh bracketing followed by
    /// safeguarded Newton on the dense output (`dt/dx = h > 0`).
    pub fn x_of_t(&self, t: f64) -> Result<f64, TransformError> {
        let t_end = self.t_end();
        let slack = 1e-9 * (1.0 + t_end.abs());
        if t < -slack || t > t_end + slack {
            return Err(TransformError::OutsideDomain { t, t_end });
        }
        let t = t.clamp(0.0, t_end);
        let idx = self
            .node_t
            .partition_point(|&(x, ti)| ti <= t && x <= self.positivity_end)
            .saturating_sub(1);
        let (mut xl, _) = self.node_t[idx];
        let mut xr = self
            .node_t
            .get(idx + 1)
            .map(|&(x, _)| x.min(self.positivity_end))
            .unwrap_or(self.positivity_end);
        if xr <= xl {
            xr = self.positivity_end;
        }
        let mut x = 0.5 * (xl + xr);
        for _ in 0..100 {
            let tx = self.t_of_x(x)?;
            let hx = self.h(x)?;
            let err = tx - t;
            if err.abs() <= 1e-14 * (1.0 + t.abs()) {
                return Ok(x);
            }
            if err > 0.0 {
                xr = x;
            } else {
                xl = x;
            }
            let step = if hx > 0.0 { err / hx } else { 0.0 };
            let candidate = x - step;
            x = if candidate > xl && candidate < xr {
                candidate
            } else {
                0.5 * (xl + xr)
            };
            if xr - xl <= f64::EPSILON * (1.0 + x.abs()) {
                return Ok(x);
            }
        }
        Ok(x)
    }

    /// First zero of `h`, Brent-refined; the second-order conjugate point.
    pub fn first_h_zero(&self, tol_x: f64) -> Option<LocatedZero> {
        let (lo, hi) = self.first_zero_bracket?;
        let f = |x: f64| self.traj.component(x, 0).expect("bracket inside span");
        let z = roots::brent(f, lo, hi, tol_x)?;
        Some(LocatedZero {
            x: z.x,
            bracket: (lo, hi),
        })
    }
}

/// The fourth-order problem rewritten in the variable `t`: coefficients
/// `r̃(t) = r h³`, `p̃(t) = p / h`, `q̃ ≡ 0`, defined on `[0, t_end]`.
pub struct TransformedProblem<'a, C: Coefficients> {
    pub aux: &'a AuxiliarySolution,
    pub coeffs: &'a C,
    pub t_end: f64,
}

pub fn change_of_variables<'a, C: Coefficients>(
    coeffs: &'a C,
    aux: &'a AuxiliarySolution,
) -> Result<TransformedProblem<'a, C>, TransformError> {
    let steps = aux
        .traj
        .mesh()
        .iter()
        .filter(|&&x| x < aux.positivity_end)
        .count();
    if steps < 10 {
        return Err(TransformError::PositivityIntervalTooSmall { steps });
    }
    Ok(TransformedProblem {
        aux,
        coeffs,
        t_end: aux.t_end(),
    })
}

impl<C: Coefficients> TransformedProblem<'_, C> {
    pub fn x_of_t(&self, t: f64) -> Result<f64, TransformError> {
        self.aux.x_of_t(t)
    }
}

fn as_coeff_err(e: TransformError) -> CoeffError {
    match e {
        TransformError::Coefficient(c) => c,
        other => CoeffError::Eval {
            name: "transformed",
            source: crate::expr::EvalError::NonFinite {
                op: Box::leak(other.to_string().into_boxed_str()),
                x: f64::NAN,
            },
        },
    }
}

impl<C: Coefficients> Coefficients for TransformedProblem<'_, C> {
    fn r(&self, t: f64) -> Result<f64, CoeffError> {
        let x = self.x_of_t(t).map_err(as_coeff_err)?;
        let h = self.aux.h(x).map_err(|e| as_coeff_err(e.into()))?;
        Ok(self.coeffs.r(x)? * h * h * h)
    }

    fn p(&self, t: f64) -> Result<f64, CoeffError> {
        let x = self.x_of_t(t).map_err(as_coeff_err)?;
        let h = self.aux.h(x).map_err(|e| as_coeff_err(e.into()))?;
        Ok(self.coeffs.p(x)? / h)
    }

    fn q(&self, _t: f64) -> Result<f64, CoeffError> {
        Ok(0.0)
    }
}

/// Maximum mismatches, over a grid, between original quantities and
/// their transformed counterparts:
///
/// * `re1`: `ẏ̃` against `y' / h`
/// * `re2`: `(r̃ h̃³ ÿ̃)˙` against `(r y'')' - q y'`
/// * `tau`, `tau_p`, `sigma`, `sigma_p`: the subwronskian relations
///   `τ̂ = τ̃`, `τ̂' = h τ̃̇`, `σ̂ = h σ̃`, `σ̂' = h² σ̃̇ + h' σ̃`.
#[derive(Debug, Clone, Copy)]
pub struct TransformRelationReport {
    pub re1_max: f64,
    pub re2_max: f64,
    pub tau_max: f64,
    pub tau_p_max: f64,
    pub sigma_max: f64,
    pub sigma_p_max: f64,
}

impl TransformRelationReport {
    pub fn overall_max(&self) -> f64 {
        self.re1_max
            .max(self.re2_max)
            .max(self.tau_max)
            .max(self.tau_p_max)
            .max(self.sigma_max)
            .max(self.sigma_p_max)
    }
}

/// Cross-validates the transformation on a grid of `x` values: the
/// original solution trajectory `y` (4 quasi-derivative components) is
/// compared against the transformed solution integrated from the pushed
/// initial data, and the original fundamental pair against the
/// transformed pair.
pub fn verify_transform_relations<C: Coefficients>(
    coeffs: &C,
    aux: &AuxiliarySolution,
    orig_pair: &crate::oscillation::FundamentalPair,
    y: &Trajectory,
    grid: &[f64],
    tol: TolPair,
) -> Result<TransformRelationReport, TransformError> {
    let transformed = change_of_variables(coeffs, aux)?;
    let a = aux.a();
    for &x in grid {
        if x > aux.positivity_end {
            return Err(TransformError::GridExceedsPositivity {
                x,
                end: aux.positivity_end,
            });
        }
    }
    let t_hi = grid
        .iter()
        .map(|&x| aux.t_of_x(x))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);

    // Push the initial data of y through the substitution:
    //   ỹ(0) = y(a),   ẏ̃(0) = y'(a)/h(a),
    //   ỹ1(0) = r h³ ÿ̃ = h y1 - r h' y',   T̃ỹ(0) = Ty(a).
    let y_a = y.eval(a)?;
    let h_a = aux.h(a)?;
    let hp_a = aux.hp(coeffs, a)?;
    let r_a = coeffs.r(a)?;
    let y0_t = [
        y_a[0],
        y_a[1] / h_a,
        h_a * y_a[2] - r_a * hp_a * y_a[1],
        y_a[3],
    ];
    let field = ivp::QuasiField {
        coeffs: &transformed,
        lambda: 1.0,
    };
    let y_t = ivp::integrate(&field, (0.0, t_hi), &y0_t, tol)?;
    let pair_t = crate::oscillation::fundamental_pair(&transformed, 1.0, 0.0, t_hi, tol)
        .map_err(|e| match e {
            crate::oscillation::OscError::Ivp(e) => TransformError::Ivp(e),
            crate::oscillation::OscError::Coefficient(e) => TransformError::Coefficient(e),
            other => panic!("transformed pair failed: {other}"),
        })?;

    let mut rep = TransformRelationReport {
        re1_max: 0.0,
        re2_max: 0.0,
        tau_max: 0.0,
        tau_p_max: 0.0,
        sigma_max: 0.0,
        sigma_p_max: 0.0,
    };
    for &x in grid {
        let t = aux.t_of_x(x)?;
        let h = aux.h(x)?;
        let hp = aux.hp(coeffs, x)?;
        let orig = y.eval(x)?;
        let trans = y_t.eval(t)?;
        rep.re1_max = rep.re1_max.max((trans[1] - orig[1] / h).abs());
        rep.re2_max = rep.re2_max.max((trans[3] - orig[3]).abs());

        let s = orig_pair.subwronskians_at(coeffs, x).map_err(osc_to_transform)?;
        let st = pair_t.subwronskians_at(&transformed, t).map_err(osc_to_transform)?;
        rep.tau_max = rep.tau_max.max((s.tau - st.tau).abs());
        rep.tau_p_max = rep.tau_p_max.max((s.tau_p - h * st.tau_p).abs());
        rep.sigma_max = rep.sigma_max.max((s.sigma - h * st.sigma).abs());
        rep.sigma_p_max = rep
            .sigma_p_max
            .max((s.sigma_p - (h * h * st.sigma_p + hp * st.sigma)).abs());
    }
    Ok(rep)
}

fn osc_to_transform(e: crate::oscillation::OscError) -> TransformError {
    match e {
        crate::oscillation::OscError::Ivp(e) => TransformError::Ivp(e),
        crate::oscillation::OscError::Coefficient(e) => TransformError::Coefficient(e),
        other => panic!("unexpected: {other}"),
    }
}

/// Finite-difference check of `(r (h y'' - h' y'))' = h [(r y'')' - q y']`
/// along an original solution trajectory; this identity is what pins the
/// auxiliary equation to `(r h')' = q h`.
pub fn aux_consistency_residual<C: Coefficients>(
    coeffs: &C,
    aux: &AuxiliarySolution,
    y: &Trajectory,
    grid: &[f64],
) -> Result<f64, TransformError> {
    let d = 1e-5;
    let (lo, hi) = y.span();
    let g = |x: f64| -> Result<f64, TransformError> {
        let s = y.eval(x)?;
        let h = aux.h(x)?;
        let hp = aux.hp(coeffs, x)?;
        let r = coeffs.r(x)?;
        // r (h y'' - h' y') = h y1 - r h' y'
        Ok(h * s[2] - r * hp * s[1])
    };
    let mut max = 0.0f64;
    for &x in grid {
        if x - d < lo || x + d > hi || x + d > aux.positivity_end {
            continue;
        }
        let deriv = (g(x + d)? - g(x - d)?) / (2.0 * d);
        let s = y.eval(x)?;
        let rhs = aux.h(x)? * s[3];
        let scale = deriv.abs().max(rhs.abs()).max(1.0);
        max = max.max((deriv - rhs).abs() / scale);
    }
    Ok(max)
}

/// Transport of the systems-focal point: `μ̂₁` of the original problem
/// should map to the first zero of `τ̃̇`, located at `t = ∫_a^{μ̂₁} h`.
#[derive(Debug, Clone, Copy)]
pub struct TransportReport {
    pub t_at_mu1: f64,
    pub transformed_mu1: Option<f64>,
    pub mismatch: Option<f64>,
}

pub fn transport_focal_point<C: Coefficients>(
    coeffs: &C,
    aux: &AuxiliarySolution,
    mu1: f64,
    tol: TolPair,
    tol_x: f64,
) -> Result<TransportReport, TransformError> {
    if mu1 > aux.positivity_end {
        return Err(TransformError::GridExceedsPositivity {
            x: mu1,
            end: aux.positivity_end,
        });
    }
    let transformed = change_of_variables(coeffs, aux)?;
    let t_at_mu1 = aux.t_of_x(mu1)?;
    let t_hi = (1.25 * t_at_mu1).min(transformed.t_end);
    let pair_t = crate::oscillation::fundamental_pair(&transformed, 1.0, 0.0, t_hi, tol)
        .map_err(osc_to_transform)?;
    let focal = crate::oscillation::systems_focal_point(&pair_t, &transformed, tol_x)
        .map_err(osc_to_transform)?;
    let transformed_mu1 = focal.mu1.map(|z| z.x);
    Ok(TransportReport {
        t_at_mu1,
        transformed_mu1,
        mismatch: transformed_mu1.map(|t| (t - t_at_mu1).abs()),
    })
}

/// Writes `(x, t(x), h(x))` rows as CSV.
pub fn write_map_csv<W: Write>(
    aux: &AuxiliarySolution,
    n_rows: usize,
    out: &mut W,
) -> io::Result<()> {
    let (a, x_max) = aux.traj.span();
    let n = n_rows.max(2);
    out.write_all(b"x,t,h\n")?;
    for i in 0..n {
        let x = a + (x_max - a) * i as f64 / (n - 1) as f64;
        let t = aux
            .t_of_x(x)
            .map_err(|e| io::Error::new(io::ErrorKind::Other, e.to_string()))?;
        let h = aux
            .h(x)
            .map_err(|e| io::Error::new(io::ErrorKind::Other, e.to_string()))?;
        let f = crate::numfmt::sig12;
        writeln!(out, "{},{},{}", f(x), f(t), f(h))?;
    }
    Ok(())
}
