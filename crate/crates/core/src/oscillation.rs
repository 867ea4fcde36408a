//! Fundamental solutions, subwronskians, and point location.
//!
//! `u` and `v` are the solutions with `y(a) = y1(a) = 0` singled out by
//! `u'(a) = 1` and `Tv(a) = 1`. Every solution satisfying the left
//! boundary conditions is a combination of the two, so the
//! systems-conjugate point `η̂₁` and the systems-focal point `μ̂₁` are
//! the first zeros beyond `a` of the subwronskians `σ̂'` and `τ̂'`.
//!
//! Zeros are located as sign changes only; an even-order tangential zero
//! is reported as "suspected" when `|g|` dips below `1e-10` of its
//! running scale without a sign change.

use crate::ivp::{self, IvpError, JointQuasiField, QuasiState, TolPair, Trajectory};
use crate::problem::{scan_offset, CoeffError, Coefficients};
use crate::roots;
use crate::transform;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OscError {
    #[error(transparent)]
    Ivp(#[from] IvpError),
    #[error(transparent)]
    Coefficient(#[from] CoeffError),
    #[error("focal ratio u'/v' undefined: v'({x}) = {vp:e} is numerically zero")]
    DegenerateFocalRatio { x: f64, vp: f64 },
    #[error("systems-focal point not located on the scan window")]
    FocalPointMissing,
}

/// Joint dense solution of the fundamental pair `(u, v)`.
///
/// Component layout: `[u, u', u1, Tu, v, v', v1, Tv]`.
pub struct FundamentalPair {
    pub traj: Trajectory,
    pub lambda: f64,
}

/// `u` starts from `(0, 1, 0, 0)` and `v` from `(0, 0, 0, 1)`; both are
/// advanced jointly so each stage evaluates the coefficients once.
pub fn fundamental_pair<C: Coefficients>(
    coeffs: &C,
    lambda: f64,
    a: f64,
    x_max: f64,
    tol: TolPair,
) -> Result<FundamentalPair, OscError> {
    let field = JointQuasiField { coeffs, lambda };
    let y0 = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let traj = ivp::integrate(&field, (a, x_max), &y0, tol)?;
    Ok(FundamentalPair { traj, lambda })
}

impl FundamentalPair {
    pub fn a(&self) -> f64 {
        self.traj.span().0
    }

    pub fn x_max(&self) -> f64 {
        self.traj.span().1
    }

    pub fn u(&self, x: f64) -> Result<QuasiState, OscError> {
        let s = self.traj.eval(x)?;
        Ok(QuasiState::from_slice(&s[0..4]))
    }

    pub fn v(&self, x: f64) -> Result<QuasiState, OscError> {
        let s = self.traj.eval(x)?;
        Ok(QuasiState::from_slice(&s[4..8]))
    }

    /// All five subwronskians at `x`, with `σ̂' = (u v1 - v u1) / r`.
    pub fn subwronskians_at<C: Coefficients>(
        &self,
        coeffs: &C,
        x: f64,
    ) -> Result<SubwronskianSample, OscError> {
        let s = self.traj.eval(x)?;
        let r = coeffs.r(x)?;
        Ok(SubwronskianSample::from_joint(x, &s, r))
    }
}

/// Subwronskians of the fundamental pair at one point, plus the residual
/// of the product identity `r σ̂' τ̂' = τ̂² + ρ̂ σ̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubwronskianSample {
    pub x: f64,
    /// `σ̂ = u v' - v u'`
    pub sigma: f64,
    /// `σ̂'`, computed from `r σ̂' = u v1 - v u1`
    pub sigma_p: f64,
    /// `τ̂ = u Tv - v Tu`
    pub tau: f64,
    /// `τ̂' = u' Tv - v' Tu`
    pub tau_p: f64,
    /// `ρ̂ = u1 Tv - v1 Tu`
    pub rho: f64,
    /// `r σ̂' τ̂' - (τ̂² + ρ̂ σ̂)`
    pub identity_residual: f64,
}

impl SubwronskianSample {
    fn from_joint(x: f64, s: &[f64], r: f64) -> SubwronskianSample {
        let (u, up, u1, tu) = (s[0], s[1], s[2], s[3]);
        let (v, vp, v1, tv) = (s[4], s[5], s[6], s[7]);
        let sigma = u * vp - v * up;
        let r_sigma_p = u * v1 - v * u1;
        let sigma_p = r_sigma_p / r;
        let tau = u * tv - v * tu;
        let tau_p = up * tv - vp * tu;
        let rho = u1 * tv - v1 * tu;
        SubwronskianSample {
            x,
            sigma,
            sigma_p,
            tau,
            tau_p,
            rho,
            identity_residual: r_sigma_p * tau_p - (tau * tau + rho * sigma),
        }
    }

    /// Scale against which the identity residual is judged.
    pub fn identity_scale(&self) -> f64 {
        (self.sigma_p * self.tau_p).abs().max(1.0)
    }
}

/// Maximum identity residuals on a grid. The product identity is checked
/// pointwise; the two derivative identities
/// `τ̂'' = ρ̂/r - p σ̂` and `(r σ̂')' = 2 τ̂ + q σ̂`
/// are checked through central finite differences with step `h_fd`.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResiduals {
    /// max over the grid of `|r σ̂' τ̂' - τ̂² - ρ̂ σ̂| / max(1, |r σ̂' τ̂'|)`
    pub ident1_max: f64,
    /// max residual of the `τ̂''` identity (absolute, relative to scale 1)
    pub ident2_tau_max: f64,
    /// max residual of the `(r σ̂')'` identity
    pub ident2_sigma_max: f64,
    pub h_fd: f64,
}

pub fn identity_residuals<C: Coefficients>(
    pair: &FundamentalPair,
    coeffs: &C,
    grid: &[f64],
) -> Result<IdentityResiduals, OscError> {
    let h_fd = 1e-4;
    let (lo, hi) = pair.traj.span();
    let lambda = pair.lambda;
    let mut ident1_max = 0.0f64;
    let mut ident2_tau_max = 0.0f64;
    let mut ident2_sigma_max = 0.0f64;
    for &x in grid {
        let s = pair.subwronskians_at(coeffs, x)?;
        ident1_max = ident1_max.max(s.identity_residual.abs() / s.identity_scale());
        if x - h_fd < lo || x + h_fd > hi {
            continue;
        }
        let sm = pair.subwronskians_at(coeffs, x - h_fd)?;
        let sp = pair.subwronskians_at(coeffs, x + h_fd)?;
        let r = coeffs.r(x)?;
        let p = coeffs.p(x)?;
        let q = coeffs.q(x)?;
        // τ̂'' ≈ (τ̂'(x+h) - τ̂'(x-h)) / 2h
        let tau_pp = (sp.tau_p - sm.tau_p) / (2.0 * h_fd);
        let rhs_tau = s.rho / r - lambda * p * s.sigma;
        let scale_tau = tau_pp.abs().max(rhs_tau.abs()).max(1.0);
        ident2_tau_max = ident2_tau_max.max((tau_pp - rhs_tau).abs() / scale_tau);
        // (r σ̂')' ≈ central difference of r σ̂'
        let rm = coeffs.r(x - h_fd)?;
        let rp = coeffs.r(x + h_fd)?;
        let d_rsig = (rp * sp.sigma_p - rm * sm.sigma_p) / (2.0 * h_fd);
        let rhs_sig = 2.0 * s.tau + q * s.sigma;
        let scale_sig = d_rsig.abs().max(rhs_sig.abs()).max(1.0);
        ident2_sigma_max = ident2_sigma_max.max((d_rsig - rhs_sig).abs() / scale_sig);
    }
    Ok(IdentityResiduals {
        ident1_max,
        ident2_tau_max,
        ident2_sigma_max,
        h_fd,
    })
}

/// A sign-change zero refined to a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocatedZero {
    pub x: f64,
    /// The scan bracket the zero was refined from.
    pub bracket: (f64, f64),
}

/// Brent refinement of the earliest bracket down to `tol_x`.
pub fn first_zero<F: FnMut(f64) -> f64>(
    brackets: &[(f64, f64)],
    mut g: F,
    tol_x: f64,
) -> Option<LocatedZero> {
    let &(lo, hi) = brackets.first()?;
    let z = roots::brent(&mut g, lo, hi, tol_x)?;
    Some(LocatedZero {
        x: z.x,
        bracket: (lo, hi),
    })
}

fn subw_fn<'a, C: Coefficients>(
    pair: &'a FundamentalPair,
    coeffs: &'a C,
    pick: fn(&SubwronskianSample) -> f64,
) -> impl Fn(f64, &[f64]) -> f64 + 'a {
    move |x, s| {
        let r = coeffs.r(x).unwrap_or(1.0);
        pick(&SubwronskianSample::from_joint(x, s, r))
    }
}

fn locate_zeros<C: Coefficients>(
    pair: &FundamentalPair,
    coeffs: &C,
    pick: fn(&SubwronskianSample) -> f64,
    count: usize,
    tol_x: f64,
) -> Result<(Vec<LocatedZero>, Vec<f64>), OscError> {
    let a = pair.a();
    let x_max = pair.x_max();
    let lo = a + scan_offset(a, x_max);
    let g = subw_fn(pair, coeffs, pick);
    let scan = ivp::detect_sign_changes(&pair.traj, &g, lo, x_max, 8)?;
    let mut zeros = Vec::new();
    for &(blo, bhi) in scan.brackets.iter().take(count) {
        let f = |x: f64| {
            let s = pair.traj.eval(x).expect("bracket inside span");
            g(x, &s)
        };
        if let Some(z) = roots::brent(f, blo, bhi, tol_x) {
            zeros.push(LocatedZero {
                x: z.x,
                bracket: (blo, bhi),
            });
        }
    }
    Ok((zeros, scan.suspected))
}

/// First zero of `σ̂'` strictly beyond `a` (the systems-conjugate point
/// when it lies inside the window). The forced zero at `a` itself is
/// skipped by the scan offset.
pub fn systems_conjugate_point<C: Coefficients>(
    pair: &FundamentalPair,
    coeffs: &C,
    tol_x: f64,
) -> Result<Option<LocatedZero>, OscError> {
    let (zeros, _) = locate_zeros(pair, coeffs, |s| s.sigma_p, 1, tol_x)?;
    Ok(zeros.into_iter().next())
}

/// First and second zeros of `τ̂'` and all detected zeros of `ρ̂`.
#[derive(Debug, Clone, Default)]
pub struct FocalPoints {
    pub mu1: Option<LocatedZero>,
    pub mu2: Option<LocatedZero>,
    pub rho_zeros: Vec<LocatedZero>,
    /// First ρ̂-zero strictly beyond μ̂₁, when both exist.
    pub first_rho_zero_beyond_mu1: Option<f64>,
    pub suspected_tau_p: Vec<f64>,
}

pub fn systems_focal_point<C: Coefficients>(
    pair: &FundamentalPair,
    coeffs: &C,
    tol_x: f64,
) -> Result<FocalPoints, OscError> {
    let (tau_zeros, suspected) = locate_zeros(pair, coeffs, |s| s.tau_p, 2, tol_x)?;
    let (rho_zeros, _) = locate_zeros(pair, coeffs, |s| s.rho, usize::MAX, tol_x)?;
    let mut points = FocalPoints {
        mu1: tau_zeros.first().copied(),
        mu2: tau_zeros.get(1).copied(),
        rho_zeros,
        first_rho_zero_beyond_mu1: None,
        suspected_tau_p: suspected,
    };
    if let Some(mu1) = points.mu1 {
        points.first_rho_zero_beyond_mu1 = points
            .rho_zeros
            .iter()
            .map(|z| z.x)
            .find(|&x| x > mu1.x + 1e-12);
    }
    Ok(points)
}

/// First zero of the auxiliary solution `h` of `(r h')' = q h`,
/// `h(a) = 1`, `h'(a) = 0`: the conjugate point of the second-order
/// equation under `y'(a) = y(b) = 0`. Absent when `h` keeps its sign on
/// the window (for `q ≥ 0` it stays at  `h ≥ 1`).
pub fn second_order_conjugate_point<C: Coefficients>(
    coeffs: &C,
    a: f64,
    x_max: f64,
    tol: TolPair,
    tol_x: f64,
) -> Result<Option<LocatedZero>, OscError> {
    let aux = transform::auxiliary_solution(coeffs, a, x_max, tol)
        .map_err(|e| match e {
            transform::TransformError::Ivp(e) => OscError::Ivp(e),
            transform::TransformError::Coefficient(e) => OscError::Coefficient(e),
            other => panic!("auxiliary solution failed: {other}"),
        })?;
    Ok(aux.first_h_zero(tol_x))
}

/// The focal eigenfunction `y = u - δ₁(μ̂₁) v` with `δ₁ = u'/v'`, sampled
/// on a uniform grid across `(a, μ̂₁)`.
#[derive(Debug, Clone)]
pub struct EigenfunctionReport {
    pub mu1: f64,
    pub delta1: f64,
    /// Rows `(x, y, y', y'', Ty)`.
    pub samples: Vec<[f64; 5]>,
    pub boundary_residual_yp: f64,
    pub boundary_residual_ty: f64,
    /// `y > 0` on the open interval `(a, μ̂₁)`.
    pub y_positive: bool,
    /// `y' > 0` on the open interval.
    pub yp_positive: bool,
    /// `Ty < 0` on `[a, μ̂₁)`.
    pub ty_negative: bool,
    /// `y'' < 0` on the open interval; only meaningful when `q ≤ 0`
    /// throughout, `None` otherwise.
    pub ypp_negative: Option<bool>,
}

pub fn focal_eigenfunction<C: Coefficients>(
    pair: &FundamentalPair,
    coeffs: &C,
    mu1: f64,
    n_samples: usize,
) -> Result<EigenfunctionReport, OscError> {
    let a = pair.a();
    let u_mu = pair.u(mu1)?;
    let v_mu = pair.v(mu1)?;
    let scale = u_mu.yp.abs().max(1.0);
    if v_mu.yp.abs() <= 1e-12 * scale {
        return Err(OscError::DegenerateFocalRatio {
            x: mu1,
            vp: v_mu.yp,
        });
    }
    let delta1 = u_mu.yp / v_mu.yp;
    let n = n_samples.max(200);
    let mut samples = Vec::with_capacity(n + 2);
    let mut q_nonpositive = true;
    let mut y_positive = true;
    let mut yp_positive = true;
    let mut ty_negative = true;
    let mut ypp_negative = true;
    for j in 0..=(n + 1) {
        let x = a + (mu1 - a) * j as f64 / (n + 1) as f64;
        let u = pair.u(x)?;
        let v = pair.v(x)?;
        let r = coeffs.r(x)?;
        let q = coeffs.q(x)?;
        if q > 1e-14 {
            q_nonpositive = false;
        }
        let y = u.y - delta1 * v.y;
        let yp = u.yp - delta1 * v.yp;
        let y1 = u.y1 - delta1 * v.y1;
        let ty = u.ty - delta1 * v.ty;
        let ypp = y1 / r;
        samples.push([x, y, yp, ypp, ty]);
        let interior = j > 0 && j < n + 1;
        if interior {
            y_positive &= y > 0.0;
            yp_positive &= yp > 0.0;
            ypp_negative &= ypp < 0.0;
        }
        if j < n + 1 {
            ty_negative &= ty < 0.0;
        }
    }
    let end = samples.last().expect("grid non-empty");
    Ok(EigenfunctionReport {
        mu1,
        delta1,
        boundary_residual_yp: end[2].abs(),
        boundary_residual_ty: end[4].abs(),
        samples,
        y_positive,
        yp_positive,
        ty_negative,
        ypp_negative: if q_nonpositive { Some(ypp_negative) } else { None },
    })
}

/// Truth values of the ordering and sign claims evaluated on one window.
/// `None` means the prerequisite points were not located, never a claim
/// of nonexistence.
#[derive(Debug, Clone, Copy, Default)]
pub struct Orderings {
    /// `a < μ̂₁ < η̂₁`
    pub mu1_before_eta1: Option<bool>,
    /// `ρ̂(μ̂₁) < 0`
    pub rho_negative_at_mu1: Option<bool>,
    pub rho_at_mu1: Option<f64>,
    /// `σ̂` changes sign in `(μ̂₁, μ̂₂]`
    pub sigma_zero_between_mu1_mu2: Option<bool>,
    /// `μ̂₁ ≤ η̄₁`
    pub mu1_le_eta_bar1: Option<bool>,
    /// `η̂₁ ≤` first ρ̂-zero beyond μ̂₁
    pub eta1_le_first_rho_zero: Option<bool>,
}

/// Located points, identity residuals and ordering checks for one window.
#[derive(Debug, Clone, Default)]
pub struct OscillationReport {
    pub eta1: Option<f64>,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub rho_zeros: Vec<f64>,
    pub first_rho_zero_beyond_mu1: Option<f64>,
    pub eta_bar1: Option<f64>,
    pub x_max: f64,
    /// Max relative residual of the product identity over the report grid.
    pub residual_max: f64,
    pub suspected_tangential: Vec<f64>,
    pub orderings: Orderings,
}

/// Runs the full point analysis on one fundamental pair.
pub fn oscillation_report<C: Coefficients>(
    pair: &FundamentalPair,
    coeffs: &C,
    tol: TolPair,
    tol_x: f64,
    grid_points: usize,
) -> Result<OscillationReport, OscError> {
    let a = pair.a();
    let x_max = pair.x_max();
    let eta1 = systems_conjugate_point(pair, coeffs, tol_x)?;
    let focal = systems_focal_point(pair, coeffs, tol_x)?;
    let eta_bar1 = second_order_conjugate_point(coeffs, a, x_max, tol, tol_x)?;

    let n = grid_points.max(2);
    let grid: Vec<f64> = (0..n)
        .map(|i| a + (x_max - a) * i as f64 / (n - 1) as f64)
        .collect();
    let residuals = identity_residuals(pair, coeffs, &grid)?;

    let mut orderings = Orderings::default();
    if let (Some(mu1), Some(eta1)) = (&focal.mu1, &eta1) {
        orderings.mu1_before_eta1 = Some(a < mu1.x && mu1.x < eta1.x);
    }
    if let Some(mu1) = &focal.mu1 {
        let s = pair.subwronskians_at(coeffs, mu1.x)?;
        orderings.rho_at_mu1 = Some(s.rho);
        orderings.rho_negative_at_mu1 = Some(s.rho < 0.0);
    }
    if let (Some(mu1), Some(mu2)) = (&focal.mu1, &focal.mu2) {
        let g = subw_fn(pair, coeffs, |s| s.sigma);
        let scan = ivp::detect_sign_changes(&pair.traj, &g, mu1.x, mu2.x + tol_x, 8)?;
        orderings.sigma_zero_between_mu1_mu2 = Some(!scan.brackets.is_empty());
    }
    if let (Some(mu1), Some(eta_bar1)) = (&focal.mu1, &eta_bar1) {
        orderings.mu1_le_eta_bar1 = Some(mu1.x <= eta_bar1.x + tol_x);
    }
    if let (Some(eta1), Some(xi)) = (&eta1, &focal.first_rho_zero_beyond_mu1) {
        orderings.eta1_le_first_rho_zero = Some(eta1.x <= xi + tol_x);
    }

    Ok(OscillationReport {
        eta1: eta1.map(|z| z.x),
        mu1: focal.mu1.map(|z| z.x),
        mu2: focal.mu2.map(|z| z.x),
        rho_zeros: focal.rho_zeros.iter().map(|z| z.x).collect(),
        first_rho_zero_beyond_mu1: focal.first_rho_zero_beyond_mu1,
        eta_bar1: eta_bar1.map(|z| z.x),
        x_max,
        residual_max: residuals.ident1_max,
        suspected_tangential: focal.suspected_tau_p,
        orderings,
    })
}

/// Writes the subwronskian trace as CSV with header
/// `x,sigma,sigma_p,tau,tau_p,rho,residual` and `\n` line endings.
pub fn write_trace_csv<C: Coefficients, W: Write>(
    pair: &FundamentalPair,
    coeffs: &C,
    n_rows: usize,
    out: &mut W,
) -> io::Result<()> {
    let (a, x_max) = pair.traj.span();
    let n = n_rows.max(2);
    out.write_all(b"x,sigma,sigma_p,tau,tau_p,rho,residual\n")?;
    for i in 0..n {
        let x = a + (x_max - a) * i as f64 / (n - 1) as f64;
        let s = pair
            .subwronskians_at(coeffs, x)
            .map_err(|e| io::Error::new(io::ErrorKind::Other, e.to_string()))?;
        let f = crate::numfmt::sig12;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f(s.x),
            f(s.sigma),
            f(s.sigma_p),
            f(s.tau),
            f(s.tau_p),
            f(s.rho),
            f(s.identity_residual)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::CoefficientSet;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn beam() -> CoefficientSet {
        CoefficientSet::parse("1", "1", "0").unwrap()
    }

    fn pair_for(coeffs: &CoefficientSet, x_max: f64) -> FundamentalPair {
        fundamental_pair(coeffs, 1.0, 0.0, x_max, TolPair::default()).unwrap()
    }

    #[test]
    fn initial_conditions_hold_exactly() {
        let c = beam();
        let pair = pair_for(&c, 2.0);
        let u0 = pair.u(0.0).unwrap();
        let v0 = pair.v(0.0).unwrap();
        assert_eq!(u0.to_array(), [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(v0.to_array(), [0.0, 0.0, 0.0, 1.0]);
        let s0 = pair.subwronskians_at(&c, 0.0).unwrap();
        assert_eq!(s0.tau, 0.0);
        assert_eq!(s0.tau_p, 1.0);
        assert_eq!(s0.sigma, 0.0);
        assert_eq!(s0.sigma_p, 0.0);
        assert_eq!(s0.rho, 0.0);
    }

    #[test]
    fn fundamental_values_match_closed_form() {
        // u = (sin x + sinh x)/2, v = (sinh x - sin x)/2 for y'''' = y
        let c = beam();
        let pair = pair_for(&c, 2.0);
        let u1 = pair.u(1.0).unwrap().y;
        let v1 = pair.v(1.0).unwrap().y;
        assert!((u1 - 1.008_336_089_225_849).abs() < 1e-6);
        assert!((v1 - 0.166_865_104_417_952_4).abs() < 1e-6);
    }

    #[test]
    fn subwronskians_match_closed_form() {
        let c = beam();
        let pair = pair_for(&c, 2.0);
        let s = pair.subwronskians_at(&c, 1.0).unwrap();
        assert!((s.sigma_p - 1.0f64.sinh() * 1.0f64.sin()).abs() < 1e-6);
        assert!((s.tau_p - 1.0f64.cosh() * 1.0f64.cos()).abs() < 1e-6);
        let sigma_exact = (1.0f64.sin() * 1.0f64.cosh() - 1.0f64.cos() * 1.0f64.sinh()) / 2.0;
        assert!((s.sigma - sigma_exact).abs() < 1e-8);
        assert!((s.rho + sigma_exact).abs() < 1e-8); // ρ̂ = -σ̂ here
    }

    #[test]
    fn conjugate_and_focal_points_of_beam() {
        let c = beam();
        let pair = pair_for(&c, 6.0);
        let eta1 = systems_conjugate_point(&pair, &c, 6e-9).unwrap().unwrap();
        assert!((eta1.x - PI).abs() < 1e-6, "eta1 = {}", eta1.x);
        let focal = systems_focal_point(&pair, &c, 6e-9).unwrap();
        assert!((focal.mu1.unwrap().x - FRAC_PI_2).abs() < 1e-6);
        assert!((focal.mu2.unwrap().x - 3.0 * FRAC_PI_2).abs() < 1e-6);
        let xi = focal.first_rho_zero_beyond_mu1.unwrap();
        assert!((xi - 3.926_602_312_047_918_5).abs() < 1e-5);
    }

    #[test]
    fn scaled_equation_halves_points() {
        // y'''' = 16 y: closed forms scale by 1/2
        let c = CoefficientSet::parse("1", "16", "0").unwrap();
        let pair = pair_for(&c, 6.0);
        let eta1 = systems_conjugate_point(&pair, &c, 6e-9).unwrap().unwrap();
        assert!((eta1.x - FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn window_too_short_reports_absent() {
        let c = beam();
        let pair = pair_for(&c, 2.0);
        assert!(systems_conjugate_point(&pair, &c, 2e-9).unwrap().is_none());
    }

    #[test]
    fn first_zero_refines_earliest_bracket() {
        let z = first_zero(&[(1.5, 2.0), (4.0, 5.0)], f64::cos, 1e-8).unwrap();
        assert!((z.x - FRAC_PI_2).abs() < 1e-8);
        assert!(first_zero(&[], f64::cos, 1e-8).is_none());
    }

    #[test]
    fn second_order_conjugate_point_cases() {
        let tol = TolPair::default();
        // q = -1: h = cos x
        let c = CoefficientSet::parse("1", "1", "-1").unwrap();
        let z = second_order_conjugate_point(&c, 0.0, 4.0, tol, 1e-9)
            .unwrap()
            .unwrap();
        assert!((z.x - FRAC_PI_2).abs() < 1e-8);
        // q = 0: h ≡ 1
        let c = CoefficientSet::parse("1", "1", "0").unwrap();
        assert!(second_order_conjugate_point(&c, 0.0, 4.0, tol, 1e-9)
            .unwrap()
            .is_none());
        // q = -4: h = cos 2x
        let c = CoefficientSet::parse("1", "1", "-4").unwrap();
        let z = second_order_conjugate_point(&c, 0.0, 4.0, tol, 1e-9)
            .unwrap()
            .unwrap();
        assert!((z.x - FRAC_PI_2 / 2.0).abs() < 1e-8);
    }

    #[test]
    fn eigenfunction_of_beam_is_sine() {
        let c = beam();
        let pair = pair_for(&c, 6.0);
        let focal = systems_focal_point(&pair, &c, 6e-9).unwrap();
        let mu1 = focal.mu1.unwrap().x;
        let rep = focal_eigenfunction(&pair, &c, mu1, 200).unwrap();
        assert!((rep.delta1 - 1.0).abs() < 1e-6);
        for row in &rep.samples {
            assert!((row[1] - row[0].sin()).abs() < 1e-6, "y(x) vs sin x at {}", row[0]);
        }
        assert!(rep.boundary_residual_yp < 1e-6);
        assert!(rep.boundary_residual_ty < 1e-6);
        assert!(rep.y_positive && rep.yp_positive && rep.ty_negative);
        assert_eq!(rep.ypp_negative, Some(true));
    }

    #[test]
    fn identity_residuals_small_on_beam() {
        let c = beam();
        let pair = pair_for(&c, 3.0);
        let grid: Vec<f64> = (0..100).map(|i| 3.0 * i as f64 / 99.0).collect();
        let res = identity_residuals(&pair, &c, &grid).unwrap();
        assert!(res.ident1_max < 1e-8, "ident1 {}", res.ident1_max);
        assert!(res.ident2_tau_max < 1e-5, "ident2 tau {}", res.ident2_tau_max);
        assert!(res.ident2_sigma_max < 1e-5, "ident2 sigma {}", res.ident2_sigma_max);
    }

    #[test]
    fn report_collects_points_and_orderings() {
        let c = beam();
        let pair = pair_for(&c, 6.0);
        let rep = oscillation_report(&pair, &c, TolPair::default(), 6e-9, 100).unwrap();
        assert!((rep.mu1.unwrap() - FRAC_PI_2).abs() < 1e-6);
        assert!((rep.eta1.unwrap() - PI).abs() < 1e-6);
        assert_eq!(rep.orderings.mu1_before_eta1, Some(true));
        assert_eq!(rep.orderings.rho_negative_at_mu1, Some(true));
        let rho_mu1 = rep.orderings.rho_at_mu1.unwrap();
        assert!((rho_mu1 + FRAC_PI_2.cosh() / 2.0).abs() < 1e-6);
        assert_eq!(rep.orderings.sigma_zero_between_mu1_mu2, Some(true));
        assert!(rep.eta_bar1.is_none());
        assert!(rep.residual_max < 1e-8);
    }

    #[test]
    fn trace_csv_has_expected_header() {
        let c = beam();
        let pair = pair_for(&c, 2.0);
        let mut buf = Vec::new();
        write_trace_csv(&pair, &c, 5, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,sigma,sigma_p,tau,tau_p,rho,residual");
        assert_eq!(lines.count(), 5);
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }
}
