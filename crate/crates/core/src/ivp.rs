//! First-order formulation and adaptive integration with dense output.
//!
//! The fourth-order equation is integrated as the quasi-derivative system
//!
//! ```text
//! y'  = y'
//! y'' = y1 / r
//! y1' = Ty + q y'
//! Ty' = λ p y
//! ```
//!
//! so `r` and `q` never need to be differentiated. The integrator is an
//! embedded Dormand-Prince 5(4) pair with fourth-order dense output,
//! which leaves headroom below the 1e-8 scale of the identity checks.

use crate::problem::{CoeffError, Coefficients};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IvpError {
    #[error(transparent)]
    Coefficient(#[from] CoeffError),
    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepSizeUnderflow { x: f64, h: f64 },
    #[error("step limit exceeded after {0} steps")]
    TooManySteps(usize),
    #[error("evaluation at x = {x} outside trajectory span [{lo}, {hi}]")]
    OutOfSpan { x: f64, lo: f64, hi: f64 },
    #[error("invalid integration span [{lo}, {hi}]")]
    BadSpan { lo: f64, hi: f64 },
    #[error("integrator tolerances must be positive")]
    BadTolerance,
}

/// Mixed error control: the scale of component `i` is
/// `abs + rel * |y_i|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolPair {
    pub rel: f64,
    pub abs: f64,
}

impl Default for TolPair {
    fn default() -> Self {
        TolPair { rel: 1e-10, abs: 1e-12 }
    }
}

/// A first-order system `dy/dx = f(x, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn eval(&self, x: f64, y: &[f64], dydx: &mut [f64]) -> Result<(), CoeffError>;
}

/// The quasi-derivative state of the fourth-order equation at one `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiState {
    pub y: f64,
    /// `y'`
    pub yp: f64,
    /// `y1 = r y''`
    pub y1: f64,
    /// `Ty = (r y'')' - q y'`
    pub ty: f64,
}

impl QuasiState {
    pub fn to_array(self) -> [f64; 4] {
        [self.y, self.yp, self.y1, self.ty]
    }

    pub fn from_slice(s: &[f64]) -> QuasiState {
        QuasiState {
            y: s[0],
            yp: s[1],
            y1: s[2],
            ty: s[3],
        }
    }
}

/// Vector field of `(r y'')'' - (q y')' = λ p y` over one quasi-state.
pub struct QuasiField<'c, C: Coefficients> {
    pub coeffs: &'c C,
    pub lambda: f64,
}

impl<C: Coefficients> OdeSystem for QuasiField<'_, C> {
    fn dim(&self) -> usize {
        4
    }

    fn eval(&self, x: f64, y: &[f64], dydx: &mut [f64]) -> Result<(), CoeffError> {
        let r = self.coeffs.r(x)?;
        let p = self.coeffs.p(x)?;
        let q = self.coeffs.q(x)?;
        dydx[0] = y[1];
        dydx[1] = y[2] / r;
        dydx[2] = y[3] + q * y[1];
        dydx[3] = self.lambda * p * y[0];
        Ok(())
    }
}

/// Joint field for the fundamental pair: two quasi-states advanced with a
/// single coefficient evaluation per stage.
pub struct JointQuasiField<'c, C: Coefficients> {
    pub coeffs: &'c C,
    pub lambda: f64,
}

impl<C: Coefficients> OdeSystem for JointQuasiField<'_, C> {
    fn dim(&self) -> usize {
        8
    }

    fn eval(&self, x: f64, y: &[f64], dydx: &mut [f64]) -> Result<(), CoeffError> {
        let r = self.coeffs.r(x)?;
        let p = self.coeffs.p(x)?;
        let q = self.coeffs.q(x)?;
        for i in (0..8).step_by(4) {
            dydx[i] = y[i + 1];
            dydx[i + 1] = y[i + 2] / r;
            dydx[i + 2] = y[i + 3] + q * y[i + 1];
            dydx[i + 3] = self.lambda * p * y[i];
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 1_000_000;

struct DenseStep {
    x0: f64,
    h: f64,
    /// Five interpolation coefficient blocks of length `dim`.
    cont: Vec<f64>,
}

impl DenseStep {
    fn eval_into(&self, dim: usize, x: f64, out: &mut [f64]) {
        let theta = (x - self.x0) / self.h;
        let theta1 = 1.0 - theta;
        let c = &self.cont;
        for i in 0..dim {
            out[i] = c[i]
                + theta
                    * (c[dim + i]
                        + theta1
                            * (c[2 * dim + i]
                                + theta * (c[3 * dim + i] + theta1 * c[4 * dim + i])));
        }
    }
}

/// Dense joint solution over `[x0, x1]`: evaluable anywhere in its span,
/// immutable after construction.
pub struct Trajectory {
    dim: usize,
    x0: f64,
    x1: f64,
    steps: Vec<DenseStep>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn span(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    /// Accepted step endpoints, starting at `x0` and ending exactly at `x1`.
    pub fn mesh(&self) -> Vec<f64> {
        let mut nodes: Vec<f64> = self.steps.iter().map(|s| s.x0).collect();
        nodes.push(self.x1);
        nodes
    }

    pub fn eval_into(&self, x: f64, out: &mut [f64]) -> Result<(), IvpError> {
        let slack = 1e-12 * (1.0 + (self.x1 - self.x0).abs());
        if x < self.x0 - slack || x > self.x1 + slack {
            return Err(IvpError::OutOfSpan {
                x,
                lo: self.x0,
                hi: self.x1,
            });
        }
        let x = x.clamp(self.x0, self.x1);
        let idx = self
            .steps
            .partition_point(|s| s.x0 <= x)
            .saturating_sub(1)
            .min(self.steps.len() - 1);
        self.steps[idx].eval_into(self.dim, x, out);
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<Vec<f64>, IvpError> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, &mut out)?;
        Ok(out)
    }

    pub fn component(&self, x: f64, i: usize) -> Result<f64, IvpError> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, &mut out)?;
        Ok(out[i])
    }
}

/// Adaptive integration of `sys` from `span.0` to `span.1` with dense
/// output; local error held to `abs + rel * |y|` per component.
pub fn integrate<S: OdeSystem>(
    sys: &S,
    span: (f64, f64),
    y0: &[f64],
    tol: TolPair,
) -> Result<Trajectory, IvpError> {
    let (x0, x_end) = span;
    if !(x_end > x0) || !x0.is_finite() || !x_end.is_finite() {
        return Err(IvpError::BadSpan { lo: x0, hi: x_end });
    }
    if !(tol.rel > 0.0) || !(tol.abs > 0.0) {
        return Err(IvpError::BadTolerance);
    }
    let dim = sys.dim();
    assert_eq!(y0.len(), dim, "initial state has wrong dimension");

    let mut x = x0;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut ytmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];

    sys.eval(x, &y, &mut k1)?;
    let mut h = initial_step(sys, x, &y, &k1, x_end, tol, &mut ytmp, &mut k2)?;
    let mut steps: Vec<DenseStep> = Vec::new();
    let mut rejected = false;

    for _ in 0..MAX_STEPS {
        if x >= x_end {
            return Ok(Trajectory {
                dim,
                x0,
                x1: x_end,
                steps,
            });
        }
        let h_min = 1e-14 * (1.0 + x.abs());
        if h < h_min {
            return Err(IvpError::StepSizeUnderflow { x, h });
        }
        let last = x + h >= x_end - 1e-14 * (1.0 + x_end.abs());
        if last {
            h = x_end - x;
        }

        // stages
        for i in 0..dim {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.eval(x + C2 * h, &ytmp, &mut k2)?;
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.eval(x + C3 * h, &ytmp, &mut k3)?;
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.eval(x + C4 * h, &ytmp, &mut k4)?;
        for i in 0..dim {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.eval(x + C5 * h, &ytmp, &mut k5)?;
        for i in 0..dim {
            ytmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.eval(x + h, &ytmp, &mut k6)?;
        for i in 0..dim {
            ynew[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.eval(x + h, &ynew, &mut k7)?;

        // scaled RMS error of the embedded fourth-order difference
        let mut err = 0.0;
        for i in 0..dim {
            let ei = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(ynew[i].abs());
            err += (ei / sc) * (ei / sc);
        }
        err = (err / dim as f64).sqrt();

        if err <= 1.0 {
            // accept: store dense coefficients
            let mut cont = vec![0.0; 5 * dim];
            for i in 0..dim {
                let ydiff = ynew[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[i] = y[i];
                cont[dim + i] = ydiff;
                cont[2 * dim + i] = bspl;
                cont[3 * dim + i] = ydiff - h * k7[i] - bspl;
                cont[4 * dim + i] = h
                    * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i]);
            }
            steps.push(DenseStep { x0: x, h, cont });
            if last {
                return Ok(Trajectory {
                    dim,
                    x0,
                    x1: x_end,
                    steps,
                });
            }
            x += h;
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7); // FSAL
            let facmax = if rejected { 1.0 } else { 10.0 };
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, facmax);
            h *= fac;
            rejected = false;
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
            rejected = true;
        }
    }
    Err(IvpError::TooManySteps(MAX_STEPS))
}

#[allow(clippy::too_many_arguments)]
fn initial_step<S: OdeSystem>(
    sys: &S,
    x0: f64,
    y0: &[f64],
    f0: &[f64],
    x_end: f64,
    tol: TolPair,
    ytmp: &mut [f64],
    f1: &mut [f64],
) -> Result<f64, IvpError> {
    let dim = y0.len();
    let scale = |i: usize| tol.abs + tol.rel * y0[i].abs();
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..dim {
        d0 += (y0[i] / scale(i)).powi(2);
        d1 += (f0[i] / scale(i)).powi(2);
    }
    d0 = (d0 / dim as f64).sqrt();
    d1 = (d1 / dim as f64).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(x_end - x0);
    for i in 0..dim {
        ytmp[i] = y0[i] + h0 * f0[i];
    }
    sys.eval(x0 + h0, ytmp, f1)?;
    let mut d2 = 0.0;
    for i in 0..dim {
        d2 += ((f1[i] - f0[i]) / scale(i)).powi(2);
    }
    d2 = (d2 / dim as f64).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok(h1.min(100.0 * h0).min(x_end - x0))
}

/// Sign-change brackets (and suspected tangential zeros) of a state
/// functional scanned along a trajectory.
#[derive(Debug, Clone, Default)]
pub struct SignScan {
    /// `[x_lo, x_hi]` windows with a strict sign change, in increasing order.
    pub brackets: Vec<(f64, f64)>,
    /// Points where `|g|` dips below `1e-10` of its running scale
    /// without changing sign. Even-order tangential zeros are not
    /// detected as brackets; they can only show up here.
    pub suspected: Vec<f64>,
}

/// Scans `g(x, state(x))` over `[lo, hi]` on the integrator mesh
/// subdivided `subdiv`-fold, refining wherever `|g|` is small relative
/// to its running scale.
pub fn detect_sign_changes<G>(
    traj: &Trajectory,
    g: G,
    lo: f64,
    hi: f64,
    subdiv: usize,
) -> Result<SignScan, IvpError>
where
    G: Fn(f64, &[f64]) -> f64,
{
    let (span_lo, span_hi) = traj.span();
    let lo = lo.max(span_lo);
    let hi = hi.min(span_hi);
    if !(hi > lo) {
        return Ok(SignScan::default());
    }
    let subdiv = subdiv.max(1);
    let mut nodes = vec![lo];
    for x in traj.mesh() {
        if x > lo && x < hi {
            nodes.push(x);
        }
    }
    nodes.push(hi);
    let mut grid = Vec::with_capacity(nodes.len() * subdiv + 1);
    for w in nodes.windows(2) {
        let width = w[1] - w[0];
        for j in 0..subdiv {
            grid.push(w[0] + width * j as f64 / subdiv as f64);
        }
    }
    grid.push(hi);

    let mut buf = vec![0.0; traj.dim()];
    let mut values = Vec::with_capacity(grid.len());
    for &x in &grid {
        traj.eval_into(x, &mut buf)?;
        values.push(g(x, &buf));
    }

    let mut scan = SignScan::default();
    let mut running_scale = vec![0.0f64; values.len()];
    let mut s = 0.0f64;
    for (i, v) in values.iter().enumerate() {
        s = s.max(v.abs());
        running_scale[i] = s;
    }

    let mut last_sign = 0.0;
    let mut last_sign_x = grid[0];
    for (i, &v) in values.iter().enumerate() {
        let sg = if v == 0.0 { 0.0 } else { v.signum() };
        if sg != 0.0 {
            if last_sign != 0.0 && sg != last_sign {
                scan.brackets.push((last_sign_x, grid[i]));
            }
            last_sign = sg;
            last_sign_x = grid[i];
        }
    }

    // refine pairs where |g| dips well below the running scale
    for i in 0..grid.len() - 1 {
        let pair_scale = running_scale[i + 1];
        if pair_scale == 0.0 {
            continue;
        }
        let dip = values[i].abs().min(values[i + 1].abs());
        if dip >= 0.05 * pair_scale {
            continue;
        }
        if scan
            .brackets
            .iter()
            .any(|&(blo, bhi)| blo >= grid[i] && bhi <= grid[i + 1])
        {
            continue;
        }
        let m = 16;
        let width = grid[i + 1] - grid[i];
        let mut prev_x = grid[i];
        let mut prev_v = values[i];
        let mut min_abs = prev_v.abs();
        let mut min_x = prev_x;
        let mut found = false;
        for j in 1..=m {
            let x = grid[i] + width * j as f64 / m as f64;
            traj.eval_into(x, &mut buf)?;
            let v = g(x, &buf);
            if v.abs() < min_abs {
                min_abs = v.abs();
                min_x = x;
            }
            if prev_v != 0.0 && v != 0.0 && v.signum() != prev_v.signum() {
                scan.brackets.push((prev_x, x));
                found = true;
            }
            prev_x = x;
            prev_v = v;
        }
        if !found && min_abs < 1e-10 * pair_scale {
            scan.suspected.push(min_x);
        }
    }
    scan.brackets
        .sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Scalar<F: Fn(f64, f64) -> f64>(F);

    impl<F: Fn(f64, f64) -> f64> OdeSystem for Scalar<F> {
        fn dim(&self) -> usize {
            1
        }
        fn eval(&self, x: f64, y: &[f64], dydx: &mut [f64]) -> Result<(), CoeffError> {
            dydx[0] = (self.0)(x, y[0]);
            Ok(())
        }
    }

    /// y'''' = y as a 4-dim constant-coefficient system (r=1, q=0, p=1).
    struct Beam;

    impl OdeSystem for Beam {
        fn dim(&self) -> usize {
            4
        }
        fn eval(&self, _x: f64, y: &[f64], dydx: &mut [f64]) -> Result<(), CoeffError> {
            dydx[0] = y[1];
            dydx[1] = y[2];
            dydx[2] = y[3];
            dydx[3] = y[0];
            Ok(())
        }
    }

    fn tol(rel: f64) -> TolPair {
        TolPair { rel, abs: rel * 1e-2 }
    }

    #[test]
    fn exponential_growth() {
        let traj = integrate(&Scalar(|_, y| y), (0.0, 1.0), &[1.0], TolPair::default()).unwrap();
        let v = traj.component(1.0, 0).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn exponential_decay() {
        let traj = integrate(&Scalar(|_, y| -y), (0.0, 1.0), &[1.0], TolPair::default()).unwrap();
        let v = traj.component(1.0, 0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn beam_equation_matches_closed_form() {
        // v = (sinh x - sin x)/2 solves y'''' = y with v(0)=v'(0)=v''(0)=0, v'''(0)=1
        let traj = integrate(&Beam, (0.0, 3.0), &[0.0, 0.0, 0.0, 1.0], TolPair::default()).unwrap();
        let v1 = traj.component(1.0, 0).unwrap();
        let exact = (1.0f64.sinh() - 1.0f64.sin()) / 2.0;
        assert!((v1 - exact).abs() < 1e-6, "v(1) = {v1}, exact {exact}");
        // dense output between mesh points
        for i in 0..=30 {
            let x = 0.1 * i as f64;
            let v = traj.component(x, 0).unwrap();
            let want = (x.sinh() - x.sin()) / 2.0;
            assert!((v - want).abs() < 1e-8, "x={x}: {v} vs {want}");
        }
    }

    #[test]
    fn halving_tolerance_never_increases_error() {
        let exact = |x: f64| (x.sinh() - x.sin()) / 2.0;
        let mut errs = Vec::new();
        for rel in [1e-6, 1e-8, 1e-10] {
            let traj = integrate(&Beam, (0.0, 3.0), &[0.0, 0.0, 0.0, 1.0], tol(rel)).unwrap();
            let mut e = 0.0f64;
            for i in 1..=30 {
                let x = 0.1 * i as f64;
                e = e.max((traj.component(x, 0).unwrap() - exact(x)).abs());
            }
            errs.push(e);
        }
        assert!(errs[1] <= errs[0].max(1e-13), "{errs:?}");
        assert!(errs[2] <= errs[1].max(1e-13), "{errs:?}");
    }

    #[test]
    fn linearity_in_initial_state() {
        let s0 = [0.3, -0.2, 0.1, 0.7];
        let c = 4.5;
        let scaled: Vec<f64> = s0.iter().map(|v| c * v).collect();
        let t1 = integrate(&Beam, (0.0, 2.0), &s0, TolPair::default()).unwrap();
        let t2 = integrate(&Beam, (0.0, 2.0), &scaled, TolPair::default()).unwrap();
        for i in 0..=20 {
            let x = 0.1 * i as f64;
            let a = t1.eval(x).unwrap();
            let b = t2.eval(x).unwrap();
            for j in 0..4 {
                assert!(
                    (c * a[j] - b[j]).abs() <= 1e-8 * (1.0 + b[j].abs()),
                    "x={x} j={j}"
                );
            }
        }
    }

    #[test]
    fn mesh_endpoints_exact() {
        let traj = integrate(&Beam, (0.25, 5.75), &[0.0, 1.0, 0.0, 0.0], TolPair::default()).unwrap();
        let mesh = traj.mesh();
        assert_eq!(mesh[0], 0.25);
        assert_eq!(*mesh.last().unwrap(), 5.75);
    }

    #[test]
    fn dense_output_continuous_across_steps() {
        let traj = integrate(&Beam, (0.0, 4.0), &[0.0, 1.0, 0.0, 0.0], TolPair::default()).unwrap();
        for &node in &traj.mesh()[1..] {
            let eps = 1e-9;
            if node - eps <= 0.0 || node + eps >= 4.0 {
                continue;
            }
            let a = traj.eval(node - eps).unwrap();
            let b = traj.eval(node + eps).unwrap();
            for j in 0..4 {
                assert!((a[j] - b[j]).abs() < 1e-7 * (1.0 + a[j].abs()));
            }
        }
    }

    #[test]
    fn out_of_span_is_an_error() {
        let traj = integrate(&Scalar(|_, y| y), (0.0, 1.0), &[1.0], TolPair::default()).unwrap();
        assert!(matches!(
            traj.component(1.5, 0),
            Err(IvpError::OutOfSpan { .. })
        ));
        assert!(matches!(
            traj.component(-0.5, 0),
            Err(IvpError::OutOfSpan { .. })
        ));
    }

    #[test]
    fn bad_span_rejected() {
        assert!(matches!(
            integrate(&Scalar(|_, y| y), (1.0, 1.0), &[1.0], TolPair::default()),
            Err(IvpError::BadSpan { .. })
        ));
    }

    #[test]
    fn sign_scan_finds_first_cosine_zero() {
        let traj = integrate(&Scalar(|_, _| 0.0), (0.0, 4.0), &[0.0], TolPair::default()).unwrap();
        let scan = detect_sign_changes(&traj, |x, _| x.cos(), 0.0, 4.0, 8).unwrap();
        assert!(!scan.brackets.is_empty());
        let (lo, hi) = scan.brackets[0];
        assert!(lo < std::f64::consts::FRAC_PI_2 && std::f64::consts::FRAC_PI_2 < hi);
    }

    #[test]
    fn tangential_zero_not_bracketed() {
        let traj = integrate(&Scalar(|_, _| 0.0), (-1.0, 1.0), &[0.0], TolPair::default()).unwrap();
        let scan = detect_sign_changes(&traj, |x, _| x * x, -1.0, 1.0, 8).unwrap();
        assert!(scan.brackets.is_empty());
    }

    #[test]
    fn sinh_sin_bracket_contains_pi() {
        let traj = integrate(&Scalar(|_, _| 0.0), (0.0, 4.0), &[0.0], TolPair::default()).unwrap();
        let scan = detect_sign_changes(&traj, |x, _| x.sinh() * x.sin(), 1e-3, 4.0, 8).unwrap();
        assert_eq!(scan.brackets.len(), 1);
        let (lo, hi) = scan.brackets[0];
        assert!(lo < std::f64::consts::PI && std::f64::consts::PI < hi);
    }
}
