//! Bracketing root refinement (Brent's method).

/// A refined zero: the midpoint of the final bracket, the function value
/// there, and the original bracket it was refined from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub x: f64,
    pub f_at_x: f64,
    pub bracket: (f64, f64),
}

/// Brent refinement of a sign change inside `[lo, hi]` down to bracket
/// width `xtol`; returns the midpoint of the final bracket.
///
/// Returns `None` when `f(lo)` and `f(hi)` do not straddle zero.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Option<Zero> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(Zero { x: a, f_at_x: 0.0, bracket: (lo, hi) });
    }
    if fb == 0.0 {
        return Some(Zero { x: b, f_at_x: 0.0, bracket: (lo, hi) });
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = b - a;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            let x = b + xm; // midpoint of the final bracket (b, c)
            return Some(Zero { x, f_at_x: fb, bracket: (lo, hi) });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, falling back to secant
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Some(Zero { x: b, f_at_x: fb, bracket: (lo, hi) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refines_cosine_zero() {
        let z = brent(f64::cos, 1.5, 2.0, 1e-12).unwrap();
        assert!((z.x - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn no_sign_change_is_none() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn endpoint_zero_is_returned() {
        let z = brent(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(z.x, 0.0);
    }

    #[test]
    fn steep_function() {
        let z = brent(|x| (x - 0.3).tan(), 0.25, 0.35, 1e-14).unwrap();
        assert!((z.x - 0.3).abs() < 1e-12);
    }
}
