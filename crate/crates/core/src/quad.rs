//! Composite Gauss-Legendre quadrature.

/// Abscissae of the 8-point Gauss-Legendre rule on [-1, 1].
pub const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];

/// Weights of the 8-point Gauss-Legendre rule on [-1, 1].
pub const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Composite 8-point Gauss-Legendre integration of `f` over `[a, b]`
/// with `panels` equal panels. Exact for polynomials up to degree 15
/// per panel.
pub fn integrate<E, F>(mut f: F, a: f64, b: f64, panels: usize) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    assert!(panels > 0, "quadrature needs at least one panel");
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = 0.0;
        for (node, weight) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
            acc += weight * f(mid + half * node)?;
        }
        total += half * acc;
    }
    Ok(total)
}

/// Infallible variant of [`integrate`].
pub fn integrate_plain<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let result: Result<f64, std::convert::Infallible> = integrate(|x| Ok(f(x)), a, b, panels);
    match result {
        Ok(v) => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_high_degree_polynomial() {
        // ∫_0^1 x^15 dx = 1/16, exact for GL8 on one panel
        let v = integrate_plain(|x| x.powi(15), 0.0, 1.0, 1);
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn trigonometric_integral_converges() {
        let v = integrate_plain(f64::sin, 0.0, std::f64::consts::PI, 16);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = GL8_WEIGHTS.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn errors_propagate() {
        let r: Result<f64, &str> = integrate(
            |x| if x > 0.5 { Err("boom") } else { Ok(x) },
            0.0,
            1.0,
            4,
        );
        assert_eq!(r, Err("boom"));
    }
}
