//! Gauss hypergeometric function 2F1(a, b; c; z) for real parameters and
//! real z in [-1, 1].

use super::gamma::{gamma_fn, is_nonpositive_integer, rgamma};
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    /// Degree of the terminating series when `a` or `b` is a non-positive integer.
    pub fn polynomial_degree(&self) -> Option<usize> {
        [self.a, self.b]
            .into_iter()
            .filter(|&v| is_nonpositive_integer(v))
            .map(|v| (-v) as usize)
            .min()
    }

    pub fn validate(&self) -> Result<()> {
        let Self { a, b, c, z } = *self;
        if ![a, b, c, z].iter().all(|v| v.is_finite()) {
            return domain("2F1 parameters must be finite");
        }
        if z.abs() > 1.0 {
            return domain(format!("2F1 evaluated only for |z| <= 1, got z = {z}"));
        }
        let degree = self.polynomial_degree();
        if is_nonpositive_integer(c) {
            match degree {
                Some(n) if n as f64 <= -c => {}
                _ => return domain(format!("2F1 undefined: c = {c} is a non-positive integer")),
            }
        }
        // on the unit circle the series converges absolutely for a + b - c < 0
        // and, at z = -1 only, conditionally for a + b - c < 1
        let excess = a + b - c;
        if degree.is_none() && ((z == 1.0 && excess >= 0.0) || (z == -1.0 && excess >= 1.0)) {
            return domain(format!(
                "2F1 series diverges at z = {z} with a + b - c = {excess}"
            ));
        }
        Ok(())
    }
}

const SERIES_MAX_TERMS: usize = 2_000_000;

/// Partial sums of the defining series until the terms are negligible.
fn direct_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            break;
        }
        // only stop once the term ratio has settled below one
        let ratio = ((a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0)) * z).abs();
        if term.abs() <= 1e-17 * sum.abs() && ratio < 1.0 {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum
}

fn polynomial(a: f64, b: f64, c: f64, z: f64, degree: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..degree {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
    }
    sum
}

fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() < tol
}

/// Value of 2F1(a, b; c; z).
///
/// Strategy: terminating sum for polynomial cases; direct series for
/// |z| <= 1/2; Pfaff's transformation for z < -1/2; the 1 - z connection
/// formula for 1/2 < z < 1 (direct series when c - a - b is close to an
/// integer); Gauss summation at z = 1.
pub fn hyp2f1(p: Hyp2F1Params) -> Result<f64> {
    p.validate()?;
    let Hyp2F1Params { a, b, c, z } = p;
    if z == 0.0 {
        return Ok(1.0);
    }
    if let Some(n) = p.polynomial_degree() {
        return Ok(polynomial(a, b, c, z, n));
    }
    if z.abs() <= 0.5 {
        return Ok(direct_series(a, b, c, z));
    }
    if z < 0.0 {
        // Pfaff: maps [-1, -1/2) onto (1/3, 1/2]
        let w = z / (z - 1.0);
        let inner = hyp2f1(Hyp2F1Params::new(a, c - b, c, w))?;
        return Ok((1.0 - z).powf(-a) * inner);
    }
    let s = c - a - b;
    if z == 1.0 {
        return Ok(gamma_fn(c)? * gamma_fn(s)? * rgamma(c - a) * rgamma(c - b));
    }
    if near_integer(s, 1e-3) {
        return Ok(direct_series(a, b, c, z));
    }
    let w = 1.0 - z;
    let first = gamma_fn(c)? * gamma_fn(s)? * rgamma(c - a) * rgamma(c - b)
        * direct_series(a, b, 1.0 - s, w);
    let second = w.powf(s) * gamma_fn(c)? * gamma_fn(-s)? * rgamma(a) * rgamma(b)
        * direct_series(c - a, c - b, 1.0 + s, w);
    Ok(first + second)
}

/// d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z).
pub fn hyp2f1_dz(p: Hyp2F1Params) -> Result<f64> {
    p.validate()?;
    let Hyp2F1Params { a, b, c, z } = p;
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    Ok(a * b / c * hyp2f1(Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0, z))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: f64, b: f64, c: f64, z: f64) -> f64 {
        hyp2f1(Hyp2F1Params::new(a, b, c, z)).unwrap()
    }

    /// Brute-force partial sums of the defining series, stopped at 1e-14.
    fn brute_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        loop {
            let mut t = 1.0;
            for j in 0..n {
                let jf = j as f64;
                t *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * z;
            }
            sum += t;
            if t.abs() < 1e-14 && n > 5 {
                return sum;
            }
            n += 1;
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(f(2.3, 0.0, 1.7, 0.9), 1.0);
        assert!((f(3.0, -1.0, 2.0, 0.4) - 0.4).abs() < 1e-15);
        let ln4 = 2.0 * 2f64.ln();
        assert!((f(1.0, 1.0, 2.0, 0.5) - ln4).abs() < 1e-14);
        assert!((brute_series(1.0, 1.0, 2.0, 0.5) - ln4).abs() < 1e-13);
    }

    #[test]
    fn closed_forms_across_regions() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        for &z in &[-1.0_f64, -0.9, -0.6, -0.3, 0.2, 0.55, 0.7, 0.9, 0.99] {
            let exact = -(1.0 - z).ln() / z;
            assert!((f(1.0, 1.0, 2.0, z) - exact).abs() < 1e-12, "z = {z}");
        }
        // 2F1(1/2,1;3/2;-z^2) = atan(z)/z
        for &x in &[0.3_f64, 0.8, 1.0] {
            let exact = x.atan() / x;
            assert!((f(0.5, 1.0, 1.5, -x * x) - exact).abs() < 1e-12, "x = {x}");
        }
        // 2F1(a,b;b;z) = (1-z)^-a
        for &z in &[-0.95_f64, 0.3, 0.75, 0.97] {
            let exact = (1.0 - z).powf(-0.37);
            assert!((f(0.37, 1.21, 1.21, z) - exact).abs() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn gauss_summation_at_one() {
        let (a, b, c) = (0.3, 0.4, 1.9);
        let exact = gamma_fn(c).unwrap() * gamma_fn(c - a - b).unwrap()
            / (gamma_fn(c - a).unwrap() * gamma_fn(c - b).unwrap());
        assert!((f(a, b, c, 1.0) - exact).abs() < 1e-13);
        assert!((f(a, b, c, 0.999_999) - exact).abs() < 1e-4);
    }

    #[test]
    fn polynomial_exactness() {
        for n in 1..=3 {
            let b = -(n as f64);
            for &(a, c) in &[(0.7, 1.3), (2.5, 0.5), (-0.4, 3.0)] {
                for &z in &[-1.0_f64, -0.4, 0.3, 0.8, 1.0] {
                    let explicit = match n {
                        1 => 1.0 - a / c * z,
                        2 => 1.0 - 2.0 * a / c * z + a * (a + 1.0) / (c * (c + 1.0)) * z * z,
                        _ => {
                            1.0 - 3.0 * a / c * z
                                + 3.0 * a * (a + 1.0) / (c * (c + 1.0)) * z * z
                                - a * (a + 1.0) * (a + 2.0) / (c * (c + 1.0) * (c + 2.0))
                                    * z.powi(3)
                        }
                    };
                    assert!((f(a, b, c, z) - explicit).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn derivative_formula_matches_finite_differences() {
        let h = 1e-5;
        for &(a, b, c) in &[(0.5, 1.5, 2.5), (1.2, -0.7, 0.9), (0.25, 0.75, 3.0), (2.0, 1.5, 1.2)] {
            for i in -8..=8 {
                let z = 0.1 * i as f64;
                let fd = (f(a, b, c, z + h) - f(a, b, c, z - h)) / (2.0 * h);
                let an = hyp2f1_dz(Hyp2F1Params::new(a, b, c, z)).unwrap();
                assert!(((fd - an) / an.abs().max(1e-3)).abs() < 1e-6, "({a},{b},{c},{z})");
            }
        }
    }

    #[test]
    fn invalid_parameter_sets() {
        assert!(hyp2f1(Hyp2F1Params::new(1.0, 1.0, -2.0, 0.3)).is_err());
        assert!(hyp2f1(Hyp2F1Params::new(1.0, 1.0, 2.0, 1.0)).is_err());
        assert!(hyp2f1(Hyp2F1Params::new(1.0, 1.0, 2.0, 1.1)).is_err());
        // terminating before the pole of (c)_n is fine
        assert!((f(1.0, -2.0, -3.0, 0.5) - (1.0 + 1.0 / 3.0 + 1.0 / 12.0)).abs() < 1e-15);
    }
}
