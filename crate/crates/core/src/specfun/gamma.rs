use std::f64::consts::PI;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// True when `x` is one of 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// sin(pi x) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

fn lanczos_positive(x: f64) -> f64 {
    // x >= 0.5
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * (half * (-t).exp()) * half * acc
}

/// Euler Gamma function.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("gamma of non-finite argument {x}"));
    }
    if is_nonpositive_integer(x) {
        return domain(format!("gamma has a pole at {x}"));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / (sin_pi(x) * lanczos_positive(1.0 - x))
    } else {
        lanczos_positive(x)
    }
}

/// 1/Gamma(x), which is entire: zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x > 171.0 {
        (-ln_gamma(x)).exp()
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// ln|Gamma(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Pochhammer symbol (a)_n = Gamma(a + n) / Gamma(a) as a finite product.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma_fn(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles_are_domain_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(gamma_fn(x).is_err());
            assert_eq!(rgamma(x), 0.0);
        }
    }

    #[test]
    fn contiguity_relation() {
        for i in 1..=100 {
            let z = 0.1 * i as f64;
            let lhs = z * gamma_fn(z).unwrap();
            let rhs = gamma_fn(z + 1.0).unwrap();
            assert!(((lhs - rhs) / rhs).abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn factorials_and_log_gamma() {
        let mut fact = 1.0_f64;
        for n in 1..30 {
            let g = gamma_fn(n as f64 + 1.0).unwrap();
            fact *= n as f64;
            assert!(((g - fact) / fact).abs() < 1e-13, "n = {n}");
            assert!((ln_gamma(n as f64 + 1.0) - fact.ln()).abs() < 1e-12);
        }
        assert!(gamma_fn(170.5).unwrap().is_finite());
    }
}
