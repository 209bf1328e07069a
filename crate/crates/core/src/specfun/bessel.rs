//! Bessel functions of the first kind J_nu(x) for real nu >= 0 and x >= 0.
//!
//! Three regimes: the ascending series for x <= 12, the Hankel asymptotic
//! expansion for x >= 25 + nu^2, and Miller's backward recurrence with the
//! Neumann-series normalisation in between.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma};

const SERIES_LIMIT: f64 = 12.0;

fn hankel_limit(nu: f64) -> f64 {
    25.0 + nu * nu
}

/// J_nu(x). Requires nu >= 0 and x >= 0 (checked in debug builds).
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    debug_assert!(nu >= 0.0 && x >= 0.0, "bessel_j({nu}, {x})");
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        ascending_series(nu, x)
    } else if x >= hankel_limit(nu) {
        hankel_asymptotic(nu, x)
    } else {
        miller(nu, x)
    }
}

fn ascending_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = if nu < 100.0 {
        half.powf(nu) * rgamma(nu + 1.0)
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)).exp()
    };
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut k = 1.0;
    loop {
        term *= q / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
        k += 1.0;
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Coefficients of the Hankel expansion, a_k(nu) / x^k, truncated at the
/// smallest term.
fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // i^k pattern: k = 1 -> Q(+), 2 -> P(-), 3 -> Q(-), 4 -> P(+)
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if last < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn miller(nu: f64, x: f64) -> f64 {
    let start = 2 * ((2.0 * x + 40.0) as usize / 2);
    // normalisation weights w_k for J_{nu + 2k}
    let kmax = start / 2;
    let mut weights = Vec::with_capacity(kmax + 1);
    weights.push(1.0);
    let mut r = 1.0;
    for k in 1..=kmax {
        let kf = k as f64;
        weights.push((nu + 2.0 * kf) * r);
        r *= (nu + kf) / (kf + 1.0);
    }
    let mut f_next = 0.0; // f_{n+1}
    let mut f_cur = 1e-30; // f_n
    let mut sum = if start % 2 == 0 {
        weights[start / 2] * f_cur
    } else {
        0.0
    };
    for n in (1..=start).rev() {
        let f_prev = 2.0 * (nu + n as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        let idx = n - 1;
        if idx % 2 == 0 {
            sum += weights[idx / 2] * f_cur;
        }
        if f_cur.abs() > 1e250 {
            f_cur *= 1e-250;
            f_next *= 1e-250;
            sum *= 1e-250;
        }
    }
    let norm = (0.5 * x).powf(nu) * rgamma(nu + 1.0);
    f_cur * norm / sum
}
