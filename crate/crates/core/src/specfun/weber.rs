//! The Weber-Schafheitlin integral
//! `int_0^inf t^(-lambda) J_mu(a t) J_nu(b t) dt` for 0 < b < a, in closed
//! form and by direct quadrature with an asymptotic tail.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::bessel_j;
use super::gamma::{gamma_fn, is_nonpositive_integer, rgamma};
use super::hyp2f1::{hyp2f1, Hyp2F1Params};
use crate::error::{domain, Error, Result};
use crate::quad::{integrate, integrate_with_breaks, QuadOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WSParams {
    /// Exponent of `t^(-lambda)`.
    pub lambda_exp: f64,
    pub mu: f64,
    pub nu: f64,
    pub a_arg: f64,
    pub b_arg: f64,
}

impl WSParams {
    pub fn new(lambda_exp: f64, mu: f64, nu: f64, a_arg: f64, b_arg: f64) -> Self {
        Self {
            lambda_exp,
            mu,
            nu,
            a_arg,
            b_arg,
        }
    }

    /// Exponent of the integrand at the origin, `mu + nu - lambda`.
    pub fn origin_exponent(&self) -> f64 {
        self.mu + self.nu - self.lambda_exp
    }

    pub fn validate(&self) -> Result<()> {
        let p = self;
        if ![p.lambda_exp, p.mu, p.nu, p.a_arg, p.b_arg]
            .iter()
            .all(|v| v.is_finite())
        {
            return domain("Weber-Schafheitlin parameters must be finite");
        }
        if p.a_arg <= 0.0 || p.b_arg <= 0.0 {
            return domain("Weber-Schafheitlin arguments must be positive");
        }
        if p.a_arg == p.b_arg {
            return Err(Error::Unsupported(
                "a = b is the discontinuity of the Weber-Schafheitlin integral".into(),
            ));
        }
        if p.b_arg > p.a_arg {
            return domain(format!("need b < a, got a = {}, b = {}", p.a_arg, p.b_arg));
        }
        if p.origin_exponent() + 1.0 <= 0.0 {
            return domain("integral diverges at the origin: need mu + nu - lambda + 1 > 0");
        }
        if p.lambda_exp <= -1.0 {
            return domain("integral diverges at infinity: need lambda > -1");
        }
        Ok(())
    }
}

/// Closed-form value assembled from Gamma and 2F1.
pub fn weber_schafheitlin_closed(p: WSParams) -> Result<f64> {
    p.validate()?;
    let WSParams {
        lambda_exp: lam,
        mu,
        nu,
        a_arg: a,
        b_arg: b,
    } = p;
    if is_nonpositive_integer(nu + 1.0) {
        return domain(format!("Gamma pole in the coefficient: nu + 1 = {}", nu + 1.0));
    }
    let first = 0.5 * (nu + mu - lam + 1.0);
    let second = 0.5 * (nu - mu - lam + 1.0);
    let coeff = b.powf(nu) * 2f64.powf(-lam) * a.powf(lam - nu - 1.0) * gamma_fn(first)?
        * rgamma(0.5 * (-nu + mu + lam + 1.0))
        * rgamma(1.0 + nu);
    if coeff == 0.0 {
        return Ok(0.0);
    }
    let z = (b / a).powi(2);
    Ok(coeff * hyp2f1(Hyp2F1Params::new(first, second, nu + 1.0, z))?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WsQuadrature {
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub abs_error: f64,
    /// Contribution of `[t_max, inf)` from the asymptotic expansion.
    pub tail: f64,
    /// Envelope bound on the magnitude of the tail contribution.
    pub tail_bound: f64,
    pub converged: bool,
}

const TAIL_ORDERS: usize = 6;

/// Hankel coefficients i^k a_k(nu) / arg^k for k < TAIL_ORDERS.
fn hankel_coefficients(nu: f64, arg: f64) -> [Complex64; TAIL_ORDERS] {
    let mu4 = 4.0 * nu * nu;
    let mut out = [Complex64::new(0.0, 0.0); TAIL_ORDERS];
    let mut ak = 1.0;
    let mut ik = Complex64::new(1.0, 0.0);
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            ak *= (mu4 - odd * odd) / (k as f64 * 8.0);
            ik *= Complex64::i();
        }
        *slot = ik * ak / arg.powi(k as i32);
    }
    out
}

/// `int_T^inf t^(-s) e^(i w t) dt` by its integration-by-parts expansion;
/// returns (value, magnitude envelope, size of the first omitted term).
fn oscillatory_tail(s: f64, omega: f64, t: f64) -> (Complex64, f64, f64) {
    let x = omega * t;
    let phase = Complex64::from_polar(1.0, x);
    let lead = Complex64::i() / omega * phase * t.powf(-s);
    let step = Complex64::new(0.0, -1.0 / x);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut envelope = 0.0;
    let mut last = f64::INFINITY;
    for n in 0..200 {
        if term.norm() > last {
            break;
        }
        last = term.norm();
        sum += term;
        envelope += term.norm();
        if last < 1e-18 {
            break;
        }
        term *= step * (s + n as f64);
    }
    let scale = t.powf(-s) / omega;
    (lead * sum, scale * envelope, scale * term.norm())
}

/// Adaptive quadrature of the integral on `[0, t_max]` plus an asymptotic
/// tail. Requires `mu, nu >= 0`.
pub fn weber_schafheitlin_quad(p: WSParams, t_max: f64, tol: f64) -> Result<WsQuadrature> {
    p.validate()?;
    if p.mu < 0.0 || p.nu < 0.0 {
        return Err(Error::Unsupported(
            "quadrature oracle needs non-negative Bessel orders".into(),
        ));
    }
    let WSParams {
        lambda_exp: lam,
        mu,
        nu,
        a_arg: a,
        b_arg: b,
    } = p;
    let integrand = |t: f64| t.powf(-lam) * bessel_j(mu, a * t) * bessel_j(nu, b * t);
    let opts = QuadOptions {
        abs_tol: 0.05 * tol,
        rel_tol: 1e-14,
        max_intervals: 200_000,
    };

    // [0, t1]: remove the algebraic factor t^s by t = t1 w^(1/(s+1)).
    let s = p.origin_exponent();
    let t1 = (1.0 / a).min(t_max);
    let head = integrate(
        |w: f64| {
            let t = t1 * w.powf(1.0 / (s + 1.0));
            if t == 0.0 {
                0.0
            } else {
                integrand(t) / t.powf(s)
            }
        },
        0.0,
        1.0,
        opts,
    );
    let head_scale = t1.powf(s + 1.0) / (s + 1.0);

    let spacing = PI / a;
    let mut breaks = vec![t1];
    let mut t = t1;
    while t + spacing < t_max {
        t += spacing;
        breaks.push(t);
    }
    breaks.push(t_max);
    let body = integrate_with_breaks(integrand, &breaks, opts);

    // asymptotic tail on [t_max, inf)
    let alpha = hankel_coefficients(mu, a);
    let beta = hankel_coefficients(nu, b);
    let phi_mu = (0.5 * mu + 0.25) * PI;
    let phi_nu = (0.5 * nu + 0.25) * PI;
    let mut sum_plus = Complex64::new(0.0, 0.0);
    let mut sum_minus = Complex64::new(0.0, 0.0);
    let mut envelope = 0.0;
    let mut truncation = 0.0;
    for (j, aj) in alpha.iter().enumerate() {
        for (k, bk) in beta.iter().enumerate() {
            let order = lam + 1.0 + (j + k) as f64;
            let (ep, envp, errp) = oscillatory_tail(order, a + b, t_max);
            let (em, envm, errm) = oscillatory_tail(order, a - b, t_max);
            sum_plus += aj * bk * ep;
            sum_minus += aj * bk.conj() * em;
            let w = aj.norm() * bk.norm();
            envelope += w * (envp + envm);
            truncation += w * (errp + errm);
            if j + 1 == TAIL_ORDERS || k + 1 == TAIL_ORDERS {
                // the next Hankel order is of this size relative to its predecessor
                truncation += w * (envp + envm) / (b * t_max);
            }
        }
    }
    let pref = 1.0 / (PI * (a * b).sqrt());
    let tail = pref
        * (Complex64::from_polar(1.0, -(phi_mu + phi_nu)) * sum_plus
            + Complex64::from_polar(1.0, -(phi_mu - phi_nu)) * sum_minus)
            .re;
    let tail_bound = pref * envelope;
    let tail_error = pref * truncation;

    let value = head_scale * head.value + body.value + tail;
    let abs_error = head_scale * head.abs_error + body.abs_error + tail_error;
    Ok(WsQuadrature {
        value,
        abs_error,
        tail,
        tail_bound,
        converged: abs_error <= tol && head.converged && body.converged,
    })
}

/// A cut-off large enough for the asymptotic tail at both frequencies.
pub fn default_cutoff(p: &WSParams) -> f64 {
    let slow = (p.a_arg - p.b_arg).min(p.b_arg);
    (400.0 / slow).max(100.0 / p.b_arg)
}

/// Reproducible convergent parameter sets with `mu, nu` in [0, 3] and
/// `b/a` in [0.1, 0.9].
pub fn convergent_parameter_sets(count: usize, seed: u64) -> Vec<WSParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mu: f64 = rng.gen_range(0.0..3.0);
            let nu: f64 = rng.gen_range(0.0..3.0);
            let hi = mu + nu + 1.0 - 0.2;
            let lambda = rng.gen_range(-0.8..hi.min(3.0));
            let a = rng.gen_range(0.5..2.0);
            let ratio = rng.gen_range(0.1..0.9);
            WSParams::new(lambda, mu, nu, a, ratio * a)
        })
        .collect()
}
