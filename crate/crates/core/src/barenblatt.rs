//! Explicit compactly supported self-similar solutions
//! `u(t,x) = t^(-d lambda) Phi(x t^(-lambda))` with
//! `Phi(y) = (k (R^2 - |y|^2)_+^(alpha/2))^(1/(m-1))`, together with the
//! closed-form Riesz potentials of `(1 - |y|^2)_+^(gamma/2)` that make the
//! profile exact.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::fit::power_law_fit;
use crate::quad::{integrate, QuadOptions};
use crate::specfun::{gamma_fn, hyp2f1, rgamma, Hyp2F1Params};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileParams {
    pub alpha: f64,
    pub m: f64,
    pub d: usize,
    /// Support radius at t = 1.
    pub radius: f64,
}

impl ProfileParams {
    pub fn new(alpha: f64, m: f64, d: usize, radius: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return domain(format!("alpha must lie in (0, 2], got {alpha}"));
        }
        if !(m > 1.0) || !m.is_finite() {
            return domain(format!("m must exceed 1, got {m}"));
        }
        if !(1..=3).contains(&d) {
            return domain(format!("profiles are available for d in 1..=3, got {d}"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("radius must be positive, got {radius}"));
        }
        Ok(Self {
            alpha,
            m,
            d,
            radius,
        })
    }

    /// The normalised profile supported in the unit ball.
    pub fn unit(alpha: f64, m: f64, d: usize) -> Result<Self> {
        Self::new(alpha, m, d, 1.0)
    }

    pub fn constants(&self) -> ScalingConstants {
        scaling_constants_unchecked(self.alpha, self.m, self.d)
    }

    /// Exponent of the profile at the interface, `alpha / (2 (m - 1))`.
    pub fn interface_exponent(&self) -> f64 {
        self.alpha / (2.0 * (self.m - 1.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingConstants {
    /// Self-similar exponent `1 / (d (m - 1) + alpha)`.
    pub lambda: f64,
    /// Profile constant `k_{alpha,d}`.
    pub k: f64,
    /// Getoor constant `K_{alpha,d}`.
    pub k_getoor: f64,
}

pub fn scaling_constants(alpha: f64, m: f64, d: usize) -> Result<ScalingConstants> {
    ProfileParams::unit(alpha, m, d).map(|p| p.constants())
}

fn scaling_constants_unchecked(alpha: f64, m: f64, d: usize) -> ScalingConstants {
    let df = d as f64;
    let lambda = 1.0 / (df * (m - 1.0) + alpha);
    // all Gamma arguments are positive here
    let k_getoor = gamma_fn(0.5 * df).unwrap_or(f64::NAN)
        * rgamma(1.0 + 0.5 * alpha)
        * rgamma(0.5 * (df + alpha))
        / 2f64.powf(alpha);
    ScalingConstants {
        lambda,
        k: df * lambda * k_getoor,
        k_getoor,
    }
}

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `Phi(y) = (k (R^2 - |y|^2)_+^(alpha/2))^(1/(m-1))`.
pub fn profile(y: &[f64], p: &ProfileParams) -> f64 {
    profile_radial(norm(y), p)
}

pub fn profile_radial(r: f64, p: &ProfileParams) -> f64 {
    let gap = p.radius * p.radius - r * r;
    if gap <= 0.0 {
        return 0.0;
    }
    let k = p.constants().k;
    (k * gap.powf(0.5 * p.alpha)).powf(1.0 / (p.m - 1.0))
}

/// The explicit solution at time `t > 0`; its support has radius `R t^lambda`.
pub fn self_similar(t: f64, x: &[f64], p: &ProfileParams) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("self-similar solution needs t > 0, got {t}"));
    }
    let lambda = p.constants().lambda;
    let scale = t.powf(-lambda);
    Ok(t.powf(-(p.d as f64) * lambda) * profile_radial(norm(x) * scale, p))
}

/// Closed-form time derivative of [`self_similar`]:
/// `u_t = -lambda t^(-d lambda - 1) div_y(y Phi)(x t^(-lambda))`, off the interface.
pub fn self_similar_dt(t: f64, x: &[f64], p: &ProfileParams) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("self-similar solution needs t > 0, got {t}"));
    }
    let c = p.constants();
    let df = p.d as f64;
    let r = norm(x) * t.powf(-c.lambda);
    let gap = p.radius * p.radius - r * r;
    if gap <= 0.0 {
        return Ok(0.0);
    }
    let e = p.interface_exponent();
    let amp = c.k.powf(1.0 / (p.m - 1.0));
    let phi = amp * gap.powf(e);
    let y_grad_phi = -2.0 * e * amp * gap.powf(e - 1.0) * r * r;
    Ok(-c.lambda * t.powf(-df * c.lambda - 1.0) * (df * phi + y_grad_phi))
}

/// Surface area of the unit sphere in R^d.
fn sphere_area(d: usize) -> f64 {
    let h = 0.5 * d as f64;
    2.0 * PI.powf(h) * rgamma(h)
}

/// `omega = int_{B_1} (1 - |y|^2)^(alpha / (2(m-1))) dy` by radial quadrature.
pub fn unit_ball_profile_integral(alpha: f64, m: f64, d: usize) -> f64 {
    let e = alpha / (2.0 * (m - 1.0));
    let radial = integrate(
        |r: f64| r.powi(d as i32 - 1) * (1.0 - r * r).max(0.0).powf(e),
        0.0,
        1.0,
        QuadOptions::with_tol(1e-15, 1e-14),
    );
    sphere_area(d) * radial.value
}

/// Mass `int Phi dy = k^(1/(m-1)) omega R^(d + alpha/(m-1))`, conserved in time.
pub fn profile_mass(p: &ProfileParams) -> f64 {
    let c = p.constants();
    c.k.powf(1.0 / (p.m - 1.0))
        * unit_ball_profile_integral(p.alpha, p.m, p.d)
        * p.radius.powf(p.d as f64 + p.alpha / (p.m - 1.0))
}

/// The unique support radius whose profile carries mass `mass`.
pub fn radius_for_mass(mass: f64, alpha: f64, m: f64, d: usize) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return domain(format!("mass must be positive, got {mass}"));
    }
    let unit = ProfileParams::unit(alpha, m, d)?;
    let unit_mass = profile_mass(&unit);
    Ok((mass / unit_mass).powf(1.0 / (d as f64 + alpha / (m - 1.0))))
}

/// Fitted exponent of `Phi` against the distance to the interface on
/// `R - |y|` in `[1e-4, 1e-2] R`, capped at 1.
pub fn interface_holder_exponent(p: &ProfileParams) -> f64 {
    let (dist, vals): (Vec<f64>, Vec<f64>) = (0..=40)
        .map(|i| {
            let s = 1e-4 * 100f64.powf(i as f64 / 40.0) * p.radius;
            (s, profile_radial(p.radius - s, p))
        })
        .unzip();
    power_law_fit(&dist, &vals)
        .map(|f| f.slope.min(1.0))
        .unwrap_or(f64::NAN)
}

/// Closed-form Riesz potential `I_beta((1 - |y|^2)_+^(gamma/2))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieszClosedForm {
    pub gamma: f64,
    pub beta: f64,
    pub d: usize,
    /// Coefficient of the branch inside the unit ball.
    pub c_inner: f64,
    /// Coefficient of the branch outside the unit ball.
    pub c_outer: f64,
}

impl RieszClosedForm {
    pub fn new(gamma: f64, beta: f64, d: usize) -> Result<Self> {
        let df = d as f64;
        if !(gamma > 0.0) {
            return domain(format!("need gamma > 0, got {gamma}"));
        }
        if !(beta > 0.0 && beta < 2.0) {
            return domain(format!("need beta in (0, 2), got {beta}"));
        }
        if !(beta < df) {
            return domain(format!("need beta < d, got beta = {beta}, d = {d}"));
        }
        let common = 2f64.powf(-beta) * gamma_fn(0.5 * gamma + 1.0)? * gamma_fn(0.5 * (df - beta))?;
        Ok(Self {
            gamma,
            beta,
            d,
            c_inner: common * rgamma(0.5 * df) * rgamma(0.5 * (beta + gamma) + 1.0),
            c_outer: common * rgamma(0.5 * beta) * rgamma(0.5 * (df + gamma) + 1.0),
        })
    }

    pub fn eval_radial(&self, r: f64) -> Result<f64> {
        let df = self.d as f64;
        let (g, b) = (self.gamma, self.beta);
        let a = 0.5 * (df - b);
        if r <= 1.0 {
            Ok(self.c_inner * hyp2f1(Hyp2F1Params::new(a, -0.5 * (g + b), 0.5 * df, r * r))?)
        } else {
            let z = 1.0 / (r * r);
            Ok(self.c_outer
                * r.powf(b - df)
                * hyp2f1(Hyp2F1Params::new(a, 0.5 * (2.0 - b), 0.5 * (df + g) + 1.0, z))?)
        }
    }
}

pub fn riesz_of_profile(y: &[f64], gamma: f64, beta: f64, d: usize) -> Result<f64> {
    if y.len() != d {
        return domain(format!("point has dimension {}, expected {d}", y.len()));
    }
    RieszClosedForm::new(gamma, beta, d)?.eval_radial(norm(y))
}

/// The normalisation of the Riesz kernel, `I_beta f = c * int f(z) |y - z|^(beta - d) dz`,
/// consistent with the Fourier symbol `|xi|^(-beta)`.
pub fn riesz_kernel_constant(beta: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    if !(beta > 0.0 && beta < df) {
        return domain(format!("Riesz kernel needs 0 < beta < d, got {beta}"));
    }
    Ok(gamma_fn(0.5 * (df - beta))? * rgamma(0.5 * beta) / (2f64.powf(beta) * PI.powf(0.5 * df)))
}

/// Inner and outer coefficients multiplied by `a = (d - beta)/2`, using
/// `a Gamma(a) = Gamma(a + 1)`. These stay finite when `beta >= d`, which
/// continues the derivative formulas to `d = 1, alpha <= 1`.
fn derivative_coefficients(gamma: f64, beta: f64, d: usize) -> (f64, f64) {
    let df = d as f64;
    let common = 2f64.powf(-beta)
        * gamma_fn(0.5 * gamma + 1.0).unwrap_or(f64::NAN)
        / rgamma(0.5 * (df - beta) + 1.0);
    (
        common * rgamma(0.5 * df) * rgamma(0.5 * (beta + gamma) + 1.0),
        common * rgamma(0.5 * beta) * rgamma(0.5 * (df + gamma) + 1.0),
    )
}

/// Result of evaluating a derivative of a Riesz potential of the profile.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedValue<T> {
    pub value: T,
    /// True when `beta >= d`, i.e. the closed form is used beyond the range
    /// where the potential itself converges (analytic continuation).
    pub continued: bool,
}

/// `(-Delta) I_beta (1 - |y|^2)_+^(gamma/2)` at a point strictly inside the unit ball.
pub fn laplacian_of_riesz_inside(
    y: &[f64],
    gamma: f64,
    beta: f64,
    d: usize,
) -> Result<ContinuedValue<f64>> {
    if !(gamma > 0.0) || !(beta >= 0.0 && beta < 2.0) {
        return domain(format!("need gamma > 0 and beta in [0, 2), got ({gamma}, {beta})"));
    }
    let s = y.iter().map(|v| v * v).sum::<f64>();
    if s >= 1.0 {
        return domain("point must lie strictly inside the unit ball");
    }
    let df = d as f64;
    let (ca, _) = derivative_coefficients(gamma, beta, d);
    let a = 0.5 * (df - beta);
    let b = -0.5 * (gamma + beta);
    let c = 0.5 * df;
    // Delta F(|y|^2) = 4 s F''(s) + 2 d F'(s), derivatives from the 2F1 differentiation rule
    let f1 = hyp2f1(Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0, s))?;
    let f2 = if b + 1.0 == 0.0 {
        0.0
    } else {
        (a + 1.0) * (b + 1.0) / (c + 1.0) * hyp2f1(Hyp2F1Params::new(a + 2.0, b + 2.0, c + 2.0, s))?
    };
    let value = -ca * (b / c) * (4.0 * s * f2 + 2.0 * df * f1);
    Ok(ContinuedValue {
        value,
        continued: beta >= df,
    })
}

/// `K_{alpha,d} (-Delta)^(alpha/2) (1 - |y|^2)_+^(alpha/2) - 1` inside the unit ball.
pub fn getoor_residual(y: &[f64], alpha: f64, d: usize) -> Result<ContinuedValue<f64>> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return domain(format!("alpha must lie in (0, 2], got {alpha}"));
    }
    let k = scaling_constants_unchecked(alpha, 2.0, d).k_getoor;
    let lap = laplacian_of_riesz_inside(y, alpha, 2.0 - alpha, d)?;
    Ok(ContinuedValue {
        value: k * lap.value - 1.0,
        continued: lap.continued,
    })
}

/// `grad I_beta (1 - |y|^2)_+^(gamma/2)` at `y`, both branches. On the unit
/// sphere itself the inner branch is used.
pub fn grad_riesz_of_profile(
    y: &[f64],
    gamma: f64,
    beta: f64,
    d: usize,
) -> Result<ContinuedValue<Vec<f64>>> {
    if !(gamma > 0.0) || !(beta >= 0.0 && beta < 2.0) {
        return domain(format!("need gamma > 0 and beta in [0, 2), got ({gamma}, {beta})"));
    }
    let df = d as f64;
    let (ca, ca_outer) = derivative_coefficients(gamma, beta, d);
    let a = 0.5 * (df - beta);
    let r2 = y.iter().map(|v| v * v).sum::<f64>();
    let factor = if r2 <= 1.0 {
        let b = -0.5 * (gamma + beta);
        let c = 0.5 * df;
        2.0 * ca * (b / c) * hyp2f1(Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0, r2))?
    } else if ca_outer == 0.0 {
        0.0
    } else {
        let z = 1.0 / r2;
        let b = 0.5 * (2.0 - beta);
        let c = 0.5 * (df + gamma) + 1.0;
        let f0 = hyp2f1(Hyp2F1Params::new(a, b, c, z))?;
        let f1 = hyp2f1(Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0, z))?;
        -2.0 * ca_outer * r2.powf(0.5 * (beta - df) - 1.0) * (f0 + z * (b / c) * f1)
    };
    Ok(ContinuedValue {
        value: y.iter().map(|v| factor * v).collect(),
        continued: beta >= df,
    })
}

/// `grad^(alpha-1)(Phi^(m-1))(y)` for the profile of radius `R`. Inside the
/// support this is exactly `-lambda y`.
pub fn frac_grad_profile_pressure(y: &[f64], p: &ProfileParams) -> Result<Vec<f64>> {
    if y.len() != p.d {
        return domain(format!("point has dimension {}, expected {}", y.len(), p.d));
    }
    let c = p.constants();
    let scaled: Vec<f64> = y.iter().map(|v| v / p.radius).collect();
    let g = grad_riesz_of_profile(&scaled, p.alpha, 2.0 - p.alpha, p.d)?;
    // Phi_R^(m-1) = k R^alpha Phi_alpha(y/R) and grad^(alpha-1) has order alpha - 1
    Ok(g.value.into_iter().map(|v| c.k * p.radius * v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn classical_limit_constants() {
        let c = scaling_constants(2.0, 2.0, 1).unwrap();
        assert!(close(c.k, 1.0 / 6.0, 1e-15));
        assert!(close(c.lambda, 1.0 / 3.0, 1e-15));
        assert!(close(c.k_getoor, 0.5, 1e-15));
        // (1/2)(-Delta)(1 - y^2) = 1
        assert!(close(c.k_getoor * 2.0, 1.0, 4e-15));
    }

    #[test]
    fn half_laplacian_constant_in_one_dimension() {
        let c = scaling_constants(1.0, 2.0, 1).unwrap();
        assert!(close(c.k_getoor, 1.0, 1e-14));
    }

    #[test]
    fn profile_support_and_centre() {
        let p = ProfileParams::unit(1.2, 1.8, 2).unwrap();
        assert_eq!(profile(&[1.0, 0.0], &p), 0.0);
        assert_eq!(profile(&[0.8, 0.9], &p), 0.0);
        let k = p.constants().k;
        assert!(close(profile(&[0.0, 0.0], &p), k.powf(1.0 / 0.8), 1e-15));
    }

    #[test]
    fn unit_time_and_scaling_invariance() {
        let p = ProfileParams::new(0.7, 2.5, 2, 1.3).unwrap();
        let lambda = p.constants().lambda;
        for &x in &[[0.0, 0.0], [0.4, -0.2], [1.1, 0.3], [2.0, 0.0]] {
            assert_eq!(self_similar(1.0, &x, &p).unwrap(), profile(&x, &p));
            let l: f64 = 2.0;
            let t = 0.7;
            let xs = [x[0] * l.powf(lambda), x[1] * l.powf(lambda)];
            let lhs = l.powf(2.0 * lambda) * self_similar(l * t, &xs, &p).unwrap();
            assert!(close(lhs, self_similar(t, &x, &p).unwrap(), 1e-13));
        }
        assert!(self_similar(0.0, &[0.0, 0.0], &p).is_err());
    }

    #[test]
    fn mass_is_conserved_in_time() {
        let p = ProfileParams::new(1.0, 2.0, 1, 0.8).unwrap();
        let m0 = profile_mass(&p);
        for &t in &[0.5_f64, 1.0, 3.0, 10.0] {
            let support = p.radius * t.powf(p.constants().lambda);
            let q = integrate(
                |x: f64| self_similar(t, &[x], &p).unwrap(),
                -support,
                support,
                QuadOptions::with_tol(1e-12, 1e-12),
            );
            assert!(close(q.value, m0, 1e-9), "t = {t}");
        }
    }

    #[test]
    fn ball_integral_matches_beta_function() {
        for d in 1..=3 {
            for &(alpha, m) in &[(1.0, 2.0), (0.5, 1.5), (1.5, 3.0)] {
                let e: f64 = alpha / (2.0 * (m - 1.0));
                let h = 0.5 * d as f64;
                let exact = PI.powf(h) * gamma_fn(e + 1.0).unwrap() / gamma_fn(h + e + 1.0).unwrap();
                assert!(close(unit_ball_profile_integral(alpha, m, d), exact, 1e-12));
            }
        }
    }

    #[test]
    fn radius_mass_round_trip() {
        let unit = ProfileParams::unit(1.0, 2.0, 1).unwrap();
        assert!(close(radius_for_mass(profile_mass(&unit), 1.0, 2.0, 1).unwrap(), 1.0, 1e-14));
        let (alpha, m, d) = (0.8, 1.7, 2);
        let r1 = radius_for_mass(0.37, alpha, m, d).unwrap();
        let r2 = radius_for_mass(0.37 * 2f64.powf(d as f64 + alpha / (m - 1.0)), alpha, m, d).unwrap();
        assert!(close(r2 / r1, 2.0, 1e-13));
        for &mass in &[0.01, 1.0, 42.0] {
            let r = radius_for_mass(mass, alpha, m, d).unwrap();
            let back = profile_mass(&ProfileParams::new(alpha, m, d, r).unwrap());
            assert!(((back - mass) / mass).abs() < 1e-8);
        }
        assert!(radius_for_mass(0.0, 1.0, 2.0, 1).is_err());
    }

    #[test]
    fn riesz_at_origin_is_inner_coefficient() {
        for d in 1..=3 {
            for &(g, b) in &[(1.0, 0.5), (0.5, 0.9), (2.5, 0.3)] {
                let rc = RieszClosedForm::new(g, b, d).unwrap();
                let v = riesz_of_profile(&vec![0.0; d], g, b, d).unwrap();
                assert!(close(v, rc.c_inner, 1e-15));
                assert!(rc.c_inner > 0.0);
                // the kernel normalisation reproduces the coefficient at y = 0
                let kernel = riesz_kernel_constant(b, d).unwrap();
                let radial = integrate(
                    |r: f64| (1.0 - r * r).powf(0.5 * g) * r.powf(b - 1.0),
                    0.0,
                    1.0,
                    QuadOptions::with_tol(1e-14, 1e-13),
                );
                let direct = kernel * sphere_area(d) * radial.value;
                assert!(close(direct, rc.c_inner, 1e-10), "d={d} g={g} b={b}: {direct} vs {}", rc.c_inner);
            }
        }
    }

    #[test]
    fn riesz_branches_agree_on_the_sphere() {
        for d in 1..=3 {
            for &(g, b) in &[(1.0, 0.5), (1.5, 0.5), (0.5, 0.9), (2.0, 0.25)] {
                if b >= d as f64 {
                    continue;
                }
                let rc = RieszClosedForm::new(g, b, d).unwrap();
                let inside = rc.eval_radial(1.0).unwrap();
                let outside = rc.eval_radial(1.0 + 1e-9).unwrap();
                assert!(close(inside, outside, 1e-6 * inside.abs()), "d={d} g={g} b={b}: {inside} vs {outside}");
            }
        }
    }

    #[test]
    fn riesz_matches_direct_kernel_quadrature() {
        // d = 1, beta = 0.5, gamma = 1, y = 0.3
        let (g, b, y) = (1.0, 0.5, 0.3);
        let kernel = riesz_kernel_constant(b, 1).unwrap();
        let opts = QuadOptions::with_tol(1e-13, 1e-13);
        // |y - z| = w^(1/beta) removes the kernel singularity
        let side = |dir: f64, len: f64| {
            let f = |w: f64| {
                let z = y + dir * w.powf(1.0 / b);
                (1.0 - z * z).max(0.0).powf(0.5 * g) / b
            };
            integrate(f, 0.0, len.powf(b), opts).value
        };
        let q = side(-1.0, 1.0 + y) + side(1.0, 1.0 - y);
        let closed = riesz_of_profile(&[y], g, b, 1).unwrap();
        assert!(close(kernel * q, closed, 1e-6), "{} vs {closed}", kernel * q);
        // outside the ball too
        let y = 1.7;
        let f = |z: f64| (1.0 - z * z).max(0.0).powf(0.5 * g) * (y - z).abs().powf(b - 1.0);
        let q = integrate(f, -1.0, 1.0, opts).value;
        let closed = riesz_of_profile(&[y], g, b, 1).unwrap();
        assert!(close(kernel * q, closed, 1e-6), "{} vs {closed}", kernel * q);
    }

    #[test]
    fn riesz_inside_is_quadratic_for_getoor_parameters() {
        for d in 2..=3 {
            for &alpha in &[0.5, 1.0, 1.5] {
                let rc = RieszClosedForm::new(alpha, 2.0 - alpha, d).unwrap();
                for &r in &[0.0, 0.3, 0.77, 0.99] {
                    let df = d as f64;
                    let expect = rc.c_inner * (1.0 - (df + alpha - 2.0) / df * r * r);
                    assert!(close(rc.eval_radial(r).unwrap(), expect, 1e-14));
                }
            }
        }
    }

    #[test]
    fn getoor_identity_residual() {
        for &(alpha, d) in &[(0.5, 1), (1.0, 1), (1.5, 1), (0.5, 2), (1.0, 2), (1.5, 3)] {
            for i in 0..=99 {
                let r = 0.0099 * i as f64;
                let mut y = vec![0.0; d];
                y[0] = r;
                let res = getoor_residual(&y, alpha, d).unwrap();
                assert!(res.value.abs() < 1e-12, "alpha={alpha} d={d} r={r}");
                assert_eq!(res.continued, 2.0 - alpha >= d as f64);
            }
        }
    }

    #[test]
    fn riesz_domain_errors() {
        assert!(riesz_of_profile(&[0.1], 1.0, 1.5, 1).is_err());
        assert!(riesz_of_profile(&[0.1, 0.0], 1.0, 2.5, 2).is_err());
        assert!(riesz_of_profile(&[0.1, 0.0], -1.0, 0.5, 2).is_err());
        assert!(riesz_of_profile(&[0.1], 1.0, 0.5, 2).is_err());
    }

    #[test]
    fn pressure_gradient_inside_is_linear() {
        for &(alpha, m, d, r) in &[(1.0, 2.0, 1, 1.0), (0.5, 1.5, 2, 1.0), (1.5, 3.0, 3, 2.0), (0.8, 2.0, 1, 0.7)] {
            let p = ProfileParams::new(alpha, m, d, r).unwrap();
            let lambda = p.constants().lambda;
            let y: Vec<f64> = (0..d).map(|j| 0.3 * r * (j as f64 + 1.0) / d as f64).collect();
            let g = frac_grad_profile_pressure(&y, &p).unwrap();
            for (gj, yj) in g.iter().zip(&y) {
                assert!(close(*gj, -lambda * yj, 1e-12), "{gj} vs {}", -lambda * yj);
            }
            let zero = frac_grad_profile_pressure(&vec![0.0; d], &p).unwrap();
            assert!(zero.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn pressure_gradient_consistency_constant() {
        // 2 C_{1,1,2} ((d + alpha - 2)/d) k_{1,2} = 2 (pi/4)(1/2)(4/(3 pi)) = 1/3 = lambda
        let rc = RieszClosedForm::new(1.0, 1.0, 2).unwrap();
        assert!(close(rc.c_inner, PI / 4.0, 1e-15));
        let c = scaling_constants(1.0, 2.0, 2).unwrap();
        assert!(close(c.k, 4.0 / (3.0 * PI), 1e-15));
        assert!(close(2.0 * rc.c_inner * 0.5 * c.k, c.lambda, 1e-15));
        assert!(close(c.lambda, 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn outer_gradient_matches_finite_difference_of_potential() {
        for &(g, b, d) in &[(1.0, 0.5, 1), (1.5, 0.5, 2), (0.7, 1.2, 3)] {
            for &r in &[1.05, 1.5, 3.0] {
                let h = 1e-6;
                let mut yp = vec![0.0; d];
                let mut ym = vec![0.0; d];
                yp[0] = r + h;
                ym[0] = r - h;
                let fd = (riesz_of_profile(&yp, g, b, d).unwrap() - riesz_of_profile(&ym, g, b, d).unwrap())
                    / (2.0 * h);
                let mut y = vec![0.0; d];
                y[0] = r;
                let an = grad_riesz_of_profile(&y, g, b, d).unwrap().value[0];
                assert!(close(fd, an, 1e-7 * an.abs().max(1.0)), "({g},{b},{d}) r={r}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn interface_exponent_fit() {
        for &(alpha, m) in &[(1.0, 2.0), (0.5, 1.5), (1.5, 3.0)] {
            let p = ProfileParams::unit(alpha, m, 1).unwrap();
            let expected = p.interface_exponent().min(1.0);
            let fitted = interface_holder_exponent(&p);
            assert!(((fitted - expected) / expected).abs() < 0.02, "{fitted} vs {expected}");
        }
    }

    #[test]
    fn time_derivative_matches_finite_difference() {
        let p = ProfileParams::new(1.0, 2.0, 1, 1.0).unwrap();
        for &x in &[0.0, 0.3, 0.9, 1.1] {
            let h = 1e-6;
            let fd = (self_similar(1.0 + h, &[x], &p).unwrap() - self_similar(1.0 - h, &[x], &p).unwrap()) / (2.0 * h);
            let an = self_similar_dt(1.0, &[x], &p).unwrap();
            assert!(close(fd, an, 1e-7), "x = {x}: {fd} vs {an}");
        }
    }
}
