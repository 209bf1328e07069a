//! Numerical checks of the Stroock-Varopoulos, Nash and Gagliardo-Nirenberg
//! inequalities, the Moser-type recursion for the decay constants, and the
//! integral Gronwall bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::evolve::lp_norm;
use crate::fracops::{frac_laplacian, Field, Grid};

/// `int |xi|^alpha |v_hat|^2`, i.e. `|grad^(alpha/2) v|_2^2`.
pub fn frac_energy(v: &Field, alpha: f64) -> Result<f64> {
    Ok(frac_laplacian(v, alpha)?.inner(v))
}

/// Both sides of the Stroock-Varopoulos inequality `lhs >= rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap {
    pub lhs: f64,
    pub rhs: f64,
}

impl Gap {
    /// `(lhs - rhs) / |lhs|`, or the raw difference when `lhs` vanishes.
    pub fn relative_margin(&self) -> f64 {
        let d = self.lhs - self.rhs;
        if self.lhs == 0.0 {
            d
        } else {
            d / self.lhs.abs()
        }
    }
}

/// `lhs = int sgn(w)|w|^(q-1) (-Delta)^(alpha/2) w`,
/// `rhs = 4(q-1)/q^2 int |grad^(alpha/2) |w|^(q/2)|^2`.
pub fn stroock_varopoulos_gap(w: &Field, q: f64, alpha: f64) -> Result<Gap> {
    if !(q > 1.0) {
        return domain(format!("q must exceed 1, got {q}"));
    }
    let lap = frac_laplacian(w, alpha)?;
    let phi = w.map(|v| v.signum() * v.abs().powf(q - 1.0));
    let lhs = phi.inner(&lap);
    let v = w.map(|x| x.abs().powf(0.5 * q));
    let rhs = 4.0 * (q - 1.0) / (q * q) * frac_energy(&v, alpha)?;
    Ok(Gap { lhs, rhs })
}

/// `|grad^(alpha/2) v|_2^2 |v|_1^(2 alpha/d) / |v|_2^(2(1 + alpha/d))`, bounded below by `1/C_N`.
pub fn nash_ratio(v: &Field, alpha: f64) -> Result<f64> {
    let s = alpha / v.grid.d as f64;
    let l2 = lp_norm(v, 2.0);
    if l2 == 0.0 {
        return domain("the Nash ratio is undefined for the zero field");
    }
    let l1 = lp_norm(v, 1.0);
    Ok(frac_energy(v, alpha)? * l1.powf(2.0 * s) / l2.powf(2.0 * (1.0 + s)))
}

#[derive(Clone, Debug)]
pub struct BatteryField {
    pub name: String,
    pub field: Field,
}

/// Fixed test battery for the Nash constant: Gaussians, compact bumps
/// `(1 - |x|^2)_+^e` and two-bump fields, on grids at least sixteen support
/// widths wide.
pub fn nash_battery(d: usize) -> Result<Vec<BatteryField>> {
    let (grid, widths, exps): (Grid, &[f64], &[f64]) = match d {
        1 => (Grid::new(1, 2048, 32.0)?, &[0.25, 0.5], &[0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0]),
        2 => (Grid::new(2, 256, 16.0)?, &[0.35, 0.5], &[1.0, 1.5, 2.0, 3.0, 4.0]),
        _ => return domain(format!("batteries exist for d = 1, 2; got {d}")),
    };
    let r2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let shifted = |x: &[f64], c: f64| {
        x.iter()
            .enumerate()
            .map(|(j, v)| if j == 0 { (v - c) * (v - c) } else { v * v })
            .sum::<f64>()
    };
    let mut out = Vec::new();
    for &s in widths {
        out.push(BatteryField {
            name: format!("gaussian(sigma={s})"),
            field: Field::from_fn(grid, |x| (-0.5 * r2(x) / (s * s)).exp()),
        });
    }
    for &e in exps {
        out.push(BatteryField {
            name: format!("bump(e={e})"),
            field: Field::from_fn(grid, |x| (1.0 - r2(x)).max(0.0).powf(e)),
        });
    }
    for &(sep, ratio) in &[(1.2, 1.0), (1.2, 0.5), (2.0, 0.25)] {
        out.push(BatteryField {
            name: format!("two_gaussians(sep={sep},ratio={ratio})"),
            field: Field::from_fn(grid, |x| {
                (-0.5 * shifted(x, -0.5 * sep) / 0.04).exp()
                    + ratio * (-0.5 * shifted(x, 0.5 * sep) / 0.04).exp()
            }),
        });
        out.push(BatteryField {
            name: format!("two_bumps(sep={sep},ratio={ratio})"),
            field: Field::from_fn(grid, |x| {
                let b = |c: f64| (1.0 - shifted(x, c) / 0.16).max(0.0).powi(2);
                b(-0.5 * sep) + ratio * b(0.5 * sep)
            }),
        });
    }
    Ok(out)
}

/// Measured Nash constant: reciprocal of the smallest ratio over the battery.
/// Being an infimum over finitely many fields, it estimates the sharp constant from below.
#[derive(Clone, Debug, PartialEq)]
pub struct NashMeasurement {
    pub c_n: f64,
    /// Battery member attaining the smallest ratio.
    pub minimizer: String,
    pub ratios: Vec<(String, f64)>,
}

pub fn measure_nash_constant(alpha: f64, d: usize) -> Result<NashMeasurement> {
    let mut ratios = Vec::new();
    for b in nash_battery(d)? {
        ratios.push((b.name, nash_ratio(&b.field, alpha)?));
    }
    let (minimizer, min) = ratios
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(n, r)| (n.clone(), *r))
        .expect("battery is nonempty");
    Ok(NashMeasurement {
        c_n: 1.0 / min,
        minimizer,
        ratios,
    })
}

/// Seeded smooth positive fields: sums of one to four Gaussians.
pub fn random_smooth_fields(grid: Grid, count: usize, seed: u64) -> Vec<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = 0.125 * grid.l;
    (0..count)
        .map(|_| {
            let bumps: Vec<([f64; 2], f64, f64)> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    (
                        [rng.gen_range(-reach..reach), rng.gen_range(-reach..reach)],
                        rng.gen_range(0.2..0.6) * grid.l / 16.0,
                        rng.gen_range(0.2..1.0),
                    )
                })
                .collect();
            Field::from_fn(grid, |x| {
                bumps
                    .iter()
                    .map(|(c, s, a)| {
                        let r2: f64 = x.iter().zip(c).map(|(v, c)| (v - c) * (v - c)).sum();
                        a * (-0.5 * r2 / (s * s)).exp()
                    })
                    .sum()
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GNExponents {
    pub p: f64,
    pub m: f64,
    pub d: usize,
    pub alpha: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

impl GNExponents {
    /// `b` from its closed form `(d(m-1) + p alpha)/(d(p-1))`.
    pub fn b_closed_form(&self) -> f64 {
        let d = self.d as f64;
        (d * (self.m - 1.0) + self.p * self.alpha) / (d * (self.p - 1.0))
    }
}

pub fn gn_exponents(p: f64, m: f64, d: usize, alpha: f64) -> Result<GNExponents> {
    if !(p > 1.0) || p < m - 1.0 {
        return domain(format!("need p > 1 and p >= m - 1, got p = {p}, m = {m}"));
    }
    let df = d as f64;
    let r = p + m - 1.0;
    let a = p / (p - 1.0) * (df * (r - 1.0) + alpha) / df;
    Ok(GNExponents {
        p,
        m,
        d,
        alpha,
        r,
        a,
        b: a - r,
    })
}

/// `lhs = |u|_p^a`, `rhs = C_N |grad^(alpha/2)|u|^(r/2)|_2^2 |u|_1^b`.
pub fn gn_gap(u: &Field, e: &GNExponents, c_n: f64) -> Result<Gap> {
    if u.grid.d != e.d {
        return domain("field dimension does not match the exponents");
    }
    let lhs = lp_norm(u, e.p).powf(e.a);
    let v = u.map(|x| x.abs().powf(0.5 * e.r));
    let rhs = c_n * frac_energy(&v, e.alpha)? * lp_norm(u, 1.0).powf(e.b);
    Ok(Gap { lhs, rhs })
}

/// `K = 4(m-1) p (p-1) / (C_N (p+m-1)^2)`.
pub fn k_opt(p: f64, m: f64, c_n: f64) -> f64 {
    4.0 * (m - 1.0) * p * (p - 1.0) / (c_n * (p + m - 1.0).powi(2))
}

/// `C_p = (K (a/p - 1))^(-1/(a-p))`, the constant of the first decay estimate
/// `|u(t)|_p <= C_p t^(-(1-1/p)/(alpha/d + m-1))` for unit mass.
pub fn preliminary_constant(p: f64, alpha: f64, m: f64, d: usize, c_n: f64) -> Result<f64> {
    let e = gn_exponents(p, m, d, alpha)?;
    let k = k_opt(p, m, c_n);
    Ok((k * (e.a / p - 1.0)).powf(-1.0 / (e.a - p)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoserState {
    pub n: u32,
    pub kappa_n: f64,
    pub log_kappa: f64,
    pub mu_n: f64,
    /// `K` at `p = 2^(n+1)`, used to reach the next state.
    pub k_n: f64,
    pub c_n: f64,
}

/// Least `k >= 1` with `2^k >= m - 1`; the first estimate needs `p > 1`.
pub fn moser_start(m: f64) -> u32 {
    let mut k = 1;
    while 2f64.powi(k as i32) < m - 1.0 {
        k += 1;
    }
    k
}

pub fn mu(n: u32, alpha: f64, m: f64, d: usize) -> f64 {
    (1.0 - 2f64.powi(-(n as i32))) / (alpha / d as f64 + m - 1.0)
}

/// Iterates the recursion for `kappa_n` in logarithms, from `n = k_start`
/// with `kappa_{k_start} = kappa_start` up to `n_max`.
pub fn moser_sequence(
    alpha: f64,
    m: f64,
    d: usize,
    c_n: f64,
    kappa_start: f64,
    k_start: u32,
    n_max: u32,
) -> Result<Vec<MoserState>> {
    if !(kappa_start > 0.0) || !(c_n > 0.0) {
        return domain("kappa_start and C_N must be positive");
    }
    let ad = alpha / d as f64;
    let c = m - 1.0;
    let mut log_kappa = kappa_start.ln();
    let mut out = Vec::new();
    for n in k_start..=n_max {
        let two_n = 2f64.powi(n as i32);
        let k_n = k_opt(2.0 * two_n, m, c_n);
        out.push(MoserState {
            n,
            kappa_n: log_kappa.exp(),
            log_kappa,
            mu_n: mu(n, alpha, m, d),
            k_n,
            c_n,
        });
        let s = ad + c / two_n;
        let power = two_n * (2.0 * ad + c / two_n);
        let num = power * mu(n, alpha, m, d) + 1.0;
        let e = 0.5 / (two_n * s);
        log_kappa = e * ((num / (k_n * s)).ln() + power * log_kappa);
    }
    Ok(out)
}

/// The constant of `|u(t)|_inf <= C t^(-d/(d(m-1)+alpha))` for unit mass:
/// the recursion started from the preliminary constant, taken at `n = 60`.
pub fn decay_constant(alpha: f64, m: f64, d: usize, c_n: f64) -> Result<f64> {
    let k = moser_start(m);
    let start = preliminary_constant(2f64.powi(k as i32), alpha, m, d, c_n)?;
    let seq = moser_sequence(alpha, m, d, c_n, start, k, 60)?;
    Ok(seq.last().expect("k_start <= 60").kappa_n)
}

/// `t -> (K gamma g(t))^(-1/gamma)` with `g` given by a table, interpolated linearly.
#[derive(Clone, Debug)]
pub struct GronwallBound {
    pub k: f64,
    pub gamma: f64,
    table: Vec<(f64, f64)>,
}

impl GronwallBound {
    pub fn eval(&self, t: f64) -> f64 {
        (self.k * self.gamma * self.g(t)).powf(-1.0 / self.gamma)
    }

    pub fn g(&self, t: f64) -> f64 {
        let tab = &self.table;
        let i = tab.partition_point(|(s, _)| *s <= t);
        if i == 0 {
            return tab[0].1;
        }
        if i == tab.len() {
            let (t1, g1) = tab[tab.len() - 1];
            let (t0, g0) = tab[tab.len() - 2];
            return g1 + (g1 - g0) / (t1 - t0) * (t - t1);
        }
        let (t0, g0) = tab[i - 1];
        let (t1, g1) = tab[i];
        g0 + (g1 - g0) * (t - t0) / (t1 - t0)
    }
}

/// Requires a strictly increasing table of `(t, g(t))` starting at `(0, 0)`.
pub fn integral_gronwall_bound(k: f64, gamma: f64, g_samples: &[(f64, f64)]) -> Result<GronwallBound> {
    if !(k > 0.0) || !(gamma > 0.0) {
        return domain("K and gamma must be positive");
    }
    if g_samples.len() < 2 || g_samples[0] != (0.0, 0.0) {
        return domain("g table must start at (0, 0) and hold at least two samples");
    }
    if g_samples.windows(2).any(|w| !(w[1].0 > w[0].0) || !(w[1].1 > w[0].1)) {
        return domain("g table must be strictly increasing in t and in g");
    }
    Ok(GronwallBound {
        k,
        gamma,
        table: g_samples.to_vec(),
    })
}
