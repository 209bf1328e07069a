//! Verification suites. Each check yields a [`ReportRow`]; the CLI and the
//! acceptance driver share these.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::barenblatt::{
    frac_grad_profile_pressure, getoor_residual, interface_holder_exponent, profile_mass, radius_for_mass,
    scaling_constants, self_similar, ProfileParams,
};
use crate::error::Result;
use crate::evolve::{lp_norm, run, InitialCondition, SolverConfig, Trajectory};
use crate::fit::power_law_fit;
use crate::fracops::{analytic_singular_constant, calibrate_singular_constant, frac_gradient, Field, Grid};
use crate::inequalities::{
    decay_constant, gn_exponents, gn_gap, integral_gronwall_bound, k_opt, measure_nash_constant, moser_sequence,
    moser_start, nash_battery, preliminary_constant, random_smooth_fields, stroock_varopoulos_gap,
};
use crate::specfun::{
    bessel_j, convergent_parameter_sets, default_cutoff, gamma_fn, hyp2f1, hyp2f1_dz, weber_schafheitlin_closed,
    weber_schafheitlin_quad, Hyp2F1Params,
};

pub const DEFAULT_SEED: u64 = 1;

/// How `measured` is compared with `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `|measured - expected| <= tolerance`
    Within,
    /// `|measured - expected| <= tolerance * |expected|`
    Relative,
    /// `measured >= expected - tolerance`
    AtLeast,
    /// `measured <= expected + tolerance`
    AtMost,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub check_id: String,
    /// What the check exercises, from [`ANCHORS`].
    pub anchor: &'static str,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(
        check_id: impl Into<String>,
        anchor: &'static str,
        measured: f64,
        expected: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        debug_assert!(ANCHORS.contains(&anchor), "unregistered anchor {anchor}");
        let pass = match comparison {
            Comparison::Within => (measured - expected).abs() <= tolerance,
            Comparison::Relative => (measured - expected).abs() <= tolerance * expected.abs(),
            Comparison::AtLeast => measured >= expected - tolerance,
            Comparison::AtMost => measured <= expected + tolerance,
        };
        Self {
            // ids go into CSV unquoted
            check_id: check_id.into().replace(',', ";"),
            anchor,
            measured,
            expected,
            tolerance,
            comparison,
            pass,
        }
    }

    /// A row that failed to evaluate.
    pub fn error(check_id: impl Into<String>, anchor: &'static str) -> Self {
        Self {
            check_id: check_id.into().replace(',', ";"),
            anchor,
            measured: f64::NAN,
            expected: f64::NAN,
            tolerance: f64::NAN,
            comparison: Comparison::Within,
            pass: false,
        }
    }

    pub const CSV_HEADER: &'static str = "check_id,anchor,measured,expected,tolerance,comparison,pass";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:?},{}",
            self.check_id, self.anchor, self.measured, self.expected, self.tolerance, self.comparison, self.pass
        )
    }
}

impl fmt::Display for ReportRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparison {
            Comparison::Within | Comparison::Relative => "~",
            Comparison::AtLeast => ">=",
            Comparison::AtMost => "<=",
        };
        write!(
            f,
            "{:<4} {:<44} {:>13.6e} {op} {:<13.6e} (tol {:.1e})  [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.measured,
            self.expected,
            self.tolerance,
            self.anchor
        )
    }
}

pub const ANCHORS: &[&str] = &[
    "gamma recurrence",
    "classical gamma values",
    "bessel closed form",
    "hypergeometric polynomial case",
    "hypergeometric series value",
    "hypergeometric differentiation",
    "weber-schafheitlin integral",
    "getoor identity",
    "classical profile constant",
    "classical profile ode",
    "interface holder exponent",
    "mass-radius relation",
    "linear pressure gradient",
    "singular integral constant",
    "self-similar tracking",
    "mass conservation",
    "positivity",
    "lp monotonicity",
    "decay exponent",
    "decay constant bound",
    "stroock-varopoulos",
    "nash inequality",
    "gagliardo-nirenberg",
    "moser recursion",
    "integral gronwall",
];

fn row_or_error(id: &str, anchor: &'static str, r: Result<ReportRow>) -> ReportRow {
    r.unwrap_or_else(|_| ReportRow::error(id, anchor))
}

pub fn special_functions(seed: u64) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    let contiguity = (1..=100)
        .map(|i| {
            let z = 0.1 * i as f64;
            let (g, g1) = (gamma_fn(z).unwrap(), gamma_fn(z + 1.0).unwrap());
            ((z * g - g1) / g1).abs()
        })
        .fold(0.0, f64::max);
    rows.push(ReportRow::new("gamma_contiguity", "gamma recurrence", contiguity, 0.0, 1e-12, Comparison::Within));
    rows.push(row_or_error(
        "gamma_half",
        "classical gamma values",
        gamma_fn(0.5).map(|g| ReportRow::new("gamma_half", "classical gamma values", g, PI.sqrt(), 1e-13, Comparison::Relative)),
    ));
    rows.push(ReportRow::new(
        "bessel_half_order",
        "bessel closed form",
        bessel_j(0.5, 0.5 * PI),
        2.0 / PI,
        1e-10,
        Comparison::Within,
    ));

    let mut poly_err: f64 = 0.0;
    for &a in &[0.5, 1.0, 3.0] {
        for &c in &[0.7, 2.0, 4.5] {
            for &z in &[-0.9f64, -0.3, 0.4, 0.95, 1.0] {
                for n in 1..=3 {
                    let b = -(n as f64);
                    let exact: f64 = (0..=n)
                        .map(|j| {
                            let mut t = 1.0;
                            for i in 0..j {
                                let i = i as f64;
                                t *= (a + i) * (b + i) / ((c + i) * (i + 1.0));
                            }
                            t * z.powi(j)
                        })
                        .sum();
                    let v = hyp2f1(Hyp2F1Params::new(a, b, c, z)).unwrap_or(f64::NAN);
                    poly_err = poly_err.max((v - exact).abs());
                }
            }
        }
    }
    rows.push(ReportRow::new("hyp2f1_polynomial", "hypergeometric polynomial case", poly_err, 0.0, 1e-14, Comparison::Within));
    rows.push(row_or_error(
        "hyp2f1_log",
        "hypergeometric series value",
        hyp2f1(Hyp2F1Params::new(1.0, 1.0, 2.0, 0.5))
            .map(|v| ReportRow::new("hyp2f1_log", "hypergeometric series value", v, 2.0 * LN_2, 1e-14, Comparison::Within)),
    ));

    let mut diff_err: f64 = 0.0;
    for &(a, b, c) in &[(0.5, 1.5, 2.5), (1.0, 1.0, 2.0), (-0.3, 2.2, 1.7), (2.0, 0.75, 3.25)] {
        for i in 0..=16 {
            let z = -0.8 + 0.1 * i as f64;
            let h = 1e-5;
            let f = |z: f64| hyp2f1(Hyp2F1Params::new(a, b, c, z)).unwrap_or(f64::NAN);
            let fd = (f(z + h) - f(z - h)) / (2.0 * h);
            let exact = a * b / c * hyp2f1(Hyp2F1Params::new(a + 1.0, b + 1.0, c + 1.0, z)).unwrap_or(f64::NAN);
            let dz = hyp2f1_dz(Hyp2F1Params::new(a, b, c, z)).unwrap_or(f64::NAN);
            diff_err = diff_err
                .max(((fd - exact) / exact.abs().max(1e-300)).abs())
                .max(((dz - exact) / exact.abs().max(1e-300)).abs());
        }
    }
    rows.push(ReportRow::new("hyp2f1_derivative", "hypergeometric differentiation", diff_err, 0.0, 1e-6, Comparison::Within));
    rows.push(weber_schafheitlin_row(20, seed));
    rows
}

/// Largest closed form vs quadrature discrepancy over `count` parameter sets.
pub fn weber_schafheitlin_row(count: usize, seed: u64) -> ReportRow {
    let mut worst: f64 = 0.0;
    for p in convergent_parameter_sets(count, seed) {
        let closed = weber_schafheitlin_closed(p);
        let quad = weber_schafheitlin_quad(p, default_cutoff(&p), 1e-8);
        match (closed, quad) {
            (Ok(c), Ok(q)) if !worst.is_nan() => worst = worst.max((c - q.value).abs()),
            _ => worst = f64::NAN,
        }
    }
    ReportRow::new(
        format!("ws_closed_vs_quadrature[{count}]"),
        "weber-schafheitlin integral",
        worst,
        0.0,
        1e-6,
        Comparison::Within,
    )
}

fn axis_point(r: f64, d: usize) -> Vec<f64> {
    let mut y = vec![0.0; d];
    y[0] = r;
    y
}

/// `max_{|y| <= 0.99} |K (-Delta)^(alpha/2)(1-|y|^2)_+^(alpha/2) - 1|` by the closed form.
pub fn getoor_max_residual(alpha: f64, d: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..=99 {
        let r = 0.99 * i as f64 / 99.0;
        worst = worst.max(getoor_residual(&axis_point(r, d), alpha, d)?.value.abs());
    }
    Ok(worst)
}

/// `max |-lambda (F + y F') - (F^2)''/2|` on a mesh of `[-1, 1]`, with `F = k(1 - y^2)` at `alpha = m = 2`.
pub fn classical_ode_residual() -> Result<f64> {
    let c = scaling_constants(2.0, 2.0, 1)?;
    let (k, lam) = (c.k, c.lambda);
    Ok((0..=200)
        .map(|i| {
            let y = -1.0 + 0.01 * i as f64;
            let (f, f1, f2) = (k * (1.0 - y * y), -2.0 * k * y, -2.0 * k);
            (-lam * (f + y * f1) - (f1 * f1 + f * f2)).abs()
        })
        .fold(0.0, f64::max))
}

pub fn profile(alpha: f64, m: f64, d: usize) -> Vec<ReportRow> {
    let tag = format!("alpha={alpha},m={m},d={d}");
    let mut rows = Vec::new();
    let id = format!("getoor_residual[alpha={alpha},d={d}]");
    rows.push(row_or_error(
        &id,
        "getoor identity",
        getoor_max_residual(alpha, d).map(|r| ReportRow::new(&id, "getoor identity", r, 0.0, 1e-6, Comparison::Within)),
    ));
    let id = format!("interface_exponent[{tag}]");
    rows.push(row_or_error(
        &id,
        "interface holder exponent",
        ProfileParams::unit(alpha, m, d).map(|p| {
            ReportRow::new(
                &id,
                "interface holder exponent",
                interface_holder_exponent(&p),
                p.interface_exponent(),
                0.02,
                Comparison::Relative,
            )
        }),
    ));
    let id = format!("mass_radius_roundtrip[{tag}]");
    rows.push(row_or_error(
        &id,
        "mass-radius relation",
        radius_for_mass(2.5, alpha, m, d).and_then(|r| {
            let p = ProfileParams::new(alpha, m, d, r)?;
            Ok(ReportRow::new(&id, "mass-radius relation", profile_mass(&p), 2.5, 1e-12, Comparison::Relative))
        }),
    ));
    let id = format!("pressure_gradient_closed_form[{tag}]");
    rows.push(row_or_error(
        &id,
        "linear pressure gradient",
        (|| {
            let p = ProfileParams::new(alpha, m, d, 1.3)?;
            let lam = p.constants().lambda;
            let mut worst: f64 = 0.0;
            for i in 0..=20 {
                let y = axis_point(1.3 * 0.95 * i as f64 / 20.0, d);
                let g = frac_grad_profile_pressure(&y, &p)?;
                worst = worst.max((g[0] + lam * y[0]).abs());
            }
            Ok(ReportRow::new(&id, "linear pressure gradient", worst, 0.0, 1e-10, Comparison::Within))
        })(),
    ));
    rows
}

/// Fixed rows for the classical limit `alpha = m = 2`, `d = 1`.
pub fn classical_limit() -> Vec<ReportRow> {
    let mut rows = Vec::new();
    match scaling_constants(2.0, 2.0, 1) {
        Ok(c) => {
            rows.push(ReportRow::new("classical_k", "classical profile constant", c.k, 1.0 / 6.0, 1e-12, Comparison::Within));
            rows.push(ReportRow::new(
                "classical_lambda",
                "classical profile constant",
                c.lambda,
                1.0 / 3.0,
                1e-12,
                Comparison::Within,
            ));
        }
        Err(_) => rows.push(ReportRow::error("classical_k", "classical profile constant")),
    }
    rows.push(row_or_error(
        "classical_ode_residual",
        "classical profile ode",
        classical_ode_residual()
            .map(|r| ReportRow::new("classical_ode_residual", "classical profile ode", r, 0.0, 1e-12, Comparison::Within)),
    ));
    rows
}

/// Sup error of the spectral fractional gradient of the sampled pressure
/// `k (1 - y^2)_+^(alpha/2)` against `-lambda y` on `|y| <= 0.9`, `d = 1`.
pub fn pressure_gradient_error(alpha: f64, n: usize, l: f64) -> Result<f64> {
    let c = scaling_constants(alpha, 2.0, 1)?;
    let grid = Grid::new(1, n, l)?;
    let f = Field::from_fn(grid, |x| c.k * (1.0 - x[0] * x[0]).max(0.0).powf(0.5 * alpha));
    let g = frac_gradient(&f, alpha)?;
    Ok((0..grid.len())
        .map(|i| grid.point(i)[0])
        .enumerate()
        .filter(|(_, y)| y.abs() <= 0.9)
        .map(|(i, y)| (g[0].values[i] + c.lambda * y).abs())
        .fold(0.0, f64::max))
}

pub fn operators() -> Vec<ReportRow> {
    let mut rows = Vec::new();
    let errs: Vec<f64> = [512, 1024, 2048]
        .iter()
        .map(|&n| pressure_gradient_error(1.0, n, 16.0).unwrap_or(f64::NAN))
        .collect();
    rows.push(ReportRow::new(
        "spectral_pressure_gradient[N=1024]",
        "linear pressure gradient",
        errs[1],
        0.0,
        5e-3,
        Comparison::Within,
    ));
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    rows.push(ReportRow::new(
        "spectral_pressure_gradient_refines[N=512..2048]",
        "linear pressure gradient",
        if monotone { 1.0 } else { 0.0 },
        1.0,
        0.0,
        Comparison::Within,
    ));
    for &alpha in &[0.5, 1.0, 1.5] {
        let id = format!("singular_constant[alpha={alpha}]");
        rows.push(row_or_error(
            &id,
            "singular integral constant",
            calibrate_singular_constant(alpha).and_then(|c| {
                Ok(ReportRow::new(&id, "singular integral constant", c, analytic_singular_constant(alpha)?, 1e-3, Comparison::Relative))
            }),
        ));
    }
    rows
}

/// Evolution of Barenblatt data from `t = 1` to `t = 2` on `[-8, 8)`.
pub struct TrackingRun {
    pub n: usize,
    pub reg: f64,
    /// `|u - u_exact|_1 / |u_exact|_1` at `t = 2`.
    pub rel_l1: f64,
    pub trajectory: Trajectory,
}

pub fn self_similar_tracking(n: usize, reg: f64) -> Result<TrackingRun> {
    let grid = Grid::new(1, n, 16.0)?;
    let ic = InitialCondition::Barenblatt { radius: 1.0, t0: 1.0 };
    let mut cfg = SolverConfig::new(1.0, 2.0, grid, 1.0, ic);
    cfg.delta = reg;
    cfg.eps = reg;
    cfg.save_every = 0.1;
    let trajectory = run(&cfg)?;
    let p = ProfileParams::unit(1.0, 2.0, 1)?;
    let exact = Field::new(
        grid,
        (0..grid.len())
            .map(|i| self_similar(2.0, &grid.point(i)[..1], &p))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let err = trajectory.final_state().zip_with(&exact, |a, b| (a - b).abs()).integral();
    Ok(TrackingRun {
        n,
        reg,
        rel_l1: err / lp_norm(&exact, 1.0),
        trajectory,
    })
}

/// Unit-mass Gaussian at `alpha = 1, m = 2, d = 1` evolved to `t = 10`.
pub struct DecayStudy {
    pub trajectory: Trajectory,
    /// Fitted slopes of `|u|_inf` and `|u|_2` over `t in [1, 10]`.
    pub slope_inf: f64,
    pub slope_2: f64,
    /// `sup_t |u(t)|_p t^(rate_p)` over the saved times.
    pub prefactor_inf: f64,
    pub prefactor_2: f64,
}

pub const DECAY_ALPHA: f64 = 1.0;
pub const DECAY_M: f64 = 2.0;

pub fn decay_study() -> Result<DecayStudy> {
    let grid = Grid::new(1, 4096, 64.0)?;
    let sigma = 0.1;
    let ic = InitialCondition::Gaussian {
        sigma,
        amplitude: 1.0 / (sigma * (2.0 * PI).sqrt()),
        center: vec![0.0],
    };
    let mut cfg = SolverConfig::new(DECAY_ALPHA, DECAY_M, grid, 10.0, ic);
    cfg.save_every = 0.25;
    cfg.p_list = vec![1.0, 2.0, 4.0, f64::INFINITY];
    let trajectory = run(&cfg)?;
    let (mut ts, mut inf, mut two) = (Vec::new(), Vec::new(), Vec::new());
    let (mut pre_inf, mut pre_2) = (0.0f64, 0.0f64);
    let rate = 1.0 / (DECAY_ALPHA + DECAY_M - 1.0);
    for r in &trajectory.records {
        if r.t > 0.0 {
            pre_inf = pre_inf.max(r.lp_norms[3] * r.t.powf(rate));
            pre_2 = pre_2.max(r.lp_norms[1] * r.t.powf(0.5 * rate));
        }
        if r.t >= 1.0 - 1e-12 {
            ts.push(r.t);
            inf.push(r.lp_norms[3]);
            two.push(r.lp_norms[1]);
        }
    }
    let slope = |ys: &[f64]| power_law_fit(&ts, ys).map(|f| f.slope).unwrap_or(f64::NAN);
    Ok(DecayStudy {
        slope_inf: slope(&inf),
        slope_2: slope(&two),
        prefactor_inf: pre_inf,
        prefactor_2: pre_2,
        trajectory,
    })
}

/// Mass, positivity and norm-monotonicity rows for one trajectory.
pub fn trajectory_rows(label: &str, tr: &Trajectory, nonnegative_data: bool) -> Vec<ReportRow> {
    let mut rows = vec![ReportRow::new(
        format!("mass_drift[{label}]"),
        "mass conservation",
        tr.mass_drift(),
        0.0,
        1e-8,
        Comparison::AtMost,
    )];
    if nonnegative_data {
        rows.push(ReportRow::new(
            format!("min_u[{label}]"),
            "positivity",
            tr.min_value(),
            0.0,
            1e-10,
            Comparison::AtLeast,
        ));
    }
    for (p, inc) in tr.p_list.iter().zip(tr.worst_norm_increase()) {
        rows.push(ReportRow::new(
            format!("norm_increase[{label},{}]", SolverConfig::norm_label(*p)),
            "lp monotonicity",
            inc,
            0.0,
            1e-6,
            Comparison::AtMost,
        ));
    }
    rows
}

/// Measured Nash constant, labeled as a lower-bound estimate.
pub fn nash_rows(alpha: f64, d: usize) -> Result<(f64, Vec<ReportRow>)> {
    let m = measure_nash_constant(alpha, d)?;
    let rows = vec![ReportRow::new(
        format!("nash_constant_lower_estimate[alpha={alpha},d={d},min={}]", m.minimizer),
        "nash inequality",
        m.c_n,
        0.0,
        0.0,
        Comparison::AtLeast,
    )];
    Ok((m.c_n, rows))
}

pub const SV_ALPHAS: [f64; 3] = [0.5, 1.0, 1.5];
pub const SV_QS: [f64; 4] = [1.5, 2.0, 3.0, 4.0];

/// Worst relative margin on the seeded battery over the `(alpha, q)` mesh,
/// and the worst relative defect of the equality at `alpha = 2`.
pub fn stroock_varopoulos_margins(count: usize, seed: u64) -> Result<(f64, f64)> {
    let grid = Grid::new(1, 512, 16.0)?;
    let fields = random_smooth_fields(grid, count, seed);
    let mut margin = f64::INFINITY;
    let mut equality: f64 = 0.0;
    for w in &fields {
        for &q in &SV_QS {
            for &alpha in &SV_ALPHAS {
                margin = margin.min(stroock_varopoulos_gap(w, q, alpha)?.relative_margin());
            }
            equality = equality.max(stroock_varopoulos_gap(w, q, 2.0)?.relative_margin().abs());
        }
    }
    Ok((margin, equality))
}

/// Moser triples `(alpha, m, d)` exercised by the suite.
pub const MOSER_CASES: [(f64, f64, usize); 3] = [(1.0, 2.0, 1), (0.5, 2.0, 1), (1.5, 2.5, 2)];

/// `(kappa_60, |log kappa_60 - log kappa_50|)` from the preliminary constant.
pub fn moser_tail(alpha: f64, m: f64, d: usize, c_n: f64) -> Result<(f64, f64)> {
    let k = moser_start(m);
    let start = preliminary_constant(2f64.powi(k as i32), alpha, m, d, c_n)?;
    let seq = moser_sequence(alpha, m, d, c_n, start, k, 60)?;
    let at = |n: u32| seq.iter().find(|s| s.n == n).expect("n within range");
    Ok((at(60).kappa_n, (at(60).log_kappa - at(50).log_kappa).abs()))
}

pub fn inequalities(seed: u64) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    match stroock_varopoulos_margins(100, seed) {
        Ok((margin, equality)) => {
            rows.push(ReportRow::new("sv_margin[100 fields]", "stroock-varopoulos", margin, 0.0, 1e-9, Comparison::AtLeast));
            rows.push(ReportRow::new("sv_equality[alpha=2]", "stroock-varopoulos", equality, 0.0, 1e-8, Comparison::AtMost));
        }
        Err(_) => rows.push(ReportRow::error("sv_margin[100 fields]", "stroock-varopoulos")),
    }
    for &(alpha, m, d) in &MOSER_CASES {
        let tag = format!("alpha={alpha},m={m},d={d}");
        let (c_n, nash) = match nash_rows(alpha, d) {
            Ok(v) => v,
            Err(_) => {
                rows.push(ReportRow::error(format!("nash_constant[{tag}]"), "nash inequality"));
                continue;
            }
        };
        rows.extend(nash);
        let mut worst: f64 = 0.0;
        for b in nash_battery(d).unwrap_or_default() {
            for &p in &[1.5f64, 2.0, 4.0] {
                let Ok(e) = gn_exponents(p.max(m - 1.0), m, d, alpha) else { continue };
                let ratio = gn_gap(&b.field, &e, c_n).map_or(f64::NAN, |g| g.lhs / g.rhs);
                // NaN must survive the fold
                worst = if ratio.is_nan() || worst.is_nan() { f64::NAN } else { worst.max(ratio) };
            }
        }
        rows.push(ReportRow::new(format!("gn_lhs_over_rhs[{tag}]"), "gagliardo-nirenberg", worst, 1.0, 1e-6, Comparison::AtMost));
        match moser_tail(alpha, m, d, c_n) {
            Ok((kappa, tail)) => {
                rows.push(ReportRow::new(format!("moser_log_tail[{tag}]"), "moser recursion", tail, 0.0, 1e-6, Comparison::AtMost));
                rows.push(ReportRow::new(format!("moser_kappa_60_finite[{tag}]"), "moser recursion", kappa, f64::MAX, 0.0, Comparison::AtMost));
            }
            Err(_) => rows.push(ReportRow::error(format!("moser_log_tail[{tag}]"), "moser recursion")),
        }
    }
    rows.push(gronwall_saturation_row());
    rows
}

/// Plugs `f(t) = (K gamma t)^(-1/gamma)` back into the integral hypothesis.
pub fn gronwall_saturation_row() -> ReportRow {
    let (k, gamma) = (0.8, 2.0);
    let f = |t: f64| (k * gamma * t).powf(-1.0 / gamma);
    let (s, t) = (0.5f64, 3.0f64);
    // int_s^t f^(gamma+1) = ((K gamma)^(-1/gamma - 1)) (s^(-1/gamma) - t^(-1/gamma)) gamma
    let integral = (k * gamma).powf(-1.0 / gamma - 1.0) * gamma * (s.powf(-1.0 / gamma) - t.powf(-1.0 / gamma));
    let table: Vec<(f64, f64)> = (0..=40).map(|i| (0.1 * i as f64, 0.1 * i as f64)).collect();
    let bound = integral_gronwall_bound(k, gamma, &table).map(|b| b.eval(t)).unwrap_or(f64::NAN);
    let defect = (f(t) + k * integral - f(s)).abs() + (bound - f(t)).abs();
    ReportRow::new("gronwall_saturation", "integral gronwall", defect, 0.0, 1e-12, Comparison::Within)
}

/// Decay exponents, the measured-constant bounds and the Gronwall form of the
/// `L^2` estimate on one solver run.
pub fn decay_rows(study: &DecayStudy) -> Vec<ReportRow> {
    let mut rows = vec![
        ReportRow::new("decay_slope[pinf]", "decay exponent", study.slope_inf, -0.5, 0.05, Comparison::Relative),
        ReportRow::new("decay_slope[p2]", "decay exponent", study.slope_2, -0.25, 0.05, Comparison::Relative),
    ];
    let (alpha, m, d) = (DECAY_ALPHA, DECAY_M, 1);
    let bounds = measure_nash_constant(alpha, d).and_then(|n| {
        Ok((n.c_n, decay_constant(alpha, m, d, n.c_n)?, preliminary_constant(2.0, alpha, m, d, n.c_n)?))
    });
    match bounds {
        Ok((c_n, c_inf, c_2)) => {
            rows.push(ReportRow::new("decay_constant_bounds_prefactor[pinf]", "decay constant bound", c_inf, study.prefactor_inf, 0.0, Comparison::AtLeast));
            rows.push(ReportRow::new("decay_constant_bounds_prefactor[p2]", "decay constant bound", c_2, study.prefactor_2, 0.0, Comparison::AtLeast));
            // f = |u|_2^2 against (K gamma t)^(-1/gamma), gamma = a/2 - 1
            let e = gn_exponents(2.0, m, d, alpha).expect("p = 2 is admissible");
            let gamma = e.a / 2.0 - 1.0;
            let table: Vec<(f64, f64)> = study.trajectory.records.iter().map(|r| (r.t, r.t)).collect();
            let worst = integral_gronwall_bound(k_opt(2.0, m, c_n), gamma, &table)
                .map(|b| {
                    study.trajectory.records[1..]
                        .iter()
                        .map(|r| r.lp_norms[1].powi(2) / b.eval(r.t))
                        .fold(0.0, f64::max)
                })
                .unwrap_or(f64::NAN);
            rows.push(ReportRow::new("gronwall_bound_on_solver[p2]", "integral gronwall", worst, 1.0, 0.0, Comparison::AtMost));
            rows.push(ReportRow::new("gronwall_exponent[p2]", "integral gronwall", 2.0 * study.slope_2, -1.0 / gamma, 0.05, Comparison::Relative));
        }
        Err(_) => rows.push(ReportRow::error("decay_constant_bounds_prefactor[pinf]", "decay constant bound")),
    }
    rows
}

pub fn all(seed: u64) -> Vec<ReportRow> {
    let mut rows = special_functions(seed);
    rows.extend(classical_limit());
    for &(alpha, d) in &[(0.5, 1), (1.0, 1), (0.5, 2), (1.0, 2), (1.5, 2), (0.5, 3), (1.0, 3), (1.5, 3)] {
        rows.extend(profile(alpha, 2.0, d));
    }
    rows.extend(operators());
    rows.extend(inequalities(seed));
    match self_similar_tracking(512, 1e-4) {
        Ok(run) => {
            rows.push(ReportRow::new("self_similar_l1[N=512]", "self-similar tracking", run.rel_l1, 0.0, 1e-2, Comparison::AtMost));
            rows.extend(trajectory_rows("barenblatt", &run.trajectory, true));
        }
        Err(_) => rows.push(ReportRow::error("self_similar_l1[N=512]", "self-similar tracking")),
    }
    match decay_study() {
        Ok(study) => {
            rows.extend(decay_rows(&study));
            rows.extend(trajectory_rows("gaussian", &study.trajectory, true));
        }
        Err(_) => rows.push(ReportRow::error("decay_slope[pinf]", "decay exponent")),
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_comparisons() {
        assert!(ReportRow::new("x", "positivity", 1.0, 1.1, 0.2, Comparison::Within).pass);
        assert!(!ReportRow::new("x", "positivity", 1.0, 2.0, 0.2, Comparison::Relative).pass);
        assert!(ReportRow::new("x", "positivity", -1e-11, 0.0, 1e-10, Comparison::AtLeast).pass);
        assert!(!ReportRow::new("x", "positivity", 2.0, 1.0, 0.5, Comparison::AtMost).pass);
        assert!(!ReportRow::new("x", "positivity", f64::NAN, 0.0, 1.0, Comparison::Within).pass);
        assert!(!ReportRow::error("x", "positivity").pass);
        assert_eq!(ReportRow::CSV_HEADER.split(',').count(), ReportRow::new("a", "positivity", 0.0, 0.0, 0.0, Comparison::Within).to_csv().split(',').count());
    }

    #[test]
    fn fast_suites_pass() {
        for r in special_functions(DEFAULT_SEED).into_iter().chain(classical_limit()).chain(profile(1.0, 2.0, 1)) {
            assert!(r.pass, "{r}");
        }
    }
}
