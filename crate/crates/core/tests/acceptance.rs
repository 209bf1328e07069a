//! Acceptance battery. Prints one line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fracpme::barenblatt::{interface_holder_exponent, ProfileParams};
use fracpme::evolve::{run, InitialCondition, SolverConfig, Trajectory};
use fracpme::fracops::Grid;
use fracpme::inequalities::measure_nash_constant;
use fracpme::verify::{
    classical_limit, decay_rows, decay_study, getoor_max_residual, moser_tail, pressure_gradient_error,
    self_similar_tracking, stroock_varopoulos_margins, weber_schafheitlin_row, DEFAULT_SEED, MOSER_CASES,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn getoor() -> Outcome {
    let mut cases: Vec<(f64, usize)> = [0.5, 1.0, 1.5].iter().flat_map(|&a| [(a, 2), (a, 3)]).collect();
    cases.extend([(0.5, 1), (1.0, 1)]);
    let (worst, elapsed) = timed(|| {
        cases
            .iter()
            .map(|&(a, d)| getoor_max_residual(a, d).unwrap_or(f64::NAN))
            .fold(0.0, |w: f64, r| if r.is_nan() || w.is_nan() { f64::NAN } else { w.max(r) })
    });
    outcome(
        worst <= 1e-6 && elapsed < Duration::from_secs(5),
        format!("max residual {worst:.3e} over {} cases in {elapsed:.2?}", cases.len()),
    )
}

fn classical() -> Outcome {
    let rows = classical_limit();
    let detail = rows.iter().map(|r| format!("{}={:.3e}", r.check_id, r.measured)).collect::<Vec<_>>().join(", ");
    outcome(rows.iter().all(|r| r.pass), detail)
}

fn pressure_gradient() -> Outcome {
    let errs: Vec<f64> = [512, 1024, 2048].iter().map(|&n| pressure_gradient_error(1.0, n, 16.0).unwrap_or(f64::NAN)).collect();
    outcome(
        errs[1] <= 5e-3 && errs[1] < errs[0] && errs[2] < errs[1],
        format!("sup errors N=512,1024,2048: {:.3e}, {:.3e}, {:.3e}", errs[0], errs[1], errs[2]),
    )
}

fn signed_run() -> Trajectory {
    let grid = Grid::new(1, 512, 16.0).unwrap();
    let ic = InitialCondition::SignedPair { sigma: 0.3, amplitude: 1.0, separation: 1.5, ratio: 0.6 };
    let mut cfg = SolverConfig::new(1.0, 2.0, grid, 2.0, ic);
    cfg.save_every = 0.1;
    run(&cfg).expect("signed run")
}

fn main() -> ExitCode {
    let mut lines: Vec<(usize, &str, Outcome)> = Vec::new();
    lines.push((1, "getoor identity", getoor()));
    lines.push((2, "classical-limit constant", classical()));
    lines.push((3, "inside-ball pressure gradient", pressure_gradient()));

    let (tracking, elapsed) = timed(|| {
        [(512, 1e-4), (1024, 5e-5), (2048, 2.5e-5)]
            .iter()
            .map(|&(n, reg)| self_similar_tracking(n, reg).expect("tracking run"))
            .collect::<Vec<_>>()
    });
    let errs: Vec<f64> = tracking.iter().map(|t| t.rel_l1).collect();
    lines.push((
        4,
        "self-similar tracking",
        outcome(
            errs[0] <= 1e-2 && errs[1] < errs[0] && errs[2] < errs[1] && elapsed < Duration::from_secs(60),
            format!("relative L1 {:.3e}, {:.3e}, {:.3e} in {elapsed:.2?}", errs[0], errs[1], errs[2]),
        ),
    ));

    let decay = decay_study().expect("decay run");
    let signed = signed_run();
    let mut runs: Vec<(String, &Trajectory, bool)> = tracking
        .iter()
        .map(|t| (format!("barenblatt N={}", t.n), &t.trajectory, true))
        .collect();
    runs.push(("gaussian decay".into(), &decay.trajectory, true));
    runs.push(("signed pair".into(), &signed, false));

    let drift = runs.iter().map(|r| r.1.mass_drift()).fold(0.0, f64::max);
    lines.push((5, "mass conservation", outcome(drift <= 1e-8, format!("max relative drift {drift:.3e} over {} runs", runs.len()))));

    let increase = runs
        .iter()
        .flat_map(|r| r.1.worst_norm_increase())
        .fold(f64::NEG_INFINITY, f64::max);
    lines.push((
        6,
        "L^p monotonicity",
        outcome(increase <= 1e-6, format!("largest relative increase {increase:.3e} for p in 1,2,4,inf")),
    ));

    let rows = decay_rows(&decay);
    let pick = |id: &str| rows.iter().find(|r| r.check_id == id).expect("decay row");
    let (si, s2) = (pick("decay_slope[pinf]"), pick("decay_slope[p2]"));
    let (bi, b2) = (pick("decay_constant_bounds_prefactor[pinf]"), pick("decay_constant_bounds_prefactor[p2]"));
    lines.push((
        7,
        "hypercontractive decay",
        outcome(
            si.pass && s2.pass && bi.pass && b2.pass,
            format!(
                "slopes {:.4} (sup), {:.4} (L2); constants {:.3} >= {:.3} (sup), {:.3} >= {:.3} (L2)",
                si.measured, s2.measured, bi.measured, bi.expected, b2.measured, b2.expected
            ),
        ),
    ));

    let min = runs.iter().filter(|r| r.2).map(|r| r.1.min_value()).fold(f64::INFINITY, f64::min);
    lines.push((8, "positivity", outcome(min >= -1e-10, format!("min u {min:.3e} over nonnegative runs"))));

    let (margin, equality) = stroock_varopoulos_margins(100, DEFAULT_SEED).expect("battery");
    lines.push((
        9,
        "stroock-varopoulos",
        outcome(margin >= -1e-9 && equality <= 1e-8, format!("worst margin {margin:.3e}, alpha=2 defect {equality:.3e}")),
    ));

    // includes measuring the Nash constant on the battery
    let (tails, elapsed) = timed(|| {
        MOSER_CASES
            .iter()
            .map(|&(a, m, d)| {
                let c = measure_nash_constant(a, d).expect("nash battery").c_n;
                moser_tail(a, m, d, c).expect("recursion")
            })
            .collect::<Vec<_>>()
    });
    let ok = tails.iter().all(|(k, t)| k.is_finite() && *t <= 1e-6) && elapsed < Duration::from_secs(1);
    let detail = tails.iter().map(|(k, t)| format!("kappa60={k:.4} tail={t:.1e}")).collect::<Vec<_>>().join("; ");
    lines.push((10, "moser recursion", outcome(ok, format!("{detail} in {elapsed:.2?}"))));

    let mut worst: f64 = 0.0;
    let mut fits = Vec::new();
    for &(a, m) in &[(1.0, 2.0), (0.5, 1.5), (1.5, 3.0)] {
        let p = ProfileParams::unit(a, m, 1).unwrap();
        let (fit, expect) = (interface_holder_exponent(&p), p.interface_exponent());
        worst = worst.max(((fit - expect) / expect).abs());
        fits.push(format!("{fit:.4}/{expect:.4}"));
    }
    lines.push((11, "interface holder exponent", outcome(worst <= 0.02, format!("fitted/expected {}; worst rel {worst:.2e}", fits.join(", ")))));

    let ws = weber_schafheitlin_row(20, DEFAULT_SEED);
    lines.push((12, "weber-schafheitlin", outcome(ws.pass, format!("max |closed - quadrature| {:.3e} over 20 sets", ws.measured))));

    let mut failed = 0;
    for (n, name, o) in &lines {
        println!("criterion {n:>2} {name:<30} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
