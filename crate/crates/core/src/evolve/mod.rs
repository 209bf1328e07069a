//! Time integration of the regularized problem
//! `u_t = delta Lap u + div(|u| grad^(alpha-1) G_eps(u))`.

mod config;

pub use config::{parse_pairs, InitialCondition, Scheme, SolverConfig, KEYS};

use std::fs;

use num_complex::Complex64;

use crate::barenblatt::{self_similar, ProfileParams};
use crate::error::{domain, Error, Result};
use crate::fracops::{Field, Grid, Transform};

/// `sgn(u) ((u^2 + eps^2)^((m-1)/2) - eps^(m-1))`; equals `|u|^(m-2) u` at `eps = 0`.
pub fn g_eps(u: f64, m: f64, eps: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let e = 0.5 * (m - 1.0);
    let mag = if eps == 0.0 {
        u.abs().powf(m - 1.0)
    } else {
        (u * u + eps * eps).powf(e) - eps.powf(m - 1.0)
    };
    mag.copysign(u)
}

/// Rectangle-rule `L^p` norm; `p = inf` gives the largest absolute sample.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        return f.max_abs();
    }
    let s: f64 = f.values.iter().map(|v| v.abs().powf(p)).sum();
    (s * f.grid.cell_volume()).powf(1.0 / p)
}

pub fn mass(f: &Field) -> f64 {
    f.integral()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    /// One entry per exponent of the configuration's `p_list`.
    pub lp_norms: Vec<f64>,
    pub min_u: f64,
    pub max_u: f64,
    /// Last step taken before this record (zero for the initial record).
    pub dt_used: f64,
}

impl DiagnosticsRecord {
    pub fn of(t: f64, u: &Field, p_list: &[f64], dt_used: f64) -> Self {
        let (min_u, max_u) = u
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
        Self {
            t,
            mass: mass(u),
            lp_norms: p_list.iter().map(|p| lp_norm(u, *p)).collect(),
            min_u,
            max_u,
            dt_used,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub p_list: Vec<f64>,
    pub records: Vec<DiagnosticsRecord>,
    /// `(t, u)` at every record time.
    pub snapshots: Vec<(f64, Field)>,
    /// Total number of accepted steps.
    pub steps: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &Field {
        &self.snapshots.last().expect("a trajectory holds the initial state").1
    }

    /// Largest relative deviation of the mass from its initial value.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.records[0].mass;
        self.records
            .iter()
            .map(|r| ((r.mass - m0) / m0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest relative increase of each norm between consecutive records.
    pub fn worst_norm_increase(&self) -> Vec<f64> {
        (0..self.p_list.len())
            .map(|k| {
                self.records
                    .windows(2)
                    .map(|w| (w[1].lp_norms[k] - w[0].lp_norms[k]) / w[0].lp_norms[k])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.records.iter().map(|r| r.min_u).fold(f64::INFINITY, f64::min)
    }
}

pub fn initial_field(cfg: &SolverConfig) -> Result<Field> {
    let grid = cfg.grid;
    let f = match &cfg.ic {
        InitialCondition::Barenblatt { radius, t0 } => {
            let p = ProfileParams::new(cfg.alpha, cfg.m, grid.d, *radius)?;
            let values = (0..grid.len())
                .map(|i| self_similar(*t0, &grid.point(i)[..grid.d], &p))
                .collect::<Result<Vec<_>>>()?;
            Field { grid, values }
        }
        InitialCondition::Gaussian { sigma, amplitude, center } => Field::from_fn(grid, |x| {
            let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
            amplitude * (-0.5 * r2 / (sigma * sigma)).exp()
        }),
        InitialCondition::SignedPair { sigma, amplitude, separation, ratio } => {
            Field::from_fn(grid, |x| {
                let bump = |shift: f64| {
                    let r2: f64 = x
                        .iter()
                        .enumerate()
                        .map(|(j, a)| if j == 0 { (a - shift).powi(2) } else { a * a })
                        .sum();
                    (-0.5 * r2 / (sigma * sigma)).exp()
                };
                amplitude * (bump(-0.5 * separation) - ratio * bump(0.5 * separation))
            })
        }
        InitialCondition::File { path } => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read initial data '{}': {e}", path.display()))
            })?;
            let mut values = Vec::with_capacity(grid.len());
            for line in text.lines() {
                let Some(last) = line.split(',').next_back() else { continue };
                // header lines do not parse
                if let Ok(v) = last.trim().parse::<f64>() {
                    values.push(v);
                }
            }
            return Field::new(grid, values);
        }
    };
    Ok(f)
}

/// Precomputed multipliers for one configuration.
struct Operators {
    tr: Transform,
    /// `i xi_j |xi|^(alpha-2)` per axis.
    frac: Vec<Vec<Complex64>>,
    /// The same, shifted to the face `x + (h/2) e_j`.
    faces: Vec<Vec<Complex64>>,
    /// `i xi_j` per axis.
    deriv: Vec<Vec<Complex64>>,
    /// `|xi|^2`.
    xi2: Vec<f64>,
    /// Two-thirds-rule mask.
    keep: Vec<bool>,
}

impl Operators {
    fn new(grid: Grid, alpha: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let half = 0.5 * grid.dx();
        let cut = grid.n as i64 / 3;
        let mut frac = vec![vec![zero; grid.len()]; grid.d];
        let mut faces = frac.clone();
        let mut deriv = frac.clone();
        let mut xi2 = vec![0.0; grid.len()];
        let mut keep = vec![false; grid.len()];
        for i in 0..grid.len() {
            let Some(xi) = grid.frequency(i) else { continue };
            let r2: f64 = xi[..grid.d].iter().map(|v| v * v).sum();
            xi2[i] = r2;
            let w = if r2 == 0.0 { 0.0 } else { r2.powf(0.5 * alpha - 1.0) };
            for j in 0..grid.d {
                frac[j][i] = Complex64::new(0.0, xi[j] * w);
                faces[j][i] = frac[j][i] * Complex64::from_polar(1.0, xi[j] * half);
                deriv[j][i] = Complex64::new(0.0, xi[j]);
            }
            keep[i] = xi[..grid.d]
                .iter()
                .all(|v| ((v * grid.l / (2.0 * std::f64::consts::PI)).round() as i64).abs() <= cut);
        }
        Self {
            tr: Transform::new(grid),
            frac,
            faces,
            deriv,
            xi2,
            keep,
        }
    }

    fn apply(&self, spec: &[Complex64], mult: &[Complex64]) -> Vec<f64> {
        self.tr
            .inverse(spec.iter().zip(mult).map(|(a, b)| a * b).collect())
    }
}

/// The Fourier-space nonlinear term `div(dealias(|u| grad^(alpha-1) G_eps(u)))`
/// together with the largest transport speed.
fn spectral_flux(ops: &Operators, cfg: &SolverConfig, u: &[f64]) -> (Vec<Complex64>, f64) {
    let g = cfg.grid;
    let pressure: Vec<f64> = u.iter().map(|v| g_eps(*v, cfg.m, cfg.eps)).collect();
    let p_hat = ops.tr.forward(&pressure);
    let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut speed: f64 = 0.0;
    for j in 0..g.d {
        let w = ops.apply(&p_hat, &ops.frac[j]);
        speed = w.iter().fold(speed, |s, v| s.max(v.abs()));
        let prod: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a.abs() * b).collect();
        let prod_hat = ops.tr.forward(&prod);
        for i in 0..g.len() {
            if ops.keep[i] {
                out[i] += prod_hat[i] * ops.deriv[j][i];
            }
        }
    }
    (out, speed)
}

/// Right-hand side `delta Lap u + div(dealias(|u| grad^(alpha-1) G_eps(u)))`
/// evaluated spectrally.
pub fn rhs(u: &Field, cfg: &SolverConfig) -> Result<Field> {
    if u.grid != cfg.grid {
        return domain("field and configuration grids differ");
    }
    let ops = Operators::new(cfg.grid, cfg.alpha);
    let (mut flux, _) = spectral_flux(&ops, cfg, &u.values);
    let u_hat = ops.tr.forward(&u.values);
    for i in 0..flux.len() {
        flux[i] -= cfg.delta * ops.xi2[i] * u_hat[i];
    }
    Ok(Field {
        grid: cfg.grid,
        values: ops.tr.inverse(flux),
    })
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Steps a configuration forward in time; the state is only replaced after a
/// step has succeeded, so it stays valid when a step fails.
pub struct Solver {
    cfg: SolverConfig,
    ops: Operators,
    t: f64,
    u: Field,
    steps: usize,
    last_dt: f64,
}

impl Solver {
    pub fn new(cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let u = initial_field(&cfg)?;
        Self::with_state(cfg, u)
    }

    pub fn with_state(cfg: SolverConfig, u: Field) -> Result<Self> {
        cfg.validate()?;
        if u.grid != cfg.grid {
            return domain("initial field and configuration grids differ");
        }
        let ops = Operators::new(cfg.grid, cfg.alpha);
        Ok(Self {
            cfg,
            ops,
            t: 0.0,
            u,
            steps: 0,
            last_dt: 0.0,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &Field {
        &self.u
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn last_dt(&self) -> f64 {
        self.last_dt
    }

    /// Face velocities `grad^(alpha-1) G_eps(u)` per axis.
    fn face_velocity(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let pressure: Vec<f64> = u.iter().map(|v| g_eps(*v, self.cfg.m, self.cfg.eps)).collect();
        let p_hat = self.ops.tr.forward(&pressure);
        self.ops
            .faces
            .iter()
            .map(|mult| self.ops.apply(&p_hat, mult))
            .collect()
    }

    /// `delta Lap u - div F` with upwind MUSCL fluxes; the positive part moves
    /// with `-W` and the negative part with `+W`.
    fn fv_operator(&self, u: &[f64], w: &[Vec<f64>]) -> Vec<f64> {
        let g = self.cfg.grid;
        let n = g.n;
        let h = g.dx();
        let mut out = vec![0.0; u.len()];
        let pos: Vec<f64> = u.iter().map(|v| v.max(0.0)).collect();
        let neg: Vec<f64> = u.iter().map(|v| (-v).max(0.0)).collect();
        let has_neg = neg.iter().any(|v| *v > 0.0);
        for (j, wj) in w.iter().enumerate() {
            let stride = if g.d == 2 && j == 0 { n } else { 1 };
            // neighbour along axis j with periodic wrap
            let step = |i: usize, k: isize| -> usize {
                let (line, a) = (i - (i / stride % n) * stride, i / stride % n);
                let b = (a as isize + k).rem_euclid(n as isize) as usize;
                line + b * stride
            };
            let face_flux = |q: &[f64], vel: &dyn Fn(usize) -> f64| -> Vec<f64> {
                let slope: Vec<f64> = (0..q.len())
                    .map(|i| minmod(q[i] - q[step(i, -1)], q[step(i, 1)] - q[i]))
                    .collect();
                (0..q.len())
                    .map(|i| {
                        let v = vel(i);
                        if v >= 0.0 {
                            v * (q[i] + 0.5 * slope[i])
                        } else {
                            let r = step(i, 1);
                            v * (q[r] - 0.5 * slope[r])
                        }
                    })
                    .collect()
            };
            let mut flux = face_flux(&pos, &|i| -wj[i]);
            if has_neg {
                let fneg = face_flux(&neg, &|i| wj[i]);
                for (f, q) in flux.iter_mut().zip(fneg) {
                    *f -= q;
                }
            }
            for i in 0..u.len() {
                let l = step(i, -1);
                let r = step(i, 1);
                out[i] += -(flux[i] - flux[l]) / h
                    + self.cfg.delta * (u[r] - 2.0 * u[i] + u[l]) / (h * h);
            }
        }
        out
    }

    /// Largest step keeping every forward-Euler stage positivity preserving, times cfl.
    fn fv_dt(&self, w: &[Vec<f64>], cfl: f64) -> f64 {
        let g = self.cfg.grid;
        let h = g.dx();
        let speed = w
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0_f64, |s, v| s.max(v.abs()));
        cfl / (g.d as f64 * (2.0 * speed / h + 2.0 * self.cfg.delta / (h * h)))
    }

    fn fv_step(&self, dt_cap: f64) -> Result<(Vec<f64>, f64)> {
        let u0 = &self.u.values;
        let w0 = self.face_velocity(u0);
        let mut dt = self.fv_dt(&w0, self.cfg.cfl).min(dt_cap);
        loop {
            if dt < self.cfg.dt_min {
                return Err(Error::StepUnderflow { t: self.t, dt });
            }
            let axpy = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> {
                a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<_>>()
            };
            let l0 = self.fv_operator(u0, &w0);
            let u1 = axpy(u0, &l0, dt);
            let w1 = self.face_velocity(&u1);
            let l1 = self.fv_operator(&u1, &w1);
            let s1 = axpy(&u1, &l1, dt);
            let u2: Vec<f64> = u0.iter().zip(&s1).map(|(a, b)| 0.75 * a + 0.25 * b).collect();
            let w2 = self.face_velocity(&u2);
            // stages must respect the positivity bound too
            if dt > self.fv_dt(&w1, 1.0) || dt > self.fv_dt(&w2, 1.0) {
                dt *= 0.5;
                continue;
            }
            let l2 = self.fv_operator(&u2, &w2);
            let s2 = axpy(&u2, &l2, dt);
            let next = u0
                .iter()
                .zip(&s2)
                .map(|(a, b)| a / 3.0 + 2.0 * b / 3.0)
                .collect();
            return Ok((next, dt));
        }
    }

    fn spectral_step(&self, dt_cap: f64) -> Result<(Vec<f64>, f64)> {
        let cfg = &self.cfg;
        let ops = &self.ops;
        let u_hat = ops.tr.forward(&self.u.values);
        let (k1, speed) = spectral_flux(ops, cfg, &self.u.values);
        let dt = (cfg.cfl * cfg.grid.dx() / speed.max(1e-8)).min(dt_cap);
        if dt < cfg.dt_min {
            return Err(Error::StepUnderflow { t: self.t, dt });
        }
        let e_half: Vec<f64> = ops.xi2.iter().map(|x| (-cfg.delta * x * 0.5 * dt).exp()).collect();
        let eval = |spec: &[Complex64]| spectral_flux(ops, cfg, &ops.tr.inverse(spec.to_vec())).0;
        let n = u_hat.len();
        let a: Vec<Complex64> = (0..n).map(|i| e_half[i] * (u_hat[i] + 0.5 * dt * k1[i])).collect();
        let k2 = eval(&a);
        let b: Vec<Complex64> = (0..n).map(|i| e_half[i] * u_hat[i] + 0.5 * dt * k2[i]).collect();
        let k3 = eval(&b);
        let c: Vec<Complex64> = (0..n)
            .map(|i| e_half[i] * e_half[i] * u_hat[i] + dt * e_half[i] * k3[i])
            .collect();
        let k4 = eval(&c);
        let next: Vec<Complex64> = (0..n)
            .map(|i| {
                let e = e_half[i];
                e * e * u_hat[i] + dt / 6.0 * (e * e * k1[i] + 2.0 * e * (k2[i] + k3[i]) + k4[i])
            })
            .collect();
        Ok((ops.tr.inverse(next), dt))
    }

    /// One step no longer than `dt_cap`.
    pub fn step(&mut self, dt_cap: f64) -> Result<f64> {
        let (next, dt) = match self.cfg.scheme {
            Scheme::FiniteVolume => self.fv_step(dt_cap)?,
            Scheme::Spectral => self.spectral_step(dt_cap)?,
        };
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: self.t + dt });
        }
        self.u.values = next;
        self.t += dt;
        self.steps += 1;
        self.last_dt = dt;
        Ok(dt)
    }

    /// Steps until the clock reaches `t_target` exactly.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.t < t_target {
            let remaining = t_target - self.t;
            if remaining <= 1e-14 * t_target.max(1.0) {
                self.t = t_target;
                break;
            }
            self.step(remaining)?;
            if (t_target - self.t).abs() <= 1e-14 * t_target.max(1.0) {
                self.t = t_target;
            }
        }
        Ok(())
    }
}

/// Integrates from `t = 0` to `t_end`, recording at multiples of `save_every`.
pub fn run(cfg: &SolverConfig) -> Result<Trajectory> {
    let mut solver = Solver::new(cfg.clone())?;
    let p_list = cfg.p_list.clone();
    let mut records = vec![DiagnosticsRecord::of(0.0, solver.state(), &p_list, 0.0)];
    let mut snapshots = vec![(0.0, solver.state().clone())];
    let saves = (cfg.t_end / cfg.save_every - 1e-9).ceil().max(1.0) as usize;
    for k in 1..=saves {
        let target = if k == saves { cfg.t_end } else { k as f64 * cfg.save_every };
        solver.advance_to(target)?;
        records.push(DiagnosticsRecord::of(target, solver.state(), &p_list, solver.last_dt()));
        snapshots.push((target, solver.state().clone()));
    }
    Ok(Trajectory {
        p_list,
        records,
        snapshots,
        steps: solver.steps(),
    })
}
