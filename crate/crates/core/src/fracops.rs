//! Fourier-multiplier operators on periodic grids over `[-L/2, L/2)^d`.
//!
//! Every multiplier sends the zero mode to zero and discards modes carrying a
//! Nyquist index, so odd and even multipliers compose exactly
//! (`div grad = lap`, `div grad^(alpha-1) = -(-Delta)^(alpha/2)`).

use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Result};
use crate::specfun::{gamma_fn, rgamma};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub d: usize,
    /// Points per axis.
    pub n: usize,
    /// Period.
    pub l: f64,
}

impl Grid {
    pub fn new(d: usize, n: usize, l: f64) -> Result<Self> {
        if d != 1 && d != 2 {
            return domain(format!("grids support d = 1 or 2, got {d}"));
        }
        if n < 16 || !n.is_power_of_two() {
            return domain(format!("n must be a power of two >= 16, got {n}"));
        }
        if !(l > 0.0) || !l.is_finite() {
            return domain(format!("period must be positive, got {l}"));
        }
        Ok(Self { d, n, l })
    }

    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Number of samples, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element of the rectangle rule.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    /// Sample positions along one axis.
    pub fn axis(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| -0.5 * self.l + i as f64 * self.dx())
            .collect()
    }

    /// Coordinates of the flat sample index `idx` (row-major, axis 0 slowest).
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let h = self.dx();
        let x = |i: usize| -0.5 * self.l + i as f64 * h;
        match self.d {
            1 => [x(idx), 0.0],
            _ => [x(idx / self.n), x(idx % self.n)],
        }
    }

    /// Integer wavenumber of axis index `i`, in `[-n/2, n/2)`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    fn axis_indices(&self, idx: usize) -> [usize; 2] {
        match self.d {
            1 => [idx, 0],
            _ => [idx / self.n, idx % self.n],
        }
    }

    /// Angular frequency of mode `idx`, or `None` if it carries a Nyquist index.
    pub fn frequency(&self, idx: usize) -> Option<[f64; 2]> {
        let ax = self.axis_indices(idx);
        let scale = 2.0 * PI / self.l;
        let mut xi = [0.0; 2];
        for j in 0..self.d {
            if ax[j] == self.n / 2 {
                return None;
            }
            xi[j] = scale * self.wavenumber(ax[j]) as f64;
        }
        Some(xi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!(
                "field has {} samples, grid needs {}",
                values.len(),
                grid.len()
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return domain(format!("non-finite sample at index {i}"));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` at the grid points; `f` receives a slice of length `d`.
    pub fn from_fn<F: FnMut(&[f64]) -> f64>(grid: Grid, mut f: F) -> Self {
        let values = (0..grid.len())
            .map(|i| f(&grid.point(i)[..grid.d]))
            .collect();
        Self { grid, values }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Rectangle-rule integral over the period cell.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    /// Discrete `L^2` inner product.
    pub fn inner(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.cell_volume()
    }

    pub fn map<F: FnMut(f64) -> f64>(&self, f: F) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().copied().map(f).collect(),
        }
    }

    pub fn zip_with<F: FnMut(f64, f64) -> f64>(&self, other: &Field, mut f: F) -> Field {
        Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let mut planner = PLANNER
        .get_or_init(|| Mutex::new(FftPlanner::new()))
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// Forward and inverse transforms for one grid shape. Cheap to clone; plans
/// are shared.
#[derive(Clone)]
pub struct Transform {
    grid: Grid,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Transform {
    pub fn new(grid: Grid) -> Self {
        Self {
            grid,
            fwd: plan(grid.n, false),
            inv: plan(grid.n, true),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn run(&self, fft: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
        let n = self.grid.n;
        fft.process(buf);
        if self.grid.d == 2 {
            transpose(buf, n);
            fft.process(buf);
            transpose(buf, n);
        }
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        self.run(&self.fwd, &mut buf);
        buf
    }

    /// Inverse transform, normalised, keeping the real part.
    pub fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.run(&self.inv, &mut spec);
        let scale = 1.0 / spec.len() as f64;
        spec.iter().map(|c| c.re * scale).collect()
    }

    /// Applies a multiplier given as a function of the frequency vector.
    /// Nyquist modes are dropped.
    pub fn apply_spectrum<F: Fn(&[f64]) -> Complex64>(
        &self,
        spec: &[Complex64],
        mult: F,
    ) -> Vec<f64> {
        let d = self.grid.d;
        let out = spec
            .iter()
            .enumerate()
            .map(|(i, c)| match self.grid.frequency(i) {
                Some(xi) => c * mult(&xi[..d]),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        self.inverse(out)
    }

    pub fn apply<F: Fn(&[f64]) -> Complex64>(&self, f: &Field, mult: F) -> Field {
        let spec = self.forward(&f.values);
        Field {
            grid: self.grid,
            values: self.apply_spectrum(&spec, mult),
        }
    }
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `|xi|^(alpha - 2)` away from the origin, zero at it.
fn frac_weight(xi: &[f64], alpha: f64) -> f64 {
    let r = norm(xi);
    if r == 0.0 {
        0.0
    } else {
        r.powf(alpha - 2.0)
    }
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return domain(format!("alpha must lie in (0, 2], got {alpha}"));
    }
    Ok(())
}

/// `(-Delta)^(alpha/2)`, symbol `|xi|^alpha`.
pub fn frac_laplacian(f: &Field, alpha: f64) -> Result<Field> {
    check_order(alpha)?;
    Ok(Transform::new(f.grid).apply(f, |xi| real(norm(xi).powf(alpha))))
}

/// `I_beta = (-Delta)^(-beta/2)` on nonzero modes; the output has zero mean.
pub fn riesz_potential(f: &Field, beta: f64) -> Result<Field> {
    if !(beta > 0.0 && beta < 2.0) {
        return domain(format!("beta must lie in (0, 2), got {beta}"));
    }
    Ok(Transform::new(f.grid).apply(f, |xi| {
        let r = norm(xi);
        real(if r == 0.0 { 0.0 } else { r.powf(-beta) })
    }))
}

/// `grad^(alpha-1)`, component `j` with symbol `i xi_j |xi|^(alpha-2)`.
pub fn frac_gradient(f: &Field, alpha: f64) -> Result<Vec<Field>> {
    check_order(alpha)?;
    let tr = Transform::new(f.grid);
    let spec = tr.forward(&f.values);
    Ok((0..f.grid.d)
        .map(|j| Field {
            grid: f.grid,
            values: tr.apply_spectrum(&spec, |xi| {
                Complex64::new(0.0, xi[j] * frac_weight(xi, alpha))
            }),
        })
        .collect())
}

/// [`frac_gradient`] sampled on the staggered points `x + (h/2) e_j`.
pub fn frac_gradient_faces(f: &Field, alpha: f64) -> Result<Vec<Field>> {
    check_order(alpha)?;
    let tr = Transform::new(f.grid);
    let spec = tr.forward(&f.values);
    let half = 0.5 * f.grid.dx();
    Ok((0..f.grid.d)
        .map(|j| Field {
            grid: f.grid,
            values: tr.apply_spectrum(&spec, |xi| {
                Complex64::new(0.0, xi[j] * frac_weight(xi, alpha))
                    * Complex64::from_polar(1.0, xi[j] * half)
            }),
        })
        .collect())
}

pub fn gradient(f: &Field) -> Vec<Field> {
    let tr = Transform::new(f.grid);
    let spec = tr.forward(&f.values);
    (0..f.grid.d)
        .map(|j| Field {
            grid: f.grid,
            values: tr.apply_spectrum(&spec, |xi| Complex64::new(0.0, xi[j])),
        })
        .collect()
}

pub fn divergence(v: &[Field]) -> Result<Field> {
    let Some(first) = v.first() else {
        return domain("divergence of an empty vector field");
    };
    let grid = first.grid;
    if v.len() != grid.d || v.iter().any(|c| c.grid != grid) {
        return domain("vector field components do not match the grid");
    }
    let tr = Transform::new(grid);
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (j, comp) in v.iter().enumerate() {
        let spec = tr.forward(&comp.values);
        for (i, (a, c)) in acc.iter_mut().zip(spec).enumerate() {
            if let Some(xi) = grid.frequency(i) {
                *a += c * Complex64::new(0.0, xi[j]);
            }
        }
    }
    Ok(Field {
        grid,
        values: tr.inverse(acc),
    })
}

pub fn laplacian(f: &Field) -> Field {
    Transform::new(f.grid).apply(f, |xi| real(-xi.iter().map(|v| v * v).sum::<f64>()))
}

/// Two-thirds rule: removes every mode with some `|k_j| > n/3`.
pub fn dealias(f: &Field) -> Field {
    let g = f.grid;
    let cut = g.n as i64 / 3;
    let tr = Transform::new(g);
    let mut spec = tr.forward(&f.values);
    for (i, c) in spec.iter_mut().enumerate() {
        let ax = g.axis_indices(i);
        if ax[..g.d].iter().any(|&a| g.wavenumber(a).abs() > cut) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    Field {
        grid: g,
        values: tr.inverse(spec),
    }
}

/// The constant `C` for which `grad^(alpha-1) f(x) = C int (f(x) - f(x+z)) z |z|^(-d-alpha) dz`
/// in one dimension, obtained by differentiating the Riesz kernel of order `2 - alpha`.
/// It is negative for every `alpha` in `(0, 2)`.
pub fn analytic_singular_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha must lie in (0, 2), got {alpha}"));
    }
    // (1 - alpha) Gamma((alpha - 1)/2) = -2 Gamma((alpha + 1)/2)
    Ok(-2.0 * gamma_fn(0.5 * (alpha + 1.0))? * rgamma(1.0 - 0.5 * alpha)
        / (2f64.powf(2.0 - alpha) * PI.sqrt()))
}

/// `int z^(1-alpha) dz` over `[a, b]`.
fn kernel_moment(a: f64, b: f64, alpha: f64) -> f64 {
    (b.powf(2.0 - alpha) - a.powf(2.0 - alpha)) / (2.0 - alpha)
}

/// Direct evaluation of `C_cal int (f(x) - f(x+z)) z |z|^(-1-alpha) dz` in one
/// dimension, with `f` extended by zero outside the grid. Folding `z -> -z`
/// gives `int_0^inf q(z) z^(1-alpha) dz` with the smooth even function
/// `q(z) = (f(x-z) - f(x+z)) / z`; each cell uses the exact moment of
/// `z^(1-alpha)` and the central half cell uses the Taylor value `q(0) = -2 f'(x)`.
pub fn singular_integral_frac_gradient(f: &Field, alpha: f64, c_cal: f64) -> Result<Field> {
    let g = f.grid;
    if g.d != 1 {
        return domain("the singular-integral oracle is one-dimensional");
    }
    if g.n > 512 {
        return domain(format!("the singular-integral oracle is limited to n <= 512, got {}", g.n));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha must lie in (0, 2), got {alpha}"));
    }
    let n = g.n as i64;
    let h = g.dx();
    let at = |i: i64| {
        if (0..n).contains(&i) {
            f.values[i as usize]
        } else {
            0.0
        }
    };
    let weights: Vec<f64> = (1..n)
        .map(|j| kernel_moment((j as f64 - 0.5) * h, (j as f64 + 0.5) * h, alpha) / (j as f64 * h))
        .collect();
    let inner = kernel_moment(0.0, 0.5 * h, alpha);
    let values = (0..n)
        .map(|i| {
            // fourth-order central difference for f'(x)
            let slope = (8.0 * (at(i + 1) - at(i - 1)) - (at(i + 2) - at(i - 2))) / (12.0 * h);
            let outer: f64 = weights
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let j = k as i64 + 1;
                    w * (at(i - j) - at(i + j))
                })
                .sum();
            c_cal * (outer - 2.0 * inner * slope)
        })
        .collect();
    Ok(Field { grid: g, values })
}

/// Contribution of the periodic images of a point mass `mass` at `x0` to the
/// singular integral (without the constant), at offset `x - x0`. Subtracting
/// `C_cal` times this from a periodic spectral result recovers the
/// whole-line value up to the width of the source.
pub fn periodic_image_correction(offset: f64, mass: f64, l: f64, alpha: f64) -> f64 {
    const IMAGES: usize = 1000;
    let mut acc = 0.0;
    for k in (1..=IMAGES).rev() {
        let kl = k as f64 * l;
        acc += (kl + offset).powf(-alpha) - (kl - offset).powf(-alpha);
    }
    // remaining images, to first order in offset / (k l)
    let tail = 2.0 * offset * (IMAGES as f64 + 0.5).powf(-alpha) * l.powf(-1.0 - alpha);
    mass * (acc - tail)
}

/// Least-squares constant matching the singular integral to the spectral
/// `grad^(alpha-1)` of a unit Gaussian over `|x| <= 2`, after removing the
/// periodic-image contribution from the spectral side.
pub fn calibrate_singular_constant(alpha: f64) -> Result<f64> {
    let (spectral, raw, grid) = singular_calibration_pair(alpha)?;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..grid.n {
        if grid.point(i)[0].abs() <= 2.0 {
            num += raw.values[i] * spectral[i];
            den += raw.values[i] * raw.values[i];
        }
    }
    Ok(num / den)
}

/// Spectral values and raw singular integrals for the calibration Gaussian.
/// The spectral values are linear in the unknown constant only through the
/// image term, so the correction is applied with the analytic constant.
fn singular_calibration_pair(alpha: f64) -> Result<(Vec<f64>, Field, Grid)> {
    let grid = Grid::new(1, 512, 32.0)?;
    let f = Field::from_fn(grid, |x| (-0.5 * x[0] * x[0]).exp());
    let mass = (2.0 * PI).sqrt();
    let c = analytic_singular_constant(alpha)?;
    let spectral = frac_gradient(&f, alpha)?.remove(0);
    let corrected = (0..grid.n)
        .map(|i| spectral.values[i] - c * periodic_image_correction(grid.point(i)[0], mass, grid.l, alpha))
        .collect();
    let raw = singular_integral_frac_gradient(&f, alpha, 1.0)?;
    Ok((corrected, raw, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn band_limited(grid: Grid, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(f64, f64, f64, f64)> = (0..8)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(1..6) as f64,
                    rng.gen_range(0..6) as f64,
                    rng.gen_range(0.0..2.0 * PI),
                )
            })
            .collect();
        let w = 2.0 * PI / grid.l;
        Field::from_fn(grid, |x| {
            let y = x.get(1).copied().unwrap_or(0.0);
            modes
                .iter()
                .map(|(a, k1, k2, ph)| a * (w * (k1 * x[0] + k2 * y) + ph).cos())
                .sum::<f64>()
        })
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(3, 64, 1.0).is_err());
        assert!(Grid::new(1, 8, 1.0).is_err());
        assert!(Grid::new(1, 48, 1.0).is_err());
        assert!(Grid::new(1, 64, 0.0).is_err());
        let g = Grid::new(2, 16, 4.0).unwrap();
        assert_eq!(g.len(), 256);
        assert_eq!(g.point(17), [-2.0 + 0.25, -2.0 + 0.25]);
        assert_eq!(g.wavenumber(8), -8);
        assert!(g.frequency(8).is_none());
    }

    #[test]
    fn constants_are_annihilated() {
        for d in 1..=2 {
            let g = Grid::new(d, 32, 5.0).unwrap();
            let c = Field::from_fn(g, |_| 3.5);
            assert!(frac_laplacian(&c, 0.7).unwrap().max_abs() < 1e-13);
            assert!(laplacian(&c).max_abs() < 1e-13);
            for comp in gradient(&c).into_iter().chain(frac_gradient(&c, 1.3).unwrap()) {
                assert!(comp.max_abs() < 1e-13);
            }
        }
    }

    #[test]
    fn sine_eigenfunctions() {
        let l = 6.0;
        let g = Grid::new(1, 64, l).unwrap();
        let w = 2.0 * PI / l;
        let f = Field::from_fn(g, |x| (w * x[0]).sin());
        let lap2 = frac_laplacian(&f, 2.0).unwrap();
        let lap = laplacian(&f);
        let riesz = riesz_potential(&f, 0.6).unwrap();
        for i in 0..g.n {
            let s = f.values[i];
            assert!((lap2.values[i] - w * w * s).abs() < 1e-12);
            assert!((lap.values[i] + w * w * s).abs() < 1e-12);
            assert!((riesz.values[i] - w.powf(-0.6) * s).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_identities() {
        for d in 1..=2 {
            let g = Grid::new(d, 32, 7.0).unwrap();
            for seed in 0..4 {
                let f = band_limited(g, seed);
                let scale = f.max_abs();
                for &alpha in &[0.3, 1.0, 1.7] {
                    let lhs = divergence(&frac_gradient(&f, alpha).unwrap()).unwrap();
                    let rhs = frac_laplacian(&f, alpha).unwrap();
                    let err = lhs.zip_with(&rhs, |a, b| a + b).max_abs();
                    assert!(err < 1e-12 * scale.max(1.0) * 10.0, "d={d} alpha={alpha}: {err}");
                    let back = riesz_potential(&frac_laplacian(&f, alpha.min(1.9)).unwrap(), alpha.min(1.9)).unwrap();
                    let m = f.mean();
                    let err = back.zip_with(&f, |a, b| a - (b - m)).max_abs();
                    assert!(err < 1e-12 * 10.0, "{err}");
                }
                let dg = divergence(&gradient(&f)).unwrap();
                assert!(dg.zip_with(&laplacian(&f), |a, b| a - b).max_abs() < 1e-11);
            }
        }
    }

    #[test]
    fn self_adjoint_and_mean_free() {
        for d in 1..=2 {
            let g = Grid::new(d, 32, 3.0).unwrap();
            let f = band_limited(g, 11);
            let h = band_limited(g, 12);
            let a = frac_laplacian(&f, 1.1).unwrap().inner(&h);
            let b = f.inner(&frac_laplacian(&h, 1.1).unwrap());
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
            let v: Vec<Field> = (0..d).map(|j| band_limited(g, 20 + j as u64).map(|x| x + 1.0)).collect();
            assert!(divergence(&v).unwrap().mean().abs() < 1e-13);
        }
    }

    #[test]
    fn translation_commutes() {
        let g = Grid::new(1, 64, 4.0).unwrap();
        let f = band_limited(g, 3);
        let shift = 5;
        let shifted = Field::new(g, (0..g.n).map(|i| f.values[(i + shift) % g.n]).collect()).unwrap();
        let a = frac_gradient(&f, 0.8).unwrap().remove(0);
        let b = frac_gradient(&shifted, 0.8).unwrap().remove(0);
        for i in 0..g.n {
            assert!((a.values[(i + shift) % g.n] - b.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_limit_of_fractional_gradient() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let f = band_limited(g, 5);
        let a = frac_gradient(&f, 2.0 - 1e-12).unwrap().remove(0);
        let b = gradient(&f).remove(0);
        assert!(a.zip_with(&b, |x, y| x - y).max_abs() < 1e-9);
    }

    #[test]
    fn staggered_gradient_matches_shifted_sampling() {
        let l = 5.0;
        let g = Grid::new(1, 64, l).unwrap();
        let w = 2.0 * PI / l;
        let f = Field::from_fn(g, |x| (3.0 * w * x[0]).cos());
        let faces = frac_gradient_faces(&f, 1.4).unwrap().remove(0);
        let h = g.dx();
        for i in 0..g.n {
            let x = g.point(i)[0] + 0.5 * h;
            let exact = -(3.0 * w).powf(0.4) * (3.0 * w * x).sin();
            assert!((faces.values[i] - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn dealias_keeps_low_modes() {
        let l = 2.0;
        let g = Grid::new(1, 64, l).unwrap();
        let w = 2.0 * PI / l;
        let low = Field::from_fn(g, |x| (5.0 * w * x[0]).sin());
        let both = Field::from_fn(g, |x| (5.0 * w * x[0]).sin() + (30.0 * w * x[0]).cos());
        assert!(dealias(&both).zip_with(&low, |a, b| a - b).max_abs() < 1e-13);
    }

    #[test]
    fn getoor_on_periodic_grid() {
        let mut errs = Vec::new();
        for &n in &[256, 1024] {
            let g = Grid::new(1, n, 16.0).unwrap();
            let alpha = 1.0;
            let k = crate::barenblatt::scaling_constants(alpha, 2.0, 1).unwrap().k_getoor;
            let f = Field::from_fn(g, |x| (1.0 - x[0] * x[0]).max(0.0).powf(0.5 * alpha));
            let lap = frac_laplacian(&f, alpha).unwrap();
            let err = (0..n)
                .filter(|&i| g.point(i)[0].abs() <= 0.9)
                .map(|i| (k * lap.values[i] - 1.0).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[1] < errs[0], "{errs:?}");
        assert!(errs[1] < 0.05, "{errs:?}");
    }

    #[test]
    fn singular_constant_limits() {
        assert!((analytic_singular_constant(1.0).unwrap() + 1.0 / PI).abs() < 1e-15);
        for &a in &[0.3, 0.9, 1.0, 1.2, 1.8] {
            assert!(analytic_singular_constant(a).unwrap() < 0.0);
        }
    }

    #[test]
    fn singular_integral_matches_spectral_after_calibration() {
        for &alpha in &[0.3, 0.5, 1.0, 1.5, 1.8] {
            let c = calibrate_singular_constant(alpha).unwrap();
            let exact = analytic_singular_constant(alpha).unwrap();
            assert!(((c - exact) / exact).abs() < 1e-3, "alpha={alpha}: {c} vs {exact}");
            let (spectral, raw, grid) = singular_calibration_pair(alpha).unwrap();
            let scale = spectral.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let err = (0..grid.n)
                .filter(|&i| grid.point(i)[0].abs() <= 2.0)
                .map(|i| (spectral[i] - c * raw.values[i]).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-3 * scale, "alpha={alpha}: {err} vs {scale}");
        }
    }

    #[test]
    fn singular_integral_odd_symmetry_and_linearity() {
        let grid = Grid::new(1, 128, 16.0).unwrap();
        let f = Field::from_fn(grid, |x| (-(x[0] - 0.5).powi(2)).exp());
        let g2 = Field::from_fn(grid, |x| (-2.0 * (x[0] + 1.0).powi(2)).exp());
        let a = singular_integral_frac_gradient(&f, 0.8, 1.0).unwrap();
        // the grid point x = 0.5 is the centre of symmetry
        let i0 = grid.axis().iter().position(|x| (x - 0.5).abs() < 1e-12).unwrap();
        assert!(a.values[i0].abs() < 1e-13);
        let sum = f.zip_with(&g2, |x, y| x + y);
        let b = singular_integral_frac_gradient(&g2, 0.8, 1.0).unwrap();
        let s = singular_integral_frac_gradient(&sum, 0.8, 1.0).unwrap();
        for i in 0..grid.n {
            assert!((s.values[i] - a.values[i] - b.values[i]).abs() < 1e-12);
        }
        assert!(singular_integral_frac_gradient(&Field::zeros(Grid::new(1, 1024, 1.0).unwrap()), 1.0, 1.0).is_err());
    }
}
