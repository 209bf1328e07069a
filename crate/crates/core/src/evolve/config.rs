//! Solver configuration and its flat `key = value` form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::fracops::Grid;

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    /// Self-similar solution of support radius `radius` at unit time, sampled at `t0`.
    Barenblatt { radius: f64, t0: f64 },
    Gaussian {
        sigma: f64,
        amplitude: f64,
        center: Vec<f64>,
    },
    /// Values read from a CSV file whose last column holds the samples.
    File { path: PathBuf },
    /// A positive bump at `-separation/2` and a negative one at `+separation/2`
    /// scaled by `ratio`.
    SignedPair {
        sigma: f64,
        amplitude: f64,
        separation: f64,
        ratio: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Conservative upwind finite volumes with spectral face velocities; keeps
    /// nonnegative data nonnegative.
    #[default]
    FiniteVolume,
    /// Integrating-factor RK4 on Fourier modes with exact heat semigroup.
    Spectral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub alpha: f64,
    pub m: f64,
    pub delta: f64,
    pub eps: f64,
    pub grid: Grid,
    pub t_end: f64,
    pub cfl: f64,
    pub save_every: f64,
    /// Exponents of the recorded norms; `f64::INFINITY` for the sup norm.
    pub p_list: Vec<f64>,
    pub ic: InitialCondition,
    pub scheme: Scheme,
    /// Steps below this size abort the run.
    pub dt_min: f64,
}

pub const KEYS: &[&str] = &[
    "d",
    "n",
    "l",
    "alpha",
    "m",
    "delta",
    "eps",
    "t_end",
    "cfl",
    "save_every",
    "p_list",
    "scheme",
];

const IC_KEYS: &[&str] = &[
    "ic.kind",
    "ic.R",
    "ic.mass",
    "ic.t0",
    "ic.sigma",
    "ic.amplitude",
    "ic.center",
    "ic.path",
    "ic.separation",
    "ic.ratio",
];

/// The raw pairs of a `key = value` text, without interpreting them.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return config_err(format!("line {}: expected key = value", lineno + 1));
        };
        let key = k.trim().to_string();
        if pairs.insert(key.clone(), v.trim().to_string()).is_some() {
            return config_err(format!("duplicate key '{key}'"));
        }
    }
    Ok(pairs)
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl SolverConfig {
    /// Defaults: `delta = eps = 1e-4`, `cfl = 0.4`, `p_list = 1,2,4,inf`,
    /// finite-volume scheme.
    pub fn new(alpha: f64, m: f64, grid: Grid, t_end: f64, ic: InitialCondition) -> Self {
        Self {
            alpha,
            m,
            delta: 1e-4,
            eps: 1e-4,
            grid,
            t_end,
            cfl: 0.4,
            save_every: t_end,
            p_list: vec![1.0, 2.0, 4.0, f64::INFINITY],
            ic,
            scheme: Scheme::default(),
            dt_min: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return config_err(format!("alpha must lie in (0, 2), got {}", self.alpha));
        }
        if !(self.m > 1.0) || !self.m.is_finite() {
            return config_err(format!("m must exceed 1, got {}", self.m));
        }
        if !(self.delta >= 0.0) || !(self.eps >= 0.0) {
            return config_err("delta and eps must be nonnegative");
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return config_err(format!("t_end must be positive, got {}", self.t_end));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return config_err(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.save_every > 0.0) {
            return config_err(format!("save_every must be positive, got {}", self.save_every));
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p >= 1.0)) {
            return config_err(format!("norm exponents must be >= 1, got {p}"));
        }
        match &self.ic {
            InitialCondition::Barenblatt { radius, t0 } if !(*radius > 0.0 && *t0 > 0.0) => {
                config_err("barenblatt data needs positive ic.R and ic.t0")
            }
            InitialCondition::Gaussian { sigma, center, .. }
                if !(*sigma > 0.0) || center.len() != self.grid.d =>
            {
                config_err("gaussian data needs ic.sigma > 0 and a center with d entries")
            }
            InitialCondition::SignedPair { sigma, .. } if !(*sigma > 0.0) => {
                config_err("signed_pair data needs ic.sigma > 0")
            }
            _ => Ok(()),
        }
    }

    /// Admissibility of `m` for the decay theory; violations are reported, not rejected.
    pub fn warnings(&self) -> Vec<String> {
        let d = self.grid.d as f64;
        let (bound, text) = if self.alpha <= 1.0 {
            (1.0 + (1.0 - self.alpha) / d, "1 + (1 - alpha)/d")
        } else {
            (3.0 - 2.0 / self.alpha, "3 - 2/alpha")
        };
        if self.m > bound {
            Vec::new()
        } else {
            vec![format!(
                "m = {} does not exceed {text} = {bound}; decay estimates are not covered",
                self.m
            )]
        }
    }

    /// Column label of a norm exponent: `p2`, `p1.5`, `pinf`.
    pub fn norm_label(p: f64) -> String {
        if p.is_infinite() {
            "pinf".to_string()
        } else {
            format!("p{p}")
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_kv(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = pairs
            .keys()
            .find(|k| !KEYS.contains(&k.as_str()) && !IC_KEYS.contains(&k.as_str()))
        {
            return config_err(format!("unknown key '{k}'"));
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let num = |k: &str| -> Result<Option<f64>> {
            get(k)
                .map(|v| parse_real(v).ok_or_else(|| Error::Config(format!("key '{k}': cannot parse '{v}'"))))
                .transpose()
        };
        let need = |k: &str| -> Result<f64> {
            num(k)?.ok_or_else(|| Error::Config(format!("missing key '{k}'")))
        };
        let int = |k: &str| -> Result<usize> {
            let v = get(k).ok_or_else(|| Error::Config(format!("missing key '{k}'")))?;
            v.parse()
                .map_err(|_| Error::Config(format!("key '{k}': cannot parse '{v}' as an integer")))
        };
        let grid = Grid::new(int("d")?, int("n")?, need("l")?)
            .map_err(|e| Error::Config(e.to_string()))?;
        let t_end = need("t_end")?;
        let kind = get("ic.kind").ok_or_else(|| Error::Config("missing key 'ic.kind'".into()))?;
        let ic = match kind {
            "barenblatt" => {
                let t0 = num("ic.t0")?.unwrap_or(1.0);
                let radius = match (num("ic.R")?, num("ic.mass")?) {
                    (Some(r), None) => r,
                    (None, Some(mass)) => crate::barenblatt::radius_for_mass(
                        mass,
                        need("alpha")?,
                        need("m")?,
                        grid.d,
                    )
                    .map_err(|e| Error::Config(e.to_string()))?,
                    _ => return config_err("barenblatt data needs exactly one of ic.R, ic.mass"),
                };
                InitialCondition::Barenblatt { radius, t0 }
            }
            "gaussian" => InitialCondition::Gaussian {
                sigma: need("ic.sigma")?,
                amplitude: num("ic.amplitude")?.unwrap_or(1.0),
                center: match get("ic.center") {
                    Some(v) => parse_list(v).ok_or_else(|| Error::Config(format!("key 'ic.center': cannot parse '{v}'")))?,
                    None => vec![0.0; grid.d],
                },
            },
            "file" => InitialCondition::File {
                path: PathBuf::from(get("ic.path").ok_or_else(|| Error::Config("missing key 'ic.path'".into()))?),
            },
            "signed_pair" => InitialCondition::SignedPair {
                sigma: need("ic.sigma")?,
                amplitude: num("ic.amplitude")?.unwrap_or(1.0),
                separation: need("ic.separation")?,
                ratio: num("ic.ratio")?.unwrap_or(0.5),
            },
            other => return config_err(format!("unknown ic.kind '{other}'")),
        };
        let mut cfg = Self::new(need("alpha")?, need("m")?, grid, t_end, ic);
        if let Some(v) = num("delta")? {
            cfg.delta = v;
        }
        if let Some(v) = num("eps")? {
            cfg.eps = v;
        }
        if let Some(v) = num("cfl")? {
            cfg.cfl = v;
        }
        if let Some(v) = num("save_every")? {
            cfg.save_every = v;
        }
        if let Some(v) = get("p_list") {
            cfg.p_list = parse_list(v).ok_or_else(|| Error::Config(format!("key 'p_list': cannot parse '{v}'")))?;
        }
        cfg.scheme = match get("scheme") {
            None | Some("fv") => Scheme::FiniteVolume,
            Some("spectral") => Scheme::Spectral,
            Some(other) => return config_err(format!("unknown scheme '{other}'")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The flat form read by [`SolverConfig::parse_kv`].
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let g = self.grid;
        let list = |v: &[f64]| {
            v.iter()
                .map(|p| if p.is_infinite() { "inf".to_string() } else { format!("{p:e}") })
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(s, "d = {}\nn = {}\nl = {:e}", g.d, g.n, g.l);
        let _ = writeln!(s, "alpha = {:e}\nm = {:e}\ndelta = {:e}\neps = {:e}", self.alpha, self.m, self.delta, self.eps);
        let _ = writeln!(s, "t_end = {:e}\ncfl = {:e}\nsave_every = {:e}", self.t_end, self.cfl, self.save_every);
        let _ = writeln!(s, "p_list = {}", list(&self.p_list));
        let scheme = match self.scheme {
            Scheme::FiniteVolume => "fv",
            Scheme::Spectral => "spectral",
        };
        let _ = writeln!(s, "scheme = {scheme}");
        match &self.ic {
            InitialCondition::Barenblatt { radius, t0 } => {
                let _ = writeln!(s, "ic.kind = barenblatt\nic.R = {radius:e}\nic.t0 = {t0:e}");
            }
            InitialCondition::Gaussian { sigma, amplitude, center } => {
                let _ = writeln!(
                    s,
                    "ic.kind = gaussian\nic.sigma = {sigma:e}\nic.amplitude = {amplitude:e}\nic.center = {}",
                    list(center)
                );
            }
            InitialCondition::File { path } => {
                let _ = writeln!(s, "ic.kind = file\nic.path = {}", path.display());
            }
            InitialCondition::SignedPair { sigma, amplitude, separation, ratio } => {
                let _ = writeln!(
                    s,
                    "ic.kind = signed_pair\nic.sigma = {sigma:e}\nic.amplitude = {amplitude:e}\nic.separation = {separation:e}\nic.ratio = {ratio:e}"
                );
            }
        }
        s
    }
}

fn parse_real(v: &str) -> Option<f64> {
    match v.trim() {
        "inf" | "infinity" | "Inf" => Some(f64::INFINITY),
        t => t.parse().ok(),
    }
}

fn parse_list(v: &str) -> Option<Vec<f64>> {
    v.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(parse_real)
        .collect()
}
