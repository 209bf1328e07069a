//! Parameter sweeps over a base configuration.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Result};
use fracpme::evolve::{run, SolverConfig, Trajectory};
use fracpme::fracops::Field;
use rayon::prelude::*;

use crate::output::create;

pub const AXES: &[&str] = &["alpha", "m", "delta", "eps", "n"];

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

/// Parses `name=v1,v2,...`; an empty list is allowed.
pub fn parse_axis(s: &str) -> Result<Axis> {
    let Some((name, list)) = s.split_once('=') else { bail!("axis '{s}' is not of the form name=v1,v2") };
    let name = name.trim();
    if !AXES.contains(&name) {
        bail!("unknown sweep axis '{name}' (expected one of {})", AXES.join(", "));
    }
    let values = list.split(',').map(str::trim).filter(|v| !v.is_empty()).map(String::from).collect();
    Ok(Axis { name: name.to_string(), values })
}

/// Cartesian product, last axis fastest.
pub fn points(axes: &[Axis]) -> Vec<Vec<String>> {
    axes.iter().fold(vec![Vec::new()], |acc, a| {
        acc.iter()
            .flat_map(|p| {
                a.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect()
    })
}

pub struct RunOutcome {
    pub point: Vec<String>,
    pub result: std::result::Result<Trajectory, String>,
}

pub fn run_all(base: &BTreeMap<String, String>, axes: &[Axis]) -> Vec<RunOutcome> {
    points(axes)
        .into_par_iter()
        .map(|point| {
            let mut pairs = base.clone();
            for (a, v) in axes.iter().zip(&point) {
                pairs.insert(a.name.clone(), v.clone());
            }
            let result = SolverConfig::from_pairs(&pairs)
                .and_then(|cfg| run(&cfg))
                .map_err(|e| e.to_string());
            RunOutcome { point, result }
        })
        .collect()
}

pub fn write_report(path: &Path, axes: &[Axis], runs: &[RunOutcome]) -> Result<()> {
    let mut w = create(path)?;
    let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    let mut header = vec!["run"];
    header.extend(&names);
    header.extend(["status", "steps", "mass_drift", "min_u", "worst_norm_increase", "final_mass", "final_pinf", "message"]);
    writeln!(w, "{}", header.join(","))?;
    for (i, r) in runs.iter().enumerate() {
        write!(w, "{i}")?;
        for v in &r.point {
            write!(w, ",{v}")?;
        }
        match &r.result {
            Ok(tr) => {
                let last = tr.records.last().expect("nonempty trajectory");
                let pinf = tr.p_list.iter().position(|p| p.is_infinite()).map_or(f64::NAN, |k| last.lp_norms[k]);
                let inc = tr.worst_norm_increase().into_iter().fold(f64::NEG_INFINITY, f64::max);
                writeln!(
                    w,
                    ",ok,{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},",
                    tr.steps,
                    tr.mass_drift(),
                    tr.min_value(),
                    inc,
                    last.mass,
                    pinf
                )?;
            }
            Err(msg) => writeln!(w, ",failed,,,,,,,\"{}\"", msg.replace('"', "'"))?,
        }
    }
    w.flush()?;
    Ok(())
}

/// L1 distance between final states; a finer grid is restricted to the
/// coarser one when the sizes divide.
fn l1_distance(a: &Field, b: &Field) -> Option<f64> {
    let (coarse, fine) = if a.grid.n <= b.grid.n { (a, b) } else { (b, a) };
    if coarse.grid.d != fine.grid.d || coarse.grid.l != fine.grid.l || fine.grid.n % coarse.grid.n != 0 {
        return None;
    }
    let r = fine.grid.n / coarse.grid.n;
    let n = coarse.grid.n;
    let sum: f64 = (0..coarse.grid.len())
        .map(|i| {
            let j = if coarse.grid.d == 1 { i * r } else { (i / n) * r * fine.grid.n + (i % n) * r };
            (coarse.values[i] - fine.values[j]).abs()
        })
        .sum();
    Some(sum * coarse.grid.cell_volume())
}

/// Distances between neighbours along each axis with the other coordinates held fixed.
pub fn write_limits(path: &Path, axes: &[Axis], runs: &[RunOutcome]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "axis,fixed,from,to,l1_distance")?;
    for (k, axis) in axes.iter().enumerate() {
        for (i, a) in runs.iter().enumerate() {
            for b in &runs[i + 1..] {
                let neighbours = a.point.iter().zip(&b.point).enumerate().all(|(j, (x, y))| (j == k) != (x == y))
                    && axis.values.iter().position(|v| *v == b.point[k])
                        == axis.values.iter().position(|v| *v == a.point[k]).map(|p| p + 1);
                if !neighbours {
                    continue;
                }
                let fixed: Vec<String> = axes
                    .iter()
                    .zip(&a.point)
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, (ax, v))| format!("{}={v}", ax.name))
                    .collect();
                let dist = match (&a.result, &b.result) {
                    (Ok(x), Ok(y)) => l1_distance(x.final_state(), y.final_state()),
                    _ => None,
                };
                let dist = dist.map_or("nan".to_string(), |d| format!("{d:.16e}"));
                writeln!(w, "{},{},{},{},{dist}", axis.name, fixed.join(";"), a.point[k], b.point[k])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
