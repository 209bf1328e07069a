use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use fracpme::evolve::{SolverConfig, Trajectory};
use fracpme::fracops::Field;
use fracpme::verify::ReportRow;

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create directory '{}'", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot write '{}'", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn write_diagnostics(path: &Path, tr: &Trajectory) -> Result<()> {
    let mut w = create(path)?;
    let norms: Vec<String> = tr.p_list.iter().map(|p| SolverConfig::norm_label(*p)).collect();
    writeln!(w, "t,mass,min,max,dt,{}", norms.join(","))?;
    for r in &tr.records {
        write!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.t, r.mass, r.min_u, r.max_u, r.dt_used)?;
        for v in &r.lp_norms {
            write!(w, ",{v:.16e}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Row-major samples with their coordinates.
pub fn write_field(path: &Path, f: &Field) -> Result<()> {
    let mut w = create(path)?;
    let g = f.grid;
    writeln!(w, "{}", if g.d == 1 { "x,u" } else { "x,y,u" })?;
    for (i, v) in f.values.iter().enumerate() {
        let x = g.point(i);
        for c in &x[..g.d] {
            write!(w, "{c:.16e},")?;
        }
        writeln!(w, "{v:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn snapshot_name(t: f64) -> String {
    format!("u_{t}.csv")
}

pub fn write_report(path: &Path, rows: &[ReportRow]) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{}", ReportRow::CSV_HEADER)?;
    for r in rows {
        writeln!(w, "{}", r.to_csv())?;
    }
    w.flush()?;
    Ok(())
}
