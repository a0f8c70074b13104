//! On-disk formats: binary f snapshots with a text header, the companion
//! per-node field table, and the diagnostics time series.
//!
//! Snapshot layout: a `qrvm-snapshot 1` magic line, `key = value` header
//! lines (scheme, t, n_x, n_p, p_max), a `---` separator, then the payload:
//! f over physical cells as little-endian 64-bit floats, row-major in x
//! then p (index = i * n_p + j), exactly n_x * n_p * 8 bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{QrvmError, Result};
use crate::grid::DistributionField;

pub const SNAPSHOT_MAGIC: &str = "qrvm-snapshot 1";

/// A snapshot read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub scheme: String,
    pub t: f64,
    pub n_x: usize,
    pub n_p: usize,
    pub p_max: f64,
    /// Row-major in x then p: value of (x_i, p_j) at index i * n_p + j.
    pub data: Vec<f64>,
}

impl Snapshot {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_p + j]
    }
}

/// Writes one snapshot file.
pub fn write_snapshot(path: &Path, scheme: &str, t: f64, f: &DistributionField) -> Result<()> {
    let grid = f.grid();
    let file = File::create(path).map_err(|e| QrvmError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let header = format!(
        "{SNAPSHOT_MAGIC}\nscheme = {scheme}\nt = {t:e}\nn_x = {}\nn_p = {}\np_max = {:e}\n---\n",
        grid.n_x, grid.n_p, grid.p_max
    );
    w.write_all(header.as_bytes()).map_err(|e| QrvmError::io(path, e))?;
    let mut row = Vec::with_capacity(grid.n_p * 8);
    for i in 0..grid.n_x {
        row.clear();
        for j in 0..grid.n_p {
            row.extend_from_slice(&f.get(i as isize, j as isize).to_le_bytes());
        }
        w.write_all(&row).map_err(|e| QrvmError::io(path, e))?;
    }
    w.flush().map_err(|e| QrvmError::io(path, e))?;
    Ok(())
}

/// Reads a snapshot back, bit-exact.
pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let file = File::open(path).map_err(|e| QrvmError::io(path, e))?;
    let mut r = BufReader::new(file);

    let mut scheme = None;
    let mut t = None;
    let mut n_x = None;
    let mut n_p = None;
    let mut p_max = None;

    let mut first = String::new();
    r.read_line(&mut first).map_err(|e| QrvmError::io(path, e))?;
    if first.trim_end() != SNAPSHOT_MAGIC {
        return Err(QrvmError::SnapshotFormat(format!(
            "bad magic line `{}`",
            first.trim_end()
        )));
    }
    loop {
        let mut line = String::new();
        let read = r.read_line(&mut line).map_err(|e| QrvmError::io(path, e))?;
        if read == 0 {
            return Err(QrvmError::SnapshotFormat("missing `---` separator".into()));
        }
        let line = line.trim_end();
        if line == "---" {
            break;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| QrvmError::SnapshotFormat(format!("bad header line `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad =
            |k: &str| QrvmError::SnapshotFormat(format!("bad value for `{k}`"));
        match key {
            "scheme" => scheme = Some(value.to_string()),
            "t" => t = Some(value.parse::<f64>().map_err(|_| bad("t"))?),
            "n_x" => n_x = Some(value.parse::<usize>().map_err(|_| bad("n_x"))?),
            "n_p" => n_p = Some(value.parse::<usize>().map_err(|_| bad("n_p"))?),
            "p_max" => p_max = Some(value.parse::<f64>().map_err(|_| bad("p_max"))?),
            _ => return Err(QrvmError::SnapshotFormat(format!("unknown header key `{key}`"))),
        }
    }
    let missing = |k: &str| QrvmError::SnapshotFormat(format!("missing header key `{k}`"));
    let scheme = scheme.ok_or_else(|| missing("scheme"))?;
    let t = t.ok_or_else(|| missing("t"))?;
    let n_x = n_x.ok_or_else(|| missing("n_x"))?;
    let n_p = n_p.ok_or_else(|| missing("n_p"))?;
    let p_max = p_max.ok_or_else(|| missing("p_max"))?;

    let mut payload = Vec::new();
    r.read_to_end(&mut payload).map_err(|e| QrvmError::io(path, e))?;
    let expect = n_x * n_p * 8;
    if payload.len() != expect {
        return Err(QrvmError::SnapshotFormat(format!(
            "payload length {} does not match n_x * n_p * 8 = {expect}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Snapshot { scheme, t, n_x, n_p, p_max, data })
}

/// Writes the companion per-x-node field table (comma-separated columns).
pub fn write_fields_csv(
    path: &Path,
    dx: f64,
    rho: &[f64],
    e_long: &[f64],
    a: &[f64],
    b_nodal: &[f64],
    e_perp: &[f64],
) -> Result<()> {
    let file = File::create(path).map_err(|e| QrvmError::io(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "x,rho,e_long,a,b,e_perp").map_err(|e| QrvmError::io(path, e))?;
    for i in 0..rho.len() {
        writeln!(
            w,
            "{:e},{:e},{:e},{:e},{:e},{:e}",
            i as f64 * dx,
            rho[i],
            e_long[i],
            a[i],
            b_nodal[i],
            e_perp[i]
        )
        .map_err(|e| QrvmError::io(path, e))?;
    }
    w.flush().map_err(|e| QrvmError::io(path, e))?;
    Ok(())
}

/// Streaming writer for diagnostics.csv.
pub struct DiagnosticsWriter {
    w: BufWriter<File>,
    path: std::path::PathBuf,
    pub rows: usize,
}

impl DiagnosticsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| QrvmError::io(path, e))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "t,mass,l2,wtk,wtp,wlk,wlp,w_total,rel_mass,rel_l2,rel_energy")
            .map_err(|e| QrvmError::io(path, e))?;
        Ok(DiagnosticsWriter { w, path: path.to_path_buf(), rows: 0 })
    }

    pub fn push(&mut self, r: &DiagnosticsRecord) -> Result<()> {
        writeln!(
            self.w,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.t, r.mass, r.l2, r.wtk, r.wtp, r.wlk, r.wlp, r.w_total, r.rel_mass, r.rel_l2,
            r.rel_energy
        )
        .map_err(|e| QrvmError::io(&self.path, e))?;
        self.rows += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.w.flush().map_err(|e| QrvmError::io(&self.path, e))
    }
}
