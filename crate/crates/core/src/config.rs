//! Run configuration: a line-oriented `key = value` format with `#`
//! comments. Unknown keys are hard errors; missing physical keys fall back
//! to the reference parameter set.

use std::collections::HashSet;
use std::path::PathBuf;

use crate::error::{QrvmError, Result};
use crate::init::{default_params, PhysicalParams};
use crate::integrators::Scheme;

/// Time-step control, exactly one per scheme family: a CFL number for
/// rk-fdweno-rk, a fixed dt for the leap-frog couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeControl {
    Cfl(f64),
    FixedDt(f64),
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub n_x: usize,
    pub n_p: usize,
    pub t_max: f64,
    pub time: TimeControl,
    pub snapshot_every: f64,
    pub diag_every: u64,
    pub output_dir: PathBuf,
    pub params: PhysicalParams,
}

impl SimConfig {
    pub fn dx(&self) -> f64 {
        1.0 / self.n_x as f64
    }

    pub fn cfl(&self) -> f64 {
        match self.time {
            TimeControl::Cfl(c) => c,
            TimeControl::FixedDt(_) => 0.9,
        }
    }

    pub fn fixed_dt(&self) -> Option<f64> {
        match self.time {
            TimeControl::Cfl(_) => None,
            TimeControl::FixedDt(dt) => Some(dt),
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> QrvmError {
    QrvmError::Config { line, msg: msg.into() }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>().map_err(|_| err(line, format!("{key}: expected a number, got `{v}`")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| err(line, format!("{key}: expected a nonnegative integer, got `{v}`")))
}

fn parse_i32(line: usize, key: &str, v: &str) -> Result<i32> {
    v.parse::<i32>().map_err(|_| err(line, format!("{key}: expected an integer, got `{v}`")))
}

/// Parses the `key = value` configuration text.
pub fn parse_config(source: &str) -> Result<SimConfig> {
    let mut scheme: Option<(Scheme, usize)> = None;
    let mut n_x: Option<usize> = None;
    let mut n_p: Option<usize> = None;
    let mut t_max: Option<f64> = None;
    let mut cfl: Option<(f64, usize)> = None;
    let mut dt: Option<(f64, usize)> = None;
    let mut snapshot_every: Option<(f64, usize)> = None;
    let mut diag_every: Option<(u64, usize)> = None;
    let mut output_dir: Option<PathBuf> = None;
    let mut params = default_params();
    let mut omega0_override: Option<f64> = None;
    let mut a0_override: Option<f64> = None;
    let mut seen: HashSet<String> = HashSet::new();

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(err(line_no, format!("{key}: missing value")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(line_no, format!("duplicate key `{key}`")));
        }
        match key {
            "scheme" => {
                let s = Scheme::parse(value).ok_or_else(|| {
                    err(
                        line_no,
                        format!(
                            "unknown scheme `{value}` (expected one of rk-fdweno-rk, \
                             rk-fdweno-lf, ts-dslweno-lf, ts-cslweno-lf)"
                        ),
                    )
                })?;
                scheme = Some((s, line_no));
            }
            "n_x" => n_x = Some(parse_usize(line_no, key, value)?),
            "n_p" => n_p = Some(parse_usize(line_no, key, value)?),
            "t_max" => t_max = Some(parse_f64(line_no, key, value)?),
            "cfl" => cfl = Some((parse_f64(line_no, key, value)?, line_no)),
            "dt" => dt = Some((parse_f64(line_no, key, value)?, line_no)),
            "snapshot_every" => snapshot_every = Some((parse_f64(line_no, key, value)?, line_no)),
            "diag_every" => {
                let v = parse_usize(line_no, key, value)? as u64;
                diag_every = Some((v, line_no));
            }
            "output_dir" => output_dir = Some(PathBuf::from(value)),
            "eta" => params.eta = parse_f64(line_no, key, value)?,
            "k_pump" => params.k_pump = parse_i32(line_no, key, value)?,
            "k_pla" => params.k_pla = parse_i32(line_no, key, value)?,
            "omega0" => omega0_override = Some(parse_f64(line_no, key, value)?),
            "a0" => a0_override = Some(parse_f64(line_no, key, value)?),
            "alpha" => params.alpha = parse_f64(line_no, key, value)?,
            "v_cold" => params.v_cold = parse_f64(line_no, key, value)?,
            "v_hot" => params.v_hot = parse_f64(line_no, key, value)?,
            "epsilon" => params.epsilon = parse_f64(line_no, key, value)?,
            "p_max" => params.p_max = parse_f64(line_no, key, value)?,
            _ => return Err(err(line_no, format!("unknown key `{key}`"))),
        }
    }

    let (scheme, _) = scheme.ok_or_else(|| err(0, "scheme missing"))?;
    let n_x = n_x.ok_or_else(|| err(0, "n_x missing"))?;
    let n_p = n_p.ok_or_else(|| err(0, "n_p missing"))?;
    let t_max = t_max.ok_or_else(|| err(0, "t_max missing"))?;

    if n_x < 8 || n_p < 8 {
        return Err(err(0, format!("mesh too small: {n_x} x {n_p} (need at least 8 x 8)")));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(err(0, format!("t_max must be nonnegative, got {t_max}")));
    }

    // derived constants recomputed from overrides unless pinned explicitly
    params.omega0 = omega0_override.unwrap_or_else(|| params.derived_omega0());
    params.a0 = a0_override.unwrap_or(2.5 / params.omega0);
    params.validate().map_err(|e| err(0, e.to_string()))?;

    // exactly one of cfl/dt per scheme family
    let dx = 1.0 / n_x as f64;
    let time = if scheme.uses_cfl() {
        if let Some((_, line)) = dt {
            return Err(err(line, format!("dt not applicable to {scheme}; use cfl")));
        }
        let c = cfl.map(|(v, _)| v).unwrap_or(0.9);
        if !(c > 0.0 && c < 1.0) {
            return Err(err(cfl.map(|(_, l)| l).unwrap_or(0), format!("cfl = {c} outside (0, 1)")));
        }
        TimeControl::Cfl(c)
    } else {
        if let Some((_, line)) = cfl {
            return Err(err(line, format!("cfl not applicable to {scheme}; use dt")));
        }
        let v = dt.map(|(v, _)| v).unwrap_or(0.5 * dx);
        if !(v > 0.0) || !v.is_finite() {
            return Err(err(dt.map(|(_, l)| l).unwrap_or(0), format!("dt must be positive, got {v}")));
        }
        if v >= dx {
            return Err(err(
                dt.map(|(_, l)| l).unwrap_or(0),
                format!("dt = {v} must stay below dx = {dx} for the leap-frog Maxwell step"),
            ));
        }
        TimeControl::FixedDt(v)
    };

    let snapshot_every = match snapshot_every {
        Some((v, line)) => {
            if !(v > 0.0) {
                return Err(err(line, format!("snapshot_every must be positive, got {v}")));
            }
            v
        }
        None => {
            if t_max > 0.0 {
                t_max
            } else {
                1.0
            }
        }
    };
    let diag_every = match diag_every {
        Some((0, line)) => return Err(err(line, "diag_every must be at least 1")),
        Some((v, _)) => v,
        None => 1,
    };

    Ok(SimConfig {
        scheme,
        n_x,
        n_p,
        t_max,
        time,
        snapshot_every,
        diag_every,
        output_dir: output_dir.unwrap_or_else(|| PathBuf::from("out")),
        params,
    })
}
