//! Text formats: spectrum CSV, sweep CSV and `key=value` metadata sidecars.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::experiment::SweepResult;
use crate::scalar::Real;
use crate::spectrum::Spectrum;

pub const SPECTRUM_HEADER: &str = "c,probability";
pub const SWEEP_HEADER: &str = "magnitude,success_probability";

/// Seventeen significant digits: enough to round-trip an `f64`.
fn fmt_prob<T: Real>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

pub fn write_spectrum_csv<T: Real, W: Write>(spec: &Spectrum<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "{SPECTRUM_HEADER}")?;
    for (c, &p) in spec.values.iter().enumerate() {
        writeln!(out, "{c},{}", fmt_prob(p))?;
    }
    Ok(())
}

/// Per-outcome column next to a spectrum (e.g. ensemble standard deviations).
pub fn write_column_csv<T: Real, W: Write>(name: &str, values: &[T], mut out: W) -> io::Result<()> {
    writeln!(out, "c,{name}")?;
    for (c, &v) in values.iter().enumerate() {
        writeln!(out, "{c},{}", fmt_prob(v))?;
    }
    Ok(())
}

/// Parses the output of [`write_spectrum_csv`] back into `(c, P_c)` values.
pub fn read_spectrum_csv<R: BufRead>(input: R) -> Result<Vec<f64>> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?
        .unwrap_or_default();
    if header.trim() != SPECTRUM_HEADER {
        return Err(Error::InvalidArgument(format!("unexpected header '{header}'")));
    }
    let mut values = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let (c, p) = line
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("malformed row '{line}'")))?;
        let c: usize = c
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad index '{c}'")))?;
        if c != row {
            return Err(Error::InvalidArgument(format!("row {row} carries index {c}")));
        }
        let p: f64 = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad probability '{p}'")))?;
        values.push(p);
    }
    Ok(values)
}

/// `key=value` lines describing where a spectrum came from.
pub fn spectrum_metadata<T: Real>(spec: &Spectrum<T>) -> String {
    let inst = &spec.instance;
    let mut out = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("method", &spec.method);
    kv("q", &inst.q());
    kv("L", &inst.register_bits());
    kv("r", &inst.order());
    kv("l", &inst.offset());
    kv("support_count", &inst.support_count());
    kv("support_is_q_over_r", &inst.support_is_q_over_r());
    match inst.target() {
        Some((n, y)) => {
            kv("N", &n);
            kv("y", &y);
        }
        None => {
            kv("N", &"none");
            kv("y", &"none");
        }
    }
    kv("synthetic", &inst.is_synthetic());
    match &spec.model {
        Some(m) => {
            kv("model", &m.mode);
            kv("delta0", &m.delta0);
            kv("s_max", &m.s_max);
            kv("sigma0", &m.sigma0);
            kv("amplitude_errors", &m.include_amplitude_errors);
            kv("init_delta", &m.init_delta);
        }
        None => kv("model", &"none"),
    }
    match spec.realization_seed {
        Some(s) => kv("seed", &s),
        None => kv("seed", &"none"),
    }
    kv("normalized", &spec.normalized);
    kv("singular_fallbacks", &spec.singular_fallbacks.len());
    out
}

pub fn write_sweep_csv<T: Real, W: Write>(sweep: &SweepResult<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for (m, p) in sweep.magnitudes.iter().zip(&sweep.success_probs) {
        writeln!(out, "{},{}", m, fmt_prob(*p))?;
    }
    let threshold = sweep.threshold.map_or_else(|| "none".to_string(), |t| t.to_string());
    writeln!(
        out,
        "# threshold={threshold} eta={} baseline={}",
        sweep.eta,
        fmt_prob(sweep.baseline)
    )
}

pub fn sweep_metadata<T: Real>(sweep: &SweepResult<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode={}", sweep.mode);
    let _ = writeln!(out, "eta={}", sweep.eta);
    let _ = writeln!(out, "baseline={}", fmt_prob(sweep.baseline));
    let _ = writeln!(
        out,
        "threshold={}",
        sweep.threshold.map_or_else(|| "none".to_string(), |t| t.to_string())
    );
    let _ = writeln!(
        out,
        "threshold_rule=largest grid magnitude whose prefix keeps success >= eta*baseline"
    );
    let _ = writeln!(out, "realizations_requested={}", sweep.requested_realizations);
    let _ = writeln!(out, "realizations={}", sweep.realizations);
    if sweep.realizations != sweep.requested_realizations {
        let _ = writeln!(out, "note=deterministic model evaluated once per magnitude");
    }
    out
}
