use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use shor_noise::errmodel::RngState;
use shor_noise::experiment::realization_seed;
use shor_noise::io::{spectrum_metadata, sweep_metadata, write_column_csv, write_spectrum_csv, write_sweep_csv};
use shor_noise::numth::{factors_from_order, recover_order, FactorOutcome};
use shor_noise::qcircuit::{prepare_period_state, qft_noisy, GateErrorPlan};
use shor_noise::{
    circuit_spectrum, combined_spectrum, ensemble_spectrum, noiseless_spectrum, peak_report,
    systematic_spectrum_closed_form, threshold_sweep, ErrorMode, Spectrum64,
};
use thiserror::Error;

use crate::config::{Command, RunConfig, SpectrumMethod};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Sim(#[from] shor_noise::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), RunError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

/// Writes the main CSV to `--out` (plus the `.meta` sidecar), or to `stdout`
/// when no path was given.
fn emit(
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    csv: impl FnOnce(&mut dyn Write) -> io::Result<()>,
    meta: String,
) -> Result<(), RunError> {
    match &cfg.out {
        Some(path) => {
            write_file(path, |w| csv(w))?;
            let meta_path = sidecar_path(path, ".meta");
            write_file(&meta_path, |w| {
                writeln!(w, "command={}", cfg.command.as_str())?;
                w.write_all(meta.as_bytes())
            })
        }
        None => csv(stdout).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn peak_summary(spec: &Spectrum64, cfg: &RunConfig) -> Result<String, RunError> {
    let report = peak_report(spec, cfg.peak_floor)?;
    Ok(format!(
        "peaks={} shifts={}",
        join(&report.positions()),
        join(&report.shifts)
    ))
}

fn finish_spectrum(cfg: &RunConfig, spec: Spectrum64) -> Spectrum64 {
    if cfg.normalize {
        spec.normalized()
    } else {
        spec
    }
}

fn run_spectrum(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, RunError> {
    let inst = &cfg.instance;
    let spec = match (cfg.method, cfg.model.mode) {
        (SpectrumMethod::Closed, _) => systematic_spectrum_closed_form(inst, cfg.model.delta0),
        (SpectrumMethod::Auto, ErrorMode::None)
            if cfg.model.init_delta == 0.0 && !cfg.model.include_amplitude_errors =>
        {
            noiseless_spectrum(inst)
        }
        _ => combined_spectrum(inst, &cfg.model, cfg.seed)?,
    };
    let spec = finish_spectrum(cfg, spec);
    let meta = spectrum_metadata(&spec);
    emit(cfg, stdout, |w| write_spectrum_csv(&spec, w), meta)?;
    Ok(format!(
        "method={} q={} {}",
        spec.method,
        spec.q(),
        peak_summary(&spec, cfg)?
    ))
}

fn run_circuit(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, RunError> {
    let spec = finish_spectrum(cfg, circuit_spectrum(&cfg.instance, &cfg.model, cfg.seed)?);
    let meta = spectrum_metadata(&spec);
    emit(cfg, stdout, |w| write_spectrum_csv(&spec, w), meta)?;
    Ok(format!("method=circuit q={} {}", spec.q(), peak_summary(&spec, cfg)?))
}

fn run_ensemble(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, RunError> {
    let ens = ensemble_spectrum(&cfg.instance, &cfg.model, cfg.realizations, cfg.seed)?;
    let mean = finish_spectrum(cfg, ens.mean.clone());
    let mut meta = spectrum_metadata(&mean);
    meta.push_str(&format!(
        "realizations_requested={}\nrealizations={}\n",
        ens.requested_realizations, ens.realizations
    ));
    if let Some(path) = &cfg.out {
        let std_path = sidecar_path(path, ".std.csv");
        write_file(&std_path, |w| write_column_csv("std", &ens.std_dev, w))?;
    }
    emit(cfg, stdout, |w| write_spectrum_csv(&mean, w), meta)?;
    Ok(format!(
        "method=ensemble q={} realizations={} {}",
        mean.q(),
        ens.realizations,
        peak_summary(&mean, cfg)?
    ))
}

fn run_sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, RunError> {
    let sweep = threshold_sweep(
        &cfg.instance,
        &cfg.model,
        &cfg.magnitudes,
        cfg.realizations,
        cfg.eta,
        cfg.seed,
        cfg.multiplier_bound,
    )?;
    let mut meta = sweep_metadata(&sweep);
    meta.push_str(&format!(
        "q={}\nr={}\nmultiplier_bound={}\nseed={}\n",
        cfg.instance.q(),
        cfg.instance.order(),
        cfg.multiplier_bound,
        cfg.seed
    ));
    emit(cfg, stdout, |w| write_sweep_csv(&sweep, w), meta)?;
    let threshold = sweep.threshold.map_or_else(|| "none".into(), |t| t.to_string());
    Ok(format!(
        "threshold={threshold} eta={} baseline={}",
        sweep.eta, sweep.baseline
    ))
}

struct Shot {
    offset: u64,
    outcome: u64,
    recovered: Option<u64>,
}

fn run_factor(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, RunError> {
    let inst = &cfg.instance;
    let (n, y) = inst.target().ok_or(shor_noise::Error::NoFactoringTarget)?;
    let (q, r) = (inst.q(), inst.order());
    let mut shots = Vec::with_capacity(cfg.shots);
    for i in 0..cfg.shots {
        let mut rng = RngState::from_seed(realization_seed(cfg.seed, i as u64));
        // Measuring y^a mod N on a uniform first register leaves a = l (mod r)
        // with probability M_l / q.
        let offset = rng.below(q) % r;
        let shot_inst = inst.with_offset(offset)?;
        let mut state = prepare_period_state(&shot_inst, cfg.model.init_delta)?;
        let plan = GateErrorPlan::sample(&cfg.model, inst.register_bits(), rng.next_u64())?;
        qft_noisy(&mut state, &plan)?;
        let outcome = state.measure_all(&mut rng)? as u64;
        let recovered = recover_order(outcome, q, n, y, cfg.multiplier_bound)?;
        shots.push(Shot {
            offset,
            outcome,
            recovered,
        });
    }

    let hits = shots.iter().filter(|s| s.recovered == Some(r)).count();
    let best = shots.iter().filter_map(|s| s.recovered).min();

    let meta = format!(
        "N={n}\ny={y}\nq={q}\nr={r}\nshots={}\nseed={}\nmultiplier_bound={}\nmodel={}\n",
        cfg.shots,
        cfg.seed,
        cfg.multiplier_bound,
        cfg.model.describe()
    );
    emit(
        cfg,
        stdout,
        |w| {
            writeln!(w, "shot,l,c,recovered")?;
            for (i, s) in shots.iter().enumerate() {
                let rec = s.recovered.map_or_else(|| "none".into(), |x| x.to_string());
                writeln!(w, "{i},{},{},{rec}", s.offset, s.outcome)?;
            }
            Ok(())
        },
        meta,
    )?;

    let head = format!("N={n} y={y} shots={} recovering_shots={hits}", cfg.shots);
    Ok(match best {
        None => format!("{head} result=order not recovered"),
        Some(order) => match factors_from_order(n, y, order)? {
            FactorOutcome::Factors(a, b) => format!("{head} r={order} factors={a},{b}"),
            FactorOutcome::Retry => format!("{head} r={order} result=retry with new y"),
        },
    })
}

/// Executes a validated configuration and returns the one-line summary.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<String, RunError> {
    match cfg.command {
        Command::Spectrum => run_spectrum(cfg, stdout),
        Command::Circuit => run_circuit(cfg, stdout),
        Command::Ensemble => run_ensemble(cfg, stdout),
        Command::Sweep => run_sweep(cfg, stdout),
        Command::Factor => run_factor(cfg, stdout),
    }
}
