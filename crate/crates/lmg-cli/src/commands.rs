//! Subcommand implementations: each run validates parameters, computes via
//! lmg-core, writes its data files and a manifest echoing the configuration.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use lmg_core::io::{self, OutputFormat, SpectrumGridRow};
use lmg_core::quench::prepare_fsb_via_bias;
use lmg_core::spectral::{self, default_bin_width};
use lmg_core::sweep::{Observables, SweepPlan};
use lmg_core::{
    build_hamiltonian, density_of_states, fit_entropy_scaling, run_sweep, semiclassics,
    InitialStateSpec, LmgError, ModelParams, QuenchOptions, Result,
};

use crate::{QuenchArgs, SemiclassicsArgs, SpectrumArgs, SweepArgs};

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

pub fn write_manifest(dir: &Path, manifest: &serde_json::Value) -> Result<()> {
    let mut w = create(dir, "manifest.json")?;
    io::write_json_value(&mut w, manifest)?;
    writeln!(w)?;
    Ok(())
}

fn ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<()> {
    let params_probe = ModelParams::new(args.n, args.h, args.eps)?;
    print_warnings(&params_probe.warnings());
    ensure_dir(&args.output.out)?;

    // Spectrum over the h grid, parity-tagged.
    let mut rows = Vec::new();
    for &h in &args.grid.0 {
        let params = ModelParams::new(args.n, h, args.eps)?;
        let tagged = spectral::eigenvalues_with_parity(&build_hamiltonian(&params))?;
        rows.extend(
            tagged
                .into_iter()
                .enumerate()
                .map(|(index, (energy, parity))| SpectrumGridRow {
                    h,
                    index,
                    energy,
                    parity: parity.map_or(0, |p| p.sign()),
                }),
        );
    }
    let spectrum_name = format!("spectrum.{}", ext(args.output.format));
    let mut w = create(&args.output.out, &spectrum_name)?;
    io::write_spectrum_grid(&mut w, &rows, args.output.format)?;

    // Density of states at the fixed field.
    let values = spectral::eigenvalues_only(&build_hamiltonian(&params_probe))?;
    let width = args.bin_width.unwrap_or_else(|| default_bin_width(&values));
    let dos = density_of_states(&values, width)?;
    let dos_name = format!("dos.{}", ext(args.output.format));
    let mut w = create(&args.output.out, &dos_name)?;
    io::write_dos(&mut w, &dos, args.output.format)?;

    write_manifest(
        &args.output.out,
        &serde_json::json!({
            "command": "spectrum",
            "version": env!("CARGO_PKG_VERSION"),
            "params": {
                "n": args.n, "eps": args.eps, "h": args.h,
                "grid": {"start": args.grid.0.first(), "end": args.grid.0.last(), "points": args.grid.0.len()},
                "bin_width": width,
                "format": ext(args.output.format),
            },
            "outputs": [spectrum_name, dos_name],
        }),
    )
}

/// Prepare the initial state for a CLI quench: a nonzero bias selects the
/// biased-ground-state route for fsb kinds (the sign of eps must match the
/// requested branch: eps > 0 yields fsb-, eps < 0 yields fsb+).
fn prepare_cli_state(
    params: &ModelParams,
    spec: &InitialStateSpec,
) -> Result<lmg_core::PreparedState> {
    if params.bias != 0.0 {
        match spec {
            InitialStateSpec::FsbMinus if params.bias > 0.0 => return prepare_fsb_via_bias(params),
            InitialStateSpec::FsbPlus if params.bias < 0.0 => return prepare_fsb_via_bias(params),
            InitialStateSpec::FsbPlus | InitialStateSpec::FsbMinus => {
                return Err(LmgError::StatePrep(format!(
                    "state {} with eps = {} selects the wrong branch: the biased \
                     ground state has sign(<Sx>) = -sign(eps)",
                    spec.tag(),
                    params.bias
                )))
            }
            _ => {}
        }
    }
    lmg_core::prepare_initial(params, spec)
}

pub fn cmd_quench(args: &QuenchArgs) -> Result<()> {
    let params = ModelParams::new(args.n, args.hi, args.eps)?;
    print_warnings(&params.warnings());
    ModelParams::new(args.n, args.hf, args.eps)?;
    ensure_dir(&args.output.out)?;

    let state = prepare_cli_state(&params, &args.state)?;
    print_warnings(&state.warnings);
    let q = lmg_core::quench::quench_prepared(&params, &state, args.hf, &QuenchOptions::default())?;

    let mut w = create(&args.output.out, "quench.json")?;
    io::write_quench_json(&mut w, &q)?;
    let work_name = format!("work.{}", ext(args.output.format));
    let mut w = create(&args.output.out, &work_name)?;
    io::write_work(&mut w, &q.distribution, args.output.format)?;
    let survival_name = format!("survival.{}", ext(args.output.format));
    let mut w = create(&args.output.out, &survival_name)?;
    io::write_survival(&mut w, &q.survival, args.output.format)?;

    write_manifest(
        &args.output.out,
        &serde_json::json!({
            "command": "quench",
            "version": env!("CARGO_PKG_VERSION"),
            "params": {
                "n": args.n, "hi": args.hi, "hf": args.hf, "eps": args.eps,
                "state": state.kind,
                "format": ext(args.output.format),
            },
            "outputs": ["quench.json", work_name, survival_name],
        }),
    )
}

pub fn cmd_sweep(args: &SweepArgs, with_scaling: bool) -> Result<()> {
    let grid = match &args.grid {
        Some(g) => g.0.clone(),
        None => SweepPlan::default_grid(args.hi, (args.hi - 0.2).max(0.0), args.hi + 0.6),
    };
    let plan = SweepPlan {
        h_i: args.hi,
        h_f_grid: grid,
        sizes: args.sizes.clone(),
        state_kinds: args.states.clone(),
        epsilon: args.eps,
        observables: Observables {
            survival_ceiling: args.survival,
            ..Observables::default()
        },
        quench: QuenchOptions::default(),
    };
    ensure_dir(&args.output.out)?;
    let rows = run_sweep(&plan)?;

    let sweep_name = format!("sweep.{}", ext(args.output.format));
    let mut w = create(&args.output.out, &sweep_name)?;
    io::write_sweep(&mut w, &rows, args.output.format)?;
    let mut outputs = vec![sweep_name];

    if with_scaling {
        let fit = fit_entropy_scaling(&rows)?;
        let mut w = create(&args.output.out, "scaling.json")?;
        io::write_scaling_json(&mut w, &fit)?;
        outputs.push("scaling.json".into());
    }

    write_manifest(
        &args.output.out,
        &serde_json::json!({
            "command": if with_scaling { "scaling" } else { "sweep" },
            "version": env!("CARGO_PKG_VERSION"),
            "params": {
                "hi": args.hi, "eps": args.eps,
                "sizes": args.sizes,
                "grid": {"start": plan.h_f_grid.first(), "end": plan.h_f_grid.last(), "points": plan.h_f_grid.len()},
                "states": args.states.iter().map(|s| s.tag()).collect::<Vec<_>>(),
                "survival": args.survival,
                "format": ext(args.output.format),
            },
            "outputs": outputs,
        }),
    )
}

pub fn cmd_semiclassics(args: &SemiclassicsArgs) -> Result<()> {
    ModelParams::new(args.n, args.hi.max(0.0), 0.0)?;
    if args.hi < 0.0 || args.hf < 0.0 {
        return Err(LmgError::Domain("fields must be >= 0".into()));
    }
    let alpha = semiclassics::alpha_gs(args.hi)?;
    let e_q = semiclassics::quenched_energy_sc(args.hi, args.hf)?;
    let hfc = semiclassics::critical_field(args.hi).ok();
    let e_c = semiclassics::critical_energy(args.hf);
    let doc = serde_json::json!({
        "hi": args.hi,
        "hf": args.hf,
        "n": args.n,
        "alpha_gs": alpha,
        "quenched_energy": e_q,
        "quenched_energy_spectrum_units": semiclassics::to_spectrum_units(e_q, args.hf, args.n),
        "critical_field": hfc,
        "critical_energy": e_c,
        "critical_energy_spectrum_units": semiclassics::to_spectrum_units(e_c, args.hf, args.n),
    });
    match &args.out {
        None => {
            println!("{}", serde_json::to_string_pretty(&doc).map_err(json_err)?);
            Ok(())
        }
        Some(dir) => {
            ensure_dir(dir)?;
            let mut w = create(dir, "semiclassics.json")?;
            io::write_json_value(&mut w, &doc)?;
            write_manifest(
                dir,
                &serde_json::json!({
                    "command": "semiclassics",
                    "version": env!("CARGO_PKG_VERSION"),
                    "params": {"hi": args.hi, "hf": args.hf, "n": args.n},
                    "outputs": ["semiclassics.json"],
                }),
            )
        }
    }
}

fn json_err(e: serde_json::Error) -> LmgError {
    LmgError::Io(std::io::Error::other(e))
}

/// Which files a figure panel needs from a quench run.
#[derive(Clone, Copy)]
pub enum QuenchDump {
    Survival,
    Work,
}

/// Helper shared with `figures`: run one quench and dump the requested
/// series (plus the full result document) under a name suffix.
pub fn dump_quench(
    dir: &Path,
    params: &ModelParams,
    spec: &InitialStateSpec,
    h_f: f64,
    suffix: &str,
    format: OutputFormat,
    parts: QuenchDump,
) -> Result<Vec<String>> {
    let q = lmg_core::run_quench(params, spec, h_f, &QuenchOptions::default())?;
    let mut outputs = Vec::new();
    match parts {
        QuenchDump::Survival => {
            let name = format!("survival_{suffix}.{}", ext(format));
            let mut w = create(dir, &name)?;
            io::write_survival(&mut w, &q.survival, format)?;
            outputs.push(name);
        }
        QuenchDump::Work => {
            let name = format!("work_{suffix}.{}", ext(format));
            let mut w = create(dir, &name)?;
            io::write_work(&mut w, &q.distribution, format)?;
            outputs.push(name);
        }
    }
    let json_name = format!("quench_{suffix}.json");
    let mut w = create(dir, &json_name)?;
    io::write_quench_json(&mut w, &q)?;
    outputs.push(json_name);
    Ok(outputs)
}
