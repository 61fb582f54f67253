//! Bundled figure presets: canned parameter sets emitting the data series
//! behind the standard survey plots, plus a gnuplot script per panel.

use std::io::Write;
use std::path::Path;

use lmg_core::io::{self, OutputFormat, SpectrumGridRow};
use lmg_core::spectral;
use lmg_core::sweep::{Observables, SweepPlan};
use lmg_core::{
    build_hamiltonian, fit_entropy_scaling, run_sweep, InitialStateSpec, LmgError, ModelParams,
    QuenchOptions, Result,
};
use num_complex::Complex64;

use crate::commands::{create, dump_quench, ensure_dir, write_manifest, QuenchDump};
use crate::ReproduceArgs;

fn fstr(x: f64) -> String {
    format!("{x}")
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| lo + step * i as f64).collect()
}

fn superposition_2_1() -> InitialStateSpec {
    InitialStateSpec::Superposition {
        c_plus: Complex64::new(2.0 / 5.0f64.sqrt(), 0.0),
        c_minus: Complex64::new(1.0 / 5.0f64.sqrt(), 0.0),
    }
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> Result<()> {
    let id = args.figure.as_str();
    let panels: Vec<&str> = match id {
        "fig1" => vec!["fig1"],
        "fig2" => vec!["fig2a", "fig2b", "fig2c"],
        "fig3" => vec!["fig3a", "fig3b", "fig3c"],
        "fig4" => vec!["fig4a", "fig4b"],
        "fig5" => vec!["fig5a", "fig5b"],
        "fig6" => vec!["fig6a", "fig6b", "fig6c"],
        "fig2a" | "fig2b" | "fig2c" | "fig3a" | "fig3b" | "fig3c" | "fig4a" | "fig4b" | "fig5a"
        | "fig5b" | "fig6a" | "fig6b" | "fig6c" => vec![id],
        other => return Err(LmgError::UnknownFigure(other.to_string())),
    };
    ensure_dir(&args.output.out)?;
    let mut outputs = Vec::new();
    for panel in &panels {
        outputs.extend(emit_panel(panel, &args.output.out, args.output.format)?);
    }
    write_manifest(
        &args.output.out,
        &serde_json::json!({
            "command": "reproduce",
            "version": env!("CARGO_PKG_VERSION"),
            "params": {"figure": id, "format": match args.output.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }},
            "outputs": outputs,
        }),
    )
}

fn emit_panel(panel: &str, dir: &Path, format: OutputFormat) -> Result<Vec<String>> {
    match panel {
        "fig1" => fig1(dir, format),
        "fig2a" | "fig2b" => quench_triplet(
            dir,
            format,
            panel,
            0.5,
            InitialStateSpec::SymmetricGround,
            &[0.6, 0.75, 0.9],
        ),
        "fig2c" => entropy_ladder(
            dir,
            format,
            "fig2c",
            0.5,
            InitialStateSpec::SymmetricGround,
            grid(0.55, 0.95, 0.01),
            true,
        ),
        "fig3a" | "fig3b" => quench_triplet(
            dir,
            format,
            panel,
            0.5,
            InitialStateSpec::FsbPlus,
            &[0.6, 0.75, 0.9],
        ),
        "fig3c" => entropy_ladder(
            dir,
            format,
            "fig3c",
            0.5,
            InitialStateSpec::FsbPlus,
            grid(0.55, 0.95, 0.01),
            false,
        ),
        "fig4a" => fig4a(dir, format),
        "fig4b" => fig4b(dir, format),
        "fig5a" | "fig5b" => quench_triplet(
            dir,
            format,
            panel,
            0.5,
            InitialStateSpec::SymmetricExcited { level: 1 },
            if panel == "fig5a" {
                &[0.6, 0.75, 0.9]
            } else {
                &[0.75]
            },
        ),
        "fig6a" | "fig6b" => quench_triplet(
            dir,
            format,
            panel,
            1.5,
            InitialStateSpec::SymmetricGround,
            &[1.2, 1.0, 0.5],
        ),
        "fig6c" => entropy_ladder(
            dir,
            format,
            "fig6c",
            1.5,
            InitialStateSpec::SymmetricGround,
            grid(0.6, 1.4, 0.02),
            false,
        ),
        other => Err(LmgError::UnknownFigure(other.to_string())),
    }
}

/// Spectrum vs h for N = 100 plus the N = 500 zoom near the critical energy.
fn fig1(dir: &Path, format: OutputFormat) -> Result<Vec<String>> {
    let mut outputs = Vec::new();
    for (n, hs, name) in [
        (100usize, grid(0.0, 1.5, 0.01), "fig1_spectrum_n100"),
        (500, grid(0.0, 1.0, 0.01), "fig1_spectrum_n500"),
    ] {
        let mut rows = Vec::new();
        for &h in &hs {
            let params = ModelParams::new(n, h, 0.0)?;
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
        let fname = format!("{name}.{}", ext(format));
        let mut w = create(dir, &fname)?;
        io::write_spectrum_grid(&mut w, &rows, format)?;
        outputs.push(fname);
    }
    let mut gp = create(dir, "fig1.gp")?;
    writeln!(
        gp,
        "set datafile separator ','\n\
         set xlabel 'h'\n\
         set ylabel 'E'\n\
         set key off\n\
         plot 'fig1_spectrum_n100.csv' skip 1 using 1:($4 > 0 ? $3 : 1/0) with dots lc 1, \\\n\
         \x20    '' skip 1 using 1:($4 < 0 ? $3 : 1/0) with dots lc 2, 0 with lines lc 'black' dt 2"
    )?;
    outputs.push("fig1.gp".into());
    Ok(outputs)
}

/// Survival (panel a) and work distribution (panel b) for quenches to each h_f.
fn quench_triplet(
    dir: &Path,
    format: OutputFormat,
    panel: &str,
    h_i: f64,
    spec: InitialStateSpec,
    h_fs: &[f64],
) -> Result<Vec<String>> {
    let params = ModelParams::new(2000, h_i, 0.0)?;
    let survival_panel = panel.ends_with('a');
    let parts = if survival_panel {
        QuenchDump::Survival
    } else {
        QuenchDump::Work
    };
    let mut outputs = Vec::new();
    let mut suffixes = Vec::new();
    for &h_f in h_fs {
        let suffix = format!("{panel}_hf{}", fstr(h_f));
        outputs.extend(dump_quench(
            dir, &params, &spec, h_f, &suffix, format, parts,
        )?);
        suffixes.push(suffix);
    }
    let gp_name = format!("{panel}.gp");
    let mut gp = create(dir, &gp_name)?;
    writeln!(gp, "set datafile separator ','")?;
    if survival_panel {
        writeln!(gp, "set xlabel 't'\nset ylabel 'L(t)'")?;
        let series: Vec<String> = suffixes
            .iter()
            .zip(h_fs)
            .map(|(s, h)| {
                format!(
                    "'survival_{s}.csv' skip 1 using 1:2 with lines title 'h_f = {}'",
                    fstr(*h)
                )
            })
            .collect();
        writeln!(gp, "plot {}", series.join(", \\\n     "))?;
    } else {
        writeln!(gp, "set xlabel 'W'\nset ylabel 'P_W'")?;
        let series: Vec<String> = suffixes
            .iter()
            .zip(h_fs)
            .map(|(s, h)| {
                format!(
                    "'work_{s}.csv' skip 1 using 1:2 with linespoints title 'h_f = {}'",
                    fstr(*h)
                )
            })
            .collect();
        writeln!(gp, "plot {}", series.join(", \\\n     "))?;
    }
    outputs.push(gp_name);
    Ok(outputs)
}

/// Entropy vs h_f for the size ladder, optionally with the log2(N) fit.
fn entropy_ladder(
    dir: &Path,
    format: OutputFormat,
    panel: &str,
    h_i: f64,
    spec: InitialStateSpec,
    h_f_grid: Vec<f64>,
    with_scaling: bool,
) -> Result<Vec<String>> {
    let plan = SweepPlan {
        h_i,
        h_f_grid,
        sizes: vec![100, 200, 400, 800, 1000],
        state_kinds: vec![spec],
        epsilon: 0.0,
        observables: Observables::default(),
        quench: QuenchOptions::default(),
    };
    let rows = run_sweep(&plan)?;
    let sweep_name = format!("{panel}_entropy.{}", ext(format));
    let mut w = create(dir, &sweep_name)?;
    io::write_sweep(&mut w, &rows, format)?;
    let mut outputs = vec![sweep_name.clone()];
    if with_scaling {
        let fit = fit_entropy_scaling(&rows)?;
        let name = format!("{panel}_scaling.json");
        let mut w = create(dir, &name)?;
        io::write_scaling_json(&mut w, &fit)?;
        outputs.push(name);
    }
    let gp_name = format!("{panel}.gp");
    let mut gp = create(dir, &gp_name)?;
    writeln!(
        gp,
        "set datafile separator ','\n\
         set xlabel 'h_f'\n\
         set ylabel 'S_W'"
    )?;
    let series: Vec<String> = plan
        .sizes
        .iter()
        .map(|n| {
            format!(
                "'{sweep_name}' skip 1 using ($1 == {n} ? $3 : 1/0):4 with linespoints title 'N = {n}'"
            )
        })
        .collect();
    writeln!(gp, "plot {}", series.join(", \\\n     "))?;
    outputs.push(gp_name);
    Ok(outputs)
}

/// Work distributions at the critical quench for the three state kinds.
fn fig4a(dir: &Path, format: OutputFormat) -> Result<Vec<String>> {
    let params = ModelParams::new(1000, 0.25, 0.0)?;
    let mut outputs = Vec::new();
    let kinds = [
        ("sym", InitialStateSpec::SymmetricGround),
        ("fsb", InitialStateSpec::FsbPlus),
        ("sup", superposition_2_1()),
    ];
    for (name, spec) in &kinds {
        let suffix = format!("fig4a_{name}");
        outputs.extend(dump_quench(
            dir,
            &params,
            spec,
            0.625,
            &suffix,
            format,
            QuenchDump::Work,
        )?);
    }
    let mut gp = create(dir, "fig4a.gp")?;
    writeln!(
        gp,
        "set datafile separator ','\n\
         set xlabel 'W'\n\
         set ylabel 'P_W'\n\
         plot 'work_fig4a_sym.csv' skip 1 using 1:2 with linespoints title 'S', \\\n\
         \x20    'work_fig4a_fsb.csv' skip 1 using 1:2 with linespoints title 'FSB', \\\n\
         \x20    'work_fig4a_sup.csv' skip 1 using 1:2 with linespoints title 'superposition'"
    )?;
    outputs.push("fig4a.gp".into());
    Ok(outputs)
}

/// Entropy vs h_f at N = 1000 for the three state kinds.
fn fig4b(dir: &Path, format: OutputFormat) -> Result<Vec<String>> {
    let plan = SweepPlan {
        h_i: 0.25,
        h_f_grid: grid(0.45, 0.85, 0.01),
        sizes: vec![1000],
        state_kinds: vec![
            InitialStateSpec::SymmetricGround,
            InitialStateSpec::FsbPlus,
            superposition_2_1(),
        ],
        epsilon: 0.0,
        observables: Observables::default(),
        quench: QuenchOptions::default(),
    };
    let rows = run_sweep(&plan)?;
    let sweep_name = format!("fig4b_entropy.{}", ext(format));
    let mut w = create(dir, &sweep_name)?;
    io::write_sweep(&mut w, &rows, format)?;
    let mut gp = create(dir, "fig4b.gp")?;
    writeln!(
        gp,
        "set datafile separator ','\n\
         set xlabel 'h_f'\n\
         set ylabel 'S_W'\n\
         plot '{sweep_name}' skip 1 using (strcol(2) eq 'sym' ? $3 : 1/0):4 with linespoints title 'S', \\\n\
         \x20    '' skip 1 using (strcol(2) eq 'fsb+' ? $3 : 1/0):4 with linespoints title 'FSB', \\\n\
         \x20    '' skip 1 using (strcol(2)[1:4] eq 'sup:' ? $3 : 1/0):4 with linespoints title 'superposition'"
    )?;
    Ok(vec![sweep_name, "fig4b.gp".into()])
}

fn ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}
