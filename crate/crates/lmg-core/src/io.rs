//! Deterministic, locale-independent writers for the flat-file interfaces:
//! spectrum/DoS/work/survival/sweep CSV tables and the quench, scaling and
//! manifest JSON documents. All numeric CSV fields carry 17 significant
//! digits so reruns are byte-for-byte reproducible.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::quench::{QuenchResult, SurvivalSeries, WorkDistribution};
use crate::spectral::{DensityOfStates, EigenDecomposition};
use crate::sweep::{ScalingFit, SweepRow};

/// 17-significant-digit scientific formatting (round-trips any f64).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), fmt_g17)
}

/// Tabular output encoding selected by the CLI `--format` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

// --- spectrum -------------------------------------------------------------

#[derive(Serialize)]
struct SpectrumEntry {
    index: usize,
    energy: f64,
    parity: i32,
}

fn spectrum_entries(eig: &EigenDecomposition) -> Vec<SpectrumEntry> {
    eig.values
        .iter()
        .enumerate()
        .map(|(index, &energy)| SpectrumEntry {
            index,
            energy,
            parity: eig.parities.as_ref().map_or(0, |p| p[index].sign()),
        })
        .collect()
}

/// Single spectrum: columns `index,energy,parity` (parity 0 when unknown).
pub fn write_spectrum(
    w: &mut impl Write,
    eig: &EigenDecomposition,
    format: OutputFormat,
) -> Result<()> {
    let entries = spectrum_entries(eig);
    match format {
        OutputFormat::Csv => {
            writeln!(w, "index,energy,parity")?;
            for e in entries {
                writeln!(w, "{},{},{}", e.index, fmt_g17(e.energy), e.parity)?;
            }
        }
        OutputFormat::Json => serde_json::to_writer_pretty(w, &entries).map_err(io_err)?,
    }
    Ok(())
}

/// One row of an h-grid spectrum table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumGridRow {
    pub h: f64,
    pub index: usize,
    pub energy: f64,
    /// Π eigenvalue sign, or 0 when parity is not conserved.
    pub parity: i32,
}

/// Spectrum over an h grid: the single-spectrum schema with a leading `h` column.
pub fn write_spectrum_grid(
    w: &mut impl Write,
    rows: &[SpectrumGridRow],
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(w, "h,index,energy,parity")?;
            for e in rows {
                writeln!(
                    w,
                    "{},{},{},{}",
                    fmt_g17(e.h),
                    e.index,
                    fmt_g17(e.energy),
                    e.parity
                )?;
            }
        }
        OutputFormat::Json => serde_json::to_writer_pretty(w, &rows).map_err(io_err)?,
    }
    Ok(())
}

// --- density of states ----------------------------------------------------

#[derive(Serialize)]
struct DosEntry {
    bin_center: f64,
    count: usize,
    nu: f64,
}

/// Columns `bin_center,count,nu`.
pub fn write_dos(w: &mut impl Write, dos: &DensityOfStates, format: OutputFormat) -> Result<()> {
    let rows: Vec<DosEntry> = dos
        .bin_centers
        .iter()
        .zip(&dos.counts)
        .zip(&dos.smoothed)
        .map(|((&bin_center, &count), &nu)| DosEntry {
            bin_center,
            count,
            nu,
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            writeln!(w, "bin_center,count,nu")?;
            for r in rows {
                writeln!(w, "{},{},{}", fmt_g17(r.bin_center), r.count, fmt_g17(r.nu))?;
            }
        }
        OutputFormat::Json => serde_json::to_writer_pretty(w, &rows).map_err(io_err)?,
    }
    Ok(())
}

// --- work distribution and survival ----------------------------------------

/// Columns `W,p`.
pub fn write_work(w: &mut impl Write, dist: &WorkDistribution, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(w, "W,p")?;
            for o in &dist.outcomes {
                writeln!(w, "{},{}", fmt_g17(o.work), fmt_g17(o.probability))?;
            }
        }
        OutputFormat::Json => serde_json::to_writer_pretty(w, &dist.outcomes).map_err(io_err)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SurvivalEntry {
    t: f64,
    #[serde(rename = "L")]
    l: f64,
}

/// Columns `t,L`.
pub fn write_survival(
    w: &mut impl Write,
    series: &SurvivalSeries,
    format: OutputFormat,
) -> Result<()> {
    let rows: Vec<SurvivalEntry> = series
        .times
        .iter()
        .zip(&series.values)
        .map(|(&t, &l)| SurvivalEntry { t, l })
        .collect();
    match format {
        OutputFormat::Csv => {
            writeln!(w, "t,L")?;
            for r in rows {
                writeln!(w, "{},{}", fmt_g17(r.t), fmt_g17(r.l))?;
            }
        }
        OutputFormat::Json => serde_json::to_writer_pretty(w, &rows).map_err(io_err)?,
    }
    Ok(())
}

// --- sweep table ------------------------------------------------------------

#[derive(Serialize)]
struct SweepEntry<'a> {
    #[serde(rename = "N")]
    n: usize,
    kind: &'a str,
    hf: f64,
    entropy: Option<f64>,
    m1: Option<f64>,
    m2: Option<f64>,
    var: Option<f64>,
    peak_p: Option<f64>,
    survival_ceiling: Option<f64>,
}

/// Columns `N,kind,hf,entropy,m1,m2,var,peak_p,survival_ceiling`.
pub fn write_sweep(w: &mut impl Write, rows: &[SweepRow], format: OutputFormat) -> Result<()> {
    let entries: Vec<SweepEntry> = rows
        .iter()
        .map(|r| SweepEntry {
            n: r.n_spins,
            kind: &r.kind,
            hf: r.h_f,
            entropy: r.entropy,
            m1: r.mean_work,
            m2: r.second_moment,
            var: r.variance,
            peak_p: r.peak_probability,
            survival_ceiling: r.survival_ceiling,
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            writeln!(w, "N,kind,hf,entropy,m1,m2,var,peak_p,survival_ceiling")?;
            for e in entries {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    e.n,
                    e.kind,
                    fmt_g17(e.hf),
                    fmt_opt(e.entropy),
                    fmt_opt(e.m1),
                    fmt_opt(e.m2),
                    fmt_opt(e.var),
                    fmt_opt(e.peak_p),
                    fmt_opt(e.survival_ceiling),
                )?;
            }
        }
        OutputFormat::Json => serde_json::to_writer_pretty(w, &entries).map_err(io_err)?,
    }
    Ok(())
}

// --- JSON documents ---------------------------------------------------------

#[derive(Serialize)]
struct QuenchParamsJson {
    n: usize,
    hi: f64,
    hf: f64,
    eps: f64,
}

#[derive(Serialize)]
struct MomentsJson {
    m1: f64,
    m2: f64,
    var: f64,
}

#[derive(Serialize)]
struct QuenchJson<'a> {
    params: QuenchParamsJson,
    state_kind: &'a str,
    work: &'a [crate::quench::WorkOutcome],
    moments: MomentsJson,
    entropy: f64,
    quenched_energy: f64,
}

/// QuenchResult document: `params{n,hi,hf,eps}`, `state_kind`, `work[{W,p}]`,
/// `moments{m1,m2,var}`, `entropy`, `quenched_energy`.
pub fn write_quench_json(w: &mut impl Write, q: &QuenchResult) -> Result<()> {
    let doc = QuenchJson {
        params: QuenchParamsJson {
            n: q.params_initial.n_spins,
            hi: q.params_initial.field,
            hf: q.h_final,
            eps: q.params_initial.bias,
        },
        state_kind: &q.state_kind,
        work: &q.distribution.outcomes,
        moments: MomentsJson {
            m1: q.mean_work,
            m2: q.second_moment,
            var: q.variance,
        },
        entropy: q.entropy,
        quenched_energy: q.quenched_energy,
    };
    serde_json::to_writer_pretty(w, &doc).map_err(io_err)?;
    Ok(())
}

/// Scaling document: `{slope,intercept,r2,points:[{N,Smax}]}`.
pub fn write_scaling_json(w: &mut impl Write, fit: &ScalingFit) -> Result<()> {
    serde_json::to_writer_pretty(w, fit).map_err(io_err)?;
    Ok(())
}

/// Pretty-printed JSON value (used for run manifests and ad-hoc documents).
pub fn write_json_value(w: &mut impl Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(w, value).map_err(io_err)?;
    Ok(())
}

fn io_err(e: serde_json::Error) -> crate::error::LmgError {
    crate::error::LmgError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quench::{WorkOutcome, MERGE_TOL_DEFAULT};

    #[test]
    fn g17_roundtrips() {
        for &x in &[0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.75] {
            let s = fmt_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert!(fmt_g17(0.1).len() >= 18);
    }

    #[test]
    fn sweep_header_and_rows() {
        let rows = vec![SweepRow {
            n_spins: 100,
            kind: "sym".into(),
            h_f: 0.75,
            entropy: Some(3.0),
            mean_work: Some(1.0),
            second_moment: Some(2.0),
            variance: Some(1.0),
            peak_probability: Some(0.25),
            survival_ceiling: None,
            revival_period: None,
        }];
        let mut buf = Vec::new();
        write_sweep(&mut buf, &rows, OutputFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "N,kind,hf,entropy,m1,m2,var,peak_p,survival_ceiling"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("100,sym,"));
        assert!(row.ends_with(",nan"));
    }

    #[test]
    fn work_json_field_names() {
        let dist = WorkDistribution {
            outcomes: vec![WorkOutcome {
                work: 0.5,
                probability: 1.0,
            }],
            reference_energy: -1.0,
            merge_tolerance: MERGE_TOL_DEFAULT,
        };
        let mut buf = Vec::new();
        write_work(&mut buf, &dist, OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["W"], 0.5);
        assert_eq!(v[0]["p"], 1.0);
    }

    #[test]
    fn deterministic_bytes() {
        let rows = vec![SweepRow {
            n_spins: 40,
            kind: "fsb+".into(),
            h_f: 0.9,
            entropy: Some(1.5),
            mean_work: None,
            second_moment: None,
            variance: None,
            peak_probability: None,
            survival_ceiling: Some(0.3),
            revival_period: None,
        }];
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_sweep(&mut a, &rows, OutputFormat::Csv).unwrap();
        write_sweep(&mut b, &rows, OutputFormat::Csv).unwrap();
        assert_eq!(a, b);
    }
}
