//! Batch experiments: deterministic scans of quench observables over h_f
//! grids and system sizes, log₂(N) scaling fits of the entropy maximum, and
//! symmetric-vs-symmetry-broken comparison series.

use rayon::prelude::*;

use crate::error::{LmgError, Result};
use crate::quench::{
    prepare_initial, quench_prepared, revival_period, InitialStateSpec, QuenchOptions,
};
use crate::semiclassics::critical_field;

/// Which observables each sweep cell computes. The survival ceiling is the
/// only one with real extra cost (it samples the full time grid).
#[derive(Debug, Clone, Copy)]
pub struct Observables {
    pub entropy: bool,
    pub moments: bool,
    pub peak_probability: bool,
    pub survival_ceiling: bool,
}

impl Default for Observables {
    fn default() -> Self {
        Self {
            entropy: true,
            moments: true,
            peak_probability: true,
            survival_ceiling: false,
        }
    }
}

/// One scan: quenches h_i → each grid point, for every size and state kind.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub h_i: f64,
    /// Strictly ascending h_f grid.
    pub h_f_grid: Vec<f64>,
    /// Strictly ascending even system sizes.
    pub sizes: Vec<usize>,
    pub state_kinds: Vec<InitialStateSpec>,
    pub epsilon: f64,
    pub observables: Observables,
    pub quench: QuenchOptions,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.h_f_grid.is_empty() {
            return Err(LmgError::InvalidParams("empty h_f grid".into()));
        }
        if self.h_f_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LmgError::InvalidParams(
                "h_f grid must be strictly ascending".into(),
            ));
        }
        if self.sizes.is_empty() || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LmgError::InvalidParams(
                "sizes must be non-empty and strictly ascending".into(),
            ));
        }
        if self.state_kinds.is_empty() {
            return Err(LmgError::InvalidParams("no state kinds".into()));
        }
        Ok(())
    }

    /// Default grid: step 0.01 within ±0.05 of the critical quench field,
    /// 0.05 elsewhere. Falls back to a uniform 0.05 grid when h_i > 1.
    pub fn default_grid(h_i: f64, lo: f64, hi: f64) -> Vec<f64> {
        let fine_center = critical_field(h_i).ok();
        let mut grid = Vec::new();
        let mut x = lo;
        while x <= hi + 1e-12 {
            grid.push((x * 1e12).round() / 1e12);
            let fine = fine_center
                .map(|c| (x - c).abs() < 0.05 + 1e-12 || (x + 0.05 - c).abs() < 0.05)
                .unwrap_or(false);
            x += if fine { 0.01 } else { 0.05 };
        }
        grid
    }
}

/// One cell of the sweep table. Unselected observables are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n_spins: usize,
    pub kind: String,
    pub h_f: f64,
    pub entropy: Option<f64>,
    pub mean_work: Option<f64>,
    pub second_moment: Option<f64>,
    pub variance: Option<f64>,
    pub peak_probability: Option<f64>,
    pub survival_ceiling: Option<f64>,
    pub revival_period: Option<f64>,
}

/// Run a sweep. Cells are independent and evaluated in a worker pool; the
/// returned table is in deterministic order (N major, h_f, then state kind
/// in plan order) regardless of completion order. Initial states are
/// prepared once per (N, kind).
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    // Prepared initial states, one per (size, kind), reused across the grid.
    let mut prepared = Vec::new();
    for &n in &plan.sizes {
        let params = crate::model::ModelParams::new(n, plan.h_i, plan.epsilon)?;
        for kind in &plan.state_kinds {
            let state = prepare_initial(&params, kind)
                .map_err(|e| cell_error(n, plan.h_i, kind.tag(), e))?;
            prepared.push((params, state));
        }
    }

    let n_kinds = plan.state_kinds.len();
    let cells: Vec<(usize, usize, usize)> = (0..plan.sizes.len())
        .flat_map(|si| {
            (0..plan.h_f_grid.len()).flat_map(move |hi| (0..n_kinds).map(move |ki| (si, hi, ki)))
        })
        .collect();

    cells
        .into_par_iter()
        .map(|(si, hi, ki)| {
            let (params, state) = &prepared[si * n_kinds + ki];
            let h_f = plan.h_f_grid[hi];
            let q = quench_prepared(params, state, h_f, &plan.quench)
                .map_err(|e| cell_error(params.n_spins, h_f, state.kind.clone(), e))?;
            let ceiling_and_period = if plan.observables.survival_ceiling {
                let t_max = *q.survival.times.last().unwrap_or(&0.0);
                let burn = t_max / 10.0;
                let ceiling = q
                    .survival
                    .times
                    .iter()
                    .zip(&q.survival.values)
                    .filter(|(&t, _)| t >= burn)
                    .map(|(_, &v)| v)
                    .fold(0.0f64, f64::max);
                (Some(ceiling), revival_period(&q.survival).ok())
            } else {
                (None, None)
            };
            Ok(SweepRow {
                n_spins: params.n_spins,
                kind: state.kind.clone(),
                h_f,
                entropy: plan.observables.entropy.then_some(q.entropy),
                mean_work: plan.observables.moments.then_some(q.mean_work),
                second_moment: plan.observables.moments.then_some(q.second_moment),
                variance: plan.observables.moments.then_some(q.variance),
                peak_probability: plan
                    .observables
                    .peak_probability
                    .then_some(q.distribution.max_probability()),
                survival_ceiling: ceiling_and_period.0,
                revival_period: ceiling_and_period.1,
            })
        })
        .collect()
}

fn cell_error(n: usize, h_f: f64, kind: String, source: LmgError) -> LmgError {
    match source {
        e @ LmgError::Convergence { .. } | e @ LmgError::ResidualBound { .. } => e,
        other => LmgError::Domain(format!(
            "sweep cell (N = {n}, h_f = {h_f}, state {kind}) failed: {other}"
        )),
    }
}

/// Least-squares fit of max_h S_W against log₂(N).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    pub points: Vec<ScalingPoint>,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ScalingPoint {
    #[serde(rename = "N")]
    pub n_spins: usize,
    #[serde(rename = "Smax")]
    pub entropy_max: f64,
}

/// Fit the entropy-maximum scaling over the sizes present in a sweep table.
/// Requires at least three distinct sizes with entropy data.
pub fn fit_entropy_scaling(rows: &[SweepRow]) -> Result<ScalingFit> {
    let mut max_per_size: Vec<(usize, f64)> = Vec::new();
    for row in rows {
        let Some(s) = row.entropy else { continue };
        match max_per_size.iter_mut().find(|(n, _)| *n == row.n_spins) {
            Some((_, m)) => *m = m.max(s),
            None => max_per_size.push((row.n_spins, s)),
        }
    }
    if max_per_size.len() < 3 {
        return Err(LmgError::InsufficientData(format!(
            "scaling fit needs >= 3 sizes, got {}",
            max_per_size.len()
        )));
    }
    max_per_size.sort_unstable_by_key(|&(n, _)| n);
    let xs: Vec<f64> = max_per_size
        .iter()
        .map(|&(n, _)| (n as f64).log2())
        .collect();
    let ys: Vec<f64> = max_per_size.iter().map(|&(_, s)| s).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
        points: max_per_size
            .into_iter()
            .map(|(n_spins, entropy_max)| ScalingPoint {
                n_spins,
                entropy_max,
            })
            .collect(),
    })
}

/// Aligned entropy difference between two kind groups at identical (N, h_f).
#[derive(Debug, Clone, Copy)]
pub struct SymmetryDelta {
    pub n_spins: usize,
    pub h_f: f64,
    pub delta_entropy: f64,
}

/// ΔS_W(h_f) = S_W(symmetry-broken) − S_W(symmetric), aligned cell by cell.
/// The table must contain a `sym` row and an `fsb±` row at every (N, h_f).
pub fn compare_symmetry(rows: &[SweepRow]) -> Result<Vec<SymmetryDelta>> {
    compare_kinds(rows, |k| k.starts_with("fsb"), |k| k == "sym")
}

/// Entropy difference between two arbitrary kind groups.
pub fn compare_kinds(
    rows: &[SweepRow],
    is_first: impl Fn(&str) -> bool,
    is_second: impl Fn(&str) -> bool,
) -> Result<Vec<SymmetryDelta>> {
    let firsts: Vec<&SweepRow> = rows.iter().filter(|r| is_first(&r.kind)).collect();
    let seconds: Vec<&SweepRow> = rows.iter().filter(|r| is_second(&r.kind)).collect();
    if firsts.len() != seconds.len() || firsts.is_empty() {
        return Err(LmgError::InsufficientData(format!(
            "misaligned kind groups: {} vs {} rows",
            firsts.len(),
            seconds.len()
        )));
    }
    firsts
        .iter()
        .zip(&seconds)
        .map(|(a, b)| {
            if a.n_spins != b.n_spins || a.h_f != b.h_f {
                return Err(LmgError::InsufficientData(format!(
                    "misaligned grids: (N = {}, h_f = {}) vs (N = {}, h_f = {})",
                    a.n_spins, a.h_f, b.n_spins, b.h_f
                )));
            }
            let (Some(sa), Some(sb)) = (a.entropy, b.entropy) else {
                return Err(LmgError::InsufficientData(
                    "entropy not computed for compared rows".into(),
                ));
            };
            Ok(SymmetryDelta {
                n_spins: a.n_spins,
                h_f: a.h_f,
                delta_entropy: sa - sb,
            })
        })
        .collect()
}
