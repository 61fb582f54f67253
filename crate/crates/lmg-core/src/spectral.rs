//! Symmetric eigensolvers with certified residuals, plus spectral diagnostics
//! of the ESQPT (density of states, degeneracy lifting).
//!
//! Two independent routes are provided. Bias-free Hamiltonians are solved per
//! parity block (the blocks are already tridiagonal), which keeps eigenvectors
//! exactly parity-pure even inside quasi-degenerate doublets. The dense route
//! (Householder reduction + implicit QL) works for any bandwidth-2 symmetric
//! matrix and serves as the cross-check and the ε ≠ 0 path.

use crate::error::{LmgError, Result};
use crate::model::{split_parity_blocks, BandedMatrix, ParityLabel, TridiagonalMatrix};

/// Residual certification limit: max_k ‖Hv_k − λ_k v_k‖ / ‖H‖_∞ must stay below this.
pub const EIGEN_RESIDUAL_BOUND: f64 = 1e-10;

/// Default gap threshold for degeneracy scans. Ferromagnetic doublet gaps are
/// exponentially small in N (far below this at N ≥ 100) while ESQPT-region
/// spacings are polynomial in 1/N.
pub const DEGENERACY_THRESHOLD_DEFAULT: f64 = 1e-8;

const MAX_QL_ITERATIONS: usize = 40;

/// Ascending eigenvalues with orthonormal eigenvectors and a certified
/// residual bound relative to ‖H‖_∞.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` is the eigenvector of `values[k]` in the full |N, n_t⟩ basis.
    pub vectors: Vec<Vec<f64>>,
    /// Parity of each eigenvector when the decomposition came from parity blocks.
    pub parities: Option<Vec<ParityLabel>>,
    pub residual_bound: f64,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn certify(h: &BandedMatrix, values: &[f64], vectors: &[Vec<f64>]) -> Result<f64> {
        let norm = h.inf_norm().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        let mut y = vec![0.0; h.dim];
        for (lambda, v) in values.iter().zip(vectors) {
            h.matvec(v, &mut y);
            let r2: f64 = y
                .iter()
                .zip(v)
                .map(|(yi, vi)| (yi - lambda * vi).powi(2))
                .sum();
            worst = worst.max(r2.sqrt() / norm);
        }
        if worst >= EIGEN_RESIDUAL_BOUND {
            return Err(LmgError::Convergence { residual: worst });
        }
        Ok(worst)
    }
}

// ---------------------------------------------------------------------------
// Implicit-shift QL for symmetric tridiagonal matrices (EISPACK tql2 lineage).
// ---------------------------------------------------------------------------

/// Rotation sink for the QL sweep. Each Givens rotation acts on the plane
/// (i, i+1) of the accumulated orthogonal transform.
trait RotationSink {
    fn rotate(&mut self, i: usize, c: f64, s: f64);
    /// Apply the final ascending-order permutation.
    fn permute(&mut self, perm: &[usize]);
}

/// Discard rotations: eigenvalues only.
struct NoSink;

impl RotationSink for NoSink {
    fn rotate(&mut self, _i: usize, _c: f64, _s: f64) {}
    fn permute(&mut self, _perm: &[usize]) {}
}

/// Accumulate the full transform; row k ends up as the k-th eigenvector
/// expressed in the input basis.
struct MatrixSink {
    rows: Vec<Vec<f64>>,
}

impl MatrixSink {
    fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0.0; n];
                r[i] = 1.0;
                r
            })
            .collect();
        Self { rows }
    }
}

impl RotationSink for MatrixSink {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        let (a, b) = self.rows.split_at_mut(i + 1);
        let (ra, rb) = (&mut a[i], &mut b[0]);
        for (x, y) in ra.iter_mut().zip(rb.iter_mut()) {
            let h = *y;
            *y = s * *x + c * h;
            *x = c * *x - s * h;
        }
    }

    fn permute(&mut self, perm: &[usize]) {
        let mut out = Vec::with_capacity(self.rows.len());
        for &k in perm {
            out.push(std::mem::take(&mut self.rows[k]));
        }
        self.rows = out;
    }
}

/// Accumulate the transform applied to fixed vectors only: entry k of each
/// accumulated vector ends up as ⟨eigvec_k | ψ⟩. O(1) work per rotation
/// instead of O(n), which is what makes large parameter sweeps cheap.
struct OverlapSink {
    coeffs: Vec<Vec<f64>>,
}

impl RotationSink for OverlapSink {
    fn rotate(&mut self, i: usize, c: f64, s: f64) {
        for w in &mut self.coeffs {
            let h = w[i + 1];
            w[i + 1] = s * w[i] + c * h;
            w[i] = c * w[i] - s * h;
        }
    }

    fn permute(&mut self, perm: &[usize]) {
        for w in &mut self.coeffs {
            let old = w.clone();
            for (dst, &k) in perm.iter().enumerate() {
                w[dst] = old[k];
            }
        }
    }
}

fn argsort_ascending(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Implicit-shift QL with rotation accumulation. `d` is the diagonal, `e[i]`
/// couples (i, i+1). On success `d` holds ascending eigenvalues and the sink
/// has been permuted to match.
fn ql_implicit<S: RotationSink>(d: &mut Vec<f64>, off: &[f64], sink: &mut S) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    debug_assert_eq!(off.len(), n - 1);
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(LmgError::Convergence {
                        residual: e[l].abs() / tst1.max(f64::MIN_POSITIVE),
                    });
                }

                // Implicit shift from the leading 2x2.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                // QL sweep, chasing the bulge from m down to l.
                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gi = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gi;
                    d[i + 1] = h + s * (c * gi + s * d[i]);
                    sink.rotate(i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let perm = argsort_ascending(d);
    let sorted: Vec<f64> = perm.iter().map(|&k| d[k]).collect();
    *d = sorted;
    sink.permute(&perm);
    Ok(())
}

/// All eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigenvalues(t: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let mut d = t.diag.clone();
    ql_implicit(&mut d, &t.off, &mut NoSink)?;
    Ok(d)
}

/// Full decomposition of a symmetric tridiagonal matrix. Returns ascending
/// eigenvalues and the matching eigenvectors.
pub fn tridiagonal_eigs(t: &TridiagonalMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut d = t.diag.clone();
    let mut sink = MatrixSink::identity(t.dim());
    ql_implicit(&mut d, &t.off, &mut sink)?;
    Ok((d, sink.rows))
}

/// Eigenvalues plus overlap coefficients ⟨eigvec_k | ψ⟩ for each supplied ψ,
/// without forming eigenvectors.
pub fn tridiagonal_overlaps(
    t: &TridiagonalMatrix,
    states: &[Vec<f64>],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    for s in states {
        if s.len() != t.dim() {
            return Err(LmgError::DimensionMismatch {
                expected: t.dim(),
                found: s.len(),
            });
        }
    }
    let mut d = t.diag.clone();
    let mut sink = OverlapSink {
        coeffs: states.to_vec(),
    };
    ql_implicit(&mut d, &t.off, &mut sink)?;
    Ok((d, sink.coeffs))
}

/// One eigenvector of a symmetric tridiagonal matrix by inverse iteration at
/// an already-converged eigenvalue. Within a parity block all eigenvalues are
/// simple (nonzero couplings), so a couple of iterations reach machine level.
pub fn tridiagonal_eigenvector(t: &TridiagonalMatrix, lambda: f64) -> Result<Vec<f64>> {
    let n = t.dim();
    let scale = t.inf_norm().max(f64::MIN_POSITIVE);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut best_res = f64::INFINITY;
    for attempt in 0..6 {
        solve_shifted_tridiagonal(t, lambda, &mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            // Restart from a different deterministic seed direction.
            for (i, x) in v.iter_mut().enumerate() {
                *x = ((i as f64 + 1.0) * 0.7390851332151607).sin();
            }
            continue;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        let mut y = vec![0.0; n];
        t.matvec(&v, &mut y);
        let res = y
            .iter()
            .zip(&v)
            .map(|(yi, vi)| (yi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt()
            / scale;
        best_res = best_res.min(res);
        if res < EIGEN_RESIDUAL_BOUND && attempt >= 1 {
            canonical_sign(&mut v);
            return Ok(v);
        }
    }
    Err(LmgError::Convergence { residual: best_res })
}

/// Deterministic sign convention: largest-magnitude component is positive.
pub fn canonical_sign(v: &mut [f64]) {
    let mut imax = 0;
    let mut vmax = 0.0f64;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > vmax {
            vmax = x.abs();
            imax = i;
        }
    }
    if v[imax] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Solve (T − λ) x = b in place with partial pivoting; b is overwritten by x.
fn solve_shifted_tridiagonal(t: &TridiagonalMatrix, lambda: f64, b: &mut [f64]) {
    let n = t.dim();
    let tiny = f64::EPSILON * t.inf_norm().max(1.0);
    if n == 1 {
        let d = t.diag[0] - lambda;
        b[0] /= if d.abs() < tiny { tiny.copysign(d) } else { d };
        return;
    }
    // Band after pivoting: main dd, first upper du, second upper du2.
    let mut dd: Vec<f64> = t.diag.iter().map(|&x| x - lambda).collect();
    let mut du = t.off.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut dl = t.off.clone();
    for i in 0..n - 1 {
        if dl[i].abs() > dd[i].abs() {
            // Swap rows i and i+1.
            std::mem::swap(&mut dd[i], &mut dl[i]);
            std::mem::swap(&mut du[i], &mut dd[i + 1]);
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = 0.0;
            }
            b.swap(i, i + 1);
        }
        let pivot = if dd[i].abs() < tiny {
            tiny.copysign(dd[i])
        } else {
            dd[i]
        };
        dd[i] = pivot;
        let mult = dl[i] / pivot;
        dd[i + 1] -= mult * du[i];
        if i + 2 < n {
            // (i+1, i+2) entry: zero unless the swap moved du2 fill into play.
            du[i + 1] -= mult * du2[i];
        }
        b[i + 1] -= mult * b[i];
    }
    if dd[n - 1].abs() < tiny {
        dd[n - 1] = tiny.copysign(dd[n - 1]);
    }
    // Back substitution.
    b[n - 1] /= dd[n - 1];
    if n >= 2 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    }
}

// ---------------------------------------------------------------------------
// Dense route: Householder tridiagonalization (JAMA tred2 lineage) + QL.
// ---------------------------------------------------------------------------

/// Eigendecomposition of a dense symmetric matrix (row-major, n×n).
/// Returns ascending eigenvalues and eigenvectors.
pub fn dense_symmetric_eigs(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut v = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, n, &mut d, &mut e);
    // tred2 leaves e[i] coupling (i−1, i); shift to (i, i+1).
    let off: Vec<f64> = e[1..].to_vec();
    // Rows of the sink are columns of the accumulated transform.
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[j][i] = v[i * n + j];
        }
    }
    let mut sink = MatrixSink { rows };
    ql_implicit(&mut d, &off, &mut sink)?;
    Ok((d, sink.rows))
}

/// Householder reduction of a symmetric matrix to tridiagonal form with
/// accumulated transform, ported from the JAMA/EISPACK tred2 routine.
fn tred2(v: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        // Scale to avoid under/overflow.
        let mut scale = 0.0f64;
        let mut h = 0.0f64;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            // Generate Householder vector.
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            // Apply similarity transformation to remaining columns.
            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in j + 1..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..n - 1 {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for (k, dk) in d.iter_mut().enumerate().take(i + 1) {
                *dk = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;
}

// ---------------------------------------------------------------------------
// Public diagonalization entry points.
// ---------------------------------------------------------------------------

/// Diagonalize a banded Hamiltonian.
///
/// With `sector` given (requires ε = 0), only that parity block is solved and
/// its eigenvectors are embedded back into the full basis with zeros on the
/// opposite sublattice. Without a sector, bias-free matrices are solved per
/// block and merged (parity-pure canonical basis); biased matrices take the
/// dense route.
pub fn diagonalize(h: &BandedMatrix, sector: Option<ParityLabel>) -> Result<EigenDecomposition> {
    match sector {
        Some(p) => {
            let (even, odd) = split_parity_blocks(h)?;
            let block = match p {
                ParityLabel::Plus => even,
                ParityLabel::Minus => odd,
            };
            let (values, block_vecs) = tridiagonal_eigs(&block.matrix)?;
            let vectors: Vec<Vec<f64>> = block_vecs
                .into_iter()
                .map(|bv| embed(&bv, &block.basis_indices, h.dim))
                .collect();
            let residual_bound = EigenDecomposition::certify(h, &values, &vectors)?;
            Ok(EigenDecomposition {
                parities: Some(vec![p; values.len()]),
                values,
                vectors,
                residual_bound,
            })
        }
        None if h.is_parity_symmetric() => {
            let (even, odd) = split_parity_blocks(h)?;
            let mut tagged: Vec<(f64, Vec<f64>, ParityLabel)> = Vec::with_capacity(h.dim);
            for block in [even, odd] {
                let (vals, vecs) = tridiagonal_eigs(&block.matrix)?;
                for (lambda, bv) in vals.into_iter().zip(vecs) {
                    tagged.push((
                        lambda,
                        embed(&bv, &block.basis_indices, h.dim),
                        block.parity,
                    ));
                }
            }
            tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
            let values: Vec<f64> = tagged.iter().map(|t| t.0).collect();
            let parities: Vec<ParityLabel> = tagged.iter().map(|t| t.2).collect();
            let vectors: Vec<Vec<f64>> = tagged.into_iter().map(|t| t.1).collect();
            let residual_bound = EigenDecomposition::certify(h, &values, &vectors)?;
            Ok(EigenDecomposition {
                values,
                vectors,
                parities: Some(parities),
                residual_bound,
            })
        }
        None => diagonalize_dense(h),
    }
}

/// Dense Householder + QL route, independent of the parity-block structure.
pub fn diagonalize_dense(h: &BandedMatrix) -> Result<EigenDecomposition> {
    let (values, vectors) = dense_symmetric_eigs(&h.to_dense(), h.dim)?;
    let residual_bound = EigenDecomposition::certify(h, &values, &vectors)?;
    Ok(EigenDecomposition {
        values,
        vectors,
        parities: None,
        residual_bound,
    })
}

fn embed(block_vec: &[f64], basis_indices: &[usize], dim: usize) -> Vec<f64> {
    let mut full = vec![0.0; dim];
    for (&idx, &x) in basis_indices.iter().zip(block_vec) {
        full[idx] = x;
    }
    full
}

/// All eigenvalues without eigenvectors: per-block QL for bias-free matrices
/// (O(dim²)), dense route otherwise.
pub fn eigenvalues_only(h: &BandedMatrix) -> Result<Vec<f64>> {
    Ok(eigenvalues_with_parity(h)?
        .into_iter()
        .map(|(v, _)| v)
        .collect())
}

/// Ascending eigenvalues tagged with their parity sector (`None` when the
/// matrix is biased and parity is not conserved).
pub fn eigenvalues_with_parity(h: &BandedMatrix) -> Result<Vec<(f64, Option<ParityLabel>)>> {
    if h.is_parity_symmetric() {
        let (even, odd) = split_parity_blocks(h)?;
        let mut tagged: Vec<(f64, Option<ParityLabel>)> = Vec::with_capacity(h.dim);
        for block in [even, odd] {
            for v in tridiagonal_eigenvalues(&block.matrix)? {
                tagged.push((v, Some(block.parity)));
            }
        }
        tagged.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(tagged)
    } else {
        let (vals, _) = dense_symmetric_eigs(&h.to_dense(), h.dim)?;
        Ok(vals.into_iter().map(|v| (v, None)).collect())
    }
}

// ---------------------------------------------------------------------------
// Density of states and degeneracy diagnostics.
// ---------------------------------------------------------------------------

/// Histogram estimate of ν(E) = Σ_k δ(E − E_k).
#[derive(Debug, Clone)]
pub struct DensityOfStates {
    pub bin_centers: Vec<f64>,
    pub counts: Vec<usize>,
    /// counts / bin_width: states per unit energy.
    pub smoothed: Vec<f64>,
    pub bin_width: f64,
    /// Index of the most populated bin.
    pub peak_bin: usize,
}

/// Default histogram balance: (E_max − E_min)/√D.
pub fn default_bin_width(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 1.0;
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ((max - min) / (values.len() as f64).sqrt()).max(f64::MIN_POSITIVE)
}

pub fn density_of_states(values: &[f64], bin_width: f64) -> Result<DensityOfStates> {
    if values.is_empty() {
        return Err(LmgError::InsufficientData("empty spectrum".into()));
    }
    if bin_width.is_nan() || bin_width <= 0.0 {
        return Err(LmgError::Domain(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n_bins = (((max - min) / bin_width).ceil() as usize).max(1);
    let mut counts = vec![0usize; n_bins];
    for &v in values {
        // Snap positions within 1e-9 of an upper edge into the upper bin so
        // decimal grids land where exact arithmetic would put them.
        let b = ((((v - min) / bin_width) + 1e-9) as usize).min(n_bins - 1);
        counts[b] += 1;
    }
    let bin_centers: Vec<f64> = (0..n_bins)
        .map(|i| min + (i as f64 + 0.5) * bin_width)
        .collect();
    let smoothed: Vec<f64> = counts.iter().map(|&c| c as f64 / bin_width).collect();
    let peak_bin = counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, &c)| c)
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(DensityOfStates {
        bin_centers,
        counts,
        smoothed,
        bin_width,
        peak_bin,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DegeneracyPair {
    /// Index k of the lower member; gap = E_{k+1} − E_k.
    pub index: usize,
    pub gap: f64,
    pub mean_energy: f64,
}

#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub pairs: Vec<DegeneracyPair>,
    pub threshold: f64,
    /// Fraction of listed pairs whose mean energy is below zero.
    pub fraction_below_zero: f64,
}

/// List consecutive quasi-degenerate pairs (gap < threshold) in an ascending
/// spectrum.
pub fn degeneracy_scan(values: &[f64], threshold: f64) -> Result<DegeneracyReport> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(LmgError::Domain(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(LmgError::Domain("values must be ascending".into()));
    }
    let mut pairs = Vec::new();
    for (k, w) in values.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap < threshold {
            pairs.push(DegeneracyPair {
                index: k,
                gap,
                mean_energy: 0.5 * (w[0] + w[1]),
            });
        }
    }
    let below = pairs.iter().filter(|p| p.mean_energy < 0.0).count();
    let fraction_below_zero = if pairs.is_empty() {
        0.0
    } else {
        below as f64 / pairs.len() as f64
    };
    Ok(DegeneracyReport {
        pairs,
        threshold,
        fraction_below_zero,
    })
}
