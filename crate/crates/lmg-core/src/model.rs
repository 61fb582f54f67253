//! LMG Hamiltonian, collective spin operators and parity structure in the
//! two-boson occupation basis |N, n_t⟩ with 0 ≤ n_t ≤ N.

use num_complex::Complex64;
use std::io::Write;

use crate::error::{LmgError, Result};

/// Parameters of one LMG Hamiltonian instance: H = h n_t − (t†s + s†t)²/(4N) + ε S_x.
///
/// Energies are dimensionless; `n_spins` must be even (the parity-block
/// bookkeeping assumes even N) and `field` non-negative.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    pub n_spins: usize,
    pub field: f64,
    pub bias: f64,
}

impl ModelParams {
    pub fn new(n_spins: usize, field: f64, bias: f64) -> Result<Self> {
        if n_spins < 2 || !n_spins.is_multiple_of(2) {
            return Err(LmgError::InvalidParams(format!(
                "n_spins must be a positive even integer >= 2, got {n_spins}"
            )));
        }
        if !field.is_finite() || field < 0.0 {
            return Err(LmgError::InvalidParams(format!(
                "field must be finite and >= 0, got {field}"
            )));
        }
        if !bias.is_finite() {
            return Err(LmgError::InvalidParams("bias must be finite".into()));
        }
        Ok(Self {
            n_spins,
            field,
            bias,
        })
    }

    /// Hilbert-space dimension N + 1.
    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    /// Non-fatal diagnostics; the perturbative treatment of the bias assumes |ε| ≪ 1.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.bias.abs() >= 0.01 {
            w.push(format!(
                "bias |eps| = {} is outside the perturbative regime |eps| << 1",
                self.bias.abs()
            ));
        }
        w
    }
}

/// Z₂ parity label: the eigenvalue of Π = exp(iπ n_t) on |N, n_t⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ParityLabel {
    /// Π = +1 (even n_t). Block dimension N/2 + 1 for even N.
    Plus,
    /// Π = −1 (odd n_t). Block dimension N/2.
    Minus,
}

impl ParityLabel {
    pub fn of_basis_state(n_t: usize) -> Self {
        if n_t.is_multiple_of(2) {
            ParityLabel::Plus
        } else {
            ParityLabel::Minus
        }
    }

    pub fn sign(&self) -> i32 {
        match self {
            ParityLabel::Plus => 1,
            ParityLabel::Minus => -1,
        }
    }

    pub fn block_dim(&self, n_spins: usize) -> usize {
        match self {
            ParityLabel::Plus => n_spins / 2 + 1,
            ParityLabel::Minus => n_spins / 2,
        }
    }
}

impl std::fmt::Display for ParityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.sign())
    }
}

/// Real symmetric matrix with couplings only at |a − b| ≤ 2, stored as three
/// diagonals. Symmetry is exact by construction: only the lower triangle exists.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    pub dim: usize,
    /// Main diagonal, length `dim`.
    pub diag: Vec<f64>,
    /// First subdiagonal (a+1, a), length `dim − 1`.
    pub off1: Vec<f64>,
    /// Second subdiagonal (a+2, a), length `dim − 2`.
    pub off2: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            diag: vec![0.0; dim],
            off1: vec![0.0; dim.saturating_sub(1)],
            off2: vec![0.0; dim.saturating_sub(2)],
        }
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        match hi - lo {
            0 => self.diag[lo],
            1 => self.off1[lo],
            2 => self.off2[lo],
            _ => 0.0,
        }
    }

    /// True when every |a − b| = 1 coupling vanishes (ε = 0), so parity is conserved.
    pub fn is_parity_symmetric(&self) -> bool {
        self.off1.iter().all(|&x| x == 0.0)
    }

    /// y ← H x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim;
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i >= 1 {
                acc += self.off1[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off1[i] * x[i + 1];
            }
            if i >= 2 {
                acc += self.off2[i - 2] * x[i - 2];
            }
            if i + 2 < n {
                acc += self.off2[i] * x[i + 2];
            }
            y[i] = acc;
        }
    }

    /// ⟨x|H|x⟩ for a complex vector over the real banded operator.
    pub fn expectation(&self, x: &[Complex64]) -> f64 {
        let n = self.dim;
        assert_eq!(x.len(), n);
        let re: Vec<f64> = x.iter().map(|z| z.re).collect();
        let im: Vec<f64> = x.iter().map(|z| z.im).collect();
        let mut yr = vec![0.0; n];
        let mut yi = vec![0.0; n];
        self.matvec(&re, &mut yr);
        self.matvec(&im, &mut yi);
        (0..n).map(|i| re[i] * yr[i] + im[i] * yi[i]).sum()
    }

    /// Max absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i >= 1 {
                    s += self.off1[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off1[i].abs();
                }
                if i >= 2 {
                    s += self.off2[i - 2].abs();
                }
                if i + 2 < n {
                    s += self.off2[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Row-major dense copy, for the dense eigensolver path and oracle tests.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut m = vec![0.0; n * n];
        for a in 0..n {
            m[a * n + a] = self.diag[a];
            if a + 1 < n {
                m[a * n + (a + 1)] = self.off1[a];
                m[(a + 1) * n + a] = self.off1[a];
            }
            if a + 2 < n {
                m[a * n + (a + 2)] = self.off2[a];
                m[(a + 2) * n + a] = self.off2[a];
            }
        }
        m
    }

    /// Debug dump: lower-triangle triplets `a b value`, one per line,
    /// 17 significant digits.
    pub fn write_triplets(&self, w: &mut impl Write) -> std::io::Result<()> {
        for a in 0..self.dim {
            for b in a.saturating_sub(2)..=a {
                writeln!(w, "{} {} {}", a, b, crate::io::fmt_g17(self.get(a, b)))?;
            }
        }
        Ok(())
    }
}

/// Symmetric tridiagonal matrix; `off[i]` couples i and i+1.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i >= 1 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i >= 1 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }
}

/// One parity sector of a bias-free Hamiltonian: a tridiagonal matrix over
/// the even- or odd-n_t sublattice, plus the embedding back into the full basis.
#[derive(Debug, Clone)]
pub struct ParityBlock {
    pub parity: ParityLabel,
    pub matrix: TridiagonalMatrix,
    /// n_t value of each block row.
    pub basis_indices: Vec<usize>,
}

/// Hamiltonian matrix elements in the |N, n_t⟩ basis:
/// diagonal h n_t − [(n_t+1)(N−n_t) + n_t(N−n_t+1)]/(4N),
/// second off-diagonal −√((n_t+1)(N−n_t)(n_t+2)(N−n_t−1))/(4N),
/// first off-diagonal (ε/2)√((N−n_t)(n_t+1)).
pub fn build_hamiltonian(params: &ModelParams) -> BandedMatrix {
    let n = params.n_spins as f64;
    let dim = params.dim();
    let mut m = BandedMatrix::zeros(dim);
    for i in 0..dim {
        let nt = i as f64;
        m.diag[i] = params.field * nt - ((nt + 1.0) * (n - nt) + nt * (n - nt + 1.0)) / (4.0 * n);
        if i + 1 < dim {
            m.off1[i] = 0.5 * params.bias * ((n - nt) * (nt + 1.0)).sqrt();
        }
        if i + 2 < dim {
            m.off2[i] = -((nt + 1.0) * (n - nt) * (nt + 2.0) * (n - nt - 1.0)).sqrt() / (4.0 * n);
        }
    }
    m
}

/// S_x = (S⁺ + S⁻)/2 in the |N, n_t⟩ basis: ⟨n_t+1|S_x|n_t⟩ = ½√((N−n_t)(n_t+1)).
pub fn build_sx(params: &ModelParams) -> BandedMatrix {
    let n = params.n_spins as f64;
    let dim = params.dim();
    let mut m = BandedMatrix::zeros(dim);
    for i in 0..dim - 1 {
        let nt = i as f64;
        m.off1[i] = 0.5 * ((n - nt) * (nt + 1.0)).sqrt();
    }
    m
}

/// Split a bias-free Hamiltonian into its (Π = +1, Π = −1) tridiagonal blocks.
///
/// Fails if any |a − b| = 1 coupling is nonzero, since [H, Π] ≠ 0 then.
pub fn split_parity_blocks(h: &BandedMatrix) -> Result<(ParityBlock, ParityBlock)> {
    if let Some(i) = h.off1.iter().position(|&x| x != 0.0) {
        return Err(LmgError::BiasPresent {
            row: i + 1,
            col: i,
            value: h.off1[i],
        });
    }
    let block = |parity: ParityLabel| {
        let start = match parity {
            ParityLabel::Plus => 0,
            ParityLabel::Minus => 1,
        };
        let basis_indices: Vec<usize> = (start..h.dim).step_by(2).collect();
        let diag: Vec<f64> = basis_indices.iter().map(|&i| h.diag[i]).collect();
        let off: Vec<f64> = basis_indices[..basis_indices.len().saturating_sub(1)]
            .iter()
            .map(|&i| h.off2[i])
            .collect();
        ParityBlock {
            parity,
            matrix: TridiagonalMatrix { diag, off },
            basis_indices,
        }
    };
    Ok((block(ParityLabel::Plus), block(ParityLabel::Minus)))
}

/// Independent construction of the same Hamiltonian from
/// H = −S_x²/N + h(S_z + N/2) + ε S_x using angular-momentum ladder elements
/// in the |J = N/2, m⟩ basis. Serves as the anti-bug oracle for
/// [`build_hamiltonian`]: same spectrum, different formula path.
pub fn dicke_oracle_hamiltonian(params: &ModelParams) -> BandedMatrix {
    let n = params.n_spins as f64;
    let j = 0.5 * n;
    let dim = params.dim();
    // ⟨m+1|S⁺|m⟩ and ⟨m−1|S⁻|m⟩
    let c_plus = |m: f64| (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
    let c_minus = |m: f64| (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt();
    let mut mat = BandedMatrix::zeros(dim);
    for i in 0..dim {
        let m = i as f64 - j;
        // Sx² diagonal = (⟨S⁺S⁻⟩ + ⟨S⁻S⁺⟩)/4
        let sx2 = 0.25 * (c_minus(m).powi(2) + c_plus(m).powi(2));
        mat.diag[i] = -sx2 / n + params.field * (m + j);
        if i + 1 < dim {
            mat.off1[i] = 0.5 * params.bias * c_plus(m);
        }
        if i + 2 < dim {
            // Sx² second off-diagonal = ⟨m+2|S⁺²|m⟩/4
            mat.off2[i] = -0.25 * c_plus(m) * c_plus(m + 1.0) / n;
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: usize, h: f64, eps: f64) -> ModelParams {
        ModelParams::new(n, h, eps).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(3, 0.5, 0.0).is_err());
        assert!(ModelParams::new(0, 0.5, 0.0).is_err());
        assert!(ModelParams::new(4, -0.1, 0.0).is_err());
        assert!(ModelParams::new(4, f64::NAN, 0.0).is_err());
        assert!(ModelParams::new(2, 0.0, 0.0).is_ok());
    }

    #[test]
    fn bias_warning_regime() {
        assert!(params(4, 0.5, 0.005).warnings().is_empty());
        assert_eq!(params(4, 0.5, 0.02).warnings().len(), 1);
    }

    #[test]
    fn hamiltonian_n2_field_zero() {
        let h = build_hamiltonian(&params(2, 0.0, 0.0));
        assert_eq!(h.diag, vec![-0.25, -0.5, -0.25]);
        assert_eq!(h.get(0, 2), -0.25);
        assert!(h.off1.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn hamiltonian_n2_field_one() {
        let h = build_hamiltonian(&params(2, 1.0, 0.0));
        assert_eq!(h.diag, vec![-0.25, 0.5, 1.75]);
    }

    #[test]
    fn bias_coupling_n4() {
        let h = build_hamiltonian(&params(4, 0.5, 0.01));
        // (ε/2)·√(4·1) = ε
        assert!((h.get(0, 1) - 0.01).abs() < 1e-16);
    }

    #[test]
    fn bias_touches_only_odd_steps() {
        let h0 = build_hamiltonian(&params(8, 0.3, 0.0));
        let h1 = build_hamiltonian(&params(8, 0.3, 0.005));
        assert_eq!(h0.diag, h1.diag);
        assert_eq!(h0.off2, h1.off2);
        assert!(h1.off1.iter().any(|&x| x != 0.0));
    }

    #[test]
    fn sx_elements_n2() {
        let sx = build_sx(&params(2, 0.0, 0.0));
        let r = 0.5f64 * 2.0f64.sqrt();
        assert!((sx.off1[0] - r).abs() < 1e-16);
        assert!((sx.off1[1] - r).abs() < 1e-16);
        assert!(sx.diag.iter().all(|&x| x == 0.0));
        assert!(sx.off2.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn parity_labels_and_block_dims() {
        assert_eq!(ParityLabel::of_basis_state(0), ParityLabel::Plus);
        assert_eq!(ParityLabel::of_basis_state(3), ParityLabel::Minus);
        assert_eq!(ParityLabel::Plus.block_dim(100), 51);
        assert_eq!(ParityLabel::Minus.block_dim(100), 50);
    }

    #[test]
    fn split_blocks_n2() {
        let h = build_hamiltonian(&params(2, 0.0, 0.0));
        let (even, odd) = split_parity_blocks(&h).unwrap();
        assert_eq!(even.matrix.diag, vec![-0.25, -0.25]);
        assert_eq!(even.matrix.off, vec![-0.25]);
        assert_eq!(odd.matrix.diag, vec![-0.5]);
        assert!(odd.matrix.off.is_empty());
        assert_eq!(even.basis_indices, vec![0, 2]);
        assert_eq!(odd.basis_indices, vec![1]);
    }

    #[test]
    fn split_blocks_dims_n100() {
        let h = build_hamiltonian(&params(100, 0.5, 0.0));
        let (even, odd) = split_parity_blocks(&h).unwrap();
        assert_eq!(even.matrix.dim(), 51);
        assert_eq!(odd.matrix.dim(), 50);
    }

    #[test]
    fn split_refuses_bias() {
        let h = build_hamiltonian(&params(4, 0.5, 1e-6));
        assert!(matches!(
            split_parity_blocks(&h),
            Err(LmgError::BiasPresent { .. })
        ));
    }

    #[test]
    fn matvec_matches_dense() {
        let h = build_hamiltonian(&params(8, 0.7, 0.003));
        let d = h.to_dense();
        let n = h.dim;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut y = vec![0.0; n];
        h.matvec(&x, &mut y);
        for i in 0..n {
            let want: f64 = (0..n).map(|j| d[i * n + j] * x[j]).sum();
            assert!((y[i] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn triplet_dump_format() {
        let h = build_hamiltonian(&params(2, 0.0, 0.0));
        let mut buf = Vec::new();
        h.write_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // rows: (0,0), (1,0), (1,1), (2,0), (2,1), (2,2)
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("0 0 "));
        assert!(lines[3].starts_with("2 0 "));
    }

    proptest! {
        #[test]
        fn hamiltonian_symmetric_banded(n in 1usize..40, h in 0.0f64..2.0, eps in -0.01f64..0.01) {
            let p = params(2 * n, h, eps);
            let m = build_hamiltonian(&p);
            for a in 0..m.dim {
                for b in 0..m.dim {
                    prop_assert_eq!(m.get(a, b), m.get(b, a));
                    if a.abs_diff(b) > 2 {
                        prop_assert_eq!(m.get(a, b), 0.0);
                    }
                    prop_assert!(m.get(a, b).is_finite());
                }
            }
            if eps == 0.0 {
                prop_assert!(m.is_parity_symmetric());
            }
        }

        #[test]
        fn block_spectra_partition_basis(n in 1usize..50) {
            let p = params(2 * n, 0.4, 0.0);
            let hm = build_hamiltonian(&p);
            let (even, odd) = split_parity_blocks(&hm).unwrap();
            prop_assert_eq!(even.matrix.dim() + odd.matrix.dim(), hm.dim);
            prop_assert_eq!(even.matrix.dim(), n + 1);
        }
    }
}
