//! Spin-coherent-state energy surface and the critical-quench predictions in
//! closed form: E(α, h), the ground-state branch α_gs(h), the critical quench
//! field h_f^c = (1 + h_i)/2 and the mapping to spectrum energy units.
//!
//! Surface units: extensive energy divided by N/2 with the
//! constant h·N/2 removed, so the ESQPT sits at E_c = −h and the spectrum's
//! critical line E_c = 0 maps through [`to_spectrum_units`].

use crate::error::{LmgError, Result};

/// E(α, h) = ((α⁴ − 1)h − 2α²)/(1 + α²)².
pub fn energy_surface(alpha: f64, h: f64) -> f64 {
    let a2 = alpha * alpha;
    ((a2 * a2 - 1.0) * h - 2.0 * a2) / (1.0 + a2).powi(2)
}

/// Ground-state coherent parameter(s): {0} in the paramagnetic phase,
/// both symmetry-broken branches ±√((1−h)/(1+h)) for 0 ≤ h ≤ 1.
pub fn alpha_gs(h: f64) -> Result<Vec<f64>> {
    if h.is_nan() || h < 0.0 {
        return Err(LmgError::Domain(format!("field must be >= 0, got {h}")));
    }
    if h > 1.0 {
        Ok(vec![0.0])
    } else {
        let a = ((1.0 - h) / (1.0 + h)).sqrt();
        Ok(vec![a, -a])
    }
}

/// Critical energy of the ESQPT in surface units: E_c = −h for 0 ≤ h ≤ 1.
pub fn critical_energy(h: f64) -> f64 {
    -h
}

/// Smallest quench field that brings the ground state prepared at `h_i` to
/// the ESQPT critical energy: h_f^c = (1 + h_i)/2, valid for 0 ≤ h_i ≤ 1.
pub fn critical_field(h_i: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h_i) {
        return Err(LmgError::Domain(format!(
            "critical quench field is defined for 0 <= h_i <= 1 (got {h_i}); \
             for h_i > 1 the quenched energy E(h_i, h_f) = -h_f already sits \
             on the critical line for every h_f < 1"
        )));
    }
    Ok(0.5 * (1.0 + h_i))
}

/// Mean post-quench energy of the coherent ground state prepared at `h_i`
/// and evolved with field `h_f`: E_q = E(α_gs(h_i), h_f). Equals −h_f for
/// h_i > 1 (α_gs = 0).
pub fn quenched_energy_sc(h_i: f64, h_f: f64) -> Result<f64> {
    if h_i.is_nan() || h_f.is_nan() || h_i < 0.0 || h_f < 0.0 {
        return Err(LmgError::Domain(format!(
            "fields must be >= 0, got h_i = {h_i}, h_f = {h_f}"
        )));
    }
    let alpha = alpha_gs(h_i)?[0];
    Ok(energy_surface(alpha, h_f))
}

/// Map a surface-units energy to the spectrum scale: (N/2)·(e + h). Sends the
/// critical energy −h to 0 and the ground branch to the extensive ground energy
/// up to O(1/N) corrections.
pub fn to_spectrum_units(e_sc: f64, h: f64, n_spins: usize) -> f64 {
    0.5 * n_spins as f64 * (e_sc + h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_closed_values() {
        for h in [0.0, 0.3, 1.0, 2.5] {
            assert_eq!(energy_surface(0.0, h), -h);
            assert!((energy_surface(1.0, h) + 0.5).abs() < 1e-15);
        }
        // α² = 1/3 at h_i = 0.5, evaluated at h = 0.75 lands on E_c = −0.75.
        let a = alpha_gs(0.5).unwrap()[0];
        assert!((energy_surface(a, 0.75) + 0.75).abs() < 1e-15);
    }

    #[test]
    fn ground_branches() {
        assert_eq!(alpha_gs(1.5).unwrap(), vec![0.0]);
        let b = alpha_gs(0.0).unwrap();
        assert_eq!(b, vec![1.0, -1.0]);
        let a = alpha_gs(0.5).unwrap()[0];
        assert!((a - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(alpha_gs(-0.1).is_err());
    }

    #[test]
    fn critical_field_values() {
        assert_eq!(critical_field(0.5).unwrap(), 0.75);
        assert_eq!(critical_field(0.25).unwrap(), 0.625);
        assert_eq!(critical_field(1.0).unwrap(), 1.0);
        assert!(critical_field(1.2).is_err());
        assert!(critical_field(-0.01).is_err());
    }

    #[test]
    fn quenched_energy_values() {
        assert!((quenched_energy_sc(0.5, 0.75).unwrap() + 0.75).abs() < 1e-15);
        assert!((quenched_energy_sc(1.5, 0.5).unwrap() + 0.5).abs() < 1e-15);
        // Identity quench at h = 0: ground surface value −1/2.
        assert!((quenched_energy_sc(0.0, 0.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn spectrum_units_mapping() {
        for h in [0.1, 0.5, 0.9] {
            for n in [10usize, 2000] {
                assert_eq!(to_spectrum_units(-h, h, n), 0.0);
            }
        }
        assert_eq!(to_spectrum_units(-0.625, 0.5, 2000), -125.0);
    }

    #[test]
    fn ground_branch_is_global_minimum() {
        for h in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let a = alpha_gs(h).unwrap()[0];
            let e0 = energy_surface(a, h);
            let mut alpha = -3.0;
            while alpha <= 3.0 {
                assert!(energy_surface(alpha, h) >= e0 - 1e-12);
                alpha += 0.001;
            }
        }
    }

    #[test]
    fn stationary_origin_changes_character_at_qpt() {
        // dE/dα(0) = 0 for every h and d²E/dα²(0) = 4(h − 1): the origin is
        // the barrier top (the ESQPT) for h < 1 and the minimum for h > 1.
        let d = 1e-6;
        for h in [0.2, 0.8, 1.2, 2.0] {
            let first = (energy_surface(d, h) - energy_surface(-d, h)) / (2.0 * d);
            assert!(first.abs() < 1e-9);
            let second = (energy_surface(d, h) - 2.0 * energy_surface(0.0, h)
                + energy_surface(-d, h))
                / (d * d);
            assert!((second - 4.0 * (h - 1.0)).abs() < 1e-3);
            if h < 1.0 {
                assert!(second < 0.0);
            } else {
                assert!(second > 0.0);
            }
        }
    }

    #[test]
    fn critical_quench_identity() {
        // E_q(h_i, h_f^c) = −h_f^c exactly.
        let mut hi = 0.0;
        while hi <= 1.0 {
            let hfc = critical_field(hi).unwrap();
            let eq = quenched_energy_sc(hi, hfc).unwrap();
            assert!((eq + hfc).abs() < 1e-14, "hi={hi}");
            hi += 0.01;
        }
    }
}
