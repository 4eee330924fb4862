//! Closed-form volume constants and index-dependent lower bounds, with
//! exact rational arithmetic for every binomial-coefficient ratio before
//! conversion to `f64`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial_big, sigma_coefficient};
use crate::error::{Error, Result};
use crate::sphere::sphere_volume;

/// `vol(V_R)/vol(S^{2n+1}) = 4^n / C(2n,n)` as an exact rational.
pub fn radial_normalized_exact(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(4).pow(n as u32)) / binomial_big(2 * n, n)
}

/// Normalized radial volume as `f64`.
pub fn radial_normalized(n: u64) -> f64 {
    radial_normalized_exact(n).to_f64().unwrap()
}

/// `Σ_k C(n,k)² C(2n,2k)⁻¹` as an exact rational (the nonsingular
/// lower-bound constant).
pub fn bcn_a_normalized_exact(n: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 0..=n {
        acc += sigma_coefficient(n, k) * binomial_big(n, k);
    }
    acc
}

pub fn bcn_a_normalized(n: u64) -> f64 {
    bcn_a_normalized_exact(n).to_f64().unwrap()
}

/// Antipodal-pair lower bound: `(π/4)·vol(S^{2n})·(|I_p| + |I_{−p}|)`.
pub fn thm_a_bound(n: usize, i_p: i64, i_m: i64) -> Result<f64> {
    Ok(std::f64::consts::FRAC_PI_4
        * sphere_volume(2 * n)?
        * (i_p.unsigned_abs() + i_m.unsigned_abs()) as f64)
}

/// Radial-comparison bound: `(vol(V_R)/2)·(|I_p| + |I_{−p}|)`.
pub fn corollary_bound(n: usize, i_p: i64, i_m: i64) -> Result<f64> {
    let vol_r = radial_normalized(n as u64) * sphere_volume(2 * n + 1)?;
    Ok(0.5 * vol_r * (i_p.unsigned_abs() + i_m.unsigned_abs()) as f64)
}

/// Arbitrary-singularity bound: `(vol(S^{2n})/2)·Σ|I_i|`.
pub fn thm_b_bound(n: usize, indices: &[i64]) -> Result<f64> {
    let total: u64 = indices.iter().map(|i| i.unsigned_abs()).sum();
    Ok(0.5 * sphere_volume(2 * n)? * total as f64)
}

/// Low-dimensional antipodal bounds:
/// `m = 2`: `(π + |I_N| + |I_S| − 2)/2 · vol(S²)`,
/// `m = 3`: `(|I_N| + |I_S|) · vol(S³)`.
pub fn bcj_bound(m: usize, i_n: i64, i_s: i64) -> Result<f64> {
    let total = (i_n.unsigned_abs() + i_s.unsigned_abs()) as f64;
    match m {
        2 => Ok(0.5 * (std::f64::consts::PI + total - 2.0) * sphere_volume(2)?),
        3 => Ok(total * sphere_volume(3)?),
        _ => Err(Error::domain("the low-dimensional bounds cover m = 2 and m = 3 only")),
    }
}

/// Normalized closed-form volumes (per `vol(S^{2n+1})`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedVolumes {
    pub n: usize,
    /// Always 1: the parallel-field floor.
    pub vol_m: f64,
    pub hopf: f64,
    pub radial: f64,
    pub pedersen: f64,
    pub bcn_a: f64,
}

/// The constants `{1, 2^n, 4^n/C(2n,n), √(2πn), Σ C(n,k)²C(2n,2k)⁻¹}`.
pub fn closed_volumes(n: usize) -> Result<ClosedVolumes> {
    if n == 0 {
        return Err(Error::domain("sphere parameter n must be at least 1"));
    }
    Ok(ClosedVolumes {
        n,
        vol_m: 1.0,
        hopf: 2.0f64.powi(n as i32),
        radial: radial_normalized(n as u64),
        pedersen: (2.0 * std::f64::consts::PI * n as f64).sqrt(),
        bcn_a: bcn_a_normalized(n as u64),
    })
}

/// One named bound with its value and a satisfaction flag when a
/// computed volume is available.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    pub normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub satisfied: Option<bool>,
}

/// Bound table for a given index configuration, optionally compared
/// against a computed volume (with its quadrature error).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub indices: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub computed_volume: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub computed_error: Option<f64>,
    pub entries: Vec<BoundEntry>,
}

pub fn bound_report(
    n: usize,
    indices: &[i64],
    computed: Option<(f64, f64)>,
) -> Result<BoundReport> {
    let vol = sphere_volume(2 * n + 1)?;
    let mut entries = Vec::new();
    let mut push = |name: &str, value: f64| {
        let satisfied = computed.map(|(v, err)| v + err >= value);
        entries.push(BoundEntry {
            name: name.to_string(),
            value,
            normalized: value / vol,
            satisfied,
        });
    };
    push("volM", vol);
    push("bcn_a", bcn_a_normalized(n as u64) * vol);
    push("thmB", thm_b_bound(n, indices)?);
    if indices.len() == 2 {
        push("thmA", thm_a_bound(n, indices[0], indices[1])?);
        push("corollary", corollary_bound(n, indices[0], indices[1])?);
        if n == 1 {
            push("bcj3", bcj_bound(3, indices[0], indices[1])?);
            push("bcj2", bcj_bound(2, indices[0], indices[1])?);
        }
    }
    Ok(BoundReport {
        n,
        indices: indices.to_vec(),
        computed_volume: computed.map(|c| c.0),
        computed_error: computed.map(|c| c.1),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn thm_a_examples() {
        assert_abs_diff_eq!(thm_a_bound(1, 1, -1).unwrap(), 2.0 * PI * PI, epsilon = 1e-12);
        assert_eq!(thm_a_bound(1, 0, 0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            thm_a_bound(2, 2, -2).unwrap(),
            8.0 * PI.powi(3) / 3.0,
            epsilon = 1e-11
        );
    }

    #[test]
    fn corollary_examples() {
        assert_abs_diff_eq!(
            corollary_bound(1, 1, -1).unwrap(),
            4.0 * PI * PI,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            corollary_bound(1, 2, -2).unwrap(),
            8.0 * PI * PI,
            epsilon = 1e-11
        );
        assert_eq!(corollary_bound(3, 0, 0).unwrap(), 0.0);
    }

    #[test]
    fn thm_b_examples() {
        assert_abs_diff_eq!(thm_b_bound(1, &[1, -1]).unwrap(), 4.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(
            thm_b_bound(1, &[1, 1, -1, -1]).unwrap(),
            8.0 * PI,
            epsilon = 1e-12
        );
        assert_eq!(thm_b_bound(2, &[]).unwrap(), 0.0);
    }

    #[test]
    fn bcj_examples() {
        assert_abs_diff_eq!(bcj_bound(3, 1, -1).unwrap(), 4.0 * PI * PI, epsilon = 1e-11);
        assert_abs_diff_eq!(bcj_bound(2, 1, 1).unwrap(), 2.0 * PI * PI, epsilon = 1e-11);
        assert_eq!(bcj_bound(3, 0, 0).unwrap(), 0.0);
        assert!(bcj_bound(4, 1, 1).is_err());
    }

    #[test]
    fn corollary_equals_bcj3_at_n1() {
        for (a, b) in [(1i64, -1i64), (2, -2), (3, 1), (0, 5)] {
            assert_abs_diff_eq!(
                corollary_bound(1, a, b).unwrap(),
                bcj_bound(3, a, b).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn bounds_homogeneous_in_total_index() {
        for n in 1..=3usize {
            let one = thm_a_bound(n, 1, 0).unwrap();
            for k in 0..=6i64 {
                assert_abs_diff_eq!(
                    thm_a_bound(n, k, 0).unwrap(),
                    k as f64 * one,
                    epsilon = 1e-10
                );
            }
            let one_b = thm_b_bound(n, &[1]).unwrap();
            assert_abs_diff_eq!(
                thm_b_bound(n, &[2, -3, 1]).unwrap(),
                6.0 * one_b,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn bcn_a_equals_radial_exactly() {
        // Σ C(n,k)²/C(2n,2k) = 4^n/C(2n,n) over the rationals
        for n in 1..=4u64 {
            assert_eq!(bcn_a_normalized_exact(n), radial_normalized_exact(n));
        }
    }

    #[test]
    fn closed_volumes_n1_n2() {
        let c = closed_volumes(1).unwrap();
        assert_eq!(c.vol_m, 1.0);
        assert_eq!(c.hopf, 2.0);
        assert_abs_diff_eq!(c.radial, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.pedersen, (2.0 * PI).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.bcn_a, 2.0, epsilon = 1e-15);

        let c = closed_volumes(2).unwrap();
        assert_eq!(c.hopf, 4.0);
        assert_abs_diff_eq!(c.radial, 8.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.pedersen, (4.0 * PI).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.bcn_a, 8.0 / 3.0, epsilon = 1e-15);

        // the chain vol(M) < vol(V_R) < vol(V_P) < vol(V_H) for n ≥ 2
        assert!(c.vol_m < c.radial && c.radial < c.pedersen && c.pedersen < c.hopf);
    }

    #[test]
    fn bound_report_shape() {
        let r = bound_report(1, &[1, -1], Some((4.0 * PI * PI, 0.01))).unwrap();
        let names: Vec<&str> = r.entries.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["volM", "bcn_a", "thmB", "thmA", "corollary", "bcj3", "bcj2"]);
        assert!(r.entries.iter().all(|e| e.satisfied == Some(true)));

        let r = bound_report(2, &[1, 2, -3], None).unwrap();
        let names: Vec<&str> = r.entries.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["volM", "bcn_a", "thmB"]);
        assert!(r.entries.iter().all(|e| e.satisfied.is_none()));
    }
}
