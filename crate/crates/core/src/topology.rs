//! Brouwer degree of sphere self-maps via the Kronecker integral, and
//! the Poincaré index of an isolated field singularity as the degree of
//! the trivialized field on a small geodesic sphere.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::VectorFieldSpec;
use crate::matrix::SmallMatrix;
use crate::quad::{quad_sphere, QuadratureGrid};
use crate::sphere::vecops::{axpy, dot, normalize};
use crate::sphere::{ambient_det, orthonormal_complement, sphere_volume, tangent_basis, SpherePoint};

/// Default step for on-sphere central differences of a map.
pub const DEFAULT_MAP_STEP: f64 = 1e-5;

/// A smooth map `S^m → S^m` given by an evaluator; outputs are
/// normalized defensively before use.
#[derive(Clone)]
pub struct SphereMap {
    pub dim: usize,
    eval: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    /// Central-difference step for the differential.
    pub step: f64,
}

impl SphereMap {
    pub fn new<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        SphereMap {
            dim,
            eval: Arc::new(eval),
            step: DEFAULT_MAP_STEP,
        }
    }

    pub fn identity(dim: usize) -> Self {
        SphereMap::new(dim, |x: &[f64]| x.to_vec())
    }

    pub fn antipodal(dim: usize) -> Self {
        SphereMap::new(dim, |x: &[f64]| x.iter().map(|c| -c).collect())
    }

    /// Suspension of `z ↦ z^d` on `S²`: `(z, t) ↦ (z^d/|z|^{d−1}, t)`.
    pub fn suspension_power(d: u32) -> Self {
        SphereMap::new(2, move |x: &[f64]| {
            let (re, im, t) = (x[0], x[1], x[2]);
            let r = re.hypot(im);
            if r < 1e-300 {
                return vec![0.0, 0.0, t.signum()];
            }
            let (mut zr, mut zi) = (1.0f64, 0.0f64);
            for _ in 0..d {
                let nr = zr * re - zi * im;
                zi = zr * im + zi * re;
                zr = nr;
            }
            let scale = r.powi(d as i32 - 1);
            vec![zr / scale, zi / scale, t]
        })
    }

    /// Unit output of the map.
    pub fn image(&self, x: &[f64]) -> Result<Vec<f64>> {
        let raw = (self.eval)(x);
        if raw.len() != self.dim + 1 {
            return Err(Error::domain("map output has wrong dimension"));
        }
        let u = normalize(&raw).ok_or_else(|| {
            Error::Numeric("sphere map produced a (near-)zero vector".into())
        })?;
        Ok(u)
    }
}

/// Brouwer degree as the normalized Kronecker integral
/// `(1/vol(S^m)) ∫ det[F, dF(b_1), …, dF(b_m)]` over an oriented
/// orthonormal tangent basis, with the differential taken by projected
/// central differences on the sphere.
pub fn kronecker_degree(map: &SphereMap, grid: &QuadratureGrid) -> Result<f64> {
    let m = map.dim;
    if grid.dim != m || grid.ambient != m + 1 {
        return Err(Error::config("grid does not match the map's sphere"));
    }
    let h = map.step;
    let total = grid.try_integrate(|p| {
        let x = SpherePoint::project(p)?;
        let mut basis = tangent_basis(&x);
        {
            let mut cols: Vec<&[f64]> = Vec::with_capacity(m + 1);
            cols.push(x.coords());
            cols.extend(basis.iter().map(|b| b.as_slice()));
            if ambient_det(&cols) < 0.0 {
                for c in basis[0].iter_mut() {
                    *c = -*c;
                }
            }
        }
        let f0 = map.image(x.coords())?;
        let mut mat = SmallMatrix::zeros(m + 1, m + 1);
        for (a, fa) in f0.iter().enumerate() {
            mat[(a, 0)] = *fa;
        }
        for (bi, b) in basis.iter().enumerate() {
            let xp = normalize(&axpy(x.coords(), h, b))
                .ok_or_else(|| Error::Numeric("degenerate step".into()))?;
            let xm = normalize(&axpy(x.coords(), -h, b))
                .ok_or_else(|| Error::Numeric("degenerate step".into()))?;
            let fp = map.image(&xp)?;
            let fm = map.image(&xm)?;
            for a in 0..=m {
                mat[(a, bi + 1)] = (fp[a] - fm[a]) / (2.0 * h);
            }
        }
        mat.det()
    })?;
    Ok(total / sphere_volume(m)?)
}

/// Poincaré index report for one singular point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexReport {
    pub point: SpherePoint,
    pub radius: f64,
    pub raw_degree: f64,
    pub index: i64,
    pub residual: f64,
}

/// Index of the field around the isolated singularity `p`: the field is
/// read on the geodesic sphere of the given colatitude, carried back to
/// `T_p` by parallel transport along the radial geodesics with a fixed
/// orthonormal basis of `T_p`, and the degree of the resulting
/// `S^{2n} → S^{2n}` map is computed on the supplied grid orders.
///
/// The index does not depend on the radius (as long as no other
/// singularity is enclosed), but the trivialized map of a higher-order
/// singularity concentrates its Jacobian in an `O(r^{d−1})` band at
/// small radii; moderate radii need far fewer grid nodes.
pub fn field_index(
    f: &VectorFieldSpec,
    p: &SpherePoint,
    radius: f64,
    orders: &[usize],
) -> Result<IndexReport> {
    if p.ambient_dim() != f.ambient_dim() {
        return Err(Error::domain("point dimension does not match the field"));
    }
    if !(0.0..std::f64::consts::PI).contains(&radius) || radius == 0.0 {
        return Err(Error::config("index radius must lie in (0, π)"));
    }
    for s in f.singular_points() {
        let d = p.geodesic_distance(&s);
        if d > 1e-9 && radius > d / 2.0 {
            return Err(Error::config(format!(
                "radius {radius} reaches within half the distance {d:.4} of another singularity"
            )));
        }
    }
    let two_n = 2 * f.n;
    let chart: Vec<Vec<f64>> = orthonormal_complement(&[p.coords()], p.ambient_dim());
    let p_coords = p.coords().to_vec();
    let field = f.clone();
    let (sin_r, cos_r) = radius.sin_cos();

    let map = SphereMap::new(two_n, move |y: &[f64]| {
        // u(y) ∈ T_p, the outgoing geodesic direction
        let mut u = vec![0.0; p_coords.len()];
        for (j, b) in chart.iter().enumerate() {
            for (a, ua) in u.iter_mut().enumerate() {
                *ua += y[j] * b[a];
            }
        }
        let x: Vec<f64> = p_coords
            .iter()
            .zip(&u)
            .map(|(pa, ua)| cos_r * pa + sin_r * ua)
            .collect();
        let x = match SpherePoint::project(&x) {
            Ok(x) => x,
            Err(_) => return vec![0.0; two_n + 1],
        };
        let v = match field.eval(&x) {
            Ok(v) => v,
            Err(_) => return vec![0.0; two_n + 1],
        };
        // radial direction at x and transport back: the radial component
        // returns to u, the transverse part is unchanged
        let radial: Vec<f64> = p_coords
            .iter()
            .zip(&u)
            .map(|(pa, ua)| -sin_r * pa + cos_r * ua)
            .collect();
        let beta = dot(&v, &radial);
        let transverse = axpy(&v, -beta, &radial);
        let back = axpy(&transverse, beta, &u);
        chart.iter().map(|b| dot(&back, b)).collect()
    });

    let grid = quad_sphere(two_n, orders)?;
    let raw = kronecker_degree(&map, &grid)?;
    let index = raw.round() as i64;
    Ok(IndexReport {
        point: p.clone(),
        radius,
        raw_degree: raw,
        index,
        residual: (raw - index as f64).abs(),
    })
}
