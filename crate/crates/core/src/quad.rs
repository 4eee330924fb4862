//! Quadrature on spheres, parallels and latitude slices.
//!
//! Product grids pair a Gauss rule in each polar angle's cosine with a
//! uniform (midpoint/trapezoid) rule in the azimuth. The polar rule for
//! an angle carrying the measure factor `sin^k φ` is the Gauss rule for
//! the weight `(1−t²)^{(k−1)/2}` in `t = cos φ` (Gauss–Legendre is the
//! `k = 1` case); this choice integrates every spherical polynomial of
//! degree `≤ 2q−1` exactly with `q` nodes per polar axis.
//!
//! Latitude-sliced grids compose Gauss–Legendre in the colatitude
//! `r ∈ (0,π)` with a product grid per parallel, carrying the slice
//! measure `sin^{2n} r`; the slice nodes are open, so integrands that
//! blow up at the poles are only ever evaluated where the slice weight
//! keeps the product bounded.
//!
//! All node enumeration is axis-lexicographic and all reductions use
//! fixed-order pairwise summation, so results are bit-reproducible and
//! independent of the worker-thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::vecops::norm;
use crate::sphere::{orthonormal_complement, sphere_volume, SpherePoint};

/// Hard cap on materialized nodes (per parallel for sliced grids).
const MAX_DENSE_NODES: usize = 1 << 23;

const CHUNK: usize = 4096;

/// Fixed-order pairwise summation; the reduction tree depends only on the
/// slice length.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// Nodes and weights of a 1-d rule.
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `∫_0^π sin^k φ dφ` by the Wallis recurrence.
fn wallis(k: usize) -> f64 {
    let mut values = [std::f64::consts::PI, 2.0];
    if k == 0 {
        return values[0];
    }
    for j in 2..=k {
        let next = values[0] * (j as f64 - 1.0) / j as f64;
        values = [values[1], next];
    }
    values[1]
}

/// Symmetric tridiagonal eigensolver (implicit QL with shifts) that
/// carries only the first components of the eigenvectors — all that
/// Golub–Welsch needs. `d` holds the diagonal, `e` the off-diagonal
/// (entry `n−1` is scratch), `z` starts as `(1,0,…,0)`.
fn tridiag_eigen(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numeric(
                    "tridiagonal QL iteration failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                if f.abs() >= g.abs() {
                    c = g / f;
                    r = c.hypot(1.0);
                    e[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = s.hypot(1.0);
                    e[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Gauss rule with `q` nodes for the weight `sin^k φ dφ` on `(0,π)`,
/// expressed in `t = cos φ ∈ (−1,1)` (weight `(1−t²)^{(k−1)/2} dt`),
/// built by Golub–Welsch from the symmetric-Jacobi recurrence.
pub fn gauss_sin_power(q: usize, k: usize) -> Result<Rule1d> {
    if q == 0 {
        return Err(Error::domain("quadrature order must be positive"));
    }
    let a = (k as f64 - 1.0) / 2.0;
    let mut d = vec![0.0f64; q];
    let mut e = vec![0.0f64; q];
    for i in 1..q {
        let kf = i as f64;
        let beta = kf * (kf + 2.0 * a) / ((2.0 * kf + 2.0 * a - 1.0) * (2.0 * kf + 2.0 * a + 1.0));
        e[i - 1] = beta.sqrt();
    }
    let mut z = vec![0.0f64; q];
    z[0] = 1.0;
    tridiag_eigen(&mut d, &mut e, &mut z)?;
    let mu0 = wallis(k);
    let mut pairs: Vec<(f64, f64)> = d
        .iter()
        .zip(&z)
        .map(|(&node, &z0)| (node, mu0 * z0 * z0))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(Rule1d {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Gauss–Legendre rule with `q` nodes on `(−1,1)`.
pub fn gauss_legendre(q: usize) -> Result<Rule1d> {
    gauss_sin_power(q, 1)
}

/// Grid flavour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Product,
    Parallel,
    Sliced,
    MonteCarlo,
}

/// Serializable grid request, as accepted by the CLI `--grid` flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridSpec {
    /// Product grid on a sphere: one order per axis, azimuth last.
    Product { orders: Vec<usize> },
    /// Orders of the product grid used on each parallel of a scan.
    Parallel { orders: Vec<usize> },
    /// Gauss–Legendre slices in colatitude × a parallel product grid.
    Sliced {
        slices: usize,
        parallel: Vec<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Uniform Monte Carlo sample.
    MonteCarlo {
        count: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl GridSpec {
    pub fn kind(&self) -> GridKind {
        match self {
            GridSpec::Product { .. } => GridKind::Product,
            GridSpec::Parallel { .. } => GridKind::Parallel,
            GridSpec::Sliced { .. } => GridKind::Sliced,
            GridSpec::MonteCarlo { .. } => GridKind::MonteCarlo,
        }
    }

    /// Halved-resolution version used for refinement error estimates.
    pub fn coarsened(&self) -> GridSpec {
        let half = |q: usize| (q / 2).max(4);
        match self {
            GridSpec::Product { orders } => GridSpec::Product {
                orders: orders.iter().copied().map(half).collect(),
            },
            GridSpec::Parallel { orders } => GridSpec::Parallel {
                orders: orders.iter().copied().map(half).collect(),
            },
            GridSpec::Sliced {
                slices,
                parallel,
                seed,
            } => GridSpec::Sliced {
                slices: half(*slices),
                parallel: parallel.iter().copied().map(half).collect(),
                seed: *seed,
            },
            GridSpec::MonteCarlo { count, seed } => GridSpec::MonteCarlo {
                count: (count / 2).max(1),
                seed: *seed,
            },
        }
    }
}

/// Default product orders for a volume grid on `S^m` (azimuth last).
pub fn default_product_orders(m: usize) -> Vec<usize> {
    let base = match m {
        1..=3 => 64,
        5 => 20,
        _ => 12,
    };
    let mut orders = vec![base; m.saturating_sub(1)];
    orders.push(if m == 3 { 64 } else { 2 * base });
    orders
}

/// Default parallel-grid orders on `S^{2n}` for flux scans and degree
/// integrals.
pub fn default_parallel_orders(n: usize) -> Vec<usize> {
    match n {
        1 => vec![48, 96],
        2 => vec![24, 24, 24, 48],
        _ => vec![12, 12, 12, 12, 12, 24],
    }
}

/// Default sliced grid for singular-field volume integration.
pub fn default_sliced_spec(n: usize) -> GridSpec {
    match n {
        1 => GridSpec::Sliced {
            slices: 48,
            parallel: vec![48, 96],
            seed: None,
        },
        2 => GridSpec::Sliced {
            slices: 40,
            parallel: vec![24, 24, 24, 48],
            seed: None,
        },
        _ => GridSpec::Sliced {
            slices: 32,
            parallel: vec![12, 12, 12, 12, 12, 24],
            seed: None,
        },
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Dense {
        /// Flat node coordinates, `ambient` values per node.
        points: Vec<f64>,
        weights: Vec<f64>,
    },
    Sliced(SlicedStorage),
}

#[derive(Debug, Clone)]
struct SlicedStorage {
    pole: Vec<f64>,
    /// Orthonormal basis of the pole's complement, one vector per
    /// template coordinate.
    basis: Vec<Vec<f64>>,
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    /// Product grid on the unit `S^{2n}` in complement coordinates.
    template_points: Vec<f64>,
    template_weights: Vec<f64>,
}

/// Nodes and weights for integrating over a sphere, a parallel, or a
/// whole sphere by latitude slices. Sliced grids keep one parallel
/// template and stream it slice by slice instead of materializing every
/// node.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub kind: GridKind,
    /// Dimension of the manifold the grid integrates over.
    pub dim: usize,
    /// Length of each node's coordinate vector.
    pub ambient: usize,
    pub seed: Option<u64>,
    pub resolution: Vec<usize>,
    storage: Storage,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Dense { weights, .. } => weights.len(),
            Storage::Sliced(s) => s.radii.len() * s.template_weights.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integrates a pointwise integrand with deterministic reduction.
    pub fn try_integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> Result<f64> + Sync,
    {
        match &self.storage {
            Storage::Dense { points, weights } => {
                let count = weights.len();
                let nchunks = count.div_ceil(CHUNK);
                let partials: Result<Vec<f64>> = (0..nchunks)
                    .into_par_iter()
                    .map(|ci| {
                        let start = ci * CHUNK;
                        let end = (start + CHUNK).min(count);
                        let mut vals = Vec::with_capacity(end - start);
                        for i in start..end {
                            let p = &points[i * self.ambient..(i + 1) * self.ambient];
                            vals.push(f(p)? * weights[i]);
                        }
                        Ok(pairwise_sum(&vals))
                    })
                    .collect();
                Ok(pairwise_sum(&partials?))
            }
            Storage::Sliced(s) => {
                let two_n = self.dim - 1;
                let stride = s.basis.len();
                let count = s.template_weights.len();
                let nchunks = count.div_ceil(CHUNK);
                let mut slice_totals = Vec::with_capacity(s.radii.len());
                for (&r, &wr) in s.radii.iter().zip(&s.radial_weights) {
                    let (sin_r, cos_r) = r.sin_cos();
                    let scale = wr * sin_r.powi(two_n as i32);
                    let partials: Result<Vec<f64>> = (0..nchunks)
                        .into_par_iter()
                        .map(|ci| {
                            let start = ci * CHUNK;
                            let end = (start + CHUNK).min(count);
                            let mut vals = Vec::with_capacity(end - start);
                            let mut x = vec![0.0f64; self.ambient];
                            for i in start..end {
                                let y = &s.template_points[i * stride..(i + 1) * stride];
                                for (a, xa) in x.iter_mut().enumerate() {
                                    *xa = cos_r * s.pole[a];
                                }
                                for (j, b) in s.basis.iter().enumerate() {
                                    let c = sin_r * y[j];
                                    for (a, xa) in x.iter_mut().enumerate() {
                                        *xa += c * b[a];
                                    }
                                }
                                vals.push(f(&x)? * s.template_weights[i]);
                            }
                            Ok(pairwise_sum(&vals))
                        })
                        .collect();
                    slice_totals.push(scale * pairwise_sum(&partials?));
                }
                Ok(pairwise_sum(&slice_totals))
            }
        }
    }

    /// Total weight; equals the measure of the target manifold.
    pub fn weight_sum(&self) -> f64 {
        self.try_integrate(|_| Ok(1.0)).expect("constant integrand")
    }

    /// Dense nodes as (point, weight) pairs; errors for sliced grids,
    /// which are streamed rather than materialized.
    pub fn dense_nodes(&self) -> Result<impl Iterator<Item = (&[f64], f64)>> {
        match &self.storage {
            Storage::Dense { points, weights } => Ok(weights
                .iter()
                .enumerate()
                .map(move |(i, &w)| (&points[i * self.ambient..(i + 1) * self.ambient], w))),
            Storage::Sliced(_) => Err(Error::domain("sliced grids do not materialize nodes")),
        }
    }

    /// Bit-level fingerprint of nodes and weights (determinism tests).
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64;
        let mut feed = |v: f64| {
            h ^= v.to_bits();
            h = h.wrapping_mul(0x100000001b3);
        };
        match &self.storage {
            Storage::Dense { points, weights } => {
                points.iter().copied().for_each(&mut feed);
                weights.iter().copied().for_each(&mut feed);
            }
            Storage::Sliced(s) => {
                s.radii.iter().copied().for_each(&mut feed);
                s.radial_weights.iter().copied().for_each(&mut feed);
                s.template_points.iter().copied().for_each(&mut feed);
                s.template_weights.iter().copied().for_each(&mut feed);
            }
        }
        h
    }
}

fn check_orders(orders: &[usize], axes: usize) -> Result<()> {
    if orders.len() != axes {
        return Err(Error::domain(format!(
            "expected {axes} axis orders, got {}",
            orders.len()
        )));
    }
    if orders.iter().any(|&q| q == 0) {
        return Err(Error::domain("every axis order must be positive"));
    }
    let total: usize = orders.iter().product();
    if total > MAX_DENSE_NODES {
        return Err(Error::Resource(format!(
            "grid would materialize {total} nodes (cap {MAX_DENSE_NODES})"
        )));
    }
    Ok(())
}

/// Flat product grid on the unit `S^m` in standard coordinates:
/// Gauss rules in the polar cosines, uniform midpoints in the azimuth.
fn product_nodes(m: usize, orders: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_orders(orders, m)?;
    let n_azimuth = orders[m - 1];
    let mut polar: Vec<Rule1d> = Vec::with_capacity(m - 1);
    for (i, &q) in orders[..m - 1].iter().enumerate() {
        polar.push(gauss_sin_power(q, m - 1 - i)?);
    }
    let tau = 2.0 * std::f64::consts::PI;
    let az_w = tau / n_azimuth as f64;
    let total: usize = orders.iter().product();
    let mut points = Vec::with_capacity(total * (m + 1));
    let mut weights = Vec::with_capacity(total);

    let mut idx = vec![0usize; m - 1];
    loop {
        // polar prefix for this combination
        let mut coords = vec![0.0f64; m + 1];
        let mut prefix = 1.0f64;
        let mut w_polar = 1.0f64;
        for (axis, rule) in polar.iter().enumerate() {
            let t = rule.nodes[idx[axis]];
            coords[axis] = prefix * t;
            prefix *= (1.0 - t * t).max(0.0).sqrt();
            w_polar *= rule.weights[idx[axis]];
        }
        for j in 0..n_azimuth {
            let phi = tau * (j as f64 + 0.5) / n_azimuth as f64;
            coords[m - 1] = prefix * phi.cos();
            coords[m] = prefix * phi.sin();
            points.extend_from_slice(&coords);
            weights.push(w_polar * az_w);
        }
        // advance the polar multi-index (axis 0 slowest)
        let mut axis = m - 1;
        loop {
            if axis == 0 {
                return Ok((points, weights));
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < orders[axis] {
                break;
            }
            idx[axis] = 0;
            if axis == 0 {
                return Ok((points, weights));
            }
        }
    }
}

/// Product quadrature grid on `S^m`. `orders` lists one node count per
/// axis (`m−1` polar angles, azimuth last).
pub fn quad_sphere(m: usize, orders: &[usize]) -> Result<QuadratureGrid> {
    if m < 1 {
        return Err(Error::domain("sphere dimension must be at least 1"));
    }
    if m == 1 {
        check_orders(orders, 1)?;
        let n = orders[0];
        let tau = 2.0 * std::f64::consts::PI;
        let mut points = Vec::with_capacity(2 * n);
        for j in 0..n {
            let phi = tau * (j as f64 + 0.5) / n as f64;
            points.push(phi.cos());
            points.push(phi.sin());
        }
        return Ok(QuadratureGrid {
            kind: GridKind::Product,
            dim: 1,
            ambient: 2,
            seed: None,
            resolution: orders.to_vec(),
            storage: Storage::Dense {
                points,
                weights: vec![tau / n as f64; n],
            },
        });
    }
    let (points, weights) = product_nodes(m, orders)?;
    Ok(QuadratureGrid {
        kind: GridKind::Product,
        dim: m,
        ambient: m + 1,
        seed: None,
        resolution: orders.to_vec(),
        storage: Storage::Dense { points, weights },
    })
}

/// Quadrature on the parallel of latitude `theta` around `pole`, as a
/// submanifold of the big sphere. Node weights carry the parallel's
/// `2n`-volume: they sum to `sin^{2n}(r) · vol(S^{2n})`.
pub fn quad_parallel(pole: &SpherePoint, theta: f64, orders: &[usize]) -> Result<QuadratureGrid> {
    let ambient = pole.ambient_dim();
    let sub_dim = ambient - 2; // dimension of the parallel
    if theta.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::domain("latitude must lie inside (−π/2, π/2)"));
    }
    let template = quad_sphere(sub_dim, orders)?;
    let basis = orthonormal_complement(&[pole.coords()], ambient);
    let (sin_t, cos_t) = theta.sin_cos();
    let scale = cos_t.powi(sub_dim as i32);
    let (tpoints, tweights) = match template.storage {
        Storage::Dense { points, weights } => (points, weights),
        _ => unreachable!(),
    };
    let stride = sub_dim + 1;
    let count = tweights.len();
    let mut points = Vec::with_capacity(count * ambient);
    let mut weights = Vec::with_capacity(count);
    for i in 0..count {
        let y = &tpoints[i * stride..(i + 1) * stride];
        let mut x: Vec<f64> = pole.coords().iter().map(|p| sin_t * p).collect();
        for (j, b) in basis.iter().enumerate() {
            for (a, xa) in x.iter_mut().enumerate() {
                *xa += cos_t * y[j] * b[a];
            }
        }
        points.extend_from_slice(&x);
        weights.push(scale * tweights[i]);
    }
    Ok(QuadratureGrid {
        kind: GridKind::Parallel,
        dim: sub_dim,
        ambient,
        seed: None,
        resolution: orders.to_vec(),
        storage: Storage::Dense { points, weights },
    })
}

/// Latitude-sliced grid over the whole sphere around `pole`:
/// Gauss–Legendre in colatitude `r ∈ (0,π)` (open nodes, so the poles are
/// never evaluated) times a parallel product grid, slice measure
/// `sin^{2n} r` included.
pub fn quad_sliced(
    pole: &SpherePoint,
    slices: usize,
    parallel_orders: &[usize],
) -> Result<QuadratureGrid> {
    let ambient = pole.ambient_dim();
    let sub_dim = ambient - 2;
    if slices == 0 {
        return Err(Error::domain("slice count must be positive"));
    }
    let template = quad_sphere(sub_dim, parallel_orders)?;
    let basis = orthonormal_complement(&[pole.coords()], ambient);
    let gl = gauss_legendre(slices)?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let radii: Vec<f64> = gl.nodes.iter().map(|t| (t + 1.0) * half_pi).collect();
    let radial_weights: Vec<f64> = gl.weights.iter().map(|w| w * half_pi).collect();
    let (template_points, template_weights) = match template.storage {
        Storage::Dense { points, weights } => (points, weights),
        _ => unreachable!(),
    };
    let mut resolution = vec![slices];
    resolution.extend_from_slice(parallel_orders);
    Ok(QuadratureGrid {
        kind: GridKind::Sliced,
        dim: ambient - 1,
        ambient,
        seed: None,
        resolution,
        storage: Storage::Sliced(SlicedStorage {
            pole: pole.coords().to_vec(),
            basis,
            radii,
            radial_weights,
            template_points,
            template_weights,
        }),
    })
}

/// Uniform Monte Carlo sample of `S^m` via normalized Gaussians. Every
/// node gets weight `vol(S^m)/count`, so constants integrate exactly.
/// Node `i` draws from stream `i` of a counter-based generator seeded
/// with `seed`, which makes the sample both reproducible and splittable.
pub fn mc_sample(m: usize, count: usize, seed: u64) -> Result<QuadratureGrid> {
    if count == 0 {
        return Err(Error::domain("sample count must be positive"));
    }
    if count > MAX_DENSE_NODES {
        return Err(Error::Resource(format!(
            "sample of {count} nodes exceeds cap {MAX_DENSE_NODES}"
        )));
    }
    let ambient = m + 1;
    let w = sphere_volume(m)? / count as f64;
    let points: Vec<f64> = (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut x = vec![0.0f64; ambient];
            loop {
                for c in x.iter_mut() {
                    *c = rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal);
                }
                let n = norm(&x);
                if n > 1e-8 {
                    for c in x.iter_mut() {
                        *c /= n;
                    }
                    break;
                }
            }
            x.into_iter()
        })
        .collect();
    Ok(QuadratureGrid {
        kind: GridKind::MonteCarlo,
        dim: m,
        ambient,
        seed: Some(seed),
        resolution: vec![count],
        storage: Storage::Dense {
            points,
            weights: vec![w; count],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_classic_nodes() {
        let r = gauss_legendre(3).unwrap();
        let x = (3.0f64 / 5.0).sqrt();
        assert_abs_diff_eq!(r.nodes[0], -x, epsilon = 1e-14);
        assert_abs_diff_eq!(r.nodes[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.nodes[2], x, epsilon = 1e-14);
        assert_abs_diff_eq!(r.weights[0], 5.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.weights[1], 8.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_sin2_matches_chebyshev_u() {
        // weight sin²φ in t = cos φ is the Chebyshev rule of the second
        // kind: nodes cos(iπ/(q+1)), weights (π/(q+1))·sin²(iπ/(q+1))
        let q = 9;
        let r = gauss_sin_power(q, 2).unwrap();
        let pi = std::f64::consts::PI;
        for i in 1..=q {
            let theta = i as f64 * pi / (q + 1) as f64;
            let node = theta.cos();
            let j = q - i; // ascending order
            assert_abs_diff_eq!(r.nodes[j], node, epsilon = 1e-12);
            assert_abs_diff_eq!(
                r.weights[j],
                pi / (q + 1) as f64 * theta.sin().powi(2),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn gauss_rules_moment_exactness() {
        // M_{2j} = M_{2j−2} (2j−1)/(2j+k), M_0 = ∫ sin^k
        for k in 1..=5usize {
            let q = 10;
            let r = gauss_sin_power(q, k).unwrap();
            let mut moment = wallis(k);
            let mut j = 0usize;
            while 2 * j <= 2 * q - 1 {
                if j > 0 {
                    moment *= (2.0 * j as f64 - 1.0) / (2.0 * j as f64 + k as f64);
                }
                let quad: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(t, w)| t.powi(2 * j as i32) * w)
                    .sum();
                assert_abs_diff_eq!(quad, moment, epsilon = 1e-12 * moment.abs().max(1.0));
                // odd moments vanish by symmetry
                let odd: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(t, w)| t.powi(2 * j as i32 + 1) * w)
                    .sum();
                assert_abs_diff_eq!(odd, 0.0, epsilon = 1e-13);
                j += 1;
            }
        }
    }

    /// Exact monomial integral over S^m: zero unless all exponents are
    /// even, else 2·ΠΓ(β_i)/Γ(Σβ_i) with β_i = (α_i+1)/2.
    fn monomial_integral(alphas: &[usize]) -> f64 {
        if alphas.iter().any(|a| a % 2 == 1) {
            return 0.0;
        }
        // Γ at half-integer arguments j/2
        fn gamma_half(j: usize) -> f64 {
            match j {
                1 => std::f64::consts::PI.sqrt(),
                2 => 1.0,
                _ => (j as f64 / 2.0 - 1.0) * gamma_half(j - 2),
            }
        }
        let betas2: Vec<usize> = alphas.iter().map(|a| a + 1).collect(); // 2β_i
        let total: usize = betas2.iter().sum();
        let mut v = 2.0;
        for &b2 in &betas2 {
            v *= gamma_half(b2);
        }
        v / gamma_half(total)
    }

    #[test]
    fn sphere_grid_weight_sums() {
        for (m, orders) in [
            (1usize, vec![17]),
            (2, vec![8, 16]),
            (3, vec![8, 8, 16]),
            (4, vec![6, 6, 6, 12]),
        ] {
            let g = quad_sphere(m, &orders).unwrap();
            assert_abs_diff_eq!(g.weight_sum(), sphere_volume(m).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn sphere_grid_monomial_exactness() {
        // order-q grids must integrate all spherical polynomials of
        // degree ≤ 2q−1 to 1e-10 relative accuracy
        let q = 8usize;
        for (m, orders) in [(2usize, vec![q, 2 * q]), (3, vec![q, q, 2 * q])] {
            let g = quad_sphere(m, &orders).unwrap();
            let vol = sphere_volume(m).unwrap();
            let mut alphas = vec![0usize; m + 1];
            // exhaustive low-degree sweep plus a high-degree corner
            let mut cases: Vec<Vec<usize>> = Vec::new();
            for a0 in 0..=4 {
                for a1 in 0..=4 {
                    for a2 in 0..=3 {
                        alphas[0] = a0;
                        alphas[1] = a1;
                        alphas[2] = a2;
                        cases.push(alphas.clone());
                    }
                }
            }
            cases.push({
                let mut v = vec![0; m + 1];
                v[0] = 2 * q - 2; // degree 2q−2 ≤ 2q−1
                v
            });
            cases.push({
                let mut v = vec![0; m + 1];
                v[m] = 2 * q - 2;
                v
            });
            for alphas in cases {
                if alphas.iter().sum::<usize>() > 2 * q - 1 {
                    continue;
                }
                let exact = monomial_integral(&alphas);
                let quad = g
                    .try_integrate(|x| {
                        Ok(x.iter()
                            .zip(&alphas)
                            .map(|(xi, &a)| xi.powi(a as i32))
                            .product())
                    })
                    .unwrap();
                assert_abs_diff_eq!(quad, exact, epsilon = 1e-10 * exact.abs().max(vol));
            }
        }
    }

    #[test]
    fn s2_x1_squared() {
        let g = quad_sphere(2, &[16, 32]).unwrap();
        let v = g.try_integrate(|x| Ok(x[0] * x[0])).unwrap();
        assert_abs_diff_eq!(v, 4.0 * std::f64::consts::PI / 3.0, epsilon = 1e-8);
    }

    #[test]
    fn parallel_measure() {
        let pole = SpherePoint::axis(4, 3).unwrap();
        for theta in [-1.1f64, -0.3, 0.0, 0.7, 1.4] {
            let g = quad_parallel(&pole, theta, &[12, 24]).unwrap();
            let r = std::f64::consts::FRAC_PI_2 - theta;
            let expected = r.sin().powi(2) * sphere_volume(2).unwrap();
            assert_abs_diff_eq!(g.weight_sum(), expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn sliced_weight_sum_and_node_count() {
        let pole = SpherePoint::axis(4, 3).unwrap();
        let g = quad_sliced(&pole, 24, &[12, 24]).unwrap();
        assert_abs_diff_eq!(g.weight_sum(), sphere_volume(3).unwrap(), epsilon = 1e-10);
        assert_eq!(g.len(), 24 * 12 * 24);

        // sliced integration agrees with a product grid on a smooth function
        let prod = quad_sphere(3, &[24, 24, 48]).unwrap();
        let f = |x: &[f64]| Ok(x[0] * x[0] + 0.25 * x[3] * x[3] * x[3] * x[3]);
        let a = g.try_integrate(f).unwrap();
        let b = prod.try_integrate(f).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-8);
    }

    #[test]
    fn grids_are_deterministic() {
        let pole = SpherePoint::axis(4, 3).unwrap();
        let a = quad_sliced(&pole, 12, &[8, 16]).unwrap();
        let b = quad_sliced(&pole, 12, &[8, 16]).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());

        let a = mc_sample(3, 5000, 42).unwrap();
        let b = mc_sample(3, 5000, 42).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = mc_sample(3, 5000, 43).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn mc_sample_statistics() {
        let g = mc_sample(3, 1_000_000, 42).unwrap();
        let vol = sphere_volume(3).unwrap();
        assert_abs_diff_eq!(g.weight_sum(), vol, epsilon = 1e-9 * vol);

        // sample mean of x_1 is 0 within 3 standard errors
        let mean = g.try_integrate(|x| Ok(x[0])).unwrap() / vol;
        // Var(x_1) = 1/(m+1) = 1/4 on S³
        let stderr = (0.25f64 / 1_000_000.0).sqrt();
        assert!(mean.abs() < 3.0 * stderr, "mean {mean}, stderr {stderr}");

        for (p, _) in g.dense_nodes().unwrap() {
            debug_assert!((norm(p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_spec_json_round_trip() {
        let txt = r#"{"kind":"sliced","slices":40,"parallel":[24,24,24,48],"seed":null}"#;
        let spec: GridSpec = serde_json::from_str(txt).unwrap();
        assert_eq!(
            spec,
            GridSpec::Sliced {
                slices: 40,
                parallel: vec![24, 24, 24, 48],
                seed: None
            }
        );
        let again: GridSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);

        let txt = r#"{"kind":"monte-carlo","count":1000,"seed":7}"#;
        let spec: GridSpec = serde_json::from_str(txt).unwrap();
        assert_eq!(spec.kind(), GridKind::MonteCarlo);

        assert!(serde_json::from_str::<GridSpec>(r#"{"kind":"nope"}"#).is_err());
    }

    #[test]
    fn zero_resolution_rejected() {
        assert!(quad_sphere(2, &[0, 8]).is_err());
        assert!(quad_sphere(2, &[8]).is_err());
        assert!(mc_sample(2, 0, 1).is_err());
        let pole = SpherePoint::axis(4, 3).unwrap();
        assert!(quad_sliced(&pole, 0, &[8, 16]).is_err());
        assert!(quad_parallel(&pole, 1.6, &[8, 16]).is_err());
    }
}
