//! The two integrals at the heart of the crate: the volume of a unit
//! vector field and the flux of the Euler form of its normal
//! distribution through parallels, together with constancy scans and
//! pole limits.
//!
//! The flux density is evaluated honestly from the adapted frame: the
//! closed expansion is applied in a positively-oriented sphere frame and
//! evaluated on a positively-oriented parallel frame, with the two
//! orientation signs computed as ambient determinants. Under these
//! conventions the radial field from the scan pole has flux `+2` through
//! every parallel.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::VectorFieldSpec;
use crate::matrix::{elem_sym, gram_volume, sigma_perp};
use crate::quad::{mc_sample, quad_parallel, quad_sliced, quad_sphere, GridSpec, QuadratureGrid};
use crate::sphere::vecops::{dot, scaled};
use crate::sphere::{adapted_frame, ambient_det, sphere_volume, tangent_basis, SpherePoint};

/// Persisted outcome of a volume computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// One-refinement-halving delta for deterministic grids, standard
    /// error for Monte Carlo.
    pub error_estimate: f64,
    /// `value / vol(S^{2n+1})`.
    pub normalized: f64,
    pub sphere_volume: f64,
    pub field: VectorFieldSpec,
    pub grid: GridSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

/// One pole limit of a flux scan, reported in both orientation
/// conventions: `scan_oriented` keeps the parallels oriented as
/// boundaries of balls around the scan pole; `ball_oriented` orients the
/// small spheres as boundaries of balls around the nearby singularity.
/// For the north pole the two agree; for the south pole they differ by
/// sign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleLimit {
    /// `(colatitude from the respective pole, flux)` samples.
    pub samples: Vec<(f64, f64)>,
    pub scan_oriented: f64,
    pub ball_oriented: f64,
    /// Half the ball-oriented limit: the degree/index estimate.
    pub index_estimate: f64,
}

/// Fluxes of the Euler form through a family of parallels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FluxScan {
    pub pole: SpherePoint,
    pub thetas: Vec<f64>,
    pub fluxes: Vec<f64>,
    /// `max − min` over the scanned fluxes.
    pub deviation: f64,
    pub north: PoleLimit,
    pub south: PoleLimit,
}

/// `√det(Id + (∇v)ᵀ(∇v))` at `x`, computed in a deterministic
/// orthonormal tangent frame. Frame choice is immaterial; see
/// [`volume_integrand_in_frame`].
pub fn volume_integrand(f: &VectorFieldSpec, x: &SpherePoint) -> Result<f64> {
    volume_integrand_in_frame(f, x, &tangent_basis(x))
}

/// Same integrand evaluated in a caller-supplied orthonormal tangent
/// frame (used by the frame-invariance checks).
pub fn volume_integrand_in_frame(
    f: &VectorFieldSpec,
    x: &SpherePoint,
    basis: &[Vec<f64>],
) -> Result<f64> {
    let m = f.tangent_shape(x, basis)?;
    gram_volume(&m)
}

/// Lower-bound density from the even symmetric functions alone:
/// `Σ_k C(n,k)C(2n,2k)⁻¹ |σ_{2k}|` in a frame adapted to the field.
pub fn bcn_density(f: &VectorFieldSpec, x: &SpherePoint) -> Result<f64> {
    let v = f.eval(x)?;
    let mut basis = crate::sphere::orthonormal_complement(&[x.coords(), &v], x.ambient_dim());
    basis.push(v);
    let shape = f.shape_matrix(x, &basis)?;
    let block = shape.ij_block();
    let n = f.n as u64;
    let mut total = 0.0;
    for k in 0..=n {
        total += crate::combinatorics::sigma_coefficient_f64(n, k)
            * elem_sym(&block, 2 * k as usize)?.abs();
    }
    Ok(total)
}

/// Pointwise density of the Euler-form pullback on the parallel through
/// `x` around `pole`, with respect to the parallel's volume measure and
/// its ball-boundary orientation.
pub fn flux_density(f: &VectorFieldSpec, x: &SpherePoint, pole: &SpherePoint) -> Result<f64> {
    let v = f.eval(x)?;
    let frame = adapted_frame(x, pole, &v)?;
    let shape = f.shape_matrix(x, &frame.vectors)?;
    let block = shape.ij_block();
    let two_n = 2 * f.n;

    // parallel-orientation sign of the frame (e_1..e_{2n−1}, w)
    let minus_n = scaled(&frame.normal, -1.0);
    let mut cols: Vec<&[f64]> = Vec::with_capacity(x.ambient_dim());
    cols.push(x.coords());
    cols.push(&minus_n);
    for e in &frame.vectors[..two_n - 1] {
        cols.push(e);
    }
    cols.push(&frame.tangential);
    let t = ambient_det(&cols).signum();

    // coframe values on t·w in the adapted frame
    let omega_2n = t * dot(&frame.tangential, &frame.vectors[two_n - 1]);
    let omega_last = t * dot(&frame.tangential, frame.field());

    let n = f.n as u64;
    let mut total = 0.0;
    for k in 0..=n {
        let c = crate::combinatorics::sigma_coefficient_f64(n, k);
        let s = elem_sym(&block, 2 * k as usize)?;
        let sp = sigma_perp(&shape, 2 * k as usize, two_n)?;
        total += c * (s * omega_2n + sp * omega_last);
    }
    Ok(2.0 / sphere_volume(two_n)? * total)
}

/// Flux of the Euler form through the parallel of latitude `theta`
/// around `pole`, boundary-of-ball orientation.
pub fn parallel_flux(
    f: &VectorFieldSpec,
    pole: &SpherePoint,
    theta: f64,
    orders: &[usize],
) -> Result<f64> {
    let grid = quad_parallel(pole, theta, orders)?;
    grid.try_integrate(|p| {
        let x = SpherePoint::project(p)?;
        flux_density(f, &x, pole)
    })
}

/// Neville extrapolation to `r = 0` of samples `(r, value)`, linear in
/// `r²` per extrapolation level.
fn extrapolate_in_r_squared(samples: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = samples.iter().map(|s| s.0 * s.0).collect();
    let mut vals: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let n = vals.len();
    for level in 1..n {
        for i in 0..n - level {
            vals[i] = (xs[i + level] * vals[i] - xs[i] * vals[i + 1]) / (xs[i + level] - xs[i]);
        }
    }
    vals[0]
}

/// Colatitudes used for the pole-limit estimates of fields with analytic
/// derivatives.
pub const POLE_LIMIT_COLATITUDES: [f64; 3] = [0.2, 0.1, 0.05];

/// Colatitudes used when the field's derivatives come from central
/// differences: a pattern of local degree `d` varies on the scale
/// `r·tan(r/2)^{d−1}` near its singularity, which drops below any usable
/// difference step on the tightest parallels above. The flux is constant
/// across parallels, so larger colatitudes estimate the same limit.
pub const POLE_LIMIT_COLATITUDES_STIFF: [f64; 3] = [0.6, 0.45, 0.3];

/// Colatitudes and parallel orders used for the pole-limit parallels of
/// a scan. Central-difference fields get the stiff colatitudes and a
/// floor on the grid orders so the concentrated density stays resolved.
pub fn pole_limit_plan(f: &VectorFieldSpec, orders: &[usize]) -> ([f64; 3], Vec<usize>) {
    match f.deriv {
        crate::fields::DerivMode::Analytic => (POLE_LIMIT_COLATITUDES, orders.to_vec()),
        crate::fields::DerivMode::CentralDiff { .. } => {
            let floor: Vec<usize> = if f.n == 1 {
                vec![256, 512]
            } else {
                orders.iter().map(|&q| 2 * q).collect()
            };
            let merged = orders
                .iter()
                .zip(&floor)
                .map(|(&a, &b)| a.max(b))
                .collect();
            (POLE_LIMIT_COLATITUDES_STIFF, merged)
        }
    }
}

/// Fluxes through a family of parallels plus extrapolated limits at both
/// poles. Parallels keep the scan pole's ball-boundary orientation
/// throughout; the south limit is additionally reported as the boundary
/// of a ball around the south point (opposite sign).
pub fn stokes_scan(
    f: &VectorFieldSpec,
    pole: &SpherePoint,
    thetas: &[f64],
    orders: &[usize],
) -> Result<FluxScan> {
    if thetas.len() < 2 {
        return Err(Error::config("a scan needs at least two latitudes"));
    }
    if thetas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("latitudes must be strictly increasing"));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    if thetas.iter().any(|t| t.abs() >= half_pi) {
        return Err(Error::config("latitudes must lie inside (−π/2, π/2)"));
    }
    let mut fluxes = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        fluxes.push(parallel_flux(f, pole, theta, orders)?);
    }
    let max = fluxes.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let min = fluxes.iter().fold(f64::INFINITY, |m, &v| m.min(v));

    let (radii, limit_orders) = pole_limit_plan(f, orders);
    let mut north_samples = Vec::new();
    let mut south_samples = Vec::new();
    for &r in &radii {
        north_samples.push((r, parallel_flux(f, pole, half_pi - r, &limit_orders)?));
        south_samples.push((r, parallel_flux(f, pole, -half_pi + r, &limit_orders)?));
    }
    let north_limit = extrapolate_in_r_squared(&north_samples);
    let south_limit = extrapolate_in_r_squared(&south_samples);

    Ok(FluxScan {
        pole: pole.clone(),
        thetas: thetas.to_vec(),
        fluxes,
        deviation: max - min,
        north: PoleLimit {
            samples: north_samples,
            scan_oriented: north_limit,
            ball_oriented: north_limit,
            index_estimate: north_limit / 2.0,
        },
        south: PoleLimit {
            samples: south_samples,
            scan_oriented: south_limit,
            ball_oriented: -south_limit,
            index_estimate: -south_limit / 2.0,
        },
    })
}

/// Euler-form fluxes through geodesic spheres of the given colatitude
/// around arbitrary isolated singular points, each oriented as the
/// boundary of the ball around its own point. The radius must not exceed
/// half the minimal pairwise geodesic distance.
pub fn singularity_fluxes(
    f: &VectorFieldSpec,
    points: &[SpherePoint],
    radius: f64,
    orders: &[usize],
) -> Result<Vec<f64>> {
    if !(0.0..std::f64::consts::PI).contains(&radius) || radius == 0.0 {
        return Err(Error::config("flux radius must lie in (0, π)"));
    }
    for (i, p) in points.iter().enumerate() {
        for q in points.iter().skip(i + 1) {
            let d = p.geodesic_distance(q);
            if radius > d / 2.0 {
                return Err(Error::config(format!(
                    "radius {radius} exceeds half the pairwise distance {d:.4}"
                )));
            }
        }
    }
    points
        .iter()
        .map(|p| parallel_flux(f, p, std::f64::consts::FRAC_PI_2 - radius, orders))
        .collect()
}

/// Raw weighted sum of the volume integrand over a grid.
pub fn volume_on_grid(f: &VectorFieldSpec, grid: &QuadratureGrid) -> Result<f64> {
    if grid.ambient != f.ambient_dim() {
        return Err(Error::config(
            "grid and field live on different spheres",
        ));
    }
    grid.try_integrate(|p| {
        let x = SpherePoint::project(p)?;
        volume_integrand(f, &x)
    })
}

fn build_volume_grid(f: &VectorFieldSpec, spec: &GridSpec, seed: Option<u64>) -> Result<QuadratureGrid> {
    let m = 2 * f.n + 1;
    match spec {
        GridSpec::Product { orders } => {
            if f.is_singular() {
                return Err(Error::config(format!(
                    "the {} field is singular; its volume integrand is unbounded, so product \
                     grids are refused — use a sliced grid whose open slice nodes avoid the poles",
                    f.kind
                )));
            }
            quad_sphere(m, orders)
        }
        GridSpec::Sliced {
            slices, parallel, ..
        } => {
            let pole = f
                .pole
                .clone()
                .unwrap_or_else(|| VectorFieldSpec::default_pole(f.n));
            quad_sliced(&pole, *slices, parallel)
        }
        GridSpec::MonteCarlo { count, .. } => {
            if f.is_singular() {
                return Err(Error::config(format!(
                    "Monte Carlo volume integration is refused for the {} field: the integrand \
                     is unbounded near its singularities and the second moment diverges",
                    f.kind
                )));
            }
            mc_sample(m, *count, seed.expect("seed resolved by caller"))
        }
        GridSpec::Parallel { .. } => Err(Error::config(
            "parallel grid specs describe scan parallels, not volume grids",
        )),
    }
}

/// Volume of the field over the sphere with an error estimate: one
/// refinement halving for deterministic grids, standard error for Monte
/// Carlo. Singular fields must use sliced grids around their own pole.
pub fn volume(f: &VectorFieldSpec, spec: &GridSpec) -> Result<VolumeEstimate> {
    let m = 2 * f.n + 1;
    let vol_m = sphere_volume(m)?;
    let seed = match spec {
        GridSpec::MonteCarlo { seed, .. } => Some(seed.unwrap_or_else(|| rand::rng().random())),
        _ => None,
    };
    let grid = build_volume_grid(f, spec, seed)?;
    let value = volume_on_grid(f, &grid)?;

    let error_estimate = match spec {
        GridSpec::MonteCarlo { count, .. } => {
            let mean = value / vol_m;
            let mean_sq = grid.try_integrate(|p| {
                let x = SpherePoint::project(p)?;
                let g = volume_integrand(f, &x)?;
                Ok(g * g)
            })? / vol_m;
            let var = (mean_sq - mean * mean).max(0.0);
            vol_m * (var / *count as f64).sqrt()
        }
        _ => {
            let coarse_grid = build_volume_grid(f, &spec.coarsened(), seed)?;
            let coarse = volume_on_grid(f, &coarse_grid)?;
            (value - coarse).abs()
        }
    };

    let recorded_spec = match (spec, seed) {
        (GridSpec::MonteCarlo { count, .. }, Some(s)) => GridSpec::MonteCarlo {
            count: *count,
            seed: Some(s),
        },
        _ => spec.clone(),
    };

    Ok(VolumeEstimate {
        value,
        error_estimate,
        normalized: value / vol_m,
        sphere_volume: vol_m,
        field: f.clone(),
        grid: recorded_spec,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DerivMode;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pole4() -> SpherePoint {
        SpherePoint::axis(4, 3).unwrap()
    }

    fn point_at_colatitude(pole: &SpherePoint, r: f64, seed: u64) -> SpherePoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = pole.ambient_dim();
        let raw: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let tang = crate::sphere::tangent_project(pole, &raw);
        let u = crate::sphere::vecops::normalize(&tang).unwrap();
        let x: Vec<f64> = pole
            .coords()
            .iter()
            .zip(&u)
            .map(|(p, t)| r.cos() * p + r.sin() * t)
            .collect();
        SpherePoint::new(x).unwrap()
    }

    #[test]
    fn hopf_integrand_is_two() {
        let f = VectorFieldSpec::hopf(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let x = crate::sphere::SpherePoint::project(
                &(0..4)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_abs_diff_eq!(volume_integrand(&f, &x).unwrap(), 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn radial_integrand_matches_closed_form() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
        for (i, r) in [0.3f64, 0.9, 1.5708, 2.4].iter().enumerate() {
            let x = point_at_colatitude(&q, *r, i as u64);
            let expected = 1.0 / r.sin().powi(2);
            assert_abs_diff_eq!(
                volume_integrand(&f, &x).unwrap(),
                expected,
                epsilon = 1e-9 * expected
            );
        }
    }

    #[test]
    fn bcn_density_radial_equality_and_bound() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
        for (i, r) in [0.4f64, 1.1, 2.0].iter().enumerate() {
            let x = point_at_colatitude(&q, *r, 100 + i as u64);
            let b = bcn_density(&f, &x).unwrap();
            let v = volume_integrand(&f, &x).unwrap();
            assert_abs_diff_eq!(b, v, epsilon = 1e-9 * v);
        }

        // pointwise lower bound on the perturbed field
        let g = VectorFieldSpec::perturbed_hopf(1, 0.2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let x = crate::sphere::SpherePoint::project(
                &(0..4)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let b = bcn_density(&g, &x).unwrap();
            let v = volume_integrand(&g, &x).unwrap();
            assert!(v >= b - 1e-9, "BCN density exceeded the integrand");
        }
    }

    #[test]
    fn radial_flux_density_and_parallel_flux() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
        // r = π/2: density = 2/(4π)
        let x = point_at_colatitude(&q, std::f64::consts::FRAC_PI_2, 7);
        let d = flux_density(&f, &x, &q).unwrap();
        assert_abs_diff_eq!(d, 2.0 / (4.0 * std::f64::consts::PI), epsilon = 1e-10);

        for theta in [-1.0f64, -0.4, 0.0, 0.8] {
            let flux = parallel_flux(&f, &q, theta, &[24, 48]).unwrap();
            assert_abs_diff_eq!(flux, 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn hopf_flux_vanishes() {
        let f = VectorFieldSpec::hopf(1).unwrap();
        let q = pole4();
        for theta in [-0.9f64, 0.0, 0.6] {
            let flux = parallel_flux(&f, &q, theta, &[32, 64]).unwrap();
            assert_abs_diff_eq!(flux, 0.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn radial_scan_constancy_and_limits() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
        let thetas = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let scan = stokes_scan(&f, &q, &thetas, &[24, 48]).unwrap();
        assert!(scan.deviation <= 1e-9);
        for flux in &scan.fluxes {
            assert_abs_diff_eq!(*flux, 2.0, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(scan.north.ball_oriented, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(scan.south.ball_oriented, -2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(scan.south.scan_oriented, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(scan.north.index_estimate, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(scan.south.index_estimate, -1.0, epsilon = 1e-6);
    }

    #[test]
    fn scan_input_validation() {
        let q = pole4();
        let f = VectorFieldSpec::hopf(1).unwrap();
        assert!(stokes_scan(&f, &q, &[0.0], &[8, 16]).is_err());
        assert!(stokes_scan(&f, &q, &[0.5, 0.1], &[8, 16]).is_err());
        assert!(stokes_scan(&f, &q, &[0.0, 1.7], &[8, 16]).is_err());
    }

    #[test]
    fn hopf_volume_estimate() {
        let f = VectorFieldSpec::hopf(1).unwrap();
        let spec = GridSpec::Product {
            orders: vec![16, 16, 32],
        };
        let est = volume(&f, &spec).unwrap();
        let expected = 2.0 * sphere_volume(3).unwrap();
        assert_abs_diff_eq!(est.value, expected, epsilon = 1e-9 * expected);
        assert_abs_diff_eq!(est.normalized, 2.0, epsilon = 1e-10);
        assert!(est.normalized >= 1.0 - est.error_estimate);
    }

    #[test]
    fn radial_volume_estimate_sliced() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q).unwrap();
        let spec = GridSpec::Sliced {
            slices: 16,
            parallel: vec![16, 32],
            seed: None,
        };
        let est = volume(&f, &spec).unwrap();
        let expected = 4.0 * std::f64::consts::PI.powi(2);
        assert_abs_diff_eq!(est.value, expected, epsilon = 1e-8 * expected);
        assert_abs_diff_eq!(est.normalized, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn grid_refusals() {
        let q = pole4();
        let radial = VectorFieldSpec::radial(1, q).unwrap();
        assert!(matches!(
            volume(&radial, &GridSpec::Product { orders: vec![8, 8, 16] }),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            volume(
                &radial,
                &GridSpec::MonteCarlo {
                    count: 1000,
                    seed: Some(1)
                }
            ),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn mc_volume_hopf() {
        let f = VectorFieldSpec::hopf(1).unwrap();
        let spec = GridSpec::MonteCarlo {
            count: 20_000,
            seed: Some(11),
        };
        let est = volume(&f, &spec).unwrap();
        // constant integrand: exact mean, variance at roundoff level
        assert_abs_diff_eq!(est.normalized, 2.0, epsilon = 1e-12);
        assert!(est.error_estimate < 1e-6);
        assert_eq!(est.seed, Some(11));

        // absent seed gets drawn and recorded
        let est2 = volume(
            &f,
            &GridSpec::MonteCarlo {
                count: 1000,
                seed: None,
            },
        )
        .unwrap();
        assert!(est2.seed.is_some());
        match est2.grid {
            GridSpec::MonteCarlo { seed, .. } => assert_eq!(seed, est2.seed),
            _ => panic!("grid kind changed"),
        }
    }

    #[test]
    fn volume_integrand_frame_invariance() {
        let q = pole4();
        let fields = [
            VectorFieldSpec::hopf(1).unwrap(),
            VectorFieldSpec::radial(1, q.clone()).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for f in &fields {
            for trial in 0..50 {
                let x = point_at_colatitude(&q, 0.5 + 0.002 * trial as f64, 200 + trial);
                let base = volume_integrand(&f, &x).unwrap();
                for _ in 0..5 {
                    // random orthonormal tangent frame
                    let mut frame: Vec<Vec<f64>> = Vec::new();
                    while frame.len() < 3 {
                        let raw: Vec<f64> = (0..4)
                            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                            .collect();
                        let mut u = crate::sphere::tangent_project(&x, &raw);
                        for b in &frame {
                            u = crate::sphere::vecops::axpy(&u, -dot(&u, b), b);
                        }
                        if let Some(unit) = crate::sphere::vecops::normalize(&u) {
                            frame.push(unit);
                        }
                    }
                    let v = volume_integrand_in_frame(&f, &x, &frame).unwrap();
                    assert_abs_diff_eq!(v, base, epsilon = 1e-9 * base);
                }
            }
        }
    }

    #[test]
    fn power_field_flux_is_twice_the_degree() {
        let p = pole4();
        let f = VectorFieldSpec::power(1, 2, p.clone()).unwrap();
        let a = parallel_flux(&f, &p, 0.3, &[32, 64]).unwrap();
        let b = parallel_flux(&f, &p, 0.3, &[48, 96]).unwrap();
        assert_abs_diff_eq!(b, 4.0, epsilon = 1e-3);
        assert_abs_diff_eq!(a, b, epsilon = 1e-3);
    }

    #[test]
    fn singularity_fluxes_radius_validation() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
        let pts = [q.clone(), q.antipode()];
        assert!(singularity_fluxes(&f, &pts, 2.0, &[16, 32]).is_err());
        let fluxes = singularity_fluxes(&f, &pts, 0.3, &[24, 48]).unwrap();
        assert_abs_diff_eq!(fluxes[0], 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(fluxes[1], -2.0, epsilon = 1e-6);
    }

    #[test]
    fn fd_deriv_mode_flux_matches_analytic() {
        let q = pole4();
        let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
        let g = f.clone().with_deriv(DerivMode::CentralDiff { h: 1e-5 });
        let a = parallel_flux(&f, &q, 0.2, &[16, 32]).unwrap();
        let b = parallel_flux(&g, &q, 0.2, &[16, 32]).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-7);
    }
}
