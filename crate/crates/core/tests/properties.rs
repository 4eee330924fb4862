//! Cross-module property suites: random-matrix identities, catalog-field
//! invariants, frame covariance and numerical Stokes checks.

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use puncvol_core::fields::VectorFieldSpec;
use puncvol_core::functionals::{parallel_flux, volume_integrand};
use puncvol_core::matrix::{
    diag_bound_rhs, elem_sym, gram_volume, graph_volume, ShapeArray, SmallMatrix,
};
use puncvol_core::sphere::{adapted_frame, tangent_project, SpherePoint};

fn random_point(rng: &mut ChaCha8Rng, ambient: usize) -> SpherePoint {
    loop {
        let x: Vec<f64> = (0..ambient)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        if let Ok(p) = SpherePoint::project(&x) {
            return p;
        }
    }
}

#[test]
fn cauchy_binet_identity_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..10_000u32 {
        let size = 2 + (trial % 5) as usize; // sizes 2..6
        let data: Vec<f64> = (0..size * size)
            .map(|_| rng.random_range(-2.0..2.0))
            .collect();
        let m = SmallMatrix::new(size, size, data).unwrap();
        let a = graph_volume(&m).unwrap();
        let b = gram_volume(&m).unwrap();
        assert!(
            (a - b).abs() <= 1e-10 * a,
            "size {size}: minor sum {a} vs Gram {b}"
        );
    }
}

#[test]
fn diagonal_bound_100k_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for trial in 0..100_000u32 {
        let m = 1 + (trial % 4) as usize; // sizes 2, 4, 6, 8
        let entries: Vec<f64> = (0..2 * m).map(|_| rng.random_range(0.0..3.0)).collect();
        let d = SmallMatrix::diagonal(&entries);
        let lhs = gram_volume(&d).unwrap();
        let rhs = diag_bound_rhs(&d).unwrap();
        assert!(
            lhs >= rhs - 1e-12,
            "diagonal bound failed: vol {lhs} < rhs {rhs} for {entries:?}"
        );
    }
}

proptest! {
    #[test]
    fn sigma_perp_linear_in_acceleration(
        entries in proptest::collection::vec(-3.0f64..3.0, 6),
        acc in proptest::collection::vec(-3.0f64..3.0, 2),
        t in -4.0f64..4.0,
    ) {
        let build = |scale: f64| {
            let mut m = SmallMatrix::zeros(3, 3);
            for i in 0..2 {
                for j in 0..2 {
                    m[(i, j)] = entries[i * 2 + j];
                }
                m[(i, 2)] = scale * acc[i];
            }
            ShapeArray::new(1, m).unwrap()
        };
        let base = build(1.0);
        let scaled = build(t);
        for l in 1..=2usize {
            let a = puncvol_core::matrix::sigma_perp(&base, 2, l).unwrap();
            let b = puncvol_core::matrix::sigma_perp(&scaled, 2, l).unwrap();
            prop_assert!((b - t * a).abs() <= 1e-9 * (1.0 + a.abs() * t.abs()));
        }
    }

    #[test]
    fn graph_volume_at_least_one(entries in proptest::collection::vec(-3.0f64..3.0, 9)) {
        let m = SmallMatrix::new(3, 3, entries).unwrap();
        prop_assert!(graph_volume(&m).unwrap() >= 1.0);
    }
}

#[test]
fn unit_tangency_on_catalog_fields() {
    let q1 = VectorFieldSpec::default_pole(1);
    let fields = vec![
        VectorFieldSpec::hopf(1).unwrap(),
        VectorFieldSpec::radial(1, q1.clone()).unwrap(),
        VectorFieldSpec::power(1, 2, q1.clone()).unwrap(),
        VectorFieldSpec::perturbed_hopf(1, 0.2, 17).unwrap(),
        VectorFieldSpec::radial(2, VectorFieldSpec::default_pole(2)).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for f in &fields {
        let ambient = f.ambient_dim();
        let mut checked = 0u32;
        while checked < 100_000 {
            let x = random_point(&mut rng, ambient);
            if f.singular_distance(x.coords()) < 1e-4 {
                continue;
            }
            let v = f.eval(&x).unwrap();
            let norm: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            let tang: f64 = v.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
            assert!((norm - 1.0).abs() <= 1e-10, "{}: |v| = {norm}", f.kind);
            assert!(tang.abs() <= 1e-10, "{}: <v,x> = {tang}", f.kind);
            checked += 1;
        }
    }
}

#[test]
fn shape_matrix_frame_covariance() {
    // two adapted frames (different scan poles) at the same point give
    // block-orthogonally related shape matrices: the elementary symmetric
    // functions of the 2n-block and the Gram volume agree
    let q = VectorFieldSpec::default_pole(1);
    let f = VectorFieldSpec::radial(1, q.clone()).unwrap();
    let g = VectorFieldSpec::perturbed_hopf(1, 0.2, 23).unwrap();
    let pole_a = SpherePoint::axis(4, 3).unwrap();
    let pole_b = SpherePoint::project(&[0.5, 0.5, 0.5, 0.5]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for field in [&f, &g] {
        let mut checked = 0;
        while checked < 200 {
            let x = random_point(&mut rng, 4);
            if field.singular_distance(x.coords()) < 0.2 {
                continue;
            }
            if x.geodesic_distance(&pole_a).min(x.geodesic_distance(&pole_a.antipode())) < 0.1
                || x.geodesic_distance(&pole_b).min(x.geodesic_distance(&pole_b.antipode())) < 0.1
            {
                continue;
            }
            let v = field.eval(&x).unwrap();
            let fa = adapted_frame(&x, &pole_a, &v).unwrap();
            let fb = adapted_frame(&x, &pole_b, &v).unwrap();
            let sa = field.shape_matrix(&x, &fa.vectors).unwrap();
            let sb = field.shape_matrix(&x, &fb.vectors).unwrap();
            for k in 0..=1usize {
                let ea = elem_sym(&sa.ij_block(), 2 * k).unwrap();
                let eb = elem_sym(&sb.ij_block(), 2 * k).unwrap();
                assert_abs_diff_eq!(ea, eb, epsilon = 1e-9 * (1.0 + ea.abs()));
            }
            let ga = gram_volume(sa.full()).unwrap();
            let gb = gram_volume(sb.full()).unwrap();
            assert_abs_diff_eq!(ga, gb, epsilon = 1e-9 * ga);
            checked += 1;
        }
    }
}

#[test]
fn radial_field_is_geodesic() {
    // acceleration column vanishes everywhere for the radial field
    let q = SpherePoint::axis(6, 5).unwrap();
    let f = VectorFieldSpec::radial(2, q.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut checked = 0;
    while checked < 500 {
        let x = random_point(&mut rng, 6);
        if f.singular_distance(x.coords()) < 0.2
            || x.geodesic_distance(&q).min(x.geodesic_distance(&q.antipode())) < 0.1
        {
            continue;
        }
        let v = f.eval(&x).unwrap();
        let frame = adapted_frame(&x, &q, &v).unwrap();
        let shape = f.shape_matrix(&x, &frame.vectors).unwrap();
        for a in shape.acceleration() {
            assert!(a.abs() <= 1e-9, "acceleration entry {a}");
        }
        checked += 1;
    }
}

#[test]
fn stokes_constancy_perturbed_hopf() {
    // no closed form for this field: constancy (here: vanishing, since
    // the field is nonsingular) is a pure numerical Stokes check
    let f = VectorFieldSpec::perturbed_hopf(1, 0.2, 7).unwrap();
    let pole = SpherePoint::axis(4, 3).unwrap();
    let mut fluxes = Vec::new();
    for theta in [-0.9f64, -0.3, 0.2, 0.8] {
        fluxes.push(parallel_flux(&f, &pole, theta, &[32, 64]).unwrap());
    }
    let max = fluxes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = fluxes.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(max - min <= 1e-3, "fluxes {fluxes:?}");
    for flux in &fluxes {
        assert_abs_diff_eq!(*flux, 0.0, epsilon = 1e-3);
    }
}

#[test]
fn volume_integrand_never_below_one() {
    let q = VectorFieldSpec::default_pole(1);
    let fields = vec![
        VectorFieldSpec::hopf(1).unwrap(),
        VectorFieldSpec::radial(1, q.clone()).unwrap(),
        VectorFieldSpec::perturbed_hopf(1, 0.3, 31).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for f in &fields {
        let mut checked = 0;
        while checked < 2000 {
            let x = random_point(&mut rng, 4);
            if f.singular_distance(x.coords()) < 1e-3 {
                continue;
            }
            let v = volume_integrand(f, &x).unwrap();
            assert!(v >= 1.0 - 1e-12);
            checked += 1;
        }
    }
}

#[test]
fn tangent_project_output_is_tangent() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for _ in 0..1000 {
        let x = random_point(&mut rng, 5);
        let w: Vec<f64> = (0..5).map(|_| rng.random_range(-3.0..3.0)).collect();
        let p = tangent_project(&x, &w);
        let d: f64 = p.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
        assert!(d.abs() <= 1e-12);
    }
}
