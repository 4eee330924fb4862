//! Round-sphere geometry: points, tangent projections, parallels and the
//! adapted frames used by the flux formulas, plus volume constants.
//!
//! Orientation conventions (they fix every sign downstream):
//! the sphere is oriented by listing the outward ambient normal first;
//! a parallel is oriented as the boundary of the geodesic ball around
//! the pole, outward normal first. With these choices the flux of the
//! radial field through parallels around its source comes out positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SmallMatrix;

pub(crate) mod vecops {
    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn norm(a: &[f64]) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
        a.iter().map(|x| x * s).collect()
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// a + s·b
    pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + s * y).collect()
    }

    pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
        let n = norm(a);
        if n < 1e-14 {
            None
        } else {
            Some(scaled(a, 1.0 / n))
        }
    }
}

use vecops::*;

/// A point of `S^m`, stored as a unit vector of `R^{m+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    /// Requires `|‖x‖ − 1| ≤ 1e-12`.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::domain("a sphere point needs at least 2 coordinates"));
        }
        let n = norm(&x);
        if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "sphere point must be unit (norm {n:.17})"
            )));
        }
        Ok(SpherePoint(x))
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn project(x: &[f64]) -> Result<Self> {
        match normalize(x) {
            Some(u) => SpherePoint::new(u),
            None => Err(Error::domain("cannot project the zero vector")),
        }
    }

    /// Standard basis point along the given ambient axis.
    pub fn axis(ambient_dim: usize, axis: usize) -> Result<Self> {
        if axis >= ambient_dim || ambient_dim < 2 {
            return Err(Error::domain("axis out of range"));
        }
        let mut x = vec![0.0; ambient_dim];
        x[axis] = 1.0;
        SpherePoint::new(x)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }

    /// Dimension `m` of the sphere the point lives on.
    pub fn sphere_dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(scaled(&self.0, -1.0))
    }

    /// Geodesic (angular) distance to another point.
    pub fn geodesic_distance(&self, other: &SpherePoint) -> f64 {
        dot(&self.0, &other.0).clamp(-1.0, 1.0).acos()
    }
}

/// Volume (surface measure) of the unit sphere `S^m`, via the recurrence
/// `vol(S^m) = 2π vol(S^{m−2})/(m−1)` seeded with `vol(S^0) = 2`,
/// `vol(S^1) = 2π`.
pub fn sphere_volume(m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::domain("sphere dimension must be at least 1"));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut values = [2.0, tau]; // vol(S^0), vol(S^1)
    if m == 1 {
        return Ok(tau);
    }
    for k in 2..=m {
        let next = tau * values[0] / (k as f64 - 1.0);
        values = [values[1], next];
    }
    Ok(values[1])
}

/// Orthogonal projection of an ambient vector onto the tangent space at
/// `x`: `w − ⟨w,x⟩x`.
pub fn tangent_project(x: &SpherePoint, w: &[f64]) -> Vec<f64> {
    axpy(w, -dot(w, x.coords()), x.coords())
}

/// Deterministic orthonormal basis of the orthogonal complement of the
/// given (orthonormal) vectors: Gram–Schmidt over the standard basis,
/// skipping the axis most aligned with the first vector, with one
/// re-orthogonalization sweep.
pub fn orthonormal_complement(fixed: &[&[f64]], ambient: usize) -> Vec<Vec<f64>> {
    let want = ambient - fixed.len();
    let skip = fixed
        .first()
        .map(|v| {
            let mut imax = 0;
            for (i, c) in v.iter().enumerate() {
                if c.abs() > v[imax].abs() {
                    imax = i;
                }
            }
            imax
        })
        .unwrap_or(usize::MAX);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(want);
    for axis in 0..ambient {
        if basis.len() == want {
            break;
        }
        if axis == skip {
            continue;
        }
        let mut u = vec![0.0; ambient];
        u[axis] = 1.0;
        for _ in 0..2 {
            for f in fixed {
                let c = dot(&u, f);
                u = axpy(&u, -c, f);
            }
            for b in &basis {
                let c = dot(&u, b);
                u = axpy(&u, -c, b);
            }
        }
        if let Some(unit) = normalize(&u) {
            if norm(&u) > 1e-7 {
                basis.push(unit);
            }
        }
    }
    basis
}

/// Deterministic orthonormal basis of the tangent space at `x`.
pub fn tangent_basis(x: &SpherePoint) -> Vec<Vec<f64>> {
    orthonormal_complement(&[x.coords()], x.ambient_dim())
}

/// Determinant of the square matrix with the given columns; used for the
/// orientation checks.
pub fn ambient_det(cols: &[&[f64]]) -> f64 {
    let n = cols.len();
    let mut m = SmallMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        debug_assert_eq!(col.len(), n);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    m.det().expect("square by construction")
}

/// A parallel of the sphere: the set of points at a fixed latitude
/// `θ ∈ (−π/2, π/2)` relative to a pole, equivalently at colatitude
/// `r = π/2 − θ` from that pole.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParallelSpec {
    pub pole: SpherePoint,
    pub theta: f64,
}

impl ParallelSpec {
    pub fn new(pole: SpherePoint, theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::domain(format!(
                "latitude must lie strictly inside (−π/2, π/2), got {theta}"
            )));
        }
        Ok(ParallelSpec { pole, theta })
    }

    pub fn colatitude(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 - self.theta
    }
}

/// Pole-ward unit normal of the parallel through `x`, together with an
/// orthonormal basis of the parallel's tangent space, oriented as the
/// boundary of the geodesic ball around the pole (outward normal `−N`
/// listed first makes the frame positive on the sphere).
pub fn parallel_frame(x: &SpherePoint, pole: &SpherePoint) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if x.ambient_dim() != pole.ambient_dim() {
        return Err(Error::domain("point and pole live on different spheres"));
    }
    let tangent = tangent_project(x, pole.coords());
    let nrm = norm(&tangent);
    if nrm < 1e-8 {
        return Err(Error::Degenerate(
            "parallel frame undefined at the poles".into(),
        ));
    }
    let n_vec = scaled(&tangent, 1.0 / nrm);
    let mut basis = orthonormal_complement(&[x.coords(), &n_vec], x.ambient_dim());
    let minus_n = scaled(&n_vec, -1.0);
    let mut cols: Vec<&[f64]> = vec![x.coords(), &minus_n];
    cols.extend(basis.iter().map(|b| b.as_slice()));
    if ambient_det(&cols) < 0.0 {
        let first = &mut basis[0];
        for c in first.iter_mut() {
            *c = -*c;
        }
    }
    Ok((n_vec, basis))
}

/// Adapted frame at a point of a parallel: `e_1..e_{2n−1}` tangent to the
/// parallel and orthogonal to the field, `e_{2n+1} = v`, `e_{2n}`
/// completing positively, and the angle `α` with `sin α = ⟨v, N⟩`
/// (`N` pole-ward).
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    /// `2n+1` orthonormal tangent vectors, the last one being the field.
    pub vectors: Vec<Vec<f64>>,
    pub alpha: f64,
    /// Set when `|⟨v,N⟩| = 1` up to tolerance; the tangential direction
    /// is then an arbitrary (deterministic) completion.
    pub degenerate: bool,
    /// Pole-ward unit normal of the parallel.
    pub normal: Vec<f64>,
    /// Unit tangential direction of the field inside the parallel.
    pub tangential: Vec<f64>,
}

impl AdaptedFrame {
    pub fn field(&self) -> &[f64] {
        self.vectors.last().expect("frame is non-empty")
    }
}

pub fn adapted_frame(x: &SpherePoint, pole: &SpherePoint, v: &[f64]) -> Result<AdaptedFrame> {
    let dim = x.ambient_dim();
    if v.len() != dim {
        return Err(Error::domain("field vector has wrong dimension"));
    }
    if (norm(v) - 1.0).abs() > 1e-8 {
        return Err(Error::domain("field vector must be unit"));
    }
    if dot(v, x.coords()).abs() > 1e-8 {
        return Err(Error::domain("field vector must be tangent"));
    }
    let tangent = tangent_project(x, pole.coords());
    let nrm = norm(&tangent);
    if nrm < 1e-8 {
        return Err(Error::Degenerate(
            "adapted frame undefined at the poles".into(),
        ));
    }
    let n_vec = scaled(&tangent, 1.0 / nrm);

    let sin_alpha = dot(v, &n_vec).clamp(-1.0, 1.0);
    let alpha = sin_alpha.asin();
    let cos_alpha = (1.0 - sin_alpha * sin_alpha).max(0.0).sqrt();
    let degenerate = cos_alpha < 1e-7;

    let w = if degenerate {
        orthonormal_complement(&[x.coords(), &n_vec], dim)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Degenerate("no tangential completion".into()))?
    } else {
        normalize(&axpy(v, -sin_alpha, &n_vec))
            .ok_or_else(|| Error::Degenerate("tangential part vanished".into()))?
    };

    let side = orthonormal_complement(&[x.coords(), &n_vec, &w], dim);
    debug_assert_eq!(side.len(), dim - 3);

    // e_{2n} spans {N, w} together with v; its sign is fixed by requiring
    // the sphere frame (e_1, …, e_{2n}, v) to be positively oriented.
    let mut e_last = axpy(&scaled(&n_vec, -cos_alpha), sin_alpha, &w);
    let mut cols: Vec<&[f64]> = Vec::with_capacity(dim);
    cols.push(x.coords());
    cols.extend(side.iter().map(|b| b.as_slice()));
    cols.push(&e_last);
    cols.push(v);
    if ambient_det(&cols) < 0.0 {
        for c in e_last.iter_mut() {
            *c = -*c;
        }
    }

    let mut vectors = side;
    vectors.push(e_last);
    vectors.push(v.to_vec());
    Ok(AdaptedFrame {
        vectors,
        alpha,
        degenerate,
        normal: n_vec,
        tangential: w,
    })
}
