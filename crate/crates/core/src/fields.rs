//! Catalog of analytic unit tangent fields on `S^{2n+1}` with exact
//! evaluation and ambient derivatives, plus the shape-matrix assembler
//! `a[A][B] = ⟨∇_{e_B} v, e_A⟩` (covariant derivative = tangential
//! projection of the ambient derivative).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ShapeArray, SmallMatrix};
use crate::sphere::vecops::{axpy, dot, norm, normalize, scaled};
use crate::sphere::{orthonormal_complement, tangent_project, SpherePoint};

/// Guard radius around field singularities.
pub const SINGULARITY_GUARD: f64 = 1e-8;

/// How ambient derivatives are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivMode {
    Analytic,
    CentralDiff { h: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Hopf,
    Radial,
    Power,
    PerturbedHopf,
}

impl std::fmt::Display for FieldKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FieldKind::Hopf => "hopf",
            FieldKind::Radial => "radial",
            FieldKind::Power => "power",
            FieldKind::PerturbedHopf => "perturbed-hopf",
        };
        write!(f, "{s}")
    }
}

/// A concrete unit vector field on `S^{2n+1}`.
///
/// * `hopf` — `v(x) = Jx` with `J` the block rotation pairing consecutive
///   coordinates; nonsingular.
/// * `radial` — unit tangents of the geodesics leaving `pole`
///   (`v(x) = (⟨q,x⟩x − q)/√(1−⟨q,x⟩²)`, a source at `q`, sink at `−q`).
/// * `power` — pullback through the stereographic chart from `−pole` of
///   the normalized field `(z^d, w)`; index `+d` at `pole`, `−d` at
///   `−pole`.
/// * `perturbed-hopf` — `normalize(Jx + ε·P_x(w₀))` with a seeded fixed
///   ambient direction `w₀`; nonsingular for `ε < 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFieldSpec {
    pub kind: FieldKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pole: Option<SpherePoint>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub deriv: DerivMode,
}

impl VectorFieldSpec {
    pub fn ambient_dim(&self) -> usize {
        2 * self.n + 2
    }

    /// Default pole: the last coordinate axis.
    pub fn default_pole(n: usize) -> SpherePoint {
        SpherePoint::axis(2 * n + 2, 2 * n + 1).expect("valid axis")
    }

    pub fn hopf(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere parameter n must be at least 1"));
        }
        Ok(VectorFieldSpec {
            kind: FieldKind::Hopf,
            n,
            pole: None,
            degree: None,
            epsilon: None,
            seed: None,
            deriv: DerivMode::Analytic,
        })
    }

    pub fn radial(n: usize, pole: SpherePoint) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere parameter n must be at least 1"));
        }
        if pole.ambient_dim() != 2 * n + 2 {
            return Err(Error::domain("pole dimension does not match the sphere"));
        }
        Ok(VectorFieldSpec {
            kind: FieldKind::Radial,
            n,
            pole: Some(pole),
            degree: None,
            epsilon: None,
            seed: None,
            deriv: DerivMode::Analytic,
        })
    }

    pub fn power(n: usize, degree: u32, pole: SpherePoint) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere parameter n must be at least 1"));
        }
        if degree == 0 {
            return Err(Error::domain("power exponent d must be at least 1"));
        }
        if pole.ambient_dim() != 2 * n + 2 {
            return Err(Error::domain("pole dimension does not match the sphere"));
        }
        Ok(VectorFieldSpec {
            kind: FieldKind::Power,
            n,
            pole: Some(pole),
            degree: Some(degree),
            epsilon: None,
            seed: None,
            deriv: DerivMode::CentralDiff { h: 1e-5 },
        })
    }

    pub fn perturbed_hopf(n: usize, epsilon: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere parameter n must be at least 1"));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::domain(
                "perturbation amplitude must lie in [0, 1) to keep the field nonsingular",
            ));
        }
        Ok(VectorFieldSpec {
            kind: FieldKind::PerturbedHopf,
            n,
            pole: None,
            degree: None,
            epsilon: Some(epsilon),
            seed: Some(seed),
            deriv: DerivMode::CentralDiff { h: 1e-5 },
        })
    }

    pub fn with_deriv(mut self, deriv: DerivMode) -> Self {
        self.deriv = deriv;
        self
    }

    pub fn singular_points(&self) -> Vec<SpherePoint> {
        match self.kind {
            FieldKind::Hopf | FieldKind::PerturbedHopf => Vec::new(),
            FieldKind::Radial | FieldKind::Power => {
                let p = self.pole.clone().expect("singular fields carry a pole");
                vec![p.clone(), p.antipode()]
            }
        }
    }

    pub fn is_singular(&self) -> bool {
        !self.singular_points().is_empty()
    }

    /// Euclidean distance from `x` to the nearest singular point.
    pub fn singular_distance(&self, x: &[f64]) -> f64 {
        self.singular_points()
            .iter()
            .map(|p| norm(&crate::sphere::vecops::sub(x, p.coords())))
            .fold(f64::INFINITY, f64::min)
    }

    fn guard(&self, x: &[f64]) -> Result<()> {
        let d = self.singular_distance(x);
        if d < SINGULARITY_GUARD {
            return Err(Error::Singularity { distance: d });
        }
        Ok(())
    }

    /// Seeded perturbation direction for `perturbed-hopf`.
    fn perturbation_direction(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(0));
        let dim = self.ambient_dim();
        loop {
            let w: Vec<f64> = (0..dim)
                .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            if let Some(u) = normalize(&w) {
                return u;
            }
        }
    }

    fn hopf_rotation(raw: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; raw.len()];
        for i in 0..raw.len() / 2 {
            v[2 * i] = -raw[2 * i + 1];
            v[2 * i + 1] = raw[2 * i];
        }
        v
    }

    /// Smooth ambient extension of the field, defined in a neighbourhood
    /// of the sphere; the restriction to the sphere is the unit field.
    /// Central differences of this extension give the ambient Jacobian.
    fn eval_extension(&self, raw: &[f64]) -> Result<Vec<f64>> {
        match self.kind {
            FieldKind::Hopf => Ok(Self::hopf_rotation(raw)),
            FieldKind::Radial => {
                let q = self.pole.as_ref().expect("radial carries a pole").coords();
                let c = dot(q, raw);
                let s2 = 1.0 - c * c;
                if s2 <= 0.0 {
                    return Err(Error::Singularity { distance: 0.0 });
                }
                Ok(scaled(&axpy(&scaled(raw, c), -1.0, q), 1.0 / s2.sqrt()))
            }
            FieldKind::Power => {
                let p = self.pole.as_ref().expect("power carries a pole").coords();
                let d = self.degree.expect("power carries a degree");
                let basis = orthonormal_complement(&[p], raw.len());
                let denom = 1.0 + dot(raw, p);
                if denom.abs() < 1e-14 {
                    return Err(Error::Singularity { distance: 0.0 });
                }
                // stereographic chart from −pole
                let y: Vec<f64> = basis.iter().map(|u| dot(raw, u) / denom).collect();
                // chart field (z^d, w) with z the first complex coordinate
                let (mut re, mut im) = (1.0f64, 0.0f64);
                for _ in 0..d {
                    let nre = re * y[0] - im * y[1];
                    im = re * y[1] + im * y[0];
                    re = nre;
                }
                let mut g = y.clone();
                g[0] = re;
                g[1] = im;
                // pull back through the differential of the inverse chart
                // x(y) = ((1−ρ²)p + 2·U y)/(1+ρ²):
                // dx(g) = (2/(1+ρ²))·U g − (4⟨y,g⟩/(1+ρ²)²)·(p + U y);
                // the chart differential is conformal, so the pullback is
                // singular exactly where g vanishes (x = pole) and at the
                // chart's missing point −pole
                let rho2 = dot(&y, &y);
                let ygd = dot(&y, &g);
                let c1 = 2.0 / (1.0 + rho2);
                let c2 = -4.0 * ygd / ((1.0 + rho2) * (1.0 + rho2));
                let mut ambient: Vec<f64> = p.iter().map(|pa| c2 * pa).collect();
                for (j, u) in basis.iter().enumerate() {
                    let coeff = c1 * g[j] + c2 * y[j];
                    for (a, va) in ambient.iter_mut().enumerate() {
                        *va += coeff * u[a];
                    }
                }
                let xhat = normalize(raw)
                    .ok_or_else(|| Error::domain("cannot evaluate at the origin"))?;
                let tangent = axpy(&ambient, -dot(&ambient, &xhat), &xhat);
                normalize(&tangent).ok_or(Error::Singularity { distance: 0.0 })
            }
            FieldKind::PerturbedHopf => {
                let eps = self.epsilon.unwrap_or(0.2);
                let w0 = self.perturbation_direction();
                let xhat = normalize(raw)
                    .ok_or_else(|| Error::domain("cannot evaluate at the origin"))?;
                let mut v = Self::hopf_rotation(raw);
                let pw = axpy(&w0, -dot(&w0, &xhat), &xhat);
                v = axpy(&v, eps, &pw);
                normalize(&v).ok_or(Error::Singularity { distance: 0.0 })
            }
        }
    }

    /// Unit tangent value of the field at a sphere point.
    pub fn eval(&self, x: &SpherePoint) -> Result<Vec<f64>> {
        if x.ambient_dim() != self.ambient_dim() {
            return Err(Error::domain("point dimension does not match the field"));
        }
        self.guard(x.coords())?;
        self.eval_extension(x.coords())
    }

    /// Ambient Jacobian of the extension used by [`eval`], as a
    /// `(2n+2)×(2n+2)` matrix (column `B` holds `∂v/∂x_B`).
    pub fn ambient_jacobian(&self, x: &SpherePoint) -> Result<SmallMatrix> {
        if x.ambient_dim() != self.ambient_dim() {
            return Err(Error::domain("point dimension does not match the field"));
        }
        self.guard(x.coords())?;
        let dim = self.ambient_dim();
        match (self.deriv, self.kind) {
            (DerivMode::Analytic, FieldKind::Hopf) => {
                let mut j = SmallMatrix::zeros(dim, dim);
                for i in 0..dim / 2 {
                    j[(2 * i, 2 * i + 1)] = -1.0;
                    j[(2 * i + 1, 2 * i)] = 1.0;
                }
                Ok(j)
            }
            (DerivMode::Analytic, FieldKind::Radial) => {
                let q = self.pole.as_ref().expect("radial carries a pole").coords();
                let xs = x.coords();
                let c = dot(q, xs);
                let s2 = 1.0 - c * c;
                let s = s2.sqrt();
                let u = axpy(&scaled(xs, c), -1.0, q); // c·x − q
                let mut j = SmallMatrix::zeros(dim, dim);
                for b in 0..dim {
                    for a in 0..dim {
                        let mut val = q[b] * xs[a] / s;
                        if a == b {
                            val += c / s;
                        }
                        val += u[a] * c * q[b] / (s2 * s);
                        j[(a, b)] = val;
                    }
                }
                Ok(j)
            }
            (DerivMode::Analytic, _) => Err(Error::domain(format!(
                "no analytic derivative for the {} field; use central differences",
                self.kind
            ))),
            (DerivMode::CentralDiff { h }, _) => {
                // symmetric 5-point stencil; the extra order keeps the
                // shape array's last row at noise level even where the
                // field's higher derivatives are large
                let xs = x.coords();
                let mut j = SmallMatrix::zeros(dim, dim);
                let mut shifted = xs.to_vec();
                for b in 0..dim {
                    shifted[b] = xs[b] + 2.0 * h;
                    let p2 = self.eval_extension(&shifted)?;
                    shifted[b] = xs[b] + h;
                    let p1 = self.eval_extension(&shifted)?;
                    shifted[b] = xs[b] - h;
                    let m1 = self.eval_extension(&shifted)?;
                    shifted[b] = xs[b] - 2.0 * h;
                    let m2 = self.eval_extension(&shifted)?;
                    shifted[b] = xs[b];
                    for a in 0..dim {
                        j[(a, b)] = (-p2[a] + 8.0 * p1[a] - 8.0 * m1[a] + m2[a]) / (12.0 * h);
                    }
                }
                Ok(j)
            }
        }
    }

    /// Shape matrix `⟨P_x(J e_B), e_A⟩` in an arbitrary orthonormal
    /// tangent frame (no adaptedness required).
    pub fn tangent_shape(&self, x: &SpherePoint, basis: &[Vec<f64>]) -> Result<SmallMatrix> {
        let m = 2 * self.n + 1;
        if basis.len() != m {
            return Err(Error::domain(format!(
                "tangent frame must have {m} vectors"
            )));
        }
        let jac = self.ambient_jacobian(x)?;
        let dim = self.ambient_dim();
        let mut out = SmallMatrix::zeros(m, m);
        let mut col = vec![0.0; dim];
        for (bi, eb) in basis.iter().enumerate() {
            for (a, slot) in col.iter_mut().enumerate() {
                *slot = (0..dim).map(|c| jac[(a, c)] * eb[c]).sum();
            }
            let proj = tangent_project(x, &col);
            for (ai, ea) in basis.iter().enumerate() {
                out[(ai, bi)] = dot(&proj, ea);
            }
        }
        Ok(out)
    }

    /// Shape array in a `v`-adapted frame (last frame vector equal to the
    /// field value at `x`): validates the frame and the vanishing last
    /// row.
    pub fn shape_matrix(&self, x: &SpherePoint, frame: &[Vec<f64>]) -> Result<ShapeArray> {
        let v = self.eval(x)?;
        let last = frame
            .last()
            .ok_or_else(|| Error::domain("empty frame"))?;
        if 1.0 - dot(last, &v) > 1e-7 {
            return Err(Error::domain(
                "last frame vector must equal the field value",
            ));
        }
        let a = self.tangent_shape(x, frame)?;
        ShapeArray::new(self.n, a)
    }
}
