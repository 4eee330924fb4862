//! Dense small-matrix calculus: determinants of arbitrary minors,
//! elementary symmetric functions (sums of principal minors), the
//! substituted-column functions `σ⊥`, the volume of a linear map, and the
//! diagonal comparison bound.
//!
//! Matrices here are tiny (at most 9×9 in practice), so every minor sum
//! is an exact combinatorial enumeration over index subsets — no sampling
//! and no asymptotically clever algorithms.

use crate::combinatorics::{for_each_subset, sigma_coefficient_f64};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dense row-major matrix of `f64` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SmallMatrix {
    /// Builds a matrix from row-major data. Every entry must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be at least 1x1"));
        }
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(SmallMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged rows"));
        }
        SmallMatrix::new(r, c, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SmallMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SmallMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = SmallMatrix::zeros(entries.len(), entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = SmallMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, other: &SmallMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::domain("inner dimensions do not match"));
        }
        let mut out = SmallMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Determinant via LU with partial pivoting. Requires a square matrix.
    pub fn det(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0f64;
        for k in 0..n {
            let mut piv = k;
            let mut best = a[k * n + k].abs();
            for r in k + 1..n {
                let v = a[r * n + k].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return Ok(0.0);
            }
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for r in k + 1..n {
                let f = a[r * n + k] / pivot;
                if f == 0.0 {
                    continue;
                }
                for c in k..n {
                    a[r * n + c] -= f * a[k * n + c];
                }
            }
        }
        Ok(det)
    }

    /// Determinant of the minor with the given (0-based) rows and columns.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<f64> {
        if rows.len() != cols.len() {
            return Err(Error::domain("minor must be square"));
        }
        let k = rows.len();
        if k == 0 {
            return Ok(1.0);
        }
        let mut sub = SmallMatrix::zeros(k, k);
        for (i, &r) in rows.iter().enumerate() {
            if r >= self.rows {
                return Err(Error::domain("minor row out of range"));
            }
            for (j, &c) in cols.iter().enumerate() {
                if c >= self.cols {
                    return Err(Error::domain("minor column out of range"));
                }
                sub[(i, j)] = self[(r, c)];
            }
        }
        sub.det()
    }
}

impl std::ops::Index<(usize, usize)> for SmallMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SmallMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `k`-th elementary symmetric function of a square matrix: the sum of its
/// principal `k×k` minors. `elem_sym(M, 0) = 1` (empty product).
pub fn elem_sym(m: &SmallMatrix, k: usize) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::domain("elem_sym needs a square matrix"));
    }
    if k > m.rows() {
        return Err(Error::domain(format!(
            "elem_sym order {k} exceeds matrix size {}",
            m.rows()
        )));
    }
    let mut total = 0.0;
    let mut err = None;
    for_each_subset(m.rows(), k, |s| {
        if err.is_some() {
            return;
        }
        match m.minor_det(s, s) {
            Ok(d) => total += d,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// The shape array of a unit vector field in an adapted frame: the
/// `(2n+1)×(2n+1)` matrix `a[A][B] = ⟨∇_{e_B} v, e_A⟩` whose last frame
/// vector is the field itself, so the last row vanishes. The last column
/// holds the acceleration components `a[i][2n] = ⟨∇_v v, e_i⟩`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeArray {
    n: usize,
    a: SmallMatrix,
}

impl ShapeArray {
    /// Validates the dimensions and the zero last row
    /// (`‖last row‖ ≤ 1e-9·(1 + max |entry|)`).
    pub fn new(n: usize, a: SmallMatrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere parameter n must be at least 1"));
        }
        let size = 2 * n + 1;
        if a.rows() != size || a.cols() != size {
            return Err(Error::domain(format!(
                "shape array for n={n} must be {size}x{size}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let last = size - 1;
        let norm2: f64 = (0..size).map(|j| a[(last, j)] * a[(last, j)]).sum();
        let tol = 1e-9 * (1.0 + a.max_abs());
        if norm2.sqrt() > tol {
            return Err(Error::domain(format!(
                "last row of the shape array must vanish (norm {:.3e} > tol {:.3e})",
                norm2.sqrt(),
                tol
            )));
        }
        Ok(ShapeArray { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> &SmallMatrix {
        &self.a
    }

    /// The `2n×2n` block `a_{ij}` (rows and columns `1..2n`).
    pub fn ij_block(&self) -> SmallMatrix {
        let m = 2 * self.n;
        let mut out = SmallMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = self.a[(i, j)];
            }
        }
        out
    }

    /// The acceleration column `(a_{1,2n+1}, …, a_{2n,2n+1})`.
    pub fn acceleration(&self) -> Vec<f64> {
        let m = 2 * self.n;
        (0..m).map(|i| self.a[(i, m)]).collect()
    }
}

/// The `2n×2n` matrix obtained from `a_{ij}` by replacing its `l`-th
/// column (1-based, `1 ≤ l ≤ 2n`) with the acceleration column.
pub fn substituted(a: &ShapeArray, l: usize) -> Result<SmallMatrix> {
    let m = 2 * a.n();
    if l == 0 || l > m {
        return Err(Error::domain(format!(
            "substituted column index {l} outside 1..{m}"
        )));
    }
    let mut out = a.ij_block();
    let acc = a.acceleration();
    for i in 0..m {
        out[(i, l - 1)] = acc[i];
    }
    Ok(out)
}

/// Enumerates the terms of `σ⊥_k(l)` for a `2n×2n` block: all index sets
/// `R ⊆ {1..2n}` with `|R| = k` and `l ∈ R`. The minor has rows `R`
/// (increasing) and columns `R∖{l}` (increasing) followed by the
/// acceleration column last. Each term carries the sign dictated by the
/// Pfaffian expansion of the Euler form, `(−1)^{#{r ∉ R : r > l}}`;
/// for `l = 2n` every sign is `+1`.
///
/// The visitor receives 0-based rows and the sign. Shared between the
/// numeric evaluation below and the symbolic oracle so both use one
/// convention.
pub fn for_each_sigma_perp_term<F: FnMut(&[usize], i32)>(
    two_n: usize,
    k: usize,
    l: usize,
    mut visit: F,
) {
    debug_assert!(l >= 1 && l <= two_n);
    if k == 0 || k > two_n {
        return;
    }
    let l0 = l - 1;
    // choose the k−1 other members of R among {0..2n−1}∖{l0}
    for_each_subset(two_n - 1, k - 1, |others| {
        let mut rows: Vec<usize> = others
            .iter()
            .map(|&r| if r >= l0 { r + 1 } else { r })
            .collect();
        rows.push(l0);
        rows.sort_unstable();
        let above_l_in_r = rows.iter().filter(|&&r| r > l0).count();
        let above_l_total = two_n - 1 - l0;
        let sign = if (above_l_total - above_l_in_r) % 2 == 0 {
            1
        } else {
            -1
        };
        visit(&rows, sign);
    });
}

/// `σ⊥_k(l)`: the signed sum over index sets `R ∋ l`, `|R| = k`, of the
/// minors with rows `R` and columns `(R∖{l}, acceleration)`. Zero for
/// `k = 0` — no order-0 minor touches the substituted column. `k` must
/// be even (the Euler form only produces even orders).
pub fn sigma_perp(a: &ShapeArray, k: usize, l: usize) -> Result<f64> {
    let m = 2 * a.n();
    if k % 2 != 0 {
        return Err(Error::domain(format!("sigma_perp order {k} must be even")));
    }
    if k > m {
        return Err(Error::domain(format!(
            "sigma_perp order {k} exceeds block size {m}"
        )));
    }
    if l == 0 || l > m {
        return Err(Error::domain(format!(
            "sigma_perp column index {l} outside 1..{m}"
        )));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let block = a.ij_block();
    let acc = a.acceleration();
    let l0 = l - 1;
    let mut total = 0.0;
    let mut failure = None;
    for_each_sigma_perp_term(m, k, l, |rows, sign| {
        if failure.is_some() {
            return;
        }
        let dim = rows.len();
        let mut sub = SmallMatrix::zeros(dim, dim);
        let mut jj = 0;
        for &c in rows.iter() {
            if c == l0 {
                continue;
            }
            for (ii, &r) in rows.iter().enumerate() {
                sub[(ii, jj)] = block[(r, c)];
            }
            jj += 1;
        }
        for (ii, &r) in rows.iter().enumerate() {
            sub[(ii, dim - 1)] = acc[r];
        }
        match sub.det() {
            Ok(d) => total += sign as f64 * d,
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Volume of the linear map given by a square matrix: the square root of
/// the sum of the squares of all `k×k` minors over all row and column
/// subsets, `k = 0..size` (the empty minor contributes 1).
///
/// By Cauchy–Binet this equals `√det(I + MᵀM)`; see [`gram_volume`] for
/// that route. Both are kept: the minor sum is the defining expression,
/// the Gram determinant is the fast equivalent, and the test suite pins
/// them together.
pub fn graph_volume(m: &SmallMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::domain("graph_volume needs a square matrix"));
    }
    let n = m.rows();
    let mut total = 1.0f64;
    for k in 1..=n {
        let row_sets = crate::combinatorics::subsets(n, k);
        for rows in &row_sets {
            for_each_subset(n, k, |cols| {
                let d = m.minor_det(rows, cols).expect("indices in range");
                total += d * d;
            });
        }
    }
    Ok(total.sqrt())
}

/// `√det(I + MᵀM)` — the Gram-determinant route to the volume of a
/// linear map.
pub fn gram_volume(m: &SmallMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::domain("gram_volume needs a square matrix"));
    }
    let n = m.rows();
    let mut g = m.transpose().matmul(m)?;
    for i in 0..n {
        g[(i, i)] += 1.0;
    }
    let d = g.det()?;
    if d < 0.0 {
        return Err(Error::Numeric(format!(
            "Gram determinant came out negative ({d:.3e})"
        )));
    }
    Ok(d.sqrt())
}

/// Right-hand side of the diagonal comparison bound for a nonnegative
/// diagonal matrix of even size `2m`:
/// `Σ_{k=0}^{m} C(m,k)·C(2m,2k)⁻¹·σ_{2k}(D)`.
pub fn diag_bound_rhs(d: &SmallMatrix) -> Result<f64> {
    if !d.is_square() {
        return Err(Error::domain("diag_bound_rhs needs a square matrix"));
    }
    let size = d.rows();
    if size % 2 != 0 {
        return Err(Error::domain("diag_bound_rhs needs an even size"));
    }
    for i in 0..size {
        for j in 0..size {
            if i != j && d[(i, j)] != 0.0 {
                return Err(Error::domain("diag_bound_rhs needs a diagonal matrix"));
            }
        }
        if d[(i, i)] < 0.0 {
            return Err(Error::domain("diag_bound_rhs needs nonnegative entries"));
        }
    }
    let m = (size / 2) as u64;
    let mut total = 0.0;
    for k in 0..=m {
        total += sigma_coefficient_f64(m, k) * elem_sym(d, 2 * k as usize)?;
    }
    Ok(total)
}

/// Probed hypothesis value: `Σ_k C(n,k)C(2n,2k)⁻¹(|σ_{2k}| + |σ⊥_{2k}(2n)|)`.
///
/// This is *not* asserted as a lower bound for [`graph_volume`]: a
/// concrete violation exists (see the prober module), so callers compare
/// and report rather than assume.
pub fn pointwise_rhs_abs(a: &ShapeArray) -> Result<f64> {
    let n = a.n() as u64;
    let block = a.ij_block();
    let mut total = 0.0;
    for k in 0..=n {
        let s = elem_sym(&block, 2 * k as usize)?;
        let sp = sigma_perp(a, 2 * k as usize, 2 * a.n())?;
        total += sigma_coefficient_f64(n, k) * (s.abs() + sp.abs());
    }
    Ok(total)
}

/// Common-angle variant of the probed bound: `√(S₁² + S₂²)` with
/// `S₁ = Σ_k C(n,k)C(2n,2k)⁻¹ σ_{2k}` and
/// `S₂ = Σ_k C(n,k)C(2n,2k)⁻¹ σ⊥_{2k}(2n)`.
pub fn pointwise_rhs_angle(a: &ShapeArray) -> Result<f64> {
    let n = a.n() as u64;
    let block = a.ij_block();
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for k in 0..=n {
        let c = sigma_coefficient_f64(n, k);
        s1 += c * elem_sym(&block, 2 * k as usize)?;
        s2 += c * sigma_perp(a, 2 * k as usize, 2 * a.n())?;
    }
    Ok(s1.hypot(s2))
}

/// Exact check that `diag_bound_rhs` meets `graph_volume` with equality
/// at `D = 0` and `D = I` for size `2m`: over the rationals,
/// `Σ_k C(m,k)C(2m,2k)⁻¹C(2m,2k) = Σ_k C(m,k) = 2^m`, which is the exact
/// graph volume `√(2^{2m})` of the identity, and both sides are 1 at 0.
pub fn diag_bound_equality_exact(m: u64) -> bool {
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use num::traits::One;
    let mut rhs_identity = BigRational::from_integer(BigInt::from(0));
    for k in 0..=m {
        rhs_identity += crate::combinatorics::sigma_coefficient(m, k)
            * crate::combinatorics::binomial_big(2 * m, 2 * k);
    }
    let two_pow_m = BigRational::from_integer(BigInt::from(2).pow(m as u32));
    let rhs_zero_ok = crate::combinatorics::sigma_coefficient(m, 0) == BigRational::one();
    rhs_identity == two_pow_m && rhs_zero_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use approx::assert_abs_diff_eq;

    fn shape_n1(rows: [[f64; 3]; 3]) -> ShapeArray {
        let data: Vec<f64> = rows.concat();
        ShapeArray::new(1, SmallMatrix::new(3, 3, data).unwrap()).unwrap()
    }

    #[test]
    fn elem_sym_examples() {
        let id3 = SmallMatrix::identity(3);
        assert_abs_diff_eq!(elem_sym(&id3, 2).unwrap(), 3.0);
        let d = SmallMatrix::diagonal(&[1.0, 2.0, 3.0]);
        // brute-force subset products: 1·2 + 1·3 + 2·3 = 11
        assert_abs_diff_eq!(elem_sym(&d, 2).unwrap(), 11.0);
        assert_abs_diff_eq!(elem_sym(&d, 0).unwrap(), 1.0);
        let rect = SmallMatrix::zeros(2, 3);
        assert!(elem_sym(&rect, 1).is_err());
    }

    #[test]
    fn elem_sym_identity_binomials() {
        for m in 1..=8usize {
            let id = SmallMatrix::identity(m);
            for k in 0..=m {
                assert_abs_diff_eq!(
                    elem_sym(&id, k).unwrap(),
                    binomial(m as u64, k as u64) as f64,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn substituted_examples() {
        let a = shape_n1([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]]);
        let s = substituted(&a, 2).unwrap();
        assert_eq!(
            (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]),
            (1.0, 0.0, 0.0, 1.0)
        );

        // zero acceleration ⇒ substituted column zero
        let a0 = shape_n1([[1.0, 2.0, 0.0], [3.0, 4.0, 0.0], [0.0, 0.0, 0.0]]);
        let s0 = substituted(&a0, 1).unwrap();
        assert_eq!((s0[(0, 0)], s0[(1, 0)]), (0.0, 0.0));
        assert_eq!((s0[(0, 1)], s0[(1, 1)]), (2.0, 4.0));

        // l=1 transcription: [[a13, a12], [a23, a22]]
        let a = shape_n1([[1.0, 2.0, 5.0], [3.0, 4.0, 6.0], [0.0, 0.0, 0.0]]);
        let s = substituted(&a, 1).unwrap();
        assert_eq!(
            (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]),
            (5.0, 2.0, 6.0, 4.0)
        );

        assert!(substituted(&a, 0).is_err());
        assert!(substituted(&a, 3).is_err());
    }

    #[test]
    fn sigma_perp_examples() {
        let a = shape_n1([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]]);
        // single term: det [[a11, a13], [a21, a23]] = 1·1 − 0·0
        assert_abs_diff_eq!(sigma_perp(&a, 2, 2).unwrap(), 1.0);
        // l=1: det [[a12, a13], [a22, a23]] = det [[0,0],[1,1]] = 0
        assert_abs_diff_eq!(sigma_perp(&a, 2, 1).unwrap(), 0.0);
        // k=0 never touches the substituted column
        assert_abs_diff_eq!(sigma_perp(&a, 0, 1).unwrap(), 0.0);
        assert!(sigma_perp(&a, 1, 1).is_err());
        assert!(sigma_perp(&a, 2, 3).is_err());
    }

    #[test]
    fn sigma_perp_linear_in_acceleration() {
        // scaling the acceleration column scales σ⊥ linearly for k ≥ 2
        let base = [[0.3, -1.2, 0.7], [0.9, 0.4, -0.5], [0.0, 0.0, 0.0]];
        let a1 = shape_n1(base);
        let mut scaled = base;
        for row in scaled.iter_mut().take(2) {
            row[2] *= 3.5;
        }
        let a2 = shape_n1(scaled);
        for l in 1..=2 {
            assert_abs_diff_eq!(
                sigma_perp(&a2, 2, l).unwrap(),
                3.5 * sigma_perp(&a1, 2, l).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn graph_volume_examples() {
        let z = SmallMatrix::zeros(3, 3);
        assert_abs_diff_eq!(graph_volume(&z).unwrap(), 1.0);

        let d = SmallMatrix::diagonal(&[2.0, -3.0]);
        assert_abs_diff_eq!(
            graph_volume(&d).unwrap(),
            (5.0f64 * 10.0).sqrt(),
            epsilon = 1e-12
        );

        let m = SmallMatrix::from_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 0.0]])
            .unwrap();
        // det(I + MᵀM) = 6 by direct arithmetic
        assert_abs_diff_eq!(graph_volume(&m).unwrap(), 6.0f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            gram_volume(&m).unwrap(),
            graph_volume(&m).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn diag_bound_examples() {
        let z = SmallMatrix::zeros(4, 4);
        assert_abs_diff_eq!(diag_bound_rhs(&z).unwrap(), 1.0);
        assert_abs_diff_eq!(graph_volume(&z).unwrap(), 1.0);

        for m in 1..=4usize {
            let id = SmallMatrix::identity(2 * m);
            let rhs = diag_bound_rhs(&id).unwrap();
            assert_abs_diff_eq!(rhs, 2.0f64.powi(m as i32), epsilon = 1e-10);
            assert_abs_diff_eq!(gram_volume(&id).unwrap(), rhs, epsilon = 1e-10);
        }

        let d = SmallMatrix::diagonal(&[1.7, 0.0, 0.0, 0.0]);
        let rhs = diag_bound_rhs(&d).unwrap();
        assert!(rhs <= gram_volume(&d).unwrap());

        assert!(diag_bound_rhs(&SmallMatrix::diagonal(&[1.0, -0.1])).is_err());
        assert!(diag_bound_rhs(&SmallMatrix::identity(3)).is_err());
    }

    #[test]
    fn diag_bound_equality_exact_rational() {
        for m in 1..=4 {
            assert!(diag_bound_equality_exact(m));
        }
    }

    #[test]
    fn pointwise_examples() {
        let zero = shape_n1([[0.0; 3]; 3]);
        assert_abs_diff_eq!(pointwise_rhs_abs(&zero).unwrap(), 1.0);
        assert_abs_diff_eq!(pointwise_rhs_angle(&zero).unwrap(), 1.0);

        // documented violation of the absolute form: RHS 3 > √6 ≈ 2.449
        let a = shape_n1([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]]);
        assert_abs_diff_eq!(pointwise_rhs_abs(&a).unwrap(), 3.0, epsilon = 1e-12);
        assert!(pointwise_rhs_abs(&a).unwrap() > graph_volume(a.full()).unwrap());

        // the common-angle form stays below: √5 ≤ √6
        assert_abs_diff_eq!(
            pointwise_rhs_angle(&a).unwrap(),
            5.0f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(pointwise_rhs_angle(&a).unwrap() <= graph_volume(a.full()).unwrap());

        // diagonal-like case: equality with the graph volume
        let d = shape_n1([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        assert_abs_diff_eq!(pointwise_rhs_abs(&d).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(graph_volume(d.full()).unwrap(), 2.0, epsilon = 1e-12);

        // diag(t,t) block with zero acceleration: 1 + t² both sides
        let t = 1.3;
        let dt = shape_n1([[t, 0.0, 0.0], [0.0, t, 0.0], [0.0, 0.0, 0.0]]);
        assert_abs_diff_eq!(
            pointwise_rhs_angle(&dt).unwrap(),
            1.0 + t * t,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gram_volume(&SmallMatrix::diagonal(&[t, t])).unwrap(),
            1.0 + t * t,
            epsilon = 1e-12
        );
    }

    #[test]
    fn shape_array_rejects_nonzero_last_row() {
        let bad = SmallMatrix::from_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.1, 0.0, 0.0]])
            .unwrap();
        assert!(ShapeArray::new(1, bad).is_err());
    }
}
