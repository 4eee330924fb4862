//! Exact symbolic exterior algebra over the formal shape symbols
//! `a[A,B]` (`1 ≤ A ≤ 2n`, `1 ≤ B ≤ 2n+1`), used to expand the Pfaffian
//! definition of the Euler form of the distribution normal to a unit
//! field and to check the closed expansion through the symmetric
//! functions `σ` and `σ⊥` coefficient by coefficient.
//!
//! Everything here is exact: coefficients are big rationals and no
//! floating point is involved. Curvature is hard-coded to the unit round
//! sphere, where `Ω_{AB} = ω_A ∧ ω_B`.
//!
//! Both forms returned by [`euler_form_expansion`] and [`lemma_rhs_form`]
//! carry an implicit global prefactor `1/vol(S^{2n})`: coefficients are
//! the exact rational polynomials multiplying that symbolic constant, so
//! the comparison is purely combinatorial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    factorial_big, for_each_permutation, for_each_subset, sigma_coefficient,
};
use crate::error::{Error, Result};
use crate::matrix::for_each_sigma_perp_term;

/// Largest sphere parameter the expansion accepts. `S_6` already has 720
/// permutations; beyond that the term count grows past any use this crate
/// has for it.
pub const MAX_SPHERE_PARAMETER: usize = 3;

fn guard(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SPHERE_PARAMETER {
        return Err(Error::Resource(format!(
            "Pfaffian expansion supports 1 <= n <= {MAX_SPHERE_PARAMETER}, got {n}"
        )));
    }
    Ok(())
}

/// A formal shape-matrix symbol `a[row, col]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sym {
    pub row: u8,
    pub col: u8,
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{},{}]", self.row, self.col)
    }
}

/// A monomial: a multiset of symbols kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Sym>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn symbols(&self) -> &[Sym] {
        &self.0
    }

    fn product(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Polynomial in the shape symbols with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RationalPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        RationalPoly::constant(BigRational::one())
    }

    pub fn from_symbol(row: u8, col: u8) -> Self {
        let mut p = RationalPoly::zero();
        p.terms
            .insert(Monomial(vec![Sym { row, col }]), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_assign(&mut self, other: &RationalPoly) {
        for (m, c) in &other.terms {
            self.add_monomial(m.clone(), c.clone());
        }
    }

    pub fn add_assign_scaled(&mut self, other: &RationalPoly, scale: &BigRational) {
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_monomial(m.clone(), c * scale);
        }
    }

    fn add_monomial(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        let mut out = RationalPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_monomial(m1.product(m2), c1 * c2);
            }
        }
        out
    }

    pub fn neg(&self) -> RationalPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scaled(&self, s: &BigRational) -> RationalPoly {
        if s.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.clone() * s;
        }
        out
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_monomial(m.clone(), -c.clone());
        }
        out
    }

    /// Evaluates the polynomial under an exact assignment of the symbols.
    pub fn eval(&self, assign: &dyn Fn(Sym) -> BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &s in m.symbols() {
                term *= assign(s);
            }
            total += term;
        }
        total
    }

    pub fn max_symbol_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() && m.degree() > 0 {
                write!(f, "{m}")?;
            } else if m.degree() == 0 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}·{m}")?;
            }
        }
        Ok(())
    }
}

/// Exterior form of a fixed degree over the coframe `ω_1, …, ω_dim`,
/// with [`RationalPoly`] coefficients on strictly increasing index tuples.
/// Antisymmetry is enforced at construction by sign normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<u8>, RationalPoly>,
}

impl ExteriorForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        ExteriorForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `poly · ω_{idx₁} ∧ … ∧ ω_{idx_d}` for a possibly unsorted
    /// tuple; repeated indices contribute nothing.
    pub fn add_term(&mut self, indices: &[u8], poly: RationalPoly) -> Result<()> {
        if indices.len() != self.degree {
            return Err(Error::domain(format!(
                "tuple of length {} in a degree-{} form",
                indices.len(),
                self.degree
            )));
        }
        if indices.iter().any(|&i| i == 0 || i as usize > self.dim) {
            return Err(Error::domain("coframe index out of range"));
        }
        if poly.is_zero() {
            return Ok(());
        }
        let mut idx = indices.to_vec();
        // insertion sort, counting swaps for the sign
        let mut swaps = 0usize;
        for i in 1..idx.len() {
            let mut j = i;
            while j > 0 && idx[j - 1] > idx[j] {
                idx.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let signed = if swaps % 2 == 0 { poly } else { poly.neg() };
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(signed);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&signed);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    pub fn coefficient(&self, indices: &[u8]) -> RationalPoly {
        self.terms.get(indices).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &RationalPoly)> {
        self.terms.iter()
    }

    /// Graded-antisymmetric bilinear product with exact coefficients.
    pub fn wedge(&self, other: &ExteriorForm) -> Result<ExteriorForm> {
        if self.dim != other.dim {
            return Err(Error::domain("wedge of forms over different coframes"));
        }
        if self.degree + other.degree > self.dim {
            return Err(Error::domain(format!(
                "wedge degree {} + {} exceeds coframe dimension {}",
                self.degree, other.degree, self.dim
            )));
        }
        let mut out = ExteriorForm::zero(self.dim, self.degree + other.degree);
        let mut merged = Vec::with_capacity(out.degree);
        for (t1, p1) in &self.terms {
            for (t2, p2) in &other.terms {
                if t1.iter().any(|i| t2.contains(i)) {
                    continue;
                }
                merged.clear();
                merged.extend_from_slice(t1);
                merged.extend_from_slice(t2);
                out.add_term(&merged, p1.mul(p2))?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ExteriorForm) -> Result<ExteriorForm> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::domain("adding incompatible forms"));
        }
        let mut out = self.clone();
        for (t, p) in &other.terms {
            out.add_term(t, p.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExteriorForm) -> Result<ExteriorForm> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::domain("subtracting incompatible forms"));
        }
        let mut out = self.clone();
        for (t, p) in &other.terms {
            out.add_term(t, p.neg())?;
        }
        Ok(out)
    }

    pub fn scaled(&self, s: &BigRational) -> ExteriorForm {
        let mut out = ExteriorForm::zero(self.dim, self.degree);
        if s.is_zero() {
            return out;
        }
        for (t, p) in &self.terms {
            out.terms.insert(t.clone(), p.scaled(s));
        }
        out
    }

    fn add_scaled_in_place(&mut self, other: &ExteriorForm, s: &BigRational) {
        if s.is_zero() {
            return;
        }
        for (t, p) in &other.terms {
            let scaled = p.scaled(s);
            self.add_term(t, scaled).expect("compatible terms");
        }
    }

    /// Evaluates every coefficient under an exact symbol assignment.
    pub fn eval(&self, assign: &dyn Fn(Sym) -> BigRational) -> BTreeMap<Vec<u8>, BigRational> {
        let mut out = BTreeMap::new();
        for (t, p) in &self.terms {
            let v = p.eval(assign);
            if !v.is_zero() {
                out.insert(t.clone(), v);
            }
        }
        out
    }
}

/// The exact `2n`-form obtained by expanding the Pfaffian definition of
/// the Euler form of the normal distribution on the unit round sphere:
/// the permutation sum over `S_{2n}` of wedges of
/// `Ω⊥_{AB} = ω_A ∧ ω_B + ω_{A,2n+1} ∧ ω_{B,2n+1}` with
/// `ω_{A,2n+1} = −Σ_B a[A,B] ω_B`, scaled by `2/(2n)!`.
///
/// The remaining `1/vol(S^{2n})` is carried implicitly (see module docs).
pub fn euler_form_expansion(n: usize) -> Result<ExteriorForm> {
    guard(n)?;
    let two_n = 2 * n;
    let dim = two_n + 1;

    // connection forms ω_{A,2n+1}, A = 1..2n
    let mut omega_conn: Vec<ExteriorForm> = Vec::with_capacity(two_n + 1);
    omega_conn.push(ExteriorForm::zero(dim, 1)); // dummy index 0
    for a in 1..=two_n {
        let mut f = ExteriorForm::zero(dim, 1);
        for b in 1..=dim {
            f.add_term(&[b as u8], RationalPoly::from_symbol(a as u8, b as u8).neg())?;
        }
        omega_conn.push(f);
    }

    // curvature 2-forms of the normal distribution, A < B
    let mut pair_form: HashMap<(u8, u8), ExteriorForm> = HashMap::new();
    for a in 1..=two_n {
        for b in a + 1..=two_n {
            let mut f = ExteriorForm::zero(dim, 2);
            f.add_term(&[a as u8, b as u8], RationalPoly::one())?;
            let f = f.add(&omega_conn[a].wedge(&omega_conn[b])?)?;
            pair_form.insert((a as u8, b as u8), f);
        }
    }

    // explicit sum over S_{2n}; products of 2-forms commute, so the wedge
    // for each permutation is memoized by its sorted pair set
    let mut memo: HashMap<Vec<(u8, u8)>, ExteriorForm> = HashMap::new();
    let mut total = ExteriorForm::zero(dim, two_n);
    for_each_permutation(two_n, |perm, sgn| {
        let mut sign = sgn;
        let mut pairs: Vec<(u8, u8)> = Vec::with_capacity(n);
        for j in 0..n {
            let mut x = (perm[2 * j] + 1) as u8;
            let mut y = (perm[2 * j + 1] + 1) as u8;
            if x > y {
                std::mem::swap(&mut x, &mut y);
                sign = -sign;
            }
            pairs.push((x, y));
        }
        pairs.sort_unstable();
        let product = memo.entry(pairs.clone()).or_insert_with(|| {
            let mut acc = pair_form[&pairs[0]].clone();
            for p in &pairs[1..] {
                acc = acc.wedge(&pair_form[p]).expect("degree within bounds");
            }
            acc
        });
        let s = BigRational::from_integer(BigInt::from(sign));
        total.add_scaled_in_place(product, &s);
    });

    let scale = BigRational::from_integer(BigInt::from(2)) / factorial_big(two_n as u64);
    Ok(total.scaled(&scale))
}

fn det_poly(size: usize, entry: &dyn Fn(usize, usize) -> RationalPoly) -> RationalPoly {
    if size == 0 {
        return RationalPoly::one();
    }
    let mut acc = RationalPoly::zero();
    for_each_permutation(size, |perm, sign| {
        let mut term = RationalPoly::one();
        for (i, &pi) in perm.iter().enumerate() {
            term = term.mul(&entry(i, pi));
        }
        let s = BigRational::from_integer(BigInt::from(sign));
        acc.add_assign_scaled(&term, &s);
    });
    acc
}

/// Symbolic `σ_{2k}` of the `2n×2n` block: sum of principal minors.
pub fn sigma_symbolic(n: usize, k: usize) -> RationalPoly {
    let two_n = 2 * n;
    let mut out = RationalPoly::zero();
    for_each_subset(two_n, 2 * k, |rows| {
        let d = det_poly(rows.len(), &|i, j| {
            RationalPoly::from_symbol((rows[i] + 1) as u8, (rows[j] + 1) as u8)
        });
        out.add_assign(&d);
    });
    out
}

/// Symbolic `σ⊥_{2k}(l)` with the same term enumeration and signs as the
/// numeric [`crate::matrix::sigma_perp`].
pub fn sigma_perp_symbolic(n: usize, k: usize, l: usize) -> RationalPoly {
    let two_n = 2 * n;
    let acc_col = (two_n + 1) as u8;
    let mut out = RationalPoly::zero();
    if k == 0 {
        return out;
    }
    for_each_sigma_perp_term(two_n, 2 * k, l, |rows, sign| {
        let cols: Vec<u8> = rows
            .iter()
            .filter(|&&r| r != l - 1)
            .map(|&r| (r + 1) as u8)
            .chain(std::iter::once(acc_col))
            .collect();
        let d = det_poly(rows.len(), &|i, j| {
            RationalPoly::from_symbol((rows[i] + 1) as u8, cols[j])
        });
        let s = BigRational::from_integer(BigInt::from(sign));
        out.add_assign_scaled(&d, &s);
    });
    out
}

/// The claimed closed form of the Euler expansion:
/// `2 Σ_k C(n,k)C(2n,2k)⁻¹ [ Σ_l σ⊥_{2k}(l) ω_1∧…∧ω̂_l∧…∧ω_{2n+1} + σ_{2k} ω_1∧…∧ω_{2n} ]`,
/// with the same implicit `1/vol(S^{2n})` prefactor as
/// [`euler_form_expansion`].
pub fn lemma_rhs_form(n: usize) -> Result<ExteriorForm> {
    guard(n)?;
    let two_n = 2 * n;
    let dim = two_n + 1;
    let mut total = ExteriorForm::zero(dim, two_n);
    for k in 0..=n {
        let c = sigma_coefficient(n as u64, k as u64) * BigRational::from_integer(BigInt::from(2));
        let tuple_flat: Vec<u8> = (1..=two_n as u8).collect();
        total.add_term(&tuple_flat, sigma_symbolic(n, k).scaled(&c))?;
        if k >= 1 {
            for l in 1..=two_n {
                let tuple: Vec<u8> = (1..=dim as u8).filter(|&t| t != l as u8).collect();
                total.add_term(&tuple, sigma_perp_symbolic(n, k, l).scaled(&c))?;
            }
        }
    }
    Ok(total)
}

/// One basis tuple on which the two expansions disagree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mismatch {
    pub tuple: Vec<u8>,
    pub difference: String,
}

/// Outcome of comparing the Pfaffian expansion with its claimed closed
/// form, coefficient by coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DifferenceReport {
    pub n: usize,
    pub verified: bool,
    /// Number of distinct basis tuples carrying a nonzero coefficient on
    /// either side.
    pub basis_tuples: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DifferenceReport {
    /// Human-readable rendering, one line per compared tuple family.
    pub fn human_readable(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Euler-form expansion check, n = {} ({} basis tuples): {}\n",
            self.n,
            self.basis_tuples,
            if self.verified {
                "verified — expansion and closed form agree exactly"
            } else {
                "MISMATCH"
            }
        ));
        for m in &self.mismatches {
            let tuple = m
                .tuple
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("  ω({tuple}): difference {}\n", m.difference));
        }
        out
    }
}

/// Compares [`euler_form_expansion`] and [`lemma_rhs_form`] and reports
/// every basis tuple whose polynomial difference is nonzero.
pub fn verify_lemma(n: usize) -> Result<DifferenceReport> {
    let euler = euler_form_expansion(n)?;
    let rhs = lemma_rhs_form(n)?;
    Ok(compare_forms(n, &euler, &rhs))
}

/// Comparison core, exposed so that fault-injection tests can perturb one
/// side and watch the report localize the damage.
pub fn compare_forms(n: usize, euler: &ExteriorForm, rhs: &ExteriorForm) -> DifferenceReport {
    let diff = euler.sub(rhs).expect("same shape");
    let mut support: std::collections::BTreeSet<Vec<u8>> = euler.support().cloned().collect();
    support.extend(rhs.support().cloned());
    let mismatches: Vec<Mismatch> = diff
        .terms()
        .map(|(t, p)| Mismatch {
            tuple: t.clone(),
            difference: p.to_string(),
        })
        .collect();
    DifferenceReport {
        n,
        verified: mismatches.is_empty(),
        basis_tuples: support.len(),
        mismatches,
    }
}
