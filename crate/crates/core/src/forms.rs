//! Exterior forms on the seven generators `e^1, …, e^7` and the
//! `g₂`-invariant 3-form `ω` and 4-form `Ω`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::compfactor::CompositionFactor;
use crate::fano::{Line, Point};
use crate::g2::{So7Elt, G2};
use crate::linalg::{kernel, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("grade {0} exceeds 7")]
    GradeOverflow(usize),
    #[error("index {0} is outside 1..=7")]
    BadIndex(u8),
    #[error("the term for {0} depends on the point ordering")]
    OrderingDependent(String),
}

/// A homogeneous form; term keys are 7-bit masks (bit `k−1` for `e^k`).
#[derive(Clone, PartialEq, Eq)]
pub struct ExteriorForm<S> {
    grade: usize,
    terms: BTreeMap<u8, S>,
}

/// Sign of sorting `idx` and its mask, or `None` on a repeated index.
fn sort_sign(idx: &[u8]) -> Result<Option<(i64, u8)>, FormError> {
    let mut mask = 0u8;
    for &i in idx {
        if !(1..=7).contains(&i) {
            return Err(FormError::BadIndex(i));
        }
        if mask >> (i - 1) & 1 == 1 {
            return Ok(None);
        }
        mask |= 1 << (i - 1);
    }
    let inversions = (0..idx.len())
        .flat_map(|a| (a + 1..idx.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| idx[a] > idx[b])
        .count();
    Ok(Some((if inversions % 2 == 0 { 1 } else { -1 }, mask)))
}

fn mask_indices(mask: u8) -> Vec<u8> {
    (1..=7).filter(|k| mask >> (k - 1) & 1 == 1).collect()
}

/// All masks of a given weight, ascending.
pub fn subsets(grade: usize) -> Vec<u8> {
    (0u8..128).filter(|m| m.count_ones() as usize == grade).collect()
}

impl<S: Scalar> ExteriorForm<S> {
    pub fn zero(grade: usize) -> Self {
        ExteriorForm {
            grade,
            terms: BTreeMap::new(),
        }
    }

    /// `e^{i_1} ∧ … ∧ e^{i_k}` in the given order.
    pub fn monomial(idx: &[u8]) -> Result<Self, FormError> {
        if idx.len() > 7 {
            return Err(FormError::GradeOverflow(idx.len()));
        }
        let mut f = Self::zero(idx.len());
        if let Some((sign, mask)) = sort_sign(idx)? {
            f.add_term(mask, S::from_i64(sign));
        }
        Ok(f)
    }

    /// `e^1 ∧ ⋯ ∧ e^7`.
    pub fn vol() -> Self {
        Self::monomial(&[1, 2, 3, 4, 5, 6, 7]).expect("valid")
    }

    fn add_term(&mut self, mask: u8, v: S) {
        if v.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(S::zero);
        *e = e.clone() + v;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeff(&self, idx: &[u8]) -> S {
        match sort_sign(idx) {
            Ok(Some((sign, mask))) => self
                .terms
                .get(&mask)
                .map(|v| v.clone() * S::from_i64(sign))
                .unwrap_or_else(S::zero),
            _ => S::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u8>, &S)> {
        self.terms.iter().map(|(m, v)| (mask_indices(*m), v))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.grade, o.grade, "adding forms of different grades");
        let mut out = self.clone();
        for (m, v) in &o.terms {
            out.add_term(*m, v.clone());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.grade);
        for (m, v) in &self.terms {
            out.add_term(*m, v.clone() * s.clone());
        }
        out
    }

    /// Coefficients on [`subsets`]`(grade)`.
    pub fn to_vec(&self) -> Vec<S> {
        subsets(self.grade)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(S::zero))
            .collect()
    }

    pub fn from_vec(grade: usize, v: &[S]) -> Self {
        let mut f = Self::zero(grade);
        for (m, c) in subsets(grade).into_iter().zip(v) {
            f.add_term(m, c.clone());
        }
        f
    }

    /// Inner product with sorted subsets orthonormal.
    pub fn inner(&self, o: &Self) -> S {
        self.terms.iter().fold(S::zero(), |acc, (m, v)| match o.terms.get(m) {
            Some(w) => acc + v.clone() * w.clone(),
            None => acc,
        })
    }
}

pub fn wedge<S: Scalar>(a: &ExteriorForm<S>, b: &ExteriorForm<S>) -> Result<ExteriorForm<S>, FormError> {
    let grade = a.grade + b.grade;
    if grade > 7 {
        return Err(FormError::GradeOverflow(grade));
    }
    let mut out = ExteriorForm::zero(grade);
    for (ma, va) in &a.terms {
        for (mb, vb) in &b.terms {
            if ma & mb != 0 {
                continue;
            }
            let mut idx = mask_indices(*ma);
            idx.extend(mask_indices(*mb));
            let (sign, mask) = sort_sign(&idx)?.expect("disjoint");
            out.add_term(mask, va.clone() * vb.clone() * S::from_i64(sign));
        }
    }
    Ok(out)
}

/// Interior product `i_v` with contraction into the leading slot:
/// `i_v(e^{i_1} ∧ ⋯ ∧ e^{i_k}) = Σ_m (−1)^{m−1} v_{i_m} e^{i_1} ∧ ⋯ ê^{i_m} ⋯`.
/// `v[k−1]` is the coefficient of `e_k`.
pub fn contract<S: Scalar>(v: &[S; 7], a: &ExteriorForm<S>) -> ExteriorForm<S> {
    let mut out = ExteriorForm::zero(a.grade.saturating_sub(1));
    for (m, c) in &a.terms {
        let idx = mask_indices(*m);
        for (pos, &k) in idx.iter().enumerate() {
            let vk = &v[k as usize - 1];
            if vk.is_zero() {
                continue;
            }
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            out.add_term(m & !(1 << (k - 1)), c.clone() * vk.clone() * S::from_i64(sign));
        }
    }
    out
}

/// The derivation action of `x ∈ so(7)` extended from `e^k ↦ Σ_l M_{lk} e^l`
/// with `M` the vector matrix of `x`.
pub fn derive<S: Scalar>(x: &So7Elt<S>, a: &ExteriorForm<S>) -> ExteriorForm<S> {
    derive_by_matrix(&x.vector_matrix(), a)
}

fn derive_by_matrix<S: Scalar>(m: &Matrix<S>, a: &ExteriorForm<S>) -> ExteriorForm<S> {
    let mut out = ExteriorForm::zero(a.grade);
    for (mask, c) in &a.terms {
        let idx = mask_indices(*mask);
        for pos in 0..idx.len() {
            for l in 1..=7u8 {
                let entry = m.get(l as usize, idx[pos] as usize);
                if entry.is_zero() {
                    continue;
                }
                let mut new = idx.clone();
                new[pos] = l;
                if let Some((sign, nm)) = sort_sign(&new).expect("valid indices") {
                    out.add_term(nm, c.clone() * entry.clone() * S::from_i64(sign));
                }
            }
        }
    }
    out
}

fn permutations<const N: usize>(items: [Point; N]) -> Vec<[Point; N]> {
    let mut out = Vec::new();
    let mut a = items;
    fn rec<const N: usize>(k: usize, a: &mut [Point; N], out: &mut Vec<[Point; N]>) {
        if k == N {
            out.push(*a);
            return;
        }
        for i in k..N {
            a.swap(k, i);
            rec(k + 1, a, out);
            a.swap(k, i);
        }
    }
    rec(0, &mut a, &mut out);
    out
}

fn labels<const N: usize>(pts: &[Point; N]) -> Vec<u8> {
    pts.iter().map(|p| p.label()).collect()
}

/// `ω = Σ_D ε_PQ ε_QR ε_RP e^P ∧ e^Q ∧ e^R`, each term checked over all six
/// orderings of its line.
pub fn omega<S: Scalar>(eps: &CompositionFactor) -> Result<ExteriorForm<S>, FormError> {
    let mut out = ExteriorForm::zero(3);
    for d in Line::ALL {
        let term = |[p, q, r]: [Point; 3]| {
            let c = eps.at(p, q) * eps.at(q, r) * eps.at(r, p);
            ExteriorForm::<S>::monomial(&labels(&[p, q, r]))
                .expect("distinct")
                .scale(&S::from_i64(c as i64))
        };
        let orderings = permutations(d.points());
        let first = term(orderings[0]);
        if orderings.iter().any(|o| term(*o) != first) {
            return Err(FormError::OrderingDependent(d.to_string()));
        }
        out = out.add(&first);
    }
    Ok(out)
}

/// `Ω = Σ_K ε_PQ ε_RS e^P ∧ e^Q ∧ e^R ∧ e^S` over the seven quadrilaterals,
/// each term checked over all 24 orderings.
pub fn big_omega<S: Scalar>(eps: &CompositionFactor) -> Result<ExteriorForm<S>, FormError> {
    let mut out = ExteriorForm::zero(4);
    for d in Line::ALL {
        let term = |[p, q, r, s]: [Point; 4]| {
            let c = eps.at(p, q) * eps.at(r, s);
            ExteriorForm::<S>::monomial(&labels(&[p, q, r, s]))
                .expect("distinct")
                .scale(&S::from_i64(c as i64))
        };
        let orderings = permutations(d.quadrilateral());
        let first = term(orderings[0]);
        if orderings.iter().any(|o| term(*o) != first) {
            return Err(FormError::OrderingDependent(format!("complement of {d}")));
        }
        out = out.add(&first);
    }
    Ok(out)
}

/// The identities and invariance statements for `ω` and `Ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormsReport {
    pub omega_terms: usize,
    pub big_omega_terms: usize,
    /// `⟨ω, ω⟩`.
    pub omega_norm: i64,
    /// `⟨Ω, Ω⟩`.
    pub big_omega_norm: i64,
    /// `c` with `Ω ∧ ω = c · vol`.
    pub wedge_constant: i64,
    /// `i_v ω ∧ i_w ω ∧ ω = −6 δ_vw vol` on all basis pairs.
    pub contraction_identity: bool,
    pub omega_invariant: bool,
    pub big_omega_invariant: bool,
    pub invariant_3form_dim: usize,
}

fn as_i64(x: &crate::scalar::Rational) -> i64 {
    x.to_i64().expect("integral value")
}

pub fn forms_report(g2: &G2<crate::scalar::Rational>) -> Result<FormsReport, FormError> {
    type Q = crate::scalar::Rational;
    let w: ExteriorForm<Q> = omega(g2.eps())?;
    let big: ExteriorForm<Q> = big_omega(g2.eps())?;
    let vol = ExteriorForm::<Q>::vol();
    let wedge_constant = as_i64(&wedge(&big, &w)?.coeff(&[1, 2, 3, 4, 5, 6, 7]));
    let unit = |k: usize| -> [Q; 7] { std::array::from_fn(|i| if i == k { Q::one() } else { Q::zero() }) };
    let mut contraction_identity = true;
    for v in 0..7 {
        for u in 0..7 {
            let lhs = wedge(&wedge(&contract(&unit(v), &w), &contract(&unit(u), &w))?, &w)?;
            let expected = if u == v { vol.scale(&Q::from_i64(-6)) } else { ExteriorForm::zero(7) };
            contraction_identity &= lhs == expected;
        }
    }
    let basis = g2.basis();
    let omega_invariant = basis.iter().all(|x| derive(x, &w).is_zero());
    let big_omega_invariant = basis.iter().all(|x| derive(x, &big).is_zero());
    Ok(FormsReport {
        omega_terms: w.term_count(),
        big_omega_terms: big.term_count(),
        omega_norm: as_i64(&w.inner(&w)),
        big_omega_norm: as_i64(&big.inner(&big)),
        wedge_constant,
        contraction_identity,
        omega_invariant,
        big_omega_invariant,
        invariant_3form_dim: invariant_forms_dim(g2, 3),
    })
}

/// Dimension of the `g₂`-invariant forms of a grade: the common kernel of
/// the derivations by the 14 basis elements.
pub fn invariant_forms_dim<S: Scalar>(g2: &G2<S>, grade: usize) -> usize {
    let cols = subsets(grade);
    let mut rows: Vec<Vec<S>> = Vec::new();
    for x in g2.basis() {
        let m = x.vector_matrix();
        let images: Vec<Vec<S>> = cols
            .iter()
            .map(|&c| {
                let mut f = ExteriorForm::zero(grade);
                f.add_term(c, S::one());
                derive_by_matrix(&m, &f).to_vec()
            })
            .collect();
        for r in 0..cols.len() {
            rows.push(images.iter().map(|v| v[r].clone()).collect());
        }
    }
    kernel(cols.len(), &rows).len()
}

impl<S: Scalar> fmt::Display for ExteriorForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, v)| {
                let idx: String = mask_indices(*m).iter().map(|k| k.to_string()).collect();
                format!("{v}·e{idx}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for ExteriorForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
