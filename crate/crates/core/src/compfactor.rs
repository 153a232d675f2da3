//! Norms, multiplication factors and composition factors on the Fano plane,
//! with the action of `Aut(F)` on them.
//!
//! A multiplication factor is an antisymmetric sign table `ε_PQ` (`P ≠ Q`).
//! It is a composition factor for a norm `N` when the line rule
//! `N(P+R) ε_PQ ε_QR = 1` and the quadrilateral rule
//! `N(P+Q) ε_PQ ε_QR ε_RS ε_SP N(P+S) = -1` hold. Everything downstream of
//! [`enumerate_composition_factors`] uses the trivial norm `N ≡ 1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fano::{
    all_collineations, collinear, legendre7, triangles, wedge, Collineation, Line, Orientation,
    Point,
};
use crate::radon::SignLineFn;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompFactorError {
    #[error("table entries must be ±1 off the diagonal")]
    BadEntry,
    #[error("table is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(Point, Point),
    #[error("not multiplicative: N({0} + {1}) != N({0}) N({1})")]
    BadNorm(Point, Point),
    #[error("multiplication factor is not a composition factor")]
    NotComposition,
    #[error("oriented map axiom fails at ({0}, {1})")]
    BadOrientedMap(Point, Point),
    #[error("exponentiation of oriented map {0} is not a composition factor")]
    ExponentiationFailed(String),
}

// ---------------------------------------------------------------------------
// Norms

/// A norm `N : F → ±1` with `N(P+Q) = N(P) N(Q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Norm {
    values: [i8; 7],
}

impl Norm {
    pub fn new(values: [i8; 7]) -> Result<Self, CompFactorError> {
        if values.iter().any(|v| v.abs() != 1) {
            return Err(CompFactorError::BadEntry);
        }
        let n = Norm { values };
        for p in Point::ALL {
            for q in Point::ALL {
                if let Some(r) = p.add(q) {
                    if n.at(r) != n.at(p) * n.at(q) {
                        return Err(CompFactorError::BadNorm(p, q));
                    }
                }
            }
        }
        Ok(n)
    }

    pub fn trivial() -> Self {
        Norm { values: [1; 7] }
    }

    pub fn at(&self, p: Point) -> i8 {
        self.values[p.index()]
    }

    /// The points where `N = 1`.
    pub fn support(&self) -> Vec<Point> {
        Point::ALL.into_iter().filter(|&p| self.at(p) == 1).collect()
    }
}

/// All eight norms: the trivial one and one per line.
pub fn all_norms() -> Vec<Norm> {
    (0u8..128)
        .filter_map(|m| Norm::new(std::array::from_fn(|k| if m >> k & 1 == 1 { -1 } else { 1 })).ok())
        .collect()
}

// ---------------------------------------------------------------------------
// Multiplication factors

/// The 21 unordered pairs `(P_i, P_j)`, `i < j`, in lexicographic order.
pub fn point_pairs() -> impl Iterator<Item = (Point, Point)> {
    Point::ALL.into_iter().flat_map(|p| {
        Point::ALL
            .into_iter()
            .filter(move |&q| q > p)
            .map(move |q| (p, q))
    })
}

/// An antisymmetric sign table on ordered pairs of distinct points.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultFactor {
    table: [[i8; 7]; 7],
}

impl MultFactor {
    pub fn new(table: [[i8; 7]; 7]) -> Result<Self, CompFactorError> {
        for p in Point::ALL {
            for q in Point::ALL {
                let v = table[p.index()][q.index()];
                if p == q {
                    if v != 0 {
                        return Err(CompFactorError::BadEntry);
                    }
                } else if v.abs() != 1 {
                    return Err(CompFactorError::BadEntry);
                } else if v != -table[q.index()][p.index()] {
                    return Err(CompFactorError::NotAntisymmetric(p, q));
                }
            }
        }
        Ok(MultFactor { table })
    }

    /// Builds the table from its values on `(P_i, P_j)`, `i < j`.
    pub fn from_upper(f: impl Fn(Point, Point) -> i8) -> Self {
        let mut table = [[0i8; 7]; 7];
        for (p, q) in point_pairs() {
            let v = if f(p, q) < 0 { -1 } else { 1 };
            table[p.index()][q.index()] = v;
            table[q.index()][p.index()] = -v;
        }
        MultFactor { table }
    }

    /// Bit `k` is set when `ε = -1` on the `k`-th pair of [`point_pairs`].
    pub fn from_key(key: u32) -> Self {
        let pairs: Vec<_> = point_pairs().collect();
        MultFactor::from_upper(|p, q| {
            let k = pairs.iter().position(|&x| x == (p, q)).expect("pair");
            if key >> k & 1 == 1 {
                -1
            } else {
                1
            }
        })
    }

    pub fn key(&self) -> u32 {
        point_pairs()
            .enumerate()
            .fold(0, |acc, (k, (p, q))| acc | ((self.at(p, q) < 0) as u32) << k)
    }

    /// `ε_PQ`; zero on the diagonal.
    pub fn at(&self, p: Point, q: Point) -> i8 {
        self.table[p.index()][q.index()]
    }

    pub fn table(&self) -> [[i8; 7]; 7] {
        self.table
    }

    pub fn negate(&self) -> Self {
        MultFactor {
            table: self.table.map(|row| row.map(|v| -v)),
        }
    }

    /// `{Q : ε_PQ = 1}`.
    pub fn future(&self, p: Point) -> Vec<Point> {
        Point::ALL.into_iter().filter(|&q| self.at(p, q) == 1).collect()
    }

    /// `{Q : ε_PQ = -1}`.
    pub fn past(&self, p: Point) -> Vec<Point> {
        Point::ALL.into_iter().filter(|&q| self.at(p, q) == -1).collect()
    }

    /// `(g·ε)_PQ = ε_{g⁻¹P, g⁻¹Q}`.
    pub fn act(&self, g: &Collineation) -> Self {
        let gi = g.inverse();
        MultFactor::from_upper(|p, q| self.at(gi.apply(p), gi.apply(q)))
    }

    /// `ε'_PQ = h(P ∧ Q) ε_PQ` for a sign function `h` on lines.
    pub fn twist(&self, h: SignLineFn) -> Self {
        MultFactor::from_upper(|p, q| h.at(wedge(p, q).expect("distinct")) * self.at(p, q))
    }
}

impl fmt::Debug for MultFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultFactor({:06x})", self.key())
    }
}

impl PartialOrd for MultFactor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultFactor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

fn is_line_set(points: &[Point]) -> bool {
    points.len() == 3 && collinear(points[0], points[1], points[2])
}

/// Both rules of the composition criterion, checked over every ordering of
/// every line and every quadrilateral.
pub fn is_composition_factor(eps: &MultFactor, n: &Norm) -> bool {
    let nsum = |a: Point, b: Point| n.at(a.add(b).expect("distinct points"));
    for d in Line::ALL {
        let pts = d.points();
        for (i, j, k) in PERM3 {
            let (p, q, r) = (pts[i], pts[j], pts[k]);
            if nsum(p, r) * eps.at(p, q) * eps.at(q, r) != 1 {
                return false;
            }
        }
    }
    for d in Line::ALL {
        let pts = d.quadrilateral();
        for [i, j, k, l] in PERM4 {
            let (p, q, r, s) = (pts[i], pts[j], pts[k], pts[l]);
            let v = nsum(p, q) * eps.at(p, q) * eps.at(q, r) * eps.at(r, s) * eps.at(s, p) * nsum(p, s);
            if v != -1 {
                return false;
            }
        }
    }
    true
}

const PERM3: [(usize, usize, usize); 6] = [
    (0, 1, 2),
    (0, 2, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 0, 1),
    (2, 1, 0),
];

const PERM4: [[usize; 4]; 24] = {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    out[n] = [a, b, c, d];
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

// ---------------------------------------------------------------------------
// Composition factors

/// Whether the future (`Plus`) or the past (`Minus`) of every point is a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "O+")]
    Plus,
    #[serde(rename = "O-")]
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Plus => write!(f, "O+"),
            Side::Minus => write!(f, "O-"),
        }
    }
}

/// A composition factor for the trivial norm, tagged with its side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CompositionFactor {
    eps: MultFactor,
    side: Side,
}

impl CompositionFactor {
    pub fn new(eps: MultFactor) -> Result<Self, CompFactorError> {
        if !is_composition_factor(&eps, &Norm::trivial()) {
            return Err(CompFactorError::NotComposition);
        }
        let side = if Point::ALL.iter().all(|&p| is_line_set(&eps.future(p))) {
            Side::Plus
        } else if Point::ALL.iter().all(|&p| is_line_set(&eps.past(p))) {
            Side::Minus
        } else {
            return Err(CompFactorError::NotComposition);
        };
        Ok(CompositionFactor { eps, side })
    }

    pub fn eps(&self) -> &MultFactor {
        &self.eps
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn at(&self, p: Point, q: Point) -> i8 {
        self.eps.at(p, q)
    }

    pub fn negate(&self) -> Self {
        CompositionFactor::new(self.eps.negate()).expect("negation preserves both rules")
    }

    /// `g·ε`.
    pub fn act(&self, g: &Collineation) -> Self {
        CompositionFactor::new(self.eps.act(g)).expect("the action preserves both rules")
    }

    /// Compact identifier: the 21-bit key in hex.
    pub fn key_hex(&self) -> String {
        format!("{:06x}", self.eps.key())
    }
}

impl Serialize for CompositionFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CompositionFactor", 3)?;
        st.serialize_field("key", &self.key_hex())?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("table", &self.eps.table())?;
        st.end()
    }
}

/// `ε^τ_{τⁱP₀, τʲP₀} = (j − i | 7)`.
pub fn canonical_epsilon_from(tau: &Orientation, base: Point) -> CompositionFactor {
    let t = tau.tau();
    let mut exponent = [0i64; 7];
    let mut x = base;
    for i in 0..7 {
        exponent[x.index()] = i;
        x = t.apply(x);
    }
    let eps = MultFactor::from_upper(|p, q| {
        legendre7(exponent[q.index()] - exponent[p.index()]).expect("distinct powers")
    });
    CompositionFactor::new(eps).expect("the canonical factor is a composition factor")
}

pub fn canonical_epsilon(tau: &Orientation) -> CompositionFactor {
    canonical_epsilon_from(tau, Point::ALL[0])
}

/// The canonical factor of the shift `P_i ↦ P_{i+1}`.
pub fn canonical() -> CompositionFactor {
    canonical_epsilon(&Orientation::canonical())
}

/// The 16 composition factors for `N ≡ 1`, sorted by key.
///
/// For the trivial norm the line rule says `ε_PQ = ε_QR = ε_RP` around every
/// line, so a candidate is one orientation bit per line; the quadrilateral
/// rule then filters the 128 candidates.
pub fn enumerate_composition_factors() -> Vec<CompositionFactor> {
    let mut out: Vec<CompositionFactor> = (0u8..128)
        .filter_map(|bits| {
            let mut table = [[0i8; 7]; 7];
            for d in Line::ALL {
                let s = if bits >> (d.index() - 1) & 1 == 1 { -1 } else { 1 };
                let [a, b, c] = d.points();
                for (x, y) in [(a, b), (b, c), (c, a)] {
                    table[x.index()][y.index()] = s;
                    table[y.index()][x.index()] = -s;
                }
            }
            CompositionFactor::new(MultFactor::new(table).ok()?).ok()
        })
        .collect();
    out.sort();
    out
}

/// The `Aut(F)`-orbits on composition factors, each sorted, ordered by their
/// least element.
pub fn orbit_decomposition() -> Vec<Vec<CompositionFactor>> {
    let mut remaining: BTreeSet<CompositionFactor> =
        enumerate_composition_factors().into_iter().collect();
    let mut orbits = Vec::new();
    while let Some(&first) = remaining.iter().next() {
        let orbit: BTreeSet<CompositionFactor> =
            all_collineations().iter().map(|g| first.act(g)).collect();
        for e in &orbit {
            remaining.remove(e);
        }
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// `{g : g·ε = ε}`, sorted.
pub fn isotropy(eps: &CompositionFactor) -> Vec<Collineation> {
    all_collineations()
        .iter()
        .copied()
        .filter(|g| eps.act(g) == *eps)
        .collect()
}

/// Triangles `{A, B, C}` with `ε_AB = ε_BC = ε_CA` for one cyclic order.
pub fn orientable_triangles(eps: &CompositionFactor) -> Vec<[Point; 3]> {
    triangles()
        .into_iter()
        .filter(|&[a, b, c]| {
            let s = eps.at(a, b);
            eps.at(b, c) == s && eps.at(c, a) == s
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Oriented maps

/// A linear form on `Z₂³`, stored as the mask `m` of `x ↦ popcount(m & x)`.
fn eval_form(m: u8, x: u8) -> u8 {
    ((m & x).count_ones() % 2) as u8
}

/// `P ↦ α_P ∈ V_F*` with `α_P(P) = 1` and `α_P(Q) + α_Q(P) = 1` for `P ≠ Q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct OrientedMap {
    alpha: [u8; 7],
}

impl OrientedMap {
    pub fn new(alpha: [u8; 7]) -> Result<Self, CompFactorError> {
        let m = OrientedMap { alpha };
        for p in Point::ALL {
            if m.eval(p, p) != 1 {
                return Err(CompFactorError::BadOrientedMap(p, p));
            }
            for q in Point::ALL {
                if p != q && m.eval(p, q) + m.eval(q, p) != 1 {
                    return Err(CompFactorError::BadOrientedMap(p, q));
                }
            }
        }
        Ok(m)
    }

    /// `α_P(Q)`.
    pub fn eval(&self, p: Point, q: Point) -> u8 {
        eval_form(self.alpha[p.index()], q.mask())
    }

    pub fn forms(&self) -> [u8; 7] {
        self.alpha
    }

    /// `(g·α)_P = α_{g⁻¹P} ∘ g⁻¹`.
    pub fn act(&self, g: &Collineation) -> Self {
        let gi = g.inverse();
        let mut alpha = [0u8; 7];
        for p in Point::ALL {
            let src = self.alpha[gi.apply(p).index()];
            // The form x ↦ src(g⁻¹ x), recovered from its values on the basis.
            alpha[p.index()] = (0..3).fold(0, |m, k| {
                m | eval_form(src, gi.apply_mask(1 << k)) << k
            });
        }
        OrientedMap::new(alpha).expect("the action preserves both axioms")
    }

    fn describe(&self) -> String {
        self.alpha.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// The eight oriented maps, sorted.
pub fn enumerate_oriented_maps() -> Vec<OrientedMap> {
    // Each α_P ranges over the four forms with α_P(P) = 1.
    let choices: Vec<Vec<u8>> = Point::ALL
        .iter()
        .map(|p| (1u8..8).filter(|&m| eval_form(m, p.mask()) == 1).collect())
        .collect();
    let mut out = Vec::new();
    let mut idx = [0usize; 7];
    loop {
        let alpha = std::array::from_fn(|k| choices[k][idx[k]]);
        if let Ok(m) = OrientedMap::new(alpha) {
            out.push(m);
        }
        let mut k = 0;
        while k < 7 {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == 7 {
            break;
        }
    }
    out.sort();
    out
}

/// `ε_PQ = (-1)^{α_P(Q)}`, validated as a composition factor.
pub fn exponentiate(alpha: &OrientedMap) -> Result<CompositionFactor, CompFactorError> {
    let mut table = [[0i8; 7]; 7];
    for p in Point::ALL {
        for q in Point::ALL {
            if p != q {
                table[p.index()][q.index()] = if alpha.eval(p, q) == 1 { -1 } else { 1 };
            }
        }
    }
    let eps = MultFactor::new(table)
        .map_err(|_| CompFactorError::ExponentiationFailed(alpha.describe()))?;
    CompositionFactor::new(eps).map_err(|_| CompFactorError::ExponentiationFailed(alpha.describe()))
}

// ---------------------------------------------------------------------------
// Bilinear forms

/// A `Z₂`-valued function on `V_F × V_F`, stored as 8 rows of 8 bits indexed
/// by masks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BilinearForm {
    rows: [u8; 8],
}

impl BilinearForm {
    pub fn eval(&self, u: u8, v: u8) -> u8 {
        self.rows[u as usize] >> v & 1
    }

    pub fn is_bilinear(&self) -> bool {
        (0..8u8).all(|u| {
            (0..8u8).all(|v| {
                (0..8u8).all(|w| {
                    self.eval(u ^ w, v) == self.eval(u, v) ^ self.eval(w, v)
                        && self.eval(u, v ^ w) == self.eval(u, v) ^ self.eval(u, w)
                })
            })
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..8u8).all(|u| (0..8u8).all(|v| self.eval(u, v) == self.eval(v, u)))
    }

    /// Vanishes on the diagonal.
    pub fn is_alternating(&self) -> bool {
        (0..8u8).all(|u| self.eval(u, u) == 0)
    }

    /// `(g·B)(Q, R) = B(g⁻¹Q, g⁻¹R)`.
    pub fn act(&self, g: &Collineation) -> Self {
        let gi = g.inverse();
        let mut rows = [0u8; 8];
        for u in 0..8u8 {
            for v in 0..8u8 {
                rows[u as usize] |= self.eval(gi.apply_mask(u), gi.apply_mask(v)) << v;
            }
        }
        BilinearForm { rows }
    }
}

/// `(Q, R) ↦ (Q ∧ R)(P)` where `Q ∧ R` is the nonzero form vanishing on `Q`
/// and `R` when they are independent, and zero otherwise. `p` is a mask of
/// `V_F`.
pub fn point_to_bilinear(p: u8) -> BilinearForm {
    let mut rows = [0u8; 8];
    for u in 1..8u8 {
        for v in 1..8u8 {
            if u == v {
                continue;
            }
            let (a, b) = (
                Point::from_mask(u).expect("nonzero"),
                Point::from_mask(v).expect("nonzero"),
            );
            let form = wedge(a, b).expect("distinct").dual_mask();
            rows[u as usize] |= eval_form(form, p) << v;
        }
    }
    BilinearForm { rows }
}
