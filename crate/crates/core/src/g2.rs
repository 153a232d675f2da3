//! The Lie algebra `g₂(F)` inside `so(7)`, generated by the 21 elements
//! `X_{P,D}` attached to incident pairs.
//!
//! Elements are stored in the pair basis `e_{ij}` (`i < j`, point labels)
//! with brackets from structure constants. The spinor representation
//! `e_{ij} ↦ ¼[ρ_i, ρ_j]` (with `ρ` left multiplication in `O_F`) is a second
//! evaluation path used to cross-check every sign.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::compfactor::{canonical, canonical_epsilon_from, CompositionFactor};
use crate::fano::{wedge, Collineation, FanoError, Line, Orientation, Point};
use crate::lifting::{AugAut, AugGroup};
use crate::linalg::{kernel, Matrix, Subspace};
use crate::octonion::{Octonion, OctonionAlgebra, SignedBasis};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum G2Error {
    #[error("{0} is not on {1}")]
    NotIncident(Point, Line),
    #[error("cannot parse incident pair `{0}`")]
    Parse(String),
    #[error("conjugate of X{0} by {1} is not ±X{2}")]
    NotProportional(IncidentPair, AugAut, IncidentPair),
    #[error("δ({0}, {1}) depends on the line")]
    LineDependent(AugAut, Point),
    #[error("action of X{0} on e_{1} disagrees with the spinor matrix")]
    ActionMismatch(IncidentPair, Point),
    #[error(transparent)]
    Fano(#[from] FanoError),
}

// ---------------------------------------------------------------------------
// so(7) in the pair basis

/// The 21 pairs `(i, j)`, `1 ≤ i < j ≤ 7`, in lexicographic order.
pub const PAIRS: [(u8, u8); 21] = {
    let mut out = [(0u8, 0u8); 21];
    let mut k = 0;
    let mut i = 1;
    while i <= 7 {
        let mut j = i + 1;
        while j <= 7 {
            out[k] = (i, j);
            k += 1;
            j += 1;
        }
        i += 1;
    }
    out
};

/// Index of `(i, j)` in [`PAIRS`] for `i < j`.
pub fn pair_index(i: u8, j: u8) -> usize {
    debug_assert!(1 <= i && i < j && j <= 7);
    let (i, j) = (i as usize, j as usize);
    // Pairs starting below i: sum_{a<i} (7 - a).
    (i - 1) * 7 - (i - 1) * i / 2 + (j - i - 1)
}

/// An element of `so(7)` as coefficients on `e_{ij}`, `i < j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct So7Elt<S> {
    c: Vec<S>,
}

impl<S: Scalar> So7Elt<S> {
    pub fn zero() -> Self {
        So7Elt {
            c: vec![S::zero(); 21],
        }
    }

    pub fn from_coeffs(c: Vec<S>) -> Self {
        assert_eq!(c.len(), 21);
        So7Elt { c }
    }

    /// `e_{ij}` with `e_{ji} = -e_{ij}` and `e_{ii} = 0`.
    pub fn basis(i: u8, j: u8) -> Self {
        let mut x = Self::zero();
        x.add_term(i, j, S::one());
        x
    }

    fn add_term(&mut self, i: u8, j: u8, v: S) {
        if i == j || v.is_zero() {
            return;
        }
        let (k, v) = if i < j {
            (pair_index(i, j), v)
        } else {
            (pair_index(j, i), -v)
        };
        self.c[k] = self.c[k].clone() + v;
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        So7Elt {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        So7Elt {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        So7Elt {
            c: self.c.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        So7Elt {
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }

    /// Pair-basis inner product (the `e_{ij}` are orthonormal).
    pub fn inner(&self, o: &Self) -> S {
        self.c
            .iter()
            .zip(&o.c)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Matrix of the vector action on `O_F` (zero on `1`):
    /// `e_{ij}: e_k ↦ δ_{ik} e_j − δ_{jk} e_i`.
    pub fn vector_matrix(&self) -> Matrix<S> {
        let mut m: Matrix<S> = Matrix::zero(8);
        for (k, (i, j)) in PAIRS.iter().enumerate() {
            let v = &self.c[k];
            if v.is_zero() {
                continue;
            }
            let (i, j) = (*i as usize, *j as usize);
            m.set(j, i, m.get(j, i).clone() + v.clone());
            m.set(i, j, m.get(i, j).clone() - v.clone());
        }
        m
    }
}

/// `[x, y]` from `[e_ij, e_kl] = δ_ik e_jl − δ_jk e_il + δ_il e_kj − δ_jl e_ki`.
pub fn bracket<S: Scalar>(x: &So7Elt<S>, y: &So7Elt<S>) -> So7Elt<S> {
    let mut out = So7Elt::zero();
    for (a, &(i, j)) in PAIRS.iter().enumerate() {
        if x.c[a].is_zero() {
            continue;
        }
        for (b, &(k, l)) in PAIRS.iter().enumerate() {
            if y.c[b].is_zero() {
                continue;
            }
            let v = x.c[a].clone() * y.c[b].clone();
            if i == k {
                out.add_term(j, l, v.clone());
            }
            if j == k {
                out.add_term(i, l, -v.clone());
            }
            if i == l {
                out.add_term(k, j, v.clone());
            }
            if j == l {
                out.add_term(k, i, -v);
            }
        }
    }
    out
}

/// The Lie algebra generated by `gens`, as a subspace of the pair basis.
pub fn lie_closure<S: Scalar>(gens: &[So7Elt<S>]) -> Subspace<S> {
    let mut space = Subspace::zero(21);
    let mut elems: Vec<So7Elt<S>> = Vec::new();
    for g in gens {
        if space.insert(g.coeffs()) {
            elems.push(g.clone());
        }
    }
    let mut frontier = 0;
    while frontier < elems.len() {
        let new = elems[frontier].clone();
        for k in 0..elems.len() {
            let z = bracket(&elems[k], &new);
            if space.insert(z.coeffs()) {
                elems.push(z);
            }
        }
        frontier += 1;
    }
    space
}

fn to_elt<S: Scalar>(v: &[S]) -> So7Elt<S> {
    So7Elt::from_coeffs(v.to_vec())
}

// ---------------------------------------------------------------------------
// Incident pairs

/// A pair `(P, D)` with `P ∈ D`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IncidentPair {
    p: Point,
    d: Line,
}

impl IncidentPair {
    pub fn new(p: Point, d: Line) -> Result<Self, G2Error> {
        if d.contains(p) {
            Ok(IncidentPair { p, d })
        } else {
            Err(G2Error::NotIncident(p, d))
        }
    }

    /// All 21 pairs: for each point, its lines `D_i, D_{i−1}, D_{i−3}`.
    pub fn all() -> Vec<IncidentPair> {
        Point::ALL
            .iter()
            .flat_map(|&p| p.lines().map(move |d| IncidentPair { p, d }))
            .collect()
    }

    pub fn point(&self) -> Point {
        self.p
    }

    pub fn line(&self) -> Line {
        self.d
    }

    /// Position of the line among `D_i, D_{i−1}, D_{i−3}`.
    pub fn slot(&self) -> usize {
        self.p
            .lines()
            .iter()
            .position(|&l| l == self.d)
            .expect("incident")
    }

    pub fn act(&self, g: &Collineation) -> IncidentPair {
        IncidentPair {
            p: g.apply(self.p),
            d: g.apply_line(self.d),
        }
    }
}

impl fmt::Display for IncidentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.d)
    }
}

impl FromStr for IncidentPair {
    type Err = G2Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || G2Error::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let p: Point = a.trim().parse().map_err(|_| err())?;
        let d: Line = b.trim().parse().map_err(|_| err())?;
        IncidentPair::new(p, d)
    }
}

impl Serialize for IncidentPair {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

/// The `Aut(F)`-orbit of an ordered pair of incident pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Orbit {
    /// Equal pairs.
    D,
    /// Same point, different lines.
    O1,
    /// Same line, different points.
    O2,
    /// `P ∈ D′`, `P′ ∉ D`.
    O3,
    /// `P′ ∈ D`, `P ∉ D′`.
    O3Prime,
    /// `P ∉ D′`, `P′ ∉ D`.
    O4,
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orbit::D => "D",
            Orbit::O1 => "O1",
            Orbit::O2 => "O2",
            Orbit::O3 => "O3",
            Orbit::O3Prime => "O3'",
            Orbit::O4 => "O4",
        })
    }
}

pub fn classify_pair(a: &IncidentPair, b: &IncidentPair) -> Orbit {
    match (a.p == b.p, a.d == b.d) {
        (true, true) => Orbit::D,
        (true, false) => Orbit::O1,
        (false, true) => Orbit::O2,
        (false, false) => match (b.d.contains(a.p), a.d.contains(b.p)) {
            (true, false) => Orbit::O3,
            (false, true) => Orbit::O3Prime,
            (false, false) => Orbit::O4,
            (true, true) => unreachable!("two lines share at most one point"),
        },
    }
}

/// Orbit sizes, and whether each class is closed under the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub sizes: BTreeMap<String, usize>,
    pub single_orbits: bool,
}

pub fn orbit_census() -> OrbitCensus {
    let pairs = IncidentPair::all();
    let mut classes: BTreeMap<Orbit, Vec<(IncidentPair, IncidentPair)>> = BTreeMap::new();
    for a in &pairs {
        for b in &pairs {
            classes.entry(classify_pair(a, b)).or_default().push((*a, *b));
        }
    }
    let (ga, gb) = crate::fano::standard_generators();
    let single_orbits = classes.values().all(|members| {
        // Orbit of the first member under <a, b> must be the whole class.
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![members[0]];
        while let Some((x, y)) = stack.pop() {
            if seen.insert((x, y)) {
                for g in [&ga, &gb] {
                    stack.push((x.act(g), y.act(g)));
                }
            }
        }
        seen.len() == members.len() && members.iter().all(|m| seen.contains(m))
    });
    OrbitCensus {
        sizes: classes
            .iter()
            .map(|(k, v)| (k.to_string(), v.len()))
            .collect(),
        single_orbits,
    }
}

// ---------------------------------------------------------------------------
// The dual factor

/// A composition factor on the dual plane `F*`, transported to `F` through
/// the isomorphism `D_a ↦ P_{−a}` (which sends the pencil through `P_i` to
/// `D_{−i}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualFactor {
    eps: CompositionFactor,
}

fn dual_to_point(d: Line) -> Point {
    Point::cyclic(-(d.index() as i64))
}

impl DualFactor {
    /// The canonical factor of `F*` oriented by the order-7 collineation
    /// `D ↦ t(D)`, based at `D_1`.
    pub fn from_dual_orientation(t: &Collineation) -> Result<Self, FanoError> {
        let mut perm = [0u8; 7];
        for d in Line::ALL {
            perm[dual_to_point(d).index()] = dual_to_point(t.apply_line(d)).label();
        }
        let transported = Orientation::new(Collineation::new(perm)?)?;
        Ok(DualFactor {
            eps: canonical_epsilon_from(&transported, dual_to_point(Line::ALL[0])),
        })
    }

    /// Orientation `τ*: D ↦ τD`, the choice that reproduces the spinor action.
    pub fn canonical() -> Self {
        Self::from_dual_orientation(&crate::fano::canonical_tau()).expect("τ has order 7")
    }

    /// Orientation `τ*⁻¹`, kept for comparison.
    pub fn inverse_orientation() -> Self {
        Self::from_dual_orientation(&crate::fano::canonical_tau().inverse())
            .expect("τ⁻¹ has order 7")
    }

    pub fn at(&self, a: Line, b: Line) -> i8 {
        self.eps.at(dual_to_point(a), dual_to_point(b))
    }
}

// ---------------------------------------------------------------------------
// The algebra

/// `g₂(F)` for the canonical factor `ε^τ` over the scalar field `S`.
pub struct G2<S> {
    alg: OctonionAlgebra,
    dual: DualFactor,
    rho: Vec<Matrix<S>>,
    pair_spinors: Vec<Matrix<S>>,
    x_spinors: BTreeMap<IncidentPair, Matrix<S>>,
}

fn pt(i: i64) -> u8 {
    Point::cyclic(i).label()
}

/// The pair `(a, b)` spanning the line `L_k` through `P_i` minus `P_i`:
/// `L_0 = D_i ↦ (i+1, i+3)`, `L_1 = D_{i−1} ↦ (i+2, i−1)`,
/// `L_2 = D_{i−3} ↦ (i−3, i−2)`.
fn slot_pair(i: i64, k: usize) -> (u8, u8) {
    match k {
        0 => (pt(i + 1), pt(i + 3)),
        1 => (pt(i + 2), pt(i - 1)),
        _ => (pt(i - 3), pt(i - 2)),
    }
}

impl<S: Scalar> G2<S> {
    pub fn new() -> Self {
        let alg = OctonionAlgebra::new(canonical());
        let rho: Vec<Matrix<S>> = (0..8)
            .map(|k| alg.left_mult(&Octonion::<S>::basis(k)))
            .collect();
        let quarter = S::from_ratio(1, 4);
        let pair_spinors = PAIRS
            .iter()
            .map(|&(i, j)| {
                rho[i as usize]
                    .commutator(&rho[j as usize])
                    .scale(&quarter)
            })
            .collect();
        let mut g = G2 {
            alg,
            dual: DualFactor::canonical(),
            rho,
            pair_spinors,
            x_spinors: BTreeMap::new(),
        };
        g.x_spinors = IncidentPair::all()
            .into_iter()
            .map(|ip| (ip, g.spinor(&g.x(&ip))))
            .collect();
        g
    }

    /// `ρ̂(X_{P,D})`, precomputed.
    pub fn x_spinor(&self, ip: &IncidentPair) -> &Matrix<S> {
        &self.x_spinors[ip]
    }

    pub fn algebra(&self) -> &OctonionAlgebra {
        &self.alg
    }

    pub fn eps(&self) -> &CompositionFactor {
        self.alg.eps()
    }

    pub fn dual(&self) -> &DualFactor {
        &self.dual
    }

    /// `ρ(e_k)`.
    pub fn rho(&self, k: usize) -> &Matrix<S> {
        &self.rho[k]
    }

    /// `X_{P,D}`: for `L_k` the `k`-th line through `P`,
    /// `X_{P,L_k} = e(L_{k+1}) − e(L_{k+2})` with `e(L)` the pair element of
    /// [`slot_pair`].
    pub fn x(&self, ip: &IncidentPair) -> So7Elt<S> {
        let i = ip.p.label() as i64;
        let k = ip.slot();
        let (a, b) = slot_pair(i, (k + 1) % 3);
        let (c, d) = slot_pair(i, (k + 2) % 3);
        So7Elt::basis(a, b).sub(&So7Elt::basis(c, d))
    }

    /// `Y_{P,L_k} = X_{P,L_{k+1}} − X_{P,L_{k+2}}`.
    pub fn y(&self, ip: &IncidentPair) -> So7Elt<S> {
        let lines = ip.p.lines();
        let k = ip.slot();
        let at = |s: usize| IncidentPair {
            p: ip.p,
            d: lines[s % 3],
        };
        self.x(&at(k + 1)).sub(&self.x(&at(k + 2)))
    }

    /// `Σ c_{ij} ¼[ρ_i, ρ_j]`.
    pub fn spinor(&self, x: &So7Elt<S>) -> Matrix<S> {
        let mut m = Matrix::zero(8);
        for (v, s) in x.c.iter().zip(&self.pair_spinors) {
            if !v.is_zero() {
                m = &m + &s.scale(v);
            }
        }
        m
    }

    /// `ρ̂(x)(1) = 0`.
    pub fn is_g2(&self, x: &So7Elt<S>) -> bool {
        let one = Octonion::<S>::one();
        self.spinor(x).apply(one.coeffs()).iter().all(Scalar::is_zero)
    }

    /// Dimension of `{x ∈ so(7) : ρ̂(x)(1) = 0}`.
    pub fn annihilator_dim(&self) -> usize {
        let rows: Vec<Vec<S>> = (0..8)
            .map(|r| self.pair_spinors.iter().map(|s| s.get(r, 0).clone()).collect())
            .collect();
        kernel(21, &rows).len()
    }

    /// The span of all 21 generators.
    pub fn span(&self) -> Subspace<S> {
        let xs: Vec<Vec<S>> = IncidentPair::all()
            .iter()
            .map(|ip| self.x(ip).c)
            .collect();
        Subspace::span(21, &xs)
    }

    pub fn span_dimension(&self) -> usize {
        self.span().dim()
    }

    /// A basis of `g₂`: `X_{P,D_i}` and `X_{P,D_{i−1}}` for each point.
    pub fn basis(&self) -> Vec<So7Elt<S>> {
        IncidentPair::all()
            .into_iter()
            .filter(|ip| ip.slot() < 2)
            .map(|ip| self.x(&ip))
            .collect()
    }

    /// `X_{P,D} e_Q`: zero for `Q ∈ D`, otherwise
    /// `ε_{PQ} ε*_{P∧Q, D} e_{P+Q}`.
    pub fn action_on_basis(&self, ip: &IncidentPair, q: Point) -> Option<SignedBasis> {
        if ip.d.contains(q) {
            return None;
        }
        let line = wedge(ip.p, q).expect("q ∉ D so q ≠ P");
        let sign = self.eps().at(ip.p, q) * self.dual.at(line, ip.d);
        let target = ip.p.add(q).expect("distinct points");
        Some(SignedBasis {
            sign,
            index: target.label() as usize,
        })
    }

    /// Compares [`Self::action_on_basis`] with the spinor matrix on all
    /// 21 × 7 cases.
    pub fn check_action_on_basis(&self) -> Result<(), G2Error> {
        for ip in IncidentPair::all() {
            let m = self.spinor(&self.x(&ip));
            for q in Point::ALL {
                let col = m.apply(Octonion::<S>::e(q).coeffs());
                let mut expected = vec![S::zero(); 8];
                if let Some(sb) = self.action_on_basis(&ip, q) {
                    expected[sb.index] = S::from_i64(sb.sign as i64);
                }
                if col != expected {
                    return Err(G2Error::ActionMismatch(ip, q));
                }
            }
        }
        Ok(())
    }

    /// The predicted `[X₁, X₂]`.
    pub fn bracket_law(&self, a: &IncidentPair, b: &IncidentPair) -> So7Elt<S> {
        match classify_pair(a, b) {
            Orbit::D | Orbit::O1 => So7Elt::zero(),
            orbit => {
                let e = self.eps().at(a.p, b.p) as i64;
                let p = a.p.add(b.p).expect("distinct points");
                let (coef, d) = match orbit {
                    Orbit::O2 => (2 * e, a.d),
                    Orbit::O3 | Orbit::O3Prime => (-e, wedge(a.p, b.p).expect("distinct")),
                    _ => (-e, a.d.third_through_meet(b.d).expect("distinct lines")),
                };
                let target = IncidentPair::new(p, d).expect("P + P′ lies on the target line");
                self.x(&target).scale(&S::from_i64(coef))
            }
        }
    }

    /// The bracket law as a signed generator: `(coefficient, target)`.
    pub fn bracket_entry(&self, a: &IncidentPair, b: &IncidentPair) -> BracketEntry {
        let orbit = classify_pair(a, b);
        let value = bracket(&self.x(a), &self.x(b));
        let (coefficient, target) = match orbit {
            Orbit::D | Orbit::O1 => (0, None),
            _ => {
                let p = a.p.add(b.p).expect("distinct");
                let hit = p.lines().into_iter().find_map(|d| {
                    let t = IncidentPair { p, d };
                    let x = self.x(&t);
                    [-2i64, -1, 1, 2]
                        .into_iter()
                        .find(|&c| x.scale(&S::from_i64(c)) == value)
                        .map(|c| (c, t))
                });
                match hit {
                    Some((c, t)) => (c, Some(t)),
                    None => (0, None),
                }
            }
        };
        BracketEntry {
            left: *a,
            right: *b,
            orbit,
            coefficient,
            target,
        }
    }

    /// `h_P`, spanned by the three `X_{P,·}`.
    pub fn cartan(&self, p: Point) -> Subspace<S> {
        let xs: Vec<Vec<S>> = p
            .lines()
            .iter()
            .map(|&d| self.x(&IncidentPair { p, d }).c)
            .collect();
        Subspace::span(21, &xs)
    }

    /// `{y ∈ g₂ : [y, h] = 0 for h ∈ H}`.
    pub fn centralizer(&self, h: &Subspace<S>) -> Subspace<S> {
        let basis = self.basis();
        let mut rows = Vec::new();
        for hv in h.basis() {
            let he = to_elt(hv);
            let cols: Vec<So7Elt<S>> = basis.iter().map(|b| bracket(b, &he)).collect();
            for r in 0..21 {
                rows.push(cols.iter().map(|c| c.c[r].clone()).collect::<Vec<S>>());
            }
        }
        let sols = kernel(basis.len(), &rows);
        let vecs: Vec<Vec<S>> = sols
            .iter()
            .map(|c| {
                basis
                    .iter()
                    .zip(c)
                    .fold(So7Elt::zero(), |acc, (b, k)| acc.add(&b.scale(k)))
                    .c
            })
            .collect();
        Subspace::span(21, &vecs)
    }

    /// Span of all brackets between two subspaces.
    pub fn bracket_space(&self, a: &Subspace<S>, b: &Subspace<S>) -> Subspace<S> {
        let mut out = Subspace::zero(21);
        for x in a.basis() {
            for y in b.basis() {
                out.insert(bracket(&to_elt(x), &to_elt(y)).coeffs());
            }
        }
        out
    }

    pub fn cartan_report(&self, p: Point) -> CartanReport {
        let h = self.cartan(p);
        let abelian = self.bracket_space(&h, &h).dim() == 0;
        CartanReport {
            point: p,
            dim: h.dim(),
            abelian,
            self_centralizing: self.centralizer(&h) == h,
        }
    }

    pub fn decomposition_check(&self) -> DecompositionReport {
        let hs: Vec<Subspace<S>> = Point::ALL.iter().map(|&p| self.cartan(p)).collect();
        let total = hs.iter().fold(Subspace::zero(21), |acc, h| acc.sum(h));
        let dim_sum: usize = hs.iter().map(Subspace::dim).sum();
        let mut brackets = true;
        let mut orthogonal = true;
        for p in Point::ALL {
            for q in Point::ALL {
                if p == q {
                    continue;
                }
                let r = p.add(q).expect("distinct");
                brackets &= self.bracket_space(&hs[p.index()], &hs[q.index()]) == hs[r.index()];
                orthogonal &= hs[p.index()].basis().iter().all(|x| {
                    hs[q.index()]
                        .basis()
                        .iter()
                        .all(|y| to_elt(x).inner(&to_elt(y)).is_zero())
                });
            }
        }
        DecompositionReport {
            dim_sum,
            direct: total.dim() == dim_sum && total == self.span(),
            brackets_match: brackets,
            orthogonal,
        }
    }

    /// The `ε`-cyclic order `(P, Q, R)` of a line: `ε_PQ = ε_QR = ε_RP = 1`.
    pub fn cyclic_order(&self, d: Line) -> [Point; 3] {
        let [p, q, r] = d.points();
        if self.eps().at(p, q) == 1 {
            [p, q, r]
        } else {
            [p, r, q]
        }
    }

    pub fn line_subalgebra(&self, d: Line) -> LineReport {
        let pts = d.points();
        let g_d = pts
            .iter()
            .fold(Subspace::zero(21), |acc, &p| acc.sum(&self.cartan(p)));
        let closed = g_d.contains_subspace(&self.bracket_space(&g_d, &g_d));
        let xs: Vec<So7Elt<S>> = pts.iter().map(|&p| self.x(&IncidentPair { p, d })).collect();
        let ys: Vec<So7Elt<S>> = pts.iter().map(|&p| self.y(&IncidentPair { p, d })).collect();
        let ix = Subspace::span(21, xs.iter().map(|x| &x.c));
        let iy = Subspace::span(21, ys.iter().map(|x| &x.c));
        let [p, q, r] = self.cyclic_order(d);
        let xp = |p: Point| self.x(&IncidentPair { p, d });
        let yp = |p: Point| self.y(&IncidentPair { p, d });
        let two = S::from_i64(2);
        let x_relations = [(p, q, r), (q, r, p), (r, p, q)]
            .iter()
            .all(|&(a, b, c)| bracket(&xp(a), &xp(b)) == xp(c).scale(&two));
        let y_relations = [(p, q, r), (q, r, p), (r, p, q)]
            .iter()
            .all(|&(a, b, c)| bracket(&yp(a), &yp(b)) == yp(c).scale(&-two.clone()));
        let x_y_commute = xs.iter().all(|x| ys.iter().all(|y| bracket(x, y).is_zero()));
        let on_d: Vec<usize> = pts.iter().map(|p| p.label() as usize).collect();
        let off_d: Vec<usize> = Point::ALL
            .iter()
            .filter(|p| !d.contains(**p))
            .map(|p| p.label() as usize)
            .collect();
        let stable = |idx: &[usize]| {
            g_d.basis().iter().all(|v| {
                let m = self.spinor(&to_elt(v));
                idx.iter().all(|&c| (0..8).all(|r| idx.contains(&r) || m.get(r, c).is_zero()))
            })
        };
        let x_trivial_on_d = xs.iter().all(|x| {
            let m = self.spinor(x);
            on_d.iter().all(|&c| (0..8).all(|r| m.get(r, c).is_zero()))
        });
        LineReport {
            line: d,
            dim: g_d.dim(),
            closed,
            x_ideal_dim: ix.dim(),
            y_ideal_dim: iy.dim(),
            ideals_span: ix.sum(&iy) == g_d,
            x_relations,
            y_relations,
            x_y_commute,
            stable_on_line: stable(&on_d),
            stable_off_line: stable(&off_d),
            x_trivial_on_line: x_trivial_on_d,
        }
    }

    /// `W = {±X_{P,·}, ±Y_{P,·}}` and its `G₂` pattern.
    pub fn root_system(&self, p: Point) -> RootSystemReport {
        let pairs: Vec<IncidentPair> = p.lines().iter().map(|&d| IncidentPair { p, d }).collect();
        let mut roots: Vec<So7Elt<S>> = Vec::new();
        for ip in &pairs {
            for v in [self.x(ip), self.y(ip)] {
                roots.push(v.neg());
                roots.push(v);
            }
        }
        let distinct = roots
            .iter()
            .enumerate()
            .all(|(i, a)| roots[i + 1..].iter().all(|b| a != b));
        let lengths: Vec<S> = roots.iter().map(|r| r.inner(r)).collect();
        let short = lengths.iter().filter(|l| **l == S::from_i64(2)).count();
        let long = lengths.iter().filter(|l| **l == S::from_i64(6)).count();
        let alpha = self.x(&pairs[0]);
        let beta = self.y(&pairs[1]);
        let c = |k: i64| S::from_i64(k);
        let combos = [
            alpha.clone(),
            beta.clone(),
            alpha.add(&beta),
            beta.add(&alpha.scale(&c(2))),
            beta.add(&alpha.scale(&c(3))),
            beta.scale(&c(2)).add(&alpha.scale(&c(3))),
        ];
        let mut pattern: Vec<So7Elt<S>> = Vec::new();
        for v in combos {
            pattern.push(v.neg());
            pattern.push(v);
        }
        let pattern_matches = pattern.len() == roots.len()
            && pattern.iter().all(|v| roots.contains(v))
            && roots.iter().all(|v| pattern.contains(v));
        let in_cartan = {
            let h = self.cartan(p);
            roots.iter().all(|r| h.contains(r.coeffs()))
        };
        RootSystemReport {
            point: p,
            count: if distinct { roots.len() } else { 0 },
            short,
            long,
            in_cartan,
            pattern_matches,
        }
    }

    /// The eight generators of `s_P`: `X_{Q,D}` for `Q ≠ P` on a line `D`
    /// through `P`, together with `X_{P,D_i}` and `X_{P,D_{i−1}}`.
    pub fn point_generators(&self, p: Point) -> Vec<So7Elt<S>> {
        let lines = p.lines();
        let mut out: Vec<So7Elt<S>> = lines
            .iter()
            .flat_map(|&d| d.points().into_iter().filter(move |&q| q != p).map(move |q| (q, d)))
            .map(|(q, d)| self.x(&IncidentPair { p: q, d }))
            .collect();
        out.push(self.x(&IncidentPair { p, d: lines[0] }));
        out.push(self.x(&IncidentPair { p, d: lines[1] }));
        out
    }

    pub fn point_subalgebra(&self, p: Point) -> PointReport {
        let gens = self.point_generators(p);
        let s_p = Subspace::span(21, gens.iter().map(|g| &g.c));
        let closed = s_p.contains_subspace(&self.bracket_space(&s_p, &s_p));
        let ep = Octonion::<S>::e(p);
        let annihilates = gens
            .iter()
            .all(|g| self.spinor(g).apply(ep.coeffs()).iter().all(Scalar::is_zero));
        PointReport {
            point: p,
            generators: gens.len(),
            dim: s_p.dim(),
            closed,
            annihilates_e_p: annihilates,
            chevalley: self.chevalley_relations(p),
        }
    }

    /// The `sl(3)` relations for `h₁, h₂, e^±` built with `√−1`; `None` when
    /// the field has no square root of −1.
    pub fn chevalley_relations(&self, p: Point) -> Option<bool> {
        let i_unit = S::sqrt_minus_one()?;
        let i = p.label() as i64;
        let lines = p.lines();
        let xx = |q: i64, d: Line| self.x(&IncidentPair::new(Point::cyclic(q), d).expect("incident"));
        let h1 = xx(i, lines[0]).scale(&-i_unit.clone());
        let h2 = xx(i, lines[1]).scale(&-i_unit.clone());
        // e^± on D_i from (P_{i+1}, P_{i+3}); on D_{i−1} from (P_{i+2}, P_{i−1}).
        let e = |a: i64, b: i64, d: Line, sign: i64| {
            xx(a, d).sub(&xx(b, d).scale(&(i_unit.clone() * S::from_i64(sign))))
        };
        let e1p = e(i + 1, i + 3, lines[0], 1);
        let e1m = e(i + 1, i + 3, lines[0], -1);
        let e2p = e(i + 2, i - 1, lines[1], 1);
        let e2m = e(i + 2, i - 1, lines[1], -1);
        let minus_half = S::from_ratio(-1, 2);
        let e3p = bracket(&e1p, &e2p).scale(&minus_half);
        let e3m = bracket(&e1m, &e2m).scale(&minus_half);
        let s = |k: i64| S::from_i64(k);
        let checks = [
            bracket(&h1, &h2).is_zero(),
            bracket(&h1, &e1p) == e1p.scale(&s(2)),
            bracket(&h1, &e1m) == e1m.scale(&s(-2)),
            bracket(&h1, &e2p) == e2p.scale(&s(-1)),
            bracket(&h1, &e2m) == e2m.scale(&s(1)),
            bracket(&h2, &e1p) == e1p.scale(&s(-1)),
            bracket(&h2, &e1m) == e1m.scale(&s(1)),
            bracket(&h2, &e2p) == e2p.scale(&s(2)),
            bracket(&h2, &e2m) == e2m.scale(&s(-2)),
            bracket(&e1p, &e1m) == h1.scale(&s(-4)),
            bracket(&e2p, &e2m) == h2.scale(&s(-4)),
            bracket(&e1p, &e2m).is_zero(),
            bracket(&e1m, &e2p).is_zero(),
            bracket(&h1, &e3p) == e3p,
            bracket(&h1, &e3m) == e3m.neg(),
            bracket(&h2, &e3p) == e3p,
            bracket(&h2, &e3m) == e3m.neg(),
            bracket(&e3p, &e3m) == h1.add(&h2).scale(&s(-4)),
            !e3p.is_zero() && !e3m.is_zero(),
        ];
        let basis = [&h1, &h2, &e1p, &e1m, &e2p, &e2m, &e3p, &e3m];
        let spans = Subspace::span(21, basis.iter().map(|x| &x.c)).dim() == 8;
        Some(checks.iter().all(|&b| b) && spans)
    }

    /// `J(e_Q) = ε_{QP} e_{P+Q}` on `V = ⟨e_Q : Q ≠ P⟩`, zero on `1, e_P`.
    pub fn almost_complex_matrix(&self, p: Point) -> Matrix<S> {
        let mut j = Matrix::zero(8);
        for q in Point::ALL {
            if q != p {
                let r = p.add(q).expect("distinct");
                j.set(
                    r.label() as usize,
                    q.label() as usize,
                    S::from_i64(self.eps().at(q, p) as i64),
                );
            }
        }
        j
    }

    pub fn almost_complex(&self, p: Point) -> AlmostComplexReport {
        let j = self.almost_complex_matrix(p);
        let mut proj = Matrix::identity(8);
        proj.set(0, 0, S::zero());
        proj.set(p.label() as usize, p.label() as usize, S::zero());
        let j2 = &j * &j;
        let squares_to_minus_one = j2 == -&proj;
        let isometry = &j.transpose() * &j == proj;
        let gens = self.point_generators(p);
        let commutes = gens.iter().all(|g| self.spinor(g).commutator(&j).is_zero());
        // The annihilator of e_P inside g₂.
        let basis = self.basis();
        let ep = Octonion::<S>::e(p);
        let images: Vec<Vec<S>> = basis
            .iter()
            .map(|b| self.spinor(b).apply(ep.coeffs()))
            .collect();
        let rows: Vec<Vec<S>> = (0..8)
            .map(|r| images.iter().map(|v| v[r].clone()).collect())
            .collect();
        let sols = kernel(basis.len(), &rows);
        let ann: Vec<Vec<S>> = sols
            .iter()
            .map(|c| {
                basis
                    .iter()
                    .zip(c)
                    .fold(So7Elt::zero(), |acc, (b, k)| acc.add(&b.scale(k)))
                    .c
            })
            .collect();
        let ann = Subspace::span(21, &ann);
        let s_p = Subspace::span(21, gens.iter().map(|g| &g.c));
        AlmostComplexReport {
            point: p,
            squares_to_minus_one,
            isometry,
            commutes_with_s_p: commutes,
            annihilator_dim: ann.dim(),
            s_p_is_annihilator: ann == s_p,
        }
    }

    pub fn pair_generated_subalgebra(&self, a: &IncidentPair, b: &IncidentPair) -> Subspace<S> {
        lie_closure(&[self.x(a), self.x(b)])
    }

    /// The matrix of `ĝ` on `O_F`.
    pub fn aug_matrix(g: &AugAut) -> Matrix<S> {
        let mut m = Matrix::zero(8);
        for a in 0..8 {
            let img = g.apply(SignedBasis { sign: 1, index: a });
            m.set(img.index, a, S::from_i64(img.sign as i64));
        }
        m
    }

    /// `M x M⁻¹` for the signed permutation matrix `M` of `ĝ`.
    pub fn conjugate(g: &AugAut, x: &Matrix<S>) -> Matrix<S> {
        let img: Vec<SignedBasis> = (0..8)
            .map(|a| g.apply(SignedBasis { sign: 1, index: a }))
            .collect();
        let mut out = Matrix::zero(8);
        for a in 0..8 {
            for b in 0..8 {
                let v = x.get(a, b);
                if !v.is_zero() {
                    let s = S::from_i64((img[a].sign * img[b].sign) as i64);
                    out.set(img[a].index, img[b].index, v.clone() * s);
                }
            }
        }
        out
    }

    /// `δ(ĝ, P)` from `ĝ X_{P,D} ĝ⁻¹ = δ(ĝ,P) X_{gP,gD}`, checked for each
    /// line through `P`.
    pub fn delta_hat(&self, g: &AugAut, p: Point) -> Result<i8, G2Error> {
        let mut value = None;
        for d in p.lines() {
            let ip = IncidentPair { p, d };
            let image = ip.act(g.base());
            let conj = Self::conjugate(g, self.x_spinor(&ip));
            let target = self.x_spinor(&image);
            let sign = if conj == *target {
                1
            } else if conj == -target {
                -1
            } else {
                return Err(G2Error::NotProportional(ip, *g, image));
            };
            match value {
                None => value = Some(sign),
                Some(v) if v != sign => return Err(G2Error::LineDependent(*g, p)),
                _ => {}
            }
        }
        Ok(value.expect("three lines through P"))
    }

    pub fn delta_hat_fn(&self, g: &AugAut) -> Result<crate::radon::SignPointFn, G2Error> {
        let mut bits = 0u8;
        for p in Point::ALL {
            if self.delta_hat(g, p)? == -1 {
                bits |= 1 << p.index();
            }
        }
        Ok(crate::radon::SignPointFn::from_bits(bits))
    }
}

impl<S: Scalar> Default for G2<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// Summary of `δ` over the whole covering group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaHatReport {
    pub elements: usize,
    pub distinct_functions: usize,
    pub multiplicities: Vec<usize>,
    pub products_one: bool,
    pub radon_matches_delta_star: bool,
    pub equivariant: bool,
}

/// Computes `δ(ĝ, ·)` for every element and checks its properties.
pub fn delta_hat_census(
    g2: &G2<crate::scalar::Rational>,
    group: &AugGroup,
) -> Result<DeltaHatReport, G2Error> {
    let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
    let mut products_one = true;
    let mut radon = true;
    for g in group.elements() {
        let f = g2.delta_hat_fn(g)?;
        *counts.entry(f.bits()).or_default() += 1;
        products_one &= Point::ALL.iter().map(|&p| f.at(p)).product::<i8>() == 1;
        radon &= crate::radon::multiplicative_radon(f)
            .map(|h| h == crate::lifting::delta_star_fn(g.base(), group.eps()))
            .unwrap_or(false);
    }
    let mut multiplicities: Vec<usize> = counts.values().copied().collect();
    multiplicities.sort();
    multiplicities.dedup();
    Ok(DeltaHatReport {
        elements: group.len(),
        distinct_functions: counts.len(),
        multiplicities,
        products_one,
        radon_matches_delta_star: radon,
        // delta_hat errors out unless every conjugate is ±X_{gP,gD}.
        equivariant: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketEntry {
    pub left: IncidentPair,
    pub right: IncidentPair,
    pub orbit: Orbit,
    /// Coefficient of `X(target)`; zero when the bracket vanishes.
    pub coefficient: i64,
    pub target: Option<IncidentPair>,
}

impl fmt::Display for BracketEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = match (self.coefficient, self.target) {
            (_, None) | (0, _) => "0".to_string(),
            (1, Some(t)) => format!("X{t}"),
            (-1, Some(t)) => format!("−X{t}"),
            (c, Some(t)) if c < 0 => format!("−{}X{t}", -c),
            (c, Some(t)) => format!("{c}X{t}"),
        };
        write!(
            f,
            "[X{}, X{}] = {value}, orbit {}",
            self.left, self.right, self.orbit
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanReport {
    pub point: Point,
    pub dim: usize,
    pub abelian: bool,
    pub self_centralizing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub dim_sum: usize,
    pub direct: bool,
    pub brackets_match: bool,
    pub orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineReport {
    pub line: Line,
    pub dim: usize,
    pub closed: bool,
    pub x_ideal_dim: usize,
    pub y_ideal_dim: usize,
    pub ideals_span: bool,
    pub x_relations: bool,
    pub y_relations: bool,
    pub x_y_commute: bool,
    pub stable_on_line: bool,
    pub stable_off_line: bool,
    pub x_trivial_on_line: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSystemReport {
    pub point: Point,
    pub count: usize,
    pub short: usize,
    pub long: usize,
    pub in_cartan: bool,
    pub pattern_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub point: Point,
    pub generators: usize,
    pub dim: usize,
    pub closed: bool,
    pub annihilates_e_p: bool,
    pub chevalley: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostComplexReport {
    pub point: Point,
    pub squares_to_minus_one: bool,
    pub isometry: bool,
    pub commutes_with_s_p: bool,
    pub annihilator_dim: usize,
    pub s_p_is_annihilator: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Fp, Gaussian, GaussianRational, Rational};

    type Q = Rational;

    fn ip(p: i64, d: i64) -> IncidentPair {
        IncidentPair::new(Point::new(p).unwrap(), Line::new(d).unwrap()).unwrap()
    }

    fn g() -> G2<Q> {
        G2::new()
    }

    #[test]
    fn pair_indexing() {
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            assert_eq!(pair_index(i, j), k);
        }
        assert_eq!(So7Elt::<Q>::basis(3, 1), So7Elt::basis(1, 3).neg());
        assert!(So7Elt::<Q>::basis(2, 2).is_zero());
    }

    #[test]
    fn x_definition() {
        let g = g();
        let x = g.x(&ip(1, 1));
        assert_eq!(x, So7Elt::basis(3, 7).sub(&So7Elt::basis(5, 6)));
        for p in Point::ALL {
            let sum = p
                .lines()
                .iter()
                .fold(So7Elt::<Q>::zero(), |acc, &d| acc.add(&g.x(&IncidentPair { p, d })));
            assert!(sum.is_zero());
        }
        for i in IncidentPair::all() {
            assert!(g.is_g2(&g.x(&i)));
        }
        assert!(IncidentPair::new(Point::new(3).unwrap(), Line::new(1).unwrap()).is_err());
        assert_eq!("(P1,D7)".parse::<IncidentPair>().unwrap(), ip(1, 7));
        assert_eq!(ip(1, 7).to_string(), "(P1,D7)");
    }

    #[test]
    fn dimensions() {
        let g = g();
        assert_eq!(IncidentPair::all().len(), 21);
        assert_eq!(g.span_dimension(), 14);
        assert_eq!(g.annihilator_dim(), 14);
        assert_eq!(g.basis().len(), 14);
        assert_eq!(Subspace::span(21, g.basis().iter().map(|x| &x.c)).dim(), 14);
    }

    #[test]
    fn spinor_matrices() {
        let g = g();
        let half = Q::half();
        for (k, s) in g.pair_spinors.iter().enumerate() {
            assert!(s
                .entries()
                .iter()
                .all(|v| v.is_zero() || *v == half || *v == -half.clone()), "{k}");
        }
        // Structure constants agree with spinor and vector commutators.
        for a in 0..21 {
            for b in 0..21 {
                let (i, j) = PAIRS[a];
                let (k, l) = PAIRS[b];
                let x = So7Elt::<Q>::basis(i, j);
                let y = So7Elt::<Q>::basis(k, l);
                let z = bracket(&x, &y);
                assert_eq!(g.spinor(&z), g.spinor(&x).commutator(&g.spinor(&y)));
                assert_eq!(z.vector_matrix(), x.vector_matrix().commutator(&y.vector_matrix()));
            }
        }
        // On g₂ the spinor and vector actions coincide.
        for x in g.basis() {
            assert_eq!(g.spinor(&x), x.vector_matrix());
        }
    }

    #[test]
    fn jacobi_on_basis() {
        let basis = g().basis();
        for a in &basis {
            for b in &basis {
                for c in &basis {
                    let s = bracket(a, &bracket(b, c))
                        .add(&bracket(b, &bracket(c, a)))
                        .add(&bracket(c, &bracket(a, b)));
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn action_on_basis() {
        let g = g();
        g.check_action_on_basis().unwrap();
        assert_eq!(g.action_on_basis(&ip(1, 1), Point::new(2).unwrap()), None);
        // The inverse dual orientation gives the global negative.
        let literal = DualFactor::inverse_orientation();
        for a in Line::ALL {
            for b in Line::ALL {
                if a != b {
                    assert_eq!(literal.at(a, b), -g.dual().at(a, b));
                    let expected = crate::fano::legendre7(b.index() as i64 - a.index() as i64);
                    assert_eq!(Ok(g.dual().at(a, b)), expected);
                }
            }
        }
    }

    #[test]
    fn orbits() {
        let c = orbit_census();
        let sizes: Vec<usize> = c.sizes.values().copied().collect();
        assert_eq!(sizes, vec![21, 42, 42, 84, 84, 168]);
        assert!(c.single_orbits);
        assert_eq!(classify_pair(&ip(1, 1), &ip(1, 1)), Orbit::D);
        assert_eq!(classify_pair(&ip(1, 1), &ip(3, 7)), Orbit::O3);
    }

    #[test]
    fn bracket_law_all_pairs() {
        let g = g();
        let pairs = IncidentPair::all();
        for a in &pairs {
            for b in &pairs {
                let (xa, xb) = (g.x(a), g.x(b));
                let z = bracket(&xa, &xb);
                assert_eq!(z, g.bracket_law(a, b), "{a} {b}");
                assert_eq!(g.spinor(&z), g.spinor(&xa).commutator(&g.spinor(&xb)));
            }
        }
        assert_eq!(bracket(&g.x(&ip(1, 1)), &g.x(&ip(3, 7))), g.x(&ip(7, 7)).neg());
        assert_eq!(bracket(&g.x(&ip(4, 1)), &g.x(&ip(5, 2))), g.x(&ip(7, 6)).neg());
        assert_eq!(
            bracket(&g.x(&ip(1, 1)), &g.x(&ip(2, 1))),
            g.x(&ip(4, 1)).scale(&Q::from_i64(2))
        );
        assert_eq!(
            g.bracket_entry(&ip(1, 1), &ip(3, 7)).to_string(),
            "[X(P1,D1), X(P3,D7)] = −X(P7,D7), orbit O3"
        );
    }

    #[test]
    fn cartan_and_decomposition() {
        let g = g();
        for p in Point::ALL {
            let r = g.cartan_report(p);
            assert_eq!((r.dim, r.abelian, r.self_centralizing), (2, true, true));
        }
        let d = g.decomposition_check();
        assert_eq!(
            d,
            DecompositionReport {
                dim_sum: 14,
                direct: true,
                brackets_match: true,
                orthogonal: true
            }
        );
    }

    #[test]
    fn line_subalgebras() {
        let g = g();
        for d in Line::ALL {
            let r = g.line_subalgebra(d);
            assert_eq!((r.dim, r.x_ideal_dim, r.y_ideal_dim), (6, 3, 3));
            assert!(r.closed && r.ideals_span && r.x_relations && r.y_relations);
            assert!(r.x_y_commute && r.stable_on_line && r.stable_off_line && r.x_trivial_on_line);
        }
    }

    #[test]
    fn root_systems() {
        let g = g();
        for p in Point::ALL {
            let r = g.root_system(p);
            assert_eq!((r.count, r.short, r.long), (12, 6, 6));
            assert!(r.in_cartan && r.pattern_matches);
        }
    }

    #[test]
    fn point_subalgebras() {
        let g = g();
        for p in Point::ALL {
            let r = g.point_subalgebra(p);
            assert_eq!((r.generators, r.dim), (8, 8));
            assert!(r.closed && r.annihilates_e_p);
            assert_eq!(r.chevalley, None);
        }
        let gi = G2::<GaussianRational>::new();
        for p in Point::ALL {
            assert_eq!(gi.point_subalgebra(p).chevalley, Some(true), "{p}");
        }
        // The displayed e±_{D5} for P1.
        let i = GaussianRational::i();
        let x = |p, d| gi.x(&ip(p, d));
        let e1p = x(2, 1).sub(&x(4, 1).scale(&i));
        let e2p = x(3, 7).sub(&x(7, 7).scale(&i));
        let e5p = x(5, 5).add(&x(6, 5).scale(&i));
        assert_eq!(bracket(&e1p, &e2p), e5p.scale(&GaussianRational::from_i64(-2)));
        assert_eq!(G2::<Fp<5>>::new().chevalley_relations(Point::ALL[0]), Some(true));
        assert_eq!(G2::<Fp<3>>::new().chevalley_relations(Point::ALL[0]), None);
        assert_eq!(
            G2::<Gaussian<Fp<3>>>::new().chevalley_relations(Point::ALL[0]),
            Some(true)
        );
    }

    #[test]
    fn almost_complex_structures() {
        let g = g();
        for p in Point::ALL {
            let r = g.almost_complex(p);
            assert!(r.squares_to_minus_one && r.isometry && r.commutes_with_s_p);
            assert_eq!(r.annihilator_dim, 8);
            assert!(r.s_p_is_annihilator);
        }
    }

    #[test]
    fn pair_generated() {
        let g = g();
        let pairs = IncidentPair::all();
        for a in &pairs {
            for b in &pairs {
                let dim = g.pair_generated_subalgebra(a, b).dim();
                match classify_pair(a, b) {
                    // The bracket law closes {X₁, X₂, [X₁, X₂]} for O4.
                    Orbit::O4 => assert_eq!(dim, 3),
                    Orbit::O2 => assert_eq!(dim, 3),
                    Orbit::O3 | Orbit::O3Prime => assert_eq!(dim, 4),
                    _ => {}
                }
            }
        }
        let s = g.pair_generated_subalgebra(&ip(1, 1), &ip(7, 7));
        assert_eq!(s.dim(), 4);
        let y = g.y(&ip(1, 7));
        assert!(s.contains(y.coeffs()));
        assert!(s.basis().iter().all(|v| bracket(&y, &to_elt(v)).is_zero()));
        let derived = g.bracket_space(&s, &s);
        let expected = Subspace::span(
            21,
            [g.x(&ip(7, 7)), g.x(&ip(3, 7)), g.x(&ip(1, 7))].iter().map(|x| &x.c),
        );
        assert_eq!(derived, expected);
        assert_eq!(derived.dim(), 3);
    }

    #[test]
    fn delta_hat_values() {
        let g = g();
        let alg = g.algebra().clone();
        let ahat: AugAut = "1 2 7 4 -6 5 -3".parse().unwrap();
        let f = g.delta_hat_fn(&ahat).unwrap();
        let plus: Vec<u8> = f.plus_points().iter().map(|p| p.label()).collect();
        assert_eq!(plus, vec![1, 6, 7]);
        for d in Line::ALL {
            let t = crate::lifting::t_map(d);
            for p in Point::ALL {
                assert_eq!(g.delta_hat(&t, p).unwrap() == 1, d.contains(p));
            }
        }
        assert!(Point::ALL
            .iter()
            .all(|&p| g.delta_hat(&AugAut::identity(), p).unwrap() == 1));
        let dir = tempfile::tempdir().unwrap();
        let group = AugGroup::load_or_build(dir.path(), &alg).unwrap();
        let r = delta_hat_census(&g, &group).unwrap();
        assert_eq!(r.distinct_functions, 64);
        assert_eq!(r.multiplicities, vec![21]);
        assert!(r.products_one && r.radon_matches_delta_star && r.equivariant);
    }
}
