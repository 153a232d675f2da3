//! The Fano plane `F`, its cube `V_F = F ∪ {0} ≅ Z₂³`, its dual and its
//! collineation group.
//!
//! Points carry fixed labels `P1..P7` with masks
//! `001, 010, 100, 011, 110, 111, 101`, produced by the recurrence
//! `P_{i+3} = P_i + P_{i+1}`. Lines are `D_i = {P_i, P_{i+1}, P_{i+3}}`,
//! indices read modulo 7 in `1..=7`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanoError {
    #[error("point label {0} is outside 1..=7")]
    BadPointLabel(i64),
    #[error("line index {0} is outside 1..=7")]
    BadLineIndex(i64),
    #[error("points must be distinct")]
    EqualPoints,
    #[error("{0} is not on {1}")]
    NotIncident(Point, Line),
    #[error("not a bijection of the seven points")]
    NotBijective,
    #[error("permutation is not additive on V_F")]
    NotAdditive,
    #[error("collineation {0} has order {1}, expected {2}")]
    WrongOrder(Collineation, u32, u32),
    #[error("{0} is divisible by 7")]
    MultipleOfSeven(i64),
    #[error("expected {expected} stable triangles, found {found}")]
    StableTriangles { expected: usize, found: usize },
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// Mask of `P_i` at index `i - 1`.
const MASKS: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b110, 0b111, 0b101];

/// Label of a nonzero mask at index `mask`; entry 0 is unused.
const LABEL_OF_MASK: [u8; 8] = [0, 1, 2, 4, 3, 7, 5, 6];

/// Reduces `i` into `1..=7`.
pub fn mod7(i: i64) -> u8 {
    ((i - 1).rem_euclid(7) + 1) as u8
}

// ---------------------------------------------------------------------------
// Points

/// A point `P_i` of the Fano plane.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(u8);

impl Point {
    pub const ALL: [Point; 7] = [
        Point(1),
        Point(2),
        Point(3),
        Point(4),
        Point(5),
        Point(6),
        Point(7),
    ];

    pub fn new(label: i64) -> Result<Self, FanoError> {
        if (1..=7).contains(&label) {
            Ok(Point(label as u8))
        } else {
            Err(FanoError::BadPointLabel(label))
        }
    }

    /// `P_i` with `i` reduced modulo 7.
    pub fn cyclic(i: i64) -> Self {
        Point(mod7(i))
    }

    pub fn from_mask(mask: u8) -> Option<Self> {
        match mask {
            1..=7 => Some(Point(LABEL_OF_MASK[mask as usize])),
            _ => None,
        }
    }

    pub fn label(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn mask(self) -> u8 {
        MASKS[self.index()]
    }

    /// `P + Q` in `V_F`; `None` stands for the zero vector (`P = Q`).
    pub fn add(self, other: Point) -> Option<Point> {
        Point::from_mask(self.mask() ^ other.mask())
    }

    /// The three lines through this point, in the order
    /// `D_i, D_{i-1}, D_{i-3}`.
    pub fn lines(self) -> [Line; 3] {
        let i = self.0 as i64;
        [Line(mod7(i)), Line(mod7(i - 1)), Line(mod7(i - 3))]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl FromStr for Point {
    type Err = FanoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n = s
            .strip_prefix('P')
            .unwrap_or(s)
            .parse::<i64>()
            .map_err(|_| FanoError::Parse(s.to_string()))?;
        Point::new(n)
    }
}

/// `P + Q` as a raw mask of `V_F` (0 when `P = Q`).
pub fn add(p: Point, q: Point) -> u8 {
    p.mask() ^ q.mask()
}

// ---------------------------------------------------------------------------
// Lines

/// A line `D_i = {P_i, P_{i+1}, P_{i+3}}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line(u8);

impl Line {
    pub const ALL: [Line; 7] = [
        Line(1),
        Line(2),
        Line(3),
        Line(4),
        Line(5),
        Line(6),
        Line(7),
    ];

    pub fn new(index: i64) -> Result<Self, FanoError> {
        if (1..=7).contains(&index) {
            Ok(Line(index as u8))
        } else {
            Err(FanoError::BadLineIndex(index))
        }
    }

    pub fn cyclic(i: i64) -> Self {
        Line(mod7(i))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// `(P_i, P_{i+1}, P_{i+3})`.
    pub fn points(self) -> [Point; 3] {
        let i = self.0 as i64;
        [Point::cyclic(i), Point::cyclic(i + 1), Point::cyclic(i + 3)]
    }

    /// Bit `k - 1` is set for each `P_k` on the line.
    pub fn point_set(self) -> u8 {
        self.points().iter().fold(0, |m, p| m | 1 << p.index())
    }

    pub fn contains(self, p: Point) -> bool {
        self.point_set() >> p.index() & 1 == 1
    }

    /// The nonzero linear form on `Z₂³` vanishing on the line, as a mask `m`
    /// with `φ(x) = popcount(m & x) mod 2`.
    pub fn dual_mask(self) -> u8 {
        (1u8..8)
            .find(|m| self.points().iter().all(|p| (m & p.mask()).count_ones() % 2 == 0))
            .expect("every line has a dual form")
    }

    /// The four points off the line.
    pub fn quadrilateral(self) -> [Point; 4] {
        let set = self.point_set();
        let mut out = [Point(1); 4];
        let mut k = 0;
        for p in Point::ALL {
            if set >> p.index() & 1 == 0 {
                out[k] = p;
                k += 1;
            }
        }
        out
    }

    /// The point shared with another line.
    pub fn meet(self, other: Line) -> Option<Point> {
        if self == other {
            return None;
        }
        let common = self.point_set() & other.point_set();
        Some(Point(common.trailing_zeros() as u8 + 1))
    }

    /// The third line through `self ∩ other` (written `D + D'`).
    pub fn third_through_meet(self, other: Line) -> Option<Line> {
        let p = self.meet(other)?;
        p.lines().into_iter().find(|&l| l != self && l != other)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.0)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.0)
    }
}

impl FromStr for Line {
    type Err = FanoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n = s
            .strip_prefix('D')
            .ok_or_else(|| FanoError::Parse(s.to_string()))?
            .parse::<i64>()
            .map_err(|_| FanoError::Parse(s.to_string()))?;
        Line::new(n)
    }
}

/// The line `{P, Q, P + Q}`.
pub fn wedge(p: Point, q: Point) -> Result<Line, FanoError> {
    if p == q {
        return Err(FanoError::EqualPoints);
    }
    let bits = 1u8 << p.index() | 1 << q.index();
    Ok(Line::ALL
        .into_iter()
        .find(|l| l.point_set() & bits == bits)
        .expect("two points span a line"))
}

/// Whether three distinct points are collinear.
pub fn collinear(p: Point, q: Point, r: Point) -> bool {
    p != q && q != r && p != r && p.mask() ^ q.mask() ^ r.mask() == 0
}

/// Whether three distinct lines share a point.
pub fn concurrent(a: Line, b: Line, c: Line) -> bool {
    a != b && b != c && a != c && a.point_set() & b.point_set() & c.point_set() != 0
}

// ---------------------------------------------------------------------------
// Collineations

/// An additive bijection of the seven points, stored as the labels of
/// `g(P1), …, g(P7)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collineation {
    perm: [u8; 7],
}

impl Collineation {
    pub const IDENTITY: Collineation = Collineation {
        perm: [1, 2, 3, 4, 5, 6, 7],
    };

    pub fn new(perm: [u8; 7]) -> Result<Self, FanoError> {
        let mut seen = 0u8;
        for &v in &perm {
            if !(1..=7).contains(&v) || seen >> (v - 1) & 1 == 1 {
                return Err(FanoError::NotBijective);
            }
            seen |= 1 << (v - 1);
        }
        let g = Collineation { perm };
        for p in Point::ALL {
            for q in Point::ALL {
                if let Some(r) = p.add(q) {
                    if g.apply(p).add(g.apply(q)) != Some(g.apply(r)) {
                        return Err(FanoError::NotAdditive);
                    }
                }
            }
        }
        Ok(g)
    }

    /// The linear map sending the basis `P1, P2, P3` (masks `001, 010, 100`)
    /// to three independent points.
    pub fn from_basis_images(images: [Point; 3]) -> Result<Self, FanoError> {
        let cols = images.map(Point::mask);
        let mut perm = [0u8; 7];
        for p in Point::ALL {
            let m = p.mask();
            let mut img = 0;
            for (k, c) in cols.iter().enumerate() {
                if m >> k & 1 == 1 {
                    img ^= c;
                }
            }
            perm[p.index()] = Point::from_mask(img).ok_or(FanoError::NotBijective)?.label();
        }
        Collineation::new(perm)
    }

    pub fn perm(&self) -> [u8; 7] {
        self.perm
    }

    pub fn apply(&self, p: Point) -> Point {
        Point(self.perm[p.index()])
    }

    /// Image of a raw `V_F` mask (0 is fixed).
    pub fn apply_mask(&self, m: u8) -> u8 {
        Point::from_mask(m).map_or(0, |p| self.apply(p).mask())
    }

    pub fn apply_line(&self, d: Line) -> Line {
        let [p, q, _] = d.points();
        wedge(self.apply(p), self.apply(q)).expect("collineations are injective")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Collineation) -> Collineation {
        let mut perm = [0u8; 7];
        for p in Point::ALL {
            perm[p.index()] = self.apply(other.apply(p)).label();
        }
        Collineation { perm }
    }

    pub fn inverse(&self) -> Collineation {
        let mut perm = [0u8; 7];
        for p in Point::ALL {
            perm[self.apply(p).index()] = p.label();
        }
        Collineation { perm }
    }

    pub fn pow(&self, n: i64) -> Collineation {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Collineation::IDENTITY, |acc, _| base.compose(&acc))
    }

    pub fn order(&self) -> u32 {
        let mut g = *self;
        let mut k = 1;
        while g != Collineation::IDENTITY {
            g = self.compose(&g);
            k += 1;
        }
        k
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &Collineation) -> Collineation {
        h.compose(self).compose(&h.inverse())
    }

    /// Whether `x³ + c₂x² + c₁x + 1` annihilates the matrix of `self`.
    fn satisfies_cubic(&self, c2: bool, c1: bool) -> bool {
        let g2 = self.compose(self);
        let g3 = self.compose(&g2);
        Point::ALL.iter().all(|&p| {
            let mut v = g3.apply(p).mask() ^ p.mask();
            if c2 {
                v ^= g2.apply(p).mask();
            }
            if c1 {
                v ^= self.apply(p).mask();
            }
            v == 0
        })
    }
}

impl fmt::Debug for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.perm {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Collineation {
    type Err = FanoError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| FanoError::Parse(s.to_string()))?;
        let perm: [u8; 7] = digits
            .try_into()
            .map_err(|_| FanoError::Parse(s.to_string()))?;
        Collineation::new(perm)
    }
}

impl Serialize for Collineation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Collineation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 168 collineations in lexicographic order of their permutations.
pub fn all_collineations() -> &'static [Collineation] {
    static GROUP: OnceLock<Vec<Collineation>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let mut out = Vec::with_capacity(168);
        for a in Point::ALL {
            for b in Point::ALL {
                for c in Point::ALL {
                    if a != b && !(c == a || c == b || collinear(a, b, c)) {
                        out.push(
                            Collineation::from_basis_images([a, b, c])
                                .expect("independent images define a collineation"),
                        );
                    }
                }
            }
        }
        out.sort();
        out
    })
}

/// Position of `g` in [`all_collineations`].
pub fn collineation_index(g: &Collineation) -> usize {
    static INDEX: OnceLock<HashMap<Collineation, usize>> = OnceLock::new();
    INDEX.get_or_init(|| {
        all_collineations()
            .iter()
            .enumerate()
            .map(|(i, g)| (*g, i))
            .collect()
    })[g]
}

/// The shift `τ : P_i ↦ P_{i+1}`.
pub fn canonical_tau() -> Collineation {
    Collineation::new([2, 3, 4, 5, 6, 7, 1]).expect("the shift is additive")
}

/// The generators `a` and `b` with `a² = b³ = (ab)⁷ = [a, b]⁴ = 1` and `ab = τ`.
pub fn standard_generators() -> (Collineation, Collineation) {
    let a = Collineation::new([1, 2, 7, 4, 6, 5, 3]).expect("a is a collineation");
    let b = Collineation::new([2, 7, 4, 6, 5, 3, 1]).expect("b is a collineation");
    (a, b)
}

/// The elements reachable from `gens` by composition.
pub fn generated_subgroup(gens: &[Collineation]) -> BTreeSet<Collineation> {
    let mut seen = BTreeSet::from([Collineation::IDENTITY]);
    let mut frontier = vec![Collineation::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// The two irreducible cubics over `Z₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cubic {
    /// `x³ + x + 1`
    X3X1,
    /// `x³ + x² + 1`
    X3X2,
}

pub fn order7_minimal_polynomial(g: &Collineation) -> Result<Cubic, FanoError> {
    let ord = g.order();
    if ord != 7 {
        return Err(FanoError::WrongOrder(*g, ord, 7));
    }
    match (g.satisfies_cubic(false, true), g.satisfies_cubic(true, false)) {
        (true, false) => Ok(Cubic::X3X1),
        (false, true) => Ok(Cubic::X3X2),
        _ => unreachable!("an element of order 7 has an irreducible cubic minimal polynomial"),
    }
}

/// `n³ mod 7` read as a sign: `+1` for the squares `1, 2, 4`.
pub fn legendre7(n: i64) -> Result<i8, FanoError> {
    match n.rem_euclid(7) {
        0 => Err(FanoError::MultipleOfSeven(n)),
        1 | 2 | 4 => Ok(1),
        _ => Ok(-1),
    }
}

/// The order-2 map fixing `line` pointwise and sending `R ↦ R + p` off it.
pub fn involution_from(line: Line, p: Point) -> Result<Collineation, FanoError> {
    if !line.contains(p) {
        return Err(FanoError::NotIncident(p, line));
    }
    let mut perm = [0u8; 7];
    for r in Point::ALL {
        let img = if line.contains(r) {
            r
        } else {
            r.add(p).expect("r is off the line, so r != p")
        };
        perm[r.index()] = img.label();
    }
    Collineation::new(perm)
}

/// All 28 triangles (non-collinear triples), sorted.
pub fn triangles() -> Vec<[Point; 3]> {
    let mut out = Vec::new();
    for (i, &a) in Point::ALL.iter().enumerate() {
        for (j, &b) in Point::ALL.iter().enumerate().skip(i + 1) {
            for &c in Point::ALL.iter().skip(j + 1) {
                if !collinear(a, b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// The unique triangle permuted by an element of order 3.
pub fn stable_triangle(g: &Collineation) -> Result<[Point; 3], FanoError> {
    let ord = g.order();
    if ord != 3 {
        return Err(FanoError::WrongOrder(*g, ord, 3));
    }
    let stable: Vec<[Point; 3]> = triangles()
        .into_iter()
        .filter(|t| {
            let mut img = t.map(|p| g.apply(p));
            img.sort();
            img == *t
        })
        .collect();
    match stable.as_slice() {
        [t] => Ok(*t),
        _ => Err(FanoError::StableTriangles {
            expected: 1,
            found: stable.len(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Orientations

/// Which triples `{P, τ^a P, τ^b P}` are the lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientationType {
    /// Lines are `{P, τP, τ³P}`.
    T013,
    /// Lines are `{P, τ²P, τ³P}`.
    T023,
}

impl OrientationType {
    /// Exponents `(a, b)` with lines `{P, τ^a P, τ^b P}`.
    pub fn exponents(self) -> (u8, u8) {
        match self {
            OrientationType::T013 => (1, 3),
            OrientationType::T023 => (2, 3),
        }
    }
}

impl fmt::Display for OrientationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrientationType::T013 => write!(f, "(0,1,3)"),
            OrientationType::T023 => write!(f, "(0,2,3)"),
        }
    }
}

/// The orientation type of a permutation `sigma` of order 7 of an abstract
/// seven-element plane whose lines are recognized by `is_line`.
///
/// Returns `None` when neither pattern describes the lines.
pub fn incidence_orientation_type(
    sigma: &[usize; 7],
    is_line: impl Fn(usize, usize, usize) -> bool,
) -> Option<OrientationType> {
    let pow = |x: usize, k: u8| (0..k).fold(x, |y, _| sigma[y]);
    [OrientationType::T013, OrientationType::T023]
        .into_iter()
        .find(|t| {
            let (a, b) = t.exponents();
            (0..7).all(|x| is_line(x, pow(x, a), pow(x, b)))
        })
}

pub fn orientation_type(tau: &Collineation) -> Result<OrientationType, FanoError> {
    let ord = tau.order();
    if ord != 7 {
        return Err(FanoError::WrongOrder(*tau, ord, 7));
    }
    let sigma = std::array::from_fn(|i| tau.apply(Point::ALL[i]).index());
    Ok(incidence_orientation_type(&sigma, |x, y, z| {
        collinear(Point::ALL[x], Point::ALL[y], Point::ALL[z])
    })
    .expect("every element of order 7 has a type"))
}

/// Orientation type of the map `D ↦ g(D)` on the dual plane, whose lines are
/// the pencils of concurrent lines.
pub fn dual_orientation_type(g: &Collineation) -> Result<OrientationType, FanoError> {
    let ord = g.order();
    if ord != 7 {
        return Err(FanoError::WrongOrder(*g, ord, 7));
    }
    let sigma = std::array::from_fn(|i| g.apply_line(Line::ALL[i]).index() as usize - 1);
    Ok(incidence_orientation_type(&sigma, |x, y, z| {
        concurrent(Line::ALL[x], Line::ALL[y], Line::ALL[z])
    })
    .expect("the dual plane is a Fano plane"))
}

/// An order-7 collineation together with its type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orientation {
    tau: Collineation,
    kind: OrientationType,
}

impl Orientation {
    pub fn new(tau: Collineation) -> Result<Self, FanoError> {
        let kind = orientation_type(&tau)?;
        Ok(Orientation { tau, kind })
    }

    pub fn canonical() -> Self {
        Orientation::new(canonical_tau()).expect("the shift has order 7")
    }

    pub fn tau(&self) -> &Collineation {
        &self.tau
    }

    pub fn kind(&self) -> OrientationType {
        self.kind
    }

    /// The line `D_P = {P, τ^a P, τ^b P}` started at `P`.
    pub fn line_from(&self, p: Point) -> [Point; 3] {
        let (a, b) = self.kind.exponents();
        [p, self.tau.pow(a as i64).apply(p), self.tau.pow(b as i64).apply(p)]
    }

    /// The cyclic order induced on `d`, started at the unique `P` with
    /// `d = D_P`.
    pub fn induced_line_orientation(&self, d: Line) -> [Point; 3] {
        let set = d.point_set();
        d.points()
            .into_iter()
            .map(|p| self.line_from(p))
            .find(|c| c.iter().fold(0u8, |m, q| m | 1 << q.index()) == set)
            .expect("each line is D_P for exactly one P")
    }

    /// For a type `(0,1,3)` orientation, the cyclic order
    /// `(D_P, D_{τ⁻¹P}, D_{τ⁻³P})` induced on the pencil through `p` by the
    /// dual orientation `(τ*)⁻¹`.
    pub fn dual_pencil_orientation(&self, p: Point) -> Result<[Line; 3], FanoError> {
        if self.kind != OrientationType::T013 {
            return Err(FanoError::Parse("dual pencil orientation needs type (0,1,3)".into()));
        }
        let dp = |q: Point| {
            let [x, y, _] = self.line_from(q);
            wedge(x, y).expect("distinct")
        };
        let inv = self.tau.inverse();
        Ok([dp(p), dp(inv.apply(p)), dp(inv.pow(3).apply(p))])
    }
}

/// Whether two cyclic orders of the same three points agree.
pub fn same_cycle(a: &[Point; 3], b: &[Point; 3]) -> bool {
    (0..3).any(|k| (0..3).all(|i| a[i] == b[(i + k) % 3]))
}
