//! The line invariant `δ*`, signed lifts of collineations to automorphisms of
//! `O_F` and the order-1344 group they form.
//!
//! A lift `ĝ` of `g` acts by `ĝ(1) = 1`, `ĝ(e_P) = δ̃(P) e_{gP}`. It is an
//! algebra automorphism exactly when `δ*(g, D) = Π_{P∈D} δ̃(P)` on every line,
//! so the lifts of `g` are the preimages of `δ*(g, ·)` under the
//! multiplicative Radon transform.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compfactor::CompositionFactor;
use crate::fano::{
    all_collineations, collineation_index, same_cycle, Collineation, FanoError, Line, Orientation, Point,
};
use crate::octonion::{OctonionAlgebra, SignedBasis};
use crate::radon::{exp_point, log_line, preimages, SignLineFn, SignPointFn};

#[derive(Debug, Error)]
pub enum LiftingError {
    #[error("no lift of {0}: δ* is not in the image of the Radon transform")]
    NoLift(Collineation),
    #[error("lift {0} is not an algebra automorphism")]
    NotAutomorphism(AugAut),
    #[error("the lifts are not closed under composition: {0} ∘ {1}")]
    NotClosed(AugAut, AugAut),
    #[error("δ* property fails: {0}")]
    DeltaStar(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error(transparent)]
    Fano(#[from] FanoError),
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Json(#[from] serde_json::Error),
}

/// `δ*(g, D) = ε_PQ ε_{gP, gQ}` for distinct `P, Q ∈ D`.
pub fn delta_star(g: &Collineation, d: Line, eps: &CompositionFactor) -> i8 {
    let [p, q, _] = d.points();
    let v = eps.at(p, q) * eps.at(g.apply(p), g.apply(q));
    debug_assert!(d.points().iter().all(|&a| d
        .points()
        .iter()
        .all(|&b| a == b || eps.at(a, b) * eps.at(g.apply(a), g.apply(b)) == v)));
    v
}

/// `δ*(g, ·)` as a sign function on lines.
pub fn delta_star_fn(g: &Collineation, eps: &CompositionFactor) -> SignLineFn {
    SignLineFn::from_fn(|d| delta_star(g, d, eps))
}

/// The checks of [`delta_star_properties`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaStarReport {
    pub elements: usize,
    pub determinant_one: bool,
    pub multiplier_identity: bool,
    pub pencil_products_one: bool,
    pub quadrilateral_relation: bool,
    pub pair_independent: bool,
}

/// Verifies, for all 168 elements, `Π_D δ*(g,D) = 1`, the pencil products,
/// the quadrilateral relation and independence of the chosen pair; and the
/// multiplier identity `δ*(g₂g₁, D) = δ*(g₂, g₁D) δ*(g₁, D)` on all pairs.
pub fn delta_star_properties(eps: &CompositionFactor) -> Result<DeltaStarReport, LiftingError> {
    let group = all_collineations();
    let table: Vec<SignLineFn> = group.iter().map(|g| delta_star_fn(g, eps)).collect();
    let mut report = DeltaStarReport {
        elements: group.len(),
        determinant_one: true,
        multiplier_identity: true,
        pencil_products_one: true,
        quadrilateral_relation: true,
        pair_independent: true,
    };
    for (g, ds) in group.iter().zip(&table) {
        let det: i8 = Line::ALL.iter().map(|&d| ds.at(d)).product();
        report.determinant_one &= det == 1;
        report.pencil_products_one &= ds.in_r_star();
        for d in Line::ALL {
            let pts = d.points();
            for &a in &pts {
                for &b in &pts {
                    if a != b {
                        report.pair_independent &=
                            eps.at(a, b) * eps.at(g.apply(a), g.apply(b)) == ds.at(d);
                    }
                }
            }
            let quad = d.quadrilateral();
            for &p in &quad {
                for &q in &quad {
                    for &r in &quad {
                        for &s in &quad {
                            let distinct = [p, q, r, s]
                                .iter()
                                .enumerate()
                                .all(|(i, x)| [p, q, r, s][i + 1..].iter().all(|y| y != x));
                            if !distinct {
                                continue;
                            }
                            let w = |x: Point, y: Point| {
                                ds.at(crate::fano::wedge(x, y).expect("distinct"))
                            };
                            report.quadrilateral_relation &=
                                w(p, q) * w(q, r) == w(p, s) * w(s, r);
                        }
                    }
                }
            }
        }
    }
    for (i, g1) in group.iter().enumerate() {
        for g2 in group {
            let prod = table[collineation_index(&g2.compose(g1))];
            for d in Line::ALL {
                report.multiplier_identity &=
                    prod.at(d) == delta_star(g2, g1.apply_line(d), eps) * table[i].at(d);
            }
        }
    }
    if !(report.determinant_one
        && report.multiplier_identity
        && report.pencil_products_one
        && report.quadrilateral_relation
        && report.pair_independent)
    {
        return Err(LiftingError::DeltaStar(format!("{report:?}")));
    }
    Ok(report)
}

/// Groups the 168 elements by their `δ*` function.
pub fn classify_delta_star(eps: &CompositionFactor) -> BTreeMap<SignLineFn, Vec<Collineation>> {
    let mut out: BTreeMap<SignLineFn, Vec<Collineation>> = BTreeMap::new();
    for g in all_collineations() {
        out.entry(delta_star_fn(g, eps)).or_default().push(*g);
    }
    out
}

/// Whether `tau_prime` induces on every line the same cyclic order as `tau`.
pub fn order7_same_orientation(
    tau: &Orientation,
    tau_prime: &Collineation,
) -> Result<bool, LiftingError> {
    let other = Orientation::new(*tau_prime)?;
    Ok(Line::ALL.iter().all(|&d| {
        same_cycle(
            &tau.induced_line_orientation(d),
            &other.induced_line_orientation(d),
        )
    }))
}

// ---------------------------------------------------------------------------
// Signed lifts

/// A signed lift `(g, δ̃)`: `e_P ↦ δ̃(P) e_{gP}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AugAut {
    base: Collineation,
    signs: SignPointFn,
}

impl AugAut {
    pub fn new(base: Collineation, signs: SignPointFn) -> Self {
        AugAut { base, signs }
    }

    pub fn identity() -> Self {
        AugAut::new(Collineation::IDENTITY, SignPointFn::ZERO)
    }

    /// `π(ĝ)`.
    pub fn base(&self) -> &Collineation {
        &self.base
    }

    pub fn signs(&self) -> SignPointFn {
        self.signs
    }

    pub fn sign(&self, p: Point) -> i8 {
        self.signs.at(p)
    }

    pub fn apply(&self, x: SignedBasis) -> SignedBasis {
        if x.index == 0 {
            return x;
        }
        let p = Point::new(x.index as i64).expect("basis index");
        SignedBasis {
            sign: x.sign * self.sign(p),
            index: self.base.apply(p).label() as usize,
        }
    }

    /// `self ∘ other`: `(g₂, s₂) ∘ (g₁, s₁) = (g₂g₁, (s₂ ∘ g₁) · s₁)`.
    pub fn compose(&self, other: &AugAut) -> AugAut {
        let signs = SignPointFn::from_fn(|p| self.sign(other.base.apply(p)) * other.sign(p));
        AugAut::new(self.base.compose(&other.base), signs)
    }

    pub fn inverse(&self) -> AugAut {
        let gi = self.base.inverse();
        AugAut::new(gi, SignPointFn::from_fn(|p| self.sign(gi.apply(p))))
    }

    pub fn order(&self) -> u32 {
        let id = AugAut::identity();
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = self.compose(&x);
            k += 1;
        }
        k
    }

    /// The lifting condition `δ*(g, D) = Π_{P∈D} δ̃(P)` on every line.
    pub fn satisfies_lifting_condition(&self, eps: &CompositionFactor) -> bool {
        Line::ALL.iter().all(|&d| {
            let prod: i8 = d.points().iter().map(|&p| self.sign(p)).product();
            prod == delta_star(&self.base, d, eps)
        })
    }

    /// `ĝ(e_a e_b) = ĝ(e_a) ĝ(e_b)` on all 64 basis pairs.
    pub fn is_automorphism(&self, alg: &OctonionAlgebra) -> bool {
        (0..8).all(|a| {
            (0..8).all(|b| {
                let lhs = self.apply(alg.basis_product(a, b));
                let (x, y) = (
                    self.apply(SignedBasis { sign: 1, index: a }),
                    self.apply(SignedBasis { sign: 1, index: b }),
                );
                let xy = alg.basis_product(x.index, y.index);
                lhs == SignedBasis {
                    sign: x.sign * y.sign * xy.sign,
                    index: xy.index,
                }
            })
        })
    }
}

impl fmt::Debug for AugAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Images of `P1..P7` with signs, e.g. `1 2 7 4 -6 5 -3`.
impl fmt::Display for AugAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Point::ALL
            .iter()
            .map(|&p| format!("{}", self.sign(p) as i32 * self.base.apply(p).label() as i32))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for AugAut {
    type Err = LiftingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let vals: Vec<i64> = s
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| LiftingError::Parse(s.to_string()))?;
        if vals.len() != 7 || vals.iter().any(|v| *v == 0) {
            return Err(LiftingError::Parse(s.to_string()));
        }
        let perm: [u8; 7] = std::array::from_fn(|k| vals[k].unsigned_abs() as u8);
        let base = Collineation::new(perm)?;
        let signs = SignPointFn::from_fn(|p| vals[p.index()].signum() as i8);
        Ok(AugAut::new(base, signs))
    }
}

/// `t_D`: identity on points, `+1` on `D`, `-1` off `D`.
pub fn t_map(d: Line) -> AugAut {
    AugAut::new(
        Collineation::IDENTITY,
        SignPointFn::from_fn(|p| if d.contains(p) { 1 } else { -1 }),
    )
}

/// The eight lifts of `g`, sorted, each checked to be an automorphism.
pub fn lifts(g: &Collineation, alg: &OctonionAlgebra) -> Result<Vec<AugAut>, LiftingError> {
    let target = delta_star_fn(g, alg.eps());
    let pre = preimages(log_line(target)).map_err(|_| LiftingError::NoLift(*g))?;
    let mut out = Vec::with_capacity(pre.len());
    for f in pre {
        let lift = AugAut::new(*g, exp_point(f));
        if !lift.is_automorphism(alg) {
            return Err(LiftingError::NotAutomorphism(lift));
        }
        out.push(lift);
    }
    out.sort();
    Ok(out)
}

/// The automorphism group of the augmented Fano plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugGroup {
    eps: CompositionFactor,
    elements: Vec<AugAut>,
}

/// Cache format version; bump when the file layout or ordering changes.
pub const CACHE_VERSION: u32 = 1;

/// The coordinate model recorded in cache files.
pub const COORDINATE_MODEL: &str = "P1=001,P2=010,P3=100,P4=011,P5=110,P6=111,P7=101";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    coordinate_model: String,
    epsilon: String,
    elements: Vec<CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    base: Collineation,
    signs: u8,
}

impl AugGroup {
    /// All lifts of all 168 collineations, sorted, with closure checked.
    pub fn enumerate(alg: &OctonionAlgebra) -> Result<Self, LiftingError> {
        let mut elements = Vec::with_capacity(1344);
        for g in all_collineations() {
            elements.extend(lifts(g, alg)?);
        }
        elements.sort();
        let group = AugGroup {
            eps: *alg.eps(),
            elements,
        };
        group.check_closure()?;
        Ok(group)
    }

    fn check_closure(&self) -> Result<(), LiftingError> {
        let set: HashSet<&AugAut> = self.elements.iter().collect();
        for x in &self.elements {
            for y in &self.elements {
                if !set.contains(&x.compose(y)) {
                    return Err(LiftingError::NotClosed(*x, *y));
                }
            }
        }
        Ok(())
    }

    pub fn cache_path(dir: &Path, eps: &CompositionFactor) -> PathBuf {
        dir.join(format!("aug-aut-v{CACHE_VERSION}-{}.json", eps.key_hex()))
    }

    /// Reads the cached group for this factor, or enumerates and writes it.
    ///
    /// A cache file that is unreadable, stale or fails validation is
    /// replaced.
    pub fn load_or_build(dir: &Path, alg: &OctonionAlgebra) -> Result<Self, LiftingError> {
        let path = Self::cache_path(dir, alg.eps());
        if let Some(g) = Self::read_cache(&path, alg) {
            return Ok(g);
        }
        let group = Self::enumerate(alg)?;
        group.write_cache(&path)?;
        Ok(group)
    }

    fn read_cache(path: &Path, alg: &OctonionAlgebra) -> Option<Self> {
        let text = fs::read_to_string(path).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        if file.version != CACHE_VERSION
            || file.coordinate_model != COORDINATE_MODEL
            || file.epsilon != alg.eps().key_hex()
            || file.elements.len() != 1344
        {
            return None;
        }
        let elements: Vec<AugAut> = file
            .elements
            .iter()
            .map(|e| AugAut::new(e.base, SignPointFn::from_bits(e.signs)))
            .collect();
        let sorted = elements.windows(2).all(|w| w[0] < w[1]);
        let valid = elements.iter().all(|x| x.satisfies_lifting_condition(alg.eps()));
        (sorted && valid).then_some(AugGroup {
            eps: *alg.eps(),
            elements,
        })
    }

    fn write_cache(&self, path: &Path) -> Result<(), LiftingError> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let file = CacheFile {
            version: CACHE_VERSION,
            coordinate_model: COORDINATE_MODEL.to_string(),
            epsilon: self.eps.key_hex(),
            elements: self
                .elements
                .iter()
                .map(|x| CacheEntry {
                    base: x.base,
                    signs: x.signs.bits(),
                })
                .collect(),
        };
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&file)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn eps(&self) -> &CompositionFactor {
        &self.eps
    }

    pub fn elements(&self) -> &[AugAut] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &AugAut) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// `π⁻¹(g)`.
    pub fn fiber(&self, g: &Collineation) -> &[AugAut] {
        let start = self.elements.partition_point(|x| x.base < *g);
        let end = self.elements.partition_point(|x| x.base <= *g);
        &self.elements[start..end]
    }

    /// `ker π`.
    pub fn kernel(&self) -> &[AugAut] {
        self.fiber(&Collineation::IDENTITY)
    }

    /// Sorted element orders over `π⁻¹(g)`.
    pub fn fiber_order_profile(&self, g: &Collineation) -> Vec<u32> {
        let mut v: Vec<u32> = self.fiber(g).iter().map(AugAut::order).collect();
        v.sort();
        v
    }
}
