//! The eight-dimensional algebra `O_F` with basis `1 = e_0, e_{P1}, …, e_{P7}`
//! and product `e_P e_Q = ε_PQ e_{P+Q}`, `e_P e_P = -1`.
//!
//! Coefficient index 0 is the unit and index `k` is `e_{P_k}`.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::compfactor::{is_composition_factor, CompositionFactor, Norm};
use crate::fano::{collinear, Line, Point};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OctonionError {
    #[error("span of 1 and {0} is not closed under multiplication")]
    NotClosed(Line),
    #[error("span of 1 and {0} is not associative")]
    NotAssociative(Line),
    #[error("norm is not multiplicative: {0}")]
    NormMismatch(String),
    #[error("at least one point is required")]
    Empty,
}

/// `±e_k`, with `k = 0` the unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct SignedBasis {
    pub sign: i8,
    pub index: usize,
}

impl fmt::Display for SignedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        if self.index == 0 {
            write!(f, "{s}1")
        } else {
            write!(f, "{s}e{}", self.index)
        }
    }
}

/// An element `λ⁰ + Σ λ^P e_P`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Octonion<S> {
    c: [S; 8],
}

impl<S: Scalar> Octonion<S> {
    pub fn new(c: [S; 8]) -> Self {
        Octonion { c }
    }

    pub fn zero() -> Self {
        Octonion::new(std::array::from_fn(|_| S::zero()))
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn basis(k: usize) -> Self {
        let mut x = Self::zero();
        x.c[k] = S::one();
        x
    }

    pub fn e(p: Point) -> Self {
        Self::basis(p.label() as usize)
    }

    pub fn from_i64(c: [i64; 8]) -> Self {
        Octonion::new(c.map(S::from_i64))
    }

    pub fn coeffs(&self) -> &[S; 8] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.c[k]
    }

    pub fn add(&self, o: &Self) -> Self {
        Octonion::new(std::array::from_fn(|k| self.c[k].clone() + o.c[k].clone()))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Octonion::new(std::array::from_fn(|k| self.c[k].clone() - o.c[k].clone()))
    }

    pub fn scale(&self, s: &S) -> Self {
        Octonion::new(std::array::from_fn(|k| s.clone() * self.c[k].clone()))
    }

    pub fn is_imaginary(&self) -> bool {
        self.c[0].is_zero()
    }

    /// `x ↦ 2⟨x,1⟩1 − x`.
    pub fn conj(&self) -> Self {
        Octonion::new(std::array::from_fn(|k| {
            if k == 0 {
                self.c[0].clone()
            } else {
                -self.c[k].clone()
            }
        }))
    }

    /// `(λ⁰)² + Σ (λ^P)²`.
    pub fn norm(&self) -> S {
        self.c
            .iter()
            .fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    /// The polar form `B(x, y) = Σ x_k y_k` of the norm.
    pub fn inner(&self, o: &Self) -> S {
        self.c
            .iter()
            .zip(&o.c)
            .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }
}

/// `O_F` for a fixed composition factor and the trivial norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OctonionAlgebra {
    eps: CompositionFactor,
    table: [[SignedBasis; 8]; 8],
}

impl OctonionAlgebra {
    pub fn new(eps: CompositionFactor) -> Self {
        let mut table = [[SignedBasis { sign: 1, index: 0 }; 8]; 8];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = match (a, b) {
                    (0, _) => SignedBasis { sign: 1, index: b },
                    (_, 0) => SignedBasis { sign: 1, index: a },
                    _ if a == b => SignedBasis { sign: -1, index: 0 },
                    _ => {
                        let (p, q) = (point(a), point(b));
                        SignedBasis {
                            sign: eps.at(p, q),
                            index: p.add(q).expect("distinct").label() as usize,
                        }
                    }
                };
            }
        }
        OctonionAlgebra { eps, table }
    }

    pub fn canonical() -> Self {
        OctonionAlgebra::new(crate::compfactor::canonical())
    }

    pub fn eps(&self) -> &CompositionFactor {
        &self.eps
    }

    /// `e_a · e_b`.
    pub fn basis_product(&self, a: usize, b: usize) -> SignedBasis {
        self.table[a][b]
    }

    /// The 8×8 table of basis products, rows and columns `1, e_1, …, e_7`.
    pub fn table(&self) -> [[SignedBasis; 8]; 8] {
        self.table
    }

    pub fn mul<S: Scalar>(&self, x: &Octonion<S>, y: &Octonion<S>) -> Octonion<S> {
        let mut out: Octonion<S> = Octonion::zero();
        for a in 0..8 {
            if x.c[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if y.c[b].is_zero() {
                    continue;
                }
                let SignedBasis { sign, index } = self.table[a][b];
                let t = x.c[a].clone() * y.c[b].clone();
                out.c[index] = if sign > 0 {
                    out.c[index].clone() + t
                } else {
                    out.c[index].clone() - t
                };
            }
        }
        out
    }

    /// `(xy)z − x(yz)`.
    pub fn associator<S: Scalar>(
        &self,
        x: &Octonion<S>,
        y: &Octonion<S>,
        z: &Octonion<S>,
    ) -> Octonion<S> {
        self.mul(&self.mul(x, y), z).sub(&self.mul(x, &self.mul(y, z)))
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult<S: Scalar>(&self, x: &Octonion<S>) -> Matrix<S> {
        let mut m = Matrix::zero(8);
        for b in 0..8 {
            let col = self.mul(x, &Octonion::basis(b));
            for (a, v) in col.c.into_iter().enumerate() {
                m.set(a, b, v);
            }
        }
        m
    }

    /// The span of `1, e_P, e_Q, e_R` for the line `d`, checked closed and
    /// associative on all basis triples.
    pub fn quaternion_subalgebra(&self, d: Line) -> Result<QuaternionSubalgebra, OctonionError> {
        let mut basis = [0usize; 4];
        for (k, p) in d.points().iter().enumerate() {
            basis[k + 1] = p.label() as usize;
        }
        for &a in &basis {
            for &b in &basis {
                if !basis.contains(&self.basis_product(a, b).index) {
                    return Err(OctonionError::NotClosed(d));
                }
            }
        }
        for &a in &basis {
            for &b in &basis {
                for &c in &basis {
                    let (x, y, z) = (
                        Octonion::<Rational>::basis(a),
                        Octonion::<Rational>::basis(b),
                        Octonion::<Rational>::basis(c),
                    );
                    if self.associator(&x, &y, &z) != Octonion::zero() {
                        return Err(OctonionError::NotAssociative(d));
                    }
                }
            }
        }
        Ok(QuaternionSubalgebra { line: d, basis })
    }

    /// Dimension of the smallest subalgebra containing `1` and the `e_P`.
    pub fn subalgebra_generated(&self, points: &[Point]) -> Result<usize, OctonionError> {
        if points.is_empty() {
            return Err(OctonionError::Empty);
        }
        let to_vec = |x: &Octonion<Rational>| x.c.to_vec();
        let from_vec = |v: &[Rational]| Octonion::new(std::array::from_fn(|k| v[k].clone()));
        let mut span = Subspace::zero(8);
        span.insert(&to_vec(&Octonion::one()));
        for &p in points {
            span.insert(&to_vec(&Octonion::e(p)));
        }
        loop {
            let basis: Vec<Octonion<Rational>> = span.basis().iter().map(|v| from_vec(v)).collect();
            let mut grew = false;
            for x in &basis {
                for y in &basis {
                    grew |= span.insert(&to_vec(&self.mul(x, y)));
                }
            }
            if !grew {
                return Ok(span.dim());
            }
        }
    }

    /// `N(xy) = N(x) N(y)` on `samples` random integer pairs, plus the
    /// structural criterion on `ε`.
    pub fn norm_multiplicativity_check(
        &self,
        samples: usize,
        seed: u64,
    ) -> Result<NormReport, OctonionError> {
        let structural = is_composition_factor(self.eps.eps(), &Norm::trivial());
        if !structural {
            return Err(OctonionError::NormMismatch("composition rules fail".into()));
        }
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..samples {
            let x: Octonion<Rational> =
                Octonion::from_i64(std::array::from_fn(|_| rng.gen_range(-9..=9)));
            let y: Octonion<Rational> =
                Octonion::from_i64(std::array::from_fn(|_| rng.gen_range(-9..=9)));
            let lhs = self.mul(&x, &y).norm();
            let rhs = x.norm() * y.norm();
            if lhs != rhs {
                return Err(OctonionError::NormMismatch(format!(
                    "{x:?} * {y:?}: {lhs} != {rhs}"
                )));
            }
        }
        Ok(NormReport {
            samples,
            structural,
            symbolic: None,
        })
    }

    /// `N(xy) − N(x)N(y)` as a polynomial in the 16 coordinates of `x` and
    /// `y`: true when every coefficient vanishes.
    pub fn norm_multiplicativity_symbolic(&self) -> bool {
        // c[a][b][k]: coefficient of e_k in e_a e_b.
        let mut c = [[[0i64; 8]; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let s = self.table[a][b];
                c[a][b][s.index] = s.sign as i64;
            }
        }
        // N(xy) = Σ_{a,b,a',b'} T[a][a'][b][b'] x_a x_a' y_b y_b'.
        let t = |a: usize, a2: usize, b: usize, b2: usize| -> i64 {
            (0..8).map(|k| c[a][b][k] * c[a2][b2][k]).sum()
        };
        for a in 0..8 {
            for a2 in a..8 {
                for b in 0..8 {
                    for b2 in b..8 {
                        let xs: &[(usize, usize)] = if a == a2 { &[(a, a)] } else { &[(a, a2), (a2, a)] };
                        let ys: &[(usize, usize)] = if b == b2 { &[(b, b)] } else { &[(b, b2), (b2, b)] };
                        let mut coeff = 0;
                        for &(i, i2) in xs {
                            for &(j, j2) in ys {
                                coeff += t(i, i2, j, j2);
                            }
                        }
                        let expected = (a == a2 && b == b2) as i64;
                        if coeff != expected {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn point(k: usize) -> Point {
    Point::new(k as i64).expect("index in 1..=7")
}

/// The outcome of [`OctonionAlgebra::norm_multiplicativity_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormReport {
    pub samples: usize,
    pub structural: bool,
    pub symbolic: Option<bool>,
}

/// `H_D = span⟨1, e_P, e_Q, e_R⟩` for a line `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuaternionSubalgebra {
    pub line: Line,
    pub basis: [usize; 4],
}

/// Whether three distinct points are aligned; used to pick generator sets.
pub fn aligned(points: &[Point; 3]) -> bool {
    collinear(points[0], points[1], points[2])
}
