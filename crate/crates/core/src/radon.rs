//! The finite Radon transform `f ↦ f★`, `f★(D) = Σ_{P∈D} f(P)`, from
//! `Z₂`-valued functions on points to functions on lines, and its
//! multiplicative twin on `±1`-valued functions.
//!
//! All functions are 7-bit masks: bit `k - 1` holds the value at `P_k`
//! (resp. `D_k`). For sign functions a set bit means `-1`, so the maps
//! `e(x) = (-1)^x` and its inverse `ℓ` are the identity on masks.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fano::{Line, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadonError {
    #[error("line function {0} is not in the image of the Radon transform")]
    NotInImage(LineFn),
    #[error("sign function {0} does not multiply to +1 over the points")]
    NotInR(SignPointFn),
}

const FULL: u8 = 0x7f;

macro_rules! bit_function {
    ($(#[$doc:meta])* $name:ident, $prefix:literal) => {
        $(#[$doc])*
        #[derive(
            Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
        )]
        pub struct $name(u8);

        impl $name {
            pub const ZERO: $name = $name(0);
            pub const ONES: $name = $name(FULL);

            pub fn from_bits(bits: u8) -> Self {
                $name(bits & FULL)
            }

            pub fn bits(self) -> u8 {
                self.0
            }

            /// All 128 functions in increasing mask order.
            pub fn all() -> impl Iterator<Item = $name> {
                (0..=FULL).map($name)
            }

            fn bit(self, k: usize) -> u8 {
                self.0 >> k & 1
            }

            /// Pointwise sum; for sign functions, the pointwise product.
            pub fn plus(self, other: $name) -> $name {
                $name(self.0 ^ other.0)
            }

            /// Number of entries equal to 1 (for sign functions, to -1).
            pub fn weight(self) -> u32 {
                self.0.count_ones()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{self}")
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, $prefix)?;
                for k in 0..7 {
                    write!(f, "{}", self.bit(k))?;
                }
                Ok(())
            }
        }
    };
}

bit_function!(
    /// A function `F → Z₂`.
    PointFn,
    "f:"
);
bit_function!(
    /// A function `F* → Z₂`.
    LineFn,
    "f*:"
);
bit_function!(
    /// A function `F → {±1}`; a set bit is `-1`.
    SignPointFn,
    "h:"
);
bit_function!(
    /// A function `F* → {±1}`; a set bit is `-1`.
    SignLineFn,
    "h*:"
);

impl PointFn {
    pub fn at(self, p: Point) -> u8 {
        self.bit(p.index())
    }

    pub fn indicator(p: Point) -> Self {
        PointFn(1 << p.index())
    }

    pub fn from_fn(f: impl Fn(Point) -> bool) -> Self {
        PointFn(Point::ALL.iter().fold(0, |m, &p| m | (f(p) as u8) << p.index()))
    }

    /// `Σ_P f(P)`.
    pub fn total(self) -> u8 {
        (self.0.count_ones() % 2) as u8
    }

    /// Membership in `S₀(F)`: the values sum to zero.
    pub fn in_s0(self) -> bool {
        self.total() == 0
    }
}

impl LineFn {
    pub fn at(self, d: Line) -> u8 {
        self.bit(d.index() as usize - 1)
    }

    pub fn from_fn(f: impl Fn(Line) -> bool) -> Self {
        LineFn(
            Line::ALL
                .iter()
                .fold(0, |m, &d| m | (f(d) as u8) << (d.index() - 1)),
        )
    }

    /// `Σ_{D∋P} f(D)`.
    pub fn pencil_sum(self, p: Point) -> u8 {
        p.lines().iter().fold(0, |s, &d| s ^ self.at(d))
    }
}

impl SignPointFn {
    pub fn at(self, p: Point) -> i8 {
        1 - 2 * self.bit(p.index()) as i8
    }

    pub fn from_fn(f: impl Fn(Point) -> i8) -> Self {
        SignPointFn(
            Point::ALL
                .iter()
                .fold(0, |m, &p| m | ((f(p) < 0) as u8) << p.index()),
        )
    }

    /// `Π_P h(P)`.
    pub fn product(self) -> i8 {
        if self.0.count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Membership in `R`: the values multiply to `+1`.
    pub fn in_r(self) -> bool {
        self.product() == 1
    }

    /// Points carrying the value `+1`.
    pub fn plus_points(self) -> Vec<Point> {
        Point::ALL.into_iter().filter(|&p| self.at(p) == 1).collect()
    }
}

impl SignLineFn {
    pub fn at(self, d: Line) -> i8 {
        1 - 2 * self.bit(d.index() as usize - 1) as i8
    }

    pub fn from_fn(f: impl Fn(Line) -> i8) -> Self {
        SignLineFn(
            Line::ALL
                .iter()
                .fold(0, |m, &d| m | ((f(d) < 0) as u8) << (d.index() - 1)),
        )
    }

    /// `Π_{D∋P} h(D)`.
    pub fn pencil_product(self, p: Point) -> i8 {
        p.lines().iter().map(|&d| self.at(d)).product()
    }

    /// Membership in `R★`: every pencil multiplies to `+1`.
    pub fn in_r_star(self) -> bool {
        Point::ALL.iter().all(|&p| self.pencil_product(p) == 1)
    }

    /// Lines carrying the value `+1`.
    pub fn plus_lines(self) -> Vec<Line> {
        Line::ALL.into_iter().filter(|&d| self.at(d) == 1).collect()
    }

    /// The point `P` with `self = e(T_P)`, or `None` for the constant `1`.
    ///
    /// This fixes the identification `R★ ≅ V_F` by `e(T_P) ↦ P`, `1 ↦ 0`.
    /// Returns `Err(())` when `self` is not in `R★`.
    #[allow(clippy::result_unit_err)]
    pub fn distinguished_point(self) -> Result<Option<Point>, ()> {
        if self == SignLineFn::ZERO {
            return Ok(None);
        }
        Point::ALL
            .into_iter()
            .find(|&p| exp_line(t_point(p)) == self)
            .map(Some)
            .ok_or(())
    }
}

/// `e : Z₂ → {±1}` on point functions.
pub fn exp_point(f: PointFn) -> SignPointFn {
    SignPointFn(f.0)
}

/// `ℓ = e⁻¹` on point functions.
pub fn log_point(h: SignPointFn) -> PointFn {
    PointFn(h.0)
}

pub fn exp_line(f: LineFn) -> SignLineFn {
    SignLineFn(f.0)
}

pub fn log_line(h: SignLineFn) -> LineFn {
    LineFn(h.0)
}

/// `T_D`: zero on `D`, one off `D`.
pub fn t_line(d: Line) -> PointFn {
    PointFn(!d.point_set() & FULL)
}

/// `T_P`: zero on the lines through `P`, one on the others.
pub fn t_point(p: Point) -> LineFn {
    LineFn::from_fn(|d| !d.contains(p))
}

/// `f★(D) = Σ_{P∈D} f(P)`.
pub fn radon(f: PointFn) -> LineFn {
    LineFn::from_fn(|d| d.points().iter().fold(0, |s, &p| s ^ f.at(p)) == 1)
}

/// The kernel of `★`: `0` and the seven `T_D`, sorted by mask.
pub fn kernel() -> Vec<PointFn> {
    PointFn::all().filter(|&f| radon(f) == LineFn::ZERO).collect()
}

/// The 16 members of the image of `★`, sorted by mask.
pub fn image() -> Vec<LineFn> {
    let mut out: Vec<LineFn> = PointFn::all().map(radon).collect();
    out.sort();
    out.dedup();
    out
}

/// Whether `f` is some `g★`: the sums over the seven pencils all agree.
pub fn image_membership(f: LineFn) -> bool {
    let first = f.pencil_sum(Point::ALL[0]);
    Point::ALL.iter().all(|&p| f.pencil_sum(p) == first)
}

/// All `g` with `g★ = f`, sorted by mask.
pub fn preimages(f: LineFn) -> Result<Vec<PointFn>, RadonError> {
    let out: Vec<PointFn> = PointFn::all().filter(|&g| radon(g) == f).collect();
    if out.is_empty() {
        Err(RadonError::NotInImage(f))
    } else {
        Ok(out)
    }
}

/// `e ∘ ★ ∘ ℓ` on `R`.
pub fn multiplicative_radon(h: SignPointFn) -> Result<SignLineFn, RadonError> {
    if !h.in_r() {
        return Err(RadonError::NotInR(h));
    }
    Ok(exp_line(radon(log_point(h))))
}

/// The 64 members of `R`.
pub fn r_set() -> Vec<SignPointFn> {
    SignPointFn::all().filter(|h| h.in_r()).collect()
}

/// The 8 members of `R★`, sorted by mask.
pub fn r_star_set() -> Vec<SignLineFn> {
    SignLineFn::all().filter(|h| h.in_r_star()).collect()
}
