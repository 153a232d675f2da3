//! Exact scalar fields of characteristic different from two.
//!
//! Every algebraic construction in this crate is generic over [`Scalar`].
//! Three families are provided:
//!
//! * [`Rational`]: arbitrary precision rationals, always in lowest terms;
//! * [`Gaussian<S>`]: the quadratic extension `S[i]`, `i² = -1`. It is a field
//!   exactly when `-1` is not a square in `S`, e.g. `Q(i)` or `F_9 = F_3[i]`;
//! * [`Fp<P>`]: residues modulo an odd prime `P`.
//!
//! Nothing here rounds.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("characteristic two is not supported")]
    CharacteristicTwo,
    #[error("unsupported field descriptor `{0}`")]
    Unsupported(String),
}

/// An exact field element.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero (and for zero divisors of a
    /// `Gaussian` ring over a base that already contains `√-1`).
    fn inv(&self) -> Option<Self>;
    /// A square root of `-1` when the field has one.
    fn sqrt_minus_one() -> Option<Self>;
    fn descriptor() -> FieldDescriptor;

    /// `num / den`. Panics when `den` vanishes in the field.
    fn from_ratio(num: i64, den: i64) -> Self {
        let d = Self::from_i64(den)
            .inv()
            .expect("denominator vanishes in this field");
        Self::from_i64(num) * d
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Arbitrary precision rational number in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn sqrt_minus_one() -> Option<Self> {
        None
    }
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Rational
    }
}

impl Rational {
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

// ---------------------------------------------------------------------------
// Quadratic extension by i

/// `re + im·i` with `i² = -1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian<S> {
    pub re: S,
    pub im: S,
}

/// `Q(i)`.
pub type GaussianRational = Gaussian<Rational>;

impl<S: Scalar> Gaussian<S> {
    pub fn new(re: S, im: S) -> Self {
        Gaussian { re, im }
    }

    pub fn i() -> Self {
        Gaussian::new(S::zero(), S::one())
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    pub fn embed(s: S) -> Self {
        Gaussian::new(s, S::zero())
    }
}

impl<S: Scalar> fmt::Debug for Gaussian<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Gaussian<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<S: Scalar> Add for Gaussian<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gaussian::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<S: Scalar> Sub for Gaussian<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gaussian::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<S: Scalar> Mul for Gaussian<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Gaussian::new(re, im)
    }
}

impl<S: Scalar> Neg for Gaussian<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian::new(-self.re, -self.im)
    }
}

impl<S: Scalar> Scalar for Gaussian<S> {
    fn zero() -> Self {
        Gaussian::new(S::zero(), S::zero())
    }
    fn one() -> Self {
        Gaussian::new(S::one(), S::zero())
    }
    fn from_i64(n: i64) -> Self {
        Gaussian::new(S::from_i64(n), S::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        let ninv = n.inv()?;
        Some(Gaussian::new(
            self.re.clone() * ninv.clone(),
            -self.im.clone() * ninv,
        ))
    }
    fn sqrt_minus_one() -> Option<Self> {
        Some(Gaussian::i())
    }
    fn descriptor() -> FieldDescriptor {
        match S::descriptor() {
            FieldDescriptor::Rational => FieldDescriptor::GaussianRational,
            other => FieldDescriptor::Extension(Box::new(other)),
        }
    }
}

// ---------------------------------------------------------------------------
// Prime fields

pub(crate) const fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Residue modulo the odd prime `P`, stored as its canonical representative
/// in `0..P`. Instantiating `Fp<2>` (or any non odd prime) fails to compile.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    const VALID: () = assert!(is_odd_prime(P), "Fp<P> needs an odd prime modulus");

    pub fn new(n: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        Fp(n.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        let m = P as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn one() -> Self {
        Fp::new(1)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn sqrt_minus_one() -> Option<Self> {
        (1..P)
            .map(|v| Fp::<P>::new(v as i64))
            .find(|&x| x * x == -Fp::<P>::one())
    }
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::PrimeField(P)
    }
}

// ---------------------------------------------------------------------------
// Field descriptors and dispatch

/// Names one of the supported scalar fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldDescriptor {
    Rational,
    GaussianRational,
    PrimeField(u64),
    /// `K[i]` over another descriptor; only produced by [`Gaussian`] over a
    /// non-rational base.
    Extension(Box<FieldDescriptor>),
}

/// Odd primes for which [`FieldDescriptor::visit`] can instantiate `Fp<P>`.
pub const SUPPORTED_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Something that can run generically over a scalar type chosen at runtime.
pub trait FieldVisitor {
    type Output;
    fn visit<S: Scalar>(self) -> Self::Output;
}

impl FieldDescriptor {
    fn validate(&self) -> Result<(), ScalarError> {
        match self {
            FieldDescriptor::PrimeField(2) => Err(ScalarError::CharacteristicTwo),
            FieldDescriptor::PrimeField(p) if !is_odd_prime(*p) => {
                Err(ScalarError::Unsupported(format!("fp:{p}")))
            }
            FieldDescriptor::Extension(base) => {
                base.validate()?;
                match base.as_ref() {
                    FieldDescriptor::PrimeField(p) if p % 4 == 3 => Ok(()),
                    _ => Err(ScalarError::Unsupported(self.to_string())),
                }
            }
            _ => Ok(()),
        }
    }

    /// Runs `visitor` with the concrete scalar type this descriptor names.
    pub fn visit<V: FieldVisitor>(&self, visitor: V) -> Result<V::Output, ScalarError> {
        self.validate()?;
        macro_rules! prime {
            ($p:expr, $($q:literal),*) => {
                match $p {
                    $($q => Ok(visitor.visit::<Fp<$q>>()),)*
                    other => Err(ScalarError::Unsupported(format!("fp:{other}"))),
                }
            };
        }
        match self {
            FieldDescriptor::Rational => Ok(visitor.visit::<Rational>()),
            FieldDescriptor::GaussianRational => Ok(visitor.visit::<GaussianRational>()),
            FieldDescriptor::PrimeField(p) => {
                prime!(*p, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
            }
            FieldDescriptor::Extension(base) => match base.as_ref() {
                FieldDescriptor::PrimeField(3) => Ok(visitor.visit::<Gaussian<Fp<3>>>()),
                FieldDescriptor::PrimeField(7) => Ok(visitor.visit::<Gaussian<Fp<7>>>()),
                FieldDescriptor::PrimeField(11) => Ok(visitor.visit::<Gaussian<Fp<11>>>()),
                _ => Err(ScalarError::Unsupported(self.to_string())),
            },
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "q"),
            FieldDescriptor::GaussianRational => write!(f, "qi"),
            FieldDescriptor::PrimeField(p) => write!(f, "fp:{p}"),
            FieldDescriptor::Extension(base) => write!(f, "{base}[i]"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let d = match s.trim() {
            "q" | "Q" => FieldDescriptor::Rational,
            "qi" | "QI" | "q(i)" => FieldDescriptor::GaussianRational,
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| ScalarError::Unsupported(other.to_string()))?;
                FieldDescriptor::PrimeField(p)
            }
        };
        d.validate()?;
        Ok(d)
    }
}

/// Whether `-1` is a square in the named field.
pub fn has_sqrt_minus_one(field: &FieldDescriptor) -> Result<bool, ScalarError> {
    field.validate()?;
    Ok(match field {
        FieldDescriptor::Rational => false,
        FieldDescriptor::GaussianRational | FieldDescriptor::Extension(_) => true,
        FieldDescriptor::PrimeField(p) => p % 4 == 1,
    })
}
