//! Gaussian integers `a + bi` and the cyclic phase group `{1, i, -1, -i}`.
//!
//! Every amplitude and eigenvalue in the crate lives in `Z[i]`, so all checks
//! are exact equalities. Irrational normalizations are never materialized:
//! states carry their squared norm as an integer instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("Gaussian integer overflow in {op}: ({lhs}) and ({rhs})")]
    Overflow {
        op: &'static str,
        lhs: GaussScalar,
        rhs: GaussScalar,
    },
}

/// Exact complex number with integer real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GaussScalar {
    pub re: i64,
    pub im: i64,
}

impl GaussScalar {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const I: Self = Self::new(0, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, ArithmeticError> {
        let overflow = || ArithmeticError::Overflow { op: "add", lhs: self, rhs };
        Ok(Self::new(
            self.re.checked_add(rhs.re).ok_or_else(overflow)?,
            self.im.checked_add(rhs.im).ok_or_else(overflow)?,
        ))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, ArithmeticError> {
        let overflow = || ArithmeticError::Overflow { op: "sub", lhs: self, rhs };
        Ok(Self::new(
            self.re.checked_sub(rhs.re).ok_or_else(overflow)?,
            self.im.checked_sub(rhs.im).ok_or_else(overflow)?,
        ))
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, ArithmeticError> {
        let overflow = || ArithmeticError::Overflow { op: "mul", lhs: self, rhs };
        let rr = self.re.checked_mul(rhs.re).ok_or_else(overflow)?;
        let ii = self.im.checked_mul(rhs.im).ok_or_else(overflow)?;
        let ri = self.re.checked_mul(rhs.im).ok_or_else(overflow)?;
        let ir = self.im.checked_mul(rhs.re).ok_or_else(overflow)?;
        Ok(Self::new(
            rr.checked_sub(ii).ok_or_else(overflow)?,
            ri.checked_add(ir).ok_or_else(overflow)?,
        ))
    }

    pub fn checked_neg(self) -> Result<Self, ArithmeticError> {
        let overflow = || ArithmeticError::Overflow { op: "neg", lhs: self, rhs: Self::ZERO };
        Ok(Self::new(
            self.re.checked_neg().ok_or_else(overflow)?,
            self.im.checked_neg().ok_or_else(overflow)?,
        ))
    }

    /// `re² + im²`, checked.
    pub fn checked_norm_sq(self) -> Result<i64, ArithmeticError> {
        let n = self.checked_mul(self.conj())?;
        debug_assert_eq!(n.im, 0);
        Ok(n.re)
    }

    pub fn norm_sq(self) -> i64 {
        self.checked_norm_sq().unwrap_or_else(|e| panic!("{e}"))
    }

    /// The exponent `t` with `self == i^t`, if `self` is a unit fourth root.
    pub fn as_phase(self) -> Option<PhaseExp> {
        match (self.re, self.im) {
            (1, 0) => Some(PhaseExp(0)),
            (0, 1) => Some(PhaseExp(1)),
            (-1, 0) => Some(PhaseExp(2)),
            (0, -1) => Some(PhaseExp(3)),
            _ => None,
        }
    }

    /// Multiply by `i^t`. Never overflows beyond a negation.
    pub fn rotate(self, t: PhaseExp) -> Self {
        match t.0 {
            0 => self,
            1 => Self::new(-self.im, self.re),
            2 => Self::new(-self.re, -self.im),
            _ => Self::new(self.im, -self.re),
        }
    }
}

impl From<i64> for GaussScalar {
    fn from(re: i64) -> Self {
        Self::new(re, 0)
    }
}

impl From<PhaseExp> for GaussScalar {
    fn from(t: PhaseExp) -> Self {
        Self::ONE.rotate(t)
    }
}

// Operator forms panic on overflow; amplitudes here are single digits, so an
// overflow can only mean a logic error upstream.
impl Add for GaussScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for GaussScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for GaussScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for GaussScalar {
    type Output = Self;
    fn neg(self) -> Self {
        self.checked_neg().unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for GaussScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, im) => write!(f, "{im}i"),
            (re, im) if im < 0 => write!(f, "{re}-{}i", -im),
            (re, im) => write!(f, "{re}+{im}i"),
        }
    }
}

/// Exponent `t ∈ Z₄` standing for the phase `i^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseExp(u8);

impl PhaseExp {
    pub const ONE: Self = Self(0);
    pub const I: Self = Self(1);
    pub const MINUS_ONE: Self = Self(2);
    pub const MINUS_I: Self = Self(3);

    pub const fn new(t: u8) -> Self {
        Self(t % 4)
    }

    /// Reduces any integer exponent into `Z₄`.
    pub fn from_i64(t: i64) -> Self {
        Self(t.rem_euclid(4) as u8)
    }

    pub const fn exp(self) -> u8 {
        self.0
    }

    pub const fn mul(self, other: Self) -> Self {
        Self((self.0 + other.0) % 4)
    }

    pub const fn pow(self, u: u8) -> Self {
        Self(((self.0 as u16 * u as u16) % 4) as u8)
    }

    pub const fn inv(self) -> Self {
        Self((4 - self.0) % 4)
    }

    /// Eigenvalue notation: `1`, `i`, `-1`, `-i`.
    pub fn symbol(self) -> &'static str {
        ["1", "i", "-1", "-i"][self.0 as usize]
    }

    pub fn parse_symbol(s: &str) -> Option<Self> {
        match s.trim() {
            "1" | "+1" => Some(Self(0)),
            "i" | "+i" => Some(Self(1)),
            "-1" => Some(Self(2)),
            "-i" => Some(Self(3)),
            _ => None,
        }
    }

    /// Power notation `i^t` used by the text formats.
    pub fn power_notation(self) -> String {
        format!("i^{}", self.0)
    }

    pub fn parse_power_notation(s: &str) -> Option<Self> {
        let t = s.trim().strip_prefix("i^")?;
        match t {
            "0" | "1" | "2" | "3" => Some(Self(t.parse().ok()?)),
            _ => None,
        }
    }
}

impl fmt::Display for PhaseExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
