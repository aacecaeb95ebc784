//! Standard dyadic subintervals of `[-1, 1]` and the signed affine
//! bijections between them.
//!
//! An interval of depth `d` and index `j` is
//! `[-1 + j*2^(1-d), -1 + (j+1)*2^(1-d)]`; two standard intervals are either
//! nested or overlap in at most one point. Restricting to this aligned family
//! keeps intersections standard, which is what makes the partial-isometry
//! composition law closed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

/// Hard cap keeping `u64` index arithmetic safe. The scripted-evaluation
/// ceiling in [`crate::DEFAULT_DEPTH_CEILING`] is far below this.
pub const MAX_DEPTH: u32 = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DyadicError {
    #[error("interval index {index} out of range for depth {depth}")]
    IndexOutOfRange { depth: u32, index: u64 },
    #[error("depth {0} exceeds the representable maximum {MAX_DEPTH}")]
    DepthTooLarge(u32),
    #[error("affine image is not a standard interval of [-1,1]")]
    NotStandard,
}

/// Orientation of an affine map (sign of its slope), and the `Z_2`-grading
/// label of a basis isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// The standard dyadic interval `D(d, j) = [-1 + j*2^(1-d), -1 + (j+1)*2^(1-d)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicInterval {
    depth: u32,
    index: u64,
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << (e as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

impl DyadicInterval {
    pub fn new(depth: u32, index: u64) -> Result<Self, DyadicError> {
        if depth > MAX_DEPTH {
            return Err(DyadicError::DepthTooLarge(depth));
        }
        if index >> depth != 0 {
            return Err(DyadicError::IndexOutOfRange { depth, index });
        }
        Ok(DyadicInterval { depth, index })
    }

    /// `[-1, 1]` itself.
    pub fn full() -> Self {
        DyadicInterval { depth: 0, index: 0 }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn left(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.index)) * pow2(1 - self.depth as i64)
            - BigRational::one()
    }

    pub fn right(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.index + 1)) * pow2(1 - self.depth as i64)
            - BigRational::one()
    }

    pub fn length(&self) -> BigRational {
        pow2(1 - self.depth as i64)
    }

    /// Left and right halves.
    pub fn children(&self) -> Result<(Self, Self), DyadicError> {
        if self.depth + 1 > MAX_DEPTH {
            return Err(DyadicError::DepthTooLarge(self.depth + 1));
        }
        Ok((
            DyadicInterval {
                depth: self.depth + 1,
                index: 2 * self.index,
            },
            DyadicInterval {
                depth: self.depth + 1,
                index: 2 * self.index + 1,
            },
        ))
    }

    /// The containing interval one level up, with this interval's side in it.
    pub fn parent(&self) -> Option<(Self, Half)> {
        if self.depth == 0 {
            return None;
        }
        let half = if self.index.is_multiple_of(2) {
            Half::Left
        } else {
            Half::Right
        };
        Some((
            DyadicInterval {
                depth: self.depth - 1,
                index: self.index / 2,
            },
            half,
        ))
    }

    pub fn sibling(&self) -> Option<Self> {
        if self.depth == 0 {
            None
        } else {
            Some(DyadicInterval {
                depth: self.depth,
                index: self.index ^ 1,
            })
        }
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.depth >= self.depth && (other.index >> (other.depth - self.depth)) == self.index
    }

    /// Intersection of two standard intervals: the deeper one when nested,
    /// `None` when the interiors are disjoint (touching endpoints count as
    /// disjoint — a measure-zero set carries the zero projection).
    pub fn intersect(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        if self.contains(other) {
            Some(*other)
        } else if other.contains(self) {
            Some(*self)
        } else {
            None
        }
    }

    /// Mirror image `-I`; depth preserved, index `j -> 2^d - 1 - j`.
    pub fn reflect(&self) -> DyadicInterval {
        DyadicInterval {
            depth: self.depth,
            index: ((1u64 << self.depth) - 1) - self.index,
        }
    }

    fn from_endpoints(lo: &BigRational, hi: &BigRational) -> Result<Self, DyadicError> {
        let len = hi - lo;
        if !len.is_positive() {
            return Err(DyadicError::NotStandard);
        }
        // length must be 2^(1-d) for some d >= 0
        let two = BigRational::from_integer(2.into());
        let mut log2_len: i64 = 0;
        let mut unit = len.clone();
        while unit < BigRational::one() {
            unit *= &two;
            log2_len -= 1;
        }
        while unit > BigRational::one() {
            unit /= &two;
            log2_len += 1;
        }
        if !unit.is_one() {
            return Err(DyadicError::NotStandard);
        }
        let depth = 1 - log2_len;
        if depth < 0 {
            return Err(DyadicError::NotStandard);
        }
        let depth = depth as u32;
        if depth > MAX_DEPTH {
            return Err(DyadicError::DepthTooLarge(depth));
        }
        // index = (lo + 1) / 2^(1-d)
        let idx = (lo + BigRational::one()) / pow2(1 - depth as i64);
        if !idx.is_integer() || idx.is_negative() {
            return Err(DyadicError::NotStandard);
        }
        let idx: BigInt = idx.to_integer();
        let max = BigInt::one() << depth;
        if idx >= max {
            return Err(DyadicError::NotStandard);
        }
        let index = u64::try_from(idx).map_err(|_| DyadicError::NotStandard)?;
        Ok(DyadicInterval { depth, index })
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({},{})", self.depth, self.index)
    }
}

/// Which half of its parent an interval is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Left,
    Right,
}

/// The affine map `t -> sign * 2^exp * t + offset`.
///
/// Exactly one map of each sign carries a given standard interval onto
/// another, and the family is closed under composition and inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedAffineMap {
    sign: Sign,
    exp: i64,
    offset: BigRational,
}

impl SignedAffineMap {
    /// The unique affine map of sign `sign` with `phi(source) = image`.
    pub fn unique_map(source: &DyadicInterval, image: &DyadicInterval, sign: Sign) -> Self {
        let exp = source.depth() as i64 - image.depth() as i64;
        let offset = match sign {
            // increasing: phi(left of source) = left of image
            Sign::Pos => image.left() - pow2(exp) * source.left(),
            // decreasing: phi(left of source) = right of image
            Sign::Neg => image.right() + pow2(exp) * source.left(),
        };
        SignedAffineMap { sign, exp, offset }
    }

    pub fn identity() -> Self {
        SignedAffineMap {
            sign: Sign::Pos,
            exp: 0,
            offset: BigRational::zero(),
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Slope exponent: the slope is `sign * 2^exp`.
    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn apply(&self, t: &BigRational) -> BigRational {
        let slope = pow2(self.exp);
        match self.sign {
            Sign::Pos => slope * t + &self.offset,
            Sign::Neg => -(slope * t) + &self.offset,
        }
    }

    pub fn inverse(&self) -> SignedAffineMap {
        match self.sign {
            Sign::Pos => SignedAffineMap {
                sign: Sign::Pos,
                exp: -self.exp,
                offset: -&self.offset * pow2(-self.exp),
            },
            Sign::Neg => SignedAffineMap {
                sign: Sign::Neg,
                exp: -self.exp,
                offset: &self.offset * pow2(-self.exp),
            },
        }
    }

    /// `self` after `inner`: `t -> self(inner(t))`. Signs multiply,
    /// exponents add.
    pub fn compose(&self, inner: &SignedAffineMap) -> SignedAffineMap {
        let slope = pow2(self.exp);
        let offset = match self.sign {
            Sign::Pos => slope * &inner.offset + &self.offset,
            Sign::Neg => -(slope * &inner.offset) + &self.offset,
        };
        SignedAffineMap {
            sign: self.sign * inner.sign,
            exp: self.exp + inner.exp,
            offset,
        }
    }

    /// Exact image of a standard interval; errors if the result is not a
    /// standard interval of `[-1, 1]`, which signals a composition bug in
    /// the caller.
    pub fn image(&self, iv: &DyadicInterval) -> Result<DyadicInterval, DyadicError> {
        let (a, b) = (self.apply(&iv.left()), self.apply(&iv.right()));
        match self.sign {
            Sign::Pos => DyadicInterval::from_endpoints(&a, &b),
            Sign::Neg => DyadicInterval::from_endpoints(&b, &a),
        }
    }

    pub fn preimage(&self, iv: &DyadicInterval) -> Result<DyadicInterval, DyadicError> {
        self.inverse().image(iv)
    }
}

impl fmt::Display for SignedAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t -> {}2^{}*t", self.sign, self.exp)?;
        if !self.offset.is_zero() {
            if self.offset.is_negative() {
                write!(f, " - {}", -&self.offset)?;
            } else {
                write!(f, " + {}", self.offset)?;
            }
        }
        Ok(())
    }
}
