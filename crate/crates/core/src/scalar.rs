//! Exact arithmetic in the field `Q(i, sqrt(2))`.
//!
//! A [`Scalar`] is stored as a 4-dimensional rational vector over the fixed
//! basis `{1, sqrt(2), i, i*sqrt(2)}`, so equality is component-wise and all
//! field operations are exact. This field contains every coefficient the
//! engine needs: the `1/sqrt(2)` normalisations and the eighth roots of
//! unity `(1±i)/sqrt(2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// An element `a + b*sqrt(2) + i*(c + d*sqrt(2))` of `Q(i, sqrt(2))`.
///
/// The rationals are kept in lowest terms with positive denominator by
/// `BigRational`, which makes the representation canonical: two scalars are
/// equal iff all four components are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Scalar { a, b, c, d }
    }

    /// Components over the basis `{1, sqrt(2), i, i*sqrt(2)}`.
    pub fn components(&self) -> (&BigRational, &BigRational, &BigRational, &BigRational) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn zero() -> Self {
        Scalar::from_rationals(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::new(
            rat(n, 1),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            rat(num, den),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    /// Real element `re + im*i` with `re`, `im` rational.
    fn from_rationals(re: BigRational, im: BigRational) -> Self {
        Scalar::new(re, BigRational::zero(), im, BigRational::zero())
    }

    pub fn i() -> Self {
        Scalar::from_rationals(BigRational::zero(), BigRational::one())
    }

    pub fn sqrt2() -> Self {
        Scalar::new(
            BigRational::zero(),
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    /// `1/sqrt(2) = sqrt(2)/2`.
    pub fn inv_sqrt2() -> Self {
        Scalar::new(
            BigRational::zero(),
            rat(1, 2),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Complex conjugate. Fixes `sqrt(2)`, negates the imaginary part.
    pub fn conj(&self) -> Self {
        Scalar::new(
            self.a.clone(),
            self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // 1/(x + iy) = (x - iy)/(x^2 + y^2) with x, y in Q(sqrt(2)),
        // then 1/(p + q*sqrt(2)) = (p - q*sqrt(2))/(p^2 - 2q^2).
        let (x, y) = ((&self.a, &self.b), (&self.c, &self.d));
        let norm_p = x.0 * x.0
            + BigRational::from_integer(2.into()) * x.1 * x.1
            + y.0 * y.0
            + BigRational::from_integer(2.into()) * y.1 * y.1;
        let norm_q = BigRational::from_integer(2.into()) * (x.0 * x.1 + y.0 * y.1);
        let disc = &norm_p * &norm_p - BigRational::from_integer(2.into()) * &norm_q * &norm_q;
        debug_assert!(!disc.is_zero(), "norm of a nonzero scalar is nonzero");
        let inv_norm_p = &norm_p / &disc;
        let inv_norm_q = -&norm_q / &disc;
        // conj(self) * (inv_norm_p + inv_norm_q * sqrt(2))
        let conj = self.conj();
        let factor = Scalar::new(
            inv_norm_p,
            inv_norm_q,
            BigRational::zero(),
            BigRational::zero(),
        );
        Ok(&conj * &factor)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.c + &rhs.c,
            &self.d + &rhs.d,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let two = BigRational::from_integer(2.into());
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        Scalar::new(
            a1 * a2 + &two * b1 * b2 - c1 * c2 - &two * d1 * d2,
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 + &two * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
    }
}

impl Div for &Scalar {
    type Output = Result<Scalar, ScalarError>;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is a multiply by the inverse
    fn div(self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inv()?)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $out:ty) => {
        impl $trait for Scalar {
            type Output = $out;
            fn $method(self, rhs: Scalar) -> $out {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add, Scalar);
forward_owned_binop!(Sub, sub, Scalar);
forward_owned_binop!(Mul, mul, Scalar);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn ratio_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Compact form over the basis, e.g. `1/2*r2+1/2*i*r2`. Contains no
    /// whitespace, so scalars embed unambiguously in line-based formats,
    /// and parses back through both [`Scalar::from_str`] and the
    /// expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: [(&BigRational, &str); 4] = [
            (&self.a, ""),
            (&self.b, "r2"),
            (&self.c, "i"),
            (&self.d, "i*r2"),
        ];
        let mut wrote = false;
        for (coeff, suffix) in parts {
            if coeff.is_zero() {
                continue;
            }
            let neg = coeff.is_negative();
            if wrote {
                f.write_str(if neg { "-" } else { "+" })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mag = coeff.abs();
            if suffix.is_empty() {
                f.write_str(&ratio_str(&mag))?;
            } else if mag.is_one() {
                f.write_str(suffix)?;
            } else {
                write!(f, "{}*{}", ratio_str(&mag), suffix)?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing. Grammar: expr := ['-'] term (('+'|'-') term)*;
//                   term := factor (('*'|'/') factor)*;
//                   factor := integer | 'r2' | 'i' | '(' expr ')'.

struct ScalarParser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn new(input: &'a str) -> Self {
        ScalarParser {
            input: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: &str) -> ScalarError {
        ScalarError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -self.term()?
        } else {
            self.term()?
        };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if op == b'*' {
                acc * rhs
            } else {
                (&acc / &rhs).map_err(|_| self.err("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.input.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                let n: BigInt = text.parse().unwrap();
                Ok(Scalar::new(
                    BigRational::from_integer(n),
                    BigRational::zero(),
                    BigRational::zero(),
                    BigRational::zero(),
                ))
            }
            Some(b'r') if self.input.get(self.pos + 1) == Some(&b'2') => {
                self.pos += 2;
                Ok(Scalar::sqrt2())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Scalar::i())
            }
            _ => Err(self.err("expected number, 'r2', 'i' or '('")),
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = ScalarParser::new(s);
        let value = parser.expr()?;
        if parser.peek().is_some() {
            return Err(parser.err("trailing input"));
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inv_sqrt2_squares_to_half() {
        let half = &Scalar::inv_sqrt2() * &Scalar::inv_sqrt2();
        assert_eq!(half, Scalar::from_ratio(1, 2));
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_integer(-1));
    }

    #[test]
    fn eighth_roots_multiply_to_one() {
        // (1+i)/sqrt(2) * (1-i)/sqrt(2) = 1
        let r = Scalar::inv_sqrt2();
        let u = &(&Scalar::one() + &Scalar::i()) * &r;
        let v = &(&Scalar::one() - &Scalar::i()) * &r;
        assert_eq!(&u * &v, Scalar::one());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(Scalar::i().conj(), -Scalar::i());
        assert_eq!(Scalar::inv_sqrt2().conj(), Scalar::inv_sqrt2());
        let r = Scalar::inv_sqrt2();
        let u = &(&Scalar::one() + &Scalar::i()) * &r;
        let v = &(&Scalar::one() - &Scalar::i()) * &r;
        assert_eq!(u.conj(), v);
    }

    #[test]
    fn inv_examples() {
        // 1/sqrt(2) = sqrt(2)/2
        assert_eq!(Scalar::sqrt2().inv().unwrap(), Scalar::inv_sqrt2());
        assert_eq!(Scalar::i().inv().unwrap(), -Scalar::i());
        // 1/(1+sqrt(2)) = -1 + sqrt(2)
        let x = &Scalar::one() + &Scalar::sqrt2();
        let expect = &Scalar::sqrt2() - &Scalar::one();
        assert_eq!(x.inv().unwrap(), expect);
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mul_inv_is_one() {
        let z = &(&Scalar::from_ratio(3, 5) + &(&Scalar::sqrt2() * &Scalar::from_integer(2)))
            + &(&Scalar::i() * &Scalar::from_ratio(-7, 3));
        assert_eq!(&z * &z.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn display_round_trips() {
        let cases = [
            Scalar::zero(),
            Scalar::one(),
            -Scalar::one(),
            Scalar::i(),
            -Scalar::i(),
            Scalar::inv_sqrt2(),
            &(&Scalar::one() + &Scalar::i()) * &Scalar::inv_sqrt2(),
            &Scalar::from_ratio(-3, 7) + &(&Scalar::i() * &Scalar::sqrt2()),
        ];
        for s in cases {
            let text = s.to_string();
            let back: Scalar = text.parse().unwrap();
            assert_eq!(back, s, "round-trip of {text}");
        }
    }

    #[test]
    fn parses_scalar_quotient_forms() {
        let v: Scalar = "(1+i)/r2".parse().unwrap();
        let expect = &(&Scalar::one() + &Scalar::i()) * &Scalar::inv_sqrt2();
        assert_eq!(v, expect);
        assert_eq!("1/2*r2".parse::<Scalar>().unwrap(), Scalar::inv_sqrt2());
        assert!("1//2".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }
}
