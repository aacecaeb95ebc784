//! The sampled-function model of the crossed product by `Z`: functions on
//! `[-1, 1]` valued in `O_2 x| Z_2` with the twisted boundary condition
//! `f(-1) = sigma_hat(f(1))`, evaluated on the five grid points where
//! `e^{i pi t / 2}` lies in `Q(i, sqrt(2))`.

use crate::algebra::{generators, AlgebraElement};
use crate::scalar::Scalar;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZcrossError {
    #[error("boundary condition violated: value at -1 must equal sigma_hat of the value at 1")]
    BoundaryViolation,
}

/// The five sample points `-1, -1/2, 0, 1/2, 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridPoint {
    NegOne,
    NegHalf,
    Zero,
    PosHalf,
    PosOne,
}

impl GridPoint {
    pub const ALL: [GridPoint; 5] = [
        GridPoint::NegOne,
        GridPoint::NegHalf,
        GridPoint::Zero,
        GridPoint::PosHalf,
        GridPoint::PosOne,
    ];

    fn idx(self) -> usize {
        match self {
            GridPoint::NegOne => 0,
            GridPoint::NegHalf => 1,
            GridPoint::Zero => 2,
            GridPoint::PosHalf => 3,
            GridPoint::PosOne => 4,
        }
    }

    /// `e^{i pi t / 2}` at this point, exactly.
    pub fn phase(self) -> Scalar {
        let r = Scalar::inv_sqrt2();
        match self {
            GridPoint::NegOne => -Scalar::i(),
            GridPoint::NegHalf => &(&Scalar::one() - &Scalar::i()) * &r,
            GridPoint::Zero => Scalar::one(),
            GridPoint::PosHalf => &(&Scalar::one() + &Scalar::i()) * &r,
            GridPoint::PosOne => Scalar::i(),
        }
    }

    /// `e^{i pi t}` at this point; the value of `v^2`.
    pub fn square_phase(self) -> Scalar {
        &self.phase() * &self.phase()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridPoint::NegOne => "-1",
            GridPoint::NegHalf => "-1/2",
            GridPoint::Zero => "0",
            GridPoint::PosHalf => "1/2",
            GridPoint::PosOne => "1",
        })
    }
}

/// A grid-sampled function into `O_2 x| Z_2` satisfying the boundary
/// condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledField {
    values: [AlgebraElement; 5],
}

impl SampledField {
    pub fn new(values: [AlgebraElement; 5]) -> Result<Self, ZcrossError> {
        if values[0] != values[4].sigma_hat() {
            return Err(ZcrossError::BoundaryViolation);
        }
        Ok(SampledField { values })
    }

    fn new_unchecked(values: [AlgebraElement; 5]) -> Self {
        debug_assert_eq!(values[0], values[4].sigma_hat());
        SampledField { values }
    }

    /// Constant field; valid exactly for `sigma_hat`-fixed values, e.g. any
    /// element of `O_2`.
    pub fn constant(a: &AlgebraElement) -> Result<Self, ZcrossError> {
        SampledField::new([a.clone(), a.clone(), a.clone(), a.clone(), a.clone()])
    }

    pub fn value(&self, p: GridPoint) -> &AlgebraElement {
        &self.values[p.idx()]
    }

    pub fn add(&self, other: &SampledField) -> SampledField {
        let values = std::array::from_fn(|k| &self.values[k] + &other.values[k]);
        SampledField::new_unchecked(values)
    }

    pub fn mul(&self, other: &SampledField) -> SampledField {
        let values = std::array::from_fn(|k| &self.values[k] * &other.values[k]);
        SampledField::new_unchecked(values)
    }

    pub fn adjoint(&self) -> SampledField {
        let values = std::array::from_fn(|k| self.values[k].adjoint());
        SampledField::new_unchecked(values)
    }

    pub fn neg(&self) -> SampledField {
        SampledField::new_unchecked(std::array::from_fn(|k| -&self.values[k]))
    }

    pub fn is_unitary_pointwise(&self) -> bool {
        let one = AlgebraElement::one();
        GridPoint::ALL.iter().all(|&p| {
            let a = self.value(p);
            a * &a.adjoint() == one && &a.adjoint() * a == one
        })
    }

    pub fn is_scalar_pointwise(&self) -> bool {
        GridPoint::ALL
            .iter()
            .all(|&p| self.value(p).as_scalar().is_some())
    }
}

/// `v : t -> e^{i pi t/2} W`, the image of the canonical unitary.
pub fn field_v() -> SampledField {
    let w = generators::w();
    let values = std::array::from_fn(|k| w.scale(&GridPoint::ALL[k].phase()));
    SampledField::new(values).expect("sigma_hat(i W) = -i W")
}

/// The constant field `S1`.
pub fn field_s1() -> SampledField {
    SampledField::constant(&generators::s1()).expect("O_2 elements are sigma_hat-fixed")
}

/// The constant field `S2`.
pub fn field_s2() -> SampledField {
    SampledField::constant(&generators::s2()).expect("O_2 elements are sigma_hat-fixed")
}

/// Covariance of the sampled generators at one grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovarianceCheck {
    pub point: GridPoint,
    pub v_s1_v_adj_is_s2: bool,
    pub v_s2_v_adj_is_s1: bool,
}

/// Verify `v s1 v* = s2` and `v s2 v* = s1` exactly at every grid point.
pub fn check_covariance() -> Vec<CovarianceCheck> {
    let v = field_v();
    let vs1v = v.mul(&field_s1()).mul(&v.adjoint());
    let vs2v = v.mul(&field_s2()).mul(&v.adjoint());
    let (s1, s2) = (field_s1(), field_s2());
    GridPoint::ALL
        .iter()
        .map(|&p| CovarianceCheck {
            point: p,
            v_s1_v_adj_is_s2: vs1v.value(p) == s2.value(p),
            v_s2_v_adj_is_s1: vs2v.value(p) == s1.value(p),
        })
        .collect()
}

/// The boundary combinations of a field: `f(1) + f(-1)` should be symmetric
/// and `f(1) - f(-1)` antisymmetric, in the `sigma_hat` sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorollaryReport {
    pub sum_symmetric: bool,
    pub difference_antisymmetric: bool,
}

pub fn corollary_form(f: &SampledField) -> CorollaryReport {
    let sum = f.value(GridPoint::PosOne) + f.value(GridPoint::NegOne);
    let diff = f.value(GridPoint::PosOne) - f.value(GridPoint::NegOne);
    CorollaryReport {
        sum_symmetric: sum.sigma_hat() == sum,
        difference_antisymmetric: diff.sigma_hat() == -&diff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generators::*;

    #[test]
    fn phases_are_eighth_roots() {
        assert_eq!(GridPoint::Zero.phase(), Scalar::one());
        assert_eq!(GridPoint::PosOne.phase(), Scalar::i());
        assert_eq!(GridPoint::NegOne.phase(), -Scalar::i());
        for p in GridPoint::ALL {
            assert_eq!(&p.phase() * &p.phase().conj(), Scalar::one());
        }
        assert_eq!(GridPoint::PosOne.square_phase(), -Scalar::one());
    }

    #[test]
    fn constant_fields() {
        assert!(SampledField::constant(&s1()).is_ok());
        assert!(SampledField::constant(&t()).is_ok());
        // W is not sigma_hat-fixed
        assert_eq!(
            SampledField::constant(&w()),
            Err(ZcrossError::BoundaryViolation)
        );
    }

    #[test]
    fn field_v_sample_values() {
        let v = field_v();
        assert_eq!(*v.value(GridPoint::Zero), w());
        assert_eq!(*v.value(GridPoint::PosOne), w().scale(&Scalar::i()));
        assert_eq!(*v.value(GridPoint::NegOne), w().scale(&(-Scalar::i())));
        // boundary is the sigma_hat twist
        assert_eq!(
            v.value(GridPoint::PosOne).sigma_hat(),
            *v.value(GridPoint::NegOne)
        );
    }

    #[test]
    fn v_is_unitary_and_v_squared_is_scalar() {
        let v = field_v();
        assert!(v.is_unitary_pointwise());
        let vv = v.mul(&v);
        assert!(vv.is_scalar_pointwise());
        for p in GridPoint::ALL {
            assert_eq!(vv.value(p).as_scalar().unwrap(), p.square_phase());
        }
        // unitarity: v v* is the constant 1
        let one = SampledField::constant(&AlgebraElement::one()).unwrap();
        assert_eq!(v.mul(&v.adjoint()), one);
    }

    #[test]
    fn covariance_holds_at_every_point() {
        for check in check_covariance() {
            assert!(check.v_s1_v_adj_is_s2, "v s1 v* = s2 at {}", check.point);
            assert!(check.v_s2_v_adj_is_s1, "v s2 v* = s1 at {}", check.point);
        }
    }

    #[test]
    fn corollary_examples() {
        let report = corollary_form(&field_v());
        assert!(report.sum_symmetric); // iW + (-iW) = 0
        assert!(report.difference_antisymmetric); // 2iW

        let report = corollary_form(&field_s1());
        assert!(report.sum_symmetric); // 2 S1 is sigma_hat-fixed
        assert!(report.difference_antisymmetric); // 0

        // field with f(1) = W, f(-1) = -W and zero in between
        let f = SampledField::new([
            -&w(),
            AlgebraElement::zero(),
            AlgebraElement::zero(),
            AlgebraElement::zero(),
            w(),
        ])
        .unwrap();
        let report = corollary_form(&f);
        assert!(report.sum_symmetric); // 0
        assert!(report.difference_antisymmetric); // 2W, sigma_hat-negated
    }

    #[test]
    fn generated_algebra_stays_valid() {
        let v = field_v();
        let s1 = field_s1();
        let s2 = field_s2();
        let word = v
            .mul(&s1)
            .mul(&v.adjoint())
            .add(&s2.mul(&v))
            .mul(&s1.adjoint());
        // reconstruct through the checked constructor: boundary must hold
        let values = std::array::from_fn(|k| word.values[k].clone());
        assert!(SampledField::new(values).is_ok());
    }
}
