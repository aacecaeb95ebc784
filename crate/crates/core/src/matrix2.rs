//! `2x2` matrices over [`AlgebraElement`]: the amplification where the flip
//! becomes inner.
//!
//! The generators `T1`, `T2` satisfy the Cuntz relation in `M_2`, conjugation
//! by `Z = diag(1, -1)` swaps them, and the algebra they generate is exactly
//! the set of matrices `[[A1, A2], [sigma(A2), sigma(A1)]]` — which
//! `has_lemma_form` recognises.

use crate::algebra::AlgebraElement;
use crate::scalar::Scalar;
use std::ops::{Add, Mul, Neg, Sub};

/// A row-major `2x2` matrix with [`AlgebraElement`] entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    entries: [AlgebraElement; 4],
}

impl Mat2 {
    pub fn new(
        e11: AlgebraElement,
        e12: AlgebraElement,
        e21: AlgebraElement,
        e22: AlgebraElement,
    ) -> Self {
        Mat2 {
            entries: [e11, e12, e21, e22],
        }
    }

    pub fn diag(a: AlgebraElement, b: AlgebraElement) -> Self {
        Mat2::new(a, AlgebraElement::zero(), AlgebraElement::zero(), b)
    }

    pub fn zero() -> Self {
        Mat2::diag(AlgebraElement::zero(), AlgebraElement::zero())
    }

    pub fn identity() -> Self {
        Mat2::diag(AlgebraElement::one(), AlgebraElement::one())
    }

    /// Entry in row `r`, column `c` (1-indexed).
    pub fn entry(&self, r: usize, c: usize) -> &AlgebraElement {
        assert!((1..=2).contains(&r) && (1..=2).contains(&c));
        &self.entries[(r - 1) * 2 + (c - 1)]
    }

    pub fn scale(&self, s: &Scalar) -> Mat2 {
        let e = &self.entries;
        Mat2::new(e[0].scale(s), e[1].scale(s), e[2].scale(s), e[3].scale(s))
    }

    /// Conjugate transpose: entry adjoints, then transpose.
    pub fn adjoint(&self) -> Mat2 {
        let e = &self.entries;
        Mat2::new(
            e[0].adjoint(),
            e[2].adjoint(),
            e[1].adjoint(),
            e[3].adjoint(),
        )
    }
}

impl Add for &Mat2 {
    type Output = Mat2;
    fn add(self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.entries, &rhs.entries);
        Mat2::new(&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2], &a[3] + &b[3])
    }
}

impl Sub for &Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: &Mat2) -> Mat2 {
        self + &(-rhs)
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        let a = &self.entries;
        Mat2::new(-&a[0], -&a[1], -&a[2], -&a[3])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.entries, &rhs.entries);
        Mat2::new(
            &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
            &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
            &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
            &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
        )
    }
}

/// `T1 = (1/sqrt(2)) [[S1, S2], [S1, S2]]`.
pub fn tmat1() -> Mat2 {
    use crate::algebra::generators::{s1, s2};
    Mat2::new(s1(), s2(), s1(), s2()).scale(&Scalar::inv_sqrt2())
}

/// `T2 = (1/sqrt(2)) [[S1, -S2], [-S1, S2]]`.
pub fn tmat2() -> Mat2 {
    use crate::algebra::generators::{s1, s2};
    Mat2::new(s1(), -&s2(), -&s1(), s2()).scale(&Scalar::inv_sqrt2())
}

/// The flip matrix `Xi = [[0, 1], [1, 0]]`.
pub fn xi() -> Mat2 {
    Mat2::new(
        AlgebraElement::zero(),
        AlgebraElement::one(),
        AlgebraElement::one(),
        AlgebraElement::zero(),
    )
}

/// `Z = diag(1, -1)`, the order-2 unitary implementing the swap of `T1`, `T2`.
pub fn zmat() -> Mat2 {
    Mat2::diag(AlgebraElement::one(), -&AlgebraElement::one())
}

/// `R1 = diag(S1, S2)`, first generator of the `tau_conj` fixed points.
pub fn r1() -> Mat2 {
    use crate::algebra::generators::{s1, s2};
    Mat2::diag(s1(), s2())
}

/// `R2 = diag(S2, S1)`.
pub fn r2() -> Mat2 {
    use crate::algebra::generators::{s1, s2};
    Mat2::diag(s2(), s1())
}

/// `Y = T1 T1* - T2 T2*`; equal to [`xi`].
pub fn ymat() -> Mat2 {
    let (t1, t2) = (tmat1(), tmat2());
    &(&t1 * &t1.adjoint()) - &(&t2 * &t2.adjoint())
}

/// The order-2 automorphism `X -> Z X Z`; swaps `T1` and `T2`, and fixes
/// exactly the diagonals `diag(A, sigma(A))` inside the generated algebra.
pub fn tau_conj(x: &Mat2) -> Mat2 {
    let z = zmat();
    &(&z * x) * &z
}

/// Recognises `[[A1, A2], [sigma(A2), sigma(A1)]]` with all entries in the
/// orientation-preserving part; membership characterises `C*(T1, T2)`.
pub fn has_lemma_form(x: &Mat2) -> bool {
    let all_in_o2 = (1..=2).all(|r| (1..=2).all(|c| x.entry(r, c).in_o2()));
    all_in_o2 && *x.entry(2, 2) == x.entry(1, 1).sigma() && *x.entry(2, 1) == x.entry(1, 2).sigma()
}
