//! Random generation of scalars, keys and elements for randomized law
//! checking. Callers seed the generator themselves, so test runs stay
//! reproducible.

use crate::algebra::AlgebraElement;
use crate::dyadic::{DyadicInterval, Sign};
use crate::pisometry::BasisIsometry;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// A small scalar with components `p/q`, `p` in `-3..=3`, `q` in `1..=3`.
pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    let mut draw = || {
        let p = rng.gen_range(-3i64..=3);
        let q = rng.gen_range(1i64..=3);
        BigRational::new(BigInt::from(p), BigInt::from(q))
    };
    Scalar::new(draw(), draw(), draw(), draw())
}

pub fn random_nonzero_scalar(rng: &mut impl Rng) -> Scalar {
    loop {
        let s = random_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_interval(rng: &mut impl Rng, max_depth: u32) -> DyadicInterval {
    let depth = rng.gen_range(0..=max_depth);
    let index = rng.gen_range(0..(1u64 << depth));
    DyadicInterval::new(depth, index).expect("index drawn in range")
}

pub fn random_sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

pub fn random_key(rng: &mut impl Rng, max_depth: u32) -> BasisIsometry {
    BasisIsometry::new(
        random_interval(rng, max_depth),
        random_interval(rng, max_depth),
        random_sign(rng),
    )
}

/// A random canonical element with every interval depth `<= max_depth`.
pub fn random_element(rng: &mut impl Rng, max_depth: u32, max_terms: usize) -> AlgebraElement {
    let n = rng.gen_range(0..=max_terms);
    AlgebraElement::from_terms((0..n).map(|_| (random_key(rng, max_depth), random_scalar(rng))))
}

/// A random element whose terms all share one slope exponent, i.e. one
/// gauge degree. The conjugate-transpose form of the matrix oracle is exact
/// term class by term class; mixtures follow by additivity.
pub fn random_single_slope_element(
    rng: &mut impl Rng,
    max_depth: u32,
    max_terms: usize,
) -> AlgebraElement {
    let slope = rng.gen_range(-(max_depth as i64)..=max_depth as i64);
    let n = rng.gen_range(0..=max_terms);
    AlgebraElement::from_terms((0..n).map(|_| {
        let lo = 0i64.max(-slope);
        let hi = (max_depth as i64).min(max_depth as i64 - slope);
        let src_depth = rng.gen_range(lo..=hi) as u32;
        let dst_depth = (src_depth as i64 + slope) as u32;
        let source = DyadicInterval::new(src_depth, rng.gen_range(0..(1u64 << src_depth)))
            .expect("index drawn in range");
        let target = DyadicInterval::new(dst_depth, rng.gen_range(0..(1u64 << dst_depth)))
            .expect("index drawn in range");
        (
            BasisIsometry::new(target, source, random_sign(rng)),
            random_scalar(rng),
        )
    }))
}

/// A non-canonical term list representing the same operator as `a`: random
/// terms are repeatedly split into their two halves. Feeding the result back
/// through `AlgebraElement::from_terms` must reproduce `a`.
pub fn random_scramble(
    rng: &mut impl Rng,
    a: &AlgebraElement,
    rounds: usize,
) -> Vec<(BasisIsometry, Scalar)> {
    let mut terms: Vec<(BasisIsometry, Scalar)> = a.terms().map(|(k, c)| (*k, c.clone())).collect();
    for _ in 0..rounds {
        if terms.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..terms.len());
        let (key, coeff) = terms[pick].clone();
        if key.max_depth() >= crate::DEFAULT_DEPTH_CEILING {
            continue;
        }
        let (l, r) = key.split().expect("depth below ceiling splits");
        terms.swap_remove(pick);
        terms.push((l, coeff.clone()));
        terms.push((r, coeff));
    }
    terms
}

/// A random word in the given elements: each step multiplies by one of
/// `gens` or its adjoint.
pub fn random_word(rng: &mut impl Rng, gens: &[AlgebraElement], len: usize) -> AlgebraElement {
    let mut acc = AlgebraElement::one();
    for _ in 0..len {
        let pick = &gens[rng.gen_range(0..gens.len())];
        let factor = if rng.gen_bool(0.5) {
            pick.clone()
        } else {
            pick.adjoint()
        };
        acc = &acc * &factor;
    }
    acc
}
