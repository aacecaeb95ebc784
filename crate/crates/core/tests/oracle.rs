//! Cross-validation of the symbolic kernel against the exact step-function
//! matrices, on seeded random inputs.

use o2sym::algebra::{generators, AlgebraElement};
use o2sym::numeric::{matrix_of, numeric_equals, odometer_word, IntMatrix, OdometerLetter};
use o2sym::pisometry::BasisIsometry;
use o2sym::sample;
use o2sym::scalar::Scalar;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

fn rng() -> StdRng {
    StdRng::seed_from_u64(0x02c4a17e)
}

/// An equality oracle independent of canonical merging: split every term
/// down to a common source depth and compare the accumulated coefficient
/// maps. At a uniform source depth, distinct keys are linearly independent
/// operators, so map equality is operator equality.
fn expansion_equals(a: &AlgebraElement, b: &AlgebraElement) -> bool {
    let depth = a
        .terms()
        .chain(b.terms())
        .map(|(k, _)| k.source().depth())
        .max()
        .unwrap_or(0);
    refinement_expansion(a, depth) == refinement_expansion(b, depth)
}

fn refinement_expansion(a: &AlgebraElement, depth: u32) -> BTreeMap<BasisIsometry, Scalar> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(BasisIsometry, Scalar)> = a.terms().map(|(k, c)| (*k, c.clone())).collect();
    while let Some((key, coeff)) = stack.pop() {
        if key.source().depth() == depth {
            let entry = out.entry(key).or_insert_with(Scalar::zero);
            *entry = &*entry + &coeff;
            if entry.is_zero() {
                out.remove(&key);
            }
        } else {
            let (l, r) = key.split().unwrap();
            stack.push((l, coeff.clone()));
            stack.push((r, coeff));
        }
    }
    out
}

#[test]
fn star_algebra_axioms_on_random_elements() {
    let mut rng = rng();
    for _ in 0..60 {
        let a = sample::random_element(&mut rng, 3, 4);
        let b = sample::random_element(&mut rng, 3, 4);
        let c = sample::random_element(&mut rng, 3, 4);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        assert_eq!(a.adjoint().adjoint(), a);
        let s = sample::random_scalar(&mut rng);
        assert_eq!(a.scale(&s).adjoint(), a.adjoint().scale(&s.conj()));
    }
}

#[test]
fn canonicalisation_is_confluent_under_scrambles() {
    let mut rng = rng();
    for _ in 0..80 {
        let a = sample::random_element(&mut rng, 3, 5);
        let scrambled = sample::random_scramble(&mut rng, &a, 10);
        assert_eq!(AlgebraElement::from_terms(scrambled), a);
    }
}

#[test]
fn structural_equality_matches_the_matrix_oracle() {
    let mut rng = rng();
    for round in 0..120 {
        let a = sample::random_element(&mut rng, 3, 4);
        let b = sample::random_element(&mut rng, 3, 4);
        let depth = a.max_depth().max(b.max_depth()) + 1;
        let sym = a == b;
        let num = numeric_equals(&a, &b, depth).unwrap();
        assert_eq!(sym, num, "round {round}: symbolic vs numeric disagree");
        // and on pairs built to be equal along different routes, kept
        // shallow so the product depth stays near the comparison depth
        let x = sample::random_element(&mut rng, 2, 3);
        let y = sample::random_element(&mut rng, 2, 3);
        let c = sample::random_element(&mut rng, 2, 3);
        let left = &(&x + &y) * &c;
        let right = &(&x * &c) + &(&y * &c);
        assert_eq!(left, right);
        let depth = left.max_depth().max(right.max_depth()) + 1;
        assert!(numeric_equals(&left, &right, depth).unwrap());
    }
}

#[test]
fn structural_equality_matches_the_expansion_oracle() {
    let mut rng = rng();
    // the identity splits into the two half projections
    let p = |i: u64| {
        AlgebraElement::basis(BasisIsometry::new(
            o2sym::dyadic::DyadicInterval::new(1, i).unwrap(),
            o2sym::dyadic::DyadicInterval::new(1, i).unwrap(),
            o2sym::dyadic::Sign::Pos,
        ))
    };
    assert!(expansion_equals(&AlgebraElement::one(), &(&p(0) + &p(1))));
    for _ in 0..120 {
        let a = sample::random_element(&mut rng, 3, 4);
        let b = sample::random_element(&mut rng, 3, 4);
        assert_eq!(a == b, expansion_equals(&a, &b));
        // equal along two routes
        let c = sample::random_element(&mut rng, 2, 3);
        let lhs = &(&a + &b) * &c;
        let rhs = &(&a * &c) + &(&b * &c);
        assert!(expansion_equals(&lhs, &rhs));
    }
}

#[test]
fn matrix_of_is_a_star_homomorphism() {
    let mut rng = rng();
    for _ in 0..60 {
        let a = sample::random_element(&mut rng, 2, 3);
        let b = sample::random_element(&mut rng, 2, 3);
        let depth = a.max_depth() + b.max_depth() + 1;
        // additivity
        let sum = matrix_of(&(&a + &b), depth).unwrap();
        let parts = matrix_of(&a, depth)
            .unwrap()
            .add(&matrix_of(&b, depth).unwrap())
            .unwrap();
        assert!(sum.equal(&parts));
        // multiplicativity, aligning through the refinement embedding
        let mb = matrix_of(&b, depth).unwrap();
        let ma = matrix_of(&a, mb.dst_depth()).unwrap();
        let prod = ma.compose(&mb).unwrap();
        let direct = matrix_of(&(&a * &b), depth).unwrap();
        assert!(prod.equal(&direct));
        // adjoint goes to conjugate transpose, exactly within each slope
        // class; mixed elements follow by the additivity checked above
        let c = sample::random_single_slope_element(&mut rng, 3, 3);
        // source deep enough that the output space also carries c*
        let src = c.max_depth() + 3;
        let m = matrix_of(&c, src).unwrap();
        let madj = matrix_of(&c.adjoint(), m.dst_depth()).unwrap();
        assert!(m.conj_transpose().equal(&madj));
    }
}

#[test]
fn matrix_of_is_consistent_under_source_refinement() {
    // the matrix at a finer source restricted to the coarse step space is
    // the coarse matrix: M^{d+1} . R = R' . M^d
    let mut rng = rng();
    for _ in 0..40 {
        let a = sample::random_element(&mut rng, 2, 3);
        let d = a.max_depth();
        let coarse = matrix_of(&a, d).unwrap();
        let fine = matrix_of(&a, d + 1).unwrap();
        let refine = refinement(d);
        let lhs = fine.compose(&refine).unwrap();
        assert!(lhs.equal(&coarse));
    }
}

/// The refinement isometry `StepSpace(d) -> StepSpace(d+1)` as an operator
/// (the matrix of the identity of `L^2` between the two bases).
fn refinement(d: u32) -> o2sym::numeric::NumericOperator {
    o2sym::numeric::NumericOperator::identity(d).embed_dst(d + 1)
}

#[test]
fn sigma_is_conjugation_by_the_flip() {
    let mut rng = rng();
    let w = generators::w();
    for _ in 0..60 {
        let a = sample::random_element(&mut rng, 3, 4);
        assert_eq!(a.sigma(), &(&w * &a) * &w);
        assert_eq!(a.sigma().sigma(), a);
        let b = sample::random_element(&mut rng, 3, 4);
        assert_eq!((&a * &b).sigma(), &a.sigma() * &b.sigma());
    }
}

#[test]
fn grading_and_decomposition_on_random_elements() {
    let mut rng = rng();
    let u = generators::u();
    for _ in 0..60 {
        let a = sample::random_element(&mut rng, 3, 4);
        let (fixed, anti) = (a.fixed_part(), a.anti_part());
        assert_eq!(&fixed + &anti, a);
        assert_eq!(fixed.sigma(), fixed);
        assert_eq!(anti.sigma(), -&anti);
        assert!((&anti * &u).is_symmetric());
        // sigma_hat grading: dual-fixed part is exactly the in-O2 part
        let (f, g) = a.to_pair();
        assert!(f.in_o2() && g.in_o2());
        assert_eq!(AlgebraElement::from_pair(&f, &g), a);
        assert_eq!(a.sigma_hat(), AlgebraElement::from_pair(&f, &(-&g)));
    }
}

#[test]
fn serialization_round_trips_on_random_elements() {
    let mut rng = rng();
    for _ in 0..60 {
        let a = sample::random_element(&mut rng, 4, 6);
        let text = a.to_lines();
        let back = AlgebraElement::from_lines(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_lines(), text);
    }
}

#[test]
fn odometer_words_satisfy_cuntz_on_the_exact_prefix() {
    let mut rng = rng();
    use OdometerLetter::*;
    for k in 3..=7u32 {
        let n = 1usize << k;
        let id = IntMatrix::identity(n);
        for _ in 0..10 {
            let len = rng.gen_range(1..k as usize);
            let word: Vec<OdometerLetter> = (0..len)
                .map(|_| match rng.gen_range(0..2) {
                    0 => T1,
                    _ => T2,
                })
                .collect();
            let m = odometer_word(&word, n);
            let adj: Vec<OdometerLetter> = word
                .iter()
                .rev()
                .map(|l| match l {
                    T1 => T1Adj,
                    T2 => T2Adj,
                    T1Adj => T1,
                    T2Adj => T2,
                })
                .collect();
            let madj = odometer_word(&adj, n);
            // isometry word: m* m = 1 on the prefix untouched by truncation
            let gram = madj.mul(&m);
            assert!(gram.eq_on_columns(&id, n >> len));
        }
    }
}
