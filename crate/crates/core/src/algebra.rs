//! Elements of the crossed product `O_2 x| Z_2` as canonical linear
//! combinations of basis isometries, together with the flip `sigma`, the
//! dual flip `sigma_hat`, and the named generators.
//!
//! The canonical form is maximally merged: terms are accumulated on exact
//! basis keys, any key that properly contains another present key is split
//! until supports are tree-disjoint, and sibling pairs carrying equal
//! coefficients are replaced by their parent. This makes the representation
//! unique, so operator equality is plain structural equality.

use crate::dyadic::Sign;
use crate::pisometry::BasisIsometry;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed element line {line:?}: {message}")]
    Deserialize { line: String, message: String },
}

/// A finite linear combination of [`BasisIsometry`] keys with nonzero
/// [`Scalar`] coefficients, kept in canonical merged form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisIsometry, Scalar>,
}

fn accumulate(map: &mut BTreeMap<BasisIsometry, Scalar>, key: BasisIsometry, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get() + &coeff;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Split every key that strictly contains another present key, until all
/// supports are tree-disjoint.
fn expand_nested(map: &mut BTreeMap<BasisIsometry, Scalar>) {
    loop {
        let keys: Vec<BasisIsometry> = map.keys().copied().collect();
        let mut ancestor = None;
        'scan: for a in &keys {
            for b in &keys {
                if b.is_descendant_of(a) {
                    ancestor = Some(*a);
                    break 'scan;
                }
            }
        }
        let Some(a) = ancestor else { break };
        let coeff = map.remove(&a).expect("scanned key present");
        let (l, r) = a.split().expect("ancestor splits below existing depth");
        accumulate(map, l, coeff.clone());
        accumulate(map, r, coeff);
    }
}

/// Merge equal-coefficient sibling pairs into their parent, cascading
/// upward. On tree-disjoint input the created parents are always fresh.
fn merge_siblings(map: &mut BTreeMap<BasisIsometry, Scalar>) {
    let mut worklist: Vec<BasisIsometry> = map.keys().copied().collect();
    while let Some(key) = worklist.pop() {
        let Some(coeff) = map.get(&key).cloned() else {
            continue;
        };
        let Some((sibling, parent)) = key.merge_partner() else {
            continue;
        };
        if map.get(&sibling) == Some(&coeff) {
            map.remove(&key);
            map.remove(&sibling);
            debug_assert!(!map.contains_key(&parent));
            map.insert(parent, coeff);
            worklist.push(parent);
        }
    }
}

impl AlgebraElement {
    /// Build an element from arbitrary (key, coefficient) pairs,
    /// canonicalising the result.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (BasisIsometry, Scalar)>,
    {
        let mut map = BTreeMap::new();
        for (key, coeff) in terms {
            accumulate(&mut map, key, coeff);
        }
        expand_nested(&mut map);
        merge_siblings(&mut map);
        AlgebraElement { terms: map }
    }

    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        AlgebraElement::scalar(Scalar::one())
    }

    /// The scalar multiple `s * 1`.
    pub fn scalar(s: Scalar) -> Self {
        AlgebraElement::from_terms([(BasisIsometry::identity(), s)])
    }

    pub fn basis(key: BasisIsometry) -> Self {
        AlgebraElement::from_terms([(key, Scalar::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIsometry, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Largest interval depth appearing in any term.
    pub fn max_depth(&self) -> u32 {
        self.terms.keys().map(|k| k.max_depth()).max().unwrap_or(0)
    }

    /// If the element is `s * 1`, return `s`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            let (key, coeff) = self.terms.iter().next().unwrap();
            if *key == BasisIsometry::identity() {
                return Some(coeff.clone());
            }
        }
        None
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        AlgebraElement::from_terms(self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    /// Bilinear extension of the semigroup product.
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut map = BTreeMap::new();
        for (kx, cx) in &self.terms {
            for (ky, cy) in &other.terms {
                if let Some(key) = kx.compose(ky) {
                    accumulate(&mut map, key, cx * cy);
                }
            }
        }
        expand_nested(&mut map);
        merge_siblings(&mut map);
        AlgebraElement { terms: map }
    }

    /// Antilinear anti-automorphism: keys swap intervals, coefficients are
    /// conjugated.
    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(k, c)| (k.adjoint(), c.conj())))
    }

    /// The flip automorphism, implemented structurally as reflection of both
    /// intervals; agrees with `Ad W`.
    pub fn sigma(&self) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(k, c)| {
            (
                BasisIsometry::new(k.target().reflect(), k.source().reflect(), k.orientation()),
                c.clone(),
            )
        }))
    }

    /// The dual flip: fixes the orientation-preserving part, negates the
    /// orientation-reversing part.
    pub fn sigma_hat(&self) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(k, c)| {
            let c = match k.orientation() {
                Sign::Pos => c.clone(),
                Sign::Neg => -c,
            };
            (*k, c)
        }))
    }

    /// `(a + sigma(a)) / 2`, the sigma-fixed component.
    pub fn fixed_part(&self) -> AlgebraElement {
        (self + &self.sigma()).scale(&Scalar::from_ratio(1, 2))
    }

    /// `(a - sigma(a)) / 2`; satisfies `sigma(x) = -x`.
    pub fn anti_part(&self) -> AlgebraElement {
        (self - &self.sigma()).scale(&Scalar::from_ratio(1, 2))
    }

    /// Write `a = f + g W` with `f`, `g` in the orientation-preserving part,
    /// via `V-(I, J) = V+(I, -J) W`.
    pub fn to_pair(&self) -> (AlgebraElement, AlgebraElement) {
        let mut f = Vec::new();
        let mut g = Vec::new();
        for (k, c) in &self.terms {
            match k.orientation() {
                Sign::Pos => f.push((*k, c.clone())),
                Sign::Neg => g.push((
                    BasisIsometry::new(k.target(), k.source().reflect(), Sign::Pos),
                    c.clone(),
                )),
            }
        }
        (AlgebraElement::from_terms(f), AlgebraElement::from_terms(g))
    }

    /// Inverse of [`to_pair`](Self::to_pair): `f + g W`.
    pub fn from_pair(f: &AlgebraElement, g: &AlgebraElement) -> AlgebraElement {
        f + &g.mul(&generators::w())
    }

    /// True iff every term is orientation-preserving.
    pub fn in_o2(&self) -> bool {
        self.terms.keys().all(|k| k.orientation() == Sign::Pos)
    }

    pub fn is_symmetric(&self) -> bool {
        self.sigma() == *self
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.sigma() == -self
    }

    /// Line-based serialisation: one `<scalar> <key>` pair per line, terms
    /// in canonical order; the zero element is the single line `0`.
    pub fn to_lines(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(k, c)| format!("{c} {k}"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn from_lines(text: &str) -> Result<AlgebraElement, AlgebraError> {
        let mut terms = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line == "0" {
                continue;
            }
            let (scalar_text, key_text) =
                line.split_once(' ')
                    .ok_or_else(|| AlgebraError::Deserialize {
                        line: line.to_string(),
                        message: "expected '<scalar> <key>'".to_string(),
                    })?;
            let coeff: Scalar = scalar_text.parse().map_err(|e| AlgebraError::Deserialize {
                line: line.to_string(),
                message: format!("bad scalar: {e}"),
            })?;
            let key: BasisIsometry =
                key_text
                    .trim()
                    .parse()
                    .map_err(|e: String| AlgebraError::Deserialize {
                        line: line.to_string(),
                        message: e,
                    })?;
            terms.push((key, coeff));
        }
        Ok(AlgebraElement::from_terms(terms))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_lines())
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(k, c)| (*k, c.clone())),
        )
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(k, c)| (*k, -c)))
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::mul(self, rhs)
    }
}

/// The named generators: the canonical Cuntz pair on `L^2([-1,1])`, the flip
/// unitary, and the derived fixed-point and crossed-product generators.
pub mod generators {
    use super::*;
    use crate::dyadic::DyadicInterval;

    fn interval(depth: u32, index: u64) -> DyadicInterval {
        DyadicInterval::new(depth, index).expect("static interval")
    }

    /// `S1 = V+([0,1], [-1,1])`, i.e. `S1 f (t) = sqrt(2) f(2t - 1)`.
    pub fn s1() -> AlgebraElement {
        AlgebraElement::basis(BasisIsometry::new(
            interval(1, 1),
            DyadicInterval::full(),
            Sign::Pos,
        ))
    }

    /// `S2 = V+([-1,0], [-1,1])`, i.e. `S2 f (t) = sqrt(2) f(2t + 1)`.
    pub fn s2() -> AlgebraElement {
        AlgebraElement::basis(BasisIsometry::new(
            interval(1, 0),
            DyadicInterval::full(),
            Sign::Pos,
        ))
    }

    /// The flip unitary `W f (t) = f(-t)`; `W = W* = W^{-1}` and `W S1 W = S2`.
    pub fn w() -> AlgebraElement {
        AlgebraElement::basis(BasisIsometry::new(
            DyadicInterval::full(),
            DyadicInterval::full(),
            Sign::Neg,
        ))
    }

    /// `U = S1 S1* - S2 S2* = P_[0,1] - P_[-1,0]`, the order-2 unitary with
    /// `sigma(U) = -U`.
    pub fn u() -> AlgebraElement {
        let s1 = s1();
        let s2 = s2();
        &(&s1 * &s1.adjoint()) - &(&s2 * &s2.adjoint())
    }

    /// `T = (S1 + S2)/sqrt(2)`, first generator of the fixed-point algebra.
    pub fn t() -> AlgebraElement {
        (&s1() + &s2()).scale(&Scalar::inv_sqrt2())
    }

    /// `V = U T U`, second generator of the fixed-point algebra.
    pub fn v() -> AlgebraElement {
        let u = u();
        &(&u * &t()) * &u
    }

    /// `B1 = (S1 + W S1)/sqrt(2)`, first generator of the crossed product.
    pub fn b1() -> AlgebraElement {
        (&s1() + &(&w() * &s1())).scale(&Scalar::inv_sqrt2())
    }

    /// `B2 = (S1 - W S1)/sqrt(2)`, second generator of the crossed product.
    pub fn b2() -> AlgebraElement {
        (&s1() - &(&w() * &s1())).scale(&Scalar::inv_sqrt2())
    }
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;
    use crate::dyadic::DyadicInterval;

    fn d(depth: u32, index: u64) -> DyadicInterval {
        DyadicInterval::new(depth, index).unwrap()
    }

    fn proj(iv: DyadicInterval) -> AlgebraElement {
        AlgebraElement::basis(BasisIsometry::new(iv, iv, Sign::Pos))
    }

    #[test]
    fn cuntz_relation() {
        let range_sum = &(&s1() * &s1().adjoint()) + &(&s2() * &s2().adjoint());
        assert_eq!(range_sum, AlgebraElement::one());
        assert_eq!(&s1().adjoint() * &s1(), AlgebraElement::one());
        assert_eq!(&s2().adjoint() * &s2(), AlgebraElement::one());
        assert!((&s1().adjoint() * &s2()).is_zero());
    }

    #[test]
    fn additive_inverse() {
        let a = &t() + &w();
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn t_has_two_terms_with_coefficient_inv_sqrt2() {
        let t = t();
        assert_eq!(t.term_count(), 2);
        for (_, c) in t.terms() {
            assert_eq!(*c, Scalar::inv_sqrt2());
        }
    }

    #[test]
    fn u_is_order_two_unitary() {
        let u = u();
        assert_eq!(u.adjoint(), u);
        assert_eq!(&u * &u, AlgebraElement::one());
        assert_eq!(u.sigma(), -&u);
        // U = P_[0,1] - P_[-1,0]
        assert_eq!(u, &proj(d(1, 1)) - &proj(d(1, 0)));
    }

    #[test]
    fn flip_conjugation() {
        let lhs = &w() * &(&s1() * &w());
        assert_eq!(lhs, s2());
        assert_eq!(&w() * &w(), AlgebraElement::one());
    }

    #[test]
    fn fixed_point_generators_satisfy_cuntz() {
        let (t, v) = (t(), v());
        assert_eq!(&t.adjoint() * &t, AlgebraElement::one());
        assert_eq!(&v.adjoint() * &v, AlgebraElement::one());
        let range_sum = &(&t * &t.adjoint()) + &(&v * &v.adjoint());
        assert_eq!(range_sum, AlgebraElement::one());
        // V = (1/sqrt(2)) (S1 - S2) U
        let alt = (&(&s1() - &s2()) * &u()).scale(&Scalar::inv_sqrt2());
        assert_eq!(v, alt);
        assert!(t.is_symmetric());
        assert!(v.is_symmetric());
    }

    #[test]
    fn adjoint_is_antilinear() {
        let i_one = AlgebraElement::scalar(Scalar::i());
        assert_eq!(i_one.adjoint(), AlgebraElement::scalar(-Scalar::i()));
        let (a, b) = (&t() + &w(), &s1() - &u());
        assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(s1().sigma(), s2());
        assert_eq!(u().sigma(), -&u());
        assert_eq!(t().sigma(), t());
        assert_eq!(v().sigma(), v());
    }

    #[test]
    fn sigma_is_ad_w() {
        for a in [s1(), t(), &s1() * &w(), &u() + &b1()] {
            let conj = &w() * &(&a * &w());
            assert_eq!(a.sigma(), conj);
        }
    }

    #[test]
    fn sigma_hat_examples() {
        assert_eq!(w().sigma_hat(), -&w());
        assert_eq!(s1().sigma_hat(), s1());
        let s1w = &s1() * &w();
        assert_eq!(s1w.sigma_hat(), -&s1w);
        assert_eq!(b1().sigma_hat(), b2());
    }

    #[test]
    fn grading_split() {
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(s1().fixed_part(), (&s1() + &s2()).scale(&half));
        assert_eq!(u().anti_part(), u());
        assert!(u().fixed_part().is_zero());
        let a = &s1() + &(&w() * &t());
        assert_eq!(&a.fixed_part() + &a.anti_part(), a);
        assert!((&a.anti_part() * &u()).is_symmetric());
    }

    #[test]
    fn to_pair_examples() {
        let (f, g) = w().to_pair();
        assert!(f.is_zero());
        assert_eq!(g, AlgebraElement::one());

        let a = &s1() + &(&s2() * &w());
        let (f, g) = a.to_pair();
        assert_eq!(f, s1());
        assert_eq!(g, s2());

        let ws1 = &w() * &s1();
        let (f, g) = ws1.to_pair();
        assert!(f.is_zero());
        assert_eq!(g, s2());

        for a in [b1(), &u() + &(&t() * &w()), w()] {
            let (f, g) = a.to_pair();
            assert!(f.in_o2() && g.in_o2());
            assert_eq!(AlgebraElement::from_pair(&f, &g), a);
        }
    }

    #[test]
    fn membership_predicates() {
        assert!(!w().in_o2());
        assert!(t().in_o2());
        assert!(t().is_symmetric());
        assert!(u().is_antisymmetric());
    }

    #[test]
    fn crossed_product_generators() {
        let (b1, b2) = (b1(), b2());
        assert_eq!(&b1.adjoint() * &b1, AlgebraElement::one());
        assert_eq!(&b2.adjoint() * &b2, AlgebraElement::one());
        let range_sum = &(&b1 * &b1.adjoint()) + &(&b2 * &b2.adjoint());
        assert_eq!(range_sum, AlgebraElement::one());
        // B1 B1* - B2 B2* = W
        let diff = &(&b1 * &b1.adjoint()) - &(&b2 * &b2.adjoint());
        assert_eq!(diff, w());
        // and S1 S1* W + (S1 S1* W)* = W
        let p_w = &(&s1() * &s1().adjoint()) * &w();
        assert_eq!(&p_w + &p_w.adjoint(), w());
    }

    #[test]
    fn rejected_b1_transcription_is_not_an_isometry() {
        // (S1 + S1 W)/sqrt(2), with W on the right, has B*B = 1 + W.
        let wrong = (&s1() + &(&s1() * &w())).scale(&Scalar::inv_sqrt2());
        let gram = &wrong.adjoint() * &wrong;
        assert_eq!(gram, &AlgebraElement::one() + &w());
        assert_ne!(gram, AlgebraElement::one());
    }

    #[test]
    fn split_sum_is_canonicalised() {
        let sum = &proj(d(1, 0)) + &proj(d(1, 1));
        assert_eq!(sum, AlgebraElement::one());
    }

    #[test]
    fn nested_keys_are_expanded() {
        // 1 + P_[0,1] and 2 P_[0,1] + P_[-1,0] are the same operator and
        // must canonicalise identically.
        let a = &AlgebraElement::one() + &proj(d(1, 1));
        let b = &proj(d(1, 1)).scale(&Scalar::from_integer(2)) + &proj(d(1, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn grading_by_orientation_under_mul() {
        let plus = t();
        let minus = &t() * &w();
        assert!((&plus * &plus).in_o2());
        assert!(!(&plus * &minus).in_o2());
        // product of two orientation-reversing elements lands back in O_2
        assert!((&minus * &minus).in_o2());
    }

    #[test]
    fn serialization_round_trip() {
        for a in [
            AlgebraElement::zero(),
            AlgebraElement::one(),
            t(),
            v(),
            &b1() - &AlgebraElement::scalar(Scalar::i()),
        ] {
            let text = a.to_lines();
            let back = AlgebraElement::from_lines(&text).unwrap();
            assert_eq!(back, a);
            assert_eq!(back.to_lines(), text);
        }
    }

    #[test]
    fn deserialize_rejects_garbage() {
        assert!(AlgebraElement::from_lines("1 Vx(D(0,0),D(0,0))").is_err());
        assert!(AlgebraElement::from_lines("notascalar V+(D(0,0),D(0,0))").is_err());
    }
}
