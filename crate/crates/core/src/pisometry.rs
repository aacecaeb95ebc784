//! The multiplicative basis `V±(I, J)`: one partial isometry per pair of
//! standard intervals and orientation.
//!
//! `V(I, J) = P_I pi_phi P_J` where `phi` is the unique affine map of the
//! given sign with `phi(I) = J` and `pi_phi f = |slope|^(1/2) * (f o phi)`.
//! The initial space is `L^2(J)`, the final space `L^2(I)`, and the
//! `|slope|^(1/2)` normalisation is part of the basis element itself, never
//! a stored coefficient. Together with 0 these form a semigroup; the
//! orientation-reversing elements carry the flip unitary `W`.

use crate::dyadic::{DyadicError, DyadicInterval, Sign, SignedAffineMap};
use std::fmt;
use std::str::FromStr;

/// A basis partial isometry `V^eps(I, J)` with target `I`, source `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIsometry {
    orientation: Sign,
    target: DyadicInterval,
    source: DyadicInterval,
}

impl BasisIsometry {
    pub fn new(target: DyadicInterval, source: DyadicInterval, orientation: Sign) -> Self {
        BasisIsometry {
            orientation,
            target,
            source,
        }
    }

    /// The identity `V+([-1,1], [-1,1])`.
    pub fn identity() -> Self {
        BasisIsometry::new(DyadicInterval::full(), DyadicInterval::full(), Sign::Pos)
    }

    pub fn target(&self) -> DyadicInterval {
        self.target
    }

    pub fn source(&self) -> DyadicInterval {
        self.source
    }

    pub fn orientation(&self) -> Sign {
        self.orientation
    }

    /// The defining affine map `phi(target) = source`.
    pub fn map(&self) -> SignedAffineMap {
        SignedAffineMap::unique_map(&self.target, &self.source, self.orientation)
    }

    /// `target depth - source depth`; the gauge degree of the element, and
    /// the base-2 logarithm of the defining map's slope magnitude.
    pub fn slope_exponent(&self) -> i64 {
        self.target.depth() as i64 - self.source.depth() as i64
    }

    pub fn max_depth(&self) -> u32 {
        self.target.depth().max(self.source.depth())
    }

    /// Semigroup product; `None` is the zero of the semigroup.
    ///
    /// With `M = source(x) ∩ target(y)` the product is
    /// `V(phi_x^{-1}(M), phi_y(M))` with orientations multiplied, or zero
    /// when `M` has empty interior.
    pub fn compose(&self, other: &BasisIsometry) -> Option<BasisIsometry> {
        let m = self.source.intersect(&other.target)?;
        let target = self
            .map()
            .preimage(&m)
            .expect("intersection pulls back to a standard interval");
        let source = other
            .map()
            .image(&m)
            .expect("intersection pushes forward to a standard interval");
        Some(BasisIsometry::new(
            target,
            source,
            self.orientation * other.orientation,
        ))
    }

    /// `V(I,J)* = V(J,I)`; the inverse of a decreasing map is decreasing, so
    /// the orientation is preserved.
    pub fn adjoint(&self) -> BasisIsometry {
        BasisIsometry::new(self.source, self.target, self.orientation)
    }

    pub fn is_self_adjoint_projection(&self) -> bool {
        self.orientation == Sign::Pos && self.target == self.source
    }

    /// Final projection `x x* = V+(I, I)`.
    pub fn final_projection(&self) -> BasisIsometry {
        BasisIsometry::new(self.target, self.target, Sign::Pos)
    }

    /// Initial projection `x* x = V+(J, J)`.
    pub fn initial_projection(&self) -> BasisIsometry {
        BasisIsometry::new(self.source, self.source, Sign::Pos)
    }

    /// Halve the source projection: the two returned elements sum to `self`.
    ///
    /// Ordered by target half. An increasing map pairs left with left; a
    /// decreasing map sends the left half of the target onto the right half
    /// of the source.
    pub fn split(&self) -> Result<(BasisIsometry, BasisIsometry), DyadicError> {
        let (tl, tr) = self.target.children()?;
        let (sl, sr) = self.source.children()?;
        Ok(match self.orientation {
            Sign::Pos => (
                BasisIsometry::new(tl, sl, Sign::Pos),
                BasisIsometry::new(tr, sr, Sign::Pos),
            ),
            Sign::Neg => (
                BasisIsometry::new(tl, sr, Sign::Neg),
                BasisIsometry::new(tr, sl, Sign::Neg),
            ),
        })
    }

    /// If `self` is one of the two split halves of some parent, returns
    /// `(sibling, parent)`; merging requires the sibling to carry the same
    /// coefficient.
    pub fn merge_partner(&self) -> Option<(BasisIsometry, BasisIsometry)> {
        let (tp, th) = self.target.parent()?;
        let (sp, sh) = self.source.parent()?;
        let compatible = match self.orientation {
            Sign::Pos => th == sh,
            Sign::Neg => th != sh,
        };
        if !compatible {
            return None;
        }
        let sibling = BasisIsometry::new(
            self.target.sibling().unwrap(),
            self.source.sibling().unwrap(),
            self.orientation,
        );
        let parent = BasisIsometry::new(tp, sp, self.orientation);
        Some((sibling, parent))
    }

    /// Is `self` a strict descendant of `other` in the split tree (so that
    /// `other` expands to a sum containing `self`)?
    pub fn is_descendant_of(&self, other: &BasisIsometry) -> bool {
        if self.orientation != other.orientation {
            return false;
        }
        let dt = self.target.depth() as i64 - other.target.depth() as i64;
        let ds = self.source.depth() as i64 - other.source.depth() as i64;
        if dt != ds || dt <= 0 {
            return false;
        }
        if !other.target.contains(&self.target) || !other.source.contains(&self.source) {
            return false;
        }
        let delta = dt as u32;
        let rel_t = self.target.index() - (other.target.index() << delta);
        let rel_s = self.source.index() - (other.source.index() << delta);
        match self.orientation {
            Sign::Pos => rel_t == rel_s,
            // a decreasing map complements the path bit at every level
            Sign::Neg => rel_t == ((1u64 << delta) - 1) - rel_s,
        }
    }
}

impl fmt::Display for BasisIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}({},{})", self.orientation, self.target, self.source)
    }
}

fn parse_number(s: &str) -> Result<(u64, &str), String> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        return Err(format!("expected a number in {s:?}"));
    }
    let n = s[..end]
        .parse::<u64>()
        .map_err(|e| format!("bad number in {s:?}: {e}"))?;
    Ok((n, &s[end..]))
}

fn parse_interval(s: &str) -> Result<(DyadicInterval, &str), String> {
    let rest = s
        .strip_prefix("D(")
        .ok_or_else(|| format!("expected 'D(' in {s:?}"))?;
    let (depth, rest) = parse_number(rest)?;
    let rest = rest
        .strip_prefix(',')
        .ok_or_else(|| format!("expected ',' in {s:?}"))?;
    let (index, rest) = parse_number(rest)?;
    let rest = rest
        .strip_prefix(')')
        .ok_or_else(|| format!("expected ')' in {s:?}"))?;
    let depth = u32::try_from(depth).map_err(|_| format!("depth too large in {s:?}"))?;
    let iv = DyadicInterval::new(depth, index).map_err(|e| e.to_string())?;
    Ok((iv, rest))
}

impl FromStr for BasisIsometry {
    type Err = String;

    /// Parses the compact textual form `V+(D(d,j),D(d',j'))` / `V-(...)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s
            .strip_prefix('V')
            .ok_or_else(|| format!("expected 'V' in {s:?}"))?;
        let (orientation, rest) = match rest.as_bytes().first() {
            Some(b'+') => (Sign::Pos, &rest[1..]),
            Some(b'-') => (Sign::Neg, &rest[1..]),
            _ => return Err(format!("expected '+' or '-' after 'V' in {s:?}")),
        };
        let rest = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected '(' in {s:?}"))?;
        let (target, rest) = parse_interval(rest)?;
        let rest = rest
            .strip_prefix(',')
            .ok_or_else(|| format!("expected ',' in {s:?}"))?;
        let (source, rest) = parse_interval(rest)?;
        let rest = rest
            .strip_prefix(')')
            .ok_or_else(|| format!("expected ')' in {s:?}"))?;
        if !rest.is_empty() {
            return Err(format!("trailing input {rest:?}"));
        }
        Ok(BasisIsometry::new(target, source, orientation))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(depth: u32, index: u64) -> DyadicInterval {
        DyadicInterval::new(depth, index).unwrap()
    }

    fn vp(t: DyadicInterval, s: DyadicInterval) -> BasisIsometry {
        BasisIsometry::new(t, s, Sign::Pos)
    }

    fn vm(t: DyadicInterval, s: DyadicInterval) -> BasisIsometry {
        BasisIsometry::new(t, s, Sign::Neg)
    }

    // S1 = V+([0,1], [-1,1]), S2 = V+([-1,0], [-1,1]), W = V-([-1,1],[-1,1])
    fn s1() -> BasisIsometry {
        vp(d(1, 1), d(0, 0))
    }
    fn s2() -> BasisIsometry {
        vp(d(1, 0), d(0, 0))
    }
    fn w() -> BasisIsometry {
        vm(d(0, 0), d(0, 0))
    }

    #[test]
    fn isometry_relation() {
        // S1* S1 = 1
        assert_eq!(
            s1().adjoint().compose(&s1()),
            Some(BasisIsometry::identity())
        );
        // S1* S2 = 0
        assert_eq!(s1().adjoint().compose(&s2()), None);
        // S1 S1* = P_[0,1]
        assert_eq!(s1().compose(&s1().adjoint()), Some(vp(d(1, 1), d(1, 1))));
    }

    #[test]
    fn projections_are_idempotent() {
        let p = vp(d(1, 1), d(1, 1));
        assert_eq!(p.compose(&p), Some(p));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(s1().adjoint(), vp(d(0, 0), d(1, 1)));
        assert_eq!(w().adjoint(), w());
        let x = vm(d(2, 1), d(1, 0));
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn flip_conjugation_sends_s1_to_s2() {
        // W S1 W = S2 in the semigroup
        let ws1 = w().compose(&s1()).unwrap();
        assert_eq!(ws1, vm(d(1, 0), d(0, 0)));
        assert_eq!(ws1.compose(&w()), Some(s2()));
    }

    #[test]
    fn split_examples() {
        let (l, r) = BasisIsometry::identity().split().unwrap();
        assert_eq!(l, vp(d(1, 0), d(1, 0)));
        assert_eq!(r, vp(d(1, 1), d(1, 1)));

        let (l, r) = w().split().unwrap();
        assert_eq!(l, vm(d(1, 0), d(1, 1)));
        assert_eq!(r, vm(d(1, 1), d(1, 0)));

        let (l, r) = s1().split().unwrap();
        assert_eq!(l, vp(d(2, 2), d(1, 0)));
        assert_eq!(r, vp(d(2, 3), d(1, 1)));
    }

    #[test]
    fn merge_partner_round_trips_split() {
        for x in [
            s1(),
            s2(),
            w(),
            vm(d(2, 1), d(1, 0)),
            BasisIsometry::identity(),
        ] {
            let (l, r) = x.split().unwrap();
            let (sib, parent) = l.merge_partner().unwrap();
            assert_eq!(sib, r);
            assert_eq!(parent, x);
            let (sib, parent) = r.merge_partner().unwrap();
            assert_eq!(sib, l);
            assert_eq!(parent, x);
        }
    }

    #[test]
    fn mixed_parity_has_no_partner() {
        // V+(D(1,1), D(1,0)) pairs a right target half with a left source
        // half, which no increasing split produces.
        assert!(vp(d(1, 1), d(1, 0)).merge_partner().is_none());
        // and S1 has a depth-0 source
        assert!(s1().merge_partner().is_none());
    }

    #[test]
    fn descendant_detection() {
        let (l, _) = w().split().unwrap();
        assert!(l.is_descendant_of(&w()));
        let (ll, lr) = l.split().unwrap();
        assert!(ll.is_descendant_of(&w()));
        assert!(lr.is_descendant_of(&w()));
        assert!(!w().is_descendant_of(&w()));
        assert!(!s1().is_descendant_of(&s2()));
        // nested intervals but mismatched pairing is not a descendant
        assert!(!vp(d(1, 1), d(1, 0)).is_descendant_of(&BasisIsometry::identity()));
    }

    #[test]
    fn textual_form_round_trips() {
        for x in [s1(), s2(), w(), vm(d(2, 1), d(1, 0)), vp(d(3, 5), d(2, 2))] {
            let text = x.to_string();
            let back: BasisIsometry = text.parse().unwrap();
            assert_eq!(back, x, "round-trip of {text}");
        }
        assert!("V+(D(1,2),D(0,0))".parse::<BasisIsometry>().is_err());
        assert!("V*(D(1,1),D(0,0))".parse::<BasisIsometry>().is_err());
    }

    #[test]
    fn final_and_initial_projections() {
        let x = vm(d(2, 1), d(1, 0));
        assert_eq!(x.compose(&x.adjoint()), Some(x.final_projection()));
        assert_eq!(x.adjoint().compose(&x), Some(x.initial_projection()));
    }
}
