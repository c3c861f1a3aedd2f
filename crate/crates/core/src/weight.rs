//! SU(3) weights in Dynkin labels.
//!
//! Two labelings are in use. Unshifted labels `(p, q)` are the usual
//! highest-weight Dynkin labels, so the trivial representation is `(0, 0)`.
//! Shifted labels `{p, q}` add the Weyl vector, `{p, q} = (p - 1, q - 1)`,
//! which puts the affine Weyl walls at `p ≡ 0`, `q ≡ 0`, `p + q ≡ 0 (mod N)`.

use std::fmt;

use crate::error::{Error, Result};

/// A point of the SU(3) weight lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub p: i64,
    pub q: i64,
    /// Whether `(p, q)` are ρ-shifted labels.
    pub shifted: bool,
}

impl Weight {
    pub const fn unshifted(p: i64, q: i64) -> Self {
        Weight { p, q, shifted: false }
    }

    pub const fn shifted(p: i64, q: i64) -> Self {
        Weight { p, q, shifted: true }
    }

    /// The same weight in ρ-shifted labels.
    pub fn to_shifted(self) -> Self {
        if self.shifted {
            self
        } else {
            Weight::shifted(self.p + 1, self.q + 1)
        }
    }

    /// The same weight in ordinary Dynkin labels.
    pub fn to_unshifted(self) -> Self {
        if self.shifted {
            Weight::unshifted(self.p - 1, self.q - 1)
        } else {
            self
        }
    }

    /// Z₃ grading `(p - q) mod 3`. The ρ-shift does not change it.
    pub fn triality(self) -> u8 {
        triality(self.p, self.q)
    }

    /// Membership in the level-`k` alcove (unshifted `p, q ≥ 0`, `p + q ≤ k`).
    pub fn in_alcove(self, k: u32) -> bool {
        let w = self.to_unshifted();
        w.p >= 0 && w.q >= 0 && w.p + w.q <= i64::from(k)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shifted {
            write!(f, "{{{},{}}}", self.p, self.q)
        } else {
            write!(f, "({},{})", self.p, self.q)
        }
    }
}

/// Z₃ grading of a pair of Dynkin labels.
pub fn triality(p: i64, q: i64) -> u8 {
    (p - q).rem_euclid(3) as u8
}

/// Unshifted weights of the level-`k` alcove, ordered by total degree
/// `p + q` and then by ascending `q`.
pub fn alcove(k: u32) -> Vec<Weight> {
    let k = i64::from(k);
    (0..=k)
        .flat_map(|n| (0..=n).map(move |q| Weight::unshifted(n - q, q)))
        .collect()
}

/// Number of weights in the level-`k` alcove, `(k+1)(k+2)/2`.
pub fn alcove_size(k: u32) -> usize {
    let k = k as usize;
    (k + 1) * (k + 2) / 2
}

/// Position of an unshifted alcove weight in [`alcove`] order.
pub fn alcove_index(p: i64, q: i64) -> usize {
    let n = (p + q) as usize;
    n * (n + 1) / 2 + q as usize
}

/// Irreducible constituents of `w ⊗ (1,0)` at level `k`.
///
/// The classical rule gives `(p+1,q)`, `(p-1,q+1)` and `(p,q-1)`; labels that
/// go negative or leave the alcove are dropped.
pub fn fundamental_action(w: Weight, k: u32) -> Result<Vec<Weight>> {
    let w = w.to_unshifted();
    if !w.in_alcove(k) {
        return Err(Error::domain(format!("weight {w} is outside the level-{k} alcove")));
    }
    Ok([(w.p + 1, w.q), (w.p - 1, w.q + 1), (w.p, w.q - 1)]
        .into_iter()
        .map(|(p, q)| Weight::unshifted(p, q))
        .filter(|v| v.in_alcove(k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fundamental_action_examples() {
        let u = Weight::unshifted;
        assert_eq!(fundamental_action(u(0, 0), 1).unwrap(), vec![u(1, 0)]);
        assert_eq!(fundamental_action(u(1, 0), 1).unwrap(), vec![u(0, 1)]);
        assert_eq!(fundamental_action(u(1, 0), 3).unwrap(), vec![u(2, 0), u(0, 1)]);
    }

    #[test]
    fn fundamental_action_rejects_outside_alcove() {
        assert!(matches!(
            fundamental_action(Weight::unshifted(2, 0), 1),
            Err(Error::Domain(_))
        ));
        assert!(fundamental_action(Weight::unshifted(-1, 0), 3).is_err());
    }

    #[test]
    fn alcove_ordering_matches_index() {
        for k in 0..8 {
            let a = alcove(k);
            assert_eq!(a.len(), alcove_size(k));
            for (i, w) in a.iter().enumerate() {
                assert_eq!(alcove_index(w.p, w.q), i);
            }
        }
    }

    proptest! {
        #[test]
        fn shift_is_an_involution(p in -50i64..50, q in -50i64..50) {
            let w = Weight::unshifted(p, q);
            prop_assert_eq!(w.to_shifted().to_unshifted(), w);
            let s = Weight::shifted(p, q);
            prop_assert_eq!(s.to_unshifted().to_shifted(), s);
        }

        #[test]
        fn triality_is_stable_under_period_three(p in -50i64..50, q in -50i64..50) {
            let t = triality(p, q);
            prop_assert_eq!(triality(p + 3, q), t);
            prop_assert_eq!(triality(p, q + 3), t);
            prop_assert_eq!(Weight::unshifted(p, q).to_shifted().triality(), t);
        }
    }
}
