//! Localization of a finite ring at a multiplicative set, realized as a
//! quotient: `S⁻¹R = R / K` with `K = {a : sa = 0 for some s ∈ S}`.
//!
//! On a finite ring this quotient *is* the localization. The construction
//! certifies it by recording, for every `s ∈ S`, the inverse of its image in
//! the quotient; a missing inverse would indicate an implementation bug (the
//! image of `s` is a non-zero-divisor in `R/K`, hence invertible there) and
//! is reported as a hard internal error, not a math verdict.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::caps::Caps;
use crate::ideal::{Ideal, IdealError};
use crate::ring::{quotient_ring, same_ring, FiniteRing, RingError, RingHom};
use crate::spectrum::is_prime_ideal;

#[derive(Debug, Error)]
pub enum LocalizationError {
    #[error("multiplicative set does not contain 1")]
    MissingOne,
    #[error("multiplicative set is not closed: {a} * {b} falls outside")]
    NotClosed { a: usize, b: usize },
    #[error("complement of a non-prime ideal is not multiplicative: {0}")]
    NotPrime(String),
    #[error("set and ideal belong to different rings")]
    RingMismatch,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A multiplicatively closed subset containing 1. Note 0 may be a member
/// (e.g. `1 + I` for `I = R`); localizing at such a set yields the zero ring.
pub struct MultSet {
    ring: Arc<FiniteRing>,
    members: Vec<usize>,
}

impl fmt::Debug for MultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultSet{:?} of {}", self.members, self.ring.spec())
    }
}

impl MultSet {
    /// Validate and wrap an explicit member list.
    pub fn from_members(
        ring: &Arc<FiniteRing>,
        members: &[usize],
    ) -> Result<MultSet, LocalizationError> {
        let mut mask = vec![false; ring.size()];
        for &m in members {
            if m >= ring.size() {
                return Err(LocalizationError::Ideal(IdealError::IndexRange {
                    index: m,
                    size: ring.size(),
                }));
            }
            mask[m] = true;
        }
        if !mask[ring.one()] {
            return Err(LocalizationError::MissingOne);
        }
        let sorted: Vec<usize> = (0..ring.size()).filter(|&a| mask[a]).collect();
        for &a in &sorted {
            for &b in &sorted {
                if !mask[ring.mul(a, b)] {
                    return Err(LocalizationError::NotClosed { a, b });
                }
            }
        }
        Ok(MultSet {
            ring: ring.clone(),
            members: sorted,
        })
    }

    /// `1 + I = {1 + a : a ∈ I}`, always multiplicative for an ideal `I`.
    pub fn one_plus(i: &Ideal) -> MultSet {
        let ring = i.ring();
        let members: Vec<usize> = i.elems().iter().map(|&a| ring.add(ring.one(), a)).collect();
        MultSet::from_members(ring, &members).expect("1 + I is multiplicatively closed")
    }

    /// `R \ p` for a prime `p`; rejects non-primes.
    pub fn complement_of_prime(p: &Ideal) -> Result<MultSet, LocalizationError> {
        if !is_prime_ideal(p) {
            return Err(LocalizationError::NotPrime(p.display_members()));
        }
        let ring = p.ring();
        let members: Vec<usize> = (0..ring.size()).filter(|&a| !p.contains(a)).collect();
        MultSet::from_members(ring, &members)
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

/// The result of localizing: kernel, quotient ring, projection, and the
/// inverse certificate (image of each `s ∈ S` paired with its inverse in the
/// quotient).
pub struct Localization {
    pub kernel: Ideal,
    pub quotient: Arc<FiniteRing>,
    pub projection: RingHom,
    /// `s -> t` with `projection(s) * t = 1` in the quotient, for every
    /// member `s` of the multiplicative set.
    pub inverses: BTreeMap<usize, usize>,
}

impl fmt::Debug for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Localization(kernel {:?}, quotient size {})",
            self.kernel.elems(),
            self.quotient.size()
        )
    }
}

/// Localize the ring of `s` at `s`.
pub fn localize(s: &MultSet, caps: &Caps) -> Result<Localization, LocalizationError> {
    let ring = s.ring();
    let zero = ring.zero();

    // K = {a : sa = 0 for some s ∈ S}. Multiplicative closure of S makes
    // this an ideal; the Ideal constructor re-verifies that.
    let members: Vec<usize> = (0..ring.size())
        .filter(|&a| s.members().iter().any(|&m| ring.mul(m, a) == zero))
        .collect();
    let kernel = Ideal::from_members(ring, &members)?;

    let (quotient, projection) = quotient_ring(ring, kernel.mask(), kernel.elems(), caps)?;

    let mut inverses = BTreeMap::new();
    for &m in s.members() {
        let image = projection.apply(m);
        let inv = (0..quotient.size()).find(|&t| quotient.mul(image, t) == quotient.one());
        match inv {
            Some(t) => {
                inverses.insert(m, t);
            }
            None => {
                return Err(LocalizationError::Internal(format!(
                    "image of {m} has no inverse in the quotient; \
                     the kernel computation must be wrong"
                )))
            }
        }
    }

    Ok(Localization {
        kernel,
        quotient,
        projection,
        inverses,
    })
}

/// Kernel of the natural map into the localization at `R \ p`.
pub fn kernel_of_pi(p: &Ideal, caps: &Caps) -> Result<Ideal, LocalizationError> {
    let s = MultSet::complement_of_prime(p)?;
    Ok(localize(&s, caps)?.kernel)
}

/// Do two ideals of possibly different rings agree after transport along a
/// common source? Helper for comparing `I ⊆ R` with structures on quotients.
pub fn same_source(a: &MultSet, i: &Ideal) -> Result<(), LocalizationError> {
    if same_ring(a.ring(), i.ring()) {
        Ok(())
    } else {
        Err(LocalizationError::RingMismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(spec: &str) -> Arc<FiniteRing> {
        FiniteRing::parse_and_build(spec, &Caps::default()).unwrap()
    }

    fn ideal(r: &Arc<FiniteRing>, gens: &[usize]) -> Ideal {
        Ideal::generated(r, gens).unwrap()
    }

    #[test]
    fn one_plus_ideal_members() {
        let r = ring("zmod:12");
        assert_eq!(
            MultSet::one_plus(&ideal(&r, &[2])).members(),
            &[1, 3, 5, 7, 9, 11]
        );
        assert_eq!(
            MultSet::one_plus(&ideal(&r, &[3])).members(),
            &[1, 4, 7, 10]
        );
        assert_eq!(MultSet::one_plus(&Ideal::zero(&r)).members(), &[1]);
        // 1 + R contains 0.
        assert!(MultSet::one_plus(&Ideal::whole(&r)).contains(0));
    }

    #[test]
    fn complement_of_prime_accepts_primes_only() {
        let r = ring("zmod:12");
        let p2 = ideal(&r, &[2]);
        let comp = MultSet::complement_of_prime(&p2).unwrap();
        assert_eq!(comp.members(), &[1, 3, 5, 7, 9, 11]);
        assert!(MultSet::complement_of_prime(&ideal(&r, &[4])).is_err());
        assert!(MultSet::complement_of_prime(&Ideal::whole(&r)).is_err());
    }

    #[test]
    fn from_members_validates_closure() {
        let r = ring("zmod:12");
        assert!(
            MultSet::from_members(&r, &[1, 2]).is_err(),
            "2*2 = 4 missing"
        );
        assert!(MultSet::from_members(&r, &[2, 4, 8]).is_err(), "missing 1");
        assert!(MultSet::from_members(&r, &[1, 2, 4, 8]).is_ok());
    }

    #[test]
    fn localize_twelve_at_one_plus_two() {
        let r = ring("zmod:12");
        let s = MultSet::one_plus(&ideal(&r, &[2]));
        let loc = localize(&s, &Caps::default()).unwrap();
        assert_eq!(
            loc.kernel.elems(),
            &[0, 4, 8],
            "3 * 4 = 12 = 0 kills 4 and 8"
        );
        assert_eq!(loc.quotient.size(), 4);
        // Certificate: every odd element has an inverse image.
        for &m in s.members() {
            let t = loc.inverses[&m];
            assert_eq!(
                loc.quotient.mul(loc.projection.apply(m), t),
                loc.quotient.one()
            );
        }
    }

    #[test]
    fn localize_twelve_at_one_plus_three() {
        let r = ring("zmod:12");
        let s = MultSet::one_plus(&ideal(&r, &[3]));
        let loc = localize(&s, &Caps::default()).unwrap();
        assert_eq!(loc.kernel.elems(), &[0, 3, 6, 9], "4 * 3 = 0 mod 12");
        assert_eq!(loc.quotient.size(), 3);
        let image = ideal(&r, &[3]).pushforward(&loc.projection).unwrap();
        assert!(image.is_zero(), "the localized ideal vanishes");
    }

    #[test]
    fn localize_at_trivial_set_changes_nothing() {
        let r = ring("zmod:12");
        let s = MultSet::one_plus(&Ideal::zero(&r));
        let loc = localize(&s, &Caps::default()).unwrap();
        assert!(loc.kernel.is_zero());
        assert_eq!(loc.quotient.size(), 12);
        assert!(loc.projection.is_bijective());
    }

    #[test]
    fn localize_at_set_containing_zero_gives_zero_ring() {
        let r = ring("zmod:12");
        let s = MultSet::one_plus(&Ideal::whole(&r));
        let loc = localize(&s, &Caps::default()).unwrap();
        assert!(loc.kernel.is_whole());
        assert_eq!(loc.quotient.size(), 1);
    }

    #[test]
    fn localize_at_units_changes_nothing() {
        let r = ring("zmod:8");
        let s = MultSet::from_members(&r, &r.units()).unwrap();
        let loc = localize(&s, &Caps::default()).unwrap();
        assert!(loc.kernel.is_zero());
        assert_eq!(loc.quotient.size(), 8);
    }

    #[test]
    fn kernels_of_pi_in_zmod_twelve() {
        let r = ring("zmod:12");
        let k2 = kernel_of_pi(&ideal(&r, &[2]), &Caps::default()).unwrap();
        assert_eq!(k2.elems(), &[0, 4, 8], "kernel at (2) is (4)");
        let k3 = kernel_of_pi(&ideal(&r, &[3]), &Caps::default()).unwrap();
        assert_eq!(k3.elems(), &[0, 3, 6, 9], "kernel at (3) is (3)");
        assert!(
            kernel_of_pi(&ideal(&r, &[6]), &Caps::default()).is_err(),
            "(6) is not prime"
        );
    }

    #[test]
    fn localization_kernel_is_smallest_with_invertible_images() {
        // For every ideal I of a few rings: elements of the kernel are
        // exactly those killed by some member of 1 + I.
        for spec in ["zmod:12", "zmod:16", "prod:(zmod:4,zmod:3)"] {
            let r = ring(spec);
            for i in crate::ideal::all_ideals(&r, &Caps::default()).unwrap() {
                let s = MultSet::one_plus(&i);
                let loc = localize(&s, &Caps::default()).unwrap();
                for a in 0..r.size() {
                    let killed = s.members().iter().any(|&m| r.mul(m, a) == r.zero());
                    assert_eq!(
                        loc.kernel.contains(a),
                        killed,
                        "kernel of 1+{i:?} in {spec}"
                    );
                }
            }
        }
    }
}
