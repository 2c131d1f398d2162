//! Per-ring analysis context: the full ideal lattice with purity
//! classifications, the spectrum, and lazily cached quotients and
//! localizations keyed by lattice index.
//!
//! A context is cheap to share within one thread (`Rc`) but deliberately not
//! `Sync`; parallel drivers build one context per ring inside each task.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::Arc;

use thiserror::Error;

use crate::caps::Caps;
use crate::ideal::{all_ideals, Ideal, IdealError};
use crate::localization::{localize, Localization, LocalizationError, MultSet};
use crate::purity::{build_purity_table, is_npure, nilradical, PurityVerdict};
use crate::ring::{quotient_ring, FiniteRing, RingError, RingHom};
use crate::spectrum::{is_primary_ideal, Spectrum};

#[derive(Debug, Error)]
pub enum CtxError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
    #[error("lattice index {index} out of range ({count} ideals)")]
    LatticeRange { index: usize, count: usize },
    #[error("lattice index {0} is not a prime ideal")]
    NotPrimeIndex(usize),
}

/// A quotient `R/I` with its projection and a full context for the quotient
/// ring.
pub struct QuotientCtx {
    pub projection: RingHom,
    pub ctx: Rc<RingCtx>,
}

/// A localization together with a full context for its underlying ring.
pub struct LocalizedCtx {
    pub loc: Localization,
    pub ctx: Rc<RingCtx>,
}

pub struct RingCtx {
    ring: Arc<FiniteRing>,
    caps: Caps,
    ideals: Vec<Ideal>,
    purity: Vec<PurityVerdict>,
    radical_idx: Vec<usize>,
    spectrum: Spectrum,
    prime_idxs: Vec<usize>,
    maximal_idxs: Vec<usize>,
    minimal_idxs: Vec<usize>,
    nilradical_idx: usize,
    by_elems: BTreeMap<Vec<usize>, usize>,
    quotients: RefCell<BTreeMap<usize, Rc<QuotientCtx>>>,
    loc_one_plus: RefCell<BTreeMap<usize, Rc<LocalizedCtx>>>,
    loc_at_prime: RefCell<BTreeMap<usize, Rc<LocalizedCtx>>>,
}

impl RingCtx {
    pub fn new(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<RingCtx, CtxError> {
        let ideals = all_ideals(ring, caps)?;
        let by_elems: BTreeMap<Vec<usize>, usize> = ideals
            .iter()
            .enumerate()
            .map(|(k, i)| (i.elems().to_vec(), k))
            .collect();
        let lookup = |i: &Ideal| -> usize {
            *by_elems
                .get(i.elems())
                .expect("complete lattice contains every ideal of the ring")
        };
        let purity = build_purity_table(&ideals);
        let radical_idx: Vec<usize> = ideals.iter().map(|i| lookup(&i.radical())).collect();
        let spectrum = Spectrum::compute(ring, &ideals);
        let prime_idxs: Vec<usize> = spectrum.primes.iter().map(&lookup).collect();
        let maximal_idxs: Vec<usize> = spectrum.maximals.iter().map(&lookup).collect();
        let minimal_idxs: Vec<usize> = spectrum.minimals.iter().map(&lookup).collect();
        let nilradical_idx = lookup(&nilradical(ring));
        Ok(RingCtx {
            ring: ring.clone(),
            caps: *caps,
            ideals,
            purity,
            radical_idx,
            spectrum,
            prime_idxs,
            maximal_idxs,
            minimal_idxs,
            nilradical_idx,
            by_elems,
            quotients: RefCell::new(BTreeMap::new()),
            loc_one_plus: RefCell::new(BTreeMap::new()),
            loc_at_prime: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn ideal(&self, idx: usize) -> Result<&Ideal, CtxError> {
        self.ideals.get(idx).ok_or(CtxError::LatticeRange {
            index: idx,
            count: self.ideals.len(),
        })
    }

    /// Lattice index of an ideal of this ring; the lattice is complete, so a
    /// miss means the ideal belongs to a different ring.
    pub fn index_of(&self, i: &Ideal) -> Option<usize> {
        self.by_elems.get(i.elems()).copied()
    }

    pub fn purity(&self, idx: usize) -> &PurityVerdict {
        &self.purity[idx]
    }

    pub fn purity_table(&self) -> &[PurityVerdict] {
        &self.purity
    }

    pub fn radical_idx(&self, idx: usize) -> usize {
        self.radical_idx[idx]
    }

    pub fn radical(&self, idx: usize) -> &Ideal {
        &self.ideals[self.radical_idx[idx]]
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn prime_idxs(&self) -> &[usize] {
        &self.prime_idxs
    }

    pub fn maximal_idxs(&self) -> &[usize] {
        &self.maximal_idxs
    }

    pub fn minimal_idxs(&self) -> &[usize] {
        &self.minimal_idxs
    }

    pub fn nilradical_idx(&self) -> usize {
        self.nilradical_idx
    }

    pub fn nilradical(&self) -> &Ideal {
        &self.ideals[self.nilradical_idx]
    }

    /// `R / ideals[idx]`, with a context for the quotient. Cached.
    pub fn quotient_by(&self, idx: usize) -> Result<Rc<QuotientCtx>, CtxError> {
        if let Some(q) = self.quotients.borrow().get(&idx) {
            return Ok(q.clone());
        }
        let i = self.ideal(idx)?;
        let (quotient, projection) = quotient_ring(&self.ring, i.mask(), i.elems(), &self.caps)?;
        let ctx = Rc::new(RingCtx::new(&quotient, &self.caps)?);
        let q = Rc::new(QuotientCtx { projection, ctx });
        self.quotients.borrow_mut().insert(idx, q.clone());
        Ok(q)
    }

    /// Localization at `1 + ideals[idx]`, with a context for the localized
    /// ring. Cached.
    pub fn localize_one_plus(&self, idx: usize) -> Result<Rc<LocalizedCtx>, CtxError> {
        if let Some(l) = self.loc_one_plus.borrow().get(&idx) {
            return Ok(l.clone());
        }
        let s = MultSet::one_plus(self.ideal(idx)?);
        let loc = localize(&s, &self.caps)?;
        let ctx = Rc::new(RingCtx::new(&loc.quotient, &self.caps)?);
        let l = Rc::new(LocalizedCtx { loc, ctx });
        self.loc_one_plus.borrow_mut().insert(idx, l.clone());
        Ok(l)
    }

    /// Localization at the complement of the prime `ideals[idx]`. Cached.
    pub fn localize_at_prime(&self, idx: usize) -> Result<Rc<LocalizedCtx>, CtxError> {
        if let Some(l) = self.loc_at_prime.borrow().get(&idx) {
            return Ok(l.clone());
        }
        if !self.prime_idxs.contains(&idx) {
            return Err(CtxError::NotPrimeIndex(idx));
        }
        let s = MultSet::complement_of_prime(self.ideal(idx)?)?;
        let loc = localize(&s, &self.caps)?;
        let ctx = Rc::new(RingCtx::new(&loc.quotient, &self.caps)?);
        let l = Rc::new(LocalizedCtx { loc, ctx });
        self.loc_at_prime.borrow_mut().insert(idx, l.clone());
        Ok(l)
    }

    /// Lattice index of `Ker π_p` for the prime at lattice index `idx`.
    pub fn kernel_of_pi_idx(&self, idx: usize) -> Result<usize, CtxError> {
        let l = self.localize_at_prime(idx)?;
        Ok(self
            .index_of(&l.loc.kernel)
            .expect("kernel lives in the complete lattice"))
    }

    /// Is every element's annihilator N-pure? Verified against the second
    /// characterization: every `Ker π_p` is primary. The two must agree.
    pub fn is_mid_ring(&self) -> Result<bool, CtxError> {
        let via_annihilators = (0..self.ring.size()).all(|a| {
            let ann =
                Ideal::annihilator_of_element(&self.ring, a).expect("element index is in range");
            is_npure(&ann)
        });
        let mut via_kernels = true;
        for &p in &self.prime_idxs {
            let k = self.kernel_of_pi_idx(p)?;
            if !is_primary_ideal(&self.ideals[k]) {
                via_kernels = false;
                break;
            }
        }
        assert_eq!(
            via_annihilators,
            via_kernels,
            "mid-ring routes disagree on {}",
            self.ring.spec()
        );
        Ok(via_annihilators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(spec: &str) -> RingCtx {
        let r = FiniteRing::parse_and_build(spec, &Caps::default()).unwrap();
        RingCtx::new(&r, &Caps::default()).unwrap()
    }

    #[test]
    fn twelve_lattice_and_radicals() {
        let c = ctx("zmod:12");
        let members: Vec<&[usize]> = c.ideals().iter().map(|i| i.elems()).collect();
        assert_eq!(
            members,
            vec![
                &[0][..],
                &[0, 6],
                &[0, 4, 8],
                &[0, 3, 6, 9],
                &[0, 2, 4, 6, 8, 10],
                &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
            ]
        );
        // radical: (0)->(6), (6)->(6), (4)->(2), (3)->(3), (2)->(2), R->R.
        assert_eq!(
            (0..6).map(|k| c.radical_idx(k)).collect::<Vec<_>>(),
            vec![1, 1, 4, 3, 4, 5]
        );
        assert_eq!(c.nilradical_idx(), 1);
        assert_eq!(c.prime_idxs(), &[3, 4]);
        assert_eq!(c.maximal_idxs(), &[3, 4]);
        assert_eq!(c.minimal_idxs(), &[3, 4]);
    }

    #[test]
    fn index_of_round_trips() {
        let c = ctx("prod:(zmod:4,zmod:3)");
        for (k, i) in c.ideals().iter().enumerate() {
            assert_eq!(c.index_of(i), Some(k));
        }
        let other = FiniteRing::parse_and_build("zmod:5", &Caps::default()).unwrap();
        assert_eq!(
            c.index_of(&Ideal::zero(&other)),
            Some(0),
            "same member list"
        );
    }

    #[test]
    fn quotient_cache_returns_shared_context() {
        let c = ctx("zmod:12");
        let idx6 = 1; // (6)
        let q1 = c.quotient_by(idx6).unwrap();
        let q2 = c.quotient_by(idx6).unwrap();
        assert!(Rc::ptr_eq(&q1, &q2));
        assert_eq!(q1.ctx.ring().size(), 6);
        assert!(q1.projection.is_surjective());
    }

    #[test]
    fn localization_caches_and_kernels() {
        let c = ctx("zmod:12");
        let idx2 = 4; // (2)
        let idx3 = 3; // (3)
        let l = c.localize_one_plus(idx2).unwrap();
        assert_eq!(l.loc.kernel.elems(), &[0, 4, 8]);
        assert!(Rc::ptr_eq(&l, &c.localize_one_plus(idx2).unwrap()));
        assert_eq!(c.kernel_of_pi_idx(idx2).unwrap(), 2, "Ker pi at (2) is (4)");
        assert_eq!(c.kernel_of_pi_idx(idx3).unwrap(), 3, "Ker pi at (3) is (3)");
        assert!(matches!(
            c.localize_at_prime(1),
            Err(CtxError::NotPrimeIndex(1))
        ));
    }

    #[test]
    fn mid_ring_routes_agree() {
        for spec in [
            "zmod:12",
            "zmod:16",
            "zmod:30",
            "prod:(zmod:4,zmod:9)",
            "polyquot:p=2;f=0,0,1",
        ] {
            let c = ctx(spec);
            assert!(c.is_mid_ring().unwrap(), "{spec}");
        }
    }
}
