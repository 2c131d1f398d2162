//! Ideals of a finite commutative ring: generation from element lists,
//! enumeration of the full ideal lattice, and the usual arithmetic
//! (sum, product, powers, intersection, annihilators, radical).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::caps::Caps;
use crate::ring::{same_ring, FiniteRing, RingHom};

#[derive(Debug, Error)]
pub enum IdealError {
    #[error("element index {index} out of range for ring of size {size}")]
    IndexRange { index: usize, size: usize },
    #[error("ideals belong to different rings")]
    RingMismatch,
    #[error("member set is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("ideal lattice exceeds maxIdeals cap {cap}")]
    LatticeCap { cap: usize },
    #[error("ideal powers start at 1")]
    PowerZero,
}

/// An ideal, stored as both a membership mask and a sorted member list, with
/// a remembered generating set (possibly the full member list).
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<FiniteRing>,
    mask: Vec<bool>,
    elems: Vec<usize>,
    gens: Vec<usize>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?} of {}", self.elems, self.ring.spec())
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.elems == other.elems
    }
}

impl Eq for Ideal {}

impl Ideal {
    /// The ideal generated by the given element indices.
    pub fn generated(ring: &Arc<FiniteRing>, gens: &[usize]) -> Result<Ideal, IdealError> {
        for &g in gens {
            if g >= ring.size() {
                return Err(IdealError::IndexRange {
                    index: g,
                    size: ring.size(),
                });
            }
        }
        let mask = ring.span(gens);
        Ok(Ideal::from_mask_unchecked(ring, mask, gens.to_vec()))
    }

    /// The zero ideal.
    pub fn zero(ring: &Arc<FiniteRing>) -> Ideal {
        Ideal::generated(ring, &[]).expect("zero ideal always exists")
    }

    /// The whole ring as an ideal.
    pub fn whole(ring: &Arc<FiniteRing>) -> Ideal {
        Ideal::generated(ring, &[ring.one()]).expect("unit ideal always exists")
    }

    /// Wrap an explicit member set, verifying that it really is an ideal
    /// (contains zero, closed under addition and under the ring action).
    pub fn from_members(ring: &Arc<FiniteRing>, members: &[usize]) -> Result<Ideal, IdealError> {
        let mut mask = vec![false; ring.size()];
        for &m in members {
            if m >= ring.size() {
                return Err(IdealError::IndexRange {
                    index: m,
                    size: ring.size(),
                });
            }
            mask[m] = true;
        }
        Ideal::from_mask(ring, mask)
    }

    /// Wrap a membership mask, verifying the ideal axioms.
    pub fn from_mask(ring: &Arc<FiniteRing>, mask: Vec<bool>) -> Result<Ideal, IdealError> {
        if mask.len() != ring.size() {
            return Err(IdealError::NotAnIdeal("mask length mismatch".into()));
        }
        if !mask[ring.zero()] {
            return Err(IdealError::NotAnIdeal("does not contain zero".into()));
        }
        let elems: Vec<usize> = (0..ring.size()).filter(|&a| mask[a]).collect();
        for &x in &elems {
            for &y in &elems {
                if !mask[ring.add(x, y)] {
                    return Err(IdealError::NotAnIdeal(format!(
                        "not closed under addition: {x} + {y}"
                    )));
                }
            }
            for r in 0..ring.size() {
                if !mask[ring.mul(r, x)] {
                    return Err(IdealError::NotAnIdeal(format!(
                        "not closed under ring action: {r} * {x}"
                    )));
                }
            }
        }
        let gens = elems.clone();
        Ok(Ideal {
            ring: ring.clone(),
            mask,
            elems,
            gens,
        })
    }

    /// Internal constructor for masks already known to be ideals (spans,
    /// pointwise sums of ideals, intersections of ideals).
    fn from_mask_unchecked(ring: &Arc<FiniteRing>, mask: Vec<bool>, gens: Vec<usize>) -> Ideal {
        let elems: Vec<usize> = (0..ring.size()).filter(|&a| mask[a]).collect();
        Ideal {
            ring: ring.clone(),
            mask,
            elems,
            gens,
        }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false // an ideal always contains zero
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.mask[a]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_zero(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_proper(&self) -> bool {
        self.elems.len() < self.ring.size()
    }

    pub fn is_whole(&self) -> bool {
        !self.is_proper()
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.elems.iter().all(|&a| other.mask[a])
    }

    /// Short display form: the sorted member list.
    pub fn display_members(&self) -> String {
        let parts: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }

    fn check_same_ring(&self, other: &Ideal) -> Result<(), IdealError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(IdealError::RingMismatch)
        }
    }

    /// `I + J`, generated by the union of the two generating sets.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_same_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Ideal::generated(&self.ring, &gens)
    }

    /// `I * J`, generated by the pairwise products of the members.
    pub fn product(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_same_ring(other)?;
        let mut prod_mask = vec![false; self.ring.size()];
        for &a in &self.elems {
            for &b in &other.elems {
                prod_mask[self.ring.mul(a, b)] = true;
            }
        }
        let prods: Vec<usize> = (0..self.ring.size()).filter(|&x| prod_mask[x]).collect();
        Ideal::generated(&self.ring, &prods)
    }

    /// `I ∩ J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_same_ring(other)?;
        let mask: Vec<bool> = (0..self.ring.size())
            .map(|a| self.mask[a] && other.mask[a])
            .collect();
        let elems: Vec<usize> = (0..self.ring.size()).filter(|&a| mask[a]).collect();
        let gens = elems.clone();
        Ok(Ideal::from_mask_unchecked(&self.ring, mask, gens))
    }

    /// `I^n` for `n >= 1`.
    pub fn power(&self, n: u32) -> Result<Ideal, IdealError> {
        if n == 0 {
            return Err(IdealError::PowerZero);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Least `n >= 1` with `I^n = I^(n+1)`. The descending chain of powers of
    /// an ideal in a finite ring must stabilize within `|R|` steps.
    pub fn power_stabilization(&self) -> u32 {
        let mut n = 1u32;
        let mut current = self.clone();
        loop {
            let next = current.product(self).expect("same ring");
            if next.elems == current.elems {
                return n;
            }
            current = next;
            n += 1;
            assert!(
                n as usize <= self.ring.size() + 1,
                "power chain failed to stabilize within the ring size"
            );
        }
    }

    /// `√I = {a : a^n ∈ I for some n >= 1}`, with the per-element exponent
    /// search closed off at the power-cycle bound.
    pub fn radical(&self) -> Ideal {
        let ring = &self.ring;
        let mut mask = vec![false; ring.size()];
        for (a, in_radical) in mask.iter_mut().enumerate() {
            let bound = ring.exp_bound(a);
            let mut x = ring.one();
            for _ in 1..=bound {
                x = ring.mul(x, a);
                if self.mask[x] {
                    *in_radical = true;
                    break;
                }
            }
        }
        let elems: Vec<usize> = (0..ring.size()).filter(|&a| mask[a]).collect();
        let gens = elems.clone();
        Ideal::from_mask_unchecked(ring, mask, gens)
    }

    /// `Ann(a) = {x : a*x = 0}`.
    pub fn annihilator_of_element(ring: &Arc<FiniteRing>, a: usize) -> Result<Ideal, IdealError> {
        if a >= ring.size() {
            return Err(IdealError::IndexRange {
                index: a,
                size: ring.size(),
            });
        }
        let mask: Vec<bool> = (0..ring.size())
            .map(|x| ring.mul(a, x) == ring.zero())
            .collect();
        let elems: Vec<usize> = (0..ring.size()).filter(|&x| mask[x]).collect();
        let gens = elems.clone();
        Ok(Ideal::from_mask_unchecked(ring, mask, gens))
    }

    /// `Ann(I) = ∩ Ann(g)` over the generators (the whole ring when `I = 0`).
    pub fn annihilator(&self) -> Ideal {
        let mut acc = Ideal::whole(&self.ring);
        for &g in &self.gens {
            let ann = Ideal::annihilator_of_element(&self.ring, g).expect("generator in range");
            acc = acc.intersect(&ann).expect("same ring");
        }
        acc
    }

    /// Image under a homomorphism out of this ring: the ideal of the codomain
    /// generated by the images of the generators.
    pub fn pushforward(&self, hom: &RingHom) -> Result<Ideal, IdealError> {
        if !same_ring(hom.domain(), &self.ring) {
            return Err(IdealError::RingMismatch);
        }
        let image_gens: Vec<usize> = self.gens.iter().map(|&g| hom.apply(g)).collect();
        Ideal::generated(hom.codomain(), &image_gens)
    }

    /// Preimage under a homomorphism into this ring's codomain; always an
    /// ideal of the domain.
    pub fn preimage(&self, hom: &RingHom) -> Result<Ideal, IdealError> {
        if !same_ring(hom.codomain(), &self.ring) {
            return Err(IdealError::RingMismatch);
        }
        let domain = hom.domain();
        let mask: Vec<bool> = (0..domain.size())
            .map(|a| self.mask[hom.apply(a)])
            .collect();
        let elems: Vec<usize> = (0..domain.size()).filter(|&a| mask[a]).collect();
        let gens = elems.clone();
        Ok(Ideal::from_mask_unchecked(domain, mask, gens))
    }
}

/// Mask words for set-keyed deduplication during lattice enumeration.
fn mask_words(mask: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; mask.len().div_ceil(64)];
    for (i, &b) in mask.iter().enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// Every ideal of the ring, enumerated as the join-closure of the principal
/// ideals (never by scanning all `2^|R|` subsets), sorted by cardinality and
/// then lexicographically by member list.
pub fn all_ideals(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<Vec<Ideal>, IdealError> {
    let n = ring.size();
    let principal: Vec<Vec<bool>> = (0..n).map(|a| ring.span(&[a])).collect();

    let zero = Ideal::zero(ring);
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    seen.insert(mask_words(&zero.mask));
    let mut out: Vec<Ideal> = vec![zero.clone()];
    let mut queue: VecDeque<Ideal> = VecDeque::new();
    queue.push_back(zero);

    while let Some(current) = queue.pop_front() {
        for (a, span_a) in principal.iter().enumerate() {
            if current.mask[a] {
                continue;
            }
            // I + (a): the pointwise sums already form an ideal.
            let mut mask = vec![false; n];
            for &x in &current.elems {
                for (y, &in_p) in span_a.iter().enumerate() {
                    if in_p {
                        mask[ring.add(x, y)] = true;
                    }
                }
            }
            let key = mask_words(&mask);
            if seen.contains(&key) {
                continue;
            }
            if out.len() + 1 > caps.max_ideals {
                return Err(IdealError::LatticeCap {
                    cap: caps.max_ideals,
                });
            }
            seen.insert(key);
            let mut gens = current.gens.clone();
            gens.push(a);
            let next = Ideal::from_mask_unchecked(ring, mask, gens);
            out.push(next.clone());
            queue.push_back(next);
        }
    }

    out.sort_by(|a, b| {
        a.elems
            .len()
            .cmp(&b.elems.len())
            .then_with(|| a.elems.cmp(&b.elems))
    });
    Ok(out)
}
