//! Purity and N-purity of ideals.
//!
//! An ideal `I` is *pure* when every `a ∈ I` admits `b ∈ I` with
//! `a(1-b) = 0`, and *N-pure* when `a(1-b)` only needs to be nilpotent.
//! Both predicates are computed along two independent routes that are
//! asserted to agree (`Ann(a) + I = R` for purity; exponent witnesses for
//! N-purity), and N-purity additionally has five equivalent criteria that the
//! verification suite compares pairwise. Everything here quantifies exponents
//! over the per-element power-cycle bound, never a guessed constant.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ideal::Ideal;
use crate::ring::FiniteRing;

#[derive(Debug, Error)]
pub enum PurityError {
    #[error("ideal {0} is not N-pure")]
    NotNPure(String),
    #[error("no uniform exponent witness exists for {0}")]
    NoUniformWitness(String),
    #[error("no principal radical witness exists for {0}")]
    NoPrincipalWitness(String),
}

/// Full purity classification of one ideal relative to its ring's lattice.
#[derive(Clone, Debug)]
pub struct PurityVerdict {
    /// `a(1-b) = 0` witnesses for every member.
    pub pure: bool,
    /// The five equivalent N-purity criteria, in order:
    /// 0. definitional: every `a ∈ I` has `b ∈ I` with `a(1-b)` nilpotent;
    /// 1. every `a ∈ I` has a power with `Ann(a^t) + I = R`;
    /// 2. `√I` equals `{a : Ann(a^n) + I = R for some n}`;
    /// 3. `√I` is itself N-pure (definitional test applied to the radical);
    /// 4. exactly one pure ideal shares the radical of `I`.
    ///
    /// A disagreement between entries is a bug in exactly one of the five
    /// computations; the suite surfaces it as a failed check.
    pub npure: [bool; 5],
    /// Every `a ∈ I` has `n >= 1` and `b ∈ I` with `a^n = a^(n+1) b`.
    pub strongly_pi_regular: bool,
    /// Lattice index of the unique pure ideal sharing `√I`, when criterion 4
    /// found exactly one.
    pub pure_partner: Option<usize>,
    /// Per-member nilpotency witnesses: `a -> (n, b)`, lexicographically
    /// least with `a^n (1-b) = 0`. Present for every member when N-pure.
    pub witnesses: BTreeMap<usize, (u32, usize)>,
}

impl PurityVerdict {
    /// Do all five criteria agree?
    pub fn npure_consistent(&self) -> bool {
        self.npure.iter().all(|&c| c == self.npure[0])
    }

    /// The definitional N-purity value (criterion 0).
    pub fn is_npure(&self) -> bool {
        self.npure[0]
    }
}

/// Is `I` pure? Computed both as the direct `a(1-b) = 0` scan and as
/// `Ann(a) + I = R` for every member; the two must agree.
pub fn is_pure(i: &Ideal) -> bool {
    let ring = i.ring();
    let one = ring.one();
    let direct = i.elems().iter().all(|&a| {
        i.elems()
            .iter()
            .any(|&b| ring.mul(a, ring.sub(one, b)) == ring.zero())
    });
    // Ann(a) + I = R  <=>  some u with a*u = 0 and 1-u ∈ I.
    let via_annihilator = i.elems().iter().all(|&a| {
        (0..ring.size()).any(|u| ring.mul(a, u) == ring.zero() && i.contains(ring.sub(one, u)))
    });
    assert_eq!(
        direct, via_annihilator,
        "the two purity routes disagree on {:?}",
        i
    );
    direct
}

/// Definitional N-purity together with the per-member witnesses.
///
/// Route A asks for `b ∈ I` with `a(1-b)` nilpotent; route B searches
/// lexicographically for the least `(n, b)` with `a^n (1-b) = 0`. The routes
/// are equivalent (expand `(1-b)^n` to trade one witness for the other) and
/// are asserted to agree member by member.
pub fn npure_with_witnesses(i: &Ideal) -> (bool, BTreeMap<usize, (u32, usize)>) {
    let ring = i.ring();
    let one = ring.one();
    let zero = ring.zero();
    let mut witnesses = BTreeMap::new();
    let mut ok = true;
    for &a in i.elems() {
        let route_a = i
            .elems()
            .iter()
            .any(|&b| ring.is_nilpotent(ring.mul(a, ring.sub(one, b))));
        let mut found = None;
        let bound = ring.exp_bound(a);
        let mut x = one;
        'search: for n in 1..=bound {
            x = ring.mul(x, a);
            for &b in i.elems() {
                if ring.mul(x, ring.sub(one, b)) == zero {
                    found = Some((n, b));
                    break 'search;
                }
            }
        }
        assert_eq!(
            route_a,
            found.is_some(),
            "nilpotency route and exponent route disagree at element {a} of {:?}",
            i
        );
        match found {
            Some(w) => {
                witnesses.insert(a, w);
            }
            None => ok = false,
        }
    }
    (ok, witnesses)
}

/// Is `I` N-pure (definitional dual-route test)?
pub fn is_npure(i: &Ideal) -> bool {
    npure_with_witnesses(i).0
}

/// Criterion 1: every member has a power whose annihilator joins `I` to the
/// whole ring.
fn npure_via_annihilator_powers(i: &Ideal) -> bool {
    i.elems().iter().all(|&a| ann_power_reaches_whole(i, a))
}

/// `Ann(a^n) + I = R` for some `1 <= n <= exp_bound(a)`?
fn ann_power_reaches_whole(i: &Ideal, a: usize) -> bool {
    let ring = i.ring();
    let one = ring.one();
    let zero = ring.zero();
    let mut x = one;
    for _ in 1..=ring.exp_bound(a) {
        x = ring.mul(x, a);
        if (0..ring.size()).any(|u| ring.mul(x, u) == zero && i.contains(ring.sub(one, u))) {
            return true;
        }
    }
    false
}

/// Criterion 2: `√I` coincides with the set of elements some power of which
/// has annihilator joining `I` to the whole ring.
fn npure_via_radical_annihilators(i: &Ideal, radical: &Ideal) -> bool {
    (0..i.ring().size()).all(|a| radical.contains(a) == ann_power_reaches_whole(i, a))
}

/// Every `a ∈ I` satisfies `a^n = a^(n+1) b` for some `n` and some `b ∈ I`.
pub fn is_strongly_pi_regular(i: &Ideal) -> bool {
    let ring = i.ring();
    i.elems().iter().all(|&a| {
        let mut x = ring.one();
        for _ in 1..=ring.exp_bound(a) {
            x = ring.mul(x, a);
            let xa = ring.mul(x, a);
            if i.elems().iter().any(|&b| ring.mul(xa, b) == x) {
                return true;
            }
        }
        false
    })
}

/// Classify every ideal of a lattice at once. `lattice` must be the complete
/// ideal lattice of one ring, in its canonical order.
pub fn build_purity_table(lattice: &[Ideal]) -> Vec<PurityVerdict> {
    let radicals: Vec<Ideal> = lattice.iter().map(|i| i.radical()).collect();
    let pure_flags: Vec<bool> = lattice.iter().map(is_pure).collect();

    lattice
        .iter()
        .enumerate()
        .map(|(idx, i)| {
            let (def_ok, witnesses) = npure_with_witnesses(i);
            let c1 = npure_via_annihilator_powers(i);
            let c2 = npure_via_radical_annihilators(i, &radicals[idx]);
            let c3 = is_npure(&radicals[idx]);
            let partners: Vec<usize> = (0..lattice.len())
                .filter(|&j| pure_flags[j] && radicals[j] == radicals[idx])
                .collect();
            let c4 = partners.len() == 1;
            PurityVerdict {
                pure: pure_flags[idx],
                npure: [def_ok, c1, c2, c3, c4],
                strongly_pi_regular: is_strongly_pi_regular(i),
                pure_partner: if c4 { Some(partners[0]) } else { None },
                witnesses,
            }
        })
        .collect()
}

/// Least `(n, b)` in lexicographic order with `a^n (1-b) = 0` for *every*
/// `a ∈ I` simultaneously. Exists whenever `I` is N-pure; the search is
/// bounded by the largest power-cycle bound over the members.
pub fn uniform_exponent_witness(i: &Ideal) -> Result<(u32, usize), PurityError> {
    if !is_npure(i) {
        return Err(PurityError::NotNPure(i.display_members()));
    }
    let ring = i.ring();
    let one = ring.one();
    let zero = ring.zero();
    let bound = i
        .elems()
        .iter()
        .map(|&a| ring.exp_bound(a))
        .max()
        .expect("ideals contain zero");
    for n in 1..=bound {
        for &b in i.elems() {
            let c = ring.sub(one, b);
            if i.elems()
                .iter()
                .all(|&a| ring.mul(ring.pow(a, n as u64), c) == zero)
            {
                return Ok((n, b));
            }
        }
    }
    Err(PurityError::NoUniformWitness(i.display_members()))
}

/// Least `a ∈ I` with `√(Ra) = √I`. Exists whenever `I` is N-pure.
pub fn principal_radical_witness(i: &Ideal) -> Result<usize, PurityError> {
    if !is_npure(i) {
        return Err(PurityError::NotNPure(i.display_members()));
    }
    let target = i.radical();
    for &a in i.elems() {
        let principal = Ideal::generated(i.ring(), &[a]).expect("member in range");
        if principal.radical() == target {
            return Ok(a);
        }
    }
    Err(PurityError::NoPrincipalWitness(i.display_members()))
}

/// The nilradical as an ideal (`√(0)`).
pub fn nilradical(ring: &Arc<FiniteRing>) -> Ideal {
    Ideal::from_members(ring, &ring.nilpotents()).expect("nilpotents form an ideal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::ideal::all_ideals;

    fn ring(spec: &str) -> Arc<FiniteRing> {
        FiniteRing::parse_and_build(spec, &Caps::default()).unwrap()
    }

    fn ideal(r: &Arc<FiniteRing>, gens: &[usize]) -> Ideal {
        Ideal::generated(r, gens).unwrap()
    }

    #[test]
    fn pure_ideals_of_zmod_twelve() {
        let r = ring("zmod:12");
        let flags: Vec<(Vec<usize>, bool)> = all_ideals(&r, &Caps::default())
            .unwrap()
            .iter()
            .map(|i| (i.elems().to_vec(), is_pure(i)))
            .collect();
        assert_eq!(
            flags,
            vec![
                (vec![0], true),
                (vec![0, 6], false),
                (vec![0, 4, 8], true),
                (vec![0, 3, 6, 9], true),
                (vec![0, 2, 4, 6, 8, 10], false),
                ((0..12).collect(), true),
            ]
        );
    }

    #[test]
    fn pure_ideals_are_those_generated_by_one_idempotent() {
        // Independent characterization on small rings: the pure ideals are
        // exactly the ideals (e) for idempotent e.
        for spec in [
            "zmod:12",
            "zmod:8",
            "zmod:30",
            "prod:(zmod:4,zmod:3)",
            "polyquot:p=2;f=0,0,1",
            "polyquot:p=3;f=0,2,0,1",
        ] {
            let r = ring(spec);
            let mut from_idempotents: Vec<Vec<usize>> = r
                .idempotents()
                .iter()
                .map(|&e| ideal(&r, &[e]).elems().to_vec())
                .collect();
            from_idempotents.sort();
            from_idempotents.dedup();
            let mut pure: Vec<Vec<usize>> = all_ideals(&r, &Caps::default())
                .unwrap()
                .iter()
                .filter(|i| is_pure(i))
                .map(|i| i.elems().to_vec())
                .collect();
            pure.sort();
            assert_eq!(pure, from_idempotents, "pure ideals of {spec}");
        }
    }

    #[test]
    fn npure_holds_for_every_ideal_of_small_rings() {
        // Finite rings are zero-dimensional, so every ideal must come out
        // N-pure and strongly pi-regular; this exercises all five criteria.
        for spec in [
            "zmod:12",
            "zmod:16",
            "zmod:30",
            "prod:(zmod:4,zmod:6)",
            "polyquot:p=2;f=0,0,0,1",
        ] {
            let r = ring(spec);
            let lattice = all_ideals(&r, &Caps::default()).unwrap();
            for (i, verdict) in build_purity_table(&lattice).into_iter().enumerate() {
                assert!(
                    verdict.npure_consistent(),
                    "criteria disagree on {:?} of {spec}: {:?}",
                    lattice[i],
                    verdict.npure
                );
                assert!(verdict.is_npure(), "{:?} of {spec}", lattice[i]);
                assert!(verdict.strongly_pi_regular);
                assert_eq!(
                    verdict.witnesses.len(),
                    lattice[i].len(),
                    "witness per member"
                );
                if verdict.pure {
                    assert!(verdict.is_npure(), "pure implies N-pure");
                }
                assert!(verdict.pure_partner.is_some());
            }
        }
    }

    #[test]
    fn npure_witness_for_two_in_twelve() {
        let r = ring("zmod:12");
        let i2 = ideal(&r, &[2]);
        let (ok, witnesses) = npure_with_witnesses(&i2);
        assert!(ok);
        assert_eq!(
            witnesses[&2],
            (2, 4),
            "least witness: 2^2 (1-4) = 4*9 = 36 = 0 mod 12"
        );
        assert_eq!(witnesses[&0], (1, 0));
    }

    #[test]
    fn pure_partner_of_two_in_twelve_is_four() {
        let r = ring("zmod:12");
        let lattice = all_ideals(&r, &Caps::default()).unwrap();
        let table = build_purity_table(&lattice);
        let idx2 = lattice
            .iter()
            .position(|i| i.elems() == [0, 2, 4, 6, 8, 10])
            .unwrap();
        let partner = table[idx2].pure_partner.expect("unique pure partner");
        assert_eq!(lattice[partner].elems(), &[0, 4, 8], "√(4) = (2) = √(2)");
        assert!(!table[idx2].pure);
        assert!(table[idx2].is_npure());
    }

    #[test]
    fn nilpotent_ideal_has_zero_witness() {
        // In Z/8 the ideal (2) sits inside the nilradical, so b = 0 works.
        let r = ring("zmod:8");
        let i2 = ideal(&r, &[2]);
        let (ok, witnesses) = npure_with_witnesses(&i2);
        assert!(ok);
        for (&a, &(_, b)) in &witnesses {
            if a != 0 {
                assert_eq!(b, 0, "a = {a} is nilpotent, so 1-0 works");
            }
        }
    }

    #[test]
    fn strong_pi_regularity_example() {
        let r = ring("zmod:12");
        let i2 = ideal(&r, &[2]);
        assert!(is_strongly_pi_regular(&i2), "2^2 = 2^3 * 2 mod 12");
        assert!(is_strongly_pi_regular(&Ideal::zero(&r)));
        assert!(is_strongly_pi_regular(&Ideal::whole(&r)));
    }

    #[test]
    fn uniform_exponent_witnesses_in_zmod_twelve() {
        let r = ring("zmod:12");
        assert_eq!(uniform_exponent_witness(&ideal(&r, &[2])).unwrap(), (2, 4));
        assert_eq!(uniform_exponent_witness(&ideal(&r, &[3])).unwrap(), (1, 9));
        assert_eq!(uniform_exponent_witness(&Ideal::zero(&r)).unwrap(), (1, 0));
        // Re-verify the first witness by direct scan.
        let i2 = ideal(&r, &[2]);
        let (n, b) = uniform_exponent_witness(&i2).unwrap();
        let c = r.sub(r.one(), b);
        for &a in i2.elems() {
            assert_eq!(r.mul(r.pow(a, n as u64), c), r.zero());
        }
        // And check minimality against a brute-force search.
        for nn in 1..=n {
            for &bb in i2.elems() {
                if (nn, bb) < (n, b) {
                    assert!(
                        i2.elems()
                            .iter()
                            .any(|&a| r.mul(r.pow(a, nn as u64), r.sub(r.one(), bb)) != r.zero()),
                        "({nn},{bb}) would be a smaller witness"
                    );
                }
            }
        }
    }

    #[test]
    fn principal_radical_witnesses_in_zmod_twelve() {
        let r = ring("zmod:12");
        assert_eq!(principal_radical_witness(&ideal(&r, &[2])).unwrap(), 2);
        assert_eq!(principal_radical_witness(&Ideal::zero(&r)).unwrap(), 0);
        assert_eq!(principal_radical_witness(&Ideal::whole(&r)).unwrap(), 1);
        // (6) is the nilradical, and √((0)) already equals it, so the least
        // witness is 0 rather than 6.
        assert_eq!(principal_radical_witness(&ideal(&r, &[6])).unwrap(), 0);
    }

    #[test]
    fn nilradical_ideal_matches_element_scan() {
        for spec in ["zmod:12", "zmod:8", "zmod:36", "polyquot:p=2;f=0,0,1"] {
            let r = ring(spec);
            let nil = nilradical(&r);
            assert_eq!(nil.elems(), r.nilpotents().as_slice());
            assert_eq!(nil, Ideal::zero(&r).radical(), "N(R) = √(0) in {spec}");
        }
    }
}
