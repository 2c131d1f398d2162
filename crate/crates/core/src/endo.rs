//! Ideal powers `I^n` as modules over their ring, exhaustive enumeration of
//! the endomorphism ring `End(I^n)`, and its commutativity test.
//!
//! Endomorphisms are found by choosing candidate images for a (greedily
//! minimized) generator list and scanning every coefficient tuple in `R^k`:
//! a candidate is admitted exactly when the induced assignment is
//! single-valued on the carrier, i.e. respects every relation.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caps::Caps;
use crate::ideal::{Ideal, IdealError};
use crate::ring::FiniteRing;

#[derive(Debug, Error)]
pub enum EndoError {
    #[error("carrier of {carrier} elements exceeds the cap {cap}")]
    CarrierCap { carrier: usize, cap: usize },
    #[error("module is not generated by {cap} elements")]
    GenCap { cap: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// `I^n` as a module: carrier, greedy generator list, and one expressibility
/// witness (coefficient tuple) per carrier element.
pub struct IdealModule {
    ring: Arc<FiniteRing>,
    carrier: Vec<usize>,
    pos: Vec<Option<u16>>,
    gens: Vec<usize>,
    expressibility: Vec<Vec<usize>>,
}

/// One endomorphism, tabulated on carrier positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EndoMap {
    table: Vec<u16>,
}

impl EndoMap {
    pub fn table(&self) -> &[u16] {
        &self.table
    }

    /// Image of the carrier element at `p`, as a carrier position.
    pub fn apply_pos(&self, p: usize) -> usize {
        self.table[p] as usize
    }
}

impl IdealModule {
    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// For each carrier position, coefficients `(r_1, ..., r_k)` with
    /// `Σ r_i g_i` equal to that element.
    pub fn expressibility(&self) -> &[Vec<usize>] {
        &self.expressibility
    }

    pub fn position(&self, elem: usize) -> usize {
        self.pos[elem].expect("element belongs to the carrier") as usize
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.pos[elem].is_some()
    }
}

/// All elements `a + r·g` for `a` in the current span: the span after
/// adjoining one generator (both parts are already subgroups closed under
/// the ring action, so one pass of pairwise sums is closed).
fn adjoin(ring: &FiniteRing, span: &[bool], g: usize) -> Vec<bool> {
    let mut out = vec![false; ring.size()];
    for a in 0..ring.size() {
        if !span[a] {
            continue;
        }
        for r in 0..ring.size() {
            out[ring.add(a, ring.mul(r, g))] = true;
        }
    }
    out
}

/// Build `I^n` as a module, choosing generators greedily: repeatedly adjoin
/// the carrier element whose principal submodule adds the most new elements
/// (ties to the least element). Deterministic.
pub fn module_of_ideal_power(i: &Ideal, n: u32, caps: &Caps) -> Result<IdealModule, EndoError> {
    let ring = i.ring().clone();
    let power = i.power(n)?;
    let carrier: Vec<usize> = power.elems().to_vec();
    if carrier.len() > caps.max_endo_carrier {
        return Err(EndoError::CarrierCap {
            carrier: carrier.len(),
            cap: caps.max_endo_carrier,
        });
    }
    let mut pos: Vec<Option<u16>> = vec![None; ring.size()];
    for (p, &e) in carrier.iter().enumerate() {
        pos[e] = Some(p as u16);
    }

    let mut span = vec![false; ring.size()];
    span[ring.zero()] = true;
    let mut span_count = 1;
    let mut gens: Vec<usize> = Vec::new();
    while span_count < carrier.len() {
        if gens.len() == caps.max_endo_gens {
            return Err(EndoError::GenCap {
                cap: caps.max_endo_gens,
            });
        }
        let mut best: Option<(usize, usize, Vec<bool>)> = None;
        for &g in &carrier {
            if span[g] {
                continue;
            }
            let grown = adjoin(&ring, &span, g);
            let count = grown.iter().filter(|&&b| b).count();
            if best.as_ref().is_none_or(|(c, _, _)| count > *c) {
                best = Some((count, g, grown));
            }
        }
        let (count, g, grown) = best.expect("uncovered carrier element exists");
        gens.push(g);
        span = grown;
        span_count = count;
    }

    let expressibility = express_all(&ring, &carrier, &pos, &gens);
    Ok(IdealModule {
        ring,
        carrier,
        pos,
        gens,
        expressibility,
    })
}

/// Values `Σ r_i g_i` for every coefficient tuple, indexed by the tuple's
/// mixed-radix encoding (digit `i` is the coefficient of `gens[i]`).
fn tuple_values(ring: &FiniteRing, gens: &[usize]) -> Vec<u16> {
    let size = ring.size();
    let total = size.pow(gens.len() as u32);
    let mut values = vec![0u16; total];
    let mut digits = vec![0usize; gens.len()];
    for slot in values.iter_mut() {
        let mut v = ring.zero();
        for (i, &r) in digits.iter().enumerate() {
            v = ring.add(v, ring.mul(r, gens[i]));
        }
        *slot = v as u16;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < size {
                break;
            }
            *d = 0;
        }
    }
    values
}

fn express_all(
    ring: &FiniteRing,
    carrier: &[usize],
    pos: &[Option<u16>],
    gens: &[usize],
) -> Vec<Vec<usize>> {
    let size = ring.size();
    let values = tuple_values(ring, gens);
    let mut out: Vec<Option<Vec<usize>>> = vec![None; carrier.len()];
    let mut digits = vec![0usize; gens.len()];
    for &v in &values {
        let p = pos[v as usize].expect("generated values stay in the carrier") as usize;
        if out[p].is_none() {
            out[p] = Some(digits.clone());
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < size {
                break;
            }
            *d = 0;
        }
    }
    out.into_iter()
        .map(|w| w.expect("generators span the carrier"))
        .collect()
}

/// Assert the definitional additivity and linearity scans for one table.
fn assert_linear(m: &IdealModule, table: &[u16]) {
    let ring = &m.ring;
    for (pa, &a) in m.carrier.iter().enumerate() {
        for (pb, &b) in m.carrier.iter().enumerate() {
            let sum = m.position(ring.add(a, b));
            let fa = m.carrier[table[pa] as usize];
            let fb = m.carrier[table[pb] as usize];
            assert_eq!(
                m.carrier[table[sum] as usize],
                ring.add(fa, fb),
                "additivity violated at {a}, {b}"
            );
        }
        for r in 0..ring.size() {
            let ra = m.position(ring.mul(r, a));
            let fa = m.carrier[table[pa] as usize];
            assert_eq!(
                m.carrier[table[ra] as usize],
                ring.mul(r, fa),
                "linearity violated at {r}, {a}"
            );
        }
    }
}

/// Every module endomorphism, in the deterministic order induced by
/// generator-image tuples. Every map is re-verified by the definitional
/// additivity/linearity scan before being returned.
pub fn all_endomorphisms(m: &IdealModule) -> Vec<EndoMap> {
    let ring = &m.ring;
    let size = ring.size();
    let k = m.gens.len();
    let values = tuple_values(ring, &m.gens);

    // Necessary condition per coordinate: whatever annihilates the generator
    // must annihilate its image (the relation r·g_i = 0 maps to r·x_i = 0).
    let annihilates = |e: usize, x: usize| -> bool {
        (0..size).all(|r| ring.mul(r, e) != ring.zero() || ring.mul(r, x) == ring.zero())
    };
    let allowed: Vec<Vec<usize>> = m
        .gens
        .iter()
        .map(|&g| {
            m.carrier
                .iter()
                .copied()
                .filter(|&x| annihilates(g, x))
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; k];
    'candidates: loop {
        let images: Vec<usize> = (0..k).map(|i| allowed[i][choice[i]]).collect();
        // Scan all coefficient tuples; admit iff single-valued everywhere.
        let mut table: Vec<Option<u16>> = vec![None; m.carrier.len()];
        let mut digits = vec![0usize; k];
        let mut admitted = true;
        for &v in &values {
            let mut w = ring.zero();
            for (i, &r) in digits.iter().enumerate() {
                w = ring.add(w, ring.mul(r, images[i]));
            }
            let p = m.position(v as usize);
            let wp = m.position(w) as u16;
            match table[p] {
                None => table[p] = Some(wp),
                Some(prev) if prev == wp => {}
                Some(_) => {
                    admitted = false;
                    break;
                }
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < size {
                    break;
                }
                *d = 0;
            }
        }
        if admitted {
            let table: Vec<u16> = table
                .into_iter()
                .map(|t| t.expect("tuple scan covers the carrier"))
                .collect();
            assert_linear(m, &table);
            out.push(EndoMap { table });
        }
        // Next candidate in lexicographic order.
        for i in (0..k).rev() {
            choice[i] += 1;
            if choice[i] < allowed[i].len() {
                continue 'candidates;
            }
            choice[i] = 0;
        }
        break;
    }
    out
}

/// `f ∘ g` on carrier positions.
pub fn compose(f: &EndoMap, g: &EndoMap) -> EndoMap {
    EndoMap {
        table: g.table.iter().map(|&p| f.table[p as usize]).collect(),
    }
}

/// Pointwise sum `f + g`.
pub fn add_maps(m: &IdealModule, f: &EndoMap, g: &EndoMap) -> EndoMap {
    let table = f
        .table
        .iter()
        .zip(&g.table)
        .map(|(&a, &b)| m.position(m.ring.add(m.carrier[a as usize], m.carrier[b as usize])) as u16)
        .collect();
    EndoMap { table }
}

pub fn identity_map(m: &IdealModule) -> EndoMap {
    EndoMap {
        table: (0..m.carrier.len() as u16).collect(),
    }
}

pub fn zero_map(m: &IdealModule) -> EndoMap {
    EndoMap {
        table: vec![m.position(m.ring.zero()) as u16; m.carrier.len()],
    }
}

/// Do all endomorphisms commute under composition?
pub fn endo_ring_is_commutative(maps: &[EndoMap]) -> bool {
    for (i, f) in maps.iter().enumerate() {
        for g in &maps[i + 1..] {
            if compose(f, g) != compose(g, f) {
                return false;
            }
        }
    }
    true
}

/// The ring structure of `End`, materialized for reports: closure under the
/// two operations, the two constants, and commutativity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EndoRingSummary {
    pub carrier: Vec<usize>,
    pub gens: Vec<usize>,
    pub count: usize,
    pub commutative: bool,
    pub identity_present: bool,
    pub zero_present: bool,
    pub closed_under_addition: bool,
    pub closed_under_composition: bool,
}

pub fn endo_ring_summary(m: &IdealModule, maps: &[EndoMap]) -> EndoRingSummary {
    let set: BTreeSet<&EndoMap> = maps.iter().collect();
    let mut closed_add = true;
    let mut closed_compose = true;
    for f in maps {
        for g in maps {
            closed_add &= set.contains(&add_maps(m, f, g));
            closed_compose &= set.contains(&compose(f, g));
        }
    }
    EndoRingSummary {
        carrier: m.carrier.clone(),
        gens: m.gens.clone(),
        count: maps.len(),
        commutative: endo_ring_is_commutative(maps),
        identity_present: set.contains(&identity_map(m)),
        zero_present: set.contains(&zero_map(m)),
        closed_under_addition: closed_add,
        closed_under_composition: closed_compose,
    }
}

/// Least `n ≥ 1` admitting `r` with `a^n (1 - r a) = 0`; exists for every
/// element of a finite ring within its power-cycle bound.
pub fn principal_commutativity_threshold(ring: &FiniteRing, a: usize) -> Option<u32> {
    let one = ring.one();
    let mut x = one;
    for n in 1..=ring.exp_bound(a) {
        x = ring.mul(x, a);
        if (0..ring.size()).any(|r| ring.mul(x, ring.sub(one, ring.mul(r, a))) == ring.zero()) {
            return Some(n);
        }
    }
    None
}
