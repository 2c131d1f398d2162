//! Prime spectrum of a finite commutative ring, computed definitionally:
//! a proper ideal `P` is prime when no two elements outside `P` multiply
//! into `P`. Maximal and minimal primes are found by inclusion comparison,
//! never by assuming structure theory, so the structural facts about finite
//! rings (every prime is maximal, etc.) are *outputs* of this module and get
//! verified by the suite rather than baked in.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ideal::Ideal;
use crate::ring::FiniteRing;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("ideal {0} is not prime")]
    NotPrime(String),
}

/// Is `I` a prime ideal? (`I` proper, and `a*b ∈ I` forces `a ∈ I` or `b ∈ I`;
/// scanned over all pairs outside `I`.)
pub fn is_prime_ideal(i: &Ideal) -> bool {
    if !i.is_proper() {
        return false;
    }
    let ring = i.ring();
    let outside: Vec<usize> = (0..ring.size()).filter(|&a| !i.contains(a)).collect();
    for &a in &outside {
        for &b in &outside {
            if i.contains(ring.mul(a, b)) {
                return false;
            }
        }
    }
    true
}

/// Is `q` primary? (`q` proper, and `a*b ∈ q` with `a ∉ q` forces `b ∈ √q`.)
pub fn is_primary_ideal(q: &Ideal) -> bool {
    if !q.is_proper() {
        return false;
    }
    let ring = q.ring();
    let rad = q.radical();
    for a in 0..ring.size() {
        if q.contains(a) {
            continue;
        }
        for b in 0..ring.size() {
            if q.contains(ring.mul(a, b)) && !rad.contains(b) {
                return false;
            }
        }
    }
    true
}

/// The prime spectrum with its extremal members and the Jacobson radical.
pub struct Spectrum {
    pub primes: Vec<Ideal>,
    pub maximals: Vec<Ideal>,
    pub minimals: Vec<Ideal>,
    pub jacobson: Ideal,
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Spectrum({} primes, {} maximal, {} minimal)",
            self.primes.len(),
            self.maximals.len(),
            self.minimals.len()
        )
    }
}

impl Spectrum {
    /// Classify the given ideal lattice. `ideals` must be the complete
    /// lattice of the ring (as produced by [`crate::ideal::all_ideals`]).
    pub fn compute(ring: &Arc<FiniteRing>, ideals: &[Ideal]) -> Spectrum {
        let primes: Vec<Ideal> = ideals
            .iter()
            .filter(|i| is_prime_ideal(i))
            .cloned()
            .collect();
        let maximals: Vec<Ideal> = primes
            .iter()
            .filter(|p| {
                !primes
                    .iter()
                    .any(|q| q.len() > p.len() && p.is_subset_of(q))
            })
            .cloned()
            .collect();
        let minimals: Vec<Ideal> = primes
            .iter()
            .filter(|p| {
                !primes
                    .iter()
                    .any(|q| q.len() < p.len() && q.is_subset_of(p))
            })
            .cloned()
            .collect();
        let mut jacobson = Ideal::whole(ring);
        for m in &maximals {
            jacobson = jacobson.intersect(m).expect("same ring");
        }
        Spectrum {
            primes,
            maximals,
            minimals,
            jacobson,
        }
    }

    /// `V(I)`: the primes containing `I`.
    pub fn vanishing(&self, i: &Ideal) -> Vec<&Ideal> {
        self.primes.iter().filter(|p| i.is_subset_of(p)).collect()
    }

    /// `Λ(p)`: the primes contained in `p`. Errors when `p` is not prime.
    pub fn lambda(&self, p: &Ideal) -> Result<Vec<&Ideal>, SpectrumError> {
        if !is_prime_ideal(p) {
            return Err(SpectrumError::NotPrime(p.display_members()));
        }
        Ok(self.primes.iter().filter(|q| q.is_subset_of(p)).collect())
    }
}

/// No nonzero nilpotents.
pub fn is_reduced(ring: &Arc<FiniteRing>) -> bool {
    ring.nilpotents() == vec![ring.zero()]
}

/// Every prime is maximal (definitional check against the computed spectrum).
pub fn is_zero_dimensional(spectrum: &Spectrum) -> bool {
    spectrum
        .primes
        .iter()
        .all(|p| spectrum.maximals.iter().any(|m| m == p))
}

/// Every prime sits under exactly one maximal ideal.
pub fn is_gelfand(spectrum: &Spectrum) -> bool {
    spectrum.primes.iter().all(|p| {
        spectrum
            .maximals
            .iter()
            .filter(|m| p.is_subset_of(m))
            .count()
            == 1
    })
}

/// Every prime sits over exactly one minimal prime.
pub fn is_mp_ring(spectrum: &Spectrum) -> bool {
    spectrum.primes.iter().all(|p| {
        spectrum
            .minimals
            .iter()
            .filter(|q| q.is_subset_of(p))
            .count()
            == 1
    })
}

#[cfg(test)]
fn is_prime_u(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::ideal::all_ideals;

    fn ring(spec: &str) -> Arc<FiniteRing> {
        FiniteRing::parse_and_build(spec, &Caps::default()).unwrap()
    }

    fn spectrum_of(spec: &str) -> (Arc<FiniteRing>, Vec<Ideal>, Spectrum) {
        let r = ring(spec);
        let ideals = all_ideals(&r, &Caps::default()).unwrap();
        let s = Spectrum::compute(&r, &ideals);
        (r, ideals, s)
    }

    fn members(v: &[Ideal]) -> Vec<Vec<usize>> {
        v.iter().map(|i| i.elems().to_vec()).collect()
    }

    #[test]
    fn spectrum_of_zmod_twelve() {
        let (_, _, s) = spectrum_of("zmod:12");
        assert_eq!(
            members(&s.primes),
            vec![vec![0, 3, 6, 9], vec![0, 2, 4, 6, 8, 10]]
        );
        assert_eq!(s.maximals.len(), 2);
        assert_eq!(s.minimals.len(), 2);
        assert_eq!(s.jacobson.elems(), &[0, 6], "J(Z/12) = (6)");
    }

    #[test]
    fn spectrum_of_zmod_n_matches_prime_divisors() {
        for n in 2..=48usize {
            let (_, _, s) = spectrum_of(&format!("zmod:{n}"));
            let prime_divs: Vec<usize> = (2..=n)
                .filter(|p| n % p == 0 && super::is_prime_u(*p))
                .collect();
            assert_eq!(s.primes.len(), prime_divs.len(), "primes of Z/{n}");
            for (p, q) in s.primes.iter().zip(prime_divs.iter().rev()) {
                // Primes sorted by cardinality ascending = divisors descending.
                assert_eq!(p.len(), n / q, "(q) has n/q elements");
            }
        }
    }

    #[test]
    fn field_spectrum_is_the_zero_ideal() {
        let (_, _, s) = spectrum_of("polyquot:p=2;f=1,1,1");
        assert_eq!(s.primes.len(), 1);
        assert!(s.primes[0].is_zero());
        assert!(s.jacobson.is_zero());
    }

    #[test]
    fn zero_ring_spectrum_is_empty_and_jacobson_improper() {
        let (_, _, s) = spectrum_of("zmod:1");
        assert!(s.primes.is_empty());
        assert!(s.maximals.is_empty());
        assert!(
            s.jacobson.is_whole(),
            "empty intersection of maximals is the whole ring"
        );
    }

    #[test]
    fn vanishing_and_lambda_in_zmod_twelve() {
        let (r, _, s) = spectrum_of("zmod:12");
        let i6 = Ideal::generated(&r, &[6]).unwrap();
        assert_eq!(s.vanishing(&i6).len(), 2, "both primes contain (6)");
        let whole = Ideal::whole(&r);
        assert!(s.vanishing(&whole).is_empty());
        let p2 = Ideal::generated(&r, &[2]).unwrap();
        assert_eq!(s.lambda(&p2).unwrap().len(), 1);
        assert!(s.lambda(&i6).is_err(), "(6) is not prime");
    }

    #[test]
    fn primality_catches_non_primes() {
        let (r, ideals, _) = spectrum_of("zmod:12");
        let verdicts: Vec<bool> = ideals.iter().map(is_prime_ideal).collect();
        assert_eq!(verdicts, vec![false, false, false, true, true, false]);
        let i4 = Ideal::generated(&r, &[4]).unwrap();
        assert!(!is_prime_ideal(&i4), "2*2 = 4 ∈ (4) but 2 ∉ (4)");
    }

    #[test]
    fn primary_examples_in_zmod_twelve() {
        let (r, _, s) = spectrum_of("zmod:12");
        let i4 = Ideal::generated(&r, &[4]).unwrap();
        assert!(is_primary_ideal(&i4), "(4) is (2)-primary");
        let i6 = Ideal::generated(&r, &[6]).unwrap();
        assert!(!is_primary_ideal(&i6), "2*3 ∈ (6), 2 ∉ (6), 3 ∉ √(6) = (6)");
        for p in &s.primes {
            assert!(is_primary_ideal(p), "primes are primary");
        }
        assert!(
            !is_primary_ideal(&Ideal::whole(&r)),
            "primary ideals are proper"
        );
    }

    #[test]
    fn class_predicates_on_small_rings() {
        for spec in ["zmod:6", "zmod:30", "prod:(zmod:2,zmod:3)"] {
            let (r, _, s) = spectrum_of(spec);
            assert!(is_reduced(&r), "{spec} is reduced");
            assert!(is_zero_dimensional(&s));
            assert!(is_gelfand(&s));
            assert!(is_mp_ring(&s));
        }
        for spec in ["zmod:12", "zmod:4", "polyquot:p=2;f=0,0,1"] {
            let (r, _, s) = spectrum_of(spec);
            assert!(!is_reduced(&r), "{spec} has nilpotents");
            assert!(is_zero_dimensional(&s));
        }
    }

    #[test]
    fn nilradical_equals_intersection_of_primes() {
        for spec in [
            "zmod:12",
            "zmod:36",
            "prod:(zmod:4,zmod:9)",
            "polyquot:p=3;f=0,0,1",
        ] {
            let (r, ideals, s) = spectrum_of(spec);
            let mut meet = Ideal::whole(&r);
            for p in &s.primes {
                meet = meet.intersect(p).unwrap();
            }
            let nil = Ideal::from_members(&r, &r.nilpotents()).unwrap();
            assert_eq!(meet, nil, "N(R) = ∩ primes in {spec}");
            assert!(ideals.contains(&nil), "nilradical is in the lattice");
        }
    }
}
