//! Exact symbolic treatment of ideals of the ring of integers: purity,
//! the spectrum after localizing at `1 + nZ`, and the radical/kernel facts.
//! Everything here is arithmetic on the modulus `n`; no tables are built.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Factorization inputs are kept small enough for trial division.
pub const FACTOR_BOUND: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum ZintError {
    #[error("modulus {0} is below 2; the localization facts need a proper nonzero ideal")]
    TooSmall(u64),
    #[error("modulus {n} exceeds the factorization bound {bound}")]
    TooLarge { n: u64, bound: u64 },
}

/// The ideal `nZ`; `0` is the zero ideal and `1` the whole ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZIdeal {
    pub n: u64,
}

/// `(pure, npure)` for `nZ`: in an integral domain only the zero ideal and
/// the whole ring are pure, and pure and N-pure coincide.
pub fn z_purity(i: ZIdeal) -> (bool, bool) {
    let trivial = i.n <= 1;
    (trivial, trivial)
}

fn check_modulus(n: u64) -> Result<(), ZintError> {
    if n < 2 {
        return Err(ZintError::TooSmall(n));
    }
    if n > FACTOR_BOUND {
        return Err(ZintError::TooLarge {
            n,
            bound: FACTOR_BOUND,
        });
    }
    Ok(())
}

/// Ascending prime divisors of `n ≥ 2` by trial division.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut rest = n;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            out.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    out
}

/// `rad(n)`: the product of the distinct prime divisors; `rad(0) = 0`,
/// `rad(1) = 1`.
pub fn radical_of(n: u64) -> u64 {
    if n <= 1 {
        return n;
    }
    prime_divisors(n).iter().product()
}

/// Does the prime `q` survive localization at `S = 1 + nZ`? Brute force:
/// `qZ` meets `S` iff some `1 + kn` is divisible by `q`, and `1 + kn mod q`
/// cycles with period dividing `q`, so scanning `k < q` is exhaustive.
pub fn prime_survives_localization(q: u64, n: u64) -> bool {
    !(0..q).any(|k| (1 + k * n).is_multiple_of(q))
}

/// The spectrum of `Z` localized at `1 + nZ`, listed symbolically:
/// `0` stands for the zero ideal, a prime `q` for the ideal `qZ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZLocalizedSpec {
    pub n: u64,
    /// `[0, q1, q2, ...]` with the surviving primes ascending.
    pub primes: Vec<u64>,
    /// `Z/nZ` is a field exactly when `n` is prime.
    pub quotient_is_field: bool,
    /// The localization keeps the zero ideal plus at least one surviving
    /// prime, so it is never a field for `n ≥ 2`.
    pub localization_is_field: bool,
}

/// Primes surviving localization at `1 + nZ`: exactly the divisors of `n`
/// (for `q ∤ n` the unit `1 + kn ≡ 0 mod q` is solvable in `k`), plus the
/// zero ideal.
pub fn z_spec_localized(n: u64) -> Result<ZLocalizedSpec, ZintError> {
    check_modulus(n)?;
    let divisors = prime_divisors(n);
    let mut primes = vec![0];
    primes.extend(&divisors);
    Ok(ZLocalizedSpec {
        n,
        quotient_is_field: divisors == [n],
        localization_is_field: primes.len() == 1,
        primes,
    })
}

/// `√(nZ)`, the kernel of `Z → S⁻¹Z`, and whether `√I = √Ker` holds.
/// `Z` is a domain, so the kernel is zero and the criterion holds exactly
/// for the two purity-trivial ideals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZRadicalKernelFacts {
    pub n: u64,
    /// `√(nZ) = rad(n)·Z`.
    pub radical: u64,
    /// `Ker(Z → S⁻¹Z)`, always the zero ideal.
    pub kernel: u64,
    /// `√(nZ) = √(Ker)`, i.e. `rad(n) ∈ {0, 1}`.
    pub criterion_iv: bool,
}

pub fn z_radical_kernel_facts(n: u64) -> Result<ZRadicalKernelFacts, ZintError> {
    if n > FACTOR_BOUND {
        return Err(ZintError::TooLarge {
            n,
            bound: FACTOR_BOUND,
        });
    }
    let radical = radical_of(n);
    Ok(ZRadicalKernelFacts {
        n,
        radical,
        kernel: 0,
        criterion_iv: radical <= 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn purity_is_trivial_ideals_only() {
        assert_eq!(z_purity(ZIdeal { n: 0 }), (true, true));
        assert_eq!(z_purity(ZIdeal { n: 1 }), (true, true));
        for n in [2, 3, 4, 6, 8, 9, 12, 49] {
            assert_eq!(z_purity(ZIdeal { n }), (false, false), "n = {n}");
        }
    }

    #[test]
    fn prime_powers_localize_to_two_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for e in 1..=3u32 {
                let spec = z_spec_localized(p.pow(e)).unwrap();
                assert_eq!(spec.primes, vec![0, p], "p = {p}, e = {e}");
                assert!(!spec.localization_is_field);
                assert_eq!(spec.quotient_is_field, e == 1);
            }
        }
    }

    #[test]
    fn composite_moduli_keep_all_their_primes() {
        assert_eq!(z_spec_localized(6).unwrap().primes, vec![0, 2, 3]);
        assert_eq!(z_spec_localized(12).unwrap().primes, vec![0, 2, 3]);
        assert_eq!(z_spec_localized(30).unwrap().primes, vec![0, 2, 3, 5]);
        assert_eq!(z_spec_localized(539).unwrap().primes, vec![0, 7, 11]);
    }

    #[test]
    fn modulus_bounds_are_enforced() {
        assert!(matches!(z_spec_localized(0), Err(ZintError::TooSmall(0))));
        assert!(matches!(z_spec_localized(1), Err(ZintError::TooSmall(1))));
        assert!(matches!(
            z_spec_localized(FACTOR_BOUND + 1),
            Err(ZintError::TooLarge { .. })
        ));
        assert!(z_radical_kernel_facts(FACTOR_BOUND + 1).is_err());
    }

    #[test]
    fn survival_matches_divisibility_oracle() {
        // Independent route: brute-force the unit search for every prime.
        let primes: Vec<u64> = (2..=1000).filter(|&q| prime_divisors(q) == [q]).collect();
        for n in 2..=1000u64 {
            let spec = z_spec_localized(n).unwrap();
            for &q in &primes {
                assert_eq!(
                    prime_survives_localization(q, n),
                    spec.primes[1..].contains(&q),
                    "q = {q}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn radical_kernel_facts_examples() {
        let twelve = z_radical_kernel_facts(12).unwrap();
        assert_eq!(twelve.radical, 6);
        assert_eq!(twelve.kernel, 0);
        assert!(!twelve.criterion_iv);
        assert!(z_radical_kernel_facts(0).unwrap().criterion_iv);
        assert!(z_radical_kernel_facts(1).unwrap().criterion_iv);
        let seven = z_radical_kernel_facts(7).unwrap();
        assert_eq!(seven.radical, 7);
        assert!(!seven.criterion_iv);
    }

    #[test]
    fn criterion_matches_purity_everywhere() {
        for n in 0..=500u64 {
            let facts = z_radical_kernel_facts(n).unwrap();
            assert_eq!(facts.criterion_iv, z_purity(ZIdeal { n }).1, "n = {n}");
        }
    }

    #[test]
    fn npure_integer_ideals_push_forward_npure() {
        // The N-pure ideals of the integers are 0Z and Z; their images under
        // the projection onto each modular ring must remain N-pure.
        use crate::caps::Caps;
        use crate::ideal::Ideal;
        use crate::purity::is_npure;
        use crate::ring::FiniteRing;
        for m in 2..=20 {
            let r = FiniteRing::parse_and_build(&format!("zmod:{m}"), &Caps::default()).unwrap();
            for n in [0u64, 1] {
                let gen = (n % m as u64) as usize;
                let image = Ideal::generated(&r, &[gen]).unwrap();
                assert!(is_npure(&image), "image of {n}Z in zmod:{m}");
            }
        }
    }
}
