//! Ideal calculus of finite commutative rings.
//!
//! The crate builds small commutative rings from a textual spec grammar
//! (`zmod:12`, `polyquot:p=2;f=0,0,1`, `prod:(zmod:4,zmod:3)`,
//! `quot:(zmod:12)/[2]`, `table:<path>`), then computes everything an ideal
//! theorist wants to poke at: the full ideal lattice, radicals and
//! annihilators, the prime spectrum, purity and N-purity verdicts with
//! explicit witnesses, strong π-regularity, localization at `S = 1 + I`
//! realized as a quotient with an invertibility certificate, and
//! endomorphism rings of ideal powers.
//!
//! On top of the calculus sits a verification harness ([`suite`]): a
//! deterministic corpus of rings, a set of named checks
//! ([`verdict::CHECK_IDS`]) that exercise the theory over every applicable
//! instance, and a machine-readable report. A symbolic module ([`zint`])
//! covers the integer examples no finite ring can exhibit.

pub mod caps;
pub mod checks;
pub mod ctx;
pub mod endo;
pub mod ideal;
pub mod localization;
pub mod purity;
pub mod ring;
pub mod spectrum;
pub mod suite;
pub mod verdict;
pub mod zint;

pub use caps::Caps;
pub use ctx::{CtxError, LocalizedCtx, QuotientCtx, RingCtx};
pub use ideal::{all_ideals, Ideal, IdealError};
pub use localization::{localize, Localization, LocalizationError, MultSet};
pub use purity::{build_purity_table, is_npure, is_pure, is_strongly_pi_regular, PurityVerdict};
pub use ring::{quotient_ring, FiniteRing, HomError, RingError, RingHom, RingSpec};
pub use spectrum::{is_primary_ideal, is_prime_ideal, Spectrum};
pub use suite::{build_corpus, run_suite, SuiteError, SuiteOptions};
pub use verdict::{CheckStatus, SuiteReport, Verdict, CHECK_IDS};
