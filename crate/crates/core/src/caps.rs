//! Resource limits shared across ring construction, lattice enumeration and
//! endomorphism search.
//!
//! Every cap violation surfaces as a typed error naming the limit, so callers
//! (CLI, verification suite) can distinguish "too big" from "wrong".

use serde::{Deserialize, Serialize};

/// Size and search limits. `Default` is tuned for single-ring analysis;
/// [`Caps::suite`] is the tighter profile used when sweeping a whole corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Caps {
    /// Largest admissible ring cardinality (tables are dense `size x size`).
    pub max_ring_size: usize,
    /// Largest ideal lattice that will be enumerated for one ring.
    pub max_ideals: usize,
    /// Largest module carrier admitted to endomorphism enumeration.
    pub max_endo_carrier: usize,
    /// Largest generator count admitted to endomorphism enumeration.
    pub max_endo_gens: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ring_size: 256,
            max_ideals: 4096,
            max_endo_carrier: 64,
            max_endo_gens: 3,
        }
    }
}

impl Caps {
    /// Profile used by the corpus verification suite.
    pub fn suite() -> Self {
        Caps {
            max_ring_size: 64,
            ..Caps::default()
        }
    }

    /// Same caps with a different ring-size ceiling.
    pub fn with_ring_size(self, max_ring_size: usize) -> Self {
        Caps {
            max_ring_size,
            ..self
        }
    }
}
