//! Finite commutative rings with identity, stored as dense operation tables.
//!
//! Elements are the indices `0..size`. A ring is built from a [`RingSpec`]
//! recipe (modular integers, polynomial quotients, products, quotients by an
//! ideal, or raw tables loaded from JSON) and every construction path runs the
//! ring axioms before the value escapes: the full triple loop up to
//! [`EXHAUSTIVE_AXIOM_LIMIT`] elements, a deterministic random sample above.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::caps::Caps;

/// Rings up to this size get the full `n^3` associativity/distributivity scan.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 64;
/// Number of random triples checked per axiom on larger rings.
pub const SAMPLED_AXIOM_TRIPLES: usize = 100_000;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("malformed ring spec: {0}")]
    Malformed(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ring size {size} exceeds maxRingSize cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("ring axiom violated: {0}")]
    Axiom(String),
    #[error("element index {index} out of range for ring of size {size}")]
    IndexRange { index: usize, size: usize },
    #[error("cannot read table file {path}: {source}")]
    TableIo {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid table file {path}: {msg}")]
    TableFormat { path: String, msg: String },
}

#[derive(Debug, Error)]
pub enum HomError {
    #[error("map table has {got} entries, domain has {want} elements")]
    WrongLength { got: usize, want: usize },
    #[error("map sends {index} to {image}, outside codomain of size {size}")]
    ImageRange {
        index: usize,
        image: usize,
        size: usize,
    },
    #[error("map does not send zero to zero")]
    ZeroNotPreserved,
    #[error("map does not send one to one")]
    OneNotPreserved,
    #[error("map is not additive at ({a}, {b})")]
    NotAdditive { a: usize, b: usize },
    #[error("map is not multiplicative at ({a}, {b})")]
    NotMultiplicative { a: usize, b: usize },
}

/// Construction recipe for a finite ring. The textual grammar is stable:
///
/// ```text
/// zmod:<n>
/// polyquot:p=<p>;f=<c0,c1,...,ck>      (coefficients low to high, monic)
/// prod:(<spec>,<spec>)
/// quot:(<spec>)/[g1,g2,...]
/// table:<path>
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    /// Integers modulo `n`, `n >= 1` (`n = 1` is the zero ring).
    Zmod(u64),
    /// `F_p[x] / (f)` for a monic `f` given by its coefficient list, low degree
    /// first. `f` need not be irreducible or squarefree.
    PolyQuot { p: u64, coeffs: Vec<u64> },
    /// Direct product with componentwise operations.
    Product(Box<RingSpec>, Box<RingSpec>),
    /// Quotient of the base ring by the ideal generated by the listed element
    /// indices of the base ring.
    Quotient(Box<RingSpec>, Vec<usize>),
    /// Raw operation tables loaded from a JSON file.
    Table(String),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(n) => write!(f, "zmod:{n}"),
            RingSpec::PolyQuot { p, coeffs } => {
                let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "polyquot:p={p};f={}", cs.join(","))
            }
            RingSpec::Product(a, b) => write!(f, "prod:({a},{b})"),
            RingSpec::Quotient(base, gens) => {
                let gs: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "quot:({base})/[{}]", gs.join(","))
            }
            RingSpec::Table(path) => write!(f, "table:{path}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        parse_spec(s.trim())
    }
}

fn parse_spec(s: &str) -> Result<RingSpec, RingError> {
    if let Some(rest) = s.strip_prefix("zmod:") {
        let n: u64 = rest
            .parse()
            .map_err(|_| RingError::Malformed(format!("zmod wants an integer, got {rest:?}")))?;
        if n == 0 {
            return Err(RingError::Malformed("zmod modulus must be >= 1".into()));
        }
        return Ok(RingSpec::Zmod(n));
    }
    if let Some(rest) = s.strip_prefix("polyquot:") {
        let body = rest.strip_prefix("p=").ok_or_else(|| {
            RingError::Malformed(format!("polyquot wants p=<p>;f=..., got {rest:?}"))
        })?;
        let (p_str, f_part) = body
            .split_once(';')
            .ok_or_else(|| RingError::Malformed("polyquot is missing the ';f=' part".into()))?;
        let p: u64 = p_str.parse().map_err(|_| {
            RingError::Malformed(format!(
                "polyquot characteristic {p_str:?} is not an integer"
            ))
        })?;
        let coeff_str = f_part
            .strip_prefix("f=")
            .ok_or_else(|| RingError::Malformed("polyquot is missing 'f='".into()))?;
        let coeffs = coeff_str
            .split(',')
            .map(|c| {
                c.trim().parse::<u64>().map_err(|_| {
                    RingError::Malformed(format!("polyquot coefficient {c:?} is not an integer"))
                })
            })
            .collect::<Result<Vec<u64>, _>>()?;
        return Ok(RingSpec::PolyQuot { p, coeffs });
    }
    if let Some(rest) = s.strip_prefix("prod:") {
        let inner = strip_parens(rest)?;
        for i in top_level_commas(inner)? {
            // Polyquot coefficient lists put bare commas at the top level,
            // so the component boundary is the comma where both sides parse
            // (digit fragments are never valid specs, making it unique).
            if let (Ok(a), Ok(b)) = (parse_spec(&inner[..i]), parse_spec(&inner[i + 1..])) {
                return Ok(RingSpec::Product(Box::new(a), Box::new(b)));
            }
        }
        return Err(RingError::Malformed(format!(
            "prod wants (<spec>,<spec>), got {inner:?}"
        )));
    }
    if let Some(rest) = s.strip_prefix("quot:") {
        if !rest.starts_with('(') {
            return Err(RingError::Malformed(format!(
                "quot wants (<spec>)/[gens], got {rest:?}"
            )));
        }
        let close = matching_paren(rest)?;
        let base = parse_spec(&rest[1..close])?;
        let tail = &rest[close + 1..];
        let gen_str = tail
            .strip_prefix("/[")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| {
                RingError::Malformed(format!("quot tail must look like /[g1,g2], got {tail:?}"))
            })?;
        let gens = if gen_str.trim().is_empty() {
            Vec::new()
        } else {
            gen_str
                .split(',')
                .map(|g| {
                    g.trim().parse::<usize>().map_err(|_| {
                        RingError::Malformed(format!(
                            "quot generator {g:?} is not an element index"
                        ))
                    })
                })
                .collect::<Result<Vec<usize>, _>>()?
        };
        return Ok(RingSpec::Quotient(Box::new(base), gens));
    }
    if let Some(rest) = s.strip_prefix("table:") {
        if rest.is_empty() {
            return Err(RingError::Malformed("table wants a file path".into()));
        }
        return Ok(RingSpec::Table(rest.to_string()));
    }
    Err(RingError::Malformed(format!(
        "unknown ring spec {s:?} (expected zmod:, polyquot:, prod:, quot: or table:)"
    )))
}

/// `"(inner)"` -> `"inner"`, requiring the parens to wrap the whole string.
fn strip_parens(s: &str) -> Result<&str, RingError> {
    if !s.starts_with('(') {
        return Err(RingError::Malformed(format!("expected '(' in {s:?}")));
    }
    let close = matching_paren(s)?;
    if close != s.len() - 1 {
        return Err(RingError::Malformed(format!(
            "trailing input after ')' in {s:?}"
        )));
    }
    Ok(&s[1..close])
}

/// Index of the parenthesis matching `s[0] == '('`.
fn matching_paren(s: &str) -> Result<usize, RingError> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| RingError::Malformed(format!("unbalanced parens in {s:?}")))?;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(RingError::Malformed(format!("unbalanced parens in {s:?}")))
}

/// Split `"a,b"` at the unique comma that sits at nesting depth zero.
fn top_level_commas(s: &str) -> Result<Vec<usize>, RingError> {
    let mut depth = 0usize;
    let mut commas = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| RingError::Malformed(format!("unbalanced parens in {s:?}")))?
            }
            ',' if depth == 0 => commas.push(i),
            _ => {}
        }
    }
    if commas.is_empty() {
        return Err(RingError::Malformed(format!(
            "expected a top-level comma in {s:?}"
        )));
    }
    Ok(commas)
}

/// JSON shape accepted by `table:<path>`.
#[derive(Deserialize)]
struct TableFile {
    size: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

/// A finite commutative ring with identity. Cheap to clone through `Arc`.
pub struct FiniteRing {
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: usize,
    one: usize,
    spec: RingSpec,
    names: Vec<String>,
    nilpotent_mask: OnceLock<Vec<bool>>,
    cycles: OnceLock<Vec<(u32, u32)>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, size {})", self.spec, self.size)
    }
}

impl FiniteRing {
    /// Build a ring from its recipe, enforcing `caps.max_ring_size` on every
    /// ring that gets materialized (including bases of quotients/products).
    pub fn build(spec: &RingSpec, caps: &Caps) -> Result<Arc<FiniteRing>, RingError> {
        match spec {
            RingSpec::Zmod(n) => build_zmod(*n, caps),
            RingSpec::PolyQuot { p, coeffs } => build_polyquot(*p, coeffs, caps),
            RingSpec::Product(a, b) => {
                let ra = FiniteRing::build(a, caps)?;
                let rb = FiniteRing::build(b, caps)?;
                build_product(&ra, &rb, caps)
            }
            RingSpec::Quotient(base, gens) => {
                let rb = FiniteRing::build(base, caps)?;
                for &g in gens {
                    if g >= rb.size {
                        return Err(RingError::IndexRange {
                            index: g,
                            size: rb.size,
                        });
                    }
                }
                let mask = rb.span(gens);
                let (q, _) = quotient_ring(&rb, &mask, gens, caps)?;
                Ok(q)
            }
            RingSpec::Table(path) => build_from_table_file(path, caps),
        }
    }

    /// Parse a spec string and build the ring it describes.
    pub fn parse_and_build(s: &str, caps: &Caps) -> Result<Arc<FiniteRing>, RingError> {
        let spec: RingSpec = s.parse()?;
        FiniteRing::build(&spec, caps)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// Display name of an element (`"7"`, `"x^2+1"`, `"(1,2)"`, `"3+I"`, ...).
    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `a^k` by repeated squaring; `a^0 = 1` (the ring identity).
    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut result = self.one;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        result
    }

    /// Preperiod and period of the power sequence `1, a, a^2, ...`:
    /// the least `(mu, c)` with `c >= 1` and `a^(mu+c) = a^mu`.
    ///
    /// Every existential power search in this crate is closed off at exponent
    /// `mu + c`, never at a guessed constant: the set `{a^n : n >= 1}` is
    /// exactly `{a^n : 1 <= n <= mu + c}`.
    pub fn power_cycle(&self, a: usize) -> (u32, u32) {
        self.cycles()[a]
    }

    /// `mu + c` for element `a`; see [`FiniteRing::power_cycle`].
    pub fn exp_bound(&self, a: usize) -> u32 {
        let (mu, c) = self.power_cycle(a);
        mu + c
    }

    fn cycles(&self) -> &Vec<(u32, u32)> {
        self.cycles.get_or_init(|| {
            (0..self.size)
                .map(|a| {
                    let mut first_seen: HashMap<usize, u32> = HashMap::new();
                    let mut x = self.one;
                    let mut i: u32 = 0;
                    loop {
                        match first_seen.get(&x) {
                            Some(&j) => return (j, i - j),
                            None => {
                                first_seen.insert(x, i);
                            }
                        }
                        x = self.mul(x, a);
                        i += 1;
                    }
                })
                .collect()
        })
    }

    pub fn is_nilpotent(&self, a: usize) -> bool {
        self.nilpotent_mask()[a]
    }

    fn nilpotent_mask(&self) -> &Vec<bool> {
        self.nilpotent_mask.get_or_init(|| {
            (0..self.size)
                .map(|a| self.pow(a, self.exp_bound(a) as u64) == self.zero)
                .collect()
        })
    }

    /// All nilpotent elements, ascending.
    pub fn nilpotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| self.is_nilpotent(a)).collect()
    }

    /// All invertible elements, ascending.
    pub fn units(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&a| (0..self.size).any(|b| self.mul(a, b) == self.one))
            .collect()
    }

    /// All idempotent elements (`e^2 = e`), ascending.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| self.mul(a, a) == a).collect()
    }

    /// True when every nonzero element is invertible (and the ring is not the
    /// zero ring).
    pub fn is_field(&self) -> bool {
        self.size >= 2 && self.units().len() == self.size - 1
    }

    /// Member mask of the ideal generated by `gens`: the closure of `{0}`
    /// under addition of ring multiples of the generators.
    pub fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.size];
        mask[self.zero] = true;
        let mut stack = vec![self.zero];
        while let Some(x) = stack.pop() {
            for &g in gens {
                for r in 0..self.size {
                    let y = self.add(x, self.mul(r, g));
                    if !mask[y] {
                        mask[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        mask
    }

    /// Structural equality of the operation tables (ignores spec and names).
    pub fn same_tables(&self, other: &FiniteRing) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }

    /// Hash of the operation tables, used to prefilter deduplication.
    pub fn table_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.size.hash(&mut h);
        self.zero.hash(&mut h);
        self.one.hash(&mut h);
        self.add.hash(&mut h);
        self.mul.hash(&mut h);
        h.finish()
    }

    /// Validate tables and wrap them up. All construction paths funnel here.
    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        size: usize,
        add: Vec<u16>,
        mul: Vec<u16>,
        zero: usize,
        one: usize,
        spec: RingSpec,
        names: Vec<String>,
        caps: &Caps,
    ) -> Result<Arc<FiniteRing>, RingError> {
        if size == 0 {
            return Err(RingError::Axiom("a ring needs at least one element".into()));
        }
        if size > caps.max_ring_size {
            return Err(RingError::SizeCap {
                size,
                cap: caps.max_ring_size,
            });
        }
        if size > u16::MAX as usize + 1 {
            return Err(RingError::SizeCap {
                size,
                cap: u16::MAX as usize + 1,
            });
        }
        if add.len() != size * size || mul.len() != size * size {
            return Err(RingError::Axiom(
                "operation tables must be size x size".into(),
            ));
        }
        if zero >= size || one >= size {
            return Err(RingError::Axiom("zero/one index out of range".into()));
        }
        for &v in add.iter().chain(mul.iter()) {
            if (v as usize) >= size {
                return Err(RingError::Axiom(format!("table entry {v} out of range")));
            }
        }
        if size > 1 && zero == one {
            return Err(RingError::Axiom(
                "zero = one in a ring with more than one element".into(),
            ));
        }
        if names.len() != size {
            return Err(RingError::Axiom("need one display name per element".into()));
        }

        let at = |t: &Vec<u16>, a: usize, b: usize| t[a * size + b] as usize;

        // Identities and commutativity: full double loops at any size.
        for a in 0..size {
            if at(&add, a, zero) != a {
                return Err(RingError::Axiom(format!("{a} + 0 != {a}")));
            }
            if at(&mul, a, one) != a {
                return Err(RingError::Axiom(format!("{a} * 1 != {a}")));
            }
        }
        for a in 0..size {
            for b in 0..size {
                if at(&add, a, b) != at(&add, b, a) {
                    return Err(RingError::Axiom(format!(
                        "addition not commutative at ({a}, {b})"
                    )));
                }
                if at(&mul, a, b) != at(&mul, b, a) {
                    return Err(RingError::Axiom(format!(
                        "multiplication not commutative at ({a}, {b})"
                    )));
                }
            }
        }

        // Additive inverses; also materializes the negation table.
        let mut neg = vec![0u16; size];
        for (a, slot) in neg.iter_mut().enumerate() {
            match (0..size).find(|&b| at(&add, a, b) == zero) {
                Some(b) => *slot = b as u16,
                None => return Err(RingError::Axiom(format!("{a} has no additive inverse"))),
            }
        }

        // Associativity and distributivity: exhaustive up to the limit,
        // deterministic random triples above it.
        let check_triple = |a: usize, b: usize, c: usize| -> Result<(), RingError> {
            if at(&add, at(&add, a, b), c) != at(&add, a, at(&add, b, c)) {
                return Err(RingError::Axiom(format!(
                    "addition not associative at ({a}, {b}, {c})"
                )));
            }
            if at(&mul, at(&mul, a, b), c) != at(&mul, a, at(&mul, b, c)) {
                return Err(RingError::Axiom(format!(
                    "multiplication not associative at ({a}, {b}, {c})"
                )));
            }
            if at(&mul, a, at(&add, b, c)) != at(&add, at(&mul, a, b), at(&mul, a, c)) {
                return Err(RingError::Axiom(format!(
                    "distributivity fails at ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if size <= EXHAUSTIVE_AXIOM_LIMIT {
            for a in 0..size {
                for b in 0..size {
                    for c in 0..size {
                        check_triple(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x46494E52 ^ size as u64);
            for _ in 0..SAMPLED_AXIOM_TRIPLES {
                let a = rng.gen_range(0..size);
                let b = rng.gen_range(0..size);
                let c = rng.gen_range(0..size);
                check_triple(a, b, c)?;
            }
        }

        Ok(Arc::new(FiniteRing {
            size,
            add,
            mul,
            neg,
            zero,
            one,
            spec,
            names,
            nilpotent_mask: OnceLock::new(),
            cycles: OnceLock::new(),
        }))
    }
}

fn build_zmod(n: u64, caps: &Caps) -> Result<Arc<FiniteRing>, RingError> {
    if n == 0 {
        return Err(RingError::Malformed("zmod modulus must be >= 1".into()));
    }
    let n_us = usize::try_from(n).map_err(|_| RingError::SizeCap {
        size: usize::MAX,
        cap: caps.max_ring_size,
    })?;
    if n_us > caps.max_ring_size {
        return Err(RingError::SizeCap {
            size: n_us,
            cap: caps.max_ring_size,
        });
    }
    let size = n_us;
    let mut add = vec![0u16; size * size];
    let mut mul = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = ((a + b) % size) as u16;
            mul[a * size + b] = ((a * b) % size) as u16;
        }
    }
    let names = (0..size).map(|a| a.to_string()).collect();
    let one = if size == 1 { 0 } else { 1 };
    FiniteRing::from_parts(size, add, mul, 0, one, RingSpec::Zmod(n), names, caps)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn build_polyquot(p: u64, coeffs: &[u64], caps: &Caps) -> Result<Arc<FiniteRing>, RingError> {
    if !is_prime_u64(p) {
        return Err(RingError::NotPrime(p));
    }
    if coeffs.len() < 2 {
        return Err(RingError::Malformed(
            "polyquot modulus must have degree >= 1".into(),
        ));
    }
    if *coeffs.last().unwrap() != 1 {
        return Err(RingError::Malformed(
            "polyquot modulus must be monic".into(),
        ));
    }
    if coeffs.iter().any(|&c| c >= p) {
        return Err(RingError::Malformed(format!(
            "polyquot coefficients must be reduced mod {p}"
        )));
    }
    let deg = coeffs.len() - 1;
    let size_big = (p as u128).checked_pow(deg as u32).unwrap_or(u128::MAX);
    if size_big > caps.max_ring_size as u128 {
        return Err(RingError::SizeCap {
            size: usize::MAX,
            cap: caps.max_ring_size,
        });
    }
    let size = size_big as usize;
    let p_us = p as usize;

    // Element index <-> coefficient vector via base-p digits.
    let digits = |mut a: usize| -> Vec<usize> {
        let mut d = vec![0usize; deg];
        for slot in d.iter_mut() {
            *slot = a % p_us;
            a /= p_us;
        }
        d
    };
    let index = |d: &[usize]| -> usize {
        let mut a = 0usize;
        for &c in d.iter().rev() {
            a = a * p_us + c;
        }
        a
    };
    // Reduce a polynomial (low-first, any length) modulo the monic `coeffs`.
    let reduce = |mut poly: Vec<usize>| -> Vec<usize> {
        while poly.len() > deg {
            let top = poly.len() - 1;
            let lead = poly[top];
            if lead != 0 {
                // subtract lead * x^(top-deg) * f
                for (i, &fc) in coeffs.iter().enumerate() {
                    let pos = top - deg + i;
                    let sub = (lead * (fc as usize)) % p_us;
                    poly[pos] = (poly[pos] + p_us * p_us - sub) % p_us;
                }
            }
            poly.pop();
        }
        poly.resize(deg, 0);
        poly
    };

    let mut add = vec![0u16; size * size];
    let mut mul = vec![0u16; size * size];
    for a in 0..size {
        let da = digits(a);
        for b in 0..size {
            let db = digits(b);
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p_us).collect();
            add[a * size + b] = index(&sum) as u16;
            let mut prod = vec![0usize; 2 * deg - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p_us;
                }
            }
            mul[a * size + b] = index(&reduce(prod)) as u16;
        }
    }
    let names = (0..size).map(|a| poly_name(&digits(a))).collect();
    FiniteRing::from_parts(
        size,
        add,
        mul,
        0,
        1,
        RingSpec::PolyQuot {
            p,
            coeffs: coeffs.to_vec(),
        },
        names,
        caps,
    )
}

/// Pretty-print a coefficient vector (low degree first) as a polynomial in x.
fn poly_name(digits: &[usize]) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (d, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (c, d) {
            (_, 0) => c.to_string(),
            (1, 1) => "x".to_string(),
            (_, 1) => format!("{c}x"),
            (1, _) => format!("x^{d}"),
            (_, _) => format!("{c}x^{d}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn build_product(
    ra: &Arc<FiniteRing>,
    rb: &Arc<FiniteRing>,
    caps: &Caps,
) -> Result<Arc<FiniteRing>, RingError> {
    let size = ra.size.checked_mul(rb.size).ok_or(RingError::SizeCap {
        size: usize::MAX,
        cap: caps.max_ring_size,
    })?;
    if size > caps.max_ring_size {
        return Err(RingError::SizeCap {
            size,
            cap: caps.max_ring_size,
        });
    }
    let nb = rb.size;
    let pair = |a: usize, b: usize| a * nb + b;
    let mut add = vec![0u16; size * size];
    let mut mul = vec![0u16; size * size];
    for a1 in 0..ra.size {
        for b1 in 0..nb {
            let x = pair(a1, b1);
            for a2 in 0..ra.size {
                for b2 in 0..nb {
                    let y = pair(a2, b2);
                    add[x * size + y] = pair(ra.add(a1, a2), rb.add(b1, b2)) as u16;
                    mul[x * size + y] = pair(ra.mul(a1, a2), rb.mul(b1, b2)) as u16;
                }
            }
        }
    }
    let mut names = Vec::with_capacity(size);
    for a in 0..ra.size {
        for b in 0..nb {
            names.push(format!("({},{})", ra.name(a), rb.name(b)));
        }
    }
    FiniteRing::from_parts(
        size,
        add,
        mul,
        pair(ra.zero, rb.zero),
        pair(ra.one, rb.one),
        RingSpec::Product(Box::new(ra.spec.clone()), Box::new(rb.spec.clone())),
        names,
        caps,
    )
}

fn build_from_table_file(path: &str, caps: &Caps) -> Result<Arc<FiniteRing>, RingError> {
    let text = std::fs::read_to_string(path).map_err(|source| RingError::TableIo {
        path: path.to_string(),
        source,
    })?;
    let tf: TableFile = serde_json::from_str(&text).map_err(|e| RingError::TableFormat {
        path: path.to_string(),
        msg: e.to_string(),
    })?;
    let size = tf.size;
    if tf.add.len() != size || tf.mul.len() != size {
        return Err(RingError::TableFormat {
            path: path.to_string(),
            msg: "add/mul must have `size` rows".into(),
        });
    }
    let mut add = vec![0u16; size * size];
    let mut mul = vec![0u16; size * size];
    for (rows, flat) in [(&tf.add, &mut add), (&tf.mul, &mut mul)] {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(RingError::TableFormat {
                    path: path.to_string(),
                    msg: format!("row {i} has {} entries, want {size}", row.len()),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(RingError::TableFormat {
                        path: path.to_string(),
                        msg: format!("entry ({i},{j}) = {v} out of range"),
                    });
                }
                flat[i * size + j] = v as u16;
            }
        }
    }
    let names = (0..size).map(|a| a.to_string()).collect();
    FiniteRing::from_parts(
        size,
        add,
        mul,
        tf.zero,
        tf.one,
        RingSpec::Table(path.to_string()),
        names,
        caps,
    )
}

/// Quotient of `base` by the ideal with the given member mask. Elements of
/// the quotient are cosets, indexed by their least base representative in
/// ascending order. Returns the quotient and the canonical projection.
///
/// `gens` is only used to record a readable `quot:(...)/[...]` spec.
pub fn quotient_ring(
    base: &Arc<FiniteRing>,
    ideal_mask: &[bool],
    gens: &[usize],
    caps: &Caps,
) -> Result<(Arc<FiniteRing>, RingHom), RingError> {
    let n = base.size;
    if ideal_mask.len() != n {
        return Err(RingError::Axiom("ideal mask length mismatch".into()));
    }
    if !ideal_mask[base.zero] {
        return Err(RingError::Axiom(
            "quotient mask does not contain zero".into(),
        ));
    }
    let members: Vec<usize> = (0..n).filter(|&a| ideal_mask[a]).collect();
    for &x in &members {
        for &y in &members {
            if !ideal_mask[base.add(x, y)] {
                return Err(RingError::Axiom(
                    "quotient mask not closed under addition".into(),
                ));
            }
        }
        for r in 0..n {
            if !ideal_mask[base.mul(r, x)] {
                return Err(RingError::Axiom(
                    "quotient mask not closed under ring action".into(),
                ));
            }
        }
    }

    // Least representative of each coset a + I.
    let mut rep = vec![usize::MAX; n];
    for (a, slot) in rep.iter_mut().enumerate() {
        let mut least = a;
        for &m in &members {
            let b = base.add(a, m);
            if b < least {
                least = b;
            }
        }
        *slot = least;
    }
    let mut reps: Vec<usize> = (0..n).filter(|&a| rep[a] == a).collect();
    reps.sort_unstable();
    let mut index_of = vec![usize::MAX; n];
    for (i, &r) in reps.iter().enumerate() {
        index_of[r] = i;
    }
    let size = reps.len();

    let mut add = vec![0u16; size * size];
    let mut mul = vec![0u16; size * size];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            add[i * size + j] = index_of[rep[base.add(a, b)]] as u16;
            mul[i * size + j] = index_of[rep[base.mul(a, b)]] as u16;
        }
    }
    let names = reps
        .iter()
        .map(|&r| format!("{}+I", base.name(r)))
        .collect();
    let mut sorted_gens = gens.to_vec();
    sorted_gens.sort_unstable();
    sorted_gens.dedup();
    let quotient = FiniteRing::from_parts(
        size,
        add,
        mul,
        index_of[rep[base.zero]],
        index_of[rep[base.one]],
        RingSpec::Quotient(Box::new(base.spec.clone()), sorted_gens),
        names,
        caps,
    )?;
    let map: Vec<usize> = (0..n).map(|a| index_of[rep[a]]).collect();
    let projection = RingHom::new(base.clone(), quotient.clone(), map)
        .map_err(|e| RingError::Axiom(format!("canonical projection failed validation: {e}")))?;
    Ok((quotient, projection))
}

/// A validated unital ring homomorphism between two finite rings.
pub struct RingHom {
    domain: Arc<FiniteRing>,
    codomain: Arc<FiniteRing>,
    map: Vec<u16>,
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHom({} -> {})", self.domain.spec, self.codomain.spec)
    }
}

impl RingHom {
    /// Validate totality, 0 -> 0, 1 -> 1, additivity and multiplicativity
    /// (full double loops) before accepting the map.
    pub fn new(
        domain: Arc<FiniteRing>,
        codomain: Arc<FiniteRing>,
        map: Vec<usize>,
    ) -> Result<RingHom, HomError> {
        if map.len() != domain.size {
            return Err(HomError::WrongLength {
                got: map.len(),
                want: domain.size,
            });
        }
        for (index, &image) in map.iter().enumerate() {
            if image >= codomain.size {
                return Err(HomError::ImageRange {
                    index,
                    image,
                    size: codomain.size,
                });
            }
        }
        if map[domain.zero] != codomain.zero {
            return Err(HomError::ZeroNotPreserved);
        }
        if map[domain.one] != codomain.one {
            return Err(HomError::OneNotPreserved);
        }
        for a in 0..domain.size {
            for b in 0..domain.size {
                if map[domain.add(a, b)] != codomain.add(map[a], map[b]) {
                    return Err(HomError::NotAdditive { a, b });
                }
                if map[domain.mul(a, b)] != codomain.mul(map[a], map[b]) {
                    return Err(HomError::NotMultiplicative { a, b });
                }
            }
        }
        Ok(RingHom {
            domain,
            codomain,
            map: map.into_iter().map(|v| v as u16).collect(),
        })
    }

    pub fn domain(&self) -> &Arc<FiniteRing> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteRing> {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a] as usize
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.size];
        for &v in &self.map {
            hit[v as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.size == self.codomain.size && self.is_surjective()
    }

    /// Image of each element, as a mask over the codomain.
    pub fn image_mask(&self) -> Vec<bool> {
        let mut hit = vec![false; self.codomain.size];
        for &v in &self.map {
            hit[v as usize] = true;
        }
        hit
    }
}

/// True when the two handles denote the same ring: identical allocation or
/// identical operation tables.
pub fn same_ring(a: &Arc<FiniteRing>, b: &Arc<FiniteRing>) -> bool {
    Arc::ptr_eq(a, b) || a.same_tables(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: u64) -> Arc<FiniteRing> {
        FiniteRing::build(&RingSpec::Zmod(n), &Caps::default()).unwrap()
    }

    /// Radical of an integer: product of its distinct prime factors.
    fn int_radical(mut n: usize) -> usize {
        let mut rad = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                rad *= d;
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            rad *= n;
        }
        rad
    }

    #[test]
    fn zmod_twelve_element_classes() {
        let r = zmod(12);
        assert_eq!(r.nilpotents(), vec![0, 6]);
        assert_eq!(r.units(), vec![1, 5, 7, 11]);
        assert_eq!(r.idempotents(), vec![0, 1, 4, 9]);
        assert!(!r.is_field());
    }

    #[test]
    fn zmod_nilpotents_match_integer_radical() {
        for n in 2..=48usize {
            let r = zmod(n as u64);
            let rad = int_radical(n);
            let expect: Vec<usize> = (0..n).filter(|a| a % rad == 0).collect();
            assert_eq!(r.nilpotents(), expect, "nilpotents of Z/{n}");
        }
    }

    #[test]
    fn zmod_units_match_coprimality() {
        for n in 2..=48usize {
            let r = zmod(n as u64);
            let expect: Vec<usize> = (0..n).filter(|a| gcd(*a, n) == 1).collect();
            assert_eq!(r.units(), expect, "units of Z/{n}");
        }
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
    }

    #[test]
    fn power_cycles_pinned_values() {
        let r12 = zmod(12);
        assert_eq!(
            r12.power_cycle(2),
            (2, 2),
            "powers of 2 mod 12: 1,2,4,8,4,8,..."
        );
        assert_eq!(r12.power_cycle(1), (0, 1));
        let r8 = zmod(8);
        assert_eq!(
            r8.power_cycle(2),
            (3, 1),
            "powers of 2 mod 8: 1,2,4,0,0,..."
        );
    }

    #[test]
    fn power_cycle_is_a_genuine_cycle_for_every_element() {
        for spec in [
            "zmod:12",
            "zmod:8",
            "zmod:36",
            "polyquot:p=2;f=0,0,0,1",
            "prod:(zmod:4,zmod:9)",
        ] {
            let r = FiniteRing::parse_and_build(spec, &Caps::default()).unwrap();
            for a in 0..r.size() {
                let (mu, c) = r.power_cycle(a);
                assert!(c >= 1);
                assert!(
                    mu + c <= r.size() as u32 + 1,
                    "cycle bound for {a} in {spec}"
                );
                // a^(mu+c) = a^mu, and the values before mu are all distinct
                // from everything after them.
                assert_eq!(r.pow(a, (mu + c) as u64), r.pow(a, mu as u64));
                for j in 0..=c {
                    assert_eq!(
                        r.pow(a, (mu + j + c) as u64),
                        r.pow(a, (mu + j) as u64),
                        "period repeats for {a} in {spec}"
                    );
                }
            }
        }
    }

    #[test]
    fn nilpotent_iff_power_size_vanishes() {
        // Cross-check the cycle-based nilpotence test against the fixed
        // exponent n = |R|, which must agree on finite rings.
        for spec in [
            "zmod:12",
            "zmod:8",
            "zmod:30",
            "polyquot:p=3;f=0,0,1",
            "prod:(zmod:2,zmod:8)",
        ] {
            let r = FiniteRing::parse_and_build(spec, &Caps::default()).unwrap();
            for a in 0..r.size() {
                assert_eq!(
                    r.is_nilpotent(a),
                    r.pow(a, r.size() as u64) == r.zero(),
                    "nilpotence of {a} in {spec}"
                );
            }
        }
    }

    #[test]
    fn polyquot_field_of_four() {
        // x^2 + x + 1 is irreducible over F_2, so this is the field F_4.
        let r = FiniteRing::parse_and_build("polyquot:p=2;f=1,1,1", &Caps::default()).unwrap();
        assert_eq!(r.size(), 4);
        assert!(r.is_field());
        // x * x = x + 1
        let x = 2; // digits (0,1)
        assert_eq!(r.mul(x, x), 3, "x^2 = x + 1 in F_4");
        assert_eq!(r.name(3), "x+1");
    }

    #[test]
    fn polyquot_nilpotent_generator() {
        // F_2[x]/(x^2): x is nilpotent.
        let r = FiniteRing::parse_and_build("polyquot:p=2;f=0,0,1", &Caps::default()).unwrap();
        assert_eq!(r.size(), 4);
        assert!(r.is_nilpotent(2));
        assert_eq!(r.nilpotents(), vec![0, 2]);
        assert!(!r.is_field());
    }

    #[test]
    fn product_componentwise() {
        let r = FiniteRing::parse_and_build("prod:(zmod:4,zmod:3)", &Caps::default()).unwrap();
        assert_eq!(r.size(), 12);
        assert_eq!(r.name(r.one()), "(1,1)");
        // (2,1) * (2,2) = (0,2)
        let a = 2 * 3 + 1;
        let b = 2 * 3 + 2;
        assert_eq!(r.mul(a, b), 2);
    }

    #[test]
    fn quotient_of_zmod_matches_smaller_zmod() {
        let r = FiniteRing::parse_and_build("quot:(zmod:12)/[6]", &Caps::default()).unwrap();
        let z6 = zmod(6);
        assert!(r.same_tables(&z6), "Z/12 mod (6) has the Z/6 tables");
        assert_eq!(r.name(3), "3+I");
    }

    #[test]
    fn quotient_by_whole_ring_is_zero_ring() {
        let r = FiniteRing::parse_and_build("quot:(zmod:12)/[1]", &Caps::default()).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.zero(), r.one());
        assert_eq!(r.pow(0, 0), 0);
    }

    #[test]
    fn zero_ring_is_admitted() {
        let r = zmod(1);
        assert_eq!(r.size(), 1);
        assert_eq!(r.zero(), r.one());
        assert_eq!(r.nilpotents(), vec![0]);
        assert_eq!(r.units(), vec![0]);
        assert!(!r.is_field());
        assert_eq!(
            r.power_cycle(0),
            (0, 1),
            "1 = 0 in the zero ring, so the sequence is constant"
        );
    }

    #[test]
    fn crt_map_is_a_ring_hom() {
        let r12 = zmod(12);
        let prod = FiniteRing::parse_and_build("prod:(zmod:4,zmod:3)", &Caps::default()).unwrap();
        let map: Vec<usize> = (0..12).map(|a| (a % 4) * 3 + (a % 3)).collect();
        let hom = RingHom::new(r12, prod, map).expect("CRT map is a homomorphism");
        assert!(hom.is_bijective());
    }

    #[test]
    fn non_hom_map_rejected_with_offending_pair() {
        let r12 = zmod(12);
        let r6 = zmod(6);
        // a |-> a mod 6 is a hom; corrupt one entry.
        let mut map: Vec<usize> = (0..12).map(|a| a % 6).collect();
        map[7] = 2;
        let err = RingHom::new(r12, r6, map).unwrap_err();
        match err {
            HomError::NotAdditive { .. } | HomError::NotMultiplicative { .. } => {}
            other => panic!("expected an additivity/multiplicativity failure, got {other}"),
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "zmod:12",
            "polyquot:p=2;f=0,0,1",
            "polyquot:p=3;f=2,0,1,1",
            "prod:(zmod:4,zmod:3)",
            "prod:(prod:(zmod:2,zmod:2),zmod:3)",
            "prod:(polyquot:p=2;f=0,0,1,zmod:3)",
            "prod:(polyquot:p=2;f=0,0,1,polyquot:p=2;f=1,1,1)",
            "prod:(zmod:3,polyquot:p=2;f=0,0,1)",
            "quot:(zmod:12)/[6]",
            "quot:(prod:(zmod:4,zmod:3))/[3,6]",
            "quot:(zmod:8)/[]",
            "table:/tmp/ring.json",
        ] {
            let spec: RingSpec = s.parse().unwrap_or_else(|e| panic!("parsing {s:?}: {e}"));
            assert_eq!(spec.to_string(), s, "display inverts parse");
            let again: RingSpec = spec.to_string().parse().unwrap();
            assert_eq!(again, spec);
        }
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for s in [
            "zmod:0",
            "zmod:x",
            "polyquot:p=4;f=0,1",  // 4 is not prime
            "polyquot:p=2;f=1",    // degree 0
            "polyquot:p=2;f=0,2",  // not monic / not reduced
            "prod:(zmod:4)",       // missing component
            "prod:(zmod:4,zmod:3", // unbalanced
            "quot:(zmod:12)/6",    // missing brackets
            "quot:(zmod:12)/[20]", // generator out of range
            "ideal:whatever",
            "table:",
        ] {
            assert!(
                FiniteRing::parse_and_build(s, &Caps::default()).is_err(),
                "{s:?} should be rejected"
            );
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let err = FiniteRing::parse_and_build("zmod:300", &Caps::default()).unwrap_err();
        match err {
            RingError::SizeCap {
                size: 300,
                cap: 256,
            } => {}
            other => panic!("expected a size-cap error, got {other}"),
        }
        // The cap also applies to the base ring of a quotient.
        assert!(FiniteRing::parse_and_build("quot:(zmod:300)/[10]", &Caps::default()).is_err());
    }

    #[test]
    fn table_file_round_trip_and_validation() {
        use std::io::Write;

        // Dump Z/6 as a table file and rebuild it.
        let z6 = zmod(6);
        let rows = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
            (0..6).map(|a| (0..6).map(|b| f(a, b)).collect()).collect()
        };
        let good = serde_json::json!({
            "size": 6,
            "add": rows(&|a, b| z6.add(a, b)),
            "mul": rows(&|a, b| z6.mul(a, b)),
            "zero": 0,
            "one": 1,
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z6.json");
        write!(std::fs::File::create(&path).unwrap(), "{good}").unwrap();
        let r = FiniteRing::parse_and_build(&format!("table:{}", path.display()), &Caps::default())
            .unwrap();
        assert!(r.same_tables(&z6));

        // Corrupt one multiplication entry: associativity must catch it.
        let mut bad = good.clone();
        bad["mul"][2][3] = serde_json::json!(1);
        let bad_path = dir.path().join("bad.json");
        write!(std::fs::File::create(&bad_path).unwrap(), "{bad}").unwrap();
        let err =
            FiniteRing::parse_and_build(&format!("table:{}", bad_path.display()), &Caps::default())
                .unwrap_err();
        assert!(matches!(err, RingError::Axiom(_)), "got {err}");
    }

    #[test]
    fn span_generates_expected_subgroups() {
        let r = zmod(12);
        let mask3 = r.span(&[3]);
        let got: Vec<usize> = (0..12).filter(|&a| mask3[a]).collect();
        assert_eq!(got, vec![0, 3, 6, 9]);
        let mask46 = r.span(&[4, 6]);
        let got: Vec<usize> = (0..12).filter(|&a| mask46[a]).collect();
        assert_eq!(got, vec![0, 2, 4, 6, 8, 10]);
        let mask_empty = r.span(&[]);
        assert_eq!((0..12).filter(|&a| mask_empty[a]).count(), 1);
    }
}
