//! The executable theorem checks. Each function runs one named result over
//! every applicable instance of a ring context and returns [`Verdict`]s;
//! failures and cap-skips are data, never panics.
//!
//! Check identifiers are the wire format of the report schema (see
//! [`crate::verdict::CHECK_IDS`]); [`run_checks`] dispatches them in report
//! order.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use crate::ctx::{CtxError, RingCtx};
use crate::endo::{
    all_endomorphisms, endo_ring_is_commutative, module_of_ideal_power,
    principal_commutativity_threshold, EndoError,
};
use crate::ideal::Ideal;
use crate::purity::{is_npure, principal_radical_witness, uniform_exponent_witness};
use crate::ring::{FiniteRing, RingHom, RingSpec};
use crate::spectrum::{is_gelfand, is_mp_ring, is_reduced, is_zero_dimensional};
use crate::verdict::Verdict;
use crate::zint;

fn ms(t0: Instant) -> f64 {
    t0.elapsed().as_secs_f64() * 1000.0
}

fn ring_subject(ctx: &RingCtx) -> String {
    ctx.ring().spec().to_string()
}

fn ideal_subject(ctx: &RingCtx, idx: usize) -> String {
    format!(
        "{}; I={}",
        ring_subject(ctx),
        ctx.ideals()[idx].display_members()
    )
}

/// Run one instance, timing it and converting infrastructure errors (caps on
/// derived rings) into skipped verdicts.
fn instance(
    check_id: &str,
    subject: String,
    body: impl FnOnce() -> Result<Verdict, CtxError>,
) -> Verdict {
    let t0 = Instant::now();
    let verdict = match body() {
        Ok(v) => v,
        Err(e) => Verdict::skipped(check_id, subject, json!({ "error": e.to_string() })),
    };
    verdict.with_elapsed(ms(t0))
}

/// Baseline facts every finite commutative ring must exhibit: the spectrum
/// collapses (primes = maximals = minimals, dimension zero) and the Jacobson
/// radical coincides with the nilradical.
pub fn check_structural(ctx: &RingCtx) -> Verdict {
    let subject = ring_subject(ctx);
    instance("Structural", subject.clone(), || {
        let s = ctx.spectrum();
        let collapse =
            ctx.prime_idxs() == ctx.maximal_idxs() && ctx.prime_idxs() == ctx.minimal_idxs();
        let zero_dim = is_zero_dimensional(s);
        let radicals_coincide = s.jacobson == *ctx.nilradical();
        let reduced_consistent = is_reduced(ctx.ring()) == ctx.nilradical().is_zero();
        Ok(
            if collapse && zero_dim && radicals_coincide && reduced_consistent {
                Verdict::pass("Structural", subject)
            } else {
                Verdict::fail(
                    "Structural",
                    subject,
                    json!({
                        "primes": ctx.prime_idxs(),
                        "maximals": ctx.maximal_idxs(),
                        "minimals": ctx.minimal_idxs(),
                        "zeroDimensional": zero_dim,
                        "jacobsonEqualsNilradical": radicals_coincide,
                        "reducedConsistent": reduced_consistent,
                    }),
                )
            },
        )
    })
}

/// Five-way agreement of the N-purity criteria, plus the standing purity
/// facts: pure implies N-pure, complete valid witnesses, zero witnesses on
/// nil ideals, and pure = N-pure on reduced rings.
pub fn check_t26(ctx: &RingCtx) -> Vec<Verdict> {
    let ring = ctx.ring();
    let reduced = is_reduced(ring);
    let nil = ctx.nilradical();
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("T2.6", subject.clone(), || {
                let ideal = &ctx.ideals()[idx];
                let v = ctx.purity(idx);
                let agree = v.npure_consistent();
                let pure_implies = !v.pure || v.is_npure();
                let complete =
                    !v.is_npure() || ideal.elems().iter().all(|a| v.witnesses.contains_key(a));
                let valid = v.witnesses.iter().all(|(&a, &(n, b))| {
                    ideal.contains(b)
                        && ring.mul(ring.pow(a, n as u64), ring.sub(ring.one(), b)) == ring.zero()
                });
                let nil_zero_witness = !ideal.is_subset_of(nil)
                    || v.witnesses.values().all(|&(_, b)| b == ring.zero());
                let reduced_match = !reduced || v.pure == v.is_npure();
                Ok(
                    if agree
                        && pure_implies
                        && complete
                        && valid
                        && nil_zero_witness
                        && reduced_match
                    {
                        Verdict::pass("T2.6", subject)
                    } else {
                        Verdict::fail(
                            "T2.6",
                            subject,
                            json!({
                                "criteria": v.npure,
                                "pure": v.pure,
                                "fiveWayAgreement": agree,
                                "pureImpliesNPure": pure_implies,
                                "witnessesComplete": complete,
                                "witnessesValid": valid,
                                "nilIdealZeroWitness": nil_zero_witness,
                                "reducedPureEqualsNPure": reduced_match,
                            }),
                        )
                    },
                )
            })
        })
        .collect()
}

/// `√I = ⋂ √Ker π_m` over the maximal ideals containing `I` (empty
/// intersection is the whole ring).
pub fn check_prop_ii(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("PropII", subject.clone(), || {
                if !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("PropII", subject));
                }
                let ideal = &ctx.ideals()[idx];
                let mut inter = Ideal::whole(ctx.ring());
                for &m in ctx.maximal_idxs() {
                    if !ideal.is_subset_of(&ctx.ideals()[m]) {
                        continue;
                    }
                    let k = ctx.kernel_of_pi_idx(m)?;
                    inter = inter.intersect(ctx.radical(k))?;
                }
                Ok(if inter == *ctx.radical(idx) {
                    Verdict::pass("PropII", subject)
                } else {
                    Verdict::fail(
                        "PropII",
                        subject,
                        json!({
                            "radical": ctx.radical(idx).display_members(),
                            "kernelIntersection": inter.display_members(),
                        }),
                    )
                })
            })
        })
        .collect()
}

/// `I ⊆ √Ker π_m` for every maximal ideal containing the N-pure `I`.
pub fn check_cor_i(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("CorI", subject.clone(), || {
                if !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("CorI", subject));
                }
                let ideal = &ctx.ideals()[idx];
                let containing: Vec<usize> = ctx
                    .maximal_idxs()
                    .iter()
                    .copied()
                    .filter(|&m| ideal.is_subset_of(&ctx.ideals()[m]))
                    .collect();
                if containing.is_empty() {
                    return Ok(Verdict::vacuous("CorI", subject));
                }
                for m in containing {
                    let k = ctx.kernel_of_pi_idx(m)?;
                    if !ideal.is_subset_of(ctx.radical(k)) {
                        return Ok(Verdict::fail(
                            "CorI",
                            subject,
                            json!({
                                "maximal": ctx.ideals()[m].display_members(),
                                "radicalOfKernel": ctx.radical(k).display_members(),
                            }),
                        ));
                    }
                }
                Ok(Verdict::pass("CorI", subject))
            })
        })
        .collect()
}

/// Everything the localization at `S = 1 + I` says about one ideal: the
/// four criteria that characterize N-purity (pulled-back spectrum,
/// localized nilradical, kernel radical, induced isomorphism on reduced
/// quotients) and the two that characterize purity (kernel equals the
/// ideal, localized ideal vanishes). Each criterion carrying two
/// independent routes also records whether the routes agreed.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OnePlusCriteria {
    pub n_pure: bool,
    pub pure: bool,
    pub spectrum_pullback: bool,
    pub localized_nilradical: bool,
    pub kernel_radical: bool,
    pub induced_iso: bool,
    pub induced_iso_routes_agree: bool,
    pub kernel_equals_ideal: bool,
    pub certificate_transported: bool,
    pub localized_ideal_zero: bool,
    pub image_zero_routes_agree: bool,
}

/// Compute [`OnePlusCriteria`] for the ideal at lattice index `idx`.
pub fn one_plus_criteria(ctx: &RingCtx, idx: usize) -> Result<OnePlusCriteria, CtxError> {
    let ideal = &ctx.ideals()[idx];
    let l = ctx.localize_one_plus(idx)?;
    let proj = &l.loc.projection;

    let mut pulled: Vec<usize> = l
        .ctx
        .spectrum()
        .primes
        .iter()
        .map(|q| {
            Ok(ctx
                .index_of(&q.preimage(proj)?)
                .expect("preimage of a prime is in the lattice"))
        })
        .collect::<Result<_, CtxError>>()?;
    pulled.sort_unstable();
    let expected: Vec<usize> = ctx
        .prime_idxs()
        .iter()
        .copied()
        .filter(|&p| ideal.is_subset_of(&ctx.ideals()[p]))
        .collect();
    let spectrum_pullback = pulled == expected;

    let localized_nilradical = *l.ctx.nilradical() == ctx.radical(idx).pushforward(proj)?;

    let kidx = ctx
        .index_of(&l.loc.kernel)
        .expect("kernel is in the lattice");
    let kernel_radical = ctx.radical_idx(kidx) == ctx.radical_idx(idx);

    // Induced map on reduced quotients, two routes: compare kernels, and
    // materialize the map itself.
    let rad_idx = ctx.radical_idx(idx);
    let via_kernel = ctx.index_of(&l.ctx.nilradical().preimage(proj)?) == Some(rad_idx);
    let rq = ctx.quotient_by(rad_idx)?;
    let nq = l.ctx.quotient_by(l.ctx.nilradical_idx())?;
    let mut table = vec![None; rq.ctx.ring().size()];
    let mut single_valued = true;
    for x in 0..ctx.ring().size() {
        let c = rq.projection.apply(x);
        let v = nq.projection.apply(proj.apply(x));
        match table[c] {
            None => table[c] = Some(v),
            Some(prev) if prev == v => {}
            Some(_) => {
                single_valued = false;
                break;
            }
        }
    }
    let induced_iso = single_valued && {
        let table: Vec<usize> = table.into_iter().map(|t| t.unwrap()).collect();
        RingHom::new(rq.ctx.ring().clone(), nq.ctx.ring().clone(), table)
            .map(|h| h.is_bijective())
            .unwrap_or(false)
    };
    let induced_iso_routes_agree = induced_iso == via_kernel;

    let image = ideal.pushforward(proj)?;
    let localized_ideal_zero = image.is_zero();
    let image_zero_routes_agree = localized_ideal_zero == ideal.is_subset_of(&l.loc.kernel);
    let kernel_equals_ideal = kidx == idx;
    // When the kernel is exactly I, the localization must literally be
    // R/I: same tables, same projection, and the inverse certificate must
    // remain valid after the transport.
    let certificate_transported = !kernel_equals_ideal || {
        let q = ctx.quotient_by(idx)?;
        q.ctx.ring().same_tables(l.ctx.ring())
            && (0..ctx.ring().size()).all(|x| q.projection.apply(x) == l.loc.projection.apply(x))
            && l.loc
                .inverses
                .iter()
                .all(|(&s, &t)| q.ctx.ring().mul(q.projection.apply(s), t) == q.ctx.ring().one())
    };

    Ok(OnePlusCriteria {
        n_pure: ctx.purity(idx).is_npure(),
        pure: ctx.purity(idx).pure,
        spectrum_pullback,
        localized_nilradical,
        kernel_radical,
        induced_iso,
        induced_iso_routes_agree,
        kernel_equals_ideal,
        certificate_transported,
        localized_ideal_zero,
        image_zero_routes_agree,
    })
}

/// The four localization criteria at `S = 1 + I`, each required to hold
/// exactly when `I` is N-pure.
pub fn check_thm_iii(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("ThmIII", subject.clone(), || {
                let c = one_plus_criteria(ctx, idx)?;
                if !c.induced_iso_routes_agree {
                    return Ok(Verdict::fail(
                        "ThmIII",
                        subject,
                        json!({ "inducedIsoRoutesDisagree": true }),
                    ));
                }
                let criteria = [
                    c.spectrum_pullback,
                    c.localized_nilradical,
                    c.kernel_radical,
                    c.induced_iso,
                ];
                Ok(if criteria.iter().all(|&b| b == c.n_pure) {
                    Verdict::pass("ThmIII", subject)
                } else {
                    Verdict::fail("ThmIII", subject, serde_json::to_value(&c).unwrap())
                })
            })
        })
        .collect()
}

/// The two localization criteria at `S = 1 + I` that characterize purity:
/// the kernel is exactly `I` (with the certificate transported to `R/I`),
/// and the localized ideal vanishes.
pub fn check_thm_iv(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("ThmIV", subject.clone(), || {
                let c = one_plus_criteria(ctx, idx)?;
                if !c.image_zero_routes_agree {
                    return Ok(Verdict::fail(
                        "ThmIV",
                        subject,
                        json!({ "imageZeroRoutesDisagree": true }),
                    ));
                }
                if c.kernel_equals_ideal && !c.certificate_transported {
                    return Ok(Verdict::fail(
                        "ThmIV",
                        subject,
                        json!({ "certificateTransportFailed": true }),
                    ));
                }
                Ok(
                    if c.kernel_equals_ideal == c.pure && c.localized_ideal_zero == c.pure {
                        Verdict::pass("ThmIV", subject)
                    } else {
                        Verdict::fail("ThmIV", subject, serde_json::to_value(&c).unwrap())
                    },
                )
            })
        })
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The canonical homomorphisms out of a ring: every quotient projection,
/// the product projections when the ring is a direct product, and the
/// splitting map onto the coprime factors when the ring is `Z/nZ`.
pub fn canonical_homs(ctx: &RingCtx) -> Result<Vec<(String, RingHom)>, CtxError> {
    let ring = ctx.ring();
    let mut homs = Vec::new();
    for idx in 0..ctx.ideals().len() {
        let q = ctx.quotient_by(idx)?;
        let desc = format!("projection onto R/{}", ctx.ideals()[idx].display_members());
        let map: Vec<usize> = (0..ring.size()).map(|x| q.projection.apply(x)).collect();
        let hom =
            RingHom::new(ring.clone(), q.ctx.ring().clone(), map).expect("projection revalidates");
        homs.push((desc, hom));
    }
    if let RingSpec::Product(a, b) = ring.spec() {
        let left = FiniteRing::build(a, ctx.caps())?;
        let right = FiniteRing::build(b, ctx.caps())?;
        let map_left: Vec<usize> = (0..ring.size()).map(|i| i / right.size()).collect();
        let map_right: Vec<usize> = (0..ring.size()).map(|i| i % right.size()).collect();
        homs.push((
            format!("product projection onto {}", left.spec()),
            RingHom::new(ring.clone(), left, map_left)
                .expect("componentwise projection is a homomorphism"),
        ));
        homs.push((
            format!("product projection onto {}", right.spec()),
            RingHom::new(ring.clone(), right, map_right)
                .expect("componentwise projection is a homomorphism"),
        ));
    }
    if let RingSpec::Zmod(n) = *ring.spec() {
        let mut m = 2;
        while m * m < n {
            if n % m == 0 && gcd(m, n / m) == 1 {
                let k = n / m;
                let spec =
                    RingSpec::Product(Box::new(RingSpec::Zmod(m)), Box::new(RingSpec::Zmod(k)));
                let target = FiniteRing::build(&spec, ctx.caps())?;
                let map: Vec<usize> = (0..ring.size())
                    .map(|x| (x as u64 % m * k + x as u64 % k) as usize)
                    .collect();
                homs.push((
                    format!("splitting onto {spec}"),
                    RingHom::new(ring.clone(), target, map)
                        .expect("residue splitting is a homomorphism"),
                ));
            }
            m += 1;
        }
    }
    Ok(homs)
}

/// Pushforward of every N-pure ideal along every canonical homomorphism
/// stays N-pure. One verdict per homomorphism, covering all ideals.
pub fn check_lem_ii(ctx: &RingCtx) -> Vec<Verdict> {
    let t0 = Instant::now();
    let homs = match canonical_homs(ctx) {
        Ok(h) => h,
        Err(e) => {
            return vec![Verdict::skipped(
                "LemII",
                ring_subject(ctx),
                json!({ "error": e.to_string() }),
            )
            .with_elapsed(ms(t0))]
        }
    };
    homs.into_iter()
        .map(|(desc, hom)| {
            let subject = format!("{}; φ={}", ring_subject(ctx), desc);
            instance("LemII", subject.clone(), || {
                for idx in 0..ctx.ideals().len() {
                    if !ctx.purity(idx).is_npure() {
                        continue;
                    }
                    let image = ctx.ideals()[idx].pushforward(&hom)?;
                    if !is_npure(&image) {
                        return Ok(Verdict::fail(
                            "LemII",
                            subject,
                            json!({
                                "ideal": ctx.ideals()[idx].display_members(),
                                "image": image.display_members(),
                            }),
                        ));
                    }
                }
                Ok(Verdict::pass("LemII", subject))
            })
        })
        .collect()
}

/// The kernel facts at maximal and prime ideals: `Ker π_m` is pure
/// (Gelfand hypothesis), `m` is pure exactly when `Ker π_m = m`, and
/// `√Ker π_p = p` for N-pure primes.
pub fn check_gelfand_kernels(ctx: &RingCtx, enabled: &BTreeSet<String>) -> Vec<Verdict> {
    let mut out = Vec::new();
    let subject = ring_subject(ctx);
    let gelfand = is_gelfand(ctx.spectrum());

    if enabled.contains("LemIII") {
        out.push(instance("LemIII", subject.clone(), || {
            if !gelfand {
                return Ok(Verdict::vacuous("LemIII", subject.clone()));
            }
            for &m in ctx.maximal_idxs() {
                let k = ctx.kernel_of_pi_idx(m)?;
                if !ctx.purity(k).pure {
                    return Ok(Verdict::fail(
                        "LemIII",
                        subject.clone(),
                        json!({
                            "maximal": ctx.ideals()[m].display_members(),
                            "kernel": ctx.ideals()[k].display_members(),
                        }),
                    ));
                }
            }
            Ok(Verdict::pass("LemIII", subject.clone()))
        }));
    }

    if enabled.contains("PropIV") {
        out.push(instance("PropIV", subject.clone(), || {
            if !gelfand {
                return Ok(Verdict::vacuous("PropIV", subject.clone()));
            }
            for &m in ctx.maximal_idxs() {
                let k = ctx.kernel_of_pi_idx(m)?;
                if ctx.purity(m).pure != (k == m) {
                    return Ok(Verdict::fail(
                        "PropIV",
                        subject.clone(),
                        json!({
                            "maximal": ctx.ideals()[m].display_members(),
                            "pure": ctx.purity(m).pure,
                            "kernel": ctx.ideals()[k].display_members(),
                        }),
                    ));
                }
            }
            Ok(Verdict::pass("PropIV", subject.clone()))
        }));
    }

    if enabled.contains("LemIV") {
        out.push(instance("LemIV", subject.clone(), || {
            for &p in ctx.prime_idxs() {
                if !ctx.purity(p).is_npure() {
                    continue;
                }
                let k = ctx.kernel_of_pi_idx(p)?;
                if ctx.radical_idx(k) != p {
                    return Ok(Verdict::fail(
                        "LemIV",
                        subject.clone(),
                        json!({
                            "prime": ctx.ideals()[p].display_members(),
                            "radicalOfKernel": ctx.radical(k).display_members(),
                        }),
                    ));
                }
            }
            Ok(Verdict::pass("LemIV", subject.clone()))
        }));
    }
    out
}

/// A proper N-pure ideal containing a prime is that prime, and minimal.
pub fn check_lem_v(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("LemV", subject.clone(), || {
                let ideal = &ctx.ideals()[idx];
                if !ideal.is_proper() || !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("LemV", subject));
                }
                let inside: Vec<usize> = ctx
                    .prime_idxs()
                    .iter()
                    .copied()
                    .filter(|&p| ctx.ideals()[p].is_subset_of(ideal))
                    .collect();
                if inside.is_empty() {
                    return Ok(Verdict::vacuous("LemV", subject));
                }
                let minimal = ctx.minimal_idxs().contains(&idx);
                let equal = inside.iter().all(|&p| p == idx);
                Ok(if minimal && equal {
                    Verdict::pass("LemV", subject)
                } else {
                    Verdict::fail(
                        "LemV",
                        subject,
                        json!({
                            "containedPrimes": inside
                                .iter()
                                .map(|&p| ctx.ideals()[p].display_members())
                                .collect::<Vec<_>>(),
                            "minimal": minimal,
                        }),
                    )
                })
            })
        })
        .collect()
}

/// N-pure ideals inside the Jacobson radical consist of nilpotents. The
/// instance is vacuous when only the zero ideal qualifies.
pub fn check_lem_vi(ctx: &RingCtx) -> Verdict {
    let subject = ring_subject(ctx);
    instance("LemVI", subject.clone(), || {
        let jacobson = &ctx.spectrum().jacobson;
        let qualifying: Vec<usize> = (0..ctx.ideals().len())
            .filter(|&k| ctx.purity(k).is_npure() && ctx.ideals()[k].is_subset_of(jacobson))
            .collect();
        if qualifying.iter().all(|&k| ctx.ideals()[k].is_zero()) {
            return Ok(Verdict::vacuous("LemVI", subject));
        }
        for &k in &qualifying {
            if !ctx.ideals()[k].is_subset_of(ctx.nilradical()) {
                return Ok(Verdict::fail(
                    "LemVI",
                    subject,
                    json!({
                        "ideal": ctx.ideals()[k].display_members(),
                        "nilradical": ctx.nilradical().display_members(),
                    }),
                ));
            }
        }
        Ok(Verdict::pass("LemVI", subject))
    })
}

/// Two N-pure ideals with the same radical give isomorphic reduced
/// localizations: equal composite kernels, plus an explicitly materialized
/// isomorphism. One verdict per unordered pair.
pub fn check_cor_ii(ctx: &RingCtx) -> Vec<Verdict> {
    let mut out = Vec::new();
    for i in 0..ctx.ideals().len() {
        if !ctx.purity(i).is_npure() {
            continue;
        }
        for j in i..ctx.ideals().len() {
            if ctx.radical_idx(i) != ctx.radical_idx(j) {
                continue;
            }
            let subject = format!(
                "{}; I={}; J={}",
                ring_subject(ctx),
                ctx.ideals()[i].display_members(),
                ctx.ideals()[j].display_members()
            );
            out.push(instance("CorII", subject.clone(), || {
                let rad = ctx.radical(i);
                let composite = |idx: usize| -> Result<_, CtxError> {
                    let l = ctx.localize_one_plus(idx)?;
                    let image = rad.pushforward(&l.loc.projection)?;
                    let kernel = image.preimage(&l.loc.projection)?;
                    let inner = l
                        .ctx
                        .index_of(&image)
                        .expect("image is in the localized lattice");
                    let q = l.ctx.quotient_by(inner)?;
                    // Total projection R -> (S⁻¹R)/(S⁻¹√I) as a table.
                    let total: Vec<usize> = (0..ctx.ring().size())
                        .map(|x| q.projection.apply(l.loc.projection.apply(x)))
                        .collect();
                    Ok((kernel, q.ctx.ring().clone(), total))
                };
                let (kernel_i, ring_i, total_i) = composite(i)?;
                let (kernel_j, ring_j, total_j) = composite(j)?;
                let kernels_equal = kernel_i == kernel_j;
                // Explicit isomorphism through the common source.
                let mut table = vec![None; ring_i.size()];
                let mut single_valued = true;
                for x in 0..ctx.ring().size() {
                    match table[total_i[x]] {
                        None => table[total_i[x]] = Some(total_j[x]),
                        Some(prev) if prev == total_j[x] => {}
                        Some(_) => {
                            single_valued = false;
                            break;
                        }
                    }
                }
                let iso = single_valued && {
                    let table: Vec<usize> = table.into_iter().map(|t| t.unwrap()).collect();
                    RingHom::new(ring_i.clone(), ring_j.clone(), table)
                        .map(|h| h.is_bijective())
                        .unwrap_or(false)
                };
                Ok(if kernels_equal && iso {
                    Verdict::pass("CorII", subject)
                } else {
                    Verdict::fail(
                        "CorII",
                        subject,
                        json!({
                            "kernelFirst": kernel_i.display_members(),
                            "kernelSecond": kernel_j.display_members(),
                            "explicitIsomorphism": iso,
                        }),
                    )
                })
            }));
        }
    }
    out
}

/// The Gelfand and mp properties transfer between `R/I` and the
/// localization at `1 + I`. Both hypothesis variants (pure, N-pure) are
/// run and reported separately.
pub fn check_cor_iii(ctx: &RingCtx) -> Vec<Verdict> {
    let mut out = Vec::new();
    for idx in 0..ctx.ideals().len() {
        for variant in ["pure", "npure"] {
            let subject = format!("{}; hypothesis={}", ideal_subject(ctx, idx), variant);
            out.push(instance("CorIII", subject.clone(), || {
                let holds = match variant {
                    "pure" => ctx.purity(idx).pure,
                    _ => ctx.purity(idx).is_npure(),
                };
                if !holds {
                    return Ok(Verdict::vacuous("CorIII", subject));
                }
                let q = ctx.quotient_by(idx)?;
                let l = ctx.localize_one_plus(idx)?;
                let gelfand_match = is_gelfand(q.ctx.spectrum()) == is_gelfand(l.ctx.spectrum());
                let mp_match = is_mp_ring(q.ctx.spectrum()) == is_mp_ring(l.ctx.spectrum());
                Ok(if gelfand_match && mp_match {
                    Verdict::pass("CorIII", subject)
                } else {
                    Verdict::fail(
                        "CorIII",
                        subject,
                        json!({
                            "quotientGelfand": is_gelfand(q.ctx.spectrum()),
                            "localizedGelfand": is_gelfand(l.ctx.spectrum()),
                            "quotientMp": is_mp_ring(q.ctx.spectrum()),
                            "localizedMp": is_mp_ring(l.ctx.spectrum()),
                        }),
                    )
                })
            }));
        }
    }
    out
}

/// `√I` is the intersection of the minimal primes containing `I` (empty
/// intersection is the whole ring).
pub fn check_cor_iv(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("CorIV", subject.clone(), || {
                if !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("CorIV", subject));
                }
                let ideal = &ctx.ideals()[idx];
                let mut inter = Ideal::whole(ctx.ring());
                for &p in ctx.minimal_idxs() {
                    if ideal.is_subset_of(&ctx.ideals()[p]) {
                        inter = inter.intersect(&ctx.ideals()[p])?;
                    }
                }
                Ok(if inter == *ctx.radical(idx) {
                    Verdict::pass("CorIV", subject)
                } else {
                    Verdict::fail(
                        "CorIV",
                        subject,
                        json!({
                            "radical": ctx.radical(idx).display_members(),
                            "minimalIntersection": inter.display_members(),
                        }),
                    )
                })
            })
        })
        .collect()
}

/// The two descriptions of the radical-kernel intersection over the
/// maximal ideals containing `I` agree and yield an N-pure ideal.
pub fn check_thm_ii(ctx: &RingCtx) -> Vec<Verdict> {
    let mp = is_mp_ring(ctx.spectrum());
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("ThmII", subject.clone(), || {
                if !mp {
                    return Ok(Verdict::vacuous("ThmII", subject));
                }
                let ideal = &ctx.ideals()[idx];
                let containing: Vec<usize> = ctx
                    .maximal_idxs()
                    .iter()
                    .copied()
                    .filter(|&m| ideal.is_subset_of(&ctx.ideals()[m]))
                    .collect();
                let mut j1 = Ideal::whole(ctx.ring());
                for &m in &containing {
                    let k = ctx.kernel_of_pi_idx(m)?;
                    j1 = j1.intersect(ctx.radical(k))?;
                }
                let mut j2 = Ideal::whole(ctx.ring());
                for &m in &containing {
                    for &p in ctx.minimal_idxs() {
                        if ctx.ideals()[p].is_subset_of(&ctx.ideals()[m]) {
                            j2 = j2.intersect(&ctx.ideals()[p])?;
                        }
                    }
                }
                let npure = ctx
                    .index_of(&j1)
                    .map(|k| ctx.purity(k).is_npure())
                    .unwrap_or(false);
                Ok(if j1 == j2 && npure {
                    Verdict::pass("ThmII", subject)
                } else {
                    Verdict::fail(
                        "ThmII",
                        subject,
                        json!({
                            "kernelRoute": j1.display_members(),
                            "minimalRoute": j2.display_members(),
                            "nPure": npure,
                        }),
                    )
                })
            })
        })
        .collect()
}

/// Ideals over an N-pure `I` are N-pure exactly when their images in `R/I`
/// are. One verdict per base ideal `I`, covering all `J ⊇ I`.
pub fn check_prop_iii(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("PropIII", subject.clone(), || {
                if !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("PropIII", subject));
                }
                let q = ctx.quotient_by(idx)?;
                for j in 0..ctx.ideals().len() {
                    if !ctx.ideals()[idx].is_subset_of(&ctx.ideals()[j]) {
                        continue;
                    }
                    let image = ctx.ideals()[j].pushforward(&q.projection)?;
                    let jq = q
                        .ctx
                        .index_of(&image)
                        .expect("image is in the quotient lattice");
                    if ctx.purity(j).is_npure() != q.ctx.purity(jq).is_npure() {
                        return Ok(Verdict::fail(
                            "PropIII",
                            subject,
                            json!({
                                "over": ctx.ideals()[j].display_members(),
                                "image": image.display_members(),
                                "overNPure": ctx.purity(j).is_npure(),
                                "imageNPure": q.ctx.purity(jq).is_npure(),
                            }),
                        ));
                    }
                }
                Ok(Verdict::pass("PropIII", subject))
            })
        })
        .collect()
}

/// The N-pure ideals and the strongly π-regular ideals are the same class.
pub fn check_prop_v(ctx: &RingCtx) -> Verdict {
    let subject = ring_subject(ctx);
    instance("PropV", subject.clone(), || {
        let mismatch: Vec<usize> = (0..ctx.ideals().len())
            .filter(|&k| ctx.purity(k).is_npure() != ctx.purity(k).strongly_pi_regular)
            .collect();
        Ok(if mismatch.is_empty() {
            Verdict::pass("PropV", subject)
        } else {
            Verdict::fail(
                "PropV",
                subject,
                json!({
                    "disagreeing": mismatch
                        .iter()
                        .map(|&k| ctx.ideals()[k].display_members())
                        .collect::<Vec<_>>(),
                }),
            )
        })
    })
}

/// Every N-pure ideal has a member generating the same radical; the found
/// witness is re-verified from scratch.
pub fn check_prop_vi(ctx: &RingCtx) -> Vec<Verdict> {
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("PropVI", subject.clone(), || {
                if !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("PropVI", subject));
                }
                match principal_radical_witness(&ctx.ideals()[idx]) {
                    Ok(a) => {
                        let principal = Ideal::generated(ctx.ring(), &[a])?;
                        Ok(if principal.radical() == *ctx.radical(idx) {
                            Verdict::pass_with("PropVI", subject, json!({ "a": a }))
                        } else {
                            Verdict::fail(
                                "PropVI",
                                subject,
                                json!({ "a": a, "reVerificationFailed": true }),
                            )
                        })
                    }
                    Err(e) => Ok(Verdict::fail(
                        "PropVI",
                        subject,
                        json!({ "error": e.to_string() }),
                    )),
                }
            })
        })
        .collect()
}

/// Every N-pure ideal admits a single `(n, b)` with `a^n (1-b) = 0` for all
/// members simultaneously; the witness is re-verified by a direct scan.
pub fn check_lem_viia(ctx: &RingCtx) -> Vec<Verdict> {
    let ring = ctx.ring();
    (0..ctx.ideals().len())
        .map(|idx| {
            let subject = ideal_subject(ctx, idx);
            instance("LemVIIa", subject.clone(), || {
                if !ctx.purity(idx).is_npure() {
                    return Ok(Verdict::vacuous("LemVIIa", subject));
                }
                let ideal = &ctx.ideals()[idx];
                match uniform_exponent_witness(ideal) {
                    Ok((n, b)) => {
                        let valid = ideal.contains(b)
                            && ideal.elems().iter().all(|&a| {
                                ring.mul(ring.pow(a, n as u64), ring.sub(ring.one(), b))
                                    == ring.zero()
                            });
                        Ok(if valid {
                            Verdict::pass_with("LemVIIa", subject, json!({ "n": n, "b": b }))
                        } else {
                            Verdict::fail(
                                "LemVIIa",
                                subject,
                                json!({ "n": n, "b": b, "reVerificationFailed": true }),
                            )
                        })
                    }
                    Err(e) => Ok(Verdict::fail(
                        "LemVIIa",
                        subject,
                        json!({ "error": e.to_string() }),
                    )),
                }
            })
        })
        .collect()
}

fn endo_skip_payload(e: &EndoError) -> serde_json::Value {
    match e {
        EndoError::CarrierCap { carrier, cap } => {
            json!({ "cap": "maxEndoCarrier", "carrier": carrier, "limit": cap })
        }
        EndoError::GenCap { cap } => json!({ "cap": "maxEndoGens", "limit": cap }),
        other => json!({ "error": other.to_string() }),
    }
}

/// `End(I^n)` is commutative for every pure ideal `I`, for all `n` up to
/// power-chain stabilization plus one. One verdict per `(I, n)`.
pub fn check_thm_v_endo(ctx: &RingCtx) -> Vec<Verdict> {
    let mut out = Vec::new();
    for idx in 0..ctx.ideals().len() {
        if !ctx.purity(idx).pure {
            continue;
        }
        let ideal = &ctx.ideals()[idx];
        let stabilization = ideal.power_stabilization();
        for n in 1..=stabilization + 1 {
            let subject = format!("{}; n={}", ideal_subject(ctx, idx), n);
            out.push(instance(
                "ThmV-endo",
                subject.clone(),
                || match module_of_ideal_power(ideal, n, ctx.caps()) {
                    Ok(module) => {
                        let endos = all_endomorphisms(&module);
                        Ok(if endo_ring_is_commutative(&endos) {
                            Verdict::pass_with(
                                "ThmV-endo",
                                subject,
                                json!({ "endomorphisms": endos.len() }),
                            )
                        } else {
                            Verdict::fail(
                                "ThmV-endo",
                                subject,
                                json!({ "endomorphisms": endos.len(), "commutative": false }),
                            )
                        })
                    }
                    Err(e) => Ok(Verdict::skipped(
                        "ThmV-endo",
                        subject,
                        endo_skip_payload(&e),
                    )),
                },
            ));
        }
    }
    out
}

/// For a principal N-pure ideal `I = Ra`, past the least `n` with
/// `a^n (1 - ra) = 0`, every `End(I^i)` is commutative. Verdicts for
/// `i < n` are recorded as information, never asserted.
pub fn check_lem_viib_endo(ctx: &RingCtx) -> Vec<Verdict> {
    let ring = ctx.ring();
    let mut out = Vec::new();
    for idx in 0..ctx.ideals().len() {
        if !ctx.purity(idx).is_npure() {
            continue;
        }
        let ideal = &ctx.ideals()[idx];
        let generator = ideal.elems().iter().copied().find(|&a| {
            Ideal::generated(ring, &[a])
                .map(|p| p == *ideal)
                .unwrap_or(false)
        });
        let Some(a) = generator else { continue };
        let subject = format!("{}; a={}", ideal_subject(ctx, idx), a);
        out.push(instance("LemVIIb-endo", subject.clone(), || {
            let Some(threshold) = principal_commutativity_threshold(ring, a) else {
                return Ok(Verdict::fail(
                    "LemVIIb-endo",
                    subject,
                    json!({ "thresholdSearchFailed": true }),
                ));
            };
            let high = (ideal.power_stabilization() + 1).max(threshold);
            let mut below = Vec::new();
            for i in 1..=high {
                match module_of_ideal_power(ideal, i, ctx.caps()) {
                    Ok(module) => {
                        let commutative = endo_ring_is_commutative(&all_endomorphisms(&module));
                        if i < threshold {
                            below.push(json!({ "i": i, "commutative": commutative }));
                        } else if !commutative {
                            return Ok(Verdict::fail(
                                "LemVIIb-endo",
                                subject,
                                json!({ "n": threshold, "i": i, "commutative": false }),
                            ));
                        }
                    }
                    Err(e) => {
                        return Ok(Verdict::skipped(
                            "LemVIIb-endo",
                            subject,
                            endo_skip_payload(&e),
                        ))
                    }
                }
            }
            Ok(Verdict::pass_with(
                "LemVIIb-endo",
                subject,
                json!({ "generator": a, "n": threshold, "belowThreshold": below }),
            ))
        }));
    }
    out
}

/// The worked example: the designated twelve-element ring with `p = (2)`,
/// `q = (3)`, plus the symbolic integer facts. Vacuous on every other ring.
pub fn check_example_i(ctx: &RingCtx) -> Verdict {
    let subject = format!("{} + symbolic integers", ring_subject(ctx));
    instance("ExampleI", subject.clone(), || {
        if !matches!(ctx.ring().spec(), RingSpec::Zmod(12)) {
            return Ok(Verdict::vacuous("ExampleI", subject));
        }
        let fail = |fact: &str| {
            Ok(Verdict::fail(
                "ExampleI",
                subject.clone(),
                json!({ "fact": fact }),
            ))
        };
        let p = ctx
            .index_of(&Ideal::generated(ctx.ring(), &[2])?)
            .expect("ideal (2) exists");
        let q = ctx
            .index_of(&Ideal::generated(ctx.ring(), &[3])?)
            .expect("ideal (3) exists");
        if !ctx.purity(q).pure {
            return fail("q = (3) is pure");
        }
        if ctx.purity(p).pure {
            return fail("p = (2) is not pure");
        }
        if !ctx.purity(p).is_npure() {
            return fail("p = (2) is N-pure");
        }
        let l = ctx.localize_one_plus(p)?;
        if l.loc.kernel.elems() != [0, 4, 8] {
            return fail("kernel of the localization at 1+p is {0,4,8}");
        }
        if l.ctx.spectrum().primes.len() != 1 {
            return fail("the localized ring has exactly one prime");
        }
        if ctx.ideals()[p].pushforward(&l.loc.projection)?.is_zero() {
            return fail("the localized p is nonzero");
        }
        let rp = ctx.quotient_by(p)?;
        if rp.ctx.ring().size() != 2 || !rp.ctx.ring().is_field() {
            return fail("R/p is a field with two elements");
        }

        // Symbolic half: localizing the integers at 1 + p^e Z keeps exactly
        // the zero ideal and pZ, for every prime p ≤ 50 and e ≤ 3.
        let primes: Vec<u64> = (2..=50)
            .filter(|&n| zint::prime_divisors(n) == [n])
            .collect();
        for &pz in &primes {
            for e in 1..=3u32 {
                let n = pz.pow(e);
                let spec = match zint::z_spec_localized(n) {
                    Ok(s) => s,
                    Err(e) => {
                        return Ok(Verdict::fail(
                            "ExampleI",
                            subject.clone(),
                            json!({ "fact": "symbolic localization computable", "error": e.to_string() }),
                        ))
                    }
                };
                if spec.primes != [0, pz] {
                    return fail("Spec(S⁻¹Z) = {0, pZ} for n = p^e");
                }
                if spec.quotient_is_field != (e == 1) || spec.localization_is_field {
                    return fail("Z/pZ is a field while S⁻¹Z is not");
                }
                for &qz in &primes {
                    if zint::prime_survives_localization(qz, n) != (qz == pz) {
                        return fail("brute-force survival matches divisibility");
                    }
                }
                if zint::z_purity(zint::ZIdeal { n }) != (false, false) {
                    return fail("p^e Z is neither pure nor N-pure");
                }
            }
        }
        if zint::z_purity(zint::ZIdeal { n: 0 }) != (true, true)
            || zint::z_purity(zint::ZIdeal { n: 1 }) != (true, true)
        {
            return fail("the zero ideal and the whole ring are pure");
        }
        Ok(Verdict::pass("ExampleI", subject))
    })
}

/// Dispatch the enabled checks for one ring, in report order.
pub fn run_checks(ctx: &RingCtx, enabled: &BTreeSet<String>) -> Vec<Verdict> {
    let mut out = Vec::new();
    let on = |id: &str| enabled.contains(id);
    if on("Structural") {
        out.push(check_structural(ctx));
    }
    if on("T2.6") {
        out.extend(check_t26(ctx));
    }
    if on("PropII") {
        out.extend(check_prop_ii(ctx));
    }
    if on("ThmIII") {
        out.extend(check_thm_iii(ctx));
    }
    if on("ThmIV") {
        out.extend(check_thm_iv(ctx));
    }
    if on("LemII") {
        out.extend(check_lem_ii(ctx));
    }
    if on("LemIII") || on("PropIV") || on("LemIV") {
        out.extend(check_gelfand_kernels(ctx, enabled));
    }
    if on("LemV") {
        out.extend(check_lem_v(ctx));
    }
    if on("LemVI") {
        out.push(check_lem_vi(ctx));
    }
    if on("CorI") {
        out.extend(check_cor_i(ctx));
    }
    if on("CorII") {
        out.extend(check_cor_ii(ctx));
    }
    if on("CorIII") {
        out.extend(check_cor_iii(ctx));
    }
    if on("CorIV") {
        out.extend(check_cor_iv(ctx));
    }
    if on("ThmII") {
        out.extend(check_thm_ii(ctx));
    }
    if on("PropIII") {
        out.extend(check_prop_iii(ctx));
    }
    if on("PropV") {
        out.push(check_prop_v(ctx));
    }
    if on("PropVI") {
        out.extend(check_prop_vi(ctx));
    }
    if on("LemVIIa") {
        out.extend(check_lem_viia(ctx));
    }
    if on("ThmV-endo") {
        out.extend(check_thm_v_endo(ctx));
    }
    if on("LemVIIb-endo") {
        out.extend(check_lem_viib_endo(ctx));
    }
    if on("ExampleI") {
        out.push(check_example_i(ctx));
    }
    out
}
