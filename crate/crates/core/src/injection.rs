//! Swap constructions behind the count comparison between a stronger player
//! `p` and a weaker player `q`, and an exhaustive check that the resulting
//! correspondence `ψ_pq` maps `q`'s pivot set injectively into `p`'s.
//!
//! `ψ_pq(R)` is either `R_pq` (entry ranks and positions of `p` and `q`
//! exchanged) or `R⁰_pq` (only the entry ranks exchanged), selected by how
//! the positions of `p` and `q` compare and by how `q` is pivotal.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{LadderError, Result};
use crate::game::{GameLadder, Orientation, Profile};
use crate::influence::{relation_matrix, RelationMatrix};
pub use crate::pivot::PivotClass;
use crate::pivot::{EntryOrder, OrderedAllocation, PivotContext};

/// `R_pq`: exchanges both entry ranks and positions of `p` and `q`.
pub fn swap_full(r: &OrderedAllocation, p: usize, q: usize) -> OrderedAllocation {
    OrderedAllocation {
        order: r.order.swapped(p, q),
        profile: swap_positions(&r.profile, p, q),
    }
}

/// `R⁰_pq`: exchanges the entry ranks only.
pub fn swap_order_only(r: &OrderedAllocation, p: usize, q: usize) -> OrderedAllocation {
    OrderedAllocation {
        order: r.order.swapped(p, q),
        profile: r.profile.clone(),
    }
}

/// Same entry order, positions of `p` and `q` exchanged.
pub fn swap_positions_only(r: &OrderedAllocation, p: usize, q: usize) -> OrderedAllocation {
    OrderedAllocation {
        order: r.order.clone(),
        profile: swap_positions(&r.profile, p, q),
    }
}

fn swap_positions(x: &Profile, p: usize, q: usize) -> Profile {
    let mut out = x.clone();
    out.set(p, x.get(q));
    out.set(q, x.get(p));
    out
}

/// How the position comparisons of the ψ table and the D-sets are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum PsiReading {
    /// `x_p < x_q` is read as "p sits on the output-raising side of q" in the
    /// nonincreasing sense: literal for nonincreasing games, mirrored for
    /// nondecreasing ones.
    #[default]
    OrientationRelative,
    /// Numeric comparison of position indices whatever the orientation.
    Literal,
}

/// How `x_p` compares with `x_q` after applying a [`PsiReading`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Below,
    Above,
    Level,
}

fn side(ctx: &PivotContext, r: &OrderedAllocation, p: usize, q: usize, reading: PsiReading) -> Side {
    let (xp, xq) = (r.profile.get(p), r.profile.get(q));
    let mirrored = reading == PsiReading::OrientationRelative
        && ctx.game().orientation() == Orientation::NonDecreasing;
    let (a, b) = if mirrored { (xq, xp) } else { (xp, xq) };
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Side::Below,
        std::cmp::Ordering::Greater => Side::Above,
        std::cmp::Ordering::Equal => Side::Level,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DMembership {
    pub in_d_plus: bool,
    pub in_d_minus: bool,
}

/// `D⁺`: `R` and its position-swapped variant are both securing for `q`
/// and `x_p > x_q`. `D⁻`: both blocking for `q` and `x_p < x_q`.
pub fn d_membership(
    ctx: &PivotContext,
    r: &OrderedAllocation,
    i: usize,
    p: usize,
    q: usize,
    reading: PsiReading,
) -> Result<DMembership> {
    check_distinct(ctx.game(), p, q)?;
    let class = ctx.classify(r, i, q)?;
    let none = DMembership {
        in_d_plus: false,
        in_d_minus: false,
    };
    let s = side(ctx, r, p, q, reading);
    let wanted = match (class, s) {
        (PivotClass::Securer, Side::Above) => PivotClass::Securer,
        (PivotClass::Blocker, Side::Below) => PivotClass::Blocker,
        _ => return Ok(none),
    };
    let swapped = swap_positions_only(r, p, q);
    let hit = ctx.classify(&swapped, i, q)? == wanted;
    Ok(DMembership {
        in_d_plus: hit && wanted == PivotClass::Securer,
        in_d_minus: hit && wanted == PivotClass::Blocker,
    })
}

fn check_distinct(game: &GameLadder, p: usize, q: usize) -> Result<()> {
    game.check_player(p)?;
    game.check_player(q)?;
    if p == q {
        return Err(LadderError::DimensionMismatch(format!(
            "players must differ, got {} twice",
            p + 1
        )));
    }
    Ok(())
}

/// The ψ table:
///
/// | `x_p < x_q` | `x_p > x_q` | `x_p = x_q` |
/// |---|---|---|
/// | `R⁰_pq` if securing or in `D⁻`, else `R_pq` | `R⁰_pq` if blocking or in `D⁺`, else `R_pq` | `R_pq` |
///
/// `R` must be `i`-pivotal for `q`.
pub fn psi(
    ctx: &PivotContext,
    r: &OrderedAllocation,
    i: usize,
    p: usize,
    q: usize,
    reading: PsiReading,
) -> Result<OrderedAllocation> {
    check_distinct(ctx.game(), p, q)?;
    let class = ctx.classify(r, i, q)?;
    if class == PivotClass::None {
        return Err(LadderError::NotInDomain(r.to_string()));
    }
    let keep_positions = match side(ctx, r, p, q, reading) {
        Side::Below => {
            class == PivotClass::Securer || d_membership(ctx, r, i, p, q, reading)?.in_d_minus
        }
        Side::Above => {
            class == PivotClass::Blocker || d_membership(ctx, r, i, p, q, reading)?.in_d_plus
        }
        Side::Level => false,
    };
    Ok(if keep_positions {
        swap_order_only(r, p, q)
    } else {
        swap_full(r, p, q)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellDefinedFailure {
    pub source: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first: String,
    pub second: String,
    pub image: String,
}

/// Outcome of applying ψ to the whole pivot set of `q`. Players are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectionReport {
    pub config: &'static str,
    pub reading: PsiReading,
    pub p: usize,
    pub q: usize,
    pub level: usize,
    /// Whether `p ≽ q` holds in the configuration's orientation.
    pub relation_holds: bool,
    /// `|R_iq⁺|`.
    pub domain_size: u64,
    /// Number of distinct images.
    pub image_size: u64,
    /// `|R_ip⁺|`.
    pub target_size: u64,
    pub well_defined_failures: Vec<WellDefinedFailure>,
    pub injectivity_collisions: Vec<Collision>,
}

impl InjectionReport {
    pub fn is_clean(&self) -> bool {
        self.well_defined_failures.is_empty() && self.injectivity_collisions.is_empty()
    }
}

/// Applies ψ to every allocation where `q` is `i`-pivotal, in the
/// configuration's orientation. `p`, `q` are 0-based.
pub fn verify_injection(game: &GameLadder, p: usize, q: usize, i: usize, config: Config) -> Result<InjectionReport> {
    let oriented = config.prepare(game);
    let ctx = PivotContext::new(&oriented)?;
    let m = relation_matrix(&oriented)?;
    verify_injection_with(&ctx, &m, p, q, i, config, PsiReading::OrientationRelative)
}

/// [`verify_injection`] over a prepared context and relation.
pub fn verify_injection_with(
    ctx: &PivotContext,
    m: &RelationMatrix,
    p: usize,
    q: usize,
    i: usize,
    config: Config,
    reading: PsiReading,
) -> Result<InjectionReport> {
    let game = ctx.game();
    check_distinct(game, p, q)?;
    let n = game.players();
    let j = game.levels();
    crate::game::check_cap(crate::pivot::allocation_count(n, j), game.enum_cap())?;
    // level check up front so an empty sweep still reports bad levels
    let probe = OrderedAllocation {
        order: EntryOrder::identity(n),
        profile: Profile::uniform(n, 1),
    };
    ctx.classify(&probe, i, q)?;

    let orders: Vec<EntryOrder> = EntryOrder::all(n).collect();
    let per_order: Vec<(Vec<(OrderedAllocation, OrderedAllocation)>, u64)> = orders
        .par_iter()
        .map(|order| -> Result<_> {
            let mut pairs = Vec::new();
            let mut target = 0u64;
            for profile in crate::game::profiles(n, j) {
                let r = OrderedAllocation {
                    order: order.clone(),
                    profile,
                };
                if ctx.classify_unchecked(&r, i, p) != PivotClass::None {
                    target += 1;
                }
                if ctx.classify_unchecked(&r, i, q) == PivotClass::None {
                    continue;
                }
                let image = psi(ctx, &r, i, p, q, reading)?;
                pairs.push((image, r));
            }
            Ok((pairs, target))
        })
        .collect::<Result<_>>()?;

    let target_size = per_order.iter().map(|(_, t)| t).sum();
    let mut pairs: Vec<(OrderedAllocation, OrderedAllocation)> =
        per_order.into_iter().flat_map(|(p, _)| p).collect();
    let domain_size = pairs.len() as u64;
    let mut well_defined_failures: Vec<WellDefinedFailure> = pairs
        .iter()
        .filter(|(image, _)| ctx.classify_unchecked(image, i, p) == PivotClass::None)
        .map(|(image, source)| WellDefinedFailure {
            source: source.to_string(),
            image: image.to_string(),
        })
        .collect();
    well_defined_failures.sort_by(|a, b| (&a.source, &a.image).cmp(&(&b.source, &b.image)));

    pairs.sort();
    let mut injectivity_collisions = Vec::new();
    let mut image_size = 0u64;
    for (idx, (image, source)) in pairs.iter().enumerate() {
        match idx.checked_sub(1).map(|prev| &pairs[prev]) {
            Some((prev_image, prev_source)) if prev_image == image => {
                injectivity_collisions.push(Collision {
                    first: prev_source.to_string(),
                    second: source.to_string(),
                    image: image.to_string(),
                });
            }
            _ => image_size += 1,
        }
    }

    Ok(InjectionReport {
        config: config.as_str(),
        reading,
        p: p + 1,
        q: q + 1,
        level: i,
        relation_holds: m.geq(p, q),
        domain_size,
        image_size,
        target_size,
        well_defined_failures,
        injectivity_collisions,
    })
}

/// Checks the profile identities relating the prefix extremes of `R`,
/// `R_pq` and `R⁰_pq`; returns a description of each identity that fails.
pub fn swap_identity_failures(r: &OrderedAllocation, p: usize, q: usize, j: u8) -> Vec<String> {
    use crate::pivot::End::{Bottom, Top};
    let ext = |a: &OrderedAllocation, who: usize, end| extreme(a, who, end, j);
    let full = swap_full(r, p, q);
    let order_only = swap_order_only(r, p, q);
    let (rp, rq) = (r.profile.get(p), r.profile.get(q));
    let mut failures = Vec::new();
    let mut expect = |name: &str, lhs: Profile, rhs: Profile| {
        if lhs != rhs {
            failures.push(format!("{name}: {lhs} != {rhs} for {r}, p={}, q={}", p + 1, q + 1));
        }
    };
    if r.order.rank(p) < r.order.rank(q) {
        for (end, fill) in [(Top, j), (Bottom, 1)] {
            let q_ext = ext(r, q, end);
            expect("order swap keeps q's extreme", q_ext.clone(), ext(&order_only, p, end));
            expect(
                "position swap of q's extreme",
                swap_positions(&q_ext, p, q),
                ext(&full, p, end),
            );
            expect(
                "q restored, p pushed to the end",
                q_ext.with(q, rp).with(p, fill),
                ext(&full, p, end).with(p, fill),
            );
        }
    } else {
        for (end, fill) in [(Top, j), (Bottom, 1)] {
            let q_ext = ext(r, q, end);
            let p_ext = ext(&full, p, end);
            expect("both pushed to the end", p_ext.with(p, fill), q_ext.with(q, fill));
            expect("q pushed, p at q's old position", q_ext.with(q, fill).with(p, rq), p_ext);
        }
    }
    failures
}

fn extreme(r: &OrderedAllocation, who: usize, end: crate::pivot::End, j: u8) -> Profile {
    let fill = match end {
        crate::pivot::End::Top => j,
        crate::pivot::End::Bottom => 1,
    };
    let cut = r.order.rank(who);
    let mut out = r.profile.clone();
    for &later in &r.order.sequence()[cut + 1..] {
        out.set(later, fill);
    }
    out
}

/// The swap-membership properties for `p ≽ q`, stated for a nonincreasing game
/// and mirrored with the position comparisons for a nondecreasing one.
/// Returns every allocation where a property's hypotheses hold but its
/// conclusion fails.
pub fn swap_membership_failures(ctx: &PivotContext, i: usize, p: usize, q: usize) -> Result<Vec<String>> {
    check_distinct(ctx.game(), p, q)?;
    let n = ctx.game().players();
    let j = ctx.game().levels();
    let reading = PsiReading::OrientationRelative;
    let mut failures = Vec::new();
    for r in OrderedAllocation::all(n, j) {
        let class = ctx.classify(&r, i, q)?;
        if class == PivotClass::None {
            continue;
        }
        let p_first = r.order.rank(p) < r.order.rank(q);
        let s = side(ctx, &r, p, q, reading);
        let full_ok = || ctx.classify_unchecked(&swap_full(&r, p, q), i, p) != PivotClass::None;
        let order_only_class = || ctx.classify_unchecked(&swap_order_only(&r, p, q), i, p);
        let swapped_same = || ctx.classify_unchecked(&swap_positions_only(&r, p, q), i, q) == class;
        let mut check = |name: &str, ok: bool| {
            if !ok {
                failures.push(format!("{name}: {r}, p={}, q={}, level {i}", p + 1, q + 1));
            }
        };
        match class {
            PivotClass::Securer => {
                if !p_first {
                    check("securer, p enters later: R_pq pivotal for p", full_ok());
                } else {
                    if s == Side::Above {
                        check("securer, p first, x_p > x_q: R_pq pivotal for p", full_ok());
                    }
                    if s != Side::Above || swapped_same() {
                        check(
                            "securer, p first: R0_pq securing for p",
                            order_only_class() == PivotClass::Securer,
                        );
                    }
                }
            }
            PivotClass::Blocker => {
                if !p_first {
                    check("blocker, p enters later: R_pq pivotal for p", full_ok());
                } else {
                    if s == Side::Below {
                        check("blocker, p first, x_p < x_q: R_pq pivotal for p", full_ok());
                    }
                    if s != Side::Below || swapped_same() {
                        check(
                            "blocker, p first: R0_pq blocking for p",
                            order_only_class() == PivotClass::Blocker,
                        );
                    }
                }
            }
            PivotClass::None => unreachable!(),
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::game::Representation;

    fn alloc(seq: &[usize], x: &[u8]) -> OrderedAllocation {
        OrderedAllocation::from_parts(seq.to_vec(), x.to_vec()).unwrap()
    }

    #[test]
    fn swap_examples() {
        let r = alloc(&[0, 1], &[2, 1]);
        assert_eq!(swap_full(&r, 0, 1), alloc(&[1, 0], &[1, 2]));
        assert_eq!(swap_order_only(&r, 0, 1), alloc(&[1, 0], &[2, 1]));
        assert_eq!(swap_full(&swap_full(&r, 0, 1), 0, 1), r);
        let level = alloc(&[0, 1], &[2, 2]);
        assert_eq!(swap_full(&level, 0, 1), swap_order_only(&level, 0, 1));
    }

    #[test]
    fn classify_capdual() {
        let ctx = PivotContext::new(&builtin::cap_dual()).unwrap();
        assert_eq!(ctx.classify(&alloc(&[0, 1], &[2, 2]), 1, 1).unwrap(), PivotClass::Securer);
        assert_eq!(ctx.classify(&alloc(&[0, 1], &[2, 1]), 1, 1).unwrap(), PivotClass::Blocker);
        assert!(matches!(
            ctx.classify(&alloc(&[0, 1], &[2, 1]), 2, 1),
            Err(LadderError::LevelOutOfRange { level: 2, max: 1 })
        ));
    }

    #[test]
    fn d_sets_on_capdual_are_empty() {
        let ctx = PivotContext::new(&builtin::cap_dual()).unwrap();
        for r in OrderedAllocation::all(2, 2) {
            for (p, q) in [(0, 1), (1, 0)] {
                for reading in [PsiReading::OrientationRelative, PsiReading::Literal] {
                    let d = d_membership(&ctx, &r, 1, p, q, reading).unwrap();
                    assert!(!d.in_d_plus && !d.in_d_minus, "{r} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn d_sets_need_distinct_positions_and_membership() {
        let g = builtin::unanimity(3, 3).unwrap();
        let ctx = PivotContext::new(&g).unwrap();
        for r in OrderedAllocation::all(3, 3) {
            let d = d_membership(&ctx, &r, 1, 0, 1, PsiReading::OrientationRelative).unwrap();
            if r.profile.get(0) == r.profile.get(1) || !ctx.is_pivotal(&r, 1, 1).unwrap() {
                assert!(!d.in_d_plus && !d.in_d_minus);
            }
        }
    }

    #[test]
    fn psi_table_columns() {
        let ctx = PivotContext::new(&builtin::cap_dual()).unwrap();
        // equal positions: full swap
        let r = alloc(&[0, 1], &[2, 2]);
        assert_eq!(psi(&ctx, &r, 1, 0, 1, PsiReading::Literal).unwrap(), swap_full(&r, 0, 1));
        // literal x_p < x_q with a securing q keeps positions
        let r = alloc(&[0, 1], &[1, 2]);
        assert_eq!(ctx.classify(&r, 1, 1).unwrap(), PivotClass::Securer);
        assert_eq!(psi(&ctx, &r, 1, 0, 1, PsiReading::Literal).unwrap(), swap_order_only(&r, 0, 1));
        // p is the pivot, q is not
        let r = alloc(&[0, 1], &[2, 2]);
        assert!(matches!(psi(&ctx, &r, 1, 1, 0, PsiReading::Literal), Err(LadderError::NotInDomain(_))));
    }

    #[test]
    fn capdual_empty_domain() {
        let rep = verify_injection(&builtin::cap_dual(), 1, 0, 1, Config::Canonical).unwrap();
        assert_eq!(rep.domain_size, 0);
        assert_eq!(rep.image_size, 0);
        assert!(rep.is_clean() && rep.relation_holds);
    }

    #[test]
    fn three_player_upset_game() {
        let g = GameLadder::new(
            3,
            2,
            Orientation::NonDecreasing,
            Representation::UpSet {
                generators: vec![Profile::new(vec![2, 1, 1]), Profile::new(vec![1, 2, 2])],
                inside: 1.0,
                outside: 0.0,
            },
        )
        .unwrap();
        let m = relation_matrix(&g).unwrap();
        assert!(m.dominates(0, 1) && m.dominates(0, 2));
        for q in [1, 2] {
            let rep = verify_injection(&g, 0, q, 1, Config::Canonical).unwrap();
            assert!(rep.is_clean(), "{rep:?}");
            assert_eq!(rep.image_size, rep.domain_size);
            assert!(rep.image_size <= rep.target_size);
        }
        let table = crate::pivot::pivot_counts(&g, None).unwrap();
        let rep = verify_injection(&g, 0, 1, 1, Config::Canonical).unwrap();
        assert_eq!(rep.domain_size, table.counts[0][1]);
        assert_eq!(rep.target_size, table.counts[0][0]);
    }

    #[test]
    fn printed_configuration_reports_failures() {
        let rep = verify_injection(&builtin::cap21(), 0, 1, 1, Config::Printed).unwrap();
        assert!(rep.relation_holds);
        assert_eq!(rep.domain_size, 8);
        assert_eq!(rep.target_size, 0);
        assert_eq!(rep.well_defined_failures.len(), 8);
    }

    #[test]
    fn swap_identities_small() {
        for r in OrderedAllocation::all(3, 3) {
            for (p, q) in [(0, 1), (1, 2), (2, 0)] {
                assert!(swap_identity_failures(&r, p, q, 3).is_empty());
            }
        }
    }
}
