use ladder_core::generate::{all_upset_games, random_suite, SuiteSpec};
use ladder_core::influence::relation_matrix;
use ladder_core::injection::{
    psi, swap_full, swap_identity_failures, swap_membership_failures, swap_order_only, verify_injection,
    verify_injection_with, PsiReading,
};
use ladder_core::pivot::{OrderedAllocation, PivotContext};
use ladder_core::{Config, GameLadder, Orientation};
use std::collections::HashSet;

fn small_games() -> Vec<GameLadder> {
    let mut games = Vec::new();
    for (n, j) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        games.extend(all_upset_games(n, j));
    }
    games.extend(random_suite(&SuiteSpec::new(11, 60, 3, 3, Orientation::NonDecreasing)));
    games
        .into_iter()
        .filter(|g| g.output_levels().unwrap().count() >= 2)
        .collect()
}

#[test]
fn swap_identities_exhaustive() {
    for (n, j) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        for r in OrderedAllocation::all(n, j) {
            for p in 0..n {
                for q in (0..n).filter(|&q| q != p) {
                    let bad = swap_identity_failures(&r, p, q, j);
                    assert!(bad.is_empty(), "{bad:?}");
                }
            }
        }
    }
}

#[test]
fn swaps_are_involutions() {
    for r in OrderedAllocation::all(3, 3) {
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(swap_full(&swap_full(&r, p, q), p, q), r);
            assert_eq!(swap_order_only(&swap_order_only(&r, p, q), p, q), r);
        }
    }
    let full: HashSet<_> = OrderedAllocation::all(3, 3).map(|r| swap_full(&r, 0, 2)).collect();
    let order: HashSet<_> = OrderedAllocation::all(3, 3).map(|r| swap_order_only(&r, 0, 2)).collect();
    assert_eq!(full.len(), 6 * 27);
    assert_eq!(order.len(), 6 * 27);
}

#[test]
fn swap_membership_holds_for_dominant_pairs() {
    for g in small_games() {
        let ctx = PivotContext::new(&g).unwrap();
        let m = relation_matrix(&g).unwrap();
        let n = g.players();
        for p in 0..n {
            for q in (0..n).filter(|&q| q != p && m.geq(p, q)) {
                for i in 1..ctx.levels().count() {
                    let bad = swap_membership_failures(&ctx, i, p, q).unwrap();
                    assert!(bad.is_empty(), "{g:?}: {bad:?}");
                }
            }
        }
    }
}

#[test]
fn injection_is_clean_in_canonical_config() {
    for g in small_games() {
        let m = relation_matrix(&g).unwrap();
        let levels = g.output_levels().unwrap().count();
        let table = ladder_core::pivot::pivot_counts(&g, None).unwrap();
        let n = g.players();
        for p in 0..n {
            for q in (0..n).filter(|&q| q != p && m.geq(p, q)) {
                for i in 1..levels {
                    let rep = verify_injection(&g, p, q, i, Config::Canonical).unwrap();
                    assert!(rep.is_clean(), "{g:?}: {rep:?}");
                    assert_eq!(rep.image_size, rep.domain_size);
                    assert_eq!(rep.domain_size, table.counts[i - 1][q]);
                    assert_eq!(rep.target_size, table.counts[i - 1][p]);
                }
            }
        }
    }
}

#[test]
fn psi_images_avoid_collisions_in_every_reading() {
    for g in all_upset_games(3, 2) {
        if g.output_levels().unwrap().count() < 2 {
            continue;
        }
        let ctx = PivotContext::new(&g).unwrap();
        let m = relation_matrix(&g).unwrap();
        for reading in [PsiReading::OrientationRelative, PsiReading::Literal] {
            let rep = verify_injection_with(&ctx, &m, 0, 1, 1, Config::Canonical, reading).unwrap();
            assert!(rep.injectivity_collisions.is_empty());
        }
    }
}

#[test]
fn literal_reading_breaks_in_canonical_orientation() {
    let mut failures = 0;
    for g in all_upset_games(2, 3) {
        if g.output_levels().unwrap().count() < 2 {
            continue;
        }
        let ctx = PivotContext::new(&g).unwrap();
        let m = relation_matrix(&g).unwrap();
        for (p, q) in [(0, 1), (1, 0)] {
            if m.geq(p, q) {
                let rep = verify_injection_with(&ctx, &m, p, q, 1, Config::Canonical, PsiReading::Literal).unwrap();
                failures += rep.well_defined_failures.len();
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn psi_rejects_non_pivotal_input() {
    let g = ladder_core::builtin::cap_dual();
    let ctx = PivotContext::new(&g).unwrap();
    let r = OrderedAllocation::from_parts(vec![0, 1], vec![1, 1]).unwrap();
    assert!(psi(&ctx, &r, 1, 1, 0, PsiReading::OrientationRelative).is_err());
}
