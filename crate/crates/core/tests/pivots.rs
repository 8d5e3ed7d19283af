use ladder_core::builtin;
use ladder_core::generate::{all_upset_games, random_suite, SuiteSpec};
use ladder_core::pivot::{
    find_pivotal, is_pivotal_bruteforce, is_pivotal_extremes, pivot_counts, prefix_extreme, theorem2_check,
    End, OrderedAllocation,
};
use ladder_core::verify::{extremes_mismatches, uniqueness_failures, DEFAULT_EXHAUSTIVE_LIMIT};
use ladder_core::{Config, GameLadder, Orientation, Profile};

fn exhaustive_family() -> Vec<GameLadder> {
    let mut out = Vec::new();
    for (n, j) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)] {
        out.extend(
            all_upset_games(n, j)
                .into_iter()
                .filter(|g| g.output_levels().unwrap().count() >= 2),
        );
    }
    out
}

/// Every profile agreeing with `r` up to and including `p`.
fn completions(r: &OrderedAllocation, p: usize, j: u8) -> Vec<Profile> {
    let later: Vec<usize> = r.order.sequence()[r.order.rank(p) + 1..].to_vec();
    let mut out = vec![r.profile.clone()];
    for &t in &later {
        out = out
            .into_iter()
            .flat_map(|x| {
                (1..=j).map(move |v| {
                    let mut pos = x.positions().to_vec();
                    pos[t] = v;
                    Profile::new(pos)
                })
            })
            .collect();
    }
    out
}

#[test]
fn extremes_match_enumeration_exhaustively() {
    for g in exhaustive_family() {
        for h in [g.clone(), g.dualize()] {
            let bad = extremes_mismatches(&h, DEFAULT_EXHAUSTIVE_LIMIT).unwrap();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }
}

#[test]
fn extremes_match_enumeration_on_larger_random_games() {
    let games = random_suite(&SuiteSpec::new(5, 40, 4, 3, Orientation::NonIncreasing));
    for g in games {
        for h in [g.clone(), g.dualize()] {
            assert!(extremes_mismatches(&h, DEFAULT_EXHAUSTIVE_LIMIT).unwrap().is_empty());
        }
    }
}

#[test]
fn completions_lie_between_the_extremes() {
    for g in [builtin::cap_dual(), builtin::unanimity(3, 3).unwrap()] {
        let j = g.levels();
        for r in OrderedAllocation::all(g.players(), j) {
            for p in 0..g.players() {
                let low = prefix_extreme(&g, &r, p, End::Bottom).unwrap();
                let high = prefix_extreme(&g, &r, p, End::Top).unwrap();
                let all = completions(&r, p, j);
                assert!(all.contains(&low) && all.contains(&high));
                for x in all {
                    assert!(low.is_below(&x) && x.is_below(&high), "{r} p={p} {x}");
                }
            }
        }
    }
}

#[test]
fn every_allocation_has_exactly_one_pivot() {
    for g in exhaustive_family() {
        assert!(uniqueness_failures(&g, DEFAULT_EXHAUSTIVE_LIMIT).unwrap().is_empty());
    }
}

#[test]
fn unanimity_pivots() {
    for n in [2, 3] {
        let g = builtin::unanimity(n, 3).unwrap();
        for order in ladder_core::pivot::EntryOrder::all(n) {
            let top = OrderedAllocation::new(order.clone(), Profile::uniform(n, 3)).unwrap();
            let last = *order.sequence().last().unwrap();
            assert_eq!(find_pivotal(&g, &top, 1).unwrap(), last);
            let first = order.sequence()[0];
            let mut x = vec![3; n];
            x[first] = 1;
            let r = OrderedAllocation::new(order.clone(), Profile::new(x)).unwrap();
            assert_eq!(find_pivotal(&g, &r, 1).unwrap(), first);
            assert!(is_pivotal_bruteforce(&g, &r, 1, first).unwrap());
            assert!(is_pivotal_extremes(&g, &r, 1, first).unwrap());
        }
    }
}

#[test]
fn count_monotonicity_holds_canonically_on_exhaustive_family() {
    for g in exhaustive_family() {
        let (rep, table, _) = theorem2_check(&g, Config::Canonical).unwrap();
        assert!(rep.as_stated, "{g:?}: {:?}", rep.violations);
        for row in &table.counts {
            assert_eq!(row.iter().sum::<u64>(), table.total_per_level);
        }
    }
}

#[test]
fn printed_configuration_finds_violations_somewhere() {
    let broken = exhaustive_family()
        .iter()
        .filter(|g| !theorem2_check(g, Config::Printed).unwrap().0.as_stated)
        .count();
    assert!(broken > 0);
}

#[test]
fn level_filter_matches_full_table() {
    let g = random_suite(&SuiteSpec::new(9, 5, 3, 3, Orientation::NonDecreasing))
        .into_iter()
        .find(|g| g.output_levels().unwrap().count() >= 3)
        .expect("a three-level game");
    let full = pivot_counts(&g, None).unwrap();
    let second = pivot_counts(&g, Some(2)).unwrap();
    assert_eq!(second.level_indices, vec![2]);
    assert_eq!(second.counts[0], full.counts[1]);
}
