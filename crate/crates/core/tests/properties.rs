use itertools::Itertools;
use ladder_core::game::{profile_count, profiles};
use ladder_core::generate::{random_game, random_suite, random_table_game, GameKind, SuiteSpec};
use ladder_core::influence::{
    check_equivalence, relation_matrix, strict_transitivity_violations, transitivity_violations,
};
use ladder_core::{GameLadder, Orientation, Profile};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn orientation(flag: bool) -> Orientation {
    if flag {
        Orientation::NonDecreasing
    } else {
        Orientation::NonIncreasing
    }
}

fn monotone_game(seed: u64, n: usize, j: u8) -> GameLadder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = GameKind::ALL[(seed % GameKind::ALL.len() as u64) as usize];
    random_game(&mut rng, kind, n, j)
}

/// Relabels players: player `p` of `game` becomes player `perm[p]`.
fn relabel(game: &GameLadder, perm: &[usize]) -> GameLadder {
    let n = game.players();
    GameLadder::from_fn(n, game.levels(), game.orientation(), |y| {
        let x: Vec<u8> = (0..n).map(|p| y.get(perm[p])).collect();
        game.evaluate(&Profile::new(x)).unwrap()
    })
    .unwrap()
}

proptest! {
    #[test]
    fn encode_decode_round_trip(n in 1usize..6, j in 2u8..5, raw in any::<u64>()) {
        let total = profile_count(n, j) as usize;
        let idx = (raw as usize) % total;
        let x = Profile::decode(idx, n, j);
        prop_assert_eq!(x.encode(j), idx);
        prop_assert!(x.validate(n, j).is_ok());
    }

    #[test]
    fn promote_touches_one_player(n in 1usize..6, j in 2u8..5, raw in any::<u64>(), p_raw in any::<usize>(), r_raw in any::<u8>()) {
        let x = Profile::decode((raw as usize) % profile_count(n, j) as usize, n, j);
        let p = p_raw % n;
        let r = 1 + r_raw % j;
        let y = x.promote(p, r, j).unwrap();
        prop_assert_eq!(y.get(p), r);
        for t in (0..n).filter(|&t| t != p) {
            prop_assert_eq!(y.get(t), x.get(t));
        }
    }

    #[test]
    fn dualize_is_an_involution(seed in any::<u64>(), n in 1usize..5, j in 2u8..4, dec in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_table_game(&mut rng, n, j, 3, orientation(dec));
        let d = g.dualize();
        prop_assert_eq!(d.orientation(), g.orientation().flipped());
        let back = d.dualize();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for x in profiles(n, j) {
            prop_assert_eq!(back.evaluate(&x).unwrap(), g.evaluate(&x).unwrap());
            prop_assert_eq!(d.evaluate(&x.reversed(j)).unwrap(), g.evaluate(&x).unwrap());
            a.push(g.evaluate(&x).unwrap());
            b.push(d.evaluate(&x).unwrap());
        }
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dualize_preserves_monotonicity(seed in any::<u64>(), n in 2usize..5, j in 2u8..4) {
        let g = monotone_game(seed, n, j);
        prop_assert!(g.validate_monotone().unwrap().holds);
        prop_assert!(g.dualize().validate_monotone().unwrap().holds);
    }

    #[test]
    fn dualize_reverses_the_relation(seed in any::<u64>(), n in 2usize..5, j in 2u8..4, dec in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_table_game(&mut rng, n, j, 3, orientation(dec));
        let m = relation_matrix(&g).unwrap();
        let md = relation_matrix(&g.dualize()).unwrap();
        prop_assert_eq!(md, m.reversed());
    }

    #[test]
    fn relation_conjugates_under_relabeling(seed in any::<u64>(), n in 2usize..5, j in 2u8..4, perm_seed in any::<u64>()) {
        let g = monotone_game(seed, n, j);
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let perm = &perms[(perm_seed % perms.len() as u64) as usize];
        let m = relation_matrix(&g).unwrap();
        let mp = relation_matrix(&relabel(&g, perm)).unwrap();
        for p in 0..n {
            for q in 0..n {
                prop_assert_eq!(mp.geq(perm[p], perm[q]), m.geq(p, q));
            }
        }
    }

    #[test]
    fn similarity_is_an_equivalence(seed in any::<u64>(), n in 2usize..5, j in 2u8..4, dec in any::<bool>(), levels in 2u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_table_game(&mut rng, n, j, levels, orientation(dec));
        let m = relation_matrix(&g).unwrap();
        prop_assert!(check_equivalence(&m).holds());
        prop_assert!(relation_matrix(&monotone_game(seed, n, j)).map(|m| check_equivalence(&m).holds()).unwrap());
    }

    #[test]
    fn two_level_relation_is_transitive(seed in any::<u64>(), n in 2usize..6) {
        let g = monotone_game(seed, n, 2);
        let m = relation_matrix(&g).unwrap();
        prop_assert!(transitivity_violations(&m).is_empty());
        prop_assert!(strict_transitivity_violations(&m).is_empty());
    }
}

#[test]
fn two_level_relation_exhaustive_small() {
    for n in 1..=4 {
        for g in ladder_core::generate::all_upset_games(n, 2) {
            let m = relation_matrix(&g).unwrap();
            assert!(transitivity_violations(&m).is_empty(), "{g:?}");
        }
    }
}

#[test]
fn seeded_suites_contain_linear_games() {
    let games = random_suite(&SuiteSpec::new(42, 200, 4, 3, Orientation::NonDecreasing));
    let linear = games
        .iter()
        .filter(|g| ladder_core::influence::is_linear(g).unwrap().linear)
        .count();
    assert!(linear >= 40, "{linear}");
}
