mod common;

use common::*;
use flatlink::filament::{brute_force_filamentation, Filamentation};
use flatlink::{
    apply_move, codes_equivalent_syntactically, elementary_switch, find_move_sites,
    flat_linking_diff, greedy_zero_sum_partition, invariants_equal, link_filamentation,
    link_polynomial, parse_flat_link, render_flat_link, self_polynomial, validate, Codeword,
    FlatLinkCode, GenSpec, Letter, Link, LinkInvariant, MoveKind, MoveSite, Sign,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use std::collections::BTreeMap;

fn link_from(seed: u64, max_components: usize, max_crossings: usize, balanced: bool) -> Link {
    random_link(&mut rng(seed), max_components, max_crossings, balanced)
}

fn unlinked(link: &Link) -> bool {
    let n = link.component_count();
    (0..n).all(|a| (a + 1..n).all(|b| flat_linking_diff(link, a, b).unwrap() == 0))
}

/// Renames every crossing, rotates every word and shuffles components.
fn scramble(code: &FlatLinkCode, seed: u64) -> FlatLinkCode {
    let mut r = rng(seed);
    let mut ids: Vec<String> = code
        .components
        .iter()
        .flat_map(|w| w.letters.iter().map(|l| l.crossing.clone()))
        .collect();
    ids.sort();
    ids.dedup();
    let mut fresh: Vec<String> = (0..ids.len()).map(|i| format!("q{i}")).collect();
    fresh.shuffle(&mut r);
    let rename: BTreeMap<&String, &String> = ids.iter().zip(fresh.iter()).collect();
    let mut words: Vec<Vec<Letter>> = code
        .components
        .iter()
        .map(|w| {
            let shift = if w.is_empty() {
                0
            } else {
                rand::Rng::gen_range(&mut r, 0..w.len())
            };
            w.rotated(shift)
                .letters
                .iter()
                .map(|l| Letter::new(rename[&l.crossing].clone(), l.sign))
                .collect()
        })
        .collect();
    words.shuffle(&mut r);
    FlatLinkCode::new(
        words
            .into_iter()
            .enumerate()
            .map(|(i, letters)| Codeword::new(flatlink::gauss::default_component_name(i), letters))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn eta_matches_oracle(seed: u64) {
        let link = link_from(seed, 3, 10, false);
        for (c, w) in link.code().components.iter().enumerate() {
            for i in 0..w.len() {
                for j in 0..w.len() {
                    if i != j {
                        prop_assert_eq!(link.code().eta(c, i, j).unwrap(), oracle_eta(&w.letters, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn render_parse_round_trip(seed: u64) {
        let link = link_from(seed, 4, 10, false);
        let text = render_flat_link(link.code());
        let back = parse_flat_link(&text).unwrap();
        prop_assert_eq!(&back, link.code());
        prop_assert!(validate(&back).is_ok());
    }

    #[test]
    fn scrambled_codes_are_equivalent(seed: u64, shuffle: u64) {
        let link = link_from(seed, 3, 7, false);
        let other = scramble(link.code(), shuffle);
        prop_assert!(codes_equivalent_syntactically(link.code(), link.code(), false));
        prop_assert!(codes_equivalent_syntactically(link.code(), &other, true));
        prop_assert!(codes_equivalent_syntactically(&other, link.code(), true));
        let inv = link_polynomial(&link).unwrap();
        let inv2 = link_polynomial(&Link::new(other).unwrap()).unwrap();
        prop_assert!(invariants_equal(&inv, &inv2, true));
    }

    #[test]
    fn linking_is_antisymmetric(seed: u64) {
        let link = link_from(seed, 4, 12, false);
        let n = link.component_count();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    prop_assert_eq!(flat_linking_diff(&link, a, b).unwrap(), -flat_linking_diff(&link, b, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn unlinked_implies_zero_total_sign(seed: u64, balanced: bool) {
        let link = link_from(seed, 4, 12, balanced);
        if unlinked(&link) {
            for c in 0..link.component_count() {
                prop_assert_eq!(link.code().total_sign(c).unwrap(), 0);
            }
        }
    }

    #[test]
    fn four_point_switch_identity(seed: u64, pick: u64) {
        let link = link_from(seed, 1, 10, true);
        let w = &link.code().components[0];
        let plus: Vec<usize> = (0..w.len()).filter(|&i| w.letters[i].sign == Sign::Plus).collect();
        let minus: Vec<usize> = (0..w.len()).filter(|&i| w.letters[i].sign == Sign::Minus).collect();
        prop_assume!(plus.len() >= 2);
        let mut r = rng(pick);
        let a: Vec<_> = plus.choose_multiple(&mut r, 2).copied().collect();
        let b: Vec<_> = minus.choose_multiple(&mut r, 2).copied().collect();
        let eta = |i, j| link.code().eta(0, i, j).unwrap();
        prop_assert_eq!(eta(a[0], b[0]) + eta(a[1], b[1]), eta(a[0], b[1]) + eta(a[1], b[0]));
    }

    #[test]
    fn elementary_switch_keeps_coefficient(seed: u64, pairs in 2usize..=5) {
        let link = random_two_component(&mut rng(seed), pairs, 2);
        let p = flatlink::choose_pair_partition(&link, 0, 1).unwrap();
        let base = flatlink::pair_coefficient(&link, &p).unwrap();
        for i in 0..p.pairs.len() {
            for j in i + 1..p.pairs.len() {
                let q = elementary_switch(&p, &p.pairs[i], &p.pairs[j]).unwrap();
                prop_assert_eq!(flatlink::pair_coefficient(&link, &q).unwrap(), base);
            }
        }
    }

    #[test]
    fn every_move_site_preserves_invariant(seed: u64) {
        let mut r = rng(seed);
        let base = random_link(&mut r, 3, 5, true);
        let link = Link::new(embed_triangle(&mut r, base.code())).unwrap();
        let expected = link_polynomial(&link).unwrap();
        for site in find_move_sites(&link, &MoveKind::ALL) {
            let moved = apply_move(&link, &site).unwrap();
            prop_assert!(validate(moved.code()).is_ok());
            prop_assert_eq!(&link_polynomial(&moved).unwrap(), &expected, "site {:?}", site);
        }
    }

    #[test]
    fn linked_codes_keep_linking_diffs(seed: u64) {
        let link = link_from(seed, 3, 6, false);
        let expected = link_polynomial(&link).unwrap().linking_diffs;
        for site in find_move_sites(&link, &MoveKind::ALL) {
            let moved = apply_move(&link, &site).unwrap();
            prop_assert_eq!(&link_polynomial(&moved).unwrap().linking_diffs, &expected);
        }
    }

    #[test]
    fn r1_curl_has_zero_eta_and_undoes(seed: u64) {
        let link = link_from(seed, 3, 6, true);
        for site in find_move_sites(&link, &[MoveKind::R1Insert]) {
            let MoveSite::R1Insert { letters, .. } = &site else { unreachable!() };
            let moved = apply_move(&link, &site).unwrap();
            let e = letters[0].crossing.clone();
            prop_assert_eq!(moved.eta_plus_minus(&e, &e).unwrap(), 0);
            let undo = find_move_sites(&moved, &[MoveKind::R1Remove])
                .into_iter()
                .find(|s| matches!(s, MoveSite::R1Remove { crossing, .. } if *crossing == e))
                .unwrap();
            prop_assert_eq!(apply_move(&moved, &undo).unwrap().into_code(), link.code().clone());
        }
    }

    #[test]
    fn r2_sites_satisfy_eta_identities(seed: u64) {
        let start = link_from(seed, 2, 4, true);
        let walked = flatlink::random_walk(&start, 6, seed, &flatlink::WalkPolicy::default()).unwrap().link;
        let code = walked.code().clone();
        for site in find_move_sites(&walked, &[MoveKind::R2Remove]) {
            let MoveSite::R2Remove { crossings: [e, f], .. } = &site else { unreachable!() };
            let (ce, _) = find_letter(&code, e, Sign::Plus);
            let (cf, _) = find_letter(&code, e, Sign::Minus);
            if ce == cf {
                prop_assert_eq!(oracle_eta_pm(&code, e, e) + oracle_eta_pm(&code, f, f), 0);
            } else {
                let (x, y) = if find_letter(&code, f, Sign::Minus).0 == ce { (e, f) } else { (f, e) };
                prop_assert_eq!(oracle_eta_pm(&code, x, y), 0);
                prop_assert_eq!(oracle_eta_pm(&code, y, x), 0);
            }
        }
    }

    #[test]
    fn r3_is_an_involution(seed: u64) {
        let mut r = rng(seed);
        let base = random_link(&mut r, 3, 5, false);
        let link = Link::new(embed_triangle(&mut r, base.code())).unwrap();
        let sites = find_move_sites(&link, &[MoveKind::R3]);
        prop_assert!(!sites.is_empty());
        for site in sites {
            let once = apply_move(&link, &site).unwrap();
            prop_assert_ne!(once.code(), link.code());
            prop_assert_eq!(apply_move(&once, &site).unwrap().into_code(), link.code().clone());
        }
    }

    #[test]
    fn knot_bifilament_identity(seed: u64) {
        let link = link_from(seed, 1, 10, true);
        let ids: Vec<String> = link.catalog().crossings().iter().map(|c| c.id.clone()).collect();
        for x in &ids {
            for y in &ids {
                if x != y {
                    prop_assert_eq!(
                        oracle_pair_sum(link.code(), x, y),
                        oracle_eta_pm(link.code(), x, x) + oracle_eta_pm(link.code(), y, y)
                    );
                }
            }
        }
    }

    #[test]
    fn knot_filamentation_iff_zero_polynomial(seed: u64) {
        let link = link_from(seed, 1, 8, true);
        let zero = self_polynomial(&link, 0).unwrap().is_zero();
        prop_assert_eq!(flatlink::component_filamentation(&link, 0).unwrap().is_some(), zero);
        prop_assert_eq!(brute_force_filamentation(&link).unwrap().is_some(), zero);
    }

    #[test]
    fn link_filamentation_matches_oracle(seed: u64) {
        let link = link_from(seed, 3, 9, true);
        let greedy = link_filamentation(&link).unwrap();
        let oracle = brute_force_filamentation(&link).unwrap();
        prop_assert_eq!(greedy.is_some(), oracle.is_some());
        if let Some(f) = greedy {
            prop_assert!(flatlink::verify_filamentation(&link, &f).unwrap().is_empty());
            prop_assert!(link_polynomial(&link).unwrap().is_zero());
            let json = f.to_json();
            prop_assert_eq!(Filamentation::from_json(&json).unwrap(), Some(f));
        }
    }

    #[test]
    fn greedy_zero_sum_matches_exhaustion(seed: u64, pairs in 1usize..=5) {
        let link = random_two_component(&mut rng(seed), pairs, 2);
        let greedy = greedy_zero_sum_partition(&link, 0, 1).unwrap();
        prop_assert_eq!(greedy.is_some(), !zero_sum_pairings(link.code(), 0, 1).is_empty());
        if let Some(p) = greedy {
            for (x, y) in &p.partition().pairs {
                prop_assert_eq!(oracle_pair_sum(link.code(), x, y), 0);
            }
        }
    }

    #[test]
    fn invariant_json_round_trip(seed: u64) {
        let link = link_from(seed, 3, 10, false);
        let inv = link_polynomial(&link).unwrap();
        prop_assert_eq!(LinkInvariant::from_json(&inv.to_json()).unwrap(), inv);
    }

    #[test]
    fn generator_respects_shape(seed: u64, k in 1usize..=3, n in 0usize..=10) {
        let spec = GenSpec::random_shape(&mut rng(seed), k, n, true);
        let code = flatlink::random_flat_link(&spec).unwrap();
        let link = Link::new(code).unwrap();
        prop_assert_eq!(link.component_count(), k);
        prop_assert_eq!(link.catalog().len(), spec.crossings());
        prop_assert!(unlinked(&link));
    }
}
