use flatlink::gauss::default_component_name;
use flatlink::genlab::{enumerate_up_to, is_witness};
use flatlink::{
    brute_force_filamentation, codes_equivalent_syntactically, enumerate_small_codes,
    link_polynomial, search_examples, Codeword, FlatLinkCode, Letter, Link, SearchGoal,
    SearchLimits,
};
use itertools::Itertools;

/// Every code on crossings 1..=n split into `k` words, with labels and
/// word boundaries fixed, so the list contains many copies of each class.
fn raw_codes(n: usize, k: usize) -> Vec<FlatLinkCode> {
    let letters: Vec<Letter> = (1..=n)
        .flat_map(|i| [Letter::plus(i.to_string()), Letter::minus(i.to_string())])
        .collect();
    let mut out = Vec::new();
    for cuts in (0..=2 * n).combinations_with_replacement(k - 1) {
        let bounds: Vec<usize> = std::iter::once(0)
            .chain(cuts)
            .chain(std::iter::once(2 * n))
            .collect();
        for perm in letters.iter().permutations(2 * n) {
            let words = bounds
                .windows(2)
                .enumerate()
                .map(|(i, w)| {
                    Codeword::new(
                        default_component_name(i),
                        perm[w[0]..w[1]].iter().map(|l| (*l).clone()).collect(),
                    )
                })
                .collect();
            out.push(FlatLinkCode::new(words));
        }
    }
    out
}

fn classes(codes: Vec<FlatLinkCode>) -> Vec<FlatLinkCode> {
    let mut reps: Vec<FlatLinkCode> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for code in codes {
        if !seen.insert(code.clone()) {
            continue;
        }
        if !reps
            .iter()
            .any(|r| codes_equivalent_syntactically(r, &code, true))
        {
            reps.push(code);
        }
    }
    reps
}

#[test]
fn enumeration_matches_brute_force_quotient() {
    for (n, k) in [
        (0, 1),
        (1, 1),
        (2, 1),
        (3, 1),
        (1, 2),
        (2, 2),
        (3, 2),
        (1, 3),
        (2, 3),
    ] {
        let expected = classes(raw_codes(n, k));
        let got = enumerate_small_codes(n, k).unwrap();
        assert_eq!(got.len(), expected.len(), "n={n} k={k}");
        for (i, a) in got.iter().enumerate() {
            assert!(flatlink::validate(a).is_ok());
            assert_eq!(a.crossing_count(), n);
            assert!(expected
                .iter()
                .any(|e| codes_equivalent_syntactically(e, a, true)));
            for b in &got[i + 1..] {
                assert!(!codes_equivalent_syntactically(a, b, true), "{a} ~ {b}");
            }
        }
    }
}

#[test]
fn small_counts() {
    assert_eq!(enumerate_small_codes(1, 1).unwrap().len(), 1);
    assert_eq!(enumerate_small_codes(2, 1).unwrap().len(), 4);
    assert_eq!(
        enumerate_up_to(2, 1).unwrap().len(),
        (0..=2)
            .map(|n| enumerate_small_codes(n, 1).unwrap().len())
            .sum::<usize>()
    );
}

#[test]
fn zero_polynomial_witness_is_confirmed_by_oracle() {
    let limits = SearchLimits {
        max_components: 2,
        max_crossings: 6,
        ..SearchLimits::default()
    };
    let w = search_examples(SearchGoal::ZeroPolyNoFilamentation, &limits)
        .unwrap()
        .unwrap();
    let link = Link::new(w.code.clone()).unwrap();
    assert!(link_polynomial(&link).unwrap().is_zero());
    assert!(brute_force_filamentation(&link).unwrap().is_none());
    assert!(is_witness(SearchGoal::ZeroPolyNoFilamentation, &link).unwrap());

    // nothing smaller qualifies
    for n in 0..link.catalog().len() {
        for k in 1..=2 {
            for code in enumerate_small_codes(n, k).unwrap() {
                let l = Link::new(code).unwrap();
                assert!(
                    !is_witness(SearchGoal::ZeroPolyNoFilamentation, &l).unwrap(),
                    "{}",
                    l.code()
                );
            }
        }
    }
}

#[test]
fn multi_component_witness_has_nonzero_pair_term() {
    let limits = SearchLimits {
        max_components: 3,
        max_crossings: 6,
        ..SearchLimits::default()
    };
    let w = search_examples(SearchGoal::NonzeroMultiComponent, &limits)
        .unwrap()
        .unwrap();
    assert!(w.code.component_count() >= 3);
    let inv = link_polynomial(&Link::new(w.code.clone()).unwrap()).unwrap();
    assert!(inv.pair_coeffs.values().any(|&c| c != 0));
}

#[test]
fn search_is_deterministic_across_jobs() {
    let base = SearchLimits {
        max_components: 2,
        max_crossings: 6,
        ..SearchLimits::default()
    };
    let one = search_examples(SearchGoal::ZeroPolyNoFilamentation, &base)
        .unwrap()
        .unwrap();
    let four = search_examples(
        SearchGoal::ZeroPolyNoFilamentation,
        &SearchLimits { jobs: 4, ..base },
    )
    .unwrap()
    .unwrap();
    assert_eq!(one.code, four.code);
}
