//! Test-side oracles. Nothing here calls the library's η or pairing code.
#![allow(dead_code)]

use flatlink::genlab::GenSpec;
use flatlink::{random_flat_link, FlatLinkCode, Letter, Link, PairPartition, Sign};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid link with `1..=max_components` components and at most
/// `max_crossings` crossings.
pub fn random_link<R: Rng>(
    rng: &mut R,
    max_components: usize,
    max_crossings: usize,
    balanced: bool,
) -> Link {
    let k = rng.gen_range(1..=max_components);
    let spec = GenSpec::random_shape(rng, k, max_crossings, balanced);
    Link::new(random_flat_link(&spec).unwrap()).unwrap()
}

/// A random two-component link with exactly `pairs` zero-linked pairs of
/// crossings between the components and up to `max_self` self-crossings.
pub fn random_two_component<R: Rng>(rng: &mut R, pairs: usize, max_self: usize) -> Link {
    let spec = GenSpec::new(2, rng.gen())
        .with_self(0, rng.gen_range(0..=max_self))
        .with_self(1, rng.gen_range(0..=max_self))
        .with_pair(0, 1, 2 * pairs)
        .balanced(true);
    Link::new(random_flat_link(&spec).unwrap()).unwrap()
}

/// η by explicit arc extraction: rotate so `from` is first, take the
/// letters strictly before `to`, and count signs.
pub fn oracle_eta(word: &[Letter], from: usize, to: usize) -> i64 {
    assert_ne!(from, to);
    let n = word.len();
    let rotated: Vec<&Letter> = word[from..].iter().chain(word[..from].iter()).collect();
    let stop = (to + n - from) % n;
    rotated[1..stop]
        .iter()
        .map(|l| if l.sign == Sign::Plus { 1 } else { -1 })
        .sum()
}

/// Locates a letter by scanning the code.
pub fn find_letter(code: &FlatLinkCode, crossing: &str, sign: Sign) -> (usize, usize) {
    for (c, w) in code.components.iter().enumerate() {
        for (i, l) in w.letters.iter().enumerate() {
            if l.crossing == crossing && l.sign == sign {
                return (c, i);
            }
        }
    }
    panic!("letter {crossing}{} not found", sign.symbol());
}

/// η from `x+` to `y-`, which must share a component.
pub fn oracle_eta_pm(code: &FlatLinkCode, x: &str, y: &str) -> i64 {
    let (c1, i) = find_letter(code, x, Sign::Plus);
    let (c2, j) = find_letter(code, y, Sign::Minus);
    assert_eq!(c1, c2, "{x}+ and {y}- lie on different components");
    oracle_eta(&code.components[c1].letters, i, j)
}

/// Crossings between components `a` and `b`: those with the `+` end on `a`
/// and those with the `-` end on `a`.
pub fn ab_crossings(code: &FlatLinkCode, a: usize, b: usize) -> (Vec<String>, Vec<String>) {
    let mut plus_on_a = Vec::new();
    let mut minus_on_a = Vec::new();
    for l in &code.components[a].letters {
        let other = l.crossing.as_str();
        let other_sign = -l.sign;
        if code.components[b]
            .letters
            .iter()
            .any(|m| m.crossing == other && m.sign == other_sign)
        {
            match l.sign {
                Sign::Plus => plus_on_a.push(other.to_string()),
                Sign::Minus => minus_on_a.push(other.to_string()),
            }
        }
    }
    (plus_on_a, minus_on_a)
}

/// Every pairing of the crossings between `a` and `b` (all matchings of
/// `+` ends on `a` with `-` ends on `a`).
pub fn all_pairings(code: &FlatLinkCode, a: usize, b: usize) -> Vec<PairPartition> {
    let (plus, minus) = ab_crossings(code, a, b);
    assert_eq!(plus.len(), minus.len());
    minus
        .iter()
        .permutations(minus.len())
        .map(|perm| {
            PairPartition::new(
                a,
                b,
                plus.iter()
                    .cloned()
                    .zip(perm.into_iter().cloned())
                    .collect(),
            )
        })
        .collect()
}

pub fn oracle_pair_sum(code: &FlatLinkCode, x: &str, y: &str) -> i64 {
    oracle_eta_pm(code, x, y) + oracle_eta_pm(code, y, x)
}

/// All zero-sum pairings, by exhaustion.
pub fn zero_sum_pairings(code: &FlatLinkCode, a: usize, b: usize) -> Vec<PairPartition> {
    all_pairings(code, a, b)
        .into_iter()
        .filter(|p| {
            p.pairs
                .iter()
                .all(|(x, y)| oracle_pair_sum(code, x, y) == 0)
        })
        .collect()
}

/// Inserts a cyclic triangle `(a+ c-) (b+ a-) (c+ b-)` on fresh crossings
/// at three random gaps, so that an R3 site exists. At most two distinct
/// components receive strands, which keeps linking diffs unchanged.
pub fn embed_triangle<R: Rng>(rng: &mut R, code: &FlatLinkCode) -> FlatLinkCode {
    let ids = ["t1", "t2", "t3"];
    let (a, b, c) = (ids[0], ids[1], ids[2]);
    let pairs = [
        [Letter::plus(a), Letter::minus(c)],
        [Letter::plus(b), Letter::minus(a)],
        [Letter::plus(c), Letter::minus(b)],
    ];
    let mut out = code.clone();
    let k = out.components.len();
    let (first, second) = (rng.gen_range(0..k), rng.gen_range(0..k));
    let mut strands = [first, first, second];
    strands.shuffle(rng);
    let mut spots: Vec<(usize, usize, usize)> = strands
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, rng.gen_range(0..=out.components[c].letters.len()), i))
        .collect();
    spots.sort_by(|a, b| b.cmp(a));
    for (comp, at, i) in spots {
        out.components[comp]
            .letters
            .splice(at..at, pairs[i].clone());
    }
    out
}
