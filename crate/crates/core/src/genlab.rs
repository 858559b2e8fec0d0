//! Random generation, exhaustive enumeration and witness search over small
//! Gauss codes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filament::{
    brute_force_filamentation, filamentation_json, link_filamentation, Filamentation,
    ORACLE_CROSSING_CAP,
};
use crate::gauss::{default_component_name, Codeword, FlatLinkCode, Letter, Link, Sign};
use crate::invariant::{link_polynomial, LinkInvariant};

/// Crossing cap for [`enumerate_small_codes`].
pub const ENUMERATION_CAP: usize = 6;

/// Shape of a random code: crossing counts per component and per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub self_crossings: Vec<usize>,
    pub pair_crossings: BTreeMap<(usize, usize), usize>,
    pub seed: u64,
    /// Put equally many `+` and `-` pair-crossing ends on each component.
    pub balanced: bool,
}

impl GenSpec {
    pub fn new(components: usize, seed: u64) -> Self {
        GenSpec {
            self_crossings: vec![0; components],
            pair_crossings: BTreeMap::new(),
            seed,
            balanced: false,
        }
    }

    pub fn with_self(mut self, component: usize, count: usize) -> Self {
        if component >= self.self_crossings.len() {
            self.self_crossings.resize(component + 1, 0);
        }
        self.self_crossings[component] = count;
        self
    }

    pub fn with_pair(mut self, a: usize, b: usize, count: usize) -> Self {
        self.pair_crossings.insert((a.min(b), a.max(b)), count);
        self
    }

    pub fn balanced(mut self, balanced: bool) -> Self {
        self.balanced = balanced;
        self
    }

    pub fn components(&self) -> usize {
        self.self_crossings.len()
    }

    pub fn crossings(&self) -> usize {
        self.self_crossings.iter().sum::<usize>() + self.pair_crossings.values().sum::<usize>()
    }

    /// Random shape with up to `max_crossings` crossings spread over
    /// `components` components. Balanced shapes get even pair counts.
    pub fn random_shape<R: Rng>(
        rng: &mut R,
        components: usize,
        max_crossings: usize,
        balanced: bool,
    ) -> Self {
        let mut spec = GenSpec::new(components, rng.gen()).balanced(balanced);
        let total = rng.gen_range(0..=max_crossings);
        let mut placed = 0;
        while placed < total {
            let a = rng.gen_range(0..components);
            let b = rng.gen_range(0..components);
            if a == b {
                spec.self_crossings[a] += 1;
                placed += 1;
            } else if !balanced {
                *spec.pair_crossings.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                placed += 1;
            } else if placed + 2 <= total {
                *spec.pair_crossings.entry((a.min(b), a.max(b))).or_insert(0) += 2;
                placed += 2;
            }
        }
        spec
    }
}

/// Code with the requested crossing counts and letters shuffled uniformly
/// within each codeword. Crossings are named `1`, `2`, ...
pub fn random_flat_link(spec: &GenSpec) -> Result<FlatLinkCode> {
    let k = spec.components();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new(); k];
    let mut next_id = 1usize;
    let mut fresh = || {
        let id = next_id.to_string();
        next_id += 1;
        id
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    for (c, &count) in spec.self_crossings.iter().enumerate() {
        for _ in 0..count {
            let id = fresh();
            words[c].push(Letter::plus(id.clone()));
            words[c].push(Letter::minus(id));
        }
    }
    for (&(a, b), &count) in &spec.pair_crossings {
        if a == b || b >= k {
            return Err(Error::InfeasibleSpec(format!(
                "bad component pair ({a}, {b})"
            )));
        }
        if spec.balanced && count % 2 == 1 {
            return Err(Error::InfeasibleSpec(format!(
                "balanced spec needs an even crossing count between {a} and {b}, got {count}"
            )));
        }
        for i in 0..count {
            let plus_on_a = if spec.balanced {
                i % 2 == 0
            } else {
                rng.gen_bool(0.5)
            };
            let (p, m) = if plus_on_a { (a, b) } else { (b, a) };
            let id = fresh();
            words[p].push(Letter::plus(id.clone()));
            words[m].push(Letter::minus(id));
        }
    }
    for word in &mut words {
        word.shuffle(&mut rng);
    }
    Ok(FlatLinkCode::new(
        words
            .into_iter()
            .enumerate()
            .map(|(i, letters)| Codeword::new(default_component_name(i), letters))
            .collect(),
    ))
}

/// A crossing label paired with the sign of one of its letters.
pub type Slot = (u16, Sign);

/// Canonical form under rotation of each codeword, reordering of
/// components and renaming of crossings: component lengths, then letters
/// relabeled by first appearance. Compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    pub lengths: Vec<usize>,
    pub letters: Vec<Slot>,
}

impl CanonicalKey {
    pub fn to_code(&self) -> FlatLinkCode {
        let mut components = Vec::with_capacity(self.lengths.len());
        let mut iter = self.letters.iter();
        for (i, &len) in self.lengths.iter().enumerate() {
            let letters = iter
                .by_ref()
                .take(len)
                .map(|&(label, sign)| Letter::new(crossing_name(label as usize), sign))
                .collect();
            components.push(Codeword::new(default_component_name(i), letters));
        }
        FlatLinkCode::new(components)
    }
}

fn crossing_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("c{i}")
    }
}

/// Lexicographically least relabeled form over all component orders with
/// non-decreasing lengths and all rotations.
pub fn canonical_key(code: &FlatLinkCode) -> CanonicalKey {
    let words: Vec<&Codeword> = code.components.iter().collect();
    let mut lengths: Vec<usize> = words.iter().map(|w| w.len()).collect();
    lengths.sort();
    let mut best: Option<Vec<Slot>> = None;
    for order in (0..words.len()).permutations(words.len()) {
        if order
            .windows(2)
            .any(|w| words[w[0]].len() > words[w[1]].len())
        {
            continue;
        }
        let ordered_lengths: Vec<usize> = order.iter().map(|&i| words[i].len()).collect();
        for shifts in rotation_choices(&ordered_lengths) {
            let mut labels: BTreeMap<&str, u16> = BTreeMap::new();
            let mut seq = Vec::with_capacity(lengths.iter().sum());
            for (&i, &shift) in order.iter().zip(&shifts) {
                let w = &words[i].letters;
                for j in 0..w.len() {
                    let l = &w[(j + shift) % w.len()];
                    let next = labels.len() as u16;
                    let label = *labels.entry(l.crossing.as_str()).or_insert(next);
                    seq.push((label, l.sign));
                }
            }
            if best.as_ref().is_none_or(|b| seq < *b) {
                best = Some(seq);
            }
        }
    }
    CanonicalKey {
        lengths,
        letters: best.unwrap_or_default(),
    }
}

/// Every choice of one rotation per listed length; a single empty choice
/// when there are no components.
fn rotation_choices(lengths: &[usize]) -> Vec<Vec<usize>> {
    if lengths.is_empty() {
        return vec![Vec::new()];
    }
    lengths
        .iter()
        .map(|&len| 0..len.max(1))
        .multi_cartesian_product()
        .collect()
}

/// One representative per class of codes with exactly `crossings`
/// crossings on `components` components, up to rotation and relabeling,
/// in canonical order.
pub fn enumerate_small_codes(crossings: usize, components: usize) -> Result<Vec<FlatLinkCode>> {
    enumerate_small_codes_capped(crossings, components, ENUMERATION_CAP)
}

pub fn enumerate_small_codes_capped(
    crossings: usize,
    components: usize,
    cap: usize,
) -> Result<Vec<FlatLinkCode>> {
    if crossings > cap {
        return Err(Error::InstanceTooLarge {
            size: crossings,
            cap,
        });
    }
    let mut classes = BTreeSet::new();
    for lengths in sorted_compositions(2 * crossings, components) {
        let mut seq = Vec::with_capacity(2 * crossings);
        let mut open = Vec::new();
        labeled_sequences(crossings, &mut seq, &mut open, 0, &mut |seq| {
            classes.insert(canonical_key(&split_code(seq, &lengths)));
        });
    }
    Ok(classes.iter().map(CanonicalKey::to_code).collect())
}

/// Codes with up to `max_crossings` crossings, in order of crossing count.
pub fn enumerate_up_to(max_crossings: usize, components: usize) -> Result<Vec<FlatLinkCode>> {
    let mut out = Vec::new();
    for n in 0..=max_crossings {
        out.extend(enumerate_small_codes(n, components)?);
    }
    Ok(out)
}

/// Non-decreasing length vectors of `parts` entries summing to `total`.
fn sorted_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(
        total: usize,
        parts: usize,
        min: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for first in min..=total {
            if first * parts > total {
                break;
            }
            prefix.push(first);
            go(total - first, parts - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, 0, &mut Vec::new(), &mut out);
    out
}

/// Every letter sequence on `n` crossings in which crossings are opened in
/// label order: each slot either opens the next crossing with either sign
/// or closes an open one with the opposite sign.
fn labeled_sequences(
    n: usize,
    seq: &mut Vec<Slot>,
    open: &mut Vec<Slot>,
    opened: usize,
    visit: &mut dyn FnMut(&[Slot]),
) {
    if seq.len() == 2 * n {
        visit(seq);
        return;
    }
    let remaining = 2 * n - seq.len();
    if opened < n && remaining > open.len() {
        for sign in [Sign::Plus, Sign::Minus] {
            seq.push((opened as u16, sign));
            open.push((opened as u16, sign));
            labeled_sequences(n, seq, open, opened + 1, visit);
            open.pop();
            seq.pop();
        }
    }
    for i in 0..open.len() {
        let (label, sign) = open.remove(i);
        seq.push((label, -sign));
        labeled_sequences(n, seq, open, opened, visit);
        seq.pop();
        open.insert(i, (label, sign));
    }
}

fn split_code(seq: &[Slot], lengths: &[usize]) -> FlatLinkCode {
    let mut rest = seq;
    let mut components = Vec::with_capacity(lengths.len());
    for (i, &len) in lengths.iter().enumerate() {
        let (head, tail) = rest.split_at(len);
        rest = tail;
        components.push(Codeword::new(
            default_component_name(i),
            head.iter()
                .map(|&(label, sign)| Letter::new(crossing_name(label as usize), sign))
                .collect(),
        ));
    }
    FlatLinkCode::new(components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchGoal {
    /// The invariant vanishes but no filamentation exists.
    ZeroPolyNoFilamentation,
    /// At least three components, each with a crossing, and a nonzero pair
    /// coefficient.
    NonzeroMultiComponent,
}

impl FromStr for SearchGoal {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "zero-poly-no-filamentation" | "zeropolynofilamentation" => {
                Ok(SearchGoal::ZeroPolyNoFilamentation)
            }
            "nonzero-multi-component" | "nonzeromulticomponent" => {
                Ok(SearchGoal::NonzeroMultiComponent)
            }
            other => Err(format!("unknown search goal `{other}`")),
        }
    }
}

impl fmt::Display for SearchGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchGoal::ZeroPolyNoFilamentation => "zero-poly-no-filamentation",
            SearchGoal::NonzeroMultiComponent => "nonzero-multi-component",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_components: usize,
    pub max_crossings: usize,
    /// Crossing counts up to this are enumerated exhaustively.
    pub exhaustive_crossings: usize,
    /// Random balanced codes tried per (crossing count, component count)
    /// beyond the exhaustive range.
    pub random_samples: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_components: 3,
            max_crossings: 8,
            exhaustive_crossings: 4,
            random_samples: 2000,
            seed: 0,
            jobs: 1,
        }
    }
}

/// A search result with everything needed to check it independently.
#[derive(Debug, Clone)]
pub struct Witness {
    pub code: FlatLinkCode,
    pub invariant: LinkInvariant,
    pub filamentation: Option<Filamentation>,
    pub oracle: Option<Filamentation>,
}

impl Witness {
    pub fn evaluate(link: &Link) -> Result<Witness> {
        Ok(Witness {
            code: link.code().clone(),
            invariant: link_polynomial(link)?,
            filamentation: link_filamentation(link)?,
            oracle: brute_force_filamentation(link)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "code": self.code.render(),
            "invariant": self.invariant.to_json(),
            "invariant_zero": self.invariant.is_zero(),
            "filamentation": filamentation_json(self.filamentation.as_ref()),
            "oracle": filamentation_json(self.oracle.as_ref()),
        })
    }
}

/// Whether `code` exhibits `goal`, decided by the invariant and the
/// exhaustive oracle.
pub fn is_witness(goal: SearchGoal, link: &Link) -> Result<bool> {
    match goal {
        SearchGoal::ZeroPolyNoFilamentation => {
            Ok(link_polynomial(link)?.is_zero() && brute_force_filamentation(link)?.is_none())
        }
        SearchGoal::NonzeroMultiComponent => {
            let code = link.code();
            if code.component_count() < 3 || code.components.iter().any(Codeword::is_empty) {
                return Ok(false);
            }
            Ok(link_polynomial(link)?.pair_coeffs.values().any(|&c| c != 0))
        }
    }
}

/// Searches for a witness of `goal`: exhaustively over small crossing
/// counts, then over seeded random balanced codes. Returns the first
/// witness in search order.
pub fn search_examples(goal: SearchGoal, limits: &SearchLimits) -> Result<Option<Witness>> {
    if goal == SearchGoal::ZeroPolyNoFilamentation && limits.max_crossings > ORACLE_CROSSING_CAP {
        return Err(Error::InstanceTooLarge {
            size: limits.max_crossings,
            cap: ORACLE_CROSSING_CAP,
        });
    }
    let exhaustive = limits
        .exhaustive_crossings
        .min(ENUMERATION_CAP)
        .min(limits.max_crossings);
    let min_components = match goal {
        SearchGoal::ZeroPolyNoFilamentation => 1,
        SearchGoal::NonzeroMultiComponent => 3,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    for n in 1..=limits.max_crossings {
        for k in min_components..=limits.max_components {
            let candidates = if n <= exhaustive {
                enumerate_small_codes(n, k)?
            } else {
                random_candidates(&mut rng, n, k, limits.random_samples)?
            };
            if let Some(code) = first_witness(goal, &candidates, limits.jobs.max(1))? {
                return Witness::evaluate(&Link::new(code)?).map(Some);
            }
        }
    }
    Ok(None)
}

fn random_candidates<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    samples: usize,
) -> Result<Vec<FlatLinkCode>> {
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut spec = GenSpec::random_shape(rng, k, n, true);
        // top up to exactly n crossings with self-crossings
        let missing = n - spec.crossings();
        spec.self_crossings[rng.gen_range(0..k)] += missing;
        out.push(random_flat_link(&spec)?);
    }
    Ok(out)
}

/// Earliest witness in `candidates`, checked across `jobs` threads.
fn first_witness(
    goal: SearchGoal,
    candidates: &[FlatLinkCode],
    jobs: usize,
) -> Result<Option<FlatLinkCode>> {
    let check =
        |code: &FlatLinkCode| -> Result<bool> { is_witness(goal, &Link::new(code.clone())?) };
    if jobs <= 1 || candidates.len() < 2 * jobs {
        for code in candidates {
            if check(code)? {
                return Ok(Some(code.clone()));
            }
        }
        return Ok(None);
    }
    let chunk = candidates.len().div_ceil(jobs);
    let hits: Vec<Result<Option<usize>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .enumerate()
            .map(|(t, part)| {
                scope.spawn(move || -> Result<Option<usize>> {
                    for (i, code) in part.iter().enumerate() {
                        if check(code)? {
                            return Ok(Some(t * chunk + i));
                        }
                    }
                    Ok(None)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    let mut best = None;
    for hit in hits {
        if let Some(i) = hit? {
            best = Some(best.map_or(i, |b: usize| b.min(i)));
        }
    }
    Ok(best.map(|i| candidates[i].clone()))
}
