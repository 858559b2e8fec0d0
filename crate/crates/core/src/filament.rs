//! Filamentations: partitions of the crossings into monofilaments `{x}`
//! with η(x+, x-) = 0 and bifilaments `{x, y}` with
//! η_A(x+, y-) + η_B(y+, x-) = 0.
//!
//! A link filamentation splits into independent pieces: the self-crossings
//! of each component, and the crossings of each pair of components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gauss::Link;
use crate::invariant::{flat_linking_diff, pair_eta_sum, PairPartition};

/// Crossing cap for [`brute_force_filamentation`].
pub const ORACLE_CROSSING_CAP: usize = 12;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filamentation {
    pub mono: BTreeSet<String>,
    /// Bifilaments `(x, y)`, oriented so that `x+` and `y-` share a component.
    pub bi: BTreeSet<(String, String)>,
}

impl Filamentation {
    pub fn part_count(&self) -> usize {
        self.mono.len() + self.bi.len()
    }

    pub fn merge(&mut self, other: Filamentation) {
        self.mono.extend(other.mono);
        self.bi.extend(other.bi);
    }

    pub fn to_json(&self) -> Value {
        let bi: Vec<[&str; 2]> = self
            .bi
            .iter()
            .map(|(x, y)| [x.as_str(), y.as_str()])
            .collect();
        json!({ "mono": self.mono, "bi": bi })
    }

    pub fn from_json(value: &Value) -> Result<Option<Filamentation>> {
        let bad = |what: &str| Error::MalformedJson(format!("filamentation: {what}"));
        if value.get("exists") == Some(&Value::Bool(false)) {
            return Ok(None);
        }
        let mono = value
            .get("mono")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `mono`"))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("mono entry"))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        let bi = value
            .get("bi")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `bi`"))?
            .iter()
            .map(|v| match v.as_array().map(Vec::as_slice) {
                Some([Value::String(x), Value::String(y)]) => Ok((x.clone(), y.clone())),
                _ => Err(bad("bi entry")),
            })
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Some(Filamentation { mono, bi }))
    }
}

/// JSON for an optional filamentation; `None` becomes `{"exists": false}`.
pub fn filamentation_json(f: Option<&Filamentation>) -> Value {
    match f {
        Some(f) => f.to_json(),
        None => json!({ "exists": false }),
    }
}

impl fmt::Display for Filamentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mono
            .iter()
            .map(|x| format!("{{{x}}}"))
            .chain(self.bi.iter().map(|(x, y)| format!("{{{x},{y}}}")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// A condition of the definition that a part fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MonoNotSelfCrossing { crossing: String },
    MonoNonzero { crossing: String, eta: i64 },
    BiIllegal { x: String, y: String },
    BiNonzero { x: String, y: String, sum: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MonoNotSelfCrossing { crossing } => {
                write!(
                    f,
                    "monofilament {{{crossing}}}: ends lie on different components"
                )
            }
            Violation::MonoNonzero { crossing, eta } => {
                write!(f, "monofilament {{{crossing}}}: eta = {eta}")
            }
            Violation::BiIllegal { x, y } => {
                write!(
                    f,
                    "bifilament {{{x},{y}}}: ends are not arranged on a common pair of components"
                )
            }
            Violation::BiNonzero { x, y, sum } => {
                write!(f, "bifilament {{{x},{y}}}: eta sum = {sum}")
            }
        }
    }
}

/// Orients `{x, y}` so that `x+` and `y-` share a component and `x-` and
/// `y+` share a component; `None` when neither labeling does.
pub fn orient_bifilament<'a>(
    link: &Link,
    x: &'a str,
    y: &'a str,
) -> Result<Option<(&'a str, &'a str)>> {
    let xi = link.crossing(x)?;
    let yi = link.crossing(y)?;
    let fits = |p: &crate::CrossingInfo, q: &crate::CrossingInfo| {
        p.plus.component == q.minus.component && p.minus.component == q.plus.component
    };
    Ok(if fits(xi, yi) {
        Some((x, y))
    } else if fits(yi, xi) {
        Some((y, x))
    } else {
        None
    })
}

/// Lists every violated condition. Structural faults (uncovered or
/// doubly-used crossings) are errors rather than violations.
pub fn verify_filamentation(link: &Link, f: &Filamentation) -> Result<Vec<Violation>> {
    let mut used: BTreeSet<&str> = BTreeSet::new();
    let all_parts = f
        .mono
        .iter()
        .map(|x| vec![x.as_str()])
        .chain(f.bi.iter().map(|(x, y)| vec![x.as_str(), y.as_str()]));
    for part in all_parts {
        for id in part {
            link.crossing(id)?;
            if !used.insert(id) {
                return Err(Error::PartsOverlap(id.to_string()));
            }
        }
    }
    if let Some(missing) = link
        .catalog()
        .crossings()
        .iter()
        .find(|c| !used.contains(c.id.as_str()))
    {
        return Err(Error::PartitionNotCovering(missing.id.clone()));
    }

    let mut violations = Vec::new();
    for x in &f.mono {
        let info = link.crossing(x)?;
        if !info.is_self() {
            violations.push(Violation::MonoNotSelfCrossing {
                crossing: x.clone(),
            });
            continue;
        }
        let eta = link.eta_between(info.plus, info.minus)?;
        if eta != 0 {
            violations.push(Violation::MonoNonzero {
                crossing: x.clone(),
                eta,
            });
        }
    }
    for (x, y) in &f.bi {
        match orient_bifilament(link, x, y)? {
            None => violations.push(Violation::BiIllegal {
                x: x.clone(),
                y: y.clone(),
            }),
            Some((p, q)) => {
                let sum = pair_eta_sum(link, p, q)?;
                if sum != 0 {
                    violations.push(Violation::BiNonzero {
                        x: x.clone(),
                        y: y.clone(),
                        sum,
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Filamentation of the self-crossings of one component.
///
/// Chords with η = 0 become monofilaments; chords with η = n are paired with
/// chords with η = −n in position order. Exists iff the component's
/// polynomial vanishes.
pub fn component_filamentation(link: &Link, component: usize) -> Result<Option<Filamentation>> {
    link.check_component(component)?;
    let mut by_eta: BTreeMap<i64, Vec<(usize, String)>> = BTreeMap::new();
    for &k in link.catalog().self_crossings(component) {
        let info = link.catalog().info(k);
        let eta = link.eta_between(info.plus, info.minus)?;
        by_eta
            .entry(eta)
            .or_default()
            .push((info.plus.index, info.id.clone()));
    }
    for chords in by_eta.values_mut() {
        chords.sort();
    }

    let mut out = Filamentation::default();
    for (&eta, chords) in &by_eta {
        if eta == 0 {
            out.mono.extend(chords.iter().map(|(_, id)| id.clone()));
        } else if eta > 0 {
            let partners = by_eta.get(&-eta).map(Vec::as_slice).unwrap_or(&[]);
            if partners.len() != chords.len() {
                return Ok(None);
            }
            for ((_, x), (_, y)) in chords.iter().zip(partners) {
                out.bi.insert(sorted_pair(x, y));
            }
        } else if !by_eta.contains_key(&-eta) {
            return Ok(None);
        }
    }
    Ok(Some(out))
}

fn sorted_pair(x: &str, y: &str) -> (String, String) {
    if x <= y {
        (x.to_string(), y.to_string())
    } else {
        (y.to_string(), x.to_string())
    }
}

/// A pairing of the crossings between two components in which every pair
/// has η-sum zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumPartition(PairPartition);

impl ZeroSumPartition {
    /// Checks the partition and that every pair sums to zero.
    pub fn new(link: &Link, partition: PairPartition) -> Result<Self> {
        partition.check(link)?;
        for (x, y) in &partition.pairs {
            let sum = pair_eta_sum(link, x, y)?;
            if sum != 0 {
                return Err(Error::InvalidPartition(format!(
                    "pair ({x}, {y}) has eta sum {sum}"
                )));
            }
        }
        Ok(ZeroSumPartition(partition))
    }

    pub fn partition(&self) -> &PairPartition {
        &self.0
    }

    pub fn into_partition(self) -> PairPartition {
        self.0
    }

    /// Elementary switch that must again yield a zero-sum partition.
    pub fn switch(
        &self,
        link: &Link,
        pair1: &(String, String),
        pair2: &(String, String),
    ) -> Result<Self> {
        ZeroSumPartition::new(link, elementary_switch(&self.0, pair1, pair2)?)
    }
}

/// Replaces pairs `(x, z)` and `(w, y)` with `(x, y)` and `(w, z)`.
pub fn elementary_switch(
    partition: &PairPartition,
    pair1: &(String, String),
    pair2: &(String, String),
) -> Result<PairPartition> {
    let find = |pair: &(String, String)| {
        partition
            .pairs
            .iter()
            .position(|p| p == pair)
            .ok_or_else(|| Error::PairNotInPartition(pair.0.clone(), pair.1.clone()))
    };
    let i = find(pair1)?;
    let j = find(pair2)?;
    if i == j {
        return Err(Error::InvalidPartition(
            "elementary switch needs two distinct pairs".into(),
        ));
    }
    let mut out = partition.clone();
    let (z, y) = (out.pairs[i].1.clone(), out.pairs[j].1.clone());
    out.pairs[i].1 = y;
    out.pairs[j].1 = z;
    Ok(out)
}

/// Given a zero-sum partition and a zero-sum pair `(x, y)`, returns a
/// zero-sum partition containing `(x, y)`: the pairs `(x, z)` and `(w, y)`
/// are switched to `(x, y)` and `(w, z)`.
pub fn exchange_into(
    link: &Link,
    p: &ZeroSumPartition,
    x: &str,
    y: &str,
) -> Result<ZeroSumPartition> {
    let pairs = &p.partition().pairs;
    let target = (x.to_string(), y.to_string());
    if pairs.contains(&target) {
        return Ok(p.clone());
    }
    let sum = pair_eta_sum(link, x, y)?;
    if sum != 0 {
        return Err(Error::InvalidPartition(format!(
            "pair ({x}, {y}) has eta sum {sum}"
        )));
    }
    let with_x = pairs
        .iter()
        .find(|(a, _)| a == x)
        .ok_or_else(|| Error::PairNotInPartition(x.to_string(), "?".into()))?;
    let with_y = pairs
        .iter()
        .find(|(_, b)| b == y)
        .ok_or_else(|| Error::PairNotInPartition("?".into(), y.to_string()))?;
    p.switch(link, &with_x.clone(), &with_y.clone())
}

/// Builds a zero-sum partition one pair at a time, committing the first
/// zero-sum pair found in position order. Returns `None` when the remaining
/// crossings admit no zero-sum pair; any committed pair extends to a full
/// zero-sum partition whenever one exists, so this decides existence.
pub fn greedy_zero_sum_partition(
    link: &Link,
    a: usize,
    b: usize,
) -> Result<Option<ZeroSumPartition>> {
    let diff = flat_linking_diff(link, a, b)?;
    if diff != 0 {
        return Err(Error::NonzeroFlatLinking(diff));
    }
    let catalog = link.catalog();
    let mut plus_ends = Vec::new();
    let mut minus_ends = Vec::new();
    for &k in catalog.pair_crossings(a, b) {
        let info = catalog.info(k);
        if info.plus.component == a {
            plus_ends.push((info.plus.index, info.id.as_str()));
        } else {
            minus_ends.push((info.minus.index, info.id.as_str()));
        }
    }
    plus_ends.sort();
    minus_ends.sort();

    let mut pairs = Vec::with_capacity(plus_ends.len());
    while !plus_ends.is_empty() {
        let mut found = None;
        'scan: for (i, &(_, x)) in plus_ends.iter().enumerate() {
            for (j, &(_, y)) in minus_ends.iter().enumerate() {
                if pair_eta_sum(link, x, y)? == 0 {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = found else {
            return Ok(None);
        };
        let (_, x) = plus_ends.remove(i);
        let (_, y) = minus_ends.remove(j);
        pairs.push((x.to_string(), y.to_string()));
    }
    Ok(Some(ZeroSumPartition(PairPartition::new(a, b, pairs))))
}

/// Filamentation of the whole link, or `None` if there is none.
pub fn link_filamentation(link: &Link) -> Result<Option<Filamentation>> {
    let n = link.component_count();
    for a in 0..n {
        for b in a + 1..n {
            if flat_linking_diff(link, a, b)? != 0 {
                return Ok(None);
            }
        }
    }
    let mut out = Filamentation::default();
    for c in 0..n {
        match component_filamentation(link, c)? {
            Some(f) => out.merge(f),
            None => return Ok(None),
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            match greedy_zero_sum_partition(link, a, b)? {
                Some(p) => out.bi.extend(p.into_partition().pairs),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

/// Exhaustive search over all partitions into monofilaments and
/// bifilaments, checking the definition directly.
pub fn brute_force_filamentation(link: &Link) -> Result<Option<Filamentation>> {
    brute_force_filamentation_capped(link, ORACLE_CROSSING_CAP)
}

pub fn brute_force_filamentation_capped(link: &Link, cap: usize) -> Result<Option<Filamentation>> {
    let size = link.catalog().len();
    if size > cap {
        return Err(Error::InstanceTooLarge { size, cap });
    }
    let ids: Vec<&str> = link
        .catalog()
        .crossings()
        .iter()
        .map(|c| c.id.as_str())
        .collect();
    let mut covered = vec![false; ids.len()];
    let mut parts = Vec::new();
    if search_parts(link, &ids, &mut covered, &mut parts)? {
        let mut out = Filamentation::default();
        for part in parts {
            match part {
                Part::Mono(x) => {
                    out.mono.insert(ids[x].to_string());
                }
                Part::Bi(x, y) => {
                    out.bi.insert((ids[x].to_string(), ids[y].to_string()));
                }
            }
        }
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

enum Part {
    Mono(usize),
    Bi(usize, usize),
}

fn search_parts(
    link: &Link,
    ids: &[&str],
    covered: &mut [bool],
    parts: &mut Vec<Part>,
) -> Result<bool> {
    let Some(first) = covered.iter().position(|&c| !c) else {
        return Ok(true);
    };
    covered[first] = true;

    let info = link.catalog().info(first);
    if info.is_self() && link.eta_between(info.plus, info.minus)? == 0 {
        parts.push(Part::Mono(first));
        if search_parts(link, ids, covered, parts)? {
            return Ok(true);
        }
        parts.pop();
    }

    for other in first + 1..ids.len() {
        if covered[other] {
            continue;
        }
        let Some((x, y)) = orient_bifilament(link, ids[first], ids[other])? else {
            continue;
        };
        let sum = link.eta_plus_minus(x, y)? + link.eta_plus_minus(y, x)?;
        if sum != 0 {
            continue;
        }
        let (xi, yi) = if x == ids[first] {
            (first, other)
        } else {
            (other, first)
        };
        covered[other] = true;
        parts.push(Part::Bi(xi, yi));
        if search_parts(link, ids, covered, parts)? {
            return Ok(true);
        }
        parts.pop();
        covered[other] = false;
    }

    covered[first] = false;
    Ok(false)
}
