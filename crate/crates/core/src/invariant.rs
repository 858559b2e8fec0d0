//! The link polynomial: one polynomial per component, one linear
//! coefficient per unlinked pair of components, and the flat linking
//! differences that decide which pairs are unlinked.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::Link;
use crate::poly::SparsePoly;

/// (+ ends) − (− ends) of the crossings between `a` and `b`, counted on `a`.
///
/// This is twice the flat linking number. A nonzero value certifies that
/// the link is nontrivial.
pub fn flat_linking_diff(link: &Link, a: usize, b: usize) -> Result<i64> {
    link.check_component(a)?;
    link.check_component(b)?;
    if a == b {
        return Err(Error::SameComponent(a, b));
    }
    let catalog = link.catalog();
    Ok(catalog
        .pair_crossings(a, b)
        .iter()
        .map(|&k| {
            if catalog.info(k).plus.component == a {
                1
            } else {
                -1
            }
        })
        .sum())
}

/// Renders a linking difference as the halved flat linking number.
pub fn halved(diff: i64) -> String {
    if diff % 2 == 0 {
        (diff / 2).to_string()
    } else {
        let sign = if diff < 0 { "-" } else { "" };
        format!("{sign}{}.5", diff.unsigned_abs() / 2)
    }
}

/// Sum of η(x+, x-) · t^|η(x+, x-)| over the self-crossings of `component`.
pub fn self_polynomial(link: &Link, component: usize) -> Result<SparsePoly> {
    link.check_component(component)?;
    let mut poly = SparsePoly::zero();
    for &k in link.catalog().self_crossings(component) {
        let info = link.catalog().info(k);
        let eta = link.eta_between(info.plus, info.minus)?;
        poly.add_term(eta.unsigned_abs() as u32, eta);
    }
    Ok(poly)
}

/// A pairing of the crossings between components `a` and `b`.
///
/// Each pair `(x, y)` has `x+` and `y-` on `a`, so `x-` and `y+` lie on `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPartition {
    pub a: usize,
    pub b: usize,
    pub pairs: Vec<(String, String)>,
}

impl PairPartition {
    pub fn new(a: usize, b: usize, pairs: Vec<(String, String)>) -> Self {
        PairPartition { a, b, pairs }
    }

    /// Order-independent form, for comparing partitions.
    pub fn pair_set(&self) -> BTreeSet<(String, String)> {
        self.pairs.iter().cloned().collect()
    }

    /// Checks that the pairs exactly cover the crossings between `a` and `b`
    /// with the orientation convention above.
    pub fn check(&self, link: &Link) -> Result<()> {
        link.check_component(self.a)?;
        link.check_component(self.b)?;
        if self.a == self.b {
            return Err(Error::SameComponent(self.a, self.b));
        }
        let invalid = |msg: String| Err(Error::InvalidPartition(msg));
        let mut seen = BTreeSet::new();
        for (x, y) in &self.pairs {
            let xi = link.crossing(x)?;
            let yi = link.crossing(y)?;
            if xi.plus.component != self.a || xi.minus.component != self.b {
                return invalid(format!(
                    "crossing {x} does not run from its + end on component {} to component {}",
                    self.a, self.b
                ));
            }
            if yi.minus.component != self.a || yi.plus.component != self.b {
                return invalid(format!(
                    "crossing {y} does not have its - end on component {} and + end on {}",
                    self.a, self.b
                ));
            }
            for id in [x, y] {
                if !seen.insert(id.as_str()) {
                    return invalid(format!("crossing {id} is used twice"));
                }
            }
        }
        let expected = link.catalog().pair_crossings(self.a, self.b).len();
        if seen.len() != expected {
            return invalid(format!(
                "pairs cover {} of {expected} crossings between the components",
                seen.len()
            ));
        }
        Ok(())
    }
}

/// η_A(x+, y-) + η_B(y+, x-) for one oriented pair.
pub fn pair_eta_sum(link: &Link, x: &str, y: &str) -> Result<i64> {
    Ok(link.eta_plus_minus(x, y)? + link.eta_plus_minus(y, x)?)
}

/// First-fit pairing: + ends of the `a`/`b` crossings on `a`, in position
/// order, are matched with the − ends on `a`, in position order.
pub fn choose_pair_partition(link: &Link, a: usize, b: usize) -> Result<PairPartition> {
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
            plus_ends.push((info.plus.index, info.id.clone()));
        } else {
            minus_ends.push((info.minus.index, info.id.clone()));
        }
    }
    plus_ends.sort();
    minus_ends.sort();
    let pairs = plus_ends
        .into_iter()
        .zip(minus_ends)
        .map(|((_, x), (_, y))| (x, y))
        .collect();
    Ok(PairPartition::new(a, b, pairs))
}

/// Σ over the pairs of η_A(x+, y-) + η_B(y+, x-).
pub fn pair_coefficient(link: &Link, partition: &PairPartition) -> Result<i64> {
    partition.check(link)?;
    partition
        .pairs
        .iter()
        .map(|(x, y)| pair_eta_sum(link, x, y))
        .sum()
}

/// Value of the link polynomial.
///
/// Pairs are keyed by the component names in sorted order; a linking
/// difference is measured on the first name of its key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkInvariant {
    pub component_polys: BTreeMap<String, SparsePoly>,
    pub pair_coeffs: BTreeMap<(String, String), i64>,
    pub linking_diffs: BTreeMap<(String, String), i64>,
}

impl LinkInvariant {
    /// True when every polynomial, pair coefficient and linking difference
    /// vanishes.
    pub fn is_zero(&self) -> bool {
        self.component_polys.values().all(SparsePoly::is_zero)
            && self.pair_coeffs.values().all(|&c| c == 0)
            && self.linking_diffs.values().all(|&d| d == 0)
    }

    /// Pairs whose linking difference is nonzero.
    pub fn linked_pairs(&self) -> impl Iterator<Item = (&(String, String), &i64)> {
        self.linking_diffs.iter().filter(|(_, &d)| d != 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = InvariantDoc {
            components: self
                .component_polys
                .iter()
                .map(|(name, poly)| ComponentDoc {
                    name: name.clone(),
                    poly: poly.terms().map(|(e, c)| (e.to_string(), c)).collect(),
                })
                .collect(),
            pairs: self
                .pair_coeffs
                .iter()
                .map(|((a, b), &coeff)| PairDoc {
                    a: a.clone(),
                    b: b.clone(),
                    coeff,
                })
                .collect(),
            linking: self
                .linking_diffs
                .iter()
                .map(|((a, b), &diff)| LinkingDoc {
                    a: a.clone(),
                    b: b.clone(),
                    diff,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("invariant serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: InvariantDoc = serde_json::from_value(value.clone())
            .map_err(|e| Error::MalformedJson(e.to_string()))?;
        let mut out = LinkInvariant::default();
        for c in doc.components {
            let mut poly = SparsePoly::zero();
            for (exp, coeff) in c.poly {
                let exp: u32 = exp
                    .parse()
                    .map_err(|_| Error::MalformedJson(format!("bad exponent `{exp}`")))?;
                poly.add_term(exp, coeff);
            }
            out.component_polys.insert(c.name, poly);
        }
        for p in doc.pairs {
            out.pair_coeffs.insert(sorted_key(p.a, p.b), p.coeff);
        }
        for l in doc.linking {
            if l.a <= l.b {
                out.linking_diffs.insert((l.a, l.b), l.diff);
            } else {
                out.linking_diffs.insert((l.b, l.a), -l.diff);
            }
        }
        Ok(out)
    }

    /// Human-readable multi-line summary.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        for (name, poly) in &self.component_polys {
            lines.push(format!(
                "p_{name} = {}",
                poly.display_with(&format!("t_{name}"))
            ));
        }
        for ((a, b), diff) in &self.linking_diffs {
            match self.pair_coeffs.get(&(a.clone(), b.clone())) {
                Some(coeff) => lines.push(format!("p_{a},{b} = {coeff} t_{a},{b}")),
                None => lines.push(format!(
                    "p_{a},{b} undefined: linked, flat linking number {}",
                    halved(*diff)
                )),
            }
        }
        lines.push(format!("zero: {}", self.is_zero()));
        lines.join("\n")
    }
}

fn sorted_key(a: String, b: String) -> (String, String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Serialize, Deserialize)]
struct InvariantDoc {
    components: Vec<ComponentDoc>,
    pairs: Vec<PairDoc>,
    linking: Vec<LinkingDoc>,
}

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    name: String,
    poly: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
struct PairDoc {
    a: String,
    b: String,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct LinkingDoc {
    a: String,
    b: String,
    diff: i64,
}

/// Assembles the full invariant under the first-fit pairings.
pub fn link_polynomial(link: &Link) -> Result<LinkInvariant> {
    let n = link.component_count();
    let mut out = LinkInvariant::default();
    for c in 0..n {
        out.component_polys.insert(
            link.component_name(c).to_string(),
            self_polynomial(link, c)?,
        );
    }
    for a in 0..n {
        for b in a + 1..n {
            let (na, nb) = (link.component_name(a), link.component_name(b));
            let (first, second) = if na <= nb { (a, b) } else { (b, a) };
            let key = (
                link.component_name(first).to_string(),
                link.component_name(second).to_string(),
            );
            let diff = flat_linking_diff(link, first, second)?;
            out.linking_diffs.insert(key.clone(), diff);
            if diff == 0 {
                let partition = choose_pair_partition(link, first, second)?;
                out.pair_coeffs
                    .insert(key, pair_coefficient(link, &partition)?);
            }
        }
    }
    Ok(out)
}

/// Exact equality, or equality under some renaming of components.
pub fn invariants_equal(
    i1: &LinkInvariant,
    i2: &LinkInvariant,
    up_to_component_bijection: bool,
) -> bool {
    if !up_to_component_bijection {
        return i1 == i2;
    }
    if i1.component_polys.len() != i2.component_polys.len()
        || i1.pair_coeffs.len() != i2.pair_coeffs.len()
        || i1.linking_diffs.len() != i2.linking_diffs.len()
    {
        return false;
    }
    let names1: Vec<&String> = i1.component_polys.keys().collect();
    let names2: Vec<&String> = i2.component_polys.keys().collect();
    names2.iter().permutations(names2.len()).any(|image| {
        let rename: BTreeMap<&String, &String> = names1
            .iter()
            .copied()
            .zip(image.into_iter().copied())
            .collect();
        matches_under(i1, i2, &rename)
    })
}

fn matches_under(
    i1: &LinkInvariant,
    i2: &LinkInvariant,
    rename: &BTreeMap<&String, &String>,
) -> bool {
    let polys_match = i1
        .component_polys
        .iter()
        .all(|(name, poly)| i2.component_polys.get(rename[name]) == Some(poly));
    let pairs_match = i1.pair_coeffs.iter().all(|((a, b), coeff)| {
        let key = sorted_key(rename[a].clone(), rename[b].clone());
        i2.pair_coeffs.get(&key) == Some(coeff)
    });
    let linking_match = i1.linking_diffs.iter().all(|((a, b), diff)| {
        let (ra, rb) = (rename[a].clone(), rename[b].clone());
        if ra <= rb {
            i2.linking_diffs.get(&(ra, rb)) == Some(diff)
        } else {
            i2.linking_diffs.get(&(rb, ra)) == Some(&-diff)
        }
    });
    polys_match && pairs_match && linking_match
}
