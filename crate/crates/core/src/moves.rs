//! Flat Reidemeister moves on Gauss codes.
//!
//! * R1 inserts or removes a curl: an adjacent pair `e+ e-` (or `e- e+`).
//! * R2 inserts or removes a bigon: `e^s f^-s` adjacent on one strand and
//!   `e^-s f^s` (in either order) adjacent on another.
//! * R3 is the cyclic triangle: three adjacent pairs `(a+ c-) (b+ a-)
//!   (c+ b-)`, each reversed in place by the move. Reversing all three
//!   yields the inverse form, so the same site applies twice to undo.
//!
//! Move logs use one line per move:
//!
//! ```text
//! <kind> <component(s)> <positions> <crossings>
//! R1Insert A 3 _1+,_1-
//! R2Remove A,B 1,4 e,f
//! R3 A,A,B 0,2,4 a,b,c
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gauss::{is_identifier, FlatLinkCode, Letter, Link, Position, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Insert,
    R1Remove,
    R2Insert,
    R2Remove,
    R3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::R1Insert,
        MoveKind::R1Remove,
        MoveKind::R2Insert,
        MoveKind::R2Remove,
        MoveKind::R3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Insert => "R1Insert",
            MoveKind::R1Remove => "R1Remove",
            MoveKind::R2Insert => "R2Insert",
            MoveKind::R2Remove => "R2Remove",
            MoveKind::R3 => "R3",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::MalformedMoveLog(s.to_string()))
    }
}

/// Insertion point: new letters go before `index` on `component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gap {
    pub component: usize,
    pub index: usize,
}

/// An applicable move. Removal and R3 sites record the start of each
/// adjacent letter pair; the pair is that position and the next one,
/// cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveSite {
    R1Insert {
        gap: Gap,
        letters: [Letter; 2],
    },
    R1Remove {
        at: Position,
        crossing: String,
    },
    /// `letters[0..2]` go in at `first`, `letters[2..4]` at `second`.
    R2Insert {
        first: Gap,
        second: Gap,
        letters: [Letter; 4],
    },
    /// `pairs[0]` holds `e^s f^-s`; `pairs[1]` holds the other ends.
    R2Remove {
        pairs: [Position; 2],
        crossings: [String; 2],
    },
    R3 {
        pairs: [Position; 3],
        crossings: [String; 3],
    },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Insert { .. } => MoveKind::R1Insert,
            MoveSite::R1Remove { .. } => MoveKind::R1Remove,
            MoveSite::R2Insert { .. } => MoveKind::R2Insert,
            MoveSite::R2Remove { .. } => MoveKind::R2Remove,
            MoveSite::R3 { .. } => MoveKind::R3,
        }
    }

    /// One log line; component names are taken from `code`.
    pub fn to_log_line(&self, code: &FlatLinkCode) -> String {
        let name = |c: usize| {
            code.components
                .get(c)
                .map(|w| w.name.clone())
                .unwrap_or_else(|| format!("#{c}"))
        };
        let join = |items: Vec<String>| items.join(",");
        let (components, positions, crossings) = match self {
            MoveSite::R1Insert { gap, letters } => (
                name(gap.component),
                gap.index.to_string(),
                join(letters.iter().map(Letter::to_string).collect()),
            ),
            MoveSite::R1Remove { at, crossing } => {
                (name(at.component), at.index.to_string(), crossing.clone())
            }
            MoveSite::R2Insert {
                first,
                second,
                letters,
            } => (
                join(vec![name(first.component), name(second.component)]),
                join(vec![first.index.to_string(), second.index.to_string()]),
                join(letters.iter().map(Letter::to_string).collect()),
            ),
            MoveSite::R2Remove { pairs, crossings } => (
                join(pairs.iter().map(|p| name(p.component)).collect()),
                join(pairs.iter().map(|p| p.index.to_string()).collect()),
                crossings.join(","),
            ),
            MoveSite::R3 { pairs, crossings } => (
                join(pairs.iter().map(|p| name(p.component)).collect()),
                join(pairs.iter().map(|p| p.index.to_string()).collect()),
                crossings.join(","),
            ),
        };
        format!("{} {components} {positions} {crossings}", self.kind())
    }

    /// Parses a line written by [`MoveSite::to_log_line`].
    pub fn parse_log_line(line: &str, code: &FlatLinkCode) -> Result<MoveSite> {
        let bad = || Error::MalformedMoveLog(line.to_string());
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [kind, components, positions, crossings] = fields.as_slice() else {
            return Err(bad());
        };
        let kind: MoveKind = kind.parse().map_err(|_| bad())?;
        let components = components
            .split(',')
            .map(|n| code.component_index(n).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        let positions = positions
            .split(',')
            .map(|p| p.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let crossings: Vec<&str> = crossings.split(',').collect();
        let letters = || {
            crossings
                .iter()
                .map(|t| Letter::parse(t).map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
        };
        let ids = |n: usize| -> Result<Vec<String>> {
            if crossings.len() != n || !crossings.iter().all(|c| is_identifier(c)) {
                return Err(bad());
            }
            Ok(crossings.iter().map(|c| c.to_string()).collect())
        };
        let site = match (kind, components.as_slice(), positions.as_slice()) {
            (MoveKind::R1Insert, &[c], &[g]) => {
                let l: [Letter; 2] = letters()?.try_into().map_err(|_| bad())?;
                MoveSite::R1Insert {
                    gap: Gap {
                        component: c,
                        index: g,
                    },
                    letters: l,
                }
            }
            (MoveKind::R1Remove, &[c], &[p]) => MoveSite::R1Remove {
                at: Position::new(c, p),
                crossing: ids(1)?.remove(0),
            },
            (MoveKind::R2Insert, &[c1, c2], &[g1, g2]) => {
                let l: [Letter; 4] = letters()?.try_into().map_err(|_| bad())?;
                MoveSite::R2Insert {
                    first: Gap {
                        component: c1,
                        index: g1,
                    },
                    second: Gap {
                        component: c2,
                        index: g2,
                    },
                    letters: l,
                }
            }
            (MoveKind::R2Remove, &[c1, c2], &[p1, p2]) => MoveSite::R2Remove {
                pairs: [Position::new(c1, p1), Position::new(c2, p2)],
                crossings: ids(2)?.try_into().map_err(|_| bad())?,
            },
            (MoveKind::R3, &[c1, c2, c3], &[p1, p2, p3]) => MoveSite::R3 {
                pairs: [
                    Position::new(c1, p1),
                    Position::new(c2, p2),
                    Position::new(c3, p3),
                ],
                crossings: ids(3)?.try_into().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        Ok(site)
    }
}

/// The `count` smallest unused identifiers `_1`, `_2`, ...
pub fn fresh_ids(code: &FlatLinkCode, count: usize) -> Vec<String> {
    let used: HashSet<&str> = code
        .components
        .iter()
        .flat_map(|w| w.letters.iter().map(|l| l.crossing.as_str()))
        .collect();
    (1..)
        .map(|k| format!("_{k}"))
        .filter(|id| !used.contains(id.as_str()))
        .take(count)
        .collect()
}

fn next_index(code: &FlatLinkCode, at: Position) -> usize {
    (at.index + 1) % code.components[at.component].len()
}

/// The two letters of the adjacent pair starting at `at`, if the codeword
/// has at least two letters.
fn adjacent_pair(code: &FlatLinkCode, at: Position) -> Option<(&Letter, &Letter)> {
    let word = code.components.get(at.component)?;
    if word.len() < 2 || at.index >= word.len() {
        return None;
    }
    Some((
        &word.letters[at.index],
        &word.letters[(at.index + 1) % word.len()],
    ))
}

fn adjacent_positions(code: &FlatLinkCode) -> impl Iterator<Item = Position> + '_ {
    code.components
        .iter()
        .enumerate()
        .filter(|(_, w)| w.len() >= 2)
        .flat_map(|(c, w)| (0..w.len()).map(move |i| Position::new(c, i)))
}

/// Insertion gaps; a codeword of length n has n distinct cyclic gaps, an
/// empty one has a single gap.
fn gaps(code: &FlatLinkCode) -> Vec<Gap> {
    code.components
        .iter()
        .enumerate()
        .flat_map(|(c, w)| {
            (0..w.len().max(1)).map(move |i| Gap {
                component: c,
                index: i,
            })
        })
        .collect()
}

fn r1_insert_sites(code: &FlatLinkCode) -> Vec<MoveSite> {
    let id = fresh_ids(code, 1).remove(0);
    gaps(code)
        .into_iter()
        .flat_map(|gap| {
            let id = id.clone();
            [Sign::Plus, Sign::Minus]
                .into_iter()
                .map(move |s| MoveSite::R1Insert {
                    gap,
                    letters: [Letter::new(id.clone(), s), Letter::new(id.clone(), -s)],
                })
        })
        .collect()
}

fn r1_remove_sites(code: &FlatLinkCode) -> Vec<MoveSite> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for at in adjacent_positions(code) {
        let (u, v) = adjacent_pair(code, at).expect("adjacent");
        if u.crossing == v.crossing && u.sign != v.sign && seen.insert(u.crossing.clone()) {
            out.push(MoveSite::R1Remove {
                at,
                crossing: u.crossing.clone(),
            });
        }
    }
    out
}

fn r2_insert_count(gap_count: usize) -> usize {
    gap_count * (gap_count + 1) / 2 * 4
}

/// Decodes the `k`-th R2 insertion: an unordered pair of gaps (possibly
/// equal), the sign on the first strand, and the letter order on the second.
fn r2_insert_site(gaps: &[Gap], ids: &[String], k: usize) -> MoveSite {
    let variant = k % 4;
    let mut pair = k / 4;
    let mut i = 0;
    while pair >= gaps.len() - i {
        pair -= gaps.len() - i;
        i += 1;
    }
    let j = i + pair;
    let s = if variant & 1 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let (e, f) = (&ids[0], &ids[1]);
    let second = if variant & 2 == 0 {
        [Letter::new(e.clone(), -s), Letter::new(f.clone(), s)]
    } else {
        [Letter::new(f.clone(), s), Letter::new(e.clone(), -s)]
    };
    let [s0, s1] = second;
    MoveSite::R2Insert {
        first: gaps[i],
        second: gaps[j],
        letters: [
            Letter::new(e.clone(), s),
            Letter::new(f.clone(), -s),
            s0,
            s1,
        ],
    }
}

fn r2_insert_sites(code: &FlatLinkCode) -> Vec<MoveSite> {
    let gaps = gaps(code);
    if gaps.is_empty() {
        return Vec::new();
    }
    let ids = fresh_ids(code, 2);
    (0..r2_insert_count(gaps.len()))
        .map(|k| r2_insert_site(&gaps, &ids, k))
        .collect()
}

fn r2_remove_sites(link: &Link) -> Vec<MoveSite> {
    let code = link.code();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for at in adjacent_positions(code) {
        let (u, v) = adjacent_pair(code, at).expect("adjacent");
        if u.crossing == v.crossing || u.sign == v.sign {
            continue;
        }
        let key = BTreeSet::from([u.crossing.clone(), v.crossing.clone()]);
        if seen.contains(&key) {
            continue;
        }
        let other_e = link.catalog().get(&u.crossing).expect("valid").end(-u.sign);
        let other_f = link.catalog().get(&v.crossing).expect("valid").end(u.sign);
        if let Some(start) = adjacency_start(code, other_e, other_f) {
            seen.insert(key);
            out.push(MoveSite::R2Remove {
                pairs: [at, start],
                crossings: [u.crossing.clone(), v.crossing.clone()],
            });
        }
    }
    out
}

/// Start of the adjacent pair formed by `p` and `q` in either order.
fn adjacency_start(code: &FlatLinkCode, p: Position, q: Position) -> Option<Position> {
    if p.component != q.component || code.components[p.component].len() < 2 {
        return None;
    }
    if next_index(code, p) == q.index {
        Some(p)
    } else if next_index(code, q) == p.index {
        Some(q)
    } else {
        None
    }
}

/// Triangles in the `(a+ c-) (b+ a-) (c+ b-)` form. The reversed form left
/// behind by a move is accepted by [`apply_move`] but not listed.
fn r3_sites(code: &FlatLinkCode) -> Vec<MoveSite> {
    // plus-crossing -> (pair start, minus-crossing) over pairs read (x+ y-)
    let mut edges: HashMap<&str, (Position, &str)> = HashMap::new();
    for at in adjacent_positions(code) {
        let (u, v) = adjacent_pair(code, at).expect("adjacent");
        if u.sign == Sign::Plus && v.sign == Sign::Minus && u.crossing != v.crossing {
            edges.insert(&u.crossing, (at, &v.crossing));
        }
    }
    let mut starts: Vec<_> = edges.iter().collect();
    starts.sort_by_key(|(_, (p, _))| *p);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (&a, &(p1, c)) in starts {
        let Some(&(p2, b)) = edges.get(c) else {
            continue;
        };
        let Some(&(p3, a2)) = edges.get(b) else {
            continue;
        };
        if a2 != a {
            continue;
        }
        let mut key = [p1, p2, p3];
        key.sort();
        if seen.insert(key) {
            out.push(MoveSite::R3 {
                pairs: [p1, p2, p3],
                crossings: [a.to_string(), b.to_string(), c.to_string()],
            });
        }
    }
    out
}

/// All sites of the requested kinds, in kind order.
pub fn find_move_sites(link: &Link, kinds: &[MoveKind]) -> Vec<MoveSite> {
    let code = link.code();
    let mut out = Vec::new();
    for kind in MoveKind::ALL {
        if !kinds.contains(&kind) {
            continue;
        }
        out.extend(match kind {
            MoveKind::R1Insert => r1_insert_sites(code),
            MoveKind::R1Remove => r1_remove_sites(code),
            MoveKind::R2Insert => r2_insert_sites(code),
            MoveKind::R2Remove => r2_remove_sites(link),
            MoveKind::R3 => r3_sites(code),
        });
    }
    out
}

fn stale(msg: impl Into<String>) -> Error {
    Error::StaleSite(msg.into())
}

fn check_gap(code: &FlatLinkCode, gap: Gap) -> Result<()> {
    let word = code
        .components
        .get(gap.component)
        .ok_or_else(|| stale(format!("no component {}", gap.component)))?;
    if gap.index > word.len() {
        return Err(stale(format!(
            "gap {} beyond codeword of length {}",
            gap.index,
            word.len()
        )));
    }
    Ok(())
}

fn check_fresh(link: &Link, letters: &[Letter]) -> Result<()> {
    for l in letters {
        if !is_identifier(&l.crossing) {
            return Err(stale(format!("bad crossing identifier `{}`", l.crossing)));
        }
        if link.catalog().get(&l.crossing).is_some() {
            return Err(stale(format!("crossing `{}` already exists", l.crossing)));
        }
    }
    Ok(())
}

fn pair_at(code: &FlatLinkCode, at: Position) -> Result<(&Letter, &Letter)> {
    adjacent_pair(code, at).ok_or_else(|| stale(format!("no adjacent pair at {at:?}")))
}

/// Inserts letters at several gaps; later gaps on a component go first so
/// earlier indices stay valid. Letters sharing a gap keep their listed order.
fn insert_at(code: &mut FlatLinkCode, mut inserts: Vec<(Gap, Vec<Letter>)>) {
    inserts.sort_by_key(|i| std::cmp::Reverse(i.0));
    let mut merged: Vec<(Gap, Vec<Letter>)> = Vec::new();
    for (gap, letters) in inserts {
        match merged.last_mut() {
            Some((g, existing)) if *g == gap => existing.extend(letters),
            _ => merged.push((gap, letters)),
        }
    }
    for (gap, letters) in merged {
        let word = &mut code.components[gap.component].letters;
        let tail = word.split_off(gap.index);
        word.extend(letters);
        word.extend(tail);
    }
}

fn remove_positions(code: &mut FlatLinkCode, mut positions: Vec<Position>) {
    positions.sort();
    positions.dedup();
    for p in positions.into_iter().rev() {
        code.components[p.component].letters.remove(p.index);
    }
}

/// Applies a site after re-checking that it matches the link.
pub fn apply_move(link: &Link, site: &MoveSite) -> Result<Link> {
    let code = link.code();
    let mut out = code.clone();
    match site {
        MoveSite::R1Insert { gap, letters } => {
            check_gap(code, *gap)?;
            check_fresh(link, &letters[..1])?;
            if letters[0].crossing != letters[1].crossing || letters[0].sign == letters[1].sign {
                return Err(stale("R1 insertion needs e+ e- or e- e+"));
            }
            insert_at(&mut out, vec![(*gap, letters.to_vec())]);
        }
        MoveSite::R1Remove { at, crossing } => {
            let (u, v) = pair_at(code, *at)?;
            if u.crossing != *crossing || v.crossing != *crossing {
                return Err(stale(format!("no curl of `{crossing}` at {at:?}")));
            }
            let next = Position::new(at.component, next_index(code, *at));
            remove_positions(&mut out, vec![*at, next]);
        }
        MoveSite::R2Insert {
            first,
            second,
            letters,
        } => {
            check_gap(code, *first)?;
            check_gap(code, *second)?;
            let [e1, f1, x, y] = letters;
            let s = e1.sign;
            let (e, f) = (&e1.crossing, &f1.crossing);
            let strand_ok = e != f && f1.sign == -s;
            let other_ok = (x.crossing == *e && x.sign == -s && y.crossing == *f && y.sign == s)
                || (x.crossing == *f && x.sign == s && y.crossing == *e && y.sign == -s);
            if !strand_ok || !other_ok {
                return Err(stale("R2 insertion letters do not form a bigon"));
            }
            check_fresh(link, &[e1.clone(), f1.clone()])?;
            insert_at(
                &mut out,
                vec![
                    (*first, vec![e1.clone(), f1.clone()]),
                    (*second, vec![x.clone(), y.clone()]),
                ],
            );
        }
        MoveSite::R2Remove { pairs, crossings } => {
            let [e, f] = crossings;
            let (u, v) = pair_at(code, pairs[0])?;
            if u.crossing != *e || v.crossing != *f || u.sign == v.sign || e == f {
                return Err(stale(format!("no strand {e}{f} at {:?}", pairs[0])));
            }
            let s = u.sign;
            let (x, y) = pair_at(code, pairs[1])?;
            let want = [Letter::new(e.clone(), -s), Letter::new(f.clone(), s)];
            let got = [x, y];
            if !(got == [&want[0], &want[1]] || got == [&want[1], &want[0]]) {
                return Err(stale(format!("no matching strand at {:?}", pairs[1])));
            }
            let mut positions = Vec::new();
            for p in pairs {
                positions.push(*p);
                positions.push(Position::new(p.component, next_index(code, *p)));
            }
            remove_positions(&mut out, positions);
        }
        MoveSite::R3 { pairs, crossings } => {
            check_triangle(code, pairs, crossings)?;
            for p in pairs {
                let word = &mut out.components[p.component].letters;
                let q = (p.index + 1) % word.len();
                word.swap(p.index, q);
            }
        }
    }
    Link::new(out).map_err(|e| stale(format!("move produced an invalid code: {e}")))
}

/// Three adjacent pairs of distinct crossings, all read `(x+ y-)` or all
/// read `(y- x+)`, whose plus-to-minus map is the cycle a -> c -> b -> a.
fn check_triangle(
    code: &FlatLinkCode,
    pairs: &[Position; 3],
    crossings: &[String; 3],
) -> Result<()> {
    let [a, b, c] = crossings;
    if a == b || b == c || a == c {
        return Err(stale("R3 needs three distinct crossings"));
    }
    let mut links = Vec::new();
    let mut orientation = None;
    for p in pairs {
        let (u, v) = pair_at(code, *p)?;
        if u.sign == v.sign || u.crossing == v.crossing {
            return Err(stale(format!("no triangle edge at {p:?}")));
        }
        if *orientation.get_or_insert(u.sign) != u.sign {
            return Err(stale("R3 pairs have mixed orientation"));
        }
        let (plus, minus) = if u.sign == Sign::Plus { (u, v) } else { (v, u) };
        links.push((plus.crossing.as_str(), minus.crossing.as_str()));
    }
    let expected = [
        (a.as_str(), c.as_str()),
        (c.as_str(), b.as_str()),
        (b.as_str(), a.as_str()),
    ];
    let mut got = links.clone();
    got.sort();
    let mut want = expected.to_vec();
    want.sort();
    if got != want {
        return Err(stale(format!("pairs do not form the triangle {a},{b},{c}")));
    }
    Ok(())
}

/// Relative weights of the move kinds in a random walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPolicy {
    pub r1_insert: u32,
    pub r1_remove: u32,
    pub r2_insert: u32,
    pub r2_remove: u32,
    pub r3: u32,
    /// Insertions are skipped once the code has this many crossings.
    pub max_crossings: Option<usize>,
}

impl Default for WalkPolicy {
    fn default() -> Self {
        WalkPolicy {
            r1_insert: 2,
            r1_remove: 3,
            r2_insert: 2,
            r2_remove: 3,
            r3: 4,
            max_crossings: None,
        }
    }
}

impl WalkPolicy {
    pub fn weight(&self, kind: MoveKind) -> u32 {
        match kind {
            MoveKind::R1Insert => self.r1_insert,
            MoveKind::R1Remove => self.r1_remove,
            MoveKind::R2Insert => self.r2_insert,
            MoveKind::R2Remove => self.r2_remove,
            MoveKind::R3 => self.r3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Walk {
    pub link: Link,
    pub log: Vec<MoveSite>,
}

impl Walk {
    pub fn log_lines(&self) -> Vec<String> {
        self.log
            .iter()
            .map(|s| s.to_log_line(self.link.code()))
            .collect()
    }
}

/// Applies up to `steps` random moves. Each step picks a kind by weight
/// among kinds that have a site, then a site uniformly. Deterministic in
/// `(link, steps, seed, policy)`.
pub fn random_walk(link: &Link, steps: usize, seed: u64, policy: &WalkPolicy) -> Result<Walk> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = link.clone();
    let mut log = Vec::with_capacity(steps);
    for _ in 0..steps {
        let Some(site) = pick_site(&current, policy, &mut rng) else {
            break;
        };
        current = apply_move(&current, &site)?;
        log.push(site);
    }
    Ok(Walk { link: current, log })
}

fn pick_site(link: &Link, policy: &WalkPolicy, rng: &mut ChaCha8Rng) -> Option<MoveSite> {
    let code = link.code();
    let inserts_allowed = policy
        .max_crossings
        .is_none_or(|cap| link.catalog().len() < cap);
    let gap_list = gaps(code);

    let mut candidates: Vec<(MoveKind, u32, Vec<MoveSite>, usize)> = Vec::new();
    for kind in MoveKind::ALL {
        let weight = policy.weight(kind);
        if weight == 0 {
            continue;
        }
        let (sites, count) = match kind {
            MoveKind::R1Insert | MoveKind::R2Insert if !inserts_allowed => continue,
            // sampled by index to avoid materializing every pair of gaps
            MoveKind::R2Insert => (
                Vec::new(),
                if gap_list.is_empty() {
                    0
                } else {
                    r2_insert_count(gap_list.len())
                },
            ),
            _ => {
                let sites = find_move_sites(link, &[kind]);
                let n = sites.len();
                (sites, n)
            }
        };
        if count > 0 {
            candidates.push((kind, weight, sites, count));
        }
    }
    let total: u32 = candidates.iter().map(|c| c.1).sum();
    if total == 0 {
        return None;
    }
    let mut r = rng.gen_range(0..total);
    let (kind, _, mut sites, count) = candidates
        .into_iter()
        .find(|c| {
            if r < c.1 {
                true
            } else {
                r -= c.1;
                false
            }
        })
        .expect("weighted choice");
    let k = rng.gen_range(0..count);
    Some(match kind {
        MoveKind::R2Insert => r2_insert_site(&gap_list, &fresh_ids(code, 2), k),
        _ => sites.swap_remove(k),
    })
}

/// Replays log lines against `link`, returning the final link.
pub fn replay(link: &Link, lines: &[&str]) -> Result<Link> {
    let mut current = link.clone();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let site = MoveSite::parse_log_line(line, current.code())?;
        current = apply_move(&current, &site)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{codes_equivalent_syntactically, link_polynomial};

    fn link(text: &str) -> Link {
        Link::parse(text).unwrap()
    }

    #[test]
    fn r1_remove_sites_found() {
        let l = link("a+ a- b+ b-");
        let sites = find_move_sites(&l, &[MoveKind::R1Remove]);
        assert_eq!(
            sites,
            vec![
                MoveSite::R1Remove {
                    at: Position::new(0, 0),
                    crossing: "a".into()
                },
                MoveSite::R1Remove {
                    at: Position::new(0, 2),
                    crossing: "b".into()
                },
            ]
        );
        // wrap-around curl, and a two-letter word counted once
        let l = link("a- b+ b- a+");
        assert_eq!(find_move_sites(&l, &[MoveKind::R1Remove]).len(), 2);
        assert_eq!(
            find_move_sites(&link("a+ a-"), &[MoveKind::R1Remove]).len(),
            1
        );
    }

    #[test]
    fn r1_remove_applies() {
        let l = link("a+ a-");
        let site = find_move_sites(&l, &[MoveKind::R1Remove]).remove(0);
        let out = apply_move(&l, &site).unwrap();
        assert!(out.code().components[0].is_empty());
    }

    #[test]
    fn r2_remove_example() {
        let l = link("a+ e+ f- a- f+ e-");
        let sites = find_move_sites(&l, &[MoveKind::R2Remove]);
        assert_eq!(sites.len(), 1);
        let MoveSite::R2Remove { crossings, .. } = &sites[0] else {
            panic!()
        };
        let set: BTreeSet<&str> = crossings.iter().map(String::as_str).collect();
        assert_eq!(set, BTreeSet::from(["e", "f"]));

        let e = l.crossing("e").unwrap();
        let f = l.crossing("f").unwrap();
        assert_eq!(l.eta_between(e.plus, e.minus).unwrap(), -1);
        assert_eq!(l.eta_between(f.plus, f.minus).unwrap(), 1);

        let out = apply_move(&l, &sites[0]).unwrap();
        assert_eq!(out.code().render(), "a+ a-");
    }

    #[test]
    fn r3_example() {
        let l = link("1+ 3- 2+ 1- 3+ 2-");
        let sites = find_move_sites(&l, &[MoveKind::R3]);
        assert_eq!(sites.len(), 1);
        let MoveSite::R3 { pairs, .. } = &sites[0] else {
            panic!()
        };
        let mut starts: Vec<usize> = pairs.iter().map(|p| p.index).collect();
        starts.sort();
        assert_eq!(starts, vec![0, 2, 4]);

        let out = apply_move(&l, &sites[0]).unwrap();
        assert_eq!(out.code().render(), "3- 1+ 1- 2+ 2- 3+");
        assert!(link_polynomial(&l).unwrap().is_zero());
        assert!(link_polynomial(&out).unwrap().is_zero());

        // only the reversed triangle remains; the same site undoes the move
        assert!(find_move_sites(&out, &[MoveKind::R3]).is_empty());
        let back = apply_move(&out, &sites[0]).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn stale_sites_rejected() {
        let l = link("a+ a- b+ b-");
        let site = MoveSite::R1Remove {
            at: Position::new(0, 1),
            crossing: "a".into(),
        };
        assert!(matches!(apply_move(&l, &site), Err(Error::StaleSite(_))));
        let site = MoveSite::R1Insert {
            gap: Gap {
                component: 0,
                index: 1,
            },
            letters: [Letter::plus("a"), Letter::minus("a")],
        };
        assert!(matches!(apply_move(&l, &site), Err(Error::StaleSite(_))));
        let site = MoveSite::R3 {
            pairs: [
                Position::new(0, 0),
                Position::new(0, 1),
                Position::new(0, 2),
            ],
            crossings: ["a".into(), "b".into(), "c".into()],
        };
        assert!(matches!(apply_move(&l, &site), Err(Error::StaleSite(_))));
    }

    #[test]
    fn r1_insert_into_empty_word() {
        let l = link("A:");
        let sites = find_move_sites(&l, &[MoveKind::R1Insert]);
        assert_eq!(sites.len(), 2);
        let out = apply_move(&l, &sites[0]).unwrap();
        assert_eq!(out.code().render(), "_1+ _1-");
    }

    #[test]
    fn r1_remove_then_insert_is_identity() {
        let l = link("x+ a+ a- y- ; y+ x-");
        let remove = MoveSite::R1Remove {
            at: Position::new(0, 1),
            crossing: "a".into(),
        };
        let removed = apply_move(&l, &remove).unwrap();
        let insert = MoveSite::R1Insert {
            gap: Gap {
                component: 0,
                index: 1,
            },
            letters: [Letter::plus("a"), Letter::minus("a")],
        };
        assert_eq!(apply_move(&removed, &insert).unwrap(), l);
    }

    #[test]
    fn r2_insert_same_gap_and_two_components() {
        let l = link("a+ a- ; B:");
        let sites = find_move_sites(&l, &[MoveKind::R2Insert]);
        // three gaps, six unordered gap pairs, four variants each
        assert_eq!(sites.len(), 24);
        for site in &sites {
            let out = apply_move(&l, site).unwrap();
            assert_eq!(out.catalog().len(), 3);
            assert_eq!(link_polynomial(&out).unwrap(), link_polynomial(&l).unwrap());
        }
    }

    #[test]
    fn fresh_ids_skip_used() {
        let code = FlatLinkCode::parse("_1+ _1- _3+ _3-").unwrap();
        assert_eq!(
            fresh_ids(&code, 2),
            vec!["_2".to_string(), "_4".to_string()]
        );
    }

    #[test]
    fn log_lines_round_trip() {
        let l = link("x+ a+ e+ f- a- f+ e- y- ; y+ x-");
        let sites = find_move_sites(&l, &MoveKind::ALL);
        assert!(sites.iter().any(|s| s.kind() == MoveKind::R2Remove));
        for site in sites {
            let line = site.to_log_line(l.code());
            assert_eq!(
                MoveSite::parse_log_line(&line, l.code()).unwrap(),
                site,
                "{line}"
            );
        }
        assert!(MoveSite::parse_log_line("R9 A 0 a", l.code()).is_err());
        assert!(MoveSite::parse_log_line("R1Remove Q 0 a", l.code()).is_err());
        assert!(MoveSite::parse_log_line("R1Remove A", l.code()).is_err());
    }

    #[test]
    fn walk_is_deterministic_and_replayable() {
        let l = link("a+ b+ a- b-");
        let policy = WalkPolicy::default();
        let w0 = random_walk(&l, 0, 7, &policy).unwrap();
        assert_eq!(w0.link, l);
        assert!(w0.log.is_empty());

        let w1 = random_walk(&l, 20, 7, &policy).unwrap();
        let w2 = random_walk(&l, 20, 7, &policy).unwrap();
        assert_eq!(w1.link, w2.link);
        assert_eq!(w1.log, w2.log);
        assert!(link_polynomial(&w1.link).unwrap().is_zero());

        let lines = w1.log_lines();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        assert_eq!(replay(&l, &refs).unwrap(), w1.link);
    }

    #[test]
    fn walk_respects_crossing_cap() {
        let l = link("a+ a-");
        let policy = WalkPolicy {
            max_crossings: Some(3),
            ..WalkPolicy::default()
        };
        for seed in 0..20 {
            let w = random_walk(&l, 30, seed, &policy).unwrap();
            // an R2 insertion at two crossings can reach four
            assert!(w.link.catalog().len() <= 4);
        }
    }

    #[test]
    fn r2_remove_on_two_components() {
        let l = link("e+ f- ; f+ e-");
        let sites = find_move_sites(&l, &[MoveKind::R2Remove]);
        assert_eq!(sites.len(), 1);
        let out = apply_move(&l, &sites[0]).unwrap();
        assert!(codes_equivalent_syntactically(
            out.code(),
            &FlatLinkCode::parse("A: ; B:").unwrap(),
            false
        ));
    }
}
