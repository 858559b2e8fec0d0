//! Gauss codes of flat virtual links.
//!
//! A link is an ordered list of codewords, one per component. Each codeword
//! is a cyclic sequence of signed crossing letters; every crossing appears
//! exactly twice in the whole code, once as `x+` and once as `x-`.
//!
//! The text format is line and `;` separated:
//!
//! ```text
//! # a two component link
//! A: x+ a+ y- a- ; B: y+ x-
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Neg;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One end of a crossing chord: `x+` or `x-`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub crossing: String,
    pub sign: Sign,
}

impl Letter {
    pub fn new(crossing: impl Into<String>, sign: Sign) -> Self {
        Letter {
            crossing: crossing.into(),
            sign,
        }
    }

    pub fn plus(crossing: impl Into<String>) -> Self {
        Letter::new(crossing, Sign::Plus)
    }

    pub fn minus(crossing: impl Into<String>) -> Self {
        Letter::new(crossing, Sign::Minus)
    }

    /// Parses a single `<identifier><sign>` token.
    pub fn parse(token: &str) -> Result<Letter> {
        let malformed = || Error::MalformedToken(token.to_string());
        let last = token.chars().last().ok_or_else(malformed)?;
        let sign = Sign::from_symbol(last).ok_or_else(malformed)?;
        let ident = &token[..token.len() - 1];
        if !is_identifier(ident) {
            return Err(malformed());
        }
        Ok(Letter::new(ident, sign))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.crossing, self.sign.symbol())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Name given to the component at `index` when the text does not name it:
/// `A`..`Z`, then `AA`, `AB`, ...
pub fn default_component_name(index: usize) -> String {
    let mut n = index + 1;
    let mut out = Vec::new();
    while n > 0 {
        n -= 1;
        out.push(b'A' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// A named cyclic sequence of letters. Index 0 is a representation artifact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    pub name: String,
    pub letters: Vec<Letter>,
}

impl Codeword {
    pub fn new(name: impl Into<String>, letters: Vec<Letter>) -> Self {
        Codeword {
            name: name.into(),
            letters,
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn total_sign(&self) -> i64 {
        self.letters.iter().map(|l| l.sign.value()).sum()
    }

    /// Signed count of the letters strictly between `from` and `to`, walking
    /// forward cyclically.
    pub fn eta(&self, from: usize, to: usize) -> Result<i64> {
        let len = self.letters.len();
        for position in [from, to] {
            if position >= len {
                return Err(Error::PositionOutOfRange { position, len });
            }
        }
        if from == to {
            return Err(Error::SamePosition(from));
        }
        let mut sum = 0;
        let mut i = (from + 1) % len;
        while i != to {
            sum += self.letters[i].sign.value();
            i = (i + 1) % len;
        }
        Ok(sum)
    }

    /// True when the letter sequences agree up to cyclic rotation.
    pub fn is_rotation_of(&self, other: &Codeword) -> bool {
        let n = self.letters.len();
        if n != other.letters.len() {
            return false;
        }
        if n == 0 {
            return true;
        }
        let doubled: Vec<&Letter> = other.letters.iter().chain(other.letters.iter()).collect();
        doubled
            .windows(n)
            .any(|w| w.iter().zip(&self.letters).all(|(a, b)| *a == b))
    }

    pub fn rotated(&self, shift: usize) -> Codeword {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = shift % letters.len();
            letters.rotate_left(k);
        }
        Codeword::new(self.name.clone(), letters)
    }
}

/// A flat virtual link given by its Gauss code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FlatLinkCode {
    pub components: Vec<Codeword>,
}

impl FlatLinkCode {
    pub fn new(components: Vec<Codeword>) -> Self {
        FlatLinkCode { components }
    }

    /// Builds a code from letter lists, naming components `A`, `B`, ...
    pub fn from_words<S: AsRef<str>>(words: &[&[S]]) -> Result<Self> {
        let components = words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let letters = w
                    .iter()
                    .map(|t| Letter::parse(t.as_ref()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Codeword::new(default_component_name(i), letters))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FlatLinkCode { components })
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.components.iter().map(Codeword::len).sum::<usize>() / 2
    }

    pub fn component(&self, index: usize) -> Result<&Codeword> {
        self.components
            .get(index)
            .ok_or(Error::ComponentOutOfRange(index))
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    pub fn total_sign(&self, component: usize) -> Result<i64> {
        Ok(self.component(component)?.total_sign())
    }

    pub fn eta(&self, component: usize, from: usize, to: usize) -> Result<i64> {
        self.component(component)?.eta(from, to)
    }

    pub fn letter(&self, at: Position) -> Option<&Letter> {
        self.components.get(at.component)?.letters.get(at.index)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_flat_link(text)
    }

    pub fn render(&self) -> String {
        render_flat_link(self)
    }
}

impl fmt::Display for FlatLinkCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_flat_link(self))
    }
}

/// Parses the text format. Pairing of crossings is not checked here.
pub fn parse_flat_link(text: &str) -> Result<FlatLinkCode> {
    let mut components: Vec<Codeword> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        for segment in line.split(';') {
            let word = parse_codeword(segment, components.len())?;
            if components.iter().any(|c| c.name == word.name) {
                return Err(Error::DuplicateComponentName(word.name));
            }
            components.push(word);
        }
    }
    Ok(FlatLinkCode { components })
}

fn parse_codeword(segment: &str, index: usize) -> Result<Codeword> {
    let (name, body) = match segment.split_once(':') {
        Some((name, body)) => {
            let name = name.trim();
            if !is_identifier(name) {
                return Err(Error::MalformedName(name.to_string()));
            }
            (name.to_string(), body)
        }
        None => (default_component_name(index), segment),
    };
    let letters = body
        .split_whitespace()
        .map(Letter::parse)
        .collect::<Result<Vec<_>>>()?;
    Ok(Codeword { name, letters })
}

/// Renders the text format. Names are written only when they differ from
/// the default or the codeword is empty.
pub fn render_flat_link(code: &FlatLinkCode) -> String {
    code.components
        .iter()
        .enumerate()
        .map(|(i, word)| {
            let letters = word
                .letters
                .iter()
                .map(Letter::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            if word.is_empty() {
                format!("{}:", word.name)
            } else if word.name != default_component_name(i) {
                format!("{}: {}", word.name, letters)
            } else {
                letters
            }
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}

/// A letter location: component index and position within its codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub component: usize,
    pub index: usize,
}

impl Position {
    pub fn new(component: usize, index: usize) -> Self {
        Position { component, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    SelfCrossing(usize),
    PairCrossing { plus: Position, minus: Position },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingInfo {
    pub id: String,
    pub plus: Position,
    pub minus: Position,
}

impl CrossingInfo {
    pub fn kind(&self) -> CrossingKind {
        if self.plus.component == self.minus.component {
            CrossingKind::SelfCrossing(self.plus.component)
        } else {
            CrossingKind::PairCrossing {
                plus: self.plus,
                minus: self.minus,
            }
        }
    }

    pub fn is_self(&self) -> bool {
        self.plus.component == self.minus.component
    }

    pub fn end(&self, sign: Sign) -> Position {
        match sign {
            Sign::Plus => self.plus,
            Sign::Minus => self.minus,
        }
    }
}

/// Classification of every crossing of a valid code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingCatalog {
    crossings: Vec<CrossingInfo>,
    by_id: HashMap<String, usize>,
    self_crossings: Vec<Vec<usize>>,
    pair_crossings: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CrossingCatalog {
    /// Crossings in order of first appearance in the code.
    pub fn crossings(&self) -> &[CrossingInfo] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&CrossingInfo> {
        self.index_of(id).map(|i| &self.crossings[i])
    }

    pub fn info(&self, index: usize) -> &CrossingInfo {
        &self.crossings[index]
    }

    /// Indices of the self-crossings of `component`.
    pub fn self_crossings(&self, component: usize) -> &[usize] {
        self.self_crossings
            .get(component)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Indices of the crossings between two distinct components, in either
    /// argument order.
    pub fn pair_crossings(&self, a: usize, b: usize) -> &[usize] {
        let key = (a.min(b), a.max(b));
        self.pair_crossings
            .get(&key)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Checks that every crossing appears exactly twice with opposite signs and
/// that component names are distinct.
pub fn validate(code: &FlatLinkCode) -> Result<CrossingCatalog> {
    for (i, word) in code.components.iter().enumerate() {
        if code.components[..i].iter().any(|c| c.name == word.name) {
            return Err(Error::DuplicateComponentName(word.name.clone()));
        }
    }

    let mut order: Vec<&str> = Vec::new();
    let mut seen: HashMap<&str, Vec<(Position, Sign)>> = HashMap::new();
    for (c, word) in code.components.iter().enumerate() {
        for (i, letter) in word.letters.iter().enumerate() {
            let entry = seen.entry(letter.crossing.as_str()).or_insert_with(|| {
                order.push(letter.crossing.as_str());
                Vec::new()
            });
            entry.push((Position::new(c, i), letter.sign));
        }
    }

    let mut crossings = Vec::with_capacity(order.len());
    for id in &order {
        let occurrences = &seen[id];
        match occurrences.len() {
            1 => return Err(Error::CrossingAppearsOnce(id.to_string())),
            2 => {}
            _ => return Err(Error::CrossingAppearsThrice(id.to_string())),
        }
        let (p0, s0) = occurrences[0];
        let (p1, s1) = occurrences[1];
        if s0 == s1 {
            return Err(Error::SameSignTwice(id.to_string()));
        }
        let (plus, minus) = if s0 == Sign::Plus { (p0, p1) } else { (p1, p0) };
        crossings.push(CrossingInfo {
            id: id.to_string(),
            plus,
            minus,
        });
    }

    let mut by_id = HashMap::with_capacity(crossings.len());
    let mut self_crossings = vec![Vec::new(); code.components.len()];
    let mut pair_crossings: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, info) in crossings.iter().enumerate() {
        by_id.insert(info.id.clone(), k);
        match info.kind() {
            CrossingKind::SelfCrossing(c) => self_crossings[c].push(k),
            CrossingKind::PairCrossing { plus, minus } => {
                let key = (
                    plus.component.min(minus.component),
                    plus.component.max(minus.component),
                );
                pair_crossings.entry(key).or_default().push(k);
            }
        }
    }

    Ok(CrossingCatalog {
        crossings,
        by_id,
        self_crossings,
        pair_crossings,
    })
}

/// A code together with its catalog. Constructing one validates the code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    code: FlatLinkCode,
    catalog: CrossingCatalog,
}

impl Link {
    pub fn new(code: FlatLinkCode) -> Result<Self> {
        let catalog = validate(&code)?;
        Ok(Link { code, catalog })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Link::new(parse_flat_link(text)?)
    }

    pub fn code(&self) -> &FlatLinkCode {
        &self.code
    }

    pub fn into_code(self) -> FlatLinkCode {
        self.code
    }

    pub fn catalog(&self) -> &CrossingCatalog {
        &self.catalog
    }

    pub fn component_count(&self) -> usize {
        self.code.components.len()
    }

    pub fn component_name(&self, index: usize) -> &str {
        &self.code.components[index].name
    }

    pub fn check_component(&self, index: usize) -> Result<()> {
        if index < self.component_count() {
            Ok(())
        } else {
            Err(Error::ComponentOutOfRange(index))
        }
    }

    pub fn crossing(&self, id: &str) -> Result<&CrossingInfo> {
        self.catalog
            .get(id)
            .ok_or_else(|| Error::UnknownCrossing(id.to_string()))
    }

    /// η between two letter positions on the same component.
    pub fn eta_between(&self, from: Position, to: Position) -> Result<i64> {
        if from.component != to.component {
            return Err(Error::InvalidPartition(format!(
                "positions {from:?} and {to:?} lie on different components"
            )));
        }
        self.code.eta(from.component, from.index, to.index)
    }

    /// η from the `+` end of `x` to the `-` end of `y`.
    pub fn eta_plus_minus(&self, x: &str, y: &str) -> Result<i64> {
        let from = self.crossing(x)?.plus;
        let to = self.crossing(y)?.minus;
        self.eta_between(from, to)
    }
}

/// Equality up to rotation of every codeword and, when `allow_relabel` is
/// set, bijective renaming of crossings and components.
pub fn codes_equivalent_syntactically(
    c1: &FlatLinkCode,
    c2: &FlatLinkCode,
    allow_relabel: bool,
) -> bool {
    if c1.components.len() != c2.components.len() {
        return false;
    }
    if !allow_relabel {
        return c1
            .components
            .iter()
            .zip(&c2.components)
            .all(|(a, b)| a.name == b.name && a.is_rotation_of(b));
    }
    let mut used = vec![false; c2.components.len()];
    let mut forward = HashMap::new();
    let mut backward = HashMap::new();
    match_components(c1, c2, 0, &mut used, &mut forward, &mut backward)
}

fn match_components<'a>(
    c1: &'a FlatLinkCode,
    c2: &'a FlatLinkCode,
    next: usize,
    used: &mut [bool],
    forward: &mut HashMap<&'a str, &'a str>,
    backward: &mut HashMap<&'a str, &'a str>,
) -> bool {
    let Some(word) = c1.components.get(next) else {
        return true;
    };
    for j in 0..c2.components.len() {
        let target = &c2.components[j];
        if used[j] || target.len() != word.len() {
            continue;
        }
        used[j] = true;
        let rotations = target.len().max(1);
        for r in 0..rotations {
            let mut fwd = forward.clone();
            let mut bwd = backward.clone();
            if extend_relabel(word, target, r, &mut fwd, &mut bwd)
                && match_components(c1, c2, next + 1, used, &mut fwd, &mut bwd)
            {
                return true;
            }
        }
        used[j] = false;
    }
    false
}

fn extend_relabel<'a>(
    word: &'a Codeword,
    target: &'a Codeword,
    shift: usize,
    forward: &mut HashMap<&'a str, &'a str>,
    backward: &mut HashMap<&'a str, &'a str>,
) -> bool {
    let n = word.len();
    for i in 0..n {
        let a = &word.letters[i];
        let b = &target.letters[(i + shift) % n];
        if a.sign != b.sign {
            return false;
        }
        match (
            forward.get(a.crossing.as_str()),
            backward.get(b.crossing.as_str()),
        ) {
            (None, None) => {
                forward.insert(&a.crossing, &b.crossing);
                backward.insert(&b.crossing, &a.crossing);
            }
            (Some(&fa), Some(&bb)) if fa == b.crossing && bb == a.crossing => {}
            _ => return false,
        }
    }
    true
}
