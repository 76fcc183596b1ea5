//! Binary words, colors, dyadic bricks and partitions of multi-cube Cantor
//! spaces `C^S(m)`.
//!
//! A brick is stored as a cube index together with a finite map from colors to
//! nonempty binary words; a color that is absent is unconstrained. Because
//! empty words are never stored, two bricks are equal iff they are
//! structurally equal, and the derived ordering is the canonical one used to
//! sort partitions (cube, then colors in their total order, then words).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite binary word, possibly empty. Ordered lexicographically, so a
/// proper prefix sorts before its extensions.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryWord(Vec<bool>);

static EMPTY_WORD: BinaryWord = BinaryWord(Vec::new());

impl BinaryWord {
    pub fn new() -> Self {
        BinaryWord(Vec::new())
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        BinaryWord(bits.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn last(&self) -> Option<bool> {
        self.0.last().copied()
    }

    /// The word with `bit` appended.
    pub fn child(&self, bit: bool) -> Self {
        let mut bits = self.0.clone();
        bits.push(bit);
        BinaryWord(bits)
    }

    /// The word with its last bit removed (the empty word is its own parent).
    pub fn parent(&self) -> Self {
        let mut bits = self.0.clone();
        bits.pop();
        BinaryWord(bits)
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.0.starts_with(&self.0)
    }

    /// True iff one of the two words is a prefix of the other.
    pub fn is_comparable(&self, other: &BinaryWord) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn strip_prefix(&self, prefix: &BinaryWord) -> Option<BinaryWord> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| BinaryWord(rest.to_vec()))
    }

    pub fn strip_suffix(&self, suffix: &BinaryWord) -> Option<BinaryWord> {
        self.0
            .strip_suffix(suffix.0.as_slice())
            .map(|rest| BinaryWord(rest.to_vec()))
    }

    pub fn concat(&self, tail: &BinaryWord) -> BinaryWord {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&tail.0);
        BinaryWord(bits)
    }

    /// Removes trailing zeros.
    pub fn trim_zeros(&self) -> BinaryWord {
        let end = self.0.iter().rposition(|&b| b).map_or(0, |i| i + 1);
        BinaryWord(self.0[..end].to_vec())
    }

    /// The word extended with zeros up to length `len` (never truncated).
    pub fn zero_padded(&self, len: usize) -> BinaryWord {
        let mut bits = self.0.clone();
        if bits.len() < len {
            bits.resize(len, false);
        }
        BinaryWord(bits)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(
                    i,
                    format!("expected binary digit, found {ch:?}"),
                )),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinaryWord)
    }
}

/// A nonnegative dyadic rational `num / 2^exp` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u64,
    exp: u32,
}

impl Dyadic {
    pub const MAX_EXP: u32 = 63;

    /// Builds `num / 2^exp`, reducing to lowest terms.
    pub fn new(mut num: u64, mut exp: u32) -> Result<Self> {
        if num == 0 {
            return Ok(Dyadic { num: 0, exp: 0 });
        }
        while exp > 0 && num.is_multiple_of(2) {
            num /= 2;
            exp -= 1;
        }
        if exp > Self::MAX_EXP {
            return Err(Error::Overflow(format!("dyadic denominator 2^{exp}")));
        }
        Ok(Dyadic { num, exp })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// True iff the value lies strictly between 0 and 1.
    pub fn in_unit_interval(&self) -> bool {
        self.exp >= 1 && self.num > 0 && self.num < (1u64 << self.exp)
    }

    /// Binary expansion after the point (no trailing zeros); only meaningful
    /// for values in `[0, 1)`.
    pub fn to_bits(&self) -> BinaryWord {
        BinaryWord::from_bits((0..self.exp).rev().map(|i| (self.num >> i) & 1 == 1))
    }

    /// The value `0.w` for a binary word `w`.
    pub fn from_bits(word: &BinaryWord) -> Result<Self> {
        let word = word.trim_zeros();
        if word.len() > Self::MAX_EXP as usize {
            return Err(Error::Overflow(format!(
                "dyadic with {} binary digits",
                word.len()
            )));
        }
        let num = word.bits().iter().fold(0u64, |acc, &b| acc * 2 + b as u64);
        Dyadic::new(num, word.len() as u32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.num as u128) << other.exp;
        let rhs = (other.num as u128) << self.exp;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: u64 = num
            .parse()
            .map_err(|_| Error::parse(0, format!("bad dyadic numerator in {s:?}")))?;
        let den: u64 = den
            .parse()
            .map_err(|_| Error::parse(0, format!("bad dyadic denominator in {s:?}")))?;
        if den == 0 || !den.is_power_of_two() {
            return Err(Error::parse(
                0,
                format!("denominator of {s:?} is not a power of two"),
            ));
        }
        Dyadic::new(num, den.trailing_zeros())
    }
}

/// An element of a color set `S`.
///
/// The variant depends on the action: finite sets use 1-based indices, the
/// Thompson action uses dyadic rationals and Houghton actions use
/// `(ray, index)` pairs with 1-based rays and 0-based indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Index(u32),
    Dyadic(Dyadic),
    Ray(u32, u64),
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Index(i) => write!(f, "{i}"),
            Color::Dyadic(d) => write!(f, "{d}"),
            Color::Ray(r, k) => write!(f, "{r}:{k}"),
        }
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return s.parse().map(Color::Dyadic);
        }
        if let Some((r, k)) = s.split_once(':') {
            let r = r
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad ray in {s:?}")))?;
            let k = k
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad ray index in {s:?}")))?;
            return Ok(Color::Ray(r, k));
        }
        s.parse()
            .map(Color::Index)
            .map_err(|_| Error::parse(0, format!("unrecognized color {s:?}")))
    }
}

/// A dyadic brick in one cube of `C^S(m)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Brick {
    cube: usize,
    entries: BTreeMap<Color, BinaryWord>,
}

impl Brick {
    /// The whole cube `C^S_cube` (cubes are numbered from 1).
    pub fn whole(cube: usize) -> Self {
        Brick {
            cube,
            entries: BTreeMap::new(),
        }
    }

    pub fn new(cube: usize, entries: impl IntoIterator<Item = (Color, BinaryWord)>) -> Self {
        let entries = entries.into_iter().filter(|(_, w)| !w.is_empty()).collect();
        Brick { cube, entries }
    }

    /// Convenience constructor from `(color, "0101")` pairs.
    pub fn from_strs(cube: usize, entries: &[(Color, &str)]) -> Self {
        Brick::new(
            cube,
            entries
                .iter()
                .map(|(c, w)| (*c, w.parse().expect("binary literal"))),
        )
    }

    pub(crate) fn from_map(cube: usize, entries: BTreeMap<Color, BinaryWord>) -> Self {
        debug_assert!(entries.values().all(|w| !w.is_empty()));
        Brick { cube, entries }
    }

    pub fn cube(&self) -> usize {
        self.cube
    }

    pub fn with_cube(&self, cube: usize) -> Brick {
        Brick {
            cube,
            entries: self.entries.clone(),
        }
    }

    pub fn word(&self, color: &Color) -> &BinaryWord {
        self.entries.get(color).unwrap_or(&EMPTY_WORD)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Color, &BinaryWord)> {
        self.entries.iter()
    }

    pub fn colors(&self) -> impl Iterator<Item = &Color> {
        self.entries.keys()
    }

    pub fn is_whole(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn with_word(&self, color: Color, word: BinaryWord) -> Brick {
        let mut entries = self.entries.clone();
        if word.is_empty() {
            entries.remove(&color);
        } else {
            entries.insert(color, word);
        }
        Brick {
            cube: self.cube,
            entries,
        }
    }

    /// One half of this brick along `color`.
    pub fn half(&self, color: Color, bit: bool) -> Brick {
        let word = self.word(&color).child(bit);
        self.with_word(color, word)
    }

    /// The two halves of this brick along `color`.
    pub fn split(&self, color: Color) -> (Brick, Brick) {
        (self.half(color, false), self.half(color, true))
    }

    /// `B(self) ⊆ B(other)`.
    pub fn is_subset_of(&self, other: &Brick) -> bool {
        self.cube == other.cube
            && other
                .entries
                .iter()
                .all(|(c, w)| w.is_prefix_of(self.word(c)))
    }

    pub fn intersects(&self, other: &Brick) -> bool {
        self.cube == other.cube
            && self
                .entries
                .iter()
                .all(|(c, w)| w.is_comparable(other.word(c)))
    }

    /// The intersection of two bricks, if nonempty.
    pub fn intersection(&self, other: &Brick) -> Option<Brick> {
        if !self.intersects(other) {
            return None;
        }
        let mut entries = self.entries.clone();
        for (c, w) in &other.entries {
            let mine = entries.entry(*c).or_default();
            if w.len() > mine.len() {
                *mine = w.clone();
            }
        }
        Some(Brick {
            cube: self.cube,
            entries,
        })
    }

    /// Every word has length at most one.
    pub fn is_elementary(&self) -> bool {
        self.entries.values().all(|w| w.len() <= 1)
    }

    /// Total number of cut bits; a brick of depth `d` is `2^-d` of its cube.
    pub fn depth(&self) -> usize {
        self.entries.values().map(BinaryWord::len).sum()
    }
}

impl fmt::Display for Brick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[{}]{{", self.cube)?;
        for (i, (c, w)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}={w}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Brick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Brick {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (brick, rest) = parse_brick_prefix(s)?;
        if !rest.trim().is_empty() {
            return Err(Error::parse(
                s.len() - rest.len(),
                "trailing input after brick",
            ));
        }
        Ok(brick)
    }
}

/// Parses a brick at the start of `s` (after optional whitespace) and returns
/// the remaining input.
pub(crate) fn parse_brick_prefix(s: &str) -> Result<(Brick, &str)> {
    let offset = s.len() - s.trim_start().len();
    let t = s.trim_start();
    let body = t
        .strip_prefix("B[")
        .ok_or_else(|| Error::parse(offset, "expected `B[`"))?;
    let close = body
        .find(']')
        .ok_or_else(|| Error::parse(offset, "unterminated cube index"))?;
    let cube: usize = body[..close]
        .trim()
        .parse()
        .map_err(|_| Error::parse(offset + 2, "bad cube index"))?;
    if cube == 0 {
        return Err(Error::parse(offset + 2, "cube indices start at 1"));
    }
    let after = body[close + 1..]
        .strip_prefix('{')
        .ok_or_else(|| Error::parse(offset + close + 3, "expected `{`"))?;
    let end = after
        .find('}')
        .ok_or_else(|| Error::parse(offset + close + 4, "unterminated brick"))?;
    let inner = &after[..end];
    let mut entries = BTreeMap::new();
    if !inner.trim().is_empty() {
        for item in inner.split(',') {
            let (c, w) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(offset, format!("expected color=word in {item:?}")))?;
            let color: Color = c.parse()?;
            let word: BinaryWord = w.trim().parse()?;
            if word.is_empty() {
                return Err(Error::parse(offset, "empty words are not written"));
            }
            if entries.insert(color, word).is_some() {
                return Err(Error::parse(offset, format!("color {color} repeated")));
            }
        }
    }
    Ok((Brick { cube, entries }, &after[end + 1..]))
}

/// Outcome of the recursive halving procedure over a region.
enum Halving {
    Gap,
    Overlap,
}

/// Chooses the color along which a region is halved: a clean cut (every
/// brick is cut below the region at that color) if one exists, otherwise the
/// least color where some brick is cut below the region.
fn split_color(region: &Brick, bricks: &[&Brick]) -> Option<(Color, bool)> {
    let colors: BTreeSet<Color> = bricks.iter().flat_map(|b| b.colors().copied()).collect();
    let deeper = |b: &Brick, c: &Color| b.word(c).len() > region.word(c).len();
    let mut fallback = None;
    for c in colors {
        let count = bricks.iter().filter(|b| deeper(b, &c)).count();
        if count == bricks.len() {
            return Some((c, true));
        }
        if count > 0 && fallback.is_none() {
            fallback = Some((c, false));
        }
    }
    fallback
}

/// Recursively halves `region` until every piece lies inside exactly one of
/// `bricks` (all of which intersect the region). Emits `(piece, brick index)`.
fn halve(
    region: Brick,
    bricks: Vec<(usize, &Brick)>,
    out: &mut Vec<(Brick, usize)>,
) -> std::result::Result<(), Halving> {
    if bricks.is_empty() {
        return Err(Halving::Gap);
    }
    let refs: Vec<&Brick> = bricks.iter().map(|(_, b)| *b).collect();
    match split_color(&region, &refs) {
        None => {
            // Every brick contains the region.
            if bricks.len() > 1 {
                return Err(Halving::Overlap);
            }
            out.push((region, bricks[0].0));
            Ok(())
        }
        Some((color, _)) => {
            for bit in [false, true] {
                let child = region.half(color, bit);
                let sub: Vec<(usize, &Brick)> = bricks
                    .iter()
                    .filter(|(_, b)| b.intersects(&child))
                    .copied()
                    .collect();
                halve(child, sub, out)?;
            }
            Ok(())
        }
    }
}

fn is_dyadic_region(region: &Brick, bricks: &[&Brick]) -> bool {
    if bricks.len() == 1 {
        return true;
    }
    match split_color(region, bricks) {
        Some((color, true)) => [false, true].into_iter().all(|bit| {
            let child = region.half(color, bit);
            let sub: Vec<&Brick> = bricks
                .iter()
                .filter(|b| b.is_subset_of(&child))
                .copied()
                .collect();
            is_dyadic_region(&child, &sub)
        }),
        _ => false,
    }
}

/// A finite sequence of bricks in `C^S(ambient)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    ambient: usize,
    bricks: Vec<Brick>,
}

impl Partition {
    pub fn new(ambient: usize, bricks: Vec<Brick>) -> Self {
        Partition { ambient, bricks }
    }

    /// The partition of `C^S(m)` into its `m` cubes.
    pub fn trivial(ambient: usize) -> Self {
        Partition {
            ambient,
            bricks: (1..=ambient).map(Brick::whole).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }

    pub fn into_bricks(self) -> Vec<Brick> {
        self.bricks
    }

    pub fn len(&self) -> usize {
        self.bricks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bricks.is_empty()
    }

    /// The same bricks in canonical order.
    pub fn canonical(&self) -> Partition {
        let mut bricks = self.bricks.clone();
        bricks.sort();
        Partition {
            ambient: self.ambient,
            bricks,
        }
    }

    /// Equality as sets of bricks.
    pub fn same_bricks(&self, other: &Partition) -> bool {
        self.ambient == other.ambient && self.canonical().bricks == other.canonical().bricks
    }

    fn by_cube(&self) -> Option<Vec<Vec<(usize, &Brick)>>> {
        let mut cubes = vec![Vec::new(); self.ambient];
        for (i, b) in self.bricks.iter().enumerate() {
            if b.cube == 0 || b.cube > self.ambient {
                return None;
            }
            cubes[b.cube - 1].push((i, b));
        }
        Some(cubes)
    }

    /// Halving leaves per cube: each leaf lies in exactly one brick.
    fn halving(&self) -> std::result::Result<Vec<(Brick, usize)>, String> {
        let cubes = self
            .by_cube()
            .ok_or_else(|| format!("cube index outside 1..={}", self.ambient))?;
        let mut out = Vec::new();
        for (k, members) in cubes.into_iter().enumerate() {
            halve(Brick::whole(k + 1), members, &mut out).map_err(|e| match e {
                Halving::Gap => format!("cube {} is not covered", k + 1),
                Halving::Overlap => format!("bricks overlap in cube {}", k + 1),
            })?;
        }
        Ok(out)
    }

    /// Whether the bricks are pairwise disjoint and cover `C^S(ambient)`.
    pub fn is_partition(&self) -> bool {
        self.check().is_ok()
    }

    /// Like [`Partition::is_partition`] but explains the failure.
    pub fn check(&self) -> Result<()> {
        if self.ambient == 0 {
            return Err(Error::NotAPartition("ambient space is empty".into()));
        }
        // Halving detects overlaps as well as gaps: it stops only on regions
        // contained in every brick that meets them.
        self.halving().map(|_| ()).map_err(Error::NotAPartition)
    }

    /// Whether the partition is reachable from the trivial one by very
    /// elementary expansions.
    pub fn is_dyadic(&self) -> Result<bool> {
        self.check()?;
        Ok(self.is_dyadic_unchecked())
    }

    pub(crate) fn is_dyadic_unchecked(&self) -> bool {
        let Some(cubes) = self.by_cube() else {
            return false;
        };
        cubes.into_iter().enumerate().all(|(k, members)| {
            let refs: Vec<&Brick> = members.iter().map(|(_, b)| *b).collect();
            is_dyadic_region(&Brick::whole(k + 1), &refs)
        })
    }

    /// A dyadic partition refining `self` in which every brick lies in
    /// exactly one brick of `self`. Dyadic inputs come back unchanged up to
    /// order.
    pub fn refine_to_dyadic(&self) -> Result<Partition> {
        Ok(Partition {
            ambient: self.ambient,
            bricks: self.refinement_map()?.into_iter().map(|(b, _)| b).collect(),
        })
    }

    /// The halving refinement together with the index of the brick of `self`
    /// containing each refined brick.
    pub fn refinement_map(&self) -> Result<Vec<(Brick, usize)>> {
        self.check()?;
        self.halving().map_err(Error::NotAPartition)
    }

    /// All nonempty intersections of bricks of `self` with bricks of `other`.
    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let mut bricks: Vec<Brick> = self
            .bricks
            .iter()
            .flat_map(|a| other.bricks.iter().filter_map(move |b| a.intersection(b)))
            .collect();
        bricks.sort();
        Ok(Partition {
            ambient: self.ambient,
            bricks,
        })
    }

    /// Every brick of `self` lies inside some brick of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.ambient == coarser.ambient
            && self
                .bricks
                .iter()
                .all(|b| coarser.bricks.iter().any(|c| b.is_subset_of(c)))
    }

    /// Greedy reverse search: repeatedly merges two bricks that differ only in
    /// the last bit of one color, choosing among the available merges with
    /// `pick(count)`. Returns the brick set at which no merge applies.
    ///
    /// The end result depends on the merge order once three or more colors
    /// are involved, so this is not a dyadicity test; see
    /// [`Partition::is_dyadic`].
    pub fn merge_reduce(&self, mut pick: impl FnMut(usize) -> usize) -> Partition {
        let mut bricks: Vec<Brick> = self.canonical().bricks;
        loop {
            let index: HashMap<&Brick, usize> =
                bricks.iter().enumerate().map(|(i, b)| (b, i)).collect();
            let mut merges = Vec::new();
            for (i, b) in bricks.iter().enumerate() {
                for (c, w) in b.entries() {
                    if w.last() == Some(false) {
                        let sib = b.with_word(*c, w.parent().child(true));
                        if let Some(&j) = index.get(&sib) {
                            merges.push((i, j, b.with_word(*c, w.parent())));
                        }
                    }
                }
            }
            if merges.is_empty() {
                break;
            }
            let (i, j, merged) = merges.swap_remove(pick(merges.len()) % merges.len());
            let mut next: Vec<Brick> = bricks
                .into_iter()
                .enumerate()
                .filter(|(k, _)| *k != i && *k != j)
                .map(|(_, b)| b)
                .collect();
            next.push(merged);
            next.sort();
            bricks = next;
        }
        Partition {
            ambient: self.ambient,
            bricks,
        }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition[{}]{:?}", self.ambient, self.bricks)
    }
}

/// A point of `C^S(m)` that is eventually zero in every coordinate: the
/// stored words followed by `0^∞`, and `0^∞` on colors not stored.
///
/// Germinal data is locally constant, so these points are enough to probe
/// any element; a shallow prefix is implicitly deepened with zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointPrefix {
    cube: usize,
    assignment: BTreeMap<Color, BinaryWord>,
}

impl PointPrefix {
    pub fn new(cube: usize, assignment: impl IntoIterator<Item = (Color, BinaryWord)>) -> Self {
        let assignment = assignment
            .into_iter()
            .map(|(c, w)| (c, w.trim_zeros()))
            .filter(|(_, w)| !w.is_empty())
            .collect();
        PointPrefix { cube, assignment }
    }

    /// The all-zeros point of a cube.
    pub fn zeros(cube: usize) -> Self {
        PointPrefix {
            cube,
            assignment: BTreeMap::new(),
        }
    }

    pub fn cube(&self) -> usize {
        self.cube
    }

    pub fn assignment(&self) -> impl Iterator<Item = (&Color, &BinaryWord)> {
        self.assignment.iter()
    }

    /// The first `len` bits of the coordinate at `color`.
    pub fn coordinate(&self, color: &Color, len: usize) -> BinaryWord {
        let w = self.assignment.get(color).unwrap_or(&EMPTY_WORD);
        let mut bits: Vec<bool> = w.bits().iter().take(len).copied().collect();
        bits.resize(len, false);
        BinaryWord(bits)
    }

    pub fn lies_in(&self, brick: &Brick) -> bool {
        self.cube == brick.cube
            && brick
                .entries
                .iter()
                .all(|(c, w)| self.coordinate(c, w.len()) == *w)
    }

    /// The full stored word at `color` (without the implicit zero tail).
    pub fn word(&self, color: &Color) -> &BinaryWord {
        self.assignment.get(color).unwrap_or(&EMPTY_WORD)
    }

    /// The tail of the coordinate at `color` after its first `skip` bits.
    pub(crate) fn tail(&self, color: &Color, skip: usize) -> BinaryWord {
        let w = self.word(color);
        BinaryWord(w.bits().iter().skip(skip).copied().collect())
    }

    pub(crate) fn colors(&self) -> impl Iterator<Item = &Color> {
        self.assignment.keys()
    }
}

impl fmt::Display for PointPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{}]{{", self.cube)?;
        for (i, (c, w)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}={w}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PointPrefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // Same syntax as a brick, with a `P` tag.
        let t = s.trim();
        let body = t
            .strip_prefix('P')
            .ok_or_else(|| Error::parse(0, "expected `P[`"))?;
        let brick: Brick = format!("B{body}").parse()?;
        Ok(PointPrefix::new(brick.cube, brick.entries))
    }
}
