//! Elements of the twisted groupoid: homeomorphisms `C^S(m') → C^S(m)` given
//! by paired dyadic partitions with a group label per pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::action::GroupAction;
use crate::cantor::{parse_brick_prefix, BinaryWord, Brick, Color, Partition, PointPrefix};
use crate::error::{Error, Result};

mod forest;
mod spectrum;

pub use forest::{Forest, TwistedPermutation};

/// One brick pair: `domain` is carried onto `range` by the twist homeomorphism
/// of `twist`, i.e. strip the domain prefixes, move the coordinate at color
/// `t` to color `twist·t`, then prepend the range prefixes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece<G> {
    pub domain: Brick,
    pub range: Brick,
    pub twist: G,
}

/// Moves the words of `b` (relative to `from`) along `g` and prepends `to`.
fn transport<A: GroupAction>(
    action: &A,
    g: &A::Elem,
    from: &Brick,
    to: &Brick,
    b: &Brick,
) -> Result<Brick> {
    let identity = action.is_identity(g);
    let mut words: BTreeMap<Color, BinaryWord> =
        to.entries().map(|(c, w)| (*c, w.clone())).collect();
    for (t, w) in b.entries() {
        let rest = w
            .strip_prefix(from.word(t))
            .expect("transported brick lies inside the source brick");
        if rest.is_empty() {
            continue;
        }
        let s = if identity { *t } else { action.apply(g, t)? };
        let slot = words.entry(s).or_default();
        *slot = slot.concat(&rest);
    }
    Ok(Brick::from_map(to.cube(), words))
}

impl<G: Clone> Piece<G> {
    /// Image of a sub-brick of the domain.
    pub fn push<A: GroupAction<Elem = G>>(&self, action: &A, b: &Brick) -> Result<Brick> {
        transport(action, &self.twist, &self.domain, &self.range, b)
    }

    /// Preimage of a sub-brick of the range; `inverse` is the inverted twist.
    pub fn pull<A: GroupAction<Elem = G>>(
        &self,
        action: &A,
        inverse: &G,
        b: &Brick,
    ) -> Result<Brick> {
        transport(action, inverse, &self.range, &self.domain, b)
    }

    /// Image of a point of the domain.
    pub fn image<A: GroupAction<Elem = G>>(
        &self,
        action: &A,
        p: &PointPrefix,
    ) -> Result<PointPrefix> {
        let identity = action.is_identity(&self.twist);
        let mut words: BTreeMap<Color, BinaryWord> =
            self.range.entries().map(|(c, w)| (*c, w.clone())).collect();
        let colors: BTreeSet<Color> = p.colors().chain(self.domain.colors()).copied().collect();
        for t in colors {
            let rest = p.tail(&t, self.domain.word(&t).len());
            if rest.is_empty() {
                continue;
            }
            let s = if identity {
                t
            } else {
                action.apply(&self.twist, &t)?
            };
            let slot = words.entry(s).or_default();
            *slot = slot.concat(&rest);
        }
        Ok(PointPrefix::new(self.range.cube(), words))
    }
}

/// A homeomorphism `C^S(corank) → C^S(rank)` in the twisted groupoid.
///
/// Both partitions are kept dyadic and pieces are sorted by domain brick.
/// Equality is equality of the denoted maps.
#[derive(Clone)]
pub struct Element<A: GroupAction> {
    action: A,
    corank: usize,
    rank: usize,
    pieces: Vec<Piece<A::Elem>>,
}

impl<A: GroupAction> Element<A> {
    /// Validates the pieces and refines both partitions to dyadic ones.
    pub fn new(action: A, corank: usize, rank: usize, pieces: Vec<Piece<A::Elem>>) -> Result<Self> {
        for p in &pieces {
            for c in p.domain.colors().chain(p.range.colors()) {
                action.check_color(c)?;
            }
        }
        let domain = Partition::new(corank, pieces.iter().map(|p| p.domain.clone()).collect());
        let range = Partition::new(rank, pieces.iter().map(|p| p.range.clone()).collect());
        domain.check()?;
        range.check()?;
        let mut refined = Vec::with_capacity(pieces.len());
        for (sub, i) in domain.refinement_map()? {
            let p = &pieces[i];
            let image = p.push(&action, &sub)?;
            refined.push(Piece {
                domain: sub,
                range: image,
                twist: p.twist.clone(),
            });
        }
        let range = Partition::new(rank, refined.iter().map(|p| p.range.clone()).collect());
        let inverses: Vec<A::Elem> = refined.iter().map(|p| action.invert(&p.twist)).collect();
        let mut out = Vec::with_capacity(refined.len());
        for (sub, j) in range.refinement_map()? {
            let p = &refined[j];
            out.push(Piece {
                domain: p.pull(&action, &inverses[j], &sub)?,
                range: sub,
                twist: p.twist.clone(),
            });
        }
        Ok(Self::assemble(action, corank, rank, out))
    }

    fn assemble(action: A, corank: usize, rank: usize, mut pieces: Vec<Piece<A::Elem>>) -> Self {
        pieces.sort_by(|a, b| a.domain.cmp(&b.domain));
        let e = Element {
            action,
            corank,
            rank,
            pieces,
        };
        debug_assert!(e.domain_partition().is_dyadic_unchecked());
        debug_assert!(e.range_partition().is_dyadic_unchecked());
        e
    }

    pub fn identity(action: A, m: usize) -> Self {
        let e = action.identity();
        let pieces = (1..=m)
            .map(|k| Piece {
                domain: Brick::whole(k),
                range: Brick::whole(k),
                twist: e.clone(),
            })
            .collect();
        Element {
            action,
            corank: m,
            rank: m,
            pieces,
        }
    }

    /// The simple split `x_s`: the half `s = 0` onto cube 1 and `s = 1` onto
    /// cube 2.
    pub fn simple_split(action: A, s: Color) -> Result<Self> {
        action.check_color(&s)?;
        let e = action.identity();
        let (lo, hi) = Brick::whole(1).split(s);
        let pieces = vec![
            Piece {
                domain: lo,
                range: Brick::whole(1),
                twist: e.clone(),
            },
            Piece {
                domain: hi,
                range: Brick::whole(2),
                twist: e,
            },
        ];
        Ok(Element {
            action,
            corank: 1,
            rank: 2,
            pieces,
        })
    }

    /// `τ_γ` on a single cube.
    pub fn twist(action: A, g: A::Elem) -> Self {
        Element {
            action,
            corank: 1,
            rank: 1,
            pieces: vec![Piece {
                domain: Brick::whole(1),
                range: Brick::whole(1),
                twist: g,
            }],
        }
    }

    /// The permutation homeomorphism `p_σ` sending cube `i` to cube `σ(i)`;
    /// `images[i-1] = σ(i)` with 1-based values.
    pub fn permutation(action: A, images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &j in images {
            if j == 0 || j > n || std::mem::replace(&mut seen[j - 1], true) {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        let e = action.identity();
        let pieces = images
            .iter()
            .enumerate()
            .map(|(i, &j)| Piece {
                domain: Brick::whole(i + 1),
                range: Brick::whole(j),
                twist: e.clone(),
            })
            .collect();
        Ok(Self::assemble(action, n, n, pieces))
    }

    pub fn action(&self) -> &A {
        &self.action
    }

    pub fn corank(&self) -> usize {
        self.corank
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pieces(&self) -> &[Piece<A::Elem>] {
        &self.pieces
    }

    pub fn domain_partition(&self) -> Partition {
        Partition::new(
            self.corank,
            self.pieces.iter().map(|p| p.domain.clone()).collect(),
        )
    }

    pub fn range_partition(&self) -> Partition {
        Partition::new(
            self.rank,
            self.pieces.iter().map(|p| p.range.clone()).collect(),
        )
    }

    /// Whether every twist label is the identity.
    pub fn is_untwisted(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| self.action.is_identity(&p.twist))
    }

    fn same_action(&self, other: &Self) -> Result<()> {
        if self.action == other.action {
            Ok(())
        } else {
            Err(Error::ActionMismatch)
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        self.same_action(first)?;
        if first.rank != self.corank {
            return Err(Error::RankMismatch {
                corank: self.corank,
                rank: first.rank,
            });
        }
        let action = &self.action;
        let mut by_cube: Vec<Vec<&Piece<A::Elem>>> = vec![Vec::new(); self.corank];
        for p in &self.pieces {
            by_cube[p.domain.cube() - 1].push(p);
        }
        let mut out = Vec::new();
        for p1 in &first.pieces {
            let inverse = action.invert(&p1.twist);
            for p2 in &by_cube[p1.range.cube() - 1] {
                if let Some(mid) = p1.range.intersection(&p2.domain) {
                    out.push(Piece {
                        domain: p1.pull(action, &inverse, &mid)?,
                        range: p2.push(action, &mid)?,
                        twist: action.multiply(&p2.twist, &p1.twist),
                    });
                }
            }
        }
        Ok(Self::assemble(action.clone(), first.corank, self.rank, out))
    }

    pub fn inverse(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                domain: p.range.clone(),
                range: p.domain.clone(),
                twist: self.action.invert(&p.twist),
            })
            .collect();
        Self::assemble(self.action.clone(), self.rank, self.corank, pieces)
    }

    /// The block map `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_action(other)?;
        let shifted = other.pieces.iter().map(|p| Piece {
            domain: p.domain.with_cube(p.domain.cube() + self.corank),
            range: p.range.with_cube(p.range.cube() + self.rank),
            twist: p.twist.clone(),
        });
        let pieces = self.pieces.iter().cloned().chain(shifted).collect();
        Ok(Self::assemble(
            self.action.clone(),
            self.corank + other.corank,
            self.rank + other.rank,
            pieces,
        ))
    }

    /// Direct sum of a nonempty sequence.
    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut iter = parts.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Precondition("empty direct sum".into()))?
            .clone();
        iter.try_fold(first, |acc, h| acc.direct_sum(h))
    }

    /// Whether both elements denote the same homeomorphism.
    pub fn equals(&self, other: &Self) -> bool {
        if self.action != other.action || self.corank != other.corank || self.rank != other.rank {
            return false;
        }
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(sub) = a.domain.intersection(&b.domain) {
                    if a.twist != b.twist {
                        return false;
                    }
                    match (a.push(&self.action, &sub), b.push(&self.action, &sub)) {
                        (Ok(x), Ok(y)) if x == y => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }

    fn piece_at(&self, p: &PointPrefix) -> Result<&Piece<A::Elem>> {
        self.pieces
            .iter()
            .find(|piece| p.lies_in(&piece.domain))
            .ok_or_else(|| {
                Error::Precondition(format!("point {p} is outside C^S({})", self.corank))
            })
    }

    /// The germinal twist at a point; shallow points are read with a zero tail.
    pub fn germinal_twist(&self, p: &PointPrefix) -> Result<A::Elem> {
        Ok(self.piece_at(p)?.twist.clone())
    }

    pub fn apply_point(&self, p: &PointPrefix) -> Result<PointPrefix> {
        self.piece_at(p)?.image(&self.action, p)
    }

    /// The distinct twist labels of the pieces.
    pub fn germinal_twist_set(&self) -> BTreeSet<A::Elem> {
        self.pieces.iter().map(|p| p.twist.clone()).collect()
    }

    /// The same map with sibling pieces merged as long as both partitions
    /// stay dyadic.
    pub fn reduced(&self) -> Self {
        let action = &self.action;
        let mut pieces = self.pieces.clone();
        loop {
            let mut found = None;
            'search: {
                let index: std::collections::HashMap<Brick, usize> = pieces
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.domain.clone(), i))
                    .collect();
                for (i, p) in pieces.iter().enumerate() {
                    for (c, w) in p.domain.entries() {
                        if w.last() != Some(false) {
                            continue;
                        }
                        let sibling = p.domain.with_word(*c, w.parent().child(true));
                        let Some(&j) = index.get(&sibling) else {
                            continue;
                        };
                        let q = &pieces[j];
                        if q.twist != p.twist {
                            continue;
                        }
                        let Ok(s) = action.apply(&p.twist, c) else {
                            continue;
                        };
                        let v = p.range.word(&s);
                        if v.last() != Some(false)
                            || q.range != p.range.with_word(s, v.parent().child(true))
                        {
                            continue;
                        }
                        let merged = Piece {
                            domain: p.domain.with_word(*c, w.parent()),
                            range: p.range.with_word(s, v.parent()),
                            twist: p.twist.clone(),
                        };
                        let mut next: Vec<Piece<A::Elem>> = pieces
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != i && *k != j)
                            .map(|(_, x)| x.clone())
                            .collect();
                        next.push(merged);
                        let dom = Partition::new(
                            self.corank,
                            next.iter().map(|x| x.domain.clone()).collect(),
                        );
                        let ran = Partition::new(
                            self.rank,
                            next.iter().map(|x| x.range.clone()).collect(),
                        );
                        if dom.is_dyadic_unchecked() && ran.is_dyadic_unchecked() {
                            found = Some(next);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(next) => pieces = next,
                None => break,
            }
        }
        Self::assemble(action.clone(), self.corank, self.rank, pieces)
    }

    /// Parses the `EL{rank;corank; (dom -> ran : g), ...}` form.
    pub fn parse(action: A, text: &str) -> Result<Self> {
        let t = text.trim();
        let body = t
            .strip_prefix("EL{")
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::parse(0, "expected `EL{rank;corank; ...}`"))?;
        let mut fields = body.splitn(3, ';');
        let mut number = |what: &str| -> Result<usize> {
            fields
                .next()
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| Error::parse(3, format!("bad {what}")))
        };
        let rank = number("rank")?;
        let corank = number("corank")?;
        let rest = fields
            .next()
            .ok_or_else(|| Error::parse(3, "missing pieces"))?;
        let offset = t.len() - 1 - rest.len();
        let mut pieces = Vec::new();
        for (start, item) in split_top_level(rest) {
            let pos = offset + start;
            let item = item.trim();
            let inner = item
                .strip_prefix('(')
                .and_then(|i| i.strip_suffix(')'))
                .ok_or_else(|| Error::parse(pos, "expected `(dom -> ran : g)`"))?;
            let (domain, after) = parse_brick_prefix(inner)?;
            let after = after
                .trim_start()
                .strip_prefix("->")
                .ok_or_else(|| Error::parse(pos, "expected `->`"))?;
            let (range, after) = parse_brick_prefix(after)?;
            let g = after
                .trim_start()
                .strip_prefix(':')
                .ok_or_else(|| Error::parse(pos, "expected `:` before the twist"))?;
            pieces.push(Piece {
                domain,
                range,
                twist: action.parse_elem(g.trim())?,
            });
        }
        Element::new(action, corank, rank, pieces)
    }
}

/// Splits on commas that are not nested in brackets; yields byte offsets.
pub(crate) fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() {
        out.push((start, &text[start..]));
    }
    out
}

impl<A: GroupAction> PartialEq for Element<A> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<A: GroupAction> Eq for Element<A> {}

impl<A: GroupAction> fmt::Display for Element<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EL{{{};{}; ", self.rank, self.corank)?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(
                f,
                "({} -> {} : {})",
                p.domain,
                p.range,
                self.action.format_elem(&p.twist)
            )?;
        }
        f.write_str("}")
    }
}

impl<A: GroupAction> fmt::Debug for Element<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
