use std::collections::BTreeSet;

use super::{Element, Piece};
use crate::action::GroupAction;
use crate::cantor::{BinaryWord, Color};
use crate::error::{Error, Result};

/// Leaves of the binary trie spanned by `words`: the words `u` such that each
/// given word is either a prefix of `u` or incomparable with it.
fn trie_leaves(words: &[&BinaryWord], prefix: BinaryWord, out: &mut Vec<BinaryWord>) {
    if words
        .iter()
        .any(|w| w.len() > prefix.len() && prefix.is_prefix_of(w))
    {
        trie_leaves(words, prefix.child(false), out);
        trie_leaves(words, prefix.child(true), out);
    } else {
        out.push(prefix);
    }
}

impl<A: GroupAction> Element<A> {
    /// The colors this untwisted element uses essentially: `c` is dropped iff
    /// every piece leaves the `c` coordinate unchanged and the action on the
    /// other coordinates does not depend on it.
    pub fn spectrum(&self) -> Result<BTreeSet<Color>> {
        if !self.is_untwisted() {
            return Err(Error::TwistedInput);
        }
        let colors: BTreeSet<Color> = self
            .pieces
            .iter()
            .flat_map(|p| p.domain.colors().chain(p.range.colors()))
            .copied()
            .collect();
        Ok(colors.into_iter().filter(|c| self.uses_color(c)).collect())
    }

    fn uses_color(&self, c: &Color) -> bool {
        if self
            .pieces
            .iter()
            .any(|p| p.domain.word(c) != p.range.word(c))
        {
            return true;
        }
        let words: Vec<&BinaryWord> = self.pieces.iter().map(|p| p.domain.word(c)).collect();
        let mut leaves = Vec::new();
        trie_leaves(&words, BinaryWord::new(), &mut leaves);
        let slice = |u: &BinaryWord| {
            let pieces = self
                .pieces
                .iter()
                .filter(|p| p.domain.word(c).is_prefix_of(u))
                .map(|p| Piece {
                    domain: p.domain.with_word(*c, BinaryWord::new()),
                    range: p.range.with_word(*c, BinaryWord::new()),
                    twist: p.twist.clone(),
                })
                .collect();
            Element::assemble(self.action.clone(), self.corank, self.rank, pieces)
        };
        let first = slice(&leaves[0]);
        leaves[1..].iter().any(|u| !slice(u).equals(&first))
    }

    /// For a multicolored tree, the colors cut in every leaf.
    pub fn special_spectrum(&self) -> Result<BTreeSet<Color>> {
        if self.corank != 1 {
            return Err(Error::Precondition(format!(
                "special spectrum needs a tree, found corank {}",
                self.corank
            )));
        }
        if !self.is_untwisted() {
            return Err(Error::TwistedInput);
        }
        let (_, forest) = self
            .as_twisted_forest()
            .ok_or_else(|| Error::Precondition("element is not a multicolored tree".into()))?;
        let mut leaves = forest.leaves().iter();
        let first: BTreeSet<Color> = leaves
            .next()
            .map(|b| b.colors().copied().collect())
            .unwrap_or_default();
        Ok(leaves.fold(first, |acc, b| {
            acc.into_iter().filter(|c| !b.word(c).is_empty()).collect()
        }))
    }
}
