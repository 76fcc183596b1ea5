//! Multicolored forests, twisted permutations, and the coset order they
//! induce on the groupoid.

use std::collections::{BTreeMap, BTreeSet};

use super::{Element, Piece};
use crate::action::GroupAction;
use crate::cantor::{Brick, Color, Partition};
use crate::error::{Error, Result};

/// A twisted permutation `t·p_σ` of `C^S(n)`: cube `i` goes to cube
/// `images[i-1]` and is then twisted by `twists[images[i-1]-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedPermutation<G> {
    images: Vec<usize>,
    twists: Vec<G>,
}

impl<G: Clone + Eq> TwistedPermutation<G> {
    /// `images` are the 1-based values `σ(1), ..., σ(n)`; `twists` are
    /// indexed by target cube.
    pub fn new(images: Vec<usize>, twists: Vec<G>) -> Result<Self> {
        let n = images.len();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if twists.len() != n || sorted != (1..=n).collect::<Vec<_>>() {
            return Err(Error::Precondition("not a twisted permutation".into()));
        }
        Ok(TwistedPermutation { images, twists })
    }

    /// The pure twist `τ_{γ_1} ⊕ ... ⊕ τ_{γ_n}`.
    pub fn pure_twist(twists: Vec<G>) -> Self {
        TwistedPermutation {
            images: (1..=twists.len()).collect(),
            twists,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn twists(&self) -> &[G] {
        &self.twists
    }

    pub fn has_trivial_permutation(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i + 1 == j)
    }

    pub fn to_element<A: GroupAction<Elem = G>>(&self, action: &A) -> Element<A> {
        let pieces = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &j)| Piece {
                domain: Brick::whole(i + 1),
                range: Brick::whole(j),
                twist: self.twists[j - 1].clone(),
            })
            .collect();
        Element::assemble(action.clone(), self.len(), self.len(), pieces)
    }
}

/// A multicolored forest: the untwisted element sending leaf `k` of an
/// ordered dyadic partition of `C^S(corank)` onto cube `k+1` canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest<A: GroupAction> {
    element: Element<A>,
    leaves: Vec<Brick>,
}

impl<A: GroupAction> Forest<A> {
    /// The forest of an ordered dyadic partition.
    pub fn from_leaves(action: A, corank: usize, leaves: Vec<Brick>) -> Result<Self> {
        for b in &leaves {
            for c in b.colors() {
                action.check_color(c)?;
            }
        }
        let partition = Partition::new(corank, leaves.clone());
        if !partition.is_dyadic()? {
            return Err(Error::Precondition("leaf partition is not dyadic".into()));
        }
        Ok(Self::from_dyadic(action, corank, leaves))
    }

    fn from_dyadic(action: A, corank: usize, leaves: Vec<Brick>) -> Self {
        let e = action.identity();
        let pieces = leaves
            .iter()
            .enumerate()
            .map(|(k, b)| Piece {
                domain: b.clone(),
                range: Brick::whole(k + 1),
                twist: e.clone(),
            })
            .collect();
        let rank = leaves.len();
        Forest {
            element: Element::assemble(action, corank, rank, pieces),
            leaves,
        }
    }

    pub fn identity(action: A, m: usize) -> Self {
        Self::from_dyadic(action, m, (1..=m).map(Brick::whole).collect())
    }

    pub fn element(&self) -> &Element<A> {
        &self.element
    }

    pub fn into_element(self) -> Element<A> {
        self.element
    }

    pub fn leaves(&self) -> &[Brick] {
        &self.leaves
    }

    pub fn corank(&self) -> usize {
        self.element.corank
    }

    pub fn rank(&self) -> usize {
        self.leaves.len()
    }

    /// The same forest with leaves in canonical order.
    pub fn sorted(&self) -> Self {
        let mut leaves = self.leaves.clone();
        leaves.sort();
        Self::from_dyadic(self.element.action.clone(), self.corank(), leaves)
    }

    /// Every leaf cuts each color at most once.
    pub fn is_elementary(&self) -> bool {
        self.leaves.iter().all(Brick::is_elementary)
    }

    /// Every tree is trivial or a single simple split.
    pub fn is_very_elementary(&self) -> bool {
        self.leaves.iter().all(|b| b.depth() <= 1)
    }

    /// Number of leaves in each root cube.
    pub fn weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.corank()];
        for b in &self.leaves {
            w[b.cube() - 1] += 1;
        }
        w
    }

    /// `μ_1, ..., μ_kmax`: how many roots have exactly `k` leaves.
    pub fn weight_multiplicities(&self, kmax: usize) -> Result<Vec<usize>> {
        if !self.is_elementary() {
            return Err(Error::Precondition(
                "weights are defined for elementary forests".into(),
            ));
        }
        let mut mu = vec![0; kmax];
        for w in self.weights() {
            if (1..=kmax).contains(&w) {
                mu[w - 1] += 1;
            }
        }
        Ok(mu)
    }

    /// The forest of the common refinement of both leaf partitions.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.corank() != other.corank() {
            return Err(Error::AmbientMismatch {
                expected: self.corank(),
                found: other.corank(),
            });
        }
        let p = Partition::new(self.corank(), self.leaves.clone());
        let q = Partition::new(other.corank(), other.leaves.clone());
        let joint = p.common_refinement(&q)?;
        Ok(Self::from_dyadic(
            self.element.action.clone(),
            self.corank(),
            joint.into_bricks(),
        ))
    }

    /// The largest elementary forest whose leaf partition is coarser than
    /// this one, grown greedily from the trivial partition. `pick(n)` chooses
    /// among the `n` splits available at each step.
    pub fn elementary_core_with(&self, mut pick: impl FnMut(usize) -> usize) -> Self {
        let colors: BTreeSet<Color> = self
            .leaves
            .iter()
            .flat_map(|b| b.colors().copied())
            .collect();
        let mut parts: Vec<Brick> = (1..=self.corank()).map(Brick::whole).collect();
        loop {
            let mut options = Vec::new();
            for (i, q) in parts.iter().enumerate() {
                for c in &colors {
                    if !q.word(c).is_empty() {
                        continue;
                    }
                    let all_cut = self
                        .leaves
                        .iter()
                        .filter(|l| l.is_subset_of(q))
                        .all(|l| !l.word(c).is_empty());
                    if all_cut {
                        options.push((i, *c));
                    }
                }
            }
            if options.is_empty() {
                break;
            }
            let (i, c) = options[pick(options.len()) % options.len()];
            let (lo, hi) = parts[i].split(c);
            parts[i] = lo;
            parts.push(hi);
        }
        parts.sort();
        Self::from_dyadic(self.element.action.clone(), self.corank(), parts)
    }

    pub fn elementary_core(&self) -> Self {
        self.elementary_core_with(|_| 0)
    }
}

impl<A: GroupAction> Element<A> {
    /// Writes `self = g ∘ f` with `g` a twisted permutation and `f` a forest
    /// whose leaves are in canonical order, if possible.
    pub fn as_twisted_forest(&self) -> Option<(TwistedPermutation<A::Elem>, Forest<A>)> {
        let action = &self.action;
        let mut per_cube: Vec<Option<(Brick, A::Elem)>> = vec![None; self.rank];
        for p in &self.pieces {
            let root = preimage_of_cube(action, p)?;
            let slot = &mut per_cube[p.range.cube() - 1];
            match slot {
                None => *slot = Some((root, p.twist.clone())),
                Some((b, g)) if *b == root && *g == p.twist => {}
                Some(_) => return None,
            }
        }
        let mut roots: Vec<(Brick, usize, A::Elem)> = per_cube
            .into_iter()
            .enumerate()
            .map(|(j, slot)| slot.map(|(b, g)| (b, j + 1, g)))
            .collect::<Option<_>>()?;
        let partition = Partition::new(self.corank, roots.iter().map(|r| r.0.clone()).collect());
        if !partition.is_dyadic_unchecked() {
            return None;
        }
        roots.sort();
        let mut twists = vec![action.identity(); self.rank];
        let images: Vec<usize> = roots.iter().map(|r| r.1).collect();
        for (_, j, g) in &roots {
            twists[j - 1] = g.clone();
        }
        let leaves = roots.into_iter().map(|r| r.0).collect();
        Some((
            TwistedPermutation { images, twists },
            Forest::from_dyadic(action.clone(), self.corank, leaves),
        ))
    }

    /// `self` as a twisted permutation, if it is one.
    pub fn as_twisted_permutation(&self) -> Option<TwistedPermutation<A::Elem>> {
        if self.rank != self.corank {
            return None;
        }
        let (g, f) = self.as_twisted_forest()?;
        f.leaves.iter().all(Brick::is_whole).then_some(g)
    }

    /// `self` as a forest (untwisted, leaves in the order of the range cubes).
    pub fn as_forest(&self) -> Option<Forest<A>> {
        let (g, f) = self.as_twisted_forest()?;
        if g.twists.iter().any(|t| !self.action.is_identity(t)) {
            return None;
        }
        let mut leaves = vec![Brick::whole(1); g.len()];
        for (k, &j) in g.images.iter().enumerate() {
            leaves[j - 1] = f.leaves[k].clone();
        }
        Some(Forest::from_dyadic(
            self.action.clone(),
            self.corank,
            leaves,
        ))
    }

    /// `(f2, t, f1)` with `self = f2⁻¹ ∘ t ∘ f1` and `t` a pure twist.
    pub fn forest_twist_forest_form(&self) -> (Forest<A>, TwistedPermutation<A::Elem>, Forest<A>) {
        let r = self.reduced();
        let action = &self.action;
        let f1 = Forest::from_dyadic(
            action.clone(),
            r.corank,
            r.pieces.iter().map(|p| p.domain.clone()).collect(),
        );
        let f2 = Forest::from_dyadic(
            action.clone(),
            r.rank,
            r.pieces.iter().map(|p| p.range.clone()).collect(),
        );
        let t = TwistedPermutation::pure_twist(r.pieces.iter().map(|p| p.twist.clone()).collect());
        (f2, t, f1)
    }

    /// Whether `[self] ≤ [other]` in the coset order: `other ∘ self⁻¹` is a
    /// twisted permutation after a forest.
    pub fn coset_leq(&self, other: &Self) -> Result<bool> {
        Ok(self.interval_forest(other)?.is_some())
    }

    /// Whether `[self] = [other]`.
    pub fn coset_eq(&self, other: &Self) -> Result<bool> {
        self.check_corank(other)?;
        Ok(other
            .compose(&self.inverse())?
            .as_twisted_permutation()
            .is_some())
    }

    /// Whether `[self] ≤ [other]` by an elementary forest.
    pub fn is_elementary_interval(&self, other: &Self) -> Result<bool> {
        Ok(self
            .interval_forest(other)?
            .is_some_and(|f| f.is_elementary()))
    }

    /// The forest `f` with `[other] = [f ∘ self]`, if `[self] ≤ [other]`.
    pub fn interval_forest(&self, other: &Self) -> Result<Option<Forest<A>>> {
        self.check_corank(other)?;
        let u = other.compose(&self.inverse())?;
        Ok(u.as_twisted_forest().map(|(_, f)| f))
    }

    /// A representative of the largest elementary expansion of `[self]`
    /// below `[other]`.
    pub fn elementary_core(&self, other: &Self) -> Result<Self> {
        let f = self
            .interval_forest(other)?
            .ok_or_else(|| Error::Precondition("the cosets are not comparable".into()))?;
        if f.leaves.iter().all(Brick::is_whole) {
            return Err(Error::Precondition("the cosets are equal".into()));
        }
        f.elementary_core().element.compose(self)
    }

    /// Whether `a` fixes the coset `[self]`, i.e. `self ∘ a ∘ self⁻¹` is a
    /// twisted permutation.
    pub fn stabilizes(&self, a: &Self) -> Result<bool> {
        let conj = self.compose(a)?.compose(&self.inverse())?;
        Ok(conj.as_twisted_permutation().is_some())
    }

    /// `(g', f')` with `f ∘ g = g' ∘ f'`.
    pub fn swap(
        f: &Forest<A>,
        g: &TwistedPermutation<A::Elem>,
    ) -> Result<(TwistedPermutation<A::Elem>, Forest<A>)> {
        let fg = f.element.compose(&g.to_element(&f.element.action))?;
        fg.as_twisted_forest()
            .ok_or_else(|| Error::Precondition("product is not a twisted forest".into()))
    }

    fn check_corank(&self, other: &Self) -> Result<()> {
        if self.corank != other.corank {
            return Err(Error::AmbientMismatch {
                expected: self.corank,
                found: other.corank,
            });
        }
        Ok(())
    }
}

/// For a piece inside cube `j` of the range, the brick `E` such that the
/// piece is the restriction of the twist homeomorphism `E → C_j`.
fn preimage_of_cube<A: GroupAction>(action: &A, p: &Piece<A::Elem>) -> Option<Brick> {
    let g = &p.twist;
    let inverse = action.invert(g);
    let mut colors: BTreeSet<Color> = p.domain.colors().copied().collect();
    for s in p.range.colors() {
        colors.insert(action.apply(&inverse, s).ok()?);
    }
    let mut words = BTreeMap::new();
    for t in colors {
        let image = action.apply(g, &t).ok()?;
        let root = p.domain.word(&t).strip_suffix(p.range.word(&image))?;
        if !root.is_empty() {
            words.insert(t, root);
        }
    }
    Some(Brick::from_map(p.domain.cube(), words))
}
