//! Seeded random generation of partitions, elements, forests and points.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::GroupAction;
use crate::cantor::{BinaryWord, Brick, Color, PointPrefix};
use crate::element::{Element, Forest, Piece, TwistedPermutation};
use crate::error::Result;

/// Derives an independent stream seed from a base seed and a tag.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub struct Sampler<A: GroupAction> {
    action: A,
    pool: Vec<Color>,
    rng: ChaCha8Rng,
    /// Upper bound on extra splits beyond the minimum brick count.
    pub max_extra: usize,
}

impl<A: GroupAction> Sampler<A> {
    pub fn new(action: A, seed: u64) -> Self {
        let pool = action.color_pool();
        Sampler {
            action,
            pool,
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_extra: 3,
        }
    }

    pub fn action(&self) -> &A {
        &self.action
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn color(&mut self) -> Color {
        *self
            .pool
            .choose(&mut self.rng)
            .expect("nonempty color pool")
    }

    /// Two different colors from the pool.
    pub fn color_pair(&mut self) -> (Color, Color) {
        let s = self.color();
        loop {
            let t = self.color();
            if t != s {
                return (s, t);
            }
        }
    }

    pub fn group_elem(&mut self) -> A::Elem {
        self.action.random_elem(&mut self.rng)
    }

    /// A dyadic partition of `C^S(ambient)` with `n ≥ ambient` bricks,
    /// grown by splitting random bricks along random colors.
    pub fn partition(&mut self, ambient: usize, n: usize) -> Vec<Brick> {
        let mut bricks: Vec<Brick> = (1..=ambient).map(Brick::whole).collect();
        while bricks.len() < n {
            let i = self.rng.gen_range(0..bricks.len());
            let c = self.color();
            let (lo, hi) = bricks.swap_remove(i).split(c);
            bricks.push(lo);
            bricks.push(hi);
        }
        bricks
    }

    /// A dyadic partition of a single brick into `n` pieces.
    pub fn partition_of(&mut self, brick: &Brick, n: usize) -> Vec<Brick> {
        let mut bricks = vec![brick.clone()];
        while bricks.len() < n {
            let i = self.rng.gen_range(0..bricks.len());
            let c = self.color();
            let (lo, hi) = bricks.swap_remove(i).split(c);
            bricks.push(lo);
            bricks.push(hi);
        }
        bricks
    }

    fn brick_count(&mut self, corank: usize, rank: usize) -> usize {
        corank.max(rank).max(1) + self.rng.gen_range(0..=self.max_extra)
    }

    fn assemble(&mut self, corank: usize, rank: usize, twisted: bool) -> Result<Element<A>> {
        let n = self.brick_count(corank, rank);
        let domain = self.partition(corank, n);
        let mut range = self.partition(rank, n);
        range.shuffle(&mut self.rng);
        let pieces = domain
            .into_iter()
            .zip(range)
            .map(|(d, r)| Piece {
                domain: d,
                range: r,
                twist: if twisted {
                    self.group_elem()
                } else {
                    self.action.identity()
                },
            })
            .collect();
        Element::new(self.action.clone(), corank, rank, pieces)
    }

    /// A random element of the groupoid from `C^S(corank)` to `C^S(rank)`.
    pub fn element(&mut self, corank: usize, rank: usize) -> Result<Element<A>> {
        self.assemble(corank, rank, true)
    }

    /// A random untwisted element.
    pub fn untwisted(&mut self, corank: usize, rank: usize) -> Result<Element<A>> {
        self.assemble(corank, rank, false)
    }

    /// A random element of `SV_G`.
    pub fn group_element(&mut self) -> Result<Element<A>> {
        self.element(1, 1)
    }

    /// A random multicolored forest with the given corank and at least
    /// `corank` leaves.
    pub fn forest(&mut self, corank: usize) -> Result<Forest<A>> {
        let n = self.brick_count(corank, corank);
        let mut leaves = self.partition(corank, n);
        leaves.shuffle(&mut self.rng);
        Forest::from_leaves(self.action.clone(), corank, leaves)
    }

    /// A random multicolored tree with exactly `leaves` leaves.
    pub fn tree(&mut self, leaves: usize) -> Result<Forest<A>> {
        let mut bricks = self.partition(1, leaves);
        bricks.shuffle(&mut self.rng);
        Forest::from_leaves(self.action.clone(), 1, bricks)
    }

    pub fn twisted_permutation(&mut self, n: usize) -> TwistedPermutation<A::Elem> {
        let mut images: Vec<usize> = (1..=n).collect();
        images.shuffle(&mut self.rng);
        let twists = (0..n).map(|_| self.group_elem()).collect();
        TwistedPermutation::new(images, twists).expect("valid permutation")
    }

    /// A random exact point of `C^S(cubes)`: finitely many colors carry a
    /// random word, all other coordinates are zero.
    pub fn point(&mut self, cubes: usize) -> PointPrefix {
        let cube = self.rng.gen_range(1..=cubes);
        let k = self.rng.gen_range(0..=3);
        let mut assignment = Vec::new();
        for _ in 0..k {
            let c = self.color();
            let len = self.rng.gen_range(1..=6);
            let word = BinaryWord::from_bits((0..len).map(|_| self.rng.gen_bool(0.5)));
            assignment.push((c, word));
        }
        PointPrefix::new(cube, assignment)
    }

    /// A random point inside `brick`, continuing its words randomly.
    pub fn point_in(&mut self, brick: &Brick) -> PointPrefix {
        let mut assignment: Vec<(Color, BinaryWord)> =
            brick.entries().map(|(c, w)| (*c, w.clone())).collect();
        for _ in 0..self.rng.gen_range(0..=2) {
            let c = self.color();
            let tail = BinaryWord::from_bits(
                (0..self.rng.gen_range(1..=4)).map(|_| self.rng.gen_bool(0.5)),
            );
            match assignment.iter_mut().find(|(d, _)| *d == c) {
                Some((_, w)) => *w = w.concat(&tail),
                None => assignment.push((c, tail)),
            }
        }
        PointPrefix::new(brick.cube(), assignment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Cyclic2Action, ThompsonFAction};
    use crate::cantor::Partition;

    #[test]
    fn seeds_are_reproducible() {
        let mut a = Sampler::new(Cyclic2Action, 5);
        let mut b = Sampler::new(Cyclic2Action, 5);
        for _ in 0..10 {
            assert_eq!(
                a.group_element().unwrap().to_string(),
                b.group_element().unwrap().to_string()
            );
        }
        assert_ne!(derive_seed(1, 2), derive_seed(2, 1));
    }

    #[test]
    fn samples_are_well_formed() {
        let mut s = Sampler::new(ThompsonFAction, 11);
        for _ in 0..30 {
            let bricks = s.partition(2, 5);
            assert!(Partition::new(2, bricks).is_dyadic().unwrap());
            let h = s.element(2, 3).unwrap();
            assert_eq!((h.corank(), h.rank()), (2, 3));
            assert!(s.untwisted(1, 2).unwrap().is_untwisted());
            let f = s.forest(2).unwrap();
            assert!(f.element().as_forest().is_some());
            let b = s.partition(1, 3)[0].clone();
            assert!(s.point_in(&b).lies_in(&b));
        }
    }
}
