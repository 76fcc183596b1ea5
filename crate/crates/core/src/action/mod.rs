//! Groups acting faithfully on a color set, with exact element arithmetic.

use std::fmt;
use std::hash::Hash;

use rand::RngCore;

use crate::cantor::Color;
use crate::error::{Error, Result};

mod cyclic;
mod houghton;
mod thompson;
mod trivial;

pub use cyclic::{Cyclic2, Cyclic2Action};
pub use houghton::{HoughtonAction, HoughtonElem};
pub use thompson::{ThompsonFAction, TreePair};
pub use trivial::TrivialAction;

/// A group `G` acting faithfully on a countable color set `S`.
///
/// `multiply(a, b)` is the composite `a ∘ b`: `b` acts first, so
/// `apply(multiply(a, b), s) == apply(a, apply(b, s))`.
pub trait GroupAction: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Short selector, as accepted by the CLI (`trivial:3`, `c2`, `F`, ...).
    fn name(&self) -> String;

    fn identity(&self) -> Self::Elem;

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn invert(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn contains(&self, color: &Color) -> bool;

    /// `γ·s`. Fails for colors outside `S`.
    fn apply(&self, g: &Self::Elem, color: &Color) -> Result<Color>;

    /// All of `S` when it is finite.
    fn finite_colors(&self) -> Option<Vec<Color>> {
        None
    }

    /// One color per orbit, when there are finitely many orbits.
    fn orbit_representatives(&self) -> Option<Vec<Color>>;

    /// A finite generating set, when one is known.
    fn generators(&self) -> Option<Vec<Self::Elem>>;

    fn format_elem(&self, g: &Self::Elem) -> String;

    fn parse_elem(&self, text: &str) -> Result<Self::Elem>;

    fn parse_color(&self, text: &str) -> Result<Color> {
        let color: Color = text.parse()?;
        if self.contains(&color) {
            Ok(color)
        } else {
            Err(Error::ColorNotInSet(color.to_string()))
        }
    }

    /// A small finite set of colors used when sampling random bricks.
    fn color_pool(&self) -> Vec<Color>;

    /// A random group element; small-support elements are favored so that
    /// sampled groupoid elements stay shallow.
    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;

    fn check_color(&self, color: &Color) -> Result<()> {
        if self.contains(color) {
            Ok(())
        } else {
            Err(Error::ColorNotInSet(color.to_string()))
        }
    }
}

/// `γ^k` by repeated multiplication (`k` may be negative).
pub fn power<A: GroupAction>(action: &A, g: &A::Elem, k: i64) -> A::Elem {
    let base = if k < 0 { action.invert(g) } else { g.clone() };
    (0..k.unsigned_abs()).fold(action.identity(), |acc, _| action.multiply(&acc, &base))
}

/// Splits a trailing integer exponent `^k` off `text` (default exponent 1).
pub(crate) fn split_power(text: &str) -> (&str, i64) {
    let text = text.trim();
    if let Some((base, exp)) = text.rsplit_once('^') {
        if let Ok(k) = exp.trim().parse() {
            return (base.trim(), k);
        }
    }
    (text, 1)
}

#[cfg(test)]
pub(crate) mod laws {
    //! Shared property checks for every bundled action.

    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn check_action_axioms<A: GroupAction>(action: &A, trials: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let pool = action.color_pool();
        let e = action.identity();
        for _ in 0..trials {
            let g = action.random_elem(&mut rng);
            let h = action.random_elem(&mut rng);
            let k = action.random_elem(&mut rng);
            let s = pool[(rng.next_u32() as usize) % pool.len()];
            assert_eq!(action.apply(&e, &s).unwrap(), s);
            let gh = action.multiply(&g, &h);
            assert_eq!(
                action.apply(&gh, &s).unwrap(),
                action.apply(&g, &action.apply(&h, &s).unwrap()).unwrap()
            );
            let back = action.apply(&action.invert(&g), &action.apply(&g, &s).unwrap());
            assert_eq!(back.unwrap(), s);
            assert!(action.is_identity(&action.multiply(&g, &action.invert(&g))));
            assert_eq!(
                action.multiply(&action.multiply(&g, &h), &k),
                action.multiply(&g, &action.multiply(&h, &k))
            );
            let text = action.format_elem(&g);
            assert_eq!(action.parse_elem(&text).unwrap(), g, "round trip of {text}");
        }
    }

    /// A sampled nonidentity element moves some sampled color.
    pub fn check_faithful<A: GroupAction>(action: &A, trials: usize, probes: &[Color]) {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfa17);
        for _ in 0..trials {
            let g = action.random_elem(&mut rng);
            if action.is_identity(&g) {
                continue;
            }
            let moved = probes.iter().any(|s| action.apply(&g, s).unwrap() != *s);
            assert!(moved, "{} fixes every probe", action.format_elem(&g));
        }
    }
}
