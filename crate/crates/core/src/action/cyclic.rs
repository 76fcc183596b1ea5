use std::fmt;

use rand::{Rng, RngCore};

use super::{split_power, GroupAction};
use crate::cantor::Color;
use crate::error::{Error, Result};

/// An element of the cyclic group of order two: `E` or the swap `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cyclic2 {
    E,
    S,
}

impl fmt::Display for Cyclic2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cyclic2::E => "c2:e",
            Cyclic2::S => "c2:s",
        })
    }
}

/// The cyclic group of order two swapping the colors 1 and 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cyclic2Action;

impl GroupAction for Cyclic2Action {
    type Elem = Cyclic2;

    fn name(&self) -> String {
        "c2".into()
    }

    fn identity(&self) -> Cyclic2 {
        Cyclic2::E
    }

    fn multiply(&self, a: &Cyclic2, b: &Cyclic2) -> Cyclic2 {
        if a == b {
            Cyclic2::E
        } else {
            Cyclic2::S
        }
    }

    fn invert(&self, a: &Cyclic2) -> Cyclic2 {
        *a
    }

    fn contains(&self, color: &Color) -> bool {
        matches!(color, Color::Index(1 | 2))
    }

    fn apply(&self, g: &Cyclic2, color: &Color) -> Result<Color> {
        self.check_color(color)?;
        Ok(match (g, color) {
            (Cyclic2::S, Color::Index(i)) => Color::Index(3 - i),
            _ => *color,
        })
    }

    fn finite_colors(&self) -> Option<Vec<Color>> {
        Some(vec![Color::Index(1), Color::Index(2)])
    }

    fn orbit_representatives(&self) -> Option<Vec<Color>> {
        Some(vec![Color::Index(1)])
    }

    fn generators(&self) -> Option<Vec<Cyclic2>> {
        Some(vec![Cyclic2::S])
    }

    fn format_elem(&self, g: &Cyclic2) -> String {
        g.to_string()
    }

    fn parse_elem(&self, text: &str) -> Result<Cyclic2> {
        let (base, k) = split_power(text);
        let base = base.strip_prefix("c2:").unwrap_or(base);
        let g = match base {
            "e" => Cyclic2::E,
            "s" => Cyclic2::S,
            other => {
                return Err(Error::InvalidGroupElement(format!(
                    "expected `c2:e` or `c2:s`, found {other:?}"
                )))
            }
        };
        Ok(if k.rem_euclid(2) == 0 { Cyclic2::E } else { g })
    }

    fn color_pool(&self) -> Vec<Color> {
        vec![Color::Index(1), Color::Index(2)]
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> Cyclic2 {
        if rng.gen_bool(0.5) {
            Cyclic2::S
        } else {
            Cyclic2::E
        }
    }
}
