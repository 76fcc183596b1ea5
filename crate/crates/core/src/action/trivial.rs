use rand::RngCore;

use super::GroupAction;
use crate::cantor::Color;
use crate::error::{Error, Result};

/// The trivial group acting on `S = {1, ..., size}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrivialAction {
    size: u32,
}

impl TrivialAction {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition("the color set must be nonempty".into()));
        }
        Ok(TrivialAction { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }
}

impl GroupAction for TrivialAction {
    type Elem = ();

    fn name(&self) -> String {
        format!("trivial:{}", self.size)
    }

    fn identity(&self) {}

    fn multiply(&self, _: &(), _: &()) {}

    fn invert(&self, _: &()) {}

    fn contains(&self, color: &Color) -> bool {
        matches!(color, Color::Index(i) if (1..=self.size).contains(i))
    }

    fn apply(&self, _: &(), color: &Color) -> Result<Color> {
        self.check_color(color)?;
        Ok(*color)
    }

    fn finite_colors(&self) -> Option<Vec<Color>> {
        Some((1..=self.size).map(Color::Index).collect())
    }

    fn orbit_representatives(&self) -> Option<Vec<Color>> {
        self.finite_colors()
    }

    fn generators(&self) -> Option<Vec<()>> {
        Some(Vec::new())
    }

    fn format_elem(&self, _: &()) -> String {
        "e".into()
    }

    fn parse_elem(&self, text: &str) -> Result<()> {
        match text.trim() {
            "e" | "1" => Ok(()),
            other => Err(Error::InvalidGroupElement(format!(
                "the trivial group has only `e`, found {other:?}"
            ))),
        }
    }

    fn color_pool(&self) -> Vec<Color> {
        (1..=self.size).map(Color::Index).collect()
    }

    fn random_elem(&self, _: &mut dyn RngCore) {}
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::laws;

    #[test]
    fn axioms() {
        let a = TrivialAction::new(3).unwrap();
        laws::check_action_axioms(&a, 50);
        assert!(a.apply(&(), &Color::Index(4)).is_err());
        assert_eq!(a.parse_color("2").unwrap(), Color::Index(2));
        assert!(a.parse_color("0").is_err());
    }
}
