use rand::{Rng, RngCore};

use super::{power, split_power, GroupAction};
use crate::cantor::{BinaryWord, Color, Dyadic};
use crate::error::{Error, Result};

/// A reduced tree-pair diagram, stored as the ordered leaf addresses of the
/// domain and range trees. Leaf `i` of the domain interval is mapped
/// affinely onto leaf `i` of the range.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreePair {
    domain: Vec<BinaryWord>,
    range: Vec<BinaryWord>,
}

impl TreePair {
    pub fn identity() -> Self {
        TreePair {
            domain: vec![BinaryWord::new()],
            range: vec![BinaryWord::new()],
        }
    }

    /// Builds a tree pair from leaf lists, validating both as complete
    /// ordered prefix codes of equal size, and reduces it.
    pub fn new(domain: Vec<BinaryWord>, range: Vec<BinaryWord>) -> Result<Self> {
        if domain.len() != range.len() {
            return Err(Error::InvalidGroupElement(format!(
                "trees have {} and {} leaves",
                domain.len(),
                range.len()
            )));
        }
        for leaves in [&domain, &range] {
            if !is_ordered_tree(leaves) {
                return Err(Error::InvalidGroupElement(
                    "leaf list is not a complete binary tree in order".into(),
                ));
            }
        }
        Ok(reduce(domain.into_iter().zip(range).collect()))
    }

    pub fn domain_leaves(&self) -> &[BinaryWord] {
        &self.domain
    }

    pub fn range_leaves(&self) -> &[BinaryWord] {
        &self.range
    }

    /// The generator `x_n`: `x_0` maps `[0, 1/2]` onto `[0, 1/4]` affinely,
    /// and `x_n` acts as `x_0` on `[1 - 2^-n, 1]`.
    pub fn generator(n: usize) -> Self {
        let spine =
            |k: usize| -> BinaryWord { BinaryWord::from_bits(std::iter::repeat_n(true, k)) };
        let mut domain: Vec<BinaryWord> = (0..n).map(|k| spine(k).child(false)).collect();
        let mut range = domain.clone();
        let top = spine(n);
        for w in ["0", "10", "11"] {
            domain.push(top.concat(&w.parse().unwrap()));
        }
        for w in ["00", "01", "1"] {
            range.push(top.concat(&w.parse().unwrap()));
        }
        TreePair { domain, range }
    }

    fn inverse(&self) -> Self {
        TreePair {
            domain: self.range.clone(),
            range: self.domain.clone(),
        }
    }

    /// `a ∘ b`.
    fn compose(a: &TreePair, b: &TreePair) -> TreePair {
        let (br, ad) = (&b.range, &a.domain);
        let (mut i, mut j) = (0, 0);
        let mut pairs = Vec::with_capacity(br.len().max(ad.len()));
        while i < br.len() && j < ad.len() {
            let (u, v) = (&br[i], &ad[j]);
            if u.is_prefix_of(v) {
                let d = b.domain[i].concat(&v.strip_prefix(u).unwrap());
                pairs.push((d, a.range[j].clone()));
                j += 1;
                if u == v || j == ad.len() || !u.is_prefix_of(&ad[j]) {
                    i += 1;
                }
            } else {
                let r = a.range[j].concat(&u.strip_prefix(v).unwrap());
                pairs.push((b.domain[i].clone(), r));
                i += 1;
                if i == br.len() || !v.is_prefix_of(&br[i]) {
                    j += 1;
                }
            }
        }
        reduce(pairs)
    }

    /// Image of the binary expansion `0.w`, as a binary expansion.
    fn image_bits(&self, w: &BinaryWord) -> BinaryWord {
        for (d, r) in self.domain.iter().zip(&self.range) {
            if w.zero_padded(d.len()).bits()[..d.len()] == *d.bits() {
                let rest: Vec<bool> = w.bits().iter().skip(d.len()).copied().collect();
                return r.concat(&BinaryWord::from_bits(rest));
            }
        }
        unreachable!("leaves of a complete tree cover every point")
    }

    fn render(&self) -> String {
        format!(
            "F:({}|{})",
            render_tree(&self.domain, 0),
            render_tree(&self.range, 0)
        )
    }
}

fn is_ordered_tree(leaves: &[BinaryWord]) -> bool {
    fn check(leaves: &[BinaryWord], prefix: &BinaryWord) -> bool {
        match leaves {
            [] => false,
            [only] => only == prefix,
            _ => {
                let left = prefix.child(false);
                let split = leaves.iter().take_while(|w| left.is_prefix_of(w)).count();
                let right = prefix.child(true);
                leaves.iter().all(|w| prefix.is_prefix_of(w) && w != prefix)
                    && leaves[split..].iter().all(|w| right.is_prefix_of(w))
                    && check(&leaves[..split], &left)
                    && check(&leaves[split..], &right)
            }
        }
    }
    check(leaves, &BinaryWord::new())
}

fn render_tree(leaves: &[BinaryWord], depth: usize) -> String {
    if leaves.len() == 1 && leaves[0].len() == depth {
        return ".".into();
    }
    let split = leaves
        .iter()
        .take_while(|w| w.bit(depth) == Some(false))
        .count();
    format!(
        "({}{})",
        render_tree(&leaves[..split], depth + 1),
        render_tree(&leaves[split..], depth + 1)
    )
}

fn parse_tree(text: &str) -> Result<Vec<BinaryWord>> {
    fn go(
        chars: &[u8],
        pos: &mut usize,
        prefix: BinaryWord,
        out: &mut Vec<BinaryWord>,
    ) -> Result<()> {
        match chars.get(*pos) {
            Some(b'.') => {
                *pos += 1;
                out.push(prefix);
                Ok(())
            }
            Some(b'(') => {
                *pos += 1;
                go(chars, pos, prefix.child(false), out)?;
                go(chars, pos, prefix.child(true), out)?;
                if chars.get(*pos) != Some(&b')') {
                    return Err(Error::parse(*pos, "expected `)` closing a caret"));
                }
                *pos += 1;
                Ok(())
            }
            _ => Err(Error::parse(*pos, "expected `.` or `(` in tree")),
        }
    }
    let compact: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let mut pos = 0;
    let mut out = Vec::new();
    go(&compact, &mut pos, BinaryWord::new(), &mut out)?;
    if pos != compact.len() {
        return Err(Error::parse(pos, "trailing input after tree"));
    }
    Ok(out)
}

/// Cancels common carets: adjacent leaf pairs that are siblings in both trees.
fn reduce(pairs: Vec<(BinaryWord, BinaryWord)>) -> TreePair {
    let siblings =
        |a: &BinaryWord, b: &BinaryWord| a.last() == Some(false) && *b == a.parent().child(true);
    let mut stack: Vec<(BinaryWord, BinaryWord)> = Vec::with_capacity(pairs.len());
    for pair in pairs {
        stack.push(pair);
        while stack.len() >= 2 {
            let n = stack.len();
            let (d0, r0) = &stack[n - 2];
            let (d1, r1) = &stack[n - 1];
            if siblings(d0, d1) && siblings(r0, r1) {
                let merged = (d0.parent(), r0.parent());
                stack.truncate(n - 2);
                stack.push(merged);
            } else {
                break;
            }
        }
    }
    let (domain, range) = stack.into_iter().unzip();
    TreePair { domain, range }
}

/// Thompson's group `F` acting on the dyadic rationals in `(0, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ThompsonFAction;

impl GroupAction for ThompsonFAction {
    type Elem = TreePair;

    fn name(&self) -> String {
        "F".into()
    }

    fn identity(&self) -> TreePair {
        TreePair::identity()
    }

    fn multiply(&self, a: &TreePair, b: &TreePair) -> TreePair {
        TreePair::compose(a, b)
    }

    fn invert(&self, a: &TreePair) -> TreePair {
        a.inverse()
    }

    fn contains(&self, color: &Color) -> bool {
        matches!(color, Color::Dyadic(d) if d.in_unit_interval())
    }

    fn apply(&self, g: &TreePair, color: &Color) -> Result<Color> {
        self.check_color(color)?;
        let Color::Dyadic(d) = color else {
            unreachable!()
        };
        Dyadic::from_bits(&g.image_bits(&d.to_bits())).map(Color::Dyadic)
    }

    fn orbit_representatives(&self) -> Option<Vec<Color>> {
        Some(vec![Color::Dyadic(Dyadic::new(1, 1).unwrap())])
    }

    fn generators(&self) -> Option<Vec<TreePair>> {
        Some(vec![TreePair::generator(0), TreePair::generator(1)])
    }

    fn format_elem(&self, g: &TreePair) -> String {
        g.render()
    }

    /// Accepts `F:(dom|ran)`, `e`, or a generator `x<n>`, each optionally
    /// followed by an integer power `^k`.
    fn parse_elem(&self, text: &str) -> Result<TreePair> {
        let (base, k) = split_power(text);
        let g = if base == "e" {
            TreePair::identity()
        } else if let Some(n) = base.strip_prefix('x') {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidGroupElement(format!("bad generator {base:?}")))?;
            TreePair::generator(n)
        } else {
            let body = base
                .strip_prefix("F:(")
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| {
                    Error::InvalidGroupElement(format!("expected `F:(dom|ran)`, found {base:?}"))
                })?;
            let (dom, ran) = body
                .split_once('|')
                .ok_or_else(|| Error::InvalidGroupElement("missing `|` between trees".into()))?;
            TreePair::new(parse_tree(dom)?, parse_tree(ran)?)?
        };
        Ok(power(self, &g, k))
    }

    fn color_pool(&self) -> Vec<Color> {
        ["1/2", "1/4", "3/4", "3/8", "5/8", "1/8"]
            .iter()
            .map(|s| Color::Dyadic(s.parse().unwrap()))
            .collect()
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> TreePair {
        let len = rng.gen_range(0..=3);
        let mut g = TreePair::identity();
        for _ in 0..len {
            let x = TreePair::generator(rng.gen_range(0..=1));
            let x = if rng.gen_bool(0.5) { x.inverse() } else { x };
            g = TreePair::compose(&g, &x);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::laws;

    fn d(s: &str) -> Color {
        Color::Dyadic(s.parse().unwrap())
    }

    #[test]
    fn generator_images() {
        let f = ThompsonFAction;
        let x0 = TreePair::generator(0);
        assert_eq!(f.apply(&x0, &d("1/2")).unwrap(), d("1/4"));
        assert_eq!(f.apply(&x0, &d("3/4")).unwrap(), d("1/2"));
        assert_eq!(f.apply(&f.identity(), &d("3/8")).unwrap(), d("3/8"));
        let x1 = TreePair::generator(1);
        assert_eq!(f.apply(&x1, &d("1/2")).unwrap(), d("1/2"));
        assert_eq!(f.apply(&x1, &d("3/4")).unwrap(), d("5/8"));
    }

    #[test]
    fn reduction() {
        let f = ThompsonFAction;
        let x0 = TreePair::generator(0);
        assert_eq!(f.multiply(&x0, &f.invert(&x0)), TreePair::identity());
        assert_eq!(f.format_elem(&x0), "F:((.(..))|((..).))");
        assert_eq!(f.parse_elem("x0").unwrap(), x0);
        assert_eq!(f.parse_elem("F:((..)|(..))").unwrap(), TreePair::identity());
        assert!(f.parse_elem("F:((..)|.)").is_err());
        assert!(f.apply(&x0, &Color::Index(1)).is_err());
    }

    #[test]
    fn relation_x1_conjugation() {
        // x0^-1 x1 x0 = x2
        let f = ThompsonFAction;
        let x0 = TreePair::generator(0);
        let lhs = f.multiply(&f.invert(&x0), &f.multiply(&TreePair::generator(1), &x0));
        assert_eq!(lhs, TreePair::generator(2));
    }

    #[test]
    fn axioms_and_order() {
        let f = ThompsonFAction;
        laws::check_action_axioms(&f, 300);
        laws::check_faithful(&f, 100, &f.color_pool());
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let pool = f.color_pool();
        for _ in 0..200 {
            let g = f.random_elem(&mut rng);
            for a in &pool {
                for b in &pool {
                    if a < b {
                        assert!(f.apply(&g, a).unwrap() < f.apply(&g, b).unwrap());
                    }
                }
            }
        }
    }
}
