use std::collections::{BTreeMap, HashSet};

use rand::{Rng, RngCore};

use super::{power, split_power, GroupAction};
use crate::cantor::Color;
use crate::error::{Error, Result};

type Point = (u32, u64);

/// An element of the Houghton group `H_n`: a bijection of `{1..n} × ℕ` that
/// translates each ray by `offsets[r-1]` outside a finite set. `exceptions`
/// lists exactly the points where the map differs from that translation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HoughtonElem {
    offsets: Vec<i64>,
    exceptions: BTreeMap<Point, Point>,
}

impl HoughtonElem {
    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn exceptions(&self) -> &BTreeMap<Point, Point> {
        &self.exceptions
    }

    fn translate(&self, (r, k): Point) -> Option<Point> {
        let t = self.offsets[r as usize - 1];
        k.checked_add_signed(t).map(|k| (r, k))
    }

    fn eval(&self, p: Point) -> Option<Point> {
        match self.exceptions.get(&p) {
            Some(q) => Some(*q),
            None => self.translate(p),
        }
    }

    /// Every point at or beyond this index on each ray is translated.
    fn bound(&self) -> u64 {
        let spread = self
            .offsets
            .iter()
            .map(|t| t.unsigned_abs())
            .max()
            .unwrap_or(0);
        let deepest = self
            .exceptions
            .iter()
            .flat_map(|(a, b)| [a.1, b.1])
            .max()
            .unwrap_or(0);
        deepest + spread + 1
    }

    /// Builds the canonical element agreeing with `f` on the first `window`
    /// points of every ray and translating by `offsets` beyond.
    fn from_window(offsets: Vec<i64>, window: u64, f: impl Fn(Point) -> Point) -> Self {
        let n = offsets.len() as u32;
        let mut elem = HoughtonElem {
            offsets,
            exceptions: BTreeMap::new(),
        };
        let mut exceptions = BTreeMap::new();
        for r in 1..=n {
            for k in 0..window {
                let image = f((r, k));
                if elem.translate((r, k)) != Some(image) {
                    exceptions.insert((r, k), image);
                }
            }
        }
        elem.exceptions = exceptions;
        elem
    }

    fn transposition(a: Point, b: Point, n: u32) -> Self {
        HoughtonElem {
            offsets: vec![0; n as usize],
            exceptions: [(a, b), (b, a)].into_iter().collect(),
        }
    }
}

/// The Houghton group `H_n` acting on `n` rays `{1..n} × ℕ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HoughtonAction {
    n: u32,
}

impl HoughtonAction {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition(
                "Houghton groups need at least one ray".into(),
            ));
        }
        Ok(HoughtonAction { n })
    }

    pub fn rays(&self) -> u32 {
        self.n
    }

    /// Validates the data as a bijection and drops redundant exceptions.
    pub fn element(
        &self,
        offsets: Vec<i64>,
        exceptions: impl IntoIterator<Item = (Point, Point)>,
    ) -> Result<HoughtonElem> {
        let bad = |msg: String| Error::InvalidGroupElement(msg);
        if offsets.len() != self.n as usize {
            return Err(bad(format!(
                "expected {} offsets, found {}",
                self.n,
                offsets.len()
            )));
        }
        if offsets.iter().sum::<i64>() != 0 {
            return Err(bad("offsets must sum to zero".into()));
        }
        let mut map = BTreeMap::new();
        for (a, b) in exceptions {
            for (r, _) in [a, b] {
                if r == 0 || r > self.n {
                    return Err(bad(format!("ray {r} outside 1..={}", self.n)));
                }
            }
            if map.insert(a, b).is_some() {
                return Err(bad(format!("point {}:{} mapped twice", a.0, a.1)));
            }
        }
        let raw = HoughtonElem {
            offsets,
            exceptions: map,
        };
        let window = raw.bound();
        let mut seen = HashSet::new();
        for r in 1..=self.n {
            for k in 0..window {
                let image = raw
                    .eval((r, k))
                    .ok_or_else(|| bad(format!("{r}:{k} is translated off its ray")))?;
                let limit = window as i64 + raw.offsets[image.0 as usize - 1];
                if image.1 as i64 >= limit || !seen.insert(image) {
                    return Err(bad("the map is not a bijection".into()));
                }
            }
        }
        let offsets = raw.offsets.clone();
        Ok(HoughtonElem::from_window(offsets, window, |p| {
            raw.eval(p).unwrap()
        }))
    }

    /// The generator `g_i` (`2 ≤ i ≤ n`): shifts ray 1 towards its origin,
    /// hands `(1,0)` to `(i,0)` and shifts ray `i` outwards.
    pub fn generator(&self, i: u32) -> Result<HoughtonElem> {
        if i < 2 || i > self.n {
            return Err(Error::InvalidGroupElement(format!(
                "no generator g{i} in H_{}",
                self.n
            )));
        }
        let mut offsets = vec![0; self.n as usize];
        offsets[0] = -1;
        offsets[i as usize - 1] = 1;
        self.element(offsets, [((1, 0), (i, 0))])
    }

    fn swap01(&self) -> HoughtonElem {
        HoughtonElem::transposition((1, 0), (1, 1), self.n)
    }

    fn point(&self, color: &Color) -> Result<Point> {
        match color {
            Color::Ray(r, k) if (1..=self.n).contains(r) => Ok((*r, *k)),
            _ => Err(Error::ColorNotInSet(color.to_string())),
        }
    }
}

impl GroupAction for HoughtonAction {
    type Elem = HoughtonElem;

    fn name(&self) -> String {
        format!("houghton:{}", self.n)
    }

    fn identity(&self) -> HoughtonElem {
        HoughtonElem {
            offsets: vec![0; self.n as usize],
            exceptions: BTreeMap::new(),
        }
    }

    fn multiply(&self, a: &HoughtonElem, b: &HoughtonElem) -> HoughtonElem {
        let offsets = a
            .offsets
            .iter()
            .zip(&b.offsets)
            .map(|(x, y)| x + y)
            .collect();
        let window = a.bound() + b.bound();
        HoughtonElem::from_window(offsets, window, |p| {
            a.eval(b.eval(p).expect("valid element"))
                .expect("valid element")
        })
    }

    fn invert(&self, a: &HoughtonElem) -> HoughtonElem {
        let window = a.bound();
        let mut back = BTreeMap::new();
        for r in 1..=self.n {
            for k in 0..window {
                back.insert(a.eval((r, k)).expect("valid element"), (r, k));
            }
        }
        let offsets: Vec<i64> = a.offsets.iter().map(|t| -t).collect();
        let inverse = HoughtonElem {
            offsets: offsets.clone(),
            exceptions: BTreeMap::new(),
        };
        let reach = window
            + a.offsets
                .iter()
                .map(|t| t.unsigned_abs())
                .max()
                .unwrap_or(0);
        HoughtonElem::from_window(offsets, reach, |p| {
            back.get(&p)
                .copied()
                .unwrap_or_else(|| inverse.translate(p).expect("tail point"))
        })
    }

    fn contains(&self, color: &Color) -> bool {
        self.point(color).is_ok()
    }

    fn apply(&self, g: &HoughtonElem, color: &Color) -> Result<Color> {
        let p = self.point(color)?;
        let (r, k) = g.eval(p).ok_or_else(|| {
            Error::InvalidGroupElement("element moves a point off its ray".into())
        })?;
        Ok(Color::Ray(r, k))
    }

    fn orbit_representatives(&self) -> Option<Vec<Color>> {
        Some(vec![Color::Ray(1, 0)])
    }

    fn generators(&self) -> Option<Vec<HoughtonElem>> {
        let mut gens: Vec<HoughtonElem> =
            (2..=self.n).map(|i| self.generator(i).unwrap()).collect();
        if self.n <= 2 {
            gens.push(self.swap01());
        }
        Some(gens)
    }

    fn format_elem(&self, g: &HoughtonElem) -> String {
        let map: Vec<String> = g
            .exceptions
            .iter()
            .map(|(a, b)| format!("{}:{}>{}:{}", a.0, a.1, b.0, b.1))
            .collect();
        let offsets: Vec<String> = g.offsets.iter().map(i64::to_string).collect();
        format!("H{{{}; {}; {}}}", self.n, map.join(" "), offsets.join(" "))
    }

    /// Accepts `H{n; a:b>c:d ...; t1 ... tn}`, `e`, `t` (the swap of `1:0`
    /// and `1:1`) or a generator `g<i>`, with an optional power `^k`.
    fn parse_elem(&self, text: &str) -> Result<HoughtonElem> {
        let (base, k) = split_power(text);
        let g = if base == "e" {
            self.identity()
        } else if base == "t" {
            self.swap01()
        } else if let Some(i) = base.strip_prefix('g') {
            let i = i
                .parse()
                .map_err(|_| Error::InvalidGroupElement(format!("bad generator {base:?}")))?;
            self.generator(i)?
        } else {
            self.parse_full(base)?
        };
        Ok(power(self, &g, k))
    }

    fn color_pool(&self) -> Vec<Color> {
        (1..=self.n)
            .flat_map(|r| (0..2).map(move |k| Color::Ray(r, k)))
            .collect()
    }

    fn random_elem(&self, rng: &mut dyn RngCore) -> HoughtonElem {
        let gens = self.generators().unwrap();
        let mut g = self.identity();
        for _ in 0..rng.gen_range(0..=2) {
            let x = &gens[rng.gen_range(0..gens.len())];
            let x = if rng.gen_bool(0.5) {
                self.invert(x)
            } else {
                x.clone()
            };
            g = self.multiply(&g, &x);
        }
        if rng.gen_bool(0.5) {
            let a = (rng.gen_range(1..=self.n), rng.gen_range(0..3));
            let b = (rng.gen_range(1..=self.n), rng.gen_range(0..3));
            if a != b {
                g = self.multiply(&g, &HoughtonElem::transposition(a, b, self.n));
            }
        }
        g
    }
}

impl HoughtonAction {
    fn parse_full(&self, text: &str) -> Result<HoughtonElem> {
        let bad = |msg: &str| Error::InvalidGroupElement(format!("{msg} in {text:?}"));
        let body = text
            .strip_prefix("H{")
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| bad("expected `H{n; map; offsets}`"))?;
        let parts: Vec<&str> = body.split(';').collect();
        let [n, map, offsets] = parts.as_slice() else {
            return Err(bad("expected three `;`-separated fields"));
        };
        let n: u32 = n.trim().parse().map_err(|_| bad("bad ray count"))?;
        if n != self.n {
            return Err(Error::ActionMismatch);
        }
        let point = |s: &str| -> Result<Point> {
            let (r, k) = s.split_once(':').ok_or_else(|| bad("expected ray:index"))?;
            Ok((
                r.trim().parse().map_err(|_| bad("bad ray"))?,
                k.trim().parse().map_err(|_| bad("bad index"))?,
            ))
        };
        let exceptions = map
            .split_whitespace()
            .map(|entry| {
                let (a, b) = entry.split_once('>').ok_or_else(|| bad("expected a>b"))?;
                Ok((point(a)?, point(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let offsets = offsets
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad offset")))
            .collect::<Result<Vec<i64>>>()?;
        self.element(offsets, exceptions)
    }
}
