use std::collections::BTreeSet;
use std::fmt;

use crate::action::GroupAction;
use crate::cantor::{BinaryWord, Brick, Color, PointPrefix};
use crate::element::{Element, Piece};
use crate::error::{Error, Result};

/// `ι_∅(γ) = τ_γ`.
pub fn iota0<A: GroupAction>(action: &A, g: A::Elem) -> Element<A> {
    Element::twist(action.clone(), g)
}

/// `ι₁ˢ(γ) = x_s⁻¹ (id₁ ⊕ τ_γ) x_s`: the twist by `γ` on the half where the
/// `s` coordinate starts with 1, the identity on the other half.
pub fn iota1<A: GroupAction>(action: &A, s: Color, g: A::Elem) -> Result<Element<A>> {
    action.check_color(&s)?;
    let (lo, hi) = Brick::whole(1).split(s);
    Element::new(
        action.clone(),
        1,
        1,
        vec![
            Piece {
                domain: lo.clone(),
                range: lo,
                twist: action.identity(),
            },
            Piece {
                domain: hi.clone(),
                range: hi,
                twist: g,
            },
        ],
    )
}

fn check_group_element<A: GroupAction>(h: &Element<A>) -> Result<()> {
    if h.rank() != 1 || h.corank() != 1 {
        return Err(Error::Precondition(format!(
            "expected an element of SV_G, found rank {} and corank {}",
            h.rank(),
            h.corank()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum FactorAtom<A: GroupAction> {
    /// An untwisted element.
    Sv(Element<A>),
    /// `ι₁ˢ(γ)` for the factorization color `s`.
    Iota(A::Elem),
}

/// A product of atoms, read left to right as a composite (the last atom acts
/// first).
#[derive(Clone, Debug, PartialEq)]
pub struct FactorWord<A: GroupAction> {
    pub action: A,
    pub color: Color,
    pub atoms: Vec<FactorAtom<A>>,
}

impl<A: GroupAction> FactorWord<A> {
    pub fn evaluate(&self) -> Result<Element<A>> {
        let mut acc = Element::identity(self.action.clone(), 1);
        for atom in self.atoms.iter().rev() {
            let e = match atom {
                FactorAtom::Sv(e) => e.clone(),
                FactorAtom::Iota(g) => iota1(&self.action, self.color, g.clone())?,
            };
            acc = e.compose(&acc)?;
        }
        Ok(acc)
    }
}

impl<A: GroupAction> fmt::Display for FactorWord<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("id[1]");
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" • ")?;
            }
            match atom {
                FactorAtom::Sv(e) => write!(f, "{e}")?,
                FactorAtom::Iota(g) => {
                    write!(f, "iota1[{},{}]", self.color, self.action.format_elem(g))?
                }
            }
        }
        Ok(())
    }
}

/// The untwisted element of `SV` sending `B_{s,1}` onto `target` and a
/// caterpillar partition of `B_{s,0}` onto `others`, pairing in order.
fn carrier<A: GroupAction>(
    action: &A,
    s: Color,
    target: &Brick,
    others: &[Brick],
) -> Result<Element<A>> {
    let (_, hi) = Brick::whole(1).split(s);
    let k = others.len();
    let mut filler = Vec::with_capacity(k);
    let mut word = BinaryWord::new().child(false);
    for _ in 1..k {
        filler.push(Brick::whole(1).with_word(s, word.child(true)));
        word = word.child(false);
    }
    filler.push(Brick::whole(1).with_word(s, word));
    filler.sort();
    let e = action.identity();
    let mut pieces = vec![Piece {
        domain: hi,
        range: target.clone(),
        twist: e.clone(),
    }];
    pieces.extend(filler.into_iter().zip(others).map(|(d, r)| Piece {
        domain: d,
        range: r.clone(),
        twist: e.clone(),
    }));
    Element::new(action.clone(), 1, 1, pieces)
}

/// Writes an element of `SV_G` as `v · ∏ a_i ι₁ˢ(γ_i) a_i⁻¹` with `v` and
/// every `a_i` untwisted, one conjugated twist per twisted domain brick.
pub fn factorize<A: GroupAction>(h: &Element<A>, s: Color) -> Result<FactorWord<A>> {
    check_group_element(h)?;
    let action = h.action();
    action.check_color(&s)?;
    let mut h = h.reduced();
    if h.pieces().len() == 1 {
        let p = &h.pieces()[0];
        let (lo, hi) = p.domain.split(s);
        let pieces = vec![
            Piece {
                range: p.push(action, &lo)?,
                domain: lo,
                twist: p.twist.clone(),
            },
            Piece {
                range: p.push(action, &hi)?,
                domain: hi,
                twist: p.twist.clone(),
            },
        ];
        h = Element::new(action.clone(), 1, 1, pieces)?;
    }
    let domains: Vec<Brick> = h.pieces().iter().map(|p| p.domain.clone()).collect();
    let identity = Element::identity(action.clone(), 1);
    let mut atoms = Vec::new();
    let mut u = identity.clone();
    for p in h.pieces() {
        if action.is_identity(&p.twist) {
            continue;
        }
        let others: Vec<Brick> = domains
            .iter()
            .filter(|b| **b != p.domain)
            .cloned()
            .collect();
        let a = carrier(action, s, &p.domain, &others)?;
        let local = a
            .compose(&iota1(action, s, p.twist.clone())?)?
            .compose(&a.inverse())?;
        u = u.compose(&local)?;
        if a.equals(&identity) {
            atoms.push(FactorAtom::Iota(p.twist.clone()));
        } else {
            atoms.push(FactorAtom::Sv(a.clone()));
            atoms.push(FactorAtom::Iota(p.twist.clone()));
            atoms.push(FactorAtom::Sv(a.inverse()));
        }
    }
    let v = h.compose(&u.inverse())?;
    debug_assert!(v.is_untwisted());
    if !v.equals(&identity) {
        atoms.insert(0, FactorAtom::Sv(v));
    }
    Ok(FactorWord {
        action: action.clone(),
        color: s,
        atoms,
    })
}

/// The graph on representative colors whose edges index the copies of `2V`
/// that generate `SV_G`: `{s₁, s_i}` for the other orbit representatives and
/// `{s₁, γ_j s₁}` for each generator moving `s₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingGraph {
    pub vertices: BTreeSet<Color>,
    pub edges: BTreeSet<(Color, Color)>,
}

pub fn generating_graph<A: GroupAction>(action: &A) -> Result<GeneratingGraph> {
    let reps = action
        .orbit_representatives()
        .ok_or_else(|| Error::Precondition("action has no finite orbit representatives".into()))?;
    let gens = action
        .generators()
        .ok_or_else(|| Error::Precondition("action has no finite generating set".into()))?;
    let s1 = reps[0];
    let mut vertices: BTreeSet<Color> = reps.iter().copied().collect();
    let mut edges = BTreeSet::new();
    let mut add = |a: Color, b: Color, vertices: &mut BTreeSet<Color>| {
        vertices.insert(b);
        edges.insert(if a <= b { (a, b) } else { (b, a) });
    };
    for &si in &reps[1..] {
        add(s1, si, &mut vertices);
    }
    for g in &gens {
        let image = action.apply(g, &s1)?;
        if image != s1 {
            add(s1, image, &mut vertices);
        }
    }
    Ok(GeneratingGraph { vertices, edges })
}

/// The germinal twist at the basepoint (all zeros by default).
pub fn rho<A: GroupAction>(h: &Element<A>, basepoint: Option<&PointPrefix>) -> Result<A::Elem> {
    check_group_element(h)?;
    let zero = PointPrefix::zeros(1);
    h.germinal_twist(basepoint.unwrap_or(&zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Cyclic2, Cyclic2Action, ThompsonFAction, TrivialAction};

    #[test]
    fn iota_embeddings() {
        let a = Cyclic2Action;
        assert_eq!(iota0(&a, Cyclic2::E), Element::identity(a, 1));
        let i1 = iota1(&a, Color::Index(1), Cyclic2::S).unwrap();
        assert_eq!(
            i1.germinal_twist_set(),
            [Cyclic2::E, Cyclic2::S].into_iter().collect()
        );
        let hi = PointPrefix::new(1, [(Color::Index(1), "1".parse().unwrap())]);
        assert_eq!(i1.germinal_twist(&hi).unwrap(), Cyclic2::S);
        assert_eq!(
            i1.germinal_twist(&PointPrefix::zeros(1)).unwrap(),
            Cyclic2::E
        );
        assert_eq!(i1.compose(&i1).unwrap(), Element::identity(a, 1));
    }

    #[test]
    fn factorize_small_cases() {
        let a = Cyclic2Action;
        let s = Color::Index(1);
        let split = Element::simple_split(a, s).unwrap();
        let sv = split
            .inverse()
            .compose(&Element::permutation(a, &[2, 1]).unwrap())
            .unwrap()
            .compose(&split)
            .unwrap();
        let fw = factorize(&sv, s).unwrap();
        assert_eq!(fw.atoms.len(), 1);
        assert_eq!(fw.evaluate().unwrap(), sv);

        let i1 = iota1(&a, s, Cyclic2::S).unwrap();
        let fw = factorize(&i1, s).unwrap();
        assert!(fw.atoms.len() <= 3);
        assert_eq!(fw.evaluate().unwrap(), i1);

        let tau = iota0(&a, Cyclic2::S);
        let fw = factorize(&tau, s).unwrap();
        assert_eq!(fw.evaluate().unwrap(), tau);
        assert!(factorize(&split, s).is_err());
    }

    #[test]
    fn generating_graphs() {
        let g = generating_graph(&TrivialAction::new(3).unwrap()).unwrap();
        let star: BTreeSet<_> = [
            (Color::Index(1), Color::Index(2)),
            (Color::Index(1), Color::Index(3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(g.edges, star);
        let g = generating_graph(&Cyclic2Action).unwrap();
        assert_eq!(g.edges.len(), 1);
        let g = generating_graph(&ThompsonFAction).unwrap();
        let half = Color::Dyadic("1/2".parse().unwrap());
        let quarter = Color::Dyadic("1/4".parse().unwrap());
        assert_eq!(g.edges, [(quarter, half)].into_iter().collect());
    }

    #[test]
    fn rho_of_twist() {
        let a = Cyclic2Action;
        assert_eq!(rho(&iota0(&a, Cyclic2::S), None).unwrap(), Cyclic2::S);
        assert!(rho(&Element::simple_split(a, Color::Index(1)).unwrap(), None).is_err());
    }
}
