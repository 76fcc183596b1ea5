use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::Complex;
use crate::action::{GroupAction, TrivialAction};
use crate::cantor::{Brick, Color, Partition};
use crate::element::{Element, Forest};
use crate::error::{Error, Result};
use crate::par::Exec;

/// Vertex counts up to this size are cross-checked against coset equality.
const CROSS_CHECK_LIMIT: usize = 40;

/// A vertex `[f⁻¹g]` of `E_m` for trivial `G`. Each root lists the cubes of
/// `C^S(m)` it receives together with the elementary brick of the root each
/// cube is mapped onto. Roots are sorted by their smallest cube, which makes
/// the form unique per coset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EmVertex {
    roots: Vec<Vec<(usize, Brick)>>,
}

impl EmVertex {
    /// Canonicalizes root blocks given as `(cube, brick)` lists.
    pub fn new(roots: Vec<Vec<(usize, Brick)>>) -> Result<Self> {
        let mut roots: Vec<Vec<(usize, Brick)>> = roots
            .into_iter()
            .map(|mut r| {
                for (_, b) in r.iter_mut() {
                    *b = b.with_cube(1);
                }
                r.sort();
                r
            })
            .collect();
        roots.sort();
        let cubes: Vec<usize> = roots.iter().flatten().map(|(c, _)| *c).collect();
        let mut sorted = cubes.clone();
        sorted.sort_unstable();
        if sorted != (1..=cubes.len()).collect::<Vec<_>>() {
            return Err(Error::Precondition(
                "root blocks must partition the cubes 1..=m".into(),
            ));
        }
        for r in &roots {
            let bricks = Partition::new(1, r.iter().map(|(_, b)| b.clone()).collect());
            if r.iter().any(|(_, b)| !b.is_elementary()) || !bricks.is_dyadic()? {
                return Err(Error::Precondition(
                    "root leaves must form an elementary dyadic partition".into(),
                ));
            }
        }
        Ok(EmVertex { roots })
    }

    pub fn roots(&self) -> &[Vec<(usize, Brick)>] {
        &self.roots
    }

    /// `m`, the number of leaves.
    pub fn rank(&self) -> usize {
        self.roots.iter().map(Vec::len).sum()
    }

    /// `φ`, the number of roots.
    pub fn phi(&self) -> usize {
        self.roots.len()
    }

    pub fn weights(&self) -> Vec<usize> {
        self.roots.iter().map(Vec::len).collect()
    }

    /// `μ_k` at index `k − 1` for `k = 1..=m`.
    pub fn weight_multiplicities(&self) -> Vec<usize> {
        let mut mu = vec![0; self.rank()];
        for w in self.weights() {
            mu[w - 1] += 1;
        }
        mu
    }

    /// Roots of weight at least 3.
    pub fn fat_roots(&self) -> usize {
        self.weights().into_iter().filter(|&w| w >= 3).count()
    }

    pub fn is_very_elementary(&self) -> bool {
        self.fat_roots() == 0
    }

    /// The forest `f` with `f⁻¹` equal to the vertex representative: leaf
    /// `i` is the brick receiving cube `i`.
    pub fn forest<A: GroupAction>(&self, action: &A) -> Result<Forest<A>> {
        let mut leaves = vec![Brick::whole(1); self.rank()];
        for (r, root) in self.roots.iter().enumerate() {
            for (cube, b) in root {
                leaves[cube - 1] = b.with_cube(r + 1);
            }
        }
        Forest::from_leaves(action.clone(), self.phi(), leaves)
    }

    /// The representative `f⁻¹ : C^S(m) → C^S(φ)`.
    pub fn to_element<A: GroupAction>(&self, action: &A) -> Result<Element<A>> {
        Ok(self.forest(action)?.element().inverse())
    }

    /// `self ≤ other` in the coset order: every root of `other` collects
    /// cubes from a single root of `self` through a common prefix brick, and
    /// these prefix bricks form a dyadic partition of each root of `self`.
    pub fn leq(&self, other: &EmVertex) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        let mut place = vec![(0, Brick::whole(1)); self.rank()];
        for (r, root) in self.roots.iter().enumerate() {
            for (cube, b) in root {
                place[cube - 1] = (r, b.clone());
            }
        }
        let mut prefixes: Vec<Vec<Brick>> = vec![Vec::new(); self.phi()];
        for root in &other.roots {
            let r = place[root[0].0 - 1].0;
            let mut common: Option<Brick> = None;
            for (cube, b) in root {
                let (r2, coarse) = &place[cube - 1];
                if *r2 != r {
                    return false;
                }
                let Some(d) = strip_tail(coarse, b) else {
                    return false;
                };
                match &common {
                    None => common = Some(d),
                    Some(c) if *c == d => {}
                    Some(_) => return false,
                }
            }
            prefixes[r].extend(common);
        }
        prefixes
            .into_iter()
            .all(|p| Partition::new(1, p).is_dyadic_unchecked())
    }
}

/// The brick `D` with `coarse = D · fine` coordinatewise.
fn strip_tail(coarse: &Brick, fine: &Brick) -> Option<Brick> {
    let colors: BTreeSet<&Color> = coarse.colors().chain(fine.colors()).collect();
    let mut entries = Vec::new();
    for c in colors {
        entries.push((*c, coarse.word(c).strip_suffix(fine.word(c))?));
    }
    Some(Brick::new(1, entries))
}

/// `(1:1=0,2:1=1)(3:*)`: roots in order, each leaf as `cube:brick`.
impl fmt::Display for EmVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for root in &self.roots {
            f.write_str("(")?;
            for (i, (cube, b)) in root.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{cube}:")?;
                if b.is_whole() {
                    f.write_str("*")?;
                } else {
                    let parts: Vec<String> = b.entries().map(|(c, w)| format!("{c}={w}")).collect();
                    f.write_str(&parts.join(";"))?;
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `(μ_m, …, μ_3, φ)`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MorseValue {
    pub mus: Vec<usize>,
    pub phi: usize,
}

impl MorseValue {
    /// `(0, …, 0, m − 1)`, the value cutting out `VE_m`.
    pub fn very_elementary_bound(m: usize) -> Self {
        MorseValue {
            mus: vec![0; m.saturating_sub(2)],
            phi: m.saturating_sub(1),
        }
    }
}

impl fmt::Display for MorseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mus
            .iter()
            .chain([&self.phi])
            .map(usize::to_string)
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn morse_value(v: &EmVertex, m: usize) -> MorseValue {
    let mu = v.weight_multiplicities();
    MorseValue {
        mus: (3..=m)
            .rev()
            .map(|k| mu.get(k - 1).copied().unwrap_or(0))
            .collect(),
        phi: v.phi(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Refuse to build complexes with more vertices than this.
    pub cap: usize,
    /// Only build simplices up to this dimension.
    pub max_dim: Option<usize>,
    pub exec: Exec,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            cap: 200_000,
            max_dim: None,
            exec: Exec::default(),
        }
    }
}

/// A built `E_m` or `VE_m` with its vertices and their Morse values.
#[derive(Clone, Debug)]
pub struct EmComplex {
    pub m: usize,
    pub vertices: Vec<EmVertex>,
    pub values: Vec<MorseValue>,
    pub complex: Complex,
}

impl EmComplex {
    /// The subcomplex induced on vertices with Morse value at most `bound`.
    pub fn sublevel(&self, bound: &MorseValue) -> EmComplex {
        let keep: Vec<bool> = self.values.iter().map(|v| v <= bound).collect();
        let pick = |i: &usize| keep[*i];
        let idx: Vec<usize> = (0..self.vertices.len()).filter(pick).collect();
        EmComplex {
            m: self.m,
            vertices: idx.iter().map(|&i| self.vertices[i].clone()).collect(),
            values: idx.iter().map(|&i| self.values[i].clone()).collect(),
            complex: self.complex.induced(&keep),
        }
    }

    /// The largest Morse value present.
    pub fn max_value(&self) -> Option<&MorseValue> {
        self.values.iter().max()
    }
}

/// Elementary dyadic partitions of one cube, grouped by size.
fn elementary_partitions(colors: &[Color]) -> Vec<Vec<Vec<Brick>>> {
    let mut by_size: Vec<Vec<Vec<Brick>>> = vec![Vec::new(); (1usize << colors.len()) + 1];
    let mut seen: BTreeSet<Vec<Brick>> = BTreeSet::new();
    let mut frontier = vec![vec![Brick::whole(1)]];
    seen.insert(frontier[0].clone());
    while let Some(p) = frontier.pop() {
        for (i, b) in p.iter().enumerate() {
            for c in colors {
                if !b.word(c).is_empty() {
                    continue;
                }
                let (lo, hi) = b.split(*c);
                let mut next: Vec<Brick> = p
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, x)| x.clone())
                    .collect();
                next.push(lo);
                next.push(hi);
                next.sort();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    for p in seen {
        let n = p.len();
        by_size[n].push(p);
    }
    by_size
}

fn permutations(items: &[Brick]) -> Vec<Vec<Brick>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

struct Enumerator<'a> {
    m: usize,
    /// Ordered brick lists per block size.
    labeled: Vec<Vec<Vec<Brick>>>,
    cap: usize,
    out: &'a mut Vec<EmVertex>,
}

impl Enumerator<'_> {
    /// Set partitions of `1..=m` by restricted growth, then every labeling
    /// of each block.
    fn blocks(&mut self, next: usize, blocks: &mut Vec<Vec<usize>>) -> Result<()> {
        if next > self.m {
            if blocks.len() == self.m {
                return Ok(());
            }
            if blocks
                .iter()
                .any(|b| self.labeled.get(b.len()).is_none_or(Vec::is_empty))
            {
                return Ok(());
            }
            let mut roots = Vec::with_capacity(blocks.len());
            return self.label(blocks, 0, &mut roots);
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            self.blocks(next + 1, blocks)?;
            blocks[i].pop();
        }
        blocks.push(vec![next]);
        self.blocks(next + 1, blocks)?;
        blocks.pop();
        Ok(())
    }

    fn label(
        &mut self,
        blocks: &[Vec<usize>],
        k: usize,
        roots: &mut Vec<Vec<(usize, Brick)>>,
    ) -> Result<()> {
        if k == blocks.len() {
            if self.out.len() >= self.cap {
                return Err(Error::ResourceLimit {
                    found: self.out.len() + 1,
                    cap: self.cap,
                });
            }
            self.out.push(EmVertex {
                roots: roots.clone(),
            });
            return Ok(());
        }
        let block = &blocks[k];
        for bricks in self.labeled[block.len()].clone() {
            roots.push(block.iter().copied().zip(bricks).collect());
            self.label(blocks, k + 1, roots)?;
            roots.pop();
        }
        Ok(())
    }
}

fn colors_of(action: &TrivialAction) -> Vec<Color> {
    action.finite_colors().unwrap_or_default()
}

/// Every `w > v` below `[id_m]`: each root of `v` is cut along an elementary
/// dyadic partition coarser than its leaves.
fn up_set(v: &EmVertex, partitions: &[Vec<Brick>]) -> Vec<EmVertex> {
    let options: Vec<Vec<Vec<Vec<(usize, Brick)>>>> = v
        .roots
        .iter()
        .map(|root| {
            partitions
                .iter()
                .filter_map(|pieces| {
                    let mut split: Vec<Vec<(usize, Brick)>> = vec![Vec::new(); pieces.len()];
                    for (cube, b) in root {
                        let k = pieces.iter().position(|d| b.is_subset_of(d))?;
                        let d = &pieces[k];
                        let entries = b.entries().map(|(c, w)| {
                            (*c, w.strip_prefix(d.word(c)).expect("brick inside piece"))
                        });
                        split[k].push((*cube, Brick::new(1, entries)));
                    }
                    Some(split.into_iter().filter(|s| !s.is_empty()).collect())
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; options.len()];
    loop {
        let mut roots: Vec<Vec<(usize, Brick)>> = Vec::new();
        for (r, &k) in choice.iter().enumerate() {
            roots.extend(options[r][k].iter().cloned());
        }
        if roots.len() > v.phi() && roots.len() < v.rank() {
            for root in &mut roots {
                root.sort();
            }
            roots.sort();
            out.push(EmVertex { roots });
        }
        let mut r = 0;
        loop {
            if r == choice.len() {
                return out;
            }
            choice[r] += 1;
            if choice[r] < options[r].len() {
                break;
            }
            choice[r] = 0;
            r += 1;
        }
    }
}

fn build(m: usize, action: &TrivialAction, opts: &BuildOptions, very: bool) -> Result<EmComplex> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let colors = colors_of(action);
    let by_size = elementary_partitions(&colors);
    let max_block = if very { 2 } else { by_size.len() - 1 };
    let labeled: Vec<Vec<Vec<Brick>>> = by_size
        .iter()
        .enumerate()
        .map(|(w, ps)| {
            if w > max_block || w > m {
                Vec::new()
            } else {
                ps.iter().flat_map(|p| permutations(p)).collect()
            }
        })
        .collect();
    let mut vertices = Vec::new();
    Enumerator {
        m,
        labeled,
        cap: opts.cap,
        out: &mut vertices,
    }
    .blocks(1, &mut Vec::new())?;
    vertices.sort();
    if vertices.len() <= CROSS_CHECK_LIMIT {
        cross_check(action, &vertices)?;
    }
    let index: HashMap<&EmVertex, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let partitions: Vec<Vec<Brick>> = by_size.iter().flatten().cloned().collect();
    let above: Vec<Vec<usize>> = opts.exec.map(&vertices, |v| {
        up_set(v, &partitions)
            .iter()
            .filter_map(|w| index.get(w).copied())
            .collect()
    });
    let mut higher = vec![Vec::new(); vertices.len()];
    for (i, ups) in above.into_iter().enumerate() {
        for j in ups {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            higher[a].push(b);
        }
    }
    for h in &mut higher {
        h.sort_unstable();
        h.dedup();
    }
    let labels = vertices.iter().map(EmVertex::to_string).collect();
    let complex = Complex::flag(labels, &higher, opts.max_dim);
    let values = vertices.iter().map(|v| morse_value(v, m)).collect();
    Ok(EmComplex {
        m,
        vertices,
        values,
        complex,
    })
}

/// Distinct canonical forms must be distinct cosets.
fn cross_check(action: &TrivialAction, vertices: &[EmVertex]) -> Result<()> {
    let elements: Vec<Element<TrivialAction>> = vertices
        .iter()
        .map(|v| v.to_element(action))
        .collect::<Result<_>>()?;
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if elements[i].corank() == elements[j].corank() && elements[i].coset_eq(&elements[j])? {
                return Err(Error::Canonicalization(format!(
                    "{} and {} are the same coset",
                    vertices[i], vertices[j]
                )));
            }
        }
    }
    Ok(())
}

/// `E_m` for a finite color set and trivial twist group.
pub fn build_e(m: usize, action: &TrivialAction, opts: &BuildOptions) -> Result<EmComplex> {
    build(m, action, opts, false)
}

/// `VE_m`, spanned by the vertices with very elementary forests.
pub fn build_ve(m: usize, action: &TrivialAction, opts: &BuildOptions) -> Result<EmComplex> {
    build(m, action, opts, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology;

    fn trivial(k: u32) -> TrivialAction {
        TrivialAction::new(k).unwrap()
    }

    #[test]
    fn smallest_ve_complexes() {
        let opts = BuildOptions::default();
        // Cube 1 onto either half of the split, cube 2 onto the other.
        let ve = build_ve(2, &trivial(1), &opts).unwrap();
        assert_eq!(ve.vertices.len(), 2);
        assert_eq!(ve.complex.count(1), 0);
        let ve = build_ve(2, &trivial(2), &opts).unwrap();
        assert_eq!(ve.vertices.len(), 4);
        assert_eq!(ve.complex.count(1), 0);
        assert!(build_ve(1, &trivial(2), &opts).unwrap().vertices.is_empty());
    }

    #[test]
    fn vertex_counts_match_generating_function() {
        // exp(x + 2x² + 4x³ + x⁴) for two colors, minus the identity.
        let opts = BuildOptions::default();
        let expected = [(2, 4), (3, 36), (4, 192)];
        for (m, n) in expected {
            assert_eq!(build_e(m, &trivial(2), &opts).unwrap().vertices.len(), n);
        }
        assert_eq!(build_ve(4, &trivial(2), &opts).unwrap().vertices.len(), 72);
    }

    #[test]
    fn combinatorial_order_matches_coset_order() {
        for (m, k) in [(3, 1), (3, 2), (4, 1)] {
            let a = trivial(k);
            let e = build_e(m, &a, &BuildOptions::default()).unwrap();
            let elements: Vec<_> = e
                .vertices
                .iter()
                .map(|v| v.to_element(&a).unwrap())
                .collect();
            let edges: BTreeSet<(usize, usize)> = e
                .complex
                .simplices(1)
                .iter()
                .map(|s| (s[0], s[1]))
                .collect();
            for i in 0..elements.len() {
                for j in 0..elements.len() {
                    if i == j {
                        continue;
                    }
                    let leq = elements[i].coset_leq(&elements[j]).unwrap();
                    assert_eq!(
                        leq,
                        e.vertices[i].leq(&e.vertices[j]),
                        "{} vs {}",
                        e.vertices[i],
                        e.vertices[j]
                    );
                    if leq {
                        assert!(edges.contains(&(i.min(j), i.max(j))));
                    }
                }
            }
            for &(i, j) in &edges {
                assert!(e.vertices[i].leq(&e.vertices[j]) || e.vertices[j].leq(&e.vertices[i]));
            }
        }
    }

    #[test]
    fn every_vertex_lies_below_the_identity() {
        let a = trivial(2);
        let e = build_e(3, &a, &BuildOptions::default()).unwrap();
        let id = Element::identity(a, 3);
        for v in &e.vertices {
            let h = v.to_element(&a).unwrap();
            assert!(h.coset_leq(&id).unwrap());
            assert!(h.is_elementary_interval(&id).unwrap());
        }
    }

    #[test]
    fn weight_sums() {
        let e = build_e(5, &trivial(2), &BuildOptions::default()).unwrap();
        for v in &e.vertices {
            let mu = v.weight_multiplicities();
            let total: usize = mu.iter().enumerate().map(|(k, n)| (k + 1) * n).sum();
            assert_eq!(total, 5);
            assert_eq!(mu.iter().sum::<usize>(), v.phi());
            let forest = v.forest(&trivial(2)).unwrap();
            assert_eq!(forest.weight_multiplicities(5).unwrap(), mu);
        }
    }

    #[test]
    fn morse_values() {
        let v = EmVertex::new(vec![(1..=4)
            .zip([
                "B[1]{1=0, 2=0}",
                "B[1]{1=0, 2=1}",
                "B[1]{1=1, 2=0}",
                "B[1]{1=1, 2=1}",
            ])
            .map(|(c, b)| (c, b.parse().unwrap()))
            .collect()])
        .unwrap();
        let mv = morse_value(&v, 4);
        assert_eq!(
            mv,
            MorseValue {
                mus: vec![1, 0],
                phi: 1
            }
        );
        assert_eq!(v.fat_roots(), 1);
        let e = build_e(4, &trivial(2), &BuildOptions::default()).unwrap();
        for (v, mv) in e.vertices.iter().zip(&e.values) {
            assert_eq!(v.is_very_elementary(), mv.mus.iter().all(|&x| x == 0));
            assert_eq!(v.fat_roots() > 0, v.weights().iter().any(|&w| w >= 3));
        }
    }

    #[test]
    fn sublevels() {
        let a = trivial(2);
        let opts = BuildOptions::default();
        let e = build_e(4, &a, &opts).unwrap();
        let ve = build_ve(4, &a, &opts).unwrap();
        assert_eq!(
            e.sublevel(&MorseValue::very_elementary_bound(4)).complex,
            ve.complex
        );
        assert_eq!(e.sublevel(e.max_value().unwrap()).complex, e.complex);
        let below = MorseValue {
            mus: vec![0, 0],
            phi: 0,
        };
        assert!(e.sublevel(&below).complex.is_empty());
        let mid = MorseValue {
            mus: vec![0, 1],
            phi: 1,
        };
        let s1 = e.sublevel(&MorseValue::very_elementary_bound(4));
        let s2 = e.sublevel(&mid);
        assert!(s1.vertices.iter().all(|v| s2.vertices.contains(v)));
        assert!(s2.vertices.len() < e.vertices.len());
    }

    #[test]
    fn ve5_is_connected() {
        for k in [1, 2] {
            let opts = BuildOptions {
                max_dim: Some(1),
                ..BuildOptions::default()
            };
            let ve = build_ve(5, &trivial(k), &opts).unwrap();
            assert!(homology(&ve.complex, 0).unwrap()[0].is_trivial());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let opts = BuildOptions {
            cap: 10,
            ..BuildOptions::default()
        };
        assert!(matches!(
            build_e(4, &trivial(2), &opts),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn invalid_vertices_rejected() {
        let b: Brick = "B[1]{1=0}".parse().unwrap();
        assert!(EmVertex::new(vec![vec![(1, b.clone())], vec![(2, b)]]).is_err());
    }
}
