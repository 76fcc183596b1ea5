//! Finite simplicial complexes: matching complexes of complete graphs, the
//! descending-link complexes `VE_m ⊆ E_m`, and integral homology.

mod em;
mod homology;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use em::{build_e, build_ve, morse_value, BuildOptions, EmComplex, EmVertex, MorseValue};
pub use homology::{homology, homology_with, HomologyGroup};

/// `ν(k) = ⌊(k−2)/3⌋`.
pub fn nu(k: i64) -> i64 {
    (k - 2).div_euclid(3)
}

/// The connectivity lower bound `min(ν(m/2)−2, ⌊log₂(m/2)⌋−2)` for `E_m`.
pub fn e_bound(m: usize) -> i64 {
    if m < 2 {
        return -2;
    }
    let m = m as i64;
    // ν(m/2) = ⌊(m/2 − 2)/3⌋ = ⌊(m − 4)/6⌋
    let nu_half = (m - 4).div_euclid(6);
    let log_half = (63 - m.leading_zeros() as i64) - 1;
    (nu_half - 2).min(log_half - 2)
}

/// A simplicial complex stored as its full list of simplices per dimension,
/// each simplex a sorted list of vertex indices. Complexes built up to a
/// dimension cap carry that cap as `skeleton`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    labels: Vec<String>,
    faces: Vec<Vec<Vec<usize>>>,
    skeleton: Option<usize>,
}

impl Complex {
    /// The downward closure of `facets`.
    pub fn from_facets(labels: Vec<String>, facets: &[Vec<usize>]) -> Result<Self> {
        let n = labels.len();
        let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for facet in facets {
            let mut s = facet.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.iter().any(|&v| v >= n) {
                return Err(Error::Precondition(format!("bad facet {facet:?}")));
            }
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect();
                let d = sub.len() - 1;
                if faces.len() <= d {
                    faces.resize_with(d + 1, BTreeSet::new);
                }
                faces[d].insert(sub);
            }
        }
        if faces.is_empty() {
            faces.push(BTreeSet::new());
        }
        faces[0].extend((0..n).map(|v| vec![v]));
        Ok(Complex {
            labels,
            faces: faces.into_iter().map(|s| s.into_iter().collect()).collect(),
            skeleton: None,
        })
    }

    /// The flag complex of a graph given by `higher[i]`, the neighbors of
    /// `i` with larger index, truncated above `max_dim` if given.
    pub(crate) fn flag(labels: Vec<String>, higher: &[Vec<usize>], max_dim: Option<usize>) -> Self {
        let n = labels.len();
        let mut faces: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
        fn grow(
            clique: &mut Vec<usize>,
            candidates: &[usize],
            higher: &[Vec<usize>],
            max_dim: Option<usize>,
            faces: &mut Vec<Vec<Vec<usize>>>,
        ) {
            for (k, &v) in candidates.iter().enumerate() {
                clique.push(v);
                let d = clique.len() - 1;
                if faces.len() <= d {
                    faces.push(Vec::new());
                }
                faces[d].push(clique.clone());
                if max_dim.is_none_or(|m| d < m) {
                    let next: Vec<usize> = candidates[k + 1..]
                        .iter()
                        .copied()
                        .filter(|u| higher[v].binary_search(u).is_ok())
                        .collect();
                    if !next.is_empty() {
                        grow(clique, &next, higher, max_dim, faces);
                    }
                }
                clique.pop();
            }
        }
        if max_dim != Some(0) {
            for v in 0..n {
                let mut clique = vec![v];
                grow(&mut clique, &higher[v], higher, max_dim, &mut faces);
            }
        }
        for level in &mut faces {
            level.sort_unstable();
        }
        Complex {
            labels,
            faces,
            skeleton: max_dim,
        }
    }

    /// The subcomplex induced on the vertices with `keep[v]`, relabeled in
    /// order.
    pub fn induced(&self, keep: &[bool]) -> Complex {
        let mut index = vec![usize::MAX; self.labels.len()];
        let mut labels = Vec::new();
        for (v, l) in self.labels.iter().enumerate() {
            if keep[v] {
                index[v] = labels.len();
                labels.push(l.clone());
            }
        }
        let mut faces: Vec<Vec<Vec<usize>>> = self
            .faces
            .iter()
            .map(|level| {
                level
                    .iter()
                    .filter(|s| s.iter().all(|&v| keep[v]))
                    .map(|s| s.iter().map(|&v| index[v]).collect())
                    .collect::<Vec<Vec<usize>>>()
            })
            .collect();
        while faces.len() > 1 && faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        Complex {
            labels,
            faces,
            skeleton: self.skeleton,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    /// The number of simplices of dimension `d`.
    pub fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, Vec::len)
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.faces.get(d).map_or(&[], Vec::as_slice)
    }

    /// The largest dimension present, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        (0..self.faces.len())
            .rev()
            .find(|&d| !self.faces[d].is_empty())
    }

    /// The dimension cap the complex was built with, if any.
    pub fn skeleton(&self) -> Option<usize> {
        self.skeleton
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Maximal simplices (within the stored skeleton).
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for d in (0..self.faces.len()).rev() {
            out.extend(
                self.faces[d]
                    .iter()
                    .filter(|s| !covered.contains(*s))
                    .cloned(),
            );
            covered.clear();
            if d > 0 {
                for s in &self.faces[d] {
                    for skip in 0..s.len() {
                        let mut face = s.clone();
                        face.remove(skip);
                        covered.insert(face);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Alternating count of simplices; meaningful for untruncated complexes.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, level)| {
                if d % 2 == 0 {
                    level.len() as i64
                } else {
                    -(level.len() as i64)
                }
            })
            .sum()
    }
}

/// Facet list, one simplex per line, vertices by label.
impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for facet in self.facets() {
            let names: Vec<&str> = facet.iter().map(|&v| self.labels[v].as_str()).collect();
            writeln!(f, "{}", names.join(" "))?;
        }
        Ok(())
    }
}

/// Vertices are the edges `{i, j}` of `K_m`; simplices are matchings.
pub fn matching_complex(m: usize) -> Result<Complex> {
    if m < 2 {
        return Err(Error::Precondition(format!(
            "matching complex needs m >= 2, found {m}"
        )));
    }
    let edges: Vec<(usize, usize)> = (1..=m)
        .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
        .collect();
    let higher: Vec<Vec<usize>> = edges
        .iter()
        .enumerate()
        .map(|(a, &(i, j))| {
            (a + 1..edges.len())
                .filter(|&b| {
                    let (k, l) = edges[b];
                    i != k && i != l && j != k && j != l
                })
                .collect()
        })
        .collect();
    let labels = edges.iter().map(|(i, j)| format!("{i}-{j}")).collect();
    Ok(Complex::flag(labels, &higher, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of `k`-matchings in `K_m`: `m! / ((m−2k)! k! 2^k)`.
    fn matchings(m: u64, k: u64) -> u64 {
        let fact = |n: u64| (1..=n).product::<u64>();
        if 2 * k > m {
            return 0;
        }
        fact(m) / (fact(m - 2 * k) * fact(k) * (1 << k))
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu(2), 0);
        assert_eq!(nu(5), 1);
        assert_eq!(nu(8), 2);
        assert_eq!(nu(4), 0);
        assert_eq!(nu(1), -1);
    }

    #[test]
    fn e_bound_values() {
        for m in 2..=6 {
            assert!(e_bound(m) < 0);
        }
        // m = 16: ν(8) − 2 = 0, log₂ 8 − 2 = 1
        assert_eq!(e_bound(16), 0);
    }

    #[test]
    fn small_matching_complexes() {
        let c = matching_complex(3).unwrap();
        assert_eq!((c.count(0), c.count(1)), (3, 0));
        let c = matching_complex(4).unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2)), (6, 3, 0));
        assert!(matching_complex(1).is_err());
    }

    #[test]
    fn matching_counts_match_formula() {
        for m in 2..=8 {
            let c = matching_complex(m as usize).unwrap();
            for k in 1..=m / 2 {
                assert_eq!(
                    c.count(k as usize - 1) as u64,
                    matchings(m, k),
                    "m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn facets_of_closure() {
        let labels = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let c = Complex::from_facets(labels, &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(c.facets(), vec![vec![0, 1, 2], vec![2, 3]]);
        assert_eq!(c.euler_characteristic(), 1);
        let sub = c.induced(&[true, true, false, true]);
        assert_eq!(sub.facets(), vec![vec![0, 1], vec![2]]);
        assert_eq!(sub.to_string(), "a b\nd\n");
    }

    #[test]
    fn flag_truncation() {
        let higher = vec![vec![1, 2], vec![2], vec![]];
        let labels = vec!["0".into(), "1".into(), "2".into()];
        let full = Complex::flag(labels.clone(), &higher, None);
        assert_eq!(full.count(2), 1);
        let cut = Complex::flag(labels, &higher, Some(1));
        assert_eq!((cut.count(1), cut.count(2)), (3, 0));
    }
}
