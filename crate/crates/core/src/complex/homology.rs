use std::collections::{HashMap, HashSet};
use std::fmt;

use super::Complex;
use crate::error::{Error, Result};
use crate::par::Exec;

/// `H̃_degree ≅ ℤ^rank ⊕ ⨁ ℤ/t` for `t` in `torsion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn overflow() -> Error {
    Error::Overflow("integer overflow in Smith normal form".into())
}

/// Rank and non-unit invariant factors of an integer matrix.
#[derive(Debug, Default, PartialEq, Eq)]
struct Smith {
    rank: usize,
    torsion: Vec<u64>,
}

/// Sparse matrix given by columns of `(row, value)` entries.
struct Sparse {
    cols: Vec<HashMap<usize, i128>>,
    rows: Vec<HashSet<usize>>,
}

impl Sparse {
    fn new(nrows: usize, columns: Vec<Vec<(usize, i128)>>) -> Self {
        let mut rows = vec![HashSet::new(); nrows];
        let cols = columns
            .into_iter()
            .enumerate()
            .map(|(c, entries)| {
                let mut col = HashMap::new();
                for (r, v) in entries {
                    if v != 0 {
                        col.insert(r, v);
                        rows[r].insert(c);
                    }
                }
                col
            })
            .collect();
        Sparse { cols, rows }
    }

    /// A unit entry of column `c`, preferring the sparsest row.
    fn unit_in(&self, c: usize) -> Option<usize> {
        self.cols[c]
            .iter()
            .filter(|(_, v)| v.abs() == 1)
            .map(|(&r, _)| r)
            .min_by_key(|&r| (self.rows[r].len(), r))
    }

    /// Pivots on the unit entry `(r, c)`: clears row `r` with column
    /// operations, then drops row `r` and column `c`.
    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        let p = self.cols[c][&r];
        let pivot_col: Vec<(usize, i128)> = self.cols[c].iter().map(|(&k, &v)| (k, v)).collect();
        let others: Vec<usize> = self.rows[r].iter().copied().filter(|&k| k != c).collect();
        for k in others {
            let factor = self.cols[k][&r] * p;
            for &(row, v) in &pivot_col {
                let entry = self.cols[k].entry(row).or_insert(0);
                *entry = v
                    .checked_mul(factor)
                    .and_then(|x| entry.checked_sub(x))
                    .ok_or_else(overflow)?;
                if *entry == 0 {
                    self.cols[k].remove(&row);
                    self.rows[row].remove(&k);
                } else {
                    self.rows[row].insert(k);
                }
            }
        }
        for &(row, _) in &pivot_col {
            self.rows[row].remove(&c);
        }
        self.cols[c].clear();
        Ok(())
    }
}

fn smith(nrows: usize, columns: Vec<Vec<(usize, i128)>>) -> Result<Smith> {
    let mut m = Sparse::new(nrows, columns);
    let mut rank = 0;
    loop {
        let mut progressed = false;
        for c in 0..m.cols.len() {
            if let Some(r) = m.unit_in(c) {
                m.pivot(r, c)?;
                rank += 1;
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    // Whatever is left has no unit entries; finish densely.
    let live_cols: Vec<usize> = (0..m.cols.len())
        .filter(|&c| !m.cols[c].is_empty())
        .collect();
    let live_rows: Vec<usize> = (0..nrows).filter(|&r| !m.rows[r].is_empty()).collect();
    if live_cols.is_empty() {
        return Ok(Smith {
            rank,
            torsion: Vec::new(),
        });
    }
    let row_pos: HashMap<usize, usize> =
        live_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut dense = vec![vec![0i128; live_cols.len()]; live_rows.len()];
    for (j, &c) in live_cols.iter().enumerate() {
        for (&r, &v) in &m.cols[c] {
            dense[row_pos[&r]][j] = v;
        }
    }
    let diagonal = dense_smith(dense)?;
    rank += diagonal.len();
    let mut torsion = Vec::new();
    for d in diagonal {
        if d != 1 {
            torsion.push(
                u64::try_from(d)
                    .map_err(|_| Error::Overflow("torsion coefficient exceeds u64".into()))?,
            );
        }
    }
    Ok(Smith { rank, torsion })
}

/// Nonzero invariant factors of a dense integer matrix, in divisibility
/// order.
fn dense_smith(mut a: Vec<Vec<i128>>) -> Result<Vec<i128>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block.
        let Some((pr, pc)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / p;
            if q != 0 {
                for j in t..cols {
                    a[i][j] = a[t][j]
                        .checked_mul(q)
                        .and_then(|x| a[i][j].checked_sub(x))
                        .ok_or_else(overflow)?;
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / p;
            if q != 0 {
                for i in t..rows {
                    a[i][j] = a[i][t]
                        .checked_mul(q)
                        .and_then(|x| a[i][j].checked_sub(x))
                        .ok_or_else(overflow)?;
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            // A smaller remainder appeared; pick it up as the next pivot.
            continue;
        }
        // Enforce divisibility by folding an offending row into row t.
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                a[t][j] = a[t][j].checked_add(a[i][j]).ok_or_else(overflow)?;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    Ok(out)
}

/// The boundary map `∂_d: C_d → C_{d−1}` as columns; `∂_0` is the
/// augmentation onto a single row.
fn boundary(c: &Complex, d: usize) -> (usize, Vec<Vec<(usize, i128)>>) {
    if d == 0 {
        return (1, c.simplices(0).iter().map(|_| vec![(0, 1)]).collect());
    }
    let lower = c.simplices(d - 1);
    let index: HashMap<&[usize], usize> = lower
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let columns = c
        .simplices(d)
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|skip| {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    (index[face.as_slice()], sign)
                })
                .collect()
        })
        .collect();
    (lower.len(), columns)
}

/// Reduced integral homology in degrees `0..=top_dim`.
pub fn homology(c: &Complex, top_dim: usize) -> Result<Vec<HomologyGroup>> {
    homology_with(c, top_dim, Exec::default())
}

/// [`homology`] with an explicit execution mode; boundary maps of different
/// degrees are reduced independently.
pub fn homology_with(c: &Complex, top_dim: usize, exec: Exec) -> Result<Vec<HomologyGroup>> {
    match c.skeleton() {
        Some(k) if top_dim + 1 > k => {
            return Err(Error::Precondition(format!(
                "degree {top_dim} needs simplices of dimension {}, complex was built up to {k}",
                top_dim + 1
            )))
        }
        None if c.dim().is_none_or(|d| top_dim > d) => {
            return Err(Error::Precondition(format!(
                "degree {top_dim} exceeds the dimension of the complex"
            )))
        }
        _ => {}
    }
    let smiths = exec.map_range(top_dim + 2, |d| {
        let (rows, cols) = boundary(c, d);
        smith(rows, cols)
    });
    let smiths: Vec<Smith> = smiths.into_iter().collect::<Result<_>>()?;
    Ok((0..=top_dim)
        .map(|d| HomologyGroup {
            degree: d,
            rank: c.count(d) - smiths[d].rank - smiths[d + 1].rank,
            torsion: smiths[d + 1].torsion.clone(),
        })
        .collect())
}
