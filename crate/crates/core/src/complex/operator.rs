//! Sparse nonnegative integer operators on chambers (or directed edges).

use rayon::prelude::*;
use serde_json::{json, Value};

use super::ComplexError;

/// Square sparse matrix with `i128` entries, rows sorted by column. Row `c`
/// lists the chambers in the image of `c` with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChamberOperator {
    rows: Vec<Vec<(usize, i128)>>,
}

impl ChamberOperator {
    pub fn zero(n: usize) -> Self {
        Self { rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions add up.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, i128)>) -> Result<Self, ComplexError> {
        let mut rows: Vec<Vec<(usize, i128)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            assert!(i < n && j < n, "triplet outside a {n}x{n} operator");
            rows[i].push((j, v));
        }
        for r in rows.iter_mut() {
            r.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i128)> = Vec::with_capacity(r.len());
            for &(j, v) in r.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 = last.1.checked_add(v).ok_or(ComplexError::Overflow)?,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *r = merged;
        }
        Ok(Self { rows })
    }

    /// Permutation matrix sending row `i` to column `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        Self { rows: perm.iter().map(|&j| vec![(j, 1)]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, i128)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map_or(0, |p| self.rows[i][p].1)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, ComplexError> {
        let n = self.dim();
        assert_eq!(n, rhs.dim(), "operator dimensions differ");
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                let mut acc: std::collections::BTreeMap<usize, i128> = std::collections::BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &rhs.rows[k] {
                        let t = a.checked_mul(b).ok_or(ComplexError::Overflow)?;
                        let e = acc.entry(j).or_insert(0);
                        *e = e.checked_add(t).ok_or(ComplexError::Overflow)?;
                    }
                }
                Ok(acc.into_iter().filter(|e| e.1 != 0).collect())
            })
            .collect::<Result<Vec<_>, ComplexError>>()?;
        Ok(Self { rows })
    }

    pub fn pow(&self, k: u64) -> Result<Self, ComplexError> {
        let mut result = Self::identity(self.dim());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn trace(&self) -> i128 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sums(&self) -> Vec<i128> {
        self.rows.iter().map(|r| r.iter().map(|e| e.1).sum()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.1 >= 0)
    }

    pub fn is_permutation(&self) -> bool {
        let mut hit = vec![false; self.dim()];
        self.rows.iter().all(|r| {
            r.len() == 1 && r[0].1 == 1 && !std::mem::replace(&mut hit[r[0].0], true)
        })
    }

    /// Principal submatrix on `indices` (in that order).
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.dim()];
        for (p, &i) in indices.iter().enumerate() {
            pos[i] = p;
        }
        let rows = indices
            .iter()
            .map(|&i| {
                let mut r: Vec<(usize, i128)> = self.rows[i]
                    .iter()
                    .filter(|e| pos[e.0] != usize::MAX)
                    .map(|e| (pos[e.0], e.1))
                    .collect();
                r.sort_unstable_by_key(|e| e.0);
                r
            })
            .collect();
        Self { rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<i128>> {
        let n = self.dim();
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; n];
                for &(j, v) in r {
                    d[j] = v;
                }
                d
            })
            .collect()
    }

    /// `{"dim": n, "entries": [[row, col, value], …]}`.
    pub fn to_triplet_json(&self) -> Value {
        let entries: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| json!([i, j, v.to_string()])))
            .collect();
        json!({"dim": self.dim(), "entries": entries})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_traces() {
        let p = ChamberOperator::permutation(&[1, 2, 0]);
        assert!(p.is_permutation());
        assert_eq!(p.pow(3).unwrap(), ChamberOperator::identity(3));
        assert_eq!(p.trace(), 0);
        let a = ChamberOperator::from_triplets(2, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (0, 1, 1)]).unwrap();
        assert_eq!(a.get(0, 1), 2);
        assert_eq!(a.pow(2).unwrap().to_dense(), vec![vec![3, 2], vec![1, 2]]);
        assert_eq!(a.restrict(&[1]).to_dense(), vec![vec![0]]);
    }

    #[test]
    fn overflow_is_reported() {
        let big = ChamberOperator::from_triplets(1, [(0, 0, i128::MAX / 2)]).unwrap();
        assert_eq!(big.mul(&big).unwrap_err(), ComplexError::Overflow);
    }
}
