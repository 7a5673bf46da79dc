//! Integer matrices: Hermite and Smith normal forms, exact determinants, and a
//! small dense rational solver.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Q;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<i128>>,
    ncols: usize,
}

/// `u · m · v = diag(d)` with `u`, `v` unimodular and `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i128>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged integer matrix");
        Self { rows, ncols }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<i128>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            (0..self.ncols)
                .map(|j| self.rows.iter().map(|r| r[j]).collect())
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows());
        Self::new(
            self.rows
                .iter()
                .map(|r| {
                    (0..rhs.ncols)
                        .map(|j| r.iter().zip(&rhs.rows).map(|(a, b)| a * b[j]).sum())
                        .collect()
                })
                .collect(),
        )
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[i128]) -> Vec<i128> {
        (0..self.ncols)
            .map(|j| v.iter().zip(&self.rows).map(|(a, r)| a * r[j]).sum())
            .collect()
    }

    /// Determinant by integer Bareiss elimination.
    pub fn det(&self) -> i128 {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "determinant of a non-square matrix");
        let mut a = self.rows.clone();
        let mut prev = 1i128;
        let mut sign = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * a[n - 1][n - 1]
        }
    }

    /// Row-style Hermite normal form of the row lattice: echelon rows with
    /// positive pivots, entries above each pivot reduced into `[0, pivot)`.
    /// Zero rows are dropped.
    pub fn hermite(&self) -> Self {
        let mut a = self.rows.clone();
        let n = a.len();
        let mut prow = 0;
        for col in 0..self.ncols {
            if prow == n {
                break;
            }
            loop {
                let best = (prow..n)
                    .filter(|&i| a[i][col] != 0)
                    .min_by_key(|&i| a[i][col].abs());
                let Some(b) = best else { break };
                a.swap(prow, b);
                let mut clean = true;
                for i in prow + 1..n {
                    if a[i][col] != 0 {
                        let f = Integer::div_floor(&a[i][col], &a[prow][col]);
                        for j in 0..self.ncols {
                            a[i][j] -= f * a[prow][j];
                        }
                        if a[i][col] != 0 {
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            if a[prow][col] == 0 {
                continue;
            }
            if a[prow][col] < 0 {
                a[prow].iter_mut().for_each(|x| *x = -*x);
            }
            let p = a[prow][col];
            for i in 0..prow {
                let f = Integer::div_floor(&a[i][col], &p);
                if f != 0 {
                    for j in 0..self.ncols {
                        a[i][j] -= f * a[prow][j];
                    }
                }
            }
            prow += 1;
        }
        a.truncate(prow);
        Self::new_with_cols(a, self.ncols)
    }

    fn new_with_cols(rows: Vec<Vec<i128>>, ncols: usize) -> Self {
        Self { rows, ncols }
    }

    /// Canonical representative of `v` modulo the row lattice, assuming `self`
    /// is in Hermite form.
    pub fn reduce_mod_rows(&self, v: &[i128]) -> Vec<i128> {
        let mut v = v.to_vec();
        for r in &self.rows {
            let Some(p) = r.iter().position(|&x| x != 0) else { continue };
            let f = Integer::div_floor(&v[p], &r[p]);
            if f != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= f * y;
                }
            }
        }
        v
    }

    /// Smith normal form with unimodular transforms.
    pub fn smith(&self) -> SmithForm {
        let (n, m) = (self.nrows(), self.ncols);
        let mut a = self.rows.clone();
        let mut u = Self::identity(n).rows;
        let mut v = Self::identity(m).rows;
        for t in 0..n.min(m) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..m {
                        if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                a.swap(t, bi);
                u.swap(t, bi);
                for r in a.iter_mut() {
                    r.swap(t, bj);
                }
                for r in v.iter_mut() {
                    r.swap(t, bj);
                }
                let p = a[t][t];
                let mut done = true;
                for i in t + 1..n {
                    let f = Integer::div_floor(&a[i][t], &p);
                    if f != 0 {
                        for j in 0..m {
                            a[i][j] -= f * a[t][j];
                        }
                        for j in 0..n {
                            u[i][j] -= f * u[t][j];
                        }
                    }
                    if a[i][t] != 0 {
                        done = false;
                    }
                }
                for j in t + 1..m {
                    let f = Integer::div_floor(&a[t][j], &p);
                    if f != 0 {
                        for r in a.iter_mut() {
                            r[j] -= f * r[t];
                        }
                        for r in v.iter_mut() {
                            r[j] -= f * r[t];
                        }
                    }
                    if a[t][j] != 0 {
                        done = false;
                    }
                }
                if !done {
                    continue;
                }
                // Divisibility: fold an offending row into row t and retry.
                let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in 0..m {
                            a[t][j] += a[i][j];
                        }
                        for j in 0..n {
                            u[t][j] += u[i][j];
                        }
                    }
                    None => break,
                }
            }
            if a[t][t] < 0 {
                a[t].iter_mut().for_each(|x| *x = -*x);
                u[t].iter_mut().for_each(|x| *x = -*x);
            }
        }
        SmithForm {
            diagonal: (0..n.min(m)).map(|i| a[i][i]).collect(),
            left: Self::new(u),
            right: Self::new_with_cols(v, m),
        }
    }
}

/// Inverse of a square rational matrix by Gauss–Jordan, `None` if singular.
pub fn rational_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = Q::one() / &a[c][c];
        a[c].iter_mut().for_each(|x| *x *= &inv);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times rational matrix.
pub fn rational_left_apply(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).fold(Q::zero(), |acc, (a, r)| acc + a * &r[j]))
        .collect()
}

/// Rational determinant (via elimination).
pub fn rational_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// `x` as an integer, if it is one.
pub fn q_to_i128(x: &Q) -> Option<i128> {
    x.is_integer().then(|| i128::try_from(x.to_integer()).ok()).flatten()
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn smith_of_small_matrix() {
        let m = IntMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = m.smith();
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let d = s.left.mul(&m).mul(&s.right);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), if i == j { s.diagonal[i] } else { 0 });
            }
        }
        assert_eq!(s.left.det().abs(), 1);
        assert_eq!(s.right.det().abs(), 1);
    }

    #[test]
    fn hermite_reduction_is_canonical() {
        let h = IntMatrix::from_i64(&[vec![2, 0], vec![0, 2]]).hermite();
        assert_eq!(h.reduce_mod_rows(&[3, -1]), vec![1, 1]);
        let h = IntMatrix::from_i64(&[vec![3, 1], vec![1, 2]]).hermite();
        assert_eq!(h.rows().len(), 2);
        assert_eq!(h.get(0, 0) * h.get(1, 1), 5);
    }

    #[test]
    fn rational_inverse_round_trip() {
        let m = vec![
            vec![Q::from_integer(2.into()), Q::from_integer((-1).into())],
            vec![Q::from_integer((-1).into()), Q::from_integer(2.into())],
        ];
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(inv[0][0], Q::new(2.into(), 3.into()));
        assert_eq!(rational_det(&m), Q::from_integer(3.into()));
        assert!(rational_inverse(&[vec![Q::zero()]]).is_none());
    }

    proptest! {
        #[test]
        fn smith_product_of_diagonal_is_abs_det(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 3)) {
            let m = IntMatrix::from_i64(&rows);
            let s = m.smith();
            let prod: i128 = s.diagonal.iter().product();
            prop_assert_eq!(prod, m.det().abs());
            for w in s.diagonal.windows(2) {
                if w[0] != 0 {
                    prop_assert_eq!(w[1] % w[0], 0);
                }
            }
            let d = s.left.mul(&m).mul(&s.right);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(d.get(i, j), if i == j { s.diagonal[i] } else { 0 });
                }
            }
        }

        #[test]
        fn hermite_preserves_lattice_index(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 2), 2)) {
            let m = IntMatrix::from_i64(&rows);
            prop_assume!(m.det() != 0);
            let h = m.hermite();
            prop_assert_eq!(h.det().abs(), m.det().abs());
            // every original row reduces to zero
            for r in m.rows() {
                prop_assert!(h.reduce_mod_rows(r).iter().all(|&x| x == 0));
            }
        }
    }
}
