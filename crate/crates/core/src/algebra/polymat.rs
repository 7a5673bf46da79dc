//! Square and rectangular matrices over the polynomial ring.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: Vec<Vec<MultiPoly>>,
}

impl PolyMatrix {
    pub fn new(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Self {
        debug_assert!(rows.iter().flatten().all(|p| p.nvars() == nvars));
        Self { nvars, rows }
    }

    pub fn zeros(nvars: usize, n: usize, m: usize) -> Self {
        Self::new(nvars, vec![vec![MultiPoly::zero(nvars); m]; n])
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut out = Self::zeros(nvars, n, n);
        for i in 0..n {
            out.rows[i][i] = MultiPoly::one(nvars);
        }
        out
    }

    /// Lifts a rational matrix to constant polynomials.
    pub fn from_constants(nvars: usize, m: &[Vec<Q>]) -> Self {
        Self::new(
            nvars,
            m.iter()
                .map(|r| r.iter().map(|c| MultiPoly::constant(nvars, c.clone())).collect())
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        self.rows[i][j] = p;
    }

    pub fn rows(&self) -> &[Vec<MultiPoly>] {
        &self.rows
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        Self::new(
            self.nvars,
            self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        )
    }

    pub fn scale(&self, p: &MultiPoly) -> Self {
        self.map(|x| x * p)
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        self.map(|x| x.truncate(max_degree))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(MultiPoly::is_zero)
    }

    pub fn trace(&self) -> MultiPoly {
        (0..self.nrows()).fold(MultiPoly::zero(self.nvars), |acc, i| &acc + &self.rows[i][i])
    }

    /// Determinant by fraction-free (Bareiss) elimination; every intermediate
    /// division is exact in the polynomial ring.
    pub fn det(&self) -> MultiPoly {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "determinant of a non-square matrix");
        if n == 0 {
            return MultiPoly::one(self.nvars);
        }
        let mut a = self.rows.clone();
        let mut prev = MultiPoly::one(self.nvars);
        let mut negate = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return MultiPoly::zero(self.nvars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -&d
        } else {
            d
        }
    }

    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        Self::new(
            self.nvars,
            self.rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip_row)
                .map(|(_, r)| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip_col)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect(),
        )
    }

    /// Classical adjugate, so that `self · adj = det · I`.
    pub fn adjugate(&self) -> Self {
        let n = self.nrows();
        if n == 1 {
            return Self::identity(self.nvars, 1);
        }
        let mut out = Self::zeros(self.nvars, n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det();
                out.rows[j][i] = if (i + j) % 2 == 0 { c } else { -&c };
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let (n, m) = (self.nrows(), self.ncols());
        let mut out = Self::zeros(self.nvars, m, n);
        for i in 0..n {
            for j in 0..m {
                out.rows[j][i] = self.rows[i][j].clone();
            }
        }
        out
    }

    /// Constant-term matrix.
    pub fn at_zero(&self) -> Vec<Vec<Q>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(MultiPoly::constant_term).collect())
            .collect()
    }

    pub fn is_constant_identity(&self) -> bool {
        self.at_zero().iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, c)| if i == j { *c == Q::from_integer(1.into()) } else { c.is_zero() })
        })
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::new(
            self.nvars,
            self.rows
                .iter()
                .zip(&rhs.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }
}

impl Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::new(
            self.nvars,
            self.rows
                .iter()
                .zip(&rhs.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        )
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.ncols(), rhs.nrows(), "matrix shape mismatch");
        let mut out = PolyMatrix::zeros(self.nvars, self.nrows(), rhs.ncols());
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols() {
                    if !rhs.rows[k][j].is_zero() {
                        let t = &self.rows[i][k] * &rhs.rows[k][j];
                        out.rows[i][j] = &out.rows[i][j] + &t;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q_int;
    use proptest::prelude::*;

    fn uni(c: &[i64]) -> MultiPoly {
        MultiPoly::from_terms(1, c.iter().enumerate().map(|(i, &x)| (vec![i as u32], q_int(x))))
    }

    /// Laplace expansion along the first row; independent of the elimination path.
    fn cofactor_det(m: &PolyMatrix) -> MultiPoly {
        let n = m.nrows();
        if n == 0 {
            return MultiPoly::one(m.nvars());
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = MultiPoly::zero(m.nvars());
        for j in 0..n {
            let t = m.get(0, j) * &cofactor_det(&m.minor(0, j));
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(PolyMatrix::identity(1, 4).det(), MultiPoly::one(1));
        let mut d = PolyMatrix::zeros(1, 2, 2);
        d.set(0, 0, uni(&[1, -1]));
        d.set(1, 1, uni(&[1, 0, -1]));
        assert_eq!(d.det(), &uni(&[1, -1]) * &uni(&[1, 0, -1]));
    }

    #[test]
    fn pivoting_needed() {
        let m = PolyMatrix::new(
            1,
            vec![vec![MultiPoly::zero(1), uni(&[0, 1])], vec![uni(&[1]), uni(&[3])]],
        );
        assert_eq!(m.det(), uni(&[0, -1]));
    }

    #[test]
    fn adjugate_identity() {
        let m = PolyMatrix::new(
            1,
            vec![
                vec![uni(&[1, 1]), uni(&[0, 2]), uni(&[3])],
                vec![uni(&[0, 0, 1]), uni(&[1]), uni(&[-1, 1])],
                vec![uni(&[2]), uni(&[0, 1]), uni(&[1, 0, 1])],
            ],
        );
        let prod = &m * &m.adjugate();
        assert_eq!(prod, PolyMatrix::identity(1, 3).scale(&m.det()));
    }

    fn arb_matrix() -> impl Strategy<Value = PolyMatrix> {
        (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec(
                prop::collection::vec((-2i64..3, -2i64..3, -1i64..2), n),
                n,
            )
            .prop_map(move |rows| {
                PolyMatrix::new(
                    2,
                    rows.into_iter()
                        .map(|r| {
                            r.into_iter()
                                .map(|(a, b, c)| {
                                    MultiPoly::from_terms(
                                        2,
                                        [(vec![0, 0], q_int(a)), (vec![1, 0], q_int(b)), (vec![0, 1], q_int(c))],
                                    )
                                })
                                .collect()
                        })
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn bareiss_matches_cofactor_expansion(m in arb_matrix()) {
            prop_assert_eq!(m.det(), cofactor_det(&m));
        }
    }
}
