//! Exact affine maps `x ↦ Lx + t` of ℚ^d with integer linear part.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type R64 = Rational64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    linear: Vec<Vec<i64>>,
    translation: Vec<R64>,
}

impl AffineMap {
    pub fn new(linear: Vec<Vec<i64>>, translation: Vec<R64>) -> Self {
        let d = translation.len();
        assert!(linear.len() == d && linear.iter().all(|r| r.len() == d), "affine map shape");
        Self { linear, translation }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(
            (0..dim)
                .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
                .collect(),
            vec![R64::zero(); dim],
        )
    }

    /// Pure translation by `v`.
    pub fn translation_by(v: &[R64]) -> Self {
        let mut m = Self::identity(v.len());
        m.translation = v.to_vec();
        m
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &[Vec<i64>] {
        &self.linear
    }

    pub fn translation(&self) -> &[R64] {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn apply_linear(&self, x: &[R64]) -> Vec<R64> {
        self.linear
            .iter()
            .map(|r| r.iter().zip(x).fold(R64::zero(), |acc, (&a, b)| acc + b * a))
            .collect()
    }

    pub fn apply(&self, x: &[R64]) -> Vec<R64> {
        self.apply_linear(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let d = self.dim();
        let linear = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.linear[i][k] * other.linear[k][j]).sum())
                    .collect()
            })
            .collect();
        let translation = self
            .apply_linear(&other.translation)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect();
        Self { linear, translation }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim()), |acc, _| acc.compose(self))
    }

    /// Inverse, provided the linear part is unimodular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.dim();
        let mut a: Vec<Vec<R64>> = self
            .linear
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|&x| R64::from_integer(x))
                    .chain((0..d).map(|j| if i == j { R64::one() } else { R64::zero() }))
                    .collect()
            })
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&i| !a[i][c].is_zero())?;
            a.swap(c, p);
            let inv = R64::one() / a[c][c];
            a[c].iter_mut().for_each(|x| *x *= inv);
            for i in 0..d {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c];
                    for j in 0..2 * d {
                        let t = f * a[c][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        let mut linear = vec![vec![0i64; d]; d];
        for i in 0..d {
            for j in 0..d {
                let x = a[i][d + j];
                if !x.is_integer() {
                    return None;
                }
                linear[i][j] = x.to_integer();
            }
        }
        let mut out = Self {
            linear,
            translation: vec![R64::zero(); d],
        };
        out.translation = out.apply_linear(&self.translation).into_iter().map(|x| -x).collect();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> R64 {
        R64::from_integer(n)
    }

    #[test]
    fn compose_order_and_inverse() {
        let s = AffineMap::new(vec![vec![-1]], vec![r(0)]);
        let t = AffineMap::new(vec![vec![-1]], vec![r(2)]);
        let ts = t.compose(&s);
        assert_eq!(ts.apply(&[r(5)]), vec![r(7)]);
        assert_eq!(ts.inverse().unwrap().compose(&ts), AffineMap::identity(1));
        assert!(s.compose(&s).is_identity());
    }
}
