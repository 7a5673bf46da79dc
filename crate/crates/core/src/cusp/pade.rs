//! `[p/q]` Padé approximants of a power series with exact coefficients.

use num_traits::{One, Zero};

use super::CuspError;
use crate::algebra::{MultiPoly, RationalFunction, UniPoly, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct PadeFit {
    pub p: usize,
    pub q: usize,
    pub numerator: UniPoly,
    /// Constant term 1.
    pub denominator: UniPoly,
    /// Whether `N/D` reproduces every supplied coefficient.
    pub clean: bool,
    pub first_mismatch: Option<usize>,
}

impl PadeFit {
    pub fn rational_function(&self) -> RationalFunction {
        let lift = |p: &UniPoly| MultiPoly::from_univariate(p, &[1]);
        RationalFunction::new(lift(&self.numerator), lift(&self.denominator)).expect("denominator has constant term 1")
    }
}

/// Solves `A x = b` exactly; free unknowns are set to zero. `None` if inconsistent.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Q::one() / &a[r][c];
        a[r].iter_mut().for_each(|x| *x *= &inv);
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// Fits `N/D` with `deg N ≤ p`, `deg D ≤ q`, `D(0) = 1` to `coeffs[0..]`
/// (the coefficient of `u^n` is `coeffs[n]`) and checks the remainder.
pub fn pade_fit(coeffs: &[Q], p: usize, q: usize) -> Result<PadeFit, CuspError> {
    if p + q + 1 > coeffs.len() {
        return Err(CuspError::BadDegrees(format!(
            "[{p}/{q}] needs {} coefficients, got {}",
            p + q + 1,
            coeffs.len()
        )));
    }
    let c = |n: isize| if n < 0 { Q::zero() } else { coeffs[n as usize].clone() };
    // Σ_{i=1}^{q} d_i c_{n-i} = -c_n for n = p+1 … p+q
    let a: Vec<Vec<Q>> = (1..=q)
        .map(|r| (1..=q).map(|i| c((p + r) as isize - i as isize)).collect())
        .collect();
    let b: Vec<Q> = (1..=q).map(|r| -c((p + r) as isize)).collect();
    let d = solve(a, b).ok_or(CuspError::SingularFit(p, q))?;
    let mut den = vec![Q::one()];
    den.extend(d);
    let num: Vec<Q> = (0..=p)
        .map(|j| (0..=j.min(q)).fold(Q::zero(), |acc, i| acc + &den[i] * c((j - i) as isize)))
        .collect();
    // expand N/D and compare
    let mut series: Vec<Q> = Vec::with_capacity(coeffs.len());
    for n in 0..coeffs.len() {
        let mut s = if n <= p { num[n].clone() } else { Q::zero() };
        for i in 1..=q.min(n) {
            s -= &den[i] * &series[n - i];
        }
        series.push(s);
    }
    let first_mismatch = (0..coeffs.len()).find(|&n| series[n] != coeffs[n]);
    Ok(PadeFit {
        p,
        q,
        numerator: UniPoly::new(num),
        denominator: UniPoly::new(den),
        clean: first_mismatch.is_none(),
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q_int;

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn cycle_series_is_recovered() {
        let m = 3;
        let coeffs: Vec<Q> = (0..=20).map(|k| q_int(if k > 0 && k % m == 0 { 2 * m as i64 } else { 0 })).collect();
        let fit = pade_fit(&coeffs, m, m).unwrap();
        assert!(fit.clean);
        assert_eq!(fit.denominator, UniPoly::new(ints(&[1, 0, 0, -1])));
        assert_eq!(fit.numerator, UniPoly::new(ints(&[0, 0, 0, 6])));
        let bigger = pade_fit(&coeffs, m + 1, m + 1).unwrap();
        assert!(bigger.clean);
        assert!(bigger.rational_function().equals(&fit.rational_function()));
    }

    #[test]
    fn zero_series() {
        let fit = pade_fit(&ints(&[0; 8]), 2, 2).unwrap();
        assert!(fit.clean && fit.numerator.is_zero());
        assert_eq!(fit.denominator, UniPoly::one());
    }

    #[test]
    fn failures_are_reported() {
        // 1/(1-u) - u^6 cannot be matched by [1/1]
        let mut coeffs = ints(&[1; 10]);
        coeffs[6] = q_int(0);
        let fit = pade_fit(&coeffs, 1, 1).unwrap();
        assert!(!fit.clean);
        assert_eq!(fit.first_mismatch, Some(6));
        // c = 1, 0, 1: the single Hankel equation reads 0·d_1 = -1
        assert_eq!(pade_fit(&ints(&[1, 0, 1]), 1, 1), Err(CuspError::SingularFit(1, 1)));
        assert!(matches!(pade_fit(&ints(&[1, 2]), 1, 1), Err(CuspError::BadDegrees(_))));
    }
}
