//! Quotients of multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::poly::{Exponents, MultiPoly};
use super::rational::Q;
use super::unipoly::UniPoly;
use super::AlgebraError;

/// `num / den` with `den ≠ 0`.
///
/// Normal form: common univariate factors (per variable) are cancelled, and the
/// denominator has constant term 1 whenever it is invertible at the origin;
/// otherwise it is scaled to coprime integer coefficients with a positive
/// leading term. Equality is decided by cross-multiplication, so the normal
/// form is a convenience rather than a canonical representative.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if num.nvars() != den.nvars() {
            return Err(AlgebraError::VariableMismatch(num.nvars(), den.nvars()));
        }
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZeroPoly);
        }
        let mut f = Self { num, den };
        f.reduce();
        Ok(f)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        Self {
            num: p,
            den: MultiPoly::one(n),
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.nvars());
            return;
        }
        for var in 0..self.nvars() {
            let g = univariate_content(&self.den, var).gcd(&univariate_content(&self.num, var));
            if g.degree().unwrap_or(0) > 0 {
                self.num = divide_along(&self.num, var, &g);
                self.den = divide_along(&self.den, var, &g);
            }
        }
        let c0 = self.den.constant_term();
        let s = if !c0.is_zero() {
            Q::one() / c0
        } else {
            let mut s = self.den.content_scale();
            let lead = self.den.terms().next_back().map(|(_, c)| c.clone()).unwrap();
            if (lead * &s).is_negative() {
                s = -s;
            }
            s
        };
        if !s.is_one() {
            self.num = self.num.scale(&s);
            self.den = self.den.scale(&s);
        }
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// Formal power series up to total degree `max_degree`.
    pub fn series_expand(&self, max_degree: u32) -> Result<MultiPoly, AlgebraError> {
        let d0 = self.den.constant_term();
        if d0.is_zero() {
            return Err(AlgebraError::NotExpandable);
        }
        let n = self.nvars();
        let inv0 = Q::one() / d0;
        let den_terms: Vec<(&Exponents, &Q)> = self
            .den
            .terms()
            .filter(|(e, _)| e.iter().any(|&x| x > 0))
            .collect();
        let mut out: BTreeMap<Exponents, Q> = BTreeMap::new();
        for deg in 0..=max_degree {
            for m in monomials_of_degree(n, deg) {
                let mut acc = self.num.coeff(&m);
                for (de, dc) in &den_terms {
                    if de.iter().zip(&m).all(|(a, b)| a <= b) {
                        let rest: Exponents = m.iter().zip(de.iter()).map(|(b, a)| b - a).collect();
                        if let Some(s) = out.get(&rest) {
                            acc -= *dc * s;
                        }
                    }
                }
                let c = acc * &inv0;
                if !c.is_zero() {
                    out.insert(m, c);
                }
            }
        }
        Ok(MultiPoly::from_terms(n, out))
    }

    pub fn eval(&self, point: &[Q]) -> Result<Q, AlgebraError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZeroPoly);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// `{"vars": [...], "num": {...}, "den": {...}}`
    pub fn to_json(&self) -> Value {
        json!({
            "vars": variable_names(self.nvars()),
            "num": self.num.to_json(),
            "den": self.den.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let bad = || AlgebraError::BadRational(v.to_string());
        let nvars = match v.get("vars").and_then(Value::as_array) {
            Some(a) => a.len(),
            None => infer_nvars(v.get("num").ok_or_else(bad)?).ok_or_else(bad)?,
        };
        let num = MultiPoly::from_json(nvars, v.get("num").ok_or_else(bad)?)?;
        let den = MultiPoly::from_json(nvars, v.get("den").ok_or_else(bad)?)?;
        Self::new(num, den)
    }
}

fn infer_nvars(v: &Value) -> Option<usize> {
    let k = v.as_object()?.keys().next()?;
    Some(k.matches(',').count() + 1)
}

pub fn variable_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["u".to_string()]
    } else {
        (1..=n).map(|i| format!("u{i}")).collect()
    }
}

/// Gcd of the coefficient polynomials of `p` viewed in `u_var`: the largest
/// factor of `p` that depends on `u_var` alone.
fn univariate_content(p: &MultiPoly, var: usize) -> UniPoly {
    p.coefficients_in(var)
        .values()
        .fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn divide_along(p: &MultiPoly, var: usize, g: &UniPoly) -> MultiPoly {
    let parts: BTreeMap<Exponents, UniPoly> = p
        .coefficients_in(var)
        .into_iter()
        .map(|(e, c)| {
            let (q, r) = c.div_rem(g);
            debug_assert!(r.is_zero());
            (e, q)
        })
        .collect();
    MultiPoly::from_coefficients_in(p.nvars(), var, &parts)
}

/// All exponent tuples in `n` variables with the given total degree, in
/// lexicographic order.
pub fn monomials_of_degree(n: usize, deg: u32) -> Vec<Exponents> {
    fn rec(n: usize, deg: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if n == 1 {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=deg {
            prefix.push(k);
            rec(n - 1, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Div for &RationalFunction {
    type Output = Result<RationalFunction, AlgebraError>;
    fn div(self, rhs: &RationalFunction) -> Self::Output {
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q_int;

    fn uni(c: &[i64]) -> MultiPoly {
        MultiPoly::from_terms(1, c.iter().enumerate().map(|(i, &x)| (vec![i as u32], q_int(x))))
    }

    #[test]
    fn content_reduction() {
        let f = RationalFunction::new(uni(&[2, 2]), uni(&[2, -2])).unwrap();
        assert_eq!(f.numerator(), &uni(&[1, 1]));
        assert_eq!(f.denominator(), &uni(&[1, -1]));
    }

    #[test]
    fn common_factor_cancelled() {
        // (1 - u^2) / (1 - u)^2 = (1 + u) / (1 - u)
        let f = RationalFunction::new(uni(&[1, 0, -1]), uni(&[1, -2, 1])).unwrap();
        assert_eq!(f.numerator(), &uni(&[1, 1]));
        assert_eq!(f.denominator(), &uni(&[1, -1]));
    }

    #[test]
    fn series_of_one_plus_u_over_one_minus_u() {
        let f = RationalFunction::new(uni(&[1, 1]), uni(&[1, -1])).unwrap();
        assert_eq!(f.series_expand(3).unwrap(), uni(&[1, 2, 2, 2]));
    }

    #[test]
    fn series_of_geometric_in_two_variables() {
        let one = MultiPoly::one(2);
        let den = &one - &MultiPoly::monomial(vec![1, 1], q_int(1));
        let f = RationalFunction::new(one, den).unwrap();
        let s = f.series_expand(4).unwrap();
        let expect = MultiPoly::from_terms(
            2,
            [(vec![0, 0], q_int(1)), (vec![1, 1], q_int(1)), (vec![2, 2], q_int(1))],
        );
        assert_eq!(s, expect);
    }

    #[test]
    fn not_expandable_at_origin() {
        let f = RationalFunction::new(uni(&[1]), uni(&[0, 1])).unwrap();
        assert_eq!(f.series_expand(2), Err(AlgebraError::NotExpandable));
        assert_eq!(f.denominator(), &uni(&[0, 1]));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(uni(&[1]), MultiPoly::zero(1)).unwrap_err(),
            AlgebraError::DivisionByZeroPoly
        );
    }

    #[test]
    fn arithmetic_and_cross_multiplied_equality() {
        let a = RationalFunction::new(uni(&[1]), uni(&[1, -1])).unwrap();
        let b = RationalFunction::new(uni(&[1]), uni(&[1, 1])).unwrap();
        let sum = &a + &b;
        let expect = RationalFunction::new(uni(&[2]), uni(&[1, 0, -1])).unwrap();
        assert_eq!(sum, expect);
        let q = (&a / &b).unwrap();
        assert_eq!(q, RationalFunction::new(uni(&[1, 1]), uni(&[1, -1])).unwrap());
        assert_eq!(&(&a - &a), &RationalFunction::from_poly(MultiPoly::zero(1)));
    }

    #[test]
    fn json_round_trip() {
        let f = RationalFunction::new(uni(&[0, 3]), uni(&[1, -1])).unwrap();
        let j = f.to_json();
        assert_eq!(j["vars"], json!(["u"]));
        assert_eq!(RationalFunction::from_json(&j).unwrap(), f);
    }
}
