//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use super::rational::{format_rational, parse_rational, Q};
use super::unipoly::UniPoly;
use super::AlgebraError;

/// Exponent tuple, one entry per variable.
pub type Exponents = Vec<u32>;

/// Polynomial in `nvars` commuting variables. Zero coefficients are never stored.
///
/// Terms are kept in lexicographic exponent order, which is also the monomial
/// order used by [`MultiPoly::div_exact`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Exponents, c: Q) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `u_{index}` (0-based) in a ring with `nvars` variables.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent tuple length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, exps: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `u^shift`.
    pub fn shift(&self, shift: &[u32]) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.iter().zip(shift).map(|(x, s)| x + s).collect(), a.clone()))
                .collect(),
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse inside the polynomial ring: only nonzero constants are units.
    pub fn try_inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_constant() && !self.is_zero() {
            Ok(Self::constant(self.nvars, Q::one() / self.constant_term()))
        } else {
            Err(AlgebraError::DivisionByZeroPoly)
        }
    }

    fn leading(&self) -> Option<(&Exponents, &Q)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dl_e, dl_c) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(dl_e).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponents = re.iter().zip(dl_e).map(|(a, b)| a - b).collect();
            let c = rc / dl_c;
            rem = &rem - &d.shift(&e).scale(&c);
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Substitutes `x ↦ u^exps` into a univariate polynomial.
    pub fn from_univariate(p: &UniPoly, exps: &[u32]) -> Self {
        let mut out = Self::zero(exps.len());
        for (k, c) in p.coeffs().iter().enumerate() {
            let e = exps.iter().map(|&x| x * k as u32).collect();
            out.add_term(e, c.clone());
        }
        out
    }

    /// Views `self` as a polynomial in `u_var` with coefficients indexed by the
    /// remaining exponents (the `var` slot zeroed).
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<Exponents, UniPoly> {
        let mut acc: BTreeMap<Exponents, Vec<Q>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut rest = e.clone();
            rest[var] = 0;
            let v = acc.entry(rest).or_default();
            if v.len() <= k {
                v.resize(k + 1, Q::zero());
            }
            v[k] += c;
        }
        acc.into_iter().map(|(e, v)| (e, UniPoly::new(v))).collect()
    }

    /// Rebuilds a polynomial from [`MultiPoly::coefficients_in`] data.
    pub fn from_coefficients_in(nvars: usize, var: usize, parts: &BTreeMap<Exponents, UniPoly>) -> Self {
        let mut out = Self::zero(nvars);
        for (rest, p) in parts {
            for (k, c) in p.coeffs().iter().enumerate() {
                let mut e = rest.clone();
                e[var] = k as u32;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// The unique univariate polynomial equal to `self`, if `self` only
    /// involves `u_var`.
    pub fn to_univariate(&self, var: usize) -> Option<UniPoly> {
        let parts = self.coefficients_in(var);
        match parts.len() {
            0 => Some(UniPoly::zero()),
            1 => {
                let (rest, p) = parts.into_iter().next().unwrap();
                rest.iter().all(|&x| x == 0).then_some(p)
            }
            _ => None,
        }
    }

    /// `(lcm of coefficient denominators, gcd of scaled numerators)`; multiplying
    /// by `lcm / gcd` makes the coefficients coprime integers.
    pub fn content_scale(&self) -> Q {
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let scaled = (c * Q::from_integer(lcm.clone())).to_integer();
            g = g.gcd(&scaled);
        }
        if g.is_zero() {
            return Q::one();
        }
        Q::new(lcm, g.abs())
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// JSON object mapping `"(e1,…,ed)"` to canonical rational strings.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.terms {
            m.insert(exponent_key(e), Value::String(format_rational(c)));
        }
        Value::Object(m)
    }

    pub fn from_json(nvars: usize, v: &Value) -> Result<Self, AlgebraError> {
        let obj = v
            .as_object()
            .ok_or_else(|| AlgebraError::BadRational(v.to_string()))?;
        let mut p = Self::zero(nvars);
        for (k, c) in obj {
            let e = parse_exponent_key(k).ok_or_else(|| AlgebraError::BadRational(k.clone()))?;
            if e.len() != nvars {
                return Err(AlgebraError::VariableMismatch(e.len(), nvars));
            }
            let c = match c {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => parse_rational(&n.to_string())?,
                other => return Err(AlgebraError::BadRational(other.to_string())),
            };
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomial variable counts differ"
        );
    }
}

pub fn exponent_key(e: &[u32]) -> String {
    let parts: Vec<String> = e.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn parse_exponent_key(k: &str) -> Option<Exponents> {
    let inner = k.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = if self.nvars == 1 {
            vec!["u".into()]
        } else {
            (1..=self.nvars).map(|i| format!("u{i}")).collect()
        };
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), mono.join("*"))?;
            }
        }
        Ok(())
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

    #[test]
    fn truncated_geometric_times_one_minus_u() {
        let p = &uni(&[1, -1]) * &uni(&[1, 1, 1]);
        assert_eq!(p.truncate(2), MultiPoly::one(1));
    }

    #[test]
    fn non_unit_has_no_polynomial_inverse() {
        let u1u2 = MultiPoly::monomial(vec![1, 1], q_int(1));
        let p = &MultiPoly::one(2) - &u1u2;
        assert_eq!(p.try_inverse(), Err(AlgebraError::DivisionByZeroPoly));
        assert_eq!(
            MultiPoly::constant(2, q_int(4)).try_inverse().unwrap().constant_term(),
            Q::new(1.into(), 4.into())
        );
    }

    #[test]
    fn exact_division() {
        let a = &uni(&[1, 0, -1]);
        let b = &uni(&[1, 1]);
        assert_eq!(a.div_exact(b), Some(uni(&[1, -1])));
        assert_eq!(uni(&[1, 0, 1]).div_exact(b), None);
    }

    #[test]
    fn json_round_trip() {
        let p = MultiPoly::from_terms(2, [(vec![1, 0], q_int(3)), (vec![0, 2], Q::new((-1).into(), 2.into()))]);
        let j = p.to_json();
        assert_eq!(j["(1,0)"], "3");
        assert_eq!(MultiPoly::from_json(2, &j).unwrap(), p);
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3), -4i64..5), 0..5).prop_map(|ts| {
            MultiPoly::from_terms(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], q_int(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn product_divides_exactly(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
