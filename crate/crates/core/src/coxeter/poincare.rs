//! Poincaré series `P_π(u) = Σ_w u^{l(w)} π(w)`, truncated and in closed form.

use num_traits::{One, Zero};
use serde_json::Value;

use super::element::{enumerate_ball, parabolic_enumerate, Ball, CoxeterElement, ParabolicSubset};
use super::system::{CoxeterSystem, Order};
use super::CoxeterError;
use crate::algebra::{MultiPoly, PolyMatrix, RationalFunction, UniPoly, Q};

type QMatrix = Vec<Vec<Q>>;

fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

fn matmul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
enum RepKind {
    Trivial,
    Sign,
    Reflection,
    Matrices(Vec<QMatrix>),
}

/// A representation of the generic Hecke algebra given on the generators and
/// extended along reduced words: `π(w) = π(s_1)⋯π(s_l)` for `w = s_1⋯s_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeRepresentation {
    dim: usize,
    kind: RepKind,
}

impl HeckeRepresentation {
    pub fn trivial() -> Self {
        Self { dim: 1, kind: RepKind::Trivial }
    }

    /// `π(w) = (−1)^{l(w)}`.
    pub fn sign() -> Self {
        Self { dim: 1, kind: RepKind::Sign }
    }

    /// Linear parts of the geometric action.
    pub fn reflection(sys: &CoxeterSystem) -> Self {
        Self { dim: sys.dim(), kind: RepKind::Reflection }
    }

    /// Explicit matrices, one per generator. Only the braid relations are
    /// required (so that `π` is well defined on reduced words); they are
    /// checked here.
    pub fn from_matrices(sys: &CoxeterSystem, mats: Vec<QMatrix>) -> Result<Self, CoxeterError> {
        let bad = |m: String| CoxeterError::BadRepresentation(m);
        if mats.len() != sys.rank() {
            return Err(bad(format!("expected {} matrices, got {}", sys.rank(), mats.len())));
        }
        let dim = mats[0].len();
        if dim == 0 || mats.iter().any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
            return Err(bad("matrices must be square of one common size".into()));
        }
        let m = sys.coxeter_matrix();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                if let Order::Finite(k) = m[i][j] {
                    let alt = |a: usize, b: usize| {
                        (0..k).fold(identity(dim), |acc, t| matmul(&acc, &mats[if t % 2 == 0 { a } else { b }]))
                    };
                    if alt(i, j) != alt(j, i) {
                        return Err(CoxeterError::BraidRelationViolated(i, j));
                    }
                }
            }
        }
        Ok(Self { dim, kind: RepKind::Matrices(mats) })
    }

    /// Parses `"trivial"`, `"sign"`, `"reflection"` or a JSON array of matrices
    /// with rational string or integer entries.
    pub fn from_json(sys: &CoxeterSystem, v: &Value) -> Result<Self, CoxeterError> {
        match v {
            Value::String(s) => match s.as_str() {
                "trivial" => Ok(Self::trivial()),
                "sign" => Ok(Self::sign()),
                "reflection" => Ok(Self::reflection(sys)),
                other => Err(CoxeterError::BadRepresentation(format!("unknown representation {other:?}"))),
            },
            Value::Array(ms) => {
                let entry = |e: &Value| -> Result<Q, CoxeterError> {
                    match e {
                        Value::Number(n) => n
                            .as_i64()
                            .map(|x| Q::from_integer(x.into()))
                            .ok_or_else(|| CoxeterError::BadRepresentation(format!("entry {e}"))),
                        Value::String(s) => crate::algebra::parse_rational(s)
                            .map_err(|err| CoxeterError::BadRepresentation(err.to_string())),
                        _ => Err(CoxeterError::BadRepresentation(format!("entry {e}"))),
                    }
                };
                let mats = ms
                    .iter()
                    .map(|m| {
                        m.as_array()
                            .ok_or_else(|| CoxeterError::BadRepresentation("matrix must be an array".into()))?
                            .iter()
                            .map(|row| {
                                row.as_array()
                                    .ok_or_else(|| CoxeterError::BadRepresentation("row must be an array".into()))?
                                    .iter()
                                    .map(entry)
                                    .collect::<Result<Vec<Q>, _>>()
                            })
                            .collect::<Result<QMatrix, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::from_matrices(sys, mats)
            }
            _ => Err(CoxeterError::BadRepresentation("expected a name or a list of matrices".into())),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_matrix(&self, sys: &CoxeterSystem, s: usize) -> QMatrix {
        match &self.kind {
            RepKind::Trivial => identity(1),
            RepKind::Sign => vec![vec![-Q::one()]],
            RepKind::Reflection => sys
                .generator(s)
                .linear()
                .iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect(),
            RepKind::Matrices(m) => m[s].clone(),
        }
    }

    pub fn matrix(&self, sys: &CoxeterSystem, w: &CoxeterElement) -> QMatrix {
        match &self.kind {
            RepKind::Trivial => identity(1),
            RepKind::Sign => {
                let v = if w.length() % 2 == 0 { Q::one() } else { -Q::one() };
                vec![vec![v]]
            }
            _ => w
                .word()
                .iter()
                .fold(identity(self.dim), |acc, &s| matmul(&acc, &self.generator_matrix(sys, s))),
        }
    }
}

/// Which elements a truncated Poincaré series runs over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    Full,
    /// The parabolic subgroup `W_I`.
    Parabolic(ParabolicSubset),
    /// Minimal coset representatives `W^I`.
    MinimalCosets(ParabolicSubset),
}

fn series_from<'a>(
    sys: &CoxeterSystem,
    rep: &HeckeRepresentation,
    elements: impl Iterator<Item = &'a CoxeterElement>,
    n: usize,
) -> PolyMatrix {
    let d = rep.dim();
    let mut coeffs: Vec<QMatrix> = vec![vec![vec![Q::zero(); d]; d]; n + 1];
    for w in elements.filter(|w| w.length() <= n) {
        let m = rep.matrix(sys, w);
        let c = &mut coeffs[w.length()];
        for i in 0..d {
            for j in 0..d {
                c[i][j] += &m[i][j];
            }
        }
    }
    let rows = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| MultiPoly::from_terms(1, coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], c[i][j].clone()))))
                .collect()
        })
        .collect();
    PolyMatrix::new(1, rows)
}

fn is_minimal(sys: &CoxeterSystem, w: &CoxeterElement, i: &ParabolicSubset) -> bool {
    i.members().iter().all(|&s| !w.has_right_descent(sys, s))
}

/// `Σ u^{l(w)} π(w)` over elements of length at most `n` in the chosen range.
pub fn poincare_truncated(
    sys: &CoxeterSystem,
    restriction: &Restriction,
    rep: &HeckeRepresentation,
    n: usize,
) -> Result<PolyMatrix, CoxeterError> {
    Ok(match restriction {
        Restriction::Full => series_from(sys, rep, enumerate_ball(sys, n).elements.iter(), n),
        Restriction::Parabolic(i) => series_from(sys, rep, parabolic_enumerate(sys, i)?.iter(), n),
        Restriction::MinimalCosets(i) => {
            let ball = enumerate_ball(sys, n);
            series_from(sys, rep, ball.elements.iter().filter(|w| is_minimal(sys, w, i)), n)
        }
    })
}

/// A matrix-valued rational function `numerator / denominator` in one variable.
#[derive(Clone, Debug)]
pub struct PoincareRational {
    pub numerator: PolyMatrix,
    pub denominator: MultiPoly,
}

impl PoincareRational {
    /// The scalar function for one-dimensional representations.
    pub fn scalar(&self) -> Option<RationalFunction> {
        (self.numerator.nrows() == 1 && self.numerator.ncols() == 1).then(|| {
            RationalFunction::new(self.numerator.get(0, 0).clone(), self.denominator.clone())
                .expect("denominator is nonzero")
        })
    }

    /// Entrywise power series to degree `n`.
    pub fn series(&self, n: u32) -> PolyMatrix {
        let inv = self.denominator.try_inverse_series(n);
        self.numerator.map(|p| (p * &inv).truncate(n))
    }
}

trait SeriesInverse {
    fn try_inverse_series(&self, n: u32) -> MultiPoly;
}

impl SeriesInverse for MultiPoly {
    /// Truncated power-series inverse of a univariate polynomial with a unit
    /// constant term.
    fn try_inverse_series(&self, n: u32) -> MultiPoly {
        let c0 = self.constant_term();
        assert!(!c0.is_zero(), "series inverse needs a unit constant term");
        let mut inv: Vec<Q> = vec![Q::zero(); n as usize + 1];
        for k in 0..=n as usize {
            let mut acc = if k == 0 { Q::one() } else { Q::zero() };
            for j in 1..=k {
                let a = self.coeff(&[j as u32]);
                if !a.is_zero() {
                    acc -= a * &inv[k - j];
                }
            }
            inv[k] = acc / &c0;
        }
        MultiPoly::from_terms(1, inv.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)))
    }
}

fn uni(p: &MultiPoly) -> UniPoly {
    p.to_univariate(0).expect("univariate")
}

fn multi(p: &UniPoly) -> MultiPoly {
    MultiPoly::from_univariate(p, &[1])
}

/// The Poincaré series in closed form from the finite parabolic subgroups:
/// `P_π = (Σ_{I≠S} (−1)^{|I|+|S|+1} P_{π,I}^{-1})^{-1}`, with inverses taken
/// as adjugate over determinant. A finite group yields its polynomial.
pub fn poincare_rational(sys: &CoxeterSystem, rep: &HeckeRepresentation) -> Result<PoincareRational, CoxeterError> {
    let full = ParabolicSubset::full(sys);
    if full.is_finite() {
        let elems = parabolic_enumerate(sys, &full)?;
        let max = elems.iter().map(|e| e.length()).max().unwrap_or(0);
        let p = series_from(sys, rep, elems.iter(), max);
        return Ok(PoincareRational { numerator: p, denominator: MultiPoly::one(1) });
    }
    let n = sys.rank();
    let dim = rep.dim();
    // Σ sign · adj(P_I) / det(P_I) accumulated over a common denominator.
    let mut parts: Vec<(PolyMatrix, UniPoly)> = Vec::new();
    for i in ParabolicSubset::all_subsets(sys).into_iter().filter(|i| i.len() < n) {
        let elems = parabolic_enumerate(sys, &i)?;
        let max = elems.iter().map(|e| e.length()).max().unwrap_or(0);
        let p = series_from(sys, rep, elems.iter(), max);
        let sign = if (i.len() + n + 1) % 2 == 0 { Q::one() } else { -Q::one() };
        let det = uni(&p.det());
        let adj = p.adjugate().map(|e| e.scale(&sign));
        parts.push((adj, det));
    }
    let lcm = parts.iter().fold(UniPoly::one(), |acc, (_, d)| {
        let g = acc.gcd(d);
        (&acc * d).div_rem(&g).0
    });
    let mut m = PolyMatrix::zeros(1, dim, dim);
    for (adj, det) in &parts {
        let factor = multi(&lcm.div_rem(det).0);
        m = &m + &adj.scale(&factor);
    }
    let det_m = m.det();
    if det_m.is_zero() {
        return Err(CoxeterError::SingularParabolicSum);
    }
    let lcm_m = multi(&lcm);
    let numerator = m.adjugate().scale(&lcm_m);
    Ok(reduce(numerator, det_m))
}

/// Cancels the univariate gcd of all numerator entries and the denominator and
/// normalizes the denominator to constant term one.
fn reduce(num: PolyMatrix, den: MultiPoly) -> PoincareRational {
    let mut g = uni(&den);
    for row in num.rows() {
        for e in row {
            g = g.gcd(&uni(e));
        }
    }
    let cut = |p: &MultiPoly| multi(&uni(p).div_rem(&g).0);
    let den = cut(&den);
    let num = num.map(cut);
    let c0 = den.constant_term();
    let (num, den) = if c0.is_zero() {
        (num, den)
    } else {
        let inv = Q::one() / c0;
        (num.map(|p| p.scale(&inv)), den.scale(&inv))
    };
    PoincareRational { numerator: num, denominator: den }
}

/// `Σ_{I⊆S} (−1)^{|I|} P_π^I(u)` truncated at degree `n`, with the minimal
/// coset representatives taken from the ball of radius `n`; vanishes for
/// infinite groups.
pub fn alternating_coset_sum(sys: &CoxeterSystem, rep: &HeckeRepresentation, n: usize) -> PolyMatrix {
    let ball = enumerate_ball(sys, n);
    alternating_coset_sum_in(sys, rep, &ball, n)
}

fn alternating_coset_sum_in(sys: &CoxeterSystem, rep: &HeckeRepresentation, ball: &Ball, n: usize) -> PolyMatrix {
    let dim = rep.dim();
    let mut total = PolyMatrix::zeros(1, dim, dim);
    for i in ParabolicSubset::all_subsets(sys) {
        let part = series_from(sys, rep, ball.elements.iter().filter(|w| is_minimal(sys, w, &i)), n);
        total = if i.len() % 2 == 0 { &total + &part } else { &total - &part };
    }
    total
}

/// `Σ_{I⊆S} (−1)^{|I|} P_π(u) P_{π,I}(u)^{-1}` as a series truncated at degree
/// `n`; the `I = S` term is the identity.
pub fn alternating_product_sum(
    sys: &CoxeterSystem,
    rep: &HeckeRepresentation,
    n: usize,
) -> Result<PolyMatrix, CoxeterError> {
    let dim = rep.dim();
    let p = poincare_truncated(sys, &Restriction::Full, rep, n)?;
    let mut total = PolyMatrix::zeros(1, dim, dim);
    for i in ParabolicSubset::all_subsets(sys) {
        let term = if i.len() == sys.rank() && !i.is_finite() {
            PolyMatrix::identity(1, dim)
        } else {
            let elems = parabolic_enumerate(sys, &i)?;
            let pi = series_from(sys, rep, elems.iter(), n);
            (&p * &neumann_inverse(&pi, n)).truncate(n as u32)
        };
        total = if i.len() % 2 == 0 { &total + &term } else { &total - &term };
    }
    Ok(total)
}

/// `(I + X)^{-1} = Σ (−X)^k` truncated at degree `n`, for `X(0) = 0`.
fn neumann_inverse(p: &PolyMatrix, n: usize) -> PolyMatrix {
    let dim = p.nrows();
    let id = PolyMatrix::identity(1, dim);
    let minus_x = &id - p;
    let mut term = id.clone();
    let mut acc = id;
    for _ in 0..n {
        term = (&term * &minus_x).truncate(n as u32);
        acc = &acc + &term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q_int;

    fn sys(tag: &str) -> CoxeterSystem {
        CoxeterSystem::from_tag_str(tag).unwrap()
    }

    fn uni_coeffs(p: &MultiPoly, n: usize) -> Vec<Q> {
        (0..=n).map(|k| p.coeff(&[k as u32])).collect()
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn truncated_examples() {
        let t = HeckeRepresentation::trivial();
        let a1 = sys("A~1");
        let p = poincare_truncated(&a1, &Restriction::Full, &t, 3).unwrap();
        assert_eq!(uni_coeffs(p.get(0, 0), 3), ints(&[1, 2, 2, 2]));
        let a2 = sys("A~2");
        let i = ParabolicSubset::new(&a2, &[0, 1]).unwrap();
        let p = poincare_truncated(&a2, &Restriction::Parabolic(i), &t, 5).unwrap();
        assert_eq!(uni_coeffs(p.get(0, 0), 5), ints(&[1, 2, 2, 1, 0, 0]));
        let p = poincare_truncated(&sys("G~2"), &Restriction::Full, &t, 0).unwrap();
        assert_eq!(p.get(0, 0), &MultiPoly::one(1));
    }

    #[test]
    fn a1_closed_form() {
        let f = poincare_rational(&sys("A~1"), &HeckeRepresentation::trivial()).unwrap().scalar().unwrap();
        let one = MultiPoly::one(1);
        let u = MultiPoly::var(1, 0);
        let expected = RationalFunction::new(&one + &u, &one - &u).unwrap();
        assert!(f.equals(&expected));
        assert_eq!(f.numerator(), &(&one + &u));
        assert_eq!(f.denominator(), &(&one - &u));
    }

    #[test]
    fn rational_matches_enumeration() {
        for tag in ["A~1", "A~2", "C~2", "G~2"] {
            let s = sys(tag);
            for rep in [HeckeRepresentation::trivial(), HeckeRepresentation::sign(), HeckeRepresentation::reflection(&s)] {
                let f = poincare_rational(&s, &rep).unwrap();
                let series = f.series(12);
                let direct = poincare_truncated(&s, &Restriction::Full, &rep, 12).unwrap();
                assert_eq!(series, direct, "{tag}");
            }
        }
    }

    #[test]
    fn finite_group_gives_polynomial() {
        let f = poincare_rational(&sys("A2"), &HeckeRepresentation::trivial()).unwrap();
        assert!(f.denominator.is_constant());
        assert_eq!(uni_coeffs(f.numerator.get(0, 0), 4), ints(&[1, 2, 2, 1, 0]));
    }

    #[test]
    fn alternating_identities_vanish() {
        for tag in ["A~1", "A~2", "C~2"] {
            let s = sys(tag);
            let rep = HeckeRepresentation::reflection(&s);
            assert!(alternating_coset_sum(&s, &rep, 10).is_zero(), "{tag}");
            assert!(alternating_product_sum(&s, &rep, 10).unwrap().is_zero(), "{tag}");
        }
    }

    #[test]
    fn braid_check_on_matrices() {
        let s = sys("A~1");
        let ok = HeckeRepresentation::from_matrices(&s, vec![vec![vec![q_int(2)]], vec![vec![q_int(3)]]]);
        assert!(ok.is_ok());
        let a2 = sys("A2");
        let bad = HeckeRepresentation::from_matrices(
            &a2,
            vec![vec![vec![q_int(1), q_int(1)], vec![q_int(0), q_int(1)]], identity(2)],
        );
        assert_eq!(bad.unwrap_err(), CoxeterError::BraidRelationViolated(0, 1));
    }
}
