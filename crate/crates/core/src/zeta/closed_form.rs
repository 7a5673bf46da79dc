//! `Z(u) = Σ_{e∈E} u^e tr(T_e Π_j (I − u^{a_j} T_{a_j})^{-1})`, the sum running
//! over the residue set `E` and the axes `a_j` of the positive cone in the
//! position lattice. Each inverse is `adj_j / c_j` with `c_j(x) = det(I − x T_{a_j})`
//! and `adj_j(x) = Σ_{m<N} x^m S_m`, where `S_0 = I`, `S_m = T S_{m−1} + c_m I`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::ZetaError;
use crate::algebra::{AlgebraError, MultiPoly, PolyMatrix, RationalFunction, UniPoly, Q};
use crate::complex::{ChamberOperator, QuotientComplex};
use crate::cones::{decompose_cone, SharpCone};

type BigMatrix = Vec<Vec<BigInt>>;

/// Determinant of a square polynomial matrix (fraction-free elimination).
pub fn det_poly_matrix(m: &PolyMatrix) -> MultiPoly {
    m.det()
}

/// Truncated power series of `f` to total degree `n`.
pub fn series_expand(f: &RationalFunction, n: u32) -> Result<MultiPoly, AlgebraError> {
    f.series_expand(n)
}

#[derive(Clone, Debug)]
pub struct ZetaClosedForm {
    pub function: RationalFunction,
    /// Axis positions `a_j`.
    pub axes: Vec<Vec<u64>>,
    /// Residue positions `E`.
    pub residues: Vec<Vec<u64>>,
    /// `c_j(x) = det(I − x T_{a_j})`.
    pub axis_determinants: Vec<UniPoly>,
}

fn dense(op: &ChamberOperator) -> BigMatrix {
    op.to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

fn big_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            for (k, aik) in a[i].iter().enumerate() {
                if aik.is_zero() {
                    continue;
                }
                for (j, bkj) in b[k].iter().enumerate() {
                    if !bkj.is_zero() {
                        row[j] += aik * bkj;
                    }
                }
            }
            row
        })
        .collect()
}

/// `tr(a b)`.
fn trace_of_product(a: &BigMatrix, b: &BigMatrix) -> BigInt {
    let n = a.len();
    let mut t = BigInt::zero();
    for i in 0..n {
        for k in 0..n {
            if !a[i][k].is_zero() && !b[k][i].is_zero() {
                t += &a[i][k] * &b[k][i];
            }
        }
    }
    t
}

fn q_to_big(q: &Q) -> BigInt {
    assert!(q.is_integer(), "characteristic coefficients of integer matrices are integers");
    q.to_integer()
}

/// `det(I − x T)` and the matrices `S_0 … S_{N−1}` of its adjugate.
fn resolvent_data(t: &ChamberOperator) -> (UniPoly, Vec<BigMatrix>) {
    let n = t.dim();
    let x = MultiPoly::var(1, 0);
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let delta = if i == j { MultiPoly::one(1) } else { MultiPoly::zero(1) };
                    &delta - &x.scale(&Q::from_integer(t.get(i, j).into()))
                })
                .collect()
        })
        .collect();
    let c = det_poly_matrix(&PolyMatrix::new(1, rows)).to_univariate(0).expect("univariate");
    let tb = dense(t);
    let id: BigMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut s = Vec::with_capacity(n);
    let mut cur = id;
    for m in 1..=n {
        s.push(cur.clone());
        let mut next = big_mul(&tb, &cur);
        let cm = q_to_big(&c.coeff(m));
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &cm;
        }
        cur = next;
    }
    assert!(cur.iter().flatten().all(Zero::is_zero), "Cayley-Hamilton fails for det(I - xT)");
    (c, s)
}

fn to_u64(v: &[Q]) -> Vec<u64> {
    v.iter()
        .map(|x| {
            let i = x.to_integer();
            assert!(x.is_integer() && i >= BigInt::zero(), "cone points in the positive orthant are natural vectors");
            u64::try_from(i).expect("position fits in u64")
        })
        .collect()
}

/// Closed rational form of the zeta function with the cone data used.
pub fn zeta_closed_form_data<C: QuotientComplex + ?Sized>(c: &C) -> Result<ZetaClosedForm, ZetaError> {
    let d = c.rank();
    let orthant = SharpCone::new(
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect(),
    )?;
    let dec = decompose_cone(&c.position_lattice(), &orthant)?;
    let axes: Vec<Vec<u64>> = dec.axes().iter().map(|a| to_u64(a)).collect();
    let residues: Vec<Vec<u64>> = dec.residues().iter().map(|e| to_u64(e)).collect();
    let mut dets = Vec::with_capacity(d);
    let mut adj_parts = Vec::with_capacity(d);
    for a in &axes {
        let (cj, s) = resolvent_data(&c.translation(a)?);
        dets.push(cj);
        adj_parts.push(s);
    }
    let axis_exps: Vec<Vec<u32>> = axes.iter().map(|a| a.iter().map(|&x| x as u32).collect()).collect();

    let mut num = MultiPoly::zero(d);
    for e in &residues {
        let te = dense(&c.translation(e)?);
        let base: Vec<u32> = e.iter().map(|&x| x as u32).collect();
        let terms = expand_traces(&te, &adj_parts);
        for (ms, tr) in terms {
            if tr.is_zero() {
                continue;
            }
            let mut exps = base.clone();
            for (j, &m) in ms.iter().enumerate() {
                for (x, a) in exps.iter_mut().zip(&axis_exps[j]) {
                    *x += m as u32 * a;
                }
            }
            num.add_term(exps, Q::from_integer(tr));
        }
    }
    let den = dets
        .iter()
        .zip(&axis_exps)
        .fold(MultiPoly::one(d), |acc, (cj, a)| &acc * &MultiPoly::from_univariate(cj, a));
    let function = RationalFunction::new(num, den)?;
    Ok(ZetaClosedForm { function, axes, residues, axis_determinants: dets })
}

/// `Z_Γ(u)` in closed form.
pub fn zeta_closed_form<C: QuotientComplex + ?Sized>(c: &C) -> Result<RationalFunction, ZetaError> {
    Ok(zeta_closed_form_data(c)?.function)
}

/// `tr(T_e S_{1,m_1} ⋯ S_{d,m_d})` for every multi-index `m`.
fn expand_traces(te: &BigMatrix, parts: &[Vec<BigMatrix>]) -> Vec<(Vec<usize>, BigInt)> {
    let Some((last, init)) = parts.split_last() else {
        let n = te.len();
        let tr = (0..n).fold(BigInt::zero(), |acc, i| acc + &te[i][i]);
        return vec![(Vec::new(), tr)];
    };
    // prefix products over all axes but the last
    let mut prefixes: Vec<(Vec<usize>, BigMatrix)> = vec![(Vec::new(), te.clone())];
    for s in init {
        prefixes = prefixes
            .into_iter()
            .flat_map(|(ms, x)| {
                s.iter()
                    .enumerate()
                    .map(|(m, sm)| {
                        let mut ms2 = ms.clone();
                        ms2.push(m);
                        (ms2, big_mul(&x, sm))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    prefixes
        .par_iter()
        .flat_map_iter(|(ms, x)| {
            last.iter().enumerate().map(move |(m, sm)| {
                let mut ms2 = ms.clone();
                ms2.push(m);
                (ms2, trace_of_product(x, sm))
            })
        })
        .collect()
}

/// `Σ tr(T_k) u^k` over valid positions with every `k_j ≥ 1` and `|k| ≤ n`,
/// computed from the operators directly.
pub fn trace_series<C: QuotientComplex + ?Sized>(c: &C, n: u32) -> Result<MultiPoly, ZetaError> {
    let d = c.rank();
    let mut ks = Vec::new();
    for deg in d as u32..=n {
        for m in crate::algebra::ratfun::monomials_of_degree(d, deg) {
            let k: Vec<u64> = m.iter().map(|&x| u64::from(x)).collect();
            if k.iter().all(|&x| x >= 1) && c.is_valid_position(&k) {
                ks.push(m);
            }
        }
    }
    let traces = ks
        .par_iter()
        .map(|m| {
            let k: Vec<u64> = m.iter().map(|&x| u64::from(x)).collect();
            Ok((m.clone(), c.translation(&k)?.trace()))
        })
        .collect::<Result<Vec<_>, ZetaError>>()?;
    Ok(MultiPoly::from_terms(
        d,
        traces.into_iter().map(|(m, t)| (m, Q::from_integer(t.into()))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q_int;
    use crate::complex::{QuotientGraph, ThinQuotient};
    use crate::coxeter::CoxeterSystem;

    #[test]
    fn determinant_examples() {
        let u = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        assert_eq!(det_poly_matrix(&PolyMatrix::identity(1, 3)), one);
        let a = &one - &u;
        let b = &one - &u.pow(2);
        let m = PolyMatrix::new(1, vec![vec![a.clone(), MultiPoly::zero(1)], vec![MultiPoly::zero(1), b.clone()]]);
        assert_eq!(det_poly_matrix(&m), &a * &b);
        for half in [2usize, 3, 4] {
            let t = crate::complex::translation_operator(&QuotientGraph::cycle(2 * half).unwrap(), 1).unwrap();
            let (c, _) = resolvent_data(&t);
            let f = &one - &u.pow(half as u32);
            assert_eq!(MultiPoly::from_univariate(&c, &[1]), &f * &f);
        }
    }

    #[test]
    fn cycle_closed_form() {
        for m in [2u32, 3, 4] {
            let g = QuotientGraph::cycle(2 * m as usize).unwrap();
            let z = zeta_closed_form(&g).unwrap();
            let u = MultiPoly::var(1, 0);
            let expected = RationalFunction::new(
                u.pow(m).scale(&q_int(2 * m as i64)),
                &MultiPoly::one(1) - &u.pow(m),
            )
            .unwrap();
            assert!(z.equals(&expected));
            assert_eq!(z.numerator(), expected.numerator());
            assert_eq!(z.denominator(), expected.denominator());
        }
    }

    #[test]
    fn series_of_basic_functions() {
        let u = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        let f = RationalFunction::new(&one + &u, &one - &u).unwrap();
        let s = series_expand(&f, 3).unwrap();
        assert_eq!(s, MultiPoly::from_terms(1, [(vec![0], q_int(1)), (vec![1], q_int(2)), (vec![2], q_int(2)), (vec![3], q_int(2))]));
        let u1 = MultiPoly::var(2, 0);
        let u2 = MultiPoly::var(2, 1);
        let g = RationalFunction::new(MultiPoly::one(2), &MultiPoly::one(2) - &(&u1 * &u2)).unwrap();
        let s = series_expand(&g, 4).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.coeff(&[2, 2]), q_int(1));
    }

    #[test]
    fn k33_series() {
        let g = QuotientGraph::complete_bipartite(3, 3);
        let z = zeta_closed_form(&g).unwrap();
        let s = series_expand(&z, 10).unwrap();
        assert_eq!(s, trace_series(&g, 10).unwrap());
        assert_eq!(s.coeff(&[1]), q_int(0));
        assert_eq!(s.coeff(&[2]), q_int(36));
    }

    #[test]
    fn thin_a2_closed_form() {
        let t = ThinQuotient::new(CoxeterSystem::from_tag_str("A~2").unwrap(), &[vec![2, 0], vec![0, 2]]).unwrap();
        let data = zeta_closed_form_data(&t).unwrap();
        assert_eq!(data.axes, vec![vec![3, 0], vec![0, 3]]);
        assert_eq!(data.residues.len(), 3);
        let s = series_expand(&data.function, 9).unwrap();
        assert_eq!(s, trace_series(&t, 9).unwrap());
        assert_eq!(data.function.nvars(), 2);
    }
}
