//! Lattice points of a sharp rational open cone `C = {v : α_j(v) > 0 ∀j}`:
//! every `v ∈ C ∩ Σ` is uniquely `e + Σ ν_j a_j` with `e` in a finite residue
//! set `E`, `ν ∈ ℕ₀^r`, and `a_j` the primitive lattice vectors on the axes.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::intmat::{q_to_i128, rational_det, rational_inverse, rational_left_apply};
use crate::algebra::{IntMatrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("cone functionals are linearly dependent")]
    DegenerateCone,
    #[error("lattice basis is singular")]
    DegenerateLattice,
    #[error("dimension mismatch: expected {0}, got {1}")]
    DimensionMismatch(usize, usize),
    #[error("point is not in the open cone")]
    NotInCone,
    #[error("point is not in the lattice")]
    NotInLattice,
    #[error("no residue representative for the coset of the point")]
    ResidueMissing,
    #[error("integer overflow in lattice coordinates")]
    Overflow,
}

fn square(m: &[Vec<Q>]) -> bool {
    m.iter().all(|r| r.len() == m.len())
}

/// Full-rank lattice `Σ = ℤ^r · basis` (rows are the basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLattice {
    basis: Vec<Vec<Q>>,
    inverse: Vec<Vec<Q>>,
}

impl RationalLattice {
    pub fn new(basis: Vec<Vec<Q>>) -> Result<Self, ConeError> {
        if basis.is_empty() || !square(&basis) {
            return Err(ConeError::DimensionMismatch(basis.len(), basis.first().map_or(0, Vec::len)));
        }
        let inverse = rational_inverse(&basis).ok_or(ConeError::DegenerateLattice)?;
        Ok(Self { basis, inverse })
    }

    pub fn standard(r: usize) -> Self {
        let basis = (0..r)
            .map(|i| (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        Self::new(basis).expect("identity is invertible")
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, ConeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Q]) -> Result<Vec<i128>, ConeError> {
        if v.len() != self.dim() {
            return Err(ConeError::DimensionMismatch(self.dim(), v.len()));
        }
        let z = rational_left_apply(v, &self.inverse);
        z.iter()
            .map(|x| if x.is_integer() { q_to_i128(x).ok_or(ConeError::Overflow) } else { Err(ConeError::NotInLattice) })
            .collect()
    }

    pub fn point(&self, z: &[i128]) -> Vec<Q> {
        let zq: Vec<Q> = z.iter().map(|&x| Q::from_integer(x.into())).collect();
        rational_left_apply(&zq, &self.basis)
    }
}

/// Open cone cut out by independent rational functionals (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpCone {
    alphas: Vec<Vec<Q>>,
}

impl SharpCone {
    pub fn new(alphas: Vec<Vec<Q>>) -> Result<Self, ConeError> {
        if alphas.is_empty() || !square(&alphas) {
            return Err(ConeError::DimensionMismatch(alphas.len(), alphas.first().map_or(0, Vec::len)));
        }
        if rational_det(&alphas).is_zero() {
            return Err(ConeError::DegenerateCone);
        }
        Ok(Self { alphas })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, ConeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn functionals(&self) -> &[Vec<Q>] {
        &self.alphas
    }

    pub fn eval(&self, j: usize, v: &[Q]) -> Q {
        self.alphas[j].iter().zip(v).fold(Q::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        (0..self.dim()).all(|j| self.eval(j, v).is_positive())
    }
}

/// For each `j`, the lattice vector `a_j` with `α_i(a_j) = 0` for `i ≠ j` and
/// `α_j(a_j)` minimal positive.
pub fn axis_generators(lat: &RationalLattice, cone: &SharpCone) -> Result<Vec<Vec<Q>>, ConeError> {
    Ok(axis_coordinates(lat, cone)?.iter().map(|z| lat.point(z)).collect())
}

fn axis_coordinates(lat: &RationalLattice, cone: &SharpCone) -> Result<Vec<Vec<i128>>, ConeError> {
    let r = cone.dim();
    if lat.dim() != r {
        return Err(ConeError::DimensionMismatch(r, lat.dim()));
    }
    let inv = rational_inverse(&cone.alphas).ok_or(ConeError::DegenerateCone)?;
    (0..r)
        .map(|j| {
            let d: Vec<Q> = (0..r).map(|i| inv[i][j].clone()).collect();
            let z = rational_left_apply(&d, &lat.inverse);
            primitive(&z)
        })
        .collect()
}

/// The primitive integer vector on the ray through a nonzero rational vector.
fn primitive(z: &[Q]) -> Result<Vec<i128>, ConeError> {
    let mut den = num_bigint::BigInt::one();
    for x in z {
        den = den.lcm(x.denom());
    }
    let ints: Vec<num_bigint::BigInt> = z.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| i128::try_from(x / &g).map_err(|_| ConeError::Overflow))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDecomposition {
    lattice: RationalLattice,
    cone: SharpCone,
    axes: Vec<Vec<i128>>,
    residues: Vec<Vec<i128>>,
    index: u128,
    /// `α_j(a_j)`.
    axis_values: Vec<Q>,
}

impl ConeDecomposition {
    pub fn lattice(&self) -> &RationalLattice {
        &self.lattice
    }

    pub fn cone(&self) -> &SharpCone {
        &self.cone
    }

    pub fn axes(&self) -> Vec<Vec<Q>> {
        self.axes.iter().map(|z| self.lattice.point(z)).collect()
    }

    pub fn axes_coordinates(&self) -> &[Vec<i128>] {
        &self.axes
    }

    pub fn residues(&self) -> Vec<Vec<Q>> {
        self.residues.iter().map(|z| self.lattice.point(z)).collect()
    }

    pub fn residue_coordinates(&self) -> &[Vec<i128>] {
        &self.residues
    }

    /// `|Σ/Σ′|` for `Σ′ = ⊕ ℤ a_j`.
    pub fn index(&self) -> u128 {
        self.index
    }

    /// The same decomposition with the residue at position `i` removed; for
    /// negative controls.
    pub fn without_residue(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.residues.remove(i);
        out
    }

    /// `β_j(v) = α_j(v) / α_j(a_j)`.
    pub fn normalized(&self, v: &[Q]) -> Vec<Q> {
        (0..self.cone.dim()).map(|j| self.cone.eval(j, v) / &self.axis_values[j]).collect()
    }

    /// Shifts lattice coordinates `z` along the axes so every `β_j ∈ (0, 1]`.
    fn normalize(&self, z: &[i128]) -> Result<(Vec<i128>, Vec<i128>), ConeError> {
        let beta = self.normalized(&self.lattice.point(z));
        let shifts: Vec<i128> = beta
            .iter()
            .map(|b| q_to_i128(&(b.ceil() - Q::one())).ok_or(ConeError::Overflow))
            .collect::<Result<_, _>>()?;
        let mut e = z.to_vec();
        for (k, a) in shifts.iter().zip(&self.axes) {
            for (x, y) in e.iter_mut().zip(a) {
                *x -= k * y;
            }
        }
        Ok((e, shifts))
    }

    /// `v = e + Σ ν_j a_j` with `e ∈ E` and `ν ∈ ℕ₀^r`.
    pub fn decompose_point(&self, v: &[Q]) -> Result<(Vec<Q>, Vec<u128>), ConeError> {
        let z = self.lattice.coordinates(v)?;
        let (e, nu) = self.decompose_coordinates(&z)?;
        Ok((self.lattice.point(&e), nu))
    }

    pub fn decompose_coordinates(&self, z: &[i128]) -> Result<(Vec<i128>, Vec<u128>), ConeError> {
        if !self.cone.contains(&self.lattice.point(z)) {
            return Err(ConeError::NotInCone);
        }
        let (e, nu) = self.normalize(z)?;
        if !self.residues.contains(&e) {
            return Err(ConeError::ResidueMissing);
        }
        Ok((e, nu.into_iter().map(|x| x as u128).collect()))
    }

    /// `e + Σ ν_j a_j` in lattice coordinates.
    pub fn recompose(&self, e: &[i128], nu: &[u128]) -> Vec<i128> {
        let mut v = e.to_vec();
        for (k, a) in nu.iter().zip(&self.axes) {
            for (x, y) in v.iter_mut().zip(a) {
                *x += *k as i128 * y;
            }
        }
        v
    }
}

/// Residue set `E`: one representative per coset of `Σ′ = ⟨a_j⟩` in `Σ`, the
/// one with all normalized coordinates in `(0, 1]`. Cosets are read off the
/// Smith form `U M V = D` of the axis coordinates `M`: they are `x V^{-1}` for
/// `x` in the box `Π [0, d_i)`.
pub fn residue_set(lat: &RationalLattice, cone: &SharpCone, axes: &[Vec<Q>]) -> Result<ConeDecomposition, ConeError> {
    let axes: Vec<Vec<i128>> = axes.iter().map(|a| lat.coordinates(a)).collect::<Result<_, _>>()?;
    let r = cone.dim();
    if axes.len() != r {
        return Err(ConeError::DimensionMismatch(r, axes.len()));
    }
    let axis_values: Vec<Q> = (0..r).map(|j| cone.eval(j, &lat.point(&axes[j]))).collect();
    if axis_values.iter().any(|x| !x.is_positive()) {
        return Err(ConeError::DegenerateCone);
    }
    let m = IntMatrix::new(axes.clone());
    let snf = m.smith();
    if snf.diagonal.contains(&0) {
        return Err(ConeError::DegenerateCone);
    }
    let vq: Vec<Vec<Q>> = snf
        .right
        .rows()
        .iter()
        .map(|row| row.iter().map(|&x| Q::from_integer(x.into())).collect())
        .collect();
    let v_inv = rational_inverse(&vq).expect("unimodular");
    let index: u128 = snf.diagonal.iter().map(|&d| d.unsigned_abs()).product();
    let mut dec = ConeDecomposition {
        lattice: lat.clone(),
        cone: cone.clone(),
        axes,
        residues: Vec::new(),
        index,
        axis_values,
    };
    let mut residues = Vec::with_capacity(index as usize);
    let mut x = vec![0i128; r];
    loop {
        let xq: Vec<Q> = x.iter().map(|&c| Q::from_integer(c.into())).collect();
        let z: Vec<i128> = rational_left_apply(&xq, &v_inv)
            .iter()
            .map(|c| q_to_i128(c).ok_or(ConeError::Overflow))
            .collect::<Result<_, _>>()?;
        residues.push(dec.normalize(&z)?.0);
        // odometer over Π [0, d_i)
        let mut k = 0;
        while k < r {
            x[k] += 1;
            if x[k] < snf.diagonal[k].abs() {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    residues.sort_by_key(|z| dec.lattice.point(z));
    dec.residues = residues;
    Ok(dec)
}

/// Axes and residue set in one step.
pub fn decompose_cone(lat: &RationalLattice, cone: &SharpCone) -> Result<ConeDecomposition, ConeError> {
    let axes = axis_generators(lat, cone)?;
    residue_set(lat, cone, &axes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Ambient coordinates of the offending lattice point.
    pub point: Vec<Q>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub box_radius: u32,
    pub points_checked: usize,
    pub cone_points: usize,
    pub failures: usize,
    /// First failure in lexicographic order of lattice coordinates.
    pub first_counterexample: Option<Counterexample>,
}

impl BijectionReport {
    pub fn verified(&self) -> bool {
        self.failures == 0
    }
}

/// Exhaustive check over lattice coordinates in `[-B, B]^r`: cone membership
/// coincides with successful decomposition, decompositions round-trip, and
/// the residue set satisfies its defining properties.
pub fn verify_bijection(dec: &ConeDecomposition, box_radius: u32) -> BijectionReport {
    let r = dec.cone.dim();
    let b = i128::from(box_radius);
    let side = (2 * b + 1) as usize;
    let total = side.pow(r as u32);
    let coords = |mut idx: usize| -> Vec<i128> {
        let mut z = vec![0i128; r];
        for k in (0..r).rev() {
            z[k] = (idx % side) as i128 - b;
            idx /= side;
        }
        z
    };
    let check = |z: &[i128]| -> (bool, Option<String>) {
        let inside = dec.cone.contains(&dec.lattice.point(z));
        match (inside, dec.decompose_coordinates(z)) {
            (true, Ok((e, nu))) => {
                if dec.recompose(&e, &nu) != z {
                    (true, Some("decomposition does not recompose to the point".into()))
                } else {
                    (true, None)
                }
            }
            (true, Err(err)) => (true, Some(format!("cone point not decomposed: {err}"))),
            (false, Err(ConeError::NotInCone)) => (false, None),
            (false, Ok(_)) => (false, Some("point outside the cone was decomposed".into())),
            (false, Err(err)) => (false, Some(format!("unexpected error: {err}"))),
        }
    };
    let results: Vec<(bool, Option<String>)> = (0..total).into_par_iter().map(|i| check(&coords(i))).collect();
    let mut failures = results.iter().filter(|(_, f)| f.is_some()).count();
    let mut first = results
        .iter()
        .position(|(_, f)| f.is_some())
        .map(|i| Counterexample { point: dec.lattice.point(&coords(i)), reason: results[i].1.clone().unwrap() });

    // Structural checks on E: members in C, e − a_j outside C, one per coset.
    let mut labels: HashMap<Vec<i128>, usize> = HashMap::new();
    let hnf = IntMatrix::new(dec.axes.clone()).hermite();
    for e in &dec.residues {
        let p = dec.lattice.point(e);
        let mut bad = None;
        if !dec.cone.contains(&p) {
            bad = Some("residue outside the cone".to_string());
        }
        for a in &dec.axes {
            let shifted: Vec<i128> = e.iter().zip(a).map(|(x, y)| x - y).collect();
            if dec.cone.contains(&dec.lattice.point(&shifted)) {
                bad = Some("residue minus an axis stays in the cone".into());
            }
        }
        *labels.entry(hnf.reduce_mod_rows(e)).or_default() += 1;
        if let Some(reason) = bad {
            failures += 1;
            first.get_or_insert(Counterexample { point: p, reason });
        }
    }
    if labels.values().any(|&c| c > 1) || labels.len() as u128 != dec.index {
        failures += 1;
        first.get_or_insert(Counterexample {
            point: Vec::new(),
            reason: format!("residue set covers {} of {} cosets", labels.len(), dec.index),
        });
    }
    BijectionReport {
        box_radius,
        points_checked: total,
        cone_points: results.iter().filter(|(inside, _)| *inside).count(),
        failures,
        first_counterexample: first,
    }
}
