//! Thin quotients: the Coxeter complex of an affine Weyl group modulo a
//! finite-index sublattice `Λ_Γ` of the coroot lattice `Λ₀`.
//!
//! Chambers are group elements `w` (the alcove `w·C₀`) modulo left
//! translation by `Λ_Γ`. Positions: `e_j = g_j ϖ_j^∨` where `g_j` is the gcd of
//! column `j` of the Cartan matrix, and `T_k` sends `w` to `w ∘ t_λ` with
//! `λ = Σ k_j e_j`.

use std::collections::HashMap;

use serde::Deserialize;
use serde_json::Value;

use super::operator::ChamberOperator;
use super::{ComplexError, QuotientComplex};
use crate::algebra::{IntMatrix, Q};
use crate::cones::RationalLattice;
use crate::coxeter::{AffineMap, CoxeterSystem, R64};

type ChamberKey = (Vec<Vec<i64>>, Vec<i128>);

#[derive(Clone, Debug)]
pub struct ThinQuotient {
    system: CoxeterSystem,
    sublattice: IntMatrix,
    /// `A^{-1}` for converting c-coordinates to coroot coordinates.
    cartan_inverse: Vec<Vec<R64>>,
    steps: Vec<i64>,
    chambers: Vec<AffineMap>,
    index: HashMap<ChamberKey, usize>,
}

#[derive(Deserialize)]
struct ThinDoc {
    #[serde(rename = "type")]
    ty: String,
    sublattice: Vec<Vec<i64>>,
}

fn invert(a: &[Vec<i64>]) -> Option<Vec<Vec<R64>>> {
    let n = a.len();
    let mut m: Vec<Vec<R64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .map(|&x| R64::from_integer(x))
                .chain((0..n).map(|j| R64::from_integer(i64::from(i == j))))
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| m[i][c] != R64::from_integer(0))?;
        m.swap(c, p);
        let inv = R64::from_integer(1) / m[c][c];
        m[c].iter_mut().for_each(|x| *x *= inv);
        for i in 0..n {
            if i != c {
                let f = m[i][c];
                for j in 0..2 * n {
                    let t = f * m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl ThinQuotient {
    /// `sublattice` rows generate `Λ_Γ` in the basis of simple coroots.
    pub fn new(system: CoxeterSystem, sublattice: &[Vec<i64>]) -> Result<Self, ComplexError> {
        let data = system
            .affine_data()
            .ok_or_else(|| ComplexError::NotAffine(system.tag().to_string()))?
            .clone();
        let n = data.cartan.len();
        if sublattice.len() != n || sublattice.iter().any(|r| r.len() != n) {
            return Err(ComplexError::DegenerateSublattice);
        }
        let sub = IntMatrix::from_i64(sublattice);
        if sub.det() == 0 {
            return Err(ComplexError::DegenerateSublattice);
        }
        let cartan_inverse = invert(&data.cartan).expect("Cartan matrices of finite type are invertible");
        let mut q = Self {
            steps: data.position_steps(),
            system,
            sublattice: sub.hermite(),
            cartan_inverse,
            chambers: Vec::new(),
            index: HashMap::new(),
        };
        q.enumerate();
        Ok(q)
    }

    /// Parses `{"type":"A~2","sublattice":[[2,0],[0,2]]}`.
    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let doc: ThinDoc =
            serde_json::from_value(v.clone()).map_err(|e| ComplexError::MalformedDocument(e.to_string()))?;
        let sys = CoxeterSystem::from_tag_str(&doc.ty).map_err(|e| ComplexError::MalformedDocument(e.to_string()))?;
        Self::new(sys, &doc.sublattice)
    }

    pub fn from_json_str(s: &str) -> Result<Self, ComplexError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ComplexError::MalformedDocument(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    /// Hermite basis of `Λ_Γ` in coroot coordinates.
    pub fn sublattice(&self) -> &IntMatrix {
        &self.sublattice
    }

    /// `[Λ₀ : Λ_Γ]`.
    pub fn sublattice_index(&self) -> u128 {
        self.sublattice.det().unsigned_abs()
    }

    /// The multipliers `g_j` with `e_j = g_j ϖ_j^∨`.
    pub fn position_steps(&self) -> &[i64] {
        &self.steps
    }

    /// Representative group elements, one per chamber.
    pub fn chambers(&self) -> &[AffineMap] {
        &self.chambers
    }

    /// Coroot coordinates of a translation given in c-coordinates, if integral.
    fn coroot_coordinates(&self, mu: &[R64]) -> Option<Vec<i128>> {
        let n = mu.len();
        (0..n)
            .map(|i| {
                let x = (0..n).fold(R64::from_integer(0), |acc, j| acc + mu[j] * self.cartan_inverse[j][i]);
                x.is_integer().then(|| i128::from(x.to_integer()))
            })
            .collect()
    }

    fn key(&self, w: &AffineMap) -> ChamberKey {
        let n = self
            .coroot_coordinates(w.translation())
            .expect("translation parts of the affine Weyl group lie in the coroot lattice");
        (w.linear().to_vec(), self.sublattice.reduce_mod_rows(&n))
    }

    pub fn chamber_of(&self, w: &AffineMap) -> Option<usize> {
        self.index.get(&self.key(w)).copied()
    }

    fn enumerate(&mut self) {
        let id = self.system.identity();
        self.index.insert(self.key(&id), 0);
        self.chambers.push(id);
        let mut i = 0;
        while i < self.chambers.len() {
            for s in 0..self.system.rank() {
                let w = self.chambers[i].compose(self.system.generator(s));
                let key = self.key(&w);
                if !self.index.contains_key(&key) {
                    self.index.insert(key, self.chambers.len());
                    self.chambers.push(w);
                }
            }
            i += 1;
        }
    }

    /// `λ = Σ k_j e_j` in c-coordinates, if it lies in `Λ₀`.
    pub fn position_translation(&self, k: &[u64]) -> Option<Vec<R64>> {
        if k.len() != self.steps.len() {
            return None;
        }
        let lambda: Vec<R64> = k.iter().zip(&self.steps).map(|(&kj, &g)| R64::from_integer(kj as i64 * g)).collect();
        self.coroot_coordinates(&lambda).map(|_| lambda)
    }

    /// Chamber reached from chamber `c` by the generator `s` (thin: exactly one).
    pub fn neighbor(&self, c: usize, s: usize) -> usize {
        self.chamber_of(&self.chambers[c].compose(self.system.generator(s))).expect("closed under generators")
    }
}

/// The permutation `w ↦ w ∘ t_λ` on chambers.
pub fn thin_translation_operator(t: &ThinQuotient, k: &[u64]) -> Result<ChamberOperator, ComplexError> {
    let lambda = t.position_translation(k).ok_or_else(|| ComplexError::InvalidPosition(k.to_vec()))?;
    let shift = AffineMap::translation_by(&lambda);
    let perm: Vec<usize> = t
        .chambers
        .iter()
        .map(|w| t.chamber_of(&w.compose(&shift)).expect("translates of chambers are chambers"))
        .collect();
    Ok(ChamberOperator::permutation(&perm))
}

impl QuotientComplex for ThinQuotient {
    fn rank(&self) -> usize {
        self.steps.len()
    }

    fn chamber_count(&self) -> usize {
        self.chambers.len()
    }

    /// Rows `A_i / g` : the positions of the simple coroots.
    fn position_lattice(&self) -> RationalLattice {
        let a = &self.system.affine_data().expect("affine").cartan;
        let rows = a
            .iter()
            .map(|r| r.iter().zip(&self.steps).map(|(&x, &g)| Q::new(x.into(), g.into())).collect())
            .collect();
        RationalLattice::new(rows).expect("Cartan matrix is invertible")
    }

    fn is_valid_position(&self, k: &[u64]) -> bool {
        self.position_translation(k).is_some()
    }

    fn translation(&self, k: &[u64]) -> Result<ChamberOperator, ComplexError> {
        thin_translation_operator(self, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{positions_up_to, verify_product_law};
    use crate::cones::{decompose_cone, SharpCone};

    fn thin(tag: &str, sub: &[Vec<i64>]) -> ThinQuotient {
        ThinQuotient::new(CoxeterSystem::from_tag_str(tag).unwrap(), sub).unwrap()
    }

    #[test]
    fn chamber_counts() {
        assert_eq!(thin("A~2", &[vec![2, 0], vec![0, 2]]).chamber_count(), 24);
        assert_eq!(thin("A~2", &[vec![1, 0], vec![0, 1]]).chamber_count(), 6);
        assert_eq!(thin("A~1", &[vec![3]]).chamber_count(), 6);
        assert_eq!(thin("C~2", &[vec![2, 0], vec![0, 2]]).chamber_count(), 32);
        assert_eq!(thin("G~2", &[vec![1, 0], vec![0, 1]]).chamber_count(), 12);
        let err = ThinQuotient::new(CoxeterSystem::from_tag_str("A2").unwrap(), &[vec![1, 0], vec![0, 1]]);
        assert!(matches!(err, Err(ComplexError::NotAffine(_))));
    }

    #[test]
    fn a1_traces() {
        let m = 3u64;
        let t = thin("A~1", &[vec![m as i64]]);
        assert_eq!(t.position_steps(), &[2]);
        for k in 1..=7 {
            let tr = thin_translation_operator(&t, &[k]).unwrap().trace();
            assert_eq!(tr, if k % m == 0 { 2 * m as i128 } else { 0 });
        }
    }

    #[test]
    fn a2_operators() {
        let t = thin("A~2", &[vec![2, 0], vec![0, 2]]);
        assert!(!t.is_valid_position(&[1, 0]));
        assert!(matches!(thin_translation_operator(&t, &[1, 0]), Err(ComplexError::InvalidPosition(_))));
        assert_eq!(thin_translation_operator(&t, &[0, 0]).unwrap(), ChamberOperator::identity(24));
        let ks = positions_up_to(&t, 4);
        assert!(ks.contains(&vec![1, 1]) && ks.contains(&vec![3, 0]));
        for k in &ks {
            let op = thin_translation_operator(&t, k).unwrap();
            assert!(op.is_permutation());
            assert!(op.trace() >= 0 && op.trace() <= 24);
        }
        assert!(verify_product_law(&t, &ks).unwrap().holds());
        for c in 0..t.chamber_count() {
            for s in 0..3 {
                assert_eq!(t.neighbor(t.neighbor(c, s), s), c);
            }
        }
    }

    #[test]
    fn a2_position_cone() {
        let t = thin("A~2", &[vec![2, 0], vec![0, 2]]);
        let cone = SharpCone::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        let dec = decompose_cone(&t.position_lattice(), &cone).unwrap();
        let int = |v: &[i64]| v.iter().map(|&x| Q::from_integer(x.into())).collect::<Vec<_>>();
        assert_eq!(dec.axes(), vec![int(&[3, 0]), int(&[0, 3])]);
        assert_eq!(dec.residues(), vec![int(&[1, 1]), int(&[2, 2]), int(&[3, 3])]);
    }
}
