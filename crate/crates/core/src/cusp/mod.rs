//! Non-uniform rank-1 quotients: a finite core graph with periodic rays.
//!
//! Ray vertices are `r_0` (the attachment vertex in the core), `r_1`, `r_2`, …
//! joined by edges `e_j = (r_j, r_{j+1})`. In the tree above, a lift of
//! `r_{j+1}` has `q_−(j)` neighbours over `r_j` and one over `r_{j+2}`
//! (`q_+ = 1`). The non-backtracking operator of the tree descends to a
//! weighted operator on the quotient whose entries count lifts:
//!
//! * arriving at `r_{j+1}` upward: up with weight 1, back down with `q_−(j) − 1`;
//! * arriving at `r_j` (`j ≥ 1`) downward: down with `q_−(j−1)`, up with 0;
//! * at a core vertex every other edge (core or ray) has weight 1.

pub mod pade;

pub use pade::{pade_fit, PadeFit};

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::complex::{ChamberOperator, ComplexError, QuotientGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CuspError {
    #[error("malformed ray: {0}")]
    MalformedRay(String),
    #[error("ray types do not alternate from the attachment vertex: {0}")]
    TypeMismatchAtAttachment(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("truncated trace for k={k} differs between depth {depth} ({at_depth}) and depth {} ({at_deeper})", depth + 2)]
    TruncationTooShallow { k: u32, depth: usize, at_depth: i128, at_deeper: i128 },
    #[error("the Hankel system has no solution at degrees ({0}, {1})")]
    SingularFit(usize, usize),
    #[error("invalid degrees: {0}")]
    BadDegrees(String),
}

/// A cusp: `q_−(j)` is `prefix[j]` for `j < prefix.len()` and cycles through
/// `period` afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub attach: usize,
    pub prefix: Vec<u64>,
    pub period: Vec<u64>,
}

impl Ray {
    pub fn q_minus(&self, j: usize) -> u64 {
        if j < self.prefix.len() {
            self.prefix[j]
        } else {
            self.period[(j - self.prefix.len()) % self.period.len()]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspidalQuotient {
    core: QuotientGraph,
    rays: Vec<Ray>,
}

#[derive(Deserialize)]
struct RayDoc {
    attach: i64,
    #[serde(default)]
    prefix: Vec<i64>,
    period: Vec<i64>,
    /// Type of `r_1`, if stated; must differ from the attachment type.
    #[serde(default)]
    first_type: Option<i64>,
}

#[derive(Deserialize)]
struct CuspDoc {
    core: Value,
    rays: Vec<RayDoc>,
}

impl CuspidalQuotient {
    pub fn new(core: QuotientGraph, rays: Vec<Ray>) -> Result<Self, CuspError> {
        for (i, r) in rays.iter().enumerate() {
            if r.attach >= core.vertex_count() {
                return Err(CuspError::MalformedRay(format!("ray {i} attaches to a missing vertex")));
            }
            if r.period.is_empty() {
                return Err(CuspError::MalformedRay(format!("ray {i} has an empty period")));
            }
            if r.prefix.iter().chain(&r.period).any(|&q| q == 0) {
                return Err(CuspError::MalformedRay(format!("ray {i} has a multiplicity below 1")));
            }
        }
        Ok(Self { core, rays })
    }

    /// Parses `{"core":{…graph…},"rays":[{"attach":3,"prefix":[2,2],"period":[3]}]}`;
    /// `attach` is a vertex id of the core.
    pub fn from_json(v: &Value) -> Result<Self, CuspError> {
        let doc: CuspDoc = serde_json::from_value(v.clone())
            .map_err(|e| CuspError::Complex(ComplexError::MalformedDocument(e.to_string())))?;
        let core = QuotientGraph::from_json(&doc.core)?;
        let mut rays = Vec::with_capacity(doc.rays.len());
        for (i, rd) in doc.rays.iter().enumerate() {
            let attach = (0..core.vertex_count())
                .find(|&v| core.vertex_id(v) == rd.attach)
                .ok_or_else(|| CuspError::MalformedRay(format!("ray {i} attaches to unknown vertex {}", rd.attach)))?;
            if let Some(t) = rd.first_type {
                if t == i64::from(core.vertex_type(attach)) || !(0..=1).contains(&t) {
                    return Err(CuspError::TypeMismatchAtAttachment(format!(
                        "ray {i}: r_1 of type {t} next to vertex {} of type {}",
                        rd.attach,
                        core.vertex_type(attach)
                    )));
                }
            }
            let mult = |xs: &[i64]| -> Result<Vec<u64>, CuspError> {
                xs.iter()
                    .map(|&x| {
                        u64::try_from(x)
                            .ok()
                            .filter(|&q| q >= 1)
                            .ok_or_else(|| CuspError::MalformedRay(format!("ray {i} has multiplicity {x}")))
                    })
                    .collect()
            };
            rays.push(Ray { attach, prefix: mult(&rd.prefix)?, period: mult(&rd.period)? });
        }
        Self::new(core, rays)
    }

    pub fn from_json_str(s: &str) -> Result<Self, CuspError> {
        let v: Value = serde_json::from_str(s)
            .map_err(|e| CuspError::Complex(ComplexError::MalformedDocument(e.to_string())))?;
        Self::from_json(&v)
    }

    pub fn core(&self) -> &QuotientGraph {
        &self.core
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// Same core, no rays.
    pub fn core_only(&self) -> Self {
        Self { core: self.core.clone(), rays: Vec::new() }
    }

    fn core_diameter(&self) -> usize {
        self.core.diameter().unwrap_or(self.core.vertex_count())
    }

    fn longest_period(&self) -> usize {
        self.rays.iter().map(|r| r.period.len()).max().unwrap_or(0)
    }

    /// `R(k) = k + diam(core) + longest period`.
    pub fn stationarity_depth(&self, k: u32) -> usize {
        k as usize + self.core_diameter() + self.longest_period()
    }

    pub fn truncate(&self, depth: usize) -> TruncatedQuotient {
        TruncatedQuotient::build(self, depth)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeKind {
    Core,
    /// Edge `e_j` of ray `r`.
    Ray { ray: usize, j: usize },
}

/// The quotient with every ray cut after `depth` edges, as a weighted
/// operator on directed edges. Directed edge `2i` runs from the first to the
/// second endpoint of edge `i` (for ray edges: upward).
#[derive(Clone, Debug)]
pub struct TruncatedQuotient {
    pub depth: usize,
    types: Vec<u8>,
    ends: Vec<(usize, usize)>,
    kinds: Vec<EdgeKind>,
    /// Outermost ray vertices, where the cut was made.
    pub boundary: Vec<usize>,
    operator: ChamberOperator,
}

impl TruncatedQuotient {
    fn build(cq: &CuspidalQuotient, depth: usize) -> Self {
        let core = &cq.core;
        let mut types: Vec<u8> = (0..core.vertex_count()).map(|v| core.vertex_type(v)).collect();
        let mut ends: Vec<(usize, usize)> = core.edges().to_vec();
        let mut kinds = vec![EdgeKind::Core; ends.len()];
        let mut boundary = Vec::new();
        for (ri, ray) in cq.rays.iter().enumerate() {
            let mut prev = ray.attach;
            for j in 0..depth {
                let v = types.len();
                types.push(types[prev] ^ 1);
                ends.push((prev, v));
                kinds.push(EdgeKind::Ray { ray: ri, j });
                prev = v;
            }
            if depth > 0 {
                boundary.push(prev);
            }
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); types.len()];
        for (i, &(a, b)) in ends.iter().enumerate() {
            out[a].push(2 * i);
            out[b].push(2 * i + 1);
        }
        let head = |d: usize| if d % 2 == 0 { ends[d / 2].1 } else { ends[d / 2].0 };
        let mut triplets = Vec::new();
        for d1 in 0..2 * ends.len() {
            for &d2 in &out[head(d1)] {
                let w = weight(cq, &kinds, d1, d2);
                if w != 0 {
                    triplets.push((d1, d2, w));
                }
            }
        }
        let operator = ChamberOperator::from_triplets(2 * ends.len(), triplets).expect("small weights");
        Self { depth, types, ends, kinds, boundary, operator }
    }

    /// The weighted non-backtracking operator on directed edges.
    pub fn operator(&self) -> &ChamberOperator {
        &self.operator
    }

    pub fn directed_edge_count(&self) -> usize {
        2 * self.ends.len()
    }

    fn tail(&self, d: usize) -> usize {
        let (a, b) = self.ends[d / 2];
        if d % 2 == 0 { a } else { b }
    }

    /// Directed edges running from a type-0 to a type-1 vertex.
    pub fn chambers(&self) -> Vec<usize> {
        (0..self.directed_edge_count()).filter(|&d| self.types[self.tail(d)] == 0).collect()
    }

    /// `tr` of the weighted `B^{2k}` on chambers.
    pub fn trace(&self, k: u32) -> Result<i128, CuspError> {
        let b2 = self.operator.mul(&self.operator)?.restrict(&self.chambers());
        Ok(b2.pow(u64::from(k))?.trace())
    }

    /// The same trace by enumerating closed weighted paths of length `2k` from
    /// each chamber, keeping only those accepted by `filter`.
    pub fn trace_by_paths(&self, k: u32, filter: &dyn Fn(&[usize]) -> bool) -> i128 {
        let len = 2 * k as usize;
        let mut total = 0i128;
        let mut path = Vec::with_capacity(len + 1);
        for c in self.chambers() {
            path.clear();
            path.push(c);
            self.walk(len, 1, &mut path, filter, &mut total);
        }
        total
    }

    fn walk(&self, len: usize, weight: i128, path: &mut Vec<usize>, filter: &dyn Fn(&[usize]) -> bool, total: &mut i128) {
        let last = *path.last().expect("nonempty");
        if path.len() == len {
            let w = self.operator.get(last, path[0]);
            if w != 0 && filter(path) {
                *total += weight * w;
            }
            return;
        }
        for &(next, w) in self.operator.row(last) {
            path.push(next);
            self.walk(len, weight * w, path, filter, total);
            path.pop();
        }
    }

    /// Whether a directed edge lies on a ray (for filters).
    pub fn is_ray_edge(&self, d: usize) -> bool {
        matches!(self.kinds[d / 2], EdgeKind::Ray { .. })
    }
}

/// Number of lifts of `d2` continuing a lift of `d1` without backtracking.
fn weight(cq: &CuspidalQuotient, kinds: &[EdgeKind], d1: usize, d2: usize) -> i128 {
    let up1 = d1 % 2 == 0;
    let up2 = d2 % 2 == 0;
    match (kinds[d1 / 2], kinds[d2 / 2]) {
        (EdgeKind::Ray { ray: r1, j: j1 }, EdgeKind::Ray { ray: r2, j: j2 }) if r1 == r2 => {
            let q = |j: usize| i128::from(cq.rays[r1].q_minus(j));
            match (up1, up2) {
                // arrived at r_{j1+1} going up
                (true, true) => 1,
                (true, false) => q(j1) - 1,
                // arrived at r_{j1} going down
                (false, false) => q(j2),
                // the only upward edge is the one just used
                (false, true) => 0,
            }
        }
        // meeting at a core vertex
        (EdgeKind::Core, EdgeKind::Core) => i128::from(d2 != d1 ^ 1),
        _ => 1,
    }
}

/// `tr T⁰_k` on the truncation at `depth`, checked against depth `depth + 2`.
pub fn truncated_trace(cq: &CuspidalQuotient, k: u32, depth: usize) -> Result<i128, CuspError> {
    let a = cq.truncate(depth).trace(k)?;
    let b = cq.truncate(depth + 2).trace(k)?;
    if a != b {
        return Err(CuspError::TruncationTooShallow { k, depth, at_depth: a, at_deeper: b });
    }
    Ok(a)
}

/// `c_1, …, c_K` with `c_k = tr T⁰_k` at the stationarity depth.
pub fn zeta_series(cq: &CuspidalQuotient, max_k: u32) -> Result<Vec<i128>, CuspError> {
    use rayon::prelude::*;
    (1..=max_k)
        .into_par_iter()
        .map(|k| truncated_trace(cq, k, cq.stationarity_depth(k)))
        .collect()
}

/// Filter keeping every closed geodesic: in rank 1 no path can run out along
/// a cusp and return, so there are no ∞-cycles to remove.
pub fn rank_one_infinity_filter(_path: &[usize]) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(attach: usize, prefix: &[u64], period: &[u64]) -> Ray {
        Ray { attach, prefix: prefix.to_vec(), period: period.to_vec() }
    }

    #[test]
    fn validation() {
        let core = QuotientGraph::new(vec![0], &[]).unwrap();
        assert!(CuspidalQuotient::new(core.clone(), vec![ray(0, &[], &[3])]).is_ok());
        assert!(matches!(
            CuspidalQuotient::new(core.clone(), vec![ray(0, &[], &[0])]),
            Err(CuspError::MalformedRay(_))
        ));
        assert!(matches!(CuspidalQuotient::new(core, vec![ray(0, &[2], &[])]), Err(CuspError::MalformedRay(_))));
        let doc = r#"{"core":{"vertices":[{"id":0,"type":0},{"id":1,"type":1}],"edges":[[0,1]]},
                      "rays":[{"attach":1,"period":[2],"first_type":1}]}"#;
        assert!(matches!(CuspidalQuotient::from_json_str(doc), Err(CuspError::TypeMismatchAtAttachment(_))));
        let doc = r#"{"core":{"vertices":[{"id":0,"type":0},{"id":1,"type":1}],"edges":[[0,1]]},
                      "rays":[{"attach":1,"prefix":[2,2],"period":[3],"first_type":0}]}"#;
        let cq = CuspidalQuotient::from_json_str(doc).unwrap();
        assert_eq!((0..5).map(|j| cq.rays()[0].q_minus(j)).collect::<Vec<_>>(), vec![2, 2, 3, 3, 3]);
    }

    #[test]
    fn pure_ray_has_no_geodesics() {
        let core = QuotientGraph::new(vec![0], &[]).unwrap();
        for q in [1, 3] {
            let cq = CuspidalQuotient::new(core.clone(), vec![ray(0, &[], &[q])]).unwrap();
            assert!(zeta_series(&cq, 6).unwrap().iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn thin_ray_is_invisible() {
        let core = QuotientGraph::cycle(6).unwrap();
        let cq = CuspidalQuotient::new(core.clone(), vec![ray(0, &[], &[1]), ray(3, &[1], &[1])]).unwrap();
        let series = zeta_series(&cq, 6).unwrap();
        let expected: Vec<i128> = (1..=6).map(|k| if k % 3 == 0 { 6 } else { 0 }).collect();
        assert_eq!(series, expected);
    }

    #[test]
    fn thick_ray_adds_excursions() {
        let core = QuotientGraph::cycle(4).unwrap();
        let cq = CuspidalQuotient::new(core, vec![ray(0, &[], &[2])]).unwrap();
        let with = zeta_series(&cq, 6).unwrap();
        let without = zeta_series(&cq.core_only(), 6).unwrap();
        assert_eq!(with[0], without[0]);
        assert!(with.iter().zip(&without).any(|(a, b)| a > b));
        assert!(with.iter().zip(&without).all(|(a, b)| a >= b));
        // path enumeration agrees with the matrix trace
        let t = cq.truncate(cq.stationarity_depth(4));
        for k in 1..=4 {
            assert_eq!(t.trace_by_paths(k, &rank_one_infinity_filter), t.trace(k).unwrap());
        }
    }

    #[test]
    fn too_shallow_is_reported() {
        let core = QuotientGraph::cycle(4).unwrap();
        let cq = CuspidalQuotient::new(core, vec![ray(0, &[], &[2])]).unwrap();
        assert!(matches!(truncated_trace(&cq, 4, 0), Err(CuspError::TruncationTooShallow { .. })));
    }
}
