//! Rank-1 quotients: finite graphs with vertices typed 0/1.
//!
//! Each edge `i` is stored with its type-0 endpoint first and gives two
//! directed edges, `2i` (type 0 → type 1) and `2i + 1` (the reverse). Chamber
//! `i` is identified with the directed edge `2i`.

use std::collections::HashMap;

use num_traits::One;
use serde::Deserialize;
use serde_json::{json, Value};

use super::operator::ChamberOperator;
use super::{ComplexError, QuotientComplex};
use crate::algebra::Q;
use crate::cones::RationalLattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    ids: Vec<i64>,
    types: Vec<u8>,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct VertexDoc {
    id: i64,
    #[serde(rename = "type")]
    ty: i64,
}

#[derive(Deserialize)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<Vec<i64>>,
}

impl QuotientGraph {
    /// Vertices `0..types.len()` with the given types; edges by vertex index.
    pub fn new(types: Vec<u8>, edges: &[(usize, usize)]) -> Result<Self, ComplexError> {
        let ids = (0..types.len() as i64).collect();
        Self::with_ids(ids, types, edges)
    }

    fn with_ids(ids: Vec<i64>, types: Vec<u8>, edges: &[(usize, usize)]) -> Result<Self, ComplexError> {
        let n = types.len();
        if let Some(t) = types.iter().find(|&&t| t > 1) {
            return Err(ComplexError::MalformedDocument(format!("vertex type {t} (expected 0 or 1)")));
        }
        let mut oriented = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(ComplexError::MalformedDocument(format!("edge ({u},{v}) refers to a missing vertex")));
            }
            if types[u] == types[v] {
                return Err(ComplexError::NotBipartiteWithTypes(format!(
                    "edge {}-{} joins two vertices of type {}",
                    ids[u], ids[v], types[u]
                )));
            }
            oriented.push(if types[u] == 0 { (u, v) } else { (v, u) });
        }
        let mut out = vec![Vec::new(); n];
        for (i, &(a, b)) in oriented.iter().enumerate() {
            out[a].push(2 * i);
            out[b].push(2 * i + 1);
        }
        Ok(Self { ids, types, edges: oriented, out })
    }

    /// Parses `{"vertices":[{"id":0,"type":0},…],"edges":[[0,1],…]}`.
    pub fn from_json(v: &Value) -> Result<Self, ComplexError> {
        let doc: GraphDoc =
            serde_json::from_value(v.clone()).map_err(|e| ComplexError::MalformedDocument(e.to_string()))?;
        let mut index = HashMap::new();
        let mut types = Vec::new();
        let mut ids = Vec::new();
        for vd in &doc.vertices {
            if index.insert(vd.id, ids.len()).is_some() {
                return Err(ComplexError::MalformedDocument(format!("duplicate vertex id {}", vd.id)));
            }
            if !(0..=1).contains(&vd.ty) {
                return Err(ComplexError::MalformedDocument(format!("vertex type {} (expected 0 or 1)", vd.ty)));
            }
            ids.push(vd.id);
            types.push(vd.ty as u8);
        }
        let edges = doc
            .edges
            .iter()
            .map(|e| match e.as_slice() {
                [a, b] => Ok((
                    *index.get(a).ok_or_else(|| ComplexError::MalformedDocument(format!("unknown vertex {a}")))?,
                    *index.get(b).ok_or_else(|| ComplexError::MalformedDocument(format!("unknown vertex {b}")))?,
                )),
                _ => Err(ComplexError::MalformedDocument("edges are pairs of vertex ids".into())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_ids(ids, types, &edges)
    }

    pub fn from_json_str(s: &str) -> Result<Self, ComplexError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ComplexError::MalformedDocument(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.ids.iter().zip(&self.types).map(|(id, t)| json!({"id": id, "type": t})).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, b)| json!([self.ids[a], self.ids[b]])).collect::<Vec<_>>(),
        })
    }

    /// The cycle on `n` vertices (`n` even), types alternating.
    pub fn cycle(n: usize) -> Result<Self, ComplexError> {
        let types = (0..n).map(|i| (i % 2) as u8).collect();
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(types, &edges)
    }

    /// `K_{a,b}` with the `a` side of type 0.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let types = (0..a + b).map(|i| u8::from(i >= a)).collect();
        let edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        Self::new(types, &edges).expect("complete bipartite graphs are bipartite")
    }

    /// Incidence graph of the Fano plane (3-regular, girth 6).
    pub fn heawood() -> Self {
        let types = (0..14).map(|i| u8::from(i >= 7)).collect();
        let edges: Vec<(usize, usize)> = (0..7)
            .flat_map(|p| [0usize, 1, 3].into_iter().map(move |d| (p, 7 + (p + d) % 7)))
            .collect();
        Self::new(types, &edges).expect("incidence graphs are bipartite")
    }

    /// The 3-cube, typed by parity of the bit count.
    pub fn cube() -> Self {
        let types = (0..8u32).map(|v| (v.count_ones() % 2) as u8).collect();
        let edges: Vec<(usize, usize)> = (0..8usize)
            .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
            .filter(|&(a, b)| a < b)
            .collect();
        Self::new(types, &edges).expect("the cube is bipartite")
    }

    pub fn vertex_count(&self) -> usize {
        self.types.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> i64 {
        self.ids[v]
    }

    pub fn vertex_type(&self, v: usize) -> u8 {
        self.types[v]
    }

    /// Edges as `(type-0 end, type-1 end)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn directed_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn tail(&self, de: usize) -> usize {
        let (a, b) = self.edges[de / 2];
        if de % 2 == 0 { a } else { b }
    }

    pub fn head(&self, de: usize) -> usize {
        self.tail(de ^ 1)
    }

    /// Directed edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// `q` when every vertex has degree `q + 1`.
    pub fn regular_q(&self) -> Option<u64> {
        let d = self.out.first().map_or(0, Vec::len);
        (d >= 1 && self.out.iter().all(|o| o.len() == d)).then(|| d as u64 - 1)
    }

    pub fn require_regular(&self) -> Result<u64, ComplexError> {
        self.regular_q().ok_or_else(|| {
            let mut degrees: Vec<usize> = self.out.iter().map(Vec::len).collect();
            degrees.sort_unstable();
            degrees.dedup();
            ComplexError::IrregularGraph(format!("vertex degrees {degrees:?}"))
        })
    }

    /// Bipartiteness holds by construction; regularity is reported.
    pub fn diagnostics(&self) -> Value {
        json!({
            "vertices": self.vertex_count(),
            "edges": self.edge_count(),
            "chambers": self.edge_count(),
            "bipartite": true,
            "regular_q": self.regular_q(),
        })
    }

    /// Longest shortest-path distance between vertices (`None` if disconnected).
    pub fn diameter(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best = 0;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &de in &self.out[v] {
                    let w = self.head(de);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            let far = *dist.iter().max()?;
            if far == usize::MAX {
                return None;
            }
            best = best.max(far);
        }
        Some(best)
    }
}

/// `B[(a→b), (b→c)] = 1` unless `b→c` reverses `a→b`.
pub fn non_backtracking_operator(g: &QuotientGraph) -> ChamberOperator {
    let triplets = (0..g.directed_edge_count()).flat_map(|de| {
        g.out_edges(g.head(de))
            .iter()
            .filter(move |&&next| next != de ^ 1)
            .map(move |&next| (de, next, 1i128))
    });
    ChamberOperator::from_triplets(g.directed_edge_count(), triplets).expect("unit entries")
}

/// `T_k = B^{2k}` restricted to the type-0 → type-1 orientation class.
pub fn translation_operator(g: &QuotientGraph, k: u64) -> Result<ChamberOperator, ComplexError> {
    let class0: Vec<usize> = (0..g.edge_count()).map(|i| 2 * i).collect();
    let b = non_backtracking_operator(g);
    let t1 = b.mul(&b)?.restrict(&class0);
    t1.pow(k)
}

impl QuotientComplex for QuotientGraph {
    fn rank(&self) -> usize {
        1
    }

    fn chamber_count(&self) -> usize {
        self.edge_count()
    }

    fn position_lattice(&self) -> RationalLattice {
        RationalLattice::new(vec![vec![Q::one()]]).expect("unit lattice")
    }

    fn is_valid_position(&self, k: &[u64]) -> bool {
        k.len() == 1
    }

    fn translation(&self, k: &[u64]) -> Result<ChamberOperator, ComplexError> {
        match k {
            [k] => translation_operator(self, *k),
            _ => Err(ComplexError::InvalidPosition(k.to_vec())),
        }
    }
}

/// Compares `T_k` on `base` with the pushforward of `T_k` on a covering graph:
/// for every chamber `c̃` of the cover and chamber `c'` of the base,
/// `T_k^{base}[π c̃][c'] = Σ_{π c̃' = c'} T_k^{cover}[c̃][c̃']`. The covering map
/// is given on vertices; the base must have no parallel edges.
pub fn verify_cover(cover: &QuotientGraph, base: &QuotientGraph, vertex_map: &[usize], k: u64) -> Result<bool, ComplexError> {
    let mut edge_index = HashMap::new();
    for (i, &e) in base.edges().iter().enumerate() {
        if edge_index.insert(e, i).is_some() {
            return Err(ComplexError::MalformedDocument("base graph has parallel edges".into()));
        }
    }
    if vertex_map.len() != cover.vertex_count() {
        return Err(ComplexError::MalformedDocument("vertex map has the wrong length".into()));
    }
    let proj: Vec<usize> = cover
        .edges()
        .iter()
        .map(|&(a, b)| {
            edge_index
                .get(&(vertex_map[a], vertex_map[b]))
                .copied()
                .ok_or_else(|| ComplexError::MalformedDocument("vertex map is not a graph map".into()))
        })
        .collect::<Result<_, _>>()?;
    let tc = translation_operator(cover, k)?;
    let tb = translation_operator(base, k)?;
    for c in 0..cover.edge_count() {
        let mut pushed = vec![0i128; base.edge_count()];
        for &(j, v) in tc.row(c) {
            pushed[proj[j]] += v;
        }
        if (0..base.edge_count()).any(|j| pushed[j] != tb.get(proj[c], j)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loading_and_validation() {
        let k33 = QuotientGraph::complete_bipartite(3, 3);
        assert_eq!(k33.regular_q(), Some(2));
        assert_eq!(k33.chamber_count(), 9);
        let c6 = QuotientGraph::cycle(6).unwrap();
        assert_eq!(c6.regular_q(), Some(1));
        assert_eq!(c6.chamber_count(), 6);
        assert!(matches!(QuotientGraph::cycle(5), Err(ComplexError::NotBipartiteWithTypes(_))));
        let doc = r#"{"vertices":[{"id":10,"type":0},{"id":20,"type":1}],"edges":[[20,10]]}"#;
        let g = QuotientGraph::from_json_str(doc).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(QuotientGraph::from_json(&g.to_json()).unwrap(), g);
        assert!(matches!(
            QuotientGraph::from_json_str(r#"{"vertices":[{"id":0,"type":0}],"edges":[[0,1]]}"#),
            Err(ComplexError::MalformedDocument(_))
        ));
        let path = QuotientGraph::new(vec![0, 1, 0], &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(path.require_regular(), Err(ComplexError::IrregularGraph(_))));
    }

    #[test]
    fn non_backtracking_examples() {
        let b = non_backtracking_operator(&QuotientGraph::cycle(8).unwrap());
        assert!(b.is_permutation());
        let b = non_backtracking_operator(&QuotientGraph::complete_bipartite(3, 3));
        assert!(b.row_sums().iter().all(|&s| s == 2));
        let single = QuotientGraph::new(vec![0, 1], &[(0, 1)]).unwrap();
        assert_eq!(non_backtracking_operator(&single).nnz(), 0);
        assert_eq!(non_backtracking_operator(&single).dim(), 2);
    }

    #[test]
    fn translation_row_sums_and_traces() {
        let k44 = QuotientGraph::complete_bipartite(4, 4);
        assert!(translation_operator(&k44, 1).unwrap().row_sums().iter().all(|&s| s == 9));
        let k33 = QuotientGraph::complete_bipartite(3, 3);
        assert!(translation_operator(&k33, 1).unwrap().row_sums().iter().all(|&s| s == 4));
        assert!(translation_operator(&k33, 3).unwrap().row_sums().iter().all(|&s| s == 64));
        assert_eq!(translation_operator(&k33, 1).unwrap().trace(), 0);
        assert_eq!(translation_operator(&k33, 2).unwrap().trace(), 36);
        let m = 3;
        let c = QuotientGraph::cycle(2 * m).unwrap();
        let t1 = translation_operator(&c, 1).unwrap();
        assert!(t1.is_permutation());
        for k in 1..=7u64 {
            let expected = if k % m as u64 == 0 { 2 * m as i128 } else { 0 };
            assert_eq!(translation_operator(&c, k).unwrap().trace(), expected);
        }
        assert_eq!(translation_operator(&c, 0).unwrap(), ChamberOperator::identity(6));
    }

    #[test]
    fn product_law_on_graphs() {
        for g in [QuotientGraph::complete_bipartite(3, 3), QuotientGraph::cycle(6).unwrap(), QuotientGraph::heawood()] {
            let ks: Vec<Vec<u64>> = (0..=3).map(|k| vec![k]).collect();
            assert!(super::super::verify_product_law(&g, &ks).unwrap().holds());
        }
    }

    #[test]
    fn double_cover_of_cycle() {
        let m = 3;
        let base = QuotientGraph::cycle(2 * m).unwrap();
        let cover = QuotientGraph::cycle(4 * m).unwrap();
        let map: Vec<usize> = (0..4 * m).map(|v| v % (2 * m)).collect();
        for k in 0..5 {
            assert!(verify_cover(&cover, &base, &map, k).unwrap());
        }
        // a map that is not a covering breaks the identity
        let k33 = QuotientGraph::complete_bipartite(3, 3);
        let doubled = QuotientGraph::new(
            (0..12).map(|v| u8::from(v % 6 >= 3)).collect(),
            &(0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .flat_map(|(i, j)| {
                    // crossed double cover: i→j+3 in one sheet iff (i + j) even
                    let s = (i + j) % 2;
                    [(i, 3 + j + 6 * s), (i + 6, 3 + j + 6 * (1 - s))]
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let map: Vec<usize> = (0..12).map(|v| v % 6).collect();
        assert!(verify_cover(&doubled, &k33, &map, 2).unwrap());
    }

    #[test]
    fn heawood_and_cube() {
        let h = QuotientGraph::heawood();
        assert_eq!(h.regular_q(), Some(2));
        assert_eq!(h.diameter(), Some(3));
        assert_eq!(translation_operator(&h, 1).unwrap().trace(), 0);
        let q3 = QuotientGraph::cube();
        assert_eq!(q3.regular_q(), Some(2));
        assert_eq!(q3.edge_count(), 12);
    }
}
