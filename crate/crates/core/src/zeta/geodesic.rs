//! Geometric side: closed non-backtracking paths of even length in a
//! quotient graph, grouped into rotation classes, against the spectral side
//! `tr T_k`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ZetaError;
use crate::complex::{translation_operator, QuotientGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Reject paths whose last edge is the reverse of the first.
    pub tailless: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { tailless: true }
    }
}

/// One rotation class of closed paths of length `2k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicClass {
    /// Lexicographically least rotation, as directed edge indices.
    pub representative: Vec<usize>,
    /// Length of the primitive path this class is a power of.
    pub primitive_length: usize,
    /// Number of rotations starting on a chamber (type 0 → type 1 edge).
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicLevel {
    pub k: u32,
    pub classes: Vec<GeodesicClass>,
    pub weighted_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicClassTable {
    pub depth: u32,
    pub levels: Vec<GeodesicLevel>,
}

impl GeodesicClassTable {
    pub fn weighted_count(&self, k: u32) -> u64 {
        self.levels.iter().find(|l| l.k == k).map_or(0, |l| l.weighted_count)
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(|l| l.classes.is_empty())
    }
}

fn least_rotation(p: &[usize]) -> Vec<usize> {
    (0..p.len())
        .map(|r| p[r..].iter().chain(&p[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn primitive_length(p: &[usize]) -> usize {
    let n = p.len();
    (1..=n)
        .find(|&d| n % d == 0 && (0..n).all(|i| p[i] == p[(i + d) % n]))
        .unwrap_or(n)
}

/// All closed non-backtracking paths of length `len` whose first edge is a
/// chamber, by depth-first search.
fn closed_paths(g: &QuotientGraph, len: usize, opts: OracleOptions) -> Vec<Vec<usize>> {
    (0..g.edge_count())
        .into_par_iter()
        .flat_map_iter(|c| {
            let start = 2 * c;
            let mut found = Vec::new();
            let mut path = vec![start];
            extend(g, len, opts, &mut path, &mut found);
            found
        })
        .collect()
}

fn extend(g: &QuotientGraph, len: usize, opts: OracleOptions, path: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
    let last = *path.last().expect("nonempty path");
    if path.len() == len {
        let first = path[0];
        if g.head(last) == g.tail(first) && (!opts.tailless || first != last ^ 1) {
            found.push(path.clone());
        }
        return;
    }
    for &next in g.out_edges(g.head(last)) {
        if next != last ^ 1 {
            path.push(next);
            extend(g, len, opts, path, found);
            path.pop();
        }
    }
}

/// Rotation classes of closed non-backtracking tailless paths of length `2k`
/// for `1 ≤ k ≤ depth`, weighted by their chamber-based rotations.
pub fn geodesic_count_oracle(g: &QuotientGraph, depth: u32) -> GeodesicClassTable {
    geodesic_count_oracle_with(g, depth, OracleOptions::default())
}

pub fn geodesic_count_oracle_with(g: &QuotientGraph, depth: u32, opts: OracleOptions) -> GeodesicClassTable {
    let levels = (1..=depth)
        .map(|k| {
            let mut classes: BTreeMap<Vec<usize>, GeodesicClass> = BTreeMap::new();
            for p in closed_paths(g, 2 * k as usize, opts) {
                let rep = least_rotation(&p);
                classes
                    .entry(rep.clone())
                    .or_insert_with(|| GeodesicClass {
                        primitive_length: primitive_length(&rep),
                        representative: rep,
                        weight: 0,
                    })
                    .weight += 1;
            }
            let classes: Vec<GeodesicClass> = classes.into_values().collect();
            let weighted_count = classes.iter().map(|c| c.weight).sum();
            GeodesicLevel { k, classes, weighted_count }
        })
        .collect();
    GeodesicClassTable { depth, levels }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzRow {
    pub k: u32,
    pub spectral: i128,
    pub geometric: u64,
}

impl LefschetzRow {
    pub fn equal(&self) -> bool {
        self.spectral == i128::from(self.geometric)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzReport {
    pub rows: Vec<LefschetzRow>,
}

impl LefschetzReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(LefschetzRow::equal)
    }

    pub fn first_mismatch(&self) -> Option<u32> {
        self.rows.iter().find(|r| !r.equal()).map(|r| r.k)
    }
}

/// `tr T_k` against the weighted class count for `1 ≤ k ≤ depth`.
pub fn lefschetz_check(g: &QuotientGraph, depth: u32) -> Result<LefschetzReport, ZetaError> {
    lefschetz_check_with(g, depth, OracleOptions::default())
}

pub fn lefschetz_check_with(g: &QuotientGraph, depth: u32, opts: OracleOptions) -> Result<LefschetzReport, ZetaError> {
    g.require_regular()?;
    let table = geodesic_count_oracle_with(g, depth, opts);
    let rows = (1..=depth)
        .map(|k| {
            Ok(LefschetzRow {
                k,
                spectral: translation_operator(g, u64::from(k))?.trace(),
                geometric: table.weighted_count(k),
            })
        })
        .collect::<Result<_, ZetaError>>()?;
    Ok(LefschetzReport { rows })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SProbeRow {
    pub k: u32,
    /// `tr T_k`.
    pub plain: i128,
    /// `q^{2k} tr T_k`, the volume `|K\KaK|` inserted.
    pub weighted: i128,
    pub geometric: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SProbeReport {
    pub q: u64,
    pub rows: Vec<SProbeRow>,
    pub plain_matches: bool,
    pub weighted_matches: bool,
}

impl SProbeReport {
    /// `"plain"`, `"weighted"`, `"both"`, `"neither"`, or `"empty"` at depth 0.
    pub fn matching(&self) -> &'static str {
        if self.rows.is_empty() {
            return "empty";
        }
        match (self.plain_matches, self.weighted_matches) {
            (true, true) => "both",
            (true, false) => "plain",
            (false, true) => "weighted",
            (false, false) => "neither",
        }
    }
}

/// Compares both normalizations of the spectral series with the geometric one.
pub fn s_function_probe(g: &QuotientGraph, depth: u32) -> Result<SProbeReport, ZetaError> {
    let q = g.require_regular()?;
    let table = geodesic_count_oracle(g, depth);
    let rows: Vec<SProbeRow> = (1..=depth)
        .map(|k| {
            let plain = translation_operator(g, u64::from(k))?.trace();
            let vol = i128::from(q).checked_pow(2 * k).ok_or(crate::complex::ComplexError::Overflow)?;
            Ok(SProbeRow {
                k,
                plain,
                weighted: plain.checked_mul(vol).ok_or(crate::complex::ComplexError::Overflow)?,
                geometric: table.weighted_count(k),
            })
        })
        .collect::<Result<_, ZetaError>>()?;
    let plain_matches = !rows.is_empty() && rows.iter().all(|r| r.plain == i128::from(r.geometric));
    let weighted_matches = !rows.is_empty() && rows.iter().all(|r| r.weighted == i128::from(r.geometric));
    Ok(SProbeReport { q, rows, plain_matches, weighted_matches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_classes() {
        let m = 3;
        let g = QuotientGraph::cycle(2 * m).unwrap();
        let t = geodesic_count_oracle(&g, 2 * m as u32);
        for level in &t.levels {
            let expected = if level.k as usize % m == 0 { 2 * m as u64 } else { 0 };
            assert_eq!(level.weighted_count, expected, "k={}", level.k);
            assert_eq!(level.classes.is_empty(), expected == 0);
        }
        // at k = 2m the two classes are squares of primitive loops
        let top = &t.levels[2 * m - 1];
        assert!(top.classes.iter().all(|c| c.primitive_length == 2 * m));
    }

    #[test]
    fn k33_levels() {
        let g = QuotientGraph::complete_bipartite(3, 3);
        let t = geodesic_count_oracle(&g, 2);
        assert_eq!(t.weighted_count(1), 0);
        assert_eq!(t.weighted_count(2), 36);
        // 9 four-cycles, each traversed in two directions
        assert_eq!(t.levels[1].classes.len(), 18);
        assert!(t.levels[1].classes.iter().all(|c| c.weight == 2));
    }

    #[test]
    fn single_edge_is_empty() {
        let g = QuotientGraph::new(vec![0, 1], &[(0, 1)]).unwrap();
        assert!(geodesic_count_oracle(&g, 4).is_empty());
    }

    #[test]
    fn lefschetz_and_negative_control() {
        let g = QuotientGraph::complete_bipartite(3, 3);
        assert!(lefschetz_check(&g, 5).unwrap().holds());
        let tailed = lefschetz_check_with(&g, 5, OracleOptions { tailless: false }).unwrap();
        assert_eq!(tailed.first_mismatch(), Some(3));
    }

    #[test]
    fn s_probe() {
        let c = s_function_probe(&QuotientGraph::cycle(6).unwrap(), 6).unwrap();
        assert_eq!(c.matching(), "both");
        let k = s_function_probe(&QuotientGraph::complete_bipartite(3, 3), 4).unwrap();
        assert_eq!(k.matching(), "plain");
        assert_eq!(s_function_probe(&QuotientGraph::cycle(6).unwrap(), 0).unwrap().matching(), "empty");
    }
}
