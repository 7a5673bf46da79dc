//! Group elements, lengths, balls, parabolic subgroups and coset decompositions.

use std::collections::{HashMap, HashSet};

use num_traits::Signed;

use super::affine::AffineMap;
use super::system::{cartan_product, CoxeterSystem, Order};
use super::CoxeterError;

/// Step cap for greedy descent when the system carries no root data.
const DESCENT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterElement {
    map: AffineMap,
    word: Vec<usize>,
}

impl CoxeterElement {
    pub fn identity(sys: &CoxeterSystem) -> Self {
        Self { map: sys.identity(), word: Vec::new() }
    }

    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Reduced word as generator indices; the element is `s_{w[0]} ∘ s_{w[1]} ∘ …`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn word_labels(&self, sys: &CoxeterSystem) -> Vec<String> {
        self.word.iter().map(|&s| sys.labels()[s].clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self, sys: &CoxeterSystem) -> Self {
        let map = self.word.iter().fold(sys.identity(), |acc, &s| sys.generator(s).compose(&acc));
        length_and_word(sys, &map).expect("inverse of a group element")
    }

    /// `self ∘ other`.
    pub fn mul(&self, sys: &CoxeterSystem, other: &Self) -> Self {
        length_and_word(sys, &self.map.compose(&other.map)).expect("product of group elements")
    }

    /// `l(self · s) < l(self)`.
    pub fn has_right_descent(&self, sys: &CoxeterSystem, s: usize) -> bool {
        let inv = self.map.inverse().expect("group elements are invertible");
        let q = inv.apply(sys.base_point());
        sys.walls()[s].side(&q).is_negative()
    }
}

/// Length and the reduced word of an affine map, by greedy descent: while the
/// image of the fundamental chamber lies across the wall of some generator,
/// left-multiply by the lowest such generator.
pub fn length_and_word(sys: &CoxeterSystem, g: &AffineMap) -> Result<CoxeterElement, CoxeterError> {
    if g.dim() != sys.dim() {
        return Err(CoxeterError::NotInGroup);
    }
    let bound = sys.separating_bound(g).unwrap_or(DESCENT_CAP);
    let mut w = g.clone();
    let mut word = Vec::new();
    while let Some(s) = sys.left_descent(&w) {
        if word.len() >= bound {
            return Err(CoxeterError::NotInGroup);
        }
        w = sys.generator(s).compose(&w);
        word.push(s);
    }
    if !w.is_identity() {
        return Err(CoxeterError::NotInGroup);
    }
    Ok(CoxeterElement { map: g.clone(), word })
}

/// Elements of the word ball together with the length histogram.
#[derive(Clone, Debug)]
pub struct Ball {
    pub elements: Vec<CoxeterElement>,
    pub histogram: Vec<usize>,
    index: HashMap<AffineMap, usize>,
}

impl Ball {
    pub fn position(&self, g: &AffineMap) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements of length exactly `k`.
    pub fn layer(&self, k: usize) -> &[CoxeterElement] {
        let start: usize = self.histogram.iter().take(k).sum();
        let len = self.histogram.get(k).copied().unwrap_or(0);
        &self.elements[start.min(self.elements.len())..(start + len).min(self.elements.len())]
    }
}

fn sort_elements(elements: &mut [CoxeterElement]) {
    elements.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
}

fn build_ball(elements: Vec<CoxeterElement>) -> Ball {
    let mut elements = elements;
    sort_elements(&mut elements);
    let max = elements.last().map_or(0, |e| e.length());
    let mut histogram = vec![0; max + 1];
    for e in &elements {
        histogram[e.length()] += 1;
    }
    let index = elements.iter().enumerate().map(|(i, e)| (e.map.clone(), i)).collect();
    Ball { elements, histogram, index }
}

/// Breadth-first closure under right multiplication by `gens`, stopping at
/// length `max_len` or when more than `cap` elements have been found.
fn closure(
    sys: &CoxeterSystem,
    gens: &[usize],
    max_len: Option<usize>,
    cap: Option<usize>,
) -> Option<Vec<CoxeterElement>> {
    let id = CoxeterElement::identity(sys);
    let mut seen: HashSet<AffineMap> = HashSet::from([id.map.clone()]);
    let mut all = vec![id.clone()];
    let mut frontier = vec![id];
    let mut len = 0;
    while !frontier.is_empty() && max_len.is_none_or(|m| len < m) {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in gens {
                let m = w.map.compose(sys.generator(s));
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        let mut layer: Vec<CoxeterElement> = next
            .into_iter()
            .map(|m| length_and_word(sys, &m).expect("products of generators lie in the group"))
            .collect();
        sort_elements(&mut layer);
        all.extend(layer.iter().cloned());
        if cap.is_some_and(|c| all.len() > c) {
            return None;
        }
        frontier = layer;
        len += 1;
    }
    Some(all)
}

/// All elements of length at most `n`, ordered by length and then by word.
pub fn enumerate_ball(sys: &CoxeterSystem, n: usize) -> Ball {
    let gens: Vec<usize> = (0..sys.rank()).collect();
    let mut ball = build_ball(closure(sys, &gens, Some(n), None).expect("no cap"));
    ball.histogram.resize(n + 1, 0);
    ball
}

/// A subset `I` of the generators with the finiteness of `W_I` decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSubset {
    members: Vec<usize>,
    finite: bool,
}

/// Largest order of a finite crystallographic Coxeter group of rank `n`.
fn max_finite_order(n: usize) -> usize {
    match n {
        0 => 1,
        1 => 2,
        2 => 12,
        3 => 48,
        4 => 1152,
        5 => 3840,
        6 => 51_840,
        7 => 2_903_040,
        8 => 696_729_600,
        _ => (1..=n).fold(1usize << n.min(60), |acc, k| acc.saturating_mul(k)),
    }
}

impl ParabolicSubset {
    pub fn new(sys: &CoxeterSystem, members: &[usize]) -> Result<Self, CoxeterError> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&s| s >= sys.rank()) {
            return Err(CoxeterError::MalformedMatrix("generator index out of range".into()));
        }
        let finite = finite_type(sys, &members);
        Ok(Self { members, finite })
    }

    pub fn from_labels(sys: &CoxeterSystem, labels: &[&str]) -> Result<Self, CoxeterError> {
        let idx = labels
            .iter()
            .map(|l| {
                sys.label_index(l)
                    .ok_or_else(|| CoxeterError::MalformedMatrix(format!("unknown generator {l}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(sys, &idx)
    }

    pub fn full(sys: &CoxeterSystem) -> Self {
        let all: Vec<usize> = (0..sys.rank()).collect();
        Self::new(sys, &all).expect("indices in range")
    }

    /// Every subset of `S`, ordered by bitmask.
    pub fn all_subsets(sys: &CoxeterSystem) -> Vec<Self> {
        let n = sys.rank();
        (0..1usize << n)
            .map(|mask| {
                let m: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                Self::new(sys, &m).expect("indices in range")
            })
            .collect()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, s: usize) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self, sys: &CoxeterSystem) -> Vec<String> {
        self.members.iter().map(|&s| sys.labels()[s].clone()).collect()
    }

    fn infinite_error(&self, sys: &CoxeterSystem) -> CoxeterError {
        CoxeterError::InfiniteParabolic(self.labels(sys))
    }
}

/// Connected components of the Coxeter graph restricted to `members`.
fn components(m: &[Vec<Order>], members: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &start in members {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for &b in members {
                if m[a][b] != Order::Finite(2) && a != b && seen.insert(b) {
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// `W_I` is finite iff every leading principal minor of a Cartan matrix
/// realizing the labels on `I` is positive.
fn finite_type(sys: &CoxeterSystem, members: &[usize]) -> bool {
    let m = sys.coxeter_matrix();
    let k = members.len();
    let mut a = vec![vec![0i128; k]; k];
    for (x, &i) in members.iter().enumerate() {
        a[x][x] = 2;
        for (y, &j) in members.iter().enumerate().skip(x + 1) {
            match cartan_product(m[i][j]) {
                Ok((p, q)) => {
                    a[x][y] = i128::from(p);
                    a[y][x] = i128::from(q);
                }
                Err(_) => return false,
            }
        }
    }
    (1..=k).all(|r| {
        let sub: Vec<Vec<i128>> = a[..r].iter().map(|row| row[..r].to_vec()).collect();
        crate::algebra::IntMatrix::new(sub).det() > 0
    })
}

/// All elements of `W_I`, ordered by length and then by word.
pub fn parabolic_enumerate(sys: &CoxeterSystem, i: &ParabolicSubset) -> Result<Vec<CoxeterElement>, CoxeterError> {
    if !i.finite {
        return Err(i.infinite_error(sys));
    }
    let cap = components(sys.coxeter_matrix(), &i.members)
        .iter()
        .fold(1usize, |acc, c| acc.saturating_mul(max_finite_order(c.len())));
    closure(sys, &i.members, None, Some(cap)).ok_or_else(|| i.infinite_error(sys))
}

/// `w = w^I · w_I` with `w^I` the minimal coset representative.
pub fn coset_decompose(
    sys: &CoxeterSystem,
    w: &CoxeterElement,
    i: &ParabolicSubset,
) -> Result<(CoxeterElement, CoxeterElement), CoxeterError> {
    if !i.finite {
        return Err(i.infinite_error(sys));
    }
    let mut v = w.map.clone();
    loop {
        let inv = v.inverse().ok_or(CoxeterError::NotInGroup)?;
        let q = inv.apply(sys.base_point());
        match i.members.iter().find(|&&s| sys.walls()[s].side(&q).is_negative()) {
            Some(&s) => v = v.compose(sys.generator(s)),
            None => break,
        }
    }
    let min = length_and_word(sys, &v)?;
    let par_map = v.inverse().ok_or(CoxeterError::NotInGroup)?.compose(&w.map);
    let par = length_and_word(sys, &par_map)?;
    Ok((min, par))
}
