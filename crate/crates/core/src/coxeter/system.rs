//! Coxeter systems with an exact geometric realization.
//!
//! Every system acts on ℚ^d by affine reflections. Each generator `s` is the
//! reflection in a wall `{x : f_s(x) = b_s}`, written `x ↦ x − (f_s(x) − b_s) h_s`
//! with `f_s(h_s) = 2`, and a base point `p` lies strictly on the positive side
//! of every wall. For affine type tags the coordinates are `c_j = ⟨α_j, x⟩`
//! (the fundamental-coweight basis); in those coordinates the fundamental
//! alcove is `c_j > 0, Σ m_j c_j < 1` and every map is integral.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use serde_json::Value;

use super::affine::{AffineMap, R64};
use super::cartan;
use super::CoxeterError;

/// Entry of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeTag {
    /// Irreducible affine type, e.g. `A~2`.
    Affine { family: char, rank: usize },
    /// Irreducible finite type, e.g. `A2`.
    Finite { family: char, rank: usize },
    Custom,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Affine { family, rank } => write!(f, "{family}~{rank}"),
            TypeTag::Finite { family, rank } => write!(f, "{family}{rank}"),
            TypeTag::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for TypeTag {
    type Err = CoxeterError;

    /// Accepts `A~2`, `Ã2`, `C~2`, `G~2`, `A2`, `B3`, …
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoxeterError::UnknownTypeTag(s.to_string());
        let t = s.trim();
        let mut chars = t.chars();
        let first = chars.next().ok_or_else(bad)?;
        let (family, rest, affine) = match first {
            'Ã' => ('A', chars.as_str(), true),
            c if c.is_ascii_alphabetic() => {
                let rest = chars.as_str();
                match rest.strip_prefix('~') {
                    Some(r) => (c.to_ascii_uppercase(), r, true),
                    None => (c.to_ascii_uppercase(), rest, false),
                }
            }
            _ => return Err(bad()),
        };
        let rank: usize = rest.parse().map_err(|_| bad())?;
        cartan::finite_cartan(family, rank).ok_or_else(bad)?;
        Ok(if affine {
            TypeTag::Affine { family, rank }
        } else {
            TypeTag::Finite { family, rank }
        })
    }
}

/// Reflecting hyperplane of one generator together with its reflection data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub normal: Vec<R64>,
    pub offset: R64,
    pub root: Vec<R64>,
}

impl Wall {
    /// `f(x) − b`; positive on the fundamental chamber's side.
    pub fn side(&self, x: &[R64]) -> R64 {
        self.normal.iter().zip(x).fold(-self.offset, |acc, (a, b)| acc + a * b)
    }

    fn reflection(&self) -> Option<AffineMap> {
        let d = self.normal.len();
        let mut linear = vec![vec![0i64; d]; d];
        for i in 0..d {
            for j in 0..d {
                let v = R64::from_integer(i64::from(i == j)) - self.root[i] * self.normal[j];
                if !v.is_integer() {
                    return None;
                }
                linear[i][j] = v.to_integer();
            }
        }
        let translation = self.root.iter().map(|h| *h * self.offset).collect();
        Some(AffineMap::new(linear, translation))
    }
}

/// Finite root data carried by affine systems; thin quotients need it.
#[derive(Clone, Debug)]
pub struct AffineData {
    /// Cartan matrix of the finite part.
    pub cartan: Vec<Vec<i64>>,
    /// Highest root coefficients `m_i`.
    pub highest_root: Vec<i64>,
    pub positive_roots: Vec<Vec<i64>>,
    /// Index of the affine generator `s_0` (always the last one).
    pub affine_generator: usize,
}

#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    labels: Vec<String>,
    matrix: Vec<Vec<Order>>,
    tag: TypeTag,
    generators: Vec<AffineMap>,
    walls: Vec<Wall>,
    base_point: Vec<R64>,
    affine: Option<AffineData>,
    finite_roots: Option<usize>,
}

/// Custom system description: `{"m": [[1,3,3],[3,1,3],[3,3,1]]}`, optionally
/// with an explicit affine action and a base point inside the fundamental
/// chamber. Matrix entries are integers, with `0`, `"inf"` or `"∞"` for ∞.
#[derive(Clone, Debug, Deserialize)]
pub struct CustomSystem {
    pub m: Vec<Vec<Value>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub action: Option<Vec<CustomReflection>>,
    #[serde(default)]
    pub base_point: Option<Vec<Value>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CustomReflection {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<Value>,
}

fn parse_r64(v: &Value) -> Option<R64> {
    match v {
        Value::Number(n) => n.as_i64().map(R64::from_integer),
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((a, b)) => {
                    let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
                    (b != 0).then(|| R64::new(a, b))
                }
                None => s.parse().ok().map(R64::from_integer),
            }
        }
        _ => None,
    }
}

fn parse_order(v: &Value) -> Result<Order, CoxeterError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(0) | Some(-1) => Ok(Order::Infinite),
            Some(m) if m >= 1 => Ok(Order::Finite(m as u32)),
            _ => Err(CoxeterError::UnsupportedCoxeterLabel(v.to_string())),
        },
        Value::String(s) if matches!(s.trim(), "inf" | "∞" | "infinity") => Ok(Order::Infinite),
        _ => Err(CoxeterError::UnsupportedCoxeterLabel(v.to_string())),
    }
}

/// `a_ij a_ji` for a crystallographic label.
pub(crate) fn cartan_product(m: Order) -> Result<(i64, i64), CoxeterError> {
    Ok(match m {
        Order::Finite(2) => (0, 0),
        Order::Finite(3) => (-1, -1),
        Order::Finite(4) => (-1, -2),
        Order::Finite(6) => (-1, -3),
        Order::Infinite => (-2, -2),
        other => return Err(CoxeterError::UnsupportedCoxeterLabel(other.to_string())),
    })
}

fn r(n: i64) -> R64 {
    R64::from_integer(n)
}

fn unit(d: usize, i: usize) -> Vec<R64> {
    (0..d).map(|j| r(i64::from(i == j))).collect()
}

/// Walls of the linear (Tits cone) realization of a Cartan matrix in the
/// coordinates `c_j = ⟨α_j, x⟩`.
fn linear_walls(cartan: &[Vec<i64>]) -> Vec<Wall> {
    let n = cartan.len();
    (0..n)
        .map(|i| Wall {
            normal: unit(n, i),
            offset: R64::zero(),
            root: cartan[i].iter().map(|&a| r(a)).collect(),
        })
        .collect()
}

impl CoxeterSystem {
    /// Builds a system from a type tag such as `A~2` or `B3`.
    pub fn from_tag(tag: TypeTag) -> Result<Self, CoxeterError> {
        match tag {
            TypeTag::Affine { family, rank } => Self::affine(family, rank),
            TypeTag::Finite { family, rank } => {
                let a = cartan::finite_cartan(family, rank)
                    .ok_or_else(|| CoxeterError::UnknownTypeTag(format!("{family}{rank}")))?;
                let walls = linear_walls(&a);
                let labels = (1..=rank).map(|i| format!("s{i}")).collect();
                let nroots = cartan::positive_roots(&a).len();
                let matrix = orders_from_cartan(&a)?;
                let mut sys = Self::assemble(
                    labels,
                    matrix,
                    TypeTag::Finite { family, rank },
                    walls,
                    vec![r(1); rank],
                    None,
                )?;
                sys.finite_roots = Some(nroots);
                Ok(sys)
            }
            TypeTag::Custom => Err(CoxeterError::UnknownTypeTag("custom".into())),
        }
    }

    pub fn from_tag_str(s: &str) -> Result<Self, CoxeterError> {
        Self::from_tag(s.parse()?)
    }

    fn affine(family: char, rank: usize) -> Result<Self, CoxeterError> {
        let tag = TypeTag::Affine { family, rank };
        let a = cartan::finite_cartan(family, rank)
            .ok_or_else(|| CoxeterError::UnknownTypeTag(tag.to_string()))?;
        let (theta, coroot) = cartan::highest_root_and_coroot(&a)
            .ok_or_else(|| CoxeterError::UnknownTypeTag(tag.to_string()))?;
        let n = rank;
        let mut walls = linear_walls(&a);
        // θ^∨ in c-coordinates: c_j(θ^∨) = Σ_i n_i a_ij
        let theta_vee: Vec<R64> = (0..n)
            .map(|j| r((0..n).map(|i| coroot[i] * a[i][j]).sum()))
            .collect();
        walls.push(Wall {
            normal: theta.iter().map(|&m| r(-m)).collect(),
            offset: r(-1),
            root: theta_vee.iter().map(|x| -*x).collect(),
        });
        let base_point = theta.iter().map(|&m| R64::new(1, m * (n as i64 + 1))).collect();
        let mut labels: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        labels.push("s0".into());
        let positive_roots = cartan::positive_roots(&a);
        let generators: Vec<AffineMap> = walls
            .iter()
            .map(|w| w.reflection().expect("affine reflections are integral"))
            .collect();
        let matrix = orders_from_maps(&generators);
        Self::assemble(
            labels,
            matrix,
            tag,
            walls,
            base_point,
            Some(AffineData {
                cartan: a,
                highest_root: theta,
                positive_roots,
                affine_generator: n,
            }),
        )
    }

    /// Builds a system from an explicit Coxeter matrix, with or without an
    /// explicit action.
    pub fn from_custom(spec: &CustomSystem) -> Result<Self, CoxeterError> {
        let n = spec.m.len();
        if n == 0 || spec.m.iter().any(|r| r.len() != n) {
            return Err(CoxeterError::MalformedMatrix("Coxeter matrix must be square and nonempty".into()));
        }
        let mut matrix = vec![vec![Order::Finite(1); n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = parse_order(&spec.m[i][j])?;
            }
        }
        for i in 0..n {
            if matrix[i][i] != Order::Finite(1) {
                return Err(CoxeterError::NonInvolutiveGenerator(i));
            }
            for j in 0..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(CoxeterError::MalformedMatrix(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                if i != j {
                    if matrix[i][j] == Order::Finite(1) {
                        return Err(CoxeterError::UnsupportedCoxeterLabel("1 off the diagonal".into()));
                    }
                    cartan_product(matrix[i][j])?;
                }
            }
        }
        let labels = match &spec.labels {
            Some(l) if l.len() == n => l.clone(),
            Some(_) => return Err(CoxeterError::MalformedMatrix("label count differs from matrix size".into())),
            None => (1..=n).map(|i| format!("s{i}")).collect(),
        };
        match &spec.action {
            None => {
                let mut a = vec![vec![0i64; n]; n];
                for i in 0..n {
                    a[i][i] = 2;
                    for j in i + 1..n {
                        let (x, y) = cartan_product(matrix[i][j])?;
                        a[i][j] = x;
                        a[j][i] = y;
                    }
                }
                let walls = linear_walls(&a);
                Self::assemble(labels, matrix, TypeTag::Custom, walls, vec![r(1); n], None)
            }
            Some(action) => {
                if action.len() != n {
                    return Err(CoxeterError::MalformedMatrix("one reflection per generator required".into()));
                }
                let d = action[0].translation.len();
                let base: Vec<R64> = spec
                    .base_point
                    .as_ref()
                    .ok_or_else(|| CoxeterError::MalformedMatrix("an explicit action needs base_point".into()))?
                    .iter()
                    .map(|v| parse_r64(v).ok_or_else(|| CoxeterError::MalformedMatrix(format!("bad coordinate {v}"))))
                    .collect::<Result<_, _>>()?;
                if base.len() != d {
                    return Err(CoxeterError::MalformedMatrix("base_point dimension".into()));
                }
                let mut walls = Vec::with_capacity(n);
                for (k, refl) in action.iter().enumerate() {
                    let t: Vec<R64> = refl
                        .translation
                        .iter()
                        .map(|v| parse_r64(v).ok_or_else(|| CoxeterError::MalformedMatrix(format!("bad coordinate {v}"))))
                        .collect::<Result<_, _>>()?;
                    if refl.linear.len() != d || refl.linear.iter().any(|r| r.len() != d) || t.len() != d {
                        return Err(CoxeterError::MalformedMatrix("action dimension".into()));
                    }
                    let map = AffineMap::new(refl.linear.clone(), t);
                    walls.push(wall_of_reflection(&map, &base).ok_or(CoxeterError::NonInvolutiveGenerator(k))?);
                }
                Self::assemble(labels, matrix, TypeTag::Custom, walls, base, None)
            }
        }
    }

    fn assemble(
        labels: Vec<String>,
        matrix: Vec<Vec<Order>>,
        tag: TypeTag,
        walls: Vec<Wall>,
        base_point: Vec<R64>,
        affine: Option<AffineData>,
    ) -> Result<Self, CoxeterError> {
        let generators: Vec<AffineMap> = walls
            .iter()
            .enumerate()
            .map(|(k, w)| w.reflection().ok_or(CoxeterError::NonInvolutiveGenerator(k)))
            .collect::<Result<_, _>>()?;
        let sys = Self {
            labels,
            matrix,
            tag,
            generators,
            walls,
            base_point,
            affine,
            finite_roots: None,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// Checks involutions, braid relations, and that the base point is inside
    /// the fundamental chamber.
    fn validate(&self) -> Result<(), CoxeterError> {
        let n = self.rank();
        for (k, g) in self.generators.iter().enumerate() {
            if !g.compose(g).is_identity() || g.is_identity() {
                return Err(CoxeterError::NonInvolutiveGenerator(k));
            }
            if !self.walls[k].side(&self.base_point).is_positive() {
                return Err(CoxeterError::MalformedMatrix(format!(
                    "base point is not strictly inside the wall of generator {k}"
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let st = self.generators[i].compose(&self.generators[j]);
                let viol = || CoxeterError::BraidRelationViolated(i, j);
                match self.matrix[i][j] {
                    Order::Finite(m) => {
                        let mut p = AffineMap::identity(self.dim());
                        for k in 1..=m {
                            p = p.compose(&st);
                            if p.is_identity() != (k == m) {
                                return Err(viol());
                            }
                        }
                    }
                    Order::Infinite => {
                        let mut p = AffineMap::identity(self.dim());
                        for _ in 0..12 {
                            p = p.compose(&st);
                            if p.is_identity() {
                                return Err(viol());
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Dimension of the space the group acts on.
    pub fn dim(&self) -> usize {
        self.base_point.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn coxeter_matrix(&self) -> &[Vec<Order>] {
        &self.matrix
    }

    pub fn tag(&self) -> &TypeTag {
        &self.tag
    }

    pub fn generator(&self, s: usize) -> &AffineMap {
        &self.generators[s]
    }

    pub fn generators(&self) -> &[AffineMap] {
        &self.generators
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn base_point(&self) -> &[R64] {
        &self.base_point
    }

    pub fn affine_data(&self) -> Option<&AffineData> {
        self.affine.as_ref()
    }

    pub fn is_affine(&self) -> bool {
        self.affine.is_some()
    }

    pub fn identity(&self) -> AffineMap {
        AffineMap::identity(self.dim())
    }

    /// Lowest-index generator `s` with `l(s·w) < l(w)`, judged by which side of
    /// the walls of the fundamental chamber the image of the base point lies.
    pub fn left_descent(&self, w: &AffineMap) -> Option<usize> {
        let q = w.apply(&self.base_point);
        self.walls.iter().position(|wall| wall.side(&q).is_negative())
    }

    /// Upper bound on the length of any group element mapping the base point
    /// to `w(p)`: the number of reflecting hyperplanes separating the two
    /// points. `None` when no finite root data is available.
    pub fn separating_bound(&self, w: &AffineMap) -> Option<usize> {
        let q = w.apply(&self.base_point);
        let p = &self.base_point;
        if let Some(a) = &self.affine {
            let mut count: i64 = 0;
            for root in &a.positive_roots {
                let eval = |x: &[R64]| root.iter().zip(x).fold(R64::zero(), |acc, (&c, v)| acc + *v * c);
                let (ep, eq) = (eval(p), eval(&q));
                count += (eq.floor() - ep.floor()).to_integer().abs();
                if eq.is_integer() {
                    count += 1;
                }
            }
            return Some(count as usize);
        }
        self.finite_roots
    }

    /// Orders of the products `s_i s_j` observed in the action; equals the
    /// Coxeter matrix for every validated system.
    pub fn observed_orders(&self) -> Vec<Vec<Order>> {
        orders_from_maps(&self.generators)
    }
}

fn orders_from_maps(gens: &[AffineMap]) -> Vec<Vec<Order>> {
    let n = gens.len();
    let mut m = vec![vec![Order::Finite(1); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let st = gens[i].compose(&gens[j]);
            let mut p = st.clone();
            let mut order = Order::Infinite;
            for k in 1..=12u32 {
                if p.is_identity() {
                    order = Order::Finite(k);
                    break;
                }
                p = p.compose(&st);
            }
            m[i][j] = order;
        }
    }
    m
}

fn orders_from_cartan(a: &[Vec<i64>]) -> Result<Vec<Vec<Order>>, CoxeterError> {
    let n = a.len();
    let mut m = vec![vec![Order::Finite(1); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[i][j] = match a[i][j] * a[j][i] {
                    0 => Order::Finite(2),
                    1 => Order::Finite(3),
                    2 => Order::Finite(4),
                    3 => Order::Finite(6),
                    _ => Order::Infinite,
                };
            }
        }
    }
    Ok(m)
}

/// Recovers the wall of an affine reflection: `I − L = h fᵀ` has rank one and
/// `t = b h`. Oriented so the base point is on the positive side.
fn wall_of_reflection(map: &AffineMap, base: &[R64]) -> Option<Wall> {
    let d = map.dim();
    let diff: Vec<Vec<R64>> = (0..d)
        .map(|i| (0..d).map(|j| r(i64::from(i == j) - map.linear()[i][j])).collect())
        .collect();
    let col = (0..d).find(|&j| (0..d).any(|i| !diff[i][j].is_zero()))?;
    let h: Vec<R64> = (0..d).map(|i| diff[i][col]).collect();
    let row = (0..d).find(|&i| !h[i].is_zero())?;
    let f: Vec<R64> = (0..d).map(|j| diff[row][j] / h[row]).collect();
    for i in 0..d {
        for j in 0..d {
            if h[i] * f[j] != diff[i][j] {
                return None;
            }
        }
    }
    let b = map.translation()[row] / h[row];
    if (0..d).any(|i| map.translation()[i] != b * h[i]) {
        return None;
    }
    let mut wall = Wall { normal: f, offset: b, root: h };
    let side = wall.side(base);
    if side.is_zero() {
        return None;
    }
    if side.is_negative() {
        wall = Wall {
            normal: wall.normal.iter().map(|x| -*x).collect(),
            offset: -wall.offset,
            root: wall.root.iter().map(|x| -*x).collect(),
        };
    }
    // f(h) = 2 for a genuine reflection
    let fh = wall.normal.iter().zip(&wall.root).fold(R64::zero(), |acc, (a, b)| acc + a * b);
    (fh == r(2)).then_some(wall)
}

impl AffineData {
    /// Translation vectors `e_j` in c-coordinates: `e_j = g_j ε_j` with `g_j` the
    /// gcd of column `j` of the Cartan matrix, the largest multiples for which
    /// the coroot lattice stays inside `⊕ ℤ e_j`.
    pub fn position_steps(&self) -> Vec<i64> {
        let n = self.cartan.len();
        (0..n)
            .map(|j| {
                (0..n).fold(0i64, |g, i| num_integer::Integer::gcd(&g, &self.cartan[i][j]))
            })
            .collect()
    }
}

impl Default for Order {
    fn default() -> Self {
        Order::Finite(1)
    }
}

#[allow(dead_code)]
fn is_one(x: &R64) -> bool {
    x.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_tilde_realization() {
        let sys = CoxeterSystem::from_tag_str("A~1").unwrap();
        assert_eq!(sys.rank(), 2);
        let x = [r(5)];
        assert_eq!(sys.generator(0).apply(&x), vec![r(-5)]);
        assert_eq!(sys.generator(1).apply(&x), vec![r(-3)]);
        assert_eq!(sys.coxeter_matrix()[0][1], Order::Infinite);
    }

    #[test]
    fn a2_tilde_all_threes() {
        let sys = CoxeterSystem::from_tag_str("A~2").unwrap();
        assert_eq!(sys.rank(), 3);
        assert_eq!(sys.dim(), 2);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(sys.coxeter_matrix()[i][j], Order::Finite(3));
                }
            }
        }
    }

    #[test]
    fn affine_coxeter_matrices() {
        let c2 = CoxeterSystem::from_tag_str("C~2").unwrap();
        let m = c2.coxeter_matrix();
        // s1 - s2 (4), s0 - s1 (4), s0 - s2 (2)
        assert_eq!(m[0][1], Order::Finite(4));
        assert_eq!(m[2][0], Order::Finite(4));
        assert_eq!(m[2][1], Order::Finite(2));
        let g2 = CoxeterSystem::from_tag_str("G~2").unwrap();
        let m = g2.coxeter_matrix();
        assert_eq!(m[0][1], Order::Finite(6));
        assert_eq!(m[1][2], Order::Finite(3));
        assert_eq!(m[0][2], Order::Finite(2));
    }

    #[test]
    fn tag_parsing() {
        assert_eq!("Ã2".parse::<TypeTag>().unwrap(), TypeTag::Affine { family: 'A', rank: 2 });
        assert_eq!("B3".parse::<TypeTag>().unwrap(), TypeTag::Finite { family: 'B', rank: 3 });
        assert!("H3".parse::<TypeTag>().is_err());
        assert!("A~0".parse::<TypeTag>().is_err());
    }

    #[test]
    fn custom_matrix_errors() {
        let bad_diag: CustomSystem = serde_json::from_str(r#"{"m": [[2,3],[3,1]]}"#).unwrap();
        assert_eq!(
            CoxeterSystem::from_custom(&bad_diag).unwrap_err(),
            CoxeterError::NonInvolutiveGenerator(0)
        );
        let five: CustomSystem = serde_json::from_str(r#"{"m": [[1,5],[5,1]]}"#).unwrap();
        assert!(matches!(
            CoxeterSystem::from_custom(&five).unwrap_err(),
            CoxeterError::UnsupportedCoxeterLabel(_)
        ));
        let ok: CustomSystem = serde_json::from_str(r#"{"m": [[1,3,3],[3,1,3],[3,3,1]]}"#).unwrap();
        let sys = CoxeterSystem::from_custom(&ok).unwrap();
        assert_eq!(sys.observed_orders(), sys.coxeter_matrix());
    }

    #[test]
    fn custom_action_round_trip() {
        let spec: CustomSystem = serde_json::from_str(
            r#"{"m": [[1,"inf"],["inf",1]],
                "action": [{"linear": [[-1]], "translation": ["0"]},
                           {"linear": [[-1]], "translation": ["2"]}],
                "base_point": ["1/2"]}"#,
        )
        .unwrap();
        let sys = CoxeterSystem::from_custom(&spec).unwrap();
        assert_eq!(sys.left_descent(&sys.generator(1).compose(sys.generator(0))), Some(1));
    }

    #[test]
    fn braid_violation_detected() {
        // s and t generate a dihedral group of order 6, not 8
        let spec: CustomSystem = serde_json::from_str(
            r#"{"m": [[1,4],[4,1]],
                "action": [{"linear": [[-1, 0],[1, 1]], "translation": [0, 0]},
                           {"linear": [[1, 1],[0, -1]], "translation": [0, 0]}],
                "base_point": [1, 1]}"#,
        )
        .unwrap();
        assert_eq!(
            CoxeterSystem::from_custom(&spec).unwrap_err(),
            CoxeterError::BraidRelationViolated(0, 1)
        );
    }
}
