//! Finite crystallographic root data (Bourbaki numbering).
//!
//! Convention: `a[i][j] = ⟨α_i^∨, α_j⟩`, so the simple reflection `s_i` sends
//! `α_j ↦ α_j − a[i][j] α_i`.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Rational64;

/// Cartan matrix of the finite type `family` of rank `n`, if it exists.
pub fn finite_cartan(family: char, n: usize) -> Option<Vec<Vec<i64>>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match (family, n) {
        ('A', n) if n >= 1 => {
            for i in 1..n {
                link(&mut a, i - 1, i);
            }
        }
        ('B', n) if n >= 2 => {
            for i in 1..n {
                link(&mut a, i - 1, i);
            }
            // α_n short
            a[n - 1][n - 2] = -2;
        }
        ('C', n) if n >= 2 => {
            for i in 1..n {
                link(&mut a, i - 1, i);
            }
            // α_n long
            a[n - 2][n - 1] = -2;
        }
        ('D', n) if n >= 4 => {
            for i in 1..n - 1 {
                link(&mut a, i - 1, i);
            }
            link(&mut a, n - 3, n - 1);
        }
        ('E', n) if (6..=8).contains(&n) => {
            // 1-3-4-5-6-7-8 with 2 attached to 4 (0-based: 0-2-3-4-..., 1 to 3)
            link(&mut a, 0, 2);
            link(&mut a, 1, 3);
            for i in 3..n {
                link(&mut a, i - 1, i);
            }
        }
        ('F', 4) => {
            link(&mut a, 0, 1);
            link(&mut a, 1, 2);
            link(&mut a, 2, 3);
            // α_1, α_2 long; α_3, α_4 short
            a[2][1] = -2;
        }
        ('G', 2) => {
            // α_1 short, α_2 long
            a[0][1] = -3;
            a[1][0] = -1;
        }
        _ => return None,
    }
    Some(a)
}

/// Positive roots, as coefficient vectors in the simple-root basis, sorted by
/// height and then lexicographically.
pub fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
            let mut img = beta.clone();
            img[i] -= pairing;
            if img.iter().all(|&c| c >= 0) && img.iter().any(|&c| c > 0) && seen.insert(img.clone()) {
                queue.push_back(img);
                // a finite system never exceeds E8's 120 positive roots by much;
                // the guard keeps a non-finite input from looping.
                if seen.len() > 10_000 {
                    return Vec::new();
                }
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    roots
}

/// Squared lengths `(α_i, α_i)` normalized so the first root has length 1;
/// `None` if the matrix is not symmetrizable or not connected.
pub fn root_lengths(cartan: &[Vec<i64>]) -> Option<Vec<Rational64>> {
    let n = cartan.len();
    let mut len: Vec<Option<Rational64>> = vec![None; n];
    len[0] = Some(Rational64::from_integer(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 {
                let lj = len[i].unwrap() * Rational64::new(cartan[i][j], cartan[j][i]);
                match len[j] {
                    None => {
                        len[j] = Some(lj);
                        queue.push_back(j);
                    }
                    Some(l) if l != lj => return None,
                    _ => {}
                }
            }
        }
    }
    len.into_iter().collect()
}

/// Highest root `θ = Σ m_i α_i` and its coroot `θ^∨ = Σ n_i α_i^∨`, both as
/// integer coefficient vectors.
pub fn highest_root_and_coroot(cartan: &[Vec<i64>]) -> Option<(Vec<i64>, Vec<i64>)> {
    let roots = positive_roots(cartan);
    let theta = roots.last()?.clone();
    let lens = root_lengths(cartan)?;
    let n = cartan.len();
    // (α_i, α_j) = a_ij (α_i, α_i) / 2
    let mut norm = Rational64::from_integer(0);
    for i in 0..n {
        for j in 0..n {
            norm += Rational64::from_integer(theta[i] * theta[j] * cartan[i][j]) * lens[i] / 2;
        }
    }
    let mut coroot = Vec::with_capacity(n);
    for i in 0..n {
        let c = Rational64::from_integer(theta[i]) * lens[i] / norm;
        if !c.is_integer() {
            return None;
        }
        coroot.push(c.to_integer());
    }
    Some((theta, coroot))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let count = |f, n| positive_roots(&finite_cartan(f, n).unwrap()).len();
        assert_eq!(count('A', 2), 3);
        assert_eq!(count('B', 2), 4);
        assert_eq!(count('C', 3), 9);
        assert_eq!(count('G', 2), 6);
        assert_eq!(count('F', 4), 24);
        assert_eq!(count('D', 4), 12);
        assert_eq!(count('E', 6), 36);
    }

    #[test]
    fn highest_roots() {
        let h = |f, n| highest_root_and_coroot(&finite_cartan(f, n).unwrap()).unwrap();
        assert_eq!(h('A', 2), (vec![1, 1], vec![1, 1]));
        // C2: θ = 2α1 + α2 (long), θ^∨ = α1^∨ + α2^∨
        assert_eq!(h('C', 2), (vec![2, 1], vec![1, 1]));
        // G2 (α1 short): θ = 3α1 + 2α2, θ^∨ = α1^∨ + 2α2^∨
        assert_eq!(h('G', 2), (vec![3, 2], vec![1, 2]));
        assert_eq!(h('A', 1), (vec![1], vec![1]));
    }
}
