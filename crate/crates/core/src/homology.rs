//! Reduced integral simplicial homology of the nondegenerate chain
//! complex, via Smith normal form with exact big-integer arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::complex::SimplicialSet;
use crate::simplex::SimplexKey;

pub type Matrix = Vec<Vec<BigInt>>;

fn argmin_nonzero(m: &Matrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..m.len() {
        for j in k..m[i].len() {
            if m[i][j].is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[bi][bj].abs() <= m[i][j].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// The nonzero diagonal of the Smith normal form, as positive integers in
/// divisibility order.
pub fn smith_diagonal(mut m: Matrix) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = argmin_nonzero(&m, k) else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let mut dirty = false;
        for i in k + 1..rows {
            if m[i][k].is_zero() {
                continue;
            }
            let q = &m[i][k] / &m[k][k];
            if !q.is_zero() {
                for j in k..cols {
                    let delta = &q * &m[k][j];
                    m[i][j] -= delta;
                }
            }
            if !m[i][k].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        for j in k + 1..cols {
            if m[k][j].is_zero() {
                continue;
            }
            let q = &m[k][j] / &m[k][k];
            if !q.is_zero() {
                for i in k..rows {
                    let delta = &q * &m[i][k];
                    m[i][j] -= delta;
                }
            }
            if !m[k][j].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // Divisibility: the pivot must divide the remaining block.
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&m[i][j] % &m[k][k]).is_zero() {
                    for t in 0..cols {
                        let v = m[i][t].clone();
                        m[k][t] += v;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(m[k][k].abs());
        k += 1;
    }
    diag
}

/// The boundary matrix from nondegenerate n-simplices to nondegenerate
/// (n-1)-simplices; degenerate faces contribute zero.
pub fn boundary_matrix(x: &SimplicialSet, n: usize) -> Matrix {
    let rows = x.grade_count(n - 1);
    let cols = x.grade_count(n);
    let mut m = vec![vec![BigInt::zero(); cols]; rows];
    for (col, key) in x.keys(n).enumerate() {
        for i in 0..=n {
            let f = x.face_of_key(SimplexKey::new(n, key.index), i);
            if !f.is_degenerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m[f.base.index][col] += BigInt::from(sign);
            }
        }
    }
    m
}

/// One reduced homology group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Reduced integral homology in every dimension up to `dim`.
pub fn homology(x: &SimplicialSet) -> Vec<HomologyGroup> {
    let Some(top) = x.dim() else { return Vec::new() };
    // rank[n] = rank of the boundary map out of dimension n; the
    // augmentation acts as the boundary out of dimension 0.
    let mut rank = vec![0usize; top + 2];
    let mut torsion_from: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    rank[0] = if x.grade_count(0) > 0 { 1 } else { 0 };
    for n in 1..=top {
        let diag = smith_diagonal(boundary_matrix(x, n));
        rank[n] = diag.len();
        torsion_from[n] = diag.into_iter().filter(|d| d.abs() > BigInt::from(1)).collect();
    }
    (0..=top)
        .map(|n| HomologyGroup {
            betti: x.grade_count(n) - rank[n] - rank[n + 1],
            torsion: torsion_from[n + 1].clone(),
        })
        .collect()
}

/// Euler characteristic from the nondegenerate counts.
pub fn euler_characteristic(x: &SimplicialSet) -> i64 {
    x.grades()
        .iter()
        .enumerate()
        .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Euler characteristic from reduced homology (torsion does not count).
pub fn euler_from_homology(groups: &[HomologyGroup]) -> i64 {
    let reduced: i64 = groups
        .iter()
        .enumerate()
        .map(|(n, g)| if n % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
        .sum();
    // Undo the reduction: an augmented zeroth group adds one.
    if groups.is_empty() {
        0
    } else {
        reduced + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_data, disjoint_union, standard_simplex};

    #[test]
    fn smith_diagonal_small() {
        let m: Matrix = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(4), BigInt::from(16)],
        ];
        let d = smith_diagonal(m);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]);
    }

    #[test]
    fn simplices_are_acyclic() {
        for n in 0..=3 {
            let groups = homology(&standard_simplex(n));
            assert!(groups.iter().all(HomologyGroup::is_trivial), "simplex dimension {n}");
        }
    }

    #[test]
    fn boundary_spheres() {
        for n in 1..=4 {
            let (b, _) = boundary_data(n);
            let groups = homology(&b);
            for (d, g) in groups.iter().enumerate() {
                if d + 1 == n {
                    assert_eq!(g.betti, 1, "sphere dimension {}", n - 1);
                    assert!(g.torsion.is_empty());
                } else {
                    assert!(g.is_trivial(), "H_{d} of the {}-sphere", n - 1);
                }
            }
        }
    }

    #[test]
    fn two_points_have_extra_component() {
        let two = disjoint_union(&standard_simplex(0), &standard_simplex(0));
        let groups = homology(&two);
        assert_eq!(groups[0].betti, 1);
    }

    #[test]
    fn euler_consistency() {
        for x in [standard_simplex(2), boundary_data(3).0, standard_simplex(3)] {
            let groups = homology(&x);
            assert_eq!(euler_characteristic(&x), euler_from_homology(&groups));
        }
    }

    #[test]
    fn sphere_from_degenerate_faces() {
        // One vertex and one 2-simplex with all faces degenerate: the
        // 2-sphere as a quotient complex.
        let v = SimplexKey::new(0, 0).form();
        let s0v = v.degenerate(0);
        let grades = vec![1, 0, 1];
        let faces = vec![vec![Vec::new()], Vec::new(), vec![vec![s0v.clone(), s0v.clone(), s0v]]];
        let sphere = SimplicialSet::from_parts(grades, faces, None).unwrap();
        let groups = homology(&sphere);
        assert_eq!(groups[2].betti, 1);
        assert!(groups[0].is_trivial() && groups[1].is_trivial());
    }
}
