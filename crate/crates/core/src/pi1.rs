//! Edge-path presentation of the fundamental group relative to a spanning
//! tree, with bounded Tietze simplification and a small-symmetric-quotient
//! search for nontriviality certificates.

use std::collections::{HashMap, VecDeque};

use crate::complex::SimplicialSet;
use crate::simplex::{SimplexForm, SimplexKey};

/// Letters are `+(g+1)` / `-(g+1)` for generator g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<isize>>,
}

fn reduce_word(word: &[isize]) -> Vec<isize> {
    let mut out: Vec<isize> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    // Cyclic reduction.
    while out.len() >= 2 && out.first().map(|f| -f) == out.last().copied() {
        out.pop();
        out.remove(0);
    }
    out
}

/// The presentation of the fundamental group of a connected complex at the
/// first vertex: generators are the nondegenerate edges outside a spanning
/// tree, relators come from the nondegenerate 2-simplices.
///
/// Returns `None` when the complex is empty or not connected.
pub fn edge_path_presentation(x: &SimplicialSet) -> Option<Presentation> {
    let vertices = x.grade_count(0);
    if vertices == 0 {
        return None;
    }
    let edges: Vec<(SimplexKey, usize, usize)> = x
        .keys(1)
        .map(|e| (e, x.vertex(&e.form(), 0).index, x.vertex(&e.form(), 1).index))
        .collect();
    // Spanning tree by breadth-first search over undirected edges.
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for (i, &(_, s, t)) in edges.iter().enumerate() {
        adjacency[s].push((t, i));
        adjacency[t].push((s, i));
    }
    let mut in_tree = vec![false; edges.len()];
    let mut visited = vec![false; vertices];
    let mut queue = VecDeque::from([0usize]);
    visited[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adjacency[v] {
            if !visited[w] {
                visited[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    if visited.iter().any(|&v| !v) {
        return None;
    }
    let mut generator_of: HashMap<usize, usize> = HashMap::new();
    for (i, &t) in in_tree.iter().enumerate() {
        if !t {
            let g = generator_of.len();
            generator_of.insert(i, g);
        }
    }
    let edge_index: HashMap<SimplexKey, usize> =
        edges.iter().enumerate().map(|(i, &(k, _, _))| (k, i)).collect();
    let letter = |f: &SimplexForm| -> Option<isize> {
        if f.is_degenerate() {
            return None;
        }
        let i = edge_index[&f.base];
        if in_tree[i] {
            None
        } else {
            Some(generator_of[&i] as isize + 1)
        }
    };
    let mut relators = Vec::new();
    for sigma in x.keys(2) {
        let form = sigma.form();
        let mut word = Vec::new();
        if let Some(l) = letter(&x.face(&form, 2)) {
            word.push(l);
        }
        if let Some(l) = letter(&x.face(&form, 0)) {
            word.push(l);
        }
        if let Some(l) = letter(&x.face(&form, 1)) {
            word.push(-l);
        }
        let word = reduce_word(&word);
        if !word.is_empty() {
            relators.push(word);
        }
    }
    Some(Presentation { generators: generator_of.len(), relators })
}

/// Bounded Tietze simplification: free/cyclic reduction, elimination of
/// generators trivialized by length-one relators, and duplicate removal.
pub fn tietze_simplify(p: &mut Presentation, max_passes: usize) {
    for _ in 0..max_passes {
        let mut changed = false;
        p.relators = p.relators.iter().map(|w| reduce_word(w)).filter(|w| !w.is_empty()).collect();
        // Kill generators with a singleton relator.
        if let Some(pos) = p.relators.iter().position(|w| w.len() == 1) {
            let dead = p.relators[pos][0].unsigned_abs() - 1;
            p.relators.remove(pos);
            for w in p.relators.iter_mut() {
                w.retain(|l| l.unsigned_abs() - 1 != dead);
            }
            // Renumber generators above the dead one.
            for w in p.relators.iter_mut() {
                for l in w.iter_mut() {
                    let g = l.unsigned_abs() - 1;
                    if g > dead {
                        *l = l.signum() * (g as isize);
                    }
                }
            }
            p.generators -= 1;
            changed = true;
        }
        // Deduplicate.
        let before = p.relators.len();
        p.relators.sort();
        p.relators.dedup();
        if p.relators.len() != before {
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn invert_perm(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &v) in a.iter().enumerate() {
        out[v] = i;
    }
    out
}

fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..d).collect();
    fn go(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(perm, k + 1, out);
            perm.swap(k, i);
        }
    }
    go(&mut perm, 0, &mut out);
    out.sort();
    out
}

fn word_holds(word: &[isize], images: &[Vec<usize>], d: usize) -> bool {
    let mut acc: Vec<usize> = (0..d).collect();
    for &l in word {
        let g = l.unsigned_abs() - 1;
        let p = if l > 0 { images[g].clone() } else { invert_perm(&images[g]) };
        acc = compose_perm(&p, &acc);
    }
    acc.iter().enumerate().all(|(i, &v)| i == v)
}

/// Search for a homomorphism into a symmetric group of degree at most
/// `max_degree` with a nontrivial image, within `budget` assignments.
/// A hit certifies that the presented group is nontrivial.
pub fn nontrivial_finite_quotient(
    p: &Presentation,
    max_degree: usize,
    budget: usize,
) -> Option<(usize, Vec<Vec<usize>>)> {
    if p.generators == 0 {
        return None;
    }
    let mut tried = 0usize;
    for d in 2..=max_degree {
        let perms = all_permutations(d);
        let identity: Vec<usize> = (0..d).collect();
        let mut images: Vec<Vec<usize>> = vec![identity.clone(); p.generators];
        fn assign(
            p: &Presentation,
            perms: &[Vec<usize>],
            d: usize,
            g: usize,
            images: &mut Vec<Vec<usize>>,
            tried: &mut usize,
            budget: usize,
        ) -> bool {
            if *tried >= budget {
                return false;
            }
            if g == p.generators {
                *tried += 1;
                let identity: Vec<usize> = (0..d).collect();
                if images.iter().all(|im| *im == identity) {
                    return false;
                }
                return p.relators.iter().all(|w| word_holds(w, images, d));
            }
            for perm in perms {
                images[g] = perm.clone();
                // Quick reject: relators fully supported on assigned
                // generators must already hold.
                let ok = p.relators.iter().all(|w| {
                    if w.iter().all(|l| (l.unsigned_abs() - 1) <= g) {
                        word_holds(w, images, d)
                    } else {
                        true
                    }
                });
                if ok && assign(p, perms, d, g + 1, images, tried, budget) {
                    return true;
                }
            }
            false
        }
        if assign(p, &perms, d, 0, &mut images, &mut tried, budget) {
            return Some((d, images));
        }
    }
    None
}

/// Check a recorded quotient witness: relators hold and the image is not
/// trivial.
pub fn verify_quotient(p: &Presentation, degree: usize, images: &[Vec<usize>]) -> bool {
    if images.len() != p.generators || images.iter().any(|im| im.len() != degree) {
        return false;
    }
    let identity: Vec<usize> = (0..degree).collect();
    let nontrivial = images.iter().any(|im| *im != identity);
    nontrivial
        && p.relators
            .iter()
            .all(|w| word_holds(w, &images.to_vec(), degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_data, standard_simplex};

    #[test]
    fn simplex_has_trivial_presentation() {
        let d2 = standard_simplex(2);
        let mut p = edge_path_presentation(&d2).unwrap();
        tietze_simplify(&mut p, 16);
        assert_eq!(p.generators, 0);
    }

    #[test]
    fn circle_has_one_free_generator() {
        let (b2, _) = boundary_data(2);
        let mut p = edge_path_presentation(&b2).unwrap();
        tietze_simplify(&mut p, 16);
        assert_eq!(p.generators, 1);
        assert!(p.relators.is_empty());
        // The free group on one generator surjects onto a cyclic group.
        let (d, images) = nontrivial_finite_quotient(&p, 3, 100_000).unwrap();
        assert!(verify_quotient(&p, d, &images));
    }

    #[test]
    fn disconnected_complex_is_rejected() {
        let two = crate::complex::disjoint_union(&standard_simplex(0), &standard_simplex(0));
        assert!(edge_path_presentation(&two).is_none());
    }
}
