//! Realize a degreewise description of a simplicial set as a finite
//! complex in normal form, with dictionaries between description values
//! and keys.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::simplex::{SimplexForm, SimplexKey};
use crate::SimplicialSet;

/// A simplicial set described degree by degree: a listing of all
/// n-simplices as opaque values plus face and degeneracy actions.
pub trait Degreewise {
    type Simplex: Clone + Eq + Ord + Hash + Debug;

    /// All n-simplices, degenerate ones included, without duplicates,
    /// in a deterministic order.
    fn list(&self, n: usize) -> Vec<Self::Simplex>;

    /// `d_i`, defined for `n >= 1`.
    fn face(&self, n: usize, s: &Self::Simplex, i: usize) -> Self::Simplex;

    /// `s_i`, producing an (n+1)-simplex.
    fn degeneracy(&self, n: usize, s: &Self::Simplex, i: usize) -> Self::Simplex;
}

/// Strip degeneracy directions largest-first and resolve the base against
/// the index; yields the normal form of `value` as an n-simplex.
fn normal_form<D: Degreewise>(
    desc: &D,
    index: &[HashMap<D::Simplex, usize>],
    n: usize,
    value: &D::Simplex,
) -> SimplexForm {
    let mut word = Vec::new();
    let mut dim = n;
    let mut current = value.clone();
    'strip: while dim > 0 {
        for i in (0..dim).rev() {
            let f = desc.face(dim, &current, i);
            if desc.degeneracy(dim - 1, &f, i) == current {
                word.push(i);
                current = f;
                dim -= 1;
                continue 'strip;
            }
        }
        break;
    }
    let idx = index
        .get(dim)
        .and_then(|m| m.get(&current))
        .unwrap_or_else(|| panic!("value not indexed at dimension {dim}: {current:?}"));
    SimplexForm::new(SimplexKey::new(dim, *idx), word)
}

/// The realized complex with per-key representatives and a reverse index.
pub struct Realization<T> {
    pub complex: SimplicialSet,
    pub bound: usize,
    reps: Vec<Vec<T>>,
    index: Vec<HashMap<T, usize>>,
}

impl<T: Clone + Eq + Hash + Debug> Realization<T> {
    /// The representative value of a nondegenerate key.
    pub fn rep(&self, key: SimplexKey) -> &T {
        &self.reps[key.dim][key.index]
    }

    pub fn key_of(&self, dim: usize, value: &T) -> Option<SimplexKey> {
        self.index.get(dim)?.get(value).map(|&i| SimplexKey::new(dim, i))
    }

    /// Normal form of an arbitrary n-simplex value.
    pub fn form_of<D>(&self, desc: &D, n: usize, value: &D::Simplex) -> SimplexForm
    where
        D: Degreewise<Simplex = T>,
    {
        normal_form(desc, &self.index, n, value)
    }

    pub fn top_grade_empty(&self) -> bool {
        self.complex.grade_count(self.bound) == 0
    }
}

/// Build the complex of nondegenerate simplices up to `bound` from a
/// degreewise description.
pub fn realize<D: Degreewise>(desc: &D, bound: usize) -> Realization<D::Simplex> {
    let mut reps: Vec<Vec<D::Simplex>> = Vec::with_capacity(bound + 1);
    let mut index: Vec<HashMap<D::Simplex, usize>> = Vec::with_capacity(bound + 1);
    let mut grades = Vec::with_capacity(bound + 1);
    let mut faces: Vec<Vec<Vec<SimplexForm>>> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let mut level_reps: Vec<D::Simplex> = Vec::new();
        let mut level_index = HashMap::new();
        for value in desc.list(n) {
            let nondegenerate = n == 0
                || !(0..n).any(|i| {
                    let f = desc.face(n, &value, i);
                    desc.degeneracy(n - 1, &f, i) == value
                });
            if nondegenerate && !level_index.contains_key(&value) {
                level_index.insert(value.clone(), level_reps.len());
                level_reps.push(value);
            }
        }
        let rows: Vec<Vec<SimplexForm>> = if n == 0 {
            vec![Vec::new(); level_reps.len()]
        } else {
            level_reps
                .iter()
                .map(|value| {
                    (0..=n)
                        .map(|i| normal_form(desc, &index, n - 1, &desc.face(n, value, i)))
                        .collect()
                })
                .collect()
        };
        grades.push(level_reps.len());
        faces.push(rows);
        reps.push(level_reps);
        index.push(level_index);
    }
    let complex = SimplicialSet::from_parts(grades, faces, None)
        .expect("degreewise description satisfies the simplicial identities");
    // from_parts trims trailing empty grades; the dictionaries keep the
    // full range so form_of works at every computed dimension.
    Realization { complex, bound, reps, index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{are_isomorphic, standard_simplex};

    /// The standard n-simplex described degreewise by monotone tuples.
    struct Monotone(usize);

    impl Degreewise for Monotone {
        type Simplex = Vec<usize>;

        fn list(&self, n: usize) -> Vec<Vec<usize>> {
            fn go(
                max: usize,
                len: usize,
                min: usize,
                acc: &mut Vec<usize>,
                out: &mut Vec<Vec<usize>>,
            ) {
                if acc.len() == len {
                    out.push(acc.clone());
                    return;
                }
                for v in min..=max {
                    acc.push(v);
                    go(max, len, v, acc, out);
                    acc.pop();
                }
            }
            let mut out = Vec::new();
            go(self.0, n + 1, 0, &mut Vec::new(), &mut out);
            out
        }

        fn face(&self, _n: usize, s: &Vec<usize>, i: usize) -> Vec<usize> {
            let mut t = s.clone();
            t.remove(i);
            t
        }

        fn degeneracy(&self, _n: usize, s: &Vec<usize>, i: usize) -> Vec<usize> {
            let mut t = s.clone();
            t.insert(i, s[i]);
            t
        }
    }

    #[test]
    fn realizes_standard_simplices() {
        for n in 0..=3 {
            let r = realize(&Monotone(n), n + 1);
            assert!(are_isomorphic(&r.complex, &standard_simplex(n)));
            assert!(r.top_grade_empty());
        }
    }

    #[test]
    fn form_of_strips_degeneracies() {
        let desc = Monotone(1);
        let r = realize(&desc, 3);
        // (0,0,1,1) = s_2 s_0 (0,1)
        let form = r.form_of(&desc, 3, &vec![0, 0, 1, 1]);
        assert_eq!(form.word, vec![2, 0]);
        assert_eq!(form.base, r.key_of(1, &vec![0, 1]).unwrap());
    }
}
