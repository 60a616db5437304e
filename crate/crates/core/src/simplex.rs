//! Simplex identifiers and the degeneracy-word algebra.
//!
//! Every simplex of a finite simplicial set is written in Eilenberg-Zilber
//! normal form: a nondegenerate base together with a strictly decreasing
//! word of degeneracy indices `s_{i1} ... s_{ir}` (`i1 > i2 > ... > ir`).
//! The word is stored outermost-first, so `word[0]` is the last degeneracy
//! applied.

use serde::{Deserialize, Serialize};

/// Identifier of a nondegenerate simplex inside one simplicial set:
/// a dimension grade and an index within that grade.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SimplexKey {
    pub dim: usize,
    pub index: usize,
}

impl SimplexKey {
    pub fn new(dim: usize, index: usize) -> Self {
        SimplexKey { dim, index }
    }

    /// The form with empty degeneracy word.
    pub fn form(self) -> SimplexForm {
        SimplexForm { base: self, word: Vec::new() }
    }
}

/// A possibly degenerate simplex in normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SimplexForm {
    pub base: SimplexKey,
    /// Strictly decreasing degeneracy indices, outermost first.
    pub word: Vec<usize>,
}

impl SimplexForm {
    pub fn new(base: SimplexKey, word: Vec<usize>) -> Self {
        debug_assert!(word.windows(2).all(|w| w[0] > w[1]));
        SimplexForm { base, word }
    }

    /// Dimension of the represented simplex.
    pub fn dim(&self) -> usize {
        self.base.dim + self.word.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// Whether the word is strictly decreasing and fits the dimension:
    /// the outermost index of an m-dimensional form is at most m-1.
    pub fn word_is_valid(&self) -> bool {
        let m = self.dim();
        self.word.windows(2).all(|w| w[0] > w[1])
            && self.word.first().map_or(true, |&i| i < m)
    }

    /// Apply the degeneracy `s_i` to this form, renormalizing.
    pub fn degenerate(&self, i: usize) -> SimplexForm {
        debug_assert!(i <= self.dim());
        SimplexForm { base: self.base, word: word_insert(&self.word, i) }
    }
}

/// Normal-form insertion of `s_i` in front of a strictly decreasing word,
/// using `s_i s_w = s_{w+1} s_i` for `i <= w`.
pub fn word_insert(word: &[usize], i: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(word.len() + 1);
    let mut idx = 0;
    while idx < word.len() && i <= word[idx] {
        out.push(word[idx] + 1);
        idx += 1;
    }
    out.push(i);
    out.extend_from_slice(&word[idx..]);
    out
}

/// Outcome of pushing a face operator `d_a` through a degeneracy word.
pub enum FacePush {
    /// The face cancelled against a degeneracy; the residual word is returned.
    Cancelled(Vec<usize>),
    /// The face survived to the base as `d_a`; the word collected outside is returned.
    Reached { outer: Vec<usize>, face_index: usize },
}

/// Push `d_a` through `word` using the simplicial exchange rules
/// `d_a s_w = s_{w-1} d_a` (a < w), `d_a s_w = id` (a = w or a = w+1),
/// `d_a s_w = s_w d_{a-1}` (a > w+1).
pub fn push_face(word: &[usize], a: usize) -> FacePush {
    let mut a = a;
    let mut outer = Vec::with_capacity(word.len());
    for (j, &w) in word.iter().enumerate() {
        if a < w {
            outer.push(w - 1);
        } else if a == w || a == w + 1 {
            outer.extend_from_slice(&word[j + 1..]);
            return FacePush::Cancelled(outer);
        } else {
            outer.push(w);
            a -= 1;
        }
    }
    FacePush::Reached { outer, face_index: a }
}

/// Apply a word of degeneracies (outermost first) to a form, renormalizing.
pub fn apply_word(outer: &[usize], mut form: SimplexForm) -> SimplexForm {
    for &i in outer.iter().rev() {
        form = form.degenerate(i);
    }
    form
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(dim: usize, index: usize) -> SimplexKey {
        SimplexKey::new(dim, index)
    }

    #[test]
    fn insert_keeps_word_decreasing() {
        // s_0 s_0 = s_1 s_0
        assert_eq!(word_insert(&[0], 0), vec![1, 0]);
        // s_1 (s_3 s_0) = s_4 s_1 s_0
        assert_eq!(word_insert(&[3, 0], 1), vec![4, 1, 0]);
        // s_5 past nothing
        assert_eq!(word_insert(&[], 5), vec![5]);
        // s_2 (s_2) = s_3 s_2
        assert_eq!(word_insert(&[2], 2), vec![3, 2]);
    }

    #[test]
    fn push_face_cancels() {
        match push_face(&[1, 0], 1) {
            FacePush::Cancelled(rest) => assert_eq!(rest, vec![0]),
            _ => panic!("expected cancellation"),
        }
        // d_2 s_1 s_0 = s_0 (cancel at the first entry, keep the tail)
        match push_face(&[1, 0], 2) {
            FacePush::Cancelled(rest) => assert_eq!(rest, vec![0]),
            _ => panic!("expected cancellation"),
        }
    }

    #[test]
    fn push_face_reaches_base() {
        // d_0 s_2 = s_1 d_0
        match push_face(&[2], 0) {
            FacePush::Reached { outer, face_index } => {
                assert_eq!(outer, vec![1]);
                assert_eq!(face_index, 0);
            }
            _ => panic!("expected to reach the base"),
        }
        // d_4 s_2 s_0 = s_2 s_0 d_2
        match push_face(&[2, 0], 4) {
            FacePush::Reached { outer, face_index } => {
                assert_eq!(outer, vec![2, 0]);
                assert_eq!(face_index, 2);
            }
            _ => panic!("expected to reach the base"),
        }
    }

    #[test]
    fn degenerate_normalizes() {
        let v = key(0, 0).form();
        let s0 = v.degenerate(0);
        let s0s0 = s0.degenerate(0);
        assert_eq!(s0s0.word, vec![1, 0]);
        assert_eq!(s0s0.dim(), 2);
        assert!(s0s0.word_is_valid());
    }
}
