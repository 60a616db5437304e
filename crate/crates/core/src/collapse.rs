//! Elementary-collapse search: reduce a complex to a single vertex by
//! repeatedly removing a free face together with its unique coface.

use std::collections::HashSet;

use crate::complex::SimplicialSet;
use crate::simplex::SimplexKey;

/// Result of a bounded collapse search.
pub struct CollapseOutcome {
    /// Pairs `(free face, coface)` in removal order, when a full collapse
    /// to a point was found.
    pub sequence: Option<Vec<(SimplexKey, SimplexKey)>>,
    pub states_explored: usize,
    pub budget_exhausted: bool,
}

struct Search {
    /// Per nondegenerate key: the (coface, face index, via-degeneracy)
    /// references to it.
    refs: Vec<Vec<Vec<(SimplexKey, usize, bool)>>>,
    alive: Vec<Vec<bool>>,
    alive_count: usize,
    states: usize,
    budget: usize,
    seen: HashSet<Vec<u64>>,
}

impl Search {
    fn state_hash(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for grade in &self.alive {
            let mut word = 0u64;
            for (i, &a) in grade.iter().enumerate() {
                if a {
                    word |= 1 << (i % 64);
                }
                if i % 64 == 63 {
                    out.push(word);
                    word = 0;
                }
            }
            out.push(word);
            out.push(u64::MAX); // grade separator
        }
        out
    }

    fn live_refs(&self, key: SimplexKey) -> Vec<(SimplexKey, usize, bool)> {
        self.refs[key.dim][key.index]
            .iter()
            .filter(|(c, _, _)| self.alive[c.dim][c.index])
            .copied()
            .collect()
    }

    /// Free pairs in deterministic order: `tau` has exactly one live
    /// reference, through a nondegenerate face of a coface that itself has
    /// no live references.
    fn free_pairs(&self) -> Vec<(SimplexKey, SimplexKey)> {
        let mut out = Vec::new();
        for dim in 0..self.alive.len() {
            for index in 0..self.alive[dim].len() {
                if !self.alive[dim][index] {
                    continue;
                }
                let tau = SimplexKey::new(dim, index);
                let live = self.live_refs(tau);
                if live.len() != 1 {
                    continue;
                }
                let (sigma, _, degenerate) = live[0];
                if degenerate || sigma == tau {
                    continue;
                }
                if !self.live_refs(sigma).is_empty() {
                    continue;
                }
                out.push((tau, sigma));
            }
        }
        out
    }

    fn collapsed_to_point(&self) -> bool {
        self.alive_count == 1 && self.alive[0].iter().any(|&a| a)
    }

    fn dfs(&mut self, sequence: &mut Vec<(SimplexKey, SimplexKey)>) -> bool {
        if self.collapsed_to_point() {
            return true;
        }
        if self.states >= self.budget {
            return false;
        }
        self.states += 1;
        if !self.seen.insert(self.state_hash()) {
            return false;
        }
        for (tau, sigma) in self.free_pairs() {
            self.alive[tau.dim][tau.index] = false;
            self.alive[sigma.dim][sigma.index] = false;
            self.alive_count -= 2;
            sequence.push((tau, sigma));
            if self.dfs(sequence) {
                return true;
            }
            sequence.pop();
            self.alive[tau.dim][tau.index] = true;
            self.alive[sigma.dim][sigma.index] = true;
            self.alive_count += 2;
        }
        false
    }
}

fn reference_table(x: &SimplicialSet) -> Vec<Vec<Vec<(SimplexKey, usize, bool)>>> {
    let mut refs: Vec<Vec<Vec<(SimplexKey, usize, bool)>>> =
        (0..x.grades().len()).map(|d| vec![Vec::new(); x.grade_count(d)]).collect();
    for dim in 1..x.grades().len() {
        for key in x.keys(dim) {
            for i in 0..=dim {
                let f = x.face_of_key(key, i);
                refs[f.base.dim][f.base.index].push((key, i, f.is_degenerate()));
            }
        }
    }
    refs
}

/// Search for a collapse of the whole complex to one vertex, exploring at
/// most `budget` states.
pub fn collapse_to_point(x: &SimplicialSet, budget: usize) -> CollapseOutcome {
    if x.is_empty() {
        return CollapseOutcome { sequence: None, states_explored: 0, budget_exhausted: false };
    }
    let alive: Vec<Vec<bool>> =
        (0..x.grades().len()).map(|d| vec![true; x.grade_count(d)]).collect();
    let alive_count = x.total_nondegenerate();
    let mut search = Search {
        refs: reference_table(x),
        alive,
        alive_count,
        states: 0,
        budget,
        seen: HashSet::new(),
    };
    let mut sequence = Vec::new();
    let found = search.dfs(&mut sequence);
    CollapseOutcome {
        sequence: if found { Some(sequence) } else { None },
        states_explored: search.states,
        budget_exhausted: !found && search.states >= search.budget,
    }
}

/// Re-execute a collapse sequence, checking freeness at every step and a
/// single surviving vertex at the end.
pub fn replay_collapse(x: &SimplicialSet, sequence: &[(SimplexKey, SimplexKey)]) -> bool {
    let alive: Vec<Vec<bool>> =
        (0..x.grades().len()).map(|d| vec![true; x.grade_count(d)]).collect();
    let mut search = Search {
        refs: reference_table(x),
        alive,
        alive_count: x.total_nondegenerate(),
        states: 0,
        budget: 0,
        seen: HashSet::new(),
    };
    for &(tau, sigma) in sequence {
        if !search.free_pairs().contains(&(tau, sigma)) {
            return false;
        }
        search.alive[tau.dim][tau.index] = false;
        search.alive[sigma.dim][sigma.index] = false;
        search.alive_count -= 2;
    }
    search.collapsed_to_point()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{boundary_data, standard_simplex};

    #[test]
    fn simplices_collapse() {
        for n in 0..=3 {
            let x = standard_simplex(n);
            let outcome = collapse_to_point(&x, 100_000);
            let seq = outcome.sequence.expect("simplices are collapsible");
            assert!(replay_collapse(&x, &seq));
        }
    }

    #[test]
    fn spheres_do_not_collapse() {
        let (b2, _) = boundary_data(2);
        let outcome = collapse_to_point(&b2, 100_000);
        assert!(outcome.sequence.is_none());
        assert!(!outcome.budget_exhausted);
    }

    #[test]
    fn replay_rejects_bad_sequences() {
        let x = standard_simplex(1);
        // Collapsing the wrong pair first.
        let bad = vec![(SimplexKey::new(0, 0), SimplexKey::new(0, 1))];
        assert!(!replay_collapse(&x, &bad));
    }
}
