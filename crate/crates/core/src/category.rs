//! Finite categories with total composition tables, functors between them,
//! and nerves.

use std::collections::HashMap;

use crate::realize::{realize, Degreewise, Realization};
use crate::simplex::SimplexKey;
use crate::{Error, SimplicialMap, SimplicialSet};

pub type ObjId = usize;
pub type MorId = usize;

/// A finite category: objects `0..objects`, morphisms with source/target,
/// identities per object, and a total composition table on composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: usize,
    pub mor_source: Vec<ObjId>,
    pub mor_target: Vec<ObjId>,
    pub identity: Vec<MorId>,
    /// `compose[g][f] = Some(g . f)` whenever `target(f) = source(g)`.
    pub compose: Vec<Vec<Option<MorId>>>,
    pub object_names: Option<Vec<String>>,
}

impl FiniteCategory {
    pub fn new(
        objects: usize,
        mor_source: Vec<ObjId>,
        mor_target: Vec<ObjId>,
        identity: Vec<MorId>,
        compose: Vec<Vec<Option<MorId>>>,
    ) -> Result<FiniteCategory, Error> {
        let cat = FiniteCategory {
            objects,
            mor_source,
            mor_target,
            identity,
            compose,
            object_names: None,
        };
        cat.validate()?;
        Ok(cat)
    }

    pub fn morphisms(&self) -> usize {
        self.mor_source.len()
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity[self.mor_source[m]] == m
    }

    pub fn composable(&self, g: MorId, f: MorId) -> bool {
        self.mor_target[f] == self.mor_source[g]
    }

    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.compose[g][f].expect("composable pair")
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.morphisms();
        if self.identity.len() != self.objects || self.mor_target.len() != n {
            return Err(Error::InvalidCategory("table sizes disagree".into()));
        }
        for o in 0..self.objects {
            let id = self.identity[o];
            if id >= n || self.mor_source[id] != o || self.mor_target[id] != o {
                return Err(Error::InvalidCategory(format!("bad identity for object {o}")));
            }
        }
        if self.compose.len() != n || self.compose.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidCategory("composition table sizes disagree".into()));
        }
        for g in 0..n {
            for f in 0..n {
                match self.compose[g][f] {
                    Some(h) => {
                        if !self.composable(g, f) {
                            return Err(Error::InvalidCategory(format!(
                                "composite defined for non-composable ({g},{f})"
                            )));
                        }
                        if self.mor_source[h] != self.mor_source[f]
                            || self.mor_target[h] != self.mor_target[g]
                        {
                            return Err(Error::InvalidCategory(format!(
                                "composite of ({g},{f}) has wrong endpoints"
                            )));
                        }
                    }
                    None => {
                        if self.composable(g, f) {
                            return Err(Error::InvalidCategory(format!(
                                "missing composite for composable ({g},{f})"
                            )));
                        }
                    }
                }
            }
        }
        for f in 0..n {
            let s = self.identity[self.mor_source[f]];
            let t = self.identity[self.mor_target[f]];
            if self.comp(f, s) != f || self.comp(t, f) != f {
                return Err(Error::InvalidCategory(format!("unit law fails at {f}")));
            }
        }
        for h in 0..n {
            for g in 0..n {
                if !self.composable(h, g) {
                    continue;
                }
                for f in 0..n {
                    if !self.composable(g, f) {
                        continue;
                    }
                    if self.comp(self.comp(h, g), f) != self.comp(h, self.comp(g, f)) {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails at ({h},{g},{f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Build a category from object count and hom data: `arrows` lists the
    /// nonidentity morphisms as (source, target, name-idx-free), and
    /// `comp` resolves composites of nonidentity pairs by index into the
    /// full morphism list (identities come first, one per object).
    pub fn from_arrows(
        objects: usize,
        arrows: &[(ObjId, ObjId)],
        comp: &dyn Fn(MorId, MorId) -> MorId,
    ) -> Result<FiniteCategory, Error> {
        let n = objects + arrows.len();
        let mut mor_source = Vec::with_capacity(n);
        let mut mor_target = Vec::with_capacity(n);
        for o in 0..objects {
            mor_source.push(o);
            mor_target.push(o);
        }
        for &(s, t) in arrows {
            mor_source.push(s);
            mor_target.push(t);
        }
        let identity: Vec<MorId> = (0..objects).collect();
        let mut compose = vec![vec![None; n]; n];
        for g in 0..n {
            for f in 0..n {
                if mor_target[f] != mor_source[g] {
                    continue;
                }
                let h = if f < objects {
                    g
                } else if g < objects {
                    f
                } else {
                    comp(g, f)
                };
                compose[g][f] = Some(h);
            }
        }
        FiniteCategory::new(objects, mor_source, mor_target, identity, compose)
    }

    /// The category of a finite poset given by its reflexive order matrix.
    pub fn from_poset(leq: &[Vec<bool>]) -> FiniteCategory {
        let objects = leq.len();
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for a in 0..objects {
            for b in 0..objects {
                if leq[a][b] {
                    index.insert((a, b), pairs.len());
                    pairs.push((a, b));
                }
            }
        }
        let n = pairs.len();
        let mor_source: Vec<_> = pairs.iter().map(|&(a, _)| a).collect();
        let mor_target: Vec<_> = pairs.iter().map(|&(_, b)| b).collect();
        let identity: Vec<_> = (0..objects).map(|o| index[&(o, o)]).collect();
        let mut compose = vec![vec![None; n]; n];
        for g in 0..n {
            for f in 0..n {
                if pairs[f].1 == pairs[g].0 {
                    compose[g][f] = Some(index[&(pairs[f].0, pairs[g].1)]);
                }
            }
        }
        FiniteCategory::new(objects, mor_source, mor_target, identity, compose)
            .expect("poset data is a category")
    }

    /// The linear order [n].
    pub fn linear(n: usize) -> FiniteCategory {
        let leq: Vec<Vec<bool>> = (0..=n).map(|a| (0..=n).map(|b| a <= b).collect()).collect();
        FiniteCategory::from_poset(&leq)
    }

    pub fn terminal() -> FiniteCategory {
        FiniteCategory::linear(0)
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        (0..self.morphisms()).any(|g| {
            self.composable(g, f)
                && self.composable(f, g)
                && self.comp(g, f) == self.identity[self.mor_source[f]]
                && self.comp(f, g) == self.identity[self.mor_target[f]]
        })
    }

    /// True when no composable chain of `len` nonidentity morphisms exists.
    pub fn no_nonidentity_chain(&self, len: usize) -> bool {
        // Depth-limited search over composable nonidentity sequences.
        fn extend(cat: &FiniteCategory, last_target: ObjId, remaining: usize) -> bool {
            if remaining == 0 {
                return true;
            }
            for m in 0..cat.morphisms() {
                if !cat.is_identity(m) && cat.mor_source[m] == last_target {
                    if extend(cat, cat.mor_target[m], remaining - 1) {
                        return true;
                    }
                }
            }
            false
        }
        if len == 0 {
            // Empty chains exist at every object.
            return self.objects == 0;
        }
        for m in 0..self.morphisms() {
            if !self.is_identity(m) && extend(self, self.mor_target[m], len - 1) {
                return false;
            }
        }
        true
    }
}

/// A functor between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub source: FiniteCategory,
    pub target: FiniteCategory,
    pub object_map: Vec<ObjId>,
    pub mor_map: Vec<MorId>,
}

impl Functor {
    pub fn new(
        source: FiniteCategory,
        target: FiniteCategory,
        object_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Functor, Error> {
        let f = Functor { source, target, object_map, mor_map };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.object_map.len() != self.source.objects
            || self.mor_map.len() != self.source.morphisms()
        {
            return Err(Error::InvalidCategory("functor table sizes disagree".into()));
        }
        for m in 0..self.source.morphisms() {
            let fm = self.mor_map[m];
            if self.target.mor_source[fm] != self.object_map[self.source.mor_source[m]]
                || self.target.mor_target[fm] != self.object_map[self.source.mor_target[m]]
            {
                return Err(Error::InvalidCategory(format!("functor breaks endpoints at {m}")));
            }
        }
        for o in 0..self.source.objects {
            if self.mor_map[self.source.identity[o]] != self.target.identity[self.object_map[o]] {
                return Err(Error::InvalidCategory(format!("functor breaks identity at {o}")));
            }
        }
        for g in 0..self.source.morphisms() {
            for f in 0..self.source.morphisms() {
                if self.source.composable(g, f) {
                    let lhs = self.mor_map[self.source.comp(g, f)];
                    let rhs = self.target.comp(self.mor_map[g], self.mor_map[f]);
                    if lhs != rhs {
                        return Err(Error::InvalidCategory(format!(
                            "functor breaks composition at ({g},{f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(cat: &FiniteCategory) -> Functor {
        Functor {
            source: cat.clone(),
            target: cat.clone(),
            object_map: (0..cat.objects).collect(),
            mor_map: (0..cat.morphisms()).collect(),
        }
    }

    pub fn compose(&self, first: &Functor) -> Result<Functor, Error> {
        if first.target != self.source {
            return Err(Error::InvalidCategory("functor composition mismatch".into()));
        }
        Functor::new(
            first.source.clone(),
            self.target.clone(),
            first.object_map.iter().map(|&o| self.object_map[o]).collect(),
            first.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        )
    }
}

/// A composable chain of morphisms; the degreewise description of a nerve.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    pub start: ObjId,
    pub mors: Vec<MorId>,
}

struct NerveDescription<'a> {
    cat: &'a FiniteCategory,
}

impl Degreewise for NerveDescription<'_> {
    type Simplex = Chain;

    fn list(&self, n: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut stack: Vec<Chain> =
            (0..self.cat.objects).map(|o| Chain { start: o, mors: Vec::new() }).collect();
        if n == 0 {
            return stack;
        }
        while let Some(c) = stack.pop() {
            if c.mors.len() == n {
                out.push(c);
                continue;
            }
            let at = c.mors.last().map_or(c.start, |&m| self.cat.mor_target[m]);
            // Extend in reverse so the produced order is lexicographic.
            for m in (0..self.cat.morphisms()).rev() {
                if self.cat.mor_source[m] == at {
                    let mut next = c.clone();
                    next.mors.push(m);
                    stack.push(next);
                }
            }
        }
        out.sort();
        out
    }

    fn face(&self, _n: usize, c: &Chain, i: usize) -> Chain {
        let len = c.mors.len();
        debug_assert!(len >= 1);
        if i == 0 {
            Chain { start: self.cat.mor_target[c.mors[0]], mors: c.mors[1..].to_vec() }
        } else if i == len {
            Chain { start: c.start, mors: c.mors[..len - 1].to_vec() }
        } else {
            let mut mors = Vec::with_capacity(len - 1);
            mors.extend_from_slice(&c.mors[..i - 1]);
            mors.push(self.cat.comp(c.mors[i], c.mors[i - 1]));
            mors.extend_from_slice(&c.mors[i + 1..]);
            Chain { start: c.start, mors }
        }
    }

    fn degeneracy(&self, _n: usize, c: &Chain, i: usize) -> Chain {
        let at = if i == 0 {
            c.start
        } else {
            self.cat.mor_target[c.mors[i - 1]]
        };
        let mut mors = Vec::with_capacity(c.mors.len() + 1);
        mors.extend_from_slice(&c.mors[..i]);
        mors.push(self.cat.identity[at]);
        mors.extend_from_slice(&c.mors[i..]);
        Chain { start: c.start, mors }
    }
}

/// A truncated nerve together with its chain dictionary and exactness flag.
pub struct Nerve {
    pub complex: SimplicialSet,
    pub realization: Realization<Chain>,
    /// True when the truncation misses no nondegenerate simplices.
    pub exact: bool,
}

impl Nerve {
    pub fn vertex_of_object(&self, o: ObjId) -> SimplexKey {
        self.realization
            .key_of(0, &Chain { start: o, mors: Vec::new() })
            .expect("object is a vertex")
    }

    pub fn object_of_vertex(&self, key: SimplexKey) -> ObjId {
        self.realization.rep(key).start
    }

    /// The edge form classified by a morphism.
    pub fn edge_of_morphism(&self, cat: &FiniteCategory, m: MorId) -> crate::SimplexForm {
        let chain = Chain { start: cat.mor_source[m], mors: vec![m] };
        self.realization.form_of(&NerveDescription { cat }, 1, &chain)
    }
}

/// The nerve truncated at `dim_bound`: k-simplices are composable chains,
/// nondegenerate ones have no identity component.
pub fn nerve(cat: &FiniteCategory, dim_bound: usize) -> Nerve {
    assert!(dim_bound >= 2, "nerve truncation needs dim_bound >= 2");
    let desc = NerveDescription { cat };
    let realization = realize(&desc, dim_bound);
    let exact = cat.no_nonidentity_chain(dim_bound + 1);
    Nerve { complex: realization.complex.clone(), realization, exact }
}

/// The simplicial map induced on nerves by a functor.
pub fn nerve_functor(f: &Functor, src: &Nerve, tgt: &Nerve) -> SimplicialMap {
    let tgt_desc = NerveDescription { cat: &f.target };
    let mut images = Vec::with_capacity(src.complex.grades().len());
    for dim in 0..src.complex.grades().len() {
        let mut row = Vec::with_capacity(src.complex.grade_count(dim));
        for key in src.complex.keys(dim) {
            let chain = src.realization.rep(key);
            let image = Chain {
                start: f.object_map[chain.start],
                mors: chain.mors.iter().map(|&m| f.mor_map[m]).collect(),
            };
            row.push(tgt.realization.form_of(&tgt_desc, dim, &image));
        }
        images.push(row);
    }
    SimplicialMap::new(src.complex.clone(), tgt.complex.clone(), images)
        .expect("nerve of a functor is simplicial")
}

/// The 1-categorical opcartesian condition: `lift` (with source over the
/// source of `f`) is initial among lifts of `f` out of the same object.
pub fn is_opcartesian(p: &Functor, lift: MorId) -> bool {
    let d = &p.source;
    let f = p.mor_map[lift];
    let y = d.mor_source[lift];
    for other in 0..d.morphisms() {
        if d.mor_source[other] != y || p.mor_map[other] != f {
            continue;
        }
        // Exactly one vertical mediator target(lift) -> target(other).
        let mut count = 0;
        for i in 0..d.morphisms() {
            if d.mor_source[i] == d.mor_target[lift]
                && d.mor_target[i] == d.mor_target[other]
                && p.target.is_identity(p.mor_map[i])
                && d.comp(i, lift) == other
            {
                count += 1;
            }
        }
        if count != 1 {
            return false;
        }
    }
    true
}

/// The classical Grothendieck opfibration predicate: every morphism of the
/// base with a lift of its source admits an opcartesian lift.
pub fn is_grothendieck_opfibration(p: &Functor) -> bool {
    let c = &p.target;
    let d = &p.source;
    for f in 0..c.morphisms() {
        for y in 0..d.objects {
            if p.object_map[y] != c.mor_source[f] {
                continue;
            }
            let found = (0..d.morphisms()).any(|lift| {
                d.mor_source[lift] == y && p.mor_map[lift] == f && is_opcartesian(p, lift)
            });
            if !found {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{are_isomorphic, standard_simplex};
    use crate::corpus;

    #[test]
    fn linear_order_nerve_is_standard_simplex() {
        let c = FiniteCategory::linear(2);
        let n = nerve(&c, 3);
        assert!(n.exact);
        assert!(are_isomorphic(&n.complex, &standard_simplex(2)));
    }

    #[test]
    fn grid_poset_nerve_counts() {
        let c = corpus::square_poset();
        let n = nerve(&c, 3);
        assert!(n.exact);
        assert_eq!(n.complex.grades(), &[4, 5, 2]);
    }

    #[test]
    fn idempotent_monoid_nerve_truncates() {
        let c = corpus::idempotent_monoid();
        let n = nerve(&c, 3);
        assert!(!n.exact);
        assert_eq!(n.complex.grades(), &[1, 1, 1, 1]);
    }

    #[test]
    fn nerve_functoriality_on_composites() {
        let c = FiniteCategory::linear(1);
        let d = FiniteCategory::linear(2);
        // [1] -> [2] hitting 0 < 2, then [2] -> [2] identity.
        let f = Functor::new(
            c.clone(),
            d.clone(),
            vec![0, 2],
            // morphisms of [1]: ids 0,1 then 0<1; of [2]: ids 0,1,2 then
            // 0<1, 0<2, 1<2 in from_poset order.
            {
                let pairs_c = [(0usize, 0usize), (0, 1), (1, 1)];
                let pairs_d =
                    [(0usize, 0usize), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
                pairs_c
                    .iter()
                    .map(|&(a, b)| {
                        let (fa, fb) = ([0, 2][a], [0, 2][b]);
                        pairs_d.iter().position(|&p| p == (fa, fb)).unwrap()
                    })
                    .collect()
            },
        )
        .unwrap();
        let g = Functor::identity(&d);
        let nc = nerve(&c, 3);
        let nd = nerve(&d, 3);
        let nf = nerve_functor(&f, &nc, &nd);
        let ng = nerve_functor(&g, &nd, &nd);
        let comp_then_nerve = nerve_functor(&g.compose(&f).unwrap(), &nc, &nd);
        assert_eq!(ng.compose(&nf).unwrap(), comp_then_nerve);
    }
}
