//! Map enumeration and lifting problems: backtracking extension of partial
//! simplicial maps, and right-lifting-property verdicts against horn and
//! boundary families.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::complex::{boundary_data, horn_data, subset_of_simplex_key, SimplicialSet};
use crate::map::{simplex_as_map, SimplicialMap};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

/// A commutative square against a monomorphism, asking for a diagonal lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingProblem {
    /// A monomorphism `A -> B`.
    pub inclusion: SimplicialMap,
    /// `A -> X`.
    pub top: SimplicialMap,
    /// `B -> S`.
    pub bottom: SimplicialMap,
    /// `p: X -> S`.
    pub projection: SimplicialMap,
}

impl LiftingProblem {
    pub fn new(
        inclusion: SimplicialMap,
        top: SimplicialMap,
        bottom: SimplicialMap,
        projection: SimplicialMap,
    ) -> Result<LiftingProblem, Error> {
        if !inclusion.is_monomorphism() {
            return Err(Error::InvalidMap("lifting problems need a monomorphism".into()));
        }
        if inclusion.source() != top.source()
            || inclusion.target() != bottom.source()
            || top.target() != projection.source()
            || bottom.target() != projection.target()
        {
            return Err(Error::InvalidMap("lifting square endpoints do not match".into()));
        }
        let around_top = projection.compose(&top)?;
        let around_bottom = bottom.compose(&inclusion)?;
        if around_top != around_bottom {
            return Err(Error::InvalidMap("lifting square does not commute".into()));
        }
        Ok(LiftingProblem { inclusion, top, bottom, projection })
    }
}

/// Constraints for a backtracking map search `domain -> codomain`.
pub struct MapProblem<'a> {
    pub domain: &'a SimplicialSet,
    pub codomain: &'a SimplicialSet,
    /// Pinned images of nondegenerate domain simplices.
    pub fixed: BTreeMap<SimplexKey, SimplexForm>,
    /// Require `projection . g = under` where `under: domain -> base`.
    pub over: Option<(&'a SimplicialMap, &'a SimplicialMap)>,
    /// Require marked nondegenerate edges of the domain to land in the
    /// codomain marks (degenerate images always count as marked).
    pub marks: Option<(&'a BTreeSet<SimplexForm>, &'a BTreeSet<SimplexForm>)>,
}

impl<'a> MapProblem<'a> {
    pub fn unconstrained(domain: &'a SimplicialSet, codomain: &'a SimplicialSet) -> Self {
        MapProblem { domain, codomain, fixed: BTreeMap::new(), over: None, marks: None }
    }

    /// First solution in the deterministic search order.
    pub fn first(&self) -> Option<SimplicialMap> {
        let mut found = None;
        self.search(&mut |m| {
            found = Some(m);
            false
        });
        found
    }

    /// All solutions.
    pub fn all(&self) -> Vec<SimplicialMap> {
        let mut out = Vec::new();
        self.search(&mut |m| {
            out.push(m);
            true
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.search(&mut |_| {
            n += 1;
            true
        });
        n
    }

    /// Backtracking over nondegenerate domain simplices in increasing
    /// dimension; `visit` returns false to stop the search.
    pub fn search(&self, visit: &mut dyn FnMut(SimplicialMap) -> bool) {
        let dims = self.domain.grades().len();
        let keys: Vec<SimplexKey> = self.domain.all_keys().collect();
        let mut images: Vec<Vec<Option<SimplexForm>>> =
            (0..dims).map(|d| vec![None; self.domain.grade_count(d)]).collect();
        // Candidate pools per dimension, optionally restricted to fibers.
        let mut fiber_cache: HashMap<(usize, SimplexForm), Vec<SimplexForm>> = HashMap::new();
        self.step(&keys, 0, &mut images, &mut fiber_cache, visit);
    }

    fn candidates(
        &self,
        key: SimplexKey,
        fiber_cache: &mut HashMap<(usize, SimplexForm), Vec<SimplexForm>>,
    ) -> Vec<SimplexForm> {
        if let Some(f) = self.fixed.get(&key) {
            return vec![f.clone()];
        }
        match self.over {
            Some((projection, under)) => {
                let base = under.apply(&key.form());
                fiber_cache
                    .entry((key.dim, base.clone()))
                    .or_insert_with(|| {
                        self.codomain
                            .all_forms(key.dim)
                            .into_iter()
                            .filter(|z| projection.apply(z) == base)
                            .collect()
                    })
                    .clone()
            }
            None => self.codomain.all_forms(key.dim),
        }
    }

    fn step(
        &self,
        keys: &[SimplexKey],
        at: usize,
        images: &mut Vec<Vec<Option<SimplexForm>>>,
        fiber_cache: &mut HashMap<(usize, SimplexForm), Vec<SimplexForm>>,
        visit: &mut dyn FnMut(SimplicialMap) -> bool,
    ) -> bool {
        if at == keys.len() {
            let table: Vec<Vec<SimplexForm>> = images
                .iter()
                .map(|row| row.iter().map(|f| f.clone().unwrap()).collect())
                .collect();
            let map = SimplicialMap::new(self.domain.clone(), self.codomain.clone(), table)
                .expect("search maintains face compatibility");
            return visit(map);
        }
        let key = keys[at];
        'cand: for z in self.candidates(key, fiber_cache) {
            // Face compatibility against lower, already assigned simplices.
            for i in 0..=key.dim {
                if key.dim == 0 {
                    break;
                }
                let df = self.domain.face_of_key(key, i);
                let assigned = images[df.base.dim][df.base.index].as_ref().unwrap();
                let mut expected = assigned.clone();
                for &w in df.word.iter().rev() {
                    expected = expected.degenerate(w);
                }
                if self.codomain.face(&z, i) != expected {
                    continue 'cand;
                }
            }
            if let Some((dm, cm)) = self.marks {
                if key.dim == 1
                    && dm.contains(&key.form())
                    && !z.is_degenerate()
                    && !cm.contains(&z)
                {
                    continue 'cand;
                }
            }
            images[key.dim][key.index] = Some(z);
            if !self.step(keys, at + 1, images, fiber_cache, visit) {
                return false;
            }
            images[key.dim][key.index] = None;
        }
        true
    }
}

/// All simplicial maps `A -> X`.
pub fn enumerate_maps(a: &SimplicialSet, x: &SimplicialSet) -> Vec<SimplicialMap> {
    MapProblem::unconstrained(a, x).all()
}

/// Search for a diagonal lift of the square; `None` when exhaustive search
/// finds none.
pub fn extend(problem: &LiftingProblem) -> Option<SimplicialMap> {
    let b = problem.inclusion.target();
    let x = problem.projection.source();
    let mut fixed = BTreeMap::new();
    for dim in 0..problem.inclusion.source().grades().len() {
        for a in problem.inclusion.source().keys(dim) {
            let b_key = problem.inclusion.image_of_key(a).base;
            fixed.insert(b_key, problem.top.image_of_key(a).clone());
        }
    }
    let mp = MapProblem {
        domain: b,
        codomain: x,
        fixed,
        over: Some((&problem.projection, &problem.bottom)),
        marks: None,
    };
    mp.first()
}

/// Selects which inclusions `has_rlp` lifts against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InclusionFamily {
    /// Horns with `0 <= k < n`, n from 1.
    LeftHorns,
    /// Horns with `0 < k <= n`, n from 1.
    RightHorns,
    /// All horns, n from 1.
    AllHorns,
    /// Horns with `0 < k < n`, n from 2.
    InnerHorns,
    /// Boundary inclusions, n from 0.
    Boundaries,
}

impl InclusionFamily {
    pub fn min_dim(self) -> usize {
        match self {
            InclusionFamily::InnerHorns => 2,
            InclusionFamily::Boundaries => 0,
            _ => 1,
        }
    }

    /// Horn indices at dimension n; `None` stands for the boundary.
    pub fn horn_indices(self, n: usize) -> Vec<Option<usize>> {
        match self {
            InclusionFamily::LeftHorns => (0..n).map(Some).collect(),
            InclusionFamily::RightHorns => (1..=n).map(Some).collect(),
            InclusionFamily::AllHorns => (0..=n).map(Some).collect(),
            InclusionFamily::InnerHorns => (1..n).map(Some).collect(),
            InclusionFamily::Boundaries => vec![None],
        }
    }
}

/// Three-valued verdict with evidence.
#[derive(Clone, Debug)]
pub enum Verdict {
    Holds { squares_checked: usize, dim_bound: usize },
    Fails { witness: Box<Witness> },
    Unknown { reason: String, dim_bound: usize },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn status_name(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Evidence carried by a failing verdict; every variant replays.
#[derive(Clone, Debug)]
pub enum Witness {
    /// An unliftable square.
    Square(LiftingProblem),
    /// No cocartesian edge over `base_edge` with the given source vertex.
    NoCocartesianLift {
        projection: SimplicialMap,
        base_edge: SimplexForm,
        total_vertex: SimplexKey,
        dim_bound: usize,
    },
    /// The edge is not cocartesian: an unliftable initial-extension square.
    NonCocartesianEdge { edge: SimplexForm, square: LiftingProblem },
    /// No equivalence lift of `base_edge` starting at `total_vertex`.
    NoEquivalenceLift {
        projection: SimplicialMap,
        base_edge: SimplexForm,
        total_vertex: SimplexKey,
        dim_bound: usize,
    },
    /// Every vertex failed an initial-object check; one square per vertex.
    NoInitialVertex { per_vertex: Vec<(SimplexKey, LiftingProblem)> },
    /// A factorization fiber that is not weakly contractible.
    NotContractibleFiber {
        projection: SimplicialMap,
        base_simplex: SimplexForm,
        total_edge: SimplexForm,
        fiber: SimplicialSet,
        reason: String,
    },
    /// A marking disagreement in a pattern or audit check.
    MarkingMismatch { edge: SimplexForm, detail: String },
    /// A named sub-check failed; carries the inner witness.
    Item { item: String, inner: Box<Witness> },
}

/// Per-(p) right-lifting-property checker with fiber caching.
pub struct RlpChecker<'a> {
    projection: &'a SimplicialMap,
    fibers: HashMap<(usize, SimplexForm), Vec<SimplexForm>>,
}

impl<'a> RlpChecker<'a> {
    pub fn new(projection: &'a SimplicialMap) -> Self {
        RlpChecker { projection, fibers: HashMap::new() }
    }

    pub fn projection(&self) -> &SimplicialMap {
        self.projection
    }

    /// Forms of the total space of dimension `dim` lying over `base`.
    pub fn fiber_forms(&mut self, dim: usize, base: &SimplexForm) -> &[SimplexForm] {
        let p = self.projection;
        self.fibers.entry((dim, base.clone())).or_insert_with(|| {
            p.source().all_forms(dim).into_iter().filter(|z| p.apply(z) == *base).collect()
        })
    }

    /// Enumerate compatible facet tuples of a horn or boundary over `sigma`
    /// and call `on_top`; a `false` return stops the enumeration.
    ///
    /// `skip` is the omitted facet (the horn index), `None` for boundaries.
    /// `pins` fixes chosen facets in advance.
    pub fn for_each_top(
        &mut self,
        n: usize,
        skip: Option<usize>,
        sigma: &SimplexForm,
        pins: &BTreeMap<usize, SimplexForm>,
        on_top: &mut dyn FnMut(&mut Self, &BTreeMap<usize, SimplexForm>) -> bool,
    ) -> bool {
        self.for_each_top_filtered(n, skip, sigma, pins, &|_, _, _| true, on_top)
    }

    /// Like [`RlpChecker::for_each_top`], with a per-facet candidate filter
    /// `(facet index, candidate, total space) -> keep`.
    pub fn for_each_top_filtered(
        &mut self,
        n: usize,
        skip: Option<usize>,
        sigma: &SimplexForm,
        pins: &BTreeMap<usize, SimplexForm>,
        filter: &dyn Fn(usize, &SimplexForm, &SimplicialSet) -> bool,
        on_top: &mut dyn FnMut(&mut Self, &BTreeMap<usize, SimplexForm>) -> bool,
    ) -> bool {
        let indices: Vec<usize> = (0..=n).filter(|i| Some(*i) != skip).collect();
        let base = self.projection.target().clone();
        #[allow(clippy::too_many_arguments)]
        fn go<'p>(
            checker: &mut RlpChecker<'p>,
            base: &SimplicialSet,
            indices: &[usize],
            at: usize,
            sigma: &SimplexForm,
            pins: &BTreeMap<usize, SimplexForm>,
            filter: &dyn Fn(usize, &SimplexForm, &SimplicialSet) -> bool,
            chosen: &mut BTreeMap<usize, SimplexForm>,
            on_top: &mut dyn FnMut(&mut RlpChecker<'p>, &BTreeMap<usize, SimplexForm>) -> bool,
        ) -> bool {
            if at == indices.len() {
                return on_top(checker, chosen);
            }
            let i = indices[at];
            let target_base = base.face(sigma, i);
            let candidates: Vec<SimplexForm> = match pins.get(&i) {
                Some(z) => {
                    if checker.projection.apply(z) == target_base {
                        vec![z.clone()]
                    } else {
                        Vec::new()
                    }
                }
                None => checker.fiber_forms(sigma.dim() - 1, &target_base).to_vec(),
            };
            let x = checker.projection.source().clone();
            'cand: for z in candidates {
                if !filter(i, &z, &x) {
                    continue;
                }
                // d_j z_i must equal d_{i-1} z_j for assigned j < i
                // (vacuous when the facets are vertices).
                if sigma.dim() >= 2 {
                    for (&j, zj) in chosen.iter() {
                        debug_assert!(j < i);
                        if x.face(&z, j) != x.face(zj, i - 1) {
                            continue 'cand;
                        }
                    }
                }
                chosen.insert(i, z);
                let keep = go(checker, base, indices, at + 1, sigma, pins, filter, chosen, on_top);
                chosen.remove(&i);
                if !keep {
                    return false;
                }
            }
            true
        }
        let mut chosen = BTreeMap::new();
        go(self, &base, &indices, 0, sigma, pins, filter, &mut chosen, on_top)
    }

    /// Find a filler: an n-form over `sigma` whose faces match the tuple.
    pub fn filler(
        &mut self,
        n: usize,
        skip: Option<usize>,
        sigma: &SimplexForm,
        top: &BTreeMap<usize, SimplexForm>,
    ) -> Option<SimplexForm> {
        let x = self.projection.source().clone();
        self.fiber_forms(n, sigma)
            .to_vec()
            .into_iter()
            .find(|z| {
                (0..=n)
                    .filter(|i| Some(*i) != skip)
                    .all(|i| x.face(z, i) == top[&i])
            })
    }

    /// Materialize the lifting square for a facet tuple.
    pub fn materialize_square(
        &self,
        n: usize,
        skip: Option<usize>,
        sigma: &SimplexForm,
        top: &BTreeMap<usize, SimplexForm>,
    ) -> LiftingProblem {
        let x = self.projection.source();
        let s = self.projection.target();
        let (dom, included) = match skip {
            Some(k) => horn_data(n, k).expect("horn indices validated"),
            None => boundary_data(n),
        };
        let delta = crate::complex::standard_simplex(n);
        let incl = SimplicialMap::from_inclusion(&dom, &delta, &included);
        // Image of each horn simplex: restrict a containing facet.
        let mut images = Vec::with_capacity(dom.grades().len());
        for dim in 0..dom.grades().len() {
            let mut row = Vec::with_capacity(dom.grade_count(dim));
            for key in dom.keys(dim) {
                let subset = subset_of_simplex_key(n, included[dim][key.index]);
                let i = (0..=n)
                    .find(|i| Some(*i) != skip && !subset.contains(i))
                    .expect("proper horn simplex misses a kept facet");
                // Positions of `subset` inside the facet that omits `i`.
                let phi: Vec<usize> =
                    subset.iter().map(|&v| if v < i { v } else { v - 1 }).collect();
                row.push(x.act(&top[&i], &phi));
            }
            images.push(row);
        }
        let top_map = SimplicialMap::new(dom.clone(), x.clone(), images)
            .expect("facet tuple glues to a map");
        let bottom = simplex_as_map(s, sigma);
        LiftingProblem::new(incl, top_map, bottom, self.projection.clone())
            .expect("materialized square commutes")
    }

    /// Check the right lifting property against the family up to
    /// `dim_bound`, counting the squares examined.
    pub fn has_rlp(&mut self, family: InclusionFamily, dim_bound: usize) -> Verdict {
        let mut squares = 0usize;
        let base = self.projection.target().clone();
        for n in family.min_dim()..=dim_bound {
            for skip in family.horn_indices(n) {
                for sigma in base.all_forms(n) {
                    if n == 0 {
                        // Boundary of the point: a lift is a vertex over sigma.
                        squares += 1;
                        if self.fiber_forms(0, &sigma).is_empty() {
                            let square =
                                self.materialize_square(0, None, &sigma, &BTreeMap::new());
                            debug_assert!(extend(&square).is_none());
                            return Verdict::Fails { witness: Box::new(Witness::Square(square)) };
                        }
                        continue;
                    }
                    let mut failure: Option<LiftingProblem> = None;
                    let complete = self.for_each_top(
                        n,
                        skip,
                        &sigma,
                        &BTreeMap::new(),
                        &mut |checker, top| {
                            squares += 1;
                            if checker.filler(n, skip, &sigma, top).is_none() {
                                let square = checker.materialize_square(n, skip, &sigma, top);
                                debug_assert!(extend(&square).is_none());
                                failure = Some(square);
                                false
                            } else {
                                true
                            }
                        },
                    );
                    if !complete {
                        let square = failure.expect("early stop records a failure");
                        return Verdict::Fails { witness: Box::new(Witness::Square(square)) };
                    }
                }
            }
        }
        Verdict::Holds { squares_checked: squares, dim_bound }
    }
}

/// Convenience wrapper: check the RLP of `p` against a family.
pub fn has_rlp(p: &SimplicialMap, family: InclusionFamily, dim_bound: usize) -> Verdict {
    RlpChecker::new(p).has_rlp(family, dim_bound)
}

/// Default dimension bound: `max(dim X, dim S) + 2`.
pub fn default_bound(p: &SimplicialMap) -> usize {
    let dx = p.source().dim().unwrap_or(0);
    let ds = p.target().dim().unwrap_or(0);
    dx.max(ds) + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{horn_data, standard_simplex};
    use crate::map::SimplicialMap;

    #[test]
    fn map_counts_match_monotone_counts() {
        let d0 = standard_simplex(0);
        let d1 = standard_simplex(1);
        let d2 = standard_simplex(2);
        assert_eq!(enumerate_maps(&d0, &d1).len(), 2);
        assert_eq!(enumerate_maps(&d1, &d1).len(), 3);
        assert_eq!(enumerate_maps(&d2, &d1).len(), 4);
        assert_eq!(enumerate_maps(&d1, &d2).len(), 6);
    }

    #[test]
    fn extend_finds_identity_lift() {
        let d2 = standard_simplex(2);
        let (horn, data) = horn_data(2, 1).unwrap();
        let incl = SimplicialMap::from_inclusion(&horn, &d2, &data);
        let problem = LiftingProblem::new(
            incl.clone(),
            incl.clone(),
            SimplicialMap::identity(&d2),
            SimplicialMap::identity(&d2),
        )
        .unwrap();
        let lift = extend(&problem).expect("identity lifts");
        assert_eq!(lift, SimplicialMap::identity(&d2));
    }

    #[test]
    fn missing_reverse_edge_blocks_lift() {
        // Outer horn into the interval over the point: the square asking
        // for an edge from vertex 1 back to vertex 0 has no lift.
        let d1 = standard_simplex(1);
        let d2 = standard_simplex(2);
        let (horn, data) = horn_data(2, 0).unwrap();
        let incl = SimplicialMap::from_inclusion(&horn, &d2, &data);
        let v0 = SimplexKey::new(0, 0).form();
        let e01 = SimplexKey::new(1, 0);
        // Horn keys: vertices 0,1,2 then edges 01, 02.
        let images = vec![
            vec![v0.clone(), SimplexKey::new(0, 1).form(), v0.clone()],
            vec![e01.form(), v0.degenerate(0)],
        ];
        let top = SimplicialMap::new(horn.clone(), d1.clone(), images).unwrap();
        let problem = LiftingProblem::new(
            incl,
            top,
            SimplicialMap::to_point(&d2),
            SimplicialMap::to_point(&d1),
        )
        .unwrap();
        assert!(extend(&problem).is_none());
    }

    #[test]
    fn boundary_square_with_lift() {
        let d1 = standard_simplex(1);
        let (bd, data) = boundary_data(1);
        let incl = SimplicialMap::from_inclusion(&bd, &d1, &data);
        let top = incl.clone();
        let problem = LiftingProblem::new(
            incl,
            top,
            SimplicialMap::to_point(&d1),
            SimplicialMap::to_point(&d1),
        )
        .unwrap();
        let lift = extend(&problem).unwrap();
        assert_eq!(lift, SimplicialMap::identity(&d1));
    }

    #[test]
    fn rlp_of_isomorphism_holds() {
        let d2 = standard_simplex(2);
        let id = SimplicialMap::identity(&d2);
        let verdict = has_rlp(&id, InclusionFamily::AllHorns, 4);
        assert!(verdict.holds());
    }

    #[test]
    fn interval_over_point_fails_left_horns() {
        let d1 = standard_simplex(1);
        let p = SimplicialMap::to_point(&d1);
        let verdict = has_rlp(&p, InclusionFamily::LeftHorns, 3);
        match verdict {
            Verdict::Fails { witness } => match *witness {
                Witness::Square(square) => {
                    assert!(extend(&square).is_none());
                    // The witness lives at the outer horn of the 2-simplex.
                    assert_eq!(square.inclusion.target().dim(), Some(2));
                }
                other => panic!("unexpected witness {other:?}"),
            },
            other => panic!("expected failure, got {other:?}"),
        }
        // Inner horns over the point do lift: the interval is a nerve.
        assert!(has_rlp(&p, InclusionFamily::InnerHorns, 3).holds());
    }

    #[test]
    fn discrete_complex_is_kan_over_point() {
        let (b1, _) = boundary_data(1);
        let p = SimplicialMap::to_point(&b1);
        assert!(has_rlp(&p, InclusionFamily::AllHorns, 3).holds());
    }
}
