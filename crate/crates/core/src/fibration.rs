//! Fibration classifiers: horn-family lifting, homotopy categories and
//! equivalence edges, initial objects, cocartesian and cartesian edges and
//! fibrations, transport, trivial fibrations, and cores.

use std::collections::{BTreeMap, HashMap};

use crate::category::{FiniteCategory, MorId};
use crate::complex::{opposite, opposite_form, subcomplex_generated, SimplicialSet};
use crate::hom::{has_rlp, InclusionFamily, RlpChecker, Verdict, Witness};
use crate::map::{opposite_map, simplex_as_map, SimplicialMap};
use crate::product::{pullback, Product};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

/// The four horn-family fibration classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibrationKind {
    Left,
    Right,
    Kan,
    Inner,
}

impl FibrationKind {
    pub fn family(self) -> InclusionFamily {
        match self {
            FibrationKind::Left => InclusionFamily::LeftHorns,
            FibrationKind::Right => InclusionFamily::RightHorns,
            FibrationKind::Kan => InclusionFamily::AllHorns,
            FibrationKind::Inner => InclusionFamily::InnerHorns,
        }
    }
}

/// RLP against the horn family of `kind`, up to `dim_bound`.
pub fn check_fibration(p: &SimplicialMap, kind: FibrationKind, dim_bound: usize) -> Verdict {
    has_rlp(p, kind.family(), dim_bound)
}

/// Inner-horn filling over the point.
pub fn is_quasicategory(x: &SimplicialSet, dim_bound: usize) -> Verdict {
    check_fibration(&SimplicialMap::to_point(x), FibrationKind::Inner, dim_bound)
}

/// RLP against boundary inclusions up to `dim_bound`.
pub fn is_trivial_fibration(p: &SimplicialMap, dim_bound: usize) -> Verdict {
    has_rlp(p, InclusionFamily::Boundaries, dim_bound)
}

// ---------------------------------------------------------------------------
// Homotopy category
// ---------------------------------------------------------------------------

/// The homotopy category of a verified quasicategory: vertices as objects,
/// edge-homotopy classes as morphisms, composition by inner-horn fillers.
pub struct HomotopyCategory {
    pub category: FiniteCategory,
    /// Edge form -> morphism id.
    class_of: HashMap<SimplexForm, MorId>,
}

impl HomotopyCategory {
    pub fn class_of(&self, edge: &SimplexForm) -> MorId {
        self.class_of[edge]
    }

    pub fn is_equivalence(&self, edge: &SimplexForm) -> bool {
        self.category.is_iso(self.class_of(edge))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, a: usize) -> usize {
        if self.0[a] != a {
            let r = self.find(self.0[a]);
            self.0[a] = r;
        }
        self.0[a]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Compute the homotopy category, verifying the quasicategory condition to
/// `dim_bound` first. Errors on non-quasicategory input and on ambiguous
/// composition (an internal-consistency breach for verified inputs).
pub fn homotopy_category(x: &SimplicialSet, dim_bound: usize) -> Result<HomotopyCategory, Error> {
    if !is_quasicategory(x, dim_bound).holds() {
        return Err(Error::Precondition(
            "homotopy category needs a verified quasicategory".into(),
        ));
    }
    let edges = x.all_forms(1);
    let edge_index: HashMap<SimplexForm, usize> =
        edges.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let mut uf = UnionFind::new(edges.len());
    let triangles = x.all_forms(2);
    for sigma in &triangles {
        let d0 = x.face(sigma, 0);
        let d1 = x.face(sigma, 1);
        let d2 = x.face(sigma, 2);
        if d0.is_degenerate() {
            uf.union(edge_index[&d2], edge_index[&d1]);
        }
        if d2.is_degenerate() {
            uf.union(edge_index[&d0], edge_index[&d1]);
        }
    }
    // Classes in first-appearance order.
    let mut class_ids: HashMap<usize, usize> = HashMap::new();
    let mut n_mor = 0usize;
    for i in 0..edges.len() {
        let r = uf.find(i);
        class_ids.entry(r).or_insert_with(|| {
            n_mor += 1;
            n_mor - 1
        });
    }
    let mut mor_source = vec![0usize; n_mor];
    let mut mor_target = vec![0usize; n_mor];
    for (i, e) in edges.iter().enumerate() {
        let c = class_ids[&uf.find(i)];
        mor_source[c] = x.vertex(e, 0).index;
        mor_target[c] = x.vertex(e, 1).index;
    }
    let identity: Vec<MorId> = x
        .keys(0)
        .map(|v| class_ids[&uf.find(edge_index[&v.form().degenerate(0)])])
        .collect();
    // Composition via fillers, checked exhaustively for consistency.
    let mut compose: Vec<Vec<Option<MorId>>> = vec![vec![None; n_mor]; n_mor];
    for sigma in &triangles {
        let f = class_ids[&uf.find(edge_index[&x.face(sigma, 2)])];
        let g = class_ids[&uf.find(edge_index[&x.face(sigma, 0)])];
        let gf = class_ids[&uf.find(edge_index[&x.face(sigma, 1)])];
        match compose[g][f] {
            None => compose[g][f] = Some(gf),
            Some(prev) if prev == gf => {}
            Some(_) => {
                return Err(Error::Internal(
                    "ambiguous composition in the homotopy category".into(),
                ))
            }
        }
    }
    for g in 0..n_mor {
        for f in 0..n_mor {
            if mor_target[f] == mor_source[g] && compose[g][f].is_none() {
                return Err(Error::Internal(format!(
                    "no filler for a composable pair of edge classes ({g},{f})"
                )));
            }
        }
    }
    let category = FiniteCategory::new(x.grade_count(0), mor_source, mor_target, identity, compose)
        .map_err(|e| Error::Internal(format!("homotopy category is not a category: {e}")))?;
    let class_of = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), class_ids[&uf.find(i)]))
        .collect();
    Ok(HomotopyCategory { category, class_of })
}

/// Whether `e` is invertible in the homotopy category; verifies the
/// quasicategory condition on the way.
pub fn is_equivalence_edge(
    x: &SimplicialSet,
    e: &SimplexForm,
    dim_bound: usize,
) -> Result<bool, Error> {
    if e.dim() != 1 || !x.contains(e.base) {
        return Err(Error::Precondition("not an edge of the complex".into()));
    }
    Ok(homotopy_category(x, dim_bound)?.is_equivalence(e))
}

// ---------------------------------------------------------------------------
// Isofibrations
// ---------------------------------------------------------------------------

/// Inner fibration into a verified quasicategory, lifting every equivalence
/// out of a projected vertex through an equivalence of the total space.
pub fn is_isofibration(p: &SimplicialMap, dim_bound: usize) -> Result<Verdict, Error> {
    let base_h = homotopy_category(p.target(), dim_bound)?;
    let inner = check_fibration(p, FibrationKind::Inner, dim_bound);
    if !inner.holds() {
        return Ok(inner);
    }
    let total_h = homotopy_category(p.source(), dim_bound).map_err(|_| {
        Error::Internal(
            "inner fibration over a quasicategory must have a quasicategory total space".into(),
        )
    })?;
    let mut squares = 0usize;
    let total = p.source();
    let lifts: Vec<SimplexForm> = total.all_forms(1);
    for x in total.keys(0) {
        let px = p.apply(&x.form());
        for f in p.target().all_forms(1) {
            if p.target().vertex(&f, 0) != px.base || !base_h.is_equivalence(&f) {
                continue;
            }
            squares += 1;
            let found = lifts.iter().any(|phi| {
                total.vertex(phi, 0) == x && p.apply(phi) == f && total_h.is_equivalence(phi)
            });
            if !found {
                return Ok(Verdict::Fails {
                    witness: Box::new(Witness::NoEquivalenceLift {
                        projection: p.clone(),
                        base_edge: f,
                        total_vertex: x,
                        dim_bound,
                    }),
                });
            }
        }
    }
    match inner {
        Verdict::Holds { squares_checked, .. } => {
            Ok(Verdict::Holds { squares_checked: squares_checked + squares, dim_bound })
        }
        other => Ok(other),
    }
}

// ---------------------------------------------------------------------------
// Initial objects
// ---------------------------------------------------------------------------

/// Every sphere at `x` (a boundary map sending vertex 0 to `x`) fills, for
/// dimensions 1..=dim_bound.
pub fn is_initial(x: &SimplicialSet, vertex: SimplexKey, dim_bound: usize) -> Verdict {
    let p = SimplicialMap::to_point(x);
    let mut checker = RlpChecker::new(&p);
    let point = p.target().clone();
    let mut squares = 0usize;
    for n in 1..=dim_bound {
        let sigma = point.all_forms(n).pop().expect("point has one form per dimension");
        let mut failure = None;
        let complete = checker.for_each_top_filtered(
            n,
            None,
            &sigma,
            &BTreeMap::new(),
            &|i, z, total: &SimplicialSet| i == 0 || total.vertex(z, 0) == vertex,
            &mut |c, top| {
                squares += 1;
                if c.filler(n, None, &sigma, top).is_none() {
                    failure = Some(c.materialize_square(n, None, &sigma, top));
                    false
                } else {
                    true
                }
            },
        );
        if !complete {
            return Verdict::Fails {
                witness: Box::new(Witness::Square(failure.expect("failure recorded"))),
            };
        }
    }
    Verdict::Holds { squares_checked: squares, dim_bound }
}

/// A left fibration is corepresentable when its total space has an initial
/// vertex.
pub fn is_corepresentable(p: &SimplicialMap, dim_bound: usize) -> Verdict {
    let total = p.source();
    let mut per_vertex = Vec::new();
    let mut squares = 0usize;
    for v in total.keys(0) {
        match is_initial(total, v, dim_bound) {
            Verdict::Holds { squares_checked, .. } => {
                return Verdict::Holds { squares_checked: squares + squares_checked, dim_bound }
            }
            Verdict::Fails { witness } => match *witness {
                Witness::Square(square) => per_vertex.push((v, square)),
                _ => unreachable!("initial-object failures carry squares"),
            },
            unknown @ Verdict::Unknown { .. } => return unknown,
        }
        squares += 1;
    }
    Verdict::Fails { witness: Box::new(Witness::NoInitialVertex { per_vertex }) }
}

// ---------------------------------------------------------------------------
// Cocartesian and cartesian edges and fibrations
// ---------------------------------------------------------------------------

/// The initial-extension condition: every outer-horn extension of `f` with
/// a compatible base simplex admits a lift, for 2..=dim_bound.
pub fn is_cocartesian_edge(p: &SimplicialMap, f: &SimplexForm, dim_bound: usize) -> Verdict {
    assert!(f.dim() == 1 && p.source().contains(f.base), "edge of the total space");
    let base = p.target().clone();
    let total = p.source().clone();
    let pf = p.apply(f);
    let mut checker = RlpChecker::new(p);
    let mut squares = 0usize;
    for n in 2..=dim_bound {
        for sigma in base.all_forms(n) {
            if base.act(&sigma, &[0, 1]) != pf {
                continue;
            }
            let mut failure = None;
            let f_pin = f.clone();
            let total_ref = total.clone();
            let complete = checker.for_each_top_filtered(
                n,
                Some(0),
                &sigma,
                &BTreeMap::new(),
                &move |i, z, _| i < 2 || total_ref.act(z, &[0, 1]) == f_pin,
                &mut |c, top| {
                    squares += 1;
                    if c.filler(n, Some(0), &sigma, top).is_none() {
                        failure = Some(c.materialize_square(n, Some(0), &sigma, top));
                        false
                    } else {
                        true
                    }
                },
            );
            if !complete {
                return Verdict::Fails {
                    witness: Box::new(Witness::NonCocartesianEdge {
                        edge: f.clone(),
                        square: failure.expect("failure recorded"),
                    }),
                };
            }
        }
    }
    Verdict::Holds { squares_checked: squares, dim_bound }
}

/// Dual of [`is_cocartesian_edge`] through the opposite map.
pub fn is_cartesian_edge(p: &SimplicialMap, f: &SimplexForm, dim_bound: usize) -> Verdict {
    let op = opposite_projection(p);
    is_cocartesian_edge(&op, &opposite_form(f), dim_bound)
}

pub fn opposite_projection(p: &SimplicialMap) -> SimplicialMap {
    opposite_map(p, &opposite(p.source()), &opposite(p.target()))
}

/// Every base edge with a lifted source admits a cocartesian lift.
pub fn is_cocartesian_fibration(p: &SimplicialMap, dim_bound: usize) -> Verdict {
    let total = p.source();
    let base = p.target();
    let mut squares = 0usize;
    for eta in base.all_forms(1) {
        let src = base.vertex(&eta, 0);
        for x in total.keys(0) {
            if p.apply(&x.form()).base != src {
                continue;
            }
            let mut found = false;
            for e in total.all_forms(1) {
                if total.vertex(&e, 0) != x || p.apply(&e) != eta {
                    continue;
                }
                match is_cocartesian_edge(p, &e, dim_bound) {
                    Verdict::Holds { squares_checked, .. } => {
                        squares += squares_checked;
                        found = true;
                        break;
                    }
                    Verdict::Fails { .. } => squares += 1,
                    unknown @ Verdict::Unknown { .. } => return unknown,
                }
            }
            if !found {
                return Verdict::Fails {
                    witness: Box::new(Witness::NoCocartesianLift {
                        projection: p.clone(),
                        base_edge: eta,
                        total_vertex: x,
                        dim_bound,
                    }),
                };
            }
        }
    }
    Verdict::Holds { squares_checked: squares, dim_bound }
}

pub fn is_cartesian_fibration(p: &SimplicialMap, dim_bound: usize) -> Verdict {
    is_cocartesian_fibration(&opposite_projection(p), dim_bound)
}

/// Cartesian after pullback to every edge of the base.
pub fn is_locally_cartesian(p: &SimplicialMap, dim_bound: usize) -> Verdict {
    let base = p.target();
    let mut squares = 0usize;
    for eta in base.all_forms(1) {
        let sigma = simplex_as_map(base, &eta);
        let pb = pullback(p, &sigma).expect("common codomain");
        let q = pb.pr_right.clone();
        let inner = check_fibration(&q, FibrationKind::Inner, dim_bound);
        let result = if inner.holds() { is_cartesian_fibration(&q, dim_bound) } else { inner };
        match result {
            Verdict::Holds { squares_checked, .. } => squares += squares_checked,
            Verdict::Fails { witness } => {
                return Verdict::Fails {
                    witness: Box::new(Witness::Item {
                        item: "pullback over a base edge is not a cartesian fibration".into(),
                        inner: witness,
                    }),
                }
            }
            unknown => return unknown,
        }
    }
    Verdict::Holds { squares_checked: squares, dim_bound }
}

/// A locally cartesian edge: cartesian in the pullback over its own
/// projection.
pub fn is_locally_cartesian_edge(
    p: &SimplicialMap,
    psi: &SimplexForm,
    dim_bound: usize,
) -> Verdict {
    let base = p.target();
    let sigma = simplex_as_map(base, &p.apply(psi));
    let pb = pullback(p, &sigma).expect("common codomain");
    let interval = sigma.source().clone();
    let edge = interval.keys(1).next().expect("interval edge").form();
    let lifted = pb.pair_form(p.source(), &interval, psi, &edge);
    is_cartesian_edge(&pb.pr_right, &lifted, dim_bound)
}

/// Vertex transport along a base edge, with the chosen cocartesian lifts.
pub struct Transport {
    pub base_edge: SimplexForm,
    /// Per source-fiber vertex: the chosen lift and the target vertex.
    pub assignments: Vec<(SimplexKey, SimplexForm, SimplexKey)>,
}

/// Transport along `eta` via lexicographically first cocartesian lifts.
pub fn cocartesian_transport(
    p: &SimplicialMap,
    eta: &SimplexForm,
    dim_bound: usize,
) -> Result<Transport, Error> {
    let total = p.source();
    let base = p.target();
    let src = base.vertex(eta, 0);
    let mut assignments = Vec::new();
    for x in total.keys(0) {
        if p.apply(&x.form()).base != src {
            continue;
        }
        let lift = total
            .all_forms(1)
            .into_iter()
            .find(|e| {
                total.vertex(e, 0) == x
                    && p.apply(e) == *eta
                    && is_cocartesian_edge(p, e, dim_bound).holds()
            })
            .ok_or_else(|| {
                Error::Internal(format!("no cocartesian lift over {eta:?} at vertex {x:?}"))
            })?;
        let target = total.vertex(&lift, 1);
        assignments.push((x, lift, target));
    }
    Ok(Transport { base_edge: eta.clone(), assignments })
}

// ---------------------------------------------------------------------------
// Cores and fibers
// ---------------------------------------------------------------------------

/// The largest subcomplex all of whose edges are equivalences.
pub fn core_of(
    x: &SimplicialSet,
    dim_bound: usize,
) -> Result<(SimplicialSet, SimplicialMap), Error> {
    let h = homotopy_category(x, dim_bound)?;
    let mut kept = Vec::new();
    for dim in 0..x.grades().len() {
        'key: for key in x.keys(dim) {
            let form = key.form();
            for i in 0..dim {
                for j in i + 1..=dim {
                    if !h.is_equivalence(&x.act(&form, &[i, j])) {
                        continue 'key;
                    }
                }
            }
            kept.push(key);
        }
    }
    let (core, included) = subcomplex_generated(x, &kept);
    let incl = SimplicialMap::from_inclusion(&core, x, &included);
    Ok((core, incl))
}

/// The fiber of `p` over a base vertex, with its inclusion into the total
/// space.
pub fn fiber_over_vertex(p: &SimplicialMap, v: SimplexKey) -> (SimplicialSet, SimplicialMap) {
    let sigma = simplex_as_map(p.target(), &v.form());
    let pb = pullback(p, &sigma).expect("common codomain");
    (pb.complex.clone(), pb.pr_left)
}

/// Pullback of `p` along an arbitrary map, exposing both projections.
pub fn pullback_along(p: &SimplicialMap, f: &SimplicialMap) -> Product {
    pullback(p, f).expect("common codomain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::nerve;
    use crate::complex::{boundary_data, standard_simplex};
    use crate::corpus;

    #[test]
    fn interval_over_point_is_inner_not_left() {
        let d1 = standard_simplex(1);
        let p = SimplicialMap::to_point(&d1);
        assert!(check_fibration(&p, FibrationKind::Inner, 3).holds());
        assert!(check_fibration(&p, FibrationKind::Left, 3).fails());
    }

    #[test]
    fn boundary_over_point_is_kan() {
        let (b1, _) = boundary_data(1);
        let p = SimplicialMap::to_point(&b1);
        assert!(check_fibration(&p, FibrationKind::Kan, 3).holds());
    }

    #[test]
    fn homotopy_category_of_triangle_is_linear() {
        let d2 = standard_simplex(2);
        let h = homotopy_category(&d2, 3).unwrap();
        let expected = FiniteCategory::linear(2);
        assert_eq!(h.category.objects, 3);
        assert_eq!(h.category.morphisms(), expected.morphisms());
        for e in d2.all_forms(1) {
            assert_eq!(h.is_equivalence(&e), e.is_degenerate());
        }
    }

    #[test]
    fn homotopy_category_of_discrete_complex() {
        let two = crate::complex::disjoint_union(&standard_simplex(0), &standard_simplex(0));
        let h = homotopy_category(&two, 3).unwrap();
        assert_eq!(h.category.objects, 2);
        assert_eq!(h.category.morphisms(), 2);
    }

    #[test]
    fn nerve_homotopy_category_recovers_poset() {
        let c = corpus::square_poset();
        let n = nerve(&c, 3);
        let h = homotopy_category(&n.complex, 3).unwrap();
        assert_eq!(h.category.objects, c.objects);
        assert_eq!(h.category.morphisms(), c.morphisms());
    }

    #[test]
    fn walking_iso_nerve_has_equivalences() {
        let c = corpus::walking_isomorphism();
        let n = nerve(&c, 3);
        let h = homotopy_category(&n.complex, 3).unwrap();
        for e in n.complex.all_forms(1) {
            assert!(h.is_equivalence(&e));
        }
    }

    #[test]
    fn initial_vertex_of_interval() {
        let d1 = standard_simplex(1);
        assert!(is_initial(&d1, SimplexKey::new(0, 0), 3).holds());
        assert!(is_initial(&d1, SimplexKey::new(0, 1), 3).fails());
        let (b1, _) = boundary_data(1);
        assert!(is_initial(&b1, SimplexKey::new(0, 0), 3).fails());
    }

    #[test]
    fn identity_is_cocartesian_everywhere() {
        let d1 = standard_simplex(1);
        let id = SimplicialMap::identity(&d1);
        assert!(is_cocartesian_fibration(&id, 3).holds());
        assert!(is_cartesian_fibration(&id, 3).holds());
        assert!(is_locally_cartesian(&id, 3).holds());
    }

    #[test]
    fn interval_over_point_is_cocartesian_but_not_left() {
        let d1 = standard_simplex(1);
        let p = SimplicialMap::to_point(&d1);
        assert!(is_cocartesian_fibration(&p, 3).holds());
        assert!(check_fibration(&p, FibrationKind::Left, 3).fails());
    }

    #[test]
    fn transport_along_identity_fibration() {
        let d1 = standard_simplex(1);
        let id = SimplicialMap::identity(&d1);
        let edge = SimplexKey::new(1, 0).form();
        let t = cocartesian_transport(&id, &edge, 3).unwrap();
        assert_eq!(t.assignments.len(), 1);
        assert_eq!(t.assignments[0].0, SimplexKey::new(0, 0));
        assert_eq!(t.assignments[0].2, SimplexKey::new(0, 1));
    }

    #[test]
    fn trivial_fibration_examples() {
        let d2 = standard_simplex(2);
        assert!(is_trivial_fibration(&SimplicialMap::identity(&d2), 3).holds());
        let d1 = standard_simplex(1);
        let p = SimplicialMap::to_point(&d1);
        assert!(is_trivial_fibration(&p, 3).fails());
    }

    #[test]
    fn core_of_mixed_category_nerve() {
        let c = corpus::arrow_then_iso();
        let n = nerve(&c, 3);
        let (core, _incl) = core_of(&n.complex, 3).unwrap();
        // Vertices survive; only the isomorphism pair of edges does.
        assert_eq!(core.grade_count(0), 3);
        assert_eq!(core.grade_count(1), 2);
    }

    #[test]
    fn fiber_of_product_projection() {
        let d1 = standard_simplex(1);
        let d2 = standard_simplex(2);
        let p = crate::product::product(&d2, &d1);
        let (fiber, _) = fiber_over_vertex(&p.pr_right, SimplexKey::new(0, 0));
        assert!(crate::complex::are_isomorphic(&fiber, &d2));
    }

    #[test]
    fn isofibration_over_poset_nerve() {
        let square = corpus::square_poset();
        let n = nerve(&square, 3);
        let id = SimplicialMap::identity(&n.complex);
        assert!(is_isofibration(&id, 3).unwrap().holds());
    }
}
