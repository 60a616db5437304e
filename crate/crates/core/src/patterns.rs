//! Marked simplicial sets and categorical patterns: the fibered-object
//! checker, the composition/pullback/sections functor string, and the
//! hypothesis audits for span-induced pushforward constructions.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::complex::{join, SimplicialSet};
use crate::constructions::{table_eval, FiberedComplex, Table};
use crate::fibration::{
    check_fibration, homotopy_category, is_cocartesian_edge, is_cocartesian_fibration,
    is_isofibration, is_locally_cartesian, is_locally_cartesian_edge, is_quasicategory,
    FibrationKind, HomotopyCategory,
};
use crate::flatness::{is_flat_projection, Budgets};
use crate::hom::{MapProblem, Verdict, Witness};
use crate::map::{simplex_as_map, SimplicialMap};
use crate::product::{pullback, Product};
use crate::realize::{realize, Degreewise, Realization};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

/// A simplicial set with a distinguished set of edges; valid markings
/// contain every degenerate edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSimplicialSet {
    pub complex: SimplicialSet,
    pub marks: BTreeSet<SimplexForm>,
}

impl MarkedSimplicialSet {
    fn degenerate_edges(x: &SimplicialSet) -> BTreeSet<SimplexForm> {
        x.keys(0).map(|v| v.form().degenerate(0)).collect()
    }

    /// Only the degenerate edges marked.
    pub fn minimal(x: &SimplicialSet) -> MarkedSimplicialSet {
        MarkedSimplicialSet { marks: Self::degenerate_edges(x), complex: x.clone() }
    }

    /// Every edge marked.
    pub fn sharp(x: &SimplicialSet) -> MarkedSimplicialSet {
        MarkedSimplicialSet { marks: x.all_forms(1).into_iter().collect(), complex: x.clone() }
    }

    /// The minimal marking extended by the given edges.
    pub fn with_marks(
        x: &SimplicialSet,
        extra: impl IntoIterator<Item = SimplexForm>,
    ) -> MarkedSimplicialSet {
        let mut marks = Self::degenerate_edges(x);
        marks.extend(extra);
        MarkedSimplicialSet { marks, complex: x.clone() }
    }

    /// A raw marking, possibly invalid; used by the validators.
    pub fn raw(x: &SimplicialSet, marks: BTreeSet<SimplexForm>) -> MarkedSimplicialSet {
        MarkedSimplicialSet { complex: x.clone(), marks }
    }

    pub fn is_marked(&self, e: &SimplexForm) -> bool {
        self.marks.contains(e)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for m in &self.marks {
            if m.dim() != 1 || !self.complex.contains(m.base) || !m.word_is_valid() {
                out.push(format!("marked entry {m:?} is not an edge of the complex"));
            }
        }
        for v in self.complex.keys(0) {
            let e = v.form().degenerate(0);
            if !self.marks.contains(&e) {
                out.push(format!("degenerate edge at vertex {} is not marked", v.index));
            }
        }
        out
    }
}

/// A map of marked simplicial sets: marked edges land on marked edges.
#[derive(Clone, Debug)]
pub struct MarkedMap {
    pub source: MarkedSimplicialSet,
    pub target: MarkedSimplicialSet,
    pub map: SimplicialMap,
}

impl MarkedMap {
    pub fn new(
        source: MarkedSimplicialSet,
        target: MarkedSimplicialSet,
        map: SimplicialMap,
    ) -> Result<MarkedMap, Error> {
        if map.source() != &source.complex || map.target() != &target.complex {
            return Err(Error::InvalidMap("marked map endpoints disagree".into()));
        }
        for m in &source.marks {
            if !target.marks.contains(&map.apply(m)) {
                return Err(Error::InvalidMap(format!(
                    "marked edge {m:?} maps to an unmarked edge"
                )));
            }
        }
        Ok(MarkedMap { source, target, map })
    }

    pub fn identity(x: &MarkedSimplicialSet) -> MarkedMap {
        MarkedMap {
            source: x.clone(),
            target: x.clone(),
            map: SimplicialMap::identity(&x.complex),
        }
    }
}

/// A marked simplicial set over a marked base.
#[derive(Clone, Debug)]
pub struct MarkedObject {
    pub object: MarkedSimplicialSet,
    pub structure: SimplicialMap,
}

impl MarkedObject {
    pub fn new(
        object: MarkedSimplicialSet,
        structure: SimplicialMap,
        base: &MarkedSimplicialSet,
    ) -> Result<MarkedObject, Error> {
        if structure.source() != &object.complex || structure.target() != &base.complex {
            return Err(Error::InvalidMap("marked object structure endpoints disagree".into()));
        }
        for m in &object.marks {
            if !base.marks.contains(&structure.apply(m)) {
                return Err(Error::InvalidMap(format!(
                    "marked edge {m:?} projects to an unmarked base edge"
                )));
            }
        }
        Ok(MarkedObject { object, structure })
    }
}

// ---------------------------------------------------------------------------
// Categorical patterns
// ---------------------------------------------------------------------------

/// A cone datum: a map out of the left cone of `k` into the pattern base.
#[derive(Clone, Debug)]
pub struct Cone {
    pub k: SimplicialSet,
    pub map: SimplicialMap,
}

impl Cone {
    pub fn new(k: SimplicialSet, map: SimplicialMap) -> Result<Cone, Error> {
        let cone_complex = join(&crate::complex::standard_simplex(0), &k).complex;
        if map.source() != &cone_complex {
            return Err(Error::InvalidMap("cone map must start at the left cone of k".into()));
        }
        Ok(Cone { k, map })
    }
}

/// A triple of marked edges, scaled 2-simplices, and cone maps.
#[derive(Clone, Debug)]
pub struct CategoricalPattern {
    pub base: SimplicialSet,
    pub marked: BTreeSet<SimplexForm>,
    pub scaled: BTreeSet<SimplexForm>,
    pub cones: Vec<Cone>,
}

impl CategoricalPattern {
    /// `(S_1, S_2, empty)`: everything marked and scaled.
    pub fn sharp(base: &SimplicialSet) -> CategoricalPattern {
        CategoricalPattern {
            base: base.clone(),
            marked: base.all_forms(1).into_iter().collect(),
            scaled: base.all_forms(2).into_iter().collect(),
            cones: Vec::new(),
        }
    }

    /// `(M, S_2, empty)` with the given marking.
    pub fn with_marks(base: &SimplicialSet, marked: BTreeSet<SimplexForm>) -> CategoricalPattern {
        CategoricalPattern {
            base: base.clone(),
            marked,
            scaled: base.all_forms(2).into_iter().collect(),
            cones: Vec::new(),
        }
    }
}

/// Check the pattern closure conditions; returns all findings.
pub fn validate_pattern(pat: &CategoricalPattern) -> Vec<String> {
    let mut out =
        MarkedSimplicialSet::raw(&pat.base, pat.marked.clone()).validate();
    for t in &pat.scaled {
        if t.dim() != 2 || !pat.base.contains(t.base) || !t.word_is_valid() {
            out.push(format!("scaled entry {t:?} is not a 2-simplex of the base"));
        }
    }
    for v in pat.base.keys(0) {
        let t = v.form().degenerate(0).degenerate(0);
        if !pat.scaled.contains(&t) {
            out.push(format!("degenerate 2-simplex at vertex {} is not scaled", v.index));
        }
    }
    for e in pat.base.all_forms(1) {
        for i in 0..=1 {
            let t = e.degenerate(i);
            if !pat.scaled.contains(&t) {
                out.push(format!("degenerate 2-simplex {t:?} is not scaled"));
            }
        }
    }
    for (i, cone) in pat.cones.iter().enumerate() {
        if cone.map.target() != &pat.base {
            out.push(format!("cone {i} does not map into the base"));
            continue;
        }
        let src = cone.map.source();
        for e in src.all_forms(1) {
            if !pat.marked.contains(&cone.map.apply(&e)) {
                out.push(format!("cone {i} sends edge {e:?} to an unmarked edge"));
            }
        }
        for t in src.all_forms(2) {
            if !pat.scaled.contains(&cone.map.apply(&t)) {
                out.push(format!("cone {i} sends 2-simplex {t:?} to an unscaled 2-simplex"));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The fibered-object checker
// ---------------------------------------------------------------------------

/// An itemized multi-part verdict.
#[derive(Debug)]
pub struct ItemizedReport {
    pub items: Vec<(String, Verdict)>,
}

impl ItemizedReport {
    pub fn overall(&self) -> Verdict {
        let mut squares = 0usize;
        let mut bound = 0usize;
        for (name, v) in &self.items {
            match v {
                Verdict::Holds { squares_checked, dim_bound } => {
                    squares += squares_checked;
                    bound = bound.max(*dim_bound);
                }
                Verdict::Fails { witness } => {
                    return Verdict::Fails {
                        witness: Box::new(Witness::Item {
                            item: name.clone(),
                            inner: witness.clone(),
                        }),
                    }
                }
                Verdict::Unknown { .. } => {}
            }
        }
        if let Some((name, Verdict::Unknown { reason, dim_bound })) =
            self.items.iter().find(|(_, v)| v.is_unknown()).map(|(n, v)| (n.clone(), v.clone()))
        {
            return Verdict::Unknown { reason: format!("{name}: {reason}"), dim_bound };
        }
        Verdict::Holds { squares_checked: squares, dim_bound: bound }
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|(_, v)| v.holds())
    }
}

/// Lift an edge of the total space into the pullback over its own
/// projection, alongside the indicated edge of the index complex.
fn lift_into_pullback(
    pb: &Product,
    total: &SimplicialSet,
    index: &SimplicialSet,
    e: &SimplexForm,
    index_edge: &SimplexForm,
) -> SimplexForm {
    pb.pair_form(total, index, e, index_edge)
}

/// The fibered-object conditions for a marked map against a pattern:
/// inner fibration, cocartesian pullbacks over marked edges, the marking
/// biconditional, the scaled condition, and (vacuously, when the cone
/// family is empty) the cone conditions.
pub fn is_pattern_fibered(
    q: &MarkedMap,
    pat: &CategoricalPattern,
    dim_bound: usize,
) -> ItemizedReport {
    let mut items: Vec<(String, Verdict)> = Vec::new();
    let p = &q.map;
    let total = p.source().clone();
    let base = p.target().clone();
    debug_assert_eq!(&base, &pat.base);
    let inner = check_fibration(p, FibrationKind::Inner, dim_bound);
    let inner_ok = inner.holds();
    items.push(("inner-fibration".into(), inner));

    // Cocartesian pullbacks over marked base edges.
    let mut verdict = Verdict::Holds { squares_checked: 0, dim_bound };
    if inner_ok {
        let mut squares = 0usize;
        'outer: for eta in &pat.marked {
            let pb = pullback(p, &simplex_as_map(&base, eta)).expect("common codomain");
            let sub = is_cocartesian_fibration(&pb.pr_right, dim_bound);
            match sub {
                Verdict::Holds { squares_checked, .. } => squares += squares_checked,
                other => {
                    verdict = other;
                    break 'outer;
                }
            }
        }
        if verdict.holds() {
            verdict = Verdict::Holds { squares_checked: squares, dim_bound };
        }
    } else {
        verdict =
            Verdict::Unknown { reason: "inner fibration failed".into(), dim_bound };
    }
    items.push(("marked-pullbacks-cocartesian".into(), verdict));

    // Marking biconditional: an edge is marked just in case it is
    // cocartesian in the pullback over its own projection.
    let mut bicond = Verdict::Holds { squares_checked: 0, dim_bound };
    if inner_ok {
        let mut squares = 0usize;
        for eps in total.all_forms(1) {
            let p_eps = p.apply(&eps);
            let sigma = simplex_as_map(&base, &p_eps);
            let pb = pullback(p, &sigma).expect("common codomain");
            let interval = sigma.source().clone();
            let lifted = lift_into_pullback(
                &pb,
                &total,
                &interval,
                &eps,
                &interval.keys(1).next().expect("interval edge").form(),
            );
            let cocart = is_cocartesian_edge(&pb.pr_right, &lifted, dim_bound);
            squares += 1;
            let marked = q.source.is_marked(&eps);
            if marked != cocart.holds() {
                bicond = Verdict::Fails {
                    witness: Box::new(Witness::MarkingMismatch {
                        edge: eps.clone(),
                        detail: if marked {
                            "marked edge is not cocartesian in its pullback".into()
                        } else {
                            "unmarked edge is cocartesian in its pullback".into()
                        },
                    }),
                };
                break;
            }
        }
        if bicond.holds() {
            bicond = Verdict::Holds { squares_checked: squares, dim_bound };
        }
    } else {
        bicond = Verdict::Unknown { reason: "inner fibration failed".into(), dim_bound };
    }
    items.push(("marking-matches-cocartesian".into(), bicond));

    // Scaled condition: marked edges over the initial edge of a scaled
    // 2-simplex are cocartesian in the pullback over it.
    let mut scaled_v = Verdict::Holds { squares_checked: 0, dim_bound };
    if inner_ok {
        let mut squares = 0usize;
        'scaled: for sigma in &pat.scaled {
            let sm = simplex_as_map(&base, sigma);
            let triangle = sm.source().clone();
            let pb = pullback(p, &sm).expect("common codomain");
            let initial = base.act(sigma, &[0, 1]);
            let edge01 = triangle
                .all_forms(1)
                .into_iter()
                .find(|e| triangle.vertex(e, 0).index == 0 && triangle.vertex(e, 1).index == 1)
                .expect("triangle edge");
            for eps in &q.source.marks {
                if p.apply(eps) != initial {
                    continue;
                }
                let lifted = lift_into_pullback(&pb, &total, &triangle, eps, &edge01);
                squares += 1;
                let v = is_cocartesian_edge(&pb.pr_right, &lifted, dim_bound);
                if !v.holds() {
                    scaled_v = Verdict::Fails {
                        witness: Box::new(Witness::MarkingMismatch {
                            edge: eps.clone(),
                            detail: "marked edge is not cocartesian over a scaled 2-simplex"
                                .into(),
                        }),
                    };
                    break 'scaled;
                }
            }
        }
        if scaled_v.holds() {
            scaled_v = Verdict::Holds { squares_checked: squares, dim_bound };
        }
    } else {
        scaled_v = Verdict::Unknown { reason: "inner fibration failed".into(), dim_bound };
    }
    items.push(("marked-over-scaled-cocartesian".into(), scaled_v));

    // Cone conditions are out of computational reach unless vacuous.
    let cone_v = if pat.cones.is_empty() {
        Verdict::Holds { squares_checked: 0, dim_bound }
    } else {
        Verdict::Unknown {
            reason: "cone-family limit conditions are only decided for an empty family".into(),
            dim_bound,
        }
    };
    items.push(("cone-limit-conditions".into(), cone_v));

    ItemizedReport { items }
}

/// Mark exactly the cocartesian edges of a verified fibration.
pub fn cocartesian_marking(p: &SimplicialMap, dim_bound: usize) -> BTreeSet<SimplexForm> {
    p.source()
        .all_forms(1)
        .into_iter()
        .filter(|e| is_cocartesian_edge(p, e, dim_bound).holds())
        .collect()
}

// ---------------------------------------------------------------------------
// The functor string: composition, pullback, sections
// ---------------------------------------------------------------------------

/// Composition with the projection.
pub fn pi_shriek(pi: &MarkedMap, x: &MarkedObject) -> Result<MarkedObject, Error> {
    let structure = pi.map.compose(&x.structure)?;
    MarkedObject::new(x.object.clone(), structure, &pi.target)
}

/// Base change: the fiber product with intersected markings.
pub fn pi_pullback(pi: &MarkedMap, y: &MarkedObject) -> Result<MarkedObject, Error> {
    if y.structure.target() != pi.map.target() {
        return Err(Error::Precondition("pullback needs an object over the target".into()));
    }
    let pb = pullback(&y.structure, &pi.map)?;
    let mut marks = BTreeSet::new();
    for e in pb.complex.all_forms(1) {
        let ey = pb.pr_left.apply(&e);
        let es = pb.pr_right.apply(&e);
        if y.object.is_marked(&ey) && pi.source.is_marked(&es) {
            marks.insert(e);
        }
    }
    MarkedObject::new(
        MarkedSimplicialSet::raw(&pb.complex, marks),
        pb.pr_right.clone(),
        &pi.source,
    )
}

/// The marked pullback `(Delta^n)^flat x_(T,N) (S,M)` along the
/// classifying map of a base form, with its marking.
struct SectionDomain {
    product: Rc<Product>,
    marks: BTreeSet<SimplexForm>,
}

struct SectionsDescription<'a> {
    pi: &'a MarkedMap,
    x: &'a MarkedObject,
    deltas: Vec<SimplicialSet>,
    cache: std::cell::RefCell<HashMap<SimplexForm, Rc<SectionDomain>>>,
}

impl SectionsDescription<'_> {
    fn base(&self) -> &SimplicialSet {
        self.pi.map.target()
    }

    fn domain(&self, sigma: &SimplexForm) -> Rc<SectionDomain> {
        if let Some(d) = self.cache.borrow().get(sigma) {
            return d.clone();
        }
        let sm = simplex_as_map(self.base(), sigma);
        let delta = sm.source().clone();
        let pb = Rc::new(pullback(&sm, &self.pi.map).expect("common codomain"));
        // Flat marking on the simplex factor, the given marking on S.
        let mut marks = BTreeSet::new();
        for e in pb.complex.all_forms(1) {
            let tau = pb.pr_left.apply(&e);
            let s_edge = pb.pr_right.apply(&e);
            if tau.is_degenerate() && self.pi.source.is_marked(&s_edge) {
                marks.insert(e);
            }
        }
        let _ = delta;
        let d = Rc::new(SectionDomain { product: pb, marks });
        self.cache.borrow_mut().insert(sigma.clone(), d.clone());
        d
    }

    fn transfer(
        &self,
        sigma: &SimplexForm,
        table: &Table,
        sigma_new: &SimplexForm,
        op_form: &SimplexForm,
    ) -> Table {
        let m = sigma.dim();
        let src = self.domain(sigma_new);
        let tgt = self.domain(sigma);
        let op_map = simplex_as_map(&self.deltas[m], op_form);
        (0..src.product.complex.grades().len())
            .map(|dim| {
                src.product
                    .complex
                    .keys(dim)
                    .map(|k| {
                        let (tau, xi) = src.product.realization.rep(k);
                        table_eval(
                            table,
                            &tgt.product.pair_form(
                                &self.deltas[m],
                                self.pi.map.source(),
                                &op_map.apply(tau),
                                xi,
                            ),
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

impl Degreewise for SectionsDescription<'_> {
    type Simplex = (SimplexForm, Table);

    fn list(&self, n: usize) -> Vec<(SimplexForm, Table)> {
        let mut out = Vec::new();
        for sigma in self.base().all_forms(n) {
            let dom = self.domain(&sigma);
            let problem = MapProblem {
                domain: &dom.product.complex,
                codomain: &self.x.object.complex,
                fixed: Default::default(),
                over: Some((&self.x.structure, &dom.product.pr_right)),
                marks: Some((&dom.marks, &self.x.object.marks)),
            };
            for m in problem.all() {
                out.push((sigma.clone(), m.images().to_vec()));
            }
        }
        out
    }

    fn face(&self, _n: usize, v: &(SimplexForm, Table), i: usize) -> (SimplexForm, Table) {
        let m = v.0.dim();
        let sigma_new = self.base().face(&v.0, i);
        let top = SimplexKey::new(m, 0).form();
        let op_form = self.deltas[m].face(&top, i);
        (sigma_new.clone(), self.transfer(&v.0, &v.1, &sigma_new, &op_form))
    }

    fn degeneracy(&self, _n: usize, v: &(SimplexForm, Table), i: usize) -> (SimplexForm, Table) {
        let m = v.0.dim();
        let sigma_new = v.0.degenerate(i);
        let op_form = SimplexKey::new(m, 0).form().degenerate(i);
        (sigma_new.clone(), self.transfer(&v.0, &v.1, &sigma_new, &op_form))
    }
}

pub struct Sections {
    pub object: MarkedObject,
    pub realization: Realization<(SimplexForm, Table)>,
    pub exact: bool,
}

/// The space of relative sections: n-simplices over a base form `sigma`
/// are marked maps from the flat-marked pullback cylinder into `x`, over
/// the source of `pi`. An edge is marked when its base edge is marked and
/// its map carries every edge over a marked edge to a marked edge.
pub fn pi_star_sections(
    pi: &MarkedMap,
    x: &MarkedObject,
    dim_bound: usize,
) -> Result<Sections, Error> {
    if x.structure.target() != pi.map.source() {
        return Err(Error::Precondition("sections need an object over the source".into()));
    }
    let desc = SectionsDescription {
        pi,
        x,
        deltas: (0..=dim_bound + 1).map(crate::complex::standard_simplex).collect(),
        cache: Default::default(),
    };
    let realization = realize(&desc, dim_bound);
    let total = realization.complex.clone();
    let images = (0..total.grades().len())
        .map(|dim| total.keys(dim).map(|k| realization.rep(k).0.clone()).collect())
        .collect();
    let structure = SimplicialMap::new(total.clone(), pi.map.target().clone(), images)
        .expect("sections project to the target base");
    // Markings by the section rule.
    let mut marks = BTreeSet::new();
    for e in total.all_forms(1) {
        let (eta, table) = section_edge_data(&desc, &realization, &e);
        if !pi.target.is_marked(&eta) {
            continue;
        }
        let dom = desc.domain(&eta);
        let carries = dom.product.complex.all_forms(1).iter().all(|w| {
            let s_edge = dom.product.pr_right.apply(w);
            !pi.source.is_marked(&s_edge) || x.object.is_marked(&table_eval(&table, w))
        });
        if carries {
            marks.insert(e);
        }
    }
    let exact = realization.top_grade_empty();
    let object = MarkedObject::new(
        MarkedSimplicialSet::raw(&total, marks),
        structure,
        &pi.target,
    )?;
    Ok(Sections { object, realization, exact })
}

/// The `(eta, table)` pair classified by an arbitrary edge form of the
/// sections complex.
fn section_edge_data(
    desc: &SectionsDescription,
    realization: &Realization<(SimplexForm, Table)>,
    e: &SimplexForm,
) -> (SimplexForm, Table) {
    let rep = realization.rep(e.base).clone();
    if e.is_degenerate() {
        // The degeneracy of a vertex section.
        desc.degeneracy(0, &rep, 0)
    } else {
        rep
    }
}

/// Count the marked maps between marked objects over the same base.
pub fn count_marked_maps_over(a: &MarkedObject, b: &MarkedObject) -> usize {
    let problem = MapProblem {
        domain: &a.object.complex,
        codomain: &b.object.complex,
        fixed: Default::default(),
        over: Some((&b.structure, &a.structure)),
        marks: Some((&a.object.marks, &b.object.marks)),
    };
    problem.count()
}

/// Marked isomorphism over a common base: an isomorphism of the underlying
/// complexes commuting with the structure maps and matching markings.
pub fn marked_iso_over(a: &MarkedObject, b: &MarkedObject) -> bool {
    if a.structure.target() != b.structure.target() {
        return false;
    }
    crate::complex::find_isomorphism_with(&a.object.complex, &b.object.complex, &|dim, i, j| {
        let ka = SimplexKey::new(dim, i);
        let kb = SimplexKey::new(dim, j);
        if a.structure.image_of_key(ka) != b.structure.image_of_key(kb) {
            return false;
        }
        if dim == 1 {
            let ma = a.object.is_marked(&ka.form());
            let mb = b.object.is_marked(&kb.form());
            if ma != mb {
                return false;
            }
        }
        true
    })
    .is_some()
}

// ---------------------------------------------------------------------------
// Span audits
// ---------------------------------------------------------------------------

/// A span of marked maps out of one marked total space.
pub struct MarkedSpan {
    pub pi: MarkedMap,
    pub rho: MarkedMap,
}

impl MarkedSpan {
    pub fn new(pi: MarkedMap, rho: MarkedMap) -> Result<MarkedSpan, Error> {
        if pi.source != rho.source {
            return Err(Error::Precondition("span legs must share the marked source".into()));
        }
        Ok(MarkedSpan { pi, rho })
    }
}

fn equivalence_items(
    name: &str,
    marked: &MarkedSimplicialSet,
    h: Option<&HomotopyCategory>,
    dim_bound: usize,
) -> (String, Verdict) {
    let verdict = match h {
        None => Verdict::Unknown {
            reason: "underlying complex is not a verified quasicategory".into(),
            dim_bound,
        },
        Some(h) => {
            let mut bad = None;
            let mut count = 0usize;
            for e in marked.complex.all_forms(1) {
                count += 1;
                if h.is_equivalence(&e) && !marked.is_marked(&e) {
                    bad = Some(e);
                    break;
                }
            }
            match bad {
                Some(e) => Verdict::Fails {
                    witness: Box::new(Witness::MarkingMismatch {
                        edge: e,
                        detail: "equivalence edge is not marked".into(),
                    }),
                },
                None => Verdict::Holds { squares_checked: count, dim_bound },
            }
        }
    };
    (name.to_string(), verdict)
}

fn composition_closed_item(
    name: &str,
    marked: &MarkedSimplicialSet,
    dim_bound: usize,
) -> (String, Verdict) {
    let x = &marked.complex;
    let mut count = 0usize;
    for sigma in x.all_forms(2) {
        let d0 = x.face(&sigma, 0);
        let d1 = x.face(&sigma, 1);
        let d2 = x.face(&sigma, 2);
        if marked.is_marked(&d2) && marked.is_marked(&d0) {
            count += 1;
            if !marked.is_marked(&d1) {
                return (
                    name.to_string(),
                    Verdict::Fails {
                        witness: Box::new(Witness::MarkingMismatch {
                            edge: d1,
                            detail: "composite of marked edges is not marked".into(),
                        }),
                    },
                );
            }
        }
    }
    (name.to_string(), Verdict::Holds { squares_checked: count, dim_bound })
}

/// The hypothesis audit for a span of marked maps between patterned bases:
/// each listed hypothesis is checked independently with the available
/// predicates.
pub fn audit_span(
    span: &MarkedSpan,
    pattern_s: &CategoricalPattern,
    pattern_t: &CategoricalPattern,
    dim_bound: usize,
    budgets: &Budgets,
) -> ItemizedReport {
    let mut items: Vec<(String, Verdict)> = Vec::new();
    let pi = &span.pi;
    let rho = &span.rho;
    let s = pi.map.target().clone();
    let x = pi.map.source().clone();

    let qs = is_quasicategory(&s, dim_bound);
    let qx = is_quasicategory(&x, dim_bound);
    let qt = is_quasicategory(rho.map.target(), dim_bound);
    items.push(("base-quasicategory".into(), qs.clone()));
    items.push(("total-quasicategory".into(), qx.clone()));
    items.push(("second-base-quasicategory".into(), qt));

    let hs = qs.holds().then(|| homotopy_category(&s, dim_bound).ok()).flatten();
    let hx = qx.holds().then(|| homotopy_category(&x, dim_bound).ok()).flatten();

    items.push(equivalence_items(
        "base-equivalences-marked",
        &pi.target,
        hs.as_ref(),
        dim_bound,
    ));
    items.push(equivalence_items(
        "total-equivalences-marked",
        &pi.source,
        hx.as_ref(),
        dim_bound,
    ));
    items.push(composition_closed_item(
        "base-marks-composition-closed",
        &pi.target,
        dim_bound,
    ));
    items.push(composition_closed_item(
        "total-marks-composition-closed",
        &pi.source,
        dim_bound,
    ));

    // Every 2-simplex whose initial edge is an equivalence is scaled.
    let scaled_item = match hs.as_ref() {
        None => Verdict::Unknown {
            reason: "equivalences undecidable without a verified base".into(),
            dim_bound,
        },
        Some(h) => {
            let mut bad = None;
            let mut count = 0usize;
            for sigma in s.all_forms(2) {
                if h.is_equivalence(&s.act(&sigma, &[0, 1])) {
                    count += 1;
                    if !pattern_s.scaled.contains(&sigma) {
                        bad = Some(sigma);
                        break;
                    }
                }
            }
            match bad {
                Some(sigma) => Verdict::Fails {
                    witness: Box::new(Witness::MarkingMismatch {
                        edge: sigma,
                        detail: "equivalence-initial 2-simplex is not scaled".into(),
                    }),
                },
                None => Verdict::Holds { squares_checked: count, dim_bound },
            }
        }
    };
    items.push(("equivalence-triangles-scaled".into(), scaled_item));

    items.push((
        "projection-flat".into(),
        is_flat_projection(&pi.map, dim_bound, budgets),
    ));
    let iso_item = match is_isofibration(&pi.map, dim_bound) {
        Ok(v) => v,
        Err(e) => Verdict::Unknown { reason: format!("isofibration check failed: {e}"), dim_bound },
    };
    items.push(("projection-isofibration".into(), iso_item));

    // Pullbacks over marked base edges are cartesian fibrations.
    let mut cart = Verdict::Holds { squares_checked: 0, dim_bound };
    let mut cart_squares = 0usize;
    'cart: for eta in &pi.target.marks {
        let pb = pullback(&pi.map, &simplex_as_map(&s, eta)).expect("common codomain");
        let inner = check_fibration(&pb.pr_right, FibrationKind::Inner, dim_bound);
        let v = if inner.holds() {
            crate::fibration::is_cartesian_fibration(&pb.pr_right, dim_bound)
        } else {
            inner
        };
        match v {
            Verdict::Holds { squares_checked, .. } => cart_squares += squares_checked,
            other => {
                cart = other;
                break 'cart;
            }
        }
    }
    if cart.holds() {
        cart = Verdict::Holds { squares_checked: cart_squares, dim_bound };
    }
    items.push(("marked-pullbacks-cartesian".into(), cart));

    // Cone hypotheses.
    let mut cone_quasi = Verdict::Holds { squares_checked: 0, dim_bound };
    let mut cone_cocart = Verdict::Holds { squares_checked: 0, dim_bound };
    for cone in &pattern_s.cones {
        let kq = is_quasicategory(&cone.k, dim_bound);
        if !kq.holds() {
            cone_quasi = kq;
            break;
        }
        let pb = pullback(&pi.map, &cone.map).expect("common codomain");
        let inner = check_fibration(&pb.pr_right, FibrationKind::Inner, dim_bound);
        let v = if inner.holds() {
            is_cocartesian_fibration(&pb.pr_right, dim_bound)
        } else {
            inner
        };
        if !v.holds() {
            cone_cocart = v;
            break;
        }
    }
    items.push(("cone-bases-quasicategories".into(), cone_quasi));
    items.push(("cone-pullbacks-cocartesian".into(), cone_cocart));

    // Local marking biconditional on 2-simplices of the total space.
    let bicond = local_marking_biconditional(&pi.map, &pi.source, &pi.target, hs.as_ref(), dim_bound);
    items.push(("local-marking-biconditional".into(), bicond));

    // Cone marking biconditional.
    let mut cone_bicond = Verdict::Holds { squares_checked: 0, dim_bound };
    'cones: for cone in &pattern_s.cones {
        let pb = pullback(&pi.map, &cone.map).expect("common codomain");
        let cone_complex = cone.map.source().clone();
        let hk = match homotopy_category(&cone_complex, dim_bound) {
            Ok(h) => h,
            Err(_) => {
                cone_bicond = Verdict::Unknown {
                    reason: "cone base is not a verified quasicategory".into(),
                    dim_bound,
                };
                break 'cones;
            }
        };
        let mut count = 0usize;
        for tau in pb.complex.all_forms(2) {
            let phi = pb.complex.face(&tau, 2);
            let psi = pb.complex.face(&tau, 0);
            let chi = pb.complex.face(&tau, 1);
            if !hk.is_equivalence(&pb.pr_right.apply(&psi)) {
                continue;
            }
            if !is_cocartesian_edge(&pb.pr_right, &phi, dim_bound).holds() {
                continue;
            }
            count += 1;
            let psi_marked = pi.source.is_marked(&pb.pr_left.apply(&psi));
            let chi_marked = pi.source.is_marked(&pb.pr_left.apply(&chi));
            if psi_marked != chi_marked {
                cone_bicond = Verdict::Fails {
                    witness: Box::new(Witness::MarkingMismatch {
                        edge: pb.pr_left.apply(&psi),
                        detail: "cone marking biconditional fails".into(),
                    }),
                };
                break 'cones;
            }
        }
        cone_bicond = Verdict::Holds { squares_checked: count, dim_bound };
    }
    items.push(("cone-marking-biconditional".into(), cone_bicond));

    // The second leg respects scaling.
    let mut rho_scaled = Verdict::Holds { squares_checked: 0, dim_bound };
    let mut rho_count = 0usize;
    for tau in x.all_forms(2) {
        if pattern_s.scaled.contains(&pi.map.apply(&tau)) {
            rho_count += 1;
            if !pattern_t.scaled.contains(&rho.map.apply(&tau)) {
                rho_scaled = Verdict::Fails {
                    witness: Box::new(Witness::MarkingMismatch {
                        edge: tau.clone(),
                        detail: "2-simplex over a scaled 2-simplex is not scaled downstream"
                            .into(),
                    }),
                };
                break;
            }
        }
    }
    if rho_scaled.holds() {
        rho_scaled = Verdict::Holds { squares_checked: rho_count, dim_bound };
    }
    items.push(("second-leg-scaled-compatibility".into(), rho_scaled));

    // Cone composites of cocartesian sections land in the second pattern.
    let mut composites = Verdict::Holds { squares_checked: 0, dim_bound };
    let mut comp_count = 0usize;
    'outer: for cone in &pattern_s.cones {
        let pb = pullback(&pi.map, &cone.map).expect("common codomain");
        let cone_complex = cone.map.source().clone();
        let id = SimplicialMap::identity(&cone_complex);
        let problem = MapProblem {
            domain: &cone_complex,
            codomain: &pb.complex,
            fixed: Default::default(),
            over: Some((&pb.pr_right, &id)),
            marks: None,
        };
        for section in problem.all() {
            let cocart = cone_complex.all_forms(1).iter().all(|e| {
                is_cocartesian_edge(&pb.pr_right, &section.apply(e), dim_bound).holds()
            });
            if !cocart {
                continue;
            }
            comp_count += 1;
            let composite =
                rho.map.compose(&pb.pr_left.compose(&section).expect("composes")).expect("composes");
            let found = pattern_t.cones.iter().any(|c| c.map == composite);
            if !found {
                composites = Verdict::Fails {
                    witness: Box::new(Witness::MarkingMismatch {
                        edge: SimplexKey::new(0, 0).form(),
                        detail: "cocartesian cone section composite is not in the target pattern"
                            .into(),
                    }),
                };
                break 'outer;
            }
        }
    }
    if composites.holds() {
        composites = Verdict::Holds { squares_checked: comp_count, dim_bound };
    }
    items.push(("cone-section-composites".into(), composites));

    ItemizedReport { items }
}

/// The biconditional on 2-simplices of the total space: when the initial
/// edge projects to an equivalence, the middle edge is locally cartesian,
/// and its projection is marked, the initial edge is marked just in case
/// the long edge is.
fn local_marking_biconditional(
    p: &SimplicialMap,
    total_marks: &MarkedSimplicialSet,
    base_marks: &MarkedSimplicialSet,
    base_h: Option<&HomotopyCategory>,
    dim_bound: usize,
) -> Verdict {
    let Some(h) = base_h else {
        return Verdict::Unknown {
            reason: "equivalences undecidable without a verified base".into(),
            dim_bound,
        };
    };
    let x = p.source();
    let mut count = 0usize;
    for tau in x.all_forms(2) {
        let phi = x.face(&tau, 2);
        let psi = x.face(&tau, 0);
        let chi = x.face(&tau, 1);
        if !h.is_equivalence(&p.apply(&phi)) || !base_marks.is_marked(&p.apply(&psi)) {
            continue;
        }
        if !is_locally_cartesian_edge(p, &psi, dim_bound).holds() {
            continue;
        }
        count += 1;
        if total_marks.is_marked(&phi) != total_marks.is_marked(&chi) {
            return Verdict::Fails {
                witness: Box::new(Witness::MarkingMismatch {
                    edge: phi,
                    detail: "local marking biconditional fails".into(),
                }),
            };
        }
    }
    Verdict::Holds { squares_checked: count, dim_bound }
}

// ---------------------------------------------------------------------------
// The span pushforward construction
// ---------------------------------------------------------------------------

struct PushforwardDescription<'a> {
    pi: &'a SimplicialMap,
    rho: &'a SimplicialMap,
    marks: &'a BTreeSet<SimplexForm>,
    q: &'a SimplicialMap,
    q_marks: &'a BTreeSet<SimplexForm>,
    deltas: Vec<SimplicialSet>,
    cache: std::cell::RefCell<HashMap<SimplexForm, Rc<SectionDomain>>>,
}

impl PushforwardDescription<'_> {
    fn base(&self) -> &SimplicialSet {
        self.pi.target()
    }

    /// `(Delta^n)^flat x_(S#) (X, E)` along `sigma`.
    fn domain(&self, sigma: &SimplexForm) -> Rc<SectionDomain> {
        if let Some(d) = self.cache.borrow().get(sigma) {
            return d.clone();
        }
        let sm = simplex_as_map(self.base(), sigma);
        let pb = Rc::new(pullback(&sm, self.pi).expect("common codomain"));
        let mut marks = BTreeSet::new();
        for e in pb.complex.all_forms(1) {
            let tau = pb.pr_left.apply(&e);
            let x_edge = pb.pr_right.apply(&e);
            if tau.is_degenerate() && self.marks.contains(&x_edge) {
                marks.insert(e);
            }
        }
        let d = Rc::new(SectionDomain { product: pb, marks });
        self.cache.borrow_mut().insert(sigma.clone(), d.clone());
        d
    }

    fn transfer(
        &self,
        sigma: &SimplexForm,
        table: &Table,
        sigma_new: &SimplexForm,
        op_form: &SimplexForm,
    ) -> Table {
        let m = sigma.dim();
        let src = self.domain(sigma_new);
        let tgt = self.domain(sigma);
        let op_map = simplex_as_map(&self.deltas[m], op_form);
        (0..src.product.complex.grades().len())
            .map(|dim| {
                src.product
                    .complex
                    .keys(dim)
                    .map(|k| {
                        let (tau, xi) = src.product.realization.rep(k);
                        table_eval(
                            table,
                            &tgt.product.pair_form(
                                &self.deltas[m],
                                self.pi.source(),
                                &op_map.apply(tau),
                                xi,
                            ),
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

impl Degreewise for PushforwardDescription<'_> {
    type Simplex = (SimplexForm, Table);

    fn list(&self, n: usize) -> Vec<(SimplexForm, Table)> {
        let mut out = Vec::new();
        for sigma in self.base().all_forms(n) {
            let dom = self.domain(&sigma);
            let under =
                self.rho.compose(&dom.product.pr_right).expect("domain lands in the middle");
            let problem = MapProblem {
                domain: &dom.product.complex,
                codomain: self.q.source(),
                fixed: Default::default(),
                over: Some((self.q, &under)),
                marks: Some((&dom.marks, self.q_marks)),
            };
            for m in problem.all() {
                out.push((sigma.clone(), m.images().to_vec()));
            }
        }
        out
    }

    fn face(&self, _n: usize, v: &(SimplexForm, Table), i: usize) -> (SimplexForm, Table) {
        let m = v.0.dim();
        let sigma_new = self.base().face(&v.0, i);
        let top = SimplexKey::new(m, 0).form();
        let op_form = self.deltas[m].face(&top, i);
        (sigma_new.clone(), self.transfer(&v.0, &v.1, &sigma_new, &op_form))
    }

    fn degeneracy(&self, _n: usize, v: &(SimplexForm, Table), i: usize) -> (SimplexForm, Table) {
        let m = v.0.dim();
        let sigma_new = v.0.degenerate(i);
        let op_form = SimplexKey::new(m, 0).form().degenerate(i);
        (sigma_new.clone(), self.transfer(&v.0, &v.1, &sigma_new, &op_form))
    }
}

pub struct SpanPushforward {
    pub fibered: FiberedComplex,
    pub cocartesian: Verdict,
    /// Edges violating the stated cocartesian-edge criterion, if any.
    pub criterion_mismatches: Vec<SimplexForm>,
    pub exact: bool,
}

/// Push a cocartesian fibration `y` over the right base through the span:
/// n-simplices over `sigma` in the left base are marked maps
/// `(Delta^n)^flat x (X, E) -> natural-marked Y` over the right base.
///
/// Preconditions (equivalences of X marked, marks composition-closed, a
/// flat locally cartesian left leg, the local marking biconditional) are
/// audited first; the construction errors out when one fails.
pub fn span_pushforward(
    span: &MarkedSpan,
    y: &FiberedComplex,
    dim_bound: usize,
    budgets: &Budgets,
) -> Result<SpanPushforward, Error> {
    if y.base != *span.rho.map.target() {
        return Err(Error::Precondition("the object must live over the second base".into()));
    }
    let audit = audit_pushforward_hypotheses(span, dim_bound, budgets);
    if let Some((name, _)) = audit.items.iter().find(|(_, v)| !v.holds()) {
        return Err(Error::Precondition(format!("span hypothesis failed: {name}")));
    }
    let q_inner = check_fibration(&y.projection, FibrationKind::Inner, dim_bound);
    if !q_inner.holds() || !is_cocartesian_fibration(&y.projection, dim_bound).holds() {
        return Err(Error::Precondition("the object must be a cocartesian fibration".into()));
    }
    let q_marks = cocartesian_marking(&y.projection, dim_bound);
    let desc = PushforwardDescription {
        pi: &span.pi.map,
        rho: &span.rho.map,
        marks: &span.pi.source.marks,
        q: &y.projection,
        q_marks: &q_marks,
        deltas: (0..=dim_bound + 1).map(crate::complex::standard_simplex).collect(),
        cache: Default::default(),
    };
    let realization = realize(&desc, dim_bound);
    let total = realization.complex.clone();
    let images = (0..total.grades().len())
        .map(|dim| total.keys(dim).map(|k| realization.rep(k).0.clone()).collect())
        .collect();
    let projection = SimplicialMap::new(total.clone(), span.pi.map.target().clone(), images)
        .expect("pushforward projects to the first base");
    let inner = check_fibration(&projection, FibrationKind::Inner, dim_bound);
    let cocartesian = if inner.holds() {
        is_cocartesian_fibration(&projection, dim_bound)
    } else {
        inner
    };
    // The stated criterion for cocartesian edges of the pushforward.
    let mut criterion_mismatches = Vec::new();
    if cocartesian.holds() {
        for g in total.all_forms(1) {
            let rep = realization.rep(g.base).clone();
            let (eta, table) =
                if g.is_degenerate() { desc.degeneracy(0, &rep, 0) } else { rep };
            let dom = desc.domain(&eta);
            let carries = dom.product.complex.all_forms(1).iter().all(|w| {
                let x_edge = dom.product.pr_right.apply(w);
                !span.pi.source.marks.contains(&x_edge)
                    || q_marks.contains(&table_eval(&table, w))
            });
            let lhs = is_cocartesian_edge(&projection, &g, dim_bound).holds();
            if lhs != carries {
                criterion_mismatches.push(g);
            }
        }
    }
    let exact = realization.top_grade_empty();
    Ok(SpanPushforward {
        fibered: FiberedComplex::new(projection),
        cocartesian,
        criterion_mismatches,
        exact,
    })
}

/// The pushforward hypotheses: marked equivalences, composition closure,
/// flat locally cartesian projection, and the marking biconditional with
/// the fully marked base.
pub fn audit_pushforward_hypotheses(
    span: &MarkedSpan,
    dim_bound: usize,
    budgets: &Budgets,
) -> ItemizedReport {
    let mut items = Vec::new();
    let x = span.pi.map.source().clone();
    let qx = is_quasicategory(&x, dim_bound);
    items.push(("total-quasicategory".into(), qx.clone()));
    let hx = qx.holds().then(|| homotopy_category(&x, dim_bound).ok()).flatten();
    items.push(equivalence_items(
        "total-equivalences-marked",
        &span.pi.source,
        hx.as_ref(),
        dim_bound,
    ));
    items.push(composition_closed_item(
        "total-marks-composition-closed",
        &span.pi.source,
        dim_bound,
    ));
    items.push((
        "projection-flat".into(),
        is_flat_projection(&span.pi.map, dim_bound, budgets),
    ));
    items.push((
        "projection-locally-cartesian".into(),
        {
            let inner = check_fibration(&span.pi.map, FibrationKind::Inner, dim_bound);
            if inner.holds() {
                is_locally_cartesian(&span.pi.map, dim_bound)
            } else {
                inner
            }
        },
    ));
    let base = span.pi.map.target().clone();
    let qs = is_quasicategory(&base, dim_bound);
    let hsm = qs.holds().then(|| homotopy_category(&base, dim_bound).ok()).flatten();
    let sharp_base = MarkedSimplicialSet::sharp(&base);
    items.push((
        "local-marking-biconditional".into(),
        local_marking_biconditional(
            &span.pi.map,
            &span.pi.source,
            &sharp_base,
            hsm.as_ref(),
            dim_bound,
        ),
    ));
    ItemizedReport { items }
}

// ---------------------------------------------------------------------------
// Base change
// ---------------------------------------------------------------------------

/// The composite-span base-change comparison: push an object over the
/// middle of the second span forward, pull it back along the second leg of
/// the first span, and compare with the pullback-then-sections route along
/// the fiber-product span.
pub fn base_change_check(
    span1: &MarkedSpan,
    pattern0: &CategoricalPattern,
    pattern1: &CategoricalPattern,
    span2: &MarkedSpan,
    pattern2: &CategoricalPattern,
    x: &MarkedObject,
    dim_bound: usize,
    budgets: &Budgets,
) -> Result<bool, Error> {
    if span1.rho.map.target() != span2.pi.map.target() {
        return Err(Error::Precondition("spans must share the middle base".into()));
    }
    for (label, report) in [
        ("first", audit_span(span1, pattern0, pattern1, dim_bound, budgets)),
        ("second", audit_span(span2, pattern1, pattern2, dim_bound, budgets)),
    ] {
        if let Some((name, _)) = report.items.iter().find(|(_, v)| v.fails()) {
            return Err(Error::Precondition(format!("{label} span audit failed: {name}")));
        }
    }
    if x.structure.target() != span2.pi.map.source() {
        return Err(Error::Precondition(
            "the object must live over the middle of the second span".into(),
        ));
    }
    // Left route: sections along the second span's left leg, then pullback
    // along the first span's right leg.
    let pushed = pi_star_sections(&span2.pi, x, dim_bound)?;
    let lhs = pi_pullback(&span1.rho, &pushed.object)?;
    // Right route: pull back along the projection from the fiber product
    // of the two middles, then sections down to the first middle.
    let middle = pullback(&span1.rho.map, &span2.pi.map)?;
    let mut middle_marks = BTreeSet::new();
    for e in middle.complex.all_forms(1) {
        if span1.pi.source.is_marked(&middle.pr_left.apply(&e))
            && span2.pi.source.is_marked(&middle.pr_right.apply(&e))
        {
            middle_marks.insert(e);
        }
    }
    let middle_marked = MarkedSimplicialSet::raw(&middle.complex, middle_marks);
    let pr0 = MarkedMap::new(middle_marked.clone(), span1.pi.source.clone(), middle.pr_left.clone())?;
    let pr1 =
        MarkedMap::new(middle_marked, span2.pi.source.clone(), middle.pr_right.clone())?;
    let pulled = pi_pullback(&pr1, x)?;
    let rhs_sections = pi_star_sections(&pr0, &pulled, dim_bound)?;
    Ok(marked_iso_over(&lhs, &rhs_sections.object))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::standard_simplex;

    #[test]
    fn marking_validation() {
        let d1 = standard_simplex(1);
        let minimal = MarkedSimplicialSet::minimal(&d1);
        assert!(minimal.validate().is_empty());
        let mut broken = minimal.clone();
        let degenerate = SimplexKey::new(0, 0).form().degenerate(0);
        broken.marks.remove(&degenerate);
        assert!(!broken.validate().is_empty());
    }

    #[test]
    fn sharp_pattern_is_valid() {
        let d2 = standard_simplex(2);
        let pat = CategoricalPattern::sharp(&d2);
        assert!(validate_pattern(&pat).is_empty());
        let minimal_marks = CategoricalPattern::with_marks(
            &d2,
            MarkedSimplicialSet::minimal(&d2).marks,
        );
        assert!(validate_pattern(&minimal_marks).is_empty());
    }

    #[test]
    fn pattern_missing_degenerate_mark_is_flagged() {
        let d1 = standard_simplex(1);
        let mut pat = CategoricalPattern::sharp(&d1);
        let degenerate = SimplexKey::new(0, 0).form().degenerate(0);
        pat.marked.remove(&degenerate);
        assert!(!validate_pattern(&pat).is_empty());
    }

    #[test]
    fn identity_pattern_fibered() {
        let d1 = standard_simplex(1);
        let pat = CategoricalPattern::sharp(&d1);
        let marked = MarkedSimplicialSet::sharp(&d1);
        let q = MarkedMap::new(marked.clone(), marked, SimplicialMap::identity(&d1)).unwrap();
        let report = is_pattern_fibered(&q, &pat, 3);
        assert!(report.overall().holds(), "{:?}", report.items);
    }

    #[test]
    fn pi_functors_along_identity() {
        let d1 = standard_simplex(1);
        let sharp = MarkedSimplicialSet::sharp(&d1);
        let pi = MarkedMap::identity(&sharp);
        let x = MarkedObject::new(sharp.clone(), SimplicialMap::identity(&d1), &sharp).unwrap();
        let shrieked = pi_shriek(&pi, &x).unwrap();
        assert_eq!(shrieked.object.complex, d1);
        let pulled = pi_pullback(&pi, &x).unwrap();
        assert!(marked_iso_over(&x, &pulled));
        let sections = pi_star_sections(&pi, &x, 2).unwrap();
        assert!(marked_iso_over(&x, &sections.object));
    }

    #[test]
    fn sections_over_the_point_count_maps() {
        // The sharp interval over the sharp point: vertices of the section
        // space are the maps from the interval into the fiber.
        let d1 = standard_simplex(1);
        let pt = standard_simplex(0);
        let sharp_interval = MarkedSimplicialSet::sharp(&d1);
        let sharp_pt = MarkedSimplicialSet::sharp(&pt);
        let pi =
            MarkedMap::new(sharp_interval.clone(), sharp_pt.clone(), SimplicialMap::to_point(&d1))
                .unwrap();
        // The product marking on interval x interval over the interval.
        let square = crate::product::product(&d1, &d1);
        let marks: BTreeSet<SimplexForm> = square.complex.all_forms(1).into_iter().collect();
        let xobj = MarkedObject::new(
            MarkedSimplicialSet::raw(&square.complex, marks),
            square.pr_right.clone(),
            &sharp_interval,
        )
        .unwrap();
        let sections = pi_star_sections(&pi, &xobj, 2).unwrap();
        // Vertices are sections of the projection: maps interval -> interval.
        assert_eq!(sections.object.object.complex.grade_count(0), 3);
    }

    #[test]
    fn adjunction_counts_for_identity() {
        let d1 = standard_simplex(1);
        let sharp = MarkedSimplicialSet::sharp(&d1);
        let pi = MarkedMap::identity(&sharp);
        let a = MarkedObject::new(sharp.clone(), SimplicialMap::identity(&d1), &sharp).unwrap();
        let b = a.clone();
        let lhs = count_marked_maps_over(&pi_shriek(&pi, &a).unwrap(), &b);
        let rhs = count_marked_maps_over(&a, &pi_pullback(&pi, &b).unwrap());
        assert_eq!(lhs, rhs);
    }
}
