//! Bundled example objects: posets, small categories, functor families,
//! and the named instances exercised by the test suites and shipped as
//! fixtures.

use crate::category::{FiniteCategory, Functor};
use crate::Error;

/// The product poset `[1] x [1]` (a commuting square).
pub fn square_poset() -> FiniteCategory {
    let leq = |a: usize, b: usize| -> bool {
        let (a0, a1) = (a / 2, a % 2);
        let (b0, b1) = (b / 2, b % 2);
        a0 <= b0 && a1 <= b1
    };
    let m: Vec<Vec<bool>> = (0..4).map(|a| (0..4).map(|b| leq(a, b)).collect()).collect();
    FiniteCategory::from_poset(&m)
}

/// The poset `a < b, a < c` with `b, c` incomparable.
pub fn vee_poset() -> FiniteCategory {
    let m = vec![
        vec![true, true, true],
        vec![false, true, false],
        vec![false, false, true],
    ];
    FiniteCategory::from_poset(&m)
}

/// The poset `a < c, b < c`.
pub fn wedge_poset() -> FiniteCategory {
    let m = vec![
        vec![true, false, true],
        vec![false, true, true],
        vec![false, false, true],
    ];
    FiniteCategory::from_poset(&m)
}

/// The one-object monoid `{1, e}` with `e . e = e`.
pub fn idempotent_monoid() -> FiniteCategory {
    FiniteCategory::from_arrows(1, &[(0, 0)], &|_, _| 1).expect("idempotent monoid")
}

/// The contractible groupoid on two objects (a pair of inverse arrows).
pub fn walking_isomorphism() -> FiniteCategory {
    // Morphisms: id_0, id_1, f: 0 -> 1 (2), g: 1 -> 0 (3).
    FiniteCategory::from_arrows(2, &[(0, 1), (1, 0)], &|g, f| {
        if (g, f) == (3, 2) {
            0 // g . f = id_0
        } else {
            1 // f . g = id_1
        }
    })
    .expect("walking isomorphism")
}

/// An arrow `a -> b` followed by an isomorphism `b ~ c`.
pub fn arrow_then_iso() -> FiniteCategory {
    // Objects a=0, b=1, c=2. Nonidentity arrows: u: a->b (3), f: b->c (4),
    // g: c->b (5), v = f.u: a->c (6).
    let arrows = [(0, 1), (1, 2), (2, 1), (0, 2)];
    FiniteCategory::from_arrows(3, &arrows, &|g, f| match (g, f) {
        (4, 3) => 6, // f . u = v
        (5, 4) => 1, // g . f = id_b
        (4, 5) => 2, // f . g = id_c
        (5, 6) => 3, // g . v = u
        other => unreachable!("non-composable pair {other:?}"),
    })
    .expect("arrow followed by isomorphism")
}

/// All partial orders on `n` labeled elements, one representative per
/// isomorphism class, as reflexive order matrices.
pub fn posets_up_to_iso(n: usize) -> Vec<Vec<Vec<bool>>> {
    fn canonical(m: &[Vec<bool>]) -> Vec<bool> {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        fn permutations(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == perm.len() {
                out.push(perm.clone());
                return;
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                permutations(perm, k + 1, out);
                perm.swap(k, i);
            }
        }
        let mut perms = Vec::new();
        permutations(&mut perm, 0, &mut perms);
        let mut best: Option<Vec<bool>> = None;
        for p in perms {
            let flat: Vec<bool> =
                (0..n).flat_map(|a| (0..n).map(|b| m[p[a]][p[b]]).collect::<Vec<_>>()).collect();
            if best.as_ref().map_or(true, |b| &flat < b) {
                best = Some(flat);
            }
        }
        best.unwrap()
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let total = 1usize << pairs.len();
    for mask in 0..total {
        let mut m = vec![vec![false; n]; n];
        for d in 0..n {
            m[d][d] = true;
        }
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                m[a][b] = true;
            }
        }
        let anti = (0..n).all(|a| (0..n).all(|b| a == b || !(m[a][b] && m[b][a])));
        if !anti {
            continue;
        }
        let trans =
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(m[a][b] && m[b][c]) || m[a][c])));
        if !trans {
            continue;
        }
        if seen.insert(canonical(&m)) {
            out.push(m);
        }
    }
    out
}

/// All posets with between one and `max` elements, up to iso.
pub fn small_posets(max: usize) -> Vec<FiniteCategory> {
    (1..=max)
        .flat_map(|n| posets_up_to_iso(n).into_iter().map(|m| FiniteCategory::from_poset(&m)))
        .collect()
}

/// A diagram of categories indexed by a linear order: object categories
/// plus transition functors.
pub struct LinearDiagram {
    pub stages: Vec<FiniteCategory>,
    pub steps: Vec<Functor>,
}

impl LinearDiagram {
    pub fn new(stages: Vec<FiniteCategory>, steps: Vec<Functor>) -> Result<Self, Error> {
        if steps.len() + 1 != stages.len() {
            return Err(Error::InvalidCategory("diagram lengths disagree".into()));
        }
        for (i, f) in steps.iter().enumerate() {
            if f.source != stages[i] || f.target != stages[i + 1] {
                return Err(Error::InvalidCategory(format!("step {i} endpoints disagree")));
            }
        }
        Ok(LinearDiagram { stages, steps })
    }

    /// Composite functor from stage a to stage b.
    pub fn transition(&self, a: usize, b: usize) -> Functor {
        let mut f = Functor::identity(&self.stages[a]);
        for i in a..b {
            f = self.steps[i].compose(&f).expect("steps compose");
        }
        f
    }
}

/// Named diagrams over `[1]` and `[2]` for the opfibration corpus.
pub fn linear_diagrams() -> Vec<(String, LinearDiagram)> {
    let term = FiniteCategory::terminal();
    let interval = FiniteCategory::linear(1);
    let two = || FiniteCategory::from_poset(&[vec![true, false], vec![false, true]]);
    let mut out: Vec<(String, LinearDiagram)> = Vec::new();
    let mut push = |name: &str, d: LinearDiagram| out.push((name.to_string(), d));

    push(
        "interval-constant-terminal",
        LinearDiagram::new(vec![term.clone(), term.clone()], vec![Functor::identity(&term)])
            .unwrap(),
    );
    push(
        "interval-point-to-zero",
        LinearDiagram::new(
            vec![term.clone(), interval.clone()],
            vec![Functor::new(term.clone(), interval.clone(), vec![0], vec![0]).unwrap()],
        )
        .unwrap(),
    );
    push(
        "interval-point-to-one",
        LinearDiagram::new(
            vec![term.clone(), interval.clone()],
            vec![Functor::new(term.clone(), interval.clone(), vec![1], vec![2]).unwrap()],
        )
        .unwrap(),
    );
    push(
        "interval-collapse",
        LinearDiagram::new(
            vec![interval.clone(), term.clone()],
            vec![Functor::new(interval.clone(), term.clone(), vec![0, 0], vec![0, 0, 0]).unwrap()],
        )
        .unwrap(),
    );
    push(
        "interval-two-points",
        LinearDiagram::new(
            vec![two(), interval.clone()],
            vec![Functor::new(two(), interval.clone(), vec![0, 1], vec![0, 2]).unwrap()],
        )
        .unwrap(),
    );
    push(
        "interval-identity",
        LinearDiagram::new(
            vec![interval.clone(), interval.clone()],
            vec![Functor::identity(&interval)],
        )
        .unwrap(),
    );
    push(
        "triangle-point-interval-interval",
        LinearDiagram::new(
            vec![term.clone(), interval.clone(), interval.clone()],
            vec![
                Functor::new(term.clone(), interval.clone(), vec![0], vec![0]).unwrap(),
                Functor::identity(&interval),
            ],
        )
        .unwrap(),
    );
    push(
        "triangle-constant-terminal",
        LinearDiagram::new(
            vec![term.clone(), term.clone(), term.clone()],
            vec![Functor::identity(&term), Functor::identity(&term)],
        )
        .unwrap(),
    );
    push(
        "triangle-merge-then-include",
        LinearDiagram::new(
            vec![two(), term.clone(), interval.clone()],
            vec![
                Functor::new(two(), term.clone(), vec![0, 0], vec![0, 0]).unwrap(),
                Functor::new(term.clone(), interval.clone(), vec![1], vec![2]).unwrap(),
            ],
        )
        .unwrap(),
    );
    push(
        "triangle-collapse-then-id",
        LinearDiagram::new(
            vec![interval.clone(), term.clone(), term.clone()],
            vec![
                Functor::new(interval.clone(), term.clone(), vec![0, 0], vec![0, 0, 0]).unwrap(),
                Functor::identity(&term),
            ],
        )
        .unwrap(),
    );
    out
}

// ---------------------------------------------------------------------------
// Complexes, maps, and spans
// ---------------------------------------------------------------------------

use crate::category::{nerve, nerve_functor, Nerve};
use crate::complex::{
    boundary_data, horn_data, simplex_key_of_subset, standard_simplex, subcomplex_generated,
    SimplicialSet,
};
use crate::constructions::{
    arrow_complex, category_of_elements, grothendieck, slice_under, twisted_arrow,
    CategoryDiagram, FiberedComplex, Grothendieck, SetFunctor,
};
use crate::map::{simplex_as_map, SimplicialMap};
use crate::patterns::{MarkedMap, MarkedSimplicialSet, MarkedSpan};
use crate::product::{product, pullback};
use crate::simplex::SimplexKey;

pub struct NamedMap {
    pub name: String,
    pub map: SimplicialMap,
}

fn named(name: &str, map: SimplicialMap) -> NamedMap {
    NamedMap { name: name.to_string(), map }
}

/// Nerve of the Grothendieck construction of a linear diagram, with its
/// projection to the nerve of the index order.
pub fn grothendieck_nerve(diagram: &LinearDiagram, dim_bound: usize) -> (Grothendieck, SimplicialMap) {
    let cat_diagram = CategoryDiagram::from_linear(diagram);
    let g = grothendieck(&cat_diagram);
    let total = nerve(&g.category, dim_bound);
    let base = nerve(&cat_diagram.index, dim_bound);
    let map = nerve_functor(&g.projection, &total, &base);
    (g, map)
}

/// The functor corpus over the linear orders: every Grothendieck
/// projection of the named diagrams plus hand-built non-opfibrations.
pub fn opfibration_corpus() -> Vec<(String, Functor)> {
    let mut out: Vec<(String, Functor)> = linear_diagrams()
        .iter()
        .map(|(name, d)| {
            let g = grothendieck(&CategoryDiagram::from_linear(d));
            (format!("total-category-of-{name}"), g.projection)
        })
        .collect();
    let interval = FiniteCategory::linear(1);
    let triangle = FiniteCategory::linear(2);
    // Two disconnected points over the ends of the interval: the arrow has
    // no lift out of the first point.
    let two = FiniteCategory::from_poset(&[vec![true, false], vec![false, true]]);
    out.push((
        "no-lift-over-interval".into(),
        Functor::new(two.clone(), interval.clone(), vec![0, 1], vec![0, 2]).unwrap(),
    ));
    // Two competing targets with no mediator: lifts exist, none initial.
    let fork = FiniteCategory::from_arrows(3, &[(0, 1), (0, 2)], &|_, _| unreachable!())
        .unwrap();
    out.push((
        "no-initial-lift-over-interval".into(),
        Functor::new(fork, interval.clone(), vec![0, 1, 1], vec![0, 2, 2, 1, 1]).unwrap(),
    ));
    // An arrow over the first step of the triangle, nothing over the top.
    let arrow = FiniteCategory::linear(1);
    out.push((
        "missing-stage-over-triangle".into(),
        Functor::new(arrow.clone(), triangle.clone(), vec![0, 1], vec![0, 1, 3]).unwrap(),
    ));
    // The two-target fork placed over the last step of the triangle.
    let fork = FiniteCategory::from_arrows(3, &[(0, 1), (0, 2)], &|_, _| unreachable!())
        .unwrap();
    out.push((
        "no-initial-lift-over-triangle".into(),
        Functor::new(fork, triangle.clone(), vec![1, 2, 2], vec![3, 5, 5, 4, 4]).unwrap(),
    ));
    out
}

/// An isofibration of nerves that is not a cocartesian fibration: one
/// source object with two incomparable targets over the interval.
pub fn fork_over_interval(dim_bound: usize) -> (FiberedComplex, Functor) {
    let interval = FiniteCategory::linear(1);
    let fork =
        FiniteCategory::from_arrows(3, &[(0, 1), (0, 2)], &|_, _| unreachable!()).unwrap();
    let p = Functor::new(fork.clone(), interval.clone(), vec![0, 1, 1], vec![0, 2, 2, 1, 1])
        .unwrap();
    let total = nerve(&fork, dim_bound);
    let base = nerve(&interval, dim_bound);
    let map = nerve_functor(&p, &total, &base);
    (FiberedComplex::new(map), p)
}

/// The inclusion of the long edge of the triangle, over the triangle: an
/// inner fibration with an empty factorization space.
pub fn missing_filler_inclusion() -> FiberedComplex {
    let d2 = standard_simplex(2);
    let e02 = simplex_key_of_subset(2, &[0, 2]);
    let (sub, data) = subcomplex_generated(&d2, &[e02]);
    FiberedComplex::new(SimplicialMap::from_inclusion(&sub, &d2, &data))
}

/// Small verified quasicategories (at most ten nondegenerate simplices).
pub fn small_quasicategories(dim_bound: usize) -> Vec<(String, SimplicialSet)> {
    vec![
        ("point".into(), standard_simplex(0)),
        ("interval".into(), standard_simplex(1)),
        ("triangle".into(), standard_simplex(2)),
        ("two-points".into(), boundary_data(1).0),
        ("wedge-poset-nerve".into(), nerve(&wedge_poset(), dim_bound).complex),
        ("vee-poset-nerve".into(), nerve(&vee_poset(), dim_bound).complex),
    ]
}

/// Nerves of every poset with at most `max` elements.
pub fn poset_nerves(max: usize, dim_bound: usize) -> Vec<Nerve> {
    small_posets(max).iter().map(|p| nerve(p, dim_bound)).collect()
}

/// A corpus of at least thirty maps exercising the fibration lattice.
pub fn fibration_corpus(dim_bound: usize) -> Vec<NamedMap> {
    let mut out = Vec::new();
    let d0 = standard_simplex(0);
    let d1 = standard_simplex(1);
    let d2 = standard_simplex(2);
    let square_nerve = nerve(&square_poset(), dim_bound).complex;
    // Identities.
    for (name, x) in [
        ("point", d0.clone()),
        ("interval", d1.clone()),
        ("triangle", d2.clone()),
        ("inner-horn", horn_data(2, 1).unwrap().0),
        ("circle", boundary_data(2).0),
    ] {
        out.push(named(&format!("identity-{name}"), SimplicialMap::identity(&x)));
    }
    // Collapses to the point.
    for (name, x) in [
        ("point", d0.clone()),
        ("interval", d1.clone()),
        ("triangle", d2.clone()),
        ("two-points", boundary_data(1).0),
        ("circle", boundary_data(2).0),
        ("outer-horn", horn_data(2, 0).unwrap().0),
        ("inner-horn", horn_data(2, 1).unwrap().0),
        ("square-nerve", square_nerve.clone()),
        ("iso-nerve", nerve(&walking_isomorphism(), dim_bound).complex),
        ("idempotent-nerve", nerve(&idempotent_monoid(), dim_bound).complex),
    ] {
        out.push(named(&format!("{name}-over-point"), SimplicialMap::to_point(&x)));
    }
    // Horn and boundary inclusions.
    for (n, k) in [(2usize, 0usize), (2, 1), (3, 1)] {
        let (horn, data) = horn_data(n, k).unwrap();
        out.push(named(
            &format!("horn-{n}-{k}-inclusion"),
            SimplicialMap::from_inclusion(&horn, &standard_simplex(n), &data),
        ));
    }
    for n in [1usize, 2] {
        let (b, data) = boundary_data(n);
        out.push(named(
            &format!("boundary-{n}-inclusion"),
            SimplicialMap::from_inclusion(&b, &standard_simplex(n), &data),
        ));
    }
    // Product projections.
    out.push(named("interval-square-projection", product(&d1, &d1).pr_right));
    out.push(named("prism-projection", product(&d2, &d1).pr_right));
    // Slice projections.
    for (name, c, v) in [
        ("triangle-slice-at-0", d2.clone(), 0usize),
        ("square-nerve-slice-at-0", square_nerve.clone(), 0),
        ("vee-nerve-slice-at-0", nerve(&vee_poset(), dim_bound).complex, 0),
    ] {
        let s = slice_under(&c, SimplexKey::new(0, v), dim_bound).unwrap();
        out.push(named(name, s.fibered.projection));
    }
    // Grothendieck nerve projections.
    for (name, d) in linear_diagrams().iter().take(4) {
        let (_, map) = grothendieck_nerve(d, dim_bound);
        out.push(named(&format!("total-nerve-of-{name}"), map));
    }
    // Twisted arrow projections.
    for (name, c) in [("interval", d1.clone()), ("triangle", d2.clone())] {
        let t = twisted_arrow(&c, dim_bound);
        out.push(named(&format!("twisted-arrow-{name}"), t.fibered.projection));
    }
    // A constant map and the missing-filler inclusion.
    out.push(named(
        "triangle-constant-at-0",
        simplex_as_map(&d2, &SimplexKey::new(0, 0).form())
            .compose(&SimplicialMap::to_point(&d2))
            .unwrap(),
    ));
    out.push(named("long-edge-inclusion", missing_filler_inclusion().projection));
    // Arrow complex evaluations.
    let o = arrow_complex(&d1, dim_bound);
    out.push(named("arrow-complex-source", o.source_eval));
    out.push(named("arrow-complex-target", o.target_eval));
    out
}

/// The discrete opfibration of sets over the interval from the key
/// one-element examples.
pub fn elements_fixture() -> (Grothendieck, SimplicialMap) {
    let interval = FiniteCategory::linear(1);
    let f = SetFunctor::new(interval.clone(), vec![1, 2], vec![vec![0], vec![0], vec![0, 1]])
        .unwrap();
    let g = category_of_elements(&f);
    let total = nerve(&g.category, 3);
    let base = nerve(&interval, 3);
    let map = nerve_functor(&g.projection, &total, &base);
    (g, map)
}

/// The vertex-one inclusion of the interval and its pushforward span: the
/// base, the middle (the arrow complex pulled back along the endpoint),
/// and the two legs.
pub struct EndpointSpan {
    pub phi: SimplicialMap,
    pub span: MarkedSpan,
}

/// The span used for pushing fibrations forward along `{1} -> interval`:
/// the middle is the arrow complex of the interval restricted to arrows
/// ending at 1, projecting by source evaluation and to the point.
pub fn endpoint_span(dim_bound: usize) -> EndpointSpan {
    let d1 = standard_simplex(1);
    let d0 = standard_simplex(0);
    let phi = simplex_as_map(&d1, &SimplexKey::new(0, 1).form());
    let arrows = arrow_complex(&d1, dim_bound + 2);
    let pb = pullback(&arrows.target_eval, &phi).expect("common codomain");
    let pi_map = arrows.source_eval.compose(&pb.pr_left).expect("composes");
    let rho_map = pb.pr_right.clone();
    let middle = MarkedSimplicialSet::sharp(&pb.complex);
    let span = MarkedSpan::new(
        MarkedMap::new(middle.clone(), MarkedSimplicialSet::sharp(&d1), pi_map).unwrap(),
        MarkedMap::new(middle, MarkedSimplicialSet::sharp(&d0), rho_map).unwrap(),
    )
    .unwrap();
    EndpointSpan { phi, span }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_isomorphism_classes_have_known_counts() {
        assert_eq!(posets_up_to_iso(1).len(), 1);
        assert_eq!(posets_up_to_iso(2).len(), 2);
        assert_eq!(posets_up_to_iso(3).len(), 5);
        assert_eq!(posets_up_to_iso(4).len(), 16);
    }

    #[test]
    fn named_categories_validate() {
        for c in [
            square_poset(),
            vee_poset(),
            wedge_poset(),
            idempotent_monoid(),
            walking_isomorphism(),
            arrow_then_iso(),
        ] {
            c.validate().unwrap();
        }
    }

    #[test]
    fn iso_detection() {
        let c = walking_isomorphism();
        assert!(c.is_iso(2) && c.is_iso(3));
        let d = arrow_then_iso();
        assert!(!d.is_iso(3) && d.is_iso(4) && d.is_iso(5) && !d.is_iso(6));
    }

    #[test]
    fn diagram_transitions_compose() {
        for (_, d) in linear_diagrams() {
            if d.stages.len() == 3 {
                let f02 = d.transition(0, 2);
                let expect = d.steps[1].compose(&d.steps[0]).unwrap();
                assert_eq!(f02, expect);
            }
        }
    }
}
