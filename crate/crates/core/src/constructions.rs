//! The explicit constructions: slices via the join, relative hom complexes,
//! the twisted arrow complex, function complexes and arrow complexes, the
//! Grothendieck construction and category of elements, lax pullbacks,
//! relative function complexes, and right-Kan-extension fibrations.

use std::collections::HashMap;
use std::rc::Rc;

use crate::category::{FiniteCategory, Functor, MorId, ObjId};
use crate::complex::{opposite, opposite_form, standard_simplex, SimplicialSet};
use crate::fibration::{check_fibration, is_cocartesian_fibration, FibrationKind};
use crate::hom::{MapProblem, Verdict};
use crate::map::{simplex_as_map, SimplicialMap};
use crate::product::{product, pullback, Product};
use crate::realize::{realize, Degreewise, Realization};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

/// A map packaged with its total space and base.
#[derive(Clone, Debug)]
pub struct FiberedComplex {
    pub total: SimplicialSet,
    pub base: SimplicialSet,
    pub projection: SimplicialMap,
}

impl FiberedComplex {
    pub fn new(projection: SimplicialMap) -> FiberedComplex {
        FiberedComplex {
            total: projection.source().clone(),
            base: projection.target().clone(),
            projection,
        }
    }
}

// ---------------------------------------------------------------------------
// Slices and relative hom complexes
// ---------------------------------------------------------------------------

enum SliceSide {
    /// Cone point first: n-simplices are (n+1)-forms with first vertex x.
    Under,
    /// Cone point last: (n+1)-forms with last vertex x.
    Over,
}

struct SliceDescription<'a> {
    c: &'a SimplicialSet,
    x: SimplexKey,
    side: SliceSide,
}

impl Degreewise for SliceDescription<'_> {
    type Simplex = SimplexForm;

    fn list(&self, n: usize) -> Vec<SimplexForm> {
        self.c
            .all_forms(n + 1)
            .into_iter()
            .filter(|z| match self.side {
                SliceSide::Under => self.c.vertex(z, 0) == self.x,
                SliceSide::Over => self.c.vertex(z, n + 1) == self.x,
            })
            .collect()
    }

    fn face(&self, _n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        match self.side {
            SliceSide::Under => self.c.face(z, i + 1),
            SliceSide::Over => self.c.face(z, i),
        }
    }

    fn degeneracy(&self, _n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        match self.side {
            SliceSide::Under => z.degenerate(i + 1),
            SliceSide::Over => z.degenerate(i),
        }
    }
}

/// A truncated slice with its projection to the underlying complex.
pub struct Slice {
    pub fibered: FiberedComplex,
    pub realization: Realization<SimplexForm>,
    /// True when the truncation misses no nondegenerate slice simplices
    /// (guaranteed once the bound reaches the dimension of the complex).
    pub exact: bool,
}

fn slice(
    c: &SimplicialSet,
    x: SimplexKey,
    side: SliceSide,
    dim_bound: usize,
) -> Result<Slice, Error> {
    if x.dim != 0 || !c.contains(x) {
        return Err(Error::Precondition("slice point must be a vertex".into()));
    }
    let desc = SliceDescription { c, x, side };
    let realization = realize(&desc, dim_bound);
    let total = realization.complex.clone();
    let images = (0..total.grades().len())
        .map(|dim| {
            total
                .keys(dim)
                .map(|k| {
                    let z = realization.rep(k);
                    match desc.side {
                        SliceSide::Under => c.face(z, 0),
                        SliceSide::Over => c.face(z, dim + 1),
                    }
                })
                .collect()
        })
        .collect();
    let projection = SimplicialMap::new(total.clone(), c.clone(), images)
        .expect("slice projection is simplicial");
    let exact = dim_bound >= c.dim().unwrap_or(0);
    Ok(Slice { fibered: FiberedComplex::new(projection), realization, exact })
}

/// The slice under `x`: simplices are cones out of `x`.
pub fn slice_under(c: &SimplicialSet, x: SimplexKey, dim_bound: usize) -> Result<Slice, Error> {
    slice(c, x, SliceSide::Under, dim_bound)
}

/// The slice over `x`: simplices are cones into `x`.
pub fn slice_over(c: &SimplicialSet, x: SimplexKey, dim_bound: usize) -> Result<Slice, Error> {
    slice(c, x, SliceSide::Over, dim_bound)
}

struct HomDescription<'a> {
    c: &'a SimplicialSet,
    x: SimplexKey,
    y: SimplexKey,
    left: bool,
}

fn constant_form(v: SimplexKey, dim: usize) -> SimplexForm {
    let mut f = v.form();
    for i in 0..dim {
        f = f.degenerate(i);
    }
    f
}

impl Degreewise for HomDescription<'_> {
    type Simplex = SimplexForm;

    fn list(&self, n: usize) -> Vec<SimplexForm> {
        let tail: Vec<usize> = if self.left { (1..=n + 1).collect() } else { (0..=n).collect() };
        self.c
            .all_forms(n + 1)
            .into_iter()
            .filter(|z| {
                if self.left {
                    self.c.vertex(z, 0) == self.x
                        && self.c.act(z, &tail) == constant_form(self.y, n)
                } else {
                    self.c.vertex(z, n + 1) == self.y
                        && self.c.act(z, &tail) == constant_form(self.x, n)
                }
            })
            .collect()
    }

    fn face(&self, _n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        if self.left {
            self.c.face(z, i + 1)
        } else {
            self.c.face(z, i)
        }
    }

    fn degeneracy(&self, _n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        if self.left {
            z.degenerate(i + 1)
        } else {
            z.degenerate(i)
        }
    }
}

pub struct HomComplex {
    pub complex: SimplicialSet,
    pub exact: bool,
}

/// The left hom complex from `x` to `y`: simplices are cones out of `x`
/// whose opposite face is constant at `y` (the fiber of the under-slice
/// projection over `y`).
pub fn hom_left(c: &SimplicialSet, x: SimplexKey, y: SimplexKey, dim_bound: usize) -> HomComplex {
    let desc = HomDescription { c, x, y, left: true };
    let realization = realize(&desc, dim_bound);
    let exact = dim_bound >= c.dim().unwrap_or(0);
    HomComplex { complex: realization.complex, exact }
}

/// The right hom complex from `x` to `y`: the fiber of the over-slice
/// projection at `y` over the vertex `x`.
pub fn hom_right(c: &SimplicialSet, x: SimplexKey, y: SimplexKey, dim_bound: usize) -> HomComplex {
    let desc = HomDescription { c, x, y, left: false };
    let realization = realize(&desc, dim_bound);
    let exact = dim_bound >= c.dim().unwrap_or(0);
    HomComplex { complex: realization.complex, exact }
}

// ---------------------------------------------------------------------------
// Twisted arrow complex
// ---------------------------------------------------------------------------

struct TwistedDescription<'a> {
    c: &'a SimplicialSet,
}

impl Degreewise for TwistedDescription<'_> {
    type Simplex = SimplexForm;

    fn list(&self, n: usize) -> Vec<SimplexForm> {
        self.c.all_forms(2 * n + 1)
    }

    fn face(&self, n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        self.c.face(&self.c.face(z, n + 1 + i), n - i)
    }

    fn degeneracy(&self, n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        z.degenerate(n - i).degenerate(n + 2 + i)
    }
}

/// The twisted arrow complex with its source-target projection into
/// `opposite(C) x C`. Vertex `i` of the opposite half is vertex `n - i`
/// of the underlying (2n+1)-simplex.
pub struct TwistedArrow {
    pub fibered: FiberedComplex,
    pub exact: bool,
}

pub fn twisted_arrow(c: &SimplicialSet, dim_bound: usize) -> TwistedArrow {
    let desc = TwistedDescription { c };
    let realization = realize(&desc, dim_bound);
    let total = realization.complex.clone();
    let op = opposite(c);
    let base = product(&op, c);
    let images = (0..total.grades().len())
        .map(|n| {
            total
                .keys(n)
                .map(|k| {
                    let z = realization.rep(k);
                    let straight: Vec<usize> = (n + 1..=2 * n + 1).collect();
                    let t_part = c.act(z, &straight);
                    let front: Vec<usize> = (0..=n).collect();
                    let s_part = opposite_form(&c.act(z, &front));
                    base.pair_form(&op, c, &s_part, &t_part)
                })
                .collect()
        })
        .collect();
    let projection = SimplicialMap::new(total, base.complex.clone(), images)
        .expect("twisted arrow projection is simplicial");
    let exact = dim_bound >= c.dim().unwrap_or(0);
    TwistedArrow { fibered: FiberedComplex::new(projection), exact }
}

// ---------------------------------------------------------------------------
// Cylinders and function complexes
// ---------------------------------------------------------------------------

/// An image table over a realized complex, one row per key grade.
pub type Table = Vec<Vec<SimplexForm>>;

/// Evaluate a table at an arbitrary form of its domain.
pub fn table_eval(table: &Table, form: &SimplexForm) -> SimplexForm {
    let mut out = table[form.base.dim][form.base.index].clone();
    for &i in form.word.iter().rev() {
        out = out.degenerate(i);
    }
    out
}

/// The products `a x standard_simplex(n)` for `n <= bound`, with coface
/// and codegeneracy transfer of image tables.
pub struct Cylinders {
    pub a: SimplicialSet,
    pub deltas: Vec<SimplicialSet>,
    pub products: Vec<Product>,
}

impl Cylinders {
    pub fn new(a: &SimplicialSet, bound: usize) -> Cylinders {
        let deltas: Vec<SimplicialSet> = (0..=bound).map(standard_simplex).collect();
        let products = deltas.iter().map(|d| product(a, d)).collect();
        Cylinders { a: a.clone(), deltas, products }
    }

    /// All image tables for maps `a x Delta^n -> codomain`.
    pub fn tables(&self, n: usize, codomain: &SimplicialSet) -> Vec<Table> {
        MapProblem::unconstrained(&self.products[n].complex, codomain)
            .all()
            .into_iter()
            .map(|m| m.images().to_vec())
            .collect()
    }

    /// Pair form in the level-n product.
    pub fn pair(&self, n: usize, xi: &SimplexForm, tau: &SimplexForm) -> SimplexForm {
        self.products[n].pair_form(&self.a, &self.deltas[n], xi, tau)
    }

    /// Precompose a level-n table with `id x op` for an operator of the
    /// standard simplices classified by `op_form` (a form of `Delta^n` of
    /// dimension `m`), yielding a level-m table.
    pub fn precompose(&self, n: usize, table: &Table, op_form: &SimplexForm) -> Table {
        let m = op_form.dim();
        let op_map = simplex_as_map(&self.deltas[n], op_form);
        let src = &self.products[m].complex;
        (0..src.grades().len())
            .map(|dim| {
                src.keys(dim)
                    .map(|k| {
                        let (xi, tau) = self.products[m].realization.rep(k);
                        table_eval(table, &self.pair(n, xi, &op_map.apply(tau)))
                    })
                    .collect()
            })
            .collect()
    }

    /// Restrict a level-n table along `{v} x Delta^n`, yielding an n-form
    /// of the codomain.
    pub fn end_form(&self, n: usize, table: &Table, v: SimplexKey) -> SimplexForm {
        let vf = constant_form(v, n);
        let top = SimplexKey::new(n, 0).form();
        table_eval(table, &self.pair(n, &vf, &top))
    }
}

struct FunDescription<'a> {
    cyl: &'a Cylinders,
    b: &'a SimplicialSet,
}

impl Degreewise for FunDescription<'_> {
    type Simplex = Table;

    fn list(&self, n: usize) -> Vec<Table> {
        self.cyl.tables(n, self.b)
    }

    fn face(&self, n: usize, u: &Table, i: usize) -> Table {
        let top = SimplexKey::new(n, 0).form();
        self.cyl.precompose(n, u, &self.cyl.deltas[n].face(&top, i))
    }

    fn degeneracy(&self, n: usize, u: &Table, i: usize) -> Table {
        let top = SimplexKey::new(n, 0).form();
        self.cyl.precompose(n, u, &top.degenerate(i))
    }
}

/// A truncated function complex `Fun(A, B)`.
pub struct FunComplex {
    pub complex: SimplicialSet,
    pub a: SimplicialSet,
    pub b: SimplicialSet,
    pub cylinders: Cylinders,
    pub realization: Realization<Table>,
    pub exact: bool,
}

impl FunComplex {
    /// Evaluation at a vertex of `A`, as a map to `B`.
    pub fn eval_at_vertex(&self, v: SimplexKey) -> SimplicialMap {
        let images = (0..self.complex.grades().len())
            .map(|n| {
                self.complex
                    .keys(n)
                    .map(|k| self.cylinders.end_form(n, self.realization.rep(k), v))
                    .collect()
            })
            .collect();
        SimplicialMap::new(self.complex.clone(), self.b.clone(), images)
            .expect("evaluation is simplicial")
    }

    /// The form classified by an image table at level n.
    pub fn form_of_table(&self, n: usize, table: &Table) -> SimplexForm {
        let desc = FunDescription { cyl: &self.cylinders, b: &self.b };
        self.realization.form_of(&desc, n, table)
    }
}

/// The function complex, degreewise `Mor(A x Delta^n, B)`, truncated at
/// `dim_bound`; `exact` records an empty top grade.
pub fn fun_complex(a: &SimplicialSet, b: &SimplicialSet, dim_bound: usize) -> FunComplex {
    let cylinders = Cylinders::new(a, dim_bound);
    let realization = {
        let desc = FunDescription { cyl: &cylinders, b };
        realize(&desc, dim_bound)
    };
    let exact = realization.top_grade_empty();
    FunComplex {
        complex: realization.complex.clone(),
        a: a.clone(),
        b: b.clone(),
        cylinders,
        realization,
        exact,
    }
}

/// The arrow complex `Fun(Delta^1, C)` with its two evaluation maps.
pub struct ArrowComplex {
    pub fun: FunComplex,
    /// Evaluation at 0 (the source projection).
    pub source_eval: SimplicialMap,
    /// Evaluation at 1 (the target projection).
    pub target_eval: SimplicialMap,
}

pub fn arrow_complex(c: &SimplicialSet, dim_bound: usize) -> ArrowComplex {
    let fun = fun_complex(&standard_simplex(1), c, dim_bound);
    let source_eval = fun.eval_at_vertex(SimplexKey::new(0, 0));
    let target_eval = fun.eval_at_vertex(SimplexKey::new(0, 1));
    ArrowComplex { fun, source_eval, target_eval }
}

// ---------------------------------------------------------------------------
// Grothendieck construction and category of elements
// ---------------------------------------------------------------------------

/// A functor from a finite index category into finite categories.
pub struct CategoryDiagram {
    pub index: FiniteCategory,
    pub values: Vec<FiniteCategory>,
    /// One functor per index morphism.
    pub action: Vec<Functor>,
}

impl CategoryDiagram {
    pub fn new(
        index: FiniteCategory,
        values: Vec<FiniteCategory>,
        action: Vec<Functor>,
    ) -> Result<CategoryDiagram, Error> {
        if values.len() != index.objects || action.len() != index.morphisms() {
            return Err(Error::InvalidCategory("diagram table sizes disagree".into()));
        }
        for m in 0..index.morphisms() {
            if action[m].source != values[index.mor_source[m]]
                || action[m].target != values[index.mor_target[m]]
            {
                return Err(Error::InvalidCategory(format!("action endpoints disagree at {m}")));
            }
        }
        for o in 0..index.objects {
            if action[index.identity[o]] != Functor::identity(&values[o]) {
                return Err(Error::InvalidCategory(format!("action breaks identity at {o}")));
            }
        }
        for g in 0..index.morphisms() {
            for f in 0..index.morphisms() {
                if index.composable(g, f) {
                    let gf = index.comp(g, f);
                    let composite = action[g].compose(&action[f])?;
                    if action[gf] != composite {
                        return Err(Error::InvalidCategory(format!(
                            "action breaks composition at ({g},{f})"
                        )));
                    }
                }
            }
        }
        Ok(CategoryDiagram { index, values, action })
    }

    /// Diagram over the linear order from a chain of functors.
    pub fn from_linear(diagram: &crate::corpus::LinearDiagram) -> CategoryDiagram {
        let n = diagram.stages.len() - 1;
        let index = FiniteCategory::linear(n);
        let mut action = Vec::with_capacity(index.morphisms());
        for m in 0..index.morphisms() {
            let (a, b) = (index.mor_source[m], index.mor_target[m]);
            action.push(diagram.transition(a, b));
        }
        CategoryDiagram::new(index, diagram.stages.clone(), action)
            .expect("linear diagrams are functorial")
    }
}

/// The covariant Grothendieck construction with key dictionaries.
pub struct Grothendieck {
    pub category: FiniteCategory,
    pub projection: Functor,
    pub object_ids: HashMap<(ObjId, ObjId), ObjId>,
    /// `(index morphism, source fiber object, fiber morphism)` -> id.
    pub morphism_ids: HashMap<(MorId, ObjId, MorId), MorId>,
}

/// Objects are pairs `(c, x)`; a morphism `(f, phi): (c, x) -> (c', x')`
/// has `f: c -> c'` and `phi: F(f)(x) -> x'`.
pub fn grothendieck(diagram: &CategoryDiagram) -> Grothendieck {
    let index = &diagram.index;
    let mut object_ids = HashMap::new();
    let mut obj_pairs = Vec::new();
    for c in 0..index.objects {
        for x in 0..diagram.values[c].objects {
            object_ids.insert((c, x), obj_pairs.len());
            obj_pairs.push((c, x));
        }
    }
    let mut morphism_ids = HashMap::new();
    let mut mor_triples = Vec::new();
    let mut mor_source = Vec::new();
    let mut mor_target = Vec::new();
    for f in 0..index.morphisms() {
        let (c, c2) = (index.mor_source[f], index.mor_target[f]);
        for x in 0..diagram.values[c].objects {
            let fx = diagram.action[f].object_map[x];
            for phi in 0..diagram.values[c2].morphisms() {
                if diagram.values[c2].mor_source[phi] != fx {
                    continue;
                }
                morphism_ids.insert((f, x, phi), mor_triples.len());
                mor_triples.push((f, x, phi));
                mor_source.push(object_ids[&(c, x)]);
                mor_target.push(object_ids[&(c2, diagram.values[c2].mor_target[phi])]);
            }
        }
    }
    let identity: Vec<MorId> = obj_pairs
        .iter()
        .map(|&(c, x)| morphism_ids[&(index.identity[c], x, diagram.values[c].identity[x])])
        .collect();
    let n = mor_triples.len();
    let mut compose = vec![vec![None; n]; n];
    for (gi, &(g, _y, psi)) in mor_triples.iter().enumerate() {
        for (fi, &(f, x, phi)) in mor_triples.iter().enumerate() {
            if mor_target[fi] != mor_source[gi] {
                continue;
            }
            debug_assert!(index.composable(g, f));
            let gf = index.comp(g, f);
            let c2 = index.mor_target[g];
            let g_phi = diagram.action[g].mor_map[phi];
            let composite_phi = diagram.values[c2].comp(psi, g_phi);
            compose[gi][fi] = Some(morphism_ids[&(gf, x, composite_phi)]);
        }
    }
    let category =
        FiniteCategory::new(obj_pairs.len(), mor_source, mor_target, identity, compose)
            .expect("the total category of a diagram is a category");
    let projection = Functor::new(
        category.clone(),
        index.clone(),
        obj_pairs.iter().map(|&(c, _)| c).collect(),
        mor_triples.iter().map(|&(f, _, _)| f).collect(),
    )
    .expect("forgetting the fiber coordinate is a functor");
    Grothendieck { category, projection, object_ids, morphism_ids }
}

/// A set-valued functor on a finite index category.
pub struct SetFunctor {
    pub index: FiniteCategory,
    pub sizes: Vec<usize>,
    /// One element map per index morphism.
    pub action: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(
        index: FiniteCategory,
        sizes: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Result<SetFunctor, Error> {
        let f = SetFunctor { index, sizes, action };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), Error> {
        if self.sizes.len() != self.index.objects || self.action.len() != self.index.morphisms() {
            return Err(Error::InvalidCategory("set functor table sizes disagree".into()));
        }
        for m in 0..self.index.morphisms() {
            let (s, t) = (self.index.mor_source[m], self.index.mor_target[m]);
            if self.action[m].len() != self.sizes[s]
                || self.action[m].iter().any(|&x| x >= self.sizes[t])
            {
                return Err(Error::InvalidCategory(format!("element map {m} out of range")));
            }
        }
        for o in 0..self.index.objects {
            let id = &self.action[self.index.identity[o]];
            if id.iter().enumerate().any(|(i, &x)| i != x) {
                return Err(Error::InvalidCategory(format!("identity action at {o}")));
            }
        }
        for g in 0..self.index.morphisms() {
            for f in 0..self.index.morphisms() {
                if self.index.composable(g, f) {
                    let gf = self.index.comp(g, f);
                    for x in 0..self.sizes[self.index.mor_source[f]] {
                        if self.action[gf][x] != self.action[g][self.action[f][x]] {
                            return Err(Error::InvalidCategory(format!(
                                "set functoriality breaks at ({g},{f})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Reinterpret as a diagram of discrete categories.
    pub fn to_diagram(&self) -> CategoryDiagram {
        let values: Vec<FiniteCategory> = self
            .sizes
            .iter()
            .map(|&n| {
                let leq: Vec<Vec<bool>> =
                    (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
                FiniteCategory::from_poset(&leq)
            })
            .collect();
        let action: Vec<Functor> = (0..self.index.morphisms())
            .map(|m| {
                let (s, t) = (self.index.mor_source[m], self.index.mor_target[m]);
                Functor::new(
                    values[s].clone(),
                    values[t].clone(),
                    self.action[m].clone(),
                    self.action[m].clone(),
                )
                .expect("discrete functor")
            })
            .collect();
        CategoryDiagram::new(self.index.clone(), values, action)
            .expect("set functors are functorial")
    }
}

/// The category of elements: the Grothendieck construction of the discrete
/// diagram.
pub fn category_of_elements(f: &SetFunctor) -> Grothendieck {
    grothendieck(&f.to_diagram())
}

// ---------------------------------------------------------------------------
// Lax pullback
// ---------------------------------------------------------------------------

/// A simplex of the lax pullback: a simplex of M, an interval cylinder
/// into S, and a simplex of N.
pub type LaxValue = (SimplexForm, Table, SimplexForm);

/// Interval cylinder tables into a fixed codomain, grouped per level by
/// their two end restrictions. Shared across lax pullbacks over the same
/// codomain.
pub struct LaxEnds {
    grouped: Vec<HashMap<(SimplexForm, SimplexForm), Vec<Table>>>,
}

impl LaxEnds {
    pub fn new(cyl: &Cylinders, s: &SimplicialSet, bound: usize) -> LaxEnds {
        let v0 = SimplexKey::new(0, 0);
        let v1 = SimplexKey::new(0, 1);
        let grouped = (0..=bound)
            .map(|n| {
                let mut level: HashMap<(SimplexForm, SimplexForm), Vec<Table>> = HashMap::new();
                for table in cyl.tables(n, s) {
                    let e0 = cyl.end_form(n, &table, v0);
                    let e1 = cyl.end_form(n, &table, v1);
                    level.entry((e0, e1)).or_default().push(table);
                }
                level
            })
            .collect();
        LaxEnds { grouped }
    }
}

pub struct LaxDescription<'a> {
    pub f: &'a SimplicialMap,
    pub g: &'a SimplicialMap,
    pub cyl: &'a Cylinders,
    pub ends: &'a LaxEnds,
}

impl Degreewise for LaxDescription<'_> {
    type Simplex = LaxValue;

    fn list(&self, n: usize) -> Vec<LaxValue> {
        let mut out = Vec::new();
        for m in self.f.source().all_forms(n) {
            let fm = self.f.apply(&m);
            for y in self.g.source().all_forms(n) {
                let gy = self.g.apply(&y);
                if let Some(tables) = self.ends.grouped[n].get(&(fm.clone(), gy)) {
                    for t in tables {
                        out.push((m.clone(), t.clone(), y.clone()));
                    }
                }
            }
        }
        out
    }

    fn face(&self, n: usize, v: &LaxValue, i: usize) -> LaxValue {
        let top = SimplexKey::new(n, 0).form();
        (
            self.f.source().face(&v.0, i),
            self.cyl.precompose(n, &v.1, &self.cyl.deltas[n].face(&top, i)),
            self.g.source().face(&v.2, i),
        )
    }

    fn degeneracy(&self, n: usize, v: &LaxValue, i: usize) -> LaxValue {
        let top = SimplexKey::new(n, 0).form();
        (
            v.0.degenerate(i),
            self.cyl.precompose(n, &v.1, &top.degenerate(i)),
            v.2.degenerate(i),
        )
    }
}

pub struct LaxPullback {
    pub complex: SimplicialSet,
    pub to_left: SimplicialMap,
    pub to_right: SimplicialMap,
    pub realization: Realization<LaxValue>,
    pub exact: bool,
}

/// The comma-style fiber product of `f` and `g` through the arrow cylinder
/// of their common codomain.
pub fn lax_pullback(
    f: &SimplicialMap,
    g: &SimplicialMap,
    dim_bound: usize,
) -> Result<LaxPullback, Error> {
    if f.target() != g.target() {
        return Err(Error::Precondition("lax pullback needs a common codomain".into()));
    }
    let cyl = Cylinders::new(&standard_simplex(1), dim_bound);
    let ends = LaxEnds::new(&cyl, f.target(), dim_bound);
    lax_pullback_with(f, g, &cyl, &ends, dim_bound)
}

/// Lax pullback against precomputed cylinder tables.
pub fn lax_pullback_with(
    f: &SimplicialMap,
    g: &SimplicialMap,
    cyl: &Cylinders,
    ends: &LaxEnds,
    dim_bound: usize,
) -> Result<LaxPullback, Error> {
    if f.target() != g.target() {
        return Err(Error::Precondition("lax pullback needs a common codomain".into()));
    }
    let desc = LaxDescription { f, g, cyl, ends };
    let realization = realize(&desc, dim_bound);
    let complex = realization.complex.clone();
    let mut left_images = Vec::new();
    let mut right_images = Vec::new();
    for dim in 0..complex.grades().len() {
        let mut lrow = Vec::new();
        let mut rrow = Vec::new();
        for k in complex.keys(dim) {
            let (m, _, y) = realization.rep(k);
            lrow.push(m.clone());
            rrow.push(y.clone());
        }
        left_images.push(lrow);
        right_images.push(rrow);
    }
    let to_left = SimplicialMap::new(complex.clone(), f.source().clone(), left_images)
        .expect("lax pullback projection");
    let to_right = SimplicialMap::new(complex.clone(), g.source().clone(), right_images)
        .expect("lax pullback projection");
    let exact = realization.top_grade_empty();
    Ok(LaxPullback { complex, to_left, to_right, realization, exact })
}

// ---------------------------------------------------------------------------
// Relative function complexes
// ---------------------------------------------------------------------------

struct RelativeFunDescription<'a> {
    p: &'a SimplicialMap,
    q: &'a SimplicialMap,
    base: SimplicialSet,
    deltas: Vec<SimplicialSet>,
    cache: std::cell::RefCell<HashMap<SimplexForm, Rc<Product>>>,
}

impl RelativeFunDescription<'_> {
    /// The pullback of `p` along the classifying map of `sigma`.
    fn domain(&self, sigma: &SimplexForm) -> Rc<Product> {
        if let Some(d) = self.cache.borrow().get(sigma) {
            return d.clone();
        }
        let sm = simplex_as_map(&self.base, sigma);
        let d = Rc::new(pullback(self.p, &sm).expect("common codomain"));
        self.cache.borrow_mut().insert(sigma.clone(), d.clone());
        d
    }

    /// Transfer a table over `domain(sigma)` to `domain(sigma_new)` along
    /// the simplex operator classified by `op_form`.
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
        (0..src.complex.grades().len())
            .map(|dim| {
                src.complex
                    .keys(dim)
                    .map(|k| {
                        let (xi, tau) = src.realization.rep(k);
                        table_eval(
                            table,
                            &tgt.pair_form(
                                self.p.source(),
                                &self.deltas[m],
                                xi,
                                &op_map.apply(tau),
                            ),
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

impl Degreewise for RelativeFunDescription<'_> {
    type Simplex = (SimplexForm, Table);

    fn list(&self, n: usize) -> Vec<(SimplexForm, Table)> {
        let mut out = Vec::new();
        for sigma in self.base.all_forms(n) {
            let dom = self.domain(&sigma);
            let under = self.p.compose(&dom.pr_left).expect("domain projects to the base");
            let problem = MapProblem {
                domain: &dom.complex,
                codomain: self.q.source(),
                fixed: Default::default(),
                over: Some((self.q, &under)),
                marks: None,
            };
            for m in problem.all() {
                out.push((sigma.clone(), m.images().to_vec()));
            }
        }
        out
    }

    fn face(&self, _n: usize, v: &(SimplexForm, Table), i: usize) -> (SimplexForm, Table) {
        let m = v.0.dim();
        let sigma_new = self.base.face(&v.0, i);
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

pub struct RelativeFun {
    pub fibered: FiberedComplex,
    pub exact: bool,
}

/// The relative function complex of a cartesian fibration into a
/// cocartesian fibration over the same base: n-simplices over `sigma` are
/// maps `X x_B Delta^n -> Y` over the base.
pub fn relative_fun(
    p: &FiberedComplex,
    q: &FiberedComplex,
    dim_bound: usize,
) -> Result<RelativeFun, Error> {
    if p.base != q.base {
        return Err(Error::Precondition("relative fun needs a common base".into()));
    }
    if !check_fibration(&p.projection, FibrationKind::Inner, dim_bound).holds()
        || !crate::fibration::is_cartesian_fibration(&p.projection, dim_bound).holds()
    {
        return Err(Error::Precondition("first argument must be a cartesian fibration".into()));
    }
    if !check_fibration(&q.projection, FibrationKind::Inner, dim_bound).holds()
        || !is_cocartesian_fibration(&q.projection, dim_bound).holds()
    {
        return Err(Error::Precondition(
            "second argument must be a cocartesian fibration".into(),
        ));
    }
    Ok(relative_fun_unchecked(p, q, dim_bound))
}

/// The same construction without the fibration preconditions (for callers
/// that have already certified them).
pub fn relative_fun_unchecked(
    p: &FiberedComplex,
    q: &FiberedComplex,
    dim_bound: usize,
) -> RelativeFun {
    let desc = RelativeFunDescription {
        p: &p.projection,
        q: &q.projection,
        base: p.base.clone(),
        deltas: (0..=dim_bound + 1).map(standard_simplex).collect(),
        cache: Default::default(),
    };
    let realization = realize(&desc, dim_bound);
    let total = realization.complex.clone();
    let images = (0..total.grades().len())
        .map(|dim| total.keys(dim).map(|k| realization.rep(k).0.clone()).collect())
        .collect();
    let projection = SimplicialMap::new(total, p.base.clone(), images)
        .expect("relative fun projects to the base");
    let exact = realization.top_grade_empty();
    RelativeFun { fibered: FiberedComplex::new(projection), exact }
}

// ---------------------------------------------------------------------------
// Right Kan extension fibrations
// ---------------------------------------------------------------------------

struct RightKanDescription<'a> {
    phi: &'a SimplicialMap,
    p: &'a FiberedComplex,
    base: SimplicialSet,
    domain_bound: usize,
    cyl: &'a Cylinders,
    ends: &'a LaxEnds,
    deltas: Vec<SimplicialSet>,
    cache: std::cell::RefCell<HashMap<SimplexForm, Rc<(SimplicialMap, LaxPullback)>>>,
}

impl RightKanDescription<'_> {
    /// The fully realized lax pullback `Delta^m (via sigma) down to A`,
    /// together with the classifying map of `sigma`.
    fn domain(&self, sigma: &SimplexForm) -> Rc<(SimplicialMap, LaxPullback)> {
        if let Some(d) = self.cache.borrow().get(sigma) {
            return d.clone();
        }
        let sm = simplex_as_map(&self.base, sigma);
        let lax = lax_pullback_with(&sm, self.phi, self.cyl, self.ends, self.domain_bound)
            .expect("common codomain");
        assert!(
            lax.exact,
            "lax pullback domain not fully realized at bound {}",
            self.domain_bound
        );
        let d = Rc::new((sm, lax));
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
        let desc_tgt =
            LaxDescription { f: &tgt.0, g: self.phi, cyl: self.cyl, ends: self.ends };
        (0..src.1.complex.grades().len())
            .map(|dim| {
                src.1
                    .complex
                    .keys(dim)
                    .map(|k| {
                        let (t, h, a) = src.1.realization.rep(k);
                        let value: LaxValue = (op_map.apply(t), h.clone(), a.clone());
                        let form = tgt.1.realization.form_of(&desc_tgt, dim, &value);
                        table_eval(table, &form)
                    })
                    .collect()
            })
            .collect()
    }

    /// All maps `domain(sigma) -> X` over A.
    fn sections(&self, sigma: &SimplexForm) -> Vec<Table> {
        let dom = self.domain(sigma);
        let problem = MapProblem {
            domain: &dom.1.complex,
            codomain: &self.p.total,
            fixed: Default::default(),
            over: Some((&self.p.projection, &dom.1.to_right)),
            marks: None,
        };
        problem.all().into_iter().map(|m| m.images().to_vec()).collect()
    }
}

impl Degreewise for RightKanDescription<'_> {
    type Simplex = (SimplexForm, Table);

    fn list(&self, n: usize) -> Vec<(SimplexForm, Table)> {
        let mut out = Vec::new();
        for sigma in self.base.all_forms(n) {
            for t in self.sections(&sigma) {
                out.push((sigma.clone(), t));
            }
        }
        out
    }

    fn face(&self, _n: usize, v: &(SimplexForm, Table), i: usize) -> (SimplexForm, Table) {
        let m = v.0.dim();
        let sigma_new = self.base.face(&v.0, i);
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

pub struct RightKan {
    pub fibered: FiberedComplex,
    pub exact: bool,
    /// The verified postcondition on the projection.
    pub cocartesian: Verdict,
}

/// Push a cocartesian fibration over A forward along `phi: A -> B`:
/// n-simplices over `sigma` are maps `(Delta^n down-to-B A) -> X` over A.
pub fn right_kan_fibration(
    phi: &SimplicialMap,
    p: &FiberedComplex,
    dim_bound: usize,
) -> Result<RightKan, Error> {
    if phi.source() != &p.base {
        return Err(Error::Precondition("the fibration must live over the source of phi".into()));
    }
    if !check_fibration(&p.projection, FibrationKind::Inner, dim_bound).holds()
        || !is_cocartesian_fibration(&p.projection, dim_bound).holds()
    {
        return Err(Error::Precondition("the input must be a cocartesian fibration".into()));
    }
    let base = phi.target().clone();
    // A lax pullback of an n-simplex embeds in
    // Delta^n x Fun(interval, B) x A; the slack covers the last factors.
    let slack = 2 * base.dim().unwrap_or(0) + p.base.dim().unwrap_or(0);
    let domain_bound = dim_bound + slack + 1;
    let cyl = Cylinders::new(&standard_simplex(1), domain_bound);
    let ends = LaxEnds::new(&cyl, &base, domain_bound);
    let desc = RightKanDescription {
        phi,
        p,
        base: base.clone(),
        domain_bound,
        cyl: &cyl,
        ends: &ends,
        deltas: (0..=dim_bound + 1).map(standard_simplex).collect(),
        cache: Default::default(),
    };
    let realization = realize(&desc, dim_bound);
    let total = realization.complex.clone();
    let images = (0..total.grades().len())
        .map(|dim| total.keys(dim).map(|k| realization.rep(k).0.clone()).collect())
        .collect();
    let projection =
        SimplicialMap::new(total, base, images).expect("sections complex projects to the base");
    let exact = realization.top_grade_empty();
    let cocartesian_verdict = {
        let inner = check_fibration(&projection, FibrationKind::Inner, dim_bound);
        if inner.holds() {
            is_cocartesian_fibration(&projection, dim_bound)
        } else {
            inner
        }
    };
    Ok(RightKan {
        fibered: FiberedComplex::new(projection),
        exact,
        cocartesian: cocartesian_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{are_isomorphic, boundary_data};
    use crate::hom::enumerate_maps;

    #[test]
    fn slice_of_interval_under_source() {
        let d1 = standard_simplex(1);
        let s = slice_under(&d1, SimplexKey::new(0, 0), 3).unwrap();
        assert!(s.exact);
        assert!(are_isomorphic(&s.fibered.total, &d1));
        let s1 = slice_under(&d1, SimplexKey::new(0, 1), 3).unwrap();
        assert!(are_isomorphic(&s1.fibered.total, &standard_simplex(0)));
    }

    #[test]
    fn slice_of_triangle_under_first_vertex() {
        let d2 = standard_simplex(2);
        let s = slice_under(&d2, SimplexKey::new(0, 0), 4).unwrap();
        assert!(s.exact);
        assert_eq!(s.fibered.total.grades(), &[3, 3, 1]);
        assert!(are_isomorphic(&s.fibered.total, &d2));
    }

    #[test]
    fn slice_over_last_vertex_of_triangle() {
        let d2 = standard_simplex(2);
        let over = slice_over(&d2, SimplexKey::new(0, 2), 4).unwrap();
        assert_eq!(over.fibered.total.grades(), &[3, 3, 1]);
    }

    #[test]
    fn hom_complexes_of_interval() {
        let d1 = standard_simplex(1);
        let h01 = hom_left(&d1, SimplexKey::new(0, 0), SimplexKey::new(0, 1), 3);
        assert_eq!(h01.complex.grades(), &[1]);
        let h10 = hom_left(&d1, SimplexKey::new(0, 1), SimplexKey::new(0, 0), 3);
        assert!(h10.complex.is_empty());
        let h00 = hom_right(&d1, SimplexKey::new(0, 0), SimplexKey::new(0, 0), 3);
        assert_eq!(h00.complex.grades(), &[1]);
    }

    #[test]
    fn twisted_arrow_of_point_and_interval() {
        let d0 = standard_simplex(0);
        let t0 = twisted_arrow(&d0, 3);
        assert!(are_isomorphic(&t0.fibered.total, &d0));
        let d1 = standard_simplex(1);
        let t1 = twisted_arrow(&d1, 3);
        assert!(t1.exact);
        // Two identities, the arrow, and two wedges into the arrow: the
        // cospan shape.
        assert_eq!(t1.fibered.total.grades(), &[3, 2]);
    }

    #[test]
    fn fun_complex_shapes() {
        let d0 = standard_simplex(0);
        let d1 = standard_simplex(1);
        let f = fun_complex(&d0, &d1, 3);
        assert!(are_isomorphic(&f.complex, &d1));
        let ff = fun_complex(&d1, &d1, 3);
        assert!(are_isomorphic(&ff.complex, &standard_simplex(2)));
        let (b1, _) = boundary_data(1);
        let fb = fun_complex(&b1, &d1, 2);
        let sq = product(&d1, &d1);
        assert!(are_isomorphic(&fb.complex, &sq.complex));
    }

    #[test]
    fn fun_complex_curries_degreewise() {
        let d1 = standard_simplex(1);
        let f = fun_complex(&d1, &d1, 3);
        for n in 0..=3 {
            let maps = enumerate_maps(&f.cylinders.products[n].complex, &d1).len();
            assert_eq!(f.complex.all_forms(n).len(), maps);
        }
    }

    #[test]
    fn arrow_complex_of_interval() {
        let d1 = standard_simplex(1);
        let o = arrow_complex(&d1, 3);
        assert!(are_isomorphic(&o.fun.complex, &standard_simplex(2)));
        // Evaluation at 1 sends the three arrows to (0, 1, 1).
        let t = &o.target_eval;
        let mut vs: Vec<usize> =
            (0..3).map(|i| t.image_of_key(SimplexKey::new(0, i)).base.index).collect();
        vs.sort();
        assert_eq!(vs, vec![0, 1, 1]);
    }

    #[test]
    fn grothendieck_of_point_inclusion() {
        let diagrams = crate::corpus::linear_diagrams();
        let (_, d) = diagrams.into_iter().find(|(n, _)| n == "interval-point-to-zero").unwrap();
        let diagram = CategoryDiagram::from_linear(&d);
        let g = grothendieck(&diagram);
        assert_eq!(g.category.objects, 3);
        let nonid = (0..g.category.morphisms()).filter(|&m| !g.category.is_identity(m)).count();
        assert_eq!(nonid, 3);
        g.category.validate().unwrap();
        g.projection.validate().unwrap();
    }

    #[test]
    fn elements_of_a_two_point_set_map() {
        let interval = FiniteCategory::linear(1);
        let f = SetFunctor::new(interval, vec![1, 2], vec![vec![0], vec![0], vec![0, 1]]).unwrap();
        let g = category_of_elements(&f);
        assert_eq!(g.category.objects, 3);
        let nonid = (0..g.category.morphisms()).filter(|&m| !g.category.is_identity(m)).count();
        assert_eq!(nonid, 1);
    }

    #[test]
    fn lax_pullback_over_point_is_product() {
        let d1 = standard_simplex(1);
        let d0 = standard_simplex(0);
        let f = SimplicialMap::to_point(&d1);
        let g = SimplicialMap::to_point(&d0);
        let lp = lax_pullback(&f, &g, 2).unwrap();
        assert!(are_isomorphic(&lp.complex, &d1));
    }

    #[test]
    fn lax_pullback_of_endpoints() {
        let d1 = standard_simplex(1);
        let d0 = standard_simplex(0);
        let at0 = simplex_as_map(&d1, &SimplexKey::new(0, 0).form());
        let at1 = simplex_as_map(&d1, &SimplexKey::new(0, 1).form());
        // One connecting arrow from 0 to 1, none backwards.
        let lp = lax_pullback(&at0, &at1, 2).unwrap();
        assert!(are_isomorphic(&lp.complex, &d0));
        let lp_rev = lax_pullback(&at1, &at0, 2).unwrap();
        assert!(lp_rev.complex.is_empty());
    }

    #[test]
    fn lax_pullback_of_identities_is_arrow_complex() {
        let d1 = standard_simplex(1);
        let id = SimplicialMap::identity(&d1);
        let lp = lax_pullback(&id, &id, 3).unwrap();
        assert!(are_isomorphic(&lp.complex, &standard_simplex(2)));
    }

    #[test]
    fn relative_fun_of_identity_fibrations() {
        let d1 = standard_simplex(1);
        let id = FiberedComplex::new(SimplicialMap::identity(&d1));
        let rf = relative_fun(&id, &id, 3).unwrap();
        assert!(are_isomorphic(&rf.fibered.total, &d1));
    }

    #[test]
    fn right_kan_along_identity() {
        let d1 = standard_simplex(1);
        let id_map = SimplicialMap::identity(&d1);
        let p = FiberedComplex::new(SimplicialMap::identity(&d1));
        let rk = right_kan_fibration(&id_map, &p, 2).unwrap();
        assert!(are_isomorphic(&rk.fibered.total, &d1));
        assert!(rk.cocartesian.holds());
    }
}
