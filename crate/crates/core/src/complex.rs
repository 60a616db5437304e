//! Finite simplicial sets presented by nondegenerate simplices with face
//! data in normal form.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::simplex::{apply_word, push_face, FacePush, SimplexForm, SimplexKey};
use crate::Error;

#[derive(Debug, PartialEq, Eq, Hash)]
struct ComplexData {
    /// Number of nondegenerate simplices per dimension. The last grade is
    /// nonempty; interior grades may be empty.
    grades: Vec<usize>,
    /// `faces[dim][index][i]` is the i-th face of the simplex `(dim, index)`,
    /// for `dim >= 1`. `faces[0]` is an empty placeholder.
    faces: Vec<Vec<Vec<SimplexForm>>>,
    /// Optional display names, one per key, unique across the complex.
    names: Option<Vec<Vec<String>>>,
}

/// A finite simplicial set. Cheap to clone; immutable after construction.
#[derive(Clone, Debug)]
pub struct SimplicialSet(Arc<ComplexData>);

impl PartialEq for SimplicialSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.grades == other.0.grades && self.0.faces == other.0.faces
    }
}
impl Eq for SimplicialSet {}

/// Findings produced by [`SimplicialSet::validate_parts`] and the public
/// validators; construction refuses invalid data, so a report with
/// violations can only come from externally supplied files.
#[derive(Debug, Default, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SimplicialSet {
    /// Build a complex from grade sizes and face tables, checking the
    /// simplicial identities.
    pub fn from_parts(
        grades: Vec<usize>,
        faces: Vec<Vec<Vec<SimplexForm>>>,
        names: Option<Vec<Vec<String>>>,
    ) -> Result<SimplicialSet, Error> {
        let report = Self::validate_parts(&grades, &faces);
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidComplex(v.clone()));
        }
        let mut grades = grades;
        let mut faces = faces;
        let mut names = names;
        while grades.last() == Some(&0) {
            grades.pop();
            faces.pop();
            if let Some(ns) = names.as_mut() {
                ns.pop();
            }
        }
        Ok(SimplicialSet(Arc::new(ComplexData { grades, faces, names })))
    }

    /// Check grade/face tables for well-formedness and the simplicial
    /// identities `d_i d_j = d_{j-1} d_i` (i < j); returns all findings.
    pub fn validate_parts(grades: &[usize], faces: &[Vec<Vec<SimplexForm>>]) -> ValidationReport {
        let mut report = ValidationReport::default();
        if faces.len() != grades.len() {
            report
                .violations
                .push(format!("face table has {} grades, expected {}", faces.len(), grades.len()));
            return report;
        }
        let exists =
            |f: &SimplexForm| f.base.dim < grades.len() && f.base.index < grades[f.base.dim];
        for dim in 0..grades.len() {
            if faces[dim].len() != grades[dim] {
                report.violations.push(format!(
                    "dimension {}: {} face rows for {} simplices",
                    dim,
                    faces[dim].len(),
                    grades[dim]
                ));
                return report;
            }
            for index in 0..grades[dim] {
                let row = &faces[dim][index];
                if dim == 0 {
                    if !row.is_empty() {
                        report.violations.push(format!("vertex (0,{index}) has face entries"));
                    }
                    continue;
                }
                if row.len() != dim + 1 {
                    report.violations.push(format!(
                        "simplex ({dim},{index}) has {} faces, expected {}",
                        row.len(),
                        dim + 1
                    ));
                    return report;
                }
                for (i, f) in row.iter().enumerate() {
                    if !exists(f) {
                        report.violations.push(format!(
                            "face {i} of ({dim},{index}) references missing base ({},{})",
                            f.base.dim, f.base.index
                        ));
                        return report;
                    }
                    if f.dim() + 1 != dim || !f.word_is_valid() {
                        report.violations.push(format!(
                            "face {i} of ({dim},{index}) is not a valid form of dimension {}",
                            dim - 1
                        ));
                        return report;
                    }
                }
            }
        }
        // Simplicial identities, evaluated through the word algebra.
        let face_of = |form: &SimplexForm, a: usize| -> SimplexForm {
            match push_face(&form.word, a) {
                FacePush::Cancelled(word) => SimplexForm { base: form.base, word },
                FacePush::Reached { outer, face_index } => {
                    apply_word(&outer, faces[form.base.dim][form.base.index][face_index].clone())
                }
            }
        };
        for dim in 2..grades.len() {
            for index in 0..grades[dim] {
                let form = SimplexKey::new(dim, index).form();
                for j in 1..=dim {
                    for i in 0..j {
                        let lhs = face_of(&face_of(&form, j), i);
                        let rhs = face_of(&face_of(&form, i), j - 1);
                        if lhs != rhs {
                            report.violations.push(format!(
                                "simplicial identity d_{i} d_{j} = d_{} d_{i} fails at ({dim},{index})",
                                j - 1
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    /// Re-run the structural validation (always clean for constructed values).
    pub fn validate(&self) -> ValidationReport {
        Self::validate_parts(&self.0.grades, &self.0.faces)
    }

    pub fn empty() -> SimplicialSet {
        SimplicialSet(Arc::new(ComplexData { grades: Vec::new(), faces: Vec::new(), names: None }))
    }

    pub fn is_empty(&self) -> bool {
        self.0.grades.is_empty()
    }

    /// Dimension of the highest nonempty grade; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        if self.0.grades.is_empty() {
            None
        } else {
            Some(self.0.grades.len() - 1)
        }
    }

    pub fn grade_count(&self, dim: usize) -> usize {
        self.0.grades.get(dim).copied().unwrap_or(0)
    }

    pub fn grades(&self) -> &[usize] {
        &self.0.grades
    }

    pub fn total_nondegenerate(&self) -> usize {
        self.0.grades.iter().sum()
    }

    pub fn keys(&self, dim: usize) -> impl Iterator<Item = SimplexKey> {
        (0..self.grade_count(dim)).map(move |index| SimplexKey::new(dim, index))
    }

    pub fn all_keys(&self) -> impl Iterator<Item = SimplexKey> + '_ {
        (0..self.0.grades.len()).flat_map(move |dim| self.keys(dim))
    }

    pub fn contains(&self, key: SimplexKey) -> bool {
        key.index < self.grade_count(key.dim)
    }

    /// The stored i-th face of a nondegenerate simplex.
    pub fn face_of_key(&self, key: SimplexKey, i: usize) -> &SimplexForm {
        &self.0.faces[key.dim][key.index][i]
    }

    pub fn name(&self, key: SimplexKey) -> String {
        match &self.0.names {
            Some(names) => names[key.dim][key.index].clone(),
            None => format!("k{}_{}", key.dim, key.index),
        }
    }

    pub fn has_names(&self) -> bool {
        self.0.names.is_some()
    }

    /// Drop display names (used when derived complexes reuse key data).
    pub fn without_names(&self) -> SimplicialSet {
        if self.0.names.is_none() {
            return self.clone();
        }
        SimplicialSet(Arc::new(ComplexData {
            grades: self.0.grades.clone(),
            faces: self.0.faces.clone(),
            names: None,
        }))
    }

    /// `d_a` applied to an arbitrary form, in normal form.
    pub fn face(&self, form: &SimplexForm, a: usize) -> SimplexForm {
        debug_assert!(form.dim() >= 1 && a <= form.dim());
        match push_face(&form.word, a) {
            FacePush::Cancelled(word) => SimplexForm { base: form.base, word },
            FacePush::Reached { outer, face_index } => {
                apply_word(&outer, self.face_of_key(form.base, face_index).clone())
            }
        }
    }

    /// Act by an arbitrary monotone map `phi: [k] -> [n]` on an n-form,
    /// yielding a k-form: faces for the missing values, degeneracies for
    /// the repeats.
    pub fn act(&self, form: &SimplexForm, phi: &[usize]) -> SimplexForm {
        let n = form.dim();
        debug_assert!(!phi.is_empty());
        debug_assert!(phi.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(*phi.last().unwrap() <= n);
        let image: BTreeSet<usize> = phi.iter().copied().collect();
        let mut out = form.clone();
        for a in (0..=n).rev() {
            if !image.contains(&a) {
                out = self.face(&out, a);
            }
        }
        for p in 0..phi.len() - 1 {
            if phi[p] == phi[p + 1] {
                out = out.degenerate(p);
            }
        }
        out
    }

    /// The j-th vertex of a form.
    pub fn vertex(&self, form: &SimplexForm, j: usize) -> SimplexKey {
        self.act(form, &[j]).base
    }

    /// Every m-form: nondegenerate bases of dimension `k <= m` with all
    /// strictly decreasing words of length `m - k` drawn from `0..m`.
    pub fn all_forms(&self, m: usize) -> Vec<SimplexForm> {
        let mut out = Vec::new();
        let Some(top) = self.dim() else { return out };
        for k in 0..=m.min(top) {
            for index in 0..self.grade_count(k) {
                let base = SimplexKey::new(k, index);
                for comb in (0..m).combinations(m - k) {
                    let mut word: Vec<usize> = comb;
                    word.reverse();
                    out.push(SimplexForm::new(base, word));
                }
            }
        }
        out
    }

    /// Keys at `dim` as empty-word forms.
    pub fn nondegenerate_forms(&self, dim: usize) -> Vec<SimplexForm> {
        self.keys(dim).map(SimplexKey::form).collect()
    }

    /// All edge forms (dimension 1), degenerate ones included.
    pub fn edge_forms(&self) -> Vec<SimplexForm> {
        self.all_forms(1)
    }

    /// Translate a form along a dimension-preserving key relabeling.
    pub fn relabel_form(form: &SimplexForm, assign: &[Vec<usize>]) -> SimplexForm {
        SimplexForm {
            base: SimplexKey::new(form.base.dim, assign[form.base.dim][form.base.index]),
            word: form.word.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Standard simplices, horns, boundaries
// ---------------------------------------------------------------------------

/// Increasing subsets of {0..=n} of size k+1, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..=n).combinations(k + 1).collect()
}

fn subset_name(s: &[usize]) -> String {
    if s.iter().all(|&v| v <= 9) {
        s.iter().map(|v| v.to_string()).collect()
    } else {
        s.iter().map(|v| v.to_string()).join(".")
    }
}

/// The standard n-simplex: nondegenerate k-simplices are the (k+1)-subsets
/// of its vertex set, faces delete a vertex.
pub fn standard_simplex(n: usize) -> SimplicialSet {
    let mut grades = Vec::with_capacity(n + 1);
    let mut faces = Vec::with_capacity(n + 1);
    let mut names = Vec::with_capacity(n + 1);
    let mut rank: HashMap<Vec<usize>, usize> = HashMap::new();
    for k in 0..=n {
        let subs = subsets(n, k);
        grades.push(subs.len());
        names.push(subs.iter().map(|s| subset_name(s)).collect::<Vec<_>>());
        let mut rows = Vec::with_capacity(subs.len());
        for (idx, s) in subs.iter().enumerate() {
            rank.insert(s.clone(), idx);
            if k == 0 {
                rows.push(Vec::new());
            } else {
                let mut row = Vec::with_capacity(k + 1);
                for i in 0..=k {
                    let mut t = s.clone();
                    t.remove(i);
                    row.push(SimplexKey::new(k - 1, rank[&t]).form());
                }
                rows.push(row);
            }
        }
        faces.push(rows);
    }
    SimplicialSet::from_parts(grades, faces, Some(names)).expect("standard simplex is valid")
}

/// Key of the (k+1)-subset `s` inside `standard_simplex(n)`.
pub fn simplex_key_of_subset(n: usize, s: &[usize]) -> SimplexKey {
    let k = s.len() - 1;
    let pos = subsets(n, k).iter().position(|t| t == s).expect("subset in range");
    SimplexKey::new(k, pos)
}

/// Vertex set of a key of `standard_simplex(n)`.
pub fn subset_of_simplex_key(n: usize, key: SimplexKey) -> Vec<usize> {
    subsets(n, key.dim)[key.index].clone()
}

// ---------------------------------------------------------------------------
// Subcomplexes and sums
// ---------------------------------------------------------------------------

/// Smallest face-closed collection of nondegenerate simplices containing
/// `keys`, returned with the inclusion data (new key -> old key).
pub fn subcomplex_generated(
    ambient: &SimplicialSet,
    keys: &[SimplexKey],
) -> (SimplicialSet, Vec<Vec<SimplexKey>>) {
    let mut keep: BTreeSet<SimplexKey> = BTreeSet::new();
    let mut stack: Vec<SimplexKey> = keys.to_vec();
    while let Some(k) = stack.pop() {
        assert!(ambient.contains(k), "generator outside the ambient complex");
        if !keep.insert(k) {
            continue;
        }
        if k.dim >= 1 {
            for i in 0..=k.dim {
                stack.push(ambient.face_of_key(k, i).base);
            }
        }
    }
    let dim_top = keep.iter().map(|k| k.dim).max();
    let mut included: Vec<Vec<SimplexKey>> = Vec::new();
    let mut new_index: HashMap<SimplexKey, usize> = HashMap::new();
    if let Some(top) = dim_top {
        included = vec![Vec::new(); top + 1];
        for k in &keep {
            new_index.insert(*k, included[k.dim].len());
            included[k.dim].push(*k);
        }
    }
    let grades: Vec<usize> = included.iter().map(|v| v.len()).collect();
    let mut faces = Vec::with_capacity(grades.len());
    let mut names = Vec::with_capacity(grades.len());
    for (dim, keys_here) in included.iter().enumerate() {
        let mut rows = Vec::with_capacity(keys_here.len());
        let mut row_names = Vec::with_capacity(keys_here.len());
        for &old in keys_here {
            row_names.push(ambient.name(old));
            if dim == 0 {
                rows.push(Vec::new());
            } else {
                rows.push(
                    (0..=dim)
                        .map(|i| {
                            let f = ambient.face_of_key(old, i);
                            SimplexForm::new(
                                SimplexKey::new(f.base.dim, new_index[&f.base]),
                                f.word.clone(),
                            )
                        })
                        .collect(),
                );
            }
        }
        faces.push(rows);
        names.push(row_names);
    }
    let names = if ambient.has_names() { Some(names) } else { None };
    let sub = SimplicialSet::from_parts(grades, faces, names).expect("face closure is valid");
    (sub, included)
}

/// Boundary of the standard n-simplex together with inclusion data.
pub fn boundary_data(n: usize) -> (SimplicialSet, Vec<Vec<SimplexKey>>) {
    let delta = standard_simplex(n);
    if n == 0 {
        return (SimplicialSet::empty(), Vec::new());
    }
    let facets: Vec<SimplexKey> = delta.keys(n - 1).collect();
    subcomplex_generated(&delta, &facets)
}

/// The horn missing the k-th face, together with inclusion data.
pub fn horn_data(n: usize, k: usize) -> Result<(SimplicialSet, Vec<Vec<SimplexKey>>), Error> {
    if n < 1 || k > n {
        return Err(Error::Precondition(format!("horn indices out of range: ({n},{k})")));
    }
    let delta = standard_simplex(n);
    let facets: Vec<SimplexKey> = (0..=n)
        .filter(|&i| i != k)
        .map(|i| {
            let s: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
            simplex_key_of_subset(n, &s)
        })
        .collect();
    Ok(subcomplex_generated(&delta, &facets))
}

/// Disjoint union, with key offsets `(left copy first)`.
pub fn disjoint_union(x: &SimplicialSet, y: &SimplicialSet) -> SimplicialSet {
    let top = x.0.grades.len().max(y.0.grades.len());
    let mut grades = Vec::with_capacity(top);
    let mut faces = Vec::with_capacity(top);
    for dim in 0..top {
        let gx = x.grade_count(dim);
        let gy = y.grade_count(dim);
        grades.push(gx + gy);
        let mut rows = Vec::with_capacity(gx + gy);
        for index in 0..gx {
            if dim == 0 {
                rows.push(Vec::new());
            } else {
                rows.push(x.0.faces[dim][index].clone());
            }
        }
        for index in 0..gy {
            if dim == 0 {
                rows.push(Vec::new());
            } else {
                rows.push(
                    y.0.faces[dim][index]
                        .iter()
                        .map(|f| {
                            SimplexForm::new(
                                SimplexKey::new(f.base.dim, f.base.index + x.grade_count(f.base.dim)),
                                f.word.clone(),
                            )
                        })
                        .collect(),
                );
            }
        }
        faces.push(rows);
    }
    SimplicialSet::from_parts(grades, faces, None).expect("disjoint union is valid")
}

// ---------------------------------------------------------------------------
// Opposite
// ---------------------------------------------------------------------------

/// The opposite form: each degeneracy `s_i` applied at dimension `m`
/// becomes `s_{m-1-i}`; computed by recursion and renormalization.
pub fn opposite_form(form: &SimplexForm) -> SimplexForm {
    let mut out = form.base.form();
    // Innermost entries first: entry j (from the end) is applied at
    // dimension base.dim + (r - 1 - j) on the way up.
    let r = form.word.len();
    for j in (0..r).rev() {
        let at_dim = form.base.dim + (r - 1 - j);
        out = out.degenerate(at_dim - form.word[j]);
    }
    out
}

/// The opposite complex: same keys, face indices reversed per dimension.
pub fn opposite(x: &SimplicialSet) -> SimplicialSet {
    let mut faces = Vec::with_capacity(x.0.grades.len());
    for dim in 0..x.0.grades.len() {
        let mut rows = Vec::with_capacity(x.grade_count(dim));
        for index in 0..x.grade_count(dim) {
            if dim == 0 {
                rows.push(Vec::new());
            } else {
                rows.push(
                    (0..=dim)
                        .map(|i| opposite_form(&x.0.faces[dim][index][dim - i]))
                        .collect(),
                );
            }
        }
        faces.push(rows);
    }
    SimplicialSet::from_parts(x.0.grades.clone(), faces, None).expect("opposite is valid")
}

// ---------------------------------------------------------------------------
// Join
// ---------------------------------------------------------------------------

/// Identification of a nondegenerate simplex of a join.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinKey {
    Left(SimplexKey),
    Right(SimplexKey),
    Mixed(SimplexKey, SimplexKey),
}

pub struct Join {
    pub complex: SimplicialSet,
    /// Per-key identification, parallel to the complex's grades.
    pub parts: Vec<Vec<JoinKey>>,
}

/// The join: n-simplices are X-parts, Y-parts, and mixed pairs
/// `(x_i, y_j)` with `i + j = n - 1`.
pub fn join(x: &SimplicialSet, y: &SimplicialSet) -> Join {
    let dx = x.dim();
    let dy = y.dim();
    let top = match (dx, dy) {
        (None, None) => {
            return Join { complex: SimplicialSet::empty(), parts: Vec::new() };
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (Some(a), Some(b)) => a + b + 1,
    };
    let mut parts: Vec<Vec<JoinKey>> = vec![Vec::new(); top + 1];
    for dim in 0..=top {
        for k in x.keys(dim) {
            parts[dim].push(JoinKey::Left(k));
        }
        for k in y.keys(dim) {
            parts[dim].push(JoinKey::Right(k));
        }
        for i in 0..dim {
            let j = dim - 1 - i;
            for a in x.keys(i) {
                for b in y.keys(j) {
                    parts[dim].push(JoinKey::Mixed(a, b));
                }
            }
        }
    }
    let mut index: HashMap<(usize, JoinKeyRepr), usize> = HashMap::new();
    for (dim, row) in parts.iter().enumerate() {
        for (i, jk) in row.iter().enumerate() {
            index.insert((dim, repr(*jk)), i);
        }
    }
    let left_form = |f: &SimplexForm| -> SimplexForm {
        SimplexForm::new(
            SimplexKey::new(f.base.dim, index[&(f.base.dim, repr(JoinKey::Left(f.base)))]),
            f.word.clone(),
        )
    };
    let right_form = |f: &SimplexForm| -> SimplexForm {
        SimplexForm::new(
            SimplexKey::new(f.base.dim, index[&(f.base.dim, repr(JoinKey::Right(f.base)))]),
            f.word.clone(),
        )
    };
    // Mixed simplex (xi, upsilon) with xi of dimension i: base is the pair of
    // bases, word is word(xi) merged with word(upsilon) shifted by i + 1.
    let mixed_form = |xi: &SimplexForm, ups: &SimplexForm| -> SimplexForm {
        let i = xi.dim();
        let mut word: Vec<usize> = ups.word.iter().map(|w| w + i + 1).collect();
        word.extend_from_slice(&xi.word);
        let base_dim = xi.base.dim + ups.base.dim + 1;
        let idx = index[&(base_dim, repr(JoinKey::Mixed(xi.base, ups.base)))];
        SimplexForm::new(SimplexKey::new(base_dim, idx), word)
    };
    let mut grades = Vec::with_capacity(top + 1);
    let mut faces = Vec::with_capacity(top + 1);
    for (dim, row) in parts.iter().enumerate() {
        grades.push(row.len());
        let mut rows = Vec::with_capacity(row.len());
        for jk in row {
            if dim == 0 {
                rows.push(Vec::new());
                continue;
            }
            let mut frow = Vec::with_capacity(dim + 1);
            for a in 0..=dim {
                let f = match jk {
                    JoinKey::Left(k) => left_form(x.face_of_key(*k, a)),
                    JoinKey::Right(k) => right_form(y.face_of_key(*k, a)),
                    JoinKey::Mixed(xk, yk) => {
                        let i = xk.dim;
                        let j = yk.dim;
                        if a <= i {
                            if i == 0 {
                                right_form(&yk.form())
                            } else {
                                mixed_form(x.face_of_key(*xk, a), &yk.form())
                            }
                        } else {
                            let b = a - i - 1;
                            if j == 0 {
                                left_form(&xk.form())
                            } else {
                                mixed_form(&xk.form(), y.face_of_key(*yk, b))
                            }
                        }
                    }
                };
                frow.push(f);
            }
            rows.push(frow);
        }
        faces.push(rows);
    }
    let complex = SimplicialSet::from_parts(grades, faces, None).expect("join is valid");
    Join { complex, parts }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum JoinKeyRepr {
    L(usize, usize),
    R(usize, usize),
    M(usize, usize, usize, usize),
}

fn repr(jk: JoinKey) -> JoinKeyRepr {
    match jk {
        JoinKey::Left(k) => JoinKeyRepr::L(k.dim, k.index),
        JoinKey::Right(k) => JoinKeyRepr::R(k.dim, k.index),
        JoinKey::Mixed(a, b) => JoinKeyRepr::M(a.dim, a.index, b.dim, b.index),
    }
}

// ---------------------------------------------------------------------------
// Isomorphism search
// ---------------------------------------------------------------------------

/// Backtracking isomorphism search on graded nondegenerate simplices.
/// `extra` can impose additional per-key compatibility (structure maps,
/// markings); it receives (dim, index in x, index in y).
pub fn find_isomorphism_with(
    x: &SimplicialSet,
    y: &SimplicialSet,
    extra: &dyn Fn(usize, usize, usize) -> bool,
) -> Option<Vec<Vec<usize>>> {
    if x.grades() != y.grades() {
        return None;
    }
    let top = x.grades().len();
    let mut assign: Vec<Vec<usize>> = (0..top).map(|d| vec![usize::MAX; x.grade_count(d)]).collect();
    fn compatible(
        x: &SimplicialSet,
        y: &SimplicialSet,
        assign: &[Vec<usize>],
        dim: usize,
        i: usize,
        j: usize,
    ) -> bool {
        if dim == 0 {
            return true;
        }
        for a in 0..=dim {
            let fx = x.face_of_key(SimplexKey::new(dim, i), a);
            let fy = y.face_of_key(SimplexKey::new(dim, j), a);
            if fx.word != fy.word || fx.base.dim != fy.base.dim {
                return false;
            }
            if assign[fx.base.dim][fx.base.index] != fy.base.index {
                return false;
            }
        }
        true
    }
    fn go(
        x: &SimplicialSet,
        y: &SimplicialSet,
        extra: &dyn Fn(usize, usize, usize) -> bool,
        assign: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
        dim: usize,
        i: usize,
    ) -> bool {
        if dim == x.grades().len() {
            return true;
        }
        if i == x.grade_count(dim) {
            return go(x, y, extra, assign, used, dim + 1, 0);
        }
        for j in 0..y.grade_count(dim) {
            if used[dim][j] || !extra(dim, i, j) || !compatible(x, y, assign, dim, i, j) {
                continue;
            }
            assign[dim][i] = j;
            used[dim][j] = true;
            if go(x, y, extra, assign, used, dim, i + 1) {
                return true;
            }
            assign[dim][i] = usize::MAX;
            used[dim][j] = false;
        }
        false
    }
    let mut used: Vec<Vec<bool>> = (0..top).map(|d| vec![false; y.grade_count(d)]).collect();
    if go(x, y, extra, &mut assign, &mut used, 0, 0) {
        Some(assign)
    } else {
        None
    }
}

pub fn find_isomorphism(x: &SimplicialSet, y: &SimplicialSet) -> Option<Vec<Vec<usize>>> {
    find_isomorphism_with(x, y, &|_, _, _| true)
}

pub fn are_isomorphic(x: &SimplicialSet, y: &SimplicialSet) -> bool {
    find_isomorphism(x, y).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_simplex_counts() {
        let d0 = standard_simplex(0);
        assert_eq!(d0.grades(), &[1]);
        let d2 = standard_simplex(2);
        assert_eq!(d2.grades(), &[3, 3, 1]);
        // Counts for the 3-simplex enumerate the monotone injections.
        let d3 = standard_simplex(3);
        assert_eq!(d3.grades(), &[4, 6, 4, 1]);
        assert!(d3.validate().is_valid());
    }

    #[test]
    fn boundary_counts() {
        let (b0, _) = boundary_data(0);
        assert!(b0.is_empty());
        let (b1, _) = boundary_data(1);
        assert_eq!(b1.grades(), &[2]);
        let (b2, _) = boundary_data(2);
        assert_eq!(b2.grades(), &[3, 3]);
    }

    #[test]
    fn horn_shapes() {
        let (h10, _) = horn_data(1, 0).unwrap();
        assert_eq!(h10.grades(), &[1]);
        let (h20, _) = horn_data(2, 0).unwrap();
        assert_eq!(h20.grades(), &[3, 2]);
        let (h21, _) = horn_data(2, 1).unwrap();
        assert_eq!(h21.grades(), &[3, 2]);
        assert!(horn_data(1, 2).is_err());
    }

    #[test]
    fn act_monotone_on_standard() {
        let d2 = standard_simplex(2);
        let top = SimplexKey::new(2, 0).form();
        // Vertex 1 of the 2-simplex.
        let v = d2.act(&top, &[1]);
        assert_eq!(v, SimplexKey::new(0, 1).form());
        // The long edge 02.
        let e = d2.act(&top, &[0, 2]);
        assert_eq!(e.base, simplex_key_of_subset(2, &[0, 2]));
        // A degenerate restriction 0 -> 0.
        let degen = d2.act(&top, &[0, 0]);
        assert_eq!(degen, SimplexKey::new(0, 0).form().degenerate(0));
    }

    #[test]
    fn all_forms_count() {
        let d1 = standard_simplex(1);
        // 2-forms of the interval: two doubly degenerate vertices and two
        // degeneracies of the edge.
        assert_eq!(d1.all_forms(2).len(), 4);
        assert_eq!(d1.all_forms(0).len(), 2);
    }

    #[test]
    fn opposite_involution_and_horn_swap() {
        let (h20, _) = horn_data(2, 0).unwrap();
        let (h22, _) = horn_data(2, 2).unwrap();
        assert!(are_isomorphic(&opposite(&opposite(&h20)), &h20));
        assert!(are_isomorphic(&opposite(&h20), &h22));
        assert!(!are_isomorphic(&h20, &standard_simplex(1)));
    }

    #[test]
    fn join_of_standard_simplices() {
        let d1 = standard_simplex(1);
        let d0 = standard_simplex(0);
        let j = join(&d1, &d0);
        assert!(are_isomorphic(&j.complex, &standard_simplex(2)));
        // Unit law.
        let e = SimplicialSet::empty();
        let j2 = join(&e, &d1);
        assert!(are_isomorphic(&j2.complex, &d1));
        // Cone on two points.
        let (b1, _) = boundary_data(1);
        let cone = join(&d0, &b1);
        let (h20, _) = horn_data(2, 0).unwrap();
        assert!(are_isomorphic(&cone.complex, &h20));
    }

    #[test]
    fn join_associative_on_standards() {
        for (a, b, c) in [(0, 0, 0), (1, 0, 1), (0, 1, 1)] {
            let lhs = join(&join(&standard_simplex(a), &standard_simplex(b)).complex, &standard_simplex(c));
            assert!(are_isomorphic(&lhs.complex, &standard_simplex(a + b + c + 2)));
        }
    }

    #[test]
    fn subcomplex_generation() {
        let d2 = standard_simplex(2);
        let (all, _) = subcomplex_generated(&d2, &[SimplexKey::new(2, 0)]);
        assert!(are_isomorphic(&all, &d2));
        let e01 = simplex_key_of_subset(2, &[0, 1]);
        let e02 = simplex_key_of_subset(2, &[0, 2]);
        let (horn, _) = subcomplex_generated(&d2, &[e01, e02]);
        let (h20, _) = horn_data(2, 0).unwrap();
        assert!(are_isomorphic(&horn, &h20));
    }

    #[test]
    fn sphere_with_empty_interior_grade_is_valid() {
        // One vertex, no edges, one 2-simplex with degenerate faces.
        let v = SimplexKey::new(0, 0).form();
        let s0v = v.degenerate(0);
        let grades = vec![1, 0, 1];
        let faces = vec![vec![Vec::new()], Vec::new(), vec![vec![s0v.clone(), s0v.clone(), s0v]]];
        let sphere = SimplicialSet::from_parts(grades, faces, None).unwrap();
        assert!(sphere.validate().is_valid());
        assert_eq!(sphere.dim(), Some(2));
    }
}
