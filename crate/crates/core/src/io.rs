//! The shared textual format: complexes as JSON documents with "grades"
//! (names per dimension) and "faces" (face expressions `s_i1 ... s_ir
//! name`), maps as per-simplex image expressions, plus markings, patterns,
//! lifting squares, witnesses, and verdicts.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::complex::{join, standard_simplex, SimplicialSet};
use crate::hom::{extend, LiftingProblem, Verdict, Witness};
use crate::map::SimplicialMap;
use crate::patterns::{CategoricalPattern, Cone, MarkedMap, MarkedSimplicialSet};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

/// `s_3 s_0 name` or a bare `name`.
pub fn form_to_expr(x: &SimplicialSet, form: &SimplexForm) -> String {
    let mut parts: Vec<String> = form.word.iter().map(|i| format!("s_{i}")).collect();
    parts.push(x.name(form.base));
    parts.join(" ")
}

pub fn parse_expr(names: &HashMap<String, SimplexKey>, expr: &str) -> Result<SimplexForm, Error> {
    let tokens: Vec<&str> = expr.split_whitespace().collect();
    let Some((name, ops)) = tokens.split_last() else {
        return Err(Error::Parse("empty face expression".into()));
    };
    let base = *names
        .get(*name)
        .ok_or_else(|| Error::Parse(format!("unknown simplex name '{name}'")))?;
    let mut word = Vec::with_capacity(ops.len());
    for op in ops {
        let idx = op
            .strip_prefix("s_")
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad degeneracy token '{op}' in '{expr}'")))?;
        word.push(idx);
    }
    let form = SimplexForm { base, word };
    if !form.word_is_valid() {
        return Err(Error::Parse(format!("degeneracy word is not in normal form in '{expr}'")));
    }
    Ok(form)
}

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexRepr {
    pub grades: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<String, Vec<String>>,
}

pub fn complex_to_repr(x: &SimplicialSet) -> ComplexRepr {
    let grades: Vec<Vec<String>> =
        (0..x.grades().len()).map(|d| x.keys(d).map(|k| x.name(k)).collect()).collect();
    let mut faces = BTreeMap::new();
    for dim in 1..x.grades().len() {
        for key in x.keys(dim) {
            let row = (0..=dim).map(|i| form_to_expr(x, x.face_of_key(key, i))).collect();
            faces.insert(x.name(key), row);
        }
    }
    ComplexRepr { grades, faces }
}

/// The name table of a representation, with uniqueness enforced.
pub fn name_table(repr: &ComplexRepr) -> Result<HashMap<String, SimplexKey>, Error> {
    let mut names = HashMap::new();
    for (dim, level) in repr.grades.iter().enumerate() {
        for (index, name) in level.iter().enumerate() {
            if names.insert(name.clone(), SimplexKey::new(dim, index)).is_some() {
                return Err(Error::Parse(format!("duplicate simplex name '{name}'")));
            }
        }
    }
    Ok(names)
}

pub fn complex_from_repr(repr: &ComplexRepr) -> Result<SimplicialSet, Error> {
    let names = name_table(repr)?;
    let mut faces: Vec<Vec<Vec<SimplexForm>>> = Vec::with_capacity(repr.grades.len());
    for (dim, level) in repr.grades.iter().enumerate() {
        let mut rows = Vec::with_capacity(level.len());
        for name in level {
            if dim == 0 {
                rows.push(Vec::new());
                continue;
            }
            let exprs = repr
                .faces
                .get(name)
                .ok_or_else(|| Error::Parse(format!("missing face row for '{name}'")))?;
            if exprs.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "simplex '{name}' needs {} faces, found {}",
                    dim + 1,
                    exprs.len()
                )));
            }
            rows.push(exprs.iter().map(|e| parse_expr(&names, e)).collect::<Result<_, _>>()?);
        }
        faces.push(rows);
    }
    SimplicialSet::from_parts(
        repr.grades.iter().map(|l| l.len()).collect(),
        faces,
        Some(repr.grades.clone()),
    )
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapRepr {
    pub source: ComplexRepr,
    pub target: ComplexRepr,
    pub images: BTreeMap<String, String>,
}

pub fn map_to_repr(m: &SimplicialMap) -> MapRepr {
    let source = complex_to_repr(m.source());
    let target = complex_to_repr(m.target());
    let mut images = BTreeMap::new();
    for key in m.source().all_keys() {
        images.insert(m.source().name(key), form_to_expr(m.target(), m.image_of_key(key)));
    }
    MapRepr { source, target, images }
}

pub fn map_from_repr(repr: &MapRepr) -> Result<SimplicialMap, Error> {
    let source = complex_from_repr(&repr.source)?;
    let target = complex_from_repr(&repr.target)?;
    let target_names = name_table(&repr.target)?;
    let mut images: Vec<Vec<SimplexForm>> = Vec::with_capacity(source.grades().len());
    for dim in 0..source.grades().len() {
        let mut row = Vec::with_capacity(source.grade_count(dim));
        for key in source.keys(dim) {
            let name = source.name(key);
            let expr = repr
                .images
                .get(&name)
                .ok_or_else(|| Error::Parse(format!("missing image for '{name}'")))?;
            row.push(parse_expr(&target_names, expr)?);
        }
        images.push(row);
    }
    SimplicialMap::new(source, target, images)
}

// ---------------------------------------------------------------------------
// Markings and patterns
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkedComplexRepr {
    #[serde(flatten)]
    pub complex: ComplexRepr,
    pub marked: Vec<String>,
}

pub fn marked_to_repr(m: &MarkedSimplicialSet) -> MarkedComplexRepr {
    MarkedComplexRepr {
        complex: complex_to_repr(&m.complex),
        marked: m.marks.iter().map(|f| form_to_expr(&m.complex, f)).collect(),
    }
}

pub fn marked_from_repr(repr: &MarkedComplexRepr) -> Result<MarkedSimplicialSet, Error> {
    let complex = complex_from_repr(&repr.complex)?;
    let names = name_table(&repr.complex)?;
    let marks: BTreeSet<SimplexForm> = repr
        .marked
        .iter()
        .map(|e| parse_expr(&names, e))
        .collect::<Result<_, _>>()?;
    Ok(MarkedSimplicialSet::raw(&complex, marks))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MarkedMapRepr {
    pub source: MarkedComplexRepr,
    pub target: MarkedComplexRepr,
    pub images: BTreeMap<String, String>,
}

pub fn marked_map_to_repr(m: &MarkedMap) -> MarkedMapRepr {
    let plain = map_to_repr(&m.map);
    MarkedMapRepr {
        source: marked_to_repr(&m.source),
        target: marked_to_repr(&m.target),
        images: plain.images,
    }
}

pub fn marked_map_from_repr(repr: &MarkedMapRepr) -> Result<MarkedMap, Error> {
    let source = marked_from_repr(&repr.source)?;
    let target = marked_from_repr(&repr.target)?;
    let plain = MapRepr {
        source: repr.source.complex.clone(),
        target: repr.target.complex.clone(),
        images: repr.images.clone(),
    };
    let map = map_from_repr(&plain)?;
    MarkedMap::new(source, target, map)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeRepr {
    pub k: ComplexRepr,
    /// Images of the simplices of the left cone of k; cone simplex names
    /// are `tip`, `tip*<name>`, and the names of k.
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternRepr {
    #[serde(flatten)]
    pub base: ComplexRepr,
    pub marked: Vec<String>,
    pub scaled: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cones: Vec<ConeRepr>,
}

/// Names for the left cone of `k`: the tip, the simplices of `k`, and the
/// mixed cones `tip*<name>`.
fn cone_complex_with_names(k: &SimplicialSet) -> (SimplicialSet, Vec<Vec<String>>) {
    let tip = standard_simplex(0);
    let j = join(&tip, k);
    let names: Vec<Vec<String>> = j
        .parts
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|part| match part {
                    crate::complex::JoinKey::Left(_) => "tip".to_string(),
                    crate::complex::JoinKey::Right(key) => k.name(*key),
                    crate::complex::JoinKey::Mixed(_, key) => format!("tip*{}", k.name(*key)),
                })
                .collect()
        })
        .collect();
    (j.complex, names)
}

pub fn pattern_to_repr(p: &CategoricalPattern) -> PatternRepr {
    PatternRepr {
        base: complex_to_repr(&p.base),
        marked: p.marked.iter().map(|f| form_to_expr(&p.base, f)).collect(),
        scaled: p.scaled.iter().map(|f| form_to_expr(&p.base, f)).collect(),
        cones: p
            .cones
            .iter()
            .map(|c| {
                let (cone_complex, names) = cone_complex_with_names(&c.k);
                let mut images = BTreeMap::new();
                for dim in 0..cone_complex.grades().len() {
                    for key in cone_complex.keys(dim) {
                        images.insert(
                            names[dim][key.index].clone(),
                            form_to_expr(&p.base, c.map.image_of_key(key)),
                        );
                    }
                }
                ConeRepr { k: complex_to_repr(&c.k), images }
            })
            .collect(),
    }
}

pub fn pattern_from_repr(repr: &PatternRepr) -> Result<CategoricalPattern, Error> {
    let base = complex_from_repr(&repr.base)?;
    let names = name_table(&repr.base)?;
    let marked: BTreeSet<SimplexForm> =
        repr.marked.iter().map(|e| parse_expr(&names, e)).collect::<Result<_, _>>()?;
    let scaled: BTreeSet<SimplexForm> =
        repr.scaled.iter().map(|e| parse_expr(&names, e)).collect::<Result<_, _>>()?;
    let mut cones = Vec::new();
    for c in &repr.cones {
        let k = complex_from_repr(&c.k)?;
        let (cone_complex, cone_names) = cone_complex_with_names(&k);
        let mut images: Vec<Vec<SimplexForm>> = Vec::new();
        for dim in 0..cone_complex.grades().len() {
            let mut row = Vec::new();
            for key in cone_complex.keys(dim) {
                let name = &cone_names[dim][key.index];
                let expr = c
                    .images
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("missing cone image for '{name}'")))?;
                row.push(parse_expr(&names, expr)?);
            }
            images.push(row);
        }
        let map = SimplicialMap::new(cone_complex, base.clone(), images)?;
        cones.push(Cone::new(k, map)?);
    }
    Ok(CategoricalPattern { base, marked, scaled, cones })
}

// ---------------------------------------------------------------------------
// Lifting squares, witnesses, verdicts
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquareRepr {
    pub inclusion: MapRepr,
    pub top: MapRepr,
    pub bottom: MapRepr,
    pub projection: MapRepr,
}

pub fn square_to_repr(p: &LiftingProblem) -> SquareRepr {
    SquareRepr {
        inclusion: map_to_repr(&p.inclusion),
        top: map_to_repr(&p.top),
        bottom: map_to_repr(&p.bottom),
        projection: map_to_repr(&p.projection),
    }
}

pub fn square_from_repr(repr: &SquareRepr) -> Result<LiftingProblem, Error> {
    LiftingProblem::new(
        map_from_repr(&repr.inclusion)?,
        map_from_repr(&repr.top)?,
        map_from_repr(&repr.bottom)?,
        map_from_repr(&repr.projection)?,
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessRepr {
    Square {
        square: SquareRepr,
    },
    NoCocartesianLift {
        projection: MapRepr,
        base_edge: String,
        total_vertex: String,
        dim_bound: usize,
    },
    NonCocartesianEdge {
        edge: String,
        square: SquareRepr,
    },
    NoEquivalenceLift {
        projection: MapRepr,
        base_edge: String,
        total_vertex: String,
        dim_bound: usize,
    },
    NoInitialVertex {
        per_vertex: Vec<(String, SquareRepr)>,
    },
    NotContractibleFiber {
        projection: MapRepr,
        base_simplex: String,
        total_edge: String,
        fiber: ComplexRepr,
        reason: String,
    },
    MarkingMismatch {
        edge: String,
        detail: String,
    },
    Item {
        item: String,
        inner: Box<WitnessRepr>,
    },
}

pub fn witness_to_repr(w: &Witness) -> WitnessRepr {
    match w {
        Witness::Square(square) => WitnessRepr::Square { square: square_to_repr(square) },
        Witness::NoCocartesianLift { projection, base_edge, total_vertex, dim_bound } => {
            WitnessRepr::NoCocartesianLift {
                projection: map_to_repr(projection),
                base_edge: form_to_expr(projection.target(), base_edge),
                total_vertex: projection.source().name(*total_vertex),
                dim_bound: *dim_bound,
            }
        }
        Witness::NonCocartesianEdge { edge, square } => WitnessRepr::NonCocartesianEdge {
            edge: form_to_expr(square.projection.source(), edge),
            square: square_to_repr(square),
        },
        Witness::NoEquivalenceLift { projection, base_edge, total_vertex, dim_bound } => {
            WitnessRepr::NoEquivalenceLift {
                projection: map_to_repr(projection),
                base_edge: form_to_expr(projection.target(), base_edge),
                total_vertex: projection.source().name(*total_vertex),
                dim_bound: *dim_bound,
            }
        }
        Witness::NoInitialVertex { per_vertex } => WitnessRepr::NoInitialVertex {
            per_vertex: per_vertex
                .iter()
                .map(|(v, sq)| (sq.top.target().name(*v), square_to_repr(sq)))
                .collect(),
        },
        Witness::NotContractibleFiber { projection, base_simplex, total_edge, fiber, reason } => {
            WitnessRepr::NotContractibleFiber {
                projection: map_to_repr(projection),
                base_simplex: form_to_expr(projection.target(), base_simplex),
                total_edge: form_to_expr(projection.source(), total_edge),
                fiber: complex_to_repr(fiber),
                reason: reason.clone(),
            }
        }
        Witness::MarkingMismatch { edge, detail } => WitnessRepr::MarkingMismatch {
            edge: format!("{edge:?}"),
            detail: detail.clone(),
        },
        Witness::Item { item, inner } => WitnessRepr::Item {
            item: item.clone(),
            inner: Box::new(witness_to_repr(inner)),
        },
    }
}

/// Re-verify a serialized witness. `None` when the witness kind is not
/// self-contained (marking mismatches re-verify through their job report).
pub fn replay_witness(repr: &WitnessRepr) -> Option<Result<bool, Error>> {
    match repr {
        WitnessRepr::Square { square } => Some(
            square_from_repr(square).map(|problem| extend(&problem).is_none()),
        ),
        WitnessRepr::NonCocartesianEdge { square, .. } => Some(
            square_from_repr(square).map(|problem| extend(&problem).is_none()),
        ),
        WitnessRepr::NoCocartesianLift { projection, base_edge, total_vertex, dim_bound } => {
            Some((|| {
                let p = map_from_repr(projection)?;
                let names = name_table(&projection.target)?;
                let eta = parse_expr(&names, base_edge)?;
                let source_names = name_table(&projection.source)?;
                let x = *source_names
                    .get(total_vertex)
                    .ok_or_else(|| Error::Parse("unknown vertex".into()))?;
                let total = p.source().clone();
                let found = total.all_forms(1).into_iter().any(|e| {
                    total.vertex(&e, 0) == x
                        && p.apply(&e) == eta
                        && crate::fibration::is_cocartesian_edge(&p, &e, *dim_bound).holds()
                });
                Ok(!found)
            })())
        }
        WitnessRepr::NoEquivalenceLift { projection, base_edge, total_vertex, dim_bound } => {
            Some((|| {
                let p = map_from_repr(projection)?;
                let names = name_table(&projection.target)?;
                let f = parse_expr(&names, base_edge)?;
                let source_names = name_table(&projection.source)?;
                let x = *source_names
                    .get(total_vertex)
                    .ok_or_else(|| Error::Parse("unknown vertex".into()))?;
                let total_h = crate::fibration::homotopy_category(p.source(), *dim_bound)?;
                let total = p.source().clone();
                let found = total.all_forms(1).into_iter().any(|phi| {
                    total.vertex(&phi, 0) == x && p.apply(&phi) == f && total_h.is_equivalence(&phi)
                });
                Ok(!found)
            })())
        }
        WitnessRepr::NoInitialVertex { per_vertex } => Some((|| {
            for (_, sq) in per_vertex {
                let problem = square_from_repr(sq)?;
                if extend(&problem).is_some() {
                    return Ok(false);
                }
            }
            Ok(!per_vertex.is_empty())
        })()),
        WitnessRepr::NotContractibleFiber { projection, base_simplex, total_edge, fiber, .. } => {
            Some((|| {
                let p = map_from_repr(projection)?;
                let base_names = name_table(&projection.target)?;
                let source_names = name_table(&projection.source)?;
                let sigma = parse_expr(&base_names, base_simplex)?;
                let edge = parse_expr(&source_names, total_edge)?;
                let stored = complex_from_repr(fiber)?;
                let fibered = crate::constructions::FiberedComplex::new(p);
                let middle = fibered.base.vertex(&sigma, 1);
                let bound = fibered.total.dim().unwrap_or(0);
                let space =
                    crate::flatness::factorization_space(&fibered, &edge, middle, bound)?;
                if !crate::complex::are_isomorphic(&space.complex, &stored) {
                    return Ok(false);
                }
                let verdict = crate::flatness::is_weakly_contractible(
                    &space.complex,
                    &crate::flatness::Budgets::default(),
                );
                Ok(matches!(
                    verdict.status,
                    crate::flatness::ContractibilityStatus::NotContractible
                ))
            })())
        }
        WitnessRepr::MarkingMismatch { .. } => None,
        WitnessRepr::Item { inner, .. } => replay_witness(inner),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictRepr {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub squares_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRepr>,
}

pub fn verdict_to_repr(v: &Verdict) -> VerdictRepr {
    match v {
        Verdict::Holds { squares_checked, dim_bound } => VerdictRepr {
            status: "holds".into(),
            squares_checked: Some(*squares_checked),
            dim_bound: Some(*dim_bound),
            reason: None,
            witness: None,
        },
        Verdict::Fails { witness } => VerdictRepr {
            status: "fails".into(),
            squares_checked: None,
            dim_bound: None,
            reason: None,
            witness: Some(witness_to_repr(witness)),
        },
        Verdict::Unknown { reason, dim_bound } => VerdictRepr {
            status: "unknown".into(),
            squares_checked: None,
            dim_bound: Some(*dim_bound),
            reason: Some(reason.clone()),
            witness: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{are_isomorphic, horn_data};
    use crate::hom::{has_rlp, InclusionFamily};

    #[test]
    fn complex_round_trip() {
        for x in [standard_simplex(2), horn_data(2, 0).unwrap().0, standard_simplex(3)] {
            let repr = complex_to_repr(&x);
            let text = serde_json::to_string_pretty(&repr).unwrap();
            let back: ComplexRepr = serde_json::from_str(&text).unwrap();
            let y = complex_from_repr(&back).unwrap();
            assert_eq!(x, y);
            // Serialize-parse-serialize is the identity on the text.
            assert_eq!(text, serde_json::to_string_pretty(&complex_to_repr(&y)).unwrap());
        }
    }

    #[test]
    fn map_round_trip() {
        let d2 = standard_simplex(2);
        let (horn, data) = horn_data(2, 1).unwrap();
        let incl = SimplicialMap::from_inclusion(&horn, &d2, &data);
        let repr = map_to_repr(&incl);
        let back = map_from_repr(&repr).unwrap();
        assert_eq!(incl, back);
    }

    #[test]
    fn parse_rejects_bad_expressions() {
        let d1 = standard_simplex(1);
        let names = name_table(&complex_to_repr(&d1)).unwrap();
        assert!(parse_expr(&names, "s_0 nowhere").is_err());
        assert!(parse_expr(&names, "sx_0 0").is_err());
        assert!(parse_expr(&names, "s_0 s_1 0").is_err());
        assert!(parse_expr(&names, "s_1 s_0 0").is_ok());
    }

    #[test]
    fn witness_survives_serialization() {
        let d1 = standard_simplex(1);
        let p = SimplicialMap::to_point(&d1);
        let verdict = has_rlp(&p, InclusionFamily::LeftHorns, 3);
        let witness = verdict.witness().expect("left lifting fails");
        let repr = witness_to_repr(witness);
        let text = serde_json::to_string(&repr).unwrap();
        let back: WitnessRepr = serde_json::from_str(&text).unwrap();
        let outcome = replay_witness(&back).expect("squares replay").unwrap();
        assert!(outcome);
    }

    #[test]
    fn marked_and_pattern_round_trip() {
        let d1 = standard_simplex(1);
        let marked = MarkedSimplicialSet::sharp(&d1);
        let repr = marked_to_repr(&marked);
        let back = marked_from_repr(&repr).unwrap();
        assert_eq!(marked.marks.len(), back.marks.len());
        let pat = CategoricalPattern::sharp(&d1);
        let repr = pattern_to_repr(&pat);
        let back = pattern_from_repr(&repr).unwrap();
        assert_eq!(pat.marked.len(), back.marked.len());
        assert_eq!(pat.scaled.len(), back.scaled.len());
    }

    #[test]
    fn pattern_with_cone_round_trip() {
        let d1 = standard_simplex(1);
        let tip = standard_simplex(0);
        let cone_complex = join(&tip, &standard_simplex(0)).complex;
        // The unique cone map into the sharp interval hitting the edge.
        let map = crate::hom::enumerate_maps(&cone_complex, &d1)
            .into_iter()
            .find(|m| {
                (0..2).all(|i| {
                    m.image_of_key(SimplexKey::new(0, i)).base.index == i
                })
            })
            .unwrap();
        let pat = CategoricalPattern {
            base: d1.clone(),
            marked: CategoricalPattern::sharp(&d1).marked,
            scaled: CategoricalPattern::sharp(&d1).scaled,
            cones: vec![Cone::new(standard_simplex(0), map).unwrap()],
        };
        assert!(crate::patterns::validate_pattern(&pat).is_empty());
        let repr = pattern_to_repr(&pat);
        let text = serde_json::to_string(&repr).unwrap();
        let back: PatternRepr = serde_json::from_str(&text).unwrap();
        let pat2 = pattern_from_repr(&back).unwrap();
        assert_eq!(pat2.cones.len(), 1);
        assert!(are_isomorphic(&pat2.cones[0].map.source(), pat.cones[0].map.source()));
    }
}
