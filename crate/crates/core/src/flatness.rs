//! Flatness of inner fibrations via the 2-simplex criterion: every edge
//! over the long edge of a base 2-simplex must have a weakly contractible
//! factorization space through the middle vertex.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::collapse::{collapse_to_point, replay_collapse};
use crate::complex::SimplicialSet;
use crate::constructions::FiberedComplex;
use crate::fibration::{check_fibration, FibrationKind};
use crate::hom::{Verdict, Witness};
use crate::homology::homology;
use crate::pi1::{edge_path_presentation, nontrivial_finite_quotient, tietze_simplify, verify_quotient};
use crate::realize::{realize, Degreewise, Realization};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

/// Budgets for the contractibility kernel.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub collapse_states: usize,
    pub tietze_passes: usize,
    pub quotient_degree: usize,
    pub quotient_assignments: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            collapse_states: 100_000,
            tietze_passes: 64,
            quotient_degree: 5,
            quotient_assignments: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractibilityStatus {
    Contractible,
    NotContractible,
    Unknown,
}

/// Evidence for a contractibility verdict; certificates replay and
/// refutations recompute.
#[derive(Clone, Debug)]
pub enum ContractibilityEvidence {
    Collapse(Vec<(SimplexKey, SimplexKey)>),
    Empty,
    Homology { dim: usize, betti: usize, torsion: Vec<BigInt> },
    FundamentalGroup { degree: usize, images: Vec<Vec<usize>> },
    Exhausted { reason: String },
}

#[derive(Clone, Debug)]
pub struct ContractibilityVerdict {
    pub status: ContractibilityStatus,
    pub evidence: ContractibilityEvidence,
}

/// The three-valued contractibility pipeline: emptiness, collapse search,
/// reduced homology, then a fundamental-group obstruction.
pub fn is_weakly_contractible(k: &SimplicialSet, budgets: &Budgets) -> ContractibilityVerdict {
    if k.is_empty() {
        return ContractibilityVerdict {
            status: ContractibilityStatus::NotContractible,
            evidence: ContractibilityEvidence::Empty,
        };
    }
    let outcome = collapse_to_point(k, budgets.collapse_states);
    if let Some(sequence) = outcome.sequence {
        return ContractibilityVerdict {
            status: ContractibilityStatus::Contractible,
            evidence: ContractibilityEvidence::Collapse(sequence),
        };
    }
    let groups = homology(k);
    for (dim, g) in groups.iter().enumerate() {
        if !g.is_trivial() {
            return ContractibilityVerdict {
                status: ContractibilityStatus::NotContractible,
                evidence: ContractibilityEvidence::Homology {
                    dim,
                    betti: g.betti,
                    torsion: g.torsion.clone(),
                },
            };
        }
    }
    // Homology vanished, so the complex is connected; look for a
    // fundamental-group obstruction.
    if let Some(mut presentation) = edge_path_presentation(k) {
        tietze_simplify(&mut presentation, budgets.tietze_passes);
        if let Some((degree, images)) = nontrivial_finite_quotient(
            &presentation,
            budgets.quotient_degree,
            budgets.quotient_assignments,
        ) {
            return ContractibilityVerdict {
                status: ContractibilityStatus::NotContractible,
                evidence: ContractibilityEvidence::FundamentalGroup { degree, images },
            };
        }
    }
    ContractibilityVerdict {
        status: ContractibilityStatus::Unknown,
        evidence: ContractibilityEvidence::Exhausted {
            reason: if outcome.budget_exhausted {
                "collapse budget exhausted; no homology or quotient obstruction".to_string()
            } else {
                "no collapse found; no homology or quotient obstruction".to_string()
            },
        },
    }
}

/// Re-verify a contractibility verdict against its complex.
pub fn replay_contractibility(k: &SimplicialSet, verdict: &ContractibilityVerdict) -> bool {
    match (&verdict.status, &verdict.evidence) {
        (ContractibilityStatus::Contractible, ContractibilityEvidence::Collapse(seq)) => {
            replay_collapse(k, seq)
        }
        (ContractibilityStatus::NotContractible, ContractibilityEvidence::Empty) => k.is_empty(),
        (
            ContractibilityStatus::NotContractible,
            ContractibilityEvidence::Homology { dim, betti, torsion },
        ) => homology(k)
            .get(*dim)
            .map(|g| g.betti == *betti && g.torsion == *torsion && !g.is_trivial())
            .unwrap_or(false),
        (
            ContractibilityStatus::NotContractible,
            ContractibilityEvidence::FundamentalGroup { degree, images },
        ) => {
            let Some(mut p) = edge_path_presentation(k) else { return false };
            tietze_simplify(&mut p, Budgets::default().tietze_passes);
            verify_quotient(&p, *degree, images)
        }
        (ContractibilityStatus::Unknown, _) => true,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Factorization spaces
// ---------------------------------------------------------------------------

struct FactorizationDescription<'a> {
    p: &'a FiberedComplex,
    edge: &'a SimplexForm,
    middle: SimplexKey,
}

impl FactorizationDescription<'_> {
    fn constant_middle(&self, n: usize) -> SimplexForm {
        let mut f = self.middle.form();
        for i in 0..n {
            f = f.degenerate(i);
        }
        f
    }
}

impl Degreewise for FactorizationDescription<'_> {
    type Simplex = SimplexForm;

    fn list(&self, n: usize) -> Vec<SimplexForm> {
        let total = &self.p.total;
        let middle: Vec<usize> = (1..=n + 1).collect();
        let target_middle = self.constant_middle(n);
        total
            .all_forms(n + 2)
            .into_iter()
            .filter(|z| {
                total.act(z, &[0, n + 2]) == *self.edge
                    && self.p.projection.apply(&total.act(z, &middle)) == target_middle
            })
            .collect()
    }

    fn face(&self, _n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        self.p.total.face(z, i + 1)
    }

    fn degeneracy(&self, _n: usize, z: &SimplexForm, i: usize) -> SimplexForm {
        z.degenerate(i + 1)
    }
}

pub struct FactorizationSpace {
    pub complex: SimplicialSet,
    pub exact: bool,
}

/// The space of factorizations of `edge` through the fiber over `middle`:
/// n-simplices are (n+2)-simplices of the total space whose long edge is
/// `edge` and whose inner face projects to the constant simplex at
/// `middle`.
pub fn factorization_space(
    p: &FiberedComplex,
    edge: &SimplexForm,
    middle: SimplexKey,
    dim_bound: usize,
) -> Result<FactorizationSpace, Error> {
    if edge.dim() != 1 || !p.total.contains(edge.base) {
        return Err(Error::Precondition("factorization requires an edge of the total space".into()));
    }
    if middle.dim != 0 || !p.base.contains(middle) {
        return Err(Error::Precondition("factorization requires a base vertex".into()));
    }
    let desc = FactorizationDescription { p, edge, middle };
    let realization: Realization<SimplexForm> = realize(&desc, dim_bound);
    let exact = dim_bound >= p.total.dim().unwrap_or(0);
    Ok(FactorizationSpace { complex: realization.complex, exact })
}

// ---------------------------------------------------------------------------
// Flatness
// ---------------------------------------------------------------------------

/// The 2-simplex flatness criterion for a verified inner fibration: for
/// every nondegenerate base 2-simplex and every edge over its long edge,
/// the factorization space through the middle vertex must be weakly
/// contractible. Degenerate base 2-simplices are vacuous.
pub fn is_flat(p: &FiberedComplex, dim_bound: usize, budgets: &Budgets) -> Verdict {
    let inner = check_fibration(&p.projection, FibrationKind::Inner, dim_bound);
    if !inner.holds() {
        return inner;
    }
    let fiber_bound = p.total.dim().unwrap_or(0);
    let mut checked = 0usize;
    let mut unknown: Option<String> = None;
    let mut seen: HashMap<(SimplexForm, SimplexKey, SimplexForm), ()> = HashMap::new();
    for sigma in p.base.keys(2) {
        let sform = sigma.form();
        let long = p.base.act(&sform, &[0, 2]);
        let middle = p.base.vertex(&sform, 1);
        for edge in p.total.all_forms(1) {
            if p.projection.apply(&edge) != long {
                continue;
            }
            if seen.insert((long.clone(), middle, edge.clone()), ()).is_some() {
                continue;
            }
            checked += 1;
            let space = factorization_space(p, &edge, middle, fiber_bound)
                .expect("edge and vertex were validated");
            let verdict = is_weakly_contractible(&space.complex, budgets);
            match verdict.status {
                ContractibilityStatus::Contractible => {}
                ContractibilityStatus::NotContractible => {
                    return Verdict::Fails {
                        witness: Box::new(Witness::NotContractibleFiber {
                            projection: p.projection.clone(),
                            base_simplex: sform,
                            total_edge: edge,
                            fiber: space.complex,
                            reason: format!("{:?}", verdict.evidence),
                        }),
                    };
                }
                ContractibilityStatus::Unknown => {
                    if unknown.is_none() {
                        unknown = Some(format!(
                            "contractibility unknown for the factorization space of {edge:?}"
                        ));
                    }
                }
            }
        }
    }
    match unknown {
        Some(reason) => Verdict::Unknown { reason, dim_bound },
        None => Verdict::Holds { squares_checked: checked, dim_bound },
    }
}

/// Flatness of a bare projection map.
pub fn is_flat_projection(
    p: &crate::map::SimplicialMap,
    dim_bound: usize,
    budgets: &Budgets,
) -> Verdict {
    is_flat(&FiberedComplex::new(p.clone()), dim_bound, budgets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{simplex_key_of_subset, standard_simplex, subcomplex_generated};
    use crate::map::SimplicialMap;

    #[test]
    fn identity_on_triangle_has_point_factorizations() {
        let d2 = standard_simplex(2);
        let p = FiberedComplex::new(SimplicialMap::identity(&d2));
        let edge = simplex_key_of_subset(2, &[0, 2]).form();
        let space = factorization_space(&p, &edge, SimplexKey::new(0, 1), 2).unwrap();
        assert_eq!(space.complex.grades(), &[1]);
        let verdict = is_weakly_contractible(&space.complex, &Budgets::default());
        assert_eq!(verdict.status, ContractibilityStatus::Contractible);
    }

    #[test]
    fn contractibility_pipeline_examples() {
        let budgets = Budgets::default();
        for n in 0..=3 {
            let v = is_weakly_contractible(&standard_simplex(n), &budgets);
            assert_eq!(v.status, ContractibilityStatus::Contractible);
            assert!(replay_contractibility(&standard_simplex(n), &v));
        }
        let (b2, _) = crate::complex::boundary_data(2);
        let v = is_weakly_contractible(&b2, &budgets);
        assert_eq!(v.status, ContractibilityStatus::NotContractible);
        assert!(matches!(v.evidence, ContractibilityEvidence::Homology { dim: 1, .. }));
        assert!(replay_contractibility(&b2, &v));
        let (b1, _) = crate::complex::boundary_data(1);
        let v = is_weakly_contractible(&b1, &budgets);
        assert_eq!(v.status, ContractibilityStatus::NotContractible);
        assert!(replay_contractibility(&b1, &v));
        let v = is_weakly_contractible(&SimplicialSet::empty(), &budgets);
        assert_eq!(v.status, ContractibilityStatus::NotContractible);
        assert!(matches!(v.evidence, ContractibilityEvidence::Empty));
    }

    #[test]
    fn identity_fibrations_are_flat() {
        let d2 = standard_simplex(2);
        let p = FiberedComplex::new(SimplicialMap::identity(&d2));
        assert!(is_flat(&p, 3, &Budgets::default()).holds());
    }

    #[test]
    fn flatness_is_vacuous_over_one_skeletal_bases() {
        let d1 = standard_simplex(1);
        let p = FiberedComplex::new(SimplicialMap::to_point(&d1).compose(&SimplicialMap::identity(&d1)).unwrap());
        // Base is a point: no nondegenerate 2-simplices at all.
        let v = is_flat(&p, 3, &Budgets::default());
        match v {
            Verdict::Holds { squares_checked, .. } => assert_eq!(squares_checked, 0),
            other => panic!("expected a vacuous pass, got {other:?}"),
        }
    }

    #[test]
    fn missing_filler_gives_empty_factorization_fiber() {
        // The subcomplex of the triangle generated by the long edge,
        // included over the triangle: inner fibration with an edge over
        // the long edge and an empty factorization space.
        let d2 = standard_simplex(2);
        let e02 = simplex_key_of_subset(2, &[0, 2]);
        let (sub, data) = subcomplex_generated(&d2, &[e02]);
        let incl = SimplicialMap::from_inclusion(&sub, &d2, &data);
        let p = FiberedComplex::new(incl);
        assert!(check_fibration(&p.projection, FibrationKind::Inner, 3).holds());
        let v = is_flat(&p, 3, &Budgets::default());
        match v {
            Verdict::Fails { witness } => match *witness {
                Witness::NotContractibleFiber { fiber, .. } => assert!(fiber.is_empty()),
                other => panic!("unexpected witness {other:?}"),
            },
            other => panic!("expected flatness failure, got {other:?}"),
        }
    }
}
