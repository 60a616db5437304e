//! Maps of simplicial sets: per-nondegenerate-simplex assignments of
//! equal-dimensional forms, compatible with faces.

use crate::complex::{standard_simplex, subset_of_simplex_key, SimplicialSet};
use crate::simplex::{SimplexForm, SimplexKey};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialSet,
    target: SimplicialSet,
    /// `images[dim][index]` is the image form of the nondegenerate simplex
    /// `(dim, index)` of the source.
    images: Vec<Vec<SimplexForm>>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialSet,
        target: SimplicialSet,
        images: Vec<Vec<SimplexForm>>,
    ) -> Result<SimplicialMap, Error> {
        let map = SimplicialMap { source, target, images };
        map.check()?;
        Ok(map)
    }

    fn check(&self) -> Result<(), Error> {
        if self.images.len() != self.source.grades().len() {
            return Err(Error::InvalidMap("image table does not match source grades".into()));
        }
        for dim in 0..self.source.grades().len() {
            if self.images[dim].len() != self.source.grade_count(dim) {
                return Err(Error::InvalidMap(format!(
                    "dimension {dim}: {} images for {} simplices",
                    self.images[dim].len(),
                    self.source.grade_count(dim)
                )));
            }
            for index in 0..self.source.grade_count(dim) {
                let img = &self.images[dim][index];
                if !self.target.contains(img.base) || img.dim() != dim || !img.word_is_valid() {
                    return Err(Error::InvalidMap(format!(
                        "image of ({dim},{index}) is not a valid {dim}-form of the target"
                    )));
                }
            }
        }
        for dim in 1..self.source.grades().len() {
            for index in 0..self.source.grade_count(dim) {
                let key = SimplexKey::new(dim, index);
                for i in 0..=dim {
                    let lhs = self.target.face(&self.images[dim][index], i);
                    let rhs = self.apply(self.source.face_of_key(key, i));
                    if lhs != rhs {
                        return Err(Error::InvalidMap(format!(
                            "face {i} of ({dim},{index}) does not commute"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &SimplicialSet {
        &self.source
    }

    pub fn target(&self) -> &SimplicialSet {
        &self.target
    }

    pub fn image_of_key(&self, key: SimplexKey) -> &SimplexForm {
        &self.images[key.dim][key.index]
    }

    pub fn images(&self) -> &[Vec<SimplexForm>] {
        &self.images
    }

    /// Image of an arbitrary form: the image of the base with the word
    /// re-applied outside, renormalized.
    pub fn apply(&self, form: &SimplexForm) -> SimplexForm {
        let mut out = self.images[form.base.dim][form.base.index].clone();
        for &i in form.word.iter().rev() {
            out = out.degenerate(i);
        }
        out
    }

    pub fn identity(x: &SimplicialSet) -> SimplicialMap {
        let images = (0..x.grades().len())
            .map(|dim| x.keys(dim).map(SimplexKey::form).collect())
            .collect();
        SimplicialMap { source: x.clone(), target: x.clone(), images }
    }

    /// The unique map to the point.
    pub fn to_point(x: &SimplicialSet) -> SimplicialMap {
        let point = standard_simplex(0);
        let vertex = SimplexKey::new(0, 0).form();
        let images = (0..x.grades().len())
            .map(|dim| {
                x.keys(dim)
                    .map(|_| {
                        let mut f = vertex.clone();
                        for i in 0..dim {
                            f = f.degenerate(i);
                        }
                        f
                    })
                    .collect()
            })
            .collect();
        SimplicialMap { source: x.clone(), target: point, images }
    }

    /// Composition `self` after `first`.
    pub fn compose(&self, first: &SimplicialMap) -> Result<SimplicialMap, Error> {
        if first.target != self.source {
            return Err(Error::InvalidMap("composition targets do not match".into()));
        }
        let images = (0..first.source.grades().len())
            .map(|dim| first.source.keys(dim).map(|k| self.apply(first.image_of_key(k))).collect())
            .collect();
        Ok(SimplicialMap { source: first.source.clone(), target: self.target.clone(), images })
    }

    /// Build a map from inclusion data produced by `subcomplex_generated`:
    /// per-dimension lists of ambient keys.
    pub fn from_inclusion(
        sub: &SimplicialSet,
        ambient: &SimplicialSet,
        included: &[Vec<SimplexKey>],
    ) -> SimplicialMap {
        let images = (0..sub.grades().len())
            .map(|dim| (0..sub.grade_count(dim)).map(|i| included[dim][i].form()).collect())
            .collect();
        SimplicialMap { source: sub.clone(), target: ambient.clone(), images }
    }

    /// Whether the map is injective on nondegenerate simplices with
    /// nondegenerate images (a monomorphism of simplicial sets).
    pub fn is_monomorphism(&self) -> bool {
        for dim in 0..self.source.grades().len() {
            let mut seen = std::collections::BTreeSet::new();
            for index in 0..self.source.grade_count(dim) {
                let img = &self.images[dim][index];
                if img.is_degenerate() || !seen.insert(img.base) {
                    return false;
                }
            }
        }
        true
    }

    /// Relabel the codomain keys (`assign[dim][old] = new`) along an
    /// isomorphism of the target with `new_target`.
    pub fn retarget(
        &self,
        new_target: &SimplicialSet,
        assign: &[Vec<usize>],
    ) -> SimplicialMap {
        let images = self
            .images
            .iter()
            .map(|row| row.iter().map(|f| SimplicialSet::relabel_form(f, assign)).collect())
            .collect();
        SimplicialMap { source: self.source.clone(), target: new_target.clone(), images }
    }
}

/// The map `standard_simplex(n) -> X` classifying an n-form of `X`.
pub fn simplex_as_map(x: &SimplicialSet, form: &SimplexForm) -> SimplicialMap {
    let n = form.dim();
    let delta = standard_simplex(n);
    let images = (0..=n)
        .map(|dim| {
            delta
                .keys(dim)
                .map(|k| x.act(form, &subset_of_simplex_key(n, k)))
                .collect()
        })
        .collect();
    SimplicialMap { source: delta, target: x.clone(), images }
}

/// The n-form classified by a map from the standard n-simplex.
pub fn map_as_simplex(map: &SimplicialMap) -> SimplexForm {
    let n = map.source.dim().expect("domain must be a standard simplex");
    map.image_of_key(SimplexKey::new(n, 0)).clone()
}

/// The opposite of a map, between the opposite complexes.
pub fn opposite_map(
    map: &SimplicialMap,
    op_source: &SimplicialSet,
    op_target: &SimplicialSet,
) -> SimplicialMap {
    // Opposite complexes share keys with the originals, so images transfer
    // by taking the opposite of each image form.
    let images = map
        .images
        .iter()
        .map(|row| row.iter().map(crate::complex::opposite_form).collect())
        .collect();
    SimplicialMap { source: op_source.clone(), target: op_target.clone(), images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{horn_data, opposite, standard_simplex, subcomplex_generated};

    #[test]
    fn identity_and_composition() {
        let d2 = standard_simplex(2);
        let id = SimplicialMap::identity(&d2);
        assert_eq!(id.compose(&id).unwrap(), id);
        let p = SimplicialMap::to_point(&d2);
        assert_eq!(p.compose(&id).unwrap(), p);
    }

    #[test]
    fn simplex_map_round_trip() {
        let d2 = standard_simplex(2);
        for form in d2.all_forms(3) {
            let m = simplex_as_map(&d2, &form);
            assert_eq!(map_as_simplex(&m), form);
        }
    }

    #[test]
    fn inclusion_is_mono() {
        let d2 = standard_simplex(2);
        let (horn, data) = horn_data(2, 1).unwrap();
        let incl = SimplicialMap::from_inclusion(&horn, &d2, &data);
        assert!(incl.is_monomorphism());
        let (sub, data) = subcomplex_generated(&d2, &[SimplexKey::new(2, 0)]);
        let incl = SimplicialMap::from_inclusion(&sub, &d2, &data);
        assert!(incl.is_monomorphism());
    }

    #[test]
    fn opposite_map_commutes() {
        let d2 = standard_simplex(2);
        let (horn, data) = horn_data(2, 0).unwrap();
        let incl = SimplicialMap::from_inclusion(&horn, &d2, &data);
        let op = opposite_map(&incl, &opposite(&horn), &opposite(&d2));
        // Validity is the whole assertion: faces commute in the opposite.
        op.check().unwrap();
    }
}
