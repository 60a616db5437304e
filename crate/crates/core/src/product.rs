//! Degreewise products and fiber products, realized in normal form with
//! their projections.

use crate::map::SimplicialMap;
use crate::realize::{realize, Degreewise, Realization};
use crate::simplex::SimplexForm;
use crate::{Error, SimplicialSet};

/// Pairs of equal-dimensional forms; the degreewise product.
pub struct ProductDescription<'a> {
    pub left: &'a SimplicialSet,
    pub right: &'a SimplicialSet,
    /// Optional fiber-product constraint `f(xi) = g(upsilon)`.
    pub over: Option<(&'a SimplicialMap, &'a SimplicialMap)>,
}

impl Degreewise for ProductDescription<'_> {
    type Simplex = (SimplexForm, SimplexForm);

    fn list(&self, n: usize) -> Vec<(SimplexForm, SimplexForm)> {
        let mut out = Vec::new();
        for xi in self.left.all_forms(n) {
            for ups in self.right.all_forms(n) {
                if let Some((f, g)) = self.over {
                    if f.apply(&xi) != g.apply(&ups) {
                        continue;
                    }
                }
                out.push((xi.clone(), ups));
            }
        }
        out
    }

    fn face(&self, _n: usize, s: &(SimplexForm, SimplexForm), i: usize) -> (SimplexForm, SimplexForm) {
        (self.left.face(&s.0, i), self.right.face(&s.1, i))
    }

    fn degeneracy(
        &self,
        _n: usize,
        s: &(SimplexForm, SimplexForm),
        i: usize,
    ) -> (SimplexForm, SimplexForm) {
        (s.0.degenerate(i), s.1.degenerate(i))
    }
}

pub struct Product {
    pub complex: SimplicialSet,
    pub pr_left: SimplicialMap,
    pub pr_right: SimplicialMap,
    pub realization: Realization<(SimplexForm, SimplexForm)>,
}

impl Product {
    /// The form of a pair of equal-dimensional forms in the product.
    pub fn pair_form(&self, left: &SimplicialSet, right: &SimplicialSet, xi: &SimplexForm, ups: &SimplexForm) -> SimplexForm {
        let desc = ProductDescription { left, right, over: None };
        self.realization.form_of(&desc, xi.dim(), &(xi.clone(), ups.clone()))
    }
}

fn build(
    left: &SimplicialSet,
    right: &SimplicialSet,
    over: Option<(&SimplicialMap, &SimplicialMap)>,
    bound: usize,
) -> Product {
    let desc = ProductDescription { left, right, over };
    let realization = realize(&desc, bound);
    let complex = realization.complex.clone();
    let mut left_images = Vec::with_capacity(complex.grades().len());
    let mut right_images = Vec::with_capacity(complex.grades().len());
    for dim in 0..complex.grades().len() {
        let mut lrow = Vec::with_capacity(complex.grade_count(dim));
        let mut rrow = Vec::with_capacity(complex.grade_count(dim));
        for key in complex.keys(dim) {
            let (xi, ups) = realization.rep(key);
            lrow.push(xi.clone());
            rrow.push(ups.clone());
        }
        left_images.push(lrow);
        right_images.push(rrow);
    }
    let pr_left = SimplicialMap::new(complex.clone(), left.clone(), left_images)
        .expect("product projection is simplicial");
    let pr_right = SimplicialMap::new(complex.clone(), right.clone(), right_images)
        .expect("product projection is simplicial");
    Product { complex, pr_left, pr_right, realization }
}

/// Binary product, complete: the dimension is bounded by
/// `dim(left) + dim(right)`.
pub fn product(left: &SimplicialSet, right: &SimplicialSet) -> Product {
    let bound = match (left.dim(), right.dim()) {
        (Some(a), Some(b)) => a + b,
        _ => 0,
    };
    build(left, right, None, bound)
}

/// Fiber product of `f` and `g` over their common codomain, complete.
pub fn pullback(f: &SimplicialMap, g: &SimplicialMap) -> Result<Product, Error> {
    if f.target() != g.target() {
        return Err(Error::Precondition("pullback needs a common codomain".into()));
    }
    let bound = match (f.source().dim(), g.source().dim()) {
        (Some(a), Some(b)) => a + b,
        _ => 0,
    };
    Ok(build(f.source(), g.source(), Some((f, g)), bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{are_isomorphic, standard_simplex};
    use crate::map::SimplicialMap;

    #[test]
    fn interval_square_counts() {
        let d1 = standard_simplex(1);
        let p = product(&d1, &d1);
        assert_eq!(p.complex.grades(), &[4, 5, 2]);
        assert!(p.complex.validate().is_valid());
    }

    #[test]
    fn product_with_point_is_identity_shaped() {
        let d2 = standard_simplex(2);
        let pt = standard_simplex(0);
        let p = product(&d2, &pt);
        assert!(are_isomorphic(&p.complex, &d2));
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let d1 = standard_simplex(1);
        let id = SimplicialMap::identity(&d1);
        let pb = pullback(&id, &id).unwrap();
        assert!(are_isomorphic(&pb.complex, &d1));
    }

    #[test]
    fn pullback_requires_common_codomain() {
        let d1 = standard_simplex(1);
        let id = SimplicialMap::identity(&d1);
        let to_pt = SimplicialMap::to_point(&d1);
        assert!(pullback(&id, &to_pt).is_err());
    }
}
