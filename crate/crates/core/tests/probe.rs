// Scratch probes for the heavier checks (timing and sanity).

use std::time::Instant;

use sset::category::nerve;
use sset::complex::standard_simplex;
use sset::constructions::{arrow_complex, twisted_arrow};
use sset::corpus;
use sset::fibration::{
    check_fibration, is_cartesian_fibration, is_cocartesian_fibration, FibrationKind,
};
use sset::SimplexKey;

#[test]
fn probe_twisted_arrow_left() {
    let t0 = Instant::now();
    let square = nerve(&corpus::square_poset(), 4).complex;
    let t = twisted_arrow(&square, 4);
    println!("twisted arrow built in {:?}, grades {:?}", t0.elapsed(), t.fibered.total.grades());
    let t1 = Instant::now();
    let v = check_fibration(&t.fibered.projection, FibrationKind::Left, 4);
    println!("left check in {:?}: {}", t1.elapsed(), v.status_name());
    assert!(v.holds());
}

#[test]
fn probe_slice_left() {
    let t0 = Instant::now();
    let mut checks = 0;
    for n in corpus::poset_nerves(4, 4) {
        for v in n.complex.keys(0) {
            let s = sset::constructions::slice_under(&n.complex, v, 4).unwrap();
            let verdict = check_fibration(&s.fibered.projection, FibrationKind::Left, 4);
            assert!(verdict.holds());
            checks += 1;
        }
    }
    println!("{} slice checks in {:?}", checks, t0.elapsed());
}

#[test]
fn probe_arrow_complex_cocartesian() {
    let t0 = Instant::now();
    let square = nerve(&corpus::square_poset(), 3).complex;
    let o = arrow_complex(&square, 3);
    println!(
        "arrow complex built in {:?}, grades {:?}",
        t0.elapsed(),
        o.fun.complex.grades()
    );
    let t1 = Instant::now();
    assert!(check_fibration(&o.target_eval, FibrationKind::Inner, 3).holds());
    let v = is_cocartesian_fibration(&o.target_eval, 3);
    println!("target cocartesian in {:?}: {}", t1.elapsed(), v.status_name());
    assert!(v.holds());
    let t2 = Instant::now();
    assert!(check_fibration(&o.source_eval, FibrationKind::Inner, 3).holds());
    let v = is_cartesian_fibration(&o.source_eval, 3);
    println!("source cartesian in {:?}: {}", t2.elapsed(), v.status_name());
    assert!(v.holds());
}

#[test]
fn probe_right_kan_endpoint() {
    let t0 = Instant::now();
    let d1 = standard_simplex(1);
    let phi = sset::simplex_as_map(&d1, &SimplexKey::new(0, 1).form());
    let x = standard_simplex(1);
    let p = sset::constructions::FiberedComplex::new(sset::SimplicialMap::to_point(&x));
    let rk = sset::constructions::right_kan_fibration(&phi, &p, 3).unwrap();
    println!(
        "right kan built in {:?}, grades {:?}, cocartesian {}",
        t0.elapsed(),
        rk.fibered.total.grades(),
        rk.cocartesian.status_name()
    );
    assert!(rk.cocartesian.holds());
    let (fiber, _) = sset::fibration::fiber_over_vertex(&rk.fibered.projection, SimplexKey::new(0, 1));
    assert!(sset::complex::are_isomorphic(&fiber, &x));
}
