use webcurv::analysis::{convexity_report, radial_census};
use webcurv::catalog::by_name;
use webcurv::curvature::{flatness_check, Verdict};
use webcurv::legendre::legendre_affine;
use webcurv::web::foliation_to_web;

#[test]
fn dual_webs_are_flat_for_every_seed() {
    for name in ["F3", "F4", "F5", "F6", "H4", "H5", "H7", "pencil:1/3", "pencil:1", "pencil:7/2"] {
        let w = legendre_affine(&foliation_to_web(&by_name(name).unwrap()).unwrap()).unwrap();
        for seed in [1, 2, 3, 7, 42] {
            let v = flatness_check(&w, 200, seed, None).unwrap();
            assert_eq!(v.verdict, Verdict::Flat, "{name} seed {seed}: max {:e} threshold {:e}", v.max_abs_k, v.threshold);
        }
    }
}

#[test]
fn catalog_is_reduced_convex() {
    for (name, lines) in [("F2", 6), ("F3", 9), ("F4", 12), ("F5", 15), ("F6", 18), ("H4", 12), ("H5", 15), ("H7", 21)] {
        let r = convexity_report(&by_name(name).unwrap()).unwrap();
        assert!(r.convex && r.reduced, "{name}");
        assert_eq!(r.line_count, lines, "{name}");
        assert!(r.lines.iter().all(|l| l.invariant && l.multiplicity == 1), "{name}");
    }
}

#[test]
fn hessian_census_by_tangency_order() {
    let c = radial_census(&by_name("H7").unwrap()).unwrap();
    // nine points of order 2 and twelve of order 3, that is tangency 3 and 4
    assert_eq!(c.counts.iter().map(|(a, b)| (*a, *b)).collect::<Vec<_>>(), vec![(2, 9), (3, 12)]);
    assert_eq!(c.nu_counts.iter().map(|(a, b)| (*a, *b)).collect::<Vec<_>>(), vec![(3, 9), (4, 12)]);
    assert_eq!((c.weighted, c.bound), (54, 54));
    // counting by tangency order overshoots the bound
    assert_eq!(c.weighted_nu, 75);
    assert!(!c.within_bound_nu);
}
