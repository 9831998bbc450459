use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use webcurv::algebra::{gcd, parse_poly, resultant, Ring};
use webcurv::analysis::{inflection_divisor, radial_census};
use webcurv::catalog::by_name;
use webcurv::legendre::legendre_affine;
use webcurv::web::{affine_vars, discriminant, foliation_to_web, plane_vars};

fn algebra(c: &mut Criterion) {
    let av = affine_vars();
    let f = parse_poly("x^3*p^3 - 3*x^2*y*p^2 + 3*x*y^2*p - x*p^3 - y^3 + y", &av, Ring::Rational).unwrap();
    c.bench_function("resultant Leg F3", |b| b.iter(|| resultant(black_box(&f), &f.derivative(2), 2).unwrap()));

    let pv = plane_vars();
    let a = parse_poly("(x^2 - y + 3)*(x*y - 1)^2*(x - 2*y)", &pv, Ring::Rational).unwrap();
    let b2 = parse_poly("(x^2 - y + 3)*(x + y)^3", &pv, Ring::Rational).unwrap();
    c.bench_function("gcd bivariate", |b| b.iter(|| gcd(black_box(&a), black_box(&b2)).unwrap()));

    let leg4 = legendre_affine(&foliation_to_web(&by_name("F4").unwrap()).unwrap()).unwrap();
    c.bench_function("discriminant Leg F4", |b| b.iter(|| discriminant(black_box(&leg4), false).unwrap()));

    let h5 = by_name("H5").unwrap();
    c.bench_function("inflection divisor H5", |b| b.iter(|| inflection_divisor(black_box(&h5)).unwrap()));

    let h4 = by_name("H4").unwrap();
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    g.bench_function("radial census H4", |b| b.iter(|| radial_census(black_box(&h4)).unwrap()));
    g.finish();
}

criterion_group!(benches, algebra);
criterion_main!(benches);
