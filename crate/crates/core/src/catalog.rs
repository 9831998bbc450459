//! Explicit foliations and webs with known invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{parse_poly, MultiPoly, Ring, Scalar};
use crate::error::{Error, Result};
use crate::web::{biproj_vars, plane_vars, proj_vars, Foliation, ProjWeb};

/// `(x^d - x) d/dx + (y^d - y) d/dy`.
pub fn fermat_foliation(d: u32) -> Result<Foliation> {
    if d < 2 {
        return Err(Error::Usage("the Fermat foliation needs d >= 2".into()));
    }
    Foliation::parse(&format!("x^{d} - x"), &format!("y^{d} - y"), Ring::Rational)
}

fn pp(s: &str) -> MultiPoly {
    parse_poly(s, &proj_vars(), Ring::Rational).expect("static expression")
}

/// `X(num) den - num X(den) = 0`, exactly.
pub fn is_first_integral(f: &Foliation, num: &MultiPoly, den: &MultiPoly) -> bool {
    (&(&f.apply(num) * den) - &(num * &f.apply(den))).is_zero()
}

/// `z^(d-1) (y^(d-1) - x^(d-1)) / (y^(d-1) (x^(d-1) - z^(d-1)))`.
pub fn fermat_first_integral(d: u32) -> (MultiPoly, MultiPoly) {
    let e = d - 1;
    (pp(&format!("z^{e}*(y^{e} - x^{e})")), pp(&format!("y^{e}*(x^{e} - z^{e})")))
}

/// The alternative normalization `x^(d-1) (y^(d-1) - z^(d-1)) / (y^(d-1) (x^(d-1) - z^(d-1)))`.
pub fn fermat_first_integral_alias(d: u32) -> (MultiPoly, MultiPoly) {
    let e = d - 1;
    (pp(&format!("x^{e}*(y^{e} - z^{e})")), pp(&format!("y^{e}*(x^{e} - z^{e})")))
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstIntegralReport {
    pub d: u32,
    pub main: bool,
    pub alias: bool,
    /// Coordinate permutations (images of `x, y, z`) under which the alias is
    /// a first integral.
    pub alias_permutations: Vec<[usize; 3]>,
}

pub fn fermat_first_integral_report(d: u32) -> Result<FirstIntegralReport> {
    let f = fermat_foliation(d)?;
    let (n, m) = fermat_first_integral(d);
    let (an, am) = fermat_first_integral_alias(d);
    let pv = proj_vars();
    let mut perms = Vec::new();
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let images: Vec<_> = perm.iter().map(|&i| MultiPoly::var(&pv, i)).collect();
        if is_first_integral(&f, &an.compose(&images), &am.compose(&images)) {
            perms.push(perm);
        }
    }
    Ok(FirstIntegralReport {
        d,
        main: is_first_integral(&f, &n, &m),
        alias: perms.contains(&[0, 1, 2]),
        alias_permutations: perms,
    })
}

pub fn z0() -> Foliation {
    Foliation::parse("(x^3 - 1)*x", "(y^3 - 1)*y", Ring::Rational).expect("static")
}

pub fn z1() -> Foliation {
    Foliation::parse("(x^3 - 1)*y^2", "(y^3 - 1)*x^2", Ring::Rational).expect("static")
}

/// `Z_0 + t Z_1`.
pub fn fermat_pencil4(t: &Scalar) -> Result<Foliation> {
    let a = z0();
    let b = z1();
    Foliation::affine(a.a() + &b.a().scale(t), a.b() + &b.b().scale(t))
}

/// The 1-form `f dg - g df` with `f = x^3 + y^3 + z^3`, `g = 3xyz`.
pub fn hesse_h4() -> Foliation {
    let f = pp("x^3 + y^3 + z^3");
    let g = pp("3*x*y*z");
    let comp = |i: usize| &(&f * &g.derivative(i)) - &(&g * &f.derivative(i));
    Foliation::from_one_form(&comp(0), &comp(1), &comp(2)).expect("static")
}

/// The degree 5 foliation over `Q(sqrt 5)` whose invariant lines form the
/// icosahedral arrangement.
pub fn hilbert_h5() -> Foliation {
    let ring = Ring::QuadExt(5);
    let pv = plane_vars();
    let a = parse_poly("(x^2 - 1)*(x^2 - (sqrt(5) - 2)^2)*(x + sqrt(5)*y)", &pv, ring).expect("static");
    let b = parse_poly("(y^2 - 1)*(y^2 - (sqrt(5) - 2)^2)*(y + sqrt(5)*x)", &pv, ring).expect("static");
    Foliation::affine(a, b).expect("static")
}

pub fn hessian_h7() -> Foliation {
    Foliation::parse("(x^3 - 1)*(x^3 + 7*y^3 + 1)*x", "(y^3 - 1)*(y^3 + 7*x^3 + 1)*y", Ring::Rational)
        .expect("static")
}

/// `(-d^2 + 5d - 8) / 2`.
pub fn foliated_genus(d: u32) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::Usage("the foliated genus formula needs d >= 2".into()));
    }
    let d = BigInt::from(d);
    let num = -(&d * &d) + BigInt::from(5) * &d - BigInt::from(8);
    Ok(BigRational::new(num, BigInt::from(2)))
}

/// `e^(2 i pi m / q)`, exactly when it lies in a quadratic field.
fn root_of_unity(q: u32, m: u32) -> Scalar {
    let m = m % q;
    let half = |a: i64, b: i64, d: i64| Scalar::quad(BigRational::new(a.into(), 2.into()), BigRational::new(b.into(), 2.into()), d);
    match (q, m) {
        (_, 0) => Scalar::one(),
        (2, 1) => Scalar::int(-1),
        (3, 1) => half(-1, 1, -3),
        (3, 2) => half(-1, -1, -3),
        (4, 1) => Scalar::quad(BigRational::zero(), BigRational::from_integer(1.into()), -1),
        (4, 2) => Scalar::int(-1),
        (4, 3) => Scalar::quad(BigRational::zero(), BigRational::from_integer((-1).into()), -1),
        (6, 1) => half(1, 1, -3),
        (6, 2) => half(-1, 1, -3),
        (6, 3) => Scalar::int(-1),
        (6, 4) => half(-1, -1, -3),
        (6, 5) => half(1, -1, -3),
        _ => {
            let t = 2.0 * std::f64::consts::PI * m as f64 / q as f64;
            Scalar::complex(t.cos(), t.sin())
        }
    }
}

/// Largest allowed `|p| q^2` for [`triangular_web`].
pub const TRIANGULAR_CAP: u64 = 60;

fn gcd_u(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u(b, a % b)
    }
}

/// The `q^2`-web `prod_{m,n} (x^(p/q) a + z_m y^(p/q) b + z_n z^(p/q) c)` with
/// `z_m` the `q`-th roots of unity, expanded to integer coefficients.
/// For `p < 0` every factor is multiplied by `(xyz)^(|p|/q)` first.
pub fn triangular_web(p: i64, q: u32) -> Result<ProjWeb> {
    if q == 0 || p == 0 || gcd_u(p.unsigned_abs(), q as u64) != 1 {
        return Err(Error::Usage("need coprime p != 0 and q >= 1".into()));
    }
    if p.unsigned_abs() * (q as u64) * (q as u64) > TRIANGULAR_CAP {
        return Err(Error::Usage(format!("|p| q^2 exceeds the expansion cap {TRIANGULAR_CAP}")));
    }
    let bv = biproj_vars();
    let var = |i: usize| MultiPoly::var(&bv, i);
    // Work in u = x^(1/q), v = y^(1/q), w = z^(1/q), stored in the x, y, z slots.
    let e = p.unsigned_abs() as u32;
    let (cu, cv, cw) = if p > 0 {
        (var(0).pow(e), var(1).pow(e), var(2).pow(e))
    } else {
        (
            (&var(1) * &var(2)).pow(e),
            (&var(0) * &var(2)).pow(e),
            (&var(0) * &var(1)).pow(e),
        )
    };
    let mut prod = MultiPoly::one(&bv);
    for m in 0..q {
        for n in 0..q {
            let factor = &(&(&cu * &var(3)) + &(&cv * &var(4)).scale(&root_of_unity(q, m)))
                + &(&cw * &var(5)).scale(&root_of_unity(q, n));
            prod = &prod * &factor;
        }
    }
    let mut terms = Vec::new();
    for (ex, c) in prod.terms() {
        let zero = c.abs_f64() < 1e-6;
        if ex[..3].iter().any(|&k| k as u32 % q != 0) {
            if zero {
                continue;
            }
            return Err(Error::Domain("fractional exponent survived the expansion".into()));
        }
        let z = c.to_complex();
        let coeff = if c.is_exact() {
            Scalar::Rat(
                c.clone()
                    .into_ring(Ring::Rational)
                    .ok()
                    .and_then(|s| s.as_rational().cloned())
                    .ok_or_else(|| Error::Domain("non-rational coefficient after expansion".into()))?,
            )
        } else {
            let r = z.re.round();
            if (z.re - r).abs() > 1e-6 || z.im.abs() > 1e-6 {
                return Err(Error::Domain(format!("coefficient {z} does not round to an integer")));
            }
            if r == 0.0 {
                continue;
            }
            Scalar::int(r as i64)
        };
        let mut ne = ex.clone();
        for k in ne.iter_mut().take(3) {
            *k /= q as u16;
        }
        terms.push((ne, coeff));
    }
    let web = ProjWeb::new(MultiPoly::from_terms(&bv, terms))?;
    let expected = if p > 0 { p as u32 * q } else { 2 * e * q };
    if web.bidegree() != (expected, q * q) {
        return Err(Error::Domain(format!(
            "expanded web has bidegree {:?}, expected ({expected}, {})",
            web.bidegree(),
            q * q
        )));
    }
    Ok(web)
}

/// One row of the radial-singularity table.
#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub name: &'static str,
    pub degree: u32,
    pub radial: u32,
}

pub const TABLE1: [Table1Row; 8] = [
    Table1Row { name: "F2", degree: 2, radial: 4 },
    Table1Row { name: "F3", degree: 3, radial: 7 },
    Table1Row { name: "F4", degree: 4, radial: 12 },
    Table1Row { name: "F5", degree: 5, radial: 19 },
    Table1Row { name: "F6", degree: 6, radial: 28 },
    Table1Row { name: "H4", degree: 4, radial: 9 },
    Table1Row { name: "H5", degree: 5, radial: 16 },
    Table1Row { name: "H7", degree: 7, radial: 21 },
];

#[derive(Clone, Debug, Serialize)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub const CATALOG: [CatalogInfo; 11] = [
    CatalogInfo { name: "F2", description: "Fermat foliation of degree 2, rational fibration" },
    CatalogInfo { name: "F3", description: "Fermat foliation of degree 3, rational fibration" },
    CatalogInfo { name: "F4", description: "Fermat foliation of degree 4, isotrivial elliptic fibration" },
    CatalogInfo { name: "F5", description: "Fermat foliation of degree 5, isotrivial hyperbolic fibration" },
    CatalogInfo { name: "F6", description: "Fermat foliation of degree 6, isotrivial hyperbolic fibration" },
    CatalogInfo { name: "H4", description: "Hesse pencil foliation f dg - g df, degree 4" },
    CatalogInfo { name: "H5", description: "Hilbert modular foliation over Q(sqrt 5), degree 5" },
    CatalogInfo { name: "H7", description: "Hessian arrangement foliation, degree 7" },
    CatalogInfo { name: "Z0", description: "Z_0 = (x^3-1)x d/dx + (y^3-1)y d/dy, equal to F4" },
    CatalogInfo { name: "Z1", description: "Z_1 = (x^3-1)y^2 d/dx + (y^3-1)x^2 d/dy" },
    CatalogInfo { name: "pencil:<t>", description: "Z_0 + t Z_1 for a rational t such as 1/3" },
];

/// A catalog foliation by name: `F<d>` for any `d >= 2`, `H4`, `H5`, `H7`,
/// `Z0`, `Z1`, or `pencil:<t>` with rational `t`.
pub fn by_name(name: &str) -> Result<Foliation> {
    let name = name.trim();
    if let Some(t) = name.strip_prefix("pencil:") {
        let t = parse_poly(t, &plane_vars(), Ring::Rational)?
            .constant_value()
            .ok_or_else(|| Error::Usage("pencil parameter must be a constant".into()))?;
        return fermat_pencil4(&t);
    }
    match name {
        "H4" => Ok(hesse_h4()),
        "H5" => Ok(hilbert_h5()),
        "H7" => Ok(hessian_h7()),
        "Z0" => Ok(z0()),
        "Z1" => Ok(z1()),
        _ => match name.strip_prefix('F').and_then(|d| d.parse::<u32>().ok()) {
            Some(d) => fermat_foliation(d),
            None => Err(Error::UnknownSymbol(format!("unknown catalog entry {name}"))),
        },
    }
}

/// Rows of [`TABLE1`] paired with their foliations.
pub fn table1_fixtures() -> Vec<(Table1Row, Foliation)> {
    TABLE1.iter().map(|r| (r.clone(), by_name(r.name).expect("catalog names"))).collect()
}

/// `(d + 2)(d - 1)`.
pub fn census_bound(d: u32) -> u32 {
    (d + 2) * (d - 1)
}
