//! Projective duality on webs.
//!
//! A point `(p, q)` of the dual chart is the line `y = px + q`. A web
//! `F(x, y; p) = 0` becomes `G(p, q; t) = F(-t, q - pt; p)`, renamed back to
//! `(x, y, p)`. In the projective presentation the transform swaps the point
//! and line variables; the normal form modulo `xa + yb + zc` is preserved by
//! the swap, so the projective transform is an exact involution.
//!
//! Composing the affine formula with itself returns `F(-x, y; -p)`: the two
//! charts differ by the reflection `x -> -x`. [`involution_check`] reports
//! this orientation unit explicitly.

use serde::Serialize;

use crate::algebra::{MultiPoly, Scalar};
use crate::error::{Error, Result};
use crate::web::{affine_vars, AffineWeb, ProjWeb};

/// `G(x, y; p) = F(-p, y - xp; x)`.
pub fn legendre_affine(w: &AffineWeb) -> Result<AffineWeb> {
    if w.d() == 0 {
        return Err(Error::Domain("the Legendre transform of a degree 0 web is a curve".into()));
    }
    let g = legendre_poly(w.poly());
    let out = if w.poly().is_exact() {
        AffineWeb::new(g)?
    } else {
        AffineWeb::new_nonreduced(g)?
    };
    debug_assert_eq!(out.k(), w.d());
    Ok(out)
}

/// The substitution behind [`legendre_affine`], on bare polynomials.
pub fn legendre_poly(f: &MultiPoly) -> MultiPoly {
    let av = affine_vars();
    let (x, y, p) = (MultiPoly::var(&av, 0), MultiPoly::var(&av, 1), MultiPoly::var(&av, 2));
    f.compose(&[-&p, &y - &(&x * &p), x])
}

/// Swaps `(x, y, z)` with `(a, b, c)`.
pub fn legendre_projective(pw: &ProjWeb) -> Result<ProjWeb> {
    if pw.bidegree().0 == 0 {
        return Err(Error::Domain("the Legendre transform of a degree 0 web is a curve".into()));
    }
    let p = pw.poly();
    ProjWeb::new(p.with_vars(p.vars(), &[3, 4, 5, 0, 1, 2]))
}

/// Restriction of a web on the dual plane to the chart used by
/// [`legendre_affine`]: the point `(X, -1, Y)` and the line through it with
/// slope `T`, which is `(-T, Y - XT, 1)`.
pub fn dual_chart(pw: &ProjWeb) -> Result<AffineWeb> {
    let av = affine_vars();
    let (x, y, t) = (MultiPoly::var(&av, 0), MultiPoly::var(&av, 1), MultiPoly::var(&av, 2));
    let one = MultiPoly::one(&av);
    let images = [x.clone(), -&one, y.clone(), -&t, &y - &(&x * &t), one];
    let f = pw.poly().compose(&images);
    if f.degree_in(2) == 0 {
        return Err(Error::Degenerate("the web degenerates in the dual chart".into()));
    }
    AffineWeb::new_nonreduced(f)
}

/// `F(-x, y; -p)`.
pub fn reflect(f: &MultiPoly) -> MultiPoly {
    let av = affine_vars();
    let (x, y, p) = (MultiPoly::var(&av, 0), MultiPoly::var(&av, 1), MultiPoly::var(&av, 2));
    f.compose(&[-&x, y, -&p])
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub pass: bool,
    /// `Leg(Leg(F)) = unit * F(-x, y; -p)`.
    pub unit: Option<String>,
    /// Whether `Leg(Leg(F))` also equals `F` itself up to a unit.
    pub literal_match: bool,
    pub orientation: &'static str,
    pub bidegree_before: (u32, u32),
    pub bidegree_after: (u32, u32),
}

/// Applies the affine transform twice and compares with the input up to a
/// unit and the chart reflection.
pub fn involution_check(w: &AffineWeb) -> Result<InvolutionReport> {
    let once = legendre_affine(w)?;
    let twice = legendre_affine(&once)?;
    let target = reflect(w.poly());
    let unit = twice.poly().unit_ratio(&target);
    let literal = twice.poly().unit_ratio(w.poly()).is_some();
    Ok(InvolutionReport {
        pass: unit.is_some(),
        unit: unit.as_ref().map(Scalar::to_string),
        literal_match: literal,
        orientation: "(x, p) -> (-x, -p)",
        bidegree_before: (w.d(), w.k()),
        bidegree_after: (twice.d(), twice.k()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Ring};
    use crate::web::{foliation_to_web, homogenize, Foliation};

    fn w(s: &str) -> AffineWeb {
        AffineWeb::parse(s, Ring::Rational).unwrap()
    }

    fn fermat(d: u32) -> AffineWeb {
        let f = Foliation::parse(&format!("x^{d} - x"), &format!("y^{d} - y"), Ring::Rational).unwrap();
        foliation_to_web(&f).unwrap()
    }

    #[test]
    fn line_field_transform() {
        // p - 2x: the leaves y = x^2 + c have tangent lines q = -p^2/4 + c'.
        let g = legendre_affine(&w("p - 2*x")).unwrap();
        assert_eq!(g, w("x + 2*p"));
    }

    #[test]
    fn swaps_k_and_d() {
        let g = legendre_affine(&fermat(3)).unwrap();
        assert_eq!((g.k(), g.d()), (3, 1));
        let g = legendre_affine(&fermat(5)).unwrap();
        assert_eq!((g.k(), g.d()), (5, 1));
    }

    #[test]
    fn radial_origin_forces_divisibility() {
        let g = legendre_affine(&fermat(3)).unwrap();
        let cs = g.slope_coeffs();
        let y = parse_poly("y", &affine_vars(), Ring::Rational).unwrap();
        assert!(cs[0].div_exact(&y).is_some());
        assert!(cs[1].div_exact(&y).is_some());
        assert!(cs[3].div_exact(&y).is_none());
    }

    #[test]
    fn projective_is_involutive() {
        let pw = homogenize(&fermat(3)).unwrap();
        let l = legendre_projective(&pw).unwrap();
        assert_eq!(l.bidegree(), (1, 3));
        assert_eq!(legendre_projective(&l).unwrap(), pw);
        let pw4 = homogenize(&fermat(4)).unwrap();
        assert_eq!(legendre_projective(&pw4).unwrap().bidegree(), (1, 4));
    }

    #[test]
    fn projective_and_affine_agree() {
        for d in 2..=5 {
            let web = fermat(d);
            let via_proj = dual_chart(&legendre_projective(&homogenize(&web).unwrap()).unwrap()).unwrap();
            let direct = legendre_affine(&web).unwrap();
            assert!(via_proj.poly().unit_ratio(direct.poly()).is_some(), "d = {d}");
        }
    }

    #[test]
    fn involution_on_fermat_webs() {
        for d in 2..=6 {
            let r = involution_check(&fermat(d)).unwrap();
            assert!(r.pass, "d = {d}");
            // The reflection fixes F_d exactly when d is odd.
            assert_eq!(r.literal_match, d % 2 == 1, "d = {d}");
        }
        assert!(involution_check(&w("p - 2*x")).unwrap().pass);
    }

    #[test]
    fn superposition_commutes() {
        let a = w("p - 2*x");
        let b = w("(x^2 - x)*p - (y^2 - y)");
        let lhs = legendre_affine(&a.superpose(&b).unwrap()).unwrap();
        let rhs = legendre_affine(&a).unwrap().superpose(&legendre_affine(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(legendre_affine(&w("p^2 - 1")).is_err());
    }
}
