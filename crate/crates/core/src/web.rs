//! Webs on the projective plane in three presentations.
//!
//! * [`AffineWeb`]: an implicit differential equation `F(x, y; p) = 0` with
//!   `p = dy/dx`.
//! * [`ProjWeb`]: a bihomogeneous `P(x, y, z; a, b, c)` of bidegree
//!   `(d; k)`, where `(a : b : c)` is the line `ax + by + cz = 0`. It is kept
//!   in normal form modulo `xa + yb + zc`: no monomial contains both `z` and
//!   `c`.
//! * [`Foliation`]: a vector field `A dx + B dy` together with its homogeneous
//!   lift `(A, B, C)` of degree `d`.
//!
//! In the chart `z = 1` the line through `(x, y)` with slope `p` is
//! `(x, y, 1) x (1, p, 0) = (-p, 1, xp - y)`, so `F(x, y; p) =
//! P(x, y, 1; -p, 1, xp - y)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::gcd::is_squarefree;
use crate::algebra::{gcd, parse_poly, resultant, squarefree_part, vars, Exps, MultiPoly, Ring, Scalar, Vars};
use crate::error::{Error, Result};

pub fn affine_vars() -> Vars {
    vars(&["x", "y", "p"])
}

pub fn plane_vars() -> Vars {
    vars(&["x", "y"])
}

pub fn proj_vars() -> Vars {
    vars(&["x", "y", "z"])
}

pub fn biproj_vars() -> Vars {
    vars(&["x", "y", "z", "a", "b", "c"])
}

const X: usize = 0;
const Y: usize = 1;
const P: usize = 2;

/// A `k`-web of degree `d` given by `F(x, y; p) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineWeb {
    f: MultiPoly,
    k: u32,
    d: u32,
}

impl AffineWeb {
    /// Validates and wraps `F`. Over exact rings `F` must be squarefree.
    pub fn new(f: MultiPoly) -> Result<AffineWeb> {
        Self::build(f, false)
    }

    /// Like [`new`](Self::new) but accepts repeated factors.
    pub fn new_nonreduced(f: MultiPoly) -> Result<AffineWeb> {
        Self::build(f, true)
    }

    pub fn parse(src: &str, ring: Ring) -> Result<AffineWeb> {
        AffineWeb::new(parse_poly(src, &affine_vars(), ring)?)
    }

    fn build(f: MultiPoly, allow_nonreduced: bool) -> Result<AffineWeb> {
        if f.vars()[..] != affine_vars()[..] {
            return Err(Error::Usage(format!("web polynomial must be over (x, y, p), got {:?}", f.vars())));
        }
        let k = f.degree_in(P);
        if k == 0 {
            return Err(Error::Degenerate("F does not involve the slope p".into()));
        }
        if f.is_exact() && !allow_nonreduced && !is_squarefree(&f)? {
            return Err(Error::Degenerate("F has a repeated factor".into()));
        }
        if !discriminant_is_nonzero(&f)? {
            return Err(Error::Degenerate("the discriminant vanishes identically".into()));
        }
        let d = web_degree_of(&f)?;
        Ok(AffineWeb { f, k, d })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.f
    }

    /// Number of slopes through a generic point.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of tangencies with a generic line.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn ring(&self) -> Ring {
        self.f.ring()
    }

    /// Coefficients of `F` in `p`, lowest first.
    pub fn slope_coeffs(&self) -> Vec<MultiPoly> {
        self.f.coeffs_in(P)
    }

    /// The superposition `W1 ⊠ W2` (product of the defining polynomials).
    pub fn superpose(&self, other: &AffineWeb) -> Result<AffineWeb> {
        AffineWeb::new(&self.f * &other.f)
    }
}

impl std::fmt::Display for AffineWeb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.f)
    }
}

fn rng_for(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ tag)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-17..=17), rng.gen_range(1..=7))
}

/// Certifies `Res_p(F, F_p) != 0` by a specialisation at random points,
/// falling back to the full resultant.
fn discriminant_is_nonzero(f: &MultiPoly) -> Result<bool> {
    let mut rng = rng_for(1);
    let fp = f.derivative(P);
    if !f.is_exact() {
        for _ in 0..10 {
            let x0 = rng.gen_range(-2.0..2.0);
            let y0 = rng.gen_range(-2.0..2.0);
            let g = f.eval_var(X, &Scalar::complex(x0, 0.0)).eval_var(Y, &Scalar::complex(y0, 0.0));
            let r = resultant(&g, &g.derivative(P), P)?;
            if r.max_abs_coeff() > 1e-12 * g.max_abs_coeff().powi(2 * f.degree_in(P) as i32 - 1) {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    for _ in 0..4 {
        let x0 = random_rational(&mut rng);
        let y0 = random_rational(&mut rng);
        let g = f.eval_var(X, &x0).eval_var(Y, &y0);
        if g.degree_in(P) < f.degree_in(P) {
            continue;
        }
        if !resultant(&g, &g.derivative(P), P)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(!resultant(f, &fp, P)?.is_zero())
}

fn web_degree_of(f: &MultiPoly) -> Result<u32> {
    let mut rng = rng_for(2);
    let mut best = 0;
    let mut hits = 0;
    for _ in 0..10 {
        let m = Scalar::int(rng.gen_range(-17..=17));
        let c = Scalar::int(rng.gen_range(-17..=17));
        let vs = f.vars().clone();
        let line = &MultiPoly::var(&vs, X).scale(&m) + &MultiPoly::constant(&vs, c);
        let g = f.eval_var(P, &m).substitute(Y, &line);
        let g = if g.is_exact() { g } else { g.chop(1e-12) };
        if g.is_zero() {
            continue;
        }
        let deg = g.degree_in(X);
        if deg > best {
            best = deg;
            hits = 1;
        } else if deg == best {
            hits += 1;
        }
        if hits >= 3 {
            return Ok(best);
        }
    }
    Err(Error::Degenerate("no three generic lines agree on the web degree".into()))
}

/// Tangencies of the web with a generic line.
pub fn web_degree(w: &AffineWeb) -> Result<u32> {
    web_degree_of(w.poly())
}

/// The binary discriminant of `F` in `p`, over `(x, y)`.
///
/// This is `Res_p(F, F_p) / lc_p(F)`, the polynomial content that the
/// resultant carries along. The unit is not normalised. With `reduced` the
/// squarefree part is returned instead.
pub fn discriminant(w: &AffineWeb, reduced: bool) -> Result<MultiPoly> {
    let f = w.poly();
    if !f.is_exact() {
        return Err(Error::InexactRing("complex".into()));
    }
    let coeffs = f.coeffs_in(P);
    let lc = coeffs.last().unwrap().clone();
    let r = resultant(f, &f.derivative(P), P)?;
    if r.is_zero() {
        return Err(Error::Degenerate("the discriminant vanishes identically".into()));
    }
    let delta = r.div_exact(&lc).expect("leading coefficient divides the resultant");
    let delta = delta.with_vars(&plane_vars(), &[0, 1, 0]);
    if reduced {
        squarefree_part(&delta)
    } else {
        Ok(delta)
    }
}

/// Degree of the discriminant curve of a `k`-web of degree `d`.
pub fn discriminant_degree(k: u32, d: u32) -> u32 {
    (k - 1) * (k + 2 * d)
}

/// The discriminant as a homogeneous polynomial over `(x, y, z)` of degree
/// `(k - 1)(k + 2d)`, so that the line at infinity carries its multiplicity.
pub fn projective_discriminant(w: &AffineWeb) -> Result<MultiPoly> {
    let delta = discriminant(w, false)?;
    let n = discriminant_degree(w.k(), w.d());
    homogenize_to(&delta, n)
}

/// Homogenizes a polynomial in `(x, y)` to degree `n` over `(x, y, z)`.
pub fn homogenize_to(f: &MultiPoly, n: u32) -> Result<MultiPoly> {
    let deg = f.total_degree();
    if deg > n {
        return Err(Error::Domain(format!("degree {deg} exceeds the target degree {n}")));
    }
    let pv = proj_vars();
    Ok(MultiPoly::from_terms(
        &pv,
        f.terms().map(|(e, c)| {
            let s = e[0] + e[1];
            (Exps::from_slice(&[e[0], e[1], n as u16 - s]), c.clone())
        }),
    ))
}

/// Sets `z = 1` in a polynomial over `(x, y, z)`.
pub fn dehomogenize_plane(f: &MultiPoly) -> MultiPoly {
    f.eval_var(2, &Scalar::one()).with_vars(&plane_vars(), &[0, 1, 0])
}

/// A web as a bihomogeneous polynomial of bidegree `(d; k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjWeb {
    p: MultiPoly,
    d: u32,
    k: u32,
}

impl ProjWeb {
    /// Checks bihomogeneity and reduces to normal form.
    pub fn new(p: MultiPoly) -> Result<ProjWeb> {
        if p.vars()[..] != biproj_vars()[..] {
            return Err(Error::Usage("projective web must be over (x, y, z, a, b, c)".into()));
        }
        let p = incidence_normal_form(&p);
        let (e, _) = p
            .leading()
            .ok_or_else(|| Error::Degenerate("zero polynomial".into()))?;
        let d = (e[0] + e[1] + e[2]) as u32;
        let k = (e[3] + e[4] + e[5]) as u32;
        for (e, _) in p.terms() {
            if (e[0] + e[1] + e[2]) as u32 != d || (e[3] + e[4] + e[5]) as u32 != k {
                return Err(Error::Domain("polynomial is not bihomogeneous".into()));
            }
        }
        Ok(ProjWeb { p, d, k })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.p
    }

    /// `(d, k)`: degree in the point, degree in the line.
    pub fn bidegree(&self) -> (u32, u32) {
        (self.d, self.k)
    }

    /// Value at a point and a line given by complex coordinates.
    pub fn eval_c(&self, pt: [num_complex::Complex64; 3], line: [num_complex::Complex64; 3]) -> num_complex::Complex64 {
        self.p.eval_c(&[pt[0], pt[1], pt[2], line[0], line[1], line[2]])
    }
}

/// Rewrites every `z^i c^j` as `(zc)^m z^(i-m) c^(j-m)` with `m = min(i, j)`
/// and substitutes `zc = -(xa + yb)`.
pub fn incidence_normal_form(p: &MultiPoly) -> MultiPoly {
    let vs = p.vars().clone();
    let u = -&(&(&MultiPoly::var(&vs, 0) * &MultiPoly::var(&vs, 3)) + &(&MultiPoly::var(&vs, 1) * &MultiPoly::var(&vs, 4)));
    let mut upow = vec![MultiPoly::one(&vs)];
    let mut out = MultiPoly::zero(&vs);
    for (e, c) in p.terms() {
        let m = e[2].min(e[5]) as usize;
        if m == 0 {
            out.add_term(e.clone(), c.clone());
            continue;
        }
        while upow.len() <= m {
            let next = &upow[upow.len() - 1] * &u;
            upow.push(next);
        }
        let mut rest = e.clone();
        rest[2] -= m as u16;
        rest[5] -= m as u16;
        out = &out + &upow[m].mul_monomial(&rest, c);
    }
    out
}

/// The bihomogeneous form of an affine web, of bidegree `(d; k)`.
pub fn homogenize(w: &AffineWeb) -> Result<ProjWeb> {
    let (k, d) = (w.k(), w.d());
    let bv = biproj_vars();
    // Omega(x, y; a, b) = sum a_i(x, y) (-a)^i b^(k-i).
    let mut omega = MultiPoly::zero(&bv);
    for (e, c) in w.poly().terms() {
        let i = e[P];
        let sign = if i % 2 == 1 { -c } else { c.clone() };
        omega.add_term(Exps::from_slice(&[e[X], e[Y], 0, i, k as u16 - i, 0]), sign);
    }
    let top = omega.total_degree() - k;
    let u = &(&MultiPoly::var(&bv, 0) * &MultiPoly::var(&bv, 3)) + &(&MultiPoly::var(&bv, 1) * &MultiPoly::var(&bv, 4));
    let minus_c = -&MultiPoly::var(&bv, 5);
    let mut out = MultiPoly::zero(&bv);
    for j in 0..=top {
        let part = omega.homogeneous_part(j + k);
        if part.is_zero() {
            continue;
        }
        if j <= d {
            let lifted = part.mul_monomial(&[0, 0, (d - j) as u16, 0, 0, 0], &Scalar::one());
            out = &out + &lifted;
        } else {
            let m = j - d;
            let q = part
                .div_exact(&u.pow(m))
                .ok_or_else(|| Error::Domain(format!("web degree {d} is inconsistent with F")))?;
            out = &out + &(&q * &minus_c.pow(m));
        }
    }
    ProjWeb::new(out)
}

/// Restriction to one of the three standard charts. In chart `j` the point
/// has coordinate `j` equal to 1 and affine coordinates in the two cyclically
/// following slots; the direction of slope `p` is `(1, p)` in those slots.
pub fn dehomogenize(pw: &ProjWeb, chart: usize) -> Result<AffineWeb> {
    if chart > 2 {
        return Err(Error::Usage(format!("chart must be 0, 1 or 2, got {chart}")));
    }
    let av = affine_vars();
    let one = MultiPoly::one(&av);
    let zero = MultiPoly::zero(&av);
    let (xv, yv, pv) = (MultiPoly::var(&av, X), MultiPoly::var(&av, Y), MultiPoly::var(&av, P));
    let mut pt = vec![zero.clone(), zero.clone(), zero.clone()];
    let mut dir = vec![zero.clone(), zero.clone(), zero.clone()];
    pt[chart] = one.clone();
    pt[(chart + 1) % 3] = xv;
    pt[(chart + 2) % 3] = yv;
    dir[(chart + 1) % 3] = one;
    dir[(chart + 2) % 3] = pv;
    let line = cross(&pt, &dir);
    let images = [pt[0].clone(), pt[1].clone(), pt[2].clone(), line[0].clone(), line[1].clone(), line[2].clone()];
    let f = pw.poly().compose(&images);
    if f.is_zero() || f.degree_in(P) == 0 {
        return Err(Error::Degenerate(format!("the web degenerates in chart {chart}")));
    }
    AffineWeb::new_nonreduced(f)
}

pub fn cross(u: &[MultiPoly], v: &[MultiPoly]) -> [MultiPoly; 3] {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

/// A foliation: the affine field `A d/dx + B d/dy` and its homogeneous lift
/// `A_h d/dx + B_h d/dy + C_h d/dz` of degree `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Foliation {
    a: MultiPoly,
    b: MultiPoly,
    hom: [MultiPoly; 3],
    d: u32,
}

impl Foliation {
    /// From an affine vector field over `(x, y)` with coprime components.
    pub fn affine(a: MultiPoly, b: MultiPoly) -> Result<Foliation> {
        let pv = plane_vars();
        if a.vars()[..] != pv[..] || b.vars()[..] != pv[..] {
            return Err(Error::Usage("vector field components must be over (x, y)".into()));
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::Degenerate("zero vector field".into()));
        }
        if a.is_exact() && b.is_exact() && !gcd(&a, &b)?.is_constant() {
            return Err(Error::Degenerate("A and B have a common factor".into()));
        }
        let n = a.total_degree().max(b.total_degree());
        let (at, bt) = (a.homogeneous_part(n), b.homogeneous_part(n));
        let xv = MultiPoly::var(&pv, 0);
        let yv = MultiPoly::var(&pv, 1);
        let radial_top = n > 0 && (&(&at * &yv) - &(&bt * &xv)).is_zero();
        let hom = if radial_top {
            // A_top = x g, B_top = y g: the line at infinity is not invariant.
            let g = at
                .div_exact(&xv)
                .ok_or_else(|| Error::Domain("inconsistent radial top part".into()))?;
            let d = n - 1;
            let ah = &a - &(&xv * &g);
            let bh = &b - &(&yv * &g);
            [homogenize_to(&ah, d)?, homogenize_to(&bh, d)?, homogenize_to(&-&g, d)?]
        } else {
            [homogenize_to(&a, n)?, homogenize_to(&b, n)?, MultiPoly::zero(&proj_vars())]
        };
        let d = if radial_top { n - 1 } else { n };
        Ok(Foliation { a, b, hom, d })
    }

    pub fn parse(a: &str, b: &str, ring: Ring) -> Result<Foliation> {
        let pv = plane_vars();
        Foliation::affine(parse_poly(a, &pv, ring)?, parse_poly(b, &pv, ring)?)
    }

    /// From a homogeneous field over `(x, y, z)` of common degree `d`.
    pub fn homogeneous(ah: MultiPoly, bh: MultiPoly, ch: MultiPoly) -> Result<Foliation> {
        let x = MultiPoly::var(&proj_vars(), 0);
        let y = MultiPoly::var(&proj_vars(), 1);
        let a = dehomogenize_plane(&(&ah - &(&x * &ch)));
        let b = dehomogenize_plane(&(&bh - &(&y * &ch)));
        let f = Foliation::affine(a, b)?;
        // Same class modulo the radial field: compare X ^ R.
        let lhs = wedge_radial(&f.hom);
        let rhs = wedge_radial(&[ah, bh, ch]);
        if lhs.iter().zip(&rhs).any(|(u, v)| u != v) {
            return Err(Error::Domain(
                "homogeneous field has a non-reduced presentation (common factor with z)".into(),
            ));
        }
        Ok(f)
    }

    /// From a homogeneous 1-form `P dx + Q dy + S dz` with
    /// `xP + yQ + zS = 0`.
    pub fn from_one_form(p: &MultiPoly, q: &MultiPoly, s: &MultiPoly) -> Result<Foliation> {
        let x = MultiPoly::var(&proj_vars(), 0);
        let y = MultiPoly::var(&proj_vars(), 1);
        let z = MultiPoly::var(&proj_vars(), 2);
        if !(&(&(&x * p) + &(&y * q)) + &(&z * s)).is_zero() {
            return Err(Error::Domain("1-form is not annihilated by the radial field".into()));
        }
        let a = dehomogenize_plane(q);
        let b = -&dehomogenize_plane(p);
        let g = gcd(&a, &b)?;
        Foliation::affine(a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap())
    }

    pub fn a(&self) -> &MultiPoly {
        &self.a
    }

    pub fn b(&self) -> &MultiPoly {
        &self.b
    }

    /// Homogeneous components `(A_h, B_h, C_h)`.
    pub fn hom(&self) -> &[MultiPoly; 3] {
        &self.hom
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn ring(&self) -> Ring {
        self.a.ring().join(self.b.ring()).unwrap_or(Ring::Complex)
    }

    /// Derivative of a polynomial over `(x, y, z)` along the homogeneous field.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(f.vars());
        for (i, c) in self.hom.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(c * &f.derivative(i));
            }
        }
        out
    }

    /// `P = aA + bB + cC` in normal form: the foliation as a web of bidegree
    /// `(d; 1)`.
    pub fn to_proj_web(&self) -> Result<ProjWeb> {
        let bv = biproj_vars();
        let mut p = MultiPoly::zero(&bv);
        for (i, c) in self.hom.iter().enumerate() {
            let lifted = c.with_vars(&bv, &[0, 1, 2]);
            p = &p + &(&lifted * &MultiPoly::var(&bv, 3 + i));
        }
        ProjWeb::new(p)
    }

    /// Affine field in chart `j` (see [`dehomogenize`]): components along the
    /// two cyclically following coordinates, over `(x, y)`.
    pub fn in_chart(&self, j: usize) -> (MultiPoly, MultiPoly) {
        if j == 2 {
            return (self.a.clone(), self.b.clone());
        }
        let (u, v) = ((j + 1) % 3, (j + 2) % 3);
        let pv = proj_vars();
        let cu = &self.hom[u] - &(&MultiPoly::var(&pv, u) * &self.hom[j]);
        let cv = &self.hom[v] - &(&MultiPoly::var(&pv, v) * &self.hom[j]);
        // Set coordinate j to 1 and rename (u, v) -> (x, y).
        let mut map = [0usize; 3];
        map[u] = 0;
        map[v] = 1;
        map[j] = 0;
        let plane = plane_vars();
        let restrict = |f: &MultiPoly| f.eval_var(j, &Scalar::one()).with_vars(&plane, &map);
        (restrict(&cu), restrict(&cv))
    }
}

/// Components of `X ^ R`: `(yC - zB, zA - xC, xB - yA)`.
pub fn wedge_radial(h: &[MultiPoly; 3]) -> [MultiPoly; 3] {
    let pv = proj_vars();
    let (x, y, z) = (MultiPoly::var(&pv, 0), MultiPoly::var(&pv, 1), MultiPoly::var(&pv, 2));
    let h = [0, 1, 2].map(|i| if h[i].is_zero() { MultiPoly::zero(&pv) } else { h[i].clone() });
    [
        &(&y * &h[2]) - &(&z * &h[1]),
        &(&z * &h[0]) - &(&x * &h[2]),
        &(&x * &h[1]) - &(&y * &h[0]),
    ]
}

/// The 1-web `F = A p - B`.
pub fn foliation_to_web(f: &Foliation) -> Result<AffineWeb> {
    let av = affine_vars();
    let a = f.a().with_vars(&av, &[0, 1]);
    let b = f.b().with_vars(&av, &[0, 1]);
    AffineWeb::new(&(&a * &MultiPoly::var(&av, P)) - &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> AffineWeb {
        AffineWeb::parse(s, Ring::Rational).unwrap()
    }

    fn plane(s: &str) -> MultiPoly {
        parse_poly(s, &plane_vars(), Ring::Rational).unwrap()
    }

    #[test]
    fn foliation_webs() {
        let f = Foliation::parse("1", "2*x", Ring::Rational).unwrap();
        assert_eq!(foliation_to_web(&f).unwrap(), w("p - 2*x"));
        let f2 = Foliation::parse("x^2 - x", "y^2 - y", Ring::Rational).unwrap();
        assert_eq!(foliation_to_web(&f2).unwrap(), w("(x^2 - x)*p - (y^2 - y)"));
        assert_eq!(f2.degree(), 2);
        assert_eq!(foliation_to_web(&f2).unwrap().d(), 2);
    }

    #[test]
    fn radial_top_lowers_the_degree() {
        // Z_1 = (x^3 - 1) y^2 d/dx + (y^3 - 1) x^2 d/dy has degree 4.
        let z1 = Foliation::parse("(x^3 - 1)*y^2", "(y^3 - 1)*x^2", Ring::Rational).unwrap();
        assert_eq!(z1.degree(), 4);
        assert_eq!(foliation_to_web(&z1).unwrap().d(), 4);
        let r = Foliation::parse("x", "y", Ring::Rational).unwrap();
        assert_eq!(r.degree(), 0);
    }

    #[test]
    fn rejects_common_factor() {
        assert!(Foliation::parse("x*(y - 1)", "x*y", Ring::Rational).is_err());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&w("p^2 - y"), false).unwrap(), plane("-4*y"));
        assert_eq!(discriminant(&w("p^2 - y"), true).unwrap(), plane("y"));
        let d = discriminant(&w("p^2 - x^2"), false).unwrap();
        // 2^2 * (-x^2) from the 3x3 Sylvester determinant.
        assert_eq!(d, plane("-4*x^2"));
        assert!(AffineWeb::new(parse_poly("(p - x)^2", &affine_vars(), Ring::Rational).unwrap()).is_err());
    }

    #[test]
    fn web_degrees() {
        assert_eq!(w("p - 2*x").d(), 1);
        assert_eq!(w("p^2 - y").d(), 1);
        assert_eq!(w("(p - 1)*(p - 2)*(p - 3)").d(), 0);
    }

    #[test]
    fn homogenize_round_trip() {
        for s in ["p - 2*x", "(x^2 - x)*p - (y^2 - y)", "p^2 - y", "x*p^3 - y*p + x^2 - 1"] {
            let a = w(s);
            let pw = homogenize(&a).unwrap();
            assert_eq!(pw.bidegree(), (a.d(), a.k()));
            let back = dehomogenize(&pw, 2).unwrap();
            assert!(back.poly().unit_ratio(a.poly()).is_some(), "{s}: {back}");
        }
        let pw = homogenize(&w("p - 2*x")).unwrap();
        assert_eq!(pw.bidegree(), (1, 1));
    }

    #[test]
    fn foliation_web_matches_homogenized_web() {
        let f = Foliation::parse("x^3 - x", "y^3 - y", Ring::Rational).unwrap();
        let a = f.to_proj_web().unwrap();
        let b = homogenize(&foliation_to_web(&f).unwrap()).unwrap();
        assert!(a.poly().unit_ratio(b.poly()).is_some());
        let z1 = Foliation::parse("(x^3 - 1)*y^2", "(y^3 - 1)*x^2", Ring::Rational).unwrap();
        let a = z1.to_proj_web().unwrap();
        let b = homogenize(&foliation_to_web(&z1).unwrap()).unwrap();
        assert!(a.poly().unit_ratio(b.poly()).is_some());
        assert_eq!(a.bidegree(), (4, 1));
    }

    #[test]
    fn normal_form_agrees_on_incidence_points() {
        use num_complex::Complex64;
        let bv = biproj_vars();
        let p = parse_poly("z^2*c^3 + x*z*c*a - y^2*c*z*b + z*a^2", &bv, Ring::Rational).unwrap();
        let nf = incidence_normal_form(&p);
        assert!(nf.terms().all(|(e, _)| e[2] == 0 || e[5] == 0));
        let mut rng = rng_for(9);
        for _ in 0..50 {
            let pt: Vec<Complex64> = (0..3).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            let a = Complex64::new(rng.gen_range(-2.0..2.0), 0.3);
            let b = Complex64::new(rng.gen_range(-2.0..2.0), -0.1);
            let c = -(a * pt[0] + b * pt[1]) / pt[2];
            let v = [pt[0], pt[1], pt[2], a, b, c];
            assert!((p.eval_c(&v) - nf.eval_c(&v)).norm() < 1e-9 * (1.0 + p.eval_abs(&v)));
        }
    }

    #[test]
    fn other_charts() {
        // The F_2 field in the chart x = 1.
        let f = Foliation::parse("x^2 - x", "y^2 - y", Ring::Rational).unwrap();
        let pw = f.to_proj_web().unwrap();
        for j in 0..3 {
            let web = dehomogenize(&pw, j).unwrap();
            let (a, b) = f.in_chart(j);
            let direct = foliation_to_web(&Foliation::affine(a, b).unwrap()).unwrap();
            assert!(web.poly().unit_ratio(direct.poly()).is_some(), "chart {j}");
        }
    }

    #[test]
    fn one_form_conversion() {
        // d(y/x) on the affine chart: x dy - y dx, i.e. the radial pencil.
        let pv = proj_vars();
        let q = |s: &str| parse_poly(s, &pv, Ring::Rational).unwrap();
        let f = Foliation::from_one_form(&q("-y*z"), &q("x*z"), &q("0")).unwrap();
        assert_eq!(f.degree(), 0);
    }
}
