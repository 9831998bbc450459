//! Projective analysis of foliations.
//!
//! Inflection and tangency divisors, invariant lines and convexity,
//! singular points with their radial order, and the component report of a
//! web discriminant. Exact computations run over the coefficient ring of the
//! foliation; points and lines found numerically are recognised in small
//! quadratic fields and certified exactly whenever the rings are compatible.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::roots::{horner, poly_roots};
use crate::algebra::scalar::recognize;
use crate::algebra::{
    linear_factor_multiplicity, resultant, squarefree_decomposition, squarefree_part, LinearForm, MultiPoly, Ring,
    Scalar,
};
use crate::algebra::gcd::gcd;
use crate::error::{Error, Result};
use crate::legendre::legendre_affine;
use crate::slope::{barycenter_slope, Slope, WebEval};
use crate::web::{
    affine_vars, biproj_vars, dehomogenize, dehomogenize_plane, discriminant, discriminant_degree, foliation_to_web, homogenize, homogenize_to,
    plane_vars, projective_discriminant, proj_vars, AffineWeb, Foliation, ProjWeb,
};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Quadratic fields tried when recognising coordinates.
const FIELDS: [i64; 6] = [-1, -3, 2, 3, 5, -2];
/// Relative residual for a candidate line to lie on a curve.
const LINE_RESIDUAL: f64 = 1e-8;
/// Residual a polished singular point must reach.
const POINT_RESIDUAL: f64 = 1e-12;
/// Relative size below which a float coefficient counts as zero.
const FLOAT_ZERO: f64 = 1e-8;
/// Slope margins below this count as tangency.
pub const INVARIANT_MARGIN: f64 = 1e-6;
/// Practical degree cap for the invariant-line search.
pub const LINE_SEARCH_CAP: u32 = 7;
/// Points sampled on each discriminant component.
pub const COMPONENT_SAMPLES: usize = 10;

const LINE_SEED: u64 = 0x5eed_11e5;

fn joint_ring<I: IntoIterator<Item = Ring>>(rings: I) -> Option<Ring> {
    rings.into_iter().try_fold(Ring::Rational, |a, b| a.join(b).ok())
}

fn exact_compatible<I: IntoIterator<Item = Ring>>(rings: I) -> bool {
    joint_ring(rings).is_some_and(Ring::is_exact)
}

fn line_rings(l: &LinearForm) -> impl Iterator<Item = Ring> + '_ {
    l.coeffs().iter().map(Scalar::ring)
}

fn field_lists(ring: Ring) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    if let Ring::QuadExt(d) = ring {
        out.push(vec![d]);
    }
    for d in FIELDS {
        if ring != Ring::QuadExt(d) {
            out.push(vec![d]);
        }
    }
    out
}

fn det3(m: [[&MultiPoly; 3]; 3]) -> MultiPoly {
    let minor = |a: &MultiPoly, b: &MultiPoly, c: &MultiPoly, d: &MultiPoly| &(a * b) - &(c * d);
    let t0 = m[0][0] * &minor(m[1][1], m[2][2], m[1][2], m[2][1]);
    let t1 = m[0][1] * &minor(m[1][0], m[2][2], m[1][2], m[2][0]);
    let t2 = m[0][2] * &minor(m[1][0], m[2][1], m[1][1], m[2][0]);
    &(&t0 - &t1) + &t2
}

fn cross_c(u: [C; 3], v: [C; 3]) -> [C; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn norm3(u: &[C; 3]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn same_projective(u: [C; 3], v: [C; 3], tol: f64) -> bool {
    norm3(&cross_c(u, v)) <= tol * norm3(&u) * norm3(&v)
}

fn random_vec(rng: &mut ChaCha8Rng) -> [C; 3] {
    [0, 1, 2].map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Coefficients of `g(p + t v)` in `t`, lowest first, with the matching
/// coefficients of the same expansion taken in absolute values.
fn restrict(g: &MultiPoly, p: [C; 3], v: [C; 3]) -> (Vec<C>, Vec<f64>) {
    let n = g.total_degree() as usize;
    let binomial_powers = |a: C, b: C| {
        let mut out: Vec<Vec<C>> = vec![vec![C::new(1.0, 0.0)]];
        for k in 1..=n {
            let prev = &out[k - 1];
            let mut next = vec![ZERO; k + 1];
            for (i, c) in prev.iter().enumerate() {
                next[i] += c * a;
                next[i + 1] += c * b;
            }
            out.push(next);
        }
        out
    };
    let pw: Vec<Vec<Vec<C>>> = (0..3).map(|i| binomial_powers(p[i], v[i])).collect();
    let pa: Vec<Vec<Vec<C>>> = (0..3)
        .map(|i| binomial_powers(C::new(p[i].norm(), 0.0), C::new(v[i].norm(), 0.0)))
        .collect();
    let mut cs = vec![ZERO; n + 1];
    let mut sc = vec![0.0; n + 1];
    let conv = |a: &[C], b: &[C]| {
        let mut out = vec![ZERO; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    for (e, c) in g.terms() {
        let (c, ca) = (c.to_complex(), c.abs_f64());
        let t = conv(&conv(&pw[0][e[0] as usize], &pw[1][e[1] as usize]), &pw[2][e[2] as usize]);
        let ta = conv(&conv(&pa[0][e[0] as usize], &pa[1][e[1] as usize]), &pa[2][e[2] as usize]);
        for (i, (z, za)) in t.iter().zip(&ta).enumerate() {
            cs[i] += c * z;
            sc[i] += ca * za.re;
        }
    }
    (cs, sc)
}

/// `sum |c| m^deg` with `m` the largest coordinate (at least 1 for affine
/// points). Unlike a monomial-wise scale this stays meaningful where every
/// monomial of `g` vanishes.
fn uniform_scale(g: &MultiPoly, pt: &[C], affine: bool) -> f64 {
    let mut m = pt.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if affine {
        m = m.max(1.0);
    }
    g.terms().map(|(e, c)| c.abs_f64() * m.powi(e.iter().map(|&k| k as i32).sum())).sum()
}

fn relative_value(g: &MultiPoly, pt: &[C], affine: bool) -> f64 {
    let s = uniform_scale(g, pt, affine);
    if s == 0.0 {
        0.0
    } else {
        g.eval_c(pt).norm() / s
    }
}

/// Points where a random line meets the curve `g = 0`.
fn curve_points(g: &MultiPoly, rng: &mut ChaCha8Rng) -> Vec<[C; 3]> {
    let n = g.total_degree() as usize;
    for _ in 0..8 {
        let (p, v) = (random_vec(rng), random_vec(rng));
        let (cs, sc) = restrict(g, p, v);
        if cs[n].norm() <= 1e-6 * sc[n] {
            continue;
        }
        if let Ok(ts) = poly_roots(&cs) {
            return ts.iter().map(|t| [0, 1, 2].map(|i| p[i] + t * v[i])).collect();
        }
    }
    Vec::new()
}

/// Sharpens a float component line: two generic points of it are pushed back
/// onto the curve by Newton steps along the line's normal, then rejoined.
fn polish_line(g: &MultiPoly, grad: &[MultiPoly; 3], l: [C; 3]) -> [C; 3] {
    let scale = norm3(&l);
    let l = l.map(|c| c / scale);
    let normal = l.map(|c| c.conj());
    // two points spanning the line: kernel vectors of l
    let k = (0..3).max_by(|&a, &b| l[a].norm().total_cmp(&l[b].norm())).unwrap_or(0);
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let mut a = [C::new(0.0, 0.0); 3];
    let mut b = a;
    a[i] = l[k];
    a[k] = -l[i];
    b[j] = l[k];
    b[k] = -l[j];
    let mix = |s: C, t: C| [0, 1, 2].map(|m| s * a[m] + t * b[m]);
    let mut pts = [mix(C::new(0.83, 0.21), C::new(0.47, -0.38)), mix(C::new(-0.29, 0.66), C::new(1.13, 0.17))];
    for p in pts.iter_mut() {
        for _ in 0..6 {
            let v = g.eval_c(p);
            let d: C = (0..3).map(|m| grad[m].eval_c(p) * normal[m]).sum();
            if d.norm() == 0.0 {
                break;
            }
            let t = v / d;
            for m in 0..3 {
                p[m] -= t * normal[m];
            }
        }
    }
    let out = cross_c(pts[0], pts[1]);
    let within = |x: &[C; 3]| relative_value(g, x, false) < LINE_RESIDUAL;
    if norm3(&out) > 0.0 && pts.iter().all(within) {
        out
    } else {
        l
    }
}

fn exact_line(g: &MultiPoly, l: &LinearForm) -> Option<LinearForm> {
    if !g.is_exact() {
        return None;
    }
    let pv = proj_vars();
    for fs in field_lists(g.ring()) {
        let Some(e) = l.exactify(&fs) else { continue };
        if !exact_compatible(line_rings(&e).chain([g.ring()])) {
            continue;
        }
        if g.div_exact(&e.to_poly(&pv, &[0, 1, 2])).is_some() {
            return Some(e);
        }
    }
    None
}

fn line_order(l: &LinearForm) -> Vec<f64> {
    l.to_complex().iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Linear factors of a homogeneous polynomial over `(x, y, z)`.
///
/// Two random lines meet the curve in point sets `Q` and `R`; every line
/// through some `q` in `Q` and `r` in `R` on which `g` also vanishes at two
/// further points is a component. Found lines are recognised over small
/// quadratic fields and kept exact when `g` is divisible by them; otherwise
/// the float line is returned. The search runs twice with independent lines.
/// Repeated factors are found once; pass a squarefree `g` for best accuracy.
pub fn linear_factors(g: &MultiPoly, seed: u64) -> Result<Vec<LinearForm>> {
    if !g.is_homogeneous() || g.nvars() != 3 {
        return Err(Error::Usage("linear factors need a homogeneous polynomial over (x, y, z)".into()));
    }
    let n = g.total_degree() as usize;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut found: Vec<[C; 3]> = Vec::new();
    let extra = [C::new(0.37, 0.61), C::new(-1.21, 0.29)];
    for round in 0..2u64 {
        if found.len() >= n {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ round.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let qs = curve_points(g, &mut rng);
        let rs = curve_points(g, &mut rng);
        for q in &qs {
            for r in &rs {
                let l = cross_c(*q, *r);
                if norm3(&l) <= 1e-8 * norm3(q) * norm3(r) {
                    continue;
                }
                if found.iter().any(|f| same_projective(*f, l, 1e-7)) {
                    continue;
                }
                let on = extra.iter().all(|lam| {
                    let s: Vec<C> = (0..3).map(|i| q[i] + lam * (r[i] - q[i])).collect();
                    relative_value(g, &s, false) < LINE_RESIDUAL
                });
                if on {
                    found.push(l);
                }
            }
        }
    }
    let grad: [MultiPoly; 3] = [0, 1, 2].map(|i| g.derivative(i));
    let mut out = Vec::with_capacity(found.len());
    for l in found {
        let lf = LinearForm::from_complex(polish_line(g, &grad, l))?;
        out.push(exact_line(g, &lf).unwrap_or(lf));
    }
    out.sort_by(|a, b| {
        line_order(a)
            .iter()
            .zip(line_order(b).iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// The inflection divisor `det[(x, y, z); X(x, y, z); X^2(x, y, z)]`, of
/// degree `3d`.
pub fn inflection_divisor(f: &Foliation) -> Result<MultiPoly> {
    let g = MultiPoly::gens(&proj_vars());
    let h = f.hom();
    let second: Vec<MultiPoly> = h.iter().map(|c| f.apply(c)).collect();
    let det = det3([[&g[0], &g[1], &g[2]], [&h[0], &h[1], &h[2]], [&second[0], &second[1], &second[2]]]);
    if det.is_zero() {
        return Err(Error::Degenerate(
            "the inflection determinant vanishes identically: every leaf is a line".into(),
        ));
    }
    Ok(det.normalized())
}

fn numeric_invariance(f: &Foliation, l: [C; 3]) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11e5_c0de);
    let h = f.hom();
    (0..3).all(|_| {
        let p = cross_c(l, random_vec(&mut rng));
        let num: C = (0..3).map(|i| l[i] * h[i].eval_c(&p)).sum();
        let scale: f64 = (0..3).map(|i| l[i].norm() * uniform_scale(&h[i], &p, false)).sum();
        num.norm() <= LINE_RESIDUAL * scale.max(f64::MIN_POSITIVE)
    })
}

/// Whether `ax + by + cz` divides `aA + bB + cC`. Exact when the line and
/// the foliation share an exact ring, numeric otherwise.
pub fn invariant_line_check(f: &Foliation, l: &LinearForm) -> bool {
    if l.is_exact() && exact_compatible(line_rings(l).chain([f.ring()])) {
        let lp = l.to_poly(&proj_vars(), &[0, 1, 2]);
        return f.apply(&lp).div_exact(&lp).is_some();
    }
    numeric_invariance(f, l.to_complex())
}

/// All invariant lines, searched among the linear components of the
/// inflection divisor (which contains every invariant line).
pub fn find_invariant_lines(f: &Foliation) -> Result<Vec<LinearForm>> {
    if f.degree() > LINE_SEARCH_CAP {
        return Err(Error::Domain(format!(
            "invariant-line search is capped at degree {LINE_SEARCH_CAP}; check candidate lines instead"
        )));
    }
    let i = inflection_divisor(f)?;
    let s = if i.is_exact() { squarefree_part(&i)? } else { i };
    Ok(linear_factors(&s, LINE_SEED)?
        .into_iter()
        .filter(|l| invariant_line_check(f, l))
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct LineFactor {
    pub line: String,
    pub exact: bool,
    pub multiplicity: u32,
    pub invariant: bool,
    #[serde(skip)]
    pub form: LinearForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub degree: u32,
    pub inflection_degree: u32,
    pub convex: bool,
    pub reduced: bool,
    /// `cofactor` when every line is exact and was divided out, `hessian`
    /// when convexity rests on the squarefree layers instead.
    pub method: &'static str,
    pub cofactor_degree: Option<u32>,
    pub line_count: u32,
    pub lines: Vec<LineFactor>,
}

fn hessian(g: &MultiPoly) -> MultiPoly {
    let d: Vec<MultiPoly> = (0..3).map(|i| g.derivative(i)).collect();
    let h: Vec<Vec<MultiPoly>> = (0..3).map(|i| (0..3).map(|j| d[i].derivative(j)).collect()).collect();
    det3([[&h[0][0], &h[0][1], &h[0][2]], [&h[1][0], &h[1][1], &h[1][2]], [&h[2][0], &h[2][1], &h[2][2]]])
}

/// Convexity of the inflection divisor.
///
/// `I` is split into squarefree layers. When all linear components are
/// exact they are divided out to full multiplicity and the cofactor must be
/// constant. Otherwise each layer `g` must satisfy `g | X(g)` (invariance)
/// and `g | Hess(g)` (a reduced curve whose Hessian vanishes on it is a union
/// of lines).
pub fn convexity_report(f: &Foliation) -> Result<ConvexityReport> {
    if !f.ring().is_exact() {
        return Err(Error::InexactRing(f.ring().to_string()));
    }
    let i = inflection_divisor(f)?;
    let layers = squarefree_decomposition(&i)?;
    let reduced = layers.iter().skip(1).all(MultiPoly::is_constant);
    let mut lines = Vec::new();
    for (m, layer) in layers.iter().enumerate() {
        if layer.is_constant() {
            continue;
        }
        for l in linear_factors(layer, LINE_SEED)? {
            lines.push(LineFactor {
                line: l.to_string(),
                exact: l.is_exact(),
                multiplicity: m as u32 + 1,
                invariant: invariant_line_check(f, &l),
                form: l,
            });
        }
    }
    let all_exact = lines
        .iter()
        .all(|l| l.exact && exact_compatible(line_rings(&l.form).chain([i.ring()])));
    let pv = proj_vars();
    let (convex, method, cofactor_degree) = if all_exact {
        let mut cof = i.clone();
        for l in &lines {
            let lp = l.form.to_poly(&pv, &[0, 1, 2]);
            for _ in 0..l.multiplicity {
                cof = cof.div_exact(&lp).ok_or_else(|| Error::Domain("line multiplicity mismatch".into()))?;
            }
        }
        let deg = cof.total_degree();
        (deg == 0 && lines.iter().all(|l| l.invariant), "cofactor", Some(deg))
    } else {
        let ok = layers.iter().filter(|g| !g.is_constant()).all(|g| {
            let invariant = f.apply(g).div_exact(g).is_some();
            let linear = g.total_degree() <= 1 || hessian(g).div_exact(g).is_some();
            invariant && linear
        });
        (ok, "hessian", None)
    };
    Ok(ConvexityReport {
        degree: f.degree(),
        inflection_degree: i.total_degree(),
        convex,
        reduced,
        method,
        cofactor_degree,
        line_count: lines.iter().map(|l| l.multiplicity).sum(),
        lines,
    })
}

/// A point of the projective plane, exact when its coordinates were
/// recognised and certified.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint {
    pub coords: [Scalar; 3],
    pub exact: bool,
}

impl ProjPoint {
    pub fn to_complex(&self) -> [C; 3] {
        [0, 1, 2].map(|i| self.coords[i].to_complex())
    }

    fn float(c: [C; 3]) -> ProjPoint {
        ProjPoint {
            coords: c.map(|z| if z == ZERO { Scalar::zero() } else { Scalar::Cplx(z) }),
            exact: false,
        }
    }

    fn rings(&self) -> impl Iterator<Item = Ring> + '_ {
        self.coords.iter().map(Scalar::ring)
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} : {} : {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ProjPoint", 3)?;
        st.serialize_field("coords", &self.coords.iter().map(Scalar::to_string).collect::<Vec<_>>())?;
        st.serialize_field("approx", &self.to_complex().map(|z| [z.re, z.im]))?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

fn uni_roots(f: &MultiPoly, var: usize) -> Result<Vec<C>> {
    if f.degree_in(var) == 0 {
        return Ok(Vec::new());
    }
    let cs: Vec<C> = f
        .coeffs_in(var)
        .iter()
        .map(|c| c.constant_value().map_or(ZERO, |s| s.to_complex()))
        .collect();
    poly_roots(&cs)
}

fn plane_residual(a: &MultiPoly, b: &MultiPoly, pt: &[C]) -> f64 {
    relative_value(a, pt, true).max(relative_value(b, pt, true))
}

fn newton_polish(a: &MultiPoly, b: &MultiPoly, grad: &[MultiPoly; 4], mut pt: [C; 2]) -> [C; 2] {
    for _ in 0..30 {
        let (va, vb) = (a.eval_c(&pt), b.eval_c(&pt));
        let j = grad.each_ref().map(|g| g.eval_c(&pt));
        let det = j[0] * j[3] - j[1] * j[2];
        if det.norm() == 0.0 {
            break;
        }
        let dx = (va * j[3] - vb * j[1]) / det;
        let dy = (vb * j[0] - va * j[2]) / det;
        let cand = [pt[0] - dx, pt[1] - dy];
        if plane_residual(a, b, &cand) > plane_residual(a, b, &pt) {
            break;
        }
        pt = cand;
        if dx.norm() + dy.norm() <= 1e-16 * (1.0 + pt[0].norm() + pt[1].norm()) {
            break;
        }
    }
    pt
}

/// Tries to replace float coordinates by exact ones on which every
/// polynomial in `eqs` vanishes exactly.
fn certify(coords: &[C], eqs: &[&MultiPoly], ring: Ring) -> Option<Vec<Scalar>> {
    for fs in field_lists(ring) {
        let exact: Option<Vec<Scalar>> = coords.iter().map(|z| recognize(*z, &fs, 1e-9)).collect();
        let Some(exact) = exact else { continue };
        if !exact_compatible(exact.iter().map(Scalar::ring).chain([ring])) {
            continue;
        }
        if eqs.iter().all(|e| e.eval(&exact).is_zero()) {
            return Some(exact);
        }
    }
    None
}

fn sort_key(c: &[C; 3]) -> [f64; 6] {
    [c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im]
}

/// All singular points: the common zeros of the affine field, found through
/// `Res_y(A, B)` and `Res_x(A, B)` and polished by Newton's method, followed
/// by the singular points on the line at infinity.
pub fn singular_points(f: &Foliation) -> Result<Vec<ProjPoint>> {
    let ring = f.ring();
    if !ring.is_exact() {
        return Err(Error::InexactRing(ring.to_string()));
    }
    let (a, b) = (f.a(), f.b());
    let ry = resultant(a, b, 1)?;
    let rx = resultant(a, b, 0)?;
    if ry.is_zero() || rx.is_zero() {
        return Err(Error::Degenerate("the singular set is not isolated".into()));
    }
    let xs = uni_roots(&squarefree_part(&ry)?, 0)?;
    let ys = uni_roots(&squarefree_part(&rx)?, 1)?;
    let grad = [a.derivative(0), a.derivative(1), b.derivative(0), b.derivative(1)];
    let mut affine: Vec<[C; 2]> = Vec::new();
    for x in &xs {
        for y in &ys {
            if plane_residual(a, b, &[*x, *y]) > 1e-6 {
                continue;
            }
            let pt = newton_polish(a, b, &grad, [*x, *y]);
            if plane_residual(a, b, &pt) > POINT_RESIDUAL {
                continue;
            }
            let scale = 1.0 + pt[0].norm() + pt[1].norm();
            if affine.iter().any(|q| (q[0] - pt[0]).norm() + (q[1] - pt[1]).norm() <= 1e-8 * scale) {
                continue;
            }
            affine.push(pt);
        }
    }
    let mut out: Vec<ProjPoint> = affine
        .iter()
        .map(|pt| match certify(pt, &[a, b], ring) {
            Some(e) => ProjPoint {
                coords: [e[0].clone(), e[1].clone(), Scalar::one()],
                exact: true,
            },
            None => ProjPoint::float([pt[0], pt[1], C::new(1.0, 0.0)]),
        })
        .collect();
    out.sort_by(|p, q| {
        let (kp, kq) = (sort_key(&p.to_complex()), sort_key(&q.to_complex()));
        kp.iter().zip(&kq).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    out.extend(points_at_infinity(f)?);
    Ok(out)
}

fn points_at_infinity(f: &Foliation) -> Result<Vec<ProjPoint>> {
    let pv = proj_vars();
    let ring = f.ring();
    let h = f.hom();
    let (x, y) = (MultiPoly::var(&pv, 0), MultiPoly::var(&pv, 1));
    let at_inf = |p: &MultiPoly| p.eval_var(2, &Scalar::zero());
    let c0 = at_inf(&h[2]);
    let w0 = at_inf(&(&(&x * &h[1]) - &(&y * &h[0])));
    let g = match (c0.is_zero(), w0.is_zero()) {
        (true, true) => return Err(Error::Degenerate("the line at infinity is singular".into())),
        (true, false) => w0.clone(),
        (false, true) => c0.clone(),
        (false, false) => gcd(&c0, &w0)?,
    };
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let g = squarefree_part(&g)?;
    let n = g.total_degree() as usize;
    // g(x, 1, 0), lowest degree first.
    let mut cs = vec![ZERO; n + 1];
    for (e, c) in g.terms() {
        cs[e[0] as usize] += c.to_complex();
    }
    let mut top = n;
    while top > 0 && cs[top] == ZERO {
        top -= 1;
    }
    let mut pts: Vec<[C; 3]> = poly_roots(&cs[..=top])?
        .into_iter()
        .map(|r| [r, C::new(1.0, 0.0), ZERO])
        .collect();
    if top < n {
        pts.push([C::new(1.0, 0.0), ZERO, ZERO]);
    }
    Ok(pts
        .into_iter()
        .map(|p| {
            let exact = certify(&p, &[&c0, &w0], ring);
            match exact {
                Some(e) => ProjPoint {
                    coords: [e[0].clone(), e[1].clone(), e[2].clone()],
                    exact: true,
                },
                None => ProjPoint::float(p),
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearClass {
    NondegenerateDiagonalizable,
    Radial,
    Nilpotent,
    Zero,
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityRecord {
    pub location: ProjPoint,
    /// Chart used for the local computation.
    pub chart: usize,
    pub class: LinearClass,
    /// `nu - 1` for radial points.
    pub radial_order: Option<u32>,
    /// Tangency order of a generic line through the point.
    pub nu: u32,
    /// Linear part `[[A_x, A_y], [B_x, B_y]]` in the chart, as `[re, im]`.
    pub jacobian: [[[f64; 2]; 2]; 2],
}

/// Linear part and generic-line tangency order at a singular point.
///
/// The field is moved to the chart where the point has its largest
/// coordinate and shifted to the origin. `nu` is the least `k >= 1` for which
/// `y A_k - x B_k` is not identically zero, `A_k` and `B_k` being the
/// homogeneous parts of degree `k`: along `t (1, m)` the tangency polynomial
/// `m A - B` starts at `t^nu`.
pub fn classify_singularity(f: &Foliation, s: &ProjPoint) -> Result<SingularityRecord> {
    let sc = s.to_complex();
    let j = (0..3).max_by(|&u, &v| sc[u].norm().total_cmp(&sc[v].norm())).unwrap();
    let (u, v) = ((j + 1) % 3, (j + 2) % 3);
    let (ca, cb) = f.in_chart(j);
    let pv = plane_vars();
    let exact = s.exact && exact_compatible(s.rings().chain([f.ring()]));
    let (ca, cb, x0, y0) = if exact {
        let x0 = s.coords[u].div(&s.coords[j]).unwrap();
        let y0 = s.coords[v].div(&s.coords[j]).unwrap();
        (ca, cb, x0, y0)
    } else {
        (ca.to_complex(), cb.to_complex(), Scalar::Cplx(sc[u] / sc[j]), Scalar::Cplx(sc[v] / sc[j]))
    };
    let images = [
        &MultiPoly::var(&pv, 0) + &MultiPoly::constant(&pv, x0),
        &MultiPoly::var(&pv, 1) + &MultiPoly::constant(&pv, y0),
    ];
    let (sa, sb) = (ca.compose(&images), cb.compose(&images));
    let scale = sa.max_abs_coeff().max(sb.max_abs_coeff());
    let is_zero = |c: &Scalar| if exact { c.is_zero() } else { c.abs_f64() <= FLOAT_ZERO * scale };
    if !is_zero(&sa.coeff(&[0, 0])) || !is_zero(&sb.coeff(&[0, 0])) {
        return Err(Error::Domain(format!("{s} is not a singular point")));
    }
    let jac = [sa.coeff(&[1, 0]), sa.coeff(&[0, 1]), sb.coeff(&[1, 0]), sb.coeff(&[0, 1])];
    let jc = jac.each_ref().map(|c| c.to_complex());
    let tr = jc[0] + jc[3];
    let det = jc[0] * jc[3] - jc[1] * jc[2];
    let jscale = jc.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let class = if jac.iter().all(is_zero) {
        LinearClass::Zero
    } else if is_zero(&jac[1]) && is_zero(&jac[2]) && is_zero(&(&jac[0] - &jac[3])) {
        LinearClass::Radial
    } else {
        let small = |z: C, s: f64| if exact { z == ZERO } else { z.norm() <= FLOAT_ZERO * s };
        let det_zero = if exact { (&(&jac[0] * &jac[3]) - &(&jac[1] * &jac[2])).is_zero() } else { small(det, jscale * jscale) };
        let tr_zero = if exact { (&jac[0] + &jac[3]).is_zero() } else { small(tr, jscale) };
        let disc = tr * tr - 4.0 * det;
        let disc_zero = if exact {
            let t = &jac[0] + &jac[3];
            let d = &(&jac[0] * &jac[3]) - &(&jac[1] * &jac[2]);
            (&(&t * &t) - &(&Scalar::int(4) * &d)).is_zero()
        } else {
            small(disc, jscale * jscale)
        };
        if det_zero && tr_zero {
            LinearClass::Nilpotent
        } else if !det_zero && !disc_zero {
            LinearClass::NondegenerateDiagonalizable
        } else {
            LinearClass::Other
        }
    };
    let (xv, yv) = (MultiPoly::var(&pv, 0), MultiPoly::var(&pv, 1));
    let top = sa.total_degree().max(sb.total_degree());
    let mut nu = None;
    for k in 1..=top {
        let form = &(&yv * &sa.homogeneous_part(k)) - &(&xv * &sb.homogeneous_part(k));
        let nonzero = if exact { !form.is_zero() } else { form.max_abs_coeff() > FLOAT_ZERO * scale };
        if nonzero {
            nu = Some(k);
            break;
        }
    }
    let nu = nu.ok_or_else(|| Error::Degenerate("every line through the point is invariant".into()))?;
    let c2 = |z: C| [z.re, z.im];
    Ok(SingularityRecord {
        location: s.clone(),
        chart: j,
        class,
        radial_order: (class == LinearClass::Radial).then_some(nu - 1),
        nu,
        jacobian: [[c2(jc[0]), c2(jc[1])], [c2(jc[2]), c2(jc[3])]],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialCensus {
    pub degree: u32,
    pub singular_points: u32,
    /// Radial order `nu - 1` to count.
    pub counts: BTreeMap<u32, u32>,
    /// The same census keyed by the tangency order `nu`.
    pub nu_counts: BTreeMap<u32, u32>,
    pub total: u32,
    /// `sum i r_i` over radial orders.
    pub weighted: u32,
    /// `sum nu r_nu`, for readings that count by tangency order.
    pub weighted_nu: u32,
    /// `(d + 2)(d - 1)`.
    pub bound: u32,
    pub within_bound: bool,
    pub within_bound_nu: bool,
    pub records: Vec<SingularityRecord>,
}

pub fn radial_census(f: &Foliation) -> Result<RadialCensus> {
    let pts = singular_points(f)?;
    let records: Vec<SingularityRecord> = pts
        .par_iter()
        .map(|p| classify_singularity(f, p))
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    let mut nu_counts = BTreeMap::new();
    for r in &records {
        if let Some(o) = r.radial_order {
            *counts.entry(o).or_insert(0) += 1;
            *nu_counts.entry(r.nu).or_insert(0) += 1;
        }
    }
    let d = f.degree();
    let bound = if d >= 1 { (d + 2) * (d - 1) } else { 0 };
    let weighted = counts.iter().map(|(o, c)| o * c).sum();
    let weighted_nu = nu_counts.iter().map(|(n, c)| n * c).sum();
    Ok(RadialCensus {
        degree: d,
        singular_points: records.len() as u32,
        total: counts.values().sum(),
        counts,
        nu_counts,
        weighted,
        weighted_nu,
        bound,
        within_bound: weighted <= bound,
        within_bound_nu: weighted_nu <= bound,
        records,
    })
}

/// `det[(x, y, z); X_f; X_g]`, of degree `d_f + d_g + 1`.
pub fn tangency_divisor(f: &Foliation, g: &Foliation) -> Result<MultiPoly> {
    f.ring().join(g.ring())?;
    let v = MultiPoly::gens(&proj_vars());
    let (hf, hg) = (f.hom(), g.hom());
    let det = det3([[&v[0], &v[1], &v[2]], [&hf[0], &hf[1], &hf[2]], [&hg[0], &hg[1], &hg[2]]]);
    if det.is_zero() {
        return Err(Error::Degenerate("the two foliations coincide".into()));
    }
    Ok(det)
}

/// The line of the dual plane made of lines through `s`, in the chart of
/// the affine Legendre transform: `s_1 x + s_3 y - s_2 z`.
pub fn dual_line(s: &ProjPoint) -> Result<LinearForm> {
    let c = &s.coords;
    LinearForm::new(c[0].clone(), c[2].clone(), -&c[1])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Multiplicity {
    pub value: u32,
    pub exact: bool,
}

/// Multiplicity of a line in a homogeneous polynomial over `(x, y, z)`.
///
/// Exact division when the rings allow it; otherwise the vanishing order of
/// `g` along two random transversals through random points of the line.
pub fn line_multiplicity(g: &MultiPoly, l: &LinearForm) -> Result<Multiplicity> {
    if g.is_exact() && l.is_exact() && exact_compatible(line_rings(l).chain([g.ring()])) {
        return Ok(Multiplicity {
            value: linear_factor_multiplicity(g, l, &[0, 1, 2])?,
            exact: true,
        });
    }
    if g.is_zero() {
        return Err(Error::Degenerate("multiplicity in the zero polynomial".into()));
    }
    let lc = l.to_complex();
    let mut rng = ChaCha8Rng::seed_from_u64(0x3417_1c17);
    let mut best = u32::MAX;
    for _ in 0..2 {
        let q = cross_c(lc, random_vec(&mut rng));
        let v = random_vec(&mut rng);
        let (cs, sc) = restrict(g, q, v);
        let order = cs
            .iter()
            .zip(&sc)
            .position(|(c, s)| c.norm() > 1e-10 * s)
            .unwrap_or(cs.len()) as u32;
        best = best.min(order);
    }
    Ok(Multiplicity { value: best, exact: false })
}

#[derive(Clone, Debug, Serialize)]
pub struct DualLineCheck {
    pub point: ProjPoint,
    pub radial_order: u32,
    pub dual_line: String,
    pub multiplicity: Multiplicity,
    pub pass: bool,
}

/// For each radial singularity of `f`, the multiplicity of its dual line in
/// the projective discriminant of the Legendre transform of `f`.
pub fn radial_dual_multiplicities(f: &Foliation) -> Result<Vec<DualLineCheck>> {
    let census = radial_census(f)?;
    let leg = legendre_affine(&foliation_to_web(f)?)?;
    let delta = projective_discriminant(&leg)?;
    census
        .records
        .iter()
        .filter_map(|r| r.radial_order.map(|o| (r, o)))
        .map(|(r, o)| {
            let l = dual_line(&r.location)?;
            let m = line_multiplicity(&delta, &l)?;
            Ok(DualLineCheck {
                point: r.location.clone(),
                radial_order: o,
                dual_line: l.to_string(),
                multiplicity: m,
                pass: m.value == o,
            })
        })
        .collect()
}

fn random_projectivity(seed: u64) -> ([[i64; 3]; 3], [[i64; 3]; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m: [[i64; 3]; 3] = [0, 1, 2].map(|_| [0, 1, 2].map(|_| rng.gen_range(-20..=20)));
        let cof = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        let c: [[i64; 3]; 3] = [0, 1, 2].map(|i| [0, 1, 2].map(|j| cof(i, j)));
        let det: i64 = (0..3).map(|j| m[0][j] * c[0][j]).sum();
        if det != 0 {
            return (m, c);
        }
    }
}

/// Applies a point transformation `x -> M x` to a web, with lines moved by
/// the cofactor matrix so that incidence is preserved.
pub fn transform_web(pw: &ProjWeb, m: &[[i64; 3]; 3], cof: &[[i64; 3]; 3]) -> Result<ProjWeb> {
    let bv = biproj_vars();
    let g = MultiPoly::gens(&bv);
    let row = |mat: &[[i64; 3]; 3], i: usize, off: usize| {
        (0..3).fold(MultiPoly::zero(&bv), |acc, j| &acc + &g[off + j].scale(&Scalar::int(mat[i][j])))
    };
    let images: Vec<MultiPoly> = (0..3).map(|i| row(m, i, 0)).chain((0..3).map(|i| row(cof, i, 3))).collect();
    ProjWeb::new(pw.poly().compose(&images))
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantDegree {
    pub k: u32,
    pub d: u32,
    /// `(k - 1)(k + 2d)`.
    pub expected: u32,
    /// Degree of the discriminant in the given chart.
    pub affine: u32,
    /// Degree after a random projective change of coordinates, which moves
    /// every component off the line at infinity.
    pub generic: u32,
}

/// Degree of the discriminant of `w` on a random line `(a t + b, c t + d)`,
/// which equals the degree of the discriminant curve for a generic line.
fn degree_on_line(w: &AffineWeb, rng: &mut ChaCha8Rng) -> Result<u32> {
    let av = affine_vars();
    let t = MultiPoly::var(&av, 0);
    let mut coef = || Scalar::ratio(rng.gen_range(-30..=30), rng.gen_range(1..=7));
    let line = |a: Scalar, b: Scalar| &t.scale(&a) + &MultiPoly::constant(&av, b);
    let images = [line(coef(), coef()), line(coef(), coef()), MultiPoly::var(&av, 2)];
    let g = w.poly().compose(&images);
    let k = w.poly().degree_in(2);
    if g.degree_in(2) < k {
        return Err(Error::Degenerate("the web degenerates on the sampling line".into()));
    }
    let lc = g.coeffs_in(2).pop().expect("degree in p");
    let r = resultant(&g, &g.derivative(2), 2)?;
    let delta = r.div_exact(&lc).ok_or_else(|| Error::Domain("leading coefficient does not divide".into()))?;
    Ok(delta.degree_in(0))
}

/// The affine degree never exceeds the projective one, and they agree unless
/// the chart's line at infinity is a component; the maximum over three
/// random charts is taken, each measured on a random line.
pub fn generic_discriminant_degree(w: &AffineWeb, seed: u64) -> Result<DiscriminantDegree> {
    let affine = discriminant(w, false)?.total_degree();
    let pw = homogenize(w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11_0e);
    let mut generic = 0;
    for trial in 0..3u64 {
        let (m, cof) = random_projectivity(seed.wrapping_add(trial));
        let moved = dehomogenize(&transform_web(&pw, &m, &cof)?, 2)?;
        generic = generic.max(degree_on_line(&moved, &mut rng)?);
    }
    Ok(DiscriminantDegree {
        k: w.k(),
        d: w.d(),
        expected: discriminant_degree(w.k(), w.d()),
        affine,
        generic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariance {
    /// Tangent to the repeated direction.
    TwoWeb,
    /// Tangent to the barycenter of the remaining directions.
    Barycenter,
    Both,
    Neither,
    /// The local splitting into a colliding pair and simple branches fails.
    Degenerate,
    NotSampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentSample {
    pub point: [[f64; 2]; 2],
    pub tangent: Slope,
    pub double_slope: C,
    pub barycenter: Option<Slope>,
    pub margin_two_web: f64,
    pub margin_barycenter: Option<f64>,
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    /// `line`, `line-at-infinity` or `curve` (all nonlinear components
    /// together).
    pub kind: &'static str,
    pub equation: String,
    pub exact: bool,
    pub degree: u32,
    pub multiplicity: Option<Multiplicity>,
    pub invariance: Invariance,
    pub max_margin_two_web: Option<f64>,
    pub max_margin_barycenter: Option<f64>,
    pub samples: Vec<ComponentSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub k: u32,
    pub d: u32,
    pub degree: u32,
    pub reduced_degree: u32,
    pub components: Vec<ComponentReport>,
}

fn chord(a: Slope, b: Slope) -> f64 {
    match (a, b) {
        (Slope::Infinite, Slope::Infinite) => 0.0,
        (Slope::Infinite, Slope::Finite(z)) | (Slope::Finite(z), Slope::Infinite) => 1.0 / (1.0 + z.norm_sqr()).sqrt(),
        (Slope::Finite(u), Slope::Finite(v)) => (u - v).norm() / ((1.0 + u.norm_sqr()) * (1.0 + v.norm_sqr())).sqrt(),
    }
}

fn slope_of_gradient(gx: C, gy: C) -> Slope {
    if gy.norm() <= 1e-300 * gx.norm() || gy == ZERO {
        Slope::Infinite
    } else {
        Slope::Finite(-gx / gy)
    }
}

/// Directions at a point of the discriminant, split into the colliding pair
/// and the remaining simple ones.
fn analyse_point(ev: &WebEval, x: C, y: C, tangent: Slope) -> Option<ComponentSample> {
    let (cs, _) = ev.slope_poly(x, y);
    let k = cs.len() - 1;
    let big = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if big == 0.0 || cs[k].norm() < 1e-8 * big {
        return None;
    }
    let roots = poly_roots(&cs).ok()?;
    let (mut bi, mut bj, mut best) = (0, 1, f64::INFINITY);
    for i in 0..k {
        for j in i + 1..k {
            let d = (roots[i] - roots[j]).norm();
            if d < best {
                (bi, bj, best) = (i, j, d);
            }
        }
    }
    let dcs: Vec<C> = cs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    let start = (roots[bi] + roots[bj]) / 2.0;
    let mut p = start;
    for _ in 0..30 {
        let (v, dv) = horner(&dcs, p);
        if dv == ZERO {
            break;
        }
        let step = v / dv;
        p -= step;
        if step.norm() <= 1e-16 * (1.0 + p.norm()) {
            break;
        }
    }
    if !p.is_finite() || (p - start).norm() > 1e-4 * (1.0 + start.norm()) {
        p = start;
    }
    let others: Vec<C> = (0..k).filter(|&i| i != bi && i != bj).map(|i| roots[i]).collect();
    let scale = 1.0 + p.norm();
    let near_pair = best > 1e-4 * scale;
    let third = others.iter().any(|o| (o - p).norm() < 1e-3 * scale);
    let second_pair = (0..others.len())
        .any(|i| (i + 1..others.len()).any(|j| (others[i] - others[j]).norm() < 1e-4 * (1.0 + others[i].norm())));
    let degenerate = near_pair || third || second_pair;
    let bary = (!others.is_empty()).then(|| barycenter_slope(Slope::Finite(p), &others));
    Some(ComponentSample {
        point: [[x.re, x.im], [y.re, y.im]],
        tangent,
        double_slope: p,
        barycenter: bary,
        margin_two_web: chord(Slope::Finite(p), tangent),
        margin_barycenter: bary.map(|b| chord(b, tangent)),
        degenerate,
    })
}

fn summarize(samples: &[ComponentSample]) -> (Invariance, Option<f64>, Option<f64>) {
    if samples.is_empty() {
        return (Invariance::NotSampled, None, None);
    }
    let degenerate = samples.iter().filter(|s| s.degenerate).count();
    if 2 * degenerate >= samples.len() {
        return (Invariance::Degenerate, None, None);
    }
    let good: Vec<&ComponentSample> = samples.iter().filter(|s| !s.degenerate).collect();
    let m2 = good.iter().map(|s| s.margin_two_web).fold(0.0, f64::max);
    let mb = good
        .iter()
        .map(|s| s.margin_barycenter)
        .try_fold(0.0f64, |acc, m| m.map(|m| acc.max(m)));
    let two = m2 < INVARIANT_MARGIN;
    let bary = mb.is_some_and(|m| m < INVARIANT_MARGIN);
    let inv = match (two, bary) {
        (true, true) => Invariance::Both,
        (true, false) => Invariance::TwoWeb,
        (false, true) => Invariance::Barycenter,
        (false, false) => Invariance::Neither,
    };
    (inv, Some(m2), mb)
}

fn sample_line(ev: &WebEval, l: [C; 3], seed: u64) -> Vec<ComponentSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [a, b, c] = l;
    let tangent = slope_of_gradient(a, b);
    let mut out = Vec::new();
    for _ in 0..4 * COMPONENT_SAMPLES {
        if out.len() == COMPONENT_SAMPLES {
            break;
        }
        let t = C::new(rng.gen_range(-1.5..1.5), 0.0);
        let (x, y) = if b.norm() >= a.norm() { (t, -(a * t + c) / b) } else { (-(b * t + c) / a, t) };
        if let Some(s) = analyse_point(ev, x, y, tangent) {
            out.push(s);
        }
    }
    out
}

fn sample_curve(ev: &WebEval, curve: &MultiPoly, avoid: &[[C; 3]], seed: u64) -> Vec<ComponentSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (gx, gy) = (curve.derivative(0), curve.derivative(1));
    let hom = homogenize_to(curve, curve.total_degree()).expect("degree fits");
    let mut out = Vec::new();
    for _ in 0..4 * COMPONENT_SAMPLES {
        if out.len() == COMPONENT_SAMPLES {
            break;
        }
        let (m, c) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        // Meet the curve with y = m x + c, written as the projective line
        // through (0, c, 1) and (1, m, 0).
        let (cs, sc) = restrict(
            &hom,
            [ZERO, C::new(c, 0.0), C::new(1.0, 0.0)],
            [C::new(1.0, 0.0), C::new(m, 0.0), ZERO],
        );
        let mut top = cs.len() - 1;
        while top > 0 && cs[top].norm() <= 1e-12 * sc[top].max(f64::MIN_POSITIVE) {
            top -= 1;
        }
        if top == 0 {
            continue;
        }
        let Ok(ts) = poly_roots(&cs[..=top]) else { continue };
        let t = ts[rng.gen_range(0..ts.len())];
        let (x, y) = (t, C::new(c, 0.0) + t * m);
        let pt = [x, y, C::new(1.0, 0.0)];
        let on_line = avoid.iter().any(|l| {
            let v: C = (0..3).map(|i| l[i] * pt[i]).sum();
            v.norm() <= 1e-6 * norm3(l) * norm3(&pt)
        });
        if on_line {
            continue;
        }
        let (dx, dy) = (gx.eval_c(&[x, y]), gy.eval_c(&[x, y]));
        let gscale = gx.eval_abs(&[x, y]) + gy.eval_abs(&[x, y]);
        if dx.norm() + dy.norm() <= 1e-8 * gscale {
            continue;
        }
        if let Some(s) = analyse_point(ev, x, y, slope_of_gradient(dx, dy)) {
            out.push(s);
        }
    }
    out
}

/// Components of the discriminant of a `k`-web (`k >= 3`) and, at sampled
/// points of each, whether the component is tangent to the colliding pair of
/// directions or to the barycenter of the remaining ones.
///
/// Linear components are found exactly when possible and carry their
/// multiplicity. All nonlinear components are sampled together as one
/// `curve` entry. The line at infinity is reported but not sampled.
pub fn discriminant_component_report(w: &AffineWeb) -> Result<DeltaReport> {
    if w.k() < 3 {
        return Err(Error::Domain("the component report needs a web with at least three directions".into()));
    }
    let delta = projective_discriminant(w)?;
    let red = squarefree_part(&delta)?;
    let lines = linear_factors(&red, LINE_SEED)?;
    let ev = WebEval::new(w);
    let line_cs: Vec<[C; 3]> = lines.iter().map(LinearForm::to_complex).collect();
    let mut components: Vec<ComponentReport> = lines
        .par_iter()
        .enumerate()
        .map(|(idx, l)| {
            let c = l.to_complex();
            let multiplicity = Some(line_multiplicity(&delta, l)?);
            let at_infinity = c[0].norm() + c[1].norm() <= 1e-12 * c[2].norm();
            let samples = if at_infinity { Vec::new() } else { sample_line(&ev, c, 0xde17a ^ idx as u64) };
            let (invariance, m2, mb) = summarize(&samples);
            Ok(ComponentReport {
                kind: if at_infinity { "line-at-infinity" } else { "line" },
                equation: l.to_string(),
                exact: l.is_exact(),
                degree: 1,
                multiplicity,
                invariance,
                max_margin_two_web: m2,
                max_margin_barycenter: mb,
                samples,
            })
        })
        .collect::<Result<_>>()?;
    let rest = red.total_degree() - lines.len() as u32;
    if rest > 0 {
        let pv = proj_vars();
        let all_exact = lines
            .iter()
            .all(|l| l.is_exact() && exact_compatible(line_rings(l).chain([red.ring()])));
        let (curve, exact) = if all_exact {
            let mut cof = red.clone();
            for l in &lines {
                cof = cof.div_exact(&l.to_poly(&pv, &[0, 1, 2])).expect("found lines divide");
            }
            (cof, true)
        } else {
            (red.clone(), false)
        };
        let affine = dehomogenize_plane(&curve);
        let samples = sample_curve(&ev, &affine, &line_cs, 0xc0e7e);
        let (invariance, m2, mb) = summarize(&samples);
        components.push(ComponentReport {
            kind: "curve",
            equation: if exact { curve.to_string() } else { format!("nonlinear part of degree {rest}") },
            exact,
            degree: rest,
            multiplicity: None,
            invariance,
            max_margin_two_web: m2,
            max_margin_barycenter: mb,
            samples,
        });
    }
    Ok(DeltaReport {
        k: w.k(),
        d: w.d(),
        degree: delta.total_degree(),
        reduced_degree: red.total_degree(),
        components,
    })
}
