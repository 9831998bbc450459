//! Slopes of a web at a point and their derivatives.
//!
//! [`WebEval`] compiles `F(x, y; p)` to complex floats once; every other
//! function here works on it. Slopes come from the univariate polynomial
//! `F(x0, y0; .)`. Derivatives of a slope branch `p(x, y)` follow from
//! differentiating `F(x, y, p(x, y)) = 0` once and twice.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::roots::{horner, poly_roots, relative_residual};
use crate::algebra::MultiPoly;
use crate::error::{Error, Result};
use crate::web::AffineWeb;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Relative floor for the discriminant and for `|F_p|`.
pub const ADMISSIBLE_FLOOR: f64 = 1e-8;
/// Slopes closer than this (relative) are flagged as near-degenerate.
pub const NEAR_COLLISION: f64 = 1e-7;

/// `F` and its partial derivatives up to order two.
#[derive(Clone, Copy, Debug, Default)]
pub struct Partials {
    pub f: C,
    pub fx: C,
    pub fy: C,
    pub fp: C,
    pub fxx: C,
    pub fxy: C,
    pub fyy: C,
    pub fxp: C,
    pub fyp: C,
    pub fpp: C,
    /// `sum |c| |x|^i |y|^j |p|^l`, the scale of `f`.
    pub scale: f64,
}

/// A web polynomial compiled for repeated complex evaluation.
#[derive(Clone, Debug)]
pub struct WebEval {
    terms: Vec<([u16; 3], C)>,
    k: usize,
    deg: [usize; 3],
}

impl WebEval {
    pub fn new(w: &AffineWeb) -> WebEval {
        WebEval::from_poly(w.poly())
    }

    /// From any polynomial over `(x, y, p)`.
    pub fn from_poly(f: &MultiPoly) -> WebEval {
        let terms: Vec<([u16; 3], C)> = f.terms().map(|(e, c)| ([e[0], e[1], e[2]], c.to_complex())).collect();
        let deg = [0, 1, 2].map(|i| terms.iter().map(|(e, _)| e[i] as usize).max().unwrap_or(0));
        WebEval { terms, k: deg[2], deg }
    }

    /// Counts `k` directions even when the degree in `p` is lower.
    pub fn with_degree(f: &MultiPoly, k: usize) -> WebEval {
        let mut ev = WebEval::from_poly(f);
        ev.k = ev.k.max(k);
        ev
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn powers(z: C, n: usize) -> Vec<C> {
        let mut v = Vec::with_capacity(n + 1);
        v.push(C::new(1.0, 0.0));
        for i in 1..=n {
            v.push(v[i - 1] * z);
        }
        v
    }

    /// Coefficients of `F(x, y; .)`, lowest first, and their scales.
    pub fn slope_poly(&self, x: C, y: C) -> (Vec<C>, Vec<f64>) {
        let px = Self::powers(x, self.deg[0]);
        let py = Self::powers(y, self.deg[1]);
        let mut cs = vec![ZERO; self.k + 1];
        let mut sc = vec![0.0; self.k + 1];
        for (e, c) in &self.terms {
            let t = c * px[e[0] as usize] * py[e[1] as usize];
            cs[e[2] as usize] += t;
            sc[e[2] as usize] += t.norm();
        }
        (cs, sc)
    }

    pub fn partials(&self, x: C, y: C, p: C) -> Partials {
        let n = self.deg[0].max(self.deg[1]).max(self.deg[2]);
        let (px, py, pp) = (Self::powers(x, n), Self::powers(y, n), Self::powers(p, n));
        let (ax, ay, ap) = (x.norm(), y.norm(), p.norm());
        let pw = |v: &[C], k: i32| if k < 0 { ZERO } else { v[k as usize] };
        let mut out = Partials::default();
        for (e, c) in &self.terms {
            let (i, j, l) = (e[0] as i32, e[1] as i32, e[2] as i32);
            let (fi, fj, fl) = (i as f64, j as f64, l as f64);
            let m = |a: i32, b: i32, d: i32| c * pw(&px, i - a) * pw(&py, j - b) * pw(&pp, l - d);
            out.f += m(0, 0, 0);
            out.fx += m(1, 0, 0) * fi;
            out.fy += m(0, 1, 0) * fj;
            out.fp += m(0, 0, 1) * fl;
            out.fxx += m(2, 0, 0) * fi * (fi - 1.0);
            out.fxy += m(1, 1, 0) * fi * fj;
            out.fyy += m(0, 2, 0) * fj * (fj - 1.0);
            out.fxp += m(1, 0, 1) * fi * fl;
            out.fyp += m(0, 1, 1) * fj * fl;
            out.fpp += m(0, 0, 2) * fl * (fl - 1.0);
            out.scale += c.norm() * ax.powi(i) * ay.powi(j) * ap.powi(l);
        }
        out
    }
}

/// The slopes of a web at one point.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeSet {
    pub point: (C, C),
    pub slopes: Vec<C>,
    /// Smallest pairwise distance between slopes.
    pub separation: f64,
    /// Smallest `|F_p|` over the branches, relative to its scale.
    pub conditioning: f64,
    /// Normalized discriminant `(a_k / max|a_i|)^(2k-2) prod |w_i - w_j|^2`.
    pub discriminant: f64,
}

/// All `k` slopes at `(x, y)`, polished, with admissibility checks.
pub fn slope_roots(ev: &WebEval, x: C, y: C) -> Result<SlopeSet> {
    let (cs, sc) = ev.slope_poly(x, y);
    let k = ev.k();
    let big = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return Err(Error::OnDiscriminant);
    }
    if cs[k].norm() < ADMISSIBLE_FLOOR * big || cs[k].norm() < 1e-14 * sc[k] {
        return Err(Error::LeadingCollapse);
    }
    let roots = poly_roots(&cs)?;
    let mut worst: f64 = 0.0;
    for r in &roots {
        worst = worst.max(relative_residual(&cs, *r));
    }
    if worst > 1e-12 {
        return Err(Error::NoConvergence(worst));
    }
    let mut sep = f64::INFINITY;
    let mut disc = (cs[k].norm() / big).powi(2 * k as i32 - 2);
    for i in 0..k {
        for j in i + 1..k {
            let d = (roots[i] - roots[j]).norm();
            sep = sep.min(d);
            disc *= d * d;
        }
    }
    let mut cond = f64::INFINITY;
    for r in &roots {
        let (_, dp) = horner(&cs, *r);
        let mut s = 0.0;
        let rn = r.norm();
        for (i, c) in cs.iter().enumerate().skip(1) {
            s += i as f64 * c.norm() * rn.powi(i as i32 - 1);
        }
        cond = cond.min(if s == 0.0 { 0.0 } else { dp.norm() / s });
    }
    if k > 1 && disc < ADMISSIBLE_FLOOR {
        return Err(Error::OnDiscriminant);
    }
    if cond < ADMISSIBLE_FLOOR {
        return Err(Error::OnDiscriminant);
    }
    Ok(SlopeSet {
        point: (x, y),
        slopes: roots,
        separation: if k > 1 { sep } else { f64::INFINITY },
        conditioning: cond,
        discriminant: disc,
    })
}

/// A slope branch with its first and second derivatives at a point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BranchJet {
    pub p: C,
    pub px: C,
    pub py: C,
    pub pxx: C,
    pub pxy: C,
    pub pyy: C,
}

/// Implicit derivatives of the branch through `slope`.
pub fn branch_jet(ev: &WebEval, x: C, y: C, slope: C) -> Result<BranchJet> {
    let d = ev.partials(x, y, slope);
    if d.fp.norm() < ADMISSIBLE_FLOOR * d.scale.max(f64::MIN_POSITIVE) {
        return Err(Error::OnDiscriminant);
    }
    Ok(jet_from_partials(&d, slope))
}

pub fn jet_from_partials(d: &Partials, p: C) -> BranchJet {
    let px = -d.fx / d.fp;
    let py = -d.fy / d.fp;
    let pxx = -(d.fxx + 2.0 * d.fxp * px + d.fpp * px * px) / d.fp;
    let pxy = -(d.fxy + d.fxp * py + d.fyp * px + d.fpp * px * py) / d.fp;
    let pyy = -(d.fyy + 2.0 * d.fyp * py + d.fpp * py * py) / d.fp;
    BranchJet { p, px, py, pxx, pxy, pyy }
}

/// A slope on the projective line of directions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Slope {
    Finite(C),
    Infinite,
}

impl Slope {
    pub fn finite(re: f64, im: f64) -> Slope {
        Slope::Finite(C::new(re, im))
    }

    /// Homogeneous coordinates `(u : w)` with slope `u / w`.
    fn hom(self) -> (C, C) {
        match self {
            Slope::Finite(z) => (z, C::new(1.0, 0.0)),
            Slope::Infinite => (C::new(1.0, 0.0), ZERO),
        }
    }

    fn mobius(self, m: [C; 4]) -> Slope {
        let (u, w) = self.hom();
        let (nu, nw) = (m[0] * u + m[1] * w, m[2] * u + m[3] * w);
        if nw.norm() <= 1e-300 * nu.norm() {
            Slope::Infinite
        } else {
            Slope::Finite(nu / nw)
        }
    }
}

impl From<C> for Slope {
    fn from(z: C) -> Slope {
        Slope::Finite(z)
    }
}

/// `f - k W(f) / W'(f)` with `W(t) = prod (t - w_i)`. A center at infinity
/// gives the mean of the slopes.
pub fn barycenter_slope(center: Slope, slopes: &[C]) -> Slope {
    let k = slopes.len() as f64;
    let f = match center {
        Slope::Infinite => return Slope::Finite(slopes.iter().sum::<C>() / k),
        Slope::Finite(f) => f,
    };
    if slopes.iter().any(|w| *w == f) {
        return Slope::Finite(f);
    }
    // W'(f) / W(f) = sum 1 / (f - w_i).
    let s: C = slopes.iter().map(|w| (f - w).inv()).sum();
    if s.norm() == 0.0 {
        return Slope::Infinite;
    }
    Slope::Finite(f - k / s)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct JInvariant {
    pub j: C,
    pub lambda: C,
    pub near_degenerate: bool,
}

/// The j-invariant of four directions via the cross-ratio
/// `((z1 - z3)(z2 - z4)) / ((z1 - z4)(z2 - z3))`.
pub fn j_invariant(s: [Slope; 4]) -> Result<JInvariant> {
    let h = s.map(Slope::hom);
    let diff = |i: usize, j: usize| h[i].0 * h[j].1 - h[j].0 * h[i].1;
    let norm = |i: usize| (h[i].0.norm_sqr() + h[i].1.norm_sqr()).sqrt();
    let mut near = false;
    for i in 0..4 {
        for j in i + 1..4 {
            let d = diff(i, j);
            if d == ZERO {
                return Err(Error::Degenerate("repeated direction: j is undefined".into()));
            }
            if d.norm() < NEAR_COLLISION * norm(i) * norm(j) {
                near = true;
            }
        }
    }
    let lambda = diff(0, 2) * diff(1, 3) / (diff(0, 3) * diff(1, 2));
    let l2 = lambda * lambda;
    let num = 256.0 * (l2 - lambda + 1.0).powu(3);
    let den = l2 * (lambda - 1.0) * (lambda - 1.0);
    Ok(JInvariant {
        j: num / den,
        lambda,
        near_degenerate: near,
    })
}

/// Applies one Möbius map to all four directions; used in tests.
pub fn mobius_all(s: [Slope; 4], m: [C; 4]) -> [Slope; 4] {
    s.map(|z| z.mobius(m))
}
