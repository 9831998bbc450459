//! Curvature of webs by pointwise evaluation.
//!
//! For a 3-web with forms `omega_i = P_i dx + Q_i dy` and
//! `delta_st = P_s Q_t - Q_s P_t`, the form `eta_rst = A dx + B dy` is fixed
//! by `d(delta_st omega_r) = eta_rst ^ delta_st omega_r` for two of the three
//! cyclic index choices. Web slopes enter as `omega_i = dy - p_i dx`.
//! `K = sum over triples of (d/dx B - d/dy A)`; the outer derivatives come from
//! [`D2`] dual numbers seeded with the exact branch jets.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{MultiPoly, Scalar};
use crate::dual::{Num, D2};
use crate::error::{Error, Result};
use crate::slope::{jet_from_partials, slope_roots, BranchJet, WebEval, ADMISSIBLE_FLOOR};
use crate::web::{affine_vars, AffineWeb};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Rotation angle used when a slope is near vertical.
pub const ROTATION: f64 = 1.0 / 3.0;
/// Slopes larger than this trigger the rotated chart.
pub const VERTICAL: f64 = 1e2;
/// Relative divergence between the dual-number and finite-difference paths
/// above which a sample is flagged.
pub const CROSS_CHECK: f64 = 1e-4;
/// Default flat threshold relative to the normalization scale.
pub const DEFAULT_REL_THRESHOLD: f64 = 1e-6;
/// Not-flat needs this many samples above `NOT_FLAT_MARGIN * threshold`.
pub const NOT_FLAT_COUNT: usize = 3;
pub const NOT_FLAT_MARGIN: f64 = 1e3;
/// Attempts per sample index before giving up.
pub const RETRY_BUDGET: usize = 64;
/// Half-width of the sampling box.
pub const BOX: f64 = 2.0;
const PERTURB_SEED: u64 = 0x0c0f_fee1;
const PERTURB_SIZE: f64 = 0.01;

/// A 1-form `P dx + Q dy` with the first partials of its coefficients.
#[derive(Clone, Copy, Debug)]
pub struct FormJet<T> {
    pub p: T,
    pub px: T,
    pub py: T,
    pub q: T,
    pub qx: T,
    pub qy: T,
}

impl<T: Num> FormJet<T> {
    /// `dy - p dx`.
    pub fn from_slope(p: T, px: T, py: T) -> FormJet<T> {
        let one = T::constant(C::new(1.0, 0.0));
        let zero = T::constant(ZERO);
        FormJet { p: -p, px: -px, py: -py, q: one, qx: zero, qy: zero }
    }
}

fn seed_form(j: &BranchJet) -> FormJet<D2> {
    FormJet::from_slope(D2::new(j.p, j.px, j.py), D2::new(j.px, j.pxx, j.pxy), D2::new(j.py, j.pxy, j.pyy))
}

fn plain_form(j: &BranchJet) -> FormJet<C> {
    FormJet::from_slope(j.p, j.px, j.py)
}

/// `delta_st` and its partials.
fn delta<T: Num>(s: &FormJet<T>, t: &FormJet<T>) -> (T, T, T) {
    (
        s.p * t.q - s.q * t.p,
        s.px * t.q + s.p * t.qx - s.qx * t.p - s.q * t.px,
        s.py * t.q + s.p * t.qy - s.qy * t.p - s.q * t.py,
    )
}

/// `A Q_r - B P_r`, read off from the relation for `r` with `delta_st`.
fn relation<T: Num>(r: &FormJet<T>, s: &FormJet<T>, t: &FormJet<T>) -> Result<T> {
    let (g, gx, gy) = delta(s, t);
    let size = s.p.value().norm() * t.q.value().norm() + s.q.value().norm() * t.p.value().norm();
    if g.value().norm() <= 1e-13 * size || g.value().norm() == 0.0 {
        return Err(Error::Degenerate("slope collision in a 3-subweb".into()));
    }
    Ok((gx * r.q + g * r.qx - gy * r.p - g * r.py) / g)
}

/// `(A, B)` with `eta_rst = A dx + B dy`.
pub fn eta_forms<T: Num>(r: &FormJet<T>, s: &FormJet<T>, t: &FormJet<T>) -> Result<(T, T)> {
    let sr = relation(r, s, t)?;
    let ss = relation(s, t, r)?;
    let det = r.p * s.q - r.q * s.p;
    if det.value().norm() == 0.0 {
        return Err(Error::Degenerate("slope collision in a 3-subweb".into()));
    }
    Ok(((r.p * ss - sr * s.p) / det, (r.q * ss - s.q * sr) / det))
}

/// `eta_rst` at a point from three branch jets.
pub fn eta_triple(jets: [&BranchJet; 3]) -> Result<(C, C)> {
    let [r, s, t] = jets.map(plain_form);
    eta_forms(&r, &s, &t)
}

/// `d eta_rst / (dx ^ dy)` from three branch jets.
pub fn triple_curvature(jets: [&BranchJet; 3]) -> Result<C> {
    let [r, s, t] = jets.map(seed_form);
    let (a, b) = eta_forms(&r, &s, &t)?;
    Ok(b.dx - a.dy)
}

fn triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for r in 0..k {
        for s in r + 1..k {
            for t in s + 1..k {
                out.push([r, s, t]);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSample {
    pub point: (f64, f64),
    /// Coefficient of `dx ^ dy`.
    #[serde(rename = "K")]
    pub k: Option<C>,
    /// `d eta_rst` for `r < s < t`, in lexicographic order.
    pub contributions: Vec<C>,
    pub separation: f64,
    pub conditioning: f64,
    pub fp_floor_hit: bool,
    pub admissible: bool,
    /// Evaluated in the rotated chart.
    pub rotated: bool,
    /// Finite-difference value of `K`.
    pub fd_k: Option<C>,
    /// `|K - fd_K|` relative to the sum of the triple term sizes.
    pub fd_divergence: f64,
    pub fd_flag: bool,
    pub reason: Option<String>,
}

impl CurvatureSample {
    /// A flagged sample withdrawn from the verdict: its `K` is not trusted.
    fn rejected(self) -> CurvatureSample {
        let div = self.fd_divergence;
        CurvatureSample {
            k: None,
            fd_k: None,
            contributions: Vec::new(),
            admissible: false,
            reason: Some(format!("finite-difference cross-check diverged ({div:.1e})")),
            ..self
        }
    }

    fn inadmissible(point: (f64, f64), e: &Error) -> CurvatureSample {
        CurvatureSample {
            point,
            k: None,
            contributions: Vec::new(),
            separation: 0.0,
            conditioning: 0.0,
            fp_floor_hit: matches!(e, Error::OnDiscriminant),
            admissible: false,
            rotated: false,
            fd_k: None,
            fd_divergence: 0.0,
            fd_flag: false,
            reason: Some(e.to_string()),
        }
    }
}

/// A web compiled for curvature sampling, in the given chart and in the
/// rotated one.
#[derive(Clone, Debug)]
pub struct CurvatureEngine {
    ev: WebEval,
    rot: WebEval,
    k: usize,
}

/// `(x cos t - y sin t, x sin t + y cos t)`.
pub fn rotate_point(x: f64, y: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (x * c - y * s, x * s + y * c)
}

/// The push-forward of the web `f` by the rotation of angle `theta`, as a
/// complex polynomial over `(x, y, p)`.
/// `k` is the number of directions, at least the degree in `p`.
pub fn rotate_web(f: &MultiPoly, k: u32, theta: f64) -> MultiPoly {
    let av = affine_vars();
    let (s, c) = theta.sin_cos();
    let num = |v: f64| Scalar::complex(v, 0.0);
    let (u, v, q) = (MultiPoly::var(&av, 0), MultiPoly::var(&av, 1), MultiPoly::var(&av, 2));
    let one = MultiPoly::one(&av);
    let x = &u.scale(&num(c)) + &v.scale(&num(s));
    let y = &v.scale(&num(c)) - &u.scale(&num(s));
    // The direction (1, q) comes from (c + q s, -s + q c).
    let dir_x = &one.scale(&num(c)) + &q.scale(&num(s));
    let dir_y = &q.scale(&num(c)) - &one.scale(&num(s));
    let f = f.to_complex();
    let mut out = MultiPoly::zero(&av);
    for (i, a) in f.coeffs_in(2).iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = a.compose(&[x.clone(), y.clone(), MultiPoly::zero(&av)]);
        out = &out + &(&(&a * &dir_y.pow(i as u32)) * &dir_x.pow(k - i as u32));
    }
    out.chop(1e-15)
}

impl CurvatureEngine {
    pub fn new(w: &AffineWeb) -> CurvatureEngine {
        CurvatureEngine::from_poly(w.poly())
    }

    pub fn from_poly(f: &MultiPoly) -> CurvatureEngine {
        CurvatureEngine::with_degree(f, f.degree_in(2))
    }

    /// A `k`-web whose polynomial may have lower degree in `p`: the missing
    /// directions are vertical.
    pub fn with_degree(f: &MultiPoly, k: u32) -> CurvatureEngine {
        let k = k.max(f.degree_in(2));
        CurvatureEngine {
            ev: WebEval::with_degree(f, k as usize),
            rot: WebEval::from_poly(&rotate_web(f, k, ROTATION)),
            k: k as usize,
        }
    }

    /// The same web with every coefficient multiplied by `1 + size * r`,
    /// `r` uniform in `[-1, 1]` from `seed`.
    pub fn perturbed_poly(f: &MultiPoly, seed: u64, size: f64) -> MultiPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms: Vec<_> = f
            .terms()
            .map(|(e, c)| {
                let r: f64 = rng.gen_range(-1.0..=1.0);
                let z = c.to_complex() * (1.0 + size * r);
                (e.clone(), Scalar::complex(z.re, z.im))
            })
            .collect();
        MultiPoly::from_terms(f.vars(), terms)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `K` at a real point, switching to the rotated chart near vertical
    /// slopes.
    pub fn sample(&self, x: f64, y: f64) -> Result<CurvatureSample> {
        match eval_in(&self.ev, x, y) {
            Ok(s) => Ok(s.into_sample((x, y), false)),
            Err(Error::LeadingCollapse) | Err(Error::Domain(_)) => {
                let (u, v) = rotate_point(x, y, ROTATION);
                match eval_in(&self.rot, u, v) {
                    Ok(s) => Ok(s.into_sample((x, y), true)),
                    Err(Error::Domain(_)) | Err(Error::LeadingCollapse) => {
                        Err(Error::Domain("near-vertical slope in both charts".into()))
                    }
                    Err(e) => Err(e),
                }
            }
            Err(e) => Err(e),
        }
    }

    /// Sum of `eta_rst` at a point, plain complex evaluation.
    pub fn eta(&self, x: f64, y: f64) -> Result<(C, C)> {
        eta_total(&self.ev, C::new(x, 0.0), C::new(y, 0.0))
    }
}

struct Evaluated {
    k: C,
    contributions: Vec<C>,
    size: f64,
    separation: f64,
    conditioning: f64,
    fd_k: C,
}

impl Evaluated {
    fn into_sample(self, point: (f64, f64), rotated: bool) -> CurvatureSample {
        let div = (self.k - self.fd_k).norm() / self.size.max(f64::MIN_POSITIVE);
        CurvatureSample {
            point,
            k: Some(self.k),
            contributions: self.contributions,
            separation: self.separation,
            conditioning: self.conditioning,
            fp_floor_hit: false,
            admissible: true,
            rotated,
            fd_k: Some(self.fd_k),
            fd_divergence: div,
            fd_flag: div > CROSS_CHECK,
            reason: None,
        }
    }
}

fn jets_at(ev: &WebEval, x: C, y: C) -> Result<(Vec<BranchJet>, f64, f64)> {
    let set = slope_roots(ev, x, y)?;
    let mut jets = Vec::with_capacity(set.slopes.len());
    for &p in &set.slopes {
        let d = ev.partials(x, y, p);
        if d.fp.norm() < ADMISSIBLE_FLOOR * d.scale.max(f64::MIN_POSITIVE) {
            return Err(Error::OnDiscriminant);
        }
        jets.push(jet_from_partials(&d, p));
    }
    Ok((jets, set.separation, set.conditioning))
}

fn eta_total(ev: &WebEval, x: C, y: C) -> Result<(C, C)> {
    let (jets, _, _) = jets_at(ev, x, y)?;
    let forms: Vec<_> = jets.iter().map(plain_form).collect();
    let (mut a, mut b) = (ZERO, ZERO);
    for [r, s, t] in triples(forms.len()) {
        let (ar, br) = eta_forms(&forms[r], &forms[s], &forms[t])?;
        a += ar;
        b += br;
    }
    Ok((a, b))
}

fn eval_in(ev: &WebEval, x: f64, y: f64) -> Result<Evaluated> {
    let (xc, yc) = (C::new(x, 0.0), C::new(y, 0.0));
    let (jets, separation, conditioning) = jets_at(ev, xc, yc)?;
    if jets.iter().any(|j| j.p.norm() > VERTICAL) {
        return Err(Error::Domain("near-vertical slope".into()));
    }
    let forms: Vec<_> = jets.iter().map(seed_form).collect();
    let mut contributions = Vec::new();
    let mut size = 0.0;
    for [r, s, t] in triples(forms.len()) {
        let (a, b) = eta_forms(&forms[r], &forms[s], &forms[t])?;
        contributions.push(b.dx - a.dy);
        size += b.dx.norm() + a.dy.norm();
    }
    let k = contributions.iter().sum();
    let fd_k = fd_curvature(ev, x, y)?;
    Ok(Evaluated { k, contributions, size, separation, conditioning, fd_k })
}

/// Fourth-order central differences of the summed `eta`.
fn fd_curvature(ev: &WebEval, x: f64, y: f64) -> Result<C> {
    let h = 1e-3 * x.abs().max(y.abs()).max(1.0);
    let at = |dx: f64, dy: f64| eta_total(ev, C::new(x + dx, 0.0), C::new(y + dy, 0.0));
    let mut bx = ZERO;
    let mut ay = ZERO;
    for (w, m) in [(1.0, -2.0), (-8.0, -1.0), (8.0, 1.0), (-1.0, 2.0)] {
        bx += w * at(m * h, 0.0)?.1;
        ay += w * at(0.0, m * h)?.0;
    }
    Ok((bx - ay) / (12.0 * h))
}

/// `K` at a point of the chart.
pub fn curvature_at(w: &AffineWeb, point: (f64, f64)) -> Result<CurvatureSample> {
    CurvatureEngine::new(w).sample(point.0, point.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Flat,
    NotFlat,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessVerdict {
    pub sample_count: usize,
    pub admissible_count: usize,
    pub max_abs_k: f64,
    pub median_abs_k: f64,
    pub normalization_scale: f64,
    pub verdict: Verdict,
    pub threshold: f64,
    pub relative_threshold: f64,
    pub seed: u64,
    pub above_margin: usize,
    /// Draws withdrawn because the two derivative paths disagreed.
    pub fd_flagged: usize,
    pub samples: Vec<CurvatureSample>,
}

/// Runs `f` on a pool capped by `WEBCURV_THREADS` when set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("WEBCURV_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok());
    match cap {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

fn draw_admissible(engine: &CurvatureEngine, seed: u64, index: usize) -> Vec<CurvatureSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut tried = Vec::new();
    for _ in 0..RETRY_BUDGET {
        let x = rng.gen_range(-BOX..BOX);
        let y = rng.gen_range(-BOX..BOX);
        match engine.sample(x, y) {
            Ok(s) if !s.fd_flag => {
                tried.push(s);
                break;
            }
            Ok(s) => tried.push(s.rejected()),
            Err(e) => tried.push(CurvatureSample::inadmissible((x, y), &e)),
        }
    }
    tried
}

/// Samples `n` admissible points in `[-2, 2]^2` and decides flatness.
/// `rel_threshold` multiplies the normalization scale; `None` uses
/// [`DEFAULT_REL_THRESHOLD`].
pub fn flatness_check(w: &AffineWeb, n: usize, seed: u64, rel_threshold: Option<f64>) -> Result<FlatnessVerdict> {
    flatness_check_poly(w.poly(), n, seed, rel_threshold)
}

pub fn flatness_check_poly(f: &MultiPoly, n: usize, seed: u64, rel_threshold: Option<f64>) -> Result<FlatnessVerdict> {
    let rel = rel_threshold.unwrap_or(DEFAULT_REL_THRESHOLD);
    if !(rel > 0.0) {
        return Err(Error::Usage("the threshold must be positive".into()));
    }
    let engine = CurvatureEngine::from_poly(f);
    if engine.k() < 3 {
        return Ok(FlatnessVerdict {
            sample_count: 0,
            admissible_count: 0,
            max_abs_k: 0.0,
            median_abs_k: 0.0,
            normalization_scale: 0.0,
            verdict: Verdict::Flat,
            threshold: 0.0,
            relative_threshold: rel,
            seed,
            above_margin: 0,
            fd_flagged: 0,
            samples: Vec::new(),
        });
    }
    let perturbed = CurvatureEngine::from_poly(&CurvatureEngine::perturbed_poly(f, PERTURB_SEED, PERTURB_SIZE));
    let per_index: Vec<(Vec<CurvatureSample>, Option<f64>)> = with_thread_cap(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let tried = draw_admissible(&engine, seed, i);
                let pert = tried
                    .last()
                    .filter(|s| s.admissible)
                    .and_then(|s| perturbed.sample(s.point.0, s.point.1).ok())
                    .filter(|s| !s.fd_flag)
                    .and_then(|s| s.k.map(|k| k.norm()));
                (tried, pert)
            })
            .collect()
    });
    let mut samples = Vec::new();
    let mut abs_k = Vec::new();
    let mut scale: f64 = 0.0;
    let mut fd_flagged = 0;
    for (tried, pert) in per_index {
        let last = tried.last().ok_or_else(|| Error::Domain("no samples drawn".into()))?;
        if !last.admissible {
            return Err(Error::Domain(format!(
                "unable to find {n} admissible points within {RETRY_BUDGET} attempts per point"
            )));
        }
        abs_k.push(last.k.map(|k| k.norm()).unwrap_or(0.0));
        fd_flagged += tried.iter().filter(|s| s.fd_flag).count();
        if let Some(p) = pert {
            scale = scale.max(p);
        }
        samples.extend(tried);
    }
    if scale == 0.0 {
        scale = 1.0;
    }
    let threshold = rel * scale;
    let max_abs_k = abs_k.iter().cloned().fold(0.0, f64::max);
    let mut sorted = abs_k.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let median_abs_k = if sorted.is_empty() { 0.0 } else { sorted[sorted.len() / 2] };
    let above_margin = abs_k.iter().filter(|&&v| v > NOT_FLAT_MARGIN * threshold).count();
    let verdict = if n > 0 && max_abs_k < threshold {
        Verdict::Flat
    } else if above_margin >= NOT_FLAT_COUNT {
        Verdict::NotFlat
    } else {
        Verdict::Inconclusive
    };
    Ok(FlatnessVerdict {
        sample_count: samples.len(),
        admissible_count: abs_k.len(),
        max_abs_k,
        median_abs_k,
        normalization_scale: scale,
        verdict,
        threshold,
        relative_threshold: rel,
        seed,
        above_margin,
        fd_flagged,
        samples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaProbe {
    pub x: f64,
    pub a_leading: f64,
    pub a_leading_expected: f64,
    pub a_next: f64,
    /// The second coefficient as displayed next to the leading one.
    pub a_next_displayed: f64,
    pub b_residue: f64,
    pub b_residue_expected: f64,
    pub pass: bool,
    pub next_matches_display: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub a: [u32; 3],
    pub probes: Vec<LemmaProbe>,
    pub pass: bool,
}

/// Neville's scheme evaluated at zero.
fn extrapolate_to_zero(ts: &[f64], vs: &[f64]) -> f64 {
    let mut p = vs.to_vec();
    let n = ts.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (ts[i + m] * p[i] - ts[i] * p[i + 1]) / (ts[i + m] - ts[i]);
        }
    }
    p[0]
}

/// `h_ij` as in the lemma: depends on how `a_i` and `a_j` compare.
fn h_pair(a: &[u32; 3], h: &[MultiPoly; 3], i: usize, j: usize) -> MultiPoly {
    match a[i].cmp(&a[j]) {
        Ordering::Less => -&h[i],
        Ordering::Equal => &h[j] - &h[i],
        Ordering::Greater => h[j].clone(),
    }
}

/// Compares the Laurent expansion of `eta` for the 3-web
/// `dx + y^(a_i) h_i dy` along `y -> 0` with its predicted leading terms.
/// `h` are polynomials over `(x, y)`.
pub fn lemma_curv_oracle(a: [u32; 3], h: &[MultiPoly; 3], probe_xs: &[f64]) -> Result<LemmaReport> {
    if !(a[0] <= a[1] && a[1] <= a[2]) {
        return Err(Error::Domain("need a1 <= a2 <= a3".into()));
    }
    let at = |p: &MultiPoly, x: f64, y: f64| p.eval_c(&[C::new(x, 0.0), C::new(y, 0.0)]).re;
    for &x in probe_xs {
        for i in 0..3 {
            if at(&h[i], x, 0.0).abs() < 1e-9 {
                return Err(Error::Domain(format!("h{} vanishes on y = 0 at x = {x}", i + 1)));
            }
            for j in i + 1..3 {
                if a[i] == a[j] && at(&(&h[i] - &h[j]), x, 0.0).abs() < 1e-9 {
                    return Err(Error::Domain(format!("h{} - h{} vanishes on y = 0 at x = {x}", i + 1, j + 1)));
                }
            }
        }
    }
    let hx: Vec<MultiPoly> = h.iter().map(|p| p.derivative(0)).collect();
    let hy: Vec<MultiPoly> = h.iter().map(|p| p.derivative(1)).collect();
    let eta = |x: f64, y: f64| -> Result<(f64, f64)> {
        let forms: Vec<FormJet<C>> = (0..3)
            .map(|i| {
                let ai = a[i] as i32;
                let ya = y.powi(ai);
                let ya1 = if ai == 0 { 0.0 } else { ai as f64 * y.powi(ai - 1) };
                let (hv, hxv, hyv) = (at(&h[i], x, y), at(&hx[i], x, y), at(&hy[i], x, y));
                FormJet {
                    p: C::new(1.0, 0.0),
                    px: ZERO,
                    py: ZERO,
                    q: C::new(ya * hv, 0.0),
                    qx: C::new(ya * hxv, 0.0),
                    qy: C::new(ya1 * hv + ya * hyv, 0.0),
                }
            })
            .collect();
        let (ea, eb) = eta_forms(&forms[0], &forms[1], &forms[2])?;
        Ok((ea.re, eb.re))
    };
    let (h12, h23, h31) = (h_pair(&a, h, 0, 1), h_pair(&a, h, 1, 2), h_pair(&a, h, 2, 0));
    let (d12, d23) = (h12.derivative(1), h23.derivative(1));
    let ys: Vec<f64> = (2..=7).map(|j| 10f64.powi(-j)).collect();
    let lead_pow = a[0] as i32 + 1;
    let mut probes = Vec::new();
    for &x in probe_xs {
        let mut ga = Vec::new();
        let mut gb = Vec::new();
        for &y in &ys {
            let (ea, eb) = eta(x, y)?;
            ga.push(ea * y.powi(lead_pow));
            gb.push(eb * y);
        }
        let a_leading = extrapolate_to_zero(&ys, &ga);
        let next: Vec<f64> = ga.iter().zip(&ys).map(|(g, y)| (g - a_leading) / y).collect();
        let a_next = extrapolate_to_zero(&ys, &next);
        let b_residue = extrapolate_to_zero(&ys, &gb);
        let a_leading_expected = (a[0] as f64 - a[1] as f64) / at(&h31, x, 0.0);
        let (v12, v23, v31) = (at(&h12, x, 0.0), at(&h23, x, 0.0), at(&h31, x, 0.0));
        let a_next_displayed = (v23 * at(&d12, x, 0.0) - v12 * at(&d23, x, 0.0)) / (v12 * v23 * v31);
        let close = |m: f64, e: f64| (m - e).abs() <= 1e-3 * e.abs().max(1.0);
        let b_residue_expected = a[0] as f64;
        probes.push(LemmaProbe {
            x,
            a_leading,
            a_leading_expected,
            a_next,
            a_next_displayed,
            b_residue,
            b_residue_expected,
            pass: close(a_leading, a_leading_expected) && close(b_residue, b_residue_expected),
            next_matches_display: close(a_next, a_next_displayed),
        });
    }
    let pass = probes.iter().all(|p| p.pass);
    Ok(LemmaReport { a, probes, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Ring};
    use crate::web::plane_vars;

    fn web(s: &str) -> AffineWeb {
        AffineWeb::parse(s, Ring::Rational).unwrap()
    }

    fn c(v: f64) -> C {
        C::new(v, 0.0)
    }

    fn jet(p: f64, px: f64, py: f64) -> BranchJet {
        BranchJet { p: c(p), px: c(px), py: c(py), pxx: ZERO, pxy: ZERO, pyy: ZERO }
    }

    #[test]
    fn constant_slopes_give_zero_eta() {
        let (a, b) = eta_triple([&jet(0.0, 0.0, 0.0), &jet(1.0, 0.0, 0.0), &jet(-2.5, 0.0, 0.0)]).unwrap();
        assert_eq!((a, b), (ZERO, ZERO));
    }

    #[test]
    fn hand_solved_triple() {
        // Slopes 0, 1, x + y. With u = x + y: A = 1/(u - 1), B = 2/u - 1/(u - 1).
        let (x, y) = (0.3, 0.4);
        let u: f64 = x + y;
        let (a, b) = eta_triple([&jet(0.0, 0.0, 0.0), &jet(1.0, 0.0, 0.0), &jet(u, 1.0, 1.0)]).unwrap();
        assert!((a - 1.0 / (u - 1.0)).norm() < 1e-13);
        assert!((b - (2.0 / u - 1.0 / (u - 1.0))).norm() < 1e-13);
        // K = 2/(u - 1)^2 - 2/u^2.
        let s = curvature_at(&web("p*(p - 1)*(p - x - y)"), (x, y)).unwrap();
        let expected = 2.0 / (u - 1.0).powi(2) - 2.0 / (u * u);
        assert!((s.k.unwrap() - expected).norm() < 1e-12 * expected.abs());
        assert!(!s.fd_flag);
    }

    #[test]
    fn collision_is_rejected() {
        assert!(eta_triple([&jet(1.0, 0.0, 0.0), &jet(1.0, 0.0, 0.0), &jet(2.0, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn parallel_and_pencil_webs_are_flat() {
        let s = curvature_at(&web("(p - 1)*(p + 2)*(p - 5)"), (0.2, -0.7)).unwrap();
        assert!(s.k.unwrap().norm() < 1e-12);
        // Pencils through (0, 0), (1, 0), (0, 1).
        let w = web("(x*p - y)*((x - 1)*p - y)*(x*p - y + 1)");
        for (x, y) in [(0.31, 0.57), (-0.8, 1.3), (1.7, -0.45)] {
            let s = curvature_at(&w, (x, y)).unwrap();
            assert!(s.k.unwrap().norm() < 1e-10, "{:?}", s.k);
        }
    }

    #[test]
    fn trivial_web_needs_the_rotated_chart() {
        // dx dy (dx - dy): slopes 0 and 1 plus the vertical direction.
        let f = parse_poly("p - p^2", &affine_vars(), Ring::Rational).unwrap();
        let engine = CurvatureEngine::with_degree(&f, 3);
        let s = engine.sample(0.4, 0.9).unwrap();
        assert!(s.rotated);
        assert!(s.k.unwrap().norm() < 1e-12);
        let (u, v) = rotate_point(0.4, 0.9, ROTATION);
        let (a, b) = eta_total(&engine.rot, c(u), c(v)).unwrap();
        assert!(a.norm() + b.norm() < 1e-12);
    }

    #[test]
    fn rotation_preserves_curvature() {
        let w = web("(p - x)*(p + y^2)*(p - 1 - x*y)");
        let f = w.poly();
        let direct = CurvatureEngine::from_poly(f);
        let (x, y) = (0.35, -0.6);
        let k1 = direct.sample(x, y).unwrap().k.unwrap();
        let rot = WebEval::from_poly(&rotate_web(f, 3, ROTATION));
        let (u, v) = rotate_point(x, y, ROTATION);
        let k2 = eval_in(&rot, u, v).unwrap().k;
        assert!((k1 - k2).norm() < 1e-9 * k1.norm(), "{k1} {k2}");
    }

    #[test]
    fn sum_of_triples_is_k() {
        let w = web("(p - x)*(p + y)*(p - x*y - 1)*(p - 2 + x^2)");
        let s = curvature_at(&w, (0.3, 0.1)).unwrap();
        assert_eq!(s.contributions.len(), 4);
        let sum: C = s.contributions.iter().sum();
        assert!((sum - s.k.unwrap()).norm() <= 1e-12 * s.k.unwrap().norm());
        // Each contribution is the curvature of the matching 3-subweb.
        let subs = ["(p - x)*(p + y)*(p - x*y - 1)", "(p - x)*(p + y)*(p - 2 + x^2)"];
        for (i, sub) in subs.iter().enumerate() {
            let k = curvature_at(&web(sub), (0.3, 0.1)).unwrap().k.unwrap();
            assert!((k - s.contributions[i]).norm() < 1e-10 * k.norm().max(1e-300));
        }
        assert!(s.fd_divergence < 1e-6);
    }

    #[test]
    fn perturbation_is_deterministic() {
        let f = web("(p - x)*(p + y)*(p - 1)").poly().clone();
        let a = CurvatureEngine::perturbed_poly(&f, 3, 0.01);
        let b = CurvatureEngine::perturbed_poly(&f, 3, 0.01);
        assert_eq!(a, b);
        assert!(!a.approx_eq(&f.to_complex(), 1e-6));
    }

    #[test]
    fn lemma_fixtures() {
        let pv = plane_vars();
        let hp = |s: &str| parse_poly(s, &pv, Ring::Rational).unwrap();
        let probes = [0.3, -0.45, 0.8];
        let r = lemma_curv_oracle([0, 0, 1], &[hp("1"), hp("2"), hp("1")], &probes).unwrap();
        assert!(r.pass, "{r:?}");
        for p in &r.probes {
            assert!(p.a_leading.abs() < 1e-6 && p.b_residue.abs() < 1e-6);
        }
        let r = lemma_curv_oracle([1, 2, 3], &[hp("1"), hp("1"), hp("1")], &probes).unwrap();
        assert!(r.pass, "{r:?}");
        for p in &r.probes {
            assert!((p.a_leading + 1.0).abs() < 1e-6 && (p.b_residue - 1.0).abs() < 1e-6);
            assert!(p.a_next.abs() < 1e-6 && p.next_matches_display);
        }
        // Leading terms agree; the displayed second coefficient is 0 while
        // the exact expansion of A is 1/(2y) + O(1).
        let r = lemma_curv_oracle([1, 1, 2], &[hp("1"), hp("2"), hp("1")], &probes).unwrap();
        assert!(r.pass, "{r:?}");
        for p in &r.probes {
            assert!(p.a_leading.abs() < 1e-6);
            assert!((p.b_residue - 1.0).abs() < 1e-6);
            assert!((p.a_next - 0.5).abs() < 1e-6);
            assert_eq!(p.a_next_displayed, 0.0);
            assert!(!p.next_matches_display);
        }
        assert!(lemma_curv_oracle([2, 1, 3], &[hp("1"), hp("2"), hp("1")], &probes).is_err());
        assert!(lemma_curv_oracle([0, 0, 1], &[hp("1"), hp("1"), hp("1")], &probes).is_err());
        assert!(lemma_curv_oracle([0, 1, 1], &[hp("x"), hp("1"), hp("2")], &[0.0]).is_err());
    }
}
