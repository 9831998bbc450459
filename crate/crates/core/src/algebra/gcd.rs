//! Multivariate gcd over the exact rings and the operations built on it.
//!
//! Dense evaluation and interpolation: one variable is specialised at small
//! integers, the images are combined by Newton interpolation, and a trial
//! division certifies the candidate. Univariate gcds use the monic Euclidean
//! algorithm over the coefficient field.

use std::collections::BTreeMap;

use super::linear::LinearForm;
use super::poly::{Exps, MultiPoly};
use super::scalar::Scalar;
use crate::error::{Error, Result};

fn require_exact(f: &MultiPoly) -> Result<()> {
    if f.is_exact() {
        Ok(())
    } else {
        Err(Error::InexactRing("complex".into()))
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type Uni = Vec<Scalar>;

fn trim(mut a: Uni) -> Uni {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn uni_rem(a: &[Scalar], b: &[Scalar]) -> Uni {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = b[db].inv().unwrap();
    while r.len() > db {
        let top = r.len() - 1;
        let q = &r[top] * &inv;
        for (j, bj) in b.iter().enumerate() {
            let k = top - db + j;
            r[k] = &r[k] - &(&q * bj);
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn uni_monic(a: Uni) -> Uni {
    match a.last() {
        None => a,
        Some(l) => {
            let inv = l.inv().unwrap();
            a.iter().map(|c| c * &inv).collect()
        }
    }
}

fn uni_gcd(a: &[Scalar], b: &[Scalar]) -> Uni {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = uni_monic(r);
    }
    uni_monic(a)
}

fn uni_eval(a: &[Scalar], c: &Scalar) -> Scalar {
    a.iter().rev().fold(Scalar::zero(), |acc, k| &(&acc * c) + k)
}

fn uni_to_poly(a: &[Scalar], like: &MultiPoly, v: usize) -> MultiPoly {
    let n = like.nvars();
    MultiPoly::from_terms(
        like.vars(),
        a.iter().enumerate().map(|(k, c)| {
            let mut e = Exps::from_elem(0, n);
            e[v] = k as u16;
            (e, c.clone())
        }),
    )
}

/// `f` viewed in `K[x_v][other variables]`: its coefficients, keyed by the
/// monomial in the other variables.
fn split_off(f: &MultiPoly, v: usize) -> BTreeMap<Exps, Uni> {
    let mut out: BTreeMap<Exps, Uni> = BTreeMap::new();
    for (e, c) in f.terms() {
        let mut key = e.clone();
        let k = key[v] as usize;
        key[v] = 0;
        let slot = out.entry(key).or_default();
        if slot.len() <= k {
            slot.resize(k + 1, Scalar::zero());
        }
        slot[k] = c.clone();
    }
    out
}

fn content_uni(parts: &BTreeMap<Exps, Uni>) -> Uni {
    let mut c: Uni = Vec::new();
    for u in parts.values() {
        c = uni_gcd(&c, u);
        if c.len() == 1 {
            break;
        }
    }
    c
}

fn present(f: &MultiPoly) -> Vec<usize> {
    (0..f.nvars()).filter(|&i| f.degree_in(i) > 0).collect()
}

fn gcd_rec(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return g.normalized();
    }
    if g.is_zero() {
        return f.normalized();
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::one(f.vars());
    }
    let (vf, vg) = (present(f), present(g));
    // A variable missing from one side: the gcd divides every coefficient.
    for (a, b, va, vb) in [(f, g, &vf, &vg), (g, f, &vg, &vf)] {
        if let Some(&v) = va.iter().find(|i| !vb.contains(i)) {
            let mut cs: Vec<MultiPoly> = a.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
            cs.sort_by_key(|c| c.num_terms());
            let mut h = b.clone();
            for c in cs {
                h = gcd_rec(&h, &c);
                if h.is_constant() {
                    break;
                }
            }
            return h.normalized();
        }
    }
    if vf.len() == 1 {
        let v = vf[0];
        let pf = split_off(f, v);
        let pg = split_off(g, v);
        let h = uni_gcd(pf.values().next().unwrap(), pg.values().next().unwrap());
        return uni_to_poly(&h, f, v).normalized();
    }
    let v = *vf
        .iter()
        .min_by_key(|&&i| f.degree_in(i).max(g.degree_in(i)))
        .unwrap();
    let (sf, sg) = (split_off(f, v), split_off(g, v));
    let (cf, cg) = (content_uni(&sf), content_uni(&sg));
    let c = uni_to_poly(&uni_gcd(&cf, &cg), f, v);
    let pf = f.div_exact(&uni_to_poly(&cf, f, v)).expect("content divides");
    let pg = g.div_exact(&uni_to_poly(&cg, g, v)).expect("content divides");
    let h = interpolated_gcd(&pf, &pg, v);
    (&c * &h).normalized()
}

/// Gcd of `f` and `g`, both primitive over `K[x_v]`.
fn interpolated_gcd(f: &MultiPoly, g: &MultiPoly, v: usize) -> MultiPoly {
    let lf = split_off(f, v).pop_last().unwrap().1;
    let lg = split_off(g, v).pop_last().unwrap().1;
    let gamma = uni_gcd(&lf, &lg);
    let bound = f.degree_in(v).min(g.degree_in(v)) as usize + gamma.len() - 1;
    let x = MultiPoly::var(f.vars(), v);
    let mut acc: Option<(MultiPoly, MultiPoly, Exps)> = None;
    let mut npts = 0;
    for step in 1i64.. {
        let c = Scalar::int(if step % 2 == 1 { (step + 1) / 2 } else { -step / 2 });
        let gc = uni_eval(&gamma, &c);
        if gc.is_zero() || uni_eval(&lf, &c).is_zero() || uni_eval(&lg, &c).is_zero() {
            continue;
        }
        let img = gcd_rec(&f.eval_var(v, &c), &g.eval_var(v, &c));
        if img.is_constant() {
            return MultiPoly::one(f.vars());
        }
        let (lm, lc) = img.leading().map(|(e, k)| (e.clone(), k.clone())).unwrap();
        let img = img.scale(&gc.div(&lc).unwrap());
        let (h, q) = match acc.take() {
            Some((h, q, l)) if l == lm => {
                let hc = h.eval_var(v, &c);
                if hc == img {
                    // The image adds no information: try the candidate now.
                    if let Some(r) = certify(&h, f, g, v) {
                        return r;
                    }
                }
                let scale = uni_eval_poly(&q, v, &c).inv().unwrap();
                let h = &h + &(&(&img - &hc) * &q).scale(&scale);
                (h, q)
            }
            Some((h, q, l)) if l < lm => {
                // Unlucky point: the image gcd is too large.
                acc = Some((h, q, l));
                continue;
            }
            _ => {
                npts = 0;
                (img, MultiPoly::one(f.vars()))
            }
        };
        npts += 1;
        let q = &q * &(&x - &MultiPoly::constant(f.vars(), c));
        if npts > bound {
            if let Some(r) = certify(&h, f, g, v) {
                return r;
            }
        }
        acc = Some((h, q, lm));
    }
    unreachable!()
}

fn uni_eval_poly(q: &MultiPoly, v: usize, c: &Scalar) -> Scalar {
    q.eval_var(v, c).constant_value().unwrap()
}

fn certify(h: &MultiPoly, f: &MultiPoly, g: &MultiPoly, v: usize) -> Option<MultiPoly> {
    let cont = uni_to_poly(&content_uni(&split_off(h, v)), h, v);
    let cand = h.div_exact(&cont)?;
    if f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
        Some(cand.normalized())
    } else {
        None
    }
}

/// Greatest common divisor, normalized up to a unit.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    require_exact(f)?;
    require_exact(g)?;
    Ok(gcd_rec(f, g))
}

/// `gcd(f, df/dx_1, ..., df/dx_n)`: every irreducible factor with its
/// multiplicity lowered by one.
pub fn gcd_with_partials(f: &MultiPoly) -> Result<MultiPoly> {
    require_exact(f)?;
    let mut g = f.clone();
    for i in 0..f.nvars() {
        if f.degree_in(i) == 0 {
            continue;
        }
        g = gcd_rec(&g, &f.derivative(i));
        if g.is_constant() {
            break;
        }
    }
    Ok(g)
}

/// Product of the distinct irreducible factors of `f`.
pub fn squarefree_part(f: &MultiPoly) -> Result<MultiPoly> {
    require_exact(f)?;
    if f.is_constant() {
        return Ok(f.clone());
    }
    let g = gcd_with_partials(f)?;
    Ok(f.div_exact(&g).expect("gcd divides").normalized())
}

pub fn is_squarefree(f: &MultiPoly) -> Result<bool> {
    Ok(gcd_with_partials(f)?.is_constant())
}

/// Squarefree decomposition `f = unit * prod S_m^m`; entry `m - 1` holds
/// `S_m` (possibly constant).
pub fn squarefree_decomposition(f: &MultiPoly) -> Result<Vec<MultiPoly>> {
    require_exact(f)?;
    let mut layers = Vec::new();
    let mut cur = f.clone();
    while !cur.is_constant() {
        let g = gcd_with_partials(&cur)?;
        layers.push(cur.div_exact(&g).expect("gcd divides"));
        cur = g;
    }
    let one = MultiPoly::one(f.vars());
    let mut out = Vec::with_capacity(layers.len());
    for (m, r) in layers.iter().enumerate() {
        let next = layers.get(m + 1).unwrap_or(&one);
        out.push(r.div_exact(next).expect("layers nest").normalized());
    }
    Ok(out)
}

/// Largest `m` with `ell^m | f`.
pub fn linear_factor_multiplicity(f: &MultiPoly, ell: &LinearForm, var_idx: &[usize]) -> Result<u32> {
    require_exact(f)?;
    if f.is_zero() {
        return Err(Error::Degenerate("multiplicity in the zero polynomial".into()));
    }
    let l = ell.to_poly(f.vars(), var_idx);
    if l.is_constant() {
        return Err(Error::Degenerate("constant linear form".into()));
    }
    let mut m = 0;
    let mut cur = f.clone();
    while let Some(q) = cur.div_exact(&l) {
        cur = q;
        m += 1;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly::vars;
    use crate::algebra::scalar::Ring;
    use proptest::prelude::*;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &vars(&["x", "y", "z"]), Ring::Rational).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x^2 + 2*x*y + y^2")).unwrap(), p("x + y"));
        assert_eq!(gcd(&p("6*x*y"), &p("4*x^2")).unwrap(), p("x"));
        assert_eq!(gcd(&p("x + 1"), &p("y + 1")).unwrap(), p("1"));
        assert_eq!(gcd(&p("0"), &p("-2*x*z")).unwrap(), p("x*z"));
    }

    #[test]
    fn unlucky_points_are_skipped() {
        // At x = 1 and x = -1 the images share the extra factor y + 1.
        let f = p("(y + x^2 - 1)*(y + 1)*(z + x)");
        let g = p("(y + x^2 - 1)*(y + x)*(z - x)");
        assert_eq!(gcd(&f, &g).unwrap(), p("y + x^2 - 1").normalized());
    }

    #[test]
    fn gcd_over_quadratic_field() {
        let v = vars(&["x", "y", "z"]);
        let r = Ring::quad(5).unwrap();
        let q = |s: &str| parse_poly(s, &v, r).unwrap();
        let h = gcd(&q("(x + sqrt(5)*y)*(x - y + z)"), &q("(x + sqrt(5)*y)*(z^2 + x)")).unwrap();
        assert_eq!(h, q("x + sqrt(5)*y"));
        let s = squarefree_part(&q("(x + sqrt(5)*y)^3*(x - sqrt(5)*z)")).unwrap();
        assert_eq!(s, q("(x + sqrt(5)*y)*(x - sqrt(5)*z)").normalized());
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p("x^2*y")).unwrap(), p("x*y"));
        assert_eq!(
            squarefree_part(&p("(x - y)^3*(x + y)")).unwrap(),
            p("(x - y)*(x + y)").normalized()
        );
        let dec = squarefree_decomposition(&p("x*(y - z)^2*(x + y + z)^3")).unwrap();
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], p("x"));
        assert_eq!(dec[1], p("y - z"));
        assert_eq!(dec[2], p("x + y + z"));
    }

    #[test]
    fn complex_is_rejected() {
        let f = p("x^2").to_complex();
        assert!(matches!(squarefree_part(&f), Err(Error::InexactRing(_))));
    }

    #[test]
    fn linear_multiplicity() {
        let f = p("x^2*y^2*(x - y - 1)");
        let l = LinearForm::new(Scalar::int(1), Scalar::zero(), Scalar::zero()).unwrap();
        assert_eq!(linear_factor_multiplicity(&f, &l, &[0, 1, 2]).unwrap(), 2);
        let l = LinearForm::new(Scalar::int(1), Scalar::int(-1), Scalar::int(-1)).unwrap();
        assert_eq!(linear_factor_multiplicity(&f, &l, &[0, 1]).unwrap(), 1);
        let l = LinearForm::new(Scalar::int(1), Scalar::int(1), Scalar::int(-1)).unwrap();
        assert_eq!(linear_factor_multiplicity(&f, &l, &[0, 1]).unwrap(), 0);
        let l = LinearForm::new(Scalar::int(1), Scalar::int(-1), Scalar::int(-1)).unwrap();
        assert_eq!(linear_factor_multiplicity(&f, &l, &[0, 1, 2]).unwrap(), 0);
    }

    fn arb_factor() -> impl Strategy<Value = MultiPoly> {
        (-3i64..4, -3i64..4, -3i64..4, 0u32..2).prop_map(|(a, b, c, sq)| {
            let base = format!("({a})*x + ({b})*y + ({c})*z + x*y");
            if sq == 1 {
                p(&format!("({base})^2 + x"))
            } else {
                p(&base)
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn gcd_divides_both(a in arb_factor(), b in arb_factor(), c in arb_factor()) {
            let f = &a * &c;
            let g = &b * &c;
            let h = gcd(&f, &g).unwrap();
            prop_assert!(f.div_exact(&h).is_some());
            prop_assert!(g.div_exact(&h).is_some());
            prop_assert!(h.div_exact(&c.normalized()).is_some());
        }

        #[test]
        fn squarefree_is_idempotent(a in arb_factor(), b in arb_factor()) {
            let f = &(&a * &a) * &b;
            let s = squarefree_part(&f).unwrap();
            prop_assert_eq!(squarefree_part(&s).unwrap(), s.clone());
            prop_assert!(f.div_exact(&s).is_some());
        }
    }
}
