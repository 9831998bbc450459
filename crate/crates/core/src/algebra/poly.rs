//! Sparse multivariate polynomials over [`Scalar`].
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration is in
//! lexicographic order with the first declared variable most significant.
//! Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::scalar::{Ring, Scalar};

pub type Exps = SmallVec<[u16; 6]>;
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Exps, Scalar>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> MultiPoly {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> MultiPoly {
        MultiPoly::constant(vars, Scalar::one())
    }

    pub fn constant(vars: &Vars, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        p.add_term(Exps::from_elem(0, vars.len()), c);
        p
    }

    pub fn int(vars: &Vars, n: i64) -> MultiPoly {
        MultiPoly::constant(vars, Scalar::int(n))
    }

    pub fn var(vars: &Vars, i: usize) -> MultiPoly {
        let mut e = Exps::from_elem(0, vars.len());
        e[i] = 1;
        MultiPoly::monomial(vars, e, Scalar::one())
    }

    /// All variables of `vars` as polynomials, in order.
    pub fn gens(vars: &Vars) -> Vec<MultiPoly> {
        (0..vars.len()).map(|i| MultiPoly::var(vars, i)).collect()
    }

    pub fn monomial(vars: &Vars, exps: Exps, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, Scalar)>>(vars: &Vars, it: I) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u16]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The value if the polynomial is constant (including zero).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&k| k == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Smallest ring containing every coefficient.
    pub fn ring(&self) -> Ring {
        self.terms
            .values()
            .try_fold(Ring::Rational, |r, c| r.join(c.ring()))
            .unwrap_or(Ring::Complex)
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i] as u32).max().unwrap_or(0)
    }

    /// Lowest power of variable `i` present.
    pub fn valuation_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i] as u32).min().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Exps, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, e: Exps, c: Scalar) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn same_vars(&self, other: &MultiPoly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variables: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly::from_terms(&self.vars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn mul_monomial(&self, e: &[u16], c: &Scalar) -> MultiPoly {
        MultiPoly::from_terms(
            &self.vars,
            self.terms.iter().map(|(k, v)| {
                let mut s = k.clone();
                for (a, b) in s.iter_mut().zip(e) {
                    *a += *b;
                }
                (s, v * c)
            }),
        )
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        MultiPoly::from_terms(
            &self.vars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut f = e.clone();
                let k = f[i];
                f[i] -= 1;
                (f, c * &Scalar::int(k as i64))
            }),
        )
    }

    /// Coefficients with respect to variable `i`, lowest power first. The
    /// results keep the same variable list with exponent `i` equal to zero.
    pub fn coeffs_in(&self, i: usize) -> Vec<MultiPoly> {
        let n = self.degree_in(i) as usize;
        let mut out = vec![MultiPoly::zero(&self.vars); n + 1];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut f = e.clone();
            f[i] = 0;
            out[k].terms.insert(f, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, i: usize, cs: &[MultiPoly]) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        for (k, c) in cs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut f = e.clone();
                f[i] += k as u16;
                p.add_term(f, v.clone());
            }
        }
        p
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars(), "compose needs one image per variable");
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return self.clone(),
        };
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(&target), p.clone()])
            .collect();
        for (i, _) in images.iter().enumerate() {
            let need = self.degree_in(i) as usize;
            while powers[i].len() <= need {
                let next = &powers[i][powers[i].len() - 1] * &images[i];
                powers[i].push(next);
            }
        }
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Substitutes `q` (over the same variables) for variable `i`.
    pub fn substitute(&self, i: usize, q: &MultiPoly) -> MultiPoly {
        self.same_vars(q);
        let mut images = MultiPoly::gens(&self.vars);
        images[i] = q.clone();
        self.compose(&images)
    }

    /// Sets variable `i` to the value `c`, keeping the variable list.
    pub fn eval_var(&self, i: usize, c: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        let n = self.degree_in(i) as usize;
        let mut pw = Vec::with_capacity(n + 1);
        pw.push(Scalar::one());
        for k in 1..=n {
            pw.push(&pw[k - 1] * c);
        }
        for (e, v) in &self.terms {
            let mut f = e.clone();
            let k = f[i] as usize;
            f[i] = 0;
            out.add_term(f, v * &pw[k]);
        }
        out
    }

    /// Re-expresses the polynomial over `new_vars`, sending variable `i` to
    /// `new_vars[map[i]]`.
    pub fn with_vars(&self, new_vars: &Vars, map: &[usize]) -> MultiPoly {
        MultiPoly::from_terms(
            new_vars,
            self.terms.iter().map(|(e, c)| {
                let mut f = Exps::from_elem(0, new_vars.len());
                for (i, &k) in e.iter().enumerate() {
                    f[map[i]] += k;
                }
                (f, c.clone())
            }),
        )
    }

    pub fn eval(&self, pt: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &pt[i].pow(k as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_c(&self, pt: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= pt[i].powu(k as u32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sum of `|coeff| * |monomial|` at `pt`; the natural scale for a
    /// residual of [`eval_c`](Self::eval_c).
    pub fn eval_abs(&self, pt: &[Complex64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.abs_f64();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= pt[i].norm().powi(k as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        self.same_vars(d);
        let (lde, ldc) = d.leading()?;
        let lde = lde.clone();
        let inv = ldc.inv()?;
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(&self.vars);
        while let Some((e, c)) = rem.leading() {
            if e.iter().zip(&lde).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exps = e.iter().zip(&lde).map(|(a, b)| a - b).collect();
            let qc = c * &inv;
            let top = e.clone();
            for (de, dc) in &d.terms {
                let mut f = de.clone();
                for (a, b) in f.iter_mut().zip(&qe) {
                    *a += *b;
                }
                rem.add_term(f, -(dc * &qc));
            }
            // Guard against inexact cancellation for float coefficients.
            rem.terms.remove(&top);
            q.add_term(qe, qc);
        }
        Some(q)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&k| k as u32).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> MultiPoly {
        MultiPoly::from_terms(
            &self.vars,
            self.terms
                .iter()
                .filter(|(e, _)| e.iter().map(|&k| k as u32).sum::<u32>() == deg)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn map_coeffs<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> MultiPoly {
        MultiPoly::from_terms(&self.vars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn to_complex(&self) -> MultiPoly {
        self.map_coeffs(|c| Scalar::Cplx(c.to_complex()))
    }

    /// Galois conjugation of every coefficient.
    pub fn conj(&self) -> MultiPoly {
        self.map_coeffs(|c| c.conj())
    }

    pub fn max_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Canonical representative up to a unit. Over `Q` this is the primitive
    /// integer polynomial with positive leading coefficient; over other rings
    /// it is the monic polynomial.
    pub fn normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        if self.terms.values().all(|c| matches!(c, Scalar::Rat(_))) {
            let mut l = BigInt::one();
            let mut g = BigInt::zero();
            for c in self.terms.values() {
                let r = c.as_rational().unwrap();
                l = l.lcm(r.denom());
                g = g.gcd(r.numer());
            }
            let mut f = BigRational::new(l, g);
            if self.leading().unwrap().1.as_rational().unwrap().is_negative() {
                f = -f;
            }
            return self.scale(&Scalar::Rat(f));
        }
        self.monic()
    }

    /// `Some(c)` with `self = c * other` when the two agree up to a unit.
    /// Float coefficients are compared with relative tolerance `1e-9`.
    pub fn unit_ratio(&self, other: &MultiPoly) -> Option<Scalar> {
        self.same_vars(other);
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some(Scalar::one())
            } else {
                None
            };
        }
        if self.terms.len() != other.terms.len() {
            if self.is_exact() && other.is_exact() {
                return None;
            }
        }
        let (e, c) = self.leading().unwrap();
        let oc = other.terms.get(e)?;
        let ratio = c.div(oc)?;
        let diff = self - &other.scale(&ratio);
        if self.is_exact() && other.is_exact() {
            diff.is_zero().then_some(ratio)
        } else {
            let tol = 1e-9 * self.max_abs_coeff().max(1e-300);
            (diff.max_abs_coeff() <= tol).then_some(ratio)
        }
    }

    pub fn approx_eq(&self, other: &MultiPoly, tol: f64) -> bool {
        let diff = self - other;
        diff.max_abs_coeff() <= tol * (1.0 + self.max_abs_coeff().max(other.max_abs_coeff()))
    }

    /// Drops float coefficients below `tol` times the largest one.
    pub fn chop(&self, tol: f64) -> MultiPoly {
        let cut = tol * self.max_abs_coeff();
        MultiPoly::from_terms(
            &self.vars,
            self.terms
                .iter()
                .filter(|(_, c)| c.is_exact() || c.abs_f64() > cut)
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &MultiPoly) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.same_vars(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.same_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.same_vars(rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (neg, body) = c.signed_body();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            let term = match (body, mono.is_empty()) {
                (None, true) => "1".to_string(),
                (None, false) => mono.join("*"),
                (Some(b), true) => b,
                (Some(b), false) => format!("{}*{}", b, mono.join("*")),
            };
            if first {
                if neg {
                    write!(f, "-{term}")?;
                } else {
                    write!(f, "{term}")?;
                }
            } else if neg {
                write!(f, " - {term}")?;
            } else {
                write!(f, " + {term}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Vars, MultiPoly, MultiPoly) {
        let v = vars(&["x", "y"]);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let (v, x, y) = xy();
        let p = &(&x + &y) * &(&x - &y);
        let q = &x.pow(2) - &y.pow(2);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        assert_eq!(p.total_degree(), 2);
        assert_eq!(MultiPoly::zero(&v).total_degree(), 0);
    }

    #[test]
    fn exact_division() {
        let (_, x, y) = xy();
        let f = &(&x - &y).pow(3) * &(&x + &y);
        let q = f.div_exact(&(&x - &y)).unwrap();
        assert_eq!(q, &(&x - &y).pow(2) * &(&x + &y));
        assert!(f.div_exact(&(&x + &y.scale(&Scalar::int(2)))).is_none());
    }

    #[test]
    fn composition() {
        let (v, x, y) = xy();
        let f = &x.pow(2) + &y;
        let g = f.compose(&[&x + &y, MultiPoly::int(&v, 3)]);
        assert_eq!(g, &(&x + &y).pow(2) + &MultiPoly::int(&v, 3));
    }

    #[test]
    fn derivative_and_coeffs() {
        let (v, x, y) = xy();
        let f = &(&x.pow(3) * &y) + &x.scale(&Scalar::int(5));
        assert_eq!(f.derivative(0), &(&x.pow(2) * &y).scale(&Scalar::int(3)) + &MultiPoly::int(&v, 5));
        let cs = f.coeffs_in(0);
        assert_eq!(cs.len(), 4);
        assert_eq!(cs[3], y);
        assert_eq!(MultiPoly::from_coeffs_in(&v, 0, &cs), f);
    }

    #[test]
    fn normalization_up_to_unit() {
        let (_, x, y) = xy();
        let f = &x.scale(&Scalar::ratio(-3, 2)) + &y.scale(&Scalar::int(6));
        let n = f.normalized();
        assert_eq!(n, &x - &y.scale(&Scalar::int(4)));
        assert_eq!(f.unit_ratio(&n), Some(Scalar::ratio(-3, 2)));
    }

    #[test]
    fn display_format() {
        let (v, x, y) = xy();
        let f = &(&x.pow(2) * &y) - &(&x.scale(&Scalar::ratio(3, 4)) - &MultiPoly::int(&v, 1));
        assert_eq!(f.to_string(), "x^2*y - 3/4*x + 1");
    }
}
