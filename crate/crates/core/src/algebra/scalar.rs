//! Coefficient rings.
//!
//! Three rings are supported: exact rationals, a single quadratic extension
//! `Q(sqrt D)`, and double-precision complex numbers. A [`Scalar`] carries its
//! own ring; exact values in `Q(sqrt D)` whose irrational part vanishes are
//! stored as plain rationals so that equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag naming the coefficient ring of a polynomial or computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Rational,
    /// `Q(sqrt D)` with `D` squarefree and different from 0 and 1.
    QuadExt(i64),
    Complex,
}

impl Ring {
    /// Parses `rational`, `quadext:<D>` or `complex`.
    pub fn parse(s: &str) -> Result<Ring> {
        let s = s.trim();
        match s {
            "rational" | "Q" => Ok(Ring::Rational),
            "complex" | "C" => Ok(Ring::Complex),
            _ => {
                let d = s
                    .strip_prefix("quadext:")
                    .ok_or_else(|| Error::Usage(format!("unknown ring '{s}'")))?;
                let d: i64 = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad extension parameter in '{s}'")))?;
                Ring::quad(d)
            }
        }
    }

    /// Checked constructor for `Q(sqrt d)`.
    pub fn quad(d: i64) -> Result<Ring> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::Usage(format!(
                "extension parameter {d} must be squarefree and not 0 or 1"
            )));
        }
        Ok(Ring::QuadExt(d))
    }

    /// Smallest ring containing both.
    pub fn join(self, other: Ring) -> Result<Ring> {
        use Ring::*;
        match (self, other) {
            (Complex, _) | (_, Complex) => Ok(Complex),
            (Rational, r) | (r, Rational) => Ok(r),
            (QuadExt(a), QuadExt(b)) if a == b => Ok(QuadExt(a)),
            (QuadExt(a), QuadExt(b)) => Err(Error::MixedExtensions(a, b)),
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Ring::Complex)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "rational"),
            Ring::QuadExt(d) => write!(f, "quadext:{d}"),
            Ring::Complex => write!(f, "complex"),
        }
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// `a + b sqrt(d)` with `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

/// A coefficient in one of the supported rings.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Quad(QuadNum),
    Cplx(Complex64),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Rat(rat(n, d))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar::Rat(BigRational::from_integer(n))
    }

    /// `a + b sqrt(d)`, demoted to a rational when `b = 0`.
    pub fn quad(a: BigRational, b: BigRational, d: i64) -> Scalar {
        if b.is_zero() {
            Scalar::Rat(a)
        } else {
            Scalar::Quad(QuadNum { a, b, d })
        }
    }

    pub fn complex(re: f64, im: f64) -> Scalar {
        Scalar::Cplx(Complex64::new(re, im))
    }

    /// `sqrt(n)` interpreted inside `ring`.
    pub fn sqrt_int(n: i64, ring: Ring) -> Result<Scalar> {
        match ring {
            Ring::Rational => Err(Error::Parse {
                pos: 0,
                msg: "sqrt is not available over the rational ring".into(),
            }),
            Ring::Complex => {
                let v = Complex64::new(n as f64, 0.0).sqrt();
                Ok(Scalar::Cplx(v))
            }
            Ring::QuadExt(d) => {
                if n == 0 {
                    return Ok(Scalar::zero());
                }
                if let Some(s) = exact_isqrt(n) {
                    return Ok(Scalar::int(s));
                }
                // n = d * s^2
                if n % d == 0 {
                    if let Some(s) = exact_isqrt(n / d) {
                        return Ok(Scalar::quad(BigRational::zero(), rat(s, 1), d));
                    }
                }
                Err(Error::Parse {
                    pos: 0,
                    msg: format!("sqrt({n}) does not lie in Q(sqrt {d})"),
                })
            }
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rat(_) => Ring::Rational,
            Scalar::Quad(q) => Ring::QuadExt(q.d),
            Scalar::Cplx(_) => Ring::Complex,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Cplx(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(_) => false,
            Scalar::Cplx(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Quad(_) => false,
            Scalar::Cplx(c) => c.re == 1.0 && c.im == 0.0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rat(r) => Complex64::new(rat_to_f64(r), 0.0),
            Scalar::Quad(q) => {
                let a = rat_to_f64(&q.a);
                let b = rat_to_f64(&q.b);
                if q.d > 0 {
                    Complex64::new(a + b * (q.d as f64).sqrt(), 0.0)
                } else {
                    Complex64::new(a, b * ((-q.d) as f64).sqrt())
                }
            }
            Scalar::Cplx(c) => *c,
        }
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Promotes into `ring`, or fails when that would lose exactness
    /// information (e.g. a complex value into an exact ring).
    pub fn into_ring(self, ring: Ring) -> Result<Scalar> {
        match (self, ring) {
            (s, Ring::Complex) => Ok(Scalar::Cplx(s.to_complex())),
            (Scalar::Rat(r), _) => Ok(Scalar::Rat(r)),
            (Scalar::Quad(q), Ring::QuadExt(d)) if q.d == d => Ok(Scalar::Quad(q)),
            (s, r) => Err(Error::Domain(format!("cannot view {s} in ring {r}"))),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Quad(q) => {
                let norm = &q.a * &q.a - &q.b * &q.b * BigRational::from_integer(q.d.into());
                Scalar::quad(&q.a / &norm, -(&q.b / &norm), q.d)
            }
            Scalar::Cplx(c) => Scalar::Cplx(c.inv()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
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

    /// Galois conjugate in `Q(sqrt D)`; identity on rationals, complex
    /// conjugation on floats.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.clone()),
            Scalar::Quad(q) => Scalar::quad(q.a.clone(), -q.b.clone(), q.d),
            Scalar::Cplx(c) => Scalar::Cplx(c.conj()),
        }
    }

    /// Tolerance comparison through the complex embedding.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        let a = self.to_complex();
        let b = other.to_complex();
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    /// Bit size of the largest numerator or denominator involved.
    pub fn bits(&self) -> u64 {
        fn rb(r: &BigRational) -> u64 {
            r.numer().bits().max(r.denom().bits())
        }
        match self {
            Scalar::Rat(r) => rb(r),
            Scalar::Quad(q) => rb(&q.a).max(rb(&q.b)),
            Scalar::Cplx(_) => 64,
        }
    }

    fn is_negative_leading(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Quad(q) => {
                if q.a.is_zero() {
                    q.b.is_negative()
                } else {
                    q.a.is_negative()
                }
            }
            Scalar::Cplx(c) => {
                if c.re == 0.0 {
                    c.im < 0.0
                } else {
                    c.re < 0.0
                }
            }
        }
    }

    /// Writes the value as an expression accepted by the parser, preceded by
    /// its sign. Returns `(negative, body)`; `body` is `None` for unit
    /// magnitude so that callers can elide `1*`.
    pub(crate) fn signed_body(&self) -> (bool, Option<String>) {
        let neg = self.is_negative_leading();
        let mag = if neg { -self.clone() } else { self.clone() };
        if mag.is_one() {
            return (neg, None);
        }
        (neg, Some(mag.body_string()))
    }

    fn body_string(&self) -> String {
        match self {
            Scalar::Rat(r) => rat_string(r),
            Scalar::Quad(q) => {
                let sq = format!("sqrt({})", q.d);
                let bpart = if q.b.is_one() {
                    sq
                } else if (-q.b.clone()).is_one() {
                    format!("-{sq}")
                } else {
                    format!("{}*{}", rat_string(&q.b), sq)
                };
                if q.a.is_zero() {
                    if bpart.starts_with('-') || bpart.contains('/') {
                        format!("({bpart})")
                    } else {
                        bpart
                    }
                } else {
                    let sign = if bpart.starts_with('-') { "" } else { " + " };
                    let bpart = if bpart.starts_with('-') {
                        format!(" - {}", &bpart[1..])
                    } else {
                        bpart
                    };
                    format!("({}{}{})", rat_string(&q.a), sign, bpart)
                }
            }
            Scalar::Cplx(c) => format!("({}{:+}i)", c.re, c.im),
        }
    }
}

fn rat_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Shift both to a common magnitude before converting.
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb.max(db) - 60).max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if r.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

fn exact_isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    for c in [r - 1, r, r + 1] {
        if c >= 0 && c * c == n {
            return Some(c);
        }
    }
    None
}

/// Best rational approximation with denominator at most `max_den`, if it
/// lies within `tol` of `v`.
pub fn rationalize(v: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = v;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (v - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = x - a;
        if frac.abs() < 1e-300 {
            break;
        }
        x = 1.0 / frac;
    }
    if k1 != 0 && (v - h1 as f64 / k1 as f64).abs() <= tol {
        return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
    }
    None
}

/// Attempts to recognise a complex float as an exact element of `Q` or of
/// one of the quadratic fields `Q(sqrt d)` for `d` in `fields`.
pub fn recognize(z: Complex64, fields: &[i64], tol: f64) -> Option<Scalar> {
    let scale = 1.0 + z.norm();
    if z.im.abs() <= tol * scale {
        if let Some(r) = rationalize(z.re, 720, tol * scale) {
            return Some(Scalar::Rat(r));
        }
    }
    for &d in fields {
        if d < 0 {
            let s = ((-d) as f64).sqrt();
            let a = rationalize(z.re, 720, tol * scale);
            let b = rationalize(z.im / s, 720, tol * scale);
            if let (Some(a), Some(b)) = (a, b) {
                if !b.is_zero() {
                    return Some(Scalar::quad(a, b, d));
                }
            }
        } else if z.im.abs() <= tol * scale {
            let s = (d as f64).sqrt();
            for den in 1..=12i64 {
                for num in -48..=48i64 {
                    if num == 0 {
                        continue;
                    }
                    let b = num as f64 / den as f64;
                    if num.gcd(&den) != 1 {
                        continue;
                    }
                    if let Some(a) = rationalize(z.re - b * s, 64, tol * scale) {
                        return Some(Scalar::quad(a, rat(num, den), d));
                    }
                }
            }
        }
    }
    None
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Quad(a), Scalar::Quad(b)) => a == b,
            (Scalar::Cplx(a), Scalar::Cplx(b)) => a == b,
            (Scalar::Cplx(a), x) | (x, Scalar::Cplx(a)) => *a == x.to_complex(),
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = self.signed_body();
        let body = body.unwrap_or_else(|| "1".to_string());
        if neg {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

fn quad_parts(s: &Scalar, d: i64) -> (BigRational, BigRational) {
    match s {
        Scalar::Rat(r) => (r.clone(), BigRational::zero()),
        Scalar::Quad(q) => {
            assert_eq!(q.d, d, "mixed quadratic extensions sqrt({}) and sqrt({d})", q.d);
            (q.a.clone(), q.b.clone())
        }
        Scalar::Cplx(_) => unreachable!(),
    }
}

fn quad_param(a: &Scalar, b: &Scalar) -> Option<i64> {
    match (a, b) {
        (Scalar::Quad(q), Scalar::Quad(r)) => {
            assert_eq!(q.d, r.d, "mixed quadratic extensions sqrt({}) and sqrt({})", q.d, r.d);
            Some(q.d)
        }
        (Scalar::Quad(q), _) | (_, Scalar::Quad(q)) => Some(q.d),
        _ => None,
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Cplx(_), _) | (_, Scalar::Cplx(_)) => {
                Scalar::Cplx(self.to_complex() + rhs.to_complex())
            }
            _ => {
                let d = quad_param(self, rhs).unwrap();
                let (a1, b1) = quad_parts(self, d);
                let (a2, b2) = quad_parts(rhs, d);
                Scalar::quad(a1 + a2, b1 + b2, d)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Cplx(_), _) | (_, Scalar::Cplx(_)) => {
                Scalar::Cplx(self.to_complex() * rhs.to_complex())
            }
            (Scalar::Rat(r), Scalar::Quad(q)) | (Scalar::Quad(q), Scalar::Rat(r)) => {
                Scalar::quad(&q.a * r, &q.b * r, q.d)
            }
            (Scalar::Quad(p), Scalar::Quad(q)) => {
                assert_eq!(p.d, q.d, "mixed quadratic extensions sqrt({}) and sqrt({})", p.d, q.d);
                let dd = BigRational::from_integer(p.d.into());
                let a = &p.a * &q.a + &p.b * &q.b * dd;
                let b = &p.a * &q.b + &p.b * &q.a;
                Scalar::quad(a, b, p.d)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::Quad(QuadNum {
                a: -q.a.clone(),
                b: -q.b.clone(),
                d: q.d,
            }),
            Scalar::Cplx(c) => Scalar::Cplx(-c),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Scalar {
        Scalar::Rat(r)
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Scalar {
        Scalar::Cplx(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> Scalar {
        Scalar::sqrt_int(5, Ring::QuadExt(5)).unwrap()
    }

    #[test]
    fn ring_parsing() {
        assert_eq!(Ring::parse("rational").unwrap(), Ring::Rational);
        assert_eq!(Ring::parse("quadext:5").unwrap(), Ring::QuadExt(5));
        assert_eq!(Ring::parse("quadext:-3").unwrap(), Ring::QuadExt(-3));
        assert!(Ring::parse("quadext:4").is_err());
        assert!(Ring::parse("quadext:1").is_err());
        assert!(Ring::parse("reals").is_err());
    }

    #[test]
    fn quadratic_arithmetic() {
        let r5 = s5();
        let two = Scalar::int(2);
        // (sqrt5 - 2)(sqrt5 + 2) = 1
        let a = &r5 - &two;
        let b = &r5 + &two;
        assert_eq!(&a * &b, Scalar::one());
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(&r5 * &r5, Scalar::int(5));
        assert!(matches!(&r5 * &r5, Scalar::Rat(_)));
    }

    #[test]
    fn sqrt_reduces_into_field() {
        assert_eq!(Scalar::sqrt_int(20, Ring::QuadExt(5)).unwrap(), &Scalar::int(2) * &s5());
        assert_eq!(Scalar::sqrt_int(9, Ring::QuadExt(5)).unwrap(), Scalar::int(3));
        assert!(Scalar::sqrt_int(3, Ring::QuadExt(5)).is_err());
        assert!(Scalar::sqrt_int(4, Ring::Rational).is_err());
    }

    #[test]
    #[should_panic(expected = "mixed quadratic extensions")]
    fn mixing_extensions_panics() {
        let a = Scalar::sqrt_int(5, Ring::QuadExt(5)).unwrap();
        let b = Scalar::sqrt_int(2, Ring::QuadExt(2)).unwrap();
        let _ = &a * &b;
    }

    #[test]
    fn mixed_ring_join_is_rejected() {
        assert!(Ring::QuadExt(5).join(Ring::QuadExt(2)).is_err());
        assert_eq!(Ring::Rational.join(Ring::QuadExt(2)).unwrap(), Ring::QuadExt(2));
    }

    #[test]
    fn imaginary_extension_embeds() {
        let w = Scalar::quad(rat(-1, 2), rat(1, 2), -3);
        let z = w.to_complex();
        assert!((z - Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)).norm() < 1e-15);
        assert_eq!(w.pow(3), Scalar::one());
    }

    #[test]
    fn recognition_round_trips() {
        let w = Scalar::quad(rat(-1, 2), rat(1, 2), -3);
        assert_eq!(recognize(w.to_complex(), &[-3], 1e-10), Some(w));
        let g = Scalar::quad(rat(-2, 1), rat(1, 1), 5);
        assert_eq!(recognize(g.to_complex(), &[5], 1e-10), Some(g));
        assert_eq!(recognize(Complex64::new(0.75, 0.0), &[], 1e-12), Some(Scalar::ratio(3, 4)));
        assert_eq!(recognize(Complex64::new(std::f64::consts::PI, 0.0), &[], 1e-12), None);
    }
}
