//! Lines `a x + b y + c z` (or `a x + b y + c` in an affine chart).

use std::fmt;

use num_complex::Complex64;

use super::poly::{MultiPoly, Vars};
use super::scalar::{recognize, Scalar};
use crate::error::{Error, Result};

/// A line, normalized so that its first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    coeffs: [Scalar; 3],
}

impl LinearForm {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<LinearForm> {
        let coeffs = [a, b, c];
        let lead = coeffs
            .iter()
            .find(|s| !s.is_zero())
            .ok_or_else(|| Error::Degenerate("all coefficients vanish".into()))?
            .inv()
            .unwrap();
        Ok(LinearForm {
            coeffs: coeffs.map(|s| &s * &lead),
        })
    }

    /// Builds a line from float coefficients, normalizing by the entry of
    /// largest modulus first so that tiny entries are not promoted to 1.
    pub fn from_complex(v: [Complex64; 3]) -> Result<LinearForm> {
        let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if big == 0.0 {
            return Err(Error::Degenerate("all coefficients vanish".into()));
        }
        let cut = 1e-9 * big;
        let first = v.iter().position(|z| z.norm() > cut).unwrap();
        let s = v[first];
        let coeffs = v.map(|z| {
            let w = z / s;
            if w.norm() <= cut / s.norm() {
                Scalar::zero()
            } else {
                Scalar::Cplx(w)
            }
        });
        let mut out = LinearForm { coeffs };
        out.coeffs[first] = Scalar::one();
        Ok(out)
    }

    pub fn coeffs(&self) -> &[Scalar; 3] {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn to_complex(&self) -> [Complex64; 3] {
        [0, 1, 2].map(|i| self.coeffs[i].to_complex())
    }

    /// Replaces float coefficients by exact values when they are recognised
    /// as rationals or elements of one of `fields`.
    pub fn exactify(&self, fields: &[i64]) -> Option<LinearForm> {
        let mut out = Vec::new();
        for c in &self.coeffs {
            if c.is_exact() {
                out.push(c.clone());
            } else {
                out.push(recognize(c.to_complex(), fields, 1e-9)?);
            }
        }
        let [a, b, c]: [Scalar; 3] = out.try_into().ok()?;
        LinearForm::new(a, b, c).ok()
    }

    /// The linear polynomial. With two indices the third coefficient is the
    /// constant term; with three the form is homogeneous.
    pub fn to_poly(&self, vars: &Vars, idx: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = match idx.get(k) {
                Some(&i) => MultiPoly::var(vars, i).scale(c),
                None => MultiPoly::constant(vars, c.clone()),
            };
            out = &out + &t;
        }
        out
    }

    pub fn eval_c(&self, p: [Complex64; 3]) -> Complex64 {
        let c = self.to_complex();
        c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
    }

    pub fn approx_eq(&self, other: &LinearForm, tol: f64) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.approx_eq(b, tol))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let l = LinearForm::new(Scalar::zero(), Scalar::int(3), Scalar::int(-6)).unwrap();
        assert_eq!(l.coeffs()[1], Scalar::one());
        assert_eq!(l.coeffs()[2], Scalar::int(-2));
        assert!(LinearForm::new(Scalar::zero(), Scalar::zero(), Scalar::zero()).is_err());
    }

    #[test]
    fn exactify_recognises_cube_roots() {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let l = LinearForm::from_complex([Complex64::new(2.0, 0.0), -w * 2.0, Complex64::new(0.0, 0.0)]).unwrap();
        let e = l.exactify(&[-3]).unwrap();
        assert!(e.is_exact());
        assert!(e.approx_eq(&l, 1e-12));
    }
}
