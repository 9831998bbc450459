//! Resultants through the Sylvester matrix.
//!
//! With `f = a prod (t - alpha_i)` and `g = b prod (t - beta_j)` the result
//! is `a^deg(g) b^deg(f) prod (alpha_i - beta_j)`.
//!
//! The default route specialises the remaining variables at integer points,
//! takes each scalar determinant by fraction-free Bareiss elimination, and
//! rebuilds the polynomial by Newton interpolation one variable at a time.
//! [`resultant_bareiss`] runs Bareiss directly on the polynomial matrix and
//! is kept as an independent check.

use super::poly::MultiPoly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Default cap on coefficient size during elimination.
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly> {
    resultant_capped(f, g, var, DEFAULT_BIT_CAP)
}

pub fn resultant_capped(f: &MultiPoly, g: &MultiPoly, var: usize, cap: u64) -> Result<MultiPoly> {
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero(f.vars()));
    }
    if f.degree_in(var) + g.degree_in(var) == 0 {
        return Ok(MultiPoly::one(f.vars()));
    }
    let mat = sylvester(f, g, var);
    let rest: Vec<usize> = (0..f.nvars())
        .filter(|&i| mat.iter().flatten().any(|e| e.degree_in(i) > 0))
        .collect();
    let exact = f.is_exact() && g.is_exact();
    if !exact {
        let mut mat = mat;
        return det_bareiss(&mut mat, cap);
    }
    det_interpolated(&mat, &rest, cap)
}

/// Direct Bareiss elimination on the polynomial Sylvester matrix.
pub fn resultant_bareiss(f: &MultiPoly, g: &MultiPoly, var: usize) -> Result<MultiPoly> {
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero(f.vars()));
    }
    if f.degree_in(var) + g.degree_in(var) == 0 {
        return Ok(MultiPoly::one(f.vars()));
    }
    det_bareiss(&mut sylvester(f, g, var), DEFAULT_BIT_CAP)
}

/// Determinant of a polynomial matrix by evaluation at integer points in
/// the variables `rest` and Newton interpolation.
pub fn det_interpolated(mat: &[Vec<MultiPoly>], rest: &[usize], cap: u64) -> Result<MultiPoly> {
    let vars = mat[0][0].vars().clone();
    let Some((&v, tail)) = rest.split_first() else {
        let mut m: Vec<Vec<Scalar>> = mat
            .iter()
            .map(|row| row.iter().map(|e| e.constant_value().expect("constant entry")).collect())
            .collect();
        return Ok(MultiPoly::constant(&vars, det_scalar(&mut m, cap)?));
    };
    // The determinant's degree in v is at most the smaller of the sums of
    // row maxima and column maxima.
    let n = mat.len();
    let rows: u32 = mat.iter().map(|r| r.iter().map(|e| e.degree_in(v)).max().unwrap_or(0)).sum();
    let cols: u32 = (0..n).map(|j| (0..n).map(|i| mat[i][j].degree_in(v)).max().unwrap_or(0)).sum();
    let bound = rows.min(cols);
    let x = MultiPoly::var(&vars, v);
    let mut h = MultiPoly::zero(&vars);
    let mut q = MultiPoly::one(&vars);
    for k in 0..=bound as i64 {
        let c = Scalar::int(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let sub: Vec<Vec<MultiPoly>> = mat
            .iter()
            .map(|row| row.iter().map(|e| e.eval_var(v, &c)).collect())
            .collect();
        let val = det_interpolated(&sub, tail, cap)?;
        let hc = h.eval_var(v, &c);
        let qc = q.eval_var(v, &c).constant_value().unwrap();
        let step = (&val - &hc).scale(&qc.inv().unwrap());
        h = &h + &(&step * &q);
        if h.max_bits() > cap {
            return Err(Error::CoefficientGrowth { cap });
        }
        q = &q * &(&x - &MultiPoly::constant(&vars, c));
    }
    Ok(h)
}

/// Determinant of a scalar matrix by fraction-free elimination.
pub fn det_scalar(mat: &mut [Vec<Scalar>], cap: u64) -> Result<Scalar> {
    let n = mat.len();
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut negate = false;
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Scalar::zero()),
            }
        }
        let inv = prev.inv().unwrap();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                let q = &num * &inv;
                if q.bits() > cap {
                    return Err(Error::CoefficientGrowth { cap });
                }
                mat[i][j] = q;
            }
        }
        prev = mat[k][k].clone();
    }
    let d = mat[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// The `(m+n) x (m+n)` Sylvester matrix, highest coefficients first.
pub fn sylvester(f: &MultiPoly, g: &MultiPoly, var: usize) -> Vec<Vec<MultiPoly>> {
    let fc = f.coeffs_in(var);
    let gc = g.coeffs_in(var);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    let zero = MultiPoly::zero(f.vars());
    let mut mat = vec![vec![zero; size]; size];
    for r in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + r][r + k] = c.clone();
        }
    }
    mat
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn det_bareiss(mat: &mut [Vec<MultiPoly>], cap: u64) -> Result<MultiPoly> {
    let n = mat.len();
    let vars = mat[0][0].vars().clone();
    if n == 0 {
        return Ok(MultiPoly::one(&vars));
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(&vars);
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(MultiPoly::zero(&vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                let q = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Domain("inexact Bareiss step".into()))?;
                if q.max_bits() > cap {
                    return Err(Error::CoefficientGrowth { cap });
                }
                mat[i][j] = q;
            }
        }
        prev = mat[k][k].clone();
    }
    let d = mat[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly::vars;
    use crate::algebra::scalar::Ring;
    use proptest::prelude::*;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &vars(&["x", "y", "a", "b", "p"]), Ring::Rational).unwrap()
    }

    #[test]
    fn linear_factors() {
        assert_eq!(resultant(&p("p - a"), &p("p - b"), 4).unwrap(), p("a - b"));
    }

    #[test]
    fn quadratic_with_derivative() {
        assert_eq!(resultant(&p("p^2 - y"), &p("2*p"), 4).unwrap(), p("-4*y"));
    }

    #[test]
    fn two_quadratics() {
        assert_eq!(resultant(&p("p^2 - x"), &p("p^2 - y"), 4).unwrap(), p("(x - y)^2"));
    }

    #[test]
    fn constant_argument() {
        assert_eq!(resultant(&p("3"), &p("p^2 + 1"), 4).unwrap(), p("9"));
    }

    #[test]
    fn growth_cap_is_reported() {
        let f = p("p^6 + 123456789*x*p^3 + 987654321*y");
        let g = f.derivative(4);
        assert_eq!(resultant_capped(&f, &g, 4, 8), Err(Error::CoefficientGrowth { cap: 8 }));
    }

    fn arb_univariate() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(-9i64..9, 1..6).prop_map(|cs| {
            let mut s = String::from("0");
            for (k, c) in cs.iter().enumerate() {
                s.push_str(&format!(" + ({c})*p^{k} + ({})*x*p^{k}", (c * 7) % 5));
            }
            p(&s)
        })
    }

    #[test]
    fn interpolation_matches_direct_elimination() {
        let f = p("p^3*x - p^2*(y - x*a) + 3*p*b^2 - x*y + a");
        let g = p("(x^2 - y)*p^2 + p*a*b - 7*y");
        assert_eq!(resultant(&f, &g, 4).unwrap(), resultant_bareiss(&f, &g, 4).unwrap());
        let h = f.derivative(4);
        assert_eq!(resultant(&f, &h, 4).unwrap(), resultant_bareiss(&f, &h, 4).unwrap());
    }

    #[test]
    fn vanishing_formal_leading_coefficient() {
        // x*p^2 + p - 1 with p - y: at x = 0 the formal degree drops.
        let r = resultant(&p("x*p^2 + p - 1"), &p("p - y"), 4).unwrap();
        assert_eq!(r, p("x*y^2 + y - 1"));
    }

    proptest! {
        #[test]
        fn antisymmetry(f in arb_univariate(), g in arb_univariate()) {
            let df = f.degree_in(4);
            let dg = g.degree_in(4);
            let r1 = resultant(&f, &g, 4).unwrap();
            let r2 = resultant(&g, &f, 4).unwrap();
            let r2 = if (df * dg) % 2 == 1 { -r2 } else { r2 };
            prop_assert_eq!(r1, r2);
        }
    }
}
