//! Roots of univariate complex polynomials.
//!
//! Simultaneous Aberth iteration, followed by two Newton steps per root on
//! the original coefficients. Coefficients are given lowest degree first.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `(p(z), p'(z))` by Horner.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|p(z)| / sum |a_i| |z|^i`.
pub fn relative_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let mut scale = 0.0;
    for c in coeffs.iter().rev() {
        scale = scale * r + c.norm();
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All complex roots with multiplicity. The leading coefficient must be
/// nonzero.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if coeffs.is_empty() || coeffs[n] == Complex64::new(0.0, 0.0) {
        return Err(Error::Degenerate("vanishing leading coefficient".into()));
    }
    // Exact zero roots.
    let z0 = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[z0..];
    let m = reduced.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); z0];
    match m {
        0 => {}
        1 => roots.push(-reduced[0] / reduced[1]),
        _ => roots.extend(aberth(reduced)),
    }
    for z in roots.iter_mut().skip(z0) {
        for _ in 0..2 {
            let (p, dp) = horner(coeffs, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *z - p / dp;
            if horner(coeffs, cand).0.norm() <= p.norm() {
                *z = cand;
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n].norm();
    // Radius from the largest ratio bound, centred on the root mean.
    let mut radius: f64 = 0.0;
    for (i, a) in c.iter().enumerate().take(n) {
        let v = (a.norm() / lead).powf(1.0 / (n - i) as f64);
        radius = radius.max(v);
    }
    let center = -c[n - 1] / (c[n] * n as f64);
    let radius = radius.max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, th)
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            } else {
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                moved = 1.0;
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Groups roots closer than `tol * (1 + |z|)`; returns `(mean, count)`.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![roots[i]];
        let mut changed = true;
        while changed {
            changed = false;
            for j in 0..roots.len() {
                if used[j] {
                    continue;
                }
                if members
                    .iter()
                    .any(|m| (roots[j] - m).norm() <= tol * (1.0 + m.norm()))
                {
                    used[j] = true;
                    members.push(roots[j]);
                    changed = true;
                }
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((mean, members.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn simple_roots() {
        // (t - 1)(t - 2)(t + 3) = t^3 - 7t + 6
        let r = poly_roots(&c(&[6.0, -7.0, 0.0, 1.0])).unwrap();
        let want = [-3.0, 1.0, 2.0];
        for (z, w) in r.iter().zip(want) {
            assert!((z - Complex64::new(w, 0.0)).norm() < 1e-13, "{z}");
        }
    }

    #[test]
    fn roots_of_unity_and_residuals() {
        let mut cs = vec![Complex64::new(0.0, 0.0); 8];
        cs[0] = Complex64::new(-1.0, 0.0);
        cs[7] = Complex64::new(1.0, 0.0);
        let r = poly_roots(&cs).unwrap();
        assert_eq!(r.len(), 7);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-13);
            assert!(relative_residual(&cs, z) < 1e-12);
        }
    }

    #[test]
    fn zero_roots_and_clusters() {
        // t^2 (t - 1)^2
        let r = poly_roots(&c(&[0.0, 0.0, 1.0, -2.0, 1.0])).unwrap();
        let cl = cluster_roots(&r, 1e-6);
        assert_eq!(cl.len(), 2);
        assert!(cl.iter().all(|(_, k)| *k == 2));
    }

    #[test]
    fn wide_dynamic_range() {
        // (t - 1e-4)(t - 1e4)(t + 1)
        let a = 1e-4;
        let b = 1e4;
        let cs = c(&[a * b, a * b - a - b, 1.0 - a - b, 1.0]);
        let r = poly_roots(&cs).unwrap();
        assert!((r[0].re + 1.0).abs() < 1e-12);
        assert!((r[1].re - a).abs() < 1e-14);
        assert!((r[2].re - b).abs() < 1e-8);
    }

    #[test]
    fn rejects_vanishing_lead() {
        assert!(poly_roots(&c(&[1.0, 0.0])).is_err());
    }
}
