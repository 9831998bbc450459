//! Forward-mode dual numbers with two infinitesimal directions.
//!
//! `D2 { v, dx, dy }` carries a complex value together with its partial
//! derivatives in `x` and `y`. Arithmetic follows the product and quotient
//! rules, so any rational expression evaluated on seeded inputs yields its
//! first partials exactly, without truncation error.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

type C = Complex64;

/// Field operations shared by plain complex numbers and [`D2`].
pub trait Num:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(c: C) -> Self;
    fn value(self) -> C;
}

impl Num for C {
    fn constant(c: C) -> C {
        c
    }
    fn value(self) -> C {
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct D2 {
    pub v: C,
    pub dx: C,
    pub dy: C,
}

impl D2 {
    pub fn new(v: C, dx: C, dy: C) -> D2 {
        D2 { v, dx, dy }
    }
}

impl Num for D2 {
    fn constant(c: C) -> D2 {
        D2::new(c, C::new(0.0, 0.0), C::new(0.0, 0.0))
    }
    fn value(self) -> C {
        self.v
    }
}

impl Add for D2 {
    type Output = D2;
    fn add(self, o: D2) -> D2 {
        D2::new(self.v + o.v, self.dx + o.dx, self.dy + o.dy)
    }
}

impl Sub for D2 {
    type Output = D2;
    fn sub(self, o: D2) -> D2 {
        D2::new(self.v - o.v, self.dx - o.dx, self.dy - o.dy)
    }
}

impl Mul for D2 {
    type Output = D2;
    fn mul(self, o: D2) -> D2 {
        D2::new(self.v * o.v, self.dx * o.v + self.v * o.dx, self.dy * o.v + self.v * o.dy)
    }
}

impl Div for D2 {
    type Output = D2;
    fn div(self, o: D2) -> D2 {
        let inv = o.v.inv();
        let q = self.v * inv;
        D2::new(q, (self.dx - q * o.dx) * inv, (self.dy - q * o.dy) * inv)
    }
}

impl Neg for D2 {
    type Output = D2;
    fn neg(self) -> D2 {
        D2::new(-self.v, -self.dx, -self.dy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> C {
        C::new(v, 0.0)
    }

    #[test]
    fn rational_expression() {
        // f(x, y) = (x^2 y + 1) / (x - y) at (2, 1): f = 5, f_x = (4 - 5) = -1, f_y = (4 + 5) = 9.
        let x = D2::new(c(2.0), c(1.0), c(0.0));
        let y = D2::new(c(1.0), c(0.0), c(1.0));
        let one = D2::constant(c(1.0));
        let f = (x * x * y + one) / (x - y);
        assert_eq!(f.v, c(5.0));
        assert!((f.dx - c(-1.0)).norm() < 1e-15);
        assert!((f.dy - c(9.0)).norm() < 1e-15);
        assert_eq!((-f).v, c(-5.0));
    }
}
