//! Text form of polynomials.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' uint)?
//! base   := int | symbol | 'sqrt(' '-'? uint ')' | '(' expr ')'
//! ```
//!
//! Division is only accepted by nonzero constants, so every parsed value is
//! a polynomial. `Display` on [`MultiPoly`] emits this grammar for the exact
//! rings, and parsing the output reproduces the polynomial.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::poly::{MultiPoly, Vars};
use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

pub fn parse_poly(src: &str, vars: &Vars, ring: Ring) -> Result<MultiPoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
        ring,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    if ring == Ring::Complex {
        return Ok(out.to_complex());
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
    ring: Ring,
}

impl Parser<'_> {
    fn err(&self, msg: String) -> Error {
        Error::Parse { pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                neg = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor()?;
                    let c = f.constant_value().ok_or(Error::Parse {
                        pos: at,
                        msg: "division by a non-constant".into(),
                    })?;
                    let inv = c.inv().ok_or(Error::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let b = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            let e = e
                .to_u32()
                .filter(|&e| e <= 10_000)
                .ok_or_else(|| self.err("exponent too large".into()))?;
            return Ok(b.pow(e));
        }
        Ok(b)
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer".into()));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn base(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            None => Err(self.err("unexpected end of input".into())),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(MultiPoly::constant(self.vars, Scalar::from_bigint(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "sqrt" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let neg = if self.peek() == Some(b'-') {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    self.skip_ws();
                    let at = self.pos;
                    let n = self.uint()?;
                    self.expect(b')')?;
                    let n = n
                        .to_i64()
                        .ok_or_else(|| Error::Parse { pos: at, msg: "sqrt argument too large".into() })?;
                    let n = if neg { -n } else { n };
                    let s = Scalar::sqrt_int(n, self.ring).map_err(|e| match e {
                        Error::Parse { msg, .. } => Error::Parse { pos: start, msg },
                        other => other,
                    })?;
                    return Ok(MultiPoly::constant(self.vars, s));
                }
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(MultiPoly::var(self.vars, i)),
                    None => Err(Error::UnknownSymbol(name.to_string())),
                }
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::vars;
    use proptest::prelude::*;

    #[test]
    fn basic_expressions() {
        let v = vars(&["x", "y", "p"]);
        let f = parse_poly("(x^3 - x)*p - (y^3 - y)", &v, Ring::Rational).unwrap();
        assert_eq!(f.to_string(), "x^3*p - x*p - y^3 + y");
        let g = parse_poly(" -x + 1/2*y^2 ", &v, Ring::Rational).unwrap();
        assert_eq!(g.to_string(), "-x + 1/2*y^2");
    }

    #[test]
    fn errors_carry_positions() {
        let v = vars(&["x", "y"]);
        match parse_poly("x + * y", &v, Ring::Rational) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_poly("x + z", &v, Ring::Rational),
            Err(Error::UnknownSymbol("z".into()))
        );
        assert!(matches!(parse_poly("sqrt(5)*x", &v, Ring::Rational), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x/y", &v, Ring::Rational), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(x + y", &v, Ring::Rational), Err(Error::Parse { .. })));
    }

    #[test]
    fn quadratic_ring() {
        let v = vars(&["x", "y"]);
        let f = parse_poly("(x^2 - (sqrt(5) - 2)^2)*(x + sqrt(5)*y)", &v, Ring::QuadExt(5)).unwrap();
        assert_eq!(f.ring(), Ring::QuadExt(5));
        let back = parse_poly(&f.to_string(), &v, Ring::QuadExt(5)).unwrap();
        assert_eq!(back, f);
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let v = vars(&["x", "y", "p"]);
        prop::collection::vec(((0u16..4, 0u16..4, 0u16..4), -20i64..20, 1i64..6), 0..8).prop_map(
            move |ts| {
                MultiPoly::from_terms(
                    &v,
                    ts.into_iter().map(|((a, b, c), n, d)| {
                        (smallvec::smallvec![a, b, c], Scalar::ratio(n, d))
                    }),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_fixed_point(p in arb_poly()) {
            let s = p.to_string();
            let q = parse_poly(&s, p.vars(), Ring::Rational).unwrap();
            prop_assert_eq!(&q, &p);
            prop_assert_eq!(q.to_string(), s);
        }

        #[test]
        fn quad_print_parse_fixed_point(p in arb_poly(), q in arb_poly()) {
            let r5 = MultiPoly::constant(p.vars(), Scalar::sqrt_int(5, Ring::QuadExt(5)).unwrap());
            let f = &p + &(&q * &r5);
            let s = f.to_string();
            let g = parse_poly(&s, f.vars(), Ring::QuadExt(5)).unwrap();
            prop_assert_eq!(&g, &f);
            prop_assert_eq!(g.to_string(), s);
        }
    }
}
