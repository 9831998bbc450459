//! Web definition files.
//!
//! A small key-value text format, one entry per line, `#` starts a comment:
//!
//! ```text
//! ring = quadext:5
//! vars = x, y, p
//! F = p^3 - x*y
//! ```
//!
//! A foliation is given by its affine vector field instead of `F`, either as
//! `vectorfield = A, B` (or `vectorfield A, B`) or as two entries `A = ...`
//! and `B = ...`. `vars` renames the variables of the file (three names for
//! `F`, two for a vector field); they are mapped in order onto `x, y, p`.

use std::fmt::Write as _;

use crate::algebra::{parse_poly, vars, MultiPoly, Ring};
use crate::error::{Error, Result};
use crate::web::{affine_vars, foliation_to_web, plane_vars, AffineWeb, Foliation};

#[derive(Clone, Debug)]
pub enum WebDef {
    Implicit(AffineWeb),
    Field(Foliation),
}

#[derive(Clone, Debug)]
pub struct WebFile {
    pub ring: Ring,
    pub def: WebDef,
}

impl WebFile {
    pub fn implicit(w: AffineWeb) -> WebFile {
        WebFile { ring: w.ring(), def: WebDef::Implicit(w) }
    }

    pub fn field(f: Foliation) -> WebFile {
        WebFile { ring: f.ring(), def: WebDef::Field(f) }
    }

    /// The web, a foliation being its own 1-web.
    pub fn web(&self) -> Result<AffineWeb> {
        match &self.def {
            WebDef::Implicit(w) => Ok(w.clone()),
            WebDef::Field(f) => foliation_to_web(f),
        }
    }

    pub fn foliation(&self) -> Option<&Foliation> {
        match &self.def {
            WebDef::Field(f) => Some(f),
            WebDef::Implicit(_) => None,
        }
    }

    pub fn parse(text: &str) -> Result<WebFile> {
        WebFile::parse_with_ring(text, Ring::Rational)
    }

    /// As [`WebFile::parse`], with `default` used when the file has no `ring`.
    pub fn parse_with_ring(text: &str, default: Ring) -> Result<WebFile> {
        let mut ring = None;
        let mut names: Option<Vec<String>> = None;
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = split_entry(line).ok_or_else(|| bad(n, "expected 'key = value'"))?;
            if entries.iter().any(|(k, _, _)| *k == key) || (key == "ring" && ring.is_some()) || (key == "vars" && names.is_some()) {
                return Err(bad(n, &format!("duplicate entry '{key}'")));
            }
            match key.as_str() {
                "ring" => ring = Some(Ring::parse(&value)?),
                "vars" => names = Some(value.split(',').map(|s| s.trim().to_string()).collect()),
                "F" | "vectorfield" | "A" | "B" => entries.push((key, value, n)),
                _ => return Err(bad(n, &format!("unknown key '{key}'"))),
            }
        }
        let ring = ring.unwrap_or(default);
        let get = |k: &str| entries.iter().find(|(key, _, _)| key == k).map(|(_, v, n)| (v.clone(), *n));
        let has_field = get("vectorfield").is_some() || get("A").is_some() || get("B").is_some();
        match (get("F"), has_field) {
            (Some((src, _)), false) => {
                let vs = file_vars(names, &["x", "y", "p"])?;
                let f = parse_poly(&src, &vs, ring)?.with_vars(&affine_vars(), &[0, 1, 2]);
                Ok(WebFile { ring, def: WebDef::Implicit(AffineWeb::new(f)?) })
            }
            (None, true) => {
                let (a, b) = match (get("vectorfield"), get("A"), get("B")) {
                    (Some((v, n)), None, None) => {
                        let parts: Vec<&str> = v.split(',').collect();
                        if parts.len() != 2 {
                            return Err(bad(n, "vectorfield needs two components 'A, B'"));
                        }
                        (parts[0].trim().to_string(), parts[1].trim().to_string())
                    }
                    (None, Some((a, _)), Some((b, _))) => (a, b),
                    _ => return Err(Error::Usage("give either 'vectorfield = A, B' or both 'A' and 'B'".into())),
                };
                let vs = file_vars(names, &["x", "y"])?;
                let pv = plane_vars();
                let a = parse_poly(&a, &vs, ring)?.with_vars(&pv, &[0, 1]);
                let b = parse_poly(&b, &vs, ring)?.with_vars(&pv, &[0, 1]);
                Ok(WebFile { ring, def: WebDef::Field(Foliation::affine(a, b)?) })
            }
            (Some(_), true) => Err(Error::Usage("a web file holds either F or a vector field, not both".into())),
            (None, false) => Err(Error::Usage("web file defines neither F nor a vector field".into())),
        }
    }

    /// Text form; parsing it back gives the same web for exact rings.
    pub fn emit(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "ring = {}", self.ring);
        match &self.def {
            WebDef::Implicit(w) => {
                let _ = writeln!(out, "vars = x, y, p");
                let _ = writeln!(out, "F = {}", w.poly());
            }
            WebDef::Field(f) => {
                let _ = writeln!(out, "vars = x, y");
                let _ = writeln!(out, "vectorfield = {}, {}", f.a(), f.b());
            }
        }
        out
    }
}

fn bad(line: usize, msg: &str) -> Error {
    Error::Usage(format!("web file line {}: {msg}", line + 1))
}

fn split_entry(line: &str) -> Option<(String, String)> {
    if let Some((k, v)) = line.split_once('=') {
        let k = k.trim();
        if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Some((k.to_string(), v.trim().to_string()));
        }
    }
    // `vectorfield A, B` without the equals sign
    let rest = line.strip_prefix("vectorfield")?;
    rest.starts_with(char::is_whitespace).then(|| ("vectorfield".to_string(), rest.trim().to_string()))
}

fn file_vars(names: Option<Vec<String>>, default: &[&str]) -> Result<crate::algebra::Vars> {
    match names {
        None => Ok(vars(default)),
        Some(ns) => {
            if ns.len() != default.len() || ns.iter().any(|s| s.is_empty()) {
                return Err(Error::Usage(format!("vars needs {} names", default.len())));
            }
            let refs: Vec<&str> = ns.iter().map(|s| s.as_str()).collect();
            Ok(vars(&refs))
        }
    }
}

/// Parses a polynomial in `x, y` given on the command line.
pub fn parse_plane(src: &str, ring: Ring) -> Result<MultiPoly> {
    parse_poly(src, &plane_vars(), ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{by_name, hilbert_h5};

    #[test]
    fn implicit_roundtrip() {
        let wf = WebFile::parse("# a 3-web\nring = rational\nF = p^3 - x*y\n").unwrap();
        let w = wf.web().unwrap();
        assert_eq!(w.k(), 3);
        let again = WebFile::parse(&wf.emit(Some("copy"))).unwrap();
        assert_eq!(again.web().unwrap().poly(), w.poly());
    }

    #[test]
    fn field_forms_and_renaming() {
        let a = WebFile::parse("vectorfield x^3 - x, y^3 - y").unwrap();
        let b = WebFile::parse("A = x^3 - x\nB = y^3 - y").unwrap();
        let c = WebFile::parse("vars = u, v\nvectorfield = u^3 - u, v^3 - v").unwrap();
        let f = by_name("F3").unwrap();
        for wf in [a, b, c] {
            let g = wf.foliation().unwrap();
            assert_eq!(g.a(), f.a());
            assert_eq!(g.b(), f.b());
        }
        let r = WebFile::parse("vars = s, t, q\nF = q^2 - s").unwrap();
        assert_eq!(r.web().unwrap().poly(), &parse_poly("p^2 - x", &affine_vars(), Ring::Rational).unwrap());
    }

    #[test]
    fn extension_ring_roundtrip() {
        let wf = WebFile::field(hilbert_h5());
        let text = wf.emit(None);
        assert!(text.contains("ring = quadext:5"));
        let back = WebFile::parse(&text).unwrap();
        assert_eq!(back.foliation().unwrap().a(), hilbert_h5().a());
    }

    #[test]
    fn errors() {
        assert!(WebFile::parse("").is_err());
        assert!(WebFile::parse("F = p - x\nA = x\nB = y").is_err());
        assert!(WebFile::parse("G = p").is_err());
        assert!(WebFile::parse("F = p\nF = p").is_err());
        assert!(WebFile::parse("vars = a, b\nF = p").is_err());
        assert!(WebFile::parse("ring = quadext:4\nF = p").is_err());
        assert!(WebFile::parse("vectorfield = x").is_err());
    }
}
