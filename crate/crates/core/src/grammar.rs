//! Text and JSON forms of elements.
//!
//! ```text
//! element := term (('+' | '-') term)*
//! term    := coeff? ('*'? factor) ('*' factor)*
//! factor  := 'e[' root ']' ('^(' int ')')?  |  'f[' root ']' ('^(' int ')')?
//!          | 'H(' index ',' int ')'  |  'mu(' weight ';' int ')'  |  '(' element ')'
//! ```
//!
//! Roots are simple-root coefficient lists (`e[1 1]` is `e_{α1+α2}`; missing
//! trailing coefficients are zero), `H(i,n)` is `(h_i choose n)` with `i`
//! counted from 1, and weights are given by their pairings with the simple
//! coroots. Products are straightened on parsing.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hpart::HPart;
use crate::idempotents::mu_lambda;
use crate::rootdata::Weight;
use crate::straighten::{Algebra, PBWElement};

/// How torus parts are written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TorusForm {
    /// Sums of products `H(i,m)`.
    #[default]
    Binomial,
    /// Sums of idempotents `mu(λ; N)` at the algebra's level.
    Idempotent,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alg: &'a Algebra,
}

/// Parses and straightens an element.
pub fn parse_element(alg: &Algebra, text: &str) -> Result<PBWElement> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, alg };
    let x = p.element()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn nonneg(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let v = self.int()?;
        u32::try_from(v).map_err(|_| Error::Parse { pos: start, msg: format!("{what} out of range") })
    }

    fn int_list(&mut self, close: u8) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        while self.peek() != Some(close) {
            if self.peek().is_none() {
                return Err(self.err(&format!("expected `{}`", close as char)));
            }
            out.push(self.int()?);
            self.eat(b',');
        }
        Ok(out)
    }

    fn element(&mut self) -> Result<PBWElement> {
        let alg = self.alg;
        let fp = alg.fp();
        let mut acc = alg.zero();
        let mut sign = 1u32;
        if self.eat(b'-') {
            sign = fp.p() - 1;
        }
        loop {
            let t = self.term()?;
            acc = alg.lin(&acc, &t, sign);
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = fp.p() - 1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PBWElement> {
        let alg = self.alg;
        let mut coeff = 1u32;
        let mut factors = Vec::new();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = alg.fp().from_i64(self.int()?);
            if self.eat(b'*') || matches!(self.peek(), Some(b'e' | b'f' | b'H' | b'm' | b'(')) {
                factors.push(self.factor()?);
            }
        } else {
            factors.push(self.factor()?);
        }
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        let x = alg.product(&factors)?;
        Ok(alg.scale(&x, coeff))
    }

    fn factor(&mut self) -> Result<PBWElement> {
        let alg = self.alg;
        let rs = alg.root_system();
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.element()?;
                self.expect(b')')?;
                Ok(x)
            }
            Some(c @ (b'e' | b'f')) => {
                self.pos += 1;
                self.expect(b'[')?;
                let coords = self.int_list(b']')?;
                self.expect(b']')?;
                let n = if self.eat(b'^') {
                    self.expect(b'(')?;
                    let n = self.nonneg("exponent")?;
                    self.expect(b')')?;
                    n
                } else {
                    1
                };
                if coords.len() > rs.rank() {
                    return Err(Error::Parse { pos: start, msg: format!("root needs at most {} coordinates", rs.rank()) });
                }
                // omitted trailing coordinates are zero
                let mut coords: Vec<i32> = coords.iter().map(|&x| x as i32).collect();
                coords.resize(rs.rank(), 0);
                let r = rs.index_of(&coords).filter(|&r| rs.is_positive(r)).ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: format!("{coords:?} is not a positive root of {}", rs.label()),
                })?;
                let r = if c == b'f' { rs.negate(r) } else { r };
                Ok(alg.root_power(r, n))
            }
            Some(b'H') => {
                self.pos += 1;
                self.expect(b'(')?;
                let i = self.nonneg("coroot index")? as usize;
                self.expect(b',')?;
                let n = self.nonneg("binomial degree")?;
                self.expect(b')')?;
                if i == 0 || i > rs.rank() {
                    return Err(Error::Parse { pos: start, msg: format!("coroot index {i} out of 1..={}", rs.rank()) });
                }
                let mut d = vec![0i64; rs.rank()];
                d[i - 1] = 1;
                Ok(alg.torus(alg.hspace().binomial(&d, 0, n as u64)?))
            }
            Some(b'm') => {
                for &c in b"mu(" {
                    if self.src.get(self.pos) != Some(&c) {
                        return Err(self.err("expected `mu(`"));
                    }
                    self.pos += 1;
                }
                let w = self.int_list(b';')?;
                self.expect(b';')?;
                let n = self.nonneg("idempotent level")?;
                self.expect(b')')?;
                if w.len() != rs.rank() {
                    return Err(Error::Parse { pos: start, msg: format!("weight needs {} coordinates", rs.rank()) });
                }
                mu_lambda(alg, &Weight(w), n)
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

fn root_text(alg: &Algebra, k: usize) -> String {
    let r = alg.root_system().root(k);
    r.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn torus_terms(alg: &Algebra, h: &HPart, form: TorusForm) -> Vec<(u32, Vec<String>)> {
    let hs = alg.hspace();
    match form {
        TorusForm::Binomial => hs
            .to_binomial_basis(h)
            .into_iter()
            .map(|(m, c)| {
                let fs = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(i, d)| format!("H({},{})", i + 1, d))
                    .collect();
                (c, fs)
            })
            .collect(),
        TorusForm::Idempotent => {
            // write the table at its smallest period
            let n = (1..hs.level()).find(|&n| hs.is_periodic(h, n)).unwrap_or(hs.level());
            let bound = (alg.p() as i64).pow(n);
            (0..hs.size())
                .filter(|&i| h.values[i] != 0)
                .map(|i| (i, hs.coords(i)))
                .filter(|(_, c)| c.iter().all(|&x| x < bound))
                .map(|(i, c)| {
                    let w = c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
                    (h.values[i], vec![format!("mu({w}; {n})")])
                })
                .collect()
        }
    }
}

/// Writes an element in the text grammar, terms in key order.
pub fn serialize_element(alg: &Algebra, x: &PBWElement, form: TorusForm) -> String {
    let mut parts = Vec::new();
    for (f, h, e) in x.terms() {
        let mut outer = Vec::new();
        for (k, &a) in f.iter().enumerate().filter(|(_, &a)| a > 0) {
            outer.push(format!("f[{}]^({a})", root_text(alg, k)));
        }
        let left = outer.len();
        for (k, &b) in e.iter().enumerate().filter(|(_, &b)| b > 0) {
            outer.push(format!("e[{}]^({b})", root_text(alg, k)));
        }
        for (c, hf) in torus_terms(alg, h, form) {
            let mut fs: Vec<String> = outer[..left].to_vec();
            fs.extend(hf);
            fs.extend_from_slice(&outer[left..]);
            let body = fs.join("*");
            parts.push(match (c, body.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => body,
                _ => format!("{c}*{body}"),
            });
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// One normal-form term in JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub f: Vec<u32>,
    pub e: Vec<u32>,
    /// Binomial-basis coefficients keyed by the degree list.
    pub h: BTreeMap<String, u32>,
}

/// An element in JSON form, with terms sorted by `(f, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementJson {
    pub system: String,
    pub p: u32,
    pub level: u32,
    pub positive_roots: Vec<Vec<i32>>,
    pub terms: Vec<TermJson>,
    pub text: String,
}

pub fn element_json(alg: &Algebra, x: &PBWElement) -> ElementJson {
    let hs = alg.hspace();
    let terms = x
        .terms()
        .map(|(f, h, e)| TermJson {
            f: f.clone(),
            e: e.clone(),
            h: hs
                .to_binomial_basis(h)
                .into_iter()
                .map(|(m, c)| (m.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "), c))
                .collect(),
        })
        .collect();
    let rs = alg.root_system();
    ElementJson {
        system: rs.label(),
        p: alg.p(),
        level: alg.level(),
        positive_roots: (0..alg.nu()).map(|k| rs.root(k).0.clone()).collect(),
        terms,
        text: serialize_element(alg, x, TorusForm::Binomial),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_and_zero() {
        let alg = Algebra::new("A2", 3, 2).unwrap();
        assert_eq!(parse_element(&alg, "1").unwrap(), alg.one());
        assert_eq!(parse_element(&alg, "0").unwrap(), alg.zero());
        assert_eq!(serialize_element(&alg, &alg.one(), TorusForm::Binomial), "1");
        assert_eq!(serialize_element(&alg, &alg.zero(), TorusForm::Binomial), "0");
    }

    #[test]
    fn a1_product_text() {
        let alg = Algebra::new("A1", 3, 2).unwrap();
        let x = parse_element(&alg, "e[1]^(1)*f[1]^(1)").unwrap();
        assert_eq!(serialize_element(&alg, &x, TorusForm::Binomial), "H(1,1) + f[1]^(1)*e[1]^(1)");
    }

    #[test]
    fn a2_two_factor_product() {
        let alg = Algebra::new("A2", 5, 2).unwrap();
        let x = parse_element(&alg, "e[1]^(3)*e[0 1]^(1)").unwrap();
        let rs = alg.root_system();
        let a = alg.root_power(rs.index_of(&[1, 0]).unwrap(), 3);
        let b = alg.root_power(rs.index_of(&[0, 1]).unwrap(), 1);
        assert_eq!(x, alg.multiply(&a, &b).unwrap());
        assert!(parse_element(&alg, "e[1 0]^(3)*e[0 1]").is_ok());
    }

    #[test]
    fn idempotent_factor() {
        let alg = Algebra::new("A2", 2, 2).unwrap();
        let x = parse_element(&alg, "mu(1 0; 2)").unwrap();
        assert_eq!(x, mu_lambda(&alg, &Weight(vec![1, 0]), 2).unwrap());
        let s = serialize_element(&alg, &x, TorusForm::Idempotent);
        assert_eq!(s, "mu(1 0; 2)");
        assert_eq!(parse_element(&alg, &s).unwrap(), x);
    }

    #[test]
    fn round_trip_random_products() {
        for (label, p, level) in [("A2", 2, 3), ("B2", 3, 2), ("G2", 5, 2)] {
            let alg = Algebra::new(label, p, level).unwrap();
            for text in ["e[1 1]^(2)*f[1 0]^(3)*e[0 1]", "f[1 1]^(2)*H(1,2)*e[1 0]^(2) + 2*H(2,1)", "(e[1 0] - f[0 1])*(e[1 0] + 3*f[1 1]^(2))"] {
                let x = parse_element(&alg, text).unwrap();
                for form in [TorusForm::Binomial, TorusForm::Idempotent] {
                    let s = serialize_element(&alg, &x, form);
                    assert_eq!(parse_element(&alg, &s).unwrap(), x, "{label} {text} -> {s}");
                }
            }
        }
    }

    #[test]
    fn errors_carry_positions() {
        let alg = Algebra::new("A2", 2, 2).unwrap();
        assert!(matches!(parse_element(&alg, "e[1 2]"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_element(&alg, "e[1]^(x)"), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_element(&alg, "H(3,1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_element(&alg, "e[1 0] +"), Err(Error::Parse { .. })));
    }
}
