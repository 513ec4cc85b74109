//! A small hand-rolled infix parser for polynomials: `3*x^2*y - 1/2`,
//! `(x+1)*(x-1)`, and (for localized/completed coordinates) monomials with
//! negative exponents such as `x^-2*(1+y)`.

use crate::error::{CoreError, Result};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::scalar::FieldDesc;
use std::collections::BTreeMap;

/// Laurent-flavoured term list: exponents may be negative.
#[derive(Debug, Clone, PartialEq)]
struct LPoly {
    terms: BTreeMap<Vec<i64>, crate::scalar::Scalar>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
    field: FieldDesc,
}

impl LPoly {
    fn zero() -> Self {
        LPoly { terms: BTreeMap::new() }
    }

    fn constant(field: &FieldDesc, c: crate::scalar::Scalar, nvars: usize) -> Self {
        let mut p = Self::zero();
        if !field.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    fn add_term(&mut self, field: &FieldDesc, e: Vec<i64>, c: crate::scalar::Scalar) {
        match self.terms.remove(&e) {
            Some(old) => {
                let s = field.add(&old, &c);
                if !field.is_zero(&s) {
                    self.terms.insert(e, s);
                }
            }
            None => {
                if !field.is_zero(&c) {
                    self.terms.insert(e, c);
                }
            }
        }
    }

    fn add(&self, field: &FieldDesc, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(field, e.clone(), c.clone());
        }
        out
    }

    fn neg(&self, field: &FieldDesc) -> LPoly {
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.neg(c)))
                .collect(),
        }
    }

    fn mul(&self, field: &FieldDesc, other: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(c1, c2));
            }
        }
        out
    }

    fn pow(&self, field: &FieldDesc, n: u32, nvars: usize) -> LPoly {
        let mut acc = LPoly::constant(field, field.one(), nvars);
        for _ in 0..n {
            acc = acc.mul(field, self);
        }
        acc
    }

    fn as_constant(&self, nvars: usize) -> Option<crate::scalar::Scalar> {
        if self.terms.is_empty() {
            return None; // zero constant handled by caller
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) && e.len() == nvars {
                return Some(c.clone());
            }
        }
        None
    }
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> CoreError {
        CoreError::Invalid(format!("parse error at byte {}: {}", self.pos, msg))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expr(&mut self) -> Result<LPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.term()?.neg(&self.field)
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&self.field, &t);
                }
                Some(b'-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&self.field, &t.neg(&self.field));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&self.field, &f);
                }
                Some(b'/') => {
                    self.bump();
                    let f = self.factor()?;
                    let c = f
                        .as_constant(self.vars.len())
                        .ok_or_else(|| self.err("division only by nonzero constants"))?;
                    let inv = self
                        .field
                        .inv(&c)
                        .ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.mul(
                        &self.field,
                        &LPoly::constant(&self.field, inv, self.vars.len()),
                    );
                }
                // implicit multiplication before '(' or a variable name
                Some(c) if c == b'(' || (c as char).is_ascii_alphabetic() => {
                    let f = self.factor()?;
                    acc = acc.mul(&self.field, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LPoly> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let mut sign: i64 = 1;
            if self.peek() == Some(b'-') {
                self.bump();
                sign = -1;
            }
            let n = self.integer()? as i64 * sign;
            if n >= 0 {
                return Ok(base.pow(&self.field, n as u32, self.vars.len()));
            }
            // negative exponent: only on a bare variable
            if base.terms.len() == 1 {
                let (e, c) = base.terms.iter().next().unwrap();
                if c == &self.field.one() && e.iter().map(|&x| x.abs()).sum::<i64>() == 1 {
                    let scaled: Vec<i64> = e.iter().map(|&x| x * (-n)).collect();
                    let mut out = LPoly::zero();
                    let negged: Vec<i64> = scaled.iter().map(|&x| -x).collect();
                    out.terms.insert(negged, self.field.one());
                    return Ok(out);
                }
            }
            return Err(self.err("negative exponents are only allowed on single variables"));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<LPoly> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'-') => {
                self.bump();
                Ok(self.factor()?.neg(&self.field))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(LPoly::constant(
                    &self.field,
                    self.field.from_i64(n as i64),
                    self.vars.len(),
                ))
            }
            Some(c) if (c as char).is_ascii_alphabetic() => {
                let name = self.ident();
                let idx = self
                    .vars
                    .iter()
                    .position(|v| v == &name)
                    .ok_or_else(|| self.err(&format!("unknown variable '{name}'")))?;
                let mut e = vec![0i64; self.vars.len()];
                e[idx] = 1;
                let mut p = LPoly::zero();
                p.terms.insert(e, self.field.one());
                Ok(p)
            }
            _ => Err(self.err("expected a number, variable, or '('")),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && ((self.src[self.pos] as char).is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).to_string()
    }
}

fn parse_raw(src: &str, vars: &[String], field: FieldDesc) -> Result<LPoly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, vars, field };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parse an ordinary polynomial (negative exponents rejected).
pub fn parse_poly(src: &str, vars: &[String], field: FieldDesc) -> Result<Polynomial> {
    let lp = parse_raw(src, vars, field)?;
    let mut out = Polynomial::zero(vars.len());
    for (e, c) in lp.terms {
        if e.iter().any(|&x| x < 0) {
            return Err(CoreError::Invalid(format!(
                "negative exponent in '{src}' where a polynomial was expected"
            )));
        }
        out.add_term(&field, Monomial(e.iter().map(|&x| x as u32).collect()), c);
    }
    Ok(out)
}

/// Parse a Laurent-style expression: returns (body, pole) with
/// body a polynomial and pole per-variable exponents such that the value is
/// body / prod_i var_i^pole[i], with pole minimal.
pub fn parse_laurent(
    src: &str,
    vars: &[String],
    field: FieldDesc,
) -> Result<(Polynomial, Vec<u32>)> {
    let lp = parse_raw(src, vars, field)?;
    let n = vars.len();
    let mut pole = vec![0i64; n];
    for e in lp.terms.keys() {
        for i in 0..n {
            pole[i] = pole[i].max(-e[i]);
        }
    }
    let mut out = Polynomial::zero(n);
    for (e, c) in lp.terms {
        let m: Vec<u32> = (0..n).map(|i| (e[i] + pole[i]) as u32).collect();
        out.add_term(&field, Monomial(m), c);
    }
    Ok((out, pole.iter().map(|&x| x as u32).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trips_display() {
        let f = FieldDesc::Rationals;
        let vs = vars(&["x", "y"]);
        for src in ["3*x^2*y - 1/2", "x^2 - 1", "-x + 2*y - 7", "0", "5/3"] {
            let p = parse_poly(src, &vs, f).unwrap();
            let shown = p.display(&f, &vs);
            let q = parse_poly(&shown, &vs, f).unwrap();
            assert_eq!(p, q, "{src} → {shown}");
        }
    }

    #[test]
    fn parses_products_and_parens() {
        let f = FieldDesc::Rationals;
        let vs = vars(&["x"]);
        let p = parse_poly("(x+1)*(x-1)", &vs, f).unwrap();
        let q = parse_poly("x^2-1", &vs, f).unwrap();
        assert_eq!(p, q);
        // implicit multiplication
        let r = parse_poly("2(x+1)x", &vs, f).unwrap();
        let s = parse_poly("2*x^2+2*x", &vs, f).unwrap();
        assert_eq!(r, s);
    }

    #[test]
    fn laurent_poles() {
        let f = FieldDesc::Rationals;
        let vs = vars(&["x", "y"]);
        let (body, pole) = parse_laurent("x^-2*(1+y) + x^-1", &vs, f).unwrap();
        assert_eq!(pole, vec![2, 0]);
        let want = parse_poly("1 + y + x", &vs, f).unwrap();
        assert_eq!(body, want);
    }

    #[test]
    fn rejects_garbage() {
        let f = FieldDesc::Rationals;
        let vs = vars(&["x"]);
        assert!(parse_poly("x +", &vs, f).is_err());
        assert!(parse_poly("z", &vs, f).is_err());
        assert!(parse_poly("x^-1", &vs, f).is_err());
        assert!(parse_poly("1/(x+1)", &vs, f).is_err());
        let _ = Polynomial::zero(1);
    }
}
