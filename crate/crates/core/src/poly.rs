//! Sparse multivariate polynomials with exact field coefficients.
//!
//! A polynomial knows its variable count but not the ambient ring; normal
//! forms modulo ring relations live on [`crate::ring::PresentedRing`].

use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::{FieldDesc, Scalar};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    pub nvars: usize,
    /// Invariant: no zero coefficients stored.
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, field: &FieldDesc, c: Scalar) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !field.is_zero(&c) {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize, field: &FieldDesc) -> Self {
        Self::constant(nvars, field, field.one())
    }

    pub fn var(nvars: usize, i: usize, field: &FieldDesc) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Scalar, field: &FieldDesc) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_part(&self, nvars: usize, field: &FieldDesc) -> Scalar {
        self.terms
            .get(&Monomial::one(nvars))
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn add_term(&mut self, field: &FieldDesc, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.remove(&m) {
            Some(old) => {
                let s = field.add(&old, &c);
                if !field.is_zero(&s) {
                    self.terms.insert(m, s);
                }
            }
            None => {
                if !field.is_zero(&c) {
                    self.terms.insert(m, c);
                }
            }
        }
    }

    pub fn add(&self, field: &FieldDesc, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(field, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, field: &FieldDesc) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, field: &FieldDesc, other: &Polynomial) -> Polynomial {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &FieldDesc, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(field, m1.mul(m2), field.mul(c1, c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, field: &FieldDesc, c: &Scalar) -> Polynomial {
        if field.is_zero(c) {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), field.mul(k, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, field: &FieldDesc, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars, field);
        for _ in 0..n {
            acc = acc.mul(field, self);
        }
        acc
    }

    /// Leading (monomial, coefficient) with respect to `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp_mono(a, b))
    }

    /// Substitute `images[i]` for variable i; images live over `nvars_out` variables.
    pub fn substitute(
        &self,
        field: &FieldDesc,
        images: &[Polynomial],
        nvars_out: usize,
    ) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let mut out = Polynomial::zero(nvars_out);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(nvars_out, field, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(field, &images[i].pow(field, e));
                }
            }
            out = out.add(field, &term);
        }
        out
    }

    /// Reinterpret over a larger variable list (new variables appended).
    pub fn extended(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extended(nvars), c.clone()))
                .collect(),
        }
    }

    /// True if every term is divisible by var^k.
    pub fn divisible_by_var_power(&self, var: usize, k: u32) -> bool {
        self.terms.keys().all(|m| m.0[var] >= k)
    }

    /// Terms with exponent exactly k in `var`, with that power stripped.
    pub fn coefficient_of_var_power(&self, var: usize, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] == k)
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] = 0;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Divide every term by var^k; caller guarantees divisibility.
    pub fn div_var_power(&self, var: usize, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] -= k;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Render with the given variable names, e.g. `3*x^2*y - 1/2`.
    pub fn display(&self, field: &FieldDesc, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // stable, human-friendly ordering: degrevlex descending
        let order = MonomialOrder::DegRevLex;
        let mut monos: Vec<_> = self.terms.iter().collect();
        monos.sort_by(|(a, _), (b, _)| order.cmp_mono(b, a));
        let mut out = String::new();
        for (i, (m, c)) in monos.iter().enumerate() {
            let cs = field.display(c);
            let (sign, mag) = if let Some(stripped) = cs.strip_prefix('-') {
                ("-", stripped.to_string())
            } else {
                ("+", cs)
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || m.is_one() {
                factors.push(mag);
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(vars[v].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", vars[v], e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let f = FieldDesc::Rationals;
        let x = Polynomial::var(2, 0, &f);
        let y = Polynomial::var(2, 1, &f);
        let p = x.mul(&f, &x).mul(&f, &y).mul_scalar(&f, &f.from_i64(3));
        let q = p.sub(&f, &Polynomial::constant(2, &f, f.from_ratio(1, 2)));
        let vars = vec!["x".to_string(), "y".to_string()];
        assert_eq!(q.display(&f, &vars), "3*x^2*y - 1/2");
        let r = q.add(&f, &Polynomial::constant(2, &f, f.from_ratio(1, 2)));
        assert_eq!(r, p);
    }

    #[test]
    fn substitution() {
        let f = FieldDesc::Rationals;
        // p = x^2 + y, substitute x -> u+1, y -> u  (1 variable out)
        let x = Polynomial::var(2, 0, &f);
        let y = Polynomial::var(2, 1, &f);
        let p = x.mul(&f, &x).add(&f, &y);
        let u = Polynomial::var(1, 0, &f);
        let u1 = u.add(&f, &Polynomial::one(1, &f));
        let got = p.substitute(&f, &[u1.clone(), u.clone()], 1);
        let want = u1.mul(&f, &u1).add(&f, &u);
        assert_eq!(got, want);
    }

    #[test]
    fn var_power_division() {
        let f = FieldDesc::Rationals;
        let x = Polynomial::var(1, 0, &f);
        let p = x.pow(&f, 3).add(&f, &x.pow(&f, 2));
        assert!(p.divisible_by_var_power(0, 2));
        assert!(!p.divisible_by_var_power(0, 3));
        let q = p.div_var_power(0, 2);
        assert_eq!(q, x.add(&f, &Polynomial::one(1, &f)));
    }
}
