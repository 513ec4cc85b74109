//! Gröbner machinery for submodules of free modules R^k over a polynomial
//! ring, with quotient-ring relations folded in as extra generators.
//!
//! Module terms are ordered position-over-term: component first (lower index
//! wins), then the ambient monomial order. Appending "tag" components behind
//! the ambient ones therefore gives a component-elimination order for free;
//! [`SpanBasis`] exploits that to produce membership certificates, lifts and
//! syzygies from a single basis computation.

use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::scalar::{FieldDesc, Scalar};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Element of a free module R^ncomps: finitely many (component, monomial) terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPoly {
    pub ncomps: usize,
    pub nvars: usize,
    pub terms: BTreeMap<(usize, Monomial), Scalar>,
}

impl VPoly {
    pub fn zero(ncomps: usize, nvars: usize) -> Self {
        VPoly { ncomps, nvars, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_poly(ncomps: usize, comp: usize, p: &Polynomial) -> Self {
        let mut v = VPoly::zero(ncomps, p.nvars);
        for (m, c) in &p.terms {
            v.terms.insert((comp, m.clone()), c.clone());
        }
        v
    }

    pub fn unit(ncomps: usize, nvars: usize, comp: usize, field: &FieldDesc) -> Self {
        let mut v = VPoly::zero(ncomps, nvars);
        v.terms.insert((comp, Monomial::one(nvars)), field.one());
        v
    }

    /// Column vector from per-component polynomials.
    pub fn from_components(polys: &[Polynomial]) -> Self {
        let nvars = polys.first().map(|p| p.nvars).unwrap_or(0);
        let mut v = VPoly::zero(polys.len(), nvars);
        for (i, p) in polys.iter().enumerate() {
            debug_assert_eq!(p.nvars, nvars);
            for (m, c) in &p.terms {
                v.terms.insert((i, m.clone()), c.clone());
            }
        }
        v
    }

    pub fn component(&self, comp: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for ((j, m), c) in &self.terms {
            if *j == comp {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn components(&self) -> Vec<Polynomial> {
        (0..self.ncomps).map(|i| self.component(i)).collect()
    }

    pub fn add_term(&mut self, field: &FieldDesc, key: (usize, Monomial), c: Scalar) {
        match self.terms.remove(&key) {
            Some(old) => {
                let s = field.add(&old, &c);
                if !field.is_zero(&s) {
                    self.terms.insert(key, s);
                }
            }
            None => {
                if !field.is_zero(&c) {
                    self.terms.insert(key, c);
                }
            }
        }
    }

    pub fn add(&self, field: &FieldDesc, other: &VPoly) -> VPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(field, k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, field: &FieldDesc, other: &VPoly) -> VPoly {
        self.add(field, &other.neg(field))
    }

    pub fn neg(&self, field: &FieldDesc) -> VPoly {
        VPoly {
            ncomps: self.ncomps,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn mul_scalar(&self, field: &FieldDesc, c: &Scalar) -> VPoly {
        if field.is_zero(c) {
            return VPoly::zero(self.ncomps, self.nvars);
        }
        VPoly {
            ncomps: self.ncomps,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), field.mul(v, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> VPoly {
        VPoly {
            ncomps: self.ncomps,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|((j, k), c)| ((*j, k.mul(m)), c.clone()))
                .collect(),
        }
    }

    pub fn mul_poly(&self, field: &FieldDesc, p: &Polynomial) -> VPoly {
        let mut out = VPoly::zero(self.ncomps, self.nvars);
        for (pm, pc) in &p.terms {
            for ((j, m), c) in &self.terms {
                out.add_term(field, (*j, m.mul(pm)), field.mul(c, pc));
            }
        }
        out
    }

    /// Widen the component space, shifting components by `offset`.
    pub fn widened(&self, ncomps: usize, offset: usize) -> VPoly {
        VPoly {
            ncomps,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|((j, m), c)| ((j + offset, m.clone()), c.clone()))
                .collect(),
        }
    }

    /// Restrict to components [lo, hi), re-indexing from 0.
    pub fn restricted(&self, lo: usize, hi: usize) -> VPoly {
        VPoly {
            ncomps: hi - lo,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|((j, _), _)| *j >= lo && *j < hi)
                .map(|((j, m), c)| ((j - lo, m.clone()), c.clone()))
                .collect(),
        }
    }

    /// Map every coefficient polynomial through `f` (e.g. a ring morphism).
    pub fn map_components(&self, f: impl Fn(&Polynomial) -> Polynomial) -> VPoly {
        VPoly::from_components(
            &self
                .components()
                .iter()
                .map(f)
                .collect::<Vec<_>>(),
        )
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(&(usize, Monomial), &Scalar)> {
        self.leading_with(TermPrecedence::PositionFirst, order)
    }

    fn leading_with(
        &self,
        prec: TermPrecedence,
        order: &MonomialOrder,
    ) -> Option<(&(usize, Monomial), &Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| cmp_terms(prec, order, a, b))
    }

    pub fn max_var_degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|(_, m)| m.0[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|(_, m)| m.0[var] > 0)
    }
}

/// How module terms are ranked: by component first (the default, which makes
/// lower components dominate and underpins the span/lift/syzygy bases) or by
/// monomial first (required for variable elimination, where every term
/// containing an eliminated variable must outrank every term free of them,
/// regardless of component).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermPrecedence {
    PositionFirst,
    TermFirst,
}

fn cmp_terms(
    prec: TermPrecedence,
    order: &MonomialOrder,
    a: &(usize, Monomial),
    b: &(usize, Monomial),
) -> Ordering {
    match prec {
        TermPrecedence::PositionFirst => b.0.cmp(&a.0).then_with(|| order.cmp_mono(&a.1, &b.1)),
        TermPrecedence::TermFirst => order.cmp_mono(&a.1, &b.1).then_with(|| b.0.cmp(&a.0)),
    }
}

/// Full normal form: reduce leading and tail terms by `basis`.
pub fn normal_form(
    v: &VPoly,
    basis: &[VPoly],
    order: &MonomialOrder,
    field: &FieldDesc,
) -> VPoly {
    normal_form_with(TermPrecedence::PositionFirst, v, basis, order, field)
}

fn normal_form_with(
    prec: TermPrecedence,
    v: &VPoly,
    basis: &[VPoly],
    order: &MonomialOrder,
    field: &FieldDesc,
) -> VPoly {
    let mut work = v.clone();
    let mut rem = VPoly::zero(v.ncomps, v.nvars);
    'outer: while let Some(((comp, mono), coeff)) = work
        .leading_with(prec, order)
        .map(|(k, c)| (k.clone(), c.clone()))
    {
        for g in basis {
            if let Some(((gc, gm), glc)) = g.leading_with(prec, order) {
                if *gc == comp && gm.divides(&mono) {
                    let factor = field.div(&coeff, glc);
                    let shift = gm.div(&mono);
                    work = work.sub(field, &g.mul_monomial(&shift).mul_scalar(field, &factor));
                    continue 'outer;
                }
            }
        }
        // irreducible leading term: move it to the remainder
        work.terms.remove(&(comp.clone(), mono.clone()));
        rem.terms.insert((comp, mono), coeff);
    }
    rem
}

fn s_vector(
    prec: TermPrecedence,
    a: &VPoly,
    b: &VPoly,
    order: &MonomialOrder,
    field: &FieldDesc,
) -> Option<VPoly> {
    let ((ca, ma), la) = a.leading_with(prec, order)?;
    let ((cb, mb), lb) = b.leading_with(prec, order)?;
    if ca != cb {
        return None;
    }
    let lcm = ma.lcm(mb);
    let fa = ma.div(&lcm);
    let fb = mb.div(&lcm);
    let left = a.mul_monomial(&fa).mul_scalar(field, &field.inv(la).unwrap());
    let right = b.mul_monomial(&fb).mul_scalar(field, &field.inv(lb).unwrap());
    Some(left.sub(field, &right))
}

/// Buchberger with reduced output: minimal, tail-reduced, monic, sorted.
pub fn buchberger(gens: &[VPoly], order: &MonomialOrder, field: &FieldDesc) -> Vec<VPoly> {
    buchberger_with(TermPrecedence::PositionFirst, gens, order, field)
}

pub fn buchberger_with(
    prec: TermPrecedence,
    gens: &[VPoly],
    order: &MonomialOrder,
    field: &FieldDesc,
) -> Vec<VPoly> {
    let mut basis: Vec<VPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.clone());
        }
    }
    let ideal_case = basis.iter().all(|v| v.ncomps == 1);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // normal selection: smallest lcm degree first
        let mut best = 0;
        let mut best_deg = u64::MAX;
        for (idx, (i, j)) in pairs.iter().enumerate() {
            let (li, _) = basis[*i].leading_with(prec, order).unwrap();
            let (lj, _) = basis[*j].leading_with(prec, order).unwrap();
            if li.0 != lj.0 {
                // different components never produce an S-vector
                if best_deg == u64::MAX {
                    best = idx;
                }
                continue;
            }
            let d = li.1.lcm(&lj.1).total_degree();
            if d < best_deg {
                best_deg = d;
                best = idx;
            }
        }
        let (i, j) = pairs.swap_remove(best);
        let (li, _) = basis[i].leading_with(prec, order).unwrap();
        let (lj, _) = basis[j].leading_with(prec, order).unwrap();
        if li.0 != lj.0 {
            continue;
        }
        // product criterion (valid for the ideal case only)
        if ideal_case && li.1.gcd_is_one(&lj.1) {
            continue;
        }
        let s = match s_vector(prec, &basis[i], &basis[j], order, field) {
            Some(s) => s,
            None => continue,
        };
        let r = normal_form_with(prec, &s, &basis, order, field);
        if !r.is_zero() {
            let new_idx = basis.len();
            basis.push(r);
            for t in 0..new_idx {
                pairs.push((t, new_idx));
            }
        }
    }
    reduce_basis(prec, basis, order, field)
}

fn reduce_basis(
    prec: TermPrecedence,
    mut basis: Vec<VPoly>,
    order: &MonomialOrder,
    field: &FieldDesc,
) -> Vec<VPoly> {
    // minimalize: drop elements whose lead is divisible by another lead
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (ki, _) = basis[i].leading_with(prec, order).unwrap();
        let ki = ki.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (kj, _) = basis[j].leading_with(prec, order).unwrap();
            if kj.0 == ki.0 && kj.1.divides(&ki.1) && !(ki.1 == kj.1 && j > i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<VPoly> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(v, k)| if k { Some(v) } else { None })
        .collect();
    // tail-reduce each against the others, make monic
    for i in 0..minimal.len() {
        let others: Vec<VPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let r = normal_form_with(prec, &minimal[i], &others, order, field);
        let lc = r.leading_with(prec, order).map(|(_, c)| c.clone());
        minimal[i] = match lc {
            Some(c) => r.mul_scalar(field, &field.inv(&c).unwrap()),
            None => r,
        };
    }
    minimal.retain(|v| !v.is_zero());
    minimal.sort_by(|a, b| {
        let (ka, _) = a.leading_with(prec, order).unwrap();
        let (kb, _) = b.leading_with(prec, order).unwrap();
        cmp_terms(prec, order, ka, kb)
    });
    minimal
}

/// Gröbner span of generators g_1..g_s ⊆ R^k over R = P/(rels), with
/// membership tests, lifts through the generators, and syzygies, all from one
/// augmented basis in k+s components.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    pub k: usize,
    pub s: usize,
    pub nvars: usize,
    order: MonomialOrder,
    field: FieldDesc,
    gb: Vec<VPoly>,
}

impl SpanBasis {
    pub fn new(
        field: &FieldDesc,
        order: &MonomialOrder,
        nvars: usize,
        k: usize,
        gens: &[VPoly],
        ring_rels: &[Polynomial],
    ) -> Self {
        let s = gens.len();
        let total = k + s;
        let mut aug: Vec<VPoly> = Vec::with_capacity(s + k * ring_rels.len());
        for (i, g) in gens.iter().enumerate() {
            debug_assert_eq!(g.ncomps, k);
            debug_assert_eq!(g.nvars, nvars);
            let mut w = g.widened(total, 0);
            w.add_term(field, (k + i, Monomial::one(nvars)), field.one());
            aug.push(w);
        }
        for h in ring_rels {
            for j in 0..k {
                aug.push(VPoly::from_poly(total, j, h));
            }
        }
        let gb = buchberger(&aug, order, field);
        SpanBasis { k, s, nvars, order: order.clone(), field: *field, gb }
    }

    /// Remainder of w in the ambient R^k (zero iff w lies in the span).
    pub fn remainder(&self, w: &VPoly) -> VPoly {
        debug_assert_eq!(w.ncomps, self.k);
        let wide = w.widened(self.k + self.s, 0);
        let r = normal_form(&wide, &self.gb, &self.order, &self.field);
        r.restricted(0, self.k)
    }

    pub fn contains(&self, w: &VPoly) -> bool {
        self.remainder(w).is_zero()
    }

    /// Coefficients a_1..a_s with w ≡ Σ a_i g_i modulo ring relations,
    /// if w lies in the span.
    pub fn lift(&self, w: &VPoly) -> Option<Vec<Polynomial>> {
        debug_assert_eq!(w.ncomps, self.k);
        let wide = w.widened(self.k + self.s, 0);
        let r = normal_form(&wide, &self.gb, &self.order, &self.field);
        if !r.restricted(0, self.k).is_zero() {
            return None;
        }
        let eps = r.restricted(self.k, self.k + self.s);
        Some(eps.neg(&self.field).components())
    }

    /// Generators of the syzygy module Syz(g_1..g_s) ⊆ R^s (coefficients of
    /// relations Σ a_i g_i ≡ 0 modulo ring relations).
    pub fn syzygies(&self) -> Vec<VPoly> {
        self.gb
            .iter()
            .filter(|v| v.restricted(0, self.k).is_zero())
            .map(|v| v.restricted(self.k, self.k + self.s))
            .collect()
    }
}

/// Reduced Gröbner basis of an ideal given by polynomial generators.
pub fn groebner_basis(
    gens: &[Polynomial],
    order: &MonomialOrder,
    field: &FieldDesc,
) -> Vec<Polynomial> {
    let nvars = gens.first().map(|p| p.nvars).unwrap_or(0);
    let vgens: Vec<VPoly> = gens.iter().map(|p| VPoly::from_poly(1, 0, p)).collect();
    buchberger(&vgens, order, field)
        .into_iter()
        .map(|v| v.component(0))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|p| {
            let _ = nvars;
            !p.is_zero()
        })
        .collect()
}

/// Normal form of a polynomial against an ideal Gröbner basis.
pub fn poly_normal_form(
    p: &Polynomial,
    gb: &[Polynomial],
    order: &MonomialOrder,
    field: &FieldDesc,
) -> Polynomial {
    let v = VPoly::from_poly(1, 0, p);
    let basis: Vec<VPoly> = gb.iter().map(|g| VPoly::from_poly(1, 0, g)).collect();
    normal_form(&v, &basis, order, field).component(0)
}

/// Generators of (span of gens) ∩ (submodule of vectors free of `tvars`),
/// computed with a variable-elimination order. Returned vectors do not
/// involve the eliminated variables.
pub fn contract_submodule(
    gens: &[VPoly],
    ring_rels: &[Polynomial],
    tvars: &[usize],
    field: &FieldDesc,
) -> Vec<VPoly> {
    if gens.is_empty() {
        return Vec::new();
    }
    let k = gens[0].ncomps;
    let nvars = gens[0].nvars;
    let order = MonomialOrder::eliminating(nvars, tvars);
    let mut all: Vec<VPoly> = gens.to_vec();
    for h in ring_rels {
        for j in 0..k {
            all.push(VPoly::from_poly(k, j, h));
        }
    }
    // term-first precedence: a component-first ranking would let a t-free
    // lead hide a t-laden tail, and the t-free basis elements would then
    // miss part of the contraction
    let gb = buchberger_with(TermPrecedence::TermFirst, &all, &order, field);
    gb.into_iter()
        .filter(|v| tvars.iter().all(|&t| !v.uses_var(t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn q() -> FieldDesc {
        FieldDesc::Rationals
    }

    fn vs(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Univariate oracle: the reduced basis of an ideal in Q[x] is the monic gcd.
    fn poly_gcd(a: &Polynomial, b: &Polynomial, field: &FieldDesc) -> Polynomial {
        // Euclid on dense coefficient lists
        fn degree(p: &Polynomial) -> i64 {
            p.terms.keys().map(|m| m.0[0] as i64).max().unwrap_or(-1)
        }
        fn divmod_rem(a: &Polynomial, b: &Polynomial, field: &FieldDesc) -> Polynomial {
            let mut r = a.clone();
            let db = degree(b);
            let lb = b
                .terms
                .iter()
                .max_by_key(|(m, _)| m.0[0])
                .map(|(_, c)| c.clone())
                .unwrap();
            while !r.is_zero() && degree(&r) >= db {
                let (m, c) = r.terms.iter().max_by_key(|(m, _)| m.0[0]).unwrap();
                let shift = Monomial(vec![(m.0[0] as i64 - db) as u32]);
                let f = field.div(c, &lb);
                let sub = b.mul_monomial(&shift).mul_scalar(field, &f);
                r = r.sub(field, &sub);
            }
            r
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = divmod_rem(&x, &y, field);
            x = y;
            y = r;
        }
        // make monic
        let lc = x.terms.iter().max_by_key(|(m, _)| m.0[0]).map(|(_, c)| c.clone());
        match lc {
            Some(c) => x.mul_scalar(field, &field.inv(&c).unwrap()),
            None => x,
        }
    }

    #[test]
    fn univariate_ideal_is_gcd() {
        let v = vs(&["x"]);
        let a = parse_poly("x^2-1", &v, q()).unwrap();
        let b = parse_poly("x^3-1", &v, q()).unwrap();
        let gb = groebner_basis(&[a.clone(), b.clone()], &MonomialOrder::Lex, &q());
        let want = poly_gcd(&a, &b, &q());
        assert_eq!(want, parse_poly("x-1", &v, q()).unwrap());
        assert_eq!(gb, vec![want]);
    }

    #[test]
    fn empty_input_empty_basis() {
        let gb = groebner_basis(&[], &MonomialOrder::Lex, &q());
        assert!(gb.is_empty());
    }

    #[test]
    fn twisted_cubic_lex() {
        // relations y - x^2, z - x^3 with z > y > x: order vars as (z, y, x)
        let v = vs(&["z", "y", "x"]);
        let g1 = parse_poly("y - x^2", &v, q()).unwrap();
        let g2 = parse_poly("z - x^3", &v, q()).unwrap();
        let gb = groebner_basis(&[g1.clone(), g2.clone()], &MonomialOrder::Lex, &q());
        assert!(gb.contains(&parse_poly("z - x^3", &v, q()).unwrap()));
        assert!(gb.contains(&parse_poly("y - x^2", &v, q()).unwrap()));
    }

    #[test]
    fn normal_form_idempotent_and_member() {
        let v = vs(&["x"]);
        let gb = groebner_basis(
            &[parse_poly("x-1", &v, q()).unwrap()],
            &MonomialOrder::Lex,
            &q(),
        );
        let p = parse_poly("x^2", &v, q()).unwrap();
        let nf = poly_normal_form(&p, &gb, &MonomialOrder::Lex, &q());
        assert_eq!(nf, parse_poly("1", &v, q()).unwrap());
        let nf2 = poly_normal_form(&nf, &gb, &MonomialOrder::Lex, &q());
        assert_eq!(nf, nf2);
        for g in &gb {
            assert!(poly_normal_form(g, &gb, &MonomialOrder::Lex, &q()).is_zero());
        }
    }

    #[test]
    fn span_lift_reconstructs() {
        // g1 = (x, 0), g2 = (0, y): w = (x*y, y^2) = y*g1 + y*g2? -> (xy, y^2): y*g1=(xy,0), y*g2=(0,y^2) ✓
        let v = vs(&["x", "y"]);
        let x = parse_poly("x", &v, q()).unwrap();
        let y = parse_poly("y", &v, q()).unwrap();
        let zero = Polynomial::zero(2);
        let g1 = VPoly::from_components(&[x.clone(), zero.clone()]);
        let g2 = VPoly::from_components(&[zero.clone(), y.clone()]);
        let span = SpanBasis::new(&q(), &MonomialOrder::DegRevLex, 2, 2, &[g1.clone(), g2.clone()], &[]);
        let w = VPoly::from_components(&[
            parse_poly("x*y", &v, q()).unwrap(),
            parse_poly("y^2", &v, q()).unwrap(),
        ]);
        assert!(span.contains(&w));
        let lift = span.lift(&w).unwrap();
        // verify the certificate
        let rebuilt = g1
            .mul_poly(&q(), &lift[0])
            .add(&q(), &g2.mul_poly(&q(), &lift[1]));
        assert_eq!(rebuilt, w);
        let bad = VPoly::from_components(&[parse_poly("1", &v, q()).unwrap(), zero]);
        assert!(!span.contains(&bad));
    }

    #[test]
    fn span_respects_quotient_relations() {
        // over R = Q[x]/(x^2): 1 ∈ span(x) is false, but x^3 ≡ 0 is in span of nothing
        let v = vs(&["x"]);
        let x = parse_poly("x", &v, q()).unwrap();
        let x2 = parse_poly("x^2", &v, q()).unwrap();
        let span = SpanBasis::new(
            &q(),
            &MonomialOrder::DegRevLex,
            1,
            1,
            &[VPoly::from_poly(1, 0, &x)],
            &[x2.clone()],
        );
        let one = VPoly::from_poly(1, 0, &parse_poly("1", &v, q()).unwrap());
        assert!(!span.contains(&one));
        let x3 = VPoly::from_poly(1, 0, &parse_poly("x^3", &v, q()).unwrap());
        assert!(span.contains(&x3));
    }

    #[test]
    fn syzygies_of_trivial_kernel_are_fuzz_only() {
        // single generator x over Q[x]: syzygies are multiples of nothing (no ring rels)
        let v = vs(&["x"]);
        let x = parse_poly("x", &v, q()).unwrap();
        let span = SpanBasis::new(
            &q(),
            &MonomialOrder::DegRevLex,
            1,
            1,
            &[VPoly::from_poly(1, 0, &x)],
            &[],
        );
        assert!(span.syzygies().is_empty());
    }

    #[test]
    fn syzygy_certificates_multiply_to_zero() {
        // generators (x) and (x^2) of an ideal: syzygy (x, -1)-ish must exist
        let v = vs(&["x"]);
        let g1 = VPoly::from_poly(1, 0, &parse_poly("x", &v, q()).unwrap());
        let g2 = VPoly::from_poly(1, 0, &parse_poly("x^2", &v, q()).unwrap());
        let span = SpanBasis::new(&q(), &MonomialOrder::DegRevLex, 1, 1, &[g1.clone(), g2.clone()], &[]);
        let syz = span.syzygies();
        assert!(!syz.is_empty());
        for s in &syz {
            let a = s.component(0);
            let b = s.component(1);
            let total = g1.mul_poly(&q(), &a).add(&q(), &g2.mul_poly(&q(), &b));
            assert!(total.is_zero());
        }
    }

    #[test]
    fn contraction_eliminates_rabinowitsch_variable() {
        // over Q[x][t]/(t*x - 1): the contraction of span{(1,1)·...} example:
        // span of {(t, 0?)}: simpler: contract span{(x*t - 1)~0}: use ideal case:
        // span over 2 comps: {(a, b): a = t*b over L} ∩ R^2 = {(a,b): x*a = ... }
        // take gens of {(t,1)} plus relation: contraction = {(a,b): a*?}:
        // elements (a,b) = p(t,x)*(t,1) mod (tx-1): with a,b ∈ Q[x]:
        // b = p, a = t*p: t*p ∈ Q[x] iff x | p: so contraction = span{(1, x)}.
        let v = vs(&["x", "t"]);
        let rel = parse_poly("t*x-1", &v, q()).unwrap();
        let gen = VPoly::from_components(&[
            parse_poly("t", &v, q()).unwrap(),
            parse_poly("1", &v, q()).unwrap(),
        ]);
        let contracted = contract_submodule(&[gen], &[rel], &[1], &q());
        assert_eq!(contracted.len(), 1);
        let got = &contracted[0];
        let want = VPoly::from_components(&[
            parse_poly("1", &v, q()).unwrap(),
            parse_poly("x", &v, q()).unwrap(),
        ]);
        assert_eq!(got, &want);
    }
}
