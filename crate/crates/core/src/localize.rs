//! Localization R_f presented as R[t]/(t·f − 1).
//!
//! The inversion variable is honest ring data, so poles are ordinary ring
//! elements (t^N), membership and syzygy computations work unchanged, and
//! eliminating t recovers contractions to R. Inverting f = 0 produces the
//! zero ring rather than an error; a single t inverts every factor of f.

use crate::error::Result;
use crate::monomial::MonomialOrder;
use crate::morphism::RingMorphism;
use crate::poly::Polynomial;
use crate::ring::PresentedRing;

#[derive(Debug, Clone)]
pub struct Localization {
    /// L = R[t]/(t·f − 1), possibly with further relations forced by f.
    pub ring: PresentedRing,
    pub base: PresentedRing,
    /// The inverted element, in the base ring's variables.
    pub f: Polynomial,
    /// Index of the inversion variable in `ring` (always the last one).
    pub tvar: usize,
    /// The inclusion R → L.
    pub include: RingMorphism,
}

/// A variable name not colliding with any existing one.
pub fn fresh_var(existing: &[String], stem: &str) -> String {
    if !existing.iter().any(|v| v == stem) {
        return stem.to_string();
    }
    for i in 1.. {
        let cand = format!("{stem}{i}");
        if !existing.iter().any(|v| v == &cand) {
            return cand;
        }
    }
    unreachable!()
}

pub fn localize(base: &PresentedRing, f: &Polynomial) -> Result<Localization> {
    let tname = fresh_var(base.vars(), "t");
    let tvar = base.nvars();
    let order = MonomialOrder::eliminating(tvar + 1, &[tvar]);
    let extended = base.with_extra_vars(&[tname], order)?;
    let t = extended.var(tvar);
    let f_ext = f.extended(tvar + 1);
    let rel = t
        .mul(&extended.field(), &f_ext)
        .sub(&extended.field(), &extended.one());
    let ring = extended.with_extra_relations(&[rel])?;
    let images = (0..base.nvars()).map(|i| ring.var(i)).collect();
    let include = RingMorphism::new(base.clone(), ring.clone(), images)?;
    Ok(Localization {
        ring,
        base: base.clone(),
        f: f.clone(),
        tvar,
        include,
    })
}

impl Localization {
    pub fn t(&self) -> Polynomial {
        self.ring.var(self.tvar)
    }

    pub fn from_base(&self, p: &Polynomial) -> Polynomial {
        self.include.apply(p)
    }

    /// Write an element of L as g / f^N with g free of the inversion
    /// variable; returns (g as an L-element, N).
    pub fn clear_poles(&self, p: &Polynomial) -> (Polynomial, u32) {
        let field = self.ring.field();
        let nf = self.ring.nf(p);
        let n = nf.degree_in(self.tvar).unwrap_or(0);
        let f_ext = self.f.extended(self.ring.nvars());
        let cleared = self.ring.nf(&nf.mul(&field, &f_ext.pow(&field, n)));
        debug_assert_eq!(cleared.degree_in(self.tvar).unwrap_or(0), 0);
        (cleared, n)
    }

    /// Like [`clear_poles`], but lands in the base ring's variables.
    pub fn to_base(&self, p: &Polynomial) -> (Polynomial, u32) {
        let (g, n) = self.clear_poles(p);
        let field = self.base.field();
        let mut images: Vec<Polynomial> = (0..self.base.nvars())
            .map(|i| self.base.var(i))
            .collect();
        images.push(self.base.zero()); // t is absent from g by construction
        (g.substitute(&field, &images, self.base.nvars()), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    #[test]
    fn inverts_a_variable() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let loc = localize(&r, &r.parse("x").unwrap()).unwrap();
        assert_eq!(loc.ring.describe(), "Q[x,t]/(x*t - 1)");
        let tx = loc.ring.parse("t*x").unwrap();
        assert!(loc.ring.elems_equal(&tx, &loc.ring.one()));
        let inv = loc.ring.inverse_of(&loc.ring.parse("x").unwrap()).unwrap();
        assert_eq!(inv, loc.t());
    }

    #[test]
    fn inverting_zero_collapses_the_ring() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let loc = localize(&r, &r.zero()).unwrap();
        assert!(loc.ring.is_zero_ring());
    }

    #[test]
    fn one_t_inverts_every_factor() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let loc = localize(&r, &r.parse("x*y").unwrap()).unwrap();
        let x = loc.ring.parse("x").unwrap();
        let y = loc.ring.parse("y").unwrap();
        let xinv = loc.ring.inverse_of(&x).unwrap();
        assert!(loc
            .ring
            .elems_equal(&xinv.mul(&FieldDesc::Rationals, &x), &loc.ring.one()));
        assert!(loc.ring.inverse_of(&y).is_some());
    }

    #[test]
    fn localization_kills_complementary_zero_divisors() {
        // R = Q[x,y]/(xy): inverting x forces y = 0
        let free = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let r = free
            .with_extra_relations(&[free.parse("x*y").unwrap()])
            .unwrap();
        let loc = localize(&r, &r.parse("x").unwrap()).unwrap();
        let y = loc.ring.parse("y").unwrap();
        assert!(loc.ring.is_elem_zero(&y));
    }

    #[test]
    fn pole_clearing() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let loc = localize(&r, &r.parse("x").unwrap()).unwrap();
        // p = t^2 x + t = 2/x; the normal form t^2 x → t already minimizes the pole
        let p = loc.ring.parse("t^2*x + t").unwrap();
        let (g, n) = loc.to_base(&p);
        assert_eq!(n, 1);
        assert_eq!(g, r.parse("2").unwrap());
    }
}
