//! Laurent elements along a single divisor component: finite-precision models
//! of elements of R̂_f, the f-adic completion with f inverted.
//!
//! An element is body/f^pole with the body known modulo f^prec. Arithmetic
//! tracks how many f-digits of the result are still trustworthy; inversion
//! uses a unit check modulo f followed by Newton iteration g ← g(2 − bg).

use crate::error::{CoreError, Result};
use crate::groebner::{SpanBasis, VPoly};
use crate::poly::Polynomial;
use crate::ring::PresentedRing;

#[derive(Debug, Clone)]
pub struct LaurentRing {
    pub base: PresentedRing,
    pub f: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElement {
    /// Value = body / f^pole.
    pub pole: u32,
    /// Representative in the base ring, meaningful modulo f^prec.
    pub body: Polynomial,
    /// Number of known f-digits of the body. 0 means "nothing known".
    pub prec: u32,
}

impl LaurentRing {
    pub fn new(base: &PresentedRing, f: &Polynomial) -> Result<Self> {
        if f.nvars != base.nvars() {
            return Err(CoreError::Invalid(
                "divisor element lives in the wrong ring".into(),
            ));
        }
        if base.is_elem_zero(f) {
            return Err(CoreError::Invalid(
                "cannot complete along a zero divisor element".into(),
            ));
        }
        Ok(LaurentRing {
            base: base.clone(),
            f: f.clone(),
        })
    }

    fn truncation_ring(&self, prec: u32) -> PresentedRing {
        let field = self.base.field();
        self.base
            .with_extra_relations(&[self.f.pow(&field, prec)])
            .expect("truncation ring construction cannot fail")
    }

    /// Reduce a base polynomial modulo f^prec.
    pub fn truncate(&self, p: &Polynomial, prec: u32) -> Polynomial {
        if prec == 0 {
            return self.base.zero();
        }
        self.truncation_ring(prec).nf(p)
    }

    pub fn elem(&self, body: &Polynomial, pole: u32, prec: u32) -> LaurentElement {
        LaurentElement {
            pole,
            body: self.truncate(body, prec),
            prec,
        }
    }

    pub fn from_poly(&self, p: &Polynomial, prec: u32) -> LaurentElement {
        self.elem(p, 0, prec)
    }

    pub fn zero(&self, prec: u32) -> LaurentElement {
        LaurentElement {
            pole: 0,
            body: self.base.zero(),
            prec,
        }
    }

    pub fn one(&self, prec: u32) -> LaurentElement {
        self.from_poly(&self.base.one(), prec)
    }

    /// Known absolute precision: value is pinned down modulo f^(prec − pole).
    pub fn abs_prec(&self, a: &LaurentElement) -> i64 {
        a.prec as i64 - a.pole as i64
    }

    /// Rewrite with a larger pole (same value, body gains f-digits).
    fn with_pole(&self, a: &LaurentElement, pole: u32) -> LaurentElement {
        assert!(pole >= a.pole);
        let shift = pole - a.pole;
        if shift == 0 {
            return a.clone();
        }
        let field = self.base.field();
        let body = a.body.mul(&field, &self.f.pow(&field, shift));
        LaurentElement {
            pole,
            body: self.truncate(&body, a.prec + shift),
            prec: a.prec + shift,
        }
    }

    pub fn add(&self, a: &LaurentElement, b: &LaurentElement) -> LaurentElement {
        let pole = a.pole.max(b.pole);
        let aa = self.with_pole(a, pole);
        let bb = self.with_pole(b, pole);
        let prec = aa.prec.min(bb.prec);
        let field = self.base.field();
        let body = aa.body.add(&field, &bb.body);
        self.elem(&body, pole, prec)
    }

    pub fn neg(&self, a: &LaurentElement) -> LaurentElement {
        LaurentElement {
            pole: a.pole,
            body: a.body.neg(&self.base.field()),
            prec: a.prec,
        }
    }

    pub fn sub(&self, a: &LaurentElement, b: &LaurentElement) -> LaurentElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &LaurentElement, b: &LaurentElement) -> LaurentElement {
        let field = self.base.field();
        let prec = a.prec.min(b.prec);
        let body = a.body.mul(&field, &b.body);
        self.elem(&body, a.pole + b.pole, prec)
    }

    /// Exact division of the body by f in the base ring, if possible.
    fn body_div_f(&self, body: &Polynomial) -> Option<Polynomial> {
        if body.is_zero() {
            return Some(body.clone());
        }
        let span = SpanBasis::new(
            &self.base.field(),
            self.base.order(),
            self.base.nvars(),
            1,
            &[VPoly::from_poly(1, 0, &self.f)],
            self.base.relations(),
        );
        span.lift(&VPoly::from_poly(1, 0, body))
            .map(|v| self.base.nf(&v[0]))
    }

    /// Strip common powers of f between body and pole (minimal pole form).
    pub fn normalize(&self, a: &LaurentElement) -> LaurentElement {
        let mut out = a.clone();
        while out.pole > 0 && out.prec > 0 {
            match self.body_div_f(&out.body) {
                Some(q) => {
                    out = LaurentElement {
                        pole: out.pole - 1,
                        body: q,
                        prec: out.prec - 1,
                    };
                }
                None => break,
            }
            if out.body.is_zero() {
                // zero body stays zero; avoid spinning the pole down one digit
                // at a time past what precision supports
                out.pole = 0;
                break;
            }
        }
        out
    }

    /// Do a and b agree at the jointly known precision? Returns the number of
    /// absolute f-digits the comparison actually used (0 = vacuous).
    pub fn eq_at_precision(&self, a: &LaurentElement, b: &LaurentElement) -> (bool, u32) {
        let d = self.sub(a, b);
        let digits = self.abs_prec(&d).max(0) as u32;
        (d.body.is_zero() || self.truncate(&d.body, d.prec).is_zero(), digits)
    }

    /// Multiplicative inverse. Fails with PrecisionExhausted when no digits
    /// are known or the value is zero at this precision, and with Invalid
    /// when the value is a genuine non-unit.
    pub fn inverse(&self, a: &LaurentElement) -> Result<LaurentElement> {
        if a.prec == 0 {
            return Err(CoreError::PrecisionExhausted(
                "inversion needs at least one known digit".into(),
            ));
        }
        // strip all f factors from the body to expose the unit part
        let mut strip = 0u32;
        let mut unit_body = a.body.clone();
        while strip < a.prec {
            if unit_body.is_zero() {
                return Err(CoreError::PrecisionExhausted(
                    "cannot invert an element that is zero at this precision".into(),
                ));
            }
            match self.body_div_f(&unit_body) {
                Some(q) => {
                    strip += 1;
                    unit_body = q;
                }
                None => break,
            }
        }
        let n = a.prec - strip;
        if n == 0 {
            return Err(CoreError::PrecisionExhausted(
                "no digits remain after factoring out the divisor".into(),
            ));
        }
        // unit check modulo f
        let level1 = self.truncation_ring(1);
        let u0 = level1.inverse_of(&level1.nf(&unit_body)).ok_or_else(|| {
            CoreError::Invalid("element is not a unit in the completed ring".into())
        })?;
        // Newton: g ← g(2 − bg), digits double each round
        let work = self.truncation_ring(n);
        let field = self.base.field();
        let two = work.constant(field.from_i64(2));
        let mut g = work.nf(&u0);
        let mut known = 1u32;
        while known < n {
            let bg = work.nf(&unit_body.mul(&field, &g));
            g = work.nf(&g.mul(&field, &two.sub(&field, &bg)));
            known *= 2;
        }
        debug_assert!(work.elems_equal(&unit_body.mul(&field, &g), &work.one()));
        // value = f^(strip − pole) · unit: inverse = f^(pole − strip) · g
        if a.pole >= strip {
            Ok(LaurentElement {
                pole: 0,
                body: self.truncate(
                    &g.mul(&field, &self.f.pow(&field, a.pole - strip)),
                    n + (a.pole - strip),
                ),
                prec: n + (a.pole - strip),
            })
        } else {
            Ok(LaurentElement {
                pole: strip - a.pole,
                body: g,
                prec: n,
            })
        }
    }

    pub fn display(&self, a: &LaurentElement) -> String {
        let body = self.base.display_poly(&a.body);
        let f = self.base.display_poly(&self.f);
        if a.pole == 0 {
            format!("{body} + O(({f})^{})", a.prec)
        } else {
            format!("({body})/({f})^{} + O(({f})^{})", a.pole, self.abs_prec(a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    fn setting() -> LaurentRing {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        LaurentRing::new(&r, &r.parse("x").unwrap()).unwrap()
    }

    #[test]
    fn geometric_series() {
        let l = setting();
        let a = l.from_poly(&l.base.parse("1 - x").unwrap(), 5);
        let inv = l.inverse(&a).unwrap();
        assert_eq!(inv.pole, 0);
        assert_eq!(inv.body, l.base.parse("1 + x + x^2 + x^3 + x^4").unwrap());
        assert_eq!(inv.prec, 5);
    }

    #[test]
    fn inverse_of_the_divisor_itself() {
        let l = setting();
        let a = l.from_poly(&l.base.parse("x").unwrap(), 5);
        let inv = l.inverse(&a).unwrap();
        assert_eq!(inv.pole, 1);
        assert_eq!(inv.body, l.base.one());
        // and back again
        let back = l.inverse(&inv).unwrap();
        let (eq, digits) = l.eq_at_precision(&back, &a);
        assert!(eq && digits > 0);
    }

    #[test]
    fn pole_alignment_in_sums() {
        let l = setting();
        // 1/x + 1 = (1 + x)/x
        let a = l.elem(&l.base.one(), 1, 5);
        let b = l.one(5);
        let s = l.add(&a, &b);
        assert_eq!(s.pole, 1);
        assert_eq!(s.body, l.base.parse("1 + x").unwrap());
    }

    #[test]
    fn multiplication_cancels_poles_after_normalization() {
        let l = setting();
        let a = l.elem(&l.base.one(), 1, 5); // 1/x
        let b = l.from_poly(&l.base.parse("x").unwrap(), 5); // x
        let p = l.mul(&a, &b);
        let p = l.normalize(&p);
        assert_eq!(p.pole, 0);
        assert_eq!(p.body, l.base.one());
        let (eq, _) = l.eq_at_precision(&p, &l.one(4));
        assert!(eq);
    }

    #[test]
    fn zero_body_inversion_exhausts_precision() {
        let l = setting();
        let z = l.zero(5);
        match l.inverse(&z) {
            Err(CoreError::PrecisionExhausted(_)) => {}
            other => panic!("expected precision exhaustion, got {other:?}"),
        }
        let nothing = LaurentElement {
            pole: 0,
            body: l.base.one(),
            prec: 0,
        };
        assert!(matches!(
            l.inverse(&nothing),
            Err(CoreError::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn genuine_non_unit_is_rejected() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let l = LaurentRing::new(&r, &r.parse("x").unwrap()).unwrap();
        // y + x is not a unit in Q[y][[x]][1/x]: its reduction y mod x is not a unit in Q[y]
        let a = l.from_poly(&r.parse("y + x").unwrap(), 4);
        assert!(matches!(l.inverse(&a), Err(CoreError::Invalid(_))));
        // but 1 + y·x is a unit
        let b = l.from_poly(&r.parse("1 + y*x").unwrap(), 4);
        let binv = l.inverse(&b).unwrap();
        let prod = l.mul(&b, &binv);
        let (eq, digits) = l.eq_at_precision(&prod, &l.one(4));
        assert!(eq && digits == 4);
    }

    #[test]
    fn normalization_strips_common_factors() {
        let l = setting();
        // (x^2 + x^3)/x^2 = 1 + x
        let a = l.elem(&l.base.parse("x^2 + x^3").unwrap(), 2, 6);
        let n = l.normalize(&a);
        assert_eq!(n.pole, 0);
        assert_eq!(n.body, l.base.parse("1 + x").unwrap());
        assert_eq!(n.prec, 4);
    }
}
