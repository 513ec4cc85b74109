//! Ring morphisms between presented rings, given by images of the source
//! variables. Construction verifies well-definedness: every source relation
//! must map to zero in the target.

use crate::error::{CoreError, Result};
use crate::poly::Polynomial;
use crate::ring::PresentedRing;

#[derive(Debug, Clone)]
pub struct RingMorphism {
    pub source: PresentedRing,
    pub target: PresentedRing,
    /// images[i] = image of the i-th source variable, as a target element.
    pub images: Vec<Polynomial>,
}

impl RingMorphism {
    pub fn new(
        source: PresentedRing,
        target: PresentedRing,
        images: Vec<Polynomial>,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(CoreError::RingMismatch(format!(
                "morphism between different coefficient fields {} and {}",
                source.field(),
                target.field()
            )));
        }
        if images.len() != source.nvars() {
            return Err(CoreError::Invalid(format!(
                "morphism needs {} variable images, got {}",
                source.nvars(),
                images.len()
            )));
        }
        for im in &images {
            if im.nvars != target.nvars() {
                return Err(CoreError::Invalid(
                    "variable image lives in the wrong ring".into(),
                ));
            }
        }
        let m = RingMorphism { source, target, images };
        for rel in m.source.relations() {
            let image = m.apply_raw(rel);
            if !m.target.is_elem_zero(&image) {
                return Err(CoreError::Invalid(format!(
                    "morphism not well defined: relation {} maps to {}",
                    m.source.display_poly(rel),
                    m.target.display_poly(&m.target.nf(&image))
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(ring: &PresentedRing) -> Self {
        let images = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        RingMorphism {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    /// Substitution without normal form; prefer [`apply`].
    fn apply_raw(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.source.field(), &self.images, self.target.nvars())
    }

    /// Image of an element, as a canonical target representative.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        self.target.nf(&self.apply_raw(p))
    }

    /// other ∘ self (apply self first).
    pub fn then(&self, other: &RingMorphism) -> Result<RingMorphism> {
        if self.target != other.source {
            return Err(CoreError::RingMismatch(
                "composition target/source mismatch".into(),
            ));
        }
        let images = self.images.iter().map(|im| other.apply(im)).collect();
        RingMorphism::new(self.source.clone(), other.target.clone(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    #[test]
    fn quotient_projection() {
        let f = FieldDesc::Rationals;
        let r = PresentedRing::quotient(f, &["x", "y"], vec![]).unwrap();
        let rel = r.parse("x*y").unwrap();
        let q = r.with_extra_relations(&[rel]).unwrap();
        let proj = RingMorphism::new(r.clone(), q.clone(), vec![q.var(0), q.var(1)]).unwrap();
        let img = proj.apply(&r.parse("x*y + x").unwrap());
        assert_eq!(img, q.parse("x").unwrap());
    }

    #[test]
    fn ill_defined_is_rejected() {
        let f = FieldDesc::Rationals;
        let src = PresentedRing::quotient(f, &["x"], vec![]).unwrap();
        let src = src.with_extra_relations(&[src.parse("x^2").unwrap()]).unwrap();
        let tgt = PresentedRing::polynomial(f, &["x"]);
        // x ↦ x does not kill x^2 in the free ring
        let err = RingMorphism::new(src.clone(), tgt.clone(), vec![tgt.var(0)]);
        assert!(err.is_err());
        // x ↦ 0 is fine
        let ok = RingMorphism::new(src, tgt.clone(), vec![tgt.zero()]);
        assert!(ok.is_ok());
    }

    #[test]
    fn composition() {
        let f = FieldDesc::Rationals;
        let r = PresentedRing::polynomial(f, &["x"]);
        let q2 = r.with_extra_relations(&[r.parse("x^2").unwrap()]).unwrap();
        let q1 = r.with_extra_relations(&[r.parse("x").unwrap()]).unwrap();
        let a = RingMorphism::new(r.clone(), q2.clone(), vec![q2.var(0)]).unwrap();
        let b = RingMorphism::new(q2, q1.clone(), vec![q1.var(0)]).unwrap();
        let c = a.then(&b).unwrap();
        assert_eq!(c.apply(&r.parse("x + 1").unwrap()), q1.one());
    }
}
