//! Exactness checks for the local-global sequence along one divisor element:
//!
//!   0 → R → R_f ⊕ R̂ → R̂_f → 0
//!
//! where R̂ is the f-adic completion. Three checks, each at finite precision:
//! injectivity (the f-power torsion of R vanishes), exactness in the middle
//! (pairs agreeing in R̂_f come from R, modulo truncation junk), and
//! surjectivity (sampled Laurent elements split into a polar part from R_f
//! and a regular part from R̂). Failures are recorded, not thrown.

use crate::error::Result;
use crate::groebner::{SpanBasis, VPoly};
use crate::laurent::LaurentRing;
use crate::module::{ModuleMap, PresentedModule};
use crate::poly::Polynomial;
use crate::ring::PresentedRing;
use crate::sample::{random_laurent, rng_from_seed};

#[derive(Debug, Clone)]
pub struct BlReport {
    pub ring: String,
    pub divisor: String,
    pub precision: u32,
    pub max_degree: u32,
    pub injective: bool,
    /// Generators of the f-power torsion (empty iff injective).
    pub torsion_generators: Vec<String>,
    pub middle_exact: bool,
    pub middle_counterexamples: Vec<String>,
    /// Pole orders checked in the middle step.
    pub poles_checked: u32,
    pub samples: usize,
    pub surjectivity_failures: Vec<String>,
    pub exact: bool,
}

impl BlReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("ring: {}", self.ring),
            format!("divisor: {}", self.divisor),
            format!("precision: {}", self.precision),
            format!("max degree: {}", self.max_degree),
            format!("injective: {}", self.injective),
        ];
        for t in &self.torsion_generators {
            out.push(format!("  torsion generator: {t}"));
        }
        out.push(format!(
            "middle exact: {} (poles 1..{})",
            self.middle_exact, self.poles_checked
        ));
        for c in &self.middle_counterexamples {
            out.push(format!("  counterexample: {c}"));
        }
        out.push(format!(
            "surjective on {} samples: {}",
            self.samples,
            self.surjectivity_failures.is_empty()
        ));
        for c in &self.surjectivity_failures {
            out.push(format!("  unsplit element: {c}"));
        }
        out.push(format!("exact: {}", self.exact));
        out
    }
}

/// The f-power torsion (0 : f^∞), computed by stabilizing kernels of
/// multiplication by f^k.
pub fn f_power_torsion(ring: &PresentedRing, f: &Polynomial, cap: u32) -> Result<Vec<Polynomial>> {
    let free = PresentedModule::free(ring.clone(), 1);
    let field = ring.field();
    let mut prev: Option<(PresentedModule, Vec<VPoly>)> = None;
    let mut k = 1u32;
    loop {
        let fk = VPoly::from_poly(1, 0, &f.pow(&field, k));
        let map = ModuleMap::new(free.clone(), free.clone(), vec![fk])?;
        let (_, incl) = map.kernel()?;
        let gens: Vec<VPoly> = incl.cols.clone();
        if let Some((_, pgens)) = &prev {
            // stable if spans agree
            let span_new = SpanBasis::new(
                &field,
                ring.order(),
                ring.nvars(),
                1,
                &gens,
                ring.relations(),
            );
            let span_old = SpanBasis::new(
                &field,
                ring.order(),
                ring.nvars(),
                1,
                pgens,
                ring.relations(),
            );
            let stable = pgens.iter().all(|g| span_new.contains(g))
                && gens.iter().all(|g| span_old.contains(g));
            if stable || k >= cap {
                return Ok(gens.iter().map(|v| ring.nf(&v.component(0))).collect());
            }
        }
        prev = Some((free.clone(), gens));
        k = (k * 2).min(cap.max(1));
        if k == 0 {
            k = 1;
        }
    }
}

pub fn check_bl_sequence(
    base: &PresentedRing,
    f: &Polynomial,
    prec: u32,
    max_deg: u32,
    samples: usize,
    seed: u64,
) -> Result<BlReport> {
    let field = base.field();
    let laurent = LaurentRing::new(base, f)?;

    // (i) injectivity: f-power torsion of R must vanish
    let torsion = f_power_torsion(base, f, prec.max(2))?;
    let torsion_generators: Vec<String> = torsion
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| base.display_poly(p))
        .collect();
    let injective = torsion_generators.is_empty();

    // (ii) middle exactness: for each pole order k, the solutions of
    // a ≡ f^k·b (mod f^prec) in R² must coincide with the span of
    // (f^k, 1) together with the truncation relations (f^prec, 0),
    // (0, f^(prec−k)).
    let mut middle_counterexamples = Vec::new();
    let poles_checked = max_deg.min(prec.saturating_sub(1)).max(1);
    for k in 1..=poles_checked {
        let fk = f.pow(&field, k);
        let fprec = f.pow(&field, prec);
        let frest = f.pow(&field, prec - k);
        let free2 = PresentedModule::free(base.clone(), 2);
        let target = PresentedModule::cyclic(base.clone(), &[fprec.clone()])?;
        let cols = vec![
            VPoly::from_poly(1, 0, &base.one()),
            VPoly::from_poly(1, 0, &fk.neg(&field)),
        ];
        let map = ModuleMap::new(free2.clone(), target, cols)?;
        let (_, incl) = map.kernel()?;
        let expected = vec![
            VPoly::from_components(&[fk.clone(), base.one()]),
            VPoly::from_components(&[fprec.clone(), base.zero()]),
            VPoly::from_components(&[base.zero(), frest.clone()]),
        ];
        let span_expected = SpanBasis::new(
            &field,
            base.order(),
            base.nvars(),
            2,
            &expected,
            base.relations(),
        );
        let span_kernel = SpanBasis::new(
            &field,
            base.order(),
            base.nvars(),
            2,
            &incl.cols,
            base.relations(),
        );
        for g in &incl.cols {
            if !span_expected.contains(g) {
                middle_counterexamples.push(format!(
                    "pole {k}: ({}, {}) agrees in the completion but is not (f^{k},1)·R",
                    base.display_poly(&g.component(0)),
                    base.display_poly(&g.component(1)),
                ));
            }
        }
        for e in &expected {
            if !span_kernel.contains(e) {
                middle_counterexamples.push(format!(
                    "pole {k}: expected solution ({}, {}) missing from the kernel",
                    base.display_poly(&e.component(0)),
                    base.display_poly(&e.component(1)),
                ));
            }
        }
    }
    let middle_exact = middle_counterexamples.is_empty();

    // (iii) surjectivity: split sampled Laurent elements into polar + regular
    let mut surjectivity_failures = Vec::new();
    let mut rng = rng_from_seed(seed);
    let max_pole = poles_checked;
    for _ in 0..samples {
        let ell = random_laurent(&laurent, &mut rng, max_deg, max_pole, prec);
        // body = low + f^pole·high: low/f^pole ∈ R_f, high ∈ R̂
        let low = laurent.truncate(&ell.body, ell.pole);
        let diff = ell.body.sub(&field, &low);
        let span = SpanBasis::new(
            &field,
            base.order(),
            base.nvars(),
            1,
            &[VPoly::from_poly(1, 0, &f.pow(&field, ell.pole))],
            base.relations(),
        );
        let Some(lift) = span.lift(&VPoly::from_poly(1, 0, &diff)) else {
            surjectivity_failures.push(format!(
                "cannot split {} (pole {})",
                base.display_poly(&ell.body),
                ell.pole
            ));
            continue;
        };
        let high = base.nf(&lift[0]);
        // recombine and compare at precision
        let polar = laurent.elem(&low, ell.pole, ell.prec);
        let regular = laurent.from_poly(&high, ell.prec.saturating_sub(ell.pole));
        let sum = laurent.add(&polar, &regular);
        let (eq, digits) = laurent.eq_at_precision(&sum, &ell);
        if !eq || (digits == 0 && !ell.body.is_zero()) {
            surjectivity_failures.push(format!(
                "split of {} / f^{} fails at {} digits",
                base.display_poly(&ell.body),
                ell.pole,
                digits
            ));
        }
    }

    let exact = injective && middle_exact && surjectivity_failures.is_empty();
    Ok(BlReport {
        ring: base.describe(),
        divisor: base.display_poly(f),
        precision: prec,
        max_degree: max_deg,
        injective,
        torsion_generators,
        middle_exact,
        middle_counterexamples,
        poles_checked,
        samples,
        surjectivity_failures,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    #[test]
    fn exact_for_a_line() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let f = r.parse("x").unwrap();
        let rep = check_bl_sequence(&r, &f, 8, 5, 10, 0).unwrap();
        assert!(rep.injective);
        assert!(rep.middle_exact, "{:?}", rep.middle_counterexamples);
        assert!(rep.surjectivity_failures.is_empty(), "{:?}", rep.surjectivity_failures);
        assert!(rep.exact);
        assert!(rep.lines().iter().any(|l| l == "exact: true"));
    }

    #[test]
    fn exact_for_a_plane_along_one_axis() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let f = r.parse("x").unwrap();
        let rep = check_bl_sequence(&r, &f, 6, 4, 6, 1).unwrap();
        assert!(rep.exact);
    }

    #[test]
    fn torsion_breaks_injectivity() {
        // R = Q[x,y]/(xy): multiplication by x kills y
        let free = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let r = free
            .with_extra_relations(&[free.parse("x*y").unwrap()])
            .unwrap();
        let f = r.parse("x").unwrap();
        let torsion = f_power_torsion(&r, &f, 8).unwrap();
        assert!(torsion.iter().any(|p| !p.is_zero()));
        let rep = check_bl_sequence(&r, &f, 6, 4, 4, 0).unwrap();
        assert!(!rep.injective);
        assert!(!rep.exact);
        assert!(rep
            .torsion_generators
            .iter()
            .any(|s| s == "y"));
    }

    #[test]
    fn deeper_precision_still_exact() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let f = r.parse("x").unwrap();
        let rep = check_bl_sequence(&r, &f, 16, 6, 8, 3).unwrap();
        assert!(rep.exact);
        assert_eq!(rep.poles_checked, 6);
    }
}
