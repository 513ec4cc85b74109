//! Seeded random generators for test inputs: polynomials, Laurent elements,
//! and small modules. Everything is deterministic given the seed.

use crate::laurent::{LaurentElement, LaurentRing};
use crate::module::PresentedModule;
use crate::poly::Polynomial;
use crate::ring::PresentedRing;
use crate::scalar::FieldDesc;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(field: &FieldDesc, rng: &mut ChaCha8Rng) -> crate::scalar::Scalar {
    match field {
        FieldDesc::Rationals => field.from_i64(rng.gen_range(-9..=9)),
        FieldDesc::Prime(p) => field.from_i64(rng.gen_range(0..*p as i64)),
    }
}

/// Random polynomial with total degree ≤ max_deg and at most max_terms terms
/// (possibly zero).
pub fn random_poly(
    ring: &PresentedRing,
    rng: &mut ChaCha8Rng,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let field = ring.field();
    let n = ring.nvars();
    let terms = rng.gen_range(0..=max_terms);
    let mut p = ring.zero();
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        let mut budget = max_deg;
        for e in exps.iter_mut() {
            let d = rng.gen_range(0..=budget);
            *e = d;
            budget -= d;
        }
        let c = random_scalar(&field, rng);
        let mono = Polynomial {
            nvars: n,
            terms: [(crate::monomial::Monomial(exps), field.one())]
                .into_iter()
                .collect(),
        };
        p = p.add(&field, &mono.mul_scalar(&field, &c));
    }
    ring.nf(&p)
}

/// Random nonzero polynomial (retries until nonzero in the ring).
pub fn random_nonzero_poly(
    ring: &PresentedRing,
    rng: &mut ChaCha8Rng,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    loop {
        let p = random_poly(ring, rng, max_deg, max_terms);
        if !ring.is_elem_zero(&p) {
            return p;
        }
    }
}

/// Random Laurent element: random body, pole ≤ max_pole, fixed precision.
pub fn random_laurent(
    l: &LaurentRing,
    rng: &mut ChaCha8Rng,
    max_deg: u32,
    max_pole: u32,
    prec: u32,
) -> LaurentElement {
    let body = random_poly(&l.base, rng, max_deg, 4);
    let pole = rng.gen_range(0..=max_pole);
    l.elem(&body, pole, prec)
}

/// Random direct sum R^r ⊕ ⊕_j R/(x^{k_j}) over a univariate ring:
/// free rank ≤ max_rank, at most max_torsion torsion blocks with exponents
/// in 1..=max_exp.
pub fn random_univariate_module(
    ring: &PresentedRing,
    rng: &mut ChaCha8Rng,
    max_rank: usize,
    max_torsion: usize,
    max_exp: u32,
) -> PresentedModule {
    assert_eq!(ring.nvars(), 1);
    let rank = rng.gen_range(0..=max_rank);
    let torsion = rng.gen_range(if rank == 0 { 1 } else { 0 }..=max_torsion);
    let mut m = PresentedModule::free(ring.clone(), rank);
    let field = ring.field();
    for _ in 0..torsion {
        let k = rng.gen_range(1..=max_exp);
        let xk = ring.var(0).pow(&field, k);
        let t = PresentedModule::cyclic(ring.clone(), &[xk]).unwrap();
        m = m.direct_sum(&t).unwrap();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_given_seed() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let a = random_poly(&r, &mut rng_from_seed(7), 4, 5);
        let b = random_poly(&r, &mut rng_from_seed(7), 4, 5);
        assert_eq!(a, b);
        let c = random_poly(&r, &mut rng_from_seed(8), 4, 5);
        // overwhelmingly likely to differ
        assert_ne!(a, c);
    }

    #[test]
    fn degree_bound_is_respected() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y", "z"]);
        let mut rng = rng_from_seed(42);
        for _ in 0..50 {
            let p = random_poly(&r, &mut rng, 6, 6);
            if let Some(d) = p.total_degree() {
                assert!(d <= 6);
            }
        }
    }

    #[test]
    fn module_shapes() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            let m = random_univariate_module(&r, &mut rng, 3, 3, 5);
            assert!(m.gens <= 6);
            assert!(!m.is_zero_module() || m.gens == 0);
        }
    }
}
