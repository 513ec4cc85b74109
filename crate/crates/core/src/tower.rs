//! Completion towers: the finite truncations R/J_l, 1 ≤ l ≤ depth, of a ring
//! along an ideal, with the transition surjections between consecutive
//! levels. Level 0 is the zero ring by convention and is not stored.
//!
//! Two truncation schemes are used. `IdealPowers` takes J_l = I^l (all
//! degree-l products of the ideal generators); `ComponentPowers` takes
//! J_l = (f_1^l, …, f_m^l), the scheme natural for coordinate-wise
//! truncation along a normal-crossings divisor.

use crate::error::{CoreError, Result};
use crate::morphism::RingMorphism;
use crate::poly::Polynomial;
use crate::ring::PresentedRing;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerScheme {
    /// J_l = I^l.
    IdealPowers,
    /// J_l = (f_1^l, …, f_m^l).
    ComponentPowers,
}

#[derive(Debug, Clone)]
pub struct CompletionTower {
    pub base: PresentedRing,
    pub ideal: Vec<Polynomial>,
    pub scheme: PowerScheme,
    pub depth: u32,
    /// levels[i] = R/J_{i+1} (level l lives at index l − 1).
    pub levels: Vec<PresentedRing>,
    /// transitions[i]: level i+2 → level i+1.
    pub transitions: Vec<RingMorphism>,
    /// projections[i]: base → level i+1.
    pub projections: Vec<RingMorphism>,
}

fn power_products(gens: &[Polynomial], l: u32, ring: &PresentedRing) -> Vec<Polynomial> {
    // all products f_{i1}···f_{il} up to reordering
    fn rec(
        gens: &[Polynomial],
        ring: &PresentedRing,
        start: usize,
        remaining: u32,
        acc: &Polynomial,
        out: &mut Vec<Polynomial>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..gens.len() {
            let next = acc.mul(&ring.field(), &gens[i]);
            rec(gens, ring, i, remaining - 1, &next, out);
        }
    }
    let mut out = Vec::new();
    rec(gens, ring, 0, l, &ring.one(), &mut out);
    out
}

fn level_ideal(
    base: &PresentedRing,
    ideal: &[Polynomial],
    scheme: PowerScheme,
    l: u32,
) -> Vec<Polynomial> {
    if l == 0 {
        return vec![base.one()];
    }
    match scheme {
        PowerScheme::IdealPowers => power_products(ideal, l, base),
        PowerScheme::ComponentPowers => ideal
            .iter()
            .map(|f| f.pow(&base.field(), l))
            .collect(),
    }
}

pub fn build_tower(
    base: &PresentedRing,
    ideal: &[Polynomial],
    scheme: PowerScheme,
    depth: u32,
) -> Result<CompletionTower> {
    if depth == 0 {
        return Err(CoreError::Invalid("tower depth must be at least 1".into()));
    }
    if ideal.is_empty() {
        return Err(CoreError::Invalid("tower needs at least one ideal generator".into()));
    }
    for f in ideal {
        if f.nvars != base.nvars() {
            return Err(CoreError::Invalid(
                "ideal generator lives in the wrong ring".into(),
            ));
        }
    }
    let mut levels = Vec::with_capacity(depth as usize);
    let mut projections = Vec::with_capacity(depth as usize);
    for l in 1..=depth {
        let rels = level_ideal(base, ideal, scheme, l);
        let ring = base.with_extra_relations(&rels)?;
        let images = (0..base.nvars()).map(|i| ring.var(i)).collect();
        projections.push(RingMorphism::new(base.clone(), ring.clone(), images)?);
        levels.push(ring);
    }
    let mut transitions = Vec::with_capacity(depth as usize - 1);
    for l in 1..depth {
        let upper = &levels[l as usize];
        let lower = &levels[(l - 1) as usize];
        let images = (0..base.nvars()).map(|i| lower.var(i)).collect();
        transitions.push(RingMorphism::new(upper.clone(), lower.clone(), images)?);
    }
    Ok(CompletionTower {
        base: base.clone(),
        ideal: ideal.to_vec(),
        scheme,
        depth,
        levels,
        transitions,
        projections,
    })
}

/// Tower of truncations R/I^l (the completion of R at I, to finite depth).
pub fn completion_tower(
    base: &PresentedRing,
    ideal: &[Polynomial],
    depth: u32,
) -> Result<CompletionTower> {
    build_tower(base, ideal, PowerScheme::IdealPowers, depth)
}

/// Tower of coordinate-wise truncations R/(f_1^l, …, f_m^l).
pub fn component_tower(
    base: &PresentedRing,
    components: &[Polynomial],
    depth: u32,
) -> Result<CompletionTower> {
    build_tower(base, components, PowerScheme::ComponentPowers, depth)
}

impl CompletionTower {
    /// 1-based level access.
    pub fn level(&self, l: u32) -> &PresentedRing {
        assert!(l >= 1 && l <= self.depth, "level {l} out of range");
        &self.levels[(l - 1) as usize]
    }

    /// Truncation map level `from_l` → level `from_l − 1`.
    pub fn transition(&self, from_l: u32) -> &RingMorphism {
        assert!(from_l >= 2 && from_l <= self.depth);
        &self.transitions[(from_l - 2) as usize]
    }

    pub fn projection(&self, l: u32) -> &RingMorphism {
        assert!(l >= 1 && l <= self.depth);
        &self.projections[(l - 1) as usize]
    }

    /// Generators of J_l in the base ring's variables (J_0 = (1)).
    pub fn level_ideal_gens(&self, l: u32) -> Vec<Polynomial> {
        level_ideal(&self.base, &self.ideal, self.scheme, l)
    }

    pub fn extend_depth(&self, new_depth: u32) -> Result<CompletionTower> {
        if new_depth <= self.depth {
            return Ok(self.clone());
        }
        build_tower(&self.base, &self.ideal, self.scheme, new_depth)
    }

    /// Levelwise equality of the underlying rings.
    pub fn same_levels(&self, other: &CompletionTower) -> bool {
        self.depth == other.depth
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    #[test]
    fn ideal_powers_level_two() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let t = completion_tower(
            &r,
            &[r.parse("x").unwrap(), r.parse("y").unwrap()],
            3,
        )
        .unwrap();
        // level 2 = R/(x^2, xy, y^2)
        let l2 = t.level(2);
        assert!(l2.is_elem_zero(&l2.parse("x^2").unwrap()));
        assert!(l2.is_elem_zero(&l2.parse("x*y").unwrap()));
        assert!(l2.is_elem_zero(&l2.parse("y^2").unwrap()));
        assert!(!l2.is_elem_zero(&l2.parse("x").unwrap()));
        let gens = t.level_ideal_gens(2);
        assert_eq!(gens.len(), 3);
    }

    #[test]
    fn component_powers_differ_from_ideal_powers() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let fs = [r.parse("x").unwrap(), r.parse("y").unwrap()];
        let ct = component_tower(&r, &fs, 2).unwrap();
        // level 2 = R/(x^2, y^2): xy survives here but not under ideal powers
        let l2 = ct.level(2);
        assert!(!l2.is_elem_zero(&l2.parse("x*y").unwrap()));
        let it = completion_tower(&r, &fs, 2).unwrap();
        assert!(it.level(2).is_elem_zero(&it.level(2).parse("x*y").unwrap()));
    }

    #[test]
    fn transitions_compose_with_projections() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let t = completion_tower(&r, &[r.parse("x").unwrap()], 4).unwrap();
        // projection to level 3, then transition to level 2 = projection to level 2
        let p3 = t.projection(3);
        let tr = t.transition(3);
        let composed = p3.then(tr).unwrap();
        let p2 = t.projection(2);
        let e = r.parse("1 + x + x^2 + x^3").unwrap();
        assert_eq!(composed.apply(&e), p2.apply(&e));
        assert_eq!(p2.apply(&e), t.level(2).parse("1 + x").unwrap());
    }

    #[test]
    fn single_generator_schemes_agree() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let f = [r.parse("x").unwrap()];
        let a = completion_tower(&r, &f, 3).unwrap();
        let b = component_tower(&r, &f, 3).unwrap();
        assert!(a.same_levels(&b));
    }

    #[test]
    fn level_zero_ideal_is_the_unit_ideal() {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let t = completion_tower(&r, &[r.parse("x").unwrap()], 2).unwrap();
        let g = t.level_ideal_gens(0);
        assert_eq!(g, vec![r.one()]);
    }
}
