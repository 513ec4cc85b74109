//! Modules spread out over a completion tower: one presented module per
//! truncation level, connected by transition maps, together with the two
//! structural questions asked of such data — is the tower cocartesian
//! (transitions identify M_l/J_k·M_l with M_k), and does a single presentation
//! over the base ring reproduce every level?
//!
//! Every quotient ring in a tower shares the base ring's variable list, so a
//! polynomial written at one level can be reinterpreted verbatim at any other;
//! the maps below exploit that instead of substituting.

use crate::error::{CoreError, Result};
use crate::groebner::{SpanBasis, VPoly};
use crate::module::{ModuleMap, PresentedModule};
use crate::ring::PresentedRing;
use crate::tower::CompletionTower;

#[derive(Debug, Clone)]
pub struct TowerModule {
    pub tower: CompletionTower,
    /// levels[i] is a module over tower.level(i+1).
    pub levels: Vec<PresentedModule>,
    /// transitions[i]: levels[i+1] (reinterpreted over tower.level(i+1)) → levels[i].
    pub transitions: Vec<ModuleMap>,
}

/// Reinterpret a module over another quotient of the same base coordinates,
/// appending `extra_ideal`·e_j relations (restriction of scalars to a deeper
/// quotient, or lifting a shallow module up a level).
pub fn reinterpret_module(
    m: &PresentedModule,
    ring: &PresentedRing,
    extra_ideal: &[Polynomial],
) -> Result<PresentedModule> {
    let mut rels: Vec<VPoly> = m
        .relations
        .iter()
        .map(|r| r.map_components(|p| ring.nf(p)))
        .filter(|r| !r.is_zero())
        .collect();
    for j in extra_ideal {
        let jr = ring.nf(j);
        if jr.is_zero() {
            continue;
        }
        for g in 0..m.gens {
            rels.push(VPoly::from_poly(m.gens, g, &jr));
        }
    }
    PresentedModule::new(ring.clone(), m.gens, rels)
}

use crate::poly::Polynomial;

impl TowerModule {
    pub fn new(
        tower: CompletionTower,
        levels: Vec<PresentedModule>,
        transitions: Vec<ModuleMap>,
    ) -> Result<Self> {
        if levels.len() != tower.depth as usize {
            return Err(CoreError::ShapeMismatch(format!(
                "tower of depth {} needs {} levels, got {}",
                tower.depth,
                tower.depth,
                levels.len()
            )));
        }
        if transitions.len() + 1 != levels.len() {
            return Err(CoreError::ShapeMismatch(
                "tower needs one transition per consecutive level pair".into(),
            ));
        }
        for (i, m) in levels.iter().enumerate() {
            if m.ring != *tower.level(i as u32 + 1) {
                return Err(CoreError::RingMismatch(format!(
                    "level {} module lives over the wrong ring",
                    i + 1
                )));
            }
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.target.ring != *tower.level(i as u32 + 1) {
                return Err(CoreError::RingMismatch(format!(
                    "transition into level {} lands in the wrong ring",
                    i + 1
                )));
            }
            if !t.target.same_presentation_span(&levels[i]) {
                return Err(CoreError::ShapeMismatch(format!(
                    "transition into level {} does not target that level's module",
                    i + 1
                )));
            }
            if t.source.gens != levels[i + 1].gens {
                return Err(CoreError::ShapeMismatch(format!(
                    "transition from level {} has wrong source generator count",
                    i + 2
                )));
            }
        }
        Ok(TowerModule {
            tower,
            levels,
            transitions,
        })
    }

    pub fn depth(&self) -> u32 {
        self.tower.depth
    }

    pub fn level(&self, l: u32) -> &PresentedModule {
        &self.levels[(l - 1) as usize]
    }

    /// The composed map M_l → M_k (k < l), as a map over R_l into M_k viewed
    /// as an R_l-module via restriction of scalars.
    pub fn composed_transition(&self, l: u32, k: u32) -> Result<ModuleMap> {
        assert!(k >= 1 && k < l && l <= self.depth());
        let ring_l = self.tower.level(l).clone();
        // columns of the composite, built by raw polynomial arithmetic
        let mut cols: Vec<VPoly> = (0..self.level(l).gens)
            .map(|i| self.level(l).generator(i))
            .collect();
        for step in (k..l).rev() {
            // transitions[step-1] maps level step+1 → level step
            let t = &self.transitions[(step - 1) as usize];
            cols = cols
                .iter()
                .map(|c| {
                    let mut out = VPoly::zero(t.target.gens, t.target.ring.nvars());
                    for g in 0..c.ncomps {
                        let cg = c.component(g);
                        if !cg.is_zero() {
                            out = out.add(
                                &t.target.ring.field(),
                                &t.cols[g].mul_poly(&t.target.ring.field(), &cg),
                            );
                        }
                    }
                    out
                })
                .collect();
        }
        let target = reinterpret_module(
            self.level(k),
            &ring_l,
            &self.tower.level_ideal_gens(k),
        )?;
        ModuleMap::new(self.level(l).clone(), target, cols)
    }
}

/// Canonical form of a set of relation columns: normalized, deduplicated,
/// sorted by their term lists.
fn canonical_columns(cols: &[VPoly], ring: &PresentedRing) -> Vec<VPoly> {
    let mut out: Vec<VPoly> = Vec::new();
    for c in cols {
        let n = c.map_components(|p| ring.nf(p));
        if !n.is_zero() && !out.contains(&n) {
            out.push(n);
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<_> = a.terms.iter().collect();
        let kb: Vec<_> = b.terms.iter().collect();
        ka.cmp(&kb)
    });
    out
}

/// Restrict a module over the base ring to every level of a tower.
pub fn module_to_tower(m: &PresentedModule, tower: &CompletionTower) -> Result<TowerModule> {
    if m.ring != tower.base {
        return Err(CoreError::RingMismatch(
            "module does not live over the tower's base ring".into(),
        ));
    }
    let mut levels = Vec::with_capacity(tower.depth as usize);
    for l in 1..=tower.depth {
        levels.push(m.base_change(tower.projection(l))?);
    }
    let mut transitions = Vec::with_capacity(tower.depth as usize - 1);
    for l in 1..tower.depth {
        let upper = &levels[l as usize];
        let lower = &levels[(l - 1) as usize];
        let source = upper.base_change(tower.transition(l + 1))?;
        let cols = (0..lower.gens).map(|i| lower.generator(i)).collect();
        transitions.push(ModuleMap::new(source, lower.clone(), cols)?);
    }
    TowerModule::new(tower.clone(), levels, transitions)
}

#[derive(Debug, Clone)]
pub struct CocartesianWitness {
    pub lower: u32,
    pub upper: u32,
    /// Human-readable description of the offending element.
    pub element: String,
}

#[derive(Debug, Clone)]
pub struct CocartesianReport {
    pub ok: bool,
    pub witness: Option<CocartesianWitness>,
    /// Number of level pairs checked.
    pub pairs_checked: usize,
}

/// Does every transition exhibit M_k as M_l/J_k·M_l? Checks, for all pairs
/// k < l, that the kernel of M_l → M_k equals the submodule J_k·M_l.
pub fn is_cocartesian_tower(tm: &TowerModule) -> Result<CocartesianReport> {
    let mut pairs = 0;
    for l in 2..=tm.depth() {
        for k in 1..l {
            pairs += 1;
            let ml = tm.level(l);
            let ring_l = &ml.ring;
            let field = ring_l.field();
            let phi = tm.composed_transition(l, k)?;
            let (_, incl) = phi.kernel()?;
            // generators of J_k·M_l inside M_l
            let mut jm: Vec<VPoly> = Vec::new();
            for j in tm.tower.level_ideal_gens(k) {
                let jl = ring_l.nf(&j);
                if jl.is_zero() {
                    continue;
                }
                for g in 0..ml.gens {
                    jm.push(VPoly::from_poly(ml.gens, g, &jl));
                }
            }
            // span(J_k·M_l) within M_l
            let mut jm_and_rels = jm.clone();
            jm_and_rels.extend(ml.relations.iter().cloned());
            let jm_span = SpanBasis::new(
                &field,
                ring_l.order(),
                ring_l.nvars(),
                ml.gens,
                &jm_and_rels,
                ring_l.relations(),
            );
            for kgen in &incl.cols {
                if !jm_span.contains(kgen) {
                    return Ok(CocartesianReport {
                        ok: false,
                        witness: Some(CocartesianWitness {
                            lower: k,
                            upper: l,
                            element: describe_vector(kgen, ring_l),
                        }),
                        pairs_checked: pairs,
                    });
                }
            }
            // the reverse inclusion J_k·M_l ⊆ ker is structural for honest
            // quotient targets, but transitions are arbitrary data here
            for v in &jm {
                if !phi.target.elem_is_zero(&phi.apply_vector(v)) {
                    return Ok(CocartesianReport {
                        ok: false,
                        witness: Some(CocartesianWitness {
                            lower: k,
                            upper: l,
                            element: describe_vector(v, ring_l),
                        }),
                        pairs_checked: pairs,
                    });
                }
            }
        }
    }
    Ok(CocartesianReport {
        ok: true,
        witness: None,
        pairs_checked: pairs,
    })
}

fn describe_vector(v: &VPoly, ring: &PresentedRing) -> String {
    let comps: Vec<String> = v
        .components()
        .iter()
        .map(|p| ring.display_poly(p))
        .collect();
    format!("({})", comps.join(", "))
}

#[derive(Debug, Clone)]
pub struct StabilizedPresentation {
    /// Presentation over the tower's base ring reproducing every level.
    pub module: PresentedModule,
    /// The level at which the level presentations stopped changing.
    pub level: u32,
}

/// Find a presentation over the base ring whose restriction reproduces every
/// level of the tower. The level presentations must become literally stable
/// (same canonical columns at level n and n+1), with at least one more level
/// of headroom (n ≤ depth − 2), and no column may still be hidden by the
/// truncation (a level is masked while deeper levels show more columns).
/// The winning presentation is verified level by level before being returned.
pub fn tower_stabilized_presentation(tm: &TowerModule) -> Result<StabilizedPresentation> {
    let depth = tm.depth();
    let base = &tm.tower.base;
    let gens = tm.level(1).gens;
    for l in 2..=depth {
        if tm.level(l).gens != gens {
            return Err(CoreError::NoStabilization {
                depth,
                detail: format!(
                    "generator counts vary across levels ({} at level 1, {} at level {})",
                    gens,
                    tm.level(l).gens,
                    l
                ),
            });
        }
    }
    // canonical candidate presentation per level (columns are base-ring
    // polynomials by construction: normal forms share the base coordinates)
    let candidates: Vec<Vec<VPoly>> = (1..=depth)
        .map(|l| canonical_columns(&tm.level(l).relations, tm.tower.level(l)))
        .collect();
    let max_cols = candidates.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut stable_at: Option<u32> = None;
    for n in 1..=depth.saturating_sub(2) {
        let i = (n - 1) as usize;
        // masked: deeper levels still reveal more relations
        if candidates[i].len() < max_cols
            && candidates[i + 1..].iter().any(|c| c.len() > candidates[i].len())
        {
            continue;
        }
        if candidates[i] == candidates[i + 1] {
            stable_at = Some(n);
            break;
        }
    }
    let Some(n) = stable_at else {
        return Err(CoreError::NoStabilization {
            depth,
            detail: format!(
                "level presentations do not stabilize with headroom at depth {depth}"
            ),
        });
    };
    let module = PresentedModule::new(base.clone(), gens, candidates[(n - 1) as usize].clone())?;
    // verify: restricting the candidate reproduces each level via the
    // generator-to-generator map
    for l in 1..=depth {
        let bc = module.base_change(tm.tower.projection(l))?;
        let cols = (0..gens).map(|i| tm.level(l).generator(i)).collect();
        let cmp = ModuleMap::new(bc, tm.level(l).clone(), cols).map_err(|_| {
            CoreError::NoStabilization {
                depth,
                detail: format!(
                    "stable presentation does not map onto level {l} generators"
                ),
            }
        })?;
        if !cmp.is_isomorphism()? {
            return Err(CoreError::NoStabilization {
                depth,
                detail: format!("stable presentation fails to reproduce level {l}"),
            });
        }
    }
    Ok(StabilizedPresentation { module, level: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;
    use crate::tower::completion_tower;

    fn qx() -> PresentedRing {
        PresentedRing::polynomial(FieldDesc::Rationals, &["x"])
    }

    #[test]
    fn restriction_levels_of_a_torsion_module() {
        let r = qx();
        let m = PresentedModule::cyclic(r.clone(), &[r.parse("x^2").unwrap()]).unwrap();
        let tower = completion_tower(&r, &[r.parse("x").unwrap()], 4).unwrap();
        let tm = module_to_tower(&m, &tower).unwrap();
        // levels: free over R/(x), free over R/(x^2), x^2-torsion beyond
        assert!(tm.level(1).relations.is_empty());
        assert!(tm.level(2).relations.is_empty());
        assert_eq!(tm.level(3).relations.len(), 1);
        assert_eq!(tm.level(4).relations.len(), 1);
        // every level is nonzero and cyclic
        for l in 1..=4 {
            assert_eq!(tm.level(l).gens, 1);
            assert!(!tm.level(l).is_zero_module());
        }
    }

    #[test]
    fn restrictions_are_cocartesian() {
        let r = qx();
        let tower = completion_tower(&r, &[r.parse("x").unwrap()], 4).unwrap();
        for ideal in [vec![], vec![r.parse("x^2").unwrap()], vec![r.parse("x^3").unwrap()]] {
            let m = if ideal.is_empty() {
                PresentedModule::free(r.clone(), 2)
            } else {
                PresentedModule::cyclic(r.clone(), &ideal).unwrap()
            };
            let tm = module_to_tower(&m, &tower).unwrap();
            let rep = is_cocartesian_tower(&tm).unwrap();
            assert!(rep.ok, "expected cocartesian, witness {:?}", rep.witness);
            assert_eq!(rep.pairs_checked, 6);
        }
    }

    #[test]
    fn twisted_transition_is_not_cocartesian() {
        // tower along (x^2); both levels carry Q[x]/(x^2), transition = ·x
        let r = qx();
        let tower = completion_tower(&r, &[r.parse("x^2").unwrap()], 2).unwrap();
        let m1 = PresentedModule::free(tower.level(1).clone(), 1);
        let m2 = PresentedModule::cyclic(
            tower.level(2).clone(),
            &[tower.level(2).parse("x^2").unwrap()],
        )
        .unwrap();
        let src = m2.base_change(tower.transition(2)).unwrap();
        let xcol = VPoly::from_poly(1, 0, &tower.level(1).parse("x").unwrap());
        let t = ModuleMap::new(src, m1.clone(), vec![xcol]).unwrap();
        let tm = TowerModule::new(tower, vec![m1, m2], vec![t]).unwrap();
        let rep = is_cocartesian_tower(&tm).unwrap();
        assert!(!rep.ok);
        let w = rep.witness.unwrap();
        assert_eq!((w.lower, w.upper), (1, 2));
        assert!(!w.element.is_empty());
    }

    #[test]
    fn stabilization_of_x_cubed_torsion() {
        let r = qx();
        let m = PresentedModule::cyclic(r.clone(), &[r.parse("x^3").unwrap()]).unwrap();
        let tower = completion_tower(&r, &[r.parse("x").unwrap()], 8).unwrap();
        let tm = module_to_tower(&m, &tower).unwrap();
        let st = tower_stabilized_presentation(&tm).unwrap();
        assert_eq!(st.level, 4);
        assert!(st.module.same_presentation_span(&m));
    }

    #[test]
    fn stabilization_of_a_free_module() {
        let r = qx();
        let m = PresentedModule::free(r.clone(), 2);
        let tower = completion_tower(&r, &[r.parse("x").unwrap()], 4).unwrap();
        let tm = module_to_tower(&m, &tower).unwrap();
        let st = tower_stabilized_presentation(&tm).unwrap();
        assert_eq!(st.level, 1);
        assert!(st.module.relations.is_empty());
        assert_eq!(st.module.gens, 2);
    }

    #[test]
    fn shallow_tower_cannot_stabilize_deep_torsion() {
        let r = qx();
        let m = PresentedModule::cyclic(r.clone(), &[r.parse("x^3").unwrap()]).unwrap();
        let tower = completion_tower(&r, &[r.parse("x").unwrap()], 2).unwrap();
        let tm = module_to_tower(&m, &tower).unwrap();
        match tower_stabilized_presentation(&tm) {
            Err(CoreError::NoStabilization { depth, .. }) => assert_eq!(depth, 2),
            other => panic!("expected NoStabilization, got {other:?}"),
        }
    }
}
