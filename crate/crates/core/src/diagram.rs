//! Diagrams indexed by the strata of a normal-crossings divisor: the strata
//! poset, its nerve with face maps, diagrams of chain-model rings over the
//! chain category, modules over such diagrams with a cocartesianity check,
//! and finite limits of module diagrams (including the exact half-cap pair
//! module computed by variable elimination rather than truncation).

use crate::chainring::{chain_map, chain_model, ChainMap, ChainModel, DivisorSpec};
use crate::error::{CoreError, Result};
use crate::groebner::{contract_submodule, SpanBasis, VPoly};
use crate::localize::localize;
use crate::module::{ModuleMap, PresentedModule};
use crate::morphism::RingMorphism;
use crate::poly::Polynomial;
use crate::ring::PresentedRing;
use crate::sample::{random_poly, rng_from_seed};
use crate::strata::{chain_category, mask_contains, subsets, Chain, ChainCategory, Mask};
use rand::Rng;

// ---------------------------------------------------------------------------
// strata poset and nerve
// ---------------------------------------------------------------------------

/// The poset of divisor strata: subsets T of the component set, ordered by
/// reverse containment (the stratum cut out by more components is smaller).
#[derive(Debug, Clone)]
pub struct StrataPoset {
    pub n: u32,
    pub elements: Vec<Mask>,
}

pub fn strata_poset(n: u32) -> Result<StrataPoset> {
    if n == 0 || n > 5 {
        return Err(CoreError::Invalid(format!(
            "strata poset supported for 1..=5 components, got {n}"
        )));
    }
    Ok(StrataPoset {
        n,
        elements: subsets(n),
    })
}

impl StrataPoset {
    /// Y_a ≤ Y_b iff b ⊆ a: deeper strata sit below shallower ones.
    pub fn leq(&self, a: Mask, b: Mask) -> bool {
        mask_contains(a, b)
    }

    pub fn strict_relations(&self) -> usize {
        let mut count = 0;
        for &a in &self.elements {
            for &b in &self.elements {
                if a != b && self.leq(a, b) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_partial_order(&self) -> bool {
        let els = &self.elements;
        let refl = els.iter().all(|&a| self.leq(a, a));
        let antisym = els.iter().all(|&a| {
            els.iter()
                .all(|&b| !(self.leq(a, b) && self.leq(b, a)) || a == b)
        });
        let trans = els.iter().all(|&a| {
            els.iter().all(|&b| {
                els.iter()
                    .all(|&c| !(self.leq(a, b) && self.leq(b, c)) || self.leq(a, c))
            })
        });
        refl && antisym && trans
    }
}

/// The nerve of the strata poset: strict chains graded by length, with the
/// delete-one-entry face maps.
#[derive(Debug, Clone)]
pub struct Nerve {
    pub n: u32,
    /// chains_by_len[m-1] holds the chains with m entries.
    pub chains_by_len: Vec<Vec<Chain>>,
}

pub fn nerve(poset: &StrataPoset, max_len: usize) -> Nerve {
    let chains_by_len = (1..=max_len)
        .map(|m| crate::strata::chains(poset.n, m))
        .collect();
    Nerve {
        n: poset.n,
        chains_by_len,
    }
}

impl Nerve {
    pub fn counts(&self) -> Vec<u64> {
        self.chains_by_len.iter().map(|v| v.len() as u64).collect()
    }

    /// Delete the i-th entry of a chain (the i-th face).
    pub fn face(&self, c: &Chain, i: usize) -> Chain {
        let mut v = c.0.clone();
        v.remove(i);
        Chain(v)
    }

    /// d_i ∘ d_j = d_{j-1} ∘ d_i for i < j, checked on every stored chain.
    pub fn semisimplicial_identities_hold(&self) -> bool {
        for level in &self.chains_by_len {
            for c in level {
                let m = c.len();
                if m < 2 {
                    continue;
                }
                for j in 0..m {
                    for i in 0..j {
                        let lhs = self.face(&self.face(c, j), i);
                        let rhs = self.face(&self.face(c, i), j - 1);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// The category of chains with subchain selections as morphisms, materialized
/// from the nerve.
pub fn chain_category_of(nv: &Nerve) -> ChainCategory {
    chain_category(nv.n, nv.chains_by_len.len())
}

// ---------------------------------------------------------------------------
// diagrams of chain-model rings
// ---------------------------------------------------------------------------

/// A functor from the chain category to rings: a chain model per object and
/// the induced completion/localization map per morphism.
#[derive(Debug, Clone)]
pub struct RingDiagram {
    pub divisor: DivisorSpec,
    pub level: u32,
    pub index: ChainCategory,
    pub models: Vec<ChainModel>,
    /// Parallel to `index.morphisms`.
    pub maps: Vec<ChainMap>,
}

pub fn ring_diagram(divisor: &DivisorSpec, level: u32, max_len: usize) -> Result<RingDiagram> {
    let index = chain_category(divisor.n(), max_len);
    let models: Vec<ChainModel> = index
        .objects
        .iter()
        .map(|c| chain_model(divisor, c, level))
        .collect::<Result<_>>()?;
    let maps: Vec<ChainMap> = index
        .morphisms
        .iter()
        .map(|(s, t, _)| chain_map(&models[*s], &models[*t]))
        .collect::<Result<_>>()?;
    Ok(RingDiagram {
        divisor: divisor.clone(),
        level,
        index,
        models,
        maps,
    })
}

impl RingDiagram {
    pub fn object_index(&self, chain: &Chain) -> Option<usize> {
        self.index.objects.iter().position(|c| c == chain)
    }

    fn label(&self, obj: usize) -> String {
        self.index.objects[obj].label(self.divisor.n())
    }

    /// Verify map-of-composite = composite-of-maps on every ring generator,
    /// for every composable pair of index morphisms. Returns the number of
    /// pairs checked.
    pub fn check_functoriality(&self) -> Result<usize> {
        let mut checked = 0;
        for i in 0..self.index.morphisms.len() {
            for j in 0..self.index.morphisms.len() {
                let Some(composite) = self.index.compose(i, j) else {
                    continue;
                };
                let (s, t, _) = composite;
                let k = self
                    .index
                    .morphisms
                    .iter()
                    .position(|m| *m == composite)
                    .ok_or_else(|| {
                        CoreError::Invalid("composite missing from the chain category".into())
                    })?;
                let model_s = &self.models[s];
                let field = model_s.ring.field();
                for v in 0..model_s.ring.nvars() {
                    let g = model_s.from_poly(&Polynomial::var(model_s.ring.nvars(), v, &field));
                    let via = self.maps[j].apply(&self.maps[i].apply(&g));
                    let direct = self.maps[k].apply(&g);
                    let (eq, _) = self.models[t].eq_at_precision(&via, &direct);
                    if !eq {
                        return Err(CoreError::Invalid(format!(
                            "functoriality fails on generator {v} along {} -> {}",
                            self.label(s),
                            self.label(t),
                        )));
                    }
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

// ---------------------------------------------------------------------------
// modules over a ring diagram
// ---------------------------------------------------------------------------

/// A module over each chain model plus, for every index morphism i → j, the
/// matrix (columns over the target model ring) sending generators of the
/// source module to elements of the target module.
///
/// Structure matrices here are pole-free; comparisons that genuinely need
/// denominators along re-inverted components are handled by the descent
/// layer, which tracks pole orders explicitly.
#[derive(Debug, Clone)]
pub struct DiagramModule {
    pub diagram: RingDiagram,
    pub modules: Vec<PresentedModule>,
    /// Parallel to `diagram.index.morphisms`.
    pub structure: Vec<Vec<VPoly>>,
}

/// Ring inclusion of the divisor's ambient ring into a chain model ring
/// (base coordinates map to themselves).
pub fn model_inclusion(base: &PresentedRing, model: &ChainModel) -> Result<RingMorphism> {
    let field = base.field();
    let images: Vec<Polynomial> = (0..base.nvars())
        .map(|i| Polynomial::var(model.ring.nvars(), i, &field))
        .collect();
    RingMorphism::new(base.clone(), model.ring.clone(), images)
}

/// The tautological diagram on a module over the ambient ring: every object
/// carries the base change of `m`, every structure matrix is the identity.
pub fn diagram_of_base_changes(diagram: RingDiagram, m: &PresentedModule) -> Result<DiagramModule> {
    if m.ring != diagram.divisor.ring {
        return Err(CoreError::RingMismatch(
            "module does not live over the diagram's ambient ring".into(),
        ));
    }
    let modules: Vec<PresentedModule> = diagram
        .models
        .iter()
        .map(|model| m.base_change(&model_inclusion(&m.ring, model)?))
        .collect::<Result<_>>()?;
    let structure: Vec<Vec<VPoly>> = diagram
        .index
        .morphisms
        .iter()
        .map(|(s, t, _)| {
            let tm = &diagram.models[*t];
            (0..modules[*s].gens)
                .map(|g| VPoly::unit(modules[*s].gens, tm.ring.nvars(), g, &tm.ring.field()))
                .collect()
        })
        .collect();
    Ok(DiagramModule {
        diagram,
        modules,
        structure,
    })
}

#[derive(Debug, Clone)]
pub struct CocartesianDiagramReport {
    pub ok: bool,
    /// (source chain, target chain, reason) for the first failing morphism.
    pub witness: Option<(String, String, String)>,
    pub morphisms_checked: usize,
}

/// A diagram module is cocartesian when, along every index morphism, the
/// base change of the source module maps isomorphically onto the target
/// module via the structure matrix.
pub fn is_cocartesian_diagram(dm: &DiagramModule) -> Result<CocartesianDiagramReport> {
    let mut checked = 0;
    for (mi, (s, t, _)) in dm.diagram.index.morphisms.iter().enumerate() {
        let map = &dm.diagram.maps[mi];
        let src_mod = &dm.modules[*s];
        let dst_model = &dm.diagram.models[*t];
        let rel_cols: Vec<VPoly> = if src_mod.relations.is_empty() {
            Vec::new()
        } else {
            let rels = dm.diagram.models[*s]
                .matrix_from_cols(src_mod.gens, src_mod.relations.clone());
            let img = map.apply_matrix(&rels);
            if img.poles.iter().any(|&p| p > 0) {
                return Err(CoreError::Invalid(
                    "source relations acquire poles under the chain map; \
                     clear denominators before the cocartesian check"
                        .into(),
                ));
            }
            img.cols
        };
        let based = PresentedModule::new(dst_model.ring.clone(), src_mod.gens, rel_cols)?;
        let fail = |reason: String| CocartesianDiagramReport {
            ok: false,
            witness: Some((
                dm.diagram.label(*s),
                dm.diagram.label(*t),
                reason,
            )),
            morphisms_checked: checked,
        };
        let induced = match ModuleMap::new(based, dm.modules[*t].clone(), dm.structure[mi].clone())
        {
            Ok(m) => m,
            Err(e) => return Ok(fail(format!("structure matrix ill-defined: {e}"))),
        };
        if !induced.is_isomorphism()? {
            return Ok(fail("induced map on the base change is not an isomorphism".into()));
        }
        checked += 1;
    }
    Ok(CocartesianDiagramReport {
        ok: true,
        witness: None,
        morphisms_checked: checked,
    })
}

// ---------------------------------------------------------------------------
// finite limits of module diagrams over a single ring
// ---------------------------------------------------------------------------

/// An arrow of a finite module diagram: the matrix columns (over the shared
/// ring) of a map from `modules[src]` to `modules[dst]`.
#[derive(Debug, Clone)]
pub struct DiagArrow {
    pub src: usize,
    pub dst: usize,
    pub cols: Vec<VPoly>,
}

#[derive(Debug, Clone)]
pub struct ModuleDiagram {
    pub modules: Vec<PresentedModule>,
    pub arrows: Vec<DiagArrow>,
}

/// A computed limit: the module, its inclusion into the product, and the
/// projections to each object.
#[derive(Debug, Clone)]
pub struct LimitCone {
    pub module: PresentedModule,
    pub inclusion: ModuleMap,
    pub projections: Vec<ModuleMap>,
}

/// The limit of a finite diagram of modules over one ring, as the kernel of
/// the difference map ∏ᵢ Mᵢ → ∏_{a: i→j} Mⱼ, (xᵢ) ↦ (A_a(x_{src}) − x_{dst}).
pub fn limit(d: &ModuleDiagram) -> Result<LimitCone> {
    if d.modules.is_empty() {
        return Err(CoreError::Invalid("limit of an empty diagram".into()));
    }
    let ring = d.modules[0].ring.clone();
    for m in &d.modules {
        if m.ring != ring {
            return Err(CoreError::RingMismatch(
                "module diagram must live over a single ring".into(),
            ));
        }
    }
    for a in &d.arrows {
        if a.src >= d.modules.len() || a.dst >= d.modules.len() {
            return Err(CoreError::Invalid("arrow endpoint out of range".into()));
        }
        if a.cols.len() != d.modules[a.src].gens {
            return Err(CoreError::ShapeMismatch(
                "arrow matrix has the wrong number of columns".into(),
            ));
        }
        for c in &a.cols {
            if c.ncomps != d.modules[a.dst].gens {
                return Err(CoreError::ShapeMismatch(
                    "arrow matrix has the wrong number of rows".into(),
                ));
            }
        }
    }
    let field = ring.field();
    let nvars = ring.nvars();
    let mut offsets = Vec::with_capacity(d.modules.len());
    let mut big = d.modules[0].clone();
    offsets.push(0);
    for m in &d.modules[1..] {
        offsets.push(big.gens);
        big = big.direct_sum(m)?;
    }
    let total = big.gens;

    let block_projections = |source: &PresentedModule| -> Result<Vec<ModuleMap>> {
        (0..d.modules.len())
            .map(|i| {
                let cols: Vec<VPoly> = (0..total)
                    .map(|k| {
                        let gi = d.modules[i].gens;
                        if k >= offsets[i] && k < offsets[i] + gi {
                            VPoly::unit(gi, nvars, k - offsets[i], &field)
                        } else {
                            VPoly::zero(gi, nvars)
                        }
                    })
                    .collect();
                ModuleMap::new(source.clone(), d.modules[i].clone(), cols)
            })
            .collect()
    };

    if d.arrows.is_empty() {
        let id_cols: Vec<VPoly> = (0..total).map(|k| VPoly::unit(total, nvars, k, &field)).collect();
        let inclusion = ModuleMap::new(big.clone(), big.clone(), id_cols)?;
        let projections = block_projections(&big)?;
        return Ok(LimitCone {
            module: big,
            inclusion,
            projections,
        });
    }

    let mut toffsets = Vec::with_capacity(d.arrows.len());
    let mut tgt = d.modules[d.arrows[0].dst].clone();
    toffsets.push(0);
    for a in &d.arrows[1..] {
        toffsets.push(tgt.gens);
        tgt = tgt.direct_sum(&d.modules[a.dst])?;
    }
    let ttotal = tgt.gens;

    let mut cols = Vec::with_capacity(total);
    for (i, m) in d.modules.iter().enumerate() {
        for g in 0..m.gens {
            let mut col = VPoly::zero(ttotal, nvars);
            for (ai, a) in d.arrows.iter().enumerate() {
                if a.src == i {
                    col = col.add(&field, &a.cols[g].widened(ttotal, toffsets[ai]));
                }
                if a.dst == i {
                    let e = VPoly::unit(d.modules[i].gens, nvars, g, &field);
                    col = col.sub(&field, &e.widened(ttotal, toffsets[ai]));
                }
            }
            cols.push(col);
        }
    }
    let dmap = ModuleMap::new(big.clone(), tgt, cols)?;
    let (limmod, inclusion) = dmap.kernel()?;
    let projections: Vec<ModuleMap> = (0..d.modules.len())
        .map(|i| {
            let cols_i: Vec<VPoly> = inclusion
                .cols
                .iter()
                .map(|c| c.restricted(offsets[i], offsets[i] + d.modules[i].gens))
                .collect();
            ModuleMap::new(limmod.clone(), d.modules[i].clone(), cols_i)
        })
        .collect::<Result<_>>()?;
    Ok(LimitCone {
        module: limmod,
        inclusion,
        projections,
    })
}

/// Universal property of a computed limit, tested on random cones: cones are
/// drawn through the limit itself, re-factored via explicit preimages, and
/// the factorization must reproduce the original map. Uniqueness comes from
/// the inclusion having zero kernel.
pub fn verify_limit_universal(
    d: &ModuleDiagram,
    cone: &LimitCone,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let (ker, _) = cone.inclusion.kernel()?;
    if !ker.is_zero_module() {
        return Ok(false);
    }
    let ring = cone.module.ring.clone();
    let field = ring.field();
    let nvars = ring.nvars();
    let total = cone.inclusion.target.gens;
    let mut offsets = Vec::with_capacity(d.modules.len());
    let mut acc = 0;
    for m in &d.modules {
        offsets.push(acc);
        acc += m.gens;
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..trials {
        let r = rng.gen_range(1..=2usize);
        let free = PresentedModule::free(ring.clone(), r);
        let hcols: Vec<VPoly> = (0..r)
            .map(|_| {
                let comps: Vec<Polynomial> = (0..cone.module.gens)
                    .map(|_| random_poly(&ring, &mut rng, 2, 3))
                    .collect();
                VPoly::from_components(&comps)
            })
            .collect();
        let h = ModuleMap::new(free.clone(), cone.module.clone(), hcols)?;
        // legs of the induced cone
        let legs: Vec<ModuleMap> = cone
            .projections
            .iter()
            .map(|p| h.then(p))
            .collect::<Result<_>>()?;
        // reassemble the cone as a map into the product and re-factor it
        for k in 0..r {
            let mut assembled = VPoly::zero(total, nvars);
            for (i, leg) in legs.iter().enumerate() {
                assembled = assembled.add(&field, &leg.cols[k].widened(total, offsets[i]));
            }
            let Some(u) = cone.inclusion.preimage(&assembled) else {
                return Ok(false);
            };
            let diff = u.sub(&field, &h.cols[k]);
            if !cone.module.elem_is_zero(&diff) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// the half-cap pair module, computed exactly
// ---------------------------------------------------------------------------

/// The module of compatible pairs for the half-cap diagram
///
///   (sections away from the divisor) → (formal Laurent sections) ← (formal sections)
///
/// at pole bound `pole`: pairs (u/f^pole, v) agreeing after completion. Over
/// the localization presentation L = R[t]/(t·f − 1) the agreement condition
/// is exact and linear — u = f^pole·v — so the solution span is computed over
/// L, contracted back to R by eliminating t, and presented by its syzygies.
/// No truncation enters; for the structure sheaf this recovers a free module
/// of rank one at every pole bound.
pub fn lefthalfcap_limit(
    base: &PresentedRing,
    f: &Polynomial,
    pole: u32,
) -> Result<PresentedModule> {
    let field = base.field();
    let loc = localize(base, f)?;
    let lring = loc.ring.clone();
    if lring.is_zero_ring() {
        return Err(CoreError::Invalid(
            "divisor component vanishes; half-cap pairs are undefined".into(),
        ));
    }
    let nvl = lring.nvars();
    let fp = f.extended(nvl).pow(&field, pole);
    let free2 = PresentedModule::free(lring.clone(), 2);
    let tgt = PresentedModule::free(lring.clone(), 1);
    let cols = vec![
        VPoly::from_poly(1, 0, &lring.one()),
        VPoly::from_poly(1, 0, &fp.neg(&field)),
    ];
    let dmap = ModuleMap::new(free2, tgt, cols)?;
    let (_, incl) = dmap.kernel()?;
    let contracted = contract_submodule(&incl.cols, lring.relations(), &[loc.tvar], &field);
    // shrink the t-free columns back to the base coordinates
    let shrink = |p: &Polynomial| -> Polynomial {
        let mut images: Vec<Polynomial> = (0..base.nvars())
            .map(|i| Polynomial::var(base.nvars(), i, &field))
            .collect();
        images.push(Polynomial::zero(base.nvars()));
        p.substitute(&field, &images, base.nvars())
    };
    let gens: Vec<VPoly> = contracted
        .iter()
        .map(|v| {
            let comps: Vec<Polynomial> =
                (0..2).map(|c| base.nf(&shrink(&v.component(c)))).collect();
            VPoly::from_components(&comps)
        })
        .filter(|v| !v.is_zero())
        .collect();
    let span = SpanBasis::new(&field, base.order(), base.nvars(), 2, &gens, base.relations());
    let relations = span.syzygies();
    PresentedModule::new(base.clone(), gens.len(), relations)
}
