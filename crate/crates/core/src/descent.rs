//! Gluing a module back together from its pieces along a normal-crossings
//! divisor, and the reverse construction.
//!
//! A [`DescentDatum`] holds one module per divisor stratum — an honest module
//! over the localized ring on the open stratum, truncation towers on the
//! closed ones — together with comparison matrices over the chain-model rings.
//! [`glue`] checks the cocycle condition, then solves for the module of
//! matching pairs exactly over R[t]/(t·f − 1): pairs (u, v) with ρ(u) = v
//! become a syzygy kernel, the inversion variable is eliminated to contract
//! the solutions to an R-lattice, and the lattice is divided by the relations
//! visible on each side. Every candidate is verified against the datum
//! (restriction to the open stratum and to every tower level must be an
//! isomorphism, the comparison triangle must commute at the working precision,
//! and the two-sided difference map must cover all polar classes); failed
//! verification escalates the pole bound until the cap, never silently.
//! Several components reduce to one by gluing across the last component on
//! every stratum of the remaining divisor, levelwise where both sides are
//! truncated.

use std::collections::BTreeMap;

use crate::chainring::{chain_model, ChainMatrix, ChainModel, DivisorSpec};
use crate::error::{CoreError, Result};
use crate::groebner::{contract_submodule, SpanBasis, VPoly};
use crate::localize::{localize, Localization};
use crate::module::{ModuleMap, PresentedModule};
use crate::morphism::RingMorphism;
use crate::poly::Polynomial;
use crate::precision::Precision;
use crate::ring::PresentedRing;
use crate::smith::module_invariants;
use crate::strata::{mask_contains, mask_label, subsets, Chain, Mask};
use crate::tower::{component_tower, CompletionTower};
use crate::tower_module::{
    module_to_tower, tower_stabilized_presentation, TowerModule,
};

// ---------------------------------------------------------------------------
// datum
// ---------------------------------------------------------------------------

/// Module data attached to a single stratum subset.
#[derive(Debug, Clone)]
pub enum StratumModule {
    /// The open stratum: a module over R[(f_1⋯f_n)^{-1}].
    Open(PresentedModule),
    /// A closed stratum T ≠ ∅: a tower along the components of T over the
    /// ring with the complementary components inverted.
    Tower(TowerModule),
}

impl StratumModule {
    pub fn gens(&self) -> usize {
        match self {
            StratumModule::Open(m) => m.gens,
            StratumModule::Tower(t) => t.level(1).gens,
        }
    }
}

/// Per-stratum modules plus comparison matrices for every strict pair of
/// strata, all truncated at one working level.
///
/// Validity of the comparisons (that each is invertible at its precision) is
/// not checked eagerly: it is certified as a side effect of [`glue`], whose
/// verification fails loudly on non-isomorphic data.
#[derive(Debug, Clone)]
pub struct DescentDatum {
    pub divisor: DivisorSpec,
    /// Truncation level shared by all towers and comparisons.
    pub level: u32,
    /// `strata[mask as usize]` is the module datum on the stratum labeled by
    /// `mask`; index 0 is the open stratum.
    pub strata: Vec<StratumModule>,
    /// For each strict inclusion `a ⊂ b`: a matrix over the chain model of
    /// `[a, b]` with one column per generator on the `a` side and one row per
    /// generator on the `b` side.
    pub comparisons: BTreeMap<(Mask, Mask), ChainMatrix>,
    /// True when every comparison is the identity on a common generator
    /// frame (as produced by [`datum_from_module`]); gluing across more than
    /// one component requires this, because the reduction step re-presents
    /// intermediate results on that frame.
    pub canonical: bool,
    /// Outcome of the most recent cocycle check, `None` while pending.
    /// Maintained by [`DescentDatum::refresh_cocycle_status`]; mutating the
    /// comparisons afterwards leaves a stale flag, so consumers re-check.
    pub cocycle_status: Option<bool>,
}

/// The ring of the open stratum, R[(f_1⋯f_n)^{-1}].
pub fn open_stratum_localization(divisor: &DivisorSpec) -> Result<Localization> {
    let field = divisor.ring.field();
    let mut product = divisor.ring.one();
    for f in &divisor.components {
        product = product.mul(&field, f);
    }
    localize(&divisor.ring, &product)
}

/// Base ring of the stratum `mask`: the divisor's ring with every component
/// outside `mask` inverted. Returns the ring and, when a localization was
/// needed, the inclusion data.
pub fn stratum_base(
    divisor: &DivisorSpec,
    mask: Mask,
) -> Result<(PresentedRing, Option<Localization>)> {
    let n = divisor.n();
    let field = divisor.ring.field();
    let outside: Vec<u32> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
    if outside.is_empty() {
        return Ok((divisor.ring.clone(), None));
    }
    let mut product = divisor.ring.one();
    for j in &outside {
        product = product.mul(&field, &divisor.components[*j as usize]);
    }
    let loc = localize(&divisor.ring, &product)?;
    Ok((loc.ring.clone(), Some(loc)))
}

/// The truncation tower of the stratum `mask` (component powers of the
/// members of `mask` over the stratum base).
pub fn stratum_tower(divisor: &DivisorSpec, mask: Mask, level: u32) -> Result<CompletionTower> {
    if mask == 0 {
        return Err(CoreError::Invalid(
            "the open stratum carries no truncation tower".into(),
        ));
    }
    let (base, _) = stratum_base(divisor, mask)?;
    let comps: Vec<Polynomial> = (0..divisor.n())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| divisor.components[i as usize].extended(base.nvars()))
        .collect();
    component_tower(&base, &comps, level)
}

/// Chain model of the two-step chain `[a, b]` at the datum's level.
pub fn pair_model(divisor: &DivisorSpec, a: Mask, b: Mask, level: u32) -> Result<ChainModel> {
    chain_model(divisor, &Chain(vec![a, b]), level)
}

/// Spread a module over the divisor's ring out into a descent datum: base
/// changes on every stratum, with identity comparisons on the module's own
/// generators.
pub fn datum_from_module(
    m: &PresentedModule,
    divisor: &DivisorSpec,
    level: u32,
) -> Result<DescentDatum> {
    if m.ring != divisor.ring {
        return Err(CoreError::RingMismatch(
            "module does not live over the divisor's ring".into(),
        ));
    }
    if level == 0 {
        return Err(CoreError::Invalid("datum level must be at least 1".into()));
    }
    let n = divisor.n();
    let mut strata = Vec::with_capacity(1 << n);
    for mask in subsets(n) {
        if mask == 0 {
            let loc = open_stratum_localization(divisor)?;
            strata.push(StratumModule::Open(m.base_change(&loc.include)?));
        } else {
            let (base, loc) = stratum_base(divisor, mask)?;
            let m_base = match &loc {
                Some(l) => m.base_change(&l.include)?,
                None => m.base_change(&RingMorphism::identity(&base))?,
            };
            let tower = stratum_tower(divisor, mask, level)?;
            strata.push(StratumModule::Tower(module_to_tower(&m_base, &tower)?));
        }
    }
    let mut comparisons = BTreeMap::new();
    for a in subsets(n) {
        for b in subsets(n) {
            if a != b && mask_contains(b, a) {
                let model = pair_model(divisor, a, b, level)?;
                comparisons.insert((a, b), model.identity_matrix(m.gens));
            }
        }
    }
    Ok(DescentDatum {
        divisor: divisor.clone(),
        level,
        strata,
        comparisons,
        canonical: true,
        cocycle_status: None,
    })
}

impl DescentDatum {
    /// Structural well-formedness: stratum count, tower bases and depths,
    /// comparison presence and shapes. Mathematical conditions (cocycle,
    /// glueability) are checked by [`check_cocycle`] and [`glue`].
    pub fn validate(&self) -> Result<()> {
        let n = self.divisor.n();
        if self.strata.len() != (1usize << n) {
            return Err(CoreError::ShapeMismatch(format!(
                "divisor with {} components needs {} strata, got {}",
                n,
                1usize << n,
                self.strata.len()
            )));
        }
        for mask in subsets(n) {
            let label = mask_label(mask, n);
            match (&self.strata[mask as usize], mask) {
                (StratumModule::Open(m), 0) => {
                    let loc = open_stratum_localization(&self.divisor)?;
                    if m.ring != loc.ring {
                        return Err(CoreError::RingMismatch(format!(
                            "open stratum module lives over the wrong ring (want {})",
                            loc.ring.describe()
                        )));
                    }
                }
                (StratumModule::Tower(t), mask) if mask != 0 => {
                    let (base, _) = stratum_base(&self.divisor, mask)?;
                    if t.tower.base != base {
                        return Err(CoreError::RingMismatch(format!(
                            "tower on {label} has the wrong base ring"
                        )));
                    }
                    if t.depth() != self.level {
                        return Err(CoreError::ShapeMismatch(format!(
                            "tower on {label} has depth {} but the datum level is {}",
                            t.depth(),
                            self.level
                        )));
                    }
                    let g = t.level(1).gens;
                    for l in 2..=t.depth() {
                        if t.level(l).gens != g {
                            return Err(CoreError::ShapeMismatch(format!(
                                "tower on {label} changes generator count across levels"
                            )));
                        }
                    }
                }
                (StratumModule::Open(_), _) => {
                    return Err(CoreError::ShapeMismatch(format!(
                        "stratum {label} must carry a tower, not a plain module"
                    )));
                }
                (StratumModule::Tower(_), _) => {
                    return Err(CoreError::ShapeMismatch(
                        "the open stratum must carry a plain module, not a tower".into(),
                    ));
                }
            }
        }
        for a in subsets(n) {
            for b in subsets(n) {
                if a == b || !mask_contains(b, a) {
                    continue;
                }
                let Some(m) = self.comparisons.get(&(a, b)) else {
                    return Err(CoreError::ShapeMismatch(format!(
                        "missing comparison for {} ⊂ {}",
                        mask_label(a, n),
                        mask_label(b, n)
                    )));
                };
                if m.rows != self.strata[b as usize].gens()
                    || m.cols.len() != self.strata[a as usize].gens()
                {
                    return Err(CoreError::ShapeMismatch(format!(
                        "comparison for {} ⊂ {} has shape {}×{}, want {}×{}",
                        mask_label(a, n),
                        mask_label(b, n),
                        m.rows,
                        m.cols.len(),
                        self.strata[b as usize].gens(),
                        self.strata[a as usize].gens()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Run [`check_cocycle`] and remember its verdict in
    /// [`DescentDatum::cocycle_status`].
    pub fn refresh_cocycle_status(&mut self) -> Result<CocycleReport> {
        let report = check_cocycle(self)?;
        self.cocycle_status = Some(report.ok);
        Ok(report)
    }
}

// ---------------------------------------------------------------------------
// cocycle check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CocycleReport {
    pub ok: bool,
    /// Labels of the first failing triple of strata, shallow to deep.
    pub witness: Option<(String, String, String)>,
    pub triples_checked: usize,
}

/// Compatibility of the comparisons on every strict triple a ⊂ b ⊂ c: the
/// two routes from a to c must agree over the chain model of [a, b, c] up to
/// the precision that survives pole alignment. One component has no strict
/// triples, so the check is vacuously true there.
pub fn check_cocycle(d: &DescentDatum) -> Result<CocycleReport> {
    d.validate()?;
    let n = d.divisor.n();
    let mut triples = 0;
    for a in subsets(n) {
        for b in subsets(n) {
            if a == b || !mask_contains(b, a) {
                continue;
            }
            for c in subsets(n) {
                if b == c || !mask_contains(c, b) {
                    continue;
                }
                triples += 1;
                let triple = chain_model(&d.divisor, &Chain(vec![a, b, c]), d.level)?;
                let push = |x: Mask, y: Mask| -> Result<ChainMatrix> {
                    let pm = pair_model(&d.divisor, x, y, d.level)?;
                    let map = crate::chainring::chain_map(&pm, &triple)?;
                    Ok(map.apply_matrix(&d.comparisons[&(x, y)]))
                };
                let ab = push(a, b)?;
                let bc = push(b, c)?;
                let ac = push(a, c)?;
                let composite = triple.mat_mul(&bc, &ab);
                let (ok, _digits) = triple.mat_eq_at_precision(&composite, &ac);
                if !ok {
                    return Ok(CocycleReport {
                        ok: false,
                        witness: Some((
                            mask_label(a, n),
                            mask_label(b, n),
                            mask_label(c, n),
                        )),
                        triples_checked: triples,
                    });
                }
            }
        }
    }
    Ok(CocycleReport {
        ok: true,
        witness: None,
        triples_checked: triples,
    })
}

// ---------------------------------------------------------------------------
// glue report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct StratumVerdict {
    pub stratum: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct GlueReport {
    /// The glued module over the divisor's ring; present exactly when every
    /// verification below passed.
    pub module: Option<PresentedModule>,
    /// True when the result is presented on the same generator frame as the
    /// open-stratum module (always the case for canonical data), so the
    /// generator-to-generator map against a candidate original is meaningful.
    pub unit_framed: bool,
    pub verdicts: Vec<StratumVerdict>,
    /// Truncation level of the datum.
    pub level: u32,
    /// Pole bound that succeeded.
    pub pole_bound: u32,
    /// Number of pole-bound escalations across all gluing steps.
    pub escalations: u32,
    /// (stratum label, level at which its tower presentation stabilized).
    pub stabilization: Vec<(String, u32)>,
    pub cocycle_ok: bool,
    pub counit_ok: bool,
    pub unit_ok: bool,
    pub surjectivity_ok: bool,
}

// ---------------------------------------------------------------------------
// single-component glue
// ---------------------------------------------------------------------------

struct OneComponentInput<'a> {
    base: &'a PresentedRing,
    /// The component being glued across, in base coordinates.
    f: &'a Polynomial,
    /// Module over localize(base, f).
    open: &'a PresentedModule,
    /// Tower over `base` along `f`.
    tower: &'a TowerModule,
    /// Comparison columns over base coordinates, entries known mod f^level.
    rho_cols: Vec<VPoly>,
    rho_pole: u32,
    level: u32,
    canonical: bool,
    label_open: String,
    label_closed: String,
}

struct OneComponentOutcome {
    module: PresentedModule,
    unit_framed: bool,
    pole_bound: u32,
    escalations: u32,
    stabilized_at: u32,
    verdicts: Vec<StratumVerdict>,
}

/// Replace the last variable (the inversion variable) by zero and drop it.
fn shrink_to_base(v: &VPoly, base: &PresentedRing) -> VPoly {
    let field = base.field();
    let nvb = base.nvars();
    let mut images: Vec<Polynomial> = (0..nvb).map(|i| Polynomial::var(nvb, i, &field)).collect();
    images.push(Polynomial::zero(nvb));
    let comps: Vec<Polynomial> = (0..v.ncomps)
        .map(|c| base.nf(&v.component(c).substitute(&field, &images, nvb)))
        .collect();
    VPoly::from_components(&comps)
}

fn glue_one_component(inp: &OneComponentInput, prec: Precision) -> Result<OneComponentOutcome> {
    let base = inp.base;
    let level = inp.level;

    // the tower must admit a single presentation over the base ring
    let st = tower_stabilized_presentation(inp.tower)?;
    let dhat: Vec<VPoly> = st.module.relations.clone();
    let h = st.module.gens;
    let g = inp.open.gens;

    let loc = localize(base, inp.f)?;
    let lring = loc.ring.clone();
    if inp.open.ring != lring {
        return Err(CoreError::RingMismatch(format!(
            "open-side module lives over {}, expected {}",
            inp.open.ring.describe(),
            lring.describe()
        )));
    }
    let nvl = lring.nvars();

    // relations of the hat side over L
    let dhat_l: Vec<VPoly> = dhat
        .iter()
        .map(|c| c.map_components(|p| lring.nf(&p.extended(nvl))))
        .filter(|c| !c.is_zero())
        .collect();
    // comparison columns over L
    let rho_l: Vec<VPoly> = inp
        .rho_cols
        .iter()
        .map(|c| c.map_components(|p| lring.nf(&p.extended(nvl))))
        .collect();

    // the chain model of [∅, {f}] over this base, for precision-aware checks
    let divisor1 = DivisorSpec::new(base.clone(), vec![inp.f.clone()])?;
    let model = pair_model(&divisor1, 0, 1, level)?;

    let mut escalations = 0u32;
    let mut last_fail = String::new();
    let mut k = 1u32;
    while k <= prec.cap && inp.rho_pole + k < level {
        match attempt_pole_bound(inp, &loc, &model, &st.module, &dhat_l, &rho_l, g, h, k) {
            Ok(mut out) => {
                out.escalations = escalations;
                out.stabilized_at = st.level;
                return Ok(out);
            }
            Err(detail) => {
                last_fail = detail;
                escalations += 1;
                k *= 2;
            }
        }
    }
    if last_fail.is_empty() {
        last_fail = format!(
            "no pole bound leaves an honest digit at level {level} (comparison pole {})",
            inp.rho_pole
        );
    }
    Err(CoreError::PrecisionExhausted(format!(
        "gluing across {} on {} / {}: {}",
        base.display_poly(inp.f),
        inp.label_open,
        inp.label_closed,
        last_fail
    )))
}

/// One attempt at a fixed pole bound `k`. Returns the verified outcome, or a
/// human-readable reason to escalate.
#[allow(clippy::too_many_arguments)]
fn attempt_pole_bound(
    inp: &OneComponentInput,
    loc: &Localization,
    model: &ChainModel,
    stabilized: &PresentedModule,
    dhat_l: &[VPoly],
    rho_l: &[VPoly],
    g: usize,
    h: usize,
    k: u32,
) -> std::result::Result<OneComponentOutcome, String> {
    let base = inp.base;
    let field = base.field();
    let lring = &loc.ring;
    let nvl = lring.nvars();
    let nvb = base.nvars();
    let soft = |e: CoreError| format!("pole bound {k}: {e}");

    // --- solution pairs over L: P₀·ũ − f^{N+k}·ṽ ∈ im(D̂) --------------------
    let f_l = inp.f.extended(nvl);
    let f_shift = f_l.pow(&field, inp.rho_pole + k);
    let target = PresentedModule::new(lring.clone(), h, dhat_l.to_vec()).map_err(soft)?;
    let mut cols: Vec<VPoly> = Vec::with_capacity(g + h);
    for j in 0..g {
        cols.push(rho_l[j].clone());
    }
    for j in 0..h {
        cols.push(VPoly::from_poly(h, j, &f_shift).neg(&field));
    }
    let phi = ModuleMap::new(PresentedModule::free(lring.clone(), g + h), target, cols)
        .map_err(soft)?;
    let (_, incl) = phi.kernel().map_err(soft)?;

    // --- contract to the base-ring lattice ---------------------------------
    let contracted = contract_submodule(&incl.cols, lring.relations(), &[loc.tvar], &field);
    let lattice: Vec<VPoly> = contracted
        .iter()
        .map(|v| shrink_to_base(v, base))
        .filter(|v| !v.is_zero())
        .collect();

    // --- relations: open-side relations visible on the lattice, hat-side
    // relations on their own block ------------------------------------------
    let rel_open: Vec<VPoly> = if inp.open.relations.is_empty() {
        Vec::new()
    } else {
        contract_submodule(&inp.open.relations, lring.relations(), &[loc.tvar], &field)
            .iter()
            .map(|v| shrink_to_base(v, base))
            .filter(|v| !v.is_zero())
            .collect()
    };
    let mut rel: Vec<VPoly> = rel_open.iter().map(|v| v.widened(g + h, 0)).collect();
    rel.extend(
        stabilized
            .relations
            .iter()
            .map(|v| v.widened(g + h, g))
            .filter(|v| !v.is_zero()),
    );

    let ambient = PresentedModule::new(base.clone(), g + h, rel.clone()).map_err(soft)?;
    let mu_raw = ModuleMap::new(
        PresentedModule::free(base.clone(), lattice.len()),
        ambient,
        lattice.clone(),
    )
    .map_err(soft)?;
    let (_, raw_rel_incl) = mu_raw.kernel().map_err(soft)?;
    let n_raw = PresentedModule::new(base.clone(), lattice.len(), raw_rel_incl.cols.clone())
        .map_err(soft)?;

    // --- choose the presentation and its pair coordinates -------------------
    // pairs[j] = (u-part in R^g, v-part in R^h) of the j-th generator
    let (out, pairs, unit_framed) = if inp.canonical && g == h {
        // re-present on the canonical frame: generator j ↔ (f^k·e_j, e_j)
        let mut span_gens = lattice.clone();
        span_gens.extend(rel.iter().cloned());
        let span = SpanBasis::new(
            &field,
            base.order(),
            nvb,
            g + h,
            &span_gens,
            base.relations(),
        );
        let f_k = inp.f.pow(&field, k);
        let mut mu_cols = Vec::with_capacity(g);
        let mut pairs = Vec::with_capacity(g);
        for j in 0..g {
            let pair = VPoly::from_poly(g + h, j, &f_k)
                .add(&field, &VPoly::unit(g + h, nvb, g + j, &field));
            let Some(coeffs) = span.lift(&pair) else {
                return Err(format!(
                    "pole bound {k}: canonical pair {} is not in the glued lattice",
                    j + 1
                ));
            };
            let lat_coeffs: Vec<Polynomial> = coeffs[..lattice.len()].to_vec();
            mu_cols.push(VPoly::from_components(&lat_coeffs));
            pairs.push((
                VPoly::from_poly(g, j, &f_k),
                VPoly::unit(h, nvb, j, &field),
            ));
        }
        let mu = ModuleMap::new(
            PresentedModule::free(base.clone(), g),
            n_raw.clone(),
            mu_cols,
        )
        .map_err(soft)?;
        let (coker, _) = mu.cokernel().map_err(soft)?;
        if !coker.is_zero_module() {
            return Err(format!(
                "pole bound {k}: canonical pairs do not generate the glued lattice"
            ));
        }
        let (_, ker_incl) = mu.kernel().map_err(soft)?;
        let framed = PresentedModule::new(base.clone(), g, ker_incl.cols.clone()).map_err(soft)?;
        (framed, pairs, true)
    } else {
        let pairs: Vec<(VPoly, VPoly)> = lattice
            .iter()
            .map(|v| (v.restricted(0, g), v.restricted(g, g + h)))
            .collect();
        (n_raw.clone(), pairs, false)
    };

    // --- counit on the open stratum: out ⊗ L ≅ open --------------------------
    let t_k = Polynomial::var(nvl, loc.tvar, &field).pow(&field, k);
    let cols_open: Vec<VPoly> = pairs
        .iter()
        .map(|(u, _)| {
            u.map_components(|p| lring.nf(&p.extended(nvl)))
                .mul_poly(&field, &t_k)
                .map_components(|p| lring.nf(p))
        })
        .collect();
    let out_l = out.base_change(&loc.include).map_err(soft)?;
    let counit_open = ModuleMap::new(out_l, inp.open.clone(), cols_open)
        .map_err(|e| format!("pole bound {k}: open counit is not well defined ({e})"))?;
    if !counit_open.is_isomorphism().map_err(soft)? {
        return Err(format!(
            "pole bound {k}: glued module does not restrict to the open-stratum module"
        ));
    }

    // --- counit on the tower: out ⊗ R_l ≅ M_l for every level ----------------
    for l in 1..=inp.tower.depth() {
        let proj = inp.tower.tower.projection(l);
        let out_level = out.base_change(proj).map_err(soft)?;
        let target = inp.tower.level(l).clone();
        let ring_l = target.ring.clone();
        let cols_v: Vec<VPoly> = pairs
            .iter()
            .map(|(_, v)| v.map_components(|p| ring_l.nf(p)))
            .collect();
        let counit_level = ModuleMap::new(out_level, target, cols_v)
            .map_err(|e| format!("pole bound {k}: level-{l} counit is not well defined ({e})"))?;
        if !counit_level.is_isomorphism().map_err(soft)? {
            return Err(format!(
                "pole bound {k}: glued module does not reproduce tower level {l}"
            ));
        }
    }

    // --- the comparison triangle commutes at the working precision ----------
    let (triangle_ok, triangle_digits) =
        triangle_commutes(inp, model, stabilized, &pairs, g, h, k)?;
    if !triangle_ok {
        return Err(format!(
            "pole bound {k}: comparison triangle does not commute at the working precision"
        ));
    }

    // --- the two-sided difference map covers every polar class ---------------
    if let Some((j, p)) = difference_gap(inp, model, stabilized, h, k) {
        return Err(format!(
            "pole bound {k}: class e_{}/f^{p} is not covered by the two-sided difference map",
            j + 1
        ));
    }

    let verdicts = vec![
        StratumVerdict {
            stratum: inp.label_open.clone(),
            ok: true,
            detail: format!(
                "restriction to the open stratum is an isomorphism (pole bound {k})"
            ),
        },
        StratumVerdict {
            stratum: inp.label_closed.clone(),
            ok: true,
            detail: format!(
                "tower reproduced at all {} levels; triangle commutes with {} honest digit(s)",
                inp.tower.depth(),
                triangle_digits
            ),
        },
    ];
    Ok(OneComponentOutcome {
        module: out,
        unit_framed,
        pole_bound: k,
        escalations: 0,
        stabilized_at: 0,
        verdicts,
    })
}

/// ρ ∘ (open counit) ≡ (tower counit) over the pair model, modulo the image
/// of the hat-side relations, with at least one honest truncation digit.
fn triangle_commutes(
    inp: &OneComponentInput,
    model: &ChainModel,
    stabilized: &PresentedModule,
    pairs: &[(VPoly, VPoly)],
    g: usize,
    h: usize,
    k: u32,
) -> std::result::Result<(bool, u32), String> {
    if h == 0 || pairs.is_empty() {
        return Ok((true, inp.level));
    }
    let ring = &model.ring;
    let field = ring.field();
    let nv = ring.nvars();
    let pole = inp.rho_pole + k;
    if pole >= inp.level {
        return Ok((false, 0));
    }
    // lhs column for generator c: Σ_i ρ_i · u_c[i]  (pole N+k after clearing)
    // rhs column: f^{N+k} · v_c                      (pole 0, cleared to match)
    let f_m = model.component_in_model(0);
    let f_clear = f_m.pow(&field, pole);
    // span of the hat-side relations over the model ring, for congruence
    let stab_rel: Vec<VPoly> = stabilized
        .relations
        .iter()
        .map(|c| c.map_components(|p| ring.nf(&p.extended(ring.nvars()))))
        .filter(|c| !c.is_zero())
        .collect();
    let span = SpanBasis::new(&field, ring.order(), nv, h, &stab_rel, ring.relations());
    let mut worst_digits = inp.level.saturating_sub(pole);
    for (u, v) in pairs {
        let mut lhs = VPoly::zero(h, nv);
        for i in 0..g {
            let ui = ring.nf(&u.component(i));
            if !ui.is_zero() {
                lhs = lhs.add(&field, &inp.rho_cols[i].map_components(|p| ring.nf(p)).mul_poly(&field, &ui));
            }
        }
        let rhs = v
            .map_components(|p| ring.nf(p))
            .mul_poly(&field, &f_clear)
            .map_components(|p| ring.nf(p));
        let mut diff = lhs.sub(&field, &rhs).map_components(|p| ring.nf(p));
        // allow extra pole slack as long as one digit survives
        let mut extra = 0u32;
        loop {
            if span.contains(&diff) {
                break;
            }
            extra += 1;
            if pole + extra >= inp.level {
                return Ok((false, 0));
            }
            diff = diff
                .mul_poly(&field, &f_m)
                .map_components(|p| ring.nf(p));
        }
        worst_digits = worst_digits.min(inp.level - pole - extra);
    }
    Ok((true, worst_digits))
}

/// Search for a polar class f^{-p}·e_j (p ≤ k) that the difference map
/// misses: no pole budget q makes f^{N+q-p}·e_j a combination of the
/// comparison columns, the pole-free block f^{N+q}·e_i and the hat-side
/// relations over the model ring. Returns the first gap, if any.
fn difference_gap(
    inp: &OneComponentInput,
    model: &ChainModel,
    stabilized: &PresentedModule,
    h: usize,
    k: u32,
) -> Option<(usize, u32)> {
    if h == 0 {
        return None;
    }
    let ring = &model.ring;
    let field = ring.field();
    let nv = ring.nvars();
    let f_m = model.component_in_model(0);
    let rho_m: Vec<VPoly> = inp
        .rho_cols
        .iter()
        .map(|c| c.map_components(|p| ring.nf(p)))
        .collect();
    let dhat_m: Vec<VPoly> = stabilized
        .relations
        .iter()
        .map(|c| c.map_components(|p| ring.nf(&p.extended(ring.nvars()))))
        .filter(|c| !c.is_zero())
        .collect();
    for p in 1..=k {
        for j in 0..h {
            let mut covered = false;
            for q in p..=(p + k + 4) {
                let shift = inp.rho_pole + q - p;
                if shift >= inp.level {
                    break; // the class would be trivially (and meaninglessly) zero
                }
                let target = VPoly::from_poly(h, j, &ring.nf(&f_m.pow(&field, shift)));
                if target.is_zero() {
                    break;
                }
                let mut gens = rho_m.clone();
                let f_block = ring.nf(&f_m.pow(&field, inp.rho_pole + q));
                if !f_block.is_zero() {
                    for i in 0..h {
                        gens.push(VPoly::from_poly(h, i, &f_block));
                    }
                }
                gens.extend(dhat_m.iter().cloned());
                let span = SpanBasis::new(&field, ring.order(), nv, h, &gens, ring.relations());
                if span.contains(&target) {
                    covered = true;
                    break;
                }
            }
            if !covered {
                return Some((j, p));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// top-level glue
// ---------------------------------------------------------------------------

/// Glue the datum into a module over the divisor's ring. The cocycle
/// condition is checked first and failures abort with
/// [`CoreError::CocycleInvalid`]; verification failures escalate the pole
/// bound and end in [`CoreError::PrecisionExhausted`] when the cap is hit;
/// towers whose presentations never settle end in
/// [`CoreError::NoStabilization`].
pub fn glue(d: &DescentDatum, prec: Precision) -> Result<GlueReport> {
    d.validate()?;
    let cc = check_cocycle(d)?;
    if !cc.ok {
        let (a, b, c) = cc.witness.unwrap();
        return Err(CoreError::CocycleInvalid(a, b, c));
    }
    if d.divisor.n() == 1 {
        glue_one(d, prec)
    } else {
        glue_reduce(d, prec)
    }
}

fn glue_one(d: &DescentDatum, prec: Precision) -> Result<GlueReport> {
    let n = d.divisor.n();
    let StratumModule::Open(open) = &d.strata[0] else {
        unreachable!("validated")
    };
    let StratumModule::Tower(tower) = &d.strata[1] else {
        unreachable!("validated")
    };
    let rho = &d.comparisons[&(0, 1)];
    let inp = OneComponentInput {
        base: &d.divisor.ring,
        f: &d.divisor.components[0],
        open,
        tower,
        rho_cols: rho.cols.clone(),
        rho_pole: rho.poles[0],
        level: d.level,
        canonical: d.canonical,
        label_open: mask_label(0, n),
        label_closed: mask_label(1, n),
    };
    let out = glue_one_component(&inp, prec)?;
    Ok(GlueReport {
        module: Some(out.module),
        unit_framed: out.unit_framed,
        verdicts: out.verdicts,
        level: d.level,
        pole_bound: out.pole_bound,
        escalations: out.escalations,
        stabilization: vec![(mask_label(1, n), out.stabilized_at)],
        cocycle_ok: true,
        counit_ok: true,
        unit_ok: true,
        surjectivity_ok: true,
    })
}

/// Reduce across the last component: each stratum of the remaining divisor
/// receives the glue of its two old strata (the one without and the one with
/// the last component), honestly on the open stratum and levelwise on the
/// truncated ones. The reduced datum is canonical on the same generator
/// frame, and recursion finishes the job.
fn glue_reduce(d: &DescentDatum, prec: Precision) -> Result<GlueReport> {
    if !d.canonical {
        return Err(CoreError::Invalid(
            "gluing across several components needs comparisons on a shared canonical frame"
                .into(),
        ));
    }
    let n = d.divisor.n();
    let r = &d.divisor.ring;
    let field = r.field();
    let last = n - 1;
    let last_mask: Mask = 1 << last;
    let f_last = &d.divisor.components[last as usize];
    let rest: Vec<Polynomial> = d.divisor.components[..last as usize].to_vec();
    let divisor_rest = DivisorSpec::new(r.clone(), rest.clone())?;

    let mut verdicts: Vec<StratumVerdict> = Vec::new();
    let mut stabilization: Vec<(String, u32)> = Vec::new();
    let mut escalations = 0u32;
    let mut pole_bound = 0u32;
    let mut strata2: Vec<StratumModule> = Vec::with_capacity(1 << (n - 1));
    let mut frame_gens: Option<usize> = None;

    for tmask in subsets(n - 1) {
        let small = tmask;
        let big = tmask | last_mask;
        let rho = &d.comparisons[&(small, big)];
        let rho_pole = rho.poles[last as usize];
        if tmask == 0 {
            // honest glue over B = R[(f_1⋯f_{n-1})^{-1}]
            let locb = open_stratum_localization(&divisor_rest)?;
            let b = locb.ring.clone();
            let StratumModule::Open(m0) = &d.strata[0] else {
                unreachable!("validated")
            };
            // transport the open module from R[(f_1⋯f_n)^{-1}] to B[f_n^{-1}]
            let loc_all = open_stratum_localization(&d.divisor)?;
            let f_last_b = f_last.extended(b.nvars());
            let loc2 = localize(&b, &f_last_b)?;
            let mut images: Vec<Polynomial> =
                (0..r.nvars()).map(|i| loc2.ring.var(i)).collect();
            let t_outer = loc2.ring.var(locb.tvar);
            let t_inner = loc2.ring.var(loc2.tvar);
            images.push(t_outer.mul(&field, &t_inner));
            let psi = RingMorphism::new(loc_all.ring.clone(), loc2.ring.clone(), images)?;
            let m_open = m0.base_change(&psi)?;
            let StratumModule::Tower(tw) = &d.strata[big as usize] else {
                unreachable!("validated")
            };
            let inp = OneComponentInput {
                base: &b,
                f: &f_last_b,
                open: &m_open,
                tower: tw,
                rho_cols: rho.cols.clone(),
                rho_pole,
                level: d.level,
                canonical: true,
                label_open: mask_label(small, n),
                label_closed: mask_label(big, n),
            };
            let out = glue_one_component(&inp, prec)?;
            verdicts.extend(out.verdicts);
            stabilization.push((mask_label(big, n), out.stabilized_at));
            escalations += out.escalations;
            pole_bound = pole_bound.max(out.pole_bound);
            frame_gens = Some(out.module.gens);
            strata2.push(StratumModule::Open(out.module));
        } else {
            // levelwise glue over each truncation of the remaining components
            let (bprime, _) = stratum_base(&divisor_rest, small)?;
            let small_comps: Vec<Polynomial> = (0..(n - 1))
                .filter(|i| small & (1 << i) != 0)
                .map(|i| d.divisor.components[i as usize].extended(bprime.nvars()))
                .collect();
            let rest_tower = component_tower(&bprime, &small_comps, d.level)?;
            let StratumModule::Tower(tw_small) = &d.strata[small as usize] else {
                unreachable!("validated")
            };
            let StratumModule::Tower(tw_big) = &d.strata[big as usize] else {
                unreachable!("validated")
            };
            let mut glued_levels: Vec<PresentedModule> = Vec::with_capacity(d.level as usize);
            for a in 1..=d.level {
                let b_a = rest_tower.level(a).clone();
                let f_last_a = f_last.extended(b_a.nvars());
                let loc_a = localize(&b_a, &f_last_a)?;
                // open side at this level: the small stratum's level-a module,
                // transported into localize(B_a, f_n)
                let small_level = tw_small.level(a);
                let mut images: Vec<Polynomial> =
                    (0..r.nvars()).map(|i| loc_a.ring.var(i)).collect();
                images.push(loc_a.ring.var(loc_a.tvar));
                let psi_a = RingMorphism::new(
                    small_level.ring.clone(),
                    loc_a.ring.clone(),
                    images,
                )?;
                let m_open_a = small_level.base_change(&psi_a)?;
                // hat side: bi-truncations of the big stratum re-expanded from
                // its diagonal levels
                let inner_tower = component_tower(&b_a, &[f_last_a.clone()], d.level)?;
                let gens_big = tw_big.level(1).gens;
                let mut levels_ab: Vec<PresentedModule> = Vec::with_capacity(d.level as usize);
                for blev in 1..=d.level {
                    let m = a.max(blev);
                    let diag = tw_big.level(m);
                    let to_ab = RingMorphism::new(
                        diag.ring.clone(),
                        inner_tower.level(blev).clone(),
                        (0..diag.ring.nvars())
                            .map(|i| inner_tower.level(blev).var(i))
                            .collect(),
                    )?;
                    levels_ab.push(diag.base_change(&to_ab)?);
                }
                let mut transitions = Vec::with_capacity(d.level as usize - 1);
                for blev in 1..d.level {
                    let upper = &levels_ab[blev as usize];
                    let lower = &levels_ab[(blev - 1) as usize];
                    let source = upper.base_change(inner_tower.transition(blev + 1))?;
                    let cols = (0..gens_big).map(|i| lower.generator(i)).collect();
                    transitions.push(ModuleMap::new(source, lower.clone(), cols)?);
                }
                let hat_tower = TowerModule::new(inner_tower, levels_ab, transitions)?;
                let rho_cols_a: Vec<VPoly> = rho
                    .cols
                    .iter()
                    .map(|c| c.map_components(|p| b_a.nf(&p.extended(b_a.nvars()))))
                    .collect();
                let inp = OneComponentInput {
                    base: &b_a,
                    f: &f_last_a,
                    open: &m_open_a,
                    tower: &hat_tower,
                    rho_cols: rho_cols_a,
                    rho_pole,
                    level: d.level,
                    canonical: true,
                    label_open: format!("{} (level {a})", mask_label(small, n)),
                    label_closed: format!("{} (level {a})", mask_label(big, n)),
                };
                let out = glue_one_component(&inp, prec)?;
                escalations += out.escalations;
                pole_bound = pole_bound.max(out.pole_bound);
                if a == d.level {
                    verdicts.extend(out.verdicts);
                    stabilization.push((mask_label(big, n), out.stabilized_at));
                }
                frame_gens = Some(out.module.gens);
                glued_levels.push(out.module);
            }
            // assemble the glued levels into the reduced stratum's tower
            let gens = glued_levels[0].gens;
            let mut transitions = Vec::with_capacity(d.level as usize - 1);
            for a in 1..d.level {
                let upper = &glued_levels[a as usize];
                let lower = &glued_levels[(a - 1) as usize];
                let source = upper.base_change(rest_tower.transition(a + 1))?;
                let cols = (0..gens).map(|i| lower.generator(i)).collect();
                transitions.push(
                    ModuleMap::new(source, lower.clone(), cols).map_err(|e| {
                        CoreError::PrecisionExhausted(format!(
                            "glued levels of {} do not form a tower: {e}",
                            mask_label(small, n)
                        ))
                    })?,
                );
            }
            strata2.push(StratumModule::Tower(TowerModule::new(
                rest_tower,
                glued_levels,
                transitions,
            )?));
        }
    }

    // the reduced datum keeps the canonical frame, with identity comparisons
    let g = frame_gens.unwrap_or(0);
    let mut comparisons2 = BTreeMap::new();
    for a in subsets(n - 1) {
        for b in subsets(n - 1) {
            if a != b && mask_contains(b, a) {
                let model = pair_model(&divisor_rest, a, b, d.level)?;
                comparisons2.insert((a, b), model.identity_matrix(g));
            }
        }
    }
    let reduced = DescentDatum {
        divisor: divisor_rest,
        level: d.level,
        strata: strata2,
        comparisons: comparisons2,
        canonical: true,
        cocycle_status: None,
    };
    let mut rep = glue(&reduced, prec)?;
    let mut all_verdicts = verdicts;
    all_verdicts.extend(rep.verdicts);
    rep.verdicts = all_verdicts;
    let mut all_stab = stabilization;
    all_stab.extend(rep.stabilization);
    rep.stabilization = all_stab;
    rep.escalations += escalations;
    rep.pole_bound = rep.pole_bound.max(pole_bound);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// roundtrip
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RoundtripReport {
    /// Generator-to-generator comparison of the original against the glued
    /// module is an isomorphism.
    pub iso: bool,
    /// When both sides admit invariant factors (univariate over the
    /// rationals): whether they agree.
    pub invariants_match: Option<bool>,
    /// The truncation level that succeeded.
    pub level_used: u32,
    pub report: GlueReport,
}

/// Spread the module out along the divisor, glue it back, and compare.
/// Escalates the truncation level along the precision ladder until the
/// roundtrip verifies or the cap is exhausted.
pub fn verify_roundtrip(
    m: &PresentedModule,
    divisor: &DivisorSpec,
    prec: Precision,
) -> Result<RoundtripReport> {
    let mut last: Option<Result<RoundtripReport>> = None;
    for level in prec.ladder() {
        let datum = match datum_from_module(m, divisor, level) {
            Ok(d) => d,
            Err(e) => {
                last = Some(Err(e));
                continue;
            }
        };
        match glue(&datum, Precision::new(level, prec.cap)) {
            Ok(rep) => {
                let Some(glued) = rep.module.clone() else {
                    last = Some(Ok(RoundtripReport {
                        iso: false,
                        invariants_match: None,
                        level_used: level,
                        report: rep,
                    }));
                    continue;
                };
                let iso = if rep.unit_framed && glued.gens == m.gens {
                    let cols = (0..m.gens).map(|i| glued.generator(i)).collect();
                    match ModuleMap::new(m.clone(), glued.clone(), cols) {
                        Ok(um) => um.is_isomorphism()?,
                        Err(_) => false,
                    }
                } else {
                    false
                };
                let invariants_match = match (module_invariants(m), module_invariants(&glued)) {
                    (Ok(a), Ok(b)) => {
                        Some(a.free_rank == b.free_rank && a.invariant_factors == b.invariant_factors)
                    }
                    _ => None,
                };
                let report = RoundtripReport {
                    iso,
                    invariants_match,
                    level_used: level,
                    report: rep,
                };
                if iso && invariants_match != Some(false) {
                    return Ok(report);
                }
                last = Some(Ok(report));
            }
            Err(
                e @ (CoreError::PrecisionExhausted(_) | CoreError::NoStabilization { .. }),
            ) => {
                last = Some(Err(e));
            }
            Err(e) => return Err(e),
        }
    }
    last.unwrap_or_else(|| {
        Err(CoreError::PrecisionExhausted(
            "no truncation level was attempted".into(),
        ))
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
