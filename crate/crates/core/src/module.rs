//! Finitely presented modules M = coker(A: R^s → R^k) over a presented ring,
//! maps between them, and the kernel/cokernel/base-change toolkit.
//!
//! Elements of M are vectors in R^k; two vectors represent the same element
//! iff their difference lies in the span of the relation columns (ring
//! relations folded in). All module-level verdicts reduce to span membership.

use crate::error::{CoreError, Result};
use crate::groebner::{SpanBasis, VPoly};
use crate::morphism::RingMorphism;
use crate::poly::Polynomial;
use crate::ring::PresentedRing;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone)]
pub struct PresentedModule {
    pub ring: PresentedRing,
    pub gens: usize,
    /// Relation columns; each has `gens` components.
    pub relations: Vec<VPoly>,
    span: Arc<OnceLock<SpanBasis>>,
}

impl PresentedModule {
    pub fn new(ring: PresentedRing, gens: usize, relations: Vec<VPoly>) -> Result<Self> {
        for r in &relations {
            if r.ncomps != gens || r.nvars != ring.nvars() {
                return Err(CoreError::ShapeMismatch(format!(
                    "relation column has shape {}x{}, module needs {}x{}",
                    r.ncomps,
                    r.nvars,
                    gens,
                    ring.nvars()
                )));
            }
        }
        Ok(PresentedModule {
            ring,
            gens,
            relations,
            span: Arc::new(OnceLock::new()),
        })
    }

    pub fn free(ring: PresentedRing, rank: usize) -> Self {
        PresentedModule {
            ring,
            gens: rank,
            relations: Vec::new(),
            span: Arc::new(OnceLock::new()),
        }
    }

    /// Cyclic module R/(ideal gens) as a module with one generator.
    pub fn cyclic(ring: PresentedRing, ideal: &[Polynomial]) -> Result<Self> {
        let rels = ideal
            .iter()
            .map(|p| VPoly::from_poly(1, 0, p))
            .collect();
        PresentedModule::new(ring, 1, rels)
    }

    /// Span basis of the relation columns (cached).
    pub fn relation_span(&self) -> &SpanBasis {
        self.span.get_or_init(|| {
            SpanBasis::new(
                &self.ring.field(),
                self.ring.order(),
                self.ring.nvars(),
                self.gens,
                &self.relations,
                self.ring.relations(),
            )
        })
    }

    /// Canonical representative of an element class.
    pub fn nf_elem(&self, v: &VPoly) -> VPoly {
        self.relation_span().remainder(v)
    }

    pub fn elem_is_zero(&self, v: &VPoly) -> bool {
        self.relation_span().contains(v)
    }

    pub fn elems_equal(&self, a: &VPoly, b: &VPoly) -> bool {
        self.elem_is_zero(&a.sub(&self.ring.field(), b))
    }

    pub fn generator(&self, i: usize) -> VPoly {
        VPoly::unit(self.gens, self.ring.nvars(), i, &self.ring.field())
    }

    /// True iff every generator class is zero, i.e. M = 0.
    pub fn is_zero_module(&self) -> bool {
        (0..self.gens).all(|i| self.elem_is_zero(&self.generator(i)))
    }

    /// Same ring, same generator count, and mutually contained relation spans.
    pub fn same_presentation_span(&self, other: &PresentedModule) -> bool {
        if self.ring != other.ring || self.gens != other.gens {
            return false;
        }
        self.relations.iter().all(|r| other.elem_is_zero(r))
            && other.relations.iter().all(|r| self.elem_is_zero(r))
    }

    pub fn direct_sum(&self, other: &PresentedModule) -> Result<PresentedModule> {
        if self.ring != other.ring {
            return Err(CoreError::RingMismatch(
                "direct sum of modules over different rings".into(),
            ));
        }
        let gens = self.gens + other.gens;
        let mut rels: Vec<VPoly> = self
            .relations
            .iter()
            .map(|r| r.widened(gens, 0))
            .collect();
        rels.extend(other.relations.iter().map(|r| r.widened(gens, self.gens)));
        PresentedModule::new(self.ring.clone(), gens, rels)
    }

    /// Extension of scalars along a ring morphism: same generators, relation
    /// columns mapped entrywise.
    pub fn base_change(&self, phi: &RingMorphism) -> Result<PresentedModule> {
        if phi.source != self.ring {
            return Err(CoreError::RingMismatch(
                "base change along a morphism from a different ring".into(),
            ));
        }
        let rels = self
            .relations
            .iter()
            .map(|r| {
                let cols: Vec<Polynomial> =
                    r.components().iter().map(|p| phi.apply(p)).collect();
                VPoly::from_components(&cols)
            })
            .filter(|r| !r.is_zero())
            .collect();
        PresentedModule::new(phi.target.clone(), self.gens, rels)
    }

    /// Drop zero and redundant relation columns, then eliminate generators
    /// that appear with an invertible constant coefficient in some relation.
    /// Returns (simplified, to_simpler, from_simpler); both maps are
    /// isomorphisms by construction.
    pub fn simplified_with_isos(&self) -> Result<(PresentedModule, ModuleMap, ModuleMap)> {
        let field = self.ring.field();
        // current presentation state; entries are normalized against the ring
        // relations only (reducing a column against the module span would
        // erase the column itself)
        let mut gens = self.gens;
        let mut rels: Vec<VPoly> = self
            .relations
            .iter()
            .map(|r| r.map_components(|p| self.ring.nf(p)))
            .filter(|r| !r.is_zero())
            .collect();
        // expression of each ORIGINAL generator in terms of CURRENT generators
        let mut old_in_new: Vec<VPoly> = (0..gens)
            .map(|i| VPoly::unit(gens, self.ring.nvars(), i, &field))
            .collect();
        // each CURRENT generator as an element of the ORIGINAL module
        let mut new_in_old: Vec<VPoly> = (0..gens)
            .map(|i| self.generator(i))
            .collect();

        // generator elimination: find a relation with a constant invertible entry
        loop {
            let mut hit: Option<(usize, usize)> = None;
            'scan: for (ri, r) in rels.iter().enumerate() {
                for i in 0..gens {
                    let entry = r.component(i);
                    if entry.is_constant() && !entry.is_zero() {
                        hit = Some((ri, i));
                        break 'scan;
                    }
                }
            }
            let Some((ri, i)) = hit else { break };
            let pivot = rels.remove(ri);
            let c = pivot.component(i).constant_part(self.ring.nvars(), &field);
            let cinv = field.inv(&c).expect("nonzero constant is invertible");
            // gen_i = -1/c * (pivot - c·e_i)
            let mut rest = pivot.clone();
            rest.terms.retain(|(j, _), _| *j != i);
            let gen_i_expr_full = rest.mul_scalar(&field, &field.neg(&cinv)); // in current gens incl. i (no i terms)
            // substitute into the other relations and drop row i
            let subst = |v: &VPoly| -> VPoly {
                let vi = v.component(i);
                let mut out = v.clone();
                out.terms.retain(|(j, _), _| *j != i);
                if !vi.is_zero() {
                    out = out.add(&field, &gen_i_expr_full.mul_poly(&field, &vi));
                }
                // re-index components above i downward
                let mut shifted = VPoly::zero(gens - 1, v.nvars);
                for ((j, m), cc) in out.terms {
                    let nj = if j > i { j - 1 } else { j };
                    shifted.terms.insert((nj, m), cc);
                }
                shifted
            };
            rels = rels.iter().map(&subst).filter(|r| !r.is_zero()).collect();
            old_in_new = old_in_new.iter().map(&subst).collect();
            new_in_old.remove(i);
            gens -= 1;
        }

        // prune redundant relation columns
        let mut kept: Vec<VPoly> = Vec::new();
        for (i, r) in rels.iter().enumerate() {
            let mut others: Vec<VPoly> = kept.clone();
            others.extend(rels[i + 1..].iter().cloned());
            let span = SpanBasis::new(
                &field,
                self.ring.order(),
                self.ring.nvars(),
                gens,
                &others,
                self.ring.relations(),
            );
            if !span.contains(r) {
                kept.push(r.clone());
            }
        }

        let simple = PresentedModule::new(self.ring.clone(), gens, kept)?;
        let to_simpler = ModuleMap::new(self.clone(), simple.clone(), old_in_new)?;
        let from_simpler = ModuleMap::new(simple.clone(), self.clone(), new_in_old)?;
        Ok((simple, to_simpler, from_simpler))
    }
}

/// R-linear map between presented modules over the same ring, given by the
/// images of the source generators.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: PresentedModule,
    pub target: PresentedModule,
    /// cols[i] = image of the i-th source generator (target.gens components).
    pub cols: Vec<VPoly>,
}

impl ModuleMap {
    pub fn new(
        source: PresentedModule,
        target: PresentedModule,
        cols: Vec<VPoly>,
    ) -> Result<Self> {
        if source.ring != target.ring {
            return Err(CoreError::RingMismatch(
                "module map between different rings".into(),
            ));
        }
        if cols.len() != source.gens {
            return Err(CoreError::ShapeMismatch(format!(
                "map needs {} columns, got {}",
                source.gens,
                cols.len()
            )));
        }
        for c in &cols {
            if c.ncomps != target.gens {
                return Err(CoreError::ShapeMismatch(
                    "map column has wrong component count".into(),
                ));
            }
        }
        let m = ModuleMap { source, target, cols };
        for r in &m.source.relations {
            let image = m.apply_vector(r);
            if !m.target.elem_is_zero(&image) {
                return Err(CoreError::Invalid(
                    "module map not well defined: a source relation has nonzero image".into(),
                ));
            }
        }
        Ok(m)
    }

    pub fn identity(m: &PresentedModule) -> Self {
        let cols = (0..m.gens).map(|i| m.generator(i)).collect();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            cols,
        }
    }

    pub fn zero(source: PresentedModule, target: PresentedModule) -> Result<Self> {
        let cols = (0..source.gens)
            .map(|_| VPoly::zero(target.gens, target.ring.nvars()))
            .collect();
        ModuleMap::new(source, target, cols)
    }

    /// Image of a raw source vector (no normal form).
    pub fn apply_vector(&self, v: &VPoly) -> VPoly {
        let field = self.target.ring.field();
        let mut out = VPoly::zero(self.target.gens, self.target.ring.nvars());
        for (i, col) in self.cols.iter().enumerate() {
            let vi = v.component(i);
            if !vi.is_zero() {
                out = out.add(&field, &col.mul_poly(&field, &vi));
            }
        }
        out
    }

    /// Image of an element, canonically represented.
    pub fn apply(&self, v: &VPoly) -> VPoly {
        self.target.nf_elem(&self.apply_vector(v))
    }

    /// other ∘ self.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if !self.target.same_presentation_span(&other.source) {
            return Err(CoreError::ShapeMismatch(
                "map composition target/source mismatch".into(),
            ));
        }
        let cols = self.cols.iter().map(|c| other.apply_vector(c)).collect();
        ModuleMap::new(self.source.clone(), other.target.clone(), cols)
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let field = self.target.ring.field();
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.add(&field, b))
            .collect();
        ModuleMap::new(self.source.clone(), self.target.clone(), cols)
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let field = self.target.ring.field();
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.sub(&field, b))
            .collect();
        ModuleMap::new(self.source.clone(), self.target.clone(), cols)
    }

    pub fn is_zero_map(&self) -> bool {
        self.cols.iter().all(|c| self.target.elem_is_zero(c))
    }

    /// Kernel as a presented module with its inclusion into the source.
    pub fn kernel(&self) -> Result<(PresentedModule, ModuleMap)> {
        let ring = &self.source.ring;
        let field = ring.field();
        let m = self.source.gens;
        // syzygies of [cols | target relations] in the target's ambient free module
        let mut gens: Vec<VPoly> = self.cols.clone();
        gens.extend(self.target.relations.iter().cloned());
        let span = SpanBasis::new(
            &field,
            ring.order(),
            ring.nvars(),
            self.target.gens,
            &gens,
            ring.relations(),
        );
        let raw: Vec<VPoly> = span
            .syzygies()
            .iter()
            .map(|s| s.restricted(0, m))
            .map(|v| self.source.nf_elem(&v))
            .filter(|v| !v.is_zero())
            .collect();
        // dedupe identical generators
        let mut kgens: Vec<VPoly> = Vec::new();
        for v in raw {
            if !kgens.contains(&v) {
                kgens.push(v);
            }
        }
        // relations among the kernel generators inside the source module
        let mut combined = kgens.clone();
        combined.extend(self.source.relations.iter().cloned());
        let kspan = SpanBasis::new(
            &field,
            ring.order(),
            ring.nvars(),
            m,
            &combined,
            ring.relations(),
        );
        let p = kgens.len();
        let krels: Vec<VPoly> = kspan
            .syzygies()
            .iter()
            .map(|s| s.restricted(0, p))
            .filter(|v| !v.is_zero())
            .collect();
        let kernel = PresentedModule::new(ring.clone(), p, krels)?;
        let incl = ModuleMap::new(kernel.clone(), self.source.clone(), kgens)?;
        Ok((kernel, incl))
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> Result<(PresentedModule, ModuleMap)> {
        let mut rels = self.target.relations.clone();
        rels.extend(self.cols.iter().cloned());
        let coker = PresentedModule::new(self.target.ring.clone(), self.target.gens, rels)?;
        let cols = (0..self.target.gens).map(|i| coker.generator(i)).collect();
        let proj = ModuleMap::new(self.target.clone(), coker.clone(), cols)?;
        Ok((coker, proj))
    }

    /// Surjective and injective: zero cokernel, and every kernel generator is
    /// already zero in the source.
    pub fn is_isomorphism(&self) -> Result<bool> {
        let (coker, _) = self.cokernel()?;
        if !coker.is_zero_module() {
            return Ok(false);
        }
        let (_, incl) = self.kernel()?;
        Ok(incl.cols.iter().all(|c| self.source.elem_is_zero(c)))
    }

    /// Preimage certificate: v ∈ target as a source element, if the map hits it.
    pub fn preimage(&self, v: &VPoly) -> Option<VPoly> {
        let ring = &self.source.ring;
        let field = ring.field();
        let mut gens: Vec<VPoly> = self.cols.clone();
        gens.extend(self.target.relations.iter().cloned());
        let span = SpanBasis::new(
            &field,
            ring.order(),
            ring.nvars(),
            self.target.gens,
            &gens,
            ring.relations(),
        );
        let lift = span.lift(v)?;
        Some(VPoly::from_components(&lift[..self.source.gens]))
    }

    /// Base change of the whole map along a ring morphism.
    pub fn base_change(&self, phi: &RingMorphism) -> Result<ModuleMap> {
        let src = self.source.base_change(phi)?;
        let tgt = self.target.base_change(phi)?;
        let cols = self
            .cols
            .iter()
            .map(|c| c.map_components(|p| phi.apply(p)))
            .collect();
        ModuleMap::new(src, tgt, cols)
    }
}
