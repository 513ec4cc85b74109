//! Finite models of the rings attached to descending flags of divisor strata.
//!
//! For a chain T_1 ⊊ … ⊊ T_m of component subsets, the attached ring
//! completes along the components in T_m, re-inverts those in T_m ∖ T_1, and
//! honestly inverts everything outside T_m. The finite model at level l is
//!
//!   C = R[(∏_{j∉T_m} f_j)^{-1}] / (f_i^l : i ∈ T_m)
//!
//! with elements carrying, per component, a pole exponent (for the
//! re-inverted, "Laurent" components) and a count of known f_i-digits (for
//! the completed components). Arithmetic aligns poles and takes the
//! pessimistic precision, exactly as for single-variable Laurent elements.

use crate::error::{CoreError, Result};
use crate::groebner::{SpanBasis, VPoly};
use crate::localize::localize;
use crate::poly::Polynomial;
use crate::ring::PresentedRing;
use crate::strata::{mask_contains, mask_elements, Chain, Mask};

#[derive(Debug, Clone)]
pub struct DivisorSpec {
    /// The ambient ring R (coordinates of the affine chart).
    pub ring: PresentedRing,
    /// The divisor components f_1, …, f_n.
    pub components: Vec<Polynomial>,
}

impl DivisorSpec {
    pub fn new(ring: PresentedRing, components: Vec<Polynomial>) -> Result<Self> {
        if components.is_empty() {
            return Err(CoreError::Invalid("divisor needs at least one component".into()));
        }
        for f in &components {
            if f.nvars != ring.nvars() {
                return Err(CoreError::Invalid(
                    "divisor component lives in the wrong ring".into(),
                ));
            }
            if ring.is_elem_zero(f) {
                return Err(CoreError::Invalid("divisor component is zero".into()));
            }
        }
        Ok(DivisorSpec { ring, components })
    }

    pub fn n(&self) -> u32 {
        self.components.len() as u32
    }

    pub fn full_mask(&self) -> Mask {
        (1u32 << self.n()) - 1
    }
}

/// The finite model of a chain's ring at one truncation level.
#[derive(Debug, Clone)]
pub struct ChainModel {
    pub divisor: DivisorSpec,
    pub chain: Chain,
    pub level: u32,
    /// The model ring C (shares the base coordinates; may add one inversion
    /// variable at the end).
    pub ring: PresentedRing,
    /// Index of the inversion variable in `ring`, if T_m is not everything.
    pub tvar: Option<usize>,
    /// Component indices completed (members of T_m).
    pub completed: Vec<u32>,
    /// Component indices re-inverted after completion (T_m ∖ T_1).
    pub laurent: Vec<u32>,
}

pub fn chain_model(divisor: &DivisorSpec, chain: &Chain, level: u32) -> Result<ChainModel> {
    if chain.is_empty() || !chain.is_valid() {
        return Err(CoreError::Invalid("chain must be nonempty and strictly increasing".into()));
    }
    if level == 0 {
        return Err(CoreError::Invalid("chain model level must be at least 1".into()));
    }
    let n = divisor.n();
    let t_max = *chain.0.last().unwrap();
    let t_first = chain.0[0];
    if t_max >= (1u32 << n) {
        return Err(CoreError::Invalid("chain subset exceeds component count".into()));
    }
    let completed = mask_elements(t_max, n);
    let laurent = mask_elements(t_max & !t_first, n);
    let field = divisor.ring.field();
    let outside: Vec<u32> = (0..n).filter(|i| t_max & (1 << i) == 0).collect();
    let (ring, tvar) = if outside.is_empty() {
        (divisor.ring.clone(), None)
    } else {
        let mut product = divisor.ring.one();
        for j in &outside {
            product = product.mul(&field, &divisor.components[*j as usize]);
        }
        let loc = localize(&divisor.ring, &product)?;
        (loc.ring, Some(loc.tvar))
    };
    let nv = ring.nvars();
    let trunc: Vec<Polynomial> = completed
        .iter()
        .map(|i| divisor.components[*i as usize].extended(nv).pow(&field, level))
        .collect();
    let ring = if trunc.is_empty() {
        ring
    } else {
        ring.with_extra_relations(&trunc)?
    };
    Ok(ChainModel {
        divisor: divisor.clone(),
        chain: chain.clone(),
        level,
        ring,
        tvar,
        completed,
        laurent,
    })
}

/// Element of a chain model: body / ∏_{i laurent} f_i^{poles[i]}, with the
/// body known modulo (f_i^{known[i]} : i completed). Both vectors are indexed
/// by component number; entries outside the relevant sets are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainElem {
    pub poles: Vec<u32>,
    pub body: Polynomial,
    pub known: Vec<u32>,
}

/// Matrix of chain elements with matrix-wide pole and precision vectors;
/// columns are vectors over the model ring.
#[derive(Debug, Clone)]
pub struct ChainMatrix {
    pub rows: usize,
    pub poles: Vec<u32>,
    pub known: Vec<u32>,
    pub cols: Vec<VPoly>,
}

impl ChainModel {
    fn nn(&self) -> usize {
        self.divisor.n() as usize
    }

    /// Component f_i as an element of the model ring's coordinates.
    pub fn component_in_model(&self, i: u32) -> Polynomial {
        self.divisor.components[i as usize].extended(self.ring.nvars())
    }

    pub fn full_known(&self) -> Vec<u32> {
        let mut k = vec![0; self.nn()];
        for &i in &self.completed {
            k[i as usize] = self.level;
        }
        k
    }

    pub fn elem(&self, body: &Polynomial, poles: Vec<u32>, known: Vec<u32>) -> ChainElem {
        debug_assert_eq!(poles.len(), self.nn());
        debug_assert_eq!(known.len(), self.nn());
        ChainElem {
            poles,
            body: self.ring.nf(body),
            known,
        }
    }

    /// Honest ring element: no poles, full precision.
    pub fn from_poly(&self, p: &Polynomial) -> ChainElem {
        let body = if p.nvars == self.ring.nvars() {
            p.clone()
        } else {
            p.extended(self.ring.nvars())
        };
        self.elem(&body, vec![0; self.nn()], self.full_known())
    }

    pub fn zero(&self) -> ChainElem {
        self.from_poly(&self.divisor.ring.zero())
    }

    pub fn one(&self) -> ChainElem {
        self.from_poly(&self.divisor.ring.one())
    }

    /// Rewrite with at least the given poles (same value).
    fn with_poles(&self, a: &ChainElem, poles: &[u32]) -> ChainElem {
        let field = self.ring.field();
        let mut body = a.body.clone();
        let mut known = a.known.clone();
        for &i in &self.laurent {
            let i = i as usize;
            assert!(poles[i] >= a.poles[i], "pole alignment can only increase");
            let d = poles[i] - a.poles[i];
            if d > 0 {
                body = body.mul(&field, &self.component_in_model(i as u32).pow(&field, d));
                known[i] = (known[i] + d).min(self.level);
            }
        }
        ChainElem {
            poles: poles.to_vec(),
            body: self.ring.nf(&body),
            known,
        }
    }

    fn join_poles(&self, a: &ChainElem, b: &ChainElem) -> Vec<u32> {
        let mut p = vec![0; self.nn()];
        for &i in &self.laurent {
            let i = i as usize;
            p[i] = a.poles[i].max(b.poles[i]);
        }
        p
    }

    fn meet_known(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut k = vec![0; self.nn()];
        for &i in &self.completed {
            let i = i as usize;
            k[i] = a[i].min(b[i]);
        }
        k
    }

    pub fn add(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        let poles = self.join_poles(a, b);
        let aa = self.with_poles(a, &poles);
        let bb = self.with_poles(b, &poles);
        let field = self.ring.field();
        ChainElem {
            poles,
            body: self.ring.nf(&aa.body.add(&field, &bb.body)),
            known: self.meet_known(&aa.known, &bb.known),
        }
    }

    pub fn neg(&self, a: &ChainElem) -> ChainElem {
        ChainElem {
            poles: a.poles.clone(),
            body: a.body.neg(&self.ring.field()),
            known: a.known.clone(),
        }
    }

    pub fn sub(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        let field = self.ring.field();
        let mut poles = vec![0; self.nn()];
        for &i in &self.laurent {
            let i = i as usize;
            poles[i] = a.poles[i] + b.poles[i];
        }
        ChainElem {
            poles,
            body: self.ring.nf(&a.body.mul(&field, &b.body)),
            known: self.meet_known(&a.known, &b.known),
        }
    }

    /// Membership of a body in the truncation ideal (f_i^{m_i} : i completed).
    fn body_vanishes_at(&self, body: &Polynomial, known: &[u32]) -> bool {
        if body.is_zero() {
            return true;
        }
        if self.completed.is_empty() {
            return false; // honest ring: zero means zero
        }
        let field = self.ring.field();
        let gens: Vec<VPoly> = self
            .completed
            .iter()
            .map(|&i| {
                VPoly::from_poly(
                    1,
                    0,
                    &self.component_in_model(i).pow(&field, known[i as usize]),
                )
            })
            .collect();
        let span = SpanBasis::new(
            &field,
            self.ring.order(),
            self.ring.nvars(),
            1,
            &gens,
            self.ring.relations(),
        );
        span.contains(&VPoly::from_poly(1, 0, body))
    }

    /// Equality at the jointly known precision; reports the absolute digits
    /// (known − pole, clamped at 0) per completed component that the
    /// comparison actually used.
    pub fn eq_at_precision(&self, a: &ChainElem, b: &ChainElem) -> (bool, Vec<u32>) {
        let d = self.sub(a, b);
        let mut digits = vec![0; self.nn()];
        for &i in &self.completed {
            let i = i as usize;
            digits[i] = d.known[i].saturating_sub(d.poles[i]);
        }
        (self.body_vanishes_at(&d.body, &d.known), digits)
    }

    pub fn display(&self, a: &ChainElem) -> String {
        let mut s = self.ring.display_poly(&a.body);
        let pole_parts: Vec<String> = self
            .laurent
            .iter()
            .filter(|&&i| a.poles[i as usize] > 0)
            .map(|&i| {
                format!(
                    "{}^{}",
                    self.divisor.ring.display_poly(&self.divisor.components[i as usize]),
                    a.poles[i as usize]
                )
            })
            .collect();
        if !pole_parts.is_empty() {
            s = format!("({s})/({})", pole_parts.join("*"));
        }
        s
    }

    // ----- matrices -----

    pub fn matrix_from_cols(&self, rows: usize, cols: Vec<VPoly>) -> ChainMatrix {
        let cols = cols
            .into_iter()
            .map(|c| {
                debug_assert_eq!(c.ncomps, rows);
                c.map_components(|p| self.ring.nf(p))
            })
            .collect();
        ChainMatrix {
            rows,
            poles: vec![0; self.nn()],
            known: self.full_known(),
            cols,
        }
    }

    pub fn identity_matrix(&self, n: usize) -> ChainMatrix {
        let cols = (0..n)
            .map(|i| VPoly::unit(n, self.ring.nvars(), i, &self.ring.field()))
            .collect();
        self.matrix_from_cols(n, cols)
    }

    fn matrix_with_poles(&self, m: &ChainMatrix, poles: &[u32]) -> ChainMatrix {
        let field = self.ring.field();
        let mut shift = self.ring.one();
        let mut known = m.known.clone();
        for &i in &self.laurent {
            let i = i as usize;
            let d = poles[i] - m.poles[i];
            if d > 0 {
                shift = shift.mul(&field, &self.component_in_model(i as u32).pow(&field, d));
                known[i] = (known[i] + d).min(self.level);
            }
        }
        ChainMatrix {
            rows: m.rows,
            poles: poles.to_vec(),
            known,
            cols: m
                .cols
                .iter()
                .map(|c| c.map_components(|p| self.ring.nf(&p.mul(&field, &shift))))
                .collect(),
        }
    }

    pub fn mat_mul(&self, a: &ChainMatrix, b: &ChainMatrix) -> ChainMatrix {
        assert_eq!(a.cols.len(), b.rows, "matrix shape mismatch");
        let field = self.ring.field();
        let mut poles = vec![0; self.nn()];
        for &i in &self.laurent {
            let i = i as usize;
            poles[i] = a.poles[i] + b.poles[i];
        }
        let cols = b
            .cols
            .iter()
            .map(|bc| {
                let mut out = VPoly::zero(a.rows, self.ring.nvars());
                for g in 0..b.rows {
                    let coeff = bc.component(g);
                    if !coeff.is_zero() {
                        out = out.add(&field, &a.cols[g].mul_poly(&field, &coeff));
                    }
                }
                out.map_components(|p| self.ring.nf(p))
            })
            .collect();
        ChainMatrix {
            rows: a.rows,
            poles,
            known: self.meet_known(&a.known, &b.known),
            cols,
        }
    }

    pub fn mat_eq_at_precision(&self, a: &ChainMatrix, b: &ChainMatrix) -> (bool, Vec<u32>) {
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.cols.len(), b.cols.len());
        let mut poles = vec![0; self.nn()];
        for &i in &self.laurent {
            let i = i as usize;
            poles[i] = a.poles[i].max(b.poles[i]);
        }
        let aa = self.matrix_with_poles(a, &poles);
        let bb = self.matrix_with_poles(b, &poles);
        let known = self.meet_known(&aa.known, &bb.known);
        let field = self.ring.field();
        let mut digits = vec![0; self.nn()];
        for &i in &self.completed {
            let i = i as usize;
            digits[i] = known[i].saturating_sub(poles[i]);
        }
        for (ca, cb) in aa.cols.iter().zip(&bb.cols) {
            let d = ca.sub(&field, cb);
            for g in 0..a.rows {
                let entry = self.ring.nf(&d.component(g));
                if !self.body_vanishes_at(&entry, &known) {
                    return (false, digits);
                }
            }
        }
        (true, digits)
    }
}

/// The functorial map between chain models induced by a subchain inclusion
/// (same divisor, same level). The inversion variable of the source maps to
/// the target's inversion variable times the newly completed components,
/// which become poles.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub src: ChainModel,
    pub dst: ChainModel,
    /// Components completed in the target but not the source.
    newly: Vec<u32>,
}

pub fn chain_map(src: &ChainModel, dst: &ChainModel) -> Result<ChainMap> {
    if src.level != dst.level {
        return Err(CoreError::Invalid("chain map needs matching levels".into()));
    }
    if src.divisor.ring != dst.divisor.ring
        || src.divisor.components.len() != dst.divisor.components.len()
    {
        return Err(CoreError::Invalid("chain map needs a shared divisor".into()));
    }
    // subchain check: every entry of src.chain appears in dst.chain, in order
    let sel = crate::strata::selections(&src.chain, &dst.chain);
    if sel.is_empty() {
        return Err(CoreError::Invalid(format!(
            "no subchain inclusion from {:?} into {:?}",
            src.chain, dst.chain
        )));
    }
    let t_src = *src.chain.0.last().unwrap();
    let t_dst = *dst.chain.0.last().unwrap();
    debug_assert!(mask_contains(t_dst, t_src));
    let newly = mask_elements(t_dst & !t_src, src.divisor.n());
    Ok(ChainMap {
        src: src.clone(),
        dst: dst.clone(),
        newly,
    })
}

impl ChainMap {
    /// Image of an element: expand the body in powers of the source inversion
    /// variable; each power k becomes t_dst^k with pole k on every newly
    /// completed component.
    pub fn apply(&self, a: &ChainElem) -> ChainElem {
        let field = self.dst.ring.field();
        let nv_dst = self.dst.ring.nvars();
        let kmax = match self.src.tvar {
            Some(tv) => a.body.degree_in(tv).unwrap_or(0),
            None => 0,
        };
        // body = Σ_k b_k·t^k → Σ_k b_k·t_dst^k·∏ f_newly^{kmax−k}
        let mut image = Polynomial::zero(nv_dst);
        for k in 0..=kmax {
            let bk = match self.src.tvar {
                Some(tv) => a.body.coefficient_of_var_power(tv, k),
                None => {
                    if k == 0 {
                        a.body.clone()
                    } else {
                        unreachable!()
                    }
                }
            };
            if bk.is_zero() {
                continue;
            }
            // b_k is free of t_src; reinterpret its base-coordinate part in dst
            let mut term = reinterpret_body(&bk, &self.src, &self.dst);
            if let Some(td) = self.dst.tvar {
                let t = Polynomial::var(nv_dst, td, &field);
                term = term.mul(&field, &t.pow(&field, k));
            } else {
                debug_assert!(self.newly_cover_t_amount(k));
            }
            for &i in &self.newly {
                let f = self.dst.component_in_model(i);
                term = term.mul(&field, &f.pow(&field, kmax - k));
            }
            image = image.add(&field, &term);
        }
        // handle the no-t_dst case: t_src^k maps to ∏ f_newly^{-k}; the body
        // above already carries ∏ f_newly^{kmax−k}, so poles kmax work out
        let mut poles = vec![0; self.dst.nn()];
        for &i in &self.dst.laurent {
            let i = i as usize;
            poles[i] = a.poles[i];
        }
        for &i in &self.newly {
            poles[i as usize] += kmax;
        }
        let mut known = self.dst.full_known();
        for &i in &self.src.completed {
            let i = i as usize;
            known[i] = a.known[i].min(self.dst.level);
        }
        self.dst.elem(&image, poles, known)
    }

    fn newly_cover_t_amount(&self, _k: u32) -> bool {
        // when the target has no inversion variable, T_m(dst) is everything,
        // so every factor of the source's inverted product is newly completed
        !self.newly.is_empty() || self.src.tvar.is_none()
    }

    pub fn apply_matrix(&self, m: &ChainMatrix) -> ChainMatrix {
        // entrywise images, then matrix-wide pole alignment
        let rows = m.rows;
        let mut images: Vec<Vec<ChainElem>> = Vec::with_capacity(m.cols.len());
        for c in &m.cols {
            let mut col = Vec::with_capacity(rows);
            for g in 0..rows {
                let e = ChainElem {
                    poles: m.poles.clone(),
                    body: c.component(g),
                    known: m.known.clone(),
                };
                col.push(self.apply(&e));
            }
            images.push(col);
        }
        let nn = self.dst.nn();
        let mut poles = vec![0; nn];
        let mut known = self.dst.full_known();
        for col in &images {
            for e in col {
                for &i in &self.dst.laurent {
                    let i = i as usize;
                    poles[i] = poles[i].max(e.poles[i]);
                }
            }
        }
        for col in &images {
            for e in col {
                let aligned = self.dst.with_poles(e, &poles);
                for &i in &self.dst.completed {
                    let i = i as usize;
                    known[i] = known[i].min(aligned.known[i]);
                }
            }
        }
        let cols = images
            .iter()
            .map(|col| {
                let comps: Vec<Polynomial> = col
                    .iter()
                    .map(|e| self.dst.with_poles(e, &poles).body)
                    .collect();
                VPoly::from_components(&comps)
            })
            .collect();
        ChainMatrix {
            rows,
            poles,
            known,
            cols,
        }
    }
}

/// Move a body free of the source's inversion variable into the target's
/// coordinates (base variables match; only the tail variable differs).
fn reinterpret_body(b: &Polynomial, src: &ChainModel, dst: &ChainModel) -> Polynomial {
    let base_n = src.divisor.ring.nvars();
    let field = src.divisor.ring.field();
    let mut images: Vec<Polynomial> = (0..base_n)
        .map(|i| Polynomial::var(dst.ring.nvars(), i, &field))
        .collect();
    if src.tvar.is_some() {
        images.push(Polynomial::zero(dst.ring.nvars())); // t_src must be absent
    }
    b.substitute(&field, &images, dst.ring.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    fn crossing() -> DivisorSpec {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
        let fx = r.parse("x").unwrap();
        let fy = r.parse("y").unwrap();
        DivisorSpec::new(r, vec![fx, fy]).unwrap()
    }

    fn line() -> DivisorSpec {
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let fx = r.parse("x").unwrap();
        DivisorSpec::new(r, vec![fx]).unwrap()
    }

    #[test]
    fn stratum_model_completes_and_inverts() {
        // T = {1} in a crossing: complete x, invert y
        let d = crossing();
        let m = chain_model(&d, &Chain(vec![0b01]), 3).unwrap();
        assert_eq!(m.ring.describe(), "Q[x,y,t]/(y*t - 1,x^3)");
        assert_eq!(m.completed, vec![0]);
        assert!(m.laurent.is_empty());
        assert_eq!(m.tvar, Some(2));
    }

    #[test]
    fn open_stratum_is_an_honest_localization() {
        let d = crossing();
        let m = chain_model(&d, &Chain(vec![0]), 5).unwrap();
        assert_eq!(m.ring.describe(), "Q[x,y,t]/(x*y*t - 1)");
        assert!(m.completed.is_empty());
        // equality is exact here
        let a = m.from_poly(&d.ring.parse("x + y").unwrap());
        let b = m.from_poly(&d.ring.parse("x + y").unwrap());
        let (eq, digits) = m.eq_at_precision(&a, &b);
        assert!(eq);
        assert!(digits.iter().all(|&d| d == 0));
    }

    #[test]
    fn full_chain_has_laurent_directions() {
        // chain Y_empty > Y_{1} over one component: complete x, then re-invert it
        let d = line();
        let m = chain_model(&d, &Chain(vec![0, 0b1]), 4).unwrap();
        assert_eq!(m.completed, vec![0]);
        assert_eq!(m.laurent, vec![0]);
        assert_eq!(m.tvar, None);
        assert_eq!(m.ring.describe(), "Q[x]/(x^4)");
    }

    #[test]
    fn chain_arithmetic_aligns_poles() {
        let d = line();
        let m = chain_model(&d, &Chain(vec![0, 0b1]), 4).unwrap();
        // a = 1/x, b = 1: a + b = (1 + x)/x
        let a = m.elem(&d.ring.parse("1").unwrap(), vec![1], vec![4]);
        let b = m.one();
        let s = m.add(&a, &b);
        assert_eq!(s.poles, vec![1]);
        assert_eq!(s.body, m.ring.parse("1 + x").unwrap());
        // multiplication: (1/x)·x = x/x ~ 1 at precision
        let x = m.from_poly(&d.ring.parse("x").unwrap());
        let p = m.mul(&a, &x);
        let (eq, digits) = m.eq_at_precision(&p, &m.one());
        assert!(eq);
        assert_eq!(digits, vec![3]); // known 4, pole 1
    }

    #[test]
    fn map_from_open_stratum_to_full_chain() {
        let d = line();
        let src = chain_model(&d, &Chain(vec![0]), 4).unwrap();
        let dst = chain_model(&d, &Chain(vec![0, 0b1]), 4).unwrap();
        let f = chain_map(&src, &dst).unwrap();
        // 1/x in the source: body t
        let a = src.from_poly(&src.ring.parse("t").unwrap());
        let img = f.apply(&a);
        assert_eq!(img.poles, vec![1]);
        assert_eq!(img.body, dst.ring.one());
        // homomorphism spot-check: (t·x) ↦ 1
        let tx = src.from_poly(&src.ring.parse("t*x").unwrap());
        let img2 = f.apply(&tx);
        let (eq, _) = dst.eq_at_precision(&img2, &dst.one());
        assert!(eq);
    }

    #[test]
    fn map_respects_products_at_precision() {
        let d = line();
        let src = chain_model(&d, &Chain(vec![0]), 6).unwrap();
        let dst = chain_model(&d, &Chain(vec![0, 0b1]), 6).unwrap();
        let f = chain_map(&src, &dst).unwrap();
        let a = src.from_poly(&src.ring.parse("t + x").unwrap());
        let b = src.from_poly(&src.ring.parse("t^2 - 3").unwrap());
        let prod = src.mul(&a, &b);
        let lhs = f.apply(&prod);
        let rhs = dst.mul(&f.apply(&a), &f.apply(&b));
        let (eq, digits) = dst.eq_at_precision(&lhs, &rhs);
        assert!(eq, "images differ: {} vs {}", dst.display(&lhs), dst.display(&rhs));
        assert!(digits[0] > 0);
    }

    #[test]
    fn crossing_chain_map_marks_only_new_components() {
        // (Y_{1}) ⊆ (Y_{1} > Y_{1,2}): x already completed, y newly completed
        let d = crossing();
        let src = chain_model(&d, &Chain(vec![0b01]), 3).unwrap();
        let dst = chain_model(&d, &Chain(vec![0b01, 0b11]), 3).unwrap();
        let f = chain_map(&src, &dst).unwrap();
        assert_eq!(dst.completed, vec![0, 1]);
        assert_eq!(dst.laurent, vec![1]);
        // 1/y in source: body t_src
        let a = src.from_poly(&src.ring.parse("t").unwrap());
        let img = f.apply(&a);
        assert_eq!(img.poles, vec![0, 1]);
        assert_eq!(img.body, dst.ring.one());
        assert_eq!(img.known, vec![3, 3]);
    }

    #[test]
    fn matrix_products_and_equality() {
        let d = line();
        let m = chain_model(&d, &Chain(vec![0, 0b1]), 5).unwrap();
        let x = m.ring.parse("x").unwrap();
        let one = m.ring.one();
        // A = [x], B = [1/x as pole matrix]: A·B = identity at precision
        let a = m.matrix_from_cols(1, vec![VPoly::from_poly(1, 0, &x)]);
        let mut b = m.matrix_from_cols(1, vec![VPoly::from_poly(1, 0, &one)]);
        b.poles = vec![1];
        let prod = m.mat_mul(&a, &b);
        let id = m.identity_matrix(1);
        let (eq, digits) = m.mat_eq_at_precision(&prod, &id);
        assert!(eq);
        assert_eq!(digits, vec![4]);
    }

    #[test]
    fn subchain_map_requires_an_actual_subchain() {
        let d = crossing();
        let a = chain_model(&d, &Chain(vec![0b01]), 3).unwrap();
        let b = chain_model(&d, &Chain(vec![0b10, 0b11]), 3).unwrap();
        assert!(chain_map(&a, &b).is_err());
    }
}
