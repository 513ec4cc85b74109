//! Smith normal form over Q[x], used as an independent cross-check on module
//! computations with univariate presentations.
//!
//! This module deliberately shares no machinery with the Gröbner side: dense
//! coefficient vectors, schoolbook division, Euclid's gcd. Agreement between
//! the two paths is evidence, not tautology.

use crate::error::{CoreError, Result};
use crate::module::PresentedModule;
use crate::poly::Polynomial;
use crate::scalar::{FieldDesc, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense univariate polynomial over Q; coefficients lowest-degree first,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(pub Vec<BigRational>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![BigRational::one()])
    }

    pub fn monomial(deg: usize) -> Self {
        let mut c = vec![BigRational::zero(); deg + 1];
        c[deg] = BigRational::one();
        UniPoly(c)
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        UniPoly(out).trim()
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly(out).trim()
    }

    /// (quotient, remainder) with deg r < deg divisor.
    pub fn divmod(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.0[dd].clone();
        let mut rem = self.clone();
        let mut quot = UniPoly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let factor = &rem.0[dr] / &lead;
            let mut q = vec![BigRational::zero(); dr - dd + 1];
            q[dr - dd] = factor;
            let q = UniPoly(q);
            rem = rem.sub(&q.mul(divisor));
            quot = quot.add(&q);
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).1.is_zero()
    }

    pub fn monic(&self) -> UniPoly {
        match self.degree() {
            None => UniPoly::zero(),
            Some(d) => {
                let lead = self.0[d].clone();
                UniPoly(self.0.iter().map(|c| c / &lead).collect())
            }
        }
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let g = self.gcd(other);
        let (q, r) = self.mul(other).divmod(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    /// Convert from the sparse multivariate representation; the polynomial
    /// must involve only variable `var` and the field must be Q.
    pub fn from_sparse(p: &Polynomial, var: usize) -> Result<UniPoly> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (m, c) in &p.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if i != var && e > 0 {
                    return Err(CoreError::Invalid(
                        "polynomial is not univariate in the expected variable".into(),
                    ));
                }
            }
            let d = m.0[var] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigRational::zero());
            }
            coeffs[d] = match c {
                Scalar::Q(q) => q.clone(),
                Scalar::Fp(_) => {
                    return Err(CoreError::Invalid(
                        "Smith oracle works over Q only".into(),
                    ))
                }
            };
        }
        Ok(UniPoly(coeffs).trim())
    }

    pub fn to_sparse(&self, nvars: usize, var: usize) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        for (d, c) in self.0.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; nvars];
                exps[var] = d as u32;
                p.terms.insert(
                    crate::monomial::Monomial(exps),
                    Scalar::Q(c.clone()),
                );
            }
        }
        p
    }

    pub fn display(&self, var: &str) -> String {
        self.to_sparse(1, 0)
            .display(&FieldDesc::Rationals, &[var.to_string()])
    }
}

impl From<i64> for UniPoly {
    fn from(n: i64) -> Self {
        if n == 0 {
            UniPoly::zero()
        } else {
            UniPoly(vec![BigRational::from(BigInt::from(n))])
        }
    }
}

/// Structure invariants of a finitely generated Q[x]-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithInvariants {
    pub free_rank: usize,
    /// Monic, non-unit, each dividing the next.
    pub invariant_factors: Vec<UniPoly>,
}

impl SmithInvariants {
    pub fn display(&self, var: &str) -> String {
        let factors: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|f| f.display(var))
            .collect();
        format!(
            "free rank {}, invariant factors [{}]",
            self.free_rank,
            factors.join(", ")
        )
    }
}

/// Smith normal form of a rows×cols matrix over Q[x]; returns the full
/// diagonal (units included) in divisibility order.
pub fn smith_diagonal(mut m: Vec<Vec<UniPoly>>) -> Vec<UniPoly> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let n = rows.min(cols);
    let mut diag: Vec<UniPoly> = Vec::new();
    for t in 0..n {
        loop {
            // find minimal-degree nonzero entry in the submatrix
            let mut pivot: Option<(usize, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if let Some(d) = m[i][j].degree() {
                        if pivot.map(|(_, _, pd)| d < pd).unwrap_or(true) {
                            pivot = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else { break };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            // clear row and column by division with remainder
            let mut dirty = false;
            for i in (t + 1)..rows {
                if !m[i][t].is_zero() {
                    let (q, _) = m[i][t].divmod(&m[t][t]);
                    for j in t..cols {
                        let sub = q.mul(&m[t][j]);
                        m[i][j] = m[i][j].sub(&sub);
                    }
                    if !m[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !m[t][j].is_zero() {
                    let (q, _) = m[t][j].divmod(&m[t][t]);
                    for i in t..rows {
                        let sub = q.mul(&m[i][t]);
                        m[i][j] = m[i][j].sub(&sub);
                    }
                    if !m[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            let row_clear = ((t + 1)..rows).all(|i| m[i][t].is_zero());
            let col_clear = ((t + 1)..cols).all(|j| m[t][j].is_zero());
            if !dirty && row_clear && col_clear {
                break;
            }
        }
        diag.push(m[t][t].monic());
    }
    // enforce divisibility d_i | d_{i+1} via diag(a,b) ~ diag(gcd, lcm)
    loop {
        let mut changed = false;
        for i in 0..diag.len().saturating_sub(1) {
            let (a, b) = (diag[i].clone(), diag[i + 1].clone());
            if a.is_zero() && b.is_zero() {
                continue;
            }
            if a.is_zero() && !b.is_zero() {
                // zero must come last
                diag[i] = b;
                diag[i + 1] = UniPoly::zero();
                changed = true;
                continue;
            }
            if !a.divides(&b) {
                diag[i] = a.gcd(&b);
                diag[i + 1] = a.lcm(&b);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diag
}

/// Invariants of coker(matrix) where the matrix columns are relations among
/// `rows` generators.
pub fn cokernel_invariants(rows: usize, columns: &[Vec<UniPoly>]) -> SmithInvariants {
    let mut m: Vec<Vec<UniPoly>> = vec![vec![UniPoly::zero(); columns.len()]; rows];
    for (j, col) in columns.iter().enumerate() {
        assert_eq!(col.len(), rows, "relation column has wrong length");
        for i in 0..rows {
            m[i][j] = col[i].clone();
        }
    }
    let diag = smith_diagonal(m);
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let invariant_factors = diag
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_unit())
        .collect();
    SmithInvariants {
        free_rank: rows - nonzero,
        invariant_factors,
    }
}

/// Invariants of a presented module over a free univariate ring Q[x].
pub fn module_invariants(m: &PresentedModule) -> Result<SmithInvariants> {
    if m.ring.field() != FieldDesc::Rationals
        || m.ring.nvars() != 1
        || !m.ring.relations().is_empty()
    {
        return Err(CoreError::Invalid(
            "Smith invariants require a module over Q[x], one variable, no ring relations".into(),
        ));
    }
    let cols: Vec<Vec<UniPoly>> = m
        .relations
        .iter()
        .map(|r| {
            r.components()
                .iter()
                .map(|p| UniPoly::from_sparse(p, 0))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cokernel_invariants(m.gens, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_pow(n: usize) -> UniPoly {
        UniPoly::monomial(n)
    }

    #[test]
    fn divmod_and_gcd() {
        // (x^2 - 1) / (x - 1) = x + 1 rem 0
        let a = x_pow(2).sub(&UniPoly::one());
        let b = x_pow(1).sub(&UniPoly::one());
        let (q, r) = a.divmod(&b);
        assert!(r.is_zero());
        assert_eq!(q, x_pow(1).add(&UniPoly::one()));
        let g = a.gcd(&x_pow(3).sub(&UniPoly::one()));
        assert_eq!(g, b.monic());
    }

    #[test]
    fn diagonal_matrix_invariants() {
        // coker of diag(x, x^2): torsion R/(x) ⊕ R/(x^2)
        let inv = cokernel_invariants(2, &[
            vec![x_pow(1), UniPoly::zero()],
            vec![UniPoly::zero(), x_pow(2)],
        ]);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.invariant_factors, vec![x_pow(1), x_pow(2)]);
    }

    #[test]
    fn empty_presentation_is_free() {
        let inv = cokernel_invariants(3, &[]);
        assert_eq!(inv.free_rank, 3);
        assert!(inv.invariant_factors.is_empty());
    }

    #[test]
    fn repeated_relation_collapses() {
        // one generator, relations x and x: coker = R/(x)
        let inv = cokernel_invariants(1, &[vec![x_pow(1)], vec![x_pow(1)]]);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.invariant_factors, vec![x_pow(1)]);
    }

    #[test]
    fn rank_deficient_matrix_leaves_free_part() {
        // columns (x, x^2)^T and (x^2, x^3)^T are proportional: coker = R/(x) ⊕ R
        let inv = cokernel_invariants(2, &[
            vec![x_pow(1), x_pow(2)],
            vec![x_pow(2), x_pow(3)],
        ]);
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.invariant_factors, vec![x_pow(1)]);
    }

    #[test]
    fn divisibility_is_enforced() {
        // diag(x^2 + x, x): invariants must be (x, x^2 + x)
        let a = x_pow(2).add(&x_pow(1));
        let inv = cokernel_invariants(2, &[
            vec![a.clone(), UniPoly::zero()],
            vec![UniPoly::zero(), x_pow(1)],
        ]);
        assert_eq!(inv.invariant_factors[0], x_pow(1));
        assert_eq!(inv.invariant_factors[1], a.monic());
        assert!(inv.invariant_factors[0].divides(&inv.invariant_factors[1]));
    }

    #[test]
    fn invariants_stable_under_row_and_column_operations() {
        // start from diag(1, x, x^2) and mix rows/columns unimodularly
        // col ops: c2 += x*c1; row ops: r1 += x^2*r3
        let mut cols = vec![
            vec![UniPoly::one(), UniPoly::zero(), UniPoly::zero()],
            vec![UniPoly::zero(), x_pow(1), UniPoly::zero()],
            vec![UniPoly::zero(), UniPoly::zero(), x_pow(2)],
        ];
        // c1 += x * c0
        for i in 0..3 {
            let add = x_pow(1).mul(&cols[0][i]);
            cols[1][i] = cols[1][i].add(&add);
        }
        // r0 += x^2 * r2 (affects every column)
        for col in cols.iter_mut() {
            let add = x_pow(2).mul(&col[2]);
            col[0] = col[0].add(&add);
        }
        let inv = cokernel_invariants(3, &cols);
        assert_eq!(inv.free_rank, 0);
        assert_eq!(inv.invariant_factors, vec![x_pow(1), x_pow(2)]);
    }

    #[test]
    fn module_bridge() {
        use crate::groebner::VPoly;
        use crate::ring::PresentedRing;
        let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let m = PresentedModule::new(
            r.clone(),
            2,
            vec![VPoly::from_components(&[
                r.parse("x").unwrap(),
                r.parse("x^2").unwrap(),
            ])],
        )
        .unwrap();
        let inv = module_invariants(&m).unwrap();
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.invariant_factors, vec![x_pow(1)]);
        assert_eq!(inv.display("x"), "free rank 1, invariant factors [x]");
    }
}
