//! Finitely presented commutative rings R = k[x_1..x_n]/(h_1..h_r), the
//! ambient coefficient objects for everything else in this crate.
//!
//! A ring owns a monomial order and caches the reduced Gröbner basis of its
//! relation ideal on first use; normal forms against that basis give canonical
//! representatives for elements, so equality of elements is decidable.

use crate::error::{CoreError, Result};
use crate::groebner::{groebner_basis, poly_normal_form};
use crate::monomial::MonomialOrder;
use crate::parse::parse_poly;
use crate::poly::Polynomial;
use crate::scalar::{FieldDesc, Scalar};
use std::fmt;
use std::sync::Arc;
use std::sync::OnceLock;

#[derive(Debug)]
struct RingInner {
    field: FieldDesc,
    vars: Vec<String>,
    relations: Vec<Polynomial>,
    order: MonomialOrder,
    gb: OnceLock<Vec<Polynomial>>,
}

/// A presented ring; cheap to clone and share.
#[derive(Debug, Clone)]
pub struct PresentedRing(Arc<RingInner>);

impl PresentedRing {
    pub fn new(
        field: FieldDesc,
        vars: Vec<String>,
        relations: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Result<Self> {
        let n = vars.len();
        for r in &relations {
            if r.nvars != n {
                return Err(CoreError::Invalid(format!(
                    "relation has {} variables, ring has {}",
                    r.nvars, n
                )));
            }
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(CoreError::Invalid(format!("duplicate variable {v}")));
            }
        }
        Ok(PresentedRing(Arc::new(RingInner {
            field,
            vars,
            relations,
            order,
            gb: OnceLock::new(),
        })))
    }

    /// Free polynomial ring k[vars] with the default graded order.
    pub fn polynomial(field: FieldDesc, vars: &[&str]) -> Self {
        PresentedRing::new(
            field,
            vars.iter().map(|s| s.to_string()).collect(),
            Vec::new(),
            MonomialOrder::DegRevLex,
        )
        .expect("free ring construction cannot fail")
    }

    pub fn quotient(field: FieldDesc, vars: &[&str], relations: Vec<Polynomial>) -> Result<Self> {
        PresentedRing::new(
            field,
            vars.iter().map(|s| s.to_string()).collect(),
            relations,
            MonomialOrder::DegRevLex,
        )
    }

    pub fn field(&self) -> FieldDesc {
        self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.0.relations
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.0.order
    }

    /// Reduced Gröbner basis of the relation ideal (cached).
    pub fn relation_basis(&self) -> &[Polynomial] {
        self.0.gb.get_or_init(|| {
            groebner_basis(&self.0.relations, &self.0.order, &self.0.field)
        })
    }

    /// Canonical representative of an element.
    pub fn nf(&self, p: &Polynomial) -> Polynomial {
        debug_assert_eq!(p.nvars, self.nvars());
        poly_normal_form(p, self.relation_basis(), &self.0.order, &self.0.field)
    }

    pub fn is_elem_zero(&self, p: &Polynomial) -> bool {
        self.nf(p).is_zero()
    }

    pub fn elems_equal(&self, a: &Polynomial, b: &Polynomial) -> bool {
        self.is_elem_zero(&a.sub(&self.0.field, b))
    }

    /// True iff 1 ∈ relations, i.e. the ring collapsed.
    pub fn is_zero_ring(&self) -> bool {
        self.relation_basis().iter().any(|p| p.is_constant() && !p.is_zero())
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars(), &self.0.field)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i, &self.0.field)
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        Polynomial::constant(self.nvars(), &self.0.field, c)
    }

    /// Same generators and order, extra relations appended.
    pub fn with_extra_relations(&self, extra: &[Polynomial]) -> Result<Self> {
        let mut rels = self.0.relations.clone();
        for r in extra {
            if r.nvars != self.nvars() {
                return Err(CoreError::Invalid(
                    "extra relation has wrong variable count".into(),
                ));
            }
            rels.push(r.clone());
        }
        PresentedRing::new(self.0.field, self.0.vars.clone(), rels, self.0.order.clone())
    }

    /// Append fresh variables (names must be new); relations carry over.
    pub fn with_extra_vars(&self, names: &[String], order: MonomialOrder) -> Result<Self> {
        let mut vars = self.0.vars.clone();
        for n in names {
            if vars.contains(n) {
                return Err(CoreError::Invalid(format!("variable {n} already present")));
            }
            vars.push(n.clone());
        }
        let total = vars.len();
        let rels = self
            .0
            .relations
            .iter()
            .map(|r| r.extended(total))
            .collect();
        PresentedRing::new(self.0.field, vars, rels, order)
    }

    /// Parse an element in this ring's variables.
    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        parse_poly(src, &self.0.vars, self.0.field)
    }

    pub fn display_poly(&self, p: &Polynomial) -> String {
        p.display(&self.0.field, &self.0.vars)
    }

    /// A short textual presentation: k[x,y]/(x*y) style.
    pub fn describe(&self) -> String {
        let mut s = format!("{}[{}]", self.0.field, self.0.vars.join(","));
        if !self.0.relations.is_empty() {
            let rels: Vec<String> = self
                .0
                .relations
                .iter()
                .map(|r| self.display_poly(r))
                .collect();
            s.push_str(&format!("/({})", rels.join(",")));
        }
        s
    }

    /// Pointer identity shortcut, used before falling back to basis equality.
    pub fn same_object(&self, other: &PresentedRing) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Inverse of `u` if `u` is a unit, found as a lift of 1 through the
    /// principal ideal (u).
    pub fn inverse_of(&self, u: &Polynomial) -> Option<Polynomial> {
        use crate::groebner::{SpanBasis, VPoly};
        let span = SpanBasis::new(
            &self.0.field,
            &self.0.order,
            self.nvars(),
            1,
            &[VPoly::from_poly(1, 0, u)],
            self.relations(),
        );
        let one = VPoly::from_poly(1, 0, &self.one());
        span.lift(&one).map(|v| self.nf(&v[0]))
    }
}

impl PartialEq for PresentedRing {
    /// Structural equality: same field, variables, order, and relation ideal
    /// (compared by reduced Gröbner basis).
    fn eq(&self, other: &Self) -> bool {
        if self.same_object(other) {
            return true;
        }
        self.0.field == other.0.field
            && self.0.vars == other.0.vars
            && self.0.order == other.0.order
            && self.relation_basis() == other.relation_basis()
    }
}

impl Eq for PresentedRing {}

impl fmt::Display for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}
