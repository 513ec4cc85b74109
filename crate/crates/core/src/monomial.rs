//! Exponent vectors and monomial orders (lex, degrevlex, block/elimination).

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// An exponent vector. The structural `Ord` (used for map keys) is plain
/// lexicographic on the vector and has no semantic meaning; semantic
/// comparisons go through [`MonomialOrder::cmp_mono`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Pad with zero exponents for freshly appended variables.
    pub fn extended(&self, nvars: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(nvars, 0);
        Monomial(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Elimination order: variables with `mask[i] = true` form the first
    /// block (compared degrevlex), the rest are the second block. Greater on
    /// the first block wins regardless of the second; a Gröbner basis element
    /// free of first-block variables lies in the elimination sub-ring.
    Block { mask: Vec<bool> },
}

impl MonomialOrder {
    /// Elimination order whose first block is exactly `eliminate`.
    pub fn eliminating(nvars: usize, eliminate: &[usize]) -> Self {
        let mut mask = vec![false; nvars];
        for &i in eliminate {
            mask[i] = true;
        }
        MonomialOrder::Block { mask }
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegRevLex => degrevlex(&a.0, &b.0),
            MonomialOrder::Block { mask } => {
                let pick = |m: &Monomial, sel: bool| -> Vec<u32> {
                    m.0.iter()
                        .zip(mask)
                        .filter(|(_, &inb)| inb == sel)
                        .map(|(&e, _)| e)
                        .collect()
                };
                degrevlex(&pick(a, true), &pick(b, true))
                    .then_with(|| degrevlex(&pick(a, false), &pick(b, false)))
            }
        }
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                // larger exponent on a *later* variable loses
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    })
}
