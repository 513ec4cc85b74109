//! Field scalars: exact rationals (default) or a prime field 𝔽_p, p < 2³¹.
//!
//! The field is fixed per ring; scalars do not carry the modulus themselves,
//! all arithmetic goes through a [`FieldDesc`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDesc {
    Rationals,
    /// Prime field with modulus p, 2 ≤ p < 2³¹.
    Prime(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64),
}

impl FieldDesc {
    pub fn zero(&self) -> Scalar {
        match self {
            FieldDesc::Rationals => Scalar::Q(BigRational::zero()),
            FieldDesc::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldDesc::Rationals => Scalar::Q(BigRational::one()),
            FieldDesc::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldDesc::Rationals => Scalar::Q(BigRational::from(BigInt::from(n))),
            FieldDesc::Prime(p) => {
                let p = *p as i64;
                Scalar::Fp(n.rem_euclid(p) as u64)
            }
        }
    }

    /// n/d as a field element. Panics if d maps to zero.
    pub fn from_ratio(&self, n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        match self {
            FieldDesc::Rationals => {
                Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldDesc::Prime(_) => {
                let num = self.from_i64(n);
                let den = self.from_i64(d);
                self.mul(&num, &self.inv(&den).expect("denominator divisible by p"))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldDesc::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (FieldDesc::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x + y) % (*p as u64))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldDesc::Rationals, Scalar::Q(x)) => Scalar::Q(-x),
            (FieldDesc::Prime(p), Scalar::Fp(x)) => {
                let p = *p as u64;
                Scalar::Fp(if *x == 0 { 0 } else { p - x })
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldDesc::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (FieldDesc::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x * y) % (*p as u64))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (FieldDesc::Rationals, Scalar::Q(x)) => Scalar::Q(x.recip()).into(),
            (FieldDesc::Prime(p), Scalar::Fp(x)) => {
                Some(Scalar::Fp(mod_pow(*x, *p as u64 - 2, *p as u64)))
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    pub fn display(&self, a: &Scalar) -> String {
        match a {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(v) => format!("{v}"),
        }
    }

    /// True if the scalar prints without a leading minus sign.
    pub fn is_display_nonnegative(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(r) => !r.is_negative(),
            Scalar::Fp(_) => true,
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rationals => write!(f, "Q"),
            FieldDesc::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_laws() {
        let f = FieldDesc::Rationals;
        let a = f.from_ratio(3, 4);
        let b = f.from_ratio(-1, 6);
        let sum = f.add(&a, &b);
        assert_eq!(sum, f.from_ratio(7, 12));
        let prod = f.mul(&a, &b);
        assert_eq!(prod, f.from_ratio(-1, 8));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
    }

    #[test]
    fn prime_field_inverse() {
        let f = FieldDesc::Prime(10007);
        for v in [1i64, 2, 5000, 10006] {
            let a = f.from_i64(v);
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn modular_reduction_of_negatives() {
        let f = FieldDesc::Prime(7);
        assert_eq!(f.from_i64(-1), Scalar::Fp(6));
        assert_eq!(f.from_ratio(1, -3), f.div(&f.one(), &f.from_i64(-3)));
    }
}
