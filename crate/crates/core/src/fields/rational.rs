use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, FieldDescriptor, FieldError};

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

fn exact_root(n: &BigInt, e: u32) -> Option<BigInt> {
    let r = n.nth_root(e);
    (num_traits::pow(r.clone(), e as usize) == *n).then_some(r)
}

impl Field for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::rational()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        (!den.is_zero()).then(|| BigRational::new(num.clone(), den.clone()))
    }

    fn nth_root(&self, a: &BigRational, e: u64) -> Result<Option<BigRational>, FieldError> {
        if e == 0 {
            return Ok(a.is_one().then(BigRational::one));
        }
        if a.is_zero() {
            return Ok(Some(BigRational::zero()));
        }
        let e32 = match u32::try_from(e) {
            Ok(v) => v,
            // only +-1 have roots of such huge order
            Err(_) => {
                return Ok(if a.is_one() {
                    Some(BigRational::one())
                } else if *a == -BigRational::one() && e % 2 == 1 {
                    Some(a.clone())
                } else {
                    None
                })
            }
        };
        if a.is_negative() && e.is_multiple_of(2) {
            return Ok(None);
        }
        let num = a.numer().abs();
        let den = a.denom().clone();
        let (Some(rn), Some(rd)) = (exact_root(&num, e32), exact_root(&den, e32)) else {
            return Ok(None);
        };
        let r = BigRational::new(rn, rd);
        Ok(Some(if a.is_negative() { -r } else { r }))
    }

    fn pth_root(&self, _a: &BigRational) -> Result<BigRational, FieldError> {
        Err(FieldError::NotFinite)
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}
