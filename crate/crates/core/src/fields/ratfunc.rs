use std::fmt;

use crate::error::{Error, Result};
use crate::fields::field::Field;
use crate::fields::poly::Poly;

/// A reduced fraction `num / den` with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        num.check_same_field(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let f = den.field().clone();
            return Ok(Self::zero(&f));
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let inv = d.field().inv(d.lc()).unwrap();
        Ok(RationalFunction {
            num: n.scale(inv),
            den: d.scale(inv),
        })
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let one = Poly::one(p.field());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(field: &Field) -> RationalFunction {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RationalFunction {
        Self::from_poly(Poly::one(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg() - self.den.deg())
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        Self::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
        .unwrap()
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        Self::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFunction {
        Self::new(&self.num * p, self.den.clone()).unwrap()
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn derivative(&self) -> RationalFunction {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).unwrap()
    }

    pub fn frobenius_coeffs(&self) -> RationalFunction {
        Self::new(self.num.frobenius_coeffs(), self.den.frobenius_coeffs()).unwrap()
    }

    /// Exponent of the irreducible `u`: positive for zeros, negative for poles.
    pub fn ord(&self, u: &Poly) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.ord(u) as i64 - self.den.ord(u) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form() {
        let f = Field::new(5, 1).unwrap();
        let n = Poly::from_ints(&f, &[-1, 0, 1]);
        let d = Poly::from_ints(&f, &[-2, 2]);
        let r = RationalFunction::new(n, d).unwrap();
        assert_eq!(r.num(), &Poly::from_ints(&f, &[3, 3]));
        assert!(r.den().is_one());
        assert!(RationalFunction::new(Poly::one(&f), Poly::zero(&f)).is_err());
    }
}
