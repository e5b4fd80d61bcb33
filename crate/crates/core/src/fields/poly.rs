//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::field::{prime_factors, Fe, Field};

const SPLIT_SEED: u64 = 0x5eed_fac7_0000_0001;

/// Coefficients are stored low-to-high with no trailing zeros, so the zero
/// polynomial has an empty coefficient list and `degree() == None`.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = self.field.display(a);
            match (i, a == self.field.one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coef}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{coef}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn from_coeffs(field: &Field, c: Vec<Fe>) -> Poly {
        let mut p = Poly {
            field: field.clone(),
            c,
        };
        p.trim();
        p
    }

    /// From integers in the prime subfield, low-to-high.
    pub fn from_ints(field: &Field, c: &[i64]) -> Poly {
        Self::from_coeffs(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &Field, a: Fe) -> Poly {
        Self::from_coeffs(field, vec![a])
    }

    pub fn x(field: &Field) -> Poly {
        Self::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &Field, a: Fe, n: usize) -> Poly {
        let mut c = vec![Fe::ZERO; n + 1];
        c[n] = a;
        Self::from_coeffs(field, c)
    }

    /// `x - a`
    pub fn linear(field: &Field, a: Fe) -> Poly {
        Self::from_coeffs(field, vec![field.neg(a), field.one()])
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, deg_below: usize, rng: &mut R) -> Poly {
        Self::from_coeffs(field, (0..deg_below).map(|_| field.random(rng)).collect())
    }

    pub fn random_monic<R: Rng + ?Sized>(field: &Field, deg: usize, rng: &mut R) -> Poly {
        let mut c: Vec<Fe> = (0..deg).map(|_| field.random(rng)).collect();
        c.push(field.one());
        Self::from_coeffs(field, c)
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|a| a.is_zero()) {
            self.c.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == self.field.one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` standing in for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == self.field.one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).unwrap();
        self.scale(inv)
    }

    pub fn scale(&self, a: Fe) -> Poly {
        Self::from_coeffs(&self.field, self.c.iter().map(|&x| self.field.mul(x, a)).collect())
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; n];
        c.extend_from_slice(&self.c);
        Poly {
            field: self.field.clone(),
            c,
        }
    }

    /// `x^n p(1/x)` for `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut c = vec![Fe::ZERO; n + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[n - i] = a;
        }
        Self::from_coeffs(&self.field, c)
    }

    /// Truncation modulo `x^n`.
    pub fn truncate(&self, n: usize) -> Poly {
        Self::from_coeffs(&self.field, self.c.iter().take(n).copied().collect())
    }

    pub fn eval(&self, a: Fe) -> Fe {
        let f = &self.field;
        self.c.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, a), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Self::from_coeffs(
            f,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
                .collect(),
        )
    }

    /// Applies the absolute Frobenius to every coefficient.
    pub fn frobenius_coeffs(&self) -> Poly {
        Self::from_coeffs(&self.field, self.c.iter().map(|&a| self.field.frobenius(a)).collect())
    }

    pub fn check_same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lc()).unwrap();
        let mut r = self.c.clone();
        let dl = d.c.len();
        let mut q = vec![Fe::ZERO; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let t = f.mul(r[i + dl - 1], inv);
            if t.is_zero() {
                continue;
            }
            q[i] = t;
            for (j, &dj) in d.c.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(t, dj));
            }
        }
        r.truncate(dl - 1);
        (Self::from_coeffs(f, q), Self::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Quotient when `d` divides `self`, `None` otherwise.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lc()).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// `self^p` where every coefficient must be a `p`-th power pattern, i.e.
    /// the inverse of `g -> g^p` on polynomials with zero derivative.
    fn pth_root(&self) -> Poly {
        let p = self.field.characteristic() as usize;
        let f = &self.field;
        Self::from_coeffs(
            f,
            self.c.iter().step_by(p).map(|&a| f.frobenius_inv(a)).collect(),
        )
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(h, m)` with
    /// `self = prod h^m`, each `h` squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        self.monic().sqf_into(1, &mut out);
        out
    }

    fn sqf_into(&self, mult: u32, out: &mut Vec<(Poly, u32)>) {
        if self.deg() <= 0 {
            return;
        }
        let p = self.field.characteristic() as u32;
        let d = self.derivative();
        if d.is_zero() {
            self.pth_root().sqf_into(mult * p, out);
            return;
        }
        let mut c = self.gcd(&d);
        let mut w = self.div_exact(&c).unwrap();
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_exact(&y).unwrap();
            if !z.is_one() {
                out.push((z, i * mult));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w).unwrap();
        }
        if !c.is_one() {
            c.pth_root().sqf_into(mult * p, out);
        }
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).deg() == 0
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let m = self.monic();
        let f = &self.field;
        let x = Poly::x(f);
        let q = BigUint::from(f.order());
        let mut powers = vec![x.clone()];
        for _ in 0..n {
            let last = powers.last().unwrap();
            powers.push(last.pow_mod(&q, &m));
        }
        if powers[n] != x.rem(&m) {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let h = &powers[n / r as usize] - &x;
            h.gcd(&m).is_one()
        })
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted canonically. The leading coefficient is dropped.
    pub fn factor(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut out = Vec::new();
        for (h, m) in self.squarefree_decomposition() {
            for (g, d) in h.distinct_degree() {
                for irr in g.equal_degree(d, &mut rng) {
                    out.push((irr, m));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let f = &self.field;
        let q = BigUint::from(f.order());
        let x = Poly::x(f);
        let mut rest = self.clone();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 0usize;
        while rest.deg() >= 2 * (d as i64 + 1) {
            d += 1;
            h = h.rem(&rest).pow_mod(&q, &rest);
            let g = (&h - &x).gcd(&rest);
            if !g.is_one() {
                rest = rest.div_exact(&g).unwrap();
                out.push((g, d));
                h = h.rem(&rest);
            }
        }
        if rest.deg() > 0 {
            let dd = rest.deg() as usize;
            out.push((rest, dd));
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a product of distinct irreducibles of
    /// degree `d` (odd characteristic).
    fn equal_degree<R: Rng>(&self, d: usize, rng: &mut R) -> Vec<Poly> {
        let n = self.deg() as usize;
        if n == d {
            return vec![self.clone()];
        }
        let f = &self.field;
        let e = (BigUint::from(f.order()).pow(d as u32) - BigUint::one()) >> 1;
        loop {
            let a = Poly::random(f, n, rng);
            if a.deg() < 1 {
                continue;
            }
            let b = &a.pow_mod(&e, self) - &Poly::one(f);
            let g = b.gcd(self);
            if g.deg() > 0 && g.deg() < n as i64 {
                let other = self.div_exact(&g).unwrap();
                let mut out = g.equal_degree(d, rng);
                out.extend(other.equal_degree(d, rng));
                return out;
            }
        }
    }

    /// Roots in the base field, sorted, without multiplicity.
    pub fn roots(&self) -> Vec<Fe> {
        if self.deg() < 1 {
            return Vec::new();
        }
        let f = &self.field;
        let m = self.monic();
        let x = Poly::x(f);
        let g = (&x.pow_mod(&BigUint::from(f.order()), &m) - &x).gcd(&m);
        if g.deg() < 1 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut r: Vec<Fe> = g
            .equal_degree(1, &mut rng)
            .into_iter()
            .map(|l| f.neg(l.coeff(0)))
            .collect();
        r.sort();
        r
    }

    /// Exponent of the irreducible `u` in `self` (self nonzero).
    pub fn ord(&self, u: &Poly) -> u32 {
        assert!(!self.is_zero());
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(u);
            if !r.is_zero() {
                return n;
            }
            n += 1;
            cur = q;
        }
    }

    /// `prod self(theta)` over the roots `theta` of the monic `u`, i.e. the
    /// norm of `self mod u` from `F_q[x]/(u)` when `u` is irreducible.
    pub fn norm_mod(&self, u: &Poly) -> Fe {
        let f = &self.field;
        let du = u.deg();
        assert!(du >= 0 && u.is_monic());
        if du == 0 {
            return f.one();
        }
        let g = self.rem(u);
        if g.is_zero() {
            return Fe::ZERO;
        }
        let dg = g.deg();
        // prod_theta g(theta) = (-1)^{du dg} lc(g)^du prod_{g(beta)=0} u(beta)
        let mut out = f.pow(g.lc(), du as u64);
        if (du * dg) % 2 == 1 {
            out = f.neg(out);
        }
        f.mul(out, u.norm_mod(&g.monic()))
    }

    /// A square root of `self` in the field `F_q[x]/(u)`, `u` monic
    /// irreducible (Tonelli–Shanks). `None` for non-squares.
    pub fn sqrt_mod(&self, u: &Poly) -> Option<Poly> {
        let f = &self.field;
        let a = self.rem(u);
        if a.is_zero() {
            return Some(a);
        }
        if f.legendre(a.norm_mod(u)) != 1 {
            return None;
        }
        let order = BigUint::from(f.order()).pow(u.deg() as u32);
        let qm1 = &order - BigUint::one();
        let s = qm1.trailing_zeros().unwrap();
        let t = &qm1 >> s;
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ 0x51);
        let z = loop {
            let c = Poly::random(f, u.deg() as usize, &mut rng);
            if !c.is_zero() && f.legendre(c.norm_mod(u)) == -1 {
                break c;
            }
        };
        let mut m = s;
        let mut c = z.pow_mod(&t, u);
        let mut tt = a.pow_mod(&t, u);
        let mut r = a.pow_mod(&((&t + BigUint::one()) >> 1), u);
        while !tt.is_one() {
            let mut i = 0u64;
            let mut sq = tt.clone();
            while !sq.is_one() {
                sq = sq.mul_mod(&sq, u);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.mul_mod(&b, u);
            }
            m = i;
            c = b.mul_mod(&b, u);
            tt = tt.mul_mod(&c, u);
            r = r.mul_mod(&b, u);
        }
        debug_assert_eq!(r.mul_mod(&r, u), a.rem(u));
        Some(r)
    }

    /// Integer coefficient encodings, low-to-high.
    pub fn to_indices(&self) -> Vec<u32> {
        self.c.iter().map(|a| a.index()).collect()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(rhs.c.len());
        Poly::from_coeffs(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(rhs.c.len());
        Poly::from_coeffs(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.c.iter().map(|&a| f.neg(a)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![Fe::ZERO; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f = f5();
        let a = Poly::from_ints(&f, &[-1, 0, 1]);
        let b = Poly::from_ints(&f, &[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        let q = Poly::from_ints(&f, &[1, 1, 0, 0, 0, 1]);
        assert!(q.gcd(&q.derivative()).is_one());
        assert!(Poly::zero(&f).gcd(&Poly::zero(&f)).is_zero());
    }

    #[test]
    fn factor_examples() {
        let f = f5();
        let a = Poly::from_ints(&f, &[-1, 0, 1]);
        let fa = a.factor().unwrap();
        assert_eq!(
            fa,
            vec![(Poly::from_ints(&f, &[1, 1]), 1), (Poly::from_ints(&f, &[-1, 1]), 1)]
        );
        let f3 = Field::new(3, 1).unwrap();
        let b = Poly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(b.factor().unwrap(), vec![(b.clone(), 1)]);
        // x^5 + 1 = (x + 1)(x^4 - x^3 + x^2 - x + 1) over F_3, quartic irreducible
        let c = Poly::from_ints(&f3, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(
            c.factor().unwrap(),
            vec![
                (Poly::from_ints(&f3, &[1, 1]), 1),
                (Poly::from_ints(&f3, &[1, -1, 1, -1, 1]), 1)
            ]
        );
        assert_eq!(Poly::zero(&f3).factor(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn inseparable_parts() {
        let f = Field::new(3, 2).unwrap();
        // (x^3 + 2)^2 (x + 1) has a p-th power factor
        let a = Poly::from_ints(&f, &[2, 0, 0, 1]);
        let b = Poly::from_ints(&f, &[1, 1]);
        let g = &(&a * &a) * &b;
        let fac = g.factor().unwrap();
        let back = fac
            .iter()
            .fold(Poly::one(&f), |acc, (h, m)| &acc * &h.pow(*m as u64));
        assert_eq!(back, g);
    }

    #[test]
    fn norms_and_square_roots() {
        let f = Field::new(5, 1).unwrap();
        let u = Poly::from_ints(&f, &[2, 0, 1]); // x^2 + 2, irreducible mod 5
        assert!(u.is_irreducible());
        // norm of x + 1: (theta + 1)(-theta + 1) = 1 - theta^2 = 1 + 2 = 3
        assert_eq!(Poly::from_ints(&f, &[1, 1]).norm_mod(&u), f.from_int(3));
        for a in 0..25i64 {
            let g = Poly::from_ints(&f, &[a % 5, a / 5]);
            let sq = g.mul_mod(&g, &u);
            let r = sq.sqrt_mod(&u).unwrap();
            assert_eq!(r.mul_mod(&r, &u), sq);
        }
    }

    #[test]
    fn roots_found() {
        let f = Field::new(7, 1).unwrap();
        let g = &(&Poly::linear(&f, f.from_int(2)) * &Poly::linear(&f, f.from_int(5)))
            * &Poly::from_ints(&f, &[1, 0, 1]);
        assert_eq!(g.roots(), vec![f.from_int(2), f.from_int(5)]);
    }
}
