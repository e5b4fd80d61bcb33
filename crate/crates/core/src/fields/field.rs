//! Finite fields `F_{p^k}` for odd `p`, with log/exp and Zech tables.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_0 + c_1 t + ...` is its canonical residue modulo the defining
//! polynomial. That integer is also the canonical serialization.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::poly::Poly;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

const MODULUS_SEED: u64 = 0x6e65_6663_6572_7431;
const NO_ZECH: u32 = u32::MAX;

/// An element of a [`Field`]. Meaningless without the field it came from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp has length 2(q-1) so that log sums never need reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
}

/// The field `F_q`, `q = p^k`. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push(a % p);
        a /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

// Multiplication of encoded elements by schoolbook convolution, used only
// while the tables are being built.
fn raw_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let k = modulus.len() - 1;
    let da = digits(a, p, k as u32);
    let db = digits(b, p, k as u32);
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p as u64;
        }
    }
    for i in (k..2 * k).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            let sub = c * modulus[j] as u64 % p as u64;
            prod[i - k + j] = (prod[i - k + j] + p as u64 - sub) % p as u64;
        }
    }
    let out: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
    undigits(&out, p)
}

fn raw_pow(mut a: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_mul(acc, a, p, modulus);
        }
        a = raw_mul(a, a, p, modulus);
        e >>= 1;
    }
    acc
}

impl Field {
    /// Builds `F_{p^k}`. For `k > 1` the defining polynomial is the first
    /// irreducible hit of a fixed-seed random search, so the choice is
    /// reproducible across runs and machines.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if k == 0 {
            return Err(Error::Malformed("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        if k == 1 {
            return Ok(Self::build(p as u32, vec![0, 1]));
        }
        let base = Self::build(p as u32, vec![0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(MODULUS_SEED ^ (p << 16) ^ k as u64);
        loop {
            let mut c: Vec<u32> = (0..k).map(|_| rng.random_range(0..p as u32)).collect();
            c.push(1);
            let cand = Poly::from_coeffs(&base, c.iter().map(|&x| Fe(x)).collect());
            if cand.is_irreducible() {
                return Ok(Self::build(p as u32, c));
            }
        }
    }

    /// `F_p[t]/(modulus)` for a caller-supplied monic irreducible modulus
    /// (low-to-high coefficients). Used when reading serialized fields.
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::Malformed("modulus must be monic with digits below p".into()));
        }
        let k = modulus.len() as u32 - 1;
        let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        if k == 1 {
            return Ok(Self::build(p as u32, vec![0, 1]));
        }
        let base = Self::build(p as u32, vec![0, 1]);
        let cand = Poly::from_coeffs(&base, modulus.iter().map(|&x| Fe(x)).collect());
        if !cand.is_irreducible() {
            return Err(Error::Malformed("modulus is reducible".into()));
        }
        Ok(Self::build(p as u32, modulus.to_vec()))
    }

    fn build(p: u32, modulus: Vec<u32>) -> Field {
        let k = modulus.len() as u32 - 1;
        let q = p.pow(k);
        let n = q - 1;
        let factors = prime_factors(n as u64);
        let gen = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| raw_pow(g, n as u64 / l, p, &modulus) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i as usize] = cur;
            exp[(i + n) as usize] = cur;
            log[cur as usize] = i;
            cur = raw_mul(cur, gen, p, &modulus);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, k).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p)
            })
            .collect();
        let zech: Vec<u32> = (0..n)
            .map(|d| {
                let mut dg = digits(exp[d as usize], p, k);
                dg[0] = (dg[0] + 1) % p;
                let s = undigits(&dg, p);
                if s == 0 {
                    NO_ZECH
                } else {
                    log[s as usize]
                }
            })
            .collect();
        let modulus = if k == 1 { Vec::new() } else { modulus };
        Field(Arc::new(FieldData {
            p,
            k,
            q,
            modulus,
            exp,
            log,
            zech,
            neg,
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Defining polynomial over `F_p`, low-to-high; empty for a prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn same(&self, other: &Field) -> bool {
        self == other
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_index(&self, idx: u32) -> Result<Fe> {
        if idx >= self.0.q {
            return Err(Error::Malformed(format!("element index {idx} out of range")));
        }
        Ok(Fe(idx))
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<Fe> {
        if c.len() != self.0.k as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::Malformed("bad coordinate vector".into()));
        }
        Ok(Fe(undigits(c, self.0.p)))
    }

    /// Coordinates over `F_p` in the power basis of the defining polynomial.
    pub fn coords(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.k)
    }

    /// Integer value when `a` lies in the prime subfield.
    pub fn as_prime(&self, a: Fe) -> Option<u32> {
        (a.0 < self.0.p).then_some(a.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(1..self.0.q))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let d = &*self.0;
        if d.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= d.p { s - d.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = d.q - 1;
        let la = d.log[a.0 as usize];
        let lb = d.log[b.0 as usize];
        let diff = if lb >= la { lb - la } else { lb + n - la };
        let z = d.zech[diff as usize];
        if z == NO_ZECH {
            Fe(0)
        } else {
            Fe(d.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let d = &*self.0;
        Fe(d.exp[(d.log[a.0 as usize] + d.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let d = &*self.0;
        let l = d.log[a.0 as usize];
        Ok(Fe(d.exp[if l == 0 { 0 } else { (d.q - 1 - l) as usize }]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let d = &*self.0;
        let n = (d.q - 1) as u64;
        let l = d.log[a.0 as usize] as u64 * (e % n) % n;
        Fe(d.exp[l as usize])
    }

    pub fn pow_big(&self, a: Fe, e: &BigUint) -> Fe {
        if e.bits() == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let r = (e % BigUint::from(self.0.q - 1)).to_u64().unwrap();
        let d = &*self.0;
        let l = d.log[a.0 as usize] as u64 * r % (d.q - 1) as u64;
        Fe(d.exp[l as usize])
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    /// Inverse of the absolute Frobenius, `a -> a^{q/p}`.
    pub fn frobenius_inv(&self, a: Fe) -> Fe {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.0 == 0 || self.0.log[a.0 as usize].is_multiple_of(2)
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn legendre(&self, a: Fe) -> i32 {
        if a.0 == 0 {
            0
        } else if self.0.log[a.0 as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(Fe(0));
        }
        let l = self.0.log[a.0 as usize];
        l.is_multiple_of(2).then(|| Fe(self.0.exp[(l / 2) as usize]))
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe(0), |acc, x| self.add(acc, x))
    }

    /// Human-readable element: an integer over a prime field, otherwise the
    /// residue polynomial in `t`.
    pub fn display(&self, a: Fe) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        let c = self.coords(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            terms.push(match i {
                0 => ci.to_string(),
                1 if ci == 1 => "t".to_string(),
                1 => format!("{ci}t"),
                _ if ci == 1 => format!("t^{i}"),
                _ => format!("{ci}t^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            format!("({})", terms.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_errors() {
        assert_eq!(Field::new(5, 1).unwrap().order(), 5);
        assert_eq!(Field::new(3, 2).unwrap().order(), 9);
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 3).unwrap_err(), Error::CharacteristicTwo);
        assert!(Field::new(4, 1).unwrap_err().to_string().contains("not prime"));
    }

    #[test]
    fn modulus_is_reproducible() {
        let a = Field::new(3, 4).unwrap();
        let b = Field::new(3, 4).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a, b);
    }

    #[test]
    fn inverses_and_sqrt() {
        let f = Field::new(7, 2).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            let s = f.mul(a, a);
            let r = f.sqrt(s).unwrap();
            assert_eq!(f.mul(r, r), s);
        }
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn addition_matches_coordinates() {
        let f = Field::new(5, 3).unwrap();
        let p = 5;
        for a in f.elements().step_by(7) {
            for b in f.elements().step_by(11) {
                let ca = f.coords(a);
                let cb = f.coords(b);
                let cs: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(f.coords(f.add(a, b)), cs);
            }
        }
    }
}
