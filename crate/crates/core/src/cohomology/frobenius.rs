use crate::cohomology::rr::rr_space;
use crate::cohomology::tails::{H1Space, TailClass};
use crate::error::{Error, Result};
use crate::fields::linalg::{mat_mul, rank};
use crate::fields::{Fe, Field};
use crate::hyperelliptic::{Curve, Differential, Divisor, FunctionElement, Local};
use crate::jacobian::{jac_scalar_mul, MumfordClass};

/// `v -> M v^(twist)`, coordinates raised to the `twist`-th power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    pub field: Field,
    pub matrix: Vec<Vec<Fe>>,
    pub twist: u64,
}

impl SemilinearMap {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, |r| r.len())
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        let fd = &self.field;
        let tw: Vec<Fe> = v.iter().map(|&x| fd.pow(x, self.twist)).collect();
        self.matrix
            .iter()
            .map(|row| fd.sum(row.iter().zip(&tw).map(|(&a, &b)| fd.mul(a, b))))
            .collect()
    }

    /// `self` after `other`: `M1 (M2 v^(t2))^(t1) = M1 M2^(t1) v^(t1 t2)`.
    pub fn compose(&self, other: &SemilinearMap) -> SemilinearMap {
        let fd = &self.field;
        let m2: Vec<Vec<Fe>> = other
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| fd.pow(x, self.twist)).collect())
            .collect();
        SemilinearMap {
            field: fd.clone(),
            matrix: mat_mul(fd, &self.matrix, &m2),
            twist: self.twist * other.twist,
        }
    }

    pub fn rank(&self) -> usize {
        rank(&self.field, &self.matrix, self.cols())
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols()
    }
}

/// Hasse–Witt matrix `a_ij = c_{ip - j}` from `f^((p-1)/2)`, and whether it
/// is nonsingular (the curve is ordinary).
pub fn cartier_manin(curve: &Curve) -> ([[Fe; 2]; 2], bool) {
    let fd = curve.field();
    let p = fd.characteristic() as usize;
    let h = curve.f().pow(((p - 1) / 2) as u64);
    let mut m = [[Fe::ZERO; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = h.coeff((i + 1) * p - (j + 1));
        }
    }
    let det = fd.sub(fd.mul(m[0][0], m[1][1]), fd.mul(m[0][1], m[1][0]));
    (m, !det.is_zero())
}

/// Stable rank of the iterated Hasse–Witt matrix.
pub fn p_rank(curve: &Curve) -> usize {
    let fd = curve.field();
    let (m, _) = cartier_manin(curve);
    let a = SemilinearMap {
        field: fd.clone(),
        matrix: m.iter().map(|r| r.to_vec()).collect(),
        twist: fd.characteristic(),
    };
    a.compose(&a).rank()
}

/// A class `L` of exact order `p` with `g`, `div(g) = p R`, where `R` is the
/// reduced representative `E - deg(E) inf` of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTorsionBundle {
    cls: MumfordClass,
    rep: Divisor,
    g: FunctionElement,
}

fn check_order_p(curve: &Curve, cls: &MumfordClass) -> Result<()> {
    let p = curve.field().characteristic() as i64;
    if cls.is_identity() || !jac_scalar_mul(curve, p, cls).is_identity() {
        return Err(Error::NotOrderP);
    }
    Ok(())
}

impl PTorsionBundle {
    /// Finds the trivialization `g` spanning `L(-p R)`.
    pub fn new(curve: &Curve, cls: &MumfordClass) -> Result<PTorsionBundle> {
        check_order_p(curve, cls)?;
        let p = curve.field().characteristic() as i64;
        let rep = cls.divisor(curve)?;
        let space = rr_space(curve, &rep.scale(-p))?;
        if space.dim() != 1 {
            return Err(Error::Internal(format!(
                "h^0(-pR) = {} for an order-p class",
                space.dim()
            )));
        }
        let g = space.basis()[0].clone();
        Self::from_parts(curve, cls, g)
    }

    /// Validates externally supplied data.
    pub fn from_parts(curve: &Curve, cls: &MumfordClass, g: FunctionElement) -> Result<PTorsionBundle> {
        check_order_p(curve, cls)?;
        let p = curve.field().characteristic() as i64;
        let rep = cls.divisor(curve)?;
        if g.is_zero() || g.divisor()? != rep.scale(p) {
            return Err(Error::BadTrivialization);
        }
        Ok(PTorsionBundle {
            cls: cls.clone(),
            rep,
            g,
        })
    }

    pub fn class(&self) -> &MumfordClass {
        &self.cls
    }

    /// The divisor `R` with `L = O(R)`.
    pub fn rep(&self) -> &Divisor {
        &self.rep
    }

    pub fn g(&self) -> &FunctionElement {
        &self.g
    }
}

/// `dg / g`; regular and nonzero for a genuine order-`p` class.
pub fn cartier_class(curve: &Curve, l: &PTorsionBundle) -> Result<Differential> {
    let p = curve.field().characteristic() as i64;
    if l.g.divisor()? != l.rep.scale(p) {
        return Err(Error::BadTrivialization);
    }
    let gamma = l.g.derivative().div(&l.g)?;
    if gamma.is_zero() {
        return Err(Error::NotOrderP);
    }
    let w = Differential::new(gamma);
    if !w.divisor()?.is_effective() {
        return Err(Error::Internal("dlog form is not regular".into()));
    }
    Ok(w)
}

/// Coordinates `(c0, c1)` of a regular differential `(c0 + c1 x) dx / y`.
pub fn holomorphic_coords(w: &Differential) -> Option<[Fe; 2]> {
    let phi = w.coeff() * &FunctionElement::y(w.curve());
    if !phi.b().is_zero() || !phi.a().is_polynomial() || phi.a().num().deg() > 1 {
        return None;
    }
    let a = phi.a().num();
    Some([a.coeff(0), a.coeff(1)])
}

/// `xi -> xi^(p^n) * factor` on tails, landing in `target`.
fn power_tails(
    curve: &Curve,
    xi: &TailClass,
    power: u64,
    factor: Option<&FunctionElement>,
    target: &Divisor,
) -> Result<TailClass> {
    let mut out = TailClass::zero(target);
    for pl in xi.tails().keys() {
        let loc = Local::new(curve, pl);
        let t = loc.pow(&xi.local_tail(&loc), power);
        let hi = -target.get(pl);
        let img = match factor {
            None => t,
            Some(g) => {
                let lo = loc.valuation(&t).unwrap_or(hi);
                let mut m = hi - lo + 4;
                loop {
                    let prod = loc.mul(&t, &loc.expand(g, m)?);
                    if loc.precision(&prod) >= hi {
                        break prod;
                    }
                    m += 8;
                }
            }
        };
        out = out.with_local(&loc, &img)?;
    }
    Ok(out)
}

fn matrix_of(
    curve: &Curve,
    src: &H1Space,
    tgt: &H1Space,
    power: u64,
    factor: Option<&FunctionElement>,
) -> Result<SemilinearMap> {
    let mut cols = Vec::new();
    for b in src.basis() {
        let img = power_tails(curve, &b, power, factor, tgt.divisor())?;
        cols.push(tgt.coordinates(&img)?);
    }
    let matrix = (0..tgt.dim())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    Ok(SemilinearMap {
        field: curve.field().clone(),
        matrix,
        twist: power,
    })
}

/// Frobenius pullback on `H^1`. With `source = 0` this is `F*` on
/// `H^1(O)`; with `source = -R` the image in `H^1(-pR)` is identified with
/// `H^1(O)` by dividing by `g`.
pub fn frobenius_h1(
    curve: &Curve,
    source: &Divisor,
    trivialization: Option<&PTorsionBundle>,
) -> Result<SemilinearMap> {
    let p = curve.field().characteristic();
    let tgt = H1Space::new(curve, &Divisor::zero())?;
    if source.is_zero() {
        return matrix_of(curve, &tgt, &tgt, p, None);
    }
    let l = trivialization.ok_or(Error::MissingTrivialization)?;
    if *source != l.rep.neg() {
        return Err(Error::BundleMismatch);
    }
    let src = H1Space::new(curve, source)?;
    let ginv = l.g.inv()?;
    matrix_of(curve, &src, &tgt, p, Some(&ginv))
}

/// `xi -> xi^(p^n)` on `H^1(O)` computed directly on tails.
pub fn frobenius_power_h1(curve: &Curve, n: u32) -> Result<SemilinearMap> {
    let p = curve.field().characteristic();
    let h = H1Space::new(curve, &Divisor::zero())?;
    matrix_of(curve, &h, &h, p.pow(n), None)
}
