use crate::error::Result;
use crate::fields::linalg::{kernel, solve_combination};
use crate::fields::{Fe, Poly, RationalFunction};
use crate::hyperelliptic::{Curve, Divisor, FunctionElement, Local, Place};

/// A basis of `L(D) = { phi : div(phi) + D >= 0 }`.
///
/// Elements are `(A + B y) / h` for a fixed monic `h` clearing the finite
/// poles allowed by `D`; coordinates refer to the monomials `x^i` (`i <= deg_a`)
/// followed by `x^j y` (`j <= deg_b`).
#[derive(Clone, Debug)]
pub struct RRSpace {
    curve: Curve,
    divisor: Divisor,
    h: Poly,
    deg_a: i64,
    deg_b: i64,
    vecs: Vec<Vec<Fe>>,
    basis: Vec<FunctionElement>,
}

impl RRSpace {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FunctionElement] {
        &self.basis
    }

    fn ambient(&self) -> usize {
        (self.deg_a + 1 + self.deg_b + 1) as usize
    }

    /// The element `sum c_i basis_i`.
    pub fn element(&self, c: &[Fe]) -> FunctionElement {
        let fd = self.curve.field();
        let mut w = vec![Fe::ZERO; self.ambient()];
        for (ci, v) in c.iter().zip(&self.vecs) {
            for (x, &y) in w.iter_mut().zip(v) {
                *x = fd.add(*x, fd.mul(*ci, y));
            }
        }
        self.from_monomials(&w)
    }

    fn from_monomials(&self, w: &[Fe]) -> FunctionElement {
        let fd = self.curve.field();
        let na = (self.deg_a + 1) as usize;
        let a = Poly::from_coeffs(fd, w[..na].to_vec());
        let b = Poly::from_coeffs(fd, w[na..].to_vec());
        FunctionElement::new(
            &self.curve,
            RationalFunction::new(a, self.h.clone()).unwrap(),
            RationalFunction::new(b, self.h.clone()).unwrap(),
        )
    }

    /// Coordinates of `phi` in the basis, or `None` if `phi` is not in `L(D)`.
    pub fn coordinates(&self, phi: &FunctionElement) -> Option<Vec<Fe>> {
        if phi.is_zero() {
            return Some(vec![Fe::ZERO; self.dim()]);
        }
        let hp = RationalFunction::from_poly(self.h.clone());
        let (a, b) = (phi.a().mul(&hp), phi.b().mul(&hp));
        if !a.is_polynomial() || !b.is_polynomial() {
            return None;
        }
        if a.num().deg() > self.deg_a || b.num().deg() > self.deg_b {
            return None;
        }
        let mut w = vec![Fe::ZERO; self.ambient()];
        let na = (self.deg_a + 1) as usize;
        for (i, &c) in a.num().coeffs().iter().enumerate() {
            w[i] = c;
        }
        for (j, &c) in b.num().coeffs().iter().enumerate() {
            w[na + j] = c;
        }
        solve_combination(self.curve.field(), &self.vecs, &w)
    }

    pub fn contains(&self, phi: &FunctionElement) -> bool {
        self.coordinates(phi).is_some()
    }
}

fn ceil_div(a: i64, e: i64) -> i64 {
    -((-a).div_euclid(e))
}

/// Riemann–Roch space of `d`: an ambient space of `A + B y` with bounded
/// pole order at infinity, cut down by valuation conditions.
pub fn rr_space(curve: &Curve, d: &Divisor) -> Result<RRSpace> {
    let fd = curve.field();
    // h clears the allowed finite poles
    let mut exps: std::collections::BTreeMap<Poly, i64> = Default::default();
    for (pl, n) in d.iter() {
        if let (Some(u), true) = (pl.u(), n > 0) {
            let k = ceil_div(n, pl.ramification());
            let e = exps.entry(u.clone()).or_insert(0);
            *e = (*e).max(k);
        }
    }
    let mut h = Poly::one(fd);
    for (u, &k) in &exps {
        h = &h * &u.pow(k as u64);
    }
    let m = d.get(&Place::Infinity) + 2 * h.deg();
    let deg_a = if m >= 0 { m.div_euclid(2) } else { -1 };
    let deg_b = if m >= 5 { (m - 5).div_euclid(2) } else { -1 };
    let mut space = RRSpace {
        curve: curve.clone(),
        divisor: d.clone(),
        h: h.clone(),
        deg_a,
        deg_b,
        vecs: Vec::new(),
        basis: Vec::new(),
    };
    let n = space.ambient();
    if n == 0 {
        return Ok(space);
    }
    // conditions v_P(A + B y) >= v_P(h) - D(P) at the relevant finite places
    let mut places: Vec<Place> = Vec::new();
    for u in exps.keys() {
        places.extend(curve.places_over(u));
    }
    for (pl, k) in d.iter() {
        if k < 0 && !pl.is_infinity() && !places.contains(pl) {
            places.push(pl.clone());
        }
    }
    let mut cols: Vec<Vec<Fe>> = vec![Vec::new(); n];
    for pl in &places {
        let u = pl.u().unwrap();
        let need = pl.ramification() * exps.get(u).copied().unwrap_or(0) - d.get(pl);
        if need <= 0 {
            continue;
        }
        let loc = Local::new(curve, pl);
        let zero = Poly::zero(fd);
        for (i, col) in cols.iter_mut().enumerate() {
            let (a, b) = if (i as i64) <= deg_a {
                (Poly::monomial(fd, fd.one(), i), zero.clone())
            } else {
                let j = i - (deg_a + 1) as usize;
                (zero.clone(), Poly::monomial(fd, fd.one(), j))
            };
            let e = loc.expand_polys(&a, &b, need);
            col.extend(loc.coords(&e, 0, need)?);
        }
    }
    let nrows = cols[0].len();
    let rows: Vec<Vec<Fe>> = (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let vecs = if nrows == 0 {
        (0..n)
            .map(|i| {
                let mut v = vec![Fe::ZERO; n];
                v[i] = fd.one();
                v
            })
            .collect()
    } else {
        kernel(fd, &rows, n)
    };
    space.basis = vecs.iter().map(|v| space.from_monomials(v)).collect();
    space.vecs = vecs;
    Ok(space)
}

/// `h^0(D)`.
pub fn h0_dim(curve: &Curve, d: &Divisor) -> Result<usize> {
    Ok(rr_space(curve, d)?.dim())
}

/// `h^1(D) = h^0(K - D)`.
pub fn h1_dim(curve: &Curve, d: &Divisor) -> Result<usize> {
    let k = crate::hyperelliptic::canonical_divisor(curve);
    h0_dim(curve, &k.sub(d))
}
