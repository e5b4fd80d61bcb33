//! Intersection lattices of blow-ups of `P^1 x P^1` and `P^2`, inertia by
//! exact rational diagonalization, Rankin-type bounds on obtuse vector
//! configurations, and exceptional-curve bookkeeping for a nef class.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    P1xP1,
    P2,
}

impl std::str::FromStr for Base {
    type Err = Error;
    fn from_str(s: &str) -> Result<Base> {
        match s.to_ascii_lowercase().as_str() {
            "p1xp1" => Ok(Base::P1xP1),
            "p2" => Ok(Base::P2),
            other => Err(Error::Malformed(format!("unknown base surface {other:?}"))),
        }
    }
}

/// Basis `(f1, f2, e_1..e_d)` over `P^1 x P^1`, `(h, e_1..e_d)` over `P^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLattice {
    pub base: Base,
    pub d: usize,
    pub gram: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    pub coords: Vec<i64>,
}

impl LatticeClass {
    pub fn new(coords: Vec<i64>) -> LatticeClass {
        LatticeClass { coords }
    }
}

pub fn blowup_lattice(base: Base, d: usize) -> SurfaceLattice {
    let head = match base {
        Base::P1xP1 => 2,
        Base::P2 => 1,
    };
    let n = head + d;
    let mut gram = vec![vec![0i64; n]; n];
    match base {
        Base::P1xP1 => {
            gram[0][1] = 1;
            gram[1][0] = 1;
        }
        Base::P2 => gram[0][0] = 1,
    }
    for i in head..n {
        gram[i][i] = -1;
    }
    SurfaceLattice { base, d, gram }
}

impl SurfaceLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Number of base classes before the exceptional ones.
    fn head(&self) -> usize {
        self.rank() - self.d
    }

    pub fn f1(&self) -> LatticeClass {
        self.unit(0)
    }

    pub fn f2(&self) -> LatticeClass {
        self.unit(1)
    }

    pub fn h(&self) -> LatticeClass {
        self.unit(0)
    }

    pub fn unit(&self, i: usize) -> LatticeClass {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        LatticeClass::new(c)
    }

    /// The exceptional class `e_i`, `i` from 1.
    pub fn e(&self, i: usize) -> LatticeClass {
        assert!(i >= 1 && i <= self.d);
        self.unit(self.head() + i - 1)
    }

    pub fn class(&self, coords: Vec<i64>) -> Result<LatticeClass> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(coords.len(), self.rank()));
        }
        Ok(LatticeClass::new(coords))
    }

    pub fn intersect(&self, a: &LatticeClass, b: &LatticeClass) -> Result<i64> {
        let n = self.rank();
        for v in [a, b] {
            if v.coords.len() != n {
                return Err(Error::DimensionMismatch(v.coords.len(), n));
            }
        }
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += a.coords[i] * self.gram[i][j] * b.coords[j];
            }
        }
        Ok(s)
    }

    fn rational_gram(&self) -> Vec<Vec<BigRational>> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `(n_plus, n_minus, n_zero)` of a symmetric rational form.
pub fn inertia(gram: &[Vec<BigRational>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<BigRational>> = gram.to_vec();
    let n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        // bring a nonzero diagonal entry to position k
        let piv = (k..n).find(|&i| !a[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                // all diagonal entries vanish: use e_k + e_j with a_kj != 0
                let pair = (k..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
                match pair {
                    None => {
                        zero += n - k;
                        break;
                    }
                    Some((i, j)) => {
                        // row/col j += row/col i
                        for c in 0..n {
                            let t = a[i][c].clone();
                            a[j][c] += t;
                        }
                        for r in 0..n {
                            let t = a[r][i].clone();
                            a[r][j] += t;
                        }
                        j
                    }
                }
            }
        };
        a.swap(k, piv);
        for row in a.iter_mut() {
            row.swap(k, piv);
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let t = &a[i][k] / &p;
            for c in k..n {
                let s = &t * &a[k][c];
                a[i][c] -= s;
            }
            for r in k..n {
                let s = &t * &a[r][k];
                a[r][i] -= s;
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

/// Signature of the intersection form; degenerate forms are an error.
pub fn hodge_signature(lat: &SurfaceLattice) -> Result<(usize, usize)> {
    let (p, n, z) = inertia(&lat.rational_gram());
    if z > 0 {
        return Err(Error::DegenerateGram(z));
    }
    Ok((p, n))
}

/// Rational kernel of a single linear form `w . x = 0`, one basis vector
/// per free coordinate.
fn orthogonal_basis(w: &[BigRational]) -> Vec<Vec<BigRational>> {
    let n = w.len();
    match w.iter().position(|x| !x.is_zero()) {
        None => (0..n)
            .map(|i| (0..n).map(|j| rat((i == j) as i64)).collect())
            .collect(),
        Some(p) => (0..n)
            .filter(|&i| i != p)
            .map(|i| {
                let mut v = vec![rat(0); n];
                v[i] = rat(1);
                v[p] = -&w[i] / &w[p];
                v
            })
            .collect(),
    }
}

fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let t = &m[i][c] / &m[r][c];
                for k in 0..ncols {
                    let s = &t * &m[r][k];
                    m[i][k] -= s;
                }
            }
        }
        r += 1;
    }
    r
}

/// `V = L^perp / (R L)` when `L^2 = 0`, or `L^perp` when `L^2 != 0`: a
/// rational basis (as vectors in the ambient lattice) and its Gram matrix.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub basis: Vec<Vec<BigRational>>,
    pub gram: Vec<Vec<BigRational>>,
    /// Whether `L` itself was divided out.
    pub mod_l: bool,
    l: Vec<BigRational>,
}

fn form(g: &[Vec<BigRational>], a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut s = rat(0);
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !g[i][j].is_zero() && !bj.is_zero() {
                s += ai * &g[i][j] * bj;
            }
        }
    }
    s
}

pub fn orthogonal_quotient(lat: &SurfaceLattice, l: &LatticeClass) -> Result<Quotient> {
    let g = lat.rational_gram();
    let lr: Vec<BigRational> = l.coords.iter().map(|&x| rat(x)).collect();
    if lr.len() != lat.rank() {
        return Err(Error::DimensionMismatch(lr.len(), lat.rank()));
    }
    let w: Vec<BigRational> = (0..lat.rank()).map(|j| form(&g, &lr, &unit_rat(lat.rank(), j))).collect();
    let perp = orthogonal_basis(&w);
    let l2 = lat.intersect(l, l)?;
    let mod_l = l2 == 0 && l.coords.iter().any(|&x| x != 0);
    let basis = if mod_l {
        // complement of L inside L^perp, chosen greedily
        let mut chosen: Vec<Vec<BigRational>> = vec![lr.clone()];
        for v in &perp {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if rank_rational(&trial) == trial.len() {
                chosen = trial;
            }
        }
        chosen.remove(0);
        chosen
    } else {
        perp
    };
    let gram = basis
        .iter()
        .map(|a| basis.iter().map(|b| form(&g, a, b)).collect())
        .collect();
    Ok(Quotient {
        basis,
        gram,
        mod_l,
        l: lr,
    })
}

fn unit_rat(n: usize, j: usize) -> Vec<BigRational> {
    (0..n).map(|i| rat((i == j) as i64)).collect()
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_negative_definite(&self) -> bool {
        let (p, n, z) = inertia(&self.gram);
        p == 0 && z == 0 && n == self.dim()
    }

    /// Coordinates of the image of `a` (which must lie in `L^perp`).
    pub fn project(&self, a: &LatticeClass) -> Option<Vec<BigRational>> {
        let n = a.coords.len();
        let k = self.dim();
        // solve a = sum c_i basis_i (+ t L when dividing by L)
        let mut gens = self.basis.clone();
        if self.mod_l {
            gens.push(self.l.clone());
        }
        let m = gens.len();
        // augmented system: columns = generators, rows = ambient coordinates
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = gens.iter().map(|g| g[r].clone()).collect();
                row.push(rat(a.coords[r]));
                row
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rat(1) / &rows[r][c];
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != r && !rows[i][c].is_zero() {
                    let t = rows[i][c].clone();
                    for kk in 0..=m {
                        let s = &t * &rows[r][kk];
                        rows[i][kk] -= s;
                    }
                }
            }
            piv_cols.push(c);
            r += 1;
        }
        if rows[r..].iter().any(|row| !row[m].is_zero()) {
            return None;
        }
        let mut sol = vec![rat(0); m];
        for (i, &c) in piv_cols.iter().enumerate() {
            sol[c] = rows[i][m].clone();
        }
        sol.truncate(k);
        Some(sol)
    }
}

/// Outcome of a Rankin-type count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankinReport {
    pub size: usize,
    pub bound: usize,
    pub holds: bool,
}

/// Checks `|S| <= 2 dim` (or `dim + 1` when `strict`) for a set whose
/// pairwise products are `<= 0` (`< 0`), under the dot product or the given
/// positive definite form.
pub fn rankin_check(
    dim: usize,
    s: &[Vec<BigRational>],
    strict: bool,
    gram: Option<&[Vec<BigRational>]>,
) -> Result<RankinReport> {
    if s.is_empty() {
        return Err(Error::Malformed("empty vector set".into()));
    }
    for v in s {
        if v.len() != dim {
            return Err(Error::DimensionMismatch(v.len(), dim));
        }
    }
    let id;
    let g = match gram {
        Some(g) => g,
        None => {
            id = (0..dim).map(|j| unit_rat(dim, j)).collect::<Vec<_>>();
            &id
        }
    };
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let ip = form(g, &s[i], &s[j]);
            let bad = if strict { !ip.is_negative() } else { ip.is_positive() };
            if bad {
                return Err(Error::RankinHypothesis(i, j));
            }
        }
    }
    let bound = if strict { dim + 1 } else { 2 * dim };
    Ok(RankinReport {
        size: s.len(),
        bound,
        holds: s.len() <= bound,
    })
}

fn primitive_grid(dim: usize, amp: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-amp..=amp).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1);
    out
}

fn max_clique(adj: &[Vec<bool>]) -> usize {
    fn grow(adj: &[Vec<bool>], cand: Vec<usize>, size: usize, best: &mut usize) {
        if size + cand.len() <= *best {
            return;
        }
        if cand.is_empty() {
            *best = size;
            return;
        }
        for (k, &v) in cand.iter().enumerate() {
            if size + cand.len() - k <= *best {
                return;
            }
            let next: Vec<usize> = cand[k + 1..].iter().copied().filter(|&w| adj[v][w]).collect();
            grow(adj, next, size + 1, best);
        }
    }
    let mut best = 0;
    grow(adj, (0..adj.len()).collect(), 0, &mut best);
    best
}

/// Largest configuration of primitive grid directions with pairwise dot
/// products `<= 0` (`< 0` when `strict`), for `dim <= 3`. The grid has
/// coordinates in `[-2, 2]` for `dim <= 2` and `[-1, 1]` for `dim = 3`.
pub fn rankin_extremal(dim: usize, strict: bool) -> Result<usize> {
    if dim == 0 || dim > 3 {
        return Err(Error::Malformed("brute force supports 1 <= dim <= 3".into()));
    }
    let amp = if dim == 3 { 1 } else { 2 };
    let pts = primitive_grid(dim, amp);
    let dot = |a: &Vec<i64>, b: &Vec<i64>| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let adj: Vec<Vec<bool>> = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| {
                    let d = dot(a, b);
                    a != b && if strict { d < 0 } else { d <= 0 }
                })
                .collect()
        })
        .collect();
    Ok(max_clique(&adj))
}

/// Which case of the count applies when `L^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayAlternative {
    /// No information about effective cycles on the ray `R>0 L`.
    General,
    /// Caller asserts that the ray carries no effective 1-cycle, or that
    /// every such cycle is a multiple of one curve.
    Rigid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalReport {
    /// Indices of curves with `L.A = 0` on the ray of `L`.
    pub ray: Vec<usize>,
    /// Indices of curves with `L.A = 0` and `A^2 < 0`.
    pub negative: Vec<usize>,
    pub picard_number: usize,
    pub bound: usize,
    pub rankin: Option<RankinReport>,
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    let rows = vec![
        a.iter().map(|&x| rat(x)).collect::<Vec<_>>(),
        b.iter().map(|&x| rat(x)).collect(),
    ];
    rank_rational(&rows) <= 1
}

/// Sorts the supplied curves by their intersection with the nef class `l`
/// and checks the applicable bound on the `L`-exceptional ones.
pub fn exceptional_curves(
    lat: &SurfaceLattice,
    l: &LatticeClass,
    curves: &[LatticeClass],
    alternative: RayAlternative,
) -> Result<ExceptionalReport> {
    let mut ray = Vec::new();
    let mut negative = Vec::new();
    for (i, a) in curves.iter().enumerate() {
        let deg = lat.intersect(l, a)?;
        if deg < 0 {
            return Err(Error::NotNef { index: i, degree: deg });
        }
        if deg != 0 {
            continue;
        }
        let a2 = lat.intersect(a, a)?;
        if proportional(&a.coords, &l.coords) && lat.intersect(l, l)? == 0 {
            ray.push(i);
        } else if a2 < 0 {
            negative.push(i);
        } else {
            return Err(Error::Internal(format!(
                "curve {i} has L.A = 0 and A^2 = {a2} off the ray"
            )));
        }
    }
    let rho = lat.rank();
    let l2 = lat.intersect(l, l)?;
    let bound = if l2 > 0 {
        rho - 1
    } else {
        match alternative {
            RayAlternative::General => 2 * (rho - 2),
            RayAlternative::Rigid => rho - 2,
        }
    };
    let rankin = if negative.is_empty() || l.coords.iter().all(|&x| x == 0) {
        None
    } else {
        let q = orthogonal_quotient(lat, l)?;
        let neg_gram: Vec<Vec<BigRational>> =
            q.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let images: Vec<Vec<BigRational>> = negative
            .iter()
            .map(|&i| q.project(&curves[i]).expect("exceptional curve lies in L-perp"))
            .collect();
        let strict = l2 > 0 || alternative == RayAlternative::Rigid;
        let rep = rankin_check(q.dim(), &images, false, Some(&neg_gram))?;
        let rep = if strict {
            RankinReport {
                bound: q.dim(),
                holds: rep.size <= q.dim(),
                size: rep.size,
            }
        } else {
            rep
        };
        Some(rep)
    };
    if negative.len() > bound {
        return Err(Error::Internal(format!(
            "{} exceptional curves exceed the bound {bound}",
            negative.len()
        )));
    }
    Ok(ExceptionalReport {
        ray,
        negative,
        picard_number: rho,
        bound,
        rankin,
    })
}

/// Maximum over connected components of (diameter + 1), adjacency being
/// `A . B > 0`.
pub fn l_equivalence_bound(lat: &SurfaceLattice, curves: &[LatticeClass]) -> Result<usize> {
    let n = curves.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if lat.intersect(&curves[i], &curves[j])? > 0 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut ecc = 0;
        while let Some(v) = queue.pop_front() {
            ecc = ecc.max(dist[v]);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(ecc + 1);
    }
    Ok(best)
}

/// The ruling example: `L = f2` with the fiber transforms `f2 - e_i` and the
/// exceptional curves `e_i`, plus a few curves positive on `L`.
pub fn ruling_example(d: usize) -> (SurfaceLattice, LatticeClass, Vec<LatticeClass>) {
    let lat = blowup_lattice(Base::P1xP1, d);
    let l = lat.f2();
    let mut curves = Vec::new();
    for i in 1..=d {
        let mut c = lat.f2().coords;
        c[1 + i] = -1;
        curves.push(LatticeClass::new(c));
    }
    for i in 1..=d {
        curves.push(lat.e(i));
    }
    curves.push(lat.f2());
    curves.push(lat.f1());
    let mut diag = lat.f1().coords;
    diag[1] = 1;
    curves.push(LatticeClass::new(diag));
    (lat, l, curves)
}

/// The plane example: `L = h` with the exceptional curves and some lines.
pub fn plane_example(d: usize) -> (SurfaceLattice, LatticeClass, Vec<LatticeClass>) {
    let lat = blowup_lattice(Base::P2, d);
    let l = lat.h();
    let mut curves: Vec<LatticeClass> = (1..=d).map(|i| lat.e(i)).collect();
    curves.push(lat.h());
    if d >= 1 {
        let mut line = lat.h().coords;
        line[1] = -1;
        curves.push(LatticeClass::new(line));
    }
    (lat, l, curves)
}
