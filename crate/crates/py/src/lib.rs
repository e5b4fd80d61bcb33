//! Python bindings: curves over finite fields, Riemann-Roch dimensions,
//! rational `p`-torsion, surface lattices and certificates.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nefcert as core;
use core::cohomology::{cartier_manin, h0_dim, h1_dim, p_rank};
use core::fields::Field;
use core::hyperelliptic::{Curve, Divisor};
use core::jacobian::{find_p_torsion, jac_order};
use core::obstruction::{certificate_build, certificate_verify, Budget, Certificate};
use core::surface_lattice::{self as sl, Base, LatticeClass, RayAlternative};

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// `y^2 = f(x)` over `F_{p^k}`, `f` given from `x^5` down to the constant.
#[pyclass(name = "Curve", module = "nefcert", frozen)]
struct PyCurve {
    curve: Curve,
}

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (p, f, k = 1))]
    fn new(p: u64, f: Vec<i64>, k: u32) -> PyResult<Self> {
        let field = Field::new(p, k).map_err(err)?;
        let low: Vec<i64> = f.into_iter().rev().collect();
        Ok(PyCurve {
            curve: Curve::from_ints(&field, &low).map_err(err)?,
        })
    }

    /// A random curve drawn with a seeded generator.
    #[staticmethod]
    #[pyo3(signature = (p, seed, k = 1))]
    fn random(p: u64, seed: u64, k: u32) -> PyResult<Self> {
        let field = Field::new(p, k).map_err(err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(PyCurve {
            curve: Curve::random(&field, &mut rng),
        })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.curve.field().order()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.curve.genus()
    }

    fn point_count(&self, m: u32) -> PyResult<u64> {
        self.curve.point_count(m).map_err(err)
    }

    /// Entries as element indices (integers for a prime field).
    fn cartier_manin(&self) -> Vec<Vec<u32>> {
        let (m, _) = cartier_manin(&self.curve);
        m.iter().map(|r| r.iter().map(|c| c.index()).collect()).collect()
    }

    fn is_ordinary(&self) -> bool {
        cartier_manin(&self.curve).1
    }

    fn p_rank(&self) -> usize {
        p_rank(&self.curve)
    }

    fn jacobian_order(&self) -> PyResult<u64> {
        Ok(jac_order(&self.curve).map_err(err)?.jacobian_order)
    }

    fn frobenius_charpoly(&self) -> PyResult<Vec<i64>> {
        Ok(jac_order(&self.curve).map_err(err)?.charpoly.to_vec())
    }

    /// `h^0(n inf)`.
    fn h0_infinity(&self, n: i64) -> PyResult<usize> {
        h0_dim(&self.curve, &Divisor::infinity(n)).map_err(err)
    }

    /// `h^1(n inf)`.
    fn h1_infinity(&self, n: i64) -> PyResult<usize> {
        h1_dim(&self.curve, &Divisor::infinity(n)).map_err(err)
    }

    /// Checks `h^0(D) - h^0(K - D) = deg D - 1` on `count` random divisors;
    /// returns the number checked.
    fn riemann_roch_check(&self, count: usize, seed: u64) -> PyResult<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Divisor::infinity(2);
        for _ in 0..count {
            let a = self.curve.random_effective_divisor(3, &mut rng);
            let b = self.curve.random_effective_divisor(2, &mut rng);
            let d = a.sub(&b);
            let lhs = h0_dim(&self.curve, &d).map_err(err)? as i64 - h0_dim(&self.curve, &k.sub(&d)).map_err(err)? as i64;
            if lhs != d.degree() - 1 {
                return Err(PyRuntimeError::new_err(format!("Riemann-Roch fails for {d}")));
            }
        }
        Ok(count)
    }

    /// Mumford pairs `(u, v)` (coefficient indices, low to high) of the
    /// nonzero rational `p`-torsion found from `samples` random classes.
    #[pyo3(signature = (samples = 12, seed = 0))]
    fn p_torsion(&self, samples: usize, seed: u64) -> PyResult<Vec<(Vec<u32>, Vec<u32>)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = find_p_torsion(&self.curve, samples, &mut rng).map_err(err)?;
        Ok(t
            .iter()
            .map(|c| {
                let f = |p: &core::fields::Poly| p.coeffs().iter().map(|x| x.index()).collect();
                (f(c.u()), f(c.v()))
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Curve(y^2 = {} over F_{})", self.curve.f(), self.curve.field().order())
    }
}

/// Intersection lattice of `P^1 x P^1` or `P^2` blown up at `d` points.
#[pyclass(name = "SurfaceLattice", module = "nefcert", frozen)]
struct PySurfaceLattice {
    lat: sl::SurfaceLattice,
}

#[pymethods]
impl PySurfaceLattice {
    #[new]
    fn new(base: &str, d: usize) -> PyResult<Self> {
        let base: Base = base.parse().map_err(err)?;
        Ok(PySurfaceLattice {
            lat: sl::blowup_lattice(base, d),
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.lat.rank()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<i64>> {
        self.lat.gram.clone()
    }

    fn intersect(&self, a: Vec<i64>, b: Vec<i64>) -> PyResult<i64> {
        self.lat
            .intersect(&LatticeClass::new(a), &LatticeClass::new(b))
            .map_err(err)
    }

    fn signature(&self) -> PyResult<(usize, usize)> {
        sl::hodge_signature(&self.lat).map_err(err)
    }

    /// Partition of `curves` into the ray of `l` and the negative curves
    /// with `l . A = 0`, plus the applicable bound.
    #[pyo3(signature = (l, curves, rigid = false))]
    fn exceptional_curves<'py>(
        &self,
        py: Python<'py>,
        l: Vec<i64>,
        curves: Vec<Vec<i64>>,
        rigid: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cs: Vec<LatticeClass> = curves.into_iter().map(LatticeClass::new).collect();
        let alt = if rigid { RayAlternative::Rigid } else { RayAlternative::General };
        let rep = sl::exceptional_curves(&self.lat, &LatticeClass::new(l), &cs, alt).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("ray", rep.ray)?;
        d.set_item("negative", rep.negative)?;
        d.set_item("picard_number", rep.picard_number)?;
        d.set_item("bound", rep.bound)?;
        Ok(d)
    }
}

/// Classes `(L, curves)` of the ruling example on `P^1 x P^1` blown up at `d` points.
#[pyfunction]
fn ruling_example(d: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let (_, l, cs) = sl::ruling_example(d);
    (l.coords, cs.into_iter().map(|c| c.coords).collect())
}

#[pyfunction]
fn rankin_extremal(dim: usize, strict: bool) -> PyResult<usize> {
    sl::rankin_extremal(dim, strict).map_err(err)
}

/// Seeded certificate search; returns the certificate JSON.
#[pyfunction]
#[pyo3(signature = (p, seed, curves = None))]
fn search(py: Python<'_>, p: u64, seed: u64, curves: Option<usize>) -> PyResult<String> {
    let mut budget = Budget::default();
    if let Some(c) = curves {
        budget.curves = c;
    }
    let cert = py.detach(|| certificate_build(p, seed, &budget)).map_err(err)?;
    Ok(cert.to_json())
}

/// Verifies certificate JSON; returns `(valid, [(index, name, passed, detail)])`.
#[pyfunction]
fn verify(py: Python<'_>, json: &str) -> PyResult<(bool, Vec<(usize, String, bool, String)>)> {
    let cert = Certificate::from_json(json).map_err(err)?;
    let rep = py.detach(|| certificate_verify(&cert)).map_err(err)?;
    Ok((
        rep.passed(),
        rep.checks
            .into_iter()
            .map(|c| (c.index, c.name, c.passed, c.detail))
            .collect(),
    ))
}

#[pymodule]
#[pyo3(name = "nefcert")]
fn nefcert_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PySurfaceLattice>()?;
    m.add_function(wrap_pyfunction!(ruling_example, m)?)?;
    m.add_function(wrap_pyfunction!(rankin_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SCHEMA_VERSION", core::obstruction::SCHEMA_VERSION)?;
    Ok(())
}
