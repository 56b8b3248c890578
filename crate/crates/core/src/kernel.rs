//! Reproducing kernels of `B_s`.
//!
//! Two independent routes are provided:
//!
//! * [`KernelEvaluator::inner`] — `K(z, w) = int_0^s xi(z, x) conj(xi(w, x)) dx`
//!   by quadrature on the solver mesh. This is the kernel used everywhere else.
//! * [`KernelEvaluator::hb`] — the Hermite–Biehler form built from
//!   `E(z) = xi(z, s) + i xi'(z, s)`. By the Lagrange identity the two differ by
//!   exactly the factor `pi`, for every potential.
//!
//! For real `q`, `xi(conj w, x) = conj(xi(w, x))`, so a single trace per
//! spectral point suffices.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::perturbed::{MeshSpec, SolutionTrace, Solver};
use crate::setup::ProblemSetup;
use crate::unperturbed::SpectralPoint;

/// Below this `|z - conj w|` the Hermite–Biehler kernel uses its Taylor form.
pub const DIAGONAL_GAP: f64 = 1e-3;
const CAUCHY_RADIUS: f64 = 1e-2;
const CAUCHY_NODES: usize = 32;

/// `R_ab`: 1 on `(0, a]`, linear down to 0 on `(a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TentWeight {
    pub a: f64,
    pub b: f64,
}

impl TentWeight {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a < b && b.is_finite()) {
            return Err(Error::Domain(format!(
                "tent weight needs 0 < a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(TentWeight { a, b })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.a {
            1.0
        } else if x >= self.b {
            0.0
        } else {
            (self.b - x) / (self.b - self.a)
        }
    }
}

type Key = (u64, u64);

fn key(z: SpectralPoint) -> Key {
    (z.z.re.to_bits(), z.z.im.to_bits())
}

/// Kernel evaluation on one solver mesh, with a trace cache.
///
/// Traces are cached by the exact bit pattern of the spectral point; readers
/// share the map, insertions take the write lock briefly.
#[derive(Debug)]
pub struct KernelEvaluator {
    solver: Solver,
    cache: RwLock<HashMap<Key, Arc<SolutionTrace>>>,
}

impl KernelEvaluator {
    pub fn new(setup: &ProblemSetup, mesh: &MeshSpec) -> Result<Self> {
        Ok(Self::from_solver(Solver::new(setup, mesh)?))
    }

    pub fn from_solver(solver: Solver) -> Self {
        KernelEvaluator {
            solver,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn setup(&self) -> &ProblemSetup {
        &self.solver.setup
    }

    pub fn trace(&self, z: SpectralPoint) -> Result<Arc<SolutionTrace>> {
        let k = key(z);
        if let Some(t) = self.cache.read().expect("trace cache poisoned").get(&k) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(self.solver.trace(z)?);
        let mut map = self.cache.write().expect("trace cache poisoned");
        Ok(Arc::clone(map.entry(k).or_insert(t)))
    }

    pub fn cached(&self) -> usize {
        self.cache.read().map(|m| m.len()).unwrap_or(0)
    }

    pub fn clear_cache(&self) {
        if let Ok(mut m) = self.cache.write() {
            m.clear();
        }
    }

    /// Index of the mesh edge at `x`.
    pub fn edge(&self, x: f64) -> Result<usize> {
        self.solver.grid.edge_index(x)
    }

    /// `K(z, w)` over the whole interval.
    pub fn inner(&self, z: SpectralPoint, w: SpectralPoint) -> Result<C> {
        let last = self.solver.grid.len() - 1;
        self.inner_upto(z, w, last)
    }

    /// `int_0^{x_upto} xi(z) conj(xi(w))`: the kernel of the space on a
    /// shorter interval ending at a mesh point.
    pub fn inner_upto(&self, z: SpectralPoint, w: SpectralPoint, upto: usize) -> Result<C> {
        let tz = self.trace(z)?;
        let tw = self.trace(w)?;
        let g = &self.solver.grid;
        Ok((0..=upto)
            .map(|i| g.w[i] * tz.xi[i] * tw.xi[i].conj())
            .sum())
    }

    /// `K(lambda, lambda) = ||xi(lambda, .)||^2`.
    pub fn norming_constant(&self, lambda: f64) -> Result<f64> {
        let last = self.solver.grid.len() - 1;
        self.norming_upto(lambda, last)
    }

    pub fn norming_upto(&self, lambda: f64, upto: usize) -> Result<f64> {
        let k = self
            .inner_upto(
                SpectralPoint::real(lambda),
                SpectralPoint::real(lambda),
                upto,
            )?
            .re;
        if k > 0.0 && k.is_finite() {
            Ok(k)
        } else {
            Err(Error::NonConvergence(format!(
                "norming constant at lambda = {lambda} is {k}"
            )))
        }
    }

    /// Tent weight sampled on the mesh; `a` must be a mesh edge.
    pub fn tent(&self, a: f64) -> Result<Vec<f64>> {
        let g = &self.solver.grid;
        let r = TentWeight::new(a, g.end())?;
        self.edge(a)
            .map_err(|_| Error::Domain(format!("a = {a} must be a mesh breakpoint")))?;
        Ok(g.x.iter().map(|&x| r.eval(x)).collect())
    }

    /// `J_ab(z, w) = int_0^b xi(z) R_ab conj(xi(w))` with `b` the interval end.
    pub fn oversampling(&self, a: f64, z: SpectralPoint, w: SpectralPoint) -> Result<C> {
        let r = self.tent(a)?;
        self.oversampling_with(&r, z, w)
    }

    /// As [`Self::oversampling`] with precomputed tent samples.
    pub fn oversampling_with(&self, r: &[f64], z: SpectralPoint, w: SpectralPoint) -> Result<C> {
        let tz = self.trace(z)?;
        let tw = self.trace(w)?;
        let g = &self.solver.grid;
        if r.len() != g.len() {
            return Err(Error::Shape(format!(
                "tent has {} samples, mesh has {}",
                r.len(),
                g.len()
            )));
        }
        Ok((0..g.len())
            .map(|i| g.w[i] * r[i] * tz.xi[i] * tw.xi[i].conj())
            .sum())
    }

    /// `E(z) = xi(z, x_k) + i xi'(z, x_k)` at mesh point `k` (default: the end).
    pub fn hb_function(&self, z: SpectralPoint, upto: Option<usize>) -> Result<C> {
        let (v, d) = self.solver.endpoint(z, upto)?;
        Ok(v + C::i() * d)
    }

    /// Hermite–Biehler kernel
    /// `(E#(z) E(conj w) - E(z) E#(conj w)) / (2 pi i (z - conj w))`.
    pub fn hb(&self, z: SpectralPoint, w: SpectralPoint) -> Result<C> {
        self.hb_upto(z, w, None)
    }

    pub fn hb_upto(&self, z: SpectralPoint, w: SpectralPoint, upto: Option<usize>) -> Result<C> {
        let wb = w.z.conj();
        let d = z.z - wb;
        if d.norm() < DIAGONAL_GAP {
            return self.hb_diagonal(z.z, wb, upto);
        }
        let ez = self.hb_function(z, upto)?;
        let ew = self.hb_function(SpectralPoint::new(wb), upto)?;
        let sz = self.hb_sharp(z.z, upto)?;
        let sw = self.hb_sharp(wb, upto)?;
        Ok((sz * ew - ez * sw) / (2.0 * PI * C::i() * d))
    }

    /// `E#(z) = conj(E(conj z))`.
    fn hb_sharp(&self, z: C, upto: Option<usize>) -> Result<C> {
        Ok(self.hb_function(SpectralPoint::new(z.conj()), upto)?.conj())
    }

    /// Near the diagonal: with `f(u) = A(u) B(v) - B(u) A(v)`, `v = conj w`,
    /// `pi K = f1 + f2 d / 2 + f3 d^2 / 6`, `fk` the k-th derivative at `v`
    /// and `d = z - v`; the derivatives come from Cauchy integrals.
    fn hb_diagonal(&self, z: C, v: C, upto: Option<usize>) -> Result<C> {
        let (a, b) = self.solver.endpoint(SpectralPoint::new(v), upto)?;
        let circle = self.circle_values(v, upto)?;
        let f = |k| {
            let [da, db] = cauchy_derivative(&circle, k);
            da * b - db * a
        };
        let d = z - v;
        Ok((f(1) + f(2) * d / 2.0 + f(3) * d * d / 6.0) / PI)
    }

    /// `(A, B)` on the circle of radius `CAUCHY_RADIUS` about `v`,
    /// `A = xi(., x_j)`, `B = xi'(., x_j)`.
    fn circle_values(&self, v: C, upto: Option<usize>) -> Result<Vec<(C, C)>> {
        (0..CAUCHY_NODES)
            .map(|j| {
                let e = C::from_polar(1.0, 2.0 * PI * j as f64 / CAUCHY_NODES as f64);
                self.solver
                    .endpoint(SpectralPoint::new(v + CAUCHY_RADIUS * e), upto)
            })
            .collect()
    }
}

/// `k!/(M r^k) sum_m f(v + r e^{i t_m}) e^{-i k t_m}` for both components.
fn cauchy_derivative(vals: &[(C, C)], k: i32) -> [C; 2] {
    let m = vals.len() as f64;
    let (mut sa, mut sb) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    for (j, (a, b)) in vals.iter().enumerate() {
        let e = C::from_polar(1.0, -2.0 * PI * (k as f64) * j as f64 / m);
        sa += a * e;
        sb += b * e;
    }
    let fact = (1..=k).product::<i32>() as f64;
    let c = fact / (m * CAUCHY_RADIUS.powi(k));
    [sa * c, sb * c]
}

fn mesh_for(setup: &ProblemSetup, pts: &[SpectralPoint], breakpoints: &[f64]) -> MeshSpec {
    let k = pts.iter().map(|p| p.z.norm()).fold(0.0, f64::max).sqrt();
    MeshSpec::default()
        .with_k_max((k + 4.0 * PI / setup.s).max(10.0))
        .with_breakpoints(breakpoints)
}

/// `K_s(z, w)` on a fresh mesh.
pub fn kernel_inner(setup: &ProblemSetup, z: SpectralPoint, w: SpectralPoint) -> Result<C> {
    KernelEvaluator::new(setup, &mesh_for(setup, &[z, w], &[]))?.inner(z, w)
}

/// Hermite–Biehler form of the kernel on a fresh mesh.
pub fn kernel_hb(setup: &ProblemSetup, z: SpectralPoint, w: SpectralPoint) -> Result<C> {
    KernelEvaluator::new(setup, &mesh_for(setup, &[z, w], &[]))?.hb(z, w)
}

/// `J_ab(z, w)` with `b = setup.s`.
pub fn oversampling_kernel(
    setup: &ProblemSetup,
    a: f64,
    z: SpectralPoint,
    w: SpectralPoint,
) -> Result<C> {
    TentWeight::new(a, setup.s)?;
    KernelEvaluator::new(setup, &mesh_for(setup, &[z, w], &[a]))?.oversampling(a, z, w)
}

/// `K_s(lambda, lambda)`.
pub fn norming_constant(setup: &ProblemSetup, lambda: f64) -> Result<f64> {
    KernelEvaluator::new(setup, &mesh_for(setup, &[SpectralPoint::real(lambda)], &[]))?
        .norming_constant(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::Potential;
    use crate::spectrum::compute_spectrum;

    fn st(nu: f64, s: f64, q: Potential, gamma: f64) -> ProblemSetup {
        ProblemSetup::new(nu, s, q, gamma).unwrap()
    }

    fn sp(re: f64, im: f64) -> SpectralPoint {
        SpectralPoint::new(C::new(re, im))
    }

    #[test]
    fn sine_examples() {
        let s = st(0.5, PI, Potential::zero(), 0.0);
        let k = kernel_inner(&s, 1.0.into(), 1.0.into()).unwrap();
        assert!((k - PI / 2.0).norm() < 1e-9, "{k}");
        let k = kernel_inner(&s, 1.0.into(), 4.0.into()).unwrap();
        assert!(k.norm() < 1e-9, "{k}");
        assert!((norming_constant(&s, 4.0).unwrap() - PI / 8.0).abs() < 1e-9);
    }

    #[test]
    fn norming_matches_spectrum_entry() {
        let s = st(0.75, 1.0, Potential::power(1.0, 0.5, 4.0).unwrap(), 0.0);
        let sp = compute_spectrum(&s, 3).unwrap();
        let k = norming_constant(&s, sp.eigenvalues[0]).unwrap();
        assert!((k - sp.norming[0]).abs() < 1e-8 * k);
    }

    #[test]
    fn hermitian_symmetry_and_positivity() {
        let s = st(1.5, 1.0, Potential::bump(2.0, 0.4, 0.1).unwrap(), 0.7);
        let ev = KernelEvaluator::new(&s, &MeshSpec::default()).unwrap();
        let (z, w) = (sp(3.0, 1.5), sp(-2.0, 0.5));
        let a = ev.inner(z, w).unwrap();
        let b = ev.inner(w, z).unwrap();
        assert!((a - b.conj()).norm() < 1e-12 * a.norm());
        assert!(ev.norming_constant(7.0).unwrap() > 0.0);
        assert!(ev.cached() >= 3);
    }

    #[test]
    fn two_routes_differ_by_pi() {
        for s in [
            st(0.5, PI, Potential::zero(), 0.0),
            st(0.75, 1.0, Potential::power(1.0, 0.5, 4.0).unwrap(), 0.0),
            st(2.0, 2.0, Potential::constant(-3.0), 1.0),
        ] {
            let ev = KernelEvaluator::new(&s, &MeshSpec::default()).unwrap();
            for (z, w) in [
                (sp(1.0, 0.0), sp(1.0, 0.0)),
                (sp(5.0, 2.0), sp(-1.0, 1.0)),
                (sp(30.0, -1.0), sp(2.0, 0.0)),
            ] {
                let r = ev.inner(z, w).unwrap() / ev.hb(z, w).unwrap();
                assert!((r - PI).norm() < 1e-7, "{r}");
            }
        }
    }

    #[test]
    fn diagonal_branch_is_continuous() {
        let s = st(0.75, 1.0, Potential::constant(2.0), 0.3);
        let ev = KernelEvaluator::new(&s, &MeshSpec::default()).unwrap();
        let w = sp(4.0, -0.5);
        let on = ev.hb(sp(4.0, 0.5), w).unwrap();
        let mut prev = f64::INFINITY;
        for h in [1e-1, 3e-2, 1e-2, 3e-3] {
            let off = ev.hb(sp(4.0 + h, 0.5), w).unwrap();
            let gap = (off - on).norm();
            assert!(gap < prev);
            prev = gap;
        }
        // both branches agree at the switch
        let z = sp(4.0 + 1.01e-3, 0.5);
        let outside = ev.hb(z, w).unwrap();
        let taylor = ev.hb_diagonal(z.z, w.z.conj(), None).unwrap();
        assert!(
            (taylor - outside).norm() < 1e-9 * on.norm(),
            "{taylor} {outside}"
        );
    }

    #[test]
    fn diagonal_is_real_positive() {
        let s = st(0.5, PI, Potential::zero(), 0.0);
        let ev = KernelEvaluator::new(&s, &MeshSpec::default()).unwrap();
        let z = sp(2.0, 1.0);
        let k = ev.hb(z, z).unwrap();
        assert!(k.re > 0.0 && k.im.abs() <= 1e-8 * k.re, "{k}");
        assert!((ev.inner(z, z).unwrap() / k - PI).norm() < 1e-6);
    }

    #[test]
    fn tent_kernel_half_order_oracle() {
        let s = st(0.5, PI, Potential::zero(), 0.0);
        let a = PI / 2.0;
        let j = oversampling_kernel(&s, a, 1.0.into(), 1.0.into()).unwrap();
        // int_0^{pi/2} sin^2 + int_{pi/2}^{pi} (pi - x)/(pi/2) sin^2 = pi/4 + (pi^2/16 + 1/4) * 2/pi
        let want = PI / 4.0 + (PI * PI / 16.0 + 0.25) * 2.0 / PI;
        assert!((j.re - want).abs() < 1e-10, "{} vs {want}", j.re);
    }

    #[test]
    fn tent_kernel_limit_is_full_kernel() {
        let s = st(0.75, 1.0, Potential::constant(1.0), 0.0);
        let (z, w) = (sp(3.0, 1.0), sp(10.0, 0.0));
        let j = oversampling_kernel(&s, 1.0 - 1e-6, z, w).unwrap();
        let k = kernel_inner(&s, z, w).unwrap();
        assert!((j - k).norm() < 1e-4 * k.norm());
        assert!(oversampling_kernel(&s, 1.5, z, w).is_err());
    }

    #[test]
    fn tent_weight_shape() {
        let r = TentWeight::new(0.5, 1.0).unwrap();
        assert_eq!(r.eval(0.2), 1.0);
        assert_eq!(r.eval(0.75), 0.5);
        assert_eq!(r.eval(1.0), 0.0);
        assert!(TentWeight::new(1.0, 1.0).is_err());
    }
}
