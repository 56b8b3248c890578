//! The regular solution `xi(z, x)` of
//! `-xi'' + ((nu^2 - 1/4)/x^2 + q(x) - z) xi = 0`, normalised like `xi_nu` at 0.
//!
//! The solver starts from a Frobenius seed at `x0 = 1e-6 s` and integrates
//! with a fourth-order Magnus method on a mesh that is geometric near the
//! origin and uniform further out. Every panel carries a Gauss–Legendre rule,
//! so traces double as quadrature data.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::setup::ProblemSetup;
use crate::unperturbed::{self, SpectralPoint};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const C1: f64 = 0.5 - SQRT3 / 6.0;
const C2: f64 = 0.5 + SQRT3 / 6.0;

/// Mesh parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    /// First node as a fraction of `s`.
    pub x0_rel: f64,
    /// Panel growth factor in the graded part.
    pub ratio: f64,
    /// Where grading stops, as a fraction of `s`.
    pub graded_until_rel: f64,
    pub nodes_per_panel: usize,
    /// Largest `|sqrt z|` the mesh has to resolve.
    pub k_max: f64,
    /// Extra points that must be panel edges.
    pub breakpoints: Vec<f64>,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec {
            x0_rel: 1e-6,
            ratio: 1.05,
            graded_until_rel: 0.1,
            nodes_per_panel: 10,
            k_max: 50.0,
            breakpoints: Vec::new(),
        }
    }
}

impl MeshSpec {
    pub fn with_k_max(mut self, k: f64) -> Self {
        self.k_max = k;
        self
    }

    pub fn with_breakpoints(mut self, b: &[f64]) -> Self {
        self.breakpoints.extend_from_slice(b);
        self
    }

    /// Mesh adequate for eigenvalues up to `lambda_max`.
    pub fn for_lambda(lambda_max: f64) -> Self {
        MeshSpec::default().with_k_max(lambda_max.abs().sqrt().max(10.0))
    }

    fn validate(&self) -> Result<()> {
        if !(self.x0_rel > 0.0 && self.x0_rel <= 1e-4) {
            return Err(Error::Domain(format!(
                "mesh must start at x0 <= 1e-4 s, got {}",
                self.x0_rel
            )));
        }
        if !(self.ratio > 1.0 && self.ratio < 2.0) {
            return Err(Error::Domain("mesh ratio must lie in (1, 2)".into()));
        }
        if !(self.graded_until_rel > 0.0 && self.graded_until_rel < 1.0) {
            return Err(Error::Domain("graded part must end inside (0, s)".into()));
        }
        if self.nodes_per_panel < 2 {
            return Err(Error::Domain("need at least 2 nodes per panel".into()));
        }
        if !(self.k_max.is_finite() && self.k_max > 0.0) {
            return Err(Error::Domain("k_max must be positive".into()));
        }
        Ok(())
    }
}

/// Points, weights and precomputed potential samples for one setup.
///
/// Layout: `edge_0, m Gauss nodes, edge_1, m Gauss nodes, ..., edge_P`.
#[derive(Debug)]
pub struct Grid {
    pub x: Vec<f64>,
    /// Quadrature weights; zero at panel edges.
    pub w: Vec<f64>,
    pub m: usize,
    /// `V` at the two Magnus nodes of each step `x[i] -> x[i+1]`.
    vg: Vec<[f64; 2]>,
    gl: GaussLegendre,
    integ: Vec<f64>,
}

impl Grid {
    fn build(setup: &ProblemSetup, spec: &MeshSpec) -> Result<Grid> {
        spec.validate()?;
        let s = setup.s;
        let x0 = spec.x0_rel * s;
        let h_uniform = (spec.graded_until_rel * (spec.ratio - 1.0) * s).min(2.0 / spec.k_max);
        let mut stops: Vec<f64> = spec
            .breakpoints
            .iter()
            .chain(setup.q.kinks().iter())
            .copied()
            .filter(|&b| b > x0 * 1.5 && b < s * (1.0 - 1e-12))
            .collect();
        stops.push(s);
        stops.sort_by(f64::total_cmp);
        stops.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * s);

        let mut edges = vec![x0];
        let mut x = x0;
        for &stop in &stops {
            while x < stop {
                let width = ((spec.ratio - 1.0) * x).min(h_uniform);
                let mut next = x + width;
                if next > stop - 0.3 * width {
                    next = stop;
                }
                edges.push(next);
                x = next;
            }
        }

        let m = spec.nodes_per_panel;
        let gl = GaussLegendre::new(m);
        let mut xs = Vec::with_capacity(edges.len() * (m + 1));
        let mut ws = Vec::with_capacity(xs.capacity());
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            xs.push(a);
            ws.push(0.0);
            for (t, wt) in gl.nodes.iter().zip(&gl.weights) {
                xs.push(c + h * t);
                ws.push(h * wt);
            }
        }
        xs.push(*edges.last().unwrap());
        ws.push(0.0);

        let vg = xs
            .windows(2)
            .map(|p| {
                let h = p[1] - p[0];
                [setup.v(p[0] + C1 * h), setup.v(p[0] + C2 * h)]
            })
            .collect();
        let integ = gl.integration_matrix();
        Ok(Grid {
            x: xs,
            w: ws,
            m,
            vg,
            gl,
            integ,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x0(&self) -> f64 {
        self.x[0]
    }

    pub fn end(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn panels(&self) -> usize {
        (self.x.len() - 1) / (self.m + 1)
    }

    /// Index of the panel edge at `x` (must be an edge, up to rounding).
    pub fn edge_index(&self, x: f64) -> Result<usize> {
        let tol = 1e-10 * self.end();
        (0..=self.panels())
            .map(|p| p * (self.m + 1))
            .find(|&i| (self.x[i] - x).abs() <= tol)
            .ok_or_else(|| Error::Domain(format!("{x} is not a mesh breakpoint")))
    }

    /// Cumulative integrals `int_{x0}^{x_i} f` at every point.
    pub fn cumulative(&self, f: &[C]) -> Vec<C> {
        let m = self.m;
        let mut out = vec![C::new(0.0, 0.0); f.len()];
        let mut acc = C::new(0.0, 0.0);
        for p in 0..self.panels() {
            let e = p * (m + 1);
            let h = 0.5 * (self.x[e + m + 1] - self.x[e]);
            out[e] = acc;
            for i in 0..m {
                let mut v = C::new(0.0, 0.0);
                for j in 0..m {
                    v += self.integ[i * m + j] * f[e + 1 + j];
                }
                out[e + 1 + i] = acc + h * v;
            }
            let total: C = (0..m).map(|j| self.gl.weights[j] * f[e + 1 + j]).sum();
            acc += h * total;
        }
        *out.last_mut().unwrap() = acc;
        out
    }
}

/// `(cosh mu, sinh(mu)/mu)` as functions of `mu^2`.
#[inline]
fn ch_shc(mu2: C) -> (C, C) {
    if mu2.norm() < 1e-3 {
        let (mut ch, mut sh) = (C::new(1.0, 0.0), C::new(1.0, 0.0));
        let (mut tc, mut ts) = (C::new(1.0, 0.0), C::new(1.0, 0.0));
        for k in 1..8 {
            let k = k as f64;
            tc *= mu2 / ((2.0 * k - 1.0) * (2.0 * k));
            ts *= mu2 / ((2.0 * k) * (2.0 * k + 1.0));
            ch += tc;
            sh += ts;
        }
        (ch, sh)
    } else {
        let mu = mu2.sqrt();
        (mu.cosh(), mu.sinh() / mu)
    }
}

#[inline]
fn ch_shc_real(mu2: f64) -> (f64, f64) {
    if mu2.abs() < 1e-3 {
        let (mut ch, mut sh, mut tc, mut ts) = (1.0, 1.0, 1.0, 1.0);
        for k in 1..8 {
            let k = k as f64;
            tc *= mu2 / ((2.0 * k - 1.0) * (2.0 * k));
            ts *= mu2 / ((2.0 * k) * (2.0 * k + 1.0));
            ch += tc;
            sh += ts;
        }
        (ch, sh)
    } else if mu2 > 0.0 {
        let mu = mu2.sqrt();
        (mu.cosh(), mu.sinh() / mu)
    } else {
        let mu = (-mu2).sqrt();
        (mu.cos(), mu.sin() / mu)
    }
}

/// One Magnus step for `y' = [[0, 1], [V - z, 0]] y`.
#[inline]
fn magnus_step(h: f64, v: [f64; 2], z: C, y: [C; 2]) -> [C; 2] {
    let b1 = v[0] - z;
    let b2 = v[1] - z;
    let alpha = (SQRT3 / 12.0) * h * h * (b1 - b2);
    let gamma = 0.5 * h * (b1 + b2);
    let (ch, shc) = ch_shc(alpha * alpha + h * gamma);
    [
        (ch + shc * alpha) * y[0] + shc * h * y[1],
        shc * gamma * y[0] + (ch - shc * alpha) * y[1],
    ]
}

#[inline]
fn magnus_step_real(h: f64, v: [f64; 2], z: f64, y: [f64; 2]) -> [f64; 2] {
    let b1 = v[0] - z;
    let b2 = v[1] - z;
    let alpha = (SQRT3 / 12.0) * h * h * (b1 - b2);
    let gamma = 0.5 * h * (b1 + b2);
    let (ch, shc) = ch_shc_real(alpha * alpha + h * gamma);
    [
        (ch + shc * alpha) * y[0] + shc * h * y[1],
        shc * gamma * y[0] + (ch - shc * alpha) * y[1],
    ]
}

/// `xi(z, .)` and `xi'(z, .)` at every mesh point.
#[derive(Debug, Clone)]
pub struct SolutionTrace {
    pub z: SpectralPoint,
    pub grid: Arc<Grid>,
    pub xi: Vec<C>,
    pub xi_prime: Vec<C>,
}

impl SolutionTrace {
    /// `int_0^{x_upto} xi_self xi_other dx` (bilinear, no conjugation).
    pub fn dot(&self, other: &SolutionTrace, upto: usize) -> C {
        (0..=upto)
            .map(|i| self.grid.w[i] * self.xi[i] * other.xi[i])
            .sum()
    }

    /// Weighted bilinear product `int xi_self r(x) xi_other`.
    pub fn dot_weighted(&self, other: &SolutionTrace, r: &[f64]) -> C {
        (0..self.xi.len())
            .map(|i| self.grid.w[i] * r[i] * self.xi[i] * other.xi[i])
            .sum()
    }

    /// `int_0^{x_upto} xi phi dx` for real samples `phi` on the grid.
    pub fn dot_profile(&self, phi: &[f64], upto: usize) -> C {
        (0..=upto)
            .map(|i| self.grid.w[i] * phi[i] * self.xi[i])
            .sum()
    }

    /// `||xi||^2` over the whole grid.
    pub fn norm_sq(&self) -> f64 {
        self.xi
            .iter()
            .zip(&self.grid.w)
            .map(|(v, w)| w * v.norm_sqr())
            .sum()
    }

    pub fn at_end(&self) -> (C, C) {
        (*self.xi.last().unwrap(), *self.xi_prime.last().unwrap())
    }

    /// Least-squares slope of `log |xi|` against `log x` over the first decade.
    pub fn origin_slope(&self) -> f64 {
        let x0 = self.grid.x0();
        let pts: Vec<(f64, f64)> = self
            .grid
            .x
            .iter()
            .zip(&self.xi)
            .take_while(|(x, _)| **x <= 10.0 * x0)
            .map(|(x, v)| (x.ln(), v.norm().ln()))
            .collect();
        crate::fit::least_squares(&pts)
            .map(|f| f.slope)
            .unwrap_or(f64::NAN)
    }

    /// `x^(nu-1/2) ((nu+1/2) xi - x xi')` along the mesh (boundary form at 0).
    pub fn boundary_form(&self, nu: f64) -> Vec<f64> {
        self.grid
            .x
            .iter()
            .zip(self.xi.iter().zip(&self.xi_prime))
            .map(|(x, (v, d))| (x.powf(nu - 0.5) * ((nu + 0.5) * v - x * d)).norm())
            .collect()
    }
}

/// Endpoint data of a real shot.
#[derive(Debug, Clone, Copy)]
pub struct RealShot {
    pub xi: f64,
    pub xi_prime: f64,
    /// Prüfer angle `atan2(xi, xi')` continued from 0 at the origin.
    pub angle: f64,
}

/// Reusable solver for one setup and mesh.
#[derive(Debug, Clone)]
pub struct Solver {
    pub setup: ProblemSetup,
    pub grid: Arc<Grid>,
    norm_k: f64,
}

impl Solver {
    pub fn new(setup: &ProblemSetup, spec: &MeshSpec) -> Result<Self> {
        setup.validate()?;
        let grid = Arc::new(Grid::build(setup, spec)?);
        let nu = setup.nu();
        let norm_k = (0.5 * PI).sqrt() * 2f64.powf(-nu) / libm::tgamma(nu + 1.0);
        Ok(Solver {
            setup: setup.clone(),
            grid,
            norm_k,
        })
    }

    fn seed(&self, z: C) -> [C; 2] {
        let nu = self.setup.nu();
        let x0 = self.grid.x0();
        let p = nu + 0.5;
        let (dq, m) = self.setup.q.seed_correction(nu, x0);
        let dz = -z * x0 * x0 / (4.0 * (nu + 1.0));
        let base = self.norm_k * x0.powf(p);
        let xi = base * (1.0 + dz + dq);
        let xip = base / x0 * (p + (p + 2.0) * dz + (p + m) * dq);
        [xi, xip]
    }

    fn check_z(z: C) -> Result<()> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "spectral point must be finite, got {z}"
            )))
        }
    }

    pub fn trace(&self, z: SpectralPoint) -> Result<SolutionTrace> {
        Self::check_z(z.z)?;
        let g = &self.grid;
        let n = g.len();
        let mut xi = Vec::with_capacity(n);
        let mut xp = Vec::with_capacity(n);
        let mut y = self.seed(z.z);
        xi.push(y[0]);
        xp.push(y[1]);
        for i in 0..n - 1 {
            y = magnus_step(g.x[i + 1] - g.x[i], g.vg[i], z.z, y);
            xi.push(y[0]);
            xp.push(y[1]);
        }
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::NonConvergence(format!(
                "solution overflow at z = {}",
                z.z
            )));
        }
        Ok(SolutionTrace {
            z,
            grid: Arc::clone(g),
            xi,
            xi_prime: xp,
        })
    }

    /// `(xi(z, x_k), xi'(z, x_k))` where `k = upto` (default: the end).
    pub fn endpoint(&self, z: SpectralPoint, upto: Option<usize>) -> Result<(C, C)> {
        Self::check_z(z.z)?;
        let g = &self.grid;
        let last = upto.unwrap_or(g.len() - 1);
        let mut y = self.seed(z.z);
        for i in 0..last {
            y = magnus_step(g.x[i + 1] - g.x[i], g.vg[i], z.z, y);
        }
        Ok((y[0], y[1]))
    }

    /// Real shot with the Prüfer angle; the state is rescaled on the fly so
    /// only `xi / xi'` and the angle are meaningful when `rescaled` is set.
    pub fn shoot_real(&self, lambda: f64, upto: Option<usize>) -> Result<RealShot> {
        if !lambda.is_finite() {
            return Err(Error::Domain("lambda must be finite".into()));
        }
        let g = &self.grid;
        let last = upto.unwrap_or(g.len() - 1);
        let s0 = self.seed(C::new(lambda, 0.0));
        let mut y = [s0[0].re, s0[1].re];
        let mut crossings = 0u64;
        let mut sign = y[0].signum();
        let mut scale = 0.0f64; // log of accumulated rescaling
        for i in 0..last {
            y = magnus_step_real(g.x[i + 1] - g.x[i], g.vg[i], lambda, y);
            if y[0] != 0.0 {
                let sg = y[0].signum();
                if sg != sign {
                    crossings += 1;
                    sign = sg;
                }
            }
            let big = y[0].abs().max(y[1].abs());
            if big > 1e150 {
                y = [y[0] / big, y[1] / big];
                scale += big.ln();
            }
        }
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::NonConvergence(format!(
                "shot overflow at lambda = {lambda}"
            )));
        }
        let angle = if y[0] == 0.0 {
            (crossings + 1) as f64 * PI
        } else {
            crossings as f64 * PI + y[0].atan2(y[1]).rem_euclid(PI)
        };
        let f = scale.exp();
        Ok(RealShot {
            xi: y[0] * f,
            xi_prime: y[1] * f,
            angle,
        })
    }

    /// Relative ODE residual `|-xi'' + (V - z) xi| / (|xi| + |xi'|)` at the
    /// interior Gauss nodes, with `xi''` from polynomial differentiation of
    /// `xi'` on each panel.
    pub fn ode_residual(&self, tr: &SolutionTrace) -> Vec<f64> {
        let g = &self.grid;
        let m = g.m;
        let mut out = Vec::new();
        for p in 0..g.panels() {
            let e = p * (m + 1);
            let xs = &g.x[e..e + m + 2];
            let fs = &tr.xi_prime[e..e + m + 2];
            // barycentric weights
            let bw: Vec<f64> = (0..xs.len())
                .map(|j| {
                    1.0 / (0..xs.len())
                        .filter(|&k| k != j)
                        .map(|k| xs[j] - xs[k])
                        .product::<f64>()
                })
                .collect();
            for i in 1..=m {
                let mut d = C::new(0.0, 0.0);
                for j in 0..xs.len() {
                    if j != i {
                        let dij = bw[j] / bw[i] / (xs[i] - xs[j]);
                        d += dij * (fs[j] - fs[i]);
                    }
                }
                let k = e + i;
                let r = -d + (self.setup.v(g.x[k]) - tr.z.z) * tr.xi[k];
                out.push(r.norm() / (tr.xi[k].norm() + tr.xi_prime[k].norm()));
            }
        }
        out
    }

    /// `|xi(z0, s) - mean over circle| / |xi(z0, s)|`: a Cauchy-integral proxy
    /// for entirety in `z`.
    pub fn cauchy_defect(&self, z0: C, rho: f64, nodes: usize) -> Result<f64> {
        let centre = self.endpoint(SpectralPoint::new(z0), None)?.0;
        let mut mean = C::new(0.0, 0.0);
        for j in 0..nodes {
            let th = 2.0 * PI * j as f64 / nodes as f64;
            let z = z0 + rho * C::from_polar(1.0, th);
            mean += self.endpoint(SpectralPoint::new(z), None)?.0;
        }
        mean /= nodes as f64;
        Ok((centre - mean).norm() / centre.norm().max(f64::MIN_POSITIVE))
    }
}

/// Convenience wrapper: one trace on a fresh mesh.
pub fn solve_regular(
    setup: &ProblemSetup,
    z: SpectralPoint,
    mesh: &MeshSpec,
) -> Result<SolutionTrace> {
    Solver::new(setup, mesh)?.trace(z)
}

/// `xi_nu`, `theta_nu` sampled on the grid.
fn free_on_grid(setup: &ProblemSetup, z: SpectralPoint, grid: &Grid) -> Result<(Vec<C>, Vec<C>)> {
    let nu = setup.nu;
    let mut xi = Vec::with_capacity(grid.len());
    let mut th = Vec::with_capacity(grid.len());
    for &x in &grid.x {
        xi.push(unperturbed::xi_free(nu, z, x)?);
        th.push(unperturbed::theta_free(nu, z, x)?);
    }
    Ok((xi, th))
}

/// Pieces of the first Picard term on the solver grid:
/// `Q1 = int_0^x q theta_nu xi_nu`, `Q2 = int_0^x q xi_nu^2`, and
/// `xi_{nu,1} = xi_nu Q1 - theta_nu Q2`.
#[derive(Debug, Clone)]
pub struct PicardParts {
    pub xi_nu: Vec<C>,
    pub theta_nu: Vec<C>,
    pub q1: Vec<C>,
    pub q2: Vec<C>,
    pub xi1: Vec<C>,
}

pub fn picard_parts(solver: &Solver, z: SpectralPoint) -> Result<PicardParts> {
    let setup = &solver.setup;
    let g = &solver.grid;
    let (xi, th) = free_on_grid(setup, z, g)?;
    let nu = setup.nu();
    let q: Vec<f64> = g.x.iter().map(|&x| setup.q.eval(x)).collect();
    let f1: Vec<C> = (0..g.len()).map(|i| q[i] * th[i] * xi[i]).collect();
    let f2: Vec<C> = (0..g.len()).map(|i| q[i] * xi[i] * xi[i]).collect();
    let (x0, k) = (g.x0(), solver.norm_k);
    // (0, x0): theta xi ~ x / (2 nu), xi^2 ~ K^2 x^(2 nu + 1)
    let q1_0 = setup.q.small_moment(x0, 1.0) / (2.0 * nu);
    let q2_0 = k * k * setup.q.small_moment(x0, 2.0 * nu + 1.0);
    let q1: Vec<C> = g.cumulative(&f1).into_iter().map(|v| v + q1_0).collect();
    let q2: Vec<C> = g.cumulative(&f2).into_iter().map(|v| v + q2_0).collect();
    let xi1 = (0..g.len())
        .map(|i| xi[i] * q1[i] - th[i] * q2[i])
        .collect();
    Ok(PicardParts {
        xi_nu: xi,
        theta_nu: th,
        q1,
        q2,
        xi1,
    })
}

/// First Picard term `xi_{nu,1}` on the solver grid.
pub fn picard_trace(solver: &Solver, z: SpectralPoint) -> Result<Vec<C>> {
    Ok(picard_parts(solver, z)?.xi1)
}

/// `xi_{nu,1}(z, x) = xi_nu Q1 - theta_nu Q2` at a single point, by
/// Gauss–Legendre on geometrically shrinking panels towards 0.
pub fn picard_correction(setup: &ProblemSetup, z: SpectralPoint, x: f64) -> Result<C> {
    if !(x > 0.0 && x <= setup.s * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!("x = {x} outside (0, s]")));
    }
    let nu = setup.nu;
    let gl = GaussLegendre::new(24);
    let (mut q1, mut q2) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    let mut hi = x;
    for _ in 0..60 {
        let lo = 0.5 * hi;
        let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (t, w) in gl.nodes.iter().zip(&gl.weights) {
            let y = c + h * t;
            let qy = setup.q.eval(y);
            let xi = unperturbed::xi_free(nu, z, y)?;
            let th = unperturbed::theta_free(nu, z, y)?;
            q1 += h * w * qy * th * xi;
            q2 += h * w * qy * xi * xi;
        }
        hi = lo;
        if hi < 1e-14 * x {
            break;
        }
    }
    let xi = unperturbed::xi_free(nu, z, x)?;
    let th = unperturbed::theta_free(nu, z, x)?;
    let out = xi * q1 - th * q2;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonConvergence(format!(
            "Picard quadrature at x = {x}"
        )))
    }
}

/// `Xi = xi - xi_nu - xi_{nu,1}` on the solver grid.
#[derive(Debug, Clone)]
pub struct ResidualTrace {
    pub grid: Arc<Grid>,
    pub values: Vec<C>,
}

impl ResidualTrace {
    pub fn l2_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.grid.w)
            .map(|(v, w)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn decomposition_residual(
    setup: &ProblemSetup,
    z: SpectralPoint,
    mesh: &MeshSpec,
) -> Result<ResidualTrace> {
    residual_with(&Solver::new(setup, mesh)?, z)
}

pub fn residual_with(solver: &Solver, z: SpectralPoint) -> Result<ResidualTrace> {
    let tr = solver.trace(z)?;
    let p = picard_trace(solver, z)?;
    let values = (0..tr.xi.len())
        .map(|i| -> Result<C> {
            let x = solver.grid.x[i];
            Ok(tr.xi[i] - unperturbed::xi_free(solver.setup.nu, z, x)? - p[i])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualTrace {
        grid: Arc::clone(&solver.grid),
        values,
    })
}
