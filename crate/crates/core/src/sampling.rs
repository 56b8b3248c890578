//! The transform `phi -> F`, the three reconstruction series and the noise model.
//!
//! Everything runs on one [`KernelEvaluator`] whose mesh covers the largest
//! interval in play (`(0, b]`); kernels of shorter intervals are truncated
//! quadratures ending at a mesh edge. Series are summed in ascending index
//! order for each evaluation point, so results do not depend on the number of
//! threads.

use std::sync::Arc;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::decay_fit;
use crate::kernel::KernelEvaluator;
use crate::perturbed::{SolutionTrace, Solver};
use crate::profile::Profile;
use crate::setup::ProblemSetup;
use crate::spectrum::{compute_spectrum_with, spectrum_solver, Spectrum};
use crate::unperturbed::SpectralPoint;

/// Default truncation level.
pub const DEFAULT_N: usize = 200;

/// Evaluator whose mesh resolves the first `n_max` eigenfunctions of `setup`
/// and has every point of `breakpoints` as a panel edge.
pub fn evaluator_for(
    setup: &ProblemSetup,
    n_max: usize,
    breakpoints: &[f64],
) -> Result<Arc<KernelEvaluator>> {
    Ok(Arc::new(KernelEvaluator::from_solver(spectrum_solver(
        setup,
        n_max,
        breakpoints,
    )?)))
}

/// `F(z) = int_0^s xi(z, x) phi(x) dx` for a stored profile.
#[derive(Debug, Clone)]
pub struct SpaceFunction {
    pub profile: Profile,
    pub support_end: f64,
    eval: Arc<KernelEvaluator>,
    samples: Vec<f64>,
}

impl SpaceFunction {
    pub fn evaluator(&self) -> &Arc<KernelEvaluator> {
        &self.eval
    }

    /// Profile values on the mesh.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn eval(&self, z: SpectralPoint) -> Result<C> {
        let tr = self.eval.trace(z)?;
        Ok(self.apply(&tr))
    }

    fn apply(&self, tr: &SolutionTrace) -> C {
        let last = tr.xi.len() - 1;
        tr.dot_profile(&self.samples, last)
    }

    /// `||phi||^2_{L^2(0,s)}` (= `||F||^2` in the space).
    pub fn norm_sq(&self) -> f64 {
        let g = &self.eval.solver().grid;
        g.w.iter().zip(&self.samples).map(|(w, v)| w * v * v).sum()
    }
}

/// Builds `F` from `phi`. The profile's kinks should be mesh edges (see
/// [`evaluator_for`]); otherwise the quadrature is only first-order accurate
/// across them.
pub fn transform(eval: &Arc<KernelEvaluator>, profile: Profile) -> Result<SpaceFunction> {
    let g = &eval.solver().grid;
    let end = g.end();
    let support_end = profile.support_end();
    if support_end > end * (1.0 + 1e-12) {
        return Err(Error::Support(format!(
            "profile extends to {support_end}, beyond s = {end}"
        )));
    }
    let samples: Vec<f64> = g.x.iter().map(|&x| profile.eval(x)).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("profile is not finite on the mesh".into()));
    }
    Ok(SpaceFunction {
        profile,
        support_end,
        eval: Arc::clone(eval),
        samples,
    })
}

/// How the `l_inf(nu)` weight treats the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseWeight {
    /// `eps_n = delta n^(nu+1/2) sigma_n`.
    #[default]
    Growing,
    /// `eps_n = delta n^(-nu-1/2) sigma_n`, the class in which the
    /// oversampling series converges absolutely.
    Decaying,
}

impl NoiseWeight {
    pub fn factor(self, nu: f64, n: usize) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let p = (n as f64).powf(nu + 0.5);
        match self {
            NoiseWeight::Growing => p,
            NoiseWeight::Decaying => 1.0 / p,
        }
    }
}

/// Noise `eps_n` for indices `first, first + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSequence {
    pub nu: f64,
    pub delta: f64,
    pub first_index: usize,
    pub weight: NoiseWeight,
    pub entries: Vec<f64>,
}

impl NoiseSequence {
    pub fn get(&self, n: usize) -> f64 {
        n.checked_sub(self.first_index)
            .and_then(|i| self.entries.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// `sup_n |eps_n| / w(n)`.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| e.abs() / self.weight.factor(self.nu, i + self.first_index))
            .fold(0.0, f64::max)
    }

    pub fn zero(nu: f64, first_index: usize, n: usize) -> Self {
        NoiseSequence {
            nu,
            delta: 0.0,
            first_index,
            weight: NoiseWeight::Growing,
            entries: vec![0.0; n],
        }
    }
}

/// Seeded `+-1` signs (ChaCha8) times `delta w(n)`.
pub fn noise_sequence(
    nu: f64,
    delta: f64,
    first_index: usize,
    n: usize,
    seed: u64,
    weight: NoiseWeight,
) -> Result<NoiseSequence> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!(
            "noise level must be >= 0, got {delta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (first_index..first_index + n)
        .map(|k| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            delta * weight.factor(nu, k) * sign
        })
        .collect();
    Ok(NoiseSequence {
        nu,
        delta,
        first_index,
        weight,
        entries,
    })
}

/// Lattice `[x_lo, x_hi] x [-h, h]` with `m x k` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub h: f64,
    pub m: usize,
    pub k: usize,
}

impl CompactGrid {
    pub fn new(x_lo: f64, x_hi: f64, h: f64, m: usize, k: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi >= x_lo && x_hi.is_finite() && h >= 0.0 && h.is_finite())
            || m == 0
            || k == 0
        {
            return Err(Error::Domain(
                "compact grid needs x_lo <= x_hi, h >= 0, m, k >= 1".into(),
            ));
        }
        Ok(CompactGrid {
            x_lo,
            x_hi,
            h,
            m,
            k,
        })
    }

    /// `[0, (N pi / (2 s))^2] x [-1, 1]` on a 41 x 5 lattice.
    pub fn default_for(n: usize, s: f64) -> Self {
        let top = (n as f64 * std::f64::consts::PI / (2.0 * s)).powi(2);
        CompactGrid {
            x_lo: 0.0,
            x_hi: top,
            h: 1.0,
            m: 41,
            k: 5,
        }
    }

    pub fn len(&self) -> usize {
        self.m * self.k
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major (imaginary part outer).
    pub fn points(&self) -> Vec<SpectralPoint> {
        let lerp = |lo: f64, hi: f64, i: usize, n: usize| {
            if n == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(self.len());
        for j in 0..self.k {
            let im = if self.k == 1 {
                0.0
            } else {
                lerp(-self.h, self.h, j, self.k)
            };
            for i in 0..self.m {
                out.push(SpectralPoint::new(C::new(
                    lerp(self.x_lo, self.x_hi, i, self.m),
                    im,
                )));
            }
        }
        out
    }
}

/// `max_i |a_i - b_i|`.
pub fn sup_error(truth: &[C], approx: &[C]) -> Result<f64> {
    if truth.len() != approx.len() {
        return Err(Error::Shape(format!(
            "{} values vs {}",
            truth.len(),
            approx.len()
        )));
    }
    Ok(truth
        .iter()
        .zip(approx)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// Summary of one reconstruction run.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub truncation: usize,
    pub noise_level: f64,
    pub sup_error: f64,
    /// Estimated size of the omitted terms `n > N` on the grid.
    pub tail_estimate: f64,
    /// `C = sup_error / delta` (oversampling) or `D = sup_error / tail_norm`
    /// (aliasing); `None` when undefined.
    pub fitted_constant: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub points: Vec<SpectralPoint>,
    pub truth: Vec<C>,
    pub values: Vec<C>,
    /// `max_z |term_n(z)|` for each index used.
    pub term_size: Vec<f64>,
    pub report: ReconstructionReport,
}

/// Extrapolated tail from the decay of the last terms.
fn tail_from_terms(terms: &[f64], first: usize) -> f64 {
    let n = terms.len();
    if n < 20 {
        return f64::NAN;
    }
    let series: Vec<(f64, f64)> = terms
        .iter()
        .enumerate()
        .skip(n / 2)
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| ((i + first).max(1) as f64, *v))
        .collect();
    let lo = series.first().map(|p| p.0).unwrap_or(1.0);
    let hi = series.last().map(|p| p.0).unwrap_or(1.0);
    match decay_fit(&series, (lo, hi)) {
        // sum_{k>N} C k^p ~ C N^(p+1) / |p+1|
        Ok(f) if f.slope < -1.0 => (f.intercept + f.slope * hi.ln()).exp() * hi / (-f.slope - 1.0),
        Ok(_) => f64::INFINITY,
        Err(_) => f64::NAN,
    }
}

fn same_operator(a: &ProblemSetup, b: &ProblemSetup) -> bool {
    a.nu == b.nu && a.q == b.q
}

/// Mesh index of the right end of `spectrum`'s interval.
fn end_index(eval: &KernelEvaluator, spectrum: &Spectrum) -> Result<usize> {
    let sol = eval.solver();
    if !same_operator(&sol.setup, &spectrum.setup) {
        return Err(Error::Domain(
            "spectrum and evaluator describe different operators".into(),
        ));
    }
    let s = spectrum.setup.s;
    if (s - sol.grid.end()).abs() <= 1e-12 * s {
        return Ok(sol.grid.len() - 1);
    }
    sol.grid
        .edge_index(s)
        .map_err(|_| Error::Domain(format!("spectrum interval end {s} is not a mesh edge")))
}

/// Kernel used by a series.
#[derive(Debug, Clone)]
enum SeriesKernel {
    /// `K_s(z, lambda)` on `(0, x_upto]`.
    Inner(usize),
    /// `J_ab(z, lambda)` with the tent samples.
    Tent(Vec<f64>),
}

struct SeriesInput<'a> {
    f: &'a SpaceFunction,
    spectrum: &'a Spectrum,
    n: usize,
    points: Vec<SpectralPoint>,
    noise: Option<&'a NoiseSequence>,
    kernel: SeriesKernel,
    norming_upto: usize,
}

fn run_series(inp: SeriesInput<'_>) -> Result<Reconstruction> {
    let eval = inp.f.evaluator();
    let n = inp.n.min(inp.spectrum.len());
    if n == 0 {
        return Err(Error::Domain("truncation N must be at least 1".into()));
    }
    let lambdas = &inp.spectrum.eigenvalues[..n];
    // eigen-data: traces, K_n, samples F(lambda_n) + eps_n
    let eig = lambdas
        .par_iter()
        .enumerate()
        .map(|(i, &l)| -> Result<(f64, C)> {
            let p = SpectralPoint::real(l);
            let tr = eval.trace(p)?;
            let k = eval.norming_upto(l, inp.norming_upto)?;
            let eps = inp
                .noise
                .map(|e| e.get(inp.spectrum.index(i)))
                .unwrap_or(0.0);
            Ok((k, inp.f.apply(&tr) + eps))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = inp
        .points
        .par_iter()
        .map(|&z| -> Result<(C, C, Vec<f64>)> {
            let truth = inp.f.eval(z)?;
            let mut acc = C::new(0.0, 0.0);
            let mut sizes = Vec::with_capacity(n);
            for (i, &l) in lambdas.iter().enumerate() {
                let w = SpectralPoint::real(l);
                let kz = match &inp.kernel {
                    SeriesKernel::Inner(upto) => eval.inner_upto(z, w, *upto)?,
                    SeriesKernel::Tent(r) => eval.oversampling_with(r, z, w)?,
                };
                let term = kz / eig[i].0 * eig[i].1;
                sizes.push(term.norm());
                acc += term;
            }
            Ok((truth, acc, sizes))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut term_size = vec![0.0f64; n];
    for r in &rows {
        for (t, v) in term_size.iter_mut().zip(&r.2) {
            *t = t.max(*v);
        }
    }
    let truth: Vec<C> = rows.iter().map(|r| r.0).collect();
    let values: Vec<C> = rows.iter().map(|r| r.1).collect();
    let sup = sup_error(&truth, &values)?;
    let report = ReconstructionReport {
        truncation: n,
        noise_level: inp.noise.map(|e| e.delta).unwrap_or(0.0),
        sup_error: sup,
        tail_estimate: tail_from_terms(&term_size, inp.spectrum.first_index()),
        fitted_constant: None,
    };
    Ok(Reconstruction {
        points: inp.points,
        truth,
        values,
        term_size,
        report,
    })
}

/// `sum_{n <= N} K(z, lambda_n) / K(lambda_n, lambda_n) (F(lambda_n) + eps_n)`
/// on `spectrum`'s interval, which must end at a mesh edge of `F`'s evaluator.
pub fn reconstruct_exact(
    f: &SpaceFunction,
    spectrum: &Spectrum,
    n: usize,
    grid: &CompactGrid,
    noise: Option<&NoiseSequence>,
) -> Result<Reconstruction> {
    let upto = end_index(f.evaluator(), spectrum)?;
    let mut r = run_series(SeriesInput {
        f,
        spectrum,
        n,
        points: grid.points(),
        noise,
        kernel: SeriesKernel::Inner(upto),
        norming_upto: upto,
    })?;
    if let Some(e) = noise.filter(|e| e.delta > 0.0) {
        r.report.fitted_constant = Some(r.report.sup_error / e.delta);
    }
    Ok(r)
}

/// `F_eps(z) = sum_{n <= N} J_ab(z, lambda_n) / K_b(lambda_n, lambda_n) (F(lambda_n) + eps_n)`
/// for `F` in `B_a`, `a < b`.
pub fn oversample_reconstruct(
    f: &SpaceFunction,
    a: f64,
    spectrum_b: &Spectrum,
    noise: &NoiseSequence,
    n: usize,
    grid: &CompactGrid,
) -> Result<Reconstruction> {
    let eval = f.evaluator();
    let upto = end_index(eval, spectrum_b)?;
    if upto != eval.solver().grid.len() - 1 {
        return Err(Error::Domain(
            "oversampling needs the spectrum of the full interval (0, b]".into(),
        ));
    }
    check_support(f, a)?;
    let r = eval.tent(a)?;
    let mut rec = run_series(SeriesInput {
        f,
        spectrum: spectrum_b,
        n,
        points: grid.points(),
        noise: Some(noise),
        kernel: SeriesKernel::Tent(r),
        norming_upto: upto,
    })?;
    if noise.delta > 0.0 {
        rec.report.fitted_constant = Some(rec.report.sup_error / noise.delta);
    }
    Ok(rec)
}

fn check_support(f: &SpaceFunction, a: f64) -> Result<()> {
    let g = &f.evaluator().solver().grid;
    let peak = f.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let leak =
        g.x.iter()
            .zip(&f.samples)
            .filter(|(x, _)| **x > a * (1.0 + 1e-12))
            .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    if f.support_end > a * (1.0 + 1e-12) || leak > 1e-14 * peak {
        return Err(Error::Support(format!(
            "profile does not vanish on (a, b] = ({a}, {}]; oversampling needs F in B_a",
            g.end()
        )));
    }
    Ok(())
}

/// `|J_ab(z, lambda_n)| / K_n w(n)` for the first `n` eigenvalues.
fn amplification_terms(
    eval: &KernelEvaluator,
    r: &[f64],
    spectrum_b: &Spectrum,
    n: usize,
    z: SpectralPoint,
    weight: NoiseWeight,
) -> Result<Vec<C>> {
    let upto = end_index(eval, spectrum_b)?;
    let nu = eval.setup().nu();
    (0..n.min(spectrum_b.len()))
        .map(|i| {
            let l = spectrum_b.eigenvalues[i];
            let j = eval.oversampling_with(r, z, SpectralPoint::real(l))?;
            Ok(j / eval.norming_upto(l, upto)? * weight.factor(nu, spectrum_b.index(i)))
        })
        .collect()
}

/// Sharp noise constant of the oversampling series on `grid`:
/// `C = sup_z sum_{n <= N} |J_ab(z, lambda_n)| / K_n w(n)`, so that
/// `|F - F_eps| <= C delta` for every noise with `|eps_n| <= delta w(n)`.
/// Returns `C` and a maximising grid point.
pub fn oversampling_amplification(
    eval: &KernelEvaluator,
    a: f64,
    spectrum_b: &Spectrum,
    n: usize,
    grid: &CompactGrid,
    weight: NoiseWeight,
) -> Result<(f64, SpectralPoint)> {
    let r = eval.tent(a)?;
    let sums = grid
        .points()
        .par_iter()
        .map(|&z| -> Result<(f64, SpectralPoint)> {
            let t = amplification_terms(eval, &r, spectrum_b, n, z, weight)?;
            Ok((t.iter().map(|v| v.norm()).sum(), z))
        })
        .collect::<Result<Vec<_>>>()?;
    sums.into_iter()
        .fold(None, |best: Option<(f64, SpectralPoint)>, c| match best {
            Some(b) if b.0 >= c.0 => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| Error::Domain("empty grid".into()))
}

/// Noise `delta w(n) sign(Re J_ab(z, lambda_n))`: for real `z` it attains
/// the bound of [`oversampling_amplification`] at `z`.
pub fn aligned_noise(
    eval: &KernelEvaluator,
    a: f64,
    spectrum_b: &Spectrum,
    n: usize,
    z: SpectralPoint,
    delta: f64,
    weight: NoiseWeight,
) -> Result<NoiseSequence> {
    let r = eval.tent(a)?;
    let nu = eval.setup().nu();
    let first = spectrum_b.first_index();
    let t = amplification_terms(eval, &r, spectrum_b, n, z, weight)?;
    let entries = t
        .iter()
        .enumerate()
        .map(|(i, v)| delta * weight.factor(nu, first + i) * if v.re >= 0.0 { 1.0 } else { -1.0 })
        .collect();
    Ok(NoiseSequence {
        nu,
        delta,
        first_index: first,
        weight,
        entries,
    })
}

/// Aliasing: the exact series of `(0, a]` applied to `F` in `B_b`.
/// `spectrum_a` must have `gamma != 0`.
pub fn alias_reconstruct(
    f: &SpaceFunction,
    spectrum_a: &Spectrum,
    n: usize,
    grid: &CompactGrid,
) -> Result<Reconstruction> {
    if spectrum_a.setup.gamma == 0.0 {
        return Err(Error::Domain(
            "aliasing requires a boundary angle gamma in (0, pi); gamma = 0 is excluded by the aliasing theorem".into(),
        ));
    }
    let mut rec = reconstruct_exact(f, spectrum_a, n, grid, None)?;
    let tail = tail_norm(f, spectrum_a.setup.s);
    rec.report.fitted_constant = (tail > 0.0).then(|| rec.report.sup_error / tail);
    Ok(rec)
}

/// `||phi||_{L^2(a, s)}`.
pub fn tail_norm(f: &SpaceFunction, a: f64) -> f64 {
    let end = f.evaluator().solver().grid.end();
    f.profile.norm_sq_on(a, end).sqrt()
}

/// `|  ||phi||^2 - sum_{n <= N} |F(lambda_n)|^2 / K_n  | / ||phi||^2`.
pub fn parseval_defect(f: &SpaceFunction, spectrum: &Spectrum, n: usize) -> Result<f64> {
    let eval = f.evaluator();
    let upto = end_index(eval, spectrum)?;
    let n = n.min(spectrum.len());
    let sum: f64 = spectrum.eigenvalues[..n]
        .par_iter()
        .map(|&l| -> Result<f64> {
            let tr = eval.trace(SpectralPoint::real(l))?;
            let k = eval.norming_upto(l, upto)?;
            Ok(f.apply(&tr).norm_sqr() / k)
        })
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum();
    let g = &eval.solver().grid;
    let norm: f64 = (0..=upto)
        .map(|i| g.w[i] * f.samples[i] * f.samples[i])
        .sum();
    if !(norm > 0.0) {
        return Err(Error::Domain("profile has zero norm".into()));
    }
    Ok((norm - sum).abs() / norm)
}

/// Worst ratio `|Delta(z)| / (eta sqrt(K(z, z)))` over the grid, where
/// `Delta = sum K(z, lambda_n)/K_n d_n` and `sum |d_n|^2 / K_n = eta^2`.
/// Exact sampling is l2-stable iff this never exceeds 1.
pub fn l2_stability_ratio(
    eval: &KernelEvaluator,
    spectrum: &Spectrum,
    n: usize,
    grid: &CompactGrid,
    seed: u64,
) -> Result<f64> {
    let upto = end_index(eval, spectrum)?;
    let n = n.min(spectrum.len());
    let lambdas = &spectrum.eigenvalues[..n];
    let norming: Vec<f64> = lambdas
        .iter()
        .map(|&l| eval.norming_upto(l, upto))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let d: Vec<f64> = raw
        .iter()
        .zip(&norming)
        .map(|(g, k)| g * k.sqrt())
        .collect();
    let eta = d
        .iter()
        .zip(&norming)
        .map(|(v, k)| v * v / k)
        .sum::<f64>()
        .sqrt();
    let worst = grid
        .points()
        .par_iter()
        .map(|&z| -> Result<f64> {
            let mut acc = C::new(0.0, 0.0);
            for (i, &l) in lambdas.iter().enumerate() {
                acc += eval.inner_upto(z, SpectralPoint::real(l), upto)? / norming[i] * d[i];
            }
            let kzz = eval.inner_upto(z, z, upto)?.re;
            Ok(acc.norm() / (eta * kzz.sqrt()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// Partial sums of `xi^ext_a(z, x) = sum_n K_a(z, lambda_n)/K_a(lambda_n, lambda_n) xi(lambda_n, x)`
/// on the whole `(0, b]` mesh, next to `xi(z, x)`.
#[derive(Debug, Clone)]
pub struct ExtendedSolution {
    pub a: f64,
    pub x: Vec<f64>,
    pub extended: Vec<C>,
    pub xi: Vec<C>,
}

impl ExtendedSolution {
    /// `sup_{x <= a} |xi^ext - xi|`.
    pub fn agreement(&self) -> f64 {
        self.sup_over(|x| x <= self.a * (1.0 + 1e-12))
    }

    /// `h_ab = sup_{a <= x <= b} |xi^ext - xi|`.
    pub fn h_ab(&self) -> f64 {
        self.sup_over(|x| x >= self.a * (1.0 - 1e-12))
    }

    fn sup_over(&self, keep: impl Fn(f64) -> bool) -> f64 {
        self.x
            .iter()
            .zip(self.extended.iter().zip(&self.xi))
            .filter(|(x, _)| keep(**x))
            .map(|(_, (e, v))| (e - v).norm())
            .fold(0.0, f64::max)
    }
}

pub fn extended_solution(
    eval: &KernelEvaluator,
    spectrum_a: &Spectrum,
    n: usize,
    z: SpectralPoint,
) -> Result<ExtendedSolution> {
    let upto = end_index(eval, spectrum_a)?;
    let n = n.min(spectrum_a.len());
    let tz = eval.trace(z)?;
    let g = &eval.solver().grid;
    let mut ext = vec![C::new(0.0, 0.0); g.len()];
    let coeffs = spectrum_a.eigenvalues[..n]
        .par_iter()
        .map(|&l| -> Result<(C, Arc<SolutionTrace>)> {
            let w = SpectralPoint::real(l);
            let c = eval.inner_upto(z, w, upto)? / eval.norming_upto(l, upto)?;
            Ok((c, eval.trace(w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    for (c, tr) in &coeffs {
        for (e, v) in ext.iter_mut().zip(&tr.xi) {
            *e += c * v;
        }
    }
    Ok(ExtendedSolution {
        a: spectrum_a.setup.s,
        x: g.x.clone(),
        extended: ext,
        xi: tz.xi.clone(),
    })
}

/// Spectrum of `eval`'s own operator on its mesh.
pub fn spectrum_on(eval: &KernelEvaluator, n: usize) -> Result<Spectrum> {
    compute_spectrum_with(eval.solver(), n)
}

/// Spectrum of `(0, a]` with angle `gamma` for the same `nu`, `q`.
pub fn subinterval_spectrum(
    eval: &KernelEvaluator,
    a: f64,
    gamma: f64,
    n: usize,
) -> Result<Spectrum> {
    let setup = eval.setup().with_interval(a, gamma)?;
    let solver: Solver = spectrum_solver(&setup, n, &[])?;
    compute_spectrum_with(&solver, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::Potential;
    use std::f64::consts::PI;

    fn setup(nu: f64, s: f64, q: Potential, gamma: f64) -> ProblemSetup {
        ProblemSetup::new(nu, s, q, gamma).unwrap()
    }

    #[test]
    fn noise_examples() {
        let z = noise_sequence(0.5, 0.0, 1, 10, 7, NoiseWeight::Growing).unwrap();
        assert!(z.entries.iter().all(|v| *v == 0.0));
        let e = noise_sequence(0.5, 0.1, 1, 10, 7, NoiseWeight::Growing).unwrap();
        assert!((e.get(4).abs() - 0.4).abs() < 1e-15);
        assert!((e.norm() - 0.1).abs() < 1e-15);
        let e0 = noise_sequence(0.75, 0.1, 0, 10, 7, NoiseWeight::Decaying).unwrap();
        assert_eq!(e0.get(0).abs(), 0.1);
        assert!((e0.norm() - 0.1).abs() < 1e-15);
        let again = noise_sequence(0.5, 0.1, 1, 10, 7, NoiseWeight::Growing).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn aligned_noise_attains_amplification_bound() {
        let st = setup(0.75, 1.0, Potential::zero(), 0.0);
        let ev = evaluator_for(&st, 30, &[0.5]).unwrap();
        let sp = spectrum_on(&ev, 30).unwrap();
        let grid = CompactGrid::new(0.0, 40.0, 0.0, 5, 1).unwrap();
        let (c, z) =
            oversampling_amplification(&ev, 0.5, &sp, 30, &grid, NoiseWeight::Growing).unwrap();
        let noise = aligned_noise(&ev, 0.5, &sp, 30, z, 1e-2, NoiseWeight::Growing).unwrap();
        assert!((noise.norm() - 1e-2).abs() < 1e-15);
        let f = transform(&ev, Profile::bump(0.1, 0.4).unwrap()).unwrap();
        let at = CompactGrid::new(z.z.re, z.z.re, 0.0, 1, 1).unwrap();
        let clean =
            oversample_reconstruct(&f, 0.5, &sp, &NoiseSequence::zero(0.75, 1, 30), 30, &at)
                .unwrap();
        let noisy = oversample_reconstruct(&f, 0.5, &sp, &noise, 30, &at).unwrap();
        let shift = (noisy.values[0] - clean.values[0]).norm() / 1e-2;
        assert!((shift - c).abs() < 1e-9 * c, "{shift} vs {c}");
    }

    #[test]
    fn grid_layout() {
        let g = CompactGrid::default_for(200, 1.0);
        let p = g.points();
        assert_eq!(p.len(), 205);
        assert_eq!(p[0].z, C::new(0.0, -1.0));
        assert!((p[204].z.re - (100.0 * PI).powi(2)).abs() < 1e-9);
        let line = CompactGrid::new(0.0, 1.0, 0.0, 3, 1).unwrap();
        assert!(line.points().iter().all(|p| p.z.im == 0.0));
    }

    #[test]
    fn sup_error_examples() {
        let a = vec![C::new(1.0, 0.0); 4];
        let mut b = a.clone();
        assert_eq!(sup_error(&a, &b).unwrap(), 0.0);
        b[2] += 1e-3;
        assert!((sup_error(&a, &b).unwrap() - 1e-3).abs() < 1e-15);
        assert!(sup_error(&a, &b[..3]).is_err());
    }

    #[test]
    fn transform_of_indicator() {
        let st = setup(0.5, PI, Potential::zero(), 0.0);
        let ev = evaluator_for(&st, 20, &[]).unwrap();
        let f = transform(&ev, Profile::indicator(0.0, PI).unwrap()).unwrap();
        for z in [2.0, 7.5, 0.3] {
            let got = f.eval(z.into()).unwrap();
            let want = (1.0 - (z.sqrt() * PI).cos()) / z;
            assert!((got.re - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn eigenfunction_transform_is_kernel_column() {
        let st = setup(0.75, 1.0, Potential::constant(2.0), 0.0);
        let ev = evaluator_for(&st, 10, &[]).unwrap();
        let sp = spectrum_on(&ev, 4).unwrap();
        let tr = ev.trace(sp.eigenvalues[0].into()).unwrap();
        let xs = ev.solver().grid.x.clone();
        let vals: Vec<f64> = tr.xi.iter().map(|v| v.re).collect();
        let prof = Profile::func(
            move |x| {
                let i = xs.partition_point(|&v| v < x).min(xs.len() - 1);
                vals[i]
            },
            1.0,
        );
        let f = transform(&ev, prof).unwrap();
        assert!(f.eval(sp.eigenvalues[1].into()).unwrap().norm() < 1e-8);
        let k = ev.norming_constant(sp.eigenvalues[0]).unwrap();
        assert!((f.eval(sp.eigenvalues[0].into()).unwrap().re - k).abs() < 1e-10 * k);
    }

    #[test]
    fn kernel_column_reproduced_exactly() {
        let st = setup(0.75, 1.0, Potential::power(1.0, 0.5, 4.0).unwrap(), 0.0);
        let ev = evaluator_for(&st, 12, &[]).unwrap();
        let sp = spectrum_on(&ev, 12).unwrap();
        let l3 = sp.eigenvalues[2];
        let tr = ev.trace(l3.into()).unwrap();
        let xs = ev.solver().grid.x.clone();
        let vals: Vec<f64> = tr.xi.iter().map(|v| v.re).collect();
        let f = transform(
            &ev,
            Profile::func(
                move |x| {
                    let i = xs.partition_point(|&v| v < x).min(xs.len() - 1);
                    vals[i]
                },
                1.0,
            ),
        )
        .unwrap();
        let grid = CompactGrid::new(0.0, 200.0, 1.0, 7, 3).unwrap();
        let r = reconstruct_exact(&f, &sp, 12, &grid, None).unwrap();
        let scale = r.truth.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(r.report.sup_error < 1e-8 * scale, "{}", r.report.sup_error);
    }

    #[test]
    fn support_violation_rejected() {
        let st = setup(0.5, 1.0, Potential::zero(), 0.0);
        let ev = evaluator_for(&st, 10, &[0.5]).unwrap();
        let sp = spectrum_on(&ev, 10).unwrap();
        let noise = NoiseSequence::zero(0.5, 1, 10);
        let grid = CompactGrid::new(0.0, 10.0, 0.0, 3, 1).unwrap();
        let f = transform(&ev, Profile::bump(0.2, 0.8).unwrap()).unwrap();
        let e = oversample_reconstruct(&f, 0.5, &sp, &noise, 10, &grid).unwrap_err();
        assert!(matches!(e, Error::Support(_)));
        let g = transform(&ev, Profile::bump(0.1, 0.4).unwrap()).unwrap();
        assert!(oversample_reconstruct(&g, 0.5, &sp, &noise, 10, &grid).is_ok());
    }

    #[test]
    fn alias_rejects_dirichlet() {
        let st = setup(0.5, 1.0, Potential::zero(), 0.0);
        let ev = evaluator_for(&st, 10, &[0.5]).unwrap();
        let spa = subinterval_spectrum(&ev, 0.5, 0.0, 5).unwrap();
        let f = transform(&ev, Profile::bump(0.1, 0.4).unwrap()).unwrap();
        let grid = CompactGrid::new(0.0, 10.0, 0.0, 3, 1).unwrap();
        assert!(alias_reconstruct(&f, &spa, 5, &grid).is_err());
    }

    #[test]
    fn tail_norm_examples() {
        let st = setup(0.5, 1.0, Potential::zero(), 0.0);
        let ev = evaluator_for(&st, 10, &[0.5]).unwrap();
        let inside = transform(&ev, Profile::bump(0.1, 0.4).unwrap()).unwrap();
        assert_eq!(tail_norm(&inside, 0.5), 0.0);
        let ind = transform(&ev, Profile::indicator(0.5, 1.0).unwrap()).unwrap();
        assert!((tail_norm(&ind, 0.5) - 0.5f64.sqrt()).abs() < 1e-12);
        let ramp = transform(&ev, Profile::ramp(0.5, 1.0).unwrap()).unwrap();
        assert!((tail_norm(&ramp, 0.5) - (0.5f64 / 3.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn l2_stability_holds() {
        let st = setup(0.75, 1.0, Potential::constant(1.0), 0.0);
        let ev = evaluator_for(&st, 30, &[]).unwrap();
        let sp = spectrum_on(&ev, 30).unwrap();
        let grid = CompactGrid::new(0.0, 400.0, 1.0, 9, 3).unwrap();
        let r = l2_stability_ratio(&ev, &sp, 30, &grid, 11).unwrap();
        assert!(r <= 1.0 + 1e-9 && r > 0.0, "{r}");
    }
}
