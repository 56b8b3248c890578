//! Eigenvalues of `H_{s,gamma}` and their norming constants.
//!
//! Roots are located with the Prüfer angle `theta(s; lambda)`, which is
//! continuous and strictly increasing in `lambda`: the `n`-th eigenvalue is
//! where it crosses `n pi` (Dirichlet) or `(n + 1) pi - gamma` (otherwise).
//! That turns "did we skip a root?" into a check on a single number.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perturbed::{MeshSpec, Solver};
use crate::setup::ProblemSetup;
use crate::unperturbed::SpectralPoint;

/// Ordered eigenvalues with norming constants `K_s(lambda_n, lambda_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub setup: ProblemSetup,
    pub eigenvalues: Vec<f64>,
    pub norming: Vec<f64>,
}

impl Spectrum {
    pub fn new(setup: ProblemSetup, eigenvalues: Vec<f64>, norming: Vec<f64>) -> Self {
        Spectrum {
            setup,
            eigenvalues,
            norming,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn first_index(&self) -> usize {
        self.setup.first_index()
    }

    /// Paper index of the `i`-th stored entry.
    pub fn index(&self, i: usize) -> usize {
        i + self.first_index()
    }

    /// `t_n = sign(lambda) sqrt(|lambda|)`.
    pub fn t(&self, i: usize) -> f64 {
        let l = self.eigenvalues[i];
        l.signum() * l.abs().sqrt()
    }

    /// CSV with columns `index,lambda,norming_constant,asymptotic_prediction,deviation`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("index,lambda,norming_constant,asymptotic_prediction,deviation\n");
        for i in 0..self.len() {
            let n = self.index(i);
            let p = asymptotic_prediction(&self.setup, n).t;
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                n,
                fmt17(self.eigenvalues[i]),
                fmt17(self.norming[i]),
                fmt17(p),
                fmt17(self.t(i) - p)
            );
        }
        out
    }
}

/// 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}

/// `(n + (2 nu -+ 1)/4) pi / s` and the residual scale of the asymptotic law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub t: f64,
    /// `n^(-1 + 1/r)`, or `log(n)/n` when `r = inf`.
    pub residual_scale: f64,
}

pub fn asymptotic_prediction(setup: &ProblemSetup, n: usize) -> Prediction {
    let nu = setup.nu();
    let offset = if setup.gamma == 0.0 {
        (2.0 * nu - 1.0) / 4.0
    } else {
        (2.0 * nu + 1.0) / 4.0
    };
    let nf = n as f64;
    let r = setup.q.r_exponent;
    let residual_scale = if n == 0 {
        1.0
    } else if r.is_infinite() {
        nf.ln().max(1.0) / nf
    } else {
        nf.powf(-1.0 + 1.0 / r)
    };
    Prediction {
        t: (nf + offset) * PI / setup.s,
        residual_scale,
    }
}

/// `xi(lambda, s) cos(gamma) + xi'(lambda, s) sin(gamma)` from a fresh trace.
pub fn boundary_functional(setup: &ProblemSetup, lambda: f64) -> Result<f64> {
    let solver = Solver::new(setup, &MeshSpec::for_lambda(lambda.abs() * 1.2))?;
    let tr = solver.trace(SpectralPoint::real(lambda))?;
    let (v, d) = tr.at_end();
    let f = v * setup.gamma.cos() + d * setup.gamma.sin();
    if f.im.abs() > 1e-9 * (1.0 + f.re.abs()) {
        return Err(Error::NonConvergence(format!(
            "boundary functional not real at lambda = {lambda}"
        )));
    }
    Ok(f.re)
}

/// Lower bound used to scan for low eigenvalues.
fn lambda_floor(setup: &ProblemSetup) -> f64 {
    let nu = setup.nu();
    let s = setup.s;
    2.0 * setup.q.sup_abs(1e-2 * s, s) + (nu * nu - 0.25).abs() / (s * s) + 1.0 / (s * s)
}

fn target(setup: &ProblemSetup, n: usize) -> f64 {
    if setup.gamma == 0.0 {
        n as f64 * PI
    } else {
        (n + 1) as f64 * PI - setup.gamma
    }
}

/// Solver with a mesh sized for the first `n_max` eigenvalues.
pub fn spectrum_solver(setup: &ProblemSetup, n_max: usize, breakpoints: &[f64]) -> Result<Solver> {
    let last = setup.first_index() + n_max;
    let t = asymptotic_prediction(setup, last).t + 4.0 * PI / setup.s + lambda_floor(setup).sqrt();
    Solver::new(
        setup,
        &MeshSpec::default()
            .with_k_max(t.max(10.0))
            .with_breakpoints(breakpoints),
    )
}

pub fn compute_spectrum(setup: &ProblemSetup, n_max: usize) -> Result<Spectrum> {
    let solver = spectrum_solver(setup, n_max, &[])?;
    compute_spectrum_with(&solver, n_max)
}

/// As [`compute_spectrum`] but on a caller-supplied solver (whose setup
/// defines the operator).
pub fn compute_spectrum_with(solver: &Solver, n_max: usize) -> Result<Spectrum> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let setup = &solver.setup;
    let first = setup.first_index();
    let floor = lambda_floor(setup);
    let eigenvalues = (first..first + n_max)
        .into_par_iter()
        .map(|n| find_eigenvalue(solver, n, floor))
        .collect::<Result<Vec<f64>>>()?;
    for (i, w) in eigenvalues.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::MissedEigenvalue {
                index: first + i + 1,
                reason: format!("eigenvalues not increasing: {} then {}", w[0], w[1]),
            });
        }
    }
    let norming = eigenvalues
        .par_iter()
        .map(|&l| norming_constant_with(solver, l))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Spectrum::new(setup.clone(), eigenvalues, norming))
}

/// `||xi(lambda, .)||^2` on the solver grid.
pub fn norming_constant_with(solver: &Solver, lambda: f64) -> Result<f64> {
    let k = solver.trace(SpectralPoint::real(lambda))?.norm_sq();
    if k > 0.0 && k.is_finite() {
        Ok(k)
    } else {
        Err(Error::NonConvergence(format!(
            "norming constant at lambda = {lambda} is {k}"
        )))
    }
}

fn find_eigenvalue(solver: &Solver, n: usize, floor: f64) -> Result<f64> {
    let setup = &solver.setup;
    let goal = target(setup, n);
    let g = |l: f64| -> Result<f64> { Ok(solver.shoot_real(l, None)?.angle - goal) };

    let centre = asymptotic_prediction(setup, n).t;
    let mut half = 0.4 * PI / setup.s;
    let mut bracket = None;
    for _ in 0..4 {
        let lo_t = centre - half;
        let lo = if lo_t <= 0.0 { -floor } else { lo_t * lo_t };
        let hi = (centre + half).powi(2);
        let (glo, ghi) = (g(lo)?, g(hi)?);
        if glo < 0.0 && ghi > 0.0 {
            bracket = Some((lo, hi, glo, ghi));
            break;
        }
        if glo >= 0.0 && ghi <= 0.0 {
            return Err(Error::MissedEigenvalue {
                index: n,
                reason: "Prüfer angle not increasing".into(),
            });
        }
        half *= 2.0;
    }
    let (lo, hi, glo, ghi) = match bracket {
        Some(b) => b,
        None => scan_low(&g, n, centre, half, floor)?,
    };
    refine(&g, lo, hi, glo, ghi)
}

/// Fallback for eigenvalues far below their asymptotic window: a 64-point
/// scan on `[-Lambda, top]`, doubling `Lambda` while the angle is too large.
fn scan_low<G: Fn(f64) -> Result<f64>>(
    g: &G,
    n: usize,
    centre: f64,
    half: f64,
    floor: f64,
) -> Result<(f64, f64, f64, f64)> {
    let top = (centre + half).max(0.0).powi(2);
    let gtop = g(top)?;
    if gtop <= 0.0 {
        return Err(Error::MissedEigenvalue {
            index: n,
            reason: format!(
                "eigenvalue lies above its widened window (angle short by {})",
                -gtop
            ),
        });
    }
    let mut big = floor;
    for _ in 0..40 {
        let glo = g(-big)?;
        if glo < 0.0 {
            let mut prev = (-big, glo);
            for k in 1..=64 {
                let l = -big + (top + big) * k as f64 / 64.0;
                let gl = if k == 64 { gtop } else { g(l)? };
                if gl > 0.0 {
                    return Ok((prev.0, l, prev.1, gl));
                }
                prev = (l, gl);
            }
        }
        big *= 2.0;
    }
    Err(Error::Bracket {
        index: n,
        reason: "no sign change down to the scan floor".into(),
    })
}

/// Bisection to a narrow bracket, then Illinois-style regula falsi.
fn refine<G: Fn(f64) -> Result<f64>>(
    g: &G,
    mut lo: f64,
    mut hi: f64,
    mut glo: f64,
    mut ghi: f64,
) -> Result<f64> {
    while hi - lo > 1e-3 * (1.0 + lo.abs().min(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm < 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    let mut side = 0i8;
    let mut prev = f64::NAN;
    for _ in 0..100 {
        let x = (lo * ghi - hi * glo) / (ghi - glo);
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + x.abs())
            || (x - prev).abs() <= 2.0 * f64::EPSILON * (1.0 + x.abs())
        {
            return Ok(x);
        }
        prev = x;
        let gx = g(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
            glo = gx;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            ghi = gx;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Interlacing check for two spectra of the same `(nu, s, q)` with different
/// `gamma`: no common points and alternating order on the common prefix.
pub fn interlace(a: &[f64], b: &[f64]) -> bool {
    let mut all: Vec<(f64, u8)> = a
        .iter()
        .map(|&x| (x, 0))
        .chain(b.iter().map(|&x| (x, 1)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = 2 * a.len().min(b.len());
    all.windows(2)
        .take(n.saturating_sub(1))
        .all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
}

/// Value of the boundary functional on a complex trace endpoint.
pub fn functional_value(setup: &ProblemSetup, end: (C, C)) -> C {
    end.0 * setup.gamma.cos() + end.1 * setup.gamma.sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::Potential;
    use crate::unperturbed;
    use std::f64::consts::FRAC_PI_2;

    fn st(nu: f64, s: f64, q: Potential, gamma: f64) -> ProblemSetup {
        ProblemSetup::new(nu, s, q, gamma).unwrap()
    }

    #[test]
    fn functional_examples() {
        let s = st(0.5, PI, Potential::zero(), 0.0);
        assert!(boundary_functional(&s, 4.0).unwrap().abs() < 1e-10);
        let s = st(0.5, PI, Potential::zero(), FRAC_PI_2);
        assert!((boundary_functional(&s, 1.0).unwrap() + 1.0).abs() < 1e-10);
        let s = st(1.0, 1.0, Potential::zero(), 0.0);
        assert!(
            boundary_functional(&s, 3.8317059702075125f64.powi(2))
                .unwrap()
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn dirichlet_sine_spectrum() {
        let sp = compute_spectrum(&st(0.5, PI, Potential::zero(), 0.0), 4).unwrap();
        for (i, l) in sp.eigenvalues.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((l - n * n).abs() < 1e-9, "{l}");
            assert!((sp.norming[i] - PI / (2.0 * n * n)).abs() < 1e-10);
        }
        assert_eq!(sp.index(0), 1);
    }

    #[test]
    fn constant_shift() {
        let base = compute_spectrum(&st(0.5, PI, Potential::zero(), 0.0), 4).unwrap();
        let shifted = compute_spectrum(&st(0.5, PI, Potential::constant(2.5), 0.0), 4).unwrap();
        for (a, b) in base.eigenvalues.iter().zip(&shifted.eigenvalues) {
            assert!((b - a - 2.5).abs() < 1e-7);
        }
    }

    #[test]
    fn matches_free_spectrum_with_robin_condition() {
        for gamma in [0.3, FRAC_PI_2, 2.8] {
            let setup = st(0.75, 1.0, Potential::zero(), gamma);
            let got = compute_spectrum(&setup, 6).unwrap();
            let want = unperturbed::free_spectrum(setup.nu, 1.0, gamma, 6).unwrap();
            for (a, b) in got.eigenvalues.iter().zip(&want.eigenvalues) {
                assert!(
                    (a - b).abs() < 1e-8 * (1.0 + b.abs()),
                    "gamma={gamma}: {a} vs {b}"
                );
            }
            for (a, b) in got.norming.iter().zip(&want.norming) {
                assert!((a - b).abs() < 1e-8 * b, "norming {a} vs {b}");
            }
        }
    }

    #[test]
    fn negative_eigenvalue_found_by_scan() {
        let gamma = (1.0f64 / -2.0).atan() + PI;
        let setup = st(0.5, 1.0, Potential::zero(), gamma);
        let sp = compute_spectrum(&setup, 3).unwrap();
        let want = unperturbed::free_spectrum(setup.nu, 1.0, gamma, 3).unwrap();
        assert!(sp.eigenvalues[0] < 0.0);
        for (a, b) in sp.eigenvalues.iter().zip(&want.eigenvalues) {
            assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn attractive_potential_gives_negative_eigenvalue() {
        let setup = st(0.75, 1.0, Potential::constant(-60.0), 0.0);
        let sp = compute_spectrum(&setup, 3).unwrap();
        let base = compute_spectrum(&st(0.75, 1.0, Potential::zero(), 0.0), 3).unwrap();
        assert!(sp.eigenvalues[0] < 0.0);
        for (a, b) in sp.eigenvalues.iter().zip(&base.eigenvalues) {
            assert!((a - (b - 60.0)).abs() < 1e-7);
        }
    }

    #[test]
    fn predictions() {
        let s = st(0.5, PI, Potential::zero(), 0.0);
        assert!((asymptotic_prediction(&s, 7).t - 7.0).abs() < 1e-14);
        let s = st(1.5, 2.0, Potential::zero(), 1.0);
        assert!((asymptotic_prediction(&s, 10).t - 11.0 * PI / 2.0).abs() < 1e-12);
        let s = st(0.75, 1.0, Potential::power(1.0, 0.5, 4.0).unwrap(), 0.0);
        let p = asymptotic_prediction(&s, 100).residual_scale;
        assert!((p - 100f64.powf(-0.75)).abs() < 1e-15);
    }

    #[test]
    fn interlacing_of_two_angles() {
        let q = Potential::power(1.0, 0.5, 4.0).unwrap();
        let a = compute_spectrum(&st(0.75, 1.0, q.clone(), 0.0), 8).unwrap();
        let b = compute_spectrum(&st(0.75, 1.0, q, 1.0), 8).unwrap();
        assert!(interlace(&b.eigenvalues, &a.eigenvalues));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let sp = compute_spectrum(&st(0.5, PI, Potential::zero(), 0.0), 2).unwrap();
        let csv = sp.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "index,lambda,norming_constant,asymptotic_prediction,deviation"
        );
        assert_eq!(lines.len(), 3);
        let cols: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cols[0], "1");
        assert!((cols[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-10);
    }
}
