//! Closed-form Paley–Wiener baseline: WSK sampling, the oversampling kernel
//! with a trapezoidal window, and undersampling.
//!
//! Test functions are finite cosine/sine packets
//! `F(z) = int_{-A}^{A} p(x) e^{ixz} dx`, whose transforms are exact.

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampling::{sup_error, ReconstructionReport};

const SERIES_SWITCH: f64 = 1e-4;

/// `sin(a u) / (a u)`, `u = z - conj(w)`.
pub fn pw_kernel(a: f64, z: C, w: C) -> C {
    sinc(a * (z - w.conj()))
}

fn sinc(v: C) -> C {
    if v.norm() < SERIES_SWITCH {
        let v2 = v * v;
        1.0 - v2 / 6.0 + v2 * v2 / 120.0
    } else {
        v.sin() / v
    }
}

/// `(2/(b - a)) (cos(u a) - cos(u b)) / u^2`, `u = z - conj(w)`; `a + b` on the diagonal.
pub fn pw_oversampling_kernel(a: f64, b: f64, z: C, w: C) -> Result<C> {
    if !(a > 0.0 && b > a) {
        return Err(Error::Domain(format!(
            "oversampling kernel needs 0 < a < b, got ({a}, {b})"
        )));
    }
    Ok(trapezoid_kernel(a, b, z - w.conj()))
}

fn trapezoid_kernel(a: f64, b: f64, u: C) -> C {
    let c = 2.0 / (b - a);
    if (u * b).norm() < SERIES_SWITCH {
        let u2 = u * u;
        let (a2, b2) = (a * a, b * b);
        c * ((b2 - a2) / 2.0 - (b2 * b2 - a2 * a2) * u2 / 24.0
            + (b2 * b2 * b2 - a2 * a2 * a2) * u2 * u2 / 720.0)
    } else {
        // cos(ua) - cos(ub) = 2 sin(u (b + a)/2) sin(u (b - a)/2), free of cancellation
        c * 2.0 * (u * (0.5 * (b + a))).sin() * (u * (0.5 * (b - a))).sin() / (u * u)
    }
}

/// Kernel of the Hermite–Biehler function `E(z) = e^{-iza}`:
/// `(E#(z) E(conj w) - E(z) E#(conj w)) / (2 pi i (z - conj w)) = sin(a u)/(pi u)`.
pub fn pw_hb_kernel(a: f64, z: C, w: C) -> C {
    let wb = w.conj();
    let u = z - wb;
    if (a * u).norm() < SERIES_SWITCH {
        return a / std::f64::consts::PI * sinc(a * u);
    }
    let e = |v: C| (-C::i() * v * a).exp();
    let es = |v: C| (C::i() * v * a).exp();
    (es(z) * e(wb) - e(z) * es(wb)) / (2.0 * std::f64::consts::PI * C::i() * u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketTerm {
    pub amp: f64,
    pub wave: Wave,
    pub omega: f64,
}

/// `p(x) = sum amp_k wave_k(omega_k x)` on `[-A, A]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub half_width: f64,
    pub terms: Vec<PacketTerm>,
}

impl Packet {
    /// `chi_{[-A, A]}`, transform `2 sin(A z) / z`.
    pub fn indicator(half_width: f64) -> Self {
        Packet {
            half_width,
            terms: vec![PacketTerm {
                amp: 1.0,
                wave: Wave::Cos,
                omega: 0.0,
            }],
        }
    }

    /// `terms` random waves with amplitudes in `[-1, 1]` and frequencies in `[0, 10]`.
    pub fn random(half_width: f64, terms: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..terms)
            .map(|_| PacketTerm {
                amp: rng.gen_range(-1.0..1.0),
                wave: if rng.gen::<bool>() {
                    Wave::Cos
                } else {
                    Wave::Sin
                },
                omega: rng.gen_range(0.0..10.0),
            })
            .collect();
        Packet { half_width, terms }
    }

    pub fn profile(&self, x: f64) -> f64 {
        if x.abs() > self.half_width {
            return 0.0;
        }
        self.terms
            .iter()
            .map(|t| {
                t.amp
                    * match t.wave {
                        Wave::Cos => (t.omega * x).cos(),
                        Wave::Sin => (t.omega * x).sin(),
                    }
            })
            .sum()
    }

    /// `int_{-A}^{A} p(x) e^{ixz} dx`.
    pub fn eval(&self, z: C) -> C {
        let a = self.half_width;
        // S(u) = sin(uA)/u
        let s = |u: C| {
            if (u * a).norm() < SERIES_SWITCH {
                a * sinc(u * a)
            } else {
                (u * a).sin() / u
            }
        };
        self.terms
            .iter()
            .map(|t| {
                let w = C::new(t.omega, 0.0);
                t.amp
                    * match t.wave {
                        Wave::Cos => s(z + w) + s(z - w),
                        Wave::Sin => C::i() * (s(w - z) - s(w + z)),
                    }
            })
            .sum()
    }

    /// `int_{lo < |x| < hi} p^2` by Gauss–Legendre.
    pub fn norm_sq_between(&self, lo: f64, hi: f64) -> f64 {
        let hi = hi.min(self.half_width);
        if hi <= lo {
            return 0.0;
        }
        let gl = crate::quadrature::GaussLegendre::new(20);
        let pieces = 64;
        let h = (hi - lo) / pieces as f64;
        (0..pieces)
            .map(|k| {
                let x0 = lo + h * k as f64;
                gl.integrate(x0, x0 + h, |x| {
                    self.profile(x).powi(2) + self.profile(-x).powi(2)
                })
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PwMode {
    /// Samples at `n pi / a`, sinc kernel.
    Exact,
    /// Samples at `n pi / b` plus `noise[n + N]`, trapezoid kernel.
    Oversample { b: f64, noise: Vec<f64> },
    /// Samples at `n pi / a` of a function band-limited to `b > a`.
    Alias { b: f64 },
}

/// Bounded noise `delta sigma_n`, `|n| <= N`, from seeded signs.
pub fn pw_noise(delta: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2 * n + 1)
        .map(|_| if rng.gen::<bool>() { delta } else { -delta })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PwReconstruction {
    pub truth: Vec<C>,
    pub values: Vec<C>,
    pub report: ReconstructionReport,
}

/// Partial sums over `|n| <= N` at `points`.
pub fn pw_reconstruct(
    a: f64,
    mode: &PwMode,
    f: &Packet,
    n: usize,
    points: &[C],
) -> Result<PwReconstruction> {
    if !(a > 0.0) {
        return Err(Error::Domain("band edge a must be positive".into()));
    }
    let band = f.half_width * (1.0 - 1e-12);
    let (step, delta, noise): (f64, f64, Option<&[f64]>) = match mode {
        PwMode::Exact => {
            if band > a {
                return Err(Error::Support(format!(
                    "packet half-width {} exceeds a = {a}",
                    f.half_width
                )));
            }
            (std::f64::consts::PI / a, 0.0, None)
        }
        PwMode::Oversample { b, noise } => {
            if !(*b > a) {
                return Err(Error::Domain(format!(
                    "oversampling needs b > a, got b = {b}"
                )));
            }
            if band > a {
                return Err(Error::Support(format!(
                    "packet half-width {} exceeds a = {a}",
                    f.half_width
                )));
            }
            if noise.len() != 2 * n + 1 {
                return Err(Error::Shape(format!(
                    "need {} noise values, got {}",
                    2 * n + 1,
                    noise.len()
                )));
            }
            let d = noise.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            (std::f64::consts::PI / b, d, Some(noise.as_slice()))
        }
        PwMode::Alias { b } => {
            if !(*b > a) || band > *b {
                return Err(Error::Support(format!(
                    "aliasing needs half-width <= b and b > a, got b = {b}"
                )));
            }
            (std::f64::consts::PI / a, 0.0, None)
        }
    };
    let ni = n as i64;
    let samples: Vec<(f64, C)> = (-ni..=ni)
        .map(|k| {
            let t = k as f64 * step;
            let eps = noise.map(|e| e[(k + ni) as usize]).unwrap_or(0.0);
            (t, f.eval(C::new(t, 0.0)) + eps)
        })
        .collect();
    let values: Vec<C> = points
        .par_iter()
        .map(|&z| {
            samples
                .iter()
                .map(|&(t, v)| {
                    let tc = C::new(t, 0.0);
                    let k = match mode {
                        PwMode::Oversample { b, .. } => trapezoid_kernel(a, *b, z - tc) / (2.0 * b),
                        _ => pw_kernel(a, z, tc),
                    };
                    k * v
                })
                .sum()
        })
        .collect();
    let truth: Vec<C> = points.iter().map(|&z| f.eval(z)).collect();
    let sup = sup_error(&truth, &values)?;
    let fitted = match mode {
        PwMode::Oversample { .. } if delta > 0.0 => Some(sup / delta),
        PwMode::Alias { b } => {
            let tail = f.norm_sq_between(a, *b).sqrt();
            (tail > 0.0).then(|| sup / tail)
        }
        _ => None,
    };
    Ok(PwReconstruction {
        truth,
        values,
        report: ReconstructionReport {
            truncation: n,
            noise_level: delta,
            sup_error: sup,
            tail_estimate: f64::NAN,
            fitted_constant: fitted,
        },
    })
}
