//! Free Bessel problem (`q = 0`): the solutions `xi_nu`, `theta_nu`, the
//! Hermite–Biehler function and the unperturbed spectra.
//!
//! Complex `z` goes through entire series in `z x^2`; real positive `z` goes
//! through [`crate::specfun`] so that large arguments stay accurate.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::setup::{Potential, ProblemSetup};
use crate::specfun::{self, Order, ZeroKind};
use crate::spectrum::Spectrum;

/// Guard radius for complex `z`: the series is used while `|z| x^2 <= 400`.
pub const SERIES_RADIUS: f64 = 400.0;
// On the negative axis the series has no cancellation.
const NEGATIVE_RADIUS: f64 = 1e5;

/// A spectral parameter `z` with its principal square root cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub z: C,
    pub w: C,
}

impl SpectralPoint {
    pub fn new(z: C) -> Self {
        SpectralPoint { z, w: z.sqrt() }
    }

    pub fn real(lambda: f64) -> Self {
        Self::new(C::new(lambda, 0.0))
    }

    pub fn conj(self) -> Self {
        Self::new(self.z.conj())
    }

    fn is_positive_real(self) -> bool {
        self.z.im == 0.0 && self.z.re > 0.0
    }
}

impl From<f64> for SpectralPoint {
    fn from(l: f64) -> Self {
        SpectralPoint::real(l)
    }
}

impl From<C> for SpectralPoint {
    fn from(z: C) -> Self {
        SpectralPoint::new(z)
    }
}

/// `xi, xi', theta, theta'` at one `(z, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSolutionPair {
    pub xi: C,
    pub xi_prime: C,
    pub theta: C,
    pub theta_prime: C,
}

impl FreeSolutionPair {
    pub fn wronskian(&self) -> C {
        self.theta * self.xi_prime - self.theta_prime * self.xi
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x must be positive, got {x}")))
    }
}

fn guard(z: SpectralPoint, x: f64) -> Result<()> {
    let r = z.z.norm() * x * x;
    let limit = if z.z.im == 0.0 && z.z.re <= 0.0 {
        NEGATIVE_RADIUS
    } else {
        SERIES_RADIUS
    };
    if r > limit {
        Err(Error::SeriesRadius {
            value: r,
            radius: limit,
        })
    } else {
        Ok(())
    }
}

fn rgamma(x: f64) -> f64 {
    let g = libm::tgamma(x);
    if g.is_finite() {
        1.0 / g
    } else {
        0.0
    }
}

/// `sum_k u^k * c_k` with `c_k = c_{k-1} / (k (k + shift))`, `u = -z x^2 / 4`.
fn hyper_sum(u: C, c0: f64, shift: f64) -> C {
    let mut term = C::new(c0, 0.0);
    let mut sum = term;
    let peak = u.norm().sqrt();
    for k in 1..2000usize {
        let kf = k as f64;
        term *= u / (kf * (kf + shift));
        sum += term;
        if kf > peak && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `xi_mu(z, x)` for any real order `mu > -1`.
pub(crate) fn xi_order(mu: f64, z: SpectralPoint, x: f64) -> Result<C> {
    let root = (0.5 * PI * x).sqrt();
    if z.is_positive_real() {
        let w = z.w.re;
        return Ok(C::new(
            w.powf(-mu) * root * specfun::bessel_j(mu, w * x)?,
            0.0,
        ));
    }
    if z.z == C::new(0.0, 0.0) {
        return Ok(C::new(root * (0.5 * x).powf(mu) * rgamma(mu + 1.0), 0.0));
    }
    guard(z, x)?;
    let u = -z.z * x * x / 4.0;
    Ok(root * (0.5 * x).powf(mu) * hyper_sum(u, rgamma(mu + 1.0), mu))
}

fn digamma_int(m: usize) -> f64 {
    // psi(m) for integer m >= 1
    const EULER: f64 = 0.577_215_664_901_532_9;
    -EULER + (1..m).map(|k| 1.0 / k as f64).sum::<f64>()
}

/// `theta_mu(z, x)`; integer orders use the logarithmic branch.
pub(crate) fn theta_order(mu: f64, z: SpectralPoint, x: f64) -> Result<C> {
    let root = (0.5 * PI * x).sqrt();
    let n = mu.round();
    let integer = (mu - n).abs() < 1e-12;
    if z.is_positive_real() {
        let w = z.w.re;
        let (j, y) = specfun::bessel_jy(mu, w * x)?;
        let val = if integer {
            w.powf(mu) * root * (2.0 / PI * w.ln() * j - y)
        } else {
            w.powf(mu) * root * (j / (mu * PI).tan() - y)
        };
        return Ok(C::new(val, 0.0));
    }
    let zero = z.z == C::new(0.0, 0.0);
    if !zero {
        guard(z, x)?;
    }
    let u = -z.z * x * x / 4.0;
    if !integer {
        let s = hyper_sum(u, rgamma(1.0 - mu), -mu);
        return Ok(root * (0.5 * x).powf(-mu) / (mu * PI).sin() * s);
    }
    // sqrt(pi x/2) [ -(2/pi) ln(x/2) (x/2)^n S_J
    //   + (1/pi) sum_{k<n} (n-k-1)!/k! z^k (x/2)^(2k-n)
    //   + (1/pi) z^n (x/2)^n sum_k (psi(k+1)+psi(n+k+1)) u^k / (k!(n+k)!) ]
    let n = n as usize;
    let h = 0.5 * x;
    let sj = if zero {
        C::new(rgamma(n as f64 + 1.0), 0.0)
    } else {
        hyper_sum(u, rgamma(n as f64 + 1.0), n as f64)
    };
    let mut finite = C::new(0.0, 0.0);
    let mut zk = C::new(1.0, 0.0);
    for k in 0..n {
        let c = libm::tgamma((n - k) as f64) / libm::tgamma(k as f64 + 1.0);
        finite += zk * c * h.powi(2 * k as i32 - n as i32);
        zk *= z.z;
    }
    // zk is now z^n
    let mut log_part = C::new(0.0, 0.0);
    if !zero {
        let mut term = C::new(rgamma(n as f64 + 1.0), 0.0);
        let peak = u.norm().sqrt();
        for k in 0..2000usize {
            if k > 0 {
                term *= u / (k as f64 * (k + n) as f64);
            }
            let d = term * (digamma_int(k + 1) + digamma_int(n + k + 1));
            log_part += d;
            if k as f64 > peak && d.norm() <= 1e-17 * log_part.norm() {
                break;
            }
        }
        log_part *= zk * h.powi(n as i32);
    }
    Ok(root * (-2.0 / PI * h.ln() * h.powi(n as i32) * zk * sj + (finite + log_part) / PI))
}

/// `xi_nu(z, x) = z^(-nu/2) sqrt(pi x / 2) J_nu(sqrt(z) x)`.
pub fn xi_free(nu: Order, z: SpectralPoint, x: f64) -> Result<C> {
    check_x(x)?;
    xi_order(nu.value(), z, x)
}

/// `d/dx xi_nu(z, x) = (nu + 1/2)/x xi_nu - z xi_{nu+1}`.
pub fn xi_free_prime(nu: Order, z: SpectralPoint, x: f64) -> Result<C> {
    check_x(x)?;
    let mu = nu.value();
    Ok((mu + 0.5) / x * xi_order(mu, z, x)? - z.z * xi_order(mu + 1.0, z, x)?)
}

pub fn theta_free(nu: Order, z: SpectralPoint, x: f64) -> Result<C> {
    check_x(x)?;
    theta_order(nu.value(), z, x)
}

/// `d/dx theta_nu(z, x) = (nu + 1/2)/x theta_nu - theta_{nu+1}`.
pub fn theta_free_prime(nu: Order, z: SpectralPoint, x: f64) -> Result<C> {
    check_x(x)?;
    let mu = nu.value();
    Ok((mu + 0.5) / x * theta_order(mu, z, x)? - theta_order(mu + 1.0, z, x)?)
}

pub fn free_pair(nu: Order, z: SpectralPoint, x: f64) -> Result<FreeSolutionPair> {
    check_x(x)?;
    let mu = nu.value();
    let xi = xi_order(mu, z, x)?;
    let xi1 = xi_order(mu + 1.0, z, x)?;
    let th = theta_order(mu, z, x)?;
    let th1 = theta_order(mu + 1.0, z, x)?;
    Ok(FreeSolutionPair {
        xi,
        xi_prime: (mu + 0.5) / x * xi - z.z * xi1,
        theta: th,
        theta_prime: (mu + 0.5) / x * th - th1,
    })
}

/// `d/dz xi_nu(z, x) = -(x/2) xi_{nu+1}(z, x)`.
pub fn xi_free_dz(nu: Order, z: SpectralPoint, x: f64) -> Result<C> {
    check_x(x)?;
    Ok(-0.5 * x * xi_order(nu.value() + 1.0, z, x)?)
}

/// `d/dz xi_nu'(z, x)`.
pub fn xi_free_prime_dz(nu: Order, z: SpectralPoint, x: f64) -> Result<C> {
    check_x(x)?;
    let mu = nu.value();
    let x1 = xi_order(mu + 1.0, z, x)?;
    let x2 = xi_order(mu + 2.0, z, x)?;
    Ok(-(0.5 * (mu + 0.5) + 1.0) * x1 + 0.5 * x * z.z * x2)
}

/// `E_{nu,s}(z) = xi_nu(z, s) + i xi_nu'(z, s)`.
pub fn hb_function(nu: Order, s: f64, z: SpectralPoint) -> Result<C> {
    Ok(xi_free(nu, z, s)? + C::i() * xi_free_prime(nu, z, s)?)
}

/// `||xi_nu(lambda, .)||^2_{L^2(0,s)}`.
pub fn free_norming(nu: Order, s: f64, lambda: f64) -> Result<f64> {
    let mu = nu.value();
    if lambda > 0.0 {
        let t = lambda.sqrt();
        let y = t * s;
        let (j, j1) = (specfun::bessel_j(mu, y)?, specfun::bessel_j(mu + 1.0, y)?);
        let jm = 2.0 * mu / y * j - j1;
        return Ok(0.25 * PI * s * s * t.powf(-2.0 * mu) * (j * j - jm * j1));
    }
    // Non-positive lambda: geometric panels towards 0, Gauss–Legendre on each.
    let gl = GaussLegendre::new(30);
    let z = SpectralPoint::real(lambda);
    let mut total = 0.0;
    let mut hi = s;
    for _ in 0..40 {
        let lo = hi * 0.25;
        let mut err = None;
        total += gl.integrate(lo, hi, |x| match xi_order(mu, z, x) {
            Ok(v) => v.re * v.re,
            Err(e) => {
                err = Some(e);
                0.0
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        hi = lo;
    }
    Ok(total)
}

/// Eigenvalues of the free operator `H_{s,gamma}` with `q = 0`.
pub fn free_spectrum(nu: Order, s: f64, gamma: f64, n_max: usize) -> Result<Spectrum> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let setup = ProblemSetup::new(nu.value(), s, Potential::zero(), gamma)?;
    let mut eigenvalues = Vec::with_capacity(n_max);
    if gamma == 0.0 {
        let t = specfun::bessel_zeros(nu.value(), ZeroKind::Plain, n_max)?;
        eigenvalues.extend(t.zeros.iter().map(|j| (j / s).powi(2)));
    } else {
        let cot = 1.0 / gamma.tan();
        let c = nu.value() + 0.5 + s * cot;
        let kind = ZeroKind::Mixed { cot_gamma: cot, s };
        if c > 1e-14 {
            let t = specfun::bessel_zeros(nu.value(), kind, n_max)?;
            eigenvalues.extend(t.zeros.iter().map(|j| (j / s).powi(2)));
        } else {
            eigenvalues.push(if c.abs() <= 1e-14 {
                0.0
            } else {
                negative_mixed_root(nu, s, c)?
            });
            if n_max > 1 {
                let t = specfun::bessel_zeros(nu.value(), kind, n_max - 1)?;
                eigenvalues.extend(t.zeros.iter().map(|j| (j / s).powi(2)));
            }
        }
    }
    let norming = eigenvalues
        .iter()
        .map(|&l| free_norming(nu, s, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum::new(setup, eigenvalues, norming))
}

/// Root of `c xi_nu(z, s) - s z xi_{nu+1}(z, s)` on `z < 0` (exists iff `c < 0`).
fn negative_mixed_root(nu: Order, s: f64, c: f64) -> Result<f64> {
    let mu = nu.value();
    let g = |z: f64| -> Result<f64> {
        let p = SpectralPoint::real(z);
        Ok(c * xi_order(mu, p, s)?.re - s * z * xi_order(mu + 1.0, p, s)?.re)
    };
    let mut lo = -1.0 / (s * s);
    let mut tries = 0;
    while g(lo)? <= 0.0 {
        lo *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Bracket {
                index: 0,
                reason: "negative eigenvalue not bracketed".into(),
            });
        }
    }
    let mut hi = 0.0;
    while hi - lo > 1e-15 * lo.abs() {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn o(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn half_order_closed_forms() {
        let h = o(0.5);
        assert!(xi_free(h, 4.0.into(), FRAC_PI_2).unwrap().norm() < 1e-14);
        assert!(close(
            xi_free(h, 1.0.into(), FRAC_PI_2).unwrap(),
            C::new(1.0, 0.0),
            1e-14
        ));
        assert!(theta_free(h, 4.0.into(), PI / 4.0).unwrap().norm() < 1e-14);
        assert!(close(
            theta_free(h, 1.0.into(), PI).unwrap(),
            C::new(-1.0, 0.0),
            1e-14
        ));
        // complex z: sin(w x)/w and cos(w x)
        let z = SpectralPoint::new(C::new(2.0, 3.0));
        let x = 1.3;
        let want = (z.w * x).sin() / z.w;
        assert!(close(xi_free(h, z, x).unwrap(), want, 1e-13));
        assert!(close(theta_free(h, z, x).unwrap(), (z.w * x).cos(), 1e-13));
        assert!(close(
            xi_free_prime(h, z, x).unwrap(),
            (z.w * x).cos(),
            1e-13
        ));
    }

    #[test]
    fn hb_function_examples() {
        let h = o(0.5);
        assert!(close(
            hb_function(h, PI, 0.25.into()).unwrap(),
            C::new(2.0, 0.0),
            1e-13
        ));
        assert!(close(
            hb_function(h, PI, 1.0.into()).unwrap(),
            C::new(0.0, -1.0),
            1e-13
        ));
        let z = SpectralPoint::new(C::new(2.0, 1.0));
        let e = hb_function(o(1.5), 1.0, z).unwrap().norm();
        let eb = hb_function(o(1.5), 1.0, z.conj()).unwrap().norm();
        assert!(e > eb);
    }

    #[test]
    fn wronskian_on_product_grid() {
        for nu in [0.25, 0.75, 1.0, 1.5, 2.0, 2.3] {
            for z in [
                C::new(2.5, 0.0),
                C::new(-3.0, 0.0),
                C::new(1.0, 2.0),
                C::new(-4.0, -1.0),
                C::new(0.0, 0.0),
            ] {
                for x in [0.05, 0.3, 1.0, 2.0] {
                    let p = free_pair(o(nu), z.into(), x).unwrap();
                    let w = p.wronskian();
                    assert!((w - 1.0).norm() < 1e-9, "nu={nu} z={z} x={x}: {w}");
                }
            }
        }
    }

    #[test]
    fn series_and_bessel_routes_agree_on_real_axis() {
        for nu in [0.3, 0.75, 1.0, 2.5] {
            for (lam, x) in [(2.0, 1.0), (30.0, 0.8), (100.0, 1.5)] {
                // perturb off the axis slightly so the series path is used
                let eps = 1e-12;
                let zc = SpectralPoint::new(C::new(lam, eps));
                let zr = SpectralPoint::real(lam);
                let a = xi_free(o(nu), zc, x).unwrap();
                let b = xi_free(o(nu), zr, x).unwrap();
                assert!(
                    (a - b).norm() < 1e-10 * (1.0 + b.norm()),
                    "xi nu={nu}: {a} {b}"
                );
                let a = theta_free(o(nu), zc, x).unwrap();
                let b = theta_free(o(nu), zr, x).unwrap();
                assert!(
                    (a - b).norm() < 1e-9 * (1.0 + b.norm()),
                    "theta nu={nu}: {a} {b}"
                );
            }
        }
    }

    #[test]
    fn z_derivative_matches_difference_quotient() {
        let z = SpectralPoint::new(C::new(3.0, 1.0));
        let h = 1e-5;
        for nu in [0.5, 0.75, 2.0] {
            let x = 0.9;
            let fd = (xi_free(o(nu), SpectralPoint::new(z.z + h), x).unwrap()
                - xi_free(o(nu), SpectralPoint::new(z.z - h), x).unwrap())
                / (2.0 * h);
            assert!((fd - xi_free_dz(o(nu), z, x).unwrap()).norm() < 1e-8);
            let fd = (xi_free_prime(o(nu), SpectralPoint::new(z.z + h), x).unwrap()
                - xi_free_prime(o(nu), SpectralPoint::new(z.z - h), x).unwrap())
                / (2.0 * h);
            assert!((fd - xi_free_prime_dz(o(nu), z, x).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn guard_radius_is_enforced() {
        let z = SpectralPoint::new(C::new(500.0, 1.0));
        assert!(matches!(
            xi_free(o(0.5), z, 1.0),
            Err(Error::SeriesRadius { .. })
        ));
        assert!(xi_free(o(0.5), (-500.0).into(), 1.0).is_ok());
    }

    #[test]
    fn free_spectrum_examples() {
        let sp = free_spectrum(o(0.5), PI, 0.0, 3).unwrap();
        for (l, want) in sp.eigenvalues.iter().zip([1.0, 4.0, 9.0]) {
            assert!((l - want).abs() < 1e-10);
        }
        for (k, n) in sp.norming.iter().zip([1.0, 4.0, 9.0]) {
            assert!((k - PI / (2.0 * n)).abs() < 1e-10);
        }
        let sp = free_spectrum(o(0.5), 1.0, FRAC_PI_2, 1).unwrap();
        assert!(sp.eigenvalues[0] > 0.0);
        assert!((sp.eigenvalues[0] - FRAC_PI_2.powi(2)).abs() < 1e-10);
        let sp = free_spectrum(o(1.0), 1.0, 0.0, 1).unwrap();
        assert!((sp.eigenvalues[0] - 3.8317059702075125f64.powi(2)).abs() < 1e-8);
    }

    #[test]
    fn negative_lowest_eigenvalue_for_attractive_robin() {
        // nu = 1/2, s = 1, cot(gamma) = -2: tanh k = k/2 below, tan y = y/2 above.
        let gamma = (1.0f64 / -2.0).atan() + PI;
        let sp = free_spectrum(o(0.5), 1.0, gamma, 3).unwrap();
        let k = (-sp.eigenvalues[0]).sqrt();
        assert!(sp.eigenvalues[0] < 0.0);
        assert!((k.tanh() - k / 2.0).abs() < 1e-12);
        let y = sp.eigenvalues[1].sqrt();
        assert!((y.tan() - y / 2.0).abs() < 1e-9);
        assert!(y > PI && y < 1.5 * PI);
        // norming by quadrature for the negative one: int sinh^2(kx)/k^2
        let want = ((2.0 * k).sinh() / (4.0 * k) - 0.5) / (k * k);
        assert!((sp.norming[0] - want).abs() < 1e-10 * want);
    }

    #[test]
    fn free_norming_closed_form_matches_quadrature() {
        let nu = o(0.75);
        let lam = 37.0;
        let gl = GaussLegendre::new(40);
        let mut q = 0.0;
        let mut hi = 1.0;
        for _ in 0..40 {
            let lo = hi / 4.0;
            q += gl.integrate(lo, hi, |x| xi_free(nu, lam.into(), x).unwrap().re.powi(2));
            hi = lo;
        }
        let k = free_norming(nu, 1.0, lam).unwrap();
        assert!((k - q).abs() < 1e-12 * q, "{k} vs {q}");
    }
}
