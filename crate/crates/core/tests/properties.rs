//! Property tests for the invariants the sampling theory rests on.

use std::f64::consts::PI;

use dbsampler::fit::decay_fit;
use dbsampler::kernel::KernelEvaluator;
use dbsampler::paleywiener::{pw_kernel, pw_oversampling_kernel};
use dbsampler::perturbed::MeshSpec;
use dbsampler::sampling::{noise_sequence, NoiseWeight};
use dbsampler::setup::{parse_real, Potential, ProblemSetup};
use dbsampler::specfun::Order;
use dbsampler::spectrum::{compute_spectrum, interlace};
use dbsampler::unperturbed::{free_pair, SpectralPoint};
use dbsampler::Complex64 as C;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = SpectralPoint> {
    (-30.0..60.0f64, -5.0..5.0f64).prop_map(|(re, im)| SpectralPoint::new(C::new(re, im)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_wronskian_is_one(nu in 0.05..3.0f64, z in point(), x in 0.01..1.0f64) {
        let p = free_pair(Order::new(nu).unwrap(), z, x).unwrap();
        let scale = (p.theta * p.xi_prime).norm().max(1.0);
        prop_assert!((p.wronskian() - 1.0).norm() <= 1e-11 * scale, "{}", p.wronskian());
    }

    #[test]
    fn noise_has_exact_weighted_size(nu in 0.1..2.0f64, delta in 0.0..1.0f64, seed in any::<u64>(), first in 0usize..2) {
        for weight in [NoiseWeight::Growing, NoiseWeight::Decaying] {
            let e = noise_sequence(nu, delta, first, 40, seed, weight).unwrap();
            for (i, v) in e.entries.iter().enumerate() {
                let w = weight.factor(nu, first + i);
                prop_assert!((v.abs() - delta * w).abs() <= 1e-15 * delta * w.max(1.0));
            }
            prop_assert!((e.norm() - delta).abs() <= 1e-15);
            prop_assert_eq!(&e, &noise_sequence(nu, delta, first, 40, seed, weight).unwrap());
        }
    }

    #[test]
    fn pw_kernels_are_hermitian(a in 0.2..3.0f64, gap in 0.05..2.0f64, zr in -5.0..5.0f64, zi in -2.0..2.0f64, wr in -5.0..5.0f64, wi in -2.0..2.0f64) {
        let (z, w) = (C::new(zr, zi), C::new(wr, wi));
        prop_assert!((pw_kernel(a, z, w) - pw_kernel(a, w, z).conj()).norm() <= 1e-12 * (1.0 + pw_kernel(a, z, w).norm()));
        let b = a + gap;
        let g = pw_oversampling_kernel(a, b, z, w).unwrap();
        let h = pw_oversampling_kernel(a, b, w, z).unwrap();
        prop_assert!((g - h.conj()).norm() <= 1e-10 * (1.0 + g.norm()));
        let d = pw_oversampling_kernel(a, b, C::new(zr, 0.0), C::new(zr, 0.0)).unwrap();
        prop_assert!((d.re - (a + b)).abs() <= 1e-9 * (a + b));
    }

    #[test]
    fn decay_fit_recovers_power_laws(p in -4.0..-0.5f64, c in 0.01..100.0f64) {
        let series: Vec<(f64, f64)> = (1..=60).map(|n| (n as f64, c * (n as f64).powf(p))).collect();
        let fit = decay_fit(&series, (10.0, 60.0)).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-10);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-9);
    }

    #[test]
    fn pi_multiples_parse(k in 1u32..20, d in 1u32..12) {
        let v = parse_real(&format!("{k}*pi/{d}")).unwrap();
        prop_assert!((v - k as f64 * PI / d as f64).abs() <= 1e-15 * v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kernel_is_hermitian_and_positive(nu in 0.2..2.0f64, c in -3.0..5.0f64, z in point(), w in point()) {
        let st = ProblemSetup::new(nu, 1.0, Potential::constant(c), 0.0).unwrap();
        let eval = KernelEvaluator::new(&st, &MeshSpec::default().with_k_max(12.0)).unwrap();
        let kzw = eval.inner(z, w).unwrap();
        let kwz = eval.inner(w, z).unwrap();
        prop_assert!((kzw - kwz.conj()).norm() <= 1e-12 * (1.0 + kzw.norm()));
        let kzz = eval.inner(z, z).unwrap();
        prop_assert!(kzz.re > 0.0 && kzz.im.abs() <= 1e-12 * kzz.re);
        // Cauchy-Schwarz in the space
        let kww = eval.inner(w, w).unwrap().re;
        prop_assert!(kzw.norm_sqr() <= kzz.re * kww * (1.0 + 1e-10));
        // two routes agree up to pi
        let hb = eval.hb(z, w).unwrap();
        prop_assert!((kzw - PI * hb).norm() <= 1e-7 * (1.0 + kzw.norm()));
    }

    #[test]
    fn constant_shift_and_interlacing(nu in 0.3..2.0f64, c in -2.0..5.0f64, gamma in 0.1..3.0f64) {
        let base = compute_spectrum(&ProblemSetup::new(nu, 1.0, Potential::zero(), 0.0).unwrap(), 8).unwrap();
        let shifted = compute_spectrum(&ProblemSetup::new(nu, 1.0, Potential::constant(c), 0.0).unwrap(), 8).unwrap();
        for (l0, l1) in base.eigenvalues.iter().zip(&shifted.eigenvalues) {
            prop_assert!((l1 - l0 - c).abs() < 1e-6);
        }
        // Robin eigenvalues interlace with the Dirichlet ones
        let robin = compute_spectrum(&ProblemSetup::new(nu, 1.0, Potential::zero(), gamma).unwrap(), 9).unwrap();
        prop_assert!(interlace(&robin.eigenvalues, &base.eigenvalues));
    }
}
