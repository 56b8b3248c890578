//! Gauss–Legendre rules on `[-1, 1]` and a cumulative-integration matrix.

use std::f64::consts::PI;

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A Gauss–Legendre rule with `n` nodes.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, then Newton.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }

    /// Matrix `S` with `(S f)_i ~ int_{-1}^{x_i} f`, exact for polynomials of
    /// degree `< n`. Row-major, `n * n`.
    pub fn integration_matrix(&self) -> Vec<f64> {
        let n = self.len();
        // P_k at nodes, k = 0..=n
        let mut p = vec![vec![0.0; n]; n + 1];
        for (j, &x) in self.nodes.iter().enumerate() {
            let (mut a, mut b) = (1.0, x);
            p[0][j] = 1.0;
            p[1][j] = x;
            for k in 2..=n {
                let kf = k as f64;
                let c = ((2.0 * kf - 1.0) * x * b - (kf - 1.0) * a) / kf;
                a = b;
                b = c;
                p[k][j] = c;
            }
        }
        // I_k(x) = int_{-1}^x P_k = (P_{k+1} - P_{k-1}) / (2k+1), I_0 = x + 1
        let big_i = |k: usize, i: usize| -> f64 {
            if k == 0 {
                self.nodes[i] + 1.0
            } else {
                (p[k + 1][i] - p[k - 1][i]) / (2.0 * k as f64 + 1.0)
            }
        };
        let mut s = vec![0.0; n * n];
        for k in 0..n {
            let c = (2.0 * k as f64 + 1.0) / 2.0;
            for i in 0..n {
                let ik = big_i(k, i);
                for j in 0..n {
                    s[i * n + j] += c * self.weights[j] * p[k][j] * ik;
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1, 2, 5, 10, 33] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
            for i in 0..n {
                assert!((g.nodes[i] + g.nodes[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let g = GaussLegendre::new(10);
        for d in 0..20 {
            let got = g.integrate(0.0, 2.0, |x| x.powi(d));
            let want = 2f64.powi(d + 1) / (d + 1) as f64;
            assert!((got - want).abs() < 1e-12 * want, "deg {d}");
        }
    }

    #[test]
    fn integration_matrix_is_exact_on_polynomials() {
        let g = GaussLegendre::new(10);
        let s = g.integration_matrix();
        let f: Vec<f64> = g.nodes.iter().map(|x| 3.0 * x * x - x.powi(7)).collect();
        for i in 0..10 {
            let got: f64 = (0..10).map(|j| s[i * 10 + j] * f[j]).sum();
            let x = g.nodes[i];
            let want = (x.powi(3) + 1.0) - (x.powi(8) - 1.0) / 8.0;
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn smooth_integral() {
        let g = GaussLegendre::new(20);
        let got = g.integrate(0.0, PI, f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
    }
}
