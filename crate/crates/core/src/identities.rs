//! Integration-by-parts identities behind the aliasing estimates.
//!
//! Each identity rewrites a weighted inner product of the regular solution
//! `xi(z, .)` with a free or first-Picard solution at `t^2` as boundary terms
//! plus integrals carrying a factor `1/t^2`. Both sides are evaluated by
//! quadrature on one mesh and compared.
//!
//! * `A1`: `int_0^b R xi(z) xi_nu(t^2)` (tent weight `R = R_ab`).
//! * `A2`: `int_0^a xi(z) xi_{nu,1}(t^2)`.
//! * `A3`: `int_0^b R xi(z) xi_{nu,1}(t^2)`.

use std::str::FromStr;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::kernel::TentWeight;
use crate::perturbed::{picard_parts, MeshSpec, Solver};
use crate::setup::ProblemSetup;
use crate::unperturbed::{theta_order, xi_order, SpectralPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    A1,
    A2,
    A3,
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(Identity::A1),
            "A2" => Ok(Identity::A2),
            "A3" => Ok(Identity::A3),
            other => Err(Error::Config(format!(
                "unknown identity {other:?} (expected A1, A2 or A3)"
            ))),
        }
    }
}

/// Both sides of one identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: C,
    pub rhs: C,
}

impl IdentityCheck {
    /// `|lhs - rhs| / (|lhs| + |rhs| + tiny)`.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / (self.lhs.norm() + self.rhs.norm() + f64::MIN_POSITIVE)
    }
}

/// Relative residual of identity `which` for the operator of `setup` on
/// `(0, b]`, `0 < a < b`, at spectral points `z` and `t^2`.
pub fn ibp_identity_residual(
    which: Identity,
    setup: &ProblemSetup,
    a: f64,
    b: f64,
    t: f64,
    z: C,
) -> Result<f64> {
    Ok(ibp_identity(which, setup, a, b, t, z)?.residual())
}

pub fn ibp_identity(
    which: Identity,
    setup: &ProblemSetup,
    a: f64,
    b: f64,
    t: f64,
    z: C,
) -> Result<IdentityCheck> {
    TentWeight::new(a, b)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let st = setup.with_interval(b, setup.gamma)?;
    let k = z.norm().sqrt().max(t) + 10.0 / b;
    let mesh = MeshSpec::default().with_k_max(k).with_breakpoints(&[a]);
    let solver = Solver::new(&st, &mesh)?;
    let g = &solver.grid;
    let ia = g.edge_index(a)?;
    let last = g.len() - 1;
    let t2 = t * t;
    let nu = st.nu();
    let p = nu + 0.5;
    let tr = solver.trace(SpectralPoint::new(z))?;
    let parts = picard_parts(&solver, SpectralPoint::real(t2))?;
    let q: Vec<f64> = g.x.iter().map(|&x| st.q.eval(x)).collect();
    let r = TentWeight::new(a, b)?;
    let rw: Vec<f64> = g.x.iter().map(|&x| r.eval(x)).collect();
    let xi = &tr.xi;
    let xp = &tr.xi_prime;

    // int over mesh points lo..=hi of f_i
    let int = |lo: usize, hi: usize, f: &dyn Fn(usize) -> C| -> C {
        (lo..=hi).map(|i| g.w[i] * f(i)).sum()
    };

    // For A1 the companion is xi_nu, for A2/A3 it is xi_{nu,1}.
    let companion: &[C] = match which {
        Identity::A1 => &parts.xi_nu,
        Identity::A2 | Identity::A3 => &parts.xi1,
    };
    let tent_form = |u: &[C]| -> C {
        // (1/t^2) [ -(xi(b)u(b) - xi(a)u(a))/(b-a) + 2/(b-a) int_a^b xi' u - int R (q-z) xi u ]
        let bnd = -(xi[last] * u[last] - xi[ia] * u[ia]) / (b - a);
        let slope = 2.0 / (b - a) * int(ia, last, &|i| xp[i] * u[i]);
        let bulk = int(0, last, &|i| rw[i] * (q[i] - z) * xi[i] * u[i]);
        (bnd + slope - bulk) / t2
    };
    let check = match which {
        Identity::A1 => {
            let lhs = int(0, last, &|i| rw[i] * xi[i] * companion[i]);
            IdentityCheck {
                lhs,
                rhs: tent_form(companion),
            }
        }
        Identity::A2 => {
            let lhs = int(0, ia, &|i| xi[i] * companion[i]);
            let xi_up = xi_order(nu + 1.0, SpectralPoint::real(t2), a)?;
            let th_up = theta_order(nu + 1.0, SpectralPoint::real(t2), a)?;
            let rhs = xi[ia] * parts.q1[ia] * xi_up - xi[ia] * parts.q2[ia] * th_up / t2
                + (xp[ia] - p / a * xi[ia]) * companion[ia] / t2
                - int(0, ia, &|i| (q[i] - z) * xi[i] * companion[i]) / t2
                + int(0, ia, &|i| q[i] * xi[i] * parts.xi_nu[i]) / t2;
            IdentityCheck { lhs, rhs }
        }
        Identity::A3 => {
            let lhs = int(0, last, &|i| rw[i] * xi[i] * companion[i]);
            let extra = int(0, last, &|i| rw[i] * q[i] * xi[i] * parts.xi_nu[i]) / t2;
            IdentityCheck {
                lhs,
                rhs: tent_form(companion) + extra,
            }
        }
    };
    if !(check.lhs.is_finite() && check.rhs.is_finite()) {
        return Err(Error::NonConvergence(
            "identity sides are not finite".into(),
        ));
    }
    Ok(check)
}
