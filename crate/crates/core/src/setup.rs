//! Problem definition: order, interval, potential and boundary angle.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::specfun::Order;

/// Shape of the potential `q`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Zero,
    Constant(f64),
    /// `c * x^(-beta)`
    Power {
        c: f64,
        beta: f64,
    },
    /// `c * exp(-((x - center) / width)^2)`
    Bump {
        c: f64,
        center: f64,
        width: f64,
    },
    /// Piecewise linear through `(x[i], q[i])`, constant beyond the ends.
    Tabulated {
        x: Vec<f64>,
        q: Vec<f64>,
    },
}

/// A real potential together with the declared `L^r` class of `x q(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub kind: PotentialKind,
    /// `r` in `(2, inf]`; `f64::INFINITY` for bounded potentials.
    pub r_exponent: f64,
}

impl Potential {
    pub fn zero() -> Self {
        Potential {
            kind: PotentialKind::Zero,
            r_exponent: f64::INFINITY,
        }
    }

    pub fn constant(c: f64) -> Self {
        Potential {
            kind: PotentialKind::Constant(c),
            r_exponent: f64::INFINITY,
        }
    }

    pub fn power(c: f64, beta: f64, r: f64) -> Result<Self> {
        let p = Potential {
            kind: PotentialKind::Power { c, beta },
            r_exponent: r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn bump(c: f64, center: f64, width: f64) -> Result<Self> {
        let p = Potential {
            kind: PotentialKind::Bump { c, center, width },
            r_exponent: f64::INFINITY,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn tabulated(x: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let p = Potential {
            kind: PotentialKind::Tabulated { x, q },
            r_exponent: f64::INFINITY,
        };
        p.validate()?;
        Ok(p)
    }

    /// Two whitespace- or comma-separated columns `x q(x)`; `#` starts a comment.
    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let (x, q) = parse_two_columns(&text)?;
        Self::tabulated(x, q)
    }

    /// Parses `zero`, `const:c`, `power:c:beta:r` (`r` may be `inf`),
    /// `bump:c:center:width` or `table:path`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').map(str::trim).collect();
        let num = |i: usize| -> Result<f64> {
            let t = parts.get(i).ok_or_else(|| {
                Error::Config(format!("potential {text:?} is missing argument {i}"))
            })?;
            parse_real(t)
                .ok_or_else(|| Error::Config(format!("potential {text:?}: {t:?} is not a number")))
        };
        let arity = |n: usize| {
            if parts.len() == n + 1 {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "potential {:?} takes {n} arguments",
                    parts[0]
                )))
            }
        };
        match parts[0] {
            "zero" => arity(0).map(|_| Self::zero()),
            "const" => arity(1).and_then(|_| {
                let p = Self::constant(num(1)?);
                p.validate()?;
                Ok(p)
            }),
            "power" => arity(3).and_then(|_| Self::power(num(1)?, num(2)?, num(3)?)),
            "bump" => arity(3).and_then(|_| Self::bump(num(1)?, num(2)?, num(3)?)),
            "table" => arity(1).and_then(|_| Self::from_table_file(Path::new(parts[1]))),
            other => Err(Error::Config(format!(
                "unknown potential {other:?} (expected zero, const, power, bump or table)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_exponent > 2.0) {
            return Err(Error::Domain(format!(
                "r exponent must exceed 2, got {}",
                self.r_exponent
            )));
        }
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("potential {what} must be finite")))
            }
        };
        match &self.kind {
            PotentialKind::Zero => Ok(()),
            PotentialKind::Constant(c) => finite(*c, "constant"),
            PotentialKind::Power { c, beta } => {
                finite(*c, "coefficient")?;
                finite(*beta, "exponent")?;
                let limit = 1.0 + 1.0 / self.r_exponent;
                if *beta >= limit {
                    return Err(Error::Domain(format!(
                        "power exponent {beta} violates beta < 1 + 1/r = {limit}"
                    )));
                }
                Ok(())
            }
            PotentialKind::Bump { c, center, width } => {
                finite(*c, "amplitude")?;
                finite(*center, "center")?;
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::Domain("bump width must be positive".into()));
                }
                Ok(())
            }
            PotentialKind::Tabulated { x, q } => {
                if x.len() != q.len() || x.len() < 2 {
                    return Err(Error::Domain(
                        "tabulated potential needs >= 2 (x, q) pairs".into(),
                    ));
                }
                if x.iter().chain(q).any(|v| !v.is_finite()) {
                    return Err(Error::Domain(
                        "tabulated potential has non-finite entries".into(),
                    ));
                }
                if x.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Domain(
                        "tabulated x must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Constant(c) => *c,
            PotentialKind::Power { c, beta } => c * x.powf(-beta),
            PotentialKind::Bump { c, center, width } => {
                let u = (x - center) / width;
                c * (-u * u).exp()
            }
            PotentialKind::Tabulated { x: xs, q } => {
                if x <= xs[0] {
                    return q[0];
                }
                let n = xs.len();
                if x >= xs[n - 1] {
                    return q[n - 1];
                }
                let i = xs.partition_point(|&v| v <= x) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                q[i] + t * (q[i + 1] - q[i])
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            PotentialKind::Zero => true,
            PotentialKind::Constant(c) => *c == 0.0,
            PotentialKind::Power { c, .. } | PotentialKind::Bump { c, .. } => *c == 0.0,
            PotentialKind::Tabulated { q, .. } => q.iter().all(|&v| v == 0.0),
        }
    }

    /// Approximate `int_0^x0 q(y) y^p dy` for tiny `x0` (leading behaviour only).
    pub fn small_moment(&self, x0: f64, p: f64) -> f64 {
        match &self.kind {
            PotentialKind::Power { c, beta } => c * x0.powf(p + 1.0 - beta) / (p + 1.0 - beta),
            _ => self.eval(x0) * x0.powf(p + 1.0) / (p + 1.0),
        }
    }

    /// Relative correction `(d x0^m, m)` in the Frobenius seed
    /// `x^(nu+1/2) (1 + d x^m + ...)` caused by `q` alone.
    pub fn seed_correction(&self, nu: f64, x0: f64) -> (f64, f64) {
        match &self.kind {
            PotentialKind::Power { c, beta } => {
                let m = 2.0 - beta;
                (c * x0.powf(m) / (m * (2.0 * nu + m)), m)
            }
            _ => (self.eval(x0) * x0 * x0 / (4.0 * (nu + 1.0)), 2.0),
        }
    }

    /// Upper bound of `|q|` on `[lo, hi]`, sampled.
    pub fn sup_abs(&self, lo: f64, hi: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Constant(c) => c.abs(),
            PotentialKind::Power { c, beta } => c.abs() * lo.powf(-beta).max(hi.powf(-beta)),
            PotentialKind::Tabulated { q, .. } => q.iter().fold(0.0, |m, v| m.max(v.abs())),
            PotentialKind::Bump { .. } => (0..=256)
                .map(|i| self.eval(lo + (hi - lo) * i as f64 / 256.0).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Points where `q` is not smooth (mesh breakpoints).
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            PotentialKind::Tabulated { x, .. } => x.clone(),
            _ => Vec::new(),
        }
    }
}

/// A real number, `inf`, or a multiple of pi such as `pi`, `2pi`, `3*pi/4`.
pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (t, 1.0),
    };
    let (neg, num) = match num.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, num),
    };
    let coef = num.strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let c = if coef.is_empty() {
        1.0
    } else {
        coef.parse::<f64>().ok()?
    };
    let v = c * PI / den;
    Some(if neg { -v } else { v })
}

pub(crate) fn parse_two_columns(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(Error::Config(format!(
                "line {}: expected two columns",
                lineno + 1
            )));
        }
        let parse = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Config(format!("line {}: bad number {t:?}", lineno + 1)))
        };
        xs.push(parse(cols[0])?);
        ys.push(parse(cols[1])?);
    }
    Ok((xs, ys))
}

/// One operator `H_{s,gamma}`: order, interval `(0, s]`, potential and the
/// boundary angle at `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSetup {
    pub nu: Order,
    pub s: f64,
    pub q: Potential,
    pub gamma: f64,
}

impl ProblemSetup {
    pub fn new(nu: f64, s: f64, q: Potential, gamma: f64) -> Result<Self> {
        let setup = ProblemSetup {
            nu: Order::new(nu)?,
            s,
            q,
            gamma,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s.is_finite() && self.s > 0.0) {
            return Err(Error::Domain(format!(
                "interval end s must be positive, got {}",
                self.s
            )));
        }
        if !(self.gamma.is_finite() && (0.0..PI).contains(&self.gamma)) {
            return Err(Error::Domain(format!(
                "gamma must lie in [0, pi), got {}",
                self.gamma
            )));
        }
        self.q.validate()
    }

    /// Same operator restricted to `(0, s]` with a different endpoint/angle.
    pub fn with_interval(&self, s: f64, gamma: f64) -> Result<Self> {
        let out = ProblemSetup {
            s,
            gamma,
            ..self.clone()
        };
        out.validate()?;
        Ok(out)
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu.value()
    }

    /// Index of the lowest eigenvalue: 1 for Dirichlet, 0 otherwise.
    pub fn first_index(&self) -> usize {
        if self.gamma == 0.0 {
            1
        } else {
            0
        }
    }

    /// `V(x) = (nu^2 - 1/4)/x^2 + q(x)`.
    #[inline]
    pub fn v(&self, x: f64) -> f64 {
        let nu = self.nu();
        (nu * nu - 0.25) / (x * x) + self.q.eval(x)
    }
}
