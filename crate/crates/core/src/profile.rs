//! Real profiles `phi` on `(0, s]`; their transforms are the elements of `B_s`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::setup::{parse_real, parse_two_columns};

/// A real function on `(0, s]`.
#[derive(Clone)]
pub enum Profile {
    /// `exp(1 - 1/(1 - u^2))`, `u` mapping `(lo, hi)` to `(-1, 1)`; zero outside.
    Bump {
        lo: f64,
        hi: f64,
    },
    /// 1 on `(lo, hi]`.
    Indicator {
        lo: f64,
        hi: f64,
    },
    /// `(x - lo)/(hi - lo)` on `(lo, hi]`.
    Ramp {
        lo: f64,
        hi: f64,
    },
    /// `sin(k pi x / s)` on `(0, s]`.
    Sine {
        k: u32,
        s: f64,
    },
    /// `x^p (s - x)^p` on `(0, s]`.
    Beta {
        p: f64,
        s: f64,
    },
    /// Piecewise linear; zero outside the table.
    Table {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    /// Arbitrary closure with its support end and breakpoints.
    Func {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        support_end: f64,
        kinks: Vec<f64>,
    },
    Scaled(f64, Box<Profile>),
    Sum(Vec<Profile>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Bump { lo, hi } => write!(f, "bump({lo},{hi})"),
            Profile::Indicator { lo, hi } => write!(f, "indicator({lo},{hi})"),
            Profile::Ramp { lo, hi } => write!(f, "ramp({lo},{hi})"),
            Profile::Sine { k, s } => write!(f, "sine({k},{s})"),
            Profile::Beta { p, s } => write!(f, "beta({p},{s})"),
            Profile::Table { x, .. } => write!(f, "table({} points)", x.len()),
            Profile::Func { support_end, .. } => write!(f, "func(support_end={support_end})"),
            Profile::Scaled(c, p) => write!(f, "{c}*{p:?}"),
            Profile::Sum(v) => {
                write!(f, "sum(")?;
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{p:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo >= 0.0 && hi > lo && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "profile interval needs 0 <= lo < hi, got ({lo}, {hi})"
        )))
    }
}

impl Profile {
    pub fn bump(lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(Profile::Bump { lo, hi })
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(Profile::Indicator { lo, hi })
    }

    pub fn ramp(lo: f64, hi: f64) -> Result<Self> {
        check_interval(lo, hi)?;
        Ok(Profile::Ramp { lo, hi })
    }

    pub fn sine(k: u32, s: f64) -> Result<Self> {
        check_interval(0.0, s)?;
        Ok(Profile::Sine { k, s })
    }

    pub fn beta(p: f64, s: f64) -> Result<Self> {
        check_interval(0.0, s)?;
        if !(p >= 0.0) {
            return Err(Error::Domain("beta profile exponent must be >= 0".into()));
        }
        Ok(Profile::Beta { p, s })
    }

    pub fn table(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Domain(
                "table profile needs >= 2 (x, y) pairs".into(),
            ));
        }
        if x[0] < 0.0
            || x.windows(2).any(|w| w[1] <= w[0])
            || x.iter().chain(&y).any(|v| !v.is_finite())
        {
            return Err(Error::Domain(
                "table profile x must be increasing, >= 0, finite".into(),
            ));
        }
        Ok(Profile::Table { x, y })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let (x, y) = parse_two_columns(&std::fs::read_to_string(path)?)?;
        Self::table(x, y)
    }

    pub fn func<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, support_end: f64) -> Self {
        Profile::Func {
            f: Arc::new(f),
            support_end,
            kinks: Vec::new(),
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Profile::Scaled(c, Box::new(self))
    }

    pub fn plus(self, other: Profile) -> Self {
        match self {
            Profile::Sum(mut v) => {
                v.push(other);
                Profile::Sum(v)
            }
            p => Profile::Sum(vec![p, other]),
        }
    }

    /// Parses `kind:arg:arg`, e.g. `bump:0.1:0.4`, `indicator:0.5:1`,
    /// `ramp:0.5:1`, `sine:3:1`, `beta:2:1`, `file:path`; `+` joins terms and
    /// `c*` scales one.
    pub fn parse(text: &str) -> Result<Self> {
        let terms: Vec<&str> = text.split('+').map(str::trim).collect();
        if terms.len() > 1 {
            return Ok(Profile::Sum(
                terms
                    .iter()
                    .map(|t| Self::parse(t))
                    .collect::<Result<_>>()?,
            ));
        }
        let t = terms[0];
        if let Some((c, rest)) = t.split_once('*') {
            let c = parse_real(c)
                .ok_or_else(|| Error::Config(format!("bad profile scale in {t:?}")))?;
            return Ok(Self::parse(rest)?.scaled(c));
        }
        let parts: Vec<&str> = t.split(':').map(str::trim).collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::Config(format!("profile {t:?} is missing argument {i}")))
                .and_then(|v| {
                    parse_real(v).ok_or_else(|| {
                        Error::Config(format!("profile {t:?}: argument {i} is not a number"))
                    })
                })
        };
        let arity = |n: usize| {
            if parts.len() == n + 1 {
                Ok(())
            } else {
                Err(Error::Config(format!("profile {t:?} takes {n} arguments")))
            }
        };
        match parts[0] {
            "bump" => arity(2).and_then(|_| Self::bump(num(1)?, num(2)?)),
            "indicator" => arity(2).and_then(|_| Self::indicator(num(1)?, num(2)?)),
            "ramp" => arity(2).and_then(|_| Self::ramp(num(1)?, num(2)?)),
            "sine" => arity(2).and_then(|_| {
                let k = num(1)?;
                if k < 1.0 || k.fract() != 0.0 {
                    return Err(Error::Config(
                        "sine profile needs a positive integer k".into(),
                    ));
                }
                Self::sine(k as u32, num(2)?)
            }),
            "beta" => arity(2).and_then(|_| Self::beta(num(1)?, num(2)?)),
            "file" => arity(1).and_then(|_| Self::from_file(Path::new(parts[1]))),
            other => Err(Error::Config(format!("unknown profile kind {other:?}"))),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Bump { lo, hi } => {
                if x <= *lo || x >= *hi {
                    return 0.0;
                }
                let u = (2.0 * x - lo - hi) / (hi - lo);
                (1.0 - 1.0 / (1.0 - u * u)).exp()
            }
            Profile::Indicator { lo, hi } => f64::from(x > *lo && x <= *hi),
            Profile::Ramp { lo, hi } => {
                if x > *lo && x <= *hi {
                    (x - lo) / (hi - lo)
                } else {
                    0.0
                }
            }
            Profile::Sine { k, s } => {
                if x > 0.0 && x <= *s {
                    (*k as f64 * PI * x / s).sin()
                } else {
                    0.0
                }
            }
            Profile::Beta { p, s } => {
                if x > 0.0 && x <= *s {
                    (x * (s - x)).powf(*p)
                } else {
                    0.0
                }
            }
            Profile::Table { x: xs, y } => {
                let n = xs.len();
                if x < xs[0] || x > xs[n - 1] {
                    return 0.0;
                }
                let i = xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                y[i] + t * (y[i + 1] - y[i])
            }
            Profile::Func { f, .. } => f(x),
            Profile::Scaled(c, p) => c * p.eval(x),
            Profile::Sum(v) => v.iter().map(|p| p.eval(x)).sum(),
        }
    }

    /// Smallest `e` with `phi = 0` on `(e, inf)`.
    pub fn support_end(&self) -> f64 {
        match self {
            Profile::Bump { hi, .. } | Profile::Indicator { hi, .. } | Profile::Ramp { hi, .. } => {
                *hi
            }
            Profile::Sine { s, .. } | Profile::Beta { s, .. } => *s,
            Profile::Table { x, y } => {
                let last = y.iter().rposition(|v| *v != 0.0);
                match last {
                    None => 0.0,
                    Some(i) if i + 1 < x.len() => x[i + 1],
                    Some(i) => x[i],
                }
            }
            Profile::Func { support_end, .. } => *support_end,
            Profile::Scaled(c, p) => {
                if *c == 0.0 {
                    0.0
                } else {
                    p.support_end()
                }
            }
            Profile::Sum(v) => v.iter().map(Profile::support_end).fold(0.0, f64::max),
        }
    }

    /// Points where `phi` (or a derivative) jumps.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = match self {
            Profile::Bump { lo, hi } | Profile::Indicator { lo, hi } | Profile::Ramp { lo, hi } => {
                vec![*lo, *hi]
            }
            Profile::Sine { s, .. } | Profile::Beta { s, .. } => vec![*s],
            Profile::Table { x, .. } => x.clone(),
            Profile::Func {
                kinks, support_end, ..
            } => {
                let mut k = kinks.clone();
                k.push(*support_end);
                k
            }
            Profile::Scaled(_, p) => p.kinks(),
            Profile::Sum(v) => v.iter().flat_map(Profile::kinks).collect(),
        };
        out.retain(|v| *v > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `int_lo^hi phi(x)^2 dx` by composite Gauss–Legendre split at the kinks.
    pub fn norm_sq_on(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let gl = GaussLegendre::new(16);
        let mut cuts = vec![lo];
        cuts.extend(self.kinks().into_iter().filter(|k| *k > lo && *k < hi));
        cuts.push(hi);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let pieces = 64;
            let h = (w[1] - w[0]) / pieces as f64;
            for p in 0..pieces {
                let a = w[0] + h * p as f64;
                total += gl.integrate(a, a + h, |x| self.eval(x).powi(2));
            }
        }
        total
    }
}
