//! Batch experiment runner behind the `dbsampler` binary.
//!
//! A run is `kind + flat key=value config`. The config is parsed and checked
//! completely before any computation starts; the result is one CSV table
//! whose first line records the resolved config and whose second line names
//! the columns. Column layouts per kind are listed in `docs/schemas.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::kernel::KernelEvaluator;
use crate::paleywiener::{pw_noise, pw_reconstruct, Packet, PwMode};
use crate::perturbed::MeshSpec;
use crate::profile::Profile;
use crate::sampling::{
    alias_reconstruct, evaluator_for, noise_sequence, oversample_reconstruct, reconstruct_exact,
    spectrum_on, subinterval_spectrum, transform, CompactGrid, NoiseWeight, Reconstruction,
    ReconstructionReport, DEFAULT_N,
};
use crate::setup::{parse_real, Potential, ProblemSetup};
use crate::spectrum::{asymptotic_prediction, compute_spectrum, fmt17};
use crate::unperturbed::SpectralPoint;

pub use crate::fit::decay_fit;
pub use crate::identities::{ibp_identity_residual, Identity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Spectrum,
    KernelCheck,
    Exact,
    Oversample,
    Alias,
    PwBaseline,
    IbpCheck,
    DecayFit,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Spectrum,
        Kind::KernelCheck,
        Kind::Exact,
        Kind::Oversample,
        Kind::Alias,
        Kind::PwBaseline,
        Kind::IbpCheck,
        Kind::DecayFit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Spectrum => "spectrum",
            Kind::KernelCheck => "kernel-check",
            Kind::Exact => "exact",
            Kind::Oversample => "oversample",
            Kind::Alias => "alias",
            Kind::PwBaseline => "pw-baseline",
            Kind::IbpCheck => "ibp-check",
            Kind::DecayFit => "decay-fit",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown experiment kind {s:?}")))
    }
}

/// Quantity tabulated by a `decay-fit` run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `K(lambda_n, lambda_n)`.
    Norming,
    /// `|J_ab(z, lambda_n)| / sqrt(K_n)`.
    Oversampling,
    /// `|t_n - (n + (2 nu -+ 1)/4) pi / s|`.
    EigenDeviation,
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "norming" => Ok(Quantity::Norming),
            "oversampling" => Ok(Quantity::Oversampling),
            "eigen-deviation" => Ok(Quantity::EigenDeviation),
            other => Err(Error::Config(format!(
                "unknown quantity {other:?} (expected norming, oversampling or eigen-deviation)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PwKind {
    Exact,
    Oversample { b: f64 },
    Alias { b: f64 },
}

/// Fully validated parameters of one run.
#[derive(Debug, Clone)]
pub enum Plan {
    Spectrum {
        setup: ProblemSetup,
        n: usize,
    },
    KernelCheck {
        setup: ProblemSetup,
        grid: CompactGrid,
    },
    Exact {
        setup: ProblemSetup,
        profile: Profile,
        n: usize,
        delta: f64,
        weight: NoiseWeight,
        grid: CompactGrid,
    },
    Oversample {
        setup: ProblemSetup,
        a: f64,
        profile: Profile,
        n: usize,
        delta: f64,
        weight: NoiseWeight,
        grid: CompactGrid,
    },
    Alias {
        setup: ProblemSetup,
        a: f64,
        profile: Profile,
        n: usize,
        grid: CompactGrid,
    },
    PwBaseline {
        a: f64,
        mode: PwKind,
        packet: Packet,
        n: usize,
        delta: f64,
        grid: CompactGrid,
    },
    IbpCheck {
        setup: ProblemSetup,
        which: Vec<Identity>,
        a: f64,
        b: f64,
        t: f64,
        z: C,
    },
    DecayFit {
        setup: ProblemSetup,
        quantity: Quantity,
        n: usize,
        window: (f64, f64),
        a: f64,
        z: C,
    },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub plan: Plan,
    /// Every key with the value actually used, defaults included.
    pub resolved: BTreeMap<String, String>,
}

/// Key lookup that remembers what was read and which defaults applied.
struct Params {
    given: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Params {
    fn parse(text: &str) -> Result<Self> {
        let mut given = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got {line:?}", i + 1))
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", i + 1)));
            }
            if given.insert(k.clone(), v).is_some() {
                return Err(Error::Config(format!("key {k:?} given twice")));
            }
        }
        Ok(Params {
            given,
            resolved: BTreeMap::new(),
        })
    }

    fn raw(&mut self, key: &str, default: Option<&str>) -> Result<String> {
        let v = match (self.given.get(key), default) {
            (Some(v), _) => v.clone(),
            (None, Some(d)) => d.to_string(),
            (None, None) => return Err(Error::Config(format!("missing required key {key:?}"))),
        };
        self.resolved.insert(key.to_string(), v.clone());
        Ok(v)
    }

    fn real(&mut self, key: &str, default: Option<&str>) -> Result<f64> {
        let v = self.raw(key, default)?;
        parse_real(&v).ok_or_else(|| Error::Config(format!("{key} = {v:?} is not a number")))
    }

    fn count(&mut self, key: &str, default: Option<&str>) -> Result<usize> {
        let v = self.raw(key, default)?;
        v.parse()
            .map_err(|_| Error::Config(format!("{key} = {v:?} is not a non-negative integer")))
    }

    fn parsed<T: FromStr<Err = Error>>(&mut self, key: &str, default: Option<&str>) -> Result<T> {
        self.raw(key, default)?.parse()
    }

    fn setup(&mut self, s_key: &str) -> Result<ProblemSetup> {
        let nu = self.real("nu", None)?;
        let s = self.real(s_key, None)?;
        let gamma = self.real("gamma", None)?;
        let q = Potential::parse(&self.raw("potential", Some("zero"))?)?;
        ProblemSetup::new(nu, s, q, gamma)
    }

    fn grid(&mut self, default: CompactGrid) -> Result<CompactGrid> {
        let lo = self.real("grid_x_lo", Some(&default.x_lo.to_string()))?;
        let hi = self.real("grid_x_hi", Some(&default.x_hi.to_string()))?;
        let h = self.real("grid_h", Some(&default.h.to_string()))?;
        let m = self.count("grid_m", Some(&default.m.to_string()))?;
        let k = self.count("grid_k", Some(&default.k.to_string()))?;
        CompactGrid::new(lo, hi, h, m, k)
    }

    fn weight(&mut self) -> Result<NoiseWeight> {
        match self.raw("noise_weight", Some("growing"))?.as_str() {
            "growing" => Ok(NoiseWeight::Growing),
            "decaying" => Ok(NoiseWeight::Decaying),
            other => Err(Error::Config(format!(
                "noise_weight {other:?} (expected growing or decaying)"
            ))),
        }
    }

    fn nonneg(&mut self, key: &str, default: Option<&str>) -> Result<f64> {
        let v = self.real(key, default)?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::Config(format!(
                "{key} must be finite and >= 0, got {v}"
            )));
        }
        Ok(v)
    }

    fn positive_count(&mut self, key: &str, default: Option<&str>) -> Result<usize> {
        let v = self.count(key, default)?;
        if v == 0 {
            return Err(Error::Config(format!("{key} must be at least 1")));
        }
        Ok(v)
    }

    fn complex(&mut self, re: &str, im: &str) -> Result<C> {
        Ok(C::new(self.real(re, None)?, self.real(im, Some("0"))?))
    }

    fn unused(&self) -> Vec<String> {
        let used: BTreeSet<&String> = self.resolved.keys().collect();
        self.given
            .keys()
            .filter(|k| !used.contains(k))
            .cloned()
            .collect()
    }
}

fn check_sub(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a < b) {
        return Err(Error::Config(format!(
            "need 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses and validates `text` for `kind`. `seed` and `out` override the
    /// config keys of the same name.
    pub fn parse(kind: Kind, text: &str, seed: Option<u64>, out: Option<PathBuf>) -> Result<Self> {
        let mut p = Params::parse(text)?;
        if let Some(k) = p.given.get("kind").cloned() {
            let k: Kind = k.parse()?;
            if k != kind {
                return Err(Error::Config(format!(
                    "config is for {k}, but {kind} was requested"
                )));
            }
            p.raw("kind", None)?;
        }
        let seed = match seed {
            Some(s) => {
                p.given.insert("seed".into(), s.to_string());
                s
            }
            None => p.count("seed", Some("0"))? as u64,
        };
        p.resolved.insert("seed".into(), seed.to_string());
        let out = match out {
            Some(o) => Some(o),
            None => p.given.get("out").cloned().map(PathBuf::from),
        };
        if p.given.contains_key("out") {
            p.raw("out", None)?;
        }
        let n_default = DEFAULT_N.to_string();
        let plan = match kind {
            Kind::Spectrum => {
                let setup = p.setup("s")?;
                let n = p.positive_count("n", None)?;
                Plan::Spectrum { setup, n }
            }
            Kind::KernelCheck => {
                let setup = p.setup("s")?;
                let grid = p.grid(CompactGrid::new(0.0, 50.0, 1.0, 5, 3)?)?;
                Plan::KernelCheck { setup, grid }
            }
            Kind::Exact => {
                let setup = p.setup("s")?;
                let n = p.positive_count("n", Some(&n_default))?;
                let profile = Profile::parse(&p.raw("profile", None)?)?;
                let delta = p.nonneg("delta", Some("0"))?;
                let weight = p.weight()?;
                let grid = p.grid(CompactGrid::default_for(n, setup.s))?;
                Plan::Exact {
                    setup,
                    profile,
                    n,
                    delta,
                    weight,
                    grid,
                }
            }
            Kind::Oversample => {
                let setup = p.setup("b")?;
                let a = p.real("a", None)?;
                check_sub(a, setup.s)?;
                let n = p.positive_count("n", Some(&n_default))?;
                let profile = Profile::parse(&p.raw("profile", None)?)?;
                let delta = p.nonneg("delta", None)?;
                let weight = p.weight()?;
                let grid = p.grid(CompactGrid::default_for(n, setup.s))?;
                Plan::Oversample {
                    setup,
                    a,
                    profile,
                    n,
                    delta,
                    weight,
                    grid,
                }
            }
            Kind::Alias => {
                let setup = p.setup("b")?;
                let a = p.real("a", None)?;
                check_sub(a, setup.s)?;
                if setup.gamma == 0.0 {
                    return Err(Error::Config("aliasing needs gamma in (0, pi)".into()));
                }
                let n = p.positive_count("n", Some(&n_default))?;
                let profile = Profile::parse(&p.raw("profile", None)?)?;
                let grid = p.grid(CompactGrid::default_for(n, a))?;
                Plan::Alias {
                    setup,
                    a,
                    profile,
                    n,
                    grid,
                }
            }
            Kind::PwBaseline => {
                let a = p.real("a", None)?;
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Config(format!("a must be positive, got {a}")));
                }
                let mode = match p.raw("mode", Some("exact"))?.as_str() {
                    "exact" => PwKind::Exact,
                    "oversample" => PwKind::Oversample {
                        b: p.real("b", None)?,
                    },
                    "alias" => PwKind::Alias {
                        b: p.real("b", None)?,
                    },
                    other => {
                        return Err(Error::Config(format!(
                            "mode {other:?} (expected exact, oversample or alias)"
                        )))
                    }
                };
                if let PwKind::Oversample { b } | PwKind::Alias { b } = mode {
                    if !(b > a && b.is_finite()) {
                        return Err(Error::Config(format!("need b > a, got b = {b}")));
                    }
                }
                let width = match mode {
                    PwKind::Alias { b } => b,
                    _ => a,
                };
                let packet_text = p.raw("packet", Some("indicator"))?;
                let packet = match packet_text.split(':').collect::<Vec<_>>().as_slice() {
                    ["indicator"] => Packet::indicator(width),
                    ["random", terms] => {
                        let t: usize = terms
                            .parse()
                            .map_err(|_| Error::Config(format!("bad packet {packet_text:?}")))?;
                        if t == 0 {
                            return Err(Error::Config(
                                "random packet needs at least one term".into(),
                            ));
                        }
                        Packet::random(width, t, seed)
                    }
                    _ => {
                        return Err(Error::Config(format!(
                            "packet {packet_text:?} (expected indicator or random:<terms>)"
                        )))
                    }
                };
                let n = p.positive_count("n", Some("500"))?;
                let delta = match mode {
                    PwKind::Oversample { .. } => p.nonneg("delta", None)?,
                    _ => 0.0,
                };
                let grid = p.grid(CompactGrid::new(-3.0, 3.0, 0.0, 121, 1)?)?;
                Plan::PwBaseline {
                    a,
                    mode,
                    packet,
                    n,
                    delta,
                    grid,
                }
            }
            Kind::IbpCheck => {
                let nu = p.real("nu", None)?;
                let q = Potential::parse(&p.raw("potential", Some("zero"))?)?;
                let a = p.real("a", None)?;
                let b = p.real("b", None)?;
                check_sub(a, b)?;
                let setup = ProblemSetup::new(nu, b, q, 0.0)?;
                let which = match p.raw("identity", Some("all"))?.as_str() {
                    "all" => vec![Identity::A1, Identity::A2, Identity::A3],
                    one => vec![one.parse()?],
                };
                let t = p.real("t", None)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::Config(format!("t must be positive, got {t}")));
                }
                let z = p.complex("z_re", "z_im")?;
                Plan::IbpCheck {
                    setup,
                    which,
                    a,
                    b,
                    t,
                    z,
                }
            }
            Kind::DecayFit => {
                let setup = p.setup("s")?;
                let quantity: Quantity = p.parsed("quantity", None)?;
                let n = p.positive_count("n", Some("100"))?;
                let lo = p.real("window_lo", Some("20"))?;
                let hi = p.real("window_hi", Some(&n.to_string()))?;
                if !(lo >= 1.0 && hi > lo) {
                    return Err(Error::Config(format!(
                        "window must satisfy 1 <= lo < hi, got [{lo}, {hi}]"
                    )));
                }
                let (a, z) = if quantity == Quantity::Oversampling {
                    let a = p.real("a", None)?;
                    check_sub(a, setup.s)?;
                    (a, p.complex("z_re", "z_im")?)
                } else {
                    (f64::NAN, C::new(0.0, 0.0))
                };
                Plan::DecayFit {
                    setup,
                    quantity,
                    n,
                    window: (lo, hi),
                    a,
                    z,
                }
            }
        };
        let unused = p.unused();
        if !unused.is_empty() {
            return Err(Error::Config(format!(
                "unknown keys for {kind}: {}",
                unused.join(", ")
            )));
        }
        Ok(ExperimentConfig {
            kind,
            seed,
            out,
            plan,
            resolved: p.resolved,
        })
    }

    pub fn from_file(
        kind: Kind,
        path: &Path,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(kind, &text, seed, out)
    }

    /// `# dbsampler <kind> key=value ...` with keys sorted.
    pub fn comment_row(&self) -> String {
        let mut line = format!("# dbsampler {}", self.kind);
        for (k, v) in &self.resolved {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}

/// A CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, comment: &str) -> String {
        let mut s = String::new();
        s.push_str(comment);
        s.push('\n');
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

fn opt17(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

const POINT_HEADER: [&str; 11] = [
    "z_re",
    "z_im",
    "truth_re",
    "truth_im",
    "value_re",
    "value_im",
    "abs_error",
    "sup_error",
    "fitted_c",
    "tail_estimate",
    "n",
];

fn point_rows(
    table: &mut Table,
    points: &[C],
    truth: &[C],
    values: &[C],
    report: &ReconstructionReport,
) {
    for ((z, t), v) in points.iter().zip(truth).zip(values) {
        table.push(vec![
            fmt17(z.re),
            fmt17(z.im),
            fmt17(t.re),
            fmt17(t.im),
            fmt17(v.re),
            fmt17(v.im),
            fmt17((t - v).norm()),
            fmt17(report.sup_error),
            opt17(report.fitted_constant),
            fmt17(report.tail_estimate),
            report.truncation.to_string(),
        ]);
    }
}

fn reconstruction_table(r: &Reconstruction) -> Table {
    let mut t = Table::new(&POINT_HEADER);
    let pts: Vec<C> = r.points.iter().map(|p| p.z).collect();
    point_rows(&mut t, &pts, &r.truth, &r.values, &r.report);
    t
}

/// Runs a validated experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<Table> {
    match &cfg.plan {
        Plan::Spectrum { setup, n } => {
            let spec = compute_spectrum(setup, *n)?;
            let mut t = Table::new(&["index", "lambda", "norming", "t", "asymptotic_t"]);
            for i in 0..spec.len() {
                let idx = spec.index(i);
                t.push(vec![
                    idx.to_string(),
                    fmt17(spec.eigenvalues[i]),
                    fmt17(spec.norming[i]),
                    fmt17(spec.t(i)),
                    fmt17(asymptotic_prediction(setup, idx).t),
                ]);
            }
            Ok(t)
        }
        Plan::KernelCheck { setup, grid } => {
            let pts = grid.points();
            let k = pts.iter().map(|p| p.w.norm()).fold(10.0, f64::max);
            let eval = KernelEvaluator::new(setup, &MeshSpec::default().with_k_max(k))?;
            let mut t = Table::new(&[
                "z_re", "z_im", "w_re", "w_im", "inner_re", "inner_im", "hb_re", "hb_im",
                "ratio_re", "ratio_im",
            ]);
            for &z in &pts {
                for &w in &pts {
                    let i = eval.inner(z, w)?;
                    let h = eval.hb(z, w)?;
                    let r = i / h;
                    t.push(
                        [
                            z.z.re, z.z.im, w.z.re, w.z.im, i.re, i.im, h.re, h.im, r.re, r.im,
                        ]
                        .map(fmt17)
                        .to_vec(),
                    );
                }
            }
            Ok(t)
        }
        Plan::Exact {
            setup,
            profile,
            n,
            delta,
            weight,
            grid,
        } => {
            let eval = evaluator_for(setup, *n, &profile.kinks())?;
            let spec = spectrum_on(&eval, *n)?;
            let f = transform(&eval, profile.clone())?;
            let noise = noise_sequence(
                setup.nu(),
                *delta,
                spec.first_index(),
                *n,
                cfg.seed,
                *weight,
            )?;
            Ok(reconstruction_table(&reconstruct_exact(
                &f,
                &spec,
                *n,
                grid,
                Some(&noise),
            )?))
        }
        Plan::Oversample {
            setup,
            a,
            profile,
            n,
            delta,
            weight,
            grid,
        } => {
            let mut bp = profile.kinks();
            bp.push(*a);
            let eval = evaluator_for(setup, *n, &bp)?;
            let spec = spectrum_on(&eval, *n)?;
            let f = transform(&eval, profile.clone())?;
            let noise = noise_sequence(
                setup.nu(),
                *delta,
                spec.first_index(),
                *n,
                cfg.seed,
                *weight,
            )?;
            Ok(reconstruction_table(&oversample_reconstruct(
                &f, *a, &spec, &noise, *n, grid,
            )?))
        }
        Plan::Alias {
            setup,
            a,
            profile,
            n,
            grid,
        } => {
            let mut bp = profile.kinks();
            bp.push(*a);
            let eval = evaluator_for(setup, *n, &bp)?;
            let spec_a = subinterval_spectrum(&eval, *a, setup.gamma, *n)?;
            let f = transform(&eval, profile.clone())?;
            Ok(reconstruction_table(&alias_reconstruct(
                &f, &spec_a, *n, grid,
            )?))
        }
        Plan::PwBaseline {
            a,
            mode,
            packet,
            n,
            delta,
            grid,
        } => {
            let mode = match *mode {
                PwKind::Exact => PwMode::Exact,
                PwKind::Oversample { b } => PwMode::Oversample {
                    b,
                    noise: pw_noise(*delta, *n, cfg.seed),
                },
                PwKind::Alias { b } => PwMode::Alias { b },
            };
            let pts: Vec<C> = grid.points().iter().map(|p| p.z).collect();
            let r = pw_reconstruct(*a, &mode, packet, *n, &pts)?;
            let mut t = Table::new(&POINT_HEADER);
            point_rows(&mut t, &pts, &r.truth, &r.values, &r.report);
            Ok(t)
        }
        Plan::IbpCheck {
            setup,
            which,
            a,
            b,
            t,
            z,
        } => {
            let mut tab = Table::new(&[
                "identity", "a", "b", "t", "z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                "residual",
            ]);
            for w in which {
                let c = crate::identities::ibp_identity(*w, setup, *a, *b, *t, *z)?;
                let mut row = vec![format!("{w:?}")];
                row.extend(
                    [
                        *a,
                        *b,
                        *t,
                        z.re,
                        z.im,
                        c.lhs.re,
                        c.lhs.im,
                        c.rhs.re,
                        c.rhs.im,
                        c.residual(),
                    ]
                    .map(fmt17),
                );
                tab.push(row);
            }
            Ok(tab)
        }
        Plan::DecayFit {
            setup,
            quantity,
            n,
            window,
            a,
            z,
        } => {
            let series = decay_series(setup, *quantity, *n, *a, *z)?;
            let fit = decay_fit(&series, *window)?;
            let mut t = Table::new(&[
                "n",
                "value",
                "slope",
                "intercept",
                "residual",
                "window_lo",
                "window_hi",
            ]);
            for (k, v) in &series {
                t.push(vec![
                    format!("{k}"),
                    fmt17(*v),
                    fmt17(fit.slope),
                    fmt17(fit.intercept),
                    fmt17(fit.residual),
                    fmt17(window.0),
                    fmt17(window.1),
                ]);
            }
            Ok(t)
        }
    }
}

fn decay_series(
    setup: &ProblemSetup,
    quantity: Quantity,
    n: usize,
    a: f64,
    z: C,
) -> Result<Vec<(f64, f64)>> {
    match quantity {
        Quantity::Norming => {
            let spec = compute_spectrum(setup, n)?;
            Ok((0..spec.len())
                .map(|i| (spec.index(i) as f64, spec.norming[i]))
                .collect())
        }
        Quantity::EigenDeviation => {
            let spec = compute_spectrum(setup, n)?;
            Ok((0..spec.len())
                .map(|i| {
                    let k = spec.index(i);
                    (
                        k as f64,
                        (spec.t(i) - asymptotic_prediction(setup, k).t).abs(),
                    )
                })
                .collect())
        }
        Quantity::Oversampling => {
            let eval = evaluator_for(setup, n, &[a])?;
            let spec = spectrum_on(&eval, n)?;
            let r = eval.tent(a)?;
            let z = SpectralPoint::new(z);
            (0..spec.len())
                .map(|i| {
                    let l = spec.eigenvalues[i];
                    let j = eval.oversampling_with(&r, z, SpectralPoint::real(l))?;
                    Ok((spec.index(i) as f64, j.norm() / spec.norming[i].sqrt()))
                })
                .collect()
        }
    }
}

/// Command line of the `dbsampler` binary.
#[derive(Debug, Parser)]
#[command(
    name = "dbsampler",
    version,
    about = "Sampling experiments in de Branges spaces of perturbed Bessel operators"
)]
pub struct Cli {
    /// spectrum | kernel-check | exact | oversample | alias | pw-baseline | ibp-check | decay-fit
    pub kind: String,
    /// Flat key=value config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// One-line error record: `error code=<2|3> kind=<name> message="..."`.
pub fn error_record(e: &Error) -> String {
    let msg = e.to_string().replace(['\n', '\r'], " ").replace('"', "'");
    format!(
        "error code={} kind={} message=\"{msg}\"",
        e.exit_code(),
        e.kind()
    )
}

/// Parses, runs and writes; returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = (|| -> Result<()> {
        let kind: Kind = cli.kind.parse()?;
        let cfg = ExperimentConfig::from_file(kind, &cli.config, cli.seed, cli.out.clone())?;
        let table = run(&cfg)?;
        let csv = table.to_csv(&cfg.comment_row());
        match &cfg.out {
            Some(path) => std::fs::write(path, csv)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
            None => stdout.write_all(csv.as_bytes())?,
        }
        Ok(())
    })();
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_record(&e));
            e.exit_code()
        }
    }
}
