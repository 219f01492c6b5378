//! Command-line front end for `bernstein-core`.
//!
//! Every subcommand produces a [`Report`]: a versioned JSON document with the
//! command echo, computed values and convergence increments. `--format csv`
//! emits the tabular part instead (with a header row), and with `--out`
//! writes sample, sequence and matrix results in the library's file formats.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use bernstein_core::bandlimited::{interpolate_checked, pw_norm, Band, LatticeOffset, SampledBandlimited};
use bernstein_core::discrete_hardy::{
    atom_to_b1, bmo_z_norm, bmo_z_window_study, discrete_hilbert, h1_norm, make_atom, summability_check,
    FiniteSequence, WindowedValue,
};
use bernstein_core::dual_map::{bmo_clark_norm, clark_measure, pairing_discrete, t_alpha, x_alpha_norm, XAlphaElement};
use bernstein_core::hankel::{
    assemble, band_reduce, compactness_profile, op_norm, rochberg_quantities, rochberg_split, HankelMatrix,
};
use bernstein_core::numerics::QuadratureSpec;
use bernstein_core::projection::{bmo_r_norm, bmoe_norm, project_l2, project_linf, vmo_profile, GridSpec};
use bernstein_core::suite::{run_suite, Level};
use bernstein_core::{io, Complex64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

pub const THREADS_ENV: &str = "BERNSTEIN_LAB_THREADS";

#[derive(Debug, Parser, Serialize)]
#[command(name = "bernstein-lab", version, about = "Numerics for Bernstein and Paley-Wiener spaces")]
#[command(after_help = "Environment: BERNSTEIN_LAB_THREADS caps the worker threads [default: all cores].")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Lattice offset α in [0, 1); a sample file's sidecar takes precedence [default: 0]
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Band κ [default: π/2 for hankel and rochberg, π otherwise]
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Window or truncation size [default: 16 for hankel and project, else the input's window]
    #[arg(long = "N", global = true)]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Relative quadrature tolerance; the absolute tolerance is tol/100
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output file [default: stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock times (the report is then no longer reproducible)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Evaluation points: `--z` takes complex literals such as `0.3`, `1-2i`;
/// `--xs lo:hi:step` adds a real grid.
#[derive(Debug, Args, Serialize)]
pub struct Points {
    /// Evaluation point (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    pub z: Vec<String>,
    /// Real grid `lo:hi:step`
    #[arg(long, allow_hyphen_values = true)]
    pub xs: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectMode {
    /// `P_π` of a bounded symbol at points, one representative modulo `e^{±iπz}`
    Linf,
    /// Samples of the `L²` band-limiting on the lattice `(π/κ)(n+α)`, `|n| <= N`
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteLevel {
    Fast,
    Full,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Evaluate a sampled bandlimited function by its sinc series
    Interp {
        /// Samples `n,re,im` (sidecar supplies κ, α)
        #[arg(long)]
        samples: PathBuf,
        #[command(flatten)]
        points: Points,
    },
    /// Band-limit a symbol: P_π at points, or L² samples with --mode l2
    Project {
        /// Symbol JSON
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long, value_enum, default_value_t = ProjectMode::Linf)]
        mode: ProjectMode,
        /// Split radius R for P_π [default: max(5, 2 max|Re z|)]
        #[arg(long)]
        radius: Option<f64>,
        #[command(flatten)]
        points: Points,
    },
    /// BMO norm of a grid function, or BMO(e^{-iπz}) norm of samples on band π
    Bmo {
        /// Grid function `x,re,im` with sidecar
        #[arg(long, required_unless_present = "samples", conflicts_with = "samples")]
        grid: Option<PathBuf>,
        /// Samples `n,re,im` on band π
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Evaluation grid step for --samples
        #[arg(long, default_value_t = 0.125)]
        step: f64,
        /// Evaluation grid half-width for --samples
        #[arg(long, default_value_t = 8.0)]
        extent: f64,
    },
    /// BMO(ℤ) norm of a sequence, with window study and summability check
    Bmoz {
        /// Sequence `n,re,im`
        #[arg(long)]
        seq: PathBuf,
    },
    /// Discrete Hilbert transform H_{d,α} on |n| <= N, and the H¹(ℤ) norm
    Dhilbert {
        /// Sequence `n,re,im`
        #[arg(long)]
        seq: PathBuf,
    },
    /// The synthesis map T_α at points, and the X_α norm of T_α a
    Talpha {
        /// Sequence `n,re,im`
        #[arg(long)]
        seq: PathBuf,
        #[command(flatten)]
        points: Points,
    },
    /// Discrete pairing Σ h(n+α) f(n+α) of h ∈ B¹_π with f ∈ X_α
    Pairing {
        /// Samples of h
        #[arg(long)]
        h: PathBuf,
        /// Samples of f on the same lattice
        #[arg(long)]
        f: PathBuf,
    },
    /// Clark-measure BMO norm of f, against the X_α norm
    Clark {
        /// Samples of f on band π
        #[arg(long, required_unless_present = "seq", conflicts_with = "seq")]
        f: Option<PathBuf>,
        /// Sequence a; f = T_α a
        #[arg(long)]
        seq: Option<PathBuf>,
    },
    /// Truncated Hankel matrix, operator norm and compactness profile
    Hankel {
        /// Symbol JSON
        #[arg(long)]
        symbol: PathBuf,
        /// Band-reduce the symbol to |ξ| <= 2κ first
        #[arg(long)]
        reduce: bool,
        /// Truncations for a singular-value profile, e.g. 8,16,32
        #[arg(long, value_delimiter = ',')]
        profile: Vec<usize>,
        /// Tracked singular value (1-based) in the profile
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Rochberg quantities q_L, q_C, q_R of a trigonometric symbol
    Rochberg {
        /// Symbol JSON (trig)
        #[arg(long)]
        symbol: PathBuf,
        /// Band-reduce the symbol to |ξ| <= 2κ first
        #[arg(long)]
        reduce: bool,
    },
    /// Small-scale mean oscillation of a grid function
    Vmo {
        /// Grid function `x,re,im` with sidecar
        #[arg(long)]
        grid: PathBuf,
        /// Interval lengths δ
        #[arg(long, value_delimiter = ',', default_values_t = [0.0625, 0.25, 1.0, 4.0])]
        deltas: Vec<f64>,
    },
    /// Validate an H¹(ℤ) atom and map it into B¹_π
    Atoms {
        /// Atom `n,re,im` on a contiguous support
        #[arg(long)]
        atom: PathBuf,
        /// Sequence b to pair the atom with
        #[arg(long)]
        seq: Option<PathBuf>,
    },
    /// Run the self-check suite
    Suite {
        #[arg(long, value_enum, default_value_t = SuiteLevel::Fast)]
        level: SuiteLevel,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Interp { .. } => "interp",
            Command::Project { .. } => "project",
            Command::Bmo { .. } => "bmo",
            Command::Bmoz { .. } => "bmoz",
            Command::Dhilbert { .. } => "dhilbert",
            Command::Talpha { .. } => "talpha",
            Command::Pairing { .. } => "pairing",
            Command::Clark { .. } => "clark",
            Command::Hankel { .. } => "hankel",
            Command::Rochberg { .. } => "rochberg",
            Command::Vmo { .. } => "vmo",
            Command::Atoms { .. } => "atoms",
            Command::Suite { .. } => "suite",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] bernstein_core::Error),
}

impl CliError {
    /// 2 for numerical non-convergence, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rows of a table; cells are numbers or text.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// Results that have a file format of their own.
#[derive(Debug)]
pub enum Artifact {
    Samples(SampledBandlimited),
    Sequence(FiniteSequence),
    Matrix(HankelMatrix),
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Value,
    pub values: BTreeMap<String, Value>,
    pub increments: BTreeMap<String, Value>,
    /// Divergence and non-finite warnings.
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
    #[serde(skip)]
    pub artifact: Option<Artifact>,
    #[serde(skip)]
    pub exit_code: i32,
}

fn cplx(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

impl Report {
    fn new(cli: &Cli) -> Self {
        Self {
            schema: SCHEMA,
            tool: "bernstein-lab",
            version: env!("CARGO_PKG_VERSION"),
            command: serde_json::to_value(cli).unwrap_or(Value::Null),
            values: BTreeMap::new(),
            increments: BTreeMap::new(),
            flags: Vec::new(),
            table: None,
            timing: None,
            artifact: None,
            exit_code: 0,
        }
    }

    fn num(&mut self, key: &str, x: f64) {
        if !x.is_finite() {
            self.flags.push(format!("{key}: non-finite value {x}"));
        }
        self.values.insert(key.into(), json!(x));
    }

    fn complex(&mut self, key: &str, z: Complex64) {
        if !(z.re.is_finite() && z.im.is_finite()) {
            self.flags.push(format!("{key}: non-finite value {z}"));
        }
        self.values.insert(key.into(), cplx(z));
    }

    fn set(&mut self, key: &str, v: Value) {
        self.values.insert(key.into(), v);
    }

    fn windowed(&mut self, key: &str, w: &WindowedValue) {
        self.num(key, w.value);
        self.increments.insert(key.into(), json!({ "windows": w.windows, "increments": w.increments }));
        if w.divergent {
            self.flags.push(format!("{key}: divergent under window doubling"));
        }
    }

    fn complex_table(&mut self, zs: &[Complex64], vals: &[Complex64]) {
        self.table = Some(Table {
            columns: vec!["z_re", "z_im", "re", "im"],
            rows: zs.iter().zip(vals).map(|(z, v)| vec![json!(z.re), json!(z.im), json!(v.re), json!(v.im)]).collect(),
        });
        if let [v] = vals {
            self.complex("value", *v);
        }
        if vals.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            self.flags.push("table: non-finite values".into());
        }
    }

    fn indexed_table(&mut self, rows: impl Iterator<Item = (i64, Complex64)>) {
        self.table = Some(Table {
            columns: vec!["n", "re", "im"],
            rows: rows.map(|(n, v)| vec![json!(n), json!(v.re), json!(v.im)]).collect(),
        });
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are plain data");
        s.push('\n');
        s
    }

    /// The table, or `name,value` rows for scalar results.
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let csv_err = |e: csv::Error| input(format!("csv: {e}"));
        match &self.table {
            Some(t) => {
                w.write_record(&t.columns).map_err(csv_err)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(cell)).map_err(csv_err)?;
                }
            }
            None => {
                w.write_record(["name", "value"]).map_err(csv_err)?;
                for (k, v) in &self.values {
                    match v {
                        Value::Object(m) if m.contains_key("re") && m.contains_key("im") && m.len() == 2 => {
                            w.write_record([format!("{k}.re"), cell(&m["re"])]).map_err(csv_err)?;
                            w.write_record([format!("{k}.im"), cell(&m["im"])]).map_err(csv_err)?;
                        }
                        Value::Number(_) | Value::Bool(_) | Value::String(_) | Value::Null => {
                            w.write_record([k.clone(), cell(v)]).map_err(csv_err)?;
                        }
                        _ => {}
                    }
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| input(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| input(format!("csv: {e}")))
    }
}

// ---------------------------------------------------------------- helpers

fn spec(common: &Common) -> CliResult<QuadratureSpec> {
    let s = QuadratureSpec::with_tolerance(common.tol, common.tol * 1e-2);
    s.validate()?;
    Ok(s)
}

fn offset(common: &Common) -> CliResult<Option<LatticeOffset>> {
    Ok(common.alpha.map(LatticeOffset::new).transpose()?)
}

fn offset_or_zero(common: &Common) -> CliResult<LatticeOffset> {
    Ok(offset(common)?.unwrap_or_else(LatticeOffset::zero))
}

fn band(common: &Common) -> CliResult<Option<Band>> {
    Ok(common.kappa.map(Band::new).transpose()?)
}

fn band_or(common: &Common, default: f64) -> CliResult<Band> {
    Ok(Band::new(common.kappa.unwrap_or(default))?)
}

fn parse_points(p: &Points) -> CliResult<Vec<Complex64>> {
    let mut zs = Vec::new();
    for s in &p.z {
        let z = Complex64::from_str(s.trim()).map_err(|_| input(format!("cannot parse point {s:?}")))?;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(input(format!("point {s:?} is not finite")));
        }
        zs.push(z);
    }
    if let Some(spec) = &p.xs {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| input(format!("--xs expects lo:hi:step, got {spec:?}")))?;
        let [lo, hi, step] = parts[..] else {
            return Err(input(format!("--xs expects lo:hi:step, got {spec:?}")));
        };
        if !(lo.is_finite() && hi.is_finite() && step > 0.0 && hi >= lo) {
            return Err(input(format!("--xs needs lo <= hi and step > 0, got {spec:?}")));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize;
        if count > 1_000_000 {
            return Err(input("--xs grid has more than a million points"));
        }
        zs.extend((0..=count).map(|i| Complex64::new(lo + i as f64 * step, 0.0)));
    }
    if zs.is_empty() {
        return Err(input("no evaluation points; give --z or --xs"));
    }
    Ok(zs)
}

fn window_or(common: &Common, default: usize) -> usize {
    common.n.unwrap_or(default)
}

fn element_flags(r: &mut Report, f: &XAlphaElement) {
    r.windowed("summability", &f.summability);
}

// ---------------------------------------------------------------- commands

fn interp(cli: &Cli, samples: &Path, points: &Points, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    let s = io::read_sampled(samples, band(c)?, offset(c)?)?;
    let zs = parse_points(points)?;
    let vals: Vec<Complex64> = zs.iter().map(|&z| interpolate_checked(&s, z, c.tol)).collect();
    let bound = zs.iter().map(|&z| s.tail_bound(z)).fold(0.0, f64::max);
    r.num("pw_norm", pw_norm(&s));
    r.num("kappa", s.band().kappa());
    r.num("alpha", s.offset().alpha());
    r.set("N", json!(s.window()));
    if zs.iter().any(|z| z.im != 0.0) {
        r.num("tail_bound", bound);
    }
    r.complex_table(&zs, &vals);
    Ok(())
}

fn project(cli: &Cli, symbol: &Path, mode: ProjectMode, radius: Option<f64>, points: &Points, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    let sym = io::read_symbol(symbol)?;
    let qs = spec(c)?;
    match mode {
        ProjectMode::Linf => {
            let zs = parse_points(points)?;
            let p = project_linf(sym.symbol(), &zs, radius, &qs)?;
            r.num("R", p.r);
            r.num("quad_error", p.error);
            r.num("ignored_tail_bound", p.ignored_tail_bound);
            r.complex_table(&zs, &p.values);
        }
        ProjectMode::L2 => {
            let s = project_l2(sym.symbol(), band_or(c, PI)?, offset_or_zero(c)?, window_or(c, 16), &qs)?;
            r.num("pw_norm", pw_norm(&s));
            r.indexed_table(s.indexed());
            r.artifact = Some(Artifact::Samples(s));
        }
    }
    Ok(())
}

fn bmo(cli: &Cli, grid: Option<&Path>, samples: Option<&Path>, step: f64, extent: f64, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    match (grid, samples) {
        (Some(g), _) => {
            let g = io::read_grid(g)?;
            let e = bmo_r_norm(&g);
            r.num("bmo", e.value);
            r.num("finest_scale", e.finest_scale);
            r.num("coarsest_scale", e.coarsest_scale);
        }
        (None, Some(s)) => {
            let s = io::read_sampled(s, band(c)?, offset(c)?)?;
            let e = bmoe_norm(&s, GridSpec { h: step, t: extent }, c.tol.max(1e-12))?;
            r.num("bmoe", e.value);
            r.num("plus", e.plus);
            r.num("minus", e.minus);
            r.complex("c_plus", e.c_plus);
            r.complex("c_minus", e.c_minus);
        }
        (None, None) => return Err(input("give --grid or --samples")),
    }
    Ok(())
}

fn bmoz(seq: &Path, r: &mut Report) -> CliResult<()> {
    let (a, _) = io::read_sequence(seq)?;
    r.num("bmo_z", bmo_z_norm(&a));
    r.windowed("bmo_z_windowed", &bmo_z_window_study(&a));
    r.windowed("summability", &summability_check(&a));
    Ok(())
}

fn dhilbert(cli: &Cli, seq: &Path, r: &mut Report) -> CliResult<()> {
    let (a, _) = io::read_sequence(seq)?;
    let al = offset_or_zero(&cli.common)?;
    let h = discrete_hilbert(&a, al, window_or(&cli.common, a.window()));
    r.num("alpha", al.alpha());
    r.windowed("h1_norm", &h1_norm(&a, al));
    r.indexed_table(h.indexed());
    r.artifact = Some(Artifact::Sequence(h));
    Ok(())
}

fn talpha(cli: &Cli, seq: &Path, points: &Points, r: &mut Report) -> CliResult<()> {
    let (a, _) = io::read_sequence(seq)?;
    let al = offset_or_zero(&cli.common)?;
    let zs = parse_points(points)?;
    let vals: Vec<Complex64> = zs.iter().map(|&z| t_alpha(&a, al, z)).collect();
    let f = XAlphaElement::t_alpha(&a, al, window_or(&cli.common, a.window()))?;
    r.num("alpha", al.alpha());
    r.num("x_alpha_norm", x_alpha_norm(&f));
    element_flags(r, &f);
    r.complex_table(&zs, &vals);
    Ok(())
}

fn pairing(cli: &Cli, h: &Path, f: &Path, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    let hs = io::read_sampled(h, band(c)?, offset(c)?)?;
    let fs = io::read_sampled(f, Some(Band::pi()), Some(hs.offset()))?;
    let f = XAlphaElement::from_samples(fs)?;
    let p = pairing_discrete(&hs, &f)?;
    r.num("alpha", hs.offset().alpha());
    r.complex("value", p.value);
    r.increments.insert("value".into(), cplx(p.increment));
    element_flags(r, &f);
    Ok(())
}

fn clark(cli: &Cli, f: Option<&Path>, seq: Option<&Path>, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    let f = match (f, seq) {
        (Some(f), _) => XAlphaElement::from_samples(io::read_sampled(f, Some(Band::pi()), offset(c)?)?)?,
        (None, Some(s)) => {
            let (a, _) = io::read_sequence(s)?;
            XAlphaElement::t_alpha(&a, offset_or_zero(c)?, window_or(c, a.window()))?
        }
        (None, None) => return Err(input("give --f or --seq")),
    };
    let al = f.alpha();
    r.num("alpha", al.alpha());
    r.num("clark_norm", bmo_clark_norm(&f, al)?);
    r.num("x_alpha_norm", x_alpha_norm(&f));
    r.num("measure_mass", clark_measure(al, f.window()).total_mass());
    element_flags(r, &f);
    Ok(())
}

fn hankel(cli: &Cli, symbol: &Path, reduce: bool, profile: &[usize], k: usize, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    let qs = spec(c)?;
    let b = band_or(c, PI / 2.0)?;
    let mut sym = io::read_symbol(symbol)?;
    if reduce {
        sym = band_reduce(&sym, b, &qs)?;
    }
    let m = assemble(&sym, b, window_or(c, 16), &qs)?;
    r.num("kappa", b.kappa());
    r.set("N", json!(m.n));
    r.num("op_norm", op_norm(&m)?);
    r.num("frobenius", m.frobenius());
    r.num("asymmetry", m.asymmetry);
    r.num("quad_error", m.quad_error);
    r.num("ignored_tail_bound", m.ignored_tail_bound);
    if !profile.is_empty() {
        let rows = compactness_profile(&sym, b, profile, k, &qs)?;
        r.set("profile", serde_json::to_value(&rows).map_err(|e| input(e.to_string()))?);
        let inc: Vec<f64> = rows.windows(2).map(|w| w[1].sigma_k - w[0].sigma_k).collect();
        r.increments.insert("sigma_k".into(), json!({ "N": profile, "increments": inc }));
    }
    let n = m.n as i64;
    r.table = Some(Table {
        columns: vec!["j", "k", "re", "im"],
        rows: (-n..=n)
            .flat_map(|j| (-n..=n).map(move |k| (j, k)))
            .map(|(j, k)| {
                let v = m.get(j, k);
                vec![json!(j), json!(k), json!(v.re), json!(v.im)]
            })
            .collect(),
    });
    r.artifact = Some(Artifact::Matrix(m));
    Ok(())
}

fn rochberg(cli: &Cli, symbol: &Path, reduce: bool, r: &mut Report) -> CliResult<()> {
    let c = &cli.common;
    let b = band_or(c, PI / 2.0)?;
    let mut sym = io::read_symbol(symbol)?;
    if reduce {
        sym = band_reduce(&sym, b, &spec(c)?)?;
    }
    let q = rochberg_quantities(&rochberg_split(&sym, b)?)?;
    r.num("kappa", b.kappa());
    r.num("q_l", q.q_l);
    r.num("q_c", q.q_c);
    r.num("q_r", q.q_r);
    r.num("total", q.total());
    if let Some(n) = c.n {
        let norm = op_norm(&assemble(&sym, b, n, &spec(c)?)?)?;
        r.num("op_norm", norm);
        r.num("ratio", norm / q.total());
    }
    Ok(())
}

fn vmo(grid: &Path, deltas: &[f64], r: &mut Report) -> CliResult<()> {
    let g = io::read_grid(grid)?;
    let p = vmo_profile(&g, deltas)?;
    r.table = Some(Table {
        columns: vec!["delta", "sup_oscillation"],
        rows: deltas.iter().zip(&p).map(|(d, v)| vec![json!(d), json!(v)]).collect(),
    });
    r.num("smallest_scale", p.first().copied().unwrap_or(0.0));
    Ok(())
}

fn atoms(atom: &Path, seq: Option<&Path>, r: &mut Report) -> CliResult<()> {
    let mut rows = io::read_indexed(atom)?;
    rows.sort_by_key(|p| p.0);
    let support: Vec<i64> = rows.iter().map(|p| p.0).collect();
    let values: Vec<Complex64> = rows.iter().map(|p| p.1).collect();
    let a = make_atom(&support, &values)?;
    let b1 = atom_to_b1(&a);
    let integral: Complex64 = b1.samples().iter().sum();
    let alternating: Complex64 = b1.indexed().map(|(n, c)| if n.rem_euclid(2) == 0 { c } else { -c }).sum();
    r.set("support", json!([a.start(), a.start() + a.values().len() as i64 - 1]));
    r.complex("integral", integral);
    r.complex("alternating_sum", alternating);
    if let Some(s) = seq {
        let (b, _) = io::read_sequence(s)?;
        r.complex("pairing", a.pair(&b));
        r.num("bmo_z", bmo_z_norm(&b));
    }
    r.indexed_table(b1.indexed());
    r.artifact = Some(Artifact::Samples(b1));
    Ok(())
}

fn suite(cli: &Cli, level: SuiteLevel, r: &mut Report) {
    let level = match level {
        SuiteLevel::Fast => Level::Fast,
        SuiteLevel::Full => Level::Full,
    };
    let rep = run_suite(level);
    let mut timing = BTreeMap::new();
    for c in &rep.results {
        r.set(c.id, json!({ "name": c.name, "pass": c.pass, "known_defect": c.known_defect, "detail": c.detail }));
        timing.insert(c.id.to_string(), c.seconds);
    }
    let unexpected = rep.unexpected_failures();
    r.set("unexpected_failures", json!(unexpected));
    r.table = Some(Table {
        columns: vec!["id", "status", "known_defect", "detail"],
        rows: rep
            .results
            .iter()
            .map(|c| vec![json!(c.id), json!(if c.pass { "PASS" } else { "FAIL" }), json!(c.known_defect), json!(c.detail)])
            .collect(),
    });
    if cli.common.timing {
        r.timing = Some(timing);
    }
    if !unexpected.is_empty() {
        r.exit_code = 2;
    }
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let start = Instant::now();
    let mut r = Report::new(cli);
    match &cli.command {
        Command::Interp { samples, points } => interp(cli, samples, points, &mut r)?,
        Command::Project { symbol, mode, radius, points } => project(cli, symbol, *mode, *radius, points, &mut r)?,
        Command::Bmo { grid, samples, step, extent } => {
            bmo(cli, grid.as_deref(), samples.as_deref(), *step, *extent, &mut r)?
        }
        Command::Bmoz { seq } => bmoz(seq, &mut r)?,
        Command::Dhilbert { seq } => dhilbert(cli, seq, &mut r)?,
        Command::Talpha { seq, points } => talpha(cli, seq, points, &mut r)?,
        Command::Pairing { h, f } => pairing(cli, h, f, &mut r)?,
        Command::Clark { f, seq } => clark(cli, f.as_deref(), seq.as_deref(), &mut r)?,
        Command::Hankel { symbol, reduce, profile, k } => hankel(cli, symbol, *reduce, profile, *k, &mut r)?,
        Command::Rochberg { symbol, reduce } => rochberg(cli, symbol, *reduce, &mut r)?,
        Command::Vmo { grid, deltas } => vmo(grid, deltas, &mut r)?,
        Command::Atoms { atom, seq } => atoms(atom, seq.as_deref(), &mut r)?,
        Command::Suite { level } => suite(cli, *level, &mut r),
    }
    if cli.common.timing {
        r.timing.get_or_insert_with(BTreeMap::new).insert("total".into(), start.elapsed().as_secs_f64());
    }
    log::debug!("{} finished", cli.command.name());
    Ok(r)
}

/// Write the report as requested by `--format` and `--out`.
pub fn emit(cli: &Cli, r: &Report) -> CliResult<()> {
    let c = &cli.common;
    let text = match c.format {
        Format::Json => r.to_json(),
        Format::Csv => {
            if let (Some(out), Some(a)) = (&c.out, &r.artifact) {
                match a {
                    Artifact::Samples(s) => io::write_sampled(out, s)?,
                    Artifact::Sequence(s) => io::write_sequence(out, s)?,
                    Artifact::Matrix(m) => io::write_matrix(out, m)?,
                }
                return Ok(());
            }
            r.to_csv()?
        }
    };
    match &c.out {
        Some(p) => std::fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| input(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

/// Caps the global worker pool from `BERNSTEIN_LAB_THREADS`.
pub fn configure_threads(value: Option<&str>) -> CliResult<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| input(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| input(format!("thread pool: {e}")))
}

/// Parse, run and emit; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = std::env::var(THREADS_ENV).ok();
    let outcome = configure_threads(threads.as_deref()).and_then(|_| run(&cli)).and_then(|r| emit(&cli, &r).map(|_| r));
    match outcome {
        Ok(r) => {
            for f in &r.flags {
                log::warn!("{f}");
            }
            r.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
