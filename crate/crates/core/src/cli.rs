//! `bhelm` command-line front end.
//!
//! Exit codes: 0 all assertions pass, 1 a numeric assertion fails, 2 usage
//! or configuration error, 3 internal numeric failure. Flags override keys
//! of the `--config` JSON file, whose keys are the long flag names.

use crate::bernstein::{catalogue, parse_id, BernsteinFn};
use crate::error::Error;
use crate::multiplier::{helmholtz_residual, lattice_vectors, omega_ratio_sweep, write_grdf, GridFunction, SweepRow};
use crate::sphere::{bstar_norm, herglotz, make_quadrature, SphereDensity, SphereQuadrature};
use crate::subordination::{
    eigen_transfer_check, parse_matrix, phillips_apply, spectral_apply, MatrixGenerator, TransferReport,
};
use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Tolerance on `|ratio − ω| / ω` in the off-sphere sweep.
pub const SWEEP_TOL: f64 = 1e-10;
const RAY_SAMPLES: usize = 101;

#[derive(Debug, Parser)]
#[command(name = "bhelm", version, about = "Bernstein-function Helmholtz certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate f, f(1), f′ and ω over a λ grid (CSV).
    BernsteinEval(Options),
    /// Residual certificates for lattice fields on a periodic grid (JSON).
    VerifyHelmholtz(Options),
    /// Sample a Herglotz wave on a grid (GRDF) and along a ray (CSV).
    SynthHerglotz(Options),
    /// B* profile of a Herglotz wave (CSV).
    Bstar(Options),
    /// Phillips subordination of a matrix generator (JSON).
    Subordinate(Options),
    /// List the built-in Bernstein functions (CSV).
    Catalogue(Options),
}

/// Flags shared by every command; each command reads the ones it needs.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Function id: fractional:<σ>, log1p, sqrt-tanh-sqrt, affine:<a>,<b>.
    #[arg(long = "fn")]
    #[serde(rename = "fn")]
    pub fn_id: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Grid points per axis.
    #[arg(long)]
    pub n: Option<usize>,
    /// Box scale L; the grid period is 2πL.
    #[arg(long = "box")]
    #[serde(rename = "box")]
    pub box_scale: Option<u32>,
    /// Sphere quadrature degree.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Comma-separated λ values.
    #[arg(long)]
    pub lambdas: Option<String>,
    /// Sphere density JSON file.
    #[arg(long)]
    pub density: Option<PathBuf>,
    /// Comma-separated ray direction.
    #[arg(long)]
    pub ray: Option<String>,
    #[arg(long)]
    pub ray_out: Option<PathBuf>,
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Matrix text file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Shell half-width for off-sphere energy.
    #[arg(long)]
    pub delta: Option<f64>,
}

impl Options {
    fn or(self, other: Options) -> Options {
        Options {
            fn_id: self.fn_id.or(other.fn_id),
            d: self.d.or(other.d),
            n: self.n.or(other.n),
            box_scale: self.box_scale.or(other.box_scale),
            degree: self.degree.or(other.degree),
            tol: self.tol.or(other.tol),
            seed: self.seed.or(other.seed),
            out: self.out.or(other.out),
            config: self.config,
            lambdas: self.lambdas.or(other.lambdas),
            density: self.density.or(other.density),
            ray: self.ray.or(other.ray),
            ray_out: self.ray_out.or(other.ray_out),
            r_max: self.r_max.or(other.r_max),
            matrix: self.matrix.or(other.matrix),
            delta: self.delta.or(other.delta),
        }
    }

    /// Merge the `--config` file under the flags.
    fn resolve(self) -> Result<Options, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = read_input(&path)?;
        let file: Options = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        let merged = self.or(file);
        if let Some(t) = merged.tol {
            if !(t > 0.0) {
                return Err(CliError::usage(format!("tolerance {t} must be positive")));
            }
        }
        Ok(merged)
    }

    fn function(&self) -> Result<BernsteinFn, CliError> {
        let id = self.fn_id.as_deref().ok_or_else(|| CliError::usage("--fn is required"))?;
        parse_id(id).map_err(CliError::from)
    }

    fn tol(&self, default: f64) -> Result<f64, CliError> {
        match self.tol {
            Some(t) if !(t > 0.0) => Err(CliError::usage(format!("tolerance {t} must be positive"))),
            Some(t) => Ok(t),
            None => Ok(default),
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoUnitEigenvalue => EXIT_FAIL,
            Error::Domain(_)
            | Error::InvalidParameter(_)
            | Error::ConstantSymbol
            | Error::Size(_)
            | Error::DimensionMismatch { .. }
            | Error::UnsupportedOrder(_)
            | Error::LatticeUnreachable { .. }
            | Error::NotSymmetric(_)
            | Error::NotPositiveSemidefinite(_)
            | Error::Format(_) => EXIT_USAGE,
            Error::NonIntegrableMeasure(_)
            | Error::NearZeroSymbol { .. }
            | Error::ZeroModeEnergy { .. }
            | Error::EmptyField
            | Error::BudgetExceeded { .. }
            | Error::Io(_) => EXIT_NUMERIC,
        };
        CliError { code, message: e.to_string() }
    }
}

/// One checked claim in a JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub paper_ref: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Assertion {
    fn at_most(name: &str, label: &str, value: f64, tol: f64) -> Self {
        Assertion { name: name.into(), paper_ref: label.into(), value, tol, pass: value <= tol }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    use std::io::Write;
    match out {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError { code: EXIT_NUMERIC, message: format!("{}: {e}", p.display()) }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError { code: EXIT_NUMERIC, message: e.to_string() })
        }
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad {what} entry '{s}'"))))
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError { code: EXIT_NUMERIC, message: e.to_string() })?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError { code: EXIT_NUMERIC, message: e.to_string() };
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError { code: EXIT_NUMERIC, message: e.to_string() })
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(command: Command) -> Result<bool, CliError> {
    match command {
        Command::BernsteinEval(o) => cmd_bernstein_eval(o.resolve()?),
        Command::VerifyHelmholtz(o) => cmd_verify_helmholtz(o.resolve()?),
        Command::SynthHerglotz(o) => cmd_synth_herglotz(o.resolve()?),
        Command::Bstar(o) => cmd_bstar(o.resolve()?),
        Command::Subordinate(o) => cmd_subordinate(o.resolve()?),
        Command::Catalogue(o) => cmd_catalogue(o.resolve()?),
    }
}

pub fn cmd_bernstein_eval(o: Options) -> Result<bool, CliError> {
    let f = o.function()?;
    let lambdas = parse_list(o.lambdas.as_deref().unwrap_or("1"), "lambda")?;
    let mut rows = Vec::with_capacity(lambdas.len());
    for l in lambdas {
        rows.push(vec![
            format!("{l}"),
            format!("{:?}", f.eval(l)?),
            format!("{:?}", f.f1()),
            format!("{:?}", f.deriv(1, l)?.value),
            format!("{:?}", f.omega(l)?),
        ]);
    }
    emit(o.out.as_deref(), &csv_bytes(&["lambda", "f", "f1", "fprime", "omega"], &rows)?)?;
    Ok(true)
}

#[derive(Debug, Serialize)]
struct ModeResidual {
    k: Vec<i64>,
    res_f: f64,
    res_lap: f64,
}

#[derive(Debug, Serialize)]
struct HelmholtzReport {
    command: &'static str,
    function: String,
    d: usize,
    n: usize,
    box_scale: u32,
    seed: u64,
    on_sphere_combined_res_f: f64,
    on_sphere_combined_res_lap: f64,
    spectral_offsphere_energy: f64,
    on_sphere_modes: Vec<ModeResidual>,
    sweep: Vec<SweepRow>,
    assertions: Vec<Assertion>,
    pass: bool,
}

pub fn cmd_verify_helmholtz(o: Options) -> Result<bool, CliError> {
    let f = o.function()?;
    if f.is_constant() {
        return Err(Error::ConstantSymbol.into());
    }
    let d = o.d.unwrap_or(2);
    let n = o.n.unwrap_or(128);
    let scale = o.box_scale.unwrap_or(1);
    let seed = o.seed.unwrap_or(0);
    let tol = o.tol(1e-12)?;
    let delta = o.delta.unwrap_or(crate::multiplier::DEFAULT_DELTA);
    let lambdas = parse_list(o.lambdas.as_deref().unwrap_or("2,4,5,9"), "lambda")?;
    if scale == 0 {
        return Err(CliError::usage("--box must be at least 1"));
    }
    let period = 2.0 * PI * scale as f64;

    // |k| = L on a box of period 2πL is |ξ| = 1.
    let modes = lattice_vectors(d, (scale as i64) * (scale as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut combined = GridFunction::zeros(d, n, period)?;
    let mut per_mode = Vec::with_capacity(modes.len());
    for k in &modes {
        let wave = GridFunction::plane_wave(d, n, period, k)?;
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for (a, b) in combined.values_mut().iter_mut().zip(wave.values()) {
            *a += c * b;
        }
        let r = helmholtz_residual(&wave, &f, delta)?;
        per_mode.push(ModeResidual { k: k.clone(), res_f: r.res_f, res_lap: r.res_lap });
    }
    let whole = helmholtz_residual(&combined, &f, delta)?;
    let sweep = omega_ratio_sweep(&f, &lambdas, d)?;

    let max_mode = per_mode.iter().map(|m| m.res_f).fold(whole.res_f, f64::max);
    let max_gap = sweep.iter().filter_map(SweepRow::relative_gap).fold(0.0, f64::max);
    let assertions = vec![
        Assertion::at_most(
            "on_sphere_res_f",
            "forward direction: Herglotz lattice fields solve f(-Δ)u = f(1)u",
            max_mode,
            tol,
        ),
        Assertion::at_most(
            "sweep_ratio_vs_omega",
            "equivalence identity: res_f / res_lap = ω(|ξ|²) off the sphere",
            max_gap,
            SWEEP_TOL,
        ),
    ];
    let pass = assertions.iter().all(|a| a.pass);
    let report = HelmholtzReport {
        command: "verify-helmholtz",
        function: f.name().to_string(),
        d,
        n,
        box_scale: scale,
        seed,
        on_sphere_combined_res_f: whole.res_f,
        on_sphere_combined_res_lap: whole.res_lap,
        spectral_offsphere_energy: whole.spectral_offsphere_energy,
        on_sphere_modes: per_mode,
        sweep,
        assertions,
        pass,
    };
    emit(o.out.as_deref(), &to_json(&report)?)?;
    Ok(pass)
}

fn load_density(o: &Options, default_d: usize) -> Result<SphereDensity, CliError> {
    let density = match &o.density {
        Some(path) => SphereDensity::from_json(&read_input(path)?)?,
        None => SphereDensity::uniform(o.d.unwrap_or(default_d))?,
    };
    if let Some(d) = o.d {
        if d != density.d() {
            return Err(Error::DimensionMismatch { expected: d, got: density.d() }.into());
        }
    }
    Ok(density)
}

fn quadrature_for(o: &Options, density: &SphereDensity) -> Result<SphereQuadrature, CliError> {
    let degree = o.degree.unwrap_or_else(|| (2 * density.bandwidth()).max(40));
    Ok(make_quadrature(density.d(), degree)?)
}

pub fn cmd_synth_herglotz(o: Options) -> Result<bool, CliError> {
    let density = load_density(&o, 3)?;
    let d = density.d();
    let quad = quadrature_for(&o, &density)?;
    let direction = match o.ray.as_deref() {
        Some(text) => parse_list(text, "ray")?,
        None => {
            let mut e = vec![0.0; d];
            e[0] = 1.0;
            e
        }
    };
    if direction.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: direction.len() }.into());
    }
    let len = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(len > 0.0) {
        return Err(CliError::usage("ray direction must be nonzero"));
    }
    let r_max = o.r_max.unwrap_or(10.0);
    if !(r_max >= 0.0) || !r_max.is_finite() {
        return Err(CliError::usage(format!("ray length {r_max} must be nonnegative")));
    }

    let mut rows = Vec::with_capacity(RAY_SAMPLES);
    for i in 0..RAY_SAMPLES {
        let r = r_max * i as f64 / (RAY_SAMPLES - 1) as f64;
        let x: Vec<f64> = direction.iter().map(|v| r * v / len).collect();
        let u = herglotz(&density, &x, &quad)?;
        rows.push(vec![format!("{r}"), format!("{:?}", u.re), format!("{:?}", u.im)]);
    }
    let ray_csv = csv_bytes(&["r", "re", "im"], &rows)?;

    if let Some(out) = &o.out {
        let n = o.n.unwrap_or(16);
        let period = 2.0 * PI * o.box_scale.unwrap_or(1) as f64;
        let mut failure = None;
        let grid = GridFunction::from_fn(d, n, period, |x| {
            herglotz(&density, x, &quad).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            })
        })?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        let mut bytes = Vec::new();
        write_grdf(&mut bytes, &grid)?;
        emit(Some(out), &bytes)?;
    }
    match (&o.ray_out, &o.out) {
        (Some(p), _) => emit(Some(p), &ray_csv)?,
        (None, None) => emit(None, &ray_csv)?,
        (None, Some(_)) => {}
    }
    Ok(true)
}

pub fn cmd_bstar(o: Options) -> Result<bool, CliError> {
    let density = load_density(&o, 3)?;
    let quad = quadrature_for(&o, &density)?;
    let r_max = o.r_max.unwrap_or(200.0);
    let tol = o.tol(0.01)?;
    let profile = bstar_norm(&density, r_max, &quad)?;
    let mut pass = profile.sup.is_finite();
    let last = *profile.values.last().expect("non-empty profile");
    if let Some(limit) = profile.limit.filter(|&l| l > 0.0) {
        let gap = ((last - limit) / limit).abs();
        eprintln!("g(R_max) = {last:e}, limit = {limit:e}, relative gap = {gap:e}, sup = {:e}", profile.sup);
        pass &= gap <= tol;
    } else {
        eprintln!("g(R_max) = {last:e}, sup = {:e}", profile.sup);
    }
    let mut bytes = Vec::new();
    profile.write_csv(&mut bytes)?;
    emit(o.out.as_deref(), &bytes)?;
    Ok(pass)
}

#[derive(Debug, Serialize)]
struct FunctionCheck {
    function: String,
    transfer: TransferReport,
    spectral_max_rel_error: f64,
    linearity_error: f64,
}

#[derive(Debug, Serialize)]
struct SubordinationReport {
    command: &'static str,
    dim: usize,
    seed: u64,
    eigenvalues: Vec<f64>,
    checks: Vec<FunctionCheck>,
    assertions: Vec<Assertion>,
    pass: bool,
}

pub fn cmd_subordinate(o: Options) -> Result<bool, CliError> {
    let path = o.matrix.as_deref().ok_or_else(|| CliError::usage("--matrix is required"))?;
    let gen = MatrixGenerator::new(parse_matrix(&read_input(path)?)?)?;
    let functions: Vec<BernsteinFn> = match &o.fn_id {
        Some(_) => vec![o.function()?],
        None => catalogue().into_iter().filter(|f| f.triple().is_some()).collect(),
    };
    if let Some(f) = functions.iter().find(|f| f.triple().is_none()) {
        return Err(CliError::usage(format!("{} has no Lévy triple", f.name())));
    }
    let tol = o.tol(1e-8)?;
    let seed = o.seed.unwrap_or(0);
    let m = gen.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut checks = Vec::new();
    let mut assertions = Vec::new();
    for f in &functions {
        let transfer = eigen_transfer_check(&gen, f)?;
        let mut spectral: f64 = 0.0;
        for i in 0..m {
            let v = gen.eigenvectors().column(i).into_owned();
            let p = phillips_apply(&gen, f, &v)?;
            let s = spectral_apply(&gen, f, &v)?;
            spectral = spectral.max((&p - &s).norm() / s.norm().max(f64::MIN_POSITIVE));
        }
        let u = DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
        let w = DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
        let s: f64 = rng.gen_range(-2.0..2.0);
        let lhs = phillips_apply(&gen, f, &(&u + &w * s))?;
        let rhs = phillips_apply(&gen, f, &u)? + phillips_apply(&gen, f, &w)? * s;
        let linearity = (lhs - rhs).norm() / (1.0 + u.norm() + s.abs() * w.norm());

        assertions.push(Assertion::at_most(
            &format!("{}: eigen_transfer", f.name()),
            "eigenvalue transfer: Au = u implies f(A)u = f(1)u",
            transfer.residual,
            tol,
        ));
        assertions.push(Assertion::at_most(
            &format!("{}: spectral_agreement", f.name()),
            "Phillips subordination agrees with spectral calculus on eigenvectors",
            spectral,
            tol,
        ));
        assertions.push(Assertion::at_most(
            &format!("{}: linearity", f.name()),
            "f(A) is linear",
            linearity,
            1e-10,
        ));
        checks.push(FunctionCheck {
            function: f.name().to_string(),
            transfer,
            spectral_max_rel_error: spectral,
            linearity_error: linearity,
        });
    }
    let pass = assertions.iter().all(|a| a.pass);
    let report = SubordinationReport {
        command: "subordinate",
        dim: m,
        seed,
        eigenvalues: gen.eigenvalues().iter().copied().collect(),
        checks,
        assertions,
        pass,
    };
    emit(o.out.as_deref(), &to_json(&report)?)?;
    Ok(pass)
}

pub fn cmd_catalogue(o: Options) -> Result<bool, CliError> {
    let rows: Vec<Vec<String>> = catalogue()
        .iter()
        .map(|f| {
            vec![
                f.name().to_string(),
                format!("{:?}", f.f1()),
                format!("{:?}", f.fprime1()),
                f.triple().is_some().to_string(),
            ]
        })
        .collect();
    emit(o.out.as_deref(), &csv_bytes(&["id", "f1", "fprime1", "has_triple"], &rows)?)?;
    Ok(true)
}
