//! Command-line frontend. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 2 invalid input, 3 a check failed or a computation
//! could not be completed.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{fmt_qc, Mat, Q};
use crate::fuchsian::{self, coulomb_exponents, maier_classify, oscillator_exponents, to_heun, FuchsianEq, HeunParams};
use crate::ladder::{build_ladder_rep, classify_common_eigenvectors, structure_residuals, MassMode};
use crate::liealg::{weyl_dim, AlgebraLabel, HighestWeight, Series};
use crate::oracle::ShootingConfig;
use crate::radial::{case_count, coefficients_from_record, radial_coefficients, PhysicalParams, PotentialKind};
use crate::spectra::{self, first_k, LevelSource, Spectrum, ORACLE_REL_TOL};
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const MAX_N: usize = 200;
const MAX_WEIGHT: i64 = 1000;
const MAX_LEVEL: u32 = 200;
const MAX_SAMPLES: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "sphere-twobody", version, about = "Two-body spectra on spheres: ladder algebra, closed forms and a shooting oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Energy levels of one channel, each checked against the shooting oracle.
    Spectrum(SpectrumArgs),
    /// Common eigenvectors of D0^2, D1, D2 on the invariant subspace.
    Classify(ClassifyArgs),
    /// Ladder matrices of a module and the exact structure relations.
    Ladder(LadderArgs),
    /// Characteristic exponents, Heun form and reduction case at one energy.
    Fuchs(FuchsArgs),
    /// Runs the verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Coulomb,
    Oscillator,
}

impl From<KindArg> for PotentialKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Coulomb => PotentialKind::Coulomb,
            KindArg::Oscillator => PotentialKind::Oscillator,
        }
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Sphere dimension n >= 2.
    #[arg(long)]
    pub n: Option<usize>,
    /// Channel number in the table for n.
    #[arg(long = "case")]
    pub case_id: Option<u8>,
    /// Leading weight m_k of the carrier (for n = 2 the channel's own m).
    #[arg(long)]
    pub mk: Option<i64>,
    #[arg(long)]
    pub m1: Option<f64>,
    #[arg(long)]
    pub m2: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// γ for Coulomb, ω for the oscillator.
    #[arg(long)]
    pub coupling: Option<f64>,
    #[arg(long)]
    pub k_min: Option<u32>,
    #[arg(long)]
    pub k_max: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Eigenfunction samples per level.
    #[arg(long)]
    pub samples: Option<usize>,
    /// TOML file with the same keys as the flags and an optional [shooting] table.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file; flags given on the command line take precedence.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub kind: Option<KindArg>,
    pub n: Option<usize>,
    #[serde(rename = "case")]
    pub case_id: Option<u8>,
    pub mk: Option<i64>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub radius: Option<f64>,
    pub coupling: Option<f64>,
    pub k_min: Option<u32>,
    pub k_max: Option<u32>,
    pub format: Option<Format>,
    pub samples: Option<usize>,
    pub shooting: Option<ShootingConfig>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub mk: i64,
    /// m_{k-1}; signed for n = 3, ignored (must be 0) for n = 2.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub mk1: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesArg {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "D", alias = "d")]
    D,
}

#[derive(Args, Debug)]
pub struct LadderArgs {
    #[arg(long, value_enum)]
    pub series: SeriesArg,
    #[arg(long)]
    pub rank: usize,
    /// Highest weight m_1, ..., m_k, e.g. "0,1,3".
    #[arg(long, allow_hyphen_values = true)]
    pub weights: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FuchsArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "case")]
    pub case_id: u8,
    #[arg(long)]
    pub mk: i64,
    #[arg(long, default_value_t = 2.0)]
    pub m1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub m2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    /// Energy; defaults to the closed-form level `--k` when the channel has one.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Ladder,
    Branching,
    Coulomb,
    Oscillator,
    Hyperfun,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Ladder => Suite::Ladder,
            SuiteArg::Branching => Suite::Branching,
            SuiteArg::Coulomb => Suite::Coulomb,
            SuiteArg::Oscillator => Suite::Oscillator,
            SuiteArg::Hyperfun => Suite::Hyperfun,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, out, err),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Ladder(a) => cmd_ladder(a, out),
        Command::Fuchs(a) => cmd_fuchs(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Validation(_) => EXIT_VALIDATION,
                Error::Verification(_) | Error::Numeric(_) => EXIT_VERIFICATION,
            }
        }
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Numeric(format!("cannot write output: {e}"))
}

// ---- spectrum ----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub kind: PotentialKind,
    pub n: usize,
    pub case_id: u8,
    pub m_k: i64,
    pub algebra: String,
    /// Highest weights of the carrier modules.
    pub lambda: Vec<String>,
    pub params: PhysicalParams,
    pub reduced_mass: f64,
    pub mass_mode: MassMode,
    pub coefficients: Coefficients,
    /// `a = c`: closed-form levels exist.
    pub reducible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub oracle_relative: f64,
    pub branch_relative: f64,
    pub shooting: ShootingConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub k: u32,
    #[serde(rename = "E")]
    pub energy: f64,
    /// Decimal string; dimensions can exceed 64 bits.
    pub multiplicity: String,
    pub verified: bool,
    pub source: LevelSource,
    pub shooting: Option<f64>,
    pub relative_error: Option<f64>,
    pub nodes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub r: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleTable {
    pub k: u32,
    /// Samples of `f_k`, rotated to be real and scaled to unit norm.
    pub samples: Vec<Sample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub metadata: Metadata,
    pub tolerances: Tolerances,
    pub levels: Vec<LevelRow>,
    pub eigenfunctions: Option<Vec<SampleTable>>,
}

impl SpectrumReport {
    pub fn from_spectrum(s: &Spectrum, cfg: &ShootingConfig, samples: Option<usize>) -> Result<Self> {
        let prov = &s.coeffs.provenance;
        let levels = s
            .levels
            .iter()
            .map(|l| LevelRow {
                k: l.level.k,
                energy: l.level.energy,
                multiplicity: l.level.multiplicity.to_string(),
                verified: l.verified,
                source: l.level.source,
                shooting: l.oracle.and_then(|o| o.shooting),
                relative_error: l.oracle.and_then(|o| o.shooting.map(|_| o.relative_error)),
                nodes: l.oracle.map(|o| o.nodes),
            })
            .collect();
        let eigenfunctions = match samples {
            Some(p) if s.reducible => Some(s.eigenfunctions.iter().map(|f| sample_table(f, p)).collect::<Result<Vec<_>>>()?),
            _ => None,
        };
        Ok(SpectrumReport {
            metadata: Metadata {
                tool: TOOL.into(),
                version: VERSION.into(),
                kind: s.kind,
                n: s.n,
                case_id: prov.case_id,
                m_k: prov.m_k,
                algebra: s.carrier.algebra.to_string(),
                lambda: s.carrier.weights.iter().map(|w| w.to_string()).collect(),
                params: s.params,
                reduced_mass: s.params.reduced_mass(),
                mass_mode: s.coeffs.mass_mode,
                coefficients: Coefficients { a: s.coeffs.a.to_string(), b: s.coeffs.b.to_string(), c: s.coeffs.c.to_string() },
                reducible: s.reducible,
            },
            tolerances: Tolerances { oracle_relative: ORACLE_REL_TOL, branch_relative: spectra::BRANCH_TOL, shooting: *cfg },
            levels,
            eigenfunctions,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numeric(format!("JSON encoding failed: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("not a spectrum report: {e}")))
    }

    /// One row per level with header `k,E,multiplicity,verified`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "E", "multiplicity", "verified"]).map_err(io)?;
        for l in &self.levels {
            w.write_record([l.k.to_string(), l.energy.to_string(), l.multiplicity.clone(), l.verified.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(io)?;
        String::from_utf8(bytes).map_err(io)
    }

    pub fn emit(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json().map(|s| s + "\n"),
            Format::Csv => self.to_csv(),
            Format::Text => invalid("spectrum output supports json and csv"),
        }
    }
}

fn sample_table(f: &spectra::RadialEigenfunction, count: usize) -> Result<SampleTable> {
    let pts = f.default_points(count);
    let vals: Vec<Complex64> = pts.iter().map(|&r| f.value(r)).collect::<Result<_>>()?;
    let peak = vals.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(Complex64::new(1.0, 0.0));
    let phase = if peak.norm() > 0.0 { peak / peak.norm() } else { Complex64::new(1.0, 0.0) };
    let norm = f.norm_check()?.fine.sqrt();
    let samples = pts.iter().zip(&vals).map(|(&r, v)| Sample { r, value: (v / phase).re / norm }).collect();
    Ok(SampleTable { k: f.k, samples })
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Validation(format!("--{flag} is required (flag or config key)")))
}

/// Flags merged over the config file.
pub fn resolve_spectrum(a: &SpectrumArgs) -> Result<(SpectrumArgs, ShootingConfig)> {
    let file = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))?;
            toml::from_str::<SpectrumFile>(&text).map_err(|e| Error::Validation(format!("config {}: {e}", path.display())))?
        }
        None => SpectrumFile::default(),
    };
    let merged = SpectrumArgs {
        kind: a.kind.or(file.kind),
        n: a.n.or(file.n),
        case_id: a.case_id.or(file.case_id),
        mk: a.mk.or(file.mk),
        m1: a.m1.or(file.m1),
        m2: a.m2.or(file.m2),
        radius: a.radius.or(file.radius),
        coupling: a.coupling.or(file.coupling),
        k_min: a.k_min.or(file.k_min),
        k_max: a.k_max.or(file.k_max),
        format: a.format.or(file.format),
        samples: a.samples.or(file.samples),
        config: a.config.clone(),
    };
    Ok((merged, file.shooting.unwrap_or_default()))
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return invalid(format!("--n must lie in 2..={MAX_N}, got {n}"));
    }
    Ok(())
}

fn check_case(n: usize, case_id: u8) -> Result<()> {
    let count = case_count(n);
    if !(1..=count).contains(&case_id) {
        return invalid(format!("--case must lie in 1..={count} for n={n}, got {case_id}"));
    }
    Ok(())
}

fn check_weight(flag: &str, m: i64) -> Result<()> {
    if m.abs() > MAX_WEIGHT {
        return invalid(format!("--{flag} must satisfy |{flag}| <= {MAX_WEIGHT}, got {m}"));
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (a, cfg) = resolve_spectrum(&a)?;
    let kind: PotentialKind = required(a.kind, "kind")?.into();
    let n = required(a.n, "n")?;
    check_n(n)?;
    let case_id = required(a.case_id, "case")?;
    check_case(n, case_id)?;
    let mk = required(a.mk, "mk")?;
    check_weight("mk", mk)?;
    let params = PhysicalParams::new(required(a.m1, "m1")?, required(a.m2, "m2")?, required(a.radius, "radius")?, required(a.coupling, "coupling")?)?;
    let k_min = a.k_min.unwrap_or(first_k(kind));
    let k_max = required(a.k_max, "k-max")?;
    if k_min < first_k(kind) {
        return invalid(format!("--k-min must be >= {} for {kind}, got {k_min}", first_k(kind)));
    }
    if !(k_min <= k_max && k_max <= MAX_LEVEL) {
        return invalid(format!("--k-max must satisfy k-min <= k-max <= {MAX_LEVEL}, got {k_min}..{k_max}"));
    }
    if let Some(p) = a.samples {
        if !(2..=MAX_SAMPLES).contains(&p) {
            return invalid(format!("--samples must lie in 2..={MAX_SAMPLES}, got {p}"));
        }
    }
    let format = a.format.unwrap_or(Format::Json);
    if format == Format::Text {
        return invalid("--format for spectrum must be json or csv");
    }
    let s = spectra::spectrum(kind, n, case_id, mk, &params, k_min..=k_max, &cfg)?;
    let report = SpectrumReport::from_spectrum(&s, &cfg, a.samples)?;
    out.write_all(report.emit(format)?.as_bytes()).map_err(io)?;
    if !s.reducible {
        let _ = writeln!(err, "note: n={n} case {case_id} has a != c; levels are numeric only (shooting by node count)");
    }
    let failed: Vec<u32> = s.levels.iter().filter(|l| l.level.source == LevelSource::Formula && !l.verified).map(|l| l.level.k).collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "verification failed: closed-form levels {failed:?} disagree with the shooting oracle");
        Ok(EXIT_VERIFICATION)
    }
}

// ---- classify ----------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
struct ClassifyRow {
    case_id: u8,
    vector: String,
    delta0: String,
    delta1: String,
    delta2: String,
    delta3: Option<String>,
    mass_mode: MassMode,
    a: String,
    b: String,
    c: String,
}

#[derive(Clone, Debug, Serialize)]
struct ClassifyReport {
    n: usize,
    algebra: String,
    lambda: String,
    invariant_dim: usize,
    records: Vec<ClassifyRow>,
}

fn sphere_weight(n: usize, mk: i64, mk1: i64) -> Result<(AlgebraLabel, HighestWeight)> {
    check_n(n)?;
    check_weight("mk", mk)?;
    check_weight("mk1", mk1)?;
    let alg = AlgebraLabel::for_sphere(n)?;
    if alg.rank == 1 {
        if mk1 != 0 {
            return invalid(format!("n=2 has the single weight m; --mk1 must be 0, got {mk1}"));
        }
        return Ok((alg, HighestWeight::new(vec![mk])));
    }
    Ok((alg, HighestWeight::two_row(alg.rank, mk, mk1)))
}

fn cmd_classify(a: ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (alg, lam) = sphere_weight(a.n, a.mk, a.mk1)?;
    let rep = build_ladder_rep(alg, &lam)?;
    let recs = classify_common_eigenvectors(&rep, a.n)?;
    let rows: Vec<ClassifyRow> = recs
        .iter()
        .map(|r| {
            let (ca, cb, cc) = coefficients_from_record(r);
            ClassifyRow {
                case_id: r.case_id,
                vector: r.describe(),
                delta0: r.delta0.to_string(),
                delta1: r.delta1.to_string(),
                delta2: r.delta2.to_string(),
                delta3: r.delta3.as_ref().map(fmt_qc),
                mass_mode: r.mass_mode,
                a: ca.to_string(),
                b: cb.to_string(),
                c: cc.to_string(),
            }
        })
        .collect();
    let report = ClassifyReport { n: a.n, algebra: alg.to_string(), lambda: lam.to_string(), invariant_dim: rep.dim(), records: rows };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(io)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &report.records {
                w.serialize(r).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(io)?).map_err(io)?
        }
        Format::Text => {
            let mut s = format!("{} {} on S^{}: invariant subspace of dimension {}\n", report.algebra, report.lambda, a.n, report.invariant_dim);
            if report.records.is_empty() {
                s.push_str("no common eigenvectors\n");
            }
            s.push_str(&format!(
                "{:<5} {:<16} {:>6} {:>8} {:>8} {:>8} {:<10} {:>8} {:>8} {:>8}\n",
                "case", "vector", "δ0", "δ1", "δ2", "δ3", "masses", "a", "b", "c"
            ));
            for r in &report.records {
                let mode = if r.mass_mode == MassMode::Equal { "equal" } else { "arbitrary" };
                s.push_str(&format!(
                    "{:<5} {:<16} {:>6} {:>8} {:>8} {:>8} {:<10} {:>8} {:>8} {:>8}\n",
                    r.case_id,
                    r.vector,
                    r.delta0,
                    r.delta1,
                    r.delta2,
                    r.delta3.as_deref().unwrap_or("-"),
                    mode,
                    r.a,
                    r.b,
                    r.c
                ));
            }
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

// ---- ladder ------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
struct LadderReport {
    algebra: String,
    lambda: String,
    dimension: String,
    casimir: String,
    weights: Vec<i64>,
    f: Vec<Vec<String>>,
    dplus: Vec<Vec<String>>,
    dminus: Vec<Vec<String>>,
    relations: Vec<(String, bool)>,
}

fn rows(m: &Mat<Q>) -> Vec<Vec<String>> {
    (0..m.size()).map(|i| (0..m.size()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn fmt_matrix(name: &str, m: &[Vec<String>]) -> String {
    let w = m.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    let mut s = format!("{name} =\n");
    for row in m {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        s.push_str(&format!("  [ {} ]\n", cells.join("  ")));
    }
    s
}

fn cmd_ladder(a: LadderArgs, out: &mut dyn Write) -> Result<i32> {
    let series = match a.series {
        SeriesArg::B => Series::B,
        SeriesArg::D => Series::D,
    };
    let alg = AlgebraLabel::new(series, a.rank)?;
    let lam = HighestWeight::parse(&a.weights)?;
    let rep = build_ladder_rep(alg, &lam)?;
    let report = structure_residuals(&rep);
    let dim: BigInt = weyl_dim(alg, &lam)?;
    let lr = LadderReport {
        algebra: alg.to_string(),
        lambda: lam.to_string(),
        dimension: dim.to_string(),
        casimir: rep.casimir.to_string(),
        weights: rep.weights.clone(),
        f: rows(&rep.f),
        dplus: rows(&rep.dplus),
        dminus: rows(&rep.dminus),
        relations: report.relations.iter().map(|r| (r.name.clone(), r.holds())).collect(),
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&lr).map_err(io)? + "\n",
        Format::Csv => return invalid("--format for ladder must be text or json"),
        Format::Text => {
            let mut s = format!("{} {}: dimension {}, Casimir {}, invariant weights {:?}\n", lr.algebra, lr.lambda, lr.dimension, lr.casimir, lr.weights);
            s.push_str(&fmt_matrix("F", &lr.f));
            s.push_str(&fmt_matrix("D+", &lr.dplus));
            s.push_str(&fmt_matrix("D-", &lr.dminus));
            for (name, ok) in &lr.relations {
                s.push_str(&format!("{:<4} {name}\n", if *ok { "ok" } else { "FAIL" }));
            }
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    if report.all_hold() {
        Ok(EXIT_OK)
    } else {
        Err(Error::Verification(format!("{} {}: relations {} have nonzero residuals", alg, lam, report.failures().join(", "))))
    }
}

// ---- fuchs -------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
struct ExponentRow {
    point: String,
    plus: [f64; 2],
    minus: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
struct HeunRow {
    alpha: [f64; 2],
    beta: [f64; 2],
    gamma: [f64; 2],
    delta: [f64; 2],
    epsilon: [f64; 2],
    d: [f64; 2],
    q: [f64; 2],
    constraint_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
struct FuchsReport {
    kind: PotentialKind,
    n: usize,
    case_id: u8,
    m_k: i64,
    energy: f64,
    exponents: Vec<ExponentRow>,
    exponent_sum: [f64; 2],
    fuchs_expected: f64,
    p_symbol: String,
    heun: HeunRow,
    heun_p_symbol: String,
    maier_case: Option<u8>,
    orbit_case: Option<u8>,
    constraints: Vec<(String, f64, bool)>,
    reduction: Option<[[f64; 2]; 3]>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn heun_row(h: &HeunParams) -> HeunRow {
    HeunRow {
        alpha: pair(h.alpha),
        beta: pair(h.beta),
        gamma: pair(h.gamma),
        delta: pair(h.delta),
        epsilon: pair(h.epsilon),
        d: pair(h.d),
        q: pair(h.q),
        constraint_residual: h.constraint_residual(),
    }
}

fn cmd_fuchs(a: FuchsArgs, out: &mut dyn Write) -> Result<i32> {
    check_n(a.n)?;
    check_case(a.n, a.case_id)?;
    check_weight("mk", a.mk)?;
    let kind: PotentialKind = a.kind.into();
    let co = radial_coefficients(a.n, a.case_id, a.mk)?;
    let params = PhysicalParams::new(a.m1, a.m2, a.radius, a.coupling)?;
    co.check_masses(&params)?;
    let energy = match (a.energy, a.k) {
        (Some(e), None) if e.is_finite() => e,
        (Some(e), None) => return invalid(format!("--energy must be finite, got {e}")),
        (None, Some(k)) => match kind {
            PotentialKind::Coulomb => spectra::coulomb_energy(k, a.n, &co, &params)?.energy,
            PotentialKind::Oscillator => spectra::oscillator_energy(k, a.n, &co, &params)?.energy,
        },
        (Some(_), Some(_)) => return invalid("give either --energy or --k, not both"),
        (None, None) => return invalid("--energy or --k is required"),
    };
    let eq: FuchsianEq = match kind {
        PotentialKind::Coulomb => coulomb_exponents(a.n, &co, &params, energy),
        PotentialKind::Oscillator => oscillator_exponents(a.n, &co, &params, energy),
    };
    let h = to_heun(kind, a.n, &co, &params, energy);
    let maier = maier_classify(&h)?;
    let reduction = if maier.case == Some(fuchsian::MaierCase::One) {
        let g = fuchsian::reduce_case1(&h)?;
        Some([pair(g.alpha_t), pair(g.beta_t), pair(g.gamma_t)])
    } else {
        None
    };
    let report = FuchsReport {
        kind,
        n: a.n,
        case_id: a.case_id,
        m_k: a.mk,
        energy,
        exponents: eq
            .singular_points
            .iter()
            .map(|sp| ExponentRow { point: sp.point.to_string(), plus: pair(sp.exponents.0), minus: pair(sp.exponents.1) })
            .collect(),
        exponent_sum: pair(eq.exponent_sum()),
        fuchs_expected: eq.fuchs_expected(),
        p_symbol: eq.p_symbol(),
        heun: heun_row(&h),
        heun_p_symbol: h.p_symbol(),
        maier_case: maier.case.map(|c| c.number()),
        orbit_case: maier.orbit_case.map(|c| c.number()),
        constraints: maier.constraints.iter().map(|c| (c.name.clone(), c.residual, c.holds)).collect(),
        reduction,
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&report).map_err(io)? + "\n",
        Format::Csv => return invalid("--format for fuchs must be text or json"),
        Format::Text => {
            let c = |v: [f64; 2]| fuchsian::fmt_c(Complex64::new(v[0], v[1]));
            let mut s = format!("{kind} on S^{} case {} m_k={} at E = {energy}\n", a.n, a.case_id, a.mk);
            s.push_str("characteristic exponents in r:\n");
            for e in &report.exponents {
                s.push_str(&format!("  {:<10} {:<24} {:<24}\n", e.point, c(e.plus), c(e.minus)));
            }
            s.push_str(&format!("  sum {} (Fuchs: {})\n", c(report.exponent_sum), report.fuchs_expected));
            s.push_str(&format!("{}\n", report.p_symbol));
            s.push_str("Heun form:\n");
            let hr = &report.heun;
            for (name, v) in [("α", hr.alpha), ("β", hr.beta), ("γ", hr.gamma), ("δ", hr.delta), ("ε", hr.epsilon), ("d", hr.d), ("q", hr.q)] {
                s.push_str(&format!("  {name} = {}\n", c(v)));
            }
            s.push_str(&format!("  |α+β-γ-δ-ε+1| = {:.3e}\n", hr.constraint_residual));
            s.push_str(&format!("{}\n", report.heun_p_symbol));
            match (report.maier_case, report.orbit_case) {
                (Some(m), _) => s.push_str(&format!("reduction case {m}\n")),
                (None, Some(o)) => s.push_str(&format!("no reduction: d is in the orbit of case {o} but its conditions fail\n")),
                (None, None) => s.push_str("no reduction: d is not in any case orbit\n"),
            }
            for (name, r, ok) in &report.constraints {
                s.push_str(&format!("  {:<4} {name} (off by {r:.3e})\n", if *ok { "ok" } else { "fail" }));
            }
            if let Some([al, be, ga]) = report.reduction {
                s.push_str(&format!("Gauss parameters: α̃ = {}, β̃ = {}, γ̃ = {}\n", c(al), c(be), c(ga)));
            }
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}

// ---- verify ------------------------------------------------------------------

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let reports = verify::run_suite(a.suite.into());
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&reports).map_err(io)? + "\n",
        Format::Csv => return invalid("--format for verify must be text or json"),
        Format::Text => {
            let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
            let passed = reports.iter().filter(|r| r.passed).count();
            s.push_str(&format!("{passed} of {} criteria passed\n", reports.len()));
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    if reports.iter().all(|r| r.passed) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFICATION)
    }
}
