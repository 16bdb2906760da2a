//! The `tropdyn` command line: one subcommand per library entry point.
//!
//! Exit codes: 0 on success, 1 on domain errors (one line on stderr),
//! 2 on usage errors.

mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use tropdyn_core::dynamics::{
    amoeba_sample, convergence_report, dequantization_error, empirical_fourier, mth_roots, sample_tropical_support,
    star_discrepancy, AmoebaOptions, DequantizationOptions, Experiment, ExperimentKind, GridSpec, RootMode,
};
use tropdyn_core::io::{
    parse_json, parse_polynomial, to_json, BalanceJson, ComplexJson, FanJson, OrbitListJson,
    PolynomialDoc, TropicalPolyJson,
};
use tropdyn_core::polyhedra::{add_cycles, common_refinement};
use tropdyn_core::toric::orbits;
use tropdyn_core::tropical::{tropical_hypersurface, tropicalize_poly, uniform_bergman_fan};
use tropdyn_core::{ComplexPolynomial, TropicalPolynomial};

#[derive(Parser, Debug)]
#[command(name = "tropdyn", version, about = "Tropical geometry and m-th root dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Input JSON file
    #[arg(short = 'i', value_name = "PATH")]
    input: PathBuf,
    /// Output file (stdout if omitted)
    #[arg(short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TwoInputs {
    /// Input JSON file, given twice
    #[arg(short = 'i', value_name = "PATH", num_args = 1, required = true)]
    inputs: Vec<PathBuf>,
    #[arg(short = 'o', value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Values of m, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    ms: Vec<u64>,
    /// Box bounds lo,hi (all axes) or lo,hi per axis
    #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,3")]
    bbox: Vec<f64>,
    /// Grid points per axis
    #[arg(long)]
    res: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complex polynomial to its tropical polynomial
    Tropicalize(Input),
    /// Tropical hypersurface of a tropical or complex polynomial
    Hypersurface(Input),
    /// Balancing report for a weighted complex
    Balance(Input),
    /// Bergman fan of the uniform matroid U_{p+1,n+1}
    Bergman {
        p: usize,
        n: usize,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Cone-orbit listing of a fan
    Orbits(Input),
    /// Scaled amoeba sample as CSV
    Amoeba {
        #[command(flatten)]
        io: Input,
        #[command(flatten)]
        sampling: Sampling,
        /// Phases per slice
        #[arg(long, default_value_t = 64)]
        phases: usize,
        /// Spine sampling density for the SVG overlay
        #[arg(long, default_value_t = 20.0)]
        density: f64,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Dequantization errors at each m
    Dequantize {
        #[command(flatten)]
        io: Input,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
    },
    /// Discrepancy and Fourier coefficients of the m-th roots of unity
    Equidist {
        #[arg(long, value_delimiter = ',', required = true)]
        ms: Vec<u64>,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Errors over a range of m with a fitted power law
    Converge {
        #[arg(long)]
        experiment: String,
        #[arg(short = 'i', value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(short = 'o', value_name = "PATH")]
        output: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, default_value_t = 40.0)]
        density: f64,
        #[arg(long, default_value_t = 64)]
        phases: usize,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Common refinement of two fans
    Refine(TwoInputs),
    /// Sum of two weighted complexes
    Add(TwoInputs),
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<tropdyn_core::Error> for Failure {
    fn from(e: tropdyn_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DequantizeRow {
    pub m: u64,
    pub l_inf: f64,
    pub l1: f64,
    pub samples: usize,
    pub retries: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DequantizeReport {
    pub results: Vec<DequantizeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquidistRow {
    pub m: u64,
    pub discrepancy: f64,
    /// Largest |empirical Fourier coefficient| over 0 < |ν| ≤ 10 with m ∤ ν.
    pub max_fourier: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquidistReport {
    pub results: Vec<EquidistRow>,
}

/// Runs the command line with process stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line, writing artifacts and summaries to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {}", msg.replace('\n', " "));
            1
        }
    }
}

fn read(path: &Path) -> Outcome<(String, String)> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{name}: {e}")))?;
    Ok((name, text))
}

fn emit(out: &mut dyn Write, output: &Option<PathBuf>, artifact: &str, summary: &str) -> Outcome<()> {
    match output {
        Some(path) => {
            fs::write(path, artifact).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
            writeln!(out, "{summary}").map_err(|e| Failure::Domain(e.to_string()))
        }
        None => out.write_all(artifact.as_bytes()).map_err(|e| Failure::Domain(e.to_string())),
    }
}

fn write_svg(path: &Option<PathBuf>, body: impl FnOnce() -> Outcome<String>) -> Outcome<()> {
    if let Some(p) = path {
        fs::write(p, body()?).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn complex_input(path: &Path) -> Outcome<ComplexPolynomial> {
    let (name, text) = read(path)?;
    match parse_polynomial(&name, &text)? {
        PolynomialDoc::Complex(f) => Ok(f),
        PolynomialDoc::Tropical(_) => Err(Failure::Domain(format!("{name}: expected a complex polynomial (re/im terms)"))),
    }
}

fn tropical_input(path: &Path) -> Outcome<TropicalPolynomial> {
    let (name, text) = read(path)?;
    Ok(match parse_polynomial(&name, &text)? {
        PolynomialDoc::Complex(f) => tropicalize_poly(&f),
        PolynomialDoc::Tropical(q) => q,
    })
}

fn two(inputs: &[PathBuf]) -> Outcome<(&Path, &Path)> {
    match inputs {
        [a, b] => Ok((a, b)),
        _ => Err(Failure::Usage(format!("expected exactly two -i inputs, got {}", inputs.len()))),
    }
}

fn grid(sampling: &Sampling, n: usize, default_res: usize, delta: f64) -> Outcome<GridSpec> {
    let b = &sampling.bbox;
    let (lo, hi): (Vec<f64>, Vec<f64>) = if b.len() == 2 {
        (vec![b[0]; n], vec![b[1]; n])
    } else if b.len() == 2 * n {
        (b.iter().step_by(2).copied().collect(), b.iter().skip(1).step_by(2).copied().collect())
    } else {
        return Err(Failure::Usage(format!("--box needs 2 or {} values, got {}", 2 * n, b.len())));
    };
    let res = sampling.res.unwrap_or(default_res);
    Ok(GridSpec::new(lo, hi, vec![res; n], delta)?)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome<()> {
    match command {
        Command::Tropicalize(io) => {
            let f = complex_input(&io.input)?;
            let q = tropicalize_poly(&f);
            let text = to_json(&TropicalPolyJson::from_poly(&q)?)?;
            emit(out, &io.output, &text, &format!("tropical polynomial with {} terms", q.len()))
        }
        Command::Hypersurface(io) => {
            let q = tropical_input(&io.input)?;
            let cycle = tropical_hypersurface(&q)?;
            let balanced = cycle.check_balancing().balanced;
            let text = to_json(&ComplexJson::from_complex(cycle.complex(), Some(balanced))?)?;
            let summary = format!("{} cells of dimension {}, balanced: {balanced}", cycle.cells().len(), cycle.dim());
            emit(out, &io.output, &text, &summary)
        }
        Command::Balance(io) => {
            let (name, text) = read(&io.input)?;
            let c = parse_json::<ComplexJson>(&name, &text)?.to_complex()?;
            let report = BalanceJson::from_report(&c.check_balancing())?;
            let summary = format!("balanced: {}, {} violations", report.balanced, report.violations.len());
            emit(out, &io.output, &to_json(&report)?, &summary)
        }
        Command::Bergman { p, n, output } => {
            let b = uniform_bergman_fan(p, n)?;
            let balanced = b.check_balancing().balanced;
            let text = to_json(&ComplexJson::from_complex(b.complex(), Some(balanced))?)?;
            emit(out, &output, &text, &format!("{} cones of dimension {p} in R^{n}", b.cells().len()))
        }
        Command::Orbits(io) => {
            let (name, text) = read(&io.input)?;
            let fan = parse_json::<FanJson>(&name, &text)?.to_fan()?;
            let os = orbits(&fan)?;
            let text = to_json(&OrbitListJson::from_orbits(&os))?;
            emit(out, &io.output, &text, &format!("{} orbits", os.len()))
        }
        Command::Amoeba {
            io,
            sampling,
            phases,
            density,
            svg,
        } => {
            let f = complex_input(&io.input)?;
            let [m] = sampling.ms[..] else {
                return Err(Failure::Usage("amoeba takes a single value in --ms".into()));
            };
            let g = grid(&sampling, f.ambient(), 121, 0.0)?;
            let opts = AmoebaOptions {
                phases,
                ..Default::default()
            };
            let cloud = amoeba_sample(&f, &g, m, &opts)?;
            write_svg(&svg, || {
                let spine = tropical_hypersurface(&tropicalize_poly(&f))?;
                let target = sample_tropical_support(spine.complex(), &g.lo, &g.hi, density)?;
                Ok(svg::amoeba(&cloud.clip(&g.lo, &g.hi), &target, &g.lo, &g.hi))
            })?;
            emit(out, &io.output, &cloud.to_csv(), &format!("{} amoeba points at m = {m}", cloud.len()))
        }
        Command::Dequantize {
            io,
            sampling,
            seed,
            delta,
        } => {
            let f = complex_input(&io.input)?;
            let g = grid(&sampling, f.ambient(), 61, delta)?;
            let opts = DequantizationOptions {
                seed,
                ..Default::default()
            };
            let results = sampling
                .ms
                .iter()
                .map(|m| {
                    let e = dequantization_error(&f, *m, &g, &opts)?;
                    Ok(DequantizeRow {
                        m: *m,
                        l_inf: e.l_inf,
                        l1: e.l1,
                        samples: e.samples,
                        retries: e.retries,
                        seed: e.seed,
                    })
                })
                .collect::<Outcome<Vec<_>>>()?;
            let text = to_json(&DequantizeReport { results })?;
            emit(out, &io.output, &text, &format!("dequantization errors at {} values of m", sampling.ms.len()))
        }
        Command::Equidist { ms, output } => {
            let results = ms.iter().map(|m| equidist_row(*m)).collect::<Outcome<Vec<_>>>()?;
            let text = to_json(&EquidistReport { results })?;
            emit(out, &output, &text, &format!("equidistribution at {} values of m", ms.len()))
        }
        Command::Converge {
            experiment,
            input,
            output,
            sampling,
            seed,
            delta,
            density,
            phases,
            svg,
        } => {
            let kind: ExperimentKind = experiment.parse().map_err(|e: tropdyn_core::Error| Failure::Usage(e.to_string()))?;
            let need_f = || -> Outcome<ComplexPolynomial> {
                let path = input
                    .as_ref()
                    .ok_or_else(|| Failure::Usage(format!("experiment {experiment} needs -i <polynomial>")))?;
                complex_input(path)
            };
            let exp = match kind {
                ExperimentKind::Dequantization => {
                    let f = need_f()?;
                    let grid = grid(&sampling, f.ambient(), 61, delta)?;
                    Experiment::Dequantization {
                        f,
                        grid,
                        opts: DequantizationOptions {
                            seed,
                            ..Default::default()
                        },
                    }
                }
                ExperimentKind::HausdorffToTropical => {
                    let f = need_f()?;
                    let grid = grid(&sampling, f.ambient(), 121, 0.0)?;
                    Experiment::HausdorffToTropical {
                        f,
                        grid,
                        amoeba: AmoebaOptions {
                            phases,
                            ..Default::default()
                        },
                        density,
                    }
                }
                ExperimentKind::EquidistributionDiscrepancy => Experiment::EquidistributionDiscrepancy,
            };
            let report = convergence_report(&exp, &sampling.ms)?;
            write_svg(&svg, || Ok(svg::loglog(&report)))?;
            let summary = format!("{}: C = {:.6e}, rho = {:.4}", report.experiment, report.c, report.rho);
            emit(out, &output, &to_json(&report)?, &summary)
        }
        Command::Refine(io) => {
            let (a, b) = two(&io.inputs)?;
            let fa = read_fan(a)?;
            let fb = read_fan(b)?;
            let r = common_refinement(&fa, &fb)?;
            let text = to_json(&FanJson::from_fan(&r))?;
            emit(out, &io.output, &text, &format!("{} maximal cones", r.maximal_cones().len()))
        }
        Command::Add(io) => {
            let (a, b) = two(&io.inputs)?;
            let ca = read_complex(a)?;
            let cb = read_complex(b)?;
            let sum = add_cycles(&ca, &cb)?;
            let balanced = sum.check_balancing().balanced;
            let text = to_json(&ComplexJson::from_complex(&sum, Some(balanced))?)?;
            emit(out, &io.output, &text, &format!("{} cells, balanced: {balanced}", sum.cells().len()))
        }
    }
}

fn read_fan(path: &Path) -> Outcome<tropdyn_core::Fan> {
    let (name, text) = read(path)?;
    Ok(parse_json::<FanJson>(&name, &text)?.to_fan()?)
}

fn read_complex(path: &Path) -> Outcome<tropdyn_core::WeightedComplex> {
    let (name, text) = read(path)?;
    Ok(parse_json::<ComplexJson>(&name, &text)?.to_complex()?)
}

fn equidist_row(m: u64) -> Outcome<EquidistRow> {
    let roots = mth_roots(&[num_complex::Complex64::new(1.0, 0.0)], m, RootMode::All)?;
    let u: Vec<f64> = roots
        .points
        .iter()
        .map(|p| {
            let t = (p[0].arg() / std::f64::consts::TAU).rem_euclid(1.0);
            if t >= 1.0 {
                0.0
            } else {
                t
            }
        })
        .collect();
    let discrepancy = star_discrepancy(&u)?;
    let mut max_fourier: f64 = 0.0;
    for nu in -10i64..=10 {
        if nu % m as i64 != 0 {
            max_fourier = max_fourier.max(empirical_fourier(&roots, &[nu])?.norm());
        }
    }
    Ok(EquidistRow {
        m,
        discrepancy,
        max_fourier,
    })
}
