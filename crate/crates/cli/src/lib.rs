//! Command dispatch for the `ncstar` binary, kept as a library so commands can
//! be driven in-process.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use ncstar::caratheodory::{member_from_measure, sample_measure, MAX_ATOMS};
use ncstar::extremal::{build_extremal, rational_guess, ClassMember};
use ncstar::functionals::{compute_report, convolution_margin, ConvolutionGrid, FunctionalReport};
use ncstar::generator::{circle_sample, g_series, phi_eval, phi_series, DEFAULT_BOUNDARY_SAMPLES};
use ncstar::proofsurface::{maximize_box, Objective};
use ncstar::radii::{inclusion_constants, solve_radius, stp_constant, RadiusKind};
use ncstar::report::{discrepancy_report, has_mismatch, DiscrepancyEntry};
use ncstar::series::{Elementary, PowerSeries};
use ncstar::subordconst::{
    gamma_constants, misc_constants, parabola_b0, subordination_threshold, Target, ThresholdReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ncstar",
    version,
    about = "Starlike functions associated with (1+z)/cos z"
)]
struct Cli {
    /// Truncation order of every series.
    #[arg(long, global = true, default_value_t = 16)]
    order: usize,
    /// Seed for stochastic commands.
    #[arg(long, global = true, default_value_t = 0xC0FFEE)]
    seed: u64,
    /// Sample count (points, members or grid nodes, per command).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    /// Acceptance threshold for margin checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesKind {
    Phi,
    G,
    Cos,
    Sin,
    Exp,
    Geometric,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetKind {
    Janowski,
    Exp,
    Cardioid,
    Sine,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Taylor coefficients of a named series.
    Coeffs {
        #[arg(long, value_enum, default_value = "phi")]
        kind: SeriesKind,
    },
    /// Evaluate the generator at a point, or sample it on a circle.
    Phi {
        #[arg(long, allow_negative_numbers = true)]
        re: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Coefficients of the n-th extremal function.
    Extremal {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Random class members from seeded atomic measures.
    Sample {
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
    },
    /// Coefficient functionals of an extremal function or of random members.
    Functionals {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
    },
    /// Maximize a bounding objective over its box.
    Optimize {
        #[arg(long)]
        objective: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 200)]
        refine: usize,
    },
    /// Solve a radius equation.
    Radius {
        kind: String,
        #[arg(allow_negative_numbers = true)]
        param: f64,
    },
    /// Subordination and inclusion constants.
    Constants {
        #[arg(long, value_enum)]
        target: Option<TargetKind>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        b: f64,
    },
    /// Convolution criterion margin.
    ConvolutionCheck {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
    },
    /// Computed constants against their quoted values.
    Report,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
    fn usage(msg: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: msg.to_string(),
        }
    }
}

/// Canonical JSON: object keys sorted, shortest round-trip float formatting.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v: Value = serde_json::to_value(value).expect("serializable output");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn csv_rows<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat csv row");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

#[derive(Serialize)]
struct CoeffRow {
    k: usize,
    re: f64,
    im: f64,
}

fn coeff_rows(s: &PowerSeries) -> Vec<CoeffRow> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| CoeffRow {
            k,
            re: c.re,
            im: c.im,
        })
        .collect()
}

fn pairs(s: &PowerSeries) -> Vec<[f64; 2]> {
    s.coeffs().iter().map(|c| [c.re, c.im]).collect()
}

struct Ctx {
    order: usize,
    seed: u64,
    samples: Option<usize>,
    csv: bool,
    tolerance: f64,
}

impl Ctx {
    fn emit<T: Serialize, R: Serialize>(&self, json: &T, rows: &[R]) -> String {
        if self.csv {
            csv_rows(rows)
        } else {
            canonical_json(json)
        }
    }
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("ncstar".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text)
                }
                _ => Outcome::usage(text),
            };
        }
    };
    let ctx = Ctx {
        order: cli.order,
        seed: cli.seed,
        samples: cli.samples,
        csv: cli.csv,
        tolerance: cli.tolerance,
    };
    match dispatch(&ctx, cli.command) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(msg),
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<Outcome, String> {
    match command {
        Command::Coeffs { kind } => coeffs(ctx, kind),
        Command::Phi { re, im, radius } => phi(ctx, re, im, radius),
        Command::Extremal { n } => extremal(ctx, n),
        Command::Sample { max_atoms } => sample(ctx, max_atoms),
        Command::Functionals { n, max_atoms } => functionals(ctx, n, max_atoms),
        Command::Optimize {
            objective,
            grid,
            refine,
        } => optimize(ctx, &objective, grid, refine),
        Command::Radius { kind, param } => radius(ctx, &kind, param),
        Command::Constants { target, a, b } => constants(ctx, target, a, b),
        Command::ConvolutionCheck { n, max_atoms } => convolution(ctx, n, max_atoms),
        Command::Report => report(ctx),
    }
}

fn coeffs(ctx: &Ctx, kind: SeriesKind) -> Result<Outcome, String> {
    let s = match kind {
        SeriesKind::Phi => phi_series(ctx.order),
        SeriesKind::G => g_series(ctx.order),
        SeriesKind::Cos => PowerSeries::elementary(Elementary::Cos, ctx.order),
        SeriesKind::Sin => PowerSeries::elementary(Elementary::Sin, ctx.order),
        SeriesKind::Exp => PowerSeries::elementary(Elementary::Exp, ctx.order),
        SeriesKind::Geometric => PowerSeries::elementary(Elementary::Geometric, ctx.order),
    };
    let name = format!("{kind:?}").to_lowercase();
    let json = json!({ "series": name, "order": ctx.order, "coeffs": pairs(&s) });
    Ok(Outcome::ok(ctx.emit(&json, &coeff_rows(&s))))
}

#[derive(Serialize)]
struct PhiRow {
    theta: f64,
    re: f64,
    im: f64,
}

fn phi(ctx: &Ctx, re: Option<f64>, im: f64, radius: f64) -> Result<Outcome, String> {
    if let Some(re) = re {
        let z = Complex64::new(re, im);
        let w = phi_eval(z);
        let inside = z.norm() < 1.0;
        let json = json!({ "z": [z.re, z.im], "value": [w.re, w.im], "in_disk": inside });
        let rows = [PhiRow {
            theta: z.arg(),
            re: w.re,
            im: w.im,
        }];
        return Ok(Outcome::ok(ctx.emit(&json, &rows)));
    }
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(format!("radius must lie in (0, 1], got {radius}"));
    }
    let count = ctx.samples.unwrap_or(DEFAULT_BOUNDARY_SAMPLES);
    let sample = circle_sample(radius, count);
    if ctx.csv {
        return Ok(Outcome::ok(sample.to_csv()));
    }
    let points: Vec<[f64; 3]> = sample
        .points
        .iter()
        .map(|(t, w)| [*t, w.re, w.im])
        .collect();
    Ok(Outcome::ok(canonical_json(
        &json!({ "radius": radius, "count": count, "points": points }),
    )))
}

#[derive(Serialize)]
struct ExtremalRow {
    k: usize,
    coeff: f64,
    rational: Option<String>,
}

fn extremal(ctx: &Ctx, n: usize) -> Result<Outcome, String> {
    let f = build_extremal(n, ctx.order).map_err(|e| e.to_string())?;
    let rows: Vec<ExtremalRow> = f
        .series()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| ExtremalRow {
            k,
            coeff: c.re,
            rational: rational_guess(c.re, 100_000, 1e-13).map(|(p, q)| format!("{p}/{q}")),
        })
        .collect();
    let coeffs: Vec<f64> = rows.iter().map(|r| r.coeff).collect();
    let rational: Vec<Option<String>> = rows.iter().map(|r| r.rational.clone()).collect();
    let json = json!({ "n": n, "order": ctx.order, "coeffs": coeffs, "rational": rational });
    Ok(Outcome::ok(ctx.emit(&json, &rows)))
}

fn members(ctx: &Ctx, max_atoms: usize, default_count: usize) -> Result<Vec<ClassMember>, String> {
    if !(1..=MAX_ATOMS).contains(&max_atoms) {
        return Err(format!("max-atoms must lie in 1..={MAX_ATOMS}"));
    }
    let count = ctx.samples.unwrap_or(default_count);
    // built one by one so the output order is the seed order
    (0..count)
        .map(|i| {
            let m = sample_measure(ctx.seed.wrapping_add(i as u64), max_atoms)
                .map_err(|e| e.to_string())?;
            member_from_measure(&m, ctx.order).map_err(|e| e.to_string())
        })
        .collect()
}

#[derive(Serialize)]
struct SampleRow {
    index: usize,
    seed: u64,
    atoms: usize,
    a2_re: f64,
    a2_im: f64,
    a3_re: f64,
    a3_im: f64,
    a4_re: f64,
    a4_im: f64,
    a5_re: f64,
    a5_im: f64,
}

fn sample(ctx: &Ctx, max_atoms: usize) -> Result<Outcome, String> {
    if ctx.order < 5 {
        return Err("sample needs --order >= 5".into());
    }
    let ms = members(ctx, max_atoms, 16)?;
    let rows: Vec<SampleRow> = ms
        .iter()
        .enumerate()
        .map(|(i, m)| SampleRow {
            index: i,
            seed: ctx.seed.wrapping_add(i as u64),
            atoms: match m.provenance() {
                ncstar::extremal::Provenance::Herglotz { measure } => measure.atoms().len(),
                _ => 0,
            },
            a2_re: m.a(2).re,
            a2_im: m.a(2).im,
            a3_re: m.a(3).re,
            a3_im: m.a(3).im,
            a4_re: m.a(4).re,
            a4_im: m.a(4).im,
            a5_re: m.a(5).re,
            a5_im: m.a(5).im,
        })
        .collect();
    let json: Vec<Value> = ms
        .iter()
        .map(|m| json!({ "provenance": m.provenance(), "coeffs": pairs(m.series()) }))
        .collect();
    Ok(Outcome::ok(ctx.emit(&json, &rows)))
}

#[derive(Serialize)]
struct FunctionalRow {
    index: usize,
    abs_a2: f64,
    abs_a3: f64,
    abs_a4: f64,
    abs_a5: f64,
    abs_h22: f64,
    abs_h31: f64,
    t21: f64,
    t31: f64,
    coeff_sum_margin: f64,
    pass: bool,
}

fn functional_row(index: usize, r: &FunctionalReport) -> FunctionalRow {
    FunctionalRow {
        index,
        abs_a2: r.a2.norm(),
        abs_a3: r.a3.norm(),
        abs_a4: r.a4.norm(),
        abs_a5: r.a5.norm(),
        abs_h22: r.h22.norm(),
        abs_h31: r.h31.norm(),
        t21: r.t21,
        t31: r.t31,
        coeff_sum_margin: r.coeff_sum_margin,
        pass: r.flags.enforced_pass(),
    }
}

fn targets(ctx: &Ctx, n: Option<usize>, max_atoms: usize) -> Result<Vec<ClassMember>, String> {
    match n {
        Some(n) => Ok(vec![
            build_extremal(n, ctx.order).map_err(|e| e.to_string())?
        ]),
        None => members(ctx, max_atoms, 16),
    }
}

fn functionals(ctx: &Ctx, n: Option<usize>, max_atoms: usize) -> Result<Outcome, String> {
    let ms = targets(ctx, n, max_atoms)?;
    let reports: Vec<FunctionalReport> = ms
        .iter()
        .map(compute_report)
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let rows: Vec<FunctionalRow> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| functional_row(i, r))
        .collect();
    let mut out = Outcome::ok(ctx.emit(&reports, &rows));
    if rows.iter().any(|r| !r.pass) {
        out.code = EXIT_VERIFY;
    }
    Ok(out)
}

#[derive(Serialize)]
struct OptimizeOutput {
    objective: String,
    argmax: Vec<f64>,
    value: f64,
    grid: Vec<usize>,
    refined: bool,
}

fn optimize(ctx: &Ctx, name: &str, grid: Option<usize>, refine: usize) -> Result<Outcome, String> {
    let objective: Objective = name
        .parse()
        .map_err(|e: ncstar::proofsurface::ProofSurfaceError| e.to_string())?;
    let grid = grid
        .or(ctx.samples)
        .unwrap_or_else(|| objective.default_grid());
    let r = maximize_box(objective, grid, refine).map_err(|e| e.to_string())?;
    let out = OptimizeOutput {
        objective: r.objective.name().to_string(),
        argmax: r.argmax,
        value: r.value,
        grid: r.grid,
        refined: r.refined,
    };
    let row = json!({ "objective": out.objective, "value": out.value, "argmax": format!("{:?}", out.argmax) });
    Ok(Outcome::ok(ctx.emit(&out, &[row])))
}

fn radius(ctx: &Ctx, kind: &str, param: f64) -> Result<Outcome, String> {
    let kind: RadiusKind = kind
        .parse()
        .map_err(|e: ncstar::radii::RadiusError| e.to_string())?;
    let r = solve_radius(kind, param).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Row {
        kind: &'static str,
        param: f64,
        r: f64,
        residual: f64,
        lo: f64,
        hi: f64,
        iterations: u32,
    }
    let row = Row {
        kind: kind.name(),
        param,
        r: r.r,
        residual: r.residual,
        lo: r.bracket.0,
        hi: r.bracket.1,
        iterations: r.iterations,
    };
    Ok(Outcome::ok(ctx.emit(&r, &[row])))
}

fn constants(ctx: &Ctx, target: Option<TargetKind>, a: f64, b: f64) -> Result<Outcome, String> {
    let gc = gamma_constants().map_err(|e| e.to_string())?;
    if let Some(t) = target {
        let t = match t {
            TargetKind::Janowski => Target::Janowski { a, b },
            TargetKind::Exp => Target::Exp,
            TargetKind::Cardioid => Target::Cardioid,
            TargetKind::Sine => Target::Sine,
        };
        let th = subordination_threshold(t, &gc).map_err(|e| e.to_string())?;
        let row = ThresholdReport::new(&t.name(), th.value, t.quoted());
        return Ok(Outcome::ok(ctx.emit(&th, &[row])));
    }
    let mut rows = gc.reports();
    for t in [Target::Exp, Target::Cardioid, Target::Sine] {
        let th = subordination_threshold(t, &gc).map_err(|e| e.to_string())?;
        rows.push(ThresholdReport::new(
            &format!("threshold_{}", t.name()),
            th.value,
            t.quoted(),
        ));
    }
    let samples = ctx.samples.unwrap_or(4096);
    let pb = parabola_b0(samples);
    rows.push(ThresholdReport::new(
        "parabola_min_value",
        pb.min_value,
        Some(-0.988408),
    ));
    rows.push(ThresholdReport::new(
        "parabola_theta_min",
        pb.theta_min,
        Some(-2.47734),
    ));
    rows.push(ThresholdReport::new("b0", pb.b0, Some(-0.005796)));
    rows.push(ThresholdReport::new(
        "parabola_global_min",
        pb.global_min,
        None,
    ));
    let stp = stp_constant(samples);
    rows.push(ThresholdReport::new("a0", stp.a0, Some(0.402301)));
    rows.push(ThresholdReport::new("theta0", stp.theta0, Some(0.665124)));
    let m = misc_constants();
    rows.push(ThresholdReport::new("k2", m.k2, None));
    rows.push(ThresholdReport::new(
        "conv_sufficient",
        m.conv_sufficient,
        None,
    ));
    rows.push(ThresholdReport::new(
        "circle_cos_min",
        m.circle_cos_min,
        Some(1f64.cos()),
    ));
    rows.push(ThresholdReport::new(
        "circle_sin_max",
        m.circle_sin_max,
        Some(1f64.sinh()),
    ));
    rows.push(ThresholdReport::new(
        "logderiv_min",
        m.logderiv_min,
        Some(m.logderiv_claim),
    ));
    let ic = inclusion_constants();
    rows.push(ThresholdReport::new(
        "kst_threshold",
        ic.kst_threshold,
        None,
    ));
    rows.push(ThresholdReport::new(
        "mu_beta_threshold",
        ic.mu_beta_threshold,
        Some(2.0 / 1f64.cos()),
    ));
    Ok(Outcome::ok(ctx.emit(&rows, &rows)))
}

#[derive(Serialize)]
struct MarginRow {
    index: usize,
    margin: f64,
    theta: f64,
    z_re: f64,
    z_im: f64,
    contained: bool,
}

fn convolution(ctx: &Ctx, n: Option<usize>, max_atoms: usize) -> Result<Outcome, String> {
    let ms = targets(ctx, n, max_atoms)?;
    let grid = match ctx.samples {
        Some(t) => ConvolutionGrid {
            theta_samples: t,
            ..ConvolutionGrid::default()
        },
        None => ConvolutionGrid::default(),
    };
    let rows: Vec<MarginRow> = ms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let c = convolution_margin(m, grid);
            MarginRow {
                index: i,
                margin: c.margin,
                theta: c.theta,
                z_re: c.z.re,
                z_im: c.z.im,
                contained: c.margin > ctx.tolerance,
            }
        })
        .collect();
    let mut out = Outcome::ok(ctx.emit(&rows, &rows));
    if rows.iter().any(|r| !r.contained) {
        out.code = EXIT_VERIFY;
    }
    Ok(out)
}

fn report(ctx: &Ctx) -> Result<Outcome, String> {
    let rows: Vec<DiscrepancyEntry> = discrepancy_report().map_err(|e| e.to_string())?;
    let mut out = Outcome::ok(ctx.emit(&rows, &rows));
    if has_mismatch(&rows) {
        out.code = EXIT_VERIFY;
    }
    Ok(out)
}
