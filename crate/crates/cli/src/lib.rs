//! The `hyperseq` command line.

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperseq::algebra::{Field, Poly};
use hyperseq::discrepancy::{star_discrepancy_exact, star_discrepancy_grid};
use hyperseq::duality::figure_of_merit;
use hyperseq::lnseq::{ln_generator_matrices, nut_equivalence, rank_condition, LnSpec};
use hyperseq::netgen::{generate_net_points, net_generator_matrices, GeneratorFamily, NetSpec, OrderedBasis};
use hyperseq::points::{CoordFormat, PointSet};
use hyperseq::search::{
    delta_bound, exhaustive_search, greedy_extend, random_search, rho_threshold,
    rho_threshold_interval, SearchConfig,
};
use hyperseq::seqgen::{
    generate_sequence_points, quality_function_T, seq_generator_prefix, ud_certificate, QualityProfile, SeqSpec,
    UdCertificate,
};
use hyperseq::verify::{check_T_sequence, check_tms_net, strict_t};
use hyperseq::Error;
use num_rational::{BigRational, Ratio};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

pub const SEED_ENV: &str = "HYPERSEQ_SEED";

#[derive(Parser, Debug)]
#[command(name = "hyperseq", version, about = "Hyperplane nets and sequences over finite fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    Digits,
    Rational,
}

impl From<Coords> for CoordFormat {
    fn from(c: Coords) -> Self {
        match c {
            Coords::Digits => CoordFormat::Digits,
            Coords::Rational => CoordFormat::Rational,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Figure of merit and quality parameter of a generating vector.
    Merit(NetArgs),
    /// Generator matrices of a net, a sequence prefix or an LN prefix.
    Matrices(MatricesArgs),
    /// Points of a hyperplane net.
    GenNet(GenNetArgs),
    /// Points of a hyperplane sequence.
    GenSeq(GenSeqArgs),
    /// Check the (t,m,s)-net property of a point file.
    CheckNet(CheckNetArgs),
    /// Smallest t for which a point file is a net.
    StrictT(InputArgs),
    /// Check the (T,s)-sequence property block by block.
    CheckSeq(CheckSeqArgs),
    /// Star discrepancy of a point file.
    Discrepancy(DiscrepancyArgs),
    /// The counting bound Delta_q(s, rho).
    Delta(DeltaArgs),
    /// The merit level reachable by a fraction of all vectors.
    Threshold(ThresholdArgs),
    /// Exhaustive or random search over generating vectors.
    Search(SearchArgs),
    /// Extend a sequence vector one coefficient at a time.
    Extend(ExtendArgs),
    /// Compare hyperplane sequence prefixes with an LN sequence.
    LnCompare(LnCompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct NetArgs {
    #[arg(long)]
    pub q: Option<u32>,
    /// Dimension; must agree with the number of --alpha values.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Monic modulus of degree m as little-endian digits; defaults to x^m.
    #[arg(long)]
    pub f: Option<String>,
    /// One coordinate of the generating vector, little-endian digits.
    #[arg(long = "alpha")]
    pub alpha: Vec<String>,
    /// Basis for one coordinate as `i:b_1;b_2;...` (1-based i).
    #[arg(long = "basis")]
    pub basis: Vec<String>,
}

#[derive(Args, Debug)]
pub struct MatricesArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Sequence spec file; prints the m x m prefix.
    #[arg(long, conflicts_with = "ln")]
    pub seq: Option<String>,
    /// LN spec file; prints the m x m prefix.
    #[arg(long)]
    pub ln: Option<String>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Write an SVG scatter of the first two coordinates.
    #[arg(long)]
    pub plot: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenNetArgs {
    #[command(flatten)]
    pub net: NetArgs,
    #[arg(long, value_enum, default_value_t = Coords::Digits)]
    pub coords: Coords,
    #[command(flatten)]
    pub plot: PlotArgs,
}

#[derive(Args, Debug)]
pub struct GenSeqArgs {
    /// Sequence spec file (`-` for standard input).
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 0)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    /// Digits per coordinate; defaults to M.
    #[arg(long)]
    pub precision: Option<usize>,
    #[arg(long, value_enum, default_value_t = Coords::Digits)]
    pub coords: Coords,
    #[command(flatten)]
    pub plot: PlotArgs,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Point file (`-` or absent for standard input).
    #[arg(long)]
    pub input: Option<String>,
    /// Net parameter m; derived from the point count when absent.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CheckNetArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub t: usize,
}

#[derive(Args, Debug)]
pub struct CheckSeqArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub m_max: usize,
    #[arg(long, default_value_t = 0)]
    pub k_max: u64,
    /// Comma separated T(1),...,T(m_max); the computed profile by default.
    #[arg(long)]
    pub profile: Option<String>,
    /// Also search polynomial dependences up to this degree.
    #[arg(long)]
    pub ud_bound: Option<usize>,
}

#[derive(Args, Debug)]
pub struct DiscrepancyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Lower bound from the grid {0, 1/r, ..., 1}^s instead of the exact value.
    #[arg(long)]
    pub grid: Option<u64>,
    /// Also print the value with k decimal digits.
    #[arg(long)]
    pub decimal: Option<usize>,
    #[command(flatten)]
    pub plot: PlotArgs,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: i64,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub m: usize,
    /// Fraction in (0, 1], e.g. `1/2`.
    #[arg(long)]
    pub beta: String,
    /// Use interval-bracketed floating point logarithms.
    #[arg(long)]
    pub interval: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value = "1/2")]
    pub beta: String,
    /// Sample this many vectors instead of enumerating all of them.
    #[arg(long)]
    pub random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub m_max: usize,
}

#[derive(Args, Debug)]
pub struct LnCompareArgs {
    #[arg(long)]
    pub ln: String,
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub m_max: usize,
}

/// Text and JSON renderings of one run plus its exit code.
struct Outcome {
    text: String,
    json: Value,
    code: i32,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, code: EXIT_OK }
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Capacity(_)) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Usage(s) | CliError::Io(s) => s.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parse `args` (program name first), run the command and return the exit
/// code. `seed_override` plays the role of the seed environment variable.
pub fn run<I, S>(args: I, seed_override: Option<String>, stdin: &mut (dyn Read + Send), out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let format = cli.format;
    let result = match cli.jobs {
        Some(0) => usage("--jobs must be at least 1"),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, seed_override, stdin)),
            Err(e) => Err(CliError::Io(format!("cannot start worker pool: {e}"))),
        },
        None => dispatch(cli.command, seed_override, stdin),
    };
    match result {
        Ok(o) => {
            let body = match format {
                Format::Text => o.text,
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&o.json).expect("json value")),
            };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cmd: Command, seed_override: Option<String>, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    match cmd {
        Command::Merit(a) => merit(&a),
        Command::Matrices(a) => matrices(&a, stdin),
        Command::GenNet(a) => gen_net(&a),
        Command::GenSeq(a) => gen_seq(&a, stdin),
        Command::CheckNet(a) => check_net(&a, stdin),
        Command::StrictT(a) => strict(&a, stdin),
        Command::CheckSeq(a) => check_seq(&a, stdin),
        Command::Discrepancy(a) => discrepancy(&a, stdin),
        Command::Delta(a) => delta(&a),
        Command::Threshold(a) => threshold(&a),
        Command::Search(a) => search(&a, seed_override),
        Command::Extend(a) => extend(&a),
        Command::LnCompare(a) => ln_compare(&a, stdin),
    }
}

fn read_source(path: Option<&str>, stdin: &mut (dyn Read + Send)) -> CliResult<String> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {p}: {e}"))),
    }
}

fn polys_label(polys: &[Poly]) -> String {
    polys.iter().map(Poly::to_string).collect::<Vec<_>>().join("|")
}

/// A fully resolved net construction and the header tokens describing it.
struct ResolvedNet {
    spec: NetSpec,
    m: usize,
    config: String,
}

fn resolve_net(a: &NetArgs) -> CliResult<ResolvedNet> {
    let Some(q) = a.q else { return usage("--q is required") };
    let Some(m) = a.m else { return usage("--m is required") };
    if a.alpha.is_empty() {
        return usage("at least one --alpha is required");
    }
    if let Some(s) = a.s {
        if s != a.alpha.len() {
            return usage(format!("--s {s} but {} --alpha values given", a.alpha.len()));
        }
    }
    let fq = Field::new(q)?;
    let f = match &a.f {
        Some(text) => Poly::parse(text, &fq)?,
        None => Poly::x_pow(m),
    };
    let alpha = a.alpha.iter().map(|t| Poly::parse(t, &fq)).collect::<hyperseq::Result<Vec<_>>>()?;
    let s = alpha.len();
    let mut bases = vec![OrderedBasis::canonical(m); s];
    let mut basis_tokens = Vec::new();
    for b in &a.basis {
        let Some((i, elems)) = b.split_once(':') else { return usage(format!("basis '{b}' is not i:b_1;b_2;...")) };
        let i: usize = match i.parse() {
            Ok(i) if (1..=s).contains(&i) => i,
            _ => return usage(format!("basis index '{i}' is not in 1..={s}")),
        };
        let elems = elems.split(';').map(|e| Poly::parse(e, &fq)).collect::<hyperseq::Result<Vec<_>>>()?;
        bases[i - 1] = OrderedBasis::new(&fq, m, elems)?;
        basis_tokens.push((i, bases[i - 1].elems().iter().map(Poly::to_digits).collect::<Vec<_>>().join(";")));
    }
    basis_tokens.sort();
    let mut config = format!("f={}", f.to_digits());
    for (i, p) in alpha.iter().enumerate() {
        write!(config, " alpha_{}={}", i + 1, p.to_digits()).unwrap();
    }
    if basis_tokens.is_empty() {
        config.push_str(" bases=canonical");
    }
    for (i, b) in basis_tokens {
        write!(config, " basis_{i}={b}").unwrap();
    }
    let spec = NetSpec::new(fq, f, alpha, bases)?;
    Ok(ResolvedNet { spec, m, config })
}

fn merit(a: &NetArgs) -> CliResult<Outcome> {
    let net = resolve_net(a)?;
    let spec = &net.spec;
    let r = figure_of_merit(&spec.field, &spec.alpha, &spec.f, net.m)?;
    let text = format!(
        "# merit q={} s={} m={} {}\nrho={} t={} witness=({})\n",
        spec.field.q(),
        spec.s(),
        net.m,
        net.config,
        r.rho,
        r.t,
        polys_label(&r.witness)
    );
    let json = json!({
        "command": "merit",
        "q": spec.field.q(),
        "s": spec.s(),
        "m": net.m,
        "f": spec.f.to_digits(),
        "alpha": spec.alpha.iter().map(Poly::to_digits).collect::<Vec<_>>(),
        "rho": r.rho,
        "t": r.t,
        "witness": r.witness.iter().map(Poly::to_digits).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(text, json))
}

fn family_outcome(header: String, fam: &GeneratorFamily) -> Outcome {
    let mut text = header;
    for (i, c) in fam.matrices().iter().enumerate() {
        writeln!(text, "C_{}", i + 1).unwrap();
        write!(text, "{c}").unwrap();
    }
    let json = json!({
        "header": text.lines().next().unwrap_or_default(),
        "matrices": fam.matrices().iter().map(|c| c.to_rows()).collect::<Vec<_>>(),
    });
    Outcome::ok(text, json)
}

fn matrices(a: &MatricesArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    if let Some(path) = a.seq.as_deref().or(a.ln.as_deref()) {
        let Some(m) = a.net.m else { return usage("--m is required") };
        let src = read_source(Some(path), stdin)?;
        let (kind, fam, q) = if a.seq.is_some() {
            let spec = SeqSpec::parse(&src)?;
            ("seq", seq_generator_prefix(&spec, m)?, spec.field.q())
        } else {
            let spec = LnSpec::parse(&src)?;
            ("ln", ln_generator_matrices(&spec, m)?, spec.field.q())
        };
        let header = format!("# matrices q={q} s={} m={m} {kind}={path}\n", fam.s());
        return Ok(family_outcome(header, &fam));
    }
    let net = resolve_net(&a.net)?;
    let fam = net_generator_matrices(&net.spec)?;
    let header = format!("# matrices q={} s={} m={} {}\n", net.spec.field.q(), fam.s(), net.m, net.config);
    Ok(family_outcome(header, &fam))
}

fn points_json(points: &PointSet, config: &str) -> Value {
    json!({
        "q": points.q(),
        "s": points.s(),
        "m": points.precision(),
        "config": config,
        "points": points
            .iter()
            .map(|p| p.chunks(points.precision().max(1)).map(|c| c.to_vec()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn gen_net(a: &GenNetArgs) -> CliResult<Outcome> {
    let net = resolve_net(&a.net)?;
    let points = generate_net_points(&net.spec.field, &net_generator_matrices(&net.spec)?)?;
    let config = format!("cmd=gen-net {}", net.config);
    maybe_plot(&a.plot, &points)?;
    let text = points.render(a.coords.into(), &config)?;
    Ok(Outcome::ok(text, points_json(&points, &config)))
}

fn gen_seq(a: &GenSeqArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    let src = read_source(Some(&a.spec), stdin)?;
    let spec = SeqSpec::parse(&src)?;
    let precision = a.precision.unwrap_or(spec.precision());
    if a.to < a.from {
        return usage(format!("--to {} is below --from {}", a.to, a.from));
    }
    let points = generate_sequence_points(&spec, a.from, a.to, precision)?;
    let config = format!("cmd=gen-seq from={} to={} {}", a.from, a.to, one_line(&spec.render()));
    maybe_plot(&a.plot, &points)?;
    let text = points.render(a.coords.into(), &config)?;
    Ok(Outcome::ok(text, points_json(&points, &config)))
}

/// Spec text as space separated tokens.
fn one_line(spec: &str) -> String {
    spec.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.replace(' ', ""))
        .filter(|l| !l.starts_with("q=") && !l.starts_with("s="))
        .collect::<Vec<_>>()
        .join(" ")
}

fn load_points(a: &InputArgs, stdin: &mut (dyn Read + Send)) -> CliResult<(PointSet, usize)> {
    let points = PointSet::parse(&read_source(a.input.as_deref(), stdin)?)?;
    let m = match a.m {
        Some(m) => m,
        None => {
            let q = points.q() as u64;
            let n = points.len() as u64;
            let mut m = 0;
            let mut size = 1u64;
            while size < n {
                size *= q;
                m += 1;
            }
            if size != n {
                return usage(format!("{n} points is not a power of q = {q}; pass --m"));
            }
            m
        }
    };
    Ok((points, m))
}

fn check_net(a: &CheckNetArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    let (points, m) = load_points(&a.input, stdin)?;
    let report = check_tms_net(&points, m, a.t)?;
    let text = format!("# check-net q={} s={} m={} t={}\n{report}", points.q(), points.s(), m, a.t);
    let json = json!({
        "q": points.q(), "s": points.s(), "m": m, "t": a.t,
        "passed": report.passed,
        "failure": report.failure.as_ref().map(|b| json!({"shape": b.shape, "box": b.corner, "count": b.count})),
    });
    let code = if report.passed { EXIT_OK } else { EXIT_FAIL };
    Ok(Outcome { text, json, code })
}

fn strict(a: &InputArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    let (points, m) = load_points(a, stdin)?;
    let t = strict_t(&points, m)?;
    let text = format!("# strict-t q={} s={} m={}\nSTRICT_T {t}\n", points.q(), points.s(), m);
    Ok(Outcome::ok(text, json!({"q": points.q(), "s": points.s(), "m": m, "strict_t": t})))
}

fn check_seq(a: &CheckSeqArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    let spec = SeqSpec::parse(&read_source(Some(&a.spec), stdin)?)?;
    let profile = match &a.profile {
        Some(p) => {
            let values = p
                .split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad profile value '{v}'"))))
                .collect::<CliResult<Vec<_>>>()?;
            QualityProfile::from_values(values)
        }
        None => quality_function_T(&spec, a.m_max)?,
    };
    let report = check_T_sequence(&spec, &profile, a.m_max, a.k_max)?;
    let profile_label: Vec<String> = profile.t.iter().map(usize::to_string).collect();
    let mut text = format!(
        "# check-seq q={} s={} M={} m_max={} k_max={} profile={}\n",
        spec.field.q(),
        spec.s(),
        spec.precision(),
        a.m_max,
        a.k_max,
        profile_label.join(",")
    );
    write!(text, "{report}").unwrap();
    let mut json = json!({
        "q": spec.field.q(), "s": spec.s(), "M": spec.precision(),
        "profile": profile.t, "passed": report.passed, "blocks_tested": report.blocks_tested,
        "failure": report.failure.as_ref().map(|(m, k, r)| json!({
            "m": m, "k": k,
            "shape": r.failure.as_ref().map(|b| b.shape.clone()),
            "box": r.failure.as_ref().map(|b| b.corner.clone()),
        })),
    });
    if let Some(bound) = a.ud_bound {
        match ud_certificate(&spec, bound)? {
            UdCertificate::Dependent { p, rho_cap, valid_from_m } => {
                writeln!(text, "UD dependent p=({}) rho_cap={rho_cap} from_m={valid_from_m}", polys_label(&p)).unwrap();
                json["ud"] = json!({"dependent": true, "p": p.iter().map(Poly::to_digits).collect::<Vec<_>>(),
                    "rho_cap": rho_cap, "valid_from_m": valid_from_m});
            }
            UdCertificate::IndependentUpTo(d) => {
                writeln!(text, "UD independent_up_to={d}").unwrap();
                json["ud"] = json!({"dependent": false, "independent_up_to": d});
            }
        }
    }
    let code = if report.passed { EXIT_OK } else { EXIT_FAIL };
    Ok(Outcome { text, json, code })
}

fn discrepancy(a: &DiscrepancyArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    let (points, m) = load_points(&a.input, stdin)?;
    maybe_plot(&a.plot, &points)?;
    let report = match a.grid {
        Some(r) => star_discrepancy_grid(&points, r)?,
        None => star_discrepancy_exact(&points)?,
    };
    let mode = a.grid.map_or("exact".to_string(), |r| format!("grid={r}"));
    let mut text = format!("# discrepancy q={} s={} m={} n={} {mode}\n{report}", points.q(), points.s(), m, points.len());
    let mut json = json!({
        "q": points.q(), "s": points.s(), "n": points.len(),
        "exact": report.exact,
        "dstar": format!("{}/{}", report.num, report.den),
        "corner": report.corner.iter().map(|c| format!("{c}/{}", report.corner_den)).collect::<Vec<_>>(),
        "closed": report.closed,
    });
    if let Some(k) = a.decimal {
        let d = report.decimal(k);
        writeln!(text, "DECIMAL {d}").unwrap();
        json["decimal"] = json!(d);
    }
    Ok(Outcome::ok(text, json))
}

fn delta(a: &DeltaArgs) -> CliResult<Outcome> {
    let d = delta_bound(a.q, a.s, a.rho)?;
    Ok(Outcome::ok(format!("{d}\n"), json!({"q": a.q, "s": a.s, "rho": a.rho, "delta": d.to_string()})))
}

fn parse_beta(s: &str) -> CliResult<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| CliError::Usage(format!("bad fraction '{s}'")))
}

fn threshold(a: &ThresholdArgs) -> CliResult<Outcome> {
    let beta = parse_beta(&a.beta)?;
    let v = if a.interval {
        rho_threshold_interval(a.q, a.s, a.m, &beta)?
    } else {
        rho_threshold(a.q, a.s, a.m, &beta)?
    };
    Ok(Outcome::ok(
        format!("{v}\n"),
        json!({"q": a.q, "s": a.s, "m": a.m, "beta": beta.to_string(), "interval": a.interval, "threshold": v}),
    ))
}

fn search(a: &SearchArgs, seed_override: Option<String>) -> CliResult<Outcome> {
    let beta = parse_beta(&a.beta)?;
    let (Ok(num), Ok(den)) = (u64::try_from(beta.numer()), u64::try_from(beta.denom())) else {
        return usage(format!("beta '{}' is too large", a.beta));
    };
    let cfg = SearchConfig::new(Field::new(a.q)?, a.s, a.m, Ratio::new(num, den))?;
    let seed = match seed_override {
        Some(s) => s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("{SEED_ENV}='{s}' is not a u64")))?,
        None => a.seed,
    };
    let report = match a.random {
        Some(n) => random_search(&cfg, n, seed)?,
        None => exhaustive_search(&cfg)?,
    };
    let mode = match a.random {
        Some(n) => format!("mode=random samples={n} seed={seed}"),
        None => "mode=exhaustive".into(),
    };
    let mut text = format!("# search q={} s={} m={} beta={} {mode}\n", a.q, a.s, a.m, cfg.beta);
    writeln!(
        text,
        "best alpha=({}) rho={} t={} evaluated={}",
        polys_label(&report.best_alpha),
        report.best_rho,
        report.best_t,
        report.evaluated
    )
    .unwrap();
    for (r, c) in &report.histogram {
        writeln!(text, "rho={r} count={c}").unwrap();
    }
    for c in &report.checks {
        writeln!(
            text,
            "check rho_star={} delta={} hypothesis={} count={} needed={} holds={}",
            c.rho_star, c.delta, c.hypothesis, c.count, c.needed, c.holds
        )
        .unwrap();
    }
    let all_hold = report.checks.iter().all(|c| c.holds);
    let json = json!({
        "q": a.q, "s": a.s, "m": a.m, "beta": cfg.beta.to_string(), "seed": report.seed,
        "best_alpha": report.best_alpha.iter().map(Poly::to_digits).collect::<Vec<_>>(),
        "best_rho": report.best_rho, "best_t": report.best_t, "evaluated": report.evaluated,
        "histogram": report.histogram.iter().map(|(r, c)| json!({"rho": r, "count": c})).collect::<Vec<_>>(),
        "checks": report.checks.iter().map(|c| json!({
            "rho_star": c.rho_star, "delta": c.delta.to_string(), "hypothesis": c.hypothesis,
            "count": c.count, "needed": c.needed.to_string(), "holds": c.holds,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome { text, json, code: if all_hold { EXIT_OK } else { EXIT_FAIL } })
}

fn extend(a: &ExtendArgs) -> CliResult<Outcome> {
    let g = greedy_extend(&Field::new(a.q)?, a.s, a.m_max)?;
    let mut text = format!("# extend q={} s={} m_max={}\n", a.q, a.s, a.m_max);
    text.push_str(&g.spec.render());
    for m in 1..=a.m_max {
        let target = g.target[m - 1].map_or("-".to_string(), |v| format!("{v:.3}"));
        writeln!(text, "# m={m} T={} rho={} target={target}", g.profile.at(m), g.profile.rho[m - 1]).unwrap();
    }
    let json = json!({
        "spec": g.spec.render(),
        "T": g.profile.t,
        "rho": g.profile.rho,
        "target": g.target,
    });
    Ok(Outcome::ok(text, json))
}

fn ln_compare(a: &LnCompareArgs, stdin: &mut (dyn Read + Send)) -> CliResult<Outcome> {
    let ln = LnSpec::parse(&read_source(Some(&a.ln), stdin)?)?;
    let seq = SeqSpec::parse(&read_source(Some(&a.seq), stdin)?)?;
    if ln.field.q() != seq.field.q() || ln.s() != seq.s() {
        return usage("LN and sequence specs differ in q or s");
    }
    let fq = &seq.field;
    let ranks = rank_condition(fq, &seq_generator_prefix(&seq, a.m_max + 1)?, a.m_max)?;
    let mut text = format!("# ln-compare q={} s={} m_max={} ln={} seq={}\n", fq.q(), seq.s(), a.m_max, a.ln, a.seq);
    let mut rows = Vec::new();
    for w in &ranks {
        let m = w.m;
        let equivalent = if 2 * m - 1 <= ln.precision() {
            let eq = nut_equivalence(fq, &seq_generator_prefix(&seq, m)?, &ln_generator_matrices(&ln, m)?)?;
            Some(eq.is_some())
        } else {
            None
        };
        let eq_label = match equivalent {
            Some(true) => "yes",
            Some(false) => "no",
            None => "untested",
        };
        writeln!(
            text,
            "m={m} rank={} rank_m={} condition={} equivalent={eq_label}",
            w.rank,
            w.rank_m,
            if w.pass { "pass" } else { "fail" }
        )
        .unwrap();
        rows.push(json!({"m": m, "rank": w.rank, "rank_m": w.rank_m, "condition": w.pass, "equivalent": equivalent}));
    }
    Ok(Outcome::ok(text, json!({"q": fq.q(), "s": seq.s(), "rows": rows})))
}

fn maybe_plot(p: &PlotArgs, points: &PointSet) -> CliResult<()> {
    let Some(path) = &p.plot else { return Ok(()) };
    std::fs::write(path, svg_scatter(points)?).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))
}

/// SVG scatter of coordinates 1 and 2 in the unit square.
pub fn svg_scatter(points: &PointSet) -> hyperseq::Result<String> {
    if points.s() < 2 {
        return Err(Error::Shape("plotting needs s >= 2".into()));
    }
    let den = points.denominator()? as f64;
    let size = 512.0;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\" stroke=\"black\"/>\n"
    );
    for k in 0..points.len() {
        let x = points.numerator(k, 0) as f64 / den * size;
        let y = size - points.numerator(k, 1) as f64 / den * size;
        writeln!(svg, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2\" fill=\"black\"/>").unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
