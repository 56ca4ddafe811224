//! Command-line front end. [`run`] parses argv, dispatches to the library and
//! renders a report; the binary only prints it and exits with the code.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure (the report
//! is still emitted), 3 inconclusive computation.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

use strength_fano::bounds::{self, DegreeTuple};
use strength_fano::fano;
use strength_fano::ideals::{affine_dimension, point_count_dimension, GroebnerLimits, IdealBasis};
use strength_fano::residual::{self, parse_vector, Direction, PlaneChart};
use strength_fano::strength::{self, StrengthValue};
use strength_fano::unirat;
use strength_fano::{parse_in, Error, FieldSpec, Polynomial, Ring, Scalar};

pub const SCHEMA: &str = "strength-fano/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SEED_ENV: &str = "STRENGTH_FANO_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "strength-fano",
    version,
    about = "Strength, Fano-scheme and parametrization checks in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// `rat` or `fp:<p>`
    #[arg(long, global = true, default_value = "rat")]
    field: String,
    /// Defaults to $STRENGTH_FANO_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Gröbner basis size limit (default 5000).
    #[arg(long = "max-basis", global = true)]
    max_basis: Option<usize>,
    /// Gröbner S-pair degree limit (default 24).
    #[arg(long = "max-pair-deg", global = true)]
    max_pair_deg: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    out: Format,
    /// Plane dimension (default 1).
    #[arg(short, global = true)]
    k: Option<usize>,
    /// Polynomial, repeatable.
    #[arg(short = 'f', global = true)]
    polys: Vec<String>,
    /// File with one polynomial per line.
    #[arg(long, global = true)]
    file: Option<std::path::PathBuf>,
    /// Comma-separated variable names; inferred when absent.
    #[arg(long, global = true)]
    vars: Option<String>,
    /// Row-major matrix, rows separated by `;`.
    #[arg(long, global = true)]
    plane: Option<String>,
    /// Comma-separated vector.
    #[arg(long, global = true)]
    point: Option<String>,
    /// Comma-separated k+1 scalars for transfer-check; seeded random when absent.
    #[arg(long, global = true)]
    lambda: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equations g_{l,alpha} of the k-planes in V(f).
    FanoEqs,
    /// Specialization u_{i,j} -> lambda_i x_j against lambda^alpha * multinomial * f.
    TransferCheck,
    /// Conditions on a direction extending a plane inside V(f).
    FlagFano,
    /// Residual of f on the plane spanned by --plane and --point (symbolic without --point).
    Residual,
    /// Rank of the residual map on --plane.
    PsiRank,
    /// Codimension of the singular locus of V(f).
    SmoothStrength,
    /// Smallest smooth strength over combinations of the -f family.
    CollectiveSample {
        /// Enumerate {-2..2}^c instead of sampling.
        #[arg(long)]
        grid: bool,
    },
    /// Gram rank, strength and a verified decomposition of each quadric.
    QuadricStrength,
    /// Affine dimension of V(f_1, ..., f_c).
    Dim {
        /// Cross-check by point counts over these primes, e.g. `101,211`.
        #[arg(long)]
        primes: Option<String>,
        /// Dimension of the Fano equations (with -k) against the expected value.
        #[arg(long)]
        fano: bool,
    },
    /// The smooth-strength bound U_str for a degree tuple.
    Ustr { degrees: Vec<u32> },
    /// All numeric thresholds for a degree tuple (and -k, default 1).
    Thresholds { degrees: Vec<u32> },
    /// Lines through --point parametrizing the quadric V(f).
    ParametrizeQuadric,
    /// Parametrization of a cubic V(f) containing the line --plane.
    ParametrizeCubic,
    /// F(g_0, ..., g_n): first -f is F in x0..xn, the rest are the g_i.
    Compose,
    /// Parametrize V(F(g)) from a point of V(F) (--point) and single-term g_i.
    Pullback,
    /// Fano equations of the Fermat hypersurface of degree p+1 over F_p.
    CharpDemo {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 4)]
        nvars: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FanoEqs => "fano-eqs",
            Command::TransferCheck => "transfer-check",
            Command::FlagFano => "flag-fano",
            Command::Residual => "residual",
            Command::PsiRank => "psi-rank",
            Command::SmoothStrength => "smooth-strength",
            Command::CollectiveSample { .. } => "collective-sample",
            Command::QuadricStrength => "quadric-strength",
            Command::Dim { .. } => "dim",
            Command::Ustr { .. } => "ustr",
            Command::Thresholds { .. } => "thresholds",
            Command::ParametrizeQuadric => "parametrize-quadric",
            Command::ParametrizeCubic => "parametrize-cubic",
            Command::Compose => "compose",
            Command::Pullback => "pullback",
            Command::CharpDemo { .. } => "charp-demo",
        }
    }
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
}

struct Outcome {
    checks: Vec<Check>,
    result: Value,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome {
            checks: Vec::new(),
            result,
        }
    }

    fn check(mut self, name: &str, pass: bool) -> Self {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
        });
        self
    }
}

/// Errors before a report exists: bad flags, bad polynomials, library errors.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = if e.is_inconclusive() {
            (EXIT_INCONCLUSIVE, "inconclusive")
        } else if e.is_verification_failure() {
            (EXIT_VERIFICATION, "verification")
        } else {
            (EXIT_INPUT, "input")
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        kind: "input",
        message: message.into(),
    }
}

type Outcomes = std::result::Result<Outcome, Failure>;

struct Job {
    field: FieldSpec,
    seed: u64,
    limits: GroebnerLimits,
    opts: Options,
    texts: Vec<String>,
}

/// Runs one command line. Returns the exit code and the full report text.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run_with_env(argv, env_seed.as_deref())
}

/// [`run`] with the seed environment variable passed explicitly.
pub fn run_with_env<I, T>(argv: I, env_seed: Option<&str>) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let command = cli.command;
    let format = cli.opts.out;
    let job = match prepare(cli.opts, env_seed) {
        Ok(job) => job,
        Err(f) => return failure_report(command.name(), None, f, format),
    };
    let outcome = dispatch(&command, &job);
    let header = Header {
        command: command.name(),
        field: match command {
            // The demo always runs over F_p, whatever --field says.
            Command::CharpDemo { p, .. } => FieldSpec::Prime(p).label(),
            _ => job.field.label(),
        },
        seed: job.seed,
        input: echo(&command, &job),
    };
    match outcome {
        Ok(o) => render(header, o, format),
        Err(f) => failure_report(command.name(), Some(header), f, format),
    }
}

fn prepare(opts: Options, env_seed: Option<&str>) -> std::result::Result<Job, Failure> {
    let field = FieldSpec::parse(&opts.field)?;
    let seed = match (opts.seed, env_seed) {
        (Some(s), _) => s,
        (None, Some(text)) => text
            .trim()
            .parse()
            .map_err(|_| input_error(format!("{SEED_ENV} is not an unsigned integer: {text}")))?,
        (None, None) => 0,
    };
    let mut limits = GroebnerLimits::default();
    if let Some(m) = opts.max_basis {
        limits.max_basis_size = m;
    }
    if let Some(d) = opts.max_pair_deg {
        limits.max_pair_degree = d;
    }
    let mut texts = opts.polys.clone();
    if let Some(path) = &opts.file {
        let content = std::fs::read_to_string(path)
            .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
        texts.extend(
            content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    Ok(Job {
        field,
        seed,
        limits,
        opts,
        texts,
    })
}

/// `x3` → `("x", 3)`.
fn split_indexed(name: &str) -> Option<(&str, usize)> {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 || digits == name.len() {
        return None;
    }
    let (prefix, num) = name.split_at(name.len() - digits);
    let i: usize = num.parse().ok()?;
    (i.to_string() == num).then_some((prefix, i))
}

/// With `--vars`, that ring. Otherwise, when every name is `<prefix><index>`
/// for one prefix, `prefix0..prefixN` with `N` the largest index (raised to
/// cover `min_len` variables); otherwise the names in natural order.
fn infer_ring(
    texts: &[String],
    declared: Option<&str>,
    min_len: usize,
) -> std::result::Result<Ring, Failure> {
    if let Some(list) = declared {
        return Ok(Ring::new(list.split(',').map(|s| s.trim().to_string()))?);
    }
    let mut names = Vec::new();
    for t in texts {
        names.extend(strength_fano::algebra::parse::variables_of(t)?);
    }
    let indexed: Option<Vec<(&str, usize)>> = names.iter().map(|n| split_indexed(n)).collect();
    if let Some(parts) = indexed {
        let prefix = parts.first().map_or("x", |p| p.0);
        if parts.iter().all(|p| p.0 == prefix) {
            let len = parts
                .iter()
                .map(|p| p.1 + 1)
                .max()
                .unwrap_or(0)
                .max(min_len);
            return Ok(Ring::indexed(prefix, len));
        }
    }
    Ok(Ring::natural(names)?)
}

impl Job {
    fn width_hint(&self) -> usize {
        let plane = self
            .opts
            .plane
            .as_deref()
            .and_then(|p| p.split(';').next())
            .map(|r| r.split(',').count());
        let point = self
            .opts
            .point
            .as_deref()
            .and_then(|p| parse_vector(p).ok())
            .map(|v| v.len());
        plane.unwrap_or(0).max(point.unwrap_or(0))
    }

    fn polys_from(
        &self,
        texts: &[String],
        min_len: usize,
    ) -> std::result::Result<Vec<Polynomial>, Failure> {
        if texts.is_empty() {
            return Err(input_error("no polynomial given; use -f or --file"));
        }
        let ring = infer_ring(texts, self.opts.vars.as_deref(), min_len)?;
        Ok(texts
            .iter()
            .map(|t| parse_in(t, &ring, self.field))
            .collect::<Result<Vec<_>, _>>()?)
    }

    fn polys(&self) -> std::result::Result<Vec<Polynomial>, Failure> {
        self.polys_from(&self.texts, self.width_hint())
    }

    fn single(&self) -> std::result::Result<Polynomial, Failure> {
        let fs = self.polys()?;
        if fs.len() != 1 {
            return Err(input_error(format!(
                "expected one polynomial, got {}",
                fs.len()
            )));
        }
        Ok(fs.into_iter().next().unwrap())
    }

    fn k(&self) -> usize {
        self.opts.k.unwrap_or(1)
    }

    fn plane(&self) -> std::result::Result<PlaneChart, Failure> {
        let text = self
            .opts
            .plane
            .as_deref()
            .ok_or_else(|| input_error("--plane is required"))?;
        Ok(PlaneChart::parse(text, self.field)?)
    }

    fn vector(&self, text: &str) -> std::result::Result<Vec<Scalar>, Failure> {
        let v = parse_vector(text)?;
        Ok(v.iter()
            .map(|c| self.field.from_rational(c))
            .collect::<Result<Vec<_>, _>>()?)
    }

    fn point(&self) -> std::result::Result<Vec<Scalar>, Failure> {
        let text = self
            .opts
            .point
            .as_deref()
            .ok_or_else(|| input_error("--point is required"))?;
        self.vector(text)
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn scalars(field: FieldSpec, v: &[Scalar]) -> Vec<String> {
    v.iter().map(|c| field.format(c)).collect()
}

fn dispatch(command: &Command, job: &Job) -> Outcomes {
    match command {
        Command::FanoEqs => fano_eqs(job),
        Command::TransferCheck => transfer_check(job),
        Command::FlagFano => {
            let sys = fano::flag_fano_equations(&job.polys()?, &job.plane()?)?;
            Ok(Outcome::new(to_json(&sys)))
        }
        Command::Residual => residual_cmd(job),
        Command::PsiRank => {
            let m = residual::psi_matrix(&job.polys()?, &job.plane()?)?;
            let rank = residual::psi_surjective(&m, job.field);
            Ok(Outcome::new(json!({ "map": m, "rank": rank })))
        }
        Command::SmoothStrength => smooth_strength_cmd(job),
        Command::CollectiveSample { grid } => {
            let fs = job.polys()?;
            let sample = if *grid {
                strength::collective_smooth_strength_grid(&fs, job.limits)?
            } else {
                strength::collective_smooth_strength_sample(
                    &fs,
                    job.opts.trials,
                    job.seed,
                    job.limits,
                )?
            };
            Ok(Outcome::new(to_json(&sample)))
        }
        Command::QuadricStrength => quadric_strength_cmd(job),
        Command::Dim { primes, fano } => dim_cmd(job, primes.as_deref(), *fano),
        Command::Ustr { degrees } => {
            let v = bounds::u_str(&DegreeTuple::new(degrees.iter().copied()));
            let value = v
                .to_u64()
                .map_or_else(|| json!(v.to_string()), |x| json!(x));
            Ok(Outcome::new(json!({ "degrees": degrees, "u_str": value })))
        }
        Command::Thresholds { degrees } => {
            let row =
                bounds::threshold_row(&DegreeTuple::new(degrees.iter().copied()), job.k() as u64);
            Ok(Outcome::new(to_json(&row)))
        }
        Command::ParametrizeQuadric => {
            let rec = unirat::quadric_parametrization(&job.single()?, &job.point()?, job.seed)?;
            Ok(map_outcome(Outcome::new(to_json(&rec)), "map", &rec))
        }
        Command::ParametrizeCubic => {
            let rec =
                unirat::cubic_with_line_parametrization(&job.single()?, &job.plane()?, job.seed)?;
            Ok(map_outcome(Outcome::new(to_json(&rec)), "map", &rec))
        }
        Command::Compose => {
            let (f, gs) = outer_and_inner(job)?;
            let h = unirat::compose_substitution(&f, &gs)?;
            let expected = f.degree().unwrap_or(0)
                * gs.iter().filter_map(Polynomial::degree).next().unwrap_or(0);
            let ok = h.is_zero() || (h.is_homogeneous() && h.degree() == Some(expected));
            Ok(
                Outcome::new(json!({ "composite": h.to_string(), "degree": h.degree() }))
                    .check("homogeneous of degree deg F * deg g", ok),
            )
        }
        Command::Pullback => pullback_cmd(job),
        Command::CharpDemo { p, nvars } => {
            let demo = fano::characteristic_demo(*p, *nvars, job.seed)?;
            let count_ok = demo.zero_slots.len() == demo.predicted_zero_slots;
            let transfer_ok = demo.transfer_ok;
            Ok(Outcome::new(to_json(&demo))
                .check("zero slots match vanishing binomials", count_ok)
                .check("transfer identity on every slot", transfer_ok))
        }
    }
}

fn map_outcome(o: Outcome, label: &str, rec: &unirat::RationalMapRecord) -> Outcome {
    let v = &rec.verification;
    o.check(
        &format!("{label}: substitution vanishes"),
        v.substitution_ok,
    )
    .check(
        &format!("{label}: jacobian rank equals target dimension"),
        v.dominant,
    )
}

fn fano_eqs(job: &Job) -> Outcomes {
    let sys = fano::fano_equations(&job.polys()?, job.k())?;
    let mut out = Outcome::new(json!({
        "k": sys.k,
        "n": sys.n(),
        "degrees": sys.degrees,
        "slots": sys.equations.len(),
        "zero_slots": sys.zero_slots().len(),
        "equations": sys.equations,
    }));
    for l in 0..sys.sources.len() {
        let ok = fano::reassemble(&sys, l)? == fano::substituted_source(&sys, l)?;
        out = out.check(
            &format!("f{l}: coefficients reassemble to the substitution"),
            ok,
        );
    }
    Ok(out)
}

fn transfer_check(job: &Job) -> Outcomes {
    let sys = fano::fano_equations(&job.polys()?, job.k())?;
    let lambda = match &job.opts.lambda {
        Some(text) => job.vector(text)?,
        None => {
            let mut rng = strength_fano::sampling::rng(job.seed);
            strength_fano::sampling::nonzero_vector(&mut rng, job.field, sys.k + 1, 9)
        }
    };
    let records = fano::transfer_specialize(&sys, &lambda)?;
    let all_equal = records.iter().all(|r| r.equal);
    let quadrics = sys.degrees.iter().all(|&d| d == 2) && job.field.characteristic() != 2;
    let rank = if quadrics {
        Some(fano::transfer_rank_check(&sys, job.opts.trials, job.seed)?)
    } else {
        None
    };
    let mut out = Outcome::new(json!({
        "lambda": scalars(job.field, &lambda),
        "records": records,
        "rank": rank,
    }))
    .check(
        "specialization matches lambda^alpha * multinomial * f",
        all_equal,
    );
    if let Some(r) = &rank {
        out = out.check("combination ranks stay at or above the source rank", r.pass);
    }
    Ok(out)
}

fn residual_cmd(job: &Job) -> Outcomes {
    let fs = job.polys()?;
    let plane = job.plane()?;
    let direction = match &job.opts.point {
        Some(text) => Direction::Numeric(job.vector(text)?),
        None => Direction::Symbolic,
    };
    if fs.len() == 1 {
        let r = residual::residual(&fs[0], &plane, &direction)?;
        let formula = residual::first_order_formula(&fs[0], &plane, &direction)?;
        let ok = formula == r.restriction;
        Ok(
            Outcome::new(json!({ "residual": r, "first_order": formula.to_string() }))
                .check("restriction equals the first-order formula", ok),
        )
    } else {
        let r = residual::residual_ci(&fs, &plane, &direction)?;
        Ok(Outcome::new(to_json(&r)))
    }
}

fn smooth_strength_cmd(job: &Job) -> Outcomes {
    let fs = job.polys()?;
    let mut results = Vec::new();
    let mut out_checks = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        let report = strength::smooth_strength(f, job.limits)?;
        let mut entry = json!({ "polynomial": f.to_string(), "smooth_strength": report });
        let is_quadric =
            f.is_homogeneous() && f.degree() == Some(2) && job.field.characteristic() != 2;
        if is_quadric {
            let s = strength::quadric_strength(f)?.value;
            let ceiling = bounds::smooth_strength_ceiling(s);
            entry["strength"] = json!(s);
            entry["ceiling"] = json!(ceiling);
            out_checks.push((
                format!("f{i}: smooth strength at most 2s+2"),
                report.value <= StrengthValue::Finite(ceiling),
            ));
        }
        results.push(entry);
    }
    let mut out = Outcome::new(Value::Array(results));
    for (name, pass) in out_checks {
        out = out.check(&name, pass);
    }
    Ok(out)
}

fn quadric_strength_cmd(job: &Job) -> Outcomes {
    let fs = job.polys()?;
    let mut results = Vec::new();
    for f in &fs {
        let cert = strength::quadric_strength(f)?;
        let pairs: Vec<[String; 2]> = cert
            .decomposition
            .iter()
            .map(|(g, h)| [g.to_string(), h.to_string()])
            .collect();
        results.push(json!({
            "polynomial": f.to_string(),
            "strength": cert.value,
            "rank": cert.rank,
            "decomposition": pairs,
        }));
    }
    Ok(Outcome::new(Value::Array(results)).check("decompositions verified exactly", true))
}

fn dim_cmd(job: &Job, primes: Option<&str>, fano_mode: bool) -> Outcomes {
    let fs = job.polys()?;
    if fano_mode {
        let r = fano::fano_dimension_check(&fs, job.k(), job.limits)?;
        let ok = r.matches;
        return Ok(Outcome::new(to_json(&r)).check("cone dimension equals expected", ok));
    }
    let basis = IdealBasis::new(fs)?;
    let report = affine_dimension(&basis, job.limits)?;
    let mut result = json!({ "groebner": report });
    let mut out_check = None;
    if let Some(list) = primes {
        let ps = list
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| input_error(format!("bad prime list `{list}`")))?;
        let counted = point_count_dimension(&basis, &ps)?;
        out_check = Some(counted.dimension == report.dimension);
        result["point_count"] = to_json(&counted);
    }
    let mut out = Outcome::new(result);
    if let Some(ok) = out_check {
        out = out.check("point-count estimate agrees", ok);
    }
    Ok(out)
}

/// First polynomial in `x0..xn`, the others in their own ring.
fn outer_and_inner(job: &Job) -> std::result::Result<(Polynomial, Vec<Polynomial>), Failure> {
    if job.texts.len() < 2 {
        return Err(input_error("expected F followed by g_0, ..., g_n"));
    }
    let gs = job.polys_from(&job.texts[1..], 0)?;
    let outer = infer_ring(&job.texts[..1], None, gs.len())?;
    if outer.len() != gs.len() {
        return Err(input_error(format!(
            "F has {} variables but {} polynomials were given to substitute",
            outer.len(),
            gs.len()
        )));
    }
    Ok((parse_in(&job.texts[0], &outer, job.field)?, gs))
}

fn pullback_cmd(job: &Job) -> Outcomes {
    let (f, gs) = outer_and_inner(job)?;
    let family = unirat::monomial_fiber_family(&gs, job.seed)?;
    let z = unirat::quadric_parametrization(&f, &job.point()?, job.seed)?;
    let map = unirat::pullback_parametrization(&f, &gs, &family, &z, job.seed)?;
    let out = Outcome::new(json!({
        "family": family,
        "z_param": z,
        "map": map,
    }))
    .check(
        "family: binomial pairs vanish",
        family.record.verification.substitution_ok,
    );
    let out = map_outcome(out, "z_param", &z);
    Ok(map_outcome(out, "map", &map))
}

fn echo(command: &Command, job: &Job) -> Value {
    let mut m = Map::new();
    if !job.texts.is_empty() {
        m.insert("polynomials".into(), json!(job.texts));
    }
    if let Some(k) = job.opts.k {
        m.insert("k".into(), json!(k));
    }
    for (key, v) in [
        ("plane", &job.opts.plane),
        ("point", &job.opts.point),
        ("lambda", &job.opts.lambda),
        ("vars", &job.opts.vars),
    ] {
        if let Some(v) = v {
            m.insert(key.into(), json!(v));
        }
    }
    m.insert("trials".into(), json!(job.opts.trials));
    m.insert("limits".into(), to_json(&job.limits));
    match command {
        Command::Ustr { degrees } | Command::Thresholds { degrees } => {
            m.insert("degrees".into(), json!(degrees));
        }
        Command::CharpDemo { p, nvars } => {
            m.insert("p".into(), json!(p));
            m.insert("nvars".into(), json!(nvars));
        }
        Command::Dim { primes, fano } => {
            m.insert("primes".into(), json!(primes));
            m.insert("fano".into(), json!(fano));
        }
        Command::CollectiveSample { grid } => {
            m.insert("grid".into(), json!(grid));
        }
        _ => {}
    }
    Value::Object(m)
}

struct Header {
    command: &'static str,
    field: String,
    seed: u64,
    input: Value,
}

fn render(h: Header, o: Outcome, format: Format) -> (i32, String) {
    let all_pass = o.checks.iter().all(|c| c.pass);
    let code = if all_pass { EXIT_OK } else { EXIT_VERIFICATION };
    let text = match format {
        Format::Json => {
            let report = json!({
                "schema": SCHEMA,
                "version": VERSION,
                "command": h.command,
                "field": h.field,
                "seed": h.seed,
                "input": h.input,
                "checks": o.checks,
                "pass": all_pass,
                "result": o.result,
            });
            serde_json::to_string_pretty(&report).unwrap()
        }
        Format::Text => {
            let mut s = format!(
                "strength-fano {VERSION} {}\nfield {} seed {}\n",
                h.command, h.field, h.seed
            );
            for c in &o.checks {
                s.push_str(&format!(
                    "{} {}\n",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name
                ));
            }
            s.push_str(&serde_json::to_string_pretty(&o.result).unwrap());
            s
        }
    };
    (code, text)
}

fn failure_report(
    command: &str,
    header: Option<Header>,
    f: Failure,
    format: Format,
) -> (i32, String) {
    let text = match format {
        Format::Json => {
            let mut report = json!({
                "schema": SCHEMA,
                "version": VERSION,
                "command": command,
                "pass": false,
                "error": { "kind": f.kind, "message": f.message },
            });
            if let Some(h) = header {
                report["field"] = json!(h.field);
                report["seed"] = json!(h.seed);
                report["input"] = h.input;
            }
            serde_json::to_string_pretty(&report).unwrap()
        }
        Format::Text => format!(
            "strength-fano {VERSION} {command}\nerror ({}): {}",
            f.kind, f.message
        ),
    };
    (f.code, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexed_names() {
        assert_eq!(split_indexed("x12"), Some(("x", 12)));
        assert_eq!(split_indexed("u0_3"), Some(("u0_", 3)));
        assert_eq!(split_indexed("x01"), None);
        assert_eq!(split_indexed("y"), None);
        assert_eq!(split_indexed("7"), None);
    }

    #[test]
    fn ring_inference_fills_gaps() {
        let r = infer_ring(&["x0^3 + x2^3".to_string()], None, 0).unwrap();
        assert_eq!(r.len(), 3);
        let r = infer_ring(&["x0^3 + x1^3".to_string()], None, 4).unwrap();
        assert_eq!(r.len(), 4);
        let r = infer_ring(&["a*b + c".to_string()], None, 0).unwrap();
        assert_eq!(r.vars(), &["a", "b", "c"]);
    }
}
