//! Batch front end: reads a JSON session, runs one analysis and reports the
//! result as JSON (default) or plain text.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use birkit_core::birational::{
    bir_xd_membership, canonical_coordinates, default_inverse_cap, edim_bound, find_inverse,
    inverse_degree_bound, is_birational, suv_check, verify_inverse_pair, AnalysisOptions,
    Birationality, ClearDegree,
};
use birkit_core::groebner::buchberger;
use birkit_core::invariants::hilbert::format_series;
use birkit_core::invariants::{
    analytic_spread, grade_at_least_2, principal_class_test, quotient_dim, tau_matrix, tau_sweep,
    TauSweep,
};
use birkit_core::locus::{
    locus_equations, sample_locus, vpz_basis, CompositionTemplate, DensityReport, Locus,
};
use birkit_core::ring::monomials_of_degree;
use birkit_core::session::{read_session_file, AnySession, Session, SessionError, SessionFile};
use birkit_core::{parse_poly, Error, Field, Ideal, Limits, MonomialOrder, Poly, PolyRing};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1.0";
pub const MAX_PAIRS_ENV: &str = "BIRKIT_MAX_PAIRS";

#[derive(Debug, Parser)]
#[command(
    name = "birkit",
    version,
    about = "Groebner-based analysis of rational maps of projective varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Session file (JSON).
    #[arg(long, global = true)]
    pub session: Option<PathBuf>,
    /// Name of a map in the session.
    #[arg(long, global = true)]
    pub map: Option<String>,
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Monomial order for `gb`.
    #[arg(long, global = true, value_enum)]
    pub order: Option<OrderArg>,
    /// Largest inverse degree searched.
    #[arg(long, global = true)]
    pub cap: Option<u32>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long = "max-degree", global = true)]
    pub max_degree: Option<u32>,
    #[arg(long = "max-pairs", global = true)]
    pub max_pairs: Option<usize>,
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Lex,
    Grevlex,
}

/// Positional inputs: polynomials, forms, a template or a locus name.
#[derive(Debug, Clone, Args)]
pub struct Inputs {
    pub inputs: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduced Groebner basis of the defining ideal plus any given polynomials.
    Gb(Inputs),
    /// Normal form of a polynomial modulo the defining ideal.
    Nf(Inputs),
    /// Ideal membership of a polynomial.
    Member(Inputs),
    /// Krull dimension of R, or of R modulo the given forms.
    Dim(Inputs),
    /// Hilbert function at --degree, or the Hilbert series.
    Hf(Inputs),
    /// Multiplicity of R.
    Mult(Inputs),
    /// Codimension of j forms equals j.
    Pclass(Inputs),
    /// Multiplication matrix at m = --degree, or a sweep from the floor.
    Tau(Inputs),
    /// Grade of the ideal of the forms is at least two.
    Grade2(Inputs),
    /// Analytic spread of the forms.
    Spread(Inputs),
    /// Full Bir(X)_d verdict for a map.
    #[command(name = "map-check")]
    MapCheck(Inputs),
    /// Search for an inverse up to --cap.
    Invert(Inputs),
    /// Birationality verdict.
    Birational(Inputs),
    /// Canonical coordinates of a representative.
    Coords(Inputs),
    /// Upper bound on the degree of an inverse at --degree.
    Bound(Inputs),
    /// Multiplicity comparison for a map with empty base locus.
    Suv(Inputs),
    /// Embedding-dimension bound at --degree.
    Edim(Inputs),
    /// Equations of the locus where a template lands in the ideal.
    #[command(name = "locus-eqs")]
    LocusEqs(Inputs),
    /// Basis of the degree-d piece of the defining ideal.
    Vpz(Inputs),
    /// Monte Carlo density of C_j, G_2 or N_s.
    Sample(Inputs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gb(_) => "gb",
            Command::Nf(_) => "nf",
            Command::Member(_) => "member",
            Command::Dim(_) => "dim",
            Command::Hf(_) => "hf",
            Command::Mult(_) => "mult",
            Command::Pclass(_) => "pclass",
            Command::Tau(_) => "tau",
            Command::Grade2(_) => "grade2",
            Command::Spread(_) => "spread",
            Command::MapCheck(_) => "map-check",
            Command::Invert(_) => "invert",
            Command::Birational(_) => "birational",
            Command::Coords(_) => "coords",
            Command::Bound(_) => "bound",
            Command::Suv(_) => "suv",
            Command::Edim(_) => "edim",
            Command::LocusEqs(_) => "locus-eqs",
            Command::Vpz(_) => "vpz",
            Command::Sample(_) => "sample",
        }
    }

    fn inputs(&self) -> &[String] {
        match self {
            Command::Gb(i)
            | Command::Nf(i)
            | Command::Member(i)
            | Command::Dim(i)
            | Command::Hf(i)
            | Command::Mult(i)
            | Command::Pclass(i)
            | Command::Tau(i)
            | Command::Grade2(i)
            | Command::Spread(i)
            | Command::MapCheck(i)
            | Command::Invert(i)
            | Command::Birational(i)
            | Command::Coords(i)
            | Command::Bound(i)
            | Command::Suv(i)
            | Command::Edim(i)
            | Command::LocusEqs(i)
            | Command::Vpz(i)
            | Command::Sample(i) => &i.inputs,
        }
    }
}

/// Failure classes and their exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Limit(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Limit(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Limit(_) => "resource_limit",
            CliError::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Limit(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit(_) => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SessionError> for CliError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::Algebra(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// What a run printed and how it ended.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    /// The JSON report, when the run produced one.
    pub fn report(&self) -> Option<Value> {
        serde_json::from_str(&self.stdout).ok()
    }
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let args: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(&cli)));
    let (result, inputs, limits) = match outcome {
        Ok(r) => r,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            (Err(CliError::Internal(msg)), Value::Null, Value::Null)
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let (code, result_value, error) = match &result {
        Ok(v) => (0, v.clone(), Value::Null),
        Err(e) => (
            e.exit_code(),
            Value::Null,
            json!({"kind": e.kind(), "message": e.message()}),
        ),
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cli.command.name(),
        "argv": args,
        "inputs": inputs,
        "limits": limits,
        "limits_hit": matches!(result, Err(CliError::Limit(_))),
        "result": result_value,
        "error": error,
        "timings": {"total_ms": elapsed},
    });
    let stdout = if cli.opts.text {
        render_text(&report)
    } else {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    };
    let stderr = match &result {
        Err(e) => format!("error: {}\n", e.message()),
        Ok(_) => String::new(),
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Some(Value::String(c)) = report.get("command") {
        out.push_str(&format!("command: {c}\n"));
    }
    match report.get("result") {
        Some(Value::Object(m)) => {
            if let Some(Value::String(csv)) = m.get("csv") {
                out.push_str(csv);
                out.push('\n');
                return out;
            }
            for (k, v) in m {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {shown}\n"));
            }
        }
        Some(Value::Null) | None => {}
        Some(other) => out.push_str(&format!("{other}\n")),
    }
    if let Some(Value::Object(e)) = report.get("error") {
        out.push_str(&format!(
            "error: {}\n",
            e.get("message").and_then(Value::as_str).unwrap_or("")
        ));
    }
    out
}

/// Limits from flags, then the environment, then the session, then the
/// built-in defaults.
pub fn effective_limits(opts: &Opts, file: &SessionFile) -> CliResult<Limits> {
    let base = file.limits();
    let env_pairs = match std::env::var(MAX_PAIRS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            CliError::Input(format!(
                "{MAX_PAIRS_ENV} must be a non-negative integer, got `{v}`"
            ))
        })?),
        Err(_) => None,
    };
    Ok(Limits {
        max_degree: opts.max_degree.unwrap_or(base.max_degree),
        max_pairs: opts.max_pairs.or(env_pairs).unwrap_or(base.max_pairs),
    })
}

fn digest(path: &Path) -> Option<String> {
    let bytes = std::fs::read(path).ok()?;
    Some(format!("{:x}", Sha256::digest(&bytes)))
}

fn dispatch(cli: &Cli) -> (CliResult<Value>, Value, Value) {
    let Some(path) = &cli.opts.session else {
        return (
            Err(CliError::Input("--session is required".into())),
            Value::Null,
            Value::Null,
        );
    };
    let mut inputs = json!({
        "session": path.display().to_string(),
        "sha256": digest(path),
        "map": cli.opts.map,
        "positional": cli.command.inputs(),
    });
    let file = match read_session_file(path) {
        Ok(f) => f,
        Err(e) => return (Err(e.into()), inputs, Value::Null),
    };
    inputs["field"] = json!(file.field.to_string());
    inputs["vars"] = json!(file.vars);
    let limits = match effective_limits(&cli.opts, &file) {
        Ok(l) => l,
        Err(e) => return (Err(e), inputs, Value::Null),
    };
    let limits_json = json!({"max_degree": limits.max_degree, "max_pairs": limits.max_pairs});
    let session = match file.build(limits) {
        Ok(s) => s,
        Err(e) => return (Err(e.into()), inputs, limits_json),
    };
    let result = match &session {
        AnySession::Rationals(s) => execute(cli, s),
        AnySession::Prime(s) => execute(cli, s),
    };
    (result, inputs, limits_json)
}

fn show<F: Field>(ps: &[Poly<F>]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn parse_all<F: Field>(s: &Session<F>, texts: &[String]) -> CliResult<Vec<Poly<F>>> {
    texts
        .iter()
        .map(|t| parse_poly(t, s.variety.ring()).map_err(CliError::from))
        .collect()
}

fn one_input(cmd: &Command) -> CliResult<&str> {
    match cmd.inputs() {
        [one] => Ok(one),
        other => Err(CliError::Input(format!(
            "`{}` takes exactly one positional argument, got {}",
            cmd.name(),
            other.len()
        ))),
    }
}

fn named_map<'a, F: Field>(
    cli: &Cli,
    s: &'a Session<F>,
) -> CliResult<&'a birkit_core::session::NamedMap<F>> {
    let name = cli
        .opts
        .map
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("`{}` needs --map", cli.command.name())))?;
    s.map(name).ok_or_else(|| {
        let known: Vec<&str> = s.maps.iter().map(|m| m.name.as_str()).collect();
        CliError::Input(format!(
            "no map `{name}` in the session (known: {})",
            known.join(", ")
        ))
    })
}

/// Forms from the positional arguments, or else from `--map`.
fn forms_arg<F: Field>(cli: &Cli, s: &Session<F>) -> CliResult<Vec<Poly<F>>> {
    if cli.command.inputs().is_empty() {
        Ok(named_map(cli, s)?.map.forms().to_vec())
    } else {
        parse_all(s, cli.command.inputs())
    }
}

fn degree_arg(cli: &Cli) -> CliResult<u32> {
    cli.opts
        .degree
        .ok_or_else(|| CliError::Input(format!("`{}` needs --degree", cli.command.name())))
}

fn analysis_options(cli: &Cli, s: &Session<impl Field>) -> AnalysisOptions {
    let d = AnalysisOptions::default();
    AnalysisOptions {
        cap: cli.opts.cap.or(s.options.cap),
        trials: cli.opts.trials.or(s.options.trials).unwrap_or(d.trials),
        seed: cli.opts.seed.or(s.options.seed).unwrap_or(d.seed),
        probe_points: d.probe_points,
        target_degree: cli.opts.degree,
    }
}

fn birationality_json<F: Field>(b: &Birationality<F>) -> Value {
    match b {
        Birationality::Yes {
            inverse,
            inverse_degree,
        } => json!({"verdict": "yes", "inverse": show(inverse), "inverse_degree": inverse_degree}),
        Birationality::No { reason } => json!({"verdict": "no", "reason": reason}),
        Birationality::Indeterminate { search_cap } => {
            json!({"verdict": "indeterminate", "search_cap": search_cap})
        }
    }
}

fn clear_degree_json<F: Field>(c: &ClearDegree<F>) -> Value {
    match c {
        ClearDegree::Yes { witness } => json!({"verdict": "yes", "witness": show(witness)}),
        ClearDegree::No { reason } => json!({"verdict": "no", "reason": reason}),
        ClearDegree::Unknown { trials, space_dim } => {
            json!({"verdict": "unknown", "trials": trials, "space_dim": space_dim})
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn execute<F: Field>(cli: &Cli, s: &Session<F>) -> CliResult<Value> {
    let v = &s.variety;
    let field = v.ring().field();
    Ok(match &cli.command {
        Command::Gb(i) => {
            let order = match cli.opts.order.unwrap_or(OrderArg::Grevlex) {
                OrderArg::Lex => MonomialOrder::Lex,
                OrderArg::Grevlex => MonomialOrder::GrevLex,
            };
            let ring = v.ring().with_order(order);
            let mut gens = v.ideal().generators().to_vec();
            gens.extend(parse_all(s, &i.inputs)?);
            let gens = gens
                .iter()
                .map(|g| g.to_ring_by_name(&ring))
                .collect::<Result<Vec<_>, _>>()?;
            let gb = buchberger(&Ideal::new(&ring, gens)?, order)?;
            json!({
                "order": to_value(&order),
                "basis": show(gb.elements()),
                "leading_monomials": gb.elements().iter().map(|g| g.leading_monomial().map(|m| Poly::monomial(&ring, m.clone(), field.one()).to_string())).collect::<Vec<_>>(),
                "size": gb.elements().len(),
                "unit": gb.is_unit(),
            })
        }
        Command::Nf(_) => {
            let text = one_input(&cli.command)?;
            let f = parse_poly(text, v.ring())?;
            json!({"input": f.to_string(), "normal_form": v.reduce(&f)?.to_string()})
        }
        Command::Member(_) => {
            let text = one_input(&cli.command)?;
            let f = parse_poly(text, v.ring())?;
            json!({"input": f.to_string(), "member": v.contains(&f)?})
        }
        Command::Dim(i) => {
            if i.inputs.is_empty() && cli.opts.map.is_none() {
                json!({"dim": v.dim(), "projective_dim": v.projective_dim(), "nvars": v.nvars()})
            } else {
                let forms = forms_arg(cli, s)?;
                json!({"dim": v.dim(), "quotient_dim": quotient_dim(v, &forms)?})
            }
        }
        Command::Hf(_) => {
            let h = v.hilbert_data();
            match cli.opts.degree {
                Some(d) => json!({
                    "degree": d,
                    "value": v.hilbert_function(d),
                    "ideal_value": v.ideal_hf(d),
                    "ambient_value": v.ambient_hf(d),
                }),
                None => json!({
                    "numerator": h.numerator,
                    "reduced_numerator": h.reduced,
                    "dim": h.dim,
                    "numerator_text": format_series(&h.numerator),
                    "reduced_text": format_series(&h.reduced),
                }),
            }
        }
        Command::Mult(_) => {
            let h = v.hilbert_data();
            json!({"multiplicity": h.multiplicity, "dim": h.dim, "reduced_numerator": h.reduced})
        }
        Command::Pclass(_) => {
            let forms = forms_arg(cli, s)?;
            json!({"j": forms.len(), "dim": v.dim(), "principal_class": principal_class_test(v, &forms)?})
        }
        Command::Tau(_) => {
            let forms = forms_arg(cli, s)?;
            match cli.opts.degree {
                Some(m) => {
                    let t = tau_matrix(v, &forms, m)?;
                    let rank = t.rank(field);
                    json!({
                        "m": m,
                        "rows": t.nrows(),
                        "cols": t.ncols(),
                        "rank": rank,
                        "surjective": rank == t.nrows(),
                    })
                }
                None => {
                    let sweep = tau_sweep(v, &forms, cli.opts.cap.unwrap_or(4))?;
                    let surjective = matches!(sweep, TauSweep::Surjective { .. });
                    json!({"sweep": to_value(&sweep), "surjective": surjective})
                }
            }
        }
        Command::Grade2(_) => {
            let forms = forms_arg(cli, s)?;
            json!({"grade_at_least_2": grade_at_least_2(v, &forms)?})
        }
        Command::Spread(_) => {
            let forms = forms_arg(cli, s)?;
            let l = analytic_spread(v, &forms)?;
            json!({"analytic_spread": l, "dim": v.dim(), "maximal": l == v.dim()})
        }
        Command::MapCheck(_) => {
            let m = named_map(cli, s)?;
            let opts = analysis_options(cli, s);
            let verdict = bir_xd_membership(&m.map, &opts)?;
            json!({
                "map": m.name,
                "degree": verdict.degree,
                "well_defined": verdict.well_defined,
                "dominant": verdict.dominant,
                "clear_degree": clear_degree_json(&verdict.clear_degree),
                "birational": birationality_json(&verdict.birational),
                "in_bir_xd": verdict.in_bir_xd,
                "diagnostics": verdict.diagnostics,
                "options": to_value(&opts),
            })
        }
        Command::Invert(_) => {
            let m = named_map(cli, s)?;
            let cap = cli
                .opts
                .cap
                .or(s.options.cap)
                .unwrap_or_else(|| default_inverse_cap(&m.map));
            let found = find_inverse(&m.map, cap)?;
            let stored = match &m.inverse {
                Some(g) => Some(verify_inverse_pair(&m.map, g)?),
                None => None,
            };
            match found {
                Some(inv) => json!({
                    "found": true,
                    "cap": cap,
                    "inverse": show(inv.map.forms()),
                    "inverse_degree": inv.degree,
                    "solution_dim": inv.solution_dim,
                    "verified": verify_inverse_pair(&m.map, &inv.map)?,
                    "stored_inverse_verified": stored,
                }),
                None => json!({"found": false, "cap": cap, "stored_inverse_verified": stored}),
            }
        }
        Command::Birational(_) => {
            let m = named_map(cli, s)?;
            let b = is_birational(&m.map, &analysis_options(cli, s))?;
            let mut out = Map::new();
            out.insert("map".into(), json!(m.name));
            out.insert("birational".into(), json!(b.label()));
            if let Value::Object(detail) = birationality_json(&b) {
                for (k, val) in detail {
                    if k != "verdict" {
                        out.insert(k, val);
                    }
                }
            }
            Value::Object(out)
        }
        Command::Coords(_) => {
            let m = named_map(cli, s)?;
            let c = canonical_coordinates(&m.map)?;
            let monos = v.gb().standard_monomials(m.map.degree());
            json!({
                "map": m.name,
                "degree": m.map.degree(),
                "s": monos.len(),
                "standard_monomials": monos.iter().map(|u| Poly::monomial(v.ring(), u.clone(), field.one()).to_string()).collect::<Vec<_>>(),
                "coordinates": c.iter().map(|x| field.format(x)).collect::<Vec<_>>(),
            })
        }
        Command::Bound(_) => {
            let d = match (cli.opts.degree, &cli.opts.map) {
                (Some(d), _) => d,
                (None, Some(_)) => named_map(cli, s)?.map.degree(),
                (None, None) => {
                    return Err(CliError::Input("`bound` needs --degree or --map".into()))
                }
            };
            to_value(&inverse_degree_bound(v, d)?)
        }
        Command::Suv(_) => {
            let m = named_map(cli, s)?;
            match suv_check(&m.map) {
                Ok(r) => to_value(&r),
                Err(Error::NotApplicable(reason)) => json!({"applicable": false, "reason": reason}),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Edim(_) => to_value(&edim_bound(v, degree_arg(cli)?)?),
        Command::LocusEqs(_) => {
            let text = one_input(&cli.command)?;
            let d = degree_arg(cli)?;
            let template = parse_template(v.ring().field().clone(), text)?;
            let t = CompositionTemplate::new(template, v.ideal().clone(), d)?;
            let eqs = locus_equations(&t)?;
            json!({
                "template": t.p.to_string(),
                "arg_degree": d,
                "parameters": eqs.parameter_ring().vars(),
                "monomials": eqs.parameters.monomials.iter().map(|u| Poly::monomial(v.ring(), u.clone(), field.one()).to_string()).collect::<Vec<_>>(),
                "equations": show(&eqs.equations),
                "count": eqs.equations.len(),
            })
        }
        Command::Vpz(_) => {
            let d = degree_arg(cli)?;
            let basis = vpz_basis(v.ideal(), d)?;
            let monos = monomials_of_degree(v.ring(), d);
            json!({
                "degree": d,
                "dimension": basis.len(),
                "projective_dimension": basis.len() as i64 - 1,
                "monomials": monos.iter().map(|u| Poly::monomial(v.ring(), u.clone(), field.one()).to_string()).collect::<Vec<_>>(),
                "basis": basis.iter().map(|b| b.iter().map(|x| field.format(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "forms": basis.iter().map(|b| Poly::from_coefficients(v.ring(), &monos, b).to_string()).collect::<Vec<_>>(),
            })
        }
        Command::Sample(_) => {
            let locus: Locus = one_input(&cli.command)?.parse()?;
            let d = cli.opts.degree.unwrap_or(1);
            let trials = cli.opts.trials.or(s.options.trials).unwrap_or(1000);
            let prime = cli.opts.prime.unwrap_or(101);
            let seed = cli.opts.seed.or(s.options.seed).unwrap_or(0);
            let r: DensityReport = sample_locus(v, locus, d, trials, prime, seed, cli.opts.jobs)?;
            json!({
                "locus": r.locus.to_string(),
                "prime": r.prime,
                "trials": r.trials,
                "hits": r.hits,
                "seed": r.seed,
                "degree": d,
                "fraction": r.fraction(),
                "csv": format!("{}\n{}", DensityReport::CSV_HEADER, r.csv_row()),
            })
        }
    })
}

/// Parses a template in the variables it mentions (`z1`, `z2`, ...),
/// numbered from one.
fn parse_template<F: Field>(field: F, text: &str) -> CliResult<Poly<F>> {
    let mut arity = 0usize;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'z' && (i == 0 || !(bytes[i - 1] as char).is_ascii_alphanumeric()) {
            let digits: String = text[i + 1..]
                .chars()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            if let Ok(k) = digits.parse::<usize>() {
                arity = arity.max(k);
            }
        }
        i += 1;
    }
    let names: Vec<String> = (1..=arity.max(1)).map(|k| format!("z{k}")).collect();
    let ring = PolyRing::new(field, &names, MonomialOrder::GrevLex)?;
    Ok(parse_poly(text, &ring)?)
}

/// `run` with the process arguments, printing and returning the exit code.
pub fn main_with_args() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let out = run(&args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
