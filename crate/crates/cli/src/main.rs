use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use rnc_bundles::bundle::{analyze, immersion_report, smooth_image, BundleKind};
use rnc_bundles::forms::{
    decompose, simultaneous_apolar, squarefree_sweep, waring_certificate, BinaryForm, DualForm,
};
use rnc_bundles::io::{CenterJson, DualFormJson, FormJson, SimultaneousJson, SplittingReportJson, WaringTermJson};
use rnc_bundles::strata::{
    construct_special_center, family_dim, formula_rows, generic_splitting, summarize, survey_generic,
    verify_equivalence, StratumSpec,
};
use rnc_bundles::{
    AlgebraError, BundleError, Field, FieldError, FieldTag, FormError, PrimeField, Rationals, StrataError, SURVEY_PRIME,
};

#[derive(Parser, Debug)]
#[command(name = "rnc-bundles", version, about = "Bundle splitting of projected rational normal curves")]
struct Cli {
    #[command(flatten)]
    session: Session,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Session {
    /// Base field: "Q" or "Fp:<prime>".
    #[arg(long, global = true)]
    field: Option<String>,
    /// Master random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of trials (survey; construct runs a round-trip check when set).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Splitting types, ranks and twist ladders of a projection center.
    Analyze {
        /// Center JSON (or the output of `construct`).
        center: PathBuf,
    },
    /// Build a center in a prescribed stratum.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "delta", required_unless_present = "delta")]
        rho: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<BundleKind>,
    },
    /// Waring rank or decomposition of a form, or common apolar forms of several.
    Waring {
        form: PathBuf,
        #[arg(long, conflicts_with = "decompose")]
        rank: bool,
        #[arg(long)]
        decompose: bool,
    },
    /// Closed-form generic splittings and codimensions of the strata.
    Formulas {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with_all = ["delta", "all"])]
        rho: Option<usize>,
        #[arg(long, conflicts_with = "all")]
        delta: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Histogram of splitting types of random centers.
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

fn parse_kind(s: &str) -> Result<BundleKind, String> {
    match s {
        "normal" => Ok(BundleKind::Normal),
        "tangent" => Ok(BundleKind::Tangent),
        _ => Err(format!("expected \"normal\" or \"tangent\", got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ErrorKind {
    Usage,
    Validation,
    Computation,
}

impl ErrorKind {
    fn code(self) -> u8 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Validation => 3,
            ErrorKind::Computation => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Validation => "validation",
            ErrorKind::Computation => "computation",
        }
    }
}

#[derive(Debug)]
struct CliError {
    kind: ErrorKind,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Usage, message: message.into() }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Validation, message: message.into() }
    }

    fn computation(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Computation, message: message.into() }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        Self::validation(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        Self::validation(e.to_string())
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        match e {
            FormError::RootsOutsideField { .. } | FormError::NotApolar | FormError::NotSquarefree => {
                Self::computation(e.to_string())
            }
            _ => Self::validation(e.to_string()),
        }
    }
}

impl From<BundleError> for CliError {
    fn from(e: BundleError) -> Self {
        match e {
            BundleError::InvalidCenter(_) => Self::validation(e.to_string()),
            BundleError::Form(f) => f.into(),
            _ => Self::computation(e.to_string()),
        }
    }
}

impl From<StrataError> for CliError {
    fn from(e: StrataError) -> Self {
        match e {
            StrataError::Bundle(b) => b.into(),
            StrataError::Form(f) => f.into(),
            StrataError::RetryBudgetExhausted { .. } => Self::computation(e.to_string()),
            _ => Self::validation(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("malformed JSON in {}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::usage(format!("not a {what}: {e}")))
}

/// Work that runs over whichever field the session selects.
trait FieldTask {
    fn run<F: Field>(&self, field: &F) -> Result<Output, CliError>;
}

fn with_field<T: FieldTask>(tag: FieldTag, task: &T) -> Result<Output, CliError> {
    match tag {
        FieldTag::Rational => task.run(&Rationals),
        FieldTag::Prime(p) => task.run(&PrimeField::new(p)?),
    }
}

fn resolve_field(flag: &Option<String>, fallback: &str) -> Result<FieldTag, CliError> {
    Ok(flag.as_deref().unwrap_or(fallback).parse::<FieldTag>()?)
}

fn splitting_line(r: &SplittingReportJson) -> String {
    let parts: Vec<String> = r.summands.iter().map(|x| x.to_string()).collect();
    let ladder: Vec<String> = r.h_ladder.iter().map(|x| x.to_string()).collect();
    format!("{:<8} ({})  rank {}  h = [{}]", r.kind.to_string(), parts.join(","), r.rank, ladder.join(", "))
}

struct Analyze {
    center: CenterJson,
}

impl FieldTask for Analyze {
    fn run<F: Field>(&self, field: &F) -> Result<Output, CliError> {
        let center = self.center.to_center(field)?;
        let report = immersion_report(&center);
        if !report.immersive {
            return Err(BundleError::NotImmersive {
                gcd: report.gcd.to_string(),
                cusps: report.cusp_labels(field),
            }
            .into());
        }
        let [normal, tangent] = analyze(&center)?;
        let (normal, tangent) = (SplittingReportJson::from_analysis(&normal), SplittingReportJson::from_analysis(&tangent));
        let smooth = smooth_image(&center);
        let json = json!({
            "n": center.n(),
            "k": center.k(),
            "field": field.tag().to_string(),
            "ordinary": true,
            "smooth": smooth,
            "normal": normal,
            "tangent": tangent,
        });
        let smooth_text = match smooth {
            Some(true) => "smooth",
            Some(false) => "singular (ordinary)",
            None => "unknown for k >= 3",
        };
        let text = format!(
            "center n = {}, k = {} over {}\nimage: {smooth_text}\n{}\n{}\n",
            center.n(),
            center.k(),
            field.tag(),
            splitting_line(&normal),
            splitting_line(&tangent)
        );
        Ok(Output { json, text })
    }
}

struct Construct {
    spec: StratumSpec,
    seed: u64,
    trials: Option<usize>,
}

impl FieldTask for Construct {
    fn run<F: Field>(&self, field: &F) -> Result<Output, CliError> {
        let spec = &self.spec;
        let predicted = generic_splitting(spec)?;
        let (center, phi) = construct_special_center(field, spec, self.seed)?;
        let [normal, tangent] = analyze(&center)?;
        let computed = match spec.kind {
            BundleKind::Normal => &normal.splitting,
            BundleKind::Tangent => &tangent.splitting,
        };
        let mut json = json!({
            "spec": spec,
            "seed": self.seed,
            "center": CenterJson::from_center(&center),
            "phi": phi.generators.iter().map(DualFormJson::from_dual).collect::<Vec<_>>(),
            "predicted": predicted.summands,
            "agreement": computed == &predicted,
            "normal": SplittingReportJson::from_analysis(&normal),
            "tangent": SplittingReportJson::from_analysis(&tangent),
        });
        let mut text = format!(
            "{} stratum n = {}, k = {}, {} = {} (seed {})\npredicted {}  computed {}\n",
            spec.kind,
            spec.n,
            spec.k,
            spec.symbol(),
            spec.multiplicity,
            self.seed,
            predicted,
            computed
        );
        for (i, p) in center.points().iter().enumerate() {
            let coords: Vec<String> = p.coords().iter().map(|c| field.format(c)).collect();
            let _ = writeln!(text, "point {i}: [{}]", coords.join(", "));
        }
        for g in &phi.generators {
            let _ = writeln!(text, "phi: {}", g.as_poly().display_with("d0", "d1"));
        }
        if let Some(trials) = self.trials {
            let summary = summarize(spec, &verify_equivalence(field, spec, trials, self.seed)?);
            let _ = writeln!(
                text,
                "round trip: {}/{} agree, {} quarantined",
                summary.agreements,
                summary.trials,
                summary.quarantined_seeds.len()
            );
            json["round_trip"] = to_value(&summary);
        }
        Ok(Output { json, text })
    }
}

enum WaringMode {
    Rank,
    Decompose,
}

struct Waring {
    forms: Vec<FormJson>,
    simultaneous: bool,
    mode: WaringMode,
}

fn terms_json<F: Field>(field: &F, f: &BinaryForm<F>, phi: &DualForm<F>) -> Result<Vec<WaringTermJson>, CliError> {
    Ok(decompose(f, phi)?.iter().map(|t| WaringTermJson::from_term(field, t)).collect())
}

impl FieldTask for Waring {
    fn run<F: Field>(&self, field: &F) -> Result<Output, CliError> {
        let forms = self.forms.iter().map(|j| j.to_form(field)).collect::<Result<Vec<_>, _>>()?;
        if !self.simultaneous {
            let f = &forms[0];
            let cert = waring_certificate(f)?;
            let witness = cert.witness.as_ref().map(DualFormJson::from_dual);
            let mut json = json!({
                "n": f.degree(),
                "rank": cert.rank,
                "first_apolar_degree": cert.first_apolar_degree,
                "witness": witness,
            });
            let mut text = format!("Waring rank {} (first apolar degree {})\n", cert.rank, cert.first_apolar_degree);
            if let Some(w) = &witness {
                let _ = writeln!(text, "squarefree apolar form: {}", w.display);
            }
            if let WaringMode::Decompose = self.mode {
                let phi = cert
                    .witness
                    .ok_or_else(|| CliError::computation("no squarefree apolar witness found by the sweep"))?;
                let terms = terms_json(field, f, &phi)?;
                for t in &terms {
                    let _ = writeln!(text, "  {} * ({} x0 + {} x1)^{}", t.coefficient, t.linear_form[0], t.linear_form[1], t.power);
                }
                json["decomposition"] = to_value(&terms);
            }
            return Ok(Output { json, text });
        }
        let n = forms[0].degree();
        let mut found = None;
        for e in 1..=n {
            let basis = simultaneous_apolar(&forms, e)?;
            if let Some(w) = squarefree_sweep(&basis) {
                found = Some((e, basis, w));
                break;
            }
        }
        let (e, basis, witness) = found.ok_or_else(|| CliError::computation("no common squarefree apolar form"))?;
        let mut json = json!({
            "forms": forms.len(),
            "n": n,
            "degree": e,
            "apolar_basis": basis.iter().map(DualFormJson::from_dual).collect::<Vec<_>>(),
            "witness": DualFormJson::from_dual(&witness),
        });
        let mut text = format!(
            "{} forms of degree {n}: common squarefree apolar form of degree {e}: {}\n",
            forms.len(),
            witness.as_poly().display_with("d0", "d1")
        );
        if let WaringMode::Decompose = self.mode {
            let mut all = Vec::new();
            for (i, f) in forms.iter().enumerate() {
                let terms = terms_json(field, f, &witness)?;
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{} * ({} x0 + {} x1)^{}", t.coefficient, t.linear_form[0], t.linear_form[1], t.power))
                    .collect();
                let _ = writeln!(text, "f{}: {}", i + 1, parts.join(" + "));
                all.push(terms);
            }
            json["decompositions"] = to_value(&all);
        }
        Ok(Output { json, text })
    }
}

fn formulas(n: usize, k: usize, rho: Option<usize>, delta: Option<usize>) -> Result<Output, CliError> {
    let mut rows = Vec::new();
    let mut specs = Vec::new();
    match (rho, delta) {
        (Some(r), _) => specs.push(StratumSpec::normal(n, k, r)?),
        (_, Some(d)) => specs.push(StratumSpec::tangent(n, k, d)?),
        _ => {
            if k == 0 || k + 2 >= n {
                return Err(StrataError::Bounds(format!("need 1 <= k < n - 2, got n = {n}, k = {k}")).into());
            }
            for kind in [BundleKind::Normal, BundleKind::Tangent] {
                specs.extend(formula_rows(kind, n, k).into_iter().map(|(s, _, _)| s));
            }
        }
    }
    let mut text = format!("{:<8} {:>5}  {:<24} {:>5} {:>7}  constructible\n", "kind", "index", "splitting", "codim", "family");
    for spec in specs {
        let splitting = generic_splitting(&spec)?;
        let codim = rnc_bundles::stratum_codim(&spec);
        let constructible = spec.check_constructible().is_ok();
        let _ = writeln!(
            text,
            "{:<8} {:>5}  {:<24} {:>5} {:>7}  {}",
            spec.kind.to_string(),
            format!("{}={}", if spec.kind == BundleKind::Normal { "ρ" } else { "δ" }, spec.multiplicity),
            splitting.label(),
            codim,
            family_dim(&spec),
            if constructible { "yes" } else { "no" }
        );
        let mut row = json!({
            "kind": spec.kind,
            "splitting": splitting.summands,
            "codim": codim,
            "family_dim": family_dim(&spec),
            "constructible": constructible,
        });
        row[spec.symbol()] = json!(spec.multiplicity);
        rows.push(row);
    }
    Ok(Output { json: json!({ "n": n, "k": k, "rows": rows }), text })
}

struct Survey {
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
}

impl FieldTask for Survey {
    fn run<F: Field>(&self, field: &F) -> Result<Output, CliError> {
        let report = survey_generic(field, self.n, self.k, self.trials, self.seed)?;
        let mut text = format!(
            "{} random centers, n = {}, k = {} over {} (seed {})\n{} degenerate, {} non-immersive, {} invariant violations\n",
            report.trials,
            report.n,
            report.k,
            report.field,
            report.seed,
            report.degenerate,
            report.non_immersive,
            report.violations.len()
        );
        for (kind, hist) in [(BundleKind::Normal, &report.normal), (BundleKind::Tangent, &report.tangent)] {
            let _ = writeln!(text, "{kind}:");
            for (label, count) in hist {
                let _ = writeln!(text, "  {label:<24} {count}");
            }
        }
        Ok(Output { json: to_value(&report), text })
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let s = &cli.session;
    match cli.command {
        Command::Analyze { center } => {
            let mut v = read_json(&center)?;
            if let Some(inner) = v.get("center") {
                v = inner.clone();
            }
            let center: CenterJson = from_value(v, "center file")?;
            let tag = resolve_field(&s.field, &center.field)?;
            with_field(tag, &Analyze { center })
        }
        Command::Construct { n, k, rho, delta, kind } => {
            let spec = match (rho, delta) {
                (Some(r), None) => StratumSpec::normal(n, k, r)?,
                (None, Some(d)) => StratumSpec::tangent(n, k, d)?,
                _ => return Err(CliError::usage("give exactly one of --rho and --delta")),
            };
            if kind.is_some_and(|kd| kd != spec.kind) {
                return Err(CliError::usage("--rho goes with --kind normal, --delta with --kind tangent"));
            }
            let tag = resolve_field(&s.field, "Q")?;
            with_field(tag, &Construct { spec, seed: s.seed, trials: s.trials })
        }
        Command::Waring { form, rank: _, decompose } => {
            let v = read_json(&form)?;
            let mode = if decompose { WaringMode::Decompose } else { WaringMode::Rank };
            let (task, file_field) = if v.get("forms").is_some() {
                let sim: SimultaneousJson = from_value(v, "simultaneous form file")?;
                if sim.forms.is_empty() {
                    return Err(CliError::validation("no forms given"));
                }
                (Waring { forms: sim.forms, simultaneous: true, mode }, sim.field)
            } else {
                let f: FormJson = from_value(v, "form file")?;
                (Waring { forms: vec![f], simultaneous: false, mode }, None)
            };
            let tag = resolve_field(&s.field, file_field.as_deref().unwrap_or("Q"))?;
            with_field(tag, &task)
        }
        Command::Formulas { n, k, rho, delta, all: _ } => formulas(n, k, rho, delta),
        Command::Survey { n, k } => {
            let tag = resolve_field(&s.field, &format!("Fp:{SURVEY_PRIME}"))?;
            with_field(tag, &Survey { n, k, trials: s.trials.unwrap_or(1000), seed: s.seed })
        }
    }
}

fn report_error(e: &CliError) -> ExitCode {
    let obj = json!({ "error": { "kind": e.kind.name(), "message": e.message } });
    eprintln!("{obj}");
    ExitCode::from(e.kind.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report_error(&CliError::usage(e.render().to_string().trim()));
        }
    };
    let (as_json, out) = (cli.session.json, cli.session.out.clone());
    let output = match run(cli) {
        Ok(o) => o,
        Err(e) => return report_error(&e),
    };
    let body = if as_json {
        serde_json::to_string_pretty(&output.json).expect("serializable") + "\n"
    } else {
        output.text
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, body) {
                return report_error(&CliError::usage(format!("cannot write {}: {e}", path.display())));
            }
        }
        None => print!("{body}"),
    }
    ExitCode::SUCCESS
}
