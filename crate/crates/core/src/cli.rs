//! The `bihh` command line: loads presentations and 2-categories, runs checks, emits reports.
//!
//! Exit codes: 0 pass, 1 fail with a counterexample, 2 inconclusive within budget, 3 input error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bihh::{simplicial_diagram, verify_bdelta_structure, Bihh, TruncatedDiagram};
use crate::computad::{check_extension, q_delta2, ExtensionData};
use crate::error::{Error, Result};
use crate::morita::{
    euler, is_invertible, trace, verify_adj_structure, verify_adjend_structure, AdjunctionDatum, Invertibility,
    StructureReport,
};
use crate::oracle::{compare_routes, pseudocolimit};
use crate::present::{
    CatPresentation, Certificate, EqualityVerdict, FiniteCategory, FiniteCategoryFile, NormalizeOutcome, Order, PresentationFile,
    SearchBudget, WeightInvariant, Witness, Word, WordSpec,
};
use crate::shadows::{
    check_cocone, check_shadow, strictify, twist_components, unstrictify, CheckReport, CoconeFile, Counterexample,
    ShadowFile, Status,
};
use crate::twocat::{catalog, Bound, CatalogName, TwoCatFile, TwoCatPresentation};

#[derive(Parser, Debug)]
#[command(name = "bihh", version, about = "Trace categories of finitely presented strict 2-categories")]
struct Cli {
    /// Longest word a search may visit.
    #[arg(long, env = "BIHH_BUDGET_LENGTH", default_value_t = 10, global = true)]
    budget_length: usize,
    /// Rewrite steps per search.
    #[arg(long, env = "BIHH_BUDGET_STEPS", default_value_t = 20000, global = true)]
    budget_steps: usize,
    /// Elements per enumeration.
    #[arg(long, env = "BIHH_BUDGET_ENUM", default_value_t = 5000, global = true)]
    budget_enum: usize,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Example {
    Bn,
    Bnn,
    Bdelta,
    Adj,
    Adjend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Presentation,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a word.
    Normalize {
        #[command(flatten)]
        source: PresSource,
        /// Generator labels separated by whitespace.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Object of the word; required when the word is empty.
        #[arg(long)]
        from: Option<String>,
    },
    /// Decide whether two parallel words are equal.
    Equal {
        #[command(flatten)]
        source: PresSource,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[arg(long)]
        from: Option<String>,
    },
    /// Isomorphism classes and automorphism generators.
    Skeleton {
        #[command(flatten)]
        source: PresSource,
        /// Print the skeleton as a DOT digraph.
        #[arg(long)]
        dot: bool,
    },
    /// The truncated presentation of biHH(B).
    Bihh {
        #[command(flatten)]
        source: TwoSource,
        #[arg(long, value_enum, default_value_t = Emit::Presentation)]
        emit: Emit,
    },
    /// The pseudocolimit of the truncated cyclic bar diagram, as a presentation file.
    OracleColimit {
        #[command(flatten)]
        source: DiagramSource,
        /// Compare the skeleta of biHH(B) and both colimit routes instead.
        #[arg(long)]
        compare: bool,
    },
    /// Check the shadow axioms.
    VerifyShadow {
        #[command(flatten)]
        setting: ShadowSetting,
        #[arg(long)]
        shadow: PathBuf,
    },
    /// Check the cocone conditions.
    VerifyCocone {
        #[command(flatten)]
        setting: ShadowSetting,
        #[arg(long)]
        cocone: PathBuf,
    },
    /// Turn a cocone into a shadow.
    Strictify {
        #[command(flatten)]
        setting: ShadowSetting,
        #[arg(long)]
        cocone: PathBuf,
    },
    /// Turn a shadow into a cocone.
    Unstrictify {
        #[command(flatten)]
        setting: ShadowSetting,
        #[arg(long)]
        shadow: PathBuf,
    },
    /// Check that a shadow's twists extend the diagram to its cone point.
    CheckExtension {
        #[command(flatten)]
        setting: ShadowSetting,
        /// Shadow file supplying `⟨−⟩` on level 0 and `θ` on level 1.
        #[arg(long)]
        theta: PathBuf,
        /// Components of the 2-arrows; identities when omitted.
        #[arg(long)]
        fdata: Option<PathBuf>,
    },
    /// The Euler class of the generating adjunction, with invertibility.
    Euler {
        #[command(flatten)]
        source: TwoSource,
    },
    /// The trace of an endo-1-cell along the generating adjunction.
    Trace {
        #[command(flatten)]
        source: TwoSource,
        /// Endo-1-cell at the source of `f`, as whitespace-separated labels.
        #[arg(long, default_value = "")]
        q: String,
        /// Power of the full turn applied at the source.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Structural verification of a worked example.
    CheckExample {
        #[arg(value_enum)]
        example: Example,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Re-verify a replay payload from an earlier report.
    Replay { file: PathBuf },
}

#[derive(Args, Debug, Clone)]
struct PresSource {
    /// Presentation file.
    #[arg(long, conflicts_with_all = ["builtin", "two_cat"])]
    presentation: Option<PathBuf>,
    #[command(flatten)]
    two: TwoSource,
}

#[derive(Args, Debug, Clone)]
struct TwoSource {
    /// Catalog 2-category, such as `adj`, `bn` or `sigmaab:2`.
    #[arg(long, visible_alias = "catalog", conflicts_with = "two_cat")]
    builtin: Option<String>,
    /// 2-category file.
    #[arg(long = "two-cat")]
    two_cat: Option<PathBuf>,
    /// Degree bound on endo-1-cells.
    #[arg(long, default_value_t = 3)]
    degree: usize,
}

#[derive(Args, Debug, Clone)]
struct DiagramSource {
    #[arg(long, visible_alias = "catalog", conflicts_with = "diagram")]
    builtin: Option<String>,
    /// 2-category file whose diagram is taken.
    #[arg(long, visible_alias = "two-cat")]
    diagram: Option<PathBuf>,
    /// Length bound on the 1-cells in the diagram.
    #[arg(long, default_value_t = 2)]
    length: usize,
}

#[derive(Args, Debug, Clone)]
struct ShadowSetting {
    #[command(flatten)]
    source: DiagramSource,
    /// Finite category the shadow or cocone takes values in.
    #[arg(long)]
    target: PathBuf,
}

/// A self-contained claim that `replay` re-verifies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Replay {
    /// `witness` rewrites `from` into `to`.
    Witness { presentation: PresentationFile, from: WordSpec, to: WordSpec, witness: Witness },
    /// `certificate` separates `left` and `right`.
    Distinct {
        presentation: PresentationFile,
        left: WordSpec,
        right: WordSpec,
        certificate: Certificate,
        /// Rebuilds the models and normalizers a plain presentation file cannot carry.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        source: Option<TraceSource>,
    },
    /// The two paths of `counterexample` disagree in `target`.
    Paths { target: FiniteCategoryFile, counterexample: Counterexample },
    /// Running `argv` again fails. Used where no smaller certificate exists.
    Rerun { argv: Vec<String> },
}

/// A trace category named by its 2-category and degree bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSource {
    pub two_category: TwoCatFile,
    pub degree: usize,
}

struct Outcome {
    status: Status,
    json: Value,
    text: String,
}

impl Outcome {
    fn new(status: Status, json: Value, text: String) -> Self {
        Outcome { status, json, text }
    }

    /// An artifact printed as-is in text mode.
    fn emit(body: String, json: Value) -> Self {
        Outcome { status: Status::Pass, json, text: body }
    }
}

fn tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Inconclusive => "inconclusive",
    }
}

fn exit_code(s: Status) -> i32 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Inconclusive => 2,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => 2,
        Error::Contract(_) => 1,
        _ => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Malformed(_) => "malformed",
        Error::Precondition(_) => "precondition",
        Error::Budget(_) => "budget",
        Error::Lookup(_) => "lookup",
        Error::Validation(_) => "validation",
        Error::Contract(_) => "contract",
    }
}

/// Runs one command and returns its exit code; reports go to stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, err) = run_captured(args);
    print!("{out}");
    eprint!("{err}");
    code
}

/// [`run`] with stdout and stderr returned as strings.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let s = e.render().to_string();
            return if code == 0 { (0, s, String::new()) } else { (code, String::new(), s) };
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok(o) => {
            let out = match format {
                Format::Text => ensure_newline(o.text),
                Format::Json => {
                    let mut v = o.json;
                    if let Value::Object(m) = &mut v {
                        m.insert("status".into(), json!(tag(o.status)));
                    }
                    ensure_newline(serde_json::to_string_pretty(&v).unwrap_or_default())
                }
            };
            (exit_code(o.status), out, String::new())
        }
        Err(e) => {
            let code = error_code(&e);
            match format {
                Format::Text => (code, String::new(), format!("error: {e}\n")),
                Format::Json => {
                    let v = json!({"status": "error", "kind": error_kind(&e), "message": e.to_string()});
                    (code, ensure_newline(serde_json::to_string_pretty(&v).unwrap_or_default()), String::new())
                }
            }
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        Error::Malformed(format!("{}: at `{at}`: {}", path.display(), e.inner()))
    })
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}

fn two_category(builtin: &Option<String>, file: &Option<PathBuf>) -> Result<TwoCatPresentation> {
    match (builtin, file) {
        (Some(name), _) => catalog(&name.parse::<CatalogName>()?),
        (None, Some(path)) => TwoCatPresentation::from_file(&read_json::<TwoCatFile>(path)?),
        (None, None) => Err(Error::Precondition("name a 2-category with --builtin or a file".into())),
    }
}

enum Loaded {
    Plain(CatPresentation),
    Trace(Box<Bihh>),
}

impl Loaded {
    fn presentation(&self) -> &CatPresentation {
        match self {
            Loaded::Plain(p) => p,
            Loaded::Trace(b) => b.presentation(),
        }
    }

    fn source(&self, degree: usize) -> Option<TraceSource> {
        match self {
            Loaded::Plain(_) => None,
            Loaded::Trace(b) => Some(TraceSource { two_category: b.two_category().to_file(), degree }),
        }
    }
}

fn load(s: &PresSource, budget: &SearchBudget) -> Result<Loaded> {
    if let Some(path) = &s.presentation {
        return Ok(Loaded::Plain(CatPresentation::from_file(&read_json::<PresentationFile>(path)?)?));
    }
    let b = two_category(&s.two.builtin, &s.two.two_cat)?;
    Ok(Loaded::Trace(Box::new(Bihh::with_degree(&b, s.two.degree, budget)?)))
}

fn parse_word(p: &CatPresentation, text: &str, from: Option<&str>) -> Result<Word> {
    let labels: Vec<&str> = text.split_whitespace().collect();
    p.word_from_labels(from, &labels)
}

fn diagram(s: &DiagramSource, budget: &SearchBudget) -> Result<(TwoCatPresentation, TruncatedDiagram)> {
    let b = two_category(&s.builtin, &s.diagram)?;
    let d = simplicial_diagram(&b, Bound::length(0, s.length), budget)?;
    Ok((b, d))
}

fn execute(cli: Cli) -> Result<Outcome> {
    let budget = SearchBudget::new(cli.budget_length, cli.budget_steps, cli.budget_enum)?;
    let b = &budget;
    match cli.command {
        Command::Normalize { source, word, from } => {
            let l = load(&source, b)?;
            let p = l.presentation();
            let w = parse_word(p, &word, from.as_deref())?;
            Ok(match p.normalize(&w, b)? {
                NormalizeOutcome::Normal(n) => Outcome::new(
                    Status::Pass,
                    json!({"word": WordSpec::of(p, &w), "normal_form": WordSpec::of(p, &n)}),
                    format!("normal form: {}", p.display_word(&n)),
                ),
                NormalizeOutcome::Unknown { best, coverage } => Outcome::new(
                    Status::Inconclusive,
                    json!({"word": WordSpec::of(p, &w), "best": WordSpec::of(p, &best), "coverage": coverage}),
                    format!("no normal form within budget; shortest seen: {}", p.display_word(&best)),
                ),
            })
        }
        Command::Equal { source, left, right, from } => {
            let l = load(&source, b)?;
            let p = l.presentation();
            let (x, y) = (parse_word(p, &left, from.as_deref())?, parse_word(p, &right, from.as_deref())?);
            let (lx, ly) = (WordSpec::of(p, &x), WordSpec::of(p, &y));
            Ok(match p.equal(&x, &y, b)? {
                EqualityVerdict::Equal(witness) => {
                    let text = format!("equal: {} steps", witness.len());
                    let replay = Replay::Witness { presentation: p.to_file(), from: lx, to: ly, witness };
                    Outcome::new(Status::Pass, json!({"verdict": "equal", "replay": replay}), text)
                }
                EqualityVerdict::Distinct(certificate) => {
                    let text = format!("distinct: {}", describe_certificate(&certificate));
                    let replay = Replay::Distinct {
                        presentation: p.to_file(),
                        left: lx,
                        right: ly,
                        certificate,
                        source: l.source(source.two.degree),
                    };
                    Outcome::new(Status::Fail, json!({"verdict": "distinct", "replay": replay}), text)
                }
                EqualityVerdict::Unknown(coverage) => Outcome::new(
                    Status::Inconclusive,
                    json!({"verdict": "unknown", "coverage": coverage}),
                    format!("unknown after {} states", coverage.states),
                ),
            })
        }
        Command::Skeleton { source, dot } => {
            let l = load(&source, b)?;
            let p = l.presentation();
            let r = p.skeleton(b)?;
            let undecided = r.classes.iter().any(|c| c.automorphisms.iter().any(|a| a.order == Order::Unknown));
            let status = if undecided { Status::Inconclusive } else { Status::Pass };
            let text = if dot { r.to_dot(p) } else { skeleton_text(p, &r) };
            let mut json = to_json(&r);
            if dot {
                json = json!({"dot": r.to_dot(p)});
            }
            Ok(Outcome::new(status, json, text))
        }
        Command::Bihh { source, emit } => {
            let two = two_category(&source.builtin, &source.two_cat)?;
            let h = Bihh::with_degree(&two, source.degree, b)?;
            Ok(match emit {
                Emit::Presentation => {
                    let f = h.presentation().to_file();
                    Outcome::emit(pretty(&f), json!({"presentation": f}))
                }
                Emit::Dot => Outcome::emit(h.to_dot(), json!({"dot": h.to_dot()})),
            })
        }
        Command::OracleColimit { source, compare } => {
            let (two, d) = diagram(&source, b)?;
            if compare {
                let h = Bihh::new(&two, Bound::length(0, source.length), b)?;
                let c = compare_routes(&h, &d, b)?;
                let status = if c.agree() { Status::Pass } else { Status::Fail };
                let text = format!(
                    "{}: {} classes in biHH, {} in the pseudocolimit, {} in the localization",
                    if c.agree() { "routes agree" } else { "routes disagree" },
                    c.presentation.len(),
                    c.pseudocolimit.len(),
                    c.grothendieck.len()
                );
                let mut json = to_json(&c);
                if !c.agree() {
                    json["replay"] = to_json(&rerun_argv(&cli_args(&cli_budget(b), "oracle-colimit", &source, &["--compare"])));
                }
                return Ok(Outcome::new(status, json, text));
            }
            let f = pseudocolimit(&d, b)?.to_file();
            Ok(Outcome::emit(pretty(&f), json!({"presentation": f})))
        }
        Command::VerifyShadow { setting, shadow } => {
            let (_, d, t) = shadow_setting(&setting, b)?;
            let s = read_json::<ShadowFile>(&shadow)?.resolve(&d)?;
            Ok(check_outcome(&t, check_shadow(&d, &t, &s)?, "shadow"))
        }
        Command::VerifyCocone { setting, cocone } => {
            let (_, d, t) = shadow_setting(&setting, b)?;
            let c = read_json::<CoconeFile>(&cocone)?.resolve(&d)?;
            Ok(check_outcome(&t, check_cocone(&d, &t, &c)?, "cocone"))
        }
        Command::Strictify { setting, cocone } => {
            let (_, d, t) = shadow_setting(&setting, b)?;
            let c = read_json::<CoconeFile>(&cocone)?.resolve(&d)?;
            let f = ShadowFile::of(&d, &strictify(&d, &t, &c)?);
            Ok(Outcome::emit(pretty(&f), json!({"shadow": f})))
        }
        Command::Unstrictify { setting, shadow } => {
            let (_, d, t) = shadow_setting(&setting, b)?;
            let s = read_json::<ShadowFile>(&shadow)?.resolve(&d)?;
            let f = CoconeFile::of(&d, &unstrictify(&d, &t, &s)?);
            Ok(Outcome::emit(pretty(&f), json!({"cocone": f})))
        }
        Command::CheckExtension { setting, theta, fdata } => {
            let (_, d, t) = shadow_setting(&setting, b)?;
            let s = read_json::<ShadowFile>(&theta)?.resolve(&d)?;
            let (t0, th) = twist_components(&d, &s)?;
            let data = match &fdata {
                Some(path) => read_json::<ExtensionFile>(path)?.resolve(&d)?,
                None => ExtensionData::strict(&d),
            };
            let r = check_extension(&d, &data, &t, &t0, &th, b)?;
            Ok(check_outcome(&t, r, "extension"))
        }
        Command::Euler { source } => {
            let two = two_category(&source.builtin, &source.two_cat)?;
            let h = Bihh::with_degree(&two, source.degree, b)?;
            let a = AdjunctionDatum::generic(&two)?;
            let e = euler(&h, &a)?;
            let swapped = a.swapped(&two).map(|s| euler(&h, &s)).transpose()?;
            Ok(class_outcome(&h, "euler", &e, swapped.as_ref(), b)?)
        }
        Command::Trace { source, q, twist } => {
            let two = two_category(&source.builtin, &source.two_cat)?;
            let h = Bihh::with_degree(&two, source.degree, b)?;
            let a = AdjunctionDatum::generic(&two)?;
            let labels: Vec<&str> = q.split_whitespace().collect();
            let qw = two.path(a.f.src, &labels)?;
            let t = trace(&h, &a, &qw, twist)?;
            Ok(class_outcome(&h, "trace", &t, None, b)?)
        }
        Command::CheckExample { example, degree } => check_example(example, degree, b),
        Command::Replay { file } => replay(&read_json::<Replay>(&file)?, b),
    }
}

fn cli_budget(b: &SearchBudget) -> Vec<String> {
    vec![
        "--budget-length".into(),
        b.max_word_length.to_string(),
        "--budget-steps".into(),
        b.max_rewrite_steps.to_string(),
        "--budget-enum".into(),
        b.max_enumeration.to_string(),
    ]
}

fn cli_args(budget: &[String], command: &str, s: &DiagramSource, extra: &[&str]) -> Vec<String> {
    let mut argv = vec!["bihh".to_string()];
    argv.extend(budget.iter().cloned());
    argv.push(command.into());
    if let Some(n) = &s.builtin {
        argv.extend(["--builtin".into(), n.clone()]);
    }
    if let Some(p) = &s.diagram {
        argv.extend(["--diagram".into(), p.display().to_string()]);
    }
    argv.extend(["--length".into(), s.length.to_string()]);
    argv.extend(extra.iter().map(|x| x.to_string()));
    argv
}

fn rerun_argv(argv: &[String]) -> Replay {
    Replay::Rerun { argv: argv.to_vec() }
}

fn shadow_setting(s: &ShadowSetting, b: &SearchBudget) -> Result<(TwoCatPresentation, TruncatedDiagram, FiniteCategory)> {
    let (two, d) = diagram(&s.source, b)?;
    let t = FiniteCategory::from_file(&read_json(&s.target)?)?;
    Ok((two, d, t))
}

/// On-disk components of the 2-arrows, in the order of the computad's 2-arrows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionFile {
    pub components: Vec<Vec<WordSpec>>,
}

impl ExtensionFile {
    fn resolve(&self, d: &TruncatedDiagram) -> Result<ExtensionData> {
        let q = q_delta2();
        if self.components.len() != q.two_arrows.len() {
            return Err(Error::Validation(format!("expected {} families of components", q.two_arrows.len())));
        }
        let mut components = Vec::new();
        for (row, a) in self.components.iter().zip(&q.two_arrows) {
            let p = &d.levels[a.src.tgt as usize].pres;
            components.push(row.iter().map(|w| w.resolve(p)).collect::<Result<Vec<_>>>()?);
        }
        Ok(ExtensionData { components })
    }
}

fn check_outcome(t: &FiniteCategory, r: CheckReport, what: &str) -> Outcome {
    let text = match (&r.status, &r.counterexample) {
        (Status::Pass, _) => format!("{what}: pass ({} instances)", r.instances),
        (Status::Inconclusive, _) => format!("{what}: inconclusive ({} of {} instances undecided)", r.undecided, r.instances),
        (Status::Fail, Some(c)) => format!(
            "{what}: fail\n  axiom: {}\n  instance: {}\n  lhs: {}\n  rhs: {}",
            c.axiom,
            c.instance,
            c.lhs_path.join(" ; "),
            c.rhs_path.join(" ; ")
        ),
        (Status::Fail, None) => format!("{what}: fail"),
    };
    let mut json = to_json(&r);
    if let Some(c) = &r.counterexample {
        json["replay"] = to_json(&Replay::Paths { target: t.to_file(), counterexample: c.clone() });
    }
    Outcome::new(r.status, json, text)
}

fn describe_certificate(c: &Certificate) -> String {
    match c {
        Certificate::FreeWords => "distinct words in a free category".into(),
        Certificate::Model { model, left, right } => format!("model {model} sends them to {left} and {right}"),
        Certificate::Weight { left, right, .. } => format!("an invariant weight takes values {left} and {right}"),
        Certificate::Normalizer { name, .. } => format!("different normal forms under {name}"),
        Certificate::ClosedClass { size } => format!("the left word's class has {size} words and misses the right"),
        Certificate::Finite { left, right } => format!("elements {left} and {right} of the enumerated category"),
    }
}

fn skeleton_text(p: &CatPresentation, r: &crate::present::SkeletonReport) -> String {
    let mut lines = vec![format!("{} classes{}", r.classes.len(), if r.exact { " (exact)" } else { "" })];
    for c in &r.classes {
        let members: Vec<&str> = c.members.iter().map(|&m| p.objects()[m as usize].as_str()).collect();
        let auts: Vec<String> = c
            .automorphisms
            .iter()
            .map(|a| {
                let o = match a.order {
                    Order::Free => "free".to_string(),
                    Order::Finite(n) => format!("order {n}"),
                    Order::Unknown => "order ?".to_string(),
                };
                format!("{} ({o})", p.display_word(&a.word))
            })
            .collect();
        let aut = if auts.is_empty() { "none".to_string() } else { auts.join(", ") };
        let size = c.aut_size.map(|n| format!(" |Aut| = {n}")).unwrap_or_default();
        lines.push(format!("  {{{}}} aut: {aut}{size}", members.join(", ")));
    }
    lines.join("\n")
}

fn class_outcome(h: &Bihh, what: &str, w: &Word, candidate: Option<&Word>, b: &SearchBudget) -> Result<Outcome> {
    let p = h.presentation();
    let shown = p.display_word(w);
    let src = &p.objects()[w.src as usize];
    let tgt = &p.objects()[w.tgt as usize];
    let mut json = json!({what: WordSpec::of(p, w)});
    let mut text = vec![format!("{what}: {shown}"), format!("  {src} -> {tgt}")];
    match is_invertible(p, w, candidate, b)? {
        Invertibility::Yes { inverse, left, right } => {
            text.push(format!("  invertible, inverse {}", p.display_word(&inverse)));
            let id = |o| WordSpec::of(p, &Word::empty(o));
            json["invertible"] = json!("yes");
            json["inverse"] = to_json(&WordSpec::of(p, &inverse));
            json["replay"] = json!([
                Replay::Witness { presentation: p.to_file(), from: WordSpec::of(p, &w.then(&inverse)), to: id(w.src), witness: left },
                Replay::Witness { presentation: p.to_file(), from: WordSpec::of(p, &inverse.then(w)), to: id(w.tgt), witness: right },
            ]);
        }
        Invertibility::Unknown(why) => {
            // No generator leaving the target means no arrow back to the source.
            let stuck = w.src != w.tgt && !p.generators().iter().any(|g| g.src == w.tgt && g.tgt != w.tgt);
            if stuck {
                text.push(format!("  not invertible: no generator leaves {tgt}"));
                json["invertible"] = json!("no");
            } else {
                text.push(format!("  invertibility unknown: {why}"));
                json["invertible"] = json!("unknown");
            }
        }
    }
    Ok(Outcome::new(Status::Pass, json, text.join("\n")))
}

fn structure_outcome(argv: Vec<String>, r: &StructureReport) -> Outcome {
    let mut lines = Vec::new();
    let passed = r.passed();
    let line = |ok: bool, name: &str, detail: &str| {
        let detail = detail.trim_end_matches([';', ' ']);
        let mark = if ok { "ok" } else { "FAIL" };
        if detail.is_empty() { format!("{mark} {name}") } else { format!("{mark} {name}: {detail}") }
    };
    for c in &r.checks {
        lines.push(line(c.passed, &c.name, &c.detail));
    }
    for n in &r.notes {
        lines.push(format!("note: {n}"));
    }
    let status = if passed { Status::Pass } else { Status::Fail };
    let mut json = to_json(r);
    if !passed {
        json["replay"] = to_json(&Replay::Rerun { argv });
    }
    Outcome::new(status, json, lines.join("\n"))
}

fn check_example(example: Example, degree: Option<usize>, b: &SearchBudget) -> Result<Outcome> {
    let mut argv = vec!["bihh".to_string()];
    argv.extend(cli_budget(b));
    argv.push("check-example".into());
    argv.push(format!("{example:?}").to_ascii_lowercase());
    if let Some(d) = degree {
        argv.extend(["--degree".into(), d.to_string()]);
    }
    let report = match example {
        Example::Bn => rotation_example(CatalogName::BN, degree.unwrap_or(6), b)?,
        Example::Bnn => rotation_example(CatalogName::BNN, degree.unwrap_or(4), b)?,
        Example::Bdelta => verify_bdelta_structure(degree.unwrap_or(6), 3, 3, b)?,
        Example::Adj => verify_adj_structure(degree.unwrap_or(4), b)?,
        Example::Adjend => verify_adjend_structure(degree.unwrap_or(3), b)?,
    };
    Ok(structure_outcome(argv, &report))
}

/// Skeleton of biHH(BN) or biHH(B(N∗N)): objects indexed by letter counts, each with one free rotation.
pub fn rotation_example(name: CatalogName, degree: usize, b: &SearchBudget) -> Result<StructureReport> {
    use crate::report::Check;
    let two = catalog(&name)?;
    let budget = SearchBudget { max_word_length: b.max_word_length.max(8), ..*b };
    let h = Bihh::with_degree(&two, degree, &budget)?;
    let p = h.presentation();
    let r = p.skeleton(&budget)?;
    let letters = two.gen1().len();
    let counts = |w: &Word| -> Vec<usize> { (0..letters as u32).map(|g| w.letters.iter().filter(|&&x| x == g).count()).collect() };
    let mut checks = Vec::new();
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut merged = Vec::new();
    for c in &r.classes {
        let k = counts(&h.objects()[c.representative as usize]);
        if c.members.iter().any(|&m| counts(&h.objects()[m as usize]) != k) {
            merged.push(p.objects()[c.representative as usize].clone());
        }
        seen.push(k);
    }
    let mut indices = seen.clone();
    indices.sort();
    indices.dedup();
    checks.push(Check::new(
        "classes are indexed by letter counts",
        merged.is_empty() && indices.len() == seen.len(),
        format!("{} classes for {} letter-count vectors", seen.len(), indices.len()),
    ));
    let mut bad = Vec::new();
    for c in &r.classes {
        let rep = &h.objects()[c.representative as usize];
        let label = &p.objects()[c.representative as usize];
        let free: Vec<_> = c.automorphisms.iter().filter(|a| a.order == Order::Free).collect();
        let ok = if rep.is_empty() {
            c.automorphisms.is_empty() && c.aut_size.is_none_or(|n| n == 1)
        } else {
            c.automorphisms.len() == 1 && free.len() == 1
        };
        if !ok {
            bad.push(format!("{label}: {} generators", c.automorphisms.len()));
        }
    }
    checks.push(Check::new(
        "Aut(∅) is trivial and every other class has one free generator",
        bad.is_empty(),
        if bad.is_empty() { format!("{} classes", r.classes.len()) } else { bad.join("; ") },
    ));
    if name == CatalogName::BN {
        let mut off = Vec::new();
        for c in &r.classes {
            let rep = &h.objects()[c.representative as usize];
            let (n, Some(a)) = (rep.len(), c.automorphisms.first()) else { continue };
            let xs = |k: usize| two.path(0, &vec!["x"; k]);
            let gen = h.twist_word(&xs(n - 1)?, &xs(1)?)?;
            let inv = h.twist_word(&xs(1)?, &xs(n - 1)?)?;
            let ok = [&gen, &inv].iter().any(|g| a.word.src == g.src && p.equal(&a.word, g, &budget).is_ok_and(|v| v.is_equal()));
            if !ok {
                off.push(p.objects()[c.representative as usize].clone());
            }
        }
        checks.push(Check::new(
            "Aut(n) is generated by (n−1,1)",
            off.is_empty(),
            if off.is_empty() { format!("objects up to {degree}") } else { off.join("; ") },
        ));
    }
    Ok(StructureReport { degree, checks, notes: vec![] })
}

fn verdict(ok: bool, text: String, json: Value) -> Outcome {
    Outcome::new(if ok { Status::Pass } else { Status::Fail }, json, text)
}

fn replay(r: &Replay, b: &SearchBudget) -> Result<Outcome> {
    match r {
        Replay::Witness { presentation, from, to, witness } => {
            let p = CatPresentation::from_file(presentation)?;
            let (x, y) = (from.resolve(&p)?, to.resolve(&p)?);
            let ok = witness.proves(&p, &x, &y);
            let text = if ok { "witness replays".to_string() } else { "witness does not replay".to_string() };
            Ok(verdict(ok, text, json!({"confirmed": ok})))
        }
        Replay::Distinct { presentation, left, right, certificate, source } => {
            let p = CatPresentation::from_file(presentation)?;
            let (x, y) = (left.resolve(&p)?, right.resolve(&p)?);
            if x.src != y.src || x.tgt != y.tgt {
                return Err(Error::Validation("the words are not parallel".into()));
            }
            let (ok, how) = recheck_distinct(&p, &x, &y, certificate, source.as_ref(), b)?;
            Ok(verdict(ok, format!("{}: {how}", if ok { "distinct" } else { "not confirmed" }), json!({"confirmed": ok, "check": how})))
        }
        Replay::Paths { target, counterexample } => {
            let t = FiniteCategory::from_file(target)?;
            let (ok, how) = recheck_paths(&t, counterexample)?;
            Ok(verdict(ok, format!("{}: {how}", if ok { "counterexample confirmed" } else { "not confirmed" }), json!({"confirmed": ok, "check": how})))
        }
        Replay::Rerun { argv } => {
            if argv.iter().any(|a| a == "replay") {
                return Err(Error::Validation("a rerun may not itself replay".into()));
            }
            let (code, _, _) = run_captured(argv.iter().cloned());
            let ok = code == 1;
            Ok(verdict(ok, format!("rerun exited {code}"), json!({"confirmed": ok, "exit": code})))
        }
    }
}

fn recheck_distinct(
    p: &CatPresentation,
    x: &Word,
    y: &Word,
    c: &Certificate,
    source: Option<&TraceSource>,
    b: &SearchBudget,
) -> Result<(bool, String)> {
    Ok(match c {
        Certificate::FreeWords => (p.relations().is_empty() && x != y, "no relations and different words".into()),
        Certificate::Weight { weights, left, right } => {
            let w = WeightInvariant { weights: weights.clone() };
            let ok = weights.len() == p.generators().len() && w.respects(p) && w.value(x) == *left && w.value(y) == *right && left != right;
            (ok, format!("weight respects every relation and takes {} and {}", w.value(x), w.value(y)))
        }
        Certificate::Finite { .. } => {
            let f = p.to_finite(b.max_enumeration)?;
            let (l, r) = (f.eval(x), f.eval(y));
            (l != r, format!("enumerated elements {l} and {r}"))
        }
        Certificate::ClosedClass { .. } => match p.equal(x, y, b)? {
            EqualityVerdict::Distinct(_) => (true, "search closes the class without the right word".into()),
            other => (false, format!("search now returns {other:?}")),
        },
        Certificate::Model { model, .. } | Certificate::Normalizer { name: model, .. } => {
            let s = source.ok_or_else(|| Error::Precondition(format!("{model} needs the source 2-category to rebuild")))?;
            let two = TwoCatPresentation::from_file(&s.two_category)?;
            let h = Bihh::with_degree(&two, s.degree, b)?;
            let q = h.presentation();
            if q.to_file() != p.to_file() {
                return Err(Error::Validation("the source does not rebuild the recorded presentation".into()));
            }
            if let Certificate::Model { .. } = c {
                let m = q.models().iter().find(|m| m.name() == model).ok_or_else(|| Error::Lookup(model.clone()))?;
                let (l, r) = (m.evaluate(q, x), m.evaluate(q, y));
                (l.is_some() && r.is_some() && l != r, format!("{model} gives {l:?} and {r:?}"))
            } else {
                let n = q.normalizer().filter(|n| n.name() == model).ok_or_else(|| Error::Lookup(model.clone()))?;
                let (l, r) = (n.normal_form(q, x), n.normal_form(q, y));
                (l != r, format!("normal forms {} and {}", q.display_word(&l), q.display_word(&r)))
            }
        }
    })
}

fn morphism_id(t: &FiniteCategory, s: &str) -> Result<usize> {
    let id = s
        .strip_prefix('#')
        .and_then(|r| r.split_whitespace().next())
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| Error::Malformed(format!("{s} does not name a morphism")))?;
    if id >= t.morphism_count() {
        return Err(Error::Validation(format!("morphism #{id} is not in the target")));
    }
    Ok(id)
}

fn recheck_paths(t: &FiniteCategory, c: &Counterexample) -> Result<(bool, String)> {
    let lhs = c.lhs_path.iter().map(|s| morphism_id(t, s)).collect::<Result<Vec<_>>>()?;
    let rhs = c.rhs_path.iter().map(|s| morphism_id(t, s)).collect::<Result<Vec<_>>>()?;
    let n = t.objects().len() as u32;
    if c.axiom.starts_with("boundary of") {
        return Ok(match (lhs.first(), c.objects.as_slice()) {
            (None, &[o]) => (o >= n, format!("object {o} of {n}")),
            (Some(&m), &[from, to]) => {
                let ok = from >= n || to >= n || t.src(m) != from || t.tgt(m) != to;
                (ok, format!("#{m} runs {} -> {}, expected {from} -> {to}", t.src(m), t.tgt(m)))
            }
            _ => return Err(Error::Malformed("a boundary counterexample names one morphism and its endpoints".into())),
        });
    }
    if c.axiom.starts_with("invertibility of") {
        let &m = lhs.first().ok_or_else(|| Error::Malformed("no morphism to invert".into()))?;
        return Ok((t.inverse(m).is_none(), format!("#{m} has no inverse")));
    }
    let &[src] = c.objects.as_slice() else {
        return Err(Error::Malformed("a path counterexample names its source object".into()));
    };
    if src >= n {
        return Err(Error::Validation(format!("object {src} is not in the target")));
    }
    let (a, b) = (t.compose_path(src, &lhs), t.compose_path(src, &rhs));
    Ok(match (a, b) {
        (Some(a), Some(b)) => (a != b, format!("paths compose to #{a} and #{b}")),
        _ => (true, "a path does not compose".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        run_captured(std::iter::once("bihh").chain(args.iter().copied()))
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn usage_errors_exit_three() {
        assert_eq!(run_args(&["frobnicate"]).0, 3);
        assert_eq!(run_args(&["equal", "--left", "x"]).0, 3);
    }

    #[test]
    fn equal_identical_words() {
        let (code, out, _) = run_args(&["equal", "--builtin", "bn", "--left", "(x,x)", "--right", "(x,x)"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.starts_with("equal"));
    }

    #[test]
    fn unknown_builtin_is_an_input_error() {
        let (code, _, err) = run_args(&["skeleton", "--builtin", "nope"]);
        assert_eq!(code, 3);
        assert!(err.contains("unknown name"));
    }

    #[test]
    fn budget_flags_validate() {
        assert_eq!(run_args(&["--budget-steps", "0", "skeleton", "--builtin", "terminal"]).0, 3);
    }
}
