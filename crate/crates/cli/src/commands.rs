use std::fmt::Write as _;
use std::io::{self, BufWriter, Write};

use fuglede_core::cm_structure::{check_t1t2, sa_record, CmReport};
use fuglede_core::pair_lab::{
    deficit_bounds_check, exclusion_predicate, is_primitive, parse_factored, root_profile, symmetry_check,
    verify_spectral_pair, verify_tiling_pair, DeficitReport, ExclusionReport, MemberRoots, Relation,
    RootProfile, SpectralCheck, SymmetryReport, TilingCheck,
};
use fuglede_core::search::{
    find_spectrum, find_tiling_complement, survey_stream, OrbitMode, RecordVerdict, SearchOutcome,
    SurveyOptions, SurveySummary, MAX_ORDER,
};
use fuglede_core::vanishing_sums::lam_leung_decompose;
use fuglede_core::{zero_set, Error, GroupContext, MaskMultiset};
use serde::Serialize;

use crate::{Cli, Command, SurveyArgs, VerifyArgs};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest N surveyed over all sizes unless a size cap is given.
const SURVEY_FEASIBLE_ORDER: usize = 40;

const EXIT_OK: u8 = 0;
const EXIT_VERDICT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

enum Failure {
    /// A core error, with the literal being parsed when it is a parse error.
    Core { error: Error, input: Option<String> },
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(error: Error) -> Failure {
        Failure::Core { error, input: None }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core { error, .. } => match error {
                Error::Parse { .. } | Error::Domain(_) | Error::ContextMismatch { .. } => EXIT_USAGE,
                Error::Precondition(_) | Error::InvariantViolation(_) => EXIT_VERDICT,
            },
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_VERDICT,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Core { error, .. } => match error {
                Error::Parse { .. } => "parse",
                Error::Domain(_) => "domain",
                Error::ContextMismatch { .. } => "context_mismatch",
                Error::Precondition(_) => "precondition",
                Error::InvariantViolation(_) => "invariant",
            },
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core { error, input } => {
                let mut msg = error.to_string();
                if let (Error::Parse { position, .. }, Some(input)) = (error, input) {
                    let col = input[..(*position).min(input.len())].chars().count();
                    let _ = write!(msg, "\n  {input}\n  {}^", " ".repeat(col));
                }
                msg
            }
            Failure::Usage(msg) => msg.clone(),
            Failure::Io(e) => format!("i/o error: {e}"),
        }
    }

    fn position(&self) -> Option<usize> {
        match self {
            Failure::Core { error: Error::Parse { position, .. }, .. } => Some(*position),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct ErrorBody {
    error: ErrorDetail,
}

#[derive(Serialize)]
struct ErrorDetail {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<usize>,
}

fn json_line<T: Serialize>(command: &str, body: &T) -> String {
    serde_json::to_string(&Envelope { schema_version: SCHEMA_VERSION, command, body })
        .expect("reports serialize to JSON")
}

fn emit<T: Serialize>(json: bool, command: &str, body: &T, human: impl FnOnce() -> String) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if json {
        writeln!(out, "{}", json_line(command, body))
    } else {
        write!(out, "{}", human())
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Analyze { .. } => "analyze",
        Command::Survey(_) => "survey",
        Command::Decompose { .. } => "decompose",
        Command::Verify(_) => "verify",
        Command::Profile { .. } => "profile",
        Command::Exclude { .. } => "exclude",
    }
}

pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Analyze { set, budget } => analyze(cli.json, set, *budget),
        Command::Survey(args) => survey(cli.json, args),
        Command::Decompose { set } => decompose(cli.json, set),
        Command::Verify(args) => verify(cli.json, args),
        Command::Profile { a, b } => profile(cli.json, a, b),
        Command::Exclude { n } => exclude(cli.json, n),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(failure) => {
            if cli.json {
                let body = ErrorBody {
                    error: ErrorDetail { kind: failure.kind(), message: failure.message(), position: failure.position() },
                };
                println!("{}", json_line(command_name(&cli.command), &body));
            }
            eprintln!("error: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn parse_set(input: &str) -> Result<MaskMultiset, Failure> {
    MaskMultiset::parse(input).map_err(|error| Failure::Core { error, input: Some(input.to_string()) })
}

fn braces<T: ToString>(items: &[T]) -> String {
    let inner: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn describe_search(outcome: &RecordVerdict) -> String {
    match (outcome.verdict.as_str(), &outcome.witness) {
        (_, Some(w)) => format!("found {w}"),
        ("exhausted", None) => "none (search exhausted)".to_string(),
        ("budget_exceeded", None) => "unknown (node budget exceeded)".to_string(),
        (other, None) => other.replace('_', " "),
    }
}

fn search_verdict(outcome: SearchOutcome<MaskMultiset>) -> RecordVerdict {
    let (verdict, witness) = match outcome {
        SearchOutcome::Found(w) => ("found", Some(w.to_string())),
        SearchOutcome::Exhausted => ("exhausted", None),
        SearchOutcome::BudgetExceeded => ("budget_exceeded", None),
    };
    RecordVerdict { verdict: verdict.to_string(), witness }
}

#[derive(Serialize)]
struct AnalyzeReport {
    set: String,
    n: usize,
    size: usize,
    proper: bool,
    vanishing_orders: Vec<usize>,
    zero_set: Vec<usize>,
    s_a: Option<Vec<usize>>,
    cm: Option<CmReport>,
    primitive: Option<bool>,
    spectrum: Option<RecordVerdict>,
    complement: Option<RecordVerdict>,
}

fn describe_cm(cm: &CmReport) -> String {
    let t1 = if cm.t1 { "holds" } else { "fails" };
    let t2 = match cm.t2_witness {
        None => "holds".to_string(),
        Some(s) => format!("fails at {s}"),
    };
    format!("T1 {t1} (|A| = {}, product {}), T2 {t2}", cm.t1_lhs, cm.t1_rhs)
}

fn analyze(json: bool, input: &str, budget: u64) -> Result<u8, Failure> {
    let a = parse_set(input)?;
    let zeros = zero_set(&a)?;
    let proper = a.is_proper();
    let searchable = proper && a.n() <= MAX_ORDER;
    let report = AnalyzeReport {
        set: a.to_string(),
        n: a.n(),
        size: a.mass(),
        proper,
        vanishing_orders: zeros.vanishing_divisors().to_vec(),
        zero_set: zeros.residues(),
        s_a: if proper { Some(sa_record(&a)?.s_a) } else { None },
        cm: if proper { Some(check_t1t2(&a)?) } else { None },
        primitive: if proper { Some(is_primitive(&a)?) } else { None },
        spectrum: if searchable { Some(search_verdict(find_spectrum(&a, budget)?)) } else { None },
        complement: if searchable { Some(search_verdict(find_tiling_complement(&a, budget)?)) } else { None },
    };
    emit(json, "analyze", &report, || {
        let mut s = String::new();
        let _ = writeln!(s, "set         {}", report.set);
        let _ = writeln!(s, "size        {}", report.size);
        let _ = writeln!(s, "zero orders {}", braces(&report.vanishing_orders));
        let _ = writeln!(s, "Z(A)        {}", braces(&report.zero_set));
        if let (Some(s_a), Some(cm), Some(primitive)) = (&report.s_a, &report.cm, report.primitive) {
            let _ = writeln!(s, "S_A         {}", braces(s_a));
            let _ = writeln!(s, "CM          {}", describe_cm(cm));
            let _ = writeln!(s, "primitive   {}", if primitive { "yes" } else { "no" });
        } else {
            let _ = writeln!(s, "multiset    structure and searches apply to proper sets only");
        }
        if let (Some(spec), Some(comp)) = (&report.spectrum, &report.complement) {
            let _ = writeln!(s, "spectrum    {}", describe_search(spec));
            let _ = writeln!(s, "complement  {}", describe_search(comp));
        }
        s
    })?;
    let exceeded = [&report.spectrum, &report.complement]
        .iter()
        .any(|r| r.as_ref().is_some_and(|r| r.verdict == "budget_exceeded"));
    Ok(if exceeded { EXIT_BUDGET } else { EXIT_OK })
}

#[derive(Serialize)]
struct SurveyLine<'a, T: Serialize> {
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn survey(json: bool, args: &SurveyArgs) -> Result<u8, Failure> {
    if args.n > SURVEY_FEASIBLE_ORDER && args.size.is_none() && args.max_size.is_none() {
        return Err(Failure::Usage(format!(
            "surveying every size of Z_{} is infeasible; pass --size or --max-size (all sizes are allowed up to N = {SURVEY_FEASIBLE_ORDER})",
            args.n
        )));
    }
    let ctx = GroupContext::new(args.n)?;
    let options = SurveyOptions {
        size: args.size,
        max_size: args.max_size,
        mode: if args.affine { OrbitMode::Affine } else { OrbitMode::Translation },
        budget: args.budget,
        extensions: !args.no_extensions,
        cursor: args.resume.clone(),
        ..SurveyOptions::default()
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let summary = survey_stream(&ctx, &options, &mut |record| {
        if json {
            let line = json_line("survey", &SurveyLine { kind: "record", body: record });
            writeln!(out, "{line}").map_err(|e| Error::Precondition(format!("writing output: {e}")))?;
        }
        Ok(())
    })?;
    if json {
        writeln!(out, "{}", json_line("survey", &SurveyLine { kind: "summary", body: &summary }))?;
    } else {
        write!(out, "{}", describe_summary(&summary, args.affine))?;
    }
    out.flush()?;
    Ok(if !summary.failures.is_empty() || !summary.f_members.is_empty() || !summary.non_spectral_tiles.is_empty() {
        EXIT_VERDICT
    } else if !summary.is_complete() {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn describe_summary(s: &SurveySummary, affine: bool) -> String {
    let mut out = String::new();
    let orbit = if affine { "affine orbits" } else { "translation orbits" };
    let _ = writeln!(out, "Z_{}: {} {orbit}, status {}", s.n, s.orbits, s.status);
    let _ = writeln!(out, "{:>5} {:>9} {:>9} {:>9} {:>9}", "size", "orbits", "spectral", "tiles", "T1+T2");
    for c in &s.per_size {
        let _ = writeln!(out, "{:>5} {:>9} {:>9} {:>9} {:>9}", c.size, c.orbits, c.spectral, c.tiles, c.t1t2);
    }
    let _ = writeln!(out, "F(N): {}", if s.f_members.is_empty() { "empty".to_string() } else { s.f_members.join(" ") });
    if !s.non_spectral_tiles.is_empty() {
        let _ = writeln!(out, "tiles without spectrum: {}", s.non_spectral_tiles.join(" "));
    }
    let _ = writeln!(out, "tiles certified spectral: {}", s.tiles_certified_spectral);
    let _ = writeln!(out, "extensions checked: {} ({} closures)", s.extension_instances, s.closures);
    if !s.unresolved.is_empty() {
        let shown: Vec<&str> = s.unresolved.iter().take(20).map(String::as_str).collect();
        let more = s.unresolved.len() - shown.len();
        let tail = if more > 0 { format!(" and {more} more") } else { String::new() };
        let _ = writeln!(out, "unresolved (budget exceeded): {}{tail}", shown.join(" "));
    }
    for f in &s.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    out
}

#[derive(Serialize)]
struct DecomposeReport {
    set: String,
    p: usize,
    q: usize,
    p_cycles: Vec<Vec<usize>>,
    q_cycles: Vec<Vec<usize>>,
}

fn cycles(part: &MaskMultiset, r: usize) -> Vec<Vec<usize>> {
    let n = part.n();
    let mut out = Vec::new();
    for (x, &c) in part.coeffs().iter().enumerate() {
        for _ in 0..c {
            out.push((0..r).map(|k| x + k * n / r).collect());
        }
    }
    out
}

fn decompose(json: bool, input: &str) -> Result<u8, Failure> {
    let a = parse_set(input)?;
    let dec = lam_leung_decompose(&a)?;
    let report = DecomposeReport {
        set: a.to_string(),
        p: dec.p,
        q: dec.q,
        p_cycles: cycles(&dec.p_part, dec.p),
        q_cycles: cycles(&dec.q_part, dec.q),
    };
    emit(json, "decompose", &report, || {
        let mut s = String::new();
        let _ = writeln!(s, "set       {}", report.set);
        for (r, list) in [(report.p, &report.p_cycles), (report.q, &report.q_cycles)] {
            let shown: Vec<String> = list.iter().map(|c| braces(c)).collect();
            let _ = writeln!(s, "{r}-cycles  {}", if shown.is_empty() { "none".to_string() } else { shown.join(" ") });
        }
        s
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReport {
    kind: &'static str,
    a: String,
    b: String,
    verified: bool,
    failure: Option<serde_json::Value>,
}

fn verify(json: bool, args: &VerifyArgs) -> Result<u8, Failure> {
    let a = parse_set(&args.a)?;
    let b = parse_set(&args.b)?;
    let (kind, failure) = if args.spectral {
        match verify_spectral_pair(&a, &b)? {
            SpectralCheck::Verified(_) => ("spectral", None),
            SpectralCheck::Rejected(f) => ("spectral", Some(serde_json::to_value(f).expect("serializable"))),
        }
    } else {
        match verify_tiling_pair(&a, &b)? {
            TilingCheck::Verified(_) => ("tiling", None),
            TilingCheck::Rejected(f) => ("tiling", Some(serde_json::to_value(f).expect("serializable"))),
        }
    };
    let report = VerifyReport { kind, a: a.to_string(), b: b.to_string(), verified: failure.is_none(), failure };
    emit(json, "verify", &report, || match &report.failure {
        None => format!("({}, {}) is a {kind} pair\n", report.a, report.b),
        Some(f) => format!("({}, {}) is not a {kind} pair: {f}\n", report.a, report.b),
    })?;
    Ok(if report.verified { EXIT_OK } else { EXIT_VERDICT })
}

#[derive(Serialize)]
struct ProfileReport {
    a: String,
    b: String,
    profile: RootProfile,
    symmetry: SymmetryReport,
    deficits: DeficitReport,
}

fn describe_member(s: &mut String, name: &str, m: &MemberRoots) {
    let _ = writeln!(s, "{name}: s_p {} s_q {} r_p {} r_q {}", braces(&m.s_p), braces(&m.s_q), braces(&m.r_p), braces(&m.r_q));
    let _ = writeln!(s, "   m0 {} n0 {} u_p {} u_q {}", m.m0, m.n0, braces(&m.u_p), braces(&m.u_q));
    let _ = writeln!(s, "   k_p {} k_q {} def_p {} def_q {}", braces(&m.k_p), braces(&m.k_q), m.def_p, m.def_q);
}

fn describe_relations(s: &mut String, title: &str, relations: &[Relation]) {
    let _ = writeln!(s, "{title}");
    for r in relations {
        let verdict = if r.holds { "holds" } else { "fails" };
        let _ = writeln!(s, "  {verdict:<5} {} ({} vs {})", r.label, r.lhs, r.rhs);
    }
}

fn profile(json: bool, a: &str, b: &str) -> Result<u8, Failure> {
    let a = parse_set(a)?;
    let b = parse_set(b)?;
    let pair = match verify_spectral_pair(&a, &b)? {
        SpectralCheck::Verified(pair) => pair,
        SpectralCheck::Rejected(f) => {
            let body = VerifyReport {
                kind: "spectral",
                a: a.to_string(),
                b: b.to_string(),
                verified: false,
                failure: Some(serde_json::to_value(&f).expect("serializable")),
            };
            emit(json, "profile", &body, || format!("({a}, {b}) is not a spectral pair: {f:?}\n"))?;
            return Ok(EXIT_VERDICT);
        }
    };
    let report = ProfileReport {
        a: a.to_string(),
        b: b.to_string(),
        profile: root_profile(&pair)?,
        symmetry: symmetry_check(&pair)?,
        deficits: deficit_bounds_check(&pair)?,
    };
    emit(json, "profile", &report, || {
        let p = &report.profile;
        let mut s = String::new();
        let _ = writeln!(s, "pair ({}, {}) in Z_{}^{}*{}^{}", report.a, report.b, p.p, p.m, p.q, p.n);
        describe_member(&mut s, "A", &p.a);
        describe_member(&mut s, "B", &p.b);
        let sym = &report.symmetry;
        for (prime, side) in [("p", &sym.p_side), ("q", &sym.q_side)] {
            let verdict = if side.equal { "equal" } else { "differ" };
            let _ = writeln!(
                s,
                "symmetry {prime}: (S_B-1) {} vs R_A {}: {verdict}",
                braces(&side.shifted_b),
                braces(&side.r_a)
            );
        }
        let d = &report.deficits;
        describe_relations(&mut s, "size bounds", &d.min_terms);
        describe_relations(&mut s, "divisibility", &d.divisibility);
        describe_relations(&mut s, "U lower bounds", &d.u_lower_bounds);
        describe_relations(&mut s, "deficit windows", &d.deficit_windows);
        let panel: Vec<String> = d
            .roots_panel
            .iter()
            .map(|e| format!("{}(zeta_{}){}0", e.member, e.order, if e.vanishes { "=" } else { "≠" }))
            .collect();
        let _ = writeln!(s, "roots {}", panel.join(" "));
        s
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ExcludeReport<'a> {
    message: String,
    #[serde(flatten)]
    report: &'a ExclusionReport,
}

fn exclude(json: bool, input: &str) -> Result<u8, Failure> {
    let shape = parse_factored(input).map_err(|error| Failure::Core { error, input: Some(input.to_string()) })?;
    let report = exclusion_predicate(shape)?;
    let body = ExcludeReport { message: report.message(), report: &report };
    emit(json, "exclude", &body, || {
        let mut s = format!("{}\n", body.message);
        for r in &report.reasons {
            let _ = writeln!(s, "  {r}");
        }
        s
    })?;
    Ok(EXIT_OK)
}
