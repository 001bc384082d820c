use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use frey_core::eliminate::{self, EliminateError, EliminationCertificate, Verdict};
use frey_core::ecfinite;
use frey_core::frey::{self, CmVerdict, FreyError};
use frey_core::ingest::{self, IngestError};
use frey_core::quadfield::{self, splitting_type, QuadField};
use frey_core::sieve::{self, ExponentBounds, SieveError, SieveRecord, ThreeTorsionMode, DEFAULT_BOUNDS};
use frey_core::twists::{self, TwistError};
use frey_core::Family;

const OUT_DIR_ENV: &str = "FREY_OUT_DIR";

#[derive(Parser)]
#[command(name = "frey")]
#[command(version)]
#[command(about = "Modular-method computations for x^4 + d y^2 = z^p and x^2 + d y^6 = z^p over Q(sqrt(-d))")]
#[command(after_help = "Exit status: 0 success, 1 usage error, 2 a hypothesis or gate failed, 3 data-integrity error.\n\
Structured output goes to --out; relative paths are resolved against $FREY_OUT_DIR when it is set.")]
struct Cli {
    /// Worker threads for the parallel searches (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the arithmetic hypotheses on d: for the quartic equation, d prime,
    /// d = 3 mod 8, 3 not dividing the class number and 2 inert; for the
    /// sextic equation, d prime, d = 19 mod 24, class number prime to 6, 2 and
    /// 3 inert. These are the hypotheses under which the absence of
    /// nontrivial primitive solutions is proved for large p.
    Hypotheses {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value = "quartic")]
        family: Family,
        #[command(flatten)]
        out: OutArg,
    },
    /// Class number of Q(sqrt(-d)) by reduced forms and by ideal classes.
    /// For prime d = 3 mod 4 it is odd (genus theory).
    Classnum {
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decomposition of rational primes in Q(sqrt(-d)).
    Split {
        #[arg(long)]
        d: u64,
        /// Comma-separated primes
        #[arg(long, value_delimiter = ',', required = true)]
        ells: Vec<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Frey curve attached to a putative solution (a, b, c) of the quartic or
    /// sextic equation: model, discriminant, c4 and j-invariant. For the
    /// quartic family also runs the CM exclusion (CM is possible only when
    /// 175 a^4 = 81 d b^2).
    Frey {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Reduction type and trace of Frobenius of the Frey curve at each prime
    /// above ell.
    Ap {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        ell: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Search for curves over Q(sqrt(-d)) with a 2-torsion point and good
    /// reduction away from 2. Under the quartic hypotheses every such curve
    /// is a base change from Q, which is the step that rules out the
    /// remaining small primes p for x^4 + d y^2 = z^p.
    Sieve2 {
        #[arg(long)]
        d: u64,
        /// Also list the gate-free analysis for d failing the hypotheses
        #[arg(long)]
        ignore_hypotheses: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Search for curves y^2 + a xy + b y = x^3 with a = alpha sqrt(-d),
    /// b = beta sqrt(-d) whose discriminant is supported at 2, 3 and d and
    /// which are additive at 2 and 3. This is the 3-torsion step in the proof
    /// for x^2 + d y^6 = z^p; with the default bounds r <= 16, q <= 13 the
    /// only survivors live over d = 547.
    Sieve3 {
        /// Solve for d instead of fixing it
        #[arg(long, conflicts_with = "d")]
        free_d: bool,
        #[arg(long, required_unless_present = "free_d")]
        d: Option<u64>,
        /// Bound on the exponent of 2 (rows beyond the defaults are flagged)
        #[arg(long, default_value_t = DEFAULT_BOUNDS.r_max)]
        r_max: u32,
        /// Bound on the exponent of 3
        #[arg(long, default_value_t = DEFAULT_BOUNDS.q_max)]
        q_max: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Mazur-style elimination of newforms against the quartic Frey curve:
    /// for each form g and each auxiliary prime ell, p must divide a product
    /// of norms built from a_ell(g) and the possible traces of the Frey
    /// curve. Writes a hashed certificate.
    Eliminate {
        #[arg(long)]
        d: u64,
        /// Comma-separated auxiliary primes
        #[arg(long, value_delimiter = ',', required = true)]
        ells: Vec<u64>,
        /// Newform table (TOML)
        #[arg(long)]
        forms: PathBuf,
        /// Primes p at or below this are never claimed
        #[arg(long, default_value_t = eliminate::SMALL_PRIME_FLOOR)]
        threshold: u64,
        /// Certificate path (default: eliminate-d<d>.json)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner-twist group of the newform attached to the Frey curve when the
    /// auxiliary character has 2-power order M, the field diagram, and
    /// optionally the coefficient field generated by a_p for a given a_p(E).
    Twists {
        #[arg(long)]
        m: u64,
        /// The quadratic character of K contributes inner twists
        #[arg(long)]
        f_nontrivial: bool,
        /// a_p of the curve, to determine the coefficient field
        #[arg(long, requires = "p", allow_hyphen_values = true)]
        ap_e: Option<i64>,
        #[arg(long, requires = "ap_e")]
        p: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify the digest and internal consistency of an elimination
    /// certificate; with --forms, recompute it and compare.
    CertifyVerify {
        path: PathBuf,
        #[arg(long)]
        forms: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write a JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value = "quartic")]
    family: Family,
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    p: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Gate(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Gate(_) => 2,
            Failure::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Gate(m) | Failure::Data(m) => m,
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<SieveError> for Failure {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::ExtraUnits | SieveError::Precondition { .. } => Failure::Gate(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<EliminateError> for Failure {
    fn from(e: EliminateError) -> Self {
        match e {
            EliminateError::BadEll { .. } | EliminateError::EmptyEllSet => Failure::Gate(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<FreyError> for Failure {
    fn from(e: FreyError) -> Self {
        Failure::Gate(e.to_string())
    }
}

impl From<TwistError> for Failure {
    fn from(e: TwistError) -> Self {
        Failure::Gate(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_json<T: Serialize>(out: &OutArg, value: &T) -> Result<(), Failure> {
    let Some(path) = &out.out else { return Ok(()) };
    let path = resolve_out(path);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Data(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn field(d: u64) -> Result<QuadField, Failure> {
    QuadField::new(d).map_err(|e| Failure::Gate(e.to_string()))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Hypotheses { d, family, out } => hypotheses(d, family, &out),
        Command::Classnum { d, out } => classnum(d, &out),
        Command::Split { d, ells, out } => split(d, &ells, &out),
        Command::Frey { curve, out } => frey_cmd(&curve, &out),
        Command::Ap { curve, ell, out } => ap(&curve, ell, &out),
        Command::Sieve2 { d, ignore_hypotheses, out } => sieve2(d, ignore_hypotheses, &out),
        Command::Sieve3 { free_d, d, r_max, q_max, out } => {
            let mode = match (free_d, d) {
                (true, _) => ThreeTorsionMode::FreeD,
                (false, Some(d)) => ThreeTorsionMode::FixedD(d),
                (false, None) => return Err(Failure::Usage("either --free-d or --d is required".into())),
            };
            sieve3(mode, ExponentBounds { r_max, q_max }, &out)
        }
        Command::Eliminate { d, ells, forms, threshold, out } => eliminate_cmd(d, &ells, &forms, threshold, out),
        Command::Twists { m, f_nontrivial, ap_e, p, out } => twists_cmd(m, f_nontrivial, ap_e.zip(p), &out),
        Command::CertifyVerify { path, forms } => certify_verify(&path, forms.as_deref()),
    }
}

fn hypotheses(d: u64, family: Family, out: &OutArg) -> Outcome {
    let report = quadfield::check_hypotheses(d, family);
    write_json(out, &report)?;
    let mut s = String::new();
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    let cong = match family {
        Family::Quartic => "d = 3 (mod 8)",
        Family::Sextic => "d = 19 (mod 24)",
    };
    let h_gate = match family {
        Family::Quartic => "3 does not divide h",
        Family::Sextic => "gcd(h, 6) = 1",
    };
    writeln!(s, "d = {d}, family = {family}").unwrap();
    writeln!(s, "  {:<24} {}", "d prime", mark(report.d_prime)).unwrap();
    writeln!(s, "  {:<24} {}", cong, mark(report.congruence)).unwrap();
    match report.class_number {
        Some(h) => writeln!(s, "  {:<24} {} (h = {h})", h_gate, mark(report.class_number_gate)).unwrap(),
        None => writeln!(s, "  {:<24} {} (d not squarefree)", h_gate, mark(false)).unwrap(),
    }
    writeln!(s, "  {:<24} {}", "2 inert", mark(report.two_inert)).unwrap();
    if let Some(t) = report.three_inert {
        writeln!(s, "  {:<24} {}", "3 inert", mark(t)).unwrap();
    }
    if report.passes() {
        writeln!(s, "all hypotheses hold").unwrap();
        Ok(s)
    } else {
        print!("{s}");
        Err(Failure::Gate(format!("hypotheses fail for d = {d}: {}", report.failures().join(", "))))
    }
}

#[derive(Serialize)]
struct ClassNumberReport {
    d: u64,
    disc: i64,
    h_forms: u64,
    h_ideals: u64,
    reduced_forms: Vec<(i64, i64, i64)>,
}

fn classnum(d: u64, out: &OutArg) -> Outcome {
    let k = field(d)?;
    let forms = quadfield::reduced_forms(k.disc());
    let h_forms = quadfield::class_number(&k);
    let h_ideals = quadfield::class_number_by_ideals(&k);
    if h_forms != h_ideals {
        return Err(Failure::Data(format!(
            "class number disagreement for d = {d}: forms {h_forms}, ideals {h_ideals}"
        )));
    }
    let report = ClassNumberReport {
        d,
        disc: k.disc(),
        h_forms,
        h_ideals,
        reduced_forms: forms.iter().map(|f| (f.a, f.b, f.c)).collect(),
    };
    write_json(out, &report)?;
    let mut s = format!("h({}) = {h_forms}\n", k.disc());
    for f in &forms {
        writeln!(s, "  ({}, {}, {})", f.a, f.b, f.c).unwrap();
    }
    Ok(s)
}

#[derive(Serialize)]
struct SplitRow {
    ell: u64,
    kind: quadfield::SplittingKind,
    sqrt_minus_d: Option<u64>,
    residue_norm: u64,
}

fn split(d: u64, ells: &[u64], out: &OutArg) -> Outcome {
    let k = field(d)?;
    let mut rows = Vec::new();
    for &ell in ells {
        let sp = splitting_type(ell, &k).map_err(|e| Failure::Gate(e.to_string()))?;
        rows.push(SplitRow {
            ell,
            kind: sp.kind,
            sqrt_minus_d: sp.sqrt_minus_d,
            residue_norm: sp.residue_norm,
        });
    }
    write_json(out, &rows)?;
    let mut s = format!("{:>8}  {:<9} {:>10}  {}\n", "ell", "type", "norm", "sqrt(-d) mod ell");
    for r in &rows {
        let root = r.sqrt_minus_d.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        let kind = format!("{:?}", r.kind).to_lowercase();
        writeln!(s, "{:>8}  {:<9} {:>10}  {root}", r.ell, kind, r.residue_norm).unwrap();
    }
    Ok(s)
}

#[derive(Serialize)]
struct FreyReport {
    family: Family,
    d: u64,
    a: i64,
    b: i64,
    p: u64,
    c_power: String,
    a_invariants: [String; 5],
    discriminant: String,
    c4: String,
    j_numerator: String,
    j_denominator: String,
    cm: Option<CmVerdict>,
}

fn frey_cmd(c: &CurveArgs, out: &OutArg) -> Outcome {
    let e = frey::build_frey(c.family, c.a, c.b, c.d, c.p)?;
    let cm = (c.family == Family::Quartic).then(|| frey::cm_check(c.a, c.b, c.d, c.p));
    let report = FreyReport {
        family: c.family,
        d: c.d,
        a: c.a,
        b: c.b,
        p: c.p,
        c_power: e.c_power.to_string(),
        a_invariants: e.model.coefficients().map(|x| x.to_string()),
        discriminant: e.delta.to_string(),
        c4: e.c4.to_string(),
        j_numerator: e.j_num.to_string(),
        j_denominator: e.j_den.to_string(),
        cm: cm.clone(),
    };
    write_json(out, &report)?;
    let mut s = String::new();
    writeln!(s, "{} Frey curve over {} for (a, b) = ({}, {}), c^{} = {}", c.family, e.field(), c.a, c.b, c.p, e.c_power).unwrap();
    for (name, v) in ["a1", "a2", "a3", "a4", "a6"].iter().zip(&report.a_invariants) {
        writeln!(s, "  {name:<6} = {v}").unwrap();
    }
    writeln!(s, "  Delta  = {}", report.discriminant).unwrap();
    writeln!(s, "  c4     = {}", report.c4).unwrap();
    writeln!(s, "  j      = ({}) / ({})", report.j_numerator, report.j_denominator).unwrap();
    match cm {
        Some(CmVerdict::NoCm) => writeln!(s, "  CM: excluded").unwrap(),
        Some(CmVerdict::CmCandidate { c_power, forced_p, .. }) => writeln!(
            s,
            "  CM: 175a^4 = 81db^2 holds; c^p = {c_power}, forced p = {}",
            forced_p.map(|p| p.to_string()).unwrap_or_else(|| "none".into())
        )
        .unwrap(),
        None => {}
    }
    Ok(s)
}

#[derive(Serialize)]
struct ApRow {
    prime: String,
    norm: u64,
    reduction: Option<frey::ReductionKind>,
    trace: Option<i64>,
    note: Option<String>,
}

fn ap(c: &CurveArgs, ell: u64, out: &OutArg) -> Outcome {
    let e = frey::build_frey(c.family, c.a, c.b, c.d, c.p)?;
    let sp = splitting_type(ell, e.field()).map_err(|e| Failure::Gate(e.to_string()))?;
    let ideals = sp.ideals().map_err(|e| Failure::Gate(e.to_string()))?;
    let mut rows = Vec::new();
    for prime in &ideals {
        let name = match prime {
            quadfield::PrimeIdeal::Split { ell, sqrt_minus_d } => format!("({ell}, sqrt(-d) - {sqrt_minus_d})"),
            quadfield::PrimeIdeal::Inert { ell } => format!("({ell})"),
            quadfield::PrimeIdeal::Ramified { ell } => format!("P_{ell}"),
        };
        let mut row = ApRow {
            prime: name,
            norm: prime.norm(),
            reduction: None,
            trace: None,
            note: None,
        };
        match e.reduction_type(prime) {
            Ok(r) => {
                row.reduction = Some(r.kind);
                if r.kind == frey::ReductionKind::Good {
                    let curve = ecfinite::reduce_frey_at(&e, prime).map_err(|e| Failure::Data(e.to_string()))?;
                    if curve.is_smooth() {
                        row.trace = Some(ecfinite::count_points(&curve).map_err(|e| Failure::Data(e.to_string()))?);
                    } else {
                        row.note = Some("model not minimal here; trace not computed".into());
                    }
                }
            }
            Err(err) => row.note = Some(err.to_string()),
        }
        rows.push(row);
    }
    write_json(out, &rows)?;
    let mut s = format!("{:<28} {:>10}  {:<15} {:>8}\n", "prime", "norm", "reduction", "a_P");
    for r in &rows {
        let red = r.reduction.map(|k| format!("{k:?}").to_lowercase()).unwrap_or_else(|| "-".into());
        let tr = r.trace.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        writeln!(s, "{:<28} {:>10}  {:<15} {:>8}", r.prime, r.norm, red, tr).unwrap();
        if let Some(n) = &r.note {
            writeln!(s, "  note: {n}").unwrap();
        }
    }
    Ok(s)
}

fn sieve2(d: u64, ignore_hypotheses: bool, out: &OutArg) -> Outcome {
    let report = quadfield::check_hypotheses(d, Family::Quartic);
    if !report.passes() && !ignore_hypotheses {
        return Err(Failure::Gate(format!(
            "hypotheses fail for d = {d}: {}",
            report.failures().join(", ")
        )));
    }
    let r = sieve::sieve_2torsion(d)?;
    write_json(out, &r)?;
    let mut s = String::new();
    let pats: Vec<String> = sieve::solve_mod8().patterns.iter().map(|p| p.to_string()).collect();
    writeln!(s, "d = {d}: exponents t <= {}, r <= {}; mod-8 patterns {}", r.t_max, r.r_max, pats.join(", ")).unwrap();
    writeln!(s, "  base change candidates:     {}", r.base_change.len()).unwrap();
    writeln!(s, "  non-base-change candidates: {}", r.non_base_change.len()).unwrap();
    writeln!(s, "  cells obstructed: parity {}, mod 8 {}, too small for d {}", r.parity_obstructed, r.mod8_obstructed, r.too_small_for_d).unwrap();
    writeln!(s, "  brute-force cross-check:    {}", if r.brute_force_agrees { "agrees" } else { "DISAGREES" }).unwrap();
    for c in r.non_base_change.iter() {
        writeln!(s, "  non-base-change: t={} r={} sigma={} a=({} + {} sqrt(-d))/2", c.t, c.r, c.sigma, c.a_u, c.a_v).unwrap();
    }
    Ok(s)
}

fn sieve3(mode: ThreeTorsionMode, bounds: ExponentBounds, out: &OutArg) -> Outcome {
    let cands = sieve::sieve_3torsion(mode, bounds)?;
    if let Some(path) = &out.out {
        let path = resolve_out(path);
        let records: Vec<SieveRecord> = cands.iter().cloned().map(SieveRecord::Sextic).collect();
        let file = std::fs::File::create(&path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        sieve::write_records(std::io::BufWriter::new(file), &records)?;
    }
    let mut s = format!("bounds r <= {}, q <= {}: {} candidate(s)\n", bounds.r_max, bounds.q_max, cands.len());
    writeln!(s, "{:>8} {:>8} {:>8} {:>5} {:>4} {:>4}  {}", "d", "alpha", "beta", "sign", "r", "q", "flags").unwrap();
    for c in &cands {
        let flags = if c.beyond_default_bounds { "beyond-default-bounds" } else { "" };
        writeln!(s, "{:>8} {:>8} {:>8} {:>5} {:>4} {:>4}  {flags}", c.d, c.alpha, c.beta, c.sign, c.r, c.q).unwrap();
    }
    Ok(s)
}

fn run_elimination(d: u64, ells: &[u64], forms: &Path, threshold: u64) -> Result<EliminationCertificate, Failure> {
    let report = quadfield::check_hypotheses(d, Family::Quartic);
    if !report.passes() {
        return Err(Failure::Gate(format!(
            "hypotheses fail for d = {d}: {}",
            report.failures().join(", ")
        )));
    }
    let bytes = std::fs::read(forms).map_err(|e| Failure::Data(format!("{}: {e}", forms.display())))?;
    let text = String::from_utf8(bytes).map_err(|e| Failure::Data(format!("{}: {e}", forms.display())))?;
    let records = ingest::parse_newforms(&text)?;
    let digest = ingest::sha256_hex(text.as_bytes());
    Ok(eliminate::eliminate_all(ells, d, &records, threshold, Some(digest))?)
}

fn eliminate_cmd(d: u64, ells: &[u64], forms: &Path, threshold: u64, out: Option<PathBuf>) -> Outcome {
    let cert = run_elimination(d, ells, forms, threshold)?;
    let path = resolve_out(&out.unwrap_or_else(|| PathBuf::from(format!("eliminate-d{d}.json"))));
    ingest::write_certificate(&cert, &path)?;
    let mut s = format!("d = {d}, ells = {:?}, threshold = {threshold}\n", cert.ells);
    for f in &cert.forms {
        let verdict = match f.verdict {
            Verdict::Bounded => "bounded",
            Verdict::NotEliminable => "NOT ELIMINABLE",
        };
        let surv: Vec<String> = f.surviving_primes.iter().map(|p| p.to_string()).collect();
        writeln!(s, "  {:<16} level {:<8} gcd {:<20} {verdict}", f.label, f.level, f.gcd).unwrap();
        if !surv.is_empty() {
            writeln!(s, "    primes dividing gcd: {}", surv.join(", ")).unwrap();
        }
        writeln!(s, "    {}", f.conclusion).unwrap();
    }
    writeln!(s, "certificate written to {}", path.display()).unwrap();
    Ok(s)
}

#[derive(Serialize)]
struct TwistReport {
    m: u64,
    group: Vec<twists::InnerTwist>,
    labels: Vec<String>,
    diagram: twists::FieldDiagram,
    coefficient_field: Option<Vec<twists::CoefficientFieldInfo>>,
}

fn twists_cmd(m: u64, f_nontrivial: bool, ap: Option<(i64, u64)>, out: &OutArg) -> Outcome {
    let group = twists::inner_twist_group(m, f_nontrivial)?;
    let diagram = twists::field_diagram(m)?;
    let coefficient_field = ap.map(|(a, p)| twists::coefficient_field_info(a, p, m)).transpose()?;
    let report = TwistReport {
        m,
        labels: group.iter().map(|t| t.label()).collect(),
        group,
        diagram,
        coefficient_field,
    };
    write_json(out, &report)?;
    let mut s = format!("M = {m}: {} inner twist(s)\n", report.group.len());
    for t in &report.group {
        let f = if t.flips_f { " (acts on F)" } else { "" };
        writeln!(s, "  sigma_{:<4} {}{f}", t.j, t.label()).unwrap();
    }
    let dg = &report.diagram;
    writeln!(s, "field diagram: index over K.Q_eps = {}, admissible [Q_eps : Q] in {:?}{}", dg.index_over_k_eps, dg.eps_field_degrees, if dg.degenerate { " (degenerate)" } else { "" }).unwrap();
    if let Some(info) = &report.coefficient_field {
        for i in info {
            let sign = if i.sign > 0 { "+" } else { "-" };
            writeln!(s, "  sign {sign}: eta = {}, [K_f : Q(zeta_M)] = {}, Galois group {}", i.eta, i.degree_over_cyclotomic, i.galois_group_shape).unwrap();
        }
    }
    Ok(s)
}

fn certify_verify(path: &Path, forms: Option<&Path>) -> Outcome {
    let (env, cert): (_, EliminationCertificate) = ingest::read_certificate(path)?;
    if !cert.is_consistent() {
        return Err(Failure::Data(format!("{}: gcd entries do not match the per-ell products", path.display())));
    }
    let mut s = format!("{}: digest {} ok, {} form(s), d = {}\n", path.display(), env.digest, cert.forms.len(), cert.d);
    if let Some(forms) = forms {
        let again = run_elimination(cert.d, &cert.ells, forms, cert.irreducibility_threshold)?;
        if ingest::canonical_body(&again)? != ingest::canonical_body(&cert)? {
            return Err(Failure::Data("recomputed certificate differs from the stored one".into()));
        }
        writeln!(s, "recomputation matches").unwrap();
    }
    Ok(s)
}
