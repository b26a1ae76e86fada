use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use frobdesc_core::constructions::{build_family_a, build_family_b, decompose_target};
use frobdesc_core::padic::{self, separability_bound};
use frobdesc_core::pencil::{self, DualGraph};
use frobdesc_core::tower::{check_trace_invariants, genus_drop_check};
use frobdesc_core::{
    analyze, fixtures, load_tower, save_tower, sharpness_sweep, FiniteField, ReportDocument,
    TowerError, TowerSpec, F16, F2, F4, F8,
};

#[derive(Parser)]
#[command(
    name = "frobdesc",
    version,
    about = "Frobenius descent of singular primes in characteristic 2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal partition score tau_p(d)
    Tau {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        d: u64,
        /// Cross-check against partition enumeration
        #[arg(long)]
        oracle: bool,
    },
    /// Level from which a singular prime's restriction is separable
    Bound {
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        sep: u64,
        #[arg(short)]
        p: u64,
    },
    /// Emit a tower document for a family or a target delta
    Construct {
        #[arg(
            long,
            value_enum,
            ignore_case = true,
            conflicts_with = "delta",
            requires = "i"
        )]
        family: Option<Family>,
        #[arg(short, requires = "family")]
        i: Option<u32>,
        #[arg(short, requires = "family")]
        j: Option<u32>,
        #[arg(short, requires = "family")]
        l: Option<u64>,
        #[arg(long, required_unless_present = "family")]
        delta: Option<u64>,
        /// Output path, `-` for stdout
        #[arg(long)]
        emit: PathBuf,
    },
    /// Run the descent on a tower document (`-` reads stdin)
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build and analyze the sharp tower for every d up to N
    Sharpness {
        #[arg(long)]
        max_d: u64,
        #[arg(long, env = "FROBDESC_JOBS")]
        jobs: Option<usize>,
    },
    /// Checks on the quartic pencil and its degenerate fibre
    Pencil {
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Vec<Check>,
        /// Degree bound for the diophantine search
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
        /// Exhaustive checks run over F_(2^E)
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=4))]
        field_exp: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Invariants,
    Intersection,
    Diophantine,
    Maps,
    Singular,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` is a failed check, `Err` a usage or format error.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Tau { p, d, oracle } => tau(p, d, oracle),
        Command::Bound { delta, sep, p } => bound(delta, sep, p),
        Command::Construct {
            family,
            i,
            j,
            l,
            delta,
            emit,
        } => construct(family, i, j, l, delta, &emit),
        Command::Analyze { path, format } => analyze_cmd(&path, format),
        Command::Sharpness { max_d, jobs } => sharpness(max_d, jobs),
        Command::Pencil {
            checks,
            max_deg,
            field_exp,
        } => pencil_cmd(&checks, max_deg, field_exp),
    }
}

fn tau(p: u64, d: u64, oracle: bool) -> Result<bool> {
    let closed = padic::tau_closed(d, p)?;
    println!("{closed}");
    if !oracle {
        return Ok(true);
    }
    let brute = padic::tau_bruteforce(d, p)?;
    let agree = brute == closed;
    println!(
        "enumeration: {brute} ({})",
        if agree { "agrees" } else { "MISMATCH" }
    );
    Ok(agree)
}

fn bound(delta: u64, sep: u64, p: u64) -> Result<bool> {
    let r = separability_bound(delta, sep, p)?;
    println!("d' = {}", r.d_prime);
    match r.consecutive_run {
        Some((j, i)) => println!("d' = P_{j}^{i}, a run of consecutive powers of {p}"),
        None => println!("d' is not a run of consecutive powers of {p}; bound improved by one"),
    }
    println!("bound level: {}", r.bound_level);
    Ok(true)
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text)
}

fn construct(
    family: Option<Family>,
    i: Option<u32>,
    j: Option<u32>,
    l: Option<u64>,
    delta: Option<u64>,
    emit: &Path,
) -> Result<bool> {
    let spec = match (family, delta) {
        (Some(Family::A), _) => {
            let (Some(i), Some(j)) = (i, j) else {
                bail!("family A needs -i and -j");
            };
            build_family_a(i, j, l.unwrap_or(0))?
        }
        (Some(Family::B), _) => {
            if j.is_some() || l.is_some() {
                bail!("family B takes only -i");
            }
            build_family_b(i.context("family B needs -i")?)?
        }
        (None, Some(d)) => decompose_target(d)?.build()?,
        (None, None) => bail!("give --family or --delta"),
    };
    write_output(emit, &save_tower(&spec))?;
    if emit != Path::new("-") {
        let expected = spec.expected.as_ref().and_then(|e| e.delta0);
        eprintln!(
            "wrote {} ({} levels, expected delta_0 = {})",
            emit.display(),
            spec.levels.len(),
            expected.map_or("-".into(), |d| d.to_string())
        );
    }
    Ok(true)
}

/// Errors meaning the document is well formed but its claims do not hold.
fn is_check_failure(e: &TowerError) -> bool {
    matches!(
        e,
        TowerError::WitnessRejected { .. }
            | TowerError::RamificationInconsistent { .. }
            | TowerError::Infeasible { .. }
            | TowerError::InvariantViolated(_)
    )
}

fn analyze_cmd(path: &Path, format: Format) -> Result<bool> {
    let text = read_input(path)?;
    let spec = load_tower(&text).with_context(|| format!("loading {}", path.display()))?;
    let trace = match analyze(&spec) {
        Ok(t) => t,
        Err(e) if is_check_failure(&e) => {
            eprintln!("check failed: {e}");
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let mut pass = true;
    if trace.resolved {
        if let Err(e) = check_trace_invariants(&trace) {
            eprintln!("check failed: {e}");
            pass = false;
        }
    }
    let report = ReportDocument::new(&spec, trace);
    for m in &report.expected_mismatches {
        eprintln!("expected value mismatch: {m}");
        pass = false;
    }
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(pass)
}

fn sharpness(max_d: u64, jobs: Option<usize>) -> Result<bool> {
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = sharpness_sweep(max_d, jobs)?;
    println!(
        "{:>3}  {:<16} {:>7} {:>6} {:>10} {:>9}  status",
        "d", "family", "delta_0", "level", "tau_2(2d)", "deg below"
    );
    for row in &report.rows {
        let params = match row.params {
            frobdesc_core::FamilyParams::A { i, j, l } => format!("A i={i} j={j} l={l}"),
            frobdesc_core::FamilyParams::B { i } => format!("B i={i}"),
        };
        println!(
            "{:>3}  {:<16} {:>7} {:>6} {:>10} {:>9}  {}",
            row.d,
            params,
            row.delta0.map_or("-".into(), |d| d.to_string()),
            row.first_rational_level,
            row.bound_level,
            row.degree_below.map_or("-".into(), |d| d.to_string()),
            if row.pass() {
                "ok".to_string()
            } else {
                row.failures.join("; ")
            }
        );
    }
    let pass = report.all_pass();
    println!(
        "sharpness for d = 1..{max_d}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

struct Outcome {
    pass: bool,
}

impl Outcome {
    fn record(&mut self, ok: bool, name: &str, detail: impl AsRef<str>) {
        println!(
            "[{}] {name}: {}",
            if ok { "PASS" } else { "FAIL" },
            detail.as_ref()
        );
        self.pass &= ok;
    }
}

fn pencil_cmd(checks: &[Check], max_deg: usize, field_exp: u32) -> Result<bool> {
    let all = [
        Check::Invariants,
        Check::Intersection,
        Check::Diophantine,
        Check::Maps,
        Check::Singular,
    ];
    let selected: Vec<Check> = if checks.is_empty() {
        all.to_vec()
    } else {
        checks.to_vec()
    };
    let mut out = Outcome { pass: true };
    for check in all.into_iter().filter(|c| selected.contains(c)) {
        match check {
            Check::Invariants => invariants(&mut out)?,
            Check::Intersection => intersection(&mut out)?,
            Check::Diophantine => diophantine(&mut out, max_deg)?,
            Check::Maps => match field_exp {
                1 => maps::<F2>(&mut out),
                2 => maps::<F4>(&mut out),
                3 => maps::<F8>(&mut out),
                _ => maps::<F16>(&mut out),
            },
            Check::Singular => match field_exp {
                1 => singular::<F2>(&mut out),
                2 => singular::<F4>(&mut out),
                3 => singular::<F8>(&mut out),
                _ => singular::<F16>(&mut out),
            },
        }
    }
    Ok(out.pass)
}

fn invariants(out: &mut Outcome) -> Result<()> {
    let g = pencil::arithmetic_genus(pencil::FIBER_DEGREE);
    out.record(
        g == 3,
        "genus-degree formula",
        format!("plane quartic has arithmetic genus {g}"),
    );
    let spec: TowerSpec = load_tower(fixtures::PENCIL_TOWER)?;
    out.record(
        spec.genus_hint == Some(u64::from(g)),
        "genus hint",
        format!("bundled pencil tower uses genus_hint {:?}", spec.genus_hint),
    );
    let trace = analyze(&spec)?;
    out.record(
        genus_drop_check(&trace, u64::from(g), 0),
        "genus drop",
        format!("g - g_bar = 3 - 0 against delta_0 = {:?}", trace.delta0()),
    );
    let inv = check_trace_invariants(&trace);
    out.record(
        inv.is_ok(),
        "trace invariants",
        inv.err()
            .map_or("pencil trace satisfies all relations".into(), |e| {
                e.to_string()
            }),
    );
    out.record(
        pencil::strangeness_check::<F2>(),
        "strangeness",
        "d/dY of the pencil vanishes identically in characteristic 2",
    );
    out.record(
        !pencil::strangeness_check::<i64>(),
        "strangeness control",
        "d/dY over the integers is nonzero",
    );
    Ok(())
}

fn intersection(out: &mut Outcome) -> Result<()> {
    let graph = DualGraph::from_json(fixtures::A15_FIBER)?;
    let report = pencil::model_classification_checks(&graph)?;
    let mut minus_two = 0;
    let mut others = Vec::new();
    for (name, s) in &report.self_intersections {
        if *s == -2 {
            minus_two += 1;
        } else {
            others.push(format!("{name}: {s}"));
        }
    }
    others.push(format!("{minus_two} components with self-intersection -2"));
    let e_ok = report
        .self_intersections
        .iter()
        .any(|(n, s)| n == "E" && *s == -4);
    out.record(
        e_ok && minus_two == 15,
        "self-intersections",
        others.join(", "),
    );
    out.record(
        report.minimal,
        "minimality",
        format!("minimal={}", report.minimal),
    );
    out.record(
        report.is_a_chain(15),
        "A_15 configuration",
        format!("(-2)-subgraph path length {:?}", report.minus_two_chain),
    );
    for (name, m) in &report.section_pairings {
        out.record(*m == 1, "section pairing", format!("{name}.F = {m}"));
    }
    out.record(
        report.fibre_square == 0,
        "fibre square",
        format!("F.F = {}", report.fibre_square),
    );
    for s in &graph.sections {
        if let Some(v) = s.self_intersection {
            println!(
                "note: {}.{} = {v} is a stored datum, not computed",
                s.name, s.name
            );
        }
    }
    Ok(())
}

fn diophantine(out: &mut Outcome, max_deg: usize) -> Result<()> {
    let reports = [
        pencil::diophantine_search::<F2>(max_deg)?,
        pencil::diophantine_search::<F4>(max_deg)?,
    ];
    for r in reports {
        let detail = if r.solutions.is_empty() {
            format!(
                "no solutions among {} coprime triples; {}",
                r.examined,
                r.scope()
            )
        } else {
            format!(
                "{} solutions, first {:?}",
                r.solutions.len(),
                r.solutions[0]
            )
        };
        out.record(
            r.solutions.is_empty(),
            &format!("F^4 g^2 = G^4 f (g + t f) over F_{}", r.q),
            detail,
        );
    }
    Ok(())
}

fn maps<F: FiniteField>(out: &mut Outcome) {
    let q = F::ORDER;
    let mut points = 0;
    let mut ok = true;
    for c in F::elements() {
        let (n, pass) = pencil::homogeneity_sweep(c);
        points += n;
        ok &= pass;
    }
    out.record(
        ok,
        "homogeneity transform",
        format!("{points} non-singular points with x0 != 0 over all fibres S_c, c in F_{q}"),
    );
    let identity = F::elements().into_iter().all(|c| {
        pencil::projective_points::<F>()
            .into_iter()
            .all(|p| pencil::homogeneity_identity(c, p))
    });
    out.record(
        identity,
        "homogeneity identity",
        format!("S(phi) = x0^4 S + X^4 S(P) at every point of P^2(F_{q})"),
    );
    let inv = pencil::inverse_map_identity_check::<F>();
    out.record(
        inv.symbolic_zero,
        "inverse map",
        "substituted pencil is the zero polynomial",
    );
    out.record(
        inv.pointwise_zero,
        "inverse map values",
        format!("vanishes on all of F_{q}^3"),
    );
    out.record(
        inv.bad_fibre_square,
        "bad fibre",
        "fibre over (0:1) is (Y^2 + XZ)^2",
    );
    let ns = pencil::nonsmooth_locus_check::<F>();
    out.record(
        ns.points_on_locus,
        "non-smooth locus points",
        "singular points lie on X = 0, T0 Z^4 + T1 Y^4 = 0",
    );
    out.record(
        ns.locus_equations,
        "non-smooth locus equations",
        "pencil mod X and the fibre gradient",
    );
    out.record(
        ns.base_map,
        "base map",
        "(y:z) -> (y^4:z^4) is Frobenius twice",
    );
}

fn singular<F: FiniteField>(out: &mut Outcome) {
    let q = F::ORDER;
    let mut ok = true;
    let mut counts = [0usize; 2];
    for c in F::elements() {
        let r = pencil::singular_point_report(c);
        let cube_one = c * c * c == F::one();
        let expected = if cube_one { 3 } else { 2 };
        let pass = r.is_singular && r.multiplicity == expected && r.unique();
        if !pass {
            println!(
                "  c = {c}: point {:?}, multiplicity {}, singular points {:?}",
                r.point, r.multiplicity, r.singular_points
            );
        }
        counts[usize::from(cube_one)] += 1;
        ok &= pass;
    }
    out.record(
        ok,
        "singular point",
        format!(
            "(0:1:c^(1/4)) is the only singular point over F_{q}; multiplicity 2 for {} values of c, 3 for the {} with c^3 = 1",
            counts[0], counts[1]
        ),
    );
    out.record(
        pencil::strange_point_is_singular(F::zero()),
        "strange point",
        "(0:1:0) is the singular point of S_0",
    );
    println!("note: tangent-line and bitangent statements for c != 0 are not checked (they need points over the algebraic closure)");
}
