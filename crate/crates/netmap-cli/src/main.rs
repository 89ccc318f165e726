//! `netmap`: command-line analysis of NET map presentations.
//!
//! Exit codes: 0 success, 1 a requested consistency check failed, 2 input
//! error, 3 geometric failure of the zigzag algorithm, 4 unsupported affine
//! map.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use netmap::core_lattice::{GroupElem, IntVec2, Slope};
use netmap::halfspace::{boundary_interval, render_svg, HalfSpace};
use netmap::nonsep::{
    degree2_refutation, postcritical_subset, search_nonseparating, FinAbGroup, NonsepChecker,
    NonsepError, SymmetricFour, DEFAULT_SEARCH_BUDGET,
};
use netmap::obstruction::{
    enumerate_slopes, obstruction_report, obstruction_report_for_slopes, ObstructionVerdict,
};
use netmap::presentation::NetMapPresentation;
use netmap::pullback::{analyze_slope, main_residue_classes, PullbackError, PullbackSummary};
use netmap::slope_fn::{sigma, SlopeFnError};
use netmap::symmetry::{
    affine_equation, consistency_suite, sigma_delta1, sigma_delta2, twist_equation, AffineMap,
    SymmetryError,
};

#[derive(Parser, Debug)]
#[command(
    name = "netmap",
    version,
    about = "Exact analysis of nearly Euclidean Thurston maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pullback degree, coset numbers and component counts for a slope.
    Analyze {
        /// Presentation file.
        file: PathBuf,
        /// Slope "p/q", "p" or "inf".
        #[arg(long, required_unless_present = "table", conflicts_with = "table")]
        slope: Option<String>,
        /// One row per residue class (q mod 20, 2p+q mod 5) of the degree-10 example.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// The slope function sigma_f at one slope, or as a CSV graph.
    Slope {
        /// Presentation file.
        file: PathBuf,
        /// Slope "p/q", "p" or "inf".
        #[arg(required_unless_present = "graph", conflicts_with = "graph")]
        slope: Option<String>,
        /// Emit sigma_f on all slopes p/q with |p|, q <= QMAX as CSV.
        #[arg(long, value_name = "QMAX")]
        graph: Option<i64>,
    },
    /// Search for an obstruction or a half-space certificate of its absence.
    Obstructions {
        /// Presentation file.
        file: PathBuf,
        /// Largest |p|, |q| of the slopes searched.
        #[arg(long, default_value_t = 20)]
        height: i64,
        /// Largest number of half-spaces in a cover.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        /// Use exactly these comma-separated slopes instead of searching.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        slopes: Option<Vec<String>>,
        /// Write a picture of the certificate's half-spaces.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Functional equations of the Teichmüller map.
    Equations {
        /// Presentation file.
        file: PathBuf,
        /// Slope of the Dehn twist.
        #[arg(
            required_unless_present = "affine",
            conflicts_with = "affine",
            allow_hyphen_values = true
        )]
        slope: Option<String>,
        /// Affine map "a,b;c,d;tx,ty" (h -> [[a,b],[c,d]] h + (tx,ty)).
        #[arg(long, allow_hyphen_values = true)]
        affine: Option<String>,
        /// Check the equation on all slopes up to this height.
        #[arg(long, value_name = "N")]
        check: Option<i64>,
    },
    /// Nonseparating subsets of Z/m + Z/n, or the constant-Teichmüller test
    /// of a presentation file.
    Nonsep {
        /// Group "m,n" or a presentation file.
        target: String,
        /// Check the subset "(a,b);(a,b);(a,b);(a,b)".
        #[arg(long, allow_hyphen_values = true)]
        check: Option<String>,
        /// List all nonseparating subsets.
        #[arg(long)]
        search: bool,
        /// Enumerate the nonseparating subsets of Z/4 + Z/2 against the
        /// conditions a degree-2 map would impose.
        #[arg(long)]
        refute: bool,
        /// Largest number of candidate subsets a search may examine.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
}

/// A failure together with its exit code.
#[derive(Debug)]
enum CliError {
    Check(String),
    Input(String),
    Geometry(String),
    Unsupported(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Check(m)
            | CliError::Input(m)
            | CliError::Geometry(m)
            | CliError::Unsupported(m) => m,
        }
    }
}

impl From<SlopeFnError> for CliError {
    fn from(e: SlopeFnError) -> Self {
        match e {
            SlopeFnError::Pullback(_) => CliError::Input(e.to_string()),
            _ => CliError::Geometry(e.to_string()),
        }
    }
}

impl From<PullbackError> for CliError {
    fn from(e: PullbackError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::SlopeFn(inner) => inner.into(),
            other => CliError::Unsupported(other.to_string()),
        }
    }
}

impl From<NonsepError> for CliError {
    fn from(e: NonsepError) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult = Result<String, CliError>;

fn load(path: &Path) -> Result<NetMapPresentation, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    NetMapPresentation::parse(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_slope(text: &str) -> Result<Slope, CliError> {
    let s: Slope = text
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("invalid slope {text:?}")))?;
    if s.is_essential() {
        Ok(s)
    } else {
        Err(CliError::Input(format!("invalid slope {text:?}")))
    }
}

fn parse_ints(text: &str, expected: usize) -> Result<Vec<i64>, CliError> {
    let bad = || {
        CliError::Input(format!(
            "expected {expected} comma-separated integers, got {text:?}"
        ))
    };
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    if values.len() == expected {
        Ok(values)
    } else {
        Err(bad())
    }
}

fn parse_affine(text: &str) -> Result<AffineMap, CliError> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!(
            "expected \"a,b;c,d;tx,ty\", got {text:?}"
        )));
    }
    let row0 = parse_ints(parts[0], 2)?;
    let row1 = parse_ints(parts[1], 2)?;
    let t = parse_ints(parts[2], 2)?;
    let linear = [[row0[0], row0[1]], [row1[0], row1[1]]];
    let det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
    if det.abs() != 1 {
        return Err(CliError::Unsupported(format!(
            "linear part has determinant {det}, not +-1"
        )));
    }
    Ok(AffineMap::new(linear, IntVec2::new(t[0], t[1])))
}

fn parse_subset(group: &FinAbGroup, text: &str) -> Result<SymmetricFour, CliError> {
    let elems = text
        .split(';')
        .map(|item| {
            let inner = item
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| CliError::Input(format!("expected \"(a,b)\", got {item:?}")))?;
            let v = parse_ints(inner, 2)?;
            Ok(group.elem(v[0], v[1]))
        })
        .collect::<Result<Vec<GroupElem>, CliError>>()?;
    let reps: [GroupElem; 4] = elems
        .try_into()
        .map_err(|_| CliError::Input(format!("expected four elements, got {text:?}")))?;
    Ok(SymmetricFour::new(group, reps)?)
}

fn fmt_decimal(s: Slope) -> String {
    match s {
        Slope::NonEssential => "o".into(),
        _ if s.is_infinity() => "inf".into(),
        _ => format!("{:.6}", s.to_f64()),
    }
}

fn summary_csv(s: &PullbackSummary) -> String {
    let [c1, c2, c3, c4] = s.coset_numbers;
    format!(
        "{},{},{c1},{c2},{c3},{c4},{},{},{},{}",
        s.d, s.d_prime, s.essential, s.peripheral, s.null_homotopic, s.multiplier
    )
}

const SUMMARY_HEADER: &str = "d,d',c1,c2,c3,c4,essential,peripheral,null,delta";

fn cmd_analyze(file: &Path, slope: Option<&str>, table: bool, format: Format) -> CliResult {
    let pres = load(file)?;
    let mut out = String::new();
    if table {
        if format == Format::Csv {
            let _ = writeln!(out, "q mod 20,2p+q mod 5,slope,{SUMMARY_HEADER}");
        }
        for class in main_residue_classes() {
            let s = analyze_slope(&pres, class.representative)?;
            match format {
                Format::Text => {
                    let _ = writeln!(
                        out,
                        "q={:<18} 2p+q={:<7} {:>4}: {s}",
                        class.q_mod_20, class.two_p_plus_q_mod_5, class.representative
                    );
                }
                Format::Csv => {
                    let _ = writeln!(
                        out,
                        "\"{}\",\"{}\",{},{}",
                        class.q_mod_20,
                        class.two_p_plus_q_mod_5,
                        class.representative,
                        summary_csv(&s)
                    );
                }
            }
        }
        return Ok(out);
    }
    let slope = parse_slope(slope.expect("clap requires a slope"))?;
    let s = analyze_slope(&pres, slope)?;
    match format {
        Format::Text => {
            let _ = writeln!(out, "{s}");
        }
        Format::Csv => {
            let _ = writeln!(out, "slope,{SUMMARY_HEADER}\n{slope},{}", summary_csv(&s));
        }
    }
    Ok(out)
}

fn cmd_slope(file: &Path, slope: Option<&str>, graph: Option<i64>) -> CliResult {
    let pres = load(file)?;
    let mut out = String::new();
    if let Some(qmax) = graph {
        if qmax < 1 {
            return Err(CliError::Input("--graph needs a positive bound".into()));
        }
        let mut slopes = enumerate_slopes(qmax);
        slopes.sort_by(|a, b| a.cmp_value(*b).expect("essential slopes"));
        out.push_str("slope,value,sigma,sigma_value\n");
        for s in slopes {
            let image = sigma(&pres, s)?;
            let _ = writeln!(out, "{s},{},{image},{}", fmt_decimal(s), fmt_decimal(image));
        }
        return Ok(out);
    }
    let slope = parse_slope(slope.expect("clap requires a slope"))?;
    let _ = writeln!(out, "{}", sigma(&pres, slope)?);
    Ok(out)
}

/// Real interval shown in the picture: all bounded boundary circles plus a
/// margin, and at least [-10, 10].
fn svg_range(spaces: &[HalfSpace]) -> (f64, f64) {
    let (mut lo, mut hi) = (-10.0_f64, 10.0_f64);
    for h in spaces {
        let c = *h.center.numer() as f64 / *h.center.denom() as f64;
        let r = h.radius.map_or(0.0, |r| r.to_f64());
        lo = lo.min(c - r - 1.0);
        hi = hi.max(c + r + 1.0);
    }
    (lo.floor(), hi.ceil())
}

fn cmd_obstructions(
    file: &Path,
    height: i64,
    budget: usize,
    slopes: Option<&[String]>,
    svg: Option<&Path>,
) -> CliResult {
    let pres = load(file)?;
    let verdict = match slopes {
        Some(list) => {
            let parsed = list
                .iter()
                .map(|s| parse_slope(s))
                .collect::<Result<Vec<_>, _>>()?;
            obstruction_report_for_slopes(&pres, &parsed)?
        }
        None => obstruction_report(&pres, height, budget)?,
    };
    let mut out = format!("{verdict}\n");
    let mut spaces: &[HalfSpace] = &[];
    if let ObstructionVerdict::Unobstructed(cert) = &verdict {
        spaces = &cert.spaces;
        for h in &cert.spaces {
            let _ = writeln!(out, "  {h}");
            let _ = writeln!(out, "    boundary {}", boundary_interval(h));
        }
        for d in &cert.leftovers {
            let _ = writeln!(out, "  leftover {d}");
        }
    }
    if let Some(path) = svg {
        let (lo, hi) = svg_range(spaces);
        fs::write(path, render_svg(spaces, lo, hi))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

fn cmd_equations(
    file: &Path,
    slope: Option<&str>,
    affine: Option<&str>,
    check: Option<i64>,
) -> CliResult {
    let pres = load(file)?;
    let mut out = String::new();
    if let Some(text) = affine {
        let map = parse_affine(text)?;
        let eq = affine_equation(&pres, &map)?;
        let (sd1, m1) = sigma_delta1(&pres, &map)?;
        let _ = writeln!(out, "{eq}");
        let _ = writeln!(out, "Sigma_delta2 = {}", sigma_delta2(&map.linear));
        let _ = writeln!(out, "Sigma_delta1 = {sd1}");
        let _ = writeln!(
            out,
            "lambda1 matrix = [[{},{}],[{},{}]]",
            m1[0][0], m1[0][1], m1[1][0], m1[1][1]
        );
        if let Some(n) = check {
            let violations = consistency_suite(&pres, &[map], n)?;
            if let Some(v) = violations.first() {
                return Err(CliError::Check(format!(
                    "{out}INCONSISTENT ({} violations; first at slope {}: {} != {})",
                    violations.len(),
                    v.slope,
                    v.lhs,
                    v.rhs
                )));
            }
            let _ = writeln!(out, "CONSISTENT (height {n})");
        }
        return Ok(out);
    }
    let slope = parse_slope(slope.expect("clap requires a slope"))?;
    let eq = twist_equation(&pres, slope)?;
    let _ = writeln!(out, "{eq}");
    let _ = writeln!(
        out,
        "phi^{} = {}, psi^{} = {}",
        eq.inner_power,
        eq.inner.pow(eq.inner_power),
        eq.outer_power,
        eq.outer.pow(eq.outer_power)
    );
    if let Some(n) = check {
        for s in enumerate_slopes(n) {
            if !eq.holds_for_slope(&pres, s)? {
                return Err(CliError::Check(format!("{out}INCONSISTENT at slope {s}")));
            }
        }
        let _ = writeln!(out, "CONSISTENT (height {n})");
    }
    Ok(out)
}

fn cmd_nonsep(
    target: &str,
    check: Option<&str>,
    search: bool,
    refute: bool,
    budget: u64,
) -> CliResult {
    let mut out = String::new();
    if refute {
        let report = degree2_refutation();
        for entry in &report {
            let _ = writeln!(out, "{entry}");
        }
        let realizable = report.iter().filter(|e| e.realizable()).count();
        let _ = writeln!(out, "realizable: {realizable}");
        return Ok(out);
    }
    let as_group = target.split_once(',').and_then(|(m, n)| {
        let (m, n) = (m.trim().parse::<i64>().ok()?, n.trim().parse::<i64>().ok()?);
        Some((m, n))
    });
    let (group, subset) = match as_group {
        Some((m, n)) => (FinAbGroup::new(m, n)?, None),
        None => {
            let pres = load(Path::new(target))?;
            let (group, subset) = postcritical_subset(&pres);
            (group, Some(subset))
        }
    };
    if search {
        let found = search_nonseparating(&group, budget)?;
        for h in &found {
            let _ = writeln!(out, "{h}");
        }
        let _ = writeln!(out, "count: {}", found.len());
        return Ok(out);
    }
    let subset = match (check, subset) {
        (Some(text), _) => parse_subset(&group, text)?,
        (None, Some(s)) => s,
        (None, None) => {
            return Err(CliError::Input(
                "give --check, --search or --refute with a group".into(),
            ))
        }
    };
    let checker = NonsepChecker::new(group);
    let _ = writeln!(out, "group {group}, subset {subset}");
    match checker.witness(&subset) {
        None => {
            let _ = writeln!(out, "NONSEPARATING");
        }
        Some(w) => {
            let _ = writeln!(out, "SEPARATING");
            let _ = writeln!(out, "  witness {w}");
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Analyze {
            file,
            slope,
            table,
            format,
        } => cmd_analyze(&file, slope.as_deref(), table, format),
        Command::Slope { file, slope, graph } => cmd_slope(&file, slope.as_deref(), graph),
        Command::Obstructions {
            file,
            height,
            budget,
            slopes,
            svg,
        } => cmd_obstructions(&file, height, budget, slopes.as_deref(), svg.as_deref()),
        Command::Equations {
            file,
            slope,
            affine,
            check,
        } => cmd_equations(&file, slope.as_deref(), affine.as_deref(), check),
        Command::Nonsep {
            target,
            check,
            search,
            refute,
            budget,
        } => cmd_nonsep(&target, check.as_deref(), search, refute, budget),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Check(report) = &e {
                println!("{report}");
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.code())
        }
    }
}
