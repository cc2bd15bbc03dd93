use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use tits_daha::hecke::structure_constants_csv;
use tits_daha::tits::{
    enhanced_length, length_t, less_or_equal, Comparison, CoverBounds, CoverGraph, NoReason, SearchBudget,
};
use tits_daha::verify::{self, ElementBox, Suite};
use tits_daha::{Basis, Error, FiniteOracle, HeckeAlgebra, HeckeElt, RootDatum, TitsElt};

#[derive(Parser, Debug)]
#[command(name = "tits-daha", version, about = "Lengths, Bruhat covers and Hecke products on the Tits double affine Weyl semigroup")]
struct Cli {
    /// Preset name (A1, A2, A1~, A2~); looked up in $TITS_DAHA_DATA first.
    #[arg(long, global = true, default_value = "A1~")]
    datum: String,

    /// JSON root datum file; overrides --datum.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Root height, |n| and coweight box, as `h,n,box`.
    #[arg(long, global = true, default_value = "6,3,4", value_parser = parse_bounds)]
    bounds: Bounds,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Compare products against the classical Iwahori-Hecke algebra (finite data only).
    #[arg(long, global = true)]
    check_oracle: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug)]
struct Bounds {
    cover: CoverBounds,
    coweight_box: i64,
}

impl Bounds {
    fn budget(&self) -> SearchBudget {
        SearchBudget { cover: self.cover, coweight_box: self.coweight_box, ..SearchBudget::default() }
    }

    fn header(&self, d: &RootDatum) -> String {
        format!(
            "# datum {} | height <= {}, n <= {}, box {}",
            d.name(),
            self.cover.height,
            self.cover.n,
            self.coweight_box
        )
    }

    fn json(&self) -> serde_json::Value {
        json!({ "height": self.cover.height, "n": self.cover.n, "box": self.coweight_box })
    }
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [h, n, b] if h > 0 && n >= 0 && b >= 0 => {
            Ok(Bounds { cover: CoverBounds { height: h, n }, coweight_box: b })
        }
        _ => Err("expected h,n,box with h > 0 and n, box >= 0".into()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Bernstein,
    Coset,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enhanced length `big + small ε`.
    Length { element: String },
    /// Reflection covers of an element.
    Covers { element: String },
    /// Elements on bounded up-cover chains from LOWER to UPPER.
    Interval { lower: String, upper: String },
    /// Bounded search for LOWER <= UPPER.
    Compare { lower: String, upper: String },
    /// Structure constants of `T_x T_y` in the double coset basis.
    Multiply { x: String, y: String },
    /// Change of basis. INPUT is an element literal (a coset basis vector),
    /// inline JSON, or a path to a JSON file.
    Convert {
        input: String,
        #[arg(long, value_enum)]
        to: BasisArg,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        /// Coweight coordinates range over [-coord, coord].
        #[arg(long)]
        coord: Option<i64>,
        /// Comma separated levels (affine data).
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<i64>>,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Print the loaded root datum.
    DatumInfo,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported(_) => 3,
            Error::Elimination(_) | Error::IterationCap(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn domain(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn precondition(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

type CliResult<T> = Result<T, Failure>;

fn load_datum(cli: &Cli) -> CliResult<RootDatum> {
    if let Some(path) = &cli.config {
        return Ok(read_datum(path)?);
    }
    if let Some(dir) = std::env::var_os("TITS_DAHA_DATA") {
        let path = Path::new(&dir).join(format!("{}.json", cli.datum));
        if path.is_file() {
            return Ok(read_datum(&path)?);
        }
    }
    Ok(RootDatum::preset(&cli.datum)?)
}

fn read_datum(path: &Path) -> tits_daha::Result<RootDatum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidDatum(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    RootDatum::from_json(name, &text)
}

fn unsupported_output(command: &str, output: Output) -> Failure {
    domain(format!("output {output:?} is not available for {command}").to_lowercase())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> CliResult<String> {
    let d = load_datum(cli)?;
    let parse = |s: &str| TitsElt::parse(&d, s).map_err(Failure::from);
    match &cli.command {
        Command::Length { element } => length(cli, &d, &parse(element)?),
        Command::Covers { element } => covers(cli, &d, &parse(element)?),
        Command::Interval { lower, upper } => interval(cli, &d, &parse(lower)?, &parse(upper)?),
        Command::Compare { lower, upper } => compare(cli, &d, &parse(lower)?, &parse(upper)?),
        Command::Multiply { x, y } => multiply(cli, &d, &parse(x)?, &parse(y)?),
        Command::Convert { input, to } => convert(cli, &d, input, *to),
        Command::Verify { suite, coord, levels, max_len } => {
            verify_cmd(cli, &d, suite, *coord, levels.clone(), *max_len)
        }
        Command::DatumInfo => datum_info(cli, &d),
    }
}

fn length(cli: &Cli, d: &RootDatum, x: &TitsElt) -> CliResult<String> {
    let l = enhanced_length(d, x);
    let l1 = if d.is_affine() { None } else { Some(length_t(d, x, Ratio::from_integer(1))?) };
    match cli.output {
        Output::Text => {
            let mut out = format!("{}: {l}\n", x.render(d));
            if let Some(l1) = l1 {
                writeln!(out, "ℓ_1 = {l1}").unwrap();
            }
            Ok(out)
        }
        Output::Json => {
            let mut v = json!({
                "datum": d.name(),
                "element": x.render(d),
                "big": l.big,
                "small": l.small,
            });
            if let Some(l1) = l1 {
                v["l1"] = json!(l1.to_string());
            }
            Ok(pretty(&v))
        }
        o => Err(unsupported_output("length", o)),
    }
}

fn render_graph(cli: &Cli, d: &RootDatum, g: &CoverGraph, command: &str) -> CliResult<String> {
    match cli.output {
        Output::Dot => Ok(format!("// {}\n{}", &cli.bounds.header(d)[2..], g.to_dot(d))),
        Output::Json => {
            let mut v = g.to_json(d);
            v["datum"] = json!(d.name());
            v["bounds"] = cli.bounds.json();
            Ok(pretty(&v))
        }
        Output::Text => {
            let mut out = format!("{}\n", cli.bounds.header(d));
            writeln!(out, "{} nodes, {} edges", g.nodes.len(), g.edges.len()).unwrap();
            for e in &g.edges {
                writeln!(
                    out,
                    "{} -> {} via {} agree={}",
                    g.nodes[e.from].render(d),
                    g.nodes[e.to].render(d),
                    e.root,
                    e.agree
                )
                .unwrap();
            }
            Ok(out)
        }
        o => Err(unsupported_output(command, o)),
    }
}

fn covers(cli: &Cli, d: &RootDatum, x: &TitsElt) -> CliResult<String> {
    let g = CoverGraph::of_covers(d, x, cli.bounds.cover)?;
    render_graph(cli, d, &g, "covers")
}

fn level_mismatch(d: &RootDatum, y: &TitsElt, x: &TitsElt) -> Failure {
    precondition(format!(
        "level mismatch: {} has level {}, {} has level {}",
        y.render(d),
        y.level(d).map_or("?".into(), |l| l.to_string()),
        x.render(d),
        x.level(d).map_or("?".into(), |l| l.to_string()),
    ))
}

fn interval(cli: &Cli, d: &RootDatum, y: &TitsElt, x: &TitsElt) -> CliResult<String> {
    let g = CoverGraph::interval(d, y, x, cli.bounds.budget())?.ok_or_else(|| level_mismatch(d, y, x))?;
    render_graph(cli, d, &g, "interval")
}

fn compare(cli: &Cli, d: &RootDatum, y: &TitsElt, x: &TitsElt) -> CliResult<String> {
    let answer = less_or_equal(d, y, x, cli.bounds.budget())?;
    if answer == Comparison::NoWithinBounds(NoReason::LevelMismatch) {
        return Err(level_mismatch(d, y, x));
    }
    match cli.output {
        Output::Text => {
            let mut out = format!("{}\n", cli.bounds.header(d));
            match &answer {
                Comparison::Yes(chain) => {
                    writeln!(out, "yes").unwrap();
                    let steps: Vec<_> = chain.iter().map(|z| z.render(d)).collect();
                    writeln!(out, "chain: {}", steps.join(" < ")).unwrap();
                }
                Comparison::NoWithinBounds(reason) => {
                    writeln!(out, "no within bounds ({reason})").unwrap();
                }
            }
            Ok(out)
        }
        Output::Json => {
            let mut v = json!({
                "datum": d.name(),
                "bounds": cli.bounds.json(),
                "lower": y.render(d),
                "upper": x.render(d),
            });
            match &answer {
                Comparison::Yes(chain) => {
                    v["answer"] = json!("yes");
                    v["chain"] = json!(chain.iter().map(|z| z.render(d)).collect::<Vec<_>>());
                }
                Comparison::NoWithinBounds(reason) => {
                    v["answer"] = json!("no-within-bounds");
                    v["reason"] = json!(reason);
                }
            }
            Ok(pretty(&v))
        }
        o => Err(unsupported_output("compare", o)),
    }
}

/// Classical comparison for finite data: the ball radius is `ℓ(x) + ℓ(y)`,
/// which contains every term of the product.
fn oracle_line(d: &RootDatum, x: &TitsElt, y: &TitsElt, table: &std::collections::BTreeMap<TitsElt, tits_daha::LaurentPoly>) -> CliResult<bool> {
    if d.is_affine() {
        return Err(precondition("--check-oracle needs a finite-type datum"));
    }
    let len = |z: &TitsElt| -> CliResult<usize> {
        let l = length_t(d, z, Ratio::from_integer(1))?;
        Ok(l.to_integer() as usize)
    };
    let oracle = FiniteOracle::new(d, len(x)? + len(y)?)?;
    Ok(oracle.product(x, y)? == *table)
}

fn multiply(cli: &Cli, d: &RootDatum, x: &TitsElt, y: &TitsElt) -> CliResult<String> {
    let h = HeckeAlgebra::new(d);
    let table = h.structure_constants(x, y)?;
    let oracle = if cli.check_oracle { Some(oracle_line(d, x, y, &table)?) } else { None };
    let verdict = |ok: bool| if ok { "match" } else { "mismatch" };
    let out = match cli.output {
        Output::Text => {
            let mut out = format!("# datum {} | T[{}] * T[{}]\n", d.name(), x.render(d), y.render(d));
            for (z, c) in &table {
                writeln!(out, "{}: {c}", z.render(d)).unwrap();
            }
            if let Some(ok) = oracle {
                writeln!(out, "oracle: {}", verdict(ok)).unwrap();
            }
            out
        }
        Output::Json => {
            let mut product = HeckeElt::zero(Basis::Coset);
            for (z, c) in &table {
                product.add_term(z.clone(), c);
            }
            let mut v = json!({
                "datum": d.name(),
                "x": x.render(d),
                "y": y.render(d),
                "product": product.to_json(d),
            });
            if let Some(ok) = oracle {
                v["oracle"] = json!(verdict(ok));
            }
            pretty(&v)
        }
        Output::Csv => structure_constants_csv(d, [(x, y, &table)]),
        o => return Err(unsupported_output("multiply", o)),
    };
    if oracle == Some(false) {
        return Err(Failure { code: 4, message: format!("{out}classical product differs") });
    }
    Ok(out)
}

fn read_hecke(d: &RootDatum, input: &str) -> CliResult<HeckeElt> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return Ok(HeckeElt::from_json(d, trimmed)?);
    }
    if input.ends_with(".json") {
        let text = std::fs::read_to_string(input).map_err(|e| domain(format!("{input}: {e}")))?;
        return Ok(HeckeElt::from_json(d, &text)?);
    }
    Ok(HeckeElt::basis_element(Basis::Coset, TitsElt::parse(d, input)?))
}

fn convert(cli: &Cli, d: &RootDatum, input: &str, to: BasisArg) -> CliResult<String> {
    let h = HeckeAlgebra::new(d);
    let a = read_hecke(d, input)?;
    let b = match (a.basis(), to) {
        (Basis::Coset, BasisArg::Bernstein) => h.to_bernstein(&a)?,
        (Basis::Bernstein, BasisArg::Coset) => h.to_coset(&a)?,
        _ => a,
    };
    match cli.output {
        Output::Text => Ok(format!("# datum {} | basis {}\n{}\n", d.name(), b.basis(), b.render(d))),
        Output::Json => Ok(pretty(&b.to_json(d))),
        o => Err(unsupported_output("convert", o)),
    }
}

fn verify_cmd(
    cli: &Cli,
    d: &RootDatum,
    suite: &str,
    coord: Option<i64>,
    levels: Option<Vec<i64>>,
    max_len: Option<usize>,
) -> CliResult<String> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.into_iter().filter(|s| *s != Suite::Oracle || !d.is_affine()).collect()
    } else {
        vec![suite.parse()?]
    };
    let mut reports = Vec::new();
    for s in suites {
        let mut bx: ElementBox = s.default_box(d);
        if let Some(c) = coord {
            bx.coord = c;
        }
        if let Some(l) = &levels {
            bx.levels = l.clone();
        }
        if let Some(m) = max_len {
            bx.max_len = m;
        }
        reports.push(verify::run(d, s, cli.bounds.cover, Some(bx))?);
    }
    match cli.output {
        Output::Text => Ok(reports.iter().map(|r| r.render_text()).collect()),
        Output::Json => Ok(pretty(&serde_json::to_value(&reports).expect("reports serialize"))),
        o => Err(unsupported_output("verify", o)),
    }
}

fn datum_info(cli: &Cli, d: &RootDatum) -> CliResult<String> {
    let cfg = d.config();
    match cli.output {
        Output::Json => Ok(pretty(&json!({ "name": d.name(), "config": cfg }))),
        Output::Text => {
            let mut out = format!("datum {} ({})\n", d.name(), if d.is_affine() { "affine" } else { "finite" });
            writeln!(out, "rank of P: {}", d.rank_p()).unwrap();
            writeln!(out, "nodes: {}", d.labels().join(" ")).unwrap();
            writeln!(out, "cartan: {:?}", cfg.cartan).unwrap();
            for i in 0..d.num_nodes() {
                writeln!(
                    out,
                    "  node {}: alpha = {}, alpha_vee = {:?}",
                    d.label(i),
                    d.simple_coroot(i),
                    d.simple_root_weight(i)
                )
                .unwrap();
            }
            writeln!(out, "rho_vee: {:?}", d.rho_vee()).unwrap();
            if let Some(delta) = d.delta() {
                writeln!(out, "delta: {delta}").unwrap();
            }
            Ok(out)
        }
        o => Err(unsupported_output("datum-info", o)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
