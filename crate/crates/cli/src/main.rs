use std::collections::BTreeSet;
use std::fmt::Display;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twisted_bt::action::{
    Cyclic2Action, GroupAction, HoughtonAction, ThompsonFAction, TrivialAction,
};
use twisted_bt::checks::check_relations;
use twisted_bt::complex::{
    build_e, build_ve, e_bound, homology, matching_complex, nu, BuildOptions, Complex,
    HomologyGroup,
};
use twisted_bt::par::Exec;
use twisted_bt::words::{factorize, rho};
use twisted_bt::{Element, Error, PointPrefix, Word};

#[derive(Parser)]
#[command(
    name = "tbt",
    version,
    about = "Twisted Brin-Thompson groups: elements, relations and complexes"
)]
struct Cli {
    /// Group action: trivial:<k>, c2, F or houghton:<n>.
    #[arg(long, global = true, default_value = "c2")]
    action: String,
    /// Seed for randomized commands; TBT_SEED overrides it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Vertex cap for complex builders.
    #[arg(long, global = true, default_value_t = 200_000)]
    cap: usize,
    /// Basepoint for rho, e.g. "P[1]{1=01}". Defaults to the all-zeros point.
    #[arg(long, global = true)]
    basepoint: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Rows,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word and describe the element.
    Eval { word: String },
    /// Check all relation families on random instances.
    Relations {
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
    /// Factor an element into SV atoms and local twists.
    Factorize {
        word: String,
        /// Color of the local twists; defaults to the first orbit representative.
        #[arg(long)]
        color: Option<String>,
    },
    /// Evaluate the quasi-retraction rho.
    Rho { word: String },
    /// Build a complex and report its reduced homology.
    Complex {
        #[arg(value_enum)]
        kind: Kind,
        m: usize,
        /// Number of colors for VE and E.
        #[arg(long, default_value_t = 2)]
        colors: u32,
        /// Print the facet list instead of homology.
        #[arg(long)]
        facets: bool,
    },
    /// Largest elementary expansion of [v] below [w].
    Core { v: String, w: String },
    /// Least upper bound of two forests.
    Join { f: String, g: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Matching,
    #[value(name = "VE")]
    Ve,
    #[value(name = "E")]
    E,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Config {
    seed: u64,
    format: Format,
    cap: usize,
    basepoint: Option<PointPrefix>,
}

enum Selected {
    Trivial(TrivialAction),
    C2(Cyclic2Action),
    F(ThompsonFAction),
    Houghton(HoughtonAction),
}

fn select(text: &str) -> Result<Selected, Failure> {
    let count = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| Failure::Usage(format!("invalid count in action `{text}`")))
    };
    Ok(match text.split_once(':') {
        None if text == "c2" => Selected::C2(Cyclic2Action),
        None if text == "F" => Selected::F(ThompsonFAction),
        Some(("trivial", k)) => Selected::Trivial(TrivialAction::new(count(k)?)?),
        Some(("houghton", n)) => Selected::Houghton(HoughtonAction::new(count(n)?)?),
        _ => {
            return Err(Failure::Usage(format!(
                "unknown action `{text}` (expected trivial:<k>, c2, F or houghton:<n>)"
            )))
        }
    })
}

/// Parses and evaluates a word, annotating parse errors with a caret.
fn element<A: GroupAction>(a: &A, text: &str) -> Result<Element<A>, Failure> {
    match Word::parse(text) {
        Ok(w) => Ok(w.evaluate(a)?),
        Err(Error::Parse { pos, msg }) => Err(Failure::Usage(format!(
            "parse error at position {pos}: {msg}\n  {text}\n  {}^",
            " ".repeat(pos)
        ))),
        Err(e) => Err(e.into()),
    }
}

fn set<T>(items: impl IntoIterator<Item = T>, show: impl Fn(T) -> String) -> String {
    let parts: Vec<String> = items.into_iter().map(show).collect();
    format!("{{{}}}", parts.join(", "))
}

fn eval<A: GroupAction>(a: &A, word: &str) -> Outcome {
    let h = element(a, word)?;
    println!("element: {h}");
    println!("corank: {}", h.corank());
    println!("rank: {}", h.rank());
    if h.corank() == h.rank() && h.equals(&Element::identity(a.clone(), h.rank())) {
        println!("identity");
    }
    let twists: BTreeSet<_> = h.germinal_twist_set();
    println!("twist set: {}", set(&twists, |g| a.format_elem(g)));
    if h.is_untwisted() {
        println!("spectrum: {}", set(h.spectrum()?, |c| c.to_string()));
    }
    Ok(())
}

fn relations<A: GroupAction>(a: &A, instances: usize, cfg: &Config) -> Outcome {
    let reports = check_relations(a, instances, cfg.seed, Exec::default())?;
    if cfg.format == Format::Rows {
        println!("relation,instances,failures");
    }
    for r in &reports {
        match cfg.format {
            Format::Rows => println!("{},{},{}", r.relation.name(), r.instances, r.failures),
            Format::Text => {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} {:<26} {}/{}",
                    r.relation,
                    r.instances - r.failures,
                    r.instances
                );
                if let Some((lhs, rhs)) = &r.first_failure {
                    println!("  lhs: {lhs}\n  rhs: {rhs}");
                }
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(Failure::Check(format!(
            "{failed} relation families failed on {}",
            a.name()
        )));
    }
    Ok(())
}

fn factor<A: GroupAction>(a: &A, word: &str, color: Option<&str>) -> Outcome {
    let h = element(a, word)?;
    let s = match color {
        Some(c) => a.parse_color(c)?,
        None => a
            .orbit_representatives()
            .and_then(|r| r.first().copied())
            .ok_or_else(|| Failure::Usage("this action needs an explicit --color".into()))?,
    };
    let fw = factorize(&h, s)?;
    println!("{fw}");
    Ok(())
}

fn retract<A: GroupAction>(a: &A, word: &str, cfg: &Config) -> Outcome {
    let h = element(a, word)?;
    println!("{}", a.format_elem(&rho(&h, cfg.basepoint.as_ref())?));
    Ok(())
}

fn core<A: GroupAction>(a: &A, v: &str, w: &str) -> Outcome {
    let (v, w) = (element(a, v)?, element(a, w)?);
    println!("{}", v.elementary_core(&w)?);
    Ok(())
}

fn join<A: GroupAction>(a: &A, f: &str, g: &str) -> Outcome {
    let forest = |text: &str| {
        element(a, text)?
            .as_forest()
            .ok_or_else(|| Failure::Usage(format!("`{text}` is not an untwisted forest")))
    };
    println!("{}", forest(f)?.join(&forest(g)?)?.element());
    Ok(())
}

fn print_homology(name: &str, groups: &[HomologyGroup], format: Format) {
    match format {
        Format::Rows => {
            println!("complex,degree,rank,torsion");
            for g in groups {
                let torsion: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
                println!("{name},{},{},{}", g.degree, g.rank, torsion.join(";"));
            }
        }
        Format::Text => {
            println!("{name}");
            println!("{:>6}  {:>4}  {:<12}  group", "degree", "rank", "torsion");
            for g in groups {
                let torsion: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
                println!(
                    "{:>6}  {:>4}  {:<12}  {g}",
                    g.degree,
                    g.rank,
                    torsion.join(" ")
                );
            }
        }
    }
}

fn verdict(name: &str, bound: i64, groups: &[HomologyGroup], format: Format) -> Outcome {
    let bad: Vec<&HomologyGroup> = groups
        .iter()
        .filter(|g| g.degree as i64 <= bound && !g.is_trivial())
        .collect();
    let show = |line: String| {
        if format == Format::Text {
            println!("{line}");
        }
    };
    if bound < 0 {
        show(format!("PASS (bound {bound} is vacuous)"));
        return Ok(());
    }
    if bad.is_empty() {
        show(format!(
            "PASS reduced homology vanishes through degree {bound}"
        ));
        Ok(())
    } else {
        show(format!(
            "FAIL nonzero reduced homology in degree {}",
            bad[0].degree
        ));
        Err(Failure::Check(format!(
            "{name}: H{} = {}",
            bad[0].degree, bad[0]
        )))
    }
}

fn complex(kind: Kind, m: usize, colors: u32, facets: bool, cfg: &Config) -> Outcome {
    let (name, bound) = match kind {
        Kind::Matching => (format!("matching_{m}"), nu(m as i64) - 1),
        Kind::Ve => (format!("VE_{m}"), nu(m as i64) - 1),
        Kind::E => (format!("E_{m}"), e_bound(m)),
    };
    let top = bound.max(0) as usize;
    let opts = BuildOptions {
        cap: cfg.cap,
        max_dim: if facets { None } else { Some(top + 1) },
        exec: Exec::default(),
    };
    let c: Complex = match kind {
        Kind::Matching => matching_complex(m)?,
        Kind::Ve => build_ve(m, &TrivialAction::new(colors)?, &opts)?.complex,
        Kind::E => build_e(m, &TrivialAction::new(colors)?, &opts)?.complex,
    };
    if facets {
        print!("{c}");
        return Ok(());
    }
    let groups = homology(&c, top)?;
    print_homology(&name, &groups, cfg.format);
    verdict(&name, bound, &groups, cfg.format)
}

fn dispatch<A: GroupAction>(a: &A, command: &Command, cfg: &Config) -> Outcome {
    match command {
        Command::Eval { word } => eval(a, word),
        Command::Relations { instances } => relations(a, *instances, cfg),
        Command::Factorize { word, color } => factor(a, word, color.as_deref()),
        Command::Rho { word } => retract(a, word, cfg),
        Command::Core { v, w } => core(a, v, w),
        Command::Join { f, g } => join(a, f, g),
        Command::Complex {
            kind,
            m,
            colors,
            facets,
        } => complex(*kind, *m, *colors, *facets, cfg),
    }
}

fn run(cli: Cli) -> Outcome {
    let seed = match std::env::var("TBT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("TBT_SEED is not an unsigned integer: `{s}`")))?,
        Err(_) => cli.seed,
    };
    let basepoint = cli
        .basepoint
        .as_deref()
        .map(str::parse::<PointPrefix>)
        .transpose()?;
    let cfg = Config {
        seed,
        format: cli.format,
        cap: cli.cap,
        basepoint,
    };
    match select(&cli.action)? {
        Selected::Trivial(a) => dispatch(&a, &cli.command, &cfg),
        Selected::C2(a) => dispatch(&a, &cli.command, &cfg),
        Selected::F(a) => dispatch(&a, &cli.command, &cfg),
        Selected::Houghton(a) => dispatch(&a, &cli.command, &cfg),
    }
}

fn fail(code: u8, msg: impl Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => fail(1, msg),
        Err(Failure::Usage(msg)) => fail(2, msg),
    }
}
