//! `posetlab`: command-line front end for the poset-core engine.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 integer overflow inside a computation.

mod verify;

use clap::{Parser, Subcommand};
use poset_core::complex;
use poset_core::incidence::{self, IncidenceError, MobiusTable};
use poset_core::io;
use poset_core::layered::{self, LayerStructure};
use poset_core::ln::{self, LnElement};
use poset_core::poset::FinitePoset;
use poset_core::surgery::{self, MDirection, SurgeryError};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "posetlab", version, about = "Finite poset toolbox: Mobius functions, surgery, doubling, and the bead-slide lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Work inside the bead-slide lattice on subsets of {1, ..., n}
    Ln {
        #[command(subcommand)]
        sub: LnCommand,
    },
    /// Mobius table of a poset read from JSON, as TSV sorted by rank
    Mobius {
        /// Poset JSON file ({"labels": [...], "covers": [[i, j], ...]})
        #[arg(long)]
        input: PathBuf,
    },
    /// Glue two posets along a common embedded subposet
    ConnectSum {
        /// Lower host poset JSON
        p0: PathBuf,
        /// Upper host poset JSON
        p1: PathBuf,
        /// Common subposet JSON
        q: PathBuf,
        /// Embedding into the lower host, as comma-separated q:p index pairs
        #[arg(long)]
        i0: String,
        /// Embedding into the upper host, as comma-separated q:p index pairs
        #[arg(long)]
        i1: String,
        /// Also print the block-formula and closed-form Mobius tables and their diff
        #[arg(long)]
        closed_form: bool,
    },
    /// Double a layered poset and emit the result with its canonical layer
    Double {
        /// Poset JSON file; may carry a "layer" field
        input: PathBuf,
        /// Layer signs, comma-separated -1/+1 values (overrides the file)
        #[arg(long, requires = "lift", allow_hyphen_values = true)]
        sign: Option<String>,
        /// Layer lift, comma-separated lower:upper index pairs
        #[arg(long, requires = "sign")]
        lift: Option<String>,
    },
    /// f-vector and Euler characteristic of the order complex
    Complex {
        /// Poset JSON file
        #[arg(long)]
        input: PathBuf,
        /// Restrict to the open interval between two element indices
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        open_interval: Option<Vec<usize>>,
    },
    /// Run the verification suites
    Verify {
        /// Which suite to run
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
        /// Lattice size bound; each suite clamps it to its exhaustive-oracle cap
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the reports as a JSON array instead of text
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum LnCommand {
    /// Cover relations of the whole lattice
    Hasse {
        #[arg(long)]
        n: u32,
        /// Emit DOT instead of a cover list
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// Emit poset JSON instead of a cover list
        #[arg(long)]
        json: bool,
    },
    /// Mobius values, for one pair or for every comparable pair
    Mobius {
        #[arg(long)]
        n: u32,
        /// Source subset, e.g. "{1,3}" or "1,3" or "{}"
        #[arg(long, requires = "to")]
        from: Option<String>,
        /// Target subset
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Elements of a closed (or open) interval
    Interval {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Drop the endpoints
        #[arg(long)]
        open: bool,
        /// Emit the interval as a DOT diagram
        #[arg(long)]
        dot: bool,
    },
    /// Subsets reachable from a set by one left slide
    Slides {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        set: String,
    },
    /// Join and meet of two subsets
    Joinmeet {
        #[arg(long)]
        n: u32,
        /// First subset
        s: String,
        /// Second subset
        t: String,
    },
}

/// Failure classes carrying their process exit code.
pub enum CliError {
    /// Bad arguments or malformed input files: exit 2.
    Usage(String),
    /// A verification or hypothesis check failed: exit 1.
    Verification(String),
    /// Integer overflow inside a computation: exit 3.
    Overflow(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
            CliError::Overflow(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Overflow(m) => m,
        }
    }
}

// Overflow must surface as exit 3 no matter how deeply a computation wrapped
// it; everything else in these enums is an input problem.
impl From<IncidenceError> for CliError {
    fn from(e: IncidenceError) -> CliError {
        match e {
            IncidenceError::Overflow { .. } => CliError::Overflow(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SurgeryError> for CliError {
    fn from(e: SurgeryError) -> CliError {
        match e {
            SurgeryError::Mobius(inner) => inner.into(),
            SurgeryError::MConditionFailed { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<layered::DoubleError> for CliError {
    fn from(e: layered::DoubleError) -> CliError {
        match e {
            layered::DoubleError::Mobius(inner) => inner.into(),
            layered::DoubleError::Surgery(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<complex::ComplexError> for CliError {
    fn from(e: complex::ComplexError) -> CliError {
        match e {
            complex::ComplexError::Overflow { .. } => CliError::Overflow(e.to_string()),
            complex::ComplexError::FaceLimitExceeded { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<poset_core::poset::PosetError> for CliError {
    fn from(e: poset_core::poset::PosetError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<poset_core::ln::LnError> for CliError {
    fn from(e: poset_core::ln::LnError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Ln { sub } => run_ln(sub).map(|()| 0),
        Command::Mobius { input } => run_mobius(&input).map(|()| 0),
        Command::ConnectSum { p0, p1, q, i0, i1, closed_form } => {
            run_connect_sum(&p0, &p1, &q, &i0, &i1, closed_form).map(|()| 0)
        }
        Command::Double { input, sign, lift } => run_double(&input, sign, lift).map(|()| 0),
        Command::Complex { input, open_interval } => {
            run_complex(&input, open_interval).map(|()| 0)
        }
        Command::Verify { suite, max_n, seed, json } => verify::run(suite, max_n, seed, json),
    }
}

/// Subset renderer for TSV-ish output: bare comma list, `{}` when empty.
fn bare(e: &LnElement) -> String {
    let elems = e.elements();
    if elems.is_empty() {
        "{}".to_string()
    } else {
        elems.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

fn read_poset(path: &Path) -> Result<(FinitePoset, Option<LayerStructure>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(io::read_poset_json(&text)?)
}

fn run_ln(sub: LnCommand) -> Result<(), CliError> {
    match sub {
        LnCommand::Hasse { n, dot, json } => {
            let p = ln::build_ln(n)?;
            if dot {
                print!("{}", io::to_dot(&p));
            } else if json {
                println!("{}", io::write_poset_json(&p, None));
            } else {
                for (a, b) in p.cover_pairs() {
                    println!("{} -> {}", p.label(a), p.label(b));
                }
            }
        }
        LnCommand::Mobius { n, from, to } => match (from, to) {
            (Some(from), Some(to)) => {
                let s = LnElement::parse(n, &from)?;
                let t = LnElement::parse(n, &to)?;
                println!("{}\t{}\t{}", s, t, s.mobius(&t));
            }
            _ => {
                // Full tables enumerate 4^n pairs, so they stay behind the
                // explicit-poset cap even though single pairs scale to n = 63.
                ln::build_ln(n)?;
                let mut order: Vec<u64> = (0..1u64 << n).collect();
                order.sort_by_key(|&bits| (LnElement::new(n, bits).unwrap().rank(), bits));
                for &s_bits in &order {
                    let s = LnElement::new(n, s_bits).unwrap();
                    for t_bits in 0..1u64 << n {
                        let t = LnElement::new(n, t_bits).unwrap();
                        if s.leq(&t) {
                            println!("{}\t{}\t{}", s, t, s.mobius(&t));
                        }
                    }
                }
            }
        },
        LnCommand::Interval { n, from, to, open, dot } => {
            let s = LnElement::parse(n, &from)?;
            let t = LnElement::parse(n, &to)?;
            if !s.leq(&t) {
                return Err(CliError::Usage(format!("{s} and {t} are not comparable")));
            }
            // The element count can reach 2^weight; refuse unlistable input.
            if t.rank() - s.rank() > 20 {
                return Err(CliError::Usage(format!(
                    "interval weight {} exceeds the listing cap 20",
                    t.rank() - s.rank()
                )));
            }
            let mut elems = ln::interval_elements(&s, &t);
            if open {
                elems.retain(|e| *e != s && *e != t);
            }
            if dot {
                let labels = elems.iter().map(|e| e.to_string()).collect();
                let p = FinitePoset::from_leq(labels, |a, b| elems[a].leq(&elems[b]))?;
                print!("{}", io::to_dot(&p));
            } else {
                for e in &elems {
                    println!("{e}");
                }
            }
        }
        LnCommand::Slides { n, set } => {
            let t = LnElement::parse(n, &set)?;
            for s in t.slides() {
                println!("{s}");
            }
        }
        LnCommand::Joinmeet { n, s, t } => {
            let a = LnElement::parse(n, &s)?;
            let b = LnElement::parse(n, &t)?;
            println!("join={} meet={}", bare(&a.join(&b)), bare(&a.meet(&b)));
        }
    }
    Ok(())
}

/// Prints a Mobius table as TSV triples sorted by (rank, source, target).
fn print_mobius_tsv(p: &FinitePoset, table: &MobiusTable) {
    let ranks = p
        .grading()
        .map(|r| r.values)
        .unwrap_or_else(|_| vec![0; p.len()]);
    let mut entries: Vec<(usize, usize, i64)> =
        table.iter().map(|((x, y), v)| (x, y, v)).collect();
    entries.sort_by_key(|&(x, y, _)| (ranks[x], x, y));
    for (x, y, v) in entries {
        println!("{}\t{}\t{}", p.label(x), p.label(y), v);
    }
}

fn run_mobius(input: &Path) -> Result<(), CliError> {
    let (p, _) = read_poset(input)?;
    let table = incidence::mobius_by_inversion(&p)?;
    print_mobius_tsv(&p, &table);
    Ok(())
}

/// Parses "0:2,1:5" into a total map from subposet indices to host indices.
fn parse_embedding(text: &str, domain: usize) -> Result<Vec<usize>, CliError> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("embedding entry {part:?} is not q:p")))?;
        let a: usize = a.trim().parse().map_err(|_| {
            CliError::Usage(format!("bad subposet index {:?} in embedding", a.trim()))
        })?;
        let b: usize = b.trim().parse().map_err(|_| {
            CliError::Usage(format!("bad host index {:?} in embedding", b.trim()))
        })?;
        if map.insert(a, b).is_some() {
            return Err(CliError::Usage(format!("embedding repeats subposet index {a}")));
        }
    }
    (0..domain)
        .map(|q| {
            map.get(&q).copied().ok_or_else(|| {
                CliError::Usage(format!("embedding misses subposet index {q} of 0..{domain}"))
            })
        })
        .collect()
}

fn run_connect_sum(
    p0_path: &Path,
    p1_path: &Path,
    q_path: &Path,
    i0: &str,
    i1: &str,
    closed_form: bool,
) -> Result<(), CliError> {
    let (p0, _) = read_poset(p0_path)?;
    let (p1, _) = read_poset(p1_path)?;
    let (q, _) = read_poset(q_path)?;
    let i0 = parse_embedding(i0, q.len())?;
    let i1 = parse_embedding(i1, q.len())?;
    let e = surgery::EmbeddedSubposet::new(q, i0, i1, &p0, &p1)?;
    let (glued, _) = surgery::connect_sum(&p0, &p1, &e)?;
    println!("{}", io::write_poset_json(&glued, None));
    if closed_form {
        surgery::check_m_conditions(&p0, &e.i0, MDirection::Plus)?;
        surgery::check_m_conditions(&p1, &e.i1, MDirection::Minus)?;
        let block = surgery::mobius_conn_sum(&p0, &p1, &e)?;
        let closed = surgery::mobius_cross_closed_form(&p0, &p1, &e)?;
        println!("# mobius (block formula)");
        print_mobius_tsv(&glued, &block);
        println!("# mobius (closed form)");
        print_mobius_tsv(&glued, &closed);
        let diffs: Vec<((usize, usize), i64)> =
            block.iter().filter(|&((x, y), v)| closed.get(x, y) != v).collect();
        println!("# diff ({} entries)", diffs.len());
        for ((x, y), v) in diffs {
            println!("{}\t{}\t{}\t{}", glued.label(x), glued.label(y), v, closed.get(x, y));
        }
    }
    Ok(())
}

fn parse_layer(sign: &str, lift: &str) -> Result<LayerStructure, CliError> {
    let sign: Vec<i8> = sign
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad sign value {:?}", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    let mut map = BTreeMap::new();
    for part in lift.split(',').filter(|s| !s.trim().is_empty()) {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("lift entry {part:?} is not lower:upper")))?;
        let a: usize = a.trim().parse().map_err(|_| {
            CliError::Usage(format!("bad lift source {:?}", a.trim()))
        })?;
        let b: usize = b.trim().parse().map_err(|_| {
            CliError::Usage(format!("bad lift target {:?}", b.trim()))
        })?;
        if map.insert(a, b).is_some() {
            return Err(CliError::Usage(format!("lift repeats source {a}")));
        }
    }
    Ok(LayerStructure { sign, lift: map })
}

fn run_double(input: &Path, sign: Option<String>, lift: Option<String>) -> Result<(), CliError> {
    let (p, file_layer) = read_poset(input)?;
    let layer = match (sign, lift) {
        (Some(sign), Some(lift)) => parse_layer(&sign, &lift)?,
        _ => file_layer.ok_or_else(|| {
            CliError::Usage("input has no layer; pass --sign and --lift".to_string())
        })?,
    };
    let (doubled, canonical) = layered::double(&p, &layer)?;
    println!("{}", io::write_poset_json(&doubled, Some(&canonical)));
    Ok(())
}

// Face enumeration stops at a million faces; big nerves need chi-only tools.
const FACE_CAP: usize = 1 << 20;

fn run_complex(input: &Path, open_interval: Option<Vec<usize>>) -> Result<(), CliError> {
    let (p, _) = read_poset(input)?;
    let target = match open_interval {
        Some(pair) => {
            let (x, y) = (pair[0], pair[1]);
            if x >= p.len() || y >= p.len() {
                return Err(CliError::Usage(format!(
                    "interval endpoints ({x}, {y}) out of range for {} elements",
                    p.len()
                )));
            }
            p.interval(x, y, true)?.0
        }
        None => p,
    };
    // The DP route never materializes faces, so it runs first: it either
    // yields chi or reports overflow even when the nerve is unenumerable.
    let chi = complex::chain_count_euler(&target)?;
    let nerve = complex::nerve(&target, FACE_CAP)?;
    assert_eq!(chi, complex::euler_characteristic(&nerve));
    let f = complex::f_vector(&nerve);
    let mut line = String::from("f");
    for count in &f {
        line.push('\t');
        line.push_str(&count.to_string());
    }
    println!("{line}");
    println!("chi\t{chi}");
    Ok(())
}
