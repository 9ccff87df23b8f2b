use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use circletree::checks::full_suite;
use circletree::fliess::convergence_table;
use circletree::{
    compose, convolve, group_inverse, group_product, hat_compose, lie_bracket, mod_compose, numeric_corpus,
    prelie_product, shuffle, Alphabet, AntipodeMethod, Character, Coeff, CoordMap, Error, FdbHopf, Generator,
    IdentityKind, LinComb, Monomial, Rct, RctHopf, Series, StatsRecord, Word, Q,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_PARSE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 1;

#[derive(Parser)]
#[command(
    name = "circletree",
    version,
    about = "Rooted circle trees, their Hopf algebra and Chen-Fliess series products"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Alpha {
    /// Number of input letters x_1..x_m.
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    alpha: Alpha,
    /// Left operand: series text (`;` separates lines), `@file`, or a JSON document.
    #[arg(long)]
    c: String,
    /// Number of output channels of `c`; defaults to m.
    #[arg(long)]
    ell: Option<usize>,
    /// Truncation length.
    #[arg(long, default_value_t = 4)]
    maxlen: usize,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    base: SeriesArgs,
    /// Right operand, square (ell = m).
    #[arg(long)]
    d: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Shuffle product of two words.
    Shuffle {
        #[command(flatten)]
        alpha: Alpha,
        u: String,
        v: String,
    },
    /// Degree and weight of an rct or a word.
    Degree {
        #[command(flatten)]
        alpha: Alpha,
        /// `<root>:<word>` or a bare word.
        item: String,
    },
    /// Admissible subsets of an rct.
    Subsets {
        #[command(flatten)]
        alpha: Alpha,
        rct: String,
    },
    /// Admissible extractions, or all general extractions with --all.
    Extractions {
        #[command(flatten)]
        alpha: Alpha,
        rct: String,
        #[arg(long)]
        all: bool,
        /// Include the empty and total extractions.
        #[arg(long)]
        trivial: bool,
    },
    /// Coproduct of an rct.
    Coproduct {
        #[command(flatten)]
        alpha: Alpha,
        rct: String,
        /// Drop the two primitive terms.
        #[arg(long)]
        reduced: bool,
    },
    /// Antipode of an rct.
    Antipode {
        #[command(flatten)]
        alpha: Alpha,
        rct: String,
        #[arg(long, default_value = "forest")]
        method: String,
        /// Print in coordinate-map notation.
        #[arg(long)]
        coords: bool,
    },
    /// Antipode term statistics as CSV.
    Stats {
        #[command(flatten)]
        alpha: Alpha,
        #[arg(required = true)]
        rcts: Vec<String>,
        /// Restrict to one method.
        #[arg(long)]
        method: Option<String>,
    },
    /// Term counts for the antipode of (1; x_0^k) at m = 1.
    Table1 {
        #[arg(long, default_value_t = 13)]
        max_degree: usize,
    },
    /// Pre-Lie product a ⊲ b, or the bracket with --bracket.
    Prelie {
        #[command(flatten)]
        alpha: Alpha,
        a: String,
        b: String,
        #[arg(long)]
        bracket: bool,
    },
    /// c ∘ d.
    Compose(PairArgs),
    /// c ∘̃ d.
    Modcompose(PairArgs),
    /// c ∘̂ d.
    Hatcompose(PairArgs),
    /// Feedback group product c ⊚ d.
    Group(PairArgs),
    /// Feedback group inverse.
    Invert(SeriesArgs),
    /// (Φ_c ⋆ Φ_d)(a) for one coordinate map or every map up to --maxlen.
    Convolve {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        coord: Option<String>,
    },
    /// Numerical check of the product identities on the built-in corpus.
    Numcheck {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long = "N", default_value_t = 2000)]
        n: usize,
        #[arg(long = "T", default_value_t = 1.0)]
        t: f64,
    },
    /// Hopf, isomorphism and pre-Lie suites on all generators up to a degree.
    Axioms {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
}

enum Failure {
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<String, Failure>;

fn alphabet(a: &Alpha) -> Result<Alphabet, Error> {
    Alphabet::new(a.m)
}

fn rct(s: &str, a: &Alpha) -> Result<Rct, Error> {
    Rct::parse(s, alphabet(a)?)
}

fn read_series(src: &str, ell: usize, a: Alphabet, maxlen: usize) -> Result<Series<Q>, Error> {
    let text = match src.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?,
        None => src.replace(';', "\n"),
    };
    if text.trim_start().starts_with('{') {
        let s = Series::from_json(&text)?;
        if s.m() != a.m() || s.ell() != ell {
            return Err(Error::DimensionMismatch(format!(
                "document has ell={} m={}, expected ell={ell} m={}",
                s.ell(),
                s.m(),
                a.m()
            )));
        }
        return Ok(s.with_max_len(maxlen));
    }
    Series::parse_text(&text, ell, a, maxlen)
}

fn operands(p: &PairArgs) -> Result<(Series<Q>, Series<Q>), Error> {
    let a = alphabet(&p.base.alpha)?;
    let ell = p.base.ell.unwrap_or(a.m());
    let c = read_series(&p.base.c, ell, a, p.base.maxlen)?;
    let d = read_series(&p.d, a.m(), a, p.base.maxlen)?;
    Ok((c, d))
}

fn lincomb_json<K: Ord + Clone + Eq + std::hash::Hash>(l: &LinComb<K, Q>, key: impl Fn(&K) -> Value) -> Value {
    Value::Array(l.sorted_terms().into_iter().map(|(k, c)| json!({"coeff": c.to_text(), "term": key(k)})).collect())
}

fn mono_json<G: Generator>(m: &Monomial<G>) -> Value {
    Value::Array(m.factors().iter().map(|g| Value::String(g.to_string())).collect())
}

fn emit_lincomb<K: Ord + Clone + Eq + std::hash::Hash + std::fmt::Display>(
    fmt: Format,
    l: &LinComb<K, Q>,
    key: impl Fn(&K) -> Value,
) -> String {
    match fmt {
        Format::Text => l.to_string(),
        Format::Json => lincomb_json(l, key).to_string() + "\n",
    }
}

fn emit_tensor<G: Generator>(fmt: Format, t: &LinComb<[Monomial<G>; 2], Q>) -> String {
    match fmt {
        Format::Text => circletree::format_tensor(t),
        Format::Json => lincomb_json(t, |[l, r]| json!([mono_json(l), mono_json(r)])).to_string() + "\n",
    }
}

fn emit_series(fmt: Format, s: &Series<Q>) -> String {
    match fmt {
        Format::Text => s.to_text(),
        Format::Json => s.to_json() + "\n",
    }
}

fn emit_lines(fmt: Format, lines: Vec<String>) -> String {
    match fmt {
        Format::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
        Format::Json => json!(lines).to_string() + "\n",
    }
}

fn emit_csv(fmt: Format, header: &str, rows: Vec<String>) -> String {
    match fmt {
        Format::Text => std::iter::once(header.to_string()).chain(rows).map(|l| l + "\n").collect(),
        Format::Json => {
            let cols: Vec<&str> = header.split(',').collect();
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(cols.iter().zip(r.split(',')).map(|(k, v)| (k.to_string(), json!(v))).collect()))
                .collect();
            Value::Array(objs).to_string() + "\n"
        }
    }
}

fn run(cli: Cli) -> Run {
    let fmt = cli.format;
    Ok(match cli.cmd {
        Cmd::Shuffle { alpha, u, v } => {
            let a = alphabet(&alpha)?;
            let p = shuffle::<Q>(&Word::parse(&u, a)?, &Word::parse(&v, a)?);
            emit_lincomb(fmt, &p, |w| json!(w.to_string()))
        }
        Cmd::Degree { alpha, item } => {
            let a = alphabet(&alpha)?;
            if item.contains(':') {
                let c = Rct::parse(&item, a)?;
                emit_csv(fmt, "degree,weight", vec![format!("{},{}", c.degree(), c.weight())])
            } else {
                let w = Word::parse(&item, a)?;
                emit_csv(fmt, "degree,length", vec![format!("{},{}", w.degree(), w.len())])
            }
        }
        Cmd::Subsets { alpha, rct: r } => {
            let c = rct(&r, &alpha)?;
            emit_lines(fmt, c.admissible_subsets().iter().map(|s| s.to_string()).collect())
        }
        Cmd::Extractions { alpha, rct: r, all, trivial } => {
            let c = rct(&r, &alpha)?;
            let list = if all { c.all_extractions() } else { c.admissible_extractions(trivial) };
            emit_lines(fmt, list.iter().map(|e| e.to_string()).collect())
        }
        Cmd::Coproduct { alpha, rct: r, reduced } => {
            let c = rct(&r, &alpha)?;
            let h = RctHopf::<Q>::new(alphabet(&alpha)?);
            let t = if reduced { h.reduced_coproduct(&c) } else { h.coproduct(&c) };
            emit_tensor(fmt, &t)
        }
        Cmd::Antipode { alpha, rct: r, method, coords } => {
            let c = rct(&r, &alpha)?;
            let method: AntipodeMethod = method.parse()?;
            let h = RctHopf::<Q>::new(alphabet(&alpha)?);
            let s = h.antipode(&c, method);
            if coords {
                let p = circletree::phi_poly(&s);
                emit_lincomb(fmt, &p, mono_json)
            } else {
                emit_lincomb(fmt, &*s, mono_json)
            }
        }
        Cmd::Stats { alpha, rcts, method } => {
            let h = RctHopf::<Q>::new(alphabet(&alpha)?);
            let methods = match method {
                Some(m) => vec![m.parse::<AntipodeMethod>()?],
                None => AntipodeMethod::ALL.to_vec(),
            };
            let mut rows = Vec::new();
            for r in &rcts {
                let c = rct(r, &alpha)?;
                for &m in &methods {
                    rows.push(h.antipode_stats(&c, m).to_csv());
                }
            }
            emit_csv(fmt, StatsRecord::CSV_HEADER, rows)
        }
        Cmd::Table1 { max_degree } => {
            let a = Alphabet::new(1)?;
            let h = RctHopf::<Q>::new(a);
            let mut rows = Vec::new();
            for k in 1.. {
                let c = Rct::parse(&format!("1:{}", vec!["0"; k].join(".")), a)?;
                if c.degree() > max_degree {
                    break;
                }
                let left = h.antipode_stats(&c, AntipodeMethod::Left);
                let forest = h.antipode_stats(&c, AntipodeMethod::Forest);
                rows.push(format!(
                    "{},{},{},{},{},{}",
                    c.degree(),
                    k,
                    left.distinct,
                    left.generated,
                    left.cancelled_mass,
                    forest.generated
                ));
            }
            emit_csv(fmt, "degree,k,distinct,generated_left,cancelled_left,generated_forest", rows)
        }
        Cmd::Prelie { alpha, a, b, bracket } => {
            let (x, y) = (rct(&a, &alpha)?, rct(&b, &alpha)?);
            let p = if bracket { lie_bracket::<Q>(&x, &y) } else { prelie_product::<Q>(&x, &y) };
            emit_lincomb(fmt, &p, |r| json!(r.to_string()))
        }
        Cmd::Compose(p) => {
            let (c, d) = operands(&p)?;
            emit_series(fmt, &compose(&c, &d)?)
        }
        Cmd::Modcompose(p) => {
            let (c, d) = operands(&p)?;
            emit_series(fmt, &mod_compose(&c, &d)?)
        }
        Cmd::Hatcompose(p) => {
            let (c, d) = operands(&p)?;
            emit_series(fmt, &hat_compose(&c, &d)?)
        }
        Cmd::Group(p) => {
            let (c, d) = operands(&p)?;
            emit_series(fmt, &group_product(&c, &d)?)
        }
        Cmd::Invert(s) => {
            let a = alphabet(&s.alpha)?;
            let c = read_series(&s.c, s.ell.unwrap_or(a.m()), a, s.maxlen)?;
            emit_series(fmt, &group_inverse(&FdbHopf::new(a), &c, s.maxlen)?)
        }
        Cmd::Convolve { pair, coord } => {
            let (c, d) = operands(&pair)?;
            let a = c.alphabet();
            let h = FdbHopf::<Q>::new(a);
            let targets = match &coord {
                Some(s) => vec![CoordMap::parse(s, a)?],
                None => {
                    let mut v = Vec::new();
                    for i in 1..=c.ell() {
                        for w in a.words_up_to_len(pair.base.maxlen) {
                            v.push(CoordMap::new(i, w, a)?);
                        }
                    }
                    v
                }
            };
            let (pc, pd) = (Character::new(&c), Character::new(&d));
            let mut rows = Vec::new();
            for t in &targets {
                let v = convolve(&h, &pc, &pd, t)?;
                if coord.is_some() || v != Q::from_integer(0.into()) {
                    rows.push(format!("{t},{}", v.to_text()));
                }
            }
            emit_csv(fmt, "coord,value", rows)
        }
        Cmd::Numcheck { kind, n, t } => {
            let kind: Option<IdentityKind> = kind.map(|k| k.parse()).transpose()?;
            if n < 8 || n % 8 != 0 {
                return Err(Error::Parse(format!("--N must be a positive multiple of 8 (got {n})")).into());
            }
            let ns = [n / 8, n / 4, n / 2, n];
            let mut rows = Vec::new();
            for case in numeric_corpus::<Q>().iter().filter(|c| kind.is_none_or(|k| c.kind == k)) {
                let table = convergence_table(case, t, &ns)?;
                for (i, (n, dev)) in table.iter().enumerate() {
                    let ratio = if i == 0 || !case.second_order {
                        String::new()
                    } else {
                        format!("{:.4}", table[i - 1].1 / dev)
                    };
                    rows.push(format!("{},{},{},{:.6e},{}", case.name, case.kind, n, dev, ratio));
                }
            }
            let max = rows
                .iter()
                .filter(|r| r.split(',').nth(2) == Some(&n.to_string()))
                .filter_map(|r| r.split(',').nth(3)?.parse::<f64>().ok())
                .fold(0.0f64, f64::max);
            let mut out = emit_csv(fmt, "case,kind,N,deviation,ratio", rows);
            if fmt == Format::Text {
                let _ = writeln!(out, "# max deviation at N={n}: {max:.6e}");
            }
            out
        }
        Cmd::Axioms { m, max_degree } => {
            let a = Alphabet::new(m)?;
            let reports = full_suite(&RctHopf::<Q>::new(a), &FdbHopf::<Q>::new(a), max_degree);
            let mut lines: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
            let ok = reports.iter().all(|r| r.ok());
            lines.push(if ok { "OK".into() } else { "FAIL".into() });
            let out = emit_lines(fmt, lines);
            if !ok {
                return Err(Failure::Check(out));
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            print!("{out}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { EXIT_PARSE } else { EXIT_SEMANTIC })
        }
    }
}
