//! Command-line front end: parse sequence files, run analyses, emit text and
//! JSON reports.

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use sadic_core::column::{c_at_raw, column_number, naive_column_number};
use sadic_core::directive::DirectiveSequence;
use sadic_core::error::Error as CoreError;
use sadic_core::format::{parse, render_sequence, SequenceFile};
use sadic_core::height::{comb_height, default_height_depth, pure_base};
use sadic_core::injectivize::injectivize;
use sadic_core::language::{limit_word_prefix, persistent_words};
use sadic_core::oracle;
use sadic_core::spectrum::{analysis_report, cobham_obstruction};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_DEPTH: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "sadic",
    version,
    about = "Spectral invariants of constant-length S-adic shifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Sequence file to analyze
    file: PathBuf,
    /// Name of the sequence to use when the file defines several
    #[arg(long)]
    sequence: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Full invariant report
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Prefix depth for empirical computations (default: sized from the
        /// sequence, at least 100000)
        #[arg(long)]
        depth: Option<usize>,
        /// Emit the machine-readable report
        #[arg(long)]
        json: bool,
        /// Write the report to a file instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Height table and combinatorial height
    Height {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Write the pure base as a sequence file
    Purebase {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the letter-injective replacement as a sequence file
    Injectivize {
        #[command(flatten)]
        input: Input,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Naive and true column numbers
    Column {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: Option<usize>,
        /// Diagnostic: per-level c values without injectivizing first
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        json: bool,
    },
    /// Length-arithmetic factor obstruction between two sequences
    Cobham {
        file: PathBuf,
        file2: PathBuf,
        /// Sequence name in the first file
        #[arg(long)]
        sequence: Option<String>,
        /// Sequence name in the second file
        #[arg(long)]
        sequence2: Option<String>,
    },
    /// Persistent words at a level
    Language {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// Count centred desubstitutions of a window of the limit word
    Desub {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Window taken from the limit word: width in symbols
        #[arg(long, conflicts_with = "window")]
        width: Option<usize>,
        /// Explicit window, whitespace-separated symbols
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 0)]
        anchor: usize,
    },
    /// Slow cross-checking oracles
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
}

#[derive(Subcommand)]
enum OracleOp {
    /// Column cardinality by direct expansion
    Colcard {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        base: usize,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        col: usize,
    },
    /// Occurrence residues of a word modulo candidate divisors
    Residues {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Word, whitespace-separated symbols
        #[arg(long)]
        word: String,
        /// Comma-separated candidate moduli
        #[arg(long, value_delimiter = ',')]
        mods: Vec<u64>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Distinct supertile towers over coherent odometer residues
    Fibre {
        #[command(flatten)]
        input: Input,
        /// Comma-separated `level=residue` pairs, levels increasing
        #[arg(long, value_delimiter = ',')]
        residues: Vec<String>,
    },
}

fn exit_code_for(e: &CoreError) -> u8 {
    match e {
        CoreError::NotTorsionFree(_)
        | CoreError::NotPrimitive
        | CoreError::CertificateNotFound { .. }
        | CoreError::NotClosed(_) => 2,
        CoreError::BudgetExceeded(_) | CoreError::NoReturn { .. } => 3,
        _ => 1,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<SequenceFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })?;
    parse(&text).map_err(|e| Failure {
        code: 1,
        message: format!("{}:{e}", path.display()),
    })
}

fn pick(file: &SequenceFile, name: Option<&str>) -> Result<DirectiveSequence, Failure> {
    file.sequence(name)
        .cloned()
        .map_err(|message| Failure { code: 1, message })
}

fn load_input(input: &Input) -> Result<DirectiveSequence, Failure> {
    let f = load(&input.file)?;
    pick(&f, input.sequence.as_deref())
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_word_arg(ds: &DirectiveSequence, level: usize, text: &str) -> Result<Vec<u32>, Failure> {
    ds.alphabet_at(level)
        .parse_word(text)
        .map_err(Failure::from)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            input,
            depth,
            json,
            output,
        } => {
            let ds = load_input(&input)?;
            let report = analysis_report(&ds, depth);
            let text = if json {
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                report.to_text()
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Height { input, depth, json } => {
            let ds = load_input(&input)?;
            let depth = depth.unwrap_or_else(|| default_height_depth(&ds));
            let (h, levels) = comb_height(&ds, depth)?;
            if json {
                let rows: Vec<serde_json::Value> = levels
                    .iter()
                    .map(|l| {
                        serde_json::json!({
                            "level": l.level,
                            "h": l.h,
                            "certified": l.certified(),
                            "depth": l.depth,
                        })
                    })
                    .collect();
                println!("{}", serde_json::json!({ "h_comb": h, "levels": rows }));
            } else {
                for l in &levels {
                    println!(
                        "level {}: h = {} ({})",
                        l.level,
                        l.h,
                        if l.certified() {
                            "certified".to_string()
                        } else {
                            format!("empirical, depth {}", l.depth)
                        }
                    );
                }
                println!("h_comb = {h}");
            }
        }
        Command::Purebase {
            input,
            depth,
            output,
        } => {
            let ds = load_input(&input)?;
            let depth = depth.unwrap_or_else(|| default_height_depth(&ds));
            let pb = pure_base(&ds, depth)?;
            let mut text = String::new();
            text.push_str(&format!("# pure base, height {}\n", pb.h));
            for coding in &pb.codings {
                let decoded: Vec<String> = coding
                    .alphabet
                    .symbols()
                    .iter()
                    .zip(&coding.words)
                    .map(|(name, w)| {
                        format!(
                            "{name}={}",
                            pb.base.alphabet_at(coding.level).render_word_compact(w)
                        )
                    })
                    .collect();
                text.push_str(&format!(
                    "# level {} coding: {}\n",
                    coding.level,
                    decoded.join(" ")
                ));
            }
            text.push_str(&render_sequence("PUREBASE", &pb.pure));
            emit(output.as_deref(), &text)?;
        }
        Command::Injectivize { input, output } => {
            let ds = load_input(&input)?;
            let (inj, steps) = injectivize(&ds);
            let mut text = String::new();
            if steps.is_empty() {
                text.push_str("# input is already letter-injective\n");
            }
            for step in &steps {
                let q = &step.quotient;
                let classes: Vec<String> = q
                    .quotient
                    .ids()
                    .map(|b| {
                        let members: Vec<&str> = q
                            .class_members(b)
                            .into_iter()
                            .map(|a| q.source.name(a))
                            .collect();
                        format!("{{{}}}->{}", members.join(","), q.quotient.name(b))
                    })
                    .collect();
                text.push_str(&format!(
                    "# level {} gluing: {}\n",
                    step.level,
                    classes.join(" ")
                ));
            }
            text.push_str(&render_sequence("INJECTIVE", &inj));
            emit(output.as_deref(), &text)?;
        }
        Command::Column {
            input,
            depth,
            raw,
            json,
        } => {
            let ds = load_input(&input)?;
            if raw {
                let levels = ds.scan_levels().max(4);
                let values: Vec<usize> = (0..levels)
                    .map(|m| c_at_raw(&ds, m))
                    .collect::<Result<_, _>>()?;
                if json {
                    println!("{}", serde_json::json!({ "raw_c": values }));
                } else {
                    for (m, v) in values.iter().enumerate() {
                        println!("c(theta, {m}) = {v}  # raw, no injectivization");
                    }
                }
                return Ok(());
            }
            let naive = naive_column_number(&ds)?;
            let depth = depth.unwrap_or_else(|| default_height_depth(&ds));
            let true_c = column_number(&ds, depth);
            if json {
                let c_true = match &true_c {
                    Ok(tc) => serde_json::json!(tc.value),
                    Err(_) => serde_json::Value::Null,
                };
                println!(
                    "{}",
                    serde_json::json!({
                        "c_naive": naive.value,
                        "per_base": naive.per_base,
                        "c_true": c_true,
                    })
                );
            } else {
                println!("c_naive = {}", naive.value);
                println!(
                    "witness: column {} of composite({}, {})",
                    naive.witness.column, naive.witness.base_level, naive.witness.level
                );
                match true_c {
                    Ok(tc) => println!("c_true = {} (on the pure base)", tc.value),
                    Err(e) => println!("c_true unavailable: {e}"),
                }
            }
        }
        Command::Cobham {
            file,
            file2,
            sequence,
            sequence2,
        } => {
            let first = pick(&load(&file)?, sequence.as_deref())?;
            let second = pick(&load(&file2)?, sequence2.as_deref())?;
            let o = cobham_obstruction(&first, &second)?;
            match o.first_not_factor_of_second {
                Some(p) => println!(
                    "obstruction: the first shift cannot be a topological factor \
                     of the second (witness prime {p})"
                ),
                None => {
                    println!("no obstruction from the first shift's lengths against the second")
                }
            }
            match o.second_not_factor_of_first {
                Some(p) => println!(
                    "obstruction: the second shift cannot be a topological factor \
                     of the first (witness prime {p})"
                ),
                None => {
                    println!("no obstruction from the second shift's lengths against the first")
                }
            }
        }
        Command::Language {
            input,
            level,
            length,
        } => {
            let ds = load_input(&input)?;
            let lang = persistent_words(&ds, level, length);
            let alphabet = ds.alphabet_at(level);
            for w in &lang.words {
                println!("{}", alphabet.render_word(w));
            }
            eprintln!(
                "# {} persistent words of length <= {length} at level {level}{}",
                lang.words.len(),
                if lang.stabilized {
                    ""
                } else {
                    " (not stabilized)"
                }
            );
        }
        Command::Desub {
            input,
            level,
            width,
            window,
            anchor,
        } => {
            let ds = load_input(&input)?;
            let w: Vec<u32> = match (&window, width) {
                (Some(text), _) => parse_word_arg(&ds, level, text)?,
                (None, Some(width)) => {
                    let u = limit_word_prefix(&ds, level, anchor + width)?;
                    u[anchor..anchor + width].to_vec()
                }
                (None, None) => {
                    return Err(Failure {
                        code: 1,
                        message: "give either --width or --window".into(),
                    })
                }
            };
            let count = oracle::desubstitution_count(&ds, level, &w, anchor)?;
            println!("{count}");
        }
        Command::Oracle { op } => match op {
            OracleOp::Colcard {
                input,
                base,
                level,
                col,
            } => {
                let ds = load_input(&input)?;
                println!(
                    "{}",
                    oracle::empirical_column_cardinality(&ds, base, level, col)?
                );
            }
            OracleOp::Residues {
                input,
                level,
                word,
                mods,
                depth,
            } => {
                let ds = load_input(&input)?;
                let w = parse_word_arg(&ds, level, &word)?;
                let depth = depth.unwrap_or(DEFAULT_DEPTH);
                let res = oracle::occurrence_residues(&ds, level, &w, depth, &mods)?;
                for (d, set) in res {
                    let list: Vec<String> = set.iter().map(u64::to_string).collect();
                    println!("mod {d}: {{{}}}", list.join(", "));
                }
            }
            OracleOp::Fibre { input, residues } => {
                let ds = load_input(&input)?;
                let mut parsed: Vec<(usize, BigUint)> = Vec::new();
                for item in &residues {
                    let (l, r) = item.split_once('=').ok_or(Failure {
                        code: 1,
                        message: format!("bad residue `{item}`, expected level=residue"),
                    })?;
                    let level: usize = l.parse().map_err(|_| Failure {
                        code: 1,
                        message: format!("bad level `{l}`"),
                    })?;
                    let residue: BigUint = r.parse().map_err(|_| Failure {
                        code: 1,
                        message: format!("bad residue `{r}`"),
                    })?;
                    parsed.push((level, residue));
                }
                println!("{}", oracle::fibre_count(&ds, &parsed)?);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
