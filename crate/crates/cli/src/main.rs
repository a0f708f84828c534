//! `powfree`: power-freeness checks, enumeration and the non-recurrent
//! letter construction from the command line.
//!
//! Exit status: 0 success or free, 1 not free / violated / internal
//! failure, 2 usage error, 3 a window or search limit was reached.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use powfree_core::assembly::{nonrecur, seed_word, AssemblyConfig};
use powfree_core::delta::glue;
use powfree_core::fixture::{parse_bi, parse_tuple};
use powfree_core::oracle::{budget_from_env, enumerate_power_free, verify_lemmas_with};
use powfree_core::streams::{RightInfiniteWord, StreamSpec};
use powfree_core::words::{fractional_power, DEFAULT_SYMBOLS};
use powfree_core::{is_power_free, max_exponent, Alphabet, Error, Exec, Exponent, PowerBound};

#[derive(Parser)]
#[command(name = "powfree", version, about = "Fractional powers, power-free words and non-recurrent letters")]
struct Cli {
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct AlphabetArgs {
    /// Symbol table, one character per letter.
    #[arg(long, default_value = DEFAULT_SYMBOLS)]
    symbols: String,
    /// Use only the first K symbols.
    #[arg(long)]
    k: Option<usize>,
}

impl AlphabetArgs {
    fn alphabet(&self) -> Result<Alphabet, Error> {
        let symbols: String = match self.k {
            Some(k) if k == 0 || k > self.symbols.chars().count() => {
                return Err(Error::InvalidInput(format!("k = {k} does not fit the symbol table")))
            }
            Some(k) => self.symbols.chars().take(k).collect(),
            None => self.symbols.clone(),
        };
        Alphabet::from_symbols(&symbols)
    }
}

#[derive(Args)]
struct LimitArgs {
    /// Allow alpha below 5 (still above 2).
    #[arg(long)]
    unsafe_alpha: bool,
    /// Letters glued after the marked x.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Is a word, or a window of a stream, free of the given powers?
    Check {
        /// Bound such as 2, 7/3 or 2+ (plus forbids only larger exponents).
        #[arg(long)]
        alpha: PowerBound,
        #[arg(long, conflicts_with = "stream", required_unless_present = "stream")]
        word: Option<String>,
        /// Stream spec: tm:a,b, periodic:W, rev(S), S+W.
        #[arg(long)]
        stream: Option<String>,
        #[arg(long, requires = "stream", allow_hyphen_values = true, default_value_t = 0)]
        from: i64,
        #[arg(long, requires = "stream", allow_hyphen_values = true)]
        to: Option<i64>,
        #[command(flatten)]
        alphabet: AlphabetArgs,
    },
    /// Largest exponent of a factor, with a witness.
    Exponent {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        alphabet: AlphabetArgs,
    },
    /// The fractional power r^alpha.
    Power {
        #[arg(long)]
        r: String,
        #[arg(long)]
        alpha: Exponent,
        #[command(flatten)]
        alphabet: AlphabetArgs,
    },
    /// Prefix of the Thue-Morse word over two symbols.
    Tm {
        #[arg(long)]
        len: usize,
        #[arg(long, default_value = "0")]
        a: char,
        #[arg(long, default_value = "1")]
        b: char,
    },
    /// Count free words of each length up to --max-len.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        alpha: PowerBound,
        #[arg(long)]
        max_len: usize,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Glue a right-infinite word after a tuple fixture.
    Glue {
        #[arg(long)]
        fixture: PathBuf,
        /// Defaults to Thue-Morse over the two smallest letters other than x.
        #[arg(long)]
        stream: Option<String>,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
    },
    /// Build a word with a non-recurrent letter from a bi-infinite fixture.
    Nonrecur {
        #[arg(long)]
        fixture: PathBuf,
        /// Overrides the fixture's w.
        #[arg(long)]
        w: Option<String>,
        /// Letters inspected on each side of position 0.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        max_expansions: Option<u64>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check the shrink-step invariants on generated instances.
    VerifyLemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        sequential: bool,
    },
}

/// What a command produced: text for the output stream and an exit code.
struct Done {
    text: String,
    code: u8,
}

impl Done {
    fn ok(text: String) -> Self {
        Done { text, code: 0 }
    }
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<Done, Error> {
    match cmd {
        Cmd::Check {
            alpha,
            word,
            stream,
            from,
            to,
            alphabet,
        } => {
            let a = alphabet.alphabet()?;
            let w = match (word, stream) {
                (Some(w), _) => a.parse_word(&w)?,
                (None, Some(spec)) => {
                    let to = to.ok_or_else(|| Error::InvalidInput("--stream needs --to".into()))?;
                    StreamSpec::parse(&spec, &a)?.window(from, to)?.word
                }
                (None, None) => unreachable!("clap requires one of --word or --stream"),
            };
            let v = is_power_free(&w, alpha);
            Ok(match v.witness {
                None => Done::ok("free\n".into()),
                Some(r) => Done {
                    text: format!("not free: {}\n", r.describe(&a)),
                    code: 1,
                },
            })
        }
        Cmd::Exponent { word, alphabet } => {
            let a = alphabet.alphabet()?;
            let r = max_exponent(&a.parse_word(&word)?)?;
            Ok(Done::ok(format!("{}\n", r.describe(&a))))
        }
        Cmd::Power { r, alpha, alphabet } => {
            let a = alphabet.alphabet()?;
            let w = fractional_power(&a.parse_word(&r)?, alpha)?;
            Ok(Done::ok(format!("{}\n", a.render(&w))))
        }
        Cmd::Tm { len, a, b } => {
            let alphabet = Alphabet::from_symbols(&[a, b].iter().collect::<String>())?;
            let w = RightInfiniteWord::thue_morse(0, 1)?.prefix(len);
            Ok(Done::ok(format!("{}\n", alphabet.render(&w))))
        }
        Cmd::Enumerate {
            k,
            alpha,
            max_len,
            sequential,
        } => {
            let e = enumerate_power_free(k, alpha, max_len, budget_from_env()?, false, exec(sequential))?;
            Ok(Done::ok(e.to_tsv()))
        }
        Cmd::Glue { fixture, stream, steps } => {
            let fx = parse_tuple(&read(&fixture)?)?;
            let t0 = fx.tuple;
            let a = Alphabet::with_size(t0.k)?;
            let tail = match stream {
                Some(spec) => StreamSpec::parse(&spec, &a)?.into_right()?,
                None => seed_word(t0.x, t0.k)?,
            };
            let g = glue(&t0, &tail, steps)?;
            let mut text = g.trace_text();
            text.push_str(&format!(
                "eta_hat={}\nstabilized_at={}\nshrinks={}\nfinal_window=[{},{}) {}\n",
                a.render(&g.eta_hat),
                g.stabilized_at,
                g.shrinks(),
                g.final_window.from,
                g.final_window.to,
                a.render(&g.final_window.word)
            ));
            Ok(Done::ok(text))
        }
        Cmd::Nonrecur {
            fixture,
            w,
            window,
            max_expansions,
            limits,
        } => {
            let fx = parse_bi(&read(&fixture)?)?;
            let a = Alphabet::with_size(fx.k)?;
            let w = match w {
                Some(w) => a.parse_word(&w)?,
                None => fx.w.clone(),
            };
            let mut cfg = AssemblyConfig::new(fx.alpha, fx.k);
            cfg.unsafe_alpha = limits.unsafe_alpha;
            if let Some(s) = limits.steps {
                cfg.steps = s;
            }
            if let Some(d) = window {
                cfg.window = d;
            }
            if let Some(m) = max_expansions {
                cfg.max_expansions = m;
            }
            if w.len() > 6 {
                eprintln!("warning: |w| = {} makes the required gap grow like alpha^|w|", w.len());
            }
            let (_, x, report) = nonrecur(&fx.v, &w, &fx.decls, &cfg)?;
            let text = format!(
                "{report}\nx_symbol={}\nwindow {}\n",
                a.symbol(x),
                a.render(&report.window.word)
            );
            let code = if report.verdict == "free" { 0 } else { 1 };
            Ok(Done { text, code })
        }
        Cmd::VerifyLemmas {
            seed,
            count,
            sequential,
        } => {
            let r = verify_lemmas_with(seed, count, exec(sequential));
            let code = if r.all_passed() { 0 } else { 1 };
            Ok(Done { text: r.to_string(), code })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::WindowExhausted(_) | Error::SearchExhausted(_) | Error::BudgetExceeded(_) => 3,
        Error::InternalInconsistency(_) | Error::ConstructionFailure(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(done) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &done.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", done.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(done.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
