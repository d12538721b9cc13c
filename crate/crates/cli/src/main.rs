//! `sliced`: encode files into word files, corrupt them reproducibly, decode
//! them back and run the acceptance suite.
//!
//! Message files are raw bytes read MSB first. A word carries
//! `floor(log2 d1_domain) + d2_bits` message bits: the first field holds
//! `d1 - 1`, so every bit pattern is a valid message. Short inputs are
//! zero-padded and decoded output is zero-padded to a whole byte.
//!
//! Exit codes: 0 success, 1 infeasible parameters or failed self-test,
//! 2 I/O or malformed input, 3 decode failure.

mod wordfile;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;
use sliced_core::acceptance::{self, Level, Options, CRITERIA};
use sliced_core::channel::{apply_pattern, random_pattern_exact};
use sliced_core::del_code::{del_decode_with, del_encode, del_params, del_redundancy_report};
use sliced_core::deletion_index::DpOptions;
use sliced_core::message::{d1_packed_bits, message_from_bits, message_to_bits};
use sliced_core::subst_code::{redundancy_report, subst_decode, subst_encode, subst_params};
use sliced_core::{
    BitString, DelMode, DelParams, ErrorPattern, Message, SlicedError, SubstParams, Word,
};

use crate::wordfile::{Header, Mode, WordFile};

#[derive(Parser)]
#[command(
    name = "sliced",
    version,
    about = "Codes for unordered sets of strings with bit-level errors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message file into a word file and print the redundancy report.
    Encode {
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        /// Single-string deletion codec for del mode: vt1, brute{n}k{K} or none.
        #[arg(long)]
        codec: Option<String>,
        /// Exact `d1` in `[1, d1_domain]`; the input then supplies only `d2`.
        #[arg(long)]
        d1: Option<BigUint>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply a random pattern with exact operation counts.
    Corrupt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        subs: usize,
        #[arg(long, default_value_t = 0)]
        dels: usize,
        #[arg(long, default_value_t = 0)]
        ins: usize,
        /// Overridden by SLICED_SEED.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to record the applied pattern; defaults to `<out>.pattern.json`.
        #[arg(long)]
        pattern_out: Option<PathBuf>,
    },
    /// Decode a word file back into the message file.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write only `d2` and report `d1` as a decimal in the JSON output.
        #[arg(long)]
        exact: bool,
    },
    /// Run the acceptance criteria.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// Runs criterion 6 against a deliberately broken dynamic program.
        #[arg(long, hide = true)]
        break_dp: bool,
        /// Overridden by SLICED_SEED.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: anyhow::Error| e.to_string())
}

struct Failure {
    code: u8,
    reason: &'static str,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            reason: "io",
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            reason: "malformed_input",
            message: message.into(),
        }
    }

    fn params(e: SlicedError) -> Self {
        Self {
            code: 1,
            reason: "infeasible_parameters",
            message: e.to_string(),
        }
    }

    fn decode(e: SlicedError) -> Self {
        let reason = match &e {
            SlicedError::Decode(f) => f.code(),
            _ => "invalid_word",
        };
        Self {
            code: 3,
            reason,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

enum Scheme {
    Subst(SubstParams),
    Del(DelParams),
}

impl Scheme {
    fn new(header: &Header) -> Result<Self, Failure> {
        match header.mode {
            Mode::Subst => {
                if header.codec != "none" {
                    return Err(Failure::params(SlicedError::InvalidInput(
                        "subst mode takes codec=none".into(),
                    )));
                }
                subst_params(header.m, header.l, header.k)
                    .map(Scheme::Subst)
                    .map_err(Failure::params)
            }
            Mode::Del => del_params(header.m, header.l, header.k, &header.codec)
                .map(Scheme::Del)
                .map_err(Failure::params),
        }
    }

    fn d1_domain(&self) -> &BigUint {
        match self {
            Scheme::Subst(p) => &p.d1_domain,
            Scheme::Del(p) => &p.d1_domain,
        }
    }

    fn d2_bits(&self) -> usize {
        match self {
            Scheme::Subst(p) => p.d2_bits,
            Scheme::Del(p) => p.d2_bits,
        }
    }

    fn encode(&self, msg: &Message) -> Result<Word, SlicedError> {
        match self {
            Scheme::Subst(p) => subst_encode(msg, p),
            Scheme::Del(p) => del_encode(msg, p),
        }
    }

    fn decode(&self, w: &Word) -> Result<Message, SlicedError> {
        match self {
            Scheme::Subst(p) => subst_decode(w, p),
            Scheme::Del(p) => del_decode_with(w, p, DelMode::Indels),
        }
    }

    fn report(&self) -> serde_json::Value {
        match self {
            Scheme::Subst(p) => serde_json::to_value(redundancy_report(p)),
            Scheme::Del(p) => serde_json::to_value(del_redundancy_report(p)),
        }
        .expect("reports serialize")
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn seed_from_env(seed: u64) -> Result<u64, Failure> {
    match std::env::var("SLICED_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("SLICED_SEED={v} is not a u64"))),
        Err(_) => Ok(seed),
    }
}

/// The first `bits` bits of `bytes`, zero-padded if the input is short.
fn take_bits(bytes: &[u8], bits: usize) -> BitString {
    let available = bytes.len() * 8;
    if available < bits {
        eprintln!("warning: input has {available} bits, zero-padding to {bits}");
    } else if available >= bits + 8 {
        eprintln!("warning: input has {available} bits, only the first {bits} are encoded");
    }
    let mut padded = bytes.to_vec();
    padded.resize(bits.div_ceil(8).max(bytes.len()), 0);
    BitString::from_bytes(&padded, bits)
}

#[allow(clippy::too_many_arguments)]
fn cmd_encode(
    mode: Mode,
    m: usize,
    l: usize,
    k: usize,
    codec: Option<String>,
    d1: Option<BigUint>,
    input: &Path,
    out: &Path,
) -> CmdResult {
    let codec = codec.unwrap_or_else(|| {
        if mode == Mode::Del {
            "vt1".into()
        } else {
            "none".into()
        }
    });
    let header = Header {
        mode,
        m,
        l,
        k,
        codec,
    };
    let scheme = Scheme::new(&header)?;
    let bytes = read(input)?;
    let (domain, d2_bits) = (scheme.d1_domain().clone(), scheme.d2_bits());
    let msg = match d1 {
        Some(d1) => {
            let msg = Message {
                d1,
                d2: take_bits(&bytes, d2_bits),
            };
            msg.validate(&domain, d2_bits)
                .map_err(|e| Failure::input(e.to_string()))?;
            msg
        }
        None => {
            let bits = take_bits(&bytes, d1_packed_bits(&domain) + d2_bits);
            message_from_bits(&bits, &domain, d2_bits).map_err(|e| Failure::input(e.to_string()))?
        }
    };
    let word = scheme.encode(&msg).map_err(|e| Failure {
        code: 1,
        reason: "encode",
        message: e.to_string(),
    })?;
    write(out, WordFile { header, word }.render().as_bytes())?;
    let mut report = scheme.report();
    report["message_bits"] = json!(d1_packed_bits(&domain) + d2_bits);
    println!("{report}");
    Ok(())
}

fn read_word_file(path: &Path) -> Result<WordFile, Failure> {
    let text =
        String::from_utf8(read(path)?).map_err(|_| Failure::input("word file is not UTF-8"))?;
    WordFile::parse(&text).map_err(|e| Failure::input(format!("{}: {e:#}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn cmd_corrupt(
    input: &Path,
    out: &Path,
    subs: usize,
    dels: usize,
    ins: usize,
    seed: u64,
    pattern_out: Option<PathBuf>,
) -> CmdResult {
    let seed = seed_from_env(seed)?;
    let file = read_word_file(input)?;
    if subs + dels + ins > file.header.k {
        eprintln!(
            "warning: {} operations exceed K = {}",
            subs + dels + ins,
            file.header.k
        );
    }
    let pattern: ErrorPattern = random_pattern_exact(&file.word, subs, dels, ins, seed)
        .map_err(|e| Failure::input(e.to_string()))?;
    let word = apply_pattern(&file.word, &pattern).map_err(|e| Failure::input(e.to_string()))?;
    write(
        out,
        WordFile {
            header: file.header,
            word,
        }
        .render()
        .as_bytes(),
    )?;
    let sidecar = pattern_out.unwrap_or_else(|| {
        let mut name = out.as_os_str().to_owned();
        name.push(".pattern.json");
        PathBuf::from(name)
    });
    let record = json!({ "seed": seed, "pattern": pattern });
    write(&sidecar, format!("{record:#}\n").as_bytes())
}

fn cmd_decode(input: &Path, out: &Path, exact: bool) -> CmdResult {
    let file = read_word_file(input)?;
    let scheme = Scheme::new(&file.header)?;
    let msg = scheme.decode(&file.word).map_err(Failure::decode)?;
    let bits = if exact {
        msg.d2.clone()
    } else {
        message_to_bits(&msg, scheme.d1_domain(), scheme.d2_bits()).map_err(|e| Failure {
            code: 3,
            reason: "d1_unpackable",
            message: format!("{e}; rerun with --exact"),
        })?
    };
    write(out, &bits.to_bytes())?;
    println!(
        "{}",
        json!({ "status": "ok", "d1": msg.d1.to_string(), "bits": bits.len() })
    );
    Ok(())
}

fn cmd_selftest(level: LevelArg, only: Vec<u32>, break_dp: bool, seed: u64) -> CmdResult {
    let opts = Options {
        level: match level {
            LevelArg::Quick => Level::Quick,
            LevelArg::Full => Level::Full,
        },
        dp: DpOptions {
            doubled_deleted_term: break_dp,
            ..DpOptions::default()
        },
        seed: seed_from_env(seed)?,
    };
    let ids: Vec<u32> = if only.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        only
    };
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = ids
            .iter()
            .map(|&id| {
                let opts = &opts;
                s.spawn(move || acceptance::run(id, opts))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect()
    });
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            reason: "selftest",
            message: format!("{failed} criteria failed"),
        })
    }
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Encode {
            mode,
            m,
            l,
            k,
            codec,
            d1,
            input,
            out,
        } => cmd_encode(mode, m, l, k, codec, d1, &input, &out),
        Command::Corrupt {
            input,
            out,
            subs,
            dels,
            ins,
            seed,
            pattern_out,
        } => cmd_corrupt(&input, &out, subs, dels, ins, seed, pattern_out),
        Command::Decode { input, out, exact } => cmd_decode(&input, &out, exact),
        Command::Selftest {
            level,
            only,
            break_dp,
            seed,
        } => cmd_selftest(level, only, break_dp, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.code == 3 {
                println!(
                    "{}",
                    json!({ "status": "failure", "reason": f.reason, "message": f.message })
                );
            }
            eprintln!("error ({}): {}", f.reason, f.message);
            ExitCode::from(f.code)
        }
    }
}
