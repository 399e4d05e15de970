use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use pmwe::align::Op;
use pmwe::alphabet::reduce_to_pattern;
use pmwe::codec::{serialize_with_breakdown, Mode, SizeBreakdown};
use pmwe::encoder::{encode_with, EncodeOptions, Encoded};
use pmwe::lowerbound::{self, CSV_HEADER};
use pmwe::matcher::{find_occurrences_bytes, DEFAULT_CAP};
use pmwe::{decode, deserialize_sketch, instances, Error, Occurrence, OccurrenceReport, Sketch};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_CORRUPT: u8 = 4;
const EXIT_VERIFY: u8 = 5;

/// Sketches for pattern matching with edits.
#[derive(Parser)]
#[command(name = "pmwe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Instance {
    /// Pattern file (raw bytes).
    #[arg(long)]
    pattern: PathBuf,
    /// Text file (raw bytes).
    #[arg(long)]
    text: PathBuf,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct Tuning {
    /// Encode small instances structurally instead of verbatim.
    #[arg(long)]
    no_raw_cutoff: bool,
    /// Worker threads for block encoding.
    #[arg(long)]
    jobs: Option<usize>,
    /// Optimal alignments reported per fragment.
    #[arg(long, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
}

impl Tuning {
    fn options(&self) -> EncodeOptions {
        let base = if self.no_raw_cutoff {
            EncodeOptions::structured()
        } else {
            EncodeOptions::default()
        };
        EncodeOptions {
            jobs: self.jobs,
            cap: self.cap as usize,
            ..base
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the sketch of (P, T, k) and print where its bits go.
    Encode {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// List every occurrence stored in a sketch.
    Decode {
        sketch: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
    },
    /// Encode, decode and compare with a direct search on the inputs.
    Verify {
        #[command(flatten)]
        inst: Instance,
        /// Check this sketch instead of a fresh one.
        #[arg(long)]
        sketch: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Sizes and timings on seeded random instances, as CSV.
    Bench {
        #[arg(long, default_value = "128,1024,2,4;256,2048,4,4;256,2048,8,26")]
        grid: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Sizes against the entropy floor on the all-zero pattern family, as CSV.
    Lowerbound {
        #[arg(
            long,
            default_value = "128,1024,1,2;128,1024,1,16;128,1024,4,2;128,1024,4,16;128,1024,16,2;128,1024,16,16"
        )]
        grid: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Encode after collapsing text symbols absent from the pattern.
    PositionsOnly {
        #[command(flatten)]
        inst: Instance,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure {
            code,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_corrupt() {
            EXIT_CORRUPT
        } else {
            EXIT_USAGE
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(p) => write(p, text.as_bytes()),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_IO, format!("stdout: {e}"))),
    }
}

/// `(n/m) k log2(m sigma / k)`, the size the construction is measured against.
fn reference_bits(m: usize, n: usize, k: usize, sigma: usize) -> f64 {
    if m == 0 || k == 0 {
        return 0.0;
    }
    let x = (m * sigma.max(1)) as f64 / k as f64;
    (n as f64 / m as f64) * k as f64 * x.log2().max(0.0)
}

fn size_report(enc: &Encoded, br: &SizeBreakdown) -> String {
    let h = &enc.sketch.header;
    let mut s = String::new();
    let mode = if enc.report.raw { "RAW" } else { "BLOCKS" };
    s += &format!(
        "n={} m={} k={} sigma={} mode={mode}\n",
        h.n,
        h.m,
        h.k,
        h.sigma()
    );
    s += &format!(
        "header_bits {} (alphabet {})\n",
        br.header_bits, br.alphabet_bits
    );
    for (i, (b, bits)) in enc.sketch.blocks.iter().zip(&br.block_bits).enumerate() {
        if b.mode() != Mode::Empty {
            s += &format!("block {i} {} {bits}\n", b.mode().name());
        }
    }
    let empty = enc
        .sketch
        .blocks
        .iter()
        .filter(|b| b.mode() == Mode::Empty)
        .count();
    s += &format!("empty_blocks {empty}\n");
    s += &format!("escalated_blocks {}\n", enc.report.escalations());
    s += &format!("padding_bits {}\n", br.padding_bits);
    s += &format!("trailer_bits {}\n", br.trailer_bits);
    s += &format!("payload_bits {}\n", br.payload_bits());
    s += &format!("total_bits {}\n", br.total_bits);
    s += &format!(
        "reference_bits {:.1}\n",
        reference_bits(h.m, h.n, h.k, h.sigma())
    );
    s
}

fn show_byte(b: u8) -> String {
    if b.is_ascii_graphic() && !b",;|:>\\".contains(&b) {
        (b as char).to_string()
    } else {
        format!("\\x{b:02x}")
    }
}

fn occurrence_line(o: &Occurrence, alphabet: &[u8]) -> String {
    let sym = |c: u32| {
        alphabet
            .get(c as usize)
            .map_or_else(|| format!("#{c}"), |&b| show_byte(b))
    };
    let infos: Vec<String> = o
        .edit_infos
        .iter()
        .map(|info| {
            if info.tuples.is_empty() {
                return "-".into();
            }
            let ops: Vec<String> = info
                .tuples
                .iter()
                .map(|e| match e.op() {
                    Op::Sub => format!(
                        "S{}:{}:{}>{}",
                        e.x,
                        e.y,
                        sym(e.cx.unwrap()),
                        sym(e.cy.unwrap())
                    ),
                    Op::Del => format!("D{}:{}:{}", e.x, e.y, sym(e.cx.unwrap())),
                    Op::Ins => format!("I{}:{}:{}", e.x, e.y, sym(e.cy.unwrap())),
                    Op::Match => format!("M{}:{}", e.x, e.y),
                })
                .collect();
            ops.join(",")
        })
        .collect();
    let more = if o.truncated { " | ..." } else { "" };
    format!("{} {} {} {}{more}", o.t, o.t_end, o.dist, infos.join(" | "))
}

fn load_sketch(path: &Path) -> Result<Sketch, Failure> {
    Ok(deserialize_sketch(&read(path)?)?)
}

fn first_divergence(
    got: &OccurrenceReport,
    want: &OccurrenceReport,
    alphabet: &[u8],
) -> Option<String> {
    let (g, w) = (&got.occurrences, &want.occurrences);
    for i in 0..g.len().max(w.len()) {
        match (g.get(i), w.get(i)) {
            (Some(a), Some(b)) if a == b => continue,
            (a, b) => {
                let show = |o: Option<&Occurrence>| {
                    o.map_or("(none)".into(), |o| occurrence_line(o, alphabet))
                };
                return Some(format!(
                    "entry {i}\n  decoded:  {}\n  expected: {}",
                    show(a),
                    show(b)
                ));
            }
        }
    }
    None
}

fn cmd_encode(
    inst: &Instance,
    out: &Path,
    tuning: &Tuning,
    text: Option<Vec<u8>>,
) -> Result<String, Failure> {
    let p = read(&inst.pattern)?;
    let t = match text {
        Some(t) => t,
        None => read(&inst.text)?,
    };
    let enc = encode_with(&p, &t, inst.k, &tuning.options());
    let (bytes, br) = serialize_with_breakdown(&enc.sketch);
    write(out, &bytes)?;
    Ok(size_report(&enc, &br))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Encode { inst, out, tuning } => {
            let report = cmd_encode(&inst, &out, &tuning, None)?;
            emit(&None, &report)
        }
        Command::PositionsOnly { inst, out, tuning } => {
            let p = read(&inst.pattern)?;
            let t = read(&inst.text)?;
            let full = pmwe::alphabet::Alphabet::from_inputs(&[&p, &t]).size();
            let (reduced, _) = reduce_to_pattern(&p, &t);
            let sigma = pmwe::alphabet::Alphabet::from_inputs(&[&p, &reduced]).size();
            let report = cmd_encode(&inst, &out, &tuning, Some(reduced))?;
            emit(
                &None,
                &format!("sigma_full {full}\nsigma_reduced {sigma}\n{report}"),
            )
        }
        Command::Decode { sketch, cap } => {
            let s = load_sketch(&sketch)?;
            let rep = decode(&s, cap as usize)?;
            let mut text = String::new();
            for o in &rep.occurrences {
                text += &occurrence_line(o, &s.header.alphabet);
                text.push('\n');
            }
            emit(&None, &text)
        }
        Command::Verify {
            inst,
            sketch,
            tuning,
        } => {
            let p = read(&inst.pattern)?;
            let t = read(&inst.text)?;
            let cap = tuning.cap as usize;
            let s = match &sketch {
                Some(path) => load_sketch(path)?,
                None => {
                    let enc = encode_with(&p, &t, inst.k, &tuning.options());
                    deserialize_sketch(&pmwe::serialize_sketch(&enc.sketch))?
                }
            };
            let want = find_occurrences_bytes(&p, &t, inst.k, cap);
            let h = &s.header;
            let expected = pmwe::alphabet::Alphabet::from_inputs(&[&p, &t]);
            if (h.n, h.m, h.k) != (t.len(), p.len(), inst.k) || h.alphabet != expected.table() {
                println!("FAIL");
                println!(
                    "sketch header n={} m={} k={} does not describe these inputs",
                    h.n, h.m, h.k
                );
                return Err(Failure::new(EXIT_VERIFY, "verification failed"));
            }
            let got = decode(&s, cap)?;
            match first_divergence(&got, &want, &h.alphabet) {
                None => {
                    println!("PASS {} occurrences", want.len());
                    Ok(())
                }
                Some(d) => {
                    println!("FAIL");
                    println!("first divergence at {d}");
                    Err(Failure::new(EXIT_VERIFY, "verification failed"))
                }
            }
        }
        Command::Bench {
            grid,
            seed,
            trials,
            out,
            tuning,
        } => {
            let cells = lowerbound::parse_grid(&grid)?;
            let opts = tuning.options();
            let cap = tuning.cap as usize;
            let mut csv =
                format!("{CSV_HEADER},raw,escalations,periodic_fallbacks,encode_ms,decode_ms\n");
            let mut ok = true;
            for (m, n, k, sigma) in cells {
                if m == 0 || n < m || k == 0 || !(2..=256).contains(&sigma) {
                    return Err(Failure::new(
                        EXIT_USAGE,
                        format!("bad grid cell {m},{n},{k},{sigma}"),
                    ));
                }
                for i in 0..trials as u64 {
                    let (p, t) = instances::planted(m, n, k, sigma, seed + i);
                    let start = Instant::now();
                    let enc = encode_with(&p, &t, k, &opts);
                    let enc_ms = start.elapsed().as_secs_f64() * 1e3;
                    let (bytes, br) = serialize_with_breakdown(&enc.sketch);
                    let start = Instant::now();
                    let got = decode(&deserialize_sketch(&bytes)?, cap)?;
                    let dec_ms = start.elapsed().as_secs_f64() * 1e3;
                    let decode_ok = got == find_occurrences_bytes(&p, &t, k, cap);
                    ok &= decode_ok;
                    let reference = reference_bits(m, n, k, sigma);
                    let fallbacks = enc
                        .report
                        .blocks
                        .iter()
                        .filter(|b| b.periodic_fallback)
                        .count();
                    csv += &format!(
                        "{m},{n},{k},{sigma},{},{},{reference:.3},{:.4},{decode_ok},{},{},{fallbacks},{enc_ms:.2},{dec_ms:.2}\n",
                        seed + i,
                        br.total_bits,
                        br.total_bits as f64 / reference,
                        enc.report.raw,
                        enc.report.escalations(),
                    );
                }
            }
            emit(&out, &csv)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::new(
                    EXIT_VERIFY,
                    "some instance decoded incorrectly",
                ))
            }
        }
        Command::Lowerbound {
            grid,
            seed,
            trials,
            out,
            tuning,
        } => {
            let cells = lowerbound::parse_grid(&grid)?;
            let rows = lowerbound::run_experiment(
                &cells,
                trials,
                seed,
                &tuning.options(),
                tuning.cap as usize,
            )?;
            let mut csv = format!("{CSV_HEADER}\n");
            for r in &rows {
                csv += &r.csv();
                csv.push('\n');
            }
            emit(&out, &csv)?;
            if rows.iter().all(|r| r.decode_ok) {
                Ok(())
            } else {
                Err(Failure::new(
                    EXIT_VERIFY,
                    "some instance decoded incorrectly",
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pmwe: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
