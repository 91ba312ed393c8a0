use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use csax::container::section_sizes;
use csax::space::{entropy0, entropy_k, SpaceReport};
use csax::{BuildOptions, Error, QueryStats, SelfIndex, Text};

#[derive(Parser)]
#[command(name = "csax", version, about = "Compressed self-index: count, locate and extract over a byte text")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Index a file. Byte 0x00 is reserved and may not occur in it.
    Build {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Suffix array sampling step (default: ceil(log2 n)).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        sample_rate: Option<u64>,
    },
    /// Number of occurrences of a pattern, or of each line of a pattern file.
    Count {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[arg(short, long, conflicts_with = "pattern_file", required_unless_present = "pattern_file")]
        pattern: Option<String>,
        #[arg(long)]
        pattern_file: Option<PathBuf>,
    },
    /// Sorted starting positions of a pattern.
    Locate {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[arg(short, long)]
        pattern: String,
        /// Report at most this many occurrences.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Write text[from..from+len] to stdout.
    Extract {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        len: usize,
    },
    /// Space breakdown, entropy and query counters.
    Stats {
        #[arg(short = 'x', long)]
        index: PathBuf,
        #[arg(short, long)]
        verbose: bool,
        /// Also show the counters of a search for this pattern.
        #[arg(short, long)]
        pattern: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Corrupt(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::CorruptIndex(_) => Failure::Corrupt(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_err(what: &str, path: &std::path::Path, e: io::Error) -> Failure {
    Failure::Io(format!("{what} {}: {e}", path.display()))
}

fn load(path: &std::path::Path) -> Result<(SelfIndex, Vec<u8>), Failure> {
    let bytes = fs::read(path).map_err(|e| io_err("cannot read", path, e))?;
    let idx = SelfIndex::from_bytes(&bytes)?;
    Ok((idx, bytes))
}

fn out_err(e: io::Error) -> Failure {
    Failure::Io(format!("cannot write output: {e}"))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match cmd {
        Cmd::Build { input, output, sample_rate } => {
            let bytes = fs::read(&input).map_err(|e| io_err("cannot read", &input, e))?;
            let text = Text::from_bytes(&bytes)?;
            let opts = BuildOptions { sample_rate: sample_rate.map(|b| b as usize), ..Default::default() };
            let start = Instant::now();
            let (idx, report) = SelfIndex::build_text(&text, &opts)?;
            let enc = idx.to_bytes();
            fs::write(&output, &enc).map_err(|e| io_err("cannot write", &output, e))?;
            writeln!(
                out,
                "indexed {} bytes (sigma {}, d {}) in {:.3}s: {} heavy nodes, {} dictionaries, traversal depth {}, {} bytes written",
                bytes.len(),
                idx.sigma(),
                idx.params().d,
                start.elapsed().as_secs_f64(),
                report.heavy_nodes,
                report.marked_nodes,
                report.max_depth,
                enc.len()
            )
            .map_err(out_err)?;
        }
        Cmd::Count { index, pattern, pattern_file } => {
            let (idx, _) = load(&index)?;
            if let Some(p) = pattern {
                writeln!(out, "{}", idx.count(p.as_bytes())).map_err(out_err)?;
            } else if let Some(f) = pattern_file {
                let data = fs::read(&f).map_err(|e| io_err("cannot read", &f, e))?;
                for line in data.split(|&b| b == b'\n') {
                    let line = line.strip_suffix(b"\r").unwrap_or(line);
                    if line.is_empty() {
                        continue;
                    }
                    out.write_all(line).map_err(out_err)?;
                    writeln!(out, "\t{}", idx.count(line)).map_err(out_err)?;
                }
            }
        }
        Cmd::Locate { index, pattern, limit } => {
            let (idx, _) = load(&index)?;
            let pos = idx.locate_with(pattern.as_bytes(), limit.unwrap_or(usize::MAX), &mut QueryStats::default());
            for p in pos {
                writeln!(out, "{p}").map_err(out_err)?;
            }
        }
        Cmd::Extract { index, from, len } => {
            let (idx, _) = load(&index)?;
            out.write_all(&idx.extract(from, len)?).map_err(out_err)?;
        }
        Cmd::Stats { index, verbose, pattern } => {
            let (idx, bytes) = load(&index)?;
            stats(&mut out, &idx, &bytes, verbose, pattern.as_deref()).map_err(out_err)?;
        }
    }
    out.flush().map_err(out_err)
}

fn stats(out: &mut impl Write, idx: &SelfIndex, bytes: &[u8], verbose: bool, pattern: Option<&str>) -> io::Result<()> {
    let rep = SpaceReport::of(idx);
    let n = rep.n as f64;
    let log_sigma = (rep.sigma.max(2) as f64).log2();
    writeln!(out, "n {} (sentinel included), sigma {}, d {}, sample rate {}", rep.n, rep.sigma, rep.d, rep.sample_rate)?;
    writeln!(out, "{:<16} {:>12} {:>10}", "component", "bits", "bits/sym")?;
    for (name, bits) in rep.sections() {
        writeln!(out, "{name:<16} {bits:>12} {:>10.3}", bits as f64 / n)?;
    }
    writeln!(out, "{:<16} {:>12} {:>10.3}", "total", rep.total_bits(), rep.total_bits() as f64 / n)?;
    writeln!(
        out,
        "payload {:.3} n*log2(sigma), budget {} ({})",
        rep.payload_bits as f64 / (n * log_sigma),
        rep.payload_budget() as u64,
        if rep.payload_within_budget() { "ok" } else { "exceeded" }
    )?;
    writeln!(
        out,
        "dictionaries {:.3} bits/sym, budget {} ({})",
        rep.dictionary_bits() as f64 / n,
        rep.dictionary_budget() as u64,
        if rep.dictionary_within_budget() { "ok" } else { "exceeded" }
    )?;
    writeln!(out, "{} dictionaries holding {} entries", rep.dict_count, rep.dict_entries)?;

    let text = idx.extract_symbols(0, idx.len() - 1).unwrap_or_default();
    write!(out, "entropy H0 {:.4}", entropy0(&text))?;
    for k in 1..=3 {
        write!(out, "  H{k} {:.4}", entropy_k(&text, k))?;
    }
    writeln!(out)?;

    if verbose {
        writeln!(out, "file {} bytes", bytes.len())?;
        if let Ok(sections) = section_sizes(bytes) {
            for (name, len) in sections {
                writeln!(out, "  section {name:<16} {len:>10} bytes")?;
            }
        }
        let digest: String = idx.text_digest().iter().map(|b| format!("{b:02x}")).collect();
        writeln!(out, "text digest {digest}")?;
    }

    if let Some(p) = pattern {
        let s = idx.search_interval(p.as_bytes());
        let c = s.stats;
        writeln!(out, "pattern {:?}: {} occurrences", p, s.count())?;
        writeln!(
            out,
            "  general rank {}, interval rank {}, partial rank {}, access {}, dictionary lookups {}",
            c.general_rank, c.interval_rank, c.partial_rank, c.access, c.dict_lookups
        )?;
        writeln!(
            out,
            "  steps by case: 1 {}, 2 {}, 3a {}, 3b {}, 4 {}, 5 {}",
            c.cases[0], c.cases[1], c.cases[2], c.cases[3], c.cases[4], c.cases[5]
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Io(m) => (2, m),
                Failure::Corrupt(m) => (3, m),
            };
            eprintln!("csax: {msg}");
            ExitCode::from(code)
        }
    }
}
