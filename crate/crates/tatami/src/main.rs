//! Command-line front end: closed-form counts, exhaustive generation,
//! validation, rendering, and oracle-vs-formula verification.

use std::fmt;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use tatami::counting;
use tatami::features;
use tatami::maxmono;
use tatami::oracle;
use tatami::render::{render, RenderFormat, RenderOptions};
use tatami::Tiling;

#[derive(Parser)]
#[command(
    name = "tatami",
    version,
    about = "Count, generate and render monomer-dimer tatami tilings of square grids"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderCliFormat {
    Ascii,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form count of n x n tilings: with --m the count for that
    /// monomer number, otherwise the whole per-m table
    Count {
        #[arg(long)]
        n: i32,
        #[arg(long)]
        m: Option<i32>,
    },
    /// Closed-form total over all monomer counts
    Total {
        #[arg(long)]
        n: i32,
    },
    /// Tilings whose bidimer/vortex sits at distance (k+1)/2 from the boundary
    Distance {
        #[arg(long)]
        n: i32,
        #[arg(long)]
        k: i32,
    },
    /// Generate every tiling with m < n monomers
    Gen {
        #[arg(long)]
        n: i32,
        #[arg(long)]
        m: i32,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Write one file per tiling into this directory instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the n-monomer tilings
    GenMax {
        #[arg(long)]
        n: i32,
        /// Emit the fixed-corner set in Gray-code order (even n only)
        #[arg(long)]
        gray: bool,
        /// Only the tilings with monomers in both upper corners
        #[arg(long)]
        fixed_corners: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a tiling file and report tatami violations
    Validate { file: PathBuf },
    /// Render a tiling file
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ascii")]
        format: RenderCliFormat,
        #[arg(long, default_value_t = 24)]
        cell_size: u32,
        /// Use pure-ASCII glyphs instead of box drawing
        #[arg(long)]
        ascii_only: bool,
    },
    /// Cross-check oracle counts against the closed forms and the
    /// constructive generators for all n up to --max-n
    Verify {
        #[arg(long)]
        max_n: i32,
    },
    /// Sum of squared parts over all compositions of n
    Compositions {
        #[arg(long)]
        n: i32,
    },
}

/// A condition the arguments asked for but the domain rejects; exits 1,
/// unlike usage errors which clap exits with 2.
struct DomainError(String);

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<E: std::error::Error> From<E> for DomainError {
    fn from(e: E) -> DomainError {
        DomainError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<(), DomainError> {
    if cond {
        Ok(())
    } else {
        Err(DomainError(msg.to_string()))
    }
}

fn run(cmd: Cmd) -> Result<(), DomainError> {
    match cmd {
        Cmd::Count { n, m } => {
            require(n >= 1, "side must be at least 1")?;
            match m {
                Some(m) => {
                    require(m >= 0, "monomer count must be non-negative")?;
                    println!("{}", counting::count_tilings(n, m));
                }
                None => {
                    for m in (0..=n).filter(|m| (n - m) % 2 == 0) {
                        println!("{m} {}", counting::count_tilings(n, m));
                    }
                }
            }
        }
        Cmd::Total { n } => {
            require(n >= 1, "side must be at least 1")?;
            println!("{}", counting::total_tilings(n));
        }
        Cmd::Distance { n, k } => {
            require(n >= 1, "side must be at least 1")?;
            require(1 <= k && k <= n - 1, "k must satisfy 1 <= k <= n-1")?;
            println!("{}", counting::count_at_distance(n, k));
        }
        Cmd::Gen { n, m, format, out } => {
            let stream = features::enumerate_class(n, m)?;
            emit_stream(stream, format, out.as_deref())?;
        }
        Cmd::GenMax { n, gray, fixed_corners, format, out } => {
            if gray {
                let stream = maxmono::gray_generate(n)?.map(|(t, _)| t);
                emit_stream(stream, format, out.as_deref())?;
            } else if fixed_corners {
                emit_stream(maxmono::generate_fixed_corner(n)?, format, out.as_deref())?;
            } else {
                emit_stream(maxmono::generate_all_max(n)?, format, out.as_deref())?;
            }
        }
        Cmd::Validate { file } => {
            let text = fs::read_to_string(&file)?;
            let t = Tiling::decode(&text)?;
            let violations = t.validate_tatami();
            if violations.is_empty() {
                println!("ok: {}x{} tatami tiling, {} monomers", t.n(), t.n(), t.monomer_count());
            } else {
                for v in &violations {
                    println!("four tiles meet at ({}, {})", v.point.0, v.point.1);
                }
                return Err(DomainError(format!("{} tatami violations", violations.len())));
            }
        }
        Cmd::Render { file, format, cell_size, ascii_only } => {
            require(cell_size > 0, "cell size must be positive")?;
            let text = fs::read_to_string(&file)?;
            let t = Tiling::decode(&text)?;
            let opts = RenderOptions {
                format: match format {
                    RenderCliFormat::Ascii => RenderFormat::Ascii,
                    RenderCliFormat::Svg => RenderFormat::Svg,
                },
                cell_size,
                highlight: Vec::new(),
                ascii_only,
            };
            print!("{}", render(&t, &opts));
        }
        Cmd::Verify { max_n } => {
            require(max_n >= 1, "max-n must be at least 1")?;
            require(max_n <= 7, "the brute-force oracle is practical only up to n = 7")?;
            verify(max_n)?;
        }
        Cmd::Compositions { n } => {
            require((1..=25).contains(&n), "supported range is 1 <= n <= 25")?;
            println!("{}", counting::composition_square_sum(n));
        }
    }
    Ok(())
}

fn emit_stream(
    stream: impl Iterator<Item = Tiling>,
    format: OutFormat,
    out_dir: Option<&Path>,
) -> Result<(), DomainError> {
    let opts = |f| RenderOptions { format: f, ..RenderOptions::default() };
    let content = |t: &Tiling| match format {
        OutFormat::Text => t.encode(),
        OutFormat::Ascii => render(t, &opts(RenderFormat::Ascii)),
        OutFormat::Svg => render(t, &opts(RenderFormat::Svg)),
    };
    match out_dir {
        None => {
            let stdout = io::stdout();
            let mut w = io::BufWriter::new(stdout.lock());
            for (i, t) in stream.enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                w.write_all(content(&t).as_bytes())?;
            }
            w.flush()?;
        }
        Some(dir) => {
            let ext = match format {
                OutFormat::Text => "tatami",
                OutFormat::Ascii => "txt",
                OutFormat::Svg => "svg",
            };
            fs::create_dir_all(dir)?;
            for (i, t) in stream.enumerate() {
                let path = dir.join(format!("{i:06}.{ext}"));
                fs::write(path, content(&t))?;
            }
        }
    }
    Ok(())
}

/// Prints one row per (n, m): the oracle count, the closed form, and the
/// constructive generator's count. Any disagreement fails the run.
fn verify(max_n: i32) -> Result<(), DomainError> {
    println!(
        "{:>2} {:>2} {:>12} {:>12} {:>12}  status",
        "n", "m", "oracle", "formula", "generated"
    );
    let mut bad = 0;
    for n in 1..=max_n {
        let by_m = oracle::count_by_monomers(n);
        for m in (0..=n).filter(|m| (n - m) % 2 == 0) {
            let oracle_count = BigUint::from(by_m.get(&(m as usize)).copied().unwrap_or(0));
            let formula = counting::count_tilings(n, m);
            let constructive = BigUint::from(if m < n {
                features::enumerate_class(n, m)?.count() as u64
            } else if n >= 2 {
                maxmono::generate_all_max(n)?.count() as u64
            } else {
                // a bare monomer; the generators start at n = 2
                1
            });
            let ok = oracle_count == formula && formula == constructive;
            if !ok {
                bad += 1;
            }
            println!(
                "{n:>2} {m:>2} {oracle_count:>12} {formula:>12} {constructive:>12}  {}",
                if ok { "ok" } else { "MISMATCH" }
            );
        }
    }
    require(bad == 0, "verification found mismatching counts")?;
    Ok(())
}
