use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rconvex::experiment::{self, EngineKind, ExperimentConfig, HullOptions, Suite, VerifyOptions};
use rconvex::{io, Error, Point2, Result, Semantics};

#[derive(Parser)]
#[command(name = "rconvex", version, about = "r-convex hulls of planar samples")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the hull of a point file (one `x y` per line).
    Hull {
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "closed")]
        semantics: Semantics,
        #[arg(long)]
        arcs_svg: Option<PathBuf>,
        #[arg(long)]
        mask_pgm: Option<PathBuf>,
        /// Print the indices of the extreme points.
        #[arg(long)]
        extremes: bool,
        #[arg(long)]
        cell_size: Option<f64>,
        /// Membership query `x,y`; may be repeated.
        #[arg(long, value_parser = parse_point)]
        probe: Vec<Point2>,
    },
    /// Run a replicated rate experiment from a key=value config.
    Simulate { config: PathBuf },
    /// Run the geometric oracle suites; exits 1 on any failure.
    Verify {
        #[arg(default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        sabotage: bool,
    },
    /// Time the hull engines against each other.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "500,2000,10000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long, value_delimiter = ',', default_value = "exact,grid,brute")]
        engines: Vec<EngineKind>,
        #[arg(long, default_value_t = 1000)]
        probes: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> std::result::Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok(Point2::new(f(x)?, f(y)?))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Hull { input, r, semantics, arcs_svg, mask_pgm, extremes, cell_size, probe } => {
            let cloud = io::read_points(&input)?;
            let o = HullOptions { r, semantics, arcs_svg, mask_pgm, cell_size, probes: probe };
            let s = experiment::run_hull(cloud, &o)?;
            println!("{}", s.line());
            if extremes {
                for i in &s.extremes {
                    println!("extreme {i}");
                }
            }
            for (p, inside) in &s.probes {
                println!("probe {} {} {}", p.x, p.y, if *inside { "inside" } else { "outside" });
            }
            Ok(true)
        }
        Cmd::Simulate { config } => {
            let cfg = ExperimentConfig::read(&config)?;
            let out = experiment::simulate(&cfg)?;
            print!("{}", out.results_csv);
            print!("{}", out.fit_csv);
            Ok(true)
        }
        Cmd::Verify { suite, trials, seed, out, sabotage } => {
            let o = VerifyOptions { trials, seed, sabotage, ..Default::default() };
            let rows = experiment::verify(suite, &o)?;
            let csv = io::verify_csv(&rows);
            if let Some(path) = out {
                io::write_file(&path, csv.as_bytes())?;
            }
            print!("{csv}");
            Ok(rows.iter().all(|r| r.passed()))
        }
        Cmd::Bench { n, r, engines, probes, seed, out } => {
            let rows = experiment::bench(&n, r, &engines, probes, seed)?;
            for b in rows.iter().filter(|b| b.skipped) {
                eprintln!("skipping {} at n={} (cap {})", b.engine.name(), b.n, experiment::BRUTE_CAP);
            }
            let csv = experiment::bench_csv(&rows, r);
            if let Some(path) = out {
                io::write_file(&path, csv.as_bytes())?;
            }
            print!("{csv}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = std::env::var("RHULL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.exit_code() as u8
}
