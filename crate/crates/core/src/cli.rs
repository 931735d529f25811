//! Command-line front end.
//!
//! Ranking files are tab-separated: `vertex rank` for `static`,
//! `vertex timestamp rank` for `fluc` (one row per active pair) and
//! `vertex rank_before rank_after change_timestamp` for `seg`, with `-` when a
//! vertex never changes. Statistics go to `--stats` (or stderr) as
//! `key<TAB>value` lines.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gen_agony::solve;
use crate::metrics::{stats, total_flux, RankingStats, RunMeta};
use crate::reductions::{
    extract_fluc, extract_static, fluc_to_gen, static_to_gen, RankAssignment, RankLookup, RankSegmentation, Segment,
};
use crate::seg_solver::{solve_seg, DEFAULT_MAX_ITERS};
use crate::temporal_graph::{ColumnMode, TemporalGraph, Timestamp};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// One rank per vertex.
    Static,
    /// Ranks per (vertex, timestamp), penalizing change by --lambda.
    Fluc,
    /// At most one rank change per vertex.
    Seg,
    /// Fluc over a grid of lambdas, as CSV.
    Sweep,
    /// Graph statistics, optionally scoring an existing ranking file.
    Stats,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "tagony", version, about = "Rank vertices of temporal directed graphs by minimizing agony")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: CommandKind,

    /// Edge list, one `source target [weight] timestamp` per line.
    #[arg(long, short)]
    pub input: PathBuf,

    /// Where to write the ranking (or CSV for sweep). Defaults to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Where to write the statistics record. Defaults to stderr.
    #[arg(long)]
    pub stats: Option<PathBuf>,

    /// Maximum number of rank levels.
    #[arg(long)]
    pub k: Option<u32>,

    /// Cost per unit of rank change (fluc).
    #[arg(long)]
    pub lambda: Option<u64>,

    /// Comma-separated lambdas for sweep; `a..b` expands to a, a+1, ..., b.
    #[arg(long, value_parser = parse_lambda_grid)]
    pub lambda_grid: Option<LambdaGrid>,

    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,

    #[arg(long, value_enum, default_value_t = Columns::Uvwt)]
    pub columns: Columns,

    /// Integer-divide timestamps by this before use.
    #[arg(long, default_value_t = 1)]
    pub bin: i64,

    /// Omit runtime_ms from the statistics so that output is reproducible.
    #[arg(long)]
    pub no_timing: bool,

    /// Ranking file to score (stats command).
    #[arg(long)]
    pub ranking: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Columns {
    Uvwt,
    Uvt,
}

impl From<Columns> for ColumnMode {
    fn from(c: Columns) -> Self {
        match c {
            Columns::Uvwt => ColumnMode::Uvwt,
            Columns::Uvt => ColumnMode::Uvt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaGrid(pub Vec<u64>);

pub fn parse_lambda_grid(s: &str) -> std::result::Result<LambdaGrid, String> {
    let mut values = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let number = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad lambda {x:?}"));
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                if lo > hi {
                    return Err(format!("empty range {item:?}"));
                }
                values.extend(lo..=hi);
            }
            None => values.push(number(item)?),
        }
    }
    if values.is_empty() {
        return Err("empty lambda grid".into());
    }
    values.sort_unstable();
    values.dedup();
    Ok(LambdaGrid(values))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.k == Some(0) {
            return bad("--k must be at least 1");
        }
        if self.bin < 1 {
            return bad("--bin must be at least 1");
        }
        match self.command {
            CommandKind::Fluc if self.lambda.is_none() => bad("fluc requires --lambda"),
            CommandKind::Sweep if self.lambda_grid.is_none() => bad("sweep requires --lambda-grid"),
            CommandKind::Stats if self.k.is_some() || self.lambda.is_some() => {
                bad("stats takes neither --k nor --lambda")
            }
            _ => Ok(()),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::Parse { .. } | Error::UnknownTimestamp(_) | Error::UnknownVertex(_) => EXIT_PARSE,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

/// Parses `args` (including the program name), runs, and returns the process
/// exit code. Errors are reported on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("tagony: {e}");
            exit_code(&e)
        }
    }
}

fn create(path: &Path) -> Result<Box<dyn Write>> {
    Ok(Box::new(BufWriter::new(File::create(path)?)))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => create(p),
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn stats_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => create(p),
        None => Ok(Box::new(io::stderr().lock())),
    }
}

pub fn load_graph(config: &RunConfig) -> Result<TemporalGraph> {
    let file = File::open(&config.input)?;
    TemporalGraph::parse_edge_list_binned(BufReader::new(file), config.columns.into(), config.bin)
}

pub fn run(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let g = load_graph(config)?;
    match config.command {
        CommandKind::Static => {
            let start = Instant::now();
            let red = static_to_gen(&g, config.k);
            let sol = solve(&red.graph)?;
            let ranks = extract_static(&g, &sol.ranking, &red.nodes);
            let meta = RunMeta {
                iterations: None,
                runtime: start.elapsed(),
            };
            let mut out = output(&config.output)?;
            write_static(&g, &ranks, &mut out)?;
            out.flush()?;
            emit_stats(config, &stats(&g, &ranks, meta))
        }
        CommandKind::Fluc => {
            let start = Instant::now();
            let ranks = fluc(&g, config.lambda.unwrap_or_default(), config.k)?;
            let meta = RunMeta {
                iterations: None,
                runtime: start.elapsed(),
            };
            let mut out = output(&config.output)?;
            write_fluc(&g, &ranks, &mut out)?;
            out.flush()?;
            emit_stats(config, &stats(&g, &ranks, meta))
        }
        CommandKind::Seg => {
            let start = Instant::now();
            let state = solve_seg(&g, config.k, config.max_iters)?;
            let meta = RunMeta {
                iterations: Some(state.iterations),
                runtime: start.elapsed(),
            };
            let mut out = output(&config.output)?;
            write_seg(&g, &state.segmentation, &mut out)?;
            out.flush()?;
            emit_stats(config, &stats(&g, &state.segmentation, meta))
        }
        CommandKind::Sweep => {
            let grid = &config.lambda_grid.as_ref().expect("validated").0;
            let rows = sweep(&g, grid, config.k)?;
            let mut out = output(&config.output)?;
            writeln!(out, "lambda,score,avg_flux")?;
            for row in rows {
                writeln!(out, "{},{},{}", row.lambda, row.score, row.avg_flux)?;
            }
            out.flush()?;
            Ok(())
        }
        CommandKind::Stats => {
            let mut out = stats_output(&config.stats)?;
            write_graph_stats(&g, &mut out)?;
            if let Some(path) = &config.ranking {
                let ranks = read_ranking(&g, BufReader::new(File::open(path)?))?;
                stats(&g, &ranks, RunMeta::default()).write_record(&mut out, false)?;
            }
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_stats(config: &RunConfig, s: &RankingStats) -> Result<()> {
    let mut out = stats_output(&config.stats)?;
    s.write_record(&mut out, !config.no_timing)?;
    out.flush()?;
    Ok(())
}

pub fn fluc(g: &TemporalGraph, lambda: u64, k: Option<u32>) -> Result<RankAssignment> {
    let red = fluc_to_gen(g, lambda, k);
    let sol = solve(&red.graph)?;
    Ok(extract_fluc(g, &sol.ranking, &red.nodes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: u64,
    /// Agony of the ranking alone, without the fluctuation term.
    pub score: u64,
    pub total_flux: u64,
    pub avg_flux: f64,
}

/// Solves fluc for every lambda of the grid, in parallel, in grid order.
pub fn sweep(g: &TemporalGraph, grid: &[u64], k: Option<u32>) -> Result<Vec<SweepRow>> {
    grid.par_iter()
        .map(|&lambda| {
            let ranks = fluc(g, lambda, k)?;
            let s = stats(g, &ranks, RunMeta::default());
            Ok(SweepRow {
                lambda,
                score: s.score,
                total_flux: total_flux(g, &ranks),
                avg_flux: s.avg_flux,
            })
        })
        .collect()
}

pub fn write_static<W: Write>(g: &TemporalGraph, ranks: &RankAssignment, mut out: W) -> io::Result<()> {
    for v in 0..g.vertex_count() {
        let t = g.active_timestamps(v).first().copied().unwrap_or(0);
        writeln!(out, "{}\t{}", g.label(v), ranks.rank(v, t))?;
    }
    Ok(())
}

pub fn write_fluc<W: Write>(g: &TemporalGraph, ranks: &RankAssignment, mut out: W) -> io::Result<()> {
    for (v, t) in g.active_pairs() {
        writeln!(out, "{}\t{}\t{}", g.label(v), t, ranks.rank(v, t))?;
    }
    Ok(())
}

pub fn write_seg<W: Write>(g: &TemporalGraph, seg: &RankSegmentation, mut out: W) -> io::Result<()> {
    for (v, s) in seg.segments().iter().enumerate() {
        match s.change_at {
            Some(t) => writeln!(out, "{}\t{}\t{}\t{}", g.label(v), s.before, s.after, t)?,
            None => writeln!(out, "{}\t{}\t{}\t-", g.label(v), s.before, s.after)?,
        }
    }
    Ok(())
}

pub fn write_graph_stats<W: Write>(g: &TemporalGraph, mut out: W) -> io::Result<()> {
    writeln!(out, "vertices\t{}", g.vertex_count())?;
    writeln!(out, "edges\t{}", g.edge_count())?;
    writeln!(out, "timestamps\t{}", g.timestamps().len())?;
    writeln!(out, "active_pairs\t{}", g.active_pair_count())?;
    Ok(())
}

/// Reads a ranking in any of the three output formats, detected from the
/// column count. Vertices missing from the file get rank 0.
pub fn read_ranking<R: BufRead>(g: &TemporalGraph, reader: R) -> Result<RankAssignment> {
    let mut entries: Vec<Vec<(Timestamp, i64)>> = vec![Vec::new(); g.vertex_count()];
    let mut segments: Option<Vec<Segment>> = None;
    let mut width = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() || fields[0].starts_with('#') {
            continue;
        }
        if *width.get_or_insert(fields.len()) != fields.len() {
            return Err(Error::parse(line_no, "inconsistent column count"));
        }
        let v = g
            .vertex_id(fields[0])
            .ok_or_else(|| Error::UnknownVertex(fields[0].to_string()))?;
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| Error::parse(line_no, format!("expected an integer, found {s:?}")))
        };
        match fields.len() {
            2 => {
                let r = int(fields[1])?;
                entries[v] = g.active_timestamps(v).iter().map(|&t| (t, r)).collect();
            }
            3 => {
                let (t, r) = (int(fields[1])?, int(fields[2])?);
                if g.pair_index(v, t).is_none() {
                    return Err(Error::UnknownTimestamp(t));
                }
                entries[v].retain(|&(s, _)| s != t);
                entries[v].push((t, r));
            }
            4 => {
                let change_at = match fields[3] {
                    "-" => None,
                    s => Some(int(s)?),
                };
                let segs = segments.get_or_insert_with(|| vec![Segment::constant(0); g.vertex_count()]);
                segs[v] = Segment {
                    before: int(fields[1])?,
                    after: int(fields[2])?,
                    change_at,
                };
            }
            n => return Err(Error::parse(line_no, format!("expected 2 to 4 columns, found {n}"))),
        }
    }
    if let Some(segs) = segments {
        return Ok(RankAssignment::from_lookup(g, &RankSegmentation::new(segs)));
    }
    Ok(RankAssignment::from_entries(entries))
}
