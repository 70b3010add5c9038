//! Parallel k-grid sweeps with per-method caching.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::cache::{Cache, CACHE_DIR_ENV};
use crate::config::SweepConfig;
use crate::error::CliError;
use crate::eval::{evaluate, EvalContext, ResultRow, CSV_HEADER};

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker threads; `0` lets rayon pick.
    pub workers: usize,
    /// Fill `wall_time_ms`. Off by default so the CSV is reproducible;
    /// timed runs always recompute and are not cached.
    pub timing: bool,
    /// Takes precedence over the config and the environment.
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub points: usize,
    pub cached_methods: usize,
    pub computed_methods: usize,
}

pub fn thread_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")
}

fn cache_dir(config: &SweepConfig, opts: &SweepOptions) -> Option<PathBuf> {
    opts.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| config.cache_dir.clone())
}

/// Runs the sweep and returns the full CSV text. Rows come out in grid order
/// (`k_x` slowest), methods in config order within a point.
pub fn run_sweep(config: &SweepConfig, opts: &SweepOptions) -> Result<(String, SweepStats), CliError> {
    let cache = cache_dir(config, opts).map(Cache::open).transpose()?.filter(|_| !opts.timing);
    let key = config.cache_key();
    let grid = config.grid();
    let pool = thread_pool(opts.workers);
    let ctx = EvalContext { lattice: &config.lattice, polarization: &config.polarization, quadrature: &config.quadrature };
    let mut stats = SweepStats { points: grid.len(), ..SweepStats::default() };

    let mut columns = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        if let Some(rows) = cache.as_ref().and_then(|c| c.load(&key, method, grid.len())) {
            stats.cached_methods += 1;
            columns.push(rows);
            continue;
        }
        let rows: Vec<String> = pool.install(|| {
            grid.par_iter()
                .map(|p| {
                    let start = Instant::now();
                    let outcome = evaluate(method, &p.mode, &ctx);
                    let wall_time_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
                    ResultRow { k: p.zone, method, outcome, wall_time_ms }.to_csv()
                })
                .collect()
        });
        if let Some(c) = &cache {
            c.store(&key, method, &rows, &config.canonical())?;
        }
        stats.computed_methods += 1;
        columns.push(rows);
    }

    let mut out = String::with_capacity(64 * grid.len() * columns.len() + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..grid.len() {
        for col in &columns {
            out.push_str(&col[i]);
            out.push('\n');
        }
    }
    Ok((out, stats))
}
