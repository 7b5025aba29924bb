//! Chunked parallel sweeps over `1..=x`.
//!
//! The range is cut into fixed chunks of [`CHUNK_SIZE`] integers. Chunk
//! boundaries never depend on the worker count and results are gathered
//! back in chunk order, so every aggregate is the same for any number of
//! workers.

use std::ops::RangeInclusive;

use minbox_core::{FactorTuple, OptimalProfile, SieveTable, Solver};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkpoint::ChunkLog;
use crate::{Error, Result};

pub const CHUNK_SIZE: u64 = 1 << 16;

/// Sieve plus worker count shared by every experiment.
#[derive(Debug, Clone, Copy)]
pub struct Context<'a> {
    pub sieve: &'a SieveTable,
    pub workers: usize,
}

impl<'a> Context<'a> {
    pub fn new(sieve: &'a SieveTable, workers: usize) -> Self {
        Context { sieve, workers: workers.max(1) }
    }

    pub fn check_bound(&self, x: u64) -> Result<()> {
        if x == 0 || x > self.sieve.limit() {
            return Err(minbox_core::Error::OutOfRange { n: x, limit: self.sieve.limit() }.into());
        }
        Ok(())
    }
}

/// The chunks covering `1..=x`.
pub fn chunks(x: u64) -> Vec<RangeInclusive<u64>> {
    (0..x.div_ceil(CHUNK_SIZE))
        .map(|i| (i * CHUNK_SIZE + 1)..=((i + 1) * CHUNK_SIZE).min(x))
        .collect()
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {workers} workers: {e}")))
}

/// Runs `work` on each of `ranges` with `workers` threads; results come back
/// in the order of `ranges`.
pub fn map_ranges<T, F>(ranges: &[RangeInclusive<u64>], workers: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RangeInclusive<u64>) -> Result<T> + Sync,
{
    if workers <= 1 {
        return ranges.iter().cloned().map(&work).collect();
    }
    pool(workers)?.install(|| ranges.par_iter().cloned().map(&work).collect())
}

/// [`map_ranges`] over the chunks of `1..=x`.
pub fn map_chunks<T, F>(x: u64, workers: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RangeInclusive<u64>) -> Result<T> + Sync,
{
    map_ranges(&chunks(x), workers, work)
}

/// Like [`map_chunks`], but every finished chunk is appended to `log` and
/// chunks already present in `log` are not recomputed.
pub fn map_chunks_resumable<T, F>(x: u64, workers: usize, log: &mut ChunkLog<T>, work: F) -> Result<Vec<T>>
where
    T: Send + Serialize + for<'de> Deserialize<'de>,
    F: Fn(RangeInclusive<u64>) -> Result<T> + Sync,
{
    let all = chunks(x);
    let mut done = log.take_completed();
    let batch = workers.max(1) * 4;
    let mut next = done.len();
    while next < all.len() {
        let end = (next + batch).min(all.len());
        let results = map_ranges(&all[next..end], workers, &work)?;
        for r in results {
            log.append(done.len(), &r)?;
            done.push(r);
        }
        next = end;
    }
    Ok(done)
}

/// Optimal profiles for one block of consecutive `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileChunk {
    pub start: u64,
    /// Row-major, `k` edges per `n`.
    pub rho: Vec<u32>,
    pub surface: Vec<u64>,
    pub ties: Vec<u32>,
}

fn solve_chunk(sieve: &SieveTable, k: usize, range: RangeInclusive<u64>) -> Result<ProfileChunk> {
    let mut solver = Solver::new(k)?;
    let len = (range.end() - range.start() + 1) as usize;
    let mut chunk = ProfileChunk {
        start: *range.start(),
        rho: Vec::with_capacity(len * k),
        surface: Vec::with_capacity(len),
        ties: Vec::with_capacity(len),
    };
    let mut buf = vec![0u64; k];
    for n in range {
        let (s, t) = solver.solve_into(n, sieve, &mut buf)?;
        chunk.rho.extend(buf.iter().map(|&d| d as u32));
        chunk.surface.push(s);
        chunk.ties.push(t);
    }
    Ok(chunk)
}

/// Optimal profiles of every `n <= x` for one dimension, stored compactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileTable {
    k: usize,
    x: u64,
    rho: Vec<u32>,
    surface: Vec<u64>,
    ties: Vec<u32>,
}

impl ProfileTable {
    fn from_chunks(k: usize, x: u64, parts: Vec<ProfileChunk>) -> Self {
        let mut t = ProfileTable {
            k,
            x,
            rho: Vec::with_capacity(x as usize * k),
            surface: Vec::with_capacity(x as usize),
            ties: Vec::with_capacity(x as usize),
        };
        for p in parts {
            debug_assert_eq!(p.start, t.surface.len() as u64 + 1);
            t.rho.extend(p.rho);
            t.surface.extend(p.surface);
            t.ties.extend(p.ties);
        }
        t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// `rho_1(n), ..., rho_k(n)`.
    pub fn rho(&self, n: u64) -> &[u32] {
        let i = (n - 1) as usize * self.k;
        &self.rho[i..i + self.k]
    }

    /// `rho_j(n)` with `1 <= j <= k`.
    pub fn edge(&self, n: u64, j: usize) -> u64 {
        u64::from(self.rho[(n - 1) as usize * self.k + j - 1])
    }

    pub fn surface_num(&self, n: u64) -> u64 {
        self.surface[(n - 1) as usize]
    }

    pub fn ties(&self, n: u64) -> u32 {
        self.ties[(n - 1) as usize]
    }

    pub fn profile(&self, n: u64) -> OptimalProfile {
        let f = self.rho(n).iter().map(|&d| u64::from(d)).collect();
        OptimalProfile {
            rho: FactorTuple::new(f, n).expect("table rows are valid factorizations"),
            tie_count: self.ties(n),
        }
    }
}

/// Solves every `n <= x` for dimension `k`.
pub fn sweep(ctx: &Context<'_>, x: u64, k: usize) -> Result<ProfileTable> {
    ctx.check_bound(x)?;
    Solver::new(k)?;
    let parts = map_chunks(x, ctx.workers, |r| solve_chunk(ctx.sieve, k, r))?;
    Ok(ProfileTable::from_chunks(k, x, parts))
}

/// [`sweep`] with per-chunk checkpointing.
pub fn sweep_resumable(ctx: &Context<'_>, x: u64, k: usize, log: &mut ChunkLog<ProfileChunk>) -> Result<ProfileTable> {
    ctx.check_bound(x)?;
    Solver::new(k)?;
    let parts = map_chunks_resumable(x, ctx.workers, log, |r| solve_chunk(ctx.sieve, k, r))?;
    Ok(ProfileTable::from_chunks(k, x, parts))
}
