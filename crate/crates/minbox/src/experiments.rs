//! Empirical checks of the structure and mean values of minimal-surface
//! factorizations.
//!
//! Each experiment either sweeps the solver itself or reads a precomputed
//! [`ProfileTable`] (the `*_from_table` variants), so that several
//! experiments can share one sweep.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use minbox_core::asymptotics::{self, gamma_alpha};
use minbox_core::localized::{
    exceeds_alpha_threshold, has_localized_divisors, localized_count, sandwich_holds, shell_index, DyadicWindow,
};
use minbox_core::solver::check_necessary_condition;
use minbox_core::{SieveTable, Solver};
use serde::{Deserialize, Serialize};

use crate::checkpoint::ChunkLog;
use crate::sweep::{map_chunks, map_chunks_resumable, map_ranges, sweep, Context, ProfileTable};
use crate::{Error, Result};

/// An exact sum or count; integer unless the quantity is a sum of logs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exact {
    Int(u64),
    Real(f64),
}

impl Exact {
    pub fn as_f64(self) -> f64 {
        match self {
            Exact::Int(v) => v as f64,
            Exact::Real(v) => v,
        }
    }
}

/// One line of a comparison table. `predicted` and `ratio` are absent when
/// `x` lies below the domain of the predicting formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub x: u64,
    pub exact: Exact,
    pub predicted: Option<f64>,
    pub ratio: Option<f64>,
}

impl ReportRow {
    pub fn new(x: u64, exact: Exact, predicted: Option<f64>) -> Self {
        let predicted = predicted.filter(|p| *p > 0.0);
        ReportRow { x, exact, predicted, ratio: predicted.map(|p| exact.as_f64() / p) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanKind {
    Census,
    Structure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub n: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: ScanKind,
    pub x: u64,
    pub k: u32,
    pub j: Option<u32>,
    pub checked: u64,
    pub violations: Vec<Violation>,
}

/// Dyadic shell counts `|N_{1,l}(x)|` and any failure of the edge sandwich.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellCensus {
    pub x: u64,
    pub k: u32,
    pub counts: BTreeMap<u32, u64>,
    pub failures: Vec<Violation>,
}

impl ShellCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogMeanRow {
    pub x: u64,
    pub sum_log: f64,
    pub c_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemarkVRow {
    pub x: u64,
    pub reduced_sum: u64,
    pub full_sum: u64,
    pub ratio: f64,
}

fn domain(msg: &'static str) -> Error {
    minbox_core::Error::Domain(msg).into()
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(domain("dimension k must be at least 2"));
    }
    Ok(())
}

fn check_grid(ctx: &Context<'_>, grid: &[u64]) -> Result<()> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("grid must be strictly increasing"));
    }
    for &x in grid {
        ctx.check_bound(x)?;
    }
    Ok(())
}

fn predicted_sum(k: u32, j: u32, x: u64) -> Option<f64> {
    if j == 1 {
        asymptotics::theorem1_envelope(k, x as f64).ok()
    } else {
        asymptotics::main_term(k, j, x as f64).ok()
    }
}

/// Running sums `sum_{n <= x} rho_j(n)` at each grid point.
fn edge_sums(table: &ProfileTable, j: usize, grid: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0u64;
    let mut n = 0u64;
    for &x in grid {
        while n < x {
            n += 1;
            acc += table.edge(n, j);
        }
        out.push(acc);
    }
    out
}

/// `sum_{n <= x} rho_j(n)` against the main term (`j >= 2`) or the
/// constant-free growth envelope (`j = 1`).
pub fn mean_value_table(ctx: &Context<'_>, k: u32, j: u32, grid: &[u64]) -> Result<Vec<ReportRow>> {
    gamma_alpha(k, j)?;
    check_grid(ctx, grid)?;
    let Some(&max) = grid.last() else { return Ok(Vec::new()) };
    let table = sweep(ctx, max, k as usize)?;
    mean_value_from_table(&table, j, grid)
}

pub fn mean_value_from_table(table: &ProfileTable, j: u32, grid: &[u64]) -> Result<Vec<ReportRow>> {
    let k = table.k() as u32;
    gamma_alpha(k, j)?;
    if grid.last().is_some_and(|&x| x > table.x()) || grid.windows(2).any(|w| w[0] >= w[1]) || grid.first() == Some(&0) {
        return Err(domain("grid must be strictly increasing and inside the table"));
    }
    let sums = edge_sums(table, j as usize, grid);
    Ok(grid
        .iter()
        .zip(sums)
        .map(|(&x, s)| ReportRow::new(x, Exact::Int(s), predicted_sum(k, j, x)))
        .collect())
}

fn format_tuple(f: &[u64]) -> String {
    let parts: Vec<String> = f.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusChunk {
    pub checked: u64,
    pub ties: Vec<Violation>,
}

fn census_chunk(sieve: &SieveTable, k: usize, range: RangeInclusive<u64>) -> Result<CensusChunk> {
    let mut solver = Solver::new(k)?;
    let mut buf = vec![0u64; k];
    let mut chunk = CensusChunk { checked: 0, ties: Vec::new() };
    for n in range {
        let (_, ties) = solver.solve_into(n, sieve, &mut buf)?;
        chunk.checked += 1;
        if ties > 1 {
            chunk.ties.push(tie_violation(&mut solver, sieve, n)?);
        }
    }
    Ok(chunk)
}

fn tie_violation(solver: &mut Solver, sieve: &SieveTable, n: u64) -> Result<Violation> {
    let all = solver.optimal_tuples(n, sieve)?;
    let listed: Vec<String> = all.iter().map(|t| format_tuple(t.factors())).collect();
    Ok(Violation { n, detail: format!("ties={} optimal={}", all.len(), listed.join(" ")) })
}

/// Every `n <= x` with more than one optimal tuple.
pub fn uniqueness_census(ctx: &Context<'_>, k: u32, x: u64) -> Result<ScanReport> {
    uniqueness_census_resumable(ctx, k, x, &mut ChunkLog::disabled())
}

pub fn uniqueness_census_resumable(
    ctx: &Context<'_>,
    k: u32,
    x: u64,
    log: &mut ChunkLog<CensusChunk>,
) -> Result<ScanReport> {
    check_k(k)?;
    ctx.check_bound(x)?;
    let parts = map_chunks_resumable(x, ctx.workers, log, |r| census_chunk(ctx.sieve, k as usize, r))?;
    let mut report = ScanReport { kind: ScanKind::Census, x, k, j: None, checked: 0, violations: Vec::new() };
    for p in parts {
        report.checked += p.checked;
        report.violations.extend(p.ties);
    }
    Ok(report)
}

pub fn census_from_table(table: &ProfileTable, sieve: &SieveTable) -> Result<ScanReport> {
    let k = table.k();
    let mut solver = Solver::new(k)?;
    let mut violations = Vec::new();
    for n in 1..=table.x() {
        if table.ties(n) > 1 {
            violations.push(tie_violation(&mut solver, sieve, n)?);
        }
    }
    Ok(ScanReport { kind: ScanKind::Census, x: table.x(), k: k as u32, j: None, checked: table.x(), violations })
}

/// For every `n <= x` with `rho_j(n) > x^{alpha_j}`, checks that
/// `rho_j(n), ..., rho_k(n)` are all prime. Also checks the pairwise
/// condition `rho_i P^-(rho_h) >= rho_h` on every profile. Both are
/// theorems, so any violation is a bug.
pub fn structure_scan(ctx: &Context<'_>, k: u32, j: u32, x: u64) -> Result<ScanReport> {
    gamma_alpha(k, j)?;
    if j < 2 {
        return Err(domain("structure scan needs 2 <= j <= k"));
    }
    ctx.check_bound(x)?;
    let table = sweep(ctx, x, k as usize)?;
    structure_scan_from_table(ctx, &table, j)
}

pub fn structure_scan_from_table(ctx: &Context<'_>, table: &ProfileTable, j: u32) -> Result<ScanReport> {
    let k = table.k() as u32;
    let (gamma, _) = gamma_alpha(k, j)?;
    if j < 2 {
        return Err(domain("structure scan needs 2 <= j <= k"));
    }
    let x = table.x();
    let parts = map_chunks(x, ctx.workers, |range| {
        let mut checked = 0u64;
        let mut bad = Vec::new();
        for n in range {
            let profile = table.profile(n);
            if !check_necessary_condition(&profile.rho, ctx.sieve) {
                bad.push(Violation {
                    n,
                    detail: format!("pairwise condition fails for {}", format_tuple(profile.rho.factors())),
                });
            }
            if !exceeds_alpha_threshold(table.edge(n, j as usize), x, gamma) {
                continue;
            }
            checked += 1;
            for h in j as usize..=k as usize {
                let v = table.edge(n, h);
                if !ctx.sieve.is_prime(v)? {
                    bad.push(Violation {
                        n,
                        detail: format!("rho_{h}={v} composite in {}", format_tuple(profile.rho.factors())),
                    });
                }
            }
        }
        Ok((checked, bad))
    })?;
    let mut report = ScanReport { kind: ScanKind::Structure, x, k, j: Some(j), checked: 0, violations: Vec::new() };
    for (c, v) in parts {
        report.checked += c;
        report.violations.extend(v);
    }
    Ok(report)
}

/// Distribution of `n <= x` over the dyadic shells of `rho_1(n)`, with the
/// bounds `x^{1/k}/2^{l+1} < rho_j(n) <= 2^{(l+1)(k-1)} x^{1/k}` checked for
/// every `j >= 2`.
pub fn shell_census(ctx: &Context<'_>, k: u32, x: u64) -> Result<ShellCensus> {
    check_k(k)?;
    ctx.check_bound(x)?;
    let table = sweep(ctx, x, k as usize)?;
    shell_census_from_table(ctx, &table)
}

pub fn shell_census_from_table(ctx: &Context<'_>, table: &ProfileTable) -> Result<ShellCensus> {
    let k = table.k() as u32;
    let x = table.x();
    let parts = map_chunks(x, ctx.workers, |range| {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        let mut bad = Vec::new();
        for n in range {
            let Some(ell) = shell_index(table.edge(n, 1), x, k) else {
                bad.push(Violation { n, detail: format!("rho_1={} lies in no shell", table.edge(n, 1)) });
                continue;
            };
            *counts.entry(ell).or_default() += 1;
            for j in 2..=k as usize {
                let v = table.edge(n, j);
                if !sandwich_holds(v, ell, x, k) {
                    bad.push(Violation { n, detail: format!("rho_{j}={v} outside the shell-{ell} bounds") });
                }
            }
        }
        Ok((counts, bad))
    })?;
    let mut census = ShellCensus { x, k, counts: BTreeMap::new(), failures: Vec::new() };
    for (counts, bad) in parts {
        for (ell, c) in counts {
            *census.counts.entry(ell).or_default() += c;
        }
        census.failures.extend(bad);
    }
    Ok(census)
}

fn windows(bases: &[f64]) -> Result<Vec<DyadicWindow>> {
    if bases.is_empty() {
        return Err(domain("at least one window base is required"));
    }
    bases.iter().map(|&v| Ok(DyadicWindow::from_base(v)?)).collect()
}

/// `tau_{m+1}(n, v)`: tuples `(d_1, ..., d_m)` with `v_j < d_j <= 2 v_j` and
/// `d_1 ... d_m | n`.
pub fn localized_divisor_count(sieve: &SieveTable, n: u64, bases: &[f64]) -> Result<u64> {
    let w = windows(bases)?;
    let divs = sieve.divisors(n)?;
    Ok(localized_count(n, &divs, &w))
}

/// `H^{(m+1)}(x, v)`: how many `n <= x` have at least one localized tuple.
pub fn h_count(ctx: &Context<'_>, x: u64, bases: &[f64]) -> Result<ReportRow> {
    let w = windows(bases)?;
    ctx.check_bound(x)?;
    let counts = map_chunks(x, ctx.workers, |range| {
        let mut divs = Vec::new();
        let mut c = 0u64;
        for n in range {
            ctx.sieve.divisors_into(n, &mut divs)?;
            if has_localized_divisors(n, &divs, &w) {
                c += 1;
            }
        }
        Ok(c)
    })?;
    let exact = counts.iter().sum();
    let predicted = asymptotics::localized_envelope(w.len() as u32, x as f64).ok();
    Ok(ReportRow::new(x, Exact::Int(exact), predicted))
}

/// Squarefree `n` in `(x/2, x]` having `k - 1` divisors with product
/// dividing `n`, each in `(x^{1/k}/2, x^{1/k}]`.
pub fn witness_count(ctx: &Context<'_>, x: u64, k: u32) -> Result<u64> {
    check_k(k)?;
    ctx.check_bound(x)?;
    let w = vec![DyadicWindow::half_root(x, k); (k - 1) as usize];
    let lo = x / 2 + 1;
    let ranges: Vec<RangeInclusive<u64>> = crate::sweep::chunks(x)
        .into_iter()
        .filter(|r| *r.end() >= lo)
        .map(|r| (*r.start()).max(lo)..=*r.end())
        .collect();
    let counts = map_ranges(&ranges, ctx.workers, |range| {
        let mut divs = Vec::new();
        let mut c = 0u64;
        for n in range {
            if ctx.sieve.mobius(n)? == 0 {
                continue;
            }
            ctx.sieve.divisors_into(n, &mut divs)?;
            if has_localized_divisors(n, &divs, &w) {
                c += 1;
            }
        }
        Ok(c)
    })?;
    Ok(counts.iter().sum())
}

/// `T_j(y) = sum_{p <= y^{1/gamma}} p #{n <= y/p : P^-(n) >= p, Omega(n) = k - j}`
/// against its main term.
pub fn t_sum(ctx: &Context<'_>, k: u32, j: u32, y: u64) -> Result<ReportRow> {
    let (gamma, _) = gamma_alpha(k, j)?;
    if j < 2 {
        return Err(domain("T_j is defined for 2 <= j <= k"));
    }
    ctx.check_bound(y)?;
    let sieve = ctx.sieve;
    let target_omega = gamma - 1;
    let mut exact: u64 = 0;
    for p in 2..=y {
        if !sieve.is_prime(p)? {
            continue;
        }
        if u128::from(p).pow(gamma) > u128::from(y) {
            break;
        }
        let count = if target_omega == 0 {
            1
        } else {
            let mut c = 0u64;
            for n in 2..=y / p {
                if sieve.smallest_prime_factor(n)? >= p && sieve.omega_total(n)? == target_omega {
                    c += 1;
                }
            }
            c
        };
        exact += p * count;
    }
    let predicted = asymptotics::t_main_term(k, j, y as f64).ok();
    Ok(ReportRow::new(y, Exact::Int(exact), predicted))
}

/// `sum_{n <= x} rho_{2,1}(n)` against `x^{3/2} / ((log x)^delta (log log x)^{3/2})`.
pub fn ford_ratio(ctx: &Context<'_>, grid: &[u64]) -> Result<Vec<ReportRow>> {
    mean_value_table(ctx, 2, 1, grid)
}

/// `sum_{n <= x} log rho_{2,1}(n)` and `c_hat = sum / (x log x)`.
pub fn log_mean(ctx: &Context<'_>, grid: &[u64]) -> Result<Vec<LogMeanRow>> {
    check_grid(ctx, grid)?;
    if grid.first().is_some_and(|&x| x < 3) {
        return Err(domain("log mean needs x >= 3"));
    }
    let Some(&max) = grid.last() else { return Ok(Vec::new()) };
    let table = sweep(ctx, max, 2)?;
    log_mean_from_table(ctx.sieve, &table, grid)
}

/// The sum of logs is accumulated as exact prime exponents of the product
/// of the `rho_1(n)`, so it does not depend on summation order.
pub fn log_mean_from_table(sieve: &SieveTable, table: &ProfileTable, grid: &[u64]) -> Result<Vec<LogMeanRow>> {
    if table.k() != 2 {
        return Err(domain("log mean uses the two-dimensional profiles"));
    }
    let mut exponents: BTreeMap<u64, u64> = BTreeMap::new();
    let mut rows = Vec::with_capacity(grid.len());
    let mut n = 0u64;
    for &x in grid {
        if x > table.x() {
            return Err(domain("grid exceeds the table"));
        }
        while n < x {
            n += 1;
            for (p, e) in sieve.factorize(table.edge(n, 1))?.factors {
                *exponents.entry(p).or_default() += u64::from(e);
            }
        }
        let sum_log = exponents.iter().fold(0.0, |acc, (&p, &e)| acc + e as f64 * (p as f64).ln());
        let xf = x as f64;
        rows.push(LogMeanRow { x, sum_log, c_hat: sum_log / (xf * xf.ln()) });
    }
    Ok(rows)
}

/// `sum rho_{k-h, j-h}` against `sum rho_{k, j}`.
pub fn remark_v_table(ctx: &Context<'_>, k: u32, j: u32, h: u32, grid: &[u64]) -> Result<Vec<RemarkVRow>> {
    gamma_alpha(k, j)?;
    if j < 2 || h + 2 > j {
        return Err(domain("needs 2 <= j <= k and 0 <= h <= j - 2"));
    }
    check_grid(ctx, grid)?;
    let Some(&max) = grid.last() else { return Ok(Vec::new()) };
    let full = sweep(ctx, max, k as usize)?;
    let full_sums = edge_sums(&full, j as usize, grid);
    let reduced_sums = if h == 0 {
        full_sums.clone()
    } else {
        let reduced = sweep(ctx, max, (k - h) as usize)?;
        edge_sums(&reduced, (j - h) as usize, grid)
    };
    Ok(grid
        .iter()
        .zip(reduced_sums.into_iter().zip(full_sums))
        .map(|(&x, (r, f))| RemarkVRow { x, reduced_sum: r, full_sum: f, ratio: r as f64 / f as f64 })
        .collect())
}

/// Default evaluation points: `100, 1000, ...` up to `limit`.
pub fn geometric_grid(limit: u64) -> Vec<u64> {
    std::iter::successors(Some(100u64), |&x| x.checked_mul(10)).take_while(|&x| x <= limit).collect()
}
