//! Arrival-sequence sources: seeded i.i.d. generators, the adversarial
//! constructors behind the competitive lower bounds, and trace-file
//! ingestion.
//!
//! Reproducibility: every generator takes an explicit 64-bit seed and draws
//! from a ChaCha8 stream; Poisson and empirical sampling use plain CDF
//! inversion on one uniform draw per slot, so traces are identical across
//! platforms for the same seed.

use crate::cost::{
    score, ArrivalTrace, CompetitiveRatio, Cost, CostParams, Schedule,
};
use crate::policy::{run_policy, PolicySpec};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::fs;
use std::io;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArrivalsError {
    #[error("probability {0} outside [0, 1]")]
    BadProbability(String),
    #[error("rate must be non-negative and finite, got {0}")]
    BadRate(f64),
    #[error("empirical distribution must have mass summing to 1 (got {0})")]
    BadMass(String),
    #[error("slot duration must be positive, got {0}")]
    BadSlotDuration(f64),
    #[error("column {0:?} not found in trace file")]
    MissingColumn(String),
    #[error("no parseable events in trace file")]
    NoEvents,
    #[error("duplicate timestamps: cannot auto-tune to one request per slot")]
    DuplicateTimestamps,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Moments of the per-slot arrival distribution used by the stochastic
/// bounds: `nu = E[X]`, `mu = E[min(X, kappa)]`, `p0 = P(X = 0)`.
///
/// Values are exact rationals. Bernoulli and empirical distributions
/// populate them analytically; Poisson tail masses are quantized to 2^-40
/// (documented, well below every tolerance the float bounds use).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalStats {
    pub nu: Cost,
    pub mu: Cost,
    pub p0: Cost,
}

impl ArrivalStats {
    pub fn new(nu: Cost, mu: Cost, p0: Cost) -> Result<Self, ArrivalsError> {
        let zero = Cost::zero();
        let one = Cost::from_integer(1);
        if p0 < zero || p0 > one {
            return Err(ArrivalsError::BadProbability(format!("{p0}")));
        }
        if mu < zero || mu > nu {
            return Err(ArrivalsError::BadMass(format!("mu={mu} nu={nu}")));
        }
        Ok(Self { nu, mu, p0 })
    }

    pub fn nu_f64(&self) -> f64 {
        self.nu.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mu_f64(&self) -> f64 {
        self.mu.to_f64().unwrap_or(f64::NAN)
    }

    pub fn p0_f64(&self) -> f64 {
        self.p0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Per-slot i.i.d. request count distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum IidDistribution {
    /// One request with probability `p`, none otherwise.
    Bernoulli { p: Cost },
    /// Poisson with the given mean.
    Poisson { rate: f64 },
    /// Arbitrary finite table of `(count, probability)` entries.
    Empirical { table: Vec<(u64, Cost)> },
}

const POISSON_TAIL: f64 = 1e-12;
/// Quantization denominator for Poisson stats (dyadic, so sums stay exact).
const POISSON_QUANTUM: i128 = 1 << 40;

impl IidDistribution {
    pub fn bernoulli(p: Cost) -> Result<Self, ArrivalsError> {
        if p < Cost::zero() || p > Cost::from_integer(1) {
            return Err(ArrivalsError::BadProbability(format!("{p}")));
        }
        Ok(Self::Bernoulli { p })
    }

    pub fn poisson(rate: f64) -> Result<Self, ArrivalsError> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(ArrivalsError::BadRate(rate));
        }
        Ok(Self::Poisson { rate })
    }

    pub fn empirical(table: Vec<(u64, Cost)>) -> Result<Self, ArrivalsError> {
        let mass: Cost = table.iter().map(|(_, p)| *p).sum();
        let tolerance = Ratio::new(1, 1_000_000_000i128);
        if (mass - Cost::from_integer(1)).abs() > tolerance
            || table.iter().any(|(_, p)| p < &Cost::zero())
        {
            return Err(ArrivalsError::BadMass(format!("{mass}")));
        }
        Ok(Self::Empirical { table })
    }

    /// Exact (Bernoulli, empirical) or 2^-40-quantized (Poisson) moments.
    pub fn stats(&self, kappa: u32) -> ArrivalStats {
        match self {
            IidDistribution::Bernoulli { p } => ArrivalStats {
                nu: *p,
                // kappa >= 1, so min(X, kappa) = X for a 0/1 variable.
                mu: *p,
                p0: Cost::from_integer(1) - *p,
            },
            IidDistribution::Empirical { table } => {
                let mut nu = Cost::zero();
                let mut mu = Cost::zero();
                let mut p0 = Cost::zero();
                for (x, p) in table {
                    nu += Cost::from_integer(*x as i128) * *p;
                    mu += Cost::from_integer((*x).min(kappa as u64) as i128) * *p;
                    if *x == 0 {
                        p0 += *p;
                    }
                }
                ArrivalStats { nu, mu, p0 }
            }
            IidDistribution::Poisson { rate } => {
                let quantize = |p: f64| {
                    Ratio::new((p * POISSON_QUANTUM as f64).round() as i128, POISSON_QUANTUM)
                };
                let mut nu = Cost::zero();
                let mut mu = Cost::zero();
                let mut p0 = Cost::zero();
                let mut pmf = (-rate).exp();
                let mut cdf = 0.0;
                let mut x: u64 = 0;
                while cdf < 1.0 - POISSON_TAIL && x < 100_000 {
                    let q = quantize(pmf);
                    nu += Cost::from_integer(x as i128) * q;
                    mu += Cost::from_integer(x.min(kappa as u64) as i128) * q;
                    if x == 0 {
                        p0 = q;
                    }
                    cdf += pmf;
                    x += 1;
                    pmf *= rate / x as f64;
                }
                ArrivalStats { nu, mu, p0 }
            }
        }
    }

    /// One draw by CDF inversion on a single uniform variate.
    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            IidDistribution::Bernoulli { p } => {
                let u: f64 = rng.gen();
                u64::from(u < p.to_f64().unwrap_or(0.0))
            }
            IidDistribution::Poisson { rate } => {
                let u: f64 = rng.gen();
                let mut pmf = (-rate).exp();
                let mut cdf = pmf;
                let mut x: u64 = 0;
                while u >= cdf && cdf < 1.0 - POISSON_TAIL && x < 100_000 {
                    x += 1;
                    pmf *= rate / x as f64;
                    cdf += pmf;
                }
                x
            }
            IidDistribution::Empirical { table } => {
                let u: f64 = rng.gen();
                let mut cdf = 0.0;
                for (x, p) in table {
                    cdf += p.to_f64().unwrap_or(0.0);
                    if u < cdf {
                        return *x;
                    }
                }
                table.last().map(|(x, _)| *x).unwrap_or(0)
            }
        }
    }
}

impl fmt::Display for IidDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IidDistribution::Bernoulli { p } => {
                write!(f, "bernoulli:{}", p.to_f64().unwrap_or(f64::NAN))
            }
            IidDistribution::Poisson { rate } => write!(f, "poisson:{rate}"),
            IidDistribution::Empirical { table } => {
                write!(f, "empirical:")?;
                for (i, (x, p)) in table.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}:{}", p.to_f64().unwrap_or(f64::NAN))?;
                }
                Ok(())
            }
        }
    }
}

/// Draw `horizon` i.i.d. per-slot counts. Deterministic given the seed.
pub fn gen_iid(dist: &IidDistribution, horizon: usize, seed: u64) -> ArrivalTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = (0..horizon).map(|_| dist.sample(&mut rng)).collect();
    ArrivalTrace::new(counts)
}

/// Bursty (non-i.i.d.) counts: alternating on/off phases with geometric
/// dwell times; on-phases carry uniform counts in `[1, max_count]`. Used to
/// stress the policies outside the i.i.d. regime.
pub fn gen_bursty(max_count: u64, horizon: usize, seed: u64) -> ArrivalTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_count = max_count.max(1);
    let mut counts = Vec::with_capacity(horizon);
    let mut on = rng.gen::<bool>();
    let mut remaining = 0usize;
    while counts.len() < horizon {
        if remaining == 0 {
            on = !on;
            // Geometric with mean 8.
            remaining = 1;
            while remaining < 64 && rng.gen::<f64>() > 0.125 {
                remaining += 1;
            }
        }
        counts.push(if on { rng.gen_range(1..=max_count) } else { 0 });
        remaining -= 1;
    }
    ArrivalTrace::new(counts)
}

/// Outcome of probing one deterministic policy with the two-phase
/// lower-bound construction.
#[derive(Debug, Clone)]
pub struct AdversaryReport {
    pub policy: PolicySpec,
    pub trace: ArrivalTrace,
    pub schedule: Schedule,
    /// Total cost the probed policy pays on the constructed sequence.
    pub policy_cost: Cost,
    /// Cost of the alternative policy from the lower-bound argument.
    pub alt_cost: Cost,
    pub ratio: CompetitiveRatio,
    /// Probe observation: first fetch slot (uncached start) or first
    /// eviction slot (cached start), when one occurred within the cap.
    pub reaction_slot: Option<usize>,
    /// The policy never reacted within the horizon cap; the ratio then
    /// reflects the capped sequence.
    pub non_reactive: bool,
}

/// Probe a deterministic policy and emit the arrival sequence the
/// lower-bound proof pairs with it.
///
/// A policy that starts uncached is fed `kappa` requests per slot until its
/// first fetch at `t_fetch`, then silence until it evicts (or the cap);
/// the alternative policy caches slots `1..=t_fetch` and pays
/// `c * t_fetch + M`. A policy that starts cached is fed silence until its
/// first eviction, then one slot of `kappa` requests; the alternative
/// fetches just in time and pays `M + c`.
///
/// A policy that never reacts within `horizon_cap` is flagged: an uncached
/// non-reactor is scored against the cache-everything alternative on the
/// capped all-`kappa` sequence (the ratio approaches `kappa / c` as the cap
/// grows); a cached non-reactor has paid rent on an all-zero sequence whose
/// optimal cost is zero, so its ratio is flagged infinite.
pub fn adversary_probe(
    policy: PolicySpec,
    params: &CostParams,
    horizon_cap: usize,
) -> AdversaryReport {
    let cap = horizon_cap.max(2);
    let kappa = params.kappa() as u64;
    let mut probe = policy.build(params);
    let m = params.fetch_cost();
    let c = params.rent_cost();

    let mut counts: Vec<u64> = Vec::new();
    let mut reaction_slot = None;
    let mut non_reactive = false;
    let alt_cost;

    if !probe.starts_cached() {
        // Phase 1: kappa per slot until the first fetch, leaving room for
        // at least one silent slot afterwards.
        for t in 1..cap {
            counts.push(kappa);
            if probe.decide(t, kappa) {
                reaction_slot = Some(t);
                break;
            }
        }
        match reaction_slot {
            Some(t_fetch) => {
                // Phase 2: silence until the eviction (or the cap).
                let mut t = t_fetch;
                while probe.is_cached() && t < cap {
                    t += 1;
                    counts.push(0);
                    probe.decide(t, 0);
                }
                alt_cost = c * Cost::from_integer(t_fetch as i128) + m;
            }
            None => {
                counts = vec![kappa; cap];
                non_reactive = true;
                alt_cost = c * Cost::from_integer(cap as i128) + m;
            }
        }
    } else {
        // Cached start: silence until the first eviction, then one burst.
        for t in 1..cap {
            counts.push(0);
            if !probe.decide(t, 0) {
                reaction_slot = Some(t);
                break;
            }
        }
        match reaction_slot {
            Some(_) => {
                counts.push(kappa);
                let t = counts.len();
                probe.decide(t, kappa);
                alt_cost = m + c;
            }
            None => {
                counts = vec![0; cap];
                non_reactive = true;
                // The honest benchmark on an all-zero sequence never caches
                // and pays nothing.
                alt_cost = Cost::zero();
            }
        }
    }

    let trace = ArrivalTrace::new(counts);
    let mut fresh = policy.build(params);
    let schedule = run_policy(fresh.as_mut(), &trace);
    let ledger = score(&trace, &schedule, params, fresh.starts_cached())
        .expect("policy schedule matches its trace");
    let ratio = crate::cost::competitive_ratio(ledger.total, alt_cost);

    AdversaryReport {
        policy,
        trace,
        schedule,
        policy_cost: ledger.total,
        alt_cost,
        ratio,
        reaction_slot,
        non_reactive,
    }
}

/// Which lower-bound construction a TTL attack instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtlAttackKind {
    /// One request, then silence; benchmark forwards it for cost 1.
    SingleRequest,
    /// `kappa` requests, then silence; benchmark fetches just in time for
    /// cost `M + c`.
    Burst,
    /// `u` bursts of `kappa` requests spaced `L + 1` slots apart; benchmark
    /// caches from the first through the last burst.
    Periodic { repetitions: u32 },
}

/// One adversarial arrival sequence against the TTL policy, together with
/// the benchmark cost from the lower-bound argument.
#[derive(Debug, Clone)]
pub struct TtlAttack {
    pub kind: TtlAttackKind,
    pub trace: ArrivalTrace,
    pub comparison_cost: Cost,
}

/// The three lower-bound constructions against TTL with timer value `ttl`.
/// Traces extend `ttl + 1` slots past the last request so the full timer
/// retention accrues.
pub fn adversary_ttl(params: &CostParams, ttl: u32, repetitions: u32) -> Vec<TtlAttack> {
    let kappa = params.kappa() as u64;
    let m = params.fetch_cost();
    let c = params.rent_cost();
    let l = ttl as usize;
    let u = repetitions.max(1);

    let tail = l + 1;
    let single = {
        let mut counts = vec![0u64; 1 + tail];
        counts[0] = 1;
        TtlAttack {
            kind: TtlAttackKind::SingleRequest,
            trace: ArrivalTrace::new(counts),
            comparison_cost: Cost::from_integer(1),
        }
    };
    let burst = {
        let mut counts = vec![0u64; 1 + tail];
        counts[0] = kappa;
        TtlAttack {
            kind: TtlAttackKind::Burst,
            trace: ArrivalTrace::new(counts),
            comparison_cost: m + c,
        }
    };
    let periodic = {
        let last_burst = (u as usize - 1) * (l + 1) + 1;
        let mut counts = vec![0u64; last_burst + tail];
        for i in 0..u as usize {
            counts[i * (l + 1)] = kappa;
        }
        // Benchmark: fetch before slot 1, cache through the last burst.
        let rented_slots = (u as i128 - 1) * (l as i128 + 1) + 1;
        TtlAttack {
            kind: TtlAttackKind::Periodic { repetitions: u },
            trace: ArrivalTrace::new(counts),
            comparison_cost: m + Cost::from_integer(rented_slots) * c,
        }
    };
    vec![single, burst, periodic]
}

/// Column selector for delimited trace files: zero-based index or header
/// name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSel {
    Index(usize),
    Name(String),
}

impl ColumnSel {
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => ColumnSel::Index(i),
            Err(_) => ColumnSel::Name(s.to_string()),
        }
    }
}

/// Configuration for binning a request-event file into per-slot counts.
///
/// The file is UTF-8 delimited text, one event per row; rows whose
/// timestamp column fails to parse are skipped and counted. When `filter`
/// is set, only rows whose `filter_column` (any column, if unset) equals
/// the filter string exactly are kept.
#[derive(Debug, Clone)]
pub struct TraceIngestConfig {
    pub path: PathBuf,
    pub timestamp_column: ColumnSel,
    /// Time units per slot. Must be positive.
    pub slot_duration: f64,
    pub filter: Option<String>,
    pub filter_column: Option<ColumnSel>,
}

/// Result of an ingestion run: the binned trace plus parse accounting. The
/// binned counts always sum to `events`.
#[derive(Debug, Clone)]
pub struct IngestReport {
    pub trace: ArrivalTrace,
    pub events: u64,
    pub skipped: u64,
    pub slot_duration: f64,
}

fn split_row(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn read_timestamps(cfg: &TraceIngestConfig) -> Result<(Vec<f64>, u64), ArrivalsError> {
    let content = fs::read_to_string(&cfg.path)?;
    let mut timestamps = Vec::new();
    let mut skipped = 0u64;
    let mut ts_index: Option<usize> = match &cfg.timestamp_column {
        ColumnSel::Index(i) => Some(*i),
        ColumnSel::Name(_) => None,
    };
    let mut filter_index: Option<usize> = match &cfg.filter_column {
        Some(ColumnSel::Index(i)) => Some(*i),
        _ => None,
    };

    let mut header_checked = false;
    for line in content.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_row(line);
        if !header_checked {
            // The first content row resolves name-based selectors; it is
            // otherwise treated as an ordinary (likely unparseable) row.
            header_checked = true;
            if let ColumnSel::Name(name) = &cfg.timestamp_column {
                match fields.iter().position(|f| f == name) {
                    Some(i) => {
                        ts_index = Some(i);
                        if let Some(ColumnSel::Name(fname)) = &cfg.filter_column {
                            filter_index = fields.iter().position(|f| f == fname);
                            if filter_index.is_none() {
                                return Err(ArrivalsError::MissingColumn(fname.clone()));
                            }
                        }
                        continue;
                    }
                    None => return Err(ArrivalsError::MissingColumn(name.clone())),
                }
            }
            if let Some(ColumnSel::Name(fname)) = &cfg.filter_column {
                filter_index = fields.iter().position(|f| f == fname);
                if filter_index.is_some() {
                    continue;
                }
                return Err(ArrivalsError::MissingColumn(fname.clone()));
            }
        }
        let Some(ts_i) = ts_index else {
            skipped += 1;
            continue;
        };
        if let Some(filter) = &cfg.filter {
            let keep = match filter_index {
                Some(fi) => fields.get(fi).is_some_and(|f| f == filter),
                None => fields.iter().any(|f| f == filter),
            };
            if !keep {
                continue;
            }
        }
        match fields.get(ts_i).and_then(|f| f.parse::<f64>().ok()) {
            Some(ts) if ts.is_finite() => timestamps.push(ts),
            _ => skipped += 1,
        }
    }
    Ok((timestamps, skipped))
}

/// Bin event timestamps into slots of `slot_duration`: slot `k` covers
/// `[k * d, (k + 1) * d)` and the trace spans the slots of the earliest
/// through the latest event. Deterministic; an empty file yields an empty
/// trace.
pub fn ingest_trace(cfg: &TraceIngestConfig) -> Result<IngestReport, ArrivalsError> {
    if cfg.slot_duration <= 0.0 || !cfg.slot_duration.is_finite() {
        return Err(ArrivalsError::BadSlotDuration(cfg.slot_duration));
    }
    let (timestamps, skipped) = read_timestamps(cfg)?;
    if timestamps.is_empty() {
        return Ok(IngestReport {
            trace: ArrivalTrace::new(vec![]),
            events: 0,
            skipped,
            slot_duration: cfg.slot_duration,
        });
    }
    let slot_of = |ts: f64| (ts / cfg.slot_duration).floor() as i64;
    let first = timestamps.iter().copied().map(slot_of).min().unwrap();
    let last = timestamps.iter().copied().map(slot_of).max().unwrap();
    let mut counts = vec![0u64; (last - first + 1) as usize];
    for ts in &timestamps {
        counts[(slot_of(*ts) - first) as usize] += 1;
    }
    Ok(IngestReport {
        trace: ArrivalTrace::new(counts),
        events: timestamps.len() as u64,
        skipped,
        slot_duration: cfg.slot_duration,
    })
}

/// Largest slot duration that guarantees at most one request per slot: the
/// minimum gap between distinct sorted timestamps. Two events separated by
/// at least the returned duration can never share a floor-division bin.
pub fn auto_tune_slot_duration(cfg: &TraceIngestConfig) -> Result<f64, ArrivalsError> {
    let (mut timestamps, _) = read_timestamps(cfg)?;
    if timestamps.is_empty() {
        return Err(ArrivalsError::NoEvents);
    }
    timestamps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut min_gap = f64::INFINITY;
    for pair in timestamps.windows(2) {
        let gap = pair[1] - pair[0];
        if gap <= 0.0 {
            return Err(ArrivalsError::DuplicateTimestamps);
        }
        min_gap = min_gap.min(gap);
    }
    if !min_gap.is_finite() {
        // Single event: any duration works.
        min_gap = 1.0;
    }
    Ok(min_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::cost;
    use std::io::Write;

    fn params(m: (i128, i128), c: (i128, i128), kappa: u32) -> CostParams {
        CostParams::new(cost(m.0, m.1), cost(c.0, c.1), kappa).unwrap()
    }

    #[test]
    fn bernoulli_degenerate_traces() {
        let zero = IidDistribution::bernoulli(cost(0, 1)).unwrap();
        assert!(gen_iid(&zero, 50, 7).counts().iter().all(|&x| x == 0));
        let one = IidDistribution::bernoulli(cost(1, 1)).unwrap();
        assert!(gen_iid(&one, 50, 7).counts().iter().all(|&x| x == 1));
    }

    #[test]
    fn bernoulli_sample_mean_is_clt_consistent() {
        let dist = IidDistribution::bernoulli(cost(2, 5)).unwrap();
        let horizon = 1_000_000;
        let trace = gen_iid(&dist, horizon, 42);
        let mean = trace.total_requests() as f64 / horizon as f64;
        let tol = 3.0 * (0.4 * 0.6 / horizon as f64).sqrt();
        assert!((mean - 0.4).abs() < tol, "mean {mean} off by more than 3 sigma");
    }

    #[test]
    fn gen_iid_is_reproducible() {
        let dist = IidDistribution::poisson(3.0).unwrap();
        assert_eq!(gen_iid(&dist, 200, 9).counts(), gen_iid(&dist, 200, 9).counts());
        assert_ne!(gen_iid(&dist, 200, 9).counts(), gen_iid(&dist, 200, 10).counts());
    }

    #[test]
    fn poisson_sample_mean_tracks_rate() {
        let dist = IidDistribution::poisson(3.0).unwrap();
        let horizon = 200_000;
        let trace = gen_iid(&dist, horizon, 1);
        let mean = trace.total_requests() as f64 / horizon as f64;
        assert!((mean - 3.0).abs() < 3.0 * (3.0f64 / horizon as f64).sqrt());
    }

    #[test]
    fn stats_bernoulli_exact() {
        let dist = IidDistribution::bernoulli(cost(1, 4)).unwrap();
        let stats = dist.stats(1);
        assert_eq!(stats.nu, cost(1, 4));
        assert_eq!(stats.mu, cost(1, 4));
        assert_eq!(stats.p0, cost(3, 4));
    }

    #[test]
    fn stats_constructor_validates() {
        assert!(ArrivalStats::new(cost(1, 2), cost(1, 4), cost(1, 2)).is_ok());
        // mu > nu is inconsistent.
        assert!(ArrivalStats::new(cost(1, 4), cost(1, 2), cost(1, 2)).is_err());
        // p0 outside [0, 1].
        assert!(ArrivalStats::new(cost(1, 2), cost(1, 4), cost(3, 2)).is_err());
    }

    #[test]
    fn stats_empirical_caps_at_kappa() {
        let dist = IidDistribution::empirical(vec![
            (0, cost(1, 2)),
            (1, cost(1, 4)),
            (5, cost(1, 4)),
        ])
        .unwrap();
        let stats = dist.stats(2);
        assert_eq!(stats.nu, cost(3, 2));
        assert_eq!(stats.mu, cost(3, 4));
        assert_eq!(stats.p0, cost(1, 2));
    }

    #[test]
    fn stats_poisson_close_to_analytic() {
        let dist = IidDistribution::poisson(3.0).unwrap();
        let stats = dist.stats(10);
        assert!((stats.nu_f64() - 3.0).abs() < 1e-6);
        assert!((stats.p0_f64() - (-3.0f64).exp()).abs() < 1e-9);
        assert!(stats.mu <= stats.nu);
    }

    #[test]
    fn adversary_against_rr_matches_walkthrough() {
        // kappa=1, c=1/2, M=2: RR first fetches at t=4 on all-ones input
        // (4 >= 4/2 + 2), rents through slot 8 before the drought pays for
        // an eviction. Policy cost 8, alternative 4, ratio 2 >= 7/5.
        let p = params((2, 1), (1, 2), 1);
        let report = adversary_probe(PolicySpec::Rr, &p, 100);
        assert_eq!(report.reaction_slot, Some(4));
        assert_eq!(report.trace.counts()[..4], [1, 1, 1, 1]);
        assert!(report.trace.counts()[4..].iter().all(|&x| x == 0));
        assert_eq!(report.trace.horizon(), 8);
        assert_eq!(report.policy_cost, cost(8, 1));
        assert_eq!(report.alt_cost, cost(4, 1));
        assert_eq!(report.ratio, CompetitiveRatio::Finite(cost(2, 1)));
        assert!(!report.non_reactive);
        // The universal lower bound at these parameters is 7/5.
        assert!(report.ratio.at_least(cost(7, 5)));
    }

    #[test]
    fn adversary_against_never_cache_is_flagged() {
        let p = params((2, 1), (1, 2), 1);
        let cap = 10_000;
        let report = adversary_probe(PolicySpec::Never, &p, cap);
        assert!(report.non_reactive);
        assert_eq!(report.trace.horizon(), cap);
        assert_eq!(report.policy_cost, Cost::from_integer(cap as i128));
        assert_eq!(
            report.alt_cost,
            cost(1, 2) * Cost::from_integer(cap as i128) + cost(2, 1)
        );
        // kappa * cap / (c * cap + M) approaches kappa / c = 2 from below.
        let ratio = report.ratio.as_f64();
        assert!(ratio > 1.99 && ratio < 2.0);
    }

    #[test]
    fn adversary_against_always_cache() {
        let p = params((2, 1), (1, 2), 1);
        let report = adversary_probe(PolicySpec::Always, &p, 10_000);
        // always never evicts: flagged, all-zero sequence, infinite ratio.
        assert!(report.non_reactive);
        assert!(report.trace.counts().iter().all(|&x| x == 0));
        assert_eq!(report.ratio, CompetitiveRatio::Infinite);
        assert!(report.ratio.at_least(cost(7, 5)));
    }

    #[test]
    fn adversary_against_ttl_is_exact() {
        let p = params((2, 1), (1, 2), 1);
        let report = adversary_probe(PolicySpec::Ttl { ttl: 2 }, &p, 100);
        // TTL fetches at the end of slot 1, holds for L+1 = 3 silent slots.
        assert_eq!(report.reaction_slot, Some(1));
        assert_eq!(report.policy_cost, cost(1, 1) + cost(2, 1) + cost(3, 2));
        assert_eq!(report.alt_cost, cost(5, 2));
        assert!(report.ratio.at_least(cost(7, 5)));
    }

    #[test]
    fn ttl_attacks_have_documented_costs() {
        let p = params((2, 1), (1, 2), 1);
        let attacks = adversary_ttl(&p, 2, 3);
        assert_eq!(attacks.len(), 3);
        assert_eq!(attacks[0].comparison_cost, cost(1, 1));
        assert_eq!(attacks[1].comparison_cost, cost(5, 2));
        // u=3, L=2: benchmark rents (u-1)(L+1)+1 = 7 slots.
        assert_eq!(attacks[2].comparison_cost, cost(2, 1) + cost(7, 2));
        // Periodic trace: bursts at slots 1, 4, 7 with period L+1.
        let counts = attacks[2].trace.counts();
        assert_eq!(counts[0], 1);
        assert_eq!(counts[3], 1);
        assert_eq!(counts[6], 1);
        assert_eq!(counts.iter().filter(|&&x| x > 0).count(), 3);
        // u=1 periodic degenerates to the burst construction.
        let one = adversary_ttl(&p, 2, 1);
        assert_eq!(one[2].trace, one[1].trace);
        assert_eq!(one[2].comparison_cost, one[1].comparison_cost);
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn ingest_bins_by_floor_division() {
        let f = write_temp("0.1\n0.2\n5.0\n");
        let cfg = TraceIngestConfig {
            path: f.path().to_path_buf(),
            timestamp_column: ColumnSel::Index(0),
            slot_duration: 1.0,
            filter: None,
            filter_column: None,
        };
        let report = ingest_trace(&cfg).unwrap();
        assert_eq!(report.trace.counts(), &[2, 0, 0, 0, 0, 1]);
        assert_eq!(report.events, 3);
        assert_eq!(report.skipped, 0);
        assert_eq!(report.trace.total_requests(), report.events);
    }

    #[test]
    fn ingest_empty_file_gives_empty_trace() {
        let f = write_temp("");
        let cfg = TraceIngestConfig {
            path: f.path().to_path_buf(),
            timestamp_column: ColumnSel::Index(0),
            slot_duration: 1.0,
            filter: None,
            filter_column: None,
        };
        let report = ingest_trace(&cfg).unwrap();
        assert!(report.trace.is_empty());
        assert_eq!(report.events, 0);
    }

    #[test]
    fn ingest_skips_bad_rows_and_filters() {
        let f = write_temp("time,job\n0.5,job0\nnot-a-number,job0\n1.5,job1\n2.5,job0\n");
        let cfg = TraceIngestConfig {
            path: f.path().to_path_buf(),
            timestamp_column: ColumnSel::Name("time".into()),
            slot_duration: 1.0,
            filter: Some("job0".into()),
            filter_column: Some(ColumnSel::Name("job".into())),
        };
        let report = ingest_trace(&cfg).unwrap();
        assert_eq!(report.events, 2);
        assert_eq!(report.skipped, 1);
        assert_eq!(report.trace.counts(), &[1, 0, 1]);
    }

    #[test]
    fn auto_tune_targets_one_request_per_slot() {
        let f = write_temp("0.0\n0.7\n2.9\n3.1\n");
        let cfg = TraceIngestConfig {
            path: f.path().to_path_buf(),
            timestamp_column: ColumnSel::Index(0),
            slot_duration: 1.0,
            filter: None,
            filter_column: None,
        };
        let d = auto_tune_slot_duration(&cfg).unwrap();
        let tuned = TraceIngestConfig {
            slot_duration: d,
            ..cfg
        };
        let report = ingest_trace(&tuned).unwrap();
        assert_eq!(report.trace.counts().iter().max(), Some(&1));
        assert_eq!(report.trace.total_requests(), 4);
    }
}
