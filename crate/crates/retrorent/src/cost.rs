//! Domain types and the exact cost engine.
//!
//! The total cost of a slot splits into three parts:
//!
//! * service cost — one unit per request forwarded to the back-end: the
//!   overflow `x_t - min(x_t, kappa)` while cached, all of `x_t` otherwise;
//! * fetch cost — `M` whenever the service is downloaded, i.e. the schedule
//!   goes from uncached in slot `t` to cached in slot `t + 1` (charged in
//!   slot `t`);
//! * rent cost — `c` for every slot the service is cached.
//!
//! Everything is scored in exact rational arithmetic (`Cost`), because the
//! online policies compare accumulated request mass against rational
//! thresholds with equality attainable; floating point would make those
//! decisions platform-dependent.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Exact rational cost value.
pub type Cost = Ratio<i128>;

/// Shorthand for building a rational cost from a numerator/denominator pair.
pub fn cost(numer: i128, denom: i128) -> Cost {
    Ratio::new(numer, denom)
}

/// Errors from the cost engine and domain-type constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("fetch cost must exceed 1, got {0}")]
    FetchCostTooSmall(String),
    #[error("rent cost must satisfy 0 <= c < kappa, got c={c} with kappa={kappa}")]
    RentCostOutOfRange { c: String, kappa: u32 },
    #[error("kappa must be a positive integer")]
    KappaZero,
    #[error("schedule length {schedule} does not match trace horizon {trace}")]
    LengthMismatch { schedule: usize, trace: usize },
    #[error("schedule starts cached but no initial fetch was charged")]
    InitialFetchNotCharged,
    #[error("initial fetch charged but the schedule does not start cached")]
    InitialFetchNotUsed,
    #[error("cannot parse {0:?} as a rational cost")]
    ParseCost(String),
}

fn fmt_cost(c: &Cost) -> String {
    if c.denom() == &1 {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse a cost from a decimal string (`"0.35"`), a fraction (`"7/20"`), or
/// an integer (`"4"`). Decimal inputs are converted exactly; at most twelve
/// fractional digits are accepted so that downstream products stay well
/// inside `i128`.
pub fn parse_cost(s: &str) -> Result<Cost, CostError> {
    let s = s.trim();
    let err = || CostError::ParseCost(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let numer: i128 = n.trim().parse().map_err(|_| err())?;
        let denom: i128 = d.trim().parse().map_err(|_| err())?;
        if denom == 0 || denom.unsigned_abs() > 1_000_000_000_000 {
            return Err(err());
        }
        return Ok(Ratio::new(numer, denom));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 12 || !frac.chars().all(|ch| ch.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| err())?
        };
        let scale = 10_i128.pow(frac.len() as u32);
        let frac_part: i128 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| err())?
        };
        let numer = if negative {
            int_part * scale - frac_part
        } else {
            int_part * scale + frac_part
        };
        return Ok(Ratio::new(numer, scale));
    }
    let numer: i128 = s.parse().map_err(|_| err())?;
    Ok(Ratio::from_integer(numer))
}

/// The economic triple of the model: fetch cost `M`, rent cost per slot `c`,
/// and the edge-service capacity `kappa` (max requests served locally per
/// slot).
///
/// Invariants enforced at construction: `M > 1`, `0 <= c < kappa`, and
/// `kappa >= 1`. Renting at `c >= kappa` is excluded because forwarding
/// everything is then always optimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostParams {
    fetch_cost: Cost,
    rent_cost: Cost,
    kappa: u32,
}

impl CostParams {
    pub fn new(fetch_cost: Cost, rent_cost: Cost, kappa: u32) -> Result<Self, CostError> {
        if kappa == 0 {
            return Err(CostError::KappaZero);
        }
        if fetch_cost <= Cost::from_integer(1) {
            return Err(CostError::FetchCostTooSmall(fmt_cost(&fetch_cost)));
        }
        if rent_cost.is_negative() || rent_cost >= Cost::from_integer(kappa as i128) {
            return Err(CostError::RentCostOutOfRange {
                c: fmt_cost(&rent_cost),
                kappa,
            });
        }
        Ok(Self {
            fetch_cost,
            rent_cost,
            kappa,
        })
    }

    /// Bypasses validation; only for exercising documented walkthroughs
    /// whose parameters sit outside the model's invariants.
    #[cfg(test)]
    pub(crate) fn new_unchecked(fetch_cost: Cost, rent_cost: Cost, kappa: u32) -> Self {
        Self {
            fetch_cost,
            rent_cost,
            kappa,
        }
    }

    pub fn fetch_cost(&self) -> Cost {
        self.fetch_cost
    }

    pub fn rent_cost(&self) -> Cost {
        self.rent_cost
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn kappa_cost(&self) -> Cost {
        Cost::from_integer(self.kappa as i128)
    }

    /// Common denominator of `M` and `c`. Multiplying every cost by this
    /// scale turns all threshold tests into integer comparisons, which the
    /// policies and the offline DP use as their exact fast path.
    pub fn scale(&self) -> i128 {
        self.fetch_cost.denom().lcm(self.rent_cost.denom())
    }

    /// `M` expressed in units of `1/scale()`.
    pub fn scaled_fetch(&self) -> i128 {
        self.fetch_cost.numer() * (self.scale() / self.fetch_cost.denom())
    }

    /// `c` expressed in units of `1/scale()`.
    pub fn scaled_rent(&self) -> i128 {
        self.rent_cost.numer() * (self.scale() / self.rent_cost.denom())
    }
}

impl fmt::Display for CostParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M={} c={} kappa={}",
            fmt_cost(&self.fetch_cost),
            fmt_cost(&self.rent_cost),
            self.kappa
        )
    }
}

/// A finite request arrival sequence: `counts[t - 1]` requests arrive in
/// slot `t`. Empty traces are legal everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArrivalTrace {
    counts: Vec<u64>,
}

impl ArrivalTrace {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn horizon(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Arrivals in 1-based slot `t`.
    pub fn arrivals(&self, t: usize) -> u64 {
        self.counts[t - 1]
    }

    /// Requests serveable at the edge in slot `t`: `min(x_t, kappa)`.
    pub fn capped(&self, t: usize, kappa: u32) -> u64 {
        self.counts[t - 1].min(kappa as u64)
    }

    pub fn total_requests(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl FromStr for ArrivalTrace {
    type Err = std::num::ParseIntError;

    /// Parses whitespace- or comma-separated counts.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let counts = s
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| tok.parse())
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(Self::new(counts))
    }
}

/// Per-slot caching indicators `r_1..r_T`, plus the end-of-horizon fetch
/// decision a policy may emit at the end of slot `T`.
///
/// Convention: online policies start uncached (`r_1 = 0`); a schedule with
/// `r_1 = 1` stands for a policy that fetched before the horizon and must be
/// scored with `charge_initial_fetch = true`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    slots: Vec<bool>,
    trailing_fetch: bool,
}

impl Schedule {
    /// `trailing_fetch` records a fetch decided at the end of the final slot
    /// (`r_T = 0` with `r_{T+1} = 1`); it is meaningless on an empty horizon
    /// or when the final slot is already cached, and is normalized away in
    /// those cases.
    pub fn new(slots: Vec<bool>, trailing_fetch: bool) -> Self {
        let trailing_fetch = trailing_fetch && slots.last().is_some_and(|last| !last);
        Self {
            slots,
            trailing_fetch,
        }
    }

    pub fn never_cached(horizon: usize) -> Self {
        Self::new(vec![false; horizon], false)
    }

    pub fn always_cached(horizon: usize) -> Self {
        Self::new(vec![true; horizon], false)
    }

    pub fn horizon(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[bool] {
        &self.slots
    }

    /// Whether the service is cached during 1-based slot `t`.
    pub fn cached(&self, t: usize) -> bool {
        self.slots[t - 1]
    }

    pub fn starts_cached(&self) -> bool {
        self.slots.first().copied().unwrap_or(false)
    }

    pub fn trailing_fetch(&self) -> bool {
        self.trailing_fetch
    }

    /// 1-based first slots of every cached run. A pre-horizon fetch shows up
    /// as slot 1; a trailing fetch as slot `T + 1`.
    pub fn fetch_slots(&self) -> Vec<usize> {
        let mut fetches = Vec::new();
        let mut prev = false;
        for (i, &cached) in self.slots.iter().enumerate() {
            if cached && !prev {
                fetches.push(i + 1);
            }
            prev = cached;
        }
        if self.trailing_fetch {
            fetches.push(self.slots.len() + 1);
        }
        fetches
    }

    /// Maximal cached intervals as 1-based `(first, last)` slot pairs.
    pub fn cached_runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &cached) in self.slots.iter().enumerate() {
            match (cached, start) {
                (true, None) => start = Some(i + 1),
                (false, Some(s)) => {
                    runs.push((s, i));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, self.slots.len()));
        }
        runs
    }
}

/// Exact cost breakdown of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotCost {
    pub service: Cost,
    pub fetch: Cost,
    pub rent: Cost,
}

impl SlotCost {
    pub fn total(&self) -> Cost {
        self.service + self.fetch + self.rent
    }
}

/// Per-slot and cumulative cost breakdown of a scored (trace, schedule)
/// pair.
///
/// `setup_fetch` holds the pre-horizon fetch charge (exactly `M` when the
/// schedule starts cached, zero otherwise); it is part of the totals but has
/// no slot of its own, so `total == setup_fetch + sum(per_slot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostLedger {
    pub per_slot: Vec<SlotCost>,
    pub setup_fetch: Cost,
    pub service: Cost,
    pub fetch: Cost,
    pub rent: Cost,
    pub total: Cost,
    pub num_fetches: u32,
    pub num_evictions: u32,
}

impl CostLedger {
    pub fn cost_per_slot(&self) -> Cost {
        if self.per_slot.is_empty() {
            Cost::zero()
        } else {
            self.total / Cost::from_integer(self.per_slot.len() as i128)
        }
    }
}

/// Score a (trace, schedule) pair under the given parameters.
///
/// `charge_initial_fetch` must be `true` when the schedule starts cached
/// (the download that put the service in place before slot 1 costs `M`);
/// it may also be `true` on an empty horizon, describing a policy that
/// fetched and never saw a slot. All arithmetic is exact and the function is
/// pure: identical inputs produce identical ledgers.
pub fn score(
    trace: &ArrivalTrace,
    schedule: &Schedule,
    params: &CostParams,
    charge_initial_fetch: bool,
) -> Result<CostLedger, CostError> {
    if trace.horizon() != schedule.horizon() {
        return Err(CostError::LengthMismatch {
            schedule: schedule.horizon(),
            trace: trace.horizon(),
        });
    }
    if schedule.starts_cached() && !charge_initial_fetch {
        return Err(CostError::InitialFetchNotCharged);
    }
    if charge_initial_fetch && !schedule.starts_cached() && !trace.is_empty() {
        return Err(CostError::InitialFetchNotUsed);
    }

    let horizon = trace.horizon();
    let zero = Cost::zero();
    let mut per_slot = Vec::with_capacity(horizon);
    let mut service = Cost::zero();
    let mut fetch = Cost::zero();
    let mut rent = Cost::zero();
    let mut num_fetches = 0u32;
    let mut num_evictions = 0u32;

    let setup_fetch = if charge_initial_fetch {
        num_fetches += 1;
        params.fetch_cost()
    } else {
        zero
    };
    fetch += setup_fetch;

    for t in 1..=horizon {
        let cached = schedule.cached(t);
        let x = trace.arrivals(t);
        let forwarded = if cached {
            x - trace.capped(t, params.kappa())
        } else {
            x
        };
        let slot_service = Cost::from_integer(forwarded as i128);

        let fetch_now = if t < horizon {
            !cached && schedule.cached(t + 1)
        } else {
            schedule.trailing_fetch()
        };
        let slot_fetch = if fetch_now {
            num_fetches += 1;
            params.fetch_cost()
        } else {
            zero
        };
        if t < horizon && cached && !schedule.cached(t + 1) {
            num_evictions += 1;
        }

        let slot_rent = if cached { params.rent_cost() } else { zero };

        service += slot_service;
        fetch += slot_fetch;
        rent += slot_rent;
        per_slot.push(SlotCost {
            service: slot_service,
            fetch: slot_fetch,
            rent: slot_rent,
        });
    }

    Ok(CostLedger {
        per_slot,
        setup_fetch,
        service,
        fetch,
        rent,
        total: service + fetch + rent,
        num_fetches,
        num_evictions,
    })
}

/// Ratio of a policy's cost to a benchmark cost on the same trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompetitiveRatio {
    Finite(Cost),
    /// Benchmark cost zero while the policy paid something.
    Infinite,
}

impl CompetitiveRatio {
    /// Whether this ratio is at least `bound` (an infinite ratio dominates
    /// every finite bound).
    pub fn at_least(&self, bound: Cost) -> bool {
        match self {
            CompetitiveRatio::Finite(r) => *r >= bound,
            CompetitiveRatio::Infinite => true,
        }
    }

    pub fn at_most(&self, bound: Cost) -> bool {
        match self {
            CompetitiveRatio::Finite(r) => *r <= bound,
            CompetitiveRatio::Infinite => false,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            CompetitiveRatio::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            CompetitiveRatio::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for CompetitiveRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompetitiveRatio::Finite(r) => write!(f, "{}", fmt_cost(r)),
            CompetitiveRatio::Infinite => write!(f, "inf"),
        }
    }
}

/// Empirical cost ratio with the degenerate conventions: `0/0` counts as 1
/// (both policies idle), and a positive cost against a zero benchmark is
/// flagged as infinite.
pub fn competitive_ratio(policy_cost: Cost, benchmark_cost: Cost) -> CompetitiveRatio {
    if benchmark_cost.is_zero() {
        if policy_cost.is_zero() {
            CompetitiveRatio::Finite(Cost::from_integer(1))
        } else {
            CompetitiveRatio::Infinite
        }
    } else {
        CompetitiveRatio::Finite(policy_cost / benchmark_cost)
    }
}

/// Render a cost as `p/q` (or a bare integer when `q = 1`).
pub fn display_exact(c: &Cost) -> String {
    fmt_cost(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(m: (i128, i128), c: (i128, i128), kappa: u32) -> CostParams {
        CostParams::new(cost(m.0, m.1), cost(c.0, c.1), kappa).unwrap()
    }

    #[test]
    fn params_reject_invalid() {
        assert!(matches!(
            CostParams::new(cost(1, 1), cost(0, 1), 1),
            Err(CostError::FetchCostTooSmall(_))
        ));
        assert!(matches!(
            CostParams::new(cost(2, 1), cost(1, 1), 1),
            Err(CostError::RentCostOutOfRange { .. })
        ));
        assert!(matches!(
            CostParams::new(cost(2, 1), cost(-1, 2), 3),
            Err(CostError::RentCostOutOfRange { .. })
        ));
        assert!(matches!(
            CostParams::new(cost(2, 1), cost(0, 1), 0),
            Err(CostError::KappaZero)
        ));
        // M = 0.2, c = 0.9 from the hypothetical in the lower-bound formula
        // is rejected by the M > 1 invariant.
        assert!(CostParams::new(cost(1, 5), cost(9, 10), 1).is_err());
    }

    #[test]
    fn empty_horizon_scores_zero() {
        let p = params((2, 1), (1, 2), 1);
        let ledger = score(
            &ArrivalTrace::new(vec![]),
            &Schedule::never_cached(0),
            &p,
            false,
        )
        .unwrap();
        assert_eq!(ledger.total, Cost::zero());
        assert_eq!(ledger.num_fetches, 0);
    }

    #[test]
    fn all_zero_trace_uncached_scores_zero() {
        let p = params((7, 2), (1, 3), 2);
        let trace = ArrivalTrace::new(vec![0, 0, 0]);
        let ledger = score(&trace, &Schedule::never_cached(3), &p, false).unwrap();
        assert_eq!(ledger.total, Cost::zero());
    }

    #[test]
    fn always_cached_run_is_setup_fetch_plus_rent() {
        // kappa=1, c=1/2, M=2 on five unit arrivals: M + 5c = 9/2, no
        // service cost.
        let p = params((2, 1), (1, 2), 1);
        let trace = ArrivalTrace::new(vec![1; 5]);
        let ledger = score(&trace, &Schedule::always_cached(5), &p, true).unwrap();
        assert_eq!(ledger.total, cost(9, 2));
        assert_eq!(ledger.service, Cost::zero());
        assert_eq!(ledger.fetch, cost(2, 1));
        assert_eq!(ledger.rent, cost(5, 2));
        assert_eq!(ledger.num_fetches, 1);
        // Independent accumulation route: per-slot entries plus setup.
        let resummed = ledger
            .per_slot
            .iter()
            .fold(ledger.setup_fetch, |acc, s| acc + s.total());
        assert_eq!(resummed, ledger.total);
    }

    #[test]
    fn late_fetch_ledger_breakdown() {
        // Schedule [0,0,0,0,1]: four forwarded requests, fetch charged in
        // slot 4 (r_4 = 0, r_5 = 1), one slot of rent.
        let p = params((2, 1), (1, 2), 1);
        let trace = ArrivalTrace::new(vec![1; 5]);
        let schedule = Schedule::new(vec![false, false, false, false, true], false);
        let ledger = score(&trace, &schedule, &p, false).unwrap();
        assert_eq!(ledger.service, cost(4, 1));
        assert_eq!(ledger.fetch, cost(2, 1));
        assert_eq!(ledger.per_slot[3].fetch, cost(2, 1));
        assert_eq!(ledger.per_slot[4].fetch, Cost::zero());
        assert_eq!(ledger.rent, cost(1, 2));
        assert_eq!(ledger.total, cost(13, 2));
    }

    #[test]
    fn trailing_fetch_is_charged_in_final_slot() {
        let p = params((2, 1), (1, 2), 1);
        let trace = ArrivalTrace::new(vec![1, 1]);
        let schedule = Schedule::new(vec![false, false], true);
        let ledger = score(&trace, &schedule, &p, false).unwrap();
        assert_eq!(ledger.per_slot[1].fetch, cost(2, 1));
        assert_eq!(ledger.total, cost(4, 1));
        assert_eq!(schedule.fetch_slots(), vec![3]);
    }

    #[test]
    fn contract_violations() {
        let p = params((2, 1), (1, 2), 1);
        let trace = ArrivalTrace::new(vec![1]);
        assert_eq!(
            score(&trace, &Schedule::never_cached(2), &p, false),
            Err(CostError::LengthMismatch {
                schedule: 2,
                trace: 1
            })
        );
        assert_eq!(
            score(&trace, &Schedule::always_cached(1), &p, false),
            Err(CostError::InitialFetchNotCharged)
        );
        assert_eq!(
            score(&trace, &Schedule::never_cached(1), &p, true),
            Err(CostError::InitialFetchNotUsed)
        );
    }

    #[test]
    fn empty_horizon_with_setup_fetch_costs_m() {
        // The always-cache policy on an empty trace still pays its
        // pre-horizon download.
        let p = params((2, 1), (1, 2), 1);
        let ledger = score(
            &ArrivalTrace::new(vec![]),
            &Schedule::new(vec![], false),
            &p,
            true,
        )
        .unwrap();
        assert_eq!(ledger.total, cost(2, 1));
        assert_eq!(ledger.num_fetches, 1);
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(
            competitive_ratio(cost(13, 2), cost(9, 2)),
            CompetitiveRatio::Finite(cost(13, 9))
        );
        assert_eq!(
            competitive_ratio(Cost::zero(), Cost::zero()),
            CompetitiveRatio::Finite(cost(1, 1))
        );
        assert_eq!(
            competitive_ratio(cost(9, 2), cost(9, 2)),
            CompetitiveRatio::Finite(cost(1, 1))
        );
        assert_eq!(
            competitive_ratio(cost(1, 1), Cost::zero()),
            CompetitiveRatio::Infinite
        );
        assert!(CompetitiveRatio::Infinite.at_least(cost(1000, 1)));
    }

    #[test]
    fn parse_cost_formats() {
        assert_eq!(parse_cost("0.35").unwrap(), cost(7, 20));
        assert_eq!(parse_cost("7/20").unwrap(), cost(7, 20));
        assert_eq!(parse_cost("4").unwrap(), cost(4, 1));
        assert_eq!(parse_cost("-0.5").unwrap(), cost(-1, 2));
        assert_eq!(parse_cost("1.8").unwrap(), cost(9, 5));
        assert!(parse_cost("x").is_err());
        assert!(parse_cost("1/0").is_err());
    }

    #[test]
    fn schedule_runs_and_fetches() {
        let s = Schedule::new(vec![false, true, true, false, true], false);
        assert_eq!(s.cached_runs(), vec![(2, 3), (5, 5)]);
        assert_eq!(s.fetch_slots(), vec![2, 5]);
        let all = Schedule::always_cached(3);
        assert_eq!(all.cached_runs(), vec![(1, 3)]);
        assert_eq!(all.fetch_slots(), vec![1]);
        // Trailing fetch on a cached final slot is normalized away.
        let norm = Schedule::new(vec![true, true], true);
        assert!(!norm.trailing_fetch());
    }

    fn arb_instance() -> impl Strategy<Value = (CostParams, ArrivalTrace, Schedule)> {
        (
            1u32..=6,
            1i128..=40,
            1i128..=8,
            0i128..=99,
            1i128..=8,
            prop::collection::vec(0u64..12, 0..40),
        )
            .prop_flat_map(|(kappa, mn, md, cn, cd, counts)| {
                let m = Cost::from_integer(1) + cost(mn, md);
                // cn <= 99 keeps c strictly below kappa for every cd >= 1.
                let c = cost(kappa as i128 * cn, 100 * cd);
                let params = CostParams::new(m, c, kappa).unwrap();
                let horizon = counts.len();
                (
                    Just(params),
                    Just(ArrivalTrace::new(counts)),
                    prop::collection::vec(any::<bool>(), horizon..=horizon),
                )
            })
            .prop_map(|(params, trace, slots)| {
                let schedule = Schedule::new(slots, false);
                (params, trace, schedule)
            })
    }

    proptest! {
        /// Ledger totals always equal the per-slot sum plus the setup fetch.
        #[test]
        fn totals_match_per_slot_sum((params, trace, schedule) in arb_instance()) {
            let charged = schedule.starts_cached();
            let ledger = score(&trace, &schedule, &params, charged).unwrap();
            let mut service = Cost::zero();
            let mut fetch = ledger.setup_fetch;
            let mut rent = Cost::zero();
            for slot in &ledger.per_slot {
                service += slot.service;
                fetch += slot.fetch;
                rent += slot.rent;
            }
            prop_assert_eq!(service, ledger.service);
            prop_assert_eq!(fetch, ledger.fetch);
            prop_assert_eq!(rent, ledger.rent);
            prop_assert_eq!(service + fetch + rent, ledger.total);
        }

        /// score is a pure function.
        #[test]
        fn score_is_pure((params, trace, schedule) in arb_instance()) {
            let charged = schedule.starts_cached();
            let a = score(&trace, &schedule, &params, charged).unwrap();
            let b = score(&trace, &schedule, &params, charged).unwrap();
            prop_assert_eq!(a, b);
        }

        /// Flipping one slot from uncached to cached never increases that
        /// slot's service cost and adds exactly c of rent there.
        #[test]
        fn caching_a_slot_trades_service_for_rent(
            (params, trace, schedule) in arb_instance(),
            idx in 0usize..64,
        ) {
            prop_assume!(!trace.is_empty());
            let t = idx % trace.horizon() + 1;
            prop_assume!(!schedule.cached(t));
            let charged = schedule.starts_cached();
            let base = score(&trace, &schedule, &params, charged).unwrap();
            let mut flipped_slots = schedule.slots().to_vec();
            flipped_slots[t - 1] = true;
            let flipped = Schedule::new(flipped_slots, schedule.trailing_fetch());
            let ledger = score(&trace, &flipped, &params, flipped.starts_cached()).unwrap();
            prop_assert!(ledger.per_slot[t - 1].service <= base.per_slot[t - 1].service);
            prop_assert_eq!(
                ledger.per_slot[t - 1].rent - base.per_slot[t - 1].rent,
                params.rent_cost()
            );
        }
    }
}
