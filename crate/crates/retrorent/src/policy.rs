//! Step-wise online caching policies.
//!
//! Every policy implements the same decision interface: observe the arrivals
//! `x_t` of slot `t`, emit the caching indicator `r_{t+1}` for the next
//! slot. Online policies start uncached; the always-cache baseline is the
//! one exception and charges a pre-horizon fetch.
//!
//! Two implementations of retro-renting ship side by side:
//!
//! * [`RetroRenting`] is the literal window-scan formulation. While
//!   uncached, it fetches at the end of slot `t` as soon as some window
//!   `[tau, t]` since the last eviction has carried enough serveable demand
//!   to retroactively justify renting:
//!   `sum min(x_l, kappa) >= (t - tau + 1) c + M`.
//!   While cached it evicts as soon as some window since the last fetch
//!   would retroactively have been cheaper to forward:
//!   `sum min(x_l, kappa) + M <= (t - tau + 1) c`.
//!   Per-step work and state grow with the window length.
//!
//! * [`EfficientRr`] maintains the clipped potential
//!   `delta_t = min(M, max(0, delta_{t-1} + min(x_t, kappa) - c))`
//!   and fetches when the potential saturates at `M`, evicts when it drains
//!   to zero. Constant state, constant work per step, and provably the same
//!   schedule as the window scan — the equivalence is enforced by the
//!   `verify` suites.
//!
//! The window scans run over `tau` in `(anchor, t]`, including the
//! single-slot window `tau = t`. Scans are ordered from the anchor forward
//! and stop at the first satisfying window; the fetch/evict decision itself
//! is scan-order independent.
//!
//! Threshold tests are evaluated in integers after multiplying through by
//! the common denominator of `M` and `c`, so decisions are exact.

use crate::cost::{score, ArrivalTrace, Cost, CostError, CostLedger, CostParams, Schedule};
use num_rational::Ratio;
use std::fmt;
use std::str::FromStr;

/// Common interface of all step-wise caching policies.
///
/// The contract: construct a fresh instance per run, then call
/// [`CachingPolicy::decide`] once per slot in order (`t = 1, 2, ...`). The
/// return value and [`CachingPolicy::is_cached`] report `r_{t+1}`.
pub trait CachingPolicy {
    /// Whether the service is cached during slot 1 (`r_1`). True only for
    /// the always-cache baseline, which pays a pre-horizon fetch.
    fn starts_cached(&self) -> bool {
        false
    }

    /// Observe the arrivals of slot `t` and decide `r_{t+1}`.
    fn decide(&mut self, slot: usize, arrivals: u64) -> bool;

    /// Current caching indicator (for the upcoming slot).
    fn is_cached(&self) -> bool;

    fn name(&self) -> String;
}

/// Literal window-scan retro-renting policy.
///
/// Stores prefix sums of the capped arrivals since the start of the run, so
/// per-slot work and memory grow with the scan window (the constant-state
/// variant is [`EfficientRr`]).
#[derive(Debug, Clone)]
pub struct RetroRenting {
    scale: i128,
    scaled_fetch: i128,
    scaled_rent: i128,
    kappa: u64,
    cached: bool,
    last_fetch: usize,
    last_evict: usize,
    /// `capped_prefix[t] = sum_{l <= t} min(x_l, kappa)`.
    capped_prefix: Vec<i128>,
}

impl RetroRenting {
    pub fn new(params: &CostParams) -> Self {
        Self {
            scale: params.scale(),
            scaled_fetch: params.scaled_fetch(),
            scaled_rent: params.scaled_rent(),
            kappa: params.kappa() as u64,
            cached: false,
            last_fetch: 0,
            last_evict: 0,
            capped_prefix: vec![0],
        }
    }

    /// Slot of the most recent fetch decision (0 if none).
    pub fn last_fetch(&self) -> usize {
        self.last_fetch
    }

    /// Slot of the most recent eviction decision (0 if none).
    pub fn last_evict(&self) -> usize {
        self.last_evict
    }

    fn window_demand(&self, tau: usize, t: usize) -> i128 {
        self.capped_prefix[t] - self.capped_prefix[tau - 1]
    }
}

impl CachingPolicy for RetroRenting {
    fn decide(&mut self, slot: usize, arrivals: u64) -> bool {
        debug_assert_eq!(slot, self.capped_prefix.len());
        let capped = arrivals.min(self.kappa) as i128;
        let last = *self.capped_prefix.last().unwrap();
        self.capped_prefix.push(last + capped);

        if !self.cached {
            for tau in (self.last_evict + 1)..=slot {
                let width = (slot - tau + 1) as i128;
                if self.window_demand(tau, slot) * self.scale
                    >= width * self.scaled_rent + self.scaled_fetch
                {
                    self.cached = true;
                    self.last_fetch = slot;
                    break;
                }
            }
        } else {
            for tau in (self.last_fetch + 1)..=slot {
                let width = (slot - tau + 1) as i128;
                if self.window_demand(tau, slot) * self.scale + self.scaled_fetch
                    <= width * self.scaled_rent
                {
                    self.cached = false;
                    self.last_evict = slot;
                    break;
                }
            }
        }
        self.cached
    }

    fn is_cached(&self) -> bool {
        self.cached
    }

    fn name(&self) -> String {
        "rr".into()
    }
}

/// Constant-state retro-renting via the clipped potential.
#[derive(Debug, Clone, Copy)]
pub struct EfficientRr {
    scale: i128,
    scaled_fetch: i128,
    scaled_rent: i128,
    kappa: u64,
    /// Potential in units of `1/scale`, always within `[0, M]`.
    delta: i128,
    cached: bool,
}

impl EfficientRr {
    pub fn new(params: &CostParams) -> Self {
        Self {
            scale: params.scale(),
            scaled_fetch: params.scaled_fetch(),
            scaled_rent: params.scaled_rent(),
            kappa: params.kappa() as u64,
            delta: 0,
            cached: false,
        }
    }

    /// Current potential as an exact rational in `[0, M]`.
    pub fn potential(&self) -> Cost {
        Ratio::new(self.delta, self.scale)
    }
}

impl CachingPolicy for EfficientRr {
    fn decide(&mut self, _slot: usize, arrivals: u64) -> bool {
        let capped = arrivals.min(self.kappa) as i128;
        self.delta = (self.delta + capped * self.scale - self.scaled_rent)
            .max(0)
            .min(self.scaled_fetch);
        debug_assert!(self.delta >= 0 && self.delta <= self.scaled_fetch);
        if self.delta == self.scaled_fetch {
            self.cached = true;
        } else if self.delta == 0 {
            self.cached = false;
        }
        self.cached
    }

    fn is_cached(&self) -> bool {
        self.cached
    }

    fn name(&self) -> String {
        "err".into()
    }
}

/// Fixed-timer TTL policy.
///
/// Any slot with at least one arrival (re)arms the timer to `L` and keeps
/// the service cached; an empty slot with an armed timer burns one unit of
/// it; the service is dropped on an empty slot with an expired timer. Note
/// the timer semantics retain the service for `L + 1` slots after an
/// isolated request.
#[derive(Debug, Clone, Copy)]
pub struct Ttl {
    ttl: u32,
    timer: u32,
    cached: bool,
}

impl Ttl {
    pub fn new(ttl: u32) -> Self {
        assert!(ttl >= 1, "TTL value must be a positive number of slots");
        Self {
            ttl,
            timer: 0,
            cached: false,
        }
    }

    pub fn ttl(&self) -> u32 {
        self.ttl
    }

    pub fn timer(&self) -> u32 {
        self.timer
    }
}

impl CachingPolicy for Ttl {
    fn decide(&mut self, _slot: usize, arrivals: u64) -> bool {
        if arrivals == 0 {
            if self.timer == 0 {
                self.cached = false;
            } else {
                self.cached = true;
                self.timer -= 1;
            }
        } else {
            self.cached = true;
            self.timer = self.ttl;
        }
        debug_assert!(self.cached || self.timer == 0);
        self.cached
    }

    fn is_cached(&self) -> bool {
        self.cached
    }

    fn name(&self) -> String {
        format!("ttl:{}", self.ttl)
    }
}

/// Constant baselines: cache from slot 1 onward (with a pre-horizon fetch)
/// or never cache at all.
#[derive(Debug, Clone, Copy)]
pub struct Static {
    cached: bool,
}

impl Static {
    pub fn always() -> Self {
        Self { cached: true }
    }

    pub fn never() -> Self {
        Self { cached: false }
    }
}

impl CachingPolicy for Static {
    fn starts_cached(&self) -> bool {
        self.cached
    }

    fn decide(&mut self, _slot: usize, _arrivals: u64) -> bool {
        self.cached
    }

    fn is_cached(&self) -> bool {
        self.cached
    }

    fn name(&self) -> String {
        if self.cached { "always" } else { "never" }.into()
    }
}

/// Policy selector, as spelled in CLI configs: `rr | err | ttl:L | always |
/// never`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicySpec {
    Rr,
    EfficientRr,
    Ttl { ttl: u32 },
    Always,
    Never,
}

impl PolicySpec {
    /// Fresh policy instance for one run.
    pub fn build(&self, params: &CostParams) -> Box<dyn CachingPolicy> {
        match self {
            PolicySpec::Rr => Box::new(RetroRenting::new(params)),
            PolicySpec::EfficientRr => Box::new(EfficientRr::new(params)),
            PolicySpec::Ttl { ttl } => Box::new(Ttl::new(*ttl)),
            PolicySpec::Always => Box::new(Static::always()),
            PolicySpec::Never => Box::new(Static::never()),
        }
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Rr => write!(f, "rr"),
            PolicySpec::EfficientRr => write!(f, "err"),
            PolicySpec::Ttl { ttl } => write!(f, "ttl:{ttl}"),
            PolicySpec::Always => write!(f, "always"),
            PolicySpec::Never => write!(f, "never"),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "rr" => return Ok(PolicySpec::Rr),
            "err" => return Ok(PolicySpec::EfficientRr),
            "always" => return Ok(PolicySpec::Always),
            "never" => return Ok(PolicySpec::Never),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("ttl:").or_else(|| {
            s.strip_prefix("ttl(")
                .and_then(|r| r.strip_suffix(')'))
        }) {
            let ttl: u32 = rest
                .parse()
                .map_err(|_| format!("bad TTL value in {s:?}"))?;
            if ttl == 0 {
                return Err("TTL value must be >= 1".into());
            }
            return Ok(PolicySpec::Ttl { ttl });
        }
        Err(format!(
            "unknown policy {s:?} (expected rr | err | ttl:L | always | never)"
        ))
    }
}

/// Run a policy over a trace and collect its schedule, including a trailing
/// fetch decided at the end of the final slot.
pub fn run_policy(policy: &mut dyn CachingPolicy, trace: &ArrivalTrace) -> Schedule {
    let horizon = trace.horizon();
    let mut slots = Vec::with_capacity(horizon);
    let mut current = policy.starts_cached();
    for t in 1..=horizon {
        slots.push(current);
        current = policy.decide(t, trace.arrivals(t));
    }
    let trailing_fetch = horizon > 0 && !slots[horizon - 1] && current;
    Schedule::new(slots, trailing_fetch)
}

/// Simulate a policy on a trace and score the run.
pub fn simulate(
    spec: PolicySpec,
    trace: &ArrivalTrace,
    params: &CostParams,
) -> Result<(Schedule, CostLedger), CostError> {
    let mut policy = spec.build(params);
    let schedule = run_policy(policy.as_mut(), trace);
    let ledger = score(trace, &schedule, params, policy.starts_cached())?;
    Ok((schedule, ledger))
}
