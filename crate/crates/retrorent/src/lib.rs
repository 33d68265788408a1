//! Discrete-time simulator, policy library, and verification harness for
//! service caching at an edge server under rent/fetch/forward costs.
//!
//! The model: time is slotted. An edge server may hold ("cache") a service by
//! paying a rent of `c` per slot; while cached, up to `kappa` requests per
//! slot are served locally for free and the overflow is forwarded to a
//! back-end server at one unit per request. While not cached, every request
//! is forwarded. Downloading the service to the edge costs `M` units.
//! A caching policy observes the per-slot request counts and decides, at the
//! end of each slot, whether the service is cached during the next slot.
//!
//! Crate layout:
//!
//! * [`cost`] — domain types, slot semantics, and the exact cost engine that
//!   scores any (trace, schedule) pair. All costs are exact rationals.
//! * [`policy`] — step-wise online policies behind one decision interface:
//!   retro-renting (window scan and its constant-state equivalent), TTL, and
//!   the static always/never baselines.
//! * [`offline`] — the offline-optimal benchmark via dynamic programming, a
//!   brute-force oracle, and structural verifiers for the frame decomposition
//!   used to compare an online run against the offline optimum.
//! * [`bounds`] — closed-form calculators for the competitive-ratio and
//!   stochastic performance bounds, used to cross-check simulations.
//! * [`arrivals`] — arrival-sequence sources: seeded i.i.d. generators,
//!   adversarial constructors, and trace-file ingestion.
//! * [`verify`] — randomized property suites (policy equivalence, offline
//!   oracle agreement, frame structure, bound consistency) shared by the CLI
//!   and the acceptance tests.
//! * [`experiment`] — parameter sweeps and CSV output for the CLI and the
//!   runnable examples.
//!
//! Slots are 1-based throughout: a trace of horizon `T` covers slots
//! `1..=T`, and a schedule entry `r_t` says whether the service is cached
//! during slot `t`. A fetch decided at the end of slot `t` is charged in
//! slot `t` and takes effect in slot `t + 1`.

pub mod arrivals;
pub mod bounds;
pub mod cost;
pub mod experiment;
pub mod offline;
pub mod policy;
pub mod verify;

pub use cost::{
    competitive_ratio, score, ArrivalTrace, CompetitiveRatio, Cost, CostError, CostLedger,
    CostParams, Schedule, SlotCost,
};
pub use policy::{simulate, CachingPolicy, EfficientRr, PolicySpec, RetroRenting, Static, Ttl};
