//! Randomized verification suites over seeded instance streams.
//!
//! Each suite draws `budget` random (parameters, trace) instances from a
//! master seed and checks one family of properties:
//!
//! * `equivalence` — the window-scan and potential formulations of
//!   retro-renting emit identical schedules.
//! * `oracle` — the offline DP matches exhaustive enumeration at small
//!   horizons and never exceeds any policy's cost.
//! * `frames` — the frame decomposition of an online run against the
//!   offline optimum holds, including the per-frame cost gap and the
//!   whole-run competitive-ratio guarantee.
//! * `structure` — every cached interval of the offline optimum satisfies
//!   the minimum-length and minimum-demand properties.
//! * `bounds-consistency` — the closed-form upper bound for retro-renting
//!   dominates the universal lower bound on every parameter draw.
//!
//! Instance generation is deterministic: instance `i` derives its own
//! ChaCha stream from `mix_seed(master_seed, i)`, so suites are
//! reproducible and may be parallelized across instances. On a failure the
//! offending trace is shrunk by bisection before it is reported.

use crate::arrivals::{gen_bursty, gen_iid, IidDistribution};
use crate::bounds::{rho_any_lower, rho_rr_upper};
use crate::cost::{
    competitive_ratio, cost, ArrivalTrace, CompetitiveRatio, Cost, CostParams,
};
use crate::offline::{brute_force_opt, decompose_frames, opt_off, verify_opt_structure};
use crate::policy::{simulate, PolicySpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// Documented seed fan-out: run `i` uses `splitmix64(master ^ i)`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = (master ^ index).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random valid parameters: `kappa` in `1..=8`, rational `M` in `(1, 32]`
/// with denominator up to 16, rational `c` in `[0, kappa)` likewise.
pub fn random_params(rng: &mut ChaCha8Rng) -> CostParams {
    let kappa: u32 = rng.gen_range(1..=8);
    let m_den: i128 = rng.gen_range(1..=16);
    let m_num: i128 = rng.gen_range(1..=31 * m_den);
    let fetch = Cost::from_integer(1) + cost(m_num, m_den);
    let c_den: i128 = rng.gen_range(1..=16);
    let c_num: i128 = rng.gen_range(0..kappa as i128 * c_den);
    let rent = cost(c_num, c_den);
    CostParams::new(fetch, rent, kappa).expect("sampled parameters are valid")
}

/// Random trace of horizon up to `max_horizon`, mixing Bernoulli, Poisson,
/// and bursty sources.
pub fn random_trace(rng: &mut ChaCha8Rng, kappa: u32, max_horizon: usize) -> ArrivalTrace {
    let horizon = rng.gen_range(0..=max_horizon);
    let seed = rng.gen();
    match rng.gen_range(0..3) {
        0 => {
            let p = cost(rng.gen_range(0..=1000), 1000);
            gen_iid(&IidDistribution::bernoulli(p).unwrap(), horizon, seed)
        }
        1 => {
            let rate = rng.gen::<f64>() * 2.0 * kappa as f64;
            gen_iid(&IidDistribution::poisson(rate).unwrap(), horizon, seed)
        }
        _ => gen_bursty(2 * kappa as u64, horizon, seed),
    }
}

/// A minimized failing instance.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub params: CostParams,
    pub trace: ArrivalTrace,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} on {} with trace ({} slots) {:?}",
            self.detail,
            self.params,
            self.trace.horizon(),
            self.trace.counts()
        )
    }
}

/// Shrink a failing trace by bisection: repeatedly drop chunks (halves
/// down to single slots) and decrement counts while the predicate keeps
/// failing. `fails` returns true while the instance still exhibits the
/// failure.
pub fn shrink_trace(
    params: &CostParams,
    trace: &ArrivalTrace,
    fails: impl Fn(&CostParams, &ArrivalTrace) -> bool,
) -> ArrivalTrace {
    let mut current = trace.counts().to_vec();
    let mut chunk = (current.len() / 2).max(1);
    loop {
        let mut progressed = false;
        // Drop [start, start + chunk) spans.
        let mut start = 0;
        while start < current.len() {
            let mut candidate = current.clone();
            candidate.drain(start..(start + chunk).min(candidate.len()));
            if fails(params, &ArrivalTrace::new(candidate.clone())) {
                current = candidate;
                progressed = true;
            } else {
                start += chunk;
            }
        }
        // Shrink individual counts toward zero.
        for i in 0..current.len() {
            while current[i] > 0 {
                let mut candidate = current.clone();
                candidate[i] /= 2;
                if fails(params, &ArrivalTrace::new(candidate.clone())) {
                    current = candidate;
                    progressed = true;
                } else {
                    break;
                }
            }
        }
        if chunk > 1 {
            chunk /= 2;
        } else if !progressed {
            return ArrivalTrace::new(current);
        }
    }
}

/// The named property suites exposed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Equivalence,
    Oracle,
    Frames,
    Structure,
    BoundsConsistency,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Equivalence,
        Suite::Oracle,
        Suite::Frames,
        Suite::Structure,
        Suite::BoundsConsistency,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Equivalence => "equivalence",
            Suite::Oracle => "oracle",
            Suite::Frames => "frames",
            Suite::Structure => "structure",
            Suite::BoundsConsistency => "bounds-consistency",
        };
        write!(f, "{name}")
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "equivalence" => Ok(Suite::Equivalence),
            "oracle" => Ok(Suite::Oracle),
            "frames" => Ok(Suite::Frames),
            "structure" => Ok(Suite::Structure),
            "bounds-consistency" | "bounds_consistency" => Ok(Suite::BoundsConsistency),
            other => Err(format!(
                "unknown suite {other:?} (expected equivalence | oracle | frames | structure | bounds-consistency)"
            )),
        }
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: u64,
    /// Individual property checks evaluated (several per instance).
    pub checks: u64,
    pub failures: Vec<String>,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn new(suite: Suite) -> Self {
        Self {
            suite,
            instances: 0,
            checks: 0,
            failures: Vec::new(),
            counterexample: None,
        }
    }
}

fn policies_match(params: &CostParams, trace: &ArrivalTrace) -> bool {
    let (scan, _) = simulate(PolicySpec::Rr, trace, params).unwrap();
    let (potential, _) = simulate(PolicySpec::EfficientRr, trace, params).unwrap();
    scan == potential
}

fn run_equivalence(report: &mut SuiteReport, budget: u64, master_seed: u64, max_horizon: usize) {
    for i in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, i));
        let params = random_params(&mut rng);
        let trace = random_trace(&mut rng, params.kappa(), max_horizon);
        report.instances += 1;
        report.checks += 1;
        if !policies_match(&params, &trace) {
            let minimal = shrink_trace(&params, &trace, |p, t| !policies_match(p, t));
            report.failures.push(format!(
                "instance {i}: window-scan and potential schedules differ ({} slots after shrinking)",
                minimal.horizon()
            ));
            report.counterexample = Some(Counterexample {
                params,
                trace: minimal,
                detail: "schedule mismatch".into(),
            });
            return;
        }
    }
}

fn run_oracle(report: &mut SuiteReport, budget: u64, master_seed: u64) {
    let probes = [
        PolicySpec::Rr,
        PolicySpec::EfficientRr,
        PolicySpec::Ttl { ttl: 2 },
        PolicySpec::Always,
        PolicySpec::Never,
    ];
    for i in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, i));
        let params = random_params(&mut rng);
        let trace = random_trace(&mut rng, params.kappa(), 12);
        report.instances += 1;

        let dp = opt_off(&trace, &params);
        let oracle = brute_force_opt(&trace, &params).expect("horizon within bounds");
        report.checks += 1;
        if dp.cost != oracle.cost {
            let detail = format!(
                "instance {i}: DP cost {} != exhaustive cost {}",
                dp.cost, oracle.cost
            );
            report.failures.push(detail.clone());
            report.counterexample = Some(Counterexample {
                params,
                trace,
                detail,
            });
            return;
        }
        report.checks += 1;
        if dp.ledger(&trace, &params).total != dp.cost {
            report
                .failures
                .push(format!("instance {i}: DP cost disagrees with its own schedule"));
            return;
        }
        for spec in probes {
            report.checks += 1;
            let (_, ledger) = simulate(spec, &trace, &params).unwrap();
            if ledger.total < dp.cost {
                let detail = format!("instance {i}: policy {spec} beat the offline optimum");
                report.failures.push(detail.clone());
                report.counterexample = Some(Counterexample {
                    params,
                    trace,
                    detail,
                });
                return;
            }
        }
    }
}

fn run_frames(report: &mut SuiteReport, budget: u64, master_seed: u64, horizon: usize) {
    for i in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, i));
        let params = random_params(&mut rng);
        let trace = random_trace(&mut rng, params.kappa(), horizon);
        report.instances += 1;

        let opt = opt_off(&trace, &params);
        let (rr_schedule, rr_ledger) = simulate(PolicySpec::Rr, &trace, &params).unwrap();
        let frames = decompose_frames(&trace, &opt.schedule, &rr_schedule, &params);
        report.checks += frames.frames.len() as u64 + 1;
        if !frames.passed() {
            let detail = format!("instance {i}: {}", frames.violations.join("; "));
            report.failures.push(detail.clone());
            report.counterexample = Some(Counterexample {
                params,
                trace,
                detail,
            });
            return;
        }
        // Whole-run guarantee implied by the frame bound.
        report.checks += 1;
        let ratio = competitive_ratio(rr_ledger.total, opt.cost);
        if !ratio.at_most(rho_rr_upper(&params)) {
            let detail = format!(
                "instance {i}: ratio {} exceeds the closed-form bound {}",
                ratio,
                rho_rr_upper(&params)
            );
            report.failures.push(detail.clone());
            report.counterexample = Some(Counterexample {
                params,
                trace,
                detail,
            });
            return;
        }
    }
}

fn run_structure(report: &mut SuiteReport, budget: u64, master_seed: u64, horizon: usize) {
    for i in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, i));
        let params = random_params(&mut rng);
        let trace = random_trace(&mut rng, params.kappa(), horizon);
        report.instances += 1;

        let opt = opt_off(&trace, &params);
        let structure = verify_opt_structure(&trace, &opt.schedule, &params);
        report.checks += structure.intervals.len().max(1) as u64;
        if !structure.passed() {
            let detail = format!("instance {i}: {}", structure.violations.join("; "));
            report.failures.push(detail.clone());
            report.counterexample = Some(Counterexample {
                params,
                trace,
                detail,
            });
            return;
        }
    }
}

fn run_bounds_consistency(report: &mut SuiteReport, budget: u64, master_seed: u64) {
    for i in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(master_seed, i));
        let params = random_params(&mut rng);
        report.instances += 1;
        report.checks += 1;
        if rho_rr_upper(&params) < rho_any_lower(&params) {
            report.failures.push(format!(
                "instance {i}: upper bound {} below lower bound {} at {}",
                rho_rr_upper(&params),
                rho_any_lower(&params),
                params
            ));
            return;
        }
    }
}

/// Run one named suite over `budget` random instances.
pub fn run_suite(suite: Suite, budget: u64, master_seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(suite);
    match suite {
        Suite::Equivalence => run_equivalence(&mut report, budget, master_seed, 500),
        Suite::Oracle => run_oracle(&mut report, budget, master_seed),
        Suite::Frames => run_frames(&mut report, budget, master_seed, 200),
        Suite::Structure => run_structure(&mut report, budget, master_seed, 200),
        Suite::BoundsConsistency => run_bounds_consistency(&mut report, budget, master_seed),
    }
    report
}

/// Empirical ratio of a policy against the offline optimum on one
/// instance.
pub fn policy_vs_opt(
    spec: PolicySpec,
    trace: &ArrivalTrace,
    params: &CostParams,
) -> CompetitiveRatio {
    let (_, ledger) = simulate(spec, trace, params).unwrap();
    let opt = opt_off(trace, params);
    competitive_ratio(ledger.total, opt.cost)
}
