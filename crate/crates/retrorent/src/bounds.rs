//! Closed-form performance bounds, used to cross-check simulation output.
//!
//! Deterministic (competitive-ratio) bounds are exact rationals:
//!
//! * [`rho_rr_upper`] — retro-renting is at most
//!   `3 + (kappa - c)/M - 2c/kappa` times the offline optimum.
//! * [`rho_any_lower`] — no deterministic online policy beats
//!   `1 + kappa/(c + M)` when `kappa >= c(c + M)/M`, nor `kappa/c`
//!   otherwise.
//! * [`rho_ttl_lower`] — the TTL policy with timer `L` is at least
//!   `1 + Lc + M` when `kappa < M + c`, else
//!   `(kappa + Lc + M)/(c + min(Lc, M))` times the offline optimum.
//!
//! Stochastic bounds mix a concentration term with exact prefactors. The
//! ceiling arguments (window lengths) are evaluated in exact rational
//! arithmetic — they routinely land on integer boundaries where floating
//! point would flip the ceiling — and only the exponentials are floating
//! point, with a documented 1e-12 relative tolerance:
//!
//! * [`f_bound`] / [`g_bound`] — per-slot excess of retro-renting over the
//!   statistics-aware online optimum, for `mu > c` and `mu < c`.
//! * [`sigma_rr_upper`] — horizon-`T` expected-cost ratio bound for
//!   retro-renting, minimized over the free parameter `lambda > 1` on a
//!   log-spaced grid with one refinement pass.
//! * [`opt_on_lower`] — per-slot cost of any online policy is at least
//!   `min(c + nu - mu, nu)`.
//! * [`ttl_delta`] / [`sigma_ttl_lower`] — exact per-slot excess of TTL
//!   (an equality, not just a bound) and the resulting ratio lower bound,
//!   for `mu < c`.

use crate::arrivals::ArrivalStats;
use crate::cost::{Cost, CostParams};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("bound requires mu != c (at mu = c retro-renting matches the online optimum)")]
    MuEqualsRent,
    #[error("bound requires {0}")]
    WrongRegime(&'static str),
    #[error("no grid lambda satisfies horizon > ceil(lambda*M/|mu-c|) at T={0}")]
    NoFeasibleLambda(u64),
    #[error("exact power overflow at exponent {0}; use smaller ttl or p0 denominator")]
    ExactOverflow(u64),
    #[error("slot index must be >= 1")]
    SlotIndexZero,
    #[error("horizon must be >= 2")]
    HorizonTooSmall,
    #[error("sigma lower bound needs nu > 0")]
    ZeroArrivalRate,
}

/// Competitive-ratio upper bound for retro-renting:
/// `3 + (kappa - c)/M - 2c/kappa`.
pub fn rho_rr_upper(params: &CostParams) -> Cost {
    let kappa = params.kappa_cost();
    let c = params.rent_cost();
    let m = params.fetch_cost();
    Cost::from_integer(3) + (kappa - c) / m - Cost::from_integer(2) * c / kappa
}

/// Competitive-ratio lower bound for every deterministic online policy.
pub fn rho_any_lower(params: &CostParams) -> Cost {
    let kappa = params.kappa_cost();
    let c = params.rent_cost();
    let m = params.fetch_cost();
    // kappa >= c(c + M)/M, compared multiplied through by M > 0.
    if kappa * m >= c * (c + m) {
        Cost::from_integer(1) + kappa / (c + m)
    } else {
        kappa / c
    }
}

/// Competitive-ratio lower bound for the TTL policy with timer `ttl >= 1`.
pub fn rho_ttl_lower(params: &CostParams, ttl: u32) -> Cost {
    assert!(ttl >= 1, "TTL value must be >= 1");
    let kappa = params.kappa_cost();
    let c = params.rent_cost();
    let m = params.fetch_cost();
    let lc = Cost::from_integer(ttl as i128) * c;
    if kappa < m + c {
        Cost::from_integer(1) + lc + m
    } else {
        (kappa + lc + m) / (c + lc.min(m))
    }
}

/// Per-slot cost lower bound for any online policy under i.i.d. arrivals:
/// `min(c + nu - mu, nu)`.
pub fn opt_on_lower(params: &CostParams, stats: &ArrivalStats) -> Cost {
    let cached = params.rent_cost() + stats.nu - stats.mu;
    cached.min(stats.nu)
}

/// Exact ceiling of `lambda * M / gap` for `gap > 0`.
fn ceil_window(lambda: Cost, m: Cost, gap: Cost) -> i128 {
    let ratio = lambda * m / gap;
    ratio.ceil().to_integer()
}

fn exp_of(arg: Cost) -> f64 {
    arg.to_f64().map(f64::exp).unwrap_or(f64::NAN)
}

/// Concentration bound `f` for the `mu > c` regime. Requires `c > 0` and
/// `lambda > 1`.
pub fn f_bound(
    params: &CostParams,
    stats: &ArrivalStats,
    lambda: Cost,
) -> Result<f64, BoundsError> {
    let c = params.rent_cost();
    let m = params.fetch_cost();
    let mu = stats.mu;
    if mu == c {
        return Err(BoundsError::MuEqualsRent);
    }
    if mu < c {
        return Err(BoundsError::WrongRegime("mu > c"));
    }
    if c.is_zero() {
        return Err(BoundsError::WrongRegime("c > 0"));
    }
    if lambda <= Cost::from_integer(1) {
        return Err(BoundsError::WrongRegime("lambda > 1"));
    }
    let kappa_sq = params.kappa_cost() * params.kappa_cost();
    let gap = mu - c;
    let window = ceil_window(lambda, m, gap) as f64;
    let two = Cost::from_integer(2);
    let e_run = exp_of(-(two * gap * gap * (m / c) / kappa_sq));
    let e_step = exp_of(-(two * gap * gap / kappa_sq));
    let lam_m1 = lambda - Cost::from_integer(1);
    let e_miss = exp_of(-(two * lam_m1 * lam_m1 * m * gap / (lambda * kappa_sq)));
    let prefactor = (m + mu).to_f64().unwrap();
    Ok(prefactor * (window * e_run / (1.0 - e_step) + e_miss))
}

/// Concentration bound `g` for the `mu < c` regime. Requires `lambda > 1`
/// (`kappa > c` holds by construction of the parameters).
pub fn g_bound(
    params: &CostParams,
    stats: &ArrivalStats,
    lambda: Cost,
) -> Result<f64, BoundsError> {
    let c = params.rent_cost();
    let m = params.fetch_cost();
    let mu = stats.mu;
    if mu == c {
        return Err(BoundsError::MuEqualsRent);
    }
    if mu > c {
        return Err(BoundsError::WrongRegime("mu < c"));
    }
    if lambda <= Cost::from_integer(1) {
        return Err(BoundsError::WrongRegime("lambda > 1"));
    }
    let kappa = params.kappa_cost();
    let kappa_sq = kappa * kappa;
    let gap = c - mu;
    let window = ceil_window(lambda, m, gap) as f64;
    let two = Cost::from_integer(2);
    let e_run = exp_of(-(two * gap * gap * (m / (kappa - c)) / kappa_sq));
    let e_step = exp_of(-(two * gap * gap / kappa_sq));
    let lam_m1 = lambda - Cost::from_integer(1);
    let e_miss = exp_of(-(two * lam_m1 * lam_m1 * gap * m / (lambda * kappa_sq)));
    let prefactor = (c + m).to_f64().unwrap();
    Ok(prefactor * (2.0 * window * e_run / (1.0 - e_step) + e_miss))
}

/// Expected-cost ratio bound for retro-renting at one `lambda`. Feasible
/// only when the horizon exceeds the ceiling window.
pub fn sigma_rr_upper_at(
    params: &CostParams,
    stats: &ArrivalStats,
    horizon: u64,
    lambda: Cost,
) -> Result<f64, BoundsError> {
    let c = params.rent_cost();
    let m = params.fetch_cost();
    let (mu, nu) = (stats.mu, stats.nu);
    if mu == c {
        return Err(BoundsError::MuEqualsRent);
    }
    let gap = if mu > c { mu - c } else { c - mu };
    let window = ceil_window(lambda, m, gap);
    if (horizon as i128) <= window {
        return Err(BoundsError::NoFeasibleLambda(horizon));
    }
    let t = horizon as f64;
    let window_f = window as f64;
    if mu > c {
        let concentration = f_bound(params, stats, lambda)?;
        let denom = (c + nu - mu).to_f64().unwrap();
        let early = ((m + c + nu) / (c + nu - mu) + Cost::from_integer(1))
            .to_f64()
            .unwrap();
        Ok(1.0 - window_f * early / t + (t - window_f) * concentration / (t * denom))
    } else {
        if nu.is_zero() {
            return Err(BoundsError::ZeroArrivalRate);
        }
        let concentration = g_bound(params, stats, lambda)?;
        let denom = nu.to_f64().unwrap();
        let early = ((m + c + nu) / nu + Cost::from_integer(1)).to_f64().unwrap();
        Ok(1.0 - window_f * early / t + (t - window_f) * concentration / (t * denom))
    }
}

/// Result of the grid-minimized sigma bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaBound {
    pub value: f64,
    pub lambda: Cost,
    /// The raw expression dipped below 1, which no cost ratio can do: the
    /// bound carries no information at this horizon.
    pub vacuous: bool,
}

const LAMBDA_GRID_POINTS: u32 = 256;
const LAMBDA_GRID_MAX: f64 = 64.0;
const LAMBDA_QUANTUM: i128 = 1_000_000;

fn quantized_lambda(x: f64) -> Cost {
    let q = Ratio::new((x * LAMBDA_QUANTUM as f64).round() as i128, LAMBDA_QUANTUM);
    let floor = Ratio::new(LAMBDA_QUANTUM + 1, LAMBDA_QUANTUM);
    q.max(floor)
}

/// Minimize the sigma expression over a log-spaced lambda grid on
/// `(1, 64]` (256 points, one linear refinement pass around the argmin).
pub fn sigma_rr_upper(
    params: &CostParams,
    stats: &ArrivalStats,
    horizon: u64,
) -> Result<SigmaBound, BoundsError> {
    let mut grid: Vec<Cost> = (1..=LAMBDA_GRID_POINTS)
        .map(|j| quantized_lambda(LAMBDA_GRID_MAX.powf(j as f64 / LAMBDA_GRID_POINTS as f64)))
        .collect();

    let scan = |grid: &[Cost],
                best: &mut Option<(f64, Cost)>|
     -> Result<(), BoundsError> {
        for &lambda in grid {
            match sigma_rr_upper_at(params, stats, horizon, lambda) {
                Ok(value) => {
                    if best.is_none_or(|(v, _)| value < v) {
                        *best = Some((value, lambda));
                    }
                }
                Err(BoundsError::NoFeasibleLambda(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(())
    };

    let mut best: Option<(f64, Cost)> = None;
    scan(&grid, &mut best)?;
    let Some((_, coarse_lambda)) = best else {
        return Err(BoundsError::NoFeasibleLambda(horizon));
    };

    // One refinement pass: linear grid between the coarse argmin's
    // neighbors.
    let coarse = coarse_lambda.to_f64().unwrap();
    let step = LAMBDA_GRID_MAX.powf(1.0 / LAMBDA_GRID_POINTS as f64);
    let lo = (coarse / step).max(1.0);
    let hi = (coarse * step).min(LAMBDA_GRID_MAX);
    grid = (0..=64)
        .map(|j| quantized_lambda(lo + (hi - lo) * j as f64 / 64.0))
        .collect();
    scan(&grid, &mut best)?;

    let (value, lambda) = best.unwrap();
    Ok(SigmaBound {
        value,
        lambda,
        vacuous: value < 1.0,
    })
}

fn checked_pow(base: Cost, exp: u64) -> Result<Cost, BoundsError> {
    let mut result = Cost::from_integer(1);
    for _ in 0..exp {
        let numer = result
            .numer()
            .checked_mul(*base.numer())
            .ok_or(BoundsError::ExactOverflow(exp))?;
        let denom = result
            .denom()
            .checked_mul(*base.denom())
            .ok_or(BoundsError::ExactOverflow(exp))?;
        result = Ratio::new(numer, denom);
    }
    Ok(result)
}

/// Exact per-slot excess of TTL over the online-optimum lower bound in slot
/// `t` (an equality under i.i.d. arrivals with `mu < c`):
/// `p0^min(t-1, L) (1 - p0) M + (1 - p0^min(t-1, L)) (c - mu)`.
pub fn ttl_delta(
    params: &CostParams,
    stats: &ArrivalStats,
    ttl: u32,
    t: u64,
) -> Result<Cost, BoundsError> {
    assert!(ttl >= 1, "TTL value must be >= 1");
    if t == 0 {
        return Err(BoundsError::SlotIndexZero);
    }
    let c = params.rent_cost();
    if stats.mu >= c {
        return Err(BoundsError::WrongRegime("mu < c"));
    }
    let exponent = (t - 1).min(ttl as u64);
    let decayed = checked_pow(stats.p0, exponent)?;
    let one = Cost::from_integer(1);
    Ok(decayed * (one - stats.p0) * params.fetch_cost() + (one - decayed) * (c - stats.mu))
}

/// Horizon-`T` expected-cost ratio lower bound for TTL under i.i.d.
/// arrivals with `mu < c`:
/// `(1 - 1/T) min{(1 - p0)(p0 M + c - mu), c - mu} / nu`.
pub fn sigma_ttl_lower(
    params: &CostParams,
    stats: &ArrivalStats,
    ttl: u32,
    horizon: u64,
) -> Result<Cost, BoundsError> {
    assert!(ttl >= 1, "TTL value must be >= 1");
    if horizon < 2 {
        return Err(BoundsError::HorizonTooSmall);
    }
    let c = params.rent_cost();
    if stats.mu >= c {
        return Err(BoundsError::WrongRegime("mu < c"));
    }
    if stats.nu.is_zero() {
        return Err(BoundsError::ZeroArrivalRate);
    }
    let one = Cost::from_integer(1);
    let gap = c - stats.mu;
    let restart = (one - stats.p0) * (stats.p0 * params.fetch_cost() + gap);
    let horizon_factor = one - Ratio::new(1, horizon as i128);
    Ok(horizon_factor * restart.min(gap) / stats.nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrivals::IidDistribution;
    use crate::cost::cost;

    fn params(m: (i128, i128), c: (i128, i128), kappa: u32) -> CostParams {
        CostParams::new(cost(m.0, m.1), cost(c.0, c.1), kappa).unwrap()
    }

    fn bernoulli_stats(p: (i128, i128), kappa: u32) -> ArrivalStats {
        IidDistribution::bernoulli(cost(p.0, p.1)).unwrap().stats(kappa)
    }

    #[test]
    fn rho_rr_upper_values() {
        assert_eq!(rho_rr_upper(&params((2, 1), (1, 2), 1)), cost(9, 4));
        assert_eq!(rho_rr_upper(&params((4, 1), (1, 1), 2)), cost(9, 4));
        // c = 0, large M: approaches 3 from above.
        let big = rho_rr_upper(&params((1_000_000, 1), (0, 1), 1));
        assert!(big > cost(3, 1) && big < cost(3_000_003, 1_000_000));
    }

    #[test]
    fn rho_any_lower_values() {
        // Branch check: kappa = 1 >= (1/2)(5/2)/2 = 5/8.
        assert_eq!(rho_any_lower(&params((2, 1), (1, 2), 1)), cost(7, 5));
        // c = 0 always takes the first branch: 1 + kappa/M.
        assert_eq!(rho_any_lower(&params((4, 1), (0, 1), 1)), cost(5, 4));
        // Second branch: kappa M < c(c + M).
        let p = params((3, 2), (9, 10), 1);
        assert!(p.kappa_cost() * p.fetch_cost() < p.rent_cost() * (p.rent_cost() + p.fetch_cost()));
        assert_eq!(rho_any_lower(&p), cost(10, 9));
    }

    #[test]
    fn rho_ttl_lower_values() {
        // kappa < M + c: 1 + Lc + M.
        assert_eq!(rho_ttl_lower(&params((2, 1), (1, 2), 1), 2), cost(4, 1));
        // kappa >= M + c with min{Lc, M} = Lc = 1.
        assert_eq!(rho_ttl_lower(&params((2, 1), (1, 2), 4), 2), cost(14, 3));
        // Unbounded in L on the first branch.
        let p = params((2, 1), (1, 2), 1);
        assert!(rho_ttl_lower(&p, 1000) > rho_ttl_lower(&p, 10));
    }

    #[test]
    fn opt_on_lower_values() {
        let p = params((4, 1), (7, 20), 1);
        assert_eq!(opt_on_lower(&p, &bernoulli_stats((2, 5), 1)), cost(7, 20));
        // nu = mu and c < nu: the cached branch c wins.
        let q = params((4, 1), (1, 10), 1);
        assert_eq!(opt_on_lower(&q, &bernoulli_stats((2, 5), 1)), cost(1, 10));
        // No arrivals: zero.
        assert_eq!(
            opt_on_lower(&p, &bernoulli_stats((0, 1), 1)),
            Cost::from_integer(0)
        );
    }

    #[test]
    fn f_bound_matches_high_precision_oracle() {
        // Frozen from an independent 40-digit evaluation of the same
        // expression with the ceiling taken in exact rationals
        // (kappa=1, lambda=2, M=4, mu=2/5, c=7/20; ceiling = 160).
        let p = params((4, 1), (7, 20), 1);
        let stats = bernoulli_stats((2, 5), 1);
        let f = f_bound(&p, &stats, cost(2, 1)).unwrap();
        let oracle = 133316.17556164483;
        assert!((f - oracle).abs() / oracle < 1e-12, "f = {f}");
    }

    #[test]
    fn g_bound_matches_high_precision_oracle() {
        // kappa=1, lambda=2, M=4, mu=1/4, c=7/20; exact ceiling = 80 (a
        // float ceiling gives 81 here, which is why the window is rational).
        let p = params((4, 1), (7, 20), 1);
        let stats = bernoulli_stats((1, 4), 1);
        let g = g_bound(&p, &stats, cost(2, 1)).unwrap();
        let oracle = 31_081.650_079_086_51;
        assert!((g - oracle).abs() / oracle < 1e-12, "g = {g}");
    }

    #[test]
    fn f_bound_domain_errors() {
        let p = params((4, 1), (7, 20), 1);
        assert_eq!(
            f_bound(&p, &bernoulli_stats((7, 20), 1), cost(2, 1)),
            Err(BoundsError::MuEqualsRent)
        );
        assert!(f_bound(&p, &bernoulli_stats((1, 4), 1), cost(2, 1)).is_err());
        assert!(f_bound(&p, &bernoulli_stats((2, 5), 1), cost(1, 1)).is_err());
        let zero_rent = params((4, 1), (0, 1), 1);
        assert_eq!(
            f_bound(&zero_rent, &bernoulli_stats((2, 5), 1), cost(2, 1)),
            Err(BoundsError::WrongRegime("c > 0"))
        );
    }

    #[test]
    fn f_bound_blows_up_as_gap_closes() {
        let stats = bernoulli_stats((2, 5), 1);
        let lambda = cost(2, 1);
        let wide = f_bound(&params((4, 1), (1, 10), 1), &stats, lambda).unwrap();
        let narrow = f_bound(&params((4, 1), (39, 100), 1), &stats, lambda).unwrap();
        assert!(narrow > wide);
        assert!(narrow > 1e6);
    }

    #[test]
    fn f_and_g_decay_in_fetch_cost_at_strong_gap() {
        // mu = 3/4, c = 1/4 (and mirrored for g): the exponential decay in
        // M dominates the linear window growth over doubling M.
        let stats_f = bernoulli_stats((3, 4), 1);
        let stats_g = bernoulli_stats((1, 4), 1);
        let lambda = cost(2, 1);
        let mut prev_f = f64::INFINITY;
        let mut prev_g = f64::INFINITY;
        for m in [2i128, 4, 8, 16, 32, 64] {
            let pf = params((m, 1), (1, 4), 1);
            let f = f_bound(&pf, &stats_f, lambda).unwrap();
            assert!(f < prev_f, "f not decreasing at M={m}");
            prev_f = f;
            let pg = params((m, 1), (3, 4), 1);
            let g = g_bound(&pg, &stats_g, lambda).unwrap();
            assert!(g < prev_g, "g not decreasing at M={m}");
            prev_g = g;
        }
        // And f vanishes for large M (both exponentials beat the window).
        let huge = f_bound(&params((10_000, 1), (7, 20), 1), &bernoulli_stats((2, 5), 1), lambda)
            .unwrap();
        assert!(huge < 1e-6);
        let m2 = f_bound(&params((100, 1), (7, 20), 1), &bernoulli_stats((2, 5), 1), lambda)
            .unwrap();
        let m3 = f_bound(&params((1_000, 1), (7, 20), 1), &bernoulli_stats((2, 5), 1), lambda)
            .unwrap();
        assert!(m2 > m3 && m3 > huge);
    }

    #[test]
    fn sigma_rr_at_fixed_lambda_matches_oracle() {
        // mu > c case at lambda = 2, T = 10^4 (frozen from the independent
        // evaluation); and the mu < c case at T = 10^5.
        let p = params((4, 1), (7, 20), 1);
        let above = sigma_rr_upper_at(&p, &bernoulli_stats((2, 5), 1), 10_000, cost(2, 1)).unwrap();
        let oracle_above = 374809.67186473862;
        assert!((above - oracle_above).abs() / oracle_above < 1e-12);
        let below =
            sigma_rr_upper_at(&p, &bernoulli_stats((1, 4), 1), 100_000, cost(2, 1)).unwrap();
        let oracle_below = 124228.12351609297;
        assert!((below - oracle_below).abs() / oracle_below < 1e-12);
    }

    #[test]
    fn sigma_grid_min_is_no_worse_than_any_probe_lambda() {
        let p = params((4, 1), (7, 20), 1);
        let stats = bernoulli_stats((2, 5), 1);
        let bound = sigma_rr_upper(&p, &stats, 10_000).unwrap();
        for lam in [(3, 2), (2, 1), (4, 1), (16, 1)] {
            let at = sigma_rr_upper_at(&p, &stats, 10_000, cost(lam.0, lam.1)).unwrap();
            assert!(bound.value <= at + 1e-9);
        }
        assert!(bound.lambda > Cost::from_integer(1));
    }

    #[test]
    fn sigma_infeasible_horizon() {
        // Smallest window is ceil(lambda M / gap) >= 81 for every lambda
        // in the grid (gap = 1/20, M = 4), so T = 50 admits no feasible
        // lambda.
        let p = params((4, 1), (7, 20), 1);
        let stats = bernoulli_stats((2, 5), 1);
        assert!(matches!(
            sigma_rr_upper(&p, &stats, 50),
            Err(BoundsError::NoFeasibleLambda(50))
        ));
    }

    #[test]
    fn ttl_delta_frozen_value() {
        // Bernoulli p=1/4, c=7/20, M=4, L=3, t>=4:
        // (3/4)^3 (1/4) 4 + (1 - (3/4)^3)(1/10) = 307/640.
        let p = params((4, 1), (7, 20), 1);
        let stats = bernoulli_stats((1, 4), 1);
        assert_eq!(ttl_delta(&p, &stats, 3, 10).unwrap(), cost(307, 640));
        assert_eq!(ttl_delta(&p, &stats, 3, 20).unwrap(), cost(307, 640));
        // t = 1: exponent zero, delta = (1 - p0) M.
        assert_eq!(ttl_delta(&p, &stats, 3, 1).unwrap(), cost(1, 1));
        // Degenerate no-arrival distribution: delta vanishes.
        let silent = bernoulli_stats((0, 1), 1);
        assert_eq!(
            ttl_delta(&p, &silent, 3, 5).unwrap(),
            Cost::from_integer(0)
        );
        // mu >= c is out of regime.
        assert!(ttl_delta(&p, &bernoulli_stats((2, 5), 1), 3, 5).is_err());
    }

    #[test]
    fn sigma_ttl_lower_frozen_value() {
        // p=1/4, c=7/20, M=4, T=100: (99/100) * min{31/40, 1/10} / (1/4)
        // = 99/250.
        let p = params((4, 1), (7, 20), 1);
        let stats = bernoulli_stats((1, 4), 1);
        assert_eq!(
            sigma_ttl_lower(&p, &stats, 3, 100).unwrap(),
            cost(99, 250)
        );
        assert!(sigma_ttl_lower(&p, &stats, 3, 1).is_err());
        // Non-negative whenever mu < c, across the low-rate regime.
        for p_num in 1..=6i128 {
            for c_num in (p_num + 1)..=19 {
                let params = params((4, 1), (c_num, 20), 1);
                let stats = bernoulli_stats((p_num, 20), 1);
                for ttl in [1, 3, 9] {
                    assert!(
                        sigma_ttl_lower(&params, &stats, ttl, 2).unwrap()
                            >= Cost::from_integer(0)
                    );
                }
            }
        }
    }

    #[test]
    fn deterministic_bounds_are_consistent() {
        for (m, c, kappa) in [
            ((2i128, 1i128), (1i128, 2i128), 1u32),
            ((3, 2), (9, 10), 1),
            ((32, 1), (7, 1), 8),
            ((8, 1), (0, 1), 4),
        ] {
            let p = params(m, c, kappa);
            assert!(
                rho_rr_upper(&p) >= rho_any_lower(&p),
                "inconsistent bounds at {p}"
            );
        }
    }
}
