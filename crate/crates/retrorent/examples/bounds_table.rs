//! Print the closed-form bound table for a configuration, including the
//! stochastic bounds for a Bernoulli workload.
//!
//! ```sh
//! cargo run --example bounds_table
//! ```

use num_traits::ToPrimitive;
use retrorent::arrivals::IidDistribution;
use retrorent::bounds::{
    opt_on_lower, rho_any_lower, rho_rr_upper, rho_ttl_lower, sigma_rr_upper, sigma_ttl_lower,
    ttl_delta,
};
use retrorent::cost::{display_exact, parse_cost, CostParams};

fn main() {
    let params = CostParams::new(
        parse_cost("4").unwrap(),
        parse_cost("0.35").unwrap(),
        1,
    )
    .unwrap();
    let ttl = 3;
    let horizon = 100_000;
    let dist = IidDistribution::bernoulli(parse_cost("0.25").unwrap()).unwrap();
    let stats = dist.stats(params.kappa());

    println!("{params}, arrivals {dist}, horizon {horizon}");
    println!(
        "rho_rr_upper          = {}",
        display_exact(&rho_rr_upper(&params))
    );
    println!(
        "rho_any_lower         = {}",
        display_exact(&rho_any_lower(&params))
    );
    println!(
        "rho_ttl_lower (L={ttl})   = {}",
        display_exact(&rho_ttl_lower(&params, ttl))
    );
    println!(
        "opt_on_lower per slot = {}",
        display_exact(&opt_on_lower(&params, &stats))
    );
    println!(
        "ttl_delta (t=20)      = {}",
        display_exact(&ttl_delta(&params, &stats, ttl, 20).unwrap())
    );
    println!(
        "sigma_ttl_lower       = {}",
        display_exact(&sigma_ttl_lower(&params, &stats, ttl, horizon).unwrap())
    );
    match sigma_rr_upper(&params, &stats, horizon) {
        Ok(bound) => println!(
            "sigma_rr_upper        = {:.6} (lambda = {:.4}{})",
            bound.value,
            bound.lambda.to_f64().unwrap(),
            if bound.vacuous { ", vacuous" } else { "" }
        ),
        Err(e) => println!("sigma_rr_upper        : {e}"),
    }
}
