//! Run every policy on one synthetic workload and compare against the
//! offline optimum.
//!
//! ```sh
//! cargo run --example simulate_policies
//! ```

use retrorent::arrivals::{gen_iid, IidDistribution};
use retrorent::bounds::{opt_on_lower, rho_rr_upper};
use retrorent::cost::{competitive_ratio, display_exact, parse_cost, CostParams};
use retrorent::offline::opt_off;
use retrorent::policy::{simulate, PolicySpec};
use num_traits::ToPrimitive;

fn main() {
    let params = CostParams::new(
        parse_cost("4").unwrap(),
        parse_cost("0.35").unwrap(),
        1,
    )
    .unwrap();
    let dist = IidDistribution::bernoulli(parse_cost("0.4").unwrap()).unwrap();
    let horizon = 20_000;
    let trace = gen_iid(&dist, horizon, 2024);

    let opt = opt_off(&trace, &params);
    let stats = dist.stats(params.kappa());
    println!(
        "workload: {dist} over {horizon} slots, {params}\n\
         offline optimum: {} per slot; online lower bound: {} per slot\n",
        display_exact(&(opt.cost / parse_cost(&horizon.to_string()).unwrap())),
        display_exact(&opt_on_lower(&params, &stats)),
    );

    println!("{:>8} {:>14} {:>10} {:>8} {:>12}", "policy", "cost/slot", "fetches", "ratio", "rho_upper");
    for spec in [
        PolicySpec::Rr,
        PolicySpec::EfficientRr,
        PolicySpec::Ttl { ttl: 3 },
        PolicySpec::Always,
        PolicySpec::Never,
    ] {
        let (_, ledger) = simulate(spec, &trace, &params).unwrap();
        let ratio = competitive_ratio(ledger.total, opt.cost);
        println!(
            "{:>8} {:>14.6} {:>10} {:>8.4} {:>12}",
            spec.to_string(),
            ledger.cost_per_slot().to_f64().unwrap(),
            ledger.num_fetches,
            ratio.as_f64(),
            if spec == PolicySpec::Rr || spec == PolicySpec::EfficientRr {
                format!("{:.4}", rho_rr_upper(&params).to_f64().unwrap())
            } else {
                String::from("-")
            },
        );
    }
}
