//! Probe deterministic policies with the adversarial request construction
//! and compare the achieved cost ratios against the universal lower bound.
//!
//! ```sh
//! cargo run --example adversary_attack
//! ```

use retrorent::arrivals::{adversary_probe, adversary_ttl};
use retrorent::bounds::{rho_any_lower, rho_ttl_lower};
use retrorent::cost::{competitive_ratio, display_exact, parse_cost, CostParams};
use retrorent::policy::{simulate, PolicySpec};

fn main() {
    let params = CostParams::new(
        parse_cost("2").unwrap(),
        parse_cost("0.5").unwrap(),
        1,
    )
    .unwrap();
    let bound = rho_any_lower(&params);
    println!(
        "{params}; every deterministic online policy has ratio >= {}\n",
        display_exact(&bound)
    );

    for spec in [
        PolicySpec::Rr,
        PolicySpec::EfficientRr,
        PolicySpec::Ttl { ttl: 2 },
        PolicySpec::Always,
        PolicySpec::Never,
    ] {
        let report = adversary_probe(spec, &params, 10_000);
        println!(
            "{:>8}: cost {} vs alternative {} -> ratio {}{}",
            spec.to_string(),
            display_exact(&report.policy_cost),
            display_exact(&report.alt_cost),
            report.ratio,
            if report.non_reactive {
                "  (never reacted within the cap)"
            } else {
                ""
            }
        );
    }

    // The TTL-specific attack family.
    let ttl = 2;
    println!(
        "\nTTL(L={ttl}) attacks; closed-form lower bound {}:",
        display_exact(&rho_ttl_lower(&params, ttl))
    );
    for attack in adversary_ttl(&params, ttl, 4) {
        let (_, ledger) = simulate(PolicySpec::Ttl { ttl }, &attack.trace, &params).unwrap();
        let ratio = competitive_ratio(ledger.total, attack.comparison_cost);
        println!(
            "  {:?}: ttl cost {} vs comparison {} -> ratio {}",
            attack.kind,
            display_exact(&ledger.total),
            display_exact(&attack.comparison_cost),
            ratio
        );
    }
}
