//! Sweep the storage (rent) cost and emit the comparison CSV used for
//! cost-versus-c plots: retro-renting, TTL, the offline optimum, and the
//! online lower bound at every swept point.
//!
//! ```sh
//! cargo run --release --example storage_cost_sweep > sweep.csv
//! ```

use retrorent::experiment::{
    run_experiment, standard_notes, write_csv, ExperimentConfig, SweepAxis,
};

fn main() {
    let mut config = ExperimentConfig::default();
    config.apply("policies", "err,ttl:3,never").unwrap();
    config.apply("M", "4").unwrap();
    config.apply("kappa", "1").unwrap();
    config.apply("arrival", "bernoulli:0.4").unwrap();
    config.apply("horizon", "25000").unwrap();
    config.apply("master_seed", "42").unwrap();
    config.sweep = Some(SweepAxis::parse("c:0:0.95:20").unwrap());

    let rows = run_experiment(&config).expect("sweep");
    let mut stdout = std::io::stdout();
    write_csv(&rows, &standard_notes(&config), &mut stdout).expect("csv");
}
