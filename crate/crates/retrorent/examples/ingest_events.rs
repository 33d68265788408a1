//! Ingest a delimited request-event file into per-slot counts, auto-tuning
//! the slot duration so no slot carries more than one request, then run
//! the policies on the resulting trace.
//!
//! Writes a small synthetic event file to a temp directory first, so the
//! example is self-contained.
//!
//! ```sh
//! cargo run --example ingest_events
//! ```

use num_traits::ToPrimitive;
use retrorent::arrivals::{auto_tune_slot_duration, ingest_trace, ColumnSel, TraceIngestConfig};
use retrorent::cost::{parse_cost, CostParams};
use retrorent::offline::opt_off;
use retrorent::policy::{simulate, PolicySpec};

fn main() {
    // timestamp,job — two interleaved request streams.
    let mut rows = String::from("time,job\n");
    let mut t = 0.0;
    for i in 0..400 {
        t += 0.13 + (i % 7) as f64 * 0.21;
        let job = if i % 3 == 0 { "job1" } else { "job0" };
        rows.push_str(&format!("{t:.3},{job}\n"));
    }
    let dir = std::env::temp_dir();
    let path = dir.join("retrorent_example_events.csv");
    std::fs::write(&path, rows).expect("write events");

    let mut cfg = TraceIngestConfig {
        path: path.clone(),
        timestamp_column: ColumnSel::Name("time".into()),
        slot_duration: 1.0,
        filter: Some("job0".into()),
        filter_column: Some(ColumnSel::Name("job".into())),
    };
    cfg.slot_duration = auto_tune_slot_duration(&cfg).expect("auto-tune");
    let report = ingest_trace(&cfg).expect("ingest");
    println!(
        "ingested {} job0 events into {} slots of {:.4} time units (max {} per slot)",
        report.events,
        report.trace.horizon(),
        report.slot_duration,
        report.trace.counts().iter().max().unwrap_or(&0)
    );

    let params = CostParams::new(
        parse_cost("10").unwrap(),
        parse_cost("0.45").unwrap(),
        1,
    )
    .unwrap();
    let opt = opt_off(&report.trace, &params);
    println!("offline optimum: {:.5} per slot", (opt.cost
        / parse_cost(&report.trace.horizon().to_string()).unwrap())
    .to_f64()
    .unwrap());
    for spec in [PolicySpec::EfficientRr, PolicySpec::Ttl { ttl: 3 }, PolicySpec::Never] {
        let (_, ledger) = simulate(spec, &report.trace, &params).unwrap();
        println!(
            "{:>8}: {:.5} per slot, {} fetches",
            spec.to_string(),
            ledger.cost_per_slot().to_f64().unwrap(),
            ledger.num_fetches
        );
    }
    let _ = std::fs::remove_file(path);
}
