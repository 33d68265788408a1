//! Decompose a run into frames at the offline fetch slots and show how the
//! online cached intervals weave around the offline ones, with the
//! per-frame cost gap.
//!
//! ```sh
//! cargo run --example frame_decomposition
//! ```

use retrorent::arrivals::gen_bursty;
use retrorent::cost::{display_exact, parse_cost, CostParams};
use retrorent::offline::{decompose_frames, opt_off, verify_opt_structure};
use retrorent::policy::{simulate, PolicySpec};

fn main() {
    let params = CostParams::new(
        parse_cost("3").unwrap(),
        parse_cost("0.5").unwrap(),
        2,
    )
    .unwrap();
    let trace = gen_bursty(3, 120, 7);

    let opt = opt_off(&trace, &params);
    let (rr_schedule, rr_ledger) = simulate(PolicySpec::Rr, &trace, &params).unwrap();
    println!(
        "{params}, bursty trace of {} slots; offline cost {}, online cost {}\n",
        trace.horizon(),
        display_exact(&opt.cost),
        display_exact(&rr_ledger.total)
    );

    let report = decompose_frames(&trace, &opt.schedule, &rr_schedule, &params);
    for frame in &report.frames {
        println!(
            "frame {} [{:>3}, {:>3}] offline fetch {:?} evict {:?} | online fetch {:?} evict {:?} | gap {} ({})",
            frame.index,
            frame.start,
            frame.end,
            frame.opt_fetch_slot,
            frame.opt_evict_slot,
            frame.rr_fetch_slot,
            frame.rr_evict_slot,
            display_exact(&(frame.rr_cost - frame.opt_cost)),
            if frame.gap_ok { "ok" } else { "VIOLATION" },
        );
    }
    println!(
        "\nframe violations: {}",
        if report.passed() {
            "none".to_string()
        } else {
            report.violations.join("; ")
        }
    );

    let structure = verify_opt_structure(&trace, &opt.schedule, &params);
    println!(
        "offline cached intervals: {} checked, violations: {}",
        structure.intervals.len(),
        if structure.passed() {
            "none".to_string()
        } else {
            structure.violations.join("; ")
        }
    );
}
