// Tie-heavy stress: integer M, c in multiples of 1/2, small kappa.
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use retrorent::arrivals::gen_bursty;
use retrorent::cost::{cost, CostParams};
use retrorent::offline::{decompose_frames, opt_off, verify_opt_structure};
use retrorent::policy::{simulate, PolicySpec};
use retrorent::verify::mix_seed;

#[test]
fn tie_heavy_frames_stress() {
    let mut violations = 0;
    for i in 0..30_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(0x7135, i));
        let kappa: u32 = rng.gen_range(1..=4);
        let m: i128 = rng.gen_range(2..=8);
        let c_half: i128 = rng.gen_range(0..(kappa as i128 * 2));
        let params = CostParams::new(cost(m, 1), cost(c_half, 2), kappa).unwrap();
        let trace = gen_bursty(kappa as u64 + 1, rng.gen_range(0..=120), rng.gen());
        let opt = opt_off(&trace, &params);
        let (rr, _) = simulate(PolicySpec::Rr, &trace, &params).unwrap();
        let (err, _) = simulate(PolicySpec::EfficientRr, &trace, &params).unwrap();
        assert_eq!(rr, err, "equivalence broke at instance {i} {params}");
        let frames = decompose_frames(&trace, &opt.schedule, &rr, &params);
        if !frames.passed() {
            violations += 1;
            if violations < 4 {
                eprintln!("instance {i} {params} T={}: {:?}\n trace {:?}", trace.horizon(), frames.violations, trace.counts());
            }
        }
        let st = verify_opt_structure(&trace, &opt.schedule, &params);
        assert!(st.passed(), "structure broke at {i} {params}: {:?}", st.violations);
    }
    assert_eq!(violations, 0, "{violations} frame violations");
}
