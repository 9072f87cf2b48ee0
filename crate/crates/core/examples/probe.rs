use fdsr_core::*;
fn main() {
    let ch = sample_channel_set(&ChannelParams::default(), &mut trial_rng(2718, 518)).unwrap();
    let p = SystemParams::default();
    let t = compute_terms(&ch, &p).unwrap();
    let stat = stationary_candidates(&t);
    println!("candidates {:?}", stat.candidates);
    println!("leading {:.3e} real {} verified {}", stat.leading_coeff, stat.had_real_roots, stat.all_roots_verified);
    let m0 = 0.03980852252060062_f64;
    for dm in [-0.02, -0.01, -0.003, -0.001, 0.0, 0.001, 0.003, 0.01, 0.02] {
        let m = m0 + dm;
        println!("m {:+.4} f {:.17e}", dm, rate_ratio(&t, m));
    }
    let f0 = rate_ratio(&t, m0);
    let fscale = rate_ratio(&t, 1.0).max(rate_ratio(&t, 0.0)).max(f0);
    println!("fscale {:.3e}, prominence vs 0.02-off {:.3e}", fscale, (rate_ratio(&t, m0+0.02)-f0).abs()/fscale);
}
