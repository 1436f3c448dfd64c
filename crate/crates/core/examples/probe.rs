use unloc::verify::*;
use std::time::Instant;

fn main() {
    for dims in [vec![3usize,3,3], vec![2,3,4]] {
        let cfg = VerifyConfig { dims: Some(dims.clone()), ..VerifyConfig::with_seed(1) };
        let t = Instant::now();
        let rep = run_suite("tripartite_polygamy", 5, &cfg).unwrap();
        println!("tripartite_polygamy dims {:?}: 5 samples, {} violations, worst {:.3e}, {:?}",
                 dims, rep.violations, rep.worst_margin, t.elapsed());
    }
    // omega with d_B up to 4
    let cfg = VerifyConfig::with_seed(3);
    let t = Instant::now();
    let rep = run_suite("omega_identities", 12, &cfg).unwrap();
    println!("omega_identities: 12 samples, {} violations, worst {:.3e}, {:?}", rep.violations, rep.worst_margin, t.elapsed());
    let t = Instant::now();
    let rep = run_suite("kw_identity", 20, &cfg).unwrap();
    println!("kw_identity: 20 samples, {} violations, worst {:.3e}, {:?}", rep.violations, rep.worst_margin, t.elapsed());
    let t = Instant::now();
    let rep = run_suite("three_tangle", 50, &cfg).unwrap();
    println!("three_tangle: 50, {} violations, worst {:.3e}, {:?}", rep.violations, rep.worst_margin, t.elapsed());
}
