use assoclab_core::ring::{rat_int, Rat};
use assoclab_core::series::NCSeries;
use assoclab_core::solver::*;
use std::time::Instant;

fn verify(label: &str, sol: &NCSeries<Rat>, mu: Option<Rat>) {
    let set = EquationSet { mu };
    let mut all_zero = true;
    for (eq, r) in residuals(sol, &set).unwrap() {
        if !r.is_zero() {
            all_zero = false;
            println!("  {label}: residual {:?} NONZERO", eq);
        }
    }
    println!("  {label}: residuals all zero: {all_zero}; grouplike: {}", sol.is_grouplike());
}

fn main() {
    let t = Instant::now();
    match solve_truncated(None, 8, FreeParamPolicy::Random(42)) {
        Ok((sol, rep)) => {
            println!("mu=0 N=8 random:42 solved in {:?}", t.elapsed());
            for wr in &rep.weights {
                print!(" w{}:free{}", wr.weight, wr.free);
            }
            println!();
            verify("mu0", &sol, None);
            println!("  f[001] = {}", sol.get(&assoclab_core::word::Word::parse("001").unwrap()));
        }
        Err(e) => println!("mu=0 N=8 FAILED: {e} ({:?})", t.elapsed()),
    }
    let t = Instant::now();
    match solve_truncated(Some(rat_int(1)), 6, FreeParamPolicy::Random(42)) {
        Ok((sol, _)) => {
            println!("mu=1 N=6 random:42 solved in {:?}", t.elapsed());
            verify("mu1", &sol, Some(rat_int(1)));
        }
        Err(e) => println!("mu=1 N=6 FAILED: {e} ({:?})", t.elapsed()),
    }
}
