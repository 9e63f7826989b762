//! Exact return probabilities, the path-counting check, and the Green
//! function partial sums against the harmonic lower bound.

use trilab::walk::{self, GreenMode};

fn main() {
    for n in [0i64, 3, 4, 6, 9, 12] {
        let p = walk::return_probability(n).unwrap();
        let dp = walk::path_count_dp(n as u64).unwrap();
        println!("p({n:>2}) = {p:<12} paths {dp}");
    }
    for m in [1u64, 10, 100, 1000, 100_000] {
        let g = walk::green_partial(m, GreenMode::Float).to_f64();
        let h: f64 = (1..=m).map(|k| 1.0 / k as f64).sum();
        println!("G({m}) = {g:.6} >= {:.6}", 1.0 + walk::stirling_constant() * h);
    }
    let c = walk::stirling_term_check(1000).unwrap();
    println!("m = 1000: term {:.6e}, bound {:.6e}, m*term/limit {:.6}", c.term, c.lower_bound, c.ratio_to_asymptote);
    let mut out = Vec::new();
    walk::write_stirling_csv(&walk::stirling_table(5), &mut out).unwrap();
    print!("{}", String::from_utf8(out).unwrap());
}
