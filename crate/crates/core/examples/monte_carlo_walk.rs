//! Simulated return frequencies next to the exact values.

use trilab::lattice::to_f64;
use trilab::walk;

fn main() {
    let path = walk::simulate(42, 12);
    println!("trajectory: {:?}", path.iter().map(|s| (s.i, s.j)).collect::<Vec<_>>());
    for n in [3u64, 6, 9] {
        let f = walk::estimate_return_frequency(42, 200_000, n).unwrap();
        let p = to_f64(&walk::return_probability(n as i64).unwrap());
        println!("n = {n}: simulated {f:.5}, exact {p:.5}");
    }
}
