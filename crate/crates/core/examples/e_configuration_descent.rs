//! Detect E-configurations in a mixed-size tiling and follow the descent
//! from the longest one.

use trilab::analysis::{DescentCase, DetectOptions, Patch};
use trilab::generators::generate_graded;
use trilab::lattice::int;

fn main() {
    let t = generate_graded(173, 2);
    let patch = Patch::new(&t, &int(4)).unwrap();
    let es = patch.e_configurations(DetectOptions::default());
    println!("{} tiles, {} E-configurations in the core", t.tiles.len(), es.len());
    let start = es.iter().max_by_key(|e| e.length()).unwrap();
    println!("start: base {:?}, whiskers {}, length {}", start.base, start.whisker_direction, start.length());
    let trace = patch.descend(start, 32).unwrap();
    for (e, case) in trace.steps.iter().skip(1).zip(&trace.cases) {
        let how = match case {
            DescentCase::Continue => "continue",
            DescentCase::Turn => "turn",
        };
        println!("  {how:>8}: base {:?}, length {}", e.base, e.length());
    }
    if let Some(h) = trace.halted {
        println!("stopped: {h}");
    }
}
