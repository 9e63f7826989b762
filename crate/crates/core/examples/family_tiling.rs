//! Build the periodic family for a few parameters and check each block.

use trilab::generators::{generate_family, FamilyParams};
use trilab::lattice::{format_rational, rat};

fn main() {
    for a in [rat(1, 5), rat(1, 3), rat(1, 2)] {
        let f = FamilyParams::new(a.clone()).unwrap();
        let t = generate_family(&f, 3).unwrap();
        let report = t.validate().unwrap();
        let sizes: Vec<String> = t.diameter_multiset().iter().map(|(d, n)| format!("{}x{n}", format_rational(d))).collect();
        println!(
            "alpha {}: {} tiles, valid {}, sizes [{}], shared sides {}, t_NE {}, t_N {}",
            format_rational(&a),
            t.tiles.len(),
            report.valid,
            sizes.join(", "),
            t.shared_side_pairs().len(),
            f.t_ne(),
            f.t_n()
        );
    }
}
