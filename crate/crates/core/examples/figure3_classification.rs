//! The five small polygon tilings: boundary conditions, detector output and
//! why none of them is perfect.

use trilab::analysis::find_e_configurations;
use trilab::generators::generate_figure3;
use trilab::lattice::int;

fn main() {
    for v in 1..=5 {
        let t = generate_figure3(v).unwrap();
        let kind = t.polygon_kind().unwrap();
        let conds = t.boundary_conditions().unwrap();
        let es = find_e_configurations(&t, &int(0)).unwrap();
        println!(
            "variant {v}: {kind:?}, {} tiles, valid {}, side conditions hold {}, E-configurations {}, {}",
            t.tiles.len(),
            t.validate().unwrap().valid,
            conds.iter().all(|c| c.holds),
            es.len(),
            t.perfectness().reason().unwrap_or_else(|| "perfect".into())
        );
    }
}
