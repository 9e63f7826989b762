//! Recover the T/L/R labelling of a rotated family window and read off its
//! parameter.

use trilab::generators::{generate_family, generate_hexagonal, FamilyParams};
use trilab::lattice::{int, rat};
use trilab::tlr::{extract_tlr_indexing, infer_alpha};

fn main() {
    let t = generate_family(&FamilyParams::new(rat(2, 5)).unwrap(), 4).unwrap().rotate60();
    let idx = extract_tlr_indexing(&t, &int(2)).unwrap();
    println!("labelled {} T, {} L, {} R tiles; {} fully checked", idx.t.len(), idx.l.len(), idx.r.len(), idx.expanded.len());
    for (i, j) in idx.expanded.iter().take(4) {
        if let Some([t, l, r]) = idx.triple(*i, *j) {
            println!("  ({i}, {j}): sides {} {} {}", idx.tiles[t].side, idx.tiles[l].side, idx.tiles[r].side);
        }
    }
    println!("alpha = {}", infer_alpha(&idx).unwrap().alpha());
    match extract_tlr_indexing(&generate_hexagonal(8).unwrap(), &int(2)) {
        Ok(_) => println!("hexagonal window unexpectedly labelled"),
        Err(e) => println!("hexagonal window: {e}"),
    }
}
