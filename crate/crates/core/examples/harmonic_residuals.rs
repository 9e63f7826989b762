//! Mean-value residuals of a few fields on the index lattice, including the
//! tile-size field of a recovered family labelling.

use trilab::generators::{generate_family, FamilyParams};
use trilab::lattice::{int, rat};
use trilab::tlr::extract_tlr_indexing;
use trilab::walk::{harmonic_residual, IndexWindow, State};

fn main() {
    let w = IndexWindow { i_min: -5, i_max: 5, j_min: -5, j_max: 5 };
    for (name, f) in [("i", Box::new(|s: State| int(s.i)) as Box<dyn Fn(State) -> _>), ("i^2", Box::new(|s: State| int(s.i * s.i)))] {
        let r = harmonic_residual(|s| Some(f(s)), &w).unwrap();
        println!("f = {name}: residual at origin {}", r[&State::ORIGIN]);
    }
    let t = generate_family(&FamilyParams::new(rat(1, 4)).unwrap(), 4).unwrap();
    let field = extract_tlr_indexing(&t, &int(2)).unwrap().diameter_field();
    let one = IndexWindow { i_min: 0, i_max: 0, j_min: 0, j_max: 0 };
    let r = harmonic_residual(|s| field.get(&(s.i, s.j)).cloned(), &one).unwrap();
    println!("size field: {} values, residual at T(0,0) {}", field.len(), r[&State::ORIGIN]);
}
