//! Write SVG drawings of a family window coloured by size and by role.

use trilab::generators::{generate_family, FamilyParams};
use trilab::lattice::{int, rat};
use trilab::render::{fills_by_role, fills_by_size, render_svg};
use trilab::tlr::extract_tlr_indexing;

fn main() {
    let t = generate_family(&FamilyParams::new(rat(1, 3)).unwrap(), 4).unwrap();
    let dir = std::env::temp_dir();
    let by_size = render_svg(&t.tiles, &fills_by_size(&t.tiles));
    std::fs::write(dir.join("family_size.svg"), &by_size).unwrap();
    let idx = extract_tlr_indexing(&t, &int(2)).unwrap();
    let by_role = render_svg(&t.tiles, &fills_by_role(&t.tiles, &idx));
    std::fs::write(dir.join("family_role.svg"), &by_role).unwrap();
    println!("wrote {} and {} bytes to {}", by_size.len(), by_role.len(), dir.display());
}
