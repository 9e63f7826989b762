//! SVG drawings of tilings at 100 pixels per unit side.
//!
//! Output is byte-stable: coordinates are printed with four decimals, the y
//! axis is flipped so the picture reads the usual way up, and `-0.0000` is
//! written as `0.0000`.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::lattice::{Rational, Triangle};
use crate::tlr::{Role, TlrIndexing};

pub const SCALE: f64 = 100.0;
const PAD: f64 = 10.0;

const SIZE_PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7"];

/// Fill of one tile: a CSS class and a colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fill {
    pub class: String,
    pub color: String,
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

fn pixel(p: (f64, f64)) -> (f64, f64) {
    (p.0 * SCALE, -p.1 * SCALE)
}

/// Fills keyed by the rank of each tile's side among the distinct sides,
/// largest first.
pub fn fills_by_size(tiles: &[Triangle]) -> Vec<Fill> {
    let mut sizes: Vec<&Rational> = tiles.iter().map(|t| &t.side).collect();
    sizes.sort_by(|a, b| b.cmp(a));
    sizes.dedup();
    let rank: BTreeMap<&Rational, usize> = sizes.into_iter().enumerate().map(|(k, s)| (s, k)).collect();
    tiles
        .iter()
        .map(|t| {
            let k = rank[&t.side];
            Fill { class: format!("size-{k}"), color: SIZE_PALETTE[k % SIZE_PALETTE.len()].to_string() }
        })
        .collect()
}

/// Fills by T/L/R role; tiles absent from `idx` are drawn grey.
pub fn fills_by_role(tiles: &[Triangle], idx: &TlrIndexing) -> Vec<Fill> {
    let mut role: BTreeMap<&Triangle, Role> = BTreeMap::new();
    for (map, r) in [(&idx.t, Role::T), (&idx.l, Role::L), (&idx.r, Role::R)] {
        for &k in map.values() {
            role.insert(&idx.tiles[k], r);
        }
    }
    tiles
        .iter()
        .map(|t| {
            let (class, color) = match role.get(t) {
                Some(Role::T) => ("role-t", "#f1ce63"),
                Some(Role::L) => ("role-l", "#4e79a7"),
                Some(Role::R) => ("role-r", "#e15759"),
                None => ("role-none", "#bab0ac"),
            };
            Fill { class: class.to_string(), color: color.to_string() }
        })
        .collect()
}

pub fn render_svg(tiles: &[Triangle], fills: &[Fill]) -> String {
    assert_eq!(tiles.len(), fills.len(), "one fill per tile");
    let pts: Vec<[(f64, f64); 3]> = tiles.iter().map(|t| t.vertices().map(|v| pixel(v.to_cartesian()))).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    if let Some(first) = pts.first() {
        (x0, y0, x1, y1) = (first[0].0, first[0].1, first[0].0, first[0].1);
    }
    for p in pts.iter().flatten() {
        x0 = x0.min(p.0);
        x1 = x1.max(p.0);
        y0 = y0.min(p.1);
        y1 = y1.max(p.1);
    }
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(x0 - PAD),
        num(y0 - PAD),
        num(x1 - x0 + 2.0 * PAD),
        num(y1 - y0 + 2.0 * PAD),
        num(x1 - x0 + 2.0 * PAD),
        num(y1 - y0 + 2.0 * PAD)
    )
    .unwrap();
    for (p, f) in pts.iter().zip(fills) {
        let points: Vec<String> = p.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
        writeln!(
            s,
            r##"  <polygon class="{}" points="{}" fill="{}" stroke="#222222" stroke-width="1"/>"##,
            f.class,
            points.join(" "),
            f.color
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::generate_figure3;
    use crate::lattice::{int, LatticePoint};

    #[test]
    fn single_tile() {
        let t = [Triangle::up(LatticePoint::from_ints(0, 0), int(1))];
        let svg = render_svg(&t, &fills_by_size(&t));
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains(r#"points="0.0000,0.0000 100.0000,0.0000 50.0000,-86.6025""#), "{svg}");
        assert!(!svg.contains("-0.0000"));
    }

    #[test]
    fn trapezoid_has_three_polygons() {
        let t = generate_figure3(3).unwrap();
        let svg = render_svg(&t.tiles, &fills_by_size(&t.tiles));
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert_eq!(svg, render_svg(&t.tiles, &fills_by_size(&t.tiles)));
    }

    #[test]
    fn negative_zero_is_normalised() {
        assert_eq!(num(-0.00001), "0.0000");
        assert_eq!(num(-1.5), "-1.5000");
    }
}
