//! JSON documents for tilings, descent traces and analysis reports.
//!
//! Rationals are written as `"num/den"` in lowest terms (integers too, as
//! `"3/1"`), so a parse followed by a write reproduces a file bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{DescentCase, DescentTrace, EConfiguration, SegmentNeighborhood};
use crate::lattice::{format_rational, parse_rational, LatticePoint, Orientation, ParseRationalError, Rational, Segment, Triangle};
use crate::tiling::{Failure, Region, Tiling, Window};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational: {0}")]
    Rational(#[from] ParseRationalError),
    #[error("invalid tile: {0}")]
    Tile(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TileDoc {
    o: String,
    anchor: [String; 2],
    side: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RegionDoc {
    ConvexPolygon { vertices: Vec<[String; 2]> },
    PlaneWindow { window: [String; 4] },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingDoc {
    tiles: Vec<TileDoc>,
    region: RegionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    periods: Option<[[String; 2]; 2]>,
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn pt(p: &LatticePoint) -> [String; 2] {
    [r(&p.a), r(&p.b)]
}

fn parse_pt(p: &[String; 2]) -> Result<LatticePoint, IoError> {
    Ok(LatticePoint::new(parse_rational(&p[0])?, parse_rational(&p[1])?))
}

fn to_doc(t: &Tiling) -> TilingDoc {
    let tiles = t.tiles.iter().map(tile_doc).collect();
    let region = match &t.region {
        Region::ConvexPolygon(v) => RegionDoc::ConvexPolygon { vertices: v.iter().map(pt).collect() },
        Region::PlaneWindow(w) => RegionDoc::PlaneWindow { window: [r(&w.a_min), r(&w.a_max), r(&w.b_min), r(&w.b_max)] },
    };
    TilingDoc { tiles, region, periods: t.periods.as_ref().map(|[p, q]| [pt(p), pt(q)]) }
}

fn from_doc(d: TilingDoc) -> Result<Tiling, IoError> {
    let tiles = d
        .tiles
        .iter()
        .map(|x| {
            let anchor = parse_pt(&x.anchor)?;
            let side = parse_rational(&x.side)?;
            let o = match x.o.as_str() {
                "up" => Orientation::Up,
                "down" => Orientation::Down,
                other => return Err(IoError::Tile(format!("orientation {other:?}"))),
            };
            Triangle::new(o, anchor, side).map_err(|e| IoError::Tile(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let region = match d.region {
        RegionDoc::ConvexPolygon { vertices } => Region::ConvexPolygon(vertices.iter().map(parse_pt).collect::<Result<_, _>>()?),
        RegionDoc::PlaneWindow { window } => {
            let [a0, a1, b0, b1] = window.each_ref().map(|s| parse_rational(s));
            Region::PlaneWindow(Window::new(a0?, a1?, b0?, b1?))
        }
    };
    let periods = match d.periods {
        Some([p, q]) => Some([parse_pt(&p)?, parse_pt(&q)?]),
        None => None,
    };
    Ok(Tiling { tiles, region, periods })
}

pub fn tiling_to_json(t: &Tiling) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(t)).expect("tiling documents always serialise");
    s.push('\n');
    s
}

pub fn tiling_from_json(s: &str) -> Result<Tiling, IoError> {
    from_doc(serde_json::from_str(s)?)
}

pub fn read_tiling(path: &Path) -> Result<Tiling, IoError> {
    let s = std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    tiling_from_json(&s)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

pub fn write_tiling(path: &Path, t: &Tiling) -> Result<(), IoError> {
    write_text(path, &tiling_to_json(t))
}

pub fn point_json(p: &LatticePoint) -> Value {
    json!(pt(p))
}

pub fn rational_json(x: &Rational) -> Value {
    json!(r(x))
}

pub fn segment_json(s: &Segment) -> Value {
    json!([pt(&s.start), pt(&s.end)])
}

pub fn triangle_json(t: &Triangle) -> Value {
    serde_json::to_value(&tile_doc(t)).expect("serialisable")
}

fn tile_doc(t: &Triangle) -> TileDoc {
    let o = match t.orientation {
        Orientation::Up => "up",
        Orientation::Down => "down",
    };
    TileDoc { o: o.to_string(), anchor: pt(&t.anchor), side: r(&t.side) }
}

pub fn e_configuration_json(e: &EConfiguration) -> Value {
    json!({
        "base": segment_json(&e.base),
        "interior_point": point_json(&e.interior_point),
        "whisker_direction": e.whisker_direction.to_string(),
        "whisker_length": rational_json(&e.whisker_length),
        "length": rational_json(&e.length()),
        "mu": rational_json(&e.mu()),
    })
}

pub fn trace_json(t: &DescentTrace) -> Value {
    json!({
        "steps": t.steps.iter().map(e_configuration_json).collect::<Vec<_>>(),
        "lengths": t.lengths.iter().map(rational_json).collect::<Vec<_>>(),
        "cases": t.cases.iter().map(|c| match c {
            DescentCase::Continue => "continue",
            DescentCase::Turn => "turn",
        }).collect::<Vec<_>>(),
        "halted": t.halted.as_ref().map(|e| e.to_string()),
    })
}

pub fn failure_json(f: &Failure) -> Value {
    match f {
        Failure::Overlap { first, second, witness } => {
            json!({"kind": "overlap", "tiles": [first, second], "witness": point_json(witness)})
        }
        Failure::Gap { witness } => json!({"kind": "gap", "witness": point_json(witness)}),
        Failure::Outside { tile } => json!({"kind": "outside", "tile": tile}),
        Failure::PeriodInconsistency { witness, detail } => {
            json!({"kind": "period_inconsistency", "witness": point_json(witness), "detail": detail})
        }
    }
}

pub fn neighborhood_json(n: &SegmentNeighborhood) -> Value {
    json!({
        "n_n": n.n_n,
        "n_s": n.n_s,
        "start_bound": n.start_bound.map(|d| d.to_string()),
        "end_bound": n.end_bound.map(|d| d.to_string()),
        "pattern": format!("{:?}", n.pattern).to_lowercase(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate_family, generate_figure3, generate_hexagonal, FamilyParams};
    use crate::lattice::rat;

    #[test]
    fn round_trips_are_bit_exact() {
        let f = FamilyParams::new(rat(2, 5)).unwrap();
        for t in [generate_family(&f, 2).unwrap(), generate_figure3(4).unwrap(), generate_hexagonal(2).unwrap()] {
            let s = tiling_to_json(&t);
            let back = tiling_from_json(&s).unwrap();
            assert_eq!(back, t);
            assert_eq!(tiling_to_json(&back), s);
        }
    }

    #[test]
    fn document_shape() {
        let v: Value = serde_json::from_str(&tiling_to_json(&generate_figure3(2).unwrap())).unwrap();
        assert_eq!(v["tiles"][0], json!({"o": "up", "anchor": ["0/1", "0/1"], "side": "1/1"}));
        assert_eq!(v["region"]["kind"], "convex_polygon");
        assert!(v.get("periods").is_none());
    }

    #[test]
    fn rejects_garbage() {
        assert!(tiling_from_json("{").is_err());
        assert!(tiling_from_json(r#"{"tiles":[{"o":"left","anchor":["0","0"],"side":"1"}],"region":{"kind":"plane_window","window":["0","1","0","1"]}}"#).is_err());
        assert!(tiling_from_json(r#"{"tiles":[{"o":"up","anchor":["0","0"],"side":"-1"}],"region":{"kind":"plane_window","window":["0","1","0","1"]}}"#).is_err());
        let ok = r#"{"tiles":[{"o":"up","anchor":["0","0"],"side":"1"}],"region":{"kind":"plane_window","window":["0","1","0","1"]}}"#;
        assert_eq!(tiling_from_json(ok).unwrap().tiles.len(), 1);
    }
}
