//! Tilings, validity checking and the global predicates on them.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    interiors_overlap, orient, rat, to_f64, Direction, LatticePoint, Rational, Segment, Triangle,
};

/// The set being tiled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    /// Counterclockwise vertex list.
    ConvexPolygon(Vec<LatticePoint>),
    /// `(a, b)` box, a 60° parallelogram in the plane.
    PlaneWindow(Window),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    pub a_min: Rational,
    pub a_max: Rational,
    pub b_min: Rational,
    pub b_max: Rational,
}

impl Window {
    pub fn new(a_min: Rational, a_max: Rational, b_min: Rational, b_max: Rational) -> Window {
        Window { a_min, a_max, b_min, b_max }
    }

    pub fn is_proper(&self) -> bool {
        self.a_min < self.a_max && self.b_min < self.b_max
    }

    pub fn corners(&self) -> Vec<LatticePoint> {
        vec![
            LatticePoint::new(self.a_min.clone(), self.b_min.clone()),
            LatticePoint::new(self.a_max.clone(), self.b_min.clone()),
            LatticePoint::new(self.a_max.clone(), self.b_max.clone()),
            LatticePoint::new(self.a_min.clone(), self.b_max.clone()),
        ]
    }

    /// Window shrunk by `m` on every side; may be improper.
    pub fn inset(&self, m: &Rational) -> Window {
        Window::new(&self.a_min + m, &self.a_max - m, &self.b_min + m, &self.b_max - m)
    }

    pub fn contains_point(&self, p: &LatticePoint) -> bool {
        self.a_min <= p.a && p.a <= self.a_max && self.b_min <= p.b && p.b <= self.b_max
    }

    pub fn contains_triangle(&self, t: &Triangle) -> bool {
        t.vertices().iter().all(|v| self.contains_point(v))
    }

    pub fn contains_segment(&self, s: &Segment) -> bool {
        self.contains_point(&s.start) && self.contains_point(&s.end)
    }

    /// True if the triangle's bounding box meets this window.
    pub fn meets_triangle(&self, t: &Triangle) -> bool {
        let (a0, a1, b0, b1) = t.bbox();
        a0 <= self.a_max && self.a_min <= a1 && b0 <= self.b_max && self.b_min <= b1
    }

    /// Smallest window containing every vertex.
    pub fn bounding(tiles: &[Triangle]) -> Option<Window> {
        let mut it = tiles.iter().map(|t| t.bbox());
        let (mut a0, mut a1, mut b0, mut b1) = it.next()?;
        for (x0, x1, y0, y1) in it {
            a0 = a0.min(x0);
            a1 = a1.max(x1);
            b0 = b0.min(y0);
            b1 = b1.max(y1);
        }
        Some(Window::new(a0, a1, b0, b1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    pub tiles: Vec<Triangle>,
    pub region: Region,
    pub periods: Option<[LatticePoint; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("region has fewer than three vertices")]
    TooFewVertices,
    #[error("region edge {0} -> {1} is not along a lattice direction")]
    NonLatticeEdge(LatticePoint, LatticePoint),
    #[error("region is not convex with inner angles pi/3 or 2pi/3 at {0}")]
    BadAngle(LatticePoint),
    #[error("region vertices do not wind once counterclockwise")]
    NotCounterclockwise,
    #[error("window bounds must satisfy min < max")]
    ImproperWindow,
    #[error("period vectors are linearly dependent")]
    DependentPeriods,
    #[error("tiling has no tiles")]
    Empty,
    #[error("packing bound needs positive inputs")]
    NonPositive,
}

/// Why a tiling is not valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Overlap { first: usize, second: usize, witness: LatticePoint },
    Gap { witness: LatticePoint },
    Outside { tile: usize },
    PeriodInconsistency { witness: LatticePoint, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    pub failure: Option<Failure>,
}

impl ValidityReport {
    fn ok() -> Self {
        ValidityReport { valid: true, failure: None }
    }

    fn fail(f: Failure) -> Self {
        ValidityReport { valid: false, failure: Some(f) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perfectness {
    Perfect,
    RepeatedSize(Rational),
    PeriodicRepetition,
}

impl Perfectness {
    pub fn is_perfect(&self) -> bool {
        matches!(self, Perfectness::Perfect)
    }

    pub fn reason(&self) -> Option<String> {
        match self {
            Perfectness::Perfect => None,
            Perfectness::RepeatedSize(s) => Some(format!("repeated size {}", crate::lattice::format_rational(s))),
            Perfectness::PeriodicRepetition => Some("periodic repetition".to_string()),
        }
    }
}

/// Shape of a region admitted by the angle restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonKind {
    Triangle,
    Parallelogram,
    Trapezoid,
    Pentagon,
    Hexagon,
}

/// Whether a region side satisfies the boundary conditions an
/// E-configuration-free tiling must meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideCondition {
    pub side: Segment,
    /// Number of 2π/3 angles at the two endpoints.
    pub obtuse_ends: usize,
    /// Tiles with a side lying in this region side.
    pub tiles_on_side: usize,
    pub holds: bool,
}

/// Edge directions of a closed polygon, checked for the lattice and angle
/// restrictions. Returns the directions and the turning index at each vertex.
fn polygon_turns(vertices: &[LatticePoint]) -> Result<(Vec<Direction>, Vec<usize>), TilingError> {
    let n = vertices.len();
    if n < 3 {
        return Err(TilingError::TooFewVertices);
    }
    let mut dirs = Vec::with_capacity(n);
    for k in 0..n {
        let (p, q) = (&vertices[k], &vertices[(k + 1) % n]);
        let (d, _) = Direction::of_vector(&(q - p)).ok_or_else(|| TilingError::NonLatticeEdge(p.clone(), q.clone()))?;
        dirs.push(d);
    }
    let mut turns = Vec::with_capacity(n);
    for k in 0..n {
        // turn at vertex k+1, between edge k and edge k+1
        let t = dirs[k].turn_to(dirs[(k + 1) % n]);
        if t != 1 && t != 2 {
            return Err(TilingError::BadAngle(vertices[(k + 1) % n].clone()));
        }
        turns.push(t);
    }
    if turns.iter().sum::<usize>() != 6 {
        return Err(TilingError::NotCounterclockwise);
    }
    Ok((dirs, turns))
}

/// Area in lattice units of a simple polygon given in `(a, b)` coordinates.
pub fn polygon_area(vertices: &[LatticePoint]) -> Rational {
    let n = vertices.len();
    let mut twice = Rational::zero();
    for k in 0..n {
        twice += vertices[k].cross(&vertices[(k + 1) % n]);
    }
    // shoelace gives half the determinant sum; a unit triangle has |det| = 1
    twice.abs()
}

fn polygon_contains(vertices: &[LatticePoint], p: &LatticePoint) -> bool {
    let n = vertices.len();
    (0..n).all(|k| orient(&vertices[k], &vertices[(k + 1) % n], p) != std::cmp::Ordering::Less)
}

fn polygon_contains_interior(vertices: &[LatticePoint], p: &LatticePoint) -> bool {
    let n = vertices.len();
    (0..n).all(|k| orient(&vertices[k], &vertices[(k + 1) % n], p) == std::cmp::Ordering::Greater)
}

/// Point strictly inside both triangles, if their interiors meet.
pub fn overlap_witness(t1: &Triangle, t2: &Triangle) -> Option<LatticePoint> {
    if !interiors_overlap(t1, t2) {
        return None;
    }
    // centroid of the common part: average of the vertices of the
    // intersection polygon, found by clipping t1 against t2's half-planes
    let mut poly: Vec<LatticePoint> = t1.ccw_vertices().to_vec();
    for side in t2.sides() {
        poly = clip(&poly, &side.start, &side.end);
    }
    let n = poly.len();
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for p in &poly {
        a += &p.a;
        b += &p.b;
    }
    let k = rat(1, n as i64);
    Some(LatticePoint::new(a * &k, b * &k))
}

// Sutherland-Hodgman against the left side of p -> q.
fn clip(poly: &[LatticePoint], p: &LatticePoint, q: &LatticePoint) -> Vec<LatticePoint> {
    let d = q - p;
    let side = |x: &LatticePoint| d.cross(&(x - p));
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let (x, y) = (&poly[k], &poly[(k + 1) % poly.len()]);
        let (sx, sy) = (side(x), side(y));
        if !sx.is_negative() {
            out.push(x.clone());
        }
        if (sx.is_positive() && sy.is_negative()) || (sx.is_negative() && sy.is_positive()) {
            let t = &sx / (&sx - &sy);
            out.push(x + &(y - x).scale(&t));
        }
    }
    out
}

fn bbox_f64(t: &Triangle) -> [f64; 4] {
    let (a0, a1, b0, b1) = t.bbox();
    [to_f64(&a0), to_f64(&a1), to_f64(&b0), to_f64(&b1)]
}

/// First overlapping pair (by sweep over `a`), with a witness point.
pub(crate) fn first_overlap(tiles: &[Triangle]) -> Option<(usize, usize, LatticePoint)> {
    let boxes: Vec<[f64; 4]> = tiles.iter().map(bbox_f64).collect();
    let mut order: Vec<usize> = (0..tiles.len()).collect();
    order.sort_by(|&i, &j| boxes[i][0].total_cmp(&boxes[j][0]));
    let slack = 1e-9;
    let mut found: Option<(usize, usize)> = None;
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if boxes[j][0] > boxes[i][1] + slack {
                break;
            }
            if boxes[j][2] > boxes[i][3] + slack || boxes[i][2] > boxes[j][3] + slack {
                continue;
            }
            if interiors_overlap(&tiles[i], &tiles[j]) {
                let pair = (i.min(j), i.max(j));
                if found.map_or(true, |f| pair < f) {
                    found = Some(pair);
                }
            }
        }
    }
    found.map(|(i, j)| {
        let w = overlap_witness(&tiles[i], &tiles[j]).expect("interiors overlap");
        (i, j, w)
    })
}

fn lcm_of_denominators<'a>(values: impl Iterator<Item = &'a Rational>) -> num_bigint::BigInt {
    values.fold(num_bigint::BigInt::from(1), |acc, r| acc.lcm(r.denom()))
}

/// Tile vertices lying on a segment, plus its endpoints, sorted along it.
fn breakpoints(seg: &Segment, tiles: &[Triangle]) -> Vec<Rational> {
    let key = seg.line();
    let (lo, hi) = seg.interval();
    let mut ts: BTreeSet<Rational> = BTreeSet::new();
    ts.insert(lo.clone());
    ts.insert(hi.clone());
    for t in tiles {
        for v in t.vertices() {
            if key.contains(&v) {
                let x = key.param(&v);
                if lo < x && x < hi {
                    ts.insert(x);
                }
            }
        }
    }
    ts.into_iter().collect()
}

/// Probe points in small grid cells just off each piece of each probed
/// edge; returns the first one inside the region and covered by no tile.
fn find_gap(
    probe_tiles: &[Triangle],
    cover: &[Triangle],
    inside_region: &dyn Fn(&LatticePoint) -> bool,
    region_edges: &[Segment],
) -> Option<LatticePoint> {
    let mut all: Vec<&Rational> = Vec::new();
    for t in cover {
        all.extend([&t.anchor.a, &t.anchor.b, &t.side]);
    }
    for s in region_edges {
        all.extend([&s.start.a, &s.start.b, &s.end.a, &s.end.b]);
    }
    // every edge lies on the grid of spacing 1/d, so a cell of the half
    // grid touching an edge is either fully covered or fully uncovered
    let d = lcm_of_denominators(all.into_iter());
    let step = Rational::new(1.into(), d * 6);
    let probe = |seg: &Segment, turn: i32| -> Option<LatticePoint> {
        let key = seg.line();
        let dir = key.dir.direction();
        let off = (&dir.unit() + &dir.rotate(turn).unit()).scale(&step);
        for w in breakpoints(seg, cover).windows(2) {
            let mid = key.point(&((&w[0] + &w[1]) * rat(1, 2)));
            let q = &mid + &off;
            if inside_region(&q) && !cover.iter().any(|t| t.contains(&q)) {
                return Some(q);
            }
        }
        None
    };
    let edges = probe_tiles.iter().flat_map(|t| t.sides()).chain(region_edges.iter().cloned());
    for e in edges {
        for turn in [1, -1] {
            if let Some(q) = probe(&e, turn) {
                return Some(q);
            }
        }
    }
    None
}

impl Tiling {
    pub fn new(tiles: Vec<Triangle>, region: Region) -> Tiling {
        Tiling { tiles, region, periods: None }
    }

    pub fn periodic(tiles: Vec<Triangle>, region: Region, periods: [LatticePoint; 2]) -> Tiling {
        Tiling { tiles, region, periods: Some(periods) }
    }

    pub fn is_periodic(&self) -> bool {
        self.periods.is_some()
    }

    /// Region as a counterclockwise vertex list.
    pub fn region_polygon(&self) -> Vec<LatticePoint> {
        match &self.region {
            Region::ConvexPolygon(v) => v.clone(),
            Region::PlaneWindow(w) => w.corners(),
        }
    }

    /// Checks the region and period data, independent of the tiles.
    pub fn check_structure(&self) -> Result<(), TilingError> {
        match &self.region {
            Region::ConvexPolygon(v) => {
                polygon_turns(v)?;
            }
            Region::PlaneWindow(w) => {
                if !w.is_proper() {
                    return Err(TilingError::ImproperWindow);
                }
            }
        }
        if let Some([p, q]) = &self.periods {
            if p.cross(q).is_zero() {
                return Err(TilingError::DependentPeriods);
            }
        }
        Ok(())
    }

    /// Area of one period cell in lattice units.
    pub fn cell_area(&self) -> Option<Rational> {
        self.periods.as_ref().map(|[p, q]| p.cross(q).abs() * rat(2, 1))
    }

    pub fn tile_area(&self) -> Rational {
        self.tiles.iter().map(|t| t.area()).fold(Rational::zero(), |a, b| a + b)
    }

    /// Period translate `i·p + j·q`.
    pub fn shift(&self, i: i64, j: i64) -> LatticePoint {
        let [p, q] = self.periods.as_ref().expect("periodic tiling");
        &p.scale(&rat(i, 1)) + &q.scale(&rat(j, 1))
    }

    /// The fundamental cell and its eight neighbours, tagged with their shifts.
    pub fn block3(&self) -> Vec<(Triangle, usize, (i64, i64))> {
        let mut out = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                let v = self.shift(i, j);
                for (k, t) in self.tiles.iter().enumerate() {
                    out.push((t.translate(&v), k, (i, j)));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<ValidityReport, TilingError> {
        self.check_structure()?;
        if self.periods.is_some() {
            return Ok(self.validate_periodic());
        }
        let poly = self.region_polygon();
        if let Some((i, j, w)) = first_overlap(&self.tiles) {
            return Ok(ValidityReport::fail(Failure::Overlap { first: i, second: j, witness: w }));
        }
        for (k, t) in self.tiles.iter().enumerate() {
            if !t.vertices().iter().all(|v| polygon_contains(&poly, v)) {
                return Ok(ValidityReport::fail(Failure::Outside { tile: k }));
            }
        }
        if self.tile_area() == polygon_area(&poly) {
            return Ok(ValidityReport::ok());
        }
        let n = poly.len();
        let edges: Vec<Segment> = (0..n).map(|k| Segment::new(poly[k].clone(), poly[(k + 1) % n].clone()).expect("checked region")).collect();
        let inside = |p: &LatticePoint| polygon_contains_interior(&poly, p);
        let witness = find_gap(&self.tiles, &self.tiles, &inside, &edges).unwrap_or_else(LatticePoint::origin);
        Ok(ValidityReport::fail(Failure::Gap { witness }))
    }

    fn validate_periodic(&self) -> ValidityReport {
        let block = self.block3();
        let tiles: Vec<Triangle> = block.iter().map(|(t, _, _)| t.clone()).collect();
        if let Some((x, y, w)) = first_overlap(&tiles) {
            let (a, b) = (&block[x], &block[y]);
            // overlaps inside the unshifted cell are ordinary overlaps
            if a.2 == (0, 0) && b.2 == (0, 0) {
                return ValidityReport::fail(Failure::Overlap { first: a.1, second: b.1, witness: w });
            }
            let detail = format!("tile {} at shift {:?} overlaps tile {} at shift {:?}", a.1, a.2, b.1, b.2);
            return ValidityReport::fail(Failure::PeriodInconsistency { witness: w, detail });
        }
        let cell = self.cell_area().expect("periodic");
        let area = self.tile_area();
        if area == cell {
            return ValidityReport::ok();
        }
        // a gap beside the central cell, seen through the whole block
        let witness = find_gap(&self.tiles, &tiles, &|_| true, &[]);
        let detail = format!(
            "tile area {} differs from cell area {}",
            crate::lattice::format_rational(&area),
            crate::lattice::format_rational(&cell)
        );
        ValidityReport::fail(Failure::PeriodInconsistency { witness: witness.unwrap_or_else(LatticePoint::origin), detail })
    }

    /// Sizes with multiplicities (over the fundamental cell when periodic).
    pub fn diameter_multiset(&self) -> BTreeMap<Rational, usize> {
        let mut m = BTreeMap::new();
        for t in &self.tiles {
            *m.entry(t.side.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn diameter_values(&self) -> Vec<Rational> {
        self.diameter_multiset().into_keys().collect()
    }

    pub fn perfectness(&self) -> Perfectness {
        if self.periods.is_some() && !self.tiles.is_empty() {
            return Perfectness::PeriodicRepetition;
        }
        match self.diameter_multiset().into_iter().find(|(_, c)| *c > 1) {
            Some((s, _)) => Perfectness::RepeatedSize(s),
            None => Perfectness::Perfect,
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.perfectness().is_perfect()
    }

    /// Unordered index pairs of tiles with a common full side.
    ///
    /// For periodic tilings, tile `i` of the cell is compared with every
    /// tile of the surrounding 3×3 block; pairs are reported by cell index.
    pub fn shared_side_pairs(&self) -> Vec<(usize, usize)> {
        type Key = (LatticePoint, LatticePoint);
        let key = |s: &Segment| -> Key {
            let c = s.canonical();
            (c.start, c.end)
        };
        let mut out = BTreeSet::new();
        if self.periods.is_some() {
            let mut by_side: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
            for (t, k, _) in self.block3() {
                for s in t.sides() {
                    by_side.entry(key(&s)).or_default().push(k);
                }
            }
            for t in &self.tiles {
                for s in t.sides() {
                    let owners = &by_side[&key(&s)];
                    if owners.len() > 1 {
                        let (x, y) = (owners[0], owners[1]);
                        out.insert((x.min(y), x.max(y)));
                    }
                }
            }
        } else {
            let mut by_side: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
            for (k, t) in self.tiles.iter().enumerate() {
                for s in t.sides() {
                    by_side.entry(key(&s)).or_default().push(k);
                }
            }
            for owners in by_side.values() {
                for x in 0..owners.len() {
                    for y in x + 1..owners.len() {
                        let (i, j) = (owners[x], owners[y]);
                        out.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn inf_diameter(&self) -> Result<Rational, TilingError> {
        self.tiles.iter().map(|t| t.side.clone()).min().ok_or(TilingError::Empty)
    }

    pub fn max_diameter(&self) -> Result<Rational, TilingError> {
        self.tiles.iter().map(|t| t.side.clone()).max().ok_or(TilingError::Empty)
    }

    pub fn polygon_kind(&self) -> Result<PolygonKind, TilingError> {
        let (_, turns) = polygon_turns(&self.region_polygon())?;
        let acute = turns.iter().filter(|&&t| t == 2).count();
        Ok(match (turns.len(), acute) {
            (3, _) => PolygonKind::Triangle,
            (4, _) => {
                // parallelogram: acute corners opposite; trapezoid: adjacent
                let n = turns.len();
                let adjacent = (0..n).any(|k| turns[k] == 2 && turns[(k + 1) % n] == 2);
                if adjacent {
                    PolygonKind::Trapezoid
                } else {
                    PolygonKind::Parallelogram
                }
            }
            (5, _) => PolygonKind::Pentagon,
            _ => PolygonKind::Hexagon,
        })
    }

    /// Boundary conditions on each region side: a side with an obtuse end
    /// carries exactly one tile side; a side between two acute corners
    /// carries at most two.
    pub fn boundary_conditions(&self) -> Result<Vec<SideCondition>, TilingError> {
        let poly = self.region_polygon();
        let (_, turns) = polygon_turns(&poly)?;
        let n = poly.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let side = Segment::new(poly[k].clone(), poly[(k + 1) % n].clone()).expect("checked region");
            // turns[k] is at vertex k+1; the turn at vertex k is turns[k-1]
            let at_start = turns[(k + n - 1) % n];
            let at_end = turns[k];
            let obtuse_ends = [at_start, at_end].iter().filter(|&&t| t == 1).count();
            let tiles_on_side = self
                .tiles
                .iter()
                .filter(|t| t.sides().iter().any(|s| side.contains_point(&s.start) && side.contains_point(&s.end)))
                .count();
            let holds = if obtuse_ends > 0 { tiles_on_side == 1 } else { tiles_on_side <= 2 };
            out.push(SideCondition { side, obtuse_ends, tiles_on_side, holds });
        }
        Ok(out)
    }

    pub fn translate(&self, v: &LatticePoint) -> Tiling {
        self.map(|p| p + v)
    }

    pub fn scale(&self, k: &Rational) -> Tiling {
        self.map(|p| p.scale(k))
    }

    pub fn rotate60(&self) -> Tiling {
        self.map(|p| p.rotate60())
    }

    pub fn reflect(&self) -> Tiling {
        self.map(|p| p.reflect())
    }

    /// Image under a linear or affine lattice symmetry applied to points.
    ///
    /// Windows that stop being `(a, b)` boxes become polygons, except for
    /// periodic tilings where the window is recomputed from the tiles.
    pub fn map(&self, f: impl Fn(&LatticePoint) -> LatticePoint) -> Tiling {
        let tiles: Vec<Triangle> = self.tiles.iter().map(|t| t.map_vertices(&f)).collect();
        let o = f(&LatticePoint::origin());
        let periods = self.periods.as_ref().map(|[p, q]| [&f(p) - &o, &f(q) - &o]);
        let fix_orientation = |mut v: Vec<LatticePoint>| {
            if polygon_turns(&v).is_err() {
                v.reverse();
            }
            v
        };
        let region = match &self.region {
            Region::ConvexPolygon(v) => Region::ConvexPolygon(fix_orientation(v.iter().map(&f).collect())),
            Region::PlaneWindow(w) => {
                let corners: Vec<LatticePoint> = w.corners().iter().map(&f).collect();
                let as_window = boxed(&corners);
                match as_window {
                    Some(w) => Region::PlaneWindow(w),
                    None if periods.is_some() => Region::PlaneWindow(Window::bounding(&tiles).unwrap_or_else(|| w.clone())),
                    None => Region::ConvexPolygon(fix_orientation(corners)),
                }
            }
        };
        Tiling { tiles, region, periods }
    }
}

// The corners form an (a, b) box iff they take two a-values and two b-values.
fn boxed(corners: &[LatticePoint]) -> Option<Window> {
    let a: BTreeSet<&Rational> = corners.iter().map(|p| &p.a).collect();
    let b: BTreeSet<&Rational> = corners.iter().map(|p| &p.b).collect();
    if a.len() != 2 || b.len() != 2 {
        return None;
    }
    let a: Vec<_> = a.into_iter().cloned().collect();
    let b: Vec<_> = b.into_iter().cloned().collect();
    let w = Window::new(a[0].clone(), a[1].clone(), b[0].clone(), b[1].clone());
    let mut c1: Vec<_> = corners.to_vec();
    let mut c2 = w.corners();
    c1.sort();
    c2.sort();
    (c1 == c2).then_some(w)
}

/// Upper bound on the number of disjoint triangles of diameter `d` that meet
/// a disc of radius `rho`: each lies in the disc of radius `rho + d`.
pub fn packing_bound(rho: &Rational, d: &Rational) -> Result<u64, TilingError> {
    if !rho.is_positive() || !d.is_positive() {
        return Err(TilingError::NonPositive);
    }
    let (r, d) = (to_f64(rho), to_f64(d));
    let ratio = PI * (r + d) * (r + d) / (3f64.sqrt() / 4.0 * d * d);
    // round outward so floating error can only loosen the bound
    Ok((ratio * (1.0 + 1e-12)).floor() as u64)
}
