//! E-configurations, their descent, and the local structure near maximal
//! segments.
//!
//! Analyses run on a [`Patch`]: an explicit, finite set of tiles together
//! with a *core* region in which conclusions are trusted. For a polygon
//! region the core is the whole polygon. For a plane window the core is the
//! window inset by the margin, so that nothing seen in the core is an
//! artefact of clipping. For a periodic tiling the core is the bounding box
//! of the stored tiles and the patch holds every period translate that comes
//! within the margin of it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{Direction, LatticePoint, LineKey, Rational, Segment, Triangle};
use crate::skeleton::{MaximalSegment, Skeleton};
use crate::tiling::{Failure, Region, Tiling, TilingError, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("malformed tiling: {0}")]
    Structure(#[from] TilingError),
    #[error("tiling is not valid: {0:?}")]
    InvalidTiling(Failure),
    #[error("margin {margin} is smaller than the largest tile side {largest}")]
    MarginTooSmall { margin: Rational, largest: Rational },
    #[error("margin {0} leaves an empty core")]
    EmptyCore(Rational),
    #[error("descent left the analysed core at {0}")]
    WindowExhausted(LatticePoint),
    #[error("basis {0:?} is a side shared by two tiles, so it carries no interior whisker")]
    SharedSide(Segment),
    #[error("{0:?} with whiskers {1} is not an E-configuration: {2}")]
    NotAnEConfiguration(Segment, Direction, String),
    #[error("no skeleton segment continues from {0}")]
    NoContinuation(LatticePoint),
    #[error("length {next} does not drop by the smallest diameter from {prev}")]
    InsufficientDrop { prev: Rational, next: Rational },
    #[error("neighbourhood of {0:?} is not fully inside the patch")]
    Clipped(Segment),
    #[error("tiling has no E-configuration in the core")]
    NoEConfiguration,
}

/// Region in which analysis results are trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Core {
    Polygon(Vec<LatticePoint>),
    Window(Window),
}

impl Core {
    pub fn contains_point(&self, p: &LatticePoint) -> bool {
        match self {
            Core::Window(w) => w.contains_point(p),
            Core::Polygon(v) => {
                let n = v.len();
                (0..n).all(|k| crate::lattice::orient(&v[k], &v[(k + 1) % n], p) != std::cmp::Ordering::Less)
            }
        }
    }

    pub fn contains_segment(&self, s: &Segment) -> bool {
        self.contains_point(&s.start) && self.contains_point(&s.end)
    }

    pub fn contains_triangle(&self, t: &Triangle) -> bool {
        t.vertices().iter().all(|v| self.contains_point(v))
    }

    /// True if `s` meets the core in a piece of positive length.
    pub fn meets_segment(&self, s: &Segment) -> bool {
        let v = match self {
            Core::Window(w) => w.corners(),
            Core::Polygon(v) => v.clone(),
        };
        let key = s.line();
        let (mut lo, mut hi) = s.interval();
        let n = v.len();
        for k in 0..n {
            // signed side of the point at parameter t is affine in t
            let (p, q) = (&v[k], &v[(k + 1) % n]);
            let f = |t: &Rational| (q - p).cross(&(&key.point(t) - p));
            let (f0, f1) = (f(&Rational::zero()), f(&Rational::from_integer(1.into())));
            let slope = &f1 - &f0;
            if slope.is_zero() {
                if f0 < Rational::zero() {
                    return false;
                }
                continue;
            }
            let root = -&f0 / &slope;
            if slope > Rational::zero() {
                lo = lo.max(root);
            } else {
                hi = hi.min(root);
            }
        }
        lo < hi
    }
}

/// A side of a tile lying on some lattice line.
#[derive(Debug, Clone)]
struct SideRef {
    lo: Rational,
    hi: Rational,
    tile: usize,
    side: usize,
    /// Tile lies to the left of the line's positive direction.
    left: bool,
}

#[derive(Debug, Clone)]
pub struct Patch {
    pub tiles: Vec<Triangle>,
    pub core: Core,
    pub skeleton: Skeleton,
    pub inf_diameter: Rational,
    vertices_on_line: BTreeMap<LineKey, Vec<Rational>>,
    sides_on_line: BTreeMap<LineKey, Vec<SideRef>>,
    tiles_at: HashMap<LatticePoint, Vec<usize>>,
}

/// Period translates of `tiles` whose bounding boxes meet `target`.
fn periodic_cover(tiles: &[Triangle], periods: &[LatticePoint; 2], target: &Window) -> Vec<Triangle> {
    let [p, q] = periods;
    let det = p.cross(q);
    let home = Window::bounding(tiles).expect("nonempty");
    // solve c - v = i p + j q over the corners of both boxes
    let (mut imin, mut imax, mut jmin, mut jmax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for c in target.corners() {
        for v in home.corners() {
            let d = &c - &v;
            let i = d.cross(q) / &det;
            let j = p.cross(&d) / &det;
            let (fi, ci) = (floor_i64(&i), floor_i64(&i) + 1);
            let (fj, cj) = (floor_i64(&j), floor_i64(&j) + 1);
            imin = imin.min(fi);
            imax = imax.max(ci);
            jmin = jmin.min(fj);
            jmax = jmax.max(cj);
        }
    }
    let mut out = Vec::new();
    for i in imin - 1..=imax + 1 {
        for j in jmin - 1..=jmax + 1 {
            let v = &p.scale(&crate::lattice::int(i)) + &q.scale(&crate::lattice::int(j));
            for t in tiles {
                let s = t.translate(&v);
                if target.meets_triangle(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn floor_i64(r: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    r.floor().to_integer().to_i64().expect("shift range fits in i64")
}

impl Patch {
    /// Validates `t` and materialises the tiles needed to analyse its core.
    pub fn new(t: &Tiling, margin: &Rational) -> Result<Patch, AnalysisError> {
        let report = t.validate()?;
        if let Some(f) = report.failure {
            return Err(AnalysisError::InvalidTiling(f));
        }
        let largest = t.max_diameter()?;
        let check_margin = || {
            if margin < &largest {
                Err(AnalysisError::MarginTooSmall { margin: margin.clone(), largest: largest.clone() })
            } else {
                Ok(())
            }
        };
        let (tiles, core) = match (&t.region, &t.periods) {
            (_, Some(periods)) => {
                check_margin()?;
                let home = Window::bounding(&t.tiles).expect("nonempty");
                let target = home.inset(&-margin.clone());
                (periodic_cover(&t.tiles, periods, &target), Core::Window(home))
            }
            (Region::ConvexPolygon(v), None) => (t.tiles.clone(), Core::Polygon(v.clone())),
            (Region::PlaneWindow(w), None) => {
                check_margin()?;
                let core = w.inset(margin);
                if core.a_min >= core.a_max || core.b_min >= core.b_max {
                    return Err(AnalysisError::EmptyCore(margin.clone()));
                }
                (t.tiles.clone(), Core::Window(core))
            }
        };
        Ok(Patch::from_parts(tiles, core))
    }

    /// Patch over an explicit tile list with a caller-chosen core. No validity check.
    pub fn from_parts(tiles: Vec<Triangle>, core: Core) -> Patch {
        let skeleton = Skeleton::from_tiles(&tiles);
        let mut vertices_on_line: BTreeMap<LineKey, BTreeSet<Rational>> = BTreeMap::new();
        let mut sides_on_line: BTreeMap<LineKey, Vec<SideRef>> = BTreeMap::new();
        let mut tiles_at: HashMap<LatticePoint, Vec<usize>> = HashMap::new();
        for (k, t) in tiles.iter().enumerate() {
            for v in t.vertices() {
                for dir in crate::lattice::LineDir::ALL {
                    let key = LineKey::through(&v, dir);
                    let x = key.param(&v);
                    vertices_on_line.entry(key).or_default().insert(x);
                }
                tiles_at.entry(v).or_default().push(k);
            }
            for (i, s) in t.sides().iter().enumerate() {
                let (lo, hi) = s.interval();
                sides_on_line.entry(s.line()).or_default().push(SideRef {
                    lo,
                    hi,
                    tile: k,
                    side: i,
                    left: s.direction().is_positive(),
                });
            }
        }
        for v in sides_on_line.values_mut() {
            v.sort_by(|x, y| (&x.lo, &x.hi, x.tile).cmp(&(&y.lo, &y.hi, y.tile)));
        }
        let inf_diameter = tiles.iter().map(|t| t.side.clone()).min().unwrap_or_else(Rational::zero);
        Patch {
            tiles,
            core,
            skeleton,
            inf_diameter,
            vertices_on_line: vertices_on_line.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
            sides_on_line,
            tiles_at,
        }
    }

    pub fn maximal_segments(&self) -> Vec<MaximalSegment> {
        self.skeleton.maximal_segments()
    }

    /// Maximal segments lying entirely in the core.
    pub fn core_segments(&self) -> Vec<MaximalSegment> {
        self.maximal_segments().into_iter().filter(|m| self.core.contains_segment(&m.segment)).collect()
    }

    pub fn tiles_at(&self, p: &LatticePoint) -> &[usize] {
        self.tiles_at.get(p).map_or(&[], Vec::as_slice)
    }

    /// Tile vertices on segment `s` (closed), sorted along its line.
    fn vertices_on(&self, s: &Segment) -> Vec<(Rational, LatticePoint)> {
        let key = s.line();
        let (lo, hi) = s.interval();
        let Some(ts) = self.vertices_on_line.get(&key) else { return Vec::new() };
        let from = ts.partition_point(|x| x < &lo);
        ts[from..].iter().take_while(|x| *x <= &hi).map(|x| (x.clone(), key.point(x))).collect()
    }

    /// Points of `m` with a positive skeleton ray in direction `w`, with the
    /// ray length; only points in the core.
    pub fn whisker_points(&self, m: &Segment, w: Direction) -> Vec<(LatticePoint, Rational)> {
        self.vertices_on(m)
            .into_iter()
            .filter(|(_, p)| self.core.contains_point(p))
            .filter_map(|(_, p)| self.skeleton.ray_length(&p, w).map(|l| (p, l)))
            .collect()
    }

    /// Tiles with a side on the line of `m` within `m`, split by side of the line.
    fn sides_along(&self, m: &Segment) -> (Vec<&SideRef>, Vec<&SideRef>) {
        let (lo, hi) = m.interval();
        let all = self.sides_on_line.get(&m.line()).map_or(&[][..], Vec::as_slice);
        let inside: Vec<&SideRef> = all.iter().filter(|s| lo <= s.lo && s.hi <= hi).collect();
        inside.into_iter().partition(|s| s.left)
    }

    /// Tile sides on the left (`true`) or right of `m`, ordered along it.
    pub(crate) fn side_pieces(&self, m: &Segment, left: bool) -> Vec<(usize, usize)> {
        let (l, r) = self.sides_along(m);
        let v = if left { l } else { r };
        v.iter().map(|s| (s.tile, s.side)).collect()
    }

    /// Can this tile's side be found, as a full side, in another tile?
    fn is_shared_side(&self, s: &Segment) -> bool {
        let (lo, hi) = s.interval();
        let all = self.sides_on_line.get(&s.line()).map_or(&[][..], Vec::as_slice);
        all.iter().filter(|x| x.lo == lo && x.hi == hi).count() >= 2
    }
}

/// A subset of the skeleton congruent to the letter-E template: a base,
/// and three parallel whiskers at its ends and at one interior point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EConfiguration {
    /// Oriented along the positive direction of its line.
    pub base: Segment,
    pub interior_point: LatticePoint,
    pub whisker_direction: Direction,
    pub whisker_length: Rational,
}

impl EConfiguration {
    pub fn length(&self) -> Rational {
        self.base.length()
    }

    pub fn mu(&self) -> Rational {
        let key = self.base.line();
        (key.param(&self.interior_point) - key.param(&self.base.start)) / self.length()
    }

    fn sort_key(&self) -> (Direction, &LatticePoint, &LatticePoint, Direction, &LatticePoint) {
        (self.base.direction(), &self.base.start, &self.base.end, self.whisker_direction, &self.interior_point)
    }
}

/// The four whisker directions not parallel to a line.
pub fn whisker_directions(line: Direction) -> [Direction; 4] {
    [line.rotate(1), line.rotate(2), line.rotate(4), line.rotate(5)]
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DetectOptions {
    /// Report every interior whisker point, not only the first.
    pub all_interior: bool,
}

impl Patch {
    pub fn e_configurations(&self, opts: DetectOptions) -> Vec<EConfiguration> {
        let segs = self.maximal_segments();
        let mut out: Vec<EConfiguration> = segs
            .par_iter()
            .flat_map_iter(|m| {
                let mut found = Vec::new();
                for w in whisker_directions(m.line_direction) {
                    let pts = self.whisker_points(&m.segment, w);
                    for i in 0..pts.len() {
                        for k in i + 2..pts.len() {
                            let (p0, e0) = &pts[i];
                            let (p2, e2) = &pts[k];
                            let base = Segment { start: p0.clone(), end: p2.clone() };
                            let interior = if opts.all_interior { i + 1..k } else { i + 1..i + 2 };
                            for (p1, e1) in &pts[interior] {
                                let eps = e0.min(e1).min(e2).clone();
                                found.push(EConfiguration {
                                    base: base.clone(),
                                    interior_point: p1.clone(),
                                    whisker_direction: w,
                                    whisker_length: eps,
                                });
                            }
                        }
                    }
                }
                found
            })
            .collect();
        out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
        out
    }

    /// Checks that `base` with whiskers `w` is an E-configuration of this
    /// patch, returning the canonical witness.
    pub fn e_configuration_on(&self, base: &Segment, w: Direction) -> Result<EConfiguration, AnalysisError> {
        let base = base.canonical();
        let not = |why: &str| AnalysisError::NotAnEConfiguration(base.clone(), w, why.to_string());
        if base.direction().line() == w.line() {
            return Err(not("whiskers parallel to the basis"));
        }
        if !self.skeleton.contains_segment(&base) {
            return Err(not("basis is not in the skeleton"));
        }
        let e0 = self.skeleton.ray_length(&base.start, w).ok_or_else(|| not("no whisker at the start"))?;
        let e2 = self.skeleton.ray_length(&base.end, w).ok_or_else(|| not("no whisker at the end"))?;
        let interior = self
            .vertices_on(&base)
            .into_iter()
            .filter(|(_, p)| p != &base.start && p != &base.end)
            .find_map(|(_, p)| self.skeleton.ray_length(&p, w).map(|l| (p, l)));
        let Some((p1, e1)) = interior else {
            if self.is_shared_side(&base) {
                return Err(AnalysisError::SharedSide(base));
            }
            return Err(not("no interior whisker"));
        };
        let eps = e0.min(e1).min(e2);
        Ok(EConfiguration { base, interior_point: p1, whisker_direction: w, whisker_length: eps })
    }
}

/// E-configurations of `t` whose bases lie in the core.
pub fn find_e_configurations(t: &Tiling, margin: &Rational) -> Result<Vec<EConfiguration>, AnalysisError> {
    Ok(Patch::new(t, margin)?.e_configurations(DetectOptions::default()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentCase {
    /// The skeleton continues from the apex parallel to the old basis.
    Continue,
    /// It continues from the apex parallel to the old whiskers.
    Turn,
}

/// The construction behind one descent step, in the frame of `e`.
#[derive(Debug, Clone)]
pub struct DescentStep {
    pub next: EConfiguration,
    pub case: DescentCase,
    pub t1: Triangle,
    pub t2: Triangle,
    pub x1: LatticePoint,
    pub x2: LatticePoint,
    pub x3: LatticePoint,
}

impl Patch {
    /// Tile with vertex `x` whose edges at `x` run along `u` and `v`.
    fn corner_tile(&self, x: &LatticePoint, u: Direction, v: Direction) -> Option<&Triangle> {
        self.tiles_at(x).iter().map(|&k| &self.tiles[k]).find(|t| {
            let s = &t.side;
            let want = [&(x + &u.unit().scale(s)), &(x + &v.unit().scale(s))];
            let have = t.vertices();
            want.iter().all(|w| have.contains(w))
        })
    }

    pub fn next_e_configuration(&self, e: &EConfiguration) -> Result<DescentStep, AnalysisError> {
        let w = e.whisker_direction;
        let u0 = e.base.direction();
        // walk from the end at which the whiskers lean back over the basis
        let (x1, u) = match u0.turn_to(w) {
            2 | 4 => (e.base.start.clone(), u0),
            _ => (e.base.end.clone(), u0.opposite()),
        };
        let sigma = if u.turn_to(w) == 2 { 1 } else { -1 };
        let v = u.rotate(sigma);
        let t1 = self.corner_tile(&x1, u, v).cloned().ok_or_else(|| AnalysisError::WindowExhausted(x1.clone()))?;
        if !self.core.contains_triangle(&t1) {
            return Err(AnalysisError::WindowExhausted(x1));
        }
        let s1 = t1.side.clone();
        let x2 = &x1 + &u.unit().scale(&s1);
        let x3 = &x1 + &v.unit().scale(&s1);
        let t2 = self.corner_tile(&x2, u, v).cloned().ok_or_else(|| AnalysisError::WindowExhausted(x2.clone()))?;
        if !self.core.contains_triangle(&t2) {
            return Err(AnalysisError::WindowExhausted(x2));
        }
        let (case, basis, dir) = if self.skeleton.ray_length(&x3, u).is_some() {
            (DescentCase::Continue, Segment::new(x2.clone(), x3.clone()).expect("side of T1"), u)
        } else if self.skeleton.ray_length(&x3, w).is_some() {
            (DescentCase::Turn, Segment::new(x1.clone(), x3.clone()).expect("side of T1"), w)
        } else {
            return Err(AnalysisError::NoContinuation(x3));
        };
        let next = self.e_configuration_on(&basis, dir)?;
        let (prev, len) = (e.length(), next.length());
        if len > &prev - &self.inf_diameter {
            return Err(AnalysisError::InsufficientDrop { prev, next: len });
        }
        Ok(DescentStep { next, case, t1, t2, x1, x2, x3 })
    }
}

#[derive(Debug, Clone)]
pub struct DescentTrace {
    pub steps: Vec<EConfiguration>,
    pub lengths: Vec<Rational>,
    pub cases: Vec<DescentCase>,
    /// Why the descent stopped before `max_steps`, if it did.
    pub halted: Option<AnalysisError>,
}

impl Patch {
    pub fn descend(&self, e: &EConfiguration, max_steps: usize) -> Result<DescentTrace, AnalysisError> {
        let start = self.e_configuration_on(&e.base, e.whisker_direction)?;
        let mut trace = DescentTrace { lengths: vec![start.length()], steps: vec![start], cases: Vec::new(), halted: None };
        while trace.cases.len() < max_steps {
            match self.next_e_configuration(trace.steps.last().expect("nonempty")) {
                Ok(step) => {
                    trace.lengths.push(step.next.length());
                    trace.cases.push(step.case);
                    trace.steps.push(step.next);
                }
                Err(err) => {
                    trace.halted = Some(err);
                    break;
                }
            }
        }
        Ok(trace)
    }
}

/// Descent from `e` in `t`, analysed with the given margin.
pub fn descend(t: &Tiling, e: &EConfiguration, margin: &Rational, max_steps: usize) -> Result<DescentTrace, AnalysisError> {
    Patch::new(t, margin)?.descend(e, max_steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Figure5,
    Other,
}

/// Local structure on both sides of a maximal segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentNeighborhood {
    /// Tiles on the left of the segment's positive direction.
    pub n_n: usize,
    /// Tiles on the right.
    pub n_s: usize,
    /// Line direction of the maximal segment through the start point.
    pub start_bound: Option<Direction>,
    pub end_bound: Option<Direction>,
    pub pattern: Pattern,
}

impl Patch {
    /// Counts and bounding directions around `m`.
    ///
    /// Segments leaving the core are classified only when the counts alone
    /// already rule the pattern out, since clipping can only hide tiles.
    pub fn neighborhood_topology(&self, m: &MaximalSegment) -> Result<SegmentNeighborhood, AnalysisError> {
        let seg = &m.segment;
        let clipped = || AnalysisError::Clipped(seg.clone());
        let (left, right) = self.sides_along(seg);
        let (lo, hi) = seg.interval();
        let partitions = |v: &[&SideRef]| {
            let mut at = lo.clone();
            for s in v {
                if s.lo != at {
                    return false;
                }
                at = s.hi.clone();
            }
            at == hi
        };
        if !partitions(&left) || !partitions(&right) {
            return Err(clipped());
        }
        let (n_n, n_s) = (left.len(), right.len());
        let inside = self.core.contains_segment(seg);
        if !inside && n_n.max(n_s) < 3 {
            return Err(clipped());
        }
        let d = m.line_direction;
        let bound = |p: &LatticePoint| {
            if !self.core.contains_point(p) {
                return None;
            }
            self.skeleton.crossing_line(p, d.line()).map(|l| l.direction())
        };
        let (start_bound, end_bound) = (bound(&seg.start), bound(&seg.end));
        let steep = Some(d.rotate(2).line().direction());
        let shallow = Some(d.rotate(1).line().direction());
        let figure5 = inside
            && match (n_n, n_s) {
                (1, 2) => start_bound == steep && end_bound == shallow,
                (2, 1) => start_bound == shallow && end_bound == steep,
                _ => false,
            };
        let pattern = if figure5 { Pattern::Figure5 } else { Pattern::Other };
        Ok(SegmentNeighborhood { n_n, n_s, start_bound, end_bound, pattern })
    }
}

/// Skeleton of a valid tiling's own tile list.
pub fn build_skeleton(t: &Tiling) -> Result<Skeleton, AnalysisError> {
    let report = t.validate()?;
    if let Some(f) = report.failure {
        return Err(AnalysisError::InvalidTiling(f));
    }
    Ok(Skeleton::from_tiles(&t.tiles))
}

pub fn maximal_segments(s: &Skeleton) -> Vec<MaximalSegment> {
    s.maximal_segments()
}
