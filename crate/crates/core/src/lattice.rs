//! Exact geometry over the triangular lattice.
//!
//! Points are stored in the basis `e1 = (1, 0)`, `e2 = (1/2, √3/2)`, so a
//! point `(a, b)` sits at Cartesian `(a + b/2, b·√3/2)`. Every edge of every
//! tile lies on a line of one of three directions, and in this basis those
//! lines are `b = const`, `a = const` and `a + b = const`. All predicates are
//! therefore rational; `√3` only shows up in [`LatticePoint::to_cartesian`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for a small rational constant.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Formats as `num/den` in lowest terms; integers keep the `/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer. The result is normalized.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Malformed(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// A point with exact coordinates in the `(e1, e2)` lattice basis.
///
/// Ordering is lexicographic on `(a, b)`; it is only used to make outputs
/// deterministic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub a: Rational,
    pub b: Rational,
}

impl LatticePoint {
    pub fn new(a: Rational, b: Rational) -> Self {
        LatticePoint { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        LatticePoint::new(int(a), int(b))
    }

    pub fn origin() -> Self {
        LatticePoint::new(Rational::zero(), Rational::zero())
    }

    /// Floating-point Cartesian image. Rendering only.
    pub fn to_cartesian(&self) -> (f64, f64) {
        let a = to_f64(&self.a);
        let b = to_f64(&self.b);
        (a + b / 2.0, b * 3f64.sqrt() / 2.0)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        LatticePoint::new(&self.a * k, &self.b * k)
    }

    /// Squared Euclidean length, `a² + ab + b²`.
    pub fn norm_sq(&self) -> Rational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    /// `a1·b2 − a2·b1`; has the sign of the Cartesian cross product.
    pub fn cross(&self, other: &LatticePoint) -> Rational {
        &self.a * &other.b - &other.a * &self.b
    }

    /// Rotation by 60° counterclockwise about the origin.
    pub fn rotate60(&self) -> Self {
        LatticePoint::new(-self.b.clone(), &self.a + &self.b)
    }

    /// Reflection across the horizontal axis.
    pub fn reflect(&self) -> Self {
        LatticePoint::new(&self.a + &self.b, -self.b.clone())
    }

    /// Position of a point along lines of the given family, together with
    /// the constant that identifies the line it lies on.
    pub(crate) fn line_coords(&self, line: LineDir) -> (Rational, Rational) {
        match line {
            LineDir::E => (self.b.clone(), self.a.clone()),
            LineDir::NE => (self.a.clone(), self.b.clone()),
            LineDir::NW => (&self.a + &self.b, self.b.clone()),
        }
    }

    pub(crate) fn from_line_coords(line: LineDir, offset: &Rational, t: &Rational) -> Self {
        match line {
            LineDir::E => LatticePoint::new(t.clone(), offset.clone()),
            LineDir::NE => LatticePoint::new(offset.clone(), t.clone()),
            LineDir::NW => LatticePoint::new(offset - t, t.clone()),
        }
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.a.clone(), -self.b.clone())
    }
}

/// One of the six directed lattice directions, counterclockwise from east.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    E,
    NE,
    NW,
    W,
    SW,
    SE,
}

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction::E,
        Direction::NE,
        Direction::NW,
        Direction::W,
        Direction::SW,
        Direction::SE,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Direction {
        Direction::ALL[i % 6]
    }

    pub fn rotate60(self) -> Direction {
        self.rotate(1)
    }

    /// Rotation by `k · 60°`; negative `k` turns clockwise.
    pub fn rotate(self, k: i32) -> Direction {
        Direction::from_index((self.index() as i32 + k).rem_euclid(6) as usize)
    }

    pub fn opposite(self) -> Direction {
        self.rotate(3)
    }

    /// Unit step in lattice coordinates.
    pub fn unit(self) -> LatticePoint {
        let (a, b) = match self {
            Direction::E => (1, 0),
            Direction::NE => (0, 1),
            Direction::NW => (-1, 1),
            Direction::W => (-1, 0),
            Direction::SW => (0, -1),
            Direction::SE => (1, -1),
        };
        LatticePoint::from_ints(a, b)
    }

    pub fn line(self) -> LineDir {
        LineDir::ALL[self.index() % 3]
    }

    /// True for E, NE, NW: the orientation along which line parameters grow.
    pub fn is_positive(self) -> bool {
        self.index() < 3
    }

    /// Counterclockwise turn from `self` to `other` in multiples of 60°.
    pub fn turn_to(self, other: Direction) -> usize {
        (other.index() + 6 - self.index()) % 6
    }

    /// Direction and length of a nonzero lattice-direction vector.
    pub fn of_vector(v: &LatticePoint) -> Option<(Direction, Rational)> {
        let zero = Rational::zero();
        let (a, b) = (&v.a, &v.b);
        let res = if b.is_zero() && !a.is_zero() {
            if a > &zero {
                (Direction::E, a.clone())
            } else {
                (Direction::W, -a.clone())
            }
        } else if a.is_zero() && !b.is_zero() {
            if b > &zero {
                (Direction::NE, b.clone())
            } else {
                (Direction::SW, -b.clone())
            }
        } else if !a.is_zero() && (a + b).is_zero() {
            if b > &zero {
                (Direction::NW, b.clone())
            } else {
                (Direction::SE, a.clone())
            }
        } else {
            return None;
        };
        Some(res)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Undirected line family, named after its positive direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineDir {
    E,
    NE,
    NW,
}

impl LineDir {
    pub const ALL: [LineDir; 3] = [LineDir::E, LineDir::NE, LineDir::NW];

    pub fn direction(self) -> Direction {
        match self {
            LineDir::E => Direction::E,
            LineDir::NE => Direction::NE,
            LineDir::NW => Direction::NW,
        }
    }
}

/// A specific lattice line: its family and the constant (`b`, `a` or `a+b`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    pub dir: LineDir,
    pub offset: Rational,
}

impl LineKey {
    pub fn through(p: &LatticePoint, dir: LineDir) -> LineKey {
        LineKey { dir, offset: p.line_coords(dir).0 }
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.line_coords(self.dir).0 == self.offset
    }

    pub fn param(&self, p: &LatticePoint) -> Rational {
        p.line_coords(self.dir).1
    }

    pub fn point(&self, t: &Rational) -> LatticePoint {
        LatticePoint::from_line_coords(self.dir, &self.offset, t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate segment at {0}")]
    DegenerateSegment(LatticePoint),
    #[error("segment {0} -> {1} is not along a lattice direction")]
    NotLatticeDirection(LatticePoint, LatticePoint),
    #[error("triangle side must be positive, got {0}")]
    NonPositiveSide(Rational),
    #[error("points {0:?} are not the vertices of a lattice-aligned equilateral triangle")]
    NotATriangle(Vec<LatticePoint>),
}

/// A closed segment along one of the lattice directions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub start: LatticePoint,
    pub end: LatticePoint,
}

impl Segment {
    pub fn new(start: LatticePoint, end: LatticePoint) -> Result<Segment, GeometryError> {
        if start == end {
            return Err(GeometryError::DegenerateSegment(start));
        }
        if Direction::of_vector(&(&end - &start)).is_none() {
            return Err(GeometryError::NotLatticeDirection(start, end));
        }
        Ok(Segment { start, end })
    }

    pub fn direction(&self) -> Direction {
        Direction::of_vector(&(&self.end - &self.start)).expect("validated at construction").0
    }

    pub fn length(&self) -> Rational {
        Direction::of_vector(&(&self.end - &self.start)).expect("validated at construction").1
    }

    pub fn line(&self) -> LineKey {
        LineKey::through(&self.start, self.direction().line())
    }

    /// Parameter interval `(lo, hi)` along [`Segment::line`].
    pub fn interval(&self) -> (Rational, Rational) {
        let key = self.line();
        let (s, e) = (key.param(&self.start), key.param(&self.end));
        if s <= e {
            (s, e)
        } else {
            (e, s)
        }
    }

    /// Same segment with endpoints ordered along the positive line direction.
    pub fn canonical(&self) -> Segment {
        if self.direction().is_positive() {
            self.clone()
        } else {
            Segment { start: self.end.clone(), end: self.start.clone() }
        }
    }

    pub fn reversed(&self) -> Segment {
        Segment { start: self.end.clone(), end: self.start.clone() }
    }

    pub fn contains_point(&self, p: &LatticePoint) -> bool {
        let key = self.line();
        if !key.contains(p) {
            return false;
        }
        let (lo, hi) = self.interval();
        let t = key.param(p);
        lo <= t && t <= hi
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} -> {:?}]", self.start, self.end)
    }
}

/// Nondegenerate common part of two collinear segments, oriented like `s1`.
pub fn segment_overlap(s1: &Segment, s2: &Segment) -> Option<Segment> {
    let key = s1.line();
    if key != s2.line() {
        return None;
    }
    let (lo1, hi1) = s1.interval();
    let (lo2, hi2) = s2.interval();
    let lo = lo1.max(lo2);
    let hi = hi1.min(hi2);
    if lo >= hi {
        return None;
    }
    let (p, q) = (key.point(&lo), key.point(&hi));
    let seg = if s1.direction().is_positive() { Segment { start: p, end: q } } else { Segment { start: q, end: p } };
    Some(seg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Up,
    Down,
}

/// An equilateral triangle with sides along the lattice directions.
///
/// `anchor` is the west endpoint of the horizontal side. Up triangles have
/// vertices `anchor`, `anchor + (s, 0)`, `anchor + (0, s)`; down triangles
/// `anchor`, `anchor + (s, 0)`, `anchor + (s, −s)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle {
    pub orientation: Orientation,
    pub anchor: LatticePoint,
    pub side: Rational,
}

/// Open interval bounds; `None` is unbounded.
#[derive(Clone, Debug)]
struct Bounds {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl Bounds {
    fn meet(&self, other: &Bounds) -> Bounds {
        let lo = match (&self.lo, &other.lo) {
            (Some(x), Some(y)) => Some(x.max(y).clone()),
            (x, y) => x.clone().or_else(|| y.clone()),
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(x), Some(y)) => Some(x.min(y).clone()),
            (x, y) => x.clone().or_else(|| y.clone()),
        };
        Bounds { lo, hi }
    }

    fn is_open_nonempty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => l < h,
            _ => true,
        }
    }
}

fn add_opt(x: &Option<Rational>, y: &Option<Rational>) -> Option<Rational> {
    match (x, y) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl Triangle {
    pub fn new(orientation: Orientation, anchor: LatticePoint, side: Rational) -> Result<Triangle, GeometryError> {
        if !side.is_positive() {
            return Err(GeometryError::NonPositiveSide(side));
        }
        Ok(Triangle { orientation, anchor, side })
    }

    pub fn up(anchor: LatticePoint, side: Rational) -> Triangle {
        Triangle::new(Orientation::Up, anchor, side).expect("positive side")
    }

    pub fn down(anchor: LatticePoint, side: Rational) -> Triangle {
        Triangle::new(Orientation::Down, anchor, side).expect("positive side")
    }

    /// Recovers the triangle from its three vertices, in any order.
    pub fn from_vertices(pts: &[LatticePoint; 3]) -> Result<Triangle, GeometryError> {
        let err = || GeometryError::NotATriangle(pts.to_vec());
        // the horizontal side is the pair with equal b
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            if pts[i].b == pts[j].b && pts[i].a != pts[j].a {
                let (w, e) = if pts[i].a < pts[j].a { (&pts[i], &pts[j]) } else { (&pts[j], &pts[i]) };
                let s = &e.a - &w.a;
                let apex = &pts[k];
                let orientation = if apex.b > w.b { Orientation::Up } else { Orientation::Down };
                let t = Triangle::new(orientation, w.clone(), s).map_err(|_| err())?;
                if &t.apex() == apex {
                    return Ok(t);
                }
                return Err(err());
            }
        }
        Err(err())
    }

    pub fn diameter(&self) -> &Rational {
        &self.side
    }

    /// Area in lattice units (true area divided by `√3/4`).
    pub fn area(&self) -> Rational {
        &self.side * &self.side
    }

    fn east(&self) -> LatticePoint {
        LatticePoint::new(&self.anchor.a + &self.side, self.anchor.b.clone())
    }

    /// The vertex off the horizontal side.
    pub fn apex(&self) -> LatticePoint {
        match self.orientation {
            Orientation::Up => LatticePoint::new(self.anchor.a.clone(), &self.anchor.b + &self.side),
            Orientation::Down => LatticePoint::new(&self.anchor.a + &self.side, &self.anchor.b - &self.side),
        }
    }

    /// `[anchor, anchor + (s, 0), apex]`.
    pub fn vertices(&self) -> [LatticePoint; 3] {
        [self.anchor.clone(), self.east(), self.apex()]
    }

    /// Vertices in counterclockwise order starting at the anchor.
    pub fn ccw_vertices(&self) -> [LatticePoint; 3] {
        match self.orientation {
            Orientation::Up => [self.anchor.clone(), self.east(), self.apex()],
            Orientation::Down => [self.anchor.clone(), self.apex(), self.east()],
        }
    }

    /// Side `k` as the directed segment `v_k -> v_{k+1}` of [`Triangle::ccw_vertices`].
    pub fn side_segment(&self, k: usize) -> Segment {
        let v = self.ccw_vertices();
        Segment { start: v[k % 3].clone(), end: v[(k + 1) % 3].clone() }
    }

    pub fn sides(&self) -> [Segment; 3] {
        [self.side_segment(0), self.side_segment(1), self.side_segment(2)]
    }

    // Up: a > A, b > B, a+b < A+B+s. Down: a < A+s, b < B, a+b > A+B.
    fn bounds(&self) -> [Bounds; 3] {
        let (a0, b0, s) = (&self.anchor.a, &self.anchor.b, &self.side);
        match self.orientation {
            Orientation::Up => [
                Bounds { lo: Some(a0.clone()), hi: None },
                Bounds { lo: Some(b0.clone()), hi: None },
                Bounds { lo: None, hi: Some(a0 + b0 + s) },
            ],
            Orientation::Down => [
                Bounds { lo: None, hi: Some(a0 + s) },
                Bounds { lo: None, hi: Some(b0.clone()) },
                Bounds { lo: Some(a0 + b0), hi: None },
            ],
        }
    }

    /// Closed containment.
    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.contains_with(p, |x, y| x <= y)
    }

    /// Open containment (interior only).
    pub fn contains_interior(&self, p: &LatticePoint) -> bool {
        self.contains_with(p, |x, y| x < y)
    }

    fn contains_with(&self, p: &LatticePoint, le: impl Fn(&Rational, &Rational) -> bool) -> bool {
        let c = &p.a + &p.b;
        let coords = [&p.a, &p.b, &c];
        let bounds = self.bounds();
        let inside = bounds.iter().zip(coords).all(|(bd, x)| {
            bd.lo.as_ref().map_or(true, |l| le(l, x)) && bd.hi.as_ref().map_or(true, |h| le(x, h))
        });
        inside
    }

    /// `(a_min, a_max, b_min, b_max)`.
    pub fn bbox(&self) -> (Rational, Rational, Rational, Rational) {
        let a0 = self.anchor.a.clone();
        let a1 = &self.anchor.a + &self.side;
        match self.orientation {
            Orientation::Up => (a0, a1, self.anchor.b.clone(), &self.anchor.b + &self.side),
            Orientation::Down => (a0, a1, &self.anchor.b - &self.side, self.anchor.b.clone()),
        }
    }

    pub fn translate(&self, v: &LatticePoint) -> Triangle {
        Triangle { orientation: self.orientation, anchor: &self.anchor + v, side: self.side.clone() }
    }

    pub fn scale(&self, k: &Rational) -> Triangle {
        assert!(k.is_positive(), "scale factor must be positive");
        Triangle { orientation: self.orientation, anchor: self.anchor.scale(k), side: &self.side * k }
    }

    /// Image under a vertex map that preserves the lattice directions.
    pub fn map_vertices(&self, f: impl Fn(&LatticePoint) -> LatticePoint) -> Triangle {
        let v = self.vertices();
        Triangle::from_vertices(&[f(&v[0]), f(&v[1]), f(&v[2])]).expect("lattice symmetry maps triangles to triangles")
    }
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}s{}", self.orientation, self.anchor, self.side)
    }
}

/// True iff the open triangles intersect.
///
/// Each triangle is the intersection of three half-planes bounding `a`, `b`
/// and `a + b`. Their intersection is a box in `(a, b)` cut by a band in
/// `a + b`, which is nonempty iff both coordinate intervals are nonempty and
/// the band meets the range of `a + b` over the box.
pub fn interiors_overlap(t1: &Triangle, t2: &Triangle) -> bool {
    let [a1, b1, c1] = t1.bounds();
    let [a2, b2, c2] = t2.bounds();
    let a = a1.meet(&a2);
    let b = b1.meet(&b2);
    let c = c1.meet(&c2);
    if !(a.is_open_nonempty() && b.is_open_nonempty() && c.is_open_nonempty()) {
        return false;
    }
    let sum = Bounds { lo: add_opt(&a.lo, &b.lo), hi: add_opt(&a.hi, &b.hi) };
    c.meet(&sum).is_open_nonempty()
}

/// Orientation sign of the turn `p -> q -> r`.
pub(crate) fn orient(p: &LatticePoint, q: &LatticePoint, r: &LatticePoint) -> Ordering {
    (q - p).cross(&(r - p)).cmp(&Rational::zero())
}
