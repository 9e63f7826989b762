//! The skeleton of a tiling: the union of all tile boundaries, stored as
//! merged parameter intervals on each lattice line.

use std::collections::BTreeMap;

use crate::lattice::{Direction, LatticePoint, LineDir, LineKey, Rational, Segment, Triangle};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    lines: BTreeMap<LineKey, Vec<(Rational, Rational)>>,
}

/// A maximal segment of the skeleton, oriented along its positive direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximalSegment {
    pub line_direction: Direction,
    pub segment: Segment,
}

impl MaximalSegment {
    pub fn line(&self) -> LineKey {
        self.segment.line()
    }

    pub fn length(&self) -> Rational {
        self.segment.length()
    }
}

fn merge(mut iv: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    iv.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(iv.len());
    for (lo, hi) in iv {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

impl Skeleton {
    pub fn from_tiles(tiles: &[Triangle]) -> Skeleton {
        let mut raw: BTreeMap<LineKey, Vec<(Rational, Rational)>> = BTreeMap::new();
        for t in tiles {
            for s in t.sides() {
                raw.entry(s.line()).or_default().push(s.interval());
            }
        }
        let lines = raw.into_iter().map(|(k, v)| (k, merge(v))).collect();
        Skeleton { lines }
    }

    /// Merged segments in canonical order: line direction, then start, then end.
    pub fn segments(&self) -> Vec<Segment> {
        self.maximal_segments().into_iter().map(|m| m.segment).collect()
    }

    pub fn maximal_segments(&self) -> Vec<MaximalSegment> {
        let mut out: Vec<MaximalSegment> = self
            .lines
            .iter()
            .flat_map(|(key, iv)| {
                iv.iter().map(move |(lo, hi)| MaximalSegment {
                    line_direction: key.dir.direction(),
                    segment: Segment { start: key.point(lo), end: key.point(hi) },
                })
            })
            .collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.lines.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    fn interval_at(&self, key: &LineKey, t: &Rational) -> Option<&(Rational, Rational)> {
        let iv = self.lines.get(key)?;
        let idx = iv.partition_point(|(lo, _)| lo <= t);
        idx.checked_sub(1).map(|k| &iv[k]).filter(|(_, hi)| t <= hi)
    }

    /// Length of the skeleton ray leaving `p` in direction `w`, if positive.
    pub fn ray_length(&self, p: &LatticePoint, w: Direction) -> Option<Rational> {
        let key = LineKey::through(p, w.line());
        let t = key.param(p);
        let (lo, hi) = self.interval_at(&key, &t)?;
        let len = if w.is_positive() { hi - &t } else { &t - lo };
        (len > Rational::from_integer(0.into())).then_some(len)
    }

    pub fn contains_segment(&self, s: &Segment) -> bool {
        let (lo, hi) = s.interval();
        self.interval_at(&s.line(), &lo).is_some_and(|(_, h)| &hi <= h)
    }

    /// The maximal segment through `p` along lines of family `dir`, if any.
    pub fn maximal_through(&self, p: &LatticePoint, dir: LineDir) -> Option<MaximalSegment> {
        let key = LineKey::through(p, dir);
        let (lo, hi) = self.interval_at(&key, &key.param(p))?;
        Some(MaximalSegment { line_direction: dir.direction(), segment: Segment { start: key.point(lo), end: key.point(hi) } })
    }

    /// Line family of a maximal segment having `p` in its relative interior.
    pub fn crossing_line(&self, p: &LatticePoint, exclude: LineDir) -> Option<LineDir> {
        LineDir::ALL.into_iter().filter(|&d| d != exclude).find(|&d| {
            let key = LineKey::through(p, d);
            let t = key.param(p);
            self.interval_at(&key, &t).is_some_and(|(lo, hi)| lo < &t && &t < hi)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn p(a: i64, b: i64) -> LatticePoint {
        LatticePoint::from_ints(a, b)
    }

    #[test]
    fn single_tile_has_three_segments() {
        let s = Skeleton::from_tiles(&[Triangle::up(p(0, 0), int(1))]);
        assert_eq!(s.len(), 3);
        let dirs: Vec<_> = s.maximal_segments().iter().map(|m| m.line_direction).collect();
        assert_eq!(dirs, vec![Direction::E, Direction::NE, Direction::NW]);
    }

    #[test]
    fn rhombus_stores_shared_edge_once() {
        let s = Skeleton::from_tiles(&[Triangle::up(p(0, 0), int(1)), Triangle::down(p(0, 1), int(1))]);
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn collinear_sides_merge() {
        let s = Skeleton::from_tiles(&[Triangle::up(p(0, 0), int(1)), Triangle::up(p(1, 0), int(1))]);
        let south = Segment::new(p(0, 0), p(2, 0)).unwrap();
        assert!(s.contains_segment(&south));
        assert_eq!(s.ray_length(&p(0, 0), Direction::E), Some(int(2)));
        assert_eq!(s.ray_length(&p(1, 0), Direction::W), Some(int(1)));
        assert_eq!(s.ray_length(&p(2, 0), Direction::E), None);
        assert_eq!(s.ray_length(&p(1, 0), Direction::NW), Some(int(1)));
        assert_eq!(s.crossing_line(&p(1, 0), LineDir::NE), Some(LineDir::E));
    }
}
