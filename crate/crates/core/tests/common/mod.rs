//! Slow, independent reference implementations shared by the integration
//! tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use trilab::analysis::{EConfiguration, Patch};
use trilab::lattice::{Direction, LatticePoint, Rational, Segment};

/// Parameter of `p` along the ray from `a` in direction `u`; `p` must lie
/// on that line.
fn param(a: &LatticePoint, u: &LatticePoint, p: &LatticePoint) -> Rational {
    let d = p - a;
    if !u.a.is_zero() {
        &d.a / &u.a
    } else {
        &d.b / &u.b
    }
}

/// Tile sides grouped by carrying line, the line of `a` along `u` being
/// identified by `(u, u × a)`.
pub struct Sides(HashMap<(LatticePoint, Rational), Vec<(LatticePoint, LatticePoint)>>);

impl Sides {
    pub fn of(patch: &Patch) -> Sides {
        let mut m: HashMap<_, Vec<_>> = HashMap::new();
        for t in &patch.tiles {
            let v = t.vertices();
            for k in 0..3 {
                let (s0, s1) = (v[k].clone(), v[(k + 1) % 3].clone());
                let d = &s1 - &s0;
                let u = [Direction::E, Direction::NE, Direction::NW]
                    .into_iter()
                    .map(|x| x.unit())
                    .find(|u| u.cross(&d).is_zero())
                    .expect("tile sides are lattice directions");
                m.entry((u.clone(), u.cross(&s0))).or_default().push((s0, s1));
            }
        }
        Sides(m)
    }

    /// Sorted, merged parameter intervals of tile sides on the line through
    /// `a` along `u`.
    fn cover(&self, a: &LatticePoint, u: &LatticePoint) -> Vec<(Rational, Rational)> {
        // sides are filed under the positive direction of their line
        let pos = if self.0.keys().any(|(k, _)| k == u) { u.clone() } else { -u };
        let key = (pos.clone(), pos.cross(a));
        let mut iv: Vec<(Rational, Rational)> = self
            .0
            .get(&key)
            .map(|v| {
                v.iter()
                    .map(|(s0, s1)| {
                        let (x, y) = (param(a, u, s0), param(a, u, s1));
                        if x < y {
                            (x, y)
                        } else {
                            (y, x)
                        }
                    })
                    .collect()
            })
            .unwrap_or_default();
        iv.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::new();
        for (lo, hi) in iv {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.clone().max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    /// Length of the skeleton run leaving `p` along `w` (zero if none).
    pub fn ray(&self, p: &LatticePoint, w: Direction) -> Rational {
        let u = w.unit();
        self.cover(p, &u)
            .into_iter()
            .find(|(lo, hi)| lo <= &Rational::zero() && &Rational::zero() < hi)
            .map_or_else(Rational::zero, |(_, hi)| hi)
    }
}

/// Every (basis, whisker direction, interior point) found by scanning all
/// ordered triples of collinear core tile vertices. `[p0, p2]` lies in the
/// skeleton exactly when the run leaving `p0` towards `p2` reaches it.
pub fn all_triples(patch: &Patch) -> BTreeSet<EConfiguration> {
    let mut pts: Vec<LatticePoint> = patch.tiles.iter().flat_map(|t| t.vertices()).filter(|p| patch.core.contains_point(p)).collect();
    pts.sort();
    pts.dedup();
    let sides = Sides::of(patch);
    let rays: HashMap<(LatticePoint, Direction), Rational> =
        pts.iter().flat_map(|p| Direction::ALL.map(|w| ((p.clone(), w), sides.ray(p, w)))).collect();
    let mut out = BTreeSet::new();
    for p0 in &pts {
        for d in [Direction::E, Direction::NE, Direction::NW] {
            let u = d.unit();
            let reach = &rays[&(p0.clone(), d)];
            // points of the run from p0, in order
            let mut run: Vec<(Rational, &LatticePoint)> = pts
                .iter()
                .filter(|q| u.cross(&(*q - p0)).is_zero())
                .map(|q| (param(p0, &u, q), q))
                .filter(|(t, _)| t > &Rational::zero() && t <= reach)
                .collect();
            run.sort();
            for w in Direction::ALL.into_iter().filter(|w| w.line() != d.line()) {
                let e0 = &rays[&(p0.clone(), w)];
                if e0.is_zero() {
                    continue;
                }
                for (k, (_, p2)) in run.iter().enumerate() {
                    let e2 = &rays[&((*p2).clone(), w)];
                    if e2.is_zero() {
                        continue;
                    }
                    for (_, p1) in &run[..k] {
                        let e1 = &rays[&((*p1).clone(), w)];
                        if e1.is_zero() {
                            continue;
                        }
                        out.insert(EConfiguration {
                            base: Segment::new(p0.clone(), (*p2).clone()).unwrap(),
                            interior_point: (*p1).clone(),
                            whisker_direction: w,
                            whisker_length: e0.clone().min(e1.clone()).min(e2.clone()),
                        });
                    }
                }
            }
        }
    }
    out
}

/// One witness per (basis, direction): the interior point nearest the start.
pub fn canonical(all: &BTreeSet<EConfiguration>) -> BTreeSet<EConfiguration> {
    let mut best: std::collections::BTreeMap<(Segment, Direction), EConfiguration> = Default::default();
    for e in all {
        let key = (e.base.clone(), e.whisker_direction);
        let closer = |old: &EConfiguration| {
            let u = e.base.direction().unit();
            param(&e.base.start, &u, &e.interior_point) < param(&e.base.start, &u, &old.interior_point)
        };
        match best.get(&key) {
            Some(old) if !closer(old) => {}
            _ => {
                best.insert(key, e.clone());
            }
        }
    }
    best.into_values().collect()
}
