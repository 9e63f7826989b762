//! Recovering the T/L/R structure of an E-configuration-free tiling of the
//! plane, and reading the family parameter off it.
//!
//! Each unit tile `T(i, j)` ((i, j) with `i + j` even) has its three sides
//! split into two collinear sides of smaller tiles. Going counterclockwise
//! around `T(i, j)` from its "south" side, the three splits are
//! `(L(i, j), R(i, j))`, `(L(i+1, j+1), R(i, j+2))` and
//! `(L(i, j+2), R(i-1, j+1))`, each pair listed in counterclockwise order.

use std::collections::{BTreeMap, VecDeque};

use num_traits::One;
use thiserror::Error;

use crate::analysis::{AnalysisError, Patch, Pattern, SegmentNeighborhood};
use crate::generators::FamilyParams;
use crate::lattice::{rat, Rational, Segment};
use crate::skeleton::MaximalSegment;
use crate::tiling::Tiling;

pub type Index = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    T,
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TlrError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("no maximal segment with a complete neighbourhood lies in the core")]
    NoSeed,
    #[error("neighbourhood of {segment:?} does not have the one-over-two pattern ({neighborhood:?})")]
    TopologyMismatch { segment: Segment, neighborhood: Option<SegmentNeighborhood> },
    #[error("{role:?}{index:?} assigned to two different tiles")]
    Conflict { role: Role, index: Index },
    #[error("tile {tile} labelled both {first:?} and {second:?}")]
    DoubleLabel { tile: usize, first: (Role, Index), second: (Role, Index) },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("relation {equation} fails at {index:?}")]
pub struct RelationError {
    pub equation: &'static str,
    pub index: Index,
}

/// Labelling of patch tiles by role and index.
#[derive(Debug, Clone)]
pub struct TlrIndexing {
    /// Tiles of the analysed patch; labels refer to positions in this list.
    pub tiles: Vec<crate::lattice::Triangle>,
    pub t: BTreeMap<Index, usize>,
    pub l: BTreeMap<Index, usize>,
    pub r: BTreeMap<Index, usize>,
    /// Counterclockwise index of the south side of each `T`.
    pub south: BTreeMap<Index, usize>,
    /// Indices of the `T` tiles whose neighbourhoods were checked.
    pub expanded: Vec<Index>,
}

impl TlrIndexing {
    pub fn triple(&self, i: i64, j: i64) -> Option<[usize; 3]> {
        Some([*self.t.get(&(i, j))?, *self.l.get(&(i, j))?, *self.r.get(&(i, j))?])
    }

    pub fn role_of(&self, tile: usize) -> Option<(Role, Index)> {
        let find = |m: &BTreeMap<Index, usize>, role| m.iter().find(|(_, &k)| k == tile).map(|(&ix, _)| (role, ix));
        find(&self.t, Role::T).or_else(|| find(&self.l, Role::L)).or_else(|| find(&self.r, Role::R))
    }

    fn size(&self, m: &BTreeMap<Index, usize>, ix: Index) -> Option<&Rational> {
        m.get(&ix).map(|&k| &self.tiles[k].side)
    }

    /// Side lengths of the `T` tiles, by index.
    pub fn diameter_field(&self) -> BTreeMap<Index, Rational> {
        self.t.iter().map(|(&ix, &k)| (ix, self.tiles[k].side.clone())).collect()
    }

    /// The three splittings at every `T` whose partners are all labelled.
    pub fn split_relations(&self) -> Vec<(Index, [usize; 3], [usize; 3])> {
        let mut out = Vec::new();
        for &(i, j) in self.t.keys() {
            let pairs = [((i, j), (i, j)), ((i + 1, j + 1), (i, j + 2)), ((i, j + 2), (i - 1, j + 1))];
            let (Some(ls), Some(rs)) = (
                pairs.iter().map(|(l, _)| self.l.get(l).copied()).collect::<Option<Vec<_>>>(),
                pairs.iter().map(|(_, r)| self.r.get(r).copied()).collect::<Option<Vec<_>>>(),
            ) else {
                continue;
            };
            out.push(((i, j), [ls[0], ls[1], ls[2]], [rs[0], rs[1], rs[2]]));
        }
        out
    }
}

struct Builder<'a> {
    patch: &'a Patch,
    idx: TlrIndexing,
    owner: BTreeMap<usize, (Role, Index)>,
}

impl<'a> Builder<'a> {
    fn label(&mut self, role: Role, ix: Index, tile: usize) -> Result<bool, TlrError> {
        let map = match role {
            Role::T => &mut self.idx.t,
            Role::L => &mut self.idx.l,
            Role::R => &mut self.idx.r,
        };
        match map.get(&ix) {
            Some(&k) if k == tile => return Ok(false),
            Some(_) => return Err(TlrError::Conflict { role, index: ix }),
            None => {}
        }
        if let Some(&prev) = self.owner.get(&tile) {
            return Err(TlrError::DoubleLabel { tile, first: prev, second: (role, ix) });
        }
        map.insert(ix, tile);
        self.owner.insert(tile, (role, ix));
        Ok(true)
    }

    /// Maximal segment carrying side `k` of tile `tile`, which must be the
    /// lone side over two collinear pieces; returns the pieces in
    /// counterclockwise order around the tile.
    fn split(&self, tile: usize, k: usize) -> Result<[usize; 2], TlrError> {
        let side = self.patch.tiles[tile].side_segment(k);
        let m = self
            .patch
            .skeleton
            .maximal_through(&midpoint(&side), side.direction().line())
            .expect("tile side lies in the skeleton");
        let mismatch = |n: Option<SegmentNeighborhood>| TlrError::TopologyMismatch { segment: m.segment.clone(), neighborhood: n };
        let n = self.patch.neighborhood_topology(&m).map_err(|_| mismatch(None))?;
        let tile_left = side.direction().is_positive();
        let own = if tile_left { n.n_n } else { n.n_s };
        if n.pattern != Pattern::Figure5 || own != 1 || m.segment.canonical() != side.canonical() {
            return Err(mismatch(Some(n)));
        }
        let mut pieces: Vec<usize> = self.patch.side_pieces(&m.segment, !tile_left).into_iter().map(|(t, _)| t).collect();
        if !tile_left {
            pieces.reverse();
        }
        Ok([pieces[0], pieces[1]])
    }

    /// The tile alone on the far side of side `k` of `tile`, with the index
    /// of its own side there.
    fn across(&self, tile: usize, k: usize) -> Option<(usize, usize)> {
        let side = self.patch.tiles[tile].side_segment(k);
        let m: MaximalSegment = self.patch.skeleton.maximal_through(&midpoint(&side), side.line().dir)?;
        match self.patch.side_pieces(&m.segment, !side.direction().is_positive())[..] {
            [(t, j)] => Some((t, j)),
            _ => None,
        }
    }

    /// Index of the side of `piece` lying on `owner`'s side `k`.
    fn side_on(&self, piece: usize, owner: usize, k: usize) -> usize {
        let line = self.patch.tiles[owner].side_segment(k).line();
        let sides = self.patch.tiles[piece].sides();
        sides.iter().position(|s| s.line() == line).expect("piece lies on the owner's side")
    }

    /// Labels the three up tiles a piece lies on. Going counterclockwise
    /// around the piece from the side on its south owner, it meets the
    /// owner splitting it on the north-east side and then the one
    /// splitting it on the north-west side.
    fn owners(&mut self, role: Role, (i, j): Index, piece: usize, south_side: usize, queue: &mut VecDeque<Index>) -> Result<(), TlrError> {
        let owners = match role {
            Role::L => [(i, j), (i - 1, j - 1), (i, j - 2)],
            Role::R => [(i, j), (i, j - 2), (i + 1, j - 1)],
            Role::T => unreachable!("only pieces have owners"),
        };
        for (kind, ix) in owners.into_iter().enumerate() {
            if let Some((t, side)) = self.across(piece, (south_side + kind) % 3) {
                if self.label(Role::T, ix, t)? {
                    self.idx.south.insert(ix, (side + 3 - kind) % 3);
                    queue.push_back(ix);
                }
            }
        }
        Ok(())
    }
}

fn midpoint(s: &Segment) -> crate::lattice::LatticePoint {
    (&s.start + &s.end).scale(&rat(1, 2))
}

/// Labels the tiles of `t`'s patch by the T/L/R scheme, starting from the
/// first maximal segment in the core whose neighbourhood is complete.
pub fn extract_tlr_indexing(t: &Tiling, margin: &Rational) -> Result<TlrIndexing, TlrError> {
    let patch = Patch::new(t, margin)?;
    extract_from_patch(&patch)
}

pub fn extract_from_patch(patch: &Patch) -> Result<TlrIndexing, TlrError> {
    let mut seed = None;
    for m in patch.maximal_segments().into_iter().filter(|m| patch.core.meets_segment(&m.segment)) {
        let Ok(n) = patch.neighborhood_topology(&m) else { continue };
        if n.pattern != Pattern::Figure5 {
            return Err(TlrError::TopologyMismatch { segment: m.segment, neighborhood: Some(n) });
        }
        let [(t, k)] = patch.side_pieces(&m.segment, n.n_n == 1)[..] else {
            unreachable!("pattern has one tile on this side")
        };
        if patch.core.contains_triangle(&patch.tiles[t]) {
            seed = Some((t, k));
            break;
        }
    }
    let (t0, k0) = seed.ok_or(TlrError::NoSeed)?;
    let mut b = Builder {
        patch,
        idx: TlrIndexing {
            tiles: patch.tiles.clone(),
            t: BTreeMap::new(),
            l: BTreeMap::new(),
            r: BTreeMap::new(),
            south: BTreeMap::new(),
            expanded: Vec::new(),
        },
        owner: BTreeMap::new(),
    };
    b.label(Role::T, (0, 0), t0)?;
    b.idx.south.insert((0, 0), k0);
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    while let Some((i, j)) = queue.pop_front() {
        let tile = b.idx.t[&(i, j)];
        if !patch.core.contains_triangle(&patch.tiles[tile]) {
            continue;
        }
        b.idx.expanded.push((i, j));
        let k = b.idx.south[&(i, j)];
        let s0 = b.split(tile, k)?;
        let s1 = b.split(tile, (k + 1) % 3)?;
        let s2 = b.split(tile, (k + 2) % 3)?;
        // (role, index, piece, which side of tile it lies on, kind of that side for the piece)
        let labels = [
            (Role::L, (i, j), s0[0], k, 0),
            (Role::R, (i, j), s0[1], k, 0),
            (Role::L, (i + 1, j + 1), s1[0], (k + 1) % 3, 1),
            (Role::R, (i, j + 2), s1[1], (k + 1) % 3, 1),
            (Role::L, (i, j + 2), s2[0], (k + 2) % 3, 2),
            (Role::R, (i - 1, j + 1), s2[1], (k + 2) % 3, 2),
        ];
        for (role, ix, piece, tside, kind) in labels {
            if b.label(role, ix, piece)? {
                let south_side = (b.side_on(piece, tile, tside) + 3 - kind) % 3;
                b.owners(role, ix, piece, south_side, &mut queue)?;
            }
        }
    }
    Ok(b.idx)
}

/// Checks the splitting relations and periodicities on every fully labelled
/// index, then returns the normalised parameter.
pub fn infer_alpha(idx: &TlrIndexing) -> Result<FamilyParams, RelationError> {
    let rel = idx.split_relations();
    let side = |k: usize| &idx.tiles[k].side;
    for (n, name) in [(0usize, "eq_sum1"), (1, "eq_sum2"), (2, "eq_sum3")] {
        for (ix, ls, rs) in &rel {
            let t = idx.size(&idx.t, *ix).expect("labelled");
            if &(side(ls[n]) + side(rs[n])) != t {
                return Err(RelationError { equation: name, index: *ix });
            }
        }
    }
    let (&origin, _) = idx.t.iter().next().ok_or(RelationError { equation: "t_constant", index: (0, 0) })?;
    let t0 = idx.size(&idx.t, origin).expect("labelled").clone();
    for (&ix, &k) in &idx.t {
        if side(k) != &t0 {
            return Err(RelationError { equation: "t_constant", index: ix });
        }
    }
    for (&(i, j), l) in idx.l.iter().map(|(ix, &k)| (ix, side(k))) {
        if idx.size(&idx.l, (i, j + 2)).is_some_and(|x| x != l) {
            return Err(RelationError { equation: "eq_L1", index: (i, j) });
        }
        if idx.size(&idx.l, (i + 1, j + 1)).is_some_and(|x| x != l) {
            return Err(RelationError { equation: "eq_L2", index: (i, j) });
        }
    }
    let l0 = idx.l.values().next().map(|&k| side(k).clone()).ok_or(RelationError { equation: "eq_L1", index: origin })?;
    for (&ix, &k) in &idx.r {
        if side(k) != &(&t0 - &l0) {
            return Err(RelationError { equation: "eq_R", index: ix });
        }
    }
    let mut alpha = &l0 / &t0;
    if alpha > rat(1, 2) {
        alpha = Rational::one() - alpha;
    }
    Ok(FamilyParams::new(alpha).expect("0 < L < T"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate_family, generate_hexagonal};
    use crate::lattice::int;

    fn family(alpha: Rational, reps: usize) -> (FamilyParams, Tiling) {
        let f = FamilyParams::new(alpha).unwrap();
        let t = generate_family(&f, reps).unwrap();
        (f, t)
    }

    #[test]
    fn round_trip_matches_generator_labels() {
        let (f, t) = family(rat(1, 4), 6);
        let patch = Patch::new(&t, &int(2)).unwrap();
        let idx = extract_from_patch(&patch).unwrap();
        let seed = &idx.tiles[idx.t[&(0, 0)]];
        let (di, dj) = (-12..12i64)
            .flat_map(|i| (-24..24i64).map(move |j| (i, j)))
            .filter(|(i, j)| (i + j) % 2 == 0)
            .find(|&(i, j)| &f.cell(i, j)[0] == seed)
            .expect("seed is a T of the family");
        for (role, map) in [(0, &idx.t), (1, &idx.l), (2, &idx.r)] {
            for (&(i, j), &k) in map {
                assert_eq!(idx.tiles[k], f.cell(i + di, j + dj)[role], "role {role} at {:?}", (i, j));
            }
        }
        for (k, tile) in patch.tiles.iter().enumerate() {
            if tile.side == int(1) && patch.core.contains_triangle(tile) {
                assert!(idx.t.values().any(|&x| x == k), "unit tile {tile:?} unlabelled");
            }
        }
        assert!(!idx.split_relations().is_empty());
        assert_eq!(infer_alpha(&idx).unwrap().alpha(), &rat(1, 4));
    }

    #[test]
    fn isometric_images_recover_alpha() {
        for alpha in [rat(1, 3), rat(2, 5)] {
            let (_, t) = family(alpha.clone(), 4);
            for img in [t.rotate60(), t.reflect(), t.rotate60().rotate60().rotate60()] {
                let idx = extract_tlr_indexing(&img, &int(2)).unwrap();
                assert_eq!(infer_alpha(&idx).unwrap().alpha(), &alpha);
            }
        }
    }

    #[test]
    fn half_needs_no_swap() {
        let (_, t) = family(rat(1, 2), 4);
        let idx = extract_tlr_indexing(&t, &int(2)).unwrap();
        assert_eq!(infer_alpha(&idx).unwrap().alpha(), &rat(1, 2));
    }

    #[test]
    fn hexagonal_window_is_a_topology_mismatch() {
        let t = generate_hexagonal(8).unwrap();
        match extract_tlr_indexing(&t, &int(2)) {
            Err(TlrError::TopologyMismatch { neighborhood: Some(n), .. }) => {
                assert_eq!(n.pattern, Pattern::Other);
                assert!(n.n_n > 2 && n.n_s > 2);
            }
            other => panic!("expected a mismatch, got {other:?}"),
        }
    }

    /// Indexing read straight off the generator, bypassing extraction.
    fn labelled(f: &FamilyParams, reps: usize) -> TlrIndexing {
        let mut idx = TlrIndexing {
            tiles: Vec::new(),
            t: BTreeMap::new(),
            l: BTreeMap::new(),
            r: BTreeMap::new(),
            south: BTreeMap::new(),
            expanded: Vec::new(),
        };
        for (ix, cell) in f.labels(reps) {
            for (map, tile) in [&mut idx.t, &mut idx.l, &mut idx.r].into_iter().zip(cell) {
                map.insert(ix, idx.tiles.len());
                idx.tiles.push(tile);
            }
        }
        idx
    }

    #[test]
    fn generator_labels_satisfy_relations() {
        let f = FamilyParams::new(rat(1, 5)).unwrap();
        assert_eq!(infer_alpha(&labelled(&f, 4)).unwrap().alpha(), &rat(1, 5));
    }

    #[test]
    fn perturbed_l_breaks_first_sum() {
        let f = FamilyParams::new(rat(1, 3)).unwrap();
        let mut idx = labelled(&f, 4);
        let k = idx.l[&(1, 3)];
        idx.tiles[k].side = rat(1, 4);
        let err = infer_alpha(&idx).unwrap_err();
        assert_eq!(err, RelationError { equation: "eq_sum1", index: (1, 3) });
    }

    #[test]
    fn swapped_roles_normalise() {
        // L and R exchanged: the L sizes become 1 - alpha
        let f = FamilyParams::new(rat(1, 5)).unwrap();
        let mut idx = labelled(&f, 3);
        for ix in idx.l.keys().copied().collect::<Vec<_>>() {
            let (l, r) = (idx.l[&ix], idx.r[&ix]);
            let (ls, rs) = (idx.tiles[l].side.clone(), idx.tiles[r].side.clone());
            idx.tiles[l].side = rs;
            idx.tiles[r].side = ls;
        }
        assert_eq!(infer_alpha(&idx).unwrap().alpha(), &rat(1, 5));
    }
}
