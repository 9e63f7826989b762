//! Concrete tilings: the one-parameter periodic family, the five finite
//! E-configuration-free tilings of polygons, the unit triangular tiling and
//! refinements of it.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{int, rat, LatticePoint, Rational, Triangle};
use crate::tiling::{Region, Tiling, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("alpha must lie in (0, 1/2], got {0}")]
    AlphaOutOfRange(Rational),
    #[error("repetition count must be at least 1")]
    NoReps,
    #[error("figure-3 variant must be 1..5, got {0}")]
    NoSuchVariant(u32),
    #[error("window size must be at least 1")]
    EmptyWindow,
}

/// Parameter of the periodic family: the side of the smaller down tile
/// when the up tiles have side 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    alpha: Rational,
}

impl FamilyParams {
    pub fn new(alpha: Rational) -> Result<FamilyParams, GeneratorError> {
        if !alpha.is_positive() || alpha > rat(1, 2) {
            return Err(GeneratorError::AlphaOutOfRange(alpha));
        }
        Ok(FamilyParams { alpha })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Translation taking each up tile to its north-east neighbour.
    pub fn t_ne(&self) -> LatticePoint {
        LatticePoint::new(Rational::one() - &self.alpha, self.alpha.clone())
    }

    /// Translation taking each up tile to the one directly above.
    pub fn t_n(&self) -> LatticePoint {
        LatticePoint::new(-self.alpha.clone(), Rational::one())
    }

    /// Anchor of the up tile with index `(i, j)`, `i + j` even.
    pub fn position(&self, i: i64, j: i64) -> LatticePoint {
        debug_assert!((i + j).rem_euclid(2) == 0);
        &self.t_ne().scale(&int(i)) + &self.t_n().scale(&int((j - i) / 2))
    }

    /// The three tiles `[T, L, R]` with index `(i, j)`.
    pub fn cell(&self, i: i64, j: i64) -> [Triangle; 3] {
        let o = self.position(i, j);
        let one = Rational::one();
        let r_anchor = &o + &LatticePoint::new(self.alpha.clone(), Rational::zero());
        [
            Triangle::up(o.clone(), one.clone()),
            Triangle::down(o, self.alpha.clone()),
            Triangle::down(r_anchor, one - &self.alpha),
        ]
    }

    /// Indices of the `reps × reps` block stored by [`generate_family`].
    pub fn block_indices(reps: usize) -> Vec<(i64, i64)> {
        let r = reps as i64;
        (0..r).flat_map(|y| (0..r).map(move |x| (x, x + 2 * y))).collect()
    }

    /// Labels of a block of cells, keyed by index.
    pub fn labels(&self, reps: usize) -> BTreeMap<(i64, i64), [Triangle; 3]> {
        FamilyParams::block_indices(reps).into_iter().map(|(i, j)| ((i, j), self.cell(i, j))).collect()
    }
}

/// The periodic family with parameter `alpha`, stored as a `reps × reps`
/// block of cells with the correspondingly enlarged periods.
pub fn generate_family(params: &FamilyParams, reps: usize) -> Result<Tiling, GeneratorError> {
    if reps == 0 {
        return Err(GeneratorError::NoReps);
    }
    let tiles: Vec<Triangle> = FamilyParams::block_indices(reps).into_iter().flat_map(|(i, j)| params.cell(i, j)).collect();
    let r = int(reps as i64);
    let periods = [params.t_ne().scale(&r), params.t_n().scale(&r)];
    let window = Window::bounding(&tiles).expect("nonempty block");
    Ok(Tiling::periodic(tiles, Region::PlaneWindow(window), periods))
}

fn p(a: i64, b: i64) -> LatticePoint {
    LatticePoint::from_ints(a, b)
}

fn up(a: i64, b: i64, s: i64) -> Triangle {
    Triangle::up(p(a, b), int(s))
}

fn down(a: i64, b: i64, s: i64) -> Triangle {
    Triangle::down(p(a, b), int(s))
}

/// The five finite tilings of convex polygons without E-configurations,
/// with smallest side 1: triangle, parallelogram, trapezoid, pentagon and
/// hexagon.
pub fn generate_figure3(variant: u32) -> Result<Tiling, GeneratorError> {
    let (vertices, tiles) = match variant {
        1 => (vec![p(0, 0), p(2, 0), p(0, 2)], vec![up(0, 0, 1), up(1, 0, 1), up(0, 1, 1), down(0, 1, 1)]),
        2 => (vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)], vec![up(0, 0, 1), down(0, 1, 1)]),
        3 => (vec![p(0, 0), p(2, 0), p(1, 1), p(0, 1)], vec![up(0, 0, 1), down(0, 1, 1), up(1, 0, 1)]),
        4 => (
            vec![p(0, 0), p(2, 0), p(2, 1), p(1, 2), p(0, 2)],
            vec![up(0, 0, 2), down(0, 2, 1), up(1, 1, 1), down(1, 1, 1)],
        ),
        5 => (
            vec![p(1, 0), p(2, 0), p(2, 1), p(1, 2), p(0, 2), p(0, 1)],
            vec![up(1, 0, 1), down(1, 1, 1), up(1, 1, 1), down(0, 2, 1), up(0, 1, 1), down(0, 1, 1)],
        ),
        v => return Err(GeneratorError::NoSuchVariant(v)),
    };
    Ok(Tiling::new(tiles, Region::ConvexPolygon(vertices)))
}

/// `n × n` cells of the unit triangular tiling over the window `[0, n]²`.
pub fn generate_hexagonal(n: usize) -> Result<Tiling, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::EmptyWindow);
    }
    let n = n as i64;
    let tiles = (0..n).flat_map(|y| (0..n).flat_map(move |x| [up(x, y, 1), down(x, y + 1, 1)])).collect();
    Ok(Tiling::new(tiles, Region::PlaneWindow(Window::new(int(0), int(n), int(0), int(n)))))
}

/// The four half-size tiles of `t`.
pub fn quarter(t: &Triangle) -> [Triangle; 4] {
    let h = &t.side * rat(1, 2);
    let a = &t.anchor;
    let off = |x: &Rational, y: &Rational| a + &LatticePoint::new(x.clone(), y.clone());
    let z = Rational::zero();
    match t.orientation {
        crate::lattice::Orientation::Up => [
            Triangle::up(a.clone(), h.clone()),
            Triangle::up(off(&h, &z), h.clone()),
            Triangle::up(off(&z, &h), h.clone()),
            Triangle::down(off(&z, &h), h),
        ],
        crate::lattice::Orientation::Down => [
            Triangle::down(a.clone(), h.clone()),
            Triangle::down(off(&h, &z), h.clone()),
            Triangle::down(off(&h, &-h.clone()), h.clone()),
            Triangle::up(off(&h, &-h.clone()), h),
        ],
    }
}

/// Quarters every tile satisfying `pick`, `depth` times over.
pub fn refine(t: &Tiling, depth: usize, pick: impl Fn(&Triangle) -> bool) -> Tiling {
    let mut tiles = t.tiles.clone();
    for _ in 0..depth {
        tiles = tiles.into_iter().flat_map(|x| if pick(&x) { quarter(&x).to_vec() } else { vec![x] }).collect();
    }
    Tiling { tiles, region: t.region.clone(), periods: t.periods.clone() }
}

/// Mixed-scale tiling of the window `[0, 4·2^levels]²`: the unit tiling
/// scaled by `2^levels`, after which tiles of side `2^levels`, then
/// `2^(levels-1)`, and so on down to 1, are each quartered on a fair coin
/// flip from `ChaCha8Rng::seed_from_u64(seed)`.
///
/// Neighbouring tiles of different sizes meet along partial sides, which is
/// what lets E-configurations descend for several steps.
pub fn generate_graded(seed: u64, levels: u32) -> Tiling {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let top = 1i64 << levels;
    let mut t = generate_hexagonal(4).expect("nonempty").scale(&int(top));
    let mut side = top;
    while side >= 1 {
        let s = int(side);
        let tiles = std::mem::take(&mut t.tiles);
        t.tiles = tiles
            .into_iter()
            .flat_map(|x| if x.side == s && rng.next_u32() & 1 == 1 { quarter(&x).to_vec() } else { vec![x] })
            .collect();
        side /= 2;
    }
    t
}
