//! Checks that a discovered morphism really generates the wall.
//!
//! Every arrangement of four tiles
//!
//! ```text
//!        north
//! west          east
//!        south
//! ```
//!
//! that occurs in the fixed point is collected, and for each one the south
//! tile is recomputed from the other three with the frame constraints. If
//! all agree, the fixed point satisfies the frame constraints everywhere.

use std::fmt;

use hashbrown::HashSet;
use rayon::prelude::*;

use crate::ff::Residue;
use crate::tiling::{Morphism2DResult, Scaffolder, TileId, SIGMA_NEG, SIGMA_ZERO};

/// Four tiles in diamond formation, stored `(west, north, south, east)` like
/// an image block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourTuple {
    pub west: TileId,
    pub north: TileId,
    pub south: TileId,
    pub east: TileId,
}

impl FourTuple {
    pub fn from_block(block: [TileId; 4]) -> Self {
        let [west, north, south, east] = block;
        FourTuple {
            west,
            north,
            south,
            east,
        }
    }

    pub fn to_block(self) -> [TileId; 4] {
        [self.west, self.north, self.south, self.east]
    }
}

impl fmt::Display for FourTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "west={} north={} south={} east={}",
            self.west, self.north, self.south, self.east
        )
    }
}

/// Top-left corners, in the 4x4 image of a tuple, of the 2x2 blocks that
/// straddle two or more parent images: upper, right, left, lower, middle.
const INTERIOR_BLOCKS: [(usize, usize); 5] = [(0, 1), (1, 2), (1, 0), (2, 1), (1, 1)];

/// The 4x4 image of a tuple. The tuple sits in a 2x2 block with west at
/// (0, 0), north at (0, 1), south at (1, 0) and east at (1, 1).
fn image_grid(result: &Morphism2DResult, t: FourTuple) -> [[TileId; 4]; 4] {
    let mut g = [[0; 4]; 4];
    for (slot, parent) in t.to_block().into_iter().enumerate() {
        let (bi, bj) = (2 * (slot / 2), 2 * (slot % 2));
        for (c, child) in result.psi(parent).into_iter().enumerate() {
            g[bi + c / 2][bj + c % 2] = child;
        }
    }
    g
}

fn block_at(g: &[[TileId; 4]; 4], i: usize, j: usize) -> FourTuple {
    FourTuple::from_block([g[i][j], g[i][j + 1], g[i + 1][j], g[i + 1][j + 1]])
}

/// Whether the south tile of `t` lies on the zeroth row, with the tiles
/// around it on rows `-1` and above.
pub fn is_zeroth_row(t: &FourTuple) -> bool {
    (t.west, t.north, t.east) == (SIGMA_NEG, SIGMA_ZERO, SIGMA_NEG)
}

/// Every 4-tuple in the fixed point, in discovery order, leaving out those
/// whose south tile sits on the zeroth row: those tiles are read off the
/// sequence, so there is nothing to check.
///
/// Starts from the images of all tiles and closes under taking the interior
/// blocks of images of tuples.
pub fn enumerate_four_tuples(result: &Morphism2DResult) -> Vec<FourTuple> {
    let mut seen: HashSet<FourTuple> = HashSet::new();
    let mut tuples = Vec::new();
    for id in 0..result.len() as TileId {
        let t = FourTuple::from_block(result.psi(id));
        if seen.insert(t) {
            tuples.push(t);
        }
    }
    let mut next = 0;
    while next < tuples.len() {
        let g = image_grid(result, tuples[next]);
        for (i, j) in INTERIOR_BLOCKS {
            let t = block_at(&g, i, j);
            if seen.insert(t) {
                tuples.push(t);
            }
        }
        debug_assert!([(0, 0), (0, 2), (2, 0), (2, 2)]
            .iter()
            .all(|&(i, j)| seen.contains(&block_at(&g, i, j))));
        next += 1;
    }
    tuples.retain(|t| !is_zeroth_row(t));
    tuples
}

/// Whether a tuple's south tile is fixed without the frame constraints:
/// the built-ins, and tiles on the zeroth row.
pub fn is_exempt(t: &FourTuple) -> bool {
    t.south == SIGMA_NEG || t.south == SIGMA_ZERO || is_zeroth_row(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Position of the tuple in the enumeration.
    pub index: usize,
    pub tuple: FourTuple,
    pub stored: Vec<Residue>,
    /// `None` when the frame constraints needed entries outside the tuple.
    pub computed: Option<Vec<Residue>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub tiles: usize,
    pub tuples: usize,
    /// Tuples whose south tile was recomputed and matched.
    pub verified: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// `tiles=<N> tuples=<M> verified=<M'> status=PASS|FAIL`
    pub fn summary_line(&self) -> String {
        format!(
            "tiles={} tuples={} verified={} status={}",
            self.tiles,
            self.tuples,
            self.verified,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

fn check(
    result: &Morphism2DResult,
    sc: &mut Scaffolder,
    buf: &mut Vec<Residue>,
    index: usize,
    t: &FourTuple,
) -> Option<VerifyFailure> {
    let store = result.store();
    sc.place(0, 0, store.value(t.west));
    sc.place(0, 1, store.value(t.north));
    sc.place(1, 1, store.value(t.east));
    let stored = store.value(t.south);
    let computed = match sc.fill() {
        Ok(()) => {
            sc.read(1, 0, buf);
            if buf.as_slice() == stored {
                return None;
            }
            Some(buf.clone())
        }
        Err(_) => None,
    };
    Some(VerifyFailure {
        index,
        tuple: *t,
        stored: stored.to_vec(),
        computed,
    })
}

/// Recomputes the south tile of every non-exempt tuple in parallel on the
/// current rayon pool. A failure reports the first offending tuple in
/// enumeration order.
pub fn verify_four_tuples(result: &Morphism2DResult, tuples: &[FourTuple]) -> VerifyReport {
    let store = result.store();
    let (field, shape) = (store.field().clone(), store.shape());
    let failure = tuples
        .par_iter()
        .enumerate()
        .filter(|(_, t)| !is_exempt(t))
        .map_init(
            || (Scaffolder::south(field.clone(), shape), Vec::new()),
            |(sc, buf), (i, t)| check(result, sc, buf, i, t),
        )
        .find_map_first(|f| f);
    let checked = |upto: usize| tuples[..upto].iter().filter(|t| !is_exempt(t)).count();
    VerifyReport {
        tiles: result.len(),
        tuples: tuples.len(),
        verified: checked(failure.as_ref().map_or(tuples.len(), |f| f.index)),
        failure,
    }
}
