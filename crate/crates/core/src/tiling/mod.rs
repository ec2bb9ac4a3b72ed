//! Tiles and the discovery of a two-dimensional `[2,2]`-morphism whose fixed
//! point, read through the tiles, is the number wall of an automatic
//! sequence.
//!
//! A tile of length `2k` is a diamond of `2k^2` wall entries. Its rows run
//! from `-(k-1)` to `k-1` relative to its middle row and relative row `r`
//! covers columns `|r| ..= 2k-1-|r|` from the tile origin, which is the
//! leftmost entry of the middle row. Values are packed row by row, top row
//! first.
//!
//! Tiles tessellate the wall: the tile at position `(a, b)` of the
//! two-dimensional fixed point has its origin at wall row `k(a-b)` and
//! column `k(a+b)`. The zeroth row of the wall runs through the tiles on
//! the diagonal `a == b`.

mod checkpoint;
mod discover;
mod store;

use thiserror::Error;

pub use checkpoint::{checkpoint_load, checkpoint_save, read_checkpoint, write_checkpoint};
pub use discover::{
    algorithm_1_1, algorithm_1_2, assemble, assemble_partial, discover, iterate_psi,
    scaffold_generate, RunStatus, Scaffolder,
};
pub use store::{Morphism2DResult, TileId, TileStore, NO_TILE, SIGMA_NEG, SIGMA_ZERO};

use crate::ff::Residue;
use crate::seq::SeqError;
use crate::wall::{Canvas, FrameError, WallGrid};

#[derive(Debug, Error)]
pub enum TilingError {
    #[error("tile length must be even and between 2 and 64, got {0}")]
    BadTileLength(usize),
    #[error("the tile engine needs a 2-morphism, got a {0}-morphism")]
    NotTwoMorphism(usize),
    #[error("coding block length {coding} cannot be compressed to the tile length {tile_length}")]
    CodingMismatch { coding: usize, tile_length: usize },
    #[error("tile at ({row}, {col}) is not inside the grid")]
    OutOfRange { row: i64, col: i64 },
    #[error("window too large while generating the children of tile {tile}: {source}")]
    WindowTooLarge {
        tile: TileId,
        #[source]
        source: FrameError,
    },
    #[error("frame constraints failed for the children of tile {tile}: {source}")]
    Frame {
        tile: TileId,
        #[source]
        source: FrameError,
    },
    #[error("tile {0} has no images yet")]
    Incomplete(TileId),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The diamond shape of tiles of length `2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileShape {
    half: usize,
}

impl TileShape {
    pub fn new(tile_length: usize) -> Result<Self, TilingError> {
        if tile_length < 2 || !tile_length.is_multiple_of(2) || tile_length > 64 {
            return Err(TilingError::BadTileLength(tile_length));
        }
        Ok(TileShape {
            half: tile_length / 2,
        })
    }

    /// `k`, half the length of the middle row.
    pub fn half(&self) -> usize {
        self.half
    }

    pub fn tile_length(&self) -> usize {
        2 * self.half
    }

    /// Number of entries, `2k^2`.
    pub fn size(&self) -> usize {
        2 * self.half * self.half
    }

    /// `(row, col)` offsets from the origin, in packing order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> {
        let k = self.half as i64;
        (-(k - 1)..k).flat_map(move |r| (r.abs()..2 * k - r.abs()).map(move |c| (r, c)))
    }

    /// Wall origin of the tile at position `(a, b)`.
    pub fn origin(&self, a: i64, b: i64) -> (i64, i64) {
        let k = self.half as i64;
        (k * (a - b), k * (a + b))
    }

    /// Value of the tile whose bottom row is row `-1`.
    pub fn sigma_neg(&self) -> Vec<Residue> {
        let mut v = vec![0; self.size()];
        let n = v.len();
        v[n - 2..].fill(1);
        v
    }

    pub fn sigma_zero(&self) -> Vec<Residue> {
        vec![0; self.size()]
    }
}

/// Reads the tile with origin `(row, col)` out of `grid`. Rows `-1` and
/// above read as their fixed values whether or not they are stored.
///
/// ```
/// use numwall::{ff::PrimeField, tiling::{extract_tile, TileShape}, wall::generate_wall};
///
/// let f3 = PrimeField::new(3).unwrap();
/// let wall = generate_wall(&[1, 0, 2, 1], &f3);
/// let shape = TileShape::new(4).unwrap();
/// // Bottom row on row -1: ones there and zeros above.
/// assert_eq!(extract_tile(&wall, -2, 0, shape).unwrap(), shape.sigma_neg());
/// ```
pub fn extract_tile(
    grid: &WallGrid,
    row: i64,
    col: i64,
    shape: TileShape,
) -> Result<Vec<Residue>, TilingError> {
    shape
        .cells()
        .map(|(r, c)| {
            let (m, n) = (row + r, col + c);
            match m {
                ..=-2 => Ok(0),
                -1 => Ok(1),
                _ => grid
                    .get(m, n)
                    .ok_or(TilingError::OutOfRange { row: m, col: n }),
            }
        })
        .collect()
}

pub(crate) fn write_tile(
    canvas: &mut Canvas,
    row: i64,
    col: i64,
    shape: TileShape,
    value: &[Residue],
) {
    for ((r, c), &v) in shape.cells().zip(value) {
        canvas.set(row + r, col + c, v);
    }
}

pub(crate) fn read_tile(
    canvas: &Canvas,
    row: i64,
    col: i64,
    shape: TileShape,
    out: &mut Vec<Residue>,
) {
    out.clear();
    out.extend(
        shape
            .cells()
            .map(|(r, c)| canvas.get(row + r, col + c).expect("tile cells computed")),
    );
}

/// Lays a rectangular array out in wall orientation: entry `(m, n)` moves
/// to row `-n + floor(m / 2)` and column `n + ceil(m / 2)`.
///
/// The result covers rows `-(cols - 1) ..= (rows - 1) / 2`. A `2k x k` block
/// lands exactly on a tile of length `2k`.
pub fn permute_p(matrix: &[Vec<Residue>]) -> Canvas {
    let rows = matrix.len() as i64;
    let cols = matrix.first().map_or(0, Vec::len) as i64;
    let (top, bottom) = (-(cols - 1), (rows - 1).div_euclid(2));
    let width = (cols - 1) + (rows - 1 + 1) / 2 + 1;
    let mut out = Canvas::new(
        top,
        (bottom - top + 1).max(0) as usize,
        width.max(0) as usize,
    );
    for (m, line) in matrix.iter().enumerate() {
        let m = m as i64;
        for (n, &v) in line.iter().enumerate() {
            let n = n as i64;
            out.set(-n + m.div_euclid(2), n + (m + 1).div_euclid(2), v);
        }
    }
    out
}

/// Inverse of [`permute_p`]: `b[m][n]` is read back as `s[m+n][(n-m)/2]`.
pub fn unpermute_p(diamond: &Canvas, rows: usize, cols: usize) -> Vec<Vec<Residue>> {
    (0..rows as i64)
        .map(|m| {
            (0..cols as i64)
                .map(|n| {
                    diamond
                        .get(-n + m.div_euclid(2), n + (m + 1).div_euclid(2))
                        .expect("inside the diamond")
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_sizes() {
        assert_eq!(TileShape::new(8).unwrap().size(), 32);
        assert_eq!(TileShape::new(16).unwrap().size(), 128);
        assert_eq!(TileShape::new(8).unwrap().cells().count(), 32);
        assert!(TileShape::new(7).is_err());
        assert!(TileShape::new(0).is_err());
    }

    #[test]
    fn cell_rows_shrink_away_from_the_middle() {
        let shape = TileShape::new(6).unwrap();
        let cells: Vec<_> = shape.cells().collect();
        assert_eq!(cells[..2], [(-2, 2), (-2, 3)]);
        assert_eq!(cells.iter().filter(|c| c.0 == 0).count(), 6);
        assert_eq!(*cells.last().unwrap(), (2, 3));
    }

    #[test]
    fn permute_worked_example() {
        // s[m][n] = 10 m + n for an 8 x 4 array.
        let s: Vec<Vec<u8>> = (0..8)
            .map(|m| (0..4).map(|n| 10 * m + n).collect())
            .collect();
        let b = permute_p(&s);
        assert_eq!(b.row_min(), -3);
        assert_eq!(b.row_max(), 3);
        assert_eq!(b.get(0, 0), Some(0));
        assert_eq!(b.get(0, 1), Some(10));
        assert_eq!(b.get(0, 2), Some(21));
        assert_eq!(b.get(-3, 3), Some(3));
        assert_eq!(b.get(-3, 4), Some(13));
        assert_eq!(b.get(1, 1), Some(20));
        assert_eq!(b.get(3, 3), Some(60));
        assert_eq!(b.get(3, 4), Some(70));
        assert_eq!(b.get(0, 7), Some(73));
        assert_eq!(unpermute_p(&b, 8, 4), s);
    }

    #[test]
    fn permute_single_entry() {
        let b = permute_p(&[vec![4]]);
        assert_eq!(b.get(0, 0), Some(4));
        assert_eq!(unpermute_p(&b, 1, 1), vec![vec![4]]);
    }

    #[test]
    fn block_lands_on_a_tile() {
        let shape = TileShape::new(8).unwrap();
        let s: Vec<Vec<u8>> = (0..8)
            .map(|m| (0..4).map(|n| (4 * m + n) as u8).collect())
            .collect();
        let b = permute_p(&s);
        let mut cells: Vec<_> = shape.cells().collect();
        cells.sort();
        let mut filled: Vec<_> = (b.row_min()..=b.row_max())
            .flat_map(|m| (0..b.cols() as i64).map(move |n| (m, n)))
            .filter(|&(m, n)| b.get(m, n).is_some())
            .collect();
        filled.sort();
        assert_eq!(cells, filled);
    }
}
