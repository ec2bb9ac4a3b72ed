//! Number walls over `F_p`.
//!
//! Entry `W[m][n]` of the wall of `s` is the determinant of the
//! `(m+1) x (m+1)` Toeplitz matrix with entries `s[n - i + j]`. Row `-1` is
//! all ones and the rows above it are zero. A prefix of length `r` determines
//! a triangle: row `m` is known for columns `m..r-m` and the deepest row is
//! `(r - 1) / 2`.
//!
//! [`generate_wall`] builds the triangle from the frame constraints in
//! `O(r^2)` time; [`oracle_wall`] computes every entry as a determinant and is
//! only meant for testing.

mod frame;
mod oracle;
mod search;
mod windows;

use std::fmt::Write as _;

use thiserror::Error;

pub use frame::{frame_entry, Boundary, Canvas, FrameError, UNKNOWN};
pub use oracle::{oracle_wall, toeplitz_det};
pub use search::{exhaustive_window_search, scan_window_search, ScanOutcome, SearchOutcome};
pub use windows::{find_windows, frame_ratios, lc_quality, FrameRatios, LcQuality, Window};

use crate::ff::{PrimeField, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error("zero region at ({row}, {col}) is not a square")]
    NonSquareZeroRegion { row: i64, col: i64 },
    #[error("{edge} edge of the frame of the window at ({row}, {col}) is not geometric")]
    NotGeometric { edge: char, row: i64, col: i64 },
    #[error("frame of the window at ({row}, {col}) is not inside the grid")]
    FrameOutsideGrid { row: i64, col: i64 },
    #[error("{needed} sequences exceed the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("malformed wall dump: {0}")]
    BadDump(String),
}

/// A slab of number-wall entries covering rows `-2..=depth`.
///
/// Cells that are not populated read as `None`. Rows are stored at full width
/// with one byte per entry.
#[derive(Clone, PartialEq, Eq)]
pub struct WallGrid {
    p: u8,
    depth: i64,
    cells: Canvas,
}

impl std::fmt::Debug for WallGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WallGrid over F_{} ", self.p)?;
        self.cells.fmt(f)
    }
}

impl WallGrid {
    /// An empty grid with nothing populated.
    pub fn blank(p: u8, cols: usize, depth: i64) -> Self {
        let rows = (depth + 3).max(0) as usize;
        WallGrid {
            p,
            depth,
            cells: Canvas::new(-2, rows, cols),
        }
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.cells.cols()
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    #[inline]
    pub fn get(&self, m: i64, n: i64) -> Option<Residue> {
        self.cells.get(m, n)
    }

    #[inline]
    pub fn set(&mut self, m: i64, n: i64, v: Residue) {
        self.cells.set(m, n, v)
    }

    /// Row `m` as raw bytes, [`UNKNOWN`] where not populated.
    pub fn row(&self, m: i64) -> &[u8] {
        self.cells.row(m)
    }

    pub fn canvas(&self) -> &Canvas {
        &self.cells
    }

    /// Text dump: a `p cols depth` header, then rows `-2..=depth`, one per
    /// line. Unpopulated cells are written as `.`.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{} {} {}\n", self.p, self.cols(), self.depth);
        for m in -2..=self.depth {
            let line: Vec<String> = self
                .row(m)
                .iter()
                .map(|&v| {
                    if v == UNKNOWN {
                        ".".to_string()
                    } else {
                        v.to_string()
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, WallError> {
        let bad = |msg: &str| WallError::BadDump(msg.to_string());
        let mut lines = text.lines();
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("empty"))?
            .split_whitespace()
            .collect();
        let [p, cols, depth] = header[..] else {
            return Err(bad("header needs p, cols and depth"));
        };
        let p: u8 = p.parse().map_err(|_| bad("bad p"))?;
        let cols: usize = cols.parse().map_err(|_| bad("bad cols"))?;
        let depth: i64 = depth.parse().map_err(|_| bad("bad depth"))?;
        let mut grid = WallGrid::blank(p, cols, depth);
        for m in -2..=depth {
            let line = lines.next().ok_or_else(|| bad("missing row"))?;
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != cols {
                return Err(bad("row has the wrong width"));
            }
            for (n, cell) in cells.into_iter().enumerate() {
                if cell == "." {
                    continue;
                }
                let v: u8 = cell.parse().map_err(|_| bad("bad entry"))?;
                if v >= p {
                    return Err(bad("entry out of range"));
                }
                grid.set(m, n as i64, v);
            }
        }
        Ok(grid)
    }
}

/// Depth of the triangle determined by a prefix of length `len`.
pub fn triangle_depth(len: usize) -> i64 {
    (len as i64 - 1).div_euclid(2)
}

/// A grid holding rows `-2` and `-1` in full and `s` on row 0.
pub(crate) fn seeded_grid(s: &[Residue], field: &PrimeField) -> WallGrid {
    let mut grid = WallGrid::blank(field.modulus(), s.len(), triangle_depth(s.len()));
    for n in 0..s.len() as i64 {
        grid.set(-2, n, 0);
        grid.set(-1, n, 1);
    }
    for (n, &v) in s.iter().enumerate() {
        grid.set(0, n as i64, field.reduce(v as i64));
    }
    grid
}

/// The wall triangle of `s` computed with the frame constraints.
///
/// ```
/// use numwall::{ff::PrimeField, wall::generate_wall};
///
/// let f5 = PrimeField::new(5).unwrap();
/// // A geometric sequence has zeros all along row 1.
/// let wall = generate_wall(&[1, 2, 4, 3, 1], &f5);
/// assert_eq!(wall.depth(), 2);
/// assert_eq!(wall.get(1, 2), Some(0));
/// ```
pub fn generate_wall(s: &[Residue], field: &PrimeField) -> WallGrid {
    let mut grid = seeded_grid(s, field);
    let len = s.len() as i64;
    for m in 1..=grid.depth {
        for n in m..len - m {
            let v = frame_entry(&grid.cells, field, m, n, Boundary::Clip)
                .unwrap_or_else(|e| panic!("frame constraints failed inside a triangle: {e}"));
            grid.cells.set(m, n, v);
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_rows_and_row_zero() {
        let f3 = PrimeField::new(3).unwrap();
        let s = [1, 2, 0, 1, 1, 2, 0];
        let wall = generate_wall(&s, &f3);
        assert_eq!(wall.depth(), 3);
        assert!(wall.row(-2).iter().all(|&v| v == 0));
        assert!(wall.row(-1).iter().all(|&v| v == 1));
        assert_eq!(wall.row(0), &s);
        assert_eq!(wall.get(3, 2), None);
        assert!(wall.get(3, 3).is_some());
    }

    #[test]
    fn all_ones_has_zero_row_one() {
        let f3 = PrimeField::new(3).unwrap();
        let wall = generate_wall(&[1; 5], &f3);
        assert!((1..4).all(|n| wall.get(1, n) == Some(0)));
        assert_eq!(wall.get(2, 2), Some(0));
    }

    #[test]
    fn dump_round_trip() {
        let f7 = PrimeField::new(7).unwrap();
        let wall = generate_wall(&[3, 1, 4, 1, 5, 2, 6, 5], &f7);
        let text = wall.to_dump();
        assert!(text.starts_with("7 8 3\n"));
        assert_eq!(text.lines().count(), 1 + 6);
        assert_eq!(WallGrid::from_dump(&text).unwrap(), wall);
        assert!(WallGrid::from_dump("7 8").is_err());
    }

    #[test]
    fn short_prefixes() {
        let f2 = PrimeField::new(2).unwrap();
        let one = generate_wall(&[1], &f2);
        assert_eq!(one.depth(), 0);
        assert_eq!(one.get(0, 0), Some(1));
        let two = generate_wall(&[1, 0], &f2);
        assert_eq!(two.depth(), 0);
    }
}
