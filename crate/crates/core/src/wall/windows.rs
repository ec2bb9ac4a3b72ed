use crate::ff::{PrimeField, Residue};

use super::{WallError, WallGrid};

/// A square block of zeros in a wall.
///
/// When `clipped` is set the zeros run into the edge of the grid, so only
/// part of the window is visible and `side` is a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub top_row: i64,
    pub left_col: i64,
    pub side: usize,
    pub clipped: bool,
}

/// Ratios of the four geometric edges of an inner frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameRatios {
    pub p: Residue,
    pub q: Residue,
    pub r: Residue,
    pub s: Residue,
}

impl FrameRatios {
    /// Whether `P S / (Q R) = (-1)^side`.
    pub fn identity_holds(&self, field: &PrimeField, side: usize) -> bool {
        let lhs = field.mul(self.p, self.s);
        let rhs = field.mul(field.sign(side), field.mul(self.q, self.r));
        lhs == rhs
    }
}

/// Largest window side in a prefix wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LcQuality {
    /// Largest side over windows that are fully visible.
    pub max_side: usize,
    /// Set when a clipped window covers a whole row of the grid with more
    /// rows below it, as happens for sequences satisfying a short
    /// recurrence.
    pub unbounded: bool,
}

struct Region {
    top: i64,
    left: i64,
    bottom: i64,
    right: i64,
    cells: usize,
    clipped: bool,
    rows_spanned: Vec<i64>,
}

fn zero_regions(grid: &WallGrid) -> Vec<Region> {
    let cols = grid.cols() as i64;
    let depth = grid.depth();
    let rows = (depth + 1).max(0) as usize;
    let mut seen = vec![false; rows * grid.cols()];
    let idx = |m: i64, n: i64| m as usize * cols as usize + n as usize;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for m in 0..=depth {
        for n in 0..cols {
            if grid.get(m, n) != Some(0) || seen[idx(m, n)] {
                continue;
            }
            let mut region = Region {
                top: m,
                left: n,
                bottom: m,
                right: n,
                cells: 0,
                clipped: false,
                rows_spanned: Vec::new(),
            };
            seen[idx(m, n)] = true;
            stack.push((m, n));
            while let Some((r, c)) = stack.pop() {
                region.cells += 1;
                region.top = region.top.min(r);
                region.bottom = region.bottom.max(r);
                region.left = region.left.min(c);
                region.right = region.right.max(c);
                for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    let (nr, nc) = (r + dr, c + dc);
                    match grid.get(nr, nc) {
                        None => region.clipped = true,
                        Some(0) if nr >= 0 && !seen[idx(nr, nc)] => {
                            seen[idx(nr, nc)] = true;
                            stack.push((nr, nc));
                        }
                        _ => {}
                    }
                }
                // A full row: both horizontal neighbours of the row's extreme
                // cells are outside the grid.
                if grid.get(r, c - 1).is_none() {
                    let run = (c..cols).take_while(|&x| grid.get(r, x) == Some(0)).count() as i64;
                    if grid.get(r, c + run).is_none() {
                        region.rows_spanned.push(r);
                    }
                }
            }
            out.push(region);
        }
    }
    out
}

/// Maximal zero regions on rows `0..=depth`, in order of their top-left cell.
///
/// ```
/// use numwall::{ff::PrimeField, wall::{find_windows, generate_wall}};
///
/// let f3 = PrimeField::new(3).unwrap();
/// let wall = generate_wall(&[1, 1, 1, 1, 1, 1, 1], &f3);
/// let windows = find_windows(&wall).unwrap();
/// assert_eq!(windows.len(), 1);
/// assert!(windows[0].clipped);
/// ```
pub fn find_windows(grid: &WallGrid) -> Result<Vec<Window>, WallError> {
    zero_regions(grid)
        .into_iter()
        .map(|r| {
            let h = (r.bottom - r.top + 1) as usize;
            let w = (r.right - r.left + 1) as usize;
            if !r.clipped && (h != w || r.cells != h * w) {
                return Err(WallError::NonSquareZeroRegion {
                    row: r.top,
                    col: r.left,
                });
            }
            Ok(Window {
                top_row: r.top,
                left_col: r.left,
                side: h.max(w),
                clipped: r.clipped,
            })
        })
        .collect()
}

/// Reads the inner frame of a fully visible window and checks that each
/// edge is geometric.
pub fn frame_ratios(
    grid: &WallGrid,
    field: &PrimeField,
    window: &Window,
) -> Result<FrameRatios, WallError> {
    let (m0, n0, l) = (window.top_row, window.left_col, window.side as i64);
    let outside = WallError::FrameOutsideGrid { row: m0, col: n0 };
    // Edge name, starting corner and step.
    let (top_left, bottom_right) = ((m0 - 1, n0 - 1), (m0 + l, n0 + l));
    let edges = [
        ('A', top_left, (0, 1)),
        ('B', top_left, (1, 0)),
        ('C', bottom_right, (-1, 0)),
        ('D', bottom_right, (0, -1)),
    ];
    let mut ratios = [0; 4];
    for (slot, (edge, (r0, c0), (dr, dc))) in ratios.iter_mut().zip(edges.iter()) {
        let values = (0..=l + 1)
            .map(|k| {
                grid.get(r0 + k * dr, c0 + k * dc)
                    .ok_or_else(|| outside.clone())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let not_geometric = WallError::NotGeometric {
            edge: *edge,
            row: m0,
            col: n0,
        };
        let ratio = field
            .div(values[1], values[0])
            .map_err(|_| not_geometric.clone())?;
        for pair in values.windows(2) {
            if pair[0] == 0 || field.mul(pair[0], ratio) != pair[1] {
                return Err(not_geometric);
            }
        }
        *slot = ratio;
    }
    let [p, q, r, s] = ratios;
    Ok(FrameRatios { p, q, r, s })
}

/// Window statistics of a prefix wall.
pub fn lc_quality(grid: &WallGrid) -> Result<LcQuality, WallError> {
    let regions = zero_regions(grid);
    let mut out = LcQuality::default();
    for window in find_windows(grid)? {
        if !window.clipped {
            out.max_side = out.max_side.max(window.side);
        }
    }
    out.unbounded = regions
        .iter()
        .any(|r| r.clipped && r.rows_spanned.iter().any(|&m| m < grid.depth()));
    Ok(out)
}
