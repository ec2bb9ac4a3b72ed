use crate::ff::{PrimeField, Residue};

use super::frame::{frame_entry, Boundary, Canvas, UNKNOWN};
use super::{triangle_depth, WallError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The lexicographically first sequence of the requested length whose
    /// wall has no window of the requested side.
    Witness(Vec<Residue>),
    AllHaveWindow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    /// Smallest length at which every sequence has a window, if one was
    /// reached.
    pub min_len: Option<usize>,
    /// Witness for the longest length that still had one.
    pub last_witness: Option<Vec<Residue>>,
}

/// Depth-first search over all sequences of one length, extending the wall
/// one diagonal at a time and pruning as soon as a prefix has a window.
struct Search<'a> {
    field: &'a PrimeField,
    len: usize,
    side: usize,
    wall: Canvas,
    seq: Vec<Residue>,
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<(i64, i64)>,
}

impl<'a> Search<'a> {
    fn new(field: &'a PrimeField, len: usize, side: usize) -> Self {
        let depth = triangle_depth(len).max(0);
        let mut wall = Canvas::new(-2, depth as usize + 3, len);
        for n in 0..len as i64 {
            wall.set(-2, n, 0);
            wall.set(-1, n, 1);
        }
        Search {
            field,
            len,
            side,
            wall,
            seq: Vec::with_capacity(len),
            stamp: vec![0; (depth as usize + 1) * len],
            epoch: 0,
            stack: Vec::new(),
        }
    }

    /// Appends `v` and reports whether the longer prefix has a window.
    fn push(&mut self, v: Residue) -> bool {
        let pos = self.seq.len() as i64;
        self.seq.push(v);
        self.wall.set(0, pos, v);
        for m in 1..=pos / 2 {
            let x = frame_entry(&self.wall, self.field, m, pos - m, Boundary::Clip)
                .expect("frame constraints hold inside a triangle");
            self.wall.set(m, pos - m, x);
        }
        (0..=pos / 2)
            .any(|m| self.wall.get(m, pos - m) == Some(0) && self.extent(m, pos - m) >= self.side)
    }

    fn pop(&mut self) {
        let pos = self.seq.len() as i64 - 1;
        self.seq.pop();
        for m in 0..=pos / 2 {
            self.wall.set(m, pos - m, UNKNOWN);
        }
    }

    /// Larger bounding-box dimension of the zero region containing `(m, n)`.
    fn extent(&mut self, m: i64, n: i64) -> usize {
        self.epoch += 1;
        let cols = self.len as i64;
        let key = |r: i64, c: i64| (r * cols + c) as usize;
        let (mut top, mut bottom, mut left, mut right) = (m, m, n, n);
        self.stamp[key(m, n)] = self.epoch;
        self.stack.push((m, n));
        while let Some((r, c)) = self.stack.pop() {
            top = top.min(r);
            bottom = bottom.max(r);
            left = left.min(c);
            right = right.max(c);
            for (nr, nc) in [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
                if nr >= 0
                    && self.wall.get(nr, nc) == Some(0)
                    && self.stamp[key(nr, nc)] != self.epoch
                {
                    self.stamp[key(nr, nc)] = self.epoch;
                    self.stack.push((nr, nc));
                }
            }
        }
        ((bottom - top).max(right - left) + 1) as usize
    }

    fn run(&mut self) -> bool {
        if self.seq.len() == self.len {
            return true;
        }
        for v in self.field.elements() {
            let has_window = self.push(v);
            if !has_window && self.run() {
                return true;
            }
            self.pop();
        }
        false
    }
}

fn check_budget(field: &PrimeField, len: usize, budget: u128) -> Result<(), WallError> {
    let needed = (field.modulus() as u128)
        .checked_pow(len as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(WallError::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Looks for a sequence of length `len` whose wall has no window of side
/// `side` or more. Windows cut off by the edge of the triangle count with
/// the larger dimension of their visible part.
///
/// Fails with [`WallError::BudgetExceeded`] when `p^len > budget`, even
/// though pruning usually visits far fewer sequences.
///
/// ```
/// use numwall::{ff::PrimeField, wall::{exhaustive_window_search, SearchOutcome}};
///
/// let f3 = PrimeField::new(3).unwrap();
/// let found = exhaustive_window_search(&f3, 4, 2, 1 << 20).unwrap();
/// assert!(matches!(found, SearchOutcome::Witness(_)));
/// ```
pub fn exhaustive_window_search(
    field: &PrimeField,
    len: usize,
    side: usize,
    budget: u128,
) -> Result<SearchOutcome, WallError> {
    check_budget(field, len, budget)?;
    let mut search = Search::new(field, len, side.max(1));
    Ok(if search.run() {
        SearchOutcome::Witness(search.seq)
    } else {
        SearchOutcome::AllHaveWindow
    })
}

/// Runs [`exhaustive_window_search`] for lengths `1..=max_len` and stops at
/// the first length where every sequence has a window.
///
/// The budget is checked against `p^max_len` before anything runs.
pub fn scan_window_search(
    field: &PrimeField,
    max_len: usize,
    side: usize,
    budget: u128,
) -> Result<ScanOutcome, WallError> {
    check_budget(field, max_len, budget)?;
    let mut out = ScanOutcome {
        min_len: None,
        last_witness: None,
    };
    for len in 1..=max_len {
        match exhaustive_window_search(field, len, side, budget)? {
            SearchOutcome::Witness(w) => out.last_witness = Some(w),
            SearchOutcome::AllHaveWindow => {
                out.min_len = Some(len);
                break;
            }
        }
    }
    Ok(out)
}
