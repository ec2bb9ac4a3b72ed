//! Row-by-row generation of number-wall entries from the rows above them.
//!
//! Three rules cover every entry below row 0:
//!
//! * the cross rule, whenever the entry two rows up is nonzero;
//! * inside a window, zero, and on the row just below a window the inner
//!   frame rule `D_k = (-1)^(l k) B_k C_k / A_k`;
//! * on the row below that, the outer frame rule for `H_k`.
//!
//! Frame labels follow the usual picture of a window of side `l` whose top
//! left zero sits at `(m0, n0)`. For `k = 0..=l+1`:
//!
//! | label | position                     | label | position                     |
//! |-------|------------------------------|-------|------------------------------|
//! | `A_k` | `(m0 - 1, n0 - 1 + k)`       | `E_k` | `(m0 - 2, n0 - 1 + k)`       |
//! | `B_k` | `(m0 - 1 + k, n0 - 1)`       | `F_k` | `(m0 - 1 + k, n0 - 2)`       |
//! | `C_k` | `(m0 + l - k, n0 + l)`       | `G_k` | `(m0 + l - k, n0 + l + 1)`   |
//! | `D_k` | `(m0 + l, n0 + l - k)`       | `H_k` | `(m0 + l + 1, n0 + l - k)`   |
//!
//! so `A`/`B` run from the top-left corner and `C`/`D` from the bottom-right
//! one. `P`, `Q`, `R`, `S` are the ratios of consecutive `A`, `B`, `C`, `D`.

use thiserror::Error;

use crate::ff::{FieldError, PrimeField, Residue};

/// Marks a cell whose value is not known.
pub const UNKNOWN: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    /// The rules need an entry that is not available. On a finite patch this
    /// means a window is too large for the patch.
    #[error("window too large: entry ({row}, {col}) is needed but not available")]
    WindowTooLarge { row: i64, col: i64 },
    #[error("frame constraints divided by zero at ({row}, {col})")]
    Degenerate { row: i64, col: i64 },
    #[error("zero entries at ({row}, {col}) do not form a window")]
    NotAWindow { row: i64, col: i64 },
}

/// How to treat a window whose top row runs off the known region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// The region is the full triangle of a finite sequence: every entry in
    /// it below a window that reaches the boundary is inside that window.
    Clip,
    /// The region is an arbitrary patch: missing information is an error.
    Strict,
}

/// A rectangular array of cells with some of them unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct Canvas {
    row_min: i64,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl std::fmt::Debug for Canvas {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "Canvas rows {}..{}",
            self.row_min,
            self.row_min + self.rows as i64
        )?;
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let line: String = row
                .iter()
                .map(|&v| match v {
                    UNKNOWN => " .".to_string(),
                    v => format!("{v:2}"),
                })
                .collect();
            writeln!(f, "{:4} {}", self.row_min + r as i64, line)?;
        }
        Ok(())
    }
}

impl Canvas {
    pub fn new(row_min: i64, rows: usize, cols: usize) -> Self {
        Canvas {
            row_min,
            rows,
            cols,
            data: vec![UNKNOWN; rows * cols],
        }
    }

    pub fn row_min(&self) -> i64 {
        self.row_min
    }

    pub fn row_max(&self) -> i64 {
        self.row_min + self.rows as i64 - 1
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn index(&self, m: i64, n: i64) -> Option<usize> {
        let r = m - self.row_min;
        if r < 0 || r >= self.rows as i64 || n < 0 || n >= self.cols as i64 {
            None
        } else {
            Some(r as usize * self.cols + n as usize)
        }
    }

    /// The entry at row `m`, column `n`, if known.
    #[inline]
    pub fn get(&self, m: i64, n: i64) -> Option<Residue> {
        self.index(m, n)
            .map(|i| self.data[i])
            .filter(|&v| v != UNKNOWN)
    }

    #[inline]
    pub fn set(&mut self, m: i64, n: i64, v: Residue) {
        let i = self
            .index(m, n)
            .unwrap_or_else(|| panic!("({m}, {n}) outside canvas"));
        self.data[i] = v;
    }

    pub fn clear(&mut self) {
        self.data.fill(UNKNOWN);
    }

    /// Raw bytes of row `m`, `UNKNOWN` where not populated.
    pub fn row(&self, m: i64) -> &[u8] {
        let r = (m - self.row_min) as usize;
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    fn need(&self, m: i64, n: i64) -> Result<Residue, FrameError> {
        self.get(m, n)
            .ok_or(FrameError::WindowTooLarge { row: m, col: n })
    }
}

struct WindowExtent {
    top: i64,
    left: i64,
    side: i64,
    /// False when the top row runs into unknown cells; `side` is then only
    /// a lower bound and `left` may be wrong.
    exact: bool,
}

/// Locates the window containing the zero at `(m, n)` from its top row.
/// `Ok(None)` means the window is clipped by the region boundary.
fn locate_window(
    canvas: &Canvas,
    m: i64,
    n: i64,
    boundary: Boundary,
) -> Result<Option<WindowExtent>, FrameError> {
    let mut top = m;
    loop {
        match canvas.get(top - 1, n) {
            Some(0) => top -= 1,
            Some(_) => break,
            None => {
                return match boundary {
                    Boundary::Clip => Ok(None),
                    Boundary::Strict => Err(FrameError::WindowTooLarge {
                        row: top - 1,
                        col: n,
                    }),
                }
            }
        }
    }
    let mut edges = [n, n];
    let mut exact = true;
    for (edge, step) in edges.iter_mut().zip([-1i64, 1]) {
        loop {
            match canvas.get(top, *edge + step) {
                Some(0) => *edge += step,
                Some(_) => break,
                None if boundary == Boundary::Clip => return Ok(None),
                None => {
                    exact = false;
                    break;
                }
            }
        }
    }
    Ok(Some(WindowExtent {
        top,
        left: edges[0],
        side: edges[1] - edges[0] + 1,
        exact,
    }))
}

/// Computes the entry at `(m, n)` from the rows above it.
pub fn frame_entry(
    canvas: &Canvas,
    field: &PrimeField,
    m: i64,
    n: i64,
    boundary: Boundary,
) -> Result<Residue, FrameError> {
    let up1 = canvas.need(m - 1, n)?;
    let up2 = canvas.need(m - 2, n)?;
    let degenerate = |_: FieldError| FrameError::Degenerate { row: m, col: n };
    if up2 != 0 {
        let left = canvas.need(m - 1, n - 1)?;
        let right = canvas.need(m - 1, n + 1)?;
        let num = field.sub(field.mul(up1, up1), field.mul(left, right));
        return field.div(num, up2).map_err(degenerate);
    }
    if up1 == 0 {
        let Some(w) = locate_window(canvas, m - 1, n, boundary)? else {
            return Ok(0);
        };
        let depth = m - w.top;
        if depth < w.side {
            return Ok(0);
        }
        if !w.exact {
            return Err(FrameError::WindowTooLarge { row: w.top, col: n });
        }
        if depth > w.side {
            return Err(FrameError::NotAWindow { row: m - 1, col: n });
        }
        let (m0, n0, l) = (w.top, w.left, w.side);
        let k = n0 + l - n;
        let a = canvas.need(m0 - 1, n0 - 1 + k)?;
        let b = canvas.need(m0 - 1 + k, n0 - 1)?;
        let c = canvas.need(m0 + l - k, n0 + l)?;
        let sign = field.sign((l * k) as usize);
        return field
            .div(field.mul(sign, field.mul(b, c)), a)
            .map_err(degenerate);
    }
    // (m - 2, n) is on the bottom row of a window, (m - 1, n) below it.
    let w = match locate_window(canvas, m - 2, n, boundary)? {
        Some(w) => w,
        None => return Err(FrameError::NotAWindow { row: m - 2, col: n }),
    };
    if !w.exact {
        return Err(FrameError::WindowTooLarge { row: w.top, col: n });
    }
    let (m0, n0, l) = (w.top, w.left, w.side);
    if m0 + l + 1 != m {
        return Err(FrameError::NotAWindow { row: m - 2, col: n });
    }
    let k = n0 + l - n;
    let at = |row: i64, col: i64| canvas.need(row, col);
    let a_pos = |j: i64| (m0 - 1, n0 - 1 + j);
    let b_pos = |j: i64| (m0 - 1 + j, n0 - 1);
    let c_pos = |j: i64| (m0 + l - j, n0 + l);
    let d_pos = |j: i64| (m0 + l, n0 + l - j);
    let ratio = |pos: &dyn Fn(i64) -> (i64, i64)| -> Result<Residue, FrameError> {
        let (r1, c1) = pos(k);
        let (r0, c0) = pos(k - 1);
        field.div(at(r1, c1)?, at(r0, c0)?).map_err(degenerate)
    };
    let p = ratio(&a_pos)?;
    let q = ratio(&b_pos)?;
    let r = ratio(&c_pos)?;
    let s = ratio(&d_pos)?;
    let (ar, ac) = a_pos(k);
    let (br, bc) = b_pos(k);
    let (cr, cc) = c_pos(k);
    let a = at(ar, ac)?;
    let b = at(br, bc)?;
    let c = at(cr, cc)?;
    let d = up1;
    let e = at(m0 - 2, n0 - 1 + k)?;
    let f = at(m0 - 1 + k, n0 - 2)?;
    let g = at(m0 + l - k, n0 + l + 1)?;
    let sign = field.sign(k as usize);
    let div = |x: Residue, y: Residue| field.div(x, y).map_err(degenerate);
    // Q E/A + (-1)^k P F/B = R H/D + (-1)^k S G/C
    let lhs = field.add(
        div(field.mul(q, e), a)?,
        field.mul(sign, div(field.mul(p, f), b)?),
    );
    let rhs = field.sub(lhs, field.mul(sign, div(field.mul(s, g), c)?));
    div(field.mul(rhs, d), r)
}
